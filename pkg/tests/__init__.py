"""Tests for spxlayout."""
