"""JSON layout files: {"n": int, "coords": [[x, y], ...]}.

Files written by `sweep` and `layout` may carry the run's metrics and
configuration alongside the coordinates; readers ignore them.
"""

import json
import math
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from spxlayout.errors import LayoutFileError
from spxlayout.metrics import MetricsReport
from spxlayout.stress import Layout


class LayoutFile(BaseModel):
    n: int = Field(ge=1)
    coords: list[tuple[float, float]]
    metrics: MetricsReport | None = None
    config: dict[str, Any] | None = None

    @model_validator(mode="after")
    def _check_coords(self) -> "LayoutFile":
        if len(self.coords) != self.n:
            raise ValueError(f"coords has {len(self.coords)} rows, n is {self.n}")
        for i, (x, y) in enumerate(self.coords):
            if not (math.isfinite(x) and math.isfinite(y)):
                raise ValueError(f"coords[{i}] is not finite")
        return self

    @classmethod
    def from_layout(
        cls,
        layout: Layout,
        metrics: MetricsReport | None = None,
        config: dict[str, Any] | None = None,
    ) -> "LayoutFile":
        coords = [(float(x), float(y)) for x, y in np.asarray(layout, dtype=np.float64)]
        return cls(n=len(coords), coords=coords, metrics=metrics, config=config)

    def to_layout(self) -> Layout:
        return np.array(self.coords, dtype=np.float64).reshape(self.n, 2)


def parse_layout(text: str, n: int | None = None) -> Layout:
    """Coordinates from layout JSON text.

    Raises:
        LayoutFileError: If the JSON is malformed or `n` does not match.
    """
    try:
        document = LayoutFile.model_validate_json(text)
    except ValidationError as e:
        raise LayoutFileError(f"invalid layout file: {e}") from e
    if n is not None and document.n != n:
        raise LayoutFileError(f"layout has {document.n} vertices, graph has {n}")
    return document.to_layout()


def read_layout(path: Path, n: int | None = None) -> Layout:
    return parse_layout(path.read_text(encoding="utf-8"), n=n)


def dump_layout(
    layout: Layout,
    metrics: MetricsReport | None = None,
    config: dict[str, Any] | None = None,
) -> str:
    document = LayoutFile.from_layout(layout, metrics=metrics, config=config)
    return json.dumps(document.model_dump(mode="json", exclude_none=True), indent=2) + "\n"


def write_layout(
    path: Path,
    layout: Layout,
    metrics: MetricsReport | None = None,
    config: dict[str, Any] | None = None,
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_layout(layout, metrics=metrics, config=config), encoding="utf-8")
