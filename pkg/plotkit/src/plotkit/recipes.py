"""Figure recipes and CSV loading for the rabiholo outputs.

A recipe pins everything that determines the image: input CSV path(s),
figure kind, style options, output path.  Loading preserves row order
and rejects missing columns by name, so schema drift in the producing
package surfaces immediately.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

KINDS = ("spectrum", "rabi_panels", "fidelity", "inversion")

#: columns each kind must find in its CSV (prefix match for numbered ones)
REQUIRED = {
    "spectrum": ("g", "E0", "p0"),
    "rabi_panels": ("t", "P0"),
    "fidelity": ("beta", "mean_fidelity"),
    "inversion": ("t", "P_10", "P_01"),
}


@dataclass(frozen=True)
class Style:
    """Presentation knobs; defaults follow the solid-even / dashed-odd rule."""

    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None
    even_color: str = "tab:blue"
    even_linestyle: str = "-"
    odd_color: str = "tab:red"
    odd_linestyle: str = "--"
    dpi: int = 150


@dataclass(frozen=True)
class FigureRecipe:
    """Inputs, kind, style, and output path of one figure."""

    kind: str
    inputs: tuple[Path, ...]
    output: Path
    style: Style = field(default_factory=Style)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; expected one of {KINDS}")
        if not self.inputs:
            raise ValueError("recipe needs at least one input CSV")


@dataclass(frozen=True)
class Table:
    """One loaded CSV: ordered headers and per-column arrays."""

    path: Path
    header: tuple[str, ...]
    columns: dict

    def numeric(self, name: str) -> np.ndarray:
        return self.columns[name]

    def require(self, names) -> None:
        missing = [n for n in names if n not in self.columns]
        if missing:
            raise ValueError(
                f"{self.path}: missing column(s) {', '.join(missing)} "
                f"(found {', '.join(self.header)})"
            )


def load_table(path) -> Table:
    """Read a CSV preserving row order; numeric columns become float arrays."""
    path = Path(path)
    with open(path, newline="") as handle:
        rows = list(csv.reader(handle))
    rows = [r for r in rows if r]
    if len(rows) < 2:
        raise ValueError(f"{path}: no data rows")
    header = tuple(rows[0])
    raw = {name: [r[i] for r in rows[1:]] for i, name in enumerate(header)}
    columns = {}
    for name, values in raw.items():
        try:
            columns[name] = np.array([float(v) for v in values])
        except ValueError:
            columns[name] = np.array(values, dtype=object)
    return Table(path=path, header=header, columns=columns)
