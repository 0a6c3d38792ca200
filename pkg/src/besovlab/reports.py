"""Tabular experiment reports with deterministic CSV serialization.

Every scan produces an ExperimentReport: fixed column names, rows sorted by
their leading parameter fields, a per-row provenance label, and domain
metadata repeated in leading columns so each CSV is self-contained.  Floats
are written with ``repr`` (shortest round-trip form), so identical inputs
produce byte-identical files: comma separated, ``.`` decimal, LF endings,
UTF-8, and no field ever needs quoting.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._version import __version__
from .domain import Grid

DOMAIN_COLUMNS = ("domain", "resolution", "spacing")

# provenance vocabulary used across all reports
MEASURED = "measured"
SKIPPED = "skipped"
DIAGNOSTIC = "diagnostic"
NOT_REPRODUCIBLE = "not-reproducible"


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def domain_meta(grid: Grid) -> tuple[str, str, str]:
    return (grid.spec.shape, grid.resolution_label(), repr(max(grid.h)))


@dataclass
class ExperimentReport:
    """One experiment's tabular results plus identifying metadata."""

    name: str
    domain: tuple[str, str, str]
    columns: tuple[str, ...]
    rows: list[tuple] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    version: str = __version__

    def add(self, *row) -> None:
        if len(row) != len(self.columns):
            raise ValueError(f"report {self.name}: row has {len(row)} cells, "
                             f"expected {len(self.columns)}")
        self.rows.append(tuple(row))

    def sort(self, key=None) -> None:
        """Sort rows by the given key, default: formatted leading cells."""
        if key is None:
            key = lambda row: tuple(format_cell(c) for c in row)
        self.rows.sort(key=key)

    @property
    def header(self) -> tuple[str, ...]:
        return DOMAIN_COLUMNS + self.columns

    def csv_text(self) -> str:
        lines = [",".join(self.header)]
        prefix = list(self.domain)
        for row in self.rows:
            lines.append(",".join(prefix + [format_cell(c) for c in row]))
        return "\n".join(lines) + "\n"

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.csv_text())

    def schema(self) -> dict:
        return {
            "columns": list(self.header),
            "metadata": dict(self.metadata),
            "version": self.version,
        }
