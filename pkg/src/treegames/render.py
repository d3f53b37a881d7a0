"""Visual dumps of admissibility tables.

A vertex's table is drawn as a (child strategy, own strategy) raster:
columns are the child value ascending left to right, rows are the own
value descending top to bottom, so the origin sits at the bottom left.
The root has no child axis and renders as a single row.  When exact
tables are supplied the raster overlays both engines: cells in the exact
feasible set are black / ``#``, cells only the grid tables admit are grey
/ ``+``, everything else is background.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from .approx import TableSet
from .exact import ExactTables

EXACT = 0
APPROX_ONLY = 127
EMPTY = 255

_CHARS = {EXACT: "#", APPROX_ONLY: "+", EMPTY: "."}


def table_cells(tables: TableSet, exact: Optional[ExactTables], vertex: int) -> np.ndarray:
    """Cell codes for one vertex, shape (m+1, m+1), or (1, m+1) at the root."""
    orientation = tables.orientation
    if exact is not None and exact.orientation != orientation:
        raise ValueError("exact tables were built with a different orientation")
    m = tables.grid.m
    if vertex == orientation.root:
        bits = tables.root.bits
        out = np.full((1, m + 1), EMPTY, dtype=np.uint8)
        root_set = exact.root_set if exact is not None else ()
        for vi in range(m + 1):
            if exact is not None and any(
                iv.contains(Fraction(vi, m)) for iv in root_set
            ):
                out[0, vi] = EXACT
            elif bits[vi]:
                out[0, vi] = APPROX_ONLY
        return out
    bits = tables.edges[vertex].bits
    out = np.full((m + 1, m + 1), EMPTY, dtype=np.uint8)
    strip_table = exact.tables[vertex] if exact is not None else None
    for wi in range(m + 1):
        w = Fraction(wi, m)
        for vi in range(m + 1):
            if strip_table is not None and strip_table.contains(w, Fraction(vi, m)):
                code = EXACT
            elif bits[wi, vi]:
                code = APPROX_ONLY
            else:
                continue
            # row 0 is own value 1, so high own values sit at the top
            out[m - vi, wi] = code
    return out


def _header(tables: TableSet, exact: Optional[ExactTables], vertex: int) -> list[str]:
    engines = "grid+exact" if exact is not None else "grid"
    lines = [
        f"vertex {vertex} ({'root' if vertex == tables.orientation.root else 'edge to ' + str(tables.orientation.child[vertex])})",
        f"m={tables.grid.m} eps_local={tables.eps_local} engines={engines}",
        "cols: child value ascending; rows: own value descending",
    ]
    return lines


def render_txt(tables: TableSet, exact: Optional[ExactTables], vertex: int) -> str:
    cells = table_cells(tables, exact, vertex)
    lines = [f"# {h}" for h in _header(tables, exact, vertex)]
    for row in cells:
        lines.append("".join(_CHARS[int(c)] for c in row))
    return "\n".join(lines) + "\n"


def render_pgm(tables: TableSet, exact: Optional[ExactTables], vertex: int) -> str:
    """Plain-text (P2) PGM; dark = exact, grey = grid-only, white = empty."""
    cells = table_cells(tables, exact, vertex)
    h, w = cells.shape
    lines = ["P2"]
    lines.extend(f"# {hline}" for hline in _header(tables, exact, vertex))
    lines.append(f"{w} {h}")
    lines.append("255")
    for row in cells:
        vals = [str(int(c)) for c in row]
        # keep raster lines within the 70-character limit of the format
        for start in range(0, len(vals), 17):
            lines.append(" ".join(vals[start:start + 17]))
    return "\n".join(lines) + "\n"


def render_table(tables: TableSet, exact: Optional[ExactTables], vertex: int,
                 fmt: str = "txt") -> str:
    if fmt == "txt":
        return render_txt(tables, exact, vertex)
    if fmt == "pgm":
        return render_pgm(tables, exact, vertex)
    raise ValueError(f"unknown render format {fmt!r}")
