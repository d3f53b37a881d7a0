"""Raster output for the admissibility tables.

The games here are tiny coordination instances where the feasible sets
are easy to picture: the diagonal band for an edge, the full row at the
root when everything coordinates."""

from fractions import Fraction

import numpy as np
import pytest

from treegames import TauGrid, render_table, table_cells
from treegames.approx import downstream_pass
from treegames.exact import exact_downstream
from treegames.generators import edge_coordination_game, path_coordination_game
from treegames.orientation import orient
from treegames.render import APPROX_ONLY, EMPTY, EXACT, render_pgm, render_txt

M = 4


def build(game, root, eps_local=0.5, with_exact=True):
    ori = orient(game, root)
    tables = downstream_pass(game, ori, TauGrid(M), eps_local)
    exact = exact_downstream(game, ori) if with_exact else None
    return tables, exact


def test_cell_codes_and_shape_for_edge_vertex():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    cells = table_cells(tables, exact, 0)
    assert cells.shape == (M + 1, M + 1)
    assert cells.dtype == np.uint8
    assert set(np.unique(cells)) <= {EXACT, APPROX_ONLY, EMPTY}
    # both all-agree corners are exactly feasible: own=0/child=0 sits at
    # the bottom-left, own=1/child=1 at the top-right
    assert cells[M, 0] == EXACT
    assert cells[0, M] == EXACT


def test_rows_run_top_down_in_own_value():
    # pin the row flip against the raw bits: bits[w, v] lands at [m-v, w]
    g = edge_coordination_game()
    tables, _ = build(g, root=1, with_exact=False)
    bits = tables.edges[0].bits
    cells = table_cells(tables, None, 0)
    for w in range(M + 1):
        for v in range(M + 1):
            want = APPROX_ONLY if bits[w, v] else EMPTY
            assert cells[M - v, w] == want


def test_exact_takes_precedence_over_grid_bits():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    cells = table_cells(tables, exact, 0)
    assert EXACT in cells
    strip_table = exact.tables[0]
    for w in range(M + 1):
        for v in range(M + 1):
            in_exact = strip_table.contains(Fraction(w, M), Fraction(v, M))
            if in_exact:
                assert cells[M - v, w] == EXACT
            else:
                assert cells[M - v, w] != EXACT


def test_root_renders_single_row():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    cells = table_cells(tables, exact, 1)
    assert cells.shape == (1, M + 1)
    # coordination: 0, 1/2 and 1 extend to exact equilibria
    assert cells[0, 0] == EXACT
    assert cells[0, M] == EXACT


def test_without_exact_only_grey_and_background():
    g = path_coordination_game(3)
    tables, _ = build(g, root=2, with_exact=False)
    for v in range(3):
        cells = table_cells(tables, None, v)
        assert EXACT not in cells
        assert APPROX_ONLY in cells


def test_orientation_mismatch_rejected():
    g = path_coordination_game(3)
    ori_a = orient(g, 2)
    ori_b = orient(g, 0)
    tables = downstream_pass(g, ori_a, TauGrid(M), 0.5)
    exact = exact_downstream(g, ori_b)
    with pytest.raises(ValueError, match="orientation"):
        table_cells(tables, exact, 0)


def test_txt_layout():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    out = render_txt(tables, exact, 0)
    lines = out.splitlines()
    assert out.endswith("\n")
    assert [l[:2] for l in lines[:3]] == ["# ", "# ", "# "]
    rows = lines[3:]
    assert len(rows) == M + 1
    assert all(len(r) == M + 1 for r in rows)
    assert set("".join(rows)) <= {"#", "+", "."}
    # headers carry the vertex and the grid scale
    assert "vertex 0" in lines[0]
    assert f"m={M}" in lines[1]


def test_txt_root_is_one_line():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    lines = render_txt(tables, exact, 1).splitlines()
    assert "root" in lines[0]
    assert len(lines) == 4


def test_pgm_structure():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    out = render_pgm(tables, exact, 0)
    lines = out.splitlines()
    assert lines[0] == "P2"
    comments = [l for l in lines if l.startswith("#")]
    assert len(comments) == 3
    body = [l for l in lines[1:] if not l.startswith("#")]
    assert body[0] == f"{M + 1} {M + 1}"
    assert body[1] == "255"
    vals = " ".join(body[2:]).split()
    assert len(vals) == (M + 1) ** 2
    assert set(vals) <= {str(EXACT), str(APPROX_ONLY), str(EMPTY)}
    assert all(len(l) <= 70 for l in lines)


def test_pgm_wide_raster_wraps_lines():
    # 33 columns force the 17-value wrap to kick in
    g = edge_coordination_game()
    ori = orient(g, 1)
    tables = downstream_pass(g, ori, TauGrid(32), 0.5)
    out = render_pgm(tables, None, 0)
    lines = out.splitlines()
    assert all(len(l) <= 70 for l in lines)
    body = [l for l in lines[1:] if not l.startswith("#")]
    vals = " ".join(body[2:]).split()
    assert len(vals) == 33 * 33


def test_render_table_dispatch():
    g = edge_coordination_game()
    tables, exact = build(g, root=1)
    assert render_table(tables, exact, 0) == render_txt(tables, exact, 0)
    assert render_table(tables, exact, 0, fmt="pgm") == render_pgm(tables, exact, 0)
    with pytest.raises(ValueError, match="format"):
        render_table(tables, exact, 0, fmt="svg")
