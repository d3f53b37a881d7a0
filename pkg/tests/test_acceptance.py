"""Acceptance gate: one test per shipped guarantee.

Run with ``pytest -v tests/test_acceptance.py`` to get a pass/fail line
per criterion; each test also prints the measured quantities it checked
(visible with ``-s`` or on failure).  This module is the slow end of the
suite; the approximation guarantee alone solves 100 ten-player games at
full resolution.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from treegames import (
    NoEquilibriumError,
    TauGrid,
    approximate_tree_nash,
    compute_tau,
    is_eps_nash,
    solve_sparse,
)
from treegames.approx import downstream_pass, enumerate_grid_equilibria
from treegames.exact import (
    DeltaForm,
    RationalInterval,
    exact_downstream,
    exact_tree_nash,
    solve_w_set,
)
from treegames.game import make_game, regret
from treegames.generators import (
    generate_random_cycle_game,
    generate_random_rational_tree_game,
    generate_random_tree_game,
)
from treegames.oracle import (
    brute_force_equilibria,
    check_product_bounds,
    verify_table_entry,
)
from treegames.orientation import orient, pick_root
from treegames.select import Objective, objective_value, select_equilibrium


def regret_slack(k: int, tau: float) -> float:
    """Worst-case regret added by snapping a profile to a grid of step tau."""
    return 2 ** (k + 2) * max(k * math.log2(k), 1.0) * tau


def small_tree_cases():
    """The shared n<=4, m<=8 instance set for enumeration-scale checks."""
    cases = []
    for seed in range(50):
        n = 2 + seed % 3
        m = 2 + seed % 7
        eps = (0.1, 0.25, 0.5)[seed % 3]
        g = generate_random_tree_game(n, 3, seed)
        cases.append((g, TauGrid(m), eps))
    return cases


def test_criterion_01_eps_guarantee_on_random_trees():
    eps, runs = 0.1, 100
    worst_regret = 0.0
    slowest = 0.0
    for seed in range(runs):
        g = generate_random_tree_game(10, 3, seed)
        start = time.perf_counter()
        profile, cert = approximate_tree_nash(g, eps)
        elapsed = time.perf_counter() - start
        r = max(float(regret(g, i, profile)) for i in range(g.n))
        assert r <= eps, f"seed {seed}: regret {r} exceeds {eps}"
        assert elapsed <= 60.0, f"seed {seed}: run took {elapsed:.1f}s"
        assert cert.guaranteed
        worst_regret = max(worst_regret, r)
        slowest = max(slowest, elapsed)
    print(f"criterion 1: {runs} games, worst regret {worst_regret:.4f} "
          f"<= {eps}, slowest run {slowest:.2f}s")


def test_criterion_02_exact_engine_zero_regret():
    runs = 50
    slowest = 0.0
    for seed in range(runs):
        n = 2 + seed % 7
        g = generate_random_rational_tree_game(n, 3, seed)
        start = time.perf_counter()
        profile = exact_tree_nash(g)
        elapsed = time.perf_counter() - start
        assert all(isinstance(x, Fraction) for x in profile)
        assert all(regret(g, i, profile) == 0 for i in range(g.n)), seed
        assert elapsed <= 120.0, f"seed {seed}: run took {elapsed:.1f}s"
        slowest = max(slowest, elapsed)
    print(f"criterion 2: {runs} rational games, all regrets exactly 0, "
          f"slowest run {slowest:.2f}s")


def test_criterion_03_enumeration_matches_brute_force():
    total = 0
    for g, grid, eps in small_tree_cases():
        ori = orient(g, pick_root(g))
        tables = downstream_pass(g, ori, grid, eps, retain_witnesses=True)
        enum = enumerate_grid_equilibria(g, ori, tables)
        brute = brute_force_equilibria(g, grid, eps)
        assert set(enum) == set(brute)
        assert enum == sorted(enum)
        total += len(brute)
    print(f"criterion 3: 50 cases agree exactly with brute force "
          f"({total} equilibria)")


def depth_two_tree(seed: int):
    rng = random.Random(seed)
    edges = []
    nxt = 1
    for _ in range(rng.randint(1, 2)):
        child = nxt
        nxt += 1
        edges.append((0, child))
        for _ in range(rng.randint(0, 2)):
            edges.append((child, nxt))
            nxt += 1
    return make_game(nxt, edges, lambda i, a: rng.uniform(-1.0, 1.0))


def test_criterion_04_table_bits_match_oracle():
    grid, eps_local = TauGrid(4), 0.25
    checked = 0
    for seed in range(20):
        g = depth_two_tree(seed)
        ori = orient(g, 0)
        tables = downstream_pass(g, ori, grid, eps_local)
        for v in range(g.n):
            if v == ori.root:
                for u in range(grid.m + 1):
                    want = verify_table_entry(g, ori, v, None, u, grid, eps_local)
                    assert bool(tables.root.bits[u]) == want, (seed, v, u)
                    checked += 1
            else:
                bits = tables.edges[v].bits
                for w in range(grid.m + 1):
                    for u in range(grid.m + 1):
                        want = verify_table_entry(g, ori, v, w, u, grid, eps_local)
                        assert bool(bits[w, u]) == want, (seed, v, w, u)
                        checked += 1
    print(f"criterion 4: {checked} table bits match the exhaustive oracle")


def test_criterion_05_rounding_bounds_hold():
    for k in (2, 4, 8):
        report = check_product_bounds(k, trials=10_000, seed=k)
        assert report.violations == 0, f"k={k}: {report}"
    worst_ratio = 0.0
    for seed in range(50):
        n = 2 + seed % 7
        g = generate_random_rational_tree_game(n, 3, 1000 + seed)
        profile = exact_tree_nash(g)
        k = g.max_neighborhood_size
        grid = compute_tau(k, 0.1)
        rounded = [grid.value(grid.nearest_index(float(x))) for x in profile]
        bound = regret_slack(k, grid.tau)
        r = max(float(regret(g, i, rounded)) for i in range(g.n))
        assert r <= bound, (seed, r, bound)
        worst_ratio = max(worst_ratio, r / bound)
    print("criterion 5: 3x10^4 bound trials clean; 50 rounded exact "
          f"equilibria within slack (worst ratio {worst_ratio:.3f})")


def test_criterion_06_interval_and_rectangle_structure():
    rng = random.Random(0)
    kinds = ("interior", "v_zero", "v_one")
    calls = 10_000
    for t in range(calls):
        nvars = rng.randint(1, 3)
        corners = tuple(
            Fraction(rng.randint(-16, 16), 16) for _ in range(2 ** nvars)
        )
        form = DeltaForm(owner=0, variables=tuple(range(nvars)), corners=corners)
        box = []
        for _ in range(nvars - 1):
            a = Fraction(rng.randint(0, 8), 8)
            b = Fraction(rng.randint(0, 8), 8)
            box.append(RationalInterval(min(a, b), max(a, b)))
        out = solve_w_set(form, box, kinds[t % 3])
        assert len(out) <= 2, (t, out)
        for x, y in zip(out, out[1:]):
            assert x.hi < y.lo, (t, out)

    worst = 0.0
    for seed in range(50):
        n = 2 + seed % 7
        g = generate_random_rational_tree_game(n, 3, seed)
        ori = orient(g, pick_root(g))
        ext = exact_downstream(g, ori)

        def cap(v):
            members = ori.upstream(v)
            a = sum(1 for u in members if ori.parents[u])
            b = sum(1 for u in members if not ori.parents[u])
            return 2 ** a * 3 ** b

        for v, table in ext.tables.items():
            rc = table.rectangle_count()
            assert rc <= cap(v), (seed, v, rc, cap(v))
            if not ori.parents[v]:
                assert rc <= 3, (seed, v, rc)
            worst = max(worst, rc / cap(v))
        assert len(ext.root_set) <= cap(ori.root), seed
    print(f"criterion 6: {calls} interval solves well-formed; rectangle "
          f"caps hold on 50 trees (tightest fill {worst:.2f})")


def test_criterion_07_default_grid_always_admits_a_profile():
    runs = 0
    for seed in range(150):
        n = 4 + seed % 5
        g = generate_random_tree_game(n, 2, seed)
        eps = 0.5
        k = g.max_neighborhood_size
        grid = compute_tau(k, eps)
        ori = orient(g, pick_root(g))
        tables = downstream_pass(g, ori, grid, regret_slack(k, grid.tau))
        assert tables.root.bits.any(), seed
        runs += 1
    for seed in range(50):
        g = generate_random_tree_game(6, 3, 10_000 + seed)
        eps = 1.0
        k = g.max_neighborhood_size
        grid = compute_tau(k, eps)
        ori = orient(g, pick_root(g))
        tables = downstream_pass(g, ori, grid, regret_slack(k, grid.tau))
        assert tables.root.bits.any(), seed
        runs += 1
    print(f"criterion 7: root table non-empty on all {runs} games")


def test_criterion_08_selection_matches_enumeration_argmax():
    objectives = ("social", "welfare", "player:0")
    compared = skipped = 0
    for g, grid, eps in small_tree_cases():
        ori = orient(g, pick_root(g))
        tables = downstream_pass(g, ori, grid, eps, retain_witnesses=True)
        eqs = enumerate_grid_equilibria(g, ori, tables)
        for name in objectives:
            if not eqs:
                with pytest.raises(NoEquilibriumError):
                    select_equilibrium(g, eps, name, grid=grid)
                skipped += 1
                continue
            obj = Objective.parse(name)
            best = max(objective_value(g, p, obj) for p in eqs)
            res = select_equilibrium(g, eps, name, grid=grid)
            assert tuple(res.profile) in set(eqs), name
            assert abs(res.value - best) <= 1e-9, (name, res.value, best)
            compared += 1
    print(f"criterion 8: {compared} selections equal the enumeration "
          f"argmax within 1e-9 ({skipped} empty cases raise)")


TWO_TRIANGLES = ((0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5))


def test_criterion_09_sparse_solver_on_cyclic_graphs():
    eps = 0.1
    for seed in range(20):
        g = generate_random_cycle_game(4, seed)
        profile, cert = solve_sparse(g, eps)
        assert is_eps_nash(g, profile, eps), ("cycle", seed)
        assert cert["engine"] == "cluster"
    for seed in range(20):
        rng = random.Random(seed)
        g = make_game(6, TWO_TRIANGLES, lambda i, a: rng.uniform(-1.0, 1.0))
        profile, cert = solve_sparse(g, eps)
        assert is_eps_nash(g, profile, eps), ("triangles", seed)
        assert cert["engine"] == "cluster"
    print("criterion 9: 40 cyclic games solved within eps=0.1 on the "
          "original game")


def test_criterion_10_exact_region_covered_by_grid_tables():
    cells = 0
    for seed in range(10):
        n = 3 + seed % 6
        g = generate_random_rational_tree_game(n, 3, seed)
        k = g.max_neighborhood_size
        grid = compute_tau(k, 0.5)
        m = grid.m
        ori = orient(g, pick_root(g))
        tables = downstream_pass(g, ori, grid, regret_slack(k, grid.tau))
        ext = exact_downstream(g, ori)

        def span(lo, hi):
            return math.ceil(lo * m), math.floor(hi * m)

        for v, strip_table in ext.tables.items():
            bits = tables.edges[v].bits
            for s in strip_table.strips:
                w0, w1 = span(s.lo, s.hi)
                for iv in s.intervals:
                    u0, u1 = span(iv.lo, iv.hi)
                    if w0 > w1 or u0 > u1:
                        continue
                    window = bits[w0:w1 + 1, u0:u1 + 1]
                    assert window.all(), (seed, v)
                    cells += window.size
        for iv in ext.root_set:
            u0, u1 = span(iv.lo, iv.hi)
            if u0 <= u1:
                window = tables.root.bits[u0:u1 + 1]
                assert window.all(), seed
                cells += window.size
    print(f"criterion 10: every exact cell is grid-admissible "
          f"({cells} cells over 10 trees)")
