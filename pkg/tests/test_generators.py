"""Seeded game generators."""

from fractions import Fraction

from treegames import (
    generate_random_connected_game,
    generate_random_cycle_game,
    generate_random_rational_tree_game,
    generate_random_tree_game,
    is_tree,
    validate,
)
from treegames.game import is_connected


def test_tree_generator_shape_and_determinism():
    for seed in range(25):
        g = generate_random_tree_game(n=9, max_degree=3, seed=seed)
        assert g.n == 9
        assert is_tree(g)
        assert validate(g) == []
        assert all(g.degree(i) <= 3 for i in range(g.n))
        again = generate_random_tree_game(n=9, max_degree=3, seed=seed)
        assert again.edges == g.edges
        assert again.matrices == g.matrices


def test_different_seeds_differ():
    a = generate_random_tree_game(n=8, max_degree=3, seed=0)
    b = generate_random_tree_game(n=8, max_degree=3, seed=1)
    assert a.edges != b.edges or a.matrices != b.matrices


def test_payoffs_within_unit_bound():
    g = generate_random_tree_game(n=10, max_degree=3, seed=3)
    for mat in g.matrices:
        assert all(-1.0 <= v <= 1.0 for v in mat.payoffs)


def test_rational_generator_yields_fractions():
    g = generate_random_rational_tree_game(n=7, max_degree=3, seed=11, denominator=64)
    assert is_tree(g)
    for mat in g.matrices:
        for v in mat.payoffs:
            assert isinstance(v, Fraction)
            assert v.denominator <= 64
            assert -1 <= v <= 1


def test_cycle_generator():
    g = generate_random_cycle_game(n=5, seed=2)
    assert not is_tree(g)
    assert is_connected(g)
    assert all(g.degree(i) == 2 for i in range(5))
    assert validate(g) == []


def test_connected_generator_adds_extra_edges():
    g = generate_random_connected_game(n=8, max_degree=4, seed=5, extra_edges=2)
    assert is_connected(g)
    assert not is_tree(g)
    assert len(g.edges) > g.n - 1
    assert validate(g) == []


def test_degree_cap_binds_on_paths():
    g = generate_random_tree_game(n=12, max_degree=2, seed=9)
    assert is_tree(g)
    assert all(g.degree(i) <= 2 for i in range(12))
