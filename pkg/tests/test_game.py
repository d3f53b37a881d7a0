"""Core game representation: payoff lookup, expected payoff, regret."""

import itertools
from fractions import Fraction

import pytest

from treegames import (
    GameValidationError,
    GraphicalGame,
    LocalMatrix,
    battle_of_sexes_game,
    expected_payoff,
    generate_random_tree_game,
    is_eps_nash,
    is_tree,
    make_game,
    matching_pennies_game,
    max_regret,
    regret,
    validate,
)
from treegames.game import is_connected, payoff_corner_tables, require_valid


def enumerate_expected(game, i, profile):
    """Sum over the joint pure actions of the closed neighborhood.

    Independent of the library's affine short-cuts: walks every corner and
    weights it by the product of action probabilities.
    """
    mat = game.matrices[i]
    hood = mat.neighborhood
    total = 0.0
    for acts in itertools.product((0, 1), repeat=len(hood)):
        w = 1.0
        for j, a in zip(hood, acts):
            pj = float(profile[j])
            w *= pj if a == 0 else 1.0 - pj
        total += w * float(mat.payoff(acts))
    return total


def enumerate_regret(game, i, profile):
    cur = enumerate_expected(game, i, profile)
    best = cur
    for a in (0.0, 1.0):
        forced = list(profile)
        forced[i] = 1.0 - a  # probability of action 0
        best = max(best, enumerate_expected(game, i, forced))
    return best - cur


def test_flat_index_owner_most_significant():
    mat = LocalMatrix(owner=1, neighborhood=(1, 0, 2), payoffs=tuple(range(8)))
    # owner bit first, then neighbors 0 and 2
    assert mat.flat_index((0, 0, 0)) == 0
    assert mat.flat_index((1, 0, 0)) == 4
    assert mat.flat_index((0, 1, 0)) == 2
    assert mat.flat_index((0, 0, 1)) == 1
    assert mat.payoff((1, 1, 1)) == 7


def test_make_game_passes_neighborhood_order():
    seen = {}

    def pay(i, acts):
        seen.setdefault(i, []).append(acts)
        return 0

    g = make_game(3, [(0, 1), (1, 2)], pay)
    assert g.matrices[1].neighborhood == (1, 0, 2)
    assert len(seen[1]) == 8
    assert g.neighbors(1) == (0, 2)
    assert g.closed_neighborhood(0) == (0, 1)
    assert g.degree(1) == 2
    assert g.max_neighborhood_size == 3


def test_expected_payoff_matches_enumeration():
    for seed in range(10):
        g = generate_random_tree_game(n=6, max_degree=3, seed=seed)
        profile = [((seed + 3 * i) % 7) / 6 for i in range(6)]
        for i in range(6):
            assert expected_payoff(g, i, profile) == pytest.approx(
                enumerate_expected(g, i, profile), abs=1e-12
            )


def test_regret_matches_enumeration():
    for seed in range(10):
        g = generate_random_tree_game(n=5, max_degree=3, seed=100 + seed)
        profile = [((seed + i) % 5) / 4 for i in range(5)]
        for i in range(5):
            assert regret(g, i, profile) == pytest.approx(
                enumerate_regret(g, i, profile), abs=1e-12
            )
            assert regret(g, i, profile) >= 0


def test_matching_pennies_uniform_is_equilibrium():
    g = matching_pennies_game()
    assert max_regret(g, (0.5, 0.5)) == pytest.approx(0.0, abs=1e-12)
    assert is_eps_nash(g, (0.5, 0.5), 0.0)
    # any pure profile leaves one player with regret 2
    assert max_regret(g, (1.0, 1.0)) == pytest.approx(2.0)
    assert not is_eps_nash(g, (1.0, 1.0), 1.9)


def test_battle_of_sexes_pure_equilibria():
    g = battle_of_sexes_game()
    assert is_eps_nash(g, (1.0, 1.0), 0.0)
    assert is_eps_nash(g, (0.0, 0.0), 0.0)
    assert not is_eps_nash(g, (1.0, 0.0), 0.4)


def test_is_eps_nash_boundary_inclusive():
    g = matching_pennies_game()
    r = max_regret(g, (0.75, 0.5))
    assert is_eps_nash(g, (0.75, 0.5), r)
    assert not is_eps_nash(g, (0.75, 0.5), r - 1e-9)


def test_rational_profiles_stay_rational():
    g = make_game(2, [(0, 1)], lambda i, a: Fraction(1, 3) if a[0] == a[1] else Fraction(-1, 4))
    p = (Fraction(1, 7), Fraction(2, 5))
    v = expected_payoff(g, 0, p)
    assert isinstance(v, Fraction)
    assert isinstance(regret(g, 1, p), Fraction)


def test_profile_validation():
    g = matching_pennies_game()
    with pytest.raises(ValueError):
        expected_payoff(g, 0, (0.5,))
    with pytest.raises(ValueError):
        regret(g, 0, (0.5, 1.5))
    with pytest.raises(IndexError):
        expected_payoff(g, 2, (0.5, 0.5))


def test_validate_catches_structural_problems():
    ok = matching_pennies_game()
    assert validate(ok) == []

    loop = GraphicalGame(n=2, edges=frozenset({(0, 0)}), matrices=ok.matrices)
    assert any("self-loop" in v for v in validate(loop))

    out_of_range = GraphicalGame(n=2, edges=frozenset({(0, 5)}), matrices=ok.matrices)
    assert any("outside" in v for v in validate(out_of_range))

    bad_pay = make_game(2, [(0, 1)], lambda i, a: 2.0)
    assert any("outside" in v for v in validate(bad_pay))
    with pytest.raises(GameValidationError):
        require_valid(bad_pay)

    wrong_owner = GraphicalGame(
        n=2, edges=ok.edges, matrices=(ok.matrices[1], ok.matrices[0])
    )
    assert validate(wrong_owner)


def test_payoff_corner_tables_reorders_axes():
    g = generate_random_tree_game(n=4, max_degree=3, seed=7)
    star = [i for i in range(4) if g.degree(i) >= 2][0]
    nbrs = g.neighbors(star)
    rev = tuple(reversed(nbrs))
    pay0, pay1 = payoff_corner_tables(g, star, rev)
    mat = g.matrices[star]
    r = len(nbrs)
    for idx in range(2**r):
        acts = {var: (idx >> (r - 1 - t)) & 1 for t, var in enumerate(rev)}
        ordered = tuple(acts[j] for j in nbrs)
        assert pay0[idx] == mat.payoff((0, *ordered))
        assert pay1[idx] == mat.payoff((1, *ordered))
    with pytest.raises(ValueError):
        payoff_corner_tables(g, star, nbrs[:-1])


def test_is_tree_and_connected():
    path = make_game(3, [(0, 1), (1, 2)], lambda i, a: 0)
    assert is_tree(path)
    assert is_connected(path)

    cycle = make_game(3, [(0, 1), (1, 2), (0, 2)], lambda i, a: 0)
    assert not is_tree(cycle)
    assert is_connected(cycle)

    forest = make_game(4, [(0, 1), (2, 3)], lambda i, a: 0)
    assert not is_tree(forest)
    assert not is_connected(forest)

    single = make_game(1, [], lambda i, a: 0)
    assert is_tree(single)
