"""Objective-optimal selection over admissible grid profiles."""

import pytest

from treegames import (
    NoEquilibriumError,
    Objective,
    TauGrid,
    downstream_pass,
    enumerate_grid_equilibria,
    expected_payoff,
    generate_random_tree_game,
    matching_pennies_game,
    max_regret,
    objective_value,
    orient,
    pick_root,
    select_equilibrium,
)


def test_objective_value_definitions():
    g = generate_random_tree_game(n=4, max_degree=3, seed=0)
    prof = (0.2, 0.7, 0.0, 1.0)
    pays = [float(expected_payoff(g, i, prof)) for i in range(4)]
    assert objective_value(g, prof, Objective.parse("social")) == pytest.approx(sum(pays))
    assert objective_value(g, prof, Objective.parse("welfare")) == pytest.approx(min(pays))
    for i in range(4):
        got = objective_value(g, prof, Objective.parse(f"player:{i}"))
        assert got == pytest.approx(pays[i])


def test_objective_parsing():
    assert Objective.parse("social").kind == "social"
    assert Objective.parse("player:3").target == 3
    assert Objective.parse("welfare").label() == "welfare"
    assert Objective.parse("player:3").label() == "player:3"
    with pytest.raises(ValueError):
        Objective.parse("fairness")
    with pytest.raises(ValueError):
        Objective(kind="player")
    with pytest.raises(ValueError):
        Objective(kind="social", target=1)


def test_select_matches_enumeration_argmax():
    for seed in range(8):
        g = generate_random_tree_game(n=4, max_degree=3, seed=seed)
        eps = 0.25
        grid = TauGrid(6)
        ori = orient(g, pick_root(g))
        ts = downstream_pass(g, ori, grid, eps, retain_witnesses=True)
        eqs = enumerate_grid_equilibria(g, ori, ts)
        assert eqs
        for name in ("social", "welfare", "player:0", "player:2"):
            obj = Objective.parse(name)
            res = select_equilibrium(g, eps, name, grid=grid)
            want = max(objective_value(g, p, obj) for p in eqs)
            assert res.value == pytest.approx(want, abs=1e-9), (seed, name)
            assert objective_value(g, res.profile, obj) == pytest.approx(res.value, abs=1e-9)
            assert res.profile in set(eqs)


def test_select_result_shape():
    g = matching_pennies_game()
    res = select_equilibrium(g, 0.2, "social", grid=TauGrid(8))
    assert res.profile == (0.5, 0.5)
    assert res.value == pytest.approx(0.0)  # zero-sum
    cert = res.certificate
    assert cert["objective"] == "social"
    assert cert["grid_m"] == 8
    assert not cert["guaranteed"]
    assert cert["max_regret"] <= 0.2
    assert cert["per_payoff_slack"] > 0


def test_select_accepts_objective_instances():
    g = matching_pennies_game()
    a = select_equilibrium(g, 0.2, Objective.parse("player:1"), grid=TauGrid(4))
    b = select_equilibrium(g, 0.2, "player:1", grid=TauGrid(4))
    assert a.profile == b.profile and a.value == b.value


def test_select_is_deterministic():
    g = generate_random_tree_game(n=6, max_degree=3, seed=9)
    a = select_equilibrium(g, 0.4, "welfare", grid=TauGrid(5))
    b = select_equilibrium(g, 0.4, "welfare", grid=TauGrid(5))
    assert a.profile == b.profile


def test_select_rejects_bad_inputs():
    g = matching_pennies_game()
    with pytest.raises(IndexError):
        select_equilibrium(g, 0.2, "player:5", grid=TauGrid(4))
    with pytest.raises(ValueError):
        select_equilibrium(g, 0.0, "social", grid=TauGrid(4))
    with pytest.raises(NoEquilibriumError):
        select_equilibrium(g, 0.05, "social", grid=TauGrid(1))
