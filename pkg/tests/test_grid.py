"""Grid resolution selection."""

import math

import pytest

from treegames import TauGrid, compute_tau


def reference_resolution(k, eps):
    """Smallest m such that 1/m meets both spacing bounds, by linear scan."""
    klogk = max(k * math.log2(k), 1.0) if k > 1 else 1.0
    cap_log = max(math.log2(k / 2), 1.0)
    bound = min(eps / (2 ** (k + 2) * klogk), 2.0 / (k * cap_log**2))
    m = 1
    while 1.0 / m > bound:
        m += 1
    return m


def test_frozen_resolutions():
    # pinned values; a change here means the guarantee constants moved
    assert compute_tau(2, 0.1).m == 320
    assert compute_tau(3, 0.1).m == 1522
    assert compute_tau(1, 1.0).m == 8
    assert compute_tau(4, 0.1).m == 5120


def test_resolution_matches_linear_scan():
    for k in (1, 2, 3, 4, 5):
        for eps in (0.05, 0.1, 0.5, 1.0, 2.0, 4.0):
            assert compute_tau(k, eps).m == reference_resolution(k, eps)


def test_resolution_monotone():
    # finer accuracy or bigger neighborhoods never coarsen the grid
    for k in (1, 2, 3, 4):
        assert compute_tau(k, 0.05).m >= compute_tau(k, 0.1).m
        assert compute_tau(k, 0.1).m >= compute_tau(k, 1.0).m
    for eps in (0.1, 0.5):
        assert compute_tau(3, eps).m >= compute_tau(2, eps).m


def test_grid_values():
    g = TauGrid(4)
    assert g.size == 5
    assert g.values() == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert g.value(2) == 0.5
    assert g.tau == 0.25
    with pytest.raises(IndexError):
        g.value(5)


def test_nearest_index_clamps():
    g = TauGrid(10)
    assert g.nearest_index(0.31) == 3
    assert g.nearest_index(-0.4) == 0
    assert g.nearest_index(1.7) == 10
    assert abs(g.value(g.nearest_index(0.123)) - 0.123) <= 0.05 + 1e-12


def test_rejects_bad_arguments():
    with pytest.raises(ValueError):
        compute_tau(0, 0.1)
    with pytest.raises(ValueError):
        compute_tau(2, 0.0)
    with pytest.raises(ValueError):
        compute_tau(2, 5.0)
    with pytest.raises(ValueError):
        TauGrid(0)
