"""Independent slow checks for the fast passes.

Everything in here is written the obvious way on purpose: exhaustive
scans and direct formula evaluation, with hard size guards.  The test
suite uses these as ground truth for the table machinery and for the
accuracy bounds behind the default grid resolution.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Optional, Union

from .errors import SizeGuardExceeded
from .game import GraphicalGame, make_game, regret, require_valid
from .grid import TauGrid, _klogk, compute_tau
from .orientation import TreeOrientation

#: Hard cap on exhaustively scanned grid cells.
BRUTE_FORCE_CAP = 10_000_000


def _as_grid(grid: Union[int, TauGrid]) -> TauGrid:
    return TauGrid(grid) if isinstance(grid, int) else grid


def brute_force_equilibria(
    game: GraphicalGame,
    grid: Union[int, TauGrid],
    eps: float,
) -> list[tuple]:
    """Every grid profile with all regrets at most ``eps``, by full scan.

    Profiles come back sorted lexicographically, matching the order the
    tree enumerator reports.
    """
    require_valid(game)
    grid = _as_grid(grid)
    cells = (grid.m + 1) ** game.n
    if cells > BRUTE_FORCE_CAP:
        raise SizeGuardExceeded(
            f"scanning {cells} profiles exceeds the cap of {BRUTE_FORCE_CAP}"
        )
    vals = grid.values()
    out = []
    for combo in itertools.product(vals, repeat=game.n):
        if all(regret(game, i, combo) <= eps for i in range(game.n)):
            out.append(combo)
    return out


def verify_table_entry(
    game: GraphicalGame,
    orientation: TreeOrientation,
    owner: int,
    w_idx: Optional[int],
    u_idx: int,
    grid: Union[int, TauGrid],
    eps_local: float,
) -> bool:
    """Recompute one table bit by scanning the owner's whole upstream grid.

    True iff some assignment of grid values to the strict upstream of
    ``owner`` keeps the regret of the owner and of every strict-upstream
    player at most ``eps_local``, with the owner at ``u_idx/m`` and its
    child at ``w_idx/m``.  For the root pass ``w_idx=None``.
    """
    grid = _as_grid(grid)
    child = orientation.child.get(owner)
    if (child is None) != (w_idx is None):
        raise ValueError("w_idx must be given exactly when the owner has a child")
    members = orientation.upstream(owner)
    strict = [v for v in members if v != owner]
    cells = (grid.m + 1) ** len(strict)
    if cells > BRUTE_FORCE_CAP:
        raise SizeGuardExceeded(
            f"scanning {cells} upstream assignments exceeds the cap"
        )
    base = [0.5] * game.n
    base[owner] = grid.value(u_idx)
    if child is not None:
        base[child] = grid.value(w_idx)
    for combo in itertools.product(grid.values(), repeat=len(strict)):
        profile = list(base)
        for v, x in zip(strict, combo):
            profile[v] = x
        if all(regret(game, v, profile) <= eps_local for v in members):
            return True
    return False


@dataclass(frozen=True)
class ScanReport:
    """Outcome of a randomized bound audit; every gap should be <= 0."""

    k: int
    trials: int
    tau: float
    violations: int
    #: worst observed |prod(a) - prod(b)| - sum |a_i - b_i|
    max_product_gap: float
    #: worst observed payoff shift under rounding, minus the claimed slack
    max_payoff_gap: float
    #: worst observed regret increase under rounding, minus the claimed slack
    max_regret_gap: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def _expected_from_corners(corners, probs) -> float:
    """Fold corner payoffs over independent players, first variable most
    significant, probability = weight on the corner bit 0."""
    vals = list(corners)
    for x in probs:
        half = len(vals) // 2
        vals = [x * lo + (1.0 - x) * hi for lo, hi in zip(vals[:half], vals[half:])]
    return vals[0]


def _random_star(k: int, rng: random.Random) -> GraphicalGame:
    n = max(k, 1)
    edges = [(0, i) for i in range(1, n)]
    return make_game(n, edges, lambda i, bits: rng.uniform(-1.0, 1.0))


def check_product_bounds(
    k: int,
    trials: int = 200,
    seed: int = 0,
    grid: Optional[Union[int, TauGrid]] = None,
) -> ScanReport:
    """Randomized audit of the accuracy bounds behind the default grid.

    Three families per trial for neighborhood size ``k``:

    - product difference of ``k`` factors in [0, 1] against the sum of
      coordinate differences;
    - expected-payoff shift when a profile is rounded to the grid against
      the per-payoff slack ``2**(k+1) * max(k*log2(k), 1) * tau``;
    - regret increase of a star center under rounding against twice that.

    The grid defaults to the coverage resolution for accuracy 0.1.
    """
    if k < 1:
        raise ValueError("neighborhood size k must be >= 1")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    grid = compute_tau(k, 0.1) if grid is None else _as_grid(grid)
    tau = grid.tau
    slack_pay = 2 ** (k + 1) * _klogk(k) * tau
    slack_reg = 2 ** (k + 2) * _klogk(k) * tau
    rng = random.Random(seed)

    def rounded(xs):
        return [grid.value(grid.nearest_index(x)) for x in xs]

    violations = 0
    prod_gap = payoff_gap = regret_gap = -math.inf
    for _ in range(trials):
        a = [rng.random() for _ in range(k)]
        b = [rng.random() for _ in range(k)]
        gap = abs(math.prod(a) - math.prod(b)) - sum(
            abs(x - y) for x, y in zip(a, b)
        )
        prod_gap = max(prod_gap, gap)
        violations += gap > 0

        corners = [rng.uniform(-1.0, 1.0) for _ in range(2 ** (k - 1))]
        p = [rng.random() for _ in range(k - 1)]
        gap = abs(
            _expected_from_corners(corners, p)
            - _expected_from_corners(corners, rounded(p))
        ) - slack_pay
        payoff_gap = max(payoff_gap, gap)
        violations += gap > 0

        star = _random_star(k, rng)
        p = [rng.random() for _ in range(star.n)]
        gap = float(regret(star, 0, rounded(p))) - float(regret(star, 0, p)) - slack_reg
        regret_gap = max(regret_gap, gap)
        violations += gap > 0

    return ScanReport(
        k=k,
        trials=trials,
        tau=tau,
        violations=violations,
        max_product_gap=prod_gap,
        max_payoff_gap=payoff_gap,
        max_regret_gap=regret_gap,
    )
