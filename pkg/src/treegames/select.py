"""Optimum-picking over the admissible grid profiles of a tree game.

The downstream tables of the approximate solver describe *all* admissible
grid profiles, so instead of tracing an arbitrary one we can run a value
recursion over the same tables: every edge cell gets the best achievable
objective over the subtree hanging off it, and the argmax witnesses trace
the optimal profile.  Supported objectives are the sum of payoffs, the
worst-off player's payoff, and a single player's payoff.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _approx_py as _py
from .approx import downstream_pass
from .errors import NoEquilibriumError, SizeGuardExceeded
from .game import (
    GraphicalGame,
    expected_payoff,
    max_regret,
    payoff_corner_tables,
    require_valid,
)
from .grid import TauGrid, compute_tau
from .orientation import orient, pick_root

#: refuse to allocate value tables beyond this many cells per edge
_CELL_GUARD = 40_000_000


@dataclass(frozen=True)
class Objective:
    kind: str
    target: Optional[int] = None

    def __post_init__(self):
        if self.kind not in ("social", "welfare", "player"):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if (self.kind == "player") != (self.target is not None):
            raise ValueError("player objectives need a target, others must not have one")

    @classmethod
    def parse(cls, text: str) -> "Objective":
        """Parse "social", "welfare", or "player:<id>"."""
        if text in ("social", "welfare"):
            return cls(kind=text)
        if text.startswith("player:"):
            return cls(kind="player", target=int(text.split(":", 1)[1]))
        raise ValueError(f"cannot parse objective {text!r}")

    def label(self) -> str:
        return self.kind if self.target is None else f"player:{self.target}"


def objective_value(game: GraphicalGame, profile, objective: Objective) -> float:
    payoffs = [float(expected_payoff(game, i, profile)) for i in range(game.n)]
    if objective.kind == "social":
        return sum(payoffs)
    if objective.kind == "welfare":
        return min(payoffs)
    return payoffs[objective.target]


@dataclass(frozen=True)
class SelectResult:
    profile: tuple
    value: float
    certificate: dict


def _affine_payoff(p0_red, p1_red, v: float) -> tuple[float, float]:
    """Own expected payoff as mu_a + mu_b * w after reducing the upstream vars."""
    a0, b0 = p0_red[1], p0_red[0] - p0_red[1]
    a1, b1 = p1_red[1], p1_red[0] - p1_red[1]
    return v * a0 + (1.0 - v) * a1, v * b0 + (1.0 - v) * b1


def select_equilibrium(
    game: GraphicalGame,
    eps: float,
    objective,
    root: Optional[int] = None,
    *,
    grid: Optional[TauGrid] = None,
) -> SelectResult:
    """Best admissible grid profile for the objective.

    Ties are broken deterministically (ascending strategy scan keeps the
    first maximiser).  The certificate carries the per-payoff slack a grid
    perturbation can cost, so the reported value is within that slack times
    the player count of the continuum optimum it approximates.
    """
    require_valid(game)
    if isinstance(objective, str):
        objective = Objective.parse(objective)
    if objective.kind == "player" and not (0 <= objective.target < game.n):
        raise IndexError(f"objective target {objective.target} out of range")
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = game.max_neighborhood_size
    guaranteed = grid is None
    if grid is None:
        grid = compute_tau(k, min(eps, 4.0))
    m = grid.m
    if (m + 1) ** 2 > _CELL_GUARD:
        raise SizeGuardExceeded(
            f"value tables at m={m} are too large; pass a coarser grid"
        )
    if root is None:
        root = pick_root(game)
    orientation = orient(game, root)
    tables = downstream_pass(game, orientation, grid, eps)
    if not tables.root.bits.any():
        raise NoEquilibriumError("no admissible profile on this grid")

    wvals = np.arange(m + 1, dtype=np.float64) / m
    welfare = objective.kind == "welfare"
    val: dict[int, np.ndarray] = {}
    args: dict[int, dict[int, np.ndarray]] = {}

    def own_weight(v: int) -> bool:
        return objective.kind != "player" or v == objective.target

    for v in orientation.order:
        parents = orientation.parents[v]
        child = orientation.child.get(v)
        if child is None:
            break  # root handled after the loop
        variables = tuple(parents) + (child,)
        pay0, pay1 = payoff_corner_tables(game, v, variables)
        P0 = np.array([float(x) for x in pay0])
        P1 = np.array([float(x) for x in pay1])
        bits = tables.edges[v].bits
        val_v = np.full((m + 1, m + 1), -np.inf)
        arg_v = {u: np.full((m + 1, m + 1), -1, dtype=np.int32) for u in parents}
        if not parents:
            pay_w0 = wvals * P0[0] + (1.0 - wvals) * P0[1]
            pay_w1 = wvals * P1[0] + (1.0 - wvals) * P1[1]
            uvals = wvals
            M = uvals[None, :] * pay_w0[:, None] + (1.0 - uvals[None, :]) * pay_w1[:, None]
            contrib = M if own_weight(v) else np.zeros_like(M)
            val_v = np.where(bits != 0, contrib, -np.inf)
        else:
            for vi in range(m + 1):
                sets = [np.flatnonzero(tables.edges[u].bits[vi]) for u in parents]
                if any(s.size == 0 for s in sets):
                    continue
                L, H = _py.window(vi, m, tables.eps_local)
                v_frac = vi / m
                for combo in itertools.product(*(s.tolist() for s in sets)):
                    p0 = P0
                    p1 = P1
                    base = math.inf if welfare else 0.0
                    for u, ui in zip(parents, combo):
                        uu = ui / m
                        half = p0.shape[0] // 2
                        p0 = uu * p0[:half] + (1.0 - uu) * p0[half:]
                        p1 = uu * p1[:half] + (1.0 - uu) * p1[half:]
                        pv = val[u][vi, ui]
                        base = min(base, pv) if welfare else base + pv
                    dd1 = p0[1] - p1[1]
                    dd0 = p0[0] - p1[0]
                    q = dd0 - dd1
                    if q == 0.0:
                        if not (L <= dd1 <= H):
                            continue
                        ia, ib = 0, m
                    elif q > 0.0:
                        ia = _py.ceil_index((L - dd1) / q, m)
                        ib = _py.floor_index((H - dd1) / q, m)
                    else:
                        ia = _py.ceil_index((H - dd1) / q, m)
                        ib = _py.floor_index((L - dd1) / q, m)
                    if ia > ib:
                        continue
                    mu_a, mu_b = _affine_payoff(p0, p1, v_frac)
                    own_pay = mu_a + mu_b * wvals[ia:ib + 1]
                    if welfare:
                        cand = np.minimum(own_pay, base)
                    elif own_weight(v):
                        cand = own_pay + base
                    else:
                        cand = np.full(ib - ia + 1, base)
                    cur = val_v[ia:ib + 1, vi]
                    better = cand > cur
                    if better.any():
                        cur[better] = cand[better]
                        for u, ui in zip(parents, combo):
                            col = arg_v[u][ia:ib + 1, vi]
                            col[better] = ui
        val[v] = val_v
        args[v] = arg_v

    # Root scan.
    rparents = orientation.parents[root]
    pay0, pay1 = payoff_corner_tables(game, root, rparents)
    P0 = np.array([float(x) for x in pay0])
    P1 = np.array([float(x) for x in pay1])
    best = -math.inf
    best_choice = None
    for zi in np.flatnonzero(tables.root.bits).tolist():
        L, H = _py.window(zi, m, tables.eps_local)
        z = zi / m
        sets = [np.flatnonzero(tables.edges[u].bits[zi]).tolist() for u in rparents]
        if any(not s for s in sets):
            continue
        for combo in itertools.product(*sets):
            p0 = P0
            p1 = P1
            base = math.inf if welfare else 0.0
            for u, ui in zip(rparents, combo):
                uu = ui / m
                half = p0.shape[0] // 2
                p0 = uu * p0[:half] + (1.0 - uu) * p0[half:]
                p1 = uu * p1[:half] + (1.0 - uu) * p1[half:]
                pv = val[u][zi, ui]
                base = min(base, pv) if welfare else base + pv
            if not (L <= p0[0] - p1[0] <= H):
                continue
            own = z * p0[0] + (1.0 - z) * p1[0]
            if welfare:
                value = min(own, base)
            elif own_weight(root):
                value = own + base
            else:
                value = base
            if value > best:
                best = value
                best_choice = (zi, combo)
    if best_choice is None:
        raise NoEquilibriumError("root table set but no admissible root entry found")

    assignment = {root: best_choice[0]}
    for u, ui in zip(rparents, best_choice[1]):
        assignment[u] = ui
    for v in reversed(orientation.order):
        if v == root or not orientation.parents[v]:
            continue
        w_idx = assignment[orientation.child[v]]
        v_idx = assignment[v]
        for u in orientation.parents[v]:
            ui = int(args[v][u][w_idx, v_idx])
            assert ui >= 0, "argmax table missing an entry on the traced path"
            assignment[u] = ui
    profile = tuple(assignment[i] / m for i in range(game.n))
    slack = 2 ** (k + 1) * max(k * math.log2(k) if k > 1 else 0.0, 1.0) * grid.tau
    cert = {
        "objective": objective.label(),
        "value": float(best),
        "eps": eps,
        "grid_m": m,
        "tau": grid.tau,
        "guaranteed": guaranteed,
        "per_payoff_slack": slack,
        "max_regret": float(max_regret(game, profile)),
    }
    return SelectResult(profile=profile, value=float(best), certificate=cert)
