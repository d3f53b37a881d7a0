"""Approximate equilibrium computation on trees over a strategy grid.

Two sweeps over a rooted orientation: the downstream pass builds, for every
edge, a binary table saying which (child strategy, own strategy) pairs admit
an upstream completion in which every upstream player's regret is at most
``eps_local``; the upstream pass walks back from a feasible root strategy,
reconstructing one witness per vertex, and yields a grid profile whose
regret is bounded by ``eps_local`` at every player.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _approx_py as _py
from ._backend import resolve_backend
from .errors import NoEquilibriumError, SizeGuardExceeded
from .game import (
    GraphicalGame,
    max_regret,
    payoff_corner_tables,
    require_valid,
)
from .grid import TauGrid, compute_tau
from .orientation import TreeOrientation, orient, pick_root

Policy = Union[str, Callable]

#: Hard cap on materialised profiles during enumeration.
ENUMERATION_CAP = 1_000_000


@dataclass
class EdgeTable:
    """Admissibility table on the edge from ``owner`` up to its child.

    ``bits[w, u]`` covers the child playing ``w/m`` against the owner
    playing ``u/m``.  ``witnesses`` (only kept on request) maps each set
    cell to every admissible assignment of the owner's upstream neighbors,
    as tuples of grid indices in ascending neighbor order.
    """

    owner: int
    child: int
    bits: np.ndarray
    witnesses: Optional[dict] = None


@dataclass
class RootTable:
    owner: int
    bits: np.ndarray
    witnesses: Optional[dict] = None


@dataclass
class TableSet:
    grid: TauGrid
    eps_local: float
    orientation: TreeOrientation
    edges: dict[int, EdgeTable]
    root: RootTable
    backend: str

    def has_witnesses(self) -> bool:
        return self.root.witnesses is not None


@dataclass(frozen=True)
class Certificate:
    """What the solver actually guaranteed for a returned profile."""

    eps: float
    eps_local: float
    grid_m: int
    tau: float
    max_neighborhood: int
    #: grid resolution meets the coverage bound for (k, eps)
    guaranteed: bool
    backend: str
    root: int
    policy: str
    max_regret: float
    runtime_s: float


def delta_corners(game: GraphicalGame, v: int, variables: Sequence[int]) -> np.ndarray:
    """Payoff-difference corners of ``v`` over ``variables`` as float64."""
    pay0, pay1 = payoff_corner_tables(game, v, variables)
    return np.array([float(a) - float(b) for a, b in zip(pay0, pay1)], dtype=np.float64)


def downstream_pass(
    game: GraphicalGame,
    orientation: TreeOrientation,
    grid: TauGrid,
    eps_local: float,
    *,
    retain_witnesses: bool = False,
    backend: Optional[str] = None,
) -> TableSet:
    """Build the edge tables bottom-up.

    ``retain_witnesses`` stores every admissible upstream assignment per
    cell (needed for enumeration); that path always runs on the pure-Python
    backend and enumerates the full upstream product, so keep the grid
    small when using it.
    """
    require_valid(game)
    if eps_local < 0:
        raise ValueError("eps_local must be >= 0")
    m = grid.m
    if retain_witnesses:
        kern, backend_name = _py, "python"
        upstream_cells = (m + 1) ** game.max_neighborhood_size
        if upstream_cells > ENUMERATION_CAP:
            raise SizeGuardExceeded(
                f"witness retention would enumerate ~{upstream_cells} cells; "
                "use a coarser grid"
            )
    else:
        kern, backend_name = resolve_backend(backend)
    edges: dict[int, EdgeTable] = {}
    root_table = None
    for v in orientation.order:
        parents = orientation.parents[v]
        child = orientation.child.get(v)
        parent_bits = [edges[u].bits for u in parents]
        if child is None:
            d = delta_corners(game, v, parents)
            if retain_witnesses:
                bits, wits = _py.bits_with_witnesses(d, parent_bits, m, eps_local, False)
                root_table = RootTable(owner=v, bits=bits, witnesses=wits)
            else:
                bits = kern.root_bits(d, parent_bits, m, eps_local)
                root_table = RootTable(owner=v, bits=bits)
        elif not parents:
            d = delta_corners(game, v, (child,))
            bits = kern.leaf_bits(float(d[0]), float(d[1]), m, eps_local)
            edges[v] = EdgeTable(owner=v, child=child, bits=bits,
                                 witnesses={} if retain_witnesses else None)
        else:
            d = delta_corners(game, v, tuple(parents) + (child,))
            if retain_witnesses:
                bits, wits = _py.bits_with_witnesses(d, parent_bits, m, eps_local, True)
                edges[v] = EdgeTable(owner=v, child=child, bits=bits, witnesses=wits)
            else:
                bits = kern.internal_bits(d, parent_bits, m, eps_local)
                edges[v] = EdgeTable(owner=v, child=child, bits=bits)
    assert root_table is not None
    return TableSet(grid=grid, eps_local=eps_local, orientation=orientation,
                    edges=edges, root=root_table, backend=backend_name)


def _pick(candidates: list, policy: Policy, rng: Optional[random.Random], event: dict):
    if policy == "first":
        return candidates[0]
    if policy == "random":
        assert rng is not None
        return candidates[rng.randrange(len(candidates))]
    if callable(policy):
        choice = policy({**event, "candidates": candidates})
        if choice not in candidates:
            raise ValueError("policy callback returned a value outside the candidates")
        return choice
    raise ValueError(f"unknown policy {policy!r}")


def _witnesses_for(game: GraphicalGame, tables: TableSet, v: int,
                   w_idx: Optional[int], v_idx: int):
    """Iterable of upstream witnesses for one cell, ascending tuple order."""
    orientation = tables.orientation
    parents = orientation.parents[v]
    if tables.has_witnesses():
        stored = tables.root.witnesses if w_idx is None else tables.edges[v].witnesses
        key = v_idx if w_idx is None else (w_idx, v_idx)
        return list(stored.get(key, []))
    m = tables.grid.m
    child = orientation.child.get(v)
    if child is None:
        d = delta_corners(game, v, parents)
    else:
        d = delta_corners(game, v, tuple(parents) + (child,))
        # substitute the child's value first: it is the least significant
        # variable, so pair adjacent corners
        w = w_idx / m
        d = w * d[0::2] + (1.0 - w) * d[1::2]
    parent_bits = [tables.edges[u].bits for u in parents]
    return _py.iter_witnesses(d, parent_bits, v_idx, m, tables.eps_local)


def upstream_pass(
    game: GraphicalGame,
    orientation: TreeOrientation,
    tables: TableSet,
    policy: Policy = "first",
    seed: Optional[int] = None,
) -> tuple:
    """Trace one admissible profile back from the root.

    Returns the profile as grid values.  Raises ``NoEquilibriumError`` when
    the root table is empty (possible only on user-supplied grids coarser
    than the coverage bound, or with ``eps_local`` too small for the grid).
    """
    if orientation != tables.orientation:
        raise ValueError("orientation does not match the one the tables were built with")
    m = tables.grid.m
    rng = random.Random(seed) if not callable(policy) else None
    root_candidates = np.flatnonzero(tables.root.bits).tolist()
    if not root_candidates:
        raise NoEquilibriumError(
            f"no admissible root strategy on the m={m} grid at "
            f"eps_local={tables.eps_local}"
        )
    assignment: dict[int, int] = {}
    assignment[orientation.root] = _pick(
        root_candidates, policy, rng,
        {"kind": "root", "vertex": orientation.root},
    )
    for v in reversed(orientation.order):
        parents = orientation.parents[v]
        if not parents:
            continue
        child = orientation.child.get(v)
        w_idx = None if child is None else assignment[child]
        v_idx = assignment[v]
        found = _witnesses_for(game, tables, v, w_idx, v_idx)
        if policy == "first":
            # the stream is lexicographically sorted, so the first item is
            # the canonical choice; avoid materialising the rest
            chosen = next(iter(found), None)
            cands = [] if chosen is None else [chosen]
        else:
            cands = list(found)
            chosen = None
        if not cands:
            raise AssertionError(
                f"table cell for vertex {v} is set but no witness was found; "
                "this indicates an internal inconsistency"
            )
        if chosen is None:
            chosen = _pick(cands, policy, rng,
                           {"kind": "vertex", "vertex": v, "cell": (w_idx, v_idx)})
        for u, ui in zip(parents, chosen):
            assignment[u] = ui
    return tuple(assignment[i] / m for i in range(game.n))


def approximate_tree_nash(
    game: GraphicalGame,
    eps: float,
    root: Optional[int] = None,
    policy: Policy = "first",
    seed: Optional[int] = None,
    *,
    grid: Optional[TauGrid] = None,
    backend: Optional[str] = None,
) -> tuple[tuple, Certificate]:
    """Profile with per-player regret at most ``eps``, plus a certificate.

    The grid defaults to the coverage resolution for the game's largest
    closed neighborhood, which guarantees a non-empty root table; passing a
    coarser ``grid`` trades the guarantee for speed and is reported in the
    certificate.
    """
    require_valid(game)
    if eps <= 0:
        raise ValueError("eps must be positive")
    start = time.perf_counter()
    k = game.max_neighborhood_size
    guaranteed = grid is None
    if grid is None:
        grid = compute_tau(k, min(eps, 4.0))
    if root is None:
        root = pick_root(game)
    orientation = orient(game, root)
    tables = downstream_pass(game, orientation, grid, eps, backend=backend)
    profile = upstream_pass(game, orientation, tables, policy=policy, seed=seed)
    observed = float(max_regret(game, profile))
    cert = Certificate(
        eps=eps,
        eps_local=eps,
        grid_m=grid.m,
        tau=grid.tau,
        max_neighborhood=k,
        guaranteed=guaranteed,
        backend=tables.backend,
        root=root,
        policy=policy if isinstance(policy, str) else "callback",
        max_regret=observed,
        runtime_s=time.perf_counter() - start,
    )
    return profile, cert


def enumerate_grid_equilibria(
    game: GraphicalGame,
    orientation: TreeOrientation,
    tables: TableSet,
    limit: Optional[int] = None,
) -> list[tuple]:
    """All grid profiles the tables admit, sorted lexicographically.

    Requires a downstream pass run with ``retain_witnesses=True``.  With
    ``limit`` the sorted list is truncated; ``limit=0`` returns an empty
    list.
    """
    if not tables.has_witnesses():
        raise ValueError("enumeration needs tables built with retain_witnesses=True")
    if limit is not None and limit < 0:
        raise ValueError("limit must be >= 0")
    if limit == 0:
        return []
    m = tables.grid.m
    out: list[tuple] = []

    def expand(v: int, v_idx: int, w_idx: Optional[int]) -> list[dict]:
        parents = orientation.parents[v]
        if not parents:
            return [{v: v_idx}]
        stored = (tables.root.witnesses if w_idx is None
                  else tables.edges[v].witnesses)
        key = v_idx if w_idx is None else (w_idx, v_idx)
        frags: list[dict] = []
        for wit in stored.get(key, []):
            branches = [expand(u, wit[i], v_idx) for i, u in enumerate(parents)]
            count = 1
            for b in branches:
                count *= len(b)
            if len(frags) + count > ENUMERATION_CAP:
                raise SizeGuardExceeded(
                    f"more than {ENUMERATION_CAP} admissible profiles"
                )
            for combo in itertools.product(*branches):
                merged = {v: v_idx}
                for part in combo:
                    merged.update(part)
                frags.append(merged)
        return frags

    for z in np.flatnonzero(tables.root.bits).tolist():
        for frag in expand(orientation.root, z, None):
            out.append(tuple(frag[i] / m for i in range(game.n)))
            if len(out) > ENUMERATION_CAP:
                raise SizeGuardExceeded(
                    f"more than {ENUMERATION_CAP} admissible profiles"
                )
    out.sort()
    if limit is not None:
        out = out[:limit]
    return out
