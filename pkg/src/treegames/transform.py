"""Extensions beyond binary-action trees.

Three directions, all reducing to the same table machinery:

- multi-action games replace the [0, 1] strategy axis with a simplex grid
  per player and scan the same admissibility condition over it;
- vertex merging folds clusters of players into compound players whose
  strategy space is the product of member grids, with the admissibility
  condition checked member-wise (each original player deviates alone);
- sparse non-tree games are condensed to a cluster tree first, then solved
  on an escalating grid until the projected profile passes the regret check
  on the original game.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (
    GameValidationError,
    NoEquilibriumError,
    NotATreeError,
    SizeGuardExceeded,
)
from .game import (
    GraphicalGame,
    is_connected,
    is_eps_nash,
    is_tree,
    regret,
    require_valid,
)
from .grid import compute_tau
from .orientation import orient, pick_root

Policy = Union[str, Callable]

_TABLE_CELL_GUARD = 50_000_000


def simplex_grid(a: int, m: int) -> list[tuple[Fraction, ...]]:
    """All distributions over ``a`` actions with denominators dividing ``m``.

    Returned in ascending lexicographic order; the count is the number of
    compositions of ``m`` into ``a`` parts, C(m+a-1, a-1).
    """
    if a < 1:
        raise ValueError("need at least one action")
    if m < 1:
        raise ValueError("grid resolution m must be >= 1")
    out: list[tuple[Fraction, ...]] = []

    def rec(prefix: list[Fraction], remaining: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix) + (Fraction(remaining, m),))
            return
        for i in range(remaining + 1):
            prefix.append(Fraction(i, m))
            rec(prefix, remaining - i, slots - 1)
            prefix.pop()

    rec([], m, a)
    return out


@dataclass(frozen=True)
class MultiMatrix:
    """Payoff table over a closed neighborhood with per-player action counts.

    ``radices`` aligns with ``neighborhood`` (owner first); the flat index
    is mixed-radix with the owner most significant.
    """

    owner: int
    neighborhood: tuple[int, ...]
    radices: tuple[int, ...]
    payoffs: tuple

    def payoff(self, actions: Sequence[int]):
        idx = 0
        for a, r in zip(actions, self.radices):
            idx = idx * r + a
        return self.payoffs[idx]

    def as_array(self) -> np.ndarray:
        return np.array([float(x) for x in self.payoffs]).reshape(self.radices)


@dataclass(frozen=True)
class MultiActionGame:
    n: int
    edges: frozenset[tuple[int, int]]
    actions: tuple[int, ...]
    matrices: tuple[MultiMatrix, ...]

    def neighbors(self, i: int) -> tuple[int, ...]:
        out = [b if a == i else a for (a, b) in self.edges if i in (a, b)]
        return tuple(sorted(out))

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    @property
    def max_neighborhood_size(self) -> int:
        return max(self.degree(i) for i in range(self.n)) + 1


def make_multi_game(n: int, edges, actions: Sequence[int], payoff_fn) -> MultiActionGame:
    norm = frozenset((min(a, b), max(a, b)) for a, b in edges)
    actions = tuple(actions)
    mats = []
    for i in range(n):
        nbrs = tuple(sorted(b if a == i else a for (a, b) in norm if i in (a, b)))
        hood = (i,) + nbrs
        radices = tuple(actions[j] for j in hood)
        total = 1
        for r in radices:
            total *= r
        pay = []
        for idx in range(total):
            digits = []
            rem = idx
            for r in reversed(radices):
                digits.append(rem % r)
                rem //= r
            digits.reverse()
            pay.append(payoff_fn(i, tuple(digits)))
        mats.append(MultiMatrix(owner=i, neighborhood=hood, radices=radices,
                                payoffs=tuple(pay)))
    return MultiActionGame(n=n, edges=norm, actions=actions, matrices=tuple(mats))


def validate_multi(game: MultiActionGame) -> list[str]:
    out = []
    if game.n < 1:
        return [f"player count must be >= 1, got {game.n}"]
    if len(game.actions) != game.n:
        out.append("need one action count per player")
        return out
    for i, a in enumerate(game.actions):
        if a < 2:
            out.append(f"player {i} has {a} actions; need at least 2")
    for i, mat in enumerate(game.matrices):
        hood = (i,) + game.neighbors(i)
        if mat.owner != i or mat.neighborhood != hood:
            out.append(f"player {i} matrix neighborhood mismatch")
            continue
        radices = tuple(game.actions[j] for j in hood)
        if mat.radices != radices:
            out.append(f"player {i} matrix radices mismatch")
            continue
        total = 1
        for r in radices:
            total *= r
        if len(mat.payoffs) != total:
            out.append(f"player {i} payoff table has wrong size")
            continue
        if any(not (-1 <= x <= 1) for x in mat.payoffs):
            out.append(f"player {i} payoff outside [-1, 1]")
    return out


def _action_payoffs(game: MultiActionGame, i: int, dists: dict) -> np.ndarray:
    """Expected payoff per own pure action given neighbor distributions."""
    mat = game.matrices[i]
    arr = mat.as_array()
    for j in reversed(mat.neighborhood[1:]):
        arr = arr @ np.asarray(dists[j], dtype=np.float64)
    return arr


def multi_expected_payoff(game: MultiActionGame, i: int, profile) -> float:
    pay = _action_payoffs(game, i, {j: profile[j] for j in game.neighbors(i)})
    return float(np.dot(np.asarray(profile[i], dtype=np.float64), pay))


def multi_regret(game: MultiActionGame, i: int, profile) -> float:
    pay = _action_payoffs(game, i, {j: profile[j] for j in game.neighbors(i)})
    r = float(pay.max() - np.dot(np.asarray(profile[i], dtype=np.float64), pay))
    return max(r, 0.0)


def is_eps_nash_multi(game: MultiActionGame, profile, eps: float) -> bool:
    return all(multi_regret(game, i, profile) <= eps for i in range(game.n))


def _reduced_tensor(game: MultiActionGame, v: int, order: Sequence[int]) -> np.ndarray:
    """Payoff array with axes (own, *order) for the given neighbor order."""
    mat = game.matrices[v]
    arr = mat.as_array()
    hood = mat.neighborhood
    perm = [0] + [hood.index(j) for j in order]
    return np.transpose(arr, perm)


def approximate_tree_nash_multi(
    game: MultiActionGame,
    eps: float,
    root: Optional[int] = None,
    policy: Policy = "first",
    seed: Optional[int] = None,
    *,
    grid_m: Optional[int] = None,
) -> tuple[tuple, dict]:
    """Grid equilibrium of a multi-action tree game.

    Strategy spaces are simplex grids of resolution ``m`` (defaulting to
    the binary coverage resolution for the game's neighborhood size, which
    can be enormous for fine accuracies; pass ``grid_m`` to bound it).
    Returns ``(profile, certificate)`` where the profile holds one
    distribution tuple per player.
    """
    violations = validate_multi(game)
    if violations:
        raise GameValidationError(violations)
    if not is_tree(game):
        raise NotATreeError("the multi-action solver requires a tree")
    if eps <= 0:
        raise ValueError("eps must be positive")
    k = game.max_neighborhood_size
    guaranteed = grid_m is None
    m = compute_tau(k, min(eps, 4.0)).m if grid_m is None else grid_m
    if m < 1:
        raise ValueError("grid_m must be >= 1")
    grids = {i: simplex_grid(game.actions[i], m) for i in range(game.n)}
    fgrids = {i: np.array([[float(x) for x in pt] for pt in g]) for i, g in grids.items()}
    if root is None:
        root = min(range(game.n), key=lambda v: (game.degree(v), v))
    # reuse the binary orientation machinery (it only looks at n and edges)
    orientation = orient(game, root)  # type: ignore[arg-type]

    for v in range(game.n):
        child = orientation.child.get(v)
        if child is not None:
            cells = len(grids[v]) * len(grids[child])
            if cells > _TABLE_CELL_GUARD:
                raise SizeGuardExceeded(
                    f"edge table for player {v} needs {cells} cells at m={m}; "
                    "pass a smaller grid_m"
                )

    tables: dict[int, np.ndarray] = {}
    root_bits = None
    for v in orientation.order:
        parents = orientation.parents[v]
        child = orientation.child.get(v)
        own = fgrids[v]
        if child is not None:
            cg = fgrids[child]
            bits = np.zeros((cg.shape[0], own.shape[0]), dtype=np.uint8)
            tensor = _reduced_tensor(game, v, tuple(parents) + (child,))
            for combo in itertools.product(*(range(fgrids[u].shape[0]) for u in parents)):
                mask = None
                for u, ui in zip(parents, combo):
                    col = tables[u][:, ui].astype(bool)
                    mask = col if mask is None else (mask & col)
                if mask is not None and not mask.any():
                    continue
                red = tensor
                for u, ui in zip(parents, combo):
                    red = np.tensordot(fgrids[u][ui], red, axes=(0, 1))
                # red axes: (own_action, child_action)
                A = red @ cg.T
                best = A.max(axis=0)
                cur = own @ A
                ok = (best[None, :] - cur) <= eps
                if mask is not None:
                    ok = ok & mask[:, None]
                bits |= ok.T.astype(np.uint8)
            tables[v] = bits
        else:
            bits = np.zeros(own.shape[0], dtype=np.uint8)
            tensor = _reduced_tensor(game, v, tuple(parents))
            for vi in range(own.shape[0]):
                ok = False
                for combo in itertools.product(
                    *(np.flatnonzero(tables[u][vi]).tolist() for u in parents)
                ):
                    red = tensor
                    for u, ui in zip(parents, combo):
                        red = np.tensordot(fgrids[u][ui], red, axes=(0, 1))
                    if red.max() - float(np.dot(own[vi], red)) <= eps:
                        ok = True
                        break
                if ok:
                    bits[vi] = 1
            root_bits = bits
    assert root_bits is not None

    rng = random.Random(seed) if not callable(policy) else None
    root_candidates = np.flatnonzero(root_bits).tolist()
    if not root_candidates:
        raise NoEquilibriumError(f"no admissible root strategy at m={m}")
    assignment: dict[int, int] = {}

    def pick(cands, event):
        if policy == "first":
            return cands[0]
        if policy == "random":
            return cands[rng.randrange(len(cands))]
        if callable(policy):
            choice = policy({**event, "candidates": cands})
            if choice not in cands:
                raise ValueError("policy callback returned a non-candidate")
            return choice
        raise ValueError(f"unknown policy {policy!r}")

    assignment[root] = pick(root_candidates, {"kind": "root", "vertex": root})
    for v in reversed(orientation.order):
        parents = orientation.parents[v]
        if not parents:
            continue
        child = orientation.child.get(v)
        vi = assignment[v]
        if child is None:
            tensor = _reduced_tensor(game, v, tuple(parents))
            own_pt = fgrids[v][vi]
            cands = []
            for combo in itertools.product(
                *(np.flatnonzero(tables[u][vi]).tolist() for u in parents)
            ):
                red = tensor
                for u, ui in zip(parents, combo):
                    red = np.tensordot(fgrids[u][ui], red, axes=(0, 1))
                if red.max() - float(np.dot(own_pt, red)) <= eps:
                    cands.append(combo)
                    if policy == "first":
                        break
        else:
            wi = assignment[child]
            tensor = _reduced_tensor(game, v, tuple(parents) + (child,))
            tensor = np.tensordot(tensor, fgrids[child][wi], axes=(-1, 0))
            own_pt = fgrids[v][vi]
            cands = []
            for combo in itertools.product(
                *(np.flatnonzero(tables[u][vi]).tolist() for u in parents)
            ):
                red = tensor
                for u, ui in zip(parents, combo):
                    red = np.tensordot(fgrids[u][ui], red, axes=(0, 1))
                if red.max() - float(np.dot(own_pt, red)) <= eps:
                    cands.append(combo)
                    if policy == "first":
                        break
        if not cands:
            raise AssertionError(
                f"set table cell at player {v} has no witness; tables inconsistent"
            )
        chosen = pick(cands, {"kind": "vertex", "vertex": v})
        for u, ui in zip(parents, chosen):
            assignment[u] = ui
    profile = tuple(tuple(float(x) for x in grids[i][assignment[i]])
                    for i in range(game.n))
    observed = max(multi_regret(game, i, profile) for i in range(game.n))
    cert = {
        "eps": eps,
        "grid_m": m,
        "guaranteed": guaranteed,
        "max_regret": observed,
        "root": root,
        "policy": policy if isinstance(policy, str) else "callback",
    }
    return profile, cert


# ---------------------------------------------------------------------------
# Vertex merging and sparse graphs.


@dataclass(frozen=True)
class ClusterGame:
    """A game whose players are grouped into clusters forming a tree."""

    base: GraphicalGame
    clusters: tuple[tuple[int, ...], ...]
    edges: frozenset[tuple[int, int]]

    def cluster_of(self, player: int) -> int:
        for ci, members in enumerate(self.clusters):
            if player in members:
                return ci
        raise KeyError(player)

    @property
    def n(self) -> int:
        return len(self.clusters)

    def neighbors(self, ci: int) -> tuple[int, ...]:
        out = [b if a == ci else a for (a, b) in self.edges if ci in (a, b)]
        return tuple(sorted(out))

    def degree(self, ci: int) -> int:
        return len(self.neighbors(ci))

    def max_cluster_size(self) -> int:
        return max(len(c) for c in self.clusters)


def merge_vertices(game: GraphicalGame, clustering) -> ClusterGame:
    """Group players into compound players.

    The clustering must partition the players and the quotient graph must
    be a tree (edges between distinct clusters, parallel edges collapsed).
    """
    require_valid(game)
    clusters = tuple(tuple(sorted(c)) for c in clustering)
    clusters = tuple(sorted(clusters, key=lambda c: c[0]))
    seen: set[int] = set()
    for c in clusters:
        if not c:
            raise ValueError("empty cluster")
        for x in c:
            if x in seen or not (0 <= x < game.n):
                raise ValueError(f"player {x} missing from or repeated in clustering")
            seen.add(x)
    if len(seen) != game.n:
        raise ValueError("clustering does not cover every player")
    where = {x: ci for ci, c in enumerate(clusters) for x in c}
    qedges = set()
    for a, b in game.edges:
        ca, cb = where[a], where[b]
        if ca != cb:
            qedges.add((min(ca, cb), max(ca, cb)))
    cg = ClusterGame(base=game, clusters=clusters, edges=frozenset(qedges))
    if len(qedges) != len(clusters) - 1 or not _quotient_connected(cg):
        raise NotATreeError("quotient graph of the clustering is not a tree")
    return cg


def _quotient_connected(cg: ClusterGame) -> bool:
    if cg.n == 0:
        return False
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for w in cg.neighbors(v):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == cg.n


def condense_to_tree(game: GraphicalGame) -> tuple[tuple[int, ...], ...]:
    """Deterministic clustering that makes the quotient a tree.

    Repeatedly: build the quotient, find a spanning tree by BFS from the
    lowest cluster, and merge the endpoints of the smallest non-tree edge.
    A tree input comes back as singletons.
    """
    require_valid(game)
    if not is_connected(game):
        raise ValueError("condensation requires a connected game")
    label = list(range(game.n))

    def find(x: int) -> int:
        while label[x] != x:
            label[x] = label[label[x]]
            x = label[x]
        return x

    while True:
        roots = sorted({find(x) for x in range(game.n)})
        index = {r: i for i, r in enumerate(roots)}
        qedges = sorted({
            (min(index[find(a)], index[find(b)]), max(index[find(a)], index[find(b)]))
            for a, b in game.edges if find(a) != find(b)
        })
        adj: dict[int, list[int]] = {i: [] for i in range(len(roots))}
        for a, b in qedges:
            adj[a].append(b)
            adj[b].append(a)
        seen = {0}
        queue = deque([0])
        tree_edges = set()
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    tree_edges.add((min(v, w), max(v, w)))
                    queue.append(w)
        extra = [e for e in qedges if e not in tree_edges]
        if not extra:
            break
        a, b = extra[0]
        ra, rb = roots[a], roots[b]
        label[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for x in range(game.n):
        groups.setdefault(find(x), []).append(x)
    return tuple(sorted((tuple(sorted(g)) for g in groups.values()),
                        key=lambda c: c[0]))


def _member_ok_over_child(game: GraphicalGame, member: int, own_prob: float,
                          fixed: dict, child_members: Sequence[int],
                          child_pts: np.ndarray, eps: float) -> np.ndarray:
    """Regret condition of one cluster member across the child grid.

    ``fixed`` maps every non-child neighbor to its probability;
    ``child_pts`` has one column per child member.  Returns a bool vector
    over the child grid rows.
    """
    mat = game.matrices[member]
    others = mat.neighborhood[1:]
    varying = [j for j in others if j in child_members]
    k = len(others)
    pay0 = np.zeros(2 ** len(varying))
    pay1 = np.zeros(2 ** len(varying))
    vpos = {j: t for t, j in enumerate(varying)}
    for idx in range(2 ** k):
        weight = 1.0
        vidx = 0
        for t, j in enumerate(others):
            bit = (idx >> (k - 1 - t)) & 1
            if j in vpos:
                if bit:
                    vidx |= 1 << (len(varying) - 1 - vpos[j])
                continue
            pj = fixed[j]
            weight *= (1.0 - pj) if bit else pj
        if weight == 0.0:
            continue
        pay0[vidx] += weight * float(mat.payoffs[idx])
        pay1[vidx] += weight * float(mat.payoffs[(1 << k) | idx])
    g = child_pts.shape[0]
    v0 = np.broadcast_to(pay0, (g, pay0.shape[0])).copy()
    v1 = np.broadcast_to(pay1, (g, pay1.shape[0])).copy()
    for j in varying:
        col = child_pts[:, child_members.index(j)]
        half = v0.shape[1] // 2
        v0 = col[:, None] * v0[:, :half] + (1.0 - col[:, None]) * v0[:, half:]
        v1 = col[:, None] * v1[:, :half] + (1.0 - col[:, None]) * v1[:, half:]
    p0 = v0[:, 0]
    p1 = v1[:, 0]
    best = np.maximum(p0, p1)
    cur = own_prob * p0 + (1.0 - own_prob) * p1
    return (best - cur) <= eps


def _product_grid(size: int, m: int) -> np.ndarray:
    """All probability vectors for ``size`` members on the i/m grid, lex order."""
    pts = np.array(list(itertools.product(range(m + 1), repeat=size)),
                   dtype=np.float64)
    return pts / float(m)


def _cluster_fixed(cg: ClusterGame, assignments: dict) -> dict[int, float]:
    """Flatten cluster point assignments into per-player probabilities."""
    fixed: dict[int, float] = {}
    for ci, pt in assignments.items():
        for mem, p in zip(cg.clusters[ci], pt):
            fixed[mem] = float(p)
    return fixed


def _members_ok(cg: ClusterGame, ci: int, fixed: dict[int, float],
                cmembers: tuple[int, ...], cpts: np.ndarray,
                eps: float) -> np.ndarray:
    """AND of every member's regret condition across the child cluster grid."""
    ok = np.ones(cpts.shape[0], dtype=bool)
    for mem in cg.clusters[ci]:
        nbrs = cg.base.neighbors(mem)
        local = {j: fixed[j] for j in nbrs if j not in cmembers}
        ok &= _member_ok_over_child(cg.base, mem, fixed[mem], local,
                                    cmembers, cpts, eps)
        if not ok.any():
            break
    return ok


def solve_cluster_tree(
    cg: ClusterGame,
    eps: float,
    m: int,
    policy: Policy = "first",
    seed: Optional[int] = None,
    root: Optional[int] = None,
) -> tuple[float, ...]:
    """Grid equilibrium of the base game through its cluster tree.

    Every cluster ranges over the product of its members' i/m grids; a
    table cell is set when each member, deviating alone, has regret at
    most ``eps``.  Returns the projected per-player profile.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if m < 1:
        raise ValueError("grid resolution m must be >= 1")
    if not is_tree(cg):
        raise NotATreeError("cluster graph is not a tree")
    grids = {ci: _product_grid(len(cg.clusters[ci]), m) for ci in range(cg.n)}
    if root is None:
        root = pick_root(cg)
    orientation = orient(cg, root)  # type: ignore[arg-type]
    for ci, child in orientation.child.items():
        cells = grids[ci].shape[0] * grids[child].shape[0]
        if cells > _TABLE_CELL_GUARD:
            raise SizeGuardExceeded(
                f"cluster edge table needs {cells} cells at m={m}"
            )

    tables: dict[int, np.ndarray] = {}
    root_bits = None
    for ci in orientation.order:
        parents = orientation.parents[ci]
        child = orientation.child.get(ci)
        own_pts = grids[ci]
        if child is not None:
            crows = grids[child].shape[0]
            cmembers = cg.clusters[child]
            cpts = grids[child]
            bits = np.zeros((crows, own_pts.shape[0]), dtype=np.uint8)
        else:
            cmembers = ()
            cpts = np.zeros((1, 0))
            bits = np.zeros(own_pts.shape[0], dtype=np.uint8)
        for vi in range(own_pts.shape[0]):
            admissible = [np.flatnonzero(tables[u][vi]).tolist() for u in parents]
            if any(not a for a in admissible):
                continue
            acc = np.zeros(cpts.shape[0], dtype=bool)
            for combo in itertools.product(*admissible):
                assignments = {ci: own_pts[vi]}
                for u, ui in zip(parents, combo):
                    assignments[u] = grids[u][ui]
                fixed = _cluster_fixed(cg, assignments)
                acc |= _members_ok(cg, ci, fixed, cmembers, cpts, eps)
                if acc.all():
                    break
            if child is not None:
                bits[:, vi] = acc
            elif acc[0]:
                bits[vi] = 1
        if child is not None:
            tables[ci] = bits
        else:
            root_bits = bits
    assert root_bits is not None

    rng = random.Random(seed) if not callable(policy) else None

    def pick(cands, event):
        if policy == "first":
            return cands[0]
        if policy == "random":
            return cands[rng.randrange(len(cands))]
        if callable(policy):
            choice = policy({**event, "candidates": cands})
            if choice not in cands:
                raise ValueError("policy callback returned a non-candidate")
            return choice
        raise ValueError(f"unknown policy {policy!r}")

    root_candidates = np.flatnonzero(root_bits).tolist()
    if not root_candidates:
        raise NoEquilibriumError(f"no admissible cluster profile at m={m}")
    assignment = {root: pick(root_candidates, {"kind": "root", "cluster": root})}
    for ci in reversed(orientation.order):
        parents = orientation.parents[ci]
        if not parents:
            continue
        vi = assignment[ci]
        child = orientation.child.get(ci)
        if child is not None:
            cmembers = cg.clusters[child]
            cpts = grids[child][assignment[child]][None, :]
        else:
            cmembers = ()
            cpts = np.zeros((1, 0))
        admissible = [np.flatnonzero(tables[u][vi]).tolist() for u in parents]
        found = []
        for combo in itertools.product(*admissible):
            assignments = {ci: grids[ci][vi]}
            for u, ui in zip(parents, combo):
                assignments[u] = grids[u][ui]
            fixed = _cluster_fixed(cg, assignments)
            if _members_ok(cg, ci, fixed, cmembers, cpts, eps)[0]:
                found.append(combo)
                if policy == "first":
                    break
        if not found:
            raise AssertionError(
                f"set table cell at cluster {ci} has no witness; tables inconsistent"
            )
        chosen = pick(found, {"kind": "cluster", "cluster": ci})
        for u, ui in zip(parents, chosen):
            assignment[u] = ui

    profile = [0.0] * cg.base.n
    for ci in range(cg.n):
        for mem, p in zip(cg.clusters[ci], grids[ci][assignment[ci]]):
            profile[mem] = float(p)
    return tuple(profile)


def solve_sparse(
    game: GraphicalGame,
    eps: float,
    policy: Policy = "first",
    seed: Optional[int] = None,
    *,
    max_m: Optional[int] = None,
) -> tuple[tuple[float, ...], dict]:
    """Approximate equilibrium of a sparse connected game.

    Trees go straight to the tree solver.  Anything else is condensed to
    a cluster tree and solved on a doubling grid schedule; each projected
    profile is verified against the original game's regret condition and
    the first verified profile wins.
    """
    from .approx import approximate_tree_nash

    require_valid(game)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not is_connected(game):
        raise ValueError("the sparse solver requires a connected game")
    if is_tree(game):
        profile, cert = approximate_tree_nash(game, eps, policy=policy, seed=seed)
        return profile, {
            "engine": "tree",
            "grid_m": cert.grid_m,
            "clusters": tuple((i,) for i in range(game.n)),
            "max_regret": cert.max_regret,
            "guaranteed": cert.guaranteed,
        }
    clusters = condense_to_tree(game)
    cg = merge_vertices(game, clusters)
    cap = compute_tau(game.max_neighborhood_size, min(eps, 4.0)).m
    if max_m is not None:
        cap = min(cap, max_m)
    schedule = []
    m = 4
    while True:
        schedule.append(min(m, cap))
        if m >= cap:
            break
        m *= 2
    last = None
    for m in schedule:
        try:
            profile = solve_cluster_tree(cg, eps, m, policy=policy, seed=seed)
        except NoEquilibriumError as err:
            last = err
            continue
        except SizeGuardExceeded as err:
            last = err
            break
        if is_eps_nash(game, profile, eps):
            return profile, {
                "engine": "cluster",
                "grid_m": m,
                "clusters": clusters,
                "max_regret": max(
                    float(regret(game, i, profile)) for i in range(game.n)
                ),
                "guaranteed": False,
            }
    raise NoEquilibriumError(
        f"no verified profile up to m={schedule[-1]}"
    ) from last
