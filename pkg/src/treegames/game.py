"""Graphical games with binary actions.

A game consists of an undirected graph over players ``0..n-1`` and, for each
player, a payoff table indexed by the joint pure actions of the player's
closed neighborhood (the player itself plus its graph neighbors).  Mixed
strategies are represented by the probability of playing action 0, so a
profile is a tuple of numbers in ``[0, 1]``.

Payoff tables are flat tuples of length ``2**k`` where ``k`` is the closed
neighborhood size.  The neighborhood is ordered with the owner first and the
remaining neighbors in ascending id order; the owner's action is the most
significant bit of the flat index.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import GameValidationError

Number = Union[int, float, Fraction]

#: Inclusive bound on the magnitude of a single payoff entry.
PAYOFF_BOUND = 1


@dataclass(frozen=True)
class LocalMatrix:
    """Payoff table of one player over its closed neighborhood.

    ``neighborhood`` lists the owner first, then the neighbors in ascending
    order.  ``payoffs`` has one entry per joint pure action; the bit of
    ``neighborhood[t]`` sits at position ``k - 1 - t`` of the flat index,
    i.e. the owner's action is the most significant bit.
    """

    owner: int
    neighborhood: tuple[int, ...]
    payoffs: tuple[Number, ...]

    @property
    def k(self) -> int:
        return len(self.neighborhood)

    def flat_index(self, actions: Sequence[int]) -> int:
        k = len(self.neighborhood)
        idx = 0
        for t in range(k):
            idx |= actions[t] << (k - 1 - t)
        return idx

    def payoff(self, actions: Sequence[int]) -> Number:
        """Payoff for a joint pure action, given in neighborhood order."""
        return self.payoffs[self.flat_index(actions)]


@dataclass(frozen=True)
class GraphicalGame:
    """An n-player binary-action game on an undirected graph."""

    n: int
    edges: frozenset[tuple[int, int]]
    matrices: tuple[LocalMatrix, ...]

    def neighbors(self, i: int) -> tuple[int, ...]:
        out = [b if a == i else a for (a, b) in self.edges if i in (a, b)]
        return tuple(sorted(out))

    def closed_neighborhood(self, i: int) -> tuple[int, ...]:
        return (i,) + self.neighbors(i)

    def degree(self, i: int) -> int:
        return sum(1 for (a, b) in self.edges if i in (a, b))

    @property
    def max_neighborhood_size(self) -> int:
        """Largest closed neighborhood over all players."""
        return max(self.degree(i) for i in range(self.n)) + 1


def make_game(n: int, edges, payoff_fn) -> GraphicalGame:
    """Build a game from an edge list and a payoff callback.

    ``payoff_fn(i, actions)`` receives the owner and a tuple of pure actions
    in neighborhood order (owner first, neighbors ascending) and returns the
    payoff entry.
    """
    norm = frozenset((min(a, b), max(a, b)) for a, b in edges)
    mats = []
    for i in range(n):
        nbrs = tuple(sorted(b if a == i else a for (a, b) in norm if i in (a, b)))
        hood = (i,) + nbrs
        k = len(hood)
        pay = tuple(
            payoff_fn(i, tuple((idx >> (k - 1 - t)) & 1 for t in range(k)))
            for idx in range(2**k)
        )
        mats.append(LocalMatrix(owner=i, neighborhood=hood, payoffs=pay))
    return GraphicalGame(n=n, edges=norm, matrices=tuple(mats))


def validate(game: GraphicalGame) -> list[str]:
    """Return a list of structural violations (empty means valid)."""
    out: list[str] = []
    if game.n < 1:
        out.append(f"player count must be >= 1, got {game.n}")
        return out
    for a, b in game.edges:
        if a == b:
            out.append(f"self-loop at player {a}")
        if not (0 <= a < game.n and 0 <= b < game.n):
            out.append(f"edge ({a},{b}) has endpoint outside 0..{game.n - 1}")
        if a > b:
            out.append(f"edge ({a},{b}) not normalised as (min,max)")
    if len(game.matrices) != game.n:
        out.append(f"expected {game.n} payoff tables, got {len(game.matrices)}")
        return out
    for i, mat in enumerate(game.matrices):
        if mat.owner != i:
            out.append(f"table {i} owned by player {mat.owner}")
            continue
        expect = game.closed_neighborhood(i)
        if mat.neighborhood != expect:
            out.append(
                f"player {i} neighborhood {mat.neighborhood} != {expect}"
            )
            continue
        if len(mat.payoffs) != 2 ** len(expect):
            out.append(
                f"player {i} payoff table has {len(mat.payoffs)} entries, "
                f"expected {2 ** len(expect)}"
            )
            continue
        for idx, v in enumerate(mat.payoffs):
            if not isinstance(v, (int, float, Fraction)) or isinstance(v, bool):
                out.append(f"player {i} payoff entry {idx} is not a number")
                break
            if not (-PAYOFF_BOUND <= v <= PAYOFF_BOUND):
                out.append(
                    f"player {i} payoff entry {idx} = {v} outside "
                    f"[-{PAYOFF_BOUND}, {PAYOFF_BOUND}]"
                )
                break
    return out


def require_valid(game: GraphicalGame) -> None:
    violations = validate(game)
    if violations:
        raise GameValidationError(violations)


def _check_profile(game: GraphicalGame, profile: Sequence) -> None:
    if len(profile) != game.n:
        raise ValueError(
            f"profile has {len(profile)} entries for an {game.n}-player game"
        )
    for i, p in enumerate(profile):
        if not (0 <= p <= 1):
            raise ValueError(f"profile entry {i} = {p} outside [0, 1]")


def _payoff_pair(game: GraphicalGame, i: int, profile: Sequence):
    """Expected payoff of player ``i`` for each of its own pure actions.

    Returns ``(pay0, pay1)`` where ``pay0`` conditions on the owner playing
    action 0.  Works for float and Fraction profiles alike.
    """
    mat = game.matrices[i]
    k = mat.k
    others = mat.neighborhood[1:]
    pay0 = 0
    pay1 = 0
    for idx in range(2**k):
        weight = 1
        for t, j in enumerate(others):
            bit = (idx >> (k - 2 - t)) & 1
            pj = profile[j]
            weight = weight * (1 - pj) if bit else weight * pj
            if weight == 0:
                break
        if weight == 0:
            continue
        if idx >> (k - 1):
            pay1 += weight * mat.payoffs[idx]
        else:
            pay0 += weight * mat.payoffs[idx]
    return pay0, pay1


def expected_payoff(game: GraphicalGame, i: int, profile: Sequence) -> Number:
    """Expected payoff of player ``i`` under a mixed profile.

    The sum runs over the joint pure actions of the closed neighborhood,
    weighting each payoff entry by the product of action probabilities.
    """
    if not (0 <= i < game.n):
        raise IndexError(f"player {i} out of range for {game.n}-player game")
    _check_profile(game, profile)
    pay0, pay1 = _payoff_pair(game, i, profile)
    p = profile[i]
    return p * pay0 + (1 - p) * pay1


def regret(game: GraphicalGame, i: int, profile: Sequence) -> Number:
    """Gain available to player ``i`` from a unilateral deviation.

    Expected payoff is affine in the player's own strategy, so the best
    deviation is one of the two pure actions.
    """
    if not (0 <= i < game.n):
        raise IndexError(f"player {i} out of range for {game.n}-player game")
    _check_profile(game, profile)
    pay0, pay1 = _payoff_pair(game, i, profile)
    p = profile[i]
    current = p * pay0 + (1 - p) * pay1
    best = pay0 if pay0 >= pay1 else pay1
    r = best - current
    # Exact arithmetic never goes negative; guard against float rounding.
    return r if r > 0 else r * 0


def max_regret(game: GraphicalGame, profile: Sequence) -> Number:
    return max(regret(game, i, profile) for i in range(game.n))


def is_eps_nash(game: GraphicalGame, profile: Sequence, eps) -> bool:
    """True when no player can gain more than ``eps`` by deviating."""
    return all(regret(game, i, profile) <= eps for i in range(game.n))


def payoff_corner_tables(game: GraphicalGame, i: int, variables: Sequence[int]):
    """Owner payoffs at every joint pure action of ``variables``.

    ``variables`` must be exactly the neighbors of ``i`` in some order; the
    first variable is the most significant bit of the returned flat arrays.
    Returns ``(pay_own0, pay_own1)`` as lists indexed by that flat layout.
    Solvers use this to re-order neighbor axes without touching the matrix
    layout itself.
    """
    mat = game.matrices[i]
    others = mat.neighborhood[1:]
    if sorted(variables) != sorted(others):
        raise ValueError(
            f"variables {tuple(variables)} do not cover the neighbors of {i}"
        )
    pos = {j: t for t, j in enumerate(others)}
    r = len(variables)
    pay0 = []
    pay1 = []
    acts = [0] * len(others)
    for idx in range(2**r):
        for t, var in enumerate(variables):
            acts[pos[var]] = (idx >> (r - 1 - t)) & 1
        pay0.append(mat.payoff((0, *acts)))
        pay1.append(mat.payoff((1, *acts)))
    return pay0, pay1


def is_tree(game: GraphicalGame) -> bool:
    """Connected with exactly ``n - 1`` edges (single vertices count)."""
    if len(game.edges) != game.n - 1:
        return False
    seen = {0}
    queue = deque([0])
    adj: dict[int, list[int]] = {i: [] for i in range(game.n)}
    for a, b in game.edges:
        adj[a].append(b)
        adj[b].append(a)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == game.n


def is_connected(game: GraphicalGame) -> bool:
    if game.n == 0:
        return False
    seen = {0}
    queue = deque([0])
    adj: dict[int, list[int]] = {i: [] for i in range(game.n)}
    for a, b in game.edges:
        adj[a].append(b)
        adj[b].append(a)
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == game.n
