"""Constructors for random and hand-picked example games."""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import GameValidationError
from .game import GraphicalGame, LocalMatrix, make_game


def random_tree_edges(n: int, max_degree: int, rng: random.Random) -> list[tuple[int, int]]:
    """Uniform-ish random labelled tree with a degree cap.

    Vertices join one at a time, attaching to a uniformly random earlier
    vertex that still has spare degree.
    """
    if n >= 2 and max_degree < 1:
        raise ValueError("max_degree must be >= 1 for n >= 2")
    if n >= 3 and max_degree < 2:
        raise ValueError(f"no tree on {n} vertices has maximum degree {max_degree}")
    edges = []
    degree = [0] * n
    for v in range(1, n):
        candidates = [u for u in range(v) if degree[u] < max_degree]
        u = rng.choice(candidates)
        edges.append((u, v))
        degree[u] += 1
        degree[v] += 1
    return edges


def random_payoffs(game_edges, n: int, rng: random.Random) -> GraphicalGame:
    return make_game(n, game_edges, lambda i, actions: rng.uniform(-1.0, 1.0))


def generate_random_tree_game(n: int, max_degree: int, seed: int) -> GraphicalGame:
    """Random tree game with payoffs drawn uniformly from [-1, 1].

    Deterministic for a fixed ``(n, max_degree, seed)``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    edges = random_tree_edges(n, max_degree, rng)
    return random_payoffs(edges, n, rng)


def cycle_edges(n: int) -> list[tuple[int, int]]:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return [(i, (i + 1) % n) for i in range(n)]


def generate_random_cycle_game(n: int, seed: int) -> GraphicalGame:
    rng = random.Random(seed)
    return random_payoffs(cycle_edges(n), n, rng)


def generate_random_connected_game(
    n: int, max_degree: int, seed: int, extra_edges: int = 2
) -> GraphicalGame:
    """Random tree plus a few extra edges, respecting the degree cap."""
    rng = random.Random(seed)
    edges = random_tree_edges(n, max_degree, rng)
    degree = [0] * n
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1
    have = {tuple(sorted(e)) for e in edges}
    attempts = 0
    added = 0
    while added < extra_edges and attempts < 200:
        attempts += 1
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        e = (min(a, b), max(a, b))
        if e in have or degree[a] >= max_degree or degree[b] >= max_degree:
            continue
        have.add(e)
        edges.append(e)
        degree[a] += 1
        degree[b] += 1
        added += 1
    return random_payoffs(edges, n, rng)


def rationalize_game(game: GraphicalGame, denominator: int) -> GraphicalGame:
    """Snap every payoff to the nearest multiple of ``1/denominator``.

    The result has Fraction payoffs and is accepted by the exact engine.
    """
    if denominator < 1:
        raise ValueError("denominator must be >= 1")
    mats = []
    for mat in game.matrices:
        pay = tuple(
            max(Fraction(-1), min(Fraction(1), Fraction(round(v * denominator), denominator)))
            for v in mat.payoffs
        )
        mats.append(LocalMatrix(mat.owner, mat.neighborhood, pay))
    return GraphicalGame(game.n, game.edges, tuple(mats))


def generate_random_rational_tree_game(
    n: int, max_degree: int, seed: int, denominator: int = 64
) -> GraphicalGame:
    return rationalize_game(generate_random_tree_game(n, max_degree, seed), denominator)


# ---------------------------------------------------------------------------
# Named small games used throughout the tests and docs.

def single_vertex_game(pay0, pay1) -> GraphicalGame:
    """One player, no edges; ``pay0``/``pay1`` are the two action payoffs."""
    mat = LocalMatrix(owner=0, neighborhood=(0,), payoffs=(pay0, pay1))
    return GraphicalGame(n=1, edges=frozenset(), matrices=(mat,))


def coordination_game(edges, n: int | None = None) -> GraphicalGame:
    """Each player is paid 1 when its whole closed neighborhood agrees."""
    edges = list(edges)
    if n is None:
        n = max(max(e) for e in edges) + 1
    return make_game(n, edges, lambda i, a: 1 if len(set(a)) == 1 else 0)


def edge_coordination_game() -> GraphicalGame:
    return coordination_game([(0, 1)])


def path_coordination_game(n: int = 3) -> GraphicalGame:
    return coordination_game([(i, i + 1) for i in range(n - 1)], n)


def matching_pennies_game() -> GraphicalGame:
    """Two players; player 0 wants to match, player 1 to mismatch."""

    def pay(i, actions):
        same = actions[0] == actions[1]
        if i == 0:
            return 1 if same else -1
        return -1 if same else 1

    return make_game(2, [(0, 1)], pay)


def battle_of_sexes_game() -> GraphicalGame:
    """Two pure coordination equilibria with opposed preferences.

    Player 0 prefers joint action 0 (payoffs 1 vs 1/2), player 1 prefers
    joint action 1.  Payoffs are dyadic so the game is exactly
    representable.
    """

    def pay(i, actions):
        if actions[0] != actions[1]:
            return 0
        if actions[0] == 0:
            return 1 if i == 0 else Fraction(1, 2)
        return Fraction(1, 2) if i == 0 else 1

    return make_game(2, [(0, 1)], pay)


def star_dominant_leaves_game(leaves: int = 3) -> GraphicalGame:
    """Star whose leaves strictly prefer action 0; the hub coordinates.

    Every leaf has a dominant action, so the unique equilibrium is pure.
    """

    def pay(i, actions):
        if i == 0:
            return 1 if len(set(actions)) == 1 else 0
        return 1 if actions[0] == 0 else Fraction(-1, 2)

    return make_game(leaves + 1, [(0, j) for j in range(1, leaves + 1)], pay)


def require_tree(game: GraphicalGame) -> None:
    from .game import is_tree
    from .errors import NotATreeError

    if not is_tree(game):
        raise NotATreeError("this operation requires a tree-structured game")
