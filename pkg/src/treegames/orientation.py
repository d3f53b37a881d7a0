"""Rooted orientation of a tree game.

Orienting the tree at a root gives every other vertex a unique *downstream*
neighbor (one step closer to the root); the remaining neighbors are its
*upstream* set.  The solver passes process vertices in an order that puts
every vertex after its entire upstream subtree.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotATreeError
from .game import GraphicalGame, is_tree


@dataclass(frozen=True)
class TreeOrientation:
    root: int
    #: downstream neighbor of each non-root vertex
    child: dict[int, int]
    #: upstream neighbors, ascending, for every vertex
    parents: dict[int, tuple[int, ...]]
    #: processing order, each vertex after all of its upstream subtree
    order: tuple[int, ...]

    def upstream(self, v: int) -> tuple[int, ...]:
        """All vertices whose path to the root passes through ``v``, plus ``v``."""
        out = [v]
        i = 0
        while i < len(out):
            out.extend(self.parents[out[i]])
            i += 1
        return tuple(sorted(out))


def orient(game: GraphicalGame, root: int) -> TreeOrientation:
    """Orient a tree game at ``root``."""
    if not is_tree(game):
        raise NotATreeError("cannot orient a non-tree game")
    if not (0 <= root < game.n):
        raise IndexError(f"root {root} out of range")
    child: dict[int, int] = {}
    parents: dict[int, tuple[int, ...]] = {}
    order: list[int] = []
    # Iterative post-order walk from the root.
    stack: list[tuple[int, bool]] = [(root, False)]
    seen = {root}
    while stack:
        v, done = stack.pop()
        if done:
            order.append(v)
            continue
        up = tuple(u for u in game.neighbors(v) if u not in seen)
        parents[v] = up
        for u in up:
            child[u] = v
            seen.add(u)
        stack.append((v, True))
        for u in reversed(up):
            stack.append((u, False))
    assert len(order) == game.n
    return TreeOrientation(root=root, child=child, parents=parents, order=tuple(order))


def pick_root(game: GraphicalGame) -> int:
    """Default root: lowest-id vertex of minimum degree.

    Rooting at a leaf keeps every vertex's upstream set no larger than its
    degree minus one, which is what the table passes want.
    """
    return min(range(game.n), key=lambda v: (game.degree(v), v))
