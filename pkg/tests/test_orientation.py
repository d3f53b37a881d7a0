"""Tree orientation: child/parent structure and processing order."""

from collections import deque

import pytest

from treegames import (
    NotATreeError,
    generate_random_cycle_game,
    generate_random_tree_game,
    make_game,
    orient,
    pick_root,
)


def bfs_parent_map(game, root):
    """Reference orientation: BFS from the root, child = predecessor."""
    child = {}
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for u in game.neighbors(v):
            if u not in seen:
                seen.add(u)
                child[u] = v
                queue.append(u)
    return child


def test_orient_matches_bfs_children():
    for seed in range(20):
        g = generate_random_tree_game(n=8, max_degree=3, seed=seed)
        root = seed % 8
        ori = orient(g, root)
        assert ori.root == root
        assert ori.child == bfs_parent_map(g, root)
        # parents invert the child map and come out ascending
        for v in range(8):
            ups = tuple(sorted(u for u, c in ori.child.items() if c == v))
            assert ori.parents[v] == ups


def test_order_is_post_order():
    for seed in range(20):
        g = generate_random_tree_game(n=9, max_degree=3, seed=seed)
        ori = orient(g, pick_root(g))
        pos = {v: t for t, v in enumerate(ori.order)}
        assert sorted(ori.order) == list(range(9))
        for v in range(9):
            for u in ori.parents[v]:
                assert pos[u] < pos[v]
        assert ori.order[-1] == ori.root


def test_upstream_sets():
    g = make_game(5, [(0, 1), (1, 2), (1, 3), (3, 4)], lambda i, a: 0)
    ori = orient(g, 0)
    assert ori.upstream(0) == (0, 1, 2, 3, 4)
    assert ori.upstream(1) == (1, 2, 3, 4)
    assert ori.upstream(3) == (3, 4)
    assert ori.upstream(2) == (2,)


def test_pick_root_prefers_low_degree_then_low_id():
    star = make_game(4, [(0, 1), (0, 2), (0, 3)], lambda i, a: 0)
    assert pick_root(star) == 1
    path = make_game(3, [(0, 1), (1, 2)], lambda i, a: 0)
    assert pick_root(path) == 0


def test_orient_rejects_non_trees():
    cyc = generate_random_cycle_game(n=4, seed=0)
    with pytest.raises(NotATreeError):
        orient(cyc, 0)
    g = generate_random_tree_game(n=4, max_degree=3, seed=0)
    with pytest.raises(IndexError):
        orient(g, 9)


def test_single_vertex_orientation():
    g = make_game(1, [], lambda i, a: 0)
    ori = orient(g, 0)
    assert ori.order == (0,)
    assert ori.parents[0] == ()
    assert ori.child == {}
