"""Exact equilibrium computation on trees over rational arithmetic.

The downstream pass represents each edge table as a *strip table*: the
child's strategy axis is cut into closed strips (degenerate point strips
are allowed) and each strip carries the closed set of own strategies that
admit an exact upstream equilibrium, stored as disjoint intervals.  All
coordinates are ``fractions.Fraction``; the engine refuses float payoffs
rather than silently rounding them.

Own-strategy feasibility splits into three relations on the payoff
difference ``delta`` (own action 0 minus action 1): an interior strategy
needs ``delta == 0`` (exact indifference), the pure strategy 0 (grid value
``v = 0``, i.e. always playing action 1) needs ``delta <= 0``, and ``v = 1``
needs ``delta >= 0``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .errors import (
    NoEquilibriumError,
    RationalPayoffsRequiredError,
)
from .game import GraphicalGame, payoff_corner_tables, regret, require_valid
from .orientation import TreeOrientation, orient, pick_root

ZERO = Fraction(0)
ONE = Fraction(1)

Policy = Union[str, Callable]


@dataclass(frozen=True)
class RationalInterval:
    """Closed rational interval inside [0, 1]; ``lo == hi`` is a point."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not (ZERO <= self.lo <= self.hi <= ONE):
            raise ValueError(f"bad interval [{self.lo}, {self.hi}]")

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi


def normalize_intervals(ivs: Sequence[RationalInterval]) -> tuple[RationalInterval, ...]:
    """Sort and coalesce; touching closed intervals merge."""
    out: list[list[Fraction]] = []
    for iv in sorted(ivs, key=lambda r: (r.lo, r.hi)):
        if out and iv.lo <= out[-1][1]:
            if iv.hi > out[-1][1]:
                out[-1][1] = iv.hi
        else:
            out.append([iv.lo, iv.hi])
    return tuple(RationalInterval(lo, hi) for lo, hi in out)


@dataclass(frozen=True)
class Strip:
    """One slab of the child axis with its admissible own-strategy set."""

    lo: Fraction
    hi: Fraction
    intervals: tuple[RationalInterval, ...]


@dataclass(frozen=True)
class StripTable:
    """Edge table of ``owner`` read by its downstream neighbor ``child``.

    Strips cover [0, 1] on the child's axis; consecutive strips share their
    boundary and point strips carry the full set at that coordinate (always
    a superset of what the flanking strips say there).
    """

    owner: int
    child: int
    strips: tuple[Strip, ...]

    def feasible_at(self, w) -> tuple[RationalInterval, ...]:
        """Admissible own strategies against the child playing ``w``."""
        ivs: list[RationalInterval] = []
        for s in self.strips:
            if s.lo <= w <= s.hi:
                ivs.extend(s.intervals)
        return normalize_intervals(ivs)

    def contains(self, w, u) -> bool:
        return any(iv.contains(u) for iv in self.feasible_at(w))

    def rectangle_count(self) -> int:
        """Number of maximal rectangles in the represented union.

        An own-interval repeated verbatim across consecutive strips is one
        rectangle, not one per strip; an interior point strip passes such a
        run through when one of its intervals covers it, and its intervals
        only count on their own when they are not equal to a passing run.
        """
        count = 0
        open_runs: set[RationalInterval] = set()
        for s in self.strips:
            if s.lo == s.hi and ZERO < s.lo < ONE:
                passed: set[RationalInterval] = set()
                for iv in s.intervals:
                    hit = {r for r in open_runs if iv.lo <= r.lo and r.hi <= iv.hi}
                    passed |= hit
                    if iv not in hit:
                        count += 1
                open_runs = passed
                continue
            nxt: set[RationalInterval] = set()
            for iv in s.intervals:
                if iv not in open_runs:
                    count += 1
                nxt.add(iv)
            open_runs = nxt
        return count


@dataclass(frozen=True)
class DeltaForm:
    """Multilinear payoff difference of one player.

    ``corners[idx]`` is the difference (own action 0 minus own action 1) at
    the joint pure action ``idx`` of ``variables``, first variable most
    significant.  The difference at mixed neighbor strategies is the
    multilinear interpolation of the corners.
    """

    owner: int
    variables: tuple[int, ...]
    corners: tuple[Fraction, ...]


def build_delta_form(game: GraphicalGame, v: int, variables: Sequence[int]) -> DeltaForm:
    pay0, pay1 = payoff_corner_tables(game, v, variables)
    corners = tuple(Fraction(a) - Fraction(b) for a, b in zip(pay0, pay1))
    return DeltaForm(owner=v, variables=tuple(variables), corners=corners)


def _reduce_first(corners: Sequence[Fraction], x) -> tuple[Fraction, ...]:
    half = len(corners) // 2
    return tuple(x * corners[i] + (1 - x) * corners[half + i] for i in range(half))


def delta_eval(form: DeltaForm, values: Sequence) -> Fraction:
    """Evaluate the payoff difference at mixed values for all variables."""
    if len(values) != len(form.variables):
        raise ValueError("one value per variable required")
    corners = form.corners
    for x in values:
        corners = _reduce_first(corners, Fraction(x))
    return corners[0]


def delta_in_w(form: DeltaForm, upstream_values: Sequence) -> tuple[Fraction, Fraction]:
    """Coefficients (a, b) of delta = a + b*w after fixing all but the last variable."""
    if len(upstream_values) != len(form.variables) - 1:
        raise ValueError("need values for all variables except the last")
    corners = form.corners
    for x in upstream_values:
        corners = _reduce_first(corners, Fraction(x))
    c0, c1 = corners
    return c1, c0 - c1


def _halfline(a: Fraction, b: Fraction, geq: bool) -> list[RationalInterval]:
    """{w in [0,1] : a + b*w >= 0} (or <= 0), as at most one interval."""
    if not geq:
        a, b = -a, -b
    if b == 0:
        return [RationalInterval(ZERO, ONE)] if a >= 0 else []
    r = -a / b
    lo, hi = (r, ONE) if b > 0 else (ZERO, r)
    lo, hi = max(lo, ZERO), min(hi, ONE)
    return [RationalInterval(lo, hi)] if lo <= hi else []


def _intersect(xs, ys) -> list[RationalInterval]:
    out = []
    for a in xs:
        for b in ys:
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if lo <= hi:
                out.append(RationalInterval(lo, hi))
    return out


KINDS = ("interior", "v_zero", "v_one")


def solve_w_set(form: DeltaForm, box: Sequence[RationalInterval],
                kind: str) -> tuple[RationalInterval, ...]:
    """Child strategies against which the box admits the required relation.

    ``form`` ranges over (upstream..., child); ``box`` gives one interval
    per upstream variable.  For ``kind="interior"`` the result is every
    ``w`` where some upstream point in the box makes the owner exactly
    indifferent; ``v_zero``/``v_one`` relax that to the one-sided relations
    of the pure strategies.  The result is at most two intervals: each
    corner of the box contributes an affine function of ``w``, the max over
    the box is the max over corners (and is convex, so its nonnegativity
    set is anchored to the ends of [0, 1]), likewise the min, and their
    combination cannot produce three components.
    """
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}")
    if len(box) != len(form.variables) - 1:
        raise ValueError("box must cover every upstream variable")
    lines = []
    for corner in itertools.product(*((iv.lo, iv.hi) for iv in box)):
        corners = form.corners
        for x in corner:
            corners = _reduce_first(corners, x)
        c0, c1 = corners
        lines.append((c1, c0 - c1))  # delta = a + b*w
    ge: list[RationalInterval] = []
    le: list[RationalInterval] = []
    for a, b in lines:
        ge.extend(_halfline(a, b, True))
        le.extend(_halfline(a, b, False))
    ge_n = normalize_intervals(ge)
    le_n = normalize_intervals(le)
    if kind == "v_one":
        result = ge_n
    elif kind == "v_zero":
        result = le_n
    else:
        result = normalize_intervals(_intersect(ge_n, le_n))
    assert len(result) <= 2, (
        f"w-set with {len(result)} components contradicts the two-interval bound"
    )
    return result


# ---------------------------------------------------------------------------
# Segment machinery shared by the leaf, internal, and root steps.


def _segments(breakpoints):
    """Points and open gaps of [0, 1] split at the breakpoints, in order."""
    bps = sorted(set(breakpoints) | {ZERO, ONE})
    for i, b in enumerate(bps):
        yield ("point", b, b)
        if i + 1 < len(bps):
            yield ("open", b, bps[i + 1])


def _segment_kind(seg) -> str:
    tag, a, b = seg
    if tag == "open":
        return "interior"
    if a == ZERO:
        return "v_zero"
    if a == ONE:
        return "v_one"
    return "interior"


def _feasible_on(table: StripTable, seg) -> tuple[RationalInterval, ...]:
    tag, a, b = seg
    if tag == "point":
        return table.feasible_at(a)
    for s in table.strips:
        if s.lo <= a and b <= s.hi and s.lo < s.hi:
            return s.intervals
    raise AssertionError(f"no strip covers ({a}, {b}); table invariant broken")


def _canonical_strips(strips: list[Strip]) -> tuple[Strip, ...]:
    """Merge equal neighbors and drop point strips that carry no extra info."""
    cur = list(strips)
    changed = True
    while changed:
        changed = False
        merged: list[Strip] = []
        for s in cur:
            if merged and merged[-1].intervals == s.intervals:
                merged[-1] = Strip(merged[-1].lo, s.hi, s.intervals)
                changed = True
            else:
                merged.append(s)
        cur = merged
        kept: list[Strip] = []
        for i, s in enumerate(cur):
            if s.lo == s.hi and 0 < i < len(cur) - 1:
                around = normalize_intervals(
                    cur[i - 1].intervals + cur[i + 1].intervals
                )
                if around == s.intervals:
                    changed = True
                    continue
            kept.append(s)
        cur = kept
    return tuple(cur)


def _assemble_table(owner: int, child: int, rects) -> StripTable:
    """Build a strip table over the child axis from marked rectangles.

    Each rectangle is ``(w_lo, w_hi, own_interval)`` with closed bounds.
    """
    bps = {ZERO, ONE}
    for wlo, whi, _ in rects:
        bps.add(wlo)
        bps.add(whi)
    strips: list[Strip] = []
    for seg in _segments(bps):
        tag, a, b = seg
        ivs = []
        for wlo, whi, own in rects:
            covered = (wlo <= a <= whi) if tag == "point" else (wlo <= a and b <= whi)
            if covered:
                ivs.append(own)
        strips.append(Strip(a, b, normalize_intervals(ivs)))
    return StripTable(owner=owner, child=child, strips=_canonical_strips(strips))


def leaf_table(game: GraphicalGame, leaf: int, child: int) -> StripTable:
    """Edge table of a vertex whose only neighbor is its child.

    The payoff difference is affine in the child's strategy, so the table
    has at most three strips (sign regions around the crossing) and at most
    three rectangles in total.
    """
    form = build_delta_form(game, leaf, (child,))
    a, b = delta_in_w(form, ())
    bps = {ZERO, ONE}
    if b != 0:
        r = -a / b
        if ZERO < r < ONE:
            bps.add(r)
    rects = []
    for seg in _segments(bps):
        tag, x, y = seg
        probe = x if tag == "point" else (x + y) / 2
        val = a + b * probe
        if val > 0:
            own = RationalInterval(ONE, ONE)
        elif val < 0:
            own = RationalInterval(ZERO, ZERO)
        else:
            own = RationalInterval(ZERO, ONE)
        rects.append((x, y, own))
    return _assemble_table(leaf, child, rects)


@dataclass
class ExactTables:
    orientation: TreeOrientation
    tables: dict[int, StripTable]
    root_set: tuple[RationalInterval, ...]

    @property
    def root(self) -> int:
        return self.orientation.root


def _require_rational(game: GraphicalGame) -> None:
    for mat in game.matrices:
        for v in mat.payoffs:
            if not isinstance(v, (int, Fraction)) or isinstance(v, bool):
                raise RationalPayoffsRequiredError(
                    f"player {mat.owner} has a non-rational payoff {v!r}; "
                    "rationalize the game first"
                )


def exact_downstream(game: GraphicalGame, orientation: TreeOrientation) -> ExactTables:
    """Bottom-up construction of every edge's strip table and the root set."""
    require_valid(game)
    _require_rational(game)
    tables: dict[int, StripTable] = {}
    root_set: tuple[RationalInterval, ...] = ()
    for v in orientation.order:
        parents = orientation.parents[v]
        child = orientation.child.get(v)
        if child is not None and not parents:
            tables[v] = leaf_table(game, v, child)
            continue
        if child is not None:
            form = build_delta_form(game, v, tuple(parents) + (child,))
        else:
            form = build_delta_form(game, v, tuple(parents))
        bps = set()
        for u in parents:
            for s in tables[u].strips:
                bps.add(s.lo)
                bps.add(s.hi)
        rects = []
        marks: list[RationalInterval] = []
        for seg in _segments(bps):
            tag, a, b = seg
            feas = [_feasible_on(tables[u], seg) for u in parents]
            if any(not f for f in feas):
                continue
            kind = _segment_kind(seg)
            for box in itertools.product(*feas):
                if child is not None:
                    for w_iv in solve_w_set(form, box, kind):
                        rects.append((w_iv.lo, w_iv.hi, RationalInterval(a, b)))
                else:
                    mn, mx = _box_extremes(form.corners, box)
                    ok = (
                        mn <= 0 <= mx if kind == "interior"
                        else mn <= 0 if kind == "v_zero"
                        else mx >= 0
                    )
                    if ok:
                        marks.append(RationalInterval(a, b))
                        break
        if child is not None:
            tables[v] = _assemble_table(v, child, rects)
        else:
            root_set = normalize_intervals(marks)
    return ExactTables(orientation=orientation, tables=tables, root_set=root_set)


def _box_extremes(corners: Sequence[Fraction], box) -> tuple[Fraction, Fraction]:
    """Min and max of the multilinear form over a box (attained at corners)."""
    if not box:
        return corners[0], corners[0]
    half = len(corners) // 2
    lo_iv = box[0]
    rest = box[1:]
    mn = None
    mx = None
    for x in {lo_iv.lo, lo_iv.hi}:
        reduced = _reduce_first(corners, x)
        a, b = _box_extremes(reduced, rest)
        mn = a if mn is None or a < mn else mn
        mx = b if mx is None or b > mx else mx
    return mn, mx


def _relation_of(v_val: Fraction) -> str:
    if v_val == ZERO:
        return "le"
    if v_val == ONE:
        return "ge"
    return "eq"


def _relation_holds(val: Fraction, relation: str) -> bool:
    if relation == "eq":
        return val == 0
    if relation == "le":
        return val <= 0
    return val >= 0


def _box_feasible(corners, box, relation: str) -> bool:
    mn, mx = _box_extremes(corners, box)
    if relation == "eq":
        return mn <= 0 <= mx
    if relation == "le":
        return mn <= 0
    return mx >= 0


def _lex_min_in_box(corners, box, relation: str) -> tuple[Fraction, ...]:
    """Lexicographically smallest point of the box satisfying the relation.

    Coordinate by coordinate: the feasible set in the leading coordinate is
    a finite union of closed intervals whose left endpoints are either the
    box edge or roots of the corner affines, so scanning those candidates
    in ascending order finds the minimum exactly.
    """
    if not box:
        assert _relation_holds(corners[0], relation)
        return ()
    lo, hi = box[0].lo, box[0].hi
    rest = box[1:]
    half = len(corners) // 2
    top = corners[:half]
    bot = corners[half:]
    candidates = {lo}
    for c0, c1 in zip(top, bot):
        slope = c0 - c1
        if slope != 0:
            r = -c1 / slope
            if lo <= r <= hi:
                candidates.add(r)
    for x in sorted(candidates):
        reduced = _reduce_first(corners, x)
        if _box_feasible(reduced, rest, relation):
            return (x,) + _lex_min_in_box(reduced, rest, relation)
    raise AssertionError("feasible box yielded no witness; relation logic broken")


def _choose_root_value(root_set, policy: Policy, rng) -> Fraction:
    if policy == "first":
        return root_set[0].lo
    if policy == "random":
        iv = root_set[rng.randrange(len(root_set))]
        t = Fraction(rng.randint(0, 1 << 16), 1 << 16)
        return iv.lo + (iv.hi - iv.lo) * t
    if callable(policy):
        z = Fraction(policy({"kind": "root", "candidates": root_set}))
        if not any(iv.contains(z) for iv in root_set):
            raise ValueError("policy callback chose a root value outside the root set")
        return z
    raise ValueError(f"unknown policy {policy!r}")


def exact_upstream(
    game: GraphicalGame,
    orientation: TreeOrientation,
    tables: ExactTables,
    policy: Policy = "first",
    seed: Optional[int] = None,
) -> tuple[Fraction, ...]:
    """Trace one exact equilibrium back from the root set.

    Boxes (one feasible interval per upstream neighbor) are scanned in
    product order; within the first feasible box the witness is the
    lexicographically smallest point, so ``policy="first"`` is fully
    deterministic.  ``policy="random"`` picks the box and the root value at
    random but keeps the canonical within-box witness.
    """
    if not tables.root_set:
        raise NoEquilibriumError("empty root set; exact existence is violated (bug)")
    rng = random.Random(seed) if not callable(policy) else None
    assignment: dict[int, Fraction] = {}
    assignment[orientation.root] = _choose_root_value(tables.root_set, policy, rng)
    for v in reversed(orientation.order):
        parents = orientation.parents[v]
        child = orientation.child.get(v)
        v_val = assignment[v]
        if not parents:
            if child is not None:
                form = build_delta_form(game, v, (child,))
                val = delta_eval(form, (assignment[child],))
                assert _relation_holds(val, _relation_of(v_val)), (
                    f"leaf {v} assignment inconsistent with its table"
                )
            continue
        if child is not None:
            form = build_delta_form(game, v, tuple(parents) + (child,))
            corners = _reduce_last(form.corners, assignment[child])
        else:
            form = build_delta_form(game, v, tuple(parents))
            corners = form.corners
        relation = _relation_of(v_val)
        feas = [tables.tables[u].feasible_at(v_val) for u in parents]
        assert all(feas), f"vertex {v} has a parent with empty feasible set"
        boxes = list(itertools.product(*feas))
        feasible_boxes = [bx for bx in boxes if _box_feasible(corners, bx, relation)]
        assert feasible_boxes, (
            f"vertex {v} at {v_val} admits no feasible box; tables inconsistent"
        )
        if policy == "first":
            box = feasible_boxes[0]
        elif policy == "random":
            box = feasible_boxes[rng.randrange(len(feasible_boxes))]
        elif callable(policy):
            box = policy({"kind": "vertex", "vertex": v,
                          "candidates": feasible_boxes})
            if box not in feasible_boxes:
                raise ValueError("policy callback chose a box outside the candidates")
        else:
            raise ValueError(f"unknown policy {policy!r}")
        witness = _lex_min_in_box(corners, box, relation)
        for u, val in zip(parents, witness):
            assignment[u] = val
    return tuple(assignment[i] for i in range(game.n))


def _reduce_last(corners: Sequence[Fraction], x) -> tuple[Fraction, ...]:
    """Substitute the least significant variable."""
    x = Fraction(x)
    return tuple(x * corners[i] + (1 - x) * corners[i + 1]
                 for i in range(0, len(corners), 2))


def exact_tree_nash(
    game: GraphicalGame,
    root: Optional[int] = None,
    policy: Policy = "first",
    seed: Optional[int] = None,
) -> tuple[Fraction, ...]:
    """An exact mixed equilibrium of a tree game with rational payoffs.

    Every entry of the returned profile is a Fraction and every player's
    regret is exactly zero.
    """
    require_valid(game)
    _require_rational(game)
    if root is None:
        root = pick_root(game)
    orientation = orient(game, root)
    tables = exact_downstream(game, orientation)
    profile = exact_upstream(game, orientation, tables, policy=policy, seed=seed)
    for i in range(game.n):
        assert regret(game, i, profile) == 0, (
            f"player {i} has nonzero regret; exact construction broken"
        )
    return profile
