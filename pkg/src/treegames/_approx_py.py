"""Pure-Python downstream kernels for the grid solver.

The compiled backend mirrors these functions exactly; both must perform the
same floating-point operations in the same order so their tables agree bit
for bit.  Shared conventions:

- a table is a ``(m+1, m+1)`` uint8 array; ``bits[w, u]`` is 1 when the
  owner playing ``u/m`` is admissible against its downstream neighbor
  playing ``w/m``;
- grid index ``i`` always maps to the probability ``i / m`` (never
  ``i * tau``, which rounds differently);
- corner arrays hold the owner's payoff difference (action 0 minus
  action 1) at every joint pure action of the listed variables, first
  variable most significant.

Admissibility of ``u`` against the payoff difference ``d`` means the regret
``max((1-u)*d, -u*d)`` stays within ``eps``, which is the window condition
``-eps/u <= d <= eps/(1-u)`` with the usual conventions at ``u in {0, 1}``.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

INF = math.inf


def window(v_idx: int, m: int, eps: float) -> tuple[float, float]:
    """Bounds the payoff difference must satisfy for regret <= eps at v/m."""
    v = v_idx / m
    lo = -INF if v_idx == 0 else -eps / v
    hi = INF if v_idx == m else eps / (1.0 - v)
    return lo, hi


def ceil_index(x: float, m: int) -> int:
    """Smallest grid index i with i/m >= x; m+1 when none exists."""
    if x <= 0.0:
        return 0
    if x > 1.0:
        return m + 1
    return int(math.ceil(x * m))


def floor_index(x: float, m: int) -> int:
    """Largest grid index i with i/m <= x; -1 when none exists."""
    if x >= 1.0:
        return m
    if x < 0.0:
        return -1
    return int(math.floor(x * m))


def runs_of(row: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of set bits as inclusive (start, end) index pairs."""
    idx = np.flatnonzero(row)
    if idx.size == 0:
        return []
    gaps = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate(([0], gaps + 1))
    ends = np.concatenate((gaps, [idx.size - 1]))
    return [(int(idx[a]), int(idx[b])) for a, b in zip(starts, ends)]


def reduce_first(d: np.ndarray, u: float) -> np.ndarray:
    """Substitute the most significant variable with mixing weight u."""
    half = d.shape[0] // 2
    return u * d[:half] + (1.0 - u) * d[half:]


def window_hit(p: float, q: float, runs: list, L: float, H: float, m: int) -> bool:
    """Does some grid point u in the runs satisfy L <= p + q*u <= H?"""
    if q == 0.0:
        return bool(runs) and L <= p <= H
    if q > 0.0:
        a, b = (L - p) / q, (H - p) / q
    else:
        a, b = (H - p) / q, (L - p) / q
    ia, ib = ceil_index(a, m), floor_index(b, m)
    if ia > ib:
        return False
    for si, ti in runs:
        if max(ia, si) <= min(ib, ti):
            return True
    return False


def _halfline(a: float, b: float, geq: bool) -> tuple[float, float] | None:
    """Solve {w in [0,1] : a + b*w >= 0} (or <= 0), as one closed interval."""
    if not geq:
        a, b = -a, -b
    if b == 0.0:
        return (0.0, 1.0) if a >= 0.0 else None
    r = -a / b
    lo, hi = (r, 1.0) if b > 0.0 else (0.0, r)
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    return (lo, hi) if lo <= hi else None


def _union(ivs: list) -> list:
    out: list = []
    for lo, hi in sorted(ivs):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _intersect(xs: list, ys: list) -> list:
    out = []
    for a, b in xs:
        for c, d in ys:
            lo, hi = max(a, c), min(b, d)
            if lo <= hi:
                out.append((lo, hi))
    return out


def scan_bilinear(out_row: np.ndarray, d: np.ndarray, runs: list,
                  L: float, H: float, m: int) -> bool:
    """Mark the w grid points admitting a grid u in the runs.

    ``d`` holds the four payoff-difference corners over (u, w) and the runs
    describe the valid u set.  The window height H - L is compared against
    the steepest u-slope: when wide enough, a continuous u solution implies
    a grid one, so the w set can be marked analytically from the run
    endpoints; otherwise each w is checked with exact ceil/floor index
    arithmetic.  Returns True when the row is known to be saturated, so
    callers can stop enumerating upstream combinations early.
    """
    c00 = d[3]
    c01 = d[2] - d[3]
    c10 = d[1] - d[3]
    c11 = d[0] - d[1] - d[2] + d[3]
    q0 = abs(c10)
    q1 = abs(c10 + c11)
    steep = q0 if q0 > q1 else q1
    full = False
    if H - L >= steep / m:
        for si, ti in runs:
            s = si / m
            t = ti / m
            a_s, b_s = c00 + c10 * s, c01 + c11 * s
            a_t, b_t = c00 + c10 * t, c01 + c11 * t
            ge = _union([iv for iv in (_halfline(a_s - L, b_s, True),
                                       _halfline(a_t - L, b_t, True)) if iv])
            le = _union([iv for iv in (_halfline(a_s - H, b_s, False),
                                       _halfline(a_t - H, b_t, False)) if iv])
            for wa, wb in _intersect(ge, le):
                ia, ib = ceil_index(wa, m), floor_index(wb, m)
                if ia <= ib:
                    out_row[ia:ib + 1] = 1
                    if ia == 0 and ib == m:
                        full = True
    else:
        misses = 0
        for wi in range(m + 1):
            if out_row[wi]:
                continue
            w = wi / m
            p = c00 + c01 * w
            q = c10 + c11 * w
            if window_hit(p, q, runs, L, H, m):
                out_row[wi] = 1
            else:
                misses += 1
        full = misses == 0
    return full


def leaf_bits(d_child0: float, d_child1: float, m: int, eps: float) -> np.ndarray:
    """Table of a vertex with no upstream neighbors."""
    bits = np.zeros((m + 1, m + 1), dtype=np.uint8)
    for wi in range(m + 1):
        w = wi / m
        dd = w * d_child0 + (1.0 - w) * d_child1
        if dd > 0.0:
            lo, hi = 1.0 - eps / dd, 1.0
        elif dd < 0.0:
            lo, hi = 0.0, -eps / dd
        else:
            lo, hi = 0.0, 1.0
        ia, ib = ceil_index(lo, m), floor_index(hi, m)
        if ia <= ib:
            bits[wi, ia:ib + 1] = 1
    return bits


def internal_bits(d: np.ndarray, parent_tables: list, m: int, eps: float) -> np.ndarray:
    """Table of a vertex with upstream neighbors and a downstream one.

    ``d``: payoff-difference corners over (upstream..., downstream), first
    upstream variable most significant.  ``parent_tables``: one table per
    upstream neighbor, ascending owner order.  The last upstream neighbor is
    scanned through the window; the others are enumerated.
    """
    out = np.zeros((m + 1, m + 1), dtype=np.uint8)  # [v, w] until transposed
    k = len(parent_tables)
    for vi in range(m + 1):
        sets = [np.flatnonzero(t[vi]) for t in parent_tables]
        if any(s.size == 0 for s in sets):
            continue
        L, H = window(vi, m, eps)
        runs = runs_of(parent_tables[-1][vi])
        if k == 1:
            scan_bilinear(out[vi], d, runs, L, H, m)
        else:
            combos = 0
            for rest in itertools.product(*(s.tolist() for s in sets[:-1])):
                dd = d
                for ui in rest:
                    dd = reduce_first(dd, ui / m)
                full = scan_bilinear(out[vi], dd, runs, L, H, m)
                combos += 1
                # stop once the row saturates; check lazily because the
                # saturation signal from the scan is only a fast path
                if full or (combos % 256 == 0
                            and int(np.count_nonzero(out[vi])) == m + 1):
                    break
    return np.ascontiguousarray(out.T)


def root_bits(d: np.ndarray, parent_tables: list, m: int, eps: float) -> np.ndarray:
    """Feasible root strategies; 1-D because the root has no downstream edge."""
    out = np.zeros(m + 1, dtype=np.uint8)
    k = len(parent_tables)
    for zi in range(m + 1):
        L, H = window(zi, m, eps)
        if k == 0:
            if L <= d[0] <= H:
                out[zi] = 1
            continue
        sets = [np.flatnonzero(t[zi]) for t in parent_tables]
        if any(s.size == 0 for s in sets):
            continue
        runs = runs_of(parent_tables[-1][zi])
        if k == 1:
            if window_hit(d[1], d[0] - d[1], runs, L, H, m):
                out[zi] = 1
            continue
        for rest in itertools.product(*(s.tolist() for s in sets[:-1])):
            dd = d
            for ui in rest:
                dd = reduce_first(dd, ui / m)
            if window_hit(dd[1], dd[0] - dd[1], runs, L, H, m):
                out[zi] = 1
                break
    return out


def iter_witnesses(d_parents: np.ndarray, parent_tables: list, v_idx: int,
                   m: int, eps: float):
    """Yield upstream witnesses for a table cell in ascending tuple order.

    ``d_parents`` holds the payoff-difference corners over the upstream
    neighbors only (the downstream value, if any, already substituted).
    Each witness is a tuple of grid indices, one per upstream neighbor in
    ascending order; the last coordinate is solved through the window, the
    others are enumerated, so the stream is lexicographically sorted.
    """
    sets = [np.flatnonzero(t[v_idx]) for t in parent_tables]
    if any(s.size == 0 for s in sets):
        return
    L, H = window(v_idx, m, eps)
    runs = runs_of(parent_tables[-1][v_idx])
    for rest in itertools.product(*(s.tolist() for s in sets[:-1])):
        dd = d_parents
        for ui in rest:
            dd = reduce_first(dd, ui / m)
        p, q = dd[1], dd[0] - dd[1]
        if q == 0.0:
            if not (L <= p <= H):
                continue
            ia, ib = 0, m
        elif q > 0.0:
            ia, ib = ceil_index((L - p) / q, m), floor_index((H - p) / q, m)
        else:
            ia, ib = ceil_index((H - p) / q, m), floor_index((L - p) / q, m)
        for si, ti in runs:
            for ui in range(max(ia, si), min(ib, ti) + 1):
                yield rest + (ui,)


def bits_with_witnesses(d: np.ndarray, parent_tables: list, m: int, eps: float,
                        has_child: bool):
    """Downstream step that also records every witness per output cell.

    Slower than the marking kernels (it enumerates the full upstream grid
    product), intended for enumeration-scale instances.  Returns
    ``(bits, witnesses)``; for a vertex with a downstream edge the bits are
    laid out ``[w, v]`` and the witness dict is keyed ``(w_idx, v_idx)``,
    for the root they are 1-D and keyed ``z_idx``.
    """
    k = len(parent_tables)
    if has_child:
        out = np.zeros((m + 1, m + 1), dtype=np.uint8)
    else:
        out = np.zeros(m + 1, dtype=np.uint8)
    witnesses: dict = {}
    for vi in range(m + 1):
        sets = [np.flatnonzero(t[vi]).tolist() for t in parent_tables]
        if any(not s for s in sets):
            continue
        L, H = window(vi, m, eps)
        for combo in itertools.product(*sets):
            dd = d
            for ui in combo:
                dd = reduce_first(dd, ui / m)
            if not has_child:
                if L <= dd[0] <= H:
                    out[vi] = 1
                    witnesses.setdefault(vi, []).append(combo)
                continue
            p, q = dd[1], dd[0] - dd[1]
            if q == 0.0:
                if not (L <= p <= H):
                    continue
                ia, ib = 0, m
            elif q > 0.0:
                ia, ib = ceil_index((L - p) / q, m), floor_index((H - p) / q, m)
            else:
                ia, ib = ceil_index((H - p) / q, m), floor_index((L - p) / q, m)
            for wi in range(ia, ib + 1):
                out[wi, vi] = 1
                witnesses.setdefault((wi, vi), []).append(combo)
    return out, witnesses
