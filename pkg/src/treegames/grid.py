"""Strategy discretisation.

The approximate solver restricts every mixed strategy to the uniform grid
``{0, 1/m, ..., 1}``.  The resolution needed for a coverage guarantee grows
with the target accuracy and with the largest closed neighborhood in the
game; ``compute_tau`` computes the coarsest grid that still carries the
guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class TauGrid:
    """The uniform grid with spacing ``1/m`` on ``[0, 1]``."""

    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("grid resolution m must be >= 1")

    @property
    def tau(self) -> float:
        return 1.0 / self.m

    @property
    def size(self) -> int:
        return self.m + 1

    def value(self, i: int) -> float:
        if not (0 <= i <= self.m):
            raise IndexError(f"grid index {i} out of range 0..{self.m}")
        return i / self.m

    def values(self) -> list[float]:
        return [i / self.m for i in range(self.m + 1)]

    def nearest_index(self, x: float) -> int:
        """Index of the closest grid point, clamped to [0, 1]."""
        i = round(x * self.m)
        return min(self.m, max(0, int(i)))


def _klogk(k: int) -> float:
    return max(k * math.log2(k), 1.0) if k > 1 else 1.0


def compute_tau(k: int, eps: float) -> TauGrid:
    """Coarsest grid whose spacing meets the coverage bound.

    For neighborhood size ``k`` and accuracy ``eps``, the spacing must stay
    below both ``eps / (2**(k+2) * k*log2(k))`` and the cap
    ``2 / (k * log2(k/2)**2)`` under which the product-error bound holds.
    The logarithmic factors are clamped to 1 for small ``k``.
    """
    if k < 1:
        raise ValueError("neighborhood size k must be >= 1")
    if not (0 < eps <= 4):
        raise ValueError(f"eps must be in (0, 4], got {eps}")
    accuracy_bound = eps / (2 ** (k + 2) * _klogk(k))
    log_half = math.log2(k / 2) if k >= 1 else 0.0
    validity_cap = 2.0 / (k * max(log_half, 1.0) ** 2)
    bound = min(accuracy_bound, validity_cap)
    m = math.ceil(1.0 / bound)
    # Guard against float rounding in the ceil; the spacing must not exceed
    # the bound.
    while 1.0 / m > bound:
        m += 1
    while m > 1 and 1.0 / (m - 1) <= bound:
        m -= 1
    return TauGrid(m=m)
