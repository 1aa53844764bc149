"""Attacker's optimal bomb allocation and the resulting game values.

For ``0 < x < n`` observed minuses the optimal allocation is d-UAP
("d-uniform-as-possible"): fill the minus boxes one at a time to depth
``d(x)``, then give every plus box one bomb, then raise the minus boxes to
``d + 1``, the plus boxes to 2, and so on until the bombs run out. With no
sign information (``x = 0`` or ``x = n``) the bombs are spread as evenly as
possible over all boxes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from slbt.combinatorics import ModelA, minus_count_pmf
from slbt.errors import DomainError, UnsupportedRegimeError
from slbt.posterior import INFINITE, PosteriorRow, PosteriorTable, posterior_from_counts


@dataclass(frozen=True)
class ExplosionModel:
    """Independent bombs, each exploding with probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p <= 1.0:
            raise DomainError(f"explosion probability must lie in (0, 1], got {self.p}")

    @property
    def q(self) -> float:
        return 1.0 - self.p

    def destroy_prob(self, u):
        """``p(u) = 1 - q**u``: chance that ``u`` bombs destroy an unlocked box."""
        return 1.0 - self.q ** u


class AllocationTuple(NamedTuple):
    """Layer/remainder encoding ``(l-, e-; l+, e+)`` of a d-UAP allocation."""

    l_minus: int
    e_minus: int
    l_plus: int
    e_plus: int

    def minus_bombs(self, x: int) -> int:
        return self.l_minus * x + self.e_minus

    def plus_bombs(self, n_plus: int) -> int:
        return self.l_plus * n_plus + self.e_plus

    def minus_counts(self, x: int) -> list[int]:
        return [self.l_minus + 1] * self.e_minus + [self.l_minus] * (x - self.e_minus)

    def plus_counts(self, n_plus: int) -> list[int]:
        return [self.l_plus + 1] * self.e_plus + [self.l_plus] * (n_plus - self.e_plus)

    def __str__(self):
        return f"({self.l_minus},{self.e_minus};{self.l_plus},{self.e_plus})"


def threshold_d(ratio, explosion: ExplosionModel, cap: int | None = None) -> int:
    """Advantage level ``d = min{i >= 1 : ratio * q**i < 1}``.

    ``ratio`` must exceed 1. An :data:`INFINITE` ratio has no finite level;
    it maps to ``cap`` (pass the bomb count so every bomb lands in a minus box).
    """
    if ratio is INFINITE:
        if cap is None:
            raise DomainError("infinite ratio needs an explicit cap")
        return max(int(cap), 1)
    if not ratio > 1.0:
        raise DomainError(f"threshold needs ratio > 1, got {ratio}")
    if explosion.p >= 1.0:
        return 1
    q = explosion.q
    # closed-form guess, then settle the boundary with the defining inequality
    d = max(1, int(math.floor(math.log(ratio) / -math.log1p(-explosion.p))) + 1)
    while d > 1 and ratio * q ** (d - 1) < 1.0:
        d -= 1
    while not ratio * q ** d < 1.0:
        d += 1
    return d


def allocate_duap(n: int, x: int, m: int, d: int) -> AllocationTuple:
    """Encode the fill-and-switch allocation of ``m`` bombs as ``(l-, e-; l+, e+)``."""
    if not 0 < x < n:
        raise DomainError(f"need 0 < x < n, got x={x}, n={n}")
    if m < 0 or d < 1:
        raise DomainError(f"need m >= 0 and d >= 1, got m={m}, d={d}")
    if m <= x * d:
        return AllocationTuple(m // x, m % x, 0, 0)
    # past the head start every round adds one plus layer then one minus layer
    rounds, rem = divmod(m - x * d, n)
    n_plus = n - x
    if rem < n_plus:
        return AllocationTuple(d + rounds, 0, rounds, rem)
    return AllocationTuple(d + rounds, rem - n_plus, rounds + 1, 0)


def uniform_allocation(n: int, m: int) -> tuple[int, int]:
    """``(l, e)`` with ``m = n*l + e``: e boxes get ``l+1`` bombs, the rest ``l``."""
    return divmod(m, n)


def value_boundary(model: ModelA, explosion: ExplosionModel, m: int) -> float:
    """``v(0, m) = v(n, m)``: even spread over boxes that are unlocked w.p. ``(n-k)/n``."""
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    n = model.n
    l, e = uniform_allocation(n, m)
    pu = explosion.destroy_prob
    return (n - model.k) / n * (e * pu(l + 1) + (n - e) * pu(l))


def _layer_value(row: PosteriorRow, explosion: ExplosionModel, n: int, t: AllocationTuple) -> float:
    pu = explosion.destroy_prob
    x = row.x
    minus = (x - t.e_minus) * pu(t.l_minus) + t.e_minus * pu(t.l_minus + 1)
    plus = (n - x - t.e_plus) * pu(t.l_plus) + t.e_plus * pu(t.l_plus + 1)
    return row.p_minus * minus + row.p_plus * plus


def value_interior(
    row: PosteriorRow, explosion: ExplosionModel, n: int, x: int, m: int
) -> tuple[float, AllocationTuple]:
    """Optimal value ``v(x, m)`` and its d-UAP tuple for ``0 < x < n``."""
    if row.x != x:
        raise DomainError(f"posterior row is for x={row.x}, not x={x}")
    d = threshold_d(row.ratio, explosion, cap=m)
    t = allocate_duap(n, x, m, d)
    return _layer_value(row, explosion, n, t), t


def strategy_value(
    row: PosteriorRow,
    explosion: ExplosionModel,
    n: int,
    x: int,
    minus: Sequence[int],
    plus: Sequence[int],
) -> float:
    """Expected destroyed boxes for an arbitrary split of bombs over minus and plus boxes."""
    if len(minus) != x or len(plus) != n - x:
        raise DomainError(f"expected {x} minus and {n - x} plus counts")
    if any(u < 0 for u in minus) or any(u < 0 for u in plus):
        raise DomainError("bomb counts must be non-negative")
    pu = explosion.destroy_prob
    s_minus = sum(pu(u) for u in minus)
    s_plus = sum(pu(u) for u in plus)
    if row.ratio is INFINITE:
        return row.p_minus * s_minus + row.p_plus * s_plus
    return row.p_plus * (row.ratio * s_minus + s_plus)


@dataclass(frozen=True, eq=False)
class GameTables:
    """Solved values for ``x = 0..n`` and ``m = 0..m_max``.

    ``v_xm[x, m]`` is NaN for zero-probability ``x``; such rows carry zero
    weight in ``v_m``. ``alloc[x][m]`` is None at ``x = 0`` and ``x = n`` and
    for undefined rows; ``d[x]`` is 0 there.
    """

    model: ModelA
    explosion: ExplosionModel
    posterior: PosteriorTable
    g: np.ndarray
    d: np.ndarray
    v_xm: np.ndarray
    v_m: np.ndarray
    alloc: list

    @property
    def m_max(self) -> int:
        return self.v_m.size - 1


def solve(model: ModelA, explosion: ExplosionModel, m_max: int) -> GameTables:
    """Fill ``v(x, m)``, ``v(m)`` and the allocations for ``m = 0..m_max``."""
    if not model.informative:
        raise UnsupportedRegimeError(
            f"solver requires a + b > 1 (got a + b = {model.a + model.b})"
        )
    if m_max < 0:
        raise DomainError(f"m_max must be non-negative, got {m_max}")
    n = model.n
    post = posterior_from_counts(model)
    g = minus_count_pmf(model).mass
    v = np.full((n + 1, m_max + 1), np.nan)
    d = np.zeros(n + 1, dtype=np.int64)
    alloc = [[None] * (m_max + 1) for _ in range(n + 1)]
    for m in range(m_max + 1):
        v[0, m] = v[n, m] = value_boundary(model, explosion, m)
    for x in range(1, n):
        if not post.defined[x]:
            continue
        row = post.row(x)
        if not row.infinite:
            d[x] = threshold_d(row.ratio, explosion)
        for m in range(m_max + 1):
            v[x, m], alloc[x][m] = value_interior(row, explosion, n, x, m)
    # undefined rows have g == 0 and contribute nothing
    weighted = np.where(np.isnan(v), 0.0, v * g[:, None])
    v_m = weighted.sum(axis=0)
    return GameTables(model, explosion, post, g, d, v, v_m, alloc)
