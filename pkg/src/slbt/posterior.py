"""Posterior no-lock probabilities and the minus/plus attractiveness ratio.

Given ``N = x`` observed minuses (``0 < x < n``), ``p_minus(x)`` is the
probability that a box which tested minus is unlocked, ``p_plus(x)`` the same
for a box which tested plus, and ``r(x) = p_minus(x) / p_plus(x)``.

Three independent routes compute these numbers:

* :func:`posterior_from_counts` -- from ``g_{n,k}`` and the reduced ``g_{n-1,k}``;
* :func:`posterior_from_expectations` -- from conditional expectations of ``N1``;
* :func:`ratio_via_c` -- the ratio alone, as a function of ``(n, k, x, c)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from slbt.combinatorics import (
    ModelA,
    comb,
    joint_tx,
    minus_count_pmf,
    quality_c,
)
from slbt.errors import DomainError


class _Infinite:
    """Marker for an infinite ratio (a plus box is certainly locked)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


@dataclass(frozen=True)
class PosteriorRow:
    x: int
    p_minus: float
    p_plus: float
    ratio: float | _Infinite

    @property
    def infinite(self) -> bool:
        return self.ratio is INFINITE


@dataclass(frozen=True, eq=False)
class PosteriorTable:
    """Per-x posterior values, arrays indexed by ``x = 0..n``.

    Entries at ``x = 0``, ``x = n`` and zero-probability ``x`` are NaN and
    ``defined[x]`` is False there. Where ``infinite[x]`` is True the ratio
    array holds NaN; use :meth:`row` to get the :data:`INFINITE` marker.
    """

    model: ModelA
    p_minus: np.ndarray
    p_plus: np.ndarray
    ratio: np.ndarray
    defined: np.ndarray
    infinite: np.ndarray

    def row(self, x: int) -> PosteriorRow:
        if not 0 < x < self.model.n:
            raise DomainError(f"posterior rows exist for 0 < x < n only, got x={x}")
        if not self.defined[x]:
            raise DomainError(f"x={x} has zero probability; row undefined")
        ratio = INFINITE if self.infinite[x] else float(self.ratio[x])
        return PosteriorRow(x, float(self.p_minus[x]), float(self.p_plus[x]), ratio)

    def rows(self):
        return [self.row(x) for x in range(1, self.model.n) if self.defined[x]]


def _blank(n):
    nan = np.full(n + 1, np.nan)
    return nan.copy(), nan.copy(), nan.copy(), np.zeros(n + 1, bool), np.zeros(n + 1, bool)


def posterior_from_counts(model: ModelA) -> PosteriorTable:
    """Posterior row values from ``g_{n,k}`` and the reduced ``g_{n-1,k}``."""
    n, k, b = model.n, model.k, model.b
    g = minus_count_pmf(model)
    g1 = minus_count_pmf(model, boxes=n - 1)
    pm, pp, ratio, defined, infinite = _blank(n)
    for x in range(1, n):
        if g[x] == 0.0:
            continue
        defined[x] = True
        pm[x] = (n - k) / x * b * g1[x - 1] / g[x]
        pp[x] = (n - k) / (n - x) * (1.0 - b) * g1[x] / g[x]
        if pp[x] == 0.0:
            infinite[x] = True
        else:
            ratio[x] = b / (1.0 - b) * (n - x) / x * g1[x - 1] / g1[x]
    return PosteriorTable(model, pm, pp, ratio, defined, infinite)


def posterior_from_expectations(model: ModelA) -> PosteriorTable:
    """Posterior row values as expected proportions of correct minuses / false pluses."""
    n, k = model.n, model.k
    joint = joint_tx(model)
    t = np.arange(k + 1)
    pm, pp, ratio, defined, infinite = _blank(n)
    for x in range(1, n):
        col = joint.mass[:, x]
        gx = col.sum()
        if gx == 0.0:
            continue
        defined[x] = True
        # E(N2|x) and E(U2|x) as direct weighted sums so structural zeros stay exact
        e_n2 = float(np.dot(x - t, col)) / gx
        e_u2 = float(np.dot(np.clip(n - k - x + t, 0, None), col)) / gx
        pm[x] = e_n2 / x
        pp[x] = e_u2 / (n - x)
        if e_u2 == 0.0:
            infinite[x] = True
        else:
            ratio[x] = (n - x) / x * e_n2 / e_u2
    return PosteriorTable(model, pm, pp, ratio, defined, infinite)


def ratio_via_c(model: ModelA, x: int) -> float:
    """``r_{n,k}(x)`` computed only from ``n, k, x`` and the test quality ``c``."""
    n, k, a, b = model.n, model.k, model.a, model.b
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise DomainError("ratio_via_c needs a and b strictly inside (0, 1)")
    if not 0 < x < n:
        raise DomainError(f"need 0 < x < n, got x={x}")
    return ratio_from_c(n, k, x, quality_c(a, b))


def ratio_from_c(n: int, k: int, x: int, c: float) -> float:
    if c <= 0.0:
        raise DomainError(f"c must be positive, got {c}")
    lo, hi = max(0, x - n + k), min(k, x)
    num = sum(comb(k, i) * comb(n - k - 1, x - i - 1) * c ** (-i) for i in range(lo, hi + 1))
    den = sum(comb(k, i) * comb(n - k - 1, x - i) * c ** (-i) for i in range(lo, hi + 1))
    return (n - x) / x * num / den


def ratio_model_b(a: float, b: float, lam: float) -> float:
    """Minus/plus ratio in the independent-locks model (each box locked w.p. ``lam``)."""
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    if not (0.0 <= a <= 1.0 and 0.0 <= b < 1.0):
        raise DomainError("need a in [0, 1] and b in [0, 1)")
    h = a + b - 1.0
    if b - lam * h <= 0.0:
        raise DomainError("b - lambda*(a+b-1) must be positive")
    return b / (1.0 - b) * (1.0 - b + lam * h) / (b - lam * h)


def marginal_probs(model: ModelA) -> tuple[float, float, float]:
    """Unconditional per-box ``(P(T=0), P(S=0), P(S=1))``."""
    t = model.k / model.n
    s0 = t * (1.0 - model.a) + (1.0 - t) * model.b
    s1 = t * model.a + (1.0 - t) * (1.0 - model.b)
    return 1.0 - t, s0, s1

