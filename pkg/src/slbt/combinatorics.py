"""Finite probability machinery for the symmetric locks-bombs-testing model.

The number of minus signals ``N`` splits into false minuses ``N1`` (minus on a
locked box, ``Bin(k, 1-a)``) and correct minuses ``N2`` (minus on an unlocked
box, ``Bin(n-k, b)``). Everything downstream is built from these two binomials
and their convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from slbt.errors import DomainError

PMF_TOL = 1e-9


def comb(n: int, r: int) -> int:
    """Binomial coefficient that is zero outside ``0 <= r <= n``."""
    if n < 0 or r < 0 or r > n:
        return 0
    return math.comb(n, r)


@dataclass(frozen=True)
class ModelA:
    """A symmetric A(n, k) instance: n boxes, k locks, test sensitivity a and specificity b."""

    n: int
    k: int
    a: float
    b: float

    def __post_init__(self):
        if int(self.n) != self.n or int(self.k) != self.k:
            raise DomainError(f"n and k must be integers, got n={self.n!r}, k={self.k!r}")
        if not 0 < self.k < self.n:
            raise DomainError(f"need 0 < k < n, got n={self.n}, k={self.k}")
        for name in ("a", "b"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise DomainError(f"{name} must lie in [0, 1], got {v}")

    @property
    def c(self) -> float:
        """Test quality ``(a/(1-a)) * (b/(1-b))``; inf when a or b equals 1."""
        return quality_c(self.a, self.b)

    @property
    def informative(self) -> bool:
        return self.a + self.b > 1.0


def quality_c(a: float, b: float) -> float:
    if a >= 1.0 or b >= 1.0:
        return math.inf
    return (a / (1.0 - a)) * (b / (1.0 - b))


def equal_parameter(c: float) -> float:
    """The common value theta with ``quality_c(theta, theta) == c``."""
    s = math.sqrt(c)
    return s / (1.0 + s)


@dataclass(frozen=True, eq=False)
class Pmf:
    """Probability mass function on ``{0, ..., support_max}``."""

    mass: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mass, dtype=float)
        if m.ndim != 1 or m.size == 0:
            raise DomainError("pmf mass must be a non-empty vector")
        if np.any(m < 0) or not np.all(np.isfinite(m)):
            raise DomainError("pmf mass must be finite and non-negative")
        total = m.sum()
        if abs(total - 1.0) > PMF_TOL:
            raise DomainError(f"pmf mass sums to {total!r}, not 1")
        m.flags.writeable = False
        object.__setattr__(self, "mass", m)

    @property
    def support_max(self) -> int:
        return self.mass.size - 1

    def __getitem__(self, j: int) -> float:
        if 0 <= j <= self.support_max:
            return float(self.mass[j])
        return 0.0

    def __len__(self) -> int:
        return self.mass.size

    def mean(self) -> float:
        return float(np.dot(np.arange(self.mass.size), self.mass))

    @classmethod
    def point_mass(cls, at: int, support_max: int | None = None) -> Pmf:
        size = (at if support_max is None else support_max) + 1
        m = np.zeros(size)
        m[at] = 1.0
        return cls(m)


def binomial_pmf(r: int, p: float) -> Pmf:
    """``Bin(r, p)`` pmf: ``mass[j] = C(r, j) p**j (1-p)**(r-j)``."""
    if r < 0 or int(r) != r:
        raise DomainError(f"trial count must be a non-negative integer, got {r!r}")
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"success probability must lie in [0, 1], got {p!r}")
    j = np.arange(r + 1)
    coeff = np.array([math.comb(r, i) for i in j], dtype=float)
    # 0.0**0 == 1.0 keeps the degenerate endpoints exact
    return Pmf(coeff * np.power(p, j) * np.power(1.0 - p, r - j))


def convolve(f: Pmf, g: Pmf) -> Pmf:
    """Pmf of the sum of two independent variables."""
    return Pmf(np.convolve(f.mass, g.mass))


def _components(model: ModelA, boxes: int | None) -> tuple[Pmf, Pmf]:
    n = model.n if boxes is None else boxes
    if not 0 <= model.k <= n:
        raise DomainError(f"need 0 <= k <= boxes, got k={model.k}, boxes={n}")
    return binomial_pmf(model.k, 1.0 - model.a), binomial_pmf(n - model.k, model.b)


def minus_count_pmf(model: ModelA, boxes: int | None = None) -> Pmf:
    """Distribution ``g_{n,k}`` of the number of minus signals.

    ``boxes`` replaces ``n`` while keeping ``k`` locks; ``boxes=model.n - 1``
    gives the reduced model used by the posterior formulas (``k == boxes`` is
    allowed there).
    """
    p1, p2 = _components(model, boxes)
    return convolve(p1, p2)


@dataclass(frozen=True, eq=False)
class JointTx:
    """Joint law of false minuses ``N1 = t`` and total minuses ``N = x``.

    ``mass[t, x] = P(N1 = t, N = x)`` for ``t = 0..k``, ``x = 0..n``.
    """

    n: int
    k: int
    mass: np.ndarray

    def at(self, t: int, x: int) -> float:
        if 0 <= t <= self.k and 0 <= x <= self.n:
            return float(self.mass[t, x])
        return 0.0

    def column_sums(self) -> np.ndarray:
        return self.mass.sum(axis=0)

    def conditional(self, x: int) -> np.ndarray:
        """``P(N1 = t | N = x)`` over ``t = 0..k``."""
        col = self.mass[:, x]
        total = col.sum()
        if total <= 0.0:
            raise DomainError(f"N = {x} has zero probability")
        return col / total


def joint_tx(model: ModelA) -> JointTx:
    p1, p2 = _components(model, None)
    n, k = model.n, model.k
    mass = np.zeros((k + 1, n + 1))
    for t in range(k + 1):
        mass[t, t:t + n - k + 1] = p1.mass[t] * p2.mass
    mass.flags.writeable = False
    return JointTx(n, k, mass)


def conditional_n1_mean(model: ModelA, x: int, joint: JointTx | None = None) -> float:
    """``E(N1 | N = x)``, the expected number of locks among the x minus boxes."""
    if not 0 <= x <= model.n:
        raise DomainError(f"x must lie in 0..{model.n}, got {x}")
    joint = joint_tx(model) if joint is None else joint
    cond = joint.conditional(x)
    return float(np.dot(np.arange(model.k + 1), cond))
