"""Exhaustive small-n engine for the general (possibly asymmetric-prior) game.

Lock configurations ``gamma`` (n-bit vectors with k ones) and signals ``s``
(n-bit vectors, 1 = plus) are enumerated in lexicographic bit order, so row
``i`` of :func:`lock_configs` is ``unrank_lock_config(i, n, k)``. Matrices are
dense; the sizes are tiny for ``n <= 8``.

This module is deliberately independent of :mod:`slbt.posterior` and
:mod:`slbt.planner`: it recomputes posteriors by Bayes' rule over every
``(gamma, s)`` pair and finds optimal allocations by brute force, so the
closed-form solver can be checked against it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from slbt.combinatorics import ModelA, comb
from slbt.errors import DomainError, GuardError

MAX_ENUM_BOXES = 8
ORACLE_MAX_BOXES = 8
ORACLE_MAX_BOMBS = 16
GRID_MAX_CONFIGS = 3
TIE_TOL = 1e-9


def _check_boxes(n: int):
    if not 1 <= n <= MAX_ENUM_BOXES:
        raise GuardError(f"exhaustive enumeration supports 1 <= n <= {MAX_ENUM_BOXES}, got n={n}")


@lru_cache(maxsize=None)
def _lock_configs(n: int, k: int) -> np.ndarray:
    rows = [bits for bits in itertools.product((0, 1), repeat=n) if sum(bits) == k]
    arr = np.array(rows, dtype=np.int8).reshape(len(rows), n)
    arr.flags.writeable = False
    return arr


def lock_configs(n: int, k: int) -> np.ndarray:
    """All ``C(n, k)`` lock placements, one per row, lexicographic order."""
    _check_boxes(n)
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}")
    return _lock_configs(n, k)


def unrank_lock_config(index: int, n: int, k: int) -> tuple[int, ...]:
    """The ``index``-th k-subset of ``n`` boxes in lexicographic bit order."""
    total = comb(n, k)
    if not 0 <= index < total:
        raise DomainError(f"index must lie in [0, {total}), got {index}")
    bits = []
    remaining = k
    for pos in range(n):
        # placements with a 0 here come first
        with_zero = comb(n - pos - 1, remaining)
        if index < with_zero:
            bits.append(0)
        else:
            index -= with_zero
            bits.append(1)
            remaining -= 1
    return tuple(bits)


@lru_cache(maxsize=None)
def _signals(n: int) -> np.ndarray:
    arr = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int8).reshape(2**n, n)
    arr.flags.writeable = False
    return arr


def signals(n: int) -> np.ndarray:
    """All ``2**n`` signal vectors, lexicographic order (1 = plus, 0 = minus)."""
    _check_boxes(n)
    return _signals(n)


def minus_count(s: Sequence[int]) -> int:
    return len(s) - int(sum(s))


def likelihood(gamma: Sequence[int], s: Sequence[int], a: float, b: float) -> float:
    """``P(S = s | locks at gamma)`` with independent per-box tests."""
    if len(gamma) != len(s):
        raise DomainError("gamma and s must have equal length")
    out = 1.0
    for g_i, s_i in zip(gamma, s):
        if g_i:
            out *= a if s_i else 1.0 - a
        else:
            out *= 1.0 - b if s_i else b
    return out


def likelihood_matrix(n: int, k: int, a: float, b: float) -> np.ndarray:
    """Matrix ``P[gamma, s]`` of signal probabilities; rows are stochastic."""
    gam = lock_configs(n, k).astype(bool)[:, None, :]
    sig = signals(n).astype(bool)[None, :, :]
    per_box = np.where(gam, np.where(sig, a, 1.0 - a), np.where(sig, 1.0 - b, b))
    return per_box.prod(axis=2)


@dataclass(frozen=True, eq=False)
class Prior:
    """Defender's distribution over the lexicographically indexed lock placements."""

    n: int
    k: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (comb(self.n, self.k),):
            raise DomainError(f"prior needs {comb(self.n, self.k)} weights, got shape {w.shape}")
        if np.any(w < 0) or abs(w.sum() - 1.0) > 1e-12:
            raise DomainError("prior weights must be non-negative and sum to 1")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int, k: int) -> Prior:
        m = comb(n, k)
        return cls(n, k, np.full(m, 1.0 / m))

    @classmethod
    def point_mass(cls, n: int, k: int, index: int) -> Prior:
        w = np.zeros(comb(n, k))
        w[index] = 1.0
        return cls(n, k, w)

    def lock_marginals(self) -> np.ndarray:
        """``P(T_i = 1)`` per box."""
        return self.weights @ lock_configs(self.n, self.k)


def signal_prob(prior: Prior, s: Sequence[int], a: float, b: float) -> float:
    """Total probability of signal ``s`` under the prior."""
    configs = lock_configs(prior.n, prior.k)
    return float(sum(w * likelihood(g, s, a, b) for w, g in zip(prior.weights, configs)))


def signal_probs(prior: Prior, a: float, b: float) -> np.ndarray:
    """``p(s | prior)`` for every signal, lexicographic order."""
    return prior.weights @ likelihood_matrix(prior.n, prior.k, a, b)


@dataclass(frozen=True, eq=False)
class PosteriorMatrix:
    """``theta[s, gamma]``; rows for zero-probability signals are NaN."""

    theta: np.ndarray
    signal_prob: np.ndarray
    defined: np.ndarray


def posterior_matrix(prior: Prior, a: float, b: float) -> PosteriorMatrix:
    joint = prior.weights[:, None] * likelihood_matrix(prior.n, prior.k, a, b)
    ps = joint.sum(axis=0)
    defined = ps > 0.0
    theta = np.full(joint.T.shape, np.nan)
    theta[defined] = joint.T[defined] / ps[defined, None]
    return PosteriorMatrix(theta, ps, defined)


@dataclass(frozen=True, eq=False)
class MarginalMatrix:
    """``alpha[s, i] = P(T_i = 0 | s)``; NaN rows for zero-probability signals."""

    alpha: np.ndarray
    defined: np.ndarray


def marginal_matrix(prior: Prior, a: float, b: float) -> MarginalMatrix:
    post = posterior_matrix(prior, a, b)
    unlocked = 1 - lock_configs(prior.n, prior.k)
    alpha = post.theta @ unlocked
    return MarginalMatrix(alpha, post.defined)


def partition_size(n: int, k: int, t: int, x: int) -> int:
    """``|G(t, x)|``: pairs (gamma, s) with t false minuses and x minuses overall."""
    return comb(n, k) * comb(k, t) * comb(n - k, x - t)


@dataclass(frozen=True, eq=False)
class PartitionTable:
    """Cell sizes ``|G(t, x)|`` by enumeration and per-pair probabilities ``p(t, x)``."""

    counts: np.ndarray
    p_tx: np.ndarray


def partition_counts(model: ModelA) -> PartitionTable:
    """Count every ``(gamma, s)`` pair into its ``(N1, N)`` cell by enumeration."""
    n, k, a, b = model.n, model.k, model.a, model.b
    configs = lock_configs(n, k)
    sig = signals(n)
    counts = np.zeros((k + 1, n + 1), dtype=np.int64)
    for g in configs:
        minus = sig == 0
        t = (minus & (g == 1)).sum(axis=1)
        x = minus.sum(axis=1)
        np.add.at(counts, (t, x), 1)
    p_tx = np.zeros((k + 1, n + 1))
    for t in range(k + 1):
        for x in range(t, n + 1):
            u = x - t
            if u > n - k:
                continue
            p_tx[t, x] = a ** (k - t) * (1 - a) ** t * b**u * (1 - b) ** (n - k - u)
    return PartitionTable(counts, p_tx)


@dataclass(frozen=True, eq=False)
class Stage2Result:
    """Single-bomb best response (fractional over ties) and the expected damage."""

    response: np.ndarray
    losses: np.ndarray
    damage: float


def stage2_response(
    prior: Prior, a: float, b: float, p: float, costs: Sequence[float] | None = None
) -> Stage2Result:
    """Attacker's best single-bomb response to every signal, ties split evenly."""
    n = prior.n
    c = np.ones(n) if costs is None else np.asarray(costs, dtype=float)
    if c.shape != (n,) or np.any(c <= 0):
        raise DomainError("costs must be n positive values")
    marg = marginal_matrix(prior, a, b)
    ps = signal_probs(prior, a, b)
    losses = p * c[None, :] * marg.alpha
    response = np.zeros_like(losses)
    damage = 0.0
    for j in np.flatnonzero(marg.defined):
        row = losses[j]
        best = row.max()
        ties = np.abs(row - best) <= TIE_TOL * max(1.0, abs(best))
        response[j, ties] = 1.0 / ties.sum()
        damage += ps[j] * best
    return Stage2Result(response, losses, float(damage))


@dataclass(frozen=True)
class OracleResult:
    value: float
    maximizers: list


def _partitions(total: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of ``parts`` non-negative ints summing to ``total``."""
    cap = total if cap is None else cap
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, cap), -1, -1):
        if first * parts < total:
            break
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def oracle_best_allocation(
    weights: Sequence[float], p: float, m: int, tol: float = 1e-12
) -> OracleResult:
    """Brute-force maximum of ``sum_i weights[i] * (1 - (1-p)**u_i)`` over all allocations.

    ``weights`` are the per-box no-lock probabilities (a marginal row, or
    ``[p_minus]*x + [p_plus]*(n-x)`` for a symmetric posterior). Boxes with
    equal weight are interchangeable, so within such a group only
    non-increasing bomb counts are enumerated; every other allocation is a
    permutation of one of these. Maximizers are per-box count tuples.
    """
    w = [float(v) for v in weights]
    n = len(w)
    if n > ORACLE_MAX_BOXES or m > ORACLE_MAX_BOMBS:
        raise GuardError(
            f"oracle limited to n <= {ORACLE_MAX_BOXES} and m <= {ORACLE_MAX_BOMBS}; got n={n}, m={m}"
        )
    if m < 0:
        raise DomainError("m must be non-negative")
    if not 0.0 < p <= 1.0:
        raise DomainError(f"explosion probability must lie in (0, 1], got {p}")
    q = 1.0 - p
    groups: dict[float, list[int]] = {}
    for i, v in enumerate(w):
        groups.setdefault(v, []).append(i)
    members = list(groups.values())
    destroy = [1.0 - q**u for u in range(m + 1)]

    best = -math.inf
    found: list[tuple[int, ...]] = []
    for split in _compositions(m, len(members)):
        per_group = [list(_partitions(tot, len(idx))) for tot, idx in zip(split, members)]
        for choice in itertools.product(*per_group):
            counts = [0] * n
            for idx, parts in zip(members, choice):
                for i, u in zip(idx, parts):
                    counts[i] = u
            val = sum(w[i] * destroy[counts[i]] for i in range(n))
            if val > best + tol:
                best, found = val, [tuple(counts)]
            elif val >= best - tol:
                found.append(tuple(counts))
    return OracleResult(best, found)


def oracle_for_row(p_minus: float, p_plus: float, n: int, x: int, p: float, m: int) -> OracleResult:
    """Oracle over a symmetric posterior row: x minus boxes first, then n - x plus boxes."""
    return oracle_best_allocation([p_minus] * x + [p_plus] * (n - x), p, m)


@dataclass(frozen=True, eq=False)
class GridSearchResult:
    minimizers: list
    value: float
    grid: np.ndarray
    values: np.ndarray


def _simplex_grid(dim: int, steps: int) -> np.ndarray:
    if dim == 1:
        return np.ones((1, 1))
    pts = [c for c in itertools.product(range(steps + 1), repeat=dim - 1) if sum(c) <= steps]
    arr = np.array(pts, dtype=float)
    return np.column_stack([arr, steps - arr.sum(axis=1)]) / steps


def damage_values(priors: np.ndarray, n: int, k: int, a: float, b: float, p: float,
                  costs: Sequence[float] | None = None) -> np.ndarray:
    """Single-bomb damage for many priors at once (rows of ``priors``)."""
    c = np.ones(n) if costs is None else np.asarray(costs, dtype=float)
    lik = likelihood_matrix(n, k, a, b)
    unlocked = 1 - lock_configs(n, k)
    # coef[s, i, gamma] = p * c_i * [i unlocked in gamma] * P(s | gamma)
    coef = p * c[None, :, None] * unlocked.T[None, :, :] * lik.T[:, None, :]
    loss = np.einsum("sig,pg->psi", coef, priors)
    return loss.max(axis=2).sum(axis=1)


def gridsearch_prior(
    model: ModelA, p: float, resolution: float, costs: Sequence[float] | None = None
) -> GridSearchResult:
    """Minimize single-bomb damage over a simplex grid of priors (tiny models only)."""
    m_cfg = comb(model.n, model.k)
    if m_cfg > GRID_MAX_CONFIGS:
        raise GuardError(f"grid search limited to C(n,k) <= {GRID_MAX_CONFIGS}, got {m_cfg}")
    if not 0.0 < resolution <= 1.0:
        raise DomainError(f"resolution must lie in (0, 1], got {resolution}")
    steps = int(round(1.0 / resolution))
    grid = _simplex_grid(m_cfg, steps)
    values = damage_values(grid, model.n, model.k, model.a, model.b, p, costs)
    best = float(values.min())
    hit = np.flatnonzero(values <= best + TIE_TOL)
    return GridSearchResult([grid[i] for i in hit], best, grid, values)
