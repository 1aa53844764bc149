"""Seeded simulation of the full lock / test / bomb / explode process.

Random stream rule (version 1): trials are cut into consecutive blocks of
``BLOCK_SIZE``. Block ``j`` draws from ``Generator(Philox(SeedSequence(seed,
spawn_key=(j,))))`` in a fixed order: lock indices, signal uniforms,
explosion uniforms. Blocks never share state, so any schedule of blocks
(serial or threaded) produces the same numbers, and all accumulators are
integers, so the final reduction is exact.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from slbt.combinatorics import ModelA, comb
from slbt.exact import unrank_lock_config
from slbt.planner import ExplosionModel, solve, uniform_allocation

STREAM_VERSION = 1
BLOCK_SIZE = 1 << 16


@dataclass(frozen=True)
class SimConfig:
    model: ModelA
    explosion: ExplosionModel
    m: int
    trials: int
    seed: int

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.m < 0:
            raise ValueError(f"m must be >= 0, got {self.m}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class SimResult:
    mean_destroyed: float
    std_error: float
    per_x_means: np.ndarray
    per_x_std_errors: np.ndarray
    trials_per_x: np.ndarray
    trials: int

    def z_score(self, expected: float) -> float:
        return (self.mean_destroyed - expected) / self.std_error if self.std_error > 0 else (
            0.0 if self.mean_destroyed == expected else math.inf
        )


def _plan(config: SimConfig) -> np.ndarray:
    """Per-x layer tuples ``(l-, e-, l+, e+)`` as an ``(n+1, 4)`` int table."""
    n, m = config.model.n, config.m
    tables = solve(config.model, config.explosion, m)
    plan = np.full((n + 1, 4), -1, dtype=np.int64)
    l, e = uniform_allocation(n, m)
    # boundary x: every box shares one sign, spread evenly
    plan[0] = (l, e, l, e)
    plan[n] = (l, e, l, e)
    for x in range(1, n):
        t = tables.alloc[x][m]
        if t is not None:
            plan[x] = tuple(t)
    return plan


def _run_block(config: SimConfig, plan, configs, block: int, size: int):
    model = config.model
    n = model.n
    ss = np.random.SeedSequence(config.seed, spawn_key=(block,))
    rng = np.random.Generator(np.random.Philox(ss))
    idx = rng.integers(0, configs.shape[0], size=size)
    locked = configs[idx].astype(bool)
    u_sig = rng.random((size, n))
    # locked box: minus w.p. 1 - a; unlocked: minus w.p. b
    minus = np.where(locked, u_sig < 1.0 - model.a, u_sig < model.b)
    x = minus.sum(axis=1)
    if np.any(plan[x, 0] < 0):
        raise RuntimeError("sampled a minus count the planner marks impossible")
    minus_rank = np.cumsum(minus, axis=1) - 1
    plus_rank = np.cumsum(~minus, axis=1) - 1
    lt = plan[x]
    bombs = np.where(
        minus,
        lt[:, [0]] + (minus_rank < lt[:, [1]]),
        lt[:, [2]] + (plus_rank < lt[:, [3]]),
    )
    u_exp = rng.random((size, n))
    destroyed = (~locked) & (u_exp < 1.0 - config.explosion.q ** bombs)
    count = destroyed.sum(axis=1).astype(np.int64)
    hits = np.bincount(x, minlength=n + 1).astype(np.int64)
    tot = np.zeros(n + 1, dtype=np.int64)
    sq = np.zeros(n + 1, dtype=np.int64)
    np.add.at(tot, x, count)
    np.add.at(sq, x, count * count)
    return hits, tot, sq


def simulate(config: SimConfig, workers: int = 1) -> SimResult:
    """Estimate expected destroyed boxes under uniform locks and the d-UAP attacker."""
    model = config.model
    n, k = model.n, model.k
    plan = _plan(config)
    configs = np.array([unrank_lock_config(i, n, k) for i in range(comb(n, k))], dtype=np.int8)
    blocks = [
        (j, min(BLOCK_SIZE, config.trials - j * BLOCK_SIZE))
        for j in range(math.ceil(config.trials / BLOCK_SIZE))
    ]

    def work(job):
        return _run_block(config, plan, configs, *job)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(job) for job in blocks]

    counts = sum(p[0] for p in parts)
    tot = sum(p[1] for p in parts)
    sq = sum(p[2] for p in parts)
    N = config.trials
    total, total_sq = int(tot.sum()), int(sq.sum())
    mean = total / N
    var = (total_sq - total * total / N) / (N - 1) if N > 1 else 0.0
    se = math.sqrt(max(var, 0.0) / N)

    per_mean = np.full(n + 1, np.nan)
    per_se = np.full(n + 1, np.nan)
    for xv in range(n + 1):
        c = int(counts[xv])
        if c == 0:
            continue
        s, s2 = int(tot[xv]), int(sq[xv])
        per_mean[xv] = s / c
        if c > 1:
            v = (s2 - s * s / c) / (c - 1)
            per_se[xv] = math.sqrt(max(v, 0.0) / c)
    return SimResult(mean, se, per_mean, per_se, counts, N)
