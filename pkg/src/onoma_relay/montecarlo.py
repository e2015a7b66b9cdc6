"""Seeded, worker-count-invariant Monte Carlo estimates of average rates.

The sample index space is cut into fixed chunks of ``CHUNK_SIZE`` draws. Chunk
``c`` of seed ``s`` draws from a Philox generator keyed by ``s`` whose counter
starts at ``c << 192``, so its stream does not depend on how chunks are
scheduled. Per-chunk moments are merged by a fixed-order pairwise tree.
"""
from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic import LinkPairSpec
from .channel import RicianLink, sample_power_gain
from .rates import ChannelRealization, SystemParams, cnoma_rate, onoma_rate, paper_terms

CHUNK_SIZE = 1 << 16
MIN_SAMPLES = 100


class EstimatorKind(enum.Enum):
    PAPER_FAITHFUL = "paper"
    SELECTION_BASED = "model"
    CNOMA = "cnoma"


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    n_samples: int


@dataclass(frozen=True)
class _Moments:
    n: int
    mean: float
    m2: float

    @classmethod
    def of(cls, x: np.ndarray) -> "_Moments":
        mu = float(np.mean(x))
        d = x - mu
        return cls(x.size, mu, float(np.dot(d, d)))

    def merge(self, other: "_Moments") -> "_Moments":
        n = self.n + other.n
        delta = other.mean - self.mean
        mean = self.mean + delta * other.n / n
        m2 = self.m2 + other.m2 + delta * delta * self.n * other.n / n
        return _Moments(n, mean, m2)

    def estimate(self) -> Estimate:
        var = self.m2 / (self.n - 1)
        return Estimate(self.mean, math.sqrt(max(var, 0.0) / self.n), self.n)


def _tree_merge(items: list):
    while len(items) > 1:
        nxt = [items[i].merge(items[i + 1]) for i in range(0, len(items) - 1, 2)]
        if len(items) % 2:
            nxt.append(items[-1])
        items = nxt
    return items[0]


def chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    if not (0 <= seed < 1 << 64):
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, chunk]))


def _chunk_sizes(n_samples: int) -> list[int]:
    full, rest = divmod(n_samples, CHUNK_SIZE)
    return [CHUNK_SIZE] * full + ([rest] if rest else [])


def draw_realization(links: Sequence[RicianLink], rng: np.random.Generator, size: int) -> ChannelRealization:
    sd, sr, rd = links
    return ChannelRealization(
        sample_power_gain(sd, rng, size),
        sample_power_gain(sr, rng, size),
        sample_power_gain(rd, rng, size),
    )


def _run(links, systems: Sequence[SystemParams], per_sample: Callable, n_samples: int,
         seed: int, workers: int) -> list[dict[str, Estimate]]:
    if n_samples < MIN_SAMPLES:
        raise ValueError(f"n_samples must be >= {MIN_SAMPLES}, got {n_samples}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    chunk_rng(seed, 0)  # validates seed
    sizes = _chunk_sizes(n_samples)

    def one_chunk(c: int):
        re = draw_realization(links, chunk_rng(seed, c), sizes[c])
        return [{k: _Moments.of(v) for k, v in per_sample(re, s).items()} for s in systems]

    if workers == 1:
        parts = [one_chunk(c) for c in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(one_chunk, range(len(sizes))))

    out = []
    for si in range(len(systems)):
        keys = parts[0][si].keys()
        out.append({k: _tree_merge([p[si][k] for p in parts]).estimate() for k in keys})
    return out


def _kind_sample(kind: EstimatorKind) -> Callable:
    def paper(re, sys):
        t = paper_terms(re, sys)
        s1 = t.c_s1 + t.d_s1
        return {"s1": s1, "s2": t.c_s2, "sum": s1 + t.c_s2}

    def breakdown(fn):
        def f(re, sys):
            r = fn(re, sys)
            return {"s1": r.rate_s1, "s2": r.rate_s2, "sum": r.rate_s1 + r.rate_s2}
        return f

    return {
        EstimatorKind.PAPER_FAITHFUL: paper,
        EstimatorKind.SELECTION_BASED: breakdown(onoma_rate),
        EstimatorKind.CNOMA: breakdown(cnoma_rate),
    }[kind]


def estimate_many(links: Sequence[RicianLink], systems: Sequence[SystemParams], kind: EstimatorKind,
                  n_samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> list[dict[str, Estimate]]:
    """Estimates {s1, s2, sum} for several systems on one shared set of draws."""
    return _run(links, systems, _kind_sample(kind), n_samples, seed, workers)


def estimate(links: Sequence[RicianLink], sys: SystemParams, kind: EstimatorKind,
             n_samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> dict[str, Estimate]:
    """Mean and standard error of the per-symbol rates and their sum.

    ``links`` is (SD, SR, RD). Equal seeds give bit-identical results for any
    ``workers``; different kinds with the same seed use the same draws.
    """
    return estimate_many(links, [sys], kind, n_samples, seed, workers)[0]


def estimate_terms(links: Sequence[RicianLink], systems: Sequence[SystemParams],
                   n_samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> list[dict[str, Estimate]]:
    """Sample means of the three averaged-rate integrands ``c_s1``, ``c_s2``, ``d_s1``."""
    def f(re, sys):
        return paper_terms(re, sys)._asdict()
    return _run(links, systems, f, n_samples, seed, workers)


def empirical_cdf(spec: LinkPairSpec, n_samples: int, seed: int, grid) -> np.ndarray:
    """Empirical P(min(X, c Y) <= g) at each grid point."""
    grid = np.asarray(grid, dtype=float)
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted ascending")
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    counts = np.zeros(grid.size, dtype=np.int64)
    for c, size in enumerate(_chunk_sizes(n_samples)):
        rng = chunk_rng(seed, c)
        x = sample_power_gain(spec.link_x, rng, size)
        y = sample_power_gain(spec.link_y, rng, size)
        m = np.sort(np.minimum(x, spec.scale_y * y))
        counts += np.searchsorted(m, grid, side="right")
    return counts / n_samples
