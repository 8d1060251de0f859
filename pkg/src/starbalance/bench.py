"""Random platform families and the distance-to-best comparison of the heuristics."""

from __future__ import annotations

import csv
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from pathlib import Path
from typing import Iterable, Sequence

from .core import Platform, Worker
from .heuristics import bba, mbbsa, rbsa

MIN_TASKS = 50

# (c range, w range) per regime
REGIMES = {
    "general": ((1, 100), (1, 100)),
    "c<=w": ((20, 50), (50, 80)),
    "c>=w": ((50, 80), (20, 50)),
}
REGIME_ALIASES = {
    "general": "general",
    "c<=w": "c<=w", "c-le-w": "c<=w", "comm<=comp": "c<=w",
    "c>=w": "c>=w", "c-ge-w": "c>=w", "comm>=comp": "c>=w",
}

HEURISTICS = {"bba": bba, "mbbsa": mbbsa, "rbsa": rbsa}


@dataclass(frozen=True)
class PlatformFamily:
    comm: str = "het"  # "hom" or "het"
    comp: str = "het"
    regime: str = "general"

    def __post_init__(self):
        if self.comm not in ("hom", "het") or self.comp not in ("hom", "het"):
            raise ValueError(f"comm/comp must be 'hom' or 'het', got {self.comm}/{self.comp}")
        if self.regime not in REGIME_ALIASES:
            raise ValueError(f"unknown regime {self.regime!r}")
        object.__setattr__(self, "regime", REGIME_ALIASES[self.regime])

    @classmethod
    def parse(cls, family: str, regime: str = "general") -> "PlatformFamily":
        comm, _, comp = family.partition("-")
        return cls(comm, comp, regime)

    @property
    def key(self) -> str:
        return f"{self.comm}-{self.comp}/{self.regime}"

    @property
    def ranges(self):
        return REGIMES[self.regime]


def generate(family: PlatformFamily, m: int, seed) -> Platform:
    """Random platform of the family; identical seeds give identical platforms.

    Loads are uniform per worker in [0, ceil(2*50/m)], redrawn until at least
    50 tasks are present.
    """
    if m < 2:
        raise ValueError("need at least two workers")
    rng = random.Random(f"{family.key}:{m}:{seed}")
    (c_lo, c_hi), (w_lo, w_hi) = family.ranges

    def draw(lo, hi, hom):
        if hom:
            return [rng.randint(lo, hi)] * m
        return [rng.randint(lo, hi) for _ in range(m)]

    c = draw(c_lo, c_hi, family.comm == "hom")
    w = draw(w_lo, w_hi, family.comp == "hom")
    top = ceil(2 * MIN_TASKS / m)
    while True:
        loads = [rng.randint(0, top) for _ in range(m)]
        if sum(loads) >= MIN_TASKS:
            break
    return Platform(tuple(Worker(ci, wi, li) for ci, wi, li in zip(c, w, loads)))


@dataclass
class BenchStats:
    family: PlatformFamily
    makespans: dict[str, list[Fraction]] = field(default_factory=dict)
    distances: dict[str, list[Fraction]] = field(default_factory=dict)

    def mean(self, algo: str) -> float:
        return float(statistics.fmean(self.distances[algo]))

    def std(self, algo: str) -> float:
        return float(statistics.pstdev([float(d) for d in self.distances[algo]]))

    def cdf(self, algo: str, max_percent: int | None = None) -> list[tuple[int, float]]:
        """Share of instances within p% of the best, for p = 0, 1, 2, ..."""
        samples = sorted(self.distances[algo])
        if max_percent is None:
            max_percent = max(0, ceil((max(samples) - 1) * 100))
        n = len(samples)
        out = []
        for p in range(max_percent + 1):
            limit = 1 + Fraction(p, 100)
            out.append((p, sum(1 for d in samples if d <= limit) / n))
        return out

    def summary(self) -> dict:
        return {
            "family": self.family.key,
            "count": len(next(iter(self.distances.values()), [])),
            "mean": {a: self.mean(a) for a in self.distances},
            "std": {a: self.std(a) for a in self.distances},
        }

    def rows(self) -> Iterable[tuple]:
        for algo, values in self.makespans.items():
            for k, (ms, d) in enumerate(zip(values, self.distances[algo])):
                yield k, algo, ms, d


def run_instance(platform: Platform, algorithms: Sequence[str] = tuple(HEURISTICS)) -> dict[str, Fraction]:
    return {name: HEURISTICS[name](platform)[1] for name in algorithms}


def _job(args):
    family, m, seed, k = args
    return run_instance(generate(family, m, (seed, k)))


def run_benchmark(
    families: Iterable[PlatformFamily],
    count: int,
    m: int = 10,
    seed=0,
    jobs: int = 1,
) -> dict[str, BenchStats]:
    """Run all heuristics on ``count`` instances per family, normalised per instance by the best."""
    if count < 1:
        raise ValueError("count must be at least 1")
    out = {}
    for family in families:
        tasks = [(family, m, seed, k) for k in range(count)]
        if jobs > 1:
            with ProcessPoolExecutor(jobs) as pool:
                results = list(pool.map(_job, tasks, chunksize=8))
        else:
            results = [_job(t) for t in tasks]
        out[family.key] = collect(family, results)
    return out


def collect(family: PlatformFamily, results: Sequence[dict[str, Fraction]]) -> BenchStats:
    stats = BenchStats(family)
    for res in results:
        best = min(res.values())
        for algo, ms in res.items():
            stats.makespans.setdefault(algo, []).append(ms)
            # an instance whose best makespan is 0 holds no work at all
            stats.distances.setdefault(algo, []).append(ms / best if best else Fraction(1))
    return stats


def write_csv(stats: dict[str, BenchStats], path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["instance", "algorithm", "makespan", "distance", "family"])
        for key, st in stats.items():
            for k, algo, ms, d in st.rows():
                writer.writerow([k, algo, str(ms), f"{float(d):.6f}", key])
