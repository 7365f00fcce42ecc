"""Coverage and variance bounds for random sampling against an assumed frontier
size, solvers for the sample size n and iteration count, and kernel-based sample
generation for the iterative workflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random

from .model import Hierarchy, ItemCorpus, Sample

# Replication preset: the published operating point for delta=0.95, f=16.
PUBLISHED_OPERATING_POINT = {"delta": 0.95, "f": 16, "n": 115}


class KernelOverflowError(ValueError):
    """Kernel leaves no room for new items; split it and issue portion tasks."""


def coverage_lower_bound(n: int, f: int) -> float:
    """Lower bound on the expected fraction of the corpus covered by the
    concepts of an f-sized complete frontier that n random items discover:
    1 - (f/(n+1)) * (1 - 1/(n+1))^n."""
    if n < 0 or f < 0:
        raise ValueError("n and f must be non-negative")
    if f == 0:
        return 1.0
    return 1.0 - (f / (n + 1.0)) * (1.0 - 1.0 / (n + 1.0)) ** n


def variance_upper_bound(n: int, f: int) -> float:
    """Upper bound on the variance of the frontier coverage:
    1 - (coverage lower bound)^2."""
    lb = coverage_lower_bound(n, f)
    return 1.0 - lb * lb


def solve_sample_size(delta: float, f: int) -> int:
    """Smallest n whose coverage lower bound reaches delta. The bound increases
    towards 1 in n, so a forward scan terminates."""
    if not (0.0 < delta < 1.0):
        raise ValueError("delta must lie in (0, 1)")
    if f < 0:
        raise ValueError("f must be non-negative")
    if f == 0:
        return 0
    n = 1
    while coverage_lower_bound(n, f) < delta:
        n += 1
        if n > 10_000_000:  # delta < 1 always terminates well before this
            raise RuntimeError("sample size solve did not converge")
    return n


def solve_iterations(n: int, f: int, h: int) -> int:
    """Smallest tau with h + (h - f) * (tau - 1) >= n: each iteration clusters h
    items of which up to f are kernel repeats."""
    if h <= f:
        raise ValueError("h must exceed f")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n <= h:
        return 1
    return 1 + math.ceil((n - h) / (h - f))


def planned_task_assignments(n: int, f: int, h: int, m: int) -> int:
    """Clustering cost of the plan: m worker assignments per iteration."""
    return m * math.ceil((n - f) / (h - f)) if n > f else m


def generate_sample(
    t: Hierarchy | None,
    h: int,
    corpus: ItemCorpus,
    rng: Random,
    sample_id: str,
    iteration: int,
) -> Sample:
    """Draw the next sample: one uniformly random kernel item per leaf of the
    current hierarchy (pools included), topped up to h with uniformly random
    items not yet covered. The first iteration (t is None) is all new items."""
    if t is None:
        pool = sorted(corpus.ids())
        items = set(rng.sample(pool, min(h, len(pool))))
        return Sample(sample_id=sample_id, items=items, kernel=set(), iteration=iteration)

    kernel: set[str] = set()
    for leaf in sorted(t.leaves()):
        members = sorted(t.nodes[leaf].items)
        if not members:
            raise ValueError(f"leaf {leaf} is empty")
        kernel.add(rng.choice(members))
    if len(kernel) >= h:
        raise KernelOverflowError(
            f"kernel of size {len(kernel)} leaves no room for new items at h={h}"
        )
    fresh = sorted(corpus.ids() - t.covered_items)
    new_items = set(rng.sample(fresh, min(h - len(kernel), len(fresh))))
    return Sample(sample_id=sample_id, items=kernel | new_items, kernel=kernel, iteration=iteration)


def split_kernel(kernel: set[str], parts: int) -> list[set[str]]:
    """Partition the kernel into `parts` near-equal portions (sizes differ by at
    most one). The caller re-clusters the same new items once per portion so
    every new item can co-occur with every kernel item."""
    if parts < 2:
        raise ValueError("parts must be >= 2")
    if parts > len(kernel):
        raise ValueError("cannot split a kernel into more parts than items")
    ordered = sorted(kernel)
    base, extra = divmod(len(ordered), parts)
    portions: list[set[str]] = []
    start = 0
    for i in range(parts):
        size = base + (1 if i < extra else 0)
        portions.append(set(ordered[start : start + size]))
        start += size
    return portions


@dataclass
class CoverageReport:
    n: int
    f: int
    expected_coverage_lower_bound: float
    variance_upper_bound: float

    @classmethod
    def for_parameters(cls, n: int, f: int) -> "CoverageReport":
        return cls(
            n=n,
            f=f,
            expected_coverage_lower_bound=coverage_lower_bound(n, f),
            variance_upper_bound=variance_upper_bound(n, f),
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "f": self.f,
            "expected_coverage_lower_bound": self.expected_coverage_lower_bound,
            "variance_upper_bound": self.variance_upper_bound,
        }
