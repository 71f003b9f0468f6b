"""Structural statistics of B*_h[g] sets: counting functions, density ratios,
interval structure of A+A, residue classes and reciprocal sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from sidonlab.constructions import greedy_extend
from sidonlab.errors import ZeroElement
from sidonlab.sets import as_elements

ZHANG_PREFIX = 14
ZHANG_TERM = 229


def counting_function(A, n: int) -> int:
    """A(n): number of elements of A that are at most n."""
    return sum(1 for a in as_elements(A) if a <= n)


@dataclass(frozen=True)
class SigmaEstimate:
    h: int
    g: int
    n: int
    R: int
    ratio: float


def sigma_estimate(h: int, g: int, n: int, config=None) -> SigmaEstimate:
    """R_h(g,n) / (floor(g/h!) n)^(1/h), with R computed by exact search."""
    from sidonlab.search import max_bstar_subset

    scale = g // math.factorial(h)
    if scale < 1:
        raise ValueError(f"the ratio needs g >= h! = {math.factorial(h)}")
    R = max_bstar_subset(n, h, g, config).optimum
    return SigmaEstimate(h, g, n, R, R / (scale * n) ** (1.0 / h))


@dataclass(frozen=True)
class IntervalDecomposition:
    """Maximal runs of consecutive integers in A+A, as inclusive (start, end)."""

    intervals: Tuple[Tuple[int, int], ...]
    count: int
    longest: int
    size: int

    @property
    def per_square(self) -> float:
        """count / |A|^2, reported for comparison with the |A|^2/3 heuristic."""
        return self.count / self.size**2 if self.size else 0.0

    def sums(self) -> List[int]:
        return [s for a, b in self.intervals for s in range(a, b + 1)]


def sumset_intervals(A) -> IntervalDecomposition:
    els = as_elements(A)
    sums = sorted({a + b for i, a in enumerate(els) for b in els[i:]})
    runs: List[Tuple[int, int]] = []
    for s in sums:
        if runs and s == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], s)
        else:
            runs.append((s, s))
    longest = max((b - a + 1 for a, b in runs), default=0)
    return IntervalDecomposition(tuple(runs), len(runs), longest, len(els))


@dataclass(frozen=True)
class DistributionReport:
    modulus: int
    class_counts: Tuple[int, ...]
    discrepancy: float
    parity_gap: Optional[int] = None


def residue_distribution(A, m: int) -> DistributionReport:
    """Counts of A in each class mod m and the largest deviation from |A|/m."""
    if m < 2:
        raise ValueError("m must be >= 2")
    els = as_elements(A)
    counts = [0] * m
    for a in els:
        counts[a % m] += 1
    mean = Fraction(len(els), m)
    disc = max(abs(c - mean) for c in counts)
    gap = abs(counts[0] - counts[1]) if m == 2 else None
    return DistributionReport(m, tuple(counts), float(disc), gap)


@dataclass(frozen=True)
class ReciprocalSum:
    """Exact partial sums of 1/a over prefixes of A (in increasing order)."""

    lengths: Tuple[int, ...]
    exact: Tuple[Fraction, ...]

    @property
    def approx(self) -> Tuple[float, ...]:
        return tuple(float(s) for s in self.exact)

    def __getitem__(self, length: int) -> Fraction:
        return self.exact[self.lengths.index(length)]


def reciprocal_sum(A, prefix_lengths: Optional[Iterable[int]] = None) -> ReciprocalSum:
    els = as_elements(A)
    if not els:
        raise ValueError("A must be nonempty")
    if els[0] <= 0:
        raise ZeroElement("reciprocal sums need every element >= 1")
    lengths = sorted(set(prefix_lengths)) if prefix_lengths is not None else list(range(1, len(els) + 1))
    if lengths and (lengths[0] < 1 or lengths[-1] > len(els)):
        raise ValueError(f"prefix lengths must lie in [1, {len(els)}]")
    out = []
    total = Fraction(0)
    want = iter(lengths)
    nxt = next(want, None)
    for i, a in enumerate(els, start=1):
        if nxt is None:
            break
        total += Fraction(1, a)
        if i == nxt:
            out.append(total)
            nxt = next(want, None)
    return ReciprocalSum(tuple(lengths), tuple(out))


def mian_chowla(count: int) -> List[int]:
    """The greedy Sidon sequence 1, 2, 4, 8, 13, 21, ..."""
    return greedy_extend(2, 2, [1], count)


def zhang_sequence(count: int) -> List[int]:
    """Greedy Sidon sequence forced through 229 as its fifteenth term."""
    head = mian_chowla(min(count, ZHANG_PREFIX))
    if count <= ZHANG_PREFIX:
        return head
    return greedy_extend(2, 2, head + [ZHANG_TERM], count)


def greedy_growth_data(h: int = 2, g: int = 2, seeds: Sequence[int] = (1,), count: int = 100) -> List[Tuple[int, float]]:
    """Points (k, log_k gamma_k) for k = 2..count, gamma_k the k-th greedy term."""
    if count < 2:
        raise ValueError("count must be >= 2")
    terms = greedy_extend(h, g, list(seeds), count)
    return [(k, math.log(terms[k - 1]) / math.log(k)) for k in range(2, count + 1)]
