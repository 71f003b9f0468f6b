"""Exact representation counts and the B*_h[g] predicates.

Everything here is the ground truth the constructions and the search are
checked against, so all counting is exact integer arithmetic: dense integer
convolution when the sums fit a small window, a dictionary otherwise.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from sidonlab.errors import CapExceeded, ElementOutOfRange
from sidonlab.sets import CertifiedSet, ModularSet, as_elements

DENSE_SPAN_LIMIT = 1 << 22
LINEAR_FORM_CAP = 10**7


@dataclass(frozen=True)
class CountProfile:
    """Map from a sum (or difference) to its number of ordered representations.

    Zero counts are omitted.  ``kind`` is "convolution" for A*h and
    "correlation" for the difference counts.
    """

    counts: Dict[int, int]
    h: int
    modulus: Optional[int] = None
    kind: str = "convolution"

    def __getitem__(self, k: int) -> int:
        if self.modulus is not None:
            k %= self.modulus
        return self.counts.get(k, 0)

    def max(self, exclude_zero: bool = False) -> int:
        vals = [c for k, c in self.counts.items() if not (exclude_zero and k == 0)]
        return max(vals, default=0)

    def worst(self, exclude_zero: bool = False) -> Optional[Tuple[int, int]]:
        """(k, count) with the largest count; ties go to the least k."""
        best = None
        for k in sorted(self.counts):
            if exclude_zero and k == 0:
                continue
            c = self.counts[k]
            if best is None or c > best[1]:
                best = (k, c)
        return best

    def total(self) -> int:
        return sum(self.counts.values())


def _unpack(A, modulus: Optional[int]) -> Tuple[Tuple[int, ...], Optional[int]]:
    if isinstance(A, CertifiedSet):
        if modulus is None:
            modulus = A.certificate.modulus
        A = A.set
    if isinstance(A, ModularSet):
        if modulus is None:
            modulus = A.modulus
    return as_elements(A), modulus


def _dense_power(els: Sequence[int], h: int) -> Tuple[np.ndarray, int]:
    lo = els[0]
    ind = np.zeros(els[-1] - lo + 1, dtype=np.int64)
    ind[[a - lo for a in els]] = 1
    out = ind
    for _ in range(h - 1):
        out = np.convolve(out, ind)
    return out, h * lo


def _sparse_power(els: Sequence[int], h: int) -> Counter:
    out = Counter({0: 1})
    for _ in range(h):
        nxt: Counter = Counter()
        for s, c in out.items():
            for a in els:
                nxt[s + a] += c
        out = nxt
    return out


def convolution_counts(A, h: int = 2, modulus: Optional[int] = None) -> CountProfile:
    """A*h(k): number of ordered h-tuples from A summing to k (mod n if modular)."""
    if h < 1:
        raise ValueError("h must be >= 1")
    els, modulus = _unpack(A, modulus)
    if not els:
        return CountProfile({}, h, modulus)
    if modulus is not None:
        els = tuple(sorted({a % modulus for a in els}))
        ind = np.zeros(modulus, dtype=np.int64)
        ind[list(els)] = 1
        out = ind.copy()
        for _ in range(h - 1):
            full = np.convolve(out, ind)
            full = np.concatenate([full, np.zeros(-len(full) % modulus, dtype=np.int64)])
            out = full.reshape(-1, modulus).sum(axis=0)
        counts = {int(k): int(c) for k, c in enumerate(out) if c}
        return CountProfile(counts, h, modulus)
    if (els[-1] - els[0]) * h < DENSE_SPAN_LIMIT:
        arr, offset = _dense_power(els, h)
        nz = np.nonzero(arr)[0]
        counts = {int(k) + offset: int(arr[k]) for k in nz}
    else:
        counts = dict(_sparse_power(els, h))
    return CountProfile(counts, h, None)


def correlation_counts(A, modulus: Optional[int] = None) -> CountProfile:
    """A∘(k): number of ordered pairs (a1, a2) with a2 - a1 = k."""
    els, modulus = _unpack(A, modulus)
    counts: Counter = Counter()
    for a1 in els:
        for a2 in els:
            d = a2 - a1
            if modulus is not None:
                d %= modulus
            counts[d] += 1
    return CountProfile(dict(counts), 2, modulus, kind="correlation")


def is_bstar(A, h: int, g: int) -> bool:
    """True iff every coefficient of (sum z^a)^h is at most g."""
    els = as_elements(A.set if isinstance(A, CertifiedSet) else A)
    if not els:
        return True
    return convolution_counts(els, h).max() <= g


def is_bstar_mod(A, h: int, g: int, n: int) -> bool:
    """Modular variant; raw elements must already lie in [0, n)."""
    if isinstance(A, CertifiedSet):
        A = A.set
    if isinstance(A, ModularSet):
        if A.modulus != n:
            raise ElementOutOfRange(f"set is modulo {A.modulus}, asked about modulus {n}")
        els = A.elements
    else:
        els = as_elements(A)
        bad = [a for a in els if not 0 <= a < n]
        if bad:
            raise ElementOutOfRange(f"elements {bad[:5]} not in [0, {n})")
    if not els:
        return True
    return convolution_counts(els, h, modulus=n).max() <= g


def sidon_iff_distinct_differences(A) -> Tuple[bool, bool]:
    """(max_{k != 0} A∘(k) <= 1, max_k A*(k) <= 2); the two always agree on Z."""
    els = as_elements(A)
    diff_ok = correlation_counts(els).max(exclude_zero=True) <= 1
    sum_ok = convolution_counts(els, 2).max() <= 2 if els else True
    return diff_ok, sum_ok


@dataclass(frozen=True)
class CanonicalForm:
    """Least representative of A's class under a -> k*a + r, gcd(k, n) = 1."""

    representative: ModularSet
    multiplier: int
    shift: int


def canonical_form(A: ModularSet) -> CanonicalForm:
    """Lexicographically least image of A over all units k and shifts r.

    Sets are compared as sorted tuples.  The least image always contains 0,
    so for each unit only the |A| translations sending an element to 0 are
    tried.
    """
    n = A.modulus
    els = A.elements
    if not els:
        return CanonicalForm(A, 1, 0)
    best = None
    for k in range(1, n + 1):
        if math.gcd(k, n) != 1:
            continue
        img = [(k * a) % n for a in els]
        for b in img:
            cand = tuple(sorted((c - b) % n for c in img))
            if best is None or cand < best[0]:
                best = (cand, k % n, (-b) % n)
    rep, k, r = best
    return CanonicalForm(ModularSet(n, rep), k, r)


def equivalent(A: ModularSet, B: ModularSet) -> bool:
    return A.modulus == B.modulus and canonical_form(A).representative == canonical_form(B).representative


def ruzsa_trivial(L: Sequence[Sequence[int]], vec: Sequence[int]) -> bool:
    """Default triviality test for linear-form solutions.

    A solution is trivial when, in every row, the coefficients attached to
    each distinct value cancel: the equation then holds for formal reasons
    whatever the values are.  For [1,1,-1,-1] this means {a1,a2} = {a3,a4};
    for [1,-2,1] it means a1 = a2 = a3; for [1,-1] every solution is trivial.
    """
    for row in L:
        by_value: Dict[int, int] = {}
        for c, v in zip(row, vec):
            by_value[v] = by_value.get(v, 0) + c
        if any(s != 0 for s in by_value.values()):
            return False
    return True


def avoids_linear_form(
    L,
    A,
    trivial: Optional[Callable[[Sequence[Sequence[int]], Sequence[int]], bool]] = None,
    cap: int = LINEAR_FORM_CAP,
) -> bool:
    """True iff L·a = 0 has no nontrivial solution with every a_i in A.

    Exhaustive over A^n; raises CapExceeded when |A|^n > cap.
    """
    rows = np.atleast_2d(np.asarray(L, dtype=np.int64))
    if rows.shape[0] < 1 or rows.shape[1] < 1:
        raise ValueError("L needs at least one row and one column")
    rows_list = rows.tolist()
    ncols = rows.shape[1]
    els = list(as_elements(A))
    if not els:
        return True
    if len(els) ** ncols > cap:
        raise CapExceeded(f"{len(els)}^{ncols} candidate vectors exceeds cap {cap}")
    trivial = trivial or ruzsa_trivial
    arr = np.asarray(els, dtype=np.int64)
    # vectorise over the last coordinate; loop over the rest
    for head in itertools.product(els, repeat=ncols - 1):
        partial = rows[:, : ncols - 1] @ np.asarray(head, dtype=np.int64) if ncols > 1 else np.zeros(rows.shape[0], dtype=np.int64)
        totals = partial[:, None] + rows[:, ncols - 1 : ncols] * arr[None, :]
        hits = np.nonzero(~totals.any(axis=0))[0]
        for idx in hits:
            vec = list(head) + [els[idx]]
            if not trivial(rows_list, vec):
                return False
    return True
