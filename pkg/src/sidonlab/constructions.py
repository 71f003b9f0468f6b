"""Explicit B*_h[g] constructions.

Each public function returns a :class:`~sidonlab.sets.CertifiedSet`: the set
plus the (h, g, modulus) guarantee the construction is known to satisfy.
Unions over several parameters use the starred convention throughout, so a
union of |K| Ruzsa or Bose rows is certified B*_2[2|K|^2].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from sidonlab import verify
from sidonlab.errors import BadCertificate, BadEpsilon, BadSeed, NotCoprime, NotPrime, NotPrimitive
from sidonlab.finite_field import (
    Field,
    FieldElement,
    discrete_log,
    ff_mul,
    ff_pow,
    find_primitive,
    is_prime,
    is_primitive,
    make_field,
    prime_factors,
    prime_power,
    subfield,
)
from sidonlab.sets import CertifiedSet, ConstructionCertificate, IntegerSet, ModularSet

FieldScalar = Union[int, FieldElement]


def crt_pair(a: int, m: int, b: int, n: int) -> int:
    """The x in [0, mn) with x = a (mod m) and x = b (mod n); gcd(m, n) = 1."""
    if math.gcd(m, n) != 1:
        raise NotCoprime(f"gcd({m}, {n}) != 1")
    if m == 1:
        return b % n
    if n == 1:
        return a % m
    return (a + m * ((b - a) * pow(m, -1, n))) % (m * n)


# --- greedy -------------------------------------------------------------------


class _SumCounter:
    """Incremental h-fold sum counts A*j for j = 1..h.

    Adding x changes A*j(s) by sum_{i>=1} C(j,i) A*(j-i)(s - i x), so a
    candidate only touches the sums it creates.
    """

    def __init__(self, h: int):
        self.h = h
        self.levels: List[dict] = [{0: 1}] + [dict() for _ in range(h)]
        self.binom = [[math.comb(j, i) for i in range(j + 1)] for j in range(h + 1)]

    def delta(self, x: int, j: int) -> dict:
        out: dict = {}
        for i in range(1, j + 1):
            c = self.binom[j][i]
            shift = i * x
            for s, v in self.levels[j - i].items():
                out[s + shift] = out.get(s + shift, 0) + c * v
        return out

    def fits(self, x: int, g: int) -> bool:
        top = self.levels[self.h]
        return all(top.get(s, 0) + v <= g for s, v in self.delta(x, self.h).items())

    def add(self, x: int) -> None:
        deltas = [self.delta(x, j) for j in range(self.h + 1)]
        for j in range(1, self.h + 1):
            lvl = self.levels[j]
            for s, v in deltas[j].items():
                lvl[s] = lvl.get(s, 0) + v


class _SidonGreedy:
    """Difference-array fast path for h = 2, g = 2 (and g = 3)."""

    def __init__(self, g: int):
        self.g = g
        self.els: List[int] = []
        self.diff = np.zeros(1024, dtype=bool)
        self.sq = set()  # sums 2a, for the g = 3 relaxation

    def _grow(self, size: int) -> None:
        if size > len(self.diff):
            new = np.zeros(max(size, 2 * len(self.diff)), dtype=bool)
            new[: len(self.diff)] = self.diff
            self.diff = new

    def fits(self, x: int) -> bool:
        if not self.els:
            return True
        self._grow(x + 1)
        d = x - np.asarray(self.els)
        return not self.diff[d].any()

    def add(self, x: int) -> None:
        if self.els:
            d = x - np.asarray(self.els)
            self._grow(x + 1)
            self.diff[d] = True
        self.els.append(x)

    def next_after(self, lo: int) -> int:
        """Least x >= lo that keeps the set Sidon, scanning in vectorised blocks."""
        if not self.els:
            return lo
        arr = np.asarray(self.els)
        block = 4096
        while True:
            cands = np.arange(lo, lo + block)
            self._grow(lo + block + 1)
            bad = self.diff[cands[:, None] - arr[None, :]].any(axis=1)
            ok = np.nonzero(~bad)[0]
            if len(ok):
                return int(cands[ok[0]])
            lo += block


def greedy(h: int, g: int, seeds: Iterable[int] = (1,), count: int = 1) -> CertifiedSet:
    """Extend ``seeds`` to ``count`` elements, each the least m above the
    previous term keeping the set B*_h[g]."""
    seeds = list(seeds)
    if sorted(set(seeds)) != seeds:
        raise BadSeed("seeds must be strictly increasing")
    if seeds and seeds[0] < 0:
        raise BadSeed("seeds must be nonnegative")
    if not verify.is_bstar(seeds, h, g):
        raise BadSeed(f"seeds {seeds} are not B*_{h}[{g}]")
    if count < len(seeds):
        raise ValueError("count must be at least the number of seeds")
    cert = ConstructionCertificate(h, g, None, "greedy", {"seeds": tuple(seeds), "count": count})
    terms = greedy_extend(h, g, seeds, count)
    return CertifiedSet(IntegerSet(terms), cert)


def greedy_extend(h: int, g: int, seeds: Sequence[int], count: int) -> List[int]:
    """Plain-list worker behind :func:`greedy` (no seed validation)."""
    terms = list(seeds)
    if len(terms) >= count:
        return terms[:count]
    if h == 2 and g == 2:
        sg = _SidonGreedy(g)
        for a in terms:
            sg.add(a)
        x = terms[-1] + 1 if terms else 0
        while len(terms) < count:
            x = sg.next_after(x)
            sg.add(x)
            terms.append(x)
            x += 1
        return terms
    sc = _SumCounter(h)
    for a in terms:
        sc.add(a)
    x = terms[-1] + 1 if terms else 0
    while len(terms) < count:
        if sc.fits(x, g):
            sc.add(x)
            terms.append(x)
        elif x > h * terms[-1]:
            # beyond h*max the new counts no longer depend on x
            raise ValueError(f"{terms} has no B*_{h}[{g}] extension")
        x += 1
    return terms


# --- Ruzsa ----------------------------------------------------------------------


def _check_generator(p: int, theta: int) -> None:
    if not is_prime(p) or p == 2:
        raise NotPrime(f"{p} is not an odd prime")
    n = p - 1
    if theta % p == 0 or any(pow(theta, n // r, p) == 1 for r in prime_factors(n)):
        raise NotPrimitive(f"{theta} is not a primitive root mod {p}")


def ruzsa_row(p: int, theta: int, k: int) -> List[int]:
    """[a_{t,k} for t = 1..p-1]: a = t (mod p-1), a = k*theta^t (mod p)."""
    return [crt_pair(t % (p - 1), p - 1, k * pow(theta, t, p) % p, p) for t in range(1, p)]


def ruzsa_set(p: int, theta: int, k: int = 1) -> CertifiedSet:
    """Ruzsa's Sidon set modulo p^2 - p (p - 1 elements)."""
    _check_generator(p, theta)
    if not 1 <= k <= p - 1:
        raise ValueError(f"k must lie in [1, {p - 1}]")
    n = p * p - p
    cert = ConstructionCertificate(2, 2, n, "ruzsa", {"p": p, "theta": theta, "k": k})
    return CertifiedSet(ModularSet(n, ruzsa_row(p, theta, k)), cert)


def ruzsa_union(p: int, theta: int, K: Iterable[int]) -> CertifiedSet:
    """Union of Ruzsa rows over K, certified B*_2[2|K|^2] mod p^2 - p."""
    _check_generator(p, theta)
    K = sorted(set(K))
    if not K or any(not 1 <= k <= p - 1 for k in K):
        raise ValueError(f"K must be a nonempty subset of [1, {p - 1}]")
    n = p * p - p
    els = [a for k in K for a in ruzsa_row(p, theta, k)]
    cert = ConstructionCertificate(2, 2 * len(K) ** 2, n, "ruzsa_union", {"p": p, "theta": theta, "K": tuple(K)})
    return CertifiedSet(ModularSet(n, els), cert)


# --- Bose -----------------------------------------------------------------------


def _field_for(q: int, degree: int, field: Optional[Field], theta: Optional[FieldElement]):
    pe = prime_power(q)
    if pe is None:
        raise NotPrime(f"{q} is not a prime power")
    p, e = pe
    F = field if field is not None else make_field(p, e * degree)
    if F.order != q**degree:
        raise ValueError(f"field has order {F.order}, expected {q}^{degree}")
    if theta is None:
        theta = find_primitive(F)
    elif not is_primitive(F, theta):
        raise NotPrimitive(f"{theta!r} does not generate GF({F.order})*")
    return F, theta


def _subfield_scalar(F: Field, q: int, k: FieldScalar, sub_codes: set) -> FieldElement:
    # an int is a constant of the prime field, which lies inside GF(q)
    el = k if isinstance(k, FieldElement) else F.element(int(k))
    if el.code not in sub_codes:
        raise ValueError(f"{el!r} is not in the subfield GF({q})")
    return el


def _offset_hits(F: Field, theta: FieldElement, offset: FieldElement, sub_codes: set) -> List[int]:
    """All a in [1, q^h - 1] with theta^a - offset in the subfield, by one pass over powers."""
    n = F.order - 1
    out = []
    cur = F.one
    p = F.p
    off = offset.coeffs
    for a in range(1, n + 1):
        cur = ff_mul(F, cur, theta)
        code = 0
        for i, (c, o) in enumerate(zip(cur.coeffs, off)):
            code += ((c - o) % p) * p**i
        if code in sub_codes:
            out.append(a)
    return out


def bose_set(
    h: int,
    q: int,
    k: FieldScalar = 1,
    *,
    field: Optional[Field] = None,
    theta: Optional[FieldElement] = None,
) -> CertifiedSet:
    """{a in [q^h - 1] : theta^a - k*theta in GF(q)} modulo q^h - 1 (q elements).

    ``field`` must have order q^h; by default the lexicographically least
    modulus and least primitive element are used.
    """
    if h < 2:
        raise ValueError("h must be >= 2")
    F, theta = _field_for(q, h, field, theta)
    sub_codes = {s.code for s in subfield(F, q)}
    kk = _subfield_scalar(F, q, k, sub_codes)
    if kk.is_zero():
        raise ValueError("k must be nonzero")
    els = _offset_hits(F, theta, ff_mul(F, kk, theta), sub_codes)
    n = q**h - 1
    cert = ConstructionCertificate(h, math.factorial(h), n, "bose", {"h": h, "q": q, "k": repr(kk), "theta": repr(theta), "modulus_poly": F.modulus})
    return CertifiedSet(ModularSet(n, els), cert)


def bose_union(
    q: int,
    K: Iterable[FieldScalar],
    *,
    field: Optional[Field] = None,
    theta: Optional[FieldElement] = None,
) -> CertifiedSet:
    """Union of Bose sets (h = 2) over K, certified B*_2[2|K|^2] mod q^2 - 1."""
    F, theta = _field_for(q, 2, field, theta)
    sub_codes = {s.code for s in subfield(F, q)}
    scalars = []
    for k in K:
        kk = _subfield_scalar(F, q, k, sub_codes)
        if kk.is_zero():
            raise ValueError("K must avoid 0")
        if kk not in scalars:
            scalars.append(kk)
    if not scalars:
        raise ValueError("K must be nonempty")
    els = []
    for kk in scalars:
        els.extend(_offset_hits(F, theta, ff_mul(F, kk, theta), sub_codes))
    n = q * q - 1
    cert = ConstructionCertificate(2, 2 * len(scalars) ** 2, n, "bose_union", {"q": q, "K": tuple(repr(k) for k in scalars)})
    return CertifiedSet(ModularSet(n, els), cert)


# --- Singer ---------------------------------------------------------------------


def singer_set(
    h: int,
    q: int,
    kvec: Optional[Sequence[FieldScalar]] = None,
    *,
    field: Optional[Field] = None,
    theta: Optional[FieldElement] = None,
) -> CertifiedSet:
    """Singer's set modulo (q^(h+1) - 1)/(q - 1).

    T(k) = {0} ∪ {a in [q^(h+1) - 1] : theta^a - sum k_i theta^i in GF(q)}; the
    result is every residue class hit by T(k).  Only k = <1, 0, ..., 0>
    (the default) carries a certificate, B*_h[h!] with q + 1 elements; other
    vectors are returned with ``certificate.g = None``.
    """
    if h < 1:
        raise ValueError("h must be >= 1")
    F, theta = _field_for(q, h + 1, field, theta)
    sub_codes = {s.code for s in subfield(F, q)}
    if kvec is None:
        kvec = [1] + [0] * (h - 1)
    if len(kvec) != h:
        raise ValueError(f"kvec needs {h} entries")
    ks = [_subfield_scalar(F, q, k, sub_codes) for k in kvec]
    offset = F.zero
    for i, k in enumerate(ks, start=1):
        offset = offset + ff_mul(F, k, ff_pow(F, theta, i))
    hits = _offset_hits(F, theta, offset, sub_codes)
    n = (q ** (h + 1) - 1) // (q - 1)
    canonical = ks[0] == F.one and all(k.is_zero() for k in ks[1:])
    g = math.factorial(h) if canonical else None
    cert = ConstructionCertificate(h, g, n, "singer", {"h": h, "q": q, "kvec": tuple(repr(k) for k in ks), "theta": repr(theta)})
    return CertifiedSet(ModularSet(n, [0] + hits), cert)


# --- Erdős–Turán ----------------------------------------------------------------


def erdos_turan_set(p: int) -> CertifiedSet:
    """{2pk + (k^2 mod p) : 1 <= k < p}, a Sidon set inside [2p+1, 2p(p-1)+1]."""
    if not is_prime(p) or p == 2:
        raise NotPrime(f"{p} is not an odd prime")
    els = [2 * p * k + (k * k) % p for k in range(1, p)]
    cert = ConstructionCertificate(2, 2, None, "erdos_turan", {"p": p})
    return CertifiedSet(IntegerSet(els), cert)


# --- combinations of existing sets ------------------------------------------------


def interleave(A, m: int, h: Optional[int] = None) -> CertifiedSet:
    """mA + {0, ..., m-1}, certified B*_h[h! m^(h-1)] when A is B*_h[h!].

    ``A`` may be a CertifiedSet (its h is used), an IntegerSet, or a
    ModularSet (lifted to its residues in [0, n)).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if isinstance(A, CertifiedSet):
        cert = A.certificate
        h = cert.h if h is None else h
        if cert.h != h or cert.g != math.factorial(h):
            raise BadCertificate(f"interleave needs a B*_{h}[{math.factorial(h)}] certificate, got {cert}")
        A = A.set
    if h is None:
        raise ValueError("h is required for an uncertified input set")
    base = A.lift() if isinstance(A, ModularSet) else IntegerSet(A)
    if not verify.is_bstar(base, h, math.factorial(h)):
        raise BadCertificate(f"input is not B*_{h}[{math.factorial(h)}]")
    els = [m * a + b for a in base for b in range(m)]
    g = math.factorial(h) * m ** (h - 1)
    cert = ConstructionCertificate(h, g, None, "interleave", {"m": m, "h": h})
    return CertifiedSet(IntegerSet(els), cert)


def _modular_with_cert(S, h: int) -> Tuple[ModularSet, int, int]:
    if isinstance(S, CertifiedSet):
        c = S.certificate
        if c.modulus is None or c.g is None:
            raise BadCertificate("crt_combine needs certified modular sets")
        return S.set, c.h, c.g
    if not isinstance(S, ModularSet):
        raise TypeError("crt_combine takes ModularSet or CertifiedSet inputs")
    g = verify.convolution_counts(S, h).max() if len(S) else 1
    return S, h, g


def crt_combine(A, B, h: int = 2) -> CertifiedSet:
    """{CRT(a, b)} modulo xy; certified B*_h[g*f] from B*_h[g] and B*_h[f].

    Plain ModularSets get their exact max count as their bound.
    """
    A, ha, g = _modular_with_cert(A, h)
    B, hb, f = _modular_with_cert(B, h)
    if ha != hb:
        raise BadCertificate(f"orders differ: {ha} vs {hb}")
    x, y = A.modulus, B.modulus
    if math.gcd(x, y) != 1:
        raise NotCoprime(f"gcd({x}, {y}) != 1")
    els = [crt_pair(a, x, b, y) for a in A for b in B]
    cert = ConstructionCertificate(ha, g * f, x * y, "crt_combine", {"x": x, "y": y})
    return CertifiedSet(ModularSet(x * y, els), cert)


# --- random sets ------------------------------------------------------------------


@dataclass(frozen=True)
class RandomSample:
    """A raw random sample and the sums whose pair count f(k) exceeds g/2."""

    sample: IntegerSet
    offenders: Tuple[int, ...]
    g: int
    epsilon: float
    seed: Optional[int]

    def pruned(self) -> CertifiedSet:
        """Delete elements until no sum has f(k) > g/2; certified B*_2[g]."""
        els = set(self.sample.elements)
        while True:
            bad = _offending_sums(sorted(els), self.g)
            if not bad:
                break
            k = bad[0]
            # drop the largest element taking part in the first offending sum
            culprit = max(a for a in els if (k - a) in els)
            els.discard(culprit)
        cert = ConstructionCertificate(2, self.g, None, "erdos_renyi", {"epsilon": self.epsilon, "seed": self.seed})
        return CertifiedSet(IntegerSet(els), cert)


def _pair_counts(els: Sequence[int]) -> dict:
    """f(k) = #{(j, k-j) : j <= k - j, both in the set} (unordered, squares once)."""
    f: dict = {}
    for i, a in enumerate(els):
        for b in els[i:]:
            f[a + b] = f.get(a + b, 0) + 1
    return f


def _offending_sums(els: Sequence[int], g: int) -> List[int]:
    return sorted(k for k, c in _pair_counts(els).items() if 2 * c > g)


def random_bstar_set(g: int, epsilon: float, N: int, rng_seed: Optional[int] = None) -> RandomSample:
    """Include each n in [N] independently with probability n^(-1/2 - epsilon).

    Requires epsilon > 1/(g+1).  The returned offenders are the sums k with
    f(k) = sum_{j <= k/2} X_j X_{k-j} > g/2; deleting them (see
    :meth:`RandomSample.pruned`) leaves a B*_2[g] set.
    """
    if not epsilon > 1.0 / (g + 1):
        raise BadEpsilon(f"epsilon must exceed 1/(g+1) = {1.0 / (g + 1):.6g}")
    if N <= 0:
        return RandomSample(IntegerSet(), (), g, epsilon, rng_seed)
    rng = np.random.default_rng(rng_seed)
    n = np.arange(1, N + 1, dtype=float)
    keep = rng.random(N) < n ** (-0.5 - epsilon)
    els = [int(v) for v in np.nonzero(keep)[0] + 1]
    return RandomSample(IntegerSet(els), tuple(_offending_sums(els, g)), g, epsilon, rng_seed)
