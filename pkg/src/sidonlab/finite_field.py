"""Arithmetic in GF(p^e) for the Bose, Singer and Ruzsa constructions.

A field is GF(p)[x]/(f) for a monic irreducible f of degree e.  Elements are
coefficient tuples, constant term first.  Where elements need a total order
(e.g. "least primitive element") they are compared by their integer code
``sum(c_i * p**i)``, which is the same as comparing coefficient vectors from
the highest degree down to the constant term.

Fields are capped at ``MAX_ORDER`` elements; discrete logarithms use a dense
table up to ``DENSE_LOG_LIMIT`` elements and baby-step/giant-step above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from sidonlab.errors import (
    DegreeTooLarge,
    FieldMismatch,
    NotIrreducible,
    NotPrime,
    NotPrimitive,
    ZeroTarget,
)

MAX_ORDER = 1 << 24
DENSE_LOG_LIMIT = 1 << 20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> List[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """Return (p, e) with q = p**e, or None if q is not a prime power."""
    if q < 2:
        return None
    ps = prime_factors(q)
    if len(ps) != 1:
        return None
    p, e = ps[0], 0
    while q > 1:
        q //= p
        e += 1
    return p, e


# --- polynomials over GF(p), coefficient lists with constant term first ---

def _trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    a = [c % p for c in a]
    _trim(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    while len(a) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> List[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _poly_mod(prod, f, p)


def _poly_powmod(a: Sequence[int], n: int, f: Sequence[int], p: int) -> List[int]:
    result = [1]
    base = _poly_mod(a, f, p)
    while n:
        if n & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        n >>= 1
    return result


def _poly_sub(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _trim(out)


def _poly_gcd(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over GF(p)."""
    f = _trim([c % p for c in poly])
    e = len(f) - 1
    if e < 1 or f[-1] != 1:
        return False
    if e == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**e, f, p), x, p):
        return False
    for r in prime_factors(e):
        h = _poly_sub(_poly_powmod(x, p ** (e // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) != 1:
            return False
    return True


def least_irreducible(p: int, e: int) -> Tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree e.

    Candidates are monic x^e + c_{e-1}x^{e-1} + ... + c_0, ordered by the
    integer code of (c_0, ..., c_{e-1}) with c_{e-1} most significant.
    """
    for code in range(p**e):
        low = [(code // p**i) % p for i in range(e)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("an irreducible polynomial of every degree exists")


@dataclass(frozen=True)
class Field:
    """GF(p^e) = GF(p)[x]/(modulus)."""

    p: int
    e: int
    modulus: Tuple[int, ...]  # length e+1, constant term first, monic

    @property
    def order(self) -> int:
        return self.p**self.e

    def __repr__(self) -> str:
        return f"Field(p={self.p}, e={self.e}, modulus={poly_str(self.modulus)})"

    def element(self, coeffs: Union[int, Iterable[int]]) -> "FieldElement":
        """Build an element from a coefficient list (constant first) or an int.

        An int is read as a constant of the prime subfield, so
        ``F.element(3)`` is the residue 3, not the element with code 3.
        """
        if isinstance(coeffs, int):
            coeffs = [coeffs]
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) > self.e:
            cs = _poly_mod(cs, self.modulus, self.p)
        cs = cs + [0] * (self.e - len(cs))
        return FieldElement(self, tuple(cs))

    def from_code(self, code: int) -> "FieldElement":
        if not 0 <= code < self.order:
            raise ValueError(f"element code {code} outside [0, {self.order})")
        return FieldElement(self, tuple((code // self.p**i) % self.p for i in range(self.e)))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.e)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    @property
    def x(self) -> "FieldElement":
        """The class of the indeterminate x (equals the constant 0 when e=1)."""
        return self.element([0, 1])

    def elements(self) -> Iterator["FieldElement"]:
        for code in range(self.order):
            yield self.from_code(code)


@dataclass(frozen=True)
class FieldElement:
    field: Field = field(repr=False)
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.e or any(not 0 <= c < self.field.p for c in self.coeffs):
            raise ValueError(f"bad coefficient vector {self.coeffs} for {self.field}")

    @property
    def code(self) -> int:
        p = self.field.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        return ff_add(self.field, self, _coerce(self.field, other))

    __radd__ = __add__

    def __sub__(self, other):
        return ff_sub(self.field, self, _coerce(self.field, other))

    def __rsub__(self, other):
        return ff_sub(self.field, _coerce(self.field, other), self)

    def __neg__(self):
        return ff_sub(self.field, self.field.zero, self)

    def __mul__(self, other):
        return ff_mul(self.field, self, _coerce(self.field, other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return ff_pow(self.field, self, n)

    def __truediv__(self, other):
        return ff_mul(self.field, self, ff_inv(self.field, _coerce(self.field, other)))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.code < other.code

    def __repr__(self) -> str:
        return poly_str(self.coeffs)


def poly_str(coeffs: Sequence[int]) -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = "x" if i == 1 else f"x^{i}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


def _coerce(F: Field, v) -> FieldElement:
    if isinstance(v, FieldElement):
        return v
    if isinstance(v, int):
        return F.element(v)
    return F.element(v)


def _check(F: Field, *els: FieldElement) -> None:
    for a in els:
        if a.field != F:
            raise FieldMismatch(f"element {a!r} belongs to {a.field}, not {F}")


def make_field(p: int, e: int = 1, modulus: Optional[Sequence[int]] = None) -> Field:
    """Construct GF(p^e).

    Without ``modulus`` the lexicographically least monic irreducible is used.
    A caller-supplied modulus (constant term first, e.g. ``(2, 0, 1)`` for
    x^2+2) is checked for monicity and irreducibility.
    """
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if modulus is not None:
        mod = [int(c) % p for c in modulus]
        _trim(mod)
        e = len(mod) - 1
        if e < 1 or mod[-1] != 1:
            raise NotIrreducible(f"modulus {modulus} is not monic of degree >= 1")
        if p**e > MAX_ORDER:
            raise DegreeTooLarge(f"p^e = {p}^{e} exceeds {MAX_ORDER}")
        if not is_irreducible(mod, p):
            raise NotIrreducible(f"{poly_str(mod)} is reducible over GF({p})")
        return Field(p, e, tuple(mod))
    if e < 1:
        raise ValueError("degree must be >= 1")
    if p**e > MAX_ORDER:
        raise DegreeTooLarge(f"p^e = {p}^{e} exceeds {MAX_ORDER}")
    return Field(p, e, _least_irreducible_cached(p, e))


@lru_cache(maxsize=None)
def _least_irreducible_cached(p: int, e: int) -> Tuple[int, ...]:
    return least_irreducible(p, e)


def ff_add(F: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(F, a, b)
    p = F.p
    return FieldElement(F, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def ff_sub(F: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(F, a, b)
    p = F.p
    return FieldElement(F, tuple((x - y) % p for x, y in zip(a.coeffs, b.coeffs)))


def ff_mul(F: Field, a: FieldElement, b: FieldElement) -> FieldElement:
    _check(F, a, b)
    prod = _poly_mulmod(a.coeffs, b.coeffs, F.modulus, F.p)
    return F.element(prod)


def ff_pow(F: Field, a: FieldElement, n: int) -> FieldElement:
    """Square-and-multiply; negative exponents invert first."""
    _check(F, a)
    if n < 0:
        a, n = ff_inv(F, a), -n
    result = F.one
    base = a
    while n:
        if n & 1:
            result = ff_mul(F, result, base)
        base = ff_mul(F, base, base)
        n >>= 1
    return result


def ff_inv(F: Field, a: FieldElement) -> FieldElement:
    _check(F, a)
    if a.is_zero():
        raise ZeroDivisionError("zero has no inverse")
    return ff_pow(F, a, F.order - 2)


def multiplicative_order(F: Field, a: FieldElement) -> int:
    _check(F, a)
    if a.is_zero():
        raise ZeroDivisionError("zero has no multiplicative order")
    n = F.order - 1
    order = n
    for r in prime_factors(n):
        while order % r == 0 and ff_pow(F, a, order // r) == F.one:
            order //= r
    return order


def is_primitive(F: Field, a: FieldElement) -> bool:
    return not a.is_zero() and multiplicative_order(F, a) == F.order - 1


def find_primitive(F: Field) -> FieldElement:
    """Least element (by integer code) generating the multiplicative group."""
    n = F.order - 1
    factors = prime_factors(n)
    for code in range(1, F.order):
        a = F.from_code(code)
        if all(ff_pow(F, a, n // r) != F.one for r in factors):
            return a
    raise AssertionError("a finite field always has a primitive element")


@lru_cache(maxsize=64)
def _power_table(F: Field, base: FieldElement) -> Tuple[Tuple[int, ...], Dict[int, int]]:
    """Codes of base^0..base^(ord-1) and the inverse map code -> least k >= 1."""
    powers = []
    logs: Dict[int, int] = {}
    cur = F.one
    k = 0
    while True:
        powers.append(cur.code)
        k += 1
        cur = ff_mul(F, cur, base)
        logs.setdefault(cur.code, k)
        if cur == F.one:
            break
    return tuple(powers), logs


def powers(F: Field, base: FieldElement) -> List[FieldElement]:
    """[base^0, base^1, ..., base^(ord-1)] computed in one pass."""
    codes, _ = _power_table(F, base)
    return [F.from_code(c) for c in codes]


def discrete_log(F: Field, base: FieldElement, target: FieldElement) -> int:
    """Least positive k with base^k == target.

    Returns a value in [1, ord(base)], so the log of 1 is the order of the
    base rather than 0.
    """
    _check(F, base, target)
    if target.is_zero():
        raise ZeroTarget("discrete log of zero is undefined")
    if base.is_zero():
        raise NotPrimitive("base is zero")
    if F.order <= DENSE_LOG_LIMIT:
        _, logs = _power_table(F, base)
        try:
            return logs[target.code]
        except KeyError:
            raise NotPrimitive(f"{target!r} is not a power of {base!r}") from None
    return _bsgs(F, base, target)


def _bsgs(F: Field, base: FieldElement, target: FieldElement) -> int:
    n = multiplicative_order(F, base)
    m = math.isqrt(n) + 1
    baby: Dict[int, int] = {}
    cur = F.one
    for j in range(m):
        baby.setdefault(cur.code, j)
        cur = ff_mul(F, cur, base)
    giant = ff_pow(F, base, -m)
    gamma = target
    for i in range(m + 1):
        j = baby.get(gamma.code)
        if j is not None:
            k = (i * m + j) % n
            return k if k else n
        gamma = ff_mul(F, gamma, giant)
    raise NotPrimitive(f"{target!r} is not a power of {base!r}")


def log_table(F: Field, base: FieldElement) -> Dict[Tuple[int, ...], int]:
    """Map every nonzero element's coefficient tuple to its discrete log."""
    codes, logs = _power_table(F, base)
    return {F.from_code(c).coeffs: logs[c] for c in set(codes)}


def subfield(F: Field, q: int) -> List[FieldElement]:
    """The elements of the subfield GF(q) inside F, sorted by code.

    Requires F.order to be a power of q.
    """
    pe = prime_power(q)
    if pe is None or pe[0] != F.p or F.e % pe[1] != 0:
        raise ValueError(f"GF({q}) is not a subfield of GF({F.order})")
    if pe[1] == 1:
        return [F.element(c) for c in range(q)]
    theta = find_primitive(F)
    step = (F.order - 1) // (q - 1)
    g = ff_pow(F, theta, step)
    out = [F.zero]
    cur = F.one
    for _ in range(q - 1):
        out.append(cur)
        cur = ff_mul(F, cur, g)
    return sorted(out, key=lambda a: a.code)
