"""Set containers shared by the constructions, verifier and search."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Tuple, Union


@dataclass(frozen=True)
class IntegerSet:
    """Finite set of nonnegative integers, stored sorted and duplicate-free."""

    elements: Tuple[int, ...] = ()

    def __post_init__(self):
        els = tuple(sorted({int(a) for a in self.elements}))
        if els and els[0] < 0:
            raise ValueError(f"IntegerSet elements must be nonnegative, got {els[0]}")
        object.__setattr__(self, "elements", els)

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in set(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    @property
    def diameter(self) -> int:
        return self.elements[-1] - self.elements[0] if self.elements else 0

    def normalized(self) -> "IntegerSet":
        """Translate so the least element is 0."""
        if not self.elements:
            return self
        lo = self.elements[0]
        return IntegerSet(a - lo for a in self.elements)

    def reflected(self) -> "IntegerSet":
        """The mirror image ``max + min - A``."""
        if not self.elements:
            return self
        lo, hi = self.elements[0], self.elements[-1]
        return IntegerSet(lo + hi - a for a in self.elements)


@dataclass(frozen=True)
class ModularSet:
    """Subset of Z/n; elements are reduced into [0, n) and sorted."""

    modulus: int
    elements: Tuple[int, ...] = ()

    def __post_init__(self):
        n = int(self.modulus)
        if n < 1:
            raise ValueError(f"modulus must be >= 1, got {n}")
        object.__setattr__(self, "modulus", n)
        object.__setattr__(self, "elements", tuple(sorted({int(a) % n for a in self.elements})))

    def __iter__(self) -> Iterator[int]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return (x % self.modulus) in set(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def transform(self, k: int, r: int = 0) -> "ModularSet":
        """Image of the set under a -> k*a + r (mod n)."""
        return ModularSet(self.modulus, (k * a + r for a in self.elements))

    def lift(self) -> IntegerSet:
        """The residues read as ordinary integers in [0, n)."""
        return IntegerSet(self.elements)

    def reduce(self, m: int) -> "ModularSet":
        return ModularSet(m, self.elements)


AnySet = Union[IntegerSet, ModularSet, Iterable[int]]


@dataclass(frozen=True)
class ConstructionCertificate:
    """The B*_h[g] guarantee a construction claims for its output.

    ``g`` is None when the construction has no proven bound for the given
    parameters (the set is still returned, just uncertified).
    """

    h: int
    g: Optional[int]
    modulus: Optional[int]
    construction: str
    params: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class CertifiedSet:
    """A constructed set together with its certificate."""

    set: Union[IntegerSet, ModularSet]
    certificate: ConstructionCertificate

    def __iter__(self) -> Iterator[int]:
        return iter(self.set)

    def __len__(self) -> int:
        return len(self.set)

    @property
    def elements(self) -> Tuple[int, ...]:
        return self.set.elements

    def verify(self) -> bool:
        """Re-check the certificate against the set by exact counting."""
        from sidonlab import verify

        cert = self.certificate
        if cert.g is None:
            return True
        if cert.modulus is not None:
            return verify.is_bstar_mod(self.set, cert.h, cert.g, cert.modulus)
        return verify.is_bstar(self.set, cert.h, cert.g)


def as_elements(A) -> Tuple[int, ...]:
    """Sorted distinct integers of any supported set-like input."""
    if isinstance(A, CertifiedSet):
        A = A.set
    if isinstance(A, (IntegerSet, ModularSet)):
        return A.elements
    return tuple(sorted({int(a) for a in A}))
