"""Acceptance gate: one test per primary criterion, each printing PASS/FAIL.

Run with ``pytest tests/test_acceptance.py -v``; the summary section lists
one line per criterion.  Runs beyond the stated targets are marked
``extended`` and only run with SIDONLAB_EXTENDED=1.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np
import pytest
import sympy

from sidonlab.analysis import mian_chowla, reciprocal_sum, sumset_intervals, zhang_sequence
from sidonlab.constructions import (
    bose_set,
    bose_union,
    crt_combine,
    erdos_turan_set,
    greedy,
    interleave,
    ruzsa_set,
    ruzsa_union,
    singer_set,
)
from sidonlab.finite_field import discrete_log, find_primitive, make_field, prime_power, subfield
from sidonlab.search import (
    SearchConfig,
    brute_force_oracle,
    max_bstar_subset,
    max_modular,
    min_n_for_size,
    modular_size_refuted,
    shortest_sidon,
    sidon_size_refuted,
)
from sidonlab.sets import ModularSet
from sidonlab.verify import canonical_form, is_bstar, is_bstar_mod

# --- fixtures transcribed from the reference tables --------------------------

# row k of the Ruzsa table (p = 13, theta = 2), columns t = 1..12
RUZSA_13_2 = {
    1: [145, 134, 99, 16, 149, 90, 115, 152, 57, 10, 59, 144],
    2: [121, 86, 3, 136, 77, 102, 139, 44, 153, 46, 131, 132],
    3: [97, 38, 63, 100, 5, 114, 7, 92, 93, 82, 47, 120],
    4: [73, 146, 123, 64, 89, 126, 31, 140, 33, 118, 119, 108],
    5: [49, 98, 27, 28, 17, 138, 55, 32, 129, 154, 35, 96],
    6: [25, 50, 87, 148, 101, 150, 79, 80, 69, 34, 107, 84],
    7: [1, 2, 147, 112, 29, 6, 103, 128, 9, 70, 23, 72],
    8: [133, 110, 51, 76, 113, 18, 127, 20, 105, 106, 95, 60],
    9: [109, 62, 111, 40, 41, 30, 151, 68, 45, 142, 11, 48],
    10: [85, 14, 15, 4, 125, 42, 19, 116, 141, 22, 83, 36],
    11: [61, 122, 75, 124, 53, 54, 43, 8, 81, 58, 155, 24],
    12: [37, 74, 135, 88, 137, 66, 67, 56, 21, 94, 71, 12],
}

# least positive k with (1+3x)^k = c0 + c1 x in GF(13)[x]/(x^2+2); row c0, columns c1 = 0..12
BOSE_13 = {
    0: [None, 77, 147, 21, 49, 35, 91, 7, 119, 133, 105, 63, 161],
    1: [168, 164, 148, 1, 19, 114, 87, 123, 138, 79, 13, 76, 116],
    2: [70, 25, 66, 40, 50, 149, 71, 83, 89, 146, 16, 18, 157],
    3: [112, 23, 58, 108, 125, 31, 92, 20, 67, 113, 60, 82, 131],
    4: [140, 153, 95, 159, 136, 48, 110, 86, 120, 88, 51, 59, 141],
    5: [126, 96, 127, 34, 45, 122, 37, 145, 74, 81, 106, 139, 72],
    6: [14, 90, 93, 137, 128, 15, 10, 130, 27, 152, 101, 33, 162],
    7: [98, 78, 117, 17, 68, 111, 46, 94, 99, 44, 53, 9, 6],
    8: [42, 156, 55, 22, 165, 158, 61, 121, 38, 129, 118, 43, 12],
    9: [56, 57, 143, 135, 4, 36, 2, 26, 132, 52, 75, 11, 69],
    10: [28, 47, 166, 144, 29, 151, 104, 8, 115, 41, 24, 142, 107],
    11: [154, 73, 102, 100, 62, 5, 167, 155, 65, 134, 124, 150, 109],
    12: [84, 32, 160, 97, 163, 54, 39, 3, 30, 103, 85, 64, 80],
}

SHORTEST_DIAMETERS = {2: 1, 3: 3, 4: 6, 5: 11, 6: 17, 7: 25, 8: 34, 9: 44, 10: 55}
SHORTEST_WITNESSES = {
    2: [(0, 1)],
    3: [(0, 1, 3)],
    4: [(0, 1, 4, 6)],
    5: [(0, 1, 4, 9, 11), (0, 2, 7, 8, 11)],
    6: [(0, 1, 4, 10, 12, 17), (0, 1, 4, 10, 15, 17), (0, 1, 8, 11, 13, 17), (0, 1, 8, 12, 14, 17)],
    7: [(0, 1, 4, 10, 18, 23, 25), (0, 1, 7, 11, 20, 23, 25), (0, 1, 11, 16, 19, 23, 25),
        (0, 2, 3, 10, 16, 21, 25), (0, 2, 7, 13, 21, 22, 25)],
    8: [(0, 1, 4, 9, 15, 22, 32, 34)],
    9: [(0, 1, 5, 12, 25, 27, 35, 41, 44)],
    10: [(0, 1, 6, 10, 23, 26, 34, 41, 53, 55)],
}
SHORTEST_11 = [(0, 1, 4, 13, 28, 33, 47, 54, 64, 70, 72), (0, 1, 9, 19, 24, 31, 52, 56, 58, 69, 72)]

# min{n : R_2(g,n) >= k}: row k lists the exact cells for g = 2, 3, ...
MIN_N = {
    3: [4],
    4: [7, 5],
    5: [12, 8, 6],
    6: [18, 13, 8, 7],
    7: [26, 19, 11, 9, 8],
    8: [35, 25, 14, 12, 10, 9],
    9: [45, 35, 18, 15, 12, 11, 10],
    10: [56, 46, 22, 19, 14, 13, 12, 11],
    11: [73, 58, 27, 24, 17, 15, 14, 13, 12],
}
MIN_N_EXTRA = {(11, 12): 13}


def mirror_class(w):
    w = tuple(sorted(w))
    lo, hi = w[0], w[-1]
    a = tuple(x - lo for x in w)
    b = tuple(sorted(hi - x for x in w))
    return min(a, b)


# --- criteria ------------------------------------------------------------------


def test_criterion_01_mian_chowla(criterion):
    with criterion("1  Mian-Chowla regression"):
        t0 = time.monotonic()
        assert greedy(2, 2, [1], 11).elements == (1, 2, 4, 8, 13, 21, 31, 45, 66, 81, 97)
        assert greedy(2, 2, [1], 17).elements[16] == 290
        assert time.monotonic() - t0 < 1.0


def test_criterion_02_ruzsa_table(criterion):
    with criterion("2  Ruzsa table p=13, theta=2, unions B*_2[8]"):
        t0 = time.monotonic()
        for k, row in RUZSA_13_2.items():
            S = ruzsa_set(13, 2, k)
            assert S.certificate.modulus == 156
            assert set(S.elements) == set(row), f"row {k}"
        for i, j in itertools.combinations(range(1, 13), 2):
            els = sorted(RUZSA_13_2[i] + RUZSA_13_2[j])
            assert is_bstar_mod(els, 2, 8, 156), f"rows {i},{j}"
            U = ruzsa_union(13, 2, [i, j])
            assert U.certificate.g == 8 and list(U.elements) == els
        assert time.monotonic() - t0 < 1.0


def test_criterion_03_bose_table(criterion):
    with criterion("3  Bose discrete-log table GF(13^2), columns Sidon mod 168"):
        t0 = time.monotonic()
        F = make_field(13, modulus=(2, 0, 1))
        theta = F.element([1, 3])
        for c0, row in BOSE_13.items():
            for c1, cell in enumerate(row):
                if cell is None:
                    continue
                assert discrete_log(F, theta, F.element([c0, c1])) == cell, (c0, c1)
        for c1 in range(1, 13):
            column = sorted(BOSE_13[c0][c1] % 168 for c0 in range(13))
            assert is_bstar_mod(column, 2, 2, 168), f"column {c1}"
            # column c1 is the Bose set for the scalar k with 3k = c1 (mod 13)
            k = c1 * pow(3, -1, 13) % 13
            assert list(bose_set(2, 13, k, field=F, theta=theta).elements) == column
        assert time.monotonic() - t0 < 5.0


def test_criterion_04_shortest_sidon(criterion):
    with criterion("4  shortest Sidon sets k=2..10 (+ k=11 witnesses)"):
        t0 = time.monotonic()
        for k, d in SHORTEST_DIAMETERS.items():
            res = shortest_sidon(k, SearchConfig(mode="all"))
            assert res.optimum == d and res.exact, k
            got = sorted(mirror_class(w.elements) for w in res.witnesses)
            assert got == sorted(mirror_class(w) for w in SHORTEST_WITNESSES[k]), k
        assert time.monotonic() - t0 < 600
        res = shortest_sidon(11, SearchConfig(mode="all"))
        assert res.optimum == 72 and len(res.witnesses) >= 2
        assert sorted(mirror_class(w.elements) for w in res.witnesses) == sorted(mirror_class(w) for w in SHORTEST_11)


def test_criterion_05_min_n_table(criterion):
    with criterion("5  min{n : R_2(g,n) >= k} table, g=2..11"):
        t0 = time.monotonic()
        cells = {(g, k): v for k, row in MIN_N.items() for g, v in enumerate(row, start=2)}
        cells.update(MIN_N_EXTRA)
        bad = {gk: (v, min_n_for_size(2, gk[0], gk[1])) for gk, v in sorted(cells.items())}
        bad = {gk: pair for gk, pair in bad.items() if pair[0] != pair[1]}
        assert not bad, f"mismatches (expected, got): {bad}"
        assert time.monotonic() - t0 < 1800


def test_criterion_06_oracle_equivalence(criterion):
    with criterion("6  pruned search equals brute-force oracle"):
        bad = []
        for h, g in itertools.product((2, 3), (2, 3, 4, 6)):
            for n in range(1, 19):
                o = brute_force_oracle(n, h, g)
                r = max_bstar_subset(n, h, g, SearchConfig(mode="count"))
                if (r.optimum, r.count) != (o.optimum, o.count):
                    bad.append(("R", n, h, g))
        for g in (2, 4):
            for n in range(1, 19):
                o = brute_force_oracle(n, 2, g, modular=True)
                r = max_modular(n, 2, g, SearchConfig(mode="count"))
                # search counts optimal sets through 0; each optimal set has k such translates
                if r.optimum != o.optimum or r.count * n != o.count * o.optimum:
                    bad.append(("C", n, 2, g))
        assert not bad, f"discrepancies: {bad}"


def test_criterion_07_bound_invariants(criterion):
    with criterion("7  R_2(2,n) < sqrt n + n^1/4 + 1 (n<=200); C_2 bounds (n<=60)"):
        for n in range(1, 201):
            m = int(sympy.ceiling(sympy.sqrt(n) + sympy.root(n, 4) + 1))
            assert sidon_size_refuted(m, n), f"R_2(2,{n}) >= {m}"
        for n in range(1, 61):
            c = max_modular(n, 2, 2).optimum
            assert math.comb(c, 2) <= n // 2, n
            assert c * c <= 2 * n, n
        for n in range(1, 61):
            assert modular_size_refuted(math.isqrt(4 * n) + 1, n, 2, 4), f"C_2(4,{n}) > sqrt(4n)"


def _grid():
    out = []
    for p in sympy.primerange(3, 32):
        roots = [t for t in range(2, p) if sympy.n_order(t, p) == p - 1]
        for theta in roots:
            out.append(ruzsa_set(p, theta, 1))
        theta = roots[0]
        out.extend(ruzsa_set(p, theta, k) for k in range(2, p))
        out.extend(ruzsa_union(p, theta, range(1, j + 1)) for j in (2, 3) if j < p)
        out.append(erdos_turan_set(p))
    for q in range(2, 17):
        pe = prime_power(q)
        if pe is None:
            continue
        for h in (2, 3):
            F = make_field(pe[0], pe[1] * h)
            scalars = [s for s in subfield(F, q) if not s.is_zero()]
            for k in scalars:
                out.append(bose_set(h, q, k, field=F))
            if h == 2 and q > 2:
                out.append(bose_union(q, scalars[:2], field=F))
    for q in (2, 3, 4, 5, 7, 8, 9):
        out.append(singer_set(2, q))
    return out


def test_criterion_08_construction_certificates(criterion):
    with criterion("8  construction certificates over the parameter grid"):
        failures = []
        grid = _grid()

        def check(S):
            c = S.certificate
            ok = (is_bstar_mod(S.set, c.h, c.g, c.modulus) if c.modulus is not None
                  else is_bstar(S.set, c.h, c.g))
            if not ok:
                failures.append((c.construction, c.params))

        for S in grid:
            check(S)
        sidon_inputs = [greedy(2, 2, [1], 12), erdos_turan_set(11), ruzsa_set(7, 3)]
        for A in sidon_inputs + [bose_set(3, 3), singer_set(2, 4)]:
            for m in range(1, 5):
                check(interleave(A, m))
        modular = [S for S in grid if S.certificate.modulus is not None and S.certificate.modulus <= 400]
        pairs = 0
        for A, B in itertools.combinations(modular, 2):
            if A.certificate.h == B.certificate.h and math.gcd(A.certificate.modulus, B.certificate.modulus) == 1:
                if A.certificate.modulus * B.certificate.modulus <= 60000 and pairs < 400:
                    check(crt_combine(A, B, A.certificate.h))
                    pairs += 1
        assert pairs >= 100
        assert not failures, f"{len(failures)} failures, first {failures[:3]}"


def test_criterion_09_sumset_structure(criterion):
    with criterion("9  sumset interval counts of shortest Sidon sets"):
        for k in range(3, 11):
            for w in shortest_sidon(k, SearchConfig(mode="all")).witnesses:
                for A in (w, w.reflected()):
                    d = sumset_intervals(A)
                    assert 4 * d.count >= k * k - k - 1, (k, A.elements)
                    assert d.sums() == sorted({a + b for a in A for b in A})


def test_criterion_10_reciprocal_sums(criterion):
    with criterion("10 reciprocal sums, Zhang variant beats Mian-Chowla"):
        t0 = time.monotonic()
        mc = reciprocal_sum(mian_chowla(300), [300])[300]
        zh = reciprocal_sum(zhang_sequence(300), [300])[300]
        assert zh > mc
        for s in (mc, zh):
            assert 2.1 < s < 2.3, float(s)
        assert time.monotonic() - t0 < 60


def test_criterion_11_equivalence_invariance(criterion):
    with criterion("11 affine / unit-transform invariance, canonical form on orbits"):
        rng = np.random.default_rng(20240611)
        for _ in range(1000):
            size = int(rng.integers(1, 9))
            A = [int(a) for a in rng.choice(60, size=size, replace=False)]
            h, g = int(rng.integers(2, 4)), int(rng.integers(1, 8))
            k = int(rng.choice([-1, 1])) * int(rng.integers(1, 12))
            r = int(rng.integers(-50, 50))
            assert is_bstar(A, h, g) == is_bstar([k * a + r for a in A], h, g)
        for _ in range(1000):
            n = int(rng.integers(2, 60))
            A = ModularSet(n, rng.choice(n, size=int(rng.integers(1, min(n, 8) + 1)), replace=False))
            units = [u for u in range(1, n) if math.gcd(u, n) == 1]
            k, r = int(rng.choice(units)), int(rng.integers(0, n))
            h, g = int(rng.integers(2, 4)), int(rng.integers(1, 8))
            assert is_bstar_mod(A, h, g, n) == is_bstar_mod(A.transform(k, r), h, g, n)
        for _ in range(1000):
            n = int(rng.integers(1, 14))
            A = ModularSet(n, rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False))
            units = [u for u in range(1, n + 1) if math.gcd(u, n) == 1]
            k, r = int(rng.choice(units)), int(rng.integers(0, n))
            assert canonical_form(A).representative == canonical_form(A.transform(k, r)).representative


# --- extended runs -------------------------------------------------------------


@pytest.mark.extended
def test_extended_exact_C_g4():
    vals = [max_modular(n, 2, 4).optimum for n in range(1, 61)]
    assert all(c * c <= 4 * n for n, c in enumerate(vals, start=1))


@pytest.mark.extended
def test_extended_shortest_12():
    assert shortest_sidon(12).optimum == 85


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v"]))
