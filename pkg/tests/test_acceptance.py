"""One test per acceptance criterion, each printing a single pass/fail line."""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction

import pytest

from qtrace import classify as C
from qtrace import exact, roots
from qtrace import weingarten as wg
from qtrace.central import CentralFunctional, GeneratorWord, closed_form, conv_exponential
from qtrace.fusion import dim, irr
from qtrace.partitions import PartitionClass, catalan, enumerate_partitions
from qtrace.weingarten import QGFamily, extended_tier

O, S, H = QGFamily.OPLUS, QGFamily.SPLUS, QGFamily.HPLUS


def _require(rec):
    assert rec.verdict, f"{rec.claim_id} N={rec.N}: {rec.failures}"
    return rec


def test_01_weingarten_inverse(criterion):
    with criterion(1, "G W = I exactly for every family, n <= 6, N in 4..8") as notes:
        start = time.perf_counter()
        built = 0
        for family in QGFamily:
            for n in range(1, 7):
                for N in range(4, 9):
                    ctx = wg.build_context(family, n, N)
                    assert ctx.check_inverse(), (family, n, N)
                    if 0 < ctx.size <= 14:
                        assert ctx.weingarten == exact.gauss_jordan_inverse(ctx.gram)
                    built += 1
        elapsed = time.perf_counter() - start
        notes.append(f"{built} contexts")
        assert elapsed < 60


def test_02_splus_base_moments(criterion):
    with criterion(2, "h(p_i p_j) = h(p_i p_j p_i) = 1/(N(N-1)) for N in 4..8"):
        for N in range(4, 9):
            rec = _require(C.splus_base_moments(N))
            assert rec.computed_values["h(p_i p_j)"] == Fraction(1, N * (N - 1))


def test_03_free_poisson(criterion):
    with criterion(3, "Catalan moments of chi, h(p_i chi^2) = 5/N, h(p_i p_j chi) = 3/(N(N-1)), N in 4..8"):
        for N in range(4, 9):
            rec = _require(C.free_poisson_record(N, k_max=4))
            assert [rec.computed_values[f"h(chi^{k})"] for k in range(5)] == [1, 1, 2, 5, 14]
            assert [catalan(k) for k in range(5)] == [1, 1, 2, 5, 14]


def test_04_order_four_and_five(criterion):
    with criterion(4, "order-four and order-five identities, N in 4..9") as notes:
        start = time.perf_counter()
        for N in range(4, 10):
            _require(C.appendix_order4(N))
            _require(C.appendix_order5(N))
        assert time.perf_counter() - start < 120


def test_05_quadratic(criterion):
    with criterion(5, "quadratic for X~, realised root (2N-5)/(N^2-3N+1), excluded value, b3 numerator, N in 4..9"):
        for N in range(4, 10):
            rec = _require(C.appendix_quadratic(N))
            Xt = rec.computed_values["X_tilde"]
            alpha = Fraction(2 * N - 5, (N - 2) * (N - 3))
            assert (1 + alpha) * Xt**2 - (1 + 2 * alpha) * Xt + alpha == 0
            assert Xt == Fraction(2 * N - 5, N * N - 3 * N + 1)
            assert rec.computed_values["X"] != Fraction(1, 2 * (N - 1) ** 2)
            eq = _require(C.snplus_prop_a3_equiv(N))
            assert eq.computed_values["h(p_i p_j p_i chi_2)"] != eq.computed_values["h(p_i p_j chi_2)"]
            assert eq.computed_values["h(p_i p_j chi_2)"] == Fraction(1, N * (N - 1))


def test_06_a3_nonzero(criterion):
    with criterion(6, "h(p_i p_j chi_1) != h(p_i p_j p_i chi_1) for N in 4..8; a3, b3 nonzero at N = 6, 7") as notes:
        for N in range(4, 9):
            _require(C.snplus_a3_separation(N))
        for N in (6, 7):
            a3, b3 = C.snplus_a3b3(N)
            assert a3 != 0 and b3 != 0
            notes.append(f"N={N}: a3={exact.format_rational(a3)}, b3={exact.format_rational(b3)}")


def test_07_nonvanishing(criterion):
    with criterion(7, "h(p_i chi_1), h(p_i p_j p_i chi_3), h(p_l p_i chi_2) != 0 at N = 6, 7; k = 1 even case on the extended tier"):
        for N in (6, 7):
            r0 = _require(C.snplus_nonvanishing(N, 0))
            r1 = _require(C.snplus_nonvanishing(N, 1, ("odd",)))
            assert r0.computed_values["h((p_i p_j)^0 p_i chi_1)"] != 0
            assert r0.computed_values["h((p_i p_j)^0 p_l p_i chi_2)"] != 0
            assert r1.computed_values["h((p_i p_j)^1 p_i chi_3)"] != 0
        start = time.perf_counter()
        with extended_tier():
            for N in (6, 7):
                rec = _require(C.snplus_nonvanishing(N, 1))
                assert rec.computed_values["h((p_i p_j)^1 p_l p_i chi_4)"] != 0
        assert time.perf_counter() - start < 3600


def test_08_onplus_recursion(criterion):
    with criterion(8, "O+ recursion for N in 3..5, n <= 5: counit and alternating counit satisfy it, positivity at every step"):
        for N in (3, 4, 5):
            rec = _require(C.onplus_recursion(N, 5))
            coef = rec.coefficients
            for n in range(1, 6):
                if n % 2:
                    assert coef[f"a{n}"] * dim(O, N, 1) == dim(O, N, n)
                else:
                    assert coef[f"b{n}"] * dim(O, N, 2) == dim(O, N, n)
            for step in rec.steps:
                assert step["h(BA chi_{n-1})"] > 0 and step["h(BA (BA)^*)"] > 0
        assert C.onplus_recursion(4).coefficients["a3"] == 14


def _spot_words(family):
    if family is O:
        alphabet = [(r, c, 1) for r in (1, 2) for c in (1, 2)]
    else:
        alphabet = [(r, c, e) for r in (1, 2) for c in (1, 2) for e in (1, 2)]
    return [w for w in C.words_up_to(family, 6, alphabet) if len(w.letters) >= 2]


def test_09_decompositions(criterion):
    with criterion(9, "grid decompositions are convex and tracial on all word pairs with <= 6 legs at N = 6") as notes:
        start = time.perf_counter()
        N = 6
        grid = C.decomposition_grid(Fraction(1, 4))
        for family in (O, H):
            decs = []
            for lam, mu in grid:
                if family is O:
                    dec = C.onplus_decompose(N, lam * dim(O, N, 1), mu * dim(O, N, 2))
                else:
                    dec = C.hnplus_decompose(N, lam, mu)
                assert dec.valid
                assert all(c >= 0 for c in dec.coefficients.values())
                assert sum(dec.coefficients.values()) == 1
                decs.append(dec)
            phis = [d.functional() for d in decs]
            checked, failures = C.traciality_suite(phis, _spot_words(family))
            assert not failures, failures[:5]
            notes.append(f"{family.value}: {checked} residuals")
        assert time.perf_counter() - start < 300


def test_10_convolution_semigroup(criterion):
    with criterion(10, "20-term convolution exponential matches d_a exp(t lambda_a) within 1e-9"):
        N = 6
        cases = [(O, list(range(5))), (S, list(range(5))), (H, ["", "0", "1", "00", "01", "10", "11"])]
        for family, labels in cases:
            kinds = [CentralFunctional.haar, CentralFunctional.counit]
            if family is not S:
                kinds.append(CentralFunctional.alt)
            for make in kinds:
                phi = make(family, N)
                for a in labels:
                    for t in (Fraction(1, 10), Fraction(1)):
                        d = dim(family, N, a)
                        lam = Fraction(phi.value(a)) / d - 1
                        target = d * math.exp(float(t) * float(lam))
                        assert abs(conv_exponential(phi, t, a, 20) - target) <= 1e-9
                        assert abs(closed_form(phi, t, a) - target) <= 1e-9


def test_11_hplus(criterion):
    with criterion(11, "H+ fusion identities, d11 = N(N-1), phi11 = N phi0, a111/b111, N = 6, 7") as notes:
        one, zero = irr(H, "1"), irr(H, "0")
        assert one * zero * one == {"101": 1, "11": 2, "0": 1, "": 1}
        assert one * one * zero == {"110": 1, "00": 1, "0": 2, "11": 1, "": 1}
        for N in (6, 7):
            assert dim(H, N, "11") == N * (N - 1)
            rec = _require(C.hnplus_relations(N))
            assert rec.computed_values["phi101/phi0"] == Fraction(N * (N * N - 3 * N + 1), N - 1)
            assert rec.computed_values["delta"] == N - 2
            assert rec.computed_values["phi11/phi0"] == N
            _require(C.hnplus_a111b111(N))
            notes.append(f"N={N}: c101={exact.format_rational(rec.computed_values['phi101/phi0'])}")


def test_12_semigroup_rigidity(criterion):
    with criterion(12, "exponential identity holds iff lambda1 = lambda2 (tolerance 1e-9)"):
        for N in (6, 7):
            rec = _require(C.snplus_semigroup_rigidity(N, tol=1e-9))
            assert rec.computed_values["pairs_equal"] == 5 and rec.computed_values["pairs_distinct"] == 20


def test_13_root_lattice(criterion):
    with criterion(13, "equivalence lemma, |center| = |det Cartan|, condition (ii) <=> center support, SU_q(2) grid"):
        for tag, radius in (("A1", 4), ("A2", 3), ("B2", 3), ("G2", 2)):
            _require(roots.lemma_equiv_check(roots.RootSystem.of_type(tag), radius))
        for tag, order in (("A1", 2), ("A2", 3), ("A3", 4), ("A4", 5), ("B2", 2), ("G2", 1)):
            R = roots.RootSystem.of_type(tag)
            divisors = roots.elementary_divisors(R)
            assert math.prod(divisors) == abs(R.determinant) == order
            assert len(roots.center_points(R)) == order
        for tag in ("A1", "A2", "B2", "G2"):
            R = roots.RootSystem.of_type(tag)
            rng = random.Random(2024)
            for _ in range(50):
                atoms = roots.random_atomic_measure(R, rng)
                assert roots.condition_ii_check(R, atoms, 3, 1e-9) == roots.center_support_check(R, atoms)
        for c in (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2):
            assert roots.suq2_psd(c, 6) == (abs(Fraction(c)) <= 1)


def test_14_biinvariance_symmetry(criterion):
    with criterion(14, "h(p, q) = sum_s (N)_b(s) h(p, s) h(s, q) and h(p, q) = h(q, p) on P(4), N in 4..8"):
        parts = enumerate_partitions(PartitionClass.ALL, 4)
        for family in (S, O, H):
            for N in range(4, 9):
                for p in parts:
                    for q in parts:
                        v = wg.moment_by_kernel(family, N, p, q)
                        assert v == wg.moment_by_kernel(family, N, q, p)
                        total = sum(
                            (wg.falling_factorial(N, len(s)) * wg.moment_by_kernel(family, N, p, s) * wg.moment_by_kernel(family, N, s, q)
                             for s in parts),
                            Fraction(0),
                        )
                        assert total == v, (family, N, p, q)
        total, nonzero = C.biinvariance_sum(6, C.PI4_1, C.PI4_1)
        assert total == Fraction(7, 570)
        assert set(nonzero) == {C.PI4_1, C.PI4_2, C.PI4_2p, C.PI4_3}
