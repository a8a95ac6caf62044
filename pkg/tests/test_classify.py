from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qtrace import classify as C
from qtrace.central import CentralFunctional, GeneratorWord
from qtrace.errors import CapExceeded, InvalidInput
from qtrace.fusion import dim
from qtrace.weingarten import QGFamily, extended_tier

O, S, H = QGFamily.OPLUS, QGFamily.SPLUS, QGFamily.HPLUS


def test_onplus_recursion_coefficients():
    rec = C.onplus_recursion(4)
    assert rec.verdict, rec.failures
    assert rec.coefficients["a1"] == 1 and rec.coefficients["b2"] == 1
    assert rec.coefficients["a3"] == 14
    assert len(rec.steps) == 3


@pytest.mark.parametrize("N", [3, 5])
def test_onplus_recursion_other_N(N):
    rec = C.onplus_recursion(N)
    assert rec.verdict, rec.failures
    assert rec.coefficients["a3"] * dim(O, N, 1) == dim(O, N, 3)


def test_onplus_recursion_needs_three_indices():
    with pytest.raises(InvalidInput):
        C.onplus_recursion(2)


@pytest.mark.parametrize(
    "phi,want",
    [("counit", (0, 1, 0)), ("haar", (1, 0, 0)), ("alt", (0, 0, 1))],
)
def test_onplus_extreme_points(phi, want):
    N = 4
    d1, d2 = dim(O, N, 1), dim(O, N, 2)
    args = {"counit": (d1, d2), "haar": (0, 0), "alt": (-d1, d2)}[phi]
    dec = C.onplus_decompose(N, *args)
    assert dec.valid
    assert tuple(dec.coefficients[k] for k in ("haar", "counit", "alt")) == want


def test_invalid_decompositions_are_flagged():
    assert not C.onplus_decompose(4, 5, 0).valid
    assert not C.hnplus_decompose(6, Fraction(1, 2), Fraction(1, 4)).valid
    assert not C.hnplus_decompose(6, 0, Fraction(3, 2)).valid
    assert not C.snplus_classify(6, -1).valid
    assert C.snplus_classify(6, 5).coefficients == {"haar": 0, "counit": 1}
    assert C.snplus_classify(6, 0).coefficients == {"haar": 1, "counit": 0}


@given(st.fractions(-2, 2, max_denominator=8), st.fractions(-2, 2, max_denominator=8))
def test_decomposition_validity_region(lam, mu):
    dec = C.hnplus_decompose(6, lam, mu)
    assert dec.sums_to_one
    assert dec.valid == (abs(lam) <= mu <= 1)
    if dec.valid:
        assert all(c >= 0 for c in dec.coefficients.values())
        phi = dec.functional()
        # values on an odd and an even word
        assert phi.value("1") == lam * dim(H, 6, "1")
        assert phi.value("11") == mu * dim(H, 6, "11")


@given(st.fractions(-1, 1, max_denominator=6), st.fractions(0, 1, max_denominator=6))
def test_onplus_functional_values(lam, mu):
    N = 4
    dec = C.onplus_decompose(N, lam * dim(O, N, 1), mu * dim(O, N, 2))
    phi = dec.functional()
    for n in range(1, 6):
        want = (lam if n % 2 else mu) * dim(O, N, n)
        assert phi.value(n) == want


@pytest.mark.parametrize("N", [6, 7])
def test_a3_b3(N):
    a3, b3 = C.snplus_a3b3(N)
    assert a3 != 0 and b3 != 0
    assert a3 * dim(S, N, 1) + b3 * dim(S, N, 2) == dim(S, N, 3)


def test_a3_b3_values_at_six():
    assert C.snplus_a3b3(6) == (Fraction(15, 4), Fraction(11, 4))


def test_semigroup_rigidity():
    rec = C.snplus_semigroup_rigidity(6)
    assert rec.verdict, rec.failures
    assert rec.checks["holds[0,0]"] and rec.checks["holds[-1,-1]"]
    assert rec.checks["fails[0,-1]"]


@pytest.mark.parametrize("N", [6, 7])
def test_nonvanishing_default_tier(N):
    assert C.snplus_nonvanishing(N, 0).verdict
    assert C.snplus_nonvanishing(N, 1, ("odd",)).verdict
    with pytest.raises(CapExceeded):
        C.snplus_nonvanishing(N, 1)


@pytest.mark.parametrize("N", range(4, 10))
def test_appendix(N):
    for fn in (C.appendix_order4, C.appendix_order5, C.appendix_quadratic, C.snplus_prop_a3_equiv):
        rec = fn(N)
        assert rec.verdict, (fn.__name__, rec.failures)


def test_quadratic_root_at_six():
    rec = C.appendix_quadratic(6)
    assert rec.computed_values["X"] == Fraction(7, 570)
    assert rec.computed_values["X_tilde"] == Fraction(7, 19)
    assert rec.computed_values["realised_root"] == "second"


@pytest.mark.parametrize("N", [6, 7])
def test_hnplus(N):
    rec = C.hnplus_relations(N)
    assert rec.verdict, rec.failures
    assert rec.computed_values["phi101/phi0"] == Fraction(N * (N * N - 3 * N + 1), N - 1)
    assert rec.computed_values["delta"] == N - 2
    assert rec.computed_values["phi11/phi0"] == N
    assert C.hnplus_a111b111(N).verdict


def test_hnplus_length2():
    rec = C.hnplus_length2(6, 5, 6, 20)
    assert rec.verdict
    assert rec.computed_values["d2/d1"] == Fraction(19, 5)
    assert rec.computed_values["phi00"] == 19


def test_free_poisson_and_base_moments():
    for N in (4, 8):
        assert C.free_poisson_record(N).verdict
        assert C.splus_base_moments(N).verdict
        assert C.snplus_a3_separation(N).verdict


def test_grid():
    grid = C.decomposition_grid()
    assert len(grid) == 25
    assert all(abs(l) <= m <= 1 for l, m in grid)


def test_words_up_to():
    ws = C.words_up_to(O, 2, [(1, 1, 1), (1, 2, 1)])
    assert len(ws) == 1 + 2 + 4


def test_traciality_suite_detects_non_tracial_functional():
    # a central functional that is not a combination of the extreme states
    phi = CentralFunctional.custom(O, 4, {0: 1, 1: 0, 2: 1, 3: 0, 4: 0})
    words = [GeneratorWord(O, ((1, 1, 1), (1, 2, 1), (2, 1, 1), (1, 1, 1)))]
    words += C.words_up_to(O, 4, [(1, 1, 1), (1, 2, 1), (2, 1, 1), (2, 2, 1)])
    _, failures = C.traciality_suite([phi], words)
    assert failures


@pytest.mark.slow
def test_nonvanishing_extended_tier():
    with extended_tier():
        rec = C.snplus_nonvanishing(6, 1)
    assert rec.verdict
    assert rec.computed_values["h((p_i p_j)^1 p_l p_i chi_4)"] == Fraction(11, 8520)
