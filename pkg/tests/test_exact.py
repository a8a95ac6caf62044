from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from qtrace import exact

small_int = st.integers(-6, 6)


def square(n):
    return st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)


matrices = st.integers(1, 5).flatmap(square)


@given(matrices)
def test_bareiss_matches_plain_elimination(a):
    det = exact.determinant(a)
    if det == 0:
        with pytest.raises(ZeroDivisionError):
            exact.bareiss_inverse(a)
        return
    adj, d = exact.bareiss_inverse(a)
    assert exact.is_identity(exact.matmul(a, adj), d)
    assert abs(d) == abs(det)
    assert exact.inverse_fractions(a) == exact.gauss_jordan_inverse(a)


@given(matrices, st.lists(small_int, min_size=5, max_size=5))
def test_solve(a, b):
    b = b[: len(a)]
    x = exact.solve_rational(a, b)
    if exact.determinant(a) == 0:
        assert x is None
    else:
        assert [sum(Fraction(v) * y for v, y in zip(row, x)) for row in a] == b


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_int, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_psd_against_eigenvalues(b):
    # b^T b is PSD; b^T b - c I is PSD exactly when c is at most the least eigenvalue
    m = exact.matmul(list(zip(*b)), b)
    assert exact.is_psd(m)
    lo = np.linalg.eigvalsh(np.array(m, dtype=float)).min()
    shift = Fraction(1, 2)
    assume(abs(lo - 0.5) > 1e-6)
    shifted = [[x - (shift if i == j else 0) for j, x in enumerate(r)] for i, r in enumerate(m)]
    assert exact.is_psd(shifted) == (lo > 0.5)


def test_psd_singular_cases():
    assert exact.is_psd([[1, 1], [1, 1]])
    assert exact.is_psd([[0, 0], [0, 1]])
    assert not exact.is_psd([[0, 1], [1, 0]])
    assert not exact.is_psd([[1, 2], [2, 1]])


@given(st.fractions(max_denominator=1000))
def test_rational_text_round_trip(x):
    assert exact.parse_rational(exact.format_rational(x)) == x


def test_rational_text():
    assert exact.format_rational(Fraction(3, 1)) == "3"
    assert exact.format_rational(Fraction(-1, 30)) == "-1/30"
    with pytest.raises(ValueError):
        exact.parse_rational(0.5)
    with pytest.raises(ValueError):
        exact.parse_rational("1/0")
