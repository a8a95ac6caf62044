"""Exact integer/rational linear algebra helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput

IntMatrix = list[list[int]]


def bareiss_inverse(a: Sequence[Sequence[int]]) -> tuple[IntMatrix, int]:
    """Fraction-free Gauss-Jordan inversion of an integer matrix.

    Returns ``(adj, det)`` with ``a @ adj == det * I`` and ``det != 0``, so the
    inverse is ``adj / det``.  Every intermediate division is exact.
    Raises ZeroDivisionError when ``a`` is singular.
    """
    n = len(a)
    rows = [list(map(int, r)) + [int(i == j) for j in range(n)] for i, r in enumerate(a)]
    if any(len(r) != 2 * n for r in rows):
        raise ValueError("matrix is not square")
    prev = 1
    for k in range(n):
        if rows[k][k] == 0:
            for i in range(k + 1, n):
                if rows[i][k] != 0:
                    rows[k], rows[i] = rows[i], rows[k]
                    break
            else:
                raise ZeroDivisionError("singular matrix")
        rk = rows[k]
        piv = rk[k]
        for i in range(n):
            if i == k:
                continue
            ri = rows[i]
            m = ri[k]
            if m == 0:
                if piv != prev:
                    rows[i] = [piv * x // prev for x in ri]
                continue
            rows[i] = [(piv * x - m * y) // prev for x, y in zip(ri, rk)]
        prev = piv
    # the left block is now prev * I, so the right block is prev * a^-1
    return [r[n:] for r in rows], prev


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(r, c)) for c in bt] for r in a]


def is_identity(m: Sequence[Sequence], scale=1) -> bool:
    return all(v == (scale if i == j else 0) for i, r in enumerate(m) for j, v in enumerate(r))


def inverse_fractions(a: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    adj, det = bareiss_inverse(a)
    return [[Fraction(x, det) for x in r] for r in adj]


def gauss_jordan_inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Plain rational Gauss-Jordan; an independent check on :func:`bareiss_inverse`."""
    n = len(a)
    m = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(a)]
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[k], m[p] = m[p], m[k]
        piv = m[k][k]
        m[k] = [x / piv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [r[n:] for r in m]


def determinant(a: Sequence[Sequence]) -> Fraction:
    n = len(a)
    m = [[Fraction(x) for x in r] for r in a]
    det = Fraction(1)
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return Fraction(0)
        if p != k:
            m[k], m[p] = m[p], m[k]
            det = -det
        det *= m[k][k]
        for i in range(k + 1, n):
            if m[i][k] != 0:
                f = m[i][k] / m[k][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return det


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Solve a square system exactly; None when singular."""
    n = len(a)
    m = [[Fraction(x) for x in r] + [Fraction(b[i])] for i, r in enumerate(a)]
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            return None
        m[k], m[p] = m[p], m[k]
        piv = m[k][k]
        m[k] = [x / piv for x in m[k]]
        for i in range(n):
            if i != k and m[i][k] != 0:
                f = m[i][k]
                m[i] = [x - f * y for x, y in zip(m[i], m[k])]
    return [r[n] for r in m]


def is_psd(a: Sequence[Sequence]) -> bool:
    """Exact positive-semidefiniteness test for a symmetric rational matrix.

    Symmetric Gaussian elimination: a negative pivot, or a zero pivot with a
    non-zero remaining row, certifies indefiniteness.
    """
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    for k in range(n):
        piv = m[k][k]
        if piv < 0:
            return False
        if piv == 0:
            if any(m[k][j] != 0 for j in range(k + 1, n)):
                return False
            continue
        for i in range(k + 1, n):
            f = m[i][k] / piv
            if f:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return True


def leading_minors(a: Sequence[Sequence]) -> list[Fraction]:
    return [determinant([r[:k] for r in a[:k]]) for k in range(1, len(a) + 1)]


def format_rational(x) -> str:
    """'num/den', with the denominator omitted when it is 1."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, Fraction):
        return s
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, float):
        raise InvalidInput("refusing to parse a float as an exact rational")
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not a rational number: {s!r}") from None
