"""Fusion rings of O_N^+, S_N^+ and H_N^+.

Labels are non-negative integers for O+ and S+, and binary words (strings
over "0", "1", with "" the trivial label) for H+.

Characters are returned as non-commutative polynomials whose monomials are
strings over the variable letters "1" (X1) and "0" (X0).  For O+ the single
variable is chi_1; for S+ it is chi = chi_1 + 1, the trace of the magic
unitary; for H+, X1 = chi_1 and X0 = chi_0.
"""

from __future__ import annotations

from collections import defaultdict
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import InvalidInput
from .weingarten import QGFamily

Label = Union[int, str]


def validate_label(family: QGFamily, a) -> Label:
    if family is QGFamily.HPLUS:
        if not isinstance(a, str) or any(c not in "01" for c in a):
            raise InvalidInput(f"H+ labels are binary words, got {a!r}")
        return a
    if not isinstance(a, int) or isinstance(a, bool) or a < 0:
        raise InvalidInput(f"{family.value} labels are non-negative integers, got {a!r}")
    return a


def parse_label(family: QGFamily | str, text: str) -> Label:
    """Command-line/JSON form: integers for O+/S+, words for H+ ("" or "e" = trivial)."""
    family = QGFamily.parse(family)
    if family is QGFamily.HPLUS:
        t = str(text).strip()
        if t in ("e", "empty", "∅"):
            t = ""
        return validate_label(family, t)
    try:
        return validate_label(family, int(text))
    except ValueError:
        raise InvalidInput(f"bad label {text!r}") from None


def trivial_label(family: QGFamily) -> Label:
    return "" if family is QGFamily.HPLUS else 0


def label_key(a: Label):
    """Deterministic ordering: by length/size, then lexicographically."""
    return (len(a), a) if isinstance(a, str) else (a, "")


# ---------------------------------------------------------------- words


def word_star(w: str, v: str) -> str:
    """w_1..w_{n-1} (w_n + v_1 mod 2) v_2..v_k."""
    if not w or not v:
        raise InvalidInput("word_star needs two non-empty words")
    mid = str((int(w[-1]) + int(v[0])) % 2)
    return w[:-1] + mid + v[1:]


def word_bar(w: str) -> str:
    return w[::-1]


def word_parity(w: str) -> int:
    return sum(int(c) for c in w) % 2


# ---------------------------------------------------------------- fusion elements


class FusionElement:
    """A finitely supported non-negative integer combination of irreducibles."""

    __slots__ = ("family", "terms")

    def __init__(self, family: QGFamily, terms: Mapping[Label, int] | Iterable = ()):
        self.family = family
        clean: dict[Label, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for lab, m in items:
            validate_label(family, lab)
            if m < 0:
                raise InvalidInput(f"negative multiplicity {m} for label {lab!r}")
            if m:
                clean[lab] = clean.get(lab, 0) + int(m)
        self.terms = dict(sorted(clean.items(), key=lambda kv: label_key(kv[0])))

    @classmethod
    def irreducible(cls, family: QGFamily, a: Label) -> "FusionElement":
        return cls(family, {a: 1})

    def __eq__(self, other) -> bool:
        if isinstance(other, FusionElement):
            return self.family is other.family and self.terms == other.terms
        if isinstance(other, Mapping):
            return self.terms == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __add__(self, other: "FusionElement") -> "FusionElement":
        _same_family(self, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return FusionElement(self.family, out)

    def __mul__(self, other: "FusionElement") -> "FusionElement":
        return product_expand(self, other)

    def __getitem__(self, a: Label) -> int:
        return self.terms.get(a, 0)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"FusionElement({self.family.value}, {self.terms})"

    def dim(self, N: int) -> int:
        return sum(m * dim(self.family, N, a) for a, m in self.terms.items())

    def to_json(self) -> dict:
        return {str(k): v for k, v in self.terms.items()}


def _same_family(x: FusionElement, y: FusionElement) -> None:
    if x.family is not y.family:
        raise InvalidInput(f"family mismatch: {x.family.value} vs {y.family.value}")


def _add_into(acc: dict, terms: Mapping, sign: int = 1) -> None:
    for k, v in terms.items():
        acc[k] = acc.get(k, 0) + sign * v


@lru_cache(maxsize=None)
def _fuse_int(family: QGFamily, a: int, b: int) -> tuple[tuple[int, int], ...]:
    """chi_a chi_b for O+/S+ by iterating the rule for chi_1 chi_n."""
    if a > b:
        a, b = b, a
    if a == 0:
        return ((b, 1),)
    if a == 1:
        if b == 0:
            return ((1, 1),)
        if family is QGFamily.OPLUS:
            return ((b - 1, 1), (b + 1, 1))
        return ((b - 1, 1), (b, 1), (b + 1, 1))
    # chi_1 chi_{a-1} = chi_a + chi_{a-2} (O+) or chi_a + chi_{a-1} + chi_{a-2} (S+)
    acc: dict[int, int] = {}
    for c, m in _fuse_int(family, a - 1, b):
        for d, k in _fuse_int(family, 1, c):
            acc[d] = acc.get(d, 0) + m * k
    _add_into(acc, dict(_fuse_int(family, a - 2, b)), -1)
    if family is QGFamily.SPLUS:
        _add_into(acc, dict(_fuse_int(family, a - 1, b)), -1)
    if any(v < 0 for v in acc.values()):
        raise ArithmeticError("negative multiplicity while iterating the fusion rule")
    return tuple(sorted((k, v) for k, v in acc.items() if v))


@lru_cache(maxsize=None)
def _fuse_word(w: str, v: str) -> tuple[tuple[str, int], ...]:
    """Sum over w = a z, v = bar(z) b of u^{ab} + u^{a*b}; a*b dropped if a or b is empty."""
    acc: dict[str, int] = defaultdict(int)
    for k in range(min(len(w), len(v)) + 1):
        z = w[len(w) - k:]
        if v[:k] != word_bar(z):
            continue
        a, b = w[: len(w) - k], v[k:]
        acc[a + b] += 1
        if a and b:
            acc[word_star(a, b)] += 1
    return tuple(sorted(acc.items(), key=lambda kv: label_key(kv[0])))


def fuse(family: QGFamily | str, a: Label, b: Label) -> FusionElement:
    """Decomposition of u^a (x) u^b into irreducibles."""
    family = QGFamily.parse(family)
    validate_label(family, a)
    validate_label(family, b)
    if family is QGFamily.HPLUS:
        return FusionElement(family, dict(_fuse_word(a, b)))
    return FusionElement(family, dict(_fuse_int(family, a, b)))


def product_expand(x: FusionElement, y: FusionElement) -> FusionElement:
    _same_family(x, y)
    acc: dict[Label, int] = {}
    for a, m in x.terms.items():
        for b, k in y.terms.items():
            for c, j in fuse(x.family, a, b).terms.items():
                acc[c] = acc.get(c, 0) + m * k * j
    return FusionElement(x.family, acc)


def irr(family: QGFamily | str, a: Label) -> FusionElement:
    family = QGFamily.parse(family)
    return FusionElement.irreducible(family, validate_label(family, a))


# ---------------------------------------------------------------- dimensions


@lru_cache(maxsize=None)
def _dim_int(family: QGFamily, N: int, a: int) -> int:
    if family is QGFamily.OPLUS:
        d0, d1, step = 1, N, N
    else:
        d0, d1, step = 1, N - 1, N - 2
    if a == 0:
        return d0
    for _ in range(a - 1):
        d0, d1 = d1, step * d1 - d0
    return d1


@lru_cache(maxsize=None)
def _dim_word(N: int, w: str) -> int:
    # d_1 = N, and d_0 = N - 1 because (u_ij^2) is a magic unitary whose
    # fundamental representation is u^0 plus the trivial one
    if w == "":
        return 1
    if w == "1":
        return N
    if w == "0":
        return N - 1
    x, rest = w[0], w[1:]
    # u^x (x) u^rest = u^{x rest} + u^{x*rest} + [rest = x b] u^b
    d = _dim_word(N, x) * _dim_word(N, rest) - _dim_word(N, word_star(x, rest))
    if rest[0] == x:
        d -= _dim_word(N, rest[1:])
    return d


def dim(family: QGFamily | str, N: int, a: Label) -> int:
    family = QGFamily.parse(family)
    validate_label(family, a)
    if family is QGFamily.HPLUS:
        return _dim_word(N, a)
    return _dim_int(family, N, a)


def parity(family: QGFamily, a: Label) -> int:
    """Sign exponent of the alternating character."""
    if family is QGFamily.HPLUS:
        return word_parity(a)
    if family is QGFamily.OPLUS:
        return a % 2
    raise InvalidInput("S+ has no alternating character")


# ---------------------------------------------------------------- characters

Poly = dict  # monomial (string over "1"/"0") -> integer coefficient


class CharPolynomial:
    """Integer combination of non-commutative monomials in X1 ("1") and X0 ("0")."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[str, int] | None = None):
        self.terms = {m: int(c) for m, c in sorted((terms or {}).items(), key=lambda kv: label_key(kv[0])) if c}

    def __add__(self, other: "CharPolynomial") -> "CharPolynomial":
        out = dict(self.terms)
        _add_into(out, other.terms)
        return CharPolynomial(out)

    def __sub__(self, other: "CharPolynomial") -> "CharPolynomial":
        out = dict(self.terms)
        _add_into(out, other.terms, -1)
        return CharPolynomial(out)

    def __mul__(self, other: "CharPolynomial | int") -> "CharPolynomial":
        if isinstance(other, int):
            return CharPolynomial({m: c * other for m, c in self.terms.items()})
        out: dict[str, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                out[m1 + m2] = out.get(m1 + m2, 0) + c1 * c2
        return CharPolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, CharPolynomial):
            return self.terms == other.terms
        if isinstance(other, Mapping):
            return self.terms == {k: v for k, v in other.items() if v}
        return NotImplemented

    def __repr__(self) -> str:
        return f"CharPolynomial({self.terms})"

    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def evaluate(self, x1, x0=0):
        total = 0
        for m, c in self.terms.items():
            v = c
            for ch in m:
                v *= x1 if ch == "1" else x0
            total += v
        return total

    def pretty(self, single_variable: bool = False) -> str:
        def mono(m: str) -> str:
            if not m:
                return "1"
            if single_variable:
                return "X" if len(m) == 1 else f"X^{len(m)}"
            return "".join("X1" if ch == "1" else "X0" for ch in m)

        parts = []
        for m, c in sorted(self.terms.items(), key=lambda kv: (-len(kv[0]), kv[0])):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = mono(m) if (a == 1 and m) else (str(a) if not m else f"{a}{mono(m)}")
            parts.append((sign, body))
        if not parts:
            return "0"
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return dict(self.terms)


_ONE = CharPolynomial({"": 1})
_X1 = CharPolynomial({"1": 1})
_X0 = CharPolynomial({"0": 1})


@lru_cache(maxsize=None)
def _char_int(family: QGFamily, a: int) -> CharPolynomial:
    if a == 0:
        return _ONE
    if family is QGFamily.OPLUS:
        if a == 1:
            return _X1
        return _X1 * _char_int(family, a - 1) - _char_int(family, a - 2)
    # S+: chi_1 = X - 1, chi_{n+1} = (X - 2) chi_n - chi_{n-1}
    if a == 1:
        return _X1 - _ONE
    return (_X1 - _ONE * 2) * _char_int(family, a - 1) - _char_int(family, a - 2)


@lru_cache(maxsize=None)
def _char_word(w: str) -> CharPolynomial:
    if w == "":
        return _ONE
    if w == "1":
        return _X1
    if w == "0":
        return _X0
    x, rest = w[0], w[1:]
    # X_x chi_rest = chi_{x rest} + chi_{x*rest} + [rest = x b] chi_b
    out = (_X1 if x == "1" else _X0) * _char_word(rest) - _char_word(word_star(x, rest))
    if rest[0] == x:
        out = out - _char_word(rest[1:])
    return out


def char_poly(family: QGFamily | str, a: Label) -> CharPolynomial:
    family = QGFamily.parse(family)
    validate_label(family, a)
    if family is QGFamily.HPLUS:
        return _char_word(a)
    return _char_int(family, a)


def counit_variables(family: QGFamily, N: int) -> tuple[int, int]:
    """Values of (X1, X0) under the counit."""
    if family is QGFamily.SPLUS:
        return N, 0  # chi = chi_1 + 1
    if family is QGFamily.OPLUS:
        return N, 0
    return N, N - 1


def labels_up_to(family: QGFamily, size: int) -> list[Label]:
    """Integer labels 0..size, or every binary word of length <= size."""
    if family is QGFamily.HPLUS:
        out = [""]
        layer = [""]
        for _ in range(size):
            layer = [w + c for w in layer for c in "01"]
            out.extend(layer)
        return out
    return list(range(size + 1))

