"""Central functionals and the central expectation.

A central functional is determined by its values phi_a = phi(chi_a) on the
irreducible characters, and phi(x) = sum_a h(chi_a^* x) phi_a.  The
coefficients h(chi_a^* x) = h(x chi_a^*) are Haar moments of x followed by a
character, and characters are polynomials in traces:

    T1 = sum_k u_kk          (one leg; chi_1 for O+, chi_1 + 1 for S+)
    T2 = sum_k u_kk^2        (two legs; chi_0 + 1 for H+)

Two independent routes evaluate h(x T_{m1} ... T_{mr}):

* ``kernel``: enumerate how the summed indices k_t coincide with each other
  and with the values already used by x, weight each pattern by the falling
  factorial counting its realisations, and call ``moment_by_kernel``.
* ``pairs``: expand the Weingarten sum over (pi, sigma) first and count the
  index assignments each pair admits.  Row and column legs become graph
  nodes joined by the blocks of pi and sigma and by the trace letters; a
  pair contributes N^(free components) when the fixed indices of x are
  consistent.  This structure does not depend on the values in x, so it is
  built once per word shape and aggregated against W.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import fusion
from .errors import CapExceeded, InvalidInput, MissingValue
from .exact import format_rational, parse_rational
from .fusion import Label, char_poly, dim, label_key, parity, trivial_label, validate_label
from .partitions import PartitionClass, enumerate_partitions, kernel
from .weingarten import LIMITS, QGFamily, falling_factorial, get_context, moment, moment_by_kernel

# ---------------------------------------------------------------- words


@dataclass(frozen=True)
class GeneratorWord:
    """Product of generator letters (row, col, exponent); exponent 2 is H+ only."""

    family: QGFamily
    letters: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self) -> None:
        fam = QGFamily.parse(self.family)
        object.__setattr__(self, "family", fam)
        clean = []
        for let in self.letters:
            if len(let) == 2:
                let = (let[0], let[1], 1)
            r, c, e = (int(x) for x in let)
            if r < 1 or c < 1:
                raise InvalidInput(f"indices are 1-based, got {let!r}")
            if e not in (1, 2) or (e == 2 and fam is not QGFamily.HPLUS):
                raise InvalidInput(f"exponent {e} not allowed for {fam.value}")
            clean.append((r, c, e))
        object.__setattr__(self, "letters", tuple(clean))

    @classmethod
    def diagonal(cls, family: QGFamily | str, indices: Iterable[int], exps: Iterable[int] | None = None) -> "GeneratorWord":
        """u_{i1} u_{i2} ... with u_i = u_ii (p_i = p_ii for S+)."""
        idx = list(indices)
        ex = list(exps) if exps is not None else [1] * len(idx)
        return cls(QGFamily.parse(family), tuple((i, i, e) for i, e in zip(idx, ex)))

    def __mul__(self, other: "GeneratorWord") -> "GeneratorWord":
        if self.family is not other.family:
            raise InvalidInput("family mismatch")
        return GeneratorWord(self.family, self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    @property
    def legs(self) -> int:
        return sum(e for _, _, e in self.letters)

    def leg_indices(self) -> tuple[list[int], list[int]]:
        rows: list[int] = []
        cols: list[int] = []
        for r, c, e in self.letters:
            rows += [r] * e
            cols += [c] * e
        return rows, cols

    def max_index(self) -> int:
        return max((max(r, c) for r, c, _ in self.letters), default=0)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        g = "p" if self.family is QGFamily.SPLUS else "u"
        return " ".join(f"{g}{r}{c}" + ("^2" if e == 2 else "") for r, c, e in self.letters)


def normalize_splus(word: GeneratorWord) -> GeneratorWord | None:
    """Apply p_ij p_ij = p_ij and the row/column orthogonality of a magic unitary.

    Returns None when the word is zero in the algebra.
    """
    if word.family is not QGFamily.SPLUS:
        return word
    out: list[tuple[int, int, int]] = []
    for let in word.letters:
        if out:
            r0, c0, _ = out[-1]
            r, c, _ = let
            if (r0, c0) == (r, c):
                continue
            if r0 == r or c0 == c:
                return None
        out.append(let)
    return GeneratorWord(word.family, tuple(out))


def _check_indices(word: GeneratorWord, N: int) -> None:
    if word.max_index() > N:
        raise InvalidInput(f"index {word.max_index()} outside 1..{N}")


# ---------------------------------------------------------------- traces


def trace_expansion(family: QGFamily, a: Label) -> dict[str, int]:
    """chi_a^* as an integer combination of trace monomials ("1" = T1, "2" = T2)."""
    poly = char_poly(family, a)
    out: dict[str, int] = {}
    for mono, c in poly.terms.items():
        mono = mono[::-1]  # adjoint: generators are self-adjoint, products reverse
        parts = [[("1", 1)] if ch == "1" else [("2", 1), ("", -1)] for ch in mono]
        for choice in product(*parts) if parts else [()]:
            m = "".join(s for s, _ in choice)
            coef = c * math.prod(k for _, k in choice)
            out[m] = out.get(m, 0) + coef
    return {m: c for m, c in out.items() if c}


def _trace_legs(tmono: str) -> int:
    return sum(int(ch) for ch in tmono)


def max_trace_legs(family: QGFamily, a: Label) -> int:
    return max((_trace_legs(m) for m in trace_expansion(family, a)), default=0)


# ---- kernel route


def trace_moment_kernel(family: QGFamily, N: int, word: GeneratorWord, tmono: str) -> Fraction:
    """h(x T...) by enumerating coincidence patterns of the summed indices."""
    rows, cols = word.leg_indices()
    if not rows and not tmono:
        return Fraction(1)
    used = sorted(set(rows) | set(cols))
    r = len(tmono)
    total = Fraction(0)
    # pattern: each trace letter takes a used value, or a fresh class (RGS)
    for pattern in _patterns(len(used), r):
        fresh = max((p - len(used) for p in pattern), default=-1) + 1
        fresh = max(fresh, 0)
        if len(used) + fresh > N:
            continue
        weight = falling_factorial(N - len(used), fresh)
        vals = [used[p] if p < len(used) else N + 1 + (p - len(used)) for p in pattern]
        rr, cc = list(rows), list(cols)
        for ch, k in zip(tmono, vals):
            rr += [k] * int(ch)
            cc += [k] * int(ch)
        total += weight * moment_by_kernel(family, N, kernel(rr), kernel(cc))
    return total


def _patterns(n_used: int, r: int):
    """Sequences in which fresh labels n_used, n_used+1, ... first appear in order."""

    def rec(pos: int, next_fresh: int, acc: list[int]):
        if pos == r:
            yield tuple(acc)
            return
        for v in range(next_fresh + 1):
            acc.append(v)
            yield from rec(pos + 1, max(next_fresh, v + 1) if v == next_fresh else next_fresh, acc)
            acc.pop()

    yield from rec(0, n_used, [])


# ---- pair route


@lru_cache(maxsize=64)
def _pair_structure(kind: PartitionClass, n_x: int, tmono: str):
    """Per (pi, sigma): the pattern of fixed nodes forced equal, and the free component count.

    Returns (first, free, order, starts): first[k] lists, for each fixed node,
    the first fixed node in its component; free[k] counts the components
    without fixed nodes; order sorts the flattened pair indices pi * m + sigma
    by key and starts[k] is where key k begins in that order.
    """
    n = n_x + _trace_legs(tmono)
    parts = enumerate_partitions(kind, n)
    m = len(parts)
    roots = np.array([[p.blocks[p.labels[c]][0] - 1 for c in range(n)] for p in parts], dtype=np.int64)
    width = 2 * n
    base = np.arange(width, dtype=np.int8)

    def union(arr: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        idx = np.arange(arr.shape[0])
        la = arr[idx, a][:, None]
        lb = arr[idx, b][:, None]
        new = np.minimum(la, lb)
        return np.where((arr == la) | (arr == lb), new, arr)

    # trace letters tie the row and column nodes of their legs together
    pos = n_x
    for ch in tmono:
        legs = list(range(pos, pos + int(ch)))
        nodes = legs + [n + x for x in legs]
        for x in nodes[1:]:
            lo, hi = sorted((base[nodes[0]], base[x]))
            base = np.where(base == hi, lo, base)
        pos += int(ch)

    nf = 2 * n_x
    fixed_cols = list(range(n_x)) + [n + x for x in range(n_x)]
    radix = max(nf, 1)
    ids = np.empty(m * m, dtype=np.int64)
    for a in range(m):
        row = base[None, :].copy()
        for c in range(n):
            rc = roots[a, c]
            if rc != c:
                row = union(row, np.array([c]), np.array([rc]))
        arr = np.repeat(row, m, axis=0)
        for c in range(n):
            rc = roots[:, c]
            mask = rc != c
            if mask.any():
                k = int(mask.sum())
                arr[mask] = union(arr[mask], np.full(k, n + c), n + rc[mask])
        srt = np.sort(arr, axis=1)
        comps = 1 + (np.diff(srt, axis=1) != 0).sum(axis=1)
        if nf:
            fx = arr[:, fixed_cols]
            first = (fx[:, :, None] == fx[:, None, :]).argmax(axis=2)
            nfixed = (first == np.arange(nf)[None, :]).sum(axis=1)
            code = (first * (radix ** np.arange(nf, dtype=np.int64))[None, :]).sum(axis=1)
        else:
            nfixed = np.zeros(m, dtype=np.int64)
            code = np.zeros(m, dtype=np.int64)
        free = comps - nfixed
        ids[a * m:(a + 1) * m] = code * (width + 1) + free
    uniq, inverse = np.unique(ids, return_inverse=True)
    free = uniq % (width + 1)
    code = uniq // (width + 1)
    first = np.stack([(code // radix**j) % radix for j in range(nf)], axis=1) if nf else np.zeros((len(uniq), 0), dtype=np.int64)
    order = np.argsort(inverse, kind="stable")
    starts = np.searchsorted(inverse[order], np.arange(len(uniq)))
    return first, free, order, starts


@lru_cache(maxsize=256)
def _pair_sums(family: QGFamily, N: int, n_x: int, tmono: str):
    """Per key of the pair structure: sum of W numerators, plus the common denominator."""
    n = n_x + _trace_legs(tmono)
    ctx = get_context(family, n, N)
    first, free, order, starts = _pair_structure(family.partition_class, n_x, tmono)
    if ctx.size == 0:
        return first, free, np.zeros(len(free), dtype=np.int64), 1
    w = ctx.w_num.reshape(-1)[order]
    sums = np.add.reduceat(w, starts) if len(starts) else np.zeros(0, dtype=w.dtype)
    return first, free, sums, ctx.w_den


def trace_moment_pairs(family: QGFamily, N: int, word: GeneratorWord, tmono: str) -> Fraction:
    """h(x T...) by counting index assignments admitted by each (pi, sigma)."""
    rows, cols = word.leg_indices()
    n_x = len(rows)
    if n_x == 0 and not tmono:
        return Fraction(1)
    n = n_x + _trace_legs(tmono)
    if family.partition_class is not PartitionClass.NC and n % 2:
        return Fraction(0)
    return _pair_value(family, N, n_x, tmono, tuple(kernel(rows + cols).labels) if n_x else ())


@lru_cache(maxsize=65536)
def _pair_value(family: QGFamily, N: int, n_x: int, tmono: str, fixed: tuple[int, ...]) -> Fraction:
    first, free, sums, den = _pair_sums(family, N, n_x, tmono)
    if len(free) == 0:
        return Fraction(0)
    if fixed:
        v = np.array(fixed)
        ok = (v[first] == v[None, :]).all(axis=1)
    else:
        ok = np.ones(len(free), dtype=bool)
    total = 0
    for s, f in zip(sums[ok], free[ok]):
        total += int(s) * N ** int(f)
    return Fraction(total, den)


TRACE_ROUTES: dict[str, Callable] = {"kernel": trace_moment_kernel, "pairs": trace_moment_pairs}


# ---------------------------------------------------------------- support and coefficients


def letter_rep(family: QGFamily, exponent: int) -> fusion.FusionElement:
    """Representation whose coefficients are the letters: u (or p), and u^2 for H+."""
    if family is QGFamily.OPLUS:
        return fusion.irr(family, 1)
    if family is QGFamily.SPLUS:
        return fusion.FusionElement(family, {0: 1, 1: 1})
    if exponent == 1:
        return fusion.irr(family, "1")
    return fusion.FusionElement(family, {"": 1, "0": 1})


def support(word: GeneratorWord) -> list[Label]:
    """Labels occurring in the tensor product carrying the word, in label order."""
    fam = word.family
    acc = fusion.irr(fam, trivial_label(fam))
    for _, _, e in word.letters:
        acc = acc * letter_rep(fam, e)
    return sorted(acc.terms, key=label_key)


def _prepare(family: QGFamily | str, N: int, x: GeneratorWord) -> GeneratorWord | None:
    family = QGFamily.parse(family)
    if x.family is not family:
        raise InvalidInput(f"word family {x.family.value} differs from {family.value}")
    _check_indices(x, N)
    return normalize_splus(x)


def _check_cap(family: QGFamily, n_x: int, labels: Iterable[Label]) -> None:
    worst = max((max_trace_legs(family, a) for a in labels), default=0)
    cap = LIMITS.cap(family)
    if n_x + worst > cap:
        raise CapExceeded(
            f"{family.value}: word of {n_x} legs plus a character of {worst} legs needs "
            f"{n_x + worst} legs, above the cap {cap}"
        )


def word_character_moment(
    family: QGFamily | str, N: int, x: GeneratorWord, a: Label, route: str = "kernel"
) -> Fraction:
    """h(chi_a^* x)."""
    family = QGFamily.parse(family)
    validate_label(family, a)
    y = _prepare(family, N, x)
    if y is None:
        return Fraction(0)
    _check_cap(family, y.legs, [a])
    fn = TRACE_ROUTES[route]
    total = Fraction(0)
    for tmono, c in trace_expansion(family, a).items():
        total += c * fn(family, N, y, tmono)
    return total


def expectation_coeffs(
    family: QGFamily | str, N: int, x: GeneratorWord, label_bound: int, route: str = "pairs"
) -> dict[Label, Fraction]:
    """h(chi_a^* x) for every label up to the bound (integer size or word length).

    Labels outside the support of x are computed too and must come out zero;
    a non-zero value there raises ArithmeticError.
    """
    family = QGFamily.parse(family)
    labels = fusion.labels_up_to(family, label_bound)
    y = _prepare(family, N, x)
    if y is None:
        return {a: Fraction(0) for a in labels}
    _check_cap(family, y.legs, labels)
    supp = set(support(y))
    out = {}
    for a in labels:
        v = word_character_moment(family, N, y, a, route=route)
        if a not in supp and v != 0:
            raise ArithmeticError(f"label {a!r} outside the support of {y} has coefficient {v}")
        out[a] = v
    return out


@lru_cache(maxsize=100000)
def _coeffs_on_support(family: QGFamily, N: int, y: GeneratorWord, route: str) -> tuple[tuple[Label, Fraction], ...]:
    labels = support(y)
    _check_cap(family, y.legs, labels)
    return tuple((a, word_character_moment(family, N, y, a, route=route)) for a in labels)


def support_coeffs(family: QGFamily | str, N: int, x: GeneratorWord, route: str = "pairs") -> dict[Label, Fraction]:
    """h(chi_a^* x) on the support of x (all other coefficients vanish)."""
    family = QGFamily.parse(family)
    y = _prepare(family, N, x)
    if y is None:
        return {}
    return dict(_coeffs_on_support(family, N, canonical_word(y), route))


def canonical_word(x: GeneratorWord) -> GeneratorWord:
    """Relabel indices by first appearance (rows and columns share one relabelling)."""
    mapping: dict[int, int] = {}
    letters = []
    for r, c, e in x.letters:
        r2 = mapping.setdefault(r, len(mapping) + 1)
        c2 = mapping.setdefault(c, len(mapping) + 1)
        letters.append((r2, c2, e))
    return GeneratorWord(x.family, tuple(letters))


# ---------------------------------------------------------------- central functionals

KINDS = ("haar", "counit", "alt", "custom", "linear", "convolution")


@dataclass(frozen=True)
class CentralFunctional:
    """phi, through its values phi_a = phi(chi_a); unlisted labels follow ``kind``."""

    family: QGFamily
    N: int
    kind: str
    overrides: Mapping[Label, object] = field(default_factory=dict)
    components: tuple = ()
    exact: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", QGFamily.parse(self.family))
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown functional kind {self.kind!r}")
        if self.kind == "alt" and self.family is QGFamily.SPLUS:
            raise InvalidInput("S+ has no alternating character")
        if self.N < self.family.min_N:
            raise InvalidInput(f"N={self.N} is below the minimum for {self.family.value}")
        ov = {}
        for k, v in dict(self.overrides).items():
            validate_label(self.family, k)
            ov[k] = v if not self.exact else Fraction(v)
        object.__setattr__(self, "overrides", ov)

    # constructors
    @classmethod
    def haar(cls, family, N: int) -> "CentralFunctional":
        return cls(family, N, "haar")

    @classmethod
    def counit(cls, family, N: int) -> "CentralFunctional":
        return cls(family, N, "counit")

    @classmethod
    def alt(cls, family, N: int) -> "CentralFunctional":
        return cls(family, N, "alt")

    @classmethod
    def custom(cls, family, N: int, values: Mapping[Label, object], exact: bool = True) -> "CentralFunctional":
        return cls(family, N, "custom", dict(values), exact=exact)

    @classmethod
    def linear(cls, terms: Sequence[tuple[object, "CentralFunctional"]]) -> "CentralFunctional":
        """sum of c_k phi_k (a mixture when the c_k are non-negative and sum to 1)."""
        if not terms:
            raise InvalidInput("empty linear combination")
        f0 = terms[0][1]
        for _, f in terms:
            _same_space(f0, f)
        ex = all(f.exact for _, f in terms) and all(not isinstance(c, float) for c, _ in terms)
        comps = tuple((Fraction(c) if ex else c, f) for c, f in terms)
        return cls(f0.family, f0.N, "linear", components=comps, exact=ex)

    def value(self, a: Label):
        if a in self.overrides:
            return self.overrides[a]
        fam, N = self.family, self.N
        k = self.kind
        if k == "haar":
            return Fraction(int(a == trivial_label(fam)))
        if k == "counit":
            return Fraction(dim(fam, N, a))
        if k == "alt":
            return Fraction((-1) ** parity(fam, a) * dim(fam, N, a))
        if k == "linear":
            return sum((c * f.value(a) for c, f in self.components), Fraction(0) if self.exact else 0.0)
        if k == "convolution":
            f, g = self.components
            return f.value(a) * g.value(a) / dim(fam, N, a)
        raise MissingValue(f"custom functional has no value at label {a!r}")

    def __call__(self, a: Label):
        return self.value(a)

    def to_json(self) -> dict:
        fmt = format_rational if self.exact else float
        out = {
            "family": self.family.value,
            "N": self.N,
            "kind": self.kind,
            "overrides": {str(k): fmt(v) for k, v in sorted(self.overrides.items(), key=lambda kv: label_key(kv[0]))},
        }
        if self.components:
            if self.kind == "linear":
                out["components"] = [{"coefficient": fmt(c), "functional": f.to_json()} for c, f in self.components]
            else:
                out["components"] = [f.to_json() for f in self.components]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "CentralFunctional":
        fam = QGFamily.parse(data["family"])
        N = int(data["N"])
        kind = data["kind"]
        ov = {_label_from_json(fam, k): parse_rational(v) for k, v in data.get("overrides", {}).items()}
        if kind == "linear":
            comps = tuple(
                (parse_rational(c["coefficient"]), cls.from_json(c["functional"])) for c in data["components"]
            )
            return cls(fam, N, kind, ov, comps)
        if kind == "convolution":
            comps = tuple(cls.from_json(c) for c in data["components"])
            return cls(fam, N, kind, ov, comps)
        return cls(fam, N, kind, ov)


def _label_from_json(family: QGFamily, key: str) -> Label:
    return key if family is QGFamily.HPLUS else int(key)


def _same_space(f: CentralFunctional, g: CentralFunctional) -> None:
    if f.family is not g.family or f.N != g.N:
        raise InvalidInput(f"functionals live on different quantum groups ({f.family.value}, {f.N}) vs ({g.family.value}, {g.N})")


def evaluate(phi: CentralFunctional, x: GeneratorWord, route: str = "pairs"):
    """phi(x) = sum_a h(chi_a^* x) phi_a."""
    coeffs = support_coeffs(phi.family, phi.N, x, route=route)
    total = Fraction(0) if phi.exact else 0.0
    for a, c in coeffs.items():
        if c:
            total += c * phi.value(a)
    return total


def traciality_residual(phi: CentralFunctional, a: GeneratorWord, b: GeneratorWord, route: str = "pairs"):
    """phi(ab) - phi(ba)."""
    return evaluate(phi, a * b, route) - evaluate(phi, b * a, route)


def haar_moment(x: GeneratorWord, N: int) -> Fraction:
    """Direct Weingarten evaluation of h(x), bypassing the central expectation."""
    y = normalize_splus(x)
    if y is None:
        return Fraction(0)
    rows, cols = y.leg_indices()
    return moment(y.family, N, rows, cols)


# ---------------------------------------------------------------- convolution calculus


def convolve(phi: CentralFunctional, psi: CentralFunctional) -> CentralFunctional:
    """(phi * psi)_a = phi_a psi_a / d_a."""
    _same_space(phi, psi)
    return CentralFunctional(phi.family, phi.N, "convolution", components=(phi, psi), exact=phi.exact and psi.exact)


def conv_exponential(phi: CentralFunctional, t, a: Label, truncation: int = 20) -> float:
    """Truncated series sum_{n <= trunc} t^n (phi - eps)^{*n}(chi_a) / n!, summed exactly."""
    if truncation < 1:
        raise InvalidInput("truncation must be at least 1")
    validate_label(phi.family, a)
    eps = CentralFunctional.counit(phi.family, phi.N)
    gen = CentralFunctional.linear([(1, phi), (-1, eps)])
    t_exact = Fraction(t)
    term: CentralFunctional = eps
    total = Fraction(0)
    for n in range(truncation + 1):
        if n:
            term = convolve(term, gen)
        total += t_exact**n * Fraction(term.value(a)) / math.factorial(n)
    return float(total)


def closed_form(phi: CentralFunctional, t, a: Label) -> float:
    """d_a exp(t (phi_a / d_a - 1))."""
    d = dim(phi.family, phi.N, a)
    lam = float(Fraction(phi.value(a)) / d) - 1.0
    return d * math.exp(float(t) * lam)
