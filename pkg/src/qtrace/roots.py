"""Weight-lattice combinatorics: Weyl groups, saturated sets, centers and torus measures.

Weights are integer vectors in the fundamental-weight basis; the simple root
alpha_j is column j of the Cartan matrix, so s_i(lam) = lam - lam_i alpha_i.
"""

from __future__ import annotations

import cmath
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import exact
from .errors import CapExceeded, InvalidInput
from .records import VerificationRecord

Weight = tuple[int, ...]
WEYL_CAP = 1152
_TYPE_LETTERS = "ABCDG"


def _cartan_for(letter: str, n: int) -> list[list[int]]:
    if letter == "G":
        if n != 2:
            raise InvalidInput("G is only defined in rank 2")
        return [[2, -1], [-3, 2]]
    low = {"A": 1, "B": 2, "C": 2, "D": 3}[letter]
    if not low <= n <= 4:
        raise InvalidInput(f"type {letter}{n} is outside the supported ranks {low}..4")
    a = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    if letter == "B":
        a[n - 1][n - 2] = -2  # short last root
    elif letter == "C":
        a[n - 2][n - 1] = -2
    elif letter == "D":
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    return a


def _symmetrizer(a: Sequence[Sequence[int]]) -> list[Fraction] | None:
    """d with d_i a_ij = d_j a_ji, or None."""
    r = len(a)
    d: list[Fraction | None] = [None] * r
    for start in range(r):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(r):
                if j == i or a[i][j] == 0:
                    continue
                want = d[i] * a[i][j] / a[j][i]
                if d[j] is None:
                    d[j] = want
                    queue.append(j)
                elif d[j] != want:
                    return None
    return d  # type: ignore[return-value]


@dataclass(frozen=True)
class RootSystem:
    cartan: tuple[tuple[int, ...], ...]
    type_tag: str = "custom"

    def __post_init__(self) -> None:
        a = [list(row) for row in self.cartan]
        r = len(a)
        if r == 0 or any(len(row) != r for row in a):
            raise InvalidInput("Cartan matrix must be square and non-empty")
        if r > 4:
            raise InvalidInput("rank above 4 is not supported")
        for i in range(r):
            for j in range(r):
                v = a[i][j]
                if not isinstance(v, int) or isinstance(v, bool):
                    raise InvalidInput("Cartan entries must be integers")
                if i == j and v != 2:
                    raise InvalidInput("Cartan diagonal must be 2")
                if i != j and (v > 0 or (v == 0) != (a[j][i] == 0)):
                    raise InvalidInput("off-diagonal Cartan entries must be <= 0 with a_ij = 0 iff a_ji = 0")
        d = _symmetrizer(a)
        if d is None:
            raise InvalidInput("Cartan matrix is not symmetrizable")
        sym = [[d[i] * a[i][j] for j in range(r)] for i in range(r)]
        if any(m <= 0 for m in exact.leading_minors(sym)):
            raise InvalidInput("Cartan matrix is not of finite type")
        object.__setattr__(self, "cartan", tuple(tuple(row) for row in a))

    @classmethod
    def of_type(cls, tag: str) -> "RootSystem":
        t = tag.strip().upper().replace("_", "")
        if len(t) < 2 or t[0] not in _TYPE_LETTERS or not t[1:].isdigit():
            raise InvalidInput(f"unknown root system type {tag!r}")
        return cls(tuple(map(tuple, _cartan_for(t[0], int(t[1:])))), t)

    @classmethod
    def from_json(cls, data: Mapping) -> "RootSystem":
        if "type" in data:
            return cls.of_type(str(data["type"]))
        if "cartan" in data:
            try:
                return cls(tuple(tuple(int(v) for v in row) for row in data["cartan"]))
            except (TypeError, ValueError) as e:
                raise InvalidInput(f"bad Cartan matrix: {e}") from None
        raise InvalidInput('root system needs "type" or "cartan"')

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def simple_root(self, j: int) -> Weight:
        return tuple(row[j] for row in self.cartan)

    def reflect(self, i: int, lam: Weight) -> Weight:
        c = lam[i]
        return tuple(x - c * a for x, a in zip(lam, self.simple_root(i)))

    @cached_property
    def cartan_inverse(self) -> list[list[Fraction]]:
        return exact.inverse_fractions([list(r) for r in self.cartan])

    @cached_property
    def determinant(self) -> int:
        return int(exact.determinant([list(r) for r in self.cartan]))

    def to_json(self) -> dict:
        return {"type": self.type_tag, "cartan": [list(r) for r in self.cartan]}


def _weight(R: RootSystem, lam: Iterable[int]) -> Weight:
    w = tuple(lam)
    if len(w) != R.rank or any(not isinstance(x, (int, np.integer)) or isinstance(x, bool) for x in w):
        raise InvalidInput(f"weight must be {R.rank} integers, got {w!r}")
    return tuple(int(x) for x in w)


# ---------------------------------------------------------------- Weyl group


_WEYL: dict[RootSystem, list[tuple[tuple[int, ...], ...]]] = {}


def weyl_group(R: RootSystem, cap: int = WEYL_CAP) -> list[np.ndarray]:
    """All elements as integer matrices on fundamental coordinates (BFS over simple reflections)."""
    if R not in _WEYL:
        r = R.rank
        gens = []
        for i in range(r):
            m = np.eye(r, dtype=np.int64)
            m[:, i] -= np.array(R.simple_root(i), dtype=np.int64)
            gens.append(m)
        ident = np.eye(r, dtype=np.int64)
        key = lambda m: tuple(map(tuple, m.tolist()))
        seen = {key(ident): ident}
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in gens:
                h = s @ g
                k = key(h)
                if k not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded(f"Weyl group larger than cap {cap}")
                    seen[k] = h
                    queue.append(h)
        _WEYL[R] = sorted(seen)
    return [np.array(k, dtype=np.int64) for k in _WEYL[R]]


def dominant_rep(R: RootSystem, lam: Iterable[int]) -> Weight:
    w = _weight(R, lam)
    while True:
        neg = [i for i, x in enumerate(w) if x < 0]
        if not neg:
            return w
        w = R.reflect(neg[0], w)


def orbit(R: RootSystem, lam: Iterable[int], cap: int = WEYL_CAP) -> set[Weight]:
    start = _weight(R, lam)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for i in range(R.rank):
            v = R.reflect(i, w)
            if v not in seen:
                if len(seen) >= cap:
                    raise CapExceeded(f"orbit larger than cap {cap}")
                seen.add(v)
                queue.append(v)
    return seen


# ---------------------------------------------------------------- saturated sets


def dominant_below(R: RootSystem, omega: Iterable[int]) -> list[Weight]:
    """Dominant mu with omega - mu a non-negative integer combination of simple roots.

    The coefficients k = A^{-1}(omega - mu) are bounded by A^{-1} omega because
    the inverse Cartan matrix of a finite-type system is entrywise non-negative.
    """
    w = _weight(R, omega)
    if any(x < 0 for x in w):
        raise InvalidInput(f"{w} is not dominant")
    inv = R.cartan_inverse
    bound = [math.floor(sum(inv[i][j] * w[j] for j in range(R.rank))) for i in range(R.rank)]
    out = []
    for k in product(*(range(b + 1) for b in bound)):
        mu = tuple(w[i] - sum(R.cartan[i][j] * k[j] for j in range(R.rank)) for i in range(R.rank))
        if all(x >= 0 for x in mu):
            out.append(mu)
    return sorted(out)


_SAT: dict[tuple[RootSystem, Weight], frozenset] = {}


def saturated_set(R: RootSystem, omega: Iterable[int], cap: int = WEYL_CAP) -> frozenset[Weight]:
    """Union of the Weyl orbits of all dominant weights below omega."""
    w = _weight(R, omega)
    key = (R, w)
    if key not in _SAT:
        out: set[Weight] = set()
        for mu in dominant_below(R, w):
            out |= orbit(R, mu, cap)
        _SAT[key] = frozenset(out)
    return _SAT[key]


def saturated_closure(R: RootSystem, omega: Iterable[int]) -> frozenset[Weight]:
    """Smallest set containing omega and closed under alpha_i-strings lam, lam - alpha_i, ..., s_i(lam).

    An independent route to the saturated set, used as an oracle.
    """
    w = _weight(R, omega)
    seen = {w}
    queue = deque([w])
    while queue:
        lam = queue.popleft()
        for i in range(R.rank):
            c = lam[i]
            step = 1 if c > 0 else -1
            a = R.simple_root(i)
            for t in range(1, abs(c) + 1):
                v = tuple(x - step * t * ai for x, ai in zip(lam, a))
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return frozenset(seen)


# ---------------------------------------------------------------- lattices and center


def root_coordinates(R: RootSystem, lam: Iterable[int]) -> list[Fraction]:
    """k with A k = lam."""
    w = _weight(R, lam)
    inv = R.cartan_inverse
    return [sum((inv[i][j] * w[j] for j in range(R.rank)), Fraction(0)) for i in range(R.rank)]


def in_root_lattice(R: RootSystem, lam: Iterable[int]) -> bool:
    return all(k.denominator == 1 for k in root_coordinates(R, lam))


def coset_label(R: RootSystem, lam: Iterable[int]) -> tuple[Fraction, ...]:
    """Class of lam in the weight lattice modulo the root lattice."""
    return tuple(k - math.floor(k) for k in root_coordinates(R, lam))


def elementary_divisors(R: RootSystem) -> list[int]:
    """Non-trivial invariant factors of the weight lattice modulo the root lattice."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(Matrix([list(r) for r in R.cartan]), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(R.rank)]
    return sorted(d for d in diag if d != 1)


def _mod1(x: Iterable[Fraction]) -> tuple[Fraction, ...]:
    return tuple(v - math.floor(v) for v in x)


def center_points(R: RootSystem) -> list[tuple[Fraction, ...]]:
    """Rational torus points x (mod 1) with <x, alpha_i> integral for every simple root."""
    r = R.rank
    at_inv = exact.inverse_fractions([[R.cartan[j][i] for j in range(r)] for i in range(r)])
    gens = [_mod1(at_inv[i][k] for i in range(r)) for k in range(r)]
    zero = tuple(Fraction(0) for _ in range(r))
    seen = {zero}
    queue = deque([zero])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = _mod1(a + b for a, b in zip(x, g))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def center_group(R: RootSystem) -> tuple[list[int], list[tuple[Fraction, ...]]]:
    return elementary_divisors(R), center_points(R)


# ---------------------------------------------------------------- torus measures


@dataclass(frozen=True)
class TorusAtom:
    x: tuple[Fraction, ...]
    p: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", tuple(_rational(v) for v in self.x))
        p = _rational(self.p)
        if not 0 < p <= 1:
            raise InvalidInput(f"atom weight must lie in (0, 1], got {p}")
        object.__setattr__(self, "p", p)

    @classmethod
    def from_json(cls, data: Mapping) -> "TorusAtom":
        try:
            return cls(tuple(data["x"]), data["p"])
        except KeyError as e:
            raise InvalidInput(f"atom is missing {e}") from None

    def to_json(self) -> dict:
        return {"x": [exact.format_rational(v) for v in self.x], "p": exact.format_rational(self.p)}


def _rational(v) -> Fraction:
    if isinstance(v, str):
        return exact.parse_rational(v)
    if isinstance(v, float):
        raise InvalidInput("torus data must be rational")
    return Fraction(v)


def _check_measure(R: RootSystem, atoms: Sequence[TorusAtom]) -> None:
    if not atoms:
        raise InvalidInput("empty measure")
    if any(len(a.x) != R.rank for a in atoms):
        raise InvalidInput("atom dimension does not match the rank")
    if sum(a.p for a in atoms) != 1:
        raise InvalidInput("atom weights must sum to 1")


def pairing(x: Sequence[Fraction], lam: Sequence[int]) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(x, lam)), Fraction(0))


def integrate(atoms: Sequence[TorusAtom], lam: Sequence[int]) -> complex:
    return sum(float(a.p) * cmath.exp(2j * math.pi * float(pairing(a.x, lam) % 1)) for a in atoms)


def dominant_weights(R: RootSystem, bound: int) -> list[Weight]:
    return list(product(range(bound + 1), repeat=R.rank))


def condition_ii_check(R: RootSystem, atoms: Sequence[TorusAtom], omega_bound: int = 3, tolerance: float = 1e-9) -> bool:
    """The measure integrates every weight of Pi(omega) to the same value, for all dominant omega in the bound."""
    _check_measure(R, atoms)
    for omega in dominant_weights(R, omega_bound):
        weights = sorted(saturated_set(R, omega))
        vals = np.array([integrate(atoms, w) for w in weights])
        if np.max(np.abs(vals - vals[0])) > tolerance:
            return False
    return True


def center_support_check(R: RootSystem, atoms: Sequence[TorusAtom]) -> bool:
    """Every atom pairs integrally with every simple root."""
    _check_measure(R, atoms)
    return all(
        pairing(a.x, R.simple_root(i)).denominator == 1 for a in atoms for i in range(R.rank)
    )


def random_atomic_measure(R: RootSystem, rng: random.Random, max_den: int = 6, max_atoms: int = 3) -> list[TorusAtom]:
    """Random rational atoms; about half the measures are supported on the center."""
    n = rng.randint(1, max_atoms)
    cut = sorted(rng.sample(range(1, 12), n - 1)) if n > 1 else []
    edges = [0, *cut, 12]
    ps = [Fraction(b - a, 12) for a, b in zip(edges, edges[1:])]
    central = center_points(R)
    on_center = rng.random() < 0.5
    atoms = []
    for p in ps:
        if on_center:
            x = rng.choice(central)
        else:
            x = tuple(Fraction(rng.randrange(d), d) for d in (rng.randint(1, max_den) for _ in range(R.rank)))
        atoms.append(TorusAtom(x, p))
    return atoms


# ---------------------------------------------------------------- equivalence lemma


class _UnionFind:
    def __init__(self, items: Iterable) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def classes(self) -> dict:
        out: dict = {}
        for x in self.parent:
            out.setdefault(self.find(x), []).append(x)
        return out


def lemma_equiv_check(R: RootSystem, radius: int, slack: int | None = None, max_slack: int | None = None) -> VerificationRecord:
    """Weights joined whenever they share a saturated set form exactly the root-lattice cosets.

    Window weights are those with |lam_i| <= radius; highest weights range over
    dominant omega with omega_i <= radius + slack.  If two weights of one coset
    are not yet connected the slack grows by one until ``max_slack``.
    """
    if radius < 1:
        raise InvalidInput("radius must be positive")
    slack = 2 * radius if slack is None else slack
    max_slack = max(slack, 4 * radius + 4) if max_slack is None else max_slack
    window = list(product(range(-radius, radius + 1), repeat=R.rank))
    window_set = set(window)
    labels = {w: coset_label(R, w) for w in window}
    rec = VerificationRecord(
        "rootsys_lemma_equiv_" + R.type_tag.lower() + f"_r{radius}", R.type_tag, None, {"radius": radius, "slack": slack}
    )
    uf = _UnionFind(window)
    done: set[Weight] = set()
    current = slack
    while True:
        for omega in dominant_weights(R, radius + current):
            if omega in done:
                continue
            done.add(omega)
            inside = sorted(saturated_set(R, omega) & window_set)
            for w in inside[1:]:
                uf.union(inside[0], w)
        comps = uf.classes()
        within = all(len({labels[w] for w in members}) == 1 for members in comps.values())
        by_coset: dict = {}
        for root, members in comps.items():
            by_coset.setdefault(labels[members[0]], []).append(root)
        connected = all(len(roots) == 1 for roots in by_coset.values())
        if connected or not within or current >= max_slack:
            break
        current += 1
    n_cosets = len(set(labels.values()))
    rec.value("slack_used", current)
    rec.value("components", len(comps))
    rec.value("cosets_in_window", n_cosets)
    rec.value("index", abs(R.determinant))
    rec.check("components_within_cosets", within)
    rec.check("cosets_connected", connected)
    rec.check("components=cosets", len(comps) == n_cosets)
    return rec


# ---------------------------------------------------------------- SU_q(2)


def toeplitz_parity_matrix(c, m: int) -> list[list]:
    return [[1 if (j - k) % 2 == 0 else c for k in range(m)] for j in range(m)]


def suq2_psd(c, m: int, tol: float = 1e-9) -> bool:
    """PSD test of T_jk = 1 (j - k even), c (j - k odd); exact for rationals."""
    if not 1 <= m <= 50:
        raise InvalidInput("m must lie in 1..50")
    if isinstance(c, float):
        t = np.array(toeplitz_parity_matrix(c, m), dtype=float)
        return bool(np.linalg.eigvalsh(t).min() >= -tol)
    c = _rational(c)
    return exact.is_psd(toeplitz_parity_matrix(c, m))


# ---------------------------------------------------------------- suite helpers


def center_record(R: RootSystem) -> VerificationRecord:
    divisors, points = center_group(R)
    rec = VerificationRecord("rootsys_center_" + R.type_tag.lower(), R.type_tag, None)
    rec.value("elementary_divisors", divisors)
    rec.value("center_points", [[exact.format_rational(v) for v in x] for x in points])
    order = math.prod(divisors)
    rec.value("order", order)
    rec.check("order=|det Cartan|", order == abs(R.determinant))
    rec.check("points=order", len(points) == order)
    rec.check("points_central", all(center_support_check(R, [TorusAtom(x, Fraction(1))]) for x in points))
    return rec


def condition_ii_record(R: RootSystem, samples: int = 50, seed: int = 0, omega_bound: int = 3, tolerance: float = 1e-9) -> VerificationRecord:
    rng = random.Random(seed)
    rec = VerificationRecord(
        "rootsys_condition_ii_" + R.type_tag.lower(),
        R.type_tag,
        None,
        {"samples": samples, "seed": seed, "omega_bound": omega_bound, "tolerance": tolerance},
    )
    agree = central = 0
    for _ in range(samples):
        atoms = random_atomic_measure(R, rng)
        a = condition_ii_check(R, atoms, omega_bound, tolerance)
        b = center_support_check(R, atoms)
        agree += a == b
        central += b
    rec.value("agreements", agree)
    rec.value("center_supported", central)
    rec.check("condition_ii<=>center_support", agree == samples)
    return rec


def suq2_record(grid: Sequence = (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2), m: int = 6) -> VerificationRecord:
    rec = VerificationRecord("rootsys_suq2_psd", "A1", None, {"grid": list(grid), "m": m})
    for c in grid:
        c = Fraction(c)
        got = suq2_psd(c, m)
        rec.value(f"psd({exact.format_rational(c)})", got)
        rec.check(f"c={exact.format_rational(c)}", got == (abs(c) <= 1))
    return rec
