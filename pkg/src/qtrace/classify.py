"""Classification of tracial central states on O_N^+, S_N^+ and H_N^+.

Every constant entering a classification (recursion coefficients, the
proportionality factors for H+, the realised root of the S+ quadratic) is
recomputed here from exact Haar moments and compared, rather than assumed.

Index conventions: i, j, k, l are the smallest admissible distinct indices
1, 2, 3, 4; permutation invariance of the Haar state makes the choice
immaterial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .central import CentralFunctional, GeneratorWord, haar_moment, word_character_moment
from .errors import InvalidInput, VerificationFailure
from .fusion import dim, irr
from .partitions import SetPartition, enumerate_partitions, PartitionClass
from .records import VerificationRecord
from .weingarten import QGFamily, falling_factorial, moment_by_kernel

O, S, H = QGFamily.OPLUS, QGFamily.SPLUS, QGFamily.HPLUS
I, J, K, L = 1, 2, 3, 4


def _word(family: QGFamily, indices: Sequence[int], exps: Sequence[int] | None = None) -> GeneratorWord:
    return GeneratorWord.diagonal(family, indices, exps)


def _require(N: int, low: int, what: str) -> None:
    if N < low:
        raise InvalidInput(f"{what} needs N >= {low}, got N={N}")


# ---------------------------------------------------------------- decompositions


@dataclass
class TCSDecomposition:
    """phi = c_haar h + c_counit eps (+ c_alt eps_alt)."""

    family: QGFamily
    N: int
    coefficients: dict
    parameters: dict = field(default_factory=dict)
    nonnegative: bool = False
    sums_to_one: bool = False

    @property
    def valid(self) -> bool:
        return self.nonnegative and self.sums_to_one

    def functional(self) -> CentralFunctional:
        makers = {"haar": CentralFunctional.haar, "counit": CentralFunctional.counit, "alt": CentralFunctional.alt}
        return CentralFunctional.linear([(c, makers[k](self.family, self.N)) for k, c in self.coefficients.items()])

    def to_json(self) -> dict:
        from .exact import format_rational

        return {
            "family": self.family.value,
            "N": self.N,
            "coefficients": {k: format_rational(v) for k, v in self.coefficients.items()},
            "parameters": {k: format_rational(v) for k, v in self.parameters.items()},
            "nonnegative": self.nonnegative,
            "sums_to_one": self.sums_to_one,
            "valid": self.valid,
        }


def _three_point(family: QGFamily, N: int, lam: Fraction, mu: Fraction) -> TCSDecomposition:
    coeffs = {
        "haar": 1 - mu,
        "counit": (lam + mu) / 2,
        "alt": (mu - lam) / 2,
    }
    return TCSDecomposition(
        family,
        N,
        coeffs,
        {"lambda": lam, "mu": mu},
        nonnegative=abs(lam) <= mu <= 1,
        sums_to_one=sum(coeffs.values()) == 1,
    )


def onplus_decompose(N: int, phi1, phi2) -> TCSDecomposition:
    """Decompose from (phi_1, phi_2); valid iff |lambda| <= mu <= 1."""
    _require(N, 3, "the O+ classification")
    lam = Fraction(phi1) / dim(O, N, 1)
    mu = Fraction(phi2) / dim(O, N, 2)
    return _three_point(O, N, lam, mu)


def hnplus_decompose(N: int, lam, mu) -> TCSDecomposition:
    """lambda = phi_w / d_w on odd words, mu on even words."""
    _require(N, 6, "the H+ classification")
    return _three_point(H, N, Fraction(lam), Fraction(mu))


def snplus_classify(N: int, phi1) -> TCSDecomposition:
    """t eps + (1 - t) h with t = phi_1 / d_1; valid iff 0 <= t <= 1."""
    _require(N, 6, "the S+ classification")
    t = Fraction(phi1) / dim(S, N, 1)
    coeffs = {"haar": 1 - t, "counit": t}
    return TCSDecomposition(S, N, coeffs, {"t": t}, nonnegative=0 <= t <= 1, sums_to_one=sum(coeffs.values()) == 1)


# ---------------------------------------------------------------- O+


def _relation_holds(coeffs: dict[int, Fraction], values) -> bool:
    return sum(c * values(m) for m, c in coeffs.items()) == 0


@dataclass
class RecursionReport(VerificationRecord):
    """A verification record that also exposes the recursion coefficients and per-step data."""

    coefficients: dict = field(default_factory=dict)
    steps: list = field(default_factory=list)


def onplus_recursion(N: int, n_max: int = 5) -> RecursionReport:
    """Traciality phi(AB) = phi(BA) on diagonal monomials forces phi_n = a_n phi_1 / b_n phi_2.

    Step n (2 <= n < n_max) determines phi_{n+1} from phi_{n-1}:
    n = 2m uses A = (u_i u_j)^m, B = u_i; n = 2m + 1 uses A = (u_i u_j)^m,
    B = u_k u_i, so that AB has length n + 1.
    """
    _require(N, 3, "the O+ recursion")
    if n_max < 2:
        raise InvalidInput("n_max must be at least 2")
    rec = RecursionReport("onplus_recursion", O.value, N, {"n_max": n_max})
    coef = {1: Fraction(1), 2: Fraction(1)}
    d = lambda n: dim(O, N, n)
    steps = []
    for n in range(2, n_max):
        m = n // 2
        A = [I, J] * m
        B = [I] if n % 2 == 0 else [K, I]
        AB = _word(O, A + B)
        BA = _word(O, B + A)
        r = {}
        for lab in range(n + 2):
            r[lab] = word_character_moment(O, N, AB, lab, route="pairs") - word_character_moment(O, N, BA, lab, route="pairs")
        h_ba_prev = word_character_moment(O, N, BA, n - 1, route="pairs")
        ba = BA.letters
        ba_adj = GeneratorWord(O, ba + tuple(reversed(ba)))
        h_pos = haar_moment(ba_adj, N)
        h_literal = haar_moment(_word(O, B + A + A + B), N)
        denom = r[n + 1]
        step = {"n": n, "A": str(_word(O, A)), "B": str(_word(O, B)), "r": r, "h(BA chi_{n-1})": h_ba_prev, "h(BA (BA)^*)": h_pos, "h(B A A B)": h_literal}
        rec.check(f"step{n}:only_n-1_and_n+1_survive", all(v == 0 for k, v in r.items() if k not in (n - 1, n + 1)))
        rec.check(f"step{n}:h(BA chi_(n-1))>0", h_ba_prev > 0)
        rec.check(f"step{n}:h(BA (BA)^*)>0", h_pos > 0)
        if denom == 0:
            rec.check(f"step{n}:denominator_nonzero", False)
            raise VerificationFailure(f"O+ recursion step n={n}, N={N}: vanishing denominator")
        rec.check(f"step{n}:denominator_nonzero", True)
        a = h_ba_prev / denom
        coef[n + 1] = a * coef[n - 1]
        step["ratio"] = a
        # the relation sum_m r_m phi_m = 0 must hold for h, eps and eps_alt
        rec.check(f"step{n}:counit_satisfies", _relation_holds(r, lambda k: d(k)))
        rec.check(f"step{n}:alt_satisfies", _relation_holds(r, lambda k: (-1) ** k * d(k)))
        rec.check(f"step{n}:haar_satisfies", _relation_holds(r, lambda k: int(k == 0)))
        steps.append(step)
    for n in range(1, n_max + 1):
        base = 1 if n % 2 else 2
        rec.check(f"coef{n}:counit", coef[n] * d(base) == d(n))
        rec.check(f"coef{n}:alt", coef[n] * (-1) ** base * d(base) == (-1) ** n * d(n))
    rec.coefficients = {("a" if n % 2 else "b") + str(n): coef[n] for n in sorted(coef)}
    rec.steps = steps
    rec.value("coefficients", rec.coefficients)
    rec.value("steps", steps)
    return rec


# ---------------------------------------------------------------- S+


def _h(family: QGFamily, N: int, idx: Sequence[int], label, exps=None) -> Fraction:
    return word_character_moment(family, N, _word(family, idx, exps), label, route="pairs")


def snplus_a3b3(N: int) -> tuple[Fraction, Fraction]:
    """a_3, b_3 from phi(p_i p_j p_i) = phi(p_i p_j); both must be non-zero."""
    a3, b3, rec = _a3b3(N)
    if not rec.verdict:
        raise VerificationFailure(f"a_3/b_3 checks failed at N={N}: {rec.failures}")
    return a3, b3


def _a3b3(N: int) -> tuple[Fraction, Fraction, VerificationRecord]:
    _require(N, 6, "a_3, b_3")
    rec = VerificationRecord("snplus_a3b3", S.value, N)
    den = _h(S, N, [I, J, I], 3)
    rec.value("h(p_i p_j p_i chi_3)", den)
    if den == 0:
        rec.check("denominator_nonzero", False)
        raise VerificationFailure(f"h(p_i p_j p_i chi_3) vanishes at N={N}")
    rec.check("denominator_nonzero", True)
    vals = {}
    for m in range(3):
        vals[m] = (_h(S, N, [I, J], m), _h(S, N, [I, J, I], m))
        rec.value(f"h(p_i p_j chi_{m})", vals[m][0])
        rec.value(f"h(p_i p_j p_i chi_{m})", vals[m][1])
    rec.check("constant_term_vanishes", vals[0][0] == vals[0][1])
    a3 = (vals[1][0] - vals[1][1]) / den
    b3 = (vals[2][0] - vals[2][1]) / den
    rec.value("a3", a3)
    rec.value("b3", b3)
    rec.check("a3_nonzero", a3 != 0)
    rec.check("b3_nonzero", b3 != 0)
    d1, d2, d3 = (dim(S, N, n) for n in (1, 2, 3))
    rec.check("counit:a3 d1 + b3 d2 = d3", a3 * d1 + b3 * d2 == d3)
    return a3, b3, rec


def snplus_a3b3_record(N: int) -> VerificationRecord:
    return _a3b3(N)[2]


def snplus_semigroup_rigidity(N: int, grid: Sequence | None = None, ts=(0.5, 1.0, 2.0, 4.0), tol: float = 1e-9) -> VerificationRecord:
    """d3 e^{t l3} = a3 d1 e^{t l1} + b3 d2 e^{t l2} for all t forces l1 = l2 = l3.

    For each grid pair (l1, l2), l3 is fixed by the linear relation
    (the t-derivative at 0).  Then F(t) = d3 e^{t l3} - a3 d1 e^{t l1} - b3 d2 e^{t l2}
    has F''(0) = -d3 w1 w2 (l1 - l2)^2 with w1 = a3 d1/d3, w2 = b3 d2/d3,
    checked exactly; numerically F must vanish at every sampled t iff l1 = l2.
    """
    a3, b3 = snplus_a3b3(N)
    d1, d2, d3 = (dim(S, N, n) for n in (1, 2, 3))
    if grid is None:
        grid = [Fraction(-4 + k, 4) for k in range(5)]
    rec = VerificationRecord("snplus_semigroup_rigidity", S.value, N, {"grid": list(grid), "t": list(ts), "tolerance": tol})
    rec.value("a3", a3)
    rec.value("b3", b3)
    w1, w2 = a3 * d1 / d3, b3 * d2 / d3
    violated = held = 0
    for l1 in grid:
        for l2 in grid:
            l1, l2 = Fraction(l1), Fraction(l2)
            l3 = w1 * l1 + w2 * l2
            second = d3 * l3**2 - a3 * d1 * l1**2 - b3 * d2 * l2**2
            rec.check(f"F''(0)[{l1},{l2}]", second == -d3 * w1 * w2 * (l1 - l2) ** 2)

            def F(t: float) -> float:
                return (
                    d3 * math.exp(t * float(l3))
                    - float(a3 * d1) * math.exp(t * float(l1))
                    - float(b3 * d2) * math.exp(t * float(l2))
                )

            worst = max(abs(F(t)) for t in ts)
            if l1 == l2:
                held += 1
                rec.check(f"holds[{l1},{l2}]", worst <= tol * d3)
            else:
                violated += 1
                rec.check(f"fails[{l1},{l2}]", worst > tol * d3)
    rec.value("pairs_equal", held)
    rec.value("pairs_distinct", violated)
    return rec


def snplus_nonvanishing(N: int, k: int, cases: Sequence[str] = ("odd", "even")) -> VerificationRecord:
    """h((p_i p_j)^k p_i chi_{2k+1}) and h((p_i p_j)^k p_l p_i chi_{2k+2}) are non-zero (and positive).

    The even case at k = 1 needs 8 legs and therefore the extended tier.
    """
    _require(N, 6, "the S+ non-vanishing lemma")
    if k < 0:
        raise InvalidInput("k must be non-negative")
    unknown = set(cases) - {"odd", "even"}
    if unknown or not cases:
        raise InvalidInput(f"cases must be drawn from odd/even, got {cases!r}")
    claim = "snplus_nonvanishing_k" + str(k) + ("" if set(cases) == {"odd", "even"} else "_" + "_".join(cases))
    rec = VerificationRecord(claim, S.value, N, {"k": k, "cases": list(cases)})
    if "odd" in cases:
        odd = _h(S, N, [I, J] * k + [I], 2 * k + 1)
        rec.value(f"h((p_i p_j)^{k} p_i chi_{2 * k + 1})", odd)
        rec.check("odd_positive", odd > 0)
    if "even" in cases:
        even = _h(S, N, [I, J] * k + [L, I], 2 * k + 2)
        rec.value(f"h((p_i p_j)^{k} p_l p_i chi_{2 * k + 2})", even)
        rec.check("even_positive", even > 0)
    return rec


def snplus_a3_separation(N: int) -> VerificationRecord:
    """h(p_i p_j chi_1) != h(p_i p_j p_i chi_1), with the intermediate traces."""
    _require(N, 4, "this lemma")
    rec = VerificationRecord("snplus_a3_separation", S.value, N)
    x = _h(S, N, [I, J], 1)
    y = _h(S, N, [I, J, I], 1)
    rec.value("h(p_i p_j chi_1)", x)
    rec.value("h(p_i p_j p_i chi_1)", y)
    rec.check("unequal", x != y)
    return rec


def _trace_power(N: int, idx: Sequence[int], power: int) -> Fraction:
    from .central import trace_moment_pairs

    return trace_moment_pairs(S, N, _word(S, idx), "1" * power)


def free_poisson_record(N: int, k_max: int = 4) -> VerificationRecord:
    """h(chi^k) = Catalan(k), h(p_i chi^2) = 5/N, h(p_i p_j chi) = 3/(N(N-1))."""
    from .partitions import catalan

    _require(N, 4, "S+")
    rec = VerificationRecord("free_poisson", S.value, N, {"k_max": k_max})
    for k in range(k_max + 1):
        v = _trace_power(N, [], k)
        rec.value(f"h(chi^{k})", v)
        rec.check(f"catalan{k}", v == catalan(k))
    a = _trace_power(N, [I], 2)
    b = _trace_power(N, [I, J], 1)
    rec.value("h(p_i chi^2)", a)
    rec.value("h(p_i p_j chi)", b)
    rec.check("h(p_i chi^2)=5/N", a == Fraction(5, N))
    rec.check("h(p_i p_j chi)=3/(N(N-1))", b == Fraction(3, N * (N - 1)))
    return rec


def splus_base_moments(N: int) -> VerificationRecord:
    _require(N, 4, "S+")
    rec = VerificationRecord("splus_base_moments", S.value, N)
    a = haar_moment(_word(S, [I, J]), N)
    from .weingarten import moment

    b = moment(S, N, [I, J, I], [I, J, I])  # raw Weingarten, without p^2 = p reduction
    rec.value("h(p_i p_j)", a)
    rec.value("h(p_i p_j p_i)", b)
    rec.check("h(p_i p_j)=1/(N(N-1))", a == Fraction(1, N * (N - 1)))
    rec.check("h(p_i p_j p_i)=h(p_i p_j)", a == b)
    return rec


# ---------------------------------------------------------------- S+ order-four and order-five moments

P = SetPartition.from_blocks
PI4_1 = P([[1, 3], [2, 4]])
PI4_2 = P([[1, 3], [2], [4]])
PI4_2p = P([[1], [2, 4], [3]])
PI4_3 = P([[1], [2], [3], [4]])
PI5_1 = P([[1, 3], [2, 4], [5]])
PI5_2 = P([[1, 3], [2, 5], [4]])
PI5_3 = P([[1, 3], [2], [4], [5]])


def hk(N: int, p: SetPartition, q: SetPartition) -> Fraction:
    return moment_by_kernel(S, N, p, q)


def appendix_order4(N: int) -> VerificationRecord:
    _require(N, 4, "the order-four identities")
    rec = VerificationRecord("appendix_order4", S.value, N)
    x11, x21, x22 = hk(N, PI4_1, PI4_1), hk(N, PI4_2, PI4_1), hk(N, PI4_2, PI4_2)
    c = Fraction(1, N * (N - 1) * (N - 2))
    rec.value("h(pi4_1,pi4_1)", x11)
    rec.value("h(pi4_2,pi4_1)", x21)
    rec.value("h(pi4_2,pi4_2)", x22)
    rec.check("h(pi4_2,pi4_2)", x22 == c - x21 / (N - 2))
    rec.check("h(pi4_2,pi4_1)", x21 == c - x11 / (N - 2))
    # substituting the second identity into the first
    rec.check("combined", x22 == c - c / (N - 2) + x11 / (N - 2) ** 2)
    return rec


def appendix_order5(N: int) -> VerificationRecord:
    _require(N, 4, "the order-five identities")
    rec = VerificationRecord("appendix_order5", S.value, N)
    x11, x21, x22 = hk(N, PI4_1, PI4_1), hk(N, PI4_2, PI4_1), hk(N, PI4_2, PI4_2)
    y1, y2, y3 = hk(N, PI5_1, PI5_1), hk(N, PI5_2, PI5_2), hk(N, PI5_3, PI5_3)
    for name, v in (("h(pi5_1,pi5_1)", y1), ("h(pi5_2,pi5_2)", y2), ("h(pi5_3,pi5_3)", y3)):
        rec.value(name, v)
    rec.check("h(pi5_1,pi5_1)", y1 == x11 / (N - 2))
    rec.check("h(pi5_2,pi5_2)", y2 == x11 / (N - 2))
    rec.check("symmetry_5_1_5_2", y1 == y2)
    rec.check("h(pi5_3,pi5_3)", y3 == x22 / (N - 3) - x21 / ((N - 2) * (N - 3)))
    return rec


def appendix_quadratic(N: int) -> VerificationRecord:
    _require(N, 4, "the quadratic relation")
    rec = VerificationRecord("appendix_quadratic", S.value, N)
    X = hk(N, PI4_1, PI4_1)
    Xt = N * (N - 1) * X
    alpha = Fraction(2 * N - 5, (N - 2) * (N - 3))
    rec.value("X", X)
    rec.value("X_tilde", Xt)
    rec.value("alpha", alpha)
    rec.check("quadratic", (1 + alpha) * Xt**2 - (1 + 2 * alpha) * Xt + alpha == 0)
    root = Fraction(2 * N - 5, N * N - 3 * N + 1)
    realised = "second" if Xt == root else ("one" if Xt == 1 else "neither")
    rec.value("realised_root", realised)
    rec.check("realised_root=(2N-5)/(N^2-3N+1)", Xt == root)
    excluded = Fraction(1, 2 * (N - 1) ** 2)
    rec.value("excluded_value", excluded)
    rec.check("X!=1/(2(N-1)^2)", X != excluded)
    x12, x13 = hk(N, PI4_1, PI4_2), hk(N, PI4_1, PI4_3)
    rec.value("h(pi4_1,pi4_2)", x12)
    rec.value("h(pi4_1,pi4_3)", x13)
    rec.check("h(pi4_1,pi4_3)=-h(pi4_1,pi4_2)/(N-3)", x13 == -x12 / (N - 3))
    rec.check("h(pi4_1,pi4_2)=h(pi4_1,pi4_2')", x12 == hk(N, PI4_1, PI4_2p))
    total, nonzero = biinvariance_sum(N, PI4_1, PI4_1)
    rec.value("biinvariance_nonzero_terms", [str(p) for p in nonzero])
    rec.check("biinvariance", total == X)
    rec.check("biinvariance_support", set(nonzero) == {PI4_1, PI4_2, PI4_2p, PI4_3})
    return rec


def biinvariance_sum(N: int, p: SetPartition, q: SetPartition) -> tuple[Fraction, list[SetPartition]]:
    """sum over sigma in P(n) of (N)_{b(sigma)} h(p, sigma) h(sigma, q), and its non-zero terms."""
    total = Fraction(0)
    nonzero = []
    for s in enumerate_partitions(PartitionClass.ALL, p.n):
        if len(s) > N:
            continue
        term = falling_factorial(N, len(s)) * hk(N, p, s) * hk(N, s, q)
        if term:
            nonzero.append(s)
        total += term
    return total, nonzero


def snplus_prop_a3_equiv(N: int) -> VerificationRecord:
    _require(N, 4, "this identity")
    rec = VerificationRecord("snplus_prop_a3_equiv", S.value, N)
    X = hk(N, PI4_1, PI4_1)
    lhs = _h(S, N, [I, J, I], 2)
    rhs = Fraction(2 * (N - 1), N - 2) * X - Fraction(2, N * (N - 1) * (N - 2))
    base = _h(S, N, [I, J], 2)
    rec.value("h(p_i p_j p_i chi_2)", lhs)
    rec.value("h(p_i p_j chi_2)", base)
    rec.check("identity", lhs == rhs)
    rec.check("h(p_i p_j chi_2)=1/(N(N-1))", base == Fraction(1, N * (N - 1)))
    rec.check("b3_numerator_nonzero", lhs != base)
    # equivalence: equality would hold exactly at the excluded value of X
    Xe = Fraction(1, 2 * (N - 1) ** 2)
    rec.check(
        "equivalence_at_excluded_value",
        Fraction(2 * (N - 1), N - 2) * Xe - Fraction(2, N * (N - 1) * (N - 2)) == Fraction(1, N * (N - 1)),
    )
    return rec


# ---------------------------------------------------------------- H+


def _hh(N: int, idx, exps, label: str) -> Fraction:
    return word_character_moment(H, N, _word(H, idx, exps), label, route="pairs")


def hnplus_relations(N: int) -> VerificationRecord:
    """phi_11 = N phi_0 for every tracial central functional, in three steps."""
    _require(N, 6, "the H+ relations")
    rec = VerificationRecord("hnplus_relations", H.value, N)
    d = lambda w: Fraction(dim(H, N, w))

    # step 1: fusion identities give phi_101 - phi_0 - phi_00 = phi_110 - phi_11
    one, zero = irr(H, "1"), irr(H, "0")
    rec.check("fusion:chi1 chi0 chi1", one * zero * one == {"101": 1, "11": 2, "0": 1, "": 1})
    rec.check("fusion:chi1 chi1 chi0", one * one * zero == {"110": 1, "00": 1, "0": 2, "11": 1, "": 1})
    step1 = {"101": 1, "0": -1, "00": -1, "110": -1, "11": 1}
    for name, val in (("counit", d), ("alt", lambda w: (-1) ** (w.count("1") % 2) * d(w)), ("haar", lambda w: Fraction(0))):
        rec.check(f"step1:{name}", sum(c * val(w) for w, c in step1.items()) == 0)

    # step 2: u_i u_j^2 u_i versus u_i^2 u_j^2
    x = ([I, J, I], [1, 2, 1])
    y = ([I, J], [2, 2])
    hx = {w: _hh(N, *x, w) for w in ("101", "11", "0", "")}
    hy = {w: _hh(N, *y, w) for w in ("00", "0", "")}
    for w, v in hx.items():
        rec.value(f"h(u_i u_j^2 u_i chi_{w or 'e'}^*)", v)
    for w, v in hy.items():
        rec.value(f"h(u_i^2 u_j^2 chi_{w or 'e'}^*)", v)
    rec.check("h(u_i u_j^2 u_i chi_11^*)=0", hx["11"] == 0)
    rec.check("h(u_i u_j^2 u_i chi_101^*)!=0", hx["101"] != 0)
    rec.check("step2:constant_terms_agree", hx[""] == hy[""])
    ratio00 = d("00") / d("0")
    rec.check("phi00/phi0=d2/d1 (S+ inside)", ratio00 == Fraction(dim(S, N, 2), dim(S, N, 1)))
    c101 = (hy["00"] * ratio00 + hy["0"] - hx["0"]) / hx["101"]
    rec.value("phi101/phi0", c101)
    rec.check("phi101/phi0=N(N^2-3N+1)/(N-1)", c101 == Fraction(N * (N * N - 3 * N + 1), N - 1))
    rec.check("phi101/phi0=d101/d0", c101 == d("101") / d("0"))

    # step 3: u_i u_j u_i^2 versus u_i u_j
    z = ([I, J, I], [1, 1, 2])
    hz = {w: _hh(N, *z, w) for w in ("110", "11", "00", "0", "")}
    for w, v in hz.items():
        rec.value(f"h(u_i u_j u_i^2 chi_{w or 'e'}^*)", v)
    rec.check("h(u_i u_j u_i^2)=0", hz[""] == 0)
    rec.check("h(u_i u_j u_i^2 chi_0^*)=0", hz["0"] == 0)
    rec.check("h(u_i u_j u_i^2 chi_00^*)=0", hz["00"] == 0)
    rec.check("h(u_i u_j u_i^2 chi_110^*)!=0", hz["110"] != 0)
    hij = _hh(N, [I, J], [1, 1], "11")
    hijji = haar_moment(_word(H, [I, J, J, I]), N)
    rec.value("h(u_i u_j chi_11^*)", hij)
    rec.check("h(u_i u_j chi_11^*)=h(u_i u_j u_j u_i)", hij == hijji)
    delta = (hij - hz["11"]) / hz["110"]
    rec.value("delta", delta)
    rec.check("delta=N-2", delta == N - 2)

    # conclusion: (c101 - 1 - phi00/phi0) phi_0 = (delta - 1) phi_11
    gamma = c101 - 1 - ratio00
    coef = gamma / (delta - 1)
    rec.value("phi11/phi0", coef)
    rec.check("phi11=N phi0", coef == N)
    rec.check("phi11/phi0=d11/d0", coef == d("11") / d("0"))
    rec.check("d11=N(N-1)", d("11") == N * (N - 1))
    return rec


def hnplus_a111b111(N: int) -> VerificationRecord:
    _require(N, 6, "a_111, b_111")
    rec = VerificationRecord("hnplus_a111b111", H.value, N)
    x = ([I, J, I], [1, 1, 1])
    y = ([J, I], [1, 2])
    x111, x10, x1 = (_hh(N, *x, w) for w in ("111", "10", "1"))
    y10, y1 = (_hh(N, *y, w) for w in ("10", "1"))
    hy2 = haar_moment(_word(H, [J, I], [2, 2]), N)
    for name, v in (
        ("h(u_i u_j u_i chi_111^*)", x111),
        ("h(u_i u_j u_i chi_10^*)", x10),
        ("h(u_i u_j u_i chi_1^*)", x1),
        ("h(u_j u_i^2 chi_10^*)", y10),
        ("h(u_j u_i^2 chi_1^*)", y1),
        ("h(u_j^2 u_i^2)", hy2),
    ):
        rec.value(name, v)
    rec.check("h(u_i u_j u_i chi_111^*)!=0", x111 != 0)
    rec.check("h(u_i u_j u_i chi_10^*)=0", x10 == 0)
    rec.check("h(u_i u_j u_i chi_1^*)=0", x1 == 0)
    rec.check("h(u_j u_i^2 chi_10^*)!=0", y10 != 0)
    rec.check("h(u_j u_i^2 chi_1^*)=h(u_j^2 u_i^2)", y1 == hy2)
    rec.check("h(u_j^2 u_i^2)>0", hy2 > 0)
    rec.check("constant_terms_agree", haar_moment(_word(H, *x), N) == haar_moment(_word(H, *y), N))
    if x111 == 0:
        return rec
    a, b = y10 / x111, y1 / x111
    rec.value("a111", a)
    rec.value("b111", b)
    rec.check("a111!=0", a != 0)
    rec.check("b111!=0", b != 0)
    rec.check("counit:a d10 + b d1 = d111", a * dim(H, N, "10") + b * dim(H, N, "1") == dim(H, N, "111"))
    return rec


def hnplus_length2(N: int, phi0, phi1, phi10) -> VerificationRecord:
    """phi_01 = phi_10 and phi_00 = (d_2/d_1) phi_0 (the S+ values on u_ij^2)."""
    _require(N, 6, "the H+ length-two relations")
    rec = VerificationRecord("hnplus_length2", H.value, N, {"phi0": phi0, "phi1": phi1, "phi10": phi10})
    one, zero = irr(H, "1"), irr(H, "0")
    rec.check("fusion:chi0 chi1", zero * one == {"01": 1, "1": 1})
    rec.check("fusion:chi1 chi0", one * zero == {"10": 1, "1": 1})
    ratio = Fraction(dim(S, N, 2), dim(S, N, 1))
    rec.check("d00/d0=d2/d1", Fraction(dim(H, N, "00"), dim(H, N, "0")) == ratio)
    rec.check("d01=d10", dim(H, N, "01") == dim(H, N, "10"))
    # phi(chi0 chi1) = phi(chi1 chi0) gives phi_01 + phi_1 = phi_10 + phi_1
    phi01 = Fraction(phi10)
    rec.value("phi01", phi01)
    rec.value("phi00", ratio * Fraction(phi0))
    rec.value("d2/d1", ratio)
    return rec


# ---------------------------------------------------------------- traciality spot suite


def decomposition_grid(step: Fraction = Fraction(1, 4)) -> list[tuple[Fraction, Fraction]]:
    """Rational (lambda, mu) with |lambda| <= mu <= 1."""
    k = int(1 / step)
    return [(step * a, step * b) for b in range(k + 1) for a in range(-b, b + 1)]


def words_up_to(family: QGFamily, max_legs: int, alphabet: Iterable[tuple[int, int, int]]) -> list[GeneratorWord]:
    alpha = list(alphabet)
    out = [GeneratorWord(family, ())]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            legs = sum(e for *_, e in w)
            for let in alpha:
                if legs + let[2] <= max_legs:
                    nxt.append(w + (let,))
        out.extend(GeneratorWord(family, w) for w in nxt)
        frontier = nxt
    return out


def traciality_suite(
    functionals: Sequence[CentralFunctional], words: Iterable[GeneratorWord], route: str = "pairs"
) -> tuple[int, list[tuple[str, str, int]]]:
    """Check phi(ab) = phi(ba) for every split w = ab of every word.

    Returns (number of pairs checked, failures as (a, b, functional index)).
    """
    from .central import support_coeffs

    if not functionals:
        return 0, []
    fam, N = functionals[0].family, functionals[0].N
    cache: dict[tuple, dict] = {}

    def coeffs(w: GeneratorWord):
        c = cache.get(w.letters)
        if c is None:
            c = support_coeffs(fam, N, w, route=route)
            cache[w.letters] = c
        return c

    def value(phi: CentralFunctional, c: dict):
        return sum((v * phi.value(a) for a, v in c.items() if v), Fraction(0))

    checked = 0
    failures = []
    for w in words:
        lets = w.letters
        for cut in range(1, len(lets)):
            a, b = lets[:cut], lets[cut:]
            cab = coeffs(GeneratorWord(fam, a + b))
            cba = coeffs(GeneratorWord(fam, b + a))
            for k, phi in enumerate(functionals):
                checked += 1
                if value(phi, cab) != value(phi, cba):
                    failures.append((str(GeneratorWord(fam, a)), str(GeneratorWord(fam, b)), k))
    return checked, failures
