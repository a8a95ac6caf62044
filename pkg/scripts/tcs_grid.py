"""Decompose a grid of central states and spot-check traciality on generator words."""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

from qtrace import classify as C
from qtrace.fusion import dim
from qtrace.weingarten import QGFamily


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["oplus", "hplus"], default="oplus")
    ap.add_argument("--N", type=int, default=6)
    ap.add_argument("--step", type=Fraction, default=Fraction(1, 4))
    ap.add_argument("--legs", type=int, default=4)
    a = ap.parse_args()

    family = QGFamily.parse(a.family)
    decs = []
    for lam, mu in C.decomposition_grid(a.step):
        if family is QGFamily.OPLUS:
            dec = C.onplus_decompose(a.N, lam * dim(family, a.N, 1), mu * dim(family, a.N, 2))
        else:
            dec = C.hnplus_decompose(a.N, lam, mu)
        coef = " ".join(f"{k}={v}" for k, v in dec.coefficients.items())
        print(f"lambda={str(lam):>5s} mu={str(mu):>4s}  {coef}  valid={dec.valid}")
        decs.append(dec)

    exps = (1,) if family is QGFamily.OPLUS else (1, 2)
    alphabet = [(r, c, e) for r in (1, 2) for c in (1, 2) for e in exps]
    words = [w for w in C.words_up_to(family, a.legs, alphabet) if len(w.letters) >= 2]
    t0 = time.perf_counter()
    checked, failures = C.traciality_suite([d.functional() for d in decs], words)
    print(f"{len(words)} words, {checked} residuals, {len(failures)} nonzero, {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
