"""Tabulate the S_N^+ order-four quantities and the quadratic root for a range of N."""

from __future__ import annotations

import argparse

from qtrace import classify as C
from qtrace.exact import format_rational


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=4)
    ap.add_argument("--hi", type=int, default=9)
    a = ap.parse_args()

    cols = ("N", "h(1,1)", "h(2,1)", "h(2,2)", "X", "X_tilde", "a3", "b3")
    print("  ".join(f"{c:>14s}" for c in cols))
    for N in range(a.lo, a.hi + 1):
        quad = C.appendix_quadratic(N)
        row = [
            str(N),
            format_rational(C.hk(N, C.PI4_1, C.PI4_1)),
            format_rational(C.hk(N, C.PI4_2, C.PI4_1)),
            format_rational(C.hk(N, C.PI4_2, C.PI4_2)),
            format_rational(quad.computed_values["X"]),
            format_rational(quad.computed_values["X_tilde"]),
        ]
        if N >= 6:
            a3, b3 = C.snplus_a3b3(N)
            row += [format_rational(a3), format_rational(b3)]
        else:
            row += ["-", "-"]
        print("  ".join(f"{c:>14s}" for c in row))


if __name__ == "__main__":
    main()
