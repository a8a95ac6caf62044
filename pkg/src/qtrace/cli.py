"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Callable, Sequence

from . import classify, roots
from .central import CentralFunctional, closed_form, conv_exponential
from .config import DEFAULT_RANGES, RunConfig, parse_range
from .errors import CapExceeded, InvalidInput, VerificationFailure
from .exact import format_rational, parse_rational
from .fusion import char_poly, dim, fuse, parse_label
from .records import VerificationRecord
from .weingarten import QGFamily, get_context, gram, moment

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
SUITES = ("onplus", "snplus", "hnplus", "appendix", "rootsys", "all")
ROOTSYS_DEFAULT = (("A1", 4), ("A2", 3), ("B2", 3), ("G2", 2))


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _indices(text: str) -> list[int]:
    if not text.strip():
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise InvalidInput(f"bad index list {text!r}") from None


def _emit(obj, as_json: bool, text: str | None = None) -> None:
    if as_json:
        print(json.dumps(obj, indent=2))
    else:
        print(text if text is not None else json.dumps(obj))


# ---------------------------------------------------------------- thin commands


def cmd_moment(a) -> int:
    v = moment(a.family, a.n_dim, _indices(a.rows), _indices(a.cols))
    _emit({"family": a.family, "N": a.n_dim, "rows": a.rows, "cols": a.cols, "value": format_rational(v)}, a.json, format_rational(v))
    return EXIT_OK


def cmd_gram(a) -> int:
    g = gram(a.family, a.n, a.n_dim)
    ctx_parts = get_context(a.family, a.n, a.n_dim).partitions if a.json else None
    if a.json:
        _emit({"family": a.family, "n": a.n, "N": a.n_dim, "partitions": [p.to_json() for p in ctx_parts], "gram": g}, True)
    else:
        print("\n".join(" ".join(str(x) for x in row) for row in g))
    return EXIT_OK


def cmd_weingarten(a) -> int:
    ctx = get_context(a.family, a.n, a.n_dim)
    w = [[format_rational(x) for x in row] for row in ctx.weingarten]
    if a.json:
        _emit({"family": a.family, "n": a.n, "N": a.n_dim, "partitions": [p.to_json() for p in ctx.partitions], "weingarten": w}, True)
    else:
        print("\n".join(" ".join(row) for row in w))
    return EXIT_OK


def cmd_fusion(a) -> int:
    x = fuse(a.family, parse_label(a.family, a.a), parse_label(a.family, a.b))
    # largest labels first, as the decomposition is usually written
    out = dict(reversed(list(x.to_json().items())))
    if a.n_dim is not None:
        out = {"terms": out, "dims": {k: dim(a.family, a.n_dim, parse_label(a.family, k)) for k in out}}
    print(json.dumps(out, indent=2 if a.json else None))
    return EXIT_OK


def cmd_charpoly(a) -> int:
    p = char_poly(a.family, parse_label(a.family, a.label))
    single = QGFamily.parse(a.family) is not QGFamily.HPLUS
    _emit({"family": a.family, "label": a.label, "terms": p.to_json(), "pretty": p.pretty(single)}, a.json, p.pretty(single))
    return EXIT_OK


def cmd_decompose(a) -> int:
    fam = QGFamily.parse(a.family)
    if fam is QGFamily.OPLUS:
        if a.phi1 is None or a.phi2 is None:
            raise InvalidInput("oplus needs --phi1 and --phi2")
        dec = classify.onplus_decompose(a.n_dim, parse_rational(a.phi1), parse_rational(a.phi2))
    elif fam is QGFamily.SPLUS:
        if a.phi1 is None:
            raise InvalidInput("splus needs --phi1")
        dec = classify.snplus_classify(a.n_dim, parse_rational(a.phi1))
    else:
        if a.lam is None or a.mu is None:
            raise InvalidInput("hplus needs --lambda and --mu")
        dec = classify.hnplus_decompose(a.n_dim, parse_rational(a.lam), parse_rational(a.mu))
    out = dec.to_json()
    text = " ".join(f"{k}={v}" for k, v in out["coefficients"].items()) + f" valid={str(dec.valid).lower()}"
    _emit(out, a.json, text)
    return EXIT_OK


def cmd_semigroup(a) -> int:
    makers = {"haar": CentralFunctional.haar, "counit": CentralFunctional.counit, "alt": CentralFunctional.alt}
    phi = makers[a.phi](a.family, a.n_dim)
    label = parse_label(a.family, a.label)
    t = parse_rational(a.t)
    series = conv_exponential(phi, t, label, a.trunc)
    closed = closed_form(phi, t, label)
    ok = abs(series - closed) <= a.tol
    out = {
        "family": a.family,
        "N": a.n_dim,
        "phi": a.phi,
        "label": a.label,
        "t": a.t,
        "truncation": a.trunc,
        "series": series,
        "closed_form": closed,
        "difference": abs(series - closed),
        "within_tolerance": ok,
    }
    _emit(out, a.json, f"{series!r} (closed form {closed!r}, |diff| {abs(series - closed):.3e})")
    return EXIT_OK if ok else EXIT_FAIL


def _root_system(a) -> roots.RootSystem:
    if a.cartan:
        try:
            data = json.loads(a.cartan)
        except json.JSONDecodeError as e:
            raise InvalidInput(f"bad Cartan JSON: {e}") from None
        return roots.RootSystem.from_json({"cartan": data})
    return roots.RootSystem.of_type(a.type)


def cmd_rootsys(a) -> int:
    R = _root_system(a)
    op = a.op
    if op == "center":
        divisors, points = roots.center_group(R)
        out = {"elementary_divisors": divisors, "order": len(points), "points": [[format_rational(v) for v in x] for x in points]}
    elif op == "weyl":
        out = {"order": len(roots.weyl_group(R))}
    else:
        if a.weight is None:
            raise InvalidInput(f"{op} needs --weight")
        w = _indices(a.weight)
        if op == "dominant":
            out = {"dominant": list(roots.dominant_rep(R, w))}
        elif op == "saturated":
            out = {"saturated": [list(x) for x in sorted(roots.saturated_set(R, w))]}
        else:
            out = {"in_root_lattice": roots.in_root_lattice(R, w)}
    out = {"root_system": R.to_json(), **out}
    print(json.dumps(out, indent=2 if a.json else None))
    return EXIT_OK


# ---------------------------------------------------------------- verification suites


Task = Callable[[], VerificationRecord]


def _fusion_h_record(N: int) -> VerificationRecord:
    from .fusion import irr

    rec = VerificationRecord("hnplus_fusion_identities", "hplus", N)
    one, zero = irr("hplus", "1"), irr("hplus", "0")
    rec.check("chi1 chi0 chi1", one * zero * one == {"101": 1, "11": 2, "0": 1, "": 1})
    rec.check("chi1 chi1 chi0", one * one * zero == {"110": 1, "00": 1, "0": 2, "11": 1, "": 1})
    rec.check("d11=N(N-1)", dim("hplus", N, "11") == N * (N - 1))
    return rec


def _length2_counit(N: int) -> VerificationRecord:
    return classify.hnplus_length2(N, dim("hplus", N, "0"), dim("hplus", N, "1"), dim("hplus", N, "10"))


def _extreme_points(N: int) -> VerificationRecord:
    rec = VerificationRecord("onplus_extreme_points", "oplus", N)
    d1, d2 = dim("oplus", N, 1), dim("oplus", N, 2)
    for name, (p1, p2), want in (
        ("counit", (d1, d2), (0, 1, 0)),
        ("haar", (0, 0), (1, 0, 0)),
        ("alt", (-d1, d2), (0, 0, 1)),
    ):
        dec = classify.onplus_decompose(N, p1, p2)
        got = tuple(dec.coefficients[k] for k in ("haar", "counit", "alt"))
        rec.check(name, dec.valid and got == want)
    return rec


def suite_tasks(suite: str, cfg: RunConfig, ranges: dict, rootsys: Sequence[tuple[str, int]] | None = None) -> list[Task]:
    tasks: list[Task] = []
    if suite in ("onplus", "all"):
        for N in ranges["onplus"]:
            tasks += [partial(classify.onplus_recursion, N), partial(_extreme_points, N)]
    if suite in ("snplus", "all"):
        for N in ranges["snplus"]:
            tasks += [
                partial(classify.splus_base_moments, N),
                partial(classify.free_poisson_record, N),
                partial(classify.snplus_a3_separation, N),
                partial(classify.snplus_a3b3_record, N),
                partial(classify.snplus_semigroup_rigidity, N, tol=cfg.tolerance),
                partial(classify.snplus_nonvanishing, N, 0),
                partial(classify.snplus_nonvanishing, N, 1, ("odd",) if not cfg.extended else ("odd", "even")),
            ]
    if suite in ("hnplus", "all"):
        for N in ranges["hnplus"]:
            tasks += [
                partial(_fusion_h_record, N),
                partial(classify.hnplus_relations, N),
                partial(classify.hnplus_a111b111, N),
                partial(_length2_counit, N),
            ]
    if suite in ("appendix", "all"):
        for N in ranges["appendix"]:
            tasks += [
                partial(classify.appendix_order4, N),
                partial(classify.appendix_order5, N),
                partial(classify.appendix_quadratic, N),
                partial(classify.snplus_prop_a3_equiv, N),
            ]
    if suite in ("rootsys", "all"):
        systems = rootsys if rootsys is not None else ROOTSYS_DEFAULT
        for tag, radius in systems:
            R = roots.RootSystem.of_type(tag)
            tasks += [
                partial(roots.lemma_equiv_check, R, radius),
                partial(roots.center_record, R),
                partial(roots.condition_ii_record, R, tolerance=cfg.tolerance),
            ]
        tasks.append(partial(roots.suq2_record))
    return tasks


def _run_task(task: Task, extended: bool) -> VerificationRecord:
    from .weingarten import LIMITS

    LIMITS.extended = extended
    try:
        return task()
    except VerificationFailure as e:
        fn = getattr(task, "func", task)
        args = getattr(task, "args", ())
        N = args[0] if args and isinstance(args[0], int) else None
        rec = VerificationRecord(getattr(fn, "__name__", "task"), "", N, {"error": str(e)})
        rec.check("completed", False)
        return rec


def run_suite(suite: str, cfg: RunConfig, ranges: dict | None = None, rootsys=None) -> list[VerificationRecord]:
    if suite not in SUITES:
        raise InvalidInput(f"unknown suite {suite!r}")
    tasks = suite_tasks(suite, cfg, ranges or cfg.ranges, rootsys)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = list(pool.map(_run_task, tasks, [cfg.extended] * len(tasks)))
    else:
        records = [_run_task(t, cfg.extended) for t in tasks]
    return sorted(records, key=lambda r: (r.claim_id, r.N if r.N is not None else -1))


def cmd_verify(a) -> int:
    cfg = RunConfig(tolerance=a.tol, output="json" if a.json else "table", extended=a.extended, jobs=a.jobs)
    cfg.apply()
    ranges = dict(DEFAULT_RANGES)
    if a.N is not None:
        if a.suite == "all":
            raise InvalidInput("--N applies to a single suite")
        if a.suite != "rootsys":
            ranges[a.suite] = parse_range(a.N)
    rootsys = None
    if a.type is not None:
        rootsys = [(a.type, a.radius if a.radius is not None else 2)]
    elif a.radius is not None:
        rootsys = [(t, a.radius) for t, _ in ROOTSYS_DEFAULT]
    records = run_suite(a.suite, cfg, ranges, rootsys)
    report = [r.to_json() for r in records]
    if a.report:
        Path(a.report).write_text(json.dumps(report, indent=2) + "\n")
    if a.json:
        print(json.dumps(report, indent=2))
    else:
        for r in records:
            n = "" if r.N is None else f" N={r.N}"
            print(f"{'PASS' if r.verdict else 'FAIL'} {r.claim_id}{n}")
    failed = [r for r in records if not r.verdict]
    for r in failed:
        print(f"failed: {r.claim_id} N={r.N}: {', '.join(r.failures)}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qtrace", description="Haar moments, fusion rules and tracial central states of free quantum groups")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def family(sp, n_dim: bool = True):
        sp.add_argument("--family", required=True, choices=[f.value for f in QGFamily])
        if n_dim:
            sp.add_argument("--n-dim", type=int, required=True, help="the matrix size N")
        sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("moment", help="exact Haar moment h(u_{i1 j1} ... u_{in jn})")
    family(sp)
    sp.add_argument("--rows", required=True)
    sp.add_argument("--cols", required=True)
    sp.set_defaults(fn=cmd_moment)

    for name, fn in (("gram", cmd_gram), ("weingarten", cmd_weingarten)):
        sp = sub.add_parser(name, help=f"{name} matrix over the family's partition class")
        family(sp)
        sp.add_argument("--n", type=int, required=True, help="number of legs")
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("fusion", help="decompose chi_a chi_b")
    family(sp, n_dim=False)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--n-dim", type=int, default=None, help="also report dimensions at this N")
    sp.set_defaults(fn=cmd_fusion)

    sp = sub.add_parser("charpoly", help="character as a polynomial in the fundamental characters")
    family(sp, n_dim=False)
    sp.add_argument("--label", required=True)
    sp.set_defaults(fn=cmd_charpoly)

    sp = sub.add_parser("decompose", help="extreme-point decomposition of a tracial central state")
    family(sp)
    sp.add_argument("--phi1")
    sp.add_argument("--phi2")
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--mu")
    sp.set_defaults(fn=cmd_decompose)

    sp = sub.add_parser("semigroup", help="convolution exponential against its closed form")
    family(sp)
    sp.add_argument("--phi", required=True, choices=["haar", "counit", "alt"])
    sp.add_argument("--t", required=True)
    sp.add_argument("--label", required=True)
    sp.add_argument("--trunc", type=int, default=20)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(fn=cmd_semigroup)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=SUITES)
    sp.add_argument("--N", default=None, help="N range, e.g. 4..9 or 6,7")
    sp.add_argument("--type", default=None, help="root system type for the rootsys suite")
    sp.add_argument("--radius", type=int, default=None)
    sp.add_argument("--extended", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--report", default=None, help="write the JSON report here")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("rootsys", help="root system queries")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--type")
    g.add_argument("--cartan", help="JSON matrix")
    sp.add_argument("--op", choices=["center", "weyl", "dominant", "saturated", "in-root-lattice"], default="center")
    sp.add_argument("--weight", default=None, help="comma-separated fundamental coordinates")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(fn=cmd_rootsys)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CapExceeded as e:
        print(f"qtrace: resource cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except VerificationFailure as e:
        print(f"qtrace: verification failed: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (InvalidInput, ValueError, KeyError) as e:
        print(f"qtrace: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
