"""``papnlab`` command line.

Exit status: 0 success, 1 a check or identity failed, 2 usage or input error.
"""

import argparse
import os
import sys

from . import differential as dif
from . import families as fam
from . import identities as ids
from . import report
from . import search
from .expr import ExprError
from .gf2n import FieldError, field_new
from .spectral import MAX_TABLE_N, moment, moment_streaming, twisted_moment, walsh_full
from .vbf import LinearizedPoly, from_expression

CHECKS = ("apn", "weak", "delta", "spectrum", "papn0", "papn-all", "moments", "walsh-csv")
DEFAULT_CHECKS = "apn,delta,spectrum,papn0"


def _hex(text):
    try:
        return int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex constant: {text!r}") from None


def _default_jobs():
    env = os.environ.get("PAPNLAB_JOBS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _spec(args):
    return field_new(args.n, args.modulus)


def _emit(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _moments(F):
    if F.n <= MAX_TABLE_N:
        W = walsh_full(F)
        out = [moment(W, k) for k in (2, 3, 4)]
        out.append(twisted_moment(W, 3, 0, F(0), F.spec))
    else:
        out = [moment_streaming(F, k) for k in (2, 3, 4)]
        out.append(moment_streaming(F, 3, twist=(0, F(0))))
    return [m.to_json() for m in out]


def _analysis(F, checks):
    out = {}
    table = dif.ddt(F) if {"apn", "delta", "spectrum"} & checks else None
    if "apn" in checks:
        out["apn"] = dif.differential_uniformity(F, table) <= 2
    if "delta" in checks:
        out["delta"] = dif.differential_uniformity(F, table)
    if "spectrum" in checks:
        out["spectrum"] = dif.spectrum(F, table).to_json()
    if "weak" in checks:
        out["weak"] = dif.is_weakly_apn(F)
    if "papn0" in checks:
        out["papn0"] = dif.is_x0_apn_rodier(F, 0)
    if "papn-all" in checks:
        out["papn-all"] = dif.papn_set(F).to_json()
    if "moments" in checks:
        out["moments"] = _moments(F)
    if "walsh-csv" in checks:
        out["walsh-csv"] = report.walsh_csv(walsh_full(F))
    return out


def cmd_analyze(args):
    checks = [c for c in args.checks.split(",") if c]
    unknown = sorted(set(checks) - set(CHECKS))
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {', '.join(CHECKS)}")
    spec = _spec(args)
    F = from_expression(spec, args.fn)
    result = _analysis(F, set(checks))
    doc = {
        "field": spec.to_json(),
        "function": {"expression": F.label},
        "seed": args.seed,
        "checks": result,
    }
    report.validate_analysis(doc)
    if args.format == "json":
        _emit(report.dumps(doc))
    elif args.format == "csv":
        if "walsh-csv" in result:
            _emit(result["walsh-csv"])
        else:
            rows = [(k, report.dumps(v)) for k, v in sorted(result.items())]
            _emit(report._csv(["check", "value"], rows))
    else:
        _emit(f"GF(2^{spec.n}) modulus 0x{spec.modulus:x}; F(x) = {F.label}")
        for k in checks:
            v = result[k]
            if k == "walsh-csv":
                continue
            if k == "moments":
                for m in v:
                    twist = "" if m["twist"] is None else f" twist ({', '.join(m['twist'])})"
                    _emit(f"  moment k={m['k']}{twist}: {m['value']}")
            elif k == "spectrum":
                _emit("  spectrum: {" + ", ".join(f"{a}^{b}" for a, b in v.items()) + "}")
            elif k == "papn-all":
                pts = [f"0x{x:x}" for x, ok in enumerate(v["verdicts"]) if ok]
                _emit(f"  x0-APN points: {', '.join(pts) or 'none'}")
            else:
                _emit(f"  {k}: {v}")
    return 0


def cmd_table1(args):
    rows = search.table1_scan(args.n_min, args.n_max, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(report.table1_csv(rows))
    if args.json:
        _emit(report.dumps({"rows": [r.to_json() for r in rows]}))
    elif not args.csv:
        for r in rows:
            _emit(f"n={r.n:<3} delta={r.delta:<4} {', '.join(map(str, r.exponents))}")
    return 0


def cmd_papn_scan(args):
    summary = search.papn_poly_scan(field_new(args.n), args.coeffs, args.x0, jobs=args.jobs)
    _emit(report.dumps(summary.to_json()))
    return 0


def cmd_verify(args):
    counts = {}
    failures = 0
    for n in range(args.n_min, args.n_max + 1):
        exhaustive = n <= args.exhaustive_max
        for res in ids.random_suite(n, args.trials, args.seed, exhaustive=exhaustive):
            ok, bad = counts.get(res.identity, (0, 0))
            counts[res.identity] = (ok + res.passed, bad + (not res.passed))
            if not res.passed:
                failures += 1
            if args.all or not res.passed:
                _emit(report.dumps(res.to_json()))
    summary = {
        "summary": {k: {"pass": p, "fail": f} for k, (p, f) in sorted(counts.items())},
        "seed": args.seed,
        "trials": args.trials,
        "failures": failures,
    }
    _emit(report.dumps(summary))
    return 1 if failures else 0


_LINS = {"id": LinearizedPoly.identity, "tr": LinearizedPoly.trace}


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"family {args.family} needs {', '.join(missing)}")


def _single_family(args):
    spec = field_new(args.n)
    n = args.n
    f = args.family
    if f in ("trace-f", "trace-g"):
        _need(args, "d")
        return fam.trace_class_check(spec, args.d, f[-1].upper(), _LINS[args.l](n))
    if f == "l1l2":
        _need(args, "d", "r")
        return fam.l1l2_class_check(spec, args.d, args.r, _LINS[args.l1](n), _LINS[args.l2](n))
    if f == "gold-trace":
        _need(args, "d", "r")
        return fam.gold_trace_check(spec, args.d, args.r)
    if f == "triple":
        _need(args, "d", "s")
        return fam.triple_class_check(spec, args.d, args.s, _LINS[args.l1](n), _LINS[args.l2](n))
    if f == "binomial":
        if args.case:
            _need(args, "c", "d")
            v = fam.binomial_case_check(spec, args.case, args.c, args.d, args.beta)
            if v is None:
                raise ValueError("the two exponents coincide")
            return v
        _need(args, "a", "b")
        return fam.binomial_check(spec, args.a, args.b, args.beta)
    if f == "leander-rodier":
        _need(args, "d")
        return fam.leander_rodier_check(spec, args.d, args.beta)
    _need(args, "m")
    return fam.monomial_check(spec, args.m)


def cmd_families(args):
    verdicts = fam.family_grid(args.family, args.n, args.n) if args.grid else [_single_family(args)]
    bad = 0
    for v in verdicts:
        bad += not v.consistent
        _emit(report.dumps(v.to_json()))
    return 1 if bad else 0


def cmd_conjecture(args):
    rep = search.conjecture_scan(search.catalog(args.catalog, args.n_max, args.n_min))
    _emit(report.dumps(rep.to_json()))
    if rep.counterexamples:
        print(f"found {len(rep.counterexamples)} x0-APN modifications", file=sys.stderr)
    return 0


def cmd_field(args):
    spec = _spec(args)
    doc = dict(spec.to_json(), size=spec.size, generator_order=spec.generator_order())
    _emit(report.dumps(doc))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="papnlab", description="Partial APN function toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def field_args(sp, modulus=True):
        sp.add_argument("--n", type=int, required=True, help="field degree, 1..16")
        if modulus:
            sp.add_argument("--modulus", type=_hex, help="primitive modulus override (hex)")

    a = sub.add_parser("analyze", help="differential and spectral checks of one function")
    field_args(a)
    a.add_argument("--fn", required=True, help='function expression, e.g. "x^3 + Tr(x^9)"')
    a.add_argument("--checks", default=DEFAULT_CHECKS, help=f"comma list from {','.join(CHECKS)}")
    a.add_argument("--format", choices=("json", "csv", "human"), default="json")
    a.add_argument("--seed", type=int, default=0)
    a.set_defaults(func=cmd_analyze)

    t = sub.add_parser("table1", help="0-APN power maps that are not APN")
    t.add_argument("--n-min", type=int, default=1)
    t.add_argument("--n-max", type=int, default=10)
    t.add_argument("--csv", metavar="PATH")
    t.add_argument("--json", action="store_true")
    t.add_argument("--jobs", type=int, default=None)
    t.set_defaults(func=cmd_table1)

    s = sub.add_parser("papn-scan", help="count x0-APN, non-APN polynomials")
    field_args(s, modulus=False)
    s.add_argument("--coeffs", choices=("f2", "full"), default="f2")
    s.add_argument("--x0", type=_hex, default=1)
    s.add_argument("--jobs", type=int, default=None)
    s.set_defaults(func=cmd_papn_scan)

    v = sub.add_parser("verify", help="seeded identity suite")
    v.add_argument("--n-min", type=int, default=2)
    v.add_argument("--n-max", type=int, default=5)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--exhaustive-max", type=int, default=3, help="all (x0, eps) up to this n")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--all", action="store_true", help="print every result, not only failures")
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("families", help="0-APN class predictions against direct scans")
    field_args(f, modulus=False)
    f.add_argument("--family", choices=fam.FAMILIES, required=True)
    f.add_argument("--grid", action="store_true", help="whole parameter grid at this n")
    for name in ("a", "b", "c", "d", "r", "s", "m"):
        f.add_argument(f"--{name}", type=int)
    f.add_argument("--beta", type=_hex, default=1)
    f.add_argument("--case", choices=("i", "ii", "iii", "iv"))
    f.add_argument("--l", choices=tuple(_LINS), default="id")
    f.add_argument("--l1", choices=tuple(_LINS), default="id")
    f.add_argument("--l2", choices=tuple(_LINS), default="id")
    f.set_defaults(func=cmd_families)

    c = sub.add_parser("conjecture", help="look for x0-APN modifications of APN functions")
    c.add_argument("--catalog", default="default")
    c.add_argument("--n-min", type=int, default=3)
    c.add_argument("--n-max", type=int, default=7)
    c.set_defaults(func=cmd_conjecture)

    fd = sub.add_parser("field", help="describe GF(2^n)")
    field_args(fd)
    fd.set_defaults(func=cmd_field)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 0) is None:
        args.jobs = _default_jobs()
    try:
        return args.func(args)
    except (ExprError, FieldError, search.InfeasibleScan, ValueError, MemoryError) as exc:
        print(f"papnlab: error: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(f"papnlab: check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
