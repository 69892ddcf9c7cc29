"""Command-line surface for the tropical cohomology pipeline.

Exit codes: 0 success, 1 verification failure, 2 parse error, 3 invalid
fan, 4 cohomology error, 5 non-smooth input, 6 unbalanced weights.
"""

from __future__ import annotations

import argparse
import json
import sys

from trophodge import cohomology, cycles, fans, weightss

EXIT_VERIFY = 1
EXIT_PARSE = 2
EXIT_INVALID_FAN = 3
EXIT_COHOMOLOGY = 4
EXIT_NONSMOOTH = 5
EXIT_UNBALANCED = 6


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _load_fan(args):
    if getattr(args, "builtin", None):
        try:
            return fans.builtin(args.builtin)
        except (KeyError, ValueError) as exc:
            raise CliError(EXIT_PARSE, f"unknown builtin: {exc}")
    if getattr(args, "input", None):
        data = _load_json(args.input)
        try:
            return fans.from_json_dict(data)
        except (ValueError, KeyError, TypeError, IndexError) as exc:
            raise CliError(EXIT_INVALID_FAN, f"invalid fan: {exc}")
    raise CliError(EXIT_PARSE, "need --builtin or --input")


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"cannot parse {path}: {exc}")


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fan_validate(args):
    fan = _load_fan(args)
    smooth = "yes" if fan.is_smooth() else "no"
    complete = "yes" if fans.is_complete(fan) else "no"
    f = "(" + ",".join(str(x) for x in fan.f_vector()) + ")"
    _emit(
        f"cones={len(fan.cones)} smooth={smooth} complete={complete} f={f}\n",
        args.output,
    )
    return 0


def cmd_cohomology(args):
    fan = _load_fan(args)
    n = fan.ambient_rank
    try:
        cx = weightss.trop_complex_for(fan)
        if args.all:
            table = cohomology.betti_table(cx)
            if args.output and args.output.endswith(".json"):
                _emit(cohomology.betti_to_json(table) + "\n", args.output)
            else:
                _emit(cohomology.betti_to_tsv(table), args.output)
            return 0
        if args.p is None or args.q is None:
            raise CliError(EXIT_PARSE, "need --p and --q, or --all")
        if not (0 <= args.p <= n and 0 <= args.q <= n):
            raise CliError(EXIT_PARSE, "p and q must lie in 0..n")
        res = cohomology.cohomology(cx, args.p, args.q)
        _emit(f"{res.dim}\n", args.output)
        return 0
    except CliError:
        raise
    except ValueError as exc:
        raise CliError(EXIT_COHOMOLOGY, f"cohomology failed: {exc}")


def cmd_weightss(args):
    fan = _load_fan(args)
    try:
        if args.level == 1:
            page = weightss.e1_page(fan)
        else:
            page = weightss.e2_page(fan)
    except ValueError as exc:
        raise CliError(EXIT_NONSMOOTH, str(exc))
    _emit(page.to_json() + "\n", args.output)
    return 0


def cmd_chow(args):
    fan = _load_fan(args)
    n = fan.ambient_rank
    try:
        if args.all:
            dims = [cycles.chow_dim(fan, p) for p in range(n + 1)]
            _emit(json.dumps({"dims": dims}, sort_keys=True) + "\n", args.output)
            return 0
        if args.codim is None:
            raise CliError(EXIT_PARSE, "need --codim or --all")
        if not 0 <= args.codim <= n:
            raise CliError(EXIT_PARSE, "codim must lie in 0..n")
        _emit(f"{cycles.chow_dim(fan, args.codim)}\n", args.output)
        return 0
    except CliError:
        raise
    except ValueError as exc:
        raise CliError(EXIT_NONSMOOTH, str(exc))


def cmd_pair(args):
    if not args.input:
        raise CliError(EXIT_PARSE, "need --input with a weight file")
    data = _load_json(args.input)
    try:
        mw = cycles.MinkowskiWeight.from_json_dict(data)
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise CliError(EXIT_PARSE, f"invalid weight file: {exc}")
    if not mw.divisor:
        violations = cycles.balancing_check(mw)
        if violations:
            for sigma, defect in violations:
                print(
                    f"unbalanced at cone {list(sigma.rays)}: "
                    f"defect {[str(x) for x in defect]}",
                    file=sys.stderr,
                )
            raise CliError(EXIT_UNBALANCED, "weights are not balanced")
    fan = mw.fan
    cx = cycles.fans_complex(fan)
    cycle = cycles.weight_cycle(cx, mw)
    d = cycle.p
    res = cohomology.cohomology(cx, d, d)
    lines = [
        str(cycles.pair(rep, cycle)) for rep in res.representatives
    ]
    _emit("\n".join(lines) + "\n", args.output)
    return 0


def cmd_subdivide(args):
    fan = _load_fan(args)
    if not args.ray:
        raise CliError(EXIT_PARSE, "need --ray a,b,...")
    try:
        ray = tuple(int(x) for x in args.ray.split(","))
    except ValueError:
        raise CliError(EXIT_PARSE, "ray must be a comma-separated integer vector")
    try:
        out = fans.star_subdivision(fan, ray)
    except ValueError as exc:
        raise CliError(EXIT_INVALID_FAN, str(exc))
    _emit(json.dumps(fans.to_json_dict(out), sort_keys=True) + "\n", args.output)
    return 0


def _verify_fan(name, fan, corrupt=False):
    n = fan.ambient_rank
    checks = []

    def record(label, ok):
        checks.append({"name": label, "pass": bool(ok)})

    comparison = weightss.compare_with_trop(fan, corrupt_sign=corrupt)
    record("e2_matches_tropical", comparison["pass"])
    cx = weightss.trop_complex_for(fan)
    betti = cohomology.betti_table(cx)
    record(
        "vanishing_above_diagonal",
        all(
            betti[p][q] == 0
            for p in range(n + 1)
            for q in range(n + 1)
            if q >= p + 1
        ),
    )
    if fans.is_complete(fan):
        record("euler_vs_h_vector", weightss.euler_consistency(fan)["pass"])
        record(
            "chow_matches_diagonal",
            all(cycles.chow_dim(fan, p) == betti[p][p] for p in range(n + 1)),
        )
        record(
            "vanishing_h_p0",
            all(betti[p][0] == 0 for p in range(1, n + 1)),
        )
        if n == 2:
            record("numerical_kernels", cycles.numerical_kernel_check(fan)["pass"])
    ok = all(c["pass"] for c in checks)
    return {"fan": name, "checks": checks, "pass": ok}


def cmd_verify(args):
    if args.all_builtins:
        names = list(fans.BUILTIN_ZOO)
    elif args.builtin:
        names = [args.builtin]
    else:
        raise CliError(EXIT_PARSE, "need --builtin or --all-builtins")
    reports = []
    for name in names:
        try:
            fan = fans.builtin(name)
        except (KeyError, ValueError) as exc:
            raise CliError(EXIT_PARSE, f"unknown builtin: {exc}")
        reports.append(_verify_fan(name, fan, corrupt=args.corrupt_d1_sign))
    ok = all(r["pass"] for r in reports)
    _emit(
        json.dumps({"reports": reports, "pass": ok}, sort_keys=True) + "\n",
        args.output,
    )
    return 0 if ok else EXIT_VERIFY


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trophodge",
        description=(
            "Exact tropical cohomology of compactified fan spaces. "
            "Built-in fans include p1, p2, p3, p1xp1, p1xp1xp1, "
            "hirzebruch(a) with rays e1, e2, -e1+a*e2, -e2, blowup_p2, "
            "torus(n), and affine_space(n)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def fan_flags(p):
        p.add_argument("--builtin", help="built-in fan name")
        p.add_argument("--input", help="fan JSON file")
        p.add_argument("--output", help="write the report here instead of stdout")

    p = sub.add_parser("fan-validate", help="validate a fan and print a summary")
    fan_flags(p)
    p.set_defaults(func=cmd_fan_validate)

    p = sub.add_parser("cohomology", help="tropical Hodge numbers h^{p,q}")
    fan_flags(p)
    p.add_argument("--p", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--all", action="store_true", help="full Betti table")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("weightss", help="weight spectral sequence page dims")
    fan_flags(p)
    p.add_argument("--level", type=int, choices=(1, 2), default=2)
    p.set_defaults(func=cmd_weightss)

    p = sub.add_parser("chow", help="Minkowski-weight Chow group dimensions")
    fan_flags(p)
    p.add_argument("--codim", type=int)
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=cmd_chow)

    p = sub.add_parser("verify", help="run the full verification suite")
    p.add_argument("--builtin", help="verify one built-in fan")
    p.add_argument("--all-builtins", action="store_true")
    p.add_argument("--output")
    p.add_argument(
        "--corrupt-d1-sign", action="store_true", help=argparse.SUPPRESS
    )
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pair", help="pair a weight cycle with cohomology")
    p.add_argument("--input", help="Minkowski weight JSON file", required=False)
    p.add_argument("--output")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("subdivide", help="star subdivision along a ray")
    fan_flags(p)
    p.add_argument("--ray", help="comma-separated integer ray, e.g. 1,1")
    p.set_defaults(func=cmd_subdivide)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
