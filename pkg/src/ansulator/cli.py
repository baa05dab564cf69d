"""Command-line interface.

Exit codes: 0 success, 1 I/O, schema or usage errors, 2 validation failures,
3 a non-modular category where modularity is required, 4 selftest failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import mpmath

from ._schema import validate
from .blocks import TorusVector, apply_word, xi_handlebody
from .category import builtin_category, builtin_names, load_category
from .category.data import is_modular, validate_fusion_data, verlinde_consistency
from .errors import (
    AnsulatorError,
    BadParameters,
    CocycleObstruction,
    MalformedData,
    NotASubgroup,
    NotIsotropic,
    NotModular,
    NotVerified,
    SchemaError,
    UnsupportedSpec,
    ValidationError,
)
from .exactnum import Cyclotomic
from .frobenius import TrivialFrobenius, group_algebra, load_frobenius, verify_frobenius
from .manifolds import (
    AMBIGUITY,
    SkeinVectorPresentation,
    build_v_M_F,
    kappa_power,
    lens_presentation,
    numeric_invariant,
    parse_manifold,
)
from .oracle import ChainSurgery, plumbing_invariant
from .selftest import CHECKS, DEFAULT_SEED, run_selftest

PRECISION_ENV = "ANSULATOR_PRECISION_BITS"
DEFAULT_PRECISION = 53

EXIT_OK, EXIT_IO, EXIT_INVALID, EXIT_NOT_MODULAR, EXIT_SELFTEST = 0, 1, 2, 3, 4


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which would collide with validation failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


# -- resolution -------------------------------------------------------------------


def resolve_category(spec: str):
    path = Path(spec)
    if path.suffix == ".json" or path.exists():
        return load_category(path)
    return builtin_category(spec)


def resolve_frobenius(spec: str, category, *, allow_invalid: bool = False):
    if spec == "trivial":
        return TrivialFrobenius(category)
    if spec.startswith("group:"):
        labels = [x for x in spec[len("group:"):].split(",") if x]
        try:
            return group_algebra(category, labels)
        except KeyError as exc:
            raise BadParameters(str(exc.args[0])) from exc

    def by_name(name):
        return category if name == category.name else builtin_category(name)

    F = load_frobenius(spec, by_name, allow_invalid=allow_invalid)
    if F.category is not category and F.category != category:
        raise BadParameters(f"Frobenius file refers to {F.category.name}, not {category.name}")
    return F


def precision_bits(flag) -> int:
    if flag is not None:
        return flag
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_PRECISION
    try:
        bits = int(raw)
    except ValueError as exc:
        raise _Usage(f"{PRECISION_ENV} must be an integer") from exc
    if bits < 8:
        raise _Usage(f"{PRECISION_ENV} must be at least 8")
    return bits


def float_parts(x: Cyclotomic, bits: int) -> tuple[str, str]:
    digits = max(2, int(bits * math.log10(2)))
    re_, im_ = x.embed(bits)

    def show(v):
        text = mpmath.nstr(v, digits)
        return "0.0" if text in ("-0.0", "0.0") else text

    return show(re_), show(im_)


def float_display(x: Cyclotomic, bits: int) -> str:
    re_, im_ = float_parts(x, bits)
    if im_ == "0.0":
        return re_
    sign = "-" if im_.startswith("-") else "+"
    return f"{re_} {sign} {im_.lstrip('-')}i"


# -- output -------------------------------------------------------------------------


def emit_json(obj, schema: str | None = None) -> str:
    if schema:
        validate(obj, schema)
    return json.dumps(obj, indent=2) + "\n"


def emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def emit_text(pairs) -> str:
    return "".join(f"{k}: {v}\n" for k, v in pairs)


# -- commands -----------------------------------------------------------------------


def cmd_categories_list(args) -> tuple[int, str]:
    names = builtin_names()
    if args.format == "json":
        return EXIT_OK, emit_json({"categories": names})
    if args.format == "csv":
        return EXIT_OK, emit_csv(["name"], [[n] for n in names])
    return EXIT_OK, "".join(n + "\n" for n in names)


def _violations_json(problems):
    return [{"invariant": v.invariant, "where": list(map(int, v.where)) if all(isinstance(x, int) for x in v.where)
             else list(map(str, v.where)), "message": v.message} for v in problems]


def _report(kind, subject, problems, extra=None):
    out = {"kind": kind, "subject": subject, "valid": not problems, "violations": _violations_json(problems)}
    out.update(extra or {})
    return out


def _emit_report(report, fmt) -> str:
    if fmt == "json":
        return emit_json(report, "report")
    if fmt == "csv":
        return emit_csv(["invariant", "where", "message"],
                        [[v["invariant"], " ".join(map(str, v["where"])), v["message"]] for v in report["violations"]])
    lines = [("subject", report["subject"]), ("valid", str(report["valid"]).lower())]
    for key in ("modular", "verlinde"):
        if key in report:
            lines.append((key, "n/a" if report[key] is None else str(report[key]).lower()))
    lines += [("violation", f"{v['invariant']} {v['where']}: {v['message']}") for v in report["violations"]]
    return emit_text(lines)


def cmd_verify(args) -> tuple[int, str]:
    try:
        d = resolve_category(args.category)
        problems = validate_fusion_data(d)
    except ValidationError as exc:
        return EXIT_INVALID, _emit_report(_report("category", args.category, exc.violations), args.format)
    extra = {}
    if not problems:
        modular = is_modular(d)
        extra = {"modular": modular, "verlinde": verlinde_consistency(d) if modular else None}
    report = _report("category", d.name, problems, extra)
    return (EXIT_INVALID if problems else EXIT_OK), _emit_report(report, args.format)


def cmd_frobenius_verify(args) -> tuple[int, str]:
    d = resolve_category(args.category)
    F = resolve_frobenius(args.frobenius, d, allow_invalid=True)
    problems = verify_frobenius(F)
    report = _report("frobenius", args.frobenius, problems)
    return (EXIT_INVALID if problems else EXIT_OK), _emit_report(report, args.format)


def cmd_invariant(args) -> tuple[int, str]:
    bits = precision_bits(args.precision_bits)
    d = resolve_category(args.category)
    F = resolve_frobenius(args.frobenius, d, allow_invalid=args.allow_invalid)
    pres = parse_manifold(args.manifold)
    if not is_modular(d):
        raise NotModular(f"{d.name} is not modular")
    v = build_v_M_F(d, F, pres) if not args.allow_invalid else _unchecked_presentation(d, F, pres)
    inv = numeric_invariant(v)
    re_, im_ = float_parts(inv.value, bits)
    out = {
        "manifold": args.manifold,
        "word": str(pres.word),
        "category": d.name,
        "frobenius": args.frobenius,
        "value": inv.value.to_json(),
        "value_text": str(inv.value),
        "value_float": {"re": re_, "im": im_},
        "anomaly_kappa": inv.anomaly.to_json(),
        "ambiguity": AMBIGUITY,
    }
    if args.format == "json":
        return EXIT_OK, emit_json(out, "invariant")
    flat = [
        ("manifold", out["manifold"]), ("word", out["word"]), ("category", out["category"]),
        ("frobenius", out["frobenius"]), ("value", out["value_text"]),
        ("value_float", float_display(inv.value, bits)), ("anomaly_kappa", str(inv.anomaly)),
        ("ambiguity", AMBIGUITY),
    ]
    if args.format == "csv":
        return EXIT_OK, emit_csv([k for k, _ in flat], [[v for _, v in flat]])
    return EXIT_OK, emit_text(flat)


def _unchecked_presentation(d, F, pres):
    xi = xi_handlebody(F, check=False)
    return SkeinVectorPresentation(d, F, pres, TorusVector.basis(d, 0), apply_word(d, pres.word, xi))


def _sweep_pairs(p_min, p_max, q_spec):
    for p in range(p_min, p_max + 1):
        if q_spec == "all":
            qs = [1] if p == 0 else [0] if p == 1 else [q for q in range(1, p) if math.gcd(p, q) == 1]
        else:
            qs = [int(q_spec)] if math.gcd(p, int(q_spec)) == 1 else []
        for q in qs:
            yield p, q


def cmd_sweep(args) -> tuple[int, str]:
    bits = precision_bits(args.precision_bits)
    if args.p_min < 0 or (args.q != "all" and not args.q.lstrip("-").isdigit()):
        raise _Usage("p-min must be >= 0 and q must be 'all' or an integer")
    d = resolve_category(args.category)
    F = resolve_frobenius(args.frobenius, d)
    if not is_modular(d):
        raise NotModular(f"{d.name} is not modular")
    kappa = d.sdata.anomaly
    trivial = isinstance(F, TrivialFrobenius)
    rows = []
    for p, q in _sweep_pairs(args.p_min, args.p_max, args.q):
        pres = lens_presentation(p, q, args.expansion)
        h = numeric_invariant(build_v_M_F(d, F, pres)).value
        o = n = agree = None
        if trivial:
            o = plumbing_invariant(d, ChainSurgery(pres.framings))
            n = kappa_power(h, o, kappa, len(pres.framings) + 2)
            agree = n is not None
        rows.append({
            "p": p, "q": q,
            "heegaard_value": h, "oracle_value": o,
            "kappa_power_n": n, "oracle_agreement": agree,
            "float_display": float_display(h, bits),
        })
    if args.format == "json":
        out = {
            "category": d.name, "frobenius": args.frobenius, "anomaly_kappa": kappa.to_json(),
            "rows": [{**r, "heegaard_value": r["heegaard_value"].to_json(),
                      "oracle_value": r["oracle_value"].to_json() if r["oracle_value"] is not None else None}
                     for r in rows],
        }
        return EXIT_OK, emit_json(out, "sweep")
    header = ["p", "q", "heegaard_value", "oracle_value", "kappa_power_n", "oracle_agreement", "float_display"]

    def cell(v):
        if v is None:
            return ""
        if isinstance(v, bool):
            return str(v).lower()
        return str(v)

    table = [[cell(r[k]) for k in header] for r in rows]
    if args.format == "csv":
        return EXIT_OK, emit_csv(header, table)
    return EXIT_OK, "".join("  ".join(row) + "\n" for row in [header, *table])


def cmd_selftest(args) -> tuple[int, str]:
    extra = []
    for path in args.frobenius_file or ():
        extra.append(load_frobenius(path, builtin_category, allow_invalid=True))
    only = args.check or None
    if only:
        unknown = sorted(set(only) - set(CHECKS))
        if unknown:
            raise _Usage(f"unknown checks {unknown}; available: {', '.join(CHECKS)}")
    results = run_selftest(args.seed, extra, only)
    passed = all(r.passed for r in results)
    code = EXIT_OK if passed else EXIT_SELFTEST
    if args.format == "json":
        return code, emit_json({"seed": args.seed, "passed": passed, "checks": [r.to_json() for r in results]},
                               "selftest")
    if args.format == "csv":
        return code, emit_csv(["check", "passed", "details"],
                              [[r.name, str(r.passed).lower(),
                                json.dumps(r.details if r.passed else r.counterexample, sort_keys=True)]
                               for r in results])
    lines = []
    for r in results:
        info = r.details if r.passed else r.counterexample
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name} {json.dumps(info, sort_keys=True)}\n")
    lines.append(f"{'all checks passed' if passed else 'some checks failed'} (seed {args.seed})\n")
    return code, "".join(lines)


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ansulator", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("json", "csv", "text"), default="text"):
        p.add_argument("--format", choices=formats, default=default)

    cats = sub.add_parser("categories", help="builtin categories")
    cats_sub = cats.add_subparsers(dest="action", required=True)
    lst = cats_sub.add_parser("list", help="list builtin category names")
    common(lst)
    lst.set_defaults(func=cmd_categories_list)

    ver = sub.add_parser("verify", help="validate a category (builtin name or JSON file)")
    ver.add_argument("--category", required=True)
    common(ver)
    ver.set_defaults(func=cmd_verify)

    frob = sub.add_parser("frobenius", help="Frobenius algebra tools")
    frob_sub = frob.add_subparsers(dest="action", required=True)
    fver = frob_sub.add_parser("verify", help="check the Frobenius axioms")
    fver.add_argument("--category", required=True)
    fver.add_argument("--frobenius", required=True, help="trivial, group:<labels> or a JSON file")
    common(fver)
    fver.set_defaults(func=cmd_frobenius_verify)

    inv = sub.add_parser("invariant", help="numeric invariant of a genus-1 presentation")
    inv.add_argument("--category", required=True)
    inv.add_argument("--manifold", required=True, help="s3, s1xs2, lens:p,q[,hj|nearest] or word:S.T.Ti")
    inv.add_argument("--frobenius", default="trivial")
    inv.add_argument("--allow-invalid", action="store_true", help="accept Frobenius files that fail verification")
    inv.add_argument("--precision-bits", type=int, default=None)
    common(inv, default="json")
    inv.set_defaults(func=cmd_invariant)

    sw = sub.add_parser("sweep", help="lens-space table against the surgery oracle")
    sw.add_argument("--category", required=True)
    sw.add_argument("--frobenius", default="trivial")
    sw.add_argument("--p-min", type=int, default=1)
    sw.add_argument("--p-max", type=int, required=True)
    sw.add_argument("--q", default="all", help="'all' or a fixed integer")
    sw.add_argument("--expansion", choices=("hj", "nearest"), default="hj")
    sw.add_argument("--precision-bits", type=int, default=None)
    common(sw, default="csv")
    sw.set_defaults(func=cmd_sweep)

    st = sub.add_parser("selftest", help="run the invariance and oracle checks")
    st.add_argument("--seed", type=int, default=DEFAULT_SEED)
    st.add_argument("--check", action="append", help="run only this check (repeatable)")
    st.add_argument("--frobenius-file", action="append", help="extra Frobenius file fed to the verifier check")
    common(st)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, text = args.func(args)
    except NotModular as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_MODULAR
    except ValidationError as exc:
        print(f"error: validation failed: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NotVerified, NotIsotropic, CocycleObstruction, NotASubgroup) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SchemaError as exc:
        print(f"error: schema: {exc}", file=sys.stderr)
        return EXIT_IO
    except (OSError, MalformedData, UnsupportedSpec, BadParameters, _Usage) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except AnsulatorError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
