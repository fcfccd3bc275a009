"""Command-line front end.

Subcommands expose classification, flags, quotient forms, hierarchies, the
orbit-type table, verification suites, and zigzag certificates, with
machine-readable JSON output (CSV for tables). Exit codes: 0 success, 1
domain errors (structured JSON on stderr), 2 usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from .errors import OrbitForgeError
from .flags import compute_flag, quotient_form
from .groups import (AlgebraElement, DualAlgebraElement, GroupKind,
                     affine, mat_from_lists, poincare, vec_from_list)
from .classify import (bijection_pair, classify_adjoint, classify_coadjoint,
                       classify_delta, e13_table, enumerate_hierarchy)
from .verify import run_suite, suite_names, zigzag_certificate


def parse_group(spec: str) -> GroupKind:
    """Parse 'affine:<n>' or 'poincare:<m>,<n>'."""
    try:
        family, _, rest = spec.partition(":")
        if family == "affine":
            return affine(int(rest))
        if family == "poincare":
            m, n = rest.split(",")
            return poincare(int(m), int(n))
    except (ValueError, OrbitForgeError) as exc:
        raise OrbitForgeError(f"bad group spec {spec!r}: {exc}") from exc
    raise OrbitForgeError(f"bad group spec {spec!r}")


def _load_element(args) -> dict:
    if args.file:
        with open(args.file) as fh:
            return json.load(fh)
    if args.element:
        return json.loads(args.element)
    raise OrbitForgeError("provide --element JSON or --file")


def _emit(obj, fmt: str):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    elif fmt == "pretty":
        print(_pretty(obj))
    else:
        raise OrbitForgeError(f"format {fmt!r} not supported for this command")


def _pretty(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        return "\n".join(f"{pad}{k}: " + (("\n" + _pretty(v, indent + 1))
                                          if isinstance(v, (dict, list)) else str(v))
                         for k, v in obj.items())
    if isinstance(obj, list):
        return "\n".join(_pretty(v, indent) if isinstance(v, (dict, list))
                         else f"{pad}- {v}" for v in obj)
    return f"{pad}{obj}"


def _emit_table(rows: list[dict], fmt: str):
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
        print(buf.getvalue(), end="")
    else:
        _emit(rows, fmt)


def _cmd_classify_adjoint(args):
    kind = parse_group(args.group)
    el = _load_element(args)
    x = AlgebraElement(kind, mat_from_lists(el["omega"]), vec_from_list(el["v"]))
    label = classify_adjoint(x)
    _emit({"group": kind.to_json(), "label": label.to_json()}, args.format)


def _cmd_classify_coadjoint(args):
    kind = parse_group(args.group)
    el = _load_element(args)
    xi = DualAlgebraElement(kind, mat_from_lists(el["L"]), vec_from_list(el["p"]))
    label = classify_coadjoint(xi)
    _emit({"group": kind.to_json(), "label": label.to_json()}, args.format)


def _cmd_classify_delta(args):
    kind = parse_group(args.group)
    el = _load_element(args)
    label = classify_delta(mat_from_lists(el["omega"]), vec_from_list(el["p"]), kind)
    _emit({"group": kind.to_json(), "label": label.to_json()}, args.format)


def _cmd_flag(args):
    kind = parse_group(args.group)
    el = _load_element(args)
    flag = compute_flag(mat_from_lists(el["omega"]), kind)
    _emit({"group": kind.to_json(), "flag": flag.to_json()}, args.format)


def _cmd_quotient_forms(args):
    kind = parse_group(args.group)
    if kind.family != "poincare":
        raise OrbitForgeError("quotient forms need an orthogonal kind")
    el = _load_element(args)
    omega = mat_from_lists(el["omega"])
    flag = compute_flag(omega, kind)
    steps = range(flag.k + 1) if args.step is None else [args.step]
    forms = [quotient_form(omega, flag, j, kind.form()).to_json() for j in steps]
    _emit({"group": kind.to_json(), "flag": flag.to_json(),
           "quotient_forms": forms}, args.format)


def _cmd_hierarchy(args):
    kind = parse_group(args.group)
    tree = enumerate_hierarchy(kind)
    _emit({"group": kind.to_json(), "tree": tree.to_json(),
           "leaves": tree.leaves()}, args.format)


def _cmd_table_e13(args):
    _emit_table(e13_table(), args.format)


def _cmd_bijection_pair(args):
    kind = parse_group(args.group)
    el = _load_element(args)
    x = AlgebraElement(kind, mat_from_lists(el["omega"]), vec_from_list(el["v"]))
    xi = bijection_pair(x)
    _emit({"group": kind.to_json(),
           "adjoint_label": classify_adjoint(x).to_json(),
           "coadjoint": xi.to_json(),
           "coadjoint_label": classify_coadjoint(xi).to_json()}, args.format)


def _cmd_verify(args):
    kind = parse_group(args.group)
    report = run_suite(args.suite, kind, args.trials, args.seed)
    _emit(report.to_json(), args.format)
    return 0 if report.ok else 1


def _cmd_certificate(args):
    kind = parse_group(args.group)
    el = _load_element(args)
    x = AlgebraElement(kind, mat_from_lists(el["omega"]), vec_from_list(el["v"]))
    cert = zigzag_certificate(x, seed=args.seed)
    _emit(cert.to_json(), args.format)
    return 0 if cert.all_checked() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitforge",
        description="Exact classification of adjoint and coadjoint orbits of "
                    "affine and pseudo-orthogonal semidirect products.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_element=True):
        p.add_argument("--group", required=True,
                       help="affine:<n> or poincare:<m>,<n>")
        if need_element:
            p.add_argument("--element", help="inline JSON element")
            p.add_argument("--file", help="path to a JSON element")
        p.add_argument("--format", default="json", choices=["json", "csv", "pretty"])

    p = sub.add_parser("classify-adjoint", help="label an algebra element")
    common(p)
    p.set_defaults(fn=_cmd_classify_adjoint)

    p = sub.add_parser("classify-coadjoint", help="label a dual element")
    common(p)
    p.set_defaults(fn=_cmd_classify_coadjoint)

    p = sub.add_parser("classify-delta", help="label an incident pair")
    common(p)
    p.set_defaults(fn=_cmd_classify_delta)

    p = sub.add_parser("flag", help="centralizer flag of an operator")
    common(p)
    p.set_defaults(fn=_cmd_flag)

    p = sub.add_parser("quotient-forms", help="induced forms on flag quotients")
    common(p)
    p.add_argument("--step", type=int, default=None)
    p.set_defaults(fn=_cmd_quotient_forms)

    p = sub.add_parser("hierarchy", help="orbit-type recursion tree")
    common(p, need_element=False)
    p.set_defaults(fn=_cmd_hierarchy)

    p = sub.add_parser("table-e13", help="the fourteen orbit-type rows")
    p.add_argument("--format", default="json", choices=["json", "csv", "pretty"])
    p.set_defaults(fn=_cmd_table_e13)

    p = sub.add_parser("bijection-pair",
                       help="coadjoint representative bijected with an adjoint element")
    common(p)
    p.set_defaults(fn=_cmd_bijection_pair)

    p = sub.add_parser("verify", help="run a named identity suite")
    common(p, need_element=False)
    p.add_argument("--suite", required=True,
                   help="one of: all, " + ", ".join(suite_names()))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int,
                   default=int(os.environ.get("ORBITFORGE_SEED", "0")))
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("certificate", help="zigzag certificate for a bijected pair")
    common(p)
    p.add_argument("--seed", type=int,
                   default=int(os.environ.get("ORBITFORGE_SEED", "0")))
    p.set_defaults(fn=_cmd_certificate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rc = args.fn(args)
    except OrbitForgeError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        print(json.dumps({"error": "MalformedInput", "message": str(exc)}),
              file=sys.stderr)
        return 1
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
