"""Command-line interface.

Exit codes: 0 analysis completed (whatever the verdict), 1 input error,
2 resource budget exceeded, 3 internal contradiction between provably
equivalent tests.  Reports are deterministic: identical inputs produce
byte-identical JSON.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .corpus import CHART_FILES, OPERATOR_FILES, OPERATORS, SYSTEM_FILES
from .dmod import (ContradictionError, ZeroModuleError, bernstein_check,
                   decompose_symbol_ideal, fuchs_kashiwara_equivalence,
                   is_holonomic, kashiwara_regular_at,
                   characteristic_variety_univar)
from .ideals import BudgetExceeded, DEFAULT_BUDGET, krull_dimension
from .operators import UnivarOperator
from .parser import (ParseError, format_operator, parse_operator,
                     parse_polynomial, parse_ratfun, parse_weyl_generators)
from .polelattice import (LogLattice, NCChart, goodness_scan,
                          pole_filtration_annihilator, prop21_inclusion,
                          theorem_backward_extraction,
                          theorem_forward_filtration, theta_XZ_ideal)
from .polynomials import INF
from .regularity import (INFINITY, IRREGULAR, REGULAR, fuchs_regular_at,
                         newton_polygon, regular_on_projective_line,
                         theta_regular_at_zero)
from .systems import ConnectionSystem, cyclic_vector, regular_system_report
from .weyl import characteristic_ideal, coordinate_names

SCHEMA_VERSION = "dreg-report/1"


class InputError(ValueError):
    pass


def parse_point(text: str):
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return INFINITY
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read point {text!r}: {exc}") from None


def _report(command: str, inputs: dict, verdicts: list, certificates: list,
            transcripts: list, summary: dict | None = None) -> dict:
    report = {
        "schema": SCHEMA_VERSION,
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "verdicts": verdicts,
        "certificates": certificates,
        "transcripts": transcripts,
    }
    if summary is not None:
        report["summary"] = summary
    return report


def _read_source(args) -> str:
    if getattr(args, "file", None):
        path = Path(args.file)
        if not path.exists():
            raise InputError(f"no such file: {path}")
        lines = [ln for ln in path.read_text().splitlines()
                 if ln.strip() and not ln.lstrip().startswith("#")]
        return "\n".join(lines)
    if getattr(args, "expression", None):
        return args.expression
    raise InputError("provide an inline expression or --file")


def _operator(args) -> UnivarOperator:
    p = parse_operator(_read_source(args))
    if p.is_zero():
        raise InputError("the zero operator has no analysis")
    return p


# -- verb implementations -------------------------------------------------


def cmd_fuchs(args) -> dict:
    p = _operator(args)
    if args.point is None:
        report = regular_on_projective_line(p)
        return _report("fuchs", {"operator": format_operator(p)},
                       [{"method": "fuchs", "point": "projective line",
                         "verdict": report.verdict}],
                       [e.to_dict() for e in report.points], [])
    point = parse_point(args.point)
    cert = fuchs_regular_at(p, point)
    return _report("fuchs",
                   {"operator": format_operator(p), "point": str(point)},
                   [{"method": "fuchs", "point": str(point), "verdict": cert.verdict}],
                   [cert.to_dict()], [])


def cmd_theta(args) -> dict:
    p = _operator(args)
    ok, witness = theta_regular_at_zero(p)
    verdict = REGULAR if ok else IRREGULAR
    return _report("theta", {"operator": format_operator(p)},
                   [{"method": "theta", "point": "0", "verdict": verdict}],
                   [{"theta_form": str(witness)}], [])


def cmd_newton(args) -> dict:
    p = _operator(args)
    point = parse_point(args.point or "0")
    np_ = newton_polygon(p, point)
    verdict = REGULAR if list(np_.slopes) == [Fraction(0)] else IRREGULAR
    return _report("newton",
                   {"operator": format_operator(p), "point": str(point)},
                   [{"method": "newton", "point": str(point), "verdict": verdict}],
                   [np_.to_dict()], [])


def cmd_kashiwara(args) -> dict:
    p = _operator(args)
    point = parse_point(args.point or "0")
    cert = kashiwara_regular_at(p, point)
    verdict = REGULAR if cert.regular else IRREGULAR
    return _report("kashiwara",
                   {"operator": format_operator(p), "point": str(point)},
                   [{"method": "kashiwara", "point": str(point), "verdict": verdict}],
                   [cert.to_dict()], [])


def cmd_compare(args) -> dict:
    p = _operator(args)
    point = parse_point(args.point or "0")
    rep = fuchs_kashiwara_equivalence(p, point)
    f, k = rep.verdicts
    report = _report(
        "compare", {"operator": format_operator(p), "point": str(point)},
        [{"method": "fuchs", "point": str(point), "verdict": f},
         {"method": "kashiwara", "point": str(point), "verdict": k},
         {"method": "agreement", "point": str(point),
          "verdict": "agree" if rep.agree else "disagree"}],
        [rep.to_dict()], [],
        summary={"fuchs": f, "kashiwara": k, "agree": rep.agree})
    if not rep.agree:
        raise ContradictionError("Fuchs and Kashiwara verdicts disagree",
                                 details=report)
    return report


def _ring_vars(args) -> tuple:
    if args.vars:
        return tuple(v.strip() for v in args.vars.split(",") if v.strip())
    return ("x",)


def cmd_charvar(args) -> dict:
    variables = _ring_vars(args)
    gens = parse_weyl_generators(_read_source(args), variables)
    n = len(variables)
    ideal = characteristic_ideal(gens, budget=args.budget)
    cv = decompose_symbol_ideal(ideal, n, budget=args.budget)
    dim = krull_dimension(ideal, budget=args.budget)
    verdicts = [{"method": "charvar", "verdict": f"{len(cv.components)} components"},
                {"method": "dimension", "verdict": str(dim)},
                {"method": "holonomic",
                 "verdict": str(is_holonomic(ideal, n, args.budget))},
                {"method": "bernstein",
                 "verdict": str(bernstein_check(ideal, n, args.budget))}]
    return _report("charvar",
                   {"generators": [str(g) for g in gens],
                    "vars": list(variables)},
                   verdicts, [cv.to_dict()], [])


def cmd_holonomic(args) -> dict:
    variables = _ring_vars(args)
    gens = parse_weyl_generators(_read_source(args), variables)
    n = len(variables)
    ideal = characteristic_ideal(gens, budget=args.budget)
    dim = krull_dimension(ideal, budget=args.budget)
    return _report("holonomic",
                   {"generators": [str(g) for g in gens], "vars": list(variables)},
                   [{"method": "dimension", "verdict": str(dim)},
                    {"method": "holonomic",
                     "verdict": str(is_holonomic(ideal, n, args.budget))},
                    {"method": "bernstein",
                     "verdict": str(bernstein_check(ideal, n, args.budget))}],
                   [{"characteristic_ideal": [str(g) for g in ideal.gens]}], [])


def cmd_polelattice(args) -> dict:
    chart = NCChart(args.n, args.r)
    rep = pole_filtration_annihilator(chart, args.bound)
    good, transcript = goodness_scan(chart, args.bound)
    incl = prop21_inclusion(None, chart, min(args.bound, 4))
    from .ideals import is_radical_squarefree_monomial
    verdicts = [
        {"method": "annihilator", "verdict":
            "matches" if rep.matches_ideal else "mismatch"},
        {"method": "radical", "verdict":
            str(is_radical_squarefree_monomial(rep.ideal))},
        {"method": "goodness", "verdict": str(good)},
        {"method": "inclusion", "verdict": str(incl.holds)},
    ]
    return _report("polelattice", {"n": args.n, "r": args.r, "bound": args.bound},
                   verdicts, [rep.to_dict()],
                   [{"goodness": transcript[:50]}, incl.to_dict()])


def _read_chart_file(path: str):
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {p}")
    lines = [ln.strip() for ln in p.read_text().splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    header = {}
    idx = 0
    while idx < len(lines) and lines[idx].split()[0] in ("n", "r", "rank"):
        key, value = lines[idx].split()
        header[key] = int(value)
        idx += 1
    for key in ("n", "r", "rank"):
        if key not in header:
            raise InputError(f"chart file is missing the {key!r} header")
    n, r, rank = header["n"], header["r"], header["rank"]
    coords = coordinate_names(n)
    gammas = []
    for l in range(n):
        if idx >= len(lines) or not lines[idx].startswith("gamma"):
            raise InputError(f"expected 'gamma {l+1}' block in {p}")
        idx += 1
        rows = []
        for _ in range(rank):
            if idx >= len(lines):
                raise InputError(f"chart file ended inside gamma block {l+1}")
            entries = [parse_polynomial(cell, coords)
                       for cell in lines[idx].split(";")]
            if len(entries) != rank:
                raise InputError(f"gamma row has {len(entries)} entries, expected {rank}")
            rows.append(entries)
            idx += 1
        gammas.append(rows)
    chart = NCChart(n, r)
    return chart, LogLattice(chart, rank, gammas)


def cmd_theorem(args) -> dict:
    if args.backward is not None:
        p = parse_operator(args.backward)
        rep = theorem_backward_extraction(p, args.pole_bound)
        return _report("theorem",
                       {"direction": "backward", "operator": format_operator(p),
                        "pole_bound": args.pole_bound},
                       [{"method": "backward-extraction", "verdict": rep.verdict}],
                       [rep.to_dict()], [])
    if not args.file:
        raise InputError("theorem needs --file CHART or --backward EXPR")
    chart, lattice = _read_chart_file(args.file)
    rep = theorem_forward_filtration(lattice, chart, args.bound)
    return _report("theorem",
                   {"direction": "forward", "file": args.file,
                    "n": chart.n, "r": chart.r, "rank": lattice.rank},
                   [{"method": "forward-filtration",
                     "verdict": "certified" if rep.certified else "failed"}],
                   [rep.to_dict()], [])


def _read_system_file(path: str) -> ConnectionSystem:
    p = Path(path)
    if not p.exists():
        raise InputError(f"no such file: {p}")
    lines = [ln.strip() for ln in p.read_text().splitlines()
             if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("rank"):
        raise InputError("system file must start with 'rank m'")
    rank = int(lines[0].split()[1])
    if len(lines) != rank + 1:
        raise InputError(f"expected {rank} matrix rows, found {len(lines) - 1}")
    matrix = []
    for ln in lines[1:]:
        entries = [parse_ratfun(cell) for cell in ln.split(";")]
        if len(entries) != rank:
            raise InputError(f"matrix row has {len(entries)} entries, expected {rank}")
        matrix.append(entries)
    return ConnectionSystem(matrix)


def cmd_system(args) -> dict:
    system = _read_system_file(args.file)
    rep = regular_system_report(system, args.max_steps)
    verdicts = [{"method": "system", "verdict": rep.verdict}]
    for pt in rep.points:
        verdicts.append({"method": "fuchs", "point": str(pt.point),
                         "verdict": pt.fuchs.verdict})
        verdicts.append({"method": "saturation", "point": str(pt.point),
                         "verdict": pt.saturation.status})
    return _report("system", {"file": args.file, "rank": system.rank},
                   verdicts, [rep.to_dict()],
                   [cyclic_vector(system).to_dict()])


def cmd_corpus(args) -> dict:
    if args.emit:
        target = Path(args.emit)
        target.mkdir(parents=True, exist_ok=True)
        for name, content in {**OPERATOR_FILES, **SYSTEM_FILES, **CHART_FILES}.items():
            (target / name).write_text(content)
        return _report("corpus", {"emit": str(target)},
                       [{"method": "corpus", "verdict":
                         f"wrote {len(OPERATOR_FILES) + len(SYSTEM_FILES) + len(CHART_FILES)} files"}],
                       [], [])
    entries = [{"name": e.name, "expression": e.expression,
                "description": e.description,
                "expected": e.global_verdict} for e in OPERATORS]
    return _report("corpus", {}, [{"method": "corpus",
                                   "verdict": f"{len(entries)} operators"}],
                   entries, [])


# -- rendering & dispatch --------------------------------------------------------


def render_text(report: dict) -> str:
    lines = [f"dreg {report['tool_version']} — {report['command']}"]
    for key, value in report["inputs"].items():
        lines.append(f"  {key}: {value}")
    for v in report["verdicts"]:
        point = f" at {v['point']}" if "point" in v else ""
        lines.append(f"{v['method']}{point}: {v['verdict']}")
    return "\n".join(lines)


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dreg",
        description="Exact regularity analyses for differential operators, "
                    "connection systems and pole lattices")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(sp, expression=True):
        if expression:
            sp.add_argument("expression", nargs="?", help="inline expression")
            sp.add_argument("--file", help="read the expression from a file")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="work budget for basis computations")

    sp = sub.add_parser("fuchs", help="Fuchs order criterion")
    common(sp)
    sp.add_argument("--point", help="rational point or 'inf' (default: all of P^1)")
    sp.set_defaults(fn=cmd_fuchs)

    sp = sub.add_parser("theta", help="Euler-form coefficient criterion at 0")
    common(sp)
    sp.set_defaults(fn=cmd_theta)

    sp = sub.add_parser("newton", help="Newton polygon slopes")
    common(sp)
    sp.add_argument("--point", help="rational point or 'inf' (default 0)")
    sp.set_defaults(fn=cmd_newton)

    sp = sub.add_parser("kashiwara", help="graded-annihilator criterion")
    common(sp)
    sp.add_argument("--point", help="rational point or 'inf' (default 0)")
    sp.set_defaults(fn=cmd_kashiwara)

    sp = sub.add_parser("compare", help="run both criteria and compare")
    common(sp)
    sp.add_argument("--point", help="rational point or 'inf' (default 0)")
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("charvar", help="characteristic variety of a left ideal")
    common(sp)
    sp.add_argument("--vars", help="comma-separated coordinates, e.g. x,y")
    sp.set_defaults(fn=cmd_charvar)

    sp = sub.add_parser("holonomic", help="dimension and holonomicity checks")
    common(sp)
    sp.add_argument("--vars", help="comma-separated coordinates")
    sp.set_defaults(fn=cmd_holonomic)

    sp = sub.add_parser("polelattice", help="pole-order filtration certificates")
    common(sp, expression=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--bound", type=int, default=6)
    sp.set_defaults(fn=cmd_polelattice)

    sp = sub.add_parser("theorem", help="comparison-theorem certificates")
    common(sp, expression=False)
    sp.add_argument("--file", help="chart file for the forward direction")
    sp.add_argument("--bound", type=int, default=4)
    sp.add_argument("--backward", help="operator for the backward direction")
    sp.add_argument("--pole-bound", type=int, default=3)
    sp.set_defaults(fn=cmd_theorem)

    sp = sub.add_parser("system", help="connection-system regularity report")
    common(sp, expression=False)
    sp.add_argument("--file", required=True, help=".sys matrix file")
    sp.add_argument("--max-steps", type=int, default=None)
    sp.set_defaults(fn=cmd_system)

    sp = sub.add_parser("corpus", help="list or emit the example corpus")
    common(sp, expression=False)
    sp.add_argument("--emit", help="write corpus files into a directory")
    sp.set_defaults(fn=cmd_corpus)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        report = args.fn(args)
    except (ParseError, InputError, ZeroModuleError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ContradictionError as exc:
        print(f"internal contradiction: {exc}", file=sys.stderr)
        if exc.details:
            print(json.dumps(exc.details, sort_keys=True, indent=2), file=sys.stderr)
        return 3
    if args.format == "json":
        print(render_json(report))
    else:
        print(render_text(report))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
