"""Command-line front end.

Exit codes: 0 success / proof accepted, 1 proof rejected, 2 parse error,
3 enumeration budget exceeded, 64 usage error, 65 bad input data,
66 missing file.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import __version__
from .axioms import AxiomName, axiom_formula, main_instance, sep_instance, sub_instance, SchemeError
from .expander import ExpandError, expand_finite_family
from .kernel import check_proof, load_proof_script
from .parser import ParseError, load_formula_file, parse_formula, print_formula
from .semantics import (
    BudgetExceededError,
    DEFAULT_BUDGET,
    Env,
    EvalError,
    RankUniverse,
    eval_formula,
    find_countermodel,
    model_spec_text,
    parse_model_spec,
)

EX_OK = 0
EX_REJECTED = 1
EX_PARSE = 2
EX_BUDGET = 3
EX_USAGE = 64
EX_DATA = 65
EX_NOINPUT = 66


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _out(text: str) -> None:
    sys.stdout.write(text.rstrip("\n") + "\n")


def _err(text: str) -> None:
    sys.stderr.write(text.rstrip("\n") + "\n")


def _read_formula(path_text: str):
    path = Path(path_text)
    if not path.exists():
        raise FileNotFoundError(path_text)
    return load_formula_file(path)


def _read_model(spec: str):
    inline = re.fullmatch(r"vrank:(\d+)", spec)
    if inline:
        return RankUniverse(int(inline.group(1)))
    path = Path(spec)
    if not path.exists():
        raise FileNotFoundError(spec)
    return parse_model_spec(path.read_text(encoding="utf-8"))


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="fastset", description=__doc__)
    top.add_argument("--version", action="version", version=f"fastset {__version__}")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fmt", help="print the canonical form of a formula file")
    p.add_argument("file")

    p = sub.add_parser("axiom", help="print an axiom")
    p.add_argument("name", choices=[n.value for n in AxiomName])
    p.add_argument("--print", dest="do_print", action="store_true", required=True)

    p = sub.add_parser("check", help="check a proof script")
    p.add_argument("file")

    p = sub.add_parser("eval", help="evaluate a formula in a finite model")
    p.add_argument("--model", required=True, help="model spec file, or vrank:<k>")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("file")

    p = sub.add_parser("expand", help="eliminate family binders over literal index sets")
    p.add_argument("file")

    p = sub.add_parser("countermodel", help="search digraph models falsifying a formula")
    p.add_argument("--max-size", type=int, required=True, choices=range(0, 5))
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("file")

    p = sub.add_parser("scheme", help="print a scheme instance for a parameter formula")
    p.add_argument("kind", choices=["sep", "sub", "main"])
    p.add_argument("--phi", required=True, help="parameter formula file")
    p.add_argument("--vars", required=True, help="distinguished variable(s), comma separated")
    return top


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        _err(f"usage error: {exc}")
        return EX_USAGE

    try:
        if args.command == "fmt":
            _out(print_formula(_read_formula(args.file)))
            return EX_OK
        if args.command == "axiom":
            _out(print_formula(axiom_formula(AxiomName(args.name))))
            return EX_OK
        if args.command == "check":
            path = Path(args.file)
            if not path.exists():
                raise FileNotFoundError(args.file)
            verdict = check_proof(load_proof_script(path))
            if verdict:
                _out("accepted")
                return EX_OK
            _out(f"rejected {verdict.line_no} {verdict.code.value}")
            _err(f"line {verdict.line_no}: {verdict.detail}")
            return EX_REJECTED
        if args.command == "eval":
            model = _read_model(args.model)
            phi = _read_formula(args.file)
            value = eval_formula(model, Env(), phi, budget=args.budget)
            _out("true" if value else "false")
            return EX_OK
        if args.command == "expand":
            _out(print_formula(expand_finite_family(_read_formula(args.file))))
            return EX_OK
        if args.command == "countermodel":
            phi = _read_formula(args.file)
            model = find_countermodel(phi, args.max_size, budget=args.budget)
            _out("none" if model is None else model_spec_text(model))
            return EX_OK
        if args.command == "scheme":
            phi = _read_formula(args.phi)
            names = [v.strip() for v in args.vars.split(",") if v.strip()]
            if args.kind == "sep":
                if len(names) != 1:
                    raise SchemeError("sep takes one distinguished variable")
                inst = sep_instance(phi, names[0])
            else:
                if len(names) != 2:
                    raise SchemeError(f"{args.kind} takes two distinguished variables")
                builder = sub_instance if args.kind == "sub" else main_instance
                inst = builder(phi, names[0], names[1])
            _out(print_formula(inst))
            return EX_OK
        raise AssertionError(args.command)
    except FileNotFoundError as exc:
        _err(f"missing file: {exc}")
        return EX_NOINPUT
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return EX_PARSE
    except BudgetExceededError as exc:
        _err(str(exc))
        return EX_BUDGET
    except (ExpandError, SchemeError, EvalError, ValueError) as exc:
        _err(f"error: {exc}")
        return EX_DATA


def entry_point() -> None:
    sys.exit(main())
