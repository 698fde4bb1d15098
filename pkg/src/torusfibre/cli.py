"""Command-line front end: ``torusfibre reduce | count-fibre | selfcheck``.

Exit codes:

    0  success (ReachedTarget; --expect-gap satisfied)
    1  --expect-gap given but the gap is not positive or some branch failed
    2  usage, JSON parse or schema error
    3  GcdObstruction
    4  NonProportionalLeading
    5  FloorExhausted
    6  ZeroResidual
    7  BelowTarget
    8  field extension required (missing root of unity or coefficient root)
    9  any other library error, or a failing selfcheck
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Optional

from . import __version__, selfcheck
from .errors import FieldExtensionRequired, TorusFibreError
from .instance import Instance, InstanceError, build, parse_text
from .reduction import (
    BELOW_TARGET,
    FLOOR_EXHAUSTED,
    GCD_OBSTRUCTION,
    NON_PROPORTIONAL,
    REACHED_TARGET,
    ZERO_RESIDUAL,
    ReductionResult,
    reduce_full,
    reduction_from_w,
)
from .serialize import digest, dumps
from .torus_solver import FibreReport, TorusSpec, count_fibre

EXIT_OK = 0
EXIT_GAP = 1
EXIT_USAGE = 2
EXIT_FIELD = 8
EXIT_OTHER = 9

STATUS_EXIT = {
    REACHED_TARGET: EXIT_OK,
    GCD_OBSTRUCTION: 3,
    NON_PROPORTIONAL: 4,
    FLOOR_EXHAUSTED: 5,
    ZERO_RESIDUAL: 6,
    BELOW_TARGET: 7,
}


class UsageError(Exception):
    pass


def _level(text: str) -> Fraction:
    try:
        s = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad level {text!r}, expected p/q") from None
    if s <= 0:
        raise argparse.ArgumentTypeError("level must be positive")
    return s


def _field(text: str) -> str:
    if text in ("rational", "gaussian"):
        return text
    if text.startswith("cyclotomic:") and text.split(":", 1)[1].isdigit() and int(text.split(":", 1)[1]) > 0:
        return text
    raise argparse.ArgumentTypeError(f"bad field {text!r}, expected rational|gaussian|cyclotomic:K")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="torusfibre", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"torusfibre {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("instance", help="instance JSON file, or - for stdin")
        sp.add_argument("--floor", type=int, help="truncation floor for f (overrides the instance)")
        sp.add_argument("--field", type=_field, help="rational | gaussian | cyclotomic:K")
        sp.add_argument("--max-steps", type=int, help="reduction step guard")
        sp.add_argument("--report", choices=("json", "text"), default="json")
        sp.add_argument("--out", help="write the report here instead of stdout")

    r = sub.add_parser("reduce", help="reduce f against roots of g")
    common(r)
    c = sub.add_parser("count-fibre", help="count torus solutions branch by branch")
    common(c)
    c.add_argument("--level", type=_level, help="torus level s as p/q (overrides the instance)")
    c.add_argument("--budget", type=int, help="Hensel valuation budget (overrides the instance)")
    c.add_argument("--expect-gap", action="store_true",
                   help="exit 1 unless every branch finished and claimed - total > 0")
    s = sub.add_parser("selfcheck", help="run the embedded invariant suite")
    s.add_argument("--corrupt-binomial-cache", action="store_true", help=argparse.SUPPRESS)
    return p


def _read_instance(args) -> tuple[Instance, str]:
    try:
        if args.instance == "-":
            raw = sys.stdin.buffer.read()
        else:
            with open(args.instance, "rb") as fh:
                raw = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.instance}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError:
        raise UsageError("instance is not UTF-8") from None
    try:
        data = parse_text(text)
        inst = build(data, floor=args.floor, field_override=args.field)
    except InstanceError as exc:
        raise UsageError(str(exc)) from None
    return inst, digest(raw)


def _reduce(inst: Instance, max_steps: Optional[int]) -> ReductionResult:
    if inst.w is not None:
        return reduction_from_w(inst.f, inst.g, inst.w)
    return reduce_full(inst.f, inst.g, max_steps=max_steps)


def _envelope(command: str, inst: Instance, input_digest: str, options: dict) -> dict:
    return {"tool": "torusfibre", "version": __version__, "command": command,
            "instance": inst.name, "field": inst.field.descriptor, "input_digest": input_digest,
            "options": options}


def _text_reduction(red: ReductionResult) -> list[str]:
    w = " + ".join(f"{c}*T^{e}" for e, c in sorted(red.w.terms.items(), reverse=True)) or "0"
    lines = [f"status          {red.status}",
             f"W(T)            {w}   (evaluated at g^(1/{red.k_tilde}))",
             f"k_tilde, k      {red.k_tilde}, {red.k}",
             f"target degree   {red.target_degree}"]
    if red.residual_leading is not None:
        lf = red.residual_leading
        mons = ", ".join(f"{c} X^{i} Y^{j}" for (i, j), c in lf.monomials)
        lines.append(f"residual lead   {mons}  (degree {lf.degree})")
    for n, st in enumerate(red.trace, 1):
        after = "zero" if st.degree_after is None else f"degree {st.degree_after}"
        lines.append(f"step {n:<3}        c={st.c} l={st.l} k'={st.k} -> {after}")
    for b in red.branch_residuals:
        lines.append(f"branch {b.i} residual degree {b.degree}")
    if red.message:
        lines.append(f"note            {red.message}")
    return lines


def _text_fibre(rep: FibreReport) -> list[str]:
    lines = []
    for b in rep.branches:
        state = "feasible" if b.feasible else "infeasible"
        v = b.verdict
        extra = "" if v is None else f" v(rhs)={v.to_json()['valuation']} vs {v.expected}"
        lines.append(f"branch {b.i}: {state}{extra}, seeds {b.seed_count}, lifted {len(b.lifted)}"
                     + (f" [{b.error}]" if b.error else ""))
    lines.append(f"total {rep.total_count}, claimed {rep.claimed_count}, gap {rep.gap}"
                 + ("" if rep.complete else " (incomplete: some branch failed)"))
    return lines


def _emit(args, payload: dict, text_lines: list[str], elapsed: float) -> None:
    if args.report == "json":
        out = dumps(payload)
    else:
        out = "\n".join(text_lines + [f"elapsed         {elapsed:.3f} s"]) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def cmd_reduce(args) -> int:
    start = time.perf_counter()
    inst, dig = _read_instance(args)
    red = _reduce(inst, args.max_steps)
    payload = _envelope("reduce", inst, dig, {"floor": args.floor, "max_steps": args.max_steps})
    payload["reduction"] = red.to_json()
    _emit(args, payload, _text_reduction(red), time.perf_counter() - start)
    return STATUS_EXIT.get(red.status, EXIT_OTHER)


def cmd_count_fibre(args) -> int:
    start = time.perf_counter()
    inst, dig = _read_instance(args)
    red = _reduce(inst, args.max_steps)
    level = args.level if args.level is not None else inst.level
    budget = args.budget if args.budget is not None else inst.budget
    payload = _envelope("count-fibre", inst, dig, {"floor": args.floor, "level": str(level),
                                                    "budget": budget, "max_steps": args.max_steps})
    payload["reduction"] = red.to_json()
    if red.status != REACHED_TARGET:
        payload["fibre"] = None
        _emit(args, payload, _text_reduction(red), time.perf_counter() - start)
        return STATUS_EXIT.get(red.status, EXIT_OTHER)
    spec = TorusSpec.standard(inst.field, level, red.k)
    rep = count_fibre(inst.f, inst.g, red, spec, budget)
    payload["fibre"] = rep.to_json()
    _emit(args, payload, _text_reduction(red) + _text_fibre(rep), time.perf_counter() - start)
    if args.expect_gap and not (rep.complete and rep.gap > 0):
        return EXIT_GAP
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    results = selfcheck.run(corrupt_binomial=args.corrupt_binomial_cache)
    sys.stdout.write(selfcheck.format_table(results))
    return EXIT_OK if all(ok for _, ok in results) else EXIT_OTHER


COMMANDS = {"reduce": cmd_reduce, "count-fibre": cmd_count_fibre, "selfcheck": cmd_selfcheck}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"torusfibre: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FieldExtensionRequired as exc:
        print(f"torusfibre: field-extension-required (order {exc.order}): {exc}", file=sys.stderr)
        return EXIT_FIELD
    except (TorusFibreError, ValueError, RuntimeError, ZeroDivisionError) as exc:
        print(f"torusfibre: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
