"""Command-line entry point: ``quanuml <subcommand> ...``.

Exit codes: 0 success, 1 diagnostics or pipeline errors, 2 usage errors.
Payload goes to stdout and diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import emitters, library, metrics, shor, simulator
from .lowering import LoweringError, lower
from .model import Model, ResolveError
from .parser import ParseError, parse, pretty_print
from .validator import diagnostics_json, has_errors, validate


class UsageError(Exception):
    pass


class _Failure(Exception):
    """Abort a subcommand with exit code 1 after printing to stderr."""


def _load(location: str, err) -> Model:
    try:
        text, display = library.read_source(location)
    except library.UnknownExample:
        raise UsageError(f"unknown example {location!r}; try 'examples list'") from None
    except OSError as exc:
        raise UsageError(f"cannot read {location}: {exc.strerror}") from None
    try:
        return parse(text, display)
    except ParseError as exc:
        s = exc.span
        print(f"{s.file}:{s.start_line}:{s.start_col}: error[parse]: {exc.message}", file=err)
        raise _Failure from None


def _checked(location: str, err) -> Model:
    model = _load(location, err)
    try:
        diags = validate(model)
    except ResolveError as exc:
        s = exc.span
        print(f"{s.file}:{s.start_line}:{s.start_col}: error[resolve]: {exc.message}", file=err)
        raise _Failure from None
    for d in diags:
        print(d.render(), file=err)
    if has_errors(diags):
        raise _Failure
    return model


def _pick_diagram(model: Model, name: str | None, top_level: bool) -> str:
    if name is not None:
        if name not in {s.name for s in model.sequences}:
            raise UsageError(f"no sequence diagram named {name!r}")
        return name
    pool = model.top_level_diagrams() if top_level else list(model.sequences)
    if len(pool) == 1:
        return pool[0].name
    choices = ", ".join(s.name for s in pool)
    raise UsageError(f"--seq is required; choose one of: {choices}")


def _cmd_check(args, out, err) -> int:
    model = _load(args.file, err)
    try:
        diags = validate(model)
    except ResolveError as exc:
        s = exc.span
        print(f"{s.file}:{s.start_line}:{s.start_col}: error[resolve]: {exc.message}", file=err)
        return 1
    if args.json:
        out.write(diagnostics_json(diags))
    else:
        for d in diags:
            print(d.render(), file=err)
    return 1 if has_errors(diags) else 0


def _cmd_fmt(args, out, err) -> int:
    out.write(pretty_print(_load(args.file, err)))
    return 0


def _cmd_render(args, out, err) -> int:
    model = _checked(args.file, err)
    out.write(emitters.emit_diagram_text(model, _pick_diagram(model, args.seq, top_level=False)))
    return 0


def _cmd_compile(args, out, err) -> int:
    model = _checked(args.file, err)
    ir = lower(model, _pick_diagram(model, args.seq, top_level=True))
    text = emitters.emit_qasm3(ir) if args.target == "qasm3" else emitters.emit_ir_json(ir)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_sim(args, out, err) -> int:
    model = _checked(args.file, err)
    ir = lower(model, _pick_diagram(model, args.seq, top_level=True))
    if args.shots is not None:
        if args.exact:
            raise UsageError("--exact and --shots are mutually exclusive")
        if args.shots < 1:
            raise UsageError("--shots must be at least 1")
        counts = simulator.sample(ir, args.shots, args.seed)
        out.write(simulator.distribution_json(counts) if args.json else simulator.format_counts(counts))
    else:
        dist = simulator.distribution(simulator.run_exact(ir))
        out.write(simulator.distribution_json(dist) if args.json else simulator.format_distribution(dist))
    return 0


def _cmd_metrics(args, out, err) -> int:
    model = _checked(args.file, err)
    cmp = metrics.compare(model, _pick_diagram(model, args.seq, top_level=False))
    out.write(metrics.comparison_json(cmp) if args.json else metrics.format_comparison(cmp))
    return 0


def _cmd_shor(args, out, err) -> int:
    backend = shor.make_backend(args.backend)
    try:
        result = shor.factor(args.n, x=args.x, seed=args.seed, backend=backend)
    except (shor.UnsupportedModulus, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    out.write(shor.format_result(result))
    return 0


def _cmd_examples(args, out, err) -> int:
    if args.action == "list":
        for name in library.example_names():
            out.write(name + "\n")
    elif args.action == "show":
        if not args.target:
            raise UsageError("examples show needs a name")
        try:
            out.write(library.example_text(args.target))
        except library.UnknownExample:
            raise UsageError(f"unknown example {args.target!r}") from None
    else:
        if not args.target:
            raise UsageError("examples export needs a directory")
        for path in library.export_examples(args.target):
            out.write(f"{path}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quanuml", description="QuanUML model compiler")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and validate a model")
    c.add_argument("file")
    c.add_argument("--json", action="store_true", help="print diagnostics as JSON on stdout")
    c.set_defaults(func=_cmd_check)

    c = sub.add_parser("fmt", help="print a model in canonical form")
    c.add_argument("file")
    c.set_defaults(func=_cmd_fmt)

    c = sub.add_parser("render", help="emit PlantUML sequence-diagram text")
    c.add_argument("file")
    c.add_argument("--seq")
    c.set_defaults(func=_cmd_render)

    c = sub.add_parser("compile", help="lower a diagram and emit code")
    c.add_argument("file")
    c.add_argument("--seq")
    c.add_argument("--target", choices=["qasm3", "ir-json"], default="qasm3")
    c.add_argument("-o", "--output")
    c.set_defaults(func=_cmd_compile)

    c = sub.add_parser("sim", help="simulate a diagram")
    c.add_argument("file")
    c.add_argument("--seq")
    c.add_argument("--exact", action="store_true", help="exact branch enumeration (default)")
    c.add_argument("--shots", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_sim)

    c = sub.add_parser("metrics", help="element counts versus the UML-profile baseline")
    c.add_argument("file")
    c.add_argument("--seq")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=_cmd_metrics)

    c = sub.add_parser("shor", help="factor N with Shor's algorithm")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--x", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--backend", choices=["sim", "oracle"], default="sim")
    c.set_defaults(func=_cmd_shor)

    c = sub.add_parser("examples", help="bundled example models")
    c.add_argument("action", nargs="?", choices=["list", "show", "export"], default="list")
    c.add_argument("target", nargs="?")
    c.set_defaults(func=_cmd_examples)
    return p


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except UsageError as exc:
        print(f"quanuml: error: {exc}", file=err)
        return 2
    except _Failure:
        return 1
    except (LoweringError, simulator.SimulationError, ResolveError) as exc:
        print(f"error: {exc}", file=err)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
