"""Command-line front end: parse documents, run checks, emit reports.

Exit codes: 0 when every requested check passes, 1 when at least one
fails, 2 for usage/parse/internal errors.  Machine format emits one
JSON object per report (or one result object) per line and is
byte-stable modulo the timing field.  Text output uses ANSI verdict
colors only on a TTY and never when NO_COLOR is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .algebra import UniverseError
from .dsl import ParseError, parse_document, print_document, Decl
from .fab import (
    finite_direct_limit,
    transition_multiplier,
    validate_limit_sequence,
    validate_stable_chain,
)
from .fgl import OrdinaryFGL, fgl_inverse, verify_fgl
from .hopf import verify_hopf
from .hopffgl import (
    ConstructionError,
    PreconditionError,
    epsilon_reduce,
    extend_hopf,
    extract_extension_constraints,
    g_series,
    solve_theta,
    trivial_extension,
    verify_condition1,
    verify_condition2,
    verify_g_property,
)
from .series import SeriesError

DEFAULT_HOPF_CUTOFF = 6


class _Output:
    def __init__(self, format):
        self.format = format
        self.color = (
            format == "text"
            and sys.stdout.isatty()
            and not os.environ.get("NO_COLOR")
        )
        self.exit_code = 0

    def report(self, rep):
        if not rep.passed:
            self.exit_code = 1
        if self.format == "machine":
            print(rep.to_machine())
        else:
            print(rep.to_text(color=self.color))

    def result(self, command, subject, result, **extra):
        if self.format == "machine":
            obj = {"command": command, "subject": subject, "result": result}
            obj.update(extra)
            print(json.dumps(obj, separators=(",", ":")))
        else:
            print(result)


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_document(fh.read())


def _named(doc, name, kinds):
    try:
        return doc.lookup(name, kinds)
    except KeyError as err:
        raise SystemExit(f"error: {err.args[0]}")


def _apply_trunc(series, trunc):
    if trunc is None:
        return series
    if trunc > series.cutoff:
        raise SystemExit(
            f"error: --trunc {trunc} exceeds the declared trunc {series.cutoff}"
        )
    return series.truncate(trunc)


def _hopffgl_at(doc, name, trunc):
    decl = _named(doc, name, ("hopffgl",))
    G = decl.obj
    if trunc is not None:
        series = _apply_trunc(G.series, trunc)
        G = G.with_series(series)
    return G


SKIP_ALIASES = {
    "1": "condition1", "2": "condition2", "3": "condition3",
    "cond1": "condition1", "cond2": "condition2", "cond3": "condition3",
    "condition1": "condition1", "condition2": "condition2",
    "condition3": "condition3",
}


def _cmd_parse(args, out):
    doc = _load(args.file)
    text = print_document(doc)
    if out.format == "machine":
        out.result("parse", args.file, text)
    else:
        sys.stdout.write(text)


def _cmd_check_hopf(args, out):
    doc = _load(args.file)
    decl = _named(doc, args.name, ("hopf",))
    cutoff = args.trunc if args.trunc is not None else DEFAULT_HOPF_CUTOFF
    out.report(verify_hopf(decl.obj, cutoff))


def _cmd_check_fgl(args, out):
    doc = _load(args.file)
    decl = _named(doc, args.name, ("series",))
    series = _apply_trunc(decl.obj, args.trunc)
    out.report(verify_fgl(OrdinaryFGL(args.name, series)))


def _cmd_check_hopffgl(args, out):
    doc = _load(args.file)
    G = _hopffgl_at(doc, args.name, args.trunc)
    skipped = {SKIP_ALIASES[s] for s in (args.skip or [])}
    if "condition1" not in skipped:
        out.report(verify_condition1(G))
    if "condition2" not in skipped:
        out.report(verify_condition2(G))
    if "condition3" not in skipped:
        _, rep = solve_theta(G, check_conditions=False)
        out.report(rep)


def _cmd_inverse(args, out):
    doc = _load(args.file)
    decl = _named(doc, args.name, ("series",))
    theta = fgl_inverse(OrdinaryFGL(args.name, decl.obj))
    out.result("inverse", args.name, theta.canonical_str())


def _cmd_theta(args, out):
    doc = _load(args.file)
    G = _hopffgl_at(doc, args.name, None)
    for rep in (verify_condition1(G), verify_condition2(G)):
        if not rep.passed:
            out.report(rep)
            return
    theta, rep = solve_theta(G, check_conditions=False)
    out.report(rep)
    if theta is not None:
        out.result("theta", args.name, theta.canonical_str())


def _cmd_reduce(args, out):
    doc = _load(args.file)
    G = _hopffgl_at(doc, args.name, None)
    reduced = epsilon_reduce(G)
    out.result("reduce", args.name, reduced.series.canonical_str())


def _cmd_trivial_extend(args, out):
    doc = _load(args.file)
    fgl_decl = _named(doc, args.fgl, ("series",))
    hopf_decl = _named(doc, args.hopf, ("hopf",))
    new_name = f"{args.fgl}_{args.hopf}"
    if new_name in doc.symbols:
        raise SystemExit(f"error: name {new_name!r} already declared")
    G = trivial_extension(
        OrdinaryFGL(args.fgl, fgl_decl.obj), hopf_decl.obj, name=new_name
    )
    doc.add(Decl("hopffgl", new_name, G, over=args.hopf))
    text = print_document(doc)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    out.result("trivial-extend", new_name, new_name, out_file=args.out)


def _cmd_extend_hopf(args, out):
    doc = _load(args.file)
    G = _hopffgl_at(doc, args.name, args.trunc)
    _, rep = extend_hopf(G)
    out.report(rep)


def _cmd_gseries(args, out):
    doc = _load(args.file)
    G = _hopffgl_at(doc, args.name, None)
    out.result("gseries", args.name, g_series(G).series.canonical_str())


def _cmd_gproperty(args, out):
    doc = _load(args.file)
    G = _hopffgl_at(doc, args.name, args.trunc)
    out.report(verify_g_property(G))


def _cmd_constraints(args, out):
    doc = _load(args.file)
    decl = _named(doc, args.name, ("hopf",))
    system = extract_extension_constraints(decl.obj, args.max_degree)
    if out.format == "machine":
        obj = {
            "command": "constraints",
            "subject": args.name,
            "unknowns": system.unknowns,
            "constraints": [
                {"location": list(c.location), "relation": c.relation.canonical_str()}
                for c in system.constraints
            ],
            "solved": {
                k: system.solved[k].canonical_str() for k in sorted(system.solved)
            },
            "reduced": [
                {"location": list(c.location), "relation": c.relation.canonical_str()}
                for c in system.reduced
            ],
        }
        print(json.dumps(obj, separators=(",", ":")))
    else:
        print(f"unknowns: {', '.join(system.unknowns) or '(none)'}")
        for c in system.constraints:
            print(f"  {c}")
        if system.solved:
            print("solved:")
            for k in sorted(system.solved):
                print(f"  {k} = {system.solved[k].canonical_str()}")
        if system.reduced:
            print("reduced system:")
            for c in system.reduced:
                print(f"  {c}")


def _cmd_fab_multiplier(args, out):
    value = transition_multiplier(args.k, args.l, args.m, args.n)
    out.result("fab-multiplier", f"{args.k},{args.l},{args.m},{args.n}", value)


def _cmd_fab_chain(args, out):
    doc = _load(args.file)
    decl = _named(doc, args.name, ("chain",))
    chain = decl.obj
    if args.mode == "limit":
        rep = validate_limit_sequence(chain)
        if rep.passed:
            multipliers = [
                transition_multiplier(*chain.pairs[i], *chain.pairs[i + 1])
                for i in range(len(chain.pairs) - 1)
            ]
            rep.notes.append(
                f"finite direct limit: {finite_direct_limit(multipliers).describe()}"
            )
        out.report(rep)
    else:
        out.report(validate_stable_chain(chain, chain.pairs[0], chain.pairs[-1]))


def _cmd_fab_limit(args, out):
    group = finite_direct_limit(args.multipliers)
    if out.format == "machine":
        obj = {
            "command": "fab-limit",
            "subject": ",".join(str(a) for a in args.multipliers),
            "result": {
                "kind": group.kind,
                "denominator": group.denominator,
                "inverted_primes": sorted(group.inverted_primes),
            },
        }
        print(json.dumps(obj, separators=(",", ":")))
    else:
        print(group.describe())


def _build_parser():
    p = argparse.ArgumentParser(
        prog="hopffg",
        description="Exact checks for formal groups over Hopf algebras",
    )
    p.add_argument(
        "--format", choices=("text", "machine"), default="text",
        help="report format (machine = one JSON object per line)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", help="parse and reprint canonically")
    sp.add_argument("file")
    sp.set_defaults(fn=_cmd_parse)

    check = sub.add_parser("check", help="run verification checks")
    csub = check.add_subparsers(dest="target", required=True)
    for target, fn, with_skip in (
        ("hopf", _cmd_check_hopf, False),
        ("fgl", _cmd_check_fgl, False),
        ("hopffgl", _cmd_check_hopffgl, True),
    ):
        cp = csub.add_parser(target)
        cp.add_argument("file")
        cp.add_argument("--name", required=True)
        cp.add_argument("--trunc", type=int)
        if with_skip:
            cp.add_argument(
                "--skip", action="append", choices=sorted(SKIP_ALIASES),
                help="skip one of the three conditions",
            )
        cp.set_defaults(fn=fn)

    for cmd, fn, extra in (
        ("inverse", _cmd_inverse, ()),
        ("theta", _cmd_theta, ()),
        ("reduce", _cmd_reduce, ()),
        ("extend-hopf", _cmd_extend_hopf, ("trunc",)),
        ("gseries", _cmd_gseries, ()),
        ("gproperty", _cmd_gproperty, ("trunc",)),
    ):
        cp = sub.add_parser(cmd)
        cp.add_argument("file")
        cp.add_argument("--name", required=True)
        if "trunc" in extra:
            cp.add_argument("--trunc", type=int)
        cp.set_defaults(fn=fn)

    cp = sub.add_parser("trivial-extend", help="lift an ordinary law over a Hopf algebra")
    cp.add_argument("file")
    cp.add_argument("--fgl", required=True)
    cp.add_argument("--hopf", required=True)
    cp.add_argument("--out", required=True)
    cp.set_defaults(fn=_cmd_trivial_extend)

    cp = sub.add_parser("constraints", help="generic extension constraint system")
    cp.add_argument("file")
    cp.add_argument("--name", required=True)
    cp.add_argument("--max-degree", type=int, required=True)
    cp.set_defaults(fn=_cmd_constraints)

    fab = sub.add_parser("fab", help="gcd/limit arithmetic")
    fsub = fab.add_subparsers(dest="target", required=True)
    fm = fsub.add_parser("multiplier")
    for arg in ("k", "l", "m", "n"):
        fm.add_argument(arg, type=int)
    fm.set_defaults(fn=_cmd_fab_multiplier)
    fc = fsub.add_parser("chain")
    fc.add_argument("file")
    fc.add_argument("--name", required=True)
    fc.add_argument("--mode", choices=("limit", "stable"), required=True)
    fc.set_defaults(fn=_cmd_fab_chain)
    fl = fsub.add_parser("limit")
    fl.add_argument("multipliers", nargs="*", type=int)
    fl.set_defaults(fn=_cmd_fab_limit)

    return p


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.format)
    try:
        args.fn(args, out)
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ParseError as err:
        fname = getattr(args, "file", "<input>")
        print(f"{fname}:{err}", file=sys.stderr)
        return 2
    except SystemExit as err:
        if isinstance(err.code, str):
            print(err.code, file=sys.stderr)
            return 2
        raise
    except (
        ConstructionError,
        PreconditionError,
        SeriesError,
        UniverseError,
        ValueError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return out.exit_code


if __name__ == "__main__":
    sys.exit(main())
