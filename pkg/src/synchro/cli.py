"""Command-line entry point: ``synchro <command> ...``.

Machines are given as ``.tdx`` paths, ``-`` for standard input, or
``catalog:NAME``.  Machines are written as ``.tdx``, single results as JSON
and series as CSV.  Exit status is 0 on success, 1 when a check fails and 2
for bad usage or unusable input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import catalog, experiments
from .algebra import (
    act_periodic,
    conjugate,
    level_transformation,
    min_core,
    minimize,
    normal_form_power,
    power,
    product,
)
from .errors import MachineError, SynchroError
from .growth import (
    dummy_active_state,
    dummy_active_state_closed_form,
    growth_series,
    sigma,
    solve_exponent_prefix,
)
from .sync import core, profile
from .transducer import PeriodicWord, Transducer, dual, invert, parse, serialize


class UsageError(Exception):
    pass


def load_machine(arg: str) -> Transducer:
    if arg.startswith("catalog:"):
        return catalog.resolve(arg[len("catalog:"):]).machine
    if arg == "-":
        return parse(sys.stdin.read())
    try:
        with open(arg, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror}") from None
    return parse(text)


def _bits(text: str) -> tuple[int, ...]:
    if text in ("", "e"):
        return ()
    if set(text) - {"0", "1"}:
        raise UsageError(f"expected a string of 0s and 1s, got {text!r}")
    return tuple(int(c) for c in text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- commands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        T = load_machine(args.machine)
    except MachineError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    print(f"ok: {T.size} states over {T.n} letters")
    return 0


def cmd_info(args) -> int:
    T = load_machine(args.machine)
    props = catalog.properties(T)
    props["classes"] = sorted(props["classes"])
    _emit(args, _json({"n": T.n, "labels": list(T.states), **props}))
    return 0


def cmd_profile(args) -> int:
    T = load_machine(args.machine)
    if args.command == "core" and args.tdx:
        _emit(args, serialize(core(T)))
        return 0
    _emit(args, _json(profile(T, with_map=False).to_json()))
    return 0


def cmd_min_core(args) -> int:
    _emit(args, serialize(min_core(load_machine(args.machine)).machine))
    return 0


def cmd_minimize(args) -> int:
    _emit(args, serialize(minimize(load_machine(args.machine))))
    return 0


def cmd_compose(args) -> int:
    T = product(load_machine(args.first), load_machine(args.second))
    _emit(args, serialize(T if args.raw else min_core(T).machine))
    return 0


def cmd_power(args) -> int:
    A = load_machine(args.machine)
    if args.m < 1:
        raise UsageError("-m must be at least 1")
    T = power(A, args.m) if args.raw else normal_form_power(A, args.m).machine
    _emit(args, serialize(T))
    return 0


def cmd_invert(args) -> int:
    _emit(args, serialize(invert(load_machine(args.machine))))
    return 0


def cmd_dual(args) -> int:
    _emit(args, serialize(dual(load_machine(args.machine))))
    return 0


def cmd_level_map(args) -> int:
    L = level_transformation(load_machine(args.machine), args.k)
    _emit(args, _json({"k": L.k, "mapping": L.as_dict()}))
    return 0


def cmd_act(args) -> int:
    T = load_machine(args.machine)
    try:
        w = PeriodicWord.from_string(args.cycle)
    except ValueError as exc:
        raise UsageError(f"bad --cycle: {exc}") from None
    _emit(args, _json({"cycle": str(w), "image": str(act_periodic(T, w))}))
    return 0


def cmd_conjugate(args) -> int:
    A = min_core(load_machine(args.machine))
    _emit(args, serialize(conjugate(A, load_machine(args.by)).machine))
    return 0


def cmd_growth(args) -> int:
    T = load_machine(args.machine)
    series = growth_series(T, args.max_power, name=args.machine)
    series.digest = experiments.digest(T)
    if args.format == "json":
        _emit(args, _json(series.to_json()))
    else:
        _emit(args, series.to_csv())
    return 0


def cmd_sigma(args) -> int:
    if args.i < 0:
        raise UsageError("I must be non-negative")
    _emit(args, _json({"i": args.i, "j": args.j, "value": sigma(args.i, args.j)}))
    return 0


def cmd_dummy_verify(args) -> int:
    cases = mismatches = 0
    first = None
    for r in range(args.max_i + 1):
        for x in itertools.product((0, 1), repeat=r):
            for k in range(1, args.k + 1):
                cases += 1
                if dummy_active_state(x, k) != dummy_active_state_closed_form(x, k):
                    mismatches += 1
                    first = first or {"input": "".join(map(str, x)), "k": k}
    _emit(args, _json({"cases": cases, "mismatches": mismatches, "first_mismatch": first}))
    return 0 if mismatches == 0 else 1


def cmd_dummy_state(args) -> int:
    x = _bits(args.bits)
    state = dummy_active_state(x, args.k)
    _emit(args, _json({"input": args.bits, "k": args.k,
                       "active_state": [f"s{i}^{j}" for i, j in state]}))
    return 0


def cmd_solve_prefix(args) -> int:
    y = _bits(args.bits)
    if not y:
        raise UsageError("BITS must be non-empty")
    x = solve_exponent_prefix(y)
    _emit(args, _json({"target": args.bits, "input": "".join(map(str, x))}))
    return 0


def cmd_catalog_list(args) -> int:
    for name in catalog.names():
        entry = catalog.builtin(name)
        print(f"{name:10} n={entry.machine.n} states={entry.machine.size:<3} {entry.source}")
    print("family-I   n=3 states=I+1 bi-synchronizing at level I")
    return 0


def cmd_catalog_get(args) -> int:
    _emit(args, serialize(catalog.resolve(args.name).machine))
    return 0


def cmd_catalog_family(args) -> int:
    if args.i < 1:
        raise UsageError("-i must be at least 1")
    _emit(args, serialize(catalog.bisync_family(args.i).machine))
    return 0


def cmd_verify(args) -> int:
    selection = "all" if args.suite == "all" else args.suite.split(",")
    chosen = experiments.names() if selection == "all" else selection
    unknown = [s for s in chosen if s not in experiments.names()]
    if unknown:
        raise UsageError(f"unknown experiments {unknown}; known: {', '.join(experiments.names())}")
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(experiments.run_experiment, chosen,
                                    itertools.repeat(args.seed)))
    else:
        reports = [experiments.run_experiment(name, args.seed) for name in chosen]
    if args.format == "json":
        _emit(args, _json([r.to_json() for r in reports]))
    else:
        _emit(args, "".join(r.summary() + "\n" for r in reports))
    return 0 if all(r.passed for r in reports) else 1


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("-o", "--out", help="write the result to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="synchro", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def machine_command(name, fn, help_text):
        p = sub.add_parser(name, parents=[out], help=help_text)
        p.add_argument("machine", help=".tdx file, '-' or catalog:NAME")
        p.set_defaults(func=fn)
        return p

    machine_command("validate", cmd_validate, "parse a machine and report problems")
    machine_command("info", cmd_info, "flags and classes of a machine (JSON)")
    for name in ("sync", "bisync", "coredist"):
        machine_command(name, cmd_profile, "synchronization profile (JSON)")
    p = machine_command("core", cmd_profile, "synchronization profile, or the core with --tdx")
    p.add_argument("--tdx", action="store_true", help="emit the core machine instead")
    machine_command("min-core", cmd_min_core, "minimal core normal form (.tdx)")
    machine_command("minimize", cmd_minimize, "merge omega-equivalent states (.tdx)")
    machine_command("invert", cmd_invert, "inverse machine (.tdx)")
    machine_command("dual", cmd_dual, "dual machine (.tdx)")

    p = sub.add_parser("compose", parents=[out], help="product A*B, reduced to min Core unless --raw")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--raw", action="store_true")
    p.set_defaults(func=cmd_compose)

    p = machine_command("power", cmd_power, "m-th power, reduced unless --raw")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--raw", action="store_true", help="build the unreduced product (capped)")

    p = machine_command("level-map", cmd_level_map, "induced map on words of length k (JSON)")
    p.add_argument("-k", type=int, required=True)

    p = machine_command("act", cmd_act, "image of a periodic point (JSON)")
    p.add_argument("--cycle", required=True, help="one period, e.g. 011 or 0,1,10")

    p = machine_command("conjugate", cmd_conjugate, "min Core(C^-1 * A * C) (.tdx)")
    p.add_argument("by", help="the conjugating machine C")

    p = machine_command("growth", cmd_growth, "core sizes of successive powers")
    p.add_argument("--max-power", type=int, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sigma", parents=[out], help="nested sum S(I, J) (JSON)")
    p.add_argument("i", type=int, metavar="I")
    p.add_argument("j", type=int, metavar="J")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("dummy", help="binary dummy machine tools")
    dsub = p.add_subparsers(dest="dummy_command", required=True, metavar="ACTION")
    q = dsub.add_parser("verify", parents=[out], help="closed form against simulation")
    q.add_argument("--max-i", type=int, default=10, help="longest input length")
    q.add_argument("--k", type=int, default=12, help="largest power")
    q.set_defaults(func=cmd_dummy_verify)
    q = dsub.add_parser("state", parents=[out], help="active state after reading BITS")
    q.add_argument("bits", metavar="BITS")
    q.add_argument("--k", type=int, required=True)
    q.set_defaults(func=cmd_dummy_state)

    p = sub.add_parser("solve-prefix", parents=[out], help="input realising exponent prefix BITS")
    p.add_argument("bits", metavar="BITS")
    p.set_defaults(func=cmd_solve_prefix)

    p = sub.add_parser("catalog", help="built-in machines")
    csub = p.add_subparsers(dest="catalog_command", required=True, metavar="ACTION")
    q = csub.add_parser("list", help="list entries")
    q.set_defaults(func=cmd_catalog_list)
    q = csub.add_parser("get", parents=[out], help="print an entry as .tdx")
    q.add_argument("name", metavar="NAME")
    q.set_defaults(func=cmd_catalog_get)
    q = csub.add_parser("family", parents=[out], help="bi-synchronizing machine of level I")
    q.add_argument("-i", type=int, required=True)
    q.set_defaults(func=cmd_catalog_family)

    p = sub.add_parser("verify", parents=[out], help="run the acceptance experiments")
    p.add_argument("--suite", default="all", help="'all' or a comma-separated list of experiments")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="run experiments in parallel processes")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, SynchroError, ValueError, KeyError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"synchro {args.command}: {message}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
