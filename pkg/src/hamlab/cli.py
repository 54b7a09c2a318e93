"""Command-line entry point: ``hamlab {gen,solve,sweep,analyze,oracle}``."""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import experiments as ex
from .generators import FAMILIES, GenerationError, InstanceSpec
from .graph import Graph, GraphFormatError, parse_edge_list, write_edge_list
from .pruning import forced_degree_parity_test, small_cutset_scan
from .solver import Outcome, SearchConfig, brute_force_oracle, solve

EXIT_HC, EXIT_NONHAM, EXIT_TIMEOUT, EXIT_BAD_INPUT, EXIT_USAGE = 0, 1, 2, 3, 4

_EXIT = {Outcome.HAMILTONIAN: EXIT_HC, Outcome.NONHAMILTONIAN: EXIT_NONHAM,
         Outcome.TIMEOUT: EXIT_TIMEOUT}

_FAMILY_FLAGS = {"n": int, "m": int, "k": str, "p3": float, "version": int, "a": int,
                 "b": int, "rows": int, "cols": int, "s": int}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _BadInput(Exception):
    pass


def default_seed() -> int:
    return int(os.environ.get("HAMLAB_SEED", "0"))


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="ascii") as fh:
            return fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise _BadInput(str(exc)) from None


def _load_graph(args) -> Graph:
    if getattr(args, "spec", None):
        return InstanceSpec.parse(args.spec).build()
    if not args.input:
        raise _BadInput("give an edge-list file (or - for stdin) or --spec")
    try:
        return parse_edge_list(_read_text(args.input))
    except GraphFormatError as exc:
        raise _BadInput(str(exc)) from None


def _add_family_flags(p: argparse.ArgumentParser, as_grid: bool = False) -> None:
    p.add_argument("--family", choices=sorted(FAMILIES))
    for name, conv in _FAMILY_FLAGS.items():
        p.add_argument(f"--{name}", type=str if as_grid else conv, default=None,
                       help="value list a,b,c or range lo:hi:step" if as_grid else None)


def _family_params(args) -> dict:
    return {k: getattr(args, k) for k in FAMILIES[args.family] if getattr(args, k) is not None}


# ------------------------------------------------------------------- gen


def cmd_gen(args) -> int:
    if args.spec:
        spec = InstanceSpec.parse(args.spec)
    else:
        if not args.family:
            raise ValueError("gen needs --family or --spec")
        seed = args.seed if args.seed is not None else default_seed()
        spec = InstanceSpec.make(args.family, seed=seed, **_family_params(args))
    g = spec.build()
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="ascii") as fh:
            write_edge_list(g, fh, header=f"spec={spec}")
    else:
        write_edge_list(g, sys.stdout, header=f"spec={spec}")
    return 0


# ----------------------------------------------------------------- solve

_CHECKS = {"none": (False, False), "components": (True, False),
           "cutpoints": (False, True), "both": (True, True)}


def _config(args) -> SearchConfig:
    comp, cut = _CHECKS[args.checks]
    return SearchConfig(heuristic=args.heuristic, restarts=not args.no_restart,
                        multiplier=args.multiplier, node_limit=args.node_limit,
                        time_limit=args.time_limit, check_components=comp,
                        check_cutpoints=cut, start_vertex=args.start, seed=args.seed)


def cmd_solve(args) -> int:
    if args.seed is None:
        args.seed = default_seed()
    g = _load_graph(args)
    cfg = _config(args)
    print(f"# seed={cfg.seed}", file=sys.stderr)
    out, stats = solve(g, cfg)
    if out.kind is Outcome.HAMILTONIAN:
        print("HC " + " ".join(map(str, out.cycle)))
    elif out.kind is Outcome.NONHAMILTONIAN:
        print(f"NONHAM {out.reason} {stats.phase}")
    else:
        print("TIMEOUT")
    print(f"nodes={stats.nodes} restarts={stats.restarts} ms={stats.ms}")
    return _EXIT[out.kind]


def cmd_oracle(args) -> int:
    g = _load_graph(args)
    cycle = brute_force_oracle(g)
    if cycle is None:
        print("NONHAM")
        return EXIT_NONHAM
    print("HC " + " ".join(map(str, cycle)))
    return EXIT_HC


# ----------------------------------------------------------------- sweep


def cmd_sweep(args) -> int:
    settings: dict[str, str] = {}
    if args.config:
        settings.update(ex.parse_config(_read_text(args.config)))
    if args.family:
        settings["family"] = args.family
    for name in _FAMILY_FLAGS:
        val = getattr(args, name)
        if val is not None:
            settings[name] = str(val)
    for key in ("trials", "heuristic", "multiplier", "node_limit", "time_limit", "checks"):
        val = getattr(args, key)
        if val is not None:
            settings[key] = str(val)
    if args.no_restart:
        settings["restarts"] = "false"
    for item in args.overrides:
        key, sep, val = item.partition("=")
        if not sep:
            raise ValueError(f"override {item!r} is not key=value")
        settings[key.strip().replace("-", "_")] = val.strip()
    if args.seed is not None:
        settings["seed"] = str(args.seed)
    settings.setdefault("seed", str(default_seed()))

    spec = ex.sweep_from_settings(settings)
    print(f"# seed={spec.master_seed}", file=sys.stderr)
    progress = None if args.quiet else ex.progress_printer(len(spec))
    records = ex.run_sweep(spec, workers=args.workers)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="ascii", newline="") as fh:
            ex.write_csv(records, fh, timing=args.timing, progress=progress)
    else:
        ex.write_csv(records, sys.stdout, timing=args.timing, progress=progress)
    return 0


# --------------------------------------------------------------- analyze


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    ran = False
    if args.parity:
        print(forced_degree_parity_test(g).describe())
        ran = True
    if args.cutset:
        print(small_cutset_scan(g, args.cutset).describe())
        ran = True
    if args.count_3d2:
        print(f"3d2={ex.count_3d2(g)}")
        ran = True
    if args.theory:
        mean = 2 * g.m / g.n
        print(f"n={g.n} m={g.m} mean_degree={mean:.4f} "
              f"p_ham_asymptotic={ex.ham_probability_theory(g.n, g.m):.4f}")
        ran = True
    if not ran:
        raise ValueError("choose at least one of --parity, --cutset, --count-3d2, --theory")
    return 0


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamlab", description="Exact Hamiltonian-cycle toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate an instance as an edge list")
    _add_family_flags(p)
    p.add_argument("--spec", help="full spec string, e.g. gnm:n=100,m=322,seed=42")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    def solver_flags(q):
        q.add_argument("input", nargs="?", help="edge-list file, - for stdin")
        q.add_argument("--spec", help="generate the instance from a spec string instead")

    p = sub.add_parser("solve", help="decide Hamiltonicity")
    solver_flags(p)
    p.add_argument("--heuristic", choices=["low", "high", "random"], default="low")
    p.add_argument("--no-restart", action="store_true")
    p.add_argument("--multiplier", type=float, default=2.0)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--checks", choices=sorted(_CHECKS), default="none")
    p.add_argument("--start", type=int, help="fixed start vertex (default: random per attempt)")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force answer for n <= 12")
    solver_flags(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="run a parameter sweep, CSV out")
    p.add_argument("--config", help="flat key = value file")
    _add_family_flags(p, as_grid=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--heuristic", choices=["low", "high", "random"])
    p.add_argument("--no-restart", action="store_true")
    p.add_argument("--multiplier", type=float)
    p.add_argument("--node-limit", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--checks", choices=sorted(_CHECKS))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the ms column (not reproducible)")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("-o", "--output")
    p.add_argument("overrides", nargs="*", metavar="key=value")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("analyze", help="certificates and counts for one graph")
    solver_flags(p)
    p.add_argument("--parity", action="store_true", help="forced-degree parity test")
    p.add_argument("--cutset", type=int, choices=[1, 2, 3], help="scan vertex cuts up to this size")
    p.add_argument("--count-3d2", action="store_true")
    p.add_argument("--theory", action="store_true", help="asymptotic Hamiltonicity probability")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _BadInput as exc:
        print(f"hamlab: bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ValueError, GenerationError) as exc:
        print(f"hamlab: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
