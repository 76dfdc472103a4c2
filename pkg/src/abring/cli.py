"""Command-line front end.

Exit codes: 0 ok, 1 usage error, 2 verification failure, 3 I/O error.
"""
import argparse
import json
import logging
import math
import sys

from . import kernels
from .eigensystem import Branch, bethe_state, eigen_coefficients, singular_state
from .equivalence import verify_equivalence
from .errors import AbringError, InvalidParameter
from .params import ModelParams, singularity_locus
from .scattering import max_phase_shift, phase_profile
from .suites import SUITES, run_suite
from .sweep import FORMATS, QUANTITIES, SweepConfig, emit, parse_number, run_sweep

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("abring")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _print_json(obj):
    print(json.dumps(obj, indent=1, default=str))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="abring", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sw = sub.add_parser("sweep", help="evaluate a (gamma, phi, k) grid and write CSV/JSON")
    sw.add_argument("--config", help="JSON file with sweep settings; flags override it")
    sw.add_argument("--quantity", choices=QUANTITIES)
    sw.add_argument("--gamma", help="value, a,b,c list or lo:hi:count")
    sw.add_argument("--phi", help="value, a,b,c list or lo:hi:count")
    sw.add_argument("--k", help="value, a,b,c list or lo:hi:count")
    sw.add_argument("--grid", type=int, help="phi samples for max_phase_shift (default 10000)")
    sw.add_argument("-o", "--output", help="output path (default stdout)")
    sw.add_argument("--format", choices=FORMATS)

    lo = sub.add_parser("locus", help="singular fluxes phi_c for a given gamma")
    lo.add_argument("--gamma", required=True)

    ps = sub.add_parser("phase-shift", help="maximal phase shift and lapse events")
    ps.add_argument("--k", required=True)
    ps.add_argument("--gamma", required=True)
    ps.add_argument("--grid", type=int, default=10_000)
    ps.add_argument("--profile-points", type=int, default=2001,
                    help="grid used for lapse-event detection over [0, pi/2]")

    ve = sub.add_parser("verify", help="run numerical verification suites")
    ve.add_argument("suite_pos", nargs="?", metavar="SUITE", choices=sorted(SUITES) + ["all"])
    ve.add_argument("--suite", choices=sorted(SUITES) + ["all"])
    ve.add_argument("--n", type=int, default=20, help="lattice size for the equivalence suite")
    ve.add_argument("--gamma", help="single gamma for the equivalence suite")

    eq = sub.add_parser("equivalence", help="check the phi = pi/4 unitary equivalences")
    eq.add_argument("--n", type=int, default=20)
    eq.add_argument("--gamma", required=True)

    sd = sub.add_parser("state-dump", help="write an eigenstate as JSON [{site, re, im}]")
    sd.add_argument("--branch", required=True, choices=[b.value for b in Branch])
    sd.add_argument("--gamma", default="1")
    sd.add_argument("--phi", default="pi/4")
    sd.add_argument("--k", default="pi/2", help="wavenumber (Bethe branches only)")
    sd.add_argument("--n", type=int, default=60)
    sd.add_argument("--alpha", default="1,0", help="incoming spinor alpha-,alpha+ (complex allowed)")
    sd.add_argument("-o", "--output")
    return parser


def _sweep_config(args) -> SweepConfig:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise InvalidParameter("config file must hold a JSON object")
    for name in ("quantity", "gamma", "phi", "k", "grid", "output", "format"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if "quantity" not in data:
        raise UsageError("abring sweep: error: --quantity is required (flag or config)")
    return SweepConfig.from_mapping(data)


def parse_cli(argv) -> SweepConfig:
    """Parse ``sweep`` arguments (with or without the leading subcommand)."""
    argv = list(argv)
    if not argv or argv[0] != "sweep":
        argv = ["sweep"] + argv
    return _sweep_config(build_parser().parse_args(argv))


def cmd_sweep(args):
    cfg = _sweep_config(args)
    rows = run_sweep(cfg)
    emit(rows, cfg.format, cfg.output)
    gaps = sum(getattr(r, "flag", "ok") != "ok" for r in rows)
    log.info("wrote %d rows (%d singular gaps) with backend %s", len(rows), gaps, kernels.BACKEND)
    return EXIT_OK


def cmd_locus(args):
    _print_json({"phi_c": singularity_locus(parse_number(args.gamma))})
    return EXIT_OK


def cmd_phase_shift(args):
    k, g = parse_number(args.k), parse_number(args.gamma)
    prof = phase_profile(k, g, (0.0, math.pi / 2), args.profile_points)
    shift = max_phase_shift(k, g, n=args.grid)
    _print_json({
        "k": k, "gamma": g,
        "delta_omega": None if math.isnan(shift) else shift,
        "lapse_events": [{"phi": a, "jump": b} for a, b in prof.lapse_events],
        "node_events": [{"phi": a, "jump": b} for a, b in prof.node_events],
    })
    return EXIT_OK


def cmd_verify(args):
    suite = args.suite or args.suite_pos or "all"
    if suite == "equivalence" and args.gamma is not None:
        result = run_suite(suite, n=args.n, gammas=(parse_number(args.gamma),))
    elif suite == "equivalence":
        result = run_suite(suite, n=args.n)
    else:
        result = run_suite(suite)
    _print_json(result)
    return EXIT_OK if all(r["passed"] for r in result.values()) else EXIT_VERIFY


def cmd_equivalence(args):
    report = verify_equivalence(args.n, parse_number(args.gamma))
    _print_json(dict(report.__dict__, passed=bool(report.passed())))
    return EXIT_OK if report.passed() else EXIT_VERIFY


def cmd_state_dump(args):
    branch = Branch(args.branch)
    g, phi = parse_number(args.gamma), parse_number(args.phi)
    if branch.value.endswith(("plus", "minus")):
        state = singular_state(1 if branch.value.endswith("plus") else -1, branch.barred, args.n, g, phi)
    else:
        parts = [complex(x.replace(" ", "")) for x in args.alpha.split(",")]
        if len(parts) != 2:
            raise InvalidParameter("--alpha needs two comma-separated entries")
        p = ModelParams(g, phi, parse_number(args.k), args.n)
        state = bethe_state(p, eigen_coefficients(p, *parts), branch)
    text = state.to_json() + "\n"
    if args.output:
        with open(args.output, "w", newline="\n", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "sweep": cmd_sweep,
    "locus": cmd_locus,
    "phase-shift": cmd_phase_shift,
    "verify": cmd_verify,
    "equivalence": cmd_equivalence,
    "state-dump": cmd_state_dump,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"abring: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidParameter, ValueError) as exc:
        print(f"abring {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AbringError as exc:
        print(f"abring {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
