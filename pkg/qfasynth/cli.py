#!/usr/bin/env python3
"""
qfa_synth - MOD_p automaton circuit synthesis and verification

Usage:
    qfa_synth.py [--config FILE] [-v] <command> [options]

Commands:
    synth       Build the circuit for a^j with one strategy, print a JSON report
    verify      Compare a circuit file against the reference automaton or another file
    simulate    Run a circuit file on |0...0>, print the outcome distribution
    sweep       Acceptance / CNOT count / depth for j = 1..j_max as CSV
    search      Random search for a good K (or pseudo angle set)
    export      Convert a circuit file to OpenQASM 2.0

Exit codes:
    0 success, 1 verification failure, 2 usage error, 3 search exhausted

Environment:
    QFA_SYNTH_SEED       default seed for searches and noisy simulation
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from qfasynth.circuit import elaborate
from qfasynth import config
from qfasynth.config import load_settings
from qfasynth.errors import QfaSynthError
from qfasynth.lnn import default_initial_target
from qfasynth.matrix import max_phase_deviation
from qfasynth.model import QfaSpec, error_bound, program_matrix, search_k
from qfasynth.pipeline import (
    BASES, PSEUDO_STRATEGIES, STRATEGIES, SynthRequest, build, builder_for,
)
from qfasynth.pseudo import PseudoSpec, multiples_of, pseudo_profile, search_xi
from qfasynth.simulator import NoiseModel, simulate_noisy, sweep, write_csv
from qfasynth.textio import read_circuit, to_qasm, write_circuit

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3

EXAMPLES = """
Examples:
    # Mottonen ladder for p=5, K={1,2,3,4}
    qfa_synth.py synth --p 5 --k 1,2,3,4 --strategy mottonen --out ua.txt

    # Routed five-qubit MOD_37 circuit for a^1 in the hardware basis
    qfa_synth.py synth --p 37 --strategy lnn --n 5 --input-len 1 --basis rz

    # Same, with multiples listed per wire (target starts on wire 3)
    qfa_synth.py synth --p 37 --k 3,6,19,2,8 --wire-order --strategy lnn --basis rz

    # Check a circuit against the reference automaton
    qfa_synth.py verify --circuit ua.txt --against ua --p 5 --k 1,2,3,4

    # Noisy acceptance sweep
    qfa_synth.py sweep --p 37 --strategy lnn --j-max 75 --noise-rate 0.002 --shots 1000

    # Search K for d=8 with error at most 1/3
    qfa_synth.py search --p 37 --d 8 --eps 0.3334
"""


class UsageError(Exception):
    """Invalid flag combination"""


class SearchExhausted(Exception):
    """Search budget spent without a hit"""


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_spec_args(p):
    p.add_argument("--p", type=int, required=True, help="Prime modulus")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--k", type=_int_list,
                       help="K set, or pseudo angle multiples with xi_0 first (pseudo, lnn, lnn-swap)")
    group.add_argument("--k-seed", type=int, help="Seed for searching K when --k is absent")
    p.add_argument("--strategy", choices=STRATEGIES, help="Synthesis strategy (default from config)")
    p.add_argument("--d", type=int, default=8, help="Number of parallel automata when searching K (default: 8)")
    p.add_argument("--n", type=int, default=5, help="Qubits for pseudo/lnn strategies when searching (default: 5)")
    p.add_argument("--t", type=int, default=0, help="Hybrid recursion depth (default: 0)")
    p.add_argument("--residual", choices=("pair", "naive"), default="pair",
                   help="Hybrid residual expansion (default: pair)")
    p.add_argument("--target", type=int, help="Initial target wire for lnn strategies")
    p.add_argument("--wire-order", action="store_true",
                   help="Read pseudo --k per wire; the entry on the target wire is xi_0")
    p.add_argument("--no-merge", action="store_true", help="Do not merge ops across symbols (lnn)")
    p.add_argument("--frame", choices=("sx", "s"), default="sx", help="Target frame for lnn (default: sx)")
    p.add_argument("--basis", choices=BASES, default="ry", help="Output gate basis (default: ry)")
    p.add_argument("--eps", type=float, default=1 / 3, help="Error bound for searches (default: 1/3)")
    p.add_argument("--budget", type=int, help="Search trials (default from config)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qfa_synth.py",
        description="MOD_p automaton circuit synthesis and verification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EXAMPLES,
    )
    parser.add_argument("--config", help="YAML settings file")
    parser.add_argument("-v", "--verbose", action="store_true", help="Verbose logging")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="Synthesize a circuit")
    _add_spec_args(synth)
    synth.add_argument("--input-len", type=int, default=1, help="Input length j (default: 1)")
    synth.add_argument("--out", help="Write the circuit text file here")
    synth.add_argument("--report", help="Also write the JSON report here")
    synth.add_argument("--export-qasm", help="Write OpenQASM 2.0 here")

    verify = sub.add_parser("verify", help="Check unitary equivalence")
    verify.add_argument("--circuit", required=True, help="Circuit text file")
    verify.add_argument("--against", required=True, help="'ua' or another circuit file")
    verify.add_argument("--p", type=int, help="Modulus for --against ua")
    verify.add_argument("--k", type=_int_list, help="K set for --against ua")
    verify.add_argument("--input-len", type=int, default=1, help="Input length for --against ua (default: 1)")
    verify.add_argument("--tol", type=float, help="Max deviation (default from config)")

    simulate = sub.add_parser("simulate", help="Simulate a circuit file")
    simulate.add_argument("--circuit", required=True, help="Circuit text file")
    simulate.add_argument("--noise-rate", type=float, help="Per-CNOT depolarizing rate")
    simulate.add_argument("--shots", type=int, help="Trajectories for noisy runs")
    simulate.add_argument("--seed", type=int, help="Trajectory seed")

    sweep_p = sub.add_parser("sweep", help="Sweep input lengths")
    _add_spec_args(sweep_p)
    sweep_p.add_argument("--j-max", type=int, default=75, help="Largest input length (default: 75)")
    sweep_p.add_argument("--noise-rate", type=float, help="Per-CNOT depolarizing rate")
    sweep_p.add_argument("--shots", type=int, help="Trajectories per row for noisy sweeps")
    sweep_p.add_argument("--seed", type=int, help="Trajectory seed")
    sweep_p.add_argument("--out", help="CSV file (default: stdout)")

    search = sub.add_parser("search", help="Search parameters")
    search.add_argument("--p", type=int, required=True, help="Prime modulus")
    search.add_argument("--d", type=int, default=8, help="Number of parallel automata (default: 8)")
    search.add_argument("--eps", type=float, default=1 / 3, help="Target error bound (default: 1/3)")
    search.add_argument("--budget", type=int, help="Trials (default from config)")
    search.add_argument("--seed", type=int, help="Search seed")
    search.add_argument("--pseudo", action="store_true", help="Search pseudo angle sets instead of K")

    export = sub.add_parser("export", help="Convert a circuit file to OpenQASM 2.0")
    export.add_argument("--circuit", required=True, help="Circuit text file")
    export.add_argument("--out", help="QASM file (default: stdout)")
    return parser


def _emit(text, path=None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _json(data):
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def resolve_request(args, settings, j):
    """Turn parsed spec flags into a SynthRequest (searching when --k is absent)"""
    strategy = args.strategy or settings.strategy
    if args.t < 0:
        raise UsageError(f"--t must be >= 0, got {args.t}")
    if j < 0:
        raise UsageError(f"input length must be >= 0, got {j}")
    seed = settings.seed if args.k_seed is None else args.k_seed
    budget = settings.search_budget if args.budget is None else args.budget

    common = dict(strategy=strategy, j=j, t=args.t, residual=args.residual, basis=args.basis,
                  merge=not args.no_merge, frame=args.frame)

    if args.wire_order and (strategy not in PSEUDO_STRATEGIES or not args.k):
        raise UsageError("--wire-order needs --k and a pseudo strategy")

    if strategy not in PSEUDO_STRATEGIES:
        if args.k:
            spec = QfaSpec.padded(args.p, args.k)
        else:
            spec = search_k(args.p, args.d, args.eps, budget, seed)
            if spec is None:
                raise SearchExhausted(f"no K with epsilon <= {args.eps} within {budget} trials")
        return SynthRequest(spec=spec, **common)

    if args.k and args.wire_order:
        target = default_initial_target(len(args.k)) if args.target is None else args.target
        pspec = PseudoSpec.from_wire_multiples(args.p, args.k, target)
    elif args.k:
        pspec = PseudoSpec.from_multiples(args.p, args.k)
    else:
        if args.n < 2:
            raise UsageError(f"--n must be >= 2, got {args.n}")
        pspec = search_xi(args.p, 1 << (args.n - 1), args.eps, budget, seed)
        if pspec is None:
            raise SearchExhausted(f"no pseudo angles with epsilon <= {args.eps} within {budget} trials")
    return SynthRequest(pspec=pspec, target=args.target, **common)


def cmd_synth(args, settings):
    req = resolve_request(args, settings, args.input_len)
    built = build(req)
    report = _json(built.report.to_dict())
    if args.out:
        write_circuit(built.circuit, args.out)
    if args.export_qasm:
        Path(args.export_qasm).write_text(to_qasm(built.circuit))
    if args.report:
        Path(args.report).write_text(report)
    sys.stdout.write(report)
    return EXIT_OK


def cmd_verify(args, settings):
    circuit = read_circuit(args.circuit)
    tol = settings.tolerances.verify if args.tol is None else args.tol
    if args.against == "ua":
        if args.p is None or not args.k:
            raise UsageError("--against ua needs --p and --k")
        reference = program_matrix(QfaSpec.padded(args.p, args.k), args.input_len)
    else:
        reference = elaborate(read_circuit(args.against))

    actual = elaborate(circuit)
    if actual.shape != reference.shape:
        print(f"ERROR: dimension mismatch {actual.shape[0]} vs {reference.shape[0]}", file=sys.stderr)
        return EXIT_USAGE

    deviation = max_phase_deviation(actual, reference)
    if deviation <= tol:
        print(f"PASS: max deviation {deviation:.3e} <= {tol:g}")
        return EXIT_OK
    print(f"FAIL: max deviation {deviation:.3e} > {tol:g}")
    return EXIT_FAIL


def _noise(args, settings):
    return NoiseModel(
        cnot_depolarizing_rate=settings.noise_rate if args.noise_rate is None else args.noise_rate,
        shots=settings.shots if args.shots is None else args.shots,
        seed=settings.seed if args.seed is None else args.seed,
    )


def cmd_simulate(args, settings):
    circuit = read_circuit(args.circuit)
    try:
        nm = _noise(args, settings)
    except ValueError as e:
        raise UsageError(str(e)) from None
    result = simulate_noisy(circuit, nm)
    sys.stdout.write(_json(result.to_dict()))
    return EXIT_OK


def cmd_sweep(args, settings):
    if args.j_max < 0:
        raise UsageError(f"--j-max must be >= 0, got {args.j_max}")
    try:
        nm = _noise(args, settings)
    except ValueError as e:
        raise UsageError(str(e)) from None
    req = resolve_request(args, settings, 1)
    rows = sweep(builder_for(req), req.p, range(1, args.j_max + 1), nm, req.strategy)
    if args.out:
        with open(args.out, "w", newline="") as f:
            write_csv(rows, f)
    else:
        write_csv(rows, sys.stdout)
    return EXIT_OK


def cmd_search(args, settings):
    seed = settings.seed if args.seed is None else args.seed
    budget = settings.search_budget if args.budget is None else args.budget
    if args.pseudo:
        pspec = search_xi(args.p, args.d, args.eps, budget, seed)
        if pspec is None:
            raise SearchExhausted(f"no pseudo angles with epsilon <= {args.eps} within {budget} trials")
        eps = pseudo_profile(pspec).epsilon
        print(f"xi multiples: {','.join(str(m) for m in multiples_of(pspec))}")
    else:
        spec = search_k(args.p, args.d, args.eps, budget, seed)
        if spec is None:
            raise SearchExhausted(f"no K with epsilon <= {args.eps} within {budget} trials")
        eps = error_bound(spec)
        print(f"K: {','.join(str(k) for k in spec.ks)}")
    print(f"epsilon: {eps!r}")
    return EXIT_OK


def cmd_export(args, settings):
    _emit(to_qasm(read_circuit(args.circuit)), args.out)
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "search": cmd_search,
    "export": cmd_export,
}


def run(argv=None):
    """Parse arguments and dispatch; returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        settings = load_settings(args.config)
        config.activate(settings)
        return COMMANDS[args.command](args, settings)
    except SearchExhausted as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (UsageError, QfaSynthError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
