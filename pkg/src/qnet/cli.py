"""``qnet`` command line.

Every command prints JSON.  Exit status is 0 on success, 1 for domain
errors (a prime N, exhausted retries, capacity) and 2 for usage or circuit
parse/validation errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import network as net
from .circuit import ParseError, parse_circuit
from .measure import bloch_of, make_rng, reduced_density
from .numtheory import gcd
from .shor import FactorConfig, FactoringError, OrderFindingError, find_order, run_factor_find
from .statevec import CapacityError

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _round(obj):
    """Floats to 15 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def dumps(obj, compact: bool = False) -> str:
    return json.dumps(_round(obj), indent=None if compact else 2, sort_keys=False)


def _load_network(path: str) -> net.Network:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    network = parse_circuit(text)
    problems = net.validate(network)
    if problems:
        raise UsageError("\n".join(str(p) for p in problems))
    return network


def cmd_simulate(args) -> dict:
    network = _load_network(args.path)
    trace = net.execute(network, make_rng(args.seed))
    return trace.to_json(dump_state=args.dump_state, include_checkpoints=args.checkpoints)


def cmd_parity(args) -> dict:
    for b in (args.bA, args.bB):
        if b not in (0, 1):
            raise UsageError("parity bits must be 0 or 1")
    box = net.parity_black_box(args.bA, args.bB)
    c_a, c_b = net.solve_parity(box, make_rng(args.seed))
    rep = net.resource_count(net.build_qparity())
    return {
        "b_A": c_a,
        "b_B": c_b,
        "gates": rep.gate_count,
        "oracle_calls": rep.oracle_calls,
        "depth": rep.parallel_depth,
    }


def cmd_order(args) -> dict:
    if not 1 < args.q < args.N:
        raise ValueError(f"need 1 < q < N, got q={args.q}, N={args.N}")
    if gcd(args.q, args.N) != 1:
        raise ValueError(f"gcd({args.q}, {args.N}) != 1; the order is undefined")
    res = find_order(args.q, args.N, make_rng(args.seed), args.backend, args.m)
    out = {"q": res.q, "N": res.N, "order": res.order, "backend": res.backend, "m": res.m, "attempts": res.attempts}
    if res.last is not None:
        out.update(measured_bits=res.last.measured_bits, a=res.last.a, fraction=str(res.last.fraction))
    return out


def cmd_factor(args) -> dict:
    config = FactorConfig(quantum_threshold=args.quantum_threshold, m=args.m)
    return run_factor_find(args.N, make_rng(args.seed), config).to_json()


def cmd_bloch(args) -> dict:
    network = _load_network(args.path)
    trace = net.execute(network, make_rng(args.seed))
    if args.qubit not in trace.final.labels:
        raise UsageError(f"no live qubit {args.qubit!r} at the end of the circuit")
    v = bloch_of(reduced_density(trace.final, args.qubit))
    return {"qubit": args.qubit, "x": v.x, "y": v.y, "z": v.z, "length": v.length()}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for the random generator (default 0)")
    common.add_argument("--json", action="store_true", help="single-line JSON instead of indented")

    p = argparse.ArgumentParser(prog="qnet", description="Labeled-qubit state-vector simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="run a circuit file")
    s.add_argument("path")
    s.add_argument("--dump-state", action="store_true", help="include the final state")
    s.add_argument("--checkpoints", action="store_true", help="include CHECK snapshots")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("parity", parents=[common], help="one-query parity algorithm")
    s.add_argument("bA", type=int)
    s.add_argument("bB", type=int)
    s.set_defaults(func=cmd_parity)

    s = sub.add_parser("order", parents=[common], help="multiplicative order of q mod N")
    s.add_argument("q", type=int)
    s.add_argument("N", type=int)
    s.add_argument("--backend", choices=("quantum", "classical"), default="quantum")
    s.add_argument("--m", type=int, default=None, help="ancilla count (default 2*ceil(log2 N))")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("factor", parents=[common], help="find a proper factor of N")
    s.add_argument("N", type=int)
    s.add_argument("--quantum-threshold", type=int, default=64, help="largest N simulated quantumly")
    s.add_argument("--m", type=int, default=None, help="ancilla count for the quantum backend")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("bloch", parents=[common], help="Bloch vector of one qubit after a circuit")
    s.add_argument("path")
    s.add_argument("--qubit", required=True)
    s.set_defaults(func=cmd_bloch)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "m", None) is not None and args.m < 1:
        print("error: --m must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        result = args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OrderFindingError, FactoringError, CapacityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    print(dumps(result, compact=args.json))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
