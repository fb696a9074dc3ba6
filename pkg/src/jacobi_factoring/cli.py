"""Command-line entry point.

Every command writes one JSON report to stdout and a short summary to
stderr. Exit codes: 0 ok, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Any, Optional

from . import verify
from .circuit import SimParams, run_algorithm1
from .engine import EngineConfig, jacobi_streamed
from .factoring import (
    ClassicalOracle,
    QuantumSimOracle,
    default_repetitions,
    select_candidate,
    special_factor,
)
from .numtheory import jacobi_reference

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class Report:
    command: str
    inputs: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, Any] = field(default_factory=dict)
    counters: dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "inputs": self.inputs,
                "outputs": self.outputs,
                "counters": self.counters,
                "seed": self.seed,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))


class UsageError(Exception):
    pass


def _big(v: int) -> str:
    # integers travel as decimal strings so nothing downstream rounds them
    return str(v)


def cmd_jacobi(args) -> tuple[Report, int]:
    if args.modulus < 3 or args.modulus % 2 == 0:
        raise UsageError("--modulus must be odd and >= 3")
    if args.x < 1:
        raise UsageError("--x must be positive")
    if args.block_bits < 1:
        raise UsageError("--block-bits must be >= 1")
    value, cost = jacobi_streamed(args.x, args.modulus, EngineConfig(block_bits=args.block_bits))
    rep = Report(
        "jacobi",
        inputs={"x": _big(args.x), "modulus": _big(args.modulus), "block_bits": args.block_bits},
        outputs={"value": value},
        counters=cost.as_dict(),
    )
    code = EXIT_OK
    if args.check:
        ref = jacobi_reference(args.x, args.modulus)
        rep.outputs["reference"] = ref
        rep.outputs["match"] = ref == value
        code = EXIT_OK if ref == value else EXIT_FAIL
    print(f"jacobi({args.x} / {args.modulus}) = {value}", file=sys.stderr)
    return rep, code


def cmd_factor(args) -> tuple[Report, int]:
    if args.n < 3 or args.n % 2 == 0:
        raise UsageError("--n must be odd and >= 3")
    try:
        params = SimParams(
            args.n,
            args.bmax,
            ell=args.ell,
            small_prime_cutoff=args.cutoff,
            zero_phase=args.zero_phase,
            mode=args.mode,
            shots=args.shots,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sim = run_algorithm1(params)
    outputs: dict[str, Any] = {
        "A": _big(sim.A),
        "B": _big(sim.B),
        "success_channel": sim.squarefull,
        "success_prob": sim.success_prob,
        "useful_prob": sim.useful_prob,
        "recovered": {_big(k): v for k, v in sim.recovered.items()},
        "successful_y_count": sim.successful_y_count,
        "min_successful_amp_ratio": sim.min_successful_amp_ratio,
        "early_prime": None if sim.early_prime is None else _big(sim.early_prime),
    }
    if sim.samples is not None:
        outputs["outcomes"] = [{"y": y, "output": _big(o)} for y, o in sim.samples]
        value, _ = select_candidate(args.n, [o for _, o in sim.samples])
        outputs["recovered_value"] = _big(value)
    rep = Report(
        "factor",
        inputs={
            "n": _big(args.n),
            "bmax": _big(args.bmax),
            "ell": params.ell,
            "mode": args.mode,
            "shots": args.shots,
            "cutoff": args.cutoff,
            "zero_phase": args.zero_phase,
        },
        outputs=outputs,
        seed=args.seed,
    )
    if not sim.squarefull:
        print(f"{args.n}: no success channel (A={sim.A}, B={sim.B})", file=sys.stderr)
    else:
        print(f"{args.n}: P[output = B = {sim.B}] = {sim.success_prob:.6f}", file=sys.stderr)
    return rep, EXIT_OK


def cmd_special_factor(args) -> tuple[Report, int]:
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    if args.T is not None and args.T < 1:
        raise UsageError("-T must be >= 1")
    if args.oracle == "classical":
        oracle = ClassicalOracle()
    else:
        oracle = QuantumSimOracle(seed=args.seed)
    T = args.T or default_repetitions(args.n)
    try:
        res = special_factor(args.n, oracle, T)
    except ValueError as exc:  # simulator cap exceeded
        raise UsageError(str(exc)) from exc
    rep = Report(
        "special-factor",
        inputs={"n": _big(args.n), "oracle": args.oracle, "T": T},
        outputs={
            "aborted": res.aborted,
            "reason": res.reason,
            "factorization": [[_big(p), e] for p, e in res.factorization.entries],
            "pretty": str(res.factorization) if not res.aborted else None,
        },
        counters={"oracle_calls": res.oracle_calls, "oracle_invocations": res.oracle_invocations},
        seed=args.seed,
    )
    if res.aborted:
        print(f"{args.n}: aborted ({res.reason})", file=sys.stderr)
        return rep, EXIT_FAIL
    print(f"{args.n} = {res.factorization}", file=sys.stderr)
    return rep, EXIT_OK


def cmd_verify(args) -> tuple[Report, int]:
    suite = args.suite
    if suite == "gauss":
        inputs = {"max_m": args.max_m}
        bad = verify.sweep_gauss(args.max_m)
    elif suite == "window":
        inputs = {"trials": args.trials}
        bad = verify.sweep_window(args.trials, args.seed)
    elif suite == "phases":
        inputs = {"trials": args.trials}
        bad = verify.sweep_phases(args.trials, args.seed)
    elif suite == "counts":
        inputs = {"max_n": args.max_n}
        bad = verify.sweep_counts(args.max_n)
    else:
        inputs = {"trials": args.trials}
        bad = verify.sweep_trace(args.trials, args.seed)
    rep = Report(
        "verify",
        inputs={"suite": suite, **inputs},
        outputs={"passed": not bad, "counterexamples": bad[:100]},
        counters={"violations": len(bad)},
        seed=args.seed,
    )
    print(f"verify {suite}: {'pass' if not bad else f'FAIL ({len(bad)} violations)'}", file=sys.stderr)
    return rep, EXIT_OK if not bad else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jacobi-factor", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("jacobi", help="streamed Jacobi symbol x/modulus")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--block-bits", type=int, default=64)
    p.add_argument("--check", action="store_true", help="cross-check with the reference")
    p.set_defaults(func=cmd_jacobi)

    p = sub.add_parser("factor", help="simulate the squarefull factoring circuit")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--bmax", type=int, required=True)
    p.add_argument("--mode", choices=("exact", "sampled"), default="exact")
    p.add_argument("--shots", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=0, help="trial-division bound for step 1")
    p.add_argument("--ell", type=int, default=None, help="override the register size")
    p.add_argument("--zero-phase", type=int, choices=(1, -1), default=1)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("special-factor", help="completely factor a special integer")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--oracle", choices=("classical", "quantum"), default="classical")
    p.add_argument("-T", type=int, default=None, help="oracle repetitions per call")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_special_factor)

    p = sub.add_parser("verify", help="run an invariant sweep")
    p.add_argument("suite", choices=("gauss", "window", "phases", "counts", "trace"))
    p.add_argument("--max-m", type=int, default=201)
    p.add_argument("--max-n", type=int, default=3000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rep, code = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(rep.to_json())
    return code


if __name__ == "__main__":
    sys.exit(main())
