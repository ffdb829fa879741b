"""Command line front end.

One binary with four subcommands: classify, region, validate, simulate.
Every artifact embeds the manifest of the run that produced it, and no
output carries a timestamp, so re-running the same command reproduces
the bytes exactly.

Exit codes: 0 success, 2 bad arguments or spec file, 3 degenerate or
singular channel, 4 outside the requested regime (including an
infeasible relay budget for region and simulate), 5 validation did not
pass, 6 codebook cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .channel import load_channel_spec
from .classify import Regime, classify
from .exceptions import (
    AfInfeasible,
    ChannelSpecError,
    CodebookTooLarge,
    DegenerateChannel,
    NotInRegime,
    SingularRelayGeometry,
)
from .linksim import SimConfig, simulate, sweep_boundary
from .regions import (
    achievable_region,
    redundancy_check,
    region_to_csv,
    region_to_dict,
    strong_capacity,
    strong_outer_bound,
    very_strong_capacity,
)
from .validate import run_validation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DEGENERATE = 3
EXIT_REGIME = 4
EXIT_VALIDATION = 5
EXIT_CODEBOOK = 6


@dataclass(frozen=True)
class RunManifest:
    """What produced an artifact: command line, input, seed, output."""

    command: str
    input: str
    output: str | None
    seed: int | None
    parameters: dict

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "input": self.input,
            "output": self.output,
            "seed": self.seed,
            "parameters": self.parameters,
        }


def _manifest(argv: list[str], args, parameters: dict) -> RunManifest:
    return RunManifest(
        command="irwd " + " ".join(argv),
        input=args.spec,
        output=getattr(args, "output", None),
        seed=getattr(args, "seed", None),
        parameters=parameters,
    )


def _emit(text: str, output: str | None) -> None:
    if output and output != "-":
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected numbers, got {text!r}") from exc


def _scale_list(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def cmd_classify(argv: list[str], args) -> int:
    gains, budget = load_channel_spec(args.spec)
    report = classify(gains, budget, tol=args.tol)
    manifest = _manifest(argv, args, {"tol": args.tol})
    payload = report.to_dict()
    payload["manifest"] = manifest.to_dict()
    _emit(_dump_json(payload), args.output)
    return EXIT_OK


def cmd_region(argv: list[str], args) -> int:
    gains, budget = load_channel_spec(args.spec)
    extras = {}
    if args.kind == "achievable":
        region = achievable_region(gains, budget, base=args.base)
        extras["sum_redundant"] = redundancy_check(gains, budget)
    elif args.kind == "outer":
        region = strong_outer_bound(gains, budget, base=args.base)
    else:
        regime = classify(gains, budget).regime
        if regime is Regime.VERY_STRONG_CAPACITY:
            region = very_strong_capacity(gains, budget, base=args.base)
        elif regime is Regime.STRONG_CAPACITY:
            region = strong_capacity(gains, budget, base=args.base)
        else:
            raise NotInRegime(f"no exact capacity region in regime {regime.value}")
    manifest = _manifest(argv, args, {"kind": args.kind, "base": args.base, "format": args.format})
    if args.format == "csv":
        text = "# " + json.dumps(manifest.to_dict(), sort_keys=True) + "\n" + region_to_csv(region)
    else:
        payload = region_to_dict(region)
        payload.update(extras)
        payload["manifest"] = manifest.to_dict()
        text = _dump_json(payload)
    _emit(text, args.output)
    return EXIT_OK


def cmd_validate(argv: list[str], args) -> int:
    gains, budget = load_channel_spec(args.spec)
    report = run_validation(gains, budget, n=args.samples, seed=args.seed, resamples=args.resamples)
    manifest = _manifest(argv, args, {"samples": args.samples, "resamples": args.resamples})
    payload = report.to_dict()
    payload["manifest"] = manifest.to_dict()
    _emit(_dump_json(payload), args.output)
    n_pass = sum(c.passed for c in report.checks)
    print(f"validation: {n_pass}/{len(report.checks)} checks passed", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def cmd_simulate(argv: list[str], args) -> int:
    gains, budget = load_channel_spec(args.spec)
    if args.rates is not None:
        ray, scales = args.rates, [1.0]
    else:
        if args.ray is None or not args.scales:
            raise ChannelSpecError("simulate needs either --rates or both --ray and --scales")
        ray, scales = args.ray, args.scales
    points = sweep_boundary(
        gains, budget, ray, scales,
        n=args.n, trials=args.trials, seed=args.seed, pipeline=args.pipeline,
    )
    manifest = _manifest(argv, args, {
        "n": args.n, "trials": args.trials, "pipeline": args.pipeline,
        "ray": list(ray), "scales": [p.scale for p in points],
    })
    rows = ["# " + json.dumps(manifest.to_dict(), sort_keys=True),
            "scale,r1,r2,p_err1,p_err2,trials,n,seed"]
    for p in points:
        rows.append(
            f"{p.scale!r},{p.r1!r},{p.r2!r},{p.result.p_err1!r},{p.result.p_err2!r},"
            f"{p.result.trials},{args.n},{args.seed}"
        )
    _emit("\n".join(rows) + "\n", args.output)
    worst = max(max(p.result.p_err1, p.result.p_err2) for p in points)
    print(
        f"simulated {len(points)} rate points at n={args.n}, {args.trials} trials each; "
        f"worst p_err {worst:.4f}",
        file=sys.stderr,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irwd",
        description="Rate regions and simulation for the Gaussian interference channel with an instantaneous relay.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("classify", help="regime flags and the relay power threshold")
    p.add_argument("spec", help="channel spec JSON file")
    p.add_argument("--tol", type=float, default=1e-9, help="collinearity tolerance")
    p.add_argument("-o", "--output", default=None, help="write JSON here instead of stdout")
    p.set_defaults(run=cmd_classify)

    p = sub.add_parser("region", help="achievable, outer, or capacity region")
    p.add_argument("spec", help="channel spec JSON file")
    p.add_argument("--kind", required=True, choices=("achievable", "outer", "capacity"))
    p.add_argument("--base", default="bits", choices=("bits", "nats"))
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(run=cmd_region)

    p = sub.add_parser("validate", help="Monte Carlo cross-check of the closed forms")
    p.add_argument("spec", help="channel spec JSON file")
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--resamples", type=int, default=50)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("simulate", help="block error rates at chosen rate points")
    p.add_argument("spec", help="channel spec JSON file")
    p.add_argument("--n", type=int, required=True, help="blocklength")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pipeline", default="equivalent", choices=("equivalent", "two_hop"))
    p.add_argument("--rates", type=_pair, default=None, help="single point R1,R2 in bits per use")
    p.add_argument("--ray", type=_pair, default=None, help="sweep direction R1,R2")
    p.add_argument("--scales", type=_scale_list, default=None, help="sweep scales s1,s2,...")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(run=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(argv, args)
    except ChannelSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateChannel, SingularRelayGeometry) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NotInRegime as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except AfInfeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION if args.cmd == "validate" else EXIT_REGIME
    except CodebookTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CODEBOOK


if __name__ == "__main__":
    sys.exit(main())
