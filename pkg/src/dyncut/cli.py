"""Command line entry point: ``dyncut run`` and ``dyncut gen``."""
from __future__ import annotations

import argparse
import sys

from .harness import WORKLOADS, EngineError, ParseError, generate, parse_stream, run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dyncut", description="Fully dynamic edge connectivity")
    sub = p.add_subparsers(dest="cmd", required=True)

    r = sub.add_parser("run", help="replay an update stream through an engine")
    r.add_argument("--engine", choices=["rand", "det", "oracle"], required=True)
    r.add_argument("--stream", required=True, help="stream file")
    r.add_argument("--check", action="store_true", help="compare with the oracle after every update")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--csv", help="write per-event CSV here")
    r.add_argument("--t-reps", type=int, default=32, help="repetitions of the randomized engine")
    r.add_argument("--tau-const", type=float, default=1.0,
                   help="colour-split constant of the randomized certificates")
    r.add_argument("--phi-const", type=float, default=240,
                   help="phi * tau for the deterministic engine")
    r.add_argument("--no-timing", action="store_true", help="write 0 in the micros column")
    r.add_argument("--parallel", action="store_true", help="run the oracle in a second thread")

    g = sub.add_parser("gen", help="generate a workload stream")
    g.add_argument("--workload", choices=sorted(WORKLOADS), required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--steps", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.cmd == "gen":
        s = generate(args.workload, args.n, args.steps, args.seed)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(s.text())
        print(f"wrote {s.updates} updates on n={s.n} to {args.out}")
        return 0
    try:
        with open(args.stream, encoding="utf-8") as fh:
            s = parse_stream(fh.read())
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    try:
        rep = run(args.engine, s, check=args.check, seed=args.seed, t_reps=args.t_reps,
                  tau_const=args.tau_const, phi_const=args.phi_const,
                  timing=not args.no_timing, parallel=args.parallel)
    except EngineError as err:
        print(f"engine error: {err}", file=sys.stderr)
        return 3
    if args.csv:
        rep.write_csv(args.csv)
    print(rep.summary())
    return 0 if rep.mismatches == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
