"""Command line entry points: the match simulator (`sim`) and the game
server (`fairships-server`)."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .simulator import (
    AdversaryScript,
    MatchConfig,
    SCRIPT_KINDS,
    measure_round_cost,
    run_match,
    run_sweep,
)


def _parse_seed_range(text: str) -> range:
    """"a..b" inclusive, or a single seed."""
    if ".." in text:
        lo, hi = text.split("..", 1)
        return range(int(lo), int(hi) + 1)
    seed = int(text)
    return range(seed, seed + 1)


def _match_config(args) -> MatchConfig:
    return MatchConfig(timeout_ticks=args.timeout_ticks, deposit=args.deposit)


def _add_match_options(parser):
    parser.add_argument("--script-a", default="honest",
                        help=f"player A behavior: one of {', '.join(SCRIPT_KINDS)}"
                             " (unresponsive takes :k)")
    parser.add_argument("--script-b", default="honest",
                        help="player B behavior (same choices)")
    parser.add_argument("--timeout-ticks", type=int, default=64,
                        help="move window in logical ticks")
    parser.add_argument("--deposit", type=int, default=100,
                        help="per-player stake")


def sim_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sim", description="Deterministic Battleships protocol simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one match")
    _add_match_options(run_p)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--report", choices=("json", "text"), default="text")

    sweep_p = sub.add_parser("sweep", help="run a seed range, one JSON line each")
    _add_match_options(sweep_p)
    sweep_p.add_argument("--seeds", default="0..9",
                         help="inclusive range a..b or a single seed")

    cost_p = sub.add_parser("cost", help="measured per-phase wire and hash costs")
    cost_p.add_argument("--report", choices=("json", "text"), default="json")

    args = parser.parse_args(argv)

    if args.command == "run":
        report = run_match(AdversaryScript.parse(args.script_a),
                           AdversaryScript.parse(args.script_b),
                           args.seed, _match_config(args))
        if args.report == "json":
            print(report.to_json())
        else:
            verdict = report.verdict
            reason = f" ({verdict['reason']})" if verdict["reason"] else ""
            print(f"seed {report.seed}: {verdict['kind']}{reason}, "
                  f"winner {verdict['winner']} takes "
                  f"{sum(a for _, a in report.transfers)}; "
                  f"{report.turns} shots, "
                  f"{report.hash_invocations} verifier hashes")
        return 0

    if args.command == "sweep":
        for report in run_sweep(AdversaryScript.parse(args.script_a),
                                AdversaryScript.parse(args.script_b),
                                _parse_seed_range(args.seeds),
                                _match_config(args)):
            print(report.to_json())
        return 0

    if args.command == "cost":
        cost = measure_round_cost()
        if args.report == "json":
            print(json.dumps(cost, indent=2, sort_keys=True))
        else:
            for key, value in sorted(cost.items()):
                print(f"{key}: {value}")
        return 0

    return 2


def server_main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fairships-server", description="Battleships game session server")
    parser.add_argument("--host", default=os.environ.get("FAIRSHIPS_HOST", "127.0.0.1"))
    parser.add_argument("--port", type=int,
                        default=int(os.environ.get("FAIRSHIPS_PORT", "8000")))
    parser.add_argument("--data-dir",
                        default=os.environ.get("FAIRSHIPS_DATA_DIR", "./fairships-data"))
    parser.add_argument("--tick-interval", type=float,
                        default=float(os.environ.get("FAIRSHIPS_TICK_INTERVAL", "1.0")),
                        help="wall-clock seconds per logical tick")
    parser.add_argument("--test-mode", action="store_true",
                        default=os.environ.get("FAIRSHIPS_TEST_MODE", "") == "1",
                        help="disable the clock scheduler; expose POST /games/{id}/clock")
    args = parser.parse_args(argv)

    import uvicorn

    from .service import create_app

    app = create_app(args.data_dir, test_mode=args.test_mode,
                     tick_interval=args.tick_interval)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(sim_main())
