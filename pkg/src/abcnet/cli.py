"""Command line entry point.

    abcnet run --config experiment.ini
    abcnet analyze --events run_000/events.csv --windows 1,5,10 --out analysis/
    abcnet snapshot --events run_000/events.csv --at 500 --window 500 --layer O --out onlooker.txt

Exit status: 0 on success, 1 for configuration or usage errors, 2 for runtime
failures (including a campaign in which any execution failed).
"""
import argparse
import logging
import os
import sys

from . import export
from .errors import ConfigError, InvalidInputError, DataCorruptionError
from .harness import analyze_events, load_config, run_campaign, write_layers
from .inet import undirected_view, window_network
from .netmetrics import ccdf, weighted_degree

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _int_list(text: str):
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("windows must be positive integers")
    return values


def cmd_run(args) -> int:
    config = load_config(args.config)
    if args.workers is not None:
        config.workers = args.workers
        config.validate()
    summary = run_campaign(config)
    for r in summary.runs:
        mark = " *" if r.best_run else ""
        if r.status == "ok":
            print(f"run {r.execution:3d} seed {r.seed}: {r.iterations} iterations, best {r.final_best_fitness:.6g}{mark}")
        else:
            print(f"run {r.execution:3d} seed {r.seed}: FAILED {r.error}")
    if config.output_dir:
        print(f"wrote {os.path.join(config.output_dir, 'summary.csv')}")
    return EXIT_RUNTIME if summary.failed else EXIT_OK


def cmd_analyze(args) -> int:
    evlog = export.read_events_csv(args.events, n=args.bees)
    id_rows, window_rows, final = analyze_events(evlog, args.windows, args.stride, args.iterations)
    export.write_rows(os.path.join(args.out, "id.csv"), ("iteration", "id_value"), id_rows)
    export.write_rows(os.path.join(args.out, "windows.csv"), export.WINDOW_COLUMNS, window_rows)
    if final is not None:
        degrees = weighted_degree(undirected_view(final))
        export.write_rows(os.path.join(args.out, "degree_ccdf.csv"), ("degree", "fraction"), ccdf(degrees))
        write_layers(final, os.path.join(args.out, "cumulative"))
    print(f"{len(evlog)} events over {evlog.last_iteration} iterations, n={evlog.n}; wrote {args.out}")
    return EXIT_OK


def cmd_snapshot(args) -> int:
    evlog = export.read_events_csv(args.events, n=args.bees)
    window = args.window if args.window is not None else args.at
    net = window_network(evlog, args.at, window)
    m = net.layer(args.layer)
    export.write_matrix(export.MatrixFile(m, args.layer, net.start_iteration, net.end_iteration, window), args.out)
    if args.heatmap:
        export.write_heatmap_image(m, args.heatmap, vmax=args.vmax)
    print(f"layer {args.layer}, iterations {net.start_iteration}..{net.end_iteration}: wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abcnet", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a campaign from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, help="override the config's worker count")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("analyze", help="recompute network metrics from an events CSV")
    p.add_argument("--events", required=True)
    p.add_argument("--windows", type=_int_list, default=[1, 5, 10])
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--bees", type=int, help="swarm size (default: largest index in the log + 1)")
    p.add_argument("--iterations", type=int, help="run length (default: last iteration with an event)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("snapshot", help="write one window adjacency matrix")
    p.add_argument("--events", required=True)
    p.add_argument("--at", type=int, required=True, help="last iteration of the window")
    p.add_argument("--window", type=int, help="window length (default: whole history up to --at)")
    p.add_argument("--layer", choices=["E", "O", "S", "A"], default="A")
    p.add_argument("--bees", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--heatmap", help="also write a PPM heatmap here")
    p.add_argument("--vmax", type=float, help="heatmap value mapped to the top color")
    p.set_defaults(func=cmd_snapshot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, InvalidInputError, DataCorruptionError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
