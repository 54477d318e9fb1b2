"""``covisit`` command line: build, analyze, compare, synth.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

import argparse
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .analysis import (
    NoQualifyingEdgesError,
    degree_ccdf,
    degree_heatmap,
    edge_span,
    fit_degree_distribution,
    hyperedge_size_histogram,
    max_chebyshev,
    poi_degree_fit,
    write_ccdf_csv,
    write_heatmap_csv,
    write_sizes_csv,
)
from .hypergraph import from_patterns, load_hypergraph, save_hypergraph
from .ingest import GridSpec, build_visit_log, read_poi, read_records
from .mining import MiningParams, fp_growth, maximal_filter
from .phases import PhaseSpec, check_phases, compare_phases
from .synthetic import SpecError, generate, spec_from_dict, write_records_csv
from .transactions import build_transactions, dataset_stats, dump_transactions

log = logging.getLogger("covisit")

EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _grid(text):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("grid dimensions must be positive")
    return w, h


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("values must be positive integers")
    return sorted(set(values))


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values or any(not 0 < v <= 1 for v in values):
        raise argparse.ArgumentTypeError("min_sup values must lie in (0, 1]")
    return sorted(set(values))


def _day_range(text):
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo < 0 or lo >= hi:
        raise argparse.ArgumentTypeError(f"empty day range {text!r}")
    return lo, hi


def _phase(text):
    label, sep, days = text.partition("=")
    if not sep or not label:
        raise argparse.ArgumentTypeError(f"expected LABEL=LO..HI, got {text!r}")
    return PhaseSpec(label, _day_range(days))


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _add_grid_flags(p):
    p.add_argument("--grid", type=_grid, default=(200, 200), metavar="WxH", help="raw grid size (default 200x200)")
    p.add_argument("--scale", type=_positive, default=10, help="spatial scaling factor (default 10)")


def _add_mining_flags(p):
    p.add_argument("--delta-t", type=_int_list, default=[1, 3, 7], help="window lengths in days (default 1,3,7)")
    p.add_argument("--min-sup", type=_float_list, default=[0.005, 0.01, 0.015], help="support thresholds (default 0.005,0.01,0.015)")
    p.add_argument("--min-size", type=_positive, default=2, help="minimum itemset size (default 2)")
    p.add_argument("--maximal", action="store_true", help="keep only maximal frequent itemsets")
    p.add_argument("--threads", type=_positive, default=os.cpu_count() or 1, help="worker processes for mining")


def make_parser():
    parser = _Parser(prog="covisit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="build one hypergraph per (delta_t, min_sup)")
    p.add_argument("--input", required=True, type=Path)
    _add_grid_flags(p)
    _add_mining_flags(p)
    p.add_argument("--days", type=_day_range, metavar="LO..HI", help="half-open day range (default: all days)")
    p.add_argument("--dump-transactions", action="store_true", help="also write the transaction bags")
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("analyze", help="degree, size, span and fit reports for hypergraph files")
    p.add_argument("hypergraphs", nargs="+", type=Path)
    _add_grid_flags(p)
    p.add_argument("--k-uniform", type=_positive, metavar="K", help="analyze only the K-uniform subhypergraph")
    p.add_argument("--min-edge-size", type=_positive, default=3, help="size cut for Chebyshev spans (default 3)")
    p.add_argument("--poi", type=Path, help="POI CSV x,y,category,count on the raw grid")
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("compare", help="compare two phases (e.g. regular vs emergency days)")
    p.add_argument("--input", required=True, type=Path)
    _add_grid_flags(p)
    _add_mining_flags(p)
    p.add_argument("--phase", type=_phase, action="append", required=True, metavar="LABEL=LO..HI")
    p.add_argument("--min-edge-size", type=_positive, default=3)
    p.add_argument("--out", required=True, type=Path)

    p = sub.add_parser("synth", help="generate synthetic trajectories from a JSON spec")
    p.add_argument("spec", type=Path)
    p.add_argument("--seed", type=int, help="override the spec's seed")
    p.add_argument("--delta-t", type=_int_list, default=[1, 3, 7], help="windows listed in the manifest")
    p.add_argument("--out", required=True, type=Path)
    return parser


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


def hypergraph_filename(delta_t, min_sup):
    return f"hypergraph_dt{delta_t}_sup{min_sup!r}.hg"


def _load_log(args, days=None):
    grid = GridSpec(args.grid[0], args.grid[1], args.scale)
    records = read_records(args.input, grid)
    if days is None:
        if records.shape[0] == 0:
            raise ValueError(f"{args.input} holds no records; pass --days")
        days = (0, int(records[:, 1].max()) + 1)
    return build_visit_log(records, grid, days)


def cmd_build(args):
    started = time.perf_counter()
    config = {
        "input": str(args.input),
        "grid": list(args.grid),
        "scale": args.scale,
        "delta_t": args.delta_t,
        "min_sup": args.min_sup,
        "min_size": args.min_size,
        "maximal": args.maximal,
        "days": list(args.days) if args.days else None,
    }
    visit_log = _load_log(args, args.days)
    too_long = [dt for dt in args.delta_t if dt > visit_log.horizon]
    if too_long:
        raise UsageError(f"delta_t {too_long} exceeds the {visit_log.horizon}-day range {list(visit_log.days)}")
    args.out.mkdir(parents=True, exist_ok=True)

    per_delta_t, outputs = {}, []
    for dt in args.delta_t:
        dataset = build_transactions(visit_log, dt)
        per_delta_t[str(dt)] = dataset_stats(dataset)
        log.info("delta_t=%d: %d transactions", dt, dataset.n_transactions)
        if args.dump_transactions:
            with open(args.out / f"transactions_dt{dt}.txt", "w", encoding="utf-8", newline="\n") as fh:
                dump_transactions(dataset, fh)
        for sup in args.min_sup:
            params = MiningParams(sup, args.min_size)
            patterns = fp_growth(dataset, params, n_jobs=args.threads)
            if args.maximal:
                patterns = maximal_filter(patterns)
            hg = from_patterns(patterns, visit_log.grid)
            name = hypergraph_filename(dt, sup)
            save_hypergraph(hg, args.out / name)
            outputs.append(
                {"delta_t": dt, "min_sup": sup, "file": name, "threshold": params.threshold(dataset.n_transactions), "n_edges": hg.n_edges}
            )

    _write_json(
        args.out / "manifest.json",
        {
            "version": __version__,
            "config": config,
            "config_hash": hashlib.sha256(json.dumps(config, sort_keys=True).encode()).hexdigest(),
            "threshold_rule": "count >= ceil(min_sup * M)",
            "days": list(visit_log.days),
            "n_individuals": visit_log.n_individuals,
            "transactions": per_delta_t,
            "hypergraphs": outputs,
            "threads": args.threads,
            "wall_time_s": round(time.perf_counter() - started, 3),
        },
    )
    return 0


def analyze_hypergraph(hg, out_dir, min_edge_size=3, poi=None):
    """Write the per-hypergraph report files into ``out_dir``."""
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "ccdf.csv", "w", encoding="utf-8", newline="") as fh:
        write_ccdf_csv(degree_ccdf(hg), fh)
    sizes = hyperedge_size_histogram(hg)
    with open(out_dir / "sizes.csv", "w", encoding="utf-8", newline="") as fh:
        write_sizes_csv(sizes, fh)
    heat = degree_heatmap(hg)
    with open(out_dir / "heatmap.csv", "w", encoding="utf-8", newline="") as fh:
        write_heatmap_csv(heat, fh)

    per_size = {}
    for e in hg.edges:
        per_size[e.size] = max(per_size.get(e.size, 0), edge_span(hg, e))
    try:
        overall = max_chebyshev(hg, min_edge_size)
    except NoQualifyingEdgesError:
        overall = None
    _write_json(
        out_dir / "chebyshev.json",
        {"min_edge_size": min_edge_size, "max_chebyshev": overall, "per_size": {str(k): v for k, v in sorted(per_size.items())}},
    )

    degrees = hg.degrees()
    try:
        fits = fit_degree_distribution(degrees[degrees > 0]).to_dict()
    except ValueError as exc:
        fits = {"error": str(exc)}
    fits["max_degree"] = heat.max_degree
    _write_json(out_dir / "fits.json", fits)

    if poi is not None:
        try:
            poi_fit = poi_degree_fit(poi, hg).to_dict()
        except ValueError as exc:
            poi_fit = {"error": str(exc)}
        _write_json(out_dir / "poi_fit.json", poi_fit)


def cmd_analyze(args):
    grid = GridSpec(args.grid[0], args.grid[1], args.scale)
    poi = read_poi(args.poi, grid) if args.poi else None
    for path in args.hypergraphs:
        if not path.is_file():
            raise FileNotFoundError(f"hypergraph file not found: {path}")
    for path in args.hypergraphs:
        hg = load_hypergraph(path)
        if poi is not None and (hg.width, hg.height) != (grid.width, grid.height):
            raise ValueError(f"{path}: {hg.width}x{hg.height} grid does not match POI grid {grid.width}x{grid.height}")
        if args.k_uniform:
            hg = hg.k_uniform(args.k_uniform)
        analyze_hypergraph(hg, args.out / path.stem, args.min_edge_size, poi)
    return 0


def cmd_compare(args):
    if len(args.phase) != 2:
        raise UsageError(f"compare needs exactly two --phase flags, got {len(args.phase)}")
    try:
        check_phases(args.phase, args.delta_t)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lo = min(p.day_range[0] for p in args.phase)
    hi = max(p.day_range[1] for p in args.phase)
    visit_log = _load_log(args, (lo, hi))
    report = compare_phases(
        visit_log,
        args.phase,
        args.delta_t,
        args.min_sup,
        min_size=args.min_size,
        min_edge_size=args.min_edge_size,
        maximal=args.maximal,
        n_jobs=args.threads,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    _write_json(args.out / "comparison.json", report)
    return 0


def cmd_synth(args):
    with open(args.spec, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError("$", f"invalid JSON: {exc}") from None
    if args.seed is not None and isinstance(data, dict):
        data["seed"] = args.seed
    spec = spec_from_dict(data)
    synth = generate(spec, delta_ts=args.delta_t)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "trajectories.csv", "w", encoding="utf-8", newline="") as fh:
        write_records_csv(synth.records, fh)
    _write_json(args.out / "manifest.json", synth.manifest)
    return 0


COMMANDS = {"build": cmd_build, "analyze": cmd_analyze, "compare": cmd_compare, "synth": cmd_synth}


def main(argv=None):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help, --version, usage errors
        return exc.code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"covisit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"covisit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
