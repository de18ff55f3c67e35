"""Command-line entry point.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from chordnet import pipeline
from chordnet.config import RunConfig, demo_config, resolve_config
from chordnet.errors import ChordNetError
from chordnet.network import build_graph
from chordnet.spectral import build_google, pagerank

log = logging.getLogger("chordnet")

COMMANDS = (
    "validate", "stats", "export-graph", "pagerank", "spectrum", "fit",
    "communities", "null-stats", "compare-periods", "report",
)


def _window(text: str) -> tuple[int, int]:
    try:
        start, stop = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("window must look like START:STOP") from None
    return start, stop


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global options")
    g.add_argument("--config", help="JSON run configuration (default: $CHORDNET_CONFIG)")
    g.add_argument("--input", help="annotation TSV file")
    g.add_argument("--demo", action="store_true", help="use the bundled synthetic mini-corpus")
    g.add_argument("--out", help="output directory")
    g.add_argument("--mode", choices=("major", "minor"))
    g.add_argument("--period")
    g.add_argument("--alpha", type=float)
    g.add_argument("--tol", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--restarts", type=int)
    g.add_argument("--null-restarts", dest="null_restarts", type=int)
    g.add_argument("--ensemble", type=int)
    g.add_argument("--metric", choices=("fidelity", "similarity"))
    g.add_argument("--top-m", dest="top_m", type=int)
    g.add_argument("--fit-window", dest="pagerank_window", type=_window, help="rank window START:STOP for the PageRank fit")
    g.add_argument("--jobs", dest="n_jobs", type=int)
    g.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="chordnet", description="Chord-transition network analysis.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "clean the input and report substitutions and headline counts",
        "stats": "chord frequencies, rank-frequency tables, bigrams, PageRank vs frequency rank",
        "export-graph": "edge list (TSV) and vertex table (CSV) per graph",
        "pagerank": "PageRank vector per graph",
        "spectrum": "complex spectrum of the Google matrix per graph",
        "fit": "degree-distribution, PageRank and Zipf power-law fits",
        "communities": "best-of-N Louvain partition per graph",
        "null-stats": "modularity of degree-preserving randomized graphs",
        "compare-periods": "fidelity/similarity between periods over quartet-pair graphs",
        "report": "run everything and write a manifest",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common], help=helps[name])
        if name == "report":
            p.add_argument("--no-null", action="store_true", help="skip the null-model ensembles")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    cfg = demo_config() if args.demo else resolve_config(args.config)
    overrides = {k: getattr(args, k, None) for k in (
        "input", "out", "mode", "period", "alpha", "tol", "seed", "restarts", "null_restarts",
        "ensemble", "metric", "top_m", "pagerank_window", "n_jobs")}
    return cfg.override(**overrides)


def run(args: argparse.Namespace) -> int:
    cfg = make_config(args)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    command = args.command

    if command == "report":
        print(pipeline.report(cfg, null_models=not args.no_null))
        return 0

    corpus, cleaning = pipeline.load(cfg)
    files: list[Path] = []
    if command == "validate":
        files = pipeline.validate_stage(cfg, corpus, cleaning, out)
        for entry in cleaning.entries:
            print(json.dumps(entry.to_dict(), sort_keys=True))
        print(json.dumps({"summary": corpus.summary()}, sort_keys=True))
        for path in files:
            log.info("wrote %s", path)
        return 0

    if command == "compare-periods":
        for mode in [cfg.mode] if cfg.mode else ["major", "minor"]:
            files += pipeline.comparison_stage(cfg, corpus, mode, [cfg.metric], out)
    else:
        if command == "stats" and not cfg.mode and not cfg.period:
            files += pipeline.corpus_zipf_stage(cfg, corpus, out)
        for name, sub in pipeline.targets(cfg, corpus):
            if command == "stats":
                files += pipeline.stats_stage(cfg, name, sub, out)
                continue
            g = build_graph(sub)
            if command == "export-graph":
                files += pipeline.graph_stage(name, g, out)
            elif command == "spectrum":
                files += pipeline.spectrum_stage(cfg, name, g, out)
            else:
                p = pagerank(build_google(g, cfg.alpha), cfg.tol, cfg.max_iter)
                if command == "pagerank":
                    files += pipeline.pagerank_stage(name, p, out)
                elif command == "fit":
                    files += pipeline.fits_stage(cfg, name, sub, g, p, out)
                elif command == "communities":
                    files += pipeline.communities_stage(cfg, name, g, p, out)[0]
                elif command == "null-stats":
                    comm_files, part = pipeline.communities_stage(cfg, name, g, p, out)
                    files += pipeline.null_stage(cfg, name, g, out, part.modularity if part else None)
    for path in files:
        print(path)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return run(args)
    except ChordNetError as exc:
        print(f"chordnet: error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
