"""Analysis stages that turn a corpus into CSV/JSON tables.

Floats are written with 12 significant digits so reruns are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import platform
from pathlib import Path
from typing import Iterable

import numpy as np

from chordnet import __version__
from chordnet.annotations import MODES, CleaningReport, Corpus, load_corpus
from chordnet.community import best_partition, community_profile, drop_self_loops, null_modularity_stats
from chordnet.config import RunConfig
from chordnet.errors import ChordNetError, ConfigError, FitError
from chordnet.network import ChordGraph, build_graph, degree_distribution, undirect
from chordnet.spectral import RankVector, build_google, fit_powerlaw, pagerank, rank_plot_fit, spectrum
from chordnet.stats import bigram_matrix, frequency_table, pagerank_vs_frequency, zipf_fit, zipf_table
from chordnet.stylometry import period_comparison, period_vectors

log = logging.getLogger(__name__)


def fmt(x: float) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if math.isnan(x):
        return "nan"
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return None if math.isnan(x) else float(fmt(x))
    return obj


def write_csv(path: Path, header: list[str], rows: Iterable[Iterable], delimiter: str = ",") -> Path:
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def write_json(path: Path, obj) -> Path:
    path.write_text(json.dumps(_jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return path


def load(cfg: RunConfig) -> tuple[Corpus, CleaningReport]:
    if not cfg.input:
        raise ConfigError("no input file given (use --input or the 'input' config key)")
    return load_corpus(cfg.input, cfg.columns, cfg.periods, cfg.include_changes)


def targets(cfg: RunConfig, corpus: Corpus, with_periods: bool = False) -> list[tuple[str, Corpus]]:
    """(name, sub-corpus) pairs selected by the mode/period filters."""
    out = []
    for mode in [cfg.mode] if cfg.mode else list(MODES):
        sub = corpus.filter(mode=mode)
        if cfg.period:
            out.append((f"{mode}_{cfg.period}", sub.filter(period=cfg.period)))
            continue
        out.append((mode, sub))
        if with_periods:
            out.extend((f"{mode}_{p}", sub.filter(period=p)) for p in sub.periods())
    kept = [(name, c) for name, c in out if c.n_events]
    for name, c in out:
        if not c.n_events:
            log.warning("no chords for %s; skipped", name)
    return kept


# -- stages ---------------------------------------------------------------


def validate_stage(cfg: RunConfig, corpus: Corpus, report: CleaningReport, out: Path) -> list[Path]:
    lines = "".join(json.dumps(e.to_dict(), sort_keys=True) + "\n" for e in report.entries)
    path = out / "cleaning_report.jsonl"
    path.write_text(lines, encoding="utf-8")
    return [path, write_json(out / "summary.json", corpus.summary())]


def stats_stage(cfg: RunConfig, name: str, corpus: Corpus, out: Path) -> list[Path]:
    table = frequency_table(corpus)
    ranks = table.ranks()
    files = [
        write_csv(out / f"{name}_frequencies.csv", ["label", "count", "rank"],
                  [(label, count, ranks[label]) for label, count in table.ranking()]),
        write_csv(out / f"{name}_zipf.csv", ["rank", "frequency"], zipf_table(table)),
        write_csv(out / f"{name}_bigrams.csv", ["source", "target", "count"],
                  sorted((a, b, c) for (a, b), c in bigram_matrix(corpus).counts.items())),
        write_csv(out / f"{name}_rank_vs_rank.csv", ["label", "frequency", "frequency_rank", "pagerank", "pagerank_rank"],
                  [(r.label, r.frequency, r.frequency_rank, r.pagerank, r.pagerank_rank)
                   for r in pagerank_vs_frequency(corpus, cfg.alpha, cfg.tol)]),
    ]
    return files


def corpus_zipf_stage(cfg: RunConfig, corpus: Corpus, out: Path) -> list[Path]:
    """Rank-frequency table and fit over both modes together."""
    table = frequency_table(corpus)
    return [
        write_csv(out / "all_zipf.csv", ["rank", "frequency"], zipf_table(table)),
        write_json(out / "all_zipf_fit.json", _safe_fit(zipf_fit, table, cfg.zipf_window)),
    ]


def graph_stage(name: str, g: ChordGraph, out: Path) -> list[Path]:
    indeg, outdeg = g.in_degree(), g.out_degree()
    return [
        write_csv(out / f"{name}_edges.tsv", ["source", "target", "weight"], g.edges(), delimiter="\t"),
        write_csv(out / f"{name}_vertices.csv", ["label", "in_degree", "out_degree"],
                  zip(g.labels, indeg.tolist(), outdeg.tolist())),
    ]


def pagerank_stage(name: str, p: RankVector, out: Path) -> list[Path]:
    return [write_csv(out / f"{name}_pagerank.csv", ["label", "score", "rank"],
                      [(p.labels[i], float(p.scores[i]), r) for r, i in enumerate(p.order(), start=1)])]


def spectrum_stage(cfg: RunConfig, name: str, g: ChordGraph, out: Path) -> list[Path]:
    values = spectrum(build_google(g, cfg.alpha)).eigenvalues

    def snap(x: float) -> float:
        return 0.0 if abs(x) < 1e-12 else x

    rows = [(snap(float(v.real)), snap(float(v.imag)), float(abs(v))) for v in values]
    return [write_csv(out / f"{name}_spectrum.csv", ["re", "im", "modulus"], rows)]


def _safe_fit(fn, *args) -> dict:
    try:
        return fn(*args).to_dict()
    except FitError as exc:
        return {"error": str(exc)}


def fits_stage(cfg: RunConfig, name: str, corpus: Corpus, g: ChordGraph, p: RankVector, out: Path) -> list[Path]:
    dists = {d: degree_distribution(g, d, cfg.weighted_degrees) for d in ("in", "out")}
    rows = [(d, float(k), int(c)) for d, dist in dists.items() for k, c in zip(dist.k, dist.count)]
    fits = {
        f"degree_{d}": _safe_fit(fit_powerlaw, dist.k, dist.count, cfg.degree_window) for d, dist in dists.items()
    }
    fits["pagerank"] = _safe_fit(rank_plot_fit, p, cfg.pagerank_window)
    start = cfg.pagerank_window[0]
    stops = sorted({min(stop, len(p)) for stop in (50, 100, 200, 300, len(p))})
    fits["pagerank_window_sensitivity"] = {
        f"{start}:{stop}": _safe_fit(rank_plot_fit, p, (start, stop)) for stop in stops
    }
    fits["zipf"] = _safe_fit(zipf_fit, frequency_table(corpus), cfg.zipf_window)
    return [
        write_csv(out / f"{name}_degree_distribution.csv", ["direction", "k_normalized", "count_above"], rows),
        write_json(out / f"{name}_fits.json", fits),
    ]


def communities_stage(cfg: RunConfig, name: str, g: ChordGraph, p: RankVector, out: Path):
    ug = undirect(g)
    if ug.m <= 0:
        log.warning("%s has no edges; community detection skipped", name)
        return [], None
    part = best_partition(ug, cfg.restarts)
    loopless = drop_self_loops(ug)
    part_loopless = best_partition(loopless, cfg.restarts) if loopless.m > 0 else None
    scores = p.as_dict()
    profile_rows = []
    for prof in community_profile(g, part, p, cfg.profile_top):
        for r, (label, score) in enumerate(prof.top, start=1):
            profile_rows.append((prof.community, prof.size, prof.mass, r, label, score))
    files = [
        write_csv(out / f"{name}_communities.csv", ["label", "community", "pagerank"],
                  [(label, c, scores[label]) for label, c in zip(part.labels, part.membership)]),
        write_csv(out / f"{name}_community_profile.csv",
                  ["community", "size", "pagerank_mass", "rank", "label", "pagerank"], profile_rows),
        write_json(out / f"{name}_partition.json", {
            "modularity": part.modularity,
            "n_communities": part.n_communities,
            "restarts": part.restarts,
            "seed": part.seed,
            "all_modularities": list(part.scores),
            "modularity_without_self_loops": part_loopless.modularity if part_loopless else None,
        }),
    ]
    return files, part


def null_stage(cfg: RunConfig, name: str, g: ChordGraph, out: Path, real_modularity: float | None) -> list[Path]:
    ug = undirect(g)
    if ug.m <= 0:
        return []
    stats = null_modularity_stats(ug, cfg.ensemble, cfg.null_restarts, cfg.seed, cfg.null_method,
                                  cfg.null_weighted, cfg.n_jobs)
    data = stats.to_dict()
    if real_modularity is not None:
        data["real_modularity"] = real_modularity
        data["separation_in_std"] = (real_modularity - stats.mean) / stats.std if stats.std > 0 else None
    return [write_json(out / f"{name}_null_stats.json", data)]


def comparison_stage(cfg: RunConfig, corpus: Corpus, mode: str, metrics: Iterable[str], out: Path) -> list[Path]:
    sub = corpus.filter(mode=mode)
    if len(sub.periods()) < 2:
        log.warning("%s corpus spans fewer than two periods; comparison skipped", mode)
        return []
    vectors = period_vectors(sub, mode, cfg.alpha, cfg.tol)
    files = []
    for metric in metrics:
        matrix = period_comparison(sub, mode, metric, cfg.alpha, cfg.top_m, cfg.tol, vectors=vectors)
        rows, summary = [], []
        for (pi, pj), cell in sorted(matrix.cells.items(), key=lambda kv: (matrix.periods.index(kv[0][0]),
                                                                           matrix.periods.index(kv[0][1]))):
            for (ga, gb), value, dens in zip(cell.pairs, cell.values, cell.densities()):
                rows.append((pi, pj, "+".join(ga), "+".join(gb), metric, value, dens))
            summary.append({"period_i": pi, "period_j": pj, "count": cell.count, "mean": cell.mean, "std": cell.std})
        files.append(write_csv(out / f"{mode}_compare_{metric}.csv",
                               ["period_i", "period_j", "quartets_a", "quartets_b", "metric", "value", "density"], rows))
        files.append(write_json(out / f"{mode}_compare_{metric}.json",
                                {"metric": metric, "mode": mode, "top_m": cfg.top_m, "cells": summary}))
    return files


# -- full report ------------------------------------------------------------


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _stage(name: str, fn, *args):
    try:
        return fn(*args)
    except ChordNetError as exc:
        raise type(exc)(f"stage {name!r} failed: {exc}") from exc


def report(cfg: RunConfig, null_models: bool = True) -> Path:
    """Run every stage and write a manifest last.

    A failing stage aborts the run before the manifest is written.
    """
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    manifest_path = out / "manifest.json"
    if manifest_path.exists():
        manifest_path.unlink()
    corpus, cleaning = _stage("load", load, cfg)
    files = list(_stage("validate", validate_stage, cfg, corpus, cleaning, out))
    graphs = []
    if not cfg.mode and not cfg.period:
        files += _stage("stats:all", corpus_zipf_stage, cfg, corpus, out)
    for name, sub in targets(cfg, corpus, with_periods=True):
        files += _stage(f"stats:{name}", stats_stage, cfg, name, sub, out)
        g = _stage(f"graph:{name}", build_graph, sub)
        graphs.append(name)
        files += _stage(f"graph:{name}", graph_stage, name, g, out)
        p = _stage(f"pagerank:{name}", lambda: pagerank(build_google(g, cfg.alpha), cfg.tol, cfg.max_iter))
        files += _stage(f"pagerank:{name}", pagerank_stage, name, p, out)
        files += _stage(f"spectrum:{name}", spectrum_stage, cfg, name, g, out)
        files += _stage(f"fits:{name}", fits_stage, cfg, name, sub, g, p, out)
        comm_files, part = _stage(f"communities:{name}", communities_stage, cfg, name, g, p, out)
        files += comm_files
        if null_models:
            files += _stage(f"null-stats:{name}", null_stage, cfg, name, g, out, part.modularity if part else None)
    if not cfg.period:
        for mode in [cfg.mode] if cfg.mode else list(MODES):
            files += _stage(f"compare:{mode}", comparison_stage, cfg, corpus, mode, ("fidelity", "similarity"), out)
    manifest = {
        "config": cfg.to_dict(),
        "config_sha256": cfg.digest(),
        "input_sha256": _sha256(Path(cfg.input)),
        "graphs": graphs,
        "files": {f.name: _sha256(f) for f in sorted(set(files))},
        "versions": {"chordnet": __version__, "numpy": np.__version__, "python": platform.python_version()},
    }
    write_json(manifest_path, manifest)
    return manifest_path
