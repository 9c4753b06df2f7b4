"""Command-line front end: one subcommand per pipeline stage.

Every subcommand writes JSON/CSV artifacts plus a manifest into an output
directory. Artifacts are deterministic for a given config and seed: keys are
sorted, floats are normalized to 12 significant digits, manifests carry a
config hash and library versions but no timestamps. Later stages (`compare`,
`report`) read earlier stages' artifacts from the same directory by their
fixed names.

Typical flow on synthetic data::

    tweetdyn synth --out runs/demo
    tweetdyn ingest --input runs/demo/records.jsonl --format jsonl --out runs/demo
    tweetdyn counts --out runs/demo
    tweetdyn changepoint --out runs/demo
    tweetdyn strategy --out runs/demo
    tweetdyn spectra --out runs/demo
    tweetdyn cluster-spectral --out runs/demo
    tweetdyn cluster-topic --out runs/demo
    tweetdyn compare --out runs/demo
    tweetdyn report --out runs/demo
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__, compare, spectral, strategy, synth, timeseries, topic
from .ingest import (
    CohortSpec,
    ColumnMap,
    parse_records,
    retweet_network,
    select_cohort,
    write_records,
)
from .graphs import modularity_communities
from .timeseries import DayWindow

logger = logging.getLogger(__name__)

RECORDS_FILE = "records.jsonl"
LABELS_FILE = "labels.json"


@dataclass(frozen=True)
class RunConfig:
    """All pipeline knobs; JSON-loadable, CLI-overridable."""

    input_paths: tuple[str, ...] = ()
    input_format: str = "jsonl"
    column_map: ColumnMap = field(default_factory=ColumnMap)
    language: str | None = "en"

    bulk_window: DayWindow = field(
        default_factory=lambda: DayWindow(date(2015, 1, 1), date(2018, 1, 1))
    )
    pre_window: DayWindow = field(
        default_factory=lambda: DayWindow(date(2016, 3, 9), date(2016, 11, 8))
    )
    post_window: DayWindow = field(
        default_factory=lambda: DayWindow(date(2016, 11, 29), date(2017, 7, 31))
    )
    reference_window: DayWindow = field(
        default_factory=lambda: DayWindow(date(2015, 7, 20), date(2016, 9, 9))
    )
    comparison_window: DayWindow = field(
        default_factory=lambda: DayWindow(date(2016, 9, 9), date(2017, 5, 10))
    )

    min_total_tweets: int = 1093
    active_day_fraction: float = 0.6

    ma_window: int = 7
    denoise_q: float = 0.33
    pca_dims: int = 3
    kmedoids_k: int = 4
    restarts: int = 10
    fourier_terms: int = 6

    model1_range: tuple[int, int] = (200, 616)
    model1_t0: int = 200
    model2_range: tuple[int, int] = (616, 859)
    model2_t0: int = 616
    sigma: float = 5.0

    dynamic_p: float = 0.5
    gamma_q: float = 0.9
    knn_k: int = 10
    top_m: int = 25

    synth_rates: tuple[float, float] = (1973.81, 3647.54)
    synth_change_day: int = 616
    seed: int = 20170510

    def topic_config(self) -> topic.TopicConfig:
        return topic.TopicConfig(
            dynamic_p=self.dynamic_p,
            gamma_q=self.gamma_q,
            knn_k=self.knn_k,
            top_m=self.top_m,
        )

    def analysis_window(self, name: str) -> DayWindow:
        try:
            return {
                "pre": self.pre_window,
                "post": self.post_window,
                "bulk": self.bulk_window,
                "reference": self.reference_window,
                "comparison": self.comparison_window,
            }[name]
        except KeyError:
            raise ValueError(f"unknown window name {name!r}") from None


def _window_from_json(value: Any) -> DayWindow:
    if isinstance(value, dict):
        value = [value["start"], value["end"]]
    return DayWindow(date.fromisoformat(value[0]), date.fromisoformat(value[1]))


def load_config(path: str | Path | None, overrides: dict[str, Any]) -> RunConfig:
    """RunConfig from an optional JSON file plus CLI overrides."""
    data: dict[str, Any] = {}
    if path is not None:
        with Path(path).open() as fh:
            data = json.load(fh)
    data.update(overrides)
    kwargs: dict[str, Any] = {}
    for f in dataclasses.fields(RunConfig):
        if f.name not in data:
            continue
        value = data[f.name]
        if f.name.endswith("_window"):
            value = _window_from_json(value) if not isinstance(value, DayWindow) else value
        elif f.name == "column_map":
            value = ColumnMap(**value) if isinstance(value, dict) else value
        elif f.name == "input_paths":
            value = tuple(value)
        elif f.name in ("model1_range", "model2_range", "synth_rates"):
            value = tuple(value)
        kwargs[f.name] = value
    return RunConfig(**kwargs)


def _plain(obj: Any) -> Any:
    """JSON-safe, deterministic view: numpy unwrapped, floats at 12 digits."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [_plain(v) for v in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer, int)) and not isinstance(obj, bool):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return float(f"{f:.12g}") if np.isfinite(f) else None
    if isinstance(obj, DayWindow):
        return [obj.start.isoformat(), obj.end.isoformat()]
    if isinstance(obj, date):
        return obj.isoformat()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _plain(dataclasses.asdict(obj))
    return obj


def write_json(path: Path, payload: Any) -> None:
    path.write_text(
        json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n",
        encoding="utf-8",
    )


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    def fmt(v: Any) -> Any:
        if isinstance(v, (np.floating, float)):
            return f"{float(v):.12g}"
        if isinstance(v, np.integer):
            return int(v)
        return v

    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def config_hash(config: RunConfig) -> str:
    canon = json.dumps(_plain(config), sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def write_manifest(
    outdir: Path,
    command: str,
    config: RunConfig,
    artifacts: list[str],
    status: str = "ok",
    error: str | None = None,
) -> None:
    payload = {
        "command": command,
        "status": status,
        "error": error,
        "artifacts": sorted(artifacts),
        "config": _plain(config),
        "config_sha256": config_hash(config),
        "versions": {
            "tweetdyn": __version__,
            "numpy": np.__version__,
            "python": ".".join(map(str, sys.version_info[:3])),
        },
    }
    write_json(outdir / f"manifest_{command.replace('-', '_')}.json", payload)


def _load_records(config: RunConfig, outdir: Path):
    """Records from configured inputs, else the directory's normalized file."""
    paths = list(config.input_paths)
    fmt = config.input_format
    if not paths:
        fallback = outdir / RECORDS_FILE
        if not fallback.exists():
            raise FileNotFoundError(
                f"no input_paths configured and {fallback} does not exist"
            )
        paths, fmt = [str(fallback)], "jsonl"
    records = []
    for p in paths:
        part, report = parse_records(p, fmt=fmt, columns=config.column_map)
        records.extend(part)
        if report.rejected:
            logger.warning("%s: %d rows rejected", p, report.rejected)
    return records


def _campaign_users(records) -> set[str]:
    return {r.user_id for r in records}


def resolve_cohort(records, config: RunConfig, window: DayWindow) -> list[str]:
    """Volume threshold over the bulk window AND regularity over ``window``."""
    volume = select_cohort(
        records,
        CohortSpec(
            window=config.bulk_window,
            min_total_tweets=config.min_total_tweets,
            language=config.language,
        ),
    )
    regular = select_cohort(
        records,
        CohortSpec(
            window=window,
            active_day_fraction=config.active_day_fraction,
            language=config.language,
        ),
    )
    return sorted(volume & regular)


# ---------------------------------------------------------------- subcommands


def cmd_ingest(config: RunConfig, outdir: Path) -> list[str]:
    if not config.input_paths:
        raise FileNotFoundError("ingest needs --input (or input_paths in config)")
    records = []
    reports = {}
    for p in config.input_paths:
        part, report = parse_records(p, fmt=config.input_format, columns=config.column_map)
        records.extend(part)
        reports[p] = report.as_dict()
    records.sort(key=lambda r: (r.timestamp, r.tweet_id))
    write_records(records, outdir / RECORDS_FILE, fmt="jsonl")
    write_json(outdir / "parse_report.json", reports)
    write_json(outdir / "campaign_users.json", sorted(_campaign_users(records)))
    network = retweet_network(records, _campaign_users(records))
    parts, q = modularity_communities(network)
    write_json(
        outdir / "retweet_network.json",
        {
            "n_vertices": network.n_vertices,
            "n_edges": network.n_edges,
            "total_weight": network.total_weight,
            "modularity": q,
            "n_communities": len(parts),
            "communities": [sorted(p) for p in parts],
        },
    )
    return [RECORDS_FILE, "parse_report.json", "campaign_users.json", "retweet_network.json"]


def cmd_counts(config: RunConfig, outdir: Path, window_name: str = "pre") -> list[str]:
    records = _load_records(config, outdir)
    window = config.analysis_window(window_name)
    cohort = resolve_cohort(records, config, window)
    artifacts = []
    aggregate = timeseries.daily_counts(records, config.bulk_window)
    timeseries.save_series_csv(aggregate, outdir / "counts_aggregate.csv")
    artifacts.append("counts_aggregate.csv")
    by_user = timeseries.counts_by_user(records, window, cohort)
    rows = [
        [uid, t, int(v)]
        for uid, series in by_user.items()
        for t, v in enumerate(series.values)
    ]
    write_csv(outdir / f"counts_{window_name}.csv", ["user_id", "day_offset", "count"], rows)
    artifacts.append(f"counts_{window_name}.csv")
    write_json(outdir / f"cohort_{window_name}.json", cohort)
    artifacts.append(f"cohort_{window_name}.json")
    return artifacts


def cmd_changepoint(config: RunConfig, outdir: Path) -> list[str]:
    series_path = outdir / "counts_aggregate.csv"
    if series_path.exists():
        series = timeseries.load_series_csv(series_path)
    else:
        records = _load_records(config, outdir)
        series = timeseries.daily_counts(records, config.bulk_window)
    s = timeseries.accumulate(series)
    fit1 = timeseries.fit_segment(s, config.model1_range, config.model1_t0)
    fit2 = timeseries.fit_segment(s, config.model2_range, config.model2_t0)
    verdict = timeseries.changepoint_significant(fit1, fit2, config.sigma)
    write_json(
        outdir / "changepoint.json",
        {
            "model1": fit1,
            "model2": fit2,
            "sigma": config.sigma,
            "slope_interval_1": verdict.interval_before,
            "slope_interval_2": verdict.interval_after,
            "significant": verdict.significant,
        },
    )
    return ["changepoint.json"]


def cmd_strategy(config: RunConfig, outdir: Path) -> list[str]:
    records = _load_records(config, outdir)
    campaign = _campaign_users(records)
    ref_w, cmp_w = config.reference_window, config.comparison_window
    cohort = sorted(
        set(resolve_cohort(records, config, ref_w))
        | set(resolve_cohort(records, config, cmp_w))
    )
    if not cohort:
        raise ValueError("strategy: empty cohort in both windows")
    sequences = {}
    for window_name, window in (("reference", ref_w), ("comparison", cmp_w)):
        for uid in cohort:
            seq = strategy.symbol_sequence(records, campaign, uid, window)
            if seq:
                sequences.setdefault(window_name, {})[uid] = {
                    "day_offsets": [t for t, _ in seq],
                    "symbols": strategy.symbol_string(seq),
                }
    ref_dist = strategy.symbol_distribution(records, campaign, cohort, ref_w)
    cmp_dist = strategy.symbol_distribution(records, campaign, cohort, cmp_w)
    chi2 = strategy.chi_square_shift(cmp_dist, ref_dist)
    write_json(
        outdir / "strategy.json",
        {
            "cohort": cohort,
            "sequences": sequences,
            "reference_counts": dict(ref_dist.counts),
            "comparison_counts": dict(cmp_dist.counts),
            "reference_shares": ref_dist.normalized,
            "comparison_shares": cmp_dist.normalized,
            "chi_square": chi2,
            "critical_value_p999_df6": strategy.shift_critical_value(),
        },
    )
    return ["strategy.json"]


def _cohort_spectra(
    records, config: RunConfig, window: DayWindow
) -> dict[str, spectral.Spectrum]:
    cohort = resolve_cohort(records, config, window)
    if not cohort:
        raise ValueError("no users in cohort; nothing to transform")
    by_user = timeseries.counts_by_user(records, window, cohort)
    out: dict[str, spectral.Spectrum] = {}
    for uid, series in by_user.items():
        osc = timeseries.detrend(series, config.ma_window)
        out[uid] = spectral.denoise(spectral.dft(osc), config.denoise_q)
    return out


def cmd_spectra(config: RunConfig, outdir: Path, window_name: str = "pre") -> list[str]:
    records = _load_records(config, outdir)
    window = config.analysis_window(window_name)
    spectra = _cohort_spectra(records, config, window)
    users = sorted(spectra)
    rows = [
        [uid, k, float(m)]
        for uid in users
        for k, m in enumerate(spectra[uid].magnitudes)
    ]
    write_csv(
        outdir / f"spectra_{window_name}.csv", ["user_id", "bin", "magnitude"], rows
    )
    band = spectral.band_summary([spectra[u] for u in users])
    band_rows = [
        [k, band.mins[k], band.q1[k], band.medians[k], band.q3[k], band.maxs[k]]
        for k in range(len(band.medians))
    ]
    write_csv(
        outdir / f"band_{window_name}.csv",
        ["bin", "min", "q1", "median", "q3", "max"],
        band_rows,
    )
    return [f"spectra_{window_name}.csv", f"band_{window_name}.csv"]


def cmd_cluster_spectral(
    config: RunConfig, outdir: Path, window_name: str = "pre"
) -> list[str]:
    records = _load_records(config, outdir)
    window = config.analysis_window(window_name)
    spectra = _cohort_spectra(records, config, window)
    ids, matrix = spectral.spectra_matrix(list(spectra.values()))
    embedding = spectral.pca_embed(matrix, ids, dims=config.pca_dims)
    assignment = spectral.kmedoids(
        embedding.points,
        embedding.ids,
        k=config.kmedoids_k,
        seed=config.seed,
        restarts=config.restarts,
    )
    write_csv(
        outdir / "embedding.csv",
        ["user_id"] + [f"pc{i + 1}" for i in range(config.pca_dims)] + ["cluster"],
        [
            [uid] + [float(x) for x in embedding.points[i]] + [assignment.labels[uid]]
            for i, uid in enumerate(embedding.ids)
        ],
    )
    write_csv(
        outdir / "eigenvalues.csv",
        ["rank", "eigenvalue"],
        [[i + 1, float(v)] for i, v in enumerate(embedding.eigenvalues)],
    )
    clusters_payload = {}
    artifacts = ["embedding.csv", "eigenvalues.csv", "clusters_spectral.json"]
    for c in range(1, assignment.k + 1):
        members = assignment.members(c)
        cluster_spectra = [spectra[u] for u in members]
        band = spectral.band_summary(cluster_spectra)
        write_csv(
            outdir / f"cluster_band_{c}.csv",
            ["bin", "min", "q1", "median", "q3", "max"],
            [
                [k, band.mins[k], band.q1[k], band.medians[k], band.q3[k], band.maxs[k]]
                for k in range(len(band.medians))
            ],
        )
        artifacts.append(f"cluster_band_{c}.csv")
        med = spectral.median_spectrum(cluster_spectra)
        models = {
            u: spectral.fit_fourier(spectra[u], j_terms=config.fourier_terms)
            for u in members
        }
        clusters_payload[str(c)] = {
            "members": members,
            "medoid": assignment.medoids[c - 1],
            "dominant_period_days": spectral.dominant_period(med),
            "fourier_terms": {
                u: [
                    {
                        "amplitude": t.amplitude,
                        "omega": t.omega,
                        "phase": t.phase,
                        "bin": t.bin,
                    }
                    for t in m.terms
                ]
                for u, m in models.items()
            },
        }
    write_json(
        outdir / "clusters_spectral.json",
        {"k": assignment.k, "cost": assignment.cost, "clusters": clusters_payload,
         "window": window, "n_users": len(ids)},
    )
    return artifacts


def cmd_cluster_topic(
    config: RunConfig, outdir: Path, window_name: str = "pre"
) -> list[str]:
    records = _load_records(config, outdir)
    window = config.analysis_window(window_name)
    cohort = resolve_cohort(records, config, window)
    result = topic.topic_communities(records, cohort, window, config.topic_config())
    write_json(
        outdir / "clusters_topic.json",
        {
            "window": window,
            "n_users": len(result.documents),
            "n_dynamic_stopwords": len(result.dynamic_stopwords),
            "dynamic_stopwords": result.dynamic_stopwords,
            "vocabulary_size": len(result.vocabulary),
            "modularity": result.modularity,
            "communities": [sorted(p) for p in result.partition],
        },
    )
    write_csv(
        outdir / "topic_edges.csv",
        ["user_a", "user_b", "similarity"],
        [[u, v, w] for (u, v), w in result.graph.edges.items()],
    )
    top_rows = []
    for idx, ranked in enumerate(result.top_terms, start=1):
        for rank, (term, count) in enumerate(ranked, start=1):
            top_rows.append([idx, rank, term, count])
    write_csv(
        outdir / "topic_top_terms.csv",
        ["community", "rank", "term", "count"],
        top_rows,
    )
    return ["clusters_topic.json", "topic_edges.csv", "topic_top_terms.csv"]


def cmd_compare(config: RunConfig, outdir: Path, window_name: str = "pre") -> list[str]:
    spec_path = outdir / "clusters_spectral.json"
    topic_path = outdir / "clusters_topic.json"
    for p in (spec_path, topic_path):
        if not p.exists():
            raise FileNotFoundError(f"compare needs {p.name}; run the cluster steps first")
    spec_doc = json.loads(spec_path.read_text())
    topic_doc = json.loads(topic_path.read_text())
    labels = {
        u: int(c)
        for c, info in spec_doc["clusters"].items()
        for u in info["members"]
    }
    assignment = spectral.ClusterAssignment(
        labels=labels,
        medoids=tuple(
            spec_doc["clusters"][str(c)]["medoid"]
            for c in range(1, spec_doc["k"] + 1)
        ),
        cost=float(spec_doc["cost"]),
    )
    partition = [frozenset(p) for p in topic_doc["communities"]]
    tab = compare.cross_tab(assignment, partition)
    write_csv(
        outdir / "crosstab.csv",
        ["spectral_cluster"] + [f"community_{j}" for j in tab.topic_ids],
        [[sid] + [int(v) for v in tab.cells[i]] for i, sid in enumerate(tab.spectral_ids)],
    )
    records = _load_records(config, outdir)
    window = config.analysis_window(window_name)
    spectra = _cohort_spectra(records, config, window)
    subclusters = {}
    for i, sid in enumerate(tab.spectral_ids):
        for j, tid in enumerate(tab.topic_ids):
            if tab.cells[i, j] == 0:
                continue
            summary = compare.intersect_subcluster(
                assignment.members(sid), partition[tid - 1], spectra
            )
            subclusters[f"s{sid}_t{tid}"] = {
                "users": summary.users,
                "dominant_period_days": summary.dominant_period_days,
                "median_band": summary.band.medians,
            }
    write_json(
        outdir / "compare.json",
        {"diversity": tab.diversity(), "subclusters": subclusters},
    )
    return ["crosstab.csv", "compare.json"]


def _demo_corpus_spec(config: RunConfig) -> synth.CorpusSpec:
    """Four groups whose rate dynamics, vocabularies and strategies differ."""
    dynamics = synth.reference_cluster_specs(members=8)
    mixes = [
        ((0.80, 0.10, 0.10), (0.15, 0.15, 0.70)),
        ((0.70, 0.20, 0.10), (0.10, 0.20, 0.70)),
        ((0.15, 0.70, 0.15), (0.15, 0.70, 0.15)),
        ((0.10, 0.15, 0.75), (0.10, 0.15, 0.75)),
    ]
    groups = tuple(
        synth.GroupCorpusSpec(
            group_id=d.group_id,
            vocabulary=synth.planted_vocabulary(d.group_id, 30),
            members=d.members,
            strategy_pre=pre,
            strategy_post=post,
            dynamics=d,
        )
        for d, (pre, post) in zip(dynamics, mixes)
    )
    return synth.CorpusSpec(
        groups=groups,
        noise_vocabulary=synth.planted_vocabulary("shared-noise", 20),
        noise_weight=0.2,
        tokens_per_tweet=8,
        changepoint_day=config.pre_window.n_days // 2,
    )


def cmd_synth(config: RunConfig, outdir: Path, kind: str = "corpus") -> list[str]:
    if kind == "corpus":
        spec = _demo_corpus_spec(config)
        records, labels = synth.generate_corpus(spec, config.pre_window, config.seed)
        write_records(records, outdir / RECORDS_FILE, fmt="jsonl")
        write_json(outdir / LABELS_FILE, labels)
        return [RECORDS_FILE, LABELS_FILE]
    if kind == "series":
        specs = synth.reference_cluster_specs()
        series, labels = synth.generate_series(specs, config.pre_window, config.seed)
        rows = [
            [s.user_id, t, int(v)] for s in series for t, v in enumerate(s.values)
        ]
        write_csv(outdir / "synth_series.csv", ["user_id", "day_offset", "count"], rows)
        write_json(outdir / LABELS_FILE, labels)
        return ["synth_series.csv", LABELS_FILE]
    if kind == "changepoint":
        series = synth.generate_changepoint_aggregate(
            config.synth_rates[0],
            config.synth_rates[1],
            config.synth_change_day,
            DayWindow.of_length(config.bulk_window.start, 860),
            config.seed,
        )
        timeseries.save_series_csv(series, outdir / "counts_aggregate.csv")
        return ["counts_aggregate.csv"]
    raise ValueError(f"unknown synth kind {kind!r}")


def cmd_report(config: RunConfig, outdir: Path) -> list[str]:
    """Collect the directory's JSON artifacts into one report document."""
    wanted = [
        "parse_report.json",
        "retweet_network.json",
        "changepoint.json",
        "strategy.json",
        "clusters_spectral.json",
        "clusters_topic.json",
        "compare.json",
    ]
    sections = {}
    for name in wanted:
        p = outdir / name
        sections[name.removesuffix(".json")] = (
            json.loads(p.read_text()) if p.exists() else None
        )
    headline = {}
    if sections["changepoint"]:
        headline["rate_before"] = sections["changepoint"]["model1"]["slope"]
        headline["rate_after"] = sections["changepoint"]["model2"]["slope"]
        headline["changepoint_significant"] = sections["changepoint"]["significant"]
    if sections["strategy"]:
        headline["strategy_chi_square"] = sections["strategy"]["chi_square"]
    if sections["clusters_topic"]:
        headline["n_topic_communities"] = len(sections["clusters_topic"]["communities"])
        headline["topic_modularity"] = sections["clusters_topic"]["modularity"]
    if sections["clusters_spectral"]:
        headline["n_spectral_clusters"] = sections["clusters_spectral"]["k"]
    write_json(outdir / "report.json", {"headline": headline, "sections": sections})
    return ["report.json"]


# -------------------------------------------------------------------- driver


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tweetdyn",
        description="Rate-spectrum, strategy and topic analysis of tweet streams",
    )
    parser.add_argument("--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_window: bool = False) -> None:
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--input", action="append", dest="inputs", help="input file")
        p.add_argument("--format", choices=["csv", "jsonl"], help="input format")
        p.add_argument("--seed", type=int, help="random seed")
        p.add_argument("--language", help="language filter ('' disables)")
        if needs_window:
            p.add_argument(
                "--window",
                default="pre",
                choices=["pre", "post", "bulk"],
                help="analysis window",
            )

    common(sub.add_parser("ingest", help="parse raw tweet tables"))
    common(sub.add_parser("counts", help="daily count series"), needs_window=True)
    common(sub.add_parser("changepoint", help="fit the accumulation curve"))
    common(sub.add_parser("strategy", help="symbolized strategy dynamics"))
    common(sub.add_parser("spectra", help="per-user rate spectra"), needs_window=True)
    common(
        sub.add_parser("cluster-spectral", help="PCA + k-medoids over spectra"),
        needs_window=True,
    )
    common(
        sub.add_parser("cluster-topic", help="text-similarity communities"),
        needs_window=True,
    )
    common(
        sub.add_parser("compare", help="cross-tabulate the two clusterings"),
        needs_window=True,
    )
    synth_p = sub.add_parser("synth", help="generate ground-truth synthetic data")
    common(synth_p)
    synth_p.add_argument(
        "--kind",
        default="corpus",
        choices=["corpus", "series", "changepoint"],
        help="what to generate",
    )
    common(sub.add_parser("report", help="assemble a single report document"))
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    overrides: dict[str, Any] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.format is not None:
        overrides["input_format"] = args.format
    if args.inputs:
        overrides["input_paths"] = tuple(args.inputs)
    if args.language is not None:
        overrides["language"] = args.language or None
    try:
        config = load_config(args.config, overrides)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        logger.error("bad config: %s", exc)
        return 2
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    handlers = {
        "ingest": lambda: cmd_ingest(config, outdir),
        "counts": lambda: cmd_counts(config, outdir, args.window),
        "changepoint": lambda: cmd_changepoint(config, outdir),
        "strategy": lambda: cmd_strategy(config, outdir),
        "spectra": lambda: cmd_spectra(config, outdir, args.window),
        "cluster-spectral": lambda: cmd_cluster_spectral(config, outdir, args.window),
        "cluster-topic": lambda: cmd_cluster_topic(config, outdir, args.window),
        "compare": lambda: cmd_compare(config, outdir, args.window),
        "synth": lambda: cmd_synth(config, outdir, args.kind),
        "report": lambda: cmd_report(config, outdir),
    }
    try:
        artifacts = handlers[args.command]()
    except Exception as exc:
        logger.error("%s failed: %s", args.command, exc)
        write_manifest(outdir, args.command, config, [], status="failed", error=str(exc))
        return 1
    write_manifest(outdir, args.command, config, artifacts)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
