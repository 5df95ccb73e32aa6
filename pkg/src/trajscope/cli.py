"""Command-line surface: ingest raw annotations once, then run statistics,
interaction measurement, and prediction evaluation against the stored
trajectories.

    trajscope ingest --config run.yaml
    trajscope stats  --config run.yaml
    trajscope aim    --config run.yaml --pair 12,31 --sweep-delta 1.0,0.98
    trajscope eval   --config run.yaml --lost-policy keep_lost,filter_keep_first

All outputs are deterministic: identical config and inputs produce
byte-identical files (sorted iteration everywhere, fixed decimal formats,
no timestamps). Status lines go to stderr; data goes to files.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import yaml

from .aim import (
    DEFAULT_DELTA,
    InteractionPair,
    MeasureSeries,
    RhoConfig,
    extract_interactions,
    fit_normalizers,
    measure_interaction,
    sweep,
)
from .analytics import (
    class_distribution,
    group_trajectories_for_stats,
    lost_stats,
    overlap_report,
)
from .evaluation import (
    constant_velocity_predict,
    evaluate,
    load_predictions,
    predictor_from_mapping,
)
from .ind import parse_ind_tracks
from .mi import DEFAULT_BANDWIDTHS, DEFAULT_N_MIN
from .preprocess import LostPolicy, PreprocessConfig, preprocess_trajectory
from .registry import load_registry
from .sdd import IngestDiagnostics, assemble_trajectories, parse_sdd_annotations
from .store import load_store, write_store
from .types import (
    ConfigError,
    IND_CLASSES,
    InsufficientDataError,
    SDD_CLASSES,
    SourceRef,
    ToolError,
    Trajectory,
    scene_diagonal,
)

# Kinematics window length in native frames when the config leaves it null:
# about 1 second of motion history at each dataset's frame rate.
DEFAULT_N_WINDOW = {"sdd": 30, "ind": 25}

EXPORT_FORMATS = ("csv", "jsonl", "both")


@dataclass
class RunConfig:
    """Everything a command needs, resolved from YAML plus --out."""

    dataset: str
    inputs: list[Path]
    out: Path
    registry_path: Path | None
    preprocess: PreprocessConfig
    rho: RhoConfig
    fit_v0: bool
    fit_sigma_d: bool
    fit_a0: bool
    delta: float
    n_window: int | None
    bandwidths: tuple[float, ...]
    weights: tuple[float, ...] | None
    n_min: int
    export_format: str

    @property
    def store_dir(self) -> Path:
        return self.out / "store"

    @property
    def reports_dir(self) -> Path:
        return self.out / "reports"

    @property
    def aim_dir(self) -> Path:
        return self.out / "aim"


def _section(raw: Mapping, name: str, allowed: Sequence[str]) -> dict:
    section = raw.get(name) or {}
    if not isinstance(section, Mapping):
        raise ConfigError(f"config section {name!r} must be a mapping")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown keys in config section {name!r}: {unknown}")
    return dict(section)


def load_run_config(config_path, out_override: str | None = None) -> RunConfig:
    config_file = Path(config_path)
    if not config_file.is_file():
        raise ConfigError(f"config file does not exist: {config_file}")
    raw = yaml.safe_load(config_file.read_text())
    if not isinstance(raw, Mapping):
        raise ConfigError(f"config file {config_file} must contain a mapping")
    allowed_top = ("dataset", "inputs", "out", "registry", "preprocess", "rho", "aim", "mi", "export_format")
    unknown = sorted(set(raw) - set(allowed_top))
    if unknown:
        raise ConfigError(f"unknown top-level config keys: {unknown}")

    dataset = raw.get("dataset")
    if dataset not in ("sdd", "ind"):
        raise ConfigError(f"dataset must be 'sdd' or 'ind', got {dataset!r}")

    inputs_raw = raw.get("inputs")
    if isinstance(inputs_raw, (str, Path)):
        inputs_raw = [inputs_raw]
    if not inputs_raw:
        raise ConfigError("config needs at least one entry under inputs:")
    inputs = [Path(p) for p in inputs_raw]
    for path in inputs:
        if not path.exists():
            raise ConfigError(f"input path does not exist: {path}")

    out_raw = out_override or raw.get("out")
    if not out_raw:
        raise ConfigError("no output directory: set out: in the config or pass --out")

    registry_raw = raw.get("registry")
    registry_path = Path(registry_raw) if registry_raw else None
    if registry_path is not None and not registry_path.is_file():
        raise ConfigError(f"registry file does not exist: {registry_path}")

    pp = _section(
        raw, "preprocess",
        ("lost_policy", "drop_generated", "target_rate", "observe_len", "predict_len", "stride"),
    )
    preprocess = PreprocessConfig(
        lost_policy=LostPolicy.parse(pp.get("lost_policy", LostPolicy.FILTER_KEEP_FIRST)),
        drop_generated=bool(pp.get("drop_generated", False)),
        target_rate=float(pp.get("target_rate", 2.5)),
        observe_len=int(pp.get("observe_len", 8)),
        predict_len=int(pp.get("predict_len", 12)),
        stride=None if pp.get("stride") is None else int(pp["stride"]),
    )
    preprocess.validate()

    rho_raw = _section(
        raw, "rho", ("alpha", "v0", "sigma_d", "a0", "use_v", "use_d", "use_h", "use_a")
    )
    defaults = RhoConfig()
    # null (or absent) normalizer constants mean: fit them from the data
    fit_v0 = rho_raw.get("v0") is None
    fit_sigma_d = rho_raw.get("sigma_d") is None
    fit_a0 = rho_raw.get("a0") is None
    rho = RhoConfig(
        alpha=float(rho_raw.get("alpha", defaults.alpha)),
        v0=defaults.v0 if fit_v0 else float(rho_raw["v0"]),
        sigma_d=defaults.sigma_d if fit_sigma_d else float(rho_raw["sigma_d"]),
        a0=defaults.a0 if fit_a0 else float(rho_raw["a0"]),
        use_v=bool(rho_raw.get("use_v", True)),
        use_d=bool(rho_raw.get("use_d", True)),
        use_h=bool(rho_raw.get("use_h", True)),
        use_a=bool(rho_raw.get("use_a", False)),
    )
    rho.validate()

    aim_raw = _section(raw, "aim", ("delta", "n_window"))
    delta = float(aim_raw.get("delta", DEFAULT_DELTA))
    if not 0.0 < delta <= 1.0:
        raise ConfigError(f"aim.delta must be in (0, 1], got {delta!r}")
    n_window = None if aim_raw.get("n_window") is None else int(aim_raw["n_window"])
    if n_window is not None and n_window < 1:
        raise ConfigError(f"aim.n_window must be >= 1, got {n_window}")

    mi_raw = _section(raw, "mi", ("bandwidths", "weights", "n_min"))
    bandwidths = tuple(float(b) for b in mi_raw.get("bandwidths", DEFAULT_BANDWIDTHS))
    weights_raw = mi_raw.get("weights")
    weights = None if weights_raw is None else tuple(float(w) for w in weights_raw)
    n_min = int(mi_raw.get("n_min", DEFAULT_N_MIN))

    export_format = raw.get("export_format", "both")
    if export_format not in EXPORT_FORMATS:
        raise ConfigError(
            f"export_format must be one of {EXPORT_FORMATS}, got {export_format!r}"
        )

    return RunConfig(
        dataset=dataset,
        inputs=inputs,
        out=Path(out_raw),
        registry_path=registry_path,
        preprocess=preprocess,
        rho=rho,
        fit_v0=fit_v0,
        fit_sigma_d=fit_sigma_d,
        fit_a0=fit_a0,
        delta=delta,
        n_window=n_window,
        bandwidths=bandwidths,
        weights=weights,
        n_min=n_min,
        export_format=export_format,
    )


# --- report writing ---------------------------------------------------------------


def _format_cell(value, decimals: int | None) -> str:
    if decimals is not None and isinstance(value, float):
        return f"{value:.{decimals}f}"
    return str(value)


def _json_value(value, decimals: int | None):
    if decimals is not None and isinstance(value, float):
        return round(value, decimals)
    return value


def _write_table(
    base: Path,
    fieldnames: Sequence[str],
    rows: Sequence[Mapping],
    decimals: Mapping[str, int],
    export_format: str,
    jsonl_rows: Sequence[Mapping] | None = None,
) -> list[Path]:
    """Write rows as <base>.csv and/or <base>.jsonl with fixed formatting.

    jsonl_rows overrides the record payload for the structured export when
    the CSV needs a flattened rendering (e.g. nested group lists).
    """
    base.parent.mkdir(parents=True, exist_ok=True)
    written = []
    # append extensions rather than with_suffix: base names may contain dots
    if export_format in ("csv", "both"):
        path = base.parent / (base.name + ".csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(fieldnames)
            for row in rows:
                writer.writerow(
                    [_format_cell(row[f], decimals.get(f)) for f in fieldnames]
                )
        written.append(path)
    if export_format in ("jsonl", "both"):
        path = base.parent / (base.name + ".jsonl")
        source = jsonl_rows if jsonl_rows is not None else rows
        with open(path, "w") as fh:
            for row in source:
                payload = {k: _json_value(v, decimals.get(k)) for k, v in row.items()}
                fh.write(json.dumps(payload, sort_keys=True))
                fh.write("\n")
        written.append(path)
    return written


def _status(message: str) -> None:
    print(message, file=sys.stderr)


# --- ingest -----------------------------------------------------------------------


def _discover_sdd(inputs: Sequence[Path]) -> list[tuple[str, str, Path]]:
    found: dict[tuple[str, str], Path] = {}
    for path in inputs:
        if path.is_file():
            hits = [path]
        else:
            hits = sorted(path.rglob("annotations.txt"))
            if not hits:
                raise ConfigError(f"no annotations.txt files found under {path}")
        for hit in hits:
            scene = hit.parent.parent.name
            video = hit.parent.name
            found[(scene, video)] = hit
    return [(scene, video, found[(scene, video)]) for scene, video in sorted(found)]


def _discover_ind(inputs: Sequence[Path]) -> list[tuple[Path, Path, Path]]:
    tracks_files: list[Path] = []
    for path in inputs:
        if path.is_file():
            tracks_files.append(path)
        else:
            hits = sorted(path.rglob("*_tracks.csv"))
            if not hits:
                raise ConfigError(f"no *_tracks.csv files found under {path}")
            tracks_files.extend(hits)
    triples = []
    for tracks in sorted(set(tracks_files)):
        if not tracks.name.endswith("_tracks.csv"):
            raise ConfigError(f"not a tracks file: {tracks}")
        prefix = tracks.name[: -len("_tracks.csv")]
        meta = tracks.with_name(f"{prefix}_tracksMeta.csv")
        recording = tracks.with_name(f"{prefix}_recordingMeta.csv")
        for required in (meta, recording):
            if not required.is_file():
                raise ConfigError(f"missing companion file: {required}")
        triples.append((tracks, meta, recording))
    return triples


def cmd_ingest(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, args.out)
    trajectories: list[Trajectory] = []
    diagnostics: dict[str, dict] = {}
    if cfg.dataset == "sdd":
        for scene, video, path in _discover_sdd(cfg.inputs):
            source = SourceRef("sdd", scene, video)
            diag = IngestDiagnostics()
            records = parse_sdd_annotations(path)
            trajectories.extend(assemble_trajectories(records, source, diag))
            diagnostics[f"{scene}/{video}"] = diag.to_dict()
    else:
        for tracks, meta, recording in _discover_ind(cfg.inputs):
            parsed = parse_ind_tracks(tracks, meta, recording)
            trajectories.extend(parsed)
            if parsed:
                key = "/".join(parsed[0].source.key()[1:])
                diagnostics[key] = {
                    "tracks_file": tracks.name,
                    "n_trajectories": len(parsed),
                }
    write_store(trajectories, cfg.store_dir, diagnostics)
    _status(
        f"ingested {len(trajectories)} trajectories "
        f"({len(diagnostics)} videos) into {cfg.store_dir}"
    )
    return 0


# --- stats ------------------------------------------------------------------------


def cmd_stats(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, args.out)
    registry = load_registry(cfg.registry_path)
    trajectories = load_store(cfg.store_dir)
    groups = group_trajectories_for_stats(
        trajectories, registry=registry if cfg.dataset == "ind" else None
    )

    written: list[Path] = []
    lost_rows = [dataclasses.asdict(row) for row in lost_stats(groups)]
    written += _write_table(
        cfg.reports_dir / "lost_stats",
        ("scene", "n_trajectories", "pct_lost_start", "pct_lost_middle", "pct_lost_end"),
        lost_rows,
        {"pct_lost_start": 2, "pct_lost_middle": 2, "pct_lost_end": 2},
        cfg.export_format,
    )

    classes = SDD_CLASSES if cfg.dataset == "sdd" else IND_CLASSES
    class_rows = []
    for row in class_distribution(groups, classes):
        flat = {"scene": row.scene, "n_tracks": row.n_tracks}
        flat.update({c: row.percentages[c] for c in classes})
        class_rows.append(flat)
    written += _write_table(
        cfg.reports_dir / "class_distribution",
        ("scene", "n_tracks", *classes),
        class_rows,
        {c: 2 for c in classes},
        cfg.export_format,
    )

    if cfg.dataset == "sdd":
        overlap_csv_rows = []
        overlap_jsonl_rows = []
        for row in overlap_report(registry):
            groups_flat = "|".join(
                "-".join(str(v) for v in group) for group in row.simultaneous_groups
            )
            overlap_csv_rows.append(
                {
                    "scene": row.scene,
                    "location_overlap": row.location_overlap,
                    "time_overlap": row.time_overlap,
                    "simultaneous_groups": groups_flat,
                }
            )
            overlap_jsonl_rows.append(
                {
                    "scene": row.scene,
                    "location_overlap": row.location_overlap,
                    "time_overlap": row.time_overlap,
                    "simultaneous_groups": [list(g) for g in row.simultaneous_groups],
                }
            )
        written += _write_table(
            cfg.reports_dir / "overlap_report",
            ("scene", "location_overlap", "time_overlap", "simultaneous_groups"),
            overlap_csv_rows,
            {},
            cfg.export_format,
            jsonl_rows=overlap_jsonl_rows,
        )

    _status(f"wrote {len(written)} report files to {cfg.reports_dir}")
    return 0


# --- aim --------------------------------------------------------------------------


def _parse_float_list(text: str, what: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{what} must be a comma-separated list of numbers, got {text!r}")
    if not values:
        raise ConfigError(f"{what} is empty")
    return values


def _series_suffix(series: MeasureSeries, swept: bool) -> str:
    if not swept:
        return ""
    return f"__d{series.delta}__n{series.n_window}"


def _export_series(
    cfg: RunConfig, video_key: tuple[str, str, str], series: MeasureSeries, swept: bool
) -> None:
    pair = series.pair
    base_name = (
        f"{video_key[0]}__{video_key[1]}__{video_key[2]}"
        f"__pair_{pair.agent_i.uid}_{pair.agent_j.uid}{_series_suffix(series, swept)}"
    )
    base = cfg.aim_dir / base_name
    rows = []
    offset = series.n_window
    for k, frame in enumerate(series.frames):
        xi = pair.xi[offset + k]
        xj = pair.xj[offset + k]
        rows.append(
            {
                "frame": int(frame),
                "xi": float(xi[0]),
                "yi": float(xi[1]),
                "xj": float(xj[0]),
                "yj": float(xj[1]),
                "mi": float(series.mi[k]),
                "rho": float(series.rho[k]),
                "aim": float(series.aim[k]),
            }
        )
    float_fields = {name: 6 for name in ("xi", "yi", "xj", "yj", "mi", "rho", "aim")}
    _write_table(
        base,
        ("frame", "xi", "yi", "xj", "yj", "mi", "rho", "aim"),
        rows,
        float_fields,
        cfg.export_format,
    )
    rho_cfg = series.rho_config or RhoConfig()
    meta = {
        "dataset": video_key[0],
        "scene": video_key[1],
        "video": video_key[2],
        "agent_i": pair.agent_i.uid,
        "agent_j": pair.agent_j.uid,
        "class_i": pair.agent_i.class_label,
        "class_j": pair.agent_j.class_label,
        "delta": series.delta,
        "n_window": series.n_window,
        "alpha": rho_cfg.alpha,
        "v0": rho_cfg.v0,
        "sigma_d": rho_cfg.sigma_d,
        "a0": rho_cfg.a0,
        "use_v": rho_cfg.use_v,
        "use_d": rho_cfg.use_d,
        "use_h": rho_cfg.use_h,
        "use_a": rho_cfg.use_a,
        "bandwidths": list(cfg.bandwidths),
        "weights": None if cfg.weights is None else list(cfg.weights),
        "n_min": cfg.n_min,
        "first_frame": int(series.frames[0]),
        "last_frame": int(series.frames[-1]),
        "n_frames": len(series.frames),
        "final_aim": round(series.final, 6),
    }
    with open(base.parent / f"{base.name}.meta.json", "w") as fh:
        json.dump(meta, fh, sort_keys=True, indent=2)
        fh.write("\n")


def cmd_aim(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, args.out)
    trajectories = load_store(cfg.store_dir)
    n_window = cfg.n_window or DEFAULT_N_WINDOW[cfg.dataset]

    by_video: dict[tuple[str, str, str], list[Trajectory]] = {}
    for traj in trajectories:
        by_video.setdefault(traj.source.key(), []).append(traj)

    pairs_by_video = {
        key: extract_interactions(by_video[key], n_window) for key in sorted(by_video)
    }
    all_pairs = [p for key in sorted(pairs_by_video) for p in pairs_by_video[key]]

    base_rho = cfg.rho
    if (cfg.fit_v0 or cfg.fit_a0) and all_pairs:
        fitted = fit_normalizers(all_pairs, n_window, base=base_rho)
        base_rho = dataclasses.replace(
            base_rho,
            v0=fitted.v0 if cfg.fit_v0 else base_rho.v0,
            a0=fitted.a0 if cfg.fit_a0 else base_rho.a0,
        )

    def rho_for(key: tuple[str, str, str]) -> RhoConfig:
        if not cfg.fit_sigma_d:
            return base_rho
        diagonal = scene_diagonal(by_video[key])
        if diagonal <= 0:
            return base_rho
        return dataclasses.replace(base_rho, sigma_d=diagonal / 8.0)

    deltas = [cfg.delta]
    n_values = [n_window]
    swept = args.sweep_delta is not None or args.sweep_n is not None
    if args.sweep_delta is not None:
        deltas = _parse_float_list(args.sweep_delta, "--sweep-delta")
    if args.sweep_n is not None:
        n_values = [int(n) for n in _parse_float_list(args.sweep_n, "--sweep-n")]

    selected: list[tuple[tuple[str, str, str], InteractionPair]] = []
    if args.pair:
        parts = [part.strip() for part in args.pair.split(",")]
        if len(parts) != 2 or not all(parts):
            raise ConfigError(f"--pair expects 'TRACK_I,TRACK_J', got {args.pair!r}")
        uid_i, uid_j = parts
        known = {t.uid for t in trajectories}
        for uid in (uid_i, uid_j):
            if uid not in known:
                raise ConfigError(f"unknown track id {uid!r} (not in the ingested store)")
        for key in sorted(pairs_by_video):
            for pair in pairs_by_video[key]:
                if pair.key == (uid_i, uid_j):
                    selected.append((key, pair))
        if not selected:
            raise InsufficientDataError(
                f"tracks {uid_i} and {uid_j} share too few co-present frames "
                f"(need {n_window + 1} at constant spacing in one video)"
            )
    else:
        top_k = args.top_k if args.top_k is not None else 5
        if top_k < 1:
            raise ConfigError(f"--top-k must be >= 1, got {top_k}")
        ranked: list[tuple[float, tuple, tuple, InteractionPair]] = []
        for key in sorted(pairs_by_video):
            rho_cfg = rho_for(key)
            for pair in pairs_by_video[key]:
                series = measure_interaction(
                    pair,
                    delta=cfg.delta,
                    rho_config=rho_cfg,
                    bandwidths=cfg.bandwidths,
                    weights=cfg.weights,
                    n_min=cfg.n_min,
                )
                ranked.append((-series.final, key, pair.key, pair))
        if not ranked:
            raise InsufficientDataError(
                "no measurable pairs in the store "
                f"(need {n_window + 1} co-present frames at constant spacing)"
            )
        ranked.sort(key=lambda item: item[:3])
        selected = [(key, pair) for _, key, _, pair in ranked[:top_k]]

    n_series = 0
    for key, pair in selected:
        rho_cfg = rho_for(key)
        if swept:
            series_list = sweep(
                pair,
                deltas,
                n_values,
                rho_config=rho_cfg,
                bandwidths=cfg.bandwidths,
                weights=cfg.weights,
                n_min=cfg.n_min,
            )
        else:
            series_list = [
                measure_interaction(
                    pair,
                    delta=cfg.delta,
                    rho_config=rho_cfg,
                    bandwidths=cfg.bandwidths,
                    weights=cfg.weights,
                    n_min=cfg.n_min,
                )
            ]
        for series in series_list:
            _export_series(cfg, key, series, swept)
            n_series += 1
    _status(
        f"exported {n_series} measure series for {len(selected)} pairs to {cfg.aim_dir}"
    )
    return 0


# --- eval -------------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    cfg = load_run_config(args.config, args.out)
    registry = load_registry(cfg.registry_path)
    trajectories = load_store(cfg.store_dir)
    native_rate = registry.frame_rate(cfg.dataset)

    if args.lost_policy:
        policies = [LostPolicy.parse(p) for p in args.lost_policy.split(",") if p.strip()]
        if not policies:
            raise ConfigError(f"--lost-policy is empty: {args.lost_policy!r}")
    else:
        policies = [cfg.preprocess.lost_policy]

    if args.predictor == "constant_velocity":
        predictor = constant_velocity_predict
    else:
        predictions_path = Path(args.predictor)
        if not predictions_path.is_file():
            raise ConfigError(
                f"--predictor must be 'constant_velocity' or an existing "
                f"predictions file, got {args.predictor!r}"
            )
        predictor = predictor_from_mapping(load_predictions(predictions_path))

    rows = []
    for policy in policies:
        pcfg = dataclasses.replace(cfg.preprocess, lost_policy=policy)
        windows = [
            window
            for traj in trajectories
            for window in preprocess_trajectory(traj, pcfg, native_rate)
        ]
        if not windows:
            raise InsufficientDataError(
                f"preprocessing with lost policy {policy.value!r} produced no windows"
            )
        for report in evaluate(windows, predictor, config_label=policy.value):
            rows.append(dataclasses.asdict(report))

    ordered = ("dataset", "config", "group", "n_windows", "ade", "fde")
    rows = [{k: row[k] for k in ordered} for row in rows]
    written = _write_table(
        cfg.reports_dir / "eval",
        ordered,
        rows,
        {"ade": 6, "fde": 6},
        cfg.export_format,
    )
    _status(f"wrote {len(written)} evaluation report files to {cfg.reports_dir}")
    return 0


# --- entry point ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trajscope",
        description=(
            "Batch toolkit for drone-trajectory datasets: ingestion, "
            "dataset statistics, pairwise interaction measurement, and "
            "prediction evaluation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", required=True, help="run configuration YAML")
        p.add_argument("--out", default=None, help="output directory (overrides config)")

    p_ingest = sub.add_parser("ingest", help="parse raw annotations into the trajectory store")
    common(p_ingest)
    p_ingest.set_defaults(func=cmd_ingest)

    p_stats = sub.add_parser("stats", help="write lost-annotation, class, and overlap reports")
    common(p_stats)
    p_stats.set_defaults(func=cmd_stats)

    p_aim = sub.add_parser("aim", help="export per-pair interaction measure series")
    common(p_aim)
    p_aim.add_argument("--pair", default=None, help="directed pair of track ids: I,J")
    p_aim.add_argument("--top-k", type=int, default=None, help="export the K pairs with the highest final measure (default 5)")
    p_aim.add_argument("--sweep-delta", default=None, help="comma-separated memory factors to sweep")
    p_aim.add_argument("--sweep-n", default=None, help="comma-separated window lengths to sweep")
    p_aim.set_defaults(func=cmd_aim)

    p_eval = sub.add_parser("eval", help="score predictions with displacement errors")
    common(p_eval)
    p_eval.add_argument(
        "--predictor",
        default="constant_velocity",
        help="'constant_velocity' or a JSONL predictions file",
    )
    p_eval.add_argument(
        "--lost-policy",
        default=None,
        help="comma-separated lost policies to evaluate (default: config value)",
    )
    p_eval.set_defaults(func=cmd_eval)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ToolError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
