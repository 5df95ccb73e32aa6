from __future__ import annotations

import json
from pathlib import Path

import pytest

from trajscope.cli import main
from trajscope.preprocess import LostPolicy, PreprocessConfig, preprocess_trajectory
from trajscope.store import load_store


def sdd_row(tid: int, x: int, y: int, frame: int, lost: int = 0, label: str = "Pedestrian") -> str:
    return f'{tid} {x - 2} {y - 2} {x + 2} {y + 2} {frame} {lost} 0 0 "{label}"'


def write_sdd_tree(root: Path) -> Path:
    video0 = root / "annotations" / "quad" / "video0"
    video1 = root / "annotations" / "quad" / "video1"
    video0.mkdir(parents=True)
    video1.mkdir(parents=True)

    rows = []
    for i in range(60):  # two pedestrians walking abreast, 4 px apart
        rows.append(sdd_row(0, 100 + i, 100, i))
        rows.append(sdd_row(1, 100 + i, 104, i))
    for i in range(40):  # biker, lost for its first 10 frames
        y = 200 if i < 10 else 200 + (i - 10)
        rows.append(sdd_row(2, 300, y, i, lost=1 if i < 10 else 0, label="Biker"))
    for i in range(5):  # parked cart, too short for anything
        rows.append(sdd_row(3, 400, 400, i, label="Cart"))
    (video0 / "annotations.txt").write_text("\n".join(rows) + "\n")

    rows = []
    for i in range(25):  # parked pedestrian, lost in the middle
        rows.append(sdd_row(0, 50, 50, i, lost=1 if 10 <= i < 15 else 0))
    (video1 / "annotations.txt").write_text("\n".join(rows) + "\n")
    return root / "annotations"


def write_config(path: Path, annotations: Path, out: Path, **extra) -> Path:
    lines = [
        "dataset: sdd",
        f"inputs: [{annotations}]",
        f"out: {out}",
        "preprocess:",
        "  target_rate: 30.0",
        "aim:",
        "  delta: 0.98",
        "  n_window: 5",
        "mi:",
        "  n_min: 6",
        "rho:",
        "  v0: 1.0",
        "  sigma_d: 125.0",
        "  a0: 0.25",
    ]
    for key, value in extra.items():
        lines.append(f"{key}: {value}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def workspace(tmp_path):
    annotations = write_sdd_tree(tmp_path)
    out = tmp_path / "out"
    config = write_config(tmp_path / "config.yaml", annotations, out)
    return tmp_path, annotations, out, config


def run(argv) -> int:
    return main([str(a) for a in argv])


# --- ingest ---------------------------------------------------------------------


def test_ingest_sdd_creates_store(workspace, capsys) -> None:
    _, _, out, config = workspace
    assert run(["ingest", "--config", config]) == 0
    store = out / "store"
    names = sorted(p.name for p in store.iterdir())
    assert names == ["manifest.json", "sdd__quad__video0.jsonl", "sdd__quad__video1.jsonl"]
    manifest = json.loads((store / "manifest.json").read_text())
    assert {v["video"]: v["n_trajectories"] for v in manifest["videos"]} == {
        "video0": 4,
        "video1": 1,
    }
    assert "quad/video0" in manifest["diagnostics"]


def test_ingest_missing_input_named_on_stderr(tmp_path, capsys) -> None:
    config = write_config(
        tmp_path / "config.yaml", tmp_path / "no_such_dir", tmp_path / "out"
    )
    assert run(["ingest", "--config", config]) != 0
    assert "no_such_dir" in capsys.readouterr().err


def test_ingest_parse_error_names_file_and_line(tmp_path, capsys) -> None:
    annotations = write_sdd_tree(tmp_path)
    bad = annotations / "quad" / "video1" / "annotations.txt"
    bad.write_text('0 1 2 3 4 0 0 0 0 "Pedestrian"\nnot a row\n')
    config = write_config(tmp_path / "config.yaml", annotations, tmp_path / "out")
    assert run(["ingest", "--config", config]) != 0
    err = capsys.readouterr().err
    assert "annotations.txt:2" in err


def test_ingest_ind_store(tmp_path, capsys) -> None:
    data = tmp_path / "data"
    data.mkdir()
    header = "recordingId,trackId,frame,trackLifetime,xCenter,yCenter,heading\n"
    rows = [
        f"0,{tid},{frame},0,{1.0 + 0.1 * frame},{-2.0},0.0"
        for tid in (1, 2)
        for frame in range(30)
    ]
    (data / "00_tracks.csv").write_text(header + "\n".join(rows) + "\n")
    (data / "00_tracksMeta.csv").write_text(
        "recordingId,trackId,initialFrame,finalFrame,numFrames,class\n"
        "0,1,0,29,30,pedestrian\n0,2,0,29,30,car\n"
    )
    (data / "00_recordingMeta.csv").write_text(
        "recordingId,locationId,frameRate,orthoPxToMeter\n0,1,25.0,0.01\n"
    )
    config = tmp_path / "config.yaml"
    config.write_text(
        f"dataset: ind\ninputs: [{data}]\nout: {tmp_path / 'out'}\n"
    )
    assert run(["ingest", "--config", config]) == 0
    trajs = load_store(tmp_path / "out" / "store")
    assert {t.class_label for t in trajs} == {"Pedestrian", "Car"}

    (data / "00_tracksMeta.csv").unlink()
    assert run(["ingest", "--config", config]) != 0
    assert "00_tracksMeta.csv" in capsys.readouterr().err


# --- stats ------------------------------------------------------------------------


def test_stats_reports(workspace, capsys) -> None:
    _, _, out, config = workspace
    assert run(["ingest", "--config", config]) == 0
    assert run(["stats", "--config", config]) == 0
    reports = out / "reports"

    lost_csv = (reports / "lost_stats.csv").read_text()
    assert lost_csv.splitlines()[0] == (
        "scene,n_trajectories,pct_lost_start,pct_lost_middle,pct_lost_end"
    )
    assert "quad,5,20.00,20.00,0.00" in lost_csv

    class_csv = (reports / "class_distribution.csv").read_text()
    header, quad_row = class_csv.splitlines()[0], class_csv.splitlines()[1]
    assert header == "scene,n_tracks,Pedestrian,Biker,Skater,Cart,Car,Bus"
    assert quad_row == "quad,5,60.00,20.00,0.00,20.00,0.00,0.00"

    lost_jsonl = [
        json.loads(line)
        for line in (reports / "lost_stats.jsonl").read_text().splitlines()
    ]
    assert lost_jsonl[0]["pct_lost_start"] == 20.0

    overlap_csv = (reports / "overlap_report.csv").read_text().splitlines()
    assert overlap_csv[0] == "scene,location_overlap,time_overlap,simultaneous_groups"
    assert "coupa,partial,full,1-2-3-4" in overlap_csv
    assert "deathcircle,full,none," in overlap_csv


def test_stats_requires_ingest(workspace, capsys) -> None:
    _, _, _, config = workspace
    assert run(["stats", "--config", config]) != 0
    assert "ingest" in capsys.readouterr().err


# --- aim ---------------------------------------------------------------------------


def test_aim_pair_export(workspace) -> None:
    _, _, out, config = workspace
    run(["ingest", "--config", config])
    assert run(["aim", "--config", config, "--pair", "0,1"]) == 0
    aim_dir = out / "aim"
    base = "sdd__quad__video0__pair_0_1"
    csv_path = aim_dir / f"{base}.csv"
    jsonl_path = aim_dir / f"{base}.jsonl"
    meta_path = aim_dir / f"{base}.meta.json"
    assert csv_path.is_file() and jsonl_path.is_file() and meta_path.is_file()

    lines = csv_path.read_text().splitlines()
    assert lines[0] == "frame,xi,yi,xj,yj,mi,rho,aim"
    # first measured frame: warm-up buffer of 5 frames
    first = lines[1].split(",")
    assert first[0] == "5"
    assert first[1] == "105.000000"  # 6-decimal fixed formatting
    assert len(lines) == 1 + (60 - 5)

    meta = json.loads(meta_path.read_text())
    assert meta["delta"] == 0.98
    assert meta["n_window"] == 5
    assert meta["agent_i"] == "0" and meta["agent_j"] == "1"
    assert meta["sigma_d"] == 125.0

    records = [json.loads(line) for line in jsonl_path.read_text().splitlines()]
    assert records[0]["frame"] == 5
    assert all(rec["aim"] >= 0 for rec in records)


def test_aim_unknown_track(workspace, capsys) -> None:
    _, _, _, config = workspace
    run(["ingest", "--config", config])
    assert run(["aim", "--config", config, "--pair", "0,77"]) != 0
    assert "77" in capsys.readouterr().err


def test_aim_insufficient_co_presence(workspace, capsys) -> None:
    _, _, _, config = workspace
    run(["ingest", "--config", config])
    # the cart (track 3) only exists for 5 frames: shorter than the buffer
    assert run(["aim", "--config", config, "--pair", "0,3"]) != 0
    assert "co-present" in capsys.readouterr().err


def test_aim_top_k(workspace) -> None:
    _, _, out, config = workspace
    run(["ingest", "--config", config])
    assert run(["aim", "--config", config, "--top-k", "3"]) == 0
    series = sorted(p.name for p in (out / "aim").glob("*.csv"))
    assert len(series) == 3


def test_aim_sweep(workspace) -> None:
    _, _, out, config = workspace
    run(["ingest", "--config", config])
    assert (
        run(
            [
                "aim", "--config", config, "--pair", "0,1",
                "--sweep-delta", "1.0,0.5", "--sweep-n", "5,8",
            ]
        )
        == 0
    )
    names = sorted(p.name for p in (out / "aim").glob("*pair_0_1*.csv"))
    assert names == [
        "sdd__quad__video0__pair_0_1__d0.5__n5.csv",
        "sdd__quad__video0__pair_0_1__d0.5__n8.csv",
        "sdd__quad__video0__pair_0_1__d1.0__n5.csv",
        "sdd__quad__video0__pair_0_1__d1.0__n8.csv",
    ]


# --- eval ---------------------------------------------------------------------------


def test_eval_constant_velocity_two_policies(workspace) -> None:
    _, _, out, config = workspace
    run(["ingest", "--config", config])
    assert (
        run(
            [
                "eval", "--config", config,
                "--lost-policy", "keep_lost,filter_keep_first",
            ]
        )
        == 0
    )
    rows = [
        json.loads(line)
        for line in (out / "reports" / "eval.jsonl").read_text().splitlines()
    ]
    all_rows = {r["config"]: r for r in rows if r["group"] == "all"}
    assert all_rows["keep_lost"]["n_windows"] == 9
    assert all_rows["filter_keep_first"]["n_windows"] == 7
    groups = {r["group"] for r in rows}
    assert {"all", "Pedestrian", "Biker"} <= groups

    csv_lines = (out / "reports" / "eval.csv").read_text().splitlines()
    assert csv_lines[0] == "dataset,config,group,n_windows,ade,fde"
    assert all(len(line.split(",")) == 6 for line in csv_lines[1:])


def test_eval_external_predictions(workspace, tmp_path) -> None:
    _, _, out, config = workspace
    run(["ingest", "--config", config])
    # build a perfect predictions file for the filter_keep_first windows
    cfg = PreprocessConfig(lost_policy=LostPolicy.FILTER_KEEP_FIRST, target_rate=30.0)
    windows = [
        w
        for t in load_store(out / "store")
        for w in preprocess_trajectory(t, cfg, 30.0)
    ]
    preds = tmp_path / "preds.jsonl"
    with open(preds, "w") as fh:
        for w in windows:
            fh.write(
                json.dumps(
                    {"window_id": w.window_id, "points": [list(map(float, p)) for p in w.future]}
                )
                + "\n"
            )
    assert (
        run(
            [
                "eval", "--config", config,
                "--predictor", preds,
                "--lost-policy", "filter_keep_first",
            ]
        )
        == 0
    )
    rows = [
        json.loads(line)
        for line in (out / "reports" / "eval.jsonl").read_text().splitlines()
    ]
    assert all(r["ade"] == 0.0 and r["fde"] == 0.0 for r in rows)


def test_eval_external_predictions_unknown_window(workspace, tmp_path, capsys) -> None:
    _, _, _, config = workspace
    run(["ingest", "--config", config])
    preds = tmp_path / "preds.jsonl"
    preds.write_text(
        json.dumps({"window_id": "sdd:quad:video0:0@0", "points": [[0.0, 0.0]] * 12}) + "\n"
    )
    assert run(["eval", "--config", config, "--predictor", preds]) != 0
    assert "window" in capsys.readouterr().err


# --- determinism ------------------------------------------------------------------------


def test_outputs_byte_identical_across_runs(tmp_path) -> None:
    annotations = write_sdd_tree(tmp_path)
    outputs = {}
    for label in ("first", "second"):
        out = tmp_path / label
        config = write_config(tmp_path / f"{label}.yaml", annotations, out)
        assert run(["ingest", "--config", config]) == 0
        assert run(["stats", "--config", config]) == 0
        assert run(["aim", "--config", config, "--top-k", "2"]) == 0
        assert run(["eval", "--config", config, "--lost-policy", "keep_lost"]) == 0
        tree = {}
        for path in sorted(out.rglob("*")):
            if path.is_file():
                tree[str(path.relative_to(out))] = path.read_bytes()
        outputs[label] = tree
    assert sorted(outputs["first"]) == sorted(outputs["second"])
    for name in outputs["first"]:
        assert outputs["first"][name] == outputs["second"][name], name


def test_usage_error_unknown_command(capsys) -> None:
    with pytest.raises(SystemExit):
        main(["frobnicate"])
