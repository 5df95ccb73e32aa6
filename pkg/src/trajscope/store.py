"""Intermediate trajectory store: one JSONL file per video plus a manifest.

Raw annotation parsing is the slowest part of the pipeline, so ingestion
serializes assembled trajectories once and every later command reads this
store instead of the raw files. One line per trajectory:

    {"track_id": 1, "segment": 0, "class": "Pedestrian",
     "dataset": "sdd", "scene": "quad", "video": "video0",
     "points": [[frame, x, y, lost, occluded, generated], ...]}

Flags are stored as 0/1. Files and records are written in sorted order with
sorted keys and no timestamps, so identical inputs produce byte-identical
stores.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Sequence

from .types import SourceRef, StructuralError, TrackPoint, Trajectory

STORE_SCHEMA_VERSION = 1
MANIFEST_NAME = "manifest.json"


def video_filename(source: SourceRef) -> str:
    for part in source.key():
        if "__" in part or "/" in part or not part:
            raise StructuralError(f"source {source.key()} cannot name a store file")
    return f"{source.dataset}__{source.scene}__{source.video}.jsonl"


def _trajectory_record(traj: Trajectory) -> dict:
    return {
        "track_id": traj.track_id,
        "segment": traj.segment,
        "class": traj.class_label,
        "dataset": traj.source.dataset,
        "scene": traj.source.scene,
        "video": traj.source.video,
        "points": [
            [p.frame, p.x, p.y, int(p.lost), int(p.occluded), int(p.generated)]
            for p in traj.points
        ],
    }


def _trajectory_from_record(record: dict) -> Trajectory:
    points = [
        TrackPoint(
            frame=int(frame),
            x=float(x),
            y=float(y),
            lost=bool(lost),
            occluded=bool(occluded),
            generated=bool(generated),
        )
        for frame, x, y, lost, occluded, generated in record["points"]
    ]
    return Trajectory(
        track_id=int(record["track_id"]),
        class_label=str(record["class"]),
        points=points,
        source=SourceRef(
            dataset=str(record["dataset"]),
            scene=str(record["scene"]),
            video=str(record["video"]),
        ),
        segment=int(record["segment"]),
    )


def write_store(
    trajectories: Sequence[Trajectory],
    store_dir,
    diagnostics: Mapping[str, dict] | None = None,
) -> dict:
    """Write every trajectory, grouped per video, and return the manifest."""
    if not trajectories:
        raise StructuralError("refusing to write an empty store")
    store_path = Path(store_dir)
    store_path.mkdir(parents=True, exist_ok=True)

    by_video: dict[tuple[str, str, str], list[Trajectory]] = {}
    for traj in trajectories:
        by_video.setdefault(traj.source.key(), []).append(traj)

    videos = []
    for key in sorted(by_video):
        trajs = sorted(by_video[key], key=lambda t: (t.track_id, t.segment))
        filename = video_filename(trajs[0].source)
        with open(store_path / filename, "w") as fh:
            for traj in trajs:
                fh.write(json.dumps(_trajectory_record(traj), sort_keys=True))
                fh.write("\n")
        videos.append(
            {
                "dataset": key[0],
                "scene": key[1],
                "video": key[2],
                "file": filename,
                "n_trajectories": len(trajs),
                "n_points": sum(len(t.points) for t in trajs),
            }
        )

    manifest = {
        "schema_version": STORE_SCHEMA_VERSION,
        "videos": videos,
        "diagnostics": dict(diagnostics) if diagnostics else {},
    }
    with open(store_path / MANIFEST_NAME, "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return manifest


def load_manifest(store_dir) -> dict:
    store_path = Path(store_dir)
    manifest_path = store_path / MANIFEST_NAME
    if not manifest_path.is_file():
        raise StructuralError(
            f"no ingested store at {store_path}: run the ingest command first"
        )
    with open(manifest_path) as fh:
        return json.load(fh)


def load_store(store_dir) -> list[Trajectory]:
    """Read every trajectory back, in manifest order."""
    store_path = Path(store_dir)
    manifest = load_manifest(store_path)
    trajectories: list[Trajectory] = []
    for entry in manifest["videos"]:
        file_path = store_path / entry["file"]
        try:
            with open(file_path) as fh:
                for line in fh:
                    if line.strip():
                        trajectories.append(_trajectory_from_record(json.loads(line)))
        except (OSError, KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise StructuralError(f"corrupt store file {file_path}: {exc}")
    return trajectories
