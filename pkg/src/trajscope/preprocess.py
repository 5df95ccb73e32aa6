"""Preprocessing pipeline: lost-point filtering, resampling, windowing.

The pipeline order is fixed: filter lost points on the raw trajectory, then
resample to the target rate, then cut observation/prediction windows.
Filtering must come first — resampling first would alias short lost runs
into the kept points.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .types import ConfigError, TrackPoint, Trajectory


class LostPolicy(str, Enum):
    """What to do with points flagged as lost (out of the video's bounds).

    FILTER_KEEP_FIRST: drop lost points; if that splits the trajectory,
        keep only the first contiguous piece.
    FILTER_KEEP_ALL: drop lost points; keep every contiguous piece as its
        own trajectory (ids get a .k suffix).
    KEEP_LOST: leave the trajectory untouched.
    """

    FILTER_KEEP_FIRST = "filter_keep_first"
    FILTER_KEEP_ALL = "filter_keep_all"
    KEEP_LOST = "keep_lost"

    @classmethod
    def parse(cls, value: "LostPolicy | str") -> "LostPolicy":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            options = ", ".join(p.value for p in cls)
            raise ConfigError(f"unknown lost policy {value!r} (options: {options})") from None


@dataclass
class PreprocessConfig:
    lost_policy: LostPolicy = LostPolicy.FILTER_KEEP_FIRST
    drop_generated: bool = False
    target_rate: float = 2.5
    observe_len: int = 8
    predict_len: int = 12
    # None -> non-overlapping tiles (stride = observe_len + predict_len)
    stride: int | None = None

    @property
    def window_len(self) -> int:
        return self.observe_len + self.predict_len

    def validate(self) -> None:
        if self.observe_len < 2:
            raise ConfigError("observe_len must be >= 2 (velocity needs two points)")
        if self.predict_len < 1:
            raise ConfigError("predict_len must be >= 1")
        if self.target_rate <= 0:
            raise ConfigError("target_rate must be positive")
        if self.stride is not None and self.stride < 1:
            raise ConfigError("stride must be >= 1")


@dataclass(frozen=True)
class TrajectoryWindow:
    """One observation/prediction sample cut from a trajectory."""

    track: Trajectory
    start_frame: int
    frames: np.ndarray  # (observe_len + predict_len,) native frame indices
    observed: np.ndarray  # (observe_len, 2)
    future: np.ndarray  # (predict_len, 2)

    @property
    def class_label(self) -> str:
        return self.track.class_label

    @property
    def window_id(self) -> str:
        src = self.track.source
        return f"{src.dataset}:{src.scene}:{src.video}:{self.track.uid}@{self.start_frame}"


@dataclass(frozen=True)
class LostPositions:
    start: bool
    middle: bool
    end: bool


def _segments(points: Sequence[TrackPoint]) -> list[list[TrackPoint]]:
    """Maximal runs of consecutive non-lost points."""
    runs: list[list[TrackPoint]] = []
    current: list[TrackPoint] = []
    for p in points:
        if p.lost:
            if current:
                runs.append(current)
                current = []
        else:
            current.append(p)
    if current:
        runs.append(current)
    return runs


def filter_lost(traj: Trajectory, policy: LostPolicy | str) -> list[Trajectory]:
    """Apply a lost policy; an entirely-lost trajectory yields an empty list."""
    policy = LostPolicy.parse(policy)
    if policy is LostPolicy.KEEP_LOST:
        return [traj]
    runs = _segments(traj.points)
    if not runs:
        return []
    if policy is LostPolicy.FILTER_KEEP_FIRST:
        return [traj.with_points(runs[0])]
    return [traj.with_points(run, segment=i) for i, run in enumerate(runs)]


def classify_lost_positions(traj: Trajectory) -> LostPositions:
    """Where do the lost points sit: first point, last point, and/or a run
    strictly inside the trajectory (non-lost on both sides)?

    The flags are independent; one trajectory can set all three. A fully
    lost trajectory counts as start+end but not middle.
    """
    flags = [p.lost for p in traj.points]
    if not flags:
        return LostPositions(False, False, False)
    start = flags[0]
    end = flags[-1]
    middle = False
    in_run = False
    bounded_left = False
    for i, lost in enumerate(flags):
        if lost:
            if not in_run:
                in_run = True
                bounded_left = i > 0 and not flags[i - 1]
        else:
            if in_run and bounded_left:
                middle = True
            in_run = False
    return LostPositions(start=start, middle=middle, end=end)


def resample(traj: Trajectory, native_rate: float, target_rate: float) -> Trajectory:
    """Keep every k-th point, k = native_rate/target_rate, anchored at the
    trajectory's first point."""
    if native_rate <= 0 or target_rate <= 0:
        raise ConfigError("frame rates must be positive")
    ratio = native_rate / target_rate
    k = round(ratio)
    if k < 1 or abs(ratio - k) > 1e-9:
        raise ConfigError(
            f"target rate {target_rate} does not evenly divide native rate {native_rate}"
        )
    if k == 1:
        return traj
    return traj.with_points(traj.points[::k])


def window(traj: Trajectory, cfg: PreprocessConfig) -> list[TrajectoryWindow]:
    """Cut observe+predict windows from an already-resampled trajectory.

    Windows tile from the start (stride defaults to the full window length);
    a trailing remainder shorter than one window is discarded.
    """
    cfg.validate()
    total = cfg.window_len
    stride = cfg.stride or total
    n = len(traj.points)
    if n < total:
        return []
    xy = traj.xy()
    frames = traj.frames()
    out: list[TrajectoryWindow] = []
    for start in range(0, n - total + 1, stride):
        stop = start + total
        out.append(
            TrajectoryWindow(
                track=traj,
                start_frame=int(frames[start]),
                frames=frames[start:stop].copy(),
                observed=xy[start : start + cfg.observe_len].copy(),
                future=xy[start + cfg.observe_len : stop].copy(),
            )
        )
    return out


def drop_generated(traj: Trajectory) -> Trajectory:
    return traj.with_points([p for p in traj.points if not p.generated])


def preprocess_trajectory(
    traj: Trajectory, cfg: PreprocessConfig, native_rate: float
) -> list[TrajectoryWindow]:
    """filter -> (drop generated) -> resample -> window, flattened."""
    cfg.validate()
    windows: list[TrajectoryWindow] = []
    for piece in filter_lost(traj, cfg.lost_policy):
        if cfg.drop_generated:
            piece = drop_generated(piece)
        if not piece.points:
            continue
        piece = resample(piece, native_rate, cfg.target_rate)
        windows.extend(window(piece, cfg))
    return windows
