"""Shared domain types and error classes.

Coordinates are pixel-space throughout: x grows rightward, y grows downward.
All timestamps are integer frame indices in the source video's native clock.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

# Canonical class labels. SDD ships the first six; inD maps onto
# {Pedestrian, Biker, Car, TruckBus}. TruckBus stays distinct from Bus
# because the two datasets count them differently.
SDD_CLASSES: tuple[str, ...] = ("Pedestrian", "Biker", "Skater", "Cart", "Car", "Bus")
IND_CLASSES: tuple[str, ...] = ("Pedestrian", "Biker", "Car", "TruckBus")
ALL_CLASSES: tuple[str, ...] = SDD_CLASSES + ("TruckBus",)

_CANONICAL_BY_LOWER = {c.lower(): c for c in ALL_CLASSES}


def canonical_class(label: str) -> str | None:
    """Map a raw class label to its canonical spelling, case-insensitively.

    Returns None for labels outside the known set; callers decide whether
    that is a parse error or a mapping concern.
    """
    return _CANONICAL_BY_LOWER.get(label.strip().lower())


class ToolError(Exception):
    """Base class for all errors this package raises deliberately."""


class ParseError(ToolError):
    """A malformed input row. Carries the source path and 1-based line number."""

    def __init__(self, message: str, path: str = "<input>", line_no: int | None = None):
        self.path = path
        self.line_no = line_no
        where = path if line_no is None else f"{path}:{line_no}"
        super().__init__(f"{where}: {message}")


class StructuralError(ToolError):
    """Input parsed row-by-row but violates a cross-row constraint."""


class ConfigError(ToolError):
    """An invalid configuration value or registry schema violation."""


class InsufficientDataError(ToolError):
    """Too few samples for the requested computation."""


class DomainError(ToolError):
    """A value outside an operation's mathematical domain."""


@dataclass(frozen=True)
class SourceRef:
    """Identifies where a trajectory came from: (dataset, scene, video)."""

    dataset: str
    scene: str
    video: str

    def key(self) -> tuple[str, str, str]:
        return (self.dataset, self.scene, self.video)


@dataclass(frozen=True)
class TrackPoint:
    frame: int
    x: float
    y: float
    lost: bool = False
    occluded: bool = False
    generated: bool = False


@dataclass(frozen=True)
class AnnotationRecord:
    """One raw bounding-box row: track id, box, frame, status flags, label."""

    track_id: int
    xmin: float
    ymin: float
    xmax: float
    ymax: float
    frame: int
    lost: bool
    occluded: bool
    generated: bool
    label: str

    @property
    def center(self) -> tuple[float, float]:
        return ((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)


@dataclass
class Trajectory:
    """Ordered per-frame center coordinates for one track.

    `segment` distinguishes pieces of the same raw track id after a
    split-into-segments filter; segment 0 is the unsplit/first piece.
    """

    track_id: int
    class_label: str
    points: list[TrackPoint]
    source: SourceRef
    segment: int = 0

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[TrackPoint]:
        return iter(self.points)

    @property
    def uid(self) -> str:
        if self.segment:
            return f"{self.track_id}.{self.segment}"
        return str(self.track_id)

    @property
    def first_frame(self) -> int:
        return self.points[0].frame

    @property
    def last_frame(self) -> int:
        return self.points[-1].frame

    def frames(self) -> np.ndarray:
        return np.array([p.frame for p in self.points], dtype=np.int64)

    def xy(self) -> np.ndarray:
        """(n, 2) float array of center coordinates in point order."""
        return np.array([(p.x, p.y) for p in self.points], dtype=np.float64)

    def lost_flags(self) -> np.ndarray:
        return np.array([p.lost for p in self.points], dtype=bool)

    def with_points(self, points: Sequence[TrackPoint], segment: int | None = None) -> "Trajectory":
        return Trajectory(
            track_id=self.track_id,
            class_label=self.class_label,
            points=list(points),
            source=self.source,
            segment=self.segment if segment is None else segment,
        )

    def validate(self) -> None:
        frames = [p.frame for p in self.points]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise StructuralError(
                f"track {self.uid} of {self.source.key()}: frames not strictly increasing"
            )


def scene_diagonal(trajectories: Sequence[Trajectory]) -> float:
    """Diagonal of the bounding box of every center coordinate, in pixels.

    Used as the scale reference for distance normalization when no reference
    image is available (images are never read).
    """
    if not trajectories:
        return 0.0
    mins = np.full(2, np.inf)
    maxs = np.full(2, -np.inf)
    for traj in trajectories:
        if not traj.points:
            continue
        xy = traj.xy()
        mins = np.minimum(mins, xy.min(axis=0))
        maxs = np.maximum(maxs, xy.max(axis=0))
    if not np.all(np.isfinite(mins)):
        return 0.0
    return float(np.hypot(*(maxs - mins)))
