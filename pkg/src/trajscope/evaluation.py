"""Displacement-error scoring for prediction windows, plus an analytic
constant-velocity baseline and a reader for externally produced predictions.

Errors are pixel-space Euclidean displacements: ade averages over every
predicted point, fde looks at the final point only. The harness scores any
callable that maps a window to a Prediction, so learned models can be
evaluated by exporting their outputs to the documented JSONL record format
(one object per line: {"window_id": ..., "points": [[x, y], ...]}).
"""
from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .preprocess import TrajectoryWindow
from .types import StructuralError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Prediction:
    """Predicted future points for one window, aligned by window id."""

    window_id: str
    points: np.ndarray  # (predict_len, 2)


@dataclass(frozen=True)
class EvalReport:
    """Mean errors for one (dataset, group, preprocessing-config) cell."""

    dataset: str
    group: str  # "all" or a class label
    config: str
    ade: float
    fde: float
    n_windows: int


Predictor = Callable[[TrajectoryWindow], Prediction]


def _paired(prediction, truth) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(prediction, dtype=np.float64)
    true = np.asarray(truth, dtype=np.float64)
    if pred.shape != true.shape or pred.ndim != 2 or pred.shape[1] != 2:
        raise StructuralError(
            f"prediction and truth must both be (n, 2) points, got "
            f"{pred.shape} vs {true.shape}"
        )
    if len(pred) == 0:
        raise StructuralError("cannot score an empty prediction")
    return pred, true


def ade(prediction, truth) -> float:
    """Mean Euclidean displacement over all predicted points."""
    pred, true = _paired(prediction, truth)
    gaps = pred - true
    return float(np.hypot(gaps[:, 0], gaps[:, 1]).mean())


def fde(prediction, truth) -> float:
    """Euclidean displacement at the final predicted point."""
    pred, true = _paired(prediction, truth)
    gap = pred[-1] - true[-1]
    return float(np.hypot(gap[0], gap[1]))


def constant_velocity_predict(window: TrajectoryWindow) -> Prediction:
    """Extrapolate the mean observed step linearly over the future points."""
    observed = np.asarray(window.observed, dtype=np.float64)
    if len(observed) < 2:
        raise StructuralError(
            f"window {window.window_id}: constant-velocity needs >= 2 observed points"
        )
    step = (observed[-1] - observed[0]) / (len(observed) - 1)
    horizon = len(window.future)
    points = observed[-1] + np.outer(np.arange(1, horizon + 1), step)
    return Prediction(window.window_id, points)


def predictor_from_mapping(mapping: Mapping[str, Sequence]) -> Predictor:
    """Serve pre-computed predictions by window id; unknown ids are rejected."""

    def predict(window: TrajectoryWindow) -> Prediction:
        try:
            points = mapping[window.window_id]
        except KeyError:
            raise StructuralError(
                f"no prediction supplied for window {window.window_id}"
            ) from None
        points = np.asarray(points, dtype=np.float64)
        if points.shape != (len(window.future), 2):
            raise StructuralError(
                f"prediction for window {window.window_id} has shape "
                f"{points.shape}, expected ({len(window.future)}, 2)"
            )
        return Prediction(window.window_id, points)

    return predict


def load_predictions(path) -> dict[str, np.ndarray]:
    """Read a JSONL predictions file into {window_id: (n, 2) points}."""
    out: dict[str, np.ndarray] = {}
    text = Path(path).read_text()
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            window_id = record["window_id"]
            points = np.asarray(record["points"], dtype=np.float64)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"{path}:{line_no}: bad prediction record: {exc}")
        if points.ndim != 2 or points.shape[1] != 2:
            raise StructuralError(
                f"{path}:{line_no}: points must be a list of [x, y] pairs"
            )
        if window_id in out:
            raise StructuralError(f"{path}:{line_no}: duplicate window id {window_id}")
        out[str(window_id)] = points
    return out


def evaluate(
    windows: Sequence[TrajectoryWindow],
    predictor: Predictor,
    *,
    config_label: str = "default",
    grouping: str = "all+class",
) -> list[EvalReport]:
    """Score every window once, then average per group.

    Groups are "all" plus one row per class present (grouping: "all",
    "class", or "all+class"); classes with no windows are omitted. Rows
    come back sorted by dataset, with "all" ahead of the class rows.
    """
    if grouping not in ("all", "class", "all+class"):
        raise StructuralError(f"unknown grouping {grouping!r}")
    if not windows:
        logger.info("evaluate called with no windows; nothing to report")
        return []
    scored: list[tuple[str, str, float, float]] = []
    for window in windows:
        prediction = predictor(window)
        scored.append(
            (
                window.track.source.dataset,
                window.class_label,
                ade(prediction.points, window.future),
                fde(prediction.points, window.future),
            )
        )

    groups: dict[tuple[str, str], list[tuple[float, float]]] = {}
    for dataset, class_label, a, f in scored:
        if grouping in ("all", "all+class"):
            groups.setdefault((dataset, "all"), []).append((a, f))
        if grouping in ("class", "all+class"):
            groups.setdefault((dataset, class_label), []).append((a, f))

    def order(key: tuple[str, str]):
        dataset, group = key
        return (dataset, group != "all", group)

    reports = []
    for dataset, group in sorted(groups, key=order):
        errors = groups[(dataset, group)]
        # fsum gives the correctly rounded sum in any order, so a permuted
        # window list cannot change the reported means
        reports.append(
            EvalReport(
                dataset=dataset,
                group=group,
                config=config_label,
                ade=math.fsum(a for a, _ in errors) / len(errors),
                fde=math.fsum(f for _, f in errors) / len(errors),
                n_windows=len(errors),
            )
        )
    return reports
