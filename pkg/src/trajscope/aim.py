"""Directed pairwise interaction measure over co-present trajectory frames.

For a directed pair (I, J) the per-frame interaction score couples two
ingredients evaluated on the native-rate frames they share:

* a dependence estimate between the two coordinate streams, computed
  incrementally over the growing history (see `trajscope.mi`), and
* a physics weight rho built from windowed kinematics: how fast the agents
  move (V), how far apart they are (D), and how squarely agent I is heading
  at agent J (H).

Scores are folded through an exponential-memory recurrence

    aim[t] = delta * aim[t-1] + rho[t] * mi[t],        aim before start = 0

so the final value equals sum_t delta^(T-t) * rho[t] * mi[t] exactly.
Measurement starts after a warm-up buffer of `n_window` frames so every
evaluation has a full kinematics window behind it.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .mi import DEFAULT_BANDWIDTHS, DEFAULT_N_MIN, mi_prefix_series
from .types import (
    ConfigError,
    DomainError,
    InsufficientDataError,
    StructuralError,
    Trajectory,
    scene_diagonal,
)

DEFAULT_DELTA = 0.98


@dataclass(frozen=True)
class Kinematics:
    """Windowed motion summary for one directed pair at one frame.

    v: mean per-step movement (both agents pooled), pixels per native frame.
    d: mean separation over the window's frames, pixels.
    h: mean unsigned angle between agent I's step and the bearing to J,
       radians in [0, pi]; 0 means heading straight at J.
    a: mean per-step speed change (both agents pooled), pixels per frame^2.
    """

    v: float
    d: float
    h: float
    a: float = 0.0


@dataclass(frozen=True)
class RhoConfig:
    """Physics-weight shape: rho = (alpha + V*) * D* * (1 + H*).

    V* = v / (v + v0) saturates toward 1 for fast pairs; alpha keeps a
    floor so stationary-but-close pairs are not zeroed outright.
    D* = exp(-d / sigma_d) decays with separation.
    H* = 1 - 2h/pi is +1 heading straight at the partner, -1 directly away.
    With use_a, the velocity factor becomes (alpha + V* + A*) where
    A* = a / (a + a0); the augmentation is part of the velocity factor and
    is ignored when use_v is off. Each use_* flag replaces its factor by 1.
    """

    alpha: float = 0.3
    v0: float = 1.0
    sigma_d: float = 125.0
    a0: float = 0.25
    use_v: bool = True
    use_d: bool = True
    use_h: bool = True
    use_a: bool = False

    def validate(self) -> None:
        if self.alpha < 0 or not math.isfinite(self.alpha):
            raise ConfigError(f"alpha must be >= 0, got {self.alpha!r}")
        for name in ("v0", "sigma_d", "a0"):
            value = getattr(self, name)
            if value <= 0 or not math.isfinite(value):
                raise ConfigError(f"{name} must be > 0, got {value!r}")


@dataclass(frozen=True, eq=False)
class InteractionPair:
    """One direction of a co-present pair: agent_i is the observer.

    frames holds the longest constant-spacing run of frames both agents
    share; xi/xj are the (L, 2) center coordinates aligned to it. The
    reverse direction is a separate pair with xi/xj swapped.
    """

    agent_i: Trajectory
    agent_j: Trajectory
    frames: np.ndarray
    xi: np.ndarray
    xj: np.ndarray
    n_window: int

    @property
    def first_frame(self) -> int:
        return int(self.frames[0])

    @property
    def last_frame(self) -> int:
        return int(self.frames[-1])

    @property
    def t_prime(self) -> int:
        """First measured frame: n_window frames into the common run."""
        return int(self.frames[self.n_window])

    @property
    def key(self) -> tuple[str, str]:
        return (self.agent_i.uid, self.agent_j.uid)

    def index_of(self, frame: int) -> int:
        idx = int(np.searchsorted(self.frames, frame))
        if idx >= len(self.frames) or self.frames[idx] != frame:
            raise DomainError(f"frame {frame} is not in the pair's common run")
        return idx


@dataclass(eq=False)
class MeasureSeries:
    """Per-frame interaction measurements for one directed pair."""

    pair: InteractionPair
    delta: float
    n_window: int
    frames: np.ndarray
    mi: np.ndarray
    rho: np.ndarray
    aim: np.ndarray
    rho_config: RhoConfig | None = field(default=None)

    @property
    def final(self) -> float:
        return float(self.aim[-1])


def _longest_uniform_run(frames: np.ndarray) -> np.ndarray:
    """Longest slice with constant frame spacing (earliest wins ties)."""
    if frames.size <= 2:
        return frames
    diffs = np.diff(frames)
    best_start, best_stop = 0, 1  # diff-index range of the best run
    start = 0
    for k in range(1, diffs.size + 1):
        if k == diffs.size or diffs[k] != diffs[start]:
            if k - start > best_stop - best_start:
                best_start, best_stop = start, k
            start = k
    return frames[best_start : best_stop + 1]


def extract_interactions(
    trajectories: Sequence[Trajectory],
    n_window: int,
    t_prime_offset: int | None = None,
) -> list[InteractionPair]:
    """Build every directed pair with enough co-presence to measure.

    Two trajectories qualify when their longest constant-spacing run of
    common frames still has at least one frame left after the warm-up
    buffer (`t_prime_offset` frames, default `n_window`). Each qualifying
    unordered pair yields both directions, ordered deterministically by
    (source, track id, segment).
    """
    if n_window < 1:
        raise ConfigError(f"n_window must be >= 1, got {n_window}")
    offset = n_window if t_prime_offset is None else int(t_prime_offset)
    if offset < n_window:
        raise ConfigError(
            f"t_prime_offset must be >= n_window ({n_window}), got {offset}"
        )
    ordered = sorted(
        trajectories, key=lambda t: (t.source.key(), t.track_id, t.segment)
    )
    pairs: list[InteractionPair] = []
    cache = [(t, t.frames(), t.xy()) for t in ordered]
    for (ta, fa, xa), (tb, fb, xb) in combinations(cache, 2):
        common = np.intersect1d(fa, fb)
        run = _longest_uniform_run(common)
        if run.size < offset + 1:
            continue
        pa = xa[np.searchsorted(fa, run)]
        pb = xb[np.searchsorted(fb, run)]
        pairs.append(InteractionPair(ta, tb, run, pa, pb, n_window))
        pairs.append(InteractionPair(tb, ta, run, pb, pa, n_window))
    return pairs


def compute_kinematics(pair: InteractionPair, t: int, n_window: int | None = None) -> Kinematics:
    """Summarize motion over the `n_window` steps ending at frame `t`.

    The window spans indices [it - n, it] of the common run, i.e. n steps
    and n+1 positions. Requesting a frame with fewer than n frames of
    co-presence behind it is a domain error.
    """
    n = pair.n_window if n_window is None else int(n_window)
    if n < 1:
        raise ConfigError(f"n_window must be >= 1, got {n}")
    it = pair.index_of(t)
    if it < n:
        raise DomainError(
            f"frame {t} has only {it} co-present steps behind it, need {n}"
        )
    seg_i = pair.xi[it - n : it + 1]
    seg_j = pair.xj[it - n : it + 1]
    steps_i = np.diff(seg_i, axis=0)
    steps_j = np.diff(seg_j, axis=0)
    speeds_i = np.hypot(steps_i[:, 0], steps_i[:, 1])
    speeds_j = np.hypot(steps_j[:, 0], steps_j[:, 1])
    v = float((speeds_i.sum() + speeds_j.sum()) / n)

    gaps = seg_i[1:] - seg_j[1:]
    d = float(np.hypot(gaps[:, 0], gaps[:, 1]).mean())

    angles: list[float] = []
    for k in range(n):
        step = steps_i[k]
        bearing = seg_j[k] - seg_i[k]
        step_len = math.hypot(step[0], step[1])
        bearing_len = math.hypot(bearing[0], bearing[1])
        if step_len == 0.0 or bearing_len == 0.0:
            continue
        cross = step[0] * bearing[1] - step[1] * bearing[0]
        dot = step[0] * bearing[0] + step[1] * bearing[1]
        angles.append(math.atan2(abs(cross), dot))
    h = float(np.mean(angles)) if angles else 0.0

    if n >= 2:
        a = float(
            (np.abs(np.diff(speeds_i)).sum() + np.abs(np.diff(speeds_j)).sum())
            / (n - 1)
        )
    else:
        a = 0.0
    return Kinematics(v=v, d=d, h=h, a=a)


def compute_rho(kin: Kinematics, config: RhoConfig | None = None) -> float:
    """Physics weight in [0, inf); see RhoConfig for the factor shapes."""
    cfg = config if config is not None else RhoConfig()
    cfg.validate()
    if kin.v < 0 or kin.d < 0 or kin.a < 0:
        raise DomainError(f"kinematics must be nonnegative, got {kin!r}")
    if not -1e-9 <= kin.h <= math.pi + 1e-9:
        raise DomainError(f"heading angle must be in [0, pi], got {kin.h!r}")

    v_term = 1.0
    if cfg.use_v:
        v_star = kin.v / (kin.v + cfg.v0)
        if cfg.use_a:
            v_star += kin.a / (kin.a + cfg.a0)
        v_term = cfg.alpha + v_star
    d_term = math.exp(-kin.d / cfg.sigma_d) if cfg.use_d else 1.0
    h_term = 1.0
    if cfg.use_h:
        h = min(max(kin.h, 0.0), math.pi)
        h_term = 1.0 + (1.0 - 2.0 * h / math.pi)
    return v_term * d_term * h_term


def _series_arrays(
    name: str, series: Sequence[tuple[int, float]]
) -> tuple[np.ndarray, np.ndarray]:
    if not series:
        raise StructuralError(f"{name} series is empty")
    frames = np.array([int(f) for f, _ in series], dtype=np.int64)
    values = np.array([float(v) for _, v in series], dtype=np.float64)
    if (np.diff(frames) <= 0).any():
        raise StructuralError(f"{name} series frames must be strictly increasing")
    if not np.isfinite(values).all():
        raise DomainError(f"{name} series contains non-finite values")
    return frames, values


def accumulate_aim(
    pair: InteractionPair,
    mi_series: Sequence[tuple[int, float]],
    rho_series: Sequence[tuple[int, float]],
    delta: float = DEFAULT_DELTA,
) -> MeasureSeries:
    """Fold per-frame (frame, value) series through the memory recurrence.

    Both series must cover exactly the same frames, in order. delta must
    satisfy 0 < delta <= 1; delta = 1 accumulates without forgetting.
    """
    if not 0.0 < delta <= 1.0:
        raise ConfigError(f"delta must be in (0, 1], got {delta!r}")
    mi_frames, mi_values = _series_arrays("mi", mi_series)
    rho_frames, rho_values = _series_arrays("rho", rho_series)
    if len(mi_frames) != len(rho_frames) or (mi_frames != rho_frames).any():
        raise StructuralError("mi and rho series must cover the same frames")
    if mi_frames[0] < pair.first_frame or mi_frames[-1] > pair.last_frame:
        raise StructuralError("series frames fall outside the pair's common run")

    aim = np.empty(len(mi_frames), dtype=np.float64)
    running = 0.0
    for k in range(len(mi_frames)):
        running = delta * running + rho_values[k] * mi_values[k]
        aim[k] = running
    return MeasureSeries(
        pair=pair,
        delta=float(delta),
        n_window=pair.n_window,
        frames=mi_frames,
        mi=mi_values,
        rho=rho_values,
        aim=aim,
    )


def _mi_and_rho(
    pair: InteractionPair,
    n: int,
    rho_config: RhoConfig,
    bandwidths: Sequence[float],
    weights: Sequence[float] | None,
    n_min: int,
) -> tuple[list[tuple[int, float]], list[tuple[int, float]]]:
    length = len(pair.frames)
    if length < n + 1:
        raise InsufficientDataError(
            f"pair {pair.key} has {length} common frames; "
            f"need at least {n + 1} for an n_window of {n}"
        )
    eval_points = list(range(n + 1, length + 1))
    prefix = mi_prefix_series(
        zip(pair.xi, pair.xj),
        eval_points,
        bandwidths=bandwidths,
        weights=weights,
        n_min=n_min,
    )
    mi_series = [
        (int(pair.frames[count - 1]), value) for count, value in prefix
    ]
    rho_series = [
        (
            int(pair.frames[i]),
            compute_rho(compute_kinematics(pair, int(pair.frames[i]), n), rho_config),
        )
        for i in range(n, length)
    ]
    return mi_series, rho_series


def measure_interaction(
    pair: InteractionPair,
    *,
    delta: float = DEFAULT_DELTA,
    rho_config: RhoConfig | None = None,
    n_window: int | None = None,
    bandwidths: Sequence[float] = DEFAULT_BANDWIDTHS,
    weights: Sequence[float] | None = None,
    n_min: int = DEFAULT_N_MIN,
) -> MeasureSeries:
    """Full measurement for one directed pair.

    The dependence stream is fed every co-present sample from the first
    common frame; evaluation starts once the warm-up buffer has passed, so
    the output covers frames t_prime .. last_frame.
    """
    cfg = rho_config if rho_config is not None else RhoConfig()
    cfg.validate()
    n = pair.n_window if n_window is None else int(n_window)
    if n != pair.n_window:
        pair = dataclasses.replace(pair, n_window=n)
    mi_series, rho_series = _mi_and_rho(pair, n, cfg, bandwidths, weights, n_min)
    out = accumulate_aim(pair, mi_series, rho_series, delta)
    out.rho_config = cfg
    return out


def sweep(
    pair: InteractionPair,
    delta_values: Sequence[float],
    n_values: Sequence[int],
    *,
    rho_config: RhoConfig | None = None,
    bandwidths: Sequence[float] = DEFAULT_BANDWIDTHS,
    weights: Sequence[float] | None = None,
    n_min: int = DEFAULT_N_MIN,
) -> list[MeasureSeries]:
    """One MeasureSeries per (n_window, delta) combination.

    The dependence/physics series are computed once per n_window and reused
    across deltas; results are ordered by n_values outer, delta_values inner.
    """
    cfg = rho_config if rho_config is not None else RhoConfig()
    cfg.validate()
    out: list[MeasureSeries] = []
    for n in n_values:
        n = int(n)
        variant = pair if n == pair.n_window else dataclasses.replace(pair, n_window=n)
        mi_series, rho_series = _mi_and_rho(variant, n, cfg, bandwidths, weights, n_min)
        for delta in delta_values:
            series = accumulate_aim(variant, mi_series, rho_series, float(delta))
            series.rho_config = cfg
            out.append(series)
    return out


def fit_normalizers(
    pairs: Sequence[InteractionPair],
    n_window: int | None = None,
    base: RhoConfig | None = None,
) -> RhoConfig:
    """Fit v0/a0/sigma_d from data, keeping the base values where data is flat.

    v0 and a0 become the median windowed speed / speed change across every
    measurable frame of every pair (direction duplicates leave medians
    unchanged); sigma_d becomes one eighth of the diagonal spanned by the
    paired agents. Base defaults are kept when a fitted value would not be
    a positive number.
    """
    cfg = base if base is not None else RhoConfig()
    cfg.validate()
    speeds: list[float] = []
    accels: list[float] = []
    agents: dict[tuple, Trajectory] = {}
    for pair in pairs:
        n = pair.n_window if n_window is None else int(n_window)
        if len(pair.frames) < n + 1:
            continue
        for traj in (pair.agent_i, pair.agent_j):
            agents[(traj.source.key(), traj.uid)] = traj
        for i in range(n, len(pair.frames)):
            kin = compute_kinematics(pair, int(pair.frames[i]), n)
            speeds.append(kin.v)
            accels.append(kin.a)
    v0 = float(np.median(speeds)) if speeds else 0.0
    a0 = float(np.median(accels)) if accels else 0.0
    diagonal = scene_diagonal(list(agents.values()))
    return dataclasses.replace(
        cfg,
        v0=v0 if v0 > 0 else cfg.v0,
        a0=a0 if a0 > 0 else cfg.a0,
        sigma_d=diagonal / 8.0 if diagonal > 0 else cfg.sigma_d,
    )
