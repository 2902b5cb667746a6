"""Trial labeling, session aggregation, and the study statistics.

A trial is dropped as LostTracking when markers vanished mid-swing, and as
Jitter when a variable's time series has more turning points than its
threshold (pitch and speed are examined over the forward swing only; the
joints and the racket height over the whole swing).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import stats as sstats

from .config import JitterConfig
from .errors import StatsError
from .expert import quartiles
from .fsm import ServiceRecord
from .kinetics import kinetic_series

VARIABLES = ("pitch", "height_diff", "speed", "wrist_change", "elbow_change", "shoulder_change")


class TrialLabel(str, enum.Enum):
    VALID = "valid"
    JITTER = "jitter"
    LOST_TRACKING = "lost_tracking"


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p_two_tailed: float


@dataclass(frozen=True)
class RegressionFit:
    slope: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class SessionStats:
    """Per-variable descriptive statistics over a session's first n valid trials."""

    n: int
    variables: dict[str, dict[str, float]]  # name -> mean/sd/median/q1/q3


def moving_average(series: np.ndarray, window: int = 3) -> np.ndarray:
    """Centered moving average, valid mode (shrinks by window - 1)."""
    series = np.asarray(series, dtype=float)
    if window <= 1 or len(series) < window:
        return series.copy()
    kernel = np.ones(window) / window
    return np.convolve(series, kernel, mode="valid")


def count_turning_points(series: np.ndarray) -> int:
    """Strict interior local extrema (plateaus do not count).

    Differences below a magnitude-scaled floor count as flat, so a series
    that is constant up to float rounding has no turning points.
    """
    s = np.asarray(series, dtype=float)
    if len(s) < 3:
        return 0
    tol = 1e-9 * max(1.0, float(np.max(np.abs(s))))
    left = s[1:-1] - s[:-2]
    right = s[1:-1] - s[2:]
    return int(np.sum((left > tol) & (right > tol)) + np.sum((left < -tol) & (right < -tol)))


def detect_jitter(series, max_extrema: int, smooth_window: int = 3) -> bool:
    """True when the smoothed series has more turning points than allowed."""
    series = np.asarray(list(series), dtype=float)
    if len(series) < 3:
        raise StatsError(f"jitter labeling needs at least 3 samples, got {len(series)}")
    return count_turning_points(moving_average(series, smooth_window)) > max_extrema


def summary_value(record: ServiceRecord, variable: str) -> float:
    s = record.summary
    return {
        "pitch": s.pitch_at_contact_deg,
        "height_diff": s.max_abs_height_delta_m,
        "speed": s.speed_at_contact_mps,
        "wrist_change": s.wrist_change_deg,
        "elbow_change": s.elbow_change_deg,
        "shoulder_change": s.shoulder_change_deg,
    }[variable]


def label_trial(record: ServiceRecord, cfg: JitterConfig | None = None) -> TrialLabel:
    """LostTracking beats Jitter beats Valid."""
    cfg = cfg or JitterConfig()
    if record.lost_tracking or record.summary is None:
        return TrialLabel.LOST_TRACKING
    samples = kinetic_series(record.frames)
    k_back, k_fwd, k_contact = record.keyframes
    whole = samples[k_back:k_contact + 1]
    forward = samples[k_fwd:k_contact + 1]
    series = [
        ([s.wrist_deg for s in whole], cfg.joint_max_extrema),
        ([s.elbow_deg for s in whole], cfg.joint_max_extrema),
        ([s.shoulder_deg for s in whole], cfg.joint_max_extrema),
        ([s.height_m for s in whole], cfg.joint_max_extrema),
        ([s.pitch_deg for s in forward], cfg.racket_max_extrema),
        ([s.speed_mps for s in forward], cfg.racket_max_extrema),
    ]
    for values, limit in series:
        arr = np.asarray(values)
        arr = arr[np.isfinite(arr)]
        if len(arr) >= 3 and detect_jitter(arr, limit, cfg.smooth_window):
            return TrialLabel.JITTER
    return TrialLabel.VALID


def session_summary(records, n: int, cfg: JitterConfig | None = None) -> SessionStats:
    """Statistics over exactly the first n valid trials, in arrival order."""
    valid = [r for r in records if label_trial(r, cfg) is TrialLabel.VALID]
    if len(valid) < n:
        raise StatsError(f"session has {len(valid)} valid trials, need {n}")
    used = valid[:n]
    variables: dict[str, dict[str, float]] = {}
    for name in VARIABLES:
        arr = np.array([summary_value(r, name) for r in used])
        if len(arr) == 0:
            variables[name] = {k: float("nan") for k in ("mean", "sd", "median", "q1", "q3")}
            continue
        q1, q3 = quartiles(arr) if len(arr) > 1 else (float(arr[0]), float(arr[0]))
        variables[name] = {
            "mean": float(arr.mean()),
            "sd": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
            "median": float(np.median(arr)),
            "q1": q1,
            "q3": q3,
        }
    return SessionStats(n=n, variables=variables)


def paired_t_test(a, b) -> TTestResult:
    """Two-tailed paired t-test: t = mean(d) / (sd(d)/sqrt(n)), df = n - 1."""
    a = np.asarray(list(a), dtype=float)
    b = np.asarray(list(b), dtype=float)
    if len(a) != len(b):
        raise StatsError(f"paired samples differ in length: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise StatsError(f"need at least 2 pairs, got {len(a)}")
    d = a - b
    sd = float(d.std(ddof=1))
    if sd == 0:
        # identical samples carry no evidence of a difference; a constant
        # nonzero difference leaves t undefined
        if np.all(d == 0):
            return TTestResult(t=0.0, df=len(d) - 1, p_two_tailed=1.0)
        raise StatsError("zero-variance differences; t statistic undefined")
    n = len(d)
    t = float(d.mean()) / (sd / np.sqrt(n))
    df = n - 1
    p = 2.0 * float(sstats.t.sf(abs(t), df))
    return TTestResult(t=t, df=df, p_two_tailed=p)


def linear_regression(t, y) -> RegressionFit:
    """Ordinary least squares fit y = slope*t + intercept.

    r^2 = 1 - SSR/SST; a constant response (SST = 0) is reported as a
    perfect fit (r^2 = 1).
    """
    t = np.asarray(list(t), dtype=float)
    y = np.asarray(list(y), dtype=float)
    if len(t) != len(y) or len(t) < 2:
        raise StatsError("regression needs two equal-length samples of >= 2 points")
    t_mean, y_mean = t.mean(), y.mean()
    s_tt = float(np.sum((t - t_mean) ** 2))
    if s_tt == 0:
        raise StatsError("all predictor values equal; regression is singular")
    slope = float(np.sum((t - t_mean) * (y - y_mean))) / s_tt
    intercept = float(y_mean - slope * t_mean)
    residuals = y - (slope * t + intercept)
    sst = float(np.sum((y - y_mean) ** 2))
    r2 = 1.0 if sst == 0 else 1.0 - float(np.sum(residuals ** 2)) / sst
    return RegressionFit(slope=slope, intercept=intercept, r_squared=r2)
