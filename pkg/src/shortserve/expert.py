"""The quantified ideal-service model: built-in values, fitting, patterns.

The built-in numbers are the per-variable mean/SD of sub-elite serves
after 1.5xIQR outlier removal.  Two exertion patterns exist: serves using
the wrist only, and serves that also recruit the elbow; they differ only
in the elbow row.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

import numpy as np

from .errors import FitError, ParameterError


class Pattern(str, enum.Enum):
    WRIST_ONLY = "wrist_only"
    ELBOW_WRIST = "elbow_wrist"


@dataclass(frozen=True)
class VariableStats:
    mean: float
    sd: float
    unit: str  # deg | m | m/s

    def __post_init__(self):
        if self.sd < 0:
            raise ParameterError(f"sd must be >= 0, got {self.sd}")


@dataclass(frozen=True)
class ExpertModel:
    """Per-variable statistics plus the exertion pattern they describe."""

    pitch: VariableStats
    height_diff: VariableStats
    speed: VariableStats
    wrist_change: VariableStats
    elbow_change: VariableStats
    shoulder_change: VariableStats
    pattern: Pattern

    VARIABLES = ("pitch", "height_diff", "speed", "wrist_change", "elbow_change", "shoulder_change")

    def to_dict(self) -> dict:
        doc = {"pattern": self.pattern.value, "variables": {}}
        for name in self.VARIABLES:
            stats: VariableStats = getattr(self, name)
            doc["variables"][name] = {"mean": stats.mean, "sd": stats.sd, "unit": stats.unit}
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ExpertModel":
        variables = {
            name: VariableStats(**doc["variables"][name]) for name in cls.VARIABLES
        }
        return cls(pattern=Pattern(doc["pattern"]), **variables)


# Per-variable mean/SD of accurate sub-elite serves; the two elbow rows
# correspond to the two exertion patterns.
_BUILTIN_COMMON = {
    "pitch": VariableStats(21.60, 7.95, "deg"),
    "height_diff": VariableStats(0.11, 0.07, "m"),
    "speed": VariableStats(5.41, 0.41, "m/s"),
    "wrist_change": VariableStats(9.96, 3.93, "deg"),
    "shoulder_change": VariableStats(1.48, 0.87, "deg"),
}
_BUILTIN_ELBOW = {
    Pattern.WRIST_ONLY: VariableStats(4.97, 0.96, "deg"),
    Pattern.ELBOW_WRIST: VariableStats(9.10, 3.04, "deg"),
}


def builtin_model(pattern: Pattern | str = Pattern.WRIST_ONLY) -> ExpertModel:
    """The shipped ideal-service model for the requested exertion pattern."""
    pattern = Pattern(pattern)
    return ExpertModel(pattern=pattern, elbow_change=_BUILTIN_ELBOW[pattern], **_BUILTIN_COMMON)


def quartiles(values: np.ndarray) -> tuple[float, float]:
    """Q1/Q3 by linear interpolation of order statistics at 0.25/0.75*(n-1)."""
    srt = np.sort(np.asarray(values, dtype=float))
    n = len(srt)
    q = []
    for p in (0.25, 0.75):
        pos = p * (n - 1)
        lo = int(np.floor(pos))
        hi = int(np.ceil(pos))
        q.append(float(srt[lo] + (pos - lo) * (srt[hi] - srt[lo])))
    return q[0], q[1]


def remove_outliers_iqr(samples) -> list[float]:
    """Drop values outside [Q1 - 1.5*IQR, Q3 + 1.5*IQR], preserving order."""
    values = [float(v) for v in samples]
    if len(values) <= 1:
        return values
    q1, q3 = quartiles(np.array(values))
    iqr = q3 - q1
    lo, hi = q1 - 1.5 * iqr, q3 + 1.5 * iqr
    return [v for v in values if lo <= v <= hi]


def fit_model(summaries, pattern: Pattern | str) -> ExpertModel:
    """Fit per-variable mean/SD (n-1) after independent per-variable IQR removal."""
    summaries = list(summaries)
    if len(summaries) < 2:
        raise FitError(f"need at least 2 summaries, got {len(summaries)}")
    extractors = {
        "pitch": (lambda s: s.pitch_at_contact_deg, "deg"),
        "height_diff": (lambda s: s.max_abs_height_delta_m, "m"),
        "speed": (lambda s: s.speed_at_contact_mps, "m/s"),
        "wrist_change": (lambda s: s.wrist_change_deg, "deg"),
        "elbow_change": (lambda s: s.elbow_change_deg, "deg"),
        "shoulder_change": (lambda s: s.shoulder_change_deg, "deg"),
    }
    fitted = {}
    for name, (extract, unit) in extractors.items():
        kept = remove_outliers_iqr([extract(s) for s in summaries])
        if len(kept) < 2:
            raise FitError(f"variable {name}: fewer than 2 samples survive outlier removal")
        arr = np.array(kept)
        fitted[name] = VariableStats(float(arr.mean()), float(arr.std(ddof=1)), unit)
    return ExpertModel(pattern=Pattern(pattern), **fitted)


def classify_pattern(wrist_change: float, elbow_change: float, ratio: float = 0.6) -> Pattern:
    """Elbow involvement close to wrist involvement marks the elbow-and-wrist group."""
    if wrist_change <= 0:
        raise ParameterError(f"wrist_change must be positive, got {wrist_change}")
    return Pattern.ELBOW_WRIST if elbow_change / wrist_change >= ratio else Pattern.WRIST_ONLY


def save_model(model: ExpertModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model.to_dict(), fh, indent=2)
        fh.write("\n")


def load_model(source: str) -> ExpertModel:
    """Load a model from a JSON file path or a builtin name (wrist_only/elbow_wrist)."""
    try:
        return builtin_model(Pattern(source))
    except ValueError:
        pass
    with open(source, "r", encoding="utf-8") as fh:
        return ExpertModel.from_dict(json.load(fh))
