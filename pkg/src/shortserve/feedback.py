"""Pre-shot guidance geometry and post-shot judgment against the expert model.

Judgment boundaries are closed at exactly one standard deviation: a value
exactly mean +/- SD passes.  Direction arrows are produced for pitch only;
the other widgets carry direction through their own geometry.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .config import GuidanceConfig
from .errors import GeometryError, JudgeError, ParameterError
from .expert import ExpertModel, Pattern
from .kinetics import ServiceSummary
from .mocap import Handedness, SkeletonFrame

UP = np.array([0.0, 1.0, 0.0])


class Halo(str, enum.Enum):
    GREEN = "green"
    YELLOW = "yellow"
    RED = "red"


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"


class Direction(str, enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"
    NONE = "none"


@dataclass(frozen=True)
class ReadyTargets:
    """Where the shuttle and the racket head should rest before the serve."""

    shuttle_target: np.ndarray
    racket_target: np.ndarray
    sagittal_axis: np.ndarray  # unit, body forward


@dataclass(frozen=True)
class SwingTrackSpec:
    """Circular swing-track indicator: geometry plus its animation dynamics."""

    center: np.ndarray
    plane_height: float
    radius: float
    angular_acceleration: float  # rad/s^2
    sweep_back: float            # rad
    sweep_forward: float         # rad


@dataclass(frozen=True)
class JudgedValue:
    value: float
    target_mean: float
    target_sd: float
    status: Status
    direction: Direction = Direction.NONE


@dataclass(frozen=True)
class FeedbackReport:
    """Post-shot judgments for the four feedback widgets."""

    pitch: JudgedValue
    speed: JudgedValue
    height_trace: tuple[tuple[float, float, bool], ...]  # (t, dh, within)
    wrist: JudgedValue
    elbow: JudgedValue
    shoulder: JudgedValue
    wrist_upper_bound_deg: float

    @property
    def height_ok(self) -> bool:
        return all(within for _, _, within in self.height_trace)

    @property
    def all_pass(self) -> bool:
        joints_ok = all(
            j.status is Status.PASS for j in (self.pitch, self.speed, self.wrist, self.elbow, self.shoulder)
        )
        return joints_ok and self.height_ok

    def to_dict(self) -> dict:
        def jv(j: JudgedValue) -> dict:
            return {
                "value": j.value, "mean": j.target_mean, "sd": j.target_sd,
                "status": j.status.value, "direction": j.direction.value,
            }
        return {
            "pitch": jv(self.pitch),
            "speed": jv(self.speed),
            "height_trace": [[t, dh, within] for t, dh, within in self.height_trace],
            "wrist": jv(self.wrist),
            "elbow": jv(self.elbow),
            "shoulder": jv(self.shoulder),
            "wrist_upper_bound_deg": self.wrist_upper_bound_deg,
        }


def sagittal_axis(frame: SkeletonFrame) -> np.ndarray:
    """Unit body-forward direction from the shoulder line, horizontal."""
    if frame.handedness is Handedness.RIGHT:
        right, left = frame.shoulder, frame.shuttle_shoulder
    else:
        right, left = frame.shuttle_shoulder, frame.shoulder
    line = right - left
    line = np.array([line[0], 0.0, line[2]])
    if np.linalg.norm(line) == 0:
        raise GeometryError("shoulders coincide; sagittal axis undefined")
    forward = np.cross(line, UP)
    forward = np.array([forward[0], 0.0, forward[2]])  # cross with UP is horizontal already
    return forward / np.linalg.norm(forward)


def arm_chain_length(frame: SkeletonFrame) -> float:
    """Shoulder->elbow->wrist chain length of the dominant arm."""
    return float(
        np.linalg.norm(frame.elbow - frame.shoulder) + np.linalg.norm(frame.wrist - frame.elbow)
    )


def ready_targets(frame: SkeletonFrame, cfg: GuidanceConfig | None = None) -> ReadyTargets:
    """Stature-derived ready positions for the shuttle and the racket head.

    The shuttle target is the dominant shoulder projected to the constant
    target height and pushed forward along the sagittal axis by a fraction
    of the arm length; the racket target sits a small gap toward the
    dominant side.
    """
    cfg = cfg or GuidanceConfig()
    forward = sagittal_axis(frame)
    shuttle = frame.shoulder + cfg.forward_fraction * arm_chain_length(frame) * forward
    shuttle = np.array([shuttle[0], cfg.shuttle_height, shuttle[2]])
    side = np.cross(UP, forward)  # unit, points to the player's right
    if frame.handedness is Handedness.LEFT:
        side = -side
    racket = shuttle + cfg.racket_gap * side
    return ReadyTargets(shuttle_target=shuttle, racket_target=racket, sagittal_axis=forward)


def halo_state(
    actual: np.ndarray,
    target: np.ndarray,
    axis: np.ndarray,
    bands: tuple[float, float] | None = None,
) -> Halo:
    """Indicator color from the |distance| along the sagittal axis."""
    if bands is None:
        cfg = GuidanceConfig()
        bands = (cfg.halo_green, cfg.halo_yellow)
    g, y = bands
    if not (0 < g < y):
        raise ParameterError(f"halo bands must satisfy 0 < green < yellow, got {bands}")
    d = abs(float(np.dot(np.asarray(actual, float) - np.asarray(target, float), axis)))
    if d <= g:
        return Halo.GREEN
    if d <= y:
        return Halo.YELLOW
    return Halo.RED


def swing_track(ready: SkeletonFrame, model: ExpertModel, cfg: GuidanceConfig | None = None) -> SwingTrackSpec:
    """Swing-track circle centered on the wrist, animated at constant angular
    acceleration so that the forward sweep ends at the target racket speed."""
    cfg = cfg or GuidanceConfig()
    if model.speed.mean <= 0:
        raise ParameterError("model speed mean must be positive")
    radius = float(np.linalg.norm(ready.wrist - ready.racket_top))
    if radius == 0:
        raise GeometryError("wrist coincides with racket top; swing radius is zero")
    omega_target = model.speed.mean / radius
    total_sweep = cfg.sweep_back + cfg.sweep_forward
    alpha = omega_target ** 2 / (2.0 * total_sweep)
    return SwingTrackSpec(
        center=ready.wrist.copy(),
        plane_height=float(ready.shuttle_hand[1]),
        radius=radius,
        angular_acceleration=alpha,
        sweep_back=cfg.sweep_back,
        sweep_forward=cfg.sweep_forward,
    )


def _leq(a: float, b: float) -> bool:
    """a <= b with a float guard far below any meaningful tolerance, so a
    value at exactly mean +/- SD lands on the closed (passing) side."""
    return a <= b + 1e-9 * max(1.0, abs(b))


def _two_sided(value: float, stats, with_direction: bool = False) -> JudgedValue:
    ok = _leq(abs(value - stats.mean), stats.sd)
    direction = Direction.NONE
    if not ok and with_direction:
        direction = Direction.DECREASE if value > stats.mean else Direction.INCREASE
    return JudgedValue(value, stats.mean, stats.sd, Status.PASS if ok else Status.FAIL, direction)


def judge_shot(summary: ServiceSummary, model: ExpertModel) -> FeedbackReport:
    """Judge one serve against the wrist-only expert model.

    Pitch and speed pass within one SD of the model.  Height-trace points
    are within while |dh| <= mean + SD of the height statistic.  Wrist
    involvement must reach min(mean - SD, upper bound), where the upper
    bound is the smaller of the model mean and the racket-shuttle angle at
    the end of the backswing; elbow and shoulder must stay under mean + SD.
    """
    if model.pattern is not Pattern.WRIST_ONLY:
        raise JudgeError("judgment targets the wrist-only motion; pass a wrist_only model")
    for name in ("pitch_at_contact_deg", "speed_at_contact_mps"):
        if not math.isfinite(getattr(summary, name)):
            raise JudgeError(f"summary missing contact value: {name}")

    height_limit = model.height_diff.mean + model.height_diff.sd
    trace = tuple((t, dh, _leq(abs(dh), height_limit)) for t, dh in summary.height_trace)

    upper = model.wrist_change.mean
    if math.isfinite(summary.backswing_end_racket_shuttle_angle_deg):
        upper = min(upper, summary.backswing_end_racket_shuttle_angle_deg)
    wrist_floor = min(model.wrist_change.mean - model.wrist_change.sd, upper)
    wrist_ok = _leq(wrist_floor, summary.wrist_change_deg)
    elbow_ok = _leq(summary.elbow_change_deg, model.elbow_change.mean + model.elbow_change.sd)
    shoulder_ok = _leq(summary.shoulder_change_deg,
                       model.shoulder_change.mean + model.shoulder_change.sd)

    return FeedbackReport(
        pitch=_two_sided(summary.pitch_at_contact_deg, model.pitch, with_direction=True),
        speed=_two_sided(summary.speed_at_contact_mps, model.speed),
        height_trace=trace,
        wrist=JudgedValue(
            summary.wrist_change_deg, model.wrist_change.mean, model.wrist_change.sd,
            Status.PASS if wrist_ok else Status.FAIL,
        ),
        elbow=JudgedValue(
            summary.elbow_change_deg, model.elbow_change.mean, model.elbow_change.sd,
            Status.PASS if elbow_ok else Status.FAIL,
        ),
        shoulder=JudgedValue(
            summary.shoulder_change_deg, model.shoulder_change.mean, model.shoulder_change.sd,
            Status.PASS if shoulder_ok else Status.FAIL,
        ),
        wrist_upper_bound_deg=upper,
    )
