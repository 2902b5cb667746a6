"""Five-state service state machine and offline serve segmentation.

States: Idle -> Ready -> BackwardSwing -> ForwardSwing -> Contact -> Idle,
plus Ready -> Idle (abort) and any -> Idle (tracking loss).  Ready fires
when racket and shuttle hand rest within tolerance of their targets;
swings are detected from sustained racket motion and from the trend of
the racket-to-shuttle-hand distance, whose minimum marks contact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .config import FsmConfig, GuidanceConfig
from .errors import GeometryError
from .feedback import ready_targets
from .kinetics import Keyframes, ServiceSummary, kinetic_series, racket_shuttle_angle, summarize_swing
from .mocap import Recording, SkeletonFrame, relabel_recording


class ServiceState(str, enum.Enum):
    IDLE = "idle"
    READY = "ready"
    BACKWARD_SWING = "backward_swing"
    FORWARD_SWING = "forward_swing"
    CONTACT = "contact"


SWING_STATES = (ServiceState.BACKWARD_SWING, ServiceState.FORWARD_SWING)


@dataclass(frozen=True)
class FsmEvent:
    """One state transition, in frame order."""

    src: ServiceState
    dst: ServiceState
    frame_index: int
    t: float
    reason: str = ""
    serve_index: int | None = None


@dataclass
class ServiceRecord:
    """One segmented serve; keyframes index into ``frames``."""

    frames: list[SkeletonFrame]
    k_back: int | None
    k_fwd: int | None
    k_contact: int | None
    summary: ServiceSummary | None
    serve_index: int
    lost_tracking: bool = False
    start_index: int = 0  # absolute recording index of frames[0]

    @property
    def keyframes(self) -> Keyframes:
        return Keyframes(self.k_back, self.k_fwd, self.k_contact)


@dataclass
class FsmContext:
    """Mutable per-trainee context: thresholds, targets, short motion history."""

    cfg: FsmConfig = field(default_factory=FsmConfig)
    guidance: GuidanceConfig = field(default_factory=GuidanceConfig)

    # motion history
    prev_top: np.ndarray | None = None
    prev_t: float | None = None
    prev_dist: float | None = None

    # sustained-motion runs (Ready) and distance-trend runs (swings)
    back_run: int = 0
    back_run_start: int = -1
    other_run: int = 0
    dec_run: int = 0
    dec_run_start: int = -1
    inc_run: int = 0

    backward_axis: np.ndarray | None = None
    contact_entry_t: float = 0.0

    # current serve bookkeeping (absolute frame indices)
    frame_index: int = -1
    serve_start: int = -1
    k_back: int = -1
    k_fwd: int = -1
    k_contact: int = -1
    serve_frames: list[SkeletonFrame] = field(default_factory=list)
    dists: list[float] = field(default_factory=list)
    serve_count: int = 0
    serve_number: int = 0  # 1-based id of the serve in flight; 0 = none
    pending: bool = False  # a contacted serve awaits its post-contact window

    def reset_serve(self) -> None:
        self.back_run = self.other_run = self.dec_run = self.inc_run = 0
        self.back_run_start = self.dec_run_start = -1
        self.serve_start = self.k_back = self.k_fwd = self.k_contact = -1
        self.serve_frames = []
        self.dists = []
        self.backward_axis = None
        self.serve_number = 0
        self.pending = False


class ServiceTracker:
    """Drives the state machine one frame at a time and collects serves."""

    def __init__(self, cfg: FsmConfig | None = None, guidance: GuidanceConfig | None = None):
        self.state = ServiceState.IDLE
        self.ctx = FsmContext(cfg=cfg or FsmConfig(), guidance=guidance or GuidanceConfig())
        self.events: list[FsmEvent] = []
        self.completed: list[ServiceRecord] = []

    # -- helpers ----------------------------------------------------------

    def _velocity(self, frame: SkeletonFrame) -> np.ndarray | None:
        ctx = self.ctx
        if ctx.prev_top is None or ctx.prev_t is None or frame.t <= ctx.prev_t:
            return None
        return (frame.racket_top - ctx.prev_top) / (frame.t - ctx.prev_t)

    def _emit(self, dst: ServiceState, frame: SkeletonFrame, reason: str = "") -> None:
        serve = self.ctx.serve_number or None
        self.events.append(
            FsmEvent(self.state, dst, self.ctx.frame_index, frame.t, reason, serve)
        )
        self.state = dst

    def _abort(self, frame: SkeletonFrame, reason: str, lost: bool) -> None:
        ctx = self.ctx
        if lost and self.state in SWING_STATES:
            self.ctx.serve_count = ctx.serve_number
            self.completed.append(
                ServiceRecord(
                    frames=ctx.serve_frames.copy(),
                    k_back=ctx.k_back - ctx.serve_start if ctx.k_back >= 0 else None,
                    k_fwd=ctx.k_fwd - ctx.serve_start if ctx.k_fwd >= 0 else None,
                    k_contact=None,
                    summary=None,
                    serve_index=ctx.serve_number,
                    lost_tracking=True,
                    start_index=ctx.serve_start,
                )
            )
        self._emit(ServiceState.IDLE, frame, reason)
        ctx.reset_serve()

    def _finalize(self) -> None:
        """Close the pending serve once its post-contact window is buffered."""
        ctx = self.ctx
        base = ctx.serve_start
        frames = ctx.serve_frames.copy()
        k_fwd_rel = ctx.k_fwd - base
        limit = min(len(frames) - 1, ctx.k_contact - base + ctx.cfg.contact_window)
        dists = ctx.dists
        # contact = the distance minimum over [k_fwd, k_contact + w]
        k_contact_rel = int(np.argmin(dists[k_fwd_rel:limit + 1])) + k_fwd_rel
        keyframes = Keyframes(ctx.k_back - base, k_fwd_rel, k_contact_rel)
        samples = kinetic_series(frames)
        summary = summarize_swing(
            samples, keyframes,
            backswing_end_angle_deg=racket_shuttle_angle(frames[k_fwd_rel]),
        )
        self.ctx.serve_count = ctx.serve_number
        self.completed.append(
            ServiceRecord(
                frames=frames,
                k_back=keyframes.k_back,
                k_fwd=keyframes.k_fwd,
                k_contact=keyframes.k_contact,
                summary=summary,
                serve_index=ctx.serve_number,
                lost_tracking=False,
                start_index=base,
            )
        )
        ctx.pending = False

    # -- the transition function ------------------------------------------

    def step(self, frame: SkeletonFrame) -> list[FsmEvent]:
        """Advance one frame; returns the transitions it caused, in order."""
        ctx = self.ctx
        ctx.frame_index += 1
        n_events = len(self.events)
        velocity = self._velocity(frame)
        dist = float(np.linalg.norm(frame.racket_top - frame.shuttle_hand))

        if ctx.serve_start >= 0:
            ctx.serve_frames.append(frame)
            ctx.dists.append(dist)
            if (
                self.state is ServiceState.CONTACT
                and ctx.pending
                and ctx.frame_index >= ctx.k_contact + ctx.cfg.contact_window
            ):
                self._finalize()

        if self.state is ServiceState.IDLE:
            if frame.complete:
                try:
                    targets = ready_targets(frame, ctx.guidance)
                except GeometryError:
                    targets = None
                if targets is not None:
                    d_racket = np.linalg.norm(frame.racket_top - targets.racket_target)
                    d_hand = np.linalg.norm(frame.shuttle_hand - targets.shuttle_target)
                    if d_racket <= ctx.cfg.ready_tolerance and d_hand <= ctx.cfg.ready_tolerance:
                        ctx.reset_serve()
                        ctx.serve_start = ctx.frame_index
                        ctx.serve_frames = [frame]
                        ctx.dists = [dist]
                        ctx.backward_axis = -targets.sagittal_axis
                        self._emit(ServiceState.READY, frame, "at ready targets")

        elif self.state is ServiceState.READY:
            if not frame.complete:
                self._abort(frame, "lost tracking", lost=False)
            elif velocity is not None:
                vb = float(np.dot(velocity, ctx.backward_axis))
                speed = float(np.linalg.norm(velocity))
                if vb > ctx.cfg.v_min:
                    if ctx.back_run == 0:
                        ctx.back_run_start = ctx.frame_index
                    ctx.back_run += 1
                    ctx.other_run = 0
                elif speed > ctx.cfg.v_min:
                    ctx.other_run += 1
                    ctx.back_run = 0
                else:
                    ctx.back_run = ctx.other_run = 0
                if ctx.back_run >= ctx.cfg.sustain_frames:
                    ctx.k_back = ctx.back_run_start
                    ctx.serve_number = ctx.serve_count + 1
                    self._emit(ServiceState.BACKWARD_SWING, frame, "sustained backward motion")
                elif ctx.other_run >= ctx.cfg.sustain_frames:
                    self._abort(frame, "moved in another direction", lost=False)

        elif self.state is ServiceState.BACKWARD_SWING:
            if not frame.complete:
                self._abort(frame, "lost tracking", lost=True)
            else:
                if ctx.prev_dist is not None and dist < ctx.prev_dist:
                    if ctx.dec_run == 0:
                        ctx.dec_run_start = ctx.frame_index
                    ctx.dec_run += 1
                else:
                    ctx.dec_run = 0
                if ctx.dec_run >= ctx.cfg.trend_frames:
                    ctx.k_fwd = ctx.dec_run_start
                    self._emit(ServiceState.FORWARD_SWING, frame, "distance decreasing")

        elif self.state is ServiceState.FORWARD_SWING:
            if not frame.complete:
                self._abort(frame, "lost tracking", lost=True)
            else:
                if ctx.prev_dist is not None and dist > ctx.prev_dist:
                    ctx.inc_run += 1
                else:
                    ctx.inc_run = 0
                if ctx.inc_run >= ctx.cfg.trend_frames:
                    base = ctx.serve_start
                    rel = ctx.dists[ctx.k_fwd - base:]
                    ctx.k_contact = int(np.argmin(rel)) + ctx.k_fwd
                    ctx.contact_entry_t = frame.t
                    ctx.pending = True
                    self._emit(ServiceState.CONTACT, frame, "distance increasing; contact passed")

        elif self.state is ServiceState.CONTACT:
            if frame.t >= ctx.contact_entry_t + ctx.cfg.dwell_s:
                if ctx.pending:
                    self._finalize()
                self._emit(ServiceState.IDLE, frame, "dwell elapsed")
                ctx.reset_serve()

        ctx.prev_top = frame.racket_top
        ctx.prev_t = frame.t
        ctx.prev_dist = dist
        return self.events[n_events:]

    def finish(self) -> None:
        """Flush a pending serve at end of input (short post-contact window)."""
        if self.ctx.pending and self.ctx.k_contact >= 0:
            self._finalize()


def step(state: ServiceState, frame: SkeletonFrame, tracker: ServiceTracker) -> tuple[ServiceState, list[FsmEvent]]:
    """Functional view of one transition step on an existing tracker."""
    assert tracker.state is state, "tracker state diverged from caller's"
    events = tracker.step(frame)
    return tracker.state, events


def segment_recording(
    recording: Recording,
    cfg: FsmConfig | None = None,
    guidance: GuidanceConfig | None = None,
) -> list[ServiceRecord]:
    """Offline segmentation: the online transition rules applied frame by frame."""
    tracker = ServiceTracker(cfg=cfg, guidance=guidance)
    for frame in relabel_recording(recording):
        tracker.step(frame)
    tracker.finish()
    return tracker.completed
