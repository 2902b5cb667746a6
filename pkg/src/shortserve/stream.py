"""The engine pipeline as a deterministic message stream.

One pass drives ingest -> kinetics -> state machine -> feedback and emits
the wire messages: Frame always; Guidance only while Idle/Ready (guidance
disappears during the swing); StateChange on every transition; Feedback
when a serve's post-contact window is complete; one SessionStats at the
end.  Batch reports and the live WebSocket feed both consume this stream,
so they agree by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .analytics import SessionStats, TrialLabel, label_trial, session_summary
from .config import EngineConfig
from .expert import ExpertModel
from .feedback import FeedbackReport, halo_state, judge_shot, ready_targets, swing_track
from .fsm import ServiceRecord, ServiceState, ServiceTracker
from .mocap import Recording, load_recording, relabel_recording

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class StreamMessage:
    kind: str  # frame | state_change | guidance | feedback | session_stats | gap
    seq: int
    payload: dict

    def to_dict(self) -> dict:
        return {"v": SCHEMA_VERSION, "kind": self.kind, "seq": self.seq, "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass
class SessionResult:
    session_id: str
    records: list[ServiceRecord]
    labels: list[TrialLabel]
    reports: list[FeedbackReport | None]
    stats: SessionStats
    messages: list[StreamMessage]

    @property
    def feedback_reports(self) -> list[FeedbackReport]:
        return [r for r in self.reports if r is not None]


def _point(p) -> list[float]:
    return [float(c) for c in p]


class Pipeline:
    """Single-pass engine run over one recording."""

    def __init__(self, recording: Recording | str, model: ExpertModel,
                 cfg: EngineConfig | None = None, session_id: str = "session"):
        if isinstance(recording, str):
            recording = load_recording(recording)
        self.recording = recording
        self.model = model
        self.cfg = cfg or EngineConfig()
        self.session_id = session_id
        self.tracker = ServiceTracker(self.cfg.fsm, self.cfg.guidance)
        self.reports: list[FeedbackReport | None] = []
        self.labels: list[TrialLabel] = []
        self.stats: SessionStats | None = None
        self._seq = 0

    @property
    def records(self) -> list[ServiceRecord]:
        return self.tracker.completed

    def _msg(self, kind: str, payload: dict) -> StreamMessage:
        msg = StreamMessage(kind=kind, seq=self._seq, payload=payload)
        self._seq += 1
        return msg

    def _judge(self, record: ServiceRecord) -> list[StreamMessage]:
        label = label_trial(record, self.cfg.jitter)
        self.labels.append(label)
        if record.summary is None:
            self.reports.append(None)
            return []
        report = judge_shot(record.summary, self.model)
        self.reports.append(report)
        return [self._msg("feedback", {
            "serve": {"session": self.session_id, "index": record.serve_index},
            "label": label.value,
            "report": report.to_dict(),
        })]

    def frame_batches(self) -> Iterator[tuple[float, list[StreamMessage]]]:
        """Yield (timestamp, messages) per frame, then a final stats batch."""
        tracker = self.tracker
        judged = 0
        for frame in relabel_recording(self.recording):
            batch: list[StreamMessage] = []
            for ev in tracker.step(frame):
                batch.append(self._msg("state_change", {
                    "src": ev.src.value, "dst": ev.dst.value,
                    "frame": ev.frame_index, "t": ev.t, "reason": ev.reason,
                    "serve": ({"session": self.session_id, "index": ev.serve_index}
                              if ev.serve_index else None),
                }))
            while judged < len(tracker.completed):
                batch.extend(self._judge(tracker.completed[judged]))
                judged += 1
            batch.append(self._msg("frame", {
                "t": frame.t,
                "complete": frame.complete,
                "points": {
                    name: _point(getattr(frame, name))
                    for name in ("hand", "wrist", "elbow", "shoulder", "shuttle_hand",
                                 "shuttle_shoulder", "racket_top", "racket_bottom",
                                 "racket_side", "racket_middle")
                },
            }))
            if tracker.state in (ServiceState.IDLE, ServiceState.READY) and frame.complete:
                batch.append(self._guidance(frame, tracker.state))
            yield frame.t, batch

        tracker.finish()
        tail: list[StreamMessage] = []
        while judged < len(tracker.completed):
            tail.extend(self._judge(tracker.completed[judged]))
            judged += 1
        n_valid = sum(1 for lab in self.labels if lab is TrialLabel.VALID)
        self.stats = session_summary(tracker.completed, n_valid, self.cfg.jitter)
        tail.append(self._msg("session_stats", {
            "session": self.session_id,
            "n": self.stats.n,
            "trials": len(tracker.completed),
            "labels": {lab.value: sum(1 for x in self.labels if x is lab) for lab in TrialLabel},
            "variables": self.stats.variables,
        }))
        yield float("nan"), tail

    def _guidance(self, frame, state: ServiceState) -> StreamMessage:
        g = self.cfg.guidance
        targets = ready_targets(frame, g)
        bands = (g.halo_green, g.halo_yellow)
        payload = {
            "t": frame.t,
            "state": state.value,
            "shuttle_target": _point(targets.shuttle_target),
            "racket_target": _point(targets.racket_target),
            "sagittal": _point(targets.sagittal_axis),
            "halo_shuttle": halo_state(frame.shuttle_hand, targets.shuttle_target,
                                       targets.sagittal_axis, bands).value,
            "halo_racket": halo_state(frame.racket_top, targets.racket_target,
                                      targets.sagittal_axis, bands).value,
            "track": None,
        }
        if state is ServiceState.READY:
            spec = swing_track(frame, self.model, g)
            payload["track"] = {
                "center": _point(spec.center),
                "plane_height": spec.plane_height,
                "radius": spec.radius,
                "alpha": spec.angular_acceleration,
                "sweep_back": spec.sweep_back,
                "sweep_forward": spec.sweep_forward,
            }
        return self._msg("guidance", payload)


def session_messages(recording: Recording | str, model: ExpertModel,
                     cfg: EngineConfig | None = None,
                     session_id: str = "session") -> Iterator[StreamMessage]:
    pipeline = Pipeline(recording, model, cfg, session_id)
    for _, batch in pipeline.frame_batches():
        yield from batch


def run_session(recording: Recording | str, model: ExpertModel,
                cfg: EngineConfig | None = None,
                session_id: str = "session") -> SessionResult:
    """Process a recording (or a recording file path) end to end and collect
    records, judgments, and the full message stream."""
    pipeline = Pipeline(recording, model, cfg, session_id)
    messages = [msg for _, batch in pipeline.frame_batches() for msg in batch]
    return SessionResult(
        session_id=session_id,
        records=pipeline.records,
        labels=pipeline.labels,
        reports=pipeline.reports,
        stats=pipeline.stats,
        messages=messages,
    )
