"""Marker-frame ingest: parsing, writing, relabeling, and replay.

Coordinates are meters in a right-handed frame, Y up, Z = body forward at
calibration.  Recordings use the conventional full-body arm labels
(L/R + SHO, ELB, WRA, WRB, FIN) plus four racket labels; everything the
engine consumes enters through this module.
"""

from __future__ import annotations

import enum
import io
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import MarkerSetError, ParameterError, ParseError

ARM_LABELS = ("SHO", "ELB", "WRA", "WRB", "FIN")
RACKET_LABELS = ("RKTT", "RKTB", "RKTS", "RKTM")  # top, bottom, side, middle of head
KNOWN_LABELS = frozenset(
    [side + name for side in ("L", "R") for name in ARM_LABELS] + list(RACKET_LABELS)
)

_INVALID = np.full(3, np.nan)


class Handedness(str, enum.Enum):
    RIGHT = "Right"
    LEFT = "Left"


class RecordingFormat(str, enum.Enum):
    CSV = "csv"
    JSONL = "jsonl"


@dataclass
class MarkerFrame:
    """One capture instant: timestamp plus every marker's position and validity."""

    t: float
    markers: dict[str, np.ndarray]
    validity: dict[str, bool]

    def valid(self, label: str) -> bool:
        return self.validity.get(label, False)


@dataclass
class SkeletonFrame:
    """Relabeled view of one instant for the serving task.

    The dominant arm maps to hand/wrist/elbow/shoulder; the other side
    holds the shuttle.  ``complete`` is False if any required source
    marker lost tracking on this frame.
    """

    t: float
    hand: np.ndarray
    wrist: np.ndarray
    elbow: np.ndarray
    shoulder: np.ndarray
    shuttle_hand: np.ndarray
    shuttle_shoulder: np.ndarray
    racket_top: np.ndarray
    racket_bottom: np.ndarray
    racket_side: np.ndarray
    racket_middle: np.ndarray
    complete: bool
    handedness: Handedness = Handedness.RIGHT


@dataclass
class Recording:
    """An ordered marker-frame sequence with its capture parameters."""

    frames: list[MarkerFrame]
    rate_hz: float = 120.0
    handedness: Handedness = Handedness.RIGHT
    metadata: dict = field(default_factory=dict)

    def labels(self) -> list[str]:
        return sorted(self.frames[0].markers) if self.frames else []


@dataclass
class ReplayStatus:
    """Outcome of a replay run."""

    delivered: int
    completed: bool


def required_labels(handedness: Handedness) -> list[str]:
    """Marker labels relabel() needs for the given dominant hand."""
    dom = "R" if handedness is Handedness.RIGHT else "L"
    other = "L" if dom == "R" else "R"
    labels = [dom + name for name in ARM_LABELS]
    labels += [other + "SHO", other + "FIN"]
    labels += list(RACKET_LABELS)
    return labels


# ---------------------------------------------------------------------------
# parsing / writing

def _check_labels(labels: Sequence[str], where: str) -> None:
    for label in labels:
        if label not in KNOWN_LABELS:
            raise ParseError(f"{where}: unknown marker label {label!r}")


def _parse_cell(text: str, line_no: int, label: str) -> float | None:
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError as exc:
        raise ParseError(f"line {line_no}: bad number {text!r} for {label}") from exc
    if not np.isfinite(value):
        raise ParseError(f"line {line_no}: non-finite coordinate for {label}")
    return value


def _parse_csv(text: str) -> list[MarkerFrame]:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("line 1: empty document")
    header = lines[0].split(",")
    if header[0].strip() != "t":
        raise ParseError("line 1: malformed header, first column must be 't'")
    if (len(header) - 1) % 3 != 0:
        raise ParseError("line 1: malformed header, expected 3 columns per marker")
    labels: list[str] = []
    for i in range(1, len(header), 3):
        base = header[i].strip()
        if not base.endswith(".x"):
            raise ParseError(f"line 1: malformed header column {header[i]!r}")
        label = base[:-2]
        expected = [f"{label}.x", f"{label}.y", f"{label}.z"]
        got = [h.strip() for h in header[i:i + 3]]
        if got != expected:
            raise ParseError(f"line 1: malformed header triplet for {label!r}")
        labels.append(label)
    _check_labels(labels, "line 1")

    frames: list[MarkerFrame] = []
    prev_t = None
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ParseError(f"line {line_no}: expected {len(header)} cells, got {len(cells)}")
        t_cell = _parse_cell(cells[0], line_no, "t")
        if t_cell is None:
            raise ParseError(f"line {line_no}: missing timestamp")
        if prev_t is not None and t_cell <= prev_t:
            raise ParseError(f"line {line_no}: non-monotone timestamp {t_cell!r}")
        prev_t = t_cell
        markers: dict[str, np.ndarray] = {}
        validity: dict[str, bool] = {}
        for k, label in enumerate(labels):
            xyz = [_parse_cell(cells[1 + 3 * k + j], line_no, label) for j in range(3)]
            if any(v is None for v in xyz):
                markers[label] = _INVALID.copy()
                validity[label] = False
            else:
                markers[label] = np.array(xyz, dtype=float)
                validity[label] = True
        frames.append(MarkerFrame(t=t_cell, markers=markers, validity=validity))
    return frames


def _parse_jsonl(text: str) -> list[MarkerFrame]:
    raw_frames = []
    labels: set[str] = set()
    for line_no, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"record {line_no}: invalid JSON") from exc
        if "t" not in obj or "markers" not in obj:
            raise ParseError(f"record {line_no}: frame object needs 't' and 'markers'")
        _check_labels(list(obj["markers"]), f"record {line_no}")
        labels.update(obj["markers"])
        raw_frames.append((line_no, obj))

    frames: list[MarkerFrame] = []
    prev_t = None
    for line_no, obj in raw_frames:
        t = float(obj["t"])
        if prev_t is not None and t <= prev_t:
            raise ParseError(f"record {line_no}: non-monotone timestamp {t!r}")
        prev_t = t
        markers: dict[str, np.ndarray] = {}
        validity: dict[str, bool] = {}
        for label in labels:
            coords = obj["markers"].get(label)
            if coords is None:
                markers[label] = _INVALID.copy()
                validity[label] = False
                continue
            if len(coords) != 3:
                raise ParseError(f"record {line_no}: {label} needs 3 coordinates")
            point = np.array([float(c) for c in coords])
            if not np.all(np.isfinite(point)):
                raise ParseError(f"record {line_no}: non-finite coordinate for {label}")
            markers[label] = point
            validity[label] = True
        frames.append(MarkerFrame(t=t, markers=markers, validity=validity))
    return frames


def parse_recording(
    source: bytes | str | io.IOBase,
    format: RecordingFormat = RecordingFormat.CSV,
    *,
    rate_hz: float | None = None,
    handedness: Handedness = Handedness.RIGHT,
    metadata: dict | None = None,
) -> Recording:
    """Parse a complete CSV or JSON Lines document into a Recording.

    Missing marker cells become validity=False.  Sidecar metadata
    (rate_hz, handedness, synthesis ground truth) is passed in by the
    caller; see load_recording() for path-based discovery.
    """
    if isinstance(source, io.IOBase):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    fmt = RecordingFormat(format)
    frames = _parse_csv(source) if fmt is RecordingFormat.CSV else _parse_jsonl(source)

    if rate_hz is None:
        if len(frames) >= 2:
            deltas = np.diff([f.t for f in frames])
            rate_hz = 1.0 / float(np.median(deltas))
        else:
            rate_hz = 120.0
    if rate_hz <= 0:
        raise ParseError(f"rate_hz must be positive, got {rate_hz}")
    return Recording(
        frames=frames,
        rate_hz=rate_hz,
        handedness=Handedness(handedness),
        metadata=dict(metadata or {}),
    )


def write_recording(recording: Recording, format: RecordingFormat = RecordingFormat.CSV) -> str:
    """Serialize a recording; floats use repr so a round trip is bit-identical."""
    fmt = RecordingFormat(format)
    labels = recording.labels()
    out = io.StringIO()
    if fmt is RecordingFormat.CSV:
        cols = ["t"] + [f"{lab}.{ax}" for lab in labels for ax in "xyz"]
        out.write(",".join(cols) + "\n")
        for frame in recording.frames:
            cells = [repr(frame.t)]
            for lab in labels:
                if frame.valid(lab):
                    cells.extend(repr(float(c)) for c in frame.markers[lab])
                else:
                    cells.extend(["", "", ""])
            out.write(",".join(cells) + "\n")
    else:
        for frame in recording.frames:
            markers = {
                lab: ([float(c) for c in frame.markers[lab]] if frame.valid(lab) else None)
                for lab in labels
            }
            out.write(json.dumps({"t": frame.t, "markers": markers}) + "\n")
    return out.getvalue()


def sidecar_metadata(recording: Recording) -> dict:
    """The sidecar document carried next to a recording file."""
    return {
        "rate_hz": recording.rate_hz,
        "handedness": recording.handedness.value,
        **recording.metadata,
    }


def save_recording(recording: Recording, path: str, format: RecordingFormat | None = None) -> None:
    fmt = format or (RecordingFormat.JSONL if str(path).endswith(".jsonl") else RecordingFormat.CSV)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_recording(recording, fmt))
    with open(str(path) + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(sidecar_metadata(recording), fh, indent=2)
        fh.write("\n")


def load_recording(path: str) -> Recording:
    """Read a recording file plus its '<path>.meta.json' sidecar if present."""
    fmt = RecordingFormat.JSONL if str(path).endswith(".jsonl") else RecordingFormat.CSV
    meta: dict = {}
    try:
        with open(str(path) + ".meta.json", "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except FileNotFoundError:
        pass
    with open(path, "r", encoding="utf-8") as fh:
        return parse_recording(
            fh.read(),
            fmt,
            rate_hz=meta.get("rate_hz"),
            handedness=Handedness(meta.get("handedness", "Right")),
            metadata={k: v for k, v in meta.items() if k not in ("rate_hz", "handedness")},
        )


# ---------------------------------------------------------------------------
# relabeling

def relabel(frame: MarkerFrame, handedness: Handedness) -> SkeletonFrame:
    """Map conventional markerset labels onto the serving-task skeleton.

    The wrist is the midpoint of the dominant WRA/WRB pair.  A required
    label missing from the frame's label set is a structural error;
    per-frame lost tracking only clears ``complete``.
    """
    handedness = Handedness(handedness)
    dom = "R" if handedness is Handedness.RIGHT else "L"
    other = "L" if dom == "R" else "R"

    needed = required_labels(handedness)
    missing = [lab for lab in needed if lab not in frame.markers]
    if missing:
        raise MarkerSetError(f"recording lacks required marker label(s): {', '.join(missing)}")

    complete = all(frame.valid(lab) for lab in needed)
    wrist = (frame.markers[dom + "WRA"] + frame.markers[dom + "WRB"]) / 2.0
    return SkeletonFrame(
        t=frame.t,
        hand=frame.markers[dom + "FIN"],
        wrist=wrist,
        elbow=frame.markers[dom + "ELB"],
        shoulder=frame.markers[dom + "SHO"],
        shuttle_hand=frame.markers[other + "FIN"],
        shuttle_shoulder=frame.markers[other + "SHO"],
        racket_top=frame.markers["RKTT"],
        racket_bottom=frame.markers["RKTB"],
        racket_side=frame.markers["RKTS"],
        racket_middle=frame.markers["RKTM"],
        complete=complete,
        handedness=handedness,
    )


def relabel_recording(recording: Recording) -> list[SkeletonFrame]:
    return [relabel(f, recording.handedness) for f in recording.frames]


# ---------------------------------------------------------------------------
# replay

def replay(
    recording: Recording,
    speed_factor: float,
    sink: Callable[[MarkerFrame], bool | None],
    *,
    sleep: Callable[[float], None] = time.sleep,
) -> ReplayStatus:
    """Deliver frames in order with inter-frame delay = original delta / speed.

    The sink may return False to reject a frame, which stops the replay.
    Delivery order is identical for any speed factor.
    """
    if speed_factor <= 0:
        raise ParameterError(f"speed_factor must be positive, got {speed_factor}")
    delivered = 0
    prev_t = None
    for frame in recording.frames:
        if prev_t is not None:
            sleep((frame.t - prev_t) / speed_factor)
        prev_t = frame.t
        if sink(frame) is False:
            return ReplayStatus(delivered=delivered, completed=False)
        delivered += 1
    return ReplayStatus(delivered=delivered, completed=True)


def frames_equal(a: MarkerFrame, b: MarkerFrame) -> bool:
    """Bit-exact equality: timestamps, validity, and valid coordinates."""
    if a.t != b.t or set(a.markers) != set(b.markers):
        return False
    for lab in a.markers:
        if a.valid(lab) != b.valid(lab):
            return False
        if a.valid(lab) and not np.array_equal(a.markers[lab], b.markers[lab]):
            return False
    return True


def recordings_equal(a: Recording, b: Recording) -> bool:
    return (
        len(a.frames) == len(b.frames)
        and a.handedness == b.handedness
        and all(frames_equal(x, y) for x, y in zip(a.frames, b.frames))
    )
