"""Ingest: parsing, relabeling, replay, and writer/parser round trips."""

import numpy as np
import pytest

from shortserve.errors import MarkerSetError, ParameterError, ParseError
from shortserve.mocap import (
    Handedness,
    MarkerFrame,
    Recording,
    RecordingFormat,
    frames_equal,
    parse_recording,
    recordings_equal,
    relabel,
    replay,
    write_recording,
)
from shortserve.synth import SynthesisParams, synthesize_service

LABELS = ["RSHO", "RELB", "RWRA", "RWRB", "RFIN", "LSHO", "LFIN",
          "RKTT", "RKTB", "RKTS", "RKTM"]


def _csv(rows, labels=LABELS):
    header = "t," + ",".join(f"{lab}.{ax}" for lab in labels for ax in "xyz")
    return "\n".join([header] + rows) + "\n"


def _row(t, value=1.0, labels=LABELS, blank=None):
    cells = [str(t)]
    for i, lab in enumerate(labels):
        for ax in range(3):
            if blank is not None and blank == (lab, ax):
                cells.append("")
            else:
                cells.append(str(value + i + 0.1 * ax))
    return ",".join(cells)


class TestParse:
    def test_three_frame_file_all_present(self):
        rec = parse_recording(_csv([_row(0.0), _row(0.01), _row(0.02)]), RecordingFormat.CSV)
        assert len(rec.frames) == 3
        assert all(all(f.validity.values()) for f in rec.frames)
        assert all(relabel(f, Handedness.RIGHT).complete for f in rec.frames)

    def test_blank_cell_invalidates_that_marker_that_frame_only(self):
        rec = parse_recording(
            _csv([_row(0.0), _row(0.01, blank=("RELB", 1)), _row(0.02)]),
            RecordingFormat.CSV,
        )
        assert rec.frames[0].valid("RELB")
        assert not rec.frames[1].valid("RELB")
        assert rec.frames[2].valid("RELB")
        assert all(rec.frames[1].valid(lab) for lab in LABELS if lab != "RELB")

    def test_malformed_header(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_recording("time,RSHO.x\n0,1\n", RecordingFormat.CSV)

    def test_unknown_marker_label(self):
        bad = _csv([_row(0.0, labels=LABELS[:-1] + ["XXXX"])], labels=LABELS[:-1] + ["XXXX"])
        with pytest.raises(ParseError, match="XXXX"):
            parse_recording(bad, RecordingFormat.CSV)

    def test_non_monotone_timestamps(self):
        with pytest.raises(ParseError, match="line 4"):
            parse_recording(_csv([_row(0.0), _row(0.02), _row(0.01)]), RecordingFormat.CSV)

    def test_jsonl_null_marker_invalid(self):
        text = (
            '{"t": 0.0, "markers": {"RSHO": [1, 2, 3], "RKTT": null}}\n'
            '{"t": 0.01, "markers": {"RSHO": [1, 2, 3], "RKTT": [0, 0, 1]}}\n'
        )
        rec = parse_recording(text, RecordingFormat.JSONL)
        assert not rec.frames[0].valid("RKTT")
        assert rec.frames[1].valid("RKTT")

    def test_jsonl_unknown_label(self):
        with pytest.raises(ParseError, match="record 1"):
            parse_recording('{"t": 0, "markers": {"BOGUS": [1,2,3]}}\n', RecordingFormat.JSONL)

    def test_rate_inferred_from_timestamps(self):
        rec = parse_recording(_csv([_row(i / 200.0) for i in range(5)]), RecordingFormat.CSV)
        assert rec.rate_hz == pytest.approx(200.0)


class TestRoundTrip:
    @pytest.mark.parametrize("fmt", [RecordingFormat.CSV, RecordingFormat.JSONL])
    def test_synthesized_recording_round_trips_bit_identical(self, single_serve, fmt):
        text = write_recording(single_serve, fmt)
        back = parse_recording(text, fmt, rate_hz=single_serve.rate_hz,
                               handedness=single_serve.handedness)
        assert recordings_equal(single_serve, back)

    def test_round_trip_preserves_dropout(self):
        rec = synthesize_service(SynthesisParams(dropout_frames=2))
        text = write_recording(rec, RecordingFormat.CSV)
        back = parse_recording(text, RecordingFormat.CSV)
        assert recordings_equal(rec, back)


class TestRelabel:
    def _frame(self, handedness):
        markers = {}
        labels = LABELS + ["LELB", "LWRA", "LWRB"]
        for i, lab in enumerate(labels):
            markers[lab] = np.array([float(i), 0.0, 0.0])
        markers["RWRA"] = np.array([1.0, 1.0, 0.0])
        markers["RWRB"] = np.array([1.0, 0.0, 0.0])
        return MarkerFrame(t=0.0, markers=markers, validity={k: True for k in markers})

    def test_wrist_is_midpoint(self):
        sk = relabel(self._frame(Handedness.RIGHT), Handedness.RIGHT)
        assert np.allclose(sk.wrist, [1.0, 0.5, 0.0])

    def test_left_handedness_swaps_sides(self):
        frame = self._frame(Handedness.LEFT)
        sk = relabel(frame, Handedness.LEFT)
        assert np.array_equal(sk.hand, frame.markers["LFIN"])
        assert np.array_equal(sk.shuttle_hand, frame.markers["RFIN"])

    def test_invalid_elbow_clears_complete(self):
        frame = self._frame(Handedness.RIGHT)
        frame.validity["RELB"] = False
        sk = relabel(frame, Handedness.RIGHT)
        assert not sk.complete

    def test_missing_label_is_structural_error(self):
        frame = self._frame(Handedness.RIGHT)
        del frame.markers["RKTT"]
        with pytest.raises(MarkerSetError, match="RKTT"):
            relabel(frame, Handedness.RIGHT)

    def test_relabel_is_pure(self):
        frame = self._frame(Handedness.RIGHT)
        a = relabel(frame, Handedness.RIGHT)
        b = relabel(frame, Handedness.RIGHT)
        assert np.array_equal(a.wrist, b.wrist) and a.complete == b.complete


class TestReplay:
    def _recording(self, n=100, rate=120.0):
        frames = [
            MarkerFrame(t=i / rate, markers={"RKTT": np.zeros(3)}, validity={"RKTT": True})
            for i in range(n)
        ]
        return Recording(frames=frames, rate_hz=rate)

    def test_full_delivery_and_timing(self):
        rec = self._recording()
        delays = []
        status = replay(rec, 1.0, lambda f: None, sleep=delays.append)
        assert status.delivered == 100 and status.completed
        assert sum(delays) == pytest.approx(rec.frames[-1].t)

    def test_speed_factor_scales_delay_not_order(self):
        rec = self._recording()
        seen_fast, seen_slow = [], []
        replay(rec, 1000.0, lambda f: seen_fast.append(f.t), sleep=lambda s: None)
        replay(rec, 1.0, lambda f: seen_slow.append(f.t), sleep=lambda s: None)
        assert seen_fast == seen_slow == [f.t for f in rec.frames]

    def test_two_replays_identical(self):
        rec = self._recording()
        runs = []
        for _ in range(2):
            seen = []
            replay(rec, 2.0, lambda f: seen.append(f), sleep=lambda s: None)
            runs.append(seen)
        assert all(frames_equal(a, b) for a, b in zip(*runs))

    def test_sink_rejection_stops_replay(self):
        rec = self._recording()
        status = replay(rec, 1.0, lambda f: f.t < 0.1 or False, sleep=lambda s: None)
        assert not status.completed
        assert status.delivered == 12  # frames 0..11 are below 0.1 s

    def test_non_positive_speed_rejected(self):
        with pytest.raises(ParameterError):
            replay(self._recording(3), 0.0, lambda f: None, sleep=lambda s: None)
