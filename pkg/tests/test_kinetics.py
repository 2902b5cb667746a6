"""Kinetic-variable math against constructed geometry."""

import math

import numpy as np
import pytest

from conftest import make_skeleton_frame
from shortserve.errors import GeometryError, ParameterError, SegmentationError, WindowError
from shortserve.kinetics import (
    Keyframes,
    KineticSample,
    joint_angles,
    kinetic_series,
    pitch_angle,
    racket_axes,
    racket_speed,
    rotary_speed,
    summarize_swing,
)
from shortserve.mocap import SkeletonFrame, relabel_recording


def _frame_from_racket(top, bottom, side, middle):
    base = make_skeleton_frame()
    return SkeletonFrame(
        t=0.0, hand=base.hand, wrist=base.wrist, elbow=base.elbow, shoulder=base.shoulder,
        shuttle_hand=base.shuttle_hand, shuttle_shoulder=base.shuttle_shoulder,
        racket_top=np.array(top, float), racket_bottom=np.array(bottom, float),
        racket_side=np.array(side, float), racket_middle=np.array(middle, float),
        complete=True,
    )


class TestRacketAxes:
    def test_definition(self):
        axes = racket_axes(_frame_from_racket((0, 1, 0), (0, 0, 0), (0, 0, 0.1), (0, 0, 0)))
        assert np.allclose(axes.major, [0, 1, 0])
        assert np.allclose(axes.normal, np.cross([0, 1, 0], [0, 0, 0.1]))

    def test_collinear_markers_rejected(self):
        with pytest.raises(GeometryError):
            racket_axes(_frame_from_racket((0, 1, 0), (0, 0, 0), (0, 0.5, 0), (0, 0.2, 0)))

    def test_coincident_markers_rejected(self):
        with pytest.raises(GeometryError):
            racket_axes(_frame_from_racket((0, 1, 0), (0, 1, 0), (0, 0, 0.1), (0, 0, 0)))

    def test_normal_orthogonal_to_both(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            top, bottom, middle = rng.normal(size=(3, 3))
            side = middle + rng.normal(size=3)
            axes = racket_axes(_frame_from_racket(top, bottom, side, middle))
            n = axes.normal / np.linalg.norm(axes.normal)
            assert abs(np.dot(n, axes.major / np.linalg.norm(axes.major))) < 1e-9
            assert abs(np.dot(n, axes.side / np.linalg.norm(axes.side))) < 1e-9


class TestPitch:
    def test_vertical_normal(self):
        assert pitch_angle(np.array([0.0, 1.0, 0.0])) == pytest.approx(90.0)

    def test_normal_in_transverse_plane(self):
        assert pitch_angle(np.array([1.0, 0.0, 0.0])) == pytest.approx(0.0)

    def test_diagonal(self):
        assert pitch_angle(np.array([1.0, 1.0, 0.0]) / math.sqrt(2)) == pytest.approx(45.0)

    def test_invariant_under_yaw(self):
        rng = np.random.default_rng(1)
        n = np.array([0.3, 0.5, -0.2])
        base = pitch_angle(n)
        for _ in range(25):
            a = rng.uniform(0, 2 * math.pi)
            rot = np.array([[math.cos(a), 0, math.sin(a)], [0, 1, 0], [-math.sin(a), 0, math.cos(a)]])
            assert pitch_angle(rot @ n) == pytest.approx(base, abs=1e-9)

    def test_range_and_zero_vector(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            p = pitch_angle(rng.normal(size=3))
            assert -90.0 <= p <= 90.0
        with pytest.raises(GeometryError):
            pitch_angle(np.zeros(3))


class TestJointAngles:
    def test_wrist_ninety(self):
        frame = make_skeleton_frame(
            wrist=(1, 0, 0), elbow=(0, 0, 0), shoulder=(0, 1, 0), racket_major=(0, 1, 0)
        )
        wrist, _, _ = joint_angles(frame)
        assert wrist == pytest.approx(90.0)

    def test_straight_arm_elbow_180(self):
        frame = make_skeleton_frame(
            shoulder=(0, 2, 0), elbow=(0, 1, 0), wrist=(0, 0, 0), racket_major=(1, 0, 0)
        )
        _, elbow, _ = joint_angles(frame)
        assert elbow == pytest.approx(180.0)

    def test_hanging_arm_shoulder_zero(self):
        frame = make_skeleton_frame(
            shoulder=(0, 2, 0), elbow=(0, 1, 0), wrist=(0.5, 1, 0), racket_major=(1, 0, 0)
        )
        _, _, shoulder = joint_angles(frame)
        assert shoulder == pytest.approx(0.0)

    def test_translation_and_scale_invariance(self):
        rng = np.random.default_rng(3)
        frame = make_skeleton_frame(
            wrist=(0.1, 1.2, 0.1), elbow=(0.2, 1.1, 0.2), shoulder=(0.2, 1.4, 0.0),
            racket_major=(0.4, -0.3, 0.6),
        )
        base = joint_angles(frame)
        for _ in range(10):
            shift = rng.normal(size=3)
            scale = rng.uniform(0.2, 5.0)
            moved = make_skeleton_frame(
                wrist=scale * (frame.wrist + shift), elbow=scale * (frame.elbow + shift),
                shoulder=scale * (frame.shoulder + shift),
                racket_top=scale * (frame.racket_top + shift),
                racket_major=(0.4, -0.3, 0.6),
            )
            assert np.allclose(joint_angles(moved), base, atol=1e-9)

    def test_degenerate_forearm(self):
        frame = make_skeleton_frame(wrist=(1, 1, 1), elbow=(1, 1, 1))
        with pytest.raises(GeometryError):
            joint_angles(frame)


def _uniform_motion_frames(velocity, n=7, rate=120.0, start=(0.0, 1.0, 0.0)):
    v = np.array(velocity, float)
    frames = []
    for i in range(n):
        t = i / rate
        frames.append(make_skeleton_frame(t=t, racket_top=np.array(start) + v * t,
                                          racket_major=(0, 0, 1)))
    return frames


class TestRacketSpeed:
    def test_uniform_motion(self):
        frames = _uniform_motion_frames((5.0, 0, 0), rate=50.0)
        assert racket_speed(frames, frames[3].t) == pytest.approx(5.0, abs=1e-12)

    def test_stationary(self):
        frames = _uniform_motion_frames((0, 0, 0))
        assert racket_speed(frames, frames[3].t) == 0.0

    def test_circular_motion_within_one_percent(self):
        r, omega, rate = 0.5, 10.0, 120.0
        frames = []
        for i in range(11):
            t = i / rate
            pos = (r * math.cos(omega * t), 1.0 + r * math.sin(omega * t), 0.0)
            frames.append(make_skeleton_frame(t=t, racket_top=pos, racket_major=(0, 0, 1)))
        speed = racket_speed(frames, frames[5].t)
        assert speed == pytest.approx(r * omega, rel=0.01)

    def test_window_too_small(self):
        with pytest.raises(WindowError):
            racket_speed(_uniform_motion_frames((1, 0, 0), n=2), 0.0)

    def test_translation_invariance_and_time_rescaling(self):
        frames = _uniform_motion_frames((2.0, 1.0, -0.5))
        base = racket_speed(frames, frames[3].t)
        shifted = [
            make_skeleton_frame(t=f.t, racket_top=f.racket_top + 10.0, racket_major=(0, 0, 1))
            for f in frames
        ]
        assert racket_speed(shifted, shifted[3].t) == pytest.approx(base, abs=1e-12)
        k = 2.0
        slowed = [
            make_skeleton_frame(t=f.t * k, racket_top=f.racket_top, racket_major=(0, 0, 1))
            for f in frames
        ]
        assert racket_speed(slowed, slowed[3].t) == pytest.approx(base / k, abs=1e-12)


class TestRotarySpeed:
    def test_ratio_two(self):
        assert rotary_speed(2.0, 0.66, 0.33) == pytest.approx(4.0)

    def test_equal_radii(self):
        assert rotary_speed(3.3, 0.5, 0.5) == pytest.approx(3.3)

    def test_rotation_never_slower(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            v_t = rng.uniform(0, 10)
            r_c = rng.uniform(0.1, 1.0)
            r_top = r_c + rng.uniform(0, 1.0)
            assert rotary_speed(v_t, r_top, r_c) >= v_t

    def test_monotone_in_radii(self):
        assert rotary_speed(2.0, 0.7, 0.3) > rotary_speed(2.0, 0.6, 0.3)
        assert rotary_speed(2.0, 0.7, 0.4) < rotary_speed(2.0, 0.7, 0.3)

    def test_parameter_errors(self):
        with pytest.raises(ParameterError):
            rotary_speed(1.0, 0.2, 0.3)
        with pytest.raises(ParameterError):
            rotary_speed(1.0, 0.3, 0.0)


def _samples(values, field="wrist_deg"):
    out = []
    for i, v in enumerate(values):
        kwargs = dict(t=i / 120.0, pitch_deg=10.0, height_m=1.0, speed_mps=1.0,
                      wrist_deg=20.0, elbow_deg=150.0, shoulder_deg=10.0)
        kwargs[field] = v
        out.append(KineticSample(**kwargs))
    return out


class TestSummarize:
    def test_constant_samples_zero_changes(self):
        samples = _samples([20.0] * 8)
        s = summarize_swing(samples, Keyframes(0, 3, 6))
        assert s.wrist_change_deg == 0.0
        assert s.elbow_change_deg == 0.0
        assert s.shoulder_change_deg == 0.0

    def test_wrist_change_is_range(self):
        samples = _samples([10.0, 15.0, 12.0, 20.0])
        s = summarize_swing(samples, Keyframes(0, 1, 3))
        assert s.wrist_change_deg == pytest.approx(10.0)

    def test_out_of_order_keyframes(self):
        samples = _samples([1.0] * 6)
        with pytest.raises(SegmentationError):
            summarize_swing(samples, Keyframes(3, 2, 5))
        with pytest.raises(SegmentationError):
            summarize_swing(samples, Keyframes(0, 2, 9))

    def test_height_trace_relative_to_backswing_start(self):
        samples = []
        heights = [1.0, 1.0, 1.05, 0.9, 1.02]
        for i, h in enumerate(heights):
            samples.append(KineticSample(t=i / 120.0, pitch_deg=0, height_m=h, speed_mps=1,
                                         wrist_deg=1, elbow_deg=1, shoulder_deg=1))
        s = summarize_swing(samples, Keyframes(0, 2, 4))
        deltas = [dh for _, dh in s.height_trace]
        assert deltas == pytest.approx([0.05, -0.1, 0.02])
        assert s.max_abs_height_delta_m == pytest.approx(0.1)


class TestAgainstSynthesizer:
    def test_axes_track_designed_pitch(self, single_serve):
        frames = relabel_recording(single_serve)
        truth = single_serve.metadata["synthesis"]["serves"][0]
        # during the hold the racket carries the template ready pitch
        hold_frame = frames[truth["k_back"] - 5]
        assert pitch_angle(racket_axes(hold_frame).normal) == pytest.approx(10.0, abs=1e-9)
        contact_frame = frames[truth["k_contact"]]
        assert pitch_angle(racket_axes(contact_frame).normal) == pytest.approx(
            truth["pitch_deg"], abs=1e-9
        )

    def test_series_speed_matches_point_queries(self, single_serve):
        frames = relabel_recording(single_serve)[:40]
        series = kinetic_series(frames)
        for i in range(2, len(frames) - 2):
            assert series[i].speed_mps == racket_speed(frames, frames[i].t)
