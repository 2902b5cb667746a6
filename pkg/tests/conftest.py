"""Shared fixtures: synthesized recordings and frame-building helpers."""

from __future__ import annotations

import numpy as np
import pytest

from shortserve.kinetics import ServiceSummary
from shortserve.mocap import Handedness, SkeletonFrame
from shortserve.synth import SynthesisParams, random_params, synthesize_session


def make_skeleton_frame(
    t: float = 0.0,
    wrist=(0.1, 1.2, 0.1),
    elbow=(0.18, 1.15, 0.15),
    shoulder=(0.18, 1.42, 0.0),
    shuttle_shoulder=(-0.18, 1.42, 0.0),
    shuttle_hand=(0.18, 1.05, 0.2),
    racket_top=(0.3, 1.05, 0.2),
    racket_major=None,
    racket_side_dir=None,
    complete: bool = True,
    handedness: Handedness = Handedness.RIGHT,
) -> SkeletonFrame:
    """Build a skeleton frame from a handful of points; the racket markers
    are derived from racket_top and the optional axis directions."""
    wrist = np.array(wrist, dtype=float)
    racket_top = np.array(racket_top, dtype=float)
    major = np.array(racket_major, dtype=float) if racket_major is not None else racket_top - wrist
    if np.linalg.norm(major) == 0:
        major = np.array([0.0, 0.0, 1.0])
    major = major / np.linalg.norm(major)
    if racket_side_dir is None:
        side = np.cross(major, [0.0, 1.0, 0.0])
        if np.linalg.norm(side) < 1e-9:
            side = np.cross(major, [1.0, 0.0, 0.0])
    else:
        side = np.array(racket_side_dir, dtype=float)
    side = side / np.linalg.norm(side)
    bottom = racket_top - 0.4 * major
    middle = racket_top - 0.1 * major
    return SkeletonFrame(
        t=t,
        hand=wrist + 0.05 * major,
        wrist=wrist,
        elbow=np.array(elbow, dtype=float),
        shoulder=np.array(shoulder, dtype=float),
        shuttle_hand=np.array(shuttle_hand, dtype=float),
        shuttle_shoulder=np.array(shuttle_shoulder, dtype=float),
        racket_top=racket_top,
        racket_bottom=bottom,
        racket_side=middle + 0.1 * side,
        racket_middle=middle,
        complete=complete,
        handedness=handedness,
    )


def make_summary(
    pitch: float = 21.60,
    speed: float = 5.41,
    height: float = 0.11,
    wrist: float = 9.96,
    elbow: float = 4.97,
    shoulder: float = 1.48,
    backswing_angle: float = 45.0,
    n_trace: int = 5,
) -> ServiceSummary:
    """Summary whose height trace peaks at ``height`` (other points smaller)."""
    trace = tuple(
        (0.01 * i, height * (i + 1) / n_trace) for i in range(n_trace)
    )
    return ServiceSummary(
        pitch_at_contact_deg=pitch,
        speed_at_contact_mps=speed,
        height_trace=trace,
        max_abs_height_delta_m=height,
        wrist_change_deg=wrist,
        elbow_change_deg=elbow,
        shoulder_change_deg=shoulder,
        backswing_end_racket_shuttle_angle_deg=backswing_angle,
    )


varied_params = random_params


@pytest.fixture(scope="session")
def session5():
    """Five clean serves with distinct, known ground truths."""
    rng = np.random.default_rng(7)
    return synthesize_session([varied_params(rng) for _ in range(5)])


@pytest.fixture(scope="session")
def session20():
    """Twenty clean serves (formative-protocol scale)."""
    rng = np.random.default_rng(11)
    params = [varied_params(rng, post_hold_s=2.1) for _ in range(20)]
    return synthesize_session(params)


@pytest.fixture(scope="session")
def single_serve():
    return synthesize_session([SynthesisParams()])
