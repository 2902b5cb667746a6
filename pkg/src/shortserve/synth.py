"""Analytic serve generator: recordings whose kinetic variables are known
in closed form, used as the oracle for the whole pipeline.

Construction notes.  The racket top rides prescribed paths: a horizontal
pull-back, a curve to the backswing apex, then a straight strike line that
passes the (stationary) shuttle hand at the designed contact frame, with a
constant-velocity window around contact so the measured speed equals the
ground truth exactly.  Joint-angle changes are applied as exact axis
rotations in sequential sub-windows of the backswing and stay frozen
through the strike; the wrist/elbow/shoulder positions are derived from
the racket path and the direction vectors, so the whole chain translates
rigidly while the racket is fast.  The resulting body sway is unphysical
but irrelevant: every tracked variable matches its ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import GuidanceConfig
from .errors import ParameterError
from .feedback import ready_targets
from .mocap import Handedness, MarkerFrame, Recording, relabel

DOWN = np.array([0.0, -1.0, 0.0])
UP = np.array([0.0, 1.0, 0.0])

# skeleton template
SHOULDER_HALF_SPAN = 0.18
SHOULDER_HEIGHT = 1.42
L_UPPER = 0.30
R_TIP = 0.35            # wrist to racket-top distance (choked short-serve grip)
GRIP_OFFSET = 0.02      # wrist to bottom marker
HAND_OFFSET = 0.06      # wrist to FIN marker, along the shaft
HEAD_OFFSET = 0.12      # top marker to head-center marker
HEAD_RADIUS = 0.10      # head center to side marker
WRIST_GAP = 0.025       # WRA/WRB half separation
READY_PITCH_DEG = 10.0
LINE_X_TILT = 0.12      # lateral component of the strike line
RACKET_DESCENT = 0.35   # m, idle offset above the ready position
HAND_DESCENT = 0.25
GLIDE_START = 0.06      # last, slow stretch of the approach
M_PRE = 4               # constant-velocity frames before/after contact
M_POST = 4


@dataclass
class SynthesisParams:
    """Per-serve ground truth plus phase timing."""

    contact_speed_mps: float = 5.41
    contact_pitch_deg: float = 21.60
    height_diff_m: float = 0.11
    wrist_change_deg: float = 9.96
    elbow_change_deg: float = 4.97
    shoulder_change_deg: float = 1.48
    backswing_amplitude_deg: float = 16.0
    forward_swing_duration_s: float = 0.1333
    rate_hz: float = 120.0
    handedness: Handedness = Handedness.RIGHT

    approach_s: float = 0.45
    glide_s: float = 0.40
    hold_s: float = 0.40
    back_horizontal_s: float = 0.0667
    back_curve_s: float = 0.3333
    back_hold_s: float = 0.0333
    follow_decel_s: float = 0.12
    post_hold_s: float = 2.3
    return_s: float = 0.40

    jitter_cycles: int = 0          # sine cycles injected into the wrist ramp
    jitter_amp_deg: float = 0.0
    dropout_frames: int = 0         # mid-forward-swing tracking loss


@dataclass(frozen=True)
class ServeTruth:
    """What the pipeline should recover for one synthesized serve."""

    pitch_deg: float
    height_diff_m: float
    speed_mps: float
    wrist_change_deg: float
    elbow_change_deg: float
    shoulder_change_deg: float
    k_back: int
    k_fwd: int
    k_contact: int
    backswing_end_angle_deg: float
    jitter: bool = False
    dropout: bool = False

    def to_dict(self) -> dict:
        return {
            "pitch_deg": self.pitch_deg,
            "height_diff_m": self.height_diff_m,
            "speed_mps": self.speed_mps,
            "wrist_change_deg": self.wrist_change_deg,
            "elbow_change_deg": self.elbow_change_deg,
            "shoulder_change_deg": self.shoulder_change_deg,
            "k_back": self.k_back,
            "k_fwd": self.k_fwd,
            "k_contact": self.k_contact,
            "backswing_end_angle_deg": self.backswing_end_angle_deg,
            "jitter": self.jitter,
            "dropout": self.dropout,
        }


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    if n < 1e-12:
        raise ParameterError("degenerate direction in synthesis template")
    return v / n


def _rot(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    x, y, z = axis
    k = np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def _smoothstep(tau: float) -> float:
    tau = min(max(tau, 0.0), 1.0)
    return tau * tau * (3.0 - 2.0 * tau)


def _pitch_solve(m: np.ndarray, pitch_rad: float, prefer: np.ndarray | None = None) -> np.ndarray:
    """Unit normal perpendicular to the shaft with the requested pitch."""
    c1 = UP - m[1] * m
    c1_norm = np.linalg.norm(c1)
    if c1_norm < 1e-9:
        raise ParameterError("racket shaft vertical; pitch unconstrained")
    c1 = c1 / c1_norm
    c1_y = c1[1]
    alpha = math.sin(pitch_rad) / c1_y
    if abs(alpha) > 1.0:
        raise ParameterError(
            f"pitch {math.degrees(pitch_rad):.1f} deg unreachable for this racket attitude"
        )
    beta = math.sqrt(1.0 - alpha * alpha)
    c2 = np.cross(m, c1)
    n_plus = alpha * c1 + beta * c2
    if prefer is None:
        return n_plus
    n_minus = alpha * c1 - beta * c2
    return n_plus if np.dot(n_plus, prefer) >= np.dot(n_minus, prefer) else n_minus


@dataclass(frozen=True)
class _Template:
    mu: float
    s_dom: np.ndarray
    nd_offset: np.ndarray
    u0: np.ndarray
    f0: np.ndarray
    m0: np.ndarray
    n0: np.ndarray
    l_forearm: float
    shuttle_t: np.ndarray
    racket_t: np.ndarray
    handedness: Handedness
    guidance: GuidanceConfig


def _build_template(handedness: Handedness, guidance: GuidanceConfig) -> _Template:
    mu = 1.0 if Handedness(handedness) is Handedness.RIGHT else -1.0
    s_dom = np.array([mu * SHOULDER_HALF_SPAN, SHOULDER_HEIGHT, 0.0])
    nd_offset = np.array([-2.0 * mu * SHOULDER_HALF_SPAN, 0.0, 0.0])
    u0 = _unit(np.array([mu * 0.05, -0.85, 0.52]))
    m0 = _unit(np.array([mu * 0.5, -0.5, 0.707]))
    elbow0 = s_dom + L_UPPER * u0

    # Fixed point: the forward offset of the targets depends on the arm
    # chain length, which depends on where the racket target puts the wrist.
    fwd = 0.2
    for _ in range(80):
        racket_t = np.array([s_dom[0] + mu * guidance.racket_gap, guidance.shuttle_height, s_dom[2] + fwd])
        wrist0 = racket_t - R_TIP * m0
        l_forearm = float(np.linalg.norm(wrist0 - elbow0))
        fwd_next = guidance.forward_fraction * (L_UPPER + l_forearm)
        if abs(fwd_next - fwd) < 1e-14:
            fwd = fwd_next
            break
        fwd = fwd_next
    racket_t = np.array([s_dom[0] + mu * guidance.racket_gap, guidance.shuttle_height, s_dom[2] + fwd])
    shuttle_t = np.array([s_dom[0], guidance.shuttle_height, s_dom[2] + fwd])
    wrist0 = racket_t - R_TIP * m0
    l_forearm = float(np.linalg.norm(wrist0 - elbow0))
    f0 = _unit(wrist0 - elbow0)
    n0 = _pitch_solve(m0, math.radians(READY_PITCH_DEG))
    return _Template(
        mu=mu, s_dom=s_dom, nd_offset=nd_offset, u0=u0, f0=f0, m0=m0, n0=n0,
        l_forearm=l_forearm, shuttle_t=shuttle_t, racket_t=racket_t,
        handedness=Handedness(handedness), guidance=guidance,
    )


def _pose(tpl: _Template, pitch_c: float, b_sigma: float, b_eps: float, b_omega: float,
          lam_pitch: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Direction vectors (u, f, m, n) for the given ramp angles.

    Shoulder/elbow ramps rigidly rotate everything distal to them so each
    joint-angle series moves only inside its own ramp; the wrist ramp
    closes the racket toward the forearm; the pitch stage rolls the head
    about the shaft toward the serve's contact pitch.
    """
    u, f, m, n = tpl.u0, tpl.f0, tpl.m0, tpl.n0
    if b_sigma != 0.0:
        r1 = _rot(_unit(np.cross(DOWN, u)), b_sigma)
        u, f, m, n = r1 @ u, r1 @ f, r1 @ m, r1 @ n
    if b_eps != 0.0:
        r2 = _rot(_unit(np.cross(-u, f)), b_eps)
        f, m, n = r2 @ f, r2 @ m, r2 @ n
    if b_omega != 0.0:
        r3 = _rot(_unit(np.cross(f, m)), -b_omega)
        m, n = r3 @ m, r3 @ n
    if lam_pitch != 0.0:
        n_target = _pitch_solve(m, pitch_c, prefer=n)
        psi = math.atan2(float(np.dot(m, np.cross(n, n_target))), float(np.dot(n, n_target)))
        n = _rot(m, lam_pitch * psi) @ n
    return u, f, m, n


@dataclass
class _State:
    p_top: np.ndarray
    u: np.ndarray
    f: np.ndarray
    m: np.ndarray
    n: np.ndarray
    sh: np.ndarray  # shuttle hand


def _markers(tpl: _Template, st: _State) -> dict[str, np.ndarray]:
    dom = "R" if tpl.handedness is Handedness.RIGHT else "L"
    other = "L" if dom == "R" else "R"
    s_hat = np.cross(st.n, st.m)
    wrist = st.p_top - R_TIP * st.m
    elbow = wrist - tpl.l_forearm * st.f
    shoulder = elbow - L_UPPER * st.u
    nd_shoulder = shoulder + tpl.nd_offset
    head_center = wrist + (R_TIP - HEAD_OFFSET) * st.m
    mu = tpl.mu
    return {
        dom + "SHO": shoulder,
        dom + "ELB": elbow,
        dom + "WRA": wrist + WRIST_GAP * st.n,
        dom + "WRB": wrist - WRIST_GAP * st.n,
        dom + "FIN": wrist + HAND_OFFSET * st.m,
        other + "SHO": nd_shoulder,
        other + "ELB": nd_shoulder + np.array([0.0, -L_UPPER, 0.0]),
        other + "WRA": st.sh + np.array([-mu * 0.02, 0.03, -0.06]) + np.array([mu * 0.02, 0.0, 0.0]),
        other + "WRB": st.sh + np.array([-mu * 0.02, 0.03, -0.06]) - np.array([mu * 0.02, 0.0, 0.0]),
        other + "FIN": st.sh,
        "RKTT": st.p_top,
        "RKTB": wrist + GRIP_OFFSET * st.m,
        "RKTM": head_center,
        "RKTS": head_center + HEAD_RADIUS * s_hat,
    }


@dataclass
class _ServeGeometry:
    e: np.ndarray           # strike-line direction (unit)
    d_back: np.ndarray      # horizontal pull-back direction (unit)
    q1: float               # horizontal pull-back travel
    s_back: float           # strike-line coordinate of the backswing apex
    s_star: float           # strike-line coordinate of closest approach
    ds_acc: float
    n1: int                 # acceleration frames
    t1: float
    pitch_c: float
    d_sigma: float
    d_eps: float
    d_omega: float


def _serve_geometry(tpl: _Template, p: SynthesisParams) -> _ServeGeometry:
    dt = 1.0 / p.rate_hz
    v_c = p.contact_speed_mps
    n1 = int(round(p.forward_swing_duration_s * p.rate_hz)) - M_PRE
    if n1 < 6:
        raise ParameterError("forward_swing_duration_s too short for the sample rate")
    t1 = n1 * dt
    ds_acc = v_c * t1 / 2.0
    s_star = tpl.guidance.racket_gap * LINE_X_TILT
    amplitude = ds_acc + M_PRE * v_c * dt - s_star
    if amplitude <= 0.05:
        raise ParameterError(f"contact speed {v_c} m/s leaves no room for a backswing")
    eff_amp = amplitude - ds_acc / (n1 * n1)  # |s| at the first forward frame
    e_x = -tpl.mu * LINE_X_TILT
    e_y = p.height_diff_m / eff_amp
    if e_x * e_x + e_y * e_y > 0.9:
        raise ParameterError(
            f"height_diff_m {p.height_diff_m} too large for this speed/backswing"
        )
    e = np.array([e_x, e_y, math.sqrt(1.0 - e_x * e_x - e_y * e_y)])
    d_back = -_unit(np.array([e_x, 0.0, e[2]]))
    q1 = math.radians(p.backswing_amplitude_deg) * R_TIP
    if q1 < 0.03:
        raise ParameterError("backswing_amplitude_deg too small to trigger the swing")
    geom = _ServeGeometry(
        e=e, d_back=d_back, q1=q1, s_back=-amplitude, s_star=s_star,
        ds_acc=ds_acc, n1=n1, t1=t1,
        pitch_c=math.radians(p.contact_pitch_deg),
        d_sigma=math.radians(p.shoulder_change_deg),
        d_eps=math.radians(p.elbow_change_deg),
        d_omega=math.radians(p.wrist_change_deg),
    )
    # contact-pitch feasibility at the post-ramp attitude
    _, _, m_c, _ = _pose(tpl, geom.pitch_c, geom.d_sigma, geom.d_eps, geom.d_omega, 0.0)
    if abs(math.sin(geom.pitch_c)) > 0.995 * math.sqrt(max(1.0 - m_c[1] ** 2, 0.0)):
        raise ParameterError("contact pitch unreachable after the joint ramps")
    return geom


def _validate(p: SynthesisParams) -> None:
    if p.rate_hz <= 0:
        raise ParameterError(f"rate_hz must be positive, got {p.rate_hz}")
    for name in ("approach_s", "glide_s", "hold_s", "back_horizontal_s", "back_curve_s",
                 "back_hold_s", "follow_decel_s", "post_hold_s", "return_s",
                 "forward_swing_duration_s"):
        if getattr(p, name) <= 0:
            raise ParameterError(f"{name} must be positive")
    for name in ("height_diff_m", "wrist_change_deg", "elbow_change_deg",
                 "shoulder_change_deg", "jitter_amp_deg"):
        if getattr(p, name) < 0:
            raise ParameterError(f"{name} must be non-negative")
    if p.contact_speed_mps < 0:
        raise ParameterError("contact_speed_mps must be non-negative")
    if 0 < p.contact_speed_mps < 0.5:
        raise ParameterError("contact_speed_mps below 0.5 m/s is not a serve")


class _Builder:
    """Accumulates frames over the session time grid."""

    def __init__(self, tpl: _Template, rate_hz: float):
        self.tpl = tpl
        self.dt = 1.0 / rate_hz
        self.frames: list[MarkerFrame] = []
        self.invalid: dict[int, list[str]] = {}

    @property
    def cursor(self) -> int:
        return len(self.frames)

    def push(self, st: _State) -> None:
        t = self.cursor * self.dt
        markers = _markers(self.tpl, st)
        validity = {lab: True for lab in markers}
        self.frames.append(MarkerFrame(t=t, markers=markers, validity=validity))

    def drop_markers(self, index: int, labels: list[str]) -> None:
        frame = self.frames[index]
        for lab in labels:
            frame.validity[lab] = False
            frame.markers[lab] = np.full(3, np.nan)


def _n_frames(duration: float, rate: float, minimum: int) -> int:
    return max(minimum, int(round(duration * rate)))


def _emit_serve(b: _Builder, p: SynthesisParams, first_serve: bool) -> ServeTruth:
    tpl = b.tpl
    geom = _serve_geometry(tpl, p)
    dt = b.dt
    rate = p.rate_hz
    ready = _State(
        p_top=tpl.racket_t.copy(),
        u=tpl.u0, f=tpl.f0, m=tpl.m0, n=tpl.n0,
        sh=tpl.shuttle_t.copy(),
    )

    hand_start = HAND_DESCENT if first_serve else 0.0

    def descent_state(offset: float) -> _State:
        return _State(
            p_top=tpl.racket_t + offset * UP,
            u=tpl.u0, f=tpl.f0, m=tpl.m0, n=tpl.n0,
            sh=tpl.shuttle_t + (offset * hand_start / RACKET_DESCENT) * UP,
        )

    # 1-2: approach then slow glide into the ready position
    n = _n_frames(p.approach_s, rate, 2)
    for i in range(1, n + 1):
        off = RACKET_DESCENT + (GLIDE_START - RACKET_DESCENT) * _smoothstep(i / n)
        b.push(descent_state(off))
    n = _n_frames(p.glide_s, rate, 4)
    for i in range(1, n + 1):
        b.push(descent_state(GLIDE_START * (1.0 - _smoothstep(i / n))))

    # 3: hold at ready
    for _ in range(_n_frames(p.hold_s, rate, 4)):
        b.push(ready)

    # 4: horizontal pull-back; all angles frozen, height exactly constant
    k_back = b.cursor
    n_b1 = _n_frames(p.back_horizontal_s, rate, 4)
    b1_end = tpl.racket_t + geom.q1 * geom.d_back
    for i in range(1, n_b1 + 1):
        st = _State(
            p_top=tpl.racket_t + geom.q1 * _smoothstep(i / n_b1) * geom.d_back,
            u=tpl.u0, f=tpl.f0, m=tpl.m0, n=tpl.n0, sh=ready.sh,
        )
        b.push(st)

    # 5: curve to the backswing apex with sequential joint ramps
    n_b2 = _n_frames(p.back_curve_s, rate, 15)
    apex = tpl.racket_t + geom.s_back * geom.e
    lead = 3
    win = (n_b2 - lead) // 4
    bounds = [(lead + k * win, lead + (k + 1) * win if k < 3 else n_b2) for k in range(4)]

    def lam(i: int, k: int) -> float:
        a, bnd = bounds[k]
        if bnd == a:
            return 1.0 if i >= bnd else 0.0
        return _smoothstep((i - a) / (bnd - a))

    jitter_amp = math.radians(p.jitter_amp_deg)
    for i in range(1, n_b2 + 1):
        b_omega = geom.d_omega * lam(i, 2)
        if p.jitter_cycles > 0 and jitter_amp > 0:
            # oscillation across the whole curve phase; zero at the endpoints
            b_omega += jitter_amp * math.sin(2.0 * math.pi * p.jitter_cycles * i / n_b2)
        u, f, m, nrm = _pose(tpl, geom.pitch_c, geom.d_sigma * lam(i, 0),
                             geom.d_eps * lam(i, 1), b_omega, lam(i, 3))
        st = _State(
            p_top=b1_end + (apex - b1_end) * _smoothstep(i / n_b2),
            u=u, f=f, m=m, n=nrm, sh=ready.sh,
        )
        b.push(st)

    u_c, f_c, m_c, n_c = _pose(tpl, geom.pitch_c, geom.d_sigma, geom.d_eps, geom.d_omega, 1.0)
    apex_state = _State(p_top=apex, u=u_c, f=f_c, m=m_c, n=n_c, sh=ready.sh)

    # 6: pause at the apex so the forward trend starts from rest
    for _ in range(_n_frames(p.back_hold_s, rate, 2)):
        b.push(apex_state)

    # 7: acceleration along the strike line, quadratic so the first frame moves
    k_fwd = b.cursor
    backswing_end_angle = float("nan")
    for i in range(1, geom.n1 + 1):
        s = geom.s_back + geom.ds_acc * (i / geom.n1) ** 2
        st = _State(p_top=tpl.racket_t + s * geom.e, u=u_c, f=f_c, m=m_c, n=n_c, sh=ready.sh)
        if i == 1:
            wrist = st.p_top - R_TIP * st.m
            v1 = st.p_top - wrist
            v2 = st.sh - wrist
            cosang = np.dot(v1, v2) / (np.linalg.norm(v1) * np.linalg.norm(v2))
            backswing_end_angle = math.degrees(math.acos(float(np.clip(cosang, -1.0, 1.0))))
        b.push(st)

    # 8: constant-velocity window through contact
    k_contact = b.cursor + M_PRE - 1
    s_lin = geom.s_back + geom.ds_acc
    v_c = p.contact_speed_mps
    for i in range(1, M_PRE + M_POST + 1):
        s = s_lin + v_c * i * dt
        b.push(_State(p_top=tpl.racket_t + s * geom.e, u=u_c, f=f_c, m=m_c, n=n_c, sh=ready.sh))

    # 9: decelerate to rest (follow-through)
    n3 = _n_frames(p.follow_decel_s, rate, 4)
    t2 = n3 * dt
    s_f2 = s_lin + v_c * (M_PRE + M_POST) * dt
    for i in range(1, n3 + 1):
        tau = i / n3
        s = s_f2 + (v_c * t2 / 2.0) * (2.0 * tau - tau * tau)
        b.push(_State(p_top=tpl.racket_t + s * geom.e, u=u_c, f=f_c, m=m_c, n=n_c, sh=ready.sh))
    follow_state = _State(
        p_top=tpl.racket_t + (s_f2 + v_c * t2 / 2.0) * geom.e,
        u=u_c, f=f_c, m=m_c, n=n_c, sh=ready.sh,
    )

    # 10: rest through the contact dwell
    for _ in range(_n_frames(p.post_hold_s, rate, 2)):
        b.push(follow_state)

    if p.dropout_frames > 0:
        mid = k_fwd + geom.n1 // 2
        for k in range(mid, min(mid + p.dropout_frames, k_contact - 1)):
            b.drop_markers(k, ["RKTT"])

    # sanity: the distance signal must be strictly monotone around contact
    sh = ready.sh
    dists = [float(np.linalg.norm(f.markers["RKTT"] - sh)) for f in b.frames[k_back:k_contact + M_POST + 1]]
    diffs = np.diff(dists)
    n_swing_back = k_fwd - k_back
    if p.dropout_frames == 0:
        back_ok = np.all(diffs[:n_swing_back - 1] > 0) or p.back_hold_s > 0
        fwd = diffs[n_swing_back:]
        rel_contact = k_contact - k_fwd
        if not (np.all(fwd[:rel_contact] < 0) and np.all(fwd[rel_contact:] > 0) and back_ok):
            raise ParameterError("internal: distance signal not monotone; adjust parameters")

    return ServeTruth(
        pitch_deg=p.contact_pitch_deg,
        height_diff_m=p.height_diff_m,
        speed_mps=p.contact_speed_mps,
        wrist_change_deg=p.wrist_change_deg,
        elbow_change_deg=p.elbow_change_deg,
        shoulder_change_deg=p.shoulder_change_deg,
        k_back=k_back, k_fwd=k_fwd, k_contact=k_contact,
        backswing_end_angle_deg=backswing_end_angle,
        jitter=p.jitter_cycles > 0 and p.jitter_amp_deg > 0,
        dropout=p.dropout_frames > 0,
    )


def _emit_return(b: _Builder, p: SynthesisParams, geom_pitch_c: float,
                 d_sigma: float, d_eps: float, d_omega: float,
                 follow_top: np.ndarray) -> None:
    """Bring the racket back above the ready position, unwinding the ramps."""
    tpl = b.tpl
    target = tpl.racket_t + RACKET_DESCENT * UP
    n = _n_frames(p.return_s, p.rate_hz, 6)
    for i in range(1, n + 1):
        lam = 1.0 - _smoothstep(i / n)
        u, f, m, nrm = _pose(tpl, geom_pitch_c, d_sigma * lam, d_eps * lam, d_omega * lam, lam)
        p_top = follow_top + (target - follow_top) * _smoothstep(i / n)
        b.push(_State(p_top=p_top, u=u, f=f, m=m, n=nrm, sh=tpl.shuttle_t.copy()))


def _stationary_recording(p: SynthesisParams, guidance: GuidanceConfig) -> Recording:
    tpl = _build_template(p.handedness, guidance)
    b = _Builder(tpl, p.rate_hz)
    ready = _State(p_top=tpl.racket_t.copy(), u=tpl.u0, f=tpl.f0, m=tpl.m0, n=tpl.n0,
                   sh=tpl.shuttle_t.copy())
    for _ in range(_n_frames(p.hold_s + p.approach_s, p.rate_hz, 4)):
        b.push(ready)
    return Recording(frames=b.frames, rate_hz=p.rate_hz, handedness=Handedness(p.handedness),
                     metadata={"synthesis": {"serves": []}})


def synthesize_session(
    params_list: list[SynthesisParams],
    guidance: GuidanceConfig | None = None,
) -> Recording:
    """Build one recording containing the given serves back to back."""
    if not params_list:
        raise ParameterError("need at least one serve")
    guidance = guidance or GuidanceConfig()
    first = params_list[0]
    for p in params_list:
        _validate(p)
        if p.rate_hz != first.rate_hz or Handedness(p.handedness) is not Handedness(first.handedness):
            raise ParameterError("all serves in a session must share rate and handedness")
    if any(p.contact_speed_mps == 0 for p in params_list):
        if len(params_list) > 1:
            raise ParameterError("a zero-speed (stationary) recording holds exactly one entry")
        return _stationary_recording(first, guidance)

    tpl = _build_template(first.handedness, guidance)
    _check_template_targets(tpl, guidance)
    b = _Builder(tpl, first.rate_hz)
    truths: list[ServeTruth] = []
    for idx, p in enumerate(params_list):
        truth = _emit_serve(b, p, first_serve=(idx == 0))
        truths.append(truth)
        if idx < len(params_list) - 1:
            geom = _serve_geometry(tpl, p)
            follow_top = b.frames[-1].markers["RKTT"].copy()
            _emit_return(b, p, geom.pitch_c, geom.d_sigma, geom.d_eps, geom.d_omega, follow_top)
    return Recording(
        frames=b.frames,
        rate_hz=first.rate_hz,
        handedness=Handedness(first.handedness),
        metadata={"synthesis": {"serves": [t.to_dict() for t in truths]}},
    )


def synthesize_service(params: SynthesisParams, guidance: GuidanceConfig | None = None) -> Recording:
    """One analytically constructed serve with its ground truth in metadata."""
    return synthesize_session([params], guidance=guidance)


def _check_template_targets(tpl: _Template, guidance: GuidanceConfig) -> None:
    """The constructed ready pose must sit exactly on the guidance targets."""
    ready = _State(p_top=tpl.racket_t.copy(), u=tpl.u0, f=tpl.f0, m=tpl.m0, n=tpl.n0,
                   sh=tpl.shuttle_t.copy())
    frame = MarkerFrame(t=0.0, markers=_markers(tpl, ready),
                        validity={k: True for k in _markers(tpl, ready)})
    targets = ready_targets(relabel(frame, tpl.handedness), guidance)
    if (np.linalg.norm(targets.shuttle_target - tpl.shuttle_t) > 1e-9
            or np.linalg.norm(targets.racket_target - tpl.racket_t) > 1e-9):
        raise ParameterError("internal: synthesized ready pose misses the guidance targets")


def random_params(rng: np.random.Generator, **overrides) -> SynthesisParams:
    """Random serve parameters drawn from comfortably feasible ranges."""
    p = SynthesisParams(
        contact_speed_mps=float(rng.uniform(4.9, 6.3)),
        contact_pitch_deg=float(rng.uniform(5.0, 40.0)),
        height_diff_m=float(rng.uniform(0.02, 0.28)),
        wrist_change_deg=float(rng.uniform(4.0, 18.0)),
        elbow_change_deg=float(rng.uniform(1.0, 15.0)),
        shoulder_change_deg=float(rng.uniform(0.3, 3.5)),
        backswing_amplitude_deg=float(rng.uniform(12.0, 25.0)),
        forward_swing_duration_s=float(rng.uniform(0.11, 0.16)),
    )
    for key, value in overrides.items():
        setattr(p, key, value)
    return p


def synthesize_abort_script(
    rate_hz: float = 120.0,
    handedness: Handedness = Handedness.RIGHT,
    guidance: GuidanceConfig | None = None,
) -> Recording:
    """Ready pose followed by a fast forward push: the state machine must
    reach Ready and then abort back to Idle without starting a serve."""
    guidance = guidance or GuidanceConfig()
    tpl = _build_template(handedness, guidance)
    b = _Builder(tpl, rate_hz)
    p = SynthesisParams(rate_hz=rate_hz, handedness=handedness)

    def descent_state(offset: float) -> _State:
        return _State(p_top=tpl.racket_t + offset * UP, u=tpl.u0, f=tpl.f0, m=tpl.m0,
                      n=tpl.n0, sh=tpl.shuttle_t + (offset * HAND_DESCENT / RACKET_DESCENT) * UP)

    n = _n_frames(p.approach_s, rate_hz, 2)
    for i in range(1, n + 1):
        b.push(descent_state(RACKET_DESCENT + (GLIDE_START - RACKET_DESCENT) * _smoothstep(i / n)))
    n = _n_frames(p.glide_s, rate_hz, 4)
    for i in range(1, n + 1):
        b.push(descent_state(GLIDE_START * (1.0 - _smoothstep(i / n))))
    for _ in range(_n_frames(p.hold_s, rate_hz, 4)):
        b.push(descent_state(0.0))
    # forward push at 2.5 m/s: fast enough that the abort fires outside the
    # ready tolerance, so Ready is not immediately re-entered
    forward = np.array([0.0, 0.0, 1.0])
    n = _n_frames(0.25, rate_hz, 6)
    for i in range(1, n + 1):
        st = descent_state(0.0)
        st.p_top = tpl.racket_t + 2.5 * (i / rate_hz) * forward
        b.push(st)
    return Recording(frames=b.frames, rate_hz=rate_hz, handedness=Handedness(handedness),
                     metadata={"synthesis": {"script": "ready_then_forward"}})
