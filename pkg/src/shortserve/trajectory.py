"""Shuttlecock trajectory classification for test sessions.

Observations arrive pre-extracted from video (landing point, apex
position along the serve direction, clearance over the net indicator);
this module only classifies them.  The court origin sits at the
net/center-line intersection with z pointing into the receiving court.
"""

from __future__ import annotations

import enum
import io
from dataclasses import dataclass

from .config import CourtConfig
from .errors import ParameterError, ParseError


class LandingClass(str, enum.Enum):
    GOOD = "good"   # inside the 40 cm scoring square
    IN = "in"       # elsewhere in the valid service court
    OUT = "out"


class ApexClass(str, enum.Enum):
    GOOD = "good"   # apex strictly between server and net
    BAD = "bad"


@dataclass(frozen=True)
class TrajectoryObservation:
    landing_x: float
    landing_z: float
    apex_z: float
    clearance_m: float
    server_z: float


def classify_landing(point, geometry: CourtConfig | None = None) -> LandingClass:
    """Good inside the scoring square, In elsewhere in the service court, else Out.

    The square and the court are closed sets; the square is cornered at
    the center-line / short-service-line intersection.
    """
    g = geometry or CourtConfig()
    x, z = float(point[0]), float(point[1])
    lo_x, hi_x = sorted((g.center_x, g.side_x))
    in_court = lo_x <= x <= hi_x and g.short_service_line_z <= z <= g.court_back_z
    if not in_court:
        return LandingClass.OUT
    square_hi_x = g.center_x + g.target_square_m if g.side_x > g.center_x else g.center_x - g.target_square_m
    sq_lo_x, sq_hi_x = sorted((g.center_x, square_hi_x))
    in_square = (
        sq_lo_x <= x <= sq_hi_x
        and g.short_service_line_z <= z <= g.short_service_line_z + g.target_square_m
    )
    return LandingClass.GOOD if in_square else LandingClass.IN


def classify_apex(apex_z: float, net_z: float, server_z: float) -> ApexClass:
    """Good when the apex lies strictly between server and net; the net
    plane itself is Bad."""
    if server_z == net_z:
        raise ParameterError("server and net positions coincide")
    lo, hi = sorted((server_z, net_z))
    return ApexClass.GOOD if lo < apex_z < hi else ApexClass.BAD


def quantize_clearance(h: float, stripe_width: float = 0.02) -> int:
    """Stripe index of a clearance height; a shot below the tape never cleared."""
    if h < 0:
        raise ParameterError(f"clearance {h} m is negative: shot failed to pass the net")
    if stripe_width <= 0:
        raise ParameterError("stripe width must be positive")
    return int(h // stripe_width)


def clearance_error_bound(h_observed: float, d_shuttle_to_board: float, d_camera_to_board: float) -> float:
    """Maximum parallax error of a stripe reading, by similar triangles."""
    if not (0 <= d_shuttle_to_board < d_camera_to_board):
        raise ParameterError(
            f"need 0 <= shuttle-board ({d_shuttle_to_board}) < camera-board ({d_camera_to_board})"
        )
    return h_observed * d_shuttle_to_board / d_camera_to_board


INPUT_COLUMNS = ("landing_x", "landing_z", "apex_z", "clearance_m")
OUTPUT_COLUMNS = INPUT_COLUMNS + ("landing_class", "apex_class", "stripe", "err_bound")


def read_observations(text: str, geometry: CourtConfig | None = None) -> list[TrajectoryObservation]:
    """Parse the observation CSV: landing_x,landing_z,apex_z,clearance_m."""
    g = geometry or CourtConfig()
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        return []
    header = [h.strip() for h in lines[0].split(",")]
    if header != list(INPUT_COLUMNS):
        raise ParseError(f"line 1: expected header {','.join(INPUT_COLUMNS)}")
    out = []
    for line_no, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != 4:
            raise ParseError(f"line {line_no}: expected 4 cells, got {len(cells)}")
        try:
            vals = [float(c) for c in cells]
        except ValueError as exc:
            raise ParseError(f"line {line_no}: bad number") from exc
        out.append(TrajectoryObservation(*vals, server_z=g.server_z))
    return out


def classify_observations(observations, geometry: CourtConfig | None = None) -> str:
    """Annotated CSV: input columns plus landing/apex classes, stripe, error bound.

    Shots with negative clearance (did not pass) get empty stripe and
    error-bound cells.
    """
    g = geometry or CourtConfig()
    out = io.StringIO()
    out.write(",".join(OUTPUT_COLUMNS) + "\n")
    for obs in observations:
        landing = classify_landing((obs.landing_x, obs.landing_z), g)
        apex = classify_apex(obs.apex_z, g.net_z, obs.server_z)
        if obs.clearance_m >= 0:
            stripe = str(quantize_clearance(obs.clearance_m, g.stripe_width_m))
            bound = repr(clearance_error_bound(obs.clearance_m, g.shuttle_to_board_m, g.camera_to_board_m))
        else:
            stripe = ""
            bound = ""
        out.write(",".join([
            repr(obs.landing_x), repr(obs.landing_z), repr(obs.apex_z), repr(obs.clearance_m),
            landing.value, apex.value, stripe, bound,
        ]) + "\n")
    return out.getvalue()
