"""Engine configuration: defaults, file loading, and CLI overrides.

All values live in one JSON document so a whole setup can be shipped as a
single file and any single value can be overridden from the command line
with ``--set section.key=value``.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field

from .errors import ParameterError

CONFIG_ENV_VAR = "BMS_CONFIG"


@dataclass
class GuidanceConfig:
    """Ready-position and swing-track guidance geometry.

    The shuttle target height keeps the whole shuttle under the 1.15 m
    legal contact limit.
    """

    shuttle_height: float = 1.05        # m, constant target height
    forward_fraction: float = 0.35      # of arm chain length, along sagittal axis
    racket_gap: float = 0.12            # m, racket target offset toward dominant side
    halo_green: float = 0.03            # m, sagittal distance for a green halo
    halo_yellow: float = 0.08           # m, green..yellow band edge
    sweep_back: float = 0.35            # rad, swing-track backward sweep
    sweep_forward: float = 0.45         # rad, swing-track forward sweep


@dataclass
class FsmConfig:
    """Service state machine thresholds."""

    ready_tolerance: float = 0.05       # m, Euclidean, per target
    v_min: float = 0.3                  # m/s, motion threshold
    sustain_frames: int = 3             # consecutive frames above v_min
    trend_frames: int = 3               # consecutive strict distance changes
    dwell_s: float = 2.0                # contact -> idle delay
    contact_window: int = 5             # frames kept past contact in a record


@dataclass
class JitterConfig:
    """Turning-point thresholds for jitter labeling."""

    joint_max_extrema: int = 3          # wrist/elbow/shoulder/height, whole swing
    racket_max_extrema: int = 2         # pitch/speed, forward swing only
    smooth_window: int = 3              # moving-average width before counting


@dataclass
class SessionConfig:
    """Session-level aggregation."""

    first_n_valid: int = 12             # trials per session entering the stats


@dataclass
class CourtConfig:
    """Court geometry for trajectory classification (BWF doubles right
    service court). The side extent of the valid region is an assumption;
    the rules only fix the marked lines.
    """

    net_z: float = 0.0                  # m, net plane; origin at net/center intersection
    short_service_line_z: float = 1.98  # m from net
    court_back_z: float = 5.94          # m, doubles long service line
    center_x: float = 0.0               # m, center line
    side_x: float = 3.05                # m, doubles side line
    target_square_m: float = 0.40       # m, scoring square side
    server_z: float = -2.0              # m, where the server stands
    stripe_width_m: float = 0.02        # m, clearance stripe quantum
    shuttle_to_board_m: float = 0.5     # m, camera parallax geometry
    camera_to_board_m: float = 3.0      # m


@dataclass
class EngineConfig:
    """Top-level configuration; sections mirror the engine's subsystems."""

    guidance: GuidanceConfig = field(default_factory=GuidanceConfig)
    fsm: FsmConfig = field(default_factory=FsmConfig)
    jitter: JitterConfig = field(default_factory=JitterConfig)
    session: SessionConfig = field(default_factory=SessionConfig)
    court: CourtConfig = field(default_factory=CourtConfig)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "EngineConfig":
        cfg = cls()
        for section, values in data.items():
            if not hasattr(cfg, section):
                raise ParameterError(f"unknown config section: {section!r}")
            target = getattr(cfg, section)
            for key, value in values.items():
                if not hasattr(target, key):
                    raise ParameterError(f"unknown config key: {section}.{key}")
                setattr(target, key, type(getattr(target, key))(value))
        return cfg


def load_config(path: str | None = None) -> EngineConfig:
    """Load configuration from ``path``, the BMS_CONFIG env var, or defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return EngineConfig()
    with open(path, "r", encoding="utf-8") as fh:
        return EngineConfig.from_dict(json.load(fh))


def save_config(cfg: EngineConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(cfg.to_dict(), fh, indent=2)
        fh.write("\n")


def apply_overrides(cfg: EngineConfig, overrides: list[str]) -> EngineConfig:
    """Apply ``section.key=value`` strings on top of an existing config."""
    for item in overrides:
        if "=" not in item or "." not in item.split("=", 1)[0]:
            raise ParameterError(f"override must look like section.key=value: {item!r}")
        dotted, raw = item.split("=", 1)
        section, key = dotted.split(".", 1)
        if not hasattr(cfg, section):
            raise ParameterError(f"unknown config section: {section!r}")
        target = getattr(cfg, section)
        if not hasattr(target, key):
            raise ParameterError(f"unknown config key: {dotted!r}")
        current = getattr(target, key)
        try:
            setattr(target, key, type(current)(raw))
        except ValueError as exc:
            raise ParameterError(f"bad value for {dotted}: {raw!r}") from exc
    return cfg
