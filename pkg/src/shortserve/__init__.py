"""shortserve: a self-training engine for the badminton backhand short service."""

from .config import EngineConfig, load_config
from .expert import ExpertModel, Pattern, builtin_model, fit_model
from .fsm import ServiceState, ServiceTracker, segment_recording
from .kinetics import Keyframes, KineticSample, ServiceSummary
from .mocap import (
    Handedness,
    MarkerFrame,
    Recording,
    RecordingFormat,
    SkeletonFrame,
    load_recording,
    parse_recording,
    relabel,
    replay,
)
from .stream import run_session
from .synth import SynthesisParams, synthesize_service, synthesize_session

__version__ = "0.1.0"

__all__ = [
    "EngineConfig", "load_config",
    "ExpertModel", "Pattern", "builtin_model", "fit_model",
    "ServiceState", "ServiceTracker", "segment_recording",
    "Keyframes", "KineticSample", "ServiceSummary",
    "Handedness", "MarkerFrame", "Recording", "RecordingFormat", "SkeletonFrame",
    "load_recording", "parse_recording", "relabel", "replay",
    "run_session",
    "SynthesisParams", "synthesize_service", "synthesize_session",
    "__version__",
]
