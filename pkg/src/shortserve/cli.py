"""Command-line interface.

Subcommands:
    analyze <recordings...>      batch report over one session per recording
    fit <recordings...>          fit an expert model from recordings
    replay <recording>           replay through the pipeline; optionally serve it
    classify-trajectory <csv>    annotate trajectory observations
    judge <recording>            per-serve pass/fail report against a model
    synth <out>                  generate a synthetic recording to practice on

Configuration comes from --config (or the BMS_CONFIG env var) and can be
patched per run with repeated --set section.key=value flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import report as report_mod
from .analytics import TrialLabel
from .config import EngineConfig, apply_overrides, load_config
from .errors import ShortServeError
from .expert import Pattern, classify_pattern, fit_model, load_model, save_model
from .feedback import Status
from .fsm import segment_recording
from .mocap import load_recording
from .stream import run_session


def _session_id(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _load_cfg(args) -> EngineConfig:
    cfg = load_config(getattr(args, "config", None))
    return apply_overrides(cfg, getattr(args, "set", None) or [])


def cmd_analyze(args) -> int:
    cfg = _load_cfg(args)
    model = load_model(args.model)
    sessions = [
        run_session(load_recording(path), model, cfg, session_id=_session_id(path))
        for path in args.recordings
    ]
    artifacts = report_mod.write_report(sessions, cfg, args.out, figures=not args.no_figures)
    total = sum(len(s.records) for s in sessions)
    valid = sum(1 for s in sessions for lab in s.labels if lab is TrialLabel.VALID)
    print(f"analyzed {len(sessions)} session(s): {total} trial(s), {valid} valid")
    for name in sorted(artifacts):
        print(f"  wrote {artifacts[name]}")
    return 0


def cmd_fit(args) -> int:
    cfg = _load_cfg(args)
    summaries = []
    for path in args.recordings:
        for record in segment_recording(load_recording(path), cfg.fsm, cfg.guidance):
            if record.summary is not None:
                summaries.append(record.summary)
    if args.pattern == "auto":
        if not summaries:
            raise ShortServeError("no serves found; cannot classify the exertion pattern")
        import numpy as np
        wrist = float(np.median([s.wrist_change_deg for s in summaries]))
        elbow = float(np.median([s.elbow_change_deg for s in summaries]))
        pattern = classify_pattern(wrist, elbow)
    else:
        pattern = Pattern(args.pattern)
    model = fit_model(summaries, pattern)
    if args.out:
        save_model(model, args.out)
        print(f"fitted {pattern.value} model from {len(summaries)} serve(s) -> {args.out}")
    else:
        json.dump(model.to_dict(), sys.stdout, indent=2)
        print()
    return 0


def cmd_replay(args) -> int:
    cfg = _load_cfg(args)
    model = load_model(args.model)
    recording = load_recording(args.recording)
    if args.serve_port is not None:
        import uvicorn

        from .server import create_app
        app = create_app(
            recording, model, cfg,
            speed_factor=args.speed,
            session_id=_session_id(args.recording),
            wait_clients=args.wait_clients,
        )
        uvicorn.run(app, host=args.host, port=args.serve_port, log_level="warning")
        return 0
    from .stream import session_messages
    for msg in session_messages(recording, model, cfg, session_id=_session_id(args.recording)):
        print(msg.to_json())
    return 0


def cmd_classify_trajectory(args) -> int:
    cfg = _load_cfg(args)
    from .trajectory import classify_observations, read_observations
    with open(args.csv, "r", encoding="utf-8") as fh:
        observations = read_observations(fh.read(), cfg.court)
    text = classify_observations(observations, cfg.court)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"classified {len(observations)} shot(s) -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_synth(args) -> int:
    import numpy as np

    from .mocap import Handedness, save_recording
    from .synth import SynthesisParams, random_params, synthesize_session
    rng = np.random.default_rng(args.seed)
    params = []
    for i in range(args.serves):
        overrides = dict(rate_hz=args.rate, handedness=Handedness(args.handedness))
        if i < args.jitter:
            overrides.update(jitter_cycles=3, jitter_amp_deg=2.0)
        elif i < args.jitter + args.dropout:
            overrides.update(dropout_frames=2)
        p = SynthesisParams(**overrides) if args.at_means else random_params(rng, **overrides)
        params.append(p)
    recording = synthesize_session(params)
    save_recording(recording, args.out)
    print(f"synthesized {args.serves} serve(s) ({len(recording.frames)} frames) -> {args.out}")
    return 0


def cmd_judge(args) -> int:
    cfg = _load_cfg(args)
    model = load_model(args.model)
    result = run_session(load_recording(args.recording), model, cfg,
                         session_id=_session_id(args.recording))
    if not result.records:
        print("no serves detected")
        return 0
    for record, label, rep in zip(result.records, result.labels, result.reports):
        if rep is None:
            print(f"serve {record.serve_index}: [{label.value}]")
            continue
        parts = []
        for name in ("pitch", "speed", "wrist", "elbow", "shoulder"):
            jv = getattr(rep, name)
            mark = "PASS" if jv.status is Status.PASS else "FAIL"
            parts.append(f"{name}={jv.value:.2f} {mark}")
        parts.append(f"height {'PASS' if rep.height_ok else 'FAIL'}")
        overall = "PASS" if rep.all_pass else "FAIL"
        print(f"serve {record.serve_index}: [{label.value}] {overall}  " + "  ".join(parts))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shortserve",
        description="Badminton backhand short-service training engine",
    )
    parser.add_argument("--config", help=f"config file (or ${'{'}BMS_CONFIG{'}'})")
    parser.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                        help="override one config value (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="batch report: one session per recording")
    p.add_argument("recordings", nargs="+")
    p.add_argument("--model", default="wrist_only",
                   help="expert model: builtin name or JSON path")
    p.add_argument("--out", default="reports", help="output directory")
    p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("fit", help="fit an expert model from recordings")
    p.add_argument("recordings", nargs="+")
    p.add_argument("--pattern", default="auto",
                   choices=["auto", "wrist_only", "elbow_wrist"])
    p.add_argument("--out", help="model JSON path (default: stdout)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("replay", help="replay a recording through the pipeline")
    p.add_argument("recording")
    p.add_argument("--speed", type=float, default=1.0)
    p.add_argument("--serve-port", type=int, default=None,
                   help="serve /stream and /model on this port instead of stdout")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--wait-clients", type=int, default=0,
                   help="hold the replay until N stream clients connect")
    p.add_argument("--model", default="wrist_only")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("classify-trajectory", help="annotate trajectory observations")
    p.add_argument("csv")
    p.add_argument("--out", help="annotated CSV path (default: stdout)")
    p.set_defaults(func=cmd_classify_trajectory)

    p = sub.add_parser("judge", help="pass/fail report per serve")
    p.add_argument("recording")
    p.add_argument("--model", default="wrist_only")
    p.set_defaults(func=cmd_judge)

    p = sub.add_parser("synth", help="generate a synthetic serve recording")
    p.add_argument("out", help="output path (.csv or .jsonl; sidecar .meta.json added)")
    p.add_argument("--serves", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rate", type=float, default=120.0)
    p.add_argument("--handedness", choices=["Right", "Left"], default="Right")
    p.add_argument("--jitter", type=int, default=0, help="serves with wrist oscillation")
    p.add_argument("--dropout", type=int, default=0, help="serves with mid-swing tracking loss")
    p.add_argument("--at-means", action="store_true",
                   help="every serve exactly at the expert-model means")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShortServeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
