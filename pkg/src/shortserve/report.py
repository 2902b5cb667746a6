"""Batch report rendering: delimited files, a text table, and figures.

``analyze`` treats each input recording as one training session and
writes, under one output directory: per-trial and per-session CSVs, the
pairwise t-test matrix, a text table of the session statistics with
significance stars, and per-variable PNG figures (summary-value trends
with per-session regression lines, and swing time-series overlays with
jitter trials dashed).
"""

from __future__ import annotations

import io
import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .analytics import (
    VARIABLES,
    TrialLabel,
    linear_regression,
    paired_t_test,
    session_summary,
    summary_value,
)
from .config import EngineConfig
from .errors import StatsError
from .kinetics import kinetic_series
from .stream import SessionResult

UNITS = {
    "pitch": "deg", "height_diff": "m", "speed": "m/s",
    "wrist_change": "deg", "elbow_change": "deg", "shoulder_change": "deg",
}

_SERIES_FIELD = {
    "pitch": "pitch_deg", "height_diff": "height_m", "speed": "speed_mps",
    "wrist_change": "wrist_deg", "elbow_change": "elbow_deg", "shoulder_change": "shoulder_deg",
}


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def trials_csv(sessions: list[SessionResult]) -> str:
    out = io.StringIO()
    out.write("session,serve,label," + ",".join(VARIABLES) + "\n")
    for result in sessions:
        for record, label in zip(result.records, result.labels):
            cells = [result.session_id, str(record.serve_index), label.value]
            if record.summary is None:
                cells += [""] * len(VARIABLES)
            else:
                cells += [_fmt(summary_value(record, v)) for v in VARIABLES]
            out.write(",".join(cells) + "\n")
    return out.getvalue()


def _common_n(sessions: list[SessionResult], cfg: EngineConfig) -> int:
    counts = [sum(1 for lab in r.labels if lab is TrialLabel.VALID) for r in sessions]
    if not counts:
        return 0
    return min(min(counts), cfg.session.first_n_valid)


def sessions_csv(sessions: list[SessionResult], cfg: EngineConfig) -> str:
    n = _common_n(sessions, cfg)
    out = io.StringIO()
    out.write("session,n,variable,mean,sd,median,q1,q3\n")
    for result in sessions:
        stats = session_summary(result.records, n, cfg.jitter)
        for name in VARIABLES:
            v = stats.variables[name]
            out.write(",".join([
                result.session_id, str(n), name,
                _fmt(v["mean"]), _fmt(v["sd"]), _fmt(v["median"]), _fmt(v["q1"]), _fmt(v["q3"]),
            ]) + "\n")
    return out.getvalue()


def _first_valid_values(result: SessionResult, variable: str, n: int) -> list[float]:
    values = [
        summary_value(record, variable)
        for record, label in zip(result.records, result.labels)
        if label is TrialLabel.VALID
    ]
    return values[:n]


def pairwise_tests(sessions: list[SessionResult], cfg: EngineConfig) -> list[dict]:
    """Paired two-tailed t-tests for every session pair and variable."""
    n = _common_n(sessions, cfg)
    rows = []
    if n < 2:
        return rows
    for i in range(len(sessions)):
        for j in range(i + 1, len(sessions)):
            for name in VARIABLES:
                a = _first_valid_values(sessions[i], name, n)
                b = _first_valid_values(sessions[j], name, n)
                try:
                    res = paired_t_test(a, b)
                except StatsError:
                    continue
                rows.append({
                    "variable": name,
                    "a": sessions[i].session_id, "b": sessions[j].session_id,
                    "t": res.t, "df": res.df, "p": res.p_two_tailed,
                })
    return rows


def pvalues_csv(sessions: list[SessionResult], cfg: EngineConfig) -> str:
    out = io.StringIO()
    out.write("variable,session_a,session_b,t,df,p\n")
    for row in pairwise_tests(sessions, cfg):
        out.write(",".join([
            row["variable"], row["a"], row["b"],
            _fmt(row["t"]), str(row["df"]), _fmt(row["p"]),
        ]) + "\n")
    return out.getvalue()


def _stars(p: float) -> str:
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return "ns"


def text_report(sessions: list[SessionResult], cfg: EngineConfig) -> str:
    """Session table per variable, with pairwise significance stars."""
    n = _common_n(sessions, cfg)
    pairs = pairwise_tests(sessions, cfg)
    out = io.StringIO()
    out.write(f"Serve analysis: {len(sessions)} session(s), "
              f"first {n} valid trial(s) per session\n")
    for result in sessions:
        counts = {lab: sum(1 for x in result.labels if x is lab) for lab in TrialLabel}
        out.write(
            f"  {result.session_id}: {len(result.records)} trials "
            f"({counts[TrialLabel.VALID]} valid, {counts[TrialLabel.JITTER]} jitter, "
            f"{counts[TrialLabel.LOST_TRACKING]} lost tracking)\n"
        )
    stats = {r.session_id: session_summary(r.records, n, cfg.jitter) for r in sessions}
    for name in VARIABLES:
        out.write(f"\n{name} ({UNITS[name]})\n")
        for result in sessions:
            v = stats[result.session_id].variables[name]
            out.write(
                f"  {result.session_id:<16} mean {v['mean']:>9.3f}  sd {v['sd']:>8.3f}"
                f"  median {v['median']:>9.3f}\n"
            )
        for row in (p for p in pairs if p["variable"] == name):
            out.write(
                f"  {row['a']} vs {row['b']}: t={row['t']:.3f}, p={row['p']:.4f} "
                f"[{_stars(row['p'])}]\n"
            )
    return out.getvalue()


def render_figures(sessions: list[SessionResult], out_dir: str) -> list[str]:
    """Per-variable PNGs: trial-value trends and swing time-series overlays."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    for name in VARIABLES:
        # trend: summary value per trial, bold regression per session
        fig, ax = plt.subplots(figsize=(7, 4))
        for si, result in enumerate(sessions):
            xs, ys, jitter_mask = [], [], []
            for record, label in zip(result.records, result.labels):
                if record.summary is None:
                    continue
                xs.append(record.serve_index)
                ys.append(summary_value(record, name))
                jitter_mask.append(label is TrialLabel.JITTER)
            if not xs:
                continue
            color = colors[si % len(colors)]
            xs_a, ys_a, jm = np.array(xs), np.array(ys), np.array(jitter_mask)
            ax.plot(xs_a[~jm], ys_a[~jm], "o", ms=4, color=color, label=result.session_id)
            if jm.any():
                ax.plot(xs_a[jm], ys_a[jm], "o", ms=4, mfc="none", color=color)
            if len(xs) >= 2 and len(set(xs)) >= 2:
                fit = linear_regression(xs_a, ys_a)
                grid = np.linspace(min(xs), max(xs), 2)
                ax.plot(grid, fit.slope * grid + fit.intercept, "-", lw=2.5, color=color)
        ax.set_xlabel("trial")
        ax.set_ylabel(f"{name} ({UNITS[name]})")
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{name}_trend.png")
        fig.savefig(path, dpi=100)
        plt.close(fig)
        paths.append(path)

        # time series: variable over the swing, jitter trials dashed
        fig, ax = plt.subplots(figsize=(7, 4))
        field = _SERIES_FIELD[name]
        for si, result in enumerate(sessions):
            color = colors[si % len(colors)]
            for record, label in zip(result.records, result.labels):
                if record.summary is None:
                    continue
                samples = kinetic_series(record.frames)
                k_back, _, k_contact = record.keyframes
                seg = samples[k_back:k_contact + 1]
                ts = [s.t - seg[0].t for s in seg]
                ys = [getattr(s, field) for s in seg]
                style = "--" if label is TrialLabel.JITTER else "-"
                ax.plot(ts, ys, style, lw=0.8, alpha=0.6, color=color)
        ax.set_xlabel("time in swing (s)")
        ax.set_ylabel(f"{_SERIES_FIELD[name]}")
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = os.path.join(out_dir, f"{name}_series.png")
        fig.savefig(path, dpi=100)
        plt.close(fig)
        paths.append(path)
    return paths


def write_report(sessions: list[SessionResult], cfg: EngineConfig, out_dir: str,
                 figures: bool = True) -> dict[str, str]:
    """Write every report artifact; returns {artifact name: path}."""
    os.makedirs(out_dir, exist_ok=True)
    artifacts = {}
    for fname, text in (
        ("trials.csv", trials_csv(sessions)),
        ("sessions.csv", sessions_csv(sessions, cfg)),
        ("pvalues.csv", pvalues_csv(sessions, cfg)),
        ("report.txt", text_report(sessions, cfg)),
    ):
        path = os.path.join(out_dir, fname)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        artifacts[fname] = path
    if figures:
        for path in render_figures(sessions, os.path.join(out_dir, "figures")):
            artifacts[os.path.join("figures", os.path.basename(path))] = path
    return artifacts
