"""Artifact writers: sweep CSV, verdict JSON, and a dependency-free SVG plot.

The CSV column order is a contract: t, lambda, dlambda_hadamard, dlambda_fd,
mesh_h, residual, iterations, with 12 significant digits and an empty field
where a quantity was not computed. Identical runs must produce identical
bytes, so every float goes through one fixed formatter.
"""

from __future__ import annotations

import json
from pathlib import Path

from .experiments import SweepRecord, TheoremReport

CSV_HEADER = "t,lambda,dlambda_hadamard,dlambda_fd,mesh_h,residual,iterations"


def fmt(value: float | None) -> str:
    return "" if value is None else format(float(value), ".12g")


def sweep_csv(records: list[SweepRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                [
                    fmt(r.t),
                    fmt(r.lam),
                    fmt(r.hadamard_deriv),
                    fmt(r.fd_deriv),
                    fmt(r.mesh_h),
                    fmt(r.residual),
                    str(r.iterations),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def write_sweep_csv(path: Path | str, records: list[SweepRecord]) -> None:
    Path(path).write_text(sweep_csv(records))


def write_report_json(path: Path | str, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _svg_path(xs, ys) -> str:
    steps = [f"{'M' if i == 0 else 'L'} {x:.2f} {y:.2f}" for i, (x, y) in enumerate(zip(xs, ys))]
    return " ".join(steps)


def sweep_svg(records: list[SweepRecord], ylabel: str = "lambda") -> str:
    """Line plot of the swept value against the rotation angle with the
    aligned (ON, t = 0) and offset (OFF, t = pi/n) positions marked."""
    width, height = 720.0, 480.0
    left, right, top, bottom = 80.0, 30.0, 40.0, 60.0
    ts = [r.t for r in records]
    vs = [r.lam for r in records]
    t_lo, t_hi = min(ts), max(ts)
    v_lo, v_hi = min(vs), max(vs)
    pad = 0.05 * (v_hi - v_lo) or max(1e-12, 0.05 * abs(v_hi)) or 1.0
    v_lo, v_hi = v_lo - pad, v_hi + pad

    def sx(t):
        return left + (t - t_lo) / (t_hi - t_lo) * (width - left - right)

    def sy(v):
        return height - bottom - (v - v_lo) / (v_hi - v_lo) * (height - top - bottom)

    xs = [sx(t) for t in ts]
    ys = [sy(v) for v in vs]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        f'<rect width="{width:.0f}" height="{height:.0f}" fill="white"/>',
        f'<line x1="{left:.2f}" y1="{height - bottom:.2f}" x2="{width - right:.2f}" '
        f'y2="{height - bottom:.2f}" stroke="black"/>',
        f'<line x1="{left:.2f}" y1="{top:.2f}" x2="{left:.2f}" y2="{height - bottom:.2f}" '
        f'stroke="black"/>',
    ]
    for k in range(5):
        tv = t_lo + k * (t_hi - t_lo) / 4.0
        vv = v_lo + k * (v_hi - v_lo) / 4.0
        parts.append(
            f'<text x="{sx(tv):.2f}" y="{height - bottom + 20.0:.2f}" font-size="12" '
            f'text-anchor="middle" font-family="monospace">{tv:.4f}</text>'
        )
        parts.append(
            f'<text x="{left - 8.0:.2f}" y="{sy(vv) + 4.0:.2f}" font-size="12" '
            f'text-anchor="end" font-family="monospace">{vv:.6g}</text>'
        )
    parts.append(
        f'<text x="{(left + width - right) / 2.0:.2f}" y="{height - 15.0:.2f}" font-size="14" '
        f'text-anchor="middle" font-family="monospace">rotation angle t</text>'
    )
    parts.append(
        f'<text x="20" y="{(top + height - bottom) / 2.0:.2f}" font-size="14" '
        f'text-anchor="middle" font-family="monospace" '
        f'transform="rotate(-90 20 {(top + height - bottom) / 2.0:.2f})">{ylabel}</text>'
    )
    parts.append(f'<path d="{_svg_path(xs, ys)}" fill="none" stroke="#1f6fb2" stroke-width="2"/>')
    for x, y in zip(xs, ys):
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#1f6fb2"/>')
    parts.append(
        f'<circle cx="{xs[0]:.2f}" cy="{ys[0]:.2f}" r="6" fill="none" stroke="#c23b22" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{xs[0] + 10.0:.2f}" y="{ys[0] - 10.0:.2f}" font-size="13" '
        f'font-family="monospace" fill="#c23b22">ON</text>'
    )
    parts.append(
        f'<circle cx="{xs[-1]:.2f}" cy="{ys[-1]:.2f}" r="6" fill="none" stroke="#c23b22" stroke-width="2"/>'
    )
    parts.append(
        f'<text x="{xs[-1] - 40.0:.2f}" y="{ys[-1] - 10.0:.2f}" font-size="13" '
        f'font-family="monospace" fill="#c23b22">OFF</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_sweep_svg(path: Path | str, records: list[SweepRecord], ylabel: str = "lambda") -> None:
    Path(path).write_text(sweep_svg(records, ylabel))
