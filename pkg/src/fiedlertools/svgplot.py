"""Minimal static SVG output, no dependencies.

Two generators: a line chart for sweep/experiment curves and a pixel scene
for masks with isolines. Output is deterministic for identical inputs
(fixed-precision coordinates, no timestamps).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

_COLORS = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#000000",
)

_W, _H = 720, 480
_ML, _MR, _MT, _MB = 70.0, 24.0, 42.0, 52.0


@dataclass
class Series:
    label: str
    xs: list = field(default_factory=list)
    ys: list = field(default_factory=list)
    color: str | None = None
    dashed: bool = False


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def line_chart(
    path: str | Path,
    series: list[Series],
    title: str = "",
    x_label: str = "",
    y_label: str = "",
    x_log: bool = False,
    vlines: list[tuple[float, str]] | None = None,
) -> None:
    """Write a line chart; x_log plots against log10(x) with decade ticks."""
    xs_all = [float(x) for s in series for x in s.xs]
    ys_all = [float(y) for s in series for y in s.ys if math.isfinite(y)]
    if not xs_all or not ys_all:
        raise ValueError("nothing to plot")
    tx = (lambda x: math.log10(x)) if x_log else (lambda x: x)
    x_lo, x_hi = min(tx(x) for x in xs_all), max(tx(x) for x in xs_all)
    y_lo, y_hi = min(ys_all), max(ys_all)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x: float) -> float:
        return _ML + (x - x_lo) / (x_hi - x_lo) * (_W - _ML - _MR)

    def py(y: float) -> float:
        return _H - _MB - (y - y_lo) / (y_hi - y_lo) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_W / 2}" y="24" text-anchor="middle" font-size="15">{title}</text>')
    if x_log:
        x_ticks = [float(k) for k in range(math.ceil(x_lo - 1e-9), math.floor(x_hi + 1e-9) + 1)]
        x_tick_labels = [f"1e{int(k)}" for k in x_ticks]
    else:
        x_ticks = _nice_ticks(x_lo, x_hi)
        x_tick_labels = [f"{t:g}" for t in x_ticks]
    for t, lab in zip(x_ticks, x_tick_labels):
        X = px(t)
        out.append(f'<line x1="{_fmt(X)}" y1="{_MT}" x2="{_fmt(X)}" y2="{_H - _MB}" stroke="#dddddd"/>')
        out.append(f'<text x="{_fmt(X)}" y="{_H - _MB + 18}" text-anchor="middle">{lab}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        Y = py(t)
        out.append(f'<line x1="{_ML}" y1="{_fmt(Y)}" x2="{_W - _MR}" y2="{_fmt(Y)}" stroke="#dddddd"/>')
        out.append(f'<text x="{_ML - 6}" y="{_fmt(Y + 4)}" text-anchor="end">{t:g}</text>')
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" height="{_H - _MT - _MB}" '
        f'fill="none" stroke="#333333"/>'
    )
    for xv, lab in vlines or []:
        X = px(tx(xv))
        out.append(
            f'<line x1="{_fmt(X)}" y1="{_MT}" x2="{_fmt(X)}" y2="{_H - _MB}" '
            f'stroke="#555555" stroke-dasharray="2,4"/>'
        )
        if lab:
            out.append(f'<text x="{_fmt(X + 4)}" y="{_MT + 14}" fill="#555555">{lab}</text>')
    for i, s in enumerate(series):
        color = s.color or _COLORS[i % len(_COLORS)]
        pts = " ".join(
            f"{_fmt(px(tx(float(x))))},{_fmt(py(float(y)))}"
            for x, y in zip(s.xs, s.ys)
            if math.isfinite(float(y))
        )
        dash = ' stroke-dasharray="5,3"' if s.dashed else ""
        out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
    # legend (only labeled series)
    ly = _MT + 8
    for i, s in enumerate(series):
        if not s.label:
            continue
        color = s.color or _COLORS[i % len(_COLORS)]
        out.append(
            f'<line x1="{_W - _MR - 150}" y1="{ly + 4}" x2="{_W - _MR - 126}" y2="{ly + 4}" '
            f'stroke="{color}" stroke-width="2"/>'
        )
        out.append(f'<text x="{_W - _MR - 120}" y="{ly + 8}">{s.label}</text>')
        ly += 16
    if x_label:
        out.append(f'<text x="{_W / 2}" y="{_H - 10}" text-anchor="middle">{x_label}</text>')
    if y_label:
        out.append(
            f'<text x="16" y="{_H / 2}" text-anchor="middle" '
            f'transform="rotate(-90 16 {_H / 2})">{y_label}</text>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")


def shape_scene(
    path: str | Path,
    mask_values: np.ndarray,
    isolines: list[list[np.ndarray]] | None = None,
    markers: list[tuple[float, float, str]] | None = None,
    title: str = "",
    scale: int = 8,
) -> None:
    """Render a mask with optional isolines and (x, y, color) markers."""
    H, W = mask_values.shape
    width, height = W * scale, H * scale + (24 if title else 0)
    top = 24 if title else 0
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="13">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{width / 2}" y="16" text-anchor="middle">{title}</text>')
    # merge foreground runs per row to keep the file small
    for r in range(H):
        c = 0
        while c < W:
            if mask_values[r, c]:
                c0 = c
                while c < W and mask_values[r, c]:
                    c += 1
                out.append(
                    f'<rect x="{c0 * scale}" y="{top + r * scale}" '
                    f'width="{(c - c0) * scale}" height="{scale}" fill="#c8d8e8"/>'
                )
            else:
                c += 1
    half = scale / 2.0
    for level_lines in isolines or []:
        for poly in level_lines:
            pts = " ".join(
                f"{_fmt(x * scale + half)},{_fmt(top + y * scale + half)}" for x, y in poly
            )
            out.append(f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1"/>')
    for x, y, color in markers or []:
        out.append(
            f'<circle cx="{_fmt(x * scale + half)}" cy="{_fmt(top + y * scale + half)}" '
            f'r="{_fmt(scale * 0.45)}" fill="none" stroke="{color}" stroke-width="2"/>'
        )
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")
