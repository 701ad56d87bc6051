"""Command line front end: one JSON config in, figure-grade files out.

    pt-ssh-lab <command> --config run.json [--out DIR] [--svg] [--threads K]

Commands and their outputs (all UTF-8, LF endings):

* ``spectrum``       -- spectrum.csv (``index,re_e,im_e,ipr,peak_site,boundary_weight,class``),
                        optionally stacked over a one-parameter sweep.
* ``phase-diagram``  -- phase_diagram.csv (``theta,gamma,label,n_complex``)
                        over a (theta, gamma) grid; ``--svg`` adds a heat map.
* ``recovery``       -- recovery.csv (``n_cells,gamma,re_split,im_split``).
* ``profile``        -- profile.csv (``site,n_density``) of one selected mode.
* ``fit-decay``      -- fit_decay.json ``{amplitude, decay_length, r_squared}``.

Every command also writes summary.json recording the model, any sweep
values, and a warning count, so a stacked CSV can be unstacked without
guessing.  Numeric cells use the shortest round-trip decimal form.
Outputs are byte-identical for a fixed config regardless of --threads.

Exit codes: 0 success, 1 config error, 2 solver or analysis failure,
3 file I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .analysis import (
    GaplessError,
    IM_TOL,
    MODE_CLASSES,
    ModeCountError,
    classify_modes,
    mode_metrics,
    pt_phase_classify,
    decay_fit,
    recovery_map,
)
from .eigen import ConvergenceError, eigendecompose, spectrum_statistics
from .lattice import ModelParams, build_real_space, build_soc
from . import __version__


class ConfigError(ValueError):
    """A run configuration that cannot be executed as written."""


SWEEPABLE = ("theta", "gamma", "delta", "kappa", "J")

PHASE_COLORS = {
    "I": "#4c72b0",
    "II": "#dd8452",
    "III": "#c44e52",
    "IV": "#55a868",
    "V": "#8172b3",
    "VI": "#937860",
}
GAPLESS_COLOR = "#c8c8c8"


def _fmt(x) -> str:
    # shortest decimal that round-trips; nan prints as plain "nan"
    return repr(float(x))


def _build(params: ModelParams) -> np.ndarray:
    return build_soc(params) if params.spinful else build_real_space(params)


# ---------------------------------------------------------------- config

def _reject_unknown(obj: dict, allowed: Sequence[str], where: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _parse_range(obj, where: str, min_steps: int = 2) -> List[float]:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object with from/to/steps")
    _reject_unknown(obj, ("from", "to", "steps"), where)
    for key in ("from", "to", "steps"):
        if key not in obj:
            raise ConfigError(f"{where} is missing required key: {key}")
    lo, hi, steps = obj["from"], obj["to"], obj["steps"]
    if not isinstance(steps, int) or steps < min_steps:
        raise ConfigError(f"{where}.steps must be an integer >= {min_steps}, got {steps!r}")
    for name, v in (("from", lo), ("to", hi)):
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise ConfigError(f"{where}.{name} must be a finite number, got {v!r}")
    if steps == 1:
        return [float(lo)]
    return [float(v) for v in np.linspace(float(lo), float(hi), steps)]


def _parse_cells_axis(obj, where: str) -> List[int]:
    """Integer axis: either an explicit "values" list or an integral range."""
    if isinstance(obj, dict) and "values" in obj:
        _reject_unknown(obj, ("values",), where)
        values = obj["values"]
        if (not isinstance(values, list) or not values
                or any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in values)):
            raise ConfigError(f"{where}.values must be a non-empty list of positive integers")
        return list(values)
    values = _parse_range(obj, where, min_steps=1)
    ints = [int(round(v)) for v in values]
    if any(abs(v - i) > 1e-9 or i < 1 for v, i in zip(values, ints)):
        raise ConfigError(f"{where} range does not land on positive integers; use a values list")
    return ints


def _parse_model(cfg: dict) -> ModelParams:
    if "model" not in cfg:
        raise ConfigError("config is missing required key: model")
    try:
        return ModelParams.from_dict(cfg["model"])
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad model block: {exc}") from exc


def _parse_im_tol(cfg: dict) -> float:
    tols = cfg.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ConfigError("tolerances must be an object")
    _reject_unknown(tols, ("im_tol",), "tolerances")
    im_tol = tols.get("im_tol", IM_TOL)
    if not isinstance(im_tol, (int, float)) or isinstance(im_tol, bool) or not im_tol > 0:
        raise ConfigError(f"tolerances.im_tol must be a positive number, got {im_tol!r}")
    return float(im_tol)


def _check_sweep_endpoints(model: ModelParams, param: str, values: Sequence[float]) -> None:
    # surface range violations (theta outside [-pi, pi], ...) as config
    # errors before any diagonalization starts
    for v in (values[0], values[-1]):
        try:
            replace(model, **{param: v})
        except ValueError as exc:
            raise ConfigError(f"sweep endpoint {param}={v!r} is invalid: {exc}") from exc


def _load_config(path: str, command: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    allowed = {
        "spectrum": ("model", "out_dir", "tolerances", "sweep"),
        "phase-diagram": ("model", "out_dir", "tolerances", "theta", "gamma"),
        "recovery": ("model", "out_dir", "tolerances", "n_cells", "gamma"),
        "profile": ("model", "out_dir", "tolerances", "mode"),
        "fit-decay": ("model", "out_dir", "tolerances", "n_values"),
    }[command]
    _reject_unknown(cfg, allowed, "config")
    return cfg


# ------------------------------------------------------------- emission

def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv(header: str, rows: Sequence[Sequence[str]]) -> str:
    lines = [header]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _summary(out_dir: str, payload: dict) -> None:
    _write_text(os.path.join(out_dir, "summary.json"),
                json.dumps(payload, sort_keys=True, indent=2) + "\n")


def _map_grid(tasks: Sequence, worker: Callable, threads: int) -> list:
    """Apply worker over tasks, results ordered by task position."""
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(worker, tasks))
    return [worker(t) for t in tasks]


# ----------------------------------------------------------------- svg

def _svg_document(width: int, height: int, body: List[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def _svg_axes_label(x: float, y: float, text: str, anchor: str = "middle") -> str:
    return (f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="sans-serif" '
            f'font-size="12" text-anchor="{anchor}">{text}</text>')


def _heat_map_svg(
    x_values: Sequence[float],
    y_values: Sequence[float],
    colors: Sequence[Sequence[str]],
    x_label: str,
    y_label: str,
    legend: Sequence[Tuple[str, str]],
) -> str:
    """Grid of filled rects; colors[i][j] paints cell (x_values[i], y_values[j])."""
    margin, cell_area, legend_w = 50, 540, 110
    width = margin * 2 + cell_area + legend_w
    height = margin * 2 + cell_area
    nx, ny = len(x_values), len(y_values)
    cw, ch = cell_area / nx, cell_area / ny
    body = [f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>']
    for i in range(nx):
        for j in range(ny):
            # y axis points up: largest y value in the top row
            body.append(
                f'<rect x="{_fmt(margin + i * cw)}" y="{_fmt(margin + (ny - 1 - j) * ch)}" '
                f'width="{_fmt(cw + 0.5)}" height="{_fmt(ch + 0.5)}" fill="{colors[i][j]}"/>'
            )
    body.append(_svg_axes_label(margin + cell_area / 2, height - margin / 4, x_label))
    body.append(_svg_axes_label(margin / 3, margin + cell_area / 2, y_label, anchor="start"))
    body.append(_svg_axes_label(margin, height - margin / 2, _fmt(x_values[0]), anchor="start"))
    body.append(_svg_axes_label(margin + cell_area, height - margin / 2, _fmt(x_values[-1]), anchor="end"))
    body.append(_svg_axes_label(margin - 4, height - margin, _fmt(y_values[0]), anchor="end"))
    body.append(_svg_axes_label(margin - 4, margin + 10, _fmt(y_values[-1]), anchor="end"))
    lx = margin + cell_area + 20
    for k, (name, color) in enumerate(legend):
        ly = margin + k * 24
        body.append(f'<rect x="{_fmt(lx)}" y="{_fmt(ly)}" width="16" height="16" fill="{color}"/>')
        body.append(_svg_axes_label(lx + 22, ly + 13, name, anchor="start"))
    return _svg_document(width, height, body)


def _polyline_svg(
    x: Sequence[float],
    series: Sequence[Sequence[float]],
    x_label: str,
    y_label: str,
    color: str = "#4c72b0",
) -> str:
    """One polyline per series over a shared x axis."""
    margin, plot_w, plot_h = 50, 640, 400
    width, height = margin * 2 + plot_w, margin * 2 + plot_h
    x0, x1 = min(x), max(x)
    ys = [v for s in series for v in s if math.isfinite(v)]
    y0, y1 = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x1 == x0:
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def px(v: float) -> float:
        return margin + (v - x0) / (x1 - x0) * plot_w

    def py(v: float) -> float:
        return margin + (y1 - v) / (y1 - y0) * plot_h

    body = [f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
            f'<rect x="{margin}" y="{margin}" width="{plot_w}" height="{plot_h}" '
            f'fill="none" stroke="#888888"/>']
    for s in series:
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}" for a, b in zip(x, s) if math.isfinite(b))
        if pts:
            body.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1"/>')
    body.append(_svg_axes_label(margin + plot_w / 2, height - margin / 4, x_label))
    body.append(_svg_axes_label(margin / 3, margin + plot_h / 2, y_label, anchor="start"))
    body.append(_svg_axes_label(margin, height - margin / 2, _fmt(min(x)), anchor="start"))
    body.append(_svg_axes_label(margin + plot_w, height - margin / 2, _fmt(max(x)), anchor="end"))
    body.append(_svg_axes_label(margin - 4, margin + plot_h, _fmt(y0), anchor="end"))
    body.append(_svg_axes_label(margin - 4, margin + 10, _fmt(y1), anchor="end"))
    return _svg_document(width, height, body)


# ------------------------------------------------------------- commands

def _spectrum_point(params: ModelParams, im_tol: float):
    """(rows, n_complex, gapless_flag) for one parameter point."""
    spec = eigendecompose(_build(params))
    try:
        records = classify_modes(spec, params)
        rows = [
            (r.energy, r.ipr, r.peak_site, r.boundary_weight, r.mode_class)
            for r in records
        ]
        gapless = False
    except GaplessError:
        # no gap, so no in-gap family to separate: everything is bulk
        metrics = mode_metrics(spec, params)
        rows = [
            (complex(spec.eigenvalues[i]), m[0], m[1], m[2], "bulk")
            for i, m in enumerate(metrics)
        ]
        gapless = True
    stats = spectrum_statistics(spec, tol=im_tol)
    return rows, stats.n_complex, gapless


def cmd_spectrum(cfg: dict, out_dir: str, svg: bool, threads: int) -> None:
    model = _parse_model(cfg)
    im_tol = _parse_im_tol(cfg)
    sweep = cfg.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict):
            raise ConfigError("sweep must be an object")
        _reject_unknown(sweep, ("param", "from", "to", "steps"), "sweep")
        param = sweep.get("param")
        if param not in SWEEPABLE:
            raise ConfigError(f"sweep.param must be one of {SWEEPABLE}, got {param!r}")
        values = _parse_range({k: sweep[k] for k in ("from", "to", "steps") if k in sweep},
                              "sweep")
        _check_sweep_endpoints(model, param, values)
        points = [replace(model, **{param: v}) for v in values]
    else:
        param, values = None, []
        points = [model]

    results = _map_grid(points, lambda p: _spectrum_point(p, im_tol), threads)

    rows: List[Tuple[str, ...]] = []
    for point_rows, _, _ in results:
        for k, (e, ipr, peak, bw, cls) in enumerate(point_rows):
            rows.append((str(k + 1), _fmt(e.real), _fmt(e.imag), _fmt(ipr),
                         str(peak), _fmt(bw), cls))
    csv_text = _csv("index,re_e,im_e,ipr,peak_site,boundary_weight,class", rows)

    n_gapless = sum(1 for _, _, g in results if g)
    payload = {
        "command": "spectrum",
        "model": _jsonable(model.to_dict()),
        "sweep": None if param is None else {"param": param, "values": values},
        "rows_per_point": len(results[0][0]),
        "n_complex": [n for _, n, _ in results],
        "im_tol": im_tol,
        "warnings": n_gapless,
    }

    _write_text(os.path.join(out_dir, "spectrum.csv"), csv_text)
    _summary(out_dir, payload)
    if svg:
        xs = values if param is not None else [0.0]
        dim = len(results[0][0])
        re_series = [[res[0][k][0].real for res in results] for k in range(dim)]
        _write_text(os.path.join(out_dir, "spectrum.svg"),
                    _polyline_svg(xs, re_series, param or "point", "re_e"))


def cmd_phase_diagram(cfg: dict, out_dir: str, svg: bool, threads: int) -> None:
    model = _parse_model(cfg)
    if model.spinful:
        raise ConfigError("phase-diagram labels are defined for the spinless chain")
    _parse_im_tol(cfg)
    for axis in ("theta", "gamma"):
        if axis not in cfg:
            raise ConfigError(f"config is missing required key: {axis}")
    thetas = _parse_range(cfg["theta"], "theta", min_steps=1)
    gammas = _parse_range(cfg["gamma"], "gamma", min_steps=1)
    _check_sweep_endpoints(model, "theta", thetas)
    _check_sweep_endpoints(model, "gamma", gammas)

    def cell(tg: Tuple[float, float]) -> Tuple[str, int]:
        t, g = tg
        p = replace(model, theta=t, gamma=g)
        spec = eigendecompose(_build(p))
        try:
            point = pt_phase_classify(p, spec)
            return point.label, point.n_complex
        except GaplessError:
            stats = spectrum_statistics(spec, tol=IM_TOL)
            return "gapless", stats.n_complex

    tasks = [(t, g) for t in thetas for g in gammas]
    cells = _map_grid(tasks, cell, threads)

    rows = [
        (_fmt(t), _fmt(g), label, str(n_complex))
        for (t, g), (label, n_complex) in zip(tasks, cells)
    ]
    n_gapless = sum(1 for label, _ in cells if label == "gapless")
    _write_text(os.path.join(out_dir, "phase_diagram.csv"),
                _csv("theta,gamma,label,n_complex", rows))
    _summary(out_dir, {
        "command": "phase-diagram",
        "model": _jsonable(model.to_dict()),
        "theta_values": thetas,
        "gamma_values": gammas,
        "labels": sorted({label for label, _ in cells}),
        "warnings": n_gapless,
    })
    if svg:
        lookup = {tg: c[0] for tg, c in zip(tasks, cells)}
        colors = [[PHASE_COLORS.get(lookup[(t, g)], GAPLESS_COLOR) for g in gammas]
                  for t in thetas]
        legend = list(PHASE_COLORS.items())
        _write_text(os.path.join(out_dir, "phase_diagram.svg"),
                    _heat_map_svg(thetas, gammas, colors, "theta", "gamma", legend))


def cmd_recovery(cfg: dict, out_dir: str, svg: bool, threads: int) -> None:
    model = _parse_model(cfg)
    if model.spinful:
        raise ConfigError("recovery maps follow the spinless edge pair")
    _parse_im_tol(cfg)
    for axis in ("n_cells", "gamma"):
        if axis not in cfg:
            raise ConfigError(f"config is missing required key: {axis}")
    n_values = _parse_cells_axis(cfg["n_cells"], "n_cells")
    gammas = _parse_range(cfg["gamma"], "gamma", min_steps=1)
    _check_sweep_endpoints(model, "gamma", gammas)

    grid = recovery_map(model, n_values, gammas, max_workers=threads)
    rows = [
        (str(c.N), _fmt(c.gamma), _fmt(c.re_split), _fmt(c.im_split))
        for row in grid for c in row
    ]
    n_invalid = sum(1 for row in grid for c in row if not c.valid)
    _write_text(os.path.join(out_dir, "recovery.csv"),
                _csv("n_cells,gamma,re_split,im_split", rows))
    _summary(out_dir, {
        "command": "recovery",
        "model": _jsonable(model.to_dict()),
        "n_values": n_values,
        "gamma_values": gammas,
        "invalid_cells": n_invalid,
        "warnings": n_invalid,
    })
    if svg:
        splits = [c.re_split for row in grid for c in row if c.valid and c.re_split > 0]
        lo = math.log10(min(splits)) if splits else -16.0
        hi = math.log10(max(splits)) if splits else 0.0
        span = (hi - lo) or 1.0

        def shade(c) -> str:
            if not c.valid:
                return GAPLESS_COLOR
            v = math.log10(c.re_split) if c.re_split > 0 else lo
            t = min(max((v - lo) / span, 0.0), 1.0)
            level = int(round(255 * (1.0 - t)))
            return f"#{level:02x}{level:02x}ff"

        colors = [[shade(c) for c in row] for row in grid]
        legend = [("re_split high", "#0000ff"), ("re_split low", "#ffffff"),
                  ("invalid", GAPLESS_COLOR)]
        _write_text(os.path.join(out_dir, "recovery.svg"),
                    _heat_map_svg([float(n) for n in n_values], gammas, colors,
                                  "n_cells", "gamma", legend))


def cmd_profile(cfg: dict, out_dir: str, svg: bool, threads: int) -> None:
    model = _parse_model(cfg)
    _parse_im_tol(cfg)
    sel = cfg.get("mode")
    if not isinstance(sel, dict):
        raise ConfigError("config needs a mode object selecting the profile")
    _reject_unknown(sel, ("index", "class", "rank"), "mode")
    has_index = "index" in sel
    has_class = "class" in sel
    if has_index == has_class:
        raise ConfigError("mode must select by exactly one of index or class")
    if has_index:
        idx = sel["index"]
        if not isinstance(idx, int) or isinstance(idx, bool) or idx < 1:
            raise ConfigError(f"mode.index must be a positive integer, got {idx!r}")
        if "rank" in sel:
            raise ConfigError("mode.rank applies to class selection only")
    else:
        if sel["class"] not in MODE_CLASSES:
            raise ConfigError(f"mode.class must be one of {MODE_CLASSES}, got {sel['class']!r}")
        rank = sel.get("rank", 0)
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
            raise ConfigError(f"mode.rank must be a non-negative integer, got {rank!r}")

    spec = eigendecompose(_build(model))
    if has_index:
        idx = sel["index"]
        if idx > spec.dim:
            raise ModeCountError(f"mode.index {idx} exceeds spectrum dimension {spec.dim}")
        chosen = idx - 1
        density = np.abs(spec.eigenvectors[:, chosen]) ** 2
        mode_class = None
    else:
        records = classify_modes(spec, model)
        matches = [(r.peak_site, i) for i, r in enumerate(records)
                   if r.mode_class == sel["class"]]
        matches.sort()  # leftmost peak first, spectrum order breaks ties
        rank = sel.get("rank", 0)
        if rank >= len(matches):
            raise ModeCountError(
                f"requested rank {rank} of class {sel['class']!r}, found {len(matches)} such modes")
        chosen = matches[rank][1]
        density = records[chosen].profile
        mode_class = sel["class"]

    energy = complex(spec.eigenvalues[chosen])
    rows = [(str(site + 1), _fmt(density[site])) for site in range(spec.dim)]
    _write_text(os.path.join(out_dir, "profile.csv"), _csv("site,n_density", rows))
    _summary(out_dir, {
        "command": "profile",
        "model": _jsonable(model.to_dict()),
        "mode_index": chosen + 1,
        "mode_class": mode_class,
        "energy_re": energy.real,
        "energy_im": energy.imag,
        "norm": float(np.sum(density)),
        "warnings": 0,
    })
    if svg:
        sites = [float(s + 1) for s in range(spec.dim)]
        _write_text(os.path.join(out_dir, "profile.svg"),
                    _polyline_svg(sites, [list(map(float, density))], "site", "n_density"))


def cmd_fit_decay(cfg: dict, out_dir: str, svg: bool, threads: int) -> None:
    model = _parse_model(cfg)
    _parse_im_tol(cfg)
    n_values = cfg.get("n_values")
    if (not isinstance(n_values, list) or not n_values
            or any(not isinstance(v, int) or isinstance(v, bool) or v < 1 for v in n_values)):
        raise ConfigError("config needs n_values: a non-empty list of positive defect depths")

    fit = decay_fit(model, n_values)
    payload = {
        "amplitude": fit.amplitude,
        "decay_length": fit.decay_length,
        "r_squared": fit.r_squared,
    }
    _write_text(os.path.join(out_dir, "fit_decay.json"),
                json.dumps(payload, sort_keys=True, indent=2) + "\n")
    _summary(out_dir, {
        "command": "fit-decay",
        "model": _jsonable(model.to_dict()),
        "n_values": n_values,
        "warnings": 0,
    })


def _jsonable(d: dict) -> dict:
    return {k: (float(v) if isinstance(v, (np.floating,)) else v) for k, v in d.items()}


COMMANDS: Dict[str, Callable[[dict, str, bool, int], None]] = {
    "spectrum": cmd_spectrum,
    "phase-diagram": cmd_phase_diagram,
    "recovery": cmd_recovery,
    "profile": cmd_profile,
    "fit-decay": cmd_fit_decay,
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pt-ssh-lab",
        description="Spectra, phase diagrams, and recovery maps of the "
                    "PT-symmetric SSH chain, from JSON configs to CSV/JSON/SVG.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("spectrum", "eigenvalues and mode classes, optionally over a sweep"),
        ("phase-diagram", "PT phase labels over a (theta, gamma) grid"),
        ("recovery", "edge-pair splittings over an (N, gamma) grid"),
        ("profile", "density profile of one selected mode"),
        ("fit-decay", "exponential fit of the edge splitting vs defect depth"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", default=None, help="output directory (default: config out_dir or cwd)")
        p.add_argument("--svg", action="store_true", help="also draw a minimal SVG")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: machine parallelism)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)

    try:
        cfg = _load_config(args.config, args.command)
        out_dir = args.out if args.out is not None else cfg.get("out_dir", ".")
        if not isinstance(out_dir, str):
            raise ConfigError(f"out_dir must be a string, got {out_dir!r}")
        threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
        if threads < 1:
            raise ConfigError(f"--threads must be >= 1, got {threads}")
        # validate the config shape eagerly so bad input never reaches a solver
        runner = COMMANDS[args.command]
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        os.makedirs(out_dir, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return 3

    try:
        runner(cfg, out_dir, args.svg, threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConvergenceError, GaplessError, ModeCountError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
