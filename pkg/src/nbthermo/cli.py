"""Command-line driver: sweep orchestration, CSV/manifest emission, plots.

A run evaluates the thermodynamic table over a temperature grid for each
value of an optional swept parameter (B0 or alpha), writes one CSV per swept
value plus a JSON-lines manifest with a sha256 per artifact, a gnuplot-dialect
plot script, and (with --plots) rendered PNG figures.

Figure presets reproduce the qualitative curves: fig1/fig2/fig3 sweep
B0 in {1.0, 2.5, 5.0} at alpha = 1, k_y = 0.1; fig4..fig7 sweep alpha in
{0.5, 1.0, 1.5} at B0 = 2.5, k_y = 0.1.  Preset method/cutoff/grid choices
are calibrated so the documented curve shapes (single Schottky peak, monotone
entropy, free-energy maximum, single positive susceptibility peak) hold and
are checked by the acceptance suite.

Parallelism over grid points is capped by the NBT_THREADS environment
variable; output ordering is by grid index regardless of schedule, so CSV
bytes are identical across parallelism levels.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys as _sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .partition import QMethod
from .spectrum import CutoffPolicy, PhysicalSystem, level_cutoff
from .thermo import Mode, ThermoPoint, safe_point

CSV_HEADER = ("T", "beta", "U", "C", "F", "S", "M", "chi", "mode", "q_method")

QUANTITY_LABELS = {
    "U": "Mean energy",
    "C": "Specific heat",
    "F": "Free energy",
    "S": "Entropy",
    "M": "Magnetization",
    "chi": "Magnetic susceptibility",
}
_QUANTITY_COLUMN = {"U": 3, "C": 4, "F": 5, "S": 6, "M": 7, "chi": 8}  # 1-based CSV column


class UsageError(ValueError):
    """Configuration rejected; the message names the offending field."""


@dataclass(frozen=True)
class RunConfig:
    system: PhysicalSystem
    t_min: float
    t_max: float
    t_steps: int
    sweep_param: str  # "none" | "b0" | "alpha"
    sweep_values: tuple[float, ...]
    q_method: QMethod
    mode: Mode
    cutoff: CutoffPolicy
    output_dir: Path
    emit_plots: bool
    quantity: str
    label: str

    def __post_init__(self):
        if not (self.t_min > 0.0 and math.isfinite(self.t_min)):
            raise UsageError(f"t_min must be positive, got {self.t_min!r}")
        if not self.t_min < self.t_max:
            raise UsageError(f"t_min must be < t_max, got {self.t_min!r} >= {self.t_max!r}")
        if self.t_steps < 1:
            raise UsageError(f"t_steps must be >= 1, got {self.t_steps!r}")
        if self.sweep_param not in ("none", "b0", "alpha"):
            raise UsageError(f"unknown sweep parameter {self.sweep_param!r}")
        if self.sweep_param != "none" and not self.sweep_values:
            raise UsageError("sweep value list must not be empty")
        if self.sweep_param == "alpha" and any(v <= 0.0 for v in self.sweep_values):
            raise UsageError("alpha sweep values must all be > 0")
        if self.quantity not in QUANTITY_LABELS:
            raise UsageError(f"unknown quantity {self.quantity!r}")


@dataclass(frozen=True)
class SweepSeries:
    label: str
    param_value: float | None
    n_cutoff: int
    points: list[ThermoPoint]


@dataclass(frozen=True)
class SweepOutput:
    config: RunConfig
    t_grid: list[float]
    series: list[SweepSeries]


# =============================================================================
# Presets
# =============================================================================

_B0_SWEEP = (1.0, 2.5, 5.0)
_ALPHA_SWEEP = (0.5, 1.0, 1.5)


def _preset(label, quantity, sweep_param, values, method, cutoff, t_min, t_max):
    return dict(
        label=label, quantity=quantity, sweep_param=sweep_param,
        sweep_values=values, q_method=method, cutoff=cutoff,
        t_min=t_min, t_max=t_max, t_steps=200,
        b0=2.5, alpha=1.0, ky=0.1, kz=0.0, mode=Mode.STANDARD,
    )


PRESETS = {
    # B0 sweeps at alpha = 1, k_y = 0.1
    "fig1": _preset("fig1", "U", "b0", _B0_SWEEP, QMethod.EXACT,
                    CutoffPolicy.vertex(floor_n=1), 0.01, 10.0),
    "fig2": _preset("fig2", "C", "b0", _B0_SWEEP, QMethod.EXACT,
                    CutoffPolicy.explicit(1), 0.01, 10.0),
    "fig3": _preset("fig3", "chi", "b0", _B0_SWEEP, QMethod.EXACT,
                    CutoffPolicy.vertex(floor_n=1), 0.01, 10.0),
    # alpha sweeps at B0 = 2.5, k_y = 0.1
    "fig4": _preset("fig4", "F", "alpha", _ALPHA_SWEEP, QMethod.CLOSED,
                    CutoffPolicy.vertex(), 0.004, 2.0),
    "fig5": _preset("fig5", "S", "alpha", _ALPHA_SWEEP, QMethod.EXACT,
                    CutoffPolicy.vertex(floor_n=1), 0.01, 10.0),
    "fig6": _preset("fig6", "C", "alpha", _ALPHA_SWEEP, QMethod.EXACT,
                    CutoffPolicy.explicit(1), 0.01, 10.0),
    "fig7": _preset("fig7", "chi", "alpha", _ALPHA_SWEEP, QMethod.EXACT,
                    CutoffPolicy.vertex(floor_n=1), 0.01, 10.0),
}

_DEFAULTS = dict(
    label="run", quantity="U", sweep_param="none", sweep_values=(),
    q_method=QMethod.EXACT, cutoff=CutoffPolicy.vertex(),
    t_min=0.1, t_max=10.0, t_steps=200,
    b0=2.5, alpha=1.0, ky=0.1, kz=0.0, mode=Mode.STANDARD,
    out="nbthermo_out", plots=False,
)

_FILE_KEYS = {
    "preset", "b0", "alpha", "ky", "kz", "t_range", "cutoff", "method",
    "mode", "out", "plots", "quantity",
}


# =============================================================================
# Configuration parsing
# =============================================================================

def _parse_float(text: str, field: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise UsageError(f"malformed numeric value for {field}: {text!r}") from None
    if not math.isfinite(v):
        raise UsageError(f"non-finite value for {field}: {text!r}")
    return v


def _parse_value_list(text: str, field: str) -> tuple[float, ...]:
    return tuple(_parse_float(part, field) for part in str(text).split(","))


def _parse_t_range(text: str) -> tuple[float, float, int]:
    parts = str(text).split(":")
    if len(parts) != 3:
        raise UsageError(f"t-range must be MIN:MAX:STEPS, got {text!r}")
    t_min = _parse_float(parts[0], "t-range min")
    t_max = _parse_float(parts[1], "t-range max")
    try:
        steps = int(parts[2])
    except ValueError:
        raise UsageError(f"malformed step count in t-range: {parts[2]!r}") from None
    return t_min, t_max, steps


def _parse_cutoff(text: str) -> CutoffPolicy:
    if str(text).lower() == "vertex":
        return CutoffPolicy.vertex()
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"cutoff must be 'vertex' or an integer, got {text!r}") from None
    if n < 0:
        raise UsageError(f"explicit cutoff must be >= 0, got {n}")
    return CutoffPolicy.explicit(n)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nbthermo",
        description="Thermodynamic sweeps for a charged particle in an "
                    "exponentially decaying magnetic field.",
    )
    p.add_argument("--preset", choices=sorted(PRESETS), help="figure preset (fig1..fig7)")
    p.add_argument("--b0", help="field amplitude; comma list sweeps it")
    p.add_argument("--alpha", help="field decay rate (> 0); comma list sweeps it")
    p.add_argument("--ky", help="transverse wavenumber")
    p.add_argument("--kz", help="free-direction wavenumber")
    p.add_argument("--t-range", dest="t_range", help="temperature grid MIN:MAX:STEPS")
    p.add_argument("--cutoff", help="'vertex' or an explicit level count N")
    p.add_argument("--method", choices=[m.value for m in QMethod], help="partition evaluator")
    p.add_argument("--mode", choices=[m.value for m in Mode], help="standard or paper")
    p.add_argument("--out", help="output directory")
    p.add_argument("--plots", action="store_true", default=None,
                   help="also render PNG figures")
    p.add_argument("--quantity", choices=sorted(QUANTITY_LABELS),
                   help="quantity drawn by the plot script")
    p.add_argument("--config", help="JSON config file (flags override file values)")
    return p


def parse_config(args: list[str], file: str | Path | None = None) -> RunConfig:
    """Resolve defaults <- preset <- config file <- flags into a RunConfig."""
    try:
        ns = _build_parser().parse_args(args)
    except SystemExit as exc:
        if exc.code not in (0, None):
            raise UsageError("unrecognized or malformed command-line flags") from None
        raise

    cfg = dict(_DEFAULTS)
    if ns.preset:
        cfg.update(PRESETS[ns.preset])

    file_path = file or ns.config
    if file_path:
        try:
            loaded = json.loads(Path(file_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config file {file_path}: {exc}") from None
        unknown = set(loaded) - _FILE_KEYS
        if unknown:
            raise UsageError(f"unknown config file keys: {sorted(unknown)}")
        if "preset" in loaded and not ns.preset:
            if loaded["preset"] not in PRESETS:
                raise UsageError(f"unknown preset in config file: {loaded['preset']!r}")
            cfg.update(PRESETS[loaded["preset"]])
        for key in ("b0", "alpha", "ky", "kz", "t_range", "cutoff", "method",
                    "mode", "out", "plots", "quantity"):
            if key in loaded:
                cfg[f"_file_{key}"] = loaded[key]

    def pick(flag_value, file_key):
        if flag_value is not None:
            return flag_value
        return cfg.pop(f"_file_{file_key}", None)

    b0_text = pick(ns.b0, "b0")
    if b0_text is not None:
        values = _parse_value_list(b0_text, "b0")
        if len(values) > 1:
            cfg.update(sweep_param="b0", sweep_values=values)
        else:
            cfg["b0"] = values[0]
            if cfg["sweep_param"] == "b0":
                cfg.update(sweep_param="none", sweep_values=())
    alpha_text = pick(ns.alpha, "alpha")
    if alpha_text is not None:
        values = _parse_value_list(alpha_text, "alpha")
        if any(v <= 0.0 for v in values):
            raise UsageError(f"alpha must be > 0, got {alpha_text!r}")
        if len(values) > 1:
            cfg.update(sweep_param="alpha", sweep_values=values)
        else:
            cfg["alpha"] = values[0]
            if cfg["sweep_param"] == "alpha":
                cfg.update(sweep_param="none", sweep_values=())
    if cfg["sweep_param"] == "b0" and cfg["sweep_param"] == "alpha":
        raise UsageError("cannot sweep b0 and alpha at the same time")

    ky_text = pick(ns.ky, "ky")
    if ky_text is not None:
        cfg["ky"] = _parse_float(str(ky_text), "ky")
    kz_text = pick(ns.kz, "kz")
    if kz_text is not None:
        cfg["kz"] = _parse_float(str(kz_text), "kz")
    t_text = pick(ns.t_range, "t_range")
    if t_text is not None:
        cfg["t_min"], cfg["t_max"], cfg["t_steps"] = _parse_t_range(str(t_text))
    cut_text = pick(ns.cutoff, "cutoff")
    if cut_text is not None:
        cfg["cutoff"] = _parse_cutoff(str(cut_text))
    method_text = pick(ns.method, "method")
    if method_text is not None:
        cfg["q_method"] = QMethod(str(method_text))
    mode_text = pick(ns.mode, "mode")
    if mode_text is not None:
        cfg["mode"] = Mode(str(mode_text))
    out_text = pick(ns.out, "out")
    if out_text is not None:
        cfg["out"] = str(out_text)
    plots_val = pick(ns.plots, "plots")
    if plots_val is not None:
        cfg["plots"] = bool(plots_val)
    q_text = pick(ns.quantity, "quantity")
    if q_text is not None:
        if q_text not in QUANTITY_LABELS:
            raise UsageError(f"unknown quantity {q_text!r}")
        cfg["quantity"] = str(q_text)
    if ns.preset:
        cfg["label"] = ns.preset

    # leftover _file_ keys were consumed by pick(); anything else is a bug
    cfg = {k: v for k, v in cfg.items() if not k.startswith("_file_")}

    try:
        system = PhysicalSystem.dimensionless(
            b0=float(cfg["b0"]), alpha=float(cfg["alpha"]),
            ky=float(cfg["ky"]), kz=float(cfg["kz"]),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return RunConfig(
        system=system,
        t_min=cfg["t_min"], t_max=cfg["t_max"], t_steps=int(cfg["t_steps"]),
        sweep_param=cfg["sweep_param"], sweep_values=tuple(cfg["sweep_values"]),
        q_method=cfg["q_method"], mode=cfg["mode"], cutoff=cfg["cutoff"],
        output_dir=Path(cfg["out"]), emit_plots=bool(cfg["plots"]),
        quantity=cfg["quantity"], label=cfg["label"],
    )


# =============================================================================
# Sweep execution
# =============================================================================

def _thread_budget() -> int:
    raw = os.environ.get("NBT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"NBT_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _series_system(cfg: RunConfig, value: float | None) -> PhysicalSystem:
    if value is None:
        return cfg.system
    field = {"b0": "b0", "alpha": "alpha"}[cfg.sweep_param]
    return dataclasses.replace(cfg.system, **{field: value})


def _evaluate_series(cfg: RunConfig, system: PhysicalSystem, t_grid: list[float],
                     n_cutoff: int, threads: int) -> list[ThermoPoint]:
    def one(t: float) -> ThermoPoint:
        return safe_point(system, t, n_cutoff, cfg.q_method, cfg.mode)

    if threads == 1 or len(t_grid) < 2:
        return [one(t) for t in t_grid]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(one, t_grid))  # map preserves grid order


def run_sweep(cfg: RunConfig) -> SweepOutput:
    """Evaluate the full table; per-point failures are recorded, not raised."""
    threads = _thread_budget()
    t_grid = [float(t) for t in np.linspace(cfg.t_min, cfg.t_max, cfg.t_steps)]
    values: list[float | None]
    values = list(cfg.sweep_values) if cfg.sweep_param != "none" else [None]
    series = []
    for value in values:
        system = _series_system(cfg, value)
        n_cutoff = level_cutoff(system, cfg.cutoff)
        if value is None:
            label = cfg.label
        else:
            label = f"{cfg.label}_{cfg.sweep_param}_{value:g}"
        series.append(SweepSeries(
            label=label, param_value=value, n_cutoff=n_cutoff,
            points=_evaluate_series(cfg, system, t_grid, n_cutoff, threads),
        ))
    return SweepOutput(config=cfg, t_grid=t_grid, series=series)


def all_points_failed(out: SweepOutput) -> bool:
    return all(pt.error is not None for s in out.series for pt in s.points)


# =============================================================================
# Artifact emission
# =============================================================================

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _config_record(cfg: RunConfig) -> dict:
    rec = dataclasses.asdict(cfg)
    rec["system"] = dataclasses.asdict(cfg.system)
    rec["q_method"] = cfg.q_method.value
    rec["mode"] = cfg.mode.value
    rec["output_dir"] = str(cfg.output_dir)
    rec["cutoff"] = {"kind": cfg.cutoff.kind, "n": cfg.cutoff.n, "floor_n": cfg.cutoff.floor_n}
    rec["sweep_values"] = list(cfg.sweep_values)
    return rec


def emit_csv(out: SweepOutput, directory: str | Path) -> list[Path]:
    """One CSV per swept value plus a JSON-lines manifest with sha256 hashes."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cfg_record = _config_record(out.config)
    paths = []
    manifest_rows = []
    for s in out.series:
        path = directory / f"{s.label}.csv"
        with path.open("w", newline="") as fh:
            fh.write(",".join(CSV_HEADER) + "\n")
            for pt in s.points:
                fh.write(",".join([
                    _fmt(pt.temperature), _fmt(pt.beta), _fmt(pt.u), _fmt(pt.c_heat),
                    _fmt(pt.f), _fmt(pt.s), _fmt(pt.m), _fmt(pt.chi),
                    pt.mode.value, pt.q_method.value,
                ]) + "\n")
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        errors = [
            {"row": i, "message": pt.error}
            for i, pt in enumerate(s.points) if pt.error is not None
        ]
        manifest_rows.append({
            "path": path.name,
            "sha256": digest,
            "config": {**cfg_record, "series": s.label,
                       "param_value": s.param_value, "n_cutoff": s.n_cutoff},
            "errors": errors,
        })
        paths.append(path)
    manifest = directory / f"{out.config.label}_manifest.jsonl"
    with manifest.open("w") as fh:
        for row in manifest_rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    paths.append(manifest)
    return paths


def emit_plot_script(out: SweepOutput, directory: str | Path) -> Path:
    """Gnuplot-dialect script drawing the requested quantity vs T."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cfg = out.config
    col = _QUANTITY_COLUMN[cfg.quantity]
    lines = [
        f"# {cfg.label}: {QUANTITY_LABELS[cfg.quantity]} vs temperature",
        "set datafile separator ','",
        "set xlabel 'T'",
        f"set ylabel '{QUANTITY_LABELS[cfg.quantity]}'",
        "set key top right",
    ]
    plot_parts = []
    for s in out.series:
        csv_name = f"{s.label}.csv"
        if not (directory / csv_name).exists():
            continue
        if s.param_value is None:
            title = cfg.label
        else:
            title = f"{cfg.sweep_param}={s.param_value:g}"
        plot_parts.append(
            f"'{csv_name}' using 1:{col} every ::1 with lines title '{title}'"
        )
    if plot_parts:
        lines.append("plot \\")
        lines.append(", \\\n".join("    " + p for p in plot_parts))
    else:
        lines.append("# warning: no data series were emitted for this run")
    path = directory / f"{cfg.label}.gp"
    path.write_text("\n".join(lines) + "\n")
    return path


def render_figures(out: SweepOutput, directory: str | Path) -> list[Path]:
    """Render the requested quantity to PNG next to the CSVs (matplotlib Agg)."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    cfg = out.config
    attr = {"U": "u", "C": "c_heat", "F": "f", "S": "s", "M": "m", "chi": "chi"}[cfg.quantity]

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    for s in out.series:
        ys = [getattr(pt, attr) for pt in s.points]
        if s.param_value is None:
            title = cfg.label
        else:
            title = f"{cfg.sweep_param} = {s.param_value:g}"
        ax.plot(out.t_grid, ys, label=title)
    ax.set_xlabel("T")
    ax.set_ylabel(QUANTITY_LABELS[cfg.quantity])
    ax.legend(frameon=False)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    path = directory / f"{cfg.label}.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def main(argv: list[str] | None = None) -> int:
    argv = list(_sys.argv[1:]) if argv is None else list(argv)
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 2
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)

    out = run_sweep(cfg)
    paths = emit_csv(out, cfg.output_dir)
    script = emit_plot_script(out, cfg.output_dir)
    paths.append(script)
    if cfg.emit_plots:
        paths.extend(render_figures(out, cfg.output_dir))

    n_failed = sum(1 for s in out.series for pt in s.points if pt.error is not None)
    n_total = sum(len(s.points) for s in out.series)
    for p in paths:
        print(p)
    if n_failed:
        print(f"warning: {n_failed}/{n_total} grid points failed "
              f"(see manifest errors)", file=_sys.stderr)
    if all_points_failed(out):
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
