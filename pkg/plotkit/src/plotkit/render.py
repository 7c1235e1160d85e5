"""Figure rendering from zetalab CSV files.

Four plot kinds are supported:

* ``dist_overlay``  -- empirical tail points with error bars against the
  predicted curve exp(-2 e^(tau-C-1)/tau).
* ``moment_discrepancy`` -- measured discrepancy values against the
  admissible bound, one input CSV per exponent.
* ``hunt_scatter``  -- located ordinates against the classical baseline and
  the conjectured maximum.
* ``char_overlay``  -- character tail proportions against the same
  predicted curve.

The theoretical curves use the constant C recorded in the run manifest
(written by the zetalab CLI next to each CSV); it is never re-derived here,
so figures reflect exactly the run that produced the data.  Every figure
carries the run's master seed in a caption.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

EXP_GAMMA = 1.78107241799019798523650410311  # exp(Euler-Mascheroni constant)

KINDS = ("dist_overlay", "moment_discrepancy", "hunt_scatter", "char_overlay")

_FIGSIZE = (8.0, 5.0)
_DPI = 110


class SchemaError(ValueError):
    """An input CSV lacks a required column."""


class EmptyDataError(ValueError):
    """An input CSV carries a header but no rows."""


@dataclass
class PlotSpec:
    inputs: list
    kind: str
    out: str
    log_y: bool = False
    manifest: str | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown plot kind {self.kind!r}; choose from {KINDS}")
        if not self.inputs:
            raise ValueError("need at least one input CSV")
        for path in self.inputs:
            if not Path(path).exists():
                raise FileNotFoundError(f"input CSV not found: {path}")


def read_csv(path) -> dict:
    """Columns of one CSV as numpy arrays (strings stay strings)."""
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise EmptyDataError(f"{path}: no header row")
        rows = list(reader)
    if not rows:
        raise EmptyDataError(f"{path}: header only, no data rows")
    out = {}
    for name in reader.fieldnames:
        values = [r[name] for r in rows]
        try:
            out[name] = np.array([float(v) for v in values])
        except ValueError:
            out[name] = np.array(values)
    return out


def require_columns(table: dict, names, path) -> None:
    missing = [n for n in names if n not in table]
    if missing:
        raise SchemaError(f"{path}: missing column(s) {', '.join(missing)}")


def load_manifest(spec: PlotSpec) -> dict:
    """The run manifest next to the first CSV, or the explicit --manifest."""
    if spec.manifest is not None:
        return json.loads(Path(spec.manifest).read_text())
    first = Path(spec.inputs[0])
    candidates = sorted(first.parent.glob(f"{first.stem}_manifest.json"))
    if not candidates:
        raise FileNotFoundError(
            f"no manifest found next to {first}; pass --manifest explicitly"
        )
    return json.loads(candidates[0].read_text())


def _constant_c(manifest: dict) -> float:
    try:
        return float(manifest["constants"]["C"])
    except KeyError as exc:
        raise SchemaError("manifest records no constant C; re-run the producing command") from exc


def predicted_tail(tau: np.ndarray, c: float) -> np.ndarray:
    return np.exp(-2.0 * np.exp(tau - c - 1.0) / tau)


def _caption(fig, manifest: dict) -> None:
    fig.text(0.01, 0.01, f"seed={manifest.get('master_seed', 'unrecorded')}", fontsize=8, color="0.35")


def _overlay_axes(ax, table, c, label_prefix):
    ax.errorbar(
        table["tau"], table["phi"], yerr=table["phi_stderr"],
        fmt="o", ms=4, capsize=2, label=f"{label_prefix} upper tail",
    )
    ax.errorbar(
        table["tau"], table["psi"], yerr=table["psi_stderr"],
        fmt="s", ms=4, capsize=2, label=f"{label_prefix} lower tail",
    )
    taus = np.linspace(max(1e-6, float(np.min(table["tau"]))), float(np.max(table["tau"])), 200)
    ax.plot(taus, predicted_tail(taus, c), "k--", label="predicted exp(-2e^(tau-C-1)/tau)")
    ax.set_xlabel("tau")
    ax.set_ylabel("tail probability")


def _build_dist_overlay(spec, manifest):
    table = read_csv(spec.inputs[0])
    require_columns(table, ("tau", "phi", "phi_stderr", "psi", "psi_stderr"), spec.inputs[0])
    c = _constant_c(manifest)
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    _overlay_axes(ax, table, c, "sampled")
    ax.set_title("Tail probabilities vs prediction")
    info = {"errorbar_sets": 2, "overlay": True, "points": len(table["tau"])}
    return fig, ax, info


def _build_char_overlay(spec, manifest):
    table = read_csv(spec.inputs[0])
    require_columns(table, ("tau", "phi", "phi_stderr", "psi", "psi_stderr"), spec.inputs[0])
    c = _constant_c(manifest)
    q = manifest.get("parameters", {}).get("q", "?")
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    _overlay_axes(ax, table, c, "characters")
    ax.set_title(f"Character tail proportions mod {q} vs prediction")
    info = {"errorbar_sets": 2, "overlay": True, "points": len(table["tau"])}
    return fig, ax, info


def _build_moment_discrepancy(spec, manifest):
    ks, values, bounds = [], [], []
    for path in spec.inputs:
        table = read_csv(path)
        require_columns(table, ("k", "value"), path)
        for i in range(len(table["k"])):
            ks.append(float(table["k"][i]))
            values.append(abs(float(table["value"][i])))
            if "bound_shape" in table:
                bounds.append(5.0 * float(table["bound_shape"][i]))
    order = np.argsort(ks)
    ks = np.array(ks)[order]
    values = np.array(values)[order]
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.plot(ks, values, "o-", label="|discrepancy|")
    if bounds:
        ax.plot(ks, np.array(bounds)[order], "k--", label="admissible bound")
    ax.set_xlabel("k")
    ax.set_ylabel("|discrepancy|")
    ax.set_title("Moment discrepancy against its admissible size")
    info = {"errorbar_sets": 0, "overlay": bool(bounds), "points": len(ks)}
    return fig, ax, info


def _build_hunt_scatter(spec, manifest):
    table = read_csv(spec.inputs[0])
    require_columns(table, ("t", "zeta_abs", "score"), spec.inputs[0])
    c = _constant_c(manifest)
    T = float(manifest.get("parameters", {}).get("T", float(np.max(table["t"]))))
    l2 = math.log(math.log(T))
    baseline = EXP_GAMMA * l2
    predicted = EXP_GAMMA * (l2 + math.log(l2) + c + 1.0 - math.log(2.0))
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.scatter(table["t"], table["zeta_abs"], s=14, label="candidates")
    ax.axhline(baseline, color="k", ls="--", label="classical baseline")
    ax.axhline(predicted, color="r", ls=":", label="conjectured maximum size")
    ax.set_xscale("log")
    ax.set_xlabel("ordinate t")
    ax.set_ylabel("|zeta(1+it)|")
    ax.set_title("Hunt candidates vs reference sizes")
    info = {"errorbar_sets": 0, "overlay": True, "points": len(table["t"])}
    return fig, ax, info


_BUILDERS = {
    "dist_overlay": _build_dist_overlay,
    "char_overlay": _build_char_overlay,
    "moment_discrepancy": _build_moment_discrepancy,
    "hunt_scatter": _build_hunt_scatter,
}


def build_figure(spec: PlotSpec):
    """Build the matplotlib figure for a spec; returns (figure, info dict)."""
    manifest = load_manifest(spec)
    fig, ax, info = _BUILDERS[spec.kind](spec, manifest)
    if spec.log_y:
        ax.set_yscale("log")
    ax.legend(loc="best", fontsize=8)
    _caption(fig, manifest)
    info["seed_caption"] = True
    return fig, info


def render(spec: PlotSpec) -> Path:
    """Render the figure to ``spec.out`` and return the written path."""
    fig, _info = build_figure(spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out)
    plt.close(fig)
    return out
