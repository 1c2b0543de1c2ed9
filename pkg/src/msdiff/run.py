"""Run orchestration and bit-stable file output.

A run integrates the selected model from t=0 to t_end, records the states at
the configured snapshot times (matched by step index, so the reported times
are exactly the requested ones) and collects a diagnostic trace.  Outputs per
run are two CSV files, nodes.csv (t,x,species,n,P,p_total) and fluxes.csv
(t,x_half,species,J), with every float printed to 17 significant digits, plus
summary.json with the diagnostics; identical configs produce bit-identical
files.  If a run aborts (instability, singular system), whatever snapshots
exist are flushed and the summary carries "complete": false with the error.
"""

import json
import os
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .classical import ms_step
from .config import SimConfig
from .diagnostics import (
    DiagnosticRecord,
    DiagnosticTrace,
    cfl_number,
    compare_runs,
    equilibrium_distance,
    total_mass,
)
from .errors import ConfigurationError, MsdiffError
from .grid import GridSpec, MixtureState, build_grid, initial_state
from .higher_order import deviator_residual, homs_step, total_pressure
from .mixture import MixtureSpec

__all__ = [
    "CflWarning",
    "RunReport",
    "run",
    "CompareReport",
    "compare",
    "SweepReport",
    "sweep_gamma",
    "params",
]


class CflWarning(UserWarning):
    """The explicit scheme is being run at or beyond its stability indicator."""


@dataclass
class RunReport:
    """Everything a finished (or aborted) run produced."""

    model: str
    mixture: MixtureSpec
    grid: GridSpec
    snapshot_times: list
    snapshots: list
    trace: DiagnosticTrace
    cfl: float
    cfl_flagged: bool
    n_inf: np.ndarray
    complete: bool = True
    error: str = None
    config: SimConfig = None


def _record_diagnostics(state, spec, grid, n_inf, cfl, time, model):
    linf, l2 = equilibrium_distance(state, n_inf, grid)
    node_sums = state.n.sum(axis=0)
    record = DiagnosticRecord(
        time=time,
        mass=total_mass(state, grid),
        sum_deviation_max=float(np.abs(node_sums - spec.n_ref).max()),
        linf_to_equilibrium=linf,
        l2_to_equilibrium=l2,
        deviator_residual_max=0.0,
        deviator_sum_gradient_max=0.0,
        cfl=cfl,
    )
    if model == "homs":
        record.deviator_residual_max = deviator_residual(state.n, state.P, spec)
        record.deviator_sum_gradient_max = float(
            np.abs(np.diff(state.P.sum(axis=0))).max() / grid.dx
        )
    return record


def run(config: SimConfig, out_dir=None, model=None) -> RunReport:
    """Integrate the configured model and return (and optionally write) the report.

    A flagged CFL number is a warning by default, an abort under strict_cfl.
    On solver or positivity failure the partial report is flushed with an
    explicit incomplete marker before the error propagates.
    """
    model = model or config.model
    spec = config.mixture_spec()
    grid = build_grid(config.x_min, config.x_max, config.dx)
    cfl, flagged = cfl_number(spec, config.dt, grid.dx)
    if flagged:
        message = (f"CFL number {cfl:.5f} exceeds the stability limit 0.5; "
                   f"the explicit scheme may be unstable")
        if config.strict_cfl:
            raise ConfigurationError(message + " (strict_cfl is set)")
        warnings.warn(message, CflWarning, stacklevel=2)

    state = initial_state(
        grid, config.initial_condition, spec, model=model,
        initial_deviator=config.initial_deviator, jump_rule=config.jump_rule,
        singular_tol=config.singular_tol,
    )
    step = ms_step if model == "ms" else homs_step

    # the asymptotic state: conserved per-species mass spread uniformly
    n_inf = total_mass(state, grid) / (grid.x_max - grid.x_min)

    snapshot_steps = config.snapshot_steps()
    wanted = dict(zip(snapshot_steps, config.snapshot_times))
    report = RunReport(
        model=model, mixture=spec, grid=grid,
        snapshot_times=[], snapshots=[], trace=DiagnosticTrace(),
        cfl=cfl, cfl_flagged=flagged, n_inf=n_inf, config=config,
    )

    def take_snapshot(step_index, current):
        t_req = wanted[step_index]
        snap = MixtureState(time=t_req, n=current.n.copy(),
                            J=current.J.copy(), P=current.P.copy())
        report.snapshots.append(snap)
        report.snapshot_times.append(t_req)
        report.trace.append(
            _record_diagnostics(snap, spec, grid, n_inf, cfl, t_req, model)
        )

    if 0 in wanted:
        take_snapshot(0, state)
    try:
        for k in range(1, config.n_steps() + 1):
            state = step(state, spec, grid, config.dt,
                         singular_tol=config.singular_tol,
                         positivity_tol=config.positivity_tol)
            if k in wanted:
                take_snapshot(k, state)
    except MsdiffError as exc:
        report.complete = False
        report.error = str(exc)
        if out_dir or config.output_dir:
            write_run_outputs(report, out_dir or config.output_dir)
        raise

    if out_dir or config.output_dir:
        write_run_outputs(report, out_dir or config.output_dir)
    return report


@dataclass
class CompareReport:
    """Classical and higher-order runs on one config, with per-snapshot metrics."""

    run_ms: RunReport
    run_homs: RunReport
    metrics: list = field(default_factory=list)


def compare(config: SimConfig, out_dir=None) -> CompareReport:
    """Run both models on identical grid/schedule and collect their differences."""
    report_ms = run(config, out_dir=None, model="ms")
    report_homs = run(config, out_dir=None, model="homs")
    metrics = [compare_runs(report_ms, report_homs, t) for t in report_ms.snapshot_times]
    result = CompareReport(run_ms=report_ms, run_homs=report_homs, metrics=metrics)
    if out_dir or config.output_dir:
        write_compare_outputs(result, out_dir or config.output_dir)
    return result


@dataclass
class SweepReport:
    """One classical baseline plus one higher-order run per gamma value."""

    baseline: RunReport
    gammas: list
    runs: list
    metrics: list  # metrics[k][s]: SnapshotComparison for gamma k, snapshot s


def sweep_gamma(config: SimConfig, gamma_list=None, out_dir=None) -> SweepReport:
    """Higher-order runs across gamma values against one classical baseline."""
    gammas = list(config.sweep_gammas if gamma_list is None else gamma_list)
    if not gammas:
        raise ConfigurationError("gamma sweep needs at least one gamma value")
    baseline = run(config, out_dir=None, model="ms")
    runs, metrics = [], []
    for g in gammas:
        cfg_g = replace(config, gamma_override=g, output_dir=None)
        report = run(cfg_g, out_dir=None, model="homs")
        runs.append(report)
        metrics.append([compare_runs(baseline, report, t)
                        for t in baseline.snapshot_times])
    result = SweepReport(baseline=baseline, gammas=gammas, runs=runs, metrics=metrics)
    if out_dir or config.output_dir:
        write_sweep_outputs(result, out_dir or config.output_dir)
    return result


def params(config: SimConfig) -> str:
    """Dimensionless parameter table (6 significant figures) as printable text."""
    spec = config.mixture_spec()
    grid = build_grid(config.x_min, config.x_max, config.dx)
    cfl, flagged = cfl_number(spec, config.dt, grid.dx)
    s = spec.n_species
    lines = ["dimensionless mixture parameters", ""]
    lines.append("species  name  mass m_i  self-diffusivity D_ii  ||b_ii||")
    for i in range(s):
        lines.append(
            f"{i + 1:7d}  {spec.species_names[i]:>4}  {spec.masses[i]:<9.6g} "
            f"{spec.diffusivities[i, i]:<21.6g} {spec.cross_section_norms[i, i]:.6g}"
        )
    lines.append("")
    lines.append("pair   D_ij      ||b_ij||  gamma_ij")
    for i in range(s):
        for j in range(i + 1, s):
            lines.append(
                f"{i + 1}-{j + 1}    {spec.diffusivities[i, j]:<9.6g} "
                f"{spec.cross_section_norms[i, j]:<9.6g} {spec.gamma[i, j]:.6g}"
            )
    lines.append("")
    lines.append(f"kappa*T = {spec.kappa * spec.temperature:.6g}   "
                 f"n_ref = {spec.n_ref:.6g}")
    lines.append(
        f"CFL number = {cfl:.6g} ({'flagged: at/over the 0.5 limit' if flagged else 'ok'})"
    )
    return "\n".join(lines)


# ----------------------------------------------------------------------------
# file output


def _fmt(value):
    return f"{float(value):.17g}"


def write_run_outputs(report: RunReport, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    spec = report.mixture
    grid = report.grid
    with open(os.path.join(out_dir, "nodes.csv"), "w", encoding="utf-8") as fh:
        fh.write("t,x,species,n,P,p_total\n")
        for snap in report.snapshots:
            p_tot = total_pressure(snap.n, snap.P, spec.kappa, spec.temperature)
            for i in range(spec.n_species):
                for l, x in enumerate(grid.node_positions):
                    fh.write(
                        f"{_fmt(snap.time)},{_fmt(x)},{i + 1},"
                        f"{_fmt(snap.n[i, l])},{_fmt(snap.P[i, l])},"
                        f"{_fmt(p_tot[i, l])}\n"
                    )
    with open(os.path.join(out_dir, "fluxes.csv"), "w", encoding="utf-8") as fh:
        fh.write("t,x_half,species,J\n")
        for snap in report.snapshots:
            for i in range(spec.n_species):
                for h, x in enumerate(grid.half_positions):
                    fh.write(
                        f"{_fmt(snap.time)},{_fmt(x)},{i + 1},{_fmt(snap.J[i, h])}\n"
                    )
    summary = {
        "model": report.model,
        "complete": report.complete,
        "error": report.error,
        "cfl": report.cfl,
        "cfl_flagged": report.cfl_flagged,
        "n_inf": [float(v) for v in report.n_inf],
        "species": list(spec.species_names),
        "snapshot_times": [float(t) for t in report.snapshot_times],
        "trace": report.trace.to_list(),
    }
    _write_json(os.path.join(out_dir, "summary.json"), summary)


def _comparison_rows(metric):
    rows = []
    for i in range(metric.n_linf.size):
        rows.append({
            "time": metric.time,
            "species": i + 1,
            "n_linf": float(metric.n_linf[i]),
            "n_l2": float(metric.n_l2[i]),
            "j_linf": float(metric.j_linf[i]),
            "j_l2": float(metric.j_l2[i]),
            "p_total_linf": float(metric.p_total_linf[i]),
            "p_total_l2": float(metric.p_total_l2[i]),
        })
    return rows


def write_compare_outputs(result: CompareReport, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_run_outputs(result.run_ms, os.path.join(out_dir, "ms"))
    write_run_outputs(result.run_homs, os.path.join(out_dir, "homs"))
    spec = result.run_ms.mixture
    grid = result.run_ms.grid
    with open(os.path.join(out_dir, "comparison.csv"), "w", encoding="utf-8") as fh:
        fh.write("t,x,species,n_ms,n_homs,p_total_ms,p_total_homs\n")
        for sa, sb in zip(result.run_ms.snapshots, result.run_homs.snapshots):
            pa = total_pressure(sa.n, sa.P, spec.kappa, spec.temperature)
            pb = total_pressure(sb.n, sb.P, spec.kappa, spec.temperature)
            for i in range(spec.n_species):
                for l, x in enumerate(grid.node_positions):
                    fh.write(
                        f"{_fmt(sa.time)},{_fmt(x)},{i + 1},"
                        f"{_fmt(sa.n[i, l])},{_fmt(sb.n[i, l])},"
                        f"{_fmt(pa[i, l])},{_fmt(pb[i, l])}\n"
                    )
    summary = {
        "snapshot_times": [float(t) for t in result.run_ms.snapshot_times],
        "metrics": [row for m in result.metrics for row in _comparison_rows(m)],
    }
    _write_json(os.path.join(out_dir, "comparison_summary.json"), summary)


def write_sweep_outputs(result: SweepReport, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_run_outputs(result.baseline, os.path.join(out_dir, "ms_baseline"))
    rows = []
    for g, report, metrics in zip(result.gammas, result.runs, result.metrics):
        write_run_outputs(report, os.path.join(out_dir, f"homs_gamma_{g:g}"))
        for metric in metrics:
            rows.append((g, metric.time, float(metric.n_linf.max()),
                         float(metric.n_l2.max())))
    with open(os.path.join(out_dir, "sweep.csv"), "w", encoding="utf-8") as fh:
        fh.write("gamma,t,n_gap_linf,n_gap_l2\n")
        for g, t, linf, l2 in rows:
            fh.write(f"{_fmt(g)},{_fmt(t)},{_fmt(linf)},{_fmt(l2)}\n")
    summary = {
        "gammas": [float(g) for g in result.gammas],
        "rows": [
            {"gamma": g, "time": t, "n_gap_linf": linf, "n_gap_l2": l2}
            for g, t, linf, l2 in rows
        ],
    }
    _write_json(os.path.join(out_dir, "sweep_summary.json"), summary)


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
