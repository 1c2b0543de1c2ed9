"""Run diagnostics: conservation, stability, equilibrium and model comparison.

Masses are trapezoidal quadratures of the node densities (boundary nodes
carry half weight), which is exactly the quantity the conservative update
stencil preserves under the closed-wall boundary rule.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ComparisonError, InvalidParameterError
from .grid import GridSpec, MixtureState
from .higher_order import total_pressure
from .mixture import MixtureSpec

__all__ = [
    "DiagnosticRecord",
    "DiagnosticTrace",
    "cfl_number",
    "total_mass",
    "equilibrium_distance",
    "UphillResult",
    "uphill_metric",
    "SnapshotComparison",
    "compare_runs",
]

CFL_LIMIT = 0.5


def cfl_number(spec: MixtureSpec, dt, dx):
    """Explicit-scheme stability indicator max_D D*dt/dx^2 and its >0.5 flag.

    The max runs over every diffusivity entry, binary and self.
    """
    if dt <= 0.0 or dx <= 0.0:
        raise InvalidParameterError(f"dt and dx must be positive, got dt={dt}, dx={dx}")
    value = float(spec.diffusivities.max() * dt / dx**2)
    return value, value > CFL_LIMIT


def _trapezoid_weights(grid: GridSpec):
    w = np.full(grid.n_nodes, grid.dx)
    w[0] = w[-1] = 0.5 * grid.dx
    return w


def total_mass(state: MixtureState, grid: GridSpec):
    """Per-species trapezoidal mass over the domain."""
    return state.n @ _trapezoid_weights(grid)


def equilibrium_distance(state: MixtureState, n_inf, grid: GridSpec = None):
    """Per-species (L_inf, L_2) distance of the densities to a constant state.

    The L_2 norm is the trapezoid-weighted root integral when a grid is given,
    otherwise the plain root-mean-square over nodes scaled by nothing; all
    callers in this package pass the grid.
    """
    n_inf = np.asarray(n_inf, dtype=float)
    dev = state.n - n_inf[:, None]
    linf = np.abs(dev).max(axis=1)
    if grid is not None:
        l2 = np.sqrt((dev**2) @ _trapezoid_weights(grid))
    else:
        l2 = np.sqrt((dev**2).mean(axis=1))
    return linf, l2


@dataclass
class DiagnosticRecord:
    """One snapshot's worth of run diagnostics."""

    time: float
    mass: np.ndarray
    sum_deviation_max: float
    linf_to_equilibrium: np.ndarray
    l2_to_equilibrium: np.ndarray
    deviator_residual_max: float
    deviator_sum_gradient_max: float
    cfl: float

    def to_dict(self):
        return {
            "time": self.time,
            "mass": [float(v) for v in self.mass],
            "sum_deviation_max": self.sum_deviation_max,
            "linf_to_equilibrium": [float(v) for v in self.linf_to_equilibrium],
            "l2_to_equilibrium": [float(v) for v in self.l2_to_equilibrium],
            "deviator_residual_max": self.deviator_residual_max,
            "deviator_sum_gradient_max": self.deviator_sum_gradient_max,
            "cfl": self.cfl,
        }


@dataclass
class DiagnosticTrace:
    """Time-ordered diagnostic records; times must be strictly increasing."""

    records: list = field(default_factory=list)

    def append(self, record: DiagnosticRecord):
        if self.records and record.time <= self.records[-1].time:
            raise InvalidParameterError(
                f"diagnostic times must increase: {record.time} after "
                f"{self.records[-1].time}"
            )
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def to_list(self):
        return [r.to_dict() for r in self.records]


@dataclass
class UphillResult:
    """Largest transient excursion of one species from its initial level."""

    max_deviation: float
    time: float
    profile_min: float
    profile_max: float


def uphill_metric(history, species_index, initial_value) -> UphillResult:
    """Scan snapshots for the largest |n_i - initial_value| excursion.

    history is a sequence of MixtureState snapshots.  Returns the maximal
    deviation, the snapshot time where it occurs, and that snapshot's signed
    profile extrema, which evidence non-uniform transient growth when they
    straddle the initial value.
    """
    history = list(history)
    if not history:
        raise InvalidParameterError("uphill_metric needs at least one snapshot")
    best = None
    for snap in history:
        profile = snap.n[species_index]
        dev = float(np.abs(profile - initial_value).max())
        if best is None or dev > best.max_deviation:
            best = UphillResult(
                max_deviation=dev,
                time=snap.time,
                profile_min=float(profile.min()),
                profile_max=float(profile.max()),
            )
    return best


@dataclass
class SnapshotComparison:
    """Per-species field differences between two runs at one snapshot time."""

    time: float
    n_linf: np.ndarray
    n_l2: np.ndarray
    j_linf: np.ndarray
    j_l2: np.ndarray
    p_total_linf: np.ndarray
    p_total_l2: np.ndarray


def _nearest_snapshot(report, t):
    times = np.asarray(report.snapshot_times, dtype=float)
    idx = int(np.argmin(np.abs(times - t)))
    exact = np.flatnonzero(times == t)
    if exact.size:
        idx = int(exact[0])
    return idx


def compare_runs(report_a, report_b, t) -> SnapshotComparison:
    """Field differences of two runs at the snapshot nearest t.

    Both runs must share the grid and the snapshot schedule; densities and
    total pressures are compared nodewise, fluxes half-nodewise.
    """
    ga, gb = report_a.grid, report_b.grid
    if (ga.n_intervals != gb.n_intervals or ga.x_min != gb.x_min
            or ga.x_max != gb.x_max or ga.dx != gb.dx):
        raise ComparisonError("runs are on different grids")
    if list(report_a.snapshot_times) != list(report_b.snapshot_times):
        raise ComparisonError("runs have different snapshot schedules")
    idx = _nearest_snapshot(report_a, t)
    sa, sb = report_a.snapshots[idx], report_b.snapshots[idx]

    def norms(da):
        return np.abs(da).max(axis=1), np.sqrt((da**2).mean(axis=1))

    spec_a, spec_b = report_a.mixture, report_b.mixture
    pa = total_pressure(sa.n, sa.P, spec_a.kappa, spec_a.temperature)
    pb = total_pressure(sb.n, sb.P, spec_b.kappa, spec_b.temperature)
    n_linf, n_l2 = norms(sa.n - sb.n)
    j_linf, j_l2 = norms(sa.J - sb.J)
    p_linf, p_l2 = norms(pa - pb)
    return SnapshotComparison(
        time=report_a.snapshot_times[idx],
        n_linf=n_linf, n_l2=n_l2,
        j_linf=j_linf, j_l2=j_l2,
        p_total_linf=p_linf, p_total_l2=p_l2,
    )
