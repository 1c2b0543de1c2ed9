"""Staggered dual grid, mixture state, and piecewise-constant initial data.

Number densities and deviatoric pressures live on the nodes x_l = x_min + l*dx
(l = 0..N); diffusive fluxes live on the half-nodes x_{l+1/2} (l = 0..N-1).
The domain is closed: ghost fluxes outside both walls are identically zero,
and the boundary nodes are updated as half-width finite-volume cells so that
the trapezoidal mass of every species is conserved exactly.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .mixture import MixtureSpec

__all__ = [
    "GridSpec",
    "MixtureState",
    "InitialCondition",
    "build_grid",
    "initial_state",
    "midpoint_densities",
]

_DIVISIBILITY_RTOL = 1e-9
_IC_SUM_ATOL = 1e-12


@dataclass
class GridSpec:
    """Uniform 1D staggered grid with N intervals (N+1 nodes, N half-nodes)."""

    x_min: float
    x_max: float
    dx: float
    n_intervals: int
    node_positions: np.ndarray
    half_positions: np.ndarray

    @property
    def n_nodes(self):
        return self.n_intervals + 1


def build_grid(x_min, x_max, dx) -> GridSpec:
    """Lay out the dual grid; dx must divide the interval (relative 1e-9)."""
    if not x_min < x_max:
        raise ConfigurationError(f"empty domain: x_min={x_min} >= x_max={x_max}")
    if dx <= 0.0:
        raise ConfigurationError(f"dx must be positive, got {dx}")
    span = x_max - x_min
    n = int(round(span / dx))
    residual = abs(n * dx - span)
    if residual > _DIVISIBILITY_RTOL * span:
        raise ConfigurationError(
            f"dx={dx} does not divide the domain [{x_min}, {x_max}]: "
            f"nearest interval count {n} leaves residual {residual:.3e}"
        )
    if n < 2:
        raise ConfigurationError(f"grid needs at least 2 intervals, got {n}")
    nodes = x_min + dx * np.arange(n + 1)
    halves = x_min + dx * (np.arange(n) + 0.5)
    return GridSpec(x_min, x_max, dx, n, nodes, halves)


@dataclass
class MixtureState:
    """Simulation state at one time level; treated as an immutable value.

    n: (S, N+1) number densities at nodes.
    J: (S, N) diffusive fluxes at half-nodes; the fluxes that produced the
       current densities (identically zero at t=0).
    P: (S, N+1) dimensionless deviatoric pressures at nodes; identically zero
       under the classical model.
    """

    time: float
    n: np.ndarray
    J: np.ndarray
    P: np.ndarray

    def __post_init__(self):
        s, nodes = self.n.shape
        if self.J.shape != (s, nodes - 1):
            raise ConfigurationError(
                f"flux array shape {self.J.shape} does not match densities {self.n.shape}"
            )
        if self.P.shape != (s, nodes):
            raise ConfigurationError(
                f"deviator array shape {self.P.shape} does not match densities {self.n.shape}"
            )

    @property
    def n_species(self):
        return self.n.shape[0]


@dataclass
class InitialCondition:
    """Per-species piecewise-constant profiles.

    segments[i] is a list of (x_lo, x_hi, value) triples covering the domain
    contiguously.  At every node the species values must sum to n_ref.
    """

    segments: list = field(default_factory=list)

    @property
    def n_species(self):
        return len(self.segments)

    def mirrored(self, x_min, x_max):
        """The condition reflected in x with the species order reversed."""
        flipped = []
        for segs in reversed(self.segments):
            flipped.append(
                [(x_min + x_max - hi, x_min + x_max - lo, v) for lo, hi, v in reversed(segs)]
            )
        return InitialCondition(flipped)


def _validate_coverage(segs, x_min, x_max, species_idx):
    tol = 1e-12 * max(1.0, abs(x_max - x_min))
    if not segs:
        raise ConfigurationError(f"species {species_idx + 1}: no segments given")
    segs = sorted(segs, key=lambda t: t[0])
    if abs(segs[0][0] - x_min) > tol or abs(segs[-1][1] - x_max) > tol:
        raise ConfigurationError(
            f"species {species_idx + 1}: segments cover [{segs[0][0]}, {segs[-1][1]}], "
            f"domain is [{x_min}, {x_max}]"
        )
    for (lo, hi, _), (lo2, _, _) in zip(segs, segs[1:]):
        if hi - lo <= 0:
            raise ConfigurationError(f"species {species_idx + 1}: empty segment at {lo}")
        if abs(lo2 - hi) > tol:
            raise ConfigurationError(
                f"species {species_idx + 1}: gap or overlap between segments at x={hi}"
            )
    if segs[-1][1] - segs[-1][0] <= 0:
        raise ConfigurationError(f"species {species_idx + 1}: empty segment at {segs[-1][0]}")
    return segs


def _sample_species(segs, nodes, jump_rule):
    """Sample one species' piecewise-constant profile at the node positions.

    Interior nodes take the value of the segment containing them.  A node that
    coincides with a segment boundary takes the mean of the two adjacent
    segment values (jump_rule="mean", the default: the sampled step then
    carries the same trapezoidal mass as the continuum profile and mirrors
    cleanly) or the left segment's value (jump_rule="left").
    """
    tol = 1e-12 * max(1.0, abs(nodes[-1] - nodes[0]))
    values = np.empty(nodes.size)
    for idx, x in enumerate(nodes):
        k = None
        for s, (lo, hi, _) in enumerate(segs):
            if lo - tol <= x <= hi + tol:
                k = s
                break
        if k is None:
            raise ConfigurationError(f"node x={x} not covered by any segment")
        # node on an interior segment boundary?
        on_left_edge = k > 0 and abs(x - segs[k][0]) <= tol
        on_right_edge = k < len(segs) - 1 and abs(x - segs[k][1]) <= tol
        if on_left_edge:
            left, right = segs[k - 1][2], segs[k][2]
        elif on_right_edge:
            left, right = segs[k][2], segs[k + 1][2]
        else:
            values[idx] = segs[k][2]
            continue
        values[idx] = 0.5 * (left + right) if jump_rule == "mean" else left
    return values


def initial_state(
    grid: GridSpec,
    ic: InitialCondition,
    spec: MixtureSpec,
    model: str = "ms",
    initial_deviator: str = "algebraic",
    jump_rule: str = "mean",
    singular_tol: float = 1e-12,
) -> MixtureState:
    """Sample the initial condition onto the grid and build the t=0 state.

    Species 1..S-1 are sampled from their segments; the last species is set to
    n_ref minus their sum, so node sums equal n_ref exactly and constant
    states are bit-exact fixed points of the steppers.  The last species'
    own segments must agree with that closure to 1e-12 at every node.

    Fluxes start at zero.  Deviatoric pressures start at zero for the
    classical model; for the higher-order model they are solved from the
    sampled densities (initial_deviator="algebraic", consistent with the
    deviator being slaved to the densities) or set to zero
    (initial_deviator="zero").
    """
    if jump_rule not in ("mean", "left"):
        raise ConfigurationError(f"unknown jump_rule {jump_rule!r}")
    if initial_deviator not in ("algebraic", "zero"):
        raise ConfigurationError(f"unknown initial_deviator {initial_deviator!r}")
    s = spec.n_species
    if ic.n_species != s:
        raise ConfigurationError(
            f"initial condition has {ic.n_species} species, mixture has {s}"
        )
    per_species = [
        _validate_coverage(ic.segments[i], grid.x_min, grid.x_max, i) for i in range(s)
    ]
    n = np.empty((s, grid.n_nodes))
    for i in range(s - 1):
        n[i] = _sample_species(per_species[i], grid.node_positions, jump_rule)
    n[s - 1] = spec.n_ref - n[:s - 1].sum(axis=0)
    declared_last = _sample_species(per_species[s - 1], grid.node_positions, jump_rule)
    mismatch = np.abs(n[s - 1] - declared_last)
    worst = int(np.argmax(mismatch))
    if mismatch[worst] > _IC_SUM_ATOL:
        raise ConfigurationError(
            f"species values do not sum to n_ref={spec.n_ref} at node {worst} "
            f"(x={grid.node_positions[worst]}): deficit {mismatch[worst]:.3e}"
        )

    p = np.zeros_like(n)
    if model == "homs" and initial_deviator == "algebraic":
        from .higher_order import solve_deviator_field

        p = solve_deviator_field(n, spec, singular_tol, context="initial state")
    return MixtureState(time=0.0, n=n, J=np.zeros((s, grid.n_intervals)), P=p)


def midpoint_densities(n_nodes):
    """Arithmetic mean of adjacent nodes: values at the N half-nodes."""
    n_nodes = np.asarray(n_nodes)
    return 0.5 * (n_nodes[..., 1:] + n_nodes[..., :-1])
