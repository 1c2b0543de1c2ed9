"""Explicit time step for the classical Maxwell-Stefan system.

The model couples per-species continuity with an algebraic momentum balance
driven by inter-species friction:

    d_t n_i + d_x J_i = 0
    d_x n_i = sum_{j != i} (n_i J_j - n_j J_i) / D_ij

Only S-1 momentum rows are independent; the closure sum_i J_i = 0 (hence
sum_i n_i = n_ref) determines the system.  Eliminating the last species turns
each half-node's momentum balance into an (S-1) x (S-1) dense system for the
fluxes; for S=3 this is the familiar 2x2 system with

    A11 = -n_ref/D_13 + (1/D_13 - 1/D_12) n_2
    A12 = (1/D_12 - 1/D_13) n_1
    A21 = (1/D_12 - 1/D_23) n_2
    A22 = -n_ref/D_23 + (1/D_23 - 1/D_12) n_1

evaluated at half-node densities (adjacent-node means) with right side equal
to the density gradients.  Self-diffusivities never enter the flux systems.

One step: solve all half-node flux systems from the current densities, close
J_S = -sum_{i<S} J_i, then update densities with the conservative stencil
(half-width cells and zero ghost fluxes at the closed walls) and recover the
last species from the closure.
"""

from dataclasses import dataclass

import numpy as np

from .densesolve import DEFAULT_SINGULAR_TOL, solve_dense_batch
from .errors import InvalidParameterError, PositivityError
from .grid import GridSpec, MixtureState, midpoint_densities
from .mixture import MixtureSpec

__all__ = [
    "FluxSystemCoefficients",
    "assemble_flux_system",
    "solve_fluxes",
    "update_densities",
    "ms_step",
    "DEFAULT_POSITIVITY_TOL",
]

# Closure roundoff in n_S = n_ref - sum(others) legitimately produces values a
# few ulp below zero; only an excursion past this floor counts as instability.
DEFAULT_POSITIVITY_TOL = 1e-13


def _flux_matrices(n_half, spec):
    """Stack of (S-1)x(S-1) flux matrices for half-node densities n_half (S, H).

    Assembled with fixed-order per-species accumulation so the result is
    bit-identical whether half-nodes are processed alone or in a batch.
    """
    s = spec.n_species
    c = 1.0 / spec.diffusivities  # binary inverses; diagonal never used below
    b = c[: s - 1, : s - 1] - c[: s - 1, s - 1][:, None]
    np.fill_diagonal(b, 0.0)
    nh = n_half[: s - 1].T  # (H, S-1)
    a = b[None, :, :] * nh[:, :, None]
    idx = np.arange(s - 1)
    for i in idx:
        diag = np.full(nh.shape[0], -spec.n_ref * c[i, s - 1])
        for kk in range(s - 1):
            if kk != i:
                diag -= b[i, kk] * nh[:, kk]
        a[:, i, i] = diag
    return a


@dataclass
class FluxSystemCoefficients:
    """One half-node's eliminated momentum system: A @ J[:S-1] = rhs."""

    a: np.ndarray
    rhs: np.ndarray


def assemble_flux_system(n_half, grad_n, spec: MixtureSpec) -> FluxSystemCoefficients:
    """Momentum system at a single half-node after eliminating the last species.

    n_half and grad_n are the S half-node densities and density gradients.
    Rows/columns i, j < S:

        A_ij = (1/D_ij - 1/D_iS) n_i            (j != i)
        A_ii = -n_ref/D_iS + sum_{k!=i,k<S} (1/D_iS - 1/D_ik) n_k
        rhs_i = grad_n_i
    """
    n_half = np.asarray(n_half, dtype=float)
    grad_n = np.asarray(grad_n, dtype=float)
    s = spec.n_species
    if n_half.shape != (s,) or grad_n.shape != (s,):
        raise InvalidParameterError(
            f"expected {s} half-node densities and gradients, got "
            f"{n_half.shape} and {grad_n.shape}"
        )
    if abs(n_half.sum() - spec.n_ref) > 1e-12 * max(1.0, spec.n_ref):
        raise InvalidParameterError(
            f"half-node densities sum to {n_half.sum()!r}, expected n_ref={spec.n_ref}"
        )
    a = _flux_matrices(n_half[:, None], spec)[0]
    return FluxSystemCoefficients(a=a, rhs=grad_n[: s - 1].copy())


def _solve_flux_batch(n_half, rhs, spec, singular_tol, context=None):
    """Solve every half-node's flux system and close the last species."""
    s, h = n_half.shape
    a = _flux_matrices(n_half, spec)
    j = np.empty((s, h))
    j[: s - 1] = solve_dense_batch(a, rhs.T, singular_tol, context).T
    j[s - 1] = 0.0 - j[: s - 1].sum(axis=0)
    return j


def solve_fluxes(state: MixtureState, spec: MixtureSpec, grid: GridSpec,
                 singular_tol=DEFAULT_SINGULAR_TOL):
    """All-species fluxes at the half-nodes from the current densities.

    The last species' flux comes from the closure, so the fluxes sum to zero
    at every half-node by construction.
    """
    n_half = midpoint_densities(state.n)
    grad = (state.n[:, 1:] - state.n[:, :-1]) / grid.dx
    context = f"classical flux solve at t={state.time:.6g}"
    return _solve_flux_batch(n_half, grad[: spec.n_species - 1], spec,
                             singular_tol, context)


def update_densities(state: MixtureState, j_new, dt, grid: GridSpec,
                     spec: MixtureSpec, positivity_tol=DEFAULT_POSITIVITY_TOL):
    """Conservative density update given the new half-node fluxes.

    Interior nodes:  n_l -= (dt/dx) (J_{l+1/2} - J_{l-1/2}).
    Boundary nodes are half-width cells against zero ghost fluxes:
    n_0 -= (2 dt/dx) J_{1/2} and n_N += (2 dt/dx) J_{N-1/2}, which conserves
    the trapezoidal mass of each species exactly.  The last species is
    recovered from the closure, so node sums equal n_ref exactly.

    A density below -positivity_tol raises PositivityError with the node,
    species and time; nothing is ever clipped.
    """
    s = state.n_species
    n_new = np.empty_like(state.n)
    r = dt / grid.dx
    head = slice(0, s - 1)
    n_new[head, 1:-1] = state.n[head, 1:-1] - r * (j_new[head, 1:] - j_new[head, :-1])
    n_new[head, 0] = state.n[head, 0] - 2.0 * r * j_new[head, 0]
    n_new[head, -1] = state.n[head, -1] + 2.0 * r * j_new[head, -1]
    n_new[s - 1] = spec.n_ref - n_new[: s - 1].sum(axis=0)
    if n_new.min() < -positivity_tol:
        species, node = np.unravel_index(np.argmin(n_new), n_new.shape)
        raise PositivityError(state.time + dt, int(node), int(species),
                              float(n_new[species, node]))
    return n_new


def ms_step(state: MixtureState, spec: MixtureSpec, grid: GridSpec, dt,
            singular_tol=DEFAULT_SINGULAR_TOL,
            positivity_tol=DEFAULT_POSITIVITY_TOL) -> MixtureState:
    """Advance the classical system by one explicit step."""
    j = solve_fluxes(state, spec, grid, singular_tol)
    n_new = update_densities(state, j, dt, grid, spec, positivity_tol)
    return MixtureState(time=state.time + dt, n=n_new, J=j, P=np.zeros_like(n_new))
