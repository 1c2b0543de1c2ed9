"""Explicit time step for the higher-order Maxwell-Stefan system.

The higher-order model keeps the diagonal deviatoric component of each
species' partial pressure tensor in the momentum balance.  With the
dimensionless deviator P_i (the deviatoric pressure over kappa*T) the
momentum rows become

    d_x (n_i + P_i) = sum_j (n_i J_j - n_j J_i) / D_ij

and the deviators are slaved to the densities through the per-node algebraic
system  M_hat @ P = beta_hat  with

    M_hat_ij = n_i / ((m_i + m_j) D_ij)                          (j != i)
    M_hat_ii = -n_i / (m_i D_ii)
               - sum_{j != i} (2 + m_j/m_i) n_j / ((m_i + m_j) D_ij)
    beta_hat_i = sum_j (1 - 3 gamma_ij) n_i n_j / (2 m_i D_ij)

(the j = i terms use the self-diffusivity D_ii and gamma_ii; a mixture with
neglect_self_diffusion replaces every 1/D_ii by zero).  With a single scalar
gamma the system has the exact solution P_i = -(1 - 3 gamma)/2 * n_i, which
makes gamma = 1/3 collapse the model onto the classical one.

One step, in normative order: (1) fluxes from the current densities and
deviators, (2) the same conservative density update as the classical model,
(3) deviators re-solved from the new densities at every node.
"""

import numpy as np

from .classical import (
    DEFAULT_POSITIVITY_TOL,
    _solve_flux_batch,
    update_densities,
)
from .densesolve import DEFAULT_SINGULAR_TOL, solve_dense, solve_dense_batch
from .errors import InvalidParameterError
from .grid import GridSpec, MixtureState, midpoint_densities
from .mixture import MixtureSpec

__all__ = [
    "DeviatorSystem",
    "assemble_deviator_system",
    "solve_deviator",
    "solve_deviator_field",
    "homs_flux_rhs",
    "homs_step",
    "total_pressure",
]


def _deviator_batch(n, spec):
    """M_hat (L, S, S) and beta_hat (L, S) for node densities n of shape (S, L).

    Fixed-order per-species accumulation keeps the assembly bit-identical
    whether nodes are processed alone or stacked, so per-node solves can be
    scheduled in any order without changing the result.
    """
    s = spec.n_species
    m = spec.masses
    inv_d = spec.inverse_diffusivities()  # diagonal zeroed if self-diffusion neglected
    msum = m[:, None] + m[None, :]
    g = np.zeros_like(inv_d)
    off = ~np.eye(s, dtype=bool)
    g[off] = inv_d[off] / msum[off]
    w = (2.0 + m[None, :] / m[:, None]) * g
    q = (1.0 - 3.0 * spec.gamma) * inv_d / (2.0 * m[:, None])

    nt = n.T  # (L, S)
    m_hat = g[None, :, :] * nt[:, :, None]
    beta_hat = np.empty_like(nt)
    inv_d_diag = np.diag(inv_d)
    for i in range(s):
        diag = -nt[:, i] * (inv_d_diag[i] / m[i])
        acc = q[i, 0] * nt[:, 0]
        for j in range(s):
            if j != i:
                diag -= w[i, j] * nt[:, j]
            if j > 0:
                acc = acc + q[i, j] * nt[:, j]
        m_hat[:, i, i] = diag
        beta_hat[:, i] = nt[:, i] * acc
    return m_hat, beta_hat


class DeviatorSystem:
    """One node's algebraic deviator system M_hat @ P = beta_hat."""

    def __init__(self, m_hat, beta_hat):
        self.m_hat = np.asarray(m_hat, dtype=float)
        self.beta_hat = np.asarray(beta_hat, dtype=float)


def assemble_deviator_system(n_node, spec: MixtureSpec) -> DeviatorSystem:
    """Assemble M_hat and beta_hat at a single node from its densities."""
    n_node = np.asarray(n_node, dtype=float)
    if n_node.shape != (spec.n_species,):
        raise InvalidParameterError(
            f"expected {spec.n_species} node densities, got shape {n_node.shape}"
        )
    m_hat, beta_hat = _deviator_batch(n_node[:, None], spec)
    return DeviatorSystem(m_hat[0], beta_hat[0])


def solve_deviator(n_node, spec: MixtureSpec, singular_tol=DEFAULT_SINGULAR_TOL):
    """Dimensionless deviatoric pressures at one node (raises on singular M_hat)."""
    system = assemble_deviator_system(n_node, spec)
    return solve_dense(system.m_hat, system.beta_hat, singular_tol,
                       context="deviator solve")


def solve_deviator_field(n, spec: MixtureSpec, singular_tol=DEFAULT_SINGULAR_TOL,
                         context=None):
    """Deviators at every node for a density field n of shape (S, L)."""
    m_hat, beta_hat = _deviator_batch(np.asarray(n, dtype=float), spec)
    return solve_dense_batch(m_hat, beta_hat, singular_tol, context).T


def deviator_residual(n, p, spec: MixtureSpec):
    """Worst per-node ||M_hat P - beta_hat||_inf / (1 + ||beta_hat||_inf)."""
    m_hat, beta_hat = _deviator_batch(np.asarray(n, dtype=float), spec)
    resid = np.einsum("lij,jl->il", m_hat, p) - beta_hat.T
    scale = 1.0 + np.abs(beta_hat).max(axis=1)
    return float((np.abs(resid).max(axis=0) / scale).max())


def homs_flux_rhs(state: MixtureState, grid: GridSpec):
    """Right side of the eliminated flux systems: density plus deviator gradients."""
    s = state.n_species
    grad_n = (state.n[:, 1:] - state.n[:, :-1]) / grid.dx
    grad_p = (state.P[:, 1:] - state.P[:, :-1]) / grid.dx
    return (grad_n + grad_p)[: s - 1]


def homs_step(state: MixtureState, spec: MixtureSpec, grid: GridSpec, dt,
              singular_tol=DEFAULT_SINGULAR_TOL,
              positivity_tol=DEFAULT_POSITIVITY_TOL) -> MixtureState:
    """Advance the higher-order system by one explicit step.

    Sub-step order is normative: fluxes from current (n, P), then the density
    update, then the deviators from the new densities.
    """
    n_half = midpoint_densities(state.n)
    rhs = homs_flux_rhs(state, grid)
    j = _solve_flux_batch(n_half, rhs, spec, singular_tol,
                          context=f"higher-order flux solve at t={state.time:.6g}")
    n_new = update_densities(state, j, dt, grid, spec, positivity_tol)
    p_new = solve_deviator_field(n_new, spec, singular_tol,
                                 context=f"deviator solve at t={state.time + dt:.6g}")
    return MixtureState(time=state.time + dt, n=n_new, J=j, P=p_new)


def total_pressure(n, p, kappa, temperature):
    """Per-species total pressure kT*(n + P); reduces to kT*n when P = 0."""
    return kappa * temperature * np.asarray(n) + kappa * temperature * np.asarray(p)
