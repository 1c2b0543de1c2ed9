"""Mixture parameters and their nondimensionalization.

A simulation needs, per species pair, the Maxwell-Stefan binary diffusivity
and the collision cross-section norm; per species, a dimensionless mass and a
self-diffusivity; and globally the adiabatic exponent kappa, temperature and
the (constant) total number density.  Measured inputs are masses in atomic
mass units and binary diffusivities in cm^2/s; everything else is derived:

* reference mass m_0 and diffusivity D_0 are the arithmetic means of the
  inputs, and dimensionless values are input/reference;
* the kinetic-theory link between diffusivity and cross section,
      D_ij * ||b_ij|| = (m_i + m_j) * kappa * T / (2 pi m_i m_j),
  inverted to get cross-section norms from binary diffusivities;
* self-diffusivities from assumed intra-species cross-section norms via the
  equal-mass reduction D_ii = kappa * T / (pi * m_i * ||b_ii||).

The built-in ``duncan_toor_mixture`` preset is the classical two-bulb
H2/N2/CO2 uphill-diffusion benchmark.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameterError

__all__ = [
    "PhysicalMixture",
    "MixtureSpec",
    "cross_section_norm",
    "self_diffusivity",
    "nondimensionalize",
    "duncan_toor_mixture",
    "gamma_matrix",
]

_CONSISTENCY_RTOL = 1e-12


def _as_float_array(value, name):
    arr = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidParameterError(f"{name} must be finite, got {value!r}")
    return arr


def _require_positive(arr, name):
    if np.any(arr <= 0.0):
        raise InvalidParameterError(f"{name} must be strictly positive, got {arr!r}")


def _require_symmetric(arr, name):
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidParameterError(f"{name} must be a square matrix, got shape {arr.shape}")
    if not np.allclose(arr, arr.T, rtol=1e-12, atol=0.0):
        raise InvalidParameterError(f"{name} must be symmetric")


def gamma_matrix(gamma, n_species):
    """Broadcast a scalar second-moment ratio to a full symmetric matrix."""
    arr = np.asarray(gamma, dtype=float)
    if arr.ndim == 0:
        arr = np.full((n_species, n_species), float(arr))
    if arr.shape != (n_species, n_species):
        raise InvalidParameterError(
            f"gamma must be a scalar or {n_species}x{n_species} matrix, got shape {arr.shape}"
        )
    _require_symmetric(arr, "gamma")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise InvalidParameterError("gamma entries must lie in [0, 1]")
    return arr


@dataclass
class PhysicalMixture:
    """Measured (dimensional) description of a gas mixture.

    binary_diffusivities_cm2s holds the pair diffusivities in its off-diagonal
    entries; the diagonal is ignored.  intra_cross_section_norms are the
    assumed dimensionless ||b_ii|| values (chosen, not measured).
    """

    species_names: list
    masses_amu: np.ndarray
    binary_diffusivities_cm2s: np.ndarray
    intra_cross_section_norms: np.ndarray
    gamma: np.ndarray
    kappa: float = 5.0 / 3.0
    temperature: float = 1.0
    n_ref: float = 1.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        self.masses_amu = _as_float_array(self.masses_amu, "masses_amu")
        s = self.masses_amu.size
        if s < 2:
            raise InvalidParameterError("a mixture needs at least two species")
        if len(self.species_names) != s:
            raise InvalidParameterError(
                f"species_names has {len(self.species_names)} entries for {s} species"
            )
        _require_positive(self.masses_amu, "masses_amu")
        self.binary_diffusivities_cm2s = _as_float_array(
            self.binary_diffusivities_cm2s, "binary_diffusivities_cm2s"
        )
        _require_symmetric(self.binary_diffusivities_cm2s, "binary_diffusivities_cm2s")
        if self.binary_diffusivities_cm2s.shape != (s, s):
            raise InvalidParameterError("binary_diffusivities_cm2s has wrong shape")
        off = ~np.eye(s, dtype=bool)
        if np.any(self.binary_diffusivities_cm2s[off] <= 0.0):
            raise InvalidParameterError(
                "binary_diffusivities_cm2s off-diagonal entries must be positive"
            )
        self.intra_cross_section_norms = _as_float_array(
            self.intra_cross_section_norms, "intra_cross_section_norms"
        )
        if self.intra_cross_section_norms.shape != (s,):
            raise InvalidParameterError("intra_cross_section_norms has wrong shape")
        _require_positive(self.intra_cross_section_norms, "intra_cross_section_norms")
        self.gamma = gamma_matrix(self.gamma, s)
        for name in ("kappa", "temperature", "n_ref"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"{name} must be positive")

    @property
    def n_species(self):
        return self.masses_amu.size


@dataclass
class MixtureSpec:
    """Dimensionless parameter closure consumed by the steppers.

    diffusivities is the full symmetric matrix: binary values off-diagonal,
    self-diffusivities on the diagonal.  cross_section_norms is the matching
    ||b_ij|| matrix.  Construction verifies the kinetic consistency relations
    between the two to relative 1e-12.
    """

    masses: np.ndarray
    diffusivities: np.ndarray
    gamma: np.ndarray
    kappa: float
    temperature: float
    n_ref: float
    cross_section_norms: np.ndarray
    neglect_self_diffusion: bool = False
    species_names: list = field(default_factory=list)

    def __post_init__(self):
        self.masses = _as_float_array(self.masses, "masses")
        s = self.masses.size
        if s < 2:
            raise InvalidParameterError("a mixture needs at least two species")
        _require_positive(self.masses, "masses")
        self.diffusivities = _as_float_array(self.diffusivities, "diffusivities")
        _require_symmetric(self.diffusivities, "diffusivities")
        _require_positive(self.diffusivities, "diffusivities")
        self.cross_section_norms = _as_float_array(
            self.cross_section_norms, "cross_section_norms"
        )
        _require_symmetric(self.cross_section_norms, "cross_section_norms")
        _require_positive(self.cross_section_norms, "cross_section_norms")
        self.gamma = gamma_matrix(self.gamma, s)
        for name in ("kappa", "temperature", "n_ref"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"{name} must be positive")
        if not self.species_names:
            self.species_names = [f"s{i + 1}" for i in range(s)]
        kt = self.kappa * self.temperature
        m = self.masses
        # D_ij * ||b_ij|| must reproduce the kinetic definition for every pair,
        # and D_ii * ||b_ii|| its equal-mass reduction.
        target = (m[:, None] + m[None, :]) * kt / (2.0 * np.pi * m[:, None] * m[None, :])
        np.fill_diagonal(target, kt / (np.pi * m))
        product = self.diffusivities * self.cross_section_norms
        rel = np.abs(product - target) / target
        if np.any(rel > _CONSISTENCY_RTOL):
            i, j = np.unravel_index(np.argmax(rel), rel.shape)
            raise InvalidParameterError(
                f"diffusivity/cross-section inconsistency at pair ({i},{j}): "
                f"relative error {rel[i, j]:.3e}"
            )

    @property
    def n_species(self):
        return self.masses.size

    def inverse_diffusivities(self):
        """1/D matrix; the diagonal is zeroed when self-diffusion is neglected."""
        inv = 1.0 / self.diffusivities
        if self.neglect_self_diffusion:
            np.fill_diagonal(inv, 0.0)
        return inv

    def with_gamma(self, gamma):
        return replace(self, gamma=gamma_matrix(gamma, self.n_species))

    def with_neglect_self_diffusion(self, flag=True):
        return replace(self, neglect_self_diffusion=bool(flag))


def cross_section_norm(m_i, m_j, d_ij, kappa, temperature):
    """||b_ij|| implied by a binary diffusivity: (m_i+m_j) kT / (2 pi m_i m_j D_ij)."""
    for name, v in (("m_i", m_i), ("m_j", m_j), ("d_ij", d_ij),
                    ("kappa", kappa), ("temperature", temperature)):
        if v <= 0.0:
            raise InvalidParameterError(f"{name} must be positive, got {v!r}")
    return (m_i + m_j) * kappa * temperature / (2.0 * np.pi * m_i * m_j * d_ij)


def self_diffusivity(m_i, intra_norm, kappa, temperature):
    """Self-diffusivity from an assumed intra-species norm: kT / (pi m_i ||b_ii||)."""
    for name, v in (("m_i", m_i), ("intra_norm", intra_norm),
                    ("kappa", kappa), ("temperature", temperature)):
        if v <= 0.0:
            raise InvalidParameterError(f"{name} must be positive, got {v!r}")
    return kappa * temperature / (np.pi * m_i * intra_norm)


def nondimensionalize(phys: PhysicalMixture) -> MixtureSpec:
    """Derive the dimensionless parameter closure from measured inputs.

    Reference mass and diffusivity are the arithmetic means of the species
    masses and of the distinct binary diffusivities.  Off-diagonal cross
    sections follow from the binary diffusivities, self-diffusivities from the
    assumed intra-species cross-section norms.
    """
    phys.validate()  # fields may have been replaced after construction
    s = phys.n_species
    m0 = phys.masses_amu.mean()
    masses = phys.masses_amu / m0

    iu = np.triu_indices(s, k=1)
    d0 = phys.binary_diffusivities_cm2s[iu].mean()
    diff = np.zeros((s, s))
    diff[iu] = phys.binary_diffusivities_cm2s[iu] / d0
    diff = diff + diff.T

    kt_args = (phys.kappa, phys.temperature)
    norms = np.zeros((s, s))
    for i, j in zip(*iu):
        norms[i, j] = norms[j, i] = cross_section_norm(
            masses[i], masses[j], diff[i, j], *kt_args
        )
    for i in range(s):
        norms[i, i] = phys.intra_cross_section_norms[i]
        diff[i, i] = self_diffusivity(masses[i], norms[i, i], *kt_args)

    return MixtureSpec(
        masses=masses,
        diffusivities=diff,
        gamma=phys.gamma.copy(),
        kappa=phys.kappa,
        temperature=phys.temperature,
        n_ref=phys.n_ref,
        cross_section_norms=norms,
        species_names=list(phys.species_names),
    )


def duncan_toor_mixture(gamma=0.1):
    """H2/N2/CO2 two-bulb benchmark mixture (measured masses and diffusivities)."""
    d = np.zeros((3, 3))
    d[0, 1] = d[1, 0] = 0.833
    d[0, 2] = d[2, 0] = 0.68
    d[1, 2] = d[2, 1] = 0.168
    return PhysicalMixture(
        species_names=["H2", "N2", "CO2"],
        masses_amu=np.array([2.0, 28.0, 44.0]),
        binary_diffusivities_cm2s=d,
        intra_cross_section_norms=np.ones(3),
        gamma=gamma_matrix(gamma, 3),
        kappa=5.0 / 3.0,
        temperature=1.0,
        n_ref=1.0,
    )
