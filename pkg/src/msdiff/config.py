"""JSON-based simulation configuration.

A config document is a single JSON object; the "duncan-toor" preset expands
to the full two-bulb benchmark setup (H2/N2/CO2 mixture, domain [0, 1] with
dx = 0.05, dt = 2e-4, step initial data, gamma = 0.1) and any field given in
the document overrides the preset field-by-field.  Schema problems raise
SchemaError with the field path, invariant violations raise
ConfigurationError.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, SchemaError
from .grid import InitialCondition
from .mixture import (
    MixtureSpec,
    PhysicalMixture,
    duncan_toor_mixture,
    gamma_matrix,
    nondimensionalize,
)

__all__ = ["SimConfig", "parse_config", "load_config", "PRESETS"]

_SNAPSHOT_RTOL = 1e-9

# Benchmark snapshot schedule: the comparison time 0.0362, then doubling up to
# the end of the run.  Every entry is an exact multiple of dt = 2e-4.
_BENCHMARK_SNAPSHOTS = [0.0, 0.0362, 0.0724, 0.1448, 0.2896, 0.5792, 1.1584, 2.0]

PRESETS = {
    "duncan-toor": {
        "model": "ms",
        "mixture": {
            "species": ["H2", "N2", "CO2"],
            "masses_amu": [2.0, 28.0, 44.0],
            "binary_diffusivities_cm2s": [
                [0.0, 0.833, 0.68],
                [0.833, 0.0, 0.168],
                [0.68, 0.168, 0.0],
            ],
            "intra_cross_section_norms": [1.0, 1.0, 1.0],
            "gamma": 0.1,
            "kappa": 5.0 / 3.0,
            "temperature": 1.0,
            "n_ref": 1.0,
        },
        "grid": {"x_min": 0.0, "x_max": 1.0, "dx": 0.05},
        "dt": 2e-4,
        "t_end": 2.0,
        "snapshot_times": _BENCHMARK_SNAPSHOTS,
        "initial_condition": "duncan-toor",
    }
}

# Step initial data of the two-bulb benchmark: light species in the left half,
# heavy species in the right half, middle species uniform.
IC_PRESETS = {
    "duncan-toor": [
        [[0.0, 0.5, 0.8], [0.5, 1.0, 0.0]],
        [[0.0, 1.0, 0.2]],
        [[0.0, 0.5, 0.0], [0.5, 1.0, 0.8]],
    ]
}

_KNOWN_KEYS = {
    "preset", "model", "mixture", "grid", "dt", "t_end", "snapshot_times",
    "initial_condition", "gamma_override", "neglect_self_diffusion",
    "initial_deviator", "jump_rule", "singular_tol", "positivity_tol",
    "strict_cfl", "output_dir", "sweep_gammas",
}
_KNOWN_MIXTURE_KEYS = {
    "species", "masses_amu", "binary_diffusivities_cm2s",
    "intra_cross_section_norms", "gamma", "kappa", "temperature", "n_ref",
}


@dataclass
class SimConfig:
    """Validated simulation setup."""

    model: str
    mixture: PhysicalMixture
    x_min: float
    x_max: float
    dx: float
    dt: float
    t_end: float
    snapshot_times: list
    initial_condition: InitialCondition
    gamma_override: object = None
    neglect_self_diffusion: bool = False
    initial_deviator: str = "algebraic"
    jump_rule: str = "mean"
    singular_tol: float = 1e-12
    positivity_tol: float = 1e-13
    strict_cfl: bool = False
    output_dir: str = None
    sweep_gammas: list = field(default_factory=lambda: [0.1, 0.2, 0.3])

    def mixture_spec(self) -> MixtureSpec:
        """Dimensionless mixture with overrides applied."""
        spec = nondimensionalize(self.mixture)
        if self.gamma_override is not None:
            spec = spec.with_gamma(gamma_matrix(self.gamma_override, spec.n_species))
        if self.neglect_self_diffusion:
            spec = spec.with_neglect_self_diffusion()
        return spec

    def snapshot_steps(self):
        """Snapshot times as exact step indices."""
        return [int(round(t / self.dt)) for t in self.snapshot_times]

    def n_steps(self):
        return int(round(self.t_end / self.dt))


def _expect(mapping, key, types, path, default=None, required=False):
    if key not in mapping:
        if required:
            raise SchemaError(f"missing required field '{path}'")
        return default
    value = mapping[key]
    if types is not None and not isinstance(value, types):
        raise SchemaError(
            f"field '{path}' has type {type(value).__name__}, expected "
            f"{'/'.join(t.__name__ for t in types)}"
        )
    return value


def _parse_mixture(doc, path="mixture"):
    if isinstance(doc, str):
        if doc == "duncan-toor":
            return duncan_toor_mixture()
        raise SchemaError(f"unknown mixture preset '{doc}' at '{path}'")
    if not isinstance(doc, dict):
        raise SchemaError(f"field '{path}' must be an object or preset name")
    unknown = set(doc) - _KNOWN_MIXTURE_KEYS
    if unknown:
        raise SchemaError(f"unknown field '{path}.{sorted(unknown)[0]}'")
    species = _expect(doc, "species", (list,), f"{path}.species", required=True)
    masses = _expect(doc, "masses_amu", (list,), f"{path}.masses_amu", required=True)
    diff = _expect(doc, "binary_diffusivities_cm2s", (list,),
                   f"{path}.binary_diffusivities_cm2s", required=True)
    intra = _expect(doc, "intra_cross_section_norms", (list,),
                    f"{path}.intra_cross_section_norms",
                    default=[1.0] * len(species))
    gamma = doc.get("gamma", 0.1)
    try:
        return PhysicalMixture(
            species_names=list(species),
            masses_amu=np.asarray(masses, dtype=float),
            binary_diffusivities_cm2s=np.asarray(diff, dtype=float),
            intra_cross_section_norms=np.asarray(intra, dtype=float),
            gamma=gamma_matrix(gamma, len(species)),
            kappa=float(doc.get("kappa", 5.0 / 3.0)),
            temperature=float(doc.get("temperature", 1.0)),
            n_ref=float(doc.get("n_ref", 1.0)),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed '{path}': {exc}") from exc


def _parse_initial_condition(doc, path="initial_condition"):
    if isinstance(doc, str):
        if doc in IC_PRESETS:
            doc = {"segments": IC_PRESETS[doc]}
        else:
            raise SchemaError(f"unknown initial-condition preset '{doc}' at '{path}'")
    if not isinstance(doc, dict) or "segments" not in doc:
        raise SchemaError(f"field '{path}' must be a preset name or {{'segments': ...}}")
    segments = doc["segments"]
    if not isinstance(segments, list):
        raise SchemaError(f"field '{path}.segments' must be a list per species")
    parsed = []
    for i, species_segments in enumerate(segments):
        if not isinstance(species_segments, list):
            raise SchemaError(f"field '{path}.segments[{i}]' must be a list of triples")
        triples = []
        for k, seg in enumerate(species_segments):
            if not (isinstance(seg, list) and len(seg) == 3):
                raise SchemaError(
                    f"field '{path}.segments[{i}][{k}]' must be [x_lo, x_hi, value]"
                )
            triples.append((float(seg[0]), float(seg[1]), float(seg[2])))
        parsed.append(triples)
    return InitialCondition(parsed)


def _on_step(t, dt):
    k = round(t / dt)
    return abs(k * dt - t) <= _SNAPSHOT_RTOL * max(dt, abs(t))


def parse_config(text: str) -> SimConfig:
    """Parse and validate a JSON config document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("config document must be a JSON object")

    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise SchemaError(f"unknown field '{sorted(unknown)[0]}'")

    preset_name = _expect(doc, "preset", (str,), "preset")
    if preset_name is not None:
        if preset_name not in PRESETS:
            raise SchemaError(f"unknown preset '{preset_name}'")
        merged = dict(PRESETS[preset_name])
        merged.update({k: v for k, v in doc.items() if k != "preset"})
        doc = merged

    model = _expect(doc, "model", (str,), "model", default="ms")
    if model not in ("ms", "homs"):
        raise SchemaError(f"field 'model' must be 'ms' or 'homs', got '{model}'")

    mixture = _parse_mixture(_expect(doc, "mixture", None, "mixture", required=True))

    grid_doc = _expect(doc, "grid", (dict,), "grid", required=True)
    for key in ("x_min", "x_max", "dx"):
        if key not in grid_doc:
            raise SchemaError(f"missing required field 'grid.{key}'")
        if not isinstance(grid_doc[key], (int, float)):
            raise SchemaError(f"field 'grid.{key}' must be a number")
    extra = set(grid_doc) - {"x_min", "x_max", "dx"}
    if extra:
        raise SchemaError(f"unknown field 'grid.{sorted(extra)[0]}'")

    dt = _expect(doc, "dt", (int, float), "dt", required=True)
    t_end = _expect(doc, "t_end", (int, float), "t_end", required=True)
    if dt <= 0 or t_end <= 0:
        raise ConfigurationError(f"dt and t_end must be positive, got {dt}, {t_end}")
    if not _on_step(t_end, dt):
        raise ConfigurationError(f"t_end={t_end} is not a whole number of steps of dt={dt}")

    snapshot_times = _expect(doc, "snapshot_times", (list,), "snapshot_times",
                             default=[0.0, float(t_end)])
    for k, t in enumerate(snapshot_times):
        if not isinstance(t, (int, float)):
            raise SchemaError(f"field 'snapshot_times[{k}]' must be a number")
    snapshot_times = [float(t) for t in snapshot_times]
    if sorted(snapshot_times) != snapshot_times or len(set(snapshot_times)) != len(snapshot_times):
        raise ConfigurationError("snapshot_times must be strictly increasing")
    for t in snapshot_times:
        if t < 0 or t > t_end:
            raise ConfigurationError(f"snapshot time {t} outside [0, t_end={t_end}]")
        if not _on_step(t, dt):
            raise ConfigurationError(
                f"snapshot time {t} does not land on a step of dt={dt}"
            )

    ic = _parse_initial_condition(
        _expect(doc, "initial_condition", None, "initial_condition", required=True)
    )

    gamma_override = doc.get("gamma_override")
    if gamma_override is not None and not isinstance(gamma_override, (int, float, list)):
        raise SchemaError("field 'gamma_override' must be a number or matrix")

    initial_deviator = _expect(doc, "initial_deviator", (str,), "initial_deviator",
                               default="algebraic")
    if initial_deviator not in ("algebraic", "zero"):
        raise SchemaError("field 'initial_deviator' must be 'algebraic' or 'zero'")
    jump_rule = _expect(doc, "jump_rule", (str,), "jump_rule", default="mean")
    if jump_rule not in ("mean", "left"):
        raise SchemaError("field 'jump_rule' must be 'mean' or 'left'")

    sweep_gammas = _expect(doc, "sweep_gammas", (list,), "sweep_gammas",
                           default=[0.1, 0.2, 0.3])
    for k, g in enumerate(sweep_gammas):
        if not isinstance(g, (int, float)):
            raise SchemaError(f"field 'sweep_gammas[{k}]' must be a number")

    cfg = SimConfig(
        model=model,
        mixture=mixture,
        x_min=float(grid_doc["x_min"]),
        x_max=float(grid_doc["x_max"]),
        dx=float(grid_doc["dx"]),
        dt=float(dt),
        t_end=float(t_end),
        snapshot_times=snapshot_times,
        initial_condition=ic,
        gamma_override=gamma_override,
        neglect_self_diffusion=bool(_expect(doc, "neglect_self_diffusion", (bool,),
                                            "neglect_self_diffusion", default=False)),
        initial_deviator=initial_deviator,
        jump_rule=jump_rule,
        singular_tol=float(_expect(doc, "singular_tol", (int, float), "singular_tol",
                                   default=1e-12)),
        positivity_tol=float(_expect(doc, "positivity_tol", (int, float),
                                     "positivity_tol", default=1e-13)),
        strict_cfl=bool(_expect(doc, "strict_cfl", (bool,), "strict_cfl", default=False)),
        output_dir=_expect(doc, "output_dir", (str,), "output_dir"),
        sweep_gammas=[float(g) for g in sweep_gammas],
    )
    # fail early on inconsistent mixture/override combinations
    cfg.mixture_spec()
    return cfg


def load_config(path) -> SimConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
