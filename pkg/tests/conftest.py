"""Shared fixtures: the heavy benchmark runs are computed once per session.

The terminal summary prints one PASS/FAIL line per acceptance criterion
(tests named test_cNN_* in test_acceptance.py).
"""

import json
import warnings

import numpy as np
import pytest

import msdiff
from msdiff.run import CflWarning


def _quiet_run(cfg, model):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CflWarning)
        return msdiff.run(cfg, model=model)


@pytest.fixture(scope="session")
def bench_cfg():
    return msdiff.parse_config(json.dumps({"preset": "duncan-toor"}))


@pytest.fixture(scope="session")
def short_cfg():
    return msdiff.parse_config(json.dumps({
        "preset": "duncan-toor", "t_end": 0.0362, "snapshot_times": [0.0, 0.0362],
    }))


@pytest.fixture(scope="session")
def bench_spec(bench_cfg):
    return bench_cfg.mixture_spec()


@pytest.fixture(scope="session")
def bench_grid(bench_cfg):
    return msdiff.build_grid(bench_cfg.x_min, bench_cfg.x_max, bench_cfg.dx)


@pytest.fixture(scope="session")
def bench_ic(bench_cfg):
    return bench_cfg.initial_condition


@pytest.fixture(scope="session")
def ms_report(bench_cfg):
    return _quiet_run(bench_cfg, "ms")


@pytest.fixture(scope="session")
def homs_report(bench_cfg):
    return _quiet_run(bench_cfg, "homs")


@pytest.fixture(scope="session")
def homs_neglect_report():
    cfg = msdiff.parse_config(json.dumps({
        "preset": "duncan-toor", "neglect_self_diffusion": True,
    }))
    return _quiet_run(cfg, "homs")


@pytest.fixture(scope="session")
def homs_gamma_third_report():
    cfg = msdiff.parse_config(json.dumps({
        "preset": "duncan-toor", "gamma_override": 1.0 / 3.0,
    }))
    return _quiet_run(cfg, "homs")


def mirrored_spec(spec):
    """The mixture with its species order reversed (exact float relabeling)."""
    perm = np.arange(spec.n_species)[::-1]
    return msdiff.MixtureSpec(
        masses=spec.masses[perm],
        diffusivities=spec.diffusivities[np.ix_(perm, perm)],
        gamma=spec.gamma[np.ix_(perm, perm)],
        kappa=spec.kappa,
        temperature=spec.temperature,
        n_ref=spec.n_ref,
        cross_section_norms=spec.cross_section_norms[np.ix_(perm, perm)],
        neglect_self_diffusion=spec.neglect_self_diffusion,
        species_names=list(reversed(spec.species_names)),
    )


def manual_run(spec, grid, ic, model, dt, snapshot_steps, jump_rule="mean"):
    """Drive a stepper directly (no SimConfig), recording at given step counts."""
    stepper = msdiff.ms_step if model == "ms" else msdiff.homs_step
    state = msdiff.initial_state(grid, ic, spec, model=model, jump_rule=jump_rule)
    snaps = {}
    if 0 in snapshot_steps:
        snaps[0] = state
    for k in range(1, max(snapshot_steps) + 1):
        state = stepper(state, spec, grid, dt)
        if k in snapshot_steps:
            snaps[k] = state
    return [snaps[k] for k in sorted(snapshot_steps)]


@pytest.fixture(scope="session")
def mirror_pair(bench_cfg, bench_spec, bench_grid, bench_ic):
    """Benchmark snapshots next to those of the reflected, relabeled problem."""
    steps = bench_cfg.snapshot_steps()
    spec_m = mirrored_spec(bench_spec)
    ic_m = bench_ic.mirrored(bench_cfg.x_min, bench_cfg.x_max)
    out = {}
    for model in ("ms", "homs"):
        fwd = manual_run(bench_spec, bench_grid, bench_ic, model, bench_cfg.dt, steps)
        mir = manual_run(spec_m, bench_grid, ic_m, model, bench_cfg.dt, steps)
        out[model] = (fwd, mir)
    return out


# --- acceptance summary -------------------------------------------------------

_ACCEPTANCE_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in str(item.fspath):
        return
    name = item.name
    if not name.startswith("test_c"):
        return
    if hasattr(report, "wasxfail"):
        status = "XFAIL (unattainable as stated; see decisions ledger)"
    elif report.passed:
        status = "PASS"
    elif report.failed:
        status = "FAIL"
    else:
        status = "SKIP"
    _ACCEPTANCE_RESULTS[name] = status


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{name}: {_ACCEPTANCE_RESULTS[name]}")
