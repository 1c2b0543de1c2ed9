"""Classical vs higher-order model on identical data: the delay effect.

Keeping the deviatoric partial pressures in the momentum balance slows every
species' march to equilibrium.  For the monotone species (H2, CO2) that shows
up directly as a larger distance to equilibrium at the comparison time
t = 0.0362.  The uphill species (N2) is *also* delayed, which during its
growth phase means a smaller excursion -- it lags the classical run on the way
up, then stays non-uniform longer on the way down.
"""

import json

import msdiff

cfg = msdiff.parse_config(json.dumps({"preset": "duncan-toor"}))
result = msdiff.compare(cfg, out_dir="demo_output/comparison")

t = 0.0362
metric = result.metrics[result.run_ms.snapshot_times.index(t)]
print(f"field differences (higher-order vs classical) at t = {t}")
for i, name in enumerate(result.run_ms.mixture.species_names):
    print(f"  {name:>3}: |dn|_inf = {metric.n_linf[i]:.4f}   "
          f"|dJ|_inf = {metric.j_linf[i]:.4f}   "
          f"|dp_tot|_inf = {metric.p_total_linf[i]:.4f}")
print()

names = result.run_ms.mixture.species_names
print("per-species distance to equilibrium over time (classical | higher-order)")
for rec_ms, rec_ho in zip(result.run_ms.trace, result.run_homs.trace):
    cells = "   ".join(
        f"{names[i]}: {rec_ms.linf_to_equilibrium[i]:.4f}|{rec_ho.linf_to_equilibrium[i]:.4f}"
        for i in range(3))
    print(f"  t = {rec_ms.time:<7g}  {cells}")
print()
print("H2 and CO2: the higher-order run is farther from equilibrium at every")
print("transient time.  N2 flips sign at early times because it is still")
print("growing its uphill excursion -- being delayed means being closer to its")
print("initial (= asymptotic) level; after the peak it is the slower one too.")
print("outputs written to demo_output/comparison/")
