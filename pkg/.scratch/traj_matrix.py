"""Per-trial, per-shot trajectory matrix for the flat-duration entropy arm.

Since shot durations are k-independent, a budget-40 trial's first t shots
are identical to a budget-t trial: one 40-shot run per trial yields the
whole error curve.  Records err(t), sigma_est(t), k(t) for offline slicing.
"""
import sys
import numpy as np

from phasest import StrategyConfig
from phasest.errors import EstimateUndefined
from phasest.model import NoiseModel
from phasest.policy import SessionState, next_settings, apply_outcome
from phasest.simqubit import Scenario, sample

gamma = float(sys.argv[1]) if len(sys.argv) > 1 else 2.0
n_trials = int(sys.argv[2]) if len(sys.argv) > 2 else 1500
T = 40

cfg = StrategyConfig(
    budget=float(T), selector="gain-rate", method="entropy", search="fibonacci",
    duration_model="shots", focus_ratio=gamma,
)
model = NoiseModel.constant()

rng0 = np.random.default_rng(2024)
phis = rng0.uniform(0.0, 2.0 * np.pi, size=n_trials)

err = np.full((n_trials, T + 1), np.nan)
sig = np.full((n_trials, T + 1), np.nan)
kch = np.zeros((n_trials, T + 1), dtype=np.int64)

for i in range(n_trials):
    sc = Scenario.noiseless(phi=float(phis[i]))
    rng = np.random.default_rng(10_000 + i)
    st = SessionState.fresh()
    for t in range(1, T + 1):
        plan = next_settings(st, cfg, model, rng)
        out = sample(sc, plan.ctrl_phase, plan.k, rng)
        apply_outcome(st, plan, out, cfg)
        kch[i, t] = plan.k
        try:
            e = st.window.lab_estimate() - phis[i]
        except EstimateUndefined:
            continue
        err[i, t] = (e + np.pi) % (2.0 * np.pi) - np.pi
        s1 = abs(st.density.coeffs[1]) if st.density.order >= 1 else 0.0
        sig[i, t] = np.sqrt(1.0 / s1**2 - 1.0) if 0.0 < s1 < 1.0 else np.inf

np.savez_compressed(
    f"/root/pkg/.scratch/traj_g{gamma:g}.npz",
    err=err, sig=sig, k=kch, phis=phis, gamma=gamma,
)

# aggregate curve + subpopulation summary
for t in range(2, T + 1, 2):
    e = err[:, t]
    S = np.nanmean(np.cos(e))
    dphi = np.sqrt(max(S, 1e-300) ** -2 - 1.0)
    big = np.nanmean(np.abs(e) > 0.02)
    huge = np.nanmean(np.abs(e) > 0.2)
    print(f"t={t:2d} dphi={dphi:8.5f}  P(|e|>0.02)={big:6.4f}  P(|e|>0.2)={huge:6.4f}  "
          f"k: med={int(np.median(kch[:, t]))} p90={int(np.percentile(kch[:, t], 90))}")
print("saved", f"traj_g{gamma:g}.npz")
