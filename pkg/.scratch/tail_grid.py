"""Entropy arm at 30k trials per gamma: aggregate curve, fit, tail fractions."""
import time
import numpy as np

from phasest import StrategyConfig, harness
from phasest.errors import EstimateUndefined
from phasest.model import NoiseModel
from phasest.policy import SessionState, next_settings, apply_outcome
from phasest.simqubit import Scenario, sample

T = 40
N = 30_000
BUDGETS = list(range(4, T + 1, 2))

for gamma in (2.0, 2.4, 3.0):
    cfg = StrategyConfig(
        budget=float(T), selector="gain-rate", method="entropy", search="fibonacci",
        duration_model="shots", focus_ratio=gamma,
    )
    model = NoiseModel.constant()
    rng0 = np.random.default_rng(77)
    phis = rng0.uniform(0.0, 2.0 * np.pi, size=N)
    errs = np.full((N, len(BUDGETS)), np.nan)
    t0 = time.time()
    for i in range(N):
        sc = Scenario.noiseless(phi=float(phis[i]))
        rng = np.random.default_rng(500_000 + i)
        st = SessionState.fresh()
        b = 0
        for t in range(1, T + 1):
            plan = next_settings(st, cfg, model, rng)
            out = sample(sc, plan.ctrl_phase, plan.k, rng)
            apply_outcome(st, plan, out, cfg)
            if b < len(BUDGETS) and t == BUDGETS[b]:
                try:
                    e = st.window.lab_estimate() - phis[i]
                    errs[i, b] = (e + np.pi) % (2.0 * np.pi) - np.pi
                except EstimateUndefined:
                    pass
                b += 1
    dt = time.time() - t0

    rows = []
    print(f"=== gamma={gamma}  ({dt:.0f}s, {1e3*dt/N:.1f}ms/trial) ===", flush=True)
    for b, t in enumerate(BUDGETS):
        e = errs[:, b]
        S = np.nanmean(np.cos(e))
        dphi = np.sqrt(max(S, 1e-300) ** -2 - 1.0)
        rows.append((float(t), dphi))
        f02 = np.nanmean(np.abs(e) > 0.2)
        f05 = np.nanmean(np.abs(e) > 0.5)
        print(f"  t={t:2d} dphi={dphi:8.5f}  f(>0.2)={f02:9.2e}  f(>0.5)={f05:9.2e}")
    fit = harness.fit_exponential([r for r in rows if r[0] >= 10.0])
    print(f"  fit 10..40: kappa={fit.decay:.5f}+-{fit.decay_err:.5f} A={fit.amplitude:.4f}",
          flush=True)
    np.save(f"/root/pkg/.scratch/tail_g{gamma:g}.npy", errs)
