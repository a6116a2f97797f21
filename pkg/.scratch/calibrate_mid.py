import time, sys
from phasest.policy import StrategyConfig
from phasest.simqubit import Scenario
from phasest.model import NoiseModel
from phasest import harness

sc = Scenario.noiseless()
nm = NoiseModel.constant()
budgets = list(range(4, 41, 2))
n = 1500

for gamma in (2.0, 2.2, 2.5):
    cfg = StrategyConfig(budget=40.0, selector="gain-rate", method="entropy",
                         search="fibonacci", duration_model="shots",
                         focus_ratio=gamma)
    t0 = time.perf_counter()
    rows = harness.run_shot_sweep(cfg, sc, nm, n, 101, budgets)
    dt = time.perf_counter() - t0
    pts = [(r.budget, r.delta_phi) for r in rows if r.budget >= 10]
    fit = harness.fit_exponential(pts)
    pts2 = [(r.budget, r.delta_phi) for r in rows if r.budget >= 16]
    fit2 = harness.fit_exponential(pts2)
    print(f"gamma={gamma:.1f}: kappa(10..40)={fit.decay:.5f}+-{fit.decay_err:.5f} A={fit.amplitude:.4f}"
          f"  kappa(16..40)={fit2.decay:.5f}+-{fit2.decay_err:.5f} ({dt:.0f}s)")
    print("   " + "  ".join(f"{r.budget:.0f}:{r.delta_phi:.4f}" for r in rows))
    sys.stdout.flush()
