import time, sys
from phasest.policy import StrategyConfig
from phasest.simqubit import Scenario
from phasest.model import NoiseModel
from phasest import harness

sc = Scenario.noiseless()
nm = NoiseModel.constant()
budgets = list(range(4, 41, 2))
n = 1500

for gamma in (0.8, 1.0, 1.3, 1.6):
    cfg = StrategyConfig(budget=40.0, selector="gain-rate", method="entropy",
                         search="brute-force", duration_model="shots",
                         focus_ratio=gamma)
    t0 = time.perf_counter()
    rows = harness.run_shot_sweep(cfg, sc, nm, n, 101, budgets)
    dt = time.perf_counter() - t0
    pts = [(r.budget, r.delta_phi) for r in rows if r.budget >= 10]
    fit = harness.fit_exponential(pts)
    tail = [r for r in rows if r.budget == 40.0][0]
    print(f"gamma={gamma:.1f} entropy brute: kappa={fit.decay:.5f}+-{fit.decay_err:.5f} "
          f"A={fit.amplitude:.4f} dphi40={tail.delta_phi:.5f} ({dt:.0f}s {dt/n*1000:.1f}ms/t)")
    sys.stdout.flush()
