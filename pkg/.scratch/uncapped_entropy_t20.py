import numpy as np, math, time
import phasest.policy as pol
from phasest.policy import StrategyConfig
from phasest.simqubit import Scenario
from phasest.model import NoiseModel
from phasest import harness
from phasest.errors import BudgetExhausted

def uncapped(state, cfg, remaining):
    mag = state.window.mag
    cap = max(1, state.window.density.order + pol.ORDER_MARGIN)
    cap = min(cap, 1 << 14)
    js = np.arange(1, cap + 1, dtype=np.int64)
    durations = cfg.shot_durations(js * mag)
    js = js[durations <= remaining]
    if js.size == 0:
        raise BudgetExhausted("none fit")
    return js

pol._feasible_window_ks = uncapped
sc = Scenario.noiseless()
nm = NoiseModel.constant()
cfg = StrategyConfig(budget=20.0, selector="gain-rate", method="entropy",
                     search="brute-force", duration_model="shots")
t0 = time.perf_counter()
budgets = list(range(4, 21, 2))
rows = harness.run_shot_sweep(cfg, sc, nm, 800, 19, budgets)
dt = time.perf_counter() - t0
print(f"entropy UNCAPPED 800 trials to t=20 ({dt:.0f}s, {dt/800*1000:.1f} ms/trial)")
pts = [(r.budget, r.delta_phi) for r in rows if r.budget >= 10]
fit = harness.fit_exponential(pts)
print(f"kappa(10..20)={fit.decay:.5f}+-{fit.decay_err:.5f}  A={fit.amplitude:.4f}")
for r in rows:
    print(f"  t={r.budget:4.0f} dphi={r.delta_phi:.5f}+-{r.delta_phi_err:.5f} S={r.S:.5f}")
