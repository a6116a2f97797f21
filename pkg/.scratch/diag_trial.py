import math, sys
import numpy as np
from phasest.policy import StrategyConfig, SessionState, next_settings, apply_outcome
from phasest.simqubit import Scenario, sample, outcome_distribution
from phasest.model import NoiseModel

nm = NoiseModel.constant()
TWO_PI = 2.0 * math.pi

cfg = StrategyConfig(budget=40.0, selector="gain-rate", method="entropy",
                     search="fibonacci", duration_model="shots", focus_ratio=1.0)

seed = 10596
rng0 = np.random.default_rng(2024)
phi = None
for i in range(1500):
    p = float(rng0.uniform(0, TWO_PI))
    if 10_000 + i == seed:
        phi = p
        break
print(f"true phi = {phi:.6f}")

sc = Scenario.noiseless(phi=phi)
rng = np.random.default_rng(seed)
st = SessionState.fresh()
shot = 0
while st.elapsed < cfg.budget - 1e-9:
    plan = next_settings(st, cfg, nm, rng)
    out = sample(sc, plan.ctrl_phase, plan.k, rng)
    # believed outcome prob before the update
    d = st.density
    w = st.window
    # window-frame coordinates of the true phase
    theta_true = ((phi - w.origin) % TWO_PI) * w.mag % TWO_PI
    p_true_density = float(d.evaluate(theta_true))
    try:
        est = w.lab_estimate()
        err_now = (est - phi + math.pi) % TWO_PI - math.pi
    except Exception:
        err_now = float('nan')
    s1 = abs(d.coeffs[1]) if d.order >= 1 else 0.0
    # lobe mass within +-0.05 lab rad of truth
    half = 0.05 * w.mag
    n = 4096
    th = (theta_true + np.linspace(-half, half, 129)) % TWO_PI
    mass = float(np.mean(d.evaluate(th))) * (2 * half / TWO_PI)
    # model prob of the observed outcome under belief vs under truth
    pb = None
    try:
        from phasest.model import posterior_outcome_prob
        pb = posterior_outcome_prob(d, out, plan.window_ctrl, plan.window_k, plan.sym, plan.vis)
    except Exception:
        pass
    pp = outcome_distribution(sc, plan.ctrl_phase, plan.k); pt = pp if out == 1 else 1.0 - pp
    apply_outcome(st, plan, out, cfg)
    print(f"shot {shot:2d} k={plan.k:4d} out={out:+d} err_now={err_now:+.4f} "
          f"s1={s1:.4f} p(truth)={p_true_density:.3e} mass5={mass:.3e} "
          f"P_belief={pb if pb is None else f'{pb:.3f}'} P_truth={pt:.3f} ord={d.order}")
    shot += 1
    sys.stdout.flush()
est = st.window.lab_estimate()
err = (est - phi + math.pi) % TWO_PI - math.pi
print(f"final err={err:+.5f}")
