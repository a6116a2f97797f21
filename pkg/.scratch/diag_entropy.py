import math, sys
import numpy as np
from phasest.policy import StrategyConfig, SessionState, next_settings, apply_outcome
from phasest.simqubit import Scenario, sample
from phasest.model import NoiseModel

nm = NoiseModel.constant()

def run_trial(cfg, phi, seed, record=False):
    sc = Scenario.noiseless(phi=phi)
    rng = np.random.default_rng(seed)
    st = SessionState.fresh()
    trace = []
    while st.elapsed < cfg.budget - 1e-9:
        plan = next_settings(st, cfg, nm, rng)
        out = sample(sc, plan.ctrl_phase, plan.k, rng)
        apply_outcome(st, plan, out, cfg)
        if record:
            d = st.density
            s = abs(d.coeffs[1]) if d.order >= 1 else 0.0
            trace.append((plan.k, s, d.order))
    est = st.window.lab_estimate()
    err = (est - phi + math.pi) % (2*math.pi) - math.pi
    return err, trace

for gamma in (1.0,):
    cfg = StrategyConfig(budget=40.0, selector="gain-rate", method="entropy",
                         search="fibonacci", duration_model="shots", focus_ratio=gamma)
    rng0 = np.random.default_rng(2024)
    errs = []
    for i in range(1500):
        phi = float(rng0.uniform(0, 2*math.pi))
        err, _ = run_trial(cfg, phi, 10_000 + i)
        errs.append((abs(err), phi, 10_000 + i))
    errs.sort(reverse=True)
    a = np.array([e[0] for e in errs])
    print(f"gamma={gamma}: median|err|={np.median(a):.5f}  mean={a.mean():.5f}")
    print(f"  worst 12: {[f'{x:.4f}' for x in a[:12]]}")
    print(f"  count >0.05: {(a>0.05).sum()}  >0.02: {(a>0.02).sum()}  >0.01: {(a>0.01).sum()}")
    S = float(np.mean(np.cos(a)))
    print(f"  holevo dphi40={math.sqrt(1.0/S**2-1.0):.5f}")
    for werr, wphi, wseed in errs[:2]:
        err, tr = run_trial(cfg, wphi, wseed, record=True)
        ks = [t[0] for t in tr]
        ss = [f"{t[1]:.3f}" for t in tr]
        print(f"  trial seed={wseed} err={err:+.4f} shots={len(tr)} order_end={tr[-1][2]}")
        print(f"    k:  {ks}")
        print(f"    s1: {ss}")
    sys.stdout.flush()
