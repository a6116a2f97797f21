import time
from phasest.policy import StrategyConfig
from phasest.simqubit import Scenario
from phasest.model import NoiseModel
from phasest import harness

def clock(label, fn, n):
    t0 = time.perf_counter()
    out = fn()
    dt = time.perf_counter() - t0
    print(f"{label}: {dt:.1f}s total, {dt/n*1000:.2f} ms/trial", flush=True)
    return out

sc0 = Scenario.noiseless()
m1 = NoiseModel.constant()

# --- C3 arms at 8000 trials: kappa convergence check
for method in ("sharpness", "entropy", "hybrid"):
    cfg = StrategyConfig(budget=40.0, selector="gain-rate", method=method,
                         search="brute-force", duration_model="shots")
    rows = clock(f"C3 {method} 8000", lambda: harness.run_shot_sweep(
        cfg, sc0, m1, 8000, 7, list(range(1, 41))), 8000)
    pts = [(r.budget, r.delta_phi) for r in rows if r.budget >= 10]
    fit = harness.fit_exponential(pts)
    print(f"   kappa={fit.decay:.5f}+-{fit.decay_err:.5f}  A={fit.amplitude:.4f}", flush=True)
    for r in rows:
        if r.budget in (10.0, 20.0, 30.0, 40.0):
            print(f"   t={r.budget:.0f} dphi={r.delta_phi:.5f}+-{r.delta_phi_err:.5f} failed={r.failed}", flush=True)

# --- C2: metrology hybrid brute N=2^12
cfg = StrategyConfig(budget=4096.0, method="hybrid", search="brute-force")
b = clock("C2 hybrid brute 4096 x20", lambda: harness.run_batch(cfg, sc0, m1, 20, 3), 20)
print(f"   dphi*N/pi={b.delta_phi*4096/3.141592653589793:.3f}", flush=True)

# --- C10 fib arm N=2^12
cfg = StrategyConfig(budget=4096.0, method="sharpness", search="fibonacci")
b = clock("C10 sharp fib 4096 x20", lambda: harness.run_batch(cfg, sc0, m1, 20, 3), 20)
print(f"   dphi*N/pi={b.delta_phi*4096/3.141592653589793:.3f}", flush=True)

# --- C9 off-arm N=2^12
cfg = StrategyConfig(budget=4096.0, method="sharpness", search="brute-force", zoom_enabled=False)
b = clock("C9 zoom-off brute 4096 x10", lambda: harness.run_batch(cfg, sc0, m1, 10, 3), 10)
print(f"   dphi*N/pi={b.delta_phi*4096/3.141592653589793:.3f}", flush=True)

# --- C4: dephasing
cfg = StrategyConfig(budget=32768.0, method="hybrid", search="brute-force")
scd = Scenario.dephasing(0.995)
md = NoiseModel.dephasing(0.995)
b = clock("C4 dephasing hybrid 32768 x6", lambda: harness.run_batch(cfg, scd, md, 6, 3), 6)

# --- C5: flat error, both arms
cfg = StrategyConfig(budget=16384.0, method="hybrid", search="brute-force")
scf = Scenario.bitflip_spont(0.1)
b = clock("C5 aware 16384 x6", lambda: harness.run_batch(cfg, scf, NoiseModel.flat_error(0.1), 6, 3), 6)
b = clock("C5 blind 16384 x6", lambda: harness.run_batch(cfg, scf, m1, 6, 3), 6)

# --- C12: per-shot time, N=2^16 fib
cfg = StrategyConfig(budget=65536.0, method="sharpness", search="fibonacci")
t0 = time.perf_counter()
shots = 0
for s in harness.trial_seeds(11, 4):
    r = harness.run_trial(cfg, sc0, m1, s)
    shots += r.shots
dt = time.perf_counter() - t0
print(f"C12 sharp fib 65536 x4: {dt:.1f}s, {shots} shots, {dt/shots*1000:.3f} ms/shot", flush=True)
