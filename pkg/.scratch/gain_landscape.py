"""Shape of the single-shot entropy gain G(k) = best_ctrl gain vs k.

Q1: wrapped normal sigma=0.2 -- interior max near k*sigma~1, or monotone
    rise to the 1-ln2 plateau?
Q2: same question for real mid-session posteriors from the entropy arm.
"""
import numpy as np

from phasest import FourierDensity, StrategyConfig, best_ctrl
from phasest.model import NoiseModel
from phasest.policy import SessionState, next_settings, apply_outcome
from phasest.simqubit import Scenario, sample

LN2 = float(np.log(2.0))


def wrapped_normal(mu, sigma, order):
    n = np.arange(order + 1)
    cc = np.exp(-1j * n * mu - 0.5 * (n * sigma) ** 2)
    cc[0] = 1.0
    return FourierDensity(cc)


print("== Q1: wrapped normal, sigma=0.2, mu=1.2 ==")
d = wrapped_normal(1.2, 0.2, 256)
for k in (1, 2, 3, 4, 5, 6, 8, 10, 14, 20, 30, 40, 60):
    g = best_ctrl("entropy", d, k, 1.0, 1.0).gain
    print(f"  k={k:3d}  k*sigma={k*0.2:5.1f}  G={g:.6f}  (G - (1-ln2) = {g - (1.0 - LN2):+.6f})")

print("\n== Q1b: sharpness gain, same density ==")
for k in (1, 2, 3, 4, 5, 6, 8, 10, 14, 20):
    g = best_ctrl("sharpness", d, k, 1.0, 1.0).gain
    print(f"  k={k:3d}  k*sigma={k*0.2:5.1f}  G={g:.6f}")

print("\n== Q2: real posteriors along an entropy-arm trajectory (gamma=2) ==")
cfg = StrategyConfig(
    budget=40.0, selector="gain-rate", method="entropy", search="brute-force",
    duration_model="shots", focus_ratio=2.0,
)
model = NoiseModel.constant()
sc = Scenario.noiseless(phi=2.2)
rng = np.random.default_rng(7)
st = SessionState.fresh()
for t in range(1, 25):
    plan = next_settings(st, cfg, model, rng)
    out = sample(sc, plan.ctrl_phase, plan.k, rng)
    apply_outcome(st, plan, out, cfg)
    if t in (6, 12, 18, 24):
        dd = st.density
        s1 = abs(dd.coeffs[1])
        sig = np.sqrt(1.0 / s1**2 - 1.0) if 0 < s1 < 1 else float("inf")
        kmax = min(dd.order + 2, 400)
        ks = np.unique(np.round(np.geomspace(1, kmax, 40)).astype(int))
        gains = [best_ctrl("entropy", dd, int(k), 1.0, 1.0).gain for k in ks]
        i = int(np.argmax(gains))
        print(f"  t={t:2d} order={dd.order:4d} sigma_est={sig:8.4f} cap(g=2)={max(1, int(np.ceil(2.0/sig)))}")
        print(f"       argmax_k G = {ks[i]} (k*sig={ks[i]*sig:6.2f})  G*={gains[i]:.4f}")
        top = np.argsort(gains)[::-1][:6]
        print("       top:", ", ".join(f"k={ks[j]}:G={gains[j]:.4f}" for j in sorted(top)))
