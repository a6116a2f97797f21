"""Shared oracles and generators for the test suite.

The oracles here recompute everything the package claims in closed form by a
route with nothing in common with the implementation: densities are tabulated
on a dense phase grid, Bayes updates multiply likelihoods pointwise and
renormalize by quadrature, entropies are quadrature sums, and Fourier
coefficients are read back off the grid with an FFT.  Agreement between the
two routes is then evidence, not circularity.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from phasest import FourierDensity

TWO_PI = 2.0 * math.pi

# Grid size for the quadrature oracles; callers must keep order << GRID_N.
GRID_N = 1 << 14


# -- dense-grid mirror of a density ----------------------------------------


def grid_phis(n: int = GRID_N) -> np.ndarray:
    return np.arange(n) * (TWO_PI / n)


def density_on_grid(d: FourierDensity, n: int = GRID_N) -> np.ndarray:
    """Tabulate p(phi) by direct evaluation of the cosine series."""
    phis = grid_phis(n)
    vals = np.ones(n)
    for m in range(1, d.order + 1):
        c = d.coeffs[m]
        vals += 2.0 * (c.real * np.cos(m * phis) - c.imag * np.sin(m * phis))
    return vals


def coeffs_from_grid(vals: np.ndarray, order: int) -> np.ndarray:
    """Read c[0..order] back from grid values: c_n = mean(p * e^{-i n phi})."""
    n = vals.shape[0]
    spec = np.fft.rfft(vals) / n
    if order + 1 > spec.shape[0]:
        raise ValueError("grid too coarse for the requested order")
    return spec[: order + 1]


def likelihood_on_grid(
    outcome: int, ctrl_phase: float, k: int, sym: float, vis: float, n: int = GRID_N
) -> np.ndarray:
    """P(outcome | phi) on the grid, straight from the fringe formula."""
    fringe = (1.0 - sym) + sym * vis * np.cos(ctrl_phase - k * grid_phis(n))
    return 0.5 * (1.0 + outcome * fringe)


def bayes_update_oracle(
    d: FourierDensity, outcome: int, ctrl_phase: float, k: int, sym: float, vis: float
):
    """(posterior coefficients, outcome probability) by grid quadrature."""
    vals = density_on_grid(d)
    like = likelihood_on_grid(outcome, ctrl_phase, k, sym, vis)
    joint = vals * like
    prob = float(joint.mean())
    if prob <= 0.0:
        return None, prob
    post = joint / prob
    return coeffs_from_grid(post, d.order + k), prob


def entropy_oracle(vals: np.ndarray) -> float:
    """-integral dphi/2pi p ln(p/2pi) from tabulated values."""
    v = np.clip(vals, 1e-300, None)
    return -float(np.mean(vals * np.log(v / TWO_PI)))


def sharpness_of_grid(vals: np.ndarray) -> float:
    """|c_1| read off the grid."""
    n = vals.shape[0]
    z = np.exp(-1j * grid_phis(n))
    return abs(complex((vals * z).mean()))


# -- gain oracles -----------------------------------------------------------


def sharpness_gain_oracle(
    d: FourierDensity, ctrl_phase: float, k: int, sym: float, vis: float
) -> float:
    """Expected sharpness increase by explicit two-outcome enumeration."""
    base = sharpness_of_grid(density_on_grid(d))
    total = 0.0
    for outcome in (1, -1):
        cc, prob = bayes_update_oracle(d, outcome, ctrl_phase, k, sym, vis)
        if cc is None or prob <= 0.0:
            continue
        total += prob * abs(cc[1])
    return total - base


def entropy_gain_oracle(
    d: FourierDensity, ctrl_phase: float, k: int, sym: float, vis: float
) -> float:
    """Expected entropy drop by explicit two-outcome enumeration."""
    vals = density_on_grid(d)
    like_p = likelihood_on_grid(1, ctrl_phase, k, sym, vis)
    h_now = entropy_oracle(vals)
    total = 0.0
    for outcome, like in ((1, like_p), (-1, 1.0 - like_p)):
        joint = vals * like
        prob = float(joint.mean())
        if prob <= 0.0:
            continue
        total += prob * entropy_oracle(joint / prob)
    return h_now - total


def best_ctrl_oracle(gain_fn, span: float, n: int = 4096) -> tuple[float, float]:
    """(ctrl, gain) by brute scan of a dense ctrl grid plus local refinement."""
    ctrls = np.arange(n) * (span / n)
    gains = np.array([gain_fn(a) for a in ctrls])
    i = int(np.argmax(gains))
    lo = ctrls[i] - span / n
    hi = ctrls[i] + span / n
    # golden-section polish inside the bracket
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    e = a + invphi * (b - a)
    fc, fe = gain_fn(c), gain_fn(e)
    for _ in range(80):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - invphi * (b - a)
            fc = gain_fn(c)
        else:
            a, c, fc = c, e, fe
            e = a + invphi * (b - a)
            fe = gain_fn(e)
    mid = 0.5 * (a + b)
    return mid, gain_fn(mid)


# -- density generators -----------------------------------------------------


def wrapped_normal(mu: float, sigma: float, order: int) -> FourierDensity:
    """Exact coefficients of a wrapped normal: c_n = e^{-i n mu - n^2 s^2/2}."""
    n = np.arange(order + 1)
    cc = np.exp(-1j * n * mu - 0.5 * (n * sigma) ** 2)
    cc[0] = 1.0
    return FourierDensity(cc)


def random_density(rng: np.random.Generator, kcap: int = 12, shots: int = 6) -> FourierDensity:
    """A reachable density: random Bayes updates applied to the uniform one.

    Staying inside the update image guarantees positivity, which synthetic
    coefficient draws do not."""
    d = FourierDensity.uniform()
    for _ in range(rng.integers(1, shots + 1)):
        k = int(rng.integers(1, kcap + 1))
        ctrl = float(rng.uniform(0.0, TWO_PI))
        sym = float(rng.uniform(0.5, 1.0))
        vis = float(rng.uniform(0.5, 1.0))
        outcome = 1 if rng.random() < 0.5 else -1
        try:
            d, _ = d.updated(outcome, ctrl, k, sym, vis)
        except Exception:
            continue
    return d


def gain_tuple_cases(count: int, seed: int = 20240817):
    """(density, ctrl, k, sym, vis) tuples covering the edge grid.

    Cycles sym and vis through {0, 1e-6, 0.5, 1} cross products often enough
    that every pair appears, filling the rest with uniform draws."""
    rng = np.random.default_rng(seed)
    edge = [0.0, 1e-6, 0.5, 1.0]
    cases = []
    for i in range(count):
        d = random_density(rng)
        ctrl = float(rng.uniform(0.0, TWO_PI))
        k = int(rng.integers(1, 15))
        if i % 2 == 0:
            sym = edge[(i // 2) % 4]
            vis = edge[(i // 8) % 4]
        else:
            sym = float(rng.uniform(0.0, 1.0))
            vis = float(rng.uniform(0.0, 1.0))
        cases.append((d, ctrl, k, sym, vis))
    return cases


@pytest.fixture(scope="session")
def tuple_cases_1000():
    return gain_tuple_cases(1000)
