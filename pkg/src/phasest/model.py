"""Two-outcome measurement model and noise-parameter schedules.

A measurement with control phase ``ctrl`` and ``k`` coherent applications of
the unknown phase phi returns outcome xi in {+1, -1} with

    P(xi) = (1/2) * (1 + xi * ((1 - sym) + sym * vis * cos(ctrl - k*phi)))

where sym in [0, 1] is the symmetric part of the response (sym < 1 biases the
outcomes toward +1 independently of phi) and vis in [0, 1] scales the fringe
contrast.  ``NoiseModel`` carries the assumed dependence of (sym, vis) on k,
which is what the estimator conditions on; the simulator may draw from a
different truth."""

from __future__ import annotations

import math

import numpy as np

from .errors import DensityInvalid

_PROB_TOL = 1e-12


def outcome_prob(outcome: int, ctrl_phase: float, k: int, phi: float, sym: float, vis: float) -> float:
    """Likelihood of one outcome at a known phase."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    fringe = (1.0 - sym) + sym * vis * math.cos(ctrl_phase - k * phi)
    return 0.5 * (1.0 + outcome * fringe)


def posterior_outcome_prob(density, outcome: int, ctrl_phase: float, k: int, sym: float, vis: float) -> float:
    """Outcome probability marginalized over the current density.

    Only the k-th harmonic enters:
    P(xi) = (1/2)(1 + xi(1 - sym)) + xi (sym vis / 2) Re{e^{i ctrl} c[k]}."""
    if outcome not in (1, -1):
        raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
    ck = density.coeffs[k] if k <= density.order else 0.0
    p = 0.5 * (1.0 + outcome * (1.0 - sym)) + outcome * 0.5 * sym * vis * (
        np.exp(1j * ctrl_phase) * ck
    ).real
    if p < -_PROB_TOL or p > 1.0 + _PROB_TOL:
        raise DensityInvalid(f"outcome probability {p} outside [0, 1]")
    return float(min(max(p, 0.0), 1.0))


class NoiseModel:
    """Assumed response parameters (sym, vis) as a function of k.

    The function is vectorized: ``at_many`` takes an integer array and returns
    (sym_array, vis_array); ``at`` is the scalar view."""

    __slots__ = ("_fn", "label")

    def __init__(self, fn, label: str):
        self._fn = fn
        self.label = label

    def at(self, k: int) -> tuple[float, float]:
        s, v = self._fn(np.asarray([k], dtype=np.int64))
        return float(s[0]), float(v[0])

    def at_many(self, ks) -> tuple[np.ndarray, np.ndarray]:
        ks = np.asarray(ks, dtype=np.int64)
        s, v = self._fn(ks)
        return np.asarray(s, dtype=float), np.asarray(v, dtype=float)

    # -- presets ------------------------------------------------------------

    @classmethod
    def constant(cls, sym: float = 1.0, vis: float = 1.0) -> "NoiseModel":
        """k-independent parameters (sym=vis=1 is the noiseless model)."""
        if not (0.0 <= sym <= 1.0) or not (0.0 <= vis <= 1.0):
            raise ValueError(f"sym and vis must lie in [0, 1], got {sym!r}, {vis!r}")

        def fn(ks):
            return np.full(ks.shape, sym), np.full(ks.shape, vis)

        return cls(fn, f"constant(sym={sym}, vis={vis})")

    @classmethod
    def dephasing(cls, eta: float) -> "NoiseModel":
        """Exponential contrast decay vis = e^{-(1-eta) k}, sym = 1."""
        if not (0.0 <= eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
        rate = 1.0 - eta

        def fn(ks):
            return np.ones(ks.shape), np.exp(-rate * ks.astype(float))

        return cls(fn, f"dephasing(eta={eta})")

    @classmethod
    def flat_error(cls, p: float) -> "NoiseModel":
        """Uniform error rate p: sym = vis = 1 - p at every k."""
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"p must lie in [0, 1], got {p!r}")

        def fn(ks):
            return np.full(ks.shape, 1.0 - p), np.full(ks.shape, 1.0 - p)

        return cls(fn, f"flat_error(p={p})")

    def __repr__(self) -> str:  # pragma: no cover
        return f"NoiseModel({self.label})"
