"""Truncated Fourier representation of a circular phase density.

A density on the circle is stored through its non-negative harmonics
``c[0..order]`` (``complex128``, ``c[0] == 1`` always), representing

    p(phi) = 1 + 2 * sum_{n=1}^{order} Re{c[n] * e^{i n phi}},  phi in [0, 2pi)

normalized so that the mean of p over the circle is 1 (integral against
dphi/2pi).  Negative harmonics are the conjugates of the stored ones, so p is
real by construction.  The point estimate of the phase is the circular mean
arg(conj(c[1])), its quality is the sharpness |c[1]|.

``PhaseWindow`` layers a magnified view on top: the window density q(theta)
describes the lab phase through phi = origin + theta/mag, which keeps the
harmonic order bounded as knowledge sharpens (zooming in rescales the window
and halves the coefficient count for mag factor 2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from ._backend import impl
from .errors import (
    DensityInvalid,
    EstimateUndefined,
    ImpossibleOutcome,
    OrderBudgetExceeded,
)

TWO_PI = 2.0 * math.pi

# Hard cap on the harmonic order an update may reach (exceeding raises).
DEFAULT_MAX_ORDER = 1 << 20

# Reconstruction tolerance: p may dip this far below zero from truncation.
NEGATIVE_TOL = 1e-9


class FourierDensity:
    """Circular density held as its non-negative Fourier coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.asarray(coeffs, dtype=np.complex128).copy()
        if arr.ndim != 1 or arr.shape[0] < 1:
            raise ValueError("coeffs must be a non-empty 1-d array")
        if arr[0] != 1.0:
            raise DensityInvalid(f"c[0] must be exactly 1, got {arr[0]!r}")
        if np.any(np.abs(arr) > 1.0 + 1e-12):
            raise DensityInvalid("|c[n]| must not exceed 1")
        self.coeffs = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "FourierDensity":
        # trusted constructor for arrays produced by the kernels
        self = object.__new__(cls)
        self.coeffs = arr
        return self

    @classmethod
    def uniform(cls) -> "FourierDensity":
        return cls._wrap(np.ones(1, dtype=np.complex128))

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    # -- point evaluation ---------------------------------------------------

    def evaluate(self, phi):
        """Density value(s) at phi (scalar or array)."""
        phi_arr = np.asarray(phi, dtype=float)
        z = np.exp(1j * phi_arr)
        acc = np.zeros_like(z)
        for n in range(self.order, 0, -1):
            acc = (acc + self.coeffs[n]) * z
        vals = 1.0 + 2.0 * acc.real
        if np.isscalar(phi) or phi_arr.ndim == 0:
            return float(vals)
        return vals

    def grid_values(self, n: int) -> np.ndarray:
        """Density on the uniform grid phi_j = 2 pi j / n, via inverse FFT."""
        if n < 2 * (self.order + 1):
            raise ValueError(f"grid of {n} cannot resolve order {self.order}")
        spec = np.zeros(n // 2 + 1, dtype=np.complex128)
        spec[: self.order + 1] = self.coeffs
        return np.fft.irfft(spec, n) * n

    # -- summaries ----------------------------------------------------------

    def sharpness(self) -> float:
        """|c[1]|: length of the first circular moment."""
        return float(abs(self.coeffs[1])) if self.order >= 1 else 0.0

    def estimate(self) -> float:
        """Circular mean arg(conj(c[1])), in [0, 2 pi)."""
        if self.sharpness() == 0.0:
            raise EstimateUndefined("first harmonic vanishes")
        return float((-np.angle(self.coeffs[1])) % TWO_PI)

    def holevo_variance(self) -> float:
        """1/|c[1]|^2 - 1 (infinite for a flat first harmonic)."""
        s = self.sharpness()
        if s == 0.0:
            return math.inf
        return 1.0 / (s * s) - 1.0

    def entropy(self, tol: float = 1e-10) -> float:
        """Differential entropy -integral dphi/2pi p ln(p/2pi), by quadrature.

        Uses the FFT grid (periodic trapezoid) starting at >= 8*(order+1)+64
        points, doubling until two resolutions agree within tol."""
        n = 1 << max(7, (8 * (self.order + 1) + 64 - 1).bit_length())
        prev = None
        while True:
            vals = self.grid_values(n)
            low = float(vals.min())
            if low < -NEGATIVE_TOL:
                raise DensityInvalid(f"density reaches {low}, below -{NEGATIVE_TOL}")
            v = np.clip(vals, 0.0, None)
            with np.errstate(divide="ignore", invalid="ignore"):
                terms = np.where(v > 0.0, v * np.log(np.where(v > 0.0, v, 1.0) / TWO_PI), 0.0)
            h = -float(terms.mean())
            if prev is not None and abs(h - prev) <= tol:
                return h
            if n >= (1 << 21):
                return h
            prev = h
            n *= 2

    def validate(self, grid_mult: int = 4) -> None:
        """Raise DensityInvalid unless the reconstruction stays a density."""
        if self.coeffs[0] != 1.0:
            raise DensityInvalid("c[0] drifted from 1")
        if np.any(np.abs(self.coeffs) > 1.0 + 1e-12):
            raise DensityInvalid("|c[n]| exceeds 1")
        n = 1 << max(7, (grid_mult * (self.order + 1) + 64 - 1).bit_length())
        low = float(self.grid_values(n).min())
        if low < -NEGATIVE_TOL:
            raise DensityInvalid(f"density reaches {low}, below -{NEGATIVE_TOL}")

    # -- Bayes update -------------------------------------------------------

    def updated(
        self,
        outcome: int,
        ctrl_phase: float,
        k: int,
        sym: float,
        vis: float,
        max_order: int = DEFAULT_MAX_ORDER,
    ) -> tuple["FourierDensity", float]:
        """Posterior density and probability of the observed outcome.

        outcome is +1 or -1; k >= 1 counts coherent applications of the phase;
        sym and vis are the response parameters at this k.  Raises
        ImpossibleOutcome when the outcome has probability <= 0 under the
        model, OrderBudgetExceeded when the posterior order would pass
        max_order."""
        if outcome not in (1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {outcome!r}")
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise ValueError(f"k must be an integer >= 1, got {k!r}")
        if not (0.0 <= sym <= 1.0) or not (0.0 <= vis <= 1.0):
            raise ValueError(f"sym and vis must lie in [0, 1], got {sym!r}, {vis!r}")
        if self.order + k > max_order:
            raise OrderBudgetExceeded(self.order + k, max_order)
        arr, prob = impl.bayes_update(
            self.coeffs, int(outcome), float(ctrl_phase), int(k), float(sym), float(vis)
        )
        if arr is None:
            raise ImpossibleOutcome(prob)
        return FourierDensity._wrap(arr), float(prob)

    def __repr__(self) -> str:  # pragma: no cover
        return f"FourierDensity(order={self.order}, sharpness={self.sharpness():.6g})"


@dataclass
class PhaseWindow:
    """Magnified view of the lab phase: phi = origin + theta/mag.

    ``density`` is the window density q(theta); mag == 1, origin == 0 is the
    plain full-circle representation.  Window-frame settings (ctrl, k) map to
    lab settings through lab_k = mag*k, lab_ctrl = ctrl + lab_k*origin."""

    mag: int
    origin: float
    density: FourierDensity

    @classmethod
    def full_circle(cls) -> "PhaseWindow":
        return cls(1, 0.0, FourierDensity.uniform())

    def zoom(self, factor: int = 2) -> "PhaseWindow":
        """Rescale the window by an integer factor >= 2 around the estimate.

        The new window keeps every factor-th harmonic, re-centered so the
        estimate sits mid-window; the coefficient count drops to
        order // factor.  Requires a defined estimate and order >= factor."""
        if not isinstance(factor, (int, np.integer)) or factor < 2:
            raise ValueError(f"zoom factor must be an integer >= 2, got {factor!r}")
        d = self.density
        if d.order < factor:
            raise ValueError(f"order {d.order} too small to rescale by {factor}")
        est = d.estimate()
        new_order = d.order // factor
        n = np.arange(new_order + 1)
        cc = d.coeffs[:: factor][: new_order + 1] * np.exp(1j * n * (factor * est - math.pi))
        cc[0] = 1.0
        origin = (self.origin + est / self.mag - math.pi / (self.mag * factor)) % TWO_PI
        return PhaseWindow(self.mag * int(factor), origin, FourierDensity._wrap(cc))

    def lab_settings(self, ctrl_phase: float, k: int) -> tuple[float, int]:
        """Lab (ctrl, k) realizing the window-frame measurement (ctrl, k)."""
        if not isinstance(k, (int, np.integer)) or k < 1:
            raise ValueError(f"k must be an integer >= 1, got {k!r}")
        lab_k = self.mag * int(k)
        return (ctrl_phase + lab_k * self.origin) % TWO_PI, lab_k

    def lab_estimate(self) -> float:
        """Lab-frame phase estimate, in [0, 2 pi)."""
        return (self.origin + self.density.estimate() / self.mag) % TWO_PI

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        coeffs = [[float(c.real), float(c.imag)] for c in self.density.coeffs]
        return json.dumps({"M": int(self.mag), "phi0": float(self.origin), "coeffs": coeffs})

    @classmethod
    def from_json(cls, text: str) -> "PhaseWindow":
        obj = json.loads(text)
        mag = obj["M"]
        if not isinstance(mag, int) or mag < 1:
            raise ValueError(f"M must be an integer >= 1, got {mag!r}")
        pairs = obj["coeffs"]
        if not pairs:
            raise ValueError("coeffs must be non-empty")
        arr = np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)
        return cls(mag, float(obj["phi0"]), FourierDensity(arr))
