"""Ground-truth single-qubit simulator for the benchmark noise scenarios.

This is the physics side of the experiment: it draws outcomes from what the
device would actually do, independently of the response model the estimator
conditions on.  Three scenarios:

* noiseless: P(+1) = (1 + cos(ctrl - k phi)) / 2.
* dephasing(eta): coherence shrinks by eta per application, so the contrast
  after k applications is eta^k (the estimator's assumed model typically
  uses e^{-(1-eta)k} instead; keeping the truth at eta^k is deliberate).
* bitflip-spont(p): prepare |0>, rotate k times about Y by phi, apply a
  bit-flip channel (probability p/2) then spontaneous emission (probability
  p), rotate back by the analysis pulse, measure z.  Computed by explicit
  density-matrix evolution, not a fitted fringe formula.

Outcome +1 corresponds to the bright port; ``flip_outcomes`` relabels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_ID = np.eye(2, dtype=np.complex128)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=np.complex128)

_TP_TOL = 1e-14
_STATE_TOL = 1e-12


def rot_y(angle: float) -> np.ndarray:
    """exp(i Y angle / 2) = [[cos, sin], [-sin, cos]] at half the angle."""
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    return np.array([[c, s], [-s, c]], dtype=np.complex128)


@dataclass(frozen=True)
class QubitState:
    """A 2x2 density matrix with its physicality checks."""

    rho: np.ndarray

    def validate(self) -> "QubitState":
        rho = self.rho
        if rho.shape != (2, 2):
            raise ValueError(f"rho must be 2x2, got shape {rho.shape}")
        if abs(np.trace(rho) - 1.0) > _STATE_TOL:
            raise ValueError(f"trace {np.trace(rho)} deviates from 1")
        if np.abs(rho - rho.conj().T).max() > _STATE_TOL:
            raise ValueError("rho is not Hermitian")
        # analytic eigenvalues of a 2x2 Hermitian matrix
        tr = float(np.trace(rho).real)
        det = float((rho[0, 0] * rho[1, 1] - rho[0, 1] * rho[1, 0]).real)
        disc = math.sqrt(max(tr * tr - 4.0 * det, 0.0))
        if (tr - disc) / 2.0 < -_STATE_TOL:
            raise ValueError(f"negative eigenvalue {(tr - disc) / 2.0}")
        return self


def _check_trace_preserving(kraus: list[np.ndarray]) -> list[np.ndarray]:
    total = sum(K.conj().T @ K for K in kraus)
    if np.abs(total - _ID).max() > _TP_TOL:
        raise ValueError("Kraus operators do not sum to the identity")
    return kraus


def apply_channel(rho: np.ndarray, kraus: list[np.ndarray]) -> np.ndarray:
    return sum(K @ rho @ K.conj().T for K in kraus)


def bitflip_kraus(p: float) -> list[np.ndarray]:
    """Flip the qubit with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"flip probability must lie in [0, 1], got {p!r}")
    return _check_trace_preserving([math.sqrt(1.0 - p) * _ID, math.sqrt(p) * _X])


def spont_kraus(p: float) -> list[np.ndarray]:
    """Decay |1> -> |0> with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError(f"decay probability must lie in [0, 1], got {p!r}")
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p)]], dtype=np.complex128)
    k1 = np.array([[0.0, math.sqrt(p)], [0.0, 0.0]], dtype=np.complex128)
    return _check_trace_preserving([k0, k1])


def dephasing_kraus(eta: float) -> list[np.ndarray]:
    """Scale off-diagonal coherence by eta."""
    if not (0.0 <= eta <= 1.0):
        raise ValueError(f"eta must lie in [0, 1], got {eta!r}")
    return _check_trace_preserving(
        [math.sqrt((1.0 + eta) / 2.0) * _ID, math.sqrt((1.0 - eta) / 2.0) * _Z]
    )


@dataclass(frozen=True)
class Scenario:
    """What the device truly does: noise kind, parameters, and true phase.

    phi=None leaves the phase unset; the trial runner draws one uniformly at
    the start of each realization."""

    label: str
    phi: float | None
    eta: float = 1.0
    bitflip: float = 0.0
    spont: float = 0.0
    flip_outcomes: bool = False

    def __post_init__(self):
        if self.label not in ("noiseless", "dephasing", "bitflip-spont"):
            raise ValueError(f"unknown scenario {self.label!r}")
        if self.phi is not None and not isinstance(self.phi, (int, float)):
            raise ValueError(f"phi must be a number or None, got {self.phi!r}")
        if not (0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        for name, val in (("bitflip", self.bitflip), ("spont", self.spont)):
            if not (0.0 <= val <= 1.0):
                raise ValueError(f"{name} probability must lie in [0, 1], got {val!r}")

    @classmethod
    def noiseless(cls, phi: float | None = None, flip_outcomes: bool = False) -> "Scenario":
        return cls("noiseless", phi, flip_outcomes=flip_outcomes)

    @classmethod
    def dephasing(cls, eta: float, phi: float | None = None, flip_outcomes: bool = False) -> "Scenario":
        return cls("dephasing", phi, eta=eta, flip_outcomes=flip_outcomes)

    @classmethod
    def bitflip_spont(cls, p: float, phi: float | None = None, flip_outcomes: bool = False) -> "Scenario":
        """Single error-rate knob: flip probability p/2, decay probability p."""
        return cls("bitflip-spont", phi, bitflip=p / 2.0, spont=p, flip_outcomes=flip_outcomes)


def outcome_distribution(sc: Scenario, ctrl_phase: float, k: int) -> float:
    """True probability of outcome +1 at these settings."""
    if sc.phi is None:
        raise ValueError("scenario phase is unset; draw one first")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    if sc.label in ("noiseless", "dephasing"):
        contrast = 1.0 if sc.label == "noiseless" else sc.eta ** k
        p = 0.5 * (1.0 + contrast * math.cos(ctrl_phase - k * sc.phi))
    else:
        # the k rotations commute with nothing in between, so apply them as one
        rho = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
        u = rot_y(k * sc.phi)
        rho = u @ rho @ u.conj().T
        rho = apply_channel(rho, bitflip_kraus(sc.bitflip))
        rho = apply_channel(rho, spont_kraus(sc.spont))
        a = rot_y(-ctrl_phase)
        rho = a @ rho @ a.conj().T
        QubitState(rho).validate()
        p = float(rho[0, 0].real)
    p = min(max(p, 0.0), 1.0)
    return 1.0 - p if sc.flip_outcomes else p


def sample(sc: Scenario, ctrl_phase: float, k: int, rng) -> int:
    """Draw one outcome, +1 with probability outcome_distribution."""
    return 1 if rng.random() < outcome_distribution(sc, ctrl_phase, k) else -1
