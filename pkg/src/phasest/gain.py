"""Expected information gain of a candidate measurement.

Both figures of merit are closed forms in the current Fourier coefficients,
so scoring a candidate (ctrl, k) costs O(1) coefficient lookups for sharpness
and an O(order/k) series for entropy; no posterior needs to be formed.

* sharpness gain: expected |c[1]| after the measurement minus |c[1]| now
  (averaged over the two outcomes with their probabilities).
* entropy gain: expected drop in differential entropy of the density.  This
  is the mutual information between outcome and phase, and is the sum of a
  ctrl-independent constant, a Fourier series in ctrl, and the binary outcome
  entropy term.

``best_ctrl`` maximizes either merit over ctrl in [0, span) with a coarse
grid followed by golden-section refinement; the fringe is pi-periodic in ctrl
up to outcome relabeling, so span defaults to pi."""

from __future__ import annotations

import math
from typing import NamedTuple

from ._backend import impl

_KINDS = {"sharpness": impl.SHARPNESS, "entropy": impl.ENTROPY}


class AlphaOptimum(NamedTuple):
    """Result of the inner ctrl optimization."""

    ctrl_phase: float
    gain: float


def _check(k: int, sym: float, vis: float) -> None:
    if not isinstance(k, (int,)) or k < 1:
        raise ValueError(f"k must be an integer >= 1, got {k!r}")
    if not (0.0 <= sym <= 1.0) or not (0.0 <= vis <= 1.0):
        raise ValueError(f"sym and vis must lie in [0, 1], got {sym!r}, {vis!r}")


def sharpness_gain(density, ctrl_phase: float, k: int, sym: float, vis: float) -> float:
    """Expected increase of |c[1]| from measuring at (ctrl_phase, k)."""
    _check(k, sym, vis)
    return impl.sharpness_gain_at(density.coeffs, float(ctrl_phase), k, sym, vis)


def entropy_gain(density, ctrl_phase: float, k: int, sym: float, vis: float) -> float:
    """Expected entropy decrease from measuring at (ctrl_phase, k)."""
    _check(k, sym, vis)
    return impl.entropy_gain_at(density.coeffs, float(ctrl_phase), k, sym, vis)


def expected_gain(kind: str, density, ctrl_phase: float, k: int, sym: float, vis: float) -> float:
    """Dispatch on kind in {"sharpness", "entropy"}."""
    if kind == "sharpness":
        return sharpness_gain(density, ctrl_phase, k, sym, vis)
    if kind == "entropy":
        return entropy_gain(density, ctrl_phase, k, sym, vis)
    raise ValueError(f"unknown gain kind {kind!r}")


def best_ctrl(
    kind: str, density, k: int, sym: float, vis: float, span: float = math.pi
) -> AlphaOptimum:
    """(ctrl, gain) maximizing the merit over ctrl in [0, span).

    The returned gain is at least the value at every point of the coarse
    64-point grid; ties resolve toward smaller ctrl."""
    if kind not in _KINDS:
        raise ValueError(f"unknown gain kind {kind!r}")
    _check(k, sym, vis)
    if not (span > 0.0):
        raise ValueError(f"span must be positive, got {span!r}")
    ctrl, g = impl.opt_ctrl(_KINDS[kind], density.coeffs, k, sym, vis, float(span))
    return AlphaOptimum(ctrl, g)
