"""Shot-by-shot selection of the measurement settings.

Two selectors choose the coherent-application count k and control phase:

* gain-rate: maximize single-shot gain divided by shot duration over the
  candidate list, either exhaustively or by Fibonacci search (candidate
  landscapes are near-unimodal in k; the search restarts from three evenly
  spaced seeds and keeps the best, then polishes by one-step hill climbing).
* comparison ladder: score nearby k-values through the expected gain of
  short equal-duration measurement sequences (up to 5 shots of the same k),
  grouping the duration list into intervals of nearly equal cost and walking
  them bottom-up.

On top sit the session-loop pieces: duration models, hybrid objective
scheduling, budget accounting, window-rescale triggering, and the first-shot
control-phase randomization.

Index conventions: the interval and comparison routines mirror their
pseudocode sources and address table entries with 1-based indices; the pairs
returned by ``intervals`` are 1-based and inclusive on both ends."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import brentq

from ._backend import impl
from ._purepy import _fib_argmax
from .density import PhaseWindow
from .errors import BudgetExhausted
from .gain import best_ctrl
from .model import NoiseModel, posterior_outcome_prob

TWO_PI = 2.0 * math.pi

_KIND_CODES = {"sharpness": impl.SHARPNESS, "entropy": impl.ENTROPY}

# Consecutive-duration ratio bound for the comparison ladder: above this no
# pair of step counts j1, j2 <= 5 has nearly equal total duration.
RATIO_BOUND = 32.0 / 7.0

# Candidate k never exceeds density order by more than this: the gain of
# every k >= order + 2 is identical (all referenced coefficients vanish).
ORDER_MARGIN = 2


# -- duration models --------------------------------------------------------


def duration_fn(label: str) -> Callable[[np.ndarray], np.ndarray]:
    """Map a duration-model label to a vectorized k -> duration function.

    metrology: t = k (the coherent evolution dominates); shots: t = 1 (the
    overhead per shot dominates); affine:a,b: t = (a*k + b)/(a + b), unit
    cost at k = 1."""
    if label == "metrology":
        return lambda ks: np.asarray(ks, dtype=float)
    if label == "shots":
        return lambda ks: np.ones(np.asarray(ks).shape, dtype=float)
    if label.startswith("affine:"):
        parts = label[len("affine:") :].split(",")
        if len(parts) != 2:
            raise ValueError(f"affine duration model needs two parameters, got {label!r}")
        a, b = float(parts[0]), float(parts[1])
        if a < 0.0 or b < 0.0 or a + b <= 0.0:
            raise ValueError(f"affine parameters must be nonnegative with a + b > 0, got {label!r}")
        return lambda ks: (a * np.asarray(ks, dtype=float) + b) / (a + b)
    raise ValueError(f"unknown duration model {label!r}")


# -- candidate table --------------------------------------------------------


class ResourceTable:
    """Candidate application counts with their shot durations.

    ks must be strictly increasing positive integers; ts positive and
    nondecreasing (a larger k never takes less time)."""

    __slots__ = ("ks", "ts")

    def __init__(self, ks, ts):
        ks_arr = np.asarray(ks, dtype=np.int64)
        ts_arr = np.asarray(ts, dtype=float)
        if ks_arr.ndim != 1 or ks_arr.shape[0] == 0:
            raise ValueError("table must hold at least one candidate")
        if ks_arr.shape != ts_arr.shape:
            raise ValueError(f"ks and ts lengths differ: {ks_arr.shape} vs {ts_arr.shape}")
        if ks_arr[0] < 1 or np.any(np.diff(ks_arr) <= 0):
            raise ValueError("ks must be strictly increasing positive integers")
        if np.any(ts_arr <= 0.0):
            raise ValueError("ts must be positive")
        if np.any(np.diff(ts_arr) < 0.0):
            raise ValueError("ts must be nondecreasing")
        self.ks = ks_arr
        self.ts = ts_arr

    @classmethod
    def from_durations(cls, ks, label: str) -> "ResourceTable":
        ks_arr = np.asarray(ks, dtype=np.int64)
        return cls(ks_arr, duration_fn(label)(ks_arr))

    def __len__(self) -> int:
        return int(self.ks.shape[0])

    def check_ratio_bound(self) -> None:
        """Comparison-ladder precondition: consecutive ratios below 32/7."""
        r = self.ts[1:] / self.ts[:-1]
        if r.size and float(r.max()) >= RATIO_BOUND:
            raise ValueError(f"consecutive duration ratio {float(r.max())} >= 32/7")


class ControlSettings(NamedTuple):
    """A selected measurement: control phase, k, and its score."""

    ctrl_phase: float
    k: int
    gain: float
    rate: float


# -- gain-rate selector -----------------------------------------------------


def gain_rate_select(
    density,
    table: ResourceTable,
    kind: str,
    model: NoiseModel,
    search: str = "fibonacci",
    span: float = math.pi,
) -> ControlSettings:
    """Pick the table entry maximizing gain/duration, with the best ctrl.

    search="brute-force" scores every entry; "fibonacci" scores O(log L)
    entries and matches brute force on unimodal rate landscapes.  Ties break
    toward smaller k, then smaller ctrl."""
    if kind not in _KIND_CODES:
        raise ValueError(f"unknown gain kind {kind!r}")
    syms, viss = model.at_many(table.ks)
    if search == "brute-force":
        idx, ctrl, g, rate = impl.rate_argmax_brute(
            density.coeffs, table.ks, table.ts, syms, viss, _KIND_CODES[kind], span
        )
    elif search == "fibonacci":
        idx, ctrl, g, rate = impl.rate_argmax_fib(
            density.coeffs, table.ks, table.ts, syms, viss, _KIND_CODES[kind], span
        )
    else:
        raise ValueError(f"unknown search {search!r}")
    return ControlSettings(float(ctrl), int(table.ks[idx]), float(g), float(rate))


def fibonacci_search(f: Callable[[int], float], lo: int, hi: int) -> int:
    """Index maximizing f on the integers [lo, hi], assuming unimodality.

    For a unimodal f this finds the argmax in O(log(hi - lo)) evaluations;
    otherwise it still returns a local maximum.  Exact ties break toward the
    smaller index."""
    if lo > hi:
        raise ValueError(f"lo must not exceed hi, got {lo} > {hi}")
    return _fib_argmax(f, lo, hi)


# -- multi-measurement lookahead --------------------------------------------


def multi_step_gain(
    density, k: int, j: int, kind: str, model: NoiseModel, span: float = math.pi
) -> float:
    """Expected total gain of j consecutive measurements, all at this k.

    The first measurement uses the ctrl maximizing the single-shot gain;
    each outcome branch then re-optimizes ctrl on its posterior, recursing
    to depth j (at most 5, since the branch count doubles per step)."""
    if not isinstance(j, (int, np.integer)) or not (1 <= j <= 5):
        raise ValueError(f"step count must be an integer in 1..5, got {j!r}")
    sym, vis = model.at(k)
    opt = best_ctrl(kind, density, k, sym, vis, span)
    if j == 1:
        return opt.gain
    total = opt.gain
    for outcome in (1, -1):
        prob = posterior_outcome_prob(density, outcome, opt.ctrl_phase, k, sym, vis)
        if prob <= 0.0:
            continue
        branch, _ = density.updated(outcome, opt.ctrl_phase, k, sym, vis)
        total += prob * multi_step_gain(branch, k, j - 1, kind, model, span)
    return total


def intervals(ts) -> list[tuple[int, int]]:
    """Group sorted durations into maximal runs with t_n/t_first < 8/7.

    Returns 1-based inclusive index pairs covering all entries in order."""
    ts_arr = np.asarray(ts, dtype=float)
    n_total = int(ts_arr.shape[0])
    if n_total == 0:
        raise ValueError("duration list must be non-empty")
    if np.any(ts_arr <= 0.0):
        raise ValueError("durations must be positive")
    if np.any(np.diff(ts_arr) < 0.0):
        raise ValueError("durations must be sorted in increasing order")
    out: list[tuple[int, int]] = []
    n = 1
    while n < n_total:
        m = n
        n += 1
        while n <= n_total and ts_arr[n - 1] / ts_arr[m - 1] < 8.0 / 7.0:
            n += 1
        out.append((m, n - 1))
    if n - 1 < n_total:
        out.append((n, n_total))
    return out


# Step counts (j1, j2) whose total durations j1*t1, j2*t2 nearly agree, by
# duration ratio r = t2/t1; each threshold is where the next pair takes over.
_LADDER = (
    (8.0 / 7.0, 1, 1),
    (24.0 / 17.0, 4, 3),
    (12.0 / 7.0, 3, 2),
    (20.0 / 9.0, 2, 1),
    (30.0 / 11.0, 5, 2),
    (24.0 / 7.0, 3, 1),
    (32.0 / 7.0, 4, 1),
)


def compare(
    table: ResourceTable,
    n1: int,
    n2: int,
    density,
    kind: str,
    model: NoiseModel,
    span: float = math.pi,
) -> int:
    """Pick between two table entries by equal-duration lookahead gain.

    The step counts come from the ratio ladder on r = t[n2]/t[n1]; the entry
    whose j-step gain is larger wins (ties go to n2, matching the source
    pseudocode).  Requires n1 < n2 and r < 32/7."""
    if not (1 <= n1 < n2 <= len(table)):
        raise ValueError(f"need 1 <= n1 < n2 <= {len(table)}, got {n1}, {n2}")
    r = float(table.ts[n2 - 1] / table.ts[n1 - 1])
    if r < 1.0:
        raise ValueError(f"duration ratio {r} < 1; durations must be nondecreasing")
    for bound, j1, j2 in _LADDER:
        if r < bound:
            break
    else:
        raise ValueError(f"duration ratio {r} >= 32/7; entries are not comparable")
    g1 = multi_step_gain(density, int(table.ks[n1 - 1]), j1, kind, model, span)
    g2 = multi_step_gain(density, int(table.ks[n2 - 1]), j2, kind, model, span)
    return n1 if g1 > g2 else n2


def search_interval(
    table: ResourceTable,
    n1: int,
    n2: int,
    density,
    kind: str,
    model: NoiseModel,
    span: float = math.pi,
) -> int:
    """Best entry within one interval of nearly equal durations.

    A singleton interval defers to compare against the next entry (unless it
    is the last entry, which returns itself); a multi-entry interval takes
    the argmax of single-shot gain, first index winning ties."""
    if not (1 <= n1 <= n2 <= len(table)):
        raise ValueError(f"need 1 <= n1 <= n2 <= {len(table)}, got {n1}, {n2}")
    if n1 == n2:
        if n1 == len(table):
            return n1
        return compare(table, n1, n1 + 1, density, kind, model, span)
    syms, viss = model.at_many(table.ks[n1 - 1 : n2])
    best_g = -math.inf
    best_n = n1
    for off in range(n2 - n1 + 1):
        g = best_ctrl(
            kind, density, int(table.ks[n1 - 1 + off]), float(syms[off]), float(viss[off]), span
        ).gain
        if g > best_g:
            best_g = g
            best_n = n1 + off
    return best_n


def search_up(
    table: ResourceTable,
    interval_list: list[tuple[int, int]],
    start: int,
    density,
    kind: str,
    model: NoiseModel,
    span: float = math.pi,
    variant: str = "printed",
) -> int:
    """Walk the intervals upward from the one containing start.

    Follows the source pseudocode: each interval is searched; a singleton
    returns on self-selection, a multi-entry interval returns an interior
    argmax or returns at the last interval; otherwise the interval is
    compared against the next entry up and the walk either stops or
    advances.  variant="printed" keeps the pseudocode's comparison call
    (first entry of the interval, returning that entry on success);
    "corrected" compares the in-interval argmax instead and returns it."""
    if variant not in ("printed", "corrected"):
        raise ValueError(f"unknown variant {variant!r}")
    pos = None
    for i, (a, b) in enumerate(interval_list):
        if a <= start <= b:
            pos = i
            break
    if pos is None:
        raise ValueError(f"index {start} lies in no interval")
    while True:
        a, b = interval_list[pos]
        n = search_interval(table, a, b, density, kind, model, span)
        if a == b:
            if n == a:
                return n
        else:
            if n < b:
                return n
            if pos == len(interval_list) - 1:
                return n
            if variant == "corrected":
                if compare(table, n, b + 1, density, kind, model, span) == n:
                    return n
            else:
                if compare(table, a, b + 1, density, kind, model, span) == a:
                    return a
        pos += 1


def multi_step_select(
    table: ResourceTable,
    density,
    kind: str,
    model: NoiseModel,
    span: float = math.pi,
    variant: str = "printed",
) -> ControlSettings:
    """Comparison-ladder selection over the whole table, with the best ctrl."""
    table.check_ratio_bound()
    pairs = intervals(table.ts)
    n = search_up(table, pairs, 1, density, kind, model, span, variant)
    k = int(table.ks[n - 1])
    sym, vis = model.at(k)
    opt = best_ctrl(kind, density, k, sym, vis, span)
    return ControlSettings(opt.ctrl_phase, k, opt.gain, opt.gain / float(table.ts[n - 1]))


# -- window-rescale threshold -----------------------------------------------


def contraction_sigma_threshold(eps: float) -> float:
    """Largest posterior deviation (radians) keeping the tail mass that a
    wrapped-normal density places outside the half-window below eps.

    Solves erfc(x) = eps by bracketed root finding and returns
    pi / (2 sqrt(2) x)."""
    if not (0.0 < eps < 1.0):
        raise ValueError(f"eps must lie strictly between 0 and 1, got {eps!r}")
    hi = 1.0
    while math.erfc(hi) > eps:
        hi *= 2.0
    x = brentq(lambda t: math.erfc(t) - eps, 0.0, hi, xtol=1e-15, rtol=8.9e-16)
    if x <= 0.0:
        return math.inf
    return math.pi / (2.0 * math.sqrt(2.0) * x)


# -- session loop -----------------------------------------------------------


@dataclass(frozen=True)
class StrategyConfig:
    """Everything the selection loop needs to know, fixed for a session."""

    budget: float
    selector: str = "gain-rate"  # gain-rate | multi-step
    method: str = "sharpness"  # sharpness | entropy | hybrid
    search: str = "fibonacci"  # fibonacci | brute-force
    duration_model: str = "metrology"  # metrology | shots | affine:a,b
    zoom_exponent: int = 13
    zoom_factor: int = 2
    k_subset: str = "all"  # all | pow2
    wide_ctrl: bool = False
    searchup_variant: str = "printed"
    zoom_enabled: bool = True
    focus_ratio: float = 1.0

    def __post_init__(self):
        if not (self.budget > 0.0):
            raise ValueError(f"budget must be positive, got {self.budget!r}")
        if self.selector not in ("gain-rate", "multi-step"):
            raise ValueError(f"unknown selector {self.selector!r}")
        if self.method not in ("sharpness", "entropy", "hybrid"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.search not in ("fibonacci", "brute-force"):
            raise ValueError(f"unknown search {self.search!r}")
        if not isinstance(self.zoom_exponent, int) or self.zoom_exponent < 1:
            raise ValueError(f"zoom exponent must be an integer >= 1, got {self.zoom_exponent!r}")
        if not isinstance(self.zoom_factor, int) or self.zoom_factor < 2:
            raise ValueError(f"zoom factor must be an integer >= 2, got {self.zoom_factor!r}")
        if self.k_subset not in ("all", "pow2"):
            raise ValueError(f"unknown k subset {self.k_subset!r}")
        if self.searchup_variant not in ("printed", "corrected"):
            raise ValueError(f"unknown search-up variant {self.searchup_variant!r}")
        if not (self.focus_ratio > 0.0):
            raise ValueError(f"focus ratio must be positive, got {self.focus_ratio!r}")
        duration_fn(self.duration_model)  # validate the label eagerly

    @property
    def span(self) -> float:
        return TWO_PI if self.wide_ctrl else math.pi

    def shot_durations(self, ks) -> np.ndarray:
        return duration_fn(self.duration_model)(np.asarray(ks, dtype=np.int64))

    def shot_duration(self, k: int) -> float:
        return float(self.shot_durations(np.asarray([k]))[0])

    @property
    def flat_durations(self) -> bool:
        """True when shot time does not grow with k (budget cannot bound k)."""
        if self.duration_model == "shots":
            return True
        if self.duration_model.startswith("affine:"):
            return float(self.duration_model[len("affine:") :].split(",")[0]) == 0.0
        return False


@dataclass
class SessionState:
    """Mutable per-session record: the window, spent budget, and flags."""

    window: PhaseWindow = field(default_factory=PhaseWindow.full_circle)
    elapsed: float = 0.0
    shots: int = 0
    objective_phase: str = "entropy-phase"
    pending_zoom: bool = False

    @classmethod
    def fresh(cls) -> "SessionState":
        return cls()

    @property
    def density(self):
        return self.window.density


@dataclass(frozen=True)
class ShotPlan:
    """One planned measurement, in both lab and window frames."""

    ctrl_phase: float  # lab frame
    k: int  # lab frame
    window_ctrl: float
    window_k: int
    duration: float
    sym: float
    vis: float
    objective: str  # sharpness | entropy | random


def _window_model(model: NoiseModel, mag: int) -> NoiseModel:
    """View of the noise model indexed by window-frame k (lab k = mag * k)."""
    if mag == 1:
        return model

    def fn(ks):
        return model.at_many(np.asarray(ks, dtype=np.int64) * mag)

    return NoiseModel(fn, f"{model.label} @ mag {mag}")


def _feasible_window_ks(state: SessionState, cfg: StrategyConfig, remaining: float) -> np.ndarray:
    """Window-frame candidate ks whose lab shot fits the remaining budget.

    When shot time grows with k the remaining budget bounds k by itself
    (the duration filter below).  With flat durations every shot "fits",
    so candidates are instead capped at the resolution scale of the
    current posterior, focus_ratio / sigma: fringes much finer than the
    posterior's own width carve ambiguity faster than later shots can
    resolve it, and the coefficient count would outgrow 1/width.
    """
    mag = state.window.mag
    cap = max(1, state.density.order + ORDER_MARGIN)
    if cfg.flat_durations:
        d = state.density
        s = abs(d.coeffs[1]) if d.order >= 1 else 0.0
        if 0.0 < s < 1.0:
            sigma = math.sqrt(1.0 / (s * s) - 1.0)
            cap = min(cap, max(1, math.ceil(cfg.focus_ratio / sigma)))
    js = np.arange(1, cap + 1, dtype=np.int64)
    if cfg.k_subset == "pow2":
        js = 2 ** np.arange(0, int(math.log2(cap)) + 1, dtype=np.int64)
        js = js[js <= cap]
    durations = cfg.shot_durations(js * mag)
    js = js[durations <= remaining]
    if js.size == 0:
        raise BudgetExhausted(
            f"no candidate fits the remaining budget {remaining:.6g} (mag {mag})"
        )
    return js


def next_settings(state: SessionState, cfg: StrategyConfig, model: NoiseModel, rng) -> ShotPlan:
    """Plan the next measurement in the lab frame.

    The first shot uses a random ctrl in [0, pi] and the smallest feasible k
    (the selectors are degenerate on a flat density).  With method="hybrid"
    the objective is entropy for the first half of the budget and sharpness
    after; a pending window rescale forces sharpness for one shot.  Raises
    BudgetExhausted when not even the cheapest candidate fits."""
    remaining = cfg.budget - state.elapsed
    mag = state.window.mag
    d = state.density

    if cfg.method == "hybrid":
        objective = "entropy" if state.elapsed < cfg.budget / 2.0 else "sharpness"
    else:
        objective = cfg.method
    if state.pending_zoom:
        objective = "sharpness"
    state.objective_phase = "entropy-phase" if objective == "entropy" else "sharpness-phase"

    js = _feasible_window_ks(state, cfg, remaining)

    if state.shots == 0:
        ctrl = float(rng.uniform(0.0, math.pi))
        j = int(js[0])
        label = "random"
    else:
        wmodel = _window_model(model, mag)
        if cfg.selector == "multi-step":
            table = ResourceTable(js, cfg.shot_durations(js * mag))
            picked = multi_step_select(
                table, d, objective, wmodel, cfg.span, cfg.searchup_variant
            )
        else:
            table = ResourceTable(js, cfg.shot_durations(js * mag))
            picked = gain_rate_select(d, table, objective, wmodel, cfg.search, cfg.span)
        ctrl, j, label = picked.ctrl_phase, picked.k, objective

    lab_ctrl, lab_k = state.window.lab_settings(ctrl, j)
    sym, vis = model.at(lab_k)
    return ShotPlan(
        ctrl_phase=lab_ctrl,
        k=lab_k,
        window_ctrl=ctrl,
        window_k=j,
        duration=cfg.shot_duration(lab_k),
        sym=sym,
        vis=vis,
        objective=label,
    )


def zoom_due(window: PhaseWindow, cfg: StrategyConfig) -> bool:
    """Rescale trigger: posterior deviation below pi / (2^c * mag)."""
    if not cfg.zoom_enabled:
        return False
    v = window.density.holevo_variance()
    if not math.isfinite(v):
        return False
    return math.sqrt(v) < math.pi / (float(1 << cfg.zoom_exponent) * window.mag)


def apply_outcome(state: SessionState, plan: ShotPlan, outcome: int, cfg: StrategyConfig) -> float:
    """Fold one observed outcome into the session state.

    Updates the window density (window frame, noise parameters at the lab
    k), charges the shot duration, then handles rescaling: a pending rescale
    executes now that its sharpness shot has landed, otherwise the trigger
    is re-checked.  Returns the outcome's modeled probability."""
    d2, prob = state.window.density.updated(
        outcome, plan.window_ctrl, plan.window_k, plan.sym, plan.vis
    )
    state.window = PhaseWindow(state.window.mag, state.window.origin, d2)
    state.elapsed += plan.duration
    state.shots += 1
    if state.pending_zoom:
        if d2.order >= cfg.zoom_factor and d2.sharpness() > 0.0:
            state.window = state.window.zoom(cfg.zoom_factor)
        state.pending_zoom = False
    elif zoom_due(state.window, cfg):
        state.pending_zoom = True
    return prob
