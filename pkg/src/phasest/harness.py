"""Monte Carlo estimation campaigns and their statistics.

A trial runs the full adaptive loop against the ground-truth simulator until
the budget is spent, then reads off the phase estimate.  A batch aggregates
many trials into the circular score S = <cos(phi_hat - phi)> and the spread
figure delta_phi = sqrt(1/S^2 - 1), with error bars propagated from the
sample standard deviation of cos(phi_hat - phi).

Reproducibility: each trial owns a counter-based stream spawned from the
master seed and the trial index, so batches are deterministic and trial
order never matters.  Within a trial the draw order is fixed: true phase
(when the scenario leaves it unset), then the first-shot control phase, then
one uniform per outcome.  Sums use compensated summation, which makes the
aggregates independent of trial ordering bit-for-bit."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import BudgetExhausted, EstimateUndefined, ImpossibleOutcome, UncertaintyUndefined
from .policy import SessionState, StrategyConfig, apply_outcome, next_settings
from .simqubit import Scenario, sample

TWO_PI = 2.0 * math.pi

CSV_HEADER = "budget,trials,S,S_stderr,delta_phi,delta_phi_err,mean_shots,mean_time,failed"


@dataclass(frozen=True)
class TrialResult:
    """One realization: truth, estimate, and what the session spent."""

    phi_true: float
    phi_hat: float  # nan when failed
    elapsed_time: float
    shots: int
    k_history: tuple[int, ...]
    zooms: int
    failed: bool


@dataclass(frozen=True)
class BatchStats:
    """Aggregate over trials at one budget.

    n_trials counts the realizations entering the statistics; failed counts
    excluded ones (no defined estimate).  S_imag is <sin(phi_hat - phi)>,
    reported as an unbiasedness diagnostic."""

    budget: float
    n_trials: int
    S: float
    S_imag: float
    S_stderr: float
    delta_phi: float
    delta_phi_err: float
    mean_shots: float
    mean_time: float
    failed: int


@dataclass(frozen=True)
class FitResult:
    """Log-space least-squares fit of a decay law.

    power: delta_phi = amplitude * pi * x^(-decay); exponential:
    delta_phi = amplitude * exp(-decay * x).  Errors are the standard errors
    of the regression, amplitude's by first-order propagation."""

    model: str
    amplitude: float
    amplitude_err: float
    decay: float
    decay_err: float
    residuals: np.ndarray


# -- single trials ----------------------------------------------------------


def _trial_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _estimate_or_none(state: SessionState) -> float | None:
    try:
        return state.window.lab_estimate()
    except EstimateUndefined:
        return None


def run_trial(cfg: StrategyConfig, sc: Scenario, model, seed) -> TrialResult:
    """One full session: plan, measure, update, until the budget is spent."""
    rng = _trial_rng(seed)
    if sc.phi is None:
        sc = replace(sc, phi=float(rng.uniform(0.0, TWO_PI)))
    state = SessionState.fresh()
    k_hist: list[int] = []
    zooms = 0
    failed_mid = False
    while True:
        try:
            plan = next_settings(state, cfg, model, rng)
        except BudgetExhausted:
            break
        outcome = sample(sc, plan.ctrl_phase, plan.k, rng)
        mag_before = state.window.mag
        try:
            apply_outcome(state, plan, outcome, cfg)
        except ImpossibleOutcome:
            failed_mid = True
            break
        if state.window.mag != mag_before:
            zooms += 1
        k_hist.append(plan.k)
    phi_hat = None if failed_mid else _estimate_or_none(state)
    return TrialResult(
        phi_true=float(sc.phi),
        phi_hat=math.nan if phi_hat is None else phi_hat,
        elapsed_time=state.elapsed,
        shots=state.shots,
        k_history=tuple(k_hist),
        zooms=zooms,
        failed=phi_hat is None,
    )


# -- batches ----------------------------------------------------------------


def summarize(results, budget: float) -> BatchStats:
    """Aggregate trial results; raises UncertaintyUndefined when S <= 0."""
    ok = [r for r in results if not r.failed]
    failed = len(results) - len(ok)
    n = len(ok)
    if n < 2:
        raise ValueError(f"need at least 2 usable trials, got {n}")
    cosv = [math.cos(r.phi_hat - r.phi_true) for r in ok]
    sinv = [math.sin(r.phi_hat - r.phi_true) for r in ok]
    s = math.fsum(cosv) / n
    s_imag = math.fsum(sinv) / n
    var = math.fsum((c - s) ** 2 for c in cosv) / (n - 1)
    s_stderr = math.sqrt(var / n)
    if s <= 0.0:
        raise UncertaintyUndefined(s)
    delta_phi = math.sqrt(max(1.0 / (s * s) - 1.0, 0.0))
    if delta_phi > 0.0:
        delta_phi_err = s ** -3 * s_stderr / delta_phi
    else:
        delta_phi_err = 0.0 if s_stderr == 0.0 else math.inf
    return BatchStats(
        budget=float(budget),
        n_trials=n,
        S=s,
        S_imag=s_imag,
        S_stderr=s_stderr,
        delta_phi=delta_phi,
        delta_phi_err=delta_phi_err,
        mean_shots=math.fsum(r.shots for r in ok) / n,
        mean_time=math.fsum(r.elapsed_time for r in ok) / n,
        failed=failed,
    )


def trial_seeds(seed, n_trials: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(n_trials)


def run_batch(cfg: StrategyConfig, sc: Scenario, model, n_trials: int, seed) -> BatchStats:
    """n_trials independent realizations at one budget."""
    if n_trials < 2:
        raise ValueError(f"need at least 2 trials, got {n_trials}")
    results = [run_trial(cfg, sc, model, s) for s in trial_seeds(seed, n_trials)]
    return summarize(results, cfg.budget)


def run_shot_sweep(
    cfg: StrategyConfig, sc: Scenario, model, n_trials: int, seed, budgets
) -> list[BatchStats]:
    """Batches at several shot budgets from a single pass per trial.

    Each trial runs one trajectory at cfg.budget and records the estimate
    every time elapsed crosses a requested budget, so one pass yields every
    budget's statistics.  Requires the shots duration model (unit shot cost
    makes the checkpoint times exact).  For a non-hybrid method a checkpoint
    equals an independent run at that budget; with method="hybrid" the
    entropy-to-sharpness switch stays keyed to cfg.budget, so checkpoints
    describe partial progress of the full-budget schedule."""
    marks = sorted(float(b) for b in budgets)
    if cfg.duration_model != "shots":
        raise ValueError("sweep reuse requires the shots duration model")
    if n_trials < 2:
        raise ValueError(f"need at least 2 trials, got {n_trials}")
    if not marks or marks[0] <= 0 or marks[-1] != cfg.budget:
        raise ValueError("budgets must be positive with max equal to cfg.budget")

    per_mark: list[list[TrialResult]] = [[] for _ in marks]
    for child in trial_seeds(seed, n_trials):
        rng = _trial_rng(child)
        sc_run = sc if sc.phi is not None else replace(sc, phi=float(rng.uniform(0.0, TWO_PI)))
        state = SessionState.fresh()
        zooms = 0
        failed_mid = False
        mark_pos = 0
        while True:
            try:
                plan = next_settings(state, cfg, model, rng)
            except BudgetExhausted:
                break
            outcome = sample(sc_run, plan.ctrl_phase, plan.k, rng)
            mag_before = state.window.mag
            try:
                apply_outcome(state, plan, outcome, cfg)
            except ImpossibleOutcome:
                failed_mid = True
                break
            if state.window.mag != mag_before:
                zooms += 1
            while mark_pos < len(marks) and state.elapsed >= marks[mark_pos] - 1e-9:
                phi_hat = _estimate_or_none(state)
                per_mark[mark_pos].append(
                    TrialResult(
                        phi_true=float(sc_run.phi),
                        phi_hat=math.nan if phi_hat is None else phi_hat,
                        elapsed_time=state.elapsed,
                        shots=state.shots,
                        k_history=(),
                        zooms=zooms,
                        failed=phi_hat is None,
                    )
                )
                mark_pos += 1
        if failed_mid:
            # the remaining checkpoints never materialize; count them failed
            for pos in range(mark_pos, len(marks)):
                per_mark[pos].append(
                    TrialResult(float(sc_run.phi), math.nan, state.elapsed, state.shots, (), zooms, True)
                )
    return [summarize(per_mark[i], marks[i]) for i in range(len(marks))]


# -- decay-law fits ---------------------------------------------------------


def _linear_fit(x: np.ndarray, y: np.ndarray):
    n = x.shape[0]
    xm, ym = x.mean(), y.mean()
    dx = x - xm
    sxx = float(dx @ dx)
    if sxx == 0.0:
        raise ValueError("all x values coincide; slope is undefined")
    b1 = float(dx @ (y - ym)) / sxx
    b0 = ym - b1 * xm
    resid = y - (b0 + b1 * x)
    s2 = float(resid @ resid) / (n - 2) if n > 2 else 0.0
    se_b1 = math.sqrt(s2 / sxx)
    se_b0 = math.sqrt(s2 * (1.0 / n + xm * xm / sxx))
    return b0, b1, se_b0, se_b1, resid


def _fit_points(points):
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 3:
        raise ValueError("need at least 3 (x, y) points")
    if np.any(arr <= 0.0):
        raise ValueError("all coordinates must be positive")
    return arr[:, 0], arr[:, 1]


def fit_power(points) -> FitResult:
    """Fit delta_phi = A * pi * x^(-gamma) by log-log least squares."""
    x, y = _fit_points(points)
    b0, b1, se_b0, se_b1, resid = _linear_fit(np.log(x), np.log(y / math.pi))
    a = math.exp(b0)
    return FitResult("power", a, a * se_b0, -b1, se_b1, resid)


def fit_exponential(points) -> FitResult:
    """Fit delta_phi = A * exp(-kappa * x) by semi-log least squares."""
    x, y = _fit_points(points)
    b0, b1, se_b0, se_b1, resid = _linear_fit(x, np.log(y))
    a = math.exp(b0)
    return FitResult("exponential", a, a * se_b0, -b1, se_b1, resid)


# -- CSV contract -----------------------------------------------------------


def write_csv(path, rows) -> None:
    """One line per budget point, fixed header."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER.split(","))
        for r in rows:
            writer.writerow(
                [
                    r.budget,
                    r.n_trials,
                    r.S,
                    r.S_stderr,
                    r.delta_phi,
                    r.delta_phi_err,
                    r.mean_shots,
                    r.mean_time,
                    r.failed,
                ]
            )


def read_csv(path) -> list[dict[str, float]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [{key: float(val) for key, val in row.items()} for row in reader]
