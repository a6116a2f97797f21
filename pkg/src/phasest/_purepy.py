"""Pure-numpy reference implementations of the hot kernels.

The compiled extension (``phasest._kernels``) mirrors every public function in
this module; ``phasest._backend`` picks whichever is importable.  Keeping the
two in lock-step is enforced by tests/test_backends.py.

Conventions shared by both backends:

- ``c`` is the coefficient array of a circular density, ``complex128`` with
  ``c[0] == 1``; the density is ``p(phi) = 1 + 2 sum_{n>=1} Re{c[n] e^{i n phi}}``.
- ``outcome`` is +1 or -1, ``ctrl`` the control (analysis) phase, ``k`` the
  number of coherent applications of the phase per shot.
- ``sym`` and ``vis`` parameterize the two-outcome response
  ``P(outcome) = (1 + outcome*((1-sym) + sym*vis*cos(ctrl - k*phi)))/2``:
  ``sym = 1`` means unbiased outcomes, ``vis`` is the fringe contrast.
"""

from __future__ import annotations

import math

import numpy as np

# Tail coefficients below this magnitude are dropped after an update.
TRIM_EPS = 1e-15
# Coarse-grid size and refinement tolerance of the control-phase search.
CTRL_GRID = 64
CTRL_TOL = 1e-6

SHARPNESS = 0
ENTROPY = 1

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_LN2 = math.log(2.0)


# ---------------------------------------------------------------------------
# Bayes update


def bayes_update(c, outcome, ctrl, k, sym, vis):
    """Posterior coefficients and outcome probability for one measurement.

    Unnormalized posterior coefficients:

        out[n] = B*c[n] + outcome*sym*vis/4 * (e^{i ctrl} c[n+k] + e^{-i ctrl} c[n-k])

    with B = (1 + outcome*(1-sym))/2 and c[-n] = conj(c[n]); the probability of
    the outcome is out[0] before normalization.  Returns ``(new_c, prob)``;
    ``new_c`` is None when prob <= 0 (impossible outcome, caller raises).
    The tail is trimmed at TRIM_EPS but never below the prior order.
    """
    n_old = c.shape[0] - 1
    n_new = n_old + k
    base = 0.5 * (1.0 + outcome * (1.0 - sym))
    w = outcome * sym * vis * 0.25
    rot = complex(math.cos(ctrl), math.sin(ctrl))

    out = np.zeros(n_new + 1, dtype=np.complex128)
    out[: n_old + 1] = base * c
    hi = n_old - k
    if hi >= 0:
        out[: hi + 1] += (w * rot) * c[k:]
    out[k : k + n_old + 1] += (w * rot.conjugate()) * c
    m = min(k, n_old)
    if m > 0:
        # indices n = k-m .. k-1 reach down to conj(c[k-n])
        out[k - m : k] += (w * rot.conjugate()) * np.conj(c[m:0:-1])

    prob = out[0].real
    if prob <= 0.0:
        return None, prob
    out /= prob
    out[0] = 1.0

    keep = np.nonzero(np.abs(out) >= TRIM_EPS)[0]
    last = int(keep[-1]) if keep.size else 0
    last = max(last, n_old)
    return out[: last + 1], prob


# ---------------------------------------------------------------------------
# Expected sharpness gain


def _sharp_parts(c, k):
    n = c.shape[0] - 1
    c1c = np.conj(c[1]) if n >= 1 else 0j
    up = c[k - 1] if k - 1 <= n else 0j
    dn = np.conj(c[k + 1]) if k + 1 <= n else 0j
    return complex(c1c), complex(up), complex(dn)


def sharpness_gain_at(c, ctrl, k, sym, vis):
    """Expected change of |c_1| from one shot at (ctrl, k).

    gain = sum_outcome |B*conj(c1) + outcome*sym*vis/4*(e^{i ctrl} c[k-1]
           + e^{-i ctrl} conj(c[k+1]))| - |c1|
    """
    c1c, up, dn = _sharp_parts(c, k)
    rot = complex(math.cos(ctrl), math.sin(ctrl))
    mix = rot * up + rot.conjugate() * dn
    w = sym * vis * 0.25
    off = 0.5 * (1.0 - sym)
    plus = (0.5 + off) * c1c + w * mix
    minus = (0.5 - off) * c1c - w * mix
    return abs(plus) + abs(minus) - abs(c1c)


# ---------------------------------------------------------------------------
# Expected entropy gain (closed form)


def _ring(x):
    # 1 + sqrt(1 - x^2), the recurring denominator of the series weights
    return 1.0 + math.sqrt(max(0.0, 1.0 - x * x))


def _curve(x):
    # x^2/ring + ln(ring): mean self-information of one fringe at contrast x
    r = _ring(x)
    return x * x / r + math.log(r)


def _edge(x):
    # 1/ring + ln(ring): boundary term of the odd-harmonic series
    r = _ring(x)
    return 1.0 / r + math.log(r)


def _even_weight(x, m):
    # weight on the harmonic at 2*m*k
    g0 = math.sqrt(max(0.0, 1.0 - x * x))
    r = 1.0 + g0
    return (1.0 + 2.0 * m * g0) / (m * (4.0 * m * m - 1.0)) * (x / r) ** (2 * m)


def _odd_weight(x, m):
    # weight on the harmonic at (2*m-1)*k, for m >= 2
    g0 = math.sqrt(max(0.0, 1.0 - x * x))
    r = 1.0 + g0
    return (
        (1.0 + (2.0 * m - 1.0) * g0)
        / ((m - 1.0) * m * (2.0 * m - 1.0) * r)
        * (x / r) ** (2 * m - 2)
    )


def entropy_prepare(c, k, sym, vis):
    """Constant term and folded series coefficients of the expected entropy gain.

    Returns ``(const, v)`` such that

        gain(ctrl) = const + sum_j Re{v[j-1] e^{i j ctrl}} - sum_pm plnp(prob_pm)

    where v[j-1] already absorbs the prior coefficient c[j*k].  Returns None
    when sym == 0 or vis == 0 (the gain is identically zero).  Limiting
    branches: sym == 1 keeps only even j; sym == 1 and vis == 1 reduces the
    even weights to 1/(m(4m^2-1)).
    """
    if sym <= 0.0 or vis <= 0.0:
        return None
    order = c.shape[0] - 1
    jmax = order // k
    v = np.zeros(jmax, dtype=np.complex128)
    if sym >= 1.0:
        const = -2.0 * _LN2 + _curve(vis)
        for j in range(2, jmax + 1, 2):
            v[j - 1] = _even_weight(vis, j // 2) * c[j * k]
        return const, v

    half = 0.5 * sym
    mixed = sym * vis / (2.0 - sym)
    const = (
        -2.0 * _LN2
        + 0.5 * math.log(1.0 - (1.0 - sym) ** 2)
        + 0.5 * (1.0 - sym) * math.log((2.0 - sym) / sym)
        + (1.0 - half) * _curve(mixed)
        + half * _curve(vis)
    )
    for j in range(1, jmax + 1):
        if j % 2 == 0:
            m = j // 2
            w = (1.0 - half) * _even_weight(mixed, m) + half * _even_weight(vis, m)
        elif j == 1:
            w = (
                sym
                * vis
                * 0.5
                * (math.log(1.0 - half) + _edge(mixed) - math.log(half) - _edge(vis))
            )
        else:
            m = (j + 1) // 2
            w = sym * vis * 0.25 * (_odd_weight(vis, m) - _odd_weight(mixed, m))
        v[j - 1] = w * c[j * k]
    return const, v


def _plnp(x):
    return x * math.log(x) if x > 0.0 else 0.0


def entropy_gain_at(c, ctrl, k, sym, vis):
    """Expected entropy decrease (= expected KL to the prior) of one shot."""
    prep = entropy_prepare(c, k, sym, vis)
    if prep is None:
        return 0.0
    const, v = prep
    order = c.shape[0] - 1
    ck = complex(c[k]) if k <= order else 0j
    rot = complex(math.cos(ctrl), math.sin(ctrl))
    series = 0.0
    z = 1 + 0j
    for vj in v:
        z *= rot
        series += (vj * z).real
    mod = 0.5 * sym * vis * (rot * ck).real
    pp = 0.5 * (2.0 - sym) + mod
    pm = 0.5 * sym - mod
    return const + series - _plnp(pp) - _plnp(pm)


# ---------------------------------------------------------------------------
# Control-phase maximization: 64-point grid + golden-section refinement


def _grid_gains(kind, c, k, sym, vis, grid):
    if kind == SHARPNESS:
        c1c, up, dn = _sharp_parts(c, k)
        rot = np.exp(1j * grid)
        mix = rot * up + np.conj(rot) * dn
        w = sym * vis * 0.25
        off = 0.5 * (1.0 - sym)
        plus = (0.5 + off) * c1c + w * mix
        minus = (0.5 - off) * c1c - w * mix
        return np.abs(plus) + np.abs(minus) - abs(c1c)

    prep = entropy_prepare(c, k, sym, vis)
    if prep is None:
        return np.zeros(grid.shape[0])
    const, v = prep
    order = c.shape[0] - 1
    ck = complex(c[k]) if k <= order else 0j
    if v.size:
        js = np.arange(1, v.shape[0] + 1)
        series = (np.exp(1j * np.outer(grid, js)) @ v).real
    else:
        series = np.zeros(grid.shape[0])
    mod = 0.5 * sym * vis * (np.exp(1j * grid) * ck).real
    pp = 0.5 * (2.0 - sym) + mod
    pm = 0.5 * sym - mod
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = np.where(pp > 0.0, pp * np.log(np.where(pp > 0.0, pp, 1.0)), 0.0)
        ent = ent + np.where(pm > 0.0, pm * np.log(np.where(pm > 0.0, pm, 1.0)), 0.0)
    return const + series - ent


def opt_ctrl(kind, c, k, sym, vis, span):
    """Best control phase on [0, span): coarse 64-point grid, then golden
    refinement of the winning cell to CTRL_TOL.  Ties break toward smaller
    ctrl; the returned gain never falls below any coarse-grid value."""
    if kind == SHARPNESS:
        f = lambda a: sharpness_gain_at(c, a, k, sym, vis)
    else:
        f = lambda a: entropy_gain_at(c, a, k, sym, vis)

    step = span / CTRL_GRID
    grid = np.arange(CTRL_GRID) * step
    vals = _grid_gains(kind, c, k, sym, vis, grid)
    vmax = float(vals.max())
    # flat objectives carry |e^{i a}|-level rounding dust; treat near-ties
    # as ties so the smallest grid angle wins deterministically
    tol = 4e-15 * max(1.0, abs(vmax))
    i = int(np.argmax(vals >= vmax - tol))
    best_a = float(grid[i])
    best_g = f(best_a)

    lo = max(0.0, best_a - step)
    hi = min(span, best_a + step)
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = f(x1)
    f2 = f(x2)
    while hi - lo > CTRL_TOL:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
            if f1 > best_g + tol:
                best_g, best_a = f1, x1
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
            if f2 > best_g + tol:
                best_g, best_a = f2, x2
    return best_a, best_g


# ---------------------------------------------------------------------------
# Selection over a candidate table: brute force and Fibonacci search


def _sharp_bound(c, k, sym, vis):
    """Upper bound on the sharpness gain over every control phase.

    Two rigorous bounds, the smaller wins.  First, |plus| + |minus| <=
    sqrt(2(|plus|^2 + |minus|^2)) with the rotating mix at full modulus
    |c[k-1]| + |c[k+1]|.  Second, the along-c1 components of the mix cancel
    between the two outcomes, so when the mix cannot swallow either outcome
    amplitude the gain is quadratic in the perpendicular reach of the mix
    ellipse (sqrt(A^2+y^2) <= A + y^2/2A).  Returns (bound, w * mix_reach);
    the second value doubles as half the Lipschitz constant over ctrl."""
    n = c.shape[0] - 1
    s = abs(c[1]) if n >= 1 else 0.0
    up = complex(c[k - 1]) if k - 1 <= n else 0j
    dn = complex(np.conj(c[k + 1])) if k + 1 <= n else 0j
    reach = abs(up) + abs(dn)
    w = sym * vis * 0.25
    if w * reach == 0.0:
        # the mix term vanishes identically: gain is exactly zero
        return 0.0, 0.0
    off = 0.5 * (1.0 - sym)
    bp = 0.5 + off
    bm = 0.5 - off
    q = (bp * bp + bm * bm) * s * s + 2.0 * w * w * reach * reach \
        + 4.0 * w * off * s * reach
    bound = math.sqrt(2.0 * q) - s
    if bound < 0.0:
        bound = 0.0
    wu = w * reach
    if s > 0.0 and wu < bm * s:
        ihatc = complex(c[1]) / s
        ra = up * ihatc
        rb = dn * ihatc
        qy = math.hypot(ra.imag + rb.imag, ra.real - rb.real)
        b2 = (w * qy) ** 2 * 0.5 * (1.0 / (bp * s - wu) + 1.0 / (bm * s - wu))
        if b2 < bound:
            bound = b2
    return bound, wu


def _sharp_grid_max(c, k, sym, vis, span):
    grid = np.arange(CTRL_GRID) * (span / CTRL_GRID)
    return float(_grid_gains(SHARPNESS, c, k, sym, vis, grid).max())


def rate_argmax_brute(c, ks, ts, syms, viss, kind, span):
    """Evaluate every candidate; argmax of gain/time, ties to smaller k.

    Returns (index, ctrl, gain, rate).  The sharpness path screens candidates
    with a rigorous bound on the reachable gain before running the control
    optimiser; screened-out candidates lose strictly, so the winner (and its
    tie-breaking) is identical to the plain exhaustive scan."""
    m = ks.shape[0]
    if kind != SHARPNESS or m == 0:
        best = (-1, 0.0, 0.0, -math.inf)
        for i in range(m):
            a, g = opt_ctrl(kind, c, int(ks[i]), float(syms[i]), float(viss[i]), span)
            r = g / float(ts[i])
            if r > best[3]:
                best = (i, a, g, r)
        return best

    bounds = np.empty(m)
    reach = np.empty(m)
    for i in range(m):
        b, wr = _sharp_bound(c, int(ks[i]), float(syms[i]), float(viss[i]))
        bounds[i] = b / float(ts[i])
        reach[i] = wr
    step = span / CTRL_GRID
    best = (-1, 0.0, 0.0, -math.inf)
    # best-bound first, so the incumbent rate is near-maximal immediately and
    # the rest of the (sorted) candidates stop at the cheap test
    for i in np.argsort(-bounds, kind="stable"):
        i = int(i)
        if bounds[i] < best[3]:
            break
        t = float(ts[i])
        gm = _sharp_grid_max(c, int(ks[i]), float(syms[i]), float(viss[i]), span)
        # the true optimum sits within one grid step of some grid point;
        # 2 * reach is the Lipschitz constant of the gain in ctrl
        if gm < best[3] * t - 2.0 * reach[i] * step:
            continue
        a, g = opt_ctrl(kind, c, int(ks[i]), float(syms[i]), float(viss[i]), span)
        r = g / t
        if r > best[3] or (r == best[3] and i < best[0]):
            best = (i, a, g, r)
    return best


def _fib_argmax(f, lo, hi):
    # integer Fibonacci search for the argmax of a unimodal sequence on
    # [lo, hi]; ties move the bracket left so plateaus resolve to smaller
    # indices.  Indices past hi read as -inf (virtual padding).
    n = hi - lo + 1
    if n <= 3:
        best = lo
        for x in range(lo + 1, hi + 1):
            if f(x) > f(best):
                best = x
        return best
    fibs = [1, 2]
    while fibs[-1] < n + 1:
        fibs.append(fibs[-1] + fibs[-2])
    j = len(fibs) - 1
    a = lo - 1

    def probe(x):
        return f(x) if x <= hi else -math.inf

    x1 = a + fibs[j - 2]
    x2 = a + fibs[j - 1]
    f1 = probe(x1)
    f2 = probe(x2)
    while j > 2:
        if f1 >= f2:
            x2, f2 = x1, f1
            j -= 1
            x1 = a + fibs[j - 2]
            f1 = probe(x1)
        else:
            a = x1
            x1, f1 = x2, f2
            j -= 1
            x2 = a + fibs[j - 1]
            f2 = probe(x2)
    return x1 if f1 >= f2 else x2


FIB_CHUNKS = 3
FIB_MIN_BRUTE = 24


def rate_argmax_fib(c, ks, ts, syms, viss, kind, span):
    """Fibonacci-search selection: independent searches on FIB_CHUNKS equal
    slices of the candidate range, best-of, then a +-1 hill-climb polish.
    Exact on unimodal rate landscapes; O(log L) gain evaluations."""
    L = ks.shape[0]
    if L <= FIB_MIN_BRUTE:
        return rate_argmax_brute(c, ks, ts, syms, viss, kind, span)

    memo = {}

    def rate(i):
        hit = memo.get(i)
        if hit is None:
            a, g = opt_ctrl(kind, c, int(ks[i]), float(syms[i]), float(viss[i]), span)
            hit = (g / float(ts[i]), a, g)
            memo[i] = hit
        return hit[0]

    bounds = [(t * L) // FIB_CHUNKS for t in range(FIB_CHUNKS + 1)]
    best = None
    for t in range(FIB_CHUNKS):
        lo, hi = bounds[t], bounds[t + 1] - 1
        if hi < lo:
            continue
        cand = _fib_argmax(rate, lo, hi)
        if best is None or rate(cand) > rate(best):
            best = cand
    moved = True
    while moved:
        moved = False
        if best > 0 and rate(best - 1) > rate(best):
            best -= 1
            moved = True
        elif best + 1 < L and rate(best + 1) > rate(best):
            best += 1
            moved = True
    r, a, g = memo[best]
    return best, a, g, r
