# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot kernels.

Mirrors ``phasest._purepy`` function for function; ``phasest._backend``
prefers this module when it importable.  See _purepy for the shared
conventions (coefficient layout, outcome/ctrl/k/sym/vis meanings); the
docstrings there are authoritative.  Numerical behavior matches the
reference to rounding dust; tests/test_backends.py holds the two in
lock-step."""

import math

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin, sqrt, log, fabs, hypot

cnp.import_array()

TRIM_EPS = 1e-15
CTRL_GRID = 64
CTRL_TOL = 1e-6

SHARPNESS = 0
ENTROPY = 1

FIB_CHUNKS = 3
FIB_MIN_BRUTE = 24

cdef double _TRIM = 1e-15
cdef int _GRID = 64
cdef double _TOL = 1e-6
cdef double _INVPHI = (sqrt(5.0) - 1.0) / 2.0
cdef double _LN2 = log(2.0)


# ---------------------------------------------------------------------------
# Bayes update


def bayes_update(cnp.ndarray[cnp.complex128_t, ndim=1] c, int outcome, double ctrl,
                 int k, double sym, double vis):
    """See _purepy.bayes_update."""
    cdef Py_ssize_t n_old = c.shape[0] - 1
    cdef Py_ssize_t n_new = n_old + k
    cdef double base = 0.5 * (1.0 + outcome * (1.0 - sym))
    cdef double w = outcome * sym * vis * 0.25
    cdef double complex rot = cos(ctrl) + 1j * sin(ctrl)
    cdef double complex wr = w * rot
    cdef double complex wrc = w * rot.conjugate()

    out_arr = np.zeros(n_new + 1, dtype=np.complex128)
    cdef double complex[::1] o = out_arr
    cdef double complex[::1] cc = c
    cdef Py_ssize_t n, m

    for n in range(n_old + 1):
        o[n] = base * cc[n]
    for n in range(n_old - k + 1):
        o[n] = o[n] + wr * cc[n + k]
    for n in range(k, n_new + 1):
        o[n] = o[n] + wrc * cc[n - k]
    m = k if k < n_old else n_old
    for n in range(k - m, k):
        o[n] = o[n] + wrc * cc[k - n].conjugate()

    cdef double prob = o[0].real
    if prob <= 0.0:
        return None, prob
    cdef double inv = 1.0 / prob
    for n in range(n_new + 1):
        o[n] = o[n] * inv
    o[0] = 1.0

    cdef Py_ssize_t last = n_new
    while last > n_old and abs(o[last]) < _TRIM:
        last -= 1
    return out_arr[: last + 1], prob


# ---------------------------------------------------------------------------
# Expected sharpness gain


cdef inline double _sharp_eval(double complex c1c, double complex up, double complex dn,
                               double w, double off, double ctrl) nogil:
    cdef double complex rot
    cdef double complex mix, plus, minus
    rot.real = cos(ctrl)
    rot.imag = sin(ctrl)
    mix = rot * up + rot.conjugate() * dn
    plus = (0.5 + off) * c1c + w * mix
    minus = (0.5 - off) * c1c - w * mix
    return abs(plus) + abs(minus) - abs(c1c)


cdef void _sharp_load(double complex[::1] cc, int k,
                      double complex *c1c, double complex *up, double complex *dn):
    cdef Py_ssize_t n = cc.shape[0] - 1
    c1c[0] = cc[1].conjugate() if n >= 1 else 0
    up[0] = cc[k - 1] if k - 1 <= n else 0
    dn[0] = cc[k + 1].conjugate() if k + 1 <= n else 0


def sharpness_gain_at(cnp.ndarray[cnp.complex128_t, ndim=1] c, double ctrl, int k,
                      double sym, double vis):
    """See _purepy.sharpness_gain_at."""
    cdef double complex c1c, up, dn
    _sharp_load(c, k, &c1c, &up, &dn)
    return _sharp_eval(c1c, up, dn, sym * vis * 0.25, 0.5 * (1.0 - sym), ctrl)


# ---------------------------------------------------------------------------
# Expected entropy gain (closed form)


cdef inline double _g0(double x) nogil:
    cdef double t = 1.0 - x * x
    return sqrt(t) if t > 0.0 else 0.0


cdef inline double _ring(double x) nogil:
    return 1.0 + _g0(x)


cdef inline double _curve(double x) nogil:
    cdef double r = _ring(x)
    return x * x / r + log(r)


cdef inline double _edge(double x) nogil:
    cdef double r = _ring(x)
    return 1.0 / r + log(r)


cdef inline double _even_weight(double x, double m) nogil:
    cdef double g0 = _g0(x)
    cdef double r = 1.0 + g0
    return (1.0 + 2.0 * m * g0) / (m * (4.0 * m * m - 1.0)) * (x / r) ** (2.0 * m)


cdef inline double _odd_weight(double x, double m) nogil:
    cdef double g0 = _g0(x)
    cdef double r = 1.0 + g0
    return (1.0 + (2.0 * m - 1.0) * g0) / ((m - 1.0) * m * (2.0 * m - 1.0) * r) \
        * (x / r) ** (2.0 * m - 2.0)


def entropy_prepare(cnp.ndarray[cnp.complex128_t, ndim=1] c, int k, double sym, double vis):
    """See _purepy.entropy_prepare."""
    if sym <= 0.0 or vis <= 0.0:
        return None
    cdef Py_ssize_t order = c.shape[0] - 1
    cdef Py_ssize_t jmax = order // k
    v_arr = np.zeros(jmax, dtype=np.complex128)
    cdef double complex[::1] v = v_arr
    cdef double complex[::1] cc = c
    cdef Py_ssize_t j
    cdef double m, w, const_
    cdef double half, mixed

    if sym >= 1.0:
        const_ = -2.0 * _LN2 + _curve(vis)
        for j in range(2, jmax + 1, 2):
            v[j - 1] = _even_weight(vis, j / 2.0) * cc[j * k]
        return const_, v_arr

    half = 0.5 * sym
    mixed = sym * vis / (2.0 - sym)
    const_ = (
        -2.0 * _LN2
        + 0.5 * log(1.0 - (1.0 - sym) ** 2)
        + 0.5 * (1.0 - sym) * log((2.0 - sym) / sym)
        + (1.0 - half) * _curve(mixed)
        + half * _curve(vis)
    )
    for j in range(1, jmax + 1):
        if j % 2 == 0:
            m = j / 2.0
            w = (1.0 - half) * _even_weight(mixed, m) + half * _even_weight(vis, m)
        elif j == 1:
            w = sym * vis * 0.5 * (log(1.0 - half) + _edge(mixed) - log(half) - _edge(vis))
        else:
            m = (j + 1) / 2.0
            w = sym * vis * 0.25 * (_odd_weight(vis, m) - _odd_weight(mixed, m))
        v[j - 1] = w * cc[j * k]
    return const_, v_arr


cdef inline double _plnp(double x) nogil:
    return x * log(x) if x > 0.0 else 0.0


cdef double _ent_eval(double const_, double complex[::1] v, double complex ck,
                      double sym, double vis, double ctrl) nogil:
    cdef double complex rot, z
    cdef double series = 0.0
    cdef Py_ssize_t j
    cdef double mod, pp, pm
    rot.real = cos(ctrl)
    rot.imag = sin(ctrl)
    z = 1.0
    for j in range(v.shape[0]):
        z = z * rot
        series += (v[j] * z).real
    mod = 0.5 * sym * vis * (rot * ck).real
    pp = 0.5 * (2.0 - sym) + mod
    pm = 0.5 * sym - mod
    return const_ + series - _plnp(pp) - _plnp(pm)


def entropy_gain_at(cnp.ndarray[cnp.complex128_t, ndim=1] c, double ctrl, int k,
                    double sym, double vis):
    """See _purepy.entropy_gain_at."""
    prep = entropy_prepare(c, k, sym, vis)
    if prep is None:
        return 0.0
    cdef double const_ = prep[0]
    cdef double complex[::1] v = prep[1]
    cdef Py_ssize_t order = c.shape[0] - 1
    cdef double complex ck = c[k] if k <= order else 0
    return _ent_eval(const_, v, ck, sym, vis, ctrl)


# ---------------------------------------------------------------------------
# Control-phase maximization: 64-point grid + golden-section refinement


cdef inline double _sharp_eval_t(double complex c1c, double complex up,
                                 double complex dn, double w, double off,
                                 double ca, double sa) nogil:
    # _sharp_eval with the rotation's cos/sin supplied (grid table reuse)
    cdef double complex rot
    cdef double complex mix, plus, minus
    rot.real = ca
    rot.imag = sa
    mix = rot * up + rot.conjugate() * dn
    plus = (0.5 + off) * c1c + w * mix
    minus = (0.5 - off) * c1c - w * mix
    return abs(plus) + abs(minus) - abs(c1c)


cdef int _opt_sharp(double complex c1c, double complex up, double complex dn,
                    double w, double off, double span,
                    double *ctab, double *stab, double bail_gain,
                    double *out_a, double *out_g) noexcept nogil:
    # full grid + golden refinement for the sharpness objective, all in C;
    # logic mirrors opt_ctrl exactly.  If the grid maximum falls below
    # bail_gain the refined optimum cannot matter to the caller: stop and
    # report 0 (out_a/out_g are then meaningless).
    cdef double step = span / _GRID
    cdef double vmax = -1e300
    cdef double[64] gvals
    cdef int i, ibest
    for i in range(_GRID):
        gvals[i] = _sharp_eval_t(c1c, up, dn, w, off, ctab[i], stab[i])
        if gvals[i] > vmax:
            vmax = gvals[i]
    if vmax < bail_gain:
        out_a[0] = 0.0
        out_g[0] = vmax
        return 0
    cdef double tol = 4e-15 * (1.0 if fabs(vmax) < 1.0 else fabs(vmax))
    ibest = 0
    for i in range(_GRID):
        if gvals[i] >= vmax - tol:
            ibest = i
            break
    cdef double best_a = ibest * step
    cdef double best_g = gvals[ibest]
    cdef double lo = best_a - step
    cdef double hi = best_a + step
    if lo < 0.0:
        lo = 0.0
    if hi > span:
        hi = span
    cdef double x1 = hi - _INVPHI * (hi - lo)
    cdef double x2 = lo + _INVPHI * (hi - lo)
    cdef double f1 = _sharp_eval(c1c, up, dn, w, off, x1)
    cdef double f2 = _sharp_eval(c1c, up, dn, w, off, x2)
    while hi - lo > _TOL:
        if f1 >= f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = _sharp_eval(c1c, up, dn, w, off, x1)
            if f1 > best_g + tol:
                best_g = f1
                best_a = x1
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = _sharp_eval(c1c, up, dn, w, off, x2)
            if f2 > best_g + tol:
                best_g = f2
                best_a = x2
    out_a[0] = best_a
    out_g[0] = best_g
    return 1


cdef void _fill_rot_table(double span, double *ctab, double *stab) noexcept nogil:
    cdef double step = span / _GRID
    cdef int i
    for i in range(_GRID):
        ctab[i] = cos(i * step)
        stab[i] = sin(i * step)


def opt_ctrl(int kind, cnp.ndarray[cnp.complex128_t, ndim=1] c, int k,
             double sym, double vis, double span):
    """See _purepy.opt_ctrl."""
    cdef double complex c1c = 0, up = 0, dn = 0, ck = 0
    cdef double const_ = 0.0
    cdef double complex[::1] v = None
    cdef bint flat = False
    cdef Py_ssize_t order = c.shape[0] - 1
    cdef double[64] ctab
    cdef double[64] stab
    cdef double oa = 0.0, og = 0.0

    if kind == SHARPNESS:
        _sharp_load(c, k, &c1c, &up, &dn)
        _fill_rot_table(span, &ctab[0], &stab[0])
        _opt_sharp(c1c, up, dn, sym * vis * 0.25, 0.5 * (1.0 - sym), span,
                   &ctab[0], &stab[0], -1e300, &oa, &og)
        return oa, og

    prep = entropy_prepare(c, k, sym, vis)
    if prep is None:
        flat = True
    else:
        const_ = prep[0]
        v = prep[1]
        ck = c[k] if k <= order else 0

    cdef double step = span / _GRID
    cdef double vmax = -1e300
    cdef double[64] gvals
    cdef int i, ibest
    cdef double a

    for i in range(_GRID):
        a = i * step
        if flat:
            gvals[i] = 0.0
        else:
            gvals[i] = _ent_eval(const_, v, ck, sym, vis, a)
        if gvals[i] > vmax:
            vmax = gvals[i]

    cdef double tol = 4e-15 * (1.0 if fabs(vmax) < 1.0 else fabs(vmax))
    ibest = 0
    for i in range(_GRID):
        if gvals[i] >= vmax - tol:
            ibest = i
            break

    cdef double best_a = ibest * step
    cdef double best_g = gvals[ibest]
    cdef double lo = best_a - step
    cdef double hi = best_a + step
    if lo < 0.0:
        lo = 0.0
    if hi > span:
        hi = span
    cdef double x1 = hi - _INVPHI * (hi - lo)
    cdef double x2 = lo + _INVPHI * (hi - lo)
    cdef double f1, f2

    if flat:
        return best_a, best_g

    f1 = _ent_eval(const_, v, ck, sym, vis, x1)
    f2 = _ent_eval(const_, v, ck, sym, vis, x2)
    while hi - lo > _TOL:
        if f1 >= f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = _ent_eval(const_, v, ck, sym, vis, x1)
            if f1 > best_g + tol:
                best_g = f1
                best_a = x1
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = _ent_eval(const_, v, ck, sym, vis, x2)
            if f2 > best_g + tol:
                best_g = f2
                best_a = x2
    return best_a, best_g


# ---------------------------------------------------------------------------
# Selection over a candidate table: brute force and Fibonacci search


cdef void _sharp_bound(double complex[::1] cc, int k, double sym, double vis,
                       double *bound, double *wreach):
    # rigorous sup over ctrl of the sharpness gain; see _purepy._sharp_bound
    cdef Py_ssize_t n = cc.shape[0] - 1
    cdef double s = abs(cc[1]) if n >= 1 else 0.0
    cdef double complex up = cc[k - 1] if k - 1 <= n else 0
    cdef double complex dn = cc[k + 1].conjugate() if k + 1 <= n else 0
    cdef double reach = abs(up) + abs(dn)
    cdef double w = sym * vis * 0.25
    cdef double off, bp, bm, q, b, wu, qy, b2
    cdef double complex ihatc, ra, rb
    if w * reach == 0.0:
        bound[0] = 0.0
        wreach[0] = 0.0
        return
    off = 0.5 * (1.0 - sym)
    bp = 0.5 + off
    bm = 0.5 - off
    q = (bp * bp + bm * bm) * s * s + 2.0 * w * w * reach * reach \
        + 4.0 * w * off * s * reach
    b = sqrt(2.0 * q) - s
    if b < 0.0:
        b = 0.0
    wu = w * reach
    if s > 0.0 and wu < bm * s:
        ihatc = cc[1] / s
        ra = up * ihatc
        rb = dn * ihatc
        qy = hypot(ra.imag + rb.imag, ra.real - rb.real)
        b2 = (w * qy) * (w * qy) * 0.5 \
            * (1.0 / (bp * s - wu) + 1.0 / (bm * s - wu))
        if b2 < b:
            b = b2
    bound[0] = b
    wreach[0] = wu


def rate_argmax_brute(c, ks, ts, syms, viss, int kind, double span):
    """See _purepy.rate_argmax_brute."""
    cdef Py_ssize_t i, m = ks.shape[0]
    cdef double r
    best = (-1, 0.0, 0.0, -math.inf)
    if kind != SHARPNESS or m == 0:
        for i in range(m):
            a, g = opt_ctrl(kind, c, int(ks[i]), float(syms[i]), float(viss[i]), span)
            r = g / float(ts[i])
            if r > best[3]:
                best = (i, a, g, r)
        return best

    cdef double complex[::1] cc = c
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bounds = np.empty(m)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] reach = np.empty(m)
    cdef double b, wr, gm, t
    cdef double complex c1c, up, dn
    cdef double[64] ctab
    cdef double[64] stab
    for i in range(m):
        _sharp_bound(cc, int(ks[i]), float(syms[i]), float(viss[i]), &b, &wr)
        bounds[i] = b / float(ts[i])
        reach[i] = wr
    _fill_rot_table(span, &ctab[0], &stab[0])
    cdef double step = span / _GRID
    cdef double best_r = -math.inf
    cdef double sym_i, vis_i, oa, og
    cdef Py_ssize_t j, best_i = -1
    cdef double best_a = 0.0, best_g = 0.0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] order = np.argsort(-bounds, kind="stable")
    for j in range(m):
        i = order[j]
        if bounds[i] < best_r:
            break
        t = float(ts[i])
        sym_i = float(syms[i])
        vis_i = float(viss[i])
        _sharp_load(cc, int(ks[i]), &c1c, &up, &dn)
        if not _opt_sharp(c1c, up, dn, sym_i * vis_i * 0.25,
                          0.5 * (1.0 - sym_i), span, &ctab[0], &stab[0],
                          best_r * t - 2.0 * reach[i] * step, &oa, &og):
            continue
        r = og / t
        if r > best_r or (r == best_r and i < best_i):
            best_i = i
            best_a = oa
            best_g = og
            best_r = r
    return int(best_i), best_a, best_g, best_r


def _fib_argmax(f, lo, hi):
    """See _purepy._fib_argmax."""
    n = hi - lo + 1
    if n <= 3:
        best = lo
        for x in range(lo + 1, hi + 1):
            if f(x) > f(best):
                best = x
        return best
    # no negative list indices here: the module disables wraparound
    fibs = [1, 2]
    tail, prev = 2, 1
    while tail < n + 1:
        tail, prev = tail + prev, tail
        fibs.append(tail)
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


def rate_argmax_fib(c, ks, ts, syms, viss, int kind, double span):
    """See _purepy.rate_argmax_fib."""
    cdef Py_ssize_t L = ks.shape[0]
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
