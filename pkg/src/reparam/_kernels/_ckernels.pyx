# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled integration kernels; same signatures as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, sqrt, isfinite, fmax, fmin, pow

from reparam.errors import BlowUpError, StepSizeUnderflow

cnp.import_array()

cdef double[7] _C = [0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0]
cdef double[7][6] _A = [
    [0, 0, 0, 0, 0, 0],
    [1.0 / 5, 0, 0, 0, 0, 0],
    [3.0 / 40, 9.0 / 40, 0, 0, 0, 0],
    [44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0],
    [19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0],
    [9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0],
    [35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84],
]
cdef double[7] _E = [71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920,
                     -17253.0 / 339200, 22.0 / 525, -1.0 / 40]


cdef inline bint _all_finite(double[::1] v) noexcept:
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        if not isfinite(v[i]):
            return False
    return True


cdef inline void _call(object rhs, double t, double[::1] y, double[::1] out) except *:
    cdef double[::1] r = np.asarray(rhs(t, np.array(y, copy=True)), dtype=np.float64).ravel()
    cdef Py_ssize_t i
    if r.shape[0] != out.shape[0]:
        raise ValueError(f"rhs returned {r.shape[0]} components, expected {out.shape[0]}")
    for i in range(out.shape[0]):
        out[i] = r[i]


def rk4_fixed(rhs, double t0, double t1, y0, Py_ssize_t n):
    cdef double h = (t1 - t0) / n
    cdef double[::1] yv = np.array(y0, dtype=np.float64)
    cdef Py_ssize_t d = yv.shape[0]
    times_np = t0 + h * np.arange(n + 1, dtype=np.float64)
    times_np[n] = t1
    Y_np = np.empty((n + 1, d))
    cdef double[:, ::1] Y = Y_np
    cdef double[::1] times = times_np
    cdef double[::1] k1 = np.empty(d), k2 = np.empty(d), k3 = np.empty(d), k4 = np.empty(d)
    cdef double[::1] tmp = np.empty(d)
    cdef Py_ssize_t i, c
    cdef double t
    for c in range(d):
        Y[0, c] = yv[c]
    for i in range(n):
        t = times[i]
        _call(rhs, t, yv, k1)
        for c in range(d):
            tmp[c] = yv[c] + (0.5 * h) * k1[c]
        _call(rhs, t + 0.5 * h, tmp, k2)
        for c in range(d):
            tmp[c] = yv[c] + (0.5 * h) * k2[c]
        _call(rhs, t + 0.5 * h, tmp, k3)
        for c in range(d):
            tmp[c] = yv[c] + h * k3[c]
        _call(rhs, t + h, tmp, k4)
        for c in range(d):
            yv[c] = yv[c] + (h / 6.0) * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c])
            Y[i + 1, c] = yv[c]
        if not _all_finite(yv):
            raise BlowUpError(f"non-finite state at t={times[i + 1]!r}")
    return times_np, Y_np


def dopri5(rhs, double t0, double t1, y0, double atol, double rtol,
           double h0, double hmin, Py_ssize_t max_steps):
    cdef double[::1] y = np.array(y0, dtype=np.float64)
    cdef Py_ssize_t d = y.shape[0]
    cdef double[:, ::1] k = np.empty((7, d))
    cdef double[::1] ys = np.empty(d)
    cdef double t = t0, h = fmin(h0, t1 - t0), acc, sc, e, errnorm, fac
    cdef Py_ssize_t s, j, c, steps = 0, nrej = 0
    cdef bint last
    times = [t0]
    states = [np.array(y, copy=True)]
    _call(rhs, t, y, k[0])
    while t < t1:
        if steps >= max_steps:
            raise StepSizeUnderflow(f"exceeded {max_steps} steps before reaching t={t1!r}")
        last = False
        if t + h >= t1 or t + 1.01 * h >= t1:
            h = t1 - t
            last = True
        if h < hmin:
            raise StepSizeUnderflow(f"step size {h!r} below {hmin!r} at t={t!r}")
        for s in range(1, 7):
            for c in range(d):
                acc = 0.0
                for j in range(s):
                    acc = acc + _A[s][j] * k[j, c]
                ys[c] = y[c] + h * acc
            _call(rhs, t + _C[s] * h, ys, k[s])
        errnorm = 0.0
        for c in range(d):
            acc = 0.0
            for j in range(7):
                acc = acc + _E[j] * k[j, c]
            e = h * acc
            sc = atol + rtol * fmax(fabs(y[c]), fabs(ys[c]))
            errnorm += (e / sc) * (e / sc)
        errnorm = sqrt(errnorm / d)
        if not isfinite(errnorm):
            if not _all_finite(ys):
                raise BlowUpError(f"non-finite state near t={t!r}")
        if errnorm <= 1.0:
            t = t1 if last else t + h
            for c in range(d):
                y[c] = ys[c]
                k[0, c] = k[6, c]
            times.append(t)
            states.append(np.array(y, copy=True))
            steps += 1
            if errnorm == 0.0:
                fac = 5.0
            else:
                fac = fmin(5.0, fmax(0.2, 0.9 * pow(errnorm, -0.2)))
        else:
            nrej += 1
            if isfinite(errnorm):
                fac = fmax(0.2, 0.9 * pow(errnorm, -0.2))
            else:
                fac = 0.2
        h = h * fac
    return np.array(times), np.array(states), nrej


def abm_pece(rhs, x0_in, tgrid_in, cpred_in, dcorr_in, a0_in,
             double bscale, double ascale):
    cdef double[::1] x0 = np.ascontiguousarray(x0_in, dtype=np.float64)
    cdef double[::1] tgrid = np.ascontiguousarray(tgrid_in, dtype=np.float64)
    cdef double[::1] cpred = np.ascontiguousarray(cpred_in, dtype=np.float64)
    cdef double[::1] dcorr = np.ascontiguousarray(dcorr_in, dtype=np.float64)
    cdef double[::1] a0 = np.ascontiguousarray(a0_in, dtype=np.float64)
    cdef Py_ssize_t N = tgrid.shape[0] - 1
    cdef Py_ssize_t d = x0.shape[0]
    X_np = np.empty((N + 1, d))
    F_np = np.empty((N + 1, d))
    cdef double[:, ::1] X = X_np
    cdef double[:, ::1] F = F_np
    cdef double[::1] acc = np.empty(d)
    cdef double[::1] xp = np.empty(d)
    cdef double[::1] fp = np.empty(d)
    cdef Py_ssize_t n, j, c
    cdef double w
    for c in range(d):
        X[0, c] = x0[c]
    _call(rhs, tgrid[0], X[0], F[0])
    for n in range(N):
        for c in range(d):
            acc[c] = 0.0
        for j in range(n + 1):
            w = cpred[n - j]
            for c in range(d):
                acc[c] += w * F[j, c]
        for c in range(d):
            xp[c] = x0[c] + bscale * acc[c]
        if not _all_finite(xp):
            raise BlowUpError(f"non-finite predictor at t={tgrid[n + 1]!r}")
        _call(rhs, tgrid[n + 1], xp, fp)
        for c in range(d):
            acc[c] = a0[n] * F[0, c] + fp[c]
        for j in range(1, n + 1):
            w = dcorr[n - j]
            for c in range(d):
                acc[c] += w * F[j, c]
        for c in range(d):
            X[n + 1, c] = x0[c] + ascale * acc[c]
        if not _all_finite(X[n + 1]):
            raise BlowUpError(f"non-finite state at t={tgrid[n + 1]!r}")
        _call(rhs, tgrid[n + 1], X[n + 1], F[n + 1])
    return X_np
