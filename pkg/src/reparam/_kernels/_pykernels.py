"""Reference (numpy) implementations of the integration kernels.

Signatures mirror ``_ckernels.pyx`` exactly; the backend is chosen in
``reparam._kernels``.
"""

import numpy as np

from ..errors import BlowUpError, StepSizeUnderflow

# Dormand-Prince 5(4)
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)


def _f(rhs, t, y):
    return np.asarray(rhs(t, y.copy()), dtype=float)


def rk4_fixed(rhs, t0, t1, y0, n):
    h = (t1 - t0) / n
    d = y0.shape[0]
    times = t0 + h * np.arange(n + 1, dtype=float)
    times[n] = t1
    Y = np.empty((n + 1, d))
    y = np.array(y0, dtype=float)
    Y[0] = y
    for i in range(n):
        t = times[i]
        k1 = _f(rhs, t, y)
        k2 = _f(rhs, t + 0.5 * h, y + (0.5 * h) * k1)
        k3 = _f(rhs, t + 0.5 * h, y + (0.5 * h) * k2)
        k4 = _f(rhs, t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise BlowUpError(f"non-finite state at t={times[i + 1]!r}")
        Y[i + 1] = y
    return times, Y


def dopri5(rhs, t0, t1, y0, atol, rtol, h0, hmin, max_steps):
    y = np.array(y0, dtype=float)
    d = y.shape[0]
    t = t0
    h = min(h0, t1 - t0)
    times = [t0]
    states = [y.copy()]
    k = np.empty((7, d))
    k[0] = _f(rhs, t, y)
    nrej = 0
    steps = 0
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
            ys = y + h * (np.asarray(_A[s]) @ k[:s])
            k[s] = _f(rhs, t + _C[s] * h, ys)
        ynew = ys
        err = h * (np.asarray(_E) @ k)
        sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
        errnorm = float(np.sqrt(np.mean((err / sc) ** 2)))
        if not np.isfinite(errnorm):
            if not np.all(np.isfinite(ynew)):
                raise BlowUpError(f"non-finite state near t={t!r}")
            errnorm = np.inf
        if errnorm <= 1.0:
            t = t1 if last else t + h
            y = ynew
            times.append(t)
            states.append(y.copy())
            k[0] = k[6]
            steps += 1
            fac = 5.0 if errnorm == 0.0 else min(5.0, max(0.2, 0.9 * errnorm ** -0.2))
        else:
            nrej += 1
            fac = max(0.2, 0.9 * errnorm ** -0.2) if np.isfinite(errnorm) else 0.2
        h = h * fac
    return np.array(times), np.array(states), nrej


def abm_pece(rhs, x0, tgrid, cpred, dcorr, a0, bscale, ascale):
    N = tgrid.shape[0] - 1
    d = x0.shape[0]
    X = np.empty((N + 1, d))
    F = np.empty((N + 1, d))
    X[0] = x0
    F[0] = _f(rhs, tgrid[0], X[0])
    for n in range(N):
        xp = x0 + bscale * (cpred[n::-1] @ F[: n + 1])
        if not np.all(np.isfinite(xp)):
            raise BlowUpError(f"non-finite predictor at t={tgrid[n + 1]!r}")
        fp = _f(rhs, tgrid[n + 1], xp)
        acc = a0[n] * F[0] + fp
        if n > 0:
            acc = acc + dcorr[n - 1 :: -1] @ F[1 : n + 1]
        X[n + 1] = x0 + ascale * acc
        if not np.all(np.isfinite(X[n + 1])):
            raise BlowUpError(f"non-finite state at t={tgrid[n + 1]!r}")
        F[n + 1] = _f(rhs, tgrid[n + 1], X[n + 1])
    return X
