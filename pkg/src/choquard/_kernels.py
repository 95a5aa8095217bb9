"""Pointwise hot kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports and ``CHOQUARD_DISABLE_NUMBA`` is
unset (or ``0``).  Both paths are always importable under their explicit
names so benchmarks and tests can compare them directly.
"""
import math
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


def _env_disables_numba():
    flag = os.environ.get("CHOQUARD_DISABLE_NUMBA", "0").strip().lower()
    return flag not in ("", "0", "false", "no")


HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and not _env_disables_numba()


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------- numpy path

def abs_pow_numpy(u, p):
    return np.abs(u) ** p


def odd_pow_numpy(u, p):
    """|u|^(p-2) u with the value 0 at u = 0."""
    a = np.abs(u)
    out = np.zeros_like(u)
    nz = a > 0
    out[nz] = a[nz] ** (p - 1.0) * np.sign(u[nz])
    return out


def coupling_force_numpy(pot, u, p, coef):
    return coef * pot * odd_pow_numpy(u, p)


def rk4_radial_numpy(q0, w0, r0, dr, nsteps):
    state = np.array(_taylor_start(q0, w0, r0))
    traj = np.empty((nsteps + 1, 6))
    traj[0] = state
    r = r0
    # off-target shots blow up past the turning point; the caller only reads the head
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(nsteps):
            state = _rk4_step(state, r, dr)
            r += dr
            traj[i + 1] = state
    return traj


# ---------------------------------------------------------------- numba path

@_njit
def _abs_pow_flat(u, p, out):
    for i in range(u.size):
        out[i] = abs(u[i]) ** p


@_njit
def _odd_pow_flat(u, p, out):
    e = p - 1.0
    for i in range(u.size):
        x = u[i]
        if x > 0.0:
            out[i] = x ** e
        elif x < 0.0:
            out[i] = -((-x) ** e)
        else:
            out[i] = 0.0


@_njit
def _coupling_force_flat(pot, u, p, coef, out):
    e = p - 1.0
    for i in range(u.size):
        x = u[i]
        if x > 0.0:
            out[i] = coef * pot[i] * x ** e
        elif x < 0.0:
            out[i] = -coef * pot[i] * (-x) ** e
        else:
            out[i] = 0.0


def _flat(a):
    return np.ascontiguousarray(a, dtype=np.float64).reshape(-1)


def abs_pow_numba(u, p):
    out = np.empty(np.shape(u))
    _abs_pow_flat(_flat(u), float(p), out.reshape(-1))
    return out


def odd_pow_numba(u, p):
    out = np.empty(np.shape(u))
    _odd_pow_flat(_flat(u), float(p), out.reshape(-1))
    return out


def coupling_force_numba(pot, u, p, coef):
    out = np.empty(np.shape(u))
    _coupling_force_flat(_flat(pot), _flat(u), float(p), float(coef), out.reshape(-1))
    return out


# Radial Choquard-Newton system in 3D, state = (Q, Q', W, W', mass, W-weighted mass):
#   Q'' + 2Q'/r = -W Q,   W'' + 2W'/r = -Q^2
# The last two components accumulate 4 pi r^2 Q^2 and 4 pi r^2 W Q^2.

def _rhs(s, r):
    q, dq, w, dw = s[0], s[1], s[2], s[3]
    four_pi_r2 = 4.0 * math.pi * r * r
    return (
        dq,
        -2.0 * dq / r - w * q,
        dw,
        -2.0 * dw / r - q * q,
        four_pi_r2 * q * q,
        four_pi_r2 * w * q * q,
    )


def _taylor_start(q0, w0, r0):
    # series about r = 0, exact through r^2
    q = q0 - w0 * q0 * r0 * r0 / 6.0
    dq = -w0 * q0 * r0 / 3.0
    w = w0 - q0 * q0 * r0 * r0 / 6.0
    dw = -q0 * q0 * r0 / 3.0
    vol = 4.0 * math.pi * r0 ** 3 / 3.0
    return (q, dq, w, dw, vol * q0 * q0, vol * w0 * q0 * q0)


def _rk4_step(s, r, h):
    k1 = np.array(_rhs(s, r))
    k2 = np.array(_rhs(s + 0.5 * h * k1, r + 0.5 * h))
    k3 = np.array(_rhs(s + 0.5 * h * k2, r + 0.5 * h))
    k4 = np.array(_rhs(s + h * k3, r + h))
    return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@_njit
def _rk4_radial_jit(q0, w0, r0, dr, nsteps):
    traj = np.empty((nsteps + 1, 6))
    s = np.empty(6)
    k1 = np.empty(6)
    k2 = np.empty(6)
    k3 = np.empty(6)
    k4 = np.empty(6)
    tmp = np.empty(6)
    s[0] = q0 - w0 * q0 * r0 * r0 / 6.0
    s[1] = -w0 * q0 * r0 / 3.0
    s[2] = w0 - q0 * q0 * r0 * r0 / 6.0
    s[3] = -q0 * q0 * r0 / 3.0
    vol = 4.0 * math.pi * r0 ** 3 / 3.0
    s[4] = vol * q0 * q0
    s[5] = vol * w0 * q0 * q0
    traj[0, :] = s
    r = r0
    for i in range(nsteps):
        _rhs_into(s, r, k1)
        for j in range(6):
            tmp[j] = s[j] + 0.5 * dr * k1[j]
        _rhs_into(tmp, r + 0.5 * dr, k2)
        for j in range(6):
            tmp[j] = s[j] + 0.5 * dr * k2[j]
        _rhs_into(tmp, r + 0.5 * dr, k3)
        for j in range(6):
            tmp[j] = s[j] + dr * k3[j]
        _rhs_into(tmp, r + dr, k4)
        for j in range(6):
            s[j] = s[j] + (dr / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
        r += dr
        traj[i + 1, :] = s
    return traj


@_njit
def _rhs_into(s, r, out):
    q = s[0]
    dq = s[1]
    w = s[2]
    dw = s[3]
    four_pi_r2 = 4.0 * math.pi * r * r
    out[0] = dq
    out[1] = -2.0 * dq / r - w * q
    out[2] = dw
    out[3] = -2.0 * dw / r - q * q
    out[4] = four_pi_r2 * q * q
    out[5] = four_pi_r2 * w * q * q


def rk4_radial_numba(q0, w0, r0, dr, nsteps):
    return _rk4_radial_jit(float(q0), float(w0), float(r0), float(dr), int(nsteps))


if USE_NUMBA:
    abs_pow = abs_pow_numba
    odd_pow = odd_pow_numba
    coupling_force = coupling_force_numba
    rk4_radial = rk4_radial_numba
else:
    abs_pow = abs_pow_numpy
    odd_pow = odd_pow_numpy
    coupling_force = coupling_force_numpy
    rk4_radial = rk4_radial_numpy


def backend():
    return "numba" if USE_NUMBA else "numpy"
