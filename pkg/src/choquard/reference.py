"""Independent oracles: radial shooting for the 3D Choquard-Pekar ground state, golden-section search.

Neither routine touches the grid, FFT or energy code, so they can check it.
"""
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import _kernels


@dataclass(frozen=True)
class RadialGroundState:
    """Ground state Q of -Lap Q + Q = (|x|^-1/(4 pi) * Q^2) Q in R^3, by shooting."""

    peak: float  # Q(0) after rescaling
    kinetic: float  # int |grad Q|^2
    mass: float  # int Q^2
    coupling: float  # int (I_2 * Q^2) Q^2
    r_match: float

    @property
    def h1_norm_sq(self):
        return self.kinetic + self.mass

    @property
    def nehari_defect(self):
        return (self.h1_norm_sq - self.coupling) / self.coupling


def _classify(traj):
    """+1 if Q crossed zero (too much attraction), -1 if Q turned upward, 0 if neither."""
    q = traj[:, 0]
    dq = traj[:, 1]
    neg = q < 0
    up = dq > 0
    i_neg = int(neg.argmax()) if neg.any() else None
    i_up = int(up.argmax()) if up.any() else None
    if i_neg is None and i_up is None:
        return 0, len(q) - 1
    if i_up is None or (i_neg is not None and i_neg < i_up):
        return 1, i_neg
    return -1, i_up


def shoot_choquard_pekar(r_max=40.0, dr=2e-3, r0=1e-4, bisections=200):
    """Shoot Q(0) = 1, W(0) = b for Q'' + 2Q'/r = -W Q, W'' + 2W'/r = -Q^2.

    The decaying solution has W -> W_inf < 0; with mu = -W_inf the rescaled
    Q_1(y) = Q(y / sqrt(mu)) / mu solves the unit-mass Choquard-Pekar equation.
    """
    nsteps = int(round((r_max - r0) / dr))
    lo, hi = 0.0, 1.0
    # grow hi until the trajectory crosses zero
    while _classify(_kernels.rk4_radial(1.0, hi, r0, dr, nsteps))[0] != 1:
        lo, hi = hi, 2 * hi
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        kind, _ = _classify(_kernels.rk4_radial(1.0, mid, r0, dr, nsteps))
        if kind == 1:
            hi = mid
        else:
            lo = mid
    traj = _kernels.rk4_radial(1.0, lo, r0, dr, nsteps)
    _, i_event = _classify(traj)
    # match where Q is smallest before the bisection error takes over
    q = traj[: i_event + 1, 0]
    i_match = int(abs(q).argmin())
    r = r0 + dr * i_match
    q_m, dq_m, w_m, dw_m, mass, wmass = traj[i_match]
    w_inf = w_m + r * dw_m  # W = W_inf + C / r outside the mass
    mu = -w_inf
    if not mu > 0:
        raise RuntimeError(f"shooting produced non-positive mu = {mu}")
    radii = r0 + dr * np.arange(i_match + 1)
    dq = traj[: i_match + 1, 1]
    kinetic = float(np.trapezoid(4 * math.pi * radii**2 * dq**2, dx=dr))
    coupling_q = wmass - w_inf * mass
    # rescale to unit mass term: Q1(y) = Q(y/sqrt(mu))/mu
    s = mu ** -1.5
    return RadialGroundState(
        peak=1.0 / mu,
        kinetic=kinetic * s,
        mass=mass * mu * s,
        coupling=coupling_q * s,
        r_match=r * math.sqrt(mu),
    )


def reference_level_p2_n3():
    """c0 for N=3, alpha=2, p=q=2, A=B=1, attained at u = v = Q: c0 = D(Q)/2."""
    gs = shoot_choquard_pekar()
    return 0.5 * gs.coupling, gs


def golden_section_max(f, lo, hi, rel_tol=1e-14, max_iter=500):
    """Maximiser of a unimodal f on [lo, hi], evaluated in 40-digit arithmetic."""
    with mpmath.workdps(40):
        invphi = (mpmath.sqrt(5) - 1) / 2
        a, b = mpmath.mpf(lo), mpmath.mpf(hi)
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc, fd = f(c), f(d)
        for _ in range(max_iter):
            if b - a <= rel_tol * abs(a + b) / 2:
                break
            if fc > fd:
                b, d, fd = d, c, fc
                c = b - invphi * (b - a)
                fc = f(c)
            else:
                a, c, fc = c, d, fd
                d = a + invphi * (b - a)
                fd = f(d)
        return float((a + b) / 2)


def fiber_argmax(theta1, theta2, exponent):
    """Numerical maximiser of theta1 t^2 - theta2 t^exponent over t > 0.

    Brackets by doubling, then golden-section search; no closed form is used.
    """
    with mpmath.workdps(40):
        th1, th2, e = mpmath.mpf(theta1), mpmath.mpf(theta2), mpmath.mpf(exponent)

        def h(t):
            return th1 * t * t - th2 * t**e

        hi = mpmath.mpf(1)
        while h(2 * hi) > h(hi):
            hi *= 2
        lo = hi
        while h(lo / 2) > h(lo) or lo == hi:
            lo /= 2
            if lo < mpmath.mpf(10) ** -30:
                break
        return golden_section_max(h, lo / 2, 2 * hi)
