"""Riesz potential f -> I_alpha * f as a Fourier multiplier on the periodic box.

The kernel is ``A_alpha |x|^(alpha - N)`` with Fourier symbol ``|kappa|^-alpha``.
Three zero-mode / periodization policies are offered:

``drop``
    ``|kappa|^-alpha`` for kappa != 0 and 0 at kappa = 0.  Algebraic identities
    (factorization into half orders, positivity) hold exactly.
``ball``
    As ``drop`` but the zero mode carries the kernel mass over the ball of
    radius L/2, ``A_alpha * omega_{N-1} * (L/2)^alpha / alpha``.
``truncated``
    The exact Fourier series of the kernel cut off at radius R = L/2.  For data
    supported in a ball of radius L/4 the periodic convolution then coincides
    with the free-space one inside that ball.  Its zero mode equals the ``ball``
    value.  This is the default for physical runs.
"""
from dataclasses import dataclass, field
from functools import lru_cache
from math import gamma, pi

import mpmath
import numpy as np

from .errors import DomainError, GridMismatch
from .grid import Field, _mode_index_sq, apply_multiplier, filter_values

DROP = "drop"
BALL = "ball"
TRUNCATED = "truncated"
POLICIES = (DROP, BALL, TRUNCATED)

_ALIASES = {
    "drop": DROP,
    "ball": BALL,
    "ballvalue": BALL,
    "ball_value": BALL,
    "truncated": TRUNCATED,
    "truncated_kernel": TRUNCATED,
}


def normalize_policy(policy):
    key = str(policy).strip().lower().replace("-", "_")
    try:
        return _ALIASES[key]
    except KeyError:
        raise DomainError(f"unknown zero-mode policy {policy!r}; expected one of {POLICIES}") from None


def _check_alpha(N, alpha):
    if not (0 < alpha < N):
        raise DomainError(f"alpha must lie in (0, {N}), got {alpha}")


def riesz_constant(N, alpha):
    """A_alpha = Gamma((N - alpha)/2) / (2^alpha pi^(N/2) Gamma(alpha/2))."""
    _check_alpha(N, alpha)
    return gamma((N - alpha) / 2) / (2**alpha * pi ** (N / 2) * gamma(alpha / 2))


def sphere_area(N):
    """Surface measure of the unit sphere in R^N (2, 2 pi, 4 pi for N = 1, 2, 3)."""
    return 2 * pi ** (N / 2) / gamma(N / 2)


def ball_value(N, alpha, R):
    """Integral of the Riesz kernel over the ball of radius R."""
    return riesz_constant(N, alpha) * sphere_area(N) * R**alpha / alpha


def truncated_symbol(N, alpha, R, kappa):
    """Fourier transform of A_alpha |x|^(alpha-N) restricted to |x| < R.

    Equals ``ball_value * 1F2(alpha/2; N/2, alpha/2 + 1; -(kappa R)^2 / 4)``.
    """
    kappa = np.atleast_1d(np.asarray(kappa, dtype=float))
    b0 = ball_value(N, alpha, R)
    a = alpha / 2
    out = np.array([float(mpmath.hyp1f2(a, N / 2, a + 1, -((k * R) ** 2) / 4)) for k in kappa.ravel()])
    return b0 * out.reshape(kappa.shape)


@lru_cache(maxsize=64)
def _multiplier_table(dim, n, L, alpha, policy):
    m2 = _mode_index_sq(dim, n)
    uniq, inv = np.unique(m2, return_inverse=True)
    kap = 2 * pi / L * np.sqrt(uniq.astype(float))
    vals = np.zeros_like(kap)
    nz = uniq > 0
    if policy == TRUNCATED:
        vals = truncated_symbol(dim, alpha, L / 2, kap)
    else:
        vals[nz] = kap[nz] ** (-alpha)
        if policy == BALL:
            vals[~nz] = ball_value(dim, alpha, L / 2)
    table = vals[inv].reshape(m2.shape)
    table.flags.writeable = False
    return table


@dataclass(frozen=True)
class RieszOperator:
    grid: object
    alpha: float
    policy: str = TRUNCATED
    multiplier: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def zero_mode_value(self):
        return float(self.multiplier.flat[0])

    def __call__(self, f):
        return apply(self, f)


def build_operator(grid, alpha, policy=TRUNCATED):
    _check_alpha(grid.dim, alpha)
    policy = normalize_policy(policy)
    table = _multiplier_table(grid.dim, grid.n, grid.L, float(alpha), policy)
    return RieszOperator(grid, float(alpha), policy, table)


def apply_values(op, values):
    """Operator applied to a raw sample array on ``op.grid`` (no Field wrapping)."""
    return filter_values(values, op.multiplier)


def apply(op, f):
    if f.grid != op.grid:
        raise GridMismatch(f"operator grid {op.grid} does not match field grid {f.grid}")
    return Field(op.grid, apply_multiplier(f, op.multiplier))


def half_operator(op):
    """Order alpha/2 operator with the drop policy; two applications give the alpha/drop operator."""
    return build_operator(op.grid, op.alpha / 2, DROP)


def with_policy(op, policy):
    return build_operator(op.grid, op.alpha, policy)
