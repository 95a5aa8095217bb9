"""Action functional, Nehari value and L2 gradient of the coupled Choquard system.

For a pair (u, v) on a periodic grid:

    ||(u,v)||^2 = int |grad u|^2 + |grad v|^2 + A u^2 + B v^2
    D(u,v)      = int (I_alpha * |u|^p) |v|^q
    I(u,v)      = ||(u,v)||^2 / 2 - 2 D / (p + q)
    P(u,v)      = ||(u,v)||^2 - 2 D
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

from . import _kernels
from .errors import DomainError, GridMismatch
from .grid import Field, _half_spectrum_weights, same_grid
from .potentials import Constant, PotentialField, sample_potential
from .riesz import DROP, TRUNCATED, build_operator, half_operator


def critical_exponent(N, alpha):
    """Upper end of the exponent window: (N + alpha)/(N - 2) for N >= 3, infinity otherwise."""
    return (N + alpha) / (N - 2) if N >= 3 else np.inf


def exponent_window(N, alpha):
    return (N + alpha) / N, critical_exponent(N, alpha)


def check_admissible(N, alpha, p, q):
    if not (0 < alpha < N):
        raise DomainError(f"alpha={alpha} must lie in (0, N={N})")
    lo, hi = exponent_window(N, alpha)
    for name, e in (("p", p), ("q", q)):
        if not (lo < e < hi):
            raise DomainError(
                f"{name}={e} violates the admissibility window (N+alpha)/N = {lo:.6g} < {name} < {hi:.6g}"
            )


@dataclass(frozen=True)
class ProblemSpec:
    grid: object
    alpha: float
    p: float
    q: float
    potA: PotentialField
    potB: PotentialField
    riesz: object = field(repr=False)
    riesz_half: object = field(repr=False)

    @property
    def dim(self):
        return self.grid.dim

    @property
    def policy(self):
        return self.riesz.policy

    @property
    def nehari_factor(self):
        """(p + q - 2) / (2 (p + q)): the action-to-norm ratio on the Nehari manifold."""
        s = self.p + self.q
        return (s - 2) / (2 * s)

    def with_potentials(self, potA=None, potB=None):
        return ProblemSpec(
            self.grid, self.alpha, self.p, self.q, potA or self.potA, potB or self.potB,
            self.riesz, self.riesz_half,
        )

    def with_policy(self, policy):
        return ProblemSpec(
            self.grid, self.alpha, self.p, self.q, self.potA, self.potB,
            build_operator(self.grid, self.alpha, policy), self.riesz_half,
        )


def make_problem(grid, alpha, p, q, potA=None, potB=None, policy=TRUNCATED):
    """Assemble an admissible problem; potentials default to the constant 1."""
    check_admissible(grid.dim, alpha, p, q)
    potA = _as_potential(potA, grid)
    potB = _as_potential(potB, grid)
    same_grid(potA.field, potB.field)
    if potA.grid != grid:
        raise GridMismatch("potentials and problem grid differ")
    op = build_operator(grid, alpha, policy)
    return ProblemSpec(grid, float(alpha), float(p), float(q), potA, potB, op, half_operator(op))


def _as_potential(pot, grid):
    if pot is None:
        return sample_potential(Constant(1.0), grid)
    if isinstance(pot, PotentialField):
        return pot
    return sample_potential(pot, grid)


@dataclass(frozen=True)
class Pair:
    u: Field
    v: Field

    def __post_init__(self):
        same_grid(self.u, self.v)

    @property
    def grid(self):
        return self.u.grid

    def scaled(self, t):
        return Pair(self.u * t, self.v * t)

    def __add__(self, other):
        return Pair(self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return Pair(self.u - other.u, self.v - other.v)

    def __mul__(self, t):
        return self.scaled(t)

    __rmul__ = __mul__

    def abs(self):
        return Pair(abs(self.u), abs(self.v))

    def l2_norm(self):
        h = self.grid.cell_volume
        return float(np.sqrt(h * (np.vdot(self.u.values, self.u.values) + np.vdot(self.v.values, self.v.values))))

    def dot(self, other):
        h = self.grid.cell_volume
        return h * float(np.vdot(self.u.values, other.u.values) + np.vdot(self.v.values, other.v.values))

    def is_zero(self):
        return not (np.any(self.u.values) or np.any(self.v.values))


@dataclass(frozen=True)
class EnergyReport:
    normSq: float
    coupling: float
    action: float
    nehari: float
    gradResidual: float
    policy: str = TRUNCATED


def _check(prob, pair):
    if pair.grid != prob.grid:
        raise GridMismatch(f"pair grid {pair.grid} differs from problem grid {prob.grid}")


def _pair_spectra(pair):
    return sfft.rfftn(pair.u.values), sfft.rfftn(pair.v.values)


def _dirichlet_from_spectrum(grid, F):
    w = _half_spectrum_weights(grid)
    return grid.cell_volume / grid.size * float(np.sum(w * grid.wavenumber_sq() * (F.real**2 + F.imag**2)))


class Evaluation:
    """All pieces of I, P and grad I at one pair, sharing transforms between them."""

    def __init__(self, prob, pair, op=None, need_gradient=True):
        _check(prob, pair)
        self.prob = prob
        self.pair = pair
        op = prob.riesz if op is None else op
        self.policy = op.policy
        grid = prob.grid
        h = grid.cell_volume
        u, v = pair.u.values, pair.v.values
        self.U, self.V = _pair_spectra(pair)
        self.kinetic = _dirichlet_from_spectrum(grid, self.U) + _dirichlet_from_spectrum(grid, self.V)
        self.potential = h * float(np.sum(prob.potA.values * u * u) + np.sum(prob.potB.values * v * v))
        self.normSq = self.kinetic + self.potential
        self.up = _kernels.abs_pow(u, prob.p)
        self.vq = _kernels.abs_pow(v, prob.q)
        UP = sfft.rfftn(self.up)
        VQ = sfft.rfftn(self.vq)
        self.phi_v = sfft.irfftn(op.multiplier * VQ, s=grid.shape)  # I * |v|^q
        self.coupling = h * float(np.sum(self.phi_v * self.up))
        self._UP = UP
        self._op = op
        self.gradient = self._gradient() if need_gradient else None

    def compute_gradient(self):
        if self.gradient is None:
            self.gradient = self._gradient()
        return self.gradient

    @property
    def phi_u(self):
        return sfft.irfftn(self._op.multiplier * self._UP, s=self.prob.grid.shape)

    @property
    def action(self):
        s = self.prob.p + self.prob.q
        return 0.5 * self.normSq - 2.0 / s * self.coupling

    @property
    def nehari(self):
        return self.normSq - 2.0 * self.coupling

    def _gradient(self):
        prob = self.prob
        grid = prob.grid
        s = prob.p + prob.q
        k2 = grid.wavenumber_sq()
        lap_u = sfft.irfftn(k2 * self.U, s=grid.shape)  # -Laplacian u
        lap_v = sfft.irfftn(k2 * self.V, s=grid.shape)
        u, v = self.pair.u.values, self.pair.v.values
        gu = lap_u + prob.potA.values * u - _kernels.coupling_force(self.phi_v, u, prob.p, 2 * prob.p / s)
        gv = lap_v + prob.potB.values * v - _kernels.coupling_force(self.phi_u, v, prob.q, 2 * prob.q / s)
        return Pair(Field(grid, gu), Field(grid, gv))

    def report(self):
        res = self.gradient.l2_norm() if self.gradient is not None else float("nan")
        return EnergyReport(self.normSq, self.coupling, self.action, self.nehari, res, self.policy)


def coupling(prob, pair, op=None):
    """D(u, v) = int (I_alpha * |u|^p) |v|^q."""
    return Evaluation(prob, pair, op, need_gradient=False).coupling


def coupling_swapped(prob, pair, op=None):
    """The same integral evaluated the other way round, int (I_alpha * |v|^q) |u|^p."""
    _check(prob, pair)
    op = prob.riesz if op is None else op
    up = _kernels.abs_pow(pair.u.values, prob.p)
    vq = _kernels.abs_pow(pair.v.values, prob.q)
    phi_u = sfft.irfftn(op.multiplier * sfft.rfftn(up), s=prob.grid.shape)
    return prob.grid.cell_volume * float(np.sum(phi_u * vq))


def self_coupling(prob, f, power, op=None):
    """int (I_alpha * |f|^power) |f|^power."""
    op = prob.riesz if op is None else op
    fp = _kernels.abs_pow(f.values, power)
    phi = sfft.irfftn(op.multiplier * sfft.rfftn(fp), s=prob.grid.shape)
    return prob.grid.cell_volume * float(np.sum(phi * fp))


def half_order_coupling(prob, pair):
    """<I_{alpha/2} * |u|^p, I_{alpha/2} * |v|^q>, the factorized form of D under the drop policy."""
    _check(prob, pair)
    half = half_operator(prob.riesz)
    a = sfft.irfftn(half.multiplier * sfft.rfftn(_kernels.abs_pow(pair.u.values, prob.p)), s=prob.grid.shape)
    b = sfft.irfftn(half.multiplier * sfft.rfftn(_kernels.abs_pow(pair.v.values, prob.q)), s=prob.grid.shape)
    return prob.grid.cell_volume * float(np.sum(a * b))


def weighted_norm_sq(prob, pair):
    return Evaluation(prob, pair, need_gradient=False).normSq


def action(prob, pair, op=None):
    return Evaluation(prob, pair, op).report()


def gradient(prob, pair):
    """L2 gradient of the action: the residual of the Euler-Lagrange system."""
    return Evaluation(prob, pair).gradient


def fiber_value(prob, pair, t, report=None):
    """h(t) = I(t u, t v) = theta1 t^2 - theta2 t^(p+q), from a single evaluation."""
    if not t > 0:
        raise DomainError("fiber parameter t must be positive")
    if report is None:
        report = action(prob, pair)
    theta1, theta2 = fiber_coefficients(prob, report)
    return theta1 * t * t - theta2 * t ** (prob.p + prob.q)


def fiber_coefficients(prob, report):
    return 0.5 * report.normSq, 2.0 / (prob.p + prob.q) * report.coupling
