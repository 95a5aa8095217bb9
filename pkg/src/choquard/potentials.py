"""Potential families A(x), B(x): constant, bounded-with-limit wells, lattice-periodic."""
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonPositivePotential, PeriodMismatch
from .grid import Field, same_grid


@dataclass(frozen=True)
class Constant:
    value: float

    def __post_init__(self):
        if not self.value > 0:
            raise DomainError(f"constant potential must be positive, got {self.value}")


@dataclass(frozen=True)
class BoundedLimit:
    """A(x) = limit - well_depth * exp(-|x|^2 / well_width^2), bounded below by ``floor``."""

    floor: float
    limit: float
    well_depth: float
    well_width: float

    def __post_init__(self):
        if not self.floor > 0:
            raise DomainError("floor A0 must be positive")
        if self.well_depth < 0 or not self.well_width > 0:
            raise DomainError("well_depth must be >= 0 and well_width > 0")
        if self.limit - self.well_depth < self.floor:
            raise DomainError(
                f"limit - depth = {self.limit - self.well_depth} falls below floor {self.floor}"
            )


@dataclass(frozen=True)
class Periodic:
    """A(x) = base + amplitude * prod_i sin^2(pi x_i / tau_i)."""

    base: float
    amplitude: float
    periods: tuple

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(float(t) for t in np.atleast_1d(self.periods)))
        if not self.base > 0:
            raise DomainError("periodic base must be positive")
        if self.amplitude < 0:
            raise DomainError("periodic amplitude must be nonnegative")
        if any(not t > 0 for t in self.periods):
            raise DomainError("periods must be positive")


@dataclass(frozen=True)
class PotentialField:
    field: Field
    spec: object

    @property
    def grid(self):
        return self.field.grid

    @property
    def values(self):
        return self.field.values

    @property
    def min(self):
        return float(self.field.values.min())

    @property
    def is_constant(self):
        return isinstance(self.spec, Constant)


def from_json(obj):
    kind = obj.get("type")
    if kind == "Constant":
        return Constant(float(obj["value"]))
    if kind == "BoundedLimit":
        return BoundedLimit(
            float(obj["floor"]), float(obj["limit"]), float(obj["well_depth"]), float(obj["well_width"])
        )
    if kind == "Periodic":
        return Periodic(float(obj["base"]), float(obj["amplitude"]), tuple(obj["periods"]))
    raise DomainError(f"unknown potential type {kind!r}")


def to_json(spec):
    if isinstance(spec, Constant):
        return {"type": "Constant", "value": spec.value}
    if isinstance(spec, BoundedLimit):
        return {
            "type": "BoundedLimit",
            "floor": spec.floor,
            "limit": spec.limit,
            "well_depth": spec.well_depth,
            "well_width": spec.well_width,
        }
    return {"type": "Periodic", "base": spec.base, "amplitude": spec.amplitude, "periods": list(spec.periods)}


def period_multiples(spec, grid):
    """Integers k_i with tau_i = L / k_i; raises PeriodMismatch otherwise."""
    periods = spec.periods
    if len(periods) == 1:
        periods = periods * grid.dim
    if len(periods) != grid.dim:
        raise PeriodMismatch(f"{len(periods)} periods given for a {grid.dim}-D grid")
    ks = []
    for tau in periods:
        ratio = grid.L / tau
        k = round(ratio)
        if k < 1 or abs(ratio - k) > 1e-12 * max(ratio, 1.0):
            raise PeriodMismatch(f"period {tau} does not divide box length {grid.L}")
        ks.append(int(k))
    return ks


def _sin2_periodic(grid, k):
    # sin^2(pi x_j k / L) with x_j = -L/2 + j h, reduced with integer arithmetic so that
    # a shift by n/k nodes reproduces the samples exactly
    j = np.arange(grid.n, dtype=np.int64)
    num = (2 * j * k - k * grid.n) % (2 * grid.n)
    return np.sin(np.pi * num / (2 * grid.n)) ** 2


def sample_potential(spec, grid):
    if isinstance(spec, Constant):
        vals = np.full(grid.shape, spec.value)
    elif isinstance(spec, BoundedLimit):
        r2 = grid.radius() ** 2
        vals = spec.limit - spec.well_depth * np.exp(-r2 / spec.well_width**2)
        vals = np.minimum(vals, spec.limit)
        shell = vals[grid.boundary_mask()]
        if np.max(np.abs(shell - spec.limit)) > 1e-8 * spec.limit:
            warnings.warn(
                "bounded potential has not reached its limit on the box boundary; enlarge L",
                RuntimeWarning,
                stacklevel=2,
            )
        if vals.min() < spec.floor:
            raise NonPositivePotential(f"sampled minimum {vals.min()} below floor {spec.floor}")
    elif isinstance(spec, Periodic):
        ks = period_multiples(spec, grid)
        prod = np.ones(grid.shape)
        for axis, k in enumerate(ks):
            shape = [1] * grid.dim
            shape[axis] = grid.n
            prod = prod * _sin2_periodic(grid, k).reshape(shape)
        vals = spec.base + spec.amplitude * prod
    else:
        raise DomainError(f"unsupported potential spec {spec!r}")
    if not vals.min() > 0:
        raise NonPositivePotential(f"sampled potential minimum {vals.min()} is not positive")
    return PotentialField(Field(grid, vals), spec)


def weighted_mass(pot, f):
    """Integral of A(x) f(x)^2."""
    grid = same_grid(pot.field, f)
    return grid.cell_volume * float(np.sum(pot.values * f.values * f.values))


def lower_bound(pot):
    """The positive floor of the potential (A0 in the hypotheses)."""
    spec = pot.spec
    if isinstance(spec, Constant):
        return spec.value
    if isinstance(spec, BoundedLimit):
        return spec.floor
    if isinstance(spec, Periodic):
        return spec.base
    return pot.min


def bump_on_top(pot, amplitude, k=4):
    """A + amplitude * prod sin^2(k pi x_i / L): a grid-aligned periodic bump over ``pot``."""
    grid = pot.grid
    bump = sample_potential(Periodic(1.0, amplitude, (grid.L / k,)), grid).values - 1.0
    return PotentialField(Field(grid, pot.values + bump), ("bumped", pot.spec, amplitude, k))


def node_periods(pot):
    """Per-axis lattice period in grid nodes under which ``pot`` is exactly invariant, or None."""
    grid = pot.grid
    spec = pot.spec
    if isinstance(spec, Constant):
        return [1] * grid.dim
    if isinstance(spec, Periodic):
        ks = period_multiples(spec, grid)
    elif isinstance(spec, tuple) and spec and spec[0] == "bumped":
        inner = node_periods(PotentialField(pot.field, spec[1]))
        if inner is None or grid.n % spec[3]:
            return None
        return [math.lcm(a, grid.n // spec[3]) for a in inner]
    else:
        return None
    if any(grid.n % k for k in ks):
        return None
    return [grid.n // k for k in ks]


def constant_like(pot, value=None):
    value = pot.min if value is None else value
    spec = Constant(float(value))
    return sample_potential(spec, pot.grid)


__all__ = [
    "Constant",
    "BoundedLimit",
    "Periodic",
    "PotentialField",
    "sample_potential",
    "weighted_mass",
    "from_json",
    "to_json",
    "lower_bound",
    "bump_on_top",
    "constant_like",
    "node_periods",
]
