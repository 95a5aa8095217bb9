import numpy as np
import pytest
from scipy.special import erf

from choquard.errors import DomainError, GridMismatch
from choquard.grid import (
    Field,
    GridSpec,
    backward,
    boundary_ratio,
    dirichlet_energy,
    forward,
    inner_product,
    integrate,
    laplacian_values,
    shift_field,
    spectral_inner_product,
)


@pytest.mark.parametrize("dim,n,L", [(1, 8, 2.0), (2, 16, 10.0), (3, 8, 4.0)])
def test_nodes(dim, n, L):
    g = GridSpec(dim, n, L)
    x = g.axis()
    assert x[0] == -L / 2
    assert np.allclose(np.diff(x), L / n)
    assert g.shape == (n,) * dim
    assert g.cell_volume == pytest.approx((L / n) ** dim)


@pytest.mark.parametrize("args", [(4, 8, 1.0), (1, 12, 1.0), (1, 4, 1.0), (2, 8, 0.0), (2, 8, np.inf)])
def test_gridspec_rejects(args):
    with pytest.raises(DomainError):
        GridSpec(*args)


def test_field_is_immutable_and_finite():
    g = GridSpec(1, 8, 1.0)
    f = Field.zeros(g)
    with pytest.raises(ValueError):
        f.values[0] = 1.0
    with pytest.raises(AttributeError):
        f.values = np.ones(8)
    with pytest.raises(ValueError):
        Field(g, np.full(8, np.nan))
    with pytest.raises(GridMismatch):
        Field(g, np.ones(16))


def test_grid_mismatch():
    a = Field.zeros(GridSpec(1, 8, 1.0))
    b = Field.zeros(GridSpec(1, 8, 2.0))
    with pytest.raises(GridMismatch):
        a + b


def test_gaussian_integral_matches_erf():
    # the periodic trapezoid rule on a box is exact up to the truncated tails
    g = GridSpec(1, 64, 12.0)
    s = 0.7
    f = Field.from_function(g, lambda x: np.exp(-x * x / (2 * s * s)))
    exact = s * np.sqrt(2 * np.pi) * erf(6.0 / (np.sqrt(2) * s))
    assert integrate(f) == pytest.approx(exact, rel=1e-13)


def test_parseval(rng):
    g = GridSpec(2, 32, 5.0)
    f = Field(g, rng.standard_normal(g.shape))
    h = Field(g, rng.standard_normal(g.shape))
    assert spectral_inner_product(f, h) == pytest.approx(inner_product(f, h), rel=1e-12)


@pytest.mark.parametrize("k", [1, 3, 7])
def test_sine_mode_calculus(k):
    L = 3.0
    g = GridSpec(1, 32, L)
    w = 2 * np.pi * k / L
    f = Field.from_function(g, lambda x: np.sin(w * x))
    # int_0^L |f'|^2 = w^2 L / 2
    assert dirichlet_energy(f) == pytest.approx(w * w * L / 2, rel=1e-12)
    assert np.allclose(laplacian_values(f), -w * w * f.values, atol=1e-10 * w * w)


def test_dirichlet_3d_product_mode():
    L = 2 * np.pi
    g = GridSpec(3, 16, L)
    f = Field.from_function(g, lambda x, y, z: np.cos(x) * np.sin(2 * y) * np.cos(3 * z))
    # |grad f|^2 integrates to (1 + 4 + 9) * L^3 / 8
    assert dirichlet_energy(f) == pytest.approx(14 * L**3 / 8, rel=1e-12)


def test_transform_round_trip(rng):
    g = GridSpec(3, 8, 1.0)
    f = Field(g, rng.standard_normal(g.shape))
    assert np.allclose(backward(forward(f)).values, f.values, atol=1e-14)


def test_shift_and_boundary():
    g = GridSpec(1, 8, 8.0)
    f = Field(g, np.arange(8.0))
    s = shift_field(f, [3])
    assert s.values[3] == 0.0 and s.values[0] == 5.0
    assert boundary_ratio(f) == 1.0
    assert boundary_ratio(Field.zeros(g)) == 0.0
    bump = Field(g, np.exp(-g.axis() ** 2))
    # shell nodes are x = -4 and x = 3; the larger of the two wins
    assert boundary_ratio(bump) == pytest.approx(np.exp(-9.0))
