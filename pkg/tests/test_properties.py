import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from choquard import _kernels as K
from choquard import chq1
from choquard import energy as en
from choquard.grid import Field, GridSpec, inner_product, spectral_inner_product
from choquard.solver import nehari_project, precondition
from choquard.verify import random_pair

G1 = GridSpec(1, 32, 10.0)
PROB = en.make_problem(G1, 0.5, 2.0, 2.5)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
seeds = st.integers(0, 2**32 - 1)


@given(arrays(np.float64, 32, elements=finite), st.floats(1.01, 5.0))
def test_abs_pow_matches_numpy(u, p):
    assert np.allclose(K.abs_pow(u, p), np.abs(u) ** p, rtol=1e-13, atol=0)


@given(arrays(np.float64, (4, 8), elements=finite), arrays(np.float64, (4, 8), elements=finite))
def test_chq1_round_trip(a, b):
    g = GridSpec(1, 32, 3.0)
    u, v = Field(g, a.ravel()), Field(g, b.ravel())
    _, out = chq1.loads(chq1.dumps({"u": u, "v": v}))
    assert out["u"].values.tobytes() == u.values.tobytes()
    assert out["v"].values.tobytes() == v.values.tobytes()


@given(seeds, st.floats(0.05, 20.0))
def test_projection_is_scale_free(seed, s):
    # projecting (s u, s v) lands on the same point as projecting (u, v)
    pair = random_pair(G1, np.random.default_rng(seed))
    _, a = nehari_project(PROB, pair)
    _, b = nehari_project(PROB, pair.scaled(s))
    assert np.allclose(a.u.values, b.u.values, rtol=1e-10, atol=1e-12 * a.u.max_abs())
    rep = en.action(PROB, b)
    assert abs(rep.nehari) <= 1e-10 * rep.normSq


@given(seeds)
def test_projected_action_matches_nehari_identity(seed):
    pair = random_pair(G1, np.random.default_rng(seed))
    _, proj = nehari_project(PROB, pair)
    rep = en.action(PROB, proj)
    assert rep.action == pytest.approx(PROB.nehari_factor * rep.normSq, rel=1e-10)
    assert rep.action > 0


@given(seeds)
def test_coupling_symmetry(seed):
    pair = random_pair(G1, np.random.default_rng(seed))
    assert en.coupling(PROB, pair) == pytest.approx(en.coupling_swapped(PROB, pair), rel=1e-12)


@given(seeds, st.floats(0.1, 10.0))
def test_preconditioner_is_positive(seed, c):
    g = random_pair(G1, np.random.default_rng(seed))
    assert precondition(PROB, g, c).dot(g) > 0


@given(arrays(np.float64, 32, elements=st.floats(-1, 1)), arrays(np.float64, 32, elements=st.floats(-1, 1)))
def test_parseval(a, b):
    f, g = Field(G1, a), Field(G1, b)
    assert spectral_inner_product(f, g) == pytest.approx(inner_product(f, g), rel=1e-9, abs=1e-12)


@given(seeds)
def test_norm_nonnegative_and_coercive(seed):
    # with A = B = 1 the weighted norm dominates the plain L2 norm
    pair = random_pair(G1, np.random.default_rng(seed))
    rep = en.action(PROB, pair)
    assert rep.normSq >= pair.l2_norm() ** 2 * (1 - 1e-12)
