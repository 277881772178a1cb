import numpy as np
import pytest

from conftest import potential
from mixedspec.bmdensity import UncertaintyModel
from mixedspec.errors import PositivityError, PreconditionError
from mixedspec.evenchar import even_masses
from mixedspec.herglotz import SpectralMeasure
from mixedspec.pairs import (
    PWComplementFunction,
    condition_free_demo,
    cosine_transform,
    indeterminate_pair,
    pw_complement_function,
    pw_complement_pair,
    symmetric_pair,
    uniqueness_probe,
    verify_pair,
)
from mixedspec.sturm import Potential

FREE = np.pi * np.arange(1, 401)


@pytest.fixture(scope="module")
def pair():
    gam = even_masses(FREE)
    f, g = pw_complement_pair(FREE, 0.3, 0.3, seed=0, window=200, amplitude=0.5)
    return indeterminate_pair(FREE, gam, f, g)


def test_symmetric_pair_shares_dirichlet_spectrum():
    core = Potential.from_function(lambda x: np.cos(2 * np.pi * x) + 2 * x, 1025)
    q, qt, report = symmetric_pair(core, eps=0.1, amplitude=1.0, count=15)
    assert report["dd_max_deviation"] < 1e-8
    assert report["dn_vs_reflected_nd"] < 1e-8
    assert report["l2_distance"] >= 0.1
    x = q.x
    left = x < 0.5 - 0.1
    assert np.allclose(q.samples[left], q.samples[::-1][left])


def test_symmetric_pair_refuses_tiny_bump():
    with pytest.raises(PreconditionError):
        symmetric_pair(potential("free", 513), amplitude=1e-4)


def test_pw_complement_has_gap_and_zero_at_origin():
    f = pw_complement_function(FREE, 0.3, seed=1, window=200, decay=3.0)
    assert f.gap_residual() <= 1e-3
    assert np.max(np.abs(f.values)) == pytest.approx(0.2)
    assert cosine_transform(f.lam, f.values, [0.0])[0] == pytest.approx(0.0, abs=1e-8)


def test_pw_complement_is_seeded():
    a = pw_complement_function(FREE, 0.3, seed=5, window=100)
    b = pw_complement_function(FREE, 0.3, seed=5, window=100)
    c = pw_complement_function(FREE, 0.3, seed=6, window=100)
    assert np.array_equal(a.values, b.values)
    assert not np.allclose(a.values, c.values)


def test_gap_half_width_at_least_half_is_refused():
    with pytest.raises(PreconditionError):
        pw_complement_function(FREE, 0.5, seed=0, window=100)


def test_pair_identities(pair):
    assert pair.identities["difference_error"] < 1e-12
    assert pair.identities["product_rel_error"] < 1e-12
    assert np.all(pair.mu.alpha > 0) and np.all(pair.mu_tilde.alpha > 0)
    assert pair.mu.alpha[0] == pair.mu_tilde.alpha[0]
    assert not np.allclose(pair.mu.alpha, pair.mu_tilde.alpha)


def test_pair_passes_verification(pair):
    report = verify_pair(pair, tol=1e-2)
    assert report["passed"]
    assert report["left_gap_residual"] < 1e-6
    # the right-end difference is f^2 / g, not g itself
    assert report["right_difference_vs_f2_over_g"] < 1e-10


def test_large_f_breaks_positivity():
    gam = even_masses(FREE)
    f = pw_complement_function(FREE, 0.3, seed=0, window=50)
    big = PWComplementFunction(f.lam, f.values * 50, f.a)
    negative_g = PWComplementFunction(f.lam, -big.values, f.a)
    with pytest.raises(PositivityError):
        indeterminate_pair(FREE, gam, big, negative_g)


def test_probe_separates_even_from_generic(pair):
    gam = even_masses(FREE)
    even = SpectralMeasure.from_positive(FREE, gam.gamma[:401])
    model = UncertaintyModel({"kind": "exponential", "c": 1.0})
    kw = dict(window=200, starts=2, seed=0)
    even_info = uniqueness_probe(even, gam, model, 0.2, **kw)
    generic_info = uniqueness_probe(pair.mu, gam, None, 0.2, **kw)
    assert even_info["uniqueness_expected"]
    assert even_info["margin"] >= 10 * generic_info["margin"]
    assert even_info["label"] == "numerical evidence, not a proof"


def test_condition_free_demo_matches_on_dense_sequence():
    core = Potential.from_function(lambda x: np.cos(2 * np.pi * x) + 2 * x, 2049)
    out = condition_free_demo(core, eps=0.2, count=20)
    assert out["passed"]
    assert out["potential_l2_on_tail"] > 0.05
    assert out["density_estimate"] == pytest.approx(out["density_expected"], rel=0.05)
