import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import potential
from mixedspec.errors import PreconditionError
from mixedspec.herglotz import (FREE_CONSTANT, DiscreteMeasure, KreinShift, SpectralMeasure,
                                fourier_transform, gap_from_decay, herglotz_eval, herglotz_of_krein,
                                identity_grid, kernel, krein_limit_at_infinity, krein_shift_of_measure,
                                krein_shift_of_operator, lemma_l1_check, masses_from_two_spectra,
                                verify_exponential_identity)
from mixedspec.pairs import pw_complement_function
from mixedspec.sturm import eigenvalues, norming_masses


@pytest.fixture(scope="module")
def cos_data():
    q = potential("cos2pix", 513)
    dd = eigenvalues(q, "DD", 101)
    dn = eigenvalues(q, "DN", 100)
    return q, dd, dn


def test_kernel_is_regularized_cauchy_kernel():
    assert kernel(0.0, 1j) == pytest.approx(1j)
    t = np.array([10.0, 100.0])
    # decays like 1/t^2 at fixed z
    assert np.all(np.abs(kernel(t, 2j) * t**2) < 10)


@given(seed=st.integers(0, 2**32 - 1), x=st.floats(-20, 20), y=st.floats(0.01, 20))
def test_herglotz_transform_of_positive_measure_has_positive_imaginary_part(seed, x, y):
    rng = np.random.default_rng(seed)
    t = np.sort(rng.uniform(-50, 50, 30))
    m = DiscreteMeasure(np.unique(t), rng.uniform(0.01, 3, np.unique(t).size))
    assert herglotz_eval(m, complex(x, y)).imag > 0


def test_free_measure_transform_is_minus_cotangent():
    mu = SpectralMeasure.free(50)
    z = np.array([0.3 + 0.7j, 2 + 1j, -4 + 0.2j])
    assert np.allclose(herglotz_eval(mu, z), -1 / np.tan(z), rtol=1e-8)


def test_free_krein_shift_gives_log_of_free_transform():
    k = KreinShift.free(40)
    z = np.array([0.5 + 1j, 3 + 0.25j])
    assert np.allclose(herglotz_of_krein(k, z), np.log(-1 / np.tan(z)) - FREE_CONSTANT, atol=1e-10)
    assert krein_limit_at_infinity(k) == pytest.approx(-FREE_CONSTANT, abs=1e-12)


def test_krein_shift_routes_agree(cos_data):
    q, dd, dn = cos_data
    from_operator = krein_shift_of_operator(dd, dn)
    from_measure = krein_shift_of_measure(norming_masses(q, dd.truncated(100), "right"))
    a = np.asarray(from_operator.intervals)
    b = np.asarray(from_measure.intervals)
    ends_a = a[a[:, 0] >= 0][:40, 1]
    ends_b = b[b[:, 0] >= 0][:40, 1]
    assert np.allclose(ends_a, ends_b, atol=1e-6)


def test_krein_intervals_interlace_the_spectrum(cos_data):
    _, dd, dn = cos_data
    k = krein_shift_of_operator(dd, dn).validate()
    iv = np.asarray(k.intervals)
    pos = iv[iv[:, 0] > 0][:20]
    # each interval runs from a Dirichlet point to the next mixed point
    assert np.allclose(pos[:, 0], dd.positive[:20], atol=1e-12)
    assert np.allclose(pos[:, 1], dn.positive[1:21], atol=1e-12)


def test_exponential_identity_with_constant_anchored_at_infinity(cos_data):
    q, dd, dn = cos_data
    rep = verify_exponential_identity(norming_masses(q, dd.truncated(100), "right"),
                                      krein_shift_of_operator(dd, dn))
    assert rep["rel_error_c0"] <= 1e-2
    assert rep["c"] == pytest.approx(-rep["krein_limit"], abs=1e-6)


def test_identity_grid_stays_in_upper_half_plane():
    g = identity_grid()
    assert g.size == 40 and np.all(g.imag > 0)


def test_two_spectra_masses_match_direct(cos_data):
    q, dd, dn = cos_data
    mu = masses_from_two_spectra(dd, dn)
    direct = norming_masses(q, dd.truncated(100), "right")
    assert np.allclose(mu.alpha[1:31], direct.alpha[1:31], rtol=1e-3)


def test_fourier_transform_refuses_non_summable_measure():
    with pytest.raises(PreconditionError):
        fourier_transform(SpectralMeasure.free(10), 0.1)


def test_fourier_transform_of_single_atom():
    m = DiscreteMeasure(np.array([2.0]), np.array([1.5]))
    assert fourier_transform(m, 0.5) == pytest.approx(1.5 * np.exp(-1j))


@pytest.mark.parametrize("a", [0.2, 0.3])
def test_gap_fit_does_not_undershoot_certified_gap(a):
    lam = np.pi * np.arange(1, 401)
    f = pw_complement_function(lam, a, seed=3, window=200, decay=3)
    m = DiscreteMeasure(np.r_[-f.lam[::-1], f.lam], np.r_[f.values[::-1], f.values])
    rep = gap_from_decay(m, np.linspace(0.25, 40, 160))
    # finite sections keep their transform small slightly past the certified edge
    assert 0.95 * a <= rep.half_gap <= 1.25 * a
    assert rep.max_ft_on_gap < 1e-2 or a == 0.4


def test_gap_fit_needs_increasing_positive_ys():
    m = DiscreteMeasure(np.array([-1.0, 1.0]), np.array([1.0, -1.0]))
    with pytest.raises(PreconditionError):
        gap_from_decay(m, [1.0, 0.5, 2.0, 3.0, 4.0])


def test_toy_sequence_with_cubic_masses_selects_second_alternative():
    n = np.arange(1, 301.0)
    m = DiscreteMeasure(np.r_[-n[::-1], n], np.r_[n[::-1] ** -3.0, n**-3.0])
    rep = lemma_l1_check(m)
    assert rep["alternative"] == "second"
    assert rep["growth_first"] > 1.5


def test_discrete_measure_validation():
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0, 0.5]), np.array([1.0, 1.0]))
    with pytest.raises(ValueError):
        DiscreteMeasure(np.array([1.0]), np.array([1.0]), "free_pi")


def test_difference_of_equal_measures_vanishes():
    mu = SpectralMeasure.free(5).truncated(5)
    d = mu - mu
    assert d.total_variation() == 0.0
