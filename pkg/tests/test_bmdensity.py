import numpy as np
import pytest
from hypothesis import given, strategies as st

from mixedspec.bmdensity import (
    IndexSet,
    IntervalSystem,
    UncertaintyModel,
    admissible_subsequence_search,
    borg_uncertainty_verdict,
    completeness_radius,
    density_complement_check,
    dprime_bruteforce,
    dprime_interior_density,
    exterior_density,
    interior_density,
    shortness,
    uncertainty_size,
)
from mixedspec.errors import PreconditionError


def lacunary(N=4096):
    powers = 2 ** np.arange(0, 13)
    pts = np.concatenate([[0], powers, -powers])
    return IndexSet(pts[np.abs(pts) <= N], N)


def test_integers_have_density_one_and_dprime_half():
    z = IndexSet.integers()
    assert interior_density(z).value == 1.0
    assert exterior_density(z).value == 1.0
    assert dprime_interior_density(z).value == 0.5


def test_multiples_of_three():
    s = IndexSet.periodic(3, [0])
    assert interior_density(s).value == pytest.approx(1 / 3)
    assert dprime_interior_density(s).value == pytest.approx(1 / 3)


def test_two_adjacent_residues_mod_four():
    s = IndexSet.periodic(4, [0, 1])
    assert dprime_interior_density(s).value == pytest.approx(0.25)
    assert dprime_bruteforce(4, [0, 1]) == pytest.approx(0.25)


def test_lacunary_set_has_small_window_density():
    s = lacunary()
    assert interior_density(s).value <= 0.1
    assert exterior_density(s).value <= 0.1
    assert interior_density(s).method == "window-estimator"


def test_window_estimator_on_raw_periodic_sample():
    n = np.arange(-4096, 4097)
    raw = IndexSet.from_mask(n % 3 == 0)
    assert interior_density(raw).value == pytest.approx(1 / 3, abs=0.01)
    assert exterior_density(raw).value == pytest.approx(1 / 3, abs=0.01)


@given(period=st.integers(2, 7), data=st.data())
def test_dprime_pattern_formula_matches_bruteforce(period, data):
    residues = data.draw(st.lists(st.integers(0, period - 1), min_size=1, max_size=period, unique=True))
    s = IndexSet.periodic(period, residues, N=256)
    assert dprime_interior_density(s).value == pytest.approx(dprime_bruteforce(period, residues))


@given(period=st.integers(1, 8), data=st.data())
def test_complement_densities_add_to_one(period, data):
    residues = data.draw(st.lists(st.integers(0, period - 1), max_size=period, unique=True))
    s = IndexSet.periodic(period, residues, N=256)
    assert density_complement_check(s)["defect"] < 1e-12


def test_complement_identity_on_raw_window():
    rng = np.random.default_rng(3)
    n = np.arange(-2048, 2049)
    s = IndexSet.from_mask(rng.random(n.size) < 0.4)
    assert density_complement_check(s)["defect"] <= 0.1


@given(period=st.integers(1, 6), shift=st.integers(-20, 20), data=st.data())
def test_density_is_shift_invariant(period, shift, data):
    residues = data.draw(st.lists(st.integers(0, period - 1), min_size=1, max_size=period, unique=True))
    s = IndexSet.periodic(period, residues, N=256)
    assert interior_density(s.shift(shift)).value == interior_density(s).value


def test_completeness_radius_of_integers():
    assert completeness_radius(IndexSet.integers()) == pytest.approx(2 * np.pi)


def test_uncertainty_size_catalog():
    assert uncertainty_size(UncertaintyModel({"kind": "constant", "c": 1.0})) == 1.0
    assert uncertainty_size(UncertaintyModel({"kind": "exponential", "c": 1.0})) == 0.0
    assert uncertainty_size(UncertaintyModel({"kind": "exponential", "c": 1.0}), "window") <= 0.1
    mixed = UncertaintyModel({"kind": "residue", "period": 2,
                              "rules": [{"kind": "constant", "c": 1.0}, {"kind": "exponential", "c": 1.0}]})
    assert uncertainty_size(mixed) == pytest.approx(0.5)
    assert uncertainty_size(mixed, "window") == pytest.approx(0.5, abs=0.05)


def test_power_lengths_keep_every_index():
    model = UncertaintyModel({"kind": "power", "p": 3.0})
    assert uncertainty_size(model) == 1.0
    sigma, est = admissible_subsequence_search(model)
    assert sigma.is_periodic and est.method == "exact-pattern"


@given(c1=st.floats(0.1, 3.0), c2=st.floats(0.1, 3.0))
def test_shorter_intervals_never_increase_uncertainty(c1, c2):
    lo, hi = sorted([c1, c2])
    long_model = UncertaintyModel({"kind": "stretched", "c": lo, "beta": 0.5})
    short_model = UncertaintyModel({"kind": "exponential", "c": hi})
    assert long_model.dominates(short_model, N=512)
    assert uncertainty_size(short_model) <= uncertainty_size(long_model)


def test_unknown_rule_is_refused():
    with pytest.raises(PreconditionError):
        UncertaintyModel({"kind": "gaussian"})


def test_borg_verdict_for_exponentially_short_intervals():
    n = np.arange(1, 25)
    iv = IntervalSystem.at_points(np.pi * n, np.exp(-n),
                                  {"kind": "rule", "rule": {"kind": "exponential", "c": 1.0}})
    verdict, info = borg_uncertainty_verdict(iv)
    assert verdict and info["routes_agree"]


def test_shortness_verdicts_and_monotone_sums():
    n = np.arange(1, 200, dtype=float)
    short = shortness(IntervalSystem.at_points(n * 3.0, n**-1.0, {"kind": "power", "p": 1, "s": 1}))
    long = shortness(IntervalSystem.at_points(2.0**n[:40], 0.5 * 2.0**n[:40], {"kind": "proportional", "ratio": 0.5}))
    bare = shortness(IntervalSystem.at_points(n * 3.0, 0.1))
    assert short["verdict"] == "short" and short["monotone"]
    assert long["verdict"] == "long" and long["partial_sums"][-1] > 5
    assert bare["verdict"] == "indeterminate"


def test_overlapping_intervals_are_rejected():
    with pytest.raises(ValueError):
        IntervalSystem(np.array([0.0, 0.5]), np.array([1.0, 2.0]))
