"""Acceptance criteria at their stated tolerances; each test prints one PASS/FAIL line."""
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import FUNCTIONS, potential
from mixedspec.bmdensity import (IndexSet, UncertaintyModel, density_complement_check,
                                 dprime_interior_density, interior_density, uncertainty_size)
from mixedspec.cli import main
from mixedspec.evenchar import even_masses, leven_verify
from mixedspec.glinverse import reconstruct_from_measure, reconstruct_from_two_spectra, refill_spectrum
from mixedspec.herglotz import (SpectralMeasure, fourier_transform, gap_from_decay, krein_shift_of_operator,
                                masses_from_two_spectra, verify_exponential_identity)
from mixedspec.pairs import (indeterminate_pair, pw_complement_pair, symmetric_pair, uniqueness_probe,
                             verify_pair)
from mixedspec.sturm import BoundaryPair, Potential, eigenvalues, norming_masses, transfer_matrix

SPECS = Path(__file__).resolve().parents[1] / "specs"


@pytest.fixture
def verdict(capsys):
    def report(number, ok, detail):
        with capsys.disabled():
            print(f"\nacceptance {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return report


def l2(a, x):
    return float(np.sqrt(np.trapezoid(np.asarray(a) ** 2, x)))


def test_01_free_operator_exactness(verdict):
    t0 = time.perf_counter()
    q = potential("free")
    n = np.arange(1, 31)
    dd = eigenvalues(q, BoundaryPair.DD, 30)
    dn = eigenvalues(q, BoundaryPair.DN, 30)
    err_dd = np.max(np.abs(dd.positive - np.pi * n))
    err_dn = np.max(np.abs(dn.positive - np.pi * (n - 0.5)))
    err_m = max(np.max(np.abs(norming_masses(q, dd, side).alpha - np.pi)) for side in ("left", "right"))
    elapsed = time.perf_counter() - t0
    ok = err_dd <= 1e-8 and err_dn <= 1e-8 and err_m <= 1e-6 and elapsed < 5
    verdict(1, ok, f"DD {err_dd:.1e}, DN {err_dn:.1e}, masses {err_m:.1e}, {elapsed:.2f} s")


def test_02_constant_shift_law(verdict):
    worst = 0.0
    for name in ("free", "cos2pix"):
        q = potential(name)
        for bc in (BoundaryPair.DD, BoundaryPair.DN):
            base = eigenvalues(q, bc, 20).positive
            for c in (1.0, 5.0):
                shifted = eigenvalues(Potential(q.samples + c), bc, 20).positive
                worst = max(worst, float(np.max(np.abs(shifted**2 - base**2 - c))))
    verdict(2, worst <= 1e-8, f"max defect {worst:.1e}")


def test_03_transfer_matrix_determinant(verdict):
    rng = np.random.default_rng(2024)
    x = np.linspace(0, 1, 513)
    worst = 0.0
    for _ in range(100):
        coef = rng.normal(size=4) * 5
        q = Potential(sum(c * np.cos(np.pi * (k + 1) * x) for k, c in enumerate(coef)))
        z = complex(rng.uniform(-60, 60), rng.uniform(-5, 5))
        b = rng.uniform(0.05, 1.0)
        M = transfer_matrix(q, 0.0, b, z).matrix
        worst = max(worst, abs(np.linalg.det(M) + 1.0))
    verdict(3, worst <= 1e-10, f"max |det + 1| {worst:.1e} over 100 draws")


def test_04_product_of_side_masses(verdict):
    worst = 0.0
    for name in ("cos2pix", "x", "x(1-x)"):
        q = potential(name, 1025)
        seq = eigenvalues(q, BoundaryPair.DD, 200)
        rep = leven_verify(norming_masses(q, seq, "right"), norming_masses(q, seq, "left"),
                           even_masses(seq.positive), window=30)
        worst = max(worst, rep["max_rel_error"])
    verdict(4, worst <= 1e-3, f"max relative error {worst:.1e} for 1 <= n <= 30")


def test_05_exponential_identity(verdict):
    worst = 0.0
    for name in ("cos2pix", "x", "x(1-x)"):
        q = potential(name, 1025)
        dd = eigenvalues(q, BoundaryPair.DD, 200)
        dn = eigenvalues(q, BoundaryPair.DN, 200)
        rep = verify_exponential_identity(norming_masses(q, dd, "right"), krein_shift_of_operator(dd, dn))
        worst = max(worst, rep["rel_error_c0"])
    verdict(5, worst <= 1e-2, f"max relative error {worst:.1e} with c = 0 on 40 points")


def test_06_two_spectra_masses(verdict):
    worst = 0.0
    for name in ("cos2pix", "x", "x(1-x)"):
        q = potential(name)
        dd = eigenvalues(q, BoundaryPair.DD, 41)
        dn = eigenvalues(q, BoundaryPair.DN, 40)
        mu = masses_from_two_spectra(dd, dn)
        direct = norming_masses(q, dd, "right").alpha
        worst = max(worst, float(np.max(np.abs(mu.alpha[1:31] / direct[1:31] - 1))))
    verdict(6, worst <= 1e-3, f"max relative error {worst:.1e} for n <= 30")


def test_07_gelfand_levitan_roundtrip(verdict):
    details, ok = [], True
    for name in ("cos2pix", "x(1-x)"):
        q = potential(name)
        mu = norming_masses(q, eigenvalues(q, BoundaryPair.DD, 100), "left")
        errs = []
        for modes in (20, 40, 80):
            t0 = time.perf_counter()
            rep = reconstruct_from_measure(mu, grid=256, modes=modes, side="left")
            elapsed = time.perf_counter() - t0
            errs.append(l2(rep.potential.samples - FUNCTIONS[name](rep.potential.x), rep.potential.x))
            ok &= elapsed < 120
        ok &= errs[1] <= 5e-2 and errs[0] > errs[1] > errs[2]
        details.append(f"{name}: " + "/".join(f"{e:.1e}" for e in errs))
    verdict(7, bool(ok), "L2 at N = 20/40/80: " + "; ".join(details))


def test_08_borg_pipeline(verdict):
    q = potential("cos2pix")
    dd = eigenvalues(q, BoundaryPair.DD, 61)
    dn = eigenvalues(q, BoundaryPair.DN, 60)
    rep = reconstruct_from_two_spectra(dd, dn, grid=256, modes=40)
    x = rep.potential.x
    err = l2(rep.potential.samples - FUNCTIONS["cos2pix"](x), x)
    changed = reconstruct_from_two_spectra(dd, refill_spectrum(dn, 1), grid=256, modes=40)
    delta = l2(changed.potential.samples - rep.potential.samples, x)
    verdict(8, err <= 5e-2 and delta >= 1e-2, f"L2 error {err:.1e}, one DN eigenvalue refilled moves it {delta:.1e}")


def test_09_symmetric_counterexample(verdict):
    core = Potential.from_function(lambda x: np.cos(2 * np.pi * x) + 2 * x, 2049)
    _, _, rep = symmetric_pair(core, eps=0.1, amplitude=1.0, count=20)
    ok = rep["dd_max_deviation"] <= 1e-6 and rep["l2_distance"] >= 0.1
    verdict(9, ok, f"DD deviation {rep['dd_max_deviation']:.1e}, distance {rep['l2_distance']:.2f}")


def test_10_gap_machinery(verdict):
    x = np.linspace(0, 1, 2049)
    q = Potential(0 * x)
    qt = Potential(3 * np.where((x > 0.4) & (x < 0.9), np.sin(2 * np.pi * (x - 0.4) / 0.5), 0))
    mus = [norming_masses(p, eigenvalues(p, BoundaryPair.DD, 200), "left") for p in (q, qt)]
    d = mus[0] - mus[1]
    ft = np.max(np.abs(fourier_transform(d, np.linspace(0, 0.7, 400))))
    norm = float(np.sqrt(np.sum(d.masses**2)))
    rep = gap_from_decay(d, np.linspace(0.25, 40.0, 160))
    ok = ft <= 1e-2 * norm and rep.half_gap is not None and abs(rep.half_gap - 0.4) <= 0.15 * 0.4
    verdict(10, ok, f"FT/norm {ft / norm:.1e} on |s| <= 0.7, half-gap {rep.half_gap:.3f}")


def test_11_uncertainty_size(verdict):
    u_const = uncertainty_size(UncertaintyModel({"kind": "constant", "c": 1.0}))
    u_exp = uncertainty_size(UncertaintyModel({"kind": "exponential", "c": 1.0}), "window")
    alt = UncertaintyModel({"kind": "residue", "period": 2,
                            "rules": [{"kind": "constant", "c": 1.0}, {"kind": "exponential", "c": 1.0}]})
    u_alt = uncertainty_size(alt, "window")
    ok = u_const == 1.0 and u_exp <= 0.1 and abs(u_alt - 0.5) <= 0.05
    verdict(11, ok, f"U(const) {u_const}, U(exp) {u_exp:.3f} by window, U(alternating) {u_alt:.3f}")


def test_12_densities(verdict):
    three = interior_density(IndexSet.periodic(3, [0])).value
    half = dprime_interior_density(IndexSet.integers()).value
    defects = [density_complement_check(IndexSet.periodic(p, r))["defect"]
               for p, r in [(3, [0]), (4, [0, 1]), (5, [1, 2, 4]), (7, [])]]
    powers = 2 ** np.arange(0, 13)
    lac = IndexSet(np.concatenate([[0], powers, -powers]), 2**12)
    lac_val = interior_density(lac).value
    ok = three == pytest.approx(1 / 3) and half == 0.5 and max(defects) == 0 and lac_val <= 0.1
    verdict(12, ok, f"3Z {three:.4f}, D' of Z {half}, complement defect {max(defects)}, lacunary {lac_val:.3f}")


@pytest.fixture(scope="module")
def free_pair():
    lams = np.pi * np.arange(1, 401)
    gam = even_masses(lams)
    f, g = pw_complement_pair(lams, 0.3, 0.3, seed=0, window=200, amplitude=0.5)
    return lams, gam, indeterminate_pair(lams, gam, f, g)


def test_13_indeterminate_pair(verdict, free_pair):
    _, _, pair = free_pair
    rep = verify_pair(pair, tol=1e-2, reconstruct=True)
    ids = max(pair.identities.values())
    outer = rep["reconstruction"]["outer_l2"]
    ok = ids <= 1e-12 and rep["left_gap_ok"] and rep["right_gap_ok"] and outer <= 1e-1
    verdict(13, ok, f"identities {ids:.1e}, gaps {rep['left_gap_residual']:.1e}/{rep['right_gap_residual']:.1e}, "
                    f"outer L2 {outer:.3f}")


def test_14_uniqueness_probe(verdict, free_pair):
    lams, gam, pair = free_pair
    even = SpectralMeasure.from_positive(lams, gam.gamma[: lams.size + 1])
    model = UncertaintyModel({"kind": "exponential", "c": 1.0})
    e = uniqueness_probe(even, gam, model, 0.2, window=200, starts=4, seed=0)
    g = uniqueness_probe(pair.mu, gam, None, 0.2, window=200, starts=4, seed=0)
    ok = e["margin"] >= 10 * g["margin"] and g["margin"] <= 1e-2 and g["candidate_f_max"] > 0
    verdict(14, ok, f"even margin {e['margin']:.1e}, generic margin {g['margin']:.1e} "
                    f"(ratio {e['margin'] / g['margin']:.0f})")


def test_15_cli_determinism(verdict, tmp_path):
    same = []
    for spec in sorted(SPECS.glob("demo-*.json")):
        outs = []
        for run in ("a", "b"):
            out = tmp_path / f"{spec.stem}_{run}"
            assert main([spec.stem, "--spec", str(spec), "--out", str(out), "--seed", "0"]) == 0
            outs.append(out)
        names = sorted(p.name for p in outs[0].iterdir() if p.suffix == ".json")
        same.append(all((outs[0] / n).read_bytes() == (outs[1] / n).read_bytes() for n in names))
    verdict(15, len(same) == 3 and all(same), f"{sum(same)}/{len(same)} demo specs byte-identical")
