"""Constructions of distinct operators sharing spectral data, and uniqueness probes.

Indeterminate pairs start from an even function ``f`` on the Dirichlet
sequence whose measure ``f * eta`` (``eta`` the counting measure) has a
spectral gap ``(-2a, 2a)``.  Finite sections are used throughout: ``f`` lives
on a window of ``W`` points and its gap is certified by the Fourier transform
of the finite measure itself.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, least_squares

from .bmdensity import UncertaintyModel, uncertainty_size
from .errors import PositivityError, PreconditionError
from .evenchar import CharacteristicData
from .herglotz import SpectralMeasure
from .sturm import BoundaryPair, Potential, eigenvalues, reflect_potential, shoot, transfer_matrix, weyl_m

__all__ = [
    "PWComplementFunction",
    "IndeterminatePair",
    "symmetric_pair",
    "pw_complement_function",
    "pw_complement_pair",
    "indeterminate_pair",
    "verify_pair",
    "uniqueness_probe",
    "condition_free_demo",
    "cosine_transform",
]

CERT_TOL = 1e-3


def _l2(x, grid) -> float:
    return float(np.sqrt(np.trapezoid(np.asarray(x) ** 2, grid)))


# ------------------------------------------------------------ symmetric pair

def symmetric_pair(core: Potential, eps: float = 0.1, amplitude: float = 1.0, count: int = 20,
                   min_distance: float = 0.1):
    """Potential symmetric on (0, 1/2 - eps) with a one-sided bump, and its reflection.

    ``q = (core + reflect(core))/2 + amplitude * sin^2`` bump on (1/2 - eps, 1/2).
    Reflection preserves the Dirichlet-Dirichlet and Neumann-Neumann spectra
    and swaps the mixed ones.
    """
    if not 0 < eps < 0.5:
        raise PreconditionError("eps must lie in (0, 1/2)")
    x = core.x
    sym = 0.5 * (core.samples + core.samples[::-1])
    left = 0.5 - eps
    inside = (x > left) & (x < 0.5)
    bump = np.where(inside, np.sin(np.pi * (x - left) / eps) ** 2, 0.0)
    q = Potential(sym + amplitude * bump)
    qt = reflect_potential(q)
    distance = _l2(q.samples - qt.samples, x)
    if distance < min_distance:
        raise PreconditionError(f"pair too close (||q - q~|| = {distance:.3g}); increase the amplitude")
    dd = eigenvalues(q, BoundaryPair.DD, count).positive
    ddt = eigenvalues(qt, BoundaryPair.DD, count).positive
    dn = eigenvalues(q, BoundaryPair.DN, count).positive
    ndt = eigenvalues(qt, BoundaryPair.ND, count).positive
    report = {
        "dd_max_deviation": float(np.max(np.abs(dd - ddt))),
        "dn_vs_reflected_nd": float(np.max(np.abs(dn - ndt))),
        "l2_distance": distance,
        "symmetric_until": left,
        "count": count,
    }
    return q, qt, report


# --------------------------------------------------- Paley-Wiener complements

def cosine_transform(lam_pos: np.ndarray, values: np.ndarray, s, at_zero: float = 0.0) -> np.ndarray:
    """Fourier transform of the even measure ``sum f(l_n)(d_{l_n} + d_{-l_n}) + f_0 d_0``."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return at_zero + 2.0 * np.cos(np.outer(s, lam_pos)) @ values


def _s_grid(lam_pos: np.ndarray, half_width: float, oversample: int = 4) -> np.ndarray:
    spacing = np.pi / (lam_pos[-1] * oversample)
    m = max(8, int(np.ceil(half_width / spacing)) + 1)
    return np.linspace(0.0, half_width, m)


@dataclass
class PWComplementFunction:
    """Even function on the window, zero at 0, with a certified spectral gap."""

    lam: np.ndarray
    values: np.ndarray
    a: float
    meta: dict = field(default_factory=dict)

    def norm(self) -> float:
        return float(np.sqrt(2.0 * np.sum(self.values**2)))

    def gap_residual(self, fraction: float = 0.9) -> float:
        s = np.linspace(0.0, 2 * self.a * fraction, 2000)
        return float(np.max(np.abs(cosine_transform(self.lam, self.values, s))) / self.norm())

    def to_dict(self) -> dict:
        return {"lam": self.lam.tolist(), "values": self.values.tolist(), "a": self.a, "meta": self.meta}


def _near_null_basis(A: np.ndarray, weights: np.ndarray, rel_tol: float):
    """Columns spanning ``{f = weights * v : |A f| <= rel_tol |A| |v|}``."""
    _, sig, vt = np.linalg.svd(A * weights[None, :], full_matrices=True)
    sig_full = np.zeros(vt.shape[0])
    sig_full[: sig.size] = sig
    keep = sig_full <= rel_tol * sig[0]
    return weights[:, None] * vt[keep].T, sig_full[keep], sig


def pw_complement_function(lams, a: float, seed: int = 0, window: int = 200, decay: float = 1.0,
                           amplitude: float = 0.2, rel_tol: float = 1e-10,
                           tol: float = CERT_TOL, modes: int | None = None) -> PWComplementFunction:
    """Random even ``f`` on the first ``window`` points with ``f eta`` orthogonal to ``PW_{2a}``.

    The cosine-transform matrix on an oversampled grid of [0, 2a] is weighted by
    ``(1 + n)^-decay`` (so that ``n f(l_n)`` stays square summable) and a random
    combination of its near-null right singular vectors is drawn with the
    given seed.  ``amplitude`` fixes ``max |f|``.
    """
    if not 0 < a < 0.5:
        raise PreconditionError("need 0 < a < 1/2 so that the complement is non-trivial")
    lam = np.asarray(getattr(lams, "positive", lams), dtype=float)[:window]
    if lam.size < window:
        raise PreconditionError(f"sequence has {lam.size} points, window {window} requested")
    n = np.arange(1, window + 1)
    s = _s_grid(lam, 2 * a)
    A = 2.0 * np.cos(np.outer(s, lam))
    weights = (1.0 + n) ** (-decay)
    basis, sig, sig_all = _near_null_basis(A, weights, rel_tol)
    if basis.shape[1] == 0:
        raise PreconditionError("no near-null vectors: enlarge the window")
    if modes is not None:
        basis = basis[:, -modes:]
    rng = np.random.default_rng(seed)
    f = basis @ rng.standard_normal(basis.shape[1])
    f *= amplitude / np.max(np.abs(f))
    out = PWComplementFunction(lam, f, a, {"seed": seed, "window": window, "decay": decay,
                                           "nullspace_dim": int(basis.shape[1]),
                                           "s_points": int(s.size)})
    resid = out.gap_residual()
    tail = np.sum((n[window * 3 // 4:] * f[window * 3 // 4:]) ** 2) / np.sum((n * f) ** 2)
    out.meta.update({"gap_residual": resid, "decay_tail_fraction": float(tail)})
    if resid > tol:
        raise PreconditionError(f"gap residual {resid:.3g} above {tol}: enlarge the window")
    return out


def _multiplier_for_g(f: PWComplementFunction, b: float, seed: int, strength: float,
                      decay: float, rel_tol: float) -> np.ndarray:
    """Even multiplier beta, decaying, with ``f * beta`` also orthogonal to ``PW_{2b}``."""
    lam = f.lam
    n = np.arange(1, lam.size + 1)
    s = _s_grid(lam, 2 * b)
    A = 2.0 * np.cos(np.outer(s, lam)) * f.values[None, :]
    basis, _, _ = _near_null_basis(A, (1.0 + n) ** (-decay), rel_tol)
    if basis.shape[1] == 0:
        return np.zeros_like(f.values)
    rng = np.random.default_rng(seed + 7919)
    beta = basis @ rng.standard_normal(basis.shape[1])
    return strength * beta / np.max(np.abs(beta))


def pw_complement_pair(lams, a: float, b: float, seed: int = 0, window: int = 200,
                       amplitude: float = 0.5, g_strength: float = 0.05, decay: float = 3.0):
    """``f`` and ``g = f (1 + beta)`` with both measures orthogonal to the required spaces.

    ``f`` is drawn against ``PW_{2 max(a, b)}`` so it serves both gaps;
    ``beta`` is bounded by ``g_strength`` < 1, keeping ``g / f`` positive.
    A fast ``decay`` keeps the potentials smooth enough for a truncated
    reconstruction to resolve them.
    """
    top = max(a, b)
    f = pw_complement_function(lams, top, seed, window, decay=decay, amplitude=amplitude)
    f = PWComplementFunction(f.lam, f.values, a, dict(f.meta, constructed_for=top))
    beta = _multiplier_for_g(f, b, seed, g_strength, 1.0, 1e-10)
    g = PWComplementFunction(f.lam, f.values * (1.0 + beta), b,
                             {"seed": seed, "multiplier_max": float(np.max(np.abs(beta)))})
    g.meta["gap_residual"] = g.gap_residual()
    return f, g


# ---------------------------------------------------------- indeterminate pair

@dataclass
class IndeterminatePair:
    mu: SpectralMeasure
    mu_tilde: SpectralMeasure
    f: PWComplementFunction
    g: PWComplementFunction
    a: float
    b: float
    gamma: np.ndarray
    identities: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"lams": self.mu.lam.tolist(), "masses": self.mu.alpha.tolist(),
                "masses_tilde": self.mu_tilde.alpha.tolist(), "f": self.f.values.tolist(),
                "g": self.g.values.tolist(), "a": self.a, "b": self.b,
                "certificates": self.identities}


def indeterminate_pair(lams, gam: CharacteristicData, f: PWComplementFunction,
                       g: PWComplementFunction) -> IndeterminatePair:
    """Masses ``a = f/2 + sqrt(f^2/4 + gamma^2 g/f)`` and ``a~ = a - f`` on the window.

    Where ``f`` vanishes both masses equal ``gamma_n``; at the point 0 both
    masses equal ``gamma_0``.
    """
    lam = f.lam
    W = lam.size
    if g.lam.size != W or not np.allclose(g.lam, lam):
        raise PreconditionError("f and g must live on the same window")
    gamma = np.asarray(gam.gamma, dtype=float)[: W + 1]
    if gamma.size < W + 1:
        raise PreconditionError("characteristic data shorter than the window")
    fv, gv = f.values, g.values
    gm = gamma[1:]
    zero = fv == 0.0
    safe_f = np.where(zero, 1.0, fv)
    disc = fv**2 / 4.0 + gm**2 * gv / safe_f
    if np.any(disc[~zero] < 0):
        bad = np.where((disc < 0) & ~zero)[0] + 1
        raise PositivityError(f"negative discriminant at n = {bad[:5].tolist()}: f, g too large")
    root = np.sqrt(np.maximum(disc, 0.0))
    alpha = np.where(zero, gm, fv / 2.0 + root)
    alpha_t = np.where(zero, gm, -fv / 2.0 + root)
    if np.any(alpha <= 0) or np.any(alpha_t <= 0):
        bad = np.where((alpha <= 0) | (alpha_t <= 0))[0] + 1
        raise PositivityError(f"nonpositive mass at n = {bad[:5].tolist()}")
    a0 = gamma[0]
    mu = SpectralMeasure.from_positive(lam, np.concatenate([[a0], alpha]), {"side": "left", "source": "pair"})
    mut = SpectralMeasure.from_positive(lam, np.concatenate([[a0], alpha_t]),
                                        {"side": "left", "source": "pair_tilde"})
    nz = ~zero
    diff_err = np.max(np.abs(alpha - alpha_t - fv))
    prod_err = np.max(np.abs(alpha[nz] * alpha_t[nz] - gm[nz] ** 2 * gv[nz] / fv[nz]) /
                      (gm[nz] ** 2 * np.abs(gv[nz] / fv[nz]))) if nz.any() else 0.0
    ids = {"difference_error": float(diff_err), "product_rel_error": float(prod_err)}
    return IndeterminatePair(mu, mut, f, g, f.a, g.a, gamma, ids)


def _asymptotics_ok(alpha: np.ndarray, gamma_ref: np.ndarray) -> dict:
    n = np.arange(1, alpha.size)
    res = n * (alpha[1:] / np.pi - 1.0)
    sums = np.cumsum(res**2)
    quarter = sums.size * 3 // 4
    tail_share = float((sums[-1] - sums[quarter]) / max(sums[-1], 1e-300))
    return {"positive": bool(np.all(alpha > 0)), "l2_total": float(sums[-1]),
            "tail_share": tail_share, "ok": bool(np.all(alpha > 0) and tail_share < 0.5)}


def verify_pair(pair: IndeterminatePair, a: float | None = None, b: float | None = None,
                tol: float = 1e-2, reconstruct: bool = False, grid: int = 512, modes: int = 120) -> dict:
    """Asymptotics, both gap checks and optionally a reconstruction comparison.

    The difference of the right-end measures is obtained from the left masses
    through ``alpha_+ = gamma^2 / alpha`` (valid for n >= 1); its gap is
    checked empirically rather than assumed.
    """
    a = pair.a if a is None else a
    b = pair.b if b is None else b
    lam = pair.mu.lam
    alpha = pair.mu.alpha
    alpha_t = pair.mu_tilde.alpha
    gm = pair.gamma
    d_left = alpha[1:] - alpha_t[1:]
    d_right = gm[1:] ** 2 * (1.0 / alpha_t[1:] - 1.0 / alpha[1:])

    def gap_check(values, half):
        s = np.linspace(0.0, 2 * half * 0.9, 2000)
        ft = cosine_transform(lam, values, s)
        norm = np.sqrt(2.0 * np.sum(values**2))
        return float(np.max(np.abs(ft)) / max(norm, 1e-300))

    report = {
        "asymptotics": {"mu": _asymptotics_ok(alpha, gm), "mu_tilde": _asymptotics_ok(alpha_t, gm)},
        "left_gap_residual": gap_check(d_left, a),
        "right_gap_residual": gap_check(d_right, b),
        "right_difference_vs_f2_over_g": float(np.max(np.abs(
            d_right - pair.f.values**2 / np.where(pair.g.values == 0, 1.0, pair.g.values)))),
        "tolerance": tol,
    }
    report["left_gap_ok"] = report["left_gap_residual"] <= tol
    report["right_gap_ok"] = report["right_gap_residual"] <= tol
    report["asymptotics_ok"] = report["asymptotics"]["mu"]["ok"] and report["asymptotics"]["mu_tilde"]["ok"]
    if reconstruct:
        from .glinverse import reconstruct_from_measure

        rq = reconstruct_from_measure(pair.mu, grid, modes, side="left", check_spectrum=False)
        rqt = reconstruct_from_measure(pair.mu_tilde, grid, modes, side="left", check_spectrum=False)
        x = rq.potential.x
        diff = rq.potential.samples - rqt.potential.samples
        outer = (x <= a) | (x >= 1 - b)
        inner = ~outer
        report["reconstruction"] = {
            "outer_l2": float(np.sqrt(np.trapezoid(np.where(outer, diff, 0.0) ** 2, x))),
            "inner_l2": float(np.sqrt(np.trapezoid(np.where(inner, diff, 0.0) ** 2, x))),
        }
        report["reconstruction"]["ok"] = report["reconstruction"]["outer_l2"] <= 1e-1
    report["passed"] = bool(report["left_gap_ok"] and report["right_gap_ok"] and report["asymptotics_ok"])
    return report


# ------------------------------------------------------------ uniqueness probe

def uniqueness_probe(mu: SpectralMeasure, gam: CharacteristicData, model: UncertaintyModel | None,
                     a: float, d: float | None = None, window: int | None = None,
                     amplitude: float = 0.1, starts: int = 4, seed: int = 0,
                     decay: float = 3.0, min_amplitude: float = 0.01) -> dict:
    """Search for a second measure with the same spectrum and matching data near both ends.

    Candidates ``a~ = a - f`` have ``f eta`` orthogonal to ``PW_{2d}`` by
    construction; the objective is the relative gap residual of the induced
    right-end difference ``gamma^2 (1/a~ - 1/a)``; random starts have
    ``max |f| = amplitude * min alpha`` and candidates smaller than
    ``min_amplitude * min alpha`` are rejected.
    The smallest value found is the infeasibility margin: evidence, not proof.
    """
    d = min(a + 0.1, 0.45) if d is None else d
    lam = mu.lam if window is None else mu.lam[:window]
    W = lam.size
    alpha = mu.alpha[1: W + 1]
    gm = np.asarray(gam.gamma, dtype=float)[1: W + 1]
    info = {"a": a, "d": d, "window": W}
    if model is not None:
        eps = model.eps(np.arange(1, W + 1))
        info["near_even_violations"] = int(np.sum(np.abs(alpha - gm) >= eps))
        info["uncertainty"] = uncertainty_size(model)
        info["uniqueness_expected"] = bool(info["uncertainty"] <= a + 1e-12)
    n = np.arange(1, W + 1)
    s = _s_grid(lam, 2 * d)
    A = 2.0 * np.cos(np.outer(s, lam))
    basis, _, _ = _near_null_basis(A, (1.0 + n) ** (-decay), 1e-10)
    if basis.shape[1] == 0:
        raise PreconditionError("no admissible differences on this window")
    # below this size the residual of an even measure shrinks with f itself
    floor = min_amplitude * float(np.min(alpha))

    def residual(c):
        f = basis @ c
        at = alpha - f
        if np.any(at <= 0) or np.max(np.abs(f)) < floor:
            return np.full(s.size, 1e3)
        g = gm**2 * (1.0 / at - 1.0 / alpha)
        return (A @ g) / np.sqrt(2.0 * np.sum(g**2))

    # the swap alpha -> gamma^2 / alpha exchanges left and right data, so its
    # difference is the natural first candidate; it vanishes for even data
    swap = alpha - gm**2 / alpha
    starts_c = []
    if np.max(np.abs(swap)) > floor:
        starts_c.append(np.linalg.lstsq(basis, swap, rcond=None)[0])
    rng = np.random.default_rng(seed)
    for _ in range(starts):
        c = rng.standard_normal(basis.shape[1])
        starts_c.append(c * amplitude * float(np.min(alpha)) / np.max(np.abs(basis @ c)))
    best, best_c = np.inf, None
    for c0 in starts_c:
        sol = least_squares(residual, c0, method="trf", max_nfev=200)
        val = float(np.max(np.abs(residual(sol.x))))
        if val < best:
            best, best_c = val, sol.x
    f = basis @ best_c
    info.update({
        "margin": best,
        "candidate_f_max": float(np.max(np.abs(f))),
        "starts": starts,
        "basis_size": int(basis.shape[1]),
        "swap_start": bool(np.max(np.abs(swap)) > floor),
        "amplitude": amplitude,
        "min_amplitude": min_amplitude,
        "label": "numerical evidence, not a proof",
    })
    return info


# ----------------------------------------------------- condition-free example

def condition_free_demo(q_core: Potential, eps: float = 0.2, count: int = 30, grid_n: int = 2049) -> dict:
    """Two potentials equal on (0, 1 - eps) whose ``m_+`` agree on a dense sequence.

    ``q~`` mirrors the last piece of ``q`` across ``1 - eps/2``.  Gluing the
    mirror image of ``q`` beyond 1 gives an operator on (0, 2 - eps) whose
    reflection is the analogous extension of ``q~``.  Both glued operators
    share a Dirichlet spectrum, and the two Weyl functions agree on it.
    """
    if not 0 < eps < 0.5:
        raise PreconditionError("eps must lie in (0, 1/2)")
    length = 2.0 - eps

    def q(x):
        return q_core(np.clip(x, 0.0, 1.0))

    def q_tilde(x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 1 - eps, q(x), q(np.clip(length - x, 0.0, 1.0)))

    x = np.linspace(0.0, 1.0, grid_n)
    pot = Potential(q(x))
    pot_t = Potential(q_tilde(x))
    mirrored = reflect_potential(pot)

    def glued_end(z):
        # Dirichlet solution at 0 of the glued operator, evaluated at 2 - eps;
        # on (1, 2 - eps) the potential is the mirror image on (eps, 1)
        first, _ = shoot(pot, z)
        second, _ = shoot(mirrored, z, eps, 1.0)
        return (second[:, 0] * first[:, 1] + second[:, 2] * first[:, 0]).real

    zgrid = np.linspace(1e-3, np.pi * (count + 2) / length, 16 * (count + 2))
    vals = glued_end(zgrid)
    idx = np.where(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0][:count]
    if idx.size < count:
        raise PreconditionError("could not bracket enough points of the glued spectrum")
    zs = np.array([brentq(lambda t: glued_end(np.array([t]))[0], zgrid[i], zgrid[i + 1], xtol=1e-14)
                   for i in idx])
    m = weyl_m(pot, "right", zs)
    # q~ jumps at 1 - eps; integrate the two continuous pieces separately
    mt = np.empty_like(m)
    for i, z in enumerate(zs):
        head = transfer_matrix(pot, 0.0, 1.0 - eps, z).matrix[:, 0]
        # the columns start from (0, 1) and (1, 0), so the state (y, y') has coordinates (y', y)
        u, up = transfer_matrix(mirrored, 0.0, eps, z).matrix @ head[::-1]
        mt[i] = -up / (z * u)
    rel = np.abs(m - mt) / np.maximum(np.abs(m), 1e-300)
    tail = x >= 1 - eps
    density = count * np.pi / zs[-1]
    return {
        "eps": eps,
        "points": zs.tolist(),
        "max_rel_mismatch": float(rel.max()),
        "potential_l2_on_tail": float(np.sqrt(np.trapezoid(np.where(tail, pot.samples - pot_t.samples, 0.0) ** 2, x))),
        "density_estimate": float(density),
        "density_expected": length,
        "passed": bool(rel.max() <= 1e-6),
    }
