"""Herglotz integrals of discrete measures, Krein spectral shifts and spectral gaps.

The Herglotz kernel is ``K(t, z) = 1/(t - z) - t/(1 + t^2)`` and
``H mu(z) = (1/pi) sum_j m_j K(t_j, z)``.  Measures that are asymptotically
free (mass pi on pi*Z) are summed against the free measure and the closed form
``H mu_free = -cot z`` is added back.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import bisect

from .errors import (BracketError, InterlacingError, NearSingularError, PositivityError,
                     PreconditionError, SpectralError)

__all__ = [
    "DiscreteMeasure",
    "SpectralMeasure",
    "KreinShift",
    "GapReport",
    "FREE_CONSTANT",
    "kernel",
    "herglotz_eval",
    "herglotz_real",
    "herglotz_of_krein",
    "krein_shift_of_measure",
    "krein_shift_of_operator",
    "verify_exponential_identity",
    "krein_limit_at_infinity",
    "masses_from_two_spectra",
    "fourier_transform",
    "gap_from_decay",
    "lemma_l1_check",
    "identity_grid",
]

#: ``log|H mu_free(i)|``: the constant c in H mu = exp(H k + c) for the free pair.
FREE_CONSTANT = float(np.log(1.0 / np.tanh(1.0)))

TAIL_MODELS = ("none", "free_pi", "zero")


class DivergenceError(SpectralError):
    """Partial sums of a truncated Herglotz integral do not settle."""


def kernel(t, z):
    t = np.asarray(t)
    return 1.0 / (t - z) - t / (1.0 + t * t)


@dataclass(frozen=True, eq=False)
class DiscreteMeasure:
    """Atoms ``masses`` at strictly increasing ``support`` points.

    ``tail_model`` declares what lies beyond the window: nothing ('none' or
    'zero') or the free measure, mass pi at every pi*j outside the window
    ('free_pi').  For 'free_pi' the integer ``index`` pairs each atom with
    its free counterpart pi*index.
    """

    support: np.ndarray
    masses: np.ndarray
    tail_model: str = "none"
    index: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        support = np.array(self.support, dtype=float)
        masses = np.array(self.masses, dtype=float)
        if support.shape != masses.shape or support.ndim != 1:
            raise ValueError("support and masses must be 1-d arrays of equal length")
        if np.any(np.diff(support) <= 0):
            raise ValueError("support must be strictly increasing")
        if self.tail_model not in TAIL_MODELS:
            raise ValueError(f"tail_model must be one of {TAIL_MODELS}")
        index = self.index
        if self.tail_model == "free_pi":
            if index is None:
                raise ValueError("free_pi tail needs an index array")
            index = np.array(index, dtype=int)
            if index.shape != support.shape or np.any(np.diff(index) != 1):
                raise ValueError("index must be consecutive integers matching the support")
        for arr in (support, masses):
            arr.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "index", index)

    def __len__(self):
        return self.support.size

    def poisson_partial_sums(self) -> np.ndarray:
        """Partial sums of sum |m_j| / (1 + t_j^2), atoms ordered by |t_j|."""
        order = np.argsort(np.abs(self.support), kind="stable")
        w = np.abs(self.masses[order]) / (1.0 + self.support[order] ** 2)
        return np.cumsum(w)

    def total_variation(self) -> float:
        return float(np.sum(np.abs(self.masses)))

    def __sub__(self, other: "DiscreteMeasure") -> "DiscreteMeasure":
        return difference(self, other)


class SpectralMeasure(DiscreteMeasure):
    """Positive symmetric measure ``a_0 d_0 + sum a_n (d_{l_n} + d_{-l_n})``."""

    @classmethod
    def from_positive(cls, lam, alpha, meta: dict | None = None,
                      tail_model: str = "free_pi") -> "SpectralMeasure":
        """Build from the positive branch ``lam`` (n >= 1) and masses ``alpha`` (n >= 0)."""
        lam = np.asarray(lam, dtype=float)
        alpha = np.asarray(alpha, dtype=float)
        if alpha.size != lam.size + 1:
            raise ValueError("alpha must include the mass at 0")
        if np.any(alpha <= 0):
            raise PositivityError("spectral measure masses must be positive")
        n = lam.size
        support = np.concatenate([-lam[::-1], [0.0], lam])
        masses = np.concatenate([alpha[:0:-1], alpha])
        index = np.arange(-n, n + 1) if tail_model == "free_pi" else None
        return cls(support, masses, tail_model, index, dict(meta or {}))

    @classmethod
    def free(cls, count: int) -> "SpectralMeasure":
        lam = np.pi * np.arange(1, count + 1)
        return cls.from_positive(lam, np.full(count + 1, np.pi), {"source": "free"})

    @property
    def lam(self) -> np.ndarray:
        """Positive branch l_1 < l_2 < ..."""
        return self.support[self.support > 0]

    @property
    def alpha(self) -> np.ndarray:
        """Masses a_0, a_1, ... on 0, l_1, ..."""
        return self.masses[self.support >= 0]

    def truncated(self, count: int) -> "SpectralMeasure":
        return SpectralMeasure.from_positive(self.lam[:count], self.alpha[:count + 1],
                                             dict(self.meta), self.tail_model)

    def normalized_residuals(self) -> np.ndarray:
        """``n (a_n / pi - 1)`` for n >= 1."""
        n = np.arange(1, self.lam.size + 1)
        return n * (self.alpha[1:] / np.pi - 1.0)


def difference(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Signed measure ``mu - nu`` on the union of supports, no tail."""
    pts = np.concatenate([mu.support, nu.support])
    ms = np.concatenate([mu.masses, -nu.masses])
    order = np.argsort(pts, kind="stable")
    pts, ms = pts[order], ms[order]
    uniq, inv = np.unique(pts, return_inverse=True)
    merged = np.zeros(uniq.size)
    np.add.at(merged, inv, ms)
    return DiscreteMeasure(uniq, merged, "none", meta={"source": "difference"})


class KreinShift(NamedTuple):
    """Function equal to pi on disjoint open intervals and 0 elsewhere.

    ``tail`` is 'none' or 'free'; in the latter case interval ``index[j]``
    is paired with the free interval (pi*j, pi*j + pi/2) and all free intervals
    outside the window are implied.
    """

    intervals: np.ndarray
    tail: str = "none"
    index: np.ndarray | None = None

    def validate(self):
        iv = np.asarray(self.intervals, dtype=float)
        if iv.ndim != 2 or iv.shape[1] != 2:
            raise ValueError("intervals must have shape (n, 2)")
        if np.any(iv[:, 1] <= iv[:, 0]) or np.any(iv[1:, 0] < iv[:-1, 1]):
            raise ValueError("intervals must be ordered, disjoint and non-empty")
        return self

    @classmethod
    def free(cls, count: int) -> "KreinShift":
        j = np.arange(-count, count)
        a = np.pi * j
        return cls(np.column_stack([a, a + np.pi / 2]), "free", j)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        iv = np.asarray(self.intervals)
        inside = (x[..., None] > iv[:, 0]) & (x[..., None] < iv[:, 1])
        return np.pi * inside.any(axis=-1)


class GapReport(NamedTuple):
    """Outcome of a decay fit of ``log|H m(iy)|``."""

    half_gap: float | None
    lower_bound: float
    slope: float
    power: float
    fit_residual: float
    max_ft_on_gap: float
    stable_range: tuple
    truncation: dict

    def to_dict(self) -> dict:
        d = self._asdict()
        d["stable_range"] = list(self.stable_range)
        return d


def _free_cot_part(z):
    return -1.0 / np.tan(z)


def herglotz_eval(m: DiscreteMeasure, z, min_distance: float = 1e-12):
    """Evaluate ``H m`` at complex points ``z`` (array or scalar)."""
    zs = np.asarray(z, dtype=complex)
    flat = np.atleast_1d(zs).ravel()
    dist = np.min(np.abs(flat[:, None] - m.support[None, :]), axis=1) if len(m) else np.inf
    if np.any((dist <= min_distance) & (flat.imag == 0)):
        raise NearSingularError("evaluation point on the support")
    if m.tail_model == "none" and len(m) >= 20:
        _check_decay(m)
    t = m.support[None, :]
    vals = (kernel(t, flat[:, None]) * m.masses[None, :]).sum(axis=1) / np.pi
    if m.tail_model == "free_pi":
        tf = np.pi * m.index[None, :]
        vals = vals - kernel(tf, flat[:, None]).sum(axis=1) + _free_cot_part(flat)
    out = vals.reshape(np.shape(zs))
    return out[()] if out.ndim == 0 else out


def _check_decay(m: DiscreteMeasure):
    absm = np.abs(m.masses)
    order = np.argsort(np.abs(m.support))
    k = max(2, len(m) // 10)
    inner = absm[order[:k]].mean()
    outer = absm[order[-k:]].mean()
    outer_pos = np.abs(m.support[order[-k:]]).mean()
    spacing = outer_pos / max(len(m) / 2, 1)
    if inner > 0 and outer > 0.5 * inner and spacing < 10.0 and outer_pos > 50:
        raise DivergenceError("masses do not decay; declare tail_model='free_pi' for spectral measures")


def herglotz_real(m: DiscreteMeasure, x) -> np.ndarray:
    """Real-axis values of ``H m`` off the support (free tail included)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vals = (kernel(m.support[None, :], x[:, None]) * m.masses[None, :]).sum(axis=1) / np.pi
    if m.tail_model == "free_pi":
        vals = vals - kernel(np.pi * m.index[None, :], x[:, None]).sum(axis=1) - 1.0 / np.tan(x)
    return vals


def _interval_terms(a, b, z):
    """Per-interval ``log((b - z)/(a - z)) - 1/2 log((1 + b^2)/(1 + a^2))``."""
    a = np.asarray(a, dtype=float)[None, :]
    b = np.asarray(b, dtype=float)[None, :]
    z = np.asarray(z, dtype=complex)[:, None]
    reg = 0.5 * (np.log1p(b * b) - np.log1p(a * a))
    upper = z.imag > 0
    lower = z.imag < 0
    # closed upper half-plane: +i0 convention on the real axis
    zr = z.real
    re = np.log(np.abs(b - z)) - np.log(np.abs(a - z))
    im_up = np.angle(b - z) - np.angle(a - z)
    im_real = np.pi * ((zr > a) & (zr < b))
    im = np.where(upper | lower, im_up, im_real)
    return re + 1j * im - reg


def herglotz_of_krein(k: KreinShift, z):
    """Closed-form ``H k`` summed interval by interval."""
    zs = np.asarray(z, dtype=complex)
    flat = np.atleast_1d(zs).ravel()
    iv = np.asarray(k.intervals, dtype=float).reshape(-1, 2)
    if iv.size and np.any(np.min(np.abs(flat[:, None] - iv.ravel()[None, :]), axis=1) == 0):
        raise NearSingularError("evaluation at a jump point")
    total = _interval_terms(iv[:, 0], iv[:, 1], flat).sum(axis=1) if iv.size else np.zeros(flat.size, complex)
    if k.tail == "free":
        a_f = np.pi * np.asarray(k.index, dtype=float)
        total = total - _interval_terms(a_f, a_f + np.pi / 2, flat).sum(axis=1)
        minus_cot = -1.0 / np.tan(flat)
        real_axis = flat.imag == 0
        # +i0 boundary value of the principal log
        minus_cot = np.where(real_axis, minus_cot.real + 0j, minus_cot)
        total = total + np.log(minus_cot) - FREE_CONSTANT
    out = total.reshape(np.shape(zs))
    return out[()] if out.ndim == 0 else out


def krein_shift_of_measure(m: DiscreteMeasure, rel_gap: float = 1e-9) -> KreinShift:
    """Krein shift of a positive discrete measure by locating the zeros of ``H m``.

    Between consecutive atoms ``H m`` increases from -inf to +inf, so each gap
    holds exactly one zero; the shift is pi on (atom, zero).
    """
    if np.any(m.masses <= 0):
        raise PositivityError("Krein shift needs a positive measure")
    if len(m) < 2:
        raise PreconditionError("need at least two atoms: a single atom has no zero to pair with")
    t = m.support
    f = lambda x: float(herglotz_real(m, x)[0])
    zeros = []
    for left, right in zip(t[:-1], t[1:]):
        d = rel_gap * (right - left)
        lo, hi = left + d, right - d
        flo, fhi = f(lo), f(hi)
        if not (flo < 0 < fhi):
            raise BracketError(f"no sign change of H mu in ({left:.6g}, {right:.6g}); shrink the window")
        zeros.append(bisect(f, lo, hi, xtol=1e-14 * max(1.0, abs(right)), rtol=4 * np.finfo(float).eps,
                            maxiter=400))
    intervals = np.column_stack([t[:-1], zeros])
    if m.tail_model == "free_pi":
        return KreinShift(intervals, "free", m.index[:-1].copy())
    return KreinShift(intervals, "none", None)


def _check_interlacing(lam: np.ndarray, eta: np.ndarray):
    n = min(lam.size, eta.size)
    lam, eta = lam[:n], eta[:n]
    ok = eta[0] > 0 and np.all(eta < lam) and np.all(lam[:-1] < eta[1:])
    if not ok:
        raise InterlacingError("expected 0 < eta_1 < l_1 < eta_2 < l_2 < ...")
    return n


def krein_shift_of_operator(dd, dn) -> KreinShift:
    """Shift equal to pi on (l_{n-1}, eta_n) over R_+ and on (-l_n, -eta_n) over R_-."""
    lam = np.asarray(getattr(dd, "positive", dd), dtype=float)
    eta = np.asarray(getattr(dn, "positive", dn), dtype=float)
    n = _check_interlacing(lam, eta)
    lam, eta = lam[:n], eta[:n]
    left = np.column_stack([-lam[::-1], -eta[::-1]])
    right = np.column_stack([np.concatenate([[0.0], lam[:-1]]), eta])
    index = np.arange(-n, n)
    return KreinShift(np.vstack([left, right]), "free", index)


def identity_grid() -> np.ndarray:
    """Fixed 40-point off-axis grid used by the exponential identity check."""
    x = np.linspace(-9.0, 9.0, 10)
    y = np.array([0.25, 0.5, 1.0, 2.0])
    return (x[None, :] + 1j * y[:, None]).ravel()


def krein_limit_at_infinity(k: KreinShift) -> float:
    """``lim Re H k(iy)`` as y -> infinity, from the per-interval closed form."""
    iv = np.asarray(k.intervals, dtype=float).reshape(-1, 2)
    a, b = iv[:, 0], iv[:, 1]
    value = -0.5 * float(np.sum(np.log1p(b * b) - np.log1p(a * a)))
    if k.tail == "free":
        af = np.pi * np.asarray(k.index, dtype=float)
        bf = af + np.pi / 2
        value += 0.5 * float(np.sum(np.log1p(bf * bf) - np.log1p(af * af))) - FREE_CONSTANT
    return value


def verify_exponential_identity(m: DiscreteMeasure, k: KreinShift, grid=None) -> dict:
    """Compare ``H m`` with ``exp(H k + c)`` on an off-axis grid.

    ``c = log|H m(i)|`` is the constant of the identity for the kernel
    normalized at i.  Renormalizing ``H k`` at i*infinity shifts the constant
    to ``c_infinity = c + lim Re H k(iy)``, which vanishes whenever
    ``|H m(iy)| -> 1``; ``rel_error_c0`` checks the identity in that
    normalization with the constant fixed to 0 (nothing fitted).
    """
    zs = identity_grid() if grid is None else np.asarray(grid, dtype=complex)
    hm = herglotz_eval(m, zs)
    hk = herglotz_of_krein(k, zs)
    c_fit = float(np.log(np.abs(herglotz_eval(m, 1j))))
    k_inf = krein_limit_at_infinity(k)
    err_fit = np.abs(hm - np.exp(hk + c_fit)) / np.abs(hm)
    err_c0 = np.abs(hm - np.exp(hk - k_inf)) / np.abs(hm)
    return {
        "c": c_fit,
        "c_infinity": c_fit + k_inf,
        "krein_limit": k_inf,
        "rel_error": float(err_fit.max()),
        "rel_error_c0": float(err_c0.max()),
        "grid_size": int(zs.size),
        "truncation": {"measure_atoms": len(m), "intervals": int(np.shape(k.intervals)[0])},
    }


def _log_abs_sign(x):
    return np.log(np.abs(x)), np.sign(x)


def masses_from_two_spectra(dd, dn, meta: dict | None = None) -> SpectralMeasure:
    """Masses of ``mu_+`` as residues of ``exp(H k + c)`` at the Dirichlet points.

    Every interval is paired with its free counterpart so that products stay
    bounded; the free closed form ``-cot z`` absorbs the constant.
    """
    lam = np.asarray(getattr(dd, "positive", dd), dtype=float)
    eta = np.asarray(getattr(dn, "positive", dn), dtype=float)
    n = _check_interlacing(lam, eta)
    lam, eta = lam[:n], eta[:n]
    k = krein_shift_of_operator(lam, eta)
    a = k.intervals[:, 0]
    b = k.intervals[:, 1]
    j = k.index.astype(float)
    af = np.pi * j
    bf = af + np.pi / 2

    # evaluation points: 0, l_1 .. l_{n-1}; these own intervals with index 0..n-1
    x = np.concatenate([[0.0], lam[:-1]])
    own = np.arange(n) + n  # row of the interval starting at x in k.intervals
    reg = 0.5 * (np.log1p(b * b) - np.log1p(a * a)) - 0.5 * (np.log1p(bf * bf) - np.log1p(af * af))

    X = x[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = ((b[None, :] - X) * (af[None, :] - X)) / ((a[None, :] - X) * (bf[None, :] - X))
    rows = np.arange(n)
    ratio[rows, own] = 1.0
    if not np.all(np.isfinite(ratio)):
        raise InterlacingError("evaluation point coincides with a jump of the free reference")
    logs, signs = _log_abs_sign(ratio)
    reg_other = reg[None, :].repeat(n, axis=0)
    reg_other[rows, own] = 0.0
    log_prod = logs.sum(axis=1) - reg_other.sum(axis=1)
    sign = np.prod(signs, axis=1)

    d = x - np.pi * np.arange(n)
    d_cot = np.where(np.abs(d) < 1e-8, 1.0 - d * d / 3.0, d / np.tan(np.where(d == 0, 1.0, d)))
    own_factor = (b[own] - x) / (bf[own] - x)
    log_own = np.log(np.abs(d_cot * own_factor)) - reg[own]
    sign = sign * np.sign(d_cot * own_factor)
    if np.any(sign <= 0):
        raise SpectralError("regularized residue has the wrong sign; check spectra asymptotics")
    # constant of the identity: c = -lim Re H k(iy), free part already in -cot z
    log_c = float(np.sum(reg))
    alpha = np.pi * np.exp(log_prod + log_own + log_c)
    info = {"source": "two_spectra", "truncation": n, "side": "right"}
    info.update(meta or {})
    return SpectralMeasure.from_positive(lam[:-1], alpha, info)


def fourier_transform(m: DiscreteMeasure, s):
    """``sum_j m_j exp(-i s t_j)`` for absolutely summable input."""
    if m.tail_model == "free_pi":
        raise PreconditionError(
            "spectral measures are not summable; transform a difference of measures instead"
        )
    ss = np.asarray(s, dtype=float)
    flat = np.atleast_1d(ss).ravel()
    vals = np.exp(-1j * flat[:, None] * m.support[None, :]) @ m.masses
    out = vals.reshape(np.shape(ss))
    return out[()] if out.ndim == 0 else out


def _auto_tail_bound(m: DiscreteMeasure, ys: np.ndarray) -> np.ndarray:
    """Size of the contribution of the outer fifth of the atoms.

    Signed sums keep the cancellation between paired atoms of a difference
    measure, which an absolute bound would throw away.
    """
    order = np.argsort(np.abs(m.support))
    outer = order[-max(1, len(m) // 5):]
    kv = kernel(m.support[outer][None, :], 1j * ys[:, None])
    return np.abs(kv @ m.masses[outer]) / np.pi


def gap_from_decay(m: DiscreteMeasure, ys, tail_bound="auto", prefactor: bool = True,
                   s_points: int = 400) -> GapReport:
    """Estimate the half-gap ``a`` of a signed measure with spectral gap (-2a, 2a).

    ``log|H m(iy)|`` is fitted by ``A - 2 a y - p log y`` over the upper half
    of the y-range lying above the noise floor (10x the truncation tail bound
    plus rounding).
    """
    ys = np.asarray(ys, dtype=float)
    if ys.size < 5 or np.any(np.diff(ys) <= 0) or ys[0] <= 0:
        raise PreconditionError("need at least 5 increasing positive y values")
    if m.tail_model == "free_pi":
        raise PreconditionError("decay fit needs a summable (difference) measure")
    t = m.support
    terms = kernel(t[None, :], 1j * ys[:, None]) * m.masses[None, :] / np.pi
    h = terms.sum(axis=1)
    rounding = 64 * np.finfo(float).eps * np.abs(terms).sum(axis=1)
    if isinstance(tail_bound, str):
        tb = _auto_tail_bound(m, ys)
    elif callable(tail_bound):
        tb = np.asarray(tail_bound(ys), dtype=float)
    else:
        tb = np.full(ys.shape, float(tail_bound))
    floor = 10.0 * (tb + rounding)
    logh = np.log(np.abs(h) + 1e-300)
    above = np.abs(h) > floor
    # stable range: leading run above the floor
    stop = int(np.argmin(above)) if not above.all() else ys.size
    idx = np.arange(stop)
    trunc = {"atoms": len(m), "tail_bound_max": float(tb.max()), "rounding_max": float(rounding.max())}
    if idx.size < 3:
        y0 = ys[0]
        lb = float(max(-np.log(floor[0] + 1e-300) / (2 * y0), 0.0))
        return GapReport(None, lb, float("nan"), float("nan"), float("nan"), float("nan"),
                         (float(ys[0]), float(ys[0])), trunc)
    # small y is pre-asymptotic; fit the upper half of the stable range
    upper = idx[ys[idx] >= 0.5 * (ys[idx[0]] + ys[idx[-1]])]
    if upper.size >= 5:
        idx = upper
    cols = [np.ones(idx.size), ys[idx]]
    if prefactor and idx.size >= 5:
        cols.append(np.log(ys[idx]))
    A = np.column_stack(cols)
    coef, *_ = np.linalg.lstsq(A, logh[idx], rcond=None)
    resid = float(np.sqrt(np.mean((A @ coef - logh[idx]) ** 2)))
    slope = float(coef[1])
    power = float(-coef[2]) if len(coef) > 2 else 0.0
    half_gap = max(-slope / 2.0, 0.0)
    if half_gap > 0:
        s = np.linspace(-1.8 * half_gap, 1.8 * half_gap, s_points)
        ft = np.abs(fourier_transform(m, s)).max() / max(m.total_variation(), 1e-300)
    else:
        ft = float("nan")
    return GapReport(half_gap, half_gap, slope, power, resid, float(ft),
                     (float(ys[idx[0]]), float(ys[idx[-1]])), trunc)


def _growth_exponent(n, values):
    mask = (values > 0) & np.isfinite(values)
    if mask.sum() < 3:
        return float("nan")
    return float(np.polyfit(np.log(n[mask]), np.log(values[mask]), 1)[0])


def lemma_l1_check(m: DiscreteMeasure, growth_tol: float = 0.25) -> dict:
    """Report which alternative on the Krein interval lengths holds on the window.

    With ``k = pi`` on (l_n, l_n + e_n) the two candidates are
    ``e_n / (l_n a_n)`` and ``(l_n - l_{n-1} - e_{n-1}) / (l_n a_n)``; an
    alternative is flagged bounded when its log-log growth exponent stays
    below ``growth_tol``.
    """
    k = krein_shift_of_measure(m)
    starts = k.intervals[:, 0]
    eps = k.intervals[:, 1] - starts
    lam = m.support
    alpha = m.masses
    pos = np.where(starts > 0)[0]
    pos = pos[1:] if pos.size > 1 else pos
    n = np.arange(1, pos.size + 1, dtype=float)
    la = lam[pos] * alpha[pos]
    alt1 = eps[pos] / la
    alt2 = (lam[pos] - lam[pos - 1] - eps[pos - 1]) / la
    g1 = _growth_exponent(n, alt1)
    g2 = _growth_exponent(n, alt2)
    b1 = bool(np.isfinite(g1) and g1 <= growth_tol)
    b2 = bool(np.isfinite(g2) and g2 <= growth_tol)
    if b1 and not b2:
        which = "first"
    elif b2 and not b1:
        which = "second"
    elif b1 and b2:
        which = "both"
    else:
        which = "neither"
    return {
        "sup_first": float(np.max(alt1)),
        "sup_second": float(np.max(alt2)),
        "growth_first": g1,
        "growth_second": g2,
        "first_bounded": b1,
        "second_bounded": b2,
        "alternative": which,
        "window": int(pos.size),
    }
