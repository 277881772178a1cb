"""Quantities attached to the even operator with a given Dirichlet spectrum.

For a Dirichlet sequence ``0 < l_1 < l_2 < ...`` the entire function

    F(z) = sin z * prod_n (l_n^2 - z^2) / ((pi n)^2 - z^2)

vanishes exactly on ``{0, +-l_n}`` and behaves like ``sin z`` along the
imaginary axis.  The masses of the even operator are ``gamma_n = pi / |F'(l_n)|``
and coincide, up to a constant factor, with ``exp(p_n)`` where ``p_n`` is the
characteristic sequence.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import polygamma

from .errors import NearSingularError, PreconditionError, SpectralError
from .herglotz import DiscreteMeasure, SpectralMeasure

__all__ = [
    "CharacteristicData",
    "canonical_product",
    "canonical_derivative",
    "even_masses",
    "characteristic_sequence",
    "balance_check",
    "leven_verify",
    "polynomial_density_criterion",
    "extend_sequence",
]

PV_WINDOWS = (250, 500, 1000)


class UnbalancedError(SpectralError):
    """Principal-value sums do not settle because the sequence is unbalanced."""


@dataclass
class CharacteristicData:
    """Even-operator masses and characteristic sequence on a window.

    ``gamma[0]`` and ``p[0]`` belong to the point 0; ``gamma[n]``, ``p[n]``
    to ``lam[n - 1]``.  Either array may be ``None`` when only one part was
    computed.
    """

    lam: np.ndarray
    gamma: np.ndarray | None = None
    p: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"lam": self.lam.tolist(), "diagnostics": self.diagnostics}
        out["gamma"] = None if self.gamma is None else self.gamma.tolist()
        out["p"] = None if self.p is None else self.p.tolist()
        return out

    def csv_rows(self):
        lam0 = np.concatenate([[0.0], self.lam])
        for n, lam in enumerate(lam0):
            g = self.gamma[n] if self.gamma is not None and n < self.gamma.size else float("nan")
            p = self.p[n] if self.p is not None and n < self.p.size else float("nan")
            yield n, lam, g, p


def _positive(lams) -> np.ndarray:
    pos = np.asarray(getattr(lams, "positive", lams), dtype=float)
    if pos.ndim != 1 or pos.size == 0 or pos[0] <= 0 or np.any(np.diff(pos) <= 0):
        raise PreconditionError("expected an increasing positive branch")
    return pos


def _tail_shift(pos: np.ndarray) -> float:
    """Average ``l_n^2 - (pi n)^2`` over the last quarter of the window."""
    n = np.arange(1, pos.size + 1)
    k = max(1, pos.size // 4)
    return float(np.mean(pos[-k:] ** 2 - (np.pi * n[-k:]) ** 2))


def _log_tail(pos: np.ndarray, z) -> np.ndarray:
    """log of the product over n > N with ``l_n^2 = (pi n)^2 + d`` (leading order)."""
    d = _tail_shift(pos)
    big_n = pos.size
    # sum_{n > N} d / ((pi n)^2 - z^2) ~ d / pi^2 * psi'(N + 1) for |z| << N
    z = np.asarray(z, dtype=complex)
    return d / np.pi**2 * polygamma(1, big_n + 1) * np.ones_like(z)


def canonical_product(lams, z, tail: bool = True):
    """``F(z)`` for the symmetric sequence ``{0, +-l_n}`` (see module docstring).

    Points beyond the certified window ``|z| < pi (N + 1/2)`` are refused
    because the free reference factor has zeros there.
    """
    pos = _positive(lams)
    zs = np.asarray(z, dtype=complex)
    flat = np.atleast_1d(zs).ravel()
    limit = np.pi * (pos.size + 0.5)
    if np.any(np.abs(flat.real) >= limit):
        raise NearSingularError(f"|Re z| must stay below pi (N + 1/2) = {limit:.6g}")
    n = np.arange(1, pos.size + 1)
    z2 = flat[:, None] ** 2
    factors = (pos[None, :] ** 2 - z2) / ((np.pi * n[None, :]) ** 2 - z2)
    # removable 0/0 at free points inside the window: factor -> limit via sin
    vals = np.sin(flat) * np.prod(factors, axis=1)
    hit = np.isclose(np.abs(flat.real) / np.pi, np.round(np.abs(flat.real) / np.pi)) & (flat.imag == 0)
    if np.any(hit):
        vals[hit] = np.array([_product_at_free_point(pos, zz) for zz in flat[hit]])
    if tail:
        vals = vals * np.exp(_log_tail(pos, flat))
    out = vals.reshape(np.shape(zs))
    return out[()] if out.ndim == 0 else out


def _product_at_free_point(pos, z):
    k = int(round(abs(z.real) / np.pi))
    if k == 0:
        return 0.0 + 0.0j
    n = np.arange(1, pos.size + 1)
    mask = n != k
    rest = np.prod((pos[mask] ** 2 - z * z) / ((np.pi * n[mask]) ** 2 - z * z))
    # sin z / ((pi k)^2 - z^2) at z = +-pi k equals (-1)^k / (2 pi k) times sign(z)
    limit = (-1) ** k / (2 * np.pi * k) * np.sign(z.real)
    return limit * (pos[k - 1] ** 2 - z * z) * rest


def canonical_derivative(lams, tail: bool = True) -> np.ndarray:
    """``F'`` at ``0, l_1, ..., l_N`` by differentiating the compensated product."""
    pos = _positive(lams)
    n = np.arange(1, pos.size + 1)
    lt = _log_tail(pos, 0.0).real if tail else 0.0
    # F'(0) = prod l_n^2 / (pi n)^2
    d0 = np.exp(np.sum(2.0 * np.log(pos / (np.pi * n))) + lt)

    x2 = pos[:, None] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (pos[None, :] ** 2 - x2) / ((np.pi * n[None, :]) ** 2 - x2)
    np.fill_diagonal(ratio, 1.0)
    if not np.all(np.isfinite(ratio)):
        raise NearSingularError("a Dirichlet point coincides with a free reference point")
    log_rest = np.sum(np.log(np.abs(ratio)), axis=1)
    sign_rest = np.prod(np.sign(ratio), axis=1)
    # own factor: d/dz (l^2 - z^2)/((pi k)^2 - z^2) at l times sin l
    d = pos - np.pi * n
    sinc_term = np.where(np.abs(d) < 1e-12, 1.0, np.sin(d) / np.where(d == 0, 1.0, d))
    # sin(l)/((pi k)^2 - l^2) = (-1)^k sin(d) / (-(d)(pi k + l))
    own = -2.0 * pos * ((-1.0) ** n) * sinc_term / (-(np.pi * n + pos))
    tail_vals = np.exp(_log_tail(pos, pos).real) if tail else 1.0
    deriv = own * sign_rest * np.exp(log_rest) * tail_vals
    return np.concatenate([[d0], deriv])


def even_masses(lams, threshold: float = 1e-12) -> CharacteristicData:
    """``gamma_n = pi / |F'(l_n)|`` for n = 0, ..., N."""
    pos = _positive(lams)
    fp = canonical_derivative(pos)
    if np.any(np.abs(fp) < threshold):
        raise NearSingularError("|F'| below threshold: sequence is not separated")
    gamma = np.pi / np.abs(fp)
    diag = {"window": int(pos.size), "tail_shift": _tail_shift(pos)}
    return CharacteristicData(pos.copy(), gamma=gamma, diagnostics=diag)


def extend_sequence(pos: np.ndarray, upto: int, fit_points: int = 20) -> tuple[np.ndarray, dict]:
    """Extend the positive branch to ``upto`` terms with the model ``pi n + C / n``."""
    pos = _positive(pos)
    if upto <= pos.size:
        return pos[:upto], {"model": "none"}
    n = np.arange(1, pos.size + 1)
    k = min(fit_points, pos.size)
    c = float(np.mean(n[-k:] * (pos[-k:] - np.pi * n[-k:])))
    extra = np.arange(pos.size + 1, upto + 1)
    ext = np.concatenate([pos, np.pi * extra + c / extra])
    if np.any(np.diff(ext) <= 0):
        raise PreconditionError("asymptotic extension is not increasing")
    return ext, {"model": "pi n + C/n", "C": c, "fitted_on": int(k)}


def _symmetric(pos: np.ndarray) -> np.ndarray:
    return np.concatenate([-pos[::-1], [0.0], pos])


def _pv_terms(full: np.ndarray, centre: int, targets: np.ndarray, window: int) -> np.ndarray:
    """``sum_{|k| < window, k != n} log((1 + l_k^2) / (l_k - l_n)^2)`` for each target n.

    The window is symmetric in the index about 0, so the terms of order 1/k
    cancel between k and -k and the truncation error is O(n^2 / window).
    """
    out = np.empty(targets.size)
    lk = full[centre - window + 1: centre + window]
    for i, n in enumerate(targets):
        ln = full[centre + n]
        keep = np.arange(lk.size) != window - 1 + n
        out[i] = np.sum(np.log1p(lk[keep] ** 2) - 2.0 * np.log(np.abs(lk[keep] - ln)))
    return out


def characteristic_sequence(lams, count: int | None = None, windows=PV_WINDOWS) -> CharacteristicData:
    """Characteristic sequence ``p_n`` for n = 0..count with Richardson extrapolation.

    Principal-value sums run over ``|k| < N``, ``k != n``, for each ``N`` in
    ``windows`` (scaled up to at least 32 ``count``); terms outside the
    supplied data come from the model
    ``l_k = pi k + C / k``.  The ratio ``exp(p_n) / gamma_n`` is reported.
    """
    pos = _positive(lams)
    bal = balance_check(pos)
    if not bal["balanced"]:
        raise UnbalancedError("sequence is not balanced")
    count = pos.size if count is None else min(count, pos.size)
    # windows must dwarf the largest target for the 1/N extrapolation to hold
    scale = max(1.0, 32.0 * count / min(windows))
    windows = tuple(sorted(int(np.ceil(w * scale)) for w in windows))
    ext, model = extend_sequence(pos, windows[-1] + 1)
    full = _symmetric(ext)
    centre = ext.size
    targets = np.arange(0, count + 1)
    lam_t = full[centre + targets]
    partial = np.array([_pv_terms(full, centre, targets, w) for w in windows])
    sums = 0.5 * (np.log1p(lam_t**2)[None, :] + partial)

    # p(N) = p + a/N + b/N^2 through the three windows
    inv = 1.0 / np.asarray(windows, dtype=float)
    design = np.column_stack([np.ones_like(inv), inv, inv**2][: len(windows)])
    coef = np.linalg.solve(design, sums) if len(windows) == 3 else np.linalg.lstsq(design, sums, rcond=None)[0]
    p = coef[0]
    spread = np.abs(sums[-1] - p)

    gam = even_masses(pos)
    ratio = np.exp(p) / gam.gamma[: count + 1]
    body = ratio[1:] if ratio.size > 1 else ratio
    diag = {
        "windows": list(windows),
        "extension": model,
        "richardson_correction_max": float(spread.max()),
        "ratio_exp_p_over_gamma": float(np.median(body)),
        "ratio_relative_spread": float((body.max() - body.min()) / np.median(body)),
        "balance": bal,
    }
    return CharacteristicData(pos[:count].copy(), gamma=gam.gamma[: count + 1], p=p, diagnostics=diag)


def balance_check(lams, tol: float = 1e-3) -> dict:
    """Partial sums of ``sum_{|n| < N} l_n / (1 + l_n^2)`` and a Cauchy flag.

    Accepts a positive branch (symmetric extension implied) or a full
    increasing sequence; a full sequence is enumerated from its point
    nearest to 0.
    """
    seq = getattr(lams, "positive", None)
    if seq is not None:
        full = _symmetric(np.asarray(seq, dtype=float))
    else:
        arr = np.asarray(lams, dtype=float)
        full = _symmetric(arr) if arr.size and arr[0] > 0 else arr
    centre = int(np.argmin(np.abs(full)))
    reach = min(centre, full.size - 1 - centre)
    weights = full / (1.0 + full * full)
    csum = np.cumsum(weights)

    def sym_sum(m):  # indices with |n - centre| < m, truncated to available data
        lo = max(centre - m + 1, 0)
        hi = min(centre + m - 1, full.size - 1)
        return csum[hi] - (csum[lo - 1] if lo > 0 else 0.0)

    one_sided = reach < 0.25 * (full.size - 1) / 2 or full.size < 5
    sizes = np.unique(np.linspace(2, max(reach, 2), 40).astype(int)) if not one_sided else \
        np.unique(np.linspace(2, full.size, 40).astype(int))
    sums = np.array([sym_sum(m) for m in sizes])
    tail = sums[len(sums) // 2:]
    # partial sums of a divergent series drift like log N; a Cauchy sequence settles
    drift = float(np.abs(tail[-1] - tail[0])) if tail.size else 0.0
    logs = np.log(sizes[len(sizes) // 2:].astype(float))
    slope = float(np.polyfit(logs, tail, 1)[0]) if tail.size >= 3 and np.ptp(logs) > 0 else 0.0
    balanced = bool(not one_sided and (drift <= tol * (1 + abs(sums[-1])) or abs(slope) < 0.05))
    return {
        "sizes": sizes.tolist(),
        "partial_sums": sums.tolist(),
        "drift": drift,
        "log_slope": slope,
        "one_sided": bool(one_sided),
        "balanced": balanced,
    }


def leven_verify(mu_plus: SpectralMeasure, mu_minus: SpectralMeasure, gam: CharacteristicData,
                 window: int | None = None) -> dict:
    """Relative defect of ``alpha_n beta_n = gamma_n^2`` for n >= 1.

    The point 0 is reported separately: there the product of the masses is
    ``pi^2 c(1) u'(1) / u(1)^2``, which differs from ``gamma_0^2`` unless the
    potential is even.
    """
    lp, lm = mu_plus.lam, mu_minus.lam
    n = min(lp.size, lm.size, gam.lam.size)
    if window is not None:
        n = min(n, window)
    if n == 0 or not np.allclose(lp[:n], lm[:n], rtol=1e-10, atol=1e-10) or \
            not np.allclose(lp[:n], gam.lam[:n], rtol=1e-8, atol=1e-8):
        raise PreconditionError("measures and characteristic data must share the support")
    a = mu_plus.alpha[: n + 1]
    b = mu_minus.alpha[: n + 1]
    g = gam.gamma[: n + 1]
    rel = np.abs(a * b - g * g) / (g * g)
    return {
        "max_rel_error": float(rel[1:].max()),
        "rel_error": rel[1:].tolist(),
        "rel_error_at_zero": float(rel[0]),
        "asymmetry": float(np.max(np.abs(a[1:] - b[1:]) / g[1:])),
        "window": int(n),
    }


def _upper_density(points: np.ndarray) -> float:
    pts = np.sort(np.abs(points))
    if pts.size < 4:
        return 0.0
    counts = np.arange(1, pts.size + 1)
    tail = slice(pts.size // 2, None)
    return float(np.max(counts[tail] / (2.0 * pts[tail])))


def polynomial_density_criterion(mu: DiscreteMeasure, sub, density_cap: float = 0.05) -> dict:
    """Test ``exp(p_n) = O(mu({l_n}))`` along a zero-density subsequence.

    ``sub`` indexes atoms of ``mu`` on the positive side.  ``p_n`` comes from
    :func:`characteristic_sequence` applied to the positive support, so the
    principal values are extrapolated rather than cut at the data edge.  The
    verdict is 'consistent-with-incompleteness' when ``exp(p_n)/mu({l_n})``
    stays bounded, 'inconsistent' when it grows steadily and
    'indeterminate-at-this-scale' otherwise.
    """
    sub = np.asarray(sub, dtype=int)
    support = mu.support
    if sub.size < 4 or np.any(sub < 0) or np.any(sub >= support.size):
        raise PreconditionError("subsequence must index at least 4 atoms of the support")
    centre = int(np.argmin(np.abs(support)))
    n = sub - centre
    if np.any(n < 1):
        raise PreconditionError("subsequence must lie on the positive side of the support")
    dens = _upper_density(support[sub])
    if dens > density_cap:
        raise PreconditionError(f"subsequence density {dens:.3g} exceeds {density_cap}: not zero density")
    pos = support[centre + 1:] if support[centre] == 0 else support[support > 0]
    char = characteristic_sequence(pos, int(n.max()))
    p = char.p[n]
    masses = np.abs(mu.masses[sub])
    ok = np.isfinite(p) & (masses > 0)
    log_ratio = p[ok] - np.log(masses[ok])
    idx = np.arange(log_ratio.size, dtype=float)
    slope = float(np.polyfit(idx, log_ratio, 1)[0]) if log_ratio.size >= 3 else float("nan")
    rise = float(log_ratio[-1] - log_ratio[0]) if log_ratio.size else float("nan")
    if np.isfinite(slope) and slope > 0.1 and rise > np.log(50.0):
        verdict = "inconsistent"
    elif np.isfinite(slope) and abs(rise) < np.log(10.0) and slope < 0.05:
        verdict = "consistent-with-incompleteness"
    else:
        verdict = "indeterminate-at-this-scale"
    return {
        "verdict": verdict,
        "log_ratio": log_ratio.tolist(),
        "trend_slope": slope,
        "rise": rise,
        "sup_ratio": float(np.exp(np.max(log_ratio))) if log_ratio.size else float("nan"),
        "subsequence_density": dens,
        "balanced": char.diagnostics["balance"]["balanced"],
    }
