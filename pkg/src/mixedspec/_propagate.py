"""Compiled kernels for piecewise-constant propagation of -w'' + q w = E w.

On every step the potential is frozen at its midpoint value and the exact
trigonometric propagator is applied, so the free and constant-potential
cases are integrated without discretisation error.
"""
import numpy as np
from numba import njit

_SERIES_CUTOFF = 0.5
_SERIES_TERMS = 12


@njit(cache=True)
def _step_coefficients(k2, h):
    """Return cos(kh), sin(kh)/k and their derivatives with respect to k^2."""
    x = k2 * h * h
    if abs(x) < _SERIES_CUTOFF:
        c = 0.0 + 0.0j
        s = 0.0 + 0.0j
        ds = 0.0 + 0.0j
        term = 1.0 + 0.0j  # (-x)^j
        prev = 0.0 + 0.0j  # (-x)^(j-1)
        fact_even = 1.0  # (2j)!
        fact_odd = 1.0  # (2j+1)!
        for j in range(_SERIES_TERMS):
            if j > 0:
                fact_even *= (2 * j - 1) * (2 * j)
                fact_odd *= (2 * j) * (2 * j + 1)
                ds -= j * prev / fact_odd
            c += term / fact_even
            s += term / fact_odd
            prev = term
            term *= -x
        s *= h
        ds *= h * h * h
        dc = -0.5 * h * s
        return c, s, dc, ds
    k = np.sqrt(k2)
    c = np.cos(k * h)
    s = np.sin(k * h) / k
    dc = -0.5 * h * s
    ds = (h * c - s) / (2.0 * k2)
    return c, s, dc, ds


@njit(cache=True)
def propagate(qmid, h, energies, deriv):
    """Propagate the Dirichlet and Neumann columns across all steps.

    Returns ``out`` of shape (n, 6) holding u, u', c, c', du/dE, du'/dE at the
    right end and ``crossings``, the number of sign changes of Re u on the
    step nodes for the two columns (meaningful for real energies).
    """
    n = energies.shape[0]
    nsteps = qmid.shape[0]
    out = np.zeros((n, 6), dtype=np.complex128)
    crossings = np.zeros((n, 2), dtype=np.int64)
    for i in range(n):
        E = energies[i]
        u = 0.0 + 0.0j
        up = 1.0 + 0.0j
        c = 1.0 + 0.0j
        cp = 0.0 + 0.0j
        du = 0.0 + 0.0j
        dup = 0.0 + 0.0j
        count = 0
        ccount = 0
        for m in range(nsteps):
            k2 = E - qmid[m]
            cs, sn, dcs, dsn = _step_coefficients(k2, h)
            a21 = -k2 * sn
            if deriv:
                da21 = -sn - k2 * dsn
                ndu = dcs * u + dsn * up + cs * du + sn * dup
                ndup = da21 * u + dcs * up + a21 * du + cs * dup
                du = ndu
                dup = ndup
            nu = cs * u + sn * up
            nup = a21 * u + cs * up
            if (nu.real > 0.0 and u.real < 0.0) or (nu.real < 0.0 and u.real > 0.0) or (
                nu.real == 0.0 and u.real != 0.0
            ):
                count += 1
            u = nu
            up = nup
            nc = cs * c + sn * cp
            ncp = a21 * c + cs * cp
            if (nc.real > 0.0 and c.real < 0.0) or (nc.real < 0.0 and c.real > 0.0) or (
                nc.real == 0.0 and c.real != 0.0
            ):
                ccount += 1
            c = nc
            cp = ncp
        out[i, 0] = u
        out[i, 1] = up
        out[i, 2] = c
        out[i, 3] = cp
        out[i, 4] = du
        out[i, 5] = dup
        crossings[i, 0] = count
        crossings[i, 1] = ccount
    return out, crossings
