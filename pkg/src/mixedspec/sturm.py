"""Direct solver for -u'' + q u = z^2 u on the unit interval.

Conventions
-----------
* ``u_z`` is the Dirichlet solution at the left end, ``u(0)=0, u'(0)=1``;
  ``c_z`` is the Neumann solution, ``c(0)=1, c'(0)=0``.
* ``F(z) = z u_z(1)`` vanishes on the symmetric Dirichlet spectrum.
* ``m_+(z) = -u'_z(1) / (z u_z(1))`` and ``m_-(z) = -c_z(1) / (z u_z(1))``;
  both map the upper half-plane to itself and equal ``-cot z`` for q = 0.
* Masses are measured in units where the free operator has mass pi at every
  point of pi*Z.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ._propagate import propagate
from .errors import BracketError, IntegrationError, NearSingularError, PositivityError
from .herglotz import SpectralMeasure

__all__ = [
    "BoundaryPair",
    "Potential",
    "TransferMatrix",
    "SpectralSequence",
    "HermiteBiehlerSample",
    "transfer_matrix",
    "eigenvalues",
    "weyl_m",
    "norming_masses",
    "hermite_biehler",
    "reflect_potential",
    "shoot",
]

MIN_GRID = 16
BISECTION_WIDTH = 1e-12


class BoundaryPair(str, enum.Enum):
    """Left and right boundary conditions (D: value zero, N: derivative zero)."""

    DD = "DD"
    DN = "DN"
    ND = "ND"
    NN = "NN"

    @property
    def left(self) -> str:
        return self.value[0]

    @property
    def right(self) -> str:
        return self.value[1]


@dataclass(frozen=True, eq=False)
class Potential:
    """Real potential sampled on a uniform grid of [0, 1].

    Values between nodes are obtained by linear interpolation.
    """

    samples: np.ndarray
    closed_form: str | None = None

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < MIN_GRID:
            raise ValueError(f"potential needs at least {MIN_GRID} samples, got {samples.size}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("potential samples must be finite")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], grid_n: int = 257,
                      closed_form: str | None = None) -> "Potential":
        x = np.linspace(0.0, 1.0, grid_n)
        return cls(np.broadcast_to(np.asarray(func(x), dtype=float), x.shape).copy(), closed_form)

    @classmethod
    def zero(cls, grid_n: int = 257) -> "Potential":
        return cls(np.zeros(grid_n), "0")

    @property
    def grid_n(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_n)

    @property
    def dx(self) -> float:
        return 1.0 / (self.grid_n - 1)

    def __call__(self, x):
        return np.interp(x, self.x, self.samples)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.trapezoid(self.samples**2, self.x)))

    def __add__(self, other):
        if isinstance(other, Potential):
            if other.grid_n != self.grid_n:
                raise ValueError("grid mismatch")
            return Potential(self.samples + other.samples)
        return Potential(self.samples + float(other))

    def __repr__(self):
        tag = f", closed_form={self.closed_form!r}" if self.closed_form else ""
        return f"Potential(grid_n={self.grid_n}{tag})"


class TransferMatrix(NamedTuple):
    """Columns are the Dirichlet and Neumann solutions started at ``a``.

    ``matrix = [[u(b), c(b)], [u'(b), c'(b)]]``; its determinant is -1.
    """

    matrix: np.ndarray
    a: float
    b: float
    z: complex

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))


@dataclass(frozen=True, eq=False)
class SpectralSequence:
    """Positive branch of a square-root transformed spectrum.

    The negative branch is implied by symmetry; Dirichlet-Dirichlet sequences
    carry the adjoined point 0 (``has_zero``).
    """

    positive: np.ndarray
    has_zero: bool = False
    bc: BoundaryPair | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pos = np.array(self.positive, dtype=float)
        if pos.ndim != 1 or pos.size == 0:
            raise ValueError("sequence must be a non-empty 1-d array")
        if np.any(np.diff(pos) <= 0):
            raise ValueError("sequence must be strictly increasing")
        if pos[0] <= 0:
            raise ValueError("positive branch must be positive")
        pos.setflags(write=False)
        object.__setattr__(self, "positive", pos)

    def __len__(self):
        return self.positive.size

    def symmetric(self) -> np.ndarray:
        """Full sorted sequence ``-l_N < ... < (0) < ... < l_N``."""
        mid = [0.0] if self.has_zero else []
        return np.concatenate([-self.positive[::-1], mid, self.positive])

    def residuals(self) -> np.ndarray:
        """``n (l_n - free_n)`` with the free reference of the boundary pair."""
        n = np.arange(1, len(self) + 1)
        shift = 0.5 if (self.bc in (BoundaryPair.DN, BoundaryPair.ND)) else 0.0
        return n * (self.positive - np.pi * (n - shift))

    def truncated(self, count: int) -> "SpectralSequence":
        return SpectralSequence(self.positive[:count], self.has_zero, self.bc, dict(self.meta))


class HermiteBiehlerSample(NamedTuple):
    """``E = A + iB`` with ``A(z) = z u_z(1)`` and ``B(z) = u'_z(1)`` sampled at ``zs``."""

    zs: np.ndarray
    E: np.ndarray
    A: np.ndarray
    B: np.ndarray
    report: dict


def _step_size(q: Potential, zmax: float) -> float:
    qmax = float(np.max(np.abs(q.samples)))
    return min(q.dx / 4.0, 1.0 / (1.0 + np.sqrt(zmax**2 + qmax)))


def _midpoints(q: Potential, a: float, b: float, zmax: float):
    length = b - a
    nsteps = max(1, int(np.ceil(length / _step_size(q, zmax))))
    h = length / nsteps
    mids = a + h * (np.arange(nsteps) + 0.5)
    return q(mids), h


def shoot(q: Potential, zs, a: float = 0.0, b: float = 1.0, deriv: bool = False):
    """Integrate both columns from ``a`` to ``b`` for every ``z`` in ``zs``.

    Returns ``(values, crossings)``; ``values[:, k]`` are u, u', c, c', du/dz, du'/dz
    at ``b`` and ``crossings`` counts sign changes of u and c on the step nodes.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    zmax = float(np.max(np.abs(zs))) if zs.size else 0.0
    if b == a:
        vals = np.zeros((zs.size, 6), dtype=complex)
        vals[:, 1] = 1.0
        vals[:, 2] = 1.0
        return vals, np.zeros((zs.size, 2), dtype=np.int64)
    qmid, h = _midpoints(q, a, b, zmax)
    vals, crossings = propagate(qmid, h, zs * zs, deriv)
    if not np.all(np.isfinite(vals)):
        bad = zs[~np.all(np.isfinite(vals), axis=1)]
        raise IntegrationError(
            f"non-finite solution values at z={bad[:3]} (steps={qmid.size}, h={h:.3e})"
        )
    if deriv:
        # chain rule d/dz = 2z d/dE
        vals[:, 4] *= 2.0 * zs
        vals[:, 5] *= 2.0 * zs
    return vals, crossings


def transfer_matrix(q: Potential, a: float, b: float, z: complex) -> TransferMatrix:
    if not 0.0 <= a <= b <= 1.0:
        raise ValueError("need 0 <= a <= b <= 1")
    if not np.isfinite(z):
        raise ValueError("z must be finite")
    vals, _ = shoot(q, [z], a, b)
    u, up, c, cp = vals[0, :4]
    return TransferMatrix(np.array([[u, c], [up, cp]]), a, b, complex(z))


def _prufer_angle(w, wp, crossings):
    """Continuous Prüfer angle atan2(w, w') at the right end."""
    sign = np.where(crossings % 2 == 0, 1.0, -1.0)
    phase = np.arctan2(sign * w, sign * wp)
    phase = np.where(phase <= 0.0, phase + np.pi, phase)
    return crossings * np.pi + phase


def _prufer(q: Potential, zs, column: int, zmax: float):
    qmid, h = _midpoints(q, 0.0, 1.0, zmax)
    E = np.asarray(zs, dtype=complex) ** 2
    vals, crossings = propagate(qmid, h, E, False)
    if not np.all(np.isfinite(vals)):
        raise IntegrationError("non-finite values during eigenvalue bracketing")
    w = vals[:, 2 * column].real
    wp = vals[:, 2 * column + 1].real
    return _prufer_angle(w, wp, crossings[:, column])


def _free_energy(bc: BoundaryPair, n: np.ndarray) -> np.ndarray:
    shift = {"DD": 0.0, "DN": 0.5, "ND": 0.5, "NN": 1.0}[bc.value]
    return (np.pi * (n - shift)) ** 2


def eigenvalues(q: Potential, bc: BoundaryPair | str, count: int) -> SpectralSequence:
    """First ``count`` positive square-root eigenvalues for the boundary pair.

    Each root is bracketed by min-max bounds, certified by the Prüfer angle and
    refined by bisection to width 1e-12.
    """
    bc = BoundaryPair(bc)
    if count < 1:
        raise ValueError("count must be >= 1")
    n = np.arange(1, count + 1)
    target = n * np.pi if bc.right == "D" else (n - 0.5) * np.pi
    column = 0 if bc.left == "D" else 1
    efree = _free_energy(bc, n)
    e_lo = efree + q.samples.min()
    e_hi = efree + q.samples.max()
    pad = 1e-9 * (1.0 + np.abs(e_hi))
    lo = np.sqrt(np.maximum(e_lo - pad, 0.0))
    hi = np.sqrt(np.maximum(e_hi + pad, 0.0))
    zmax = float(hi.max()) + 1.0

    theta_lo = _prufer(q, lo, column, zmax)
    theta_hi = _prufer(q, hi, column, zmax)
    if np.any(theta_lo >= target):
        first = int(n[np.argmax(theta_lo >= target)])
        if lo[first - 1] == 0.0:
            raise PositivityError(f"{bc.value} eigenvalue #{first} is not positive")
        raise BracketError(f"lower bracket failed for {bc.value} eigenvalue #{first}")
    if np.any(theta_hi < target):
        first = int(n[np.argmax(theta_hi < target)])
        raise BracketError(f"upper bracket failed for {bc.value} eigenvalue #{first}; grid too coarse?")

    for _ in range(200):
        width = hi - lo
        if np.all(width <= BISECTION_WIDTH):
            break
        mid = 0.5 * (lo + hi)
        theta = _prufer(q, mid, column, zmax)
        above = theta >= target
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    roots = 0.5 * (lo + hi)
    if np.any(np.diff(roots) <= 0):
        raise BracketError("bisection produced non-increasing roots")
    meta = {"count": count, "bracket_width": float(np.max(hi - lo)), "grid_n": q.grid_n}
    return SpectralSequence(roots, has_zero=(bc == BoundaryPair.DD), bc=bc, meta=meta)


def weyl_m(q: Potential, side: str, z, threshold: float = 1e-12):
    """Weyl function ``m_+`` (side='right') or ``m_-`` (side='left')."""
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    zs = np.atleast_1d(np.asarray(z, dtype=complex))
    vals, _ = shoot(q, zs)
    u, up, c = vals[:, 0], vals[:, 1], vals[:, 2]
    denom = zs * u
    scale = np.abs(zs) * np.maximum(np.abs(up), np.abs(c)) / (1.0 + np.abs(zs))
    if np.any(np.abs(denom) <= threshold * np.maximum(scale, 1e-300)):
        raise NearSingularError(f"evaluation too close to a pole of m_{'+' if side == 'right' else '-'}")
    num = -up if side == "right" else -c
    out = num / denom
    return out[0] if np.ndim(z) == 0 else out


def norming_masses(q: Potential, seq: SpectralSequence, side: str = "right",
                   threshold: float = 1e-10) -> SpectralMeasure:
    """Point masses of ``mu_+`` (side='right') or ``mu_-`` (side='left') on the Dirichlet spectrum.

    Uses ``alpha_n = pi u'(1) / F'(l_n)`` and ``beta_n = pi c(1) / F'(l_n)`` with
    ``F'`` from the variational equation, and the pole at zero for n = 0.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if seq.bc not in (None, BoundaryPair.DD):
        raise ValueError("masses live on the Dirichlet-Dirichlet spectrum")
    lam = seq.positive
    vals, _ = shoot(q, lam, deriv=True)
    u, up, c, du = vals[:, 0].real, vals[:, 1].real, vals[:, 2].real, vals[:, 4].real
    fdot = u + lam * du
    if np.any(np.abs(fdot) < threshold):
        raise BracketError("F'(l_n) below threshold: defective root")
    num = up if side == "right" else c
    masses = np.pi * num / fdot

    v0, _ = shoot(q, [0.0])
    u0, up0, c0 = v0[0, 0].real, v0[0, 1].real, v0[0, 2].real
    if abs(u0) < threshold:
        raise PositivityError("0 is a Dirichlet eigenvalue")
    m0 = np.pi * (up0 if side == "right" else c0) / u0
    all_masses = np.concatenate([[m0], masses])
    if np.any(all_masses <= 0):
        bad = int(np.argmax(all_masses <= 0))
        raise PositivityError(f"nonpositive mass at n={bad}")
    return SpectralMeasure.from_positive(lam, all_masses, meta={"side": side, "source": "solver"})


def hermite_biehler(q: Potential, zs) -> HermiteBiehlerSample:
    """Sample ``E(z) = z u_z(1) + i u'_z(1)`` and validate its structure.

    The report checks interlacing of the real zeros of A and B on the window
    ``[0, max Re zs]`` and the l^2 size of ``n A(pi n)`` and ``n B(pi(n-1/2))``.
    """
    zs = np.atleast_1d(np.asarray(zs, dtype=complex))
    vals, _ = shoot(q, zs)
    a_vals = zs * vals[:, 0]
    b_vals = vals[:, 1]
    e_vals = a_vals + 1j * b_vals

    zmax = max(float(np.max(np.abs(zs.real))), np.pi)
    count = max(1, int(zmax / np.pi))
    try:
        zeros_a = eigenvalues(q, BoundaryPair.DD, count).positive
        zeros_b = eigenvalues(q, BoundaryPair.DN, count).positive
        interlace = bool(np.all(zeros_b < zeros_a) and np.all(zeros_a[:-1] < zeros_b[1:]))
    except (PositivityError, BracketError):
        zeros_a = zeros_b = np.array([])
        interlace = False

    n = np.arange(1, count + 1)
    grid = np.concatenate([np.pi * n, np.pi * (n - 0.5)])
    gv, _ = shoot(q, grid)
    res_a = n * (np.pi * n * gv[:count, 0].real - np.sin(np.pi * n))
    res_b = n * (gv[count:, 1].real - np.cos(np.pi * (n - 0.5)))
    sums_a = np.cumsum(res_a**2)
    sums_b = np.cumsum(res_b**2)
    report = {
        "interlacing": interlace,
        "zeros_A": zeros_a.tolist(),
        "zeros_B": zeros_b.tolist(),
        "residual_A": res_a.tolist(),
        "residual_B": res_b.tolist(),
        "l2_partial_A": sums_a.tolist(),
        "l2_partial_B": sums_b.tolist(),
        "bounded_A": bool(sums_a[-1] <= 10 * max(sums_a[0], 1e-300)),
        "bounded_B": bool(sums_b[-1] <= 10 * max(sums_b[0], 1e-300)),
    }
    return HermiteBiehlerSample(zs, e_vals, a_vals, b_vals, report)


def reflect_potential(q: Potential) -> Potential:
    """``x -> q(1 - x)`` on the same grid."""
    tag = f"reflect({q.closed_form})" if q.closed_form else None
    return Potential(q.samples[::-1].copy(), tag)
