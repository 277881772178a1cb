"""Independent reference computations used to freeze and check values.

Nothing here calls the package: eigenvalues come from a finite-difference
matrix with Richardson extrapolation, norming masses from a high-order
Runge-Kutta integration of the eigenfunction and its norm.
"""
import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal


def fd_energies(q, bc, count, m):
    """Lowest ``count`` eigenvalues E = z^2 of a second-order difference scheme.

    Dirichlet at 1 uses nodes j h with h = 1/(m + 1); Neumann at 1 uses a
    half-shifted last cell, h = 1/(m + 1/2), with ghost value equal to the last node.
    """
    if bc == "DD":
        h = 1.0 / (m + 1)
    elif bc == "DN":
        h = 1.0 / (m + 0.5)
    else:
        raise ValueError(bc)
    x = h * np.arange(1, m + 1)
    diag = 2.0 / h**2 + q(x)
    if bc == "DN":
        diag[-1] = 1.0 / h**2 + q(x[-1])
    off = -np.ones(m - 1) / h**2
    return eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1), eigvals_only=True)


def fd_eigenvalues(q, bc, count, m=4000):
    """Square roots of Richardson-extrapolated energies (h^2 error term removed)."""
    coarse = fd_energies(q, bc, count, m)
    fine = fd_energies(q, bc, count, 2 * m + (1 if bc == "DD" else 0))
    return np.sqrt((4.0 * fine - coarse) / 3.0)


def dirichlet_solution(q, z, start="left"):
    """u(1), u'(1) and the squared norm of the solution with u(a)=0, u'(a)=1.

    With ``start='right'`` the solution starts at 1 (integrated backwards in
    the reflected variable).
    """
    qq = q if start == "left" else (lambda x: q(1.0 - x))

    def rhs(x, y):
        return [y[1], (qq(x) - z * z) * y[0], y[0] ** 2]

    sol = solve_ivp(rhs, (0.0, 1.0), [0.0, 1.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-14)
    return sol.y[:, -1]


def norm_masses(q, lams, side):
    """``pi / (2 l^2 ||u||^2)`` with u the Dirichlet solution started at the measure's end."""
    start = "left" if side == "left" else "right"
    out = []
    for lam in lams:
        _, _, nrm = dirichlet_solution(q, lam, start)
        out.append(np.pi / (2.0 * lam**2 * nrm))
    return np.array(out)
