"""Hot numeric kernels: tridiagonal solve and the theta-weighted diffusion step.

Two interchangeable backends:

  * a loop-fused kernel compiled with numba's @njit (default when numba
    imports cleanly), and
  * a pure-numpy fallback (vectorized right-hand side, Python-loop Thomas
    elimination).

Set ``FRONTLAB_DISABLE_NUMBA=1`` in the environment to force the fallback.
Both backends implement identical arithmetic in identical order, so results
agree to the last bit; ``benchmarks/bench_kernels.py`` compares their speed.

The linear system solved each step is (I - theta*mu*L) u_new = rhs with
mu = dt/dx**2 and L the 3-point Laplacian stencil, closed by a reflecting
(zero-flux) row on the left and a pinned Dirichlet row on the right.  The
matrix is strictly diagonally dominant for theta in [1/2, 1], so the Thomas
elimination never meets a zero pivot; the check is purely defensive.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED_BY_ENV = os.environ.get("FRONTLAB_DISABLE_NUMBA", "").strip().lower() in (
    "1", "true", "yes", "on")

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    numba = None
    HAVE_NUMBA = False

NUMBA_ENABLED = HAVE_NUMBA and not _DISABLED_BY_ENV


def _thomas_impl(lower, diag, upper, rhs):
    # Thomas elimination; lower/upper have length n-1.
    n = diag.shape[0]
    cp = np.empty(n, dtype=np.float64)
    dp = np.empty(n, dtype=np.float64)
    piv = diag[0]
    if piv == 0.0:
        raise ZeroDivisionError("zero pivot in tridiagonal solve")
    cp[0] = upper[0] / piv if n > 1 else 0.0
    dp[0] = rhs[0] / piv
    for i in range(1, n):
        piv = diag[i] - lower[i - 1] * cp[i - 1]
        if piv == 0.0:
            raise ZeroDivisionError("zero pivot in tridiagonal solve")
        cp[i] = upper[i] / piv if i < n - 1 else 0.0
        dp[i] = (rhs[i] - lower[i - 1] * dp[i - 1]) / piv
    x = np.empty(n, dtype=np.float64)
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


def _theta_step_fused_impl(u, f_u, mu, theta, right_value):
    # One IMEX step, fully fused: explicit reaction increment f_u (already
    # multiplied by dt), theta-implicit diffusion, reflecting left boundary,
    # pinned right boundary.  Row n-1 is the identity row u = right_value.
    n = u.shape[0]
    omt = (1.0 - theta) * mu
    tm = theta * mu
    b_in = 1.0 + 2.0 * tm
    cp = np.empty(n, dtype=np.float64)
    dp = np.empty(n, dtype=np.float64)

    # forward sweep, generating rhs entries on the fly
    rhs0 = u[0] + f_u[0] + omt * (2.0 * u[1] - 2.0 * u[0])
    cp[0] = -2.0 * tm / b_in
    dp[0] = rhs0 / b_in
    for i in range(1, n - 1):
        rhs_i = u[i] + f_u[i] + omt * (u[i - 1] - 2.0 * u[i] + u[i + 1])
        piv = b_in - (-tm) * cp[i - 1]
        if piv == 0.0:
            raise ZeroDivisionError("zero pivot in tridiagonal solve")
        cp[i] = -tm / piv
        dp[i] = (rhs_i - (-tm) * dp[i - 1]) / piv
    cp[n - 1] = 0.0
    dp[n - 1] = right_value  # identity row: pivot 1, no coupling

    out = np.empty(n, dtype=np.float64)
    out[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        out[i] = dp[i] - cp[i] * out[i + 1]
    return out


def _theta_step_numpy(u, f_u, mu, theta, right_value):
    # Fallback: vectorized rhs, loop Thomas.  Same arithmetic order as the
    # fused kernel so both backends agree bitwise.
    n = u.shape[0]
    omt = (1.0 - theta) * mu
    tm = theta * mu
    rhs = np.empty(n, dtype=np.float64)
    rhs[0] = u[0] + f_u[0] + omt * (2.0 * u[1] - 2.0 * u[0])
    rhs[1:-1] = u[1:-1] + f_u[1:-1] + omt * (u[:-2] - 2.0 * u[1:-1] + u[2:])
    rhs[-1] = right_value
    lower = np.full(n - 1, -tm)
    diag = np.full(n, 1.0 + 2.0 * tm)
    upper = np.full(n - 1, -tm)
    upper[0] = -2.0 * tm
    lower[-1] = 0.0
    diag[-1] = 1.0
    return _thomas_impl(lower, diag, upper, rhs)


# Backend wiring.  The fused step and the Thomas elimination are compiled
# when numba is both present and enabled; the plain-Python versions always
# remain importable for tests and benchmarks.
thomas_solve_python = _thomas_impl
theta_step_python = _theta_step_numpy

if HAVE_NUMBA:
    _njit = numba.njit(cache=True)
    thomas_solve_numba = _njit(_thomas_impl)
    theta_step_numba = _njit(_theta_step_fused_impl)
else:  # pragma: no cover - depends on environment
    thomas_solve_numba = None
    theta_step_numba = None

if NUMBA_ENABLED:
    thomas_solve = thomas_solve_numba
    theta_step = theta_step_numba
    BACKEND = "numba"
else:
    thomas_solve = thomas_solve_python
    theta_step = theta_step_python
    BACKEND = "numpy"
