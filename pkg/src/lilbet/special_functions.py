"""Scalar special functions used by the betting bounds.

The potential ``f(eta) = -log(1 - |eta|) - |eta|`` on [-1, 1], its convex
conjugate ``f*(x) = |x| - log(1 + |x|)``, the function ``psi(x) = x - log(1+x)``
and its inverse via the lower branch of the Lambert W function.

All functions accept scalars or numpy arrays. Scalars in, floats out.
"""
from dataclasses import dataclass
import math

import numpy as np


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-12
    max_iter: int = 100

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_TOL = Tolerance()

INV_E = math.exp(-1.0)
_EPS4 = 4 * np.finfo(float).eps


def _out(x, scalar):
    return float(x) if scalar else x


# psi(x) = sum_{k>=2} (-1)^k x^k / k; 16 terms are exact to rounding for |x| < 0.1
_SERIES = np.array([(-1.0) ** k / k for k in range(17, 1, -1)])


def _psi(x):
    small = np.abs(x) < 0.1
    out = x - np.log1p(x)
    if small.any():
        xs = x[small]
        out[small] = np.polyval(_SERIES, xs) * xs * xs
    return out


def f(eta):
    """-log(1 - |eta|) - |eta|, +inf at |eta| = 1."""
    eta = np.asarray(eta, dtype=float)
    a = np.abs(eta)
    if np.any(a > 1):
        raise ValueError("f is defined on [-1, 1]")
    with np.errstate(divide="ignore"):
        out = -np.log1p(-a) - a
    return _out(out, eta.ndim == 0)


def f_conjugate(x):
    """Convex conjugate of `f`: |x| - log(1 + |x|), i.e. psi(|x|)."""
    x = np.asarray(x, dtype=float)
    return _out(_psi(np.abs(np.atleast_1d(x))).reshape(x.shape), x.ndim == 0)


def eta_star(x):
    """Maximizer of eta*x - f(eta), i.e. x / (|x| + 1)."""
    x = np.asarray(x, dtype=float)
    return _out(x / (np.abs(x) + 1.0), x.ndim == 0)


def psi(x):
    """x - log(1 + x) for x > -1."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= -1):
        raise ValueError("psi is defined for x > -1")
    return _out(_psi(np.atleast_1d(x)).reshape(x.shape), x.ndim == 0)


def _halley_offset(u, tol):
    """Solve psi(v) = u for v >= 0, elementwise.

    With w = -1 - v this is the logarithmic form w + log(-w) = log(-x) of
    w e^w = x, u = -1 - log(-x); the residual psi(v) - u is the relative
    residual of w e^w against x. Working in this form avoids underflow of
    e^w and lets callers that know u skip forming x.
    """
    pos = (u > 0) & np.isfinite(u)
    v = np.where(pos, np.sqrt(2.0 * u) + u, np.where(u > 0, np.inf, 0.0))
    active = pos.copy()
    for _ in range(tol.max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        va, ua = v[idx], u[idx]
        h = _psi(va) - ua
        d1 = va / (1.0 + va)
        d2 = (1.0 / (1.0 + va)) ** 2
        vn = va - 2.0 * h * d1 / (2.0 * d1 * d1 - h * d2)
        vn = np.where(vn > 0, vn, 0.5 * va)
        v[idx] = vn
        # second test: residual already at the rounding level of psi(v)
        converged = (np.abs(vn - va) <= tol.abs_tol * vn) | (np.abs(h) <= _EPS4 * va)
        active[idx[converged]] = False
    else:
        if active.any():
            raise ConvergenceError(f"Lambert W_-1 did not converge in {tol.max_iter} iterations")
    # final Newton step: cubic convergence above leaves only rounding here
    vp = v[pos]
    v[pos] = vp - (_psi(vp) - u[pos]) * (1.0 + vp) / vp
    return v


def lambert_w_minus1(x, tol=DEFAULT_TOL):
    """Lower real branch of Lambert W on (-1/e, 0).

    Returns w <= -1 with w * exp(w) = x. Halley iteration on the
    logarithmic form of the equation, seeded with ``-1 - sqrt(2u) - u``
    where ``u = -log(-e x)``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= -INV_E) or np.any(x >= 0) or np.any(np.isnan(x)):
        raise ValueError("lambert_w_minus1 is defined on (-1/e, 0)")
    u = np.maximum(-1.0 - np.log(-np.atleast_1d(x).ravel()), 0.0)
    w = -1.0 - _halley_offset(u, tol)
    return _out(w.reshape(x.shape), x.ndim == 0)


def psi_inv(y, tol=DEFAULT_TOL):
    """Inverse of `psi` on [0, inf), i.e. -W_{-1}(-exp(-y-1)) - 1.

    Evaluated through the same Halley iteration as `lambert_w_minus1`,
    fed with u = y directly so that neither -exp(-y-1) nor its rounding
    enters.
    """
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or np.any(np.isnan(y)):
        raise ValueError("psi_inv is defined for y >= 0")
    v = _halley_offset(np.atleast_1d(y).astype(float).ravel(), tol)
    return _out(v.reshape(y.shape), y.ndim == 0)


def psi_inv_upper_log(y):
    """Upper bound y + log(1 + y + sqrt(2y)) on `psi_inv`."""
    y = np.asarray(y, dtype=float)
    return _out(y + np.log1p(y + np.sqrt(2.0 * y)), y.ndim == 0)


def psi_inv_upper_simple(y):
    """Upper bound 2y + sqrt(2y) on `psi_inv`."""
    y = np.asarray(y, dtype=float)
    return _out(2.0 * y + np.sqrt(2.0 * y), y.ndim == 0)
