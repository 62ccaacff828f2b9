"""Isometric embedding of M into Minkowski space L^(n+1).

With eta(x) = integral_1^x dr / sqrt(f(r)), the map

    Phi(x_1, ..., x_n) = (eta(x_1), ..., eta(x_n), eta(t)),   t = sum x_i,

is an isometric embedding of M into flat space with line element
dy_1^2 + ... + dy_n^2 - dy_{n+1}^2.  The image is the graph
y_{n+1} = eta(xi(y_1) + ... + xi(y_n)) where xi is the inverse of eta.
Minkowski vectors are plain length-(n+1) arrays under that fixed
signature; :func:`minkowski_inner` implements the product.

eta is computed by Gauss-Legendre panels over a cached log-spaced
checkpoint table (built once per MetricFunction, read-only afterward)
and xi by bracketed Newton iteration with the exact derivative
xi'(y) = sqrt(f(xi(y))).
"""

import math
import threading
import weakref
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .families import superadditive_gap
from .geometry import _vector_at, as_point

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)

# Tolerance for the graph relation on embedded points; a violation means
# upstream drift, not roundoff, and fails fast.
GRAPH_TOL = 1e-6


class _EtaTable:
    """Antiderivative of 1/sqrt(f) with checkpoints at log-spaced arguments."""

    S_LO = -21.0
    S_HI = 21.0
    DS = 0.5

    def __init__(self, mf):
        self.mf = mf
        self.s_grid = np.arange(self.S_LO, self.S_HI + 0.5 * self.DS, self.DS)
        k0 = int(np.argmin(np.abs(self.s_grid)))  # s = 0, i.e. x = 1
        panels = np.array(
            [self._panel(a, b) for a, b in zip(self.s_grid[:-1], self.s_grid[1:])]
        )
        vals = np.empty_like(self.s_grid)
        vals[k0] = 0.0
        vals[k0 + 1 :] = np.cumsum(panels[k0:])
        vals[:k0] = -np.cumsum(panels[:k0][::-1])[::-1]
        self.vals = vals

    def _panel(self, a, b):
        """Integral of exp(s)/sqrt(f(exp(s))) over [a, b] in log space."""
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        s = mid + half * _GL_NODES
        r = np.exp(s)
        return half * float(_GL_WEIGHTS @ (r / np.sqrt(self.mf.f(r))))

    def eta(self, x):
        s = math.log(x)
        if s < self.S_LO:
            total = self.vals[0]
            hi = self.S_LO
            while hi - s > self.DS:
                total -= self._panel(hi - self.DS, hi)
                hi -= self.DS
            return total - self._panel(s, hi)
        if s > self.S_HI:
            total = self.vals[-1]
            lo = self.S_HI
            while s - lo > self.DS:
                total += self._panel(lo, lo + self.DS)
                lo += self.DS
            return total + self._panel(lo, s)
        k = min(int((s - self.S_LO) / self.DS), self.s_grid.size - 2)
        return self.vals[k] + self._panel(self.s_grid[k], s)

    def _bracket(self, y):
        """Return (lo, hi) in x with eta(lo) <= y <= eta(hi)."""
        if y < self.vals[0]:
            hi_s, val = self.S_LO, self.vals[0]
            while val > y:
                val -= self._panel(hi_s - self.DS, hi_s)
                hi_s -= self.DS
            return math.exp(hi_s), math.exp(hi_s + self.DS)
        if y > self.vals[-1]:
            lo_s, val = self.S_HI, self.vals[-1]
            while val < y:
                val += self._panel(lo_s, lo_s + self.DS)
                lo_s += self.DS
            return math.exp(lo_s - self.DS), math.exp(lo_s)
        k = int(np.searchsorted(self.vals, y))
        k = min(max(k, 1), self.vals.size - 1)
        return math.exp(self.s_grid[k - 1]), math.exp(self.s_grid[k])

    def xi(self, y):
        if y == 0.0:
            return 1.0
        lo, hi = self._bracket(y)
        x = math.sqrt(lo * hi)
        for _ in range(200):
            r = self.eta(x) - y
            if abs(r) <= 1e-13 * max(1.0, abs(y)):
                return x
            if r < 0.0:
                lo = x
            else:
                hi = x
            x_new = x - r * math.sqrt(self.mf.f(x))
            if not lo < x_new < hi:
                x_new = math.sqrt(lo * hi)
            if hi - lo <= 1e-15 * lo:
                return x_new
            x = x_new
        return x


_tables = weakref.WeakKeyDictionary()
_tables_lock = threading.Lock()


def _table(mf):
    tab = _tables.get(mf)
    if tab is None:
        with _tables_lock:
            tab = _tables.get(mf)
            if tab is None:
                tab = _EtaTable(mf)
                _tables[mf] = tab
    return tab


def eta(mf, x):
    """eta(x) = integral_1^x dr/sqrt(f(r)); strictly increasing, eta(1) = 0."""
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError("eta requires finite x > 0")
    return _table(mf).eta(x)


def xi(mf, y):
    """Inverse of eta; defined for every real y since eta is onto R."""
    y = float(y)
    if not math.isfinite(y):
        raise ValueError("xi requires finite y")
    return _table(mf).xi(y)


def minkowski_inner(a, b):
    """Product under the signature (+, ..., +, -) on the last component."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(a[:-1] @ b[:-1] - a[-1] * b[-1])


def embed(mf, p):
    """Map p to its embedded coordinates (eta(x_1), ..., eta(x_n), eta(t))."""
    x = as_point(p)
    tab = _table(mf)
    y = np.empty(x.size + 1)
    y[:-1] = [tab.eta(xi_) for xi_ in x]
    y[-1] = tab.eta(float(np.sum(x)))
    return y


def unembed(mf, e):
    """Recover the point from embedded coordinates, checking the graph relation."""
    y = np.asarray(e, dtype=np.float64)
    if y.ndim != 1 or y.size < 3:
        raise ValueError(f"embedded points have n+1 >= 3 components, got shape {y.shape}")
    if not np.isfinite(y).all():
        raise ValueError("embedded coordinates must be finite")
    tab = _table(mf)
    x = np.array([tab.xi(yi) for yi in y[:-1]])
    resid = abs(tab.eta(float(np.sum(x))) - y[-1])
    if resid > GRAPH_TOL:
        raise ConsistencyError(
            f"graph relation violated by {resid:.3e} (tolerance {GRAPH_TOL:g})"
        )
    return x


def pushforward(mf, p, u):
    """Differential of the embedding applied to an intrinsic tangent u."""
    x = as_point(p)
    u = _vector_at(u, x)
    y = np.empty(x.size + 1)
    y[:-1] = u / np.sqrt(mf.f(x))
    y[-1] = np.sum(u) / math.sqrt(mf.f(np.sum(x)))
    return y


def tangent_basis(mf, p):
    """Rows e_i = (unit_i, sqrt(f(x_i)/f(t))) spanning the tangent space.

    Returns an (n, n+1) array; row i has i-th component 1, last component
    W_i = sqrt(f(x_i)/f(t)), zeros elsewhere.  The Minkowski Gram matrix
    of the rows is I - W W^T.
    """
    x = as_point(p)
    n = x.size
    basis = np.zeros((n, n + 1))
    basis[:, :n] = np.eye(n)
    basis[:, n] = np.sqrt(mf.f(x) / mf.f(np.sum(x)))
    return basis


def normal(mf, p):
    """Timelike normal N = (W_1, ..., W_n, 1) to the embedded image at p."""
    x = as_point(p)
    nv = np.empty(x.size + 1)
    nv[:-1] = np.sqrt(mf.f(x) / mf.f(np.sum(x)))
    nv[-1] = 1.0
    return nv


@dataclass(frozen=True)
class ShapeOperator:
    """Shape operator data at a point.

    ``matrix`` holds <Sigma(e_i), e_j> = -k/2 (D - c V V^T) with
    d_i = f'(x_i), v_i = sqrt(f(x_i)), k = 1/sqrt(f(t) - sum f(x_l)),
    c = f'(t)/f(t).  The positive-spectrum convention used for principal
    curvatures drops the leading -1/2, i.e. works with k (D - c V V^T);
    curvature through the Gauss equation is convention-independent.
    """

    matrix: np.ndarray
    d: np.ndarray
    v: np.ndarray
    k: float
    c: float


def shape_operator(mf, p):
    """Assemble the shape operator and its rank-one decomposition at p."""
    x = as_point(p)
    t = float(np.sum(x))
    fx = mf.f(x)
    d = mf.df(x)
    v = np.sqrt(fx)
    k = 1.0 / math.sqrt(superadditive_gap(mf, x))
    c = mf.df(t) / mf.f(t)
    matrix = -0.5 * k * (np.diag(d) - c * np.outer(v, v))
    return ShapeOperator(matrix, d, v, k, c)


def check_rank_one_update_positive(A, V, c):
    """Whether A - c V V^T stays positive-definite, via c V^T A^-1 V < 1.

    Parameters
    ----------
    A : ndarray
        Symmetric positive-definite matrix.
    V : ndarray
    c : float
        Positive rank-one weight.

    Returns
    -------
    bool
        True iff c V^T A^-1 V < 1, which is equivalent to positive
        definiteness of the downdated matrix.
    """
    A = np.asarray(A, dtype=np.float64)
    V = np.asarray(V, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or V.shape != (A.shape[0],):
        raise ValueError("A must be square and V a matching vector")
    if not np.allclose(A, A.T, rtol=1e-12, atol=1e-12):
        raise ValueError("A must be symmetric")
    if not c > 0.0:
        raise ValueError("c must be positive")
    try:
        np.linalg.cholesky(A)
    except np.linalg.LinAlgError:
        raise ValueError("A must be positive-definite") from None
    return bool(c * float(V @ np.linalg.solve(A, V)) < 1.0)
