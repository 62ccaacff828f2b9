"""Intrinsic Riemannian data of the open quadrant M = (R+*)^n.

For a metric-generating function f the metric at x = (x_1, ..., x_n) is

    g_ij(x) = delta_ij / f(x_i) - 1 / f(t),      t = x_1 + ... + x_n,

which for f = 1/psi' is the Fisher-Rao metric of the Dirichlet family.
The inverse has the closed Sherman-Morrison form and the Christoffel
symbols reduce to one formula in f and g = f'/f.

Points are plain 1-D float arrays with strictly positive entries and
n >= 2; ``t`` is always recomputed from the coordinates, never cached.
All operations accept any x > 0 but lose precision when min(x_i) drops
below about 1e-8; nothing is clamped, since clamping would silently
change the geometry.
"""

import math
from dataclasses import dataclass

import numpy as np

from .families import f_difference, superadditive_gap


def as_point(p):
    """Validate and return p as a float array (n >= 2, all entries > 0)."""
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 2:
        raise ValueError(f"a point must be a 1-D vector with n >= 2, got shape {arr.shape}")
    if not np.isfinite(arr).all() or (arr <= 0.0).any():
        raise ValueError("point coordinates must be finite and strictly positive")
    return arr


@dataclass(frozen=True, eq=False)
class Tangent:
    """A tangent vector with its base point.

    Fields
    ------
    components : ndarray
    base : ndarray
        Point the vector is attached to; dimensions must match.
    """

    components: np.ndarray
    base: np.ndarray

    def __post_init__(self):
        comp = np.asarray(self.components, dtype=np.float64)
        base = as_point(self.base)
        if comp.shape != base.shape:
            raise ValueError(
                f"tangent dimension {comp.shape} does not match base {base.shape}"
            )
        if not np.isfinite(comp).all():
            raise ValueError("tangent components must be finite")
        object.__setattr__(self, "components", comp)
        object.__setattr__(self, "base", base)


def _vector_at(u, p):
    """Extract components from a Tangent (checking its base is p) or array."""
    if isinstance(u, Tangent):
        if not np.array_equal(u.base, p):
            raise ValueError("tangent is based at a different point")
        return u.components
    arr = np.asarray(u, dtype=np.float64)
    if arr.shape != p.shape:
        raise ValueError(f"vector shape {arr.shape} does not match point {p.shape}")
    return arr


def _remainders(x):
    """sum of the other coordinates, per coordinate; exact for the largest.

    total - x_i is accurate enough except at the dominant coordinate,
    where the subtraction would return rounding of the total instead of
    the small remainder.
    """
    rests = np.sum(x) - x
    m = int(np.argmax(x))
    rests[m] = float(np.sum(np.delete(x, m)))
    return rests


def metric(mf, p):
    """Metric matrix g_ij = delta_ij / f(x_i) - 1 / f(t) at p.

    The diagonal is evaluated as (f(t) - f(x_i)) / (f(x_i) f(t)) with a
    stable difference, so it stays accurate when one coordinate carries
    nearly all of t.
    """
    x = as_point(p)
    fx = mf.f(x)
    ft = mf.f(np.sum(x))
    g = np.full((x.size, x.size), -1.0 / ft)
    np.fill_diagonal(g, f_difference(mf, x, _remainders(x)) / (fx * ft))
    return g


def metric_inverse(mf, p):
    """Closed-form inverse of :func:`metric` via a rank-one update.

    Returns diag(f(x_1), ..., f(x_n)) + f(x_i) f(x_j) / (f(t) - sum f(x_l)).
    """
    x = as_point(p)
    fx = mf.f(x)
    return np.diag(fx) + np.outer(fx, fx) / superadditive_gap(mf, x)


def christoffel(mf, p):
    """Christoffel symbols Gamma^k_ij of the metric at p.

    With g(x) = f'(x)/f(x) and the superadditivity gap
    Delta = f(t) - sum_l f(x_l),

        Gamma^k_ij = 1/2 [ f(x_k)/Delta * (g(t) - g(x_j) delta_ij)
                           - g(x_k) delta_ij delta_jk ].

    Returns
    -------
    ndarray of shape (n, n, n)
        Indexed as gamma[k, i, j]; symmetric in (i, j).
    """
    x = as_point(p)
    n = x.size
    t = np.sum(x)
    fx = mf.f(x)
    gx = mf.df(x) / fx
    ft = mf.f(t)
    gt = mf.df(t) / ft
    gap = superadditive_gap(mf, x)

    gamma = np.empty((n, n, n))
    gamma[...] = 0.5 * gt / gap * fx[:, None, None]
    diag = np.arange(n)
    # i = j contributions.
    gamma[:, diag, diag] -= 0.5 / gap * np.outer(fx, gx)
    # i = j = k contribution.
    gamma[diag, diag, diag] -= 0.5 * gx
    return gamma


def inner(g, u, v):
    """Riemannian inner product u^T g v of two tangents at the same point."""
    if isinstance(u, Tangent) and isinstance(v, Tangent):
        if not np.array_equal(u.base, v.base):
            raise ValueError("tangents are based at different points")
    uc = u.components if isinstance(u, Tangent) else np.asarray(u, dtype=np.float64)
    vc = v.components if isinstance(v, Tangent) else np.asarray(v, dtype=np.float64)
    return float(uc @ g @ vc)


def norm(g, u):
    """Metric norm sqrt(inner(g, u, u)); clips the tiny negative roundoff."""
    return math.sqrt(max(inner(g, u, u), 0.0))


def dirichlet_pdf(p, q):
    """Dirichlet density with parameters p, evaluated at q on the simplex.

        Gamma(sum x_i) / prod Gamma(x_i) * prod q_i^(x_i - 1)

    For n = 2 this is the beta density on [0, 1] evaluated at (q_1, q_2)
    = (s, 1-s).  Computed in the log domain so large parameters do not
    overflow.

    Parameters
    ----------
    p : array_like
        Positive Dirichlet parameters, n >= 2.
    q : array_like
        Simplex point: nonnegative entries summing to 1 within 1e-9.

    Returns
    -------
    float
        The density value.  A zero component of q with the matching
        parameter below 1 makes the density diverge there; this returns
        ``inf`` in that case (and 0.0 when the parameter exceeds 1).
    """
    x = as_point(p)
    qa = np.asarray(q, dtype=np.float64)
    if qa.shape != x.shape:
        raise ValueError(f"q has shape {qa.shape}, expected {x.shape}")
    if not np.isfinite(qa).all() or (qa < 0.0).any() or abs(qa.sum() - 1.0) > 1e-9:
        raise ValueError("q must have nonnegative entries summing to 1 (tol 1e-9)")

    zero = qa == 0.0
    if zero.any():
        xz = x[zero]
        if (xz < 1.0).any():
            return math.inf
        if (xz > 1.0).any():
            return 0.0
        # x_i = 1 contributes q_i^0 = 1; fall through with the rest.
    log_norm = math.lgamma(np.sum(x)) - sum(math.lgamma(xi) for xi in x)
    pos = ~zero
    return math.exp(log_norm + np.sum((x[pos] - 1.0) * np.log(qa[pos])))
