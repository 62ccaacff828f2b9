"""Sectional curvature of M through the Gauss equation.

The embedded picture makes curvature algebraic: with the tangent-basis
Gram matrix G = I - W W^T and the shape operator matrix S at a point,

    K(U, V) = - (S(U,U) S(V,V) - S(U,V)^2) / (G(U,U) G(V,V) - G(U,V)^2).

Axis planes and the two-dimensional case reduce to closed forms in f
and f'.  All curvatures here are strictly negative; the conjectured
lower bound -1/2 for the trigamma family is reported by the validation
suite, never asserted.
"""

import math

import numpy as np

from .families import TRIGAMMA_KERNEL
from .geometry import as_point, _vector_at
from .embedding import shape_operator
from .polygamma import polygamma

# Relative Gram-determinant threshold below which a 2-plane is treated
# as degenerate (the 0/0 case of the curvature quotient).
PLANE_TOL = 1e-12


def sectional(mf, p, u, v):
    """Sectional curvature of the plane spanned by tangents u, v at p.

    u and v may be arrays or Tangent objects based at p; they must be
    linearly independent (relative Gram determinant above 1e-12).
    """
    x = as_point(p)
    uc = _vector_at(u, x)
    vc = _vector_at(v, x)

    fx = mf.f(x)
    sqf = np.sqrt(fx)
    # Coefficients in the embedded tangent basis e_i.
    ue = uc / sqf
    ve = vc / sqf
    w = np.sqrt(fx / mf.f(np.sum(x)))

    def gram(a, b):
        return float(a @ b - (w @ a) * (w @ b))

    guu, guv, gvv = gram(ue, ue), gram(ue, ve), gram(ve, ve)
    denom = guu * gvv - guv * guv
    if denom <= PLANE_TOL * guu * gvv or denom <= 0.0:
        raise ValueError("u and v do not span a non-degenerate 2-plane")

    s = shape_operator(mf, x).matrix
    suu = float(ue @ s @ ue)
    suv = float(ue @ s @ ve)
    svv = float(ve @ s @ ve)
    return -(suu * svv - suv * suv) / denom


def sectional_axes(mf, p, i, j):
    """Curvature of the plane spanned by the basis directions i and j.

    Closed form, with t the coordinate sum and Delta = f(t) - sum f(x_l):

        K(e_i, e_j) = (f_i f'_j f'(t) + f'_i f_j f'(t) - f'_i f'_j f(t))
                      / (4 Delta (f(t) - f_i - f_j)).

    Indices are 0-based and must differ.
    """
    x = as_point(p)
    n = x.size
    if not (isinstance(i, (int, np.integer)) and isinstance(j, (int, np.integer))):
        raise ValueError("indices must be integers")
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"indices must lie in [0, {n}), got ({i}, {j})")
    if i == j:
        raise ValueError("axis-plane curvature needs two distinct indices")
    t = float(np.sum(x))
    ft, dft = mf.f(t), mf.df(t)
    fi, dfi = mf.f(x[i]), mf.df(x[i])
    fj, dfj = mf.f(x[j]), mf.df(x[j])
    gap = ft - float(np.sum(mf.f(x)))
    num = fi * dfj * dft + dfi * fj * dft - dfi * dfj * ft
    return num / (4.0 * gap * (ft - fi - fj))


def gaussian_2d(mf, x, y):
    """Gaussian curvature of the two-dimensional manifold at (x, y).

        K(x, y) = -1/4 (f(t) f'(x) f'(y) - f(x) f'(t) f'(y) - f(y) f'(t) f'(x))
                  / [f(t) - f(x) - f(y)]^2,    t = x + y.

    Accepts scalars or broadcastable arrays.
    """
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    if xa.size == 0 or ya.size == 0:
        raise ValueError("empty input")
    if not (np.isfinite(xa).all() and np.isfinite(ya).all()) or (xa <= 0).any() or (ya <= 0).any():
        raise ValueError("coordinates must be finite and strictly positive")
    t = xa + ya
    ft, dft = mf.f(t), mf.df(t)
    fx, dfx = mf.f(xa), mf.df(xa)
    fy, dfy = mf.f(ya), mf.df(ya)
    gap = ft - fx - fy
    k = -0.25 * (ft * dfx * dfy - fx * dft * dfy - fy * dft * dfx) / (gap * gap)
    if np.isscalar(x) and np.isscalar(y):
        return float(k)
    return k


def asymptotic_limits(mf, x):
    """Boundary limits of K(x, y) in y for the trigamma family.

    Returns the pair (lim_{y->0} K(x, y), lim_{y->inf} K(x, y)):

        3/4 - psi'(x) psi'''(x) / (2 psi''(x)^2)   and
        (x psi''(x) + psi'(x)) / (4 (x psi'(x) - 1)^2).

    Other families have no such closed forms; calling with one raises.
    """
    if mf.kernel_id != TRIGAMMA_KERNEL:
        raise ValueError("asymptotic limits are specific to the trigamma family")
    x = float(x)
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError("x must be finite and positive")
    p1 = polygamma(1, x)
    p2 = polygamma(2, x)
    p3 = polygamma(3, x)
    zero_limit = 0.75 - p1 * p3 / (2.0 * p2 * p2)
    inf_limit = (x * p2 + p1) / (4.0 * (x * p1 - 1.0) ** 2)
    return zero_limit, inf_limit


def principal_curvatures(mf, p):
    """Eigenvalues of k (D - c V V^T), sorted ascending.

    This is the shape operator in the positive-spectrum convention; the
    values lie in [0, k max f'(x_i)] up to roundoff.
    """
    sop = shape_operator(mf, p)
    return np.linalg.eigvalsh(-2.0 * sop.matrix)


def curvature_grid(mf, lo, hi, res, log_spacing=True, z=None):
    """Curvature values over a square grid of (x, y) coordinates.

    Returns (axis, K) where axis has ``res`` points spanning [lo, hi]
    (log-spaced by default) and K[i, j] is the curvature at
    (x=axis[j], y=axis[i]).  With ``z`` given, K instead holds the
    difference K_3(x, y, z) - K_2(x, y) between the axis-plane curvature
    at (x, y, z) in dimension 3 and the two-dimensional value.
    """
    lo, hi = float(lo), float(hi)
    if not (0.0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    res = int(res)
    if res < 2:
        raise ValueError("res must be at least 2")
    if log_spacing:
        axis = np.logspace(math.log10(lo), math.log10(hi), res)
    else:
        axis = np.linspace(lo, hi, res)
    X, Y = np.meshgrid(axis, axis)
    k2 = gaussian_2d(mf, X, Y)
    if z is None:
        return axis, k2
    z = float(z)
    if not (math.isfinite(z) and z > 0.0):
        raise ValueError("z must be finite and positive")
    t = X + Y + z
    ft, dft = mf.f(t), mf.df(t)
    fx, dfx = mf.f(X), mf.df(X)
    fy, dfy = mf.f(Y), mf.df(Y)
    gap = ft - fx - fy - mf.f(z)
    num = fx * dfy * dft + dfx * fy * dft - dfx * dfy * ft
    k3 = num / (4.0 * gap * (ft - fx - fy))
    return axis, k3 - k2
