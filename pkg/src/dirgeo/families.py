"""Metric-generating functions f and the assumptions they must satisfy.

A generalized simplex metric is built from a single function f through

    g_ij(x) = delta_ij / f(x_i) - 1 / f(x_1 + ... + x_n).

Positive definiteness and the curvature sign rest on a short list of
analytic assumptions on f (growth at 0 and infinity, convexity of f and
of f/f').  :func:`verify_assumptions` checks them numerically on a grid.

Two families ship with the package: the reciprocal trigamma function,
which reproduces the Fisher-Rao geometry of Dirichlet distributions, and
a rational surrogate that matches its behaviour at both ends of the
positive axis while staying cheap to evaluate.

The module also provides stable differences of f-quantities (f(b) - f(a),
the log-derivative difference, the superadditivity gap): both families
approach f(x) = x - 1/2 for large x, so the naive subtractions lose a
digit per decade and eventually swamp the geodesic right-hand side.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .polygamma import polygamma, trigamma_residual

# Kernel ids let compiled code dispatch on the family without callbacks.
TRIGAMMA_KERNEL = 0
RATIONAL_KERNEL = 1


@dataclass(eq=False)
class MetricFunction:
    """A function f with its first two derivatives.

    Fields
    ------
    label : str
        Short identifier, used in CLI output and error messages.
    f, df, d2f : callable
        f, f' and f''.  Each accepts a positive float or ndarray.
    kernel_id : int or None
        Set for the built-in families so compiled kernels can evaluate
        f without a Python callback; None for user-supplied functions.
    """

    label: str
    f: Callable
    df: Callable
    d2f: Callable
    kernel_id: Optional[int] = field(default=None)

    def ratio(self, x):
        """f'(x) / f(x), the logarithmic derivative of f."""
        return self.df(x) / self.f(x)


def _rat_f(x):
    x = np.asarray(x, dtype=np.float64) if not np.isscalar(x) else x
    return (2.0 * x + 1.0) * x * x / (2.0 * x * x + 2.0 * x + 1.0)


def _rat_df(x):
    d = 2.0 * x * x + 2.0 * x + 1.0
    return 2.0 * x * (((2.0 * x + 4.0) * x + 4.0) * x + 1.0) / (d * d)


def _rat_d2f(x):
    d = 2.0 * x * x + 2.0 * x + 1.0
    return 2.0 * (6.0 * x * x + 6.0 * x + 1.0) / (d * d * d)


def _tri_f(x):
    return 1.0 / polygamma(1, x)


def _tri_df(x):
    p1 = polygamma(1, x)
    return -polygamma(2, x) / (p1 * p1)


def _tri_d2f(x):
    p1 = polygamma(1, x)
    p2 = polygamma(2, x)
    return (2.0 * p2 * p2 - p1 * polygamma(3, x)) / (p1 * p1 * p1)


@lru_cache(maxsize=None)
def trigamma_reciprocal():
    """f = 1/psi', the choice that yields the Fisher-Rao metric."""
    return MetricFunction("trigamma", _tri_f, _tri_df, _tri_d2f, TRIGAMMA_KERNEL)


@lru_cache(maxsize=None)
def rational_approx():
    """Rational stand-in for 1/psi'.

    f(x) = (2x+1) x^2 / (2x^2 + 2x + 1) shares the x^2 behaviour at 0
    and the x - 1/2 behaviour at infinity with the trigamma family, and
    satisfies the same convexity assumptions.
    """
    return MetricFunction("rational", _rat_f, _rat_df, _rat_d2f, RATIONAL_KERNEL)


_FAMILIES = {"trigamma": trigamma_reciprocal, "rational": rational_approx}


def family(name):
    """Look up a built-in family by name ('trigamma' or 'rational')."""
    try:
        return _FAMILIES[name]()
    except KeyError:
        raise ValueError(
            f"unknown family {name!r}; expected one of {sorted(_FAMILIES)}"
        ) from None


# Two-point Gauss-Legendre nodes on [0, 1]: the narrow-interval
# quadratures below are exact through cubics, so their relative error is
# O((h/a)^4) where direct subtraction would lose eps * a / h.
_GL2 = (0.5 - 0.5 / math.sqrt(3.0), 0.5 + 0.5 / math.sqrt(3.0))

# Width-to-argument ratio below which differences switch from direct
# subtraction to quadrature of the derivative.  At the crossover both
# routes are good to ~1e-13 relative.  _kernels mirrors these constants.
_NARROW = 1e-3

# Arguments above this make f(t) - sum f(x_i) better computed from
# f(x) - x; below it the excess values are larger than the f values and
# direct evaluation wins.
_BIG = 10.0


def f_excess(mf, x):
    """f(x) - x without the large-argument cancellation.

    Exact algebra for the rational family, the Bernoulli tail of
    x psi'(x) - 1 for the trigamma family; custom families fall back to
    the direct difference.  Scalar or 1-D array.
    """
    if mf.kernel_id == RATIONAL_KERNEL:
        xa = np.asarray(x, dtype=np.float64)
        return -(xa * xa + xa) / (2.0 * xa * xa + 2.0 * xa + 1.0)
    if mf.kernel_id == TRIGAMMA_KERNEL:
        xa = np.asarray(x, dtype=np.float64)
        if xa.ndim == 0:
            return -trigamma_residual(float(xa)) / float(polygamma(1, float(xa)))
        res = np.array([trigamma_residual(float(z)) for z in xa])
        return -res / polygamma(1, xa)
    return mf.f(x) - np.asarray(x, dtype=np.float64)


def f_difference(mf, a, h):
    """f(a + h) - f(a) elementwise for a, h > 0, stable when h << a.

    The caller passes the width h explicitly; recovering it from the
    rounded endpoints would reintroduce the cancellation this avoids.
    Narrow intervals integrate f' with two-point Gauss-Legendre.
    """
    scalar = np.ndim(a) == 0 and np.ndim(h) == 0
    aa = np.atleast_1d(np.asarray(a, dtype=np.float64))
    hh = np.broadcast_to(np.asarray(h, dtype=np.float64), aa.shape)
    out = np.asarray(mf.f(aa + hh) - mf.f(aa), dtype=np.float64)
    narrow = hh < _NARROW * aa
    if narrow.any():
        an, hn = aa[narrow], hh[narrow]
        out[narrow] = 0.5 * hn * (mf.df(an + _GL2[0] * hn) + mf.df(an + _GL2[1] * hn))
    return float(out[0]) if scalar else out


def ratio_difference(mf, a, h):
    """g(a + h) - g(a) for g = f'/f and scalar a, h > 0, stable when h << a.

    Narrow intervals rewrite the difference as

        (f(b) [f'(b) - f'(a)] - f'(b) [f(b) - f(a)]) / (f(a) f(b))

    with both inner differences done by quadrature of f'' and f'.
    """
    a, h = float(a), float(h)
    b = a + h
    if h >= _NARROW * a:
        return float(mf.ratio(b) - mf.ratio(a))
    n1 = a + _GL2[0] * h
    n2 = a + _GL2[1] * h
    fdiff = 0.5 * h * float(mf.df(n1) + mf.df(n2))
    i2 = 0.5 * h * float(mf.d2f(n1) + mf.d2f(n2))
    fb = float(mf.f(b))
    return (fb * i2 - float(mf.df(b)) * fdiff) / (float(mf.f(a)) * fb)


def superadditive_gap(mf, p):
    """f(t) - sum f(x_i) for t = sum x_i, accurate where it matters.

    Three regimes: a dominant coordinate (f(t) - f(x_max) becomes a
    quadrature of f' over the remainder, never forming f(t)), large t
    (the gap is a combination of f(x) - x values, which stay O(1)), and
    the plain formula otherwise.  The gap is positive for every valid
    point by superadditivity of f.
    """
    x = np.asarray(p, dtype=np.float64)
    m = int(np.argmax(x))
    xm = float(x[m])
    others = np.delete(x, m)
    rest = float(np.sum(others))
    t = xm + rest
    if rest < _NARROW * xm:
        n1 = xm + _GL2[0] * rest
        n2 = xm + _GL2[1] * rest
        fdiff = 0.5 * rest * float(mf.df(n1) + mf.df(n2))
        return fdiff - float(np.sum(mf.f(others)))
    if t >= _BIG:
        return float(f_excess(mf, t) - np.sum(f_excess(mf, x)))
    return float(mf.f(t) - np.sum(mf.f(x)))


@dataclass(frozen=True)
class AssumptionViolation:
    """One failed check: which assumption, where, and by how much."""

    check: str
    where: tuple
    value: float

    def __str__(self):
        at = ", ".join(f"{w:.6g}" for w in self.where)
        return f"{self.check} fails at ({at}): {self.value:.6g}"


def _second_difference(func, x, rel_step=1e-5):
    """Central second-derivative estimate with a relative step."""
    h = rel_step * x
    return (func(x + h) - 2.0 * func(x) + func(x - h)) / (h * h)


def verify_assumptions(mf, grid=None):
    """Check the assumptions on f numerically.

    Verified on the grid: f, f' and f'' positive; (f/f')'' positive;
    f = O(x^2) and f' = O(x) near zero; f = O(x^2) at infinity; and
    superadditivity of f and f/f' on grid pairs.  Convexity of f/f' is
    a finite-difference check, so violations only count when they
    exceed the roundoff bound of the difference quotient.

    Parameters
    ----------
    mf : MetricFunction
    grid : ndarray, optional
        Strictly positive evaluation points; defaults to 241 log-spaced
        points on [1e-6, 1e6].

    Returns
    -------
    list of AssumptionViolation
        Empty when every check passes.
    """
    if grid is None:
        grid = np.logspace(-6.0, 6.0, 241)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0 or not (np.isfinite(grid).all() and (grid > 0.0).all()):
        raise ValueError("grid must contain finite positive values")

    out = []

    def flag(check, where, value):
        out.append(AssumptionViolation(check, tuple(float(w) for w in where), float(value)))

    fv = np.asarray(mf.f(grid), dtype=np.float64)
    dv = np.asarray(mf.df(grid), dtype=np.float64)
    d2v = np.asarray(mf.d2f(grid), dtype=np.float64)
    for name, vals in (("f > 0", fv), ("f' > 0", dv), ("f'' > 0", d2v)):
        for x, v in zip(grid[vals <= 0.0], vals[vals <= 0.0]):
            flag(name, (x,), v)

    # (f/f')'' > 0 via a central difference of the analytic r' = 1 - f f''/f'^2.
    def rprime(x):
        f, df = mf.f(x), mf.df(x)
        return 1.0 - f * mf.d2f(x) / (df * df)

    h = 1e-5
    for x in grid:
        lo, hi = x * (1.0 - h), x * (1.0 + h)
        rp_lo, rp_hi = rprime(lo), rprime(hi)
        fd2 = (rp_hi - rp_lo) / (hi - lo)
        # Roundoff bound for the quotient; differences below it carry no sign.
        noise = 64.0 * np.finfo(float).eps * max(abs(rp_lo), abs(rp_hi), 1e-30) / (hi - lo)
        if fd2 < -noise:
            flag("(f/f')'' > 0", (x,), fd2)

    # Growth orders: bounded ratios at the ends of the grid.
    bound = 10.0
    small = grid[grid <= 1e-2]
    if small.size:
        r = mf.f(small) / (small * small)
        if np.max(r) > bound:
            i = int(np.argmax(r))
            flag("f = O(x^2), x->0", (small[i],), r[i])
        r = mf.df(small) / small
        if np.max(r) > bound:
            i = int(np.argmax(r))
            flag("f' = O(x), x->0", (small[i],), r[i])
    large = grid[grid >= 1e2]
    if large.size:
        r = mf.f(large) / (large * large)
        if np.max(r) > bound:
            i = int(np.argmax(r))
            flag("f = O(x^2), x->inf", (large[i],), r[i])

    # Superadditivity of f and f/f' on pairs from a thinned grid.
    pairs = grid[:: max(1, grid.size // 24)]
    X, Y = np.meshgrid(pairs, pairs)
    fx, fy, fs = mf.f(X), mf.f(Y), mf.f(X + Y)
    gap = fs - fx - fy
    bad = gap < -1e-12 * np.abs(fs)
    for x, y, v in zip(X[bad], Y[bad], gap[bad]):
        flag("f superadditive", (x, y), v)
    rx = fx / mf.df(X)
    ry = fy / mf.df(Y)
    rs = fs / mf.df(X + Y)
    gap = rs - rx - ry
    bad = gap < -1e-12 * np.abs(rs)
    for x, y, v in zip(X[bad], Y[bad], gap[bad]):
        flag("f/f' superadditive", (x, y), v)

    return out
