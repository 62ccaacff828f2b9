"""Geodesic ODE integration: compiled kernel and its pure-numpy twin.

The geodesic equation for the f-metric contracts to an O(n) right-hand
side: with g = f'/f, S1 = sum v_i and the gap Delta = f(t) - sum f(x_l),

    xdd_k = -1/2 [ f(x_k)/Delta * B - g(x_k) v_k^2 ],
    B = sum_i v_i [ g(t) (S1 - v_i) + (g(t) - g(x_i)) v_i ].

B equals g(t) S1^2 - sum g(x_i) v_i^2 exactly, but grouped this way the
huge terms never meet: geodesics that hug the boundary grow a coordinate
like e^(c t) with velocity to match, and the naive contraction then
cancels ~1e13-sized terms down to O(1), leaving pure rounding noise that
stalls the step controller.  g(t) - g(x_i) and Delta are evaluated with
the stable differences mirrored from families (quadrature of derivatives
over narrow intervals, f(x) - x asymptotics for large sums).

Both integrators implement the same Dormand-Prince 5(4) embedded pair
with FSAL, PI-free step control and stored derivative nodes for cubic
Hermite dense output.  ``integrate_geodesic`` is compiled and dispatches
on a family id; ``integrate_generic`` takes a Python right-hand side and
serves custom families and the no-numba fallback.  Status codes:
0 done, 1 left the domain, 2 step underflow, 3 step budget exhausted.
"""

import numpy as np

from ._accel import njit
from .polygamma import psi_scalar, trigamma_residual

# Family ids; match families.TRIGAMMA_KERNEL / RATIONAL_KERNEL.
_TRI = 0
_RAT = 1

# Stable-difference constants; keep in sync with families._GL2 /
# families._NARROW / families._BIG.
_GL2_LO = 0.5 - 0.5 / np.sqrt(3.0)
_GL2_HI = 0.5 + 0.5 / np.sqrt(3.0)
_NARROW = 1e-3
_BIG = 10.0

# Dormand-Prince 5(4) tableau.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_SAFETY = 0.9


@njit(cache=True)
def _f_pair(fam, x):
    """(f(x), f'(x)) for the built-in family `fam`."""
    if fam == _TRI:
        p1 = psi_scalar(1, x)
        f = 1.0 / p1
        return f, -psi_scalar(2, x) * f * f
    den = 2.0 * x * x + 2.0 * x + 1.0
    f = (2.0 * x + 1.0) * x * x / den
    df = 2.0 * x * (((2.0 * x + 4.0) * x + 4.0) * x + 1.0) / (den * den)
    return f, df


@njit(cache=True)
def _f_dd(fam, x):
    """f''(x) for the built-in family `fam`."""
    if fam == _TRI:
        p1 = psi_scalar(1, x)
        p2 = psi_scalar(2, x)
        return (2.0 * p2 * p2 - p1 * psi_scalar(3, x)) / (p1 * p1 * p1)
    den = 2.0 * x * x + 2.0 * x + 1.0
    return 2.0 * (6.0 * x * x + 6.0 * x + 1.0) / (den * den * den)


@njit(cache=True)
def _f_excess(fam, x):
    """f(x) - x without the large-x cancellation."""
    if fam == _TRI:
        return -trigamma_residual(x) / psi_scalar(1, x)
    return -(x * x + x) / (2.0 * x * x + 2.0 * x + 1.0)


@njit(cache=True)
def _geo_rhs(fam, y, n, dy, fxs, gxs):
    """Geodesic RHS into dy; False when the state leaves the domain."""
    mi = 0
    mx = y[0]
    for i in range(n):
        xi = y[i]
        if not (xi > 0.0 and np.isfinite(xi) and np.isfinite(y[n + i])):
            return False
        if xi > mx:
            mx = xi
            mi = i
    rest = 0.0
    for i in range(n):
        if i != mi:
            rest += y[i]
    t = mx + rest
    for i in range(n):
        fi, dfi = _f_pair(fam, y[i])
        fxs[i] = fi
        gxs[i] = dfi / fi
    ft, dft = _f_pair(fam, t)
    gt = dft / ft

    # Gap and the dominant-coordinate ratio difference, stable variants.
    narrow = rest < _NARROW * mx
    dmx = 0.0
    if narrow:
        a1 = mx + _GL2_LO * rest
        a2 = mx + _GL2_HI * rest
        f1, d1 = _f_pair(fam, a1)
        f2, d2 = _f_pair(fam, a2)
        fdiff = 0.5 * rest * (d1 + d2)
        i2 = 0.5 * rest * (_f_dd(fam, a1) + _f_dd(fam, a2))
        gap = fdiff
        for i in range(n):
            if i != mi:
                gap -= fxs[i]
        dmx = (ft * i2 - dft * fdiff) / (fxs[mi] * ft)
    elif t >= _BIG:
        gap = _f_excess(fam, t)
        for i in range(n):
            gap -= _f_excess(fam, y[i])
    else:
        gap = ft
        for i in range(n):
            gap -= fxs[i]
    if not (gap > 0.0 and np.isfinite(gap)):
        return False

    b = 0.0
    for i in range(n):
        vi = y[n + i]
        sig = 0.0
        for j in range(n):
            if j != i:
                sig += y[n + j]
        if narrow and i == mi:
            di = dmx
        else:
            di = gt - gxs[i]
        b += vi * (gt * sig + di * vi)
    for i in range(n):
        vi = y[n + i]
        dy[i] = vi
        dy[n + i] = -0.5 * (fxs[i] / gap * b - gxs[i] * vi * vi)
    return True


@njit(cache=True)
def _error_norm(err, y0, y1, rtol, atol):
    acc = 0.0
    for i in range(err.size):
        sc = atol + rtol * max(abs(y0[i]), abs(y1[i]))
        r = err[i] / sc
        acc += r * r
    return np.sqrt(acc / err.size)


@njit(cache=True)
def integrate_geodesic(fam, x0, v0, t_end, rtol, atol, floor, max_steps):
    """Integrate the geodesic IVP for a built-in family.

    Returns (status, t_reached, ts, ys, fs) where ts/ys/fs hold every
    accepted node (state and derivative) for dense interpolation.
    """
    n = x0.size
    m = 2 * n
    y = np.empty(m)
    for i in range(n):
        y[i] = x0[i]
        y[n + i] = v0[i]

    k1 = np.empty(m)
    k2 = np.empty(m)
    k3 = np.empty(m)
    k4 = np.empty(m)
    k5 = np.empty(m)
    k6 = np.empty(m)
    k7 = np.empty(m)
    ytmp = np.empty(m)
    ynew = np.empty(m)
    fxs = np.empty(n)
    gxs = np.empty(n)

    cap = 512
    ts = np.empty(cap)
    ys = np.empty((cap, m))
    fs = np.empty((cap, m))

    if not _geo_rhs(fam, y, n, k1, fxs, gxs):
        return 1, 0.0, ts[:0], ys[:0], fs[:0]
    ts[0] = 0.0
    ys[0, :] = y
    fs[0, :] = k1
    count = 1
    t = 0.0
    direction = 1.0 if t_end > 0.0 else -1.0

    # Initial step: second-derivative probe, Hairer-style.
    d0 = _error_norm(y, y, y, rtol, atol)  # rms of |y|/scale
    d1 = _error_norm(k1, y, y, rtol, atol)
    if d0 < 1e-5 or d1 < 1e-5:
        h = 1e-6
    else:
        h = 0.01 * d0 / d1
    h = min(h, abs(t_end))
    for i in range(m):
        ytmp[i] = y[i] + direction * h * k1[i]
    if _geo_rhs(fam, ytmp, n, k7, fxs, gxs):
        d2 = 0.0
        for i in range(m):
            sc = atol + rtol * abs(y[i])
            r = (k7[i] - k1[i]) / sc
            d2 += r * r
        d2 = np.sqrt(d2 / m) / h
        dm = max(d1, d2)
        if dm > 1e-15:
            h = min(100.0 * h, dm ** -0.2 * 0.1, abs(t_end))
    else:
        h = h * 1e-2
    h = direction * max(h, 1e-12)

    status = 0
    last = False
    rejected = False
    steps = 0
    while True:
        if steps >= max_steps:
            status = 3
            break
        steps += 1
        if (t + h - t_end) * direction >= 0.0:
            h = t_end - t
            last = True
        else:
            last = False

        ok = True
        for i in range(m):
            ytmp[i] = y[i] + h * _A21 * k1[i]
        ok = _geo_rhs(fam, ytmp, n, k2, fxs, gxs)
        if ok:
            for i in range(m):
                ytmp[i] = y[i] + h * (_A31 * k1[i] + _A32 * k2[i])
            ok = _geo_rhs(fam, ytmp, n, k3, fxs, gxs)
        if ok:
            for i in range(m):
                ytmp[i] = y[i] + h * (_A41 * k1[i] + _A42 * k2[i] + _A43 * k3[i])
            ok = _geo_rhs(fam, ytmp, n, k4, fxs, gxs)
        if ok:
            for i in range(m):
                ytmp[i] = y[i] + h * (
                    _A51 * k1[i] + _A52 * k2[i] + _A53 * k3[i] + _A54 * k4[i]
                )
            ok = _geo_rhs(fam, ytmp, n, k5, fxs, gxs)
        if ok:
            for i in range(m):
                ytmp[i] = y[i] + h * (
                    _A61 * k1[i] + _A62 * k2[i] + _A63 * k3[i] + _A64 * k4[i] + _A65 * k5[i]
                )
            ok = _geo_rhs(fam, ytmp, n, k6, fxs, gxs)
        if ok:
            for i in range(m):
                ynew[i] = y[i] + h * (
                    _B1 * k1[i] + _B3 * k3[i] + _B4 * k4[i] + _B5 * k5[i] + _B6 * k6[i]
                )
            ok = _geo_rhs(fam, ynew, n, k7, fxs, gxs)

        if not ok:
            # A stage left the domain: shrink and retry.
            h *= 0.25
            rejected = True
            last = False
            if abs(h) < 1e-14 * max(1.0, abs(t)):
                status = 1
                break
            continue

        for i in range(m):
            ytmp[i] = h * (
                _E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i] + _E7 * k7[i]
            )
        enorm = _error_norm(ytmp, y, ynew, rtol, atol)
        if not np.isfinite(enorm):
            enorm = 1e10

        if enorm <= 1.0:
            t = t_end if last else t + h
            for i in range(m):
                y[i] = ynew[i]
                k1[i] = k7[i]
            escaped = False
            for i in range(n):
                if y[i] <= floor:
                    escaped = True
            if escaped:
                status = 1
                break
            if count == cap:
                cap *= 2
                ts2 = np.empty(cap)
                ys2 = np.empty((cap, m))
                fs2 = np.empty((cap, m))
                ts2[:count] = ts[:count]
                ys2[:count] = ys[:count]
                fs2[:count] = fs[:count]
                ts, ys, fs = ts2, ys2, fs2
            ts[count] = t
            ys[count, :] = y
            fs[count, :] = k1
            count += 1
            if last:
                break
            if enorm == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, _SAFETY * enorm ** -0.2)
            if rejected:
                factor = min(factor, 1.0)
            h *= max(_MIN_FACTOR, factor)
            rejected = False
        else:
            rejected = True
            h *= max(_MIN_FACTOR, _SAFETY * enorm ** -0.2)
            if abs(h) < 1e-14 * max(1.0, abs(t)):
                status = 2
                break

    return status, t, ts[:count], ys[:count], fs[:count]


def integrate_generic(rhs, y0, n, t_end, rtol, atol, floor, max_steps):
    """Numpy twin of :func:`integrate_geodesic` for a Python RHS.

    ``rhs(y)`` returns the derivative vector or None when y is outside
    the domain.  Same stepping logic, same return convention.
    """
    y = np.asarray(y0, dtype=np.float64).copy()
    m = y.size

    ts = [0.0]
    ys_list = []
    fs_list = []

    k1 = rhs(y)
    if k1 is None:
        return 1, 0.0, np.empty(0), np.empty((0, m)), np.empty((0, m))
    ys_list.append(y.copy())
    fs_list.append(k1.copy())
    t = 0.0
    direction = 1.0 if t_end > 0.0 else -1.0

    def wnorm(vec, ya, yb):
        sc = atol + rtol * np.maximum(np.abs(ya), np.abs(yb))
        return float(np.sqrt(np.mean((vec / sc) ** 2)))

    d0 = wnorm(y, y, y)
    d1 = wnorm(k1, y, y)
    h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h = min(h, abs(t_end))
    probe = rhs(y + direction * h * k1)
    if probe is not None:
        d2 = wnorm(probe - k1, y, y) / h
        dm = max(d1, d2)
        if dm > 1e-15:
            h = min(100.0 * h, dm ** -0.2 * 0.1, abs(t_end))
    else:
        h *= 1e-2
    h = direction * max(h, 1e-12)

    status = 0
    rejected = False
    last = False
    steps = 0
    while True:
        if steps >= max_steps:
            status = 3
            break
        steps += 1
        if (t + h - t_end) * direction >= 0.0:
            h = t_end - t
            last = True
        else:
            last = False

        k2 = rhs(y + h * (_A21 * k1))
        k3 = rhs(y + h * (_A31 * k1 + _A32 * k2)) if k2 is not None else None
        k4 = (
            rhs(y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
            if k3 is not None
            else None
        )
        k5 = (
            rhs(y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
            if k4 is not None
            else None
        )
        k6 = (
            rhs(y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
            if k5 is not None
            else None
        )
        ynew = None
        k7 = None
        if k6 is not None:
            ynew = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
            k7 = rhs(ynew)

        if k7 is None:
            h *= 0.25
            rejected = True
            last = False
            if abs(h) < 1e-14 * max(1.0, abs(t)):
                status = 1
                break
            continue

        err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)
        enorm = wnorm(err, y, ynew)
        if not np.isfinite(enorm):
            enorm = 1e10

        if enorm <= 1.0:
            t = t_end if last else t + h
            y = ynew
            k1 = k7
            if (y[:n] <= floor).any():
                status = 1
                break
            ts.append(t)
            ys_list.append(y.copy())
            fs_list.append(k1.copy())
            if last:
                break
            factor = _MAX_FACTOR if enorm == 0.0 else min(_MAX_FACTOR, _SAFETY * enorm ** -0.2)
            if rejected:
                factor = min(factor, 1.0)
            h *= max(_MIN_FACTOR, factor)
            rejected = False
        else:
            rejected = True
            h *= max(_MIN_FACTOR, _SAFETY * enorm ** -0.2)
            if abs(h) < 1e-14 * max(1.0, abs(t)):
                status = 2
                break

    return status, t, np.array(ts), np.array(ys_list), np.array(fs_list)
