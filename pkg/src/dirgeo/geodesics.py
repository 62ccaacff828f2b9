"""Geodesics of the f-metric: IVP integration, shooting, distance.

The exponential map integrates the geodesic ODE

    xdd_k + sum_ij Gamma^k_ij xd_i xd_j = 0

with an adaptive Dormand-Prince 5(4) pair at tolerance 1e-10 and cubic
Hermite dense output.  The logarithm map solves the two-point problem
by damped Newton shooting on the initial velocity (finite-difference
Jacobian, Euclidean chord start, continuation along the chord when a
direct solve stalls); the manifold is Hadamard, so the connecting
geodesic is unique and Newton needs no conjugate-point safeguards.

Integration aborts, rather than clamps, when a coordinate falls to the
``floor`` parameter (default 1e-12).  Pass ``floor=0.0`` to follow
geodesics arbitrarily close to the boundary; completeness means they
never reach it.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._accel import NUMBA_ENABLED
from ._kernels import integrate_generic, integrate_geodesic
from .errors import IntegrationError, ShootingError
from .families import _NARROW, ratio_difference, superadditive_gap
from .geometry import Tangent, _vector_at, as_point, inner, metric, norm

_GL16_NODES, _GL16_WEIGHTS = np.polynomial.legendre.leggauss(16)

_DEFAULT_MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class GeodesicPath:
    """Sampled geodesic: times, points (m, n), velocities (m, n), energy.

    ``energy`` is g(xd, xd) at launch; the integrator keeps the drift
    max_t |g(xd, xd) - energy| / energy below 1e-6 over the samples.
    """

    times: np.ndarray
    points: np.ndarray
    velocities: np.ndarray
    energy: float


@dataclass(frozen=True)
class ShootingResult:
    """Outcome of a converged shooting solve.

    ``residual`` is the Euclidean endpoint miss in parameter coordinates
    and is at most the requested tolerance; ``iterations`` counts Newton
    steps across any continuation stages.
    """

    initial_velocity: Tangent
    iterations: int
    residual: float


def energy(mf, p, v):
    """Kinetic energy g(v, v) of velocity v at p.

    Goes through the metric matrix rather than the expanded
    sum v_i^2/f(x_i) - (sum v_i)^2/f(t), whose two sums cancel
    catastrophically at boundary-hugging states.
    """
    x = as_point(p)
    v = np.asarray(v, dtype=np.float64)
    return inner(metric(mf, x), v, v)


def path_energy(mf, path):
    """g(xd, xd) at every stored sample of a GeodesicPath."""
    return np.array(
        [energy(mf, x, v) for x, v in zip(path.points, path.velocities)]
    )


def _make_rhs(mf, n):
    """Twin of the compiled RHS, same stable regrouping (see _kernels)."""
    offdiag = np.ones((n, n)) - np.eye(n)

    def rhs(y):
        x = y[:n]
        v = y[n:]
        if not np.isfinite(y).all() or (x <= 0.0).any():
            return None
        fx = mf.f(x)
        gx = mf.df(x) / fx
        m = int(np.argmax(x))
        rest = float(np.sum(np.delete(x, m)))
        t = x[m] + rest
        gap = superadditive_gap(mf, x)
        if not (gap > 0.0 and np.isfinite(gap)):
            return None
        gt = mf.df(t) / mf.f(t)
        d = gt - gx
        if rest < _NARROW * x[m]:
            d[m] = ratio_difference(mf, x[m], rest)
        sig = offdiag @ v  # sum_{j != i} v_j, summed directly
        b = float(v @ (gt * sig + d * v))
        acc = -0.5 * (fx / gap * b - gx * v * v)
        return np.concatenate((v, acc))

    return rhs


_STATUS_REASONS = {
    1: "geodesic left the admissible region (coordinate at or below the floor)",
    2: "step size underflow",
    3: "step budget exhausted",
}


def _integrate(mf, x0, v0, T, rtol, atol, floor, max_steps, use_kernel=None):
    if use_kernel is None:
        use_kernel = NUMBA_ENABLED and mf.kernel_id is not None
    if use_kernel:
        status, _, ts, ys, fs = integrate_geodesic(
            mf.kernel_id, x0, v0, T, rtol, atol, floor, max_steps
        )
    else:
        n = x0.size
        y0 = np.concatenate((x0, v0))
        status, _, ts, ys, fs = integrate_generic(
            _make_rhs(mf, n), y0, n, T, rtol, atol, floor, max_steps
        )
    if status != 0:
        if ts.size:
            t_last, y_last = float(ts[-1]), ys[-1].copy()
        else:
            t_last, y_last = 0.0, np.concatenate((x0, v0))
        raise IntegrationError(_STATUS_REASONS[status], t_last, y_last)
    return ts, ys, fs


def _dense_eval(ts, ys, fs, tq):
    """Cubic Hermite interpolation of stored nodes at query times."""
    tq = np.asarray(tq, dtype=np.float64)
    if ts.size == 1:
        return np.repeat(ys[:1], tq.size, axis=0)
    sign = 1.0 if ts[-1] >= ts[0] else -1.0
    tt = sign * ts
    q = np.clip(sign * tq, tt[0], tt[-1])
    idx = np.clip(np.searchsorted(tt, q, side="right") - 1, 0, ts.size - 2)
    t0 = ts[idx]
    h = (ts[idx + 1] - t0)[:, None]
    s = ((sign * q - sign * t0) * sign / h[:, 0])[:, None]
    y0, y1 = ys[idx], ys[idx + 1]
    f0, f1 = fs[idx], fs[idx + 1]
    s2 = s * s
    s3 = s2 * s
    return (
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0
        + (s3 - 2.0 * s2 + s) * h * f0
        + (-2.0 * s3 + 3.0 * s2) * y1
        + (s3 - s2) * h * f1
    )


def geodesic_ivp(
    mf,
    p,
    v,
    T,
    samples=101,
    *,
    rtol=1e-10,
    atol=1e-10,
    floor=1e-12,
    max_steps=_DEFAULT_MAX_STEPS,
):
    """Integrate the geodesic from p with initial velocity v for time T.

    Parameters
    ----------
    mf : MetricFunction
    p : array_like
        Starting point.
    v : array_like or Tangent
        Initial velocity.
    T : float
        Nonzero integration time (negative integrates backward).
    samples : int
        Number of uniformly spaced output times, at least 2.
    floor : float
        Abort (IntegrationError) if a coordinate falls to this value.

    Returns
    -------
    GeodesicPath
    """
    x0 = as_point(p)
    v0 = _vector_at(v, x0)
    T = float(T)
    if not math.isfinite(T) or T == 0.0:
        raise ValueError("T must be finite and nonzero")
    samples = int(samples)
    if samples < 2:
        raise ValueError("samples must be at least 2")
    if not 0.0 <= floor < np.min(x0):
        raise ValueError("floor must be nonnegative and below every coordinate of p")

    ts, ys, fs = _integrate(mf, x0, v0, T, rtol, atol, floor, max_steps)
    times = np.linspace(0.0, T, samples)
    states = _dense_eval(ts, ys, fs, times)
    n = x0.size
    return GeodesicPath(times, states[:, :n], states[:, n:], energy(mf, x0, v0))


def exp_map(mf, p, v, *, rtol=1e-10, atol=1e-10, floor=1e-12, max_steps=_DEFAULT_MAX_STEPS):
    """Endpoint of the geodesic from p with initial velocity v at time 1."""
    x0 = as_point(p)
    v0 = _vector_at(v, x0)
    if not np.any(v0):
        return x0.copy()
    _, ys, _ = _integrate(mf, x0, v0, 1.0, rtol, atol, floor, max_steps)
    return ys[-1, : x0.size].copy()


def _endpoint_or_none(mf, x0, v0, rtol, atol, floor, max_steps):
    try:
        _, ys, _ = _integrate(mf, x0, v0, 1.0, rtol, atol, floor, max_steps)
    except IntegrationError:
        return None
    return ys[-1, : x0.size]


def _fd_jacobian(mf, x0, v, ep, rtol, atol, floor, max_steps):
    n = x0.size
    jac = np.empty((n, n))
    for j in range(n):
        eps = 1e-7 * max(1.0, abs(v[j]))
        for sign in (1.0, -1.0):
            vj = v.copy()
            vj[j] += sign * eps
            col = _endpoint_or_none(mf, x0, vj, rtol, atol, floor, max_steps)
            if col is not None:
                jac[:, j] = (col - ep) / (sign * eps)
                break
        else:
            return None
    return jac


def _newton_shoot(mf, x0, target, v_init, tol, budget, rtol, atol, floor, max_steps):
    """Damped Newton on the endpoint miss. Returns (v, iters, resid, ok)."""
    v = np.array(v_init, dtype=np.float64)
    ep = _endpoint_or_none(mf, x0, v, rtol, atol, floor, max_steps)
    shrink = 0
    while ep is None and shrink < 60:
        v *= 0.5
        ep = _endpoint_or_none(mf, x0, v, rtol, atol, floor, max_steps)
        shrink += 1
    if ep is None:
        return v, 0, math.inf, False
    r = ep - target
    rn = float(np.linalg.norm(r))
    iters = 0
    while rn > tol:
        if iters >= budget:
            return v, iters, rn, False
        jac = _fd_jacobian(mf, x0, v, ep, rtol, atol, floor, max_steps)
        if jac is None:
            return v, iters, rn, False
        try:
            dv = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError:
            dv = np.linalg.lstsq(jac, -r, rcond=None)[0]
        iters += 1
        accepted = False
        alpha = 1.0
        while alpha >= 1.0 / 64.0:
            cand = v + alpha * dv
            ep2 = _endpoint_or_none(mf, x0, cand, rtol, atol, floor, max_steps)
            if ep2 is not None:
                r2 = ep2 - target
                rn2 = float(np.linalg.norm(r2))
                if rn2 <= (1.0 - 1e-4 * alpha) * rn or rn2 <= tol:
                    v, ep, r, rn = cand, ep2, r2, rn2
                    accepted = True
                    break
            alpha *= 0.5
        if not accepted:
            return v, iters, rn, False
    return v, iters, rn, True


def log_map(
    mf,
    p,
    q,
    tol=1e-8,
    max_iter=100,
    *,
    rtol=1e-10,
    atol=1e-10,
    floor=1e-12,
    max_steps=_DEFAULT_MAX_STEPS,
):
    """Initial velocity of the geodesic from p reaching q at time 1.

    Newton shooting from the Euclidean chord; if a solve stalls, the
    target backs off along the chord and previously solved velocities
    seed the next attempt (continuation).  Raises ShootingError with the
    best residual when the iteration budget runs out.

    Returns
    -------
    ShootingResult
        With ``initial_velocity`` based at p and the Euclidean endpoint
        miss ``residual`` at most ``tol``.
    """
    x0 = as_point(p)
    x1 = as_point(q)
    if x0.shape != x1.shape:
        raise ValueError("p and q must have the same dimension")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if np.array_equal(x0, x1):
        return ShootingResult(Tangent(np.zeros_like(x0), x0), 0, 0.0)

    chord = x1 - x0
    total = 0
    best_resid = math.inf
    theta_solved = 0.0
    v_solved = np.zeros_like(x0)
    step = 1.0
    while True:
        theta = theta_solved + step
        if theta > 1.0 - 1e-12:
            theta = 1.0
        target = x1 if theta == 1.0 else x0 + theta * chord
        if theta_solved > 0.0:
            guess = v_solved * (theta / theta_solved)
        else:
            guess = theta * chord
        v, iters, resid, ok = _newton_shoot(
            mf, x0, target, guess, tol, max_iter - total, rtol, atol, floor, max_steps
        )
        total += iters
        best_resid = min(best_resid, resid)
        if ok:
            if theta == 1.0:
                return ShootingResult(Tangent(v, x0), total, resid)
            theta_solved, v_solved = theta, v
            step = min(2.0 * step, 1.0 - theta_solved)
        else:
            if total >= max_iter:
                raise ShootingError("shooting did not converge", total, best_resid)
            step *= 0.5
            if step < 1.0 / 64.0:
                raise ShootingError("chord continuation stalled", total, best_resid)


def distance(mf, p, q, tol=1e-8, **kwargs):
    """Geodesic distance: metric norm at p of log_map(p, q)."""
    result = log_map(mf, p, q, tol=tol, **kwargs)
    return norm(metric(mf, as_point(p)), result.initial_velocity)


def geodesic_2d_coefficients(mf, x, y):
    """Coefficients (a, b, c, d) of the planar geodesic equation.

    In dimension 2 the first geodesic equation reads
    a(x,y) xdd + b(x,y) xd^2 + c(x,y) xd yd + d(x,y) yd^2 = 0 with

        a = 2 [f(x+y) - f(x) - f(y)],
        b = f(y) g(x) + f(x) g(x+y) - f(x+y) g(x),
        c = 2 f(x) g(x+y),
        d = f(x) g(x+y) - g(y) f(x),

    where g = f'/f; the second equation swaps the roles of x and y.
    """
    x, y = float(x), float(y)
    if not (x > 0.0 and y > 0.0 and math.isfinite(x) and math.isfinite(y)):
        raise ValueError("x and y must be finite and positive")
    t = x + y
    fx, fy, ft = mf.f(x), mf.f(y), mf.f(t)
    gx, gy, gt = mf.ratio(x), mf.ratio(y), mf.ratio(t)
    a = 2.0 * (ft - fx - fy)
    b = fy * gx + fx * gt - ft * gx
    c = 2.0 * fx * gt
    d = fx * gt - gy * fx
    return a, b, c, d


def diagonal_q(mf, x):
    """Conservation density q(x) = 1/f(x) - 2/f(2x) of diagonal geodesics."""
    x = np.asarray(x, dtype=np.float64) if not np.isscalar(x) else x
    return 1.0 / mf.f(x) - 2.0 / mf.f(2.0 * x)


def _sqrt_q_panel(mf, s_a, s_b):
    """Integral of sqrt(q) over x in [exp(s_a), exp(s_b)], log variable."""
    mid, half = 0.5 * (s_a + s_b), 0.5 * (s_b - s_a)
    s = mid + half * _GL16_NODES
    r = np.exp(s)
    return half * float(_GL16_WEIGHTS @ (r * np.sqrt(diagonal_q(mf, r))))


def diagonal_geodesic(mf, x0, xdot0, T, samples=101):
    """Diagonal geodesic x(t) = y(t) solved by quadrature.

    Along the diagonal the geodesic equation integrates to
    sqrt(q(x)) xd = const with q(x) = 1/f(x) - 2/f(2x), so x(t) follows
    from inverting the arc integral of sqrt(q).  Returns a GeodesicPath
    in the plane with points (x(t), x(t)).
    """
    x0 = float(x0)
    xdot0 = float(xdot0)
    T = float(T)
    if not (x0 > 0.0 and math.isfinite(x0)):
        raise ValueError("x0 must be finite and positive")
    if not math.isfinite(xdot0):
        raise ValueError("xdot0 must be finite")
    if not (math.isfinite(T) and T > 0.0):
        raise ValueError("T must be finite and positive")
    samples = int(samples)
    if samples < 2:
        raise ValueError("samples must be at least 2")

    times = np.linspace(0.0, T, samples)
    q0 = float(diagonal_q(mf, x0))
    e0 = 2.0 * q0 * xdot0 * xdot0
    if xdot0 == 0.0:
        pts = np.full((samples, 2), x0)
        vels = np.zeros((samples, 2))
        return GeodesicPath(times, pts, vels, 0.0)

    speed = abs(xdot0) * math.sqrt(q0)  # |sqrt(q) xd|, the conserved magnitude
    d = 1.0 if xdot0 > 0.0 else -1.0
    targets = speed * times  # arc progress along the travel direction

    # Checkpoints of P(x) = arc integral from x0 along the travel direction.
    ds = 0.25
    s0 = math.log(x0)
    s_nodes = [s0]
    p_nodes = [0.0]
    while p_nodes[-1] <= targets[-1]:
        s_prev = s_nodes[-1]
        s_next = s_prev + d * ds
        if d > 0:
            panel = _sqrt_q_panel(mf, s_prev, s_next)
        else:
            panel = _sqrt_q_panel(mf, s_next, s_prev)
        s_nodes.append(s_next)
        p_nodes.append(p_nodes[-1] + panel)
    s_nodes = np.array(s_nodes)
    p_nodes = np.array(p_nodes)

    def progress(s, k):
        """P at log-coordinate s, from checkpoint k."""
        if d > 0:
            return p_nodes[k] + _sqrt_q_panel(mf, s_nodes[k], s)
        return p_nodes[k] + _sqrt_q_panel(mf, s, s_nodes[k])

    xs = np.empty(samples)
    ptol = 1e-12 * max(1.0, targets[-1])
    for i, tau in enumerate(targets):
        if tau == 0.0:
            xs[i] = x0
            continue
        k = int(np.searchsorted(p_nodes, tau, side="right")) - 1
        k = min(max(k, 0), s_nodes.size - 2)
        lo_s, hi_s = sorted((s_nodes[k], s_nodes[k + 1]))
        s = 0.5 * (lo_s + hi_s)
        for _ in range(60):
            val = progress(s, k)
            if abs(val - tau) <= ptol:
                break
            # P grows along the travel direction: maintain the bracket in s.
            if (val < tau) == (d > 0):
                lo_s = s
            else:
                hi_s = s
            x_here = math.exp(s)
            # dP/ds = d * sqrt(q(x)) * x by the chain rule through s = log x.
            s_new = s - (val - tau) / (d * math.sqrt(float(diagonal_q(mf, x_here))) * x_here)
            if not lo_s < s_new < hi_s:
                s_new = 0.5 * (lo_s + hi_s)
            s = s_new
        xs[i] = math.exp(s)

    vels_diag = d * speed / np.sqrt(diagonal_q(mf, xs))
    pts = np.column_stack((xs, xs))
    vels = np.column_stack((vels_diag, vels_diag))
    return GeodesicPath(times, pts, vels, e0)
