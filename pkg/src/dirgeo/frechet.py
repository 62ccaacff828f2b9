"""Fréchet (Karcher) mean by Riemannian gradient descent.

The mean minimizes sum_i w_i d(p, p_i)^2.  On this manifold (Hadamard:
complete, simply connected, negative curvature) the minimizer is unique
and the classical fixed-point iteration

    p  <-  exp_p( step * sum_i w_i log_p(p_i) / sum_i w_i )

converges from any starting point.  Step size is 1 with halving on an
objective increase.  Each iteration reuses its log maps for both the
gradient and the objective, so the cost is one batch of shooting solves
per accepted step.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .geometry import Tangent, as_point, metric, norm
from .geodesics import exp_map, log_map


def _check_inputs(points, weights):
    pts = [as_point(p) for p in points]
    if not pts:
        raise ValueError("at least one point is required")
    n = pts[0].size
    if any(p.size != n for p in pts):
        raise ValueError("all points must share the same dimension")
    if weights is None:
        w = np.ones(len(pts))
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (len(pts),):
            raise ValueError(f"expected {len(pts)} weights, got shape {w.shape}")
        if not np.isfinite(w).all() or (w <= 0.0).any():
            raise ValueError("weights must be finite and positive")
    return pts, w


@dataclass(frozen=True)
class MeanResult:
    """Converged mean with iteration diagnostics.

    ``variance`` is the weighted mean squared distance to the inputs,
    i.e. the objective value at the minimizer.  ``final_gradient_norm``
    is the metric norm of the tangent mean there and is at most the
    requested tolerance.
    """

    mean: np.ndarray
    iterations: int
    final_gradient_norm: float
    variance: float


def frechet_objective(mf, p, points, weights=None, *, log_tol=1e-9):
    """Weighted sum of squared geodesic distances from p to the points."""
    pts, w = _check_inputs(points, weights)
    x = as_point(p)
    total = 0.0
    for wi, q in zip(w, pts):
        v = log_map(mf, x, q, tol=log_tol).initial_velocity
        total += wi * max(0.0, float(v.components @ metric(mf, x) @ v.components))
    return total


def frechet_mean(mf, points, weights=None, tol=1e-8, max_iter=200, init=None):
    """Minimize the weighted sum of squared distances to the points.

    Parameters
    ----------
    mf : MetricFunction
    points : sequence of array_like
        One or more points of common dimension.
    weights : sequence of float, optional
        Positive weights; uniform when omitted.
    tol : float
        Convergence threshold on the metric norm of the tangent mean.
    max_iter : int
        Bound on accepted iterations.
    init : array_like, optional
        Starting point; defaults to the weighted Euclidean parameter
        mean (the result does not depend on this, by uniqueness).

    Returns
    -------
    MeanResult
    """
    pts, w = _check_inputs(points, weights)
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    wn = w / np.sum(w)

    if len(pts) == 1:
        return MeanResult(pts[0].copy(), 0, 0.0, 0.0)
    first = pts[0]
    if all(np.array_equal(first, q) for q in pts[1:]):
        return MeanResult(first.copy(), 0, 0.0, 0.0)

    p = as_point(init).copy() if init is not None else (wn @ np.stack(pts))
    log_tol = min(1e-9, 0.1 * tol)
    # Objective comparisons can only be trusted above the shooting noise.
    slack = 100.0 * log_tol

    def logs_and_objective(at):
        g = metric(mf, at)
        vecs = np.empty((len(pts), at.size))
        obj = 0.0
        for i, q in enumerate(pts):
            vecs[i] = log_map(mf, at, q, tol=log_tol).initial_velocity.components
            obj += wn[i] * max(0.0, float(vecs[i] @ g @ vecs[i]))
        return g, vecs, obj

    g, vecs, obj = logs_and_objective(p)
    grad_norm = np.inf
    for it in range(max_iter):
        mean_tangent = wn @ vecs
        grad_norm = norm(g, Tangent(mean_tangent, p))
        if grad_norm <= tol:
            return MeanResult(p, it, grad_norm, obj)
        alpha = 1.0
        while True:
            cand = exp_map(mf, p, alpha * mean_tangent)
            g2, vecs2, obj2 = logs_and_objective(cand)
            if obj2 <= obj + slack * (1.0 + obj) or alpha <= 1.0 / 16.0:
                p, g, vecs, obj = cand, g2, vecs2, obj2
                break
            alpha *= 0.5
    raise ConvergenceError(
        f"Fréchet mean did not converge in {max_iter} iterations "
        f"(gradient norm {grad_norm:.3e}, tolerance {tol:g})"
    )
