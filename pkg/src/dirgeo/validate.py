"""Cross-module invariant suite behind the `validate` CLI command.

Each check re-derives a quantity through an independent route (finite
differences, closed-form identities, alternate formulas) and compares.
Checks end PASS or FAIL; conjecture scans end REPORT because the
underlying statements are unproven, so a violation is a finding to
record, not a broken build.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import curvature, embedding, families, frechet, geodesics, geometry
from .polygamma import polygamma

PASS = "PASS"
FAIL = "FAIL"
REPORT = "REPORT"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str


def sectional_fd(mf, p, u, v, h=1e-5):
    """Sectional curvature from the curvature tensor, no embedding.

    Builds R^l_kij = d_i Gamma^l_jk - d_j Gamma^l_ik + Gamma Gamma terms
    with centered differences of the closed-form symbols, then takes
    K = g(R(u,v)v, u) / (|u|^2 |v|^2 - g(u,v)^2).  Independent of the
    Gauss-equation route in `curvature`.
    """
    x = geometry.as_point(p)
    n = x.size
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    gam = geometry.christoffel(mf, x)
    dgam = np.empty((n, n, n, n))
    for a in range(n):
        step = h * max(1.0, x[a])
        xp = x.copy()
        xp[a] += step
        xm = x.copy()
        xm[a] -= step
        dgam[a] = (geometry.christoffel(mf, xp) - geometry.christoffel(mf, xm)) / (
            2.0 * step
        )
    # R[l, k, i, j] = dgam[i][l, j, k] - dgam[j][l, i, k]
    #                 + sum_s gam[l, i, s] gam[s, j, k] - gam[l, j, s] gam[s, i, k]
    riem = (
        np.einsum("iljk->lkij", dgam)
        - np.einsum("jlik->lkij", dgam)
        + np.einsum("lis,sjk->lkij", gam, gam)
        - np.einsum("ljs,sik->lkij", gam, gam)
    )
    g = geometry.metric(mf, x)
    ruv = np.einsum("lkij,i,j,k->l", riem, u, v, v)
    num = float(u @ g @ ruv)
    guu = float(u @ g @ u)
    gvv = float(v @ g @ v)
    guv = float(u @ g @ v)
    den = guu * gvv - guv * guv
    if den <= 0.0:
        raise ValueError("u and v do not span a plane")
    return num / den


def _random_point(rng, n, lo=-1.5, hi=1.5):
    return np.exp(rng.uniform(lo, hi, n))


def _check_polygamma_recurrence():
    xs = np.concatenate([np.logspace(-1, math.log10(50.0), 400)])
    worst = 0.0
    for k in range(4):
        # psi^(k)(x) - psi^(k)(x+1) = (-1)^(k+1) k! / x^(k+1)
        lhs = polygamma(k, xs) - polygamma(k, xs + 1.0)
        rhs = (-1.0) ** (k + 1) * math.factorial(k) / xs ** (k + 1)
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / np.abs(rhs))))
    ok = worst <= 1e-12
    return ok, f"max rel residual {worst:.2e} (tol 1e-12)"


def _check_polygamma_reflection():
    # psi'(x) + psi'(1-x) = pi^2 / sin^2(pi x)
    xs = np.linspace(0.05, 0.95, 181)
    lhs = polygamma(1, xs) + polygamma(1, 1.0 - xs)
    rhs = math.pi**2 / np.sin(math.pi * xs) ** 2
    worst = float(np.max(np.abs(lhs - rhs) / rhs))
    return worst <= 1e-11, f"max rel residual {worst:.2e} (tol 1e-11)"


def _check_assumptions():
    msgs = []
    for name in ("trigamma", "rational"):
        viol = families.verify_assumptions(families.family(name))
        if viol:
            msgs.append(f"{name}: {len(viol)} violations, first: {viol[0]}")
    return not msgs, "; ".join(msgs) if msgs else "both families satisfy all conditions"


def _check_derivatives():
    worst = 0.0
    xs = np.logspace(-3, 3, 301)
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        h = 1e-6 * np.maximum(xs, 1.0)
        fd = (mf.f(xs + h) - mf.f(xs - h)) / (2.0 * h)
        worst = max(worst, float(np.max(np.abs(fd - mf.df(xs)) / np.abs(mf.df(xs)))))
    return worst <= 1e-6, f"max rel error f' vs centered difference {worst:.2e}"


def _check_metric_inverse(rng):
    worst = 0.0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        for n in (2, 3, 4, 5):
            for _ in range(10):
                p = _random_point(rng, n)
                g = geometry.metric(mf, p)
                gi = geometry.metric_inverse(mf, p)
                worst = max(worst, float(np.max(np.abs(g @ gi - np.eye(n)))))
                # row sums of the inverse have a closed form
                t = float(np.sum(p))
                gap = mf.f(t) - float(np.sum(mf.f(p)))
                want = mf.f(p) * mf.f(t) / gap
                worst = max(worst, float(np.max(np.abs(gi.sum(axis=1) - want)
                                                / np.abs(want))))
    return worst <= 1e-9, f"max residual {worst:.2e} (identity and row sums)"


def _check_christoffel_fd(rng):
    worst = 0.0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        for n in (2, 3):
            for _ in range(8):
                p = _random_point(rng, n, -1.0, 1.0)
                gam = geometry.christoffel(mf, p)
                gi = geometry.metric_inverse(mf, p)
                dg = np.empty((n, n, n))
                for a in range(n):
                    h = 1e-6 * max(1.0, p[a])
                    pp = p.copy()
                    pp[a] += h
                    pm = p.copy()
                    pm[a] -= h
                    dg[a] = (geometry.metric(mf, pp) - geometry.metric(mf, pm)) / (2 * h)
                # Gamma^k_ij = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
                lowered = dg + dg.transpose(1, 0, 2) - dg.transpose(2, 0, 1)
                ref = 0.5 * np.einsum("kl,ijl->kij", gi, lowered)
                worst = max(worst, float(np.max(np.abs(ref - gam))))
    return worst <= 1e-5, f"max abs error {worst:.2e}"


def _check_eta_xi():
    worst = 0.0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        for x in (1e-5, 1e-2, 0.5, 1.0, 3.0, 50.0, 1e4):
            y = embedding.eta(mf, x)
            worst = max(worst, abs(embedding.xi(mf, y) - x) / max(1.0, x))
            # Relative step: eta' spans ~1/x to ~2/x, so an absolute step
            # is either too coarse or drowned at one end of the range.
            h = 1e-4 * x
            fd = (embedding.eta(mf, x + h) - embedding.eta(mf, x - h)) / (2.0 * h)
            want = 1.0 / math.sqrt(mf.f(x))
            worst = max(worst, abs(fd - want) / want)
    return worst <= 1e-6, f"max rel residual {worst:.2e} (roundtrip and eta')"


def _check_embedding(rng):
    worst = 0.0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        for n in (2, 3, 4):
            for _ in range(10):
                p = _random_point(rng, n)
                y = embedding.embed(mf, p)
                worst = max(worst, float(np.max(np.abs(embedding.unembed(mf, y) - p)
                                                / np.maximum(p, 1.0))))
                u = rng.standard_normal(n)
                v = rng.standard_normal(n)
                lhs = embedding.minkowski_inner(
                    embedding.pushforward(mf, p, u), embedding.pushforward(mf, p, v)
                )
                rhs = float(u @ geometry.metric(mf, p) @ v)
                worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
    return worst <= 1e-7, f"max rel residual {worst:.2e} (roundtrip and isometry)"


def _check_weingarten(rng):
    # The stored form satisfies matrix[i, j] / sqrt(f(x_i)) =
    # <-dNhat(Phi_* d/dx_i), e_j> for the future-pointing unit normal
    # Nhat = N / sqrt(gap / f(t)); verified here against a centered
    # difference of the normal field along coordinate lines.
    def unit_normal(mf, x):
        nv = embedding.normal(mf, x)
        t = float(np.sum(x))
        gap = mf.f(t) - float(np.sum(mf.f(x)))
        return nv / math.sqrt(gap / mf.f(t))

    worst = 0.0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        for n in (2, 3):
            for _ in range(6):
                p = _random_point(rng, n, -0.7, 0.7)
                sh = embedding.shape_operator(mf, p)
                basis = embedding.tangent_basis(mf, p)
                fx = mf.f(p)
                for a in range(n):
                    h = 1e-6 * max(1.0, p[a])
                    pp = p.copy()
                    pp[a] += h
                    pm = p.copy()
                    pm[a] -= h
                    dn = (unit_normal(mf, pp) - unit_normal(mf, pm)) / (2.0 * h)
                    got = np.array(
                        [embedding.minkowski_inner(-dn, basis[j]) for j in range(n)]
                    )
                    want = sh.matrix[a] / math.sqrt(fx[a])
                    worst = max(worst, float(np.max(np.abs(got - want))))
    return worst <= 1e-4, f"max abs error {worst:.2e}"


def _check_gauss_vs_intrinsic(rng):
    worst = 0.0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        for n in (2, 3):
            for _ in range(6):
                p = _random_point(rng, n, -0.7, 0.7)
                u = rng.standard_normal(n)
                v = rng.standard_normal(n)
                k_embed = curvature.sectional(mf, p, u, v)
                k_fd = sectional_fd(mf, p, u, v)
                worst = max(worst, abs(k_embed - k_fd))
    return worst <= 1e-3, f"max abs gap Gauss equation vs curvature tensor {worst:.2e}"


def _check_energy(rng, quick):
    mf = families.family("trigamma")
    worst = 0.0
    reps = 2 if quick else 5
    for n in (2, 3):
        for _ in range(reps):
            p = _random_point(rng, n, -0.7, 0.7)
            v = rng.standard_normal(n)
            v /= geometry.norm(geometry.metric(mf, p), geometry.Tangent(v, p))
            path = geodesics.geodesic_ivp(mf, p, v, 10.0, samples=41)
            e = np.array(
                [
                    float(vv @ geometry.metric(mf, pp) @ vv)
                    for pp, vv in zip(path.points, path.velocities)
                ]
            )
            worst = max(worst, float(np.max(np.abs(e - path.energy)) / path.energy))
    return worst <= 1e-6, f"max relative drift over T=10 {worst:.2e}"


def _check_reversal(rng):
    mf = families.family("trigamma")
    worst = 0.0
    for n in (2, 3):
        for _ in range(4):
            p = _random_point(rng, n, -0.7, 0.7)
            v = rng.standard_normal(n)
            fwd = geodesics.geodesic_ivp(mf, p, v, 1.0, samples=2)
            back = geodesics.geodesic_ivp(
                mf, fwd.points[-1], -fwd.velocities[-1], 1.0, samples=2
            )
            worst = max(worst, float(np.max(np.abs(back.points[-1] - p))))
    return worst <= 1e-6, f"max return gap after time reversal {worst:.2e}"


def _check_exp_log(rng, quick):
    mf = families.family("trigamma")
    worst = 0.0
    reps = 4 if quick else 12
    for n in (2, 3):
        for _ in range(reps):
            p = _random_point(rng, n, -0.7, 0.7)
            v = rng.standard_normal(n)
            v *= rng.uniform(0.2, 2.5) / geometry.norm(
                geometry.metric(mf, p), geometry.Tangent(v, p)
            )
            q = geodesics.exp_map(mf, p, v)
            got = geodesics.log_map(mf, p, q).initial_velocity.components
            worst = max(worst, float(np.max(np.abs(got - v))))
    return worst <= 1e-5, f"max velocity gap {worst:.2e}"


def _check_diagonal():
    mf = families.family("trigamma")
    path = geodesics.diagonal_geodesic(mf, 1.0, 0.8, 3.0, samples=61)
    x = path.points[:, 0]
    xd = path.velocities[:, 0]
    c = np.array([math.sqrt(geodesics.diagonal_q(mf, float(s))) for s in x]) * xd
    drift = float(np.max(np.abs(c - c[0])) / abs(c[0]))
    xs = np.logspace(-2, 2, 100)
    dup = np.array([geodesics.diagonal_q(mf, float(s)) for s in xs])
    want = 0.5 * (polygamma(1, xs) - polygamma(1, xs + 0.5))
    dup_err = float(np.max(np.abs(dup - want) / want))
    ok = drift <= 1e-8 and dup_err <= 1e-10
    return ok, f"conservation drift {drift:.2e}, duplication residual {dup_err:.2e}"


def _check_superadditivity(rng, quick):
    reps = 300 if quick else 1000
    bad = 0
    for name in ("trigamma", "rational"):
        mf = families.family(name)
        x = np.exp(rng.uniform(-6.9, 6.9, reps))
        y = np.exp(rng.uniform(-6.9, 6.9, reps))
        fx, fy, fs = mf.f(x), mf.f(y), mf.f(x + y)
        bad += int(np.sum(fs - fx - fy <= 0.0))
        rx = fx / mf.df(x)
        ry = fy / mf.df(y)
        rs = fs / mf.df(x + y)
        bad += int(np.sum(rs - rx - ry <= 0.0))
    return bad == 0, f"{bad} violations of strict superadditivity"


def _check_frechet(rng, quick):
    mf = families.family("trigamma")
    a = np.array([0.6, 2.5])
    b = np.array([3.0, 0.9])
    mid = frechet.frechet_mean(mf, [a, b]).mean
    da = geodesics.distance(mf, mid, a)
    db = geodesics.distance(mf, mid, b)
    gap = abs(da - db)
    if quick:
        return gap <= 1e-5, f"midpoint equidistance gap {gap:.2e}"
    pts = [_random_point(rng, 2, -0.5, 0.5) for _ in range(4)]
    m1 = frechet.frechet_mean(mf, pts).mean
    m2 = frechet.frechet_mean(mf, pts[::-1]).mean
    perm = float(np.max(np.abs(m1 - m2)))
    ok = gap <= 1e-5 and perm <= 1e-7
    return ok, f"midpoint gap {gap:.2e}, permutation gap {perm:.2e}"


def _report_grid_minimum(quick):
    mf = families.family("trigamma")
    res = 60 if quick else 160
    axis, grid = curvature.curvature_grid(mf, 1e-3, 1e3, res)
    kmin = float(grid.min())
    i, j = np.unravel_index(int(grid.argmin()), grid.shape)
    ok = kmin >= -0.5 - 1e-3
    verdict = "consistent with" if ok else "VIOLATES"
    return (
        f"grid min {kmin:.6f} at (x, y) = ({axis[j]:.4g}, {axis[i]:.4g}); "
        f"{verdict} the conjectured bound -1/2"
    )


def _report_monotonicity(quick):
    mf = families.family("trigamma")
    res = 50 if quick else 120
    axis, grid = curvature.curvature_grid(mf, 1e-3, 1e3, res)
    # K should decrease in each variable per the observed monotonicity
    dx = np.diff(grid, axis=1)
    dy = np.diff(grid, axis=0)
    nup = int(np.sum(dx > 1e-12)) + int(np.sum(dy > 1e-12))
    total = dx.size + dy.size
    if nup == 0:
        return f"K decreasing in x and y across all {total} grid steps"
    return f"{nup} of {total} grid steps increase; observed monotonicity fails there"


def _report_dimension_gap(quick):
    mf = families.family("trigamma")
    res = 40 if quick else 80
    axis, diff = curvature.curvature_grid(
        mf, 0.005, 0.1, res, log_spacing=False, z=0.01
    )
    dmin = float(diff.min())
    dmax = float(diff.max())
    both = dmin < 0.0 < dmax
    word = "changes sign" if both else "does NOT change sign"
    return f"K3(x,y,0.01) - K2(x,y) in [{dmin:.3e}, {dmax:.3e}]; {word} on the square"


def run_validation(seed=0, quick=False):
    """Run every check; returns a list of CheckResult."""
    rng = np.random.default_rng(seed)
    results = []

    def add(name, fn, *args):
        try:
            ok, detail = fn(*args)
            results.append(CheckResult(name, PASS if ok else FAIL, detail))
        except Exception as exc:  # a crashed check is a failed check
            results.append(CheckResult(name, FAIL, f"raised {exc!r}"))

    def report(name, fn, *args):
        try:
            results.append(CheckResult(name, REPORT, fn(*args)))
        except Exception as exc:
            results.append(CheckResult(name, FAIL, f"raised {exc!r}"))

    add("polygamma recurrence", _check_polygamma_recurrence)
    add("polygamma reflection", _check_polygamma_reflection)
    add("family assumptions", _check_assumptions)
    add("f' against finite differences", _check_derivatives)
    add("metric inverse", _check_metric_inverse, rng)
    add("christoffel against finite differences", _check_christoffel_fd, rng)
    add("eta/xi inverse pair", _check_eta_xi)
    add("embedding roundtrip and isometry", _check_embedding, rng)
    add("weingarten map against finite differences", _check_weingarten, rng)
    add("gauss equation against curvature tensor", _check_gauss_vs_intrinsic, rng)
    add("geodesic energy conservation", _check_energy, rng, quick)
    add("geodesic time reversal", _check_reversal, rng)
    add("exp/log roundtrip", _check_exp_log, rng, quick)
    add("diagonal conservation and duplication", _check_diagonal)
    add("superadditivity", _check_superadditivity, rng, quick)
    add("frechet mean properties", _check_frechet, rng, quick)
    report("curvature lower bound (conjecture)", _report_grid_minimum, quick)
    report("curvature monotonicity (observed)", _report_monotonicity, quick)
    report("dimension-gap sign change", _report_dimension_gap, quick)
    return results
