"""Metric-generating families and the stable f-difference helpers."""

import numpy as np
import pytest
import scipy.special

from dirgeo.families import (
    AssumptionViolation,
    MetricFunction,
    f_difference,
    f_excess,
    family,
    ratio_difference,
    superadditive_gap,
    verify_assumptions,
)


def test_family_lookup():
    assert family("trigamma").label == "trigamma"
    assert family("rational").label == "rational"
    assert family("trigamma") is family("trigamma")  # cached
    with pytest.raises(ValueError):
        family("cubic")


def test_trigamma_f_is_reciprocal_trigamma():
    mf = family("trigamma")
    x = np.logspace(-3, 3, 61)
    assert np.allclose(mf.f(x), 1.0 / scipy.special.polygamma(1, x), rtol=1e-13)


def test_rational_f_closed_form():
    mf = family("rational")
    x = np.logspace(-3, 3, 61)
    expect = (2.0 * x + 1.0) * x * x / (2.0 * x * x + 2.0 * x + 1.0)
    assert np.allclose(mf.f(x), expect, rtol=1e-15)


def test_families_agree_at_both_ends():
    # Both behave like x^2 near zero and x - 1/2 at infinity.
    tri, rat = family("trigamma"), family("rational")
    for x in (1e-6, 1e-5):
        assert tri.f(x) == pytest.approx(x * x, rel=2e-5)
        assert rat.f(x) == pytest.approx(x * x, rel=2e-5)
    for x in (1e5, 1e6):
        assert tri.f(x) == pytest.approx(x - 0.5, rel=1e-6)
        assert rat.f(x) == pytest.approx(x - 0.5, rel=1e-6)


def test_derivatives_match_finite_differences(mf):
    # Relative step: at large x the difference df(x+h) - df(x-h) sits ten
    # decades below df itself, so a smaller h would only measure roundoff.
    for x in np.logspace(-2.5, 2.5, 21):
        h = 1e-4 * x
        fd1 = (mf.f(x + h) - mf.f(x - h)) / (2.0 * h)
        fd2 = (mf.df(x + h) - mf.df(x - h)) / (2.0 * h)
        assert mf.df(x) == pytest.approx(fd1, rel=1e-7)
        assert mf.d2f(x) == pytest.approx(fd2, rel=1e-6)


def test_verify_assumptions_clean(mf):
    assert verify_assumptions(mf) == []


def test_verify_assumptions_flags_concave_f():
    # log(1+x) is concave, so f'' > 0 must fail.
    broken = MetricFunction(
        label="log1p",
        f=lambda x: np.log1p(x),
        df=lambda x: 1.0 / (1.0 + x),
        d2f=lambda x: -1.0 / (1.0 + x) ** 2,
    )
    violations = verify_assumptions(broken, grid=np.logspace(-2, 2, 41))
    assert violations
    assert any(v.check == "f'' > 0" for v in violations)
    assert all(isinstance(v, AssumptionViolation) for v in violations)


# ---------------------------------------------------------------------------
# stable differences; reference values from 50-digit arithmetic


def test_f_excess_trigamma():
    mf = family("trigamma")
    refs = {0.5: -0.29735763271532445711, 10.0: -0.49125375037531527425, 1e8: -0.4999999991666666625}
    for x, ref in refs.items():
        assert f_excess(mf, x) == pytest.approx(ref, rel=1e-13)
    # vector form agrees with scalars
    xs = np.array(sorted(refs))
    assert np.allclose(f_excess(mf, xs), [refs[x] for x in xs], rtol=1e-13)


def test_f_excess_rational_exact():
    mf = family("rational")
    x = np.logspace(-3, 12, 31)
    expect = -(x * x + x) / (2.0 * x * x + 2.0 * x + 1.0)
    assert np.allclose(f_excess(mf, x), expect, rtol=1e-15)


def test_f_difference_narrow_reference():
    mf = family("trigamma")
    # (a, h) -> f(a+h) - f(a); the h = 1e-9 entry is 10 decades below a,
    # far past where the direct subtraction has any digits left.
    refs = [
        (5.0, 1e-9, 9.9603709205912791714e-10),
        (1e8, 1e3, 999.99999999999999167),
        (2.0, 1e-5, 9.7156781459038244299e-6),
    ]
    for a, h, ref in refs:
        got = float(f_difference(mf, a, h))
        assert got == pytest.approx(ref, rel=1e-12)


def test_f_difference_branch_crossover(mf):
    # No jump at the narrow-interval switch (h = 1e-3 a): the two branch
    # results differ by exactly the sliver between their endpoints.
    for a in (0.1, 3.0, 200.0):
        h_lo, h_hi = 0.999e-3 * a, 1.001e-3 * a
        lo = float(f_difference(mf, a, h_lo))  # quadrature branch
        hi = float(f_difference(mf, a, h_hi))  # direct branch
        sliver = mf.f(a + h_hi) - mf.f(a + h_lo)
        assert hi - lo == pytest.approx(sliver, rel=1e-6)
        assert hi == pytest.approx(mf.f(a + h_hi) - mf.f(a), rel=1e-9)


def test_f_difference_vector():
    mf = family("rational")
    a = np.array([1.0, 10.0, 100.0])
    h = np.array([1e-8, 5.0, 1e-6])
    out = f_difference(mf, a, h)
    assert out.shape == (3,)
    for i in range(3):
        assert out[i] == pytest.approx(float(f_difference(mf, a[i], h[i])), rel=1e-14)


def test_ratio_difference_reference():
    mf = family("trigamma")
    refs = [
        (5.0, 1e-9, -4.8220633169589395746e-11),
        (1e12, 0.05, -5.00000000000475e-26),
        (0.5, 1e-7, -8.1095576257152749298e-7),
    ]
    for a, h, ref in refs:
        assert ratio_difference(mf, a, h) == pytest.approx(ref, rel=1e-10)


def test_ratio_difference_matches_direct_when_wide(mf):
    for a, h in [(0.5, 2.0), (3.0, 0.5), (50.0, 10.0)]:
        direct = mf.ratio(a + h) - mf.ratio(a)
        assert ratio_difference(mf, a, h) == pytest.approx(direct, rel=1e-13)


def test_superadditive_gap_reference():
    mf = family("trigamma")
    refs = [
        ([1e12, 0.05], 0.047509540684045106198),
        ([1e12, 1e12], 0.499999999999875),
        ([5.0, 1e-9], 9.9603709105912791714e-10),
        ([0.1, 0.2, 0.3], 0.14541935766031940458),
    ]
    for xs, ref in refs:
        assert superadditive_gap(mf, np.array(xs)) == pytest.approx(ref, rel=1e-12)


def test_superadditive_gap_matches_direct_where_safe(mf):
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = np.exp(rng.uniform(-2.0, 2.0, rng.integers(2, 5)))
        direct = mf.f(x.sum()) - mf.f(x).sum()
        assert superadditive_gap(mf, x) == pytest.approx(direct, rel=1e-10)


def test_superadditive_gap_positive_in_hostile_corners(mf):
    # Gap stays positive (and finite) where naive evaluation returns 0 or noise.
    cases = [
        [1e15, 1e-6],
        [1e12, 1e12, 1e12],
        [7.0, 1e-12],
        [1e-9, 1e-9],
    ]
    for xs in cases:
        gap = superadditive_gap(mf, np.array(xs))
        assert np.isfinite(gap) and gap > 0.0
