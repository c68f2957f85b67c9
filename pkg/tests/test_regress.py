"""Moment sources, fitting, and the error diagnostics.

Closed-form moments are checked against adaptive quadrature; the
Laguerre fit coefficients of the exponential target are checked against
a hand-derived double sum, which exercises the entire moment-to-model
path with an answer obtained independently of the package.
"""

import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad

from biopoly.exact import SpaceSpec
from biopoly.families import FamilySpec
from biopoly.regress import (DEFAULT_PANELS, EvenPanelParityError, FitModel,
                             MomentShortfallError, NonUniformGridError,
                             SampleSet, UnsupportedSpaceError, bic_score, fit,
                             l2_error, max_abs_error, moments_expdecay,
                             moments_from_samples, moments_gamma,
                             moments_quadrature, rms_error, space_measure)
from biopoly.targets import damped_wiggle, exp_decay, gamma_density


# ----------------------------------------------------------------------
# moment sources
# ----------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [1, 2, Fraction(1, 2)])
def test_expdecay_moments_half_line_match_quadrature(alpha):
    space = SpaceSpec.half_line()
    mom = moments_expdecay(space, 6, alpha)
    a = float(alpha)
    for i, mu in enumerate(mom.mu):
        oracle, _ = quad(lambda x: x ** i * math.exp(-a * x) * math.exp(-x),
                         0, np.inf)
        assert mu == pytest.approx(oracle, rel=1e-10)


def test_expdecay_moments_bounded_match_quadrature():
    space = SpaceSpec.bounded(0, 10)
    mom = moments_expdecay(space, 6, 1)
    for i, mu in enumerate(mom.mu):
        oracle, _ = quad(lambda x: x ** i * math.exp(-x), 0, 10)
        assert mu == pytest.approx(oracle, rel=1e-10)


def test_gamma_moments_match_quadrature():
    half = moments_gamma(SpaceSpec.half_line(), 5)
    for i, mu in enumerate(half.mu):
        oracle, _ = quad(lambda x: x ** i * (x * math.exp(-x)) * math.exp(-x),
                         0, np.inf)
        assert mu == pytest.approx(oracle, rel=1e-10)
    bounded = moments_gamma(SpaceSpec.bounded(0, 10), 5)
    for i, mu in enumerate(bounded.mu):
        oracle, _ = quad(lambda x: x ** i * x * math.exp(-x), 0, 10)
        assert mu == pytest.approx(oracle, rel=1e-10)


def test_gamma_moment_closed_form_on_half_line():
    mom = moments_gamma(SpaceSpec.half_line(), 8)
    for i, e in enumerate(mom.exact_values()):
        assert e == Fraction(math.factorial(i + 1), 2 ** (i + 2))


def test_analytic_moments_reject_foreign_spaces():
    with pytest.raises(UnsupportedSpaceError):
        moments_expdecay(SpaceSpec.bounded(-1, 1), 3)
    with pytest.raises(UnsupportedSpaceError):
        moments_gamma(SpaceSpec.chebyshev(), 3)
    with pytest.raises(ValueError):
        moments_expdecay(SpaceSpec.half_line(), 3, alpha=0)


def test_simpson_moments_exact_on_cubics():
    """Composite Simpson integrates degree-3 integrands exactly."""
    space = SpaceSpec.bounded(0, 1)
    xs = np.linspace(0.0, 1.0, 101)
    ys = xs ** 3 - 2.0 * xs ** 2 + 0.25            # f of degree 3
    mom = moments_from_samples(SampleSet(xs, ys), space, 0)
    exact = Fraction(1, 4) - Fraction(2, 3) + Fraction(1, 4)
    assert mom.mu[0] == pytest.approx(float(exact), abs=1e-12)
    # degree-3 total integrand: x * (quadratic)
    ys2 = xs ** 2 - xs
    mom2 = moments_from_samples(SampleSet(xs, ys2), space, 1)
    assert mom2.mu[1] == pytest.approx(float(Fraction(1, 4) - Fraction(1, 3)),
                                       abs=1e-12)


def test_quadrature_moments_exact_on_cubics():
    # exactness applies to the whole integrand x^i f(x); keep its total
    # degree at three
    space = SpaceSpec.bounded(-1, 1)
    mom = moments_quadrature(lambda x: x ** 3 - x, space, 0, n_panels=16)
    assert mom.mu[0] == pytest.approx(0.0, abs=1e-12)
    mom = moments_quadrature(lambda x: x * x - x, space, 1, n_panels=16)
    # <f, x^1> = int (x^3 - x^2) = -2/3
    assert mom.mu[1] == pytest.approx(-2.0 / 3.0, abs=1e-12)


def test_sample_moment_input_validation():
    xs = np.linspace(0.0, 1.0, 101)
    crooked = np.sqrt(np.linspace(0.01, 1.0, 101))
    with pytest.raises(NonUniformGridError):
        moments_from_samples(SampleSet(crooked, np.ones(101)),
                             SpaceSpec.bounded(0, 1), 1)
    with pytest.raises(EvenPanelParityError):
        moments_from_samples(SampleSet(xs[:-1], xs[:-1]),
                             SpaceSpec.bounded(0, 1), 1)
    with pytest.raises(UnsupportedSpaceError):
        moments_from_samples(SampleSet(xs, xs), SpaceSpec.half_line(), 1)


def test_sample_set_validation():
    with pytest.raises(ValueError):
        SampleSet(np.array([0.0, 1.0, 0.5]), np.zeros(3))
    with pytest.raises(ValueError):
        SampleSet(np.array([0.0, 1.0]), np.zeros(3))


# ----------------------------------------------------------------------
# the fitting path end to end
# ----------------------------------------------------------------------

def _laguerre_expdecay_coeff(n: int, k: int) -> Fraction:
    """Independent closed form for the order-k fit coefficient of e^{-x}.

    Derived by expanding <e^{-x}, beta_n> through the family ladder:
    each degree j >= n contributes its x^n weight times the spectral
    coefficient <e^{-x}, p_j> = sum over the ladder, all rational.
    """
    total = Fraction(0)
    for j in range(n, k + 1):
        a_nj = Fraction((-1) ** n, math.factorial(n)) * math.comb(j, n)
        spectral = sum(Fraction((-1) ** e, math.factorial(e)) * math.comb(j, e)
                       * Fraction(math.factorial(e), 2 ** (e + 1))
                       for e in range(j + 1))
        total += a_nj * spectral
    return total


@pytest.mark.parametrize("k", [0, 1, 3, 6, 10])
def test_laguerre_expdecay_fit_matches_hand_derivation(k):
    fam = FamilySpec.laguerre()
    model = fit(fam, k, moments_expdecay(fam.space, k))
    for n, c in zip(model.exponents, model.coeffs_exact):
        assert c == _laguerre_expdecay_coeff(n, k), (k, n)


def test_fit_requires_enough_moments():
    fam = FamilySpec.laguerre()
    with pytest.raises(MomentShortfallError):
        fit(fam, 8, moments_expdecay(fam.space, 5))


def test_fit_removal_bounds():
    fam = FamilySpec.laguerre()
    mom = moments_expdecay(fam.space, 4)
    with pytest.raises(ValueError):
        fit(fam, 4, mom, removals=5)
    model = fit(fam, 4, mom, removals=2)
    assert model.n_params == 3
    assert len(model.removed) == 2


def test_downgrade_error_identity():
    """l2_error after one removal: new^2 == old^2 + score, to 1e-8."""
    fam = FamilySpec.laguerre()
    k = 8
    mom = moments_expdecay(fam.space, k)
    full = fit(fam, k, mom)
    pruned = fit(fam, k, mom, removals=1)
    ell = pruned.removed[0]
    # score of the removed exponent from the full model's exact pieces
    from biopoly.biorth import build
    s = build(fam, k)
    c = dict(zip(full.exponents, full.coeffs))[ell]
    score = c * c / float(s.gram_entry(ell, ell))
    old = l2_error(full, exp_decay)
    new = l2_error(pruned, exp_decay)
    assert new ** 2 == pytest.approx(old ** 2 + score, rel=1e-8)


@pytest.mark.parametrize("fam,target,moments_of,kmax", [
    (FamilySpec.laguerre(), exp_decay, moments_expdecay, 14),
    (FamilySpec.legendre_shifted(10), gamma_density, moments_gamma, 12),
], ids=["laguerre-expdecay", "legendre0b-gamma"])
def test_l2_error_monotone_in_k(fam, target, moments_of, kmax):
    mom = moments_of(fam.space, kmax)
    last = None
    for k in range(kmax + 1):
        err = l2_error(fit(fam, k, mom), target)
        if last is not None:
            assert err <= last * (1.0 + 1e-9), k
        last = err


def test_l2_error_monotone_in_k_symmetric():
    fam = FamilySpec.legendre_sym()
    mom = moments_quadrature(damped_wiggle, fam.space, 20)
    last = None
    for k in range(21):
        err = l2_error(fit(fam, k, mom), damped_wiggle)
        if last is not None:
            assert err <= last * (1.0 + 1e-9), k
        last = err


# ----------------------------------------------------------------------
# diagnostics
# ----------------------------------------------------------------------

def test_l2_error_of_exact_polynomial_is_zero():
    fam = FamilySpec.legendre_shifted(1)
    mom = moments_quadrature(lambda x: 2.0 * x - 1.0, fam.space, 3)
    model = fit(fam, 3, mom)
    assert l2_error(model, lambda x: 2.0 * x - 1.0) < 1e-13


def test_l2_error_against_samples_matches_callable_on_dense_grid():
    fam = FamilySpec.legendre_shifted(1)
    xs = np.linspace(0.0, 1.0, 2001)
    target = lambda x: np.sin(3.0 * x)
    samples = SampleSet(xs, target(xs))
    mom = moments_from_samples(samples, fam.space, 5)
    model = fit(fam, 5, mom)
    assert l2_error(model, samples) == pytest.approx(
        l2_error(model, target), rel=1e-6)


def test_rms_error_is_l2_over_root_measure():
    fam = FamilySpec.legendre_sym()
    mom = moments_quadrature(damped_wiggle, fam.space, 10)
    model = fit(fam, 10, mom)
    assert rms_error(model, damped_wiggle) == pytest.approx(
        l2_error(model, damped_wiggle) / math.sqrt(2.0), rel=1e-14)
    assert space_measure(FamilySpec.chebyshev().space) == pytest.approx(math.pi)
    assert space_measure(FamilySpec.laguerre().space) == 1.0
    assert space_measure(SpaceSpec.bounded(0, 10)) == 10.0


def test_max_abs_error_default_windows():
    fam = FamilySpec.laguerre()
    mom = moments_expdecay(fam.space, 6)
    model = fit(fam, 6, mom)
    err_default = max_abs_error(model, exp_decay)
    err_explicit = max_abs_error(model, exp_decay, 0.0, 10.0)
    assert err_default == err_explicit


def test_bic_score_definition():
    fam = FamilySpec.legendre_shifted(1)
    xs = np.linspace(0.0, 1.0, 11)
    ys = 2.0 * xs + 1.0 + np.array([0.01, -0.02, 0.0, 0.03, -0.01, 0.0,
                                    0.02, -0.03, 0.01, 0.0, -0.01])
    samples = SampleSet(xs, ys)
    mom = moments_from_samples(samples, fam.space, 1)
    model = fit(fam, 1, mom)
    resid = ys - model(xs)
    expect = 2 * math.log(11) + 11 * math.log(float(np.mean(resid ** 2)))
    assert bic_score(model, samples) == pytest.approx(expect, rel=1e-12)


def test_bic_zero_residual_is_minus_infinity():
    fam = FamilySpec.legendre_shifted(1)
    xs = np.linspace(0.0, 1.0, 5)
    ys = np.full(5, 3.0)
    samples = SampleSet(xs, ys)
    mom = moments_from_samples(samples, fam.space, 0)
    model = fit(fam, 0, mom)
    # an exactly representable constant fits with zero residual
    if np.allclose(model(xs), ys, atol=1e-15):
        assert bic_score(model, samples) == -np.inf


def test_fit_model_dense_coeffs_and_call():
    fam = FamilySpec.legendre_shifted(1)
    mom = moments_quadrature(lambda x: x, fam.space, 2)
    model = fit(fam, 2, mom)
    dense = model.dense_coeffs()
    assert dense.shape == (3,)
    xs = np.array([0.0, 0.5, 1.0])
    assert model(xs) == pytest.approx(xs, abs=1e-12)
