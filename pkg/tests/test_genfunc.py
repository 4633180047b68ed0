from fractions import Fraction as F

import pytest

from betamoments.combinatorics import catalan
from betamoments.ensembles import AParams, EnsembleSpec, a_params
from betamoments.exact import PowerSeries, series_div, series_mul
from betamoments.genfunc import (
    GeneratingFunctionMismatch,
    QuadraticFE,
    SingularEquationError,
    fe_laguerre,
    functional_equation,
    generating_function,
    gf_delay_times,
    gf_jacobi_gamma1,
    gf_jacobi_general,
    gf_laguerre,
    solve_quadratic_fe,
)
from betamoments.moments import MomentContext
from betamoments.verify import PARAMETER_SETS

ALL_SPECS = [s for specs in PARAMETER_SETS.values() for s in specs]


def const(c, order):
    return PowerSeries.constant(c, order)


def test_trivial_equation():
    eq = QuadraticFE(const(1, 4), const(0, 4), const(0, 4))
    assert solve_quadratic_fe(eq, 4) == const(1, 4)


def test_order_zero():
    eq = fe_laguerre(AParams.of(1, 1, 2), 0)
    assert solve_quadratic_fe(eq, 0).coeffs == (1,)


def test_laguerre_catalan_limit():
    a2 = F(7, 3)
    F_ = gf_laguerre(AParams.of(a2, a2, 2 * a2), 6)
    assert F_.coeffs == tuple(catalan(n) * a2**n for n in range(7))


def test_gamma1_half_half():
    g = gf_jacobi_gamma1(AParams.of(F(1, 2), F(1, 2), 1), 3)
    assert g.coeffs == (1, F(1, 2), F(3, 8), F(5, 16))


def test_gamma1_second_coefficient():
    a = AParams.of(F(50, 101), F(51, 101), 1)
    g = gf_jacobi_gamma1(a, 2)
    assert g[1] == a.a2
    assert g[2] == a.a2 * (1 - a.a1 * a.a2)


def test_laguerre_low_coefficients():
    a = AParams.of(F(3, 4), F(5, 2), F(13, 4))
    g = gf_laguerre(a, 3)
    assert (g[1], g[2], g[3]) == (a.a2, a.a2 * a.a3, a.a2 * (a.a3**2 + a.a1 * a.a2))


def test_general_low_coefficients():
    a = AParams.of(F(2, 5), F(1, 3), F(11, 15))
    g = gf_jacobi_general(a, 2)
    assert (g[1], g[2]) == (a.a2, a.a2 * (a.a3 - a.a1 * a.a2))


def test_general_with_unit_a3_reduces():
    a = AParams.of(F(4, 9), F(5, 9), 1)
    assert gf_jacobi_general(a, 15) == gf_jacobi_gamma1(a, 15)


def test_delay_series():
    assert gf_delay_times(AParams.of(1, 1, 1), 5).coeffs == (1, 1, 2, 6, 22, 90)
    t = F(3, 2)
    assert gf_delay_times(AParams.of(1, t, t), 4)[4] == 22 * t**4


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_residual_vanishes(spec):
    eq = functional_equation(spec, 30)
    assert eq.residual(generating_function(spec, 30)).is_zero()


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_coefficients_match_recurrence(spec):
    g = generating_function(spec, 30)
    ctx = MomentContext(spec)
    assert [g[n] for n in range(1, 31)] == [ctx.recurrence(n) for n in range(1, 31)]


@pytest.mark.parametrize("spec", PARAMETER_SETS["jacobi_gamma1"], ids=str)
def test_square_root_identity(spec):
    a = a_params(spec)
    g = generating_function(spec, 20)
    x = PowerSeries.x(20)
    lhs = 2 * a.a1 * (g - 1) + 1
    assert series_mul(lhs, lhs) == 1 + series_div(4 * a.a1 * a.a2 * x, 1 - x)


def test_singular_equation():
    eq = QuadraticFE(PowerSeries.from_coeffs([1, 1], 3), const(1, 3), const(0, 3))
    with pytest.raises(SingularEquationError, match="singular functional equation"):
        solve_quadratic_fe(eq, 3)


def test_bad_constant_term():
    eq = QuadraticFE(const(2, 3), const(0, 3), const(0, 3))
    with pytest.raises(SingularEquationError):
        solve_quadratic_fe(eq, 3)


def test_gamma1_needs_nonzero_a1():
    with pytest.raises(ZeroDivisionError):
        gf_jacobi_gamma1(AParams.of(0, 1, 1), 3)


def test_mismatch_is_loud(monkeypatch):
    from betamoments import genfunc

    real = genfunc.solve_quadratic_fe
    bump = PowerSeries.from_coeffs([0, 0, 1], 4)
    monkeypatch.setattr(genfunc, "solve_quadratic_fe", lambda eq, order: real(eq, order) + bump)
    with pytest.raises(GeneratingFunctionMismatch, match="generating-function mismatch"):
        gf_jacobi_gamma1(AParams.of(F(1, 2), F(1, 2), 1), 4)


def test_mixed_spec_from_generating_function():
    spec = EnsembleSpec("laguerre", alpha=0, epsilon=1, beta=2, N=2)
    assert generating_function(spec, 5).coeffs == tuple(catalan(n) * 2**n for n in range(6))
