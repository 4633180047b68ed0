"""Moment generating functions F(x) = sum_n <T^n> x^n as truncated series.

Every ensemble's F satisfies a quadratic equation which, after clearing
the (1 - x) or (1 - A3 x) denominators, is written as

    F = p0 + p1 (F - 1) + p2 (F - 1)**2

with polynomial p0, p1, p2. :func:`solve_quadratic_fe` solves it order by
order for G = F - 1, which picks the branch with F(0) = 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ensembles import (
    DELAY_TIMES,
    JACOBI_GAMMA1,
    JACOBI_GENERAL,
    LAGUERRE,
    AParams,
    EnsembleSpec,
    a_params,
)
from .exact import PowerSeries, series_div, series_mul, series_sqrt


class SingularEquationError(ArithmeticError):
    pass


class GeneratingFunctionMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class QuadraticFE:
    p0: PowerSeries
    p1: PowerSeries
    p2: PowerSeries

    def residual(self, F: PowerSeries) -> PowerSeries:
        """p0 + p1 G + p2 G^2 - F, which should vanish for a solution."""
        G = F - 1
        return self.p0 + series_mul(self.p1, G) + series_mul(self.p2, series_mul(G, G)) - F


def _coeff(s: PowerSeries, n: int) -> Fraction:
    return s.coeffs[n] if n <= s.order else Fraction(0)


def solve_quadratic_fe(eq: QuadraticFE, order: int) -> PowerSeries:
    """Power-series solution with F(0) = 1 through x**order.

    With G = F - 1 and G_0 = 0,
    (1 - p1_0) G_n = p0_n + sum_{j>=1} p1_j G_{n-j} + sum_j p2_j (G^2)_{n-j},
    and (G^2)_k only involves G_1..G_{k-1}.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    if _coeff(eq.p0, 0) != 1:
        raise SingularEquationError("p0 must have constant term 1 so that F(0) = 1")
    lead = 1 - _coeff(eq.p1, 0)
    if lead == 0:
        raise SingularEquationError("singular functional equation")
    G = [Fraction(0)] * (order + 1)
    G2 = [Fraction(0)] * (order + 1)  # coefficients of G**2
    for n in range(1, order + 1):
        G2[n] = sum((G[k] * G[n - k] for k in range(1, n)), Fraction(0))
        acc = _coeff(eq.p0, n)
        acc += sum((_coeff(eq.p1, j) * G[n - j] for j in range(1, n + 1)), Fraction(0))
        acc += sum((_coeff(eq.p2, j) * G2[n - j] for j in range(0, n + 1)), Fraction(0))
        G[n] = acc / lead
    G[0] = Fraction(1)
    return PowerSeries(order, tuple(G))


def _poly(coeffs, order):
    return PowerSeries.from_coeffs(coeffs, order)


def fe_jacobi_gamma1(a: AParams, order: int) -> QuadraticFE:
    # (1-x) F = (1-x) + A2 x - A1 (1-x) G^2
    return QuadraticFE(_poly([1, a.a2], order), _poly([0, 1], order), _poly([-a.a1, a.a1], order))


def fe_laguerre(a: AParams, order: int) -> QuadraticFE:
    # (1 - A3 x) G = A2 x + A1 x G^2
    return QuadraticFE(_poly([1, a.a2], order), _poly([0, a.a3], order), _poly([0, a.a1], order))


def fe_jacobi_general(a: AParams, order: int) -> QuadraticFE:
    # (1 - A3 x) G = A2 x - A1 (1-x) G^2
    return QuadraticFE(_poly([1, a.a2], order), _poly([0, a.a3], order), _poly([-a.a1, a.a1], order))


def fe_delay_times(a: AParams, order: int) -> QuadraticFE:
    # <T^n> = A3 <T^{n-1}> + A1 D_n (n >= 2), <T> = A2, and D_n = [x^n] G^2
    return QuadraticFE(_poly([1, a.a2], order), _poly([0, a.a3], order), _poly([a.a1], order))


def gf_jacobi_gamma1_sqrt(a: AParams, order: int) -> PowerSeries:
    """F = 1 - 1/(2A1) + sqrt(1 + 4 A1 A2 x / (1 - x)) / (2A1)."""
    if a.a1 == 0:
        raise ZeroDivisionError("A1 must be nonzero")
    x = PowerSeries.x(order)
    arg = 1 + series_div(4 * a.a1 * a.a2 * x, 1 - x)
    root = series_sqrt(arg)
    return (root - 1) / (2 * a.a1) + 1


def gf_jacobi_gamma1(a: AParams, order: int) -> PowerSeries:
    """Generating function for gamma = 1; square-root form and functional
    equation are both evaluated and must agree exactly."""
    closed = gf_jacobi_gamma1_sqrt(a, order)
    solved = solve_quadratic_fe(fe_jacobi_gamma1(a, order), order)
    if closed != solved:
        raise GeneratingFunctionMismatch("generating-function mismatch")
    return solved


def gf_laguerre(a: AParams, order: int) -> PowerSeries:
    return solve_quadratic_fe(fe_laguerre(a, order), order)


def gf_jacobi_general(a: AParams, order: int) -> PowerSeries:
    return solve_quadratic_fe(fe_jacobi_general(a, order), order)


def gf_delay_times(a: AParams, order: int) -> PowerSeries:
    return solve_quadratic_fe(fe_delay_times(a, order), order)


_FE = {
    JACOBI_GAMMA1: fe_jacobi_gamma1,
    JACOBI_GENERAL: fe_jacobi_general,
    LAGUERRE: fe_laguerre,
    DELAY_TIMES: fe_delay_times,
}

_GF = {
    JACOBI_GAMMA1: gf_jacobi_gamma1,
    JACOBI_GENERAL: gf_jacobi_general,
    LAGUERRE: gf_laguerre,
    DELAY_TIMES: gf_delay_times,
}


def functional_equation(spec: EnsembleSpec, order: int) -> QuadraticFE:
    return _FE[spec.kind](a_params(spec), order)


def generating_function(spec: EnsembleSpec, order: int) -> PowerSeries:
    return _GF[spec.kind](a_params(spec), order)
