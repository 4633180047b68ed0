from fractions import Fraction as F

import pytest

from betamoments.combinatorics import catalan, schroder
from betamoments.ensembles import EnsembleSpec, a_params
from betamoments.moments import (
    BACKENDS,
    MomentContext,
    closed_form_jacobi,
    closed_form_jacobi_a4,
    dseq_extend,
    moment,
    moment_closed_form,
    moment_paths,
    moment_recurrence,
    moment_series,
    moments_all_backends,
)
from betamoments.verify import PARAMETER_SETS

ALL_SPECS = [s for specs in PARAMETER_SETS.values() for s in specs]

G1 = EnsembleSpec("jacobi_gamma1", alpha=F(7, 3), beta=4, N=25)
LAG = EnsembleSpec("laguerre", alpha=F(1, 3), epsilon=F(5, 2), beta=2, N=10)
GEN = EnsembleSpec("jacobi_general", alpha=F(3, 2), gamma=7, beta=1, N=13)


def test_dseq_examples():
    t = F(5, 3)
    assert dseq_extend([F(1)]) == 0
    assert dseq_extend([F(1), t]) == t**2
    assert dseq_extend([F(1), t, 2 * t**2]) == 4 * t**3
    with pytest.raises(ValueError):
        dseq_extend([])


def test_first_moment_is_a2():
    for spec in ALL_SPECS:
        assert moment_recurrence(spec, 1) == a_params(spec).a2


def test_laguerre_second_moment():
    a = a_params(LAG)
    assert moment_recurrence(LAG, 2) == a.a2 * a.a3
    assert moment_paths(LAG, 2) == a.a2 * a.a3
    assert moment_closed_form(LAG, 3) == a.a2 * (a.a3**2 + a.a1 * a.a2)


def test_delay_sequence():
    spec = EnsembleSpec("delay_times", tauD=1)
    assert [moment_recurrence(spec, n) for n in range(1, 6)] == [1, 2, 6, 22, 90]
    assert moment_series(spec, 4) == 22


def test_delay_is_shifted_schroder():
    t = F(2, 7)
    ctx = MomentContext(EnsembleSpec("delay_times", tauD=t))
    for n in range(1, 16):
        assert ctx.recurrence(n) == schroder(n - 1) * t**n


def test_gamma1_low_orders():
    a = a_params(G1)
    y = a.a1 * a.a2
    assert moment_closed_form(G1, 2) == a.a2 * (1 - y)
    assert moment_paths(G1, 3) == a.a2 * (1 - 2 * y + 2 * y**2)


def test_gamma1_series_half_half():
    spec = EnsembleSpec("jacobi_gamma1", alpha=0, beta=2, N=5)
    assert a_params(spec).a1 == a_params(spec).a2 == F(1, 2)
    assert moment_series(spec, 2) == F(3, 8)


def test_general_second_moment_all_routes():
    a = a_params(GEN)
    want = a.a2 * (a.a3 - a.a1 * a.a2)
    for b in BACKENDS:
        assert moment(GEN, 2, b) == want


@pytest.mark.parametrize("spec", ALL_SPECS, ids=str)
def test_backends_agree_to_30(spec):
    res = moments_all_backends(spec, 30)
    assert res.report.equal, res.report.first_mismatch
    assert res.report.checked == 120


def test_ten_moments_forty_results():
    res = moments_all_backends(LAG, 10)
    assert len(res.results) == 40 and res.report.equal


def test_gamma_zero_reduction():
    for g1 in PARAMETER_SETS["jacobi_gamma1"]:
        gen = EnsembleSpec("jacobi_general", alpha=g1.alpha, gamma=0, beta=g1.beta, N=g1.N)
        a, b = moments_all_backends(g1, 10), moments_all_backends(gen, 10)
        for backend in BACKENDS:
            assert a.values(backend) == b.values(backend)


def test_laguerre_alpha_zero_is_catalan():
    spec = EnsembleSpec("laguerre", alpha=0, epsilon=1, beta=2, N=7)
    a2 = a_params(spec).a2
    res = moments_all_backends(spec, 8)
    for b in BACKENDS:
        assert res.values(b) == [catalan(n) * a2**n for n in range(1, 9)]


@pytest.mark.parametrize("spec", PARAMETER_SETS["jacobi_general"], ids=str)
def test_a4_form_and_k_limit(spec):
    a = a_params(spec)
    for n in range(1, 21):
        v = closed_form_jacobi(a, n, "printed")
        assert v == closed_form_jacobi(a, n, "floor") == closed_form_jacobi_a4(a, n)


@pytest.mark.parametrize("beta", [1, 2, 4])
@pytest.mark.parametrize("N", [10, 40])
def test_jacobi_moments_decrease(beta, N):
    # T lies in [0, 1], so moments are positive and non-increasing in n
    spec = EnsembleSpec("jacobi_general", alpha=1, gamma=1, beta=beta, N=N)
    ctx = MomentContext(spec)
    m = [ctx.recurrence(n) for n in range(1, 21)]
    assert all(x > 0 for x in m)
    assert all(x >= y for x, y in zip(m, m[1:]))


def test_laguerre_moments_positive():
    for spec in PARAMETER_SETS["laguerre"]:
        ctx = MomentContext(spec)
        assert all(ctx.recurrence(n) > 0 for n in range(1, 21))


def test_bad_arguments():
    with pytest.raises(ValueError):
        moment(LAG, 0)
    with pytest.raises(ValueError):
        moment(LAG, 2, "monte-carlo")
    with pytest.raises(ValueError):
        moments_all_backends(LAG, 0)


def test_result_json():
    res = moments_all_backends(EnsembleSpec("jacobi_general", alpha=1, gamma=1, beta=2, N=100), 2)
    last = res.results[-1].to_json()
    assert last["value"] == "151/404"
    assert last["value_float"] == f"{151 / 404:.15g}"
