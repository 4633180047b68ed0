"""Self-check suites shared by the ``verify`` command and the test-suite.

Each check returns a :class:`Check`; failures carry a counterexample in
``detail`` instead of raising.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .combinatorics import (
    RISE,
    catalan,
    count_weighted_paths,
    dyck_model,
    enumerate_paths,
    enumerate_schroder_paths,
    is_schroder_path,
    jacobi_model,
    motzkin_count,
    motzkin_model,
    schroder,
    schroder_bijection,
    schroder_like_model,
)
from .ensembles import EnsembleSpec, a_params
from .exact import PowerSeries, format_rational, series_div, series_mul
from .genfunc import (
    fe_jacobi_gamma1,
    functional_equation,
    generating_function,
    gf_jacobi_gamma1_sqrt,
    solve_quadratic_fe,
)
from .moments import (
    MomentContext,
    closed_form_jacobi,
    closed_form_jacobi_a4,
    moments_all_backends,
)

SUITES = ("cross-backend", "identities", "paths-oracle")

F = Fraction

PARAMETER_SETS = {
    "jacobi_gamma1": [
        EnsembleSpec("jacobi_gamma1", alpha=1, beta=2, N=100),
        EnsembleSpec("jacobi_gamma1", alpha=F(1, 2), beta=1, N=7),
        EnsembleSpec("jacobi_gamma1", alpha=5, beta=2, N=4),
        EnsembleSpec("jacobi_gamma1", alpha=F(7, 3), beta=4, N=25),
        EnsembleSpec("jacobi_gamma1", alpha=30, beta=F(1, 2), N=12),
    ],
    "jacobi_general": [
        EnsembleSpec("jacobi_general", alpha=1, gamma=1, beta=2, N=100),
        EnsembleSpec("jacobi_general", alpha=1, gamma=1, beta=2, N=40),
        EnsembleSpec("jacobi_general", alpha=F(3, 2), gamma=7, beta=1, N=13),
        EnsembleSpec("jacobi_general", alpha=20, gamma=F(45, 2), beta=4, N=10),
        EnsembleSpec("jacobi_general", alpha=F(1, 3), gamma=50, beta=2, N=9),
    ],
    "laguerre": [
        EnsembleSpec("laguerre", alpha=0, epsilon=1, beta=2, N=10),
        EnsembleSpec("laguerre", alpha=1, epsilon=1, beta=2, N=40),
        EnsembleSpec("laguerre", alpha=F(1, 3), epsilon=F(5, 2), beta=2, N=10),
        EnsembleSpec("laguerre", alpha=12, epsilon=F(3, 7), beta=1, N=6),
        EnsembleSpec("laguerre", alpha=F(9, 2), epsilon=20, beta=4, N=3),
    ],
    "delay_times": [
        EnsembleSpec("delay_times", tauD=1),
        EnsembleSpec("delay_times", tauD=F(3, 2)),
        EnsembleSpec("delay_times", tauD=F(1, 7)),
        EnsembleSpec("delay_times", tauD=12),
        EnsembleSpec("delay_times", tauD=F(22, 9)),
    ],
}


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"suite": self.suite, "check": self.name, "passed": self.passed, "detail": self.detail}


def _label(spec: EnsembleSpec) -> str:
    return ",".join(f"{k}={v}" for k, v in spec.to_json().items())


# ---------------------------------------------------------------------------


def cross_backend(max_n: int = 30) -> list[Check]:
    out = []
    for kind, specs in PARAMETER_SETS.items():
        for spec in specs:
            rep = moments_all_backends(spec, max_n).report
            out.append(Check("cross-backend", f"{_label(spec)} n<={max_n}", rep.equal, rep.first_mismatch or {}))
    return out


def _first_diff(pairs):
    for n, x, y in pairs:
        if x != y:
            return {"n": n, "left": format_rational(x), "right": format_rational(y)}
    return None


def identities(max_n: int = 30) -> list[Check]:
    out = []

    # A3 = 1: gamma = 0 general Jacobi collapses onto gamma = 1
    nmax = min(max_n, 15)
    for g1 in PARAMETER_SETS["jacobi_gamma1"]:
        gen = EnsembleSpec("jacobi_general", alpha=g1.alpha, gamma=0, beta=g1.beta, N=g1.N)
        c1, c2 = MomentContext(g1), MomentContext(gen)
        bad = _first_diff((n, c1.recurrence(n), c2.closed_form(n)) for n in range(1, nmax + 1))
        out.append(Check("identities", f"gamma-reduction {_label(g1)}", bad is None, bad or {}))

    # Laguerre with alpha = 0: <T^n> = C_n <T>^n
    for N in (2, 10, 37):
        spec = EnsembleSpec("laguerre", alpha=0, epsilon=1, beta=2, N=N)
        ctx = MomentContext(spec)
        a2 = a_params(spec).a2
        bad = _first_diff((n, ctx.recurrence(n), catalan(n) * a2**n) for n in range(1, nmax + 1))
        out.append(Check("identities", f"catalan-limit N={N}", bad is None, bad or {}))

    # (1 - A3) form of the general-gamma sum against the A4 form, and both k limits
    for spec in PARAMETER_SETS["jacobi_general"]:
        a = a_params(spec)
        top = min(max_n, 20)
        bad = _first_diff((n, closed_form_jacobi(a, n), closed_form_jacobi_a4(a, n)) for n in range(1, top + 1))
        out.append(Check("identities", f"A4-form {_label(spec)}", bad is None, bad or {}))
        bad = _first_diff(
            (n, closed_form_jacobi(a, n, "printed"), closed_form_jacobi(a, n, "floor")) for n in range(1, top + 1)
        )
        out.append(Check("identities", f"k-limit {_label(spec)}", bad is None, bad or {}))

    # delay-time sequence
    ctx = MomentContext(EnsembleSpec("delay_times", tauD=1))
    got = [ctx.recurrence(n) for n in range(1, 6)]
    ok = got == [1, 2, 6, 22, 90]
    out.append(Check("identities", "delay-times 1,2,6,22,90", ok, {} if ok else {"got": [str(g) for g in got]}))

    # generating-function residuals and the square-root form
    order = max_n
    for kind, specs in PARAMETER_SETS.items():
        for spec in specs:
            eq = functional_equation(spec, order)
            Fs = generating_function(spec, order)
            res = eq.residual(Fs)
            out.append(Check(
                "identities", f"residual {_label(spec)} order {order}", res.is_zero(),
                {} if res.is_zero() else {"residual": res.to_strings()},
            ))
    for spec in PARAMETER_SETS["jacobi_gamma1"]:
        a = a_params(spec)
        closed = gf_jacobi_gamma1_sqrt(a, order)
        solved = solve_quadratic_fe(fe_jacobi_gamma1(a, order), order)
        x = PowerSeries.x(order)
        lhs = 2 * a.a1 * (solved - 1) + 1
        rhs = 1 + series_div(4 * a.a1 * a.a2 * x, 1 - x)
        ok = closed == solved and series_mul(lhs, lhs) == rhs
        out.append(Check("identities", f"sqrt-form {_label(spec)}", ok))
    return out


def _dp_vs_enum(model, max_steps):
    dp = count_weighted_paths(model)
    brute = sum((model.weight_of(p) for p in enumerate_paths(model, max_steps)), Fraction(0))
    return dp, brute


def paths_oracle(seed: int = 2024, trials: int = 50) -> list[Check]:
    out = []
    for p in range(9):
        n_enum = len(enumerate_paths(dyck_model(2 * p), 20))
        dp = count_weighted_paths(dyck_model(2 * p))
        ok = catalan(p) == dp == n_enum
        out.append(Check("paths-oracle", f"catalan p={p}", ok, {} if ok else {"catalan": catalan(p), "dp": str(dp), "enum": n_enum}))

    for n in range(11):
        paths = enumerate_paths(motzkin_model(n), 20)
        by_m: dict[int, int] = {}
        for pth in paths:
            m = sum(1 for mv in pth.moves if mv == RISE)
            by_m[m] = by_m.get(m, 0) + 1
        ok = all(motzkin_count(n, m) == by_m.get(m, 0) for m in range(n + 1))
        ok = ok and sum(motzkin_count(n, m) for m in range(n + 1)) == count_weighted_paths(motzkin_model(n))
        out.append(Check("paths-oracle", f"motzkin n={n}", ok, {} if ok else {"enum": by_m}))

    for n in range(7):
        brute = enumerate_schroder_paths(n)
        fig3 = enumerate_paths(schroder_like_model(n), 20)
        images = {schroder_bijection(p) for p in fig3}
        ok = (
            schroder(n) == len(brute) == len(images) == len(fig3)
            and images == set(brute)
            and all(is_schroder_path(q) for q in images)
        )
        out.append(Check("paths-oracle", f"schroder n={n}", ok, {} if ok else {"R": schroder(n), "brute": len(brute), "images": len(images)}))

    rng = random.Random(seed)

    def w():
        return Fraction(rng.randint(-9, 9), rng.randint(1, 6))

    makers = {
        "dyck": lambda: dyck_model(8, w(), w()),
        "motzkin": lambda: motzkin_model(6, w(), w(), w()),
        "schroder-like": lambda: schroder_like_model(5, w(), w(), w()),
        "jacobi4": lambda: jacobi_model(5, w(), w(), w(), w()),
    }
    for name, make in makers.items():
        bad = None
        for t in range(trials):
            model = make()
            dp, brute = _dp_vs_enum(model, 20)
            if dp != brute:
                bad = {"trial": t, "dp": format_rational(dp), "enumeration": format_rational(brute),
                       "weights": {s.letter: format_rational(s.weight) for s in model.steps}}
                break
        out.append(Check("paths-oracle", f"weighted DP vs enumeration, {name} x{trials}", bad is None, bad or {}))
    return out


def run_suite(suite: str, max_n: int = 30) -> list[Check]:
    if suite == "cross-backend":
        return cross_backend(max_n)
    if suite == "identities":
        return identities(max_n)
    if suite == "paths-oracle":
        return paths_oracle()
    if suite == "all":
        return cross_backend(max_n) + identities(max_n) + paths_oracle()
    raise ValueError(f"unknown suite {suite!r}")
