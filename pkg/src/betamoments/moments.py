"""Large-N moments <T^n> by four independent routes.

``recurrence``
    iterate the moment recurrence for the ensemble, driven by the
    convolution D_n = sum_{a=1}^{n-1} <T^{n-a}><T^a>.
``closed_form``
    the explicit binomial/Catalan sums.
``series``
    coefficient extraction from the generating function.
``paths``
    weighted lattice-path counts times the binomial slot factors.

All values are exact Fractions and the four routes must agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .combinatorics import (
    FALL,
    RISE,
    VERTICAL,
    PathModel,
    Step,
    catalan,
    count_weighted_paths,
    dyck_model,
    motzkin_count,
    motzkin_model,
    schroder,
    schroder_like_model,
)
from .ensembles import (
    DELAY_TIMES,
    JACOBI_GAMMA1,
    JACOBI_GENERAL,
    LAGUERRE,
    AParams,
    EnsembleSpec,
    a_params,
)
from .exact import format_rational
from .genfunc import generating_function

BACKENDS = ("recurrence", "closed_form", "series", "paths")


def dseq_extend(moments_prefix: Sequence[Fraction]) -> Fraction:
    """D_n for n = len(prefix), given <T^0> .. <T^{n-1}>."""
    n = len(moments_prefix)
    if n == 0:
        raise ValueError("need at least <T^0> in the prefix")
    return sum((moments_prefix[n - a] * moments_prefix[a] for a in range(1, n)), Fraction(0))


# ---------------------------------------------------------------------------
# closed forms


def closed_form_gamma1(a: AParams, n: int) -> Fraction:
    y = a.a1 * a.a2
    return a.a2 * sum(
        (comb(n - 1, p) * (-1) ** p * catalan(p) * y**p for p in range(n)), Fraction(0)
    )


def closed_form_laguerre(a: AParams, n: int) -> Fraction:
    y = a.a1 * a.a2
    return a.a2 * sum(
        (motzkin_count(n - 1, m) * y**m * a.a3 ** (n - 1 - 2 * m) for m in range((n - 1) // 2 + 1)),
        Fraction(0),
    )


def closed_form_delay(a: AParams, n: int) -> Fraction:
    """Schroeder closed form; <T^n> = R_{n-1} tauD^n with R_0 = 1, R_1 = 2, ...

    Only valid for A1 = 1 and A2 = A3, which is what the delay-time
    ensemble produces.
    """
    if a.a1 != 1 or a.a2 != a.a3:
        raise ValueError("Schroeder closed form needs A1 = 1 and A2 = A3")
    return schroder(n - 1) * a.a2**n


def closed_form_jacobi(a: AParams, n: int, k_limit: str = "printed") -> Fraction:
    """General-gamma sum in the (1 - A3) form.

    ``k_limit="printed"`` runs k up to floor((m+1)/2), ``"floor"`` up to
    floor(m/2); the extra term has C(m-k, k) = 0.
    """
    y = a.a1 * a.a2
    total = Fraction(0)
    for m in range(n):
        kmax = (m + 1) // 2 if k_limit == "printed" else m // 2
        inner = Fraction(0)
        for k in range(kmax + 1):
            b = comb(m - k, k)
            if b:
                inner += b * catalan(m - k) * y ** (m - k) * (1 - a.a3) ** k
        total += comb(n - 1, m) * (-1) ** m * a.a3 ** (n - 1 - m) * inner
    return a.a2 * total


def closed_form_jacobi_a4(a: AParams, n: int) -> Fraction:
    """Same sum with A4 = A1 (1 - A3) kept as its own weight."""
    y = -a.a1 * a.a2
    z = a.a4 * a.a2
    total = Fraction(0)
    for m in range(n):
        inner = Fraction(0)
        for k in range((m + 1) // 2 + 1):
            b = comb(m - k, k)
            if b:
                inner += b * catalan(m - k) * y ** (m - 2 * k) * z**k
        total += comb(n - 1, m) * a.a3 ** (n - 1 - m) * inner
    return a.a2 * total


class BackendMismatch(AssertionError):
    pass


# ---------------------------------------------------------------------------
# evaluation context


def _jacobi_core_model(a: AParams, length: int) -> PathModel:
    # vertical, rise and fall only; horizontal A3 steps are placed by the slot binomial
    return PathModel(
        (Step(*VERTICAL, -a.a1, "A1"), Step(*FALL, a.a2, "A2"), Step(*RISE, a.a4, "A4")),
        horizontal_length=length,
    )


class MomentContext:
    """Memo tables for one ensemble; not shared between threads."""

    def __init__(self, spec: EnsembleSpec):
        self.spec = spec
        self.a = a_params(spec)
        self._rec = [Fraction(1)]
        self._D = [Fraction(0)]
        self._series = None
        self._path_core: dict[int, Fraction] = {}

    # -- recurrence
    def recurrence(self, n: int) -> Fraction:
        _check_n(n)
        a, m, D = self.a, self._rec, self._D
        kind = self.spec.kind
        while len(m) <= n:
            k = len(m)
            D.append(dseq_extend(m))  # D_k from <T^0>..<T^{k-1}>
            if k == 1:
                m.append(a.a2)
                continue
            if kind == JACOBI_GAMMA1:
                v = a.a2 - a.a1 * D[k]
            elif kind == LAGUERRE:
                v = a.a2 * a.a3 ** (k - 1) + a.a1 * sum(
                    (a.a3**j * D[k - j - 1] for j in range(k - 1)), Fraction(0)
                )
            elif kind == DELAY_TIMES:
                v = a.a2 * a.a3 ** (k - 1) + a.a1 * sum(
                    (a.a3**j * D[k - j] for j in range(k - 1)), Fraction(0)
                )
            else:
                v = (
                    a.a2 * a.a3 ** (k - 1)
                    + (1 - a.a3) * a.a1 * sum((a.a3**j * D[k - j - 1] for j in range(k - 1)), Fraction(0))
                    - a.a1 * D[k]
                )
            m.append(v)
        return m[n]

    # -- closed form
    def closed_form(self, n: int) -> Fraction:
        _check_n(n)
        kind = self.spec.kind
        if kind == JACOBI_GAMMA1:
            return closed_form_gamma1(self.a, n)
        if kind == LAGUERRE:
            return closed_form_laguerre(self.a, n)
        if kind == DELAY_TIMES:
            return closed_form_delay(self.a, n)
        v = closed_form_jacobi(self.a, n)
        w = closed_form_jacobi_a4(self.a, n)
        if v != w:
            raise BackendMismatch(f"closed forms disagree at n={n}: {v} vs {w}")
        return v

    # -- series
    def series(self, n: int) -> Fraction:
        _check_n(n)
        if self._series is None or self._series.order < n:
            order = max(n, 2 * self._series.order if self._series is not None else 8)
            self._series = generating_function(self.spec, order)
        return self._series.coeffs[n]

    # -- paths
    def paths(self, n: int) -> Fraction:
        _check_n(n)
        a, kind = self.a, self.spec.kind
        if kind == LAGUERRE:
            return a.a2 * count_weighted_paths(motzkin_model(n - 1, a.a1, a.a2, a.a3))
        if kind == DELAY_TIMES:
            return a.a2 * count_weighted_paths(schroder_like_model(n - 1, a.a1, a.a2, a.a3))
        total = Fraction(0)
        if kind == JACOBI_GAMMA1:
            # C(n-1, p) ordered partitions times Dyck paths with p rise/fall pairs
            for p in range(n):
                total += comb(n - 1, p) * self._core(p, lambda length: dyck_model(2 * length, -a.a1, a.a2))
        else:
            for m in range(n):
                total += comb(n - 1, m) * a.a3 ** (n - 1 - m) * self._core(
                    m, lambda length: _jacobi_core_model(a, length)
                )
        return a.a2 * total

    def _core(self, m, make_model):
        if m not in self._path_core:
            self._path_core[m] = count_weighted_paths(make_model(m))
        return self._path_core[m]

    def value(self, backend: str, n: int) -> Fraction:
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        return getattr(self, backend)(n)


def _check_n(n):
    if n < 1:
        raise ValueError("n must be >= 1")


def moment_recurrence(spec: EnsembleSpec, n: int) -> Fraction:
    return MomentContext(spec).recurrence(n)


def moment_closed_form(spec: EnsembleSpec, n: int) -> Fraction:
    return MomentContext(spec).closed_form(n)


def moment_series(spec: EnsembleSpec, n: int) -> Fraction:
    return MomentContext(spec).series(n)


def moment_paths(spec: EnsembleSpec, n: int) -> Fraction:
    return MomentContext(spec).paths(n)


def moment(spec: EnsembleSpec, n: int, backend: str = "recurrence") -> Fraction:
    return MomentContext(spec).value(backend, n)


@dataclass(frozen=True)
class MomentResult:
    ensemble: EnsembleSpec
    n: int
    backend: str
    value: Fraction

    def to_json(self) -> dict:
        return {
            "kind": self.ensemble.kind,
            "n": self.n,
            "backend": self.backend,
            "value": format_rational(self.value),
            "value_float": f"{float(self.value):.15g}",
        }


@dataclass
class EqualityReport:
    equal: bool
    first_mismatch: Optional[dict] = None
    checked: int = 0

    def to_json(self) -> dict:
        return {"equal": self.equal, "first_mismatch": self.first_mismatch, "checked": self.checked}


@dataclass
class AllBackends:
    results: list[MomentResult] = field(default_factory=list)
    report: EqualityReport = field(default_factory=lambda: EqualityReport(True))

    def values(self, backend: str) -> list[Fraction]:
        return [r.value for r in self.results if r.backend == backend]


def moments_all_backends(
    spec: EnsembleSpec, n_max: int, backends: Sequence[str] = BACKENDS
) -> AllBackends:
    """Every backend for n = 1..n_max, with a report of the first disagreement."""
    _check_n(n_max)
    ctx = MomentContext(spec)
    out = AllBackends()
    mismatch = None
    for n in range(1, n_max + 1):
        ref = None
        for b in backends:
            try:
                v = ctx.value(b, n)
            except BackendMismatch as e:
                # internal closed-form disagreement is reported, not raised
                if mismatch is None:
                    mismatch = {"n": n, "backend": b, "detail": str(e)}
                continue
            out.results.append(MomentResult(spec, n, b, v))
            if ref is None:
                ref = (b, v)
            elif v != ref[1] and mismatch is None:
                mismatch = {
                    "n": n,
                    "backend": b,
                    "value": format_rational(v),
                    "reference_backend": ref[0],
                    "reference_value": format_rational(ref[1]),
                }
    out.report = EqualityReport(mismatch is None, mismatch, len(out.results))
    return out
