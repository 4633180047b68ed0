"""Ensemble descriptions and their large-N constants A1..A4."""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional

from .exact import as_rational, format_rational

JACOBI_GAMMA1 = "jacobi_gamma1"
JACOBI_GENERAL = "jacobi_general"
LAGUERRE = "laguerre"
DELAY_TIMES = "delay_times"

KINDS = (JACOBI_GAMMA1, JACOBI_GENERAL, LAGUERRE, DELAY_TIMES)

# command-line spellings
KIND_ALIASES = {
    "jacobi-g1": JACOBI_GAMMA1,
    "jacobi": JACOBI_GENERAL,
    "laguerre": LAGUERRE,
    "delay": DELAY_TIMES,
}


class ParameterError(ValueError):
    """Invalid ensemble parameters; ``field`` names the offending one."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _opt_rational(v):
    return None if v is None else as_rational(v)


@dataclass(frozen=True)
class EnsembleSpec:
    """Which ensemble, and its raw finite-N parameters.

    ``gamma`` is used only by ``jacobi_general``, ``epsilon`` only by
    ``laguerre`` and ``tauD`` only by ``delay_times``. For delay times
    ``beta`` and ``N`` matter only to the sampler.
    """

    kind: str
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    N: Optional[int] = None
    gamma: Optional[Fraction] = None
    epsilon: Optional[Fraction] = None
    tauD: Optional[Fraction] = None

    def __post_init__(self):
        kind = KIND_ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        for name in ("alpha", "beta", "gamma", "epsilon", "tauD"):
            object.__setattr__(self, name, _opt_rational(getattr(self, name)))
        self.validate()

    def validate(self):
        if self.kind not in KINDS:
            raise ParameterError("kind", f"unknown ensemble kind {self.kind!r}")
        if self.N is not None:
            if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 1:
                raise ParameterError("N", "must be a positive integer")
        if self.beta is not None and self.beta <= 0:
            raise ParameterError("beta", "must be positive")

        if self.kind == DELAY_TIMES:
            if self.tauD is None:
                raise ParameterError("tauD", "required for delay_times")
            if self.tauD <= 0:
                raise ParameterError("tauD", "must be positive")
            return

        for name in ("alpha", "beta", "N"):
            if getattr(self, name) is None:
                raise ParameterError(name, f"required for {self.kind}")
        if self.kind == LAGUERRE:
            if self.epsilon is None:
                raise ParameterError("epsilon", "required for laguerre")
            if self.epsilon <= 0:
                raise ParameterError("epsilon", "must be positive")
        elif self.kind == JACOBI_GENERAL:
            if self.gamma is None:
                raise ParameterError("gamma", "required for jacobi_general")
            if self.alpha + self.gamma + self.beta * self.N == 0:
                raise ParameterError("alpha", "alpha + gamma + beta*N must be nonzero")
        else:
            if self.alpha + self.beta * self.N == 0:
                raise ParameterError("alpha", "alpha + beta*N must be nonzero")

    def to_json(self) -> dict:
        out = {"kind": self.kind}
        for f in fields(self):
            if f.name == "kind":
                continue
            v = getattr(self, f.name)
            if v is None:
                continue
            out[f.name] = v if f.name == "N" else format_rational(v)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "EnsembleSpec":
        kw = {k: obj[k] for k in ("alpha", "beta", "gamma", "epsilon", "tauD", "N") if k in obj}
        return cls(obj["kind"], **kw)


@dataclass(frozen=True)
class AParams:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction

    @classmethod
    def of(cls, a1, a2, a3) -> "AParams":
        a1, a2, a3 = as_rational(a1), as_rational(a2), as_rational(a3)
        return cls(a1, a2, a3, a1 * (1 - a3))

    def to_json(self) -> dict:
        return {k: format_rational(getattr(self, k)) for k in ("a1", "a2", "a3", "a4")}


def a_params(spec: EnsembleSpec) -> AParams:
    """Asymptotic constants for ``spec``.

    Jacobi: A1 = beta N / 2(alpha+gamma+beta N), A2 = (2 alpha + beta N) / (same),
    with gamma = 0 for the gamma = 1 ensemble (gamma - 1 is replaced by gamma).
    Laguerre: A1 = beta N / 2 epsilon, A2 = alpha/epsilon + A1. In both
    A3 = A1 + A2. Delay times: A1 = 1 and A2 = A3 = tauD.
    """
    if spec.kind == DELAY_TIMES:
        return AParams.of(1, spec.tauD, spec.tauD)
    bN = spec.beta * spec.N
    if spec.kind == LAGUERRE:
        a1 = bN / (2 * spec.epsilon)
        a2 = spec.alpha / spec.epsilon + a1
        return AParams.of(a1, a2, a1 + a2)
    gamma = spec.gamma if spec.kind == JACOBI_GENERAL else 0
    den = 2 * (spec.alpha + gamma + bN)
    a1 = bN / den
    a2 = (2 * spec.alpha + bN) / den
    return AParams.of(a1, a2, a1 + a2)


def transport_to_jacobi(n1: int, n2: int, beta=2) -> EnsembleSpec:
    """Jacobi (gamma = 1) ensemble of ``t t^dagger`` for an N2 x N1 transmission matrix."""
    if n1 < 1:
        raise ParameterError("n1", "must be >= 1")
    if n2 < 1:
        raise ParameterError("n2", "must be >= 1")
    beta = as_rational(beta)
    if beta <= 0:
        raise ParameterError("beta", "must be positive")
    alpha = beta / 2 * (abs(n2 - n1) + 1)
    return EnsembleSpec(JACOBI_GAMMA1, alpha=alpha, beta=beta, N=min(n1, n2))
