"""Metropolis sampling of finite-N eigenvalue densities.

The sampler checks the large-N formulas against the actual finite-N
ensembles: single-coordinate random-walk Metropolis on

    |Delta(T)|^beta * prod_i w(T_i)

with w(t) = t^(alpha-1) (1-t)^(gamma-1) on (0,1) (Jacobi),
t^alpha e^(-epsilon t) on (0,inf) (Laguerre) and t^alpha e^(-epsilon/t)
on (0,inf) (proper delay times). Proposals are reflected at the domain
walls, so they stay symmetric.

Moment estimates average T_i^n over all i in every sweep (the density is
exchangeable) and standard errors come from batch means.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from numba import njit

from .ensembles import (
    DELAY_TIMES,
    JACOBI_GAMMA1,
    JACOBI_GENERAL,
    LAGUERRE,
    EnsembleSpec,
    a_params,
)

_JACOBI, _LAGUERRE, _DELAY = 0, 1, 2

RNG_BLOCK = 2048
GENERATOR_ID = f"numpy-{np.__version__}/PCG64/SeedSequence.spawn/block{RNG_BLOCK}"


@dataclass(frozen=True)
class ChainConfig:
    sweeps: int
    burn_in: int = 0
    step_scale: Optional[float] = None
    chains: int = 1
    seed: int = 0
    batches: int = 20

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError("sweeps must be positive")
        if not 0 <= self.burn_in < self.sweeps:
            raise ValueError("need 0 <= burn_in < sweeps")
        if self.chains < 1:
            raise ValueError("chains must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.batches < 20:
            raise ValueError("batch means need at least 20 batches")
        if self.sweeps - self.burn_in < self.batches:
            raise ValueError("fewer recorded sweeps than batches")
        if self.step_scale is not None and not self.step_scale > 0:
            raise ValueError("step_scale must be positive")


@dataclass(frozen=True)
class DensityParams:
    code: int
    a: float
    b: float
    beta: float
    N: int
    # exact finite-N parameters, for reporting
    raw: dict


def delay_finite_n(beta, N, tauD):
    """Exponent and scale of the delay-time weight t^alpha e^(-epsilon/t).

    alpha = -3 beta N/2 + beta - 2 and epsilon = +beta N tauD / 2. The
    positive epsilon is the normalisable reading; it gives
    -beta N / 2(alpha + beta N) -> 1 and -epsilon/(alpha + beta N) -> tauD.
    """
    alpha = -3 * beta * N / 2 + beta - 2
    epsilon = beta * N * tauD / 2
    return alpha, epsilon


def density_params(spec: EnsembleSpec) -> DensityParams:
    if spec.beta is None or spec.N is None:
        raise ValueError("sampling needs beta and N")
    beta = float(spec.beta)
    if spec.kind in (JACOBI_GAMMA1, JACOBI_GENERAL):
        gamma = spec.gamma if spec.kind == JACOBI_GENERAL else 1
        if spec.alpha <= 0 or gamma <= 0:
            raise ValueError("Jacobi density needs alpha > 0 and gamma > 0")
        return DensityParams(
            _JACOBI, float(spec.alpha - 1), float(gamma - 1), beta, spec.N,
            {"alpha": spec.alpha, "gamma": gamma},
        )
    if spec.kind == LAGUERRE:
        if spec.alpha <= -1:
            raise ValueError("Laguerre density needs alpha > -1")
        return DensityParams(
            _LAGUERRE, float(spec.alpha), float(spec.epsilon), beta, spec.N,
            {"alpha": spec.alpha, "epsilon": spec.epsilon},
        )
    alpha, epsilon = delay_finite_n(spec.beta, spec.N, spec.tauD)
    return DensityParams(_DELAY, float(alpha), float(epsilon), beta, spec.N,
                         {"alpha": alpha, "epsilon": epsilon})


def log_density(spec: EnsembleSpec, T) -> float:
    """Unnormalised log density; -inf outside the domain or on a coincidence."""
    p = density_params(spec)
    T = np.asarray(T, dtype=float)
    if T.shape != (p.N,):
        raise ValueError(f"expected {p.N} coordinates")
    if np.any(T <= 0) or (p.code == _JACOBI and np.any(T >= 1)):
        return -math.inf
    diff = np.abs(T[:, None] - T[None, :])[np.triu_indices(p.N, 1)]
    if np.any(diff == 0):
        return -math.inf
    out = p.beta * float(np.sum(np.log(diff)))
    if p.code == _JACOBI:
        out += float(np.sum(p.a * np.log(T) + p.b * np.log1p(-T)))
    elif p.code == _LAGUERRE:
        out += float(np.sum(p.a * np.log(T) - p.b * T))
    else:
        out += float(np.sum(p.a * np.log(T) - p.b / T))
    return out


def delay_integrability(beta=2, tauD=1) -> dict:
    """Numerically integrate the N = 1 delay-time weight under both signs of epsilon.

    Returns the integral for epsilon = +beta tauD / 2 (used) and for the
    opposite sign; the latter overflows near t = 0.
    """
    from scipy.integrate import quad

    alpha, eps = delay_finite_n(beta, 1, tauD)
    alpha, eps = float(alpha), float(eps)
    out = {}
    for name, e in (("positive", eps), ("negative", -eps)):
        def f(t, e=e):
            if t <= 0:
                return 0.0
            with np.errstate(over="ignore"):
                return float(np.exp(alpha * np.log(t) - e / t))
        with np.errstate(all="ignore"), warnings.catch_warnings():
            warnings.simplefilter("ignore")
            lo = quad(f, 0, 1, limit=200)[0]
            hi = quad(f, 1, np.inf, limit=200)[0]
        total = lo + hi
        out[name] = {"integral": total, "finite": bool(np.isfinite(total))}
    return out


# ---------------------------------------------------------------------------
# kernel


@njit(cache=True, nogil=True)
def _log_weight(code, t, a, b):
    if t <= 0.0:
        return -np.inf
    if code == 0:
        if t >= 1.0:
            return -np.inf
        return a * math.log(t) + b * math.log1p(-t)
    if code == 1:
        return a * math.log(t) - b * t
    return a * math.log(t) - b / t


@njit(cache=True, nogil=True)
def _run_block(T, code, a, b, beta, scale, z, u, stats, row0, record):
    N = T.shape[0]
    nmax = stats.shape[1] - 2
    accepted = 0
    for s in range(z.shape[0]):
        for i in range(N):
            x = T[i]
            y = x + scale * z[s, i]
            if code == 0:
                while y < 0.0 or y > 1.0:
                    if y < 0.0:
                        y = -y
                    else:
                        y = 2.0 - y
            elif y < 0.0:
                y = -y
            wy = _log_weight(code, y, a, b)
            if wy == -np.inf:
                continue
            d = wy - _log_weight(code, x, a, b)
            # product of distance ratios, flushed to the log before it over/underflows
            prod = 1.0
            ok = True
            for j in range(N):
                if j == i:
                    continue
                num = abs(y - T[j])
                if num == 0.0:
                    ok = False
                    break
                prod *= num / abs(x - T[j])
                if prod > 1e150 or prod < 1e-150:
                    d += beta * math.log(prod)
                    prod = 1.0
            if not ok:
                continue
            d += beta * math.log(prod)
            if math.log(u[s, i]) < d:
                T[i] = y
                accepted += 1
        if record:
            r = row0 + s
            S = 0.0
            Q = 0.0
            for i in range(N):
                t = T[i]
                S += t
                Q += t * t
                p = 1.0
                for n in range(nmax):
                    p *= t
                    stats[r, n] += p
            for n in range(nmax):
                stats[r, n] /= N
            stats[r, nmax] = S / N
            stats[r, nmax + 1] = (S * S - Q) / (N * (N - 1)) if N > 1 else 0.0
    return accepted


def _initial_state(spec: EnsembleSpec, p: DensityParams) -> np.ndarray:
    grid = (np.arange(p.N) + 0.5) / p.N
    if p.code == _JACOBI:
        return grid
    if p.code == _LAGUERRE:
        return 2.0 * float(a_params(spec).a2) * grid
    return float(spec.tauD) * (0.2 + 4.0 * grid)


def default_step_scale(spec: EnsembleSpec) -> float:
    if spec.kind in (JACOBI_GAMMA1, JACOBI_GENERAL):
        return 0.1
    if spec.kind == LAGUERRE:
        return 0.1 * float(a_params(spec).a2)
    return 0.1 * float(spec.tauD)


def _run_chain(spec, p, cfg, scale, n_max, seed_seq):
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    T = _initial_state(spec, p)
    n_rec = cfg.sweeps - cfg.burn_in
    stats = np.zeros((n_rec, n_max + 2))
    accepted = 0
    done = 0
    while done < cfg.sweeps:
        k = min(RNG_BLOCK, cfg.sweeps - done)
        z = rng.standard_normal((k, p.N))
        u = rng.random((k, p.N))
        # split the block at the end of burn-in
        if done < cfg.burn_in < done + k:
            k1 = cfg.burn_in - done
            accepted += _run_block(T, p.code, p.a, p.b, p.beta, scale, z[:k1], u[:k1], stats, 0, False)
            accepted += _run_block(T, p.code, p.a, p.b, p.beta, scale, z[k1:], u[k1:], stats, 0, True)
        else:
            rec = done >= cfg.burn_in
            accepted += _run_block(
                T, p.code, p.a, p.b, p.beta, scale, z, u, stats, done - cfg.burn_in if rec else 0, rec
            )
        done += k
    return stats, accepted / (cfg.sweeps * p.N)


@dataclass
class ChainStats:
    moment_estimates: dict[int, tuple[float, float]]
    pair_covariance: tuple[float, float]
    mean_t: float
    acceptance_rate: float
    diagnostics: dict
    seed: int
    generator: str = GENERATOR_ID

    @property
    def covariance_ratio(self) -> tuple[float, float]:
        """|cov(T1,T2)| / (<T1><T2>) and its standard error."""
        cov, se = self.pair_covariance
        m2 = self.mean_t**2
        return abs(cov) / m2, se / m2

    def to_json(self) -> dict:
        ratio, ratio_se = self.covariance_ratio
        return {
            "estimates": [
                {"n": n, "mean": m, "stderr": s} for n, (m, s) in sorted(self.moment_estimates.items())
            ],
            "pair_cov": {
                "cov": self.pair_covariance[0],
                "stderr": self.pair_covariance[1],
                "ratio": ratio,
                "ratio_stderr": ratio_se,
            },
            "acceptance": self.acceptance_rate,
            "generator": self.generator,
            "seed": self.seed,
            "diagnostics": self.diagnostics,
        }


def _batch_means(x: np.ndarray, batches: int) -> np.ndarray:
    L = x.shape[0] // batches
    tail = x[x.shape[0] - L * batches:]
    return tail.reshape(batches, L, *x.shape[1:]).mean(axis=1)


def mh_sample(spec: EnsembleSpec, cfg: ChainConfig, n_max: int = 4, parallel: bool = True) -> ChainStats:
    """Run ``cfg.chains`` independent chains and pool their batch means."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    p = density_params(spec)
    if p.code == _DELAY:
        check = delay_integrability(float(spec.beta), float(spec.tauD))
        if not check["positive"]["finite"]:
            raise ValueError("delay-time weight is not integrable")
    scale = cfg.step_scale if cfg.step_scale is not None else default_step_scale(spec)
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.chains)

    def job(ss):
        return _run_chain(spec, p, cfg, scale, n_max, ss)

    if parallel and cfg.chains > 1:
        with ThreadPoolExecutor(max_workers=cfg.chains) as pool:
            runs = list(pool.map(job, seeds))
    else:
        runs = [job(ss) for ss in seeds]

    nm = n_max
    per_chain_batches = []
    chain_means = []
    for stats, _ in runs:
        bm = _batch_means(stats, cfg.batches)
        per_chain_batches.append(bm)
        chain_means.append(stats[:, 0].mean())
    allb = np.concatenate(per_chain_batches)  # (chains*batches, nmax+2)
    B = allb.shape[0]
    pooled = np.concatenate([s for s, _ in runs]).mean(axis=0)

    estimates = {}
    for n in range(1, nm + 1):
        se = float(allb[:, n - 1].std(ddof=1) / math.sqrt(B))
        estimates[n] = (float(pooled[n - 1]), se)

    m1 = float(pooled[nm])
    cov = float(pooled[nm + 1] - m1 * m1)
    cov_b = allb[:, nm + 1] - allb[:, nm] ** 2
    cov_se = float(cov_b.std(ddof=1) / math.sqrt(B))

    acc = [a for _, a in runs]
    acceptance = float(np.mean(acc))
    notes = []
    if acceptance < 0.05 or acceptance > 0.95:
        notes.append(f"acceptance {acceptance:.3f} outside [0.05, 0.95]; retune step_scale")

    chain_se = [
        float(b[:, 0].std(ddof=1) / math.sqrt(b.shape[0])) for b in per_chain_batches
    ]
    diagnostics = {
        "chain_means_T": [float(m) for m in chain_means],
        "chain_stderr_T": chain_se,
        "chain_acceptance": [float(a) for a in acc],
        "step_scale": scale,
        "sweeps": cfg.sweeps,
        "burn_in": cfg.burn_in,
        "chains": cfg.chains,
        "batches_per_chain": cfg.batches,
        "warnings": notes,
    }
    if p.code == _DELAY:
        diagnostics["delay_weight"] = {
            "alpha": float(p.raw["alpha"]),
            "epsilon": float(p.raw["epsilon"]),
            "convention": "t^alpha exp(-epsilon/t), epsilon = +beta N tauD / 2",
        }
    return ChainStats(estimates, (cov, cov_se), m1, acceptance, diagnostics, cfg.seed)


def split_chain_agreement(stats: ChainStats, n_sigma: float = 4.0) -> bool:
    """Every pair of chain means of T agrees within ``n_sigma`` combined stderr."""
    m = stats.diagnostics["chain_means_T"]
    s = stats.diagnostics["chain_stderr_T"]
    for i in range(len(m)):
        for j in range(i + 1, len(m)):
            if abs(m[i] - m[j]) > n_sigma * math.hypot(s[i], s[j]):
                return False
    return True


def factorization_test(spec: EnsembleSpec, cfg: ChainConfig, low: float = 1.4, high: float = 2.8) -> dict:
    """Covariance of two eigenvalues at N and 2N.

    Asymptotic factorization means |cov(T1,T2)| / <T1><T2> = O(1/N), so the
    ratio should roughly halve when N doubles.
    """
    if spec.N is None or spec.N < 2:
        raise ValueError("need N>=2")
    rows = []
    for N in (spec.N, 2 * spec.N):
        st = mh_sample(replace(spec, N=N), cfg, n_max=2)
        r, rse = st.covariance_ratio
        rows.append({
            "N": N,
            "cov": st.pair_covariance[0],
            "cov_stderr": st.pair_covariance[1],
            "mean": st.mean_t,
            "ratio": r,
            "ratio_stderr": rse,
            "acceptance": st.acceptance_rate,
        })
    decay = rows[0]["ratio"] / rows[1]["ratio"] if rows[1]["ratio"] > 0 else math.inf
    # first-order error propagation for the quotient
    rel = math.hypot(rows[0]["ratio_stderr"] / rows[0]["ratio"], rows[1]["ratio_stderr"] / rows[1]["ratio"])
    return {
        "runs": rows,
        "decay_factor": decay,
        "decay_factor_stderr": decay * rel,
        "bounds": [low, high],
        "consistent_with_1_over_N": bool(low <= decay <= high),
        "generator": GENERATOR_ID,
        "seed": cfg.seed,
    }
