# modules/verification/lemmas.py
"""
Vector-level oracles for the three lemmas the bounds are built on. Each suite
draws its samples in one batch and checks them with array operations.
"""
from typing import Optional, Sequence, Tuple

import numpy as np

from core.errors import InvalidDimensionError
from core.logger import logger
from core.settings import settings
from modules.verification.campaign import FailureRecord, SuiteReport, TightnessAccumulator

MAX_RECORDED_FAILURES = 20


def _vectors(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    if n < 1:
        raise InvalidDimensionError(f"vector size must be >= 1, got {n}")
    return rng.standard_normal((count, n)) + 1j * rng.standard_normal((count, n))


def _inner(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """⟨x, y⟩ = Σ x_i conj(y_i) along the last axis."""
    return np.sum(x * y.conj(), axis=-1)


def buzano_sides(x: np.ndarray, y: np.ndarray, e: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """|⟨x,e⟩⟨e,y⟩| and ½(‖x‖‖y‖ + |⟨x,y⟩|) for unit e."""
    lhs = np.abs(_inner(x, e) * _inner(e, y))
    rhs = 0.5 * (np.linalg.norm(x, axis=-1) * np.linalg.norm(y, axis=-1) + np.abs(_inner(x, y)))
    return lhs, rhs


def gen_cauchy_sides(x: np.ndarray, y: np.ndarray, f: float) -> Tuple[np.ndarray, np.ndarray]:
    """|⟨x,y⟩|² and f/(1+f)‖x‖²‖y‖² + 1/(1+f)|⟨x,y⟩|‖x‖‖y‖."""
    xy = np.abs(_inner(x, y))
    nx, ny = np.linalg.norm(x, axis=-1), np.linalg.norm(y, axis=-1)
    outer = 1.0 / (1.0 + f)
    return xy ** 2, (1.0 - outer) * (nx * ny) ** 2 + outer * xy * nx * ny


def _collect(report: SuiteReport, stats: TightnessAccumulator, key: str, lhs: np.ndarray, rhs: np.ndarray,
             seed: Optional[int], params: dict) -> None:
    tol = settings.tol_ineq_rel * (1.0 + np.abs(lhs) + np.abs(rhs))
    slack = rhs - lhs
    bad = np.flatnonzero(slack < -tol)
    stats.add_many(slack, int(bad.size))
    for i in bad[:MAX_RECORDED_FAILURES]:
        report.failures.append(FailureRecord(
            case_index=int(i), seed=seed, bound_id=key, lhs=float(lhs[i]), rhs=float(rhs[i]),
            slack=float(slack[i]), params=params,
        ))
    if bad.size:
        logger.error("Lemma oracle failed.", extra={"lemma": key, "failures": int(bad.size)})


def lemma_buzano(rng: np.random.Generator, n: int, count: int, seed: Optional[int] = None) -> SuiteReport:
    x, y, e = _vectors(rng, count, n), _vectors(rng, count, n), _vectors(rng, count, n)
    e /= np.linalg.norm(e, axis=-1, keepdims=True)
    report, stats = SuiteReport(cases=count), TightnessAccumulator()
    lhs, rhs = buzano_sides(x, y, e)
    _collect(report, stats, "lemma_buzano", lhs, rhs, seed, {"n": n})
    report.tightness["lemma_buzano"] = stats.summary()
    return report


def lemma_gen_cauchy(rng: np.random.Generator, n: int, count: int, alpha_grid: Sequence[float],
                     seed: Optional[int] = None) -> SuiteReport:
    x, y = _vectors(rng, count, n), _vectors(rng, count, n)
    report = SuiteReport(cases=count)
    for f in alpha_grid:
        stats = TightnessAccumulator()
        lhs, rhs = gen_cauchy_sides(x, y, float(f))
        _collect(report, stats, "lemma_gen_cauchy", lhs, rhs, seed, {"n": n, "alpha": float(f)})
        report.tightness[f"lemma_gen_cauchy.alpha={float(f):g}"] = stats.summary()
    return report


def commuting_batch(rng: np.random.Generator, count: int, n: int):
    """
    Batched commuting pairs (A, p(|A|)) in factored form: A = U diag(σ) V*,
    returning (U, σ, Vh, p(σ)) with p a shifted random cubic, p(σ) > 0.
    """
    A = _vectors(rng, count * n, n).reshape(count, n, n)
    U, sigma, Vh = np.linalg.svd(A)
    coeffs = rng.standard_normal((count, 4))
    powers = sigma[..., None] ** np.arange(3, -1, -1)
    p = np.einsum("ckj,cj->ck", powers, coeffs)
    p = p - p.min(axis=1, keepdims=True) + rng.uniform(0.0, 1.0, (count, 1))
    return U, sigma, Vh, p


def mixed_schwarz_sides(U: np.ndarray, sigma: np.ndarray, Vh: np.ndarray, p: np.ndarray,
                        x: np.ndarray, y: np.ndarray, s: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    |⟨ABx, y⟩| and r(B)‖|A|^s x‖‖|A*|^{1−s} y‖ for B = p(|A|).
    With A = UΣV*: ABx = U Σp(Σ) V*x, |A|^s x = VΣ^sV*x, |A*|^{1−s} y = UΣ^{1−s}U*y.
    """
    vx = np.einsum("cij,cj->ci", Vh, x)
    uy = np.einsum("cji,cj->ci", U.conj(), y)
    ABx_coords = sigma * p * vx
    lhs = np.abs(np.sum(ABx_coords * uy.conj(), axis=-1))
    radius = p.max(axis=1)
    rhs = radius * np.linalg.norm(np.power(sigma, s) * vx, axis=-1) \
        * np.linalg.norm(np.power(sigma, 1.0 - s) * uy, axis=-1)
    return lhs, rhs


def lemma_mixed_schwarz(rng: np.random.Generator, n: int, count: int, s_grid: Sequence[float],
                        seed: Optional[int] = None) -> SuiteReport:
    """|⟨ABx, y⟩| ≤ r(B)‖ψ(|A|)x‖‖η(|A*|)y‖ with ψ = t^s, η = t^{1−s} and |A|B = B*|A|."""
    U, sigma, Vh, p = commuting_batch(rng, count, n)
    x, y = _vectors(rng, count, n), _vectors(rng, count, n)
    report = SuiteReport(cases=count)
    for s in s_grid:
        stats = TightnessAccumulator()
        lhs, rhs = mixed_schwarz_sides(U, sigma, Vh, p, x, y, float(s))
        _collect(report, stats, "lemma_mixed_schwarz", lhs, rhs, seed, {"n": n, "s": float(s)})
        report.tightness[f"lemma_mixed_schwarz.s={float(s):g}"] = stats.summary()
    return report
