# modules/berezin_core.py
"""
Berezin symbol, Berezin set/number, Berezin norm and the t-Berezin norm on a
sampled kernel model.

All suprema are maxima over the sampled points, so they are lower estimates of
the suprema over the full domain. Pair maxima come from a chunked scan over
rows λ; ties go to the lowest (λ, μ) in lexicographic order whatever the chunk
size or worker count.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from core.errors import InvalidParameterError, NotInvertibleError, ShapeMismatchError
from core.logger import logger
from core.settings import settings
from modules.kernel_models import KernelModel, hardy_model_at, normalized_kernel
from modules.matrix_calculus import HermitianMatrix, as_operator, inverse_psd

# Pair tables up to this many entries are materialized once and reused across t.
DENSE_PAIR_LIMIT = 4_000_000

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQUARE = (3.0 - math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class TBerezinResult:
    value: float
    witness: Tuple[int, int]
    t: Optional[float] = None


@dataclass(frozen=True)
class MinTResult:
    t_star: float
    value: float
    trace: List[Tuple[float, float]] = field(default_factory=list)


@dataclass(frozen=True)
class EqualityResult:
    """witness is set only when a sampled pair attains both terms within tol."""
    equal: bool
    witness: Optional[Tuple[int, int]]
    t_berezin: float
    berezin_norm: float
    attained: bool = False


@dataclass(frozen=True)
class UnitaryCheckResult:
    unitary: bool
    tber_AstarA: float
    tber_inv: float
    ber_AstarA: float
    ber_inv: float
    ber_verdict: bool
    iff_applies: bool


@dataclass(frozen=True)
class RefinementResult:
    value: float
    sampled_value: float
    witness_points: Tuple[complex, complex]
    rounds: List[float] = field(default_factory=list)


def check_t(t: float) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0 or math.isnan(t):
        raise InvalidParameterError(f"t must lie in [0, 1], got {t}")
    return t


def operator_for(model: KernelModel, A: object, name: str = "A") -> np.ndarray:
    A = as_operator(A, name)
    if A.shape[0] != model.dim:
        raise ShapeMismatchError(f"operator {name} has size {A.shape[0]}, model dimension is {model.dim}")
    return A


class PairScanner:
    """
    P[λ, μ] = |⟨A k̂_λ, k̂_μ⟩| over all sampled pairs. The adjoint term is the
    transpose: |⟨A* k̂_λ, k̂_μ⟩| = P[μ, λ].
    """

    def __init__(self, model: KernelModel, A: np.ndarray,
                 chunk_rows: Optional[int] = None, workers: Optional[int] = None):
        A = operator_for(model, A)
        K = model.normalized_kernels
        self.size = model.size
        self.chunk_rows = max(1, chunk_rows or settings.scan_chunk_rows)
        self.workers = max(1, workers or settings.scan_workers)
        self._AK = K @ A.T
        self._Kc = K.conj()
        self._dense: Optional[np.ndarray] = None
        if self.size * self.size <= DENSE_PAIR_LIMIT:
            self._dense = np.abs(self._AK @ self._Kc.T)

    def _rows(self, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
        if self._dense is not None:
            return self._dense[start:stop], self._dense[:, start:stop].T
        P = np.abs(self._AK[start:stop] @ self._Kc.T)
        Q = np.abs(self._AK @ self._Kc[start:stop].T).T
        return P, Q

    def _chunks(self) -> List[Tuple[int, int]]:
        return [(s, min(s + self.chunk_rows, self.size)) for s in range(0, self.size, self.chunk_rows)]

    def _map(self, fn: Callable[[Tuple[int, int]], Tuple]) -> List[Tuple]:
        chunks = self._chunks()
        if self.workers == 1 or len(chunks) == 1:
            return [fn(c) for c in chunks]
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            return list(pool.map(fn, chunks))

    def scan(self, t: float) -> TBerezinResult:
        def chunk_max(bounds: Tuple[int, int]) -> Tuple[float, Tuple[int, int]]:
            start, stop = bounds
            P, Q = self._rows(start, stop)
            if t == 1.0:
                O = P
            elif t == 0.0:
                O = Q
            else:
                O = t * P + (1.0 - t) * Q
            flat = int(np.argmax(O))
            i, j = divmod(flat, O.shape[1])
            return float(O[i, j]), (start + i, j)

        best_value, best_pair = -1.0, (0, 0)
        for value, pair in self._map(chunk_max):
            if value > best_value:
                best_value, best_pair = value, pair
        return TBerezinResult(value=best_value, witness=best_pair, t=t)

    def first_double_attainer(self, level: float, tol: float) -> Optional[Tuple[int, int]]:
        """Lexicographically first pair with both P and Q at least level − tol."""
        def chunk_hit(bounds: Tuple[int, int]) -> Tuple[Optional[Tuple[int, int]]]:
            start, stop = bounds
            P, Q = self._rows(start, stop)
            mask = (P >= level - tol) & (Q >= level - tol)
            if not mask.any():
                return (None,)
            i, j = divmod(int(np.argmax(mask)), mask.shape[1])
            return ((start + i, j),)

        for (hit,) in self._map(chunk_hit):
            if hit is not None:
                return hit
        return None


# --- Symbols and numbers ---

def berezin_symbol(model: KernelModel, A: object, point_index: int) -> complex:
    A = operator_for(model, A)
    k = normalized_kernel(model, point_index)
    return complex(np.vdot(k, A @ k))


def berezin_set(model: KernelModel, A: object) -> np.ndarray:
    """Ã(λ) at every sampled point."""
    A = operator_for(model, A)
    K = model.normalized_kernels
    return np.sum(K.conj() * (K @ A.T), axis=1)


def berezin_number(model: KernelModel, A: object) -> TBerezinResult:
    symbols = np.abs(berezin_set(model, A))
    i = int(np.argmax(symbols))
    return TBerezinResult(value=float(symbols[i]), witness=(i, i))


def berezin_norm(model: KernelModel, A: object) -> TBerezinResult:
    result = PairScanner(model, np.asarray(A)).scan(1.0)
    return TBerezinResult(value=result.value, witness=result.witness)


def pair_objective(model: KernelModel, A: object, lam: int, mu: int, t: float) -> float:
    """t|⟨A k̂_λ, k̂_μ⟩| + (1−t)|⟨A* k̂_λ, k̂_μ⟩| for one pair."""
    A = operator_for(model, A)
    k_lam = normalized_kernel(model, lam)
    k_mu = normalized_kernel(model, mu)
    forward = abs(np.vdot(k_mu, A @ k_lam))
    adjoint = abs(np.vdot(k_mu, A.conj().T @ k_lam))
    return float(t * forward + (1.0 - t) * adjoint)


def t_berezin_norm(model: KernelModel, A: object, t: float,
                   scanner: Optional[PairScanner] = None) -> TBerezinResult:
    t = check_t(t)
    scanner = scanner or PairScanner(model, np.asarray(A))
    return scanner.scan(t)


# --- Minimum over t ---

def _golden_section(f: Callable[[float], float], a: float, b: float, tol: float) -> None:
    """Shrinks [a, b] around the minimizer of a unimodal f; evaluations are recorded by f itself."""
    h = b - a
    if h <= tol:
        return
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(n - 1):
        h *= INV_PHI
        if yc < yd:
            b, d, yd = d, c, yc
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            d = a + INV_PHI * h
            yd = f(d)


def minimize_convex(f: Callable[[float], float], a: float, b: float, tol: float,
                    first: Optional[float] = None) -> MinTResult:
    """Golden-section minimization on [a, b]; the result is the best evaluated point."""
    trace: List[Tuple[float, float]] = []
    seen: Dict[float, float] = {}

    def recorded(x: float) -> float:
        if x not in seen:
            seen[x] = f(x)
            trace.append((x, seen[x]))
        return seen[x]

    if first is not None:
        recorded(first)
    recorded(a)
    recorded(b)
    _golden_section(recorded, a, b, tol)
    t_star, value = min(trace, key=lambda item: item[1])
    return MinTResult(t_star=t_star, value=value, trace=trace)


def min_t_berezin(model: KernelModel, A: object, tol_t: Optional[float] = None,
                  scanner: Optional[PairScanner] = None) -> MinTResult:
    """
    min over t of ‖A‖_{t−ber}. The map is convex and symmetric about 1/2, so
    its minimum sits at t = 1/2; the golden-section pass on [0, 1/2] records the
    curve and guards against roundoff.
    """
    tol_t = settings.min_t_tol if tol_t is None else tol_t
    if tol_t <= 0.0:
        raise InvalidParameterError(f"tol_t must be positive, got {tol_t}")
    scanner = scanner or PairScanner(model, np.asarray(A))
    result = minimize_convex(lambda t: scanner.scan(t).value, 0.0, 0.5, tol_t, first=0.5)
    logger.debug("min_t search finished.", extra={"t_star": result.t_star, "evaluations": len(result.trace)})
    return result


# --- Characterizations ---

def equality_witness(model: KernelModel, A: object, t: float, tol: Optional[float] = None) -> EqualityResult:
    """‖A‖_{t−ber} = ‖A‖_ber (finite-sample, attained version) with a pair attaining both terms."""
    t = check_t(t)
    if t in (0.0, 1.0):
        raise InvalidParameterError("equality_witness needs t strictly inside (0, 1)")
    tol = settings.equality_tol if tol is None else tol
    scanner = PairScanner(model, np.asarray(A))
    norm = scanner.scan(1.0).value
    tber = scanner.scan(t)
    equal = abs(tber.value - norm) <= tol
    witness = find_double_attainer(model, A, tol, scanner=scanner, level=norm) if equal else None
    if equal and witness is None:
        logger.warning("Values agree within tol but no sampled pair attains both terms.",
                       extra={"t": t, "t_berezin": tber.value, "berezin_norm": norm, "tol": tol})
    return EqualityResult(equal=equal, witness=witness, t_berezin=tber.value, berezin_norm=norm,
                          attained=witness is not None)


def find_double_attainer(model: KernelModel, A: object, tol: float,
                         scanner: Optional[PairScanner] = None,
                         level: Optional[float] = None) -> Optional[Tuple[int, int]]:
    """First pair with |⟨Ak̂_λ,k̂_μ⟩| and |⟨A*k̂_λ,k̂_μ⟩| both within tol of ‖A‖_ber."""
    scanner = scanner or PairScanner(model, np.asarray(A))
    level = scanner.scan(1.0).value if level is None else level
    return scanner.first_double_attainer(level, tol)


def unitary_check(model: KernelModel, A: object, t: float, tol: Optional[float] = None) -> UnitaryCheckResult:
    """
    Unitarity test through ‖A*A‖_{t−ber} ≤ 1 and ‖(A*A)^{-1}‖_{t−ber} ≤ 1, with
    the Berezin-number version alongside. The equivalence is only claimed on
    the standard model; elsewhere only unitary ⇒ both ≤ 1 holds.
    """
    t = check_t(t)
    tol = settings.equality_tol if tol is None else tol
    A = operator_for(model, A)
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= settings.inv_rel * s[0]:
        raise NotInvertibleError(f"operator is numerically singular (smallest singular value {s[-1]:.3e})")
    AstarA = HermitianMatrix(A.conj().T @ A)
    inv = inverse_psd(AstarA)
    tber_a = t_berezin_norm(model, AstarA.entries, t).value
    tber_i = t_berezin_norm(model, inv.entries, t).value
    ber_a = berezin_number(model, AstarA.entries).value
    ber_i = berezin_number(model, inv.entries).value
    iff_applies = model.kind == "standard"
    if not iff_applies:
        logger.warning("Unitary characterization is one-directional on sampled models.", extra={"model_kind": model.kind})
    return UnitaryCheckResult(
        unitary=tber_a <= 1.0 + tol and tber_i <= 1.0 + tol,
        tber_AstarA=tber_a,
        tber_inv=tber_i,
        ber_AstarA=ber_a,
        ber_inv=ber_i,
        ber_verdict=ber_a <= 1.0 + tol and ber_i <= 1.0 + tol,
        iff_applies=iff_applies,
    )


# --- Local refinement on disk models ---

def _ring_spacing(model: KernelModel, z: complex) -> Tuple[float, float]:
    pts = np.array([p.payload for p in model.points], dtype=np.complex128)
    radii = np.unique(np.round(np.abs(pts), 12))
    r = abs(z)
    gaps = np.abs(radii - r)
    gaps = gaps[gaps > 0.0]
    h_r = float(gaps.min()) if gaps.size else 0.1
    on_ring = int(np.sum(np.isclose(np.abs(pts), r, atol=1e-12)))
    h_theta = 2.0 * np.pi / max(on_ring, 1)
    return h_r, h_theta


def _neighbourhood(z: complex, h_r: float, h_theta: float, r_max: float) -> np.ndarray:
    offsets = np.arange(-4, 5).astype(float)
    radii = np.clip(abs(z) + offsets * h_r, 0.0, r_max)
    angles = np.angle(z) + offsets * h_theta
    grid = (radii[:, None] * np.exp(1j * angles[None, :])).ravel()
    return np.unique(np.round(grid, 15))


def refine_supremum(model: KernelModel, A: object, t: float, rounds: int = 2) -> RefinementResult:
    """
    Re-grid a 3×3 neighbourhood of each witness point at 4× resolution and
    rescan, for the given number of rounds. Only for Hardy models.
    """
    t = check_t(t)
    if model.kind != "hardy" or model.truncation is None:
        raise InvalidParameterError("refinement needs a Hardy model")
    A = operator_for(model, A)
    base = t_berezin_norm(model, A, t)
    lam = complex(model.points[base.witness[0]].payload)
    mu = complex(model.points[base.witness[1]].payload)
    h_lam = _ring_spacing(model, lam)
    h_mu = _ring_spacing(model, mu)
    best, history = base.value, []
    r_max = settings.hardy_r_max
    for _ in range(rounds):
        h_lam = (h_lam[0] / 4.0, h_lam[1] / 4.0)
        h_mu = (h_mu[0] / 4.0, h_mu[1] / 4.0)
        pts = np.unique(np.concatenate([
            _neighbourhood(lam, *h_lam, r_max), _neighbourhood(mu, *h_mu, r_max), [lam, mu],
        ]))
        local = hardy_model_at(model.truncation, pts, r_max)
        found = t_berezin_norm(local, A, t)
        history.append(found.value)
        if found.value > best:
            best = found.value
            lam = complex(local.points[found.witness[0]].payload)
            mu = complex(local.points[found.witness[1]].payload)
    logger.info("Supremum refinement finished.", extra={"sampled": base.value, "refined": best})
    return RefinementResult(value=best, sampled_value=base.value, witness_points=(lam, mu), rounds=history)
