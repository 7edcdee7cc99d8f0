# modules/kernel_models.py
"""
Finite reproducing-kernel models: a sampled domain, one kernel vector per point
and the kernel norms.

Kernels are stored as the rows of an (m, dim) matrix, so row j is k_{λ_j} in the
ambient coordinates. Models are immutable once built and can be shared between
worker threads.
"""
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Optional, Sequence, Tuple, Union

import numpy as np

from core.errors import IndexOutOfRangeError, InvalidDimensionError, InvalidPointError, ZeroKernelError
from core.logger import logger
from core.settings import settings
from utils.serialization import (
    HardyModelSpec, ModelDocument, OnbModelSpec, StandardModelSpec, decode_complex_matrix, parse_document,
)

UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class DomainPoint:
    identifier: int
    payload: Any  # complex for disk models, int for the standard model


@dataclass(frozen=True, eq=False)
class KernelModel:
    dim: int
    points: Tuple[DomainPoint, ...]
    kernels: np.ndarray
    norms: np.ndarray
    kind: str = "custom"
    truncation: Optional[int] = None
    _normalized: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise InvalidDimensionError(f"model dimension must be positive, got {self.dim}")
        kernels = np.array(self.kernels, dtype=np.complex128)
        norms = np.array(self.norms, dtype=np.float64)
        m = len(self.points)
        if m == 0:
            raise InvalidDimensionError("model has no points")
        if kernels.shape != (m, self.dim) or norms.shape != (m,):
            raise InvalidDimensionError(
                f"kernel array {kernels.shape} / norms {norms.shape} do not match {m} points of dim {self.dim}"
            )
        if np.any(norms <= 0.0):
            j = int(np.argmin(norms))
            raise ZeroKernelError(f"kernel at point {j} is zero")
        ids = [p.identifier for p in self.points]
        if len(set(ids)) != len(ids):
            raise InvalidPointError("point identifiers must be unique")
        normalized = kernels / norms[:, None]
        for arr in (kernels, norms, normalized):
            arr.setflags(write=False)
        object.__setattr__(self, "kernels", kernels)
        object.__setattr__(self, "norms", norms)
        object.__setattr__(self, "_normalized", normalized)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def normalized_kernels(self) -> np.ndarray:
        """(m, dim) read-only array whose rows are the unit vectors k̂_λ."""
        return self._normalized

    def gram(self) -> np.ndarray:
        """G[i, j] = ⟨k_{λ_j}, k_{λ_i}⟩."""
        K = self.kernels
        return K.conj() @ K.T

    def describe(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, "points": self.size, "truncation": self.truncation}


def normalized_kernel(model: KernelModel, point_index: int) -> np.ndarray:
    if not 0 <= point_index < model.size:
        raise IndexOutOfRangeError(f"point index {point_index} outside [0, {model.size})")
    return model.normalized_kernels[point_index]


def standard_model(n: int) -> KernelModel:
    if n < 1:
        raise InvalidDimensionError(f"standard model needs n >= 1, got {n}")
    points = tuple(DomainPoint(i, i) for i in range(n))
    return KernelModel(dim=n, points=points, kernels=np.eye(n), norms=np.ones(n), kind="standard")


def hardy_norm_squared(abs_sq: np.ndarray, trunc: int) -> np.ndarray:
    """Σ_{n=0}^{N} x^n for x = |λ|² in closed form; exp/log keeps it accurate near x = 1."""
    x = np.asarray(abs_sq, dtype=np.float64)
    out = np.ones_like(x)
    nz = x > 0.0
    xn = x[nz]
    out[nz] = -np.expm1((trunc + 1) * np.log(xn)) / (1.0 - xn)
    return out


def _validate_disk_points(lams: np.ndarray, r_max: float) -> None:
    radii = np.abs(lams)
    if np.any(radii >= 1.0):
        raise InvalidPointError(f"disk points must satisfy |λ| < 1; got max radius {radii.max():.6g}")
    if np.any(radii > r_max):
        raise InvalidPointError(f"disk points exceed the radius cap {r_max}; got {radii.max():.6g}")


def hardy_model_at(trunc: int, lams: Sequence[complex], r_max: Optional[float] = None) -> KernelModel:
    """Truncated Hardy model at explicit disk points; k_λ = (1, λ̄, …, λ̄^N)."""
    if trunc < 1:
        raise InvalidDimensionError(f"Hardy truncation must be >= 1, got {trunc}")
    lam_arr = np.asarray(lams, dtype=np.complex128).ravel()
    _validate_disk_points(lam_arr, settings.hardy_r_max if r_max is None else r_max)
    kernels = np.power.outer(lam_arr.conj(), np.arange(trunc + 1))
    norms = np.sqrt(hardy_norm_squared(np.abs(lam_arr) ** 2, trunc))
    points = tuple(DomainPoint(i, complex(z)) for i, z in enumerate(lam_arr))
    return KernelModel(dim=trunc + 1, points=points, kernels=kernels, norms=norms, kind="hardy", truncation=trunc)


def hardy_grid(radii: Sequence[float], angles_per_ring: int) -> np.ndarray:
    """Origin once, then each positive ring in ascending order sampled at uniform angles."""
    if angles_per_ring < 1:
        raise InvalidDimensionError(f"angles_per_ring must be >= 1, got {angles_per_ring}")
    rings = sorted(set(float(r) for r in radii))
    if any(r < 0.0 for r in rings):
        raise InvalidPointError("radii must be nonnegative")
    theta = 2.0 * np.pi * np.arange(angles_per_ring) / angles_per_ring
    parts = [np.zeros(1, dtype=np.complex128)]
    for r in rings:
        if r > 0.0:
            parts.append(r * np.exp(1j * theta))
    return np.concatenate(parts)


def hardy_model(
    trunc: int,
    radii: Optional[Sequence[float]] = None,
    angles_per_ring: Optional[int] = None,
    r_max: Optional[float] = None,
) -> KernelModel:
    radii = settings.hardy_radii if radii is None else radii
    angles_per_ring = settings.hardy_angles if angles_per_ring is None else angles_per_ring
    if any(r >= 1.0 for r in radii):
        raise InvalidPointError(f"Hardy radii must be < 1, got {max(radii)}")
    model = hardy_model_at(trunc, hardy_grid(radii, angles_per_ring), r_max)
    logger.info("Hardy model built.", extra=model.describe())
    return model


def model_from_onb(basis_evaluations: np.ndarray) -> KernelModel:
    """Rows index basis functions e_n, columns index points; kernel coordinates are conj(e_n(λ))."""
    E = np.asarray(basis_evaluations, dtype=np.complex128)
    if E.ndim != 2 or E.size == 0:
        raise InvalidDimensionError(f"basis evaluations must be a nonempty matrix, got shape {E.shape}")
    kernels = E.conj().T
    norms = np.linalg.norm(kernels, axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroKernelError(f"basis evaluations vanish identically at point {int(zero[0])}")
    points = tuple(DomainPoint(j, j) for j in range(E.shape[1]))
    return KernelModel(dim=E.shape[0], points=points, kernels=kernels, norms=norms, kind="onb")


ModelSpecType = Union[StandardModelSpec, HardyModelSpec, OnbModelSpec]


def model_from_spec(spec: ModelSpecType) -> KernelModel:
    if isinstance(spec, StandardModelSpec):
        return standard_model(spec.n)
    if isinstance(spec, HardyModelSpec):
        return hardy_model(spec.N, spec.radii, spec.angles)
    return model_from_onb(decode_complex_matrix(spec.evaluations))


@lru_cache(maxsize=64)
def _cached_model(spec_json: str) -> KernelModel:
    return model_from_spec(parse_document({"spec": json.loads(spec_json)}, ModelDocument).spec)


def cached_model_from_spec(spec: ModelSpecType) -> KernelModel:
    """Models are immutable, so campaigns share one instance per distinct spec."""
    return _cached_model(spec.model_dump_json())


# --- Hardy shift helpers ---

def shift_operator(trunc: int) -> np.ndarray:
    """Truncated M_z on coefficient vectors: S[n+1, n] = 1."""
    if trunc < 1:
        raise InvalidDimensionError(f"Hardy truncation must be >= 1, got {trunc}")
    return np.eye(trunc + 1, k=-1, dtype=np.complex128)


def truncated_shift_symbol(lams: np.ndarray, trunc: int) -> np.ndarray:
    """λ(1 − |λ|^{2N}) / (1 − |λ|^{2(N+1)}), with value 0 at the origin."""
    lam = np.asarray(lams, dtype=np.complex128)
    x = np.abs(lam) ** 2
    out = np.zeros_like(lam)
    nz = x > 0.0
    logx = np.log(x[nz])
    out[nz] = lam[nz] * np.expm1(trunc * logx) / np.expm1((trunc + 1) * logx)
    return out


def mz_objective_closed_form(lam, mu, t: float):
    """
    Untruncated M_z pair objective √((1−|λ|²)(1−|μ|²))·(t|μ| + (1−t)|λ|)/|1 − λ̄μ|.
    Broadcasts over arrays of λ and μ.
    """
    lam = np.asarray(lam, dtype=np.complex128)
    mu = np.asarray(mu, dtype=np.complex128)
    a, b = np.abs(lam), np.abs(mu)
    return np.sqrt((1.0 - a * a) * (1.0 - b * b)) * (t * b + (1.0 - t) * a) / np.abs(1.0 - lam.conj() * mu)
