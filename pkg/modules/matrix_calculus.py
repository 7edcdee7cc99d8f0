# modules/matrix_calculus.py
"""
Dense matrix calculus: |A| via SVD, spectral function application on PSD
Hermitian matrices, spectral radius, operator norm and the commutation residual
used by the product bound.
"""
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.linalg

from core.errors import NotPSDError, NumericError, ShapeMismatchError
from core.logger import logger
from core.settings import settings

Operator = np.ndarray
ScalarFn = Callable[[np.ndarray], np.ndarray]

HERMITIAN_REL_TOL = 1e-10


def as_operator(A: object, name: str = "A") -> Operator:
    """Coerce to a complex128 square matrix."""
    arr = np.asarray(A, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ShapeMismatchError(f"operator {name} must be a nonempty square matrix, got shape {arr.shape}")
    return arr


def check_same_size(A: Operator, B: Operator) -> None:
    if A.shape != B.shape:
        raise ShapeMismatchError(f"operator shapes differ: {A.shape} vs {B.shape}")


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray   # real, ascending
    eigenvectors: np.ndarray  # unitary, columns match eigenvalues

    def reconstruct(self) -> np.ndarray:
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """
    A Hermitian matrix, symmetrized at construction.

    A known eigendecomposition can be attached (e.g. from an SVD) so later
    spectral calculus reuses it instead of calling eigh again.
    """
    entries: np.ndarray
    _decomposition: Optional[SpectralDecomposition] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        H = as_operator(self.entries, "H")
        asym = operator_norm(H - H.conj().T)
        if asym > HERMITIAN_REL_TOL * (1.0 + operator_norm(H)):
            raise ShapeMismatchError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
        object.__setattr__(self, "entries", 0.5 * (H + H.conj().T))

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def decomposition(self) -> SpectralDecomposition:
        if self._decomposition is None:
            try:
                w, V = scipy.linalg.eigh(self.entries)
            except scipy.linalg.LinAlgError as e:
                raise NumericError(f"Hermitian eigensolver failed: {e}") from e
            object.__setattr__(self, "_decomposition", SpectralDecomposition(w, V))
        assert self._decomposition is not None
        return self._decomposition

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(self.entries + other.entries)

    def scaled(self, c: float) -> "HermitianMatrix":
        return HermitianMatrix(c * self.entries)


def _decomposition_from_svd(V: np.ndarray, s: np.ndarray) -> SpectralDecomposition:
    # svd returns descending singular values; eigh order is ascending
    order = np.argsort(s, kind="stable")
    return SpectralDecomposition(s[order], V[:, order])


def absolute_values(A: Operator) -> Tuple[HermitianMatrix, HermitianMatrix]:
    """(|A|, |A*|) from one SVD A = U Σ V*: |A| = V Σ V*, |A*| = U Σ U*."""
    A = as_operator(A)
    try:
        U, s, Vh = scipy.linalg.svd(A)
    except scipy.linalg.LinAlgError as e:
        raise NumericError(f"SVD failed: {e}") from e
    V = Vh.conj().T
    abs_A = HermitianMatrix((V * s) @ Vh, _decomposition_from_svd(V, s))
    abs_A_star = HermitianMatrix((U * s) @ U.conj().T, _decomposition_from_svd(U, s))
    return abs_A, abs_A_star


def absolute_value(A: Operator) -> HermitianMatrix:
    return absolute_values(A)[0]


def _psd_spectrum(H: HermitianMatrix) -> SpectralDecomposition:
    dec = H.decomposition()
    w = dec.eigenvalues
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    threshold = -settings.psd_clamp_rel * norm
    if w.size and w[0] < threshold:
        raise NotPSDError(float(w[0]), threshold)
    return SpectralDecomposition(np.clip(w, 0.0, None), dec.eigenvectors)


def apply_spectral(H: HermitianMatrix, f: ScalarFn) -> HermitianMatrix:
    """
    f(H) = V f(Λ) V* for PSD H. Eigenvalues in [-psd_clamp_rel·‖H‖, 0) are
    clamped to 0; anything more negative raises NotPSDError.
    """
    if not isinstance(H, HermitianMatrix):
        H = HermitianMatrix(H)
    dec = _psd_spectrum(H)
    values = np.asarray(f(dec.eigenvalues), dtype=np.float64)
    if values.shape != dec.eigenvalues.shape:
        values = np.array([float(f(x)) for x in dec.eigenvalues])
    if not np.all(np.isfinite(values)):
        raise NumericError("spectral function produced non-finite values")
    V = dec.eigenvectors
    order = np.argsort(values, kind="stable")
    result = (V * values) @ V.conj().T
    return HermitianMatrix(result, SpectralDecomposition(values[order], V[:, order]))


def is_psd(H: HermitianMatrix) -> bool:
    try:
        _psd_spectrum(H)
    except NotPSDError:
        return False
    return True


def require_psd(A: Operator, name: str = "A") -> HermitianMatrix:
    """Validate that A is Hermitian PSD within the clamp tolerance."""
    H = HermitianMatrix(as_operator(A, name))
    _psd_spectrum(H)
    return H


def spectral_radius(B: Operator) -> float:
    B = as_operator(B, "B")
    try:
        eigenvalues = scipy.linalg.eigvals(B)
    except scipy.linalg.LinAlgError as e:
        raise NumericError(f"eigensolver did not converge: {e}") from e
    if not np.all(np.isfinite(eigenvalues)):
        raise NumericError("eigensolver returned non-finite eigenvalues")
    return float(np.max(np.abs(eigenvalues)))


def operator_norm(A: object) -> float:
    """Largest singular value; accepts any rectangular matrix."""
    arr = np.asarray(A)
    if arr.size == 0:
        return 0.0
    return float(scipy.linalg.svdvals(np.atleast_2d(arr))[0])


def commutation_tolerance(A: Operator, B: Operator) -> float:
    return settings.comm_rel * (1.0 + operator_norm(A)) * (1.0 + operator_norm(B))


def commutation_residual(A: Operator, B: Operator) -> float:
    """‖|A|B − B*|A|‖, the residual of the product-bound precondition."""
    A = as_operator(A, "A")
    B = as_operator(B, "B")
    check_same_size(A, B)
    abs_A = absolute_value(A).entries
    residual = operator_norm(abs_A @ B - B.conj().T @ abs_A)
    logger.debug("Commutation residual computed.", extra={"residual": residual})
    return residual


def inverse_psd(H: HermitianMatrix) -> HermitianMatrix:
    """Inverse of a positive definite Hermitian matrix via its eigendecomposition."""
    dec = H.decomposition()
    if dec.eigenvalues.size == 0 or dec.eigenvalues[0] <= 0.0:
        raise NumericError("matrix is not positive definite")
    inv_values = 1.0 / dec.eigenvalues
    V = dec.eigenvectors
    order = np.argsort(inv_values, kind="stable")
    return HermitianMatrix((V * inv_values) @ V.conj().T, SpectralDecomposition(inv_values[order], V[:, order]))
