# modules/orlicz.py
"""
Orlicz functions, power factor pairs (g, h) = (t^s, t^{1−s}) and the scalar
weight f used by the Orlicz-type bounds.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Tuple

import numpy as np

from core.errors import ConfigurationError, InvalidParameterError, NotConvexOrliczError
from core.logger import logger
from modules.matrix_calculus import HermitianMatrix, ScalarFn, apply_spectral

VIOLATION_TOL = 1e-10
CUSTOM_ZERO_TOL = 1e-12


def validation_grid() -> np.ndarray:
    """1024 points: 0 followed by a log-spaced sweep up to 10³."""
    return np.concatenate([[0.0], np.logspace(-6.0, 3.0, 1023)])


class SubmultiplicativeFlag(str, Enum):
    PROVED = "proved"
    CHECKED = "numerically-checked"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OrliczFn:
    kind: str                     # "power" or "custom"
    func: ScalarFn
    submultiplicative: SubmultiplicativeFlag
    r: Optional[float] = None
    name: str = ""

    def __call__(self, x):
        return self.func(np.clip(np.asarray(x, dtype=np.float64), 0.0, None))

    def scalar(self, x: float) -> float:
        return float(self(x))

    @property
    def is_submultiplicative(self) -> bool:
        return self.submultiplicative != SubmultiplicativeFlag.UNKNOWN

    def describe(self) -> dict:
        return {"kind": self.kind, "r": self.r, "name": self.name, "submultiplicative": self.submultiplicative.value}


def power_orlicz(r: float) -> OrliczFn:
    r = float(r)
    if not r >= 1.0:
        raise NotConvexOrliczError(f"t^r is an Orlicz function only for r >= 1, got r={r}")
    return OrliczFn(
        kind="power",
        func=lambda x: np.power(x, r),
        submultiplicative=SubmultiplicativeFlag.PROVED,
        r=r,
        name=f"t^{r:g}",
    )


def _check_orlicz_shape(func: ScalarFn, name: str) -> None:
    grid = validation_grid()
    values = np.asarray(func(grid), dtype=np.float64)
    if abs(values[0]) > CUSTOM_ZERO_TOL:
        raise NotConvexOrliczError(f"{name}: φ(0) = {values[0]:.3e} is not 0")
    scale = 1.0 + np.abs(values)
    if np.any(np.diff(values) < -VIOLATION_TOL * scale[1:]):
        raise NotConvexOrliczError(f"{name}: not nondecreasing on the validation grid")
    mids = 0.5 * (grid[:-1] + grid[1:])
    mid_values = np.asarray(func(mids), dtype=np.float64)
    chords = 0.5 * (values[:-1] + values[1:])
    if np.any(mid_values > chords + VIOLATION_TOL * scale[1:]):
        raise NotConvexOrliczError(f"{name}: not midpoint-convex on the validation grid")


def custom_orlicz(func: ScalarFn, name: str, acknowledge_grid_checks: bool = False) -> OrliczFn:
    """
    User-supplied φ. Convexity and monotonicity are only checked on a grid, so
    the caller has to acknowledge that explicitly. Submultiplicativity starts
    unknown; see check_submultiplicative.
    """
    if not acknowledge_grid_checks:
        raise ConfigurationError(f"custom Orlicz function '{name}' requires acknowledging grid-based checks")
    _check_orlicz_shape(func, name)
    logger.warning(f"Custom Orlicz function '{name}' accepted on grid checks only.")
    return OrliczFn(kind="custom", func=func, submultiplicative=SubmultiplicativeFlag.UNKNOWN, name=name)


@dataclass(frozen=True)
class SubmultiplicativeCheck:
    ok: bool
    worst: Tuple[float, float, float]  # (x, y, φ(xy) / (φ(x)φ(y)))


def check_submultiplicative(phi: OrliczFn, grid: Optional[Iterable[float]] = None) -> SubmultiplicativeCheck:
    """φ(xy) ≤ φ(x)φ(y)(1 + 1e−10) on all pairs drawn from the grid."""
    xs = validation_grid()[::16] if grid is None else np.asarray(list(grid), dtype=np.float64)
    if np.any(xs < 0.0):
        raise InvalidParameterError("submultiplicativity grid must be nonnegative")
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    lhs = np.asarray(phi(X * Y), dtype=np.float64)
    rhs = np.asarray(phi(X), dtype=np.float64) * np.asarray(phi(Y), dtype=np.float64)
    excess = lhs - rhs * (1.0 + VIOLATION_TOL)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(rhs > 0.0, lhs / np.where(rhs > 0.0, rhs, 1.0), np.where(lhs > 0.0, np.inf, 1.0))
    i, j = np.unravel_index(int(np.argmax(excess)), excess.shape)
    ok = bool(np.all(excess <= 0.0))
    return SubmultiplicativeCheck(ok=ok, worst=(float(X[i, j]), float(Y[i, j]), float(ratio[i, j])))


def mark_checked(phi: OrliczFn, check: SubmultiplicativeCheck) -> OrliczFn:
    if not check.ok:
        raise NotConvexOrliczError(f"{phi.name} fails submultiplicativity at (x, y, ratio)={check.worst}")
    if phi.submultiplicative == SubmultiplicativeFlag.PROVED:
        return phi
    return OrliczFn(phi.kind, phi.func, SubmultiplicativeFlag.CHECKED, phi.r, phi.name)


@dataclass(frozen=True)
class PowerPair:
    """g(t) = t^s, h(t) = t^{1−s}, with 0⁰ = 1."""
    s: float

    def g(self, x):
        return np.power(x, self.s)

    def h(self, x):
        return np.power(x, 1.0 - self.s)

    def g_power(self, H: HermitianMatrix, k: int, phi: Optional[OrliczFn] = None) -> HermitianMatrix:
        """φ(g^k(H)) by one spectral application on H."""
        return self._apply(H, k * self.s, phi)

    def h_power(self, H: HermitianMatrix, k: int, phi: Optional[OrliczFn] = None) -> HermitianMatrix:
        return self._apply(H, k * (1.0 - self.s), phi)

    def g2(self, H: HermitianMatrix) -> HermitianMatrix:
        return self.g_power(H, 2)

    def g4(self, H: HermitianMatrix) -> HermitianMatrix:
        return self.g_power(H, 4)

    def h2(self, H: HermitianMatrix) -> HermitianMatrix:
        return self.h_power(H, 2)

    def h4(self, H: HermitianMatrix) -> HermitianMatrix:
        return self.h_power(H, 4)

    @staticmethod
    def _apply(H: HermitianMatrix, exponent: float, phi: Optional[OrliczFn]) -> HermitianMatrix:
        if phi is None:
            return apply_spectral(H, lambda x: np.power(x, exponent))
        return apply_spectral(H, lambda x: phi(np.power(x, exponent)))

    def triggers_zero_power(self, *matrices: HermitianMatrix, zero_tol: float = 1e-12) -> bool:
        """True when an endpoint s hits a zero eigenvalue, i.e. the 0⁰ = 1 convention is in use."""
        if self.s not in (0.0, 1.0):
            return False
        for H in matrices:
            w = H.decomposition().eigenvalues
            if w.size and np.min(np.abs(w)) <= zero_tol * (1.0 + np.max(np.abs(w))):
                logger.warning("0^0 = 1 convention applied to a zero eigenvalue.", extra={"s": self.s})
                return True
        return False


def factor_pair(s: float) -> PowerPair:
    s = float(s)
    if not 0.0 <= s <= 1.0:
        raise InvalidParameterError(f"s must lie in [0, 1], got {s}")
    return PowerPair(s)


@dataclass(frozen=True)
class WeightFn:
    """The scalar value α = f(t) of the weight function."""
    value: float

    def __post_init__(self) -> None:
        if not self.value >= 0.0 or not np.isfinite(self.value):
            raise InvalidParameterError(f"weight value must be a finite nonnegative real, got {self.value}")

    @classmethod
    def from_shape(cls, t: float) -> "WeightFn":
        """f(t) = t/(1−t) for t in (0, 1)."""
        if not 0.0 < t < 1.0:
            raise InvalidParameterError(f"t/(1-t) needs t in (0, 1), got {t}")
        return cls(t / (1.0 - t))

    @property
    def coefficients(self) -> Tuple[float, float]:
        """(f/(1+f), 1/(1+f)); the pair sums to 1."""
        outer = 1.0 / (1.0 + self.value)
        return 1.0 - outer, outer


def weight_from_spec(alpha: Optional[float] = None, t: Optional[float] = None) -> WeightFn:
    if alpha is not None:
        return WeightFn(alpha)
    if t is None:
        raise InvalidParameterError("either alpha or t is required")
    return WeightFn.from_shape(t)

