# modules/verification/generators.py
"""
Seeded random operators for the verification campaign.

Every case owns a Philox stream keyed by (master seed, case index), so a case
can be replayed on its own and results do not depend on scheduling.
"""
from typing import Tuple, Union

import numpy as np
import scipy.linalg

from core.errors import InvalidDimensionError, InvalidParameterError
from modules.matrix_calculus import Operator, absolute_values, apply_spectral

SINGLE_CLASSES = ("general", "hermitian", "psd", "unitary", "nilpotent")
PAIR_CLASSES = ("commuting-pair", "psd-pair")
OPERATOR_CLASSES = SINGLE_CLASSES + PAIR_CLASSES

OperatorPair = Tuple[Operator, Operator]


def case_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def ginibre(n: int, rng: np.random.Generator) -> Operator:
    """Standard normal real and imaginary parts."""
    if n < 1:
        raise InvalidDimensionError(f"operator size must be >= 1, got {n}")
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _unitary_factor(G: Operator) -> Operator:
    Q, R = scipy.linalg.qr(G)
    d = np.diag(R)
    return Q * np.where(np.abs(d) > 0.0, d / np.where(np.abs(d) > 0.0, np.abs(d), 1.0), 1.0)


def random_unitary(n: int, rng: np.random.Generator) -> Operator:
    return _unitary_factor(ginibre(n, rng))


def _single(n: int, operator_class: str, rng: np.random.Generator) -> Operator:
    G = ginibre(n, rng)
    if operator_class == "general":
        return G
    if operator_class == "hermitian":
        return 0.5 * (G + G.conj().T)
    if operator_class == "psd":
        return G.conj().T @ G
    if operator_class == "unitary":
        return _unitary_factor(G)
    if operator_class == "nilpotent":
        return np.triu(G, k=1)
    raise InvalidParameterError(f"unknown operator class '{operator_class}'")


def commuting_pair(n: int, rng: np.random.Generator) -> OperatorPair:
    """(A, p(|A|)) for a random real cubic p shifted to be nonnegative on the spectrum of |A|."""
    A = ginibre(n, rng)
    abs_A, _ = absolute_values(A)
    coeffs = rng.standard_normal(4)
    spectrum = abs_A.decomposition().eigenvalues
    shift = float(np.min(np.polyval(coeffs, spectrum))) - float(rng.uniform(0.0, 1.0))
    B = apply_spectral(abs_A, lambda x: np.polyval(coeffs, x) - shift)
    return A, B.entries


def random_pair(n: int, operator_class: str, rng: np.random.Generator) -> OperatorPair:
    if operator_class == "commuting-pair":
        return commuting_pair(n, rng)
    if operator_class == "psd-pair":
        return _single(n, "psd", rng), _single(n, "psd", rng)
    if operator_class in SINGLE_CLASSES:
        return _single(n, operator_class, rng), _single(n, operator_class, rng)
    raise InvalidParameterError(f"unknown operator class '{operator_class}'")


def random_operator(n: int, operator_class: str, rng: np.random.Generator) -> Union[Operator, OperatorPair]:
    """
    One operator for a single class, an (A, B) pair for commuting-pair and psd-pair.

    general: Ginibre entries; hermitian: symmetrized; psd: G*G; unitary: the Q
    factor of a QR with the phases of diag(R) absorbed; nilpotent: strictly upper triangular.
    """
    if operator_class in PAIR_CLASSES:
        return random_pair(n, operator_class, rng)
    return _single(n, operator_class, rng)


def random_invertible_nonunitary(n: int, rng: np.random.Generator, condition: float = 1.5625) -> Operator:
    """U diag(σ) V* with σ spread so that σ_max/σ_min ≥ condition (n ≥ 2)."""
    if n < 2:
        raise InvalidDimensionError("a prescribed condition number needs n >= 2")
    sigma = np.exp(rng.uniform(-0.2, 0.2, n))
    root = float(np.sqrt(condition))
    sigma[0], sigma[-1] = root, 1.0 / root
    return (random_unitary(n, rng) * sigma) @ random_unitary(n, rng).conj().T


def random_upper_nonnormal(n: int, rng: np.random.Generator) -> Operator:
    """Upper triangular with a nonzero strictly upper part, hence not normal."""
    if n < 2:
        raise InvalidDimensionError("a non-normal triangular matrix needs n >= 2")
    T = np.triu(ginibre(n, rng))
    T[0, -1] += 1.0
    return T
