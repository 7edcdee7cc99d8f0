# modules/block_operators.py
"""
Direct-sum models H ⊕ … ⊕ H and block operator matrices.

A composite kernel is (c₁e^{iψ₁}k̂_{λ₁}, …, c_n e^{iψ_n}k̂_{λ_n}) with
Σ c_i² = 1. Weights come from a hyperspherical angle grid, phases from a
uniform grid on [0, 2π). The first active component carries phase 0, since a
global phase leaves every |⟨·,·⟩| unchanged. Inactive components (c_i = 0)
carry no point index, so the family has no duplicates. For two copies it is
closed under swapping the components.
"""
import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigurationError, InvalidDimensionError, ShapeMismatchError
from core.logger import logger
from core.settings import settings
from modules.kernel_models import DomainPoint, KernelModel
from modules.matrix_calculus import as_operator

ZERO_WEIGHT = 1e-15


@dataclass(frozen=True, eq=False)
class DirectSumModel(KernelModel):
    base: Optional[KernelModel] = None
    copies: int = 2
    weight_grid: Tuple[Tuple[float, ...], ...] = ()
    phase_grid: Tuple[float, ...] = ()


def weight_grid(copies: int, steps: int) -> List[Tuple[float, ...]]:
    """
    Unit weight vectors from angles θ_k ∈ {jπ/(2(steps−1))}:
    c₁ = cos θ₁, c₂ = sin θ₁ cos θ₂, …, c_n = sin θ₁ ⋯ sin θ_{n−1}.
    Contains every standard basis vector.
    """
    if copies < 2:
        raise InvalidDimensionError(f"direct sums need at least 2 copies, got {copies}")
    if steps < 2:
        raise InvalidDimensionError(f"weight_steps must be >= 2, got {steps}")
    angles = [j * np.pi / (2 * (steps - 1)) for j in range(steps)]
    seen, grid = set(), []
    for thetas in itertools.product(angles, repeat=copies - 1):
        w, tail = [], 1.0
        for theta in thetas:
            w.append(tail * np.cos(theta))
            tail *= np.sin(theta)
        w.append(tail)
        w = [0.0 if abs(c) < ZERO_WEIGHT else float(c) for c in w]
        key = tuple(round(c, 12) for c in w)
        if key not in seen:
            seen.add(key)
            grid.append(tuple(w))
    return grid


def phase_grid(steps: int) -> List[float]:
    if steps < 1:
        raise InvalidDimensionError(f"phase_steps must be >= 1, got {steps}")
    return [2.0 * np.pi * k / steps for k in range(steps)]


def direct_sum_size(base_size: int, weights: Sequence[Tuple[float, ...]], phase_steps: int) -> int:
    total = 0
    for w in weights:
        active = sum(1 for c in w if c > 0.0)
        total += base_size ** active * phase_steps ** (active - 1)
    return total


def direct_sum_model(
    base: KernelModel,
    copies: int = 2,
    weight_steps: Optional[int] = None,
    phase_steps: Optional[int] = None,
    max_kernels: Optional[int] = None,
) -> DirectSumModel:
    weight_steps = settings.ds_weight_steps if weight_steps is None else weight_steps
    phase_steps = settings.ds_phase_steps if phase_steps is None else phase_steps
    max_kernels = settings.ds_max_kernels if max_kernels is None else max_kernels
    if copies > settings.ds_max_copies:
        raise ConfigurationError(f"at most {settings.ds_max_copies} copies are supported, got {copies}")
    weights = weight_grid(copies, weight_steps)
    phases = phase_grid(phase_steps)
    size = direct_sum_size(base.size, weights, phase_steps)
    if size > max_kernels:
        raise ConfigurationError(
            f"direct-sum family would hold {size} kernels (cap {max_kernels})", computed_size=size
        )

    d, m = base.dim, base.size
    K = base.normalized_kernels
    phase_arr = np.asarray(phases)
    blocks, payloads = [], []
    for w in weights:
        active = [i for i, c in enumerate(w) if c > 0.0]
        a = len(active)
        idx = np.indices((m,) * a).reshape(a, -1).T                      # (m^a, a)
        if a > 1:
            ph = np.indices((phase_steps,) * (a - 1)).reshape(a - 1, -1).T  # (P^(a-1), a-1)
        else:
            ph = np.zeros((1, 0), dtype=int)
        rows = np.zeros((idx.shape[0], ph.shape[0], copies * d), dtype=np.complex128)
        for j, comp in enumerate(active):
            factor = np.ones(ph.shape[0], dtype=np.complex128) if j == 0 else np.exp(1j * phase_arr[ph[:, j - 1]])
            rows[:, :, comp * d:(comp + 1) * d] = w[comp] * K[idx[:, j]][:, None, :] * factor[None, :, None]
        blocks.append(rows.reshape(-1, copies * d))
        for point_ids in idx:
            for phase_ids in ph:
                payloads.append((w, tuple(int(p) for p in point_ids), tuple(int(q) for q in phase_ids)))

    kernels = np.concatenate(blocks, axis=0)
    points = tuple(DomainPoint(i, payload) for i, payload in enumerate(payloads))
    model = DirectSumModel(
        dim=copies * d,
        points=points,
        kernels=kernels,
        norms=np.linalg.norm(kernels, axis=1),
        kind="direct_sum",
        truncation=base.truncation,
        base=base,
        copies=copies,
        weight_grid=tuple(weights),
        phase_grid=tuple(phases),
    )
    logger.info("Direct-sum model built.", extra={"copies": copies, "kernels": size, "base_dim": d})
    return model


@dataclass(frozen=True, eq=False)
class BlockOperator:
    blocks: Tuple[Tuple[np.ndarray, ...], ...]

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def block_dim(self) -> int:
        return int(self.blocks[0][0].shape[0])

    @property
    def matrix(self) -> np.ndarray:
        return np.block([list(row) for row in self.blocks])

    def block(self, i: int, j: int) -> np.ndarray:
        return self.blocks[i][j]


def block_n(grid: Sequence[Sequence[object]]) -> BlockOperator:
    """Square grid of equally sized blocks; a scalar 0 stands for a zero block."""
    n = len(grid)
    if n == 0 or any(len(row) != n for row in grid):
        raise ShapeMismatchError("block grid must be square and nonempty")
    sized = [op for row in grid for op in row if np.ndim(op) != 0]
    if not sized:
        raise ShapeMismatchError("block grid needs at least one matrix block")
    d = as_operator(sized[0]).shape[0]
    ops = []
    for i, row in enumerate(grid):
        out_row = []
        for j, op in enumerate(row):
            if np.ndim(op) == 0:
                if op != 0:
                    raise ShapeMismatchError(f"scalar block ({i},{j}) must be 0")
                out_row.append(np.zeros((d, d), dtype=np.complex128))
                continue
            arr = as_operator(op, f"block({i},{j})")
            if arr.shape != (d, d):
                raise ShapeMismatchError(f"all blocks must be {d}x{d}, found {arr.shape} at ({i},{j})")
            out_row.append(arr)
        ops.append(tuple(out_row))
    return BlockOperator(tuple(ops))


def block2(A: object, B: object, C: object, D: object) -> BlockOperator:
    return block_n([[A, B], [C, D]])


def swap_permutation(dim: int) -> np.ndarray:
    """P = (0 I; I 0) on H ⊕ H."""
    eye, zero = np.eye(dim), np.zeros((dim, dim))
    return np.block([[zero, eye], [eye, zero]])
