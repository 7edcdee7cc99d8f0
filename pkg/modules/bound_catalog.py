# modules/bound_catalog.py
"""
Left and right sides of every inequality in the catalog, reported as
BoundReport instances with slack and pass/fail.

Every bound returns a list of reports: one per link of a chain. A report is
`asserted` when the inequality is proved for the evaluated configuration;
unasserted reports (the as-stated variant of th8, product bounds evaluated
with a violated precondition) are recorded but never count as failures.

ber(·) of a matrix is always the Berezin number on the same model and ‖·‖_ber
the pair maximum, exactly as each statement writes them.
"""
import contextlib
import contextvars
import math
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import InvalidParameterError, PreconditionViolatedError, ShapeMismatchError
from core.logger import logger
from core.settings import settings
from modules.berezin_core import (
    MinTResult, PairScanner, TBerezinResult, berezin_number, berezin_norm, check_t, min_t_berezin,
    minimize_convex, operator_for, t_berezin_norm,
)
from modules.block_operators import BlockOperator, DirectSumModel, block2, block_n
from modules.kernel_models import KernelModel
from modules.matrix_calculus import (
    HermitianMatrix, absolute_values, apply_spectral, commutation_residual, commutation_tolerance,
    operator_norm, require_psd, spectral_radius,
)
from modules.orlicz import OrliczFn, WeightFn, factor_pair

BOUND_IDS = (
    "sandwich", "product", "mixed", "taghavi_chain", "convexity_axioms",
    "block_diag", "block_offdiag_single", "block_offdiag", "block_2x2", "block_nxn",
    "orlicz_main", "th6_cor1", "th6_cor2", "orlicz_product", "th7_cor1", "th7_cor2",
    "basaran", "dcds", "mjm", "axioms_th3", "axioms_th4", "th8_first", "th8_second",
)

TH8_VARIANTS = ("as-stated", "as-proved")

_rhs_scale: contextvars.ContextVar[float] = contextvars.ContextVar("rhs_scale", default=1.0)


@contextlib.contextmanager
def rhs_mutation(scale: float) -> Iterator[None]:
    """Scale every asserted right-hand side while active (harness self-test)."""
    token = _rhs_scale.set(float(scale))
    try:
        yield
    finally:
        _rhs_scale.reset(token)


class BoundReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    bound_id: str
    link: str = "main"
    lhs: float
    rhs: float
    slack: float
    tol: float
    holds: bool
    asserted: bool = True
    params: Dict[str, Any] = Field(default_factory=dict)
    witnesses: Dict[str, Any] = Field(default_factory=dict)
    baseline: Optional[float] = None
    improves: Optional[bool] = None
    notes: List[str] = Field(default_factory=list)

    @property
    def failed(self) -> bool:
        return self.asserted and not self.holds


def make_report(
    bound_id: str,
    lhs: float,
    rhs: float,
    *,
    link: str = "main",
    params: Optional[Dict[str, Any]] = None,
    witness: Optional[TBerezinResult] = None,
    asserted: bool = True,
    baseline: Optional[float] = None,
    notes: Optional[List[str]] = None,
) -> BoundReport:
    lhs, rhs = float(lhs), float(rhs)
    if asserted:
        rhs *= _rhs_scale.get()
    tol = settings.tol_ineq(lhs, rhs)
    slack = rhs - lhs
    witnesses: Dict[str, Any] = {}
    if witness is not None:
        witnesses = {"lambda": witness.witness[0], "mu": witness.witness[1]}
    improves = None if baseline is None else bool(rhs < baseline - settings.tol_ineq(rhs, baseline))
    return BoundReport(
        bound_id=bound_id, link=link, lhs=lhs, rhs=rhs, slack=slack, tol=tol,
        holds=bool(slack >= -tol), asserted=asserted, params=dict(params or {}),
        witnesses=witnesses, baseline=baseline, improves=improves, notes=list(notes or []),
    )


# --- Per-operator caches ---

class OperatorContext:
    """Memoized |A|, |A*|, their powers and the Berezin quantities of one operator on one model."""

    def __init__(self, model: KernelModel, A: object):
        self.model = model
        self.A = operator_for(model, A)
        self._memo: Dict[Tuple, Any] = {}

    def _get(self, key: Tuple, build):
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    @property
    def abs_pair(self) -> Tuple[HermitianMatrix, HermitianMatrix]:
        return self._get(("abs",), lambda: absolute_values(self.A))

    @property
    def abs_A(self) -> HermitianMatrix:
        return self.abs_pair[0]

    @property
    def abs_A_star(self) -> HermitianMatrix:
        return self.abs_pair[1]

    def abs_power(self, p: float, adjoint: bool = False) -> HermitianMatrix:
        """|A|^p (or |A*|^p)."""
        base = self.abs_A_star if adjoint else self.abs_A
        return self._get(("pow", adjoint, float(p)), lambda: apply_spectral(base, lambda x: np.power(x, p)))

    @property
    def scanner(self) -> PairScanner:
        return self._get(("scanner",), lambda: PairScanner(self.model, self.A))

    def ber(self) -> TBerezinResult:
        return self._get(("ber",), lambda: berezin_number(self.model, self.A))

    def ber_norm(self) -> TBerezinResult:
        return self._get(("ber_norm",), lambda: self.scanner.scan(1.0))

    def tber(self, t: float) -> TBerezinResult:
        t = check_t(t)
        return self._get(("tber", t), lambda: self.scanner.scan(t))

    def min_t(self) -> MinTResult:
        return self._get(("min_t",), lambda: min_t_berezin(self.model, self.A, scanner=self.scanner))


def _context(model: KernelModel, A: object, ctx: Optional[OperatorContext]) -> OperatorContext:
    if ctx is not None and ctx.model is model:
        return ctx
    return OperatorContext(model, A)


def _mat(X: Any) -> np.ndarray:
    return X.entries if isinstance(X, HermitianMatrix) else np.asarray(X)


def ber(model: KernelModel, X: Any) -> float:
    return berezin_number(model, _mat(X)).value


def bnorm(model: KernelModel, X: Any) -> float:
    return berezin_norm(model, _mat(X)).value


def _check_r(r: float, minimum: float = 1.0) -> float:
    r = float(r)
    if not r >= minimum:
        raise InvalidParameterError(f"exponent r must be >= {minimum}, got {r}")
    return r


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")
    return value


# --- t-Berezin norm bounds ---

def bound_sandwich(model: KernelModel, A: object, t: float,
                   ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """½‖A‖_ber ≤ max{t,1−t}‖A‖_ber ≤ ‖A‖_{t−ber} ≤ ‖A‖_ber, plus ber(A) ≤ ‖A‖_{t−ber}."""
    ctx = _context(model, A, ctx)
    norm = ctx.ber_norm()
    tber = ctx.tber(t)
    m = max(t, 1.0 - t)
    params = {"t": t}
    return [
        make_report("sandwich", 0.5 * norm.value, m * norm.value, link="half_le_max", params=params),
        make_report("sandwich", m * norm.value, tber.value, link="max_le_tber", params=params, witness=tber),
        make_report("sandwich", tber.value, norm.value, link="tber_le_ber", params=params, witness=tber),
        make_report("sandwich", ctx.ber().value, tber.value, link="ber_le_tber", params=params, witness=tber),
    ]


def bound_product(model: KernelModel, A: object, B: object, t: float, allow_violation: bool = False,
                  ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """‖AB‖_{t−ber} ≤ r(B)·√(‖t|A|+(1−t)|A*|‖_ber·‖t|A*|+(1−t)|A|‖_ber) when |A|B = B*|A|."""
    t = check_t(t)
    ctx = _context(model, A, ctx)
    B = operator_for(model, B, "B")
    residual = commutation_residual(ctx.A, B)
    tau = commutation_tolerance(ctx.A, B)
    violated = residual > tau
    notes: List[str] = []
    if violated:
        if not allow_violation:
            raise PreconditionViolatedError(
                f"|A|B = B*|A| fails: residual {residual:.3e} > {tau:.3e}", residual=residual, threshold=tau
            )
        logger.warning("Product bound evaluated with a violated precondition.",
                       extra={"residual": residual, "threshold": tau})
        notes.append("precondition violated")
    abs_A, abs_A_star = ctx.abs_pair
    lhs = t_berezin_norm(model, ctx.A @ B, t)
    radius = spectral_radius(B)
    X = t * abs_A.entries + (1.0 - t) * abs_A_star.entries
    Y = t * abs_A_star.entries + (1.0 - t) * abs_A.entries
    rhs = radius * math.sqrt(bnorm(model, X) * bnorm(model, Y))
    params = {"t": t, "residual": residual, "spectral_radius": radius}
    reports = [make_report("product", lhs.value, rhs, params=params, witness=lhs,
                           asserted=not violated, notes=notes)]
    if t == 0.5:
        half = 0.5 * radius * bnorm(model, abs_A.entries + abs_A_star.entries)
        reports.append(make_report("product", lhs.value, half, link="half", params=params, witness=lhs,
                                   asserted=not violated, notes=notes))
    return reports


def bound_mixed(model: KernelModel, A: object, t: float,
                ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """‖A‖_{t−ber} ≤ √‖tA*A + (1−t)AA*‖_ber."""
    ctx = _context(model, A, ctx)
    tber = ctx.tber(t)
    rhs = math.sqrt(bnorm(model, _mixed_operator(ctx.A, t)))
    return [make_report("mixed", tber.value, rhs, params={"t": t}, witness=tber)]


def _mixed_operator(A: np.ndarray, t: float) -> np.ndarray:
    AhA = A.conj().T @ A
    AAh = A @ A.conj().T
    return t * AhA + (1.0 - t) * AAh


def mixed_rhs_min(model: KernelModel, A: np.ndarray, tol_t: Optional[float] = None) -> MinTResult:
    """min over t of √‖tA*A + (1−t)AA*‖_ber (convex in t, searched on [0, 1])."""
    tol_t = settings.min_t_tol if tol_t is None else tol_t
    return minimize_convex(lambda t: math.sqrt(bnorm(model, _mixed_operator(A, t))), 0.0, 1.0, tol_t, first=0.5)


def bound_mixed_chain(model: KernelModel, A: object,
                      ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """
    ber(A) ≤ min_t ‖A‖_{t−ber} ≤ min_t √‖tA*A+(1−t)AA*‖_ber ≤ √(½‖A*A+AA*‖_ber),
    with ber²(A) ≤ ½‖|A|²+|A*|²‖_ber as the reference link.
    """
    ctx = _context(model, A, ctx)
    b = ctx.ber().value
    min_tber = ctx.min_t()
    min_rhs = mixed_rhs_min(model, ctx.A)
    half = math.sqrt(0.5 * bnorm(model, _mixed_operator(ctx.A, 1.0) + _mixed_operator(ctx.A, 0.0)))
    bma = 0.5 * bnorm(model, ctx.abs_power(2.0).entries + ctx.abs_power(2.0, adjoint=True).entries)
    return [
        make_report("mixed", b, min_tber.value, link="ber_le_min_t", params={"t_star": min_tber.t_star}),
        make_report("mixed", min_tber.value, min_rhs.value, link="min_t",
                    params={"t_star": min_tber.t_star, "t_star_rhs": min_rhs.t_star}),
        make_report("mixed", min_rhs.value, half, link="min_le_half", params={"t_star_rhs": min_rhs.t_star}),
        make_report("mixed", b * b, bma, link="bma"),
    ]


def bound_taghavi_chain(model: KernelModel, A: object, r: float,
                        ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """ber^r(A) ≤ min_t ‖A‖^r_{t−ber} ≤ ½‖|A|^r + |A*|^r‖_ber."""
    r = _check_r(r)
    ctx = _context(model, A, ctx)
    b = ctx.ber()
    m = ctx.min_t()
    taghavi = 0.5 * bnorm(model, ctx.abs_power(r).entries + ctx.abs_power(r, adjoint=True).entries)
    params = {"r": r, "t_star": m.t_star}
    return [
        make_report("taghavi_chain", b.value ** r, m.value ** r, link="ber_le_min_t", params=params,
                    witness=b, baseline=taghavi),
        make_report("taghavi_chain", m.value ** r, taghavi, link="min_t_le_taghavi", params=params),
    ]


def bound_convexity_axioms(model: KernelModel, A: object, B: object, t: float, r: float) -> List[BoundReport]:
    """‖tA + (1−t)B‖^r_ber ≤ ‖tA^r + (1−t)B^r‖_ber for PSD A, B."""
    t = check_t(t)
    r = _check_r(r)
    HA = require_psd(operator_for(model, A), "A")
    HB = require_psd(operator_for(model, B, "B"), "B")
    lhs = bnorm(model, t * HA.entries + (1.0 - t) * HB.entries) ** r
    Ar = apply_spectral(HA, lambda x: np.power(x, r))
    Br = apply_spectral(HB, lambda x: np.power(x, r))
    rhs = bnorm(model, t * Ar.entries + (1.0 - t) * Br.entries)
    return [make_report("convexity_axioms", lhs, rhs, params={"t": t, "r": r})]


# --- Operator matrices on direct sums ---

def _require_copies(ds: DirectSumModel, n: int, block_dim: int) -> KernelModel:
    if ds.base is None or ds.copies != n:
        raise ShapeMismatchError(f"direct sum has {ds.copies} copies, the block operator needs {n}")
    if ds.base.dim != block_dim:
        raise ShapeMismatchError(f"blocks are {block_dim}x{block_dim}, the base model has dimension {ds.base.dim}")
    return ds.base


def bound_block_diag(ds: DirectSumModel, A: object, B: object, t: float) -> List[BoundReport]:
    """‖(A 0; 0 B)‖_{t−ber} ≤ max{‖A‖_{t−ber}, ‖B‖_{t−ber}}."""
    T = block2(A, 0, 0, B)
    base = _require_copies(ds, 2, T.block_dim)
    lhs = t_berezin_norm(ds, T.matrix, t)
    rhs = max(t_berezin_norm(base, T.block(0, 0), t).value, t_berezin_norm(base, T.block(1, 1), t).value)
    return [make_report("block_diag", lhs.value, rhs, params={"t": t}, witness=lhs)]


def bound_block_offdiag_single(ds: DirectSumModel, A: object, t: float) -> List[BoundReport]:
    """‖(0 A; 0 0)‖_{t−ber} ≤ max{t, 1−t}·‖A‖_ber."""
    T = block2(0, A, 0, 0)
    base = _require_copies(ds, 2, T.block_dim)
    lhs = t_berezin_norm(ds, T.matrix, t)
    rhs = max(t, 1.0 - t) * bnorm(base, T.block(0, 1))
    return [make_report("block_offdiag_single", lhs.value, rhs, params={"t": t}, witness=lhs)]


def bound_block_offdiag(ds: DirectSumModel, A: object, B: object, t: float) -> List[BoundReport]:
    """
    ‖(0 A; B 0)‖_{t−ber} ≤ max{t, 1−t}(‖A‖_ber + ‖B‖_ber), and the swap
    symmetry ‖(0 A; B 0)‖_{t−ber} = ‖(0 B; A 0)‖_{t−ber}.
    """
    T = block2(0, A, B, 0)
    base = _require_copies(ds, 2, T.block_dim)
    lhs = t_berezin_norm(ds, T.matrix, t)
    swapped = t_berezin_norm(ds, block2(0, B, A, 0).matrix, t)
    rhs = max(t, 1.0 - t) * (bnorm(base, T.block(0, 1)) + bnorm(base, T.block(1, 0)))
    params = {"t": t}
    return [
        make_report("block_offdiag", lhs.value, rhs, params=params, witness=lhs),
        make_report("block_offdiag", abs(lhs.value - swapped.value), 0.0, link="swap", params=params),
    ]


def block_weight_matrix(base: KernelModel, T: BlockOperator, t: float) -> np.ndarray:
    """W_ii = ‖T_ii‖_{t−ber}, W_ij = t‖T_ij‖_ber + (1−t)‖T_ji‖_ber."""
    n = T.size
    norms = np.array([[bnorm(base, T.block(i, j)) for j in range(n)] for i in range(n)])
    W = t * norms + (1.0 - t) * norms.T
    for i in range(n):
        W[i, i] = t_berezin_norm(base, T.block(i, i), t).value
    return W


def bound_block_2x2(ds: DirectSumModel, A: object, B: object, C: object, D: object, t: float) -> List[BoundReport]:
    """‖(A B; C D)‖_{t−ber} ≤ ‖[[‖A‖_{t−ber}, t‖B‖+(1−t)‖C‖], [t‖C‖+(1−t)‖B‖, ‖D‖_{t−ber}]]‖."""
    T = block2(A, B, C, D)
    base = _require_copies(ds, 2, T.block_dim)
    lhs = t_berezin_norm(ds, T.matrix, t)
    rhs = operator_norm(block_weight_matrix(base, T, t))
    return [make_report("block_2x2", lhs.value, rhs, params={"t": t}, witness=lhs)]


def bound_block_nxn(ds: DirectSumModel, grid: Sequence[Sequence[object]], t: float) -> List[BoundReport]:
    """n×n generalization of the 2×2 operator-matrix bound."""
    T = block_n(grid)
    base = _require_copies(ds, T.size, T.block_dim)
    lhs = t_berezin_norm(ds, T.matrix, t)
    rhs = operator_norm(block_weight_matrix(base, T, t))
    return [make_report("block_nxn", lhs.value, rhs, params={"t": t, "n": T.size}, witness=lhs)]


# --- Orlicz-type bounds for one operator ---

def _require_submultiplicative(phi: OrliczFn, bound_id: str) -> None:
    if not phi.is_submultiplicative:
        raise PreconditionViolatedError(f"{bound_id} needs a submultiplicative Orlicz function, got {phi.name}")


def orlicz_main_terms(model: KernelModel, A: object, phi: OrliczFn, s: float,
                      ctx: Optional[OperatorContext] = None) -> Dict[str, Any]:
    """α-independent pieces of the Orlicz main bound."""
    _require_submultiplicative(phi, "orlicz_main")
    ctx = _context(model, A, ctx)
    pair = factor_pair(s)
    abs_A, abs_A_star = ctx.abs_pair
    b = ctx.ber()
    quartic = pair.g_power(abs_A, 4, phi).entries + pair.h_power(abs_A_star, 4, phi).entries
    mixed = pair.h2(abs_A_star).entries @ pair.g2(abs_A).entries
    quadratic = pair.g_power(abs_A, 2, phi).entries + pair.h_power(abs_A_star, 2, phi).entries
    return {
        "lhs": phi.scalar(b.value ** 2),
        "quartic": 0.5 * ber(model, quartic),
        "mixed": phi.scalar(ber(model, mixed)),
        "linear": phi.scalar(b.value) * ber(model, quadratic),
        "zero_power": pair.triggers_zero_power(abs_A, abs_A_star),
        "witness": b,
    }


def _orlicz_main_report(terms: Dict[str, Any], phi: OrliczFn, s: float, alpha: float) -> BoundReport:
    outer, inner = WeightFn(alpha).coefficients
    rhs = 0.5 * outer * (terms["quartic"] + terms["mixed"]) + 0.5 * inner * terms["linear"]
    notes = ["0^0 = 1 convention applied"] if terms["zero_power"] else []
    params = {"phi": phi.name, "s": s, "alpha": alpha, "zero_power_convention": terms["zero_power"]}
    return make_report("orlicz_main", terms["lhs"], rhs, params=params, witness=terms["witness"], notes=notes)


def bound_orlicz_main(model: KernelModel, A: object, phi: OrliczFn, s: float, alpha: float,
                      ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """
    φ(ber²(A)) ≤ α/(2(1+α))·[½ ber(φ(g⁴(|A|)) + φ(h⁴(|A*|))) + φ(ber(h²(|A*|)g²(|A|)))]
                 + 1/(2(1+α))·φ(ber(A))·ber(φ(g²(|A|)) + φ(h²(|A*|))).
    """
    return bound_orlicz_main_grid(model, A, phi, s, [alpha], ctx=ctx)


def bound_orlicz_main_grid(model: KernelModel, A: object, phi: OrliczFn, s: float, alphas: Sequence[float],
                           ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    terms = orlicz_main_terms(model, A, phi, s, ctx)
    return [_orlicz_main_report(terms, phi, s, alpha) for alpha in alphas]


def _abs_sums(ctx: OperatorContext, p: float) -> np.ndarray:
    return ctx.abs_power(p).entries + ctx.abs_power(p, adjoint=True).entries


def bound_th6_cor1(model: KernelModel, A: object, r: float,
                   ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """
    ber^{2r}(A) ≤ ⅛‖|A|^{2r}+|A*|^{2r}‖_ber + ¼ber^r(|A*||A|) + ¼ber^r(A)‖|A|^r+|A*|^r‖_ber,
    compared against ½‖|A|^{2r}+|A*|^{2r}‖_ber.
    """
    r = _check_r(r)
    ctx = _context(model, A, ctx)
    b = ctx.ber()
    s2 = bnorm(model, _abs_sums(ctx, 2.0 * r))
    s1 = bnorm(model, _abs_sums(ctx, r))
    cross = ber(model, ctx.abs_A_star.entries @ ctx.abs_A.entries)
    rhs = s2 / 8.0 + 0.25 * cross ** r + 0.25 * b.value ** r * s1
    taghavi = 0.5 * s2
    params = {"r": r}
    return [
        make_report("th6_cor1", b.value ** (2.0 * r), rhs, params=params, witness=b, baseline=taghavi),
        make_report("th6_cor1", rhs, taghavi, link="cor1_le_taghavi", params=params),
    ]


def axioms_th3_rhs(model: KernelModel, ctx: OperatorContext) -> float:
    return (bnorm(model, _abs_sums(ctx, 2.0)) / 6.0
            + ctx.ber().value * bnorm(model, ctx.abs_A.entries + ctx.abs_A_star.entries) / 3.0)


def bound_th6_cor2(model: KernelModel, A: object, ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """ber²(A) ≤ 1/12‖|A|²+|A*|²‖_ber + ⅙ber(|A*||A|) + ⅓ber(A)‖|A|+|A*|‖_ber."""
    ctx = _context(model, A, ctx)
    b = ctx.ber()
    rhs = (bnorm(model, _abs_sums(ctx, 2.0)) / 12.0
           + ber(model, ctx.abs_A_star.entries @ ctx.abs_A.entries) / 6.0
           + b.value * bnorm(model, ctx.abs_A.entries + ctx.abs_A_star.entries) / 3.0)
    baseline = axioms_th3_rhs(model, ctx)
    return [
        make_report("th6_cor2", b.value ** 2, rhs, witness=b, baseline=baseline),
        make_report("th6_cor2", rhs, baseline, link="cor2_le_axioms"),
    ]


def bound_axioms_th3(model: KernelModel, A: object, ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """ber²(A) ≤ ⅙‖|A|²+|A*|²‖_ber + ⅓ber(A)‖|A|+|A*|‖_ber."""
    ctx = _context(model, A, ctx)
    b = ctx.ber()
    return [make_report("axioms_th3", b.value ** 2, axioms_th3_rhs(model, ctx), witness=b)]


def bound_th8(model: KernelModel, A: object, phi: OrliczFn, s: float, alpha: float, variant: str,
              ctx: Optional[OperatorContext] = None) -> List[BoundReport]:
    """
    φ(ber²(A)) ≤ ber(α/2·(φ(g⁴(|A|)) + φ(h⁴(|A*|))) + (1−α)φ(|A|²))   [as-stated]
    with (1−α)φ(|A*|²) in the as-proved variant; the second inequality swaps A and A*.
    Only the as-proved variant is asserted.
    """
    if variant not in TH8_VARIANTS:
        raise InvalidParameterError(f"unknown th8 variant '{variant}'")
    alpha = _check_unit("alpha", alpha)
    ctx = _context(model, A, ctx)
    pair = factor_pair(s)
    abs_A, abs_A_star = ctx.abs_pair
    b = ctx.ber()
    lhs = phi.scalar(b.value ** 2)
    phi_sq_A = apply_spectral(ctx.abs_power(2.0), phi).entries
    phi_sq_A_star = apply_spectral(ctx.abs_power(2.0, adjoint=True), phi).entries
    stated = variant == "as-stated"
    first = (0.5 * alpha * (pair.g_power(abs_A, 4, phi).entries + pair.h_power(abs_A_star, 4, phi).entries)
             + (1.0 - alpha) * (phi_sq_A if stated else phi_sq_A_star))
    second = (0.5 * alpha * (pair.g_power(abs_A_star, 4, phi).entries + pair.h_power(abs_A, 4, phi).entries)
              + (1.0 - alpha) * (phi_sq_A_star if stated else phi_sq_A))
    params = {"phi": phi.name, "s": s, "alpha": alpha, "variant": variant}
    asserted = not stated
    return [
        make_report("th8_first", lhs, ber(model, first), link=variant, params=params, witness=b, asserted=asserted),
        make_report("th8_second", lhs, ber(model, second), link=variant, params=params, witness=b, asserted=asserted),
    ]


# --- Bounds for a pair of operators ---

class PairTerms:
    """Shared pieces of the two-operator bounds: A*B, |A|^p, |B|^p."""

    def __init__(self, model: KernelModel, A: object, B: object,
                 ctx_a: Optional[OperatorContext] = None, ctx_b: Optional[OperatorContext] = None):
        self.model = model
        self.a = _context(model, A, ctx_a)
        self.b = _context(model, B, ctx_b)
        self.AstarB = self.a.A.conj().T @ self.b.A
        self._ber_AstarB: Optional[TBerezinResult] = None
        self._memo: Dict[Tuple, float] = {}

    @property
    def ber_AstarB(self) -> TBerezinResult:
        if self._ber_AstarB is None:
            self._ber_AstarB = berezin_number(self.model, self.AstarB)
        return self._ber_AstarB

    def sum_norm(self, p: float) -> float:
        """‖|A|^p + |B|^p‖_ber."""
        key = ("sum", float(p))
        if key not in self._memo:
            self._memo[key] = bnorm(self.model, self.a.abs_power(p).entries + self.b.abs_power(p).entries)
        return self._memo[key]

    def ber_squares_product(self) -> float:
        """ber(|B|²|A|²)."""
        key = ("sq_prod",)
        if key not in self._memo:
            self._memo[key] = ber(self.model, self.b.abs_power(2.0).entries @ self.a.abs_power(2.0).entries)
        return self._memo[key]


def bound_orlicz_product(model: KernelModel, A: object, B: object, phi: OrliczFn, alpha: float,
                         terms: Optional[PairTerms] = None) -> List[BoundReport]:
    """
    φ(ber²(A*B)) ≤ 1/(2(1+α))·φ(ber(A*B))·ber(φ(|A|²)+φ(|B|²))
                   + α/(2(1+α))·[φ(ber(|B|²|A|²)) + ½ber(φ(|A|⁴)+φ(|B|⁴))].
    """
    _require_submultiplicative(phi, "orlicz_product")
    terms = terms or PairTerms(model, A, B)
    outer, inner = WeightFn(alpha).coefficients
    x = terms.ber_AstarB
    phi_sq = apply_spectral(terms.a.abs_power(2.0), phi).entries + apply_spectral(terms.b.abs_power(2.0), phi).entries
    phi_4 = apply_spectral(terms.a.abs_power(4.0), phi).entries + apply_spectral(terms.b.abs_power(4.0), phi).entries
    rhs = (0.5 * inner * phi.scalar(x.value) * ber(model, phi_sq)
           + 0.5 * outer * (phi.scalar(terms.ber_squares_product()) + 0.5 * ber(model, phi_4)))
    return [make_report("orlicz_product", phi.scalar(x.value ** 2), rhs,
                        params={"phi": phi.name, "alpha": alpha}, witness=x)]


def dcds_rhs(terms: PairTerms, r: float, lam: float) -> float:
    x = terms.ber_AstarB.value
    return (terms.sum_norm(r) * x ** (0.5 * r) + lam * terms.sum_norm(2.0 * r)) / (2.0 * lam + 2.0)


def bound_th7_cor1(model: KernelModel, A: object, B: object, r: float, alpha: float,
                   terms: Optional[PairTerms] = None) -> List[BoundReport]:
    """Two-line chain for ber^{2r}(A*B); the first line is compared with the DCDS bound at exponent 2r, λ = α."""
    r = _check_r(r)
    if alpha < 0.0:
        raise InvalidParameterError(f"alpha must be >= 0, got {alpha}")
    terms = terms or PairTerms(model, A, B)
    x = terms.ber_AstarB
    s2, s4 = terms.sum_norm(2.0 * r), terms.sum_norm(4.0 * r)
    y = terms.ber_squares_product()
    head = x.value ** r * s2 / (2.0 * (1.0 + alpha))
    line1 = head + alpha * s4 / (4.0 * (1.0 + alpha)) + alpha * y ** r / (2.0 * (1.0 + alpha))
    line2 = head + alpha * s4 / (2.0 * (1.0 + alpha))
    params = {"r": r, "alpha": alpha}
    return [
        make_report("th7_cor1", x.value ** (2.0 * r), line1, link="line1", params=params, witness=x,
                    baseline=dcds_rhs(terms, 2.0 * r, alpha)),
        make_report("th7_cor1", line1, line2, link="line1_le_line2", params=params),
    ]


def axioms_th4_rhs(terms: PairTerms) -> float:
    return terms.sum_norm(4.0) / 6.0 + terms.ber_AstarB.value * terms.sum_norm(2.0) / 3.0


def bound_th7_cor2(model: KernelModel, A: object, B: object,
                   terms: Optional[PairTerms] = None) -> List[BoundReport]:
    terms = terms or PairTerms(model, A, B)
    x = terms.ber_AstarB
    line1 = (terms.sum_norm(2.0) * x.value / 3.0 + terms.sum_norm(4.0) / 12.0
             + terms.ber_squares_product() / 6.0)
    line2 = axioms_th4_rhs(terms)
    return [
        make_report("th7_cor2", x.value ** 2, line1, link="line1", witness=x, baseline=line2),
        make_report("th7_cor2", line1, line2, link="line1_le_line2"),
    ]


def bound_basaran(model: KernelModel, A: object, B: object, r: float,
                  terms: Optional[PairTerms] = None) -> List[BoundReport]:
    """ber^r(B*A) ≤ ½‖|A|^{2r} + |B|^{2r}‖_ber."""
    r = _check_r(r)
    terms = terms or PairTerms(model, A, B)
    lhs = berezin_number(model, terms.b.A.conj().T @ terms.a.A)
    return [make_report("basaran", lhs.value ** r, 0.5 * terms.sum_norm(2.0 * r), params={"r": r}, witness=lhs)]


def bound_dcds(model: KernelModel, A: object, B: object, r: float, lam: float,
               terms: Optional[PairTerms] = None) -> List[BoundReport]:
    """ber^r(A*B) ≤ 1/(2λ+2)‖|A|^r+|B|^r‖_ber·ber^{r/2}(A*B) + λ/(2λ+2)‖|A|^{2r}+|B|^{2r}‖_ber, r ≥ 2."""
    r = _check_r(r, 2.0)
    if lam < 0.0:
        raise InvalidParameterError(f"lambda must be >= 0, got {lam}")
    terms = terms or PairTerms(model, A, B)
    x = terms.ber_AstarB
    return [make_report("dcds", x.value ** r, dcds_rhs(terms, r, lam), params={"r": r, "lambda": lam}, witness=x)]


def bound_mjm(model: KernelModel, A: object, B: object, r: float, alpha: float,
              terms: Optional[PairTerms] = None) -> List[BoundReport]:
    """ber^{2r}(A*B) ≤ (1−α)/2·ber^r(A*B)‖|A|^{2r}+|B|^{2r}‖_ber + α/2·‖|A|^{4r}+|B|^{4r}‖_ber."""
    r = _check_r(r)
    alpha = _check_unit("alpha", alpha)
    terms = terms or PairTerms(model, A, B)
    x = terms.ber_AstarB
    rhs = 0.5 * (1.0 - alpha) * x.value ** r * terms.sum_norm(2.0 * r) + 0.5 * alpha * terms.sum_norm(4.0 * r)
    return [make_report("mjm", x.value ** (2.0 * r), rhs, params={"r": r, "alpha": alpha}, witness=x)]


def bound_axioms_th4(model: KernelModel, A: object, B: object,
                     terms: Optional[PairTerms] = None) -> List[BoundReport]:
    """ber²(A*B) ≤ ⅙‖|A|⁴+|B|⁴‖_ber + ⅓ber(A*B)‖|A|²+|B|²‖_ber."""
    terms = terms or PairTerms(model, A, B)
    x = terms.ber_AstarB
    return [make_report("axioms_th4", x.value ** 2, axioms_th4_rhs(terms), witness=x)]


def bound_th7_cors_and_literature(model: KernelModel, A: object, B: object, r: float, alpha: float,
                                  lam: float) -> List[BoundReport]:
    """Both th7 corollary chains with the Basaran, DCDS, MJM and Axioms comparison bounds."""
    terms = PairTerms(model, A, B)
    reports = bound_th7_cor1(model, A, B, r, alpha, terms)
    reports += bound_th7_cor2(model, A, B, terms)
    reports += bound_basaran(model, A, B, r, terms)
    if r >= 2.0:
        reports += bound_dcds(model, A, B, r, lam, terms)
    if 0.0 <= alpha <= 1.0:
        reports += bound_mjm(model, A, B, r, alpha, terms)
    reports += bound_axioms_th4(model, A, B, terms)
    return reports


def submultiplicativity_gap(model: KernelModel, A: object, B: object, t: float) -> Tuple[float, float]:
    """(‖A‖_{t−ber}·‖B‖_{t−ber}, ‖AB‖_{t−ber}); the t-Berezin norm is not submultiplicative."""
    A = operator_for(model, A)
    B = operator_for(model, B, "B")
    product = t_berezin_norm(model, A, t).value * t_berezin_norm(model, B, t).value
    return product, t_berezin_norm(model, A @ B, t).value
