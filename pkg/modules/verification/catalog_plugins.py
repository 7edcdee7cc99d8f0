# modules/verification/catalog_plugins.py
"""
Built-in bound plugins: one per catalog id, each sweeping its parameter grids
over a generated case.
"""
from typing import Any, Dict, List, Optional, Tuple

from core.errors import PreconditionViolatedError
from core.logger import logger
from core.plugin_interface import BoundPlugin, ResolvedGrids
from modules.bound_catalog import (
    TH8_VARIANTS, BoundReport, bound_axioms_th3, bound_axioms_th4, bound_basaran, bound_block_2x2,
    bound_block_diag, bound_block_nxn, bound_block_offdiag, bound_block_offdiag_single, bound_convexity_axioms,
    bound_dcds, bound_mixed, bound_mixed_chain, bound_mjm, bound_orlicz_main_grid, bound_orlicz_product,
    bound_product, bound_sandwich, bound_taghavi_chain, bound_th6_cor1, bound_th6_cor2, bound_th7_cor1,
    bound_th7_cor2, bound_th8,
)
from modules.orlicz import OrliczFn, power_orlicz
from modules.verification.campaign import CaseContext

SINGLE: Tuple[str, ...] = ("single",)
BLOCK: Tuple[str, ...] = ("block",)


class CatalogPlugin(BoundPlugin):
    bound_id_: str = ""
    description_: str = ""
    operands_: Tuple[str, ...] = SINGLE

    def __init__(self, shared_resources: Optional[Dict[str, Any]] = None):
        super().__init__(self.bound_id_, self.description_, self.operands_, shared_resources=shared_resources)


class OrliczCatalogPlugin(CatalogPlugin):
    """Sweeps φ = t^r over the r grid plus any injected Orlicz functions."""

    @staticmethod
    def get_required_resources() -> List[str]:
        return ["orlicz_functions"]

    def orlicz_functions(self, grids: ResolvedGrids) -> List[OrliczFn]:
        return [power_orlicz(r) for r in grids.r] + list(self.shared_resources.get("orlicz_functions", []))


def _unit(values: Tuple[float, ...]) -> List[float]:
    return [v for v in values if 0.0 <= v <= 1.0]


# --- t-Berezin norm bounds ---

class SandwichPlugin(CatalogPlugin):
    bound_id_ = "sandwich"
    description_ = "½‖A‖_ber ≤ max{t,1−t}‖A‖_ber ≤ ‖A‖_{t−ber} ≤ ‖A‖_ber"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for t in grids.t for rep in bound_sandwich(case.model, case.A, t, case.ctx_a)]


class ProductPlugin(CatalogPlugin):
    bound_id_ = "product"
    description_ = "‖AB‖_{t−ber} under |A|B = B*|A|"
    operands_ = ("commuting_pair",)

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        reports: List[BoundReport] = []
        for t in grids.t:
            try:
                reports += bound_product(case.model, case.A, case.B, t, ctx=case.ctx_a)
            except PreconditionViolatedError as e:
                logger.warning("Product precondition failed on a generated pair.",
                               extra={"case_index": case.spec.index, "residual": e.residual})
                reports += bound_product(case.model, case.A, case.B, t, allow_violation=True, ctx=case.ctx_a)
        return reports


class MixedPlugin(CatalogPlugin):
    bound_id_ = "mixed"
    description_ = "‖A‖_{t−ber} ≤ √‖tA*A+(1−t)AA*‖_ber and the min-over-t chain"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        reports = [rep for t in grids.t for rep in bound_mixed(case.model, case.A, t, case.ctx_a)]
        return reports + bound_mixed_chain(case.model, case.A, case.ctx_a)


class TaghaviChainPlugin(CatalogPlugin):
    bound_id_ = "taghavi_chain"
    description_ = "ber^r(A) ≤ min_t ‖A‖^r_{t−ber} ≤ ½‖|A|^r+|A*|^r‖_ber"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for r in grids.r for rep in bound_taghavi_chain(case.model, case.A, r, case.ctx_a)]


class ConvexityAxiomsPlugin(CatalogPlugin):
    bound_id_ = "convexity_axioms"
    description_ = "‖tA+(1−t)B‖^r_ber ≤ ‖tA^r+(1−t)B^r‖_ber for PSD A, B"
    operands_ = ("psd_pair",)

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for t in grids.t for r in grids.r
                for rep in bound_convexity_axioms(case.model, case.A, case.B, t, r)]


# --- Operator matrices ---

class BlockDiagPlugin(CatalogPlugin):
    bound_id_ = "block_diag"
    description_ = "‖diag(A, D)‖_{t−ber} ≤ max of the diagonal t-Berezin norms"
    operands_ = BLOCK

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        A, D = case.blocks[0][0], case.blocks[1][1]
        return [rep for t in grids.t for rep in bound_block_diag(case.direct_sum, A, D, t)]


class BlockOffdiagSinglePlugin(CatalogPlugin):
    bound_id_ = "block_offdiag_single"
    description_ = "‖(0 A; 0 0)‖_{t−ber} ≤ max{t,1−t}‖A‖_ber"
    operands_ = BLOCK

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for t in grids.t for rep in bound_block_offdiag_single(case.direct_sum, case.blocks[0][1], t)]


class BlockOffdiagPlugin(CatalogPlugin):
    bound_id_ = "block_offdiag"
    description_ = "‖(0 A; B 0)‖_{t−ber} ≤ max{t,1−t}(‖A‖_ber + ‖B‖_ber)"
    operands_ = BLOCK

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        B, C = case.blocks[0][1], case.blocks[1][0]
        return [rep for t in grids.t for rep in bound_block_offdiag(case.direct_sum, B, C, t)]


class Block2x2Plugin(CatalogPlugin):
    bound_id_ = "block_2x2"
    description_ = "2×2 operator matrix against the norm of its weight matrix"
    operands_ = BLOCK

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        (A, B), (C, D) = case.blocks
        return [rep for t in grids.t for rep in bound_block_2x2(case.direct_sum, A, B, C, D, t)]


class BlockNxNPlugin(CatalogPlugin):
    bound_id_ = "block_nxn"
    description_ = "n×n operator matrix against the norm of its weight matrix"
    operands_ = BLOCK

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for t in grids.t for rep in bound_block_nxn(case.direct_sum_n, case.blocks_n, t)]


# --- Orlicz bounds, one operator ---

class OrliczMainPlugin(OrliczCatalogPlugin):
    bound_id_ = "orlicz_main"
    description_ = "φ(ber²(A)) for submultiplicative φ and the power pair (t^s, t^{1−s})"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        reports: List[BoundReport] = []
        for phi in self.orlicz_functions(grids):
            if not phi.is_submultiplicative:
                continue
            for s in grids.s:
                reports += bound_orlicz_main_grid(case.model, case.A, phi, s, grids.alpha, case.ctx_a)
        return reports


class Th6Cor1Plugin(CatalogPlugin):
    bound_id_ = "th6_cor1"
    description_ = "ber^{2r}(A) with coefficients ⅛, ¼, ¼"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for r in grids.r for rep in bound_th6_cor1(case.model, case.A, r, case.ctx_a)]


class Th6Cor2Plugin(CatalogPlugin):
    bound_id_ = "th6_cor2"
    description_ = "ber²(A) with coefficients 1/12, ⅙, ⅓"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return bound_th6_cor2(case.model, case.A, case.ctx_a)


class AxiomsTh3Plugin(CatalogPlugin):
    bound_id_ = "axioms_th3"
    description_ = "ber²(A) ≤ ⅙‖|A|²+|A*|²‖_ber + ⅓ber(A)‖|A|+|A*|‖_ber"

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return bound_axioms_th3(case.model, case.A, case.ctx_a)


class Th8Plugin(OrliczCatalogPlugin):
    """Both variants are evaluated; only the as-proved one is asserted."""

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        reports: List[BoundReport] = []
        for phi in self.orlicz_functions(grids):
            for s in grids.s:
                for alpha in _unit(grids.alpha):
                    for variant in TH8_VARIANTS:
                        reports += [rep for rep in bound_th8(case.model, case.A, phi, s, alpha, variant, case.ctx_a)
                                    if rep.bound_id == self.bound_id]
        return reports


class Th8FirstPlugin(Th8Plugin):
    bound_id_ = "th8_first"
    description_ = "φ(ber²(A)) ≤ ber(α/2(φ(g⁴(|A|))+φ(h⁴(|A*|))) + (1−α)φ(·))"


class Th8SecondPlugin(Th8Plugin):
    bound_id_ = "th8_second"
    description_ = "th8 with the roles of A and A* exchanged"


# --- Pair bounds ---

PAIR_OPERANDS = ("pair", "commuting_pair", "psd_pair")


class OrliczProductPlugin(OrliczCatalogPlugin):
    bound_id_ = "orlicz_product"
    description_ = "φ(ber²(A*B)) for submultiplicative φ"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for phi in self.orlicz_functions(grids) if phi.is_submultiplicative
                for alpha in grids.alpha
                for rep in bound_orlicz_product(case.model, case.A, case.B, phi, alpha, case.pair_terms)]


class Th7Cor1Plugin(CatalogPlugin):
    bound_id_ = "th7_cor1"
    description_ = "ber^{2r}(A*B) two-line chain, compared with DCDS at exponent 2r"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for r in grids.r for alpha in grids.alpha
                for rep in bound_th7_cor1(case.model, case.A, case.B, r, alpha, case.pair_terms)]


class Th7Cor2Plugin(CatalogPlugin):
    bound_id_ = "th7_cor2"
    description_ = "ber²(A*B) two-line chain, compared with axioms_th4"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return bound_th7_cor2(case.model, case.A, case.B, case.pair_terms)


class BasaranPlugin(CatalogPlugin):
    bound_id_ = "basaran"
    description_ = "ber^r(B*A) ≤ ½‖|A|^{2r}+|B|^{2r}‖_ber"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for r in grids.r for rep in bound_basaran(case.model, case.A, case.B, r, case.pair_terms)]


class DcdsPlugin(CatalogPlugin):
    bound_id_ = "dcds"
    description_ = "ber^r(A*B) with weights 1/(2λ+2), λ/(2λ+2); r ≥ 2"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for r in grids.r if r >= 2.0 for lam in grids.lam
                for rep in bound_dcds(case.model, case.A, case.B, r, lam, case.pair_terms)]


class MjmPlugin(CatalogPlugin):
    bound_id_ = "mjm"
    description_ = "ber^{2r}(A*B) with weights (1−α)/2, α/2"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return [rep for r in grids.r for alpha in _unit(grids.alpha)
                for rep in bound_mjm(case.model, case.A, case.B, r, alpha, case.pair_terms)]


class AxiomsTh4Plugin(CatalogPlugin):
    bound_id_ = "axioms_th4"
    description_ = "ber²(A*B) ≤ ⅙‖|A|⁴+|B|⁴‖_ber + ⅓ber(A*B)‖|A|²+|B|²‖_ber"
    operands_ = PAIR_OPERANDS

    def evaluate(self, case: CaseContext, grids: ResolvedGrids) -> List[BoundReport]:
        return bound_axioms_th4(case.model, case.A, case.B, case.pair_terms)


BUILTIN_PLUGINS = (
    SandwichPlugin, ProductPlugin, MixedPlugin, TaghaviChainPlugin, ConvexityAxiomsPlugin,
    BlockDiagPlugin, BlockOffdiagSinglePlugin, BlockOffdiagPlugin, Block2x2Plugin, BlockNxNPlugin,
    OrliczMainPlugin, Th6Cor1Plugin, Th6Cor2Plugin, AxiomsTh3Plugin, Th8FirstPlugin, Th8SecondPlugin,
    OrliczProductPlugin, Th7Cor1Plugin, Th7Cor2Plugin, BasaranPlugin, DcdsPlugin, MjmPlugin, AxiomsTh4Plugin,
)
