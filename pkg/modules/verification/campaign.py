# modules/verification/campaign.py
"""
Campaign execution: expands a campaign into replayable cases, evaluates every
requested bound plugin on every case and aggregates failures and tightness
statistics into a SuiteReport.

Cases run in worker threads under a semaphore; each case owns its RNG stream
and results are merged by case index, so reports do not depend on scheduling.
"""
import asyncio
import contextlib
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set

import numpy as np
from pydantic import BaseModel, Field

from core.errors import BerezinError, InputError
from core.logger import logger
from core.plugin_interface import BoundPlugin, ResolvedGrids
from core.settings import settings
from modules.block_operators import DirectSumModel, direct_sum_model
from modules.bound_catalog import BoundReport, OperatorContext, PairTerms, rhs_mutation
from modules.kernel_models import KernelModel, cached_model_from_spec
from modules.matrix_calculus import Operator
from modules.orlicz import factor_pair, power_orlicz, weight_from_spec
from modules.verification.generators import OPERATOR_CLASSES, PAIR_CLASSES, SINGLE_CLASSES, case_rng, random_pair
from utils.serialization import (
    CampaignSpec, CaseSpec, HardyModelSpec, ModelDocument, ParamGrids, StandardModelSpec, parse_document,
)

NXN_COPIES = 3
NXN_WEIGHT_STEPS = 3
NXN_PHASE_STEPS = 4


# --- Report types ---

class FailureRecord(BaseModel):
    case_index: int
    seed: Optional[int] = None
    bound_id: str
    link: str = "main"
    lhs: float
    rhs: float
    slack: float
    params: Dict[str, Any] = Field(default_factory=dict)
    operator_class: Optional[str] = None
    model: Optional[Dict[str, Any]] = None
    replay: Optional[Dict[str, Any]] = None


class CaseError(BaseModel):
    case_index: int
    bound_id: str
    error_type: str
    error: str


class TightnessStats(BaseModel):
    count: int = 0
    min_slack: Optional[float] = None
    mean_slack: Optional[float] = None
    violations: int = 0
    compared: int = 0
    improve_count: int = 0
    improve_frac: Optional[float] = None
    mean_relative_tightening: Optional[float] = None


class SuiteReport(BaseModel):
    cases: int = 0
    failures: List[FailureRecord] = Field(default_factory=list)
    errors: List[CaseError] = Field(default_factory=list)
    tightness: Dict[str, TightnessStats] = Field(default_factory=dict)
    config: Dict[str, Any] = Field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.errors

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        """Combine reports of disjoint suites; tightness keys must not overlap."""
        return SuiteReport(
            cases=self.cases + other.cases,
            failures=self.failures + other.failures,
            errors=self.errors + other.errors,
            tightness={**self.tightness, **other.tightness},
            config={**self.config, **other.config},
        )


class TightnessAccumulator:
    def __init__(self) -> None:
        self._slacks: List[float] = []
        self._violations = 0
        self._compared = 0
        self._improved = 0
        self._tightening: List[float] = []

    def add_many(self, slacks: np.ndarray, violations: int = 0) -> None:
        self._slacks.extend(float(s) for s in np.ravel(slacks))
        self._violations += violations

    def add(self, report: BoundReport) -> None:
        self._slacks.append(report.slack)
        if not report.holds:
            self._violations += 1
        if report.baseline is not None:
            self._compared += 1
            if report.improves:
                self._improved += 1
            if report.baseline > 0.0:
                self._tightening.append((report.baseline - report.rhs) / report.baseline)

    def summary(self) -> TightnessStats:
        if not self._slacks:
            return TightnessStats()
        return TightnessStats(
            count=len(self._slacks),
            min_slack=float(min(self._slacks)),
            mean_slack=float(math.fsum(self._slacks) / len(self._slacks)),
            violations=self._violations,
            compared=self._compared,
            improve_count=self._improved,
            improve_frac=self._improved / self._compared if self._compared else None,
            mean_relative_tightening=(math.fsum(self._tightening) / len(self._tightening)
                                      if self._tightening else None),
        )


def tightness_key(report: BoundReport) -> str:
    return report.bound_id if report.link == "main" else f"{report.bound_id}.{report.link}"


# --- Cases ---

@lru_cache(maxsize=16)
def _cached_direct_sum(spec_json: str, copies: int, weight_steps: Optional[int],
                       phase_steps: Optional[int]) -> DirectSumModel:
    base = cached_model_from_spec(parse_document({"spec": json.loads(spec_json)}, ModelDocument).spec)
    return direct_sum_model(base, copies, weight_steps=weight_steps, phase_steps=phase_steps)


@dataclass
class CaseContext:
    spec: CaseSpec
    model: KernelModel
    A: Operator
    B: Optional[Operator] = None
    blocks: Optional[List[List[Operator]]] = None
    blocks_n: Optional[List[List[Operator]]] = None
    direct_sum: Optional[DirectSumModel] = None
    direct_sum_n: Optional[DirectSumModel] = None
    _memo: Dict[str, Any] = field(default_factory=dict, repr=False)

    @property
    def operator_class(self) -> str:
        return self.spec.operator_class

    @property
    def kinds(self) -> Set[str]:
        if self.spec.block:
            return {"block"}
        kinds = {"single", "pair"}
        if self.operator_class == "commuting-pair":
            kinds.add("commuting_pair")
        elif self.operator_class == "psd-pair":
            kinds.add("psd_pair")
        return kinds

    @property
    def ctx_a(self) -> OperatorContext:
        if "ctx_a" not in self._memo:
            self._memo["ctx_a"] = OperatorContext(self.model, self.A)
        return self._memo["ctx_a"]

    @property
    def ctx_b(self) -> OperatorContext:
        if "ctx_b" not in self._memo:
            self._memo["ctx_b"] = OperatorContext(self.model, self.B)
        return self._memo["ctx_b"]

    @property
    def pair_terms(self) -> PairTerms:
        if "pair_terms" not in self._memo:
            self._memo["pair_terms"] = PairTerms(self.model, self.A, self.B, self.ctx_a, self.ctx_b)
        return self._memo["pair_terms"]


def _draw_grid(n: int, size: int, operator_class: str, rng: np.random.Generator) -> List[List[Operator]]:
    draws: List[Operator] = []
    while len(draws) < size * size:
        draws.extend(random_pair(n, operator_class, rng))
    return [draws[i * size:(i + 1) * size] for i in range(size)]


def build_case(spec: CaseSpec) -> CaseContext:
    """Regenerates the operators of a case from (seed, index, model, class)."""
    rng = case_rng(spec.seed, spec.index)
    model = cached_model_from_spec(spec.model_spec)
    n = model.dim
    if spec.block:
        spec_json = spec.model_spec.model_dump_json()
        blocks = _draw_grid(n, 2, spec.operator_class, rng)
        blocks_n = _draw_grid(n, NXN_COPIES, spec.operator_class, rng)
        return CaseContext(
            spec=spec, model=model, A=blocks[0][0], B=blocks[0][1], blocks=blocks, blocks_n=blocks_n,
            direct_sum=_cached_direct_sum(spec_json, 2, None, None),
            direct_sum_n=_cached_direct_sum(spec_json, NXN_COPIES, NXN_WEIGHT_STEPS, NXN_PHASE_STEPS),
        )
    A, B = random_pair(n, spec.operator_class, rng)
    return CaseContext(spec=spec, model=model, A=A, B=B)


def resolve_grids(params: ParamGrids) -> ResolvedGrids:
    def pick(values: Optional[List[float]], default: List[float]) -> tuple:
        return tuple(float(v) for v in (values if values is not None else default))

    r = pick(params.r, settings.grid_r)
    s = pick(params.s, settings.grid_s)
    alpha = pick(params.alpha, settings.grid_alpha)
    if params.orlicz is not None:
        phi = power_orlicz(params.orlicz.r)
        assert phi.r is not None
        r = (phi.r,)
    if params.pair is not None:
        s = (factor_pair(params.pair.s).s,)
    if params.weight is not None:
        alpha = (weight_from_spec(params.weight.alpha, params.weight.t).value,)
    return ResolvedGrids(
        t=pick(params.t, settings.grid_t),
        r=r,
        s=s,
        alpha=alpha,
        lam=pick(params.lam, settings.grid_lambda),
    )


def default_model_specs() -> List[Any]:
    specs: List[Any] = [StandardModelSpec(kind="standard", n=n) for n in settings.campaign_dims]
    specs += [
        HardyModelSpec(kind="hardy", N=N, radii=list(settings.campaign_hardy_radii),
                       angles=settings.campaign_hardy_angles)
        for N in settings.campaign_hardy_truncs
    ]
    return specs


def default_cases(seed: int, cases_per_class: int, classes: Sequence[str], bound_ids: Sequence[str],
                  params: Optional[ParamGrids] = None) -> List[CaseSpec]:
    """
    cases_per_class cases per class cycling through the default models, plus
    the same number of block cases per single class on the direct-sum bases.
    """
    params = params or ParamGrids()
    models = default_model_specs()
    bases = [StandardModelSpec(kind="standard", n=n) for n in settings.campaign_block_dims]
    cases: List[CaseSpec] = []

    def add(model_spec: Any, operator_class: str, block: bool) -> None:
        cases.append(CaseSpec(seed=seed, index=len(cases), model_spec=model_spec, operator_class=operator_class,
                              block=block, bound_ids=list(bound_ids), params=params))

    for operator_class in classes:
        for i in range(cases_per_class):
            add(models[i % len(models)], operator_class, False)
        if operator_class in SINGLE_CLASSES:
            for i in range(cases_per_class):
                add(bases[i % len(bases)], operator_class, True)
    return cases


def campaign_cases(campaign: CampaignSpec, plugins: Dict[str, BoundPlugin]) -> List[CaseSpec]:
    if campaign.cases is not None:
        return list(campaign.cases)
    classes = campaign.classes or list(OPERATOR_CLASSES)
    return default_cases(
        seed=settings.campaign_seed if campaign.seed is None else campaign.seed,
        cases_per_class=(settings.campaign_cases_per_class if campaign.cases_per_class is None
                         else campaign.cases_per_class),
        classes=classes,
        bound_ids=campaign.bound_ids or sorted(plugins),
        params=campaign.params,
    )


# --- Execution ---

@dataclass
class CaseOutcome:
    index: int
    reports: List[BoundReport]
    errors: List[CaseError]
    model: Dict[str, Any]


def evaluate_case(spec: CaseSpec, plugins: Dict[str, BoundPlugin]) -> CaseOutcome:
    case = build_case(spec)
    grids = resolve_grids(spec.params)
    reports: List[BoundReport] = []
    errors: List[CaseError] = []
    for bound_id in spec.bound_ids:
        plugin = plugins[bound_id]
        if not any(plugin.supports_operands(kind) for kind in case.kinds):
            continue
        try:
            reports.extend(plugin.evaluate(case, grids))
        except BerezinError as e:
            logger.error(f"Bound '{bound_id}' raised on case {spec.index}.",
                         extra={"case_index": spec.index, "bound_id": bound_id, "error": str(e)})
            errors.append(CaseError(case_index=spec.index, bound_id=bound_id,
                                    error_type=type(e).__name__, error=str(e)))
    return CaseOutcome(index=spec.index, reports=reports, errors=errors, model=case.model.describe())


def _validate_ids(specs: Iterable[CaseSpec], plugins: Dict[str, BoundPlugin]) -> None:
    unknown = sorted({b for spec in specs for b in spec.bound_ids if b not in plugins})
    if unknown:
        raise InputError(f"unknown bound ids: {', '.join(unknown)}")


def aggregate(specs: Sequence[CaseSpec], outcomes: Sequence[CaseOutcome],
              config: Optional[Dict[str, Any]] = None) -> SuiteReport:
    by_index = {spec.index: spec for spec in specs}
    stats: Dict[str, TightnessAccumulator] = {}
    report = SuiteReport(cases=len(specs), config=dict(config or {}))
    for outcome in sorted(outcomes, key=lambda o: o.index):
        spec = by_index[outcome.index]
        report.errors.extend(outcome.errors)
        for bound in outcome.reports:
            stats.setdefault(tightness_key(bound), TightnessAccumulator()).add(bound)
            if bound.failed:
                report.failures.append(FailureRecord(
                    case_index=outcome.index, seed=spec.seed, bound_id=bound.bound_id, link=bound.link,
                    lhs=bound.lhs, rhs=bound.rhs, slack=bound.slack, params=bound.params,
                    operator_class=spec.operator_class, model=outcome.model, replay=spec.model_dump(mode="json"),
                ))
    report.tightness = {key: acc.summary() for key, acc in sorted(stats.items())}
    return report


async def run_suite_async(specs: Sequence[CaseSpec], plugins: Optional[Dict[str, BoundPlugin]] = None,
                          workers: Optional[int] = None, mutation: Optional[float] = None,
                          config: Optional[Dict[str, Any]] = None) -> SuiteReport:
    if plugins is None:
        from core.plugin_loader import load_bound_plugins
        plugins = load_bound_plugins()
    _validate_ids(specs, plugins)
    workers = workers or settings.campaign_workers
    semaphore = asyncio.Semaphore(workers)
    logger.info("Campaign started.", extra={"cases": len(specs), "workers": workers, "mutation": mutation})

    async def run_one(spec: CaseSpec) -> CaseOutcome:
        async with semaphore:
            return await asyncio.to_thread(evaluate_case, spec, plugins)

    scope = rhs_mutation(mutation) if mutation is not None else contextlib.nullcontext()
    with scope:
        outcomes = await asyncio.gather(*(run_one(spec) for spec in specs))
    report = aggregate(specs, outcomes, config)
    logger.info("Campaign finished.", extra={"cases": report.cases, "failures": len(report.failures),
                                             "case_errors": len(report.errors)})
    return report


def run_suite(specs: Sequence[CaseSpec], plugins: Optional[Dict[str, BoundPlugin]] = None,
              workers: Optional[int] = None, mutation: Optional[float] = None,
              config: Optional[Dict[str, Any]] = None) -> SuiteReport:
    """Evaluate every requested bound on every case; an empty list gives an empty, passing report."""
    return asyncio.run(run_suite_async(specs, plugins, workers, mutation, config))


def resolved_config(campaign: CampaignSpec, specs: Sequence[CaseSpec]) -> Dict[str, Any]:
    grids = resolve_grids(campaign.params)
    return {
        "seed": settings.campaign_seed if campaign.seed is None else campaign.seed,
        "cases": len(specs),
        "classes": sorted({spec.operator_class for spec in specs}),
        "bound_ids": sorted({b for spec in specs for b in spec.bound_ids}),
        "grids": {"t": grids.t, "r": grids.r, "s": grids.s, "alpha": grids.alpha, "lambda": grids.lam},
        "tol_ineq_rel": settings.tol_ineq_rel,
        "self_test_mutation": campaign.self_test_mutation,
        "rng": "philox(seed_sequence([seed, case_index]))",
    }


def run_campaign(campaign: CampaignSpec, plugins: Optional[Dict[str, BoundPlugin]] = None,
                 workers: Optional[int] = None) -> SuiteReport:
    if plugins is None:
        from core.plugin_loader import load_bound_plugins
        plugins = load_bound_plugins()
    specs = campaign_cases(campaign, plugins)
    if any(spec.operator_class in PAIR_CLASSES and spec.block for spec in specs):
        raise InputError("block cases need a single operator class")
    return run_suite(specs, plugins, workers, campaign.self_test_mutation, resolved_config(campaign, specs))
