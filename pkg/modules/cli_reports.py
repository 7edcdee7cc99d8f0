# modules/cli_reports.py
"""
Command implementations behind the CLI. Each command returns a CommandResult
(payload, optional table rows, exit code) and leaves rendering to
utils.report_formatter.

Exit codes: 0 success, 1 inequality failure, 2 input error.
"""
import contextlib
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Literal, Optional

import numpy as np
from pydantic import Field

from core.errors import InputError
from core.logger import logger
from core.settings import settings
from modules.berezin_core import (
    PairScanner, berezin_number, berezin_set, min_t_berezin, operator_for, refine_supremum, t_berezin_norm,
)
from modules.block_operators import block_n, direct_sum_model
from modules.bound_catalog import mixed_rhs_min, submultiplicativity_gap
from modules.kernel_models import (
    KernelModel, hardy_model, model_from_spec, mz_objective_closed_form, shift_operator, standard_model,
    truncated_shift_symbol,
)
from modules.verification.campaign import NXN_PHASE_STEPS, NXN_WEIGHT_STEPS, SuiteReport, run_campaign
from modules.verification.generators import case_rng
from modules.verification.lemmas import lemma_buzano, lemma_gen_cauchy, lemma_mixed_schwarz
from utils.serialization import (
    BlockOperatorSpec, CampaignSpec, StrictModel, encode_complex, load_json_document, load_model_spec,
    load_operator_document,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT = 2

REPRODUCE_TOL = 1e-10
NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]])
NILPOTENT_ADJOINT = NILPOTENT.T.copy()
ONES = np.ones((2, 2))


class CliConfig(StrictModel):
    command: Literal["norms", "sweep-t", "verify", "reproduce", "lemmas"]
    model: Optional[str] = None
    operator: Optional[str] = None
    campaign: Optional[str] = None
    t: Optional[List[float]] = None
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    out: Optional[str] = None
    format: Literal["json", "csv", "text"] = "json"
    tol_ineq: Optional[float] = Field(None, gt=0.0)
    self_test_mutation: Optional[float] = Field(None, gt=0.0)
    steps: int = Field(101, ge=2)
    refine: bool = False
    count: Optional[int] = Field(None, ge=1)
    workers: Optional[int] = Field(None, ge=1)


@dataclass
class CommandResult:
    payload: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    exit_code: int = EXIT_OK


@contextlib.contextmanager
def settings_overrides(config: CliConfig) -> Iterator[None]:
    """Apply per-invocation overrides to the settings singleton and restore them afterwards."""
    saved = settings.tol_ineq_rel
    if config.tol_ineq is not None:
        settings.tol_ineq_rel = config.tol_ineq
    try:
        yield
    finally:
        settings.tol_ineq_rel = saved


def resolved_config(config: CliConfig) -> Dict[str, Any]:
    payload = config.model_dump(mode="json")
    payload["tol_ineq_rel"] = settings.tol_ineq_rel
    return payload


def _require(value: Optional[str], flag: str) -> str:
    if not value:
        raise InputError(f"{flag} is required for this command")
    return value


def load_inputs(config: CliConfig):
    """
    The model and operator of norms / sweep-t. A block operator document is
    evaluated on the direct sum of as many copies of the model as it has
    block rows.
    """
    model = model_from_spec(load_model_spec(_require(config.model, "--model")))
    document = load_operator_document(_require(config.operator, "--operator"))
    if isinstance(document, BlockOperatorSpec):
        grid = block_n(document.to_arrays())
        if grid.block_dim != model.dim:
            raise InputError(f"blocks are {grid.block_dim}x{grid.block_dim}, model dimension is {model.dim}")
        steps = {} if grid.size == 2 else {"weight_steps": NXN_WEIGHT_STEPS, "phase_steps": NXN_PHASE_STEPS}
        model = direct_sum_model(model, grid.size, **steps)
        return model, operator_for(model, grid.matrix)
    return model, operator_for(model, document.to_array())


def _witness(model: KernelModel, pair) -> List[Any]:
    return [_point(model, pair[0]), _point(model, pair[1])]


def _point(model: KernelModel, index: int) -> Any:
    payload = model.points[index].payload
    return encode_complex(payload) if isinstance(payload, complex) else index


# --- norms / sweep-t ---

def cmd_norms(config: CliConfig) -> CommandResult:
    model, A = load_inputs(config)
    scanner = PairScanner(model, A)
    ber = berezin_number(model, A)
    norm = scanner.scan(1.0)
    min_t = min_t_berezin(model, A, scanner=scanner)
    t_list = config.t or [0.5]
    payload: Dict[str, Any] = {
        "config": resolved_config(config),
        "model": model.describe(),
        "ber": ber.value,
        "ber_witness": _witness(model, ber.witness),
        "ber_norm": norm.value,
        "ber_norm_witness": _witness(model, norm.witness),
        "t_ber": [],
        "min_t": {"t": min_t.t_star, "value": min_t.value},
    }
    for t in t_list:
        result = t_berezin_norm(model, A, t, scanner)
        entry = {"t": t, "value": result.value, "witness": _witness(model, result.witness)}
        if config.refine:
            refined = refine_supremum(model, A, t)
            entry["refined"] = refined.value
            entry["refined_witness"] = [encode_complex(z) for z in refined.witness_points]
        payload["t_ber"].append(entry)
    rows = [{"t": e["t"], "t_ber": e["value"]} for e in payload["t_ber"]]
    return CommandResult(payload=payload, rows=rows)


def cmd_sweep_t(config: CliConfig) -> CommandResult:
    model, A = load_inputs(config)
    scanner = PairScanner(model, A)
    rows = [{"t": float(t), "t_ber": scanner.scan(float(t)).value} for t in np.linspace(0.0, 1.0, config.steps)]
    payload = {"config": resolved_config(config), "model": model.describe(), "curve": rows}
    return CommandResult(payload=payload, rows=rows)


# --- verify ---

def cmd_verify(config: CliConfig) -> CommandResult:
    campaign = load_json_document(_require(config.campaign, "--campaign"), CampaignSpec)
    updates: Dict[str, Any] = {}
    if config.seed is not None:
        updates["seed"] = config.seed
    if config.self_test_mutation is not None:
        updates["self_test_mutation"] = config.self_test_mutation
    if updates:
        campaign = campaign.model_copy(update=updates)
    report = run_campaign(campaign, workers=config.workers)
    report.config["cli"] = resolved_config(config)
    return CommandResult(payload=report.model_dump(mode="json"), rows=suite_rows(report),
                         exit_code=report.exit_code)


def suite_rows(report: SuiteReport) -> List[Dict[str, Any]]:
    return [{"key": key, **stats.model_dump()} for key, stats in report.tightness.items()]


# --- reproduce ---

def _row(name: str, paper: float, computed: float, threshold: float = REPRODUCE_TOL,
         ok: Optional[bool] = None, **params: Any) -> Dict[str, Any]:
    diff = abs(computed - paper)
    return {"row": name, **params, "paper": paper, "computed": computed, "abs_diff": diff,
            "threshold": threshold, "ok": bool(diff <= threshold) if ok is None else ok}


def reproduce_rows() -> List[Dict[str, Any]]:
    std2 = standard_model(2)
    rows = [_row("ber_norm_nilpotent", 1.0, t_berezin_norm(std2, NILPOTENT, 1.0).value)]
    for t in np.round(np.linspace(0.0, 1.0, 11), 12):
        t = float(t)
        rows.append(_row("tber_nilpotent", max(t, 1.0 - t), t_berezin_norm(std2, NILPOTENT, t).value, t=t))
    for t in (0.25, 0.5, 0.75):
        product, tber_ab = submultiplicativity_gap(std2, NILPOTENT, NILPOTENT_ADJOINT, t)
        rows.append(_row("product_AB", 1.0, tber_ab, t=t))
        rows.append(_row("product_of_norms", max(t, 1.0 - t) ** 2, product, t=t))
    rows.append(_row("min_tber_ones", 1.0, min_t_berezin(std2, ONES).value))
    rows.append(_row("min_mixed_ones", float(np.sqrt(2.0)), mixed_rhs_min(std2, ONES.astype(np.complex128)).value))

    model = hardy_model(settings.hardy_trunc)
    S = shift_operator(settings.hardy_trunc)
    threshold = settings.hardy_mz_threshold
    ber = berezin_number(model, S).value
    rows.append(_row("hardy_Mz", 1.0, ber, threshold=1.0 - threshold, ok=ber >= threshold))
    lams = np.array([p.payload for p in model.points], dtype=np.complex128)
    symbol_error = float(np.max(np.abs(berezin_set(model, S) - truncated_shift_symbol(lams, settings.hardy_trunc))))
    rows.append(_row("hardy_Mz_symbol", 0.0, symbol_error))
    untruncated = float(np.max(mz_objective_closed_form(lams[:, None], lams[None, :], 0.5)))
    rows.append(_row("hardy_Mz_untruncated", 1.0, untruncated, threshold=1.0 - threshold, ok=untruncated >= threshold))
    return rows


def cmd_reproduce(config: CliConfig) -> CommandResult:
    rows = reproduce_rows()
    failed = [r["row"] for r in rows if not r["ok"]]
    if failed:
        logger.error("Reproduction rows out of tolerance.", extra={"rows": failed})
    payload = {"config": resolved_config(config), "rows": rows}
    return CommandResult(payload=payload, rows=rows, exit_code=EXIT_FAILURE if failed else EXIT_OK)


# --- lemmas ---

LEMMA_COUNTS = {"buzano": 100_000, "gen_cauchy": 100_000, "mixed_schwarz": 10_000}
LEMMA_DIM = 8


def run_lemma_suites(seed: int, count: Optional[int] = None) -> SuiteReport:
    """The three lemma oracles, each on its own stream keyed by (seed, suite number)."""
    alphas = (0.0, 0.5, 1.0, 10.0)
    s_grid = (0.25, 0.5, 0.75)
    report = lemma_buzano(case_rng(seed, 0), LEMMA_DIM, count or LEMMA_COUNTS["buzano"], seed)
    report = report.merge(lemma_gen_cauchy(case_rng(seed, 1), LEMMA_DIM, count or LEMMA_COUNTS["gen_cauchy"],
                                           alphas, seed))
    report = report.merge(lemma_mixed_schwarz(case_rng(seed, 2), 4, count or LEMMA_COUNTS["mixed_schwarz"],
                                              s_grid, seed))
    return report


def cmd_lemmas(config: CliConfig) -> CommandResult:
    seed = settings.campaign_seed if config.seed is None else config.seed
    report = run_lemma_suites(seed, config.count)
    report.config = resolved_config(config)
    report.config["seed"] = seed
    return CommandResult(payload=report.model_dump(mode="json"), rows=suite_rows(report),
                         exit_code=report.exit_code)


COMMANDS = {
    "norms": cmd_norms,
    "sweep-t": cmd_sweep_t,
    "verify": cmd_verify,
    "reproduce": cmd_reproduce,
    "lemmas": cmd_lemmas,
}


def run_command(config: CliConfig) -> CommandResult:
    with settings_overrides(config):
        return COMMANDS[config.command](config)
