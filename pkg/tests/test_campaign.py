# tests/test_campaign.py
import pytest

from core.errors import InputError, NumericError
from core.plugin_interface import BoundPlugin
from core.plugin_loader import load_bound_plugins
from core.settings import settings
from modules.bound_catalog import make_report
from modules.verification.campaign import (
    SuiteReport, TightnessAccumulator, build_case, default_cases, evaluate_case, resolve_grids, run_campaign,
    run_suite, run_suite_async, tightness_key,
)
from utils.serialization import CampaignSpec, CaseSpec, ParamGrids

STD2 = {"kind": "standard", "n": 2}
HARDY = {"kind": "hardy", "N": 6, "radii": [0.0, 0.5], "angles": 4}


def case(index=0, operator_class="general", bound_ids=("sandwich", "mixed"), model=STD2, block=False, **params):
    return CaseSpec(seed=99, index=index, model_spec=model, operator_class=operator_class, block=block,
                    bound_ids=list(bound_ids), params=ParamGrids(**params))


class BrokenPlugin(BoundPlugin):
    def __init__(self, shared_resources=None):
        super().__init__("broken", "always raises", ("single",), shared_resources=shared_resources)

    def evaluate(self, case, grids):
        raise NumericError("eigensolver did not converge")


class TestCases:
    def test_build_case_is_reproducible(self):
        first, second = build_case(case(index=3)), build_case(case(index=3))
        assert (first.A == second.A).all() and (first.B == second.B).all()
        assert not (build_case(case(index=4)).A == first.A).all()

    def test_kinds(self):
        assert build_case(case()).kinds == {"single", "pair"}
        assert "commuting_pair" in build_case(case(operator_class="commuting-pair")).kinds
        block = build_case(case(block=True))
        assert block.kinds == {"block"}
        assert block.direct_sum.copies == 2 and block.direct_sum_n.copies == 3
        assert len(block.blocks_n) == 3

    def test_default_cases(self):
        specs = default_cases(5, 2, ["general", "commuting-pair"], ["sandwich"])
        assert [spec.index for spec in specs] == list(range(6))
        assert sum(spec.block for spec in specs) == 2
        assert all(spec.operator_class == "general" for spec in specs if spec.block)

    def test_resolve_grids(self):
        grids = resolve_grids(ParamGrids(t=[0.5], alpha=[2.0]))
        assert grids.t == (0.5,) and grids.alpha == (2.0,)
        assert grids.r == tuple(settings.grid_r)

    def test_parameter_documents_pin_their_grids(self):
        grids = resolve_grids(ParamGrids(orlicz={"kind": "power", "r": 3}, pair={"s": 0.25},
                                         weight={"shape": "t/(1-t)", "t": 0.25}))
        assert grids.r == (3.0,) and grids.s == (0.25,)
        assert grids.alpha == (pytest.approx(1.0 / 3.0),)
        assert resolve_grids(ParamGrids(weight={"alpha": 2.0})).alpha == (2.0,)

    def test_case_with_parameter_documents(self):
        spec = case(bound_ids=("orlicz_main",), t=[0.5], orlicz={"kind": "power", "r": 2}, pair={"s": 0.5},
                    weight={"alpha": 1.0})
        outcome = evaluate_case(spec, load_bound_plugins())
        assert outcome.errors == []
        swept = [(r.params["phi"], r.params["s"], r.params["alpha"]) for r in outcome.reports]
        assert swept == [("t^2", 0.5, 1.0)]
        assert all(r.holds for r in outcome.reports)


class TestAccumulator:
    def test_summary(self):
        acc = TightnessAccumulator()
        acc.add(make_report("x", 0.5, 0.8, baseline=1.0))
        acc.add(make_report("x", 0.5, 1.0, baseline=1.0))
        stats = acc.summary()
        assert stats.count == 2 and stats.compared == 2 and stats.improve_count == 1
        assert stats.improve_frac == pytest.approx(0.5)
        assert stats.min_slack == pytest.approx(0.3)
        assert stats.mean_relative_tightening == pytest.approx(0.1)

    def test_empty(self):
        assert TightnessAccumulator().summary().count == 0

    def test_keys(self):
        assert tightness_key(make_report("mixed", 0.0, 1.0)) == "mixed"
        assert tightness_key(make_report("mixed", 0.0, 1.0, link="bma")) == "mixed.bma"


class TestRunSuite:
    def test_empty_suite_passes(self):
        report = run_suite([])
        assert report.ok and report.exit_code == 0 and report.cases == 0

    def test_passing_suite(self):
        report = run_suite([case(0), case(1, model=HARDY)])
        assert report.ok
        assert {"sandwich.half_le_max", "mixed", "mixed.bma"} <= set(report.tightness)

    def test_results_do_not_depend_on_workers(self):
        specs = [case(i, bound_ids=("sandwich", "taghavi_chain", "axioms_th3")) for i in range(4)]
        assert run_suite(specs, workers=1).tightness == run_suite(specs, workers=3).tightness

    def test_mutation_produces_replayable_failures(self):
        report = run_suite([case(0, bound_ids=("sandwich",), t=[0.5])], mutation=0.9)
        assert not report.ok and report.exit_code == 1
        failure = report.failures[0]
        assert failure.bound_id == "sandwich" and failure.seed == 99
        replay = CaseSpec.model_validate(failure.replay)
        assert replay == case(0, bound_ids=("sandwich",), t=[0.5])

    def test_unknown_bound(self):
        with pytest.raises(InputError, match="unknown bound ids"):
            run_suite([case(bound_ids=("nope",))])

    def test_case_errors_are_recorded(self):
        report = run_suite([case(bound_ids=("broken",))], plugins={"broken": BrokenPlugin()})
        assert report.exit_code == 1
        assert report.errors[0].error_type == "NumericError" and report.errors[0].bound_id == "broken"

    def test_plugins_skip_unsupported_operands(self):
        report = run_suite([case(block=True, bound_ids=("sandwich", "block_diag"), t=[0.3])])
        assert report.ok
        assert "block_diag" in report.tightness and "sandwich.half_le_max" not in report.tightness

    @pytest.mark.asyncio
    async def test_async_entry_point(self):
        report = await run_suite_async([case(0, bound_ids=("basaran",), r=[1.0, 2.0])])
        assert report.ok and report.tightness["basaran"].count == 2


class TestRunCampaign:
    def test_generated_campaign(self):
        campaign = CampaignSpec(seed=5, cases_per_class=1, classes=["general", "psd-pair"],
                                bound_ids=["sandwich", "convexity_axioms", "block_offdiag_single"],
                                params=ParamGrids(t=[0.25, 0.5], r=[1.0, 2.0]))
        report = run_campaign(campaign)
        assert report.ok and report.cases == 3
        assert report.config["seed"] == 5
        assert {"sandwich.tber_le_ber", "convexity_axioms", "block_offdiag_single"} <= set(report.tightness)

    def test_self_test_mutation(self):
        campaign = CampaignSpec(cases=[case(0, bound_ids=("sandwich",), t=[0.5])], self_test_mutation=0.9)
        assert run_campaign(campaign).exit_code == 1

    def test_block_cases_need_single_classes(self):
        campaign = CampaignSpec(cases=[case(operator_class="psd-pair", block=True)])
        with pytest.raises(InputError):
            run_campaign(campaign)

    def test_merge(self):
        merged = SuiteReport(cases=1).merge(SuiteReport(cases=2))
        assert merged.cases == 3 and merged.ok
