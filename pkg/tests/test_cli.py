# tests/test_cli.py
import json

import pytest

from core.settings import settings
from main import main
from modules.cli_reports import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, reproduce_rows, run_lemma_suites
from modules.kernel_models import shift_operator
from utils.serialization import encode_complex_matrix

NILPOTENT_JSON = {"matrix": [[[0.0, 0.0], [1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}


@pytest.fixture
def inputs(tmp_path):
    model = tmp_path / "model.json"
    model.write_text(json.dumps({"kind": "standard", "n": 2}))
    operator = tmp_path / "operator.json"
    operator.write_text(json.dumps(NILPOTENT_JSON))
    return str(model), str(operator)


def read(path):
    return json.loads(path.read_text())


class TestNorms:
    def test_nilpotent(self, inputs, tmp_path):
        model, operator = inputs
        out = tmp_path / "norms.json"
        code = main(["norms", "--model", model, "--operator", operator, "--t", "0.3", "--t", "0.5",
                     "--out", str(out)])
        assert code == EXIT_OK
        payload = read(out)
        assert payload["ber"] == 0.0 and payload["ber_norm"] == 1.0
        assert payload["t_ber"][0]["value"] == pytest.approx(0.7)
        assert payload["t_ber"][0]["witness"] == [0, 1]
        assert payload["t_ber"][1]["value"] == pytest.approx(0.5)
        assert payload["min_t"] == {"t": 0.5, "value": pytest.approx(0.5)}
        assert payload["model"]["kind"] == "standard"

    def test_refinement_on_a_hardy_model(self, tmp_path):
        model = tmp_path / "hardy.json"
        model.write_text(json.dumps({"kind": "hardy", "N": 6, "radii": [0.0, 0.5], "angles": 4}))
        operator = tmp_path / "shift.json"
        operator.write_text(json.dumps({"matrix": encode_complex_matrix(shift_operator(6))}))
        out = tmp_path / "norms.json"
        assert main(["norms", "--model", str(model), "--operator", str(operator), "--refine",
                     "--out", str(out)]) == EXIT_OK
        entry = read(out)["t_ber"][0]
        assert entry["refined"] >= entry["value"]
        assert len(entry["refined_witness"]) == 2

    def test_block_operator_on_the_direct_sum(self, inputs, tmp_path):
        model, _ = inputs
        zero = {"matrix": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}
        operator = tmp_path / "block.json"
        operator.write_text(json.dumps({"blocks": [[zero, NILPOTENT_JSON], [zero, zero]]}))
        out = tmp_path / "norms.json"
        assert main(["norms", "--model", model, "--operator", str(operator), "--t", "0.3",
                     "--out", str(out)]) == EXIT_OK
        payload = read(out)
        assert payload["model"]["kind"] == "direct_sum" and payload["model"]["dim"] == 4
        assert payload["ber_norm"] == pytest.approx(1.0)
        assert payload["ber"] == pytest.approx(0.5)
        assert payload["t_ber"][0]["value"] == pytest.approx(0.7)

    def test_block_size_must_match_the_model(self, inputs, tmp_path):
        model, _ = inputs
        op = {"matrix": [[[1.0, 0.0]]]}
        operator = tmp_path / "block.json"
        operator.write_text(json.dumps({"blocks": [[op, op], [op, op]]}))
        assert main(["norms", "--model", model, "--operator", str(operator)]) == EXIT_INPUT

    def test_tolerance_override_is_scoped(self, inputs, tmp_path):
        model, operator = inputs
        out = tmp_path / "norms.json"
        before = settings.tol_ineq_rel
        assert main(["norms", "--model", model, "--operator", operator, "--tol-ineq", "1e-6",
                     "--out", str(out)]) == EXIT_OK
        assert read(out)["config"]["tol_ineq_rel"] == 1e-6
        assert settings.tol_ineq_rel == before


class TestSweep:
    def test_csv_curve(self, inputs, tmp_path):
        model, operator = inputs
        out = tmp_path / "curve.csv"
        assert main(["sweep-t", "--model", model, "--operator", operator, "--steps", "3",
                     "--out", str(out)]) == EXIT_OK
        assert out.read_text() == "t,t_ber\n0.0,1.0\n0.5,0.5\n1.0,1.0\n"

    def test_json_curve(self, inputs, tmp_path):
        model, operator = inputs
        out = tmp_path / "curve.json"
        assert main(["sweep-t", "--model", model, "--operator", operator, "--steps", "5", "--format", "json",
                     "--out", str(out)]) == EXIT_OK
        assert [row["t"] for row in read(out)["curve"]] == [0.0, 0.25, 0.5, 0.75, 1.0]


class TestVerify:
    @pytest.fixture
    def campaign(self, tmp_path):
        path = tmp_path / "campaign.json"
        path.write_text(json.dumps({"seed": 3, "cases_per_class": 1, "classes": ["general"],
                                    "bound_ids": ["sandwich", "mixed"], "params": {"t": [0.25, 0.5]}}))
        return str(path)

    def test_passing_campaign(self, campaign, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--campaign", campaign, "--out", str(out)]) == EXIT_OK
        report = read(out)
        assert report["failures"] == [] and report["cases"] == 2
        assert report["config"]["seed"] == 3

    def test_seed_override(self, campaign, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--campaign", campaign, "--seed", "11", "--out", str(out)]) == EXIT_OK
        assert read(out)["config"]["seed"] == 11

    def test_mutation_fails(self, campaign, tmp_path):
        out = tmp_path / "report.json"
        assert main(["verify", "--campaign", campaign, "--self-test-mutation", "0.9",
                     "--out", str(out)]) == EXIT_FAILURE
        failure = read(out)["failures"][0]
        assert failure["replay"]["seed"] == 3

    def test_parameter_documents(self, tmp_path):
        path = tmp_path / "campaign.json"
        path.write_text(json.dumps({
            "seed": 3, "cases_per_class": 1, "classes": ["general"], "bound_ids": ["orlicz_main", "th8_first"],
            "params": {"orlicz": {"kind": "power", "r": 2}, "pair": {"s": 0.5}, "weight": {"alpha": 0.5}},
        }))
        out = tmp_path / "report.json"
        assert main(["verify", "--campaign", str(path), "--out", str(out)]) == EXIT_OK
        report = read(out)
        assert report["failures"] == [] and report["tightness"]["orlicz_main"]["count"] == 1
        assert report["config"]["grids"]["r"] == [2.0] and report["config"]["grids"]["alpha"] == [0.5]

    def test_conflicting_parameter_sources(self, tmp_path):
        path = tmp_path / "campaign.json"
        path.write_text(json.dumps({"cases_per_class": 1, "classes": ["general"], "bound_ids": ["orlicz_main"],
                                    "params": {"orlicz": {"kind": "power", "r": 2}, "r": [1.0]}}))
        assert main(["verify", "--campaign", str(path)]) == EXIT_INPUT

    def test_unknown_bound(self, tmp_path):
        path = tmp_path / "campaign.json"
        path.write_text(json.dumps({"cases_per_class": 1, "classes": ["general"], "bound_ids": ["nope"]}))
        assert main(["verify", "--campaign", str(path)]) == EXIT_INPUT


class TestReproduceAndLemmas:
    def test_reproduce_rows_are_within_tolerance(self):
        rows = reproduce_rows()
        assert all(row["ok"] for row in rows), [row for row in rows if not row["ok"]]
        names = {row["row"] for row in rows}
        assert {"ber_norm_nilpotent", "tber_nilpotent", "product_AB", "min_tber_ones", "min_mixed_ones",
                "hardy_Mz", "hardy_Mz_symbol", "hardy_Mz_untruncated"} <= names

    def test_reproduce_text_table(self, capsys):
        assert main(["reproduce", "--format", "text"]) == EXIT_OK
        header = capsys.readouterr().out.splitlines()[0]
        assert header.split()[:2] == ["row", "paper"]

    def test_lemmas(self, tmp_path):
        out = tmp_path / "lemmas.json"
        assert main(["lemmas", "--count", "50", "--seed", "1", "--out", str(out)]) == EXIT_OK
        report = read(out)
        assert report["config"]["seed"] == 1
        assert "lemma_buzano" in report["tightness"]

    def test_lemma_suites_are_seeded(self):
        assert run_lemma_suites(4, 30).tightness == run_lemma_suites(4, 30).tightness


class TestInputErrors:
    def test_missing_model(self, inputs):
        _, operator = inputs
        assert main(["norms", "--operator", operator]) == EXIT_INPUT

    def test_missing_file(self, inputs, tmp_path):
        _, operator = inputs
        assert main(["norms", "--model", str(tmp_path / "none.json"), "--operator", operator]) == EXIT_INPUT

    def test_size_mismatch(self, inputs, tmp_path):
        _, operator = inputs
        model = tmp_path / "model3.json"
        model.write_text(json.dumps({"kind": "standard", "n": 3}))
        assert main(["norms", "--model", str(model), "--operator", operator]) == EXIT_INPUT

    def test_invalid_options(self, inputs):
        model, operator = inputs
        assert main(["sweep-t", "--model", model, "--operator", operator, "--steps", "1"]) == EXIT_INPUT
        assert main(["norms", "--model", model, "--operator", operator, "--t", "1.5"]) == EXIT_INPUT

    def test_unknown_model_kind(self, inputs, tmp_path):
        _, operator = inputs
        model = tmp_path / "bergman.json"
        model.write_text(json.dumps({"kind": "bergman", "n": 2}))
        assert main(["norms", "--model", str(model), "--operator", operator]) == EXIT_INPUT
