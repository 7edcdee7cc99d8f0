# tests/test_serialization.py
import json

import numpy as np
import pytest
from numpy.testing import assert_array_equal
from pydantic import ValidationError

from core.errors import InputError
from utils.serialization import (
    BlockOperatorSpec, CampaignSpec, CaseSpec, HardyModelSpec, OperatorSpec, ParamGrids, StandardModelSpec,
    WeightSpec, decode_complex_matrix, encode_complex, encode_complex_matrix, load_json_document,
    load_model_spec, load_operator_document, parse_document, write_json,
)


class TestComplexCodec:
    def test_pairs(self):
        assert encode_complex(1 - 2j) == [1.0, -2.0]
        M = np.array([[1 + 1j, 0], [2, -3j]])
        assert encode_complex_matrix(M)[1][1] == [0.0, -3.0]

    def test_matrix_is_bit_exact(self):
        M = np.array([[0.1 + 0.7j, 1e-300], [np.pi, -np.e * 1j]])
        assert_array_equal(decode_complex_matrix(json.loads(json.dumps(encode_complex_matrix(M)))), M)

    def test_ragged_matrix(self):
        with pytest.raises(InputError):
            decode_complex_matrix([[[1, 0], [0, 0]], [[1, 0]]])
        with pytest.raises(InputError):
            decode_complex_matrix([])


class TestSchemas:
    def test_operator_must_be_square(self):
        with pytest.raises(ValidationError):
            OperatorSpec(matrix=[[[1, 0], [0, 0]]])

    def test_unknown_keys_are_rejected(self):
        with pytest.raises(InputError):
            parse_document({"matrix": [[[1, 0]]], "extra": 1}, OperatorSpec)

    def test_weight_forms(self):
        assert WeightSpec(alpha=2.0).alpha == 2.0
        assert WeightSpec(shape="t/(1-t)", t=0.25).t == 0.25
        with pytest.raises(ValidationError):
            WeightSpec(alpha=1.0, shape="t/(1-t)", t=0.5)
        with pytest.raises(ValidationError):
            WeightSpec(shape="t/(1-t)")
        with pytest.raises(ValidationError):
            WeightSpec()

    def test_case_spec_discriminates_models(self):
        case = CaseSpec(seed=3, model_spec={"kind": "hardy", "N": 8, "radii": [0.0, 0.5], "angles": 4},
                        operator_class="general", bound_ids=["sandwich"])
        assert isinstance(case.model_spec, HardyModelSpec)
        with pytest.raises(ValidationError):
            CaseSpec(seed=-1, model_spec={"kind": "standard", "n": 2}, operator_class="general", bound_ids=[])

    def test_campaign_mutation_is_positive(self):
        with pytest.raises(ValidationError):
            CampaignSpec(self_test_mutation=0.0)


class TestFiles:
    def test_model_spec_from_file(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text(json.dumps({"kind": "standard", "n": 3}))
        assert load_model_spec(str(path)) == StandardModelSpec(kind="standard", n=3)

    def test_missing_and_malformed_files(self, tmp_path):
        with pytest.raises(InputError, match="not found"):
            load_json_document(str(tmp_path / "nope.json"), OperatorSpec)
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        with pytest.raises(InputError, match="malformed"):
            load_json_document(str(bad), OperatorSpec)

    def test_write_json_creates_directories(self, tmp_path):
        path = tmp_path / "a" / "b" / "report.json"
        write_json(str(path), {"ok": True})
        assert json.loads(path.read_text()) == {"ok": True}


class TestParameterDocuments:
    def test_documents_sit_in_the_parameter_grids(self):
        params = ParamGrids(orlicz={"kind": "power", "r": 2}, pair={"s": 0.5}, weight={"alpha": 1.0})
        assert params.orlicz.r == 2.0 and params.pair.s == 0.5 and params.weight.alpha == 1.0

    def test_document_and_grid_are_exclusive(self):
        with pytest.raises(ValidationError, match="either 'orlicz' or 'r'"):
            ParamGrids(orlicz={"kind": "power", "r": 2}, r=[1.0])
        with pytest.raises(ValidationError):
            ParamGrids(weight={"alpha": 1.0}, alpha=[0.5])

    def test_out_of_range_documents(self):
        with pytest.raises(ValidationError):
            ParamGrids(orlicz={"kind": "power", "r": 0.5})
        with pytest.raises(ValidationError):
            ParamGrids(pair={"s": 1.5})


class TestOperatorDocuments:
    def test_plain_and_block_documents(self, tmp_path):
        op = {"matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
        plain = tmp_path / "op.json"
        plain.write_text(json.dumps(op))
        assert isinstance(load_operator_document(str(plain)), OperatorSpec)
        block = tmp_path / "block.json"
        block.write_text(json.dumps({"blocks": [[op, op], [op, op]]}))
        document = load_operator_document(str(block))
        assert isinstance(document, BlockOperatorSpec)
        assert_array_equal(document.to_arrays()[1][0], np.eye(2))

    def test_block_grid_must_be_square(self, tmp_path):
        op = {"matrix": [[[1, 0]]]}
        path = tmp_path / "block.json"
        path.write_text(json.dumps({"blocks": [[op, op]]}))
        with pytest.raises(InputError):
            load_operator_document(str(path))
