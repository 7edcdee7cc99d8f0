# utils/serialization.py
"""
JSON documents for models, operators, block operators, Orlicz parameters and
campaigns, plus the [re, im] complex codec.

Every schema forbids unknown keys. Complex numbers are always [re, im] pairs so
that a dump/load cycle is bit-exact.
"""
import json
import os
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from typing_extensions import Annotated

from core.errors import InputError
from core.logger import logger

ComplexPair = Tuple[float, float]
ComplexMatrix = List[List[ComplexPair]]

T = TypeVar("T", bound=BaseModel)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


# --- Complex codec ---

def encode_complex(z: complex) -> List[float]:
    z = complex(z)
    return [z.real, z.imag]


def encode_complex_matrix(matrix: np.ndarray) -> List[List[List[float]]]:
    arr = np.asarray(matrix, dtype=np.complex128)
    return [[[float(v.real), float(v.imag)] for v in row] for row in arr]


def decode_complex_matrix(rows: ComplexMatrix) -> np.ndarray:
    if not rows or not rows[0]:
        raise InputError("complex matrix must be nonempty")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise InputError("complex matrix rows have unequal lengths")
    arr = np.array(rows, dtype=np.float64)
    return arr[..., 0] + 1j * arr[..., 1]


# --- Model specs ---

class StandardModelSpec(StrictModel):
    kind: Literal["standard"]
    n: int = Field(..., ge=1)


class HardyModelSpec(StrictModel):
    kind: Literal["hardy"]
    N: int = Field(..., ge=1)
    radii: List[float]
    angles: int = Field(..., ge=1)


class OnbModelSpec(StrictModel):
    kind: Literal["onb"]
    evaluations: ComplexMatrix


ModelSpec = Annotated[
    Union[StandardModelSpec, HardyModelSpec, OnbModelSpec], Field(discriminator="kind")
]


class ModelDocument(StrictModel):
    """Wrapper so a bare model spec can be validated from a file."""
    spec: ModelSpec


# --- Operators ---

class OperatorSpec(StrictModel):
    matrix: ComplexMatrix

    @field_validator("matrix")
    @classmethod
    def _square(cls, v: ComplexMatrix) -> ComplexMatrix:
        if not v or any(len(row) != len(v) for row in v):
            raise ValueError("operator matrix must be square and nonempty")
        return v

    def to_array(self) -> np.ndarray:
        return decode_complex_matrix(self.matrix)


class BlockOperatorSpec(StrictModel):
    blocks: List[List[OperatorSpec]]

    @field_validator("blocks")
    @classmethod
    def _square_grid(cls, v: List[List[OperatorSpec]]) -> List[List[OperatorSpec]]:
        if not v or any(len(row) != len(v) for row in v):
            raise ValueError("block grid must be square and nonempty")
        return v

    def to_arrays(self) -> List[List[np.ndarray]]:
        return [[op.to_array() for op in row] for row in self.blocks]


# --- Orlicz parameters ---

class PowerOrliczSpec(StrictModel):
    kind: Literal["power"]
    r: float = Field(..., ge=1.0)


class PairSpec(StrictModel):
    s: float = Field(..., ge=0.0, le=1.0)


class WeightSpec(StrictModel):
    alpha: Optional[float] = Field(None, ge=0.0)
    shape: Optional[Literal["t/(1-t)"]] = None
    t: Optional[float] = Field(None, gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _one_form(self) -> "WeightSpec":
        if (self.alpha is None) == (self.shape is None):
            raise ValueError("give either 'alpha' or 'shape' with 't'")
        if self.shape is not None and self.t is None:
            raise ValueError("shape 't/(1-t)' requires 't'")
        return self


# --- Campaigns ---

OperatorClassName = Literal[
    "general", "hermitian", "psd", "unitary", "nilpotent", "commuting-pair", "psd-pair"
]


class ParamGrids(StrictModel):
    """
    Grids of parameter values. A single Orlicz, pair or weight document
    ({"orlicz": …}, {"pair": …}, {"weight": …}) pins the r, s or α grid to
    one value and cannot be combined with the matching list.
    """
    t: Optional[List[float]] = None
    r: Optional[List[float]] = None
    s: Optional[List[float]] = None
    alpha: Optional[List[float]] = None
    lam: Optional[List[float]] = None
    orlicz: Optional[PowerOrliczSpec] = None
    pair: Optional[PairSpec] = None
    weight: Optional[WeightSpec] = None

    @model_validator(mode="after")
    def _no_double_source(self) -> "ParamGrids":
        for doc, grid in (("orlicz", "r"), ("pair", "s"), ("weight", "alpha")):
            if getattr(self, doc) is not None and getattr(self, grid) is not None:
                raise ValueError(f"give either '{doc}' or '{grid}', not both")
        return self


class CaseSpec(StrictModel):
    """One replayable case: operators are regenerated from (seed, model_spec, operator_class)."""
    seed: int = Field(..., ge=0, lt=2**64)
    index: int = Field(0, ge=0)
    model_spec: ModelSpec
    operator_class: OperatorClassName
    block: bool = False
    bound_ids: List[str]
    params: ParamGrids = ParamGrids()


class CampaignSpec(StrictModel):
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    cases_per_class: Optional[int] = Field(None, ge=0)
    classes: Optional[List[OperatorClassName]] = None
    bound_ids: Optional[List[str]] = None
    params: ParamGrids = ParamGrids()
    cases: Optional[List[CaseSpec]] = None
    self_test_mutation: Optional[float] = Field(None, gt=0.0)


# --- File I/O ---

def parse_document(payload: Any, schema: Type[T]) -> T:
    try:
        return schema.model_validate(payload)
    except ValidationError as e:
        raise InputError(f"invalid {schema.__name__}: {e}") from e


def read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise InputError(f"input file '{path}' not found") from e
    except json.JSONDecodeError as e:
        raise InputError(f"malformed JSON in '{path}': {e}") from e


def load_json_document(path: str, schema: Type[T]) -> T:
    """Read and validate a JSON document; any failure is an InputError."""
    payload = read_json(path)
    logger.debug(f"Loaded JSON document from '{path}'.", extra={"schema": schema.__name__})
    return parse_document(payload, schema)


def load_model_spec(path: str) -> Union[StandardModelSpec, HardyModelSpec, OnbModelSpec]:
    return parse_document({"spec": read_json(path)}, ModelDocument).spec


def load_operator_document(path: str) -> Union[OperatorSpec, BlockOperatorSpec]:
    """{"matrix": …} for a plain operator, {"blocks": [[op, …], …]} for a block operator."""
    payload = read_json(path)
    schema: Type[StrictModel] = BlockOperatorSpec if isinstance(payload, dict) and "blocks" in payload \
        else OperatorSpec
    return parse_document(payload, schema)


def write_json(path: str, payload: Dict[str, Any]) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(payload, indent=2))
    logger.debug(f"Report saved to '{path}'.")
