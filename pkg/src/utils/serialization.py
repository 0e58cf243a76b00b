"""JSON encoding of forms, structure fields and lattices"""

import json
from pathlib import Path
from typing import Any, Union

import numpy as np

from ..errors import RangeError, SerializationError, StructureError
from ..models.form import Form
from ..models.fourier import FourierScalar
from ..models.lattice import FujikiRing, QuadraticSpace
from ..models.structure import ComplexStructureField, FourierStructureField, KernelStructureField


def dumps(payload: Any) -> str:
    """Canonical text: sorted keys, two-space indent, shortest float repr"""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SerializationError(f"invalid JSON: {e}") from e


def write_json(payload: Any, path: Union[str, Path]):
    try:
        Path(path).write_text(dumps(payload))
    except OSError as e:
        raise SerializationError(f"Failed to write {path}: {e}") from e


def encode_form(form: Form) -> str:
    return dumps(form.to_json())


def decode_form(text: str) -> Form:
    data = loads(text)
    try:
        return Form.from_json(data)
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"malformed form payload: {e}") from e


def structure_to_json(field: ComplexStructureField) -> dict:
    """
    {"dim", "matrix"} with FourierScalar entries.

    Kernel fields serialize only when their source form is constant; they are
    evaluated once and written as a constant matrix.
    """
    if isinstance(field, FourierStructureField):
        return {"dim": field.dim, "matrix": [[entry.to_json() for entry in row] for row in field.entries]}
    if isinstance(field, KernelStructureField) and field.form.is_constant():
        matrix = field.matrix_at(np.zeros(field.dim))
        return structure_to_json(FourierStructureField.constant(matrix))
    raise SerializationError(f"cannot serialize a non-constant {type(field).__name__}")


def structure_from_json(data: dict) -> FourierStructureField:
    try:
        dim = int(data["dim"])
        entries = tuple(tuple(FourierScalar.from_json(dim, entry) for entry in row) for row in data["matrix"])
        return FourierStructureField(dim, entries)
    except (KeyError, TypeError, ValueError) as e:
        raise SerializationError(f"malformed structure payload: {e}") from e


def encode_structure(field: ComplexStructureField) -> str:
    return dumps(structure_to_json(field))


def decode_structure(text: str) -> FourierStructureField:
    return structure_from_json(loads(text))


def ring_from_json(data: dict) -> FujikiRing:
    """Lattice preset schema {"b", "gram", "n", "C", "name"}"""
    try:
        gram = np.array(data["gram"], dtype=float)
        if gram.shape != (int(data["b"]), int(data["b"])):
            raise SerializationError(f"gram has shape {gram.shape}, b = {data['b']}")
        space = QuadraticSpace(gram, data.get("name", ""))
        return FujikiRing(space, int(data["n"]), float(data["C"]), data.get("name", ""))
    except (KeyError, TypeError, ValueError, StructureError, RangeError) as e:
        raise SerializationError(f"malformed lattice payload: {e}") from e


def encode_ring(ring: FujikiRing) -> str:
    return dumps(ring.to_json())


def decode_ring(text: str) -> FujikiRing:
    return ring_from_json(loads(text))
