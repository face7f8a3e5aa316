"""Loading, validating and re-serializing input documents."""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .algebra import FiniteAlgebra, polynomial_algebra, split_algebra
from .azumaya import (
    AssocAlgebra,
    Involution,
    matrix_algebra,
    matrix_quaternion_over,
    quaternion_algebra,
    quaternion_over,
)
from .errors import InputParseError, ShapeError, ValidationError
from .norm import ExtModule, free_module, split_module
from .scalars import Domain, Matrix, SimpleExtension, parse_domain, polynomial_coefficients

# required arguments per task, besides name and op
TASK_ARGUMENTS: dict[str, tuple[str, ...]] = {
    "norm": ("module",),
    "nu": ("module", "vector"),
    "gamma-basis": ("n", "d"),
    "gamma-relations": ("n", "d"),
    "etale": ("algebra",),
    "split-oracle": ("module",),
    "base-change": ("module", "target"),
    "azumaya": ("algebra",),
    "a1d2": ("algebra",),
    "segre": ("perm", "r", "d"),
    "segre-restriction": ("sizes",),
    "quadpair-split": ("sizes",),
    "psi": ("algebra", "r"),
    "brauer-shadow": ("algebra",),
}
REFERENCES = {"module": "modules", "algebra": "algebras"}


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("norma").joinpath("data/input_document.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def build_domain(spec: str | dict) -> Domain:
    if isinstance(spec, str):
        return parse_domain(spec)
    base = parse_domain(spec["base"])
    name = spec.get("name", "x")
    coeffs = polynomial_coefficients(spec["modulus"], name)
    return SimpleExtension(base, tuple(base(c) for c in coeffs), name)


def element_coords(A: FiniteAlgebra, value: str | list) -> tuple:
    """Coordinates of an element given as a polynomial in x (for base[x]/(f)) or as a coordinate list."""
    base = A.base
    if isinstance(value, list):
        if len(value) != A.rank:
            raise ShapeError(f"element has {len(value)} coordinates, the algebra has rank {A.rank}")
        return tuple(base.parse(v) for v in value)
    if A.modulus is None:
        if A.rank and A.unit == tuple(base.one if i == 0 else base.zero for i in range(A.rank)):
            return tuple(base.parse(value) if i == 0 else base.zero for i in range(A.rank))
        raise ValidationError("scalar elements need an algebra whose unit is the first basis vector")
    acc = A.zero
    x = A.basis(1) if A.rank > 1 else A.one
    for k, c in enumerate(polynomial_coefficients(value)):
        if c:
            acc = acc + (x**k) * base(c)
    return acc.coords


@dataclass
class Document:
    data: dict
    domain: Domain
    algebras: dict[str, Any] = field(default_factory=dict)
    involutions: dict[str, Involution] = field(default_factory=dict)
    modules: dict[str, ExtModule] = field(default_factory=dict)

    @property
    def tasks(self) -> list[dict]:
        return self.data["tasks"]

    def algebra(self, name: str, kind: type | tuple[type, ...], what: str) -> Any:
        obj = self.algebras[name]
        if not isinstance(obj, kind):
            raise ValidationError(f"algebra {name!r} cannot be used as {what}")
        return obj

    def dumps(self) -> str:
        return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"


def _validate_schema(data: Any) -> None:
    validator = jsonschema.Draft202012Validator(schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "document"
        raise ValidationError(f"schema violation at {where}: {err.message}")


def _check_references(data: dict) -> None:
    algebras = data.get("algebras", {})
    modules = data.get("modules", {})
    for name, spec in algebras.items():
        over = spec.get("over")
        if over is not None and over not in algebras:
            raise ValidationError(f"algebra {name!r} refers to unknown algebra {over!r}")
    for name, spec in modules.items():
        if spec["over"] not in algebras:
            raise ValidationError(f"module {name!r} refers to unknown algebra {spec['over']!r}")
    seen = set()
    for task in data["tasks"]:
        if task["name"] in seen:
            raise ValidationError(f"duplicate task name {task['name']!r}")
        seen.add(task["name"])
        for arg in TASK_ARGUMENTS[task["op"]]:
            if arg not in task:
                raise ValidationError(f"task {task['name']!r}: missing argument {arg!r}")
        for arg, table in REFERENCES.items():
            if arg in task and task[arg] not in data.get(table, {}):
                raise ValidationError(f"task {task['name']!r}: unknown {arg} {task[arg]!r}")


def _build_algebra(doc: Document, name: str, spec: dict) -> None:
    F = doc.domain
    kind = spec["kind"]
    over = doc.algebras.get(spec["over"]) if "over" in spec else None
    if over is not None and not isinstance(over, FiniteAlgebra):
        raise ValidationError(f"algebra {name!r}: {spec['over']!r} is not commutative")
    if kind == "split":
        doc.algebras[name] = split_algebra(F, spec["rank"])
    elif kind == "quadratic":
        coeffs = polynomial_coefficients(spec["modulus"])
        if len(coeffs) != 3:
            raise ValidationError(f"algebra {name!r}: quadratic modulus must have degree 2")
        doc.algebras[name] = polynomial_algebra(F, coeffs, name=name)
    elif kind == "quaternion" and over is None:
        a = F.parse(spec["a"]) if isinstance(spec["a"], str) else None
        b = F.parse(spec["b"]) if isinstance(spec["b"], str) else None
        if a is None or b is None:
            raise ValidationError(f"algebra {name!r}: quaternion parameters over the base field are scalars")
        A, sigma = quaternion_algebra(a, b, F)
        doc.algebras[name] = A
        doc.involutions[name] = sigma
    elif kind == "quaternion":
        doc.algebras[name] = quaternion_over(over, element_coords(over, spec["a"]), element_coords(over, spec["b"]))
    elif kind == "matrix" and over is None:
        doc.algebras[name] = matrix_algebra(F, spec["size"])
    elif kind == "matrix":
        if spec["size"] != 2:
            raise ValidationError(f"algebra {name!r}: matrix algebras over an extension are supported for size 2")
        doc.algebras[name] = matrix_quaternion_over(over)
    else:
        consts = [[[F.parse(c) for c in cij] for cij in ci] for ci in spec["constants"]]
        unit = [F.parse(c) for c in spec["unit"]]
        if spec.get("commutative", True):
            doc.algebras[name] = FiniteAlgebra(F, consts, unit, name=name)
        else:
            doc.algebras[name] = AssocAlgebra(F, consts, unit, name=name)


def _build_module(doc: Document, name: str, spec: dict) -> None:
    ext = doc.algebra(spec["over"], FiniteAlgebra, "the extension of a module")
    if "rank" in spec:
        doc.modules[name] = free_module(ext, spec["rank"])
    elif "dims" in spec:
        doc.modules[name] = split_module(ext, spec["dims"])
    else:
        mats = [Matrix(doc.domain, [[doc.domain.parse(c) for c in row] for row in m]) for m in spec["action"]]
        doc.modules[name] = ExtModule(ext, mats, name=name)


def _normalize(doc: Document) -> None:
    """Rewrite scalars in canonical form so that dumping and reloading is stable."""
    F = doc.domain
    for spec in doc.data.get("algebras", {}).values():
        if spec["kind"] == "custom":
            spec["constants"] = [[[F.format(F.parse(c)) for c in cij] for cij in ci] for ci in spec["constants"]]
            spec["unit"] = [F.format(F.parse(c)) for c in spec["unit"]]
    for spec in doc.data.get("modules", {}).values():
        if "action" in spec:
            spec["action"] = [[[F.format(F.parse(c)) for c in row] for row in m] for m in spec["action"]]


def document_from_dict(data: Any) -> Document:
    _validate_schema(data)
    data = copy.deepcopy(data)
    _check_references(data)
    doc = Document(data, build_domain(data["domain"]))
    for name, spec in data.get("algebras", {}).items():
        try:
            _build_algebra(doc, name, spec)
        except (ValidationError, InputParseError) as exc:
            raise type(exc)(f"algebra {name!r}: {exc}") from exc
    for name, spec in data.get("modules", {}).items():
        _build_module(doc, name, spec)
    _normalize(doc)
    return doc


def parse_document(text: str) -> Document:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputParseError(f"not valid JSON: {exc}") from exc
    return document_from_dict(data)


def load_document(path: str | Path) -> Document:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_document(text)


def bundled_fixtures() -> list[tuple[str, str]]:
    """(name, text) of every fixture document shipped with the package, sorted by name."""
    root = resources.files("norma").joinpath("fixtures")
    return sorted((p.name, p.read_text(encoding="utf-8")) for p in root.iterdir() if p.name.endswith(".json"))

