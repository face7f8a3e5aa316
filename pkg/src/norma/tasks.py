"""Task runners for input documents and the command-line subcommands."""

from __future__ import annotations

import itertools
import random
from typing import Any, Callable

from .algebra import FieldEmbedding, FiniteAlgebra
from .azumaya import AssocAlgebra, RelativeQuaternion, a1d2_norm, brauer_shadow_split, split_triple_Z
from .document import Document, build_domain
from .errors import NormaError, PreconditionError, ValidationError
from .gamma import GammaSpace, check_gamma_relations
from .norm import base_change_theta, build_norm_module, psi_endo_iso, split_oracle
from .scalars import Domain, Matrix
from .segre import check_segre_restriction, parse_perm, perm_matrix

Result = dict[str, Any]


def fmt(domain: Domain, values: Any) -> Any:
    """Scalars (nested in lists or tuples) as canonical strings."""
    if isinstance(values, (list, tuple)):
        return [fmt(domain, v) for v in values]
    return domain.format(values)


def fmt_matrix(m: Matrix) -> list[list[str]]:
    return [[m.domain.format(x) for x in row] for row in m.rows]


def norm_summary(ext: FiniteAlgebra, module) -> Result:
    nm = build_norm_module(ext, module)
    return {
        "extension": ext.name or ext.base.label,
        "module_dimension": module.dim,
        "dimension": nm.dim,
        "expected_dimension": nm.expected_dim,
        "etale": nm.etale,
        "basis": [list(label) for label in nm.labels],
    }


def gamma_basis(domain: Domain, n: int, d: int) -> Result:
    space = GammaSpace(domain, n, d)
    return {
        "n": n,
        "d": d,
        "dimension": space.dim,
        "multisets": [[i + 1 for i in key] for key in space.keys],
        "exponents": [list(a) for a in space.basis],
    }


def segre_det(domain: Domain, perm_text: str, r: int, d: int) -> Result:
    sigma = parse_perm(perm_text, d)
    j = perm_matrix(sigma, r, d, domain)
    return {"perm": perm_text, "r": r, "d": d, "field": domain.label, "det": domain.format(j.det())}


def quadpair_split(sizes: list[int], primes: list[int], samples: int, rng: random.Random) -> Result:
    st = split_triple_Z(*sizes)
    report = st.verify(rng, samples)
    report["gram"] = [[str(x) for x in row] for row in st.gram.rows]
    report["reductions"] = {f"GF({p})": st.reduce(p).verify() for p in primes}
    return report


def a1d2_report(ext: FiniteAlgebra, quat: RelativeQuaternion, azumaya: bool) -> Result:
    nt = a1d2_norm(ext, quat, check_azumaya=azumaya)
    return dict(nt.report)


# document tasks -----------------------------------------------------------------------

def _int(task: dict, key: str, default: int | None = None) -> int:
    value = task.get(key, default)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"task {task['name']!r}: {key!r} must be an integer")
    return value


def _task_norm(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    module = doc.modules[task["module"]]
    return norm_summary(module.ext, module)


def _task_nu(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    module = doc.modules[task["module"]]
    F = doc.domain
    vector = [F.parse(c) for c in task["vector"]]
    if len(vector) != module.dim:
        raise ValidationError(f"task {task['name']!r}: vector has {len(vector)} entries, module has {module.dim}")
    nm = build_norm_module(module.ext, module)
    out: Result = {"nu": fmt(F, nm.nu(vector))}
    if nm.dim == 1:
        out["value"] = F.format(nm.to_base().apply(nm.nu(vector))[0])
    return out


def _task_gamma_basis(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    return gamma_basis(doc.domain, _int(task, "n"), _int(task, "d"))


def _task_gamma_relations(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    report = check_gamma_relations(doc.domain, _int(task, "n"), _int(task, "d"), rng, _int(task, "samples", samples))
    return {"dimensions": {str(k): v for k, v in report.dimensions.items()}, "checks": report.checks}


def _task_etale(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    A = doc.algebra(task["algebra"], FiniteAlgebra, "a commutative algebra")
    return {"etale": A.is_etale(), "rank": A.rank, "trace_form_det": doc.domain.format(A.trace_form().det())}


def _task_split_oracle(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    module = doc.modules[task["module"]]
    nm = build_norm_module(module.ext, module)
    oracle = split_oracle(nm)
    F = doc.domain
    count = 0
    for choice in itertools.product(*oracle.factor_basis):
        m = [F.one if j in choice else F.zero for j in range(module.dim)]
        if oracle.matrix.apply(nm.nu(m)) != oracle.pure_tensor(oracle.split_vector(m)):
            raise ValidationError(f"oracle does not carry ν to the pure tensor for basis choice {choice}")
        count += 1
    return {"factor_dims": list(oracle.factor_dims), "basis_tuples": count, "matrix": fmt_matrix(oracle.matrix)}


def _task_base_change(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    module = doc.modules[task["module"]]
    target = build_domain(task["target"])
    image = target.parse(task["image"]) if "image" in task else None
    emb = FieldEmbedding(doc.domain, target, image)
    nm = build_norm_module(module.ext, module)
    theta = base_change_theta(nm, emb)
    natural = theta.matrix @ emb.matrix(nm.projection_matrix) == theta.target.projection_matrix
    det = theta.matrix.det()
    if not natural:
        raise ValidationError("naturality square fails on the Γ^d basis")
    return {"target": target.label, "dimension": nm.dim, "theta_det": target.format(det), "bijective": bool(det)}


def _task_azumaya(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    A = doc.algebra(task["algebra"], AssocAlgebra, "an associative algebra over the base")
    return {"rank": A.rank, "azumaya": A.is_azumaya()}


def _task_a1d2(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    quat = doc.algebra(task["algebra"], RelativeQuaternion, "a quaternion algebra over an extension")
    return a1d2_report(quat.algebra.ext, quat, bool(task.get("azumaya", True)))


def _task_segre(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    return segre_det(doc.domain, task["perm"], _int(task, "r"), _int(task, "d"))


def _task_segre_restriction(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    return check_segre_restriction(task["sizes"], doc.domain, rng, _int(task, "samples", samples))


def _task_quadpair_split(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    return quadpair_split(task["sizes"], task.get("primes", [2]), _int(task, "samples", samples), rng)


def _task_psi(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    ext = doc.algebra(task["algebra"], FiniteAlgebra, "an étale extension")
    psi = psi_endo_iso(ext, _int(task, "r"))
    det = psi.matrix.det()
    return {"shape": list(psi.matrix.shape), "bijective": bool(det),
            "unital": psi.apply(psi.algebra.unit) == Matrix.identity(doc.domain, psi.module.dim)}


def _task_brauer_shadow(doc: Document, task: dict, rng: random.Random, samples: int) -> Result:
    A = doc.algebra(task["algebra"], AssocAlgebra, "a quaternion algebra over the base")
    sigma = doc.involutions.get(task["algebra"])
    if sigma is None:
        raise PreconditionError("brauer-shadow needs a quaternion algebra declared with kind 'quaternion'")
    return dict(brauer_shadow_split(A, sigma, rng, _int(task, "samples", samples)).report)


TASKS: dict[str, Callable[[Document, dict, random.Random, int], Result]] = {
    "norm": _task_norm,
    "nu": _task_nu,
    "gamma-basis": _task_gamma_basis,
    "gamma-relations": _task_gamma_relations,
    "etale": _task_etale,
    "split-oracle": _task_split_oracle,
    "base-change": _task_base_change,
    "azumaya": _task_azumaya,
    "a1d2": _task_a1d2,
    "segre": _task_segre,
    "segre-restriction": _task_segre_restriction,
    "quadpair-split": _task_quadpair_split,
    "psi": _task_psi,
    "brauer-shadow": _task_brauer_shadow,
}


def _expectations(task: dict, result: Result) -> list[str]:
    misses = ["check did not pass"] if result.get("passed") is False else []
    for key, want in task.get("expect", {}).items():
        if key not in result:
            misses.append(f"{key}: not in result")
        elif result[key] != want:
            misses.append(f"{key}: got {result[key]!r}, expected {want!r}")
    return misses


def run_task(doc: Document, task: dict, seed: int, samples: int) -> Result:
    # each task gets its own stream so that reports do not depend on task order
    rng = random.Random(f"{seed}:{task['name']}")
    entry: Result = {"name": task["name"], "op": task["op"]}
    try:
        result = TASKS[task["op"]](doc, task, rng, samples)
    except NormaError as exc:
        entry.update(status="error", exit_code=exc.exit_code, error=f"{type(exc).__name__}: {exc}")
        return entry
    misses = _expectations(task, result)
    entry["status"] = "fail" if misses else "pass"
    entry["result"] = result
    if misses:
        entry["mismatches"] = misses
    return entry


def run_document(doc: Document, seed: int = 0, samples: int = 100) -> tuple[Result, int]:
    """Run every task in document order; returns the report and the exit code."""
    entries = [run_task(doc, task, seed, samples) for task in doc.tasks]
    counts = {s: sum(e["status"] == s for e in entries) for s in ("pass", "fail", "error")}
    report = {"domain": doc.domain.label, "seed": seed, "tasks": entries, "summary": counts}
    errors = [e["exit_code"] for e in entries if e["status"] == "error"]
    if errors:
        return report, errors[0]
    return report, 1 if counts["fail"] else 0


def field_for(label: str) -> Domain:
    dom = build_domain(label)
    if not dom.is_field:
        raise PreconditionError(f"{dom.label} is not a field")
    return dom

