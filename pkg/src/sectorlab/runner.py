"""Task execution and report emission.

Tasks run in scenario order (optionally on a thread pool; assembly order
is always the scenario order, so reports are deterministic either way).
A failing task is recorded with a category marker instead of a partial
result; the report's exit code is 0 when everything passed, 3 when some
mathematical hypothesis failed and 4 on internal tolerance breaches.
JSON output is canonical (sorted keys) and therefore byte-stable for a
fixed scenario and version. CSV defect columns floor values below 1e-12
to 0 so golden tables do not depend on the BLAS build; the JSON report
keeps full precision.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import HypothesisError, ScenarioError, SectorlabError
from .infogeo import AlphaParams, alpha_divergence, conjugate_exponent
from .scaling import ScaledDynamicsFamily, flow_table
from .scenario import Scenario, encode_matrix
from .states import (
    StateFunctional,
    central_decomposition,
    disjointness_witness,
    gns,
    is_disjoint,
    is_quasi_equivalent,
)
from .symmetry import (
    augmented_center,
    augmented_fixed_points,
    classify_breaking,
    induce_covariant_representation,
    maximal_unbroken_subgroup,
)
from .thermal import default_probe_pairs, kms_defect, kms_defect_breakdown

CSV_DEFECT_FLOOR = 1e-12

FLOW_CSV_HEADER = "lambda,beta_in,beta_out,kms_defect"
DIVERGENCE_CSV_HEADER = "first,second,p,q,alpha,divergence"


# -- individual tasks ---------------------------------------------------


def _task_sectors(scenario: Scenario, task: dict) -> dict:
    names = task.get("states") or list(scenario.states)
    tol = scenario.tolerances["rank"]
    decompositions = {}
    for name in names:
        state = scenario.states[name]
        decomposition = central_decomposition(state, tol)
        decompositions[name] = [
            {
                "label": c.label,
                "weight": c.weight,
                "densities": [encode_matrix(d) for d in c.state.densities],
            }
            for c in decomposition.components
        ]
    pairs = []
    for i, first in enumerate(names):
        for second in names[i + 1:]:
            s1, s2 = scenario.states[first], scenario.states[second]
            disjoint = is_disjoint(s1, s2, tol)
            entry = {
                "first": first,
                "second": second,
                "disjoint": disjoint,
                "quasi_equivalent": is_quasi_equivalent(s1, s2, tol),
            }
            if disjoint:
                witness = disjointness_witness(s1, s2, tol)
                entry["witness"] = [encode_matrix(b) for b in witness.blocks]
                entry["witness_values"] = [
                    float(s1(witness).real), float(s2(witness).real)
                ]
            pairs.append(entry)
    return {"decompositions": decompositions, "pairs": pairs}


def _task_ssb(scenario: Scenario, task: dict) -> dict:
    tol = scenario.tolerances["rank"]
    action = scenario.action
    fiber_state = scenario.states[task["state"]]
    reference_name = task.get("reference_state")
    reference = (scenario.states[reference_name] if reference_name
                 else StateFunctional.maximally_mixed(scenario.shape))

    reference_rep = gns(reference, tol)
    breaking = classify_breaking(action, reference_rep, tol)

    fiber_rep = gns(fiber_state, tol)
    unbroken = maximal_unbroken_subgroup(action, fiber_rep, tol)
    result = {
        "breaking": {
            "verdict": breaking.verdict,
            "orbits": [list(o) for o in breaking.orbits],
        },
        "unbroken_subgroup": {
            "elements": list(unbroken.elements),
            "implementable": unbroken.implementable,
            "message": unbroken.message,
        },
    }
    if not unbroken.implementable:
        raise HypothesisError(
            f"unbroken subgroup not implementable: {unbroken.message}"
        )
    induced = induce_covariant_representation(
        fiber_rep, unbroken.unitaries, action, unbroken.elements, tol
    )
    defect_sections, defect_base = induced.covariance_defects()
    centre_report = augmented_center(induced, tol)
    fixed = augmented_fixed_points(action, induced.space, tol)
    product_defect = 0.0
    for x in fixed.sections:
        for y in fixed.sections:
            lhs = (x * y).values[0]
            rhs = x.values[0] * y.values[0]
            product_defect = max(product_defect, (lhs - rhs).norm())
    result.update({
        "induced": {
            "dimension": induced.dimension,
            "covariance_defect_sections": defect_sections,
            "covariance_defect_base": defect_base,
        },
        "augmented_centre": {
            "coset_count": centre_report.coset_count,
            "centre_dim_sections": centre_report.centre_dim_sections,
            "centre_dim_base": centre_report.centre_dim_base,
            "indicator_defect": centre_report.indicator_defect,
            "ok": centre_report.ok,
        },
        "fixed_points": {
            "dim_sections": fixed.dim,
            "dim_base_subalgebra": fixed.subalgebra.dim,
            "constancy_defect": fixed.constancy_defect,
            "product_defect": product_defect,
        },
    })
    return result


def _task_kmscheck(scenario: Scenario, task: dict) -> dict:
    state = scenario.states[task["state"]]
    dynamics = scenario.hamiltonians[task["hamiltonian"]]
    beta = float(task["beta"])
    t_grid = tuple(task.get("t_grid", (-1.0, 0.0, 1.0)))
    probes = default_probe_pairs(
        scenario.shape, int(task.get("probes", 8)), scenario.probe_seed
    )
    defect = kms_defect(state, dynamics, beta, probes, t_grid)
    return {
        "beta": beta,
        "defect": defect,
        "probe_defects": kms_defect_breakdown(state, dynamics, beta, probes, t_grid),
    }


def _task_scaleflow(scenario: Scenario, task: dict) -> dict:
    base = scenario.hamiltonians[task["hamiltonian"]]
    beta = float(task["beta"])
    grid = scenario.grid
    mass = task.get("mass_term")
    if mass is None:
        family = ScaledDynamicsFamily.constant(grid, base)
    else:
        family = ScaledDynamicsFamily.mass_scaled(
            grid,
            base,
            scenario.hamiltonians[mass["hamiltonian"]],
            float(mass["dimension"]),
            float(mass["m0"]),
        )
    probes = default_probe_pairs(
        scenario.shape, int(task.get("probes", 8)), scenario.probe_seed
    )
    rows = [
        {
            "lambda": rec.scale,
            "beta_in": rec.beta_in,
            "beta_out": rec.beta_out,
            "kms_defect": rec.kms_defect,
        }
        for rec in flow_table(family, beta, probes)
    ]
    return {"rows": rows}


def _task_divergence(scenario: Scenario, task: dict) -> dict:
    rows = []
    for first, second in task["pairs"]:
        s1, s2 = scenario.states[first], scenario.states[second]
        for p in task.get("exponents", [2.0]):
            params = AlphaParams(float(p), conjugate_exponent(float(p)))
            rows.append({
                "first": first,
                "second": second,
                "p": params.p,
                "q": params.q,
                "alpha": params.alpha,
                "divergence": alpha_divergence(s1, s2, params),
            })
    return {"rows": rows}


_TASK_RUNNERS = {
    "sectors": _task_sectors,
    "ssb": _task_ssb,
    "kmscheck": _task_kmscheck,
    "scaleflow": _task_scaleflow,
    "divergence": _task_divergence,
}


# -- orchestration ------------------------------------------------------


def _run_one(scenario: Scenario, index: int, task: dict) -> dict:
    kind = task["task"]
    name = task.get("name", f"{kind}{index}")
    entry = {"name": name, "task": kind}
    try:
        entry["result"] = _TASK_RUNNERS[kind](scenario, task)
        entry["status"] = "ok"
    except HypothesisError as exc:
        entry["status"] = "failed"
        entry["error"] = {"category": "hypothesis", "message": str(exc)}
    except SectorlabError as exc:
        entry["status"] = "failed"
        entry["error"] = {"category": "tolerance", "message": str(exc)}
    return entry


def run_scenario(scenario: Scenario, jobs: int = 1) -> dict:
    """Execute all tasks and assemble the report dictionary."""
    tasks = list(enumerate(scenario.tasks))
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(
                lambda it: _run_one(scenario, it[0], it[1]), tasks
            ))
    else:
        entries = [_run_one(scenario, i, t) for i, t in tasks]
    return {
        "tool": "sectorlab",
        "version": __version__,
        "schema_version": 1,
        "scenario": scenario.name,
        "tolerances": scenario.tolerances,
        "tasks": entries,
    }


def report_exit_code(report: dict) -> int:
    code = 0
    for entry in report["tasks"]:
        if entry.get("status") != "failed":
            continue
        category = entry.get("error", {}).get("category")
        code = max(code, 3 if category == "hypothesis" else 4)
    return code


# -- emission -----------------------------------------------------------


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, float) and value != value:  # NaN guard
        raise SectorlabError("report contains NaN")
    return value


def emit_json(report: dict) -> bytes:
    doc = json.dumps(_jsonable(report), sort_keys=True, indent=2)
    return (doc + "\n").encode("utf-8")


def _csv_float(x: float) -> str:
    return repr(float(x))


def _csv_defect(x: float) -> str:
    return _csv_float(0.0 if x < CSV_DEFECT_FLOOR else x)


def emit_csv(report: dict) -> bytes:
    """Flow and divergence tables.

    A single table task emits a bare table; several are separated by
    '# task <name>' comment lines.
    """
    tables = []
    for entry in report["tasks"]:
        if entry.get("status") != "ok":
            continue
        if entry["task"] == "scaleflow":
            lines = [FLOW_CSV_HEADER]
            for row in entry["result"]["rows"]:
                lines.append(",".join([
                    _csv_float(row["lambda"]),
                    _csv_float(row["beta_in"]),
                    _csv_float(row["beta_out"]),
                    _csv_defect(row["kms_defect"]),
                ]))
            tables.append((entry["name"], lines))
        elif entry["task"] == "divergence":
            lines = [DIVERGENCE_CSV_HEADER]
            for row in entry["result"]["rows"]:
                lines.append(",".join([
                    row["first"],
                    row["second"],
                    _csv_float(row["p"]),
                    _csv_float(row["q"]),
                    _csv_float(row["alpha"]),
                    _csv_float(row["divergence"]),
                ]))
            tables.append((entry["name"], lines))
    if not tables:
        return b""
    if len(tables) == 1:
        return ("\n".join(tables[0][1]) + "\n").encode("utf-8")
    chunks = []
    for name, lines in tables:
        chunks.append(f"# task {name}")
        chunks.extend(lines)
    return ("\n".join(chunks) + "\n").encode("utf-8")


def emit_text(report: dict) -> bytes:
    lines = [
        f"sectorlab {report['version']} report for scenario "
        f"'{report['scenario']}'",
    ]
    for entry in report["tasks"]:
        status = entry.get("status")
        lines.append(f"task {entry['name']} ({entry['task']}): {status}")
        if status == "failed":
            err = entry["error"]
            lines.append(f"  error [{err['category']}]: {err['message']}")
            continue
        result = entry["result"]
        kind = entry["task"]
        if kind == "sectors":
            for name, comps in result["decompositions"].items():
                weights = ", ".join(f"{c['label']}:{c['weight']:.6g}" for c in comps)
                lines.append(f"  state {name}: {len(comps)} sector(s) [{weights}]")
            for pair in result["pairs"]:
                relation = "disjoint" if pair["disjoint"] else (
                    "quasi-equivalent" if pair["quasi_equivalent"] else "overlapping"
                )
                lines.append(f"  pair ({pair['first']}, {pair['second']}): {relation}")
        elif kind == "ssb":
            orbits = result["breaking"]["orbits"]
            lines.append(
                f"  breaking verdict: {result['breaking']['verdict']} "
                f"orbits={orbits}"
            )
            sub = result["unbroken_subgroup"]
            lines.append(
                f"  unbroken subgroup: elements={sub['elements']} "
                f"implementable={sub['implementable']}"
            )
            centre = result["augmented_centre"]
            lines.append(
                f"  augmented centre: sections={centre['centre_dim_sections']} "
                f"base={centre['centre_dim_base']} expected={centre['coset_count']}"
            )
            fixed = result["fixed_points"]
            lines.append(
                f"  fixed points: sections={fixed['dim_sections']} "
                f"base={fixed['dim_base_subalgebra']}"
            )
        elif kind == "kmscheck":
            lines.append(
                f"  beta={result['beta']:.6g} defect={result['defect']:.3e}"
            )
        elif kind == "scaleflow":
            for row in result["rows"]:
                lines.append(
                    f"  lambda={row['lambda']:.6g} beta_out={row['beta_out']:.6g} "
                    f"defect={row['kms_defect']:.3e}"
                )
        elif kind == "divergence":
            for row in result["rows"]:
                lines.append(
                    f"  D({row['first']}||{row['second']}; p={row['p']:.6g}) "
                    f"= {row['divergence']:.6g}"
                )
    return ("\n".join(lines) + "\n").encode("utf-8")


EMITTERS = {"json": emit_json, "csv": emit_csv, "text": emit_text}


def emit_report(report: dict, fmt: str) -> bytes:
    if fmt not in EMITTERS:
        raise ScenarioError(f"unsupported output format {fmt!r}")
    return EMITTERS[fmt](report)
