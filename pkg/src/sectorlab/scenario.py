"""Scenario files: parsing, validation and the wire encodings.

A scenario is a single JSON document naming an algebra shape, states,
Hamiltonians, optionally a group action and a scale grid, and an ordered
task list. Complex matrices travel as row-major nested arrays of
[re, im] pairs; block shapes as integer lists. All validation failures
raise ScenarioError with the offending path in the message.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .algebra import BlockShape
from .errors import ScenarioError
from .groups import FiniteGroup
from .scaling import CYCLIC, STRICT, ScaleGrid
from .states import StateFunctional, mix_states
from .symmetry import Automorphism, AutomorphicAction, verify_action
from .thermal import Dynamics, gibbs_state, ground_state

SCHEMA_VERSION = 1

TASK_KINDS = ("sectors", "ssb", "kmscheck", "scaleflow", "divergence")


def encode_complex(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def encode_matrix(m: np.ndarray) -> list:
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def decode_matrix(obj, n: int, path: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != n:
        raise ScenarioError(f"{path}: expected a {n}x{n} matrix")
    out = np.zeros((n, n), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ScenarioError(f"{path}[{i}]: expected a row of length {n}")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise ScenarioError(f"{path}[{i}][{j}]: expected an [re, im] pair")
            out[i, j] = complex(entry[0], entry[1])
    return out


def _require(condition: bool, message: str):
    if not condition:
        raise ScenarioError(message)


@dataclass
class Scenario:
    """A parsed and cross-checked scenario."""

    name: str
    shape: BlockShape
    states: dict[str, StateFunctional]
    hamiltonians: dict[str, Dynamics]
    group: FiniteGroup | None
    action: AutomorphicAction | None
    grid: ScaleGrid | None
    tasks: list[dict]
    tolerances: dict[str, float]
    probe_seed: int
    raw: dict = field(repr=False, default_factory=dict)


DEFAULT_TOLERANCES = {"rank": 1e-10, "acceptance": 1e-9}


def _parse_shape(doc: dict) -> BlockShape:
    dims = doc.get("algebra")
    _require(isinstance(dims, list) and dims, "algebra: expected a list of block sizes")
    _require(all(isinstance(n, int) and n >= 1 for n in dims),
             "algebra: block sizes must be positive integers")
    return BlockShape(tuple(dims))


def _parse_hamiltonians(doc: dict, shape: BlockShape) -> dict[str, Dynamics]:
    out = {}
    for name, spec in (doc.get("hamiltonians") or {}).items():
        path = f"hamiltonians.{name}"
        _require(isinstance(spec, dict) and "blocks" in spec,
                 f"{path}: expected an object with 'blocks'")
        blocks = spec["blocks"]
        _require(isinstance(blocks, list) and len(blocks) == shape.num_blocks,
                 f"{path}.blocks: need {shape.num_blocks} matrices")
        mats = [decode_matrix(b, n, f"{path}.blocks[{i}]")
                for i, (b, n) in enumerate(zip(blocks, shape.dims))]
        try:
            out[name] = Dynamics(shape, mats)
        except ValueError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return out


def _parse_states(doc: dict, shape: BlockShape,
                  hamiltonians: dict[str, Dynamics]) -> dict[str, StateFunctional]:
    out: dict[str, StateFunctional] = {}
    for name, spec in (doc.get("states") or {}).items():
        path = f"states.{name}"
        _require(isinstance(spec, dict), f"{path}: expected an object")
        try:
            if "densities" in spec:
                blocks = spec["densities"]
                _require(isinstance(blocks, list) and len(blocks) == shape.num_blocks,
                         f"{path}.densities: need {shape.num_blocks} matrices")
                mats = [decode_matrix(b, n, f"{path}.densities[{i}]")
                        for i, (b, n) in enumerate(zip(blocks, shape.dims))]
                out[name] = StateFunctional(shape, mats)
            elif spec.get("maximally_mixed"):
                out[name] = StateFunctional.maximally_mixed(shape)
            elif "uniform_block" in spec:
                block = spec["uniform_block"]
                _require(isinstance(block, int) and 0 <= block < shape.num_blocks,
                         f"{path}.uniform_block: invalid block index")
                out[name] = StateFunctional.uniform_on_block(shape, block)
            elif "vector" in spec:
                v = spec["vector"]
                _require(isinstance(v, dict) and "block" in v and "components" in v,
                         f"{path}.vector: expected block and components")
                block = v["block"]
                _require(isinstance(block, int) and 0 <= block < shape.num_blocks,
                         f"{path}.vector.block: invalid block index")
                comps = v["components"]
                n = shape.dims[block]
                _require(isinstance(comps, list) and len(comps) == n,
                         f"{path}.vector.components: need {n} entries")
                vec = np.array([complex(c[0], c[1]) for c in comps])
                out[name] = StateFunctional.vector_state(shape, block, vec)
            elif "gibbs_of" in spec:
                ham = spec["gibbs_of"]
                _require(ham in hamiltonians,
                         f"{path}.gibbs_of: unknown hamiltonian {ham!r}")
                beta = spec.get("beta")
                _require(isinstance(beta, (int, float)) and beta > 0,
                         f"{path}.beta: need a positive number")
                out[name] = gibbs_state(hamiltonians[ham], float(beta))
            elif "ground_of" in spec:
                ham = spec["ground_of"]
                _require(ham in hamiltonians,
                         f"{path}.ground_of: unknown hamiltonian {ham!r}")
                out[name] = ground_state(hamiltonians[ham])
            elif "mix" in spec:
                pairs = spec["mix"]
                _require(isinstance(pairs, list) and pairs,
                         f"{path}.mix: expected weighted state names")
                resolved = []
                for k, item in enumerate(pairs):
                    _require(isinstance(item, list) and len(item) == 2,
                             f"{path}.mix[{k}]: expected [weight, name]")
                    weight, ref = item
                    _require(isinstance(weight, (int, float)),
                             f"{path}.mix[{k}]: weight must be a number")
                    _require(ref in out,
                             f"{path}.mix[{k}]: unknown or later state {ref!r}")
                    resolved.append((float(weight), out[ref]))
                out[name] = mix_states(resolved)
            else:
                raise ScenarioError(f"{path}: unrecognized state specification")
        except (ValueError,) as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return out


def _parse_group(doc: dict) -> FiniteGroup | None:
    spec = doc.get("group")
    if spec is None:
        return None
    _require(isinstance(spec, dict), "group: expected an object")
    if "table" in spec:
        try:
            return FiniteGroup(spec["table"], name=spec.get("name", "group"))
        except ValueError as exc:
            raise ScenarioError(f"group.table: {exc}") from exc
    preset = spec.get("preset")
    n = spec.get("n")
    _require(preset in ("cyclic", "dihedral", "symmetric"),
             "group.preset: expected cyclic, dihedral or symmetric")
    _require(isinstance(n, int) and n >= 1, "group.n: need a positive integer")
    if preset == "cyclic":
        return FiniteGroup.cyclic(n)
    if preset == "dihedral":
        return FiniteGroup.dihedral(n)
    _require(n <= 5, "group.n: symmetric preset limited to n <= 5")
    return FiniteGroup.symmetric(n)


def _parse_action(doc: dict, shape: BlockShape,
                  group: FiniteGroup | None) -> AutomorphicAction | None:
    spec = doc.get("action")
    if spec is None:
        return None
    _require(group is not None, "action: requires a group")
    _require(isinstance(spec, dict) and isinstance(spec.get("generators"), list),
             "action.generators: expected a list")
    generators = {}
    for i, gen in enumerate(spec["generators"]):
        path = f"action.generators[{i}]"
        _require(isinstance(gen, dict), f"{path}: expected an object")
        element = gen.get("element")
        _require(isinstance(element, int) and 0 <= element < group.order,
                 f"{path}.element: invalid group element")
        perm = gen.get("permutation", list(range(shape.num_blocks)))
        _require(isinstance(perm, list) and len(perm) == shape.num_blocks,
                 f"{path}.permutation: need {shape.num_blocks} entries")
        unitaries_spec = gen.get("unitaries")
        if unitaries_spec is None:
            unitaries = [np.eye(n) for n in shape.dims]
        else:
            _require(isinstance(unitaries_spec, list)
                     and len(unitaries_spec) == shape.num_blocks,
                     f"{path}.unitaries: need {shape.num_blocks} matrices")
            unitaries = [decode_matrix(u, n, f"{path}.unitaries[{j}]")
                         for j, (u, n) in enumerate(zip(unitaries_spec, shape.dims))]
        try:
            generators[element] = Automorphism(shape, perm, unitaries)
        except ValueError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    try:
        action = AutomorphicAction.from_generators(group, generators)
    except ValueError as exc:
        raise ScenarioError(f"action: {exc}") from exc
    audit = verify_action(action)
    if not audit.ok:
        raise ScenarioError(
            f"action: not an automorphic action ({audit.detail}, "
            f"defect {audit.max_defect:.2e})"
        )
    return action


def _parse_grid(doc: dict) -> ScaleGrid | None:
    spec = doc.get("scale_grid")
    if spec is None:
        return None
    _require(isinstance(spec, dict), "scale_grid: expected an object")
    ratio = spec.get("ratio")
    k = spec.get("K")
    boundary = spec.get("boundary", CYCLIC)
    _require(isinstance(ratio, (int, float)) and ratio > 1,
             "scale_grid.ratio: need a number above 1")
    _require(isinstance(k, int) and k >= 0, "scale_grid.K: need a nonnegative integer")
    _require(boundary in (CYCLIC, STRICT),
             f"scale_grid.boundary: expected {CYCLIC!r} or {STRICT!r}")
    return ScaleGrid(float(ratio), k, boundary)


def _check_task(task: dict, index: int, scenario_parts: dict):
    path = f"tasks[{index}]"
    _require(isinstance(task, dict), f"{path}: expected an object")
    kind = task.get("task")
    _require(kind in TASK_KINDS, f"{path}.task: expected one of {TASK_KINDS}")
    states = scenario_parts["states"]
    hams = scenario_parts["hamiltonians"]

    def need_state(key, optional=False):
        name = task.get(key)
        if name is None and optional:
            return
        _require(isinstance(name, str) and name in states,
                 f"{path}.{key}: unknown state {name!r}")

    if kind == "sectors":
        listed = task.get("states")
        if listed is not None:
            _require(isinstance(listed, list) and listed,
                     f"{path}.states: expected a list of state names")
            for s in listed:
                _require(s in states, f"{path}.states: unknown state {s!r}")
    elif kind == "ssb":
        _require(scenario_parts["action"] is not None,
                 f"{path}: ssb requires a group action")
        need_state("state")
        need_state("reference_state", optional=True)
    elif kind == "kmscheck":
        need_state("state")
        ham = task.get("hamiltonian")
        _require(ham in hams, f"{path}.hamiltonian: unknown hamiltonian {ham!r}")
        beta = task.get("beta")
        _require(isinstance(beta, (int, float)) and beta > 0,
                 f"{path}.beta: need a positive number")
    elif kind == "scaleflow":
        _require(scenario_parts["grid"] is not None,
                 f"{path}: scaleflow requires a scale_grid")
        ham = task.get("hamiltonian")
        _require(ham in hams, f"{path}.hamiltonian: unknown hamiltonian {ham!r}")
        beta = task.get("beta")
        _require(isinstance(beta, (int, float)) and beta > 0,
                 f"{path}.beta: need a positive number")
        mass = task.get("mass_term")
        if mass is not None:
            _require(isinstance(mass, dict) and mass.get("hamiltonian") in hams,
                     f"{path}.mass_term.hamiltonian: unknown hamiltonian")
            _require(isinstance(mass.get("dimension"), (int, float)),
                     f"{path}.mass_term.dimension: need a number")
            _require(isinstance(mass.get("m0"), (int, float)),
                     f"{path}.mass_term.m0: need a number")
    elif kind == "divergence":
        pairs = task.get("pairs")
        _require(isinstance(pairs, list) and pairs,
                 f"{path}.pairs: expected a list of state name pairs")
        for k, pair in enumerate(pairs):
            _require(isinstance(pair, list) and len(pair) == 2
                     and all(p in states for p in pair),
                     f"{path}.pairs[{k}]: expected two known state names")
        exponents = task.get("exponents", [2.0])
        _require(isinstance(exponents, list) and exponents,
                 f"{path}.exponents: expected a list of exponents")
        for p in exponents:
            _require(isinstance(p, (int, float)) and p > 1 and math.isfinite(p),
                     f"{path}.exponents: exponents must be finite and above 1")


def parse_scenario(doc: dict, name: str = "scenario") -> Scenario:
    _require(isinstance(doc, dict), "scenario root must be an object")
    version = doc.get("version", SCHEMA_VERSION)
    _require(version == SCHEMA_VERSION,
             f"version: unsupported schema version {version}")
    shape = _parse_shape(doc)
    hamiltonians = _parse_hamiltonians(doc, shape)
    states = _parse_states(doc, shape, hamiltonians)
    group = _parse_group(doc)
    action = _parse_action(doc, shape, group)
    grid = _parse_grid(doc)

    tolerances = dict(DEFAULT_TOLERANCES)
    overrides = doc.get("tolerances") or {}
    _require(isinstance(overrides, dict), "tolerances: expected an object")
    for key, value in overrides.items():
        _require(key in DEFAULT_TOLERANCES, f"tolerances.{key}: unknown tolerance")
        _require(isinstance(value, (int, float)) and value > 0,
                 f"tolerances.{key}: need a positive number")
        tolerances[key] = float(value)

    probe_seed = doc.get("probe_seed", 7)
    _require(isinstance(probe_seed, int), "probe_seed: need an integer")

    tasks = doc.get("tasks", [])
    _require(isinstance(tasks, list), "tasks: expected a list")
    parts = {"states": states, "hamiltonians": hamiltonians,
             "action": action, "grid": grid}
    for i, task in enumerate(tasks):
        _check_task(task, i, parts)

    return Scenario(
        name=name,
        shape=shape,
        states=states,
        hamiltonians=hamiltonians,
        group=group,
        action=action,
        grid=grid,
        tasks=list(tasks),
        tolerances=tolerances,
        probe_seed=probe_seed,
        raw=doc,
    )


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_scenario(doc, name=name)
