"""Chain specification files (YAML; plain JSON is accepted too).

::

    schema_version: 1
    states: [start, goal]          # labels, one per row of P
    P: [[0, 1], [0, 1]]            # row-stochastic, row-major
    nu: [1, 0]                     # restart distribution
    p: 0.5                         # restart probability, 0 < p < 1
    H: [goal]                      # target set: labels or indices

Every error names the offending field (and the line for YAML syntax errors).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import yaml

from .errors import KernelError, NegativeEntry, RowSumViolation
from .kernel import FiniteKernel, RestartChain, TargetSet, validate_distribution, validate_kernel

SCHEMA_VERSION = 1


class SpecError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ChainSpec:
    states: tuple[str, ...]
    kernel: FiniteKernel
    nu: np.ndarray
    p: float
    H: TargetSet

    def chain(self, p: float | None = None) -> RestartChain:
        return RestartChain(self.kernel, self.nu, self.p if p is None else p)

    def index(self, state) -> int:
        """Resolve a label (or an integer index given as int or numeric string)."""
        if isinstance(state, str) and state in self.states:
            return self.states.index(state)
        try:
            i = int(state)
        except (TypeError, ValueError):
            raise SpecError(f"unknown state {state!r}; known: {', '.join(self.states)}") from None
        if not 0 <= i < len(self.states):
            raise SpecError(f"state index {i} out of range")
        return i


def _numeric(value, field: str, shape_desc: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise SpecError(f"{field}: expected {shape_desc} of numbers") from None
    return arr


def parse_spec(doc, source: str = "<spec>") -> ChainSpec:
    if not isinstance(doc, dict):
        raise SpecError(f"{source}: top level must be a mapping")
    missing = [k for k in ("states", "P", "nu", "p", "H") if k not in doc]
    if missing:
        raise SpecError(f"{source}: missing field(s) {', '.join(missing)}")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SpecError(f"{source}: schema_version {version!r} not supported (expected {SCHEMA_VERSION})")

    states = doc["states"]
    if not isinstance(states, list) or not states:
        raise SpecError(f"{source}: states must be a nonempty list")
    states = tuple(str(s) for s in states)
    if len(set(states)) != len(states):
        raise SpecError(f"{source}: states: duplicate labels")
    n = len(states)

    P = _numeric(doc["P"], "P", "an n x n matrix")
    if P.shape != (n, n):
        raise SpecError(f"{source}: P: expected shape ({n}, {n}) to match states, got {P.shape}")
    try:
        kernel = validate_kernel(P)
    except NegativeEntry as e:
        raise SpecError(f"{source}: P[{e.row}][{e.col}] ({states[e.row]}): {e}") from None
    except RowSumViolation as e:
        raise SpecError(f"{source}: P[{e.row}] ({states[e.row]}): {e}") from None
    except KernelError as e:
        raise SpecError(f"{source}: P: {e}") from None

    try:
        nu = validate_distribution(_numeric(doc["nu"], "nu", "a vector"), n)
    except KernelError as e:
        raise SpecError(f"{source}: nu: {e}") from None

    try:
        p = float(doc["p"])
    except (TypeError, ValueError):
        raise SpecError(f"{source}: p: expected a number") from None
    if not 0.0 < p < 1.0:
        raise SpecError(f"{source}: p: restart probability must lie in (0, 1), got {p}")

    raw_h = doc["H"]
    if not isinstance(raw_h, list):
        raw_h = [raw_h]
    idx = []
    for item in raw_h:
        if isinstance(item, str) and item in states:
            idx.append(states.index(item))
        elif isinstance(item, int) and not isinstance(item, bool) and 0 <= item < n:
            idx.append(item)
        else:
            raise SpecError(f"{source}: H: unknown state {item!r}")
    try:
        H = TargetSet.of(idx, n)
    except KernelError as e:
        raise SpecError(f"{source}: H: {e}") from None
    return ChainSpec(states, kernel, nu, p, H)


def load_spec(path) -> ChainSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        where = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown position"
        raise SpecError(f"{path}: {where}: {e.problem}") from None
    return parse_spec(doc, str(path))


def dump_spec(spec: ChainSpec) -> str:
    """Serialize back to YAML; ``load_spec`` of the result reproduces ``spec``."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "states": list(spec.states),
        "P": spec.kernel.matrix.tolist(),
        "nu": spec.nu.tolist(),
        "p": spec.p,
        "H": [spec.states[i] for i in spec.H.indices],
    }
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)
