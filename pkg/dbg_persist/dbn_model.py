"""Dynamic Bayesian network model, validation and JSON document ingestion.

A :class:`Dbn` is the unrolled pair ``<B0, B->>`` over ``K + 1`` time slices.
Slice 0 carries CPTs conditioned on intra-slice parents only; slices ``1..K``
carry CPTs conditioned on intra-slice parents followed by the inter-slice
parents from slice ``k - 1``.

CPT rows are indexed by the lexicographic rank of the parent-state tuple, the
first declared parent varying slowest.
"""
from __future__ import annotations

import json
import logging
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Final, Mapping, Sequence

import networkx as nx
import numpy as np

__all__ = [
    "ROW_TOLERANCE",
    "DbnFormatError",
    "DbnValidationError",
    "Variable",
    "ParentRef",
    "Cpt",
    "Slice",
    "Dbn",
    "parse_dbn",
    "load_dbn",
    "validate_dbn",
    "serialize_dbn",
    "dump_dbn",
]

logger = logging.getLogger(__name__)

ROW_TOLERANCE: Final = 1e-9
# Sums closer to 1 than this are float noise and left untouched, which keeps
# parse(serialize(dbn)) field-for-field equal.
_RENORMALIZE_FLOOR: Final = 1e-12
_LAG_SUFFIX: Final = "[t-1]"


class DbnFormatError(ValueError):
    """The DBN document is malformed."""


class DbnValidationError(DbnFormatError):
    """The DBN document is well formed but breaks a network invariant."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Variable:
    """A discrete random variable with ordered state labels."""

    name: str
    states: tuple[str, ...]

    @property
    def cardinality(self) -> int:
        return len(self.states)


@dataclass(frozen=True, slots=True)
class ParentRef:
    """A parent of a CPT: same-slice (``lagged=False``) or previous slice."""

    name: str
    lagged: bool = False

    def label(self) -> str:
        return f"{self.name}{_LAG_SUFFIX}" if self.lagged else self.name


@dataclass(frozen=True, slots=True)
class Cpt:
    """Conditional probability table of ``child`` given ``parents``."""

    child: str
    parents: tuple[ParentRef, ...]
    rows: tuple[tuple[float, ...], ...]

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.rows, dtype=float)

    def parent_position(self, parent: ParentRef) -> int:
        return self.parents.index(parent)


@dataclass(frozen=True, slots=True)
class Slice:
    """CPTs of one time slice, ordered like the network's variables."""

    k: int
    cpts: tuple[Cpt, ...]

    def cpt(self, child: str) -> Cpt:
        for cpt in self.cpts:
            if cpt.child == child:
                return cpt
        raise KeyError(f"no CPT for {child} in slice {self.k}")


@dataclass(frozen=True, slots=True)
class Dbn:
    """An unrolled dynamic Bayesian network (immutable)."""

    variables: tuple[Variable, ...]
    delta_t: float
    intra_edges: tuple[tuple[str, str], ...]
    inter_edges: tuple[tuple[str, str], ...]
    slices: tuple[Slice, ...]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def last_slice(self) -> int:
        """``K``, the index of the last slice."""
        return len(self.slices) - 1

    @property
    def horizon(self) -> float:
        """``T_end = (K + 1) * delta_t``."""
        return len(self.slices) * self.delta_t

    def variable(self, name: str) -> Variable:
        for var in self.variables:
            if var.name == name:
                return var
        raise KeyError(f"unknown variable {name}")

    def cardinalities(self, cpt: Cpt) -> tuple[int, ...]:
        """State counts of the CPT's parents, in row-index order."""
        return tuple(self.variable(p.name).cardinality for p in cpt.parents)

    def expected_parents(self, child: str, k: int) -> tuple[ParentRef, ...]:
        """Structurally implied parents: intra first, then inter (``k >= 1``)."""
        parents = [ParentRef(p) for p, c in self.intra_edges if c == child]
        if k >= 1:
            parents.extend(ParentRef(p, lagged=True) for p, c in self.inter_edges if c == child)
        return tuple(parents)

    def cpt(self, k: int, child: str) -> Cpt:
        if not 0 <= k < len(self.slices):
            raise ValueError(f"slice {k} out of range 0..{self.last_slice}")
        return self.slices[k].cpt(child)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def _variable_violations(dbn: Dbn) -> list[str]:
    violations = []
    for name, count in Counter(dbn.names).items():
        if count > 1:
            violations.append(f"duplicate variable name: {name}")
    for var in dbn.variables:
        if not var.states:
            violations.append(f"variable {var.name} has no states")
        for label, count in Counter(var.states).items():
            if count > 1:
                violations.append(f"duplicate state label in {var.name}: {label}")
    return violations


def _edge_violations(dbn: Dbn) -> list[str]:
    violations = []
    known = set(dbn.names)
    for kind, edges in (("intra", dbn.intra_edges), ("inter", dbn.inter_edges)):
        for edge, count in Counter(edges).items():
            if count > 1:
                violations.append(f"duplicate {kind} edge: {edge[0]} -> {edge[1]}")
        for parent, child in edges:
            for name in (parent, child):
                if name not in known:
                    violations.append(f"unknown variable in {kind} edge {parent} -> {child}: {name}")

    graph = nx.DiGraph()
    graph.add_nodes_from(dbn.names)
    graph.add_edges_from(dbn.intra_edges)
    if not nx.is_directed_acyclic_graph(graph):
        cycle = [u for u, _ in nx.find_cycle(graph)]
        path = " -> ".join([*cycle, cycle[0]])
        violations.append(f"cyclic intra-slice structure: {path}")
    return violations


def _cpt_violations(dbn: Dbn, k: int, cpt: Cpt, known: set[str]) -> list[str]:
    where = f"{cpt.child} at slice {k}"
    violations = []

    expected = dbn.expected_parents(cpt.child, k)
    if Counter(cpt.parents) != Counter(expected):
        got = [p.label() for p in cpt.parents]
        want = [p.label() for p in expected]
        violations.append(f"parent mismatch for {where}: expected {want}, got {got}")
    unknown = [p.name for p in cpt.parents if p.name not in known]
    if unknown or cpt.child not in known:
        return violations + [f"unknown variable referenced by CPT of {where}"]

    n_rows = math.prod(dbn.cardinalities(cpt))
    n_states = dbn.variable(cpt.child).cardinality
    if len(cpt.rows) != n_rows:
        violations.append(f"row count mismatch: expected {n_rows}, got {len(cpt.rows)} for {where}")
    for r, row in enumerate(cpt.rows):
        if len(row) != n_states:
            violations.append(f"row length mismatch in row {r} of {where}: expected {n_states}, got {len(row)}")
            continue
        if any(not math.isfinite(p) or p < 0 for p in row):
            violations.append(f"non-stochastic row {r} of {where}: negative or non-finite entry")
            continue
        total = math.fsum(row)
        if abs(total - 1.0) > ROW_TOLERANCE:
            violations.append(f"non-stochastic row {r} of {where}: sums to {total:.12g}")
    return violations


def validate_dbn(dbn: Dbn) -> list[str]:
    """Return every invariant violation of *dbn* (empty list iff valid)."""
    violations: list[str] = []
    if not (math.isfinite(dbn.delta_t) and dbn.delta_t > 0):
        violations.append(f"delta_t must be positive, got {dbn.delta_t}")
    violations += _variable_violations(dbn)
    violations += _edge_violations(dbn)

    if not dbn.slices:
        violations.append("network has no slices")
    known = set(dbn.names)
    for position, sl in enumerate(dbn.slices):
        if sl.k != position:
            violations.append(f"slice numbering: expected k={position}, got k={sl.k}")
        children = [cpt.child for cpt in sl.cpts]
        for name in dbn.names:
            if name not in children:
                violations.append(f"missing CPT for {name} at slice {sl.k}")
        for child, count in Counter(children).items():
            if count > 1:
                violations.append(f"duplicate CPT for {child} at slice {sl.k}")
        for cpt in sl.cpts:
            violations += _cpt_violations(dbn, sl.k, cpt, known)
    return violations


# ---------------------------------------------------------------------------
# Document parsing
# ---------------------------------------------------------------------------


def _require(mapping: Mapping[str, Any], key: str, typ: type | tuple[type, ...], where: str) -> Any:
    if key not in mapping:
        raise DbnFormatError(f"missing key '{key}' in {where}")
    value = mapping[key]
    if isinstance(value, bool) or not isinstance(value, typ):
        raise DbnFormatError(f"field '{key}' in {where} has type {type(value).__name__}")
    return value


def _parse_edges(raw: Any, kind: str) -> tuple[tuple[str, str], ...]:
    if not isinstance(raw, list):
        raise DbnFormatError(f"{kind} must be a list of [parent, child] pairs")
    edges = []
    for pair in raw:
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, str) for x in pair)):
            raise DbnFormatError(f"malformed entry in {kind}: {pair!r}")
        edges.append((pair[0], pair[1]))
    return tuple(edges)


def _resolve_parent(label: str, child: str, k: int, intra: set, inter: set) -> ParentRef:
    # the suffix always selects the inter-slice parent; a bare name prefers the intra one
    if label.endswith(_LAG_SUFFIX):
        return ParentRef(label[: -len(_LAG_SUFFIX)], lagged=True)
    lagged = (label, child) not in intra and k >= 1 and (label, child) in inter
    return ParentRef(label, lagged=lagged)


def _parse_row(raw: Any, where: str) -> tuple[float, ...]:
    if not isinstance(raw, list) or any(isinstance(p, bool) or not isinstance(p, (int, float)) for p in raw):
        raise DbnFormatError(f"malformed row in {where}: {raw!r}")
    row = tuple(float(p) for p in raw)
    total = math.fsum(row)
    if _RENORMALIZE_FLOOR < abs(total - 1.0) <= ROW_TOLERANCE and all(p >= 0 for p in row):
        logger.warning("Renormalising row of %s (sum %.12g)", where, total)
        row = tuple(p / total for p in row)
    return row


def _parse_slice(raw: Any, order: Sequence[str], intra: set, inter: set) -> Slice:
    if not isinstance(raw, dict):
        raise DbnFormatError(f"slice entry must be an object, got {type(raw).__name__}")
    k = _require(raw, "k", int, "slice")
    cpts_raw = _require(raw, "cpts", dict, f"slice {k}")
    cpts = []
    for child, body in cpts_raw.items():
        where = f"CPT of {child} at slice {k}"
        if not isinstance(body, dict):
            raise DbnFormatError(f"{where} must be an object")
        labels = _require(body, "parents", list, where)
        if not all(isinstance(label, str) for label in labels):
            raise DbnFormatError(f"parents of {where} must be names")
        parents = tuple(_resolve_parent(label, child, k, intra, inter) for label in labels)
        rows = tuple(_parse_row(row, where) for row in _require(body, "rows", list, where))
        cpts.append(Cpt(child=child, parents=parents, rows=rows))
    rank = {name: i for i, name in enumerate(order)}
    cpts.sort(key=lambda c: (rank.get(c.child, len(rank)), c.child))
    return Slice(k=k, cpts=tuple(cpts))


def parse_dbn(document: Mapping[str, Any] | str) -> Dbn:
    """Build a validated :class:`Dbn` from a DBN document.

    Args:
        document: JSON text or the already-decoded JSON object.

    Raises:
        DbnFormatError: malformed document.
        DbnValidationError: the network breaks an invariant (non-stochastic
            row, cyclic intra-slice structure, parent/CPT mismatch, ...).
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DbnFormatError(f"malformed document: {exc}") from exc
    if not isinstance(document, dict):
        raise DbnFormatError("malformed document: top level must be an object")

    delta_t = float(_require(document, "delta_t", (int, float), "document"))
    variables = []
    for entry in _require(document, "variables", list, "document"):
        if not isinstance(entry, dict):
            raise DbnFormatError(f"malformed variable entry: {entry!r}")
        name = _require(entry, "name", str, "variable")
        states = _require(entry, "states", list, f"variable {name}")
        if not all(isinstance(s, str) for s in states):
            raise DbnFormatError(f"state labels of {name} must be strings")
        variables.append(Variable(name=name, states=tuple(states)))

    intra_edges = _parse_edges(_require(document, "intra_edges", list, "document"), "intra_edges")
    inter_edges = _parse_edges(document.get("inter_edges", []), "inter_edges")
    order = [v.name for v in variables]
    slices = [
        _parse_slice(raw, order, set(intra_edges), set(inter_edges))
        for raw in _require(document, "slices", list, "document")
    ]
    slices.sort(key=lambda s: s.k)

    dbn = Dbn(
        variables=tuple(variables),
        delta_t=delta_t,
        intra_edges=intra_edges,
        inter_edges=inter_edges,
        slices=tuple(slices),
    )
    violations = validate_dbn(dbn)
    if violations:
        raise DbnValidationError(violations)
    logger.info("Parsed DBN with %d variables and %d slices", len(variables), len(slices))
    return dbn


def load_dbn(path: str | Path) -> Dbn:
    """Read and parse a DBN document from *path* (UTF-8 JSON)."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_dbn(text)


def serialize_dbn(dbn: Dbn) -> dict[str, Any]:
    """Return the JSON-ready document for *dbn* (inverse of :func:`parse_dbn`)."""
    intra = set(dbn.intra_edges)

    def _label(parent: ParentRef, child: str) -> str:
        if parent.lagged and (parent.name, child) not in intra:
            return parent.name
        return parent.label()

    return {
        "delta_t": dbn.delta_t,
        "variables": [{"name": v.name, "states": list(v.states)} for v in dbn.variables],
        "intra_edges": [list(e) for e in dbn.intra_edges],
        "inter_edges": [list(e) for e in dbn.inter_edges],
        "slices": [
            {
                "k": sl.k,
                "cpts": {
                    cpt.child: {
                        "parents": [_label(p, cpt.child) for p in cpt.parents],
                        "rows": [list(row) for row in cpt.rows],
                    }
                    for cpt in sl.cpts
                },
            }
            for sl in dbn.slices
        ],
    }


def dump_dbn(dbn: Dbn) -> str:
    """Serialize *dbn* as indented JSON text with a trailing newline."""
    return json.dumps(serialize_dbn(dbn), indent=2) + "\n"
