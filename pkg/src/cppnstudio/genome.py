"""CPPN genome model: typed gene records, invariants, and serialization.

A genome is an immutable value: nodes and connections are frozen dataclasses
held in innovation-sorted tuples. All evolution operators build new genomes
rather than mutating in place, which keeps evaluation and sweeping safe to
run concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Optional

from .errors import InvalidGenome

WEIGHT_MIN = -3.0
WEIGHT_MAX = 3.0

INPUT_KINDS = ("input_x", "input_y", "input_d", "input_bias")
OUTPUT_KINDS = ("output_intensity", "output_hue", "output_saturation")
NODE_KINDS = INPUT_KINDS + ("hidden",) + OUTPUT_KINDS
ACTIVATION_NAMES = ("identity", "sigmoid", "gaussian", "sine")
PALETTES = ("gray", "color")


def output_kinds_for(palette: str) -> tuple[str, ...]:
    if palette == "gray":
        return ("output_intensity",)
    if palette == "color":
        return OUTPUT_KINDS
    raise ValueError(f"unknown palette {palette!r}")


@dataclass(frozen=True)
class NodeGene:
    innovation: int
    kind: str
    activation: str

    @property
    def is_input(self) -> bool:
        return self.kind in INPUT_KINDS

    @property
    def is_output(self) -> bool:
        return self.kind in OUTPUT_KINDS


@dataclass(frozen=True)
class ConnectionGene:
    innovation: int
    source: int
    target: int
    weight: float
    enabled: bool = True


@dataclass(frozen=True)
class Genome:
    """An immutable CPPN: node genes plus weighted directed connection genes."""

    id: Optional[str]
    palette: str
    nodes: tuple[NodeGene, ...]
    connections: tuple[ConnectionGene, ...]

    def __post_init__(self):
        # Canonical gene order: ascending innovation.
        object.__setattr__(self, "nodes",
                           tuple(sorted(self.nodes, key=lambda n: n.innovation)))
        object.__setattr__(self, "connections",
                           tuple(sorted(self.connections, key=lambda c: c.innovation)))

    @cached_property
    def node_by_innovation(self) -> dict[int, NodeGene]:
        return {n.innovation: n for n in self.nodes}

    @cached_property
    def connection_by_innovation(self) -> dict[int, ConnectionGene]:
        return {c.innovation: c for c in self.connections}

    @cached_property
    def connection_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((c.source, c.target) for c in self.connections)

    @cached_property
    def enabled_connections(self) -> tuple[ConnectionGene, ...]:
        return tuple(c for c in self.connections if c.enabled)

    def node(self, innovation: int) -> NodeGene:
        return self.node_by_innovation[innovation]

    def connection(self, innovation: int) -> ConnectionGene:
        return self.connection_by_innovation[innovation]

    def inputs(self) -> tuple[NodeGene, ...]:
        return tuple(n for n in self.nodes if n.is_input)

    def outputs(self) -> tuple[NodeGene, ...]:
        return tuple(n for n in self.nodes if n.is_output)

    def hidden(self) -> tuple[NodeGene, ...]:
        return tuple(n for n in self.nodes if n.kind == "hidden")

    def with_id(self, new_id: Optional[str]) -> "Genome":
        return replace(self, id=new_id)

    def with_connection_weight(self, innovation: int, weight: float) -> "Genome":
        conns = tuple(replace(c, weight=weight) if c.innovation == innovation else c
                      for c in self.connections)
        return replace(self, connections=conns)

    def structural_key(self):
        """Hashable summary of topology and weights; ignores the id field."""
        return (self.palette,
                tuple((n.innovation, n.kind, n.activation) for n in self.nodes),
                tuple((c.innovation, c.source, c.target, c.weight, c.enabled)
                      for c in self.connections))


def toposort(genome: Genome) -> list[int]:
    """Topological order of all node innovations over enabled connections.

    Kahn's algorithm with ties broken by ascending innovation id, so the node
    order (and therefore any floating-point evaluation order) is reproducible.
    Raises InvalidGenome if the enabled digraph has a cycle.
    """
    indeg = {n.innovation: 0 for n in genome.nodes}
    out_edges: dict[int, list[int]] = {n.innovation: [] for n in genome.nodes}
    for c in genome.enabled_connections:
        indeg[c.target] += 1
        out_edges[c.source].append(c.target)
    ready = sorted(i for i, d in indeg.items() if d == 0)
    order: list[int] = []
    while ready:
        node = ready.pop(0)
        order.append(node)
        inserted = False
        for succ in out_edges[node]:
            indeg[succ] -= 1
            if indeg[succ] == 0:
                ready.append(succ)
                inserted = True
        if inserted:
            ready.sort()
    if len(order) != len(genome.nodes):
        raise InvalidGenome("enabled-connection digraph contains a cycle")
    return order


def _has_enabled_cycle(genome: Genome) -> bool:
    try:
        toposort(genome)
    except InvalidGenome:
        return True
    return False


def validate(genome: Genome, require_all_inputs: bool = True) -> list[str]:
    """Check every genome invariant; returns the list of violations (empty = ok).

    ``require_all_inputs=False`` relaxes the presence check for the distance
    and bias inputs (the reduced two-input mode); duplicates are still
    rejected.
    """
    violations: list[str] = []

    if genome.palette not in PALETTES:
        violations.append(f"unknown palette {genome.palette!r}")

    seen_nodes: set[int] = set()
    for n in genome.nodes:
        if n.innovation in seen_nodes:
            violations.append(f"duplicate node innovation {n.innovation}")
        seen_nodes.add(n.innovation)
        if n.kind not in NODE_KINDS:
            violations.append(f"node {n.innovation}: unknown kind {n.kind!r}")
        if n.activation not in ACTIVATION_NAMES:
            violations.append(f"node {n.innovation}: unknown activation {n.activation!r}")
        if n.is_input and n.activation != "identity":
            violations.append(f"input node {n.innovation} must carry identity activation")

    kind_counts = {k: 0 for k in NODE_KINDS}
    for n in genome.nodes:
        if n.kind in kind_counts:
            kind_counts[n.kind] += 1
    required_inputs = INPUT_KINDS if require_all_inputs else ("input_x", "input_y")
    optional_inputs = () if require_all_inputs else ("input_d", "input_bias")
    for kind in required_inputs:
        if kind_counts[kind] != 1:
            violations.append(f"expected exactly one {kind} node, found {kind_counts[kind]}")
    for kind in optional_inputs:
        if kind_counts[kind] > 1:
            violations.append(f"expected at most one {kind} node, found {kind_counts[kind]}")
    if kind_counts["output_intensity"] != 1:
        violations.append("expected exactly one output_intensity node, "
                          f"found {kind_counts['output_intensity']}")
    expect_color = 1 if genome.palette == "color" else 0
    for kind in ("output_hue", "output_saturation"):
        if kind_counts[kind] != expect_color:
            violations.append(f"palette {genome.palette!r} expects {expect_color} {kind} "
                              f"node(s), found {kind_counts[kind]}")

    seen_conns: set[int] = set()
    seen_pairs: set[tuple[int, int]] = set()
    for c in genome.connections:
        if c.innovation in seen_conns:
            violations.append(f"duplicate connection innovation {c.innovation}")
        seen_conns.add(c.innovation)
        pair = (c.source, c.target)
        if pair in seen_pairs:
            violations.append(f"duplicate connection pair {pair}")
        seen_pairs.add(pair)
        if not (WEIGHT_MIN <= c.weight <= WEIGHT_MAX):
            violations.append(f"connection {c.innovation}: weight {c.weight} outside "
                              f"[{WEIGHT_MIN}, {WEIGHT_MAX}]")
        src = genome.node_by_innovation.get(c.source)
        tgt = genome.node_by_innovation.get(c.target)
        if src is None:
            violations.append(f"connection {c.innovation}: unknown source {c.source}")
        elif src.is_output:
            violations.append(f"connection {c.innovation}: source {c.source} is an output node")
        if tgt is None:
            violations.append(f"connection {c.innovation}: unknown target {c.target}")
        elif tgt.is_input:
            violations.append(f"connection {c.innovation}: target {c.target} is an input node")

    if not violations and _has_enabled_cycle(genome):
        violations.append("enabled-connection digraph contains a cycle")

    if not violations:
        violations.extend(_orphan_violations(genome))

    return violations


def _orphan_violations(genome: Genome) -> list[str]:
    """Hidden nodes must sit on an input-to-output path counting all genes."""
    succ: dict[int, set[int]] = {n.innovation: set() for n in genome.nodes}
    pred: dict[int, set[int]] = {n.innovation: set() for n in genome.nodes}
    for c in genome.connections:
        succ[c.source].add(c.target)
        pred[c.target].add(c.source)

    def closure(seeds: Iterable[int], edges: dict[int, set[int]]) -> set[int]:
        seen = set(seeds)
        stack = list(seen)
        while stack:
            for nxt in edges[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    from_inputs = closure((n.innovation for n in genome.inputs()), succ)
    to_outputs = closure((n.innovation for n in genome.outputs()), pred)
    return [f"hidden node {n.innovation} is not on any input-to-output path"
            for n in genome.hidden()
            if n.innovation not in from_inputs or n.innovation not in to_outputs]


def require_valid(genome: Genome) -> Genome:
    """Raise InvalidGenome unless the genome passes validate()."""
    violations = validate(genome)
    if violations:
        raise InvalidGenome(violations)
    return genome


# --- serialization -----------------------------------------------------------
#
# Canonical JSON: UTF-8, keys sorted, compact separators, gene arrays in
# ascending innovation order. Save/load round-trips are byte-identical.

def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def genome_to_document(genome: Genome, parent_id: Optional[str] = None,
                       title: Optional[str] = None,
                       author: Optional[str] = None) -> dict:
    return {
        "id": genome.id,
        "parent_id": parent_id,
        "title": title,
        "author": author,
        "palette": genome.palette,
        "nodes": [{"innovation": n.innovation, "kind": n.kind, "activation": n.activation}
                  for n in genome.nodes],
        "connections": [{"innovation": c.innovation, "source": c.source, "target": c.target,
                         "weight": c.weight, "enabled": c.enabled}
                        for c in genome.connections],
    }


def genome_from_document(doc: dict) -> Genome:
    nodes = tuple(NodeGene(int(n["innovation"]), n["kind"], n["activation"])
                  for n in doc["nodes"])
    conns = tuple(ConnectionGene(int(c["innovation"]), int(c["source"]), int(c["target"]),
                                 float(c["weight"]), bool(c["enabled"]))
                  for c in doc["connections"])
    raw_id = doc.get("id")
    return Genome(id=None if raw_id is None else str(raw_id),
                  palette=doc["palette"], nodes=nodes, connections=conns)


def save_genome(genome: Genome, path, **metadata) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(genome_to_document(genome, **metadata)))
        fh.write("\n")


def load_genome(path) -> Genome:
    with open(path, "r", encoding="utf-8") as fh:
        return genome_from_document(json.load(fh))
