"""NEAT-style variation operators and interactive session stepping.

Structural genes carry historical markings handed out by a shared
InnovationRegistry: the same structural event (adding the same (source,
target) connection, or splitting the same connection) always receives the
same id within one registry, which is what lets crossover align genomes and
lets lineage queries follow a connection across generations.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from .activations import HIDDEN_ACTIVATIONS
from .errors import EmptySelection, PaletteMismatch
from .genome import (WEIGHT_MAX, WEIGHT_MIN, ConnectionGene, Genome, INPUT_KINDS,
                     NodeGene, _orphan_violations, output_kinds_for)

#: Innovation ids reserved for the fixed seed topology, shared by every
#: registry so that independently created seeds always align.
SEED_NODE_IDS = {
    "input_x": 1,
    "input_y": 2,
    "input_d": 3,
    "input_bias": 4,
    "output_intensity": 5,
    "output_hue": 6,
    "output_saturation": 7,
}
_FIRST_FREE_ID = 8


class InnovationRegistry:
    """Thread-safe assigner of historical markings.

    next_id strictly increases and ids are never reused. connection ids are
    keyed by (source, target); the node created by splitting a connection is
    keyed by the split connection's innovation, so repeating a structural
    event yields the same ids.
    """

    def __init__(self, next_id: int = _FIRST_FREE_ID):
        self._lock = threading.Lock()
        self.next_id = max(next_id, _FIRST_FREE_ID)
        self.connection_index: dict[tuple[int, int], int] = {}
        self.node_index: dict[int, int] = {}

    def _fresh(self) -> int:
        value = self.next_id
        self.next_id += 1
        return value

    def connection_id(self, source: int, target: int) -> int:
        with self._lock:
            key = (source, target)
            if key not in self.connection_index:
                self.connection_index[key] = self._fresh()
            return self.connection_index[key]

    def split_node_id(self, connection_innovation: int) -> int:
        with self._lock:
            if connection_innovation not in self.node_index:
                self.node_index[connection_innovation] = self._fresh()
            return self.node_index[connection_innovation]

    def peek_split_node_id(self, connection_innovation: int) -> Optional[int]:
        with self._lock:
            return self.node_index.get(connection_innovation)

    def clone(self) -> "InnovationRegistry":
        out = InnovationRegistry(self.next_id)
        out.connection_index = dict(self.connection_index)
        out.node_index = dict(self.node_index)
        return out

    def to_state(self) -> dict:
        with self._lock:
            return {
                "next_id": self.next_id,
                "connections": sorted([s, t, i] for (s, t), i in self.connection_index.items()),
                "splits": sorted([c, n] for c, n in self.node_index.items()),
            }

    @classmethod
    def from_state(cls, state: dict) -> "InnovationRegistry":
        reg = cls(int(state["next_id"]))
        reg.connection_index = {(int(s), int(t)): int(i) for s, t, i in state["connections"]}
        reg.node_index = {int(c): int(n) for c, n in state["splits"]}
        return reg


@dataclass(frozen=True)
class MutationConfig:
    """Offspring mutation rates; weights are redrawn around their old value."""

    p_weight: float = 0.3
    p_add_connection: float = 0.1
    p_add_node: float = 0.06
    weight_sigma: float = 1.0
    weight_bounds: tuple[float, float] = (WEIGHT_MIN, WEIGHT_MAX)

    def __post_init__(self):
        for name in ("p_weight", "p_add_connection", "p_add_node"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {p}")
        if self.weight_sigma <= 0:
            raise ValueError("weight_sigma must be positive")

    def to_dict(self) -> dict:
        return {"p_weight": self.p_weight, "p_add_connection": self.p_add_connection,
                "p_add_node": self.p_add_node, "weight_sigma": self.weight_sigma,
                "weight_bounds": list(self.weight_bounds)}

    @classmethod
    def from_dict(cls, d: dict) -> "MutationConfig":
        return cls(p_weight=d["p_weight"], p_add_connection=d["p_add_connection"],
                   p_add_node=d["p_add_node"], weight_sigma=d["weight_sigma"],
                   weight_bounds=tuple(d["weight_bounds"]))


# --- seed genomes ------------------------------------------------------------

def seed_genome(palette: str, registry: InnovationRegistry, rng: np.random.Generator,
                input_kinds: Sequence[str] = INPUT_KINDS) -> Genome:
    """Minimal starting genome: inputs fully connected to outputs, no hidden nodes.

    Weights are uniform in [-3, 3]; topology (and therefore every innovation
    id) is identical across seeds drawn from one registry.
    """
    nodes = [NodeGene(SEED_NODE_IDS[k], k, "identity") for k in input_kinds]
    nodes += [NodeGene(SEED_NODE_IDS[k], k, "identity") for k in output_kinds_for(palette)]
    conns = []
    for inp in input_kinds:
        for out in output_kinds_for(palette):
            s, t = SEED_NODE_IDS[inp], SEED_NODE_IDS[out]
            weight = float(rng.uniform(WEIGHT_MIN, WEIGHT_MAX))
            conns.append(ConnectionGene(registry.connection_id(s, t), s, t, weight))
    return Genome(id=None, palette=palette, nodes=tuple(nodes), connections=tuple(conns))


def minimal_seed_topology(palette: str, registry: InnovationRegistry) -> Genome:
    """Seed-shaped genome with all-zero weights; the stand-in parent for
    genomes that were started from scratch (weights are irrelevant to
    structure analysis)."""
    zero_rng = np.random.default_rng(0)
    genome = seed_genome(palette, registry, zero_rng)
    conns = tuple(replace(c, weight=0.0) for c in genome.connections)
    return replace(genome, connections=conns)


# --- mutation operators ------------------------------------------------------

def weight_replacement_draw(old_weight: float, rng: np.random.Generator,
                            sigma: float = 1.0) -> float:
    """One pre-clamp replacement draw: Normal(mean=old_weight, sd=sigma)."""
    return float(rng.normal(old_weight, sigma))


def mutate_weights(genome: Genome, cfg: MutationConfig, rng: np.random.Generator) -> Genome:
    """Independently redraw each connection weight with probability p_weight."""
    lo, hi = cfg.weight_bounds
    new_conns = []
    for c in genome.connections:
        if rng.random() < cfg.p_weight:
            draw = weight_replacement_draw(c.weight, rng, cfg.weight_sigma)
            new_conns.append(replace(c, weight=float(np.clip(draw, lo, hi))))
        else:
            new_conns.append(c)
    return replace(genome, connections=tuple(new_conns))


def _enabled_adjacency(genome: Genome) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {n.innovation: set() for n in genome.nodes}
    for c in genome.enabled_connections:
        adj[c.source].add(c.target)
    return adj


def _reaches(adj: dict[int, set[int]], start: int, goal: int) -> bool:
    if start == goal:
        return True
    stack = [start]
    seen = {start}
    while stack:
        for nxt in adj.get(stack.pop(), ()):
            if nxt == goal:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def mutate_add_connection(genome: Genome, registry: InnovationRegistry,
                          rng: np.random.Generator,
                          max_attempts: int = 20) -> tuple[Genome, bool]:
    """Add one enabled connection between previously unconnected nodes.

    Candidates pair a non-output source with a non-input target whose (source,
    target) is absent from the genome; a uniform draw is rejected if the new
    edge would close a cycle in the enabled digraph. Returns (genome, changed);
    changed=False flags saturation (no candidate survived max_attempts draws,
    or none existed).
    """
    sources = [n.innovation for n in genome.nodes if not n.is_output]
    targets = [n.innovation for n in genome.nodes if not n.is_input]
    existing = genome.connection_pairs
    candidates = sorted((s, t) for s in sources for t in targets
                        if s != t and (s, t) not in existing)
    if not candidates:
        return genome, False

    adj = _enabled_adjacency(genome)
    for _ in range(max_attempts):
        s, t = candidates[int(rng.integers(len(candidates)))]
        if _reaches(adj, t, s):
            continue  # would close an enabled cycle
        innovation = registry.connection_id(s, t)
        weight = float(rng.uniform(WEIGHT_MIN, WEIGHT_MAX))
        conns = genome.connections + (ConnectionGene(innovation, s, t, weight),)
        return replace(genome, connections=tuple(conns)), True
    return genome, False


def mutate_add_node(genome: Genome, registry: InnovationRegistry,
                    rng: np.random.Generator) -> tuple[Genome, bool]:
    """Split a random enabled connection with a fresh hidden node.

    The old connection u->v (weight w) is disabled; u->n gets weight 1 and
    n->v keeps w, so the numeric behavior changes only through n's activation.
    Connections whose registry-assigned split node already exists in this
    genome (possible after crossover) are not eligible: re-splitting would
    duplicate the node id. Returns (genome, changed).
    """
    present = set(genome.node_by_innovation)
    eligible = [c for c in genome.enabled_connections
                if registry.peek_split_node_id(c.innovation) not in present]
    if not eligible:
        return genome, False
    conn = eligible[int(rng.integers(len(eligible)))]
    node_id = registry.split_node_id(conn.innovation)
    activation = HIDDEN_ACTIVATIONS[int(rng.integers(len(HIDDEN_ACTIVATIONS)))]
    in_id = registry.connection_id(conn.source, node_id)
    out_id = registry.connection_id(node_id, conn.target)

    nodes = genome.nodes + (NodeGene(node_id, "hidden", activation),)
    conns = tuple(replace(c, enabled=False) if c.innovation == conn.innovation else c
                  for c in genome.connections)
    conns += (ConnectionGene(in_id, conn.source, node_id, 1.0),
              ConnectionGene(out_id, node_id, conn.target, conn.weight))
    return replace(genome, nodes=tuple(nodes), connections=conns), True


def _admit_connections(chosen: dict[int, ConnectionGene], node_ids,
                       demote_on_cycle: bool) -> tuple[ConnectionGene, ...]:
    """Ascending-innovation admission keeping the enabled digraph acyclic.

    A conflicted enabled connection is dropped, or, in demote mode, kept with
    its enabled flag cleared.
    """
    adj: dict[int, set[int]] = {i: set() for i in node_ids}
    admitted: list[ConnectionGene] = []
    for innovation in sorted(chosen):
        c = chosen[innovation]
        if c.enabled and _reaches(adj, c.target, c.source):
            if not demote_on_cycle:
                continue
            c = replace(c, enabled=False)
        admitted.append(c)
        if c.enabled:
            adj[c.source].add(c.target)
    return tuple(admitted)


def crossover(a: Genome, b: Genome, rng: np.random.Generator) -> Genome:
    """Historical-marking crossover.

    Genes present in both parents are taken from either with probability 1/2
    (the enabled flag travels with the chosen copy); genes present in only one
    parent are always included. Connections are then admitted in ascending
    innovation order, skipping any whose inclusion would close a cycle in the
    child's enabled digraph.

    Rarely, dropping a conflicted connection strands a hidden node that had no
    other route onto an input-to-output path (the parents evolved opposite
    orderings of the same nodes and the later parent split its edge). When the
    skip pass would do that, the conflicted connections are instead kept with
    their enabled flag cleared, which provably preserves every node's paths
    while keeping the enabled digraph acyclic.
    """
    if a.palette != b.palette:
        raise PaletteMismatch(f"{a.palette} vs {b.palette}")

    nodes: dict[int, NodeGene] = {n.innovation: n for n in a.nodes}
    for n in b.nodes:
        nodes.setdefault(n.innovation, n)

    chosen: dict[int, ConnectionGene] = {}
    b_conns = b.connection_by_innovation
    for c in a.connections:
        other = b_conns.get(c.innovation)
        if other is None:
            chosen[c.innovation] = c
        else:
            chosen[c.innovation] = c if rng.random() < 0.5 else other
    for innovation, c in b_conns.items():
        chosen.setdefault(innovation, c)

    child_id = a.id if a.id == b.id else None

    def build(demote: bool) -> Genome:
        return Genome(id=child_id, palette=a.palette, nodes=tuple(nodes.values()),
                      connections=_admit_connections(chosen, nodes, demote))

    child = build(demote=False)
    if len(child.connections) != len(chosen) and _orphan_violations(child):
        child = build(demote=True)
    return child


def mutate(genome: Genome, cfg: MutationConfig, registry: InnovationRegistry,
           rng: np.random.Generator) -> Genome:
    """Standard offspring mutation: weight redraws, then with the configured
    probabilities one add-node and one add-connection mutation."""
    out = mutate_weights(genome, cfg, rng)
    if rng.random() < cfg.p_add_node:
        out, _ = mutate_add_node(out, registry, rng)
    if rng.random() < cfg.p_add_connection:
        out, _ = mutate_add_connection(out, registry, rng)
    return out


# --- interactive sessions ----------------------------------------------------

DEFAULT_POPULATION = 15
MIN_POPULATION = 4
MAX_POPULATION = 64


@dataclass
class Session:
    """One user's breeding run: a fixed-size population plus its provenance."""

    id: str
    population: tuple[Genome, ...]
    origin: Optional[str]  # image id this session branched from; None = scratch
    generation: int
    registry: InnovationRegistry
    rng_seed: Optional[int] = None


def scratch_population(palette: str, n: int, registry: InnovationRegistry,
                       rng: np.random.Generator) -> tuple[Genome, ...]:
    """Initial scratch population: independent randomized seed genomes."""
    return tuple(seed_genome(palette, registry, rng) for _ in range(n))


def branch(published: Genome, registry: InnovationRegistry, cfg: MutationConfig,
           rng: np.random.Generator, n: int) -> tuple[Genome, ...]:
    """Population of n for a branch session: the unmodified parent in slot 0,
    mutated clones of it everywhere else."""
    offspring = [published]
    for _ in range(n - 1):
        offspring.append(mutate(published, cfg, registry, rng))
    return tuple(offspring)


def next_generation(session: Session, selected: Sequence[int], cfg: MutationConfig,
                    rng: np.random.Generator) -> Session:
    """Selected genomes persist unchanged; remaining slots are filled with
    mutated crossover offspring of the selected (mutated clones if only one
    image was selected)."""
    if len(selected) == 0:
        raise EmptySelection("at least one slot must be selected")
    n_pop = len(session.population)
    picked: list[int] = []
    for idx in selected:
        if not 0 <= idx < n_pop:
            raise IndexError(f"slot {idx} outside population of {n_pop}")
        if idx not in picked:
            picked.append(idx)

    parents = [session.population[i] for i in picked]
    new_pop: list[Genome] = list(parents)
    while len(new_pop) < n_pop:
        if len(parents) >= 2:
            i, j = rng.choice(len(parents), size=2, replace=False)
            child = crossover(parents[int(i)], parents[int(j)], rng)
        else:
            child = parents[0]
        new_pop.append(mutate(child, cfg, session.registry, rng))
    return replace(session, population=tuple(new_pop), generation=session.generation + 1)
