"""Generators and independent oracles shared across the test modules.

The oracles deliberately take different routes than the library: reachability
goes through networkx, the Wilcoxon null is enumerated sign pattern by sign
pattern, and the crossover law is replayed with its own cycle checker.
"""

from __future__ import annotations

import itertools

import networkx as nx
import numpy as np
from scipy import stats as sps

import cppnstudio as cs
from cppnstudio.genome import ConnectionGene, Genome, NodeGene

GRAY_BASE_NODES = (
    NodeGene(1, "input_x", "identity"),
    NodeGene(2, "input_y", "identity"),
    NodeGene(3, "input_d", "identity"),
    NodeGene(4, "input_bias", "identity"),
    NodeGene(5, "output_intensity", "identity"),
)


def gray_genome(extra_nodes=(), connections=()):
    """Hand-built gray genome on the standard input/output scaffold."""
    return Genome(id=None, palette="gray",
                  nodes=GRAY_BASE_NODES + tuple(extra_nodes),
                  connections=tuple(connections))


def single_link_genome(source: int = 1, weight: float = 1.0):
    return gray_genome(connections=[ConnectionGene(8, source, 5, weight)])


def two_cluster_genome():
    """Deliberately modular genome: two dense hidden clusters, one fed by x
    and one by y, on top of the seed scaffold."""
    nodes = list(GRAY_BASE_NODES)
    for i in (10, 11, 12, 13, 20, 21, 22, 23):
        nodes.append(NodeGene(i, "hidden", "sigmoid"))
    conns = []
    counter = [30]

    def add(s, t, w=1.0):
        conns.append(ConnectionGene(counter[0], s, t, w))
        counter[0] += 1

    for inp in (1, 2, 3, 4):
        add(inp, 5)
    for feed, cluster in ((1, (10, 11, 12, 13)), (2, (20, 21, 22, 23))):
        add(feed, cluster[0])
        for a in cluster:
            for b in cluster:
                if a < b:
                    add(a, b)
        add(cluster[-1], 5)
    return Genome(id=None, palette="gray", nodes=tuple(nodes), connections=tuple(conns))


# --- random structures -------------------------------------------------------

def random_digraph(rng: np.random.Generator, n: int, p: float = 0.3) -> cs.DirectedGraph:
    """Erdos-Renyi style digraph, re-drawn until it has at least one edge."""
    while True:
        edges = [(u, v) for u in range(n) for v in range(n)
                 if u != v and rng.random() < p]
        if edges:
            return cs.DirectedGraph.from_edges(n, edges)


def random_dag(rng: np.random.Generator, n: int, p: float = 0.3) -> cs.DirectedGraph:
    """Random DAG: forward edges over a shuffled node order."""
    order = rng.permutation(n)
    edges = [(int(order[i]), int(order[j]))
             for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return cs.DirectedGraph.from_edges(n, edges)


def grow(genome, registry, rng, events: int, p_node: float = 0.5):
    """Apply `events` random structural mutations (best effort on saturation)."""
    out = genome
    for _ in range(events):
        if rng.random() < p_node:
            out, _ = cs.mutate_add_node(out, registry, rng)
        else:
            out, _ = cs.mutate_add_connection(out, registry, rng)
    return out


def related_pair(registry, rng, base_events=4, branch_events=4):
    """Two genomes sharing an evolved common ancestor, for crossover tests."""
    base = cs.seed_genome("gray", registry, rng)
    base = grow(base, registry, rng, base_events)
    a = grow(base, registry, rng, branch_events)
    b = grow(base, registry, rng, branch_events)
    cfg = cs.MutationConfig(p_weight=0.5)
    return cs.mutate_weights(a, cfg, rng), cs.mutate_weights(b, cfg, rng)


# --- oracles -----------------------------------------------------------------

def nx_reachable_counts(graph: cs.DirectedGraph) -> np.ndarray:
    g = nx.DiGraph()
    g.add_nodes_from(range(graph.n))
    g.add_edges_from(graph.edges)
    return np.array([len(nx.descendants(g, node)) for node in range(graph.n)])


def grc_oracle(graph: cs.DirectedGraph) -> float:
    counts = nx_reachable_counts(graph.reversed())
    local = counts / (graph.n - 1)
    return float((local.max() - local).sum() / (graph.n - 1))


def wilcoxon_enumeration_p(values) -> float:
    """Literal 2^n enumeration of P(min(W+, W-) <= observed)."""
    nz = np.asarray([v for v in values if v != 0.0], dtype=float)
    ranks = sps.rankdata(np.abs(nz))
    w_obs = min(ranks[nz > 0].sum(), ranks[nz < 0].sum())
    hits = 0
    for signs in itertools.product((1.0, -1.0), repeat=nz.size):
        signs = np.asarray(signs)
        w_plus = ranks[signs > 0].sum()
        w_minus = ranks[signs < 0].sum()
        if min(w_plus, w_minus) <= w_obs + 1e-12:
            hits += 1
    return hits / 2.0 ** nz.size


def _orphans_under(child: Genome, kept: set[int]) -> bool:
    """True if some hidden node loses every input-to-output path when only the
    `kept` connection innovations exist (flags ignored; paths count all genes)."""
    g = nx.DiGraph()
    g.add_nodes_from(n.innovation for n in child.nodes)
    for c in child.connections:
        if c.innovation in kept:
            g.add_edge(c.source, c.target)
    inputs = [n.innovation for n in child.inputs()]
    outputs = [n.innovation for n in child.outputs()]
    for h in child.hidden():
        from_input = any(nx.has_path(g, i, h.innovation) for i in inputs)
        to_output = any(nx.has_path(g, h.innovation, o) for o in outputs)
        if not (from_input and to_output):
            return True
    return False


def verify_crossover_law(a: Genome, b: Genome, child: Genome) -> None:
    """Assert the crossover contract against an independent replay.

    Child nodes must be the union of parent nodes. The normal path drops
    cycle-conflicted enabled connections in ascending innovation order; when
    that replay strands a hidden node, the fallback keeps the whole union and
    clears the conflicted flags instead. Either way, every kept weight and
    every non-demoted flag must come from a parent copy, enabled admissions
    must never close a cycle, and the child must validate.
    """
    parent_nodes = {n.innovation for n in a.nodes} | {n.innovation for n in b.nodes}
    assert {n.innovation for n in child.nodes} == parent_nodes

    union: dict[int, list[ConnectionGene]] = {}
    for parent in (a, b):
        for c in parent.connections:
            union.setdefault(c.innovation, []).append(c)

    # independent replay of the skip pass, driven by the child's realized genes
    g = nx.DiGraph()
    g.add_nodes_from(parent_nodes)
    skip_survivors = set()
    demoted = []
    for innovation in sorted(union):
        copies = union[innovation]
        source, target = copies[0].source, copies[0].target
        actual = child.connection_by_innovation.get(innovation)
        if actual is None:
            assert any(c.enabled for c in copies), \
                f"connection {innovation} dropped though only disabled copies exist"
            assert nx.has_path(g, target, source), \
                f"connection {innovation} skipped without a cycle to force it"
            continue
        skip_survivors.add(innovation)
        matches_parent = any(actual == c for c in copies)
        if actual.enabled:
            assert matches_parent, f"connection {innovation} matches neither parent"
            assert not nx.has_path(g, target, source), \
                f"connection {innovation} admitted despite closing a cycle"
            g.add_edge(source, target)
        elif not matches_parent:
            # demotion: same gene as an enabled parent copy, flag cleared
            assert all(c.enabled for c in copies)
            assert actual.weight in {c.weight for c in copies}
            assert nx.has_path(g, target, source), \
                f"connection {innovation} demoted without a cycle to force it"
            demoted.append(innovation)

    if demoted:
        # the fallback keeps the full union and must have been orphan-forced
        assert skip_survivors == set(union)
        assert _orphans_under(child, set(union) - set(demoted))
    assert cs.validate(child) == []
