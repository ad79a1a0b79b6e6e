"""Growth-matched null models and residual structure scores.

A genome's raw modularity or hierarchy says little by itself: the growth
operators and the fixed input/output scaffold impose structure of their own,
and related genomes are not independent samples. Each genome is therefore
compared against null models grown from its parent by the same add-node and
add-connection mutations, shuffled into a random order, until node and
enabled-connection counts match the genome exactly. The residual score is the
raw metric minus the null-model mean; positive means more structured than the
growth process alone explains.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, Saturated
from .evolution import (InnovationRegistry, minimal_seed_topology,
                        mutate_add_connection, mutate_add_node)
from .genome import Genome
from .graphs import genome_to_graph, grc_hierarchy, optimal_partition

DEFAULT_NULL_COUNT = 10
_MODEL_RETRIES = 100

METRICS = ("modularity", "hierarchy")


def structure_counts(genome: Genome) -> tuple[int, int]:
    """(node count, enabled-connection count) of a genome."""
    return len(genome.nodes), len(genome.enabled_connections)


@dataclass(frozen=True)
class NullModelBatch:
    source_genome_id: str | None
    parent_genome_id: str | None
    models: tuple[Genome, ...]
    config: dict


@dataclass(frozen=True)
class ResidualScore:
    metric: str
    raw: float
    null_mean: float
    residual: float


def _scratch_registry(source: Genome, parent: Genome) -> InnovationRegistry:
    """Registry for null construction: fresh ids start past every innovation
    already present, so models stay internally consistent without touching a
    shared registry."""
    high = 0
    for g in (source, parent):
        for n in g.nodes:
            high = max(high, n.innovation)
        for c in g.connections:
            high = max(high, c.innovation)
    return InnovationRegistry(next_id=high + 1)


def _grow_model(parent: Genome, n_node: int, n_conn: int,
                registry: InnovationRegistry, rng: np.random.Generator) -> Genome | None:
    moves = ["node"] * n_node + ["conn"] * n_conn
    rng.shuffle(moves)
    model = parent
    for move in moves:
        if move == "node":
            model, changed = mutate_add_node(model, registry, rng)
        else:
            model, changed = mutate_add_connection(model, registry, rng)
        if not changed:
            return None  # saturated; caller retries the whole model
    return model


def null_models(source: Genome, parent: Genome, k: int = DEFAULT_NULL_COUNT,
                registry: InnovationRegistry | None = None,
                rng: np.random.Generator | None = None) -> NullModelBatch:
    """Grow k null models from the parent, matching the source's node and
    enabled-connection counts exactly.

    The growth recipe is the only free choice: the required numbers of
    add-node and add-connection mutations are fixed by the count differences
    (weight mutations never change structure and are not applied); their order
    is shuffled uniformly per model.
    """
    rng = np.random.default_rng() if rng is None else rng
    src_nodes, src_conns = structure_counts(source)
    par_nodes, par_conns = structure_counts(parent)
    d_nodes = src_nodes - par_nodes
    d_conns = src_conns - par_conns
    if d_nodes < 0 or d_conns < d_nodes:
        raise Infeasible(
            f"cannot grow from parent ({par_nodes} nodes, {par_conns} conns) to "
            f"source ({src_nodes} nodes, {src_conns} conns) with add-only mutations")

    base_registry = registry if registry is not None else _scratch_registry(source, parent)
    models = []
    for _ in range(k):
        model = None
        for _ in range(_MODEL_RETRIES):
            model = _grow_model(parent, d_nodes, d_conns - d_nodes,
                                base_registry.clone() if registry is None else registry,
                                rng)
            if model is not None:
                break
        if model is None:
            raise Saturated(f"no legal growth sequence found in {_MODEL_RETRIES} tries")
        models.append(model)
    return NullModelBatch(
        source_genome_id=source.id, parent_genome_id=parent.id, models=tuple(models),
        config={"k": k, "add_node": d_nodes, "add_connection": d_conns - d_nodes})


def raw_metric(metric: str, genome: Genome) -> float:
    graph = genome_to_graph(genome)
    if metric == "modularity":
        return optimal_partition(graph)[1]
    if metric == "hierarchy":
        return grc_hierarchy(graph)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def residual(metric: str, source: Genome, batch: NullModelBatch) -> ResidualScore:
    """Raw metric of the source minus the arithmetic mean over the batch."""
    raw = raw_metric(metric, source)
    null_mean = float(np.mean([raw_metric(metric, m) for m in batch.models]))
    return ResidualScore(metric=metric, raw=raw, null_mean=null_mean,
                         residual=raw - null_mean)


def resolve_parent(genome: Genome, parent: Genome | None,
                   registry: InnovationRegistry | None = None) -> Genome:
    """The comparison parent: the most recent published ancestor when known,
    otherwise the minimal seed topology of the same palette."""
    if parent is not None:
        return parent
    reg = registry if registry is not None else InnovationRegistry()
    return minimal_seed_topology(genome.palette, reg)


def residual_scores(genome: Genome, parent: Genome | None = None,
                    nulls: int = DEFAULT_NULL_COUNT,
                    seed: int | None = None,
                    registry: InnovationRegistry | None = None) -> dict:
    """Convenience wrapper: both residual scores plus the optimal partition,
    in the JSON layout used by the CLI and the HTTP metrics endpoint."""
    rng = np.random.default_rng(seed)
    parent = resolve_parent(genome, parent, registry)
    batch = null_models(genome, parent, k=nulls, registry=registry, rng=rng)
    q = residual("modularity", genome, batch)
    h = residual("hierarchy", genome, batch)
    partition, _ = optimal_partition(genome_to_graph(genome))
    return {
        "q_raw": q.raw, "q_null_mean": q.null_mean, "q_residual": q.residual,
        "h_raw": h.raw, "h_null_mean": h.null_mean, "h_residual": h.residual,
        "partition": list(partition),
        "nodes": [n.innovation for n in genome.nodes],
        "nulls": nulls,
    }
