import numpy as np
import pytest
from scipy import stats as sps

import cppnstudio as cs
from cppnstudio.genome import ConnectionGene, NodeGene, Genome

from helpers import (gray_genome, grow, related_pair, single_link_genome,
                     verify_crossover_law)


def structure(genome):
    return genome.structural_key()


# --- weight mutation ---------------------------------------------------------

def test_zero_probability_leaves_genome_identical(gray_seed, rng):
    out = cs.mutate_weights(gray_seed, cs.MutationConfig(p_weight=0.0), rng)
    assert structure(out) == structure(gray_seed)


def test_tiny_sigma_keeps_weights(gray_seed, rng):
    cfg = cs.MutationConfig(p_weight=1.0, weight_sigma=1e-12)
    out = cs.mutate_weights(gray_seed, cfg, rng)
    old = [c.weight for c in gray_seed.connections]
    new = [c.weight for c in out.connections]
    assert np.allclose(old, new, atol=1e-9)


def test_replacement_draw_distribution(rng):
    draws = np.array([cs.weight_replacement_draw(0.7, rng) for _ in range(20_000)])
    assert abs(draws.mean() - 0.7) < 0.05
    assert abs(draws.var() - 1.0) < 0.1
    assert sps.kstest(draws, "norm", args=(0.7, 1.0)).pvalue > 0.01


def test_mutated_weights_stay_in_bounds(gray_seed, rng):
    out = gray_seed
    for _ in range(50):
        out = cs.mutate_weights(out, cs.MutationConfig(p_weight=1.0), rng)
        assert all(-3.0 <= c.weight <= 3.0 for c in out.connections)


# --- add connection ----------------------------------------------------------

def test_fully_connected_genome_saturates(gray_seed, registry, rng):
    out, changed = cs.mutate_add_connection(gray_seed, registry, rng)
    assert not changed
    assert structure(out) == structure(gray_seed)


def test_single_legal_pair_is_forced(registry, rng):
    genome = gray_genome(connections=[ConnectionGene(8, 1, 5, 1.0),
                                      ConnectionGene(9, 2, 5, 1.0),
                                      ConnectionGene(10, 3, 5, 1.0)])
    out, changed = cs.mutate_add_connection(genome, registry, rng)
    assert changed
    assert (4, 5) in out.connection_pairs
    assert len(out.connections) == 4


def test_add_connection_never_duplicates_pairs(registry, rng):
    genome = grow(cs.seed_genome("gray", registry, rng), registry, rng, 6)
    for _ in range(60):
        genome, _ = cs.mutate_add_connection(genome, registry, rng)
        pairs = [(c.source, c.target) for c in genome.connections]
        assert len(pairs) == len(set(pairs))
        assert cs.validate(genome) == []


# --- add node ----------------------------------------------------------------

def test_split_wires_node_with_neat_weights(registry, rng):
    genome = single_link_genome(source=1, weight=0.4)
    out, changed = cs.mutate_add_node(genome, registry, rng)
    assert changed
    assert len(out.nodes) == len(genome.nodes) + 1
    assert len(out.enabled_connections) == len(genome.enabled_connections) + 1
    (node,) = [n for n in out.nodes if n.kind == "hidden"]
    old = out.connection(8)
    assert not old.enabled
    incoming = [c for c in out.enabled_connections if c.target == node.innovation]
    outgoing = [c for c in out.enabled_connections if c.source == node.innovation]
    assert [c.weight for c in incoming] == [1.0]
    assert [c.weight for c in outgoing] == [0.4]
    assert outgoing[0].target == 5


def test_identity_insertion_preserves_image(registry, rng):
    genome = single_link_genome(source=1, weight=0.4)
    out, _ = cs.mutate_add_node(genome, registry, rng)
    (node,) = [n for n in out.nodes if n.kind == "hidden"]
    forced = Genome(id=None, palette="gray",
                    nodes=tuple(NodeGene(n.innovation, n.kind, "identity")
                                if n.innovation == node.innovation else n
                                for n in out.nodes),
                    connections=out.connections)
    assert cs.render(forced, 33, 33) == cs.render(genome, 33, 33)


def test_add_node_without_enabled_connections_is_noop(registry, rng):
    genome = gray_genome(connections=[ConnectionGene(8, 1, 5, 1.0, enabled=False)])
    out, changed = cs.mutate_add_node(genome, registry, rng)
    assert not changed and structure(out) == structure(genome)


def test_same_split_yields_same_ids_across_genomes(registry):
    genome = single_link_genome(source=1, weight=0.4)
    a, _ = cs.mutate_add_node(genome, registry, np.random.default_rng(1))
    b, _ = cs.mutate_add_node(genome, registry, np.random.default_rng(2))
    assert {n.innovation for n in a.nodes} == {n.innovation for n in b.nodes}
    assert {c.innovation for c in a.connections} == {c.innovation for c in b.connections}


def test_split_node_already_present_is_not_resplit(registry, rng):
    genome = single_link_genome(source=1, weight=0.4)
    once, _ = cs.mutate_add_node(genome, registry, rng)
    # re-enable the split connection by hand, as crossover can
    reenabled = Genome(id=None, palette="gray", nodes=once.nodes,
                       connections=tuple(
                           ConnectionGene(c.innovation, c.source, c.target, c.weight, True)
                           if c.innovation == 8 else c for c in once.connections))
    for seed in range(10):
        out, changed = cs.mutate_add_node(reenabled, registry, np.random.default_rng(seed))
        if changed:
            ids = [n.innovation for n in out.nodes]
            assert len(ids) == len(set(ids))
            assert cs.validate(out) == []


# --- crossover ---------------------------------------------------------------

def test_self_crossover_is_identity(registry, rng):
    genome = grow(cs.seed_genome("gray", registry, rng), registry, rng, 5)
    child = cs.crossover(genome, genome, rng)
    assert structure(child) == structure(genome)


def test_matched_weight_comes_from_a_parent(gray_seed, rng):
    conn = gray_seed.connections[0].innovation
    a = gray_seed.with_connection_weight(conn, 0.2)
    b = gray_seed.with_connection_weight(conn, 0.8)
    seen = set()
    for seed in range(40):
        child = cs.crossover(a, b, np.random.default_rng(seed))
        seen.add(child.connection(conn).weight)
    assert seen == {0.2, 0.8}


def test_palette_mismatch_raises(gray_seed, color_seed, rng):
    with pytest.raises(cs.PaletteMismatch):
        cs.crossover(gray_seed, color_seed, rng)


def test_crossover_law_on_related_pairs(registry):
    rng = np.random.default_rng(99)
    for _ in range(60):
        a, b = related_pair(registry, rng)
        child = cs.crossover(a, b, rng)
        verify_crossover_law(a, b, child)


def test_crossover_demotes_instead_of_stranding_a_node(rng):
    # A evolved 12->39 while B split its own (disabled) 39->12 into 39->402->12.
    # Dropping the conflicted 402->12 would strand node 402, so the child must
    # keep the full gene union with the conflicted flag cleared instead.
    base = list(gray_genome().nodes)
    h12, h39, h402 = (NodeGene(12, "hidden", "sigmoid"),
                      NodeGene(39, "hidden", "sine"),
                      NodeGene(402, "hidden", "gaussian"))
    shared = [ConnectionGene(13, 1, 12, 1.0), ConnectionGene(14, 12, 5, 1.0),
              ConnectionGene(40, 2, 39, 1.0), ConnectionGene(41, 39, 5, 1.0)]
    a = Genome(None, "gray", tuple(base + [h12, h39]),
               tuple(shared + [ConnectionGene(259, 12, 39, 0.5)]))
    b = Genome(None, "gray", tuple(base + [h12, h39, h402]),
               tuple(shared + [ConnectionGene(45, 39, 12, 0.7, enabled=False),
                               ConnectionGene(403, 39, 402, 1.0),
                               ConnectionGene(404, 402, 12, 0.7)]))
    assert cs.validate(a) == [] and cs.validate(b) == []

    child = cs.crossover(a, b, rng)
    union = {c.innovation for c in a.connections} | {c.innovation for c in b.connections}
    assert {c.innovation for c in child.connections} == union
    assert not child.connection(404).enabled  # demoted, not dropped
    assert child.connection(259).enabled
    assert cs.validate(child) == []
    verify_crossover_law(a, b, child)


# --- sessions ----------------------------------------------------------------

def test_selecting_everything_keeps_population(registry, rng):
    pop = cs.scratch_population("gray", 6, registry, rng)
    session = cs.Session("s", pop, None, 0, registry, 0)
    out = cs.next_generation(session, list(range(6)), cs.MutationConfig(), rng)
    assert out.generation == 1
    assert [structure(g) for g in out.population] == [structure(g) for g in pop]


def test_single_parent_zero_mutation_clones(registry, rng):
    pop = cs.scratch_population("gray", 5, registry, rng)
    session = cs.Session("s", pop, None, 0, registry, 0)
    cfg = cs.MutationConfig(p_weight=0.0, p_add_connection=0.0, p_add_node=0.0)
    out = cs.next_generation(session, [2], cfg, rng)
    assert all(structure(g) == structure(pop[2]) for g in out.population)


def test_selection_errors(registry, rng):
    pop = cs.scratch_population("gray", 4, registry, rng)
    session = cs.Session("s", pop, None, 0, registry, 0)
    with pytest.raises(cs.EmptySelection):
        cs.next_generation(session, [], cs.MutationConfig(), rng)
    with pytest.raises(IndexError):
        cs.next_generation(session, [4], cs.MutationConfig(), rng)


def test_generations_stay_valid(registry):
    rng = np.random.default_rng(5)
    pop = cs.scratch_population("gray", 8, registry, rng)
    session = cs.Session("s", pop, None, 0, registry, 0)
    cfg = cs.MutationConfig(p_weight=0.5, p_add_connection=0.4, p_add_node=0.4)
    for step in range(12):
        selected = rng.choice(8, size=int(rng.integers(1, 4)), replace=False).tolist()
        session = cs.next_generation(session, selected, cfg, rng)
        assert len(session.population) == 8
        for genome in session.population:
            assert cs.validate(genome) == []


# --- branch ------------------------------------------------------------------

def test_branch_with_zero_config_copies(registry, rng, gray_seed):
    cfg = cs.MutationConfig(p_weight=0.0, p_add_connection=0.0, p_add_node=0.0)
    pop = cs.branch(gray_seed, registry, cfg, rng, 7)
    assert len(pop) == 7
    assert all(structure(g) == structure(gray_seed) for g in pop)


def test_branch_anchors_parent_and_never_deletes(registry, rng, gray_seed):
    parent = grow(gray_seed, registry, rng, 4)
    cfg = cs.MutationConfig(p_weight=0.4, p_add_connection=0.5, p_add_node=0.5)
    pop = cs.branch(parent, registry, cfg, rng, 10)
    assert structure(pop[0]) == structure(parent)
    for child in pop:
        assert len(child.nodes) >= len(parent.nodes)
        assert len(child.connections) >= len(parent.connections)


def test_branch_offspring_render_differently(registry, rng, gray_seed):
    cfg = cs.MutationConfig(p_weight=0.3, p_add_connection=0.0, p_add_node=0.0)
    pop = cs.branch(gray_seed, registry, cfg, rng, 100)
    base = cs.render(gray_seed, 16, 16)
    assert any(cs.render(g, 16, 16) != base for g in pop[1:])


def test_no_deletion_monotonicity_along_chain(registry):
    rng = np.random.default_rng(11)
    cfg = cs.MutationConfig(p_weight=0.5, p_add_connection=0.3, p_add_node=0.3)
    genome = cs.seed_genome("color", registry, rng)
    for _ in range(40):
        child = cs.mutate(genome, cfg, registry, rng)
        assert len(child.nodes) >= len(genome.nodes)
        assert len(child.connections) >= len(genome.connections)
        genome = child


def test_registry_state_round_trip(registry, rng):
    genome = grow(cs.seed_genome("gray", registry, rng), registry, rng, 6)
    state = registry.to_state()
    clone = cs.InnovationRegistry.from_state(state)
    assert clone.to_state() == state
    assert clone.connection_id(1, 5) == registry.connection_id(1, 5)
    assert clone.next_id == registry.next_id
