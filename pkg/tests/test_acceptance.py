"""Acceptance suite: one test per criterion, results printed at session end.

Every criterion is checked at its stated tolerance against an independent
oracle (exhaustive partition search, literal 2^n sign enumeration, networkx
reachability, direct Monte-Carlo) and the whole suite runs with no UI built.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy import stats as sps

import cppnstudio as cs
from cppnstudio.nullmodels import structure_counts
from cppnstudio.store import Store

from conftest import ACCEPTANCE_RESULTS
from helpers import (grc_oracle, grow, random_dag, random_digraph, related_pair,
                     verify_crossover_law, wilcoxon_enumeration_p)


@contextmanager
def criterion(number: int, name: str):
    try:
        yield
    except BaseException:
        ACCEPTANCE_RESULTS.append((number, name, "FAIL"))
        raise
    ACCEPTANCE_RESULTS.append((number, name, "PASS"))


def test_criterion_1_modularity_oracle():
    with criterion(1, "modularity oracle"):
        started = time.perf_counter()
        rng = np.random.default_rng(101)
        for _ in range(100):
            graph = random_digraph(rng, int(rng.integers(2, 9)),
                                   p=float(rng.uniform(0.15, 0.6)))
            _, q_spec = cs.optimal_partition(graph)
            _, q_brute = cs.brute_force_partition(graph)
            assert q_spec <= q_brute + 1e-12
            assert q_spec >= q_brute - 0.05

        triangles = cs.DirectedGraph.from_edges(
            6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
        _, q = cs.optimal_partition(triangles)
        assert abs(q - 0.5) <= 1e-9
        assert time.perf_counter() - started < 60.0


def test_criterion_2_q_identities():
    with criterion(2, "Q identities"):
        rng = np.random.default_rng(202)
        for _ in range(1000):
            graph = random_digraph(rng, int(rng.integers(2, 12)),
                                   p=float(rng.uniform(0.1, 0.7)))
            assert abs(cs.modularity_q(graph, [0] * graph.n)) <= 1e-12
            random_partition = rng.integers(0, 4, size=graph.n).tolist()
            q = cs.modularity_q(graph, random_partition)
            assert -1.0 <= q <= 1.0


def test_criterion_3_hierarchy_oracle():
    with criterion(3, "hierarchy oracle"):
        for n in range(2, 11):
            chain = cs.DirectedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
            assert abs(cs.grc_hierarchy(chain) - n / (2 * (n - 1))) <= 1e-12
        rng = np.random.default_rng(303)
        for _ in range(1000):
            graph = random_dag(rng, int(rng.integers(2, 12)),
                               p=float(rng.uniform(0.1, 0.7)))
            assert cs.grc_hierarchy(graph) == pytest.approx(grc_oracle(graph), abs=1e-12)


def test_criterion_4_null_model_contract():
    with criterion(4, "null-model contract"):
        registry = cs.InnovationRegistry()
        rng = np.random.default_rng(404)
        seed_genome = cs.seed_genome("gray", registry, rng)
        for _ in range(200):
            parent = grow(seed_genome, registry, rng, int(rng.integers(0, 4)))
            child = grow(parent, registry, rng, int(rng.integers(0, 6)))
            batch = cs.null_models(child, parent, k=2, rng=rng)
            for model in batch.models:
                assert structure_counts(model) == structure_counts(child)
                assert cs.validate(model) == []

        parent = seed_genome
        child = grow(parent, registry, np.random.default_rng(5), 6)
        residuals = []
        for trial in range(200):
            batch = cs.null_models(child, parent, k=11,
                                   rng=np.random.default_rng([404, trial]))
            probe, siblings = batch.models[0], batch.models[1:]
            sibling_batch = cs.NullModelBatch(None, None, siblings, batch.config)
            residuals.append(cs.residual("modularity", probe, sibling_batch).residual)
        assert abs(float(np.mean(residuals))) <= 0.01


def test_criterion_5_mutation_distribution():
    with criterion(5, "weight replacement distribution"):
        rng = np.random.default_rng(505)
        draws = np.array([cs.weight_replacement_draw(0.7, rng) for _ in range(100_000)])
        assert abs(draws.mean() - 0.7) <= 0.02
        assert abs(draws.var() - 1.0) <= 0.05
        assert sps.kstest(draws, "norm", args=(0.7, 1.0)).pvalue > 0.01


def test_criterion_6_crossover_law():
    with criterion(6, "crossover law"):
        registry = cs.InnovationRegistry()
        rng = np.random.default_rng(606)
        for _ in range(1000):
            a, b = related_pair(registry, rng,
                                base_events=int(rng.integers(1, 5)),
                                branch_events=int(rng.integers(1, 6)))
            child = cs.crossover(a, b, rng)
            verify_crossover_law(a, b, child)

        genome = grow(cs.seed_genome("color", registry, rng), registry, rng, 6)
        clone = cs.crossover(genome, genome, rng)
        assert clone.structural_key() == genome.structural_key()


def test_criterion_7_sweep_protocol():
    with criterion(7, "sweep protocol"):
        registry = cs.InnovationRegistry()
        rng = np.random.default_rng(707)
        genome = grow(cs.seed_genome("gray", registry, rng), registry, rng, 4)
        key_before = genome.structural_key()
        conn = genome.enabled_connections[0].innovation

        default = cs.sweep(genome, cs.SweepSpec(connection=conn, image_size=(32, 32)))
        assert len(default.frames) == 61
        assert [w for w, _ in default.frames][:3] == [-3.0, -2.9, -2.8]
        assert default.baseline_image == cs.render(genome, 32, 32)
        assert cs.to_png(default.baseline_image) == cs.to_png(cs.render(genome, 32, 32))

        fine = cs.sweep(genome, cs.SweepSpec(connection=conn, step=0.01,
                                             image_size=(8, 8)))
        assert len(fine.frames) == 601

        assert genome.structural_key() == key_before
        assert cs.validate(genome) == []


def test_criterion_8_statistics_oracles():
    with criterion(8, "statistics oracles"):
        rng = np.random.default_rng(808)
        for n in range(1, 13):
            for _ in range(8):
                values = np.round(rng.normal(0.2, 1.0, size=n), 1)
                values = values[values != 0.0]
                if values.size == 0:
                    continue
                report = cs.wilcoxon_signed_rank(values)
                assert report.extras["method"] == "exact"
                assert report.p_value == pytest.approx(
                    wilcoxon_enumeration_p(values), abs=1e-12)

        x = np.linspace(-3.0, 4.0, 57)
        assert abs(cs.pearson(x, 2.0 * x + 1.0).statistic - 1.0) <= 1e-12

        covered = 0
        trials = 200
        for trial in range(trials):
            sample = np.random.default_rng([808, trial]).standard_normal(100)
            ci = cs.bootstrap_ci(sample, "mean", resamples=5000, level=0.95,
                                 rng=np.random.default_rng([809, trial]))
            covered += ci.lo <= 0.0 <= ci.hi
        assert 0.90 * trials <= covered <= 0.99 * trials


def _drift_genome(registry, rng, max_events=6):
    seed_genome = cs.seed_genome("gray", registry, rng)
    return seed_genome, grow(seed_genome, registry, rng, int(rng.integers(1, max_events + 1)))


def _null_process_genome(parent, registry, rng):
    """Selection-free growth: fixed mutation counts applied in a uniformly
    shuffled order, retrying the whole genome on saturation, exactly like the
    null-model recipe (so the null hypothesis holds by construction)."""
    d_nodes = int(rng.integers(1, 5))
    d_conns = int(rng.integers(0, 4))
    while True:
        moves = ["node"] * d_nodes + ["conn"] * d_conns
        rng.shuffle(moves)
        genome = parent
        for move in moves:
            if move == "node":
                genome, changed = cs.mutate_add_node(genome, registry, rng)
            else:
                genome, changed = cs.mutate_add_connection(genome, registry, rng)
            if not changed:
                break
        else:
            return genome


def test_criterion_9_planted_structure_detection():
    with criterion(9, "planted-structure detection"):
        registry = cs.InnovationRegistry()
        rng = np.random.default_rng(909)
        q_residuals, h_residuals = [], []
        for _ in range(200):
            parent, genome = _drift_genome(registry, rng, max_events=8)
            batch = cs.null_models(genome, parent, k=10, rng=rng)
            q_residuals.append(cs.residual("modularity", genome, batch).residual)
            h_residuals.append(cs.residual("hierarchy", genome, batch).residual)
        q_residuals = np.array(q_residuals)
        noise = rng.normal(0.0, 0.5 * np.std(100.0 * q_residuals), size=200)
        fitnesses = np.maximum(0, np.rint(100.0 * (q_residuals - q_residuals.min())
                                          + noise)).astype(int)
        corpus = [cs.CorpusRecord(genome_id=str(i), parent_id=None,
                                  fitness=int(fitnesses[i]),
                                  q_residual=float(q_residuals[i]),
                                  h_residual=float(h_residuals[i]))
                  for i in range(200)]
        report = cs.corpus_report(corpus, resamples=1000,
                                  rng=np.random.default_rng(910))
        pear = report["modularity"]["pearson_fitness"]
        assert pear["statistic"] > 0.5
        assert pear["p_value"] < 0.01

        calm = 0
        for rep in range(20):
            rep_rng = np.random.default_rng([911, rep])
            rep_registry = cs.InnovationRegistry()
            parent = cs.seed_genome("gray", rep_registry, rep_rng)
            residuals = []
            for _ in range(40):
                genome = _null_process_genome(parent, rep_registry, rep_rng)
                batch = cs.null_models(genome, parent, k=10, rng=rep_rng)
                residuals.append(cs.residual("modularity", genome, batch).residual)
            p = cs.wilcoxon_signed_rank(residuals).p_value
            calm += p > 0.05
        assert calm >= 16  # >= 80% of 20 repetitions


def test_criterion_10_determinism_and_persistence(tmp_path):
    with criterion(10, "determinism and persistence"):
        def population_docs(seed):
            registry = cs.InnovationRegistry()
            rng = np.random.default_rng(seed)
            pop = cs.scratch_population("gray", 8, registry, rng)
            session = cs.Session("s", pop, None, 0, registry, seed)
            cfg = cs.MutationConfig()
            for _ in range(3):
                session = cs.next_generation(session, [0, 2], cfg, rng)
            return [cs.canonical_json(cs.genome_to_document(g))
                    for g in session.population]

        assert population_docs(77) == population_docs(77)
        assert population_docs(77) != population_docs(78)

        registry = cs.InnovationRegistry()
        rng = np.random.default_rng(10)
        genome = grow(cs.seed_genome("gray", registry, rng), registry, rng, 5)
        conn = genome.enabled_connections[0].innovation
        sweep_a = cs.sweep(genome, cs.SweepSpec(connection=conn, image_size=(24, 24)))
        sweep_b = cs.sweep(genome, cs.SweepSpec(connection=conn, image_size=(24, 24)))
        assert all(cs.to_png(fa) == cs.to_png(fb)
                   for (_, fa), (_, fb) in zip(sweep_a.frames, sweep_b.frames))

        parent = cs.seed_genome("gray", cs.InnovationRegistry(), np.random.default_rng(1))
        child = grow(parent, cs.InnovationRegistry(next_id=100), np.random.default_rng(2), 4)
        nulls_a = cs.null_models(child, parent, k=6, rng=np.random.default_rng(55))
        nulls_b = cs.null_models(child, parent, k=6, rng=np.random.default_rng(55))
        assert [cs.canonical_json(cs.genome_to_document(m)) for m in nulls_a.models] == \
               [cs.canonical_json(cs.genome_to_document(m)) for m in nulls_b.models]

        docs = []
        lineage_registry = cs.InnovationRegistry()
        lineage_rng = np.random.default_rng(31)
        g = cs.seed_genome("gray", lineage_registry, lineage_rng)
        parent_id = None
        for i in range(6):
            g = grow(g, lineage_registry, lineage_rng, 2)
            gid = str(i + 1)
            docs.append(cs.genome_to_document(g.with_id(gid), parent_id=parent_id))
            parent_id = gid

        def report_json():
            records, skipped = cs.build_corpus(docs, nulls=5, seed=99)
            assert skipped == []
            report = cs.corpus_report(records, resamples=500,
                                      rng=np.random.default_rng(98))
            return cs.canonical_json(report)

        assert report_json() == report_json()

        clock = lambda: "2026-01-01T00:00:00.000000Z"
        store_path = tmp_path / "store"
        store = Store(store_path, clock=clock)
        cfg = cs.MutationConfig()
        previous = None
        for i, doc in enumerate(docs):
            genome = cs.genome_from_document(doc)
            record = store.add_record(genome, previous, f"img {i}", "suite", cfg)
            previous = record.genome_id
        log = (store_path / "records.ndjson").read_bytes()
        reopened = Store(store_path, clock=clock)
        assert "".join(cs.canonical_json(r.to_document()) + "\n"
                       for r in reopened.records).encode() == log
        assert reopened.registry.to_state() == store.registry.to_state()
