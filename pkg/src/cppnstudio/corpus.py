"""Corpus-level analysis: descendant-count fitness and residual statistics.

A corpus is a set of published genomes with parent links. Fitness of a genome
is the number of corpus members published directly from it; unpublished
intermediate generations leave no record, so the count is the direct-
descendant count by construction. The report aggregates residual modularity
and hierarchy into medians with bootstrap intervals, signed-rank tests
against zero, correlations against fitness, and binned fitness bars with a
linear fit.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import AllZeros, DegenerateSample, EmptyCorpus, Infeasible, UnknownGenome
from .genome import Genome, genome_from_document
from .nullmodels import DEFAULT_NULL_COUNT, null_models, residual, resolve_parent
from .stats import bootstrap_ci, pearson, wilcoxon_signed_rank

DEFAULT_BINS = 20


@dataclass(frozen=True)
class CorpusRecord:
    genome_id: str
    parent_id: Optional[str]
    fitness: int
    q_residual: float
    h_residual: float


def fitness(corpus: Sequence[CorpusRecord], genome_id: str) -> int:
    """Number of corpus records published directly from genome_id."""
    ids = {r.genome_id for r in corpus}
    if genome_id not in ids:
        raise UnknownGenome(f"no corpus record with id {genome_id!r}")
    return sum(1 for r in corpus if r.parent_id == genome_id)


def descendant_counts(documents: Iterable[dict]) -> dict[str, int]:
    docs = list(documents)
    counts = {str(d["id"]): 0 for d in docs}
    for d in docs:
        parent = d.get("parent_id")
        if parent is not None and str(parent) in counts:
            counts[str(parent)] += 1
    return counts


def build_corpus(documents: Iterable[dict], nulls: int = DEFAULT_NULL_COUNT,
                 seed: Optional[int] = None) -> tuple[list[CorpusRecord], list[str]]:
    """Compute residuals and fitness for a set of genome documents.

    Parents are looked up by parent_id within the corpus; genomes whose parent
    is absent are compared against the minimal seed topology. Genomes whose
    counts cannot be reached from their parent by add-only growth (possible
    when crossover disabled genes) are skipped and reported in the second
    return value.
    """
    docs = sorted((dict(d) for d in documents), key=lambda d: str(d["id"]))
    by_id = {str(d["id"]): d for d in docs}
    counts = descendant_counts(docs)

    records: list[CorpusRecord] = []
    skipped: list[str] = []
    for index, doc in enumerate(docs):
        genome = genome_from_document(doc)
        parent_doc = by_id.get(str(doc.get("parent_id"))) if doc.get("parent_id") else None
        parent: Optional[Genome] = genome_from_document(parent_doc) if parent_doc else None
        rng = np.random.default_rng(None if seed is None else [seed, index])
        try:
            batch = null_models(genome, resolve_parent(genome, parent), k=nulls, rng=rng)
        except Infeasible:
            skipped.append(str(doc["id"]))
            continue
        q = residual("modularity", genome, batch)
        h = residual("hierarchy", genome, batch)
        records.append(CorpusRecord(
            genome_id=str(doc["id"]), parent_id=(str(doc["parent_id"])
                                                 if doc.get("parent_id") is not None else None),
            fitness=counts[str(doc["id"])],
            q_residual=q.residual, h_residual=h.residual))
    return records, skipped


def _bin_table(residuals: np.ndarray, fitnesses: np.ndarray, bins: int,
               resamples: int, level: float, rng: np.random.Generator) -> list[dict]:
    lo, hi = float(residuals.min()), float(residuals.max())
    if hi == lo:
        edges = [lo, hi]
        bins = 1
    else:
        edges = np.linspace(lo, hi, bins + 1).tolist()
    width = (hi - lo) / bins if hi > lo else 0.0
    table = []
    for b in range(bins):
        if width > 0:
            mask = (residuals >= edges[b]) & (residuals < edges[b + 1])
            if b == bins - 1:
                mask |= residuals == hi
        else:
            mask = np.ones_like(residuals, dtype=bool)
        members = fitnesses[mask]
        row = {"lo": edges[b], "hi": edges[b + 1], "count": int(mask.sum()),
               "mean_fitness": float(members.mean()) if members.size else None,
               "ci_lo": None, "ci_hi": None}
        if members.size >= 2:
            ci = bootstrap_ci(members, "mean", resamples=resamples, level=level, rng=rng)
            row["ci_lo"], row["ci_hi"] = ci.lo, ci.hi
        table.append(row)
    return table


def _metric_section(residuals: np.ndarray, fitnesses: np.ndarray, bins: int,
                    resamples: int, level: float, rng: np.random.Generator) -> dict:
    section: dict = {"median_residual": float(np.median(residuals))}
    ci = bootstrap_ci(residuals, "median", resamples=resamples, level=level, rng=rng)
    section["median_ci"] = [ci.lo, ci.hi]
    try:
        section["wilcoxon"] = wilcoxon_signed_rank(residuals).to_dict()
    except AllZeros:
        section["wilcoxon"] = {"error": "AllZeros"}
    try:
        section["pearson_fitness"] = pearson(residuals, fitnesses).to_dict()
    except DegenerateSample:
        section["pearson_fitness"] = {"error": "DegenerateSample"}
    slope, intercept = np.polyfit(residuals, fitnesses, 1) \
        if residuals.min() < residuals.max() else (0.0, float(fitnesses.mean()))
    section["linear_fit"] = {"slope": float(slope), "intercept": float(intercept)}
    section["bins"] = _bin_table(residuals, fitnesses, bins, resamples, level, rng)
    return section


def corpus_report(corpus: Sequence[CorpusRecord], bins: int = DEFAULT_BINS,
                  resamples: int = 5000, level: float = 0.95,
                  rng: np.random.Generator | None = None) -> dict:
    """Aggregate statistics of a corpus with residuals already computed."""
    if len(corpus) == 0:
        raise EmptyCorpus("corpus has no records")
    rng = np.random.default_rng() if rng is None else rng
    fitnesses = np.array([r.fitness for r in corpus], dtype=float)
    report = {"n": len(corpus)}
    for metric, attr in (("modularity", "q_residual"), ("hierarchy", "h_residual")):
        residuals = np.array([getattr(r, attr) for r in corpus], dtype=float)
        report[metric] = _metric_section(residuals, fitnesses, bins,
                                         resamples, level, rng)
    return report


def write_bins_csv(report: dict, path) -> None:
    """Flatten the per-metric bin tables into one CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "bin_lo", "bin_hi", "count",
                         "mean_fitness", "ci_lo", "ci_hi"])
        for metric in ("modularity", "hierarchy"):
            for row in report[metric]["bins"]:
                writer.writerow([metric, row["lo"], row["hi"], row["count"],
                                 row["mean_fitness"], row["ci_lo"], row["ci_hi"]])
