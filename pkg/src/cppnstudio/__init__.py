"""cppnstudio: breed CPPN images interactively and analyze what evolved.

The package splits into:

- genome / render: the CPPN model, validation, evaluation, and PNG rendering
- evolution: NEAT-style mutation, crossover, seeds, and session stepping
- sweep / labels: single-weight sweeps, impact maps, and human annotation
- graphs / nullmodels: modularity and hierarchy metrics with growth-matched
  null models and residual scores
- stats / corpus: signed-rank and correlation tests, bootstrap intervals,
  and corpus-level reports
- store / service / cli: append-only publish store, the HTTP API, and the
  command-line umbrella
"""

__version__ = "0.1.0"

from .activations import ACTIVATIONS, apply_activation
from .corpus import CorpusRecord, build_corpus, corpus_report, fitness, write_bins_csv
from .errors import (AllZeros, DegenerateSample, DisabledConnection, EmptyCorpus,
                     EmptyGraph, EmptySelection, EmptyTitle, Infeasible,
                     InvalidGenome, InvalidSlot, PaletteMismatch, Saturated,
                     StoreCorrupt, StudioError, TooLarge, TooSmall,
                     UnknownConnection, UnknownGenome, UnknownImage, UnknownNode)
from .evolution import (InnovationRegistry, MutationConfig, Session, branch,
                        crossover, minimal_seed_topology, mutate,
                        mutate_add_connection, mutate_add_node, mutate_weights,
                        next_generation, scratch_population, seed_genome,
                        weight_replacement_draw)
from .genome import (ConnectionGene, Genome, NodeGene, canonical_json,
                     genome_from_document, genome_to_document, load_genome,
                     require_valid, save_genome, toposort, validate)
from .graphs import (DirectedGraph, brute_force_partition, genome_node_order,
                     genome_to_graph, grc_hierarchy, modularity_q,
                     normalize_partition, optimal_partition, reachable_counts)
from .labels import (AnnotatedExport, Label, LabelStore, annotate_export,
                     assign_label, decomposition, load_labels, node_label,
                     save_labels)
from .nullmodels import (NullModelBatch, ResidualScore, null_models, raw_metric,
                         residual, residual_scores, resolve_parent,
                         structure_counts)
from .render import (ImageBuffer, evaluate, evaluate_grid, lattice, render,
                     render_node, save_png, to_png)
from .stats import BootstrapCI, TestReport, bootstrap_ci, pearson, wilcoxon_signed_rank
from .store import LineageChain, PublishRecord, Store
from .sweep import ImpactMap, SweepResult, SweepSpec, impact_map, sweep, weight_grid
