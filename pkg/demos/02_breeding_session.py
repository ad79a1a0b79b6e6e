"""Scripted breeding session: select, step, publish, branch.

Stands in for a human at the population grid: each generation it keeps the
two images whose renders differ most from the previous favorite (a crude
novelty preference), steps, and finally publishes. The published image then
seeds a branch session, the way someone else would pick it up from the site.

Run:  python demos/02_breeding_session.py   (writes demos/out/session/)
"""

import pathlib

import numpy as np

import cppnstudio as cs
from cppnstudio.store import Store

OUT = pathlib.Path(__file__).parent / "out" / "session"
OUT.mkdir(parents=True, exist_ok=True)

store = Store(OUT / "store")
rng = np.random.default_rng(7)
# livelier structural rates than the interactive defaults, for a short demo
config = cs.MutationConfig(p_weight=0.4, p_add_node=0.3, p_add_connection=0.25)

population = cs.scratch_population("gray", 9, store.registry, rng)
session = cs.Session("demo", population, None, 0, store.registry, 7)


def pixels(genome):
    return np.frombuffer(cs.render(genome, 64, 64).data, dtype=np.uint8).astype(int)


favorite = session.population[0]
for generation in range(5):
    distances = [np.abs(pixels(g) - pixels(favorite)).mean()
                 for g in session.population]
    ranked = sorted(range(len(distances)), key=lambda i: -distances[i])
    selected = ranked[:2]
    print(f"generation {session.generation}: selecting slots {selected} "
          f"(novelty {distances[selected[0]]:.1f})")
    favorite = session.population[selected[0]]
    session = cs.next_generation(session, selected, config, rng)

for slot, genome in enumerate(session.population):
    cs.save_png(cs.render(genome, 128, 128), OUT / f"final_slot_{slot}.png")

biggest = max(session.population, key=lambda g: len(g.connections))
record = store.add_record(biggest, None, "Demo Favorite", "demo-bot", config)
print(f"\npublished image {record.genome_id!r} "
      f"({len(record.genome.nodes)} nodes, {len(record.genome.connections)} connections)")

branch_pop = cs.branch(record.genome, store.registry, config, rng, 9)
branch_session = cs.Session("branch", branch_pop, record.genome_id, 0, store.registry, 8)
branch_session = cs.next_generation(branch_session, [0, 1, 2], config, rng)
child = store.add_record(branch_session.population[3], record.genome_id,
                         "Demo Descendant", "demo-bot", config)
print(f"branched and published {child.genome_id!r} with parent {child.parent_id!r}")

chain = store.lineage(child.genome_id)
print(f"lineage of {child.genome_id!r}: "
      f"{[r.genome_id for r in chain.records]}")
persistent = sum(1 for presence in chain.tracked_connections.values()
                 if all(entry["present"] for entry in presence))
print(f"{persistent} of {len(chain.tracked_connections)} connections "
      f"exist in every generation of the chain")
