"""Render a gallery of CPPN patterns, from bare seeds to evolved genomes.

Seeds map coordinates straight to brightness, so they come out as simple
gradients and radial washes. A few dozen structural mutations later the same
machinery produces composed shapes. Every node of the final genome is also
rendered on the red/black/white scale to show the intermediate patterns the
output is built from.

Run:  python demos/01_pattern_gallery.py   (writes demos/out/gallery/)
"""

import pathlib

import numpy as np

import cppnstudio as cs

OUT = pathlib.Path(__file__).parent / "out" / "gallery"
OUT.mkdir(parents=True, exist_ok=True)

registry = cs.InnovationRegistry()
rng = np.random.default_rng(2026)

print("four random gray seeds (inputs wired straight to the output):")
for i in range(4):
    seed = cs.seed_genome("gray", registry, rng)
    cs.save_png(cs.render(seed, 256, 256), OUT / f"seed_{i}.png")
    print(f"  seed_{i}.png  intensity at center = {cs.evaluate(seed, 0.0, 0.0)[0]:+.3f}")

print("\none color seed:")
color = cs.seed_genome("color", registry, rng)
cs.save_png(cs.render(color, 256, 256), OUT / "seed_color.png")

print("\nevolving one gray seed for 40 structural steps...")
config = cs.MutationConfig(p_weight=0.4, p_add_node=0.5, p_add_connection=0.5)
genome = cs.seed_genome("gray", registry, rng)
for step in range(40):
    genome = cs.mutate(genome, config, registry, rng)
assert cs.validate(genome) == []
cs.save_png(cs.render(genome, 256, 256), OUT / "evolved.png")
print(f"  evolved.png  ({len(genome.nodes)} nodes, {len(genome.connections)} connections)")

print("\nper-node activation patterns (red = -1, black = 0, white = +1):")
for node in genome.nodes:
    cs.save_png(cs.render_node(genome, node.innovation, 128, 128),
                OUT / f"node_{node.innovation:03d}_{node.kind}.png")
print(f"  wrote {len(genome.nodes)} node images to {OUT}")
