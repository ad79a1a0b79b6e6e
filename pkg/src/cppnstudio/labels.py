"""Human-assigned connection labels and annotated genome exports.

Sweeping tells the analyst what a connection controls; the label store keeps
the name and display color they assign to it. Node labels are derived as the
majority label over enabled incoming connections (ties go to the label of the
lowest-innovation incoming connection). The annotated export is an SVG of the
genome layered by topological depth plus a machine-readable decomposition
grouping connections by label, comparable against metric partitions.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field

from .errors import UnknownConnection, UnknownNode
from .genome import Genome, canonical_json

NEUTRAL_EDGE_COLOR = "#9a9a9a"
_HEX_RE = re.compile(r"^#[0-9a-fA-F]{6}$")


def normalize_color(color) -> str:
    """Accept '#rrggbb' or an (r, g, b) triple; canonical form is lowercase hex."""
    if isinstance(color, str):
        if not _HEX_RE.match(color):
            raise ValueError(f"color must look like '#rrggbb', got {color!r}")
        return color.lower()
    r, g, b = color
    for v in (r, g, b):
        if not 0 <= int(v) <= 255:
            raise ValueError(f"rgb components must be 0..255, got {color!r}")
    return f"#{int(r):02x}{int(g):02x}{int(b):02x}"


@dataclass(frozen=True)
class Label:
    name: str
    color: str


@dataclass(frozen=True)
class LabelStore:
    genome_id: str
    labels: dict[int, Label] = field(default_factory=dict)

    def to_document(self) -> dict:
        return {"genome_id": self.genome_id,
                "labels": {str(innovation): {"name": lbl.name, "color": lbl.color}
                           for innovation, lbl in self.labels.items()}}

    @classmethod
    def from_document(cls, doc: dict) -> "LabelStore":
        labels = {int(k): Label(v["name"], normalize_color(v["color"]))
                  for k, v in doc.get("labels", {}).items()}
        return cls(genome_id=str(doc["genome_id"]), labels=labels)


def assign_label(store: LabelStore, genome: Genome, connection: int,
                 name: str, color) -> LabelStore:
    """Record (or overwrite) the label of one connection."""
    if connection not in genome.connection_by_innovation:
        raise UnknownConnection(f"no connection with innovation {connection}")
    labels = dict(store.labels)
    labels[connection] = Label(name=name, color=normalize_color(color))
    return LabelStore(genome_id=store.genome_id, labels=labels)


def save_labels(store: LabelStore, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(store.to_document()))
        fh.write("\n")


def load_labels(path) -> LabelStore:
    with open(path, "r", encoding="utf-8") as fh:
        return LabelStore.from_document(json.load(fh))


def node_label(genome: Genome, store: LabelStore, node: int):
    """Majority label among a node's enabled incoming connections, or None.

    Input and bias nodes have no incoming connections and are always
    unlabeled. Ties are broken by the label of the lowest-innovation incoming
    connection among the tied labels.
    """
    if node not in genome.node_by_innovation:
        raise UnknownNode(f"no node with innovation {node}")
    incoming = [c for c in genome.enabled_connections
                if c.target == node and c.innovation in store.labels]
    if not incoming:
        return None
    counts = Counter(store.labels[c.innovation].name for c in incoming)
    best = max(counts.values())
    tied = {name for name, count in counts.items() if count == best}
    winner = min((c for c in incoming if store.labels[c.innovation].name in tied),
                 key=lambda c: c.innovation)
    return store.labels[winner.innovation]


def decomposition(store: LabelStore) -> dict:
    """Connections grouped by label name; every labeled connection appears
    exactly once. Groups and members are sorted for canonical output."""
    groups: dict[str, list[int]] = {}
    for innovation, label in store.labels.items():
        groups.setdefault(label.name, []).append(innovation)
    return {"groups": [{"name": name, "connections": sorted(members)}
                       for name, members in sorted(groups.items())]}


# --- layered SVG export ------------------------------------------------------

_LAYER_GAP = 90
_NODE_GAP = 110
_RADIUS = 18
_MARGIN = 60


def _layer_depths(genome: Genome) -> dict[int, int]:
    """Longest-path depth from the inputs over enabled connections; outputs are
    pinned to a common top layer."""
    depth = {n.innovation: 0 for n in genome.nodes}
    from .genome import toposort
    incoming: dict[int, list[int]] = {n.innovation: [] for n in genome.nodes}
    for c in genome.enabled_connections:
        incoming[c.target].append(c.source)
    for node in toposort(genome):
        preds = incoming[node]
        if preds:
            depth[node] = 1 + max(depth[p] for p in preds)
    top = max(depth.values(), default=0) + 1
    for n in genome.outputs():
        depth[n.innovation] = top
    return depth


@dataclass(frozen=True)
class AnnotatedExport:
    svg: str
    decomposition: dict


def annotate_export(genome: Genome, store: LabelStore,
                    partition: dict[int, int] | None = None) -> AnnotatedExport:
    """Render the genome as a layered SVG (inputs at the bottom, outputs at the
    top) with edges colored by their label and nodes by their majority label.

    partition optionally maps node innovation to a module id; module
    membership is drawn as a dashed halo so metric partitions can be compared
    visually with the labeled decomposition.
    """
    depths = _layer_depths(genome)
    max_depth = max(depths.values(), default=0)
    layers: dict[int, list[int]] = {}
    for node, d in sorted(depths.items()):
        layers.setdefault(d, []).append(node)

    width = _MARGIN * 2 + _NODE_GAP * max((len(v) for v in layers.values()), default=1)
    height = _MARGIN * 2 + _LAYER_GAP * (max_depth + 1)
    pos: dict[int, tuple[float, float]] = {}
    for d, members in layers.items():
        y = height - _MARGIN - d * _LAYER_GAP
        span = (len(members) - 1) * _NODE_GAP
        x0 = (width - span) / 2
        for k, node in enumerate(members):
            pos[node] = (x0 + k * _NODE_GAP, y)

    module_palette = ["#7db7e8", "#f2a65a", "#9ad29a", "#d98cb3", "#c0b6e8", "#e8e18a"]
    parts: list[str] = []
    parts.append(f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
                 f'height="{height}" viewBox="0 0 {width} {height}">')
    parts.append('<rect width="100%" height="100%" fill="white"/>')

    for c in genome.connections:
        (x1, y1), (x2, y2) = pos[c.source], pos[c.target]
        label = store.labels.get(c.innovation)
        color = label.color if label else NEUTRAL_EDGE_COLOR
        dash = '' if c.enabled else ' stroke-dasharray="6,4"'
        sw = 2.2 if label else 1.2
        parts.append(f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
                     f'stroke="{color}" stroke-width="{sw}"{dash}>'
                     f'<title>connection {c.innovation} '
                     f'({c.source}-&gt;{c.target}, w={c.weight:.3f})'
                     f'{": " + label.name if label else ""}</title></line>')

    for n in genome.nodes:
        x, y = pos[n.innovation]
        if partition is not None and n.innovation in partition:
            halo = module_palette[partition[n.innovation] % len(module_palette)]
            parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{_RADIUS + 6}" '
                         f'fill="none" stroke="{halo}" stroke-width="4" '
                         f'stroke-dasharray="3,3"/>')
        lbl = node_label(genome, store, n.innovation)
        fill = lbl.color if lbl else ("#d8d8d8" if n.kind == "hidden" else "#f4f4f4")
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="{_RADIUS}" fill="{fill}" '
                     f'stroke="#333" stroke-width="1.5">'
                     f'<title>node {n.innovation} ({n.kind}, {n.activation})'
                     f'{": " + lbl.name if lbl else ""}</title></circle>')
        tag = {"input_x": "x", "input_y": "y", "input_d": "d", "input_bias": "b",
               "output_intensity": "I", "output_hue": "H", "output_saturation": "S",
               "hidden": ""}[n.kind] or n.activation[:1]
        parts.append(f'<text x="{x:.1f}" y="{y + 4:.1f}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="12">{tag}</text>')

    parts.append("</svg>")
    return AnnotatedExport(svg="\n".join(parts), decomposition=decomposition(store))
