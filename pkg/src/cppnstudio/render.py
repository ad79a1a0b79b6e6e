"""Genome evaluation over coordinate lattices and image rendering.

Node values are computed with one vectorized pass per node in a deterministic
topological order, so rendering the same genome twice gives byte-identical
buffers. Pixel (i, j) maps to x = -1 + 2i/(width-1), y = -1 + 2j/(height-1);
a single row or column sits at coordinate 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from io import BytesIO

import numpy as np
from PIL import Image

from .activations import apply_activation
from .errors import InvalidGenome, UnknownNode
from .genome import Genome, toposort


@dataclass(frozen=True)
class ImageBuffer:
    """Row-major 8-bit pixel grid, 1 channel (gray) or 3 (rgb)."""

    width: int
    height: int
    channels: int
    data: bytes

    def __post_init__(self):
        expected = self.width * self.height * self.channels
        if len(self.data) != expected:
            raise ValueError(f"data length {len(self.data)} != "
                             f"width*height*channels = {expected}")

    def as_array(self) -> np.ndarray:
        arr = np.frombuffer(self.data, dtype=np.uint8)
        return arr.reshape(self.height, self.width, self.channels)


def _axis(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError("image dimensions must be >= 1")
    if n == 1:
        return np.zeros(1)
    return -1.0 + 2.0 * np.arange(n) / (n - 1)


def lattice(width: int, height: int) -> tuple[np.ndarray, np.ndarray]:
    """Flattened row-major (x, y) coordinates of the pixel lattice."""
    xs, ys = np.meshgrid(_axis(width), _axis(height))
    return xs.ravel(), ys.ravel()


_INPUT_VALUE = {
    "input_x": lambda xs, ys: xs,
    "input_y": lambda xs, ys: ys,
    "input_d": lambda xs, ys: np.sqrt(xs * xs + ys * ys),
    "input_bias": lambda xs, ys: np.ones_like(xs),
}


def evaluate_grid(genome: Genome, xs: np.ndarray, ys: np.ndarray) -> dict[int, np.ndarray]:
    """Node activations for every node, over parallel coordinate arrays.

    Input nodes take their coordinate values directly (the distance input may
    exceed 1); every other node applies its activation to the weighted sum of
    enabled incoming values, in topological order. Returns a map from node
    innovation to value array.
    """
    order = toposort(genome)  # raises InvalidGenome on cycles
    incoming: dict[int, list] = {n.innovation: [] for n in genome.nodes}
    for c in genome.enabled_connections:
        incoming[c.target].append(c)

    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    values: dict[int, np.ndarray] = {}
    for innovation in order:
        node = genome.node(innovation)
        if node.is_input:
            values[innovation] = _INPUT_VALUE[node.kind](xs, ys)
            continue
        total = np.zeros_like(xs)
        for c in incoming[innovation]:
            total = total + c.weight * values[c.source]
        values[innovation] = apply_activation(node.activation, total)
    return values


def _output_map(genome: Genome) -> dict[str, int]:
    out = {}
    for n in genome.outputs():
        if n.kind in out:
            raise InvalidGenome(f"duplicate {n.kind} node")
        out[n.kind] = n.innovation
    if "output_intensity" not in out:
        raise InvalidGenome("genome has no output_intensity node")
    if genome.palette == "color" and ("output_hue" not in out or "output_saturation" not in out):
        raise InvalidGenome("color genome is missing hue/saturation outputs")
    return out


def evaluate(genome: Genome, x: float, y: float) -> tuple[float, ...]:
    """Output values at one coordinate: (intensity,) or (intensity, hue, saturation)."""
    outs = _output_map(genome)
    values = evaluate_grid(genome, np.array([float(x)]), np.array([float(y)]))
    intensity = float(values[outs["output_intensity"]][0])
    if genome.palette == "color":
        return (intensity,
                float(values[outs["output_hue"]][0]),
                float(values[outs["output_saturation"]][0]))
    return (intensity,)


def _to_bytes(channel_stack: np.ndarray) -> bytes:
    clipped = np.clip(np.rint(channel_stack * 255.0), 0, 255).astype(np.uint8)
    return clipped.tobytes()


def hsv_to_rgb(h_deg: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized HSV -> RGB; hue in degrees, s/v in [0,1]; returns (..., 3) floats."""
    h = (np.asarray(h_deg, dtype=float) % 360.0) / 60.0
    i = np.floor(h).astype(int) % 6
    f = h - np.floor(h)
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    rgb = np.empty(h.shape + (3,), dtype=float)
    for idx, comps in enumerate(((v, t, p), (q, v, p), (p, v, t),
                                 (p, q, v), (t, p, v), (v, p, q))):
        mask = i == idx
        for ch in range(3):
            rgb[mask, ch] = np.broadcast_to(comps[ch], h.shape)[mask]
    return rgb


def render(genome: Genome, width: int, height: int) -> ImageBuffer:
    """Render the genome's final output over the pixel lattice.

    Grayscale brightness is |intensity| clamped to [0,1] and scaled to 0..255.
    Color genomes map hue = 360*(o_h+1)/2 degrees, saturation = |o_s|,
    brightness = |o_i|, then convert HSB to RGB.
    """
    outs = _output_map(genome)
    xs, ys = lattice(width, height)
    values = evaluate_grid(genome, xs, ys)
    brightness = np.clip(np.abs(values[outs["output_intensity"]]), 0.0, 1.0)
    if genome.palette == "gray":
        return ImageBuffer(width, height, 1, _to_bytes(brightness))
    hue = 360.0 * (values[outs["output_hue"]] + 1.0) / 2.0
    sat = np.clip(np.abs(values[outs["output_saturation"]]), 0.0, 1.0)
    rgb = hsv_to_rgb(hue, sat, brightness)
    return ImageBuffer(width, height, 3, _to_bytes(rgb))


def render_node(genome: Genome, node: int, width: int, height: int) -> ImageBuffer:
    """Visualize one node's activation: red at -1, black at 0, white at +1."""
    if node not in genome.node_by_innovation:
        raise UnknownNode(f"no node with innovation {node}")
    xs, ys = lattice(width, height)
    values = evaluate_grid(genome, xs, ys)
    v = np.clip(values[node], -1.0, 1.0)
    pos = np.maximum(v, 0.0)
    neg = np.maximum(-v, 0.0)
    rgb = np.stack([np.where(v < 0, neg, pos), pos, pos], axis=-1)
    return ImageBuffer(width, height, 3, _to_bytes(rgb))


def to_png(buffer: ImageBuffer) -> bytes:
    mode = "L" if buffer.channels == 1 else "RGB"
    arr = buffer.as_array()
    if buffer.channels == 1:
        arr = arr[:, :, 0]
    img = Image.fromarray(arr, mode=mode)
    out = BytesIO()
    img.save(out, format="PNG")
    return out.getvalue()


def save_png(buffer: ImageBuffer, path) -> None:
    with open(path, "wb") as fh:
        fh.write(to_png(buffer))
