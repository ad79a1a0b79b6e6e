"""Single-connection weight sweeps and per-pixel impact statistics.

A sweep re-renders a genome with one connection's weight substituted across a
regular grid (default -3 to +3 at 0.1; fine mode 0.01) so a human can watch,
scrub, and label what that connection controls. The impact map separates the
full-sweep effect from the effect of staying within one unit of the original
weight, because distant-weight background churn should not define what a
connection does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DisabledConnection, UnknownConnection
from .genome import Genome
from .render import ImageBuffer, render

DEFAULT_STEP = 0.1
FINE_STEP = 0.01
LOCAL_WINDOW = 1.0
DEFAULT_THRESHOLD = 0.05


@dataclass(frozen=True)
class SweepSpec:
    connection: int
    lo: float = -3.0
    hi: float = 3.0
    step: float = DEFAULT_STEP
    image_size: tuple[int, int] = (128, 128)

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("lo must be < hi")
        if self.step <= 0:
            raise ValueError("step must be positive")


def _step_decimals(step: float) -> int:
    """Decimal places of the step (0.1 -> 1, 0.01 -> 2); capped for odd steps."""
    text = repr(float(step))
    if "e" in text or "E" in text:
        return 12
    if "." not in text:
        return 0
    return min(len(text.split(".")[1]), 12)


def weight_grid(lo: float, hi: float, step: float) -> list[float]:
    """Sweep weights lo, lo+step, ... rounded to the step's decimal precision,
    with a final frame at hi when the step does not divide the range exactly."""
    decimals = _step_decimals(step)
    count = math.floor((hi - lo) / step + 1e-9) + 1
    values = [round(lo + k * step, decimals) for k in range(count)]
    if values[-1] < hi:
        values.append(hi)
    return values


@dataclass(frozen=True)
class ImpactMap:
    """Per-pixel brightness deltas vs the baseline frame, in [0, 1] units."""

    full_range: np.ndarray    # max |delta| over every frame
    local_window: np.ndarray  # max |delta| over frames within 1 weight unit
    changed_fraction: float
    threshold: float

    def summary(self) -> dict:
        return {
            "changed_fraction": self.changed_fraction,
            "threshold": self.threshold,
            "full_range_max": float(self.full_range.max(initial=0.0)),
            "full_range_mean": float(self.full_range.mean()) if self.full_range.size else 0.0,
            "local_window_max": float(self.local_window.max(initial=0.0)),
            "local_window_mean": (float(self.local_window.mean())
                                  if self.local_window.size else 0.0),
        }


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    baseline_weight: float
    baseline_image: ImageBuffer
    frames: tuple[tuple[float, ImageBuffer], ...]
    impact: ImpactMap = field(compare=False)


def _delta(buffer: ImageBuffer, baseline: ImageBuffer) -> np.ndarray:
    a = buffer.as_array().astype(np.int16)
    b = baseline.as_array().astype(np.int16)
    return np.abs(a - b).max(axis=2) / 255.0


def _compute_impact(frames, baseline_image: ImageBuffer, baseline_weight: float,
                    threshold: float) -> ImpactMap:
    shape = (baseline_image.height, baseline_image.width)
    full = np.zeros(shape)
    local = np.zeros(shape)
    for weight, buffer in frames:
        delta = _delta(buffer, baseline_image)
        np.maximum(full, delta, out=full)
        if abs(weight - baseline_weight) <= LOCAL_WINDOW + 1e-9:
            np.maximum(local, delta, out=local)
    changed = float(np.mean(local > threshold)) if local.size else 0.0
    return ImpactMap(full_range=full, local_window=local,
                     changed_fraction=changed, threshold=threshold)


def impact_map(result: "SweepResult", threshold: float = DEFAULT_THRESHOLD) -> ImpactMap:
    """Recompute the impact statistics of a sweep at a given threshold.

    changed_fraction counts pixels whose local-window delta exceeds the
    threshold; it is non-increasing in the threshold.
    """
    return _compute_impact(result.frames, result.baseline_image,
                           result.baseline_weight, threshold)


def sweep(genome: Genome, spec: SweepSpec,
          threshold: float = DEFAULT_THRESHOLD) -> SweepResult:
    """Render one frame per grid weight with only the chosen connection's
    weight substituted. The genome itself is never modified; the baseline
    frame is the plain render at the original weight."""
    conn = genome.connection_by_innovation.get(spec.connection)
    if conn is None:
        raise UnknownConnection(f"no connection with innovation {spec.connection}")
    if not conn.enabled:
        raise DisabledConnection(f"connection {spec.connection} is disabled")

    width, height = spec.image_size
    baseline_image = render(genome, width, height)
    frames = []
    for weight in weight_grid(spec.lo, spec.hi, spec.step):
        variant = genome.with_connection_weight(spec.connection, weight)
        frames.append((weight, render(variant, width, height)))
    frames = tuple(frames)
    impact = _compute_impact(frames, baseline_image, conn.weight, threshold)
    return SweepResult(spec=spec, baseline_weight=conn.weight,
                       baseline_image=baseline_image, frames=frames, impact=impact)
