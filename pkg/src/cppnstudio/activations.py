"""Node activation functions.

All activations are bipolar (they map the real line into [-1, 1]) so that any
node's output can be visualized on the red/black/white scale. The steepness
constants give visible variation when inputs live on the [-1, 1] pixel
lattice; they are module-level so experiments can override them.
"""

from __future__ import annotations

import numpy as np

SIGMOID_SLOPE = 4.9
GAUSSIAN_SLOPE = 2.5
SINE_FREQ = 2.0

# Keep exp() arguments finite; beyond this the outputs are saturated anyway.
_EXP_CLIP = 60.0


def identity(z):
    return np.clip(z, -1.0, 1.0)


def sigmoid(z):
    a = np.clip(SIGMOID_SLOPE * np.asarray(z, dtype=float), -_EXP_CLIP, _EXP_CLIP)
    return 2.0 / (1.0 + np.exp(-a)) - 1.0


def gaussian(z):
    a = np.clip(GAUSSIAN_SLOPE * np.asarray(z, dtype=float), -_EXP_CLIP, _EXP_CLIP)
    return 2.0 * np.exp(-(a * a)) - 1.0


def sine(z):
    return np.sin(SINE_FREQ * np.asarray(z, dtype=float))


#: Period of the sine activation in input units (sin(SINE_FREQ * z)).
SINE_PERIOD = 2.0 * np.pi / SINE_FREQ

ACTIVATIONS = {
    "identity": identity,
    "sigmoid": sigmoid,
    "gaussian": gaussian,
    "sine": sine,
}

#: Activations eligible for freshly inserted hidden nodes.
HIDDEN_ACTIVATIONS = ("sigmoid", "gaussian", "sine")


def apply_activation(name: str, z):
    """Apply the named activation to a scalar or array."""
    try:
        fn = ACTIVATIONS[name]
    except KeyError:
        raise ValueError(f"unknown activation {name!r}") from None
    return fn(z)
