"""Single-hidden-layer perceptron: forward pass and flat-vector codec.

The network computes ``O = V^T sigmoid(W^T x + b_h) + b_o`` with sigmoid
hidden units and a linear output layer (an optional sigmoid on the output is
available for experimentation). All parameters live in one flat vector so a
black-box optimizer can search over them directly. The canonical layout
interleaves each hidden unit's incoming weights with its bias, then each
output unit's incoming weights with its bias:

    [w_1..w_n b | ... m blocks ... | v_1..v_m b | ... o blocks ...]

which makes the total length (n+1)*m + (m+1)*o.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class MlpTopology:
    """Layer sizes: ``inputs`` features, ``hidden`` units, ``outputs`` units."""

    inputs: int
    hidden: int
    outputs: int

    def __post_init__(self):
        for name in ("inputs", "hidden", "outputs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")


@dataclass(eq=False)
class MlpParams:
    """Structured view of one parameter vector.

    Shapes: input_hidden_weights (n, m), hidden_biases (m,),
    hidden_output_weights (m, o), output_biases (o,).
    """

    input_hidden_weights: np.ndarray
    hidden_biases: np.ndarray
    hidden_output_weights: np.ndarray
    output_biases: np.ndarray

    def __post_init__(self):
        n, m = self.input_hidden_weights.shape
        m2, o = self.hidden_output_weights.shape
        if m2 != m or self.hidden_biases.shape != (m,) or self.output_biases.shape != (o,):
            raise ValueError("parameter shapes are inconsistent")

    @property
    def topology(self) -> MlpTopology:
        n, m = self.input_hidden_weights.shape
        return MlpTopology(n, m, self.hidden_output_weights.shape[1])


def vector_dimension(topology: MlpTopology) -> int:
    """Length of the flat parameter vector: (n+1)*m + (m+1)*o."""
    n, m, o = topology.inputs, topology.hidden, topology.outputs
    return (n + 1) * m + (m + 1) * o


def hidden_size_rule(feature_count: int) -> int:
    """Stock hidden-layer size for a given feature count: 2*N + 1."""
    if feature_count < 1:
        raise ValueError("feature_count must be at least 1")
    return 2 * feature_count + 1


def decode(flat: np.ndarray, topology: MlpTopology) -> MlpParams:
    """Unpack a flat vector into structured weights and biases."""
    flat = np.asarray(flat, dtype=float)
    expected = vector_dimension(topology)
    if flat.shape != (expected,):
        raise ValueError(
            f"flat vector has length {flat.size}, expected {expected} "
            f"for topology ({topology.inputs}, {topology.hidden}, {topology.outputs})")
    n, m, o = topology.inputs, topology.hidden, topology.outputs
    flat = flat.copy()
    hidden_block = flat[:(n + 1) * m].reshape(m, n + 1)
    output_block = flat[(n + 1) * m:].reshape(o, m + 1)
    return MlpParams(
        input_hidden_weights=hidden_block[:, :n].T,
        hidden_biases=hidden_block[:, n],
        hidden_output_weights=output_block[:, :m].T,
        output_biases=output_block[:, m],
    )


def encode(params: MlpParams) -> np.ndarray:
    """Pack structured parameters back into the canonical flat vector."""
    hidden_block = np.hstack([params.input_hidden_weights.T,
                              params.hidden_biases[:, None]])
    output_block = np.hstack([params.hidden_output_weights.T,
                              params.output_biases[:, None]])
    return np.concatenate([hidden_block.ravel(), output_block.ravel()])


def sigmoid(s):
    """Logistic function 1 / (1 + exp(-s)), elementwise on arrays.

    Evaluated branch-wise so large negative inputs do not overflow exp.
    """
    if np.ndim(s) == 0:
        s = float(s)
        if s >= 0.0:
            return 1.0 / (1.0 + math.exp(-s))
        e = math.exp(s)
        return e / (1.0 + e)
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    positive = s >= 0.0
    out[positive] = 1.0 / (1.0 + np.exp(-s[positive]))
    e = np.exp(s[~positive])
    out[~positive] = e / (1.0 + e)
    return out


def forward(params: MlpParams, inputs, sigmoid_output: bool = False) -> np.ndarray:
    """Network output for one input vector of length ``inputs``."""
    x = np.asarray(inputs, dtype=float)
    n = params.input_hidden_weights.shape[0]
    if x.shape != (n,):
        raise ValueError(f"input has shape {x.shape}, expected ({n},)")
    hidden = sigmoid(x @ params.input_hidden_weights + params.hidden_biases)
    out = hidden @ params.hidden_output_weights + params.output_biases
    return sigmoid(out) if sigmoid_output else out


def forward_batch(params: MlpParams, inputs: np.ndarray,
                  sigmoid_output: bool = False) -> np.ndarray:
    """Network outputs for a (samples, inputs) matrix, one row per sample."""
    x = np.asarray(inputs, dtype=float)
    n = params.input_hidden_weights.shape[0]
    if x.ndim != 2 or x.shape[1] != n:
        raise ValueError(f"input matrix has shape {x.shape}, expected (*, {n})")
    hidden = sigmoid(x @ params.input_hidden_weights + params.hidden_biases)
    out = hidden @ params.hidden_output_weights + params.output_biases
    return sigmoid(out) if sigmoid_output else out


def predict_class(output, threshold: float = 0.5) -> int:
    """Class label for one output vector.

    A single output unit thresholds at ``threshold`` (boundary counts as
    class 1); several output units pick the argmax, ties going to the
    lowest index.
    """
    output = np.asarray(output, dtype=float)
    if output.size == 0:
        raise ValueError("output vector is empty")
    if output.size == 1:
        return int(output[0] >= threshold)
    return int(np.argmax(output))


def predict_batch(params: MlpParams, inputs: np.ndarray, threshold: float = 0.5,
                  sigmoid_output: bool = False) -> np.ndarray:
    """Predicted class labels for each row of a feature matrix."""
    out = forward_batch(params, inputs, sigmoid_output)
    if out.shape[1] == 1:
        return (out[:, 0] >= threshold).astype(int)
    return np.argmax(out, axis=1)


def params_to_text(params: MlpParams) -> str:
    """Two-line serialization: "n m o" then the flat vector.

    Values are written with full repr precision so a reload is bit-exact.
    """
    t = params.topology
    flat = encode(params)
    return (f"{t.inputs} {t.hidden} {t.outputs}\n"
            + " ".join(repr(float(v)) for v in flat) + "\n")


def params_from_text(text: str, source: str = "<text>") -> MlpParams:
    lines = text.splitlines()
    if len(lines) < 2:
        raise ValueError(f"{source}: expected a topology line and a vector line")
    try:
        n, m, o = (int(tok) for tok in lines[0].split())
    except ValueError as err:
        raise ValueError(f"{source}: malformed topology line {lines[0]!r}") from err
    topology = MlpTopology(n, m, o)
    flat = np.array([float(tok) for tok in lines[1].split()], dtype=float)
    return decode(flat, topology)


def save_params(params: MlpParams, path) -> None:
    """Write :func:`params_to_text` output to a file."""
    Path(path).write_text(params_to_text(params), encoding="utf-8")


def load_params(path) -> MlpParams:
    """Read parameters written by :func:`save_params`."""
    return params_from_text(Path(path).read_text(encoding="utf-8"), source=str(path))
