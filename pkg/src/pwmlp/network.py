"""One-hidden-layer networks with per-neuron activations.

A network is a list of hidden neurons (input weight, bias, activation)
plus one output tap per output dimension (a weight per neuron and one
accumulated bias).  Evaluation sums tap-weighted activations in neuron
order with a compensated (Neumaier) accumulator: the ReLU constructions
produce large cancelling responses, and plain summation would visibly
erode the agreement with the piecewise-polynomial reference models.

Models serialize to JSON with shortest-round-trip number formatting, so
a save/load cycle reproduces evaluation results bit for bit.
"""

import json
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .activations import CUBIC, KINDS, Activation, activation_values
from .errors import DomainError, FormatError, UsageError


@dataclass(frozen=True)
class HiddenNeuron:
    weight: float
    bias: float
    activation: Activation

    def __post_init__(self):
        if not (math.isfinite(self.weight) and math.isfinite(self.bias)):
            raise UsageError("neuron weight and bias must be finite")


@dataclass(frozen=True)
class OutputTap:
    weights: Tuple[float, ...]
    bias: float

    def __post_init__(self):
        if not all(math.isfinite(w) for w in self.weights):
            raise UsageError("tap weights must be finite")
        if not math.isfinite(self.bias):
            raise UsageError("tap bias must be finite")


@dataclass(frozen=True)
class Network:
    neurons: Tuple[HiddenNeuron, ...]
    outputs: Tuple[OutputTap, ...]
    method: str
    n: int

    def __post_init__(self):
        if len(self.neurons) == 0:
            raise UsageError("network needs at least one hidden neuron")
        if len(self.outputs) == 0:
            raise UsageError("network needs at least one output tap")
        for k, tap in enumerate(self.outputs):
            if len(tap.weights) != len(self.neurons):
                raise UsageError(
                    "output tap %d has %d weights for %d neurons"
                    % (k, len(tap.weights), len(self.neurons))
                )

    @property
    def width(self):
        return len(self.neurons)

    @property
    def out_dim(self):
        return len(self.outputs)


def forward_grid(net, grid):
    """Evaluate the network on a 1-D grid; returns a (len(grid), q) array.

    Row i equals forward(net, grid[i]) bit for bit: the scalar entry
    point delegates here, and every lane of the vectorized arithmetic is
    an independent IEEE double operation.
    """
    xs = np.asarray(grid, dtype=np.float64)
    if xs.ndim != 1:
        raise UsageError("evaluation grid must be one-dimensional")
    if xs.size == 0:
        raise UsageError("evaluation grid is empty")
    if not np.all(np.isfinite(xs)):
        raise DomainError("non-finite evaluation point")

    q = net.out_dim
    total = np.empty((q, xs.size), dtype=np.float64)
    comp = np.zeros((q, xs.size), dtype=np.float64)
    for k, tap in enumerate(net.outputs):
        total[k, :] = tap.bias
    for j, neuron in enumerate(net.neurons):
        a = activation_values(neuron.activation, neuron.weight * xs + neuron.bias)
        for k, tap in enumerate(net.outputs):
            v = tap.weights[j] * a
            s = total[k]
            t = s + v
            # Neumaier update: track the rounding error of each addition.
            comp[k] += np.where(np.abs(s) >= np.abs(v), (s - t) + v, (v - t) + s)
            total[k] = t
    return (total + comp).T


def forward(net, x):
    """Evaluate the network at a scalar x; returns a list of q floats."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("non-finite evaluation point %r" % (x,))
    row = forward_grid(net, np.array([x], dtype=np.float64))[0]
    return [float(v) for v in row]


def save_model(net):
    """Serialize a network to JSON text.

    Only the cubic's free coefficient a1 is stored; the dependent
    coefficients are recomputed on load, which keeps the document small
    and cannot drift because the reconstruction is deterministic.
    """
    neurons = []
    for neuron in net.neurons:
        act = {"kind": neuron.activation.kind}
        if neuron.activation.kind == CUBIC:
            act["a1"] = neuron.activation.cubic_coeffs[1]
        neurons.append(
            {"weight": neuron.weight, "bias": neuron.bias, "activation": act}
        )
    doc = {
        "method": net.method,
        "n": net.n,
        "neurons": neurons,
        "outputs": [
            {"weights": list(tap.weights), "bias": tap.bias} for tap in net.outputs
        ],
        "knots": {"n": net.n},
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _require(cond, path, message):
    if not cond:
        raise FormatError(message, path=path)


def _number(value, path):
    _require(
        isinstance(value, (int, float)) and not isinstance(value, bool),
        path,
        "expected a number, got %r" % (value,),
    )
    v = float(value)
    _require(math.isfinite(v), path, "number must be finite")
    return v


def load_model(text):
    """Parse JSON text produced by save_model back into a Network."""
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise FormatError("invalid JSON: %s" % (exc,)) from exc
    _require(isinstance(doc, dict), "$", "model document must be an object")
    _require(isinstance(doc.get("method"), str), "method", "missing method tag")
    n = doc.get("n")
    _require(
        isinstance(n, int) and not isinstance(n, bool) and n >= 1,
        "n",
        "n must be a positive integer",
    )
    knots = doc.get("knots")
    _require(isinstance(knots, dict), "knots", "missing knot grid description")
    _require(knots.get("n") == n, "knots.n", "knot count disagrees with n")

    raw_neurons = doc.get("neurons")
    _require(
        isinstance(raw_neurons, list) and len(raw_neurons) >= 1,
        "neurons",
        "model needs a nonempty neuron list",
    )
    neurons = []
    for i, item in enumerate(raw_neurons):
        path = "neurons[%d]" % i
        _require(isinstance(item, dict), path, "neuron must be an object")
        weight = _number(item.get("weight"), path + ".weight")
        bias = _number(item.get("bias"), path + ".bias")
        act = item.get("activation")
        _require(isinstance(act, dict), path + ".activation", "missing activation")
        kind = act.get("kind")
        _require(kind in KINDS, path + ".activation.kind", "unknown kind %r" % (kind,))
        if kind == CUBIC:
            a1 = _number(act.get("a1"), path + ".activation.a1")
            try:
                activation = Activation.cubic(a1)
            except DomainError as exc:
                raise FormatError(str(exc), path=path + ".activation.a1") from exc
        else:
            _require(
                "a1" not in act,
                path + ".activation.a1",
                "a1 only applies to the cubic kind",
            )
            activation = Activation(kind)
        neurons.append(HiddenNeuron(weight, bias, activation))

    raw_outputs = doc.get("outputs")
    _require(
        isinstance(raw_outputs, list) and len(raw_outputs) >= 1,
        "outputs",
        "model needs a nonempty output list",
    )
    outputs = []
    for k, item in enumerate(raw_outputs):
        path = "outputs[%d]" % k
        _require(isinstance(item, dict), path, "output tap must be an object")
        weights = item.get("weights")
        _require(isinstance(weights, list), path + ".weights", "missing weight list")
        _require(
            len(weights) == len(neurons),
            path + ".weights",
            "expected %d weights, got %d" % (len(neurons), len(weights)),
        )
        tap_w = tuple(
            _number(w, "%s.weights[%d]" % (path, i)) for i, w in enumerate(weights)
        )
        bias = _number(item.get("bias"), path + ".bias")
        outputs.append(OutputTap(tap_w, bias))

    return Network(tuple(neurons), tuple(outputs), doc["method"], n)
