"""Feedforward construction of networks realizing piecewise models.

Each builder places hidden neurons at knot-determined positions and
reads the output weights directly off the target samples, so the
resulting network IS the corresponding kernel-sum approximant, not a
trained imitation of it.  With h = 1/N and inv = N, every design uses
unit responses of the form

    rising at knot x_j:   z = inv * x - inv * x_j
    falling at knot x_j:  z = inv * x_j - inv * x

Boundary knots reference the virtual positions x_{-1} = -h and
x_{N+1} = 1 + h; those lie outside [0, 1], which is harmless because
equivalence with the reference models is only claimed on [0, 1].

Constructions:
  constant      N step neurons; telescoped tap weights f(x_j) - f(x_{j-1}).
  linear-relu   4 ReLU neurons per knot summing to f(x_j) * (triangle + 1),
                rebalanced by a bias contribution of -f(x_j).
  linear-ramp   2 ramp neurons per knot realizing the same triangle.
  cubic         2 cubic neurons per knot forming a unit bump; bump
                weights g(x_j) solve the tridiagonal coupling system
                g_j + 0.5 (g_{j-1} + g_{j+1}) = f_j, since adjacent
                bumps overlap with value 0.5 at distance h.
  cubic-spaced  bumps only at even knots (no overlap at the knots, so
                no coupling solve); N must be even.
"""

import math
from dataclasses import dataclass

import numpy as np

from .activations import DEFAULT_SLOPE, Activation
from .errors import NumericalError, UsageError
from .grids import KnotGrid, TargetSamples
from .network import HiddenNeuron, Network, OutputTap

METHODS = ("constant", "linear-relu", "linear-ramp", "cubic", "cubic-spaced")


def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system in O(n) without pivoting.

        | d0 u0          |   x0     r0
        | l1 d1 u1       | * x1  =  r1
        |    l2 d2 u2    |   x2     r2
        |       ...      |   ..     ..

    lower[0] and upper[-1] are ignored.  No pivoting is performed, so
    the caller must supply a matrix where elimination cannot break down
    (positive definite or diagonally dominant).
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    m = rhs.size
    cp = np.empty(m)
    dp = np.empty(m)
    piv = diag[0]
    if piv == 0.0:
        raise NumericalError("zero pivot in tridiagonal elimination")
    cp[0] = upper[0] / piv if m > 1 else 0.0
    dp[0] = rhs[0] / piv
    for i in range(1, m):
        piv = diag[i] - lower[i] * cp[i - 1]
        if piv == 0.0:
            raise NumericalError("zero pivot in tridiagonal elimination")
        cp[i] = upper[i] / piv if i < m - 1 else 0.0
        dp[i] = (rhs[i] - lower[i] * dp[i - 1]) / piv
    x = np.empty(m)
    x[m - 1] = dp[m - 1]
    for i in range(m - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return x


@dataclass(frozen=True)
class CouplingSolution:
    """Bump weights g(x_j) per output dimension, shape (n+1, q)."""

    g: np.ndarray
    residual_max: float


def solve_bump_coupling(samples):
    """Solve g_j + 0.5 (g_{j-1} + g_{j+1}) = f_j with g_{-1} = g_{N+1} = 0.

    The matrix (unit diagonal, 0.5 off-diagonals) is symmetric positive
    definite for every N -- its eigenvalues are 1 + cos(k pi / (N+2)) > 0
    -- so the unpivoted Thomas sweep cannot break down.
    """
    f = samples.values
    m, q = f.shape
    lower = np.full(m, 0.5)
    diag = np.ones(m)
    upper = np.full(m, 0.5)
    g = np.empty((m, q))
    for k in range(q):
        g[:, k] = thomas_solve(lower, diag, upper, f[:, k])

    overlap = g.copy()
    overlap[:-1] += 0.5 * g[1:]
    overlap[1:] += 0.5 * g[:-1]
    residual_max = float(np.max(np.abs(overlap - f)))
    scale = max(1.0, float(np.max(np.abs(f))))
    if residual_max > 1e-10 * scale:
        raise NumericalError(
            "coupling residual %.3e exceeds tolerance" % residual_max
        )
    return CouplingSolution(g=g, residual_max=residual_max)


def _virtual_neighbors(grid, j):
    """Knot positions x_{j-1} and x_{j+1}, extended past the boundary."""
    knots = grid.knots
    xm = knots[j - 1] if j >= 1 else -grid.h
    xp = knots[j + 1] if j + 1 <= grid.n else 1.0 + grid.h
    return xm, xp


def build_piecewise_constant(samples):
    """N step neurons whose telescoped taps sum to f(x_j) on [x_j, x_{j+1})."""
    grid = samples.grid
    n = grid.n
    inv = float(n)
    step = Activation.step()
    neurons = tuple(
        HiddenNeuron(inv, -(inv * grid.knots[j]), step) for j in range(n)
    )
    f = samples.values
    outputs = []
    for k in range(f.shape[1]):
        weights = tuple(
            float(f[j, k]) - (float(f[j - 1, k]) if j > 0 else 0.0)
            for j in range(n)
        )
        outputs.append(OutputTap(weights, 0.0))
    return Network(neurons, tuple(outputs), "constant", n)


def build_piecewise_linear_relu(samples):
    """Four ReLU neurons per knot; their sum is f(x_j) * (triangle + 1).

    Per knot j the group is
        + r(inv x - inv x_{j-1}) - r(inv x - inv x_j)
        + r(inv x_{j+1} - inv x) - r(inv x_j - inv x)
    which evaluates to t_j(x) + 1 everywhere, so a bias contribution of
    -f(x_j) (spread as four quarters) removes the constant shift.
    """
    grid = samples.grid
    n = grid.n
    inv = float(n)
    relu = Activation.relu()
    neurons = []
    for j in range(n + 1):
        xm, xp = _virtual_neighbors(grid, j)
        xj = grid.knots[j]
        neurons.append(HiddenNeuron(inv, -(inv * xm), relu))
        neurons.append(HiddenNeuron(inv, -(inv * xj), relu))
        neurons.append(HiddenNeuron(-inv, inv * xp, relu))
        neurons.append(HiddenNeuron(-inv, inv * xj, relu))
    f = samples.values
    outputs = []
    for k in range(f.shape[1]):
        weights = []
        bias_terms = []
        for j in range(n + 1):
            fj = float(f[j, k])
            weights.extend((fj, -fj, fj, -fj))
            bias_terms.extend((-0.25 * fj,) * 4)
        outputs.append(OutputTap(tuple(weights), math.fsum(bias_terms)))
    return Network(tuple(neurons), tuple(outputs), "linear-relu", n)


def build_piecewise_linear_ramp(samples):
    """Two ramp neurons per knot; rising at x_{j-1} plus falling at x_{j+1}
    equals t_j(x) + 1, so the bias contribution is again -f(x_j)."""
    grid = samples.grid
    n = grid.n
    inv = float(n)
    ramp = Activation.ramp()
    neurons = []
    for j in range(n + 1):
        xm, xp = _virtual_neighbors(grid, j)
        neurons.append(HiddenNeuron(inv, -(inv * xm), ramp))
        neurons.append(HiddenNeuron(-inv, inv * xp, ramp))
    f = samples.values
    outputs = []
    for k in range(f.shape[1]):
        weights = []
        bias_terms = []
        for j in range(n + 1):
            fj = float(f[j, k])
            weights.extend((fj, fj))
            bias_terms.extend((-0.5 * fj,) * 2)
        outputs.append(OutputTap(tuple(weights), math.fsum(bias_terms)))
    return Network(tuple(neurons), tuple(outputs), "linear-ramp", n)


def build_piecewise_cubic_coupled(samples, inflection_slope=DEFAULT_SLOPE):
    """Two cubic neurons per knot forming a unit bump, weighted by the
    coupling solution g so the network interpolates f at every knot."""
    act = Activation.cubic(inflection_slope)
    grid = samples.grid
    n = grid.n
    inv = float(n)
    neurons = []
    for j in range(n + 1):
        xm, xp = _virtual_neighbors(grid, j)
        neurons.append(HiddenNeuron(inv, -(inv * xm), act))
        neurons.append(HiddenNeuron(-inv, inv * xp, act))
    g = solve_bump_coupling(samples).g
    outputs = []
    for k in range(g.shape[1]):
        weights = []
        bias_terms = []
        for j in range(n + 1):
            gj = float(g[j, k])
            weights.extend((gj, gj))
            bias_terms.extend((-0.5 * gj,) * 2)
        outputs.append(OutputTap(tuple(weights), math.fsum(bias_terms)))
    return Network(tuple(neurons), tuple(outputs), "cubic", n)


def build_piecewise_cubic_spaced(samples, inflection_slope=DEFAULT_SLOPE):
    """Bumps only at even knots, spacing 2h, so the bumps do not overlap
    at the knots and the tap weights are the samples themselves.  At an
    odd knot the two flanking bumps each contribute half, so the value
    there is the average 0.5 (f(x_{j-1}) + f(x_{j+1}))."""
    grid = samples.grid
    n = grid.n
    if n % 2 != 0:
        raise UsageError("spaced design requires even N")
    act = Activation.cubic(inflection_slope)
    inv = float(n)
    neurons = []
    for j in range(0, n + 1, 2):
        xm, xp = _virtual_neighbors(grid, j)
        neurons.append(HiddenNeuron(inv, -(inv * xm), act))
        neurons.append(HiddenNeuron(-inv, inv * xp, act))
    f = samples.values
    outputs = []
    for k in range(f.shape[1]):
        weights = []
        bias_terms = []
        for j in range(0, n + 1, 2):
            fj = float(f[j, k])
            weights.extend((fj, fj))
            bias_terms.extend((-0.5 * fj,) * 2)
        outputs.append(OutputTap(tuple(weights), math.fsum(bias_terms)))
    return Network(tuple(neurons), tuple(outputs), "cubic-spaced", n)


def build_network(method, samples, slope=DEFAULT_SLOPE):
    """Dispatch a construction method name to its builder."""
    if method == "constant":
        return build_piecewise_constant(samples)
    if method == "linear-relu":
        return build_piecewise_linear_relu(samples)
    if method == "linear-ramp":
        return build_piecewise_linear_ramp(samples)
    if method == "cubic":
        return build_piecewise_cubic_coupled(samples, slope)
    if method == "cubic-spaced":
        return build_piecewise_cubic_spaced(samples, slope)
    raise UsageError("unknown construction method %r" % (method,))
