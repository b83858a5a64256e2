"""Piecewise-polynomial reference models built from localized kernels.

These are the ground truth the constructed networks are checked
against: box kernels give the piecewise-constant model, triangle
kernels the piecewise-linear interpolant, and cubic bump kernels the
two smooth designs.  A dense LU solve of the bump-coupling system and a
ridge-regularized least-squares kernel fit live here too, as
independent cross-checks of the construction-side algorithms.
"""

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .activations import DEFAULT_SLOPE, Activation, activation_values, eval_activation
from .errors import DomainError, NumericalError, UsageError
from .grids import KnotGrid

BOX = "box"
TRIANGLE = "triangle"
CUBIC_BUMP = "cubic-bump"

KERNEL_KINDS = (BOX, TRIANGLE, CUBIC_BUMP)

EVERY_KNOT = "every-knot"
EVERY_OTHER_KNOT = "every-other-knot"

# Ridge added to the normal equations in fit_kernel_weights.  Large
# enough to repair near-collinear boundary kernels, small enough not to
# bias a well-posed fit beyond ~1e-12.
RIDGE = 1e-12


@dataclass(frozen=True)
class KernelKind:
    """Kernel selector; the cubic bump carries its inflection slope."""

    kind: str
    slope: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise UsageError("unknown kernel kind %r" % (self.kind,))
        if self.kind == CUBIC_BUMP:
            if self.slope is None:
                raise UsageError("cubic bump kernel needs an inflection slope")
            # validates the range
            Activation.cubic(self.slope)
        elif self.slope is not None:
            raise UsageError("slope only applies to the cubic bump kernel")

    @staticmethod
    def box():
        return KernelKind(BOX)

    @staticmethod
    def triangle():
        return KernelKind(TRIANGLE)

    @staticmethod
    def cubic_bump(slope=DEFAULT_SLOPE):
        return KernelKind(CUBIC_BUMP, float(slope))


def eval_kernel(kernel, u):
    """Evaluate a kernel at the normalized coordinate u = (x - x_j) / h.

    Box: 1 on [0, 1), else 0.  Triangle: u+1 on [-1, 0], 1-u on [0, 1],
    else 0.  Cubic bump: q(u+1) + q(1-u) - 1, two opposed unit cubics
    minus the unit shift; support [-2, 2], value 1 at 0 and 0.5 at +-1.
    """
    u = float(u)
    if kernel.kind == BOX:
        return 1.0 if 0.0 <= u < 1.0 else 0.0
    if kernel.kind == TRIANGLE:
        if u < -1.0 or u > 1.0:
            return 0.0
        return u + 1.0 if u <= 0.0 else 1.0 - u
    act = Activation.cubic(kernel.slope)
    return eval_activation(act, u + 1.0) + eval_activation(act, 1.0 - u) - 1.0


def kernel_values(kernel, u):
    """Vectorized eval_kernel over a float64 array (same arithmetic)."""
    u = np.asarray(u, dtype=np.float64)
    if kernel.kind == BOX:
        return np.where((u >= 0.0) & (u < 1.0), 1.0, 0.0)
    if kernel.kind == TRIANGLE:
        inner = np.where(u <= 0.0, u + 1.0, 1.0 - u)
        return np.where((u < -1.0) | (u > 1.0), 0.0, inner)
    act = Activation.cubic(kernel.slope)
    return activation_values(act, u + 1.0) + activation_values(act, 1.0 - u) - 1.0


@dataclass(frozen=True)
class PiecewiseOracle:
    """Kernel-sum approximant sum_j c_j K(h^-1 (x - x_j)).

    Coefficients are f(x_j) for the box and triangle models, the
    coupling solution g(x_j) for the every-knot bump model, and f at the
    even knots for the every-other-knot bump model.
    """

    grid: KnotGrid
    kernel: KernelKind
    coefficients: np.ndarray
    spacing: str = EVERY_KNOT

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=np.float64)
        if c.ndim == 1:
            c = c.reshape(-1, 1)
        if self.spacing == EVERY_KNOT:
            rows = self.grid.n + 1
        elif self.spacing == EVERY_OTHER_KNOT:
            if self.grid.n % 2 != 0:
                raise UsageError("every-other-knot spacing requires even n")
            rows = self.grid.n // 2 + 1
        else:
            raise UsageError("unknown spacing %r" % (self.spacing,))
        if c.ndim != 2 or c.shape[0] != rows:
            raise UsageError(
                "expected %d coefficient rows, got %r" % (rows, c.shape)
            )
        if not np.all(np.isfinite(c)):
            raise UsageError("oracle coefficients must be finite")
        object.__setattr__(self, "coefficients", c)

    @property
    def q(self):
        return self.coefficients.shape[1]


def _active_terms(model, x):
    """(row, weight) pairs for the kernels whose support can contain x.

    Rows ascend; the window around floor(x/h) is padded by one knot so a
    downward-rounded floor never drops an active kernel.  For the box
    model the single covering box is returned, corrected against the
    knot array in both directions (x * n can round past a knot either
    way), with the last box closed at x = 1 so the model agrees with the
    step-sum network there.
    """
    grid = model.grid
    n = grid.n
    knots = grid.knots
    inv = float(n)
    jc = int(x * inv)
    if model.kernel.kind == BOX:
        j = min(jc, n - 1)
        if j > 0 and x < knots[j]:
            j -= 1
        elif j < n - 1 and x >= knots[j + 1]:
            j += 1
        return [(j, 1.0)]
    if model.spacing == EVERY_KNOT:
        radius = 1 if model.kernel.kind == TRIANGLE else 2
        lo = max(jc - radius, 0)
        hi = min(jc + radius + 1, n)
        return [
            (j, eval_kernel(model.kernel, (x - knots[j]) * inv))
            for j in range(lo, hi + 1)
        ]
    rows = model.coefficients.shape[0]
    rc = jc // 2
    lo = max(rc - 2, 0)
    hi = min(rc + 2, rows - 1)
    return [
        (r, eval_kernel(model.kernel, (x - knots[2 * r]) * inv))
        for r in range(lo, hi + 1)
    ]


def eval_oracle(model, x):
    """Evaluate the kernel sum at a scalar x in [0, 1]; returns length-q array."""
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError("oracle evaluation point %r outside [0, 1]" % (x,))
    terms = _active_terms(model, x)
    coef = model.coefficients
    out = np.empty(model.q, dtype=np.float64)
    for k in range(model.q):
        s = 0.0
        for j, w in terms:
            s = s + coef[j, k] * w
        out[k] = s
    return out


def eval_oracle_grid(model, grid):
    """Vectorized eval_oracle over a 1-D grid; returns (len(grid), q)."""
    xs = np.asarray(grid, dtype=np.float64)
    if xs.ndim != 1 or xs.size == 0:
        raise UsageError("evaluation grid must be a nonempty 1-D array")
    if not np.all(np.isfinite(xs)) or xs.min() < 0.0 or xs.max() > 1.0:
        raise DomainError("oracle evaluation points must lie in [0, 1]")
    n = model.grid.n
    knots = model.grid.knots
    inv = float(n)
    coef = model.coefficients
    jc = (xs * inv).astype(np.int64)
    if model.kernel.kind == BOX:
        j = np.minimum(jc, n - 1)
        j = np.where(
            (j > 0) & (xs < knots[j]),
            j - 1,
            np.where((j < n - 1) & (xs >= knots[j + 1]), j + 1, j),
        )
        return coef[j, :].copy()
    acc = np.zeros((xs.size, model.q), dtype=np.float64)
    if model.spacing == EVERY_KNOT:
        radius = 1 if model.kernel.kind == TRIANGLE else 2
        for off in range(-radius, radius + 2):
            j = jc + off
            valid = (j >= 0) & (j <= n)
            js = np.clip(j, 0, n)
            w = kernel_values(model.kernel, (xs - knots[js]) * inv) * valid
            acc += coef[js, :] * w[:, None]
        return acc
    rows = coef.shape[0]
    rc = jc // 2
    for off in range(-2, 3):
        r = rc + off
        valid = (r >= 0) & (r <= rows - 1)
        rs = np.clip(r, 0, rows - 1)
        w = kernel_values(model.kernel, (xs - knots[2 * rs]) * inv) * valid
        acc += coef[rs, :] * w[:, None]
    return acc


def eval_tensor_product(models, corner_values, point):
    """Tensor-product kernel sum over a p-dimensional grid.

    models supply one axis each (shared kernel kind); corner_values is a
    p-dimensional array indexed by per-axis kernel rows.  For p = 1 this
    reduces to eval_oracle bit for bit (same active-term routine, same
    accumulation order).
    """
    if len(models) < 1:
        raise UsageError("tensor product needs at least one axis")
    if len(models) > 3:
        raise UsageError("tensor grids beyond p=3 are not supported")
    kinds = {m.kernel.kind for m in models}
    if len(kinds) != 1:
        raise UsageError("tensor product axes must share one kernel kind")
    point = [float(c) for c in point]
    if len(point) != len(models):
        raise UsageError(
            "point has %d coordinates for %d axes" % (len(point), len(models))
        )
    corner = np.asarray(corner_values, dtype=np.float64)
    expected = tuple(m.coefficients.shape[0] for m in models)
    if corner.shape != expected:
        raise UsageError(
            "corner values shaped %r, expected %r" % (corner.shape, expected)
        )
    for c in point:
        if not (0.0 <= c <= 1.0):
            raise DomainError("tensor point coordinate %r outside [0, 1]" % (c,))

    axis_terms = [_active_terms(m, c) for m, c in zip(models, point)]
    s = 0.0
    # lexicographic walk over the active window, last axis fastest; for
    # p = 1 this is exactly the eval_oracle accumulation (1.0 * w == w)
    for combo in itertools.product(*axis_terms):
        w = 1.0
        for _, wd in combo:
            w = w * wd
        s = s + corner[tuple(j for j, _ in combo)] * w
    return s


def dense_solve_coupling(samples):
    """Brute-force LU solve of the bump-coupling system.

    The matrix has unit diagonal and 0.5 on both off-diagonals; this is
    the cross-check oracle for the O(n) tridiagonal solver on the
    construction side.
    """
    n = samples.grid.n
    m = np.eye(n + 1) + 0.5 * (np.eye(n + 1, k=1) + np.eye(n + 1, k=-1))
    try:
        g = np.linalg.solve(m, samples.values)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("coupling system solve failed: %s" % (exc,)) from exc
    return g


@dataclass(frozen=True)
class KernelFit:
    """Least-squares kernel weights for dense (x, y) samples."""

    omega: np.ndarray
    kernel: KernelKind
    grid: KnotGrid
    rms_residual: float


def fit_kernel_weights(dense_samples, kernel, grid):
    """Fit weights w_j minimizing sum_i (y_i - sum_j w_j K(h^-1(x_i - x_j)))^2.

    Solved through the normal equations with a tiny ridge on the
    diagonal.  Needs at least as many samples as knots.
    """
    data = np.asarray(dense_samples, dtype=np.float64)
    if data.ndim != 2 or data.shape[1] != 2:
        raise UsageError("dense samples must be (x, y) pairs")
    xs = data[:, 0]
    ys = data[:, 1]
    m = xs.size
    cols = grid.n + 1
    if m < cols:
        raise UsageError(
            "underdetermined fit: %d samples for %d knots" % (m, cols)
        )
    if not np.all(np.isfinite(data)):
        raise DomainError("dense samples must be finite")
    if xs.min() < 0.0 or xs.max() > 1.0:
        raise DomainError("sample locations must lie in [0, 1]")

    inv = float(grid.n)
    a = np.empty((m, cols), dtype=np.float64)
    for j in range(cols):
        a[:, j] = kernel_values(kernel, (xs - grid.knots[j]) * inv)
    gram = a.T @ a + RIDGE * np.eye(cols)
    try:
        omega = np.linalg.solve(gram, a.T @ ys)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("normal equations singular: %s" % (exc,)) from exc
    if not np.all(np.isfinite(omega)):
        raise NumericalError("kernel fit produced non-finite weights")
    rms = float(np.sqrt(np.mean((a @ omega - ys) ** 2)))
    return KernelFit(omega=omega, kernel=kernel, grid=grid, rms_residual=rms)


def matching_oracle(method, samples, slope=DEFAULT_SLOPE):
    """The reference model a given construction method must reproduce.

    The coupled-bump coefficients are computed with the dense LU solve,
    deliberately NOT with the construction-side tridiagonal solver, so a
    network-vs-oracle comparison exercises both solvers end to end.
    """
    grid = samples.grid
    if method == "constant":
        return PiecewiseOracle(grid, KernelKind.box(), samples.values)
    if method in ("linear-relu", "linear-ramp"):
        return PiecewiseOracle(grid, KernelKind.triangle(), samples.values)
    if method == "cubic":
        g = dense_solve_coupling(samples)
        return PiecewiseOracle(grid, KernelKind.cubic_bump(slope), g)
    if method == "cubic-spaced":
        if grid.n % 2 != 0:
            raise UsageError("spaced design requires even N")
        return PiecewiseOracle(
            grid,
            KernelKind.cubic_bump(slope),
            samples.values[0::2, :],
            spacing=EVERY_OTHER_KNOT,
        )
    raise UsageError("unknown construction method %r" % (method,))
