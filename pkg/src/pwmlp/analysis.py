"""Error measurement, network-vs-oracle verification, and empirical
convergence-order estimation."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .builders import build_network
from .errors import NumericalError, UsageError
from .grids import KnotGrid, TargetSamples
from .network import forward_grid
from .oracle import eval_oracle_grid, matching_oracle
from .targets import TargetDef, get_target

# Sup errors at or below this (relative) level are floating-point noise,
# not approximation error; order fitting would be meaningless.
ZERO_ERROR_RTOL = 1e-13


@dataclass(frozen=True)
class ErrorSummary:
    sup_error: float
    l2_error: float
    grid_size: int


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    max_deviation: float
    worst_x: float
    tol: float
    grid_size: int


@dataclass(frozen=True)
class ConvergenceReport:
    method: str
    n_values: Tuple[int, ...]
    sup_errors: Tuple[float, ...]
    l2_errors: Tuple[float, ...]
    fitted_order: float
    r_squared: float
    zero_error: bool


def uniform_grid(grid_size):
    grid_size = int(grid_size)
    if grid_size < 2:
        raise UsageError("evaluation grid needs at least 2 points")
    return np.linspace(0.0, 1.0, grid_size)


def measure_error(approx, target, grid_size):
    """Sup and RMS deviation between two vectorized closures on [0, 1]."""
    xs = uniform_grid(grid_size)
    ya = np.asarray(approx(xs), dtype=np.float64)
    yt = np.asarray(target(xs), dtype=np.float64)
    if ya.shape != xs.shape or yt.shape != xs.shape:
        raise UsageError("closures must return one value per grid point")
    for name, y in (("approximant", ya), ("target", yt)):
        bad = ~np.isfinite(y)
        if bad.any():
            raise NumericalError(
                "%s is non-finite at x=%r" % (name, float(xs[bad.argmax()]))
            )
    d = ya - yt
    return ErrorSummary(
        sup_error=float(np.max(np.abs(d))),
        l2_error=float(np.sqrt(np.mean(d * d))),
        grid_size=xs.size,
    )


def verify_equivalence(net, model, grid_size=10001, tol=1e-9):
    """Compare a constructed network against a reference model pointwise."""
    if net.out_dim != model.q:
        raise UsageError(
            "network has %d outputs, model has %d" % (net.out_dim, model.q)
        )
    xs = uniform_grid(grid_size)
    diff = np.abs(forward_grid(net, xs) - eval_oracle_grid(model, xs))
    flat = int(np.argmax(diff))
    row = flat // model.q
    max_dev = float(diff.flat[flat])
    return EquivalenceReport(
        passed=max_dev <= tol,
        max_deviation=max_dev,
        worst_x=float(xs[row]),
        tol=float(tol),
        grid_size=xs.size,
    )


def estimate_order(method, target, n_values, grid_size=10001, slope=0.75,
                   route="network"):
    """Fit the empirical convergence order of a construction method.

    Builds the approximant for each N, measures the sup error against
    the analytic target, and fits a least-squares line to log(error)
    versus log(N); the order is the negated slope.  route="oracle"
    measures the reference model instead of the network (the two must
    agree, so their fitted orders do too).
    """
    if isinstance(target, str):
        target = get_target(target)
    if not isinstance(target, TargetDef):
        raise UsageError("target must be a registry name or TargetDef")
    n_values = [int(n) for n in n_values]
    if len(n_values) < 3:
        raise UsageError("order estimation needs at least 3 values of N")
    if any(n < 4 for n in n_values):
        raise UsageError("order estimation needs N >= 4")
    if any(b <= a for a, b in zip(n_values, n_values[1:])):
        raise UsageError("N values must be strictly increasing")
    if route not in ("network", "oracle"):
        raise UsageError("route must be 'network' or 'oracle'")

    sups = []
    l2s = []
    for n in n_values:
        samples = TargetSamples.from_function(KnotGrid.uniform(n), target.fn)
        if route == "network":
            net = build_network(method, samples, slope)
            approx = lambda xs, net=net: forward_grid(net, xs)[:, 0]
        else:
            model = matching_oracle(method, samples, slope)
            approx = lambda xs, model=model: eval_oracle_grid(model, xs)[:, 0]
        summary = measure_error(approx, target.fn, grid_size)
        sups.append(summary.sup_error)
        l2s.append(summary.l2_error)

    scale = max(1.0, target.sup_abs)
    zero_error = any(s <= ZERO_ERROR_RTOL * scale for s in sups)
    if zero_error:
        fitted = float("nan")
        r_squared = float("nan")
    else:
        log_n = np.log(np.asarray(n_values, dtype=np.float64))
        log_e = np.log(np.asarray(sups, dtype=np.float64))
        coeffs = np.polyfit(log_n, log_e, 1)
        fitted = -float(coeffs[0])
        pred = np.polyval(coeffs, log_n)
        ss_res = float(np.sum((log_e - pred) ** 2))
        ss_tot = float(np.sum((log_e - np.mean(log_e)) ** 2))
        r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ConvergenceReport(
        method=method,
        n_values=tuple(n_values),
        sup_errors=tuple(sups),
        l2_errors=tuple(l2s),
        fitted_order=fitted,
        r_squared=r_squared,
        zero_error=zero_error,
    )
