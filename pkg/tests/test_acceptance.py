"""Acceptance suite: one test per shipped criterion.

Each test prints a PASS or FAIL line with the governing numbers through
the ``report`` fixture (written straight to the terminal, bypassing
capture) and then asserts the criterion at its stated tolerance.  The
assertions are the contract; the printed lines are the audit trail.
"""

import numpy as np
import pytest

from pwmlp import (
    Activation,
    KernelKind,
    KnotGrid,
    PiecewiseOracle,
    TargetSamples,
    activation_values,
    build_network,
    dense_solve_coupling,
    estimate_order,
    eval_oracle,
    eval_oracle_grid,
    eval_tensor_product,
    fit_kernel_weights,
    forward_grid,
    get_target,
    kernel_values,
    load_model,
    matching_oracle,
    save_model,
    solve_bump_coupling,
    verify_equivalence,
)

ALL_METHODS = ("constant", "linear-relu", "linear-ramp", "cubic",
               "cubic-spaced")


@pytest.fixture
def report(capsys):
    def _report(line):
        with capsys.disabled():
            print("\n" + line, end=" ")
    return _report


def _samples(target_name, n):
    grid = KnotGrid.uniform(n)
    return TargetSamples.from_function(grid, get_target(target_name).fn)


def test_criterion_01_network_oracle_equivalence(report):
    # every constructed network must agree with its reference model to
    # 1e-9 * max(1, |f|_inf) on a 10001-point grid
    worst = (0.0, "")
    cases = 0
    for name in ("affine", "sin2pi", "runge"):
        scale = max(1.0, get_target(name).sup_abs)
        for n in (8, 16, 32, 64):
            samples = _samples(name, n)
            for method in ALL_METHODS:
                net = build_network(method, samples)
                model = matching_oracle(method, samples)
                res = verify_equivalence(net, model, grid_size=10001,
                                         tol=1e-9 * scale)
                cases += 1
                if res.max_deviation > worst[0]:
                    worst = (res.max_deviation,
                             "%s/%s n=%d" % (method, name, n))
                assert res.passed, (
                    "%s on %s at n=%d deviates %.3e (tol %.1e)"
                    % (method, name, n, res.max_deviation, res.tol)
                )
    report("PASS criterion 1: %d equivalence cases, worst deviation "
           "%.3e (%s)" % (cases, worst[0], worst[1]))


def test_criterion_02_convergence_orders(report):
    # fitted sup-error order on sin2pi over N = 16..128; the window
    # gates are [0.9, 1.1] for the step design and [1.9, 2.1] for both
    # linear designs; both cubic designs must reach at least 1.9, with
    # the measured value reported against their design target order 4
    n_values = [16, 32, 64, 128]
    orders = {}
    for method in ALL_METHODS:
        rep = estimate_order(method, "sin2pi", n_values, grid_size=10001)
        assert not rep.zero_error
        orders[method] = rep.fitted_order

    diag = {}
    for method in ("cubic", "cubic-spaced"):
        # slope 0.5 drops the cubic term of the activation; the bump
        # degenerates to a triangle and second order is recovered,
        # which localizes any order loss to the cubic term itself
        diag[method] = estimate_order(method, "sin2pi", n_values,
                                      grid_size=10001, slope=0.5).fitted_order

    failures = []

    def gate(method, ok, detail):
        line = "%s criterion 2 (%s): %s" % ("PASS" if ok else "FAIL",
                                            method, detail)
        report(line)
        if not ok:
            failures.append(line)

    o = orders["constant"]
    gate("constant", 0.9 <= o <= 1.1,
         "fitted order %.4f, window [0.9, 1.1]" % o)
    for method in ("linear-relu", "linear-ramp"):
        o = orders[method]
        gate(method, 1.9 <= o <= 2.1,
             "fitted order %.4f, window [1.9, 2.1]" % o)
    for method in ("cubic", "cubic-spaced"):
        o = orders[method]
        gate(method, o >= 1.9,
             "fitted order %.4f, gate >= 1.9, design target order 4 "
             "(measured, not asserted); slope-0.5 control %.4f"
             % (o, diag[method]))

    assert not failures, "; ".join(failures)


def test_criterion_03_knot_interpolation(report):
    worst = {"linear": 0.0, "cubic": 0.0, "cubic-spaced": 0.0}
    for name in ("sin2pi", "runge"):
        for n in (16, 32):
            samples = _samples(name, n)
            f = samples.values[:, 0]
            knots = samples.grid.knots
            for method in ("linear-relu", "linear-ramp"):
                net = build_network(method, samples)
                dev = np.max(np.abs(forward_grid(net, knots)[:, 0] - f))
                worst["linear"] = max(worst["linear"], float(dev))
            net = build_network("cubic", samples)
            dev = np.max(np.abs(forward_grid(net, knots)[:, 0] - f))
            worst["cubic"] = max(worst["cubic"], float(dev))
            net = build_network("cubic-spaced", samples)
            dev = np.max(np.abs(forward_grid(net, knots)[0::2, 0] - f[0::2]))
            worst["cubic-spaced"] = max(worst["cubic-spaced"], float(dev))
    ok = (worst["linear"] <= 1e-12 and worst["cubic"] <= 1e-9
          and worst["cubic-spaced"] <= 1e-12)
    report("%s criterion 3: knot deviation linear %.2e (tol 1e-12), "
           "coupled cubic %.2e (tol 1e-9), spaced even knots %.2e "
           "(tol 1e-12)" % ("PASS" if ok else "FAIL", worst["linear"],
                            worst["cubic"], worst["cubic-spaced"]))
    assert worst["linear"] <= 1e-12
    assert worst["cubic"] <= 1e-9
    assert worst["cubic-spaced"] <= 1e-12


def test_criterion_04_coupling_solver_cross_check(report):
    rng = np.random.default_rng(101)
    worst = 0.0
    for n in range(2, 65):
        grid = KnotGrid.uniform(n)
        values = rng.uniform(-5.0, 5.0, (n + 1, 100))
        samples = TargetSamples(grid, values)
        sweep = solve_bump_coupling(samples).g
        dense = dense_solve_coupling(samples)
        worst = max(worst, float(np.max(np.abs(sweep - dense))))
    hand = solve_bump_coupling(
        TargetSamples(KnotGrid.uniform(2), np.ones(3))
    ).g[:, 0]
    hand_dev = float(np.max(np.abs(hand - np.array([1.0, 0.0, 1.0]))))
    ok = worst <= 1e-10 and hand_dev <= 1e-12
    report("%s criterion 4: tridiagonal vs dense solve on 100 random "
           "targets for each N in 2..64, worst %.2e (tol 1e-10); hand "
           "case deviation %.2e" % ("PASS" if ok else "FAIL", worst,
                                    hand_dev))
    assert worst <= 1e-10
    assert hand_dev <= 1e-12


def test_criterion_05_activation_properties(report):
    slopes = np.linspace(0.0, 0.75, 5)
    us = np.linspace(-2.0, 2.0, 1001)
    anti = 0.0
    joins = 0.0
    for s in slopes:
        act = Activation.cubic(float(s))
        a0, a1, a2, a3 = act.cubic_coeffs

        def q(z):
            return ((a3 * z + a2) * z + a1) * z + a0

        resid = activation_values(act, us) + activation_values(act, -us) - 1.0
        anti = max(anti, float(np.max(np.abs(resid))))
        joins = max(joins, abs(q(-1.0) - 0.0), abs(q(1.0) - 1.0))

    n = 16
    grid = KnotGrid.uniform(n)
    xs = np.linspace(0.0, 1.0, 1001)
    tri = KernelKind.triangle()
    unity = np.zeros_like(xs)
    for j in range(n + 1):
        unity += kernel_values(tri, (xs - grid.knots[j]) * float(n))
    unity_dev = float(np.max(np.abs(unity - 1.0)))

    ok = anti <= 1e-12 and joins <= 1e-15 and unity_dev <= 1e-14
    report("%s criterion 5: anti-symmetry %.2e (tol 1e-12) over 5 slopes "
           "on 1001 points, plateau joins %.2e (tol 1e-15), triangle "
           "partition of unity %.2e (tol 1e-14)"
           % ("PASS" if ok else "FAIL", anti, joins, unity_dev))
    assert anti <= 1e-12
    assert joins <= 1e-15
    assert unity_dev <= 1e-14


def test_criterion_06_affine_and_constant_reproduction(report):
    xs = np.linspace(0.0, 1.0, 10001)
    affine_dev = 0.0
    for n in (8, 16, 33):
        samples = _samples("affine", n)
        for method in ("linear-relu", "linear-ramp"):
            net = build_network(method, samples)
            dev = np.max(np.abs(forward_grid(net, xs)[:, 0]
                                - (2.0 * xs + 1.0)))
            affine_dev = max(affine_dev, float(dev))

    const_rel = 0.0
    for c in (1.0, -7.25, 1234.5):
        grid = KnotGrid.uniform(16)
        net = build_network("constant",
                            TargetSamples(grid, np.full(17, c)))
        dev = np.max(np.abs(forward_grid(net, xs)[:, 0] - c))
        const_rel = max(const_rel, float(dev) / abs(c))

    ok = affine_dev <= 1e-12 and const_rel <= 1e-15
    report("%s criterion 6: affine reproduction %.2e (tol 1e-12), "
           "constant reproduction %.2e relative (tol 1e-15)"
           % ("PASS" if ok else "FAIL", affine_dev, const_rel))
    assert affine_dev <= 1e-12
    assert const_rel <= 1e-15


def test_criterion_07_kernel_fit_recovery(report):
    rng = np.random.default_rng(107)
    n = 16
    grid = KnotGrid.uniform(n)
    coeffs = rng.uniform(-2.0, 2.0, n + 1)
    model = PiecewiseOracle(grid, KernelKind.triangle(), coeffs)
    xs = np.linspace(0.0, 1.0, 512)
    ys = eval_oracle_grid(model, xs)[:, 0]
    fit = fit_kernel_weights(np.column_stack([xs, ys]),
                             KernelKind.triangle(), grid)
    coeff_dev = float(np.max(np.abs(fit.omega - coeffs)))
    ok = coeff_dev <= 1e-8 and fit.rms_residual <= 1e-10
    report("%s criterion 7: 512-sample triangle fit, coefficient "
           "recovery %.2e (tol 1e-8), rms residual %.2e (tol 1e-10)"
           % ("PASS" if ok else "FAIL", coeff_dev, fit.rms_residual))
    assert coeff_dev <= 1e-8
    assert fit.rms_residual <= 1e-10


def test_criterion_08_tensor_product_oracle(report):
    grid = KnotGrid.uniform(3)
    axis = PiecewiseOracle(grid, KernelKind.triangle(), grid.knots.copy())
    corner = grid.knots[:, None] + 2.0 * grid.knots[None, :]
    rng = np.random.default_rng(109)
    bilinear_dev = 0.0
    for _ in range(1000):
        x, y = rng.uniform(0.0, 1.0, 2)
        got = eval_tensor_product([axis, axis], corner, [x, y])
        bilinear_dev = max(bilinear_dev, abs(got - (x + 2.0 * y)))

    mismatches = 0
    single = PiecewiseOracle(grid, KernelKind.triangle(),
                             rng.uniform(-1.0, 1.0, 4))
    for x in rng.uniform(0.0, 1.0, 500):
        a = eval_tensor_product([single], single.coefficients[:, 0], [x])
        b = eval_oracle(single, x)[0]
        if a != b:
            mismatches += 1

    ok = bilinear_dev <= 1e-12 and mismatches == 0
    report("%s criterion 8: bilinear x + 2y on a 4x4 grid, worst error "
           "%.2e at 1000 points (tol 1e-12); p=1 reduction bitwise "
           "mismatches %d of 500" % ("PASS" if ok else "FAIL",
                                     bilinear_dev, mismatches))
    assert bilinear_dev <= 1e-12
    assert mismatches == 0


def test_criterion_09_serialization_round_trip(report):
    xs = np.linspace(0.0, 1.0, 1001)
    exact = True
    for method in ALL_METHODS:
        samples = _samples("sin2pi", 16)
        net = build_network(method, samples)
        before = forward_grid(net, xs)
        loaded = load_model(save_model(net))
        after = forward_grid(loaded, xs)
        same = np.array_equal(before, after)
        exact = exact and same
        assert same, "%s outputs changed across save/load" % method
    report("PASS criterion 9: save/load/forward bitwise identical for "
           "all %d methods at N=16 on 1001 points" % len(ALL_METHODS))
    assert exact


def test_criterion_10_neuron_count_audit(report):
    expected = {
        "constant": lambda n: n,
        "linear-relu": lambda n: 4 * (n + 1),
        "linear-ramp": lambda n: 2 * (n + 1),
        "cubic": lambda n: 2 * (n + 1),
        "cubic-spaced": lambda n: n + 2,
    }
    for n in (4, 16, 30):
        samples = _samples("runge", n)
        for method in ALL_METHODS:
            net = build_network(method, samples)
            want = expected[method](n)
            assert net.width == want, (
                "%s at n=%d has %d neurons, expected %d"
                % (method, n, net.width, want)
            )
    report("PASS criterion 10: widths N, 4(N+1), 2(N+1), 2(N+1), N+2 "
           "audited at N in {4, 16, 30}")
