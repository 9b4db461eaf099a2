"""Acceptance suite: every headline criterion at its stated tolerance.

Each test prints one pass/fail line (visible with ``pytest -v -s`` or via
``geomphase selftest`` for the subset it covers).
"""

import time

import numpy as np
import pytest

from geomphase import (
    CompileSettings,
    DensityMatrix,
    EigenFrame,
    MZConfig,
    OracleSpec,
    TwoParamFamily,
    circle_schedule,
    compile_rotation,
    deutsch,
    deutsch_geometric,
    eigenframe,
    extract_phase_visibility,
    fringe_scan,
    gate_fidelity,
    geodesic_polygon_path,
    geometric_phase_gate,
    geometric_phase_integral,
    intensity,
    ket,
    noise_robustness,
    pancharatnam_phase,
    plaquette_curvature,
    spin_half_cone_experiment,
    state_from_bloch,
    usb_full_evolution_check,
    usb_gamma_closed_form,
    usb_holonomy,
    wrap_angle,
)
from geomphase.adiabatic import _cone_hamiltonian, berry_phase
from geomphase.experiments import run
from geomphase.foucault import (
    PendulumParams,
    foucault_closed_form,
    foucault_integrate,
    precession_angle,
)
from geomphase.qcore import SIGMA_Z

from helpers import haar_unitary, phase_dist, random_density

OCTANT = [ket(1, 0), ket(1, 1), ket(1, 1j)]


def report(criterion, ok, detail):
    print("[%s] %s: %s" % ("PASS" if ok else "FAIL", criterion, detail))
    assert ok, "%s: %s" % (criterion, detail)


def test_criterion_01_octant_phase():
    start = time.time()
    discrete = pancharatnam_phase(OCTANT).radians
    dense = geometric_phase_integral(geodesic_polygon_path(OCTANT, 10000)).phase.radians
    elapsed = time.time() - start
    ok = (
        abs(discrete - np.pi / 4) < 1e-12
        and abs(dense - np.pi / 4) < 1e-4
        and elapsed < 1.0
    )
    report(
        "criterion 1 (octant phase)",
        ok,
        "discrete dev %.2e, dense dev %.2e, %.2f s"
        % (abs(discrete - np.pi / 4), abs(dense - np.pi / 4), elapsed),
    )


def test_criterion_02_bloch_curvature():
    start = time.time()
    family = TwoParamFamily(
        lambda phi, z: state_from_bloch(
            (
                np.sqrt(max(1.0 - z * z, 0.0)) * np.cos(phi),
                np.sqrt(max(1.0 - z * z, 0.0)) * np.sin(phi),
                z,
            )
        )
    )
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(20):
        point = (rng.uniform(0, 2 * np.pi), rng.uniform(-0.9, 0.9))
        worst = max(worst, abs(plaquette_curvature(family, point, 1e-2) - 1.0))
    elapsed = time.time() - start
    ok = worst < 1e-3 and elapsed < 1.0
    report(
        "criterion 2 (unit sphere curvature)",
        ok,
        "worst |K - 1| = %.2e over 20 base points, %.2f s" % (worst, elapsed),
    )


def test_criterion_03_gauge_invariance():
    start = time.time()
    rng = np.random.default_rng(1)
    base_p = pancharatnam_phase(OCTANT).radians
    frame = eigenframe(_cone_hamiltonian(np.pi / 3, 1.0, 1.0), 512)
    base_b = berry_phase(frame, 1).radians
    worst_p = worst_b = 0.0
    for _ in range(1000):
        rephased = [s.vector * np.exp(1j * rng.uniform(-np.pi, np.pi)) for s in OCTANT]
        worst_p = max(worst_p, abs(pancharatnam_phase(rephased).radians - base_p))
        vecs = frame.vectors * np.exp(
            1j * rng.uniform(-np.pi, np.pi, frame.n_samples)
        )[:, None, None]
        regauged = EigenFrame(frame.params, frame.energies, vecs, closed=True)
        worst_b = max(worst_b, phase_dist(berry_phase(regauged, 1).radians, base_b))
    elapsed = time.time() - start
    ok = worst_p < 1e-9 and worst_b < 1e-9 and elapsed < 5.0
    report(
        "criterion 3 (gauge invariance)",
        ok,
        "discrete %.2e, loop integral %.2e over 1000 rephasings, %.2f s"
        % (worst_p, worst_b, elapsed),
    )


def test_criterion_04_adiabatic_three_way():
    start = time.time()
    base = spin_half_cone_experiment(np.pi / 2, 200.0, 20000)
    doubled = spin_half_cone_experiment(np.pi / 2, 400.0, 40000)
    values = (base.berry_phase, base.pancharatnam, base.geometric_phase)
    pairwise = max(
        phase_dist(values[i], values[j])
        for i in range(3)
        for j in range(i + 1, 3)
    )
    err_base = phase_dist(base.geometric_phase, -np.pi)
    err_doubled = phase_dist(doubled.geometric_phase, -np.pi)
    elapsed = time.time() - start
    ok = pairwise < 0.05 and err_doubled <= err_base / 2.0 and elapsed < 30.0
    report(
        "criterion 4 (adiabatic three-way)",
        ok,
        "pairwise %.3e, error %.3e -> %.3e on doubling, %.1f s"
        % (pairwise, err_base, err_doubled, elapsed),
    )


def test_criterion_05_interferometer_law():
    start = time.time()
    rng = np.random.default_rng(2)
    chis = np.linspace(0.0, 2 * np.pi, 24)
    worst_law = worst_fit = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 5))
        u = haar_unitary(n, rng)
        rho = random_density(n, rng)
        trace = complex(np.trace(u @ rho))
        for chi in chis[::4]:
            law = 0.5 * (1 + abs(trace) * np.cos(chi - np.angle(trace)))
            worst_law = max(
                worst_law, abs(intensity(MZConfig(chi, u, DensityMatrix(rho))) - law)
            )
        if abs(trace) > 1e-9:
            phase, vis = extract_phase_visibility(fringe_scan(u, DensityMatrix(rho), chis))
            worst_fit = max(
                worst_fit,
                abs(wrap_angle(phase.radians - np.angle(trace))),
                abs(vis - abs(trace)),
            )
    elapsed = time.time() - start
    ok = worst_law < 1e-9 and worst_fit < 1e-6 and elapsed < 10.0
    report(
        "criterion 5 (interferometer law)",
        ok,
        "law dev %.2e, fit dev %.2e over 200 configs, %.1f s"
        % (worst_law, worst_fit, elapsed),
    )


def test_criterion_06_usb_three_way():
    start = time.time()
    loop = circle_schedule(2.0, 2.0, 0.5, 1.0)
    gamma = usb_gamma_closed_form(loop, 100000)
    angle = usb_holonomy(loop, 100000).rotation_angle()
    gap = np.sqrt(np.min(np.sum(loop.controls(np.linspace(0, 1, 256)) ** 2, axis=1)))
    duration = 500.0 / gap
    evolution = usb_full_evolution_check(
        loop, duration, int(duration * 100), holonomy_steps=20000
    )
    elapsed = time.time() - start
    ok = (
        abs(angle - gamma) < 1e-4
        and evolution.frobenius_distance < 0.02
        and evolution.leakage < 1e-3
        and elapsed < 60.0
    )
    report(
        "criterion 6 (dark-state three-way)",
        ok,
        "closed form vs transport %.2e, evolution distance %.2e, leakage %.2e, %.1f s"
        % (abs(angle - gamma), evolution.frobenius_distance, evolution.leakage, elapsed),
    )


def test_criterion_07_gate_synthesis():
    start = time.time()
    settings = CompileSettings(seed=0, restarts=4, max_evaluations=2000, verify_steps=100000)
    compiled = compile_rotation(np.pi / 4, settings=settings)
    gate = geometric_phase_gate(np.pi, duration=200.0, steps=20000)
    fidelity = gate_fidelity(gate.gate.matrix, SIGMA_Z)
    elapsed = time.time() - start
    ok = (
        compiled.residual < 1e-3
        and abs(compiled.achieved - compiled.verification) < 1e-3
        and fidelity > 1 - 0.05
        and elapsed < 120.0
    )
    report(
        "criterion 7 (gate synthesis)",
        ok,
        "residual %.2e, verification gap %.2e, sigma_z fidelity %.6f, %.1f s"
        % (
            compiled.residual,
            abs(compiled.achieved - compiled.verification),
            fidelity,
            elapsed,
        ),
    )


def test_criterion_08_deutsch():
    start = time.time()
    all_exact = all(
        deutsch(OracleSpec(a, b)).probability == 1.0 for a in (0, 1) for b in (0, 1)
    )
    geometric_ok = True
    for a in (0, 1):
        for b in (0, 1):
            result = deutsch_geometric(OracleSpec(a, b), duration=200.0)
            geometric_ok &= result.classification == deutsch(OracleSpec(a, b)).classification
            geometric_ok &= result.success_probability > 0.99
    ladder = [
        deutsch_geometric(OracleSpec(0, 1), duration=T).success_probability
        for T in (150.0, 300.0, 600.0, 1200.0)
    ]
    monotone = all(lo < hi for lo, hi in zip(ladder, ladder[1:]))
    elapsed = time.time() - start
    ok = all_exact and geometric_ok and monotone and elapsed < 120.0
    report(
        "criterion 8 (one-call classification)",
        ok,
        "exact oracles %s, geometric > 0.99 %s, ladder %s monotone %s, %.1f s"
        % (all_exact, geometric_ok, ["%.6f" % s for s in ladder], monotone, elapsed),
    )


def test_criterion_09_foucault():
    start = time.time()
    rate = 0.02 * 2 * np.pi
    rates = []
    cos_thetas = []
    for theta in (0.0, np.pi / 6, np.pi / 3, np.pi / 2):
        params = PendulumParams(omega=2 * np.pi, rotation_rate=rate, colatitude=theta)
        traj = foucault_integrate(params, 1.0, 50.0, 20000)
        rates.append(precession_angle(traj) / 50.0)
        cos_thetas.append(np.cos(theta))
    design = np.vstack([cos_thetas, np.ones(4)]).T
    slope, _ = np.linalg.lstsq(design, np.array(rates), rcond=None)[0]
    slope_err = abs(slope - rate) / rate
    params = PendulumParams(
        omega=2 * np.pi, rotation_rate=2 * np.pi / 50.0, colatitude=np.pi / 3
    )
    traj = foucault_integrate(
        params, 1.0, 10.0, 8000, v0=(0.0, -(params.omega + params.coriolis))
    )
    closed = foucault_closed_form(params, 1.0, traj.times)
    dev = float(np.max(np.abs(traj.positions_complex() - closed)))
    elapsed = time.time() - start
    ok = slope_err < 0.02 and dev < 0.05 and elapsed < 30.0
    report(
        "criterion 9 (pendulum precession)",
        ok,
        "slope error %.4f, closed-form deviation %.4f over 10 periods, %.1f s"
        % (slope_err, dev, elapsed),
    )


def test_criterion_10_noise_robustness():
    start = time.time()
    loop = circle_schedule(2.0, 2.0, 0.5, 1.0)
    sigmas = [0.002, 0.005, 0.01, 0.02, 0.04]
    first = noise_robustness(loop, sigmas, trials=1000, seed=2026)
    second = noise_robustness(loop, sigmas, trials=1000, seed=2026)
    reproducible = np.array_equal(first.mean_abs_error, second.mean_abs_error)
    elapsed = time.time() - start
    ok = 1.5 <= first.slope <= 2.5 and reproducible and elapsed < 120.0
    report(
        "criterion 10 (noise robustness)",
        ok,
        "log-log slope %.3f at 1000 trials/level, reproducible %s, %.1f s"
        % (first.slope, reproducible, elapsed),
    )


def test_criterion_11_cli_reproducibility(tmp_path, capsys):
    from geomphase.cli import selftest

    start = time.time()
    selftest_ok = selftest()
    config = {
        "experiment": "usb-holonomy",
        "seed": 5,
        "params": {"steps": 20000},
    }
    table_a, _ = run(config)
    table_b, _ = run(config)
    numeric_equal = table_a.rows == table_b.rows
    path_a = table_a.write_csv(tmp_path / "a.csv")
    path_b = table_b.write_csv(tmp_path / "b.csv")
    rows_a = [l for l in open(path_a) if not l.startswith("#")]
    rows_b = [l for l in open(path_b) if not l.startswith("#")]
    elapsed = time.time() - start
    ok = selftest_ok and numeric_equal and rows_a == rows_b
    with capsys.disabled():
        report(
            "criterion 11 (reproducibility)",
            ok,
            "selftest %s, rerun identical %s, %.1f s"
            % (selftest_ok, numeric_equal and rows_a == rows_b, elapsed),
        )
