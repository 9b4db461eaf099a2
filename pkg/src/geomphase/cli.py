"""Command-line front-end: run configured experiments, list the registry,
and run the built-in selftest.

Exit codes: 0 success, 2 configuration/schema problem, 3 numerical error
reported by a module, 1 anything unexpected.  Errors are emitted as a
single JSON record on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import GeomPhaseError, SchemaError
from .experiments import list_experiments, run

__all__ = ["main", "selftest"]


def _error_record(exc, experiment=None):
    record = {"error": type(exc).__name__, "message": str(exc)}
    if experiment:
        record["experiment"] = experiment
    print(json.dumps(record), file=sys.stderr)


def _cmd_run(args):
    try:
        with open(args.config, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError as exc:
        _error_record(exc)
        return 2
    except tomllib.TOMLDecodeError as exc:
        _error_record(SchemaError("config is not valid TOML: %s" % exc))
        return 2
    try:
        table, cfg = run(raw, seed=args.seed, workers=args.workers, output=args.out)
    except SchemaError as exc:
        _error_record(exc)
        return 2
    except GeomPhaseError as exc:
        _error_record(exc, experiment=raw.get("experiment"))
        return 3
    path = table.write_csv(cfg.output)
    print("%s: %d rows -> %s" % (cfg.experiment, len(table.rows), path))
    return 0


def _cmd_list(args):
    print(json.dumps(list_experiments(), indent=2))
    return 0


def _check(name, ok, detail):
    status = "PASS" if ok else "FAIL"
    print("[%s] %s: %s" % (status, name, detail))
    return ok


def selftest():
    """End-to-end checks of the headline phase computations.

    Covers the discrete octant phase and its dense-loop limit, the sphere
    curvature at random base points, gauge invariance under random
    rephasings, and the interferometer fringe law on random configs.
    """
    from .abelian import (
        TwoParamFamily,
        geodesic_polygon_path,
        geometric_phase_integral,
        pancharatnam_phase,
        plaquette_curvature,
    )
    from .adiabatic import berry_phase, eigenframe
    from .interferometer import MZConfig, extract_phase_visibility, fringe_scan, intensity
    from .qcore import DensityMatrix, ket, state_from_bloch, wrap_angle
    from .adiabatic import _cone_hamiltonian

    ok = True
    t_start = time.time()

    octant = [ket(1, 0), ket(1, 1), ket(1, 1j)]
    phase = pancharatnam_phase(octant).radians
    ok &= _check(
        "octant discrete phase",
        abs(phase - np.pi / 4) < 1e-12,
        "phase = %.15f, target pi/4, deviation %.2e" % (phase, abs(phase - np.pi / 4)),
    )
    loop = geometric_phase_integral(geodesic_polygon_path(octant, 10000)).phase.radians
    ok &= _check(
        "octant dense loop",
        abs(loop - np.pi / 4) < 1e-4,
        "phase = %.10f, deviation %.2e" % (loop, abs(loop - np.pi / 4)),
    )

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
    ok &= _check("sphere curvature", worst < 1e-3, "worst |K - 1| = %.2e" % worst)

    base = pancharatnam_phase(octant).radians
    frame = eigenframe(_cone_hamiltonian(np.pi / 3, 1.0, 1.0), 512)
    gamma0 = berry_phase(frame, 1).radians
    worst_p = worst_b = 0.0
    for _ in range(1000):
        rephased = [s.vector * np.exp(1j * rng.uniform(-np.pi, np.pi)) for s in octant]
        worst_p = max(worst_p, abs(pancharatnam_phase(rephased).radians - base))
        vecs = frame.vectors * np.exp(
            1j * rng.uniform(-np.pi, np.pi, frame.n_samples)
        )[:, None, None]
        from .adiabatic import EigenFrame

        frame_r = EigenFrame(frame.params, frame.energies, vecs, closed=True)
        dev = abs(wrap_angle(berry_phase(frame_r, 1).radians - gamma0))
        worst_b = max(worst_b, dev)
    ok &= _check(
        "gauge invariance",
        worst_p < 1e-9 and worst_b < 1e-9,
        "discrete %.2e, loop integral %.2e over 1000 rephasings" % (worst_p, worst_b),
    )

    def haar(n, rng):
        z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    worst_law = worst_fit = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 5))
        u = haar(n, rng)
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rho = a @ a.conj().T
        rho = DensityMatrix(rho / np.trace(rho))
        trace = complex(np.trace(u @ rho.matrix))
        chis = np.linspace(0.0, 2.0 * np.pi, 24)
        for chi in chis[::6]:
            law = 0.5 * (1.0 + abs(trace) * np.cos(chi - np.angle(trace)))
            worst_law = max(worst_law, abs(intensity(MZConfig(chi, u, rho)) - law))
        if abs(trace) > 1e-9:
            fitted, vis = extract_phase_visibility(fringe_scan(u, rho, chis))
            worst_fit = max(
                worst_fit,
                abs(wrap_angle(fitted.radians - np.angle(trace))),
                abs(vis - abs(trace)),
            )
    ok &= _check(
        "fringe law",
        worst_law < 1e-9 and worst_fit < 1e-6,
        "law %.2e, fit %.2e over 200 random configs" % (worst_law, worst_fit),
    )

    print("selftest %s in %.1f s" % ("passed" if ok else "FAILED", time.time() - t_start))
    return ok


def _cmd_selftest(args):
    return 0 if selftest() else 1


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="geomphase",
        description="geometric phase experiments: batch runner and selftest",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a TOML config")
    p_run.add_argument("config", help="path to the config file")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--workers", type=int, default=None, help="override worker count")
    p_run.add_argument("--out", default=None, help="override the output path")
    p_run.set_defaults(func=_cmd_run)

    p_list = sub.add_parser("list", help="list experiments and schemas as JSON")
    p_list.set_defaults(func=_cmd_list)

    p_self = sub.add_parser("selftest", help="run the built-in acceptance checks")
    p_self.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
