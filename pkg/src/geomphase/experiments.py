"""Named batch experiments: strict config schemas, deterministic runners,
and CSV result tables with reproducibility metadata.

A configuration is a TOML document with the top-level keys ``experiment``
(registry name), ``output`` (CSV path), ``seed``, ``workers`` and a
``params`` table validated strictly against the experiment's schema;
unknown keys are rejected.  Sweeps are written as inline tables
``{start, stop, count}`` and expand to inclusive linspace grids.
"""

from __future__ import annotations

import datetime
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .abelian import TwoParamFamily, pancharatnam_phase, plaquette_curvature
from .adiabatic import spin_half_cone_experiment
from .compiler import (
    CompileSettings,
    compile_rotation,
    default_circle_family,
    noise_robustness,
)
from .errors import SchemaError
from .foucault import (
    PendulumParams,
    foucault_closed_form,
    foucault_integrate,
    precession_angle,
)
from .gates import OracleSpec, ab_phase, deutsch, deutsch_geometric
from .holonomy import circle_schedule, usb_gamma_closed_form, usb_holonomy
from .interferometer import extract_phase_visibility, fringe_scan
from .qcore import DensityMatrix, state_from_bloch

__all__ = [
    "ExperimentConfig",
    "ResultTable",
    "ParamSpec",
    "list_experiments",
    "run",
    "EXPERIMENTS",
]

_TOP_LEVEL_KEYS = {"experiment", "output", "seed", "workers", "params"}


@dataclass(frozen=True)
class ParamSpec:
    """Schema entry for one experiment parameter."""

    kind: str  # float | int | str | bool | floats | sweep | states
    required: bool = False
    default: object = None
    description: str = ""


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated run request."""

    experiment: str
    params: dict
    output: str = "results.csv"
    seed: int = 0
    workers: int = 1

    @classmethod
    def from_dict(cls, raw):
        if not isinstance(raw, dict):
            raise SchemaError("config must be a table")
        unknown = set(raw) - _TOP_LEVEL_KEYS
        if unknown:
            raise SchemaError("unknown top-level keys: %s" % sorted(unknown))
        name = raw.get("experiment")
        if not isinstance(name, str) or name not in EXPERIMENTS:
            raise SchemaError(
                "unknown experiment %r; valid names: %s"
                % (name, ", ".join(EXPERIMENTS))
            )
        seed = raw.get("seed", 0)
        workers = raw.get("workers", 1)
        output = raw.get("output", "results.csv")
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise SchemaError("seed must be an integer")
        if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
            raise SchemaError("workers must be a positive integer")
        if not isinstance(output, str):
            raise SchemaError("output must be a path string")
        params = _validate_params(name, raw.get("params", {}))
        return cls(experiment=name, params=params, output=output, seed=seed, workers=workers)


@dataclass
class ResultTable:
    """A rectangular result set with a reproducibility metadata block."""

    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def write_csv(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            for key in sorted(self.metadata):
                fh.write("# %s = %s\n" % (key, self.metadata[key]))
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_format_cell(cell) for cell in row) + "\n")
        return path

    def column(self, name):
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def _format_cell(cell):
    if isinstance(cell, bool):
        return "true" if cell else "false"
    if isinstance(cell, (int, np.integer)):
        return str(int(cell))
    if isinstance(cell, (float, np.floating)):
        return "%.17g" % float(cell)
    if isinstance(cell, complex):
        return "%.17g%+.17gj" % (cell.real, cell.imag)
    return str(cell)


def _is_number(x):
    return isinstance(x, (int, float, np.integer, np.floating)) and not isinstance(x, bool)


def _expand_sweep(value, name):
    if isinstance(value, dict):
        unknown = set(value) - {"start", "stop", "count"}
        if unknown:
            raise SchemaError("sweep %r has unknown keys %s" % (name, sorted(unknown)))
        try:
            start, stop, count = value["start"], value["stop"], value["count"]
        except KeyError as missing:
            raise SchemaError("sweep %r needs start, stop, count" % name) from missing
        if not (_is_number(start) and _is_number(stop)):
            raise SchemaError("sweep %r bounds must be numbers" % name)
        if not isinstance(count, int) or isinstance(count, bool) or count < 2:
            raise SchemaError("sweep %r count must be an integer >= 2" % name)
        return np.linspace(float(start), float(stop), count)
    if _is_number(value):
        return np.array([float(value)])
    raise SchemaError("parameter %r must be a number or a {start, stop, count} sweep" % name)


def _coerce(name, spec, value):
    kind = spec.kind
    if kind == "float":
        if not _is_number(value):
            raise SchemaError("parameter %r must be a number" % name)
        return float(value)
    if kind == "int":
        if not isinstance(value, int) or isinstance(value, bool):
            raise SchemaError("parameter %r must be an integer" % name)
        return int(value)
    if kind == "str":
        if not isinstance(value, str):
            raise SchemaError("parameter %r must be a string" % name)
        return value
    if kind == "bool":
        if not isinstance(value, bool):
            raise SchemaError("parameter %r must be a boolean" % name)
        return value
    if kind == "floats":
        if not isinstance(value, (list, tuple)) or not value or not all(
            _is_number(v) for v in value
        ):
            raise SchemaError("parameter %r must be a nonempty list of numbers" % name)
        return [float(v) for v in value]
    if kind == "sweep":
        return _expand_sweep(value, name)
    if kind == "states":
        return _coerce_states(name, value)
    raise SchemaError("unknown schema kind %r" % kind)


def _coerce_states(name, value):
    if isinstance(value, str):
        if value == "octant":
            return [
                np.array([1.0, 0.0], dtype=complex),
                np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0),
                np.array([1.0, 1.0j], dtype=complex) / np.sqrt(2.0),
            ]
        raise SchemaError("unknown state preset %r for %r" % (value, name))
    if not isinstance(value, (list, tuple)) or len(value) < 2:
        raise SchemaError("parameter %r needs at least two states" % name)
    states = []
    for k, entry in enumerate(value):
        if not isinstance(entry, (list, tuple)) or len(entry) < 2:
            raise SchemaError("state %d of %r must list [re, im] pairs" % (k, name))
        amps = []
        for pair in entry:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2 or not all(
                _is_number(x) for x in pair
            ):
                raise SchemaError("state %d of %r must list [re, im] pairs" % (k, name))
            amps.append(complex(pair[0], pair[1]))
        vec = np.array(amps)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise SchemaError("state %d of %r is the zero vector" % (k, name))
        states.append(vec / norm)
    return states


def _validate_params(name, raw_params):
    if not isinstance(raw_params, dict):
        raise SchemaError("params must be a table")
    schema = EXPERIMENTS[name].schema
    unknown = set(raw_params) - set(schema)
    if unknown:
        raise SchemaError(
            "unknown parameters for %s: %s (allowed: %s)"
            % (name, sorted(unknown), sorted(schema))
        )
    params = {}
    for key, spec in schema.items():
        if key in raw_params:
            params[key] = _coerce(key, spec, raw_params[key])
        elif spec.required:
            raise SchemaError("missing required parameter %r for %s" % (key, name))
        elif spec.default is not None:
            params[key] = _coerce(key, spec, spec.default)
        else:
            params[key] = None
    return params


def _map_ordered(fn, items, workers):
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _density_preset(spec_str_or_list):
    presets = {
        "mixed": np.eye(2) / 2.0,
        "zero": np.diag([1.0, 0.0]),
        "one": np.diag([0.0, 1.0]),
        "plus": np.full((2, 2), 0.5),
    }
    if isinstance(spec_str_or_list, str):
        if spec_str_or_list not in presets:
            raise SchemaError("unknown rho0 preset %r" % spec_str_or_list)
        return DensityMatrix(presets[spec_str_or_list])
    bloch = np.asarray(spec_str_or_list, dtype=float)
    if bloch.shape != (3,):
        raise SchemaError("rho0 must be a preset name or a 3-component Bloch vector")
    from .qcore import density_from_bloch

    return density_from_bloch(bloch)


def _internal_gate(params):
    named = {
        "identity": np.eye(2, dtype=complex),
        "sx": np.array([[0, 1], [1, 0]], dtype=complex),
        "sy": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "sz": np.diag([1.0, -1.0]).astype(complex),
        "hadamard": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    }
    gate_name = params.get("u_gate")
    if gate_name:
        if gate_name not in named:
            raise SchemaError("unknown u_gate %r" % gate_name)
        return named[gate_name]
    return np.diag([1.0, np.exp(1j * params["u_phase"])])


# ---------------------------------------------------------------------------
# experiment runners


def _run_pancharatnam(params, seed, workers):
    states = params["states"]
    phase = pancharatnam_phase(states)
    rows = [(len(states), phase.radians)]
    gauge_trials = params["gauge_trials"]
    columns = ["n_states", "phase_radians"]
    if gauge_trials:
        rng = np.random.default_rng(seed)
        deviations = []
        for _ in range(gauge_trials):
            rephased = [
                s * np.exp(1j * rng.uniform(-np.pi, np.pi)) for s in states
            ]
            deviations.append(abs(pancharatnam_phase(rephased).radians - phase.radians))
        columns.append("max_gauge_deviation")
        rows = [(len(states), phase.radians, max(deviations))]
    return ResultTable(columns, rows)


def _run_curvature(params, seed, workers):
    rng = np.random.default_rng(seed)
    family = TwoParamFamily(
        lambda phi, z: state_from_bloch(
            (
                np.sqrt(max(1.0 - z * z, 0.0)) * np.cos(phi),
                np.sqrt(max(1.0 - z * z, 0.0)) * np.sin(phi),
                z,
            )
        )
    )
    delta = params["delta"]
    points = [
        (rng.uniform(0.0, 2.0 * np.pi), rng.uniform(-0.9, 0.9))
        for _ in range(params["points"])
    ]
    values = _map_ordered(
        lambda pt: plaquette_curvature(family, pt, delta), points, workers
    )
    rows = [(phi, z, delta, k) for (phi, z), k in zip(points, values)]
    return ResultTable(["azimuth", "z", "delta", "curvature"], rows)


def _run_berry_cone(params, seed, workers):
    report = spin_half_cone_experiment(
        params["theta"],
        params["duration"],
        params["steps"],
        b_field=params["b_field"],
        frame_samples=params["frame_samples"],
    )
    rows = [
        (
            params["theta"],
            report.berry_phase,
            report.dynamical_phase,
            report.geometric_phase,
            report.pancharatnam,
            report.adiabaticity_residual,
            report.solid_angle,
        )
    ]
    return ResultTable(
        [
            "theta",
            "berry_phase",
            "dynamical_phase",
            "geometric_phase",
            "pancharatnam",
            "adiabaticity_residual",
            "solid_angle",
        ],
        rows,
    )


def _run_foucault(params, seed, workers):
    p = PendulumParams(
        omega=params["omega"],
        rotation_rate=params["rotation_rate"],
        colatitude=params["colatitude"],
    )
    traj = foucault_integrate(p, params["x0"], params["duration"], params["steps"])
    prec = precession_angle(traj)
    energy = traj.energy(p.omega)
    drift = float(np.max(np.abs(energy - energy[0])) / energy[0]) if energy[0] else 0.0
    circ = foucault_integrate(
        p,
        params["x0"],
        params["duration"],
        params["steps"],
        v0=(0.0, -(p.omega + p.coriolis) * params["x0"]),
    )
    closed = foucault_closed_form(p, params["x0"], circ.times)
    dev = float(np.max(np.abs(circ.positions_complex() - closed)) / params["x0"])
    rows = [
        (
            params["colatitude"],
            prec,
            abs(p.coriolis) * params["duration"],
            drift,
            dev,
        )
    ]
    return ResultTable(
        [
            "colatitude",
            "precession_angle",
            "expected_angle",
            "energy_drift",
            "closed_form_max_dev",
        ],
        rows,
    )


def _run_mzi(params, seed, workers):
    chis = params["chi"]
    if chis.size < 8:
        raise SchemaError("chi sweep needs at least 8 points")
    u = _internal_gate(params)
    rho = _density_preset(
        params["rho0"] if params["rho0"] is not None else "mixed"
    )
    from .interferometer import FringeScan, MZConfig, intensity

    values = _map_ordered(
        lambda chi: intensity(MZConfig(chi, u, rho)), list(chis), workers
    )
    scan = FringeScan(chis, values)
    phase, visibility = extract_phase_visibility(scan)
    rows = [
        (c, i, phase.radians, visibility)
        for c, i in zip(scan.chis, scan.intensities)
    ]
    return ResultTable(
        ["chi", "intensity", "fitted_phase", "fitted_visibility"], rows
    )


def _run_usb_holonomy(params, seed, workers):
    sched = circle_schedule(
        params["center_p"], params["center_s"], params["radius"], params["q"]
    )
    gamma = usb_gamma_closed_form(sched, params["steps"])
    hol = usb_holonomy(sched, params["steps"])
    angle = hol.rotation_angle()
    rows = [
        (
            params["center_p"],
            params["center_s"],
            params["radius"],
            params["q"],
            gamma,
            angle,
            abs(angle - gamma),
        )
    ]
    return ResultTable(
        [
            "center_p",
            "center_s",
            "radius",
            "q",
            "gamma_closed_form",
            "holonomy_angle",
            "difference",
        ],
        rows,
    )


def _run_compile_loop(params, seed, workers):
    settings = CompileSettings(
        tolerance=params["tolerance"],
        max_evaluations=params["max_evaluations"],
        restarts=params["restarts"],
        seed=seed,
        verify_steps=params["verify_steps"],
    )
    family = default_circle_family(q=params["q"])
    result = compile_rotation(params["target"], family, settings)
    rows = [
        (
            params["target"],
            result.achieved,
            result.residual,
            result.verification,
            result.converged,
            result.n_evaluations,
            *result.params,
        )
    ]
    return ResultTable(
        [
            "target",
            "achieved",
            "residual",
            "verification",
            "converged",
            "n_evaluations",
            "center_p",
            "center_s",
            "radius_fraction",
        ],
        rows,
    )


def _run_noise(params, seed, workers):
    sched = circle_schedule(
        params["center_p"], params["center_s"], params["radius"], params["q"]
    )
    report = noise_robustness(
        sched,
        params["sigmas"],
        trials=params["trials"],
        seed=seed,
        samples=params["samples"],
    )
    rows = [
        (s, m, sd, int(x), bool(v), report.slope)
        for s, m, sd, x, v in zip(
            report.sigmas,
            report.mean_abs_error,
            report.std_error,
            report.excluded,
            report.valid,
        )
    ]
    return ResultTable(
        ["sigma", "mean_abs_error", "std_error", "excluded", "valid", "slope"],
        rows,
    )


def _oracle_list(params):
    if params["f0"] is None or params["f1"] is None:
        return [OracleSpec(a, b) for a in (0, 1) for b in (0, 1)]
    return [OracleSpec(params["f0"], params["f1"])]


def _run_deutsch(params, seed, workers):
    rows = []
    for oracle in _oracle_list(params):
        result = deutsch(oracle)
        rows.append((oracle.f0, oracle.f1, result.classification, result.probability))
    return ResultTable(["f0", "f1", "classification", "probability"], rows)


def _run_deutsch_geometric(params, seed, workers):
    rows = []
    for oracle in _oracle_list(params):
        result = deutsch_geometric(
            oracle, duration=params["duration"], b_field=params["b_field"], seed=seed
        )
        rows.append(
            (
                oracle.f0,
                oracle.f1,
                result.classification,
                result.success_probability,
                result.branch_phases[0],
                result.branch_phases[1],
            )
        )
    return ResultTable(
        ["f0", "f1", "classification", "success_probability", "phase_0", "phase_1"],
        rows,
    )


def _run_ab_phase(params, seed, workers):
    fluxes = params["flux"]
    winding = params["winding"]
    values = _map_ordered(lambda f: ab_phase(f, winding), list(fluxes), workers)
    rows = [(f, winding, v.real, v.imag) for f, v in zip(fluxes, values)]
    return ResultTable(["flux", "winding", "re", "im"], rows)


@dataclass(frozen=True)
class Experiment:
    name: str
    description: str
    schema: dict
    runner: object


EXPERIMENTS = {}


def _register(name, description, schema, runner):
    EXPERIMENTS[name] = Experiment(name, description, schema, runner)


_register(
    "pancharatnam",
    "cyclic overlap phase of a state sequence, with optional gauge sweep",
    {
        "states": ParamSpec("states", required=True, description="state list or preset 'octant'"),
        "gauge_trials": ParamSpec("int", default=0, description="random rephasings to test invariance"),
    },
    _run_pancharatnam,
)
_register(
    "curvature",
    "plaquette curvature of the Bloch sphere at random base points",
    {
        "points": ParamSpec("int", default=20, description="number of random base points"),
        "delta": ParamSpec("float", default=1e-2, description="plaquette side"),
    },
    _run_curvature,
)
_register(
    "berry-cone",
    "driven spin-1/2 cone: Berry, dynamical and trajectory phases",
    {
        "theta": ParamSpec("float", required=True, description="cone polar angle"),
        "duration": ParamSpec("float", default=200.0),
        "steps": ParamSpec("int", default=20000),
        "b_field": ParamSpec("float", default=1.0),
        "frame_samples": ParamSpec("int", default=4096),
    },
    _run_berry_cone,
)
_register(
    "foucault",
    "pendulum precession vs latitude and closed-form comparison",
    {
        "omega": ParamSpec("float", default=2.0 * np.pi),
        "rotation_rate": ParamSpec("float", default=0.04 * np.pi),
        "colatitude": ParamSpec("float", required=True),
        "x0": ParamSpec("float", default=1.0),
        "duration": ParamSpec("float", default=50.0),
        "steps": ParamSpec("int", default=20000),
    },
    _run_foucault,
)
_register(
    "mzi",
    "two-port fringe scan: intensity law and fitted phase/visibility",
    {
        "chi": ParamSpec("sweep", required=True, description="arm phase grid"),
        "u_phase": ParamSpec("float", default=0.0, description="internal diag(1, e^{i phi})"),
        "u_gate": ParamSpec("str", description="named internal gate overriding u_phase"),
        "rho0": ParamSpec("str", default="mixed", description="internal input preset"),
    },
    _run_mzi,
)
_register(
    "usb-holonomy",
    "dark-state loop: closed-form angle vs path-ordered transport",
    {
        "center_p": ParamSpec("float", default=2.0),
        "center_s": ParamSpec("float", default=2.0),
        "radius": ParamSpec("float", default=0.5),
        "q": ParamSpec("float", default=1.0),
        "steps": ParamSpec("int", default=100000),
    },
    _run_usb_holonomy,
)
_register(
    "compile-loop",
    "compile a target rotation angle into a control loop",
    {
        "target": ParamSpec("float", required=True),
        "tolerance": ParamSpec("float", default=1e-3),
        "max_evaluations": ParamSpec("int", default=4000),
        "restarts": ParamSpec("int", default=8),
        "verify_steps": ParamSpec("int", default=100000),
        "q": ParamSpec("float", default=0.5),
    },
    _run_compile_loop,
)
_register(
    "noise-robustness",
    "loop-angle error statistics under pinned control noise",
    {
        "sigmas": ParamSpec("floats", default=[0.002, 0.005, 0.01, 0.02, 0.04]),
        "trials": ParamSpec("int", default=1000),
        "samples": ParamSpec("int", default=4096),
        "center_p": ParamSpec("float", default=2.0),
        "center_s": ParamSpec("float", default=2.0),
        "radius": ParamSpec("float", default=0.5),
        "q": ParamSpec("float", default=1.0),
    },
    _run_noise,
)
_register(
    "deutsch",
    "one-call constant-vs-varying classification (exact gates)",
    {
        "f0": ParamSpec("int", description="omit both bits to run all four oracles"),
        "f1": ParamSpec("int"),
    },
    _run_deutsch,
)
_register(
    "deutsch-geometric",
    "one-call classification with geometric oracle and holonomic gates",
    {
        "f0": ParamSpec("int"),
        "f1": ParamSpec("int"),
        "duration": ParamSpec("float", default=200.0),
        "b_field": ParamSpec("float", default=1.0),
    },
    _run_deutsch_geometric,
)
_register(
    "ab-phase",
    "topological phase factor exp(-i n flux) over a flux grid",
    {
        "flux": ParamSpec("sweep", required=True),
        "winding": ParamSpec("int", default=1),
    },
    _run_ab_phase,
)


def list_experiments():
    """Registry listing with machine-readable parameter schemas."""
    listing = []
    for name, exp in EXPERIMENTS.items():
        listing.append(
            {
                "name": name,
                "description": exp.description,
                "params": {
                    key: {
                        "kind": spec.kind,
                        "required": spec.required,
                        "default": spec.default,
                        "description": spec.description,
                    }
                    for key, spec in exp.schema.items()
                },
            }
        )
    return listing


def run(raw_config, seed=None, workers=None, output=None):
    """Validate a raw config dict, run the experiment, return the table.

    Overrides (seed, workers, output) take precedence over config fields.
    The table's metadata echoes the effective configuration so a run can
    be reproduced exactly.
    """
    cfg = ExperimentConfig.from_dict(raw_config)
    if seed is not None:
        cfg = ExperimentConfig(cfg.experiment, cfg.params, cfg.output, int(seed), cfg.workers)
    if workers is not None:
        cfg = ExperimentConfig(cfg.experiment, cfg.params, cfg.output, cfg.seed, int(workers))
    if output is not None:
        cfg = ExperimentConfig(cfg.experiment, cfg.params, str(output), cfg.seed, cfg.workers)
    table = EXPERIMENTS[cfg.experiment].runner(cfg.params, cfg.seed, cfg.workers)
    echo = dict(raw_config)
    echo["seed"] = cfg.seed
    echo["workers"] = cfg.workers
    echo["output"] = cfg.output
    table.metadata.update(
        {
            "version": __version__,
            "experiment": cfg.experiment,
            "seed": cfg.seed,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "config": json.dumps(echo, sort_keys=True, default=_json_default),
        }
    )
    return table, cfg


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError("cannot serialize %r" % type(obj))
