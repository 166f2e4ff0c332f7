"""Command-line surface: scenario runs, parameter sweeps, gauge-invariance
verification campaigns, analytic spin reports and a purification demo.

Scenarios are described by a flat key = value config file (grammar below) or
entirely by flags; flags override file values.  All randomness comes from a
single seeded generator named in the output header, and identical config plus
seed produces byte-identical output files.

Config grammar (one `key = value` per line, '#' starts a comment):

    model       spin | custom-sampled        (default spin)
    mu_b, omega, theta, big_theta            floats (spin parameters)
    steps       integer >= 10                (grid resolution, default 20000)
    horizon     one-period | explicit        (default one-period)
    t_end       float                        (required for explicit horizon)
    weights     comma list, must sum to 1    (default cos^2, sin^2 of big_theta/2)
    states      comma list of selectors      (spin: +,-   custom: basis indices)
    hamiltonian_file  path                   (required for custom-sampled)
    seed        integer                      (default 0; gauge_seed is an alias)
    trials      integer                      (verify-gauge, default 50)
    gauge_scale float                        (verify-gauge harmonic amplitude, default 0.1)
    format      csv | json                   (default csv)
    out         path                         (default stdout)
    workers     integer                      (sweep concurrency, default 1)

Sampled-Hamiltonian file: a header line `dim <d> steps <n>`, then n+1 rows of
2*d*d floats (real/imag pairs, row-major); samples are uniform over the
scenario horizon and interpolated linearly in between.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import spin_model
from .evolution import (
    AmplitudePath,
    HamiltonianTrajectory,
    TimeGrid,
    amplitude_path,
    propagate,
)
from .exceptions import PhaseLabError, UndefinedPhaseError
from .gauge import (
    GaugeFunction,
    apply_gauge,
    frame_from_amplitudes,
    frame_trace,
    holonomy,
)
from .mixed import (
    DensityMatrix,
    Ensemble,
    density_from_ensemble,
    hidden_gauge_transform,
    mixed_dynamical_phase,
    mixed_total_phase,
    purify,
    reduce as reduce_purified,
    singh_phase,
    transform_evolution,
    transport_conditions,
)
from .numerics import wrap_angle
from .phases import geometric_phase_pure, phase_report

DEFAULT_STEPS = 20000
MIN_STEPS = 10

SWEEP_AXES = ("mu_b", "omega", "theta", "big_theta")

SWEEP_COLUMNS = (
    "index",
    "axis_value",
    "mu_b",
    "omega",
    "theta",
    "big_theta",
    "alpha",
    "period",
    "total_plus",
    "dynamical_plus",
    "geometric_plus",
    "overlap_plus",
    "residual_plus",
    "total_minus",
    "dynamical_minus",
    "geometric_minus",
    "overlap_minus",
    "residual_minus",
    "gamma_total",
    "visibility",
    "singh_phase",
    "mixed_dynamical",
    "weak_residual",
    "geometric_exact_plus",
    "geometric_exact_minus",
    "solid_angle",
    "interference",
)


class ConfigError(PhaseLabError, ValueError):
    """Scenario configuration is malformed; carries a location hint."""


@dataclass
class ScenarioConfig:
    model: str = "spin"
    mu_b: float = 1.0
    omega: float = 1.0
    theta: float = np.pi / 3
    big_theta: float = np.pi / 4
    steps: int = DEFAULT_STEPS
    horizon: str = "one-period"
    t_end: float | None = None
    weights: tuple | None = None
    states: tuple = ("+", "-")
    hamiltonian_file: str | None = None
    seed: int = 0
    trials: int = 50
    gauge_scale: float = 0.1
    format: str = "csv"
    out: str | None = None
    workers: int = 1

    def resolved_weights(self) -> np.ndarray:
        if self.weights is not None:
            return np.asarray(self.weights, dtype=float)
        c = np.cos(0.5 * self.big_theta) ** 2
        return np.array([c, 1.0 - c])


_CONFIG_TYPES = {
    "model": str,
    "mu_b": float,
    "omega": float,
    "theta": float,
    "big_theta": float,
    "steps": int,
    "horizon": str,
    "t_end": float,
    "weights": "floats",
    "states": "strings",
    "hamiltonian_file": str,
    "seed": int,
    "gauge_seed": int,
    "trials": int,
    "gauge_scale": float,
    "format": str,
    "out": str,
    "workers": int,
}


def parse_config_file(path: str) -> ScenarioConfig:
    cfg = ScenarioConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise ConfigError(f"{path}:{lineno}: unknown field {key!r}")
        kind = _CONFIG_TYPES[key]
        if key == "gauge_seed":  # accepted alias for the RNG seed
            key = "seed"
        try:
            if kind == "floats":
                parsed = tuple(float(v) for v in value.split(","))
            elif kind == "strings":
                parsed = tuple(v.strip() for v in value.split(","))
            elif kind is int:
                parsed = int(value)
            elif kind is float:
                parsed = float(value)
            else:
                parsed = value
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: field {key!r}: {exc}") from exc
        setattr(cfg, key, parsed)
    return cfg


def validate_config(cfg: ScenarioConfig) -> ScenarioConfig:
    if cfg.model not in ("spin", "custom-sampled"):
        raise ConfigError(f"field 'model': unknown model {cfg.model!r}")
    if cfg.steps < MIN_STEPS:
        raise ConfigError(f"field 'steps': need at least {MIN_STEPS}, got {cfg.steps}")
    if cfg.horizon not in ("one-period", "explicit"):
        raise ConfigError(f"field 'horizon': unknown mode {cfg.horizon!r}")
    if cfg.horizon == "explicit" and cfg.t_end is None:
        raise ConfigError("field 't_end': required for an explicit horizon")
    if cfg.model == "custom-sampled":
        if cfg.hamiltonian_file is None:
            raise ConfigError("field 'hamiltonian_file': required for custom-sampled model")
        if cfg.horizon != "explicit":
            raise ConfigError("field 'horizon': custom-sampled model needs an explicit t_end")
    if cfg.model == "spin" and cfg.horizon == "one-period" and cfg.omega == 0.0:
        raise ConfigError("field 'omega': one-period horizon undefined at omega = 0")
    weights = cfg.resolved_weights()
    if len(weights) != len(cfg.states):
        raise ConfigError(
            f"field 'weights': {len(weights)} weights for {len(cfg.states)} states"
        )
    if np.min(weights) < 0.0 or abs(float(weights.sum()) - 1.0) > 1e-9:
        raise ConfigError(
            f"field 'weights': must be nonnegative and sum to 1, got sum {weights.sum():.12g}"
        )
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"field 'format': unknown format {cfg.format!r}")
    if cfg.trials < 1:
        raise ConfigError("field 'trials': need at least 1")
    if cfg.gauge_scale < 0.0:
        raise ConfigError("field 'gauge_scale': must be nonnegative")
    if cfg.workers < 1:
        raise ConfigError("field 'workers': need at least 1")
    return cfg


def load_sampled_hamiltonian(path: str, t_end: float) -> HamiltonianTrajectory:
    """Parse the sampled-matrix text format and wrap it as a linear interpolant."""
    try:
        lines = [
            stripped
            for raw in Path(path).read_text().splitlines()
            if (stripped := raw.split("#", 1)[0].strip())
        ]
    except OSError as exc:
        raise ConfigError(f"cannot read Hamiltonian file {path}: {exc}") from exc
    if not lines:
        raise ConfigError(f"{path}: empty Hamiltonian file")
    header = lines[0].split()
    if len(header) != 4 or header[0] != "dim" or header[2] != "steps":
        raise ConfigError(f"{path}:1: header must read 'dim <d> steps <n>'")
    try:
        dim, steps = int(header[1]), int(header[3])
    except ValueError as exc:
        raise ConfigError(f"{path}:1: {exc}") from exc
    if dim < 1 or steps < 1:
        raise ConfigError(f"{path}:1: dim and steps must be positive")
    if len(lines) - 1 != steps + 1:
        raise ConfigError(
            f"{path}: expected {steps + 1} sample rows, found {len(lines) - 1}"
        )
    samples = np.empty((steps + 1, dim, dim), dtype=complex)
    for j, line in enumerate(lines[1:], start=2):
        try:
            values = np.array([float(v) for v in line.split()])
        except ValueError as exc:
            raise ConfigError(f"{path}:{j}: {exc}") from exc
        if values.size != 2 * dim * dim:
            raise ConfigError(
                f"{path}:{j}: expected {2 * dim * dim} numbers, found {values.size}"
            )
        samples[j - 2] = (values[0::2] + 1j * values[1::2]).reshape(dim, dim)
    if not (np.all(np.isfinite(samples.real)) and np.all(np.isfinite(samples.imag))):
        raise ConfigError(f"{path}: non-finite entries")
    defect = np.max(np.abs(samples - np.conj(np.swapaxes(samples, -2, -1))))
    scale = max(float(np.max(np.abs(samples))), 1.0)
    if defect > 1e-10 * scale:
        raise ConfigError(f"{path}: samples not Hermitian (defect {defect:.3e})")

    def batch(times: np.ndarray) -> np.ndarray:
        t = np.clip(np.asarray(times, dtype=float), 0.0, t_end)
        pos = t / t_end * steps
        lo = np.minimum(pos.astype(int), steps - 1)
        frac = (pos - lo)[..., None, None]
        return (1.0 - frac) * samples[lo] + frac * samples[lo + 1]

    def single(t: float) -> np.ndarray:
        return batch(np.array([t]))[0]

    return HamiltonianTrajectory(dim=dim, evaluate=single, evaluate_batch=batch)


@dataclass
class Scenario:
    """Everything a run needs: Hamiltonian, grid, ensemble and labels."""

    cfg: ScenarioConfig
    H: HamiltonianTrajectory
    grid: TimeGrid
    ensemble: Ensemble
    labels: tuple
    params: spin_model.SpinParams | None


def build_scenario(cfg: ScenarioConfig) -> Scenario:
    cfg = validate_config(cfg)
    weights = cfg.resolved_weights()
    if cfg.model == "spin":
        params = spin_model.SpinParams(cfg.mu_b, cfg.omega, cfg.theta, cfg.big_theta)
        t_end = params.period if cfg.horizon == "one-period" else float(cfg.t_end)
        H = spin_model.hamiltonian(params)
        states = []
        for sel in cfg.states:
            if sel not in ("+", "-"):
                raise ConfigError(f"field 'states': spin selectors are '+'/'-', got {sel!r}")
            w_plus, w_minus = spin_model.w_basis(params, 0.0)
            states.append(w_plus if sel == "+" else w_minus)
        ensemble = Ensemble(weights=weights, states=np.array(states))
        labels = tuple(cfg.states)
    else:
        t_end = float(cfg.t_end)
        H = load_sampled_hamiltonian(cfg.hamiltonian_file, t_end)
        states = []
        for sel in cfg.states:
            try:
                idx = int(sel)
            except ValueError:
                raise ConfigError(
                    f"field 'states': custom selectors are basis indices, got {sel!r}"
                ) from None
            if not 0 <= idx < H.dim:
                raise ConfigError(f"field 'states': index {idx} outside 0..{H.dim - 1}")
            e = np.zeros(H.dim, dtype=complex)
            e[idx] = 1.0
            states.append(e)
        ensemble = Ensemble(weights=weights, states=np.array(states))
        labels = tuple(cfg.states)
        params = None
    grid = TimeGrid(0.0, t_end, cfg.steps)
    return Scenario(cfg=cfg, H=H, grid=grid, ensemble=ensemble, labels=labels, params=params)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def write_records(records, header: dict, cfg: ScenarioConfig) -> str:
    """Serialize (observable, label, value) records as CSV or JSON text."""
    if cfg.format == "json":
        payload = {
            "header": {key: _json_value(val) for key, val in header.items()},
            "records": [
                {"observable": name, "label": label, "value": _json_value(value)}
                for name, label, value in records
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = [f"# {key} = {_fmt(val)}" for key, val in header.items()]
    lines.append("observable,label,value")
    for name, label, value in records:
        lines.append(f"{name},{label},{_fmt(value)}")
    return "\n".join(lines) + "\n"


def write_table(columns, rows, header: dict, cfg: ScenarioConfig) -> str:
    if cfg.format == "json":
        payload = {
            "header": {key: _json_value(val) for key, val in header.items()},
            "columns": list(columns),
            "rows": [
                {col: _json_value(val) for col, val in zip(columns, row)} for row in rows
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    lines = [f"# {key} = {_fmt(val)}" for key, val in header.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, cfg: ScenarioConfig) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text)


def scenario_header(cfg: ScenarioConfig, command: str) -> dict:
    header = {
        "command": command,
        "model": cfg.model,
        "steps": cfg.steps,
        "rng": f"numpy PCG64 seed={cfg.seed}",
    }
    if cfg.model == "spin":
        header.update(
            mu_b=cfg.mu_b, omega=cfg.omega, theta=cfg.theta, big_theta=cfg.big_theta
        )
    else:
        header.update(hamiltonian_file=cfg.hamiltonian_file, t_end=cfg.t_end)
    return header


def run_scenario(cfg: ScenarioConfig):
    """simulate: propagate, per-constituent phases, mixed observables."""
    sc = build_scenario(cfg)
    U = propagate(sc.H, sc.grid)
    paths = [amplitude_path(U, state) for state in sc.ensemble.states]
    rho0 = density_from_ensemble(sc.ensemble)
    gamma_total, visibility = mixed_total_phase(rho0, U.final)
    weak, strong = transport_conditions(sc.ensemble, U)
    records = [
        ("gamma_total", "", gamma_total),
        ("visibility", "", visibility),
    ]
    for label, path in zip(sc.labels, paths):
        report = phase_report(path, sc.H)
        records.append(("phi_g", label, geometric_phase_pure(path)))
        records.append(("phi_t", label, report.total))
        records.append(("phi_d", label, report.dynamical))
    records.append(("singh_phase", "", singh_phase(sc.ensemble.weights, paths)))
    records.append(("mixed_dynamical", "", mixed_dynamical_phase(rho0, U)))
    records.append(("transport_weak", "", weak))
    for label, value in zip(sc.labels, strong):
        records.append(("transport_strong", label, float(value)))
    records.append(("strong_transport_satisfied", "", bool(np.max(strong) <= 1e-6)))
    return records, scenario_header(cfg, "simulate")


def _sweep_point(payload: dict) -> list:
    """One sweep row; module-level so process pools can import it."""
    cfg = ScenarioConfig(**payload["cfg"])
    sc = build_scenario(cfg)
    p = sc.params
    U = propagate(sc.H, sc.grid)
    paths = [amplitude_path(U, state) for state in sc.ensemble.states]
    rho0 = density_from_ensemble(sc.ensemble)
    gamma_total, visibility = mixed_total_phase(rho0, U.final)
    weak, _ = transport_conditions(sc.ensemble, U)
    reports = {
        label: phase_report(path, sc.H) for label, path in zip(sc.labels, paths)
    }
    geom = {
        label: geometric_phase_pure(path) for label, path in zip(sc.labels, paths)
    }
    row = [
        payload["index"],
        payload["value"],
        p.mu_b,
        p.omega,
        p.theta,
        p.big_theta,
        p.alpha,
        p.period,
    ]
    for label in ("+", "-"):
        r = reports[label]
        row += [r.total, r.dynamical, geom[label], r.overlap_magnitude, r.transport_residual]
    row += [
        gamma_total,
        visibility,
        singh_phase(sc.ensemble.weights, paths),
        mixed_dynamical_phase(rho0, U),
        weak,
        spin_model.geometric_phase(p, "+"),
        spin_model.geometric_phase(p, "-"),
        spin_model.solid_angle(p),
        spin_model.interference_value(p),
    ]
    return row


def run_sweep(cfg: ScenarioConfig, axis: str, values):
    if cfg.model != "spin":
        raise ConfigError("sweep supports the spin model only")
    if axis not in SWEEP_AXES:
        raise ConfigError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")
    cfg = validate_config(cfg)
    base = dict(
        model="spin",
        mu_b=cfg.mu_b,
        omega=cfg.omega,
        theta=cfg.theta,
        big_theta=cfg.big_theta,
        steps=cfg.steps,
        horizon=cfg.horizon,
        t_end=cfg.t_end,
        weights=cfg.weights,
        states=("+", "-"),
    )
    payloads = []
    for index, value in enumerate(values):
        point = dict(base)
        point[axis] = float(value)
        payloads.append({"index": index, "value": float(value), "cfg": point})
    if cfg.workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_sweep_point, payloads))
    else:
        rows = [_sweep_point(p) for p in payloads]
    header = scenario_header(cfg, "sweep")
    header["axis"] = axis
    header["points"] = len(payloads)
    return rows, header


def run_verify_gauge(cfg: ScenarioConfig):
    """Invariance campaign: hidden-gauge invariants stay fixed, equivalence-class
    transforms shift gamma_T / gamma_D by exactly the predicted amounts."""
    if cfg.model != "spin":
        raise ConfigError("verify-gauge supports the spin model only")
    sc = build_scenario(cfg)
    if len(sc.labels) != sc.H.dim:
        raise ConfigError("verify-gauge needs a complete state basis (both branches)")
    rng = np.random.default_rng(cfg.seed)
    U = propagate(sc.H, sc.grid)
    paths = [amplitude_path(U, state) for state in sc.ensemble.states]
    rho0 = density_from_ensemble(sc.ensemble)
    weights = sc.ensemble.weights
    frame = frame_from_amplitudes(paths, labels=sc.labels)
    nodes = sc.grid.nodes

    base_trace = frame_trace(frame, sc.H, weights)
    base_hols = {label: holonomy(frame, label) for label in sc.labels}
    base_singh = singh_phase(weights, paths)
    base_gamma, base_vis = mixed_total_phase(rho0, U.final)
    base_dyn = mixed_dynamical_phase(rho0, U)
    diag_UT = np.array(
        [np.vdot(state, U.final @ state) for state in sc.ensemble.states]
    )

    dev_gamma = dev_vis = dev_hol = dev_singh = 0.0
    mismatch_222 = mismatch_223 = 0.0
    naive_gamma_shift = naive_dyn_shift = 0.0
    for _ in range(cfg.trials):
        if cfg.gauge_scale == 0.0:
            periodic = GaugeFunction.zero(sc.labels, sc.grid.span)
        else:
            periodic = GaugeFunction.random(sc.labels, sc.grid.span, rng, scale=cfg.gauge_scale)
        gauged = apply_gauge(frame, periodic)
        tr = frame_trace(gauged, sc.H, weights)
        dev_gamma = max(dev_gamma, abs(wrap_angle(np.angle(tr) - np.angle(base_trace))))
        dev_vis = max(dev_vis, abs(abs(tr) - abs(base_trace)))
        for label in sc.labels:
            dev_hol = max(dev_hol, abs(holonomy(gauged, label) - base_hols[label]))

        if cfg.gauge_scale == 0.0:
            ramped = GaugeFunction.zero(sc.labels, sc.grid.span)
        else:
            ramped = GaugeFunction.random(
                sc.labels, sc.grid.span, rng, scale=cfg.gauge_scale, slope_scale=2.0 * cfg.gauge_scale
            )
        shifted_paths = [
            AmplitudePath(path.grid, path.states * np.exp(1j * ramped.value(label, nodes))[:, None])
            for label, path in zip(sc.labels, paths)
        ]
        dev_singh = max(
            dev_singh, abs(wrap_angle(singh_phase(weights, shifted_paths) - base_singh))
        )

        U_prime = transform_evolution(U, ramped, sc.ensemble)
        theta_T = np.array([ramped.value(label, sc.grid.t_end) for label in sc.labels])
        theta_0 = np.array([ramped.value(label, 0.0) for label in sc.labels])
        predicted_gamma = float(np.angle(np.sum(weights * diag_UT * np.exp(1j * theta_T))))
        observed_gamma, _ = mixed_total_phase(rho0, U_prime.matrices[-1])
        mismatch_222 = max(mismatch_222, abs(wrap_angle(observed_gamma - predicted_gamma)))
        naive_gamma_shift = max(naive_gamma_shift, abs(wrap_angle(observed_gamma - base_gamma)))

        observed_dyn = mixed_dynamical_phase(rho0, U_prime)
        predicted_dyn = base_dyn + float(np.sum(weights * (theta_T - theta_0)))
        mismatch_223 = max(mismatch_223, abs(observed_dyn - predicted_dyn))
        naive_dyn_shift = max(naive_dyn_shift, abs(observed_dyn - base_dyn))

    records = [
        ("gamma_total", "", base_gamma),
        ("visibility", "", base_vis),
        ("singh_phase", "", base_singh),
        ("max_gamma_total_deviation", "", dev_gamma),
        ("max_visibility_deviation", "", dev_vis),
        ("max_holonomy_deviation", "", dev_hol),
        ("max_singh_deviation", "", dev_singh),
        ("max_total_phase_prediction_mismatch", "", mismatch_222),
        ("max_dynamical_phase_prediction_mismatch", "", mismatch_223),
        ("max_naive_total_phase_shift", "", naive_gamma_shift),
        ("max_naive_dynamical_phase_shift", "", naive_dyn_shift),
    ]
    header = scenario_header(cfg, "verify-gauge")
    header["trials"] = cfg.trials
    return records, header


def run_spin_report(cfg: ScenarioConfig):
    """Closed-form values of the rotating-field model for the given parameters."""
    p = spin_model.SpinParams(cfg.mu_b, cfg.omega, cfg.theta, cfg.big_theta)
    trace = spin_model.mixed_trace(p)
    records = [
        ("alpha", "", p.alpha),
        ("period", "", p.period),
        ("beta_rate", "", p.beta_rate),
        ("energy", "+", spin_model.energy_expectation(p, "+")),
        ("energy", "-", spin_model.energy_expectation(p, "-")),
        ("connection", "+", spin_model.connection_value(p, "+")),
        ("connection", "-", spin_model.connection_value(p, "-")),
        ("geometric_phase", "+", spin_model.geometric_phase(p, "+")),
        ("geometric_phase", "-", spin_model.geometric_phase(p, "-")),
        ("solid_angle", "", spin_model.solid_angle(p)),
        ("interference", "", spin_model.interference_value(p)),
        ("mixed_trace_re", "", trace.real),
        ("mixed_trace_im", "", trace.imag),
        ("mixed_trace_arg", "", float(np.angle(trace))),
        ("mixed_trace_abs", "", abs(trace)),
    ]
    return records, scenario_header(cfg, "spin-report")


def run_purify_demo(cfg: ScenarioConfig, dim: int):
    """Seeded random density matrix -> purify -> reduce round trip, with the
    constant-phase hidden-gauge invariance check."""
    rng = np.random.default_rng(cfg.seed)
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = DensityMatrix((A @ np.conj(A.T)) / np.trace(A @ np.conj(A.T)).real)
    pure = purify(rho, dim)
    back = reduce_purified(pure)
    round_trip = float(np.max(np.abs(back.matrix - rho.matrix)))
    vals, vecs = np.linalg.eigh(rho.matrix)
    phases = rng.uniform(-np.pi, np.pi, size=dim)
    transformed = hidden_gauge_transform(pure, phases, vecs)
    gauge_shift = float(np.max(np.abs(reduce_purified(transformed).matrix - rho.matrix)))
    schmidt = np.sqrt(np.clip(vals[::-1], 0.0, None))
    records = [
        ("dim", "", dim),
        ("round_trip_error", "", round_trip),
        ("hidden_gauge_shift", "", gauge_shift),
        ("reduced_trace_error", "", abs(float(np.trace(back.matrix).real) - 1.0)),
        ("min_eigenvalue", "", float(np.min(np.linalg.eigvalsh(back.matrix)))),
    ]
    for k, coeff in enumerate(schmidt):
        records.append(("schmidt_coefficient", str(k), float(coeff)))
    header = scenario_header(cfg, "purify-demo")
    header["dim"] = dim
    return records, header


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key = value scenario file")
    sub.add_argument("--steps", type=int, help=f"grid steps (default {DEFAULT_STEPS})")
    sub.add_argument("--mu-b", type=float, dest="mu_b", help="field coupling mu_B")
    sub.add_argument("--omega", type=float, help="rotation frequency")
    sub.add_argument("--theta", type=float, help="cone opening angle (rad)")
    sub.add_argument(
        "--big-theta", type=float, dest="big_theta", help="ensemble mixing angle (rad)"
    )
    sub.add_argument("--seed", type=int, help="RNG seed (default 0)")
    sub.add_argument("--trials", type=int, help="verification trials (default 50)")
    sub.add_argument(
        "--gauge-scale",
        type=float,
        dest="gauge_scale",
        help="harmonic amplitude of random gauges (0 disables them)",
    )
    sub.add_argument("--format", choices=("csv", "json"), help="output format")
    sub.add_argument("--out", help="output path (default stdout)")
    sub.add_argument("--workers", type=int, help="bounded worker count for sweeps")


def _merge_flags(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    for name in (
        "steps",
        "mu_b",
        "omega",
        "theta",
        "big_theta",
        "seed",
        "trials",
        "gauge_scale",
        "format",
        "out",
        "workers",
    ):
        value = getattr(args, name, None)
        if value is not None:
            cfg = replace(cfg, **{name: value})
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phaselab",
        description="Geometric phases of pure and mixed states: scenario runs, "
        "sweeps and gauge-invariance verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser(
        "simulate", help="run one scenario and report phase observables"
    )
    _add_common_flags(simulate)

    sweep = sub.add_parser(
        "sweep",
        help="sweep one spin parameter; CSV columns, in order: "
        + ",".join(SWEEP_COLUMNS),
    )
    _add_common_flags(sweep)
    sweep.add_argument("--axis", required=True, help=f"one of {SWEEP_AXES}")
    group = sweep.add_mutually_exclusive_group(required=True)
    group.add_argument("--values", help="comma-separated axis values (may be empty)")
    group.add_argument(
        "--linspace",
        nargs=3,
        metavar=("START", "STOP", "COUNT"),
        help="uniformly spaced axis values",
    )

    verify = sub.add_parser(
        "verify-gauge", help="random-gauge invariance and non-invariance campaign"
    )
    _add_common_flags(verify)

    report = sub.add_parser("spin-report", help="closed-form spin-model report")
    _add_common_flags(report)

    demo = sub.add_parser("purify-demo", help="purification round-trip demo")
    _add_common_flags(demo)
    demo.add_argument("--dim", type=int, default=2, help="density-matrix dimension")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = parse_config_file(args.config) if getattr(args, "config", None) else ScenarioConfig()
        cfg = _merge_flags(cfg, args)
        if args.command == "simulate":
            cfg = validate_config(cfg)
            records, header = run_scenario(cfg)
            _emit(write_records(records, header, cfg), cfg)
        elif args.command == "sweep":
            if args.values is not None:
                values = [float(v) for v in args.values.split(",") if v.strip()]
            else:
                start, stop, count = args.linspace
                values = np.linspace(float(start), float(stop), int(count)).tolist()
            rows, header = run_sweep(cfg, args.axis, values)
            _emit(write_table(SWEEP_COLUMNS, rows, header, cfg), cfg)
        elif args.command == "verify-gauge":
            cfg = validate_config(cfg)
            records, header = run_verify_gauge(cfg)
            _emit(write_records(records, header, cfg), cfg)
        elif args.command == "spin-report":
            cfg = validate_config(cfg)
            records, header = run_spin_report(cfg)
            _emit(write_records(records, header, cfg), cfg)
        elif args.command == "purify-demo":
            cfg = validate_config(cfg)
            records, header = run_purify_demo(cfg, args.dim)
            _emit(write_records(records, header, cfg), cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except UndefinedPhaseError as exc:
        print(
            f"undefined phase: {exc} (zero visibility: the interference pattern "
            "is flat and carries no fringe shift)",
            file=sys.stderr,
        )
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
