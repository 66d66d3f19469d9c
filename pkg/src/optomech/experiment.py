"""Experiment orchestration: config ingestion, single runs and sweeps.

A run executes first moments -> covariance propagation -> measures and
emits one CSV per requested output plus a JSON manifest echoing the
resolved configuration.
"""

from __future__ import annotations

import dataclasses
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .engineering import laplace_coefficients, modulation_components, \
    transient_first_moments
from .errors import Diverged, NotStable, SimulationError
from .fluctuations import build_diffusion, build_drift, integrate_lyapunov, \
    stability_check, steady_state_lyapunov, thermal_vacuum_cm
from .measures import log_negativity, mean_phonon_number, reduce_atom_mirror, \
    squeezing_parameter, wigner
from .model import DriveSpec, EngineeredCoupling, FirstMoments, SystemParams, \
    ZERO_MOMENTS, validate_params
from .moments import DEFAULT_J_MAX, DEFAULT_N_MAX, floquet_mean_source, \
    floquet_recurse, integrate_first_moments, steady_state_constant
from .numerics import StepperConfig
from .tables import write_cm_csv, write_measures_csv, write_rows, \
    write_trajectory_csv, write_wigner_csv

KNOWN_OUTPUTS = ("first_moments", "cm", "EN", "variance", "neff",
                 "squeezing", "wigner", "stability")
MEASURE_OUTPUTS = ("cm", "EN", "variance", "neff", "squeezing", "wigner")


@dataclass(frozen=True)
class SweepAxis:
    name: str
    min: float
    max: float
    points: int

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.points)


@dataclass
class ExperimentConfig:
    params: SystemParams
    drive: DriveSpec | None = None
    engineered: EngineeredCoupling | None = None
    delta_a_effective: float | None = None
    horizon_periods: float = 50.0
    outputs: tuple[str, ...] = ()
    sweep: tuple[SweepAxis, ...] = ()
    numerics: StepperConfig = field(default_factory=StepperConfig)
    j_max: int = DEFAULT_J_MAX
    n_max: int = DEFAULT_N_MAX
    init_moments: FirstMoments = ZERO_MOMENTS
    init_cm: np.ndarray | None = None
    first_moment_source: str = "ode"
    sample_periods: float = 2.0
    samples_per_period: int = 200
    wigner_times: tuple[float, ...] = ()
    raw: dict = field(default_factory=dict)

    def resolved_drive(self) -> DriveSpec:
        if self.drive is not None:
            return self.drive
        if self.engineered is not None:
            return modulation_components(self.params, self.engineered)
        raise ValueError("config needs either a drive or an engineered "
                         "coupling target")

    def validate(self) -> list[str]:
        report = []
        if (self.drive is None) == (self.engineered is None):
            report.append("exactly one of 'drive' and 'engineered' "
                          "must be given")
        bad = [o for o in self.outputs if o not in KNOWN_OUTPUTS]
        if bad:
            report.append(f"unknown outputs: {bad}")
        if len(self.sweep) > 2:
            report.append("at most two sweep axes are supported")
        for ax in self.sweep:
            try:
                _apply_axis(self, ax.name, ax.min)
            except KeyError:
                report.append(f"sweep axis '{ax.name}' does not name a "
                              "scalar parameter")
        if self.drive is not None:
            report.extend(validate_params(self.params, self.drive))
        else:
            report.extend(validate_params(self.params))
        return report


def _parse_drive(d: dict) -> DriveSpec:
    comps = {int(c["n"]): complex(c.get("re", 0.0), c.get("im", 0.0))
             for c in d.get("components", [])}
    return DriveSpec(big_omega=float(d["Omega"]), components=comps)


_PARAM_KEYS = {"delta_a", "kappa", "gamma_m", "g", "delta_c", "gamma_a",
               "n_th", "omega_m"}


def config_from_dict(doc: dict) -> ExperimentConfig:
    p = doc["params"]
    kwargs = {k: float(v) for k, v in p.items() if k in _PARAM_KEYS}
    kwargs["g0_collective"] = float(p.get("G0", p.get("g0_collective", 0.0)))
    params = SystemParams(**kwargs)

    drive = _parse_drive(doc["drive"]) if "drive" in doc else None
    engineered = None
    if "engineered" in doc:
        e = doc["engineered"]
        engineered = EngineeredCoupling(g1=float(e["G1"]),
                                        g2=float(e["G2"]),
                                        big_omega=float(e["Omega"]))

    num = doc.get("numerics", {})
    numerics = StepperConfig(
        rel_tol=float(num.get("rel_tol", 1e-9)),
        abs_tol=float(num.get("abs_tol", 1e-12)),
        max_step=float(num.get("max_step", np.inf)),
        overflow_guard=float(num.get("overflow_guard", 1e12)))

    flq = doc.get("floquet", {})
    init = doc.get("init", {})
    init_moments = FirstMoments(
        q=float(init.get("q", 0.0)), p=float(init.get("p", 0.0)),
        a=complex(init.get("re_a", 0.0), init.get("im_a", 0.0)),
        c=complex(init.get("re_c", 0.0), init.get("im_c", 0.0)))
    init_cm = None
    if "cm_diag" in init:
        init_cm = np.diag([float(x) for x in init["cm_diag"]])

    sweep = tuple(SweepAxis(name=a["name"], min=float(a["min"]),
                            max=float(a["max"]), points=int(a["points"]))
                  for a in doc.get("sweep", {}).get("axes", []))

    return ExperimentConfig(
        params=params, drive=drive, engineered=engineered,
        delta_a_effective=(float(p["delta_a_effective"])
                           if "delta_a_effective" in p else None),
        horizon_periods=float(doc.get("horizon_periods", 50.0)),
        outputs=tuple(doc.get("outputs", [])),
        sweep=sweep, numerics=numerics,
        j_max=int(flq.get("j_max", DEFAULT_J_MAX)),
        n_max=int(flq.get("n_max", DEFAULT_N_MAX)),
        init_moments=init_moments, init_cm=init_cm,
        first_moment_source=doc.get("first_moment_source", "ode"),
        sample_periods=float(doc.get("sample_periods", 2.0)),
        samples_per_period=int(doc.get("samples_per_period", 200)),
        wigner_times=tuple(float(t) for t in doc.get("wigner_times", [])),
        raw=doc)


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# Measures extraction
# ---------------------------------------------------------------------------

def measures_from_cm_series(t: np.ndarray, vs: np.ndarray) -> dict:
    en = np.empty(len(t))
    v11 = np.empty(len(t))
    v22 = np.empty(len(t))
    neff = np.empty(len(t))
    r_db = np.empty(len(t))
    for i, v in enumerate(vs):
        en[i] = log_negativity(reduce_atom_mirror(v))
        v11[i] = v[0, 0]
        v22[i] = v[1, 1]
        neff[i] = mean_phonon_number(v)
        _, _, r_db[i] = squeezing_parameter(v[:2, :2])
    return {"t": t, "EN": en, "v11": v11, "v22": v22, "neff": neff,
            "r_db": r_db}


def _moment_source(cfg: ExperimentConfig, drive: DriveSpec):
    """Mean-value source for drift assembly when not co-integrating."""
    if cfg.first_moment_source == "floquet":
        sol = floquet_recurse(cfg.params, drive, cfg.j_max, cfg.n_max)
        return floquet_mean_source(sol, cfg.params.g)
    if cfg.first_moment_source == "engineered":
        if cfg.engineered is None:
            raise ValueError("'engineered' source needs a coupling target")
        lc = laplace_coefficients(cfg.params, cfg.engineered)

        def source(t):
            fm = transient_first_moments(cfg.params, cfg.engineered, t, lc)
            return fm.q, fm.a

        return source
    return "ode"


# ---------------------------------------------------------------------------
# Single runs
# ---------------------------------------------------------------------------

def _run_constant(cfg: ExperimentConfig, out_dir: Path,
                  written: dict) -> None:
    drive = cfg.resolved_drive()
    e0 = drive.component(0)
    fm, params_eff = steady_state_constant(cfg.params, e0,
                                           cfg.delta_a_effective)
    a_mat = build_drift(params_eff, fm.q, fm.a)
    d_mat = build_diffusion(params_eff)
    report = stability_check(params_eff, drive, lambda t: (fm.q, fm.a))
    if "stability" in cfg.outputs:
        path = out_dir / "stability.json"
        path.write_text(json.dumps({"stable": report.stable,
                                    "margin": report.margin}, indent=2))
        written["stability"] = path
    if "first_moments" in cfg.outputs:
        path = out_dir / "first_moments.csv"
        write_trajectory_csv(path, [0.0], [fm.q], [fm.p], [fm.a], [fm.c])
        written["first_moments"] = path
    if not any(o in cfg.outputs for o in MEASURE_OUTPUTS):
        return
    v = steady_state_lyapunov(a_mat, d_mat)
    t = np.array([0.0])
    vs = v[np.newaxis]
    if "cm" in cfg.outputs:
        path = out_dir / "cm.csv"
        write_cm_csv(path, t, vs)
        written["cm"] = path
    series = measures_from_cm_series(t, vs)
    path = out_dir / "measures.csv"
    write_measures_csv(path, series["t"], series["EN"], series["v11"],
                       series["v22"], series["neff"], series["r_db"])
    written["measures"] = path
    _write_wigner(cfg, out_dir, written, t, vs)


def _write_wigner(cfg, out_dir, written, t, vs):
    if "wigner" not in cfg.outputs:
        return
    targets = cfg.wigner_times or (t[-1],)
    for k, tw in enumerate(targets):
        i = int(np.argmin(np.abs(t - tw)))
        grid = wigner(vs[i][:2, :2])
        path = out_dir / f"wigner_{k}.csv"
        write_wigner_csv(path, grid)
        written[f"wigner_{k}"] = path


def _run_modulated(cfg: ExperimentConfig, out_dir: Path,
                   written: dict) -> None:
    drive = cfg.resolved_drive()
    tau = drive.period
    t_end = cfg.horizon_periods * tau
    t0 = max(0.0, t_end - cfg.sample_periods * tau)
    n_samples = max(2, int(cfg.sample_periods * cfg.samples_per_period))
    t_eval = np.linspace(t0, t_end, n_samples)
    if cfg.wigner_times:
        t_eval = np.unique(np.concatenate((t_eval, cfg.wigner_times)))

    source = _moment_source(cfg, drive)

    if "first_moments" in cfg.outputs:
        traj = integrate_first_moments(cfg.params, drive,
                                       cfg.init_moments, t_end,
                                       t_eval=t_eval, cfg=cfg.numerics)
        path = out_dir / "first_moments.csv"
        write_trajectory_csv(path, traj.t, traj.q, traj.p, traj.a, traj.c)
        written["first_moments"] = path

    if "stability" in cfg.outputs:
        if source == "ode":
            sol = floquet_recurse(cfg.params, drive, cfg.j_max, cfg.n_max)
            stab_source = floquet_mean_source(sol, cfg.params.g)
        else:
            stab_source = source
        report = stability_check(cfg.params, drive, stab_source)
        path = out_dir / "stability.json"
        path.write_text(json.dumps({"stable": report.stable,
                                    "margin": report.margin}, indent=2))
        written["stability"] = path

    if not any(o in cfg.outputs for o in MEASURE_OUTPUTS):
        return
    lt = integrate_lyapunov(cfg.params, drive, source, cfg.init_cm,
                            t_end, t_eval=t_eval, cfg=cfg.numerics,
                            moment_init=cfg.init_moments)
    if "cm" in cfg.outputs:
        path = out_dir / "cm.csv"
        write_cm_csv(path, lt.t, lt.v)
        written["cm"] = path
    series = measures_from_cm_series(lt.t, lt.v)
    path = out_dir / "measures.csv"
    write_measures_csv(path, series["t"], series["EN"], series["v11"],
                       series["v22"], series["neff"], series["r_db"])
    written["measures"] = path
    _write_wigner(cfg, out_dir, written, lt.t, lt.v)


def run_experiment(cfg: ExperimentConfig, out_dir: str | Path,
                   jobs: int = 1) -> dict:
    """Execute the configured pipeline; returns {output name: path}."""
    report = cfg.validate()
    if report:
        raise ValueError("invalid configuration: " + "; ".join(report))
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: dict = {}

    manifest = {"version": __version__, "config": cfg.raw or _echo(cfg)}
    if cfg.engineered is not None:
        drv = cfg.resolved_drive()
        manifest["resolved_drive"] = drive_to_dict(drv)
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, default=str))
    written["manifest"] = path

    if cfg.sweep:
        written["sweep"] = run_sweep(cfg, out_dir / "sweep.csv", jobs)
        return written
    if not cfg.outputs:
        return written
    drive = cfg.resolved_drive()
    if drive.big_omega == 0.0:
        _run_constant(cfg, out_dir, written)
    else:
        _run_modulated(cfg, out_dir, written)
    return written


def _echo(cfg: ExperimentConfig) -> dict:
    return {"params": dataclasses.asdict(cfg.params),
            "outputs": list(cfg.outputs)}


def drive_to_dict(drive: DriveSpec) -> dict:
    return {"Omega": drive.big_omega,
            "components": [{"n": n, "re": en.real, "im": en.imag}
                           for n, en in sorted(drive.components.items())]}


# ---------------------------------------------------------------------------
# Source comparison
# ---------------------------------------------------------------------------

def compare_sources(cfg: ExperimentConfig) -> dict[str, float]:
    """Max relative deviation ODE vs Floquet over the final two periods."""
    drive = cfg.resolved_drive()
    if drive.big_omega <= 0:
        raise ValueError("source comparison needs a modulated drive")
    tau = drive.period
    t_end = cfg.horizon_periods * tau
    t_eval = np.linspace(t_end - 2.0 * tau, t_end, 400)
    traj = integrate_first_moments(cfg.params, drive, cfg.init_moments,
                                   t_end, t_eval=t_eval, cfg=cfg.numerics)
    sol = floquet_recurse(cfg.params, drive, cfg.j_max, cfg.n_max)
    series = sol.evaluate(cfg.params.g, t_eval)
    numeric = {"q": traj.q, "p": traj.p, "a": traj.a, "c": traj.c}
    out = {}
    for obs in ("q", "p", "a", "c"):
        ref = numeric[obs]
        dev = np.abs(series[obs] - ref) / np.maximum(1.0, np.abs(ref))
        out[obs] = float(np.max(dev))
    return out


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def _apply_axis(cfg: ExperimentConfig, name: str,
                value: float) -> ExperimentConfig:
    if name in ("E", "E0"):
        drive = cfg.resolved_drive()
        comps = dict(drive.components)
        comps[0] = complex(value)
        return replace(cfg, drive=DriveSpec(big_omega=drive.big_omega,
                                            components=comps),
                       engineered=None)
    if name == "G0":
        return replace(cfg, params=replace(cfg.params,
                                           g0_collective=value))
    if name in _PARAM_KEYS:
        return replace(cfg, params=replace(cfg.params, **{name: value}))
    raise KeyError(name)


def evaluate_cell(cfg: ExperimentConfig) -> tuple[str, float]:
    """(status, EN) for one sweep cell; failures flagged, not raised."""
    drive = cfg.resolved_drive()
    try:
        if drive.big_omega == 0.0:
            fm, params_eff = steady_state_constant(
                cfg.params, drive.component(0), cfg.delta_a_effective)
            a_mat = build_drift(params_eff, fm.q, fm.a)
            v = steady_state_lyapunov(a_mat, build_diffusion(params_eff))
            return "stable", log_negativity(reduce_atom_mirror(v))
        tau = drive.period
        t_end = cfg.horizon_periods * tau
        t_eval = np.linspace(t_end - tau, t_end, cfg.samples_per_period)
        lt = integrate_lyapunov(cfg.params, drive, "ode", cfg.init_cm,
                                t_end, t_eval=t_eval, cfg=cfg.numerics,
                                moment_init=cfg.init_moments)
        en = [log_negativity(reduce_atom_mirror(v)) for v in lt.v]
        return "stable", float(np.max(en))
    except (NotStable, Diverged):
        return "unstable", float("nan")
    except SimulationError as exc:
        return f"error:{type(exc).__name__}", float("nan")


def _cell_worker(args):
    cfg, values = args
    for ax, val in values:
        cfg = _apply_axis(cfg, ax.name, val)
    status, en = evaluate_cell(cfg)
    return [v for _, v in values] + [status, en]


def run_sweep(cfg: ExperimentConfig, out_path: Path, jobs: int = 1) -> Path:
    """Grid sweep over 1 or 2 axes; one CSV row per cell, ordered."""
    axes = cfg.sweep
    grids = [ax.values() for ax in axes]
    cells = []
    if len(axes) == 1:
        for v in grids[0]:
            cells.append((cfg, [(axes[0], float(v))]))
    else:
        for v1 in grids[0]:
            for v2 in grids[1]:
                cells.append((cfg, [(axes[0], float(v1)),
                                    (axes[1], float(v2))]))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_cell_worker, cells, chunksize=4))
    else:
        rows = [_cell_worker(c) for c in cells]
    header = [ax.name for ax in axes] + ["status", "EN"]
    write_rows(out_path, header, rows)
    return out_path
