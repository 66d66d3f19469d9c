"""Quantum fluctuation dynamics around the classical means.

Assembles the time-dependent drift matrix and the diffusion matrix of the
linearized quadrature dynamics, propagates the 6x6 covariance matrix
through the Lyapunov equation of motion, and checks dynamical stability
by sampled drift-matrix eigenvalues.

Quadrature ordering is (dq, dp, dX, dY, dx, dy); vacuum variance 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotStable, Singular, Unphysical
from .measures import symplectic_eigenvalues
from .model import DriveSpec, FirstMoments, SystemParams, ZERO_MOMENTS
from .moments import _rhs_vector, default_stepper, effective_coupling, \
    effective_detuning
from .numerics import StepperConfig, integrate_adaptive, solve_linear

PHYSICALITY_SLACK = 1e-6


def build_drift(params: SystemParams, q_mean: float,
                a_mean: complex) -> np.ndarray:
    """Drift matrix A(t) of the linearized quadrature dynamics."""
    om = params.omega_m
    g0 = params.g0_collective
    det = effective_detuning(params, q_mean)
    gc = effective_coupling(params.g, a_mean)
    gx, gy = gc.real, gc.imag
    return np.array([
        [0.0,    om,            0.0,          0.0,          0.0,            0.0],
        [-om,   -params.gamma_m, gx,           gy,           0.0,            0.0],
        [-gy,    0.0,           -params.kappa, det,          0.0,            g0],
        [gx,     0.0,           -det,         -params.kappa, -g0,            0.0],
        [0.0,    0.0,           0.0,          g0,           -params.gamma_a, params.delta_c],
        [0.0,    0.0,           -g0,          0.0,          -params.delta_c, -params.gamma_a],
    ])


def build_diffusion(params: SystemParams) -> np.ndarray:
    """Diagonal diffusion matrix of the input noises."""
    return np.diag([0.0,
                    params.gamma_m * (2.0 * params.n_th + 1.0),
                    params.kappa, params.kappa,
                    params.gamma_a, params.gamma_a])


def thermal_vacuum_cm(n_th: float) -> np.ndarray:
    """Default initial CM: thermal mirror, vacuum cavity and atoms."""
    return np.diag([n_th + 0.5, n_th + 0.5, 0.5, 0.5, 0.5, 0.5])


@dataclass
class LyapunovTrajectory:
    t: np.ndarray
    v: np.ndarray           # (T, 6, 6), symmetrized

    def at(self, i: int) -> np.ndarray:
        return self.v[i]


def _check_physical(t: np.ndarray, vs: np.ndarray):
    for ti, vi in zip(t, vs):
        nu = symplectic_eigenvalues(vi)
        if np.min(nu) < 0.5 - PHYSICALITY_SLACK:
            raise Unphysical(
                f"symplectic eigenvalue {np.min(nu):.8f} < 1/2 at "
                f"t = {ti:g}; integration accuracy insufficient")


def integrate_lyapunov(params: SystemParams, drive: DriveSpec,
                       first_moment_source, v0: np.ndarray | None,
                       t_end: float, t_eval: np.ndarray | None = None,
                       cfg: StepperConfig | None = None,
                       moment_init: FirstMoments = ZERO_MOMENTS,
                       check_physical: bool = True) -> LyapunovTrajectory:
    """Propagate dV/dt = A(t) V + V A^T + D from t = 0 to t_end.

    first_moment_source selects how A(t) is rebuilt at every step:

    * "ode"    - co-integrate the mean-value ODEs alongside V, starting
                 from moment_init (the exact numerical route);
    * callable - t -> (q_mean, a_mean), e.g. the Floquet series or an
                 asymptotic closed form.
    """
    if v0 is None:
        v0 = thermal_vacuum_cm(params.n_th)
    v0 = np.asarray(v0, dtype=float)
    cfg = default_stepper(drive, cfg)
    d = build_diffusion(params)

    if first_moment_source == "ode":
        moment_rhs = _rhs_vector(params, drive)

        def f(t, y):
            dy_m = moment_rhs(t, y[:6])
            v = y[6:].reshape(6, 6)
            v = 0.5 * (v + v.T)
            a_mat = build_drift(params, y[0], complex(y[2], y[3]))
            dv = a_mat @ v + v @ a_mat.T + d
            return np.concatenate((dy_m, dv.ravel()))

        y0 = np.concatenate((moment_init.to_vector(), v0.ravel()))
        sol = integrate_adaptive(f, (0.0, t_end), y0, cfg, t_eval=t_eval)
        vs = sol.y[6:].T.reshape(-1, 6, 6)
    else:
        source = first_moment_source

        def f(t, y):
            v = y.reshape(6, 6)
            v = 0.5 * (v + v.T)
            q_mean, a_mean = source(t)
            a_mat = build_drift(params, q_mean, a_mean)
            dv = a_mat @ v + v @ a_mat.T + d
            return dv.ravel()

        sol = integrate_adaptive(f, (0.0, t_end), v0.ravel(), cfg,
                                 t_eval=t_eval)
        vs = sol.y.T.reshape(-1, 6, 6)

    vs = 0.5 * (vs + np.transpose(vs, (0, 2, 1)))
    if check_physical:
        _check_physical(sol.t, vs)
    return LyapunovTrajectory(t=sol.t, v=vs)


def steady_state_lyapunov(a_const: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Algebraic steady state A V + V A^T + D = 0 by vectorization."""
    a_const = np.asarray(a_const, dtype=float)
    d = np.asarray(d, dtype=float)
    eig = np.linalg.eigvals(a_const)
    if np.max(eig.real) >= 0.0:
        raise NotStable(
            f"drift matrix not Hurwitz (max Re eig = {np.max(eig.real):g})")
    n = a_const.shape[0]
    eye = np.eye(n)
    m = np.kron(eye, a_const) + np.kron(a_const, eye)
    # column-stacked vectorization: vec(AV + VA^T) = M vec(V)
    x = solve_linear(m, -d.flatten(order="F"))
    v = x.reshape(n, n, order="F")
    v = 0.5 * (v + v.T)
    resid = np.max(np.abs(a_const @ v + v @ a_const.T + d))
    scale = max(1.0, np.max(np.abs(d)),
                np.max(np.abs(a_const)) * np.max(np.abs(v)))
    if resid > 1e-10 * scale:
        raise Singular(f"Lyapunov residual {resid:g} too large")
    return v


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    margin: float        # max over sampled t of max Re eigenvalue
    worst_time: float


def stability_check(params: SystemParams, drive: DriveSpec,
                    first_moment_source,
                    samples_per_period: int = 64) -> StabilityReport:
    """Sample A(t) eigenvalues over one modulation period.

    Stable iff the largest real part stays below 0 (tolerance 1e-10) at
    every sample; the margin is reported either way.
    """
    if drive is not None and drive.big_omega > 0:
        times = np.linspace(0.0, drive.period, samples_per_period,
                            endpoint=False)
    else:
        times = np.array([0.0])
    worst = -np.inf
    worst_t = 0.0
    for t in times:
        q_mean, a_mean = first_moment_source(t)
        a_mat = build_drift(params, q_mean, a_mean)
        top = np.max(np.linalg.eigvals(a_mat).real)
        if top > worst:
            worst = top
            worst_t = float(t)
    return StabilityReport(stable=bool(worst < 1e-10), margin=float(worst),
                           worst_time=worst_t)
