"""Shared small-dense numerical kernels with explicit accuracy contracts.

The adaptive stepper is SciPy's embedded Runge-Kutta 4(5) pair with dense
output; eigenvalue and linear-solve kernels wrap LAPACK through NumPy.
All kernels are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import Diverged, NoConvergence, Singular, StepFailure

MAX_DENSE_DIM = 16


@dataclass(frozen=True)
class StepperConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = np.inf     # resolved by callers (tau/50 when modulated)
    overflow_guard: float = 1e12

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0:
            raise ValueError("max_step must be positive")


def integrate_adaptive(f, t_span, y0, cfg: StepperConfig,
                       t_eval=None, dense_output=False):
    """Integrate dy/dt = f(t, y) with the RK45 embedded pair.

    Raises Diverged when any |y| crosses cfg.overflow_guard and StepFailure
    when the stepper cannot meet its tolerances.
    """
    y0 = np.asarray(y0, dtype=float)
    guard = cfg.overflow_guard

    def overflow(t, y):
        return guard - np.max(np.abs(y))

    overflow.terminal = True
    overflow.direction = -1

    sol = solve_ivp(f, t_span, y0, method="RK45",
                    rtol=cfg.rel_tol, atol=cfg.abs_tol,
                    max_step=cfg.max_step, t_eval=t_eval,
                    dense_output=dense_output, events=overflow)
    if sol.status == 1:
        raise Diverged(
            f"state magnitude exceeded {guard:g} at t = {sol.t_events[0][0]:g}")
    if not sol.success:
        raise StepFailure(sol.message)
    return sol


def eigenvalues_real(m: np.ndarray) -> np.ndarray:
    """All eigenvalues of a small real matrix (n <= 16)."""
    m = np.asarray(m, dtype=float)
    if m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if m.shape[0] > MAX_DENSE_DIM:
        raise ValueError(f"kernel limited to n <= {MAX_DENSE_DIM}")
    try:
        return np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological
        raise NoConvergence(str(exc)) from exc


def solve_linear(m: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve m x = b by partial-pivoting elimination; residual-checked."""
    m = np.asarray(m, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.linalg.norm(m, np.inf)
    try:
        x = np.linalg.solve(m, b)
    except np.linalg.LinAlgError as exc:
        raise Singular(str(exc)) from exc
    resid = np.linalg.norm(m @ x - b, np.inf)
    bound = 1e-10 * (scale * np.linalg.norm(x, np.inf) +
                     np.linalg.norm(b, np.inf))
    if resid > max(bound, 1e-300):
        raise Singular(
            f"residual {resid:g} exceeds bound {bound:g}; system is "
            "numerically singular")
    return x
