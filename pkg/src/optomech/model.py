"""Physical parameter types, drive specifications and state containers.

All rates and detunings are expressed in units of the mechanical frequency
omega_m, which is fixed to 1 in internal units.  Time is measured in
1/omega_m and the modulation period is tau = 2*pi/Omega.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

N_MAX_DEFAULT = 8


@dataclass(frozen=True)
class SystemParams:
    """Physical rates and detunings of the hybrid system (units of omega_m)."""

    delta_a: float          # cavity-laser detuning
    kappa: float            # cavity decay rate
    gamma_m: float          # mechanical decay rate
    g: float                # single-photon radiation-pressure coupling
    delta_c: float          # atom-laser detuning
    gamma_a: float          # atomic decay rate
    g0_collective: float    # collective atom-cavity coupling sqrt(N)*g0
    n_th: float = 0.0       # mean thermal phonon occupation
    omega_m: float = 1.0    # mechanical frequency (the unit)


@dataclass(frozen=True)
class DriveSpec:
    """Periodic drive E(t) = sum_n E_n exp(-i n Omega t).

    big_omega = 0 means a constant drive; only the n = 0 component may then
    be nonzero.  The component map is finite and bounded by N_MAX_DEFAULT
    unless a larger bound is validated explicitly.
    """

    big_omega: float
    components: dict[int, complex] = field(default_factory=dict)

    @property
    def period(self) -> float:
        if self.big_omega == 0.0:
            raise ValueError("constant drive has no period")
        return 2.0 * np.pi / self.big_omega

    def component(self, n: int) -> complex:
        return complex(self.components.get(n, 0.0))


@dataclass(frozen=True)
class FirstMoments:
    """Classical mean values <q>, <p>, <a>, <c> at one time instant."""

    q: float
    p: float
    a: complex
    c: complex

    def to_vector(self) -> np.ndarray:
        """Real 6-vector (q, p, Re a, Im a, Re c, Im c)."""
        return np.array([self.q, self.p, self.a.real, self.a.imag,
                         self.c.real, self.c.imag])

    @staticmethod
    def from_vector(y: np.ndarray) -> "FirstMoments":
        return FirstMoments(q=float(y[0]), p=float(y[1]),
                            a=complex(y[2], y[3]), c=complex(y[4], y[5]))


ZERO_MOMENTS = FirstMoments(q=0.0, p=0.0, a=0j, c=0j)


@dataclass(frozen=True)
class EngineeredCoupling:
    """Target effective coupling G(t) = G_1 + G_2 exp(-i Omega t)."""

    g1: float
    g2: float
    big_omega: float


def drive_value(drive: DriveSpec, t):
    """Evaluate E(t) = sum_n E_n exp(-i n Omega t); scalar or array t."""
    if drive.big_omega == 0.0:
        e0 = drive.component(0)
        if np.ndim(t) == 0:
            return e0
        return np.full(np.shape(t), e0, dtype=complex)
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for n, en in drive.components.items():
        out += en * np.exp(-1j * n * drive.big_omega * t)
    if out.ndim == 0:
        return complex(out)
    return out


def validate_params(params: SystemParams, drive: DriveSpec | None = None,
                    n_max: int = N_MAX_DEFAULT) -> list[str]:
    """Collect invariant violations; an empty list means a usable setup."""
    report = []
    if params.omega_m <= 0:
        report.append("omega_m must be positive")
    if params.kappa <= 0:
        report.append("kappa must be positive")
    if params.gamma_m <= 0:
        report.append("gamma_m must be positive")
    if params.gamma_a < 0:
        report.append("gamma_a must be nonnegative")
    if params.n_th < 0:
        report.append("n_th must be nonnegative")
    if params.g < 0:
        report.append("g must be nonnegative")
    if params.g0_collective < 0:
        report.append("g0_collective must be nonnegative")
    if drive is not None:
        if drive.big_omega < 0:
            report.append("modulation frequency must be nonnegative")
        if drive.big_omega == 0.0:
            bad = [n for n, en in drive.components.items()
                   if n != 0 and en != 0]
            if bad:
                report.append(
                    "constant drive (Omega = 0) admits only the n = 0 "
                    f"component, got nonzero n = {sorted(bad)}")
        out_of_range = [n for n in drive.components if abs(n) > n_max]
        if out_of_range:
            report.append(
                f"drive components outside |n| <= {n_max}: "
                f"{sorted(out_of_range)}")
    return report
