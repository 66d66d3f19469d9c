"""Gaussian-state diagnostics on 6x6 and reduced covariance matrices.

Conventions: quadrature ordering (dq, dp, dX, dY, dx, dy), vacuum
variance 1/2, entanglement threshold eta^- < 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonPhysical, NonPositive, SingularCM


def symplectic_eigenvalues(v: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a 2N x 2N covariance matrix (ascending)."""
    v = np.asarray(v, dtype=float)
    n = v.shape[0] // 2
    omega = np.zeros_like(v)
    for i in range(n):
        omega[2 * i, 2 * i + 1] = 1.0
        omega[2 * i + 1, 2 * i] = -1.0
    eig = np.linalg.eigvals(omega @ v)
    nu = np.sort(np.abs(eig.imag))
    return nu[::2]     # eigenvalues come in +/- i nu pairs


@dataclass(frozen=True)
class ReducedCM:
    """4x4 atom-mirror covariance matrix in 2x2 block form."""

    a: np.ndarray   # mechanical block
    b: np.ndarray   # atomic block
    c: np.ndarray   # cross correlations

    @property
    def full(self) -> np.ndarray:
        top = np.hstack((self.a, self.c))
        bot = np.hstack((self.c.T, self.b))
        return np.vstack((top, bot))


def reduce_atom_mirror(v: np.ndarray) -> ReducedCM:
    """Extract the mechanical/atomic 4x4 CM (rows 1,2 and 5,6)."""
    v = np.asarray(v, dtype=float)
    idx = np.array([0, 1, 4, 5])
    sub = v[np.ix_(idx, idx)]
    return ReducedCM(a=sub[:2, :2].copy(), b=sub[2:, 2:].copy(),
                     c=sub[:2, 2:].copy())


def log_negativity(rcm: ReducedCM) -> float:
    """Logarithmic negativity of the two-mode Gaussian state."""
    det_a = np.linalg.det(rcm.a)
    det_b = np.linalg.det(rcm.b)
    det_c = np.linalg.det(rcm.c)
    det_v = np.linalg.det(rcm.full)
    sigma = det_a + det_b - 2.0 * det_c
    disc = sigma ** 2 - 4.0 * det_v
    if disc < -1e-12:
        raise NonPhysical(
            f"negative discriminant {disc:g}; reduced CM is not a valid "
            "two-mode covariance matrix")
    disc = max(disc, 0.0)
    inner = 0.5 * (sigma - np.sqrt(disc))
    if inner <= 0.0:
        raise NonPhysical("partially transposed symplectic eigenvalue "
                          "collapsed to zero")
    eta_minus = np.sqrt(inner)
    return max(0.0, -np.log(2.0 * eta_minus))


def position_variance(v: np.ndarray) -> float:
    """Mechanical position variance <dq^2> = V_11."""
    return float(np.asarray(v)[0, 0])


def is_position_squeezed(v: np.ndarray) -> bool:
    return position_variance(v) < 0.5


def mean_phonon_number(v: np.ndarray) -> float:
    """Effective occupation n_eff = (V_11 + V_22 - 1)/2."""
    v = np.asarray(v)
    return float((v[0, 0] + v[1, 1] - 1.0) / 2.0)


def squeezing_parameter(mech_cm: np.ndarray
                        ) -> tuple[float, float, float]:
    """(lambda, r_raw, r_db) of the mechanical 2x2 block.

    lambda is the smaller CM eigenvalue by the closed form
    m - sqrt(m^2 - det).  r_raw = -10 log10(lambda) as printed in the
    source convention; r_db = -10 log10(2 lambda) is normalized so the
    vacuum reads 0 dB.
    """
    mech_cm = np.asarray(mech_cm, dtype=float)
    det = np.linalg.det(mech_cm)
    if det <= 0.0:
        raise NonPositive(f"mechanical block determinant {det:g} <= 0")
    m = 0.5 * np.trace(mech_cm)
    lam = m - np.sqrt(max(m * m - det, 0.0))
    if lam <= 0.0:
        raise NonPositive("mechanical block not positive definite")
    r_raw = -10.0 * np.log10(lam)
    r_db = -10.0 * np.log10(2.0 * lam)
    return float(lam), float(r_raw), float(r_db)


def principal_axis_angle(mech_cm: np.ndarray) -> float:
    """Orientation of the major variance axis, in [-pi/2, pi/2)."""
    mech_cm = np.asarray(mech_cm, dtype=float)
    # doubled-angle form avoids the eigenvector sign ambiguity
    return 0.5 * np.arctan2(2.0 * mech_cm[0, 1],
                            mech_cm[0, 0] - mech_cm[1, 1])


@dataclass
class WignerGrid:
    axes: tuple[np.ndarray, ...]
    values: np.ndarray

    def integral(self) -> float:
        out = self.values
        for ax in reversed(self.axes):
            out = np.trapezoid(out, ax, axis=-1)
        return float(out)


def wigner(cm: np.ndarray, span_sigmas: float = 6.0,
           points: int = 201,
           axes: tuple[np.ndarray, ...] | None = None) -> WignerGrid:
    """Gaussian Wigner density on a phase-space grid (zero first moments).

    For a 2N x 2N covariance matrix the grid covers all 2N coordinates;
    practical use is the single-mode case (2x2 CM, 2-D grid).
    """
    cm = np.asarray(cm, dtype=float)
    dim = cm.shape[0]
    n_modes = dim // 2
    det = np.linalg.det(cm)
    if det < 1e-300:
        raise SingularCM(f"covariance determinant {det:g} underflows")
    inv = np.linalg.inv(cm)
    if axes is None:
        sig = np.sqrt(np.diag(cm))
        axes = tuple(np.linspace(-span_sigmas * s, span_sigmas * s, points)
                     for s in sig)
    mesh = np.meshgrid(*axes, indexing="ij")
    r = np.stack([m.ravel() for m in mesh], axis=1)
    quad = np.einsum("ni,ij,nj->n", r, inv, r)
    norm = 1.0 / ((2.0 * np.pi) ** n_modes * np.sqrt(det))
    values = norm * np.exp(-0.5 * quad)
    return WignerGrid(axes=tuple(axes),
                      values=values.reshape(mesh[0].shape))
