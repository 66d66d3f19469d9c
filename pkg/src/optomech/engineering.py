"""Drive engineering for a target effective coupling G(t) = G1 + G2 e^{-i Omega t}.

Given the target, the cavity mean follows directly; momentum and atomic
means come from a Laplace-transform solution as sums of exponentials, and
the exact drive E(t) is synthesized by substituting back into the
mean-value ODEs.  Long-time asymptotes and the four-component truncated
drive are provided alongside the exact transient forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DegenerateExponents, SingularDenominator
from .model import DriveSpec, EngineeredCoupling, FirstMoments, SystemParams

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class LaplaceCoefficients:
    """Exponents s_i and amplitudes k_i of the transient solution.

    <p(t)> = sum_{i=1..4} k_i e^{s_i t};  <c(t)> = sum_{i=5..7} k_i e^{s_i t}.
    """

    s: tuple[complex, ...]   # s1..s7
    k: tuple[complex, ...]   # k1..k7


def _check_target(params: SystemParams, target: EngineeredCoupling):
    om = target.big_omega
    if om == 0.0:
        raise SingularDenominator("engineered drive requires Omega > 0")
    if abs(om ** 2 - params.omega_m ** 2) < 1e-9:
        raise SingularDenominator(
            "Omega coincides with omega_m; the long-time denominators "
            "Omega^2 - omega_m^2 vanish")


def laplace_coefficients(params: SystemParams, target: EngineeredCoupling
                         ) -> LaplaceCoefficients:
    _check_target(params, target)
    gm = params.gamma_m
    om = params.omega_m
    big = target.big_omega
    g = params.g
    g0 = params.g0_collective
    g1, g2 = target.g1, target.g2

    root = np.sqrt(complex(gm ** 2 - 4.0 * om ** 2))
    s1 = (-gm + root) / 2.0
    s2 = (-gm - root) / 2.0
    s3 = -1j * big
    s4 = 1j * big
    s5 = 0.0 + 0j
    s6 = s3
    s7 = -(params.gamma_a + 1j * params.delta_c)

    for x, y in combinations((s1, s2, s3, s4), 2):
        if abs(x - y) < 1e-10:
            raise DegenerateExponents(
                "mechanical exponents degenerate; partial fractions invalid")
    for x, y in combinations((s5, s6, s7), 2):
        if abs(x - y) < 1e-10:
            raise DegenerateExponents(
                "atomic exponents degenerate; partial fractions invalid")

    def k_mech(si, others):
        num = (g1 + g2) ** 2 * si ** 2 + (g1 ** 2 + g2 ** 2) * big ** 2
        den = 2.0 * g
        for so in others:
            den *= (si - so)
        return num / den

    k1 = k_mech(s1, (s2, s3, s4))
    k2 = k_mech(s2, (s1, s3, s4))
    k3 = k_mech(s3, (s1, s2, s4))
    k4 = k_mech(s4, (s1, s2, s3))

    def k_atom(si, others):
        num = -1j * g0 * (g1 + g2) * si + g0 * g1 * big
        den = SQRT2 * g
        for so in others:
            den *= (si - so)
        return num / den

    k5 = k_atom(s5, (s6, s7))
    k6 = k_atom(s6, (s5, s7))
    k7 = k_atom(s7, (s5, s6))

    return LaplaceCoefficients(s=(s1, s2, s3, s4, s5, s6, s7),
                               k=(k1, k2, k3, k4, k5, k6, k7))


def _cavity_mean(params: SystemParams, target: EngineeredCoupling, t):
    return (target.g1 + target.g2 * np.exp(-1j * target.big_omega * t)) \
        / (SQRT2 * params.g)


def transient_first_moments(params: SystemParams,
                            target: EngineeredCoupling, t: float,
                            lc: LaplaceCoefficients | None = None
                            ) -> FirstMoments:
    """Exact pre-asymptotic mean values at time t.

    <q> is reconstructed from the momentum equation with <pdot> evaluated
    by term-by-term differentiation of the exponential sum (never by
    finite differences).
    """
    lc = lc or laplace_coefficients(params, target)
    s = np.asarray(lc.s)
    k = np.asarray(lc.k)
    exp_m = k[:4] * np.exp(s[:4] * t)
    p = np.sum(exp_m)
    pdot = np.sum(s[:4] * exp_m)
    a = _cavity_mean(params, target, t)
    q = (-pdot - params.gamma_m * p + params.g * abs(a) ** 2) \
        / params.omega_m
    c = np.sum(k[4:] * np.exp(s[4:] * t))
    return FirstMoments(q=q.real, p=p.real, a=complex(a), c=complex(c))


def asymptotic_first_moments(params: SystemParams,
                             target: EngineeredCoupling, t: float
                             ) -> FirstMoments:
    """Long-time closed forms after the damped exponentials die out."""
    _check_target(params, target)
    g = params.g
    om = params.omega_m
    big = target.big_omega
    g0 = params.g0_collective
    g1, g2 = target.g1, target.g2
    dd = big ** 2 - om ** 2

    a = _cavity_mean(params, target, t)
    ph = np.exp(-1j * big * t)
    p = (1j * g1 * g2 * big / (2.0 * g * dd)) * (ph - np.conj(ph))
    q = ((g1 ** 2 + g2 ** 2) / (2.0 * g * om)
         - (g1 * g2 * om / (2.0 * g * dd)) * (ph + np.conj(ph)))
    c = (-1j * g0 * g1 / (SQRT2 * g * (params.gamma_a
                                       + 1j * params.delta_c))
         + g0 * g2 * ph / (SQRT2 * 1j * g
                           * (params.gamma_a
                              + 1j * (params.delta_c - big))))
    return FirstMoments(q=q.real, p=p.real, a=complex(a), c=complex(c))


def modulation_components(params: SystemParams,
                          target: EngineeredCoupling) -> DriveSpec:
    """Truncated four-component drive realizing the target coupling."""
    _check_target(params, target)
    g = params.g
    om = params.omega_m
    big = target.big_omega
    g0 = params.g0_collective
    g1, g2 = target.g1, target.g2
    dd = big ** 2 - om ** 2
    kap = params.kappa
    da = params.delta_a
    ga = params.gamma_a
    dc = params.delta_c

    e2 = 1j * g1 * g2 ** 2 * om / (2.0 * SQRT2 * g * dd)
    em1 = 1j * g1 ** 2 * g2 * om / (2.0 * SQRT2 * g * dd)
    e1 = (g2 / (SQRT2 * g) * (kap + 1j * (da - big))
          - 1j * g2 / (2.0 * SQRT2 * g * om)
          * (2.0 * g1 ** 2 + g2 ** 2 - g1 ** 2 * big ** 2 / dd)
          + g0 ** 2 * g2 / (SQRT2 * g * (ga + 1j * (dc - big))))
    e0 = (g1 / (SQRT2 * g) * (kap + 1j * da)
          - 1j * g1 / (2.0 * SQRT2 * g * om)
          * (g1 ** 2 + 2.0 * g2 ** 2 - g2 ** 2 * big ** 2 / dd)
          + g0 ** 2 * g1 / (SQRT2 * g * (ga + 1j * dc)))
    return DriveSpec(big_omega=big,
                     components={2: e2, 1: e1, 0: e0, -1: em1})


def exact_drive(params: SystemParams, target: EngineeredCoupling, t,
                lc: LaplaceCoefficients | None = None):
    """Pre-asymptotic drive E(t) synthesized from the exact mean values."""
    lc = lc or laplace_coefficients(params, target)
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t_arr.shape, dtype=complex)
    big = target.big_omega
    for i, ti in enumerate(t_arr):
        fm = transient_first_moments(params, target, ti, lc)
        adot = (-1j * big * target.g2 * np.exp(-1j * big * ti)
                / (SQRT2 * params.g))
        out[i] = (adot + (params.kappa + 1j * params.delta_a) * fm.a
                  - 1j * params.g * fm.a * fm.q
                  + 1j * params.g0_collective * fm.c)
    if np.ndim(t) == 0:
        return complex(out[0])
    return out
