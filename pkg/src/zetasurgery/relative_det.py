"""Relative zeta functions and relative determinants of pairs (H, H0).

A pair is described by its relative heat trace, which for the product
models here is a finite combination of cross-section heat traces:

    Tr(e^{-tH} - e^{-tH0}) = sum over rules (w, q) of  w t^q theta_Y(t).

Neumann-vs-Dirichlet half-cylinders give the rule (1/2, 0); moving the
Dirichlet end of a half-cylinder out by a gives (a / sqrt(4 pi), -1/2).

The relative zeta function is split at t = 1.  The piece on [0, 1] uses the
small-time expansion for the singular part and integrates the (directly
summed) remainder on [T_MIN, 1]; the piece on [1, inf) uses the large-time
constant b0 and closed-form incomplete-gamma integrals for every mode.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np
from scipy import integrate

from .errors import AccuracyError, InvalidArgumentError
from .special_fn import EULER_GAMMA, rgamma, upper_incomplete_gamma
from .spectra import CrossSectionSpectrum, heat_trace, shift_spectrum, spectrum_from_dict

FOUR_PI = 4.0 * math.pi
# below T_MIN the remainder of the small-time expansion is neglected
T_MIN = 1e-3
# terms of the e^{-zt} expansion kept in the small-time series
_EXP_ORDER = 10
_NU_MAX = 80.0

PAIR_KINDS = ("identical", "neumann-vs-dirichlet", "translate", "neumann-translate")


@dataclass(frozen=True)
class RelativePair:
    """Relative heat trace sum_i w_i t^{q_i} theta(t) over a cross-section."""

    spectrum: CrossSectionSpectrum
    rules: tuple[tuple[float, float], ...]
    tag: str = "custom"
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        for _, q in self.rules:
            if q > 0:
                raise InvalidArgumentError("rules with q > 0 have no large-time limit")

    def rel_heat_trace(self, t: float) -> float:
        theta = heat_trace(self.spectrum, t)
        return math.fsum(w * t**q * theta for w, q in self.rules)

    @property
    def b0(self) -> float:
        h = self.spectrum.h_Y
        return math.fsum(w * h for w, q in self.rules if q == 0.0)

    @property
    def rho(self) -> float:
        """Decay exponent of rel_heat_trace - b0 (math.inf: exponential)."""
        if self.spectrum.h_Y and any(q < 0 for _, q in self.rules):
            return -max(q for _, q in self.rules if q < 0)
        return math.inf

    def small_t_coeffs(self, order: int = _EXP_ORDER) -> list[tuple[float, float]]:
        """(alpha_j, a_j) with rel_heat_trace ~ sum a_j t^alpha_j as t -> 0.

        The expansion is exact up to exponentially small terms once the
        factor e^{-zt} of a shifted spectrum is expanded to `order`.
        """
        z = self.spectrum.shift
        acc: dict[float, float] = {}
        for w, q in self.rules:
            for c, p in self.spectrum.generator.small_t_terms():
                term = w * c
                for n in range(order + 1 if z else 1):
                    alpha = q + p + n
                    acc[alpha] = acc.get(alpha, 0.0) + term
                    term *= -z / (n + 1)
        return sorted((a, c) for a, c in acc.items() if c != 0.0)

    def large_t_terms(self) -> list[tuple[float, float, float]]:
        """(c, p, nu) with rel_heat_trace - b0 = sum c t^p e^{-nu t} up to
        modes with nu > _NU_MAX (each below e^{-80} on t >= 1)."""
        out = []
        for w, q in self.rules:
            for mu, m in self.spectrum.modes(_NU_MAX):
                if mu == 0.0 and q == 0.0:
                    continue  # this is b0
                out.append((w * m, q, mu))
        return out

    def shifted(self, lam: float) -> "RelativePair":
        return RelativePair(shift_spectrum(self.spectrum, lam), self.rules, self.tag, self.params)

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.tag, "params": dict(self.params), "spectrum": self.spectrum.to_dict()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def make_pair(kind: str, spectrum: CrossSectionSpectrum, a: float = 0.0) -> RelativePair:
    """Named per-mode rules: identical, neumann-vs-dirichlet, translate(a),
    neumann-translate(a)."""
    if kind not in PAIR_KINDS:
        raise InvalidArgumentError(f"unknown pair kind {kind}; expected one of {PAIR_KINDS}")
    if kind in ("translate", "neumann-translate") and not a > 0:
        raise InvalidArgumentError("translation length must be positive")
    rules: list[tuple[float, float]] = []
    if kind in ("neumann-vs-dirichlet", "neumann-translate"):
        rules.append((0.5, 0.0))
    if kind in ("translate", "neumann-translate"):
        rules.append((a / math.sqrt(FOUR_PI), -0.5))
    params = (("a", float(a)),) if kind in ("translate", "neumann-translate") else ()
    return RelativePair(spectrum, tuple(rules), kind, params)


def pair_from_dict(d: dict[str, Any]) -> RelativePair:
    spec = spectrum_from_dict(d["spectrum"])
    return make_pair(d["rule"], spec, d.get("params", {}).get("a", 0.0))


# ---- [0, 1] piece -------------------------------------------------------


def _series(coeffs: list[tuple[float, float]], t: float) -> float:
    return math.fsum(c * t**a for a, c in coeffs)


def zeta1_prime_zero(p: RelativePair) -> tuple[float, float]:
    """d/ds zeta_1 at s = 0 with an error estimate.

    zeta_1(s) Gamma(s) = sum a_j / (s + alpha_j) + int_0^1 t^{s-1} E(t) dt,
    and 1/Gamma(s) = s + gamma_E s^2 + ..., so the derivative at 0 is
    sum_{alpha != 0} a_j / alpha_j + gamma_E a_0 + int_0^1 E(t) dt / t.
    """
    coeffs = p.small_t_coeffs()
    if not coeffs:
        return 0.0, 0.0
    total = 0.0
    for alpha, c in coeffs:
        total += EULER_GAMMA * c if alpha == 0.0 else c / alpha

    def remainder_over_t(x: float) -> float:
        t = math.exp(x)
        return p.rel_heat_trace(t) - _series(coeffs, t)

    rem, quad_err = integrate.quad(remainder_over_t, math.log(T_MIN), 0.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    # neglected part on (0, T_MIN]: truncation of the e^{-zt} series and the
    # exponentially small dual terms, both bounded at T_MIN
    z = abs(p.spectrum.shift)
    trunc = sum(abs(w) for w, _ in p.rules) * (z * T_MIN) ** (_EXP_ORDER + 1) / math.factorial(_EXP_ORDER + 1)
    trunc *= max(abs(c) for _, c in coeffs) * T_MIN ** min(a for a, _ in coeffs)
    dual = abs(remainder_over_t(math.log(T_MIN)))
    return total + rem, quad_err + trunc + dual + 1e-13


# ---- [1, inf) piece -----------------------------------------------------


def _tail_integral(s: float, c: float, p_exp: float, nu: float) -> float:
    """int_1^inf t^{s-1} c t^p e^{-nu t} dt."""
    a = s + p_exp
    if nu == 0.0:
        if a >= 0:
            raise AccuracyError("large-time term does not decay")
        return -c / a
    return c * nu ** (-a) * upper_incomplete_gamma(a, nu)


def zeta2_closed_form(p: RelativePair, s: float) -> float:
    """zeta_2(s) = -b0 / Gamma(s+1) + (1/Gamma(s)) int_1^inf t^{s-1} (T - b0) dt."""
    body = math.fsum(_tail_integral(s, c, q, nu) for c, q, nu in p.large_t_terms())
    return -p.b0 * rgamma(s + 1.0) + rgamma(s) * body


def zeta2_raw(p: RelativePair, s: float) -> float:
    """(1/Gamma(s)) int_1^inf t^{s-1} T(t) dt by quadrature (needs s < 0 when b0 != 0)."""
    if p.b0 != 0.0 and s >= 0:
        raise InvalidArgumentError("the raw large-time integral needs s < 0")

    def f(t: float) -> float:
        return t ** (s - 1.0) * p.rel_heat_trace(t)

    val, _ = integrate.quad(f, 1.0, math.inf, epsabs=1e-14, epsrel=1e-12, limit=400)
    return rgamma(s) * val


def zeta2_prime_zero(p: RelativePair) -> tuple[float, float]:
    """d/ds zeta_2 at 0: -b0 gamma_E + int_1^inf (T - b0) dt / t."""
    body = math.fsum(_tail_integral(0.0, c, q, nu) for c, q, nu in p.large_t_terms())
    # modes above _NU_MAX contribute less than mult * e^{-80} each
    return -p.b0 * EULER_GAMMA + body, 1e-14 * (1.0 + abs(body))


def relative_zeta_prime_zero(p: RelativePair) -> tuple[float, float]:
    d1, e1 = zeta1_prime_zero(p)
    d2, e2 = zeta2_prime_zero(p)
    return d1 + d2, e1 + e2


def relative_log_det(p: RelativePair) -> tuple[float, float]:
    zp, err = relative_zeta_prime_zero(p)
    return -zp, err


def relative_det(p: RelativePair) -> float:
    return math.exp(relative_log_det(p)[0])


def b0_from_scattering(k: int, trace_S0: float, h_Y: int) -> float:
    """b0 = k + (Tr S(0) + h_Y) / 4, which equals k + l/2 with l = dim ker(S(0) - Id)."""
    if k < 0 or h_Y < 0:
        raise InvalidArgumentError("k and h_Y must be nonnegative")
    if abs(trace_S0) > h_Y:
        raise InvalidArgumentError("|Tr S(0)| cannot exceed dim ker Delta_Y")
    if not float(trace_S0).is_integer() or (int(trace_S0) + h_Y) % 2:
        raise InvalidArgumentError("Tr S(0) + h_Y must be even for an involution")
    return k + (trace_S0 + h_Y) / 4.0


def small_lambda_probe(
    p: RelativePair, grid, log_det_at: Callable[[RelativePair], tuple[float, float]] = relative_log_det
) -> tuple[float, float]:
    """Fit log det(H + lam, H0 + lam) = slope log lam + constant on the grid.

    The smallest grid point is dropped when its error estimate exceeds 10% of
    the increment to its neighbour.
    """
    lams = sorted(float(x) for x in grid)
    if len(lams) < 4 or lams[0] <= 0:
        raise InvalidArgumentError("probe needs at least 4 positive grid points")
    vals = [log_det_at(p.shifted(lam)) for lam in lams]
    if vals[0][1] > 0.1 * abs(vals[1][0] - vals[0][0]):
        lams, vals = lams[1:], vals[1:]
    xs = np.log(lams)
    ys = np.array([v for v, _ in vals])
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)
