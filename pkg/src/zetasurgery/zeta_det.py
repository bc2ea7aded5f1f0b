"""Spectral zeta functions, zeta-regularized determinants and the xi function.

Everything is built on the Laurent data of the Mellin transform

    F(s) = Gamma(s) zeta(s) = int_0^inf t^(s-1) (theta(t) - h) dt

at a point s0.  The time axis is split at t = 1.  On [0, 1] the heat trace
is a finite power series (times the shift factor e^{-zt}) plus a remainder
that is exponentially small as t -> 0; the power-series part integrates in
closed form,

    int_0^1 t^(a-1) e^(-zt) dt = sum_n (-z)^n / (n! (a + n)),

which is meromorphic in a and exposes every pole.  Eigenvalues below a
small threshold are removed from the split and added back exactly, so the
t >= 1 integral only sees quickly decaying modes.

From the Laurent data (residue R, finite part F0) at s0 = 0:
zeta(0) = R and zeta'(0) = F0 + gamma_E R.  At s0 = -1/2 the same data give
xi(0) = R / sqrt(pi) and xi'(0) = (F0 + gamma_E R) / sqrt(pi), which covers
cross sections whose zeta function has a pole at -1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from scipy import integrate

from .errors import AccuracyError, DomainError
from .special_fn import EULER_GAMMA, digamma, gamma, upper_incomplete_gamma
from .spectra import CrossSectionSpectrum

SQRT_PI = math.sqrt(math.pi)

# eigenvalues at or below this are handled exactly rather than by quadrature
_MU_LOW = 4.0
# modes above this contribute below e^{-80} to the t >= 1 integral
_MU_HIGH = 80.0


@dataclass(frozen=True)
class Laurent:
    """Residue and finite part of a function with at most a simple pole."""

    residue: float
    finite: float
    error: float = 0.0

    def __add__(self, other: "Laurent") -> "Laurent":
        return Laurent(
            self.residue + other.residue, self.finite + other.finite, self.error + other.error
        )

    def scale(self, c: float) -> "Laurent":
        return Laurent(c * self.residue, c * self.finite, abs(c) * self.error)


def _is_pole_point(a: float) -> bool:
    return a <= 0 and float(a).is_integer()


def _unit_mellin(a0: float, z: float) -> Laurent:
    """Laurent data of a -> int_0^1 t^(a-1) e^(-z t) dt at a = a0."""
    if z == 0.0:
        return Laurent(1.0, 0.0) if a0 == 0.0 else Laurent(0.0, 1.0 / a0)
    if z > 2.0:
        return _unit_mellin_recurrence(a0, z)
    return _unit_mellin_series(a0, z)


def _unit_mellin_recurrence(a0: float, z: float) -> Laurent:
    # The power series in z cancels badly for large z.  Start instead from
    # a base point in (0, 1] (or the pole at 0) and step down with
    # J(a) = (e^{-z} + z J(a+1)) / a, carried on Laurent data.
    from scipy import special

    steps = max(0, int(math.ceil(-a0)))
    base = a0 + steps
    if base == 0.0:
        # finite part of int_0^1 (e^{-zt} - 1) / t dt = -(gamma + log z + E1(z))
        cur = Laurent(1.0, -(EULER_GAMMA + math.log(z) + float(special.exp1(z))))
    else:
        if base <= 0.0:
            base += 1.0
            steps += 1
        cur = Laurent(0.0, z ** (-base) * gamma(base) * float(special.gammainc(base, z)))
    ez = math.exp(-z)
    a = base
    for _ in range(steps):
        a -= 1.0
        res = z * cur.residue
        fin = ez + z * cur.finite
        if a == 0.0:
            raise AssertionError("unreachable: base chosen so that a = 0 is never stepped through")
        cur = Laurent(res / a, fin / a - res / (a * a), cur.error * z / abs(a))
    return Laurent(cur.residue, cur.finite, cur.error + 1e-15 * abs(cur.finite))


def _unit_mellin_series(a0: float, z: float) -> Laurent:
    res = 0.0
    parts = []
    term = 1.0  # (-z)^n / n!
    n = 0
    biggest = 0.0
    while True:
        denom = a0 + n
        if denom == 0.0:
            res += term
        else:
            parts.append(term / denom)
            biggest = max(biggest, abs(term / denom))
        n += 1
        term *= -z / n
        if n > abs(z) + abs(a0) + 5 and abs(term) < 1e-20 * max(biggest, 1e-300):
            break
    fin = math.fsum(parts)
    return Laurent(res, fin, 4e-16 * biggest * math.sqrt(n) + 1e-300)


def _gamma_power_laurent(s0: float, mu: float) -> Laurent:
    """Laurent data of Gamma(s) mu^(-s) at s0, for mu > 0."""
    if _is_pole_point(s0):
        n = int(-s0)
        c = (-1) ** n / math.factorial(n) * mu**n
        return Laurent(c, c * (digamma(n + 1.0) - math.log(mu)))
    return Laurent(0.0, gamma(s0) * mu ** (-s0))


def _small_time_remainder(spec: CrossSectionSpectrum, s0: float) -> tuple[float, float]:
    """int_0^1 t^(s0-1) e^(-zt) E(t) dt with t = e^{-x}."""
    gen, z = spec.generator, spec.shift

    def f(x: float) -> float:
        t = math.exp(-x)
        return math.exp(-s0 * x - z * t) * gen.remainder(t)

    # t = e^{-60} is far inside the region where E(t) underflows
    val, err = integrate.quad(f, 0.0, 60.0, epsabs=1e-15, epsrel=1e-13, limit=400)
    return val, err


def _large_time_modes(spec: CrossSectionSpectrum, s0: float) -> tuple[float, float]:
    """sum over modes mu > _MU_LOW of mult * int_1^inf t^(s0-1) e^(-mu t) dt."""
    terms = []
    for mu, m in spec.modes(_MU_HIGH):
        if mu > _MU_LOW:
            terms.append(m * mu ** (-s0) * upper_incomplete_gamma(s0, mu))
    total = math.fsum(terms)
    return total, 1e-15 * sum(abs(x) for x in terms) + 1e-30


@lru_cache(maxsize=4096)
def mellin_laurent(spec: CrossSectionSpectrum, s0: float) -> Laurent:
    """Laurent data at s0 of Gamma(s) zeta(s) for the positive part of spec."""
    s0 = float(s0)
    gen = spec.generator
    if not gen.complete:
        raise AccuracyError(
            "explicit spectrum is marked incomplete: the zeta continuation cannot be certified"
        )
    if gen.finite:
        out = Laurent(0.0, 0.0)
        for mu, m in spec.positive_modes(math.inf):
            out = out + _gamma_power_laurent(s0, mu).scale(m)
        return out

    z = spec.shift
    out = Laurent(0.0, 0.0)
    for c, p in gen.small_t_terms():
        out = out + _unit_mellin(s0 + p, z).scale(c)
    low = spec.modes(_MU_LOW)
    for mu, m in low:
        out = out + _unit_mellin(s0, mu).scale(-m)
    rem, rem_err = _small_time_remainder(spec, s0)
    big, big_err = _large_time_modes(spec, s0)
    out = out + Laurent(0.0, rem + big, rem_err + big_err)
    for mu, m in low:
        if mu > 0.0:
            out = out + _gamma_power_laurent(s0, mu).scale(m)
    return out


def zeta_at(spec: CrossSectionSpectrum, s: float) -> tuple[float, float]:
    """zeta(s) of the positive part of spec, with an absolute error estimate."""
    s = float(s)
    lau = mellin_laurent(spec, s)
    if _is_pole_point(s):
        n = int(-s)
        k = (-1) ** n * math.factorial(n)
        return k * lau.residue, abs(k) * lau.error
    if abs(lau.residue) > max(1e3 * lau.error, 1e-13):
        raise DomainError(f"zeta has a pole at s = {s} (residue of Gamma*zeta = {lau.residue:.6g})")
    g = gamma(s)
    return lau.finite / g, lau.error / abs(g)


def zeta_at_zero(spec: CrossSectionSpectrum) -> float:
    return zeta_at(spec, 0.0)[0]


def zeta_prime_zero(spec: CrossSectionSpectrum) -> tuple[float, float]:
    lau = mellin_laurent(spec, 0.0)
    return lau.finite + EULER_GAMMA * lau.residue, lau.error * (1.0 + EULER_GAMMA)


def log_det_zeta(spec: CrossSectionSpectrum) -> float:
    return -zeta_prime_zero(spec)[0]


def det_zeta(spec: CrossSectionSpectrum) -> float:
    """exp(-zeta'(0)); an empty positive spectrum gives 1."""
    return math.exp(log_det_zeta(spec))


def xi_at(spec: CrossSectionSpectrum, s: float) -> float:
    """xi(s) = Gamma(s - 1/2) zeta(s - 1/2) / (sqrt(pi) Gamma(s)), for s near 0."""
    s = float(s)
    if s == 0.0:
        return mellin_laurent(spec, -0.5).residue / SQRT_PI
    lau = mellin_laurent(spec, s - 0.5)
    if abs(lau.residue) > max(1e3 * lau.error, 1e-13):
        raise DomainError(f"xi is not finite at s = {s}")
    return lau.finite / (SQRT_PI * gamma(s))


def xi_prime_zero(spec: CrossSectionSpectrum, strict: bool = False) -> tuple[float, float]:
    """xi'(0) with an error estimate.

    When zeta is regular at -1/2 this is -2 zeta(-1/2).  A simple pole at
    -1/2 (shifted circles, for instance) is handled through the Laurent data;
    pass strict=True to refuse that case instead.
    """
    lau = mellin_laurent(spec, -0.5)
    if strict and abs(lau.residue) > max(1e3 * lau.error, 1e-13):
        raise DomainError(
            "zeta has a pole at -1/2; xi'(0) needs the full Laurent handling (strict mode)"
        )
    value = (lau.finite + EULER_GAMMA * lau.residue) / SQRT_PI
    return value, lau.error * (1.0 + EULER_GAMMA) / SQRT_PI


def xi_zero(spec: CrossSectionSpectrum) -> float:
    return mellin_laurent(spec, -0.5).residue / SQRT_PI


def zeta_direct(spec: CrossSectionSpectrum, s: float, mu_max: float | None = None) -> float:
    """Truncated direct sum of mult * mu^(-s) over positive eigenvalues."""
    top = spec.cutoff if mu_max is None else mu_max
    return math.fsum(m * mu ** (-s) for mu, m in spec.positive_modes(top))


@dataclass
class ZetaFunction:
    """Zeta function of a spectrum with a per-instance cache of evaluations."""

    spectrum: CrossSectionSpectrum
    cache: dict[float, tuple[float, float]] = field(default_factory=dict)

    @property
    def method(self) -> str:
        return "closed-form" if self.spectrum.generator.finite else "mellin-split"

    def __call__(self, s: float) -> tuple[float, float]:
        s = float(s)
        if s not in self.cache:
            self.cache[s] = zeta_at(self.spectrum, s)
        return self.cache[s]

    def derivative_at_zero(self) -> tuple[float, float]:
        return zeta_prime_zero(self.spectrum)
