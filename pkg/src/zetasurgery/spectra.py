"""Cross-section spectra: eigenvalue data of the cross-section Laplacian.

A spectrum is a closed-form generator (circle, torus, interval, point,
explicit list, or a product of two generators) together with a constant
shift z, so the eigenvalues are mu + z for the generator eigenvalues mu.
Generators enumerate modes by integer index, which keeps degenerate
eigenvalues merged exactly, and they know their heat trace both as a direct
mode sum and as a small-time power expansion plus a remainder that is
computed without cancellation.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

import numpy as np

from .errors import InvalidArgumentError, TruncationWarning

FOUR_PI = 4.0 * math.pi
# exp(-x) below this many e-folds is dropped from direct sums
_EXP_CUT = 45.0


def _theta_tail_count(scale: float, t: float) -> int:
    """Number of indices k with scale * k^2 * t <= _EXP_CUT."""
    return int(math.sqrt(_EXP_CUT / (scale * t))) + 2


def _jacobi_remainder(length: float, t: float, alternating: bool = False) -> float:
    """2 sum_{k>=1} (+-1)^k exp(-length^2 k^2 / (4t)), the exponentially
    small part of a Jacobi theta dual sum."""
    n = _theta_tail_count(length * length / 4.0, 1.0 / t)
    k = np.arange(1, n + 1, dtype=float)
    terms = np.exp(-(length * length) * k * k / (4.0 * t))
    if alternating:
        terms = terms * np.where(k % 2 == 1, -1.0, 1.0)
    return 2.0 * float(np.sum(terms))


class Generator:
    """Interface for closed-form spectra (base eigenvalues, before shifting)."""

    kind: str = "generator"
    finite: bool = False
    complete: bool = True

    @property
    def zero_count(self) -> int:
        raise NotImplementedError

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        """Eigenvalues <= mu_max with multiplicities, ascending, zero included."""
        raise NotImplementedError

    def heat(self, t: float) -> float:
        """Direct mode sum of the heat trace, zero modes included."""
        raise NotImplementedError

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        """Pairs (coefficient, power) with heat(t) = sum c t^p + remainder(t)."""
        raise NotImplementedError

    def remainder(self, t: float) -> float:
        raise NotImplementedError

    def series_part(self, t: float) -> float:
        return sum(c * t**p for c, p in self.small_t_terms())

    def sqrt_gap(self) -> float:
        """alpha such that the k-th positive mode satisfies sqrt(mu) >= alpha * k."""
        raise NotImplementedError

    def tail_bound(self, mu_max: float, c: float) -> float:
        """Upper bound for sum over modes mu > mu_max of mult * exp(-c sqrt(mu))."""
        raise NotImplementedError

    def params(self) -> dict[str, Any]:
        raise NotImplementedError

    def tag(self) -> str:
        inner = ", ".join(f"{v}" for v in self.params().values())
        return f"{self.kind}({inner})"


def _linear_tail(mu_max: float, c: float, w: float, delta: float, mult: int) -> float:
    """Bound for mult * sum exp(-c sqrt(mu_k)) over modes sqrt(mu_k) = w (k - delta)
    exceeding sqrt(mu_max)."""
    k1 = int(math.floor(math.sqrt(max(mu_max, 0.0)) / w + delta)) + 1
    q = math.exp(-c * w)
    if q >= 1.0:
        return math.inf
    return mult * math.exp(-c * w * (k1 - delta)) / (1.0 - q)


@dataclass(frozen=True)
class CircleGenerator(Generator):
    length: float
    kind = "circle"

    @property
    def zero_count(self) -> int:
        return 1

    def _scale(self) -> float:
        return (2.0 * math.pi / self.length) ** 2

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        out = [(0.0, 1)] if mu_max >= 0 else []
        kmax = int(math.floor(math.sqrt(max(mu_max, 0.0) / self._scale()))) + 1
        for k in range(1, kmax + 1):
            mu = self._scale() * k * k
            if mu <= mu_max:
                out.append((mu, 2))
        return out

    def heat(self, t: float) -> float:
        n = _theta_tail_count(self._scale(), t)
        k = np.arange(1, n + 1, dtype=float)
        return 1.0 + 2.0 * float(np.sum(np.exp(-self._scale() * k * k * t)))

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        return ((self.length / math.sqrt(FOUR_PI), -0.5),)

    def remainder(self, t: float) -> float:
        return self.length / math.sqrt(FOUR_PI * t) * _jacobi_remainder(self.length, t)

    def sqrt_gap(self) -> float:
        return 2.0 * math.pi / self.length

    def tail_bound(self, mu_max: float, c: float) -> float:
        return _linear_tail(mu_max, c, self.sqrt_gap(), 0.0, 2)

    def params(self) -> dict[str, Any]:
        return {"length": self.length}


_INTERVAL_BCS = ("DD", "DN", "NN")


@dataclass(frozen=True)
class IntervalGenerator(Generator):
    """-d^2/dx^2 on [0, length] with Dirichlet (D) or Neumann (N) ends."""

    length: float
    bc: str = "DD"
    kind = "interval"

    def __post_init__(self) -> None:
        if self.bc not in _INTERVAL_BCS:
            raise InvalidArgumentError(f"interval boundary pair must be one of {_INTERVAL_BCS}")

    @property
    def zero_count(self) -> int:
        return 1 if self.bc == "NN" else 0

    def _mu(self, k: int) -> float:
        w = math.pi / self.length
        if self.bc == "DN":
            return (w * (k - 0.5)) ** 2
        return (w * k) ** 2

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        out = []
        k = 0 if self.bc == "NN" else 1
        while True:
            mu = self._mu(k)
            if mu > mu_max:
                return out
            out.append((mu, 1))
            k += 1

    def heat(self, t: float) -> float:
        w2 = (math.pi / self.length) ** 2
        n = _theta_tail_count(w2, t)
        k = np.arange(1, n + 1, dtype=float)
        if self.bc == "DN":
            k = k - 0.5
        total = float(np.sum(np.exp(-w2 * k * k * t)))
        return total + (1.0 if self.bc == "NN" else 0.0)

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        lead = (self.length / math.sqrt(FOUR_PI), -0.5)
        if self.bc == "DD":
            return (lead, (-0.5, 0.0))
        if self.bc == "NN":
            return (lead, (0.5, 0.0))
        return (lead,)

    def remainder(self, t: float) -> float:
        # Poisson dual of the interval theta sums, period 2 * length
        half = self.length / math.sqrt(FOUR_PI * t)
        return half * _jacobi_remainder(2.0 * self.length, t, alternating=self.bc == "DN")

    def sqrt_gap(self) -> float:
        # DN modes are pi (k - 1/2) / L >= pi k / (2L)
        return math.pi / self.length / (2.0 if self.bc == "DN" else 1.0)

    def tail_bound(self, mu_max: float, c: float) -> float:
        delta = 0.5 if self.bc == "DN" else 0.0
        return _linear_tail(mu_max, c, math.pi / self.length, delta, 1)

    def params(self) -> dict[str, Any]:
        return {"length": self.length, "bc": self.bc}


@dataclass(frozen=True)
class TorusGenerator(Generator):
    """Flat torus R^2 / (l1 Z x l2 Z)."""

    length1: float
    length2: float
    kind = "torus"

    @property
    def zero_count(self) -> int:
        return 1

    def _factors(self) -> tuple[CircleGenerator, CircleGenerator]:
        return CircleGenerator(self.length1), CircleGenerator(self.length2)

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        s1 = (2.0 * math.pi / self.length1) ** 2
        s2 = (2.0 * math.pi / self.length2) ** 2
        if mu_max < 0:
            return []
        k1max = int(math.sqrt(mu_max / s1)) + 1
        k2max = int(math.sqrt(mu_max / s2)) + 1
        merged: dict[Any, list] = {}
        square = self.length1 == self.length2
        for k1 in range(0, k1max + 1):
            for k2 in range(0, k2max + 1):
                mu = s1 * k1 * k1 + s2 * k2 * k2
                if mu > mu_max:
                    continue
                mult = (2 if k1 else 1) * (2 if k2 else 1)
                # integer keys: exact merging of degenerate lattice shells
                key = k1 * k1 + k2 * k2 if square else (k1, k2)
                if key in merged:
                    merged[key][1] += mult
                else:
                    merged[key] = [mu, mult]
        return sorted((float(mu), int(m)) for mu, m in merged.values())

    def heat(self, t: float) -> float:
        a, b = self._factors()
        return a.heat(t) * b.heat(t)

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        return ((self.length1 * self.length2 / FOUR_PI, -1.0),)

    def remainder(self, t: float) -> float:
        a, b = self._factors()
        sa, sb = a.series_part(t), b.series_part(t)
        ra, rb = a.remainder(t), b.remainder(t)
        return sa * rb + ra * sb + ra * rb

    def sqrt_gap(self) -> float:
        return 2.0 * math.pi / max(self.length1, self.length2)

    def tail_bound(self, mu_max: float, c: float) -> float:
        # shells |k|_inf = n hold at most 8n lattice points, each with
        # sqrt(mu) >= alpha n; omitted points have n >= n0
        alpha = self.sqrt_gap()
        widest = 2.0 * math.pi / min(self.length1, self.length2) * math.sqrt(2.0)
        n0 = max(1, int(math.floor(math.sqrt(max(mu_max, 0.0)) / widest)))
        q = math.exp(-c * alpha)
        if q >= 1.0:
            return math.inf
        return 8.0 * q**n0 * (n0 - (n0 - 1) * q) / (1.0 - q) ** 2

    def params(self) -> dict[str, Any]:
        return {"length1": self.length1, "length2": self.length2}


@dataclass(frozen=True)
class PointGenerator(Generator):
    """A point cross-section carrying an n-dimensional fibre: eigenvalue 0, mult n."""

    n: int = 1
    kind = "point"
    finite = True

    @property
    def zero_count(self) -> int:
        return self.n

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        return [(0.0, self.n)] if mu_max >= 0 else []

    def heat(self, t: float) -> float:
        return float(self.n)

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        return ((float(self.n), 0.0),)

    def remainder(self, t: float) -> float:
        return 0.0

    def sqrt_gap(self) -> float:
        return math.inf

    def tail_bound(self, mu_max: float, c: float) -> float:
        return 0.0

    def params(self) -> dict[str, Any]:
        return {"n": self.n}


@dataclass(frozen=True)
class ExplicitGenerator(Generator):
    """User-supplied eigenvalue list.

    With complete=True the list is the whole spectrum (a finite operator).
    With complete=False it is a truncation of an unknown infinite spectrum;
    sums that need the missing tail cannot be certified.
    """

    values: tuple[tuple[float, int], ...]
    complete: bool = True
    kind = "explicit-list"
    finite = True

    def __post_init__(self) -> None:
        mus = [mu for mu, _ in self.values]
        if any(mu < 0 for mu in mus) or any(m <= 0 for _, m in self.values):
            raise InvalidArgumentError("explicit eigenvalues must be >= 0 with positive multiplicities")
        if any(b <= a for a, b in zip(mus, mus[1:])):
            raise InvalidArgumentError("explicit eigenvalues must be strictly ascending")

    @property
    def zero_count(self) -> int:
        return sum(m for mu, m in self.values if mu == 0.0)

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        return [(float(mu), int(m)) for mu, m in self.values if mu <= mu_max]

    def heat(self, t: float) -> float:
        if not self.complete:
            warnings.warn("heat trace of a truncated explicit list", TruncationWarning, stacklevel=3)
        return math.fsum(m * math.exp(-mu * t) for mu, m in self.values)

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        return ((float(sum(m for _, m in self.values)), 0.0),)

    def remainder(self, t: float) -> float:
        return self.heat(t) - self.series_part(t)

    def sqrt_gap(self) -> float:
        return math.inf

    def tail_bound(self, mu_max: float, c: float) -> float:
        if not self.complete:
            return math.inf
        return math.fsum(m * math.exp(-c * math.sqrt(mu)) for mu, m in self.values if mu > mu_max)

    def params(self) -> dict[str, Any]:
        return {"values": [list(v) for v in self.values], "complete": self.complete}


@dataclass(frozen=True)
class ProductGenerator(Generator):
    """Spectrum of A x 1 + 1 x B on a product: eigenvalues mu_a + mu_b."""

    first: Generator
    second: Generator
    kind = "product"

    @property
    def finite(self) -> bool:  # type: ignore[override]
        return self.first.finite and self.second.finite

    @property
    def zero_count(self) -> int:
        return self.first.zero_count * self.second.zero_count

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        out = []
        for mu_a, m_a in self.first.modes(mu_max):
            for mu_b, m_b in self.second.modes(mu_max - mu_a):
                out.append((mu_a + mu_b, m_a * m_b))
        out.sort()
        return out

    def heat(self, t: float) -> float:
        return self.first.heat(t) * self.second.heat(t)

    def small_t_terms(self) -> tuple[tuple[float, float], ...]:
        acc: dict[float, float] = {}
        for ca, pa in self.first.small_t_terms():
            for cb, pb in self.second.small_t_terms():
                acc[pa + pb] = acc.get(pa + pb, 0.0) + ca * cb
        return tuple((c, p) for p, c in sorted(acc.items()) if c != 0.0)

    def remainder(self, t: float) -> float:
        sa, sb = self.first.series_part(t), self.second.series_part(t)
        ra, rb = self.first.remainder(t), self.second.remainder(t)
        return sa * rb + ra * sb + ra * rb

    def sqrt_gap(self) -> float:
        return min(self.first.sqrt_gap(), self.second.sqrt_gap()) / math.sqrt(2.0)

    def tail_bound(self, mu_max: float, c: float) -> float:
        raise NotImplementedError("product spectra are used only through their heat trace")

    def params(self) -> dict[str, Any]:
        return {"first": generator_to_dict(self.first), "second": generator_to_dict(self.second)}

    def tag(self) -> str:
        return f"product({self.first.tag()}, {self.second.tag()})"


@dataclass(frozen=True)
class CrossSectionSpectrum:
    """Eigenvalues mu + shift of a generator, enumerated up to a cutoff.

    entries lists (eigenvalue, multiplicity) pairs <= cutoff in strictly
    ascending order; h_Y is the multiplicity of the eigenvalue 0.
    """

    generator: Generator
    shift: float = 0.0
    cutoff: float = 100.0
    entries: tuple[tuple[float, int], ...] = field(init=False, compare=False)
    h_Y: int = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not self.cutoff > 0:
            raise InvalidArgumentError("cutoff must be positive")
        z = float(self.shift)
        if z < 0 and (self.generator.zero_count > 0 or self.generator.modes(-z)):
            raise InvalidArgumentError("shift would produce a non-positive eigenvalue")
        base = self.generator.modes(self.cutoff - z)
        entries = tuple((mu + z, m) for mu, m in base if mu + z <= self.cutoff)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "h_Y", sum(m for mu, m in entries if mu == 0.0))

    @property
    def tail_descriptor(self) -> str:
        base = self.generator.tag()
        return f"shifted({base}, {self.shift})" if self.shift else base

    @property
    def base_zero_count(self) -> int:
        return self.generator.zero_count

    def modes(self, mu_max: float) -> list[tuple[float, int]]:
        """Shifted eigenvalues <= mu_max (not limited by the cutoff)."""
        z = self.shift
        return [(mu + z, m) for mu, m in self.generator.modes(mu_max - z)]

    def positive_modes(self, mu_max: float) -> list[tuple[float, int]]:
        return [(mu, m) for mu, m in self.modes(mu_max) if mu > 0.0]

    def modes_with_tail(self, c: float, tol: float = 1e-16) -> tuple[list[tuple[float, int]], float]:
        """Positive modes large enough that sum_{rest} mult e^{-c sqrt(mu)} <= tol.

        Returns the mode list and the certified bound on the omitted sum.
        """
        if self.generator.finite:
            return self.positive_modes(math.inf), 0.0
        if not self.generator.complete:
            raise InvalidArgumentError("truncated explicit spectra have no tail bound")
        mu_max = max(4.0 * self.generator.sqrt_gap() ** 2, 1.0)
        # sqrt(mu + z) >= sqrt(mu) - sqrt(|z|) covers negative shifts
        slack = math.exp(c * math.sqrt(-self.shift)) if self.shift < 0 else 1.0
        while True:
            bound = slack * self.generator.tail_bound(mu_max - self.shift, c)
            if bound <= tol:
                return self.positive_modes(mu_max), bound
            mu_max *= 2.0

    def to_dict(self) -> dict[str, Any]:
        gen = generator_to_dict(self.generator)
        if self.shift:
            desc: dict[str, Any] = {"generator": "shifted", "params": {"base": gen, "z": self.shift}}
        else:
            desc = dict(gen)
        desc.update(
            {"h_Y": self.h_Y, "entries": [[mu, m] for mu, m in self.entries], "cutoff": self.cutoff}
        )
        return desc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def generator_to_dict(gen: Generator) -> dict[str, Any]:
    return {"generator": gen.kind, "params": gen.params()}


def generator_from_dict(d: dict[str, Any]) -> Generator:
    kind, p = d["generator"], d.get("params", {})
    if kind == "circle":
        return CircleGenerator(float(p["length"]))
    if kind == "interval":
        return IntervalGenerator(float(p["length"]), p.get("bc", "DD"))
    if kind == "torus":
        return TorusGenerator(float(p["length1"]), float(p["length2"]))
    if kind == "point":
        return PointGenerator(int(p.get("n", 1)))
    if kind == "explicit-list":
        vals = tuple((float(mu), int(m)) for mu, m in p["values"])
        return ExplicitGenerator(vals, bool(p.get("complete", True)))
    if kind == "product":
        return ProductGenerator(generator_from_dict(p["first"]), generator_from_dict(p["second"]))
    raise InvalidArgumentError(f"unknown generator {kind!r}")


def spectrum_from_dict(d: dict[str, Any]) -> CrossSectionSpectrum:
    cutoff = float(d.get("cutoff", 100.0))
    if d["generator"] == "shifted":
        inner = dict(d["params"]["base"])
        inner.setdefault("cutoff", cutoff)
        base = spectrum_from_dict(inner)
        return shift_spectrum(base, float(d["params"]["z"]))
    return CrossSectionSpectrum(generator_from_dict(d), 0.0, cutoff)


def spectrum_from_json(text: str) -> CrossSectionSpectrum:
    return spectrum_from_dict(json.loads(text))


def _check_positive(name: str, value: float) -> None:
    if not (value > 0 and math.isfinite(value)):
        raise InvalidArgumentError(f"{name} must be a positive finite number")


@lru_cache(maxsize=256)
def circle_spectrum(length: float, cutoff: float = 100.0) -> CrossSectionSpectrum:
    """Laplacian on a circle of circumference `length`."""
    _check_positive("circumference", length)
    _check_positive("cutoff", cutoff)
    return CrossSectionSpectrum(CircleGenerator(float(length)), 0.0, float(cutoff))


def torus_spectrum(length1: float, length2: float, cutoff: float = 100.0) -> CrossSectionSpectrum:
    _check_positive("length1", length1)
    _check_positive("length2", length2)
    return CrossSectionSpectrum(TorusGenerator(float(length1), float(length2)), 0.0, float(cutoff))


def interval_spectrum(length: float, bc: str = "DD", cutoff: float = 100.0) -> CrossSectionSpectrum:
    _check_positive("length", length)
    return CrossSectionSpectrum(IntervalGenerator(float(length), bc), 0.0, float(cutoff))


def point_spectrum(n: int = 1, cutoff: float = 100.0) -> CrossSectionSpectrum:
    if n < 1:
        raise InvalidArgumentError("point fibre dimension must be >= 1")
    return CrossSectionSpectrum(PointGenerator(int(n)), 0.0, float(cutoff))


def explicit_spectrum(
    values: Iterable[tuple[float, int]], complete: bool = True, cutoff: float | None = None
) -> CrossSectionSpectrum:
    vals = tuple((float(mu), int(m)) for mu, m in values)
    top = cutoff if cutoff is not None else max([mu for mu, _ in vals] + [1.0])
    return CrossSectionSpectrum(ExplicitGenerator(vals, complete), 0.0, float(top))


def product_spectrum(a: CrossSectionSpectrum, b: CrossSectionSpectrum) -> CrossSectionSpectrum:
    """Spectrum of the Laplacian on a product, e.g. a cylinder Y x interval."""
    return CrossSectionSpectrum(
        ProductGenerator(a.generator, b.generator), a.shift + b.shift, max(a.cutoff, b.cutoff)
    )


def shift_spectrum(spec: CrossSectionSpectrum, z: float) -> CrossSectionSpectrum:
    """Add z to every eigenvalue.  Shifts compose additively on the generator."""
    z = float(z)
    if z == 0.0:
        return spec
    return CrossSectionSpectrum(spec.generator, spec.shift + z, spec.cutoff)


def heat_trace(spec: CrossSectionSpectrum, t: float) -> float:
    """Tr exp(-t Delta_Y) by direct summation over all modes (tail included)."""
    if not t > 0:
        raise InvalidArgumentError("heat_trace needs t > 0")
    return math.exp(-spec.shift * t) * spec.generator.heat(t)


def heat_trace_dual(spec: CrossSectionSpectrum, t: float) -> float:
    """The same heat trace from the small-time series plus remainder."""
    if not t > 0:
        raise InvalidArgumentError("heat_trace_dual needs t > 0")
    g = spec.generator
    return math.exp(-spec.shift * t) * (g.series_part(t) + g.remainder(t))
