"""Dirichlet-to-Neumann operators that are diagonal in the cross-section modes.

On a product collar every operator here acts on the mu-eigenspace of Delta_Y
by a number (ModeOperator) or, for two boundary copies, by a symmetric 2x2
matrix (BlockModeOperator).  With k = sqrt(mu):

    cap [0, a], Dirichlet outer end     k coth(a k)      zero mode 1/a
    cap [0, a], Neumann outer end       k tanh(a k)      zero mode 0
    half-cylinder exterior              k                zero mode 0
    finite collar [0, r], Dirichlet end k e^{-rk} / sinh(rk)  zero mode 1/r   (L_r)

The neck [-r, r] between two cuts adds K_r, which per mode is

    k / sinh(2kr) * [[e^{-2kr}, -1], [-1, e^{-2kr}]]      zero block (1/2r) [[1, -1], [-1, 1]].

Zeta determinants are taken relative to the asymptote c sqrt(Delta_Y):
det_zeta(c sqrt(Delta_Y)) = c^{zeta_Y(0)} (det Delta_Y)^{1/2} on the positive
modes, times the absolutely convergent product of symbol / (c k), times the
zero-mode values.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import InvalidArgumentError, SingularOperatorError
from .spectra import CrossSectionSpectrum, shift_spectrum, spectrum_from_dict
from .zeta_det import zeta_at_zero, zeta_prime_zero

BCS = ("D", "N")


def _coth(x: float) -> float:
    return 1.0 / math.tanh(x)


@dataclass(frozen=True)
class SymbolPart:
    """One additive piece of a mode symbol, named by what it models."""

    kind: str  # "cap", "exterior", "collar", "sqrt"
    params: tuple[tuple[str, Any], ...] = ()

    def param(self, key: str) -> Any:
        return dict(self.params)[key]

    def value(self, mu: float) -> float:
        k = math.sqrt(mu)
        if self.kind == "cap":
            a, bc = self.param("a"), self.param("bc")
            if mu == 0.0:
                return 1.0 / a if bc == "D" else 0.0
            return k * _coth(a * k) if bc == "D" else k * math.tanh(a * k)
        if self.kind == "exterior":
            return k
        if self.kind == "collar":
            r = self.param("r")
            if mu == 0.0:
                return 1.0 / r
            return 2.0 * k * math.exp(-2.0 * r * k) / -math.expm1(-2.0 * r * k)
        if self.kind == "sqrt":
            return self.param("c") * k
        raise InvalidArgumentError(f"unknown symbol part {self.kind}")

    @property
    def leading(self) -> float:
        """Coefficient of sqrt(mu) as mu -> infinity."""
        if self.kind == "sqrt":
            return self.param("c")
        return 0.0 if self.kind == "collar" else 1.0

    @property
    def decay(self) -> float:
        """Rate d with |value / (leading k) - 1| = O(e^{-d k})."""
        if self.kind == "cap":
            return 2.0 * self.param("a")
        if self.kind == "collar":
            return 2.0 * self.param("r")
        return math.inf

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind, "params": dict(self.params)}


def _part(kind: str, **params: Any) -> SymbolPart:
    return SymbolPart(kind, tuple(sorted(params.items())))


@dataclass(frozen=True)
class ModeOperator:
    """Operator acting on the mu-eigenspace by symbol(mu) = sum of its parts."""

    spectrum: CrossSectionSpectrum
    parts: tuple[SymbolPart, ...]

    def symbol(self, mu: float) -> float:
        return math.fsum(p.value(mu) for p in self.parts)

    @property
    def zero_mode_value(self) -> float:
        return self.symbol(0.0)

    @property
    def leading(self) -> float:
        return sum(p.leading for p in self.parts)

    @property
    def decay(self) -> float:
        return min(p.decay for p in self.parts)

    def __add__(self, other: "ModeOperator") -> "ModeOperator":
        if other.spectrum != self.spectrum:
            raise InvalidArgumentError("operators live on different spectra")
        return ModeOperator(self.spectrum, self.parts + other.parts)

    def shifted(self, lam: float) -> "ModeOperator":
        """Same operator built on the spectrum mu + lam (the R(lam) family)."""
        return ModeOperator(shift_spectrum(self.spectrum, lam), self.parts)

    def to_dict(self) -> dict[str, Any]:
        return {
            "spectrum": self.spectrum.to_dict(),
            "symbol": [p.to_dict() for p in self.parts],
            "zero_block": [[self.zero_mode_value]],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def mode_operator_from_dict(d: dict[str, Any]) -> ModeOperator:
    spec = spectrum_from_dict(d["spectrum"])
    parts = tuple(_part(p["kind"], **p["params"]) for p in d["symbol"])
    return ModeOperator(spec, parts)


def _check_length(name: str, x: float) -> None:
    if not (x > 0 and math.isfinite(x)):
        raise InvalidArgumentError(f"{name} must be positive")


def cap_dtn(a: float, outer_bc: str, spec: CrossSectionSpectrum) -> ModeOperator:
    """DtN of the cap [0, a] x Y seen from its inner end, outer end D or N."""
    _check_length("cap length", a)
    bc = outer_bc[:1].upper()
    if bc not in BCS:
        raise InvalidArgumentError("outer_bc must be Dirichlet or Neumann")
    return ModeOperator(spec, (_part("cap", a=float(a), bc=bc),))


def exterior_dtn(spec: CrossSectionSpectrum) -> ModeOperator:
    """sqrt(Delta_Y): the DtN of the half-infinite cylinder."""
    return ModeOperator(spec, (_part("exterior"),))


def sqrt_operator(spec: CrossSectionSpectrum, c: float = 2.0) -> ModeOperator:
    """c sqrt(Delta_Y)."""
    return ModeOperator(spec, (_part("sqrt", c=float(c)),))


def assemble_R_single(cap: ModeOperator) -> ModeOperator:
    """R = cap + sqrt(Delta_Y): capped half-cylinder cut at the junction."""
    return cap + exterior_dtn(cap.spectrum)


def assemble_L_r(cap: ModeOperator, r: float) -> ModeOperator:
    """L_r, the correction making R_inf + L_r the DtN of cap + collar [0, r]
    with Dirichlet condition at the far end of the collar."""
    _check_length("r", r)
    return ModeOperator(cap.spectrum, (_part("collar", r=float(r)),))


def neck_block(mu: float, r: float) -> np.ndarray:
    """K_r on the mu-mode (2x2)."""
    if mu == 0.0:
        return np.array([[1.0, -1.0], [-1.0, 1.0]]) / (2.0 * r)
    k = math.sqrt(mu)
    e = math.exp(-2.0 * k * r)
    # k / sinh(2kr) without overflow
    h = 2.0 * k * e / -math.expm1(-4.0 * k * r)
    return h * np.array([[e, -1.0], [-1.0, e]])


@dataclass(frozen=True)
class BlockModeOperator:
    """diag(first, second) + K_r on two copies of the cross-section.

    neck_half_length None means no coupling (R_inf).
    """

    first: ModeOperator
    second: ModeOperator
    neck_half_length: float | None = None

    def __post_init__(self) -> None:
        if self.first.spectrum != self.second.spectrum:
            raise InvalidArgumentError("block entries live on different spectra")
        if self.neck_half_length is not None:
            _check_length("r", self.neck_half_length)

    @property
    def spectrum(self) -> CrossSectionSpectrum:
        return self.first.spectrum

    def block(self, mu: float) -> np.ndarray:
        b = np.diag([self.first.symbol(mu), self.second.symbol(mu)])
        if self.neck_half_length is not None:
            b = b + neck_block(mu, self.neck_half_length)
        return b

    @property
    def zero_block(self) -> np.ndarray:
        return self.block(0.0)

    def coupling(self, mu: float) -> np.ndarray:
        if self.neck_half_length is None:
            return np.zeros((2, 2))
        return neck_block(mu, self.neck_half_length)

    @property
    def decay(self) -> float:
        d = min(self.first.decay, self.second.decay)
        if self.neck_half_length is not None:
            d = min(d, 2.0 * self.neck_half_length)
        return d

    def shifted(self, lam: float) -> "BlockModeOperator":
        return BlockModeOperator(self.first.shifted(lam), self.second.shifted(lam), self.neck_half_length)

    def to_dict(self) -> dict[str, Any]:
        return {
            "spectrum": self.spectrum.to_dict(),
            "symbol": {
                "first": [p.to_dict() for p in self.first.parts],
                "second": [p.to_dict() for p in self.second.parts],
                "neck_half_length": self.neck_half_length,
            },
            "zero_block": self.zero_block.tolist(),
        }


def assemble_R_infinity(cap1: ModeOperator, cap2: ModeOperator) -> BlockModeOperator:
    return BlockModeOperator(assemble_R_single(cap1), assemble_R_single(cap2), None)


def assemble_R_r(r_inf: BlockModeOperator, r: float) -> BlockModeOperator:
    return BlockModeOperator(r_inf.first, r_inf.second, float(r))


def trace_norm_K(op: BlockModeOperator, tol: float = 1e-16) -> float:
    """sum mult (|k11| + 2|k12| + |k22|) of the neck coupling."""
    r = op.neck_half_length
    if r is None:
        return 0.0
    spec = op.spectrum
    modes, _ = spec.modes_with_tail(r, tol)
    total = 0.0
    for mu, m in modes:
        b = neck_block(mu, r)
        total += m * (abs(b[0, 0]) + 2 * abs(b[0, 1]) + abs(b[1, 1]))
    # the zero block (1/2r) [[1, -1], [-1, 1]] contributes 2/r per zero mode
    return total + spec.h_Y * 2.0 / r


@dataclass(frozen=True)
class DetResult:
    log_value: float
    error_bound: float
    kernel_dim: int = 0
    details: dict[str, float] = field(default_factory=dict, compare=False)

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def _log_base(spec: CrossSectionSpectrum, c: float) -> tuple[float, float]:
    """log det_zeta(c sqrt(Delta_Y)) over the positive modes, with error."""
    z0 = zeta_at_zero(spec)
    zp, err = zeta_prime_zero(spec)
    return math.log(c) * z0 - 0.5 * zp, 0.5 * err + 1e-15


def _fredholm_sum(spec: CrossSectionSpectrum, decay: float, log_ratio) -> tuple[float, float]:
    if spec.generator.finite:
        modes, tail = spec.positive_modes(math.inf), 0.0
    elif math.isinf(decay):
        # the symbol coincides with its asymptote on every mode
        return 0.0, 0.0
    else:
        modes, tail = spec.modes_with_tail(decay, 1e-18)
    terms = [m * log_ratio(mu) for mu, m in modes if mu > 0.0]
    # each omitted log ratio is at most 8 e^{-decay k} once that is below 1/4
    return math.fsum(terms), 8.0 * tail + 1e-16 * sum(abs(t) for t in terms)


def _lowest_positive_modes(spec: CrossSectionSpectrum, n: int) -> list[tuple[float, int]]:
    if n <= 0:
        return []
    if spec.generator.finite:
        return spec.positive_modes(math.inf)[:n]
    top = 1.0
    while True:
        modes = spec.positive_modes(top)
        if len(modes) > n:
            return modes[:n]
        top *= 2.0


def det_zeta_mode(op: ModeOperator, exclude_kernel: bool = False, exact_modes: int = 0) -> DetResult:
    """Zeta determinant of a mode-diagonal operator.

    exclude_kernel drops a vanishing zero-mode value (det' convention).
    exact_modes moves the lowest positive modes out of the factorization:
    their symbol values are multiplied in directly and the base zeta
    function loses those eigenvalues.  The result does not depend on it.
    """
    spec = op.spectrum
    c = op.leading
    if c <= 0:
        raise InvalidArgumentError("mode operator has no sqrt(Delta_Y) asymptote")
    log_total = 0.0
    kernel = 0
    h = spec.h_Y
    if h:
        v0 = op.zero_mode_value
        if v0 <= 0.0:
            if not exclude_kernel:
                raise SingularOperatorError(f"zero mode value {v0} is not positive (mode mu = 0)")
            kernel = h
        else:
            log_total += h * math.log(v0)
    base, base_err = _log_base(spec, c)
    moved = _lowest_positive_modes(spec, exact_modes)
    for mu, m in moved:
        v = op.symbol(mu)
        if not v > 0:
            raise SingularOperatorError(f"non-positive symbol {v} at mode mu = {mu}")
        log_total += m * math.log(v)
        # removing mu from zeta_Y lowers zeta(0) by m and log det by m log mu
        base -= m * (math.log(c) + 0.5 * math.log(mu))
    moved_set = {mu for mu, _ in moved}

    def log_ratio(mu: float) -> float:
        if mu in moved_set:
            return 0.0
        v = op.symbol(mu)
        if not v > 0:
            raise SingularOperatorError(f"non-positive symbol {v} at mode mu = {mu}")
        return math.log(v / (c * math.sqrt(mu)))

    fred, fred_err = _fredholm_sum(spec, op.decay, log_ratio)
    return DetResult(
        log_total + base + fred,
        base_err + fred_err,
        kernel,
        {"base": base, "fredholm": fred, "zero_modes": log_total},
    )


def _zero_block_logdet(b: np.ndarray, exclude_kernel: bool) -> tuple[float, int]:
    w = np.linalg.eigvalsh(b)
    scale = max(1.0, float(np.max(np.abs(w))))
    kernel = int(np.sum(np.abs(w) <= 1e-12 * scale))
    if np.any(w < -1e-12 * scale):
        raise SingularOperatorError(f"zero block has a negative eigenvalue {w.min():.3g}")
    if kernel and not exclude_kernel:
        raise SingularOperatorError("zero block is singular (mode mu = 0); use kernel_split")
    return float(np.sum(np.log(w[np.abs(w) > 1e-12 * scale]))), kernel


def det_zeta_block(op: BlockModeOperator | ModeOperator, exclude_kernel: bool = False) -> DetResult:
    """Zeta determinant of a block operator (or dispatch for a ModeOperator)."""
    if isinstance(op, ModeOperator):
        return det_zeta_mode(op, exclude_kernel)
    spec = op.spectrum
    c1, c2 = op.first.leading, op.second.leading
    b1, e1 = _log_base(spec, c1)
    b2, e2 = _log_base(spec, c2)
    log_total = 0.0
    kernel = 0
    if spec.h_Y:
        lz, kz = _zero_block_logdet(op.zero_block, exclude_kernel)
        log_total += spec.h_Y * lz
        kernel = spec.h_Y * kz

    def log_ratio(mu: float) -> float:
        d = float(np.linalg.det(op.block(mu)))
        if not d > 0:
            raise SingularOperatorError(f"non-positive block determinant {d} at mode mu = {mu}")
        return math.log(d / (c1 * c2 * mu))

    fred, fred_err = _fredholm_sum(spec, op.decay, log_ratio)
    return DetResult(
        log_total + b1 + b2 + fred,
        e1 + e2 + fred_err,
        kernel,
        {"base": b1 + b2, "fredholm": fred, "zero_modes": log_total},
    )


@dataclass(frozen=True)
class KernelSplit:
    """Zero-mode block of R_r split into its kernel and the complement L^perp."""

    kernel_dim: int
    kernel_basis: np.ndarray
    restricted_eigenvalues: np.ndarray
    log_det_restricted: float
    w_eigenvalue: float | None


def kernel_split(op: BlockModeOperator, r: float | None = None) -> KernelSplit:
    """Split the zero block of R_r (per zero mode, the 2x2 block on two copies).

    The kernel is spanned by (phi, phi) when both caps have vanishing zero
    value.  W = {(phi, -phi)} is an eigenspace with eigenvalue 1/r in that case.
    """
    if r is not None and op.neck_half_length != r:
        op = BlockModeOperator(op.first, op.second, r)
    h = op.spectrum.h_Y
    if h == 0:
        return KernelSplit(0, np.zeros((0, 2)), np.zeros(0), 0.0, None)
    b = op.zero_block
    w, v = np.linalg.eigh(b)
    scale = max(1.0, float(np.max(np.abs(w))))
    mask = np.abs(w) <= 1e-12 * scale
    kernel_basis = v[:, mask].T
    restricted = w[~mask]
    w_eig = None
    anti = np.array([1.0, -1.0]) / math.sqrt(2.0)
    if np.allclose(b @ anti, (anti @ b @ anti) * anti, atol=1e-14):
        w_eig = float(anti @ b @ anti)
    return KernelSplit(
        int(mask.sum()) * h,
        kernel_basis,
        restricted,
        h * float(np.sum(np.log(restricted))),
        w_eig,
    )


def small_lambda_probe(op_at, grid: list[float]) -> tuple[float, float]:
    """Least-squares fit of log det op(lam) against log lam.

    op_at maps lam to an operator; returns (slope, intercept).
    """
    if len(grid) < 4:
        raise InvalidArgumentError("probe needs at least 4 grid points")
    xs = np.log(np.asarray(grid, dtype=float))
    ys = np.array([det_zeta_block(op_at(lam)).log_value for lam in grid])
    slope, intercept = np.polyfit(xs, ys, 1)
    return float(slope), float(intercept)


DEFAULT_PROBE_GRID = (1e-4, 1e-5, 1e-6, 1e-7, 1e-8)


def detR_small_lambda_probe(
    cap_length: float, outer_bc: str, spec: CrossSectionSpectrum, grid=DEFAULT_PROBE_GRID
) -> tuple[float, float]:
    """Fitted exponent and constant of log det R(lam) for a capped half-cylinder.

    R(lam) is built on the spectrum mu + lam, zero modes included.  The
    zero-mode symbol behaves like sqrt(lam) (1 + a sqrt(lam)) for a Neumann
    cap, so the correction to the log is O(sqrt(lam)); the default grid is
    chosen small enough for that to stay below the fit tolerance.
    """

    def op_at(lam: float) -> ModeOperator:
        return assemble_R_single(cap_dtn(cap_length, outer_bc, shift_spectrum(spec, lam)))

    return small_lambda_probe(op_at, list(grid))
