"""The acceptance suite: eleven numbered criteria shared by the CLI and tests.

Each criterion returns a CriterionReport whose results follow the report
schema used by the CLI: name, value, error_bound, expected, tolerance, pass.
An error_bound of None marks a heuristic number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import relative_det as rel
from .cylinder import CylinderModel, adjudicate_exponent, cylinder_log_det_closed, cylinder_log_det_direct
from .dtn import DEFAULT_PROBE_GRID, detR_small_lambda_probe
from .oned_oracle import SchrodingerProblem, constant_potential, gy_det_checked
from .scattering import det_s_identity_deviation
from .special_fn import riemann_zeta, riemann_zeta_deriv
from .spectra import circle_spectrum, interval_spectrum, point_spectrum, shift_spectrum, torus_spectrum
from .surgery import (
    Cap,
    SurgeryModel,
    adiabatic_experiment,
    adjudicate_bfk_sign,
    bfk_check,
    one_cap_neck_limit,
    relative_log_det_via_gluing,
    surface_constant_assembly,
    kernel_limit_constituents,
)
from .zeta_det import det_zeta, xi_prime_zero, zeta_at, zeta_at_zero, zeta_prime_zero


@dataclass
class CriterionReport:
    number: int
    title: str
    results: list[dict[str, Any]] = field(default_factory=list)
    notes: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.results) and all(r["pass"] for r in self.results)

    def check(
        self,
        name: str,
        value: float,
        expected: float,
        tolerance: float,
        error_bound: float | None = None,
        relative: bool = False,
    ) -> None:
        scale = abs(expected) if relative and expected else 1.0
        ok = math.isfinite(value) and abs(value - expected) <= tolerance * scale
        self.results.append(
            {
                "name": name,
                "value": value,
                "error_bound": error_bound if error_bound is not None else "heuristic",
                "expected": expected,
                "tolerance": tolerance,
                "pass": bool(ok),
            }
        )

    def flag(self, name: str, ok: bool, value: Any = None, expected: Any = None) -> None:
        self.results.append(
            {"name": name, "value": value, "error_bound": "heuristic", "expected": expected, "tolerance": None, "pass": bool(ok)}
        )

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} criterion {self.number}: {self.title}"

    def to_dict(self) -> dict[str, Any]:
        return {"criterion": self.number, "title": self.title, "pass": self.passed, "results": self.results, "notes": self.notes}


def criterion_1() -> CriterionReport:
    rep = CriterionReport(1, "Riemann zeta anchors")
    rep.check("zeta(0)", riemann_zeta(0.0), -0.5, 1e-12)
    rep.check("zeta(-1)", riemann_zeta(-1.0), -1.0 / 12.0, 1e-12)
    rep.check("zeta'(0)", riemann_zeta_deriv(0.0), -0.5 * math.log(2.0 * math.pi), 1e-12)
    return rep


def criterion_2() -> CriterionReport:
    rep = CriterionReport(2, "circle constants from the Mellin pipeline")
    spec = circle_spectrum(1.0)
    rep.check("zeta_Y(0)", zeta_at_zero(spec), -1.0, 1e-8)
    zp, zp_err = zeta_prime_zero(spec)
    rep.check("det Delta_Y", math.exp(-zp), 1.0, 1e-8, zp_err)
    xi, xi_err = xi_prime_zero(spec)
    rep.check("xi'_Y(0)", xi, 2.0 * math.pi / 3.0, 1e-8, xi_err)
    for s in (-1.5, -0.5, 0.3, 0.75, 2.0):
        val, err = zeta_at(spec, s)
        closed = 2.0 * (2.0 * math.pi) ** (-2.0 * s) * riemann_zeta(2.0 * s)
        rep.check(f"zeta_Y({s}) vs 2 (2 pi)^(-2s) zeta(2s)", val, closed, 1e-8, err)
    return rep


def criterion_3() -> CriterionReport:
    rep = CriterionReport(3, "Dirichlet cylinder: closed form vs Poisson summation")
    base = circle_spectrum(1.0)
    models = [CylinderModel(spec, r) for spec in (base, shift_spectrum(base, 1.0)) for r in (0.5, 1.0, 2.0)]
    for m in models:
        closed = cylinder_log_det_closed(m)
        direct = cylinder_log_det_direct(m)
        name = f"det {m.spectrum.tail_descriptor} r={m.length}"
        rep.check(name, closed.value, direct.value, 1e-6, closed.error_bound + direct.error_bound, relative=True)
    verdict = adjudicate_exponent(models)
    rep.notes["exponent_adjudication"] = verdict
    rep.flag("exponent convention e^{-r xi'/2} closes both routes", verdict["matching_convention"] == "half-xi",
             verdict["matching_convention"], "half-xi")
    return rep


def criterion_4() -> CriterionReport:
    rep = CriterionReport(4, "1D oracle concordance")
    for length in (0.5, 1.0, 2.5):
        gy, err = gy_det_checked(SchrodingerProblem(constant_potential(0.0), 0.0, length, "DD"))
        rep.check(f"free interval L={length}: oracle vs 2L", gy, 2.0 * length, 1e-8, err, relative=True)
        rep.check(f"free interval L={length}: zeta vs 2L", det_zeta(interval_spectrum(length, "DD")), 2.0 * length, 1e-8, relative=True)
    for m, r in ((1.0, 1.0), (2.0, 0.7), (0.5, 3.0)):
        closed = 2.0 * math.sinh(m * r) / m
        gy, err = gy_det_checked(SchrodingerProblem(constant_potential(m * m), 0.0, r, "DD"))
        cyl = cylinder_log_det_closed(CylinderModel(shift_spectrum(point_spectrum(), m * m), r))
        rep.check(f"massive interval m={m} r={r}: oracle", gy, closed, 1e-8, err, relative=True)
        rep.check(f"massive interval m={m} r={r}: cylinder", cyl.value, closed, 1e-8, cyl.error_bound, relative=True)
    for m, length in ((1.0, 1.0), (0.5, 2.0), (3.0, 0.4)):
        closed = 4.0 * math.sinh(m * length / 2.0) ** 2
        gy, err = gy_det_checked(SchrodingerProblem(constant_potential(m * m), 0.0, length, "periodic"))
        z = det_zeta(shift_spectrum(circle_spectrum(length), m * m))
        rep.check(f"periodic m={m} L={length}: oracle", gy, closed, 1e-8, err, relative=True)
        rep.check(f"periodic m={m} L={length}: zeta", z, closed, 1e-8, relative=True)
    return rep


def criterion_5() -> CriterionReport:
    rep = CriterionReport(5, "two-cut gluing identity")
    m = SurgeryModel(circle_spectrum(1.0), Cap(0.7, "D"), Cap(1.3, "D"), 1.0)
    for z in (0.3, 1.0, 10.0):
        res = bfk_check(m, z)
        rep.check(f"circle(1)+{z}: lhs/rhs", res.ratio, 1.0, 1e-6, res.log_error_bound)
    # on the circle zeta_Y(0, w) = 0 for every w, so the sign is decided on a torus
    torus = SurgeryModel(torus_spectrum(1.0, 1.0), Cap(0.7, "D"), Cap(1.3, "D"), 1.0)
    verdict = adjudicate_bfk_sign(torus, (0.3, 1.0, 10.0))
    rep.notes["sign_adjudication"] = verdict
    rep.flag("zeta_Y(0, +z) closes the identity and zeta_Y(0, -z) does not", verdict["closing"] == ["plus"],
             verdict["closing"], ["plus"])
    return rep


def criterion_6() -> CriterionReport:
    rep = CriterionReport(6, "gluing formula for relative determinants")
    spec = shift_spectrum(circle_spectrum(1.0), 1.0)
    m = SurgeryModel(spec, Cap(1.0, "D"), None)
    glued = relative_log_det_via_gluing(m)
    limit = one_cap_neck_limit(m, (1.0, 2.0, 4.0, 8.0))
    zeta_route, zeta_err = rel.relative_log_det(rel.make_pair("translate", spec, 1.0))
    g, z = glued.value, math.exp(zeta_route)
    rep.check("gluing vs ratio limit", g, limit, 1e-5, glued.error_bound)
    rep.check("gluing vs relative zeta", g, z, 1e-5, glued.error_bound + zeta_err)
    rep.check("ratio limit vs relative zeta", limit, z, 1e-5)
    rep.notes["values"] = {"gluing": g, "ratio_limit": limit, "relative_zeta": z}
    return rep


def criterion_7() -> CriterionReport:
    rep = CriterionReport(7, "adiabatic decomposition ratio")
    m = SurgeryModel(circle_spectrum(1.0), Cap(0.7, "D"), Cap(1.3, "D"), 1.0, 1.0)
    report = adiabatic_experiment("stretched-caps", m, (1.0, 2.0, 4.0, 8.0))
    rep.notes["experiment"] = report
    rep.check("scaled ratio at r=8", report["values"][-1], report["predicted"], 1e-6)
    rep.flag("error decreases along r = 1, 2, 4, 8", report["monotone"], report["errors"])
    return rep


def criterion_8() -> CriterionReport:
    rep = CriterionReport(8, "small-lambda exponents")
    spec = circle_spectrum(1.0)
    slope, _ = detR_small_lambda_probe(1.0, "N", spec, DEFAULT_PROBE_GRID)
    rep.check("DtN, Neumann cap: slope = l/2", slope, 0.5, 0.02)
    for kind, expected in (("translate", 0.0), ("neumann-vs-dirichlet", 0.5)):
        pair = rel.make_pair(kind, spec, 1.0)
        slope, _ = rel.small_lambda_probe(pair, DEFAULT_PROBE_GRID)
        rep.check(f"relative pair {kind}: slope = b0", slope, expected, 0.02)
        rep.check(f"relative pair {kind}: b0", pair.b0, expected, 0.0)
    return rep


def criterion_9(seed: int = 0) -> CriterionReport:
    rep = CriterionReport(9, "det S = det((Id - C12)/2) on random involution pairs")
    rep.check("max deviation over 1000 pairs, dim <= 8", det_s_identity_deviation(1000, 8, seed), 0.0, 1e-10)
    rep.notes["seed"] = seed
    return rep


def criterion_10() -> CriterionReport:
    rep = CriterionReport(10, "scaled det R_r limits and the Gram fit")
    base = circle_spectrum(1.0)
    grid = (2.0, 4.0, 8.0, 16.0)
    cases = {
        "Dirichlet caps over circle(1)+1": SurgeryModel(shift_spectrum(base, 1.0), Cap(0.7, "D"), Cap(1.3, "D")),
        "Neumann caps over circle(1)": SurgeryModel(base, Cap(0.7, "N"), Cap(1.3, "N")),
        "Neumann/Dirichlet caps over circle(1)": SurgeryModel(base, Cap(0.7, "N"), Cap(1.3, "D")),
    }
    for name, m in cases.items():
        report = kernel_limit_constituents(m, grid)
        rep.notes[name] = report
        rep.check(f"{name}: r^(h+h12) det R_r at r=16", report["scaled"][-1], report["predicted"], 1e-8, relative=True)
        rep.flag(f"{name}: error decreasing (or below 1e-12)", report["monotone"], report["relative_errors"])
        rep.flag(f"{name}: kernel is the diagonal copy of V1+ & V2+", report["kernel_ok"], report["kernel_dim"], report["h12"])
        if "gram_fit_slope" in report:
            rep.check(f"{name}: Gram fit slope", report["gram_fit_slope"], -1.0, 0.1)
    return rep


def criterion_11() -> CriterionReport:
    """Assemble the prefactor twice: with every constituent computed by the
    modules, and with det((Id - C12)/2) = 1/2 as the criterion states.  The
    two differ by exactly that factor, so at most one can reproduce 2L."""
    rep = CriterionReport(11, "surface prefactor assembly")
    a = surface_constant_assembly(1.0)
    rep.check("h_Y", a["h_Y"], 1, 0)
    rep.check("h12", a["h12"], 1, 0)
    rep.check("h", a["h"], 0, 0)
    rep.check("xi'_Y(0)", a["xi_prime"], 2.0 * math.pi / 3.0, 1e-8)
    rep.check("det Delta_Y", a["det_Y"], 1.0, 1e-8)
    rep.check("det((Id - C12)/2) computed vs stated 1/2", a["det_half_computed"], 0.5, 1e-12)
    for length in (1.0, 3.0, 10.0):
        computed = surface_constant_assembly(length)
        stated = surface_constant_assembly(length, 0.5)
        rep.check(f"computed constituents: prefactor / (2L e^(-pi L/3)) at L={length}", computed["ratio"], 1.0, 1e-12)
        rep.check(f"stated det = 1/2: prefactor / (2L e^(-pi L/3)) at L={length}", stated["ratio"], 1.0, 1e-12)
    return rep


CRITERIA: dict[int, Callable[[], CriterionReport]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
}


def run_all(seed: int = 0) -> list[CriterionReport]:
    return [criterion_9(seed) if n == 9 else fn() for n, fn in CRITERIA.items()]


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    return x


def reports_to_dict(reports: list[CriterionReport]) -> list[dict[str, Any]]:
    return [_jsonable(r.to_dict()) for r in reports]
