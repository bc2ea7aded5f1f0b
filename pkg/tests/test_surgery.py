import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetasurgery import surgery as sg
from zetasurgery.errors import InvalidArgumentError, UnsupportedModelError
from zetasurgery.oned_oracle import SchrodingerProblem, bfk_1d_check, constant_potential, gy_det
from zetasurgery.relative_det import make_pair, relative_det
from zetasurgery.spectra import circle_spectrum, point_spectrum, shift_spectrum, torus_spectrum

UNIT_CIRCLE = circle_spectrum(1.0)
GRID = (1.0, 2.0, 4.0, 8.0)
FINE_GRID = (4.0, 8.0, 16.0, 32.0, 64.0, 128.0)


def two_caps(bc1: str, bc2: str, spec=UNIT_CIRCLE, z: float = 0.0) -> sg.SurgeryModel:
    return sg.SurgeryModel(spec, sg.Cap(1.0, bc1), sg.Cap(1.0, bc2), 1.0, z)


def one_cap(bc: str, spec=UNIT_CIRCLE, z: float = 0.0, a: float = 1.0) -> sg.SurgeryModel:
    return sg.SurgeryModel(spec, sg.Cap(a, bc), None, 1.0, z)


# ---- models and cylinder pieces ----


def test_model_validation():
    with pytest.raises(InvalidArgumentError):
        sg.Cap(0.0, "D")
    with pytest.raises(InvalidArgumentError):
        sg.Cap(1.0, "Q")
    with pytest.raises(InvalidArgumentError):
        sg.SurgeryModel(UNIT_CIRCLE, sg.Cap(1.0), r=0.0)
    with pytest.raises(InvalidArgumentError):
        sg.SurgeryModel(UNIT_CIRCLE, sg.Cap(1.0), z=-1.0)


def test_model_round_trip():
    m = two_caps("D", "N", z=0.5)
    assert sg.model_from_dict(json.loads(m.to_json())) == m
    assert m.total_length == 4.0
    assert one_cap("N").total_length == 2.0


@pytest.mark.parametrize("bc", ["DD", "DN", "ND", "NN"])
def test_point_fibre_pieces_match_gelfand_yaglom(bc):
    spec = shift_spectrum(point_spectrum(), 2.0)
    value = sg.interval_log_det(spec, 1.7, bc).value
    oracle = gy_det(SchrodingerProblem(constant_potential(2.0), 0.0, 1.7, bc))
    assert value == pytest.approx(oracle, rel=1e-9)


def test_neumann_pair_drops_kernel():
    # det' of the NN interval [0, L] over the unit circle at its zero mode is 2L
    assert sg.interval_log_det(point_spectrum(), 1.5, "NN").value == pytest.approx(3.0, rel=1e-12)


# ---- two-cut identity ----


@pytest.mark.parametrize("z", [0.3, 1.0, 10.0])
@pytest.mark.parametrize("bcs", [("D", "D"), ("D", "N"), ("N", "N")])
def test_two_cut_identity_circle(z, bcs):
    res = sg.bfk_check(two_caps(*bcs), z)
    assert abs(res.ratio - 1.0) <= 1e-10
    assert res.log_error_bound < 1e-10


def test_two_cut_identity_point_fibre_matches_1d_constant():
    spec = point_spectrum()
    m = sg.SurgeryModel(spec, sg.Cap(0.6, "D"), sg.Cap(0.9, "N"), 0.7)
    res = sg.bfk_check(m, 2.0)
    assert res.ratio == pytest.approx(1.0, abs=1e-12)
    # on a point 2^{-2 zeta(0)} is the measured 1D constant for two cuts
    assert 2.0 ** (-2 * res.zeta_zero) == 0.25
    p = SchrodingerProblem(constant_potential(2.0), 0.0, 0.6 + 1.4 + 0.9, "DN")
    assert bfk_1d_check(p, [0.6, 2.0]).constant == pytest.approx(0.25, rel=1e-9)


def test_sign_adjudication_torus():
    out = sg.adjudicate_bfk_sign(two_caps("D", "N", torus_spectrum(1.0, 1.0)), (0.3, 1.0))
    assert out["closing"] == ["plus"]
    assert out["distinguishable"]
    assert out["rows"][0]["minus"] > 0.05


def test_sign_indistinguishable_on_circle():
    out = sg.adjudicate_bfk_sign(two_caps("D", "N"), (0.3, 1.0))
    assert out["closing"] == ["plus", "minus"]
    assert not out["distinguishable"]


def test_formal_zeta_zero():
    assert sg.formal_zeta_zero(UNIT_CIRCLE, 0.0) == 0.0
    assert sg.formal_zeta_zero(point_spectrum(2), -5.0) == 2.0
    torus = torus_spectrum(1.0, 1.0)
    # theta ~ 1 / (4 pi t): the t^0 coefficient of theta e^{-wt} is -w / (4 pi)
    assert sg.formal_zeta_zero(torus, 0.5) == pytest.approx(-0.5 / (4 * math.pi))
    assert sg.formal_zeta_zero(torus, -0.5) == pytest.approx(0.5 / (4 * math.pi))


def test_bfk_input_errors():
    with pytest.raises(InvalidArgumentError):
        sg.bfk_check(two_caps("D", "D"), 0.0)
    with pytest.raises(UnsupportedModelError):
        sg.bfk_check(one_cap("D"), 1.0)
    with pytest.raises(InvalidArgumentError):
        sg.bfk_check(two_caps("D", "D"), 1.0, "sideways")


def test_gluing_exponent():
    assert sg.gluing_exponent(UNIT_CIRCLE) == pytest.approx(0.0, abs=1e-10)
    # odd total dimension: one factor 2 per cut whether or not the mode is shifted
    assert sg.gluing_exponent(point_spectrum()) == pytest.approx(-math.log(2.0))
    assert sg.gluing_exponent(shift_spectrum(point_spectrum(), 3.0)) == pytest.approx(-math.log(2.0))


# ---- single cut and relative determinants ----


@settings(max_examples=10, deadline=None)
@given(st.floats(0.2, 3.0), st.floats(0.2, 3.0), st.sampled_from(["D", "N"]))
def test_single_cut_identity(a, r, bc):
    m = sg.SurgeryModel(UNIT_CIRCLE, sg.Cap(a, bc), None, r, 0.5)
    lhs, rhs = sg.single_cut_ratio(m)
    assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize(
    "model,pair,a",
    [
        (one_cap("D", z=1.0), "translate", 1.0),
        (one_cap("D"), "translate", 1.0),
        (one_cap("N"), "neumann-translate", 1.0),
        (one_cap("N", z=1.0), "neumann-translate", 1.0),
        (one_cap("D", z=1.0, a=0.4), "translate", 0.4),
    ],
)
def test_gluing_formula_matches_relative_zeta(model, pair, a):
    via_gluing = sg.relative_det_via_gluing(model)
    direct = relative_det(make_pair(pair, model.shifted_spectrum, a))
    assert via_gluing == pytest.approx(direct, rel=1e-9)


def test_gluing_values():
    assert sg.relative_det_via_gluing(one_cap("D", z=1.0)) == pytest.approx(0.69812695090, abs=1e-10)
    assert sg.relative_det_via_gluing(one_cap("D")) == pytest.approx(0.35091980718, abs=1e-10)
    assert sg.relative_det_via_gluing(one_cap("N")) == pytest.approx(0.35091980718, abs=1e-10)
    assert sg.relative_det_via_gluing(one_cap("N", z=1.0)) == pytest.approx(0.72758135351, abs=1e-10)


def test_constant_without_kernel_term_is_off_by_two():
    m = one_cap("D")
    ratio = sg.relative_det_via_gluing(m, "no-kernel") / sg.relative_det_via_gluing(m)
    assert ratio == pytest.approx(2.0, rel=1e-12)
    shifted = one_cap("D", z=1.0)
    assert sg.relative_det_via_gluing(shifted, "no-kernel") == pytest.approx(sg.relative_det_via_gluing(shifted))


def test_neck_ratio_limit():
    assert sg.one_cap_neck_limit(one_cap("D", z=1.0)) == pytest.approx(0.6981269509, abs=1e-9)
    assert sg.one_cap_neck_limit(one_cap("D"), FINE_GRID) == pytest.approx(0.35091980718, abs=1e-6)


def test_shrinking_cap_tends_to_one():
    values = [sg.relative_det_via_gluing(one_cap("D", z=1.0, a=a)) for a in (0.5, 0.25, 0.125, 0.0625)]
    assert all(a < b < 1.0 for a, b in zip(values[:-1], values[1:]))
    assert 1.0 - values[-1] < 0.05


# ---- extrapolation helpers ----


def test_richardson_models():
    rs = [1.0, 2.0, 4.0, 8.0]
    assert sg.richardson(rs, [3.0 + 2.0 / r - 1.0 / r**2 for r in rs], "inverse") == pytest.approx(3.0)
    assert sg.richardson(rs, [5.0 + 7.0 * math.exp(-1.5 * r) for r in rs], "exp", 1.5) == pytest.approx(5.0)
    with pytest.raises(InvalidArgumentError):
        sg.richardson(rs, rs, "cubic")


def test_monotone_decreasing():
    assert sg.monotone_decreasing([1.0, 0.5, 0.1])
    assert sg.monotone_decreasing([1.0, 1e-13, 2e-13])
    assert not sg.monotone_decreasing([1.0, 2.0])


# ---- adiabatic laws ----


@pytest.mark.parametrize(
    "law,model",
    [
        ("two-cap-invertible", two_caps("D", "N", z=1.0)),
        ("one-cap-invertible", one_cap("N", z=1.0)),
        ("stretched-caps", two_caps("D", "D", z=1.0)),
        ("neck-ratio", two_caps("N", "N", z=1.0)),
        ("one-cap-neck-ratio", one_cap("D", z=1.0)),
        ("two-cap-kernel", two_caps("N", "N")),
        ("two-cap-kernel", two_caps("D", "N")),
        ("two-cap-kernel", two_caps("D", "D")),
        ("stretched-caps-kernel", two_caps("N", "N")),
        ("one-cap-kernel", one_cap("N")),
        ("one-cap-kernel", one_cap("D", z=1.0)),
    ],
)
def test_adiabatic_laws(law, model):
    report = sg.adiabatic_experiment(law, model, GRID)
    assert report["pass"], report
    assert report["monotone"]


@pytest.mark.parametrize("bcs", [("D", "N"), ("D", "D")])
def test_stretched_caps_kernel_needs_long_grid(bcs):
    report = sg.adiabatic_experiment("stretched-caps-kernel", two_caps(*bcs), FINE_GRID)
    assert report["pass"], report
    assert report["rate"] == pytest.approx(-1.0, abs=0.1)


def test_stretched_caps_error_at_eight():
    report = sg.adiabatic_experiment("stretched-caps", two_caps("D", "N", z=1.0), GRID)
    assert report["errors"][-1] < 1e-6


def test_law_scope_errors():
    with pytest.raises(UnsupportedModelError):
        sg.adiabatic_experiment("two-cap-invertible", two_caps("D", "N"), GRID)
    with pytest.raises(UnsupportedModelError):
        sg.adiabatic_experiment("two-cap-invertible", one_cap("D", z=1.0), GRID)
    with pytest.raises(UnsupportedModelError):
        sg.adiabatic_experiment("one-cap-kernel", two_caps("D", "N"), GRID)
    with pytest.raises(InvalidArgumentError):
        sg.adiabatic_experiment("no-such-law", two_caps("D", "N"), GRID)
    with pytest.raises(InvalidArgumentError):
        sg.adiabatic_experiment("two-cap-kernel", two_caps("D", "N"), (1.0, 2.0, 4.0))


# ---- kernel-case constituents ----


@pytest.mark.parametrize("bcs,h,h12", [(("N", "N"), 0, 1), (("D", "N"), 1, 0)])
def test_kernel_constituents_exact_cases(bcs, h, h12):
    report = sg.kernel_limit_constituents(two_caps(*bcs), (2.0, 4.0, 8.0, 16.0))
    assert (report["h"], report["h12"]) == (h, h12)
    assert report["relative_errors"][-1] < 1e-8
    assert report["monotone"]
    assert report["kernel_ok"]


def test_kernel_constituents_gram_fit():
    report = sg.kernel_limit_constituents(two_caps("N", "N"))
    assert report["gram_fit_slope"] == pytest.approx(-1.0, abs=0.1)


def test_kernel_constituents_dirichlet_caps_shifted():
    report = sg.kernel_limit_constituents(two_caps("D", "D", z=1.0), (2.0, 4.0, 8.0, 16.0))
    assert report["relative_errors"][-1] < 1e-8
    assert report["monotone"]


def test_kernel_constituents_dirichlet_caps_slow():
    report = sg.kernel_limit_constituents(two_caps("D", "D"), (2.0, 4.0, 8.0, 16.0))
    errs = report["relative_errors"]
    assert report["monotone"]
    # the zero block converges like 1/r here
    assert errs[-2] / errs[-1] == pytest.approx(2.0, rel=0.1)
    assert abs(report["limit_estimate"] / report["predicted"] - 1.0) < 1e-6


# ---- surface assembly ----


@pytest.mark.parametrize("length", [1.0, 3.0, 10.0])
def test_surface_assembly(length):
    out = sg.surface_constant_assembly(length)
    assert (out["h_Y"], out["h"], out["h12"]) == (1, 0, 1)
    assert out["det_half_computed"] == 1.0
    assert out["xi_prime"] == pytest.approx(2.0 * math.pi / 3.0, abs=1e-10)
    assert out["det_Y"] == pytest.approx(1.0, abs=1e-10)
    assert out["target"] == pytest.approx(2.0 * length * math.exp(-math.pi * length / 3.0))
    assert out["ratio"] == pytest.approx(1.0, abs=1e-12)


def test_surface_assembly_with_half_is_off_by_two():
    out = sg.surface_constant_assembly(2.0, det_half=0.5)
    assert out["ratio"] == pytest.approx(0.5, abs=1e-12)
