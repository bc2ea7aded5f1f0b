import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetasurgery import dtn
from zetasurgery import relative_det as rel
from zetasurgery.errors import InvalidArgumentError
from zetasurgery.spectra import circle_spectrum, shift_spectrum, torus_spectrum
from zetasurgery.zeta_det import det_zeta, xi_prime_zero

UNIT_CIRCLE = circle_spectrum(1.0)
SHIFTED = shift_spectrum(UNIT_CIRCLE, 1.0)


def test_identical_pair():
    assert rel.relative_det(rel.make_pair("identical", UNIT_CIRCLE)) == 1.0


def test_neumann_vs_dirichlet_unit_circle():
    assert rel.relative_det(rel.make_pair("neumann-vs-dirichlet", UNIT_CIRCLE)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("spec", [SHIFTED, torus_spectrum(1.0, 1.0)], ids=["shifted-circle", "torus"])
def test_neumann_vs_dirichlet_is_square_root(spec):
    # per mode the half-line N/D ratio of det is mu^{1/2}
    value = rel.relative_det(rel.make_pair("neumann-vs-dirichlet", spec))
    assert value == pytest.approx(math.sqrt(det_zeta(spec)), rel=1e-9)


def test_translate_unit_circle():
    value = rel.relative_det(rel.make_pair("translate", UNIT_CIRCLE, 1.0))
    assert value == pytest.approx(0.3509198, abs=1e-7)
    assert value == pytest.approx(math.exp(-math.pi / 3.0), rel=1e-11)


def test_translate_shifted_circle():
    value = rel.relative_det(rel.make_pair("translate", SHIFTED, 1.0))
    assert value == pytest.approx(0.69812695090, abs=1e-10)


@pytest.mark.parametrize("a", [0.25, 1.0, 3.0])
def test_translate_is_exponential_in_length(a):
    # per mode the translate ratio is e^{-a sqrt(mu)}, so log det = -(a/2) xi'(0)
    log_value, err = rel.relative_log_det(rel.make_pair("translate", SHIFTED, a))
    assert log_value == pytest.approx(-0.5 * a * xi_prime_zero(SHIFTED)[0], abs=max(err, 1e-11))


@pytest.mark.parametrize("s", [-0.5, -0.3, -0.1])
def test_large_time_piece_two_ways(s):
    p = rel.make_pair("neumann-translate", UNIT_CIRCLE, 1.0)
    assert rel.zeta2_closed_form(p, s) == pytest.approx(rel.zeta2_raw(p, s), rel=1e-10)


def test_b0_values():
    assert rel.make_pair("neumann-vs-dirichlet", UNIT_CIRCLE).b0 == 0.5
    assert rel.make_pair("translate", UNIT_CIRCLE, 1.0).b0 == 0.0
    assert rel.b0_from_scattering(0, 1, 1) == 0.5
    assert rel.b0_from_scattering(0, -1, 1) == 0.0
    assert rel.b0_from_scattering(2, 0, 2) == 2.5
    with pytest.raises(InvalidArgumentError):
        rel.b0_from_scattering(0, 0, 1)
    with pytest.raises(InvalidArgumentError):
        rel.b0_from_scattering(0, 3, 1)


def test_rejects_growing_rule():
    with pytest.raises(InvalidArgumentError):
        rel.RelativePair(UNIT_CIRCLE, ((1.0, 0.5),))
    with pytest.raises(InvalidArgumentError):
        rel.make_pair("translate", UNIT_CIRCLE, 0.0)
    with pytest.raises(InvalidArgumentError):
        rel.make_pair("reflect", UNIT_CIRCLE)


@pytest.mark.parametrize(
    "kind,slope",
    [("neumann-vs-dirichlet", 0.5), ("translate", 0.0), ("neumann-translate", 0.5)],
)
def test_small_lambda_exponent(kind, slope):
    fitted, _ = rel.small_lambda_probe(rel.make_pair(kind, UNIT_CIRCLE, 1.0), dtn.DEFAULT_PROBE_GRID)
    assert fitted == pytest.approx(slope, abs=0.01)


def test_round_trip():
    p = rel.make_pair("translate", SHIFTED, 0.5)
    back = rel.pair_from_dict(__import__("json").loads(p.to_json()))
    assert back == p


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 3.0), st.floats(0.1, 3.0))
def test_translate_is_multiplicative(a, b):
    la = rel.relative_log_det(rel.make_pair("translate", SHIFTED, a))[0]
    lb = rel.relative_log_det(rel.make_pair("translate", SHIFTED, b))[0]
    lab = rel.relative_log_det(rel.make_pair("translate", SHIFTED, a + b))[0]
    assert lab == pytest.approx(la + lb, abs=1e-9)
