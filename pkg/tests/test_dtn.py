import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetasurgery import dtn
from zetasurgery.errors import InvalidArgumentError, SingularOperatorError
from zetasurgery.oned_oracle import SchrodingerProblem, constant_potential, dtn_1d
from zetasurgery.spectra import circle_spectrum, point_spectrum, shift_spectrum
from zetasurgery.zeta_det import det_zeta

UNIT_CIRCLE = circle_spectrum(1.0)
SHIFTED = shift_spectrum(UNIT_CIRCLE, 1.0)


def test_cap_zero_modes():
    assert dtn.cap_dtn(2.0, "D", UNIT_CIRCLE).zero_mode_value == 0.5
    assert dtn.cap_dtn(2.0, "N", UNIT_CIRCLE).zero_mode_value == 0.0
    assert dtn.cap_dtn(2.0, "Dirichlet", UNIT_CIRCLE).zero_mode_value == 0.5


def test_cap_symbols():
    d = dtn.cap_dtn(0.5, "D", UNIT_CIRCLE)
    n = dtn.cap_dtn(0.5, "N", UNIT_CIRCLE)
    assert d.symbol(4.0) == pytest.approx(2.0 / math.tanh(1.0), rel=1e-15)
    assert n.symbol(4.0) == pytest.approx(2.0 * math.tanh(1.0), rel=1e-15)


def test_invalid_caps():
    with pytest.raises(InvalidArgumentError):
        dtn.cap_dtn(0.0, "D", UNIT_CIRCLE)
    with pytest.raises(InvalidArgumentError):
        dtn.cap_dtn(1.0, "X", UNIT_CIRCLE)
    with pytest.raises(InvalidArgumentError):
        dtn.assemble_L_r(dtn.cap_dtn(1.0, "D", UNIT_CIRCLE), -1.0)


def test_neck_block_values():
    b = dtn.neck_block(1.0, 1.0)
    assert b[0, 1] == pytest.approx(-1.0 / math.sinh(2.0), rel=1e-14)
    assert b[0, 1] == pytest.approx(-0.27572056477178325, rel=1e-14)
    assert b[0, 0] == pytest.approx(math.exp(-2.0) / math.sinh(2.0), rel=1e-14)
    np.testing.assert_allclose(dtn.neck_block(0.0, 0.5), [[1.0, -1.0], [-1.0, 1.0]])
    # no overflow far out
    assert dtn.neck_block(1e4, 50.0)[0, 1] == 0.0


@pytest.mark.parametrize("m_sq,a1,r,a2", [(1.0, 1.0, 0.5, 1.0), (4.0, 0.7, 1.2, 0.4)])
def test_block_matches_three_segment_interval(m_sq, a1, r, a2):
    spec = shift_spectrum(point_spectrum(), m_sq)
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(a1, "D", spec), dtn.cap_dtn(a2, "D", spec))
    block = dtn.assemble_R_r(r_inf, r).block(m_sq)
    k = math.sqrt(m_sq)
    p = SchrodingerProblem(constant_potential(m_sq), 0.0, a1 + 2 * r + a2, "DD")
    oracle = dtn_1d(p, [a1, a1 + 2 * r])
    # closed-form caps plus the Dirichlet segment DtN of the neck
    seg = np.array(
        [
            [k / math.tanh(2 * k * r), -k / math.sinh(2 * k * r)],
            [-k / math.sinh(2 * k * r), k / math.tanh(2 * k * r)],
        ]
    )
    caps = np.diag([k / math.tanh(k * a1), k / math.tanh(k * a2)])
    np.testing.assert_allclose(oracle, seg + caps, rtol=1e-9)
    np.testing.assert_allclose(block, oracle, rtol=1e-9)


def test_block_zero_mode_matches_interval():
    spec = UNIT_CIRCLE
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(1.0, "D", spec), dtn.cap_dtn(1.0, "D", spec))
    zero = dtn.assemble_R_r(r_inf, 0.5).zero_block
    np.testing.assert_allclose(zero, [[2.0, -1.0], [-1.0, 2.0]])


def test_trace_norm_decreases():
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(1.0, "D", UNIT_CIRCLE), dtn.cap_dtn(1.0, "N", UNIT_CIRCLE))
    norms = [dtn.trace_norm_K(dtn.assemble_R_r(r_inf, r)) for r in (1.0, 2.0, 4.0, 8.0)]
    assert all(b < a for a, b in zip(norms[:-1], norms[1:]))
    assert dtn.trace_norm_K(r_inf) == 0.0


def test_sqrt_operator_determinant_unit_circle():
    # det(2 sqrt(Delta)) = 2^{zeta(0)} det(Delta)^{1/2} = 1/2 on the unit circle
    d = dtn.det_zeta_mode(dtn.sqrt_operator(UNIT_CIRCLE, 2.0), exclude_kernel=True)
    assert d.value == pytest.approx(0.5, rel=1e-10)
    assert d.kernel_dim == 1


def test_sqrt_operator_determinant_shifted():
    d = dtn.det_zeta_mode(dtn.sqrt_operator(SHIFTED, 2.0))
    assert d.value == pytest.approx(math.sqrt(det_zeta(SHIFTED)), rel=1e-10)
    assert d.log_value == pytest.approx(0.04132485461291785, abs=1e-10)


def test_singular_zero_mode_is_reported():
    with pytest.raises(SingularOperatorError):
        dtn.det_zeta_mode(dtn.assemble_R_single(dtn.cap_dtn(1.0, "N", UNIT_CIRCLE)))


@pytest.mark.parametrize("n", [1, 3, 6])
def test_exact_modes_do_not_change_result(n):
    op = dtn.assemble_R_single(dtn.cap_dtn(0.4, "D", SHIFTED))
    base = dtn.det_zeta_mode(op)
    moved = dtn.det_zeta_mode(op, exact_modes=n)
    assert moved.log_value == pytest.approx(base.log_value, abs=1e-11)


def test_point_fibre_block_determinant():
    spec = shift_spectrum(point_spectrum(), 4.0)
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(1.0, "D", spec), dtn.cap_dtn(1.0, "N", spec))
    op = dtn.assemble_R_r(r_inf, 1.0)
    # finite spectrum: the determinant is the product of eigenvalues
    assert dtn.det_zeta_block(op).value == pytest.approx(float(np.linalg.det(op.block(4.0))), rel=1e-12)


def test_block_converges_to_r_infinity():
    caps = (dtn.cap_dtn(1.0, "D", SHIFTED), dtn.cap_dtn(1.0, "D", SHIFTED))
    r_inf = dtn.assemble_R_infinity(*caps)
    limit = dtn.det_zeta_block(r_inf).log_value
    direct = sum(dtn.det_zeta_mode(c + dtn.exterior_dtn(SHIFTED)).log_value for c in caps)
    assert limit == pytest.approx(direct, abs=1e-12)
    errs = [abs(dtn.det_zeta_block(dtn.assemble_R_r(r_inf, r)).log_value - limit) for r in (1.0, 2.0, 4.0, 8.0)]
    assert all(b < a for a, b in zip(errs[:-1], errs[1:]))
    assert errs[-1] < 1e-10


def test_capped_half_cylinder_determinant():
    # per mode k coth k + k = 2k / (1 - e^{-2k}); zeta(0) = 0 on the shifted
    # circle, so log det = log det(Delta)^{1/2} - sum log(1 - e^{-2k})
    op = dtn.assemble_R_single(dtn.cap_dtn(1.0, "D", SHIFTED))
    ks = [1.0] + [math.sqrt(1.0 + 4.0 * math.pi**2 * n * n) for n in range(1, 50) for _ in range(2)]
    expected = math.log(2.0 * math.sinh(0.5)) - math.fsum(math.log1p(-math.exp(-2.0 * k)) for k in ks)
    assert dtn.det_zeta_mode(op).log_value == pytest.approx(expected, abs=1e-11)


def test_kernel_split_neumann_caps():
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(1.0, "N", UNIT_CIRCLE), dtn.cap_dtn(2.0, "N", UNIT_CIRCLE))
    split = dtn.kernel_split(r_inf, 3.0)
    assert split.kernel_dim == 1
    v = split.kernel_basis[0]
    assert abs(v[0]) == pytest.approx(abs(v[1]))
    assert v[0] * v[1] > 0
    assert split.w_eigenvalue == pytest.approx(1.0 / 3.0)


def test_kernel_split_dirichlet_caps():
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(1.0, "D", UNIT_CIRCLE), dtn.cap_dtn(1.0, "D", UNIT_CIRCLE))
    split = dtn.kernel_split(r_inf, 2.0)
    assert split.kernel_dim == 0
    # eigenvalues of [[1 + 1/4, -1/4], [-1/4, 1 + 1/4]]
    np.testing.assert_allclose(sorted(split.restricted_eigenvalues), [1.0, 1.5])


def test_kernel_split_no_zero_modes():
    r_inf = dtn.assemble_R_infinity(dtn.cap_dtn(1.0, "N", SHIFTED), dtn.cap_dtn(1.0, "N", SHIFTED))
    assert dtn.kernel_split(r_inf, 1.0).kernel_dim == 0


@pytest.mark.parametrize("bc,slope", [("N", 0.5), ("D", 0.0)])
def test_small_lambda_probe(bc, slope):
    fitted, _ = dtn.detR_small_lambda_probe(1.0, bc, UNIT_CIRCLE)
    assert fitted == pytest.approx(slope, abs=0.01)


def test_json_schema():
    op = dtn.assemble_R_single(dtn.cap_dtn(1.0, "D", UNIT_CIRCLE))
    doc = op.to_dict()
    assert set(doc) == {"spectrum", "symbol", "zero_block"}
    assert doc["zero_block"] == [[1.0]]
    assert dtn.mode_operator_from_dict(doc) == op


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 400.0), st.floats(0.05, 10.0))
def test_neck_block_is_positive_semidefinite(mu, r):
    w = np.linalg.eigvalsh(dtn.neck_block(mu, r) + math.sqrt(mu) * np.eye(2))
    assert w.min() >= -1e-12
