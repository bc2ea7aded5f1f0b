import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetasurgery.errors import InvalidArgumentError, PositivityWarning
from zetasurgery.oned_oracle import (
    SchrodingerProblem,
    bfk_1d_check,
    constant_potential,
    dtn_1d,
    gy_det,
    gy_det_checked,
    problem_from_dict,
    split_problems,
    step_potential,
    table_potential,
    well_potential,
)

FREE = constant_potential(0.0)


def test_free_interval():
    assert gy_det(SchrodingerProblem(FREE, 0.0, 1.0, "DD")) == pytest.approx(2.0, abs=1e-10)
    assert gy_det(SchrodingerProblem(FREE, 0.0, 3.0, "DD")) == pytest.approx(6.0, abs=1e-10)
    assert gy_det(SchrodingerProblem(FREE, 0.0, 3.0, "DN")) == pytest.approx(2.0, abs=1e-10)


def test_unit_mass():
    p = SchrodingerProblem(constant_potential(1.0), 0.0, 1.0, "DD")
    assert gy_det(p) == pytest.approx(2.0 * math.sinh(1.0), abs=1e-10)
    assert gy_det(SchrodingerProblem(FREE, 0.0, 1.0, "DD", shift=1.0)) == pytest.approx(2.0 * math.sinh(1.0), abs=1e-10)


def test_periodic_matches_shifted_circle():
    p = SchrodingerProblem(constant_potential(1.0), 0.0, 1.0, "periodic")
    assert gy_det(p) == pytest.approx(4.0 * math.sinh(0.5) ** 2, abs=1e-10)
    assert gy_det(p) == pytest.approx(1.0862, abs=1e-4)


@pytest.mark.parametrize("bc", ["DN", "ND", "NN"])
def test_mass_with_neumann_ends(bc):
    m = 1.3
    p = SchrodingerProblem(constant_potential(m * m), 0.0, 1.0, bc)
    expected = {"DN": 2.0 * math.cosh(m), "ND": 2.0 * math.cosh(m), "NN": 2.0 * m * math.sinh(m)}[bc]
    assert gy_det(p) == pytest.approx(expected, rel=1e-10)


def test_refinement_estimate():
    value, err = gy_det_checked(SchrodingerProblem(well_potential(2.0, 0.3, 0.6), 0.0, 1.0, "DD", 2.5))
    assert err < 1e-9 * abs(value)


@pytest.mark.parametrize("cuts", [[0.4], [0.3, 0.7]])
def test_gluing_constant_half_per_cut(cuts):
    p = SchrodingerProblem(well_potential(1.5, 0.2, 0.5), 0.0, 1.0, "DD", 2.0)
    check = bfk_1d_check(p, cuts)
    assert check.constant == pytest.approx(0.5 ** len(cuts), rel=1e-9)


def test_gluing_constant_over_random_steps():
    rng = np.random.default_rng(7)
    for _ in range(20):
        edges = np.sort(rng.uniform(0.0, 2.0, 5))
        edges[0], edges[-1] = 0.0, 2.0
        pot = step_potential(edges, rng.uniform(0.1, 3.0, 4))
        bc = "".join(rng.choice(["D", "N"], 2))
        p = SchrodingerProblem(pot, 0.0, 2.0, bc, 0.5)
        cuts = sorted(rng.uniform(0.1, 1.9, int(rng.integers(1, 3))))
        check = bfk_1d_check(p, cuts)
        assert check.constant == pytest.approx(0.5 ** len(cuts), rel=1e-8)


def test_dtn_free_single_cut():
    # free DD interval cut at c: 1/c + 1/(L - c)
    p = SchrodingerProblem(FREE, 0.0, 1.0, "DD")
    assert dtn_1d(p, [0.25])[0, 0] == pytest.approx(4.0 + 4.0 / 3.0, rel=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 0.45), st.floats(0.55, 0.9), st.floats(0.0, 5.0))
def test_dtn_is_symmetric_positive(c1, c2, z):
    p = SchrodingerProblem(well_potential(0.5, 0.2, 0.8), 0.0, 1.0, "DN", z + 0.6)
    m = dtn_1d(p, [c1, c2])
    assert abs(m[0, 1] - m[1, 0]) <= 1e-9 * abs(m[0, 1])
    assert np.linalg.eigvalsh(m).min() > 0


@settings(max_examples=15, deadline=None)
@given(st.floats(0.0, 5.0), st.floats(0.05, 3.0))
def test_determinant_increases_with_shift(z, dz):
    pot = table_potential([0.0, 0.5, 1.0], [0.0, 2.0, 1.0])
    lo = gy_det(SchrodingerProblem(pot, 0.0, 1.0, "DD", z))
    hi = gy_det(SchrodingerProblem(pot, 0.0, 1.0, "DD", z + dz))
    assert hi > lo > 0


def test_split_pieces():
    p = SchrodingerProblem(FREE, 0.0, 3.0, "NN")
    pieces = split_problems(p, [1.0, 2.0])
    assert [q.bc for q in pieces] == ["ND", "DD", "DN"]
    assert [(q.a, q.b) for q in pieces] == [(0.0, 1.0), (1.0, 2.0), (2.0, 3.0)]


def test_positivity_warning():
    with pytest.warns(PositivityWarning):
        SchrodingerProblem(well_potential(5.0, 0.2, 0.4), 0.0, 1.0, "DD")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        SchrodingerProblem(well_potential(5.0, 0.2, 0.4), 0.0, 1.0, "DD", 6.0)


def test_invalid_problems():
    with pytest.raises(InvalidArgumentError):
        SchrodingerProblem(FREE, 1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        SchrodingerProblem(FREE, 0.0, 1.0, "DX")
    with pytest.raises(InvalidArgumentError):
        dtn_1d(SchrodingerProblem(FREE, 0.0, 1.0), [1.5])


def test_round_trip():
    p = SchrodingerProblem(step_potential([0.0, 0.5, 1.0], [1.0, 2.0]), 0.0, 1.0, "ND", 0.3)
    assert problem_from_dict(p.to_dict()) == p
