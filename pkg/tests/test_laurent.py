import math

import pytest

from frobsep import laurent


def test_denominator_matches_signed_orbit_sum():
    for g in (1, 2, 3):
        rho = tuple(range(g, 0, -1))
        assert laurent.weyl_denominator(g) == laurent.antisymmetrized_orbit(rho, g)


def test_tensor_square_decompositions():
    v1 = laurent.tautological(1)
    assert laurent.decompose(laurent.mul(v1, v1), 1) == {(2,): 1, (): 1}
    v2 = laurent.tautological(2)
    assert laurent.decompose(laurent.mul(v2, v2), 2) == {(2,): 1, (1, 1): 1, (): 1}


def test_psi_factor_decompositions():
    for g in (1, 2):
        v = laurent.tautological(g)
        minus = laurent.add(laurent.mul(v, v), laurent.scale(v, -2 * g))
        dec = laurent.decompose(minus, g)
        assert dec[(1,)] == -2 * g
        assert dec[()] == 1
        assert laurent.trivial_multiplicity_exact(minus, g) == 1


def test_adams_substitution_is_pointwise_squaring():
    v = laurent.tautological(2)
    doubled = laurent.power_substitution(v, 2)
    for angles in [(0.3, 1.1), (2.0, 0.5)]:
        got = laurent.evaluate(doubled, angles)
        want = laurent.evaluate(v, tuple(2 * t for t in angles))
        assert got == pytest.approx(want, abs=1e-12)


def test_decompose_rejects_rank_above_exact_limit():
    with pytest.raises(ValueError):
        laurent.decompose(laurent.tautological(5), 5)


def test_dimension_values():
    # Weyl dimension formula, frozen small cases
    assert [laurent.dimension_exact((k,), 1) for k in range(5)] == [1, 2, 3, 4, 5]
    assert laurent.dimension_exact((1,), 2) == 4
    assert laurent.dimension_exact((1, 1), 2) == 5
    assert laurent.dimension_exact((2,), 2) == 10
    assert laurent.dimension_exact((3,), 2) == 20
    assert laurent.dimension_exact((2, 1), 2) == 16
    assert laurent.dimension_exact((1,), 3) == 6


def test_character_value_exact_trace():
    # the tautological character is the sum of 2 cos(theta_j)
    angles = (0.7, 1.9)
    want = sum(2 * math.cos(t) for t in angles)
    assert laurent.character_value_exact((1,), 2, angles) == pytest.approx(want, abs=1e-10)


def test_evaluate_rejects_asymmetric_input():
    with pytest.raises(ArithmeticError):
        laurent.evaluate({(1,): 1}, (0.3,))   # z alone is not selfdual
