import math

import numpy as np
import pytest

from frobsep import laurent
from frobsep import symplectic as sy
from frobsep.errors import NonIntegral, OrderTooSmall, PoleInput


def all_weights(g, max_degree=3):
    return [sy.DominantWeight(g, parts)
            for parts in laurent.partitions_upto(max_degree, g)]


class TestCharValue:
    def test_su2_at_right_angle(self):
        w = sy.DominantWeight(1, (1,))
        assert sy.char_value(w, sy.TorusPoint((math.pi / 2,))) == pytest.approx(0.0, abs=1e-12)

    def test_identity_gives_dimension(self):
        for g in (1, 2):
            for w in all_weights(g):
                ident = sy.TorusPoint((0.0,) * g)
                assert sy.char_value(w, ident) == pytest.approx(sy.dimension(w), abs=1e-9)

    def test_lambda11_identity_value(self):
        w = sy.DominantWeight(2, (1, 1))
        assert sy.char_value(w, sy.TorusPoint((0.0, 0.0))) == pytest.approx(5.0, abs=1e-10)

    def test_matches_antisymmetrized_oracle_at_random_points(self):
        rng = np.random.default_rng(7)
        for g in (1, 2):
            for w in all_weights(g):
                for _ in range(20):
                    angles = tuple(rng.uniform(0.05, math.pi - 0.05, size=g))
                    want = laurent.character_value_exact(w.parts, g, angles)
                    got = sy.char_value(w, sy.TorusPoint(angles))
                    assert got == pytest.approx(want, abs=1e-9)

    def test_near_coincident_angles_stay_accurate(self):
        w = sy.DominantWeight(2, (2, 1))
        base = 0.9
        # direct path just outside the confluence window matches the oracle
        for eps in (1e-5, 1e-4):
            got = sy.char_value(w, sy.TorusPoint((base, base + eps)))
            want = laurent.character_value_exact(w.parts, 2, (base, base + eps))
            assert got == pytest.approx(want, abs=1e-8)
        # confluent limit agrees with the oracle approaching the diagonal
        limit = sy.char_value(w, sy.TorusPoint((base, base)))
        near = laurent.character_value_exact(w.parts, 2, (base, base + 1e-7))
        assert limit == pytest.approx(near, abs=1e-5)
        inside = sy.char_value(w, sy.TorusPoint((base, base + 1e-8)))
        assert inside == pytest.approx(limit, abs=1e-6)

    def test_rank_mismatch_rejected(self):
        with pytest.raises(ValueError):
            sy.char_value(sy.DominantWeight(2, (1,)), sy.TorusPoint((0.3,)))


class TestDimension:
    def test_small_table(self):
        assert sy.dimension(sy.DominantWeight(2, (1,))) == 4
        assert sy.dimension(sy.DominantWeight(1, ())) == 1
        assert sy.dimension(sy.DominantWeight(2, (2,))) == 10

    def test_bad_partition_rejected(self):
        with pytest.raises(ValueError):
            sy.DominantWeight(1, (1, 1))
        with pytest.raises(ValueError):
            sy.DominantWeight(2, (1, 2))


class TestWeylIntegrate:
    def test_normalization(self):
        assert sy.weyl_integrate(lambda p: 1.0, 1) == pytest.approx(1.0, abs=1e-14)

    def test_tautological_integrates_to_zero(self):
        w = sy.DominantWeight(1, (1,))
        val = sy.weyl_integrate(lambda p: sy.char_value(w, p), 1, order=64)
        assert val == pytest.approx(0.0, abs=1e-9)

    def test_tautological_square_integrates_to_one(self):
        w = sy.DominantWeight(1, (1,))
        val = sy.weyl_integrate(lambda p: sy.char_value(w, p) ** 2, 1, order=64)
        assert val == pytest.approx(1.0, abs=1e-9)

    def test_order_too_small(self):
        with pytest.raises(OrderTooSmall):
            sy.weyl_integrate(lambda p: 1.0, 1, order=4)


class TestInnerProducts:
    def test_orthonormality_small_weights(self):
        for g in (1, 2):
            ws = all_weights(g)
            for w1 in ws:
                for w2 in ws:
                    chi1 = sy.VirtualCharacter((g,), {(w1.parts,): 1})
                    chi2 = sy.VirtualCharacter((g,), {(w2.parts,): 1})
                    raw = sy.inner_product_raw(chi1, chi2, order=64)
                    want = 1.0 if w1 == w2 else 0.0
                    assert abs(raw - want) < 1e-6
                    assert sy.inner_product(chi1, chi2, order=64) == int(want)

    def test_quadrature_converges(self):
        chi = sy.VirtualCharacter((2,), {((2, 1),): 1})
        a = sy.inner_product_raw(chi, chi, order=64)
        b = sy.inner_product_raw(chi, chi, order=128)
        assert abs(a - b) < 1e-8

    def test_nonintegral_gate(self):
        chi = sy.VirtualCharacter((1,), {((4,),): 1})
        with pytest.raises(NonIntegral):
            sy.inner_product(chi, chi, order=8)

    def test_tensor_square_contains_one_trivial(self):
        # Alt^2 V carries the symplectic form for every rank
        for g in (1, 2):
            vv = sy.tensor_square_char(g)
            assert sy.inner_product(vv, sy.trivial_char(g), order=64) == 1


class TestTrivialMultiplicity:
    def test_tautological_has_none(self):
        for g in (1, 2):
            assert sy.trivial_multiplicity(sy.tautological_char(g)) == 0

    def test_box_product_factorizes(self):
        v_box_v = sy.box_product(sy.tautological_char(1), sy.tautological_char(2))
        assert sy.trivial_multiplicity(v_box_v) == 0

    def test_odd_degree_in_second_factor_vanishes(self):
        chi = sy.box_product(sy.tautological_char(1), sy.tensor_square_char(1))
        # V box (V (x) V): odd total degree in the first factor
        assert sy.trivial_multiplicity(chi) == 0
        raw = sy.inner_product_raw(
            chi, sy.VirtualCharacter(chi.gs, {((), ()): 1}), order=64)
        assert abs(raw) < 1e-9

    def test_matches_exact_path(self):
        for g in (1, 2):
            chi = sy.tensor_square_char(g)
            assert sy.trivial_multiplicity(chi) == sy.trivial_multiplicity_exact(chi) == 1


class TestPsiCharacter:
    @pytest.mark.parametrize("g,g2", [(1, 1), (1, 2), (2, 2)])
    def test_delta_is_one_by_both_paths(self, g, g2):
        psi = sy.psi_character(g, g2)
        assert sy.trivial_multiplicity(psi) == 1
        assert sy.trivial_multiplicity_exact(psi) == 1
        assert sy.psi_delta_exact(g, g2) == 1
        assert psi.metadata.delta == 1

    def test_vanishes_at_identity(self):
        psi = sy.psi_character(1, 1)
        ident = sy.TorusPoint((0.0,), (0.0,))
        assert psi.value(ident) == pytest.approx(0.0, abs=1e-9)

    def test_sign_identity_point(self):
        # traces (1, -1) give psi = 1
        psi = sy.psi_character(1, 1)
        pt = sy.TorusPoint((math.acos(0.5),), (math.acos(-0.5),))
        assert psi.value(pt) == pytest.approx(1.0, abs=1e-9)

    def test_metadata(self):
        for g, g2 in [(1, 1), (2, 1), (2, 2)]:
            psi = sy.psi_character(g, g2)
            assert psi.metadata.d_chi == 64 * g * g * g2 * g2
            assert psi.metadata.w_chi == 2
            assert psi.metadata.t_chi == pytest.approx(64 * g * g * g2 * g2, rel=1e-6)

    def test_evaluation_matches_trace_formula(self):
        psi = sy.psi_character(1, 2)
        pt = sy.TorusPoint((0.8,), (0.4, 2.2))
        t = 2 * math.cos(0.8)
        t2 = 2 * math.cos(0.4) + 2 * math.cos(2.2)
        want = t * t2 * (t - 2) * (t2 + 4)
        assert psi.value(pt) == pytest.approx(want, abs=1e-9)


class TestAdams:
    @pytest.mark.parametrize("g", [1, 2])
    @pytest.mark.parametrize("make", [sy.tautological_char, sy.tensor_square_char,
                                      sy.sym2_char])
    def test_pointwise_identity(self, g, make):
        chi = make(g)
        doubled = sy.adams2(chi)
        rng = np.random.default_rng(11)
        for _ in range(100):
            angles = tuple(rng.uniform(0.0, math.pi, size=g))
            pt = sy.TorusPoint(angles)
            squared = pt.power(2)
            assert doubled.value(pt) == pytest.approx(chi.value(squared), abs=1e-9)

    def test_adams_of_v_matches_exact_substitution(self):
        for g in (1, 2):
            got = sy.adams2(sy.tautological_char(g)).terms
            want = laurent.decompose(
                laurent.power_substitution(laurent.tautological(g), 2), g)
            assert {k[0]: c for k, c in got.items()} == want

    def test_fs_indicator_values(self):
        assert sy.fs_indicator(sy.DominantWeight(1, (1,))) == -1
        assert sy.fs_indicator(sy.DominantWeight(2, (1,))) == -1
        assert sy.fs_indicator(sy.DominantWeight(1, ())) == 1
        assert sy.fs_indicator(sy.DominantWeight(1, (2,))) == 1

    def test_fs_equals_delta_of_adams(self):
        for g in (1, 2):
            chi = sy.tautological_char(g)
            assert sy.trivial_multiplicity(sy.adams2(chi)) == sy.fs_indicator(
                sy.DominantWeight(g, (1,)))

    def test_metadata_transform(self):
        v = sy.tautological_char(2)
        meta = sy.weight_metadata(sy.DominantWeight(2, (1,)))
        object.__setattr__(v, "metadata", meta)
        doubled = sy.adams2(v)
        assert doubled.metadata.w_chi == 2 * meta.w_chi
        assert doubled.metadata.t_chi == meta.d_chi
        assert doubled.metadata.gamma_chi_bound == 2 * meta.d_chi
        assert doubled.metadata.delta == -1
        assert doubled.metadata.b_bound == (None, 2 * meta.d_chi)


class TestCharacterMax:
    def test_irreducible_max_is_dimension(self):
        for g in (1, 2):
            for parts in [(1,), (2,)] + ([(1, 1)] if g == 2 else []):
                chi = sy.VirtualCharacter((g,), {(parts,): 1})
                d = sy.dimension(sy.DominantWeight(g, parts))
                assert sy.character_max(chi) == pytest.approx(d, abs=1e-6)


class TestDuplication:
    def test_at_one(self):
        assert sy.duplication_check(1.0) <= 1e-10

    def test_at_half_integer_matches_high_precision_oracle(self):
        import mpmath

        s = 2.5
        with mpmath.workdps(50):
            lhs = mpmath.gamma(2 * s)
            rhs = (mpmath.gamma(s) * mpmath.gamma(s + mpmath.mpf(1) / 2)
                   * mpmath.mpf(2) ** (2 * s - 1) / mpmath.sqrt(mpmath.pi))
            assert abs(lhs - rhs) / abs(lhs) < mpmath.mpf(10) ** -40
        assert sy.duplication_check(s) <= 1e-10

    def test_pole_rejected(self):
        with pytest.raises(PoleInput):
            sy.duplication_check(0.0)
        with pytest.raises(PoleInput):
            sy.duplication_check(-0.5)


class TestVirtualCharacterType:
    def test_json_round_trip(self):
        psi = sy.psi_character(1, 2)
        doc = psi.to_json()
        assert doc["g"] == 1 and doc["g2"] == 2
        assert sy.VirtualCharacter.from_json(doc) == psi

    def test_single_factor_json(self):
        chi = sy.tensor_square_char(2)
        assert sy.VirtualCharacter.from_json(chi.to_json()) == chi

    def test_zero_coefficients_dropped(self):
        chi = sy.tautological_char(1) - sy.tautological_char(1)
        assert chi.terms == {}

    def test_torus_point_validation(self):
        with pytest.raises(ValueError):
            sy.TorusPoint((4.0,))

    def test_power_folds_back(self):
        pt = sy.TorusPoint((2.0,))
        folded = pt.power(2)
        assert 0.0 <= folded.angles[0] <= math.pi
        assert math.cos(folded.angles[0]) == pytest.approx(math.cos(4.0), abs=1e-12)
