"""Fixture and family generation, boundary synthesis, suite round trips."""

from fractions import Fraction

import pytest

from toricfib.catalog import (
    FAMILY_NAMES,
    builtin_fixtures,
    contraction_suite,
    fan_hirzebruch,
    fan_ladder,
    fan_p1,
    fan_p2,
    fan_p112,
    fan_twisted,
    fixture,
    generate_family,
    ladder_boundary,
    synthesize_boundary,
    weighted_plane_fan,
)
from toricfib.cover import fiber_relation_vector
from toricfib.errors import UnknownFamilyError
from toricfib.fan import classify_fan
from toricfib.fibration import (
    fiber_multiplicities_over,
    general_fiber_and_split,
    is_mori_fiber_space,
    relative_triviality,
)
from toricfib.lattice import IntMatrix
from toricfib.pair import BoundaryData, has_terminal_singularities
from toricfib.serialize import instance_to_doc, parse_text, to_json_text


class TestFixtures:

    def test_names_are_unique(self):
        names = [fx.name for fx in builtin_fixtures()]
        assert len(names) == len(set(names))

    def test_lookup(self):
        fx = fixture("p112")
        assert fx.fan == fan_p112()
        assert fx.contraction.target.rank == 0

    def test_unknown_name(self):
        with pytest.raises(UnknownFamilyError):
            fixture("p113")

    def test_pairs_sit_on_the_contraction_source(self):
        for fx in builtin_fixtures():
            assert fx.pair.fan == fx.fan == fx.contraction.source

    def test_documents_embed_all_three_parts(self):
        doc = fixture("f2").document()
        assert set(doc) == {"pair", "contraction", "name"}

    def test_twisted_fixture_is_a_terminal_mfs_with_multiplicity_three(self):
        fx = fixture("twisted3")
        assert has_terminal_singularities(fx.fan)
        assert is_mori_fiber_space(fx.pair, fx.contraction)
        assert fiber_multiplicities_over(fx.contraction, (1,)) == [((1, 2, 3), 3)]
        assert general_fiber_and_split(fx.contraction).fiber_fan == fan_p2()


class TestBoundarySynthesis:

    def test_smooth_fan_gets_weight_one_half(self):
        b = synthesize_boundary(fan_p2())
        assert all(c == 0 for c in b.ray_coeffs)
        assert b.generic[0].coeff == Fraction(1, 2)
        assert b.generic[0].rep.coeffs == (2, 2, 2)

    def test_p112_gets_its_cartier_index(self):
        b = synthesize_boundary(fan_p112())
        assert b.generic[0].coeff == Fraction(1, 2)

    def test_non_nef_anticanonical_falls_back_to_full_boundary(self):
        fan = fan_hirzebruch(3)
        assert synthesize_boundary(fan) == BoundaryData.full(fan)

    def test_ladder_boundary_weight_follows_k(self):
        fan = fan_ladder(4)
        b = ladder_boundary(fan, 4)
        assert b.generic[0].coeff == Fraction(1, 4)
        assert b.generic[0].rep.coeffs == (4, 4, 4, 4)

    def test_synthesized_pairs_are_relatively_trivial(self):
        for inst in contraction_suite():
            assert relative_triviality(inst.pair, inst.contraction) is not None


class TestFamilies:

    def test_ladder_is_eleven_fiber_spaces(self):
        insts = generate_family("ladder")
        assert [i.name for i in insts] == [f"ladder_k{k}" for k in range(2, 13)]
        for inst in insts:
            assert is_mori_fiber_space(inst.pair, inst.contraction)

    def test_weight_fan_112_is_the_p112_fan(self):
        assert weighted_plane_fan(1, 1, 2) == fan_p112()

    def test_weight_fan_relation_recovers_the_weights(self):
        fan = weighted_plane_fan(2, 3, 5)
        assert classify_fan(fan).complete
        assert sorted(fiber_relation_vector(fan)) == [2, 3, 5]

    def test_weight_fan_rejects_common_factor(self):
        with pytest.raises(ValueError):
            weighted_plane_fan(2, 2, 4)

    def test_quotient_family_contains_a_fake_plane(self):
        inst = {i.name: i for i in generate_family("quotients")}["quot_fake_p2"]
        fan = inst.pair.fan
        assert len(fan.rays) == 3
        assert fiber_relation_vector(fan) == (1, 1, 1)
        dets = {abs(IntMatrix.from_cols(c.gens, nrows=2).det())
                for c in fan.max_cones}
        assert dets == {3}

    def test_quotient_of_ladder_keeps_its_ruling(self):
        inst = {i.name: i for i in generate_family("quotients")}["quot_x2_index2"]
        assert inst.pair.fan == fan_ladder(4)
        assert inst.contraction.target == fan_p1()

    def test_twisted_terminal_members_are_the_two_threefold_twists(self):
        terminal = [i.name for i in generate_family("twisted")
                    if has_terminal_singularities(i.pair.fan)]
        assert terminal == ["twisted_p2_3_1_2", "twisted_p2_3_2_1"]

    def test_twisted_multiplicity_equals_the_twist(self):
        for fiber, m, a, b in [("p2", 5, 1, 2), ("p112", 4, 1, 1)]:
            fan = fan_twisted(fiber, m, a, b)
            inst = [i for i in generate_family("twisted")
                    if i.pair.fan == fan]
            assert len(inst) == 1
            mults = fiber_multiplicities_over(inst[0].contraction, (1,))
            assert mults == [((a, b, m), m)]

    def test_twisted_apex_must_be_primitive(self):
        with pytest.raises(ValueError):
            fan_twisted("p2", 4, 2, 2)

    def test_unknown_family(self):
        with pytest.raises(UnknownFamilyError):
            generate_family("ladders")


class TestSuite:

    def test_size_and_dimensions(self):
        suite = contraction_suite()
        ranks = {inst.pair.fan.rank for inst in suite}
        assert len(suite) >= 20
        assert ranks == {2, 3, 4}

    def test_names_are_unique(self):
        names = [inst.name for inst in contraction_suite()]
        assert len(names) == len(set(names))

    def test_every_instance_round_trips_bit_exactly(self):
        for inst in contraction_suite():
            text = to_json_text(instance_to_doc(inst))
            back = parse_text(text)
            assert back == inst
            assert to_json_text(instance_to_doc(back)) == text
