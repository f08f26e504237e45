"""Round trips and shape validation for the JSON document layer."""

import json
from fractions import Fraction

import pytest

from toricfib.divisors import InvariantDivisor
from toricfib.errors import (
    CoefficientOutOfRangeError,
    DocumentError,
    FinitePartError,
)
from toricfib.fan import Fan
from toricfib.fibration import validate_contraction
from toricfib.lattice import IntMatrix, Sublattice
from toricfib.pair import BoundaryData, GenericMember, build_pair
from toricfib.serialize import (
    Instance,
    contraction_from_doc,
    contraction_to_doc,
    fan_from_doc,
    fan_to_doc,
    fraction_from_text,
    fraction_to_text,
    instance_from_doc,
    instance_to_doc,
    load_document,
    pair_from_doc,
    pair_to_doc,
    parse_text,
    quotient_from_doc,
    quotient_to_doc,
    to_json_text,
)


def fan_p1():
    return Fan.from_rays_and_cones(1, [(1,), (-1,)], [(0,), (1,)])


def fan_p2():
    return Fan.from_rays_and_cones(
        2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])


def fan_x2():
    rays = [(2, 1), (0, 1), (-1, 0), (0, -1)]
    cones = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return Fan.from_rays_and_cones(2, rays, cones)


def ruling(fan):
    return validate_contraction(fan, fan_p1(), IntMatrix.from_rows([(1, 0)]))


def generic_pair(fan):
    rep = InvariantDivisor.make(fan, [2, 2, 2, 2])
    member = GenericMember(Fraction(1, 2), rep)
    coeffs = tuple(Fraction(0) for _ in fan.rays)
    return build_pair(fan, BoundaryData(coeffs, (member,)))


class TestFractionText:

    def test_integer_renders_bare(self):
        assert fraction_to_text(Fraction(3)) == "3"
        assert fraction_to_text(Fraction(-2, 4)) == "-1/2"

    def test_parse_round_trip(self):
        for text in ["0", "7/3", "-5", "-1/2"]:
            assert fraction_to_text(fraction_from_text(text)) == text

    def test_float_rejected(self):
        with pytest.raises(DocumentError):
            fraction_from_text(0.5)

    def test_garbage_rejected(self):
        with pytest.raises(DocumentError):
            fraction_from_text("abc")
        with pytest.raises(DocumentError):
            fraction_from_text("1/0")


class TestFanDocs:

    def test_round_trip(self):
        fan = fan_x2()
        doc = fan_to_doc(fan)
        assert fan_from_doc(doc) == fan
        assert fan_to_doc(fan_from_doc(doc)) == doc

    def test_json_text_stable(self):
        doc = fan_to_doc(fan_p2())
        text = to_json_text(doc)
        assert json.loads(text) == doc
        assert to_json_text(fan_to_doc(fan_from_doc(json.loads(text)))) == text

    def test_missing_key(self):
        doc = fan_to_doc(fan_p1())
        del doc["rank"]
        with pytest.raises(DocumentError):
            fan_from_doc(doc)

    def test_bad_rank(self):
        doc = fan_to_doc(fan_p1())
        doc["rank"] = "1"
        with pytest.raises(DocumentError):
            fan_from_doc(doc)

    def test_cone_index_out_of_range(self):
        doc = fan_to_doc(fan_p1())
        doc["max_cones"] = [[0], [5]]
        with pytest.raises(DocumentError):
            fan_from_doc(doc)

    def test_non_integer_ray(self):
        doc = fan_to_doc(fan_p1())
        doc["rays"] = [[1], [True]]
        with pytest.raises(DocumentError):
            fan_from_doc(doc)


class TestPairDocs:

    def test_zero_boundary_round_trip(self):
        pair = build_pair(fan_x2(), BoundaryData.zero(fan_x2()))
        doc = pair_to_doc(pair)
        assert pair_from_doc(doc) == pair
        assert pair_to_doc(pair_from_doc(doc)) == doc
        assert "generic" not in doc["boundary"]

    def test_generic_member_round_trip(self):
        pair = generic_pair(fan_x2())
        doc = pair_to_doc(pair)
        back = pair_from_doc(doc)
        assert back == pair
        assert back.boundary.generic[0].coeff == Fraction(1, 2)
        assert pair_to_doc(back) == doc

    def test_subpair_round_trip(self):
        fan = fan_x2()
        coeffs = (Fraction(-1), Fraction(0), Fraction(0), Fraction(0))
        pair = build_pair(fan, BoundaryData(coeffs), allow_subpair=True)
        back = pair_from_doc(pair_to_doc(pair))
        assert back == pair
        assert back.is_subpair

    def test_sparse_coeff_map(self):
        doc = pair_to_doc(build_pair(fan_x2(), BoundaryData.zero(fan_x2())))
        doc["boundary"]["coeffs"] = {"1": "1/2"}
        pair = pair_from_doc(doc)
        assert pair.boundary.ray_coeffs == (0, Fraction(1, 2), 0, 0)

    def test_bad_coeff_key(self):
        doc = pair_to_doc(build_pair(fan_x2(), BoundaryData.zero(fan_x2())))
        doc["boundary"]["coeffs"] = {"x": "1"}
        with pytest.raises(DocumentError):
            pair_from_doc(doc)
        doc["boundary"]["coeffs"] = {"9": "1"}
        with pytest.raises(DocumentError):
            pair_from_doc(doc)

    def test_float_coeff_rejected(self):
        text = to_json_text(
            pair_to_doc(build_pair(fan_x2(), BoundaryData.zero(fan_x2()))))
        text = text.replace('"0": "0"', '"0": 0.5', 1)
        with pytest.raises(DocumentError):
            parse_text(text)

    def test_math_errors_are_not_document_errors(self):
        # coefficient 2 parses fine as a document, then fails pair validation
        doc = pair_to_doc(build_pair(fan_x2(), BoundaryData.zero(fan_x2())))
        doc["boundary"]["coeffs"] = {"0": "2"}
        with pytest.raises(CoefficientOutOfRangeError):
            pair_from_doc(doc)


class TestContractionDocs:

    def test_round_trip(self):
        f = ruling(fan_x2())
        doc = contraction_to_doc(f)
        back = contraction_from_doc(doc)
        assert back == f
        assert contraction_to_doc(back) == doc

    def test_validation_errors_propagate(self):
        doc = contraction_to_doc(ruling(fan_x2()))
        doc["pi"] = [[2, 0]]
        with pytest.raises(FinitePartError):
            contraction_from_doc(doc)

    def test_shape_mismatch(self):
        doc = contraction_to_doc(ruling(fan_x2()))
        doc["pi"] = [[1, 0], [0, 1]]
        with pytest.raises(DocumentError):
            contraction_from_doc(doc)

    def test_ragged_matrix(self):
        doc = contraction_to_doc(ruling(fan_x2()))
        doc["pi"] = [[1, 0], [0]]
        with pytest.raises(DocumentError):
            contraction_from_doc(doc)


class TestInstanceDocs:

    def test_round_trip_with_name(self):
        fan = fan_x2()
        inst = Instance(generic_pair(fan), ruling(fan), name="x2")
        doc = instance_to_doc(inst)
        assert instance_from_doc(doc) == inst
        assert instance_to_doc(instance_from_doc(doc)) == doc
        assert doc["name"] == "x2"

    def test_name_defaults_empty(self):
        fan = fan_x2()
        inst = Instance(generic_pair(fan), ruling(fan))
        doc = instance_to_doc(inst)
        assert "name" not in doc
        assert instance_from_doc(doc).name == ""

    def test_fan_mismatch(self):
        doc = {
            "pair": pair_to_doc(build_pair(fan_p2(), BoundaryData.zero(fan_p2()))),
            "contraction": contraction_to_doc(ruling(fan_x2())),
        }
        with pytest.raises(DocumentError):
            instance_from_doc(doc)

    def test_non_string_name(self):
        fan = fan_x2()
        doc = instance_to_doc(Instance(generic_pair(fan), ruling(fan)))
        doc["name"] = 3
        with pytest.raises(DocumentError):
            instance_from_doc(doc)


class TestQuotientDocs:

    def test_round_trip(self):
        fan = fan_p1()
        sub = Sublattice(1, [(2,)])
        doc = quotient_to_doc(fan, sub)
        back_fan, back_sub = quotient_from_doc(doc)
        assert back_fan == fan
        assert back_sub.basis == sub.basis
        assert quotient_to_doc(back_fan, back_sub) == doc

    def test_generator_length_checked(self):
        doc = quotient_to_doc(fan_p1(), Sublattice(1, [(2,)]))
        doc["sublattice"] = [[2, 0]]
        with pytest.raises(DocumentError):
            quotient_from_doc(doc)


class TestLoadDocument:

    def test_sniffs_each_shape(self):
        fan = fan_x2()
        pair = generic_pair(fan)
        f = ruling(fan)
        assert load_document(fan_to_doc(fan)) == fan
        assert load_document(pair_to_doc(pair)) == pair
        assert load_document(contraction_to_doc(f)) == f
        assert load_document(instance_to_doc(Instance(pair, f))) == Instance(pair, f)
        got = load_document(quotient_to_doc(fan_p1(), Sublattice(1, [(2,)])))
        assert got[0] == fan_p1()
        assert got[1].basis == [(2,)]

    def test_unrecognized_shape(self):
        with pytest.raises(DocumentError):
            load_document({"foo": 1})
        with pytest.raises(DocumentError):
            load_document([1, 2])

    def test_parse_text_rejects_bad_json(self):
        with pytest.raises(DocumentError):
            parse_text("{not json")

    def test_parse_text_full_instance(self):
        fan = fan_x2()
        inst = Instance(generic_pair(fan), ruling(fan), name="x2")
        assert parse_text(to_json_text(instance_to_doc(inst))) == inst
