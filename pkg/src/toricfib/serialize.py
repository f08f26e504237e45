"""JSON documents for fans, pairs, contractions, and quotient data.

Rationals travel as "p/q" strings (plain "p" for integers), never as
floats.  Document shape errors raise DocumentError; mathematical errors
found while validating the parsed objects propagate as ToricError.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .divisors import InvariantDivisor
from .errors import DocumentError
from .fan import Fan
from .fibration import ToricContraction, validate_contraction
from .lattice import IntMatrix, Sublattice
from .pair import BoundaryData, GenericMember, ToricPair, build_pair


def fraction_to_text(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_text(s) -> Fraction:
    if isinstance(s, float):
        raise DocumentError(f"rational expected, got float {s!r}")
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad rational {s!r}") from exc


def _int_vector(item) -> tuple[int, ...]:
    if not isinstance(item, (list, tuple)) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in item):
        raise DocumentError(f"integer vector expected, got {item!r}")
    return tuple(item)


def _require(doc: dict, key: str):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(f"missing key {key!r}")
    return doc[key]


def fan_to_doc(fan: Fan) -> dict:
    return {
        "rank": fan.rank,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [[fan.ray_index[g] for g in c.gens] for c in fan.max_cones],
    }


def fan_from_doc(doc: dict) -> Fan:
    rank = _require(doc, "rank")
    if not isinstance(rank, int) or rank < 0:
        raise DocumentError(f"bad rank {rank!r}")
    rays = [_int_vector(r) for r in _require(doc, "rays")]
    cones = []
    for c in _require(doc, "max_cones"):
        idx = _int_vector(c)
        if any(i < 0 or i >= len(rays) for i in idx):
            raise DocumentError(f"cone {c!r} references a missing ray")
        cones.append(idx)
    return Fan.from_rays_and_cones(rank, rays, cones)


def _coeff_map_to_doc(coeffs) -> dict:
    return {str(i): fraction_to_text(c) for i, c in enumerate(coeffs)}


def _coeff_map_from_doc(doc, n: int) -> tuple[Fraction, ...]:
    if not isinstance(doc, dict):
        raise DocumentError("coefficient map expected")
    out = [Fraction(0)] * n
    for key, val in doc.items():
        try:
            i = int(key)
        except ValueError as exc:
            raise DocumentError(f"bad ray index {key!r}") from exc
        if i < 0 or i >= n:
            raise DocumentError(f"ray index {key} out of range")
        out[i] = fraction_from_text(val)
    return tuple(out)


def pair_to_doc(pair: ToricPair) -> dict:
    boundary = {"coeffs": _coeff_map_to_doc(pair.boundary.ray_coeffs)}
    if pair.boundary.generic:
        boundary["generic"] = [
            {"b": fraction_to_text(gm.coeff),
             "class": {"coeffs": _coeff_map_to_doc(gm.rep.coeffs)}}
            for gm in pair.boundary.generic]
    return {"fan": fan_to_doc(pair.fan), "boundary": boundary}


def pair_from_doc(doc: dict) -> ToricPair:
    fan = fan_from_doc(_require(doc, "fan"))
    bdoc = _require(doc, "boundary")
    n = len(fan.rays)
    coeffs = _coeff_map_from_doc(_require(bdoc, "coeffs"), n)
    generic = []
    for g in bdoc.get("generic", []):
        b = fraction_from_text(_require(g, "b"))
        cdoc = _require(g, "class")
        rep = InvariantDivisor.make(
            fan, _coeff_map_from_doc(_require(cdoc, "coeffs"), n))
        generic.append(GenericMember(b, rep))
    return build_pair(fan, BoundaryData(coeffs, tuple(generic)),
                      allow_subpair=True)


def matrix_to_doc(m: IntMatrix) -> list:
    return [list(r) for r in m.rows]


def matrix_from_doc(doc, ncols: int | None = None) -> IntMatrix:
    if not isinstance(doc, list):
        raise DocumentError("matrix expected")
    rows = [_int_vector(r) for r in doc]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise DocumentError("ragged matrix")
    if not rows and ncols is None:
        raise DocumentError("empty matrix needs a known width")
    return IntMatrix.from_rows(rows, ncols=ncols)


def contraction_to_doc(f: ToricContraction) -> dict:
    return {
        "source": fan_to_doc(f.source),
        "target": fan_to_doc(f.target),
        "pi": matrix_to_doc(f.pi),
    }


def contraction_from_doc(doc: dict) -> ToricContraction:
    src = fan_from_doc(_require(doc, "source"))
    tgt = fan_from_doc(_require(doc, "target"))
    pi = matrix_from_doc(_require(doc, "pi"), ncols=src.rank)
    if pi.nrows != tgt.rank or pi.ncols != src.rank:
        raise DocumentError("projection shape does not match the fans")
    return validate_contraction(src, tgt, pi)


@dataclass(frozen=True)
class Instance:
    """A pair together with a contraction of its fan."""

    pair: ToricPair
    contraction: ToricContraction
    name: str = ""


def instance_to_doc(inst: Instance) -> dict:
    doc = {"pair": pair_to_doc(inst.pair),
           "contraction": contraction_to_doc(inst.contraction)}
    if inst.name:
        doc["name"] = inst.name
    return doc


def instance_from_doc(doc: dict) -> Instance:
    pair = pair_from_doc(_require(doc, "pair"))
    f = contraction_from_doc(_require(doc, "contraction"))
    if pair.fan != f.source:
        raise DocumentError("pair fan and contraction source disagree")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise DocumentError("instance name must be a string")
    return Instance(pair, f, name)


def quotient_to_doc(fan: Fan, sub: Sublattice) -> dict:
    return {"fan": fan_to_doc(fan),
            "sublattice": [list(b) for b in sub.basis]}


def quotient_from_doc(doc: dict) -> tuple[Fan, Sublattice]:
    fan = fan_from_doc(_require(doc, "fan"))
    gens = [_int_vector(g) for g in _require(doc, "sublattice")]
    if any(len(g) != fan.rank for g in gens):
        raise DocumentError("sublattice generators have the wrong length")
    return fan, Sublattice(fan.rank, gens)


def load_document(doc):
    """Sniff a parsed JSON object by shape.

    Returns a Fan, ToricPair, ToricContraction, Instance, or the
    (Fan, Sublattice) tuple of a quotient document.
    """
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    if "pair" in doc and "contraction" in doc:
        return instance_from_doc(doc)
    if "pi" in doc:
        return contraction_from_doc(doc)
    if "sublattice" in doc:
        return quotient_from_doc(doc)
    if "boundary" in doc:
        return pair_from_doc(doc)
    if "max_cones" in doc:
        return fan_from_doc(doc)
    raise DocumentError("unrecognized document shape")


def parse_text(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return load_document(doc)


def to_json_text(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
