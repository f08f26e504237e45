"""Command line driver.

Every subcommand reads JSON documents, computes exact rational reports,
and writes them as indented JSON (--json) or indented text.  Exit codes:
0 on success, 1 when the mathematics rejects the input (a ToricError),
2 on unreadable or malformed documents and bad usage.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .catalog import FAMILY_NAMES, builtin_fixtures, generate_family
from .cover import pr_cover, quotient_by_sublattice
from .errors import DocumentError, ToricError
from .experiments import (
    ExperimentConfig,
    run_delta_experiment,
    run_monotonicity_experiment,
    run_multiplicity_experiment,
)
from .fan import Fan, classify_fan, star_subdivide, validate_fan
from .fibration import (
    ToricContraction,
    base_lct_infimum,
    discriminant_divisor,
    fiber_multiplicities_over,
    general_fiber_and_split,
    is_fano_contraction,
    is_mori_fiber_space,
    lct_over_direction,
)
from .pair import BoundaryData, ToricPair, build_pair, crepant_transfer, mld_and_eps_check
from .serialize import (
    Instance,
    fan_to_doc,
    fraction_to_text,
    instance_to_doc,
    pair_to_doc,
    parse_text,
    to_json_text,
)


def _load(path: str):
    return parse_text(Path(path).read_text())


def _need_fan(obj) -> Fan:
    if isinstance(obj, Fan):
        return obj
    if isinstance(obj, ToricPair):
        return obj.fan
    if isinstance(obj, Instance):
        return obj.pair.fan
    if isinstance(obj, ToricContraction):
        return obj.source
    raise DocumentError("this command needs a fan document")


def _need_pair(obj) -> ToricPair:
    if isinstance(obj, ToricPair):
        return obj
    if isinstance(obj, Instance):
        return obj.pair
    if isinstance(obj, Fan):
        return build_pair(obj, BoundaryData.zero(obj))
    raise DocumentError("this command needs a pair (or fan) document")


def _need_instance(obj) -> Instance:
    """An instance document, or a bare contraction taken with the empty
    boundary on its source."""
    if isinstance(obj, Instance):
        return obj
    if isinstance(obj, ToricContraction):
        return Instance(build_pair(obj.source, BoundaryData.zero(obj.source)), obj)
    raise DocumentError("this command needs an instance (pair + contraction) document")


def _vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}")


def _flat(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_flat(v) for v in value) + "]"
    return str(value)


def _is_nested(value) -> bool:
    if isinstance(value, dict):
        return bool(value)
    if isinstance(value, list):
        return any(isinstance(v, dict) for v in value)
    return False


def _render_into(value, prefix: str, lines: list) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            if _is_nested(item):
                lines.append(f"{prefix}{key}:")
                _render_into(item, prefix + "  ", lines)
            else:
                lines.append(f"{prefix}{key}: {_flat(item)}")
    else:
        for item in value:
            if _is_nested(item) or isinstance(item, dict):
                lines.append(f"{prefix}-")
                _render_into(item, prefix + "  ", lines)
            else:
                lines.append(f"{prefix}- {_flat(item)}")


def _emit(args, payload: dict) -> None:
    if args.json:
        text = to_json_text(payload)
    else:
        lines: list = []
        _render_into(payload, "", lines)
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _fan_report(role: str, fan: Fan) -> dict:
    report = validate_fan(fan)
    return {"role": role, "rank": report.rank, "rays": report.n_rays,
            "max_cones": report.n_max_cones}


def cmd_validate(args) -> dict:
    obj = _load(args.input)
    if isinstance(obj, Fan):
        kind, reports = "fan", [_fan_report("fan", obj)]
    elif isinstance(obj, ToricPair):
        kind, reports = "pair", [_fan_report("fan", obj.fan)]
    elif isinstance(obj, ToricContraction):
        kind = "contraction"
        reports = [_fan_report("source", obj.source),
                   _fan_report("target", obj.target)]
    elif isinstance(obj, Instance):
        kind = "instance"
        reports = [_fan_report("source", obj.pair.fan),
                   _fan_report("target", obj.contraction.target)]
    else:
        fan, sub = obj
        kind = "quotient"
        reports = [_fan_report("fan", fan)]
        reports[0]["sublattice_rank"] = len(sub.basis)
    return {"kind": kind, "valid": True, "fans": reports}


def cmd_classify(args) -> dict:
    fan = _need_fan(_load(args.input))
    cls = classify_fan(fan)
    return {"rank": fan.rank, "rays": [list(r) for r in fan.rays],
            "simplicial": cls.simplicial, "smooth": cls.smooth,
            "complete": cls.complete}


def cmd_mld(args) -> dict:
    pair = _need_pair(_load(args.input))
    res = mld_and_eps_check(pair, args.epsilon)
    return {"mld": fraction_to_text(res.mld_toric),
            "epsilon": fraction_to_text(args.epsilon),
            "eps_lc": res.eps_lc,
            "witness": list(res.witness),
            "generic_floor": (None if res.generic_floor is None
                              else fraction_to_text(res.generic_floor))}


def cmd_lct(args) -> dict:
    inst = _need_instance(_load(args.input))
    res = lct_over_direction(inst.pair, inst.contraction, args.direction)
    return {"direction": list(args.direction),
            "t": fraction_to_text(res.t),
            "witness": list(res.witness)}


def cmd_adjunction(args) -> dict:
    inst = _need_instance(_load(args.input))
    adj = discriminant_divisor(inst.pair, inst.contraction)
    target = inst.contraction.target
    return {
        "discriminant": [
            {"ray": list(w), "coeff": fraction_to_text(c)}
            for w, c in zip(target.rays, adj.discriminant.coeffs)],
        "moduli_class": [fraction_to_text(x) for x in adj.moduli_class],
        "moduli_degree": fraction_to_text(sum(adj.moduli_class, Fraction(0))),
        "descended_class": [fraction_to_text(x) for x in adj.descended_class],
        "witnesses": [
            {"ray": list(w), "source_ray": list(u), "t": fraction_to_text(t)}
            for w, u, t in adj.witnesses],
    }


def cmd_base_inf(args) -> dict:
    inst = _need_instance(_load(args.input))
    res = base_lct_infimum(inst.pair, inst.contraction, args.box)
    return {"delta": fraction_to_text(res.delta),
            "witness_direction": list(res.witness_direction),
            "box": args.box,
            "oracle_delta": (None if res.oracle_delta is None
                             else fraction_to_text(res.oracle_delta)),
            "exact": res.exact}


def cmd_fiber(args) -> dict:
    inst = _need_instance(_load(args.input))
    f = inst.contraction
    if args.direction is not None:
        mults = fiber_multiplicities_over(f, args.direction)
        return {"direction": list(args.direction),
                "fibers": [{"ray": list(v), "multiplicity": m}
                           for v, m in mults],
                "max_multiplicity": max(m for _, m in mults)}
    data = general_fiber_and_split(f)
    return {"fiber_fan": fan_to_doc(data.fiber_fan),
            "kernel_basis": [list(v) for v in data.kernel_basis],
            "split_section": (None if data.split_section is None
                              else [list(v) for v in data.split_section])}


def cmd_mfs_check(args) -> dict:
    inst = _need_instance(_load(args.input))
    return {"fano_contraction": is_fano_contraction(inst.pair, inst.contraction),
            "mori_fiber_space": is_mori_fiber_space(inst.pair, inst.contraction)}


def cmd_cover(args) -> dict:
    inst = _need_instance(_load(args.input))
    data, report = pr_cover(inst.contraction, inst.pair)
    return {"degree": report.degree,
            "sublattice": [list(b) for b in data.sublattice.basis],
            "fiber_is_projective_space": report.fiber_is_projective_space}


def cmd_quotient(args) -> dict:
    obj = _load(args.input)
    if not isinstance(obj, tuple):
        raise DocumentError("this command needs a quotient (fan + sublattice) document")
    fan, sub = obj
    data = quotient_by_sublattice(fan, sub)
    return {"degree": data.degree,
            "cover_fan": fan_to_doc(data.cover_fan),
            "inclusion": [list(r) for r in data.inclusion.rows]}


def cmd_subdivide(args) -> dict:
    obj = _load(args.input)
    if isinstance(obj, Fan):
        return fan_to_doc(star_subdivide(obj, args.at))
    if isinstance(obj, (ToricPair, Instance)):
        pair = _need_pair(obj)
        refined = star_subdivide(pair.fan, args.at)
        return pair_to_doc(crepant_transfer(pair, refined))
    raise DocumentError("this command needs a fan or pair document")


def _experiment_config(args) -> ExperimentConfig:
    families = (args.family,) if args.family else FAMILY_NAMES
    try:
        return ExperimentConfig(epsilon=args.epsilon, alpha=args.alpha,
                                box=args.box, families=families,
                                seed=args.seed)
    except ValueError as exc:
        raise DocumentError(str(exc))


def cmd_catalog(args) -> dict:
    if args.experiment == "multiplicity":
        rep = run_multiplicity_experiment(_experiment_config(args))
        return {"epsilon": fraction_to_text(rep.epsilon),
                "rows": [{"name": r.name, "mld": fraction_to_text(r.mld),
                          "eps_lc": r.eps_lc,
                          "max_multiplicity": r.max_multiplicity}
                         for r in rep.rows],
                "max_over_eps_lc": rep.max_over_eps_lc}
    if args.experiment == "delta":
        rep = run_delta_experiment(_experiment_config(args))
        return {"epsilon": fraction_to_text(rep.epsilon),
                "alpha": fraction_to_text(rep.alpha),
                "rows": [{"name": r.name, "input_eps_lc": r.input_eps_lc,
                          "delta": fraction_to_text(r.delta),
                          "exact": r.exact}
                         for r in rep.rows],
                "min_over_eps_lc": (None if rep.min_over_eps_lc is None
                                    else fraction_to_text(rep.min_over_eps_lc))}
    if args.experiment == "monotonicity":
        rep = run_monotonicity_experiment(_experiment_config(args))
        return {"seed": rep.seed,
                "rows": [{"name": r.name, "low": fraction_to_text(r.low),
                          "high": fraction_to_text(r.high),
                          "thresholds_ordered": r.thresholds_ordered,
                          "alpha": fraction_to_text(r.alpha),
                          "moduli_proportional": r.moduli_proportional}
                         for r in rep.rows],
                "all_hold": rep.all_hold}
    if args.family == "fixtures":
        insts = [fx.instance() for fx in builtin_fixtures()]
    elif args.family:
        insts = generate_family(args.family)
    else:
        return {"fixtures": [fx.name for fx in builtin_fixtures()],
                "families": list(FAMILY_NAMES)}
    return {"instances": [instance_to_doc(inst) for inst in insts]}


def _build_parser() -> argparse.ArgumentParser:
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--json", action="store_true",
                        help="emit JSON instead of indented text")
    output.add_argument("--out", help="write the report to this file")
    reader = argparse.ArgumentParser(add_help=False, parents=[output])
    reader.add_argument("--input", required=True, help="input JSON document")

    parser = argparse.ArgumentParser(
        prog="toricfib",
        description="exact invariants of toric pairs and contractions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[reader],
                       help="check a document and the fan axioms")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("classify", parents=[reader],
                       help="simplicial / smooth / complete flags of a fan")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("mld", parents=[reader],
                       help="minimal log discrepancy and eps-lc verdict")
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    p.set_defaults(handler=cmd_mld)

    p = sub.add_parser("lct", parents=[reader],
                       help="lc threshold over a divisorial direction of the base")
    p.add_argument("--direction", type=_vector, required=True,
                   help="target lattice vector, comma-separated")
    p.set_defaults(handler=cmd_lct)

    p = sub.add_parser("adjunction", parents=[reader],
                       help="discriminant and moduli data over the base")
    p.set_defaults(handler=cmd_adjunction)

    p = sub.add_parser("base-inf", parents=[reader],
                       help="infimum of lc thresholds over all base directions")
    p.add_argument("--box", type=int, default=4)
    p.set_defaults(handler=cmd_base_inf)

    p = sub.add_parser("fiber", parents=[reader],
                       help="general fiber data, or multiplicities over a direction")
    p.add_argument("--direction", type=_vector, default=None)
    p.set_defaults(handler=cmd_fiber)

    p = sub.add_parser("mfs-check", parents=[reader],
                       help="Fano contraction and Mori fiber space verdicts")
    p.set_defaults(handler=cmd_mfs_check)

    p = sub.add_parser("cover", parents=[reader],
                       help="finite cover splitting off a projective-space fiber")
    p.set_defaults(handler=cmd_cover)

    p = sub.add_parser("quotient", parents=[reader],
                       help="quotient of a fan by a finite-index sublattice")
    p.set_defaults(handler=cmd_quotient)

    p = sub.add_parser("subdivide", parents=[reader],
                       help="star subdivision, transporting a pair crepantly")
    p.add_argument("--at", type=_vector, required=True,
                   help="primitive lattice point, comma-separated")
    p.set_defaults(handler=cmd_subdivide)

    p = sub.add_parser("catalog", parents=[output],
                       help="list or emit built-in instances, or run an experiment")
    p.add_argument("--family", help="one family name, or 'fixtures'")
    p.add_argument("--experiment",
                   choices=("multiplicity", "delta", "monotonicity"))
    p.add_argument("--epsilon", type=Fraction, default=Fraction(1))
    p.add_argument("--alpha", type=Fraction, default=Fraction(1, 2))
    p.add_argument("--box", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload = args.handler(args)
        _emit(args, payload)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
