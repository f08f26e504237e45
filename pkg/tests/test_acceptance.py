"""End-to-end acceptance checks for the whole library.

Each test covers one headline guarantee, runs it at full scale, and prints
a single machine-readable verdict line (capture is suspended around the
print, so the line always reaches the real stdout).  Every comparison is
exact rational arithmetic; the only tolerances are the wall-clock budgets.
"""

import time
from fractions import Fraction

from toricfib import (
    BoundaryData,
    Sublattice,
    average_boundary,
    base_lct_infimum,
    build_pair,
    contraction_suite,
    crepant_pullback_pair,
    crepant_transfer,
    discriminant_divisor,
    fiber_multiplicities_over,
    fixture,
    has_terminal_singularities,
    is_mori_fiber_space,
    lct_box_oracle,
    lct_over_direction,
    mld_and_eps_check,
    pr_cover,
    quotient_by_sublattice,
    star_subdivide,
    tower_consistency_check,
)
from toricfib.catalog import fan_p1, fan_p2
from toricfib.experiments import ExperimentConfig, run_monotonicity_experiment


def _check(name: str, limit: float, worker, capfd) -> None:
    """Run worker, then print one PASS/FAIL line and enforce the budget."""
    t0 = time.perf_counter()
    ok = False
    try:
        worker()
        ok = True
    finally:
        elapsed = time.perf_counter() - t0
        verdict = "PASS" if ok and elapsed < limit else "FAIL"
        with capfd.disabled():
            print(f"[{verdict}] {name}: {elapsed:.2f}s (budget {limit:g}s)",
                  flush=True)
    assert elapsed < limit, f"{name} took {elapsed:.2f}s, budget {limit:g}s"


def test_full_boundary_adjunction_descends_to_coefficient_one(capfd):
    def worker():
        suite = contraction_suite()
        assert len(suite) >= 20, f"suite has only {len(suite)} instances"
        assert {inst.pair.fan.rank for inst in suite} == {2, 3, 4}
        for inst in suite:
            fan = inst.pair.fan
            full = build_pair(fan, BoundaryData.full(fan))
            adj = discriminant_divisor(full, inst.contraction)
            assert all(c == 1 for c in adj.discriminant.coeffs), inst.name
            assert all(x == 0 for x in adj.moduli_class), inst.name

    _check("full boundary descends to discriminant one, trivial moduli",
           10, worker, capfd=capfd)


def test_ladder_closed_forms_hold_exactly(capfd):
    def worker():
        ladder = [inst for inst in contraction_suite()
                  if inst.name.startswith("ladder_k")]
        assert len(ladder) == 11
        for inst in ladder:
            k = int(inst.name.rsplit("k", 1)[1])
            fan, f = inst.pair.fan, inst.contraction
            zero = build_pair(fan, BoundaryData.zero(fan))
            mld = mld_and_eps_check(zero, 1).mld_toric
            assert mld == min(Fraction(1), Fraction(2, k)), (k, mld)
            assert fiber_multiplicities_over(f, (1,)) == [((k, 1), k)]
            disc = discriminant_divisor(inst.pair, f).discriminant
            at_one = disc.coeffs[disc.fan.rays.index((1,))]
            assert at_one == 1 - Fraction(1, k), (k, at_one)
            for alpha in (Fraction(1, 2), Fraction(1, 3)):
                avg = average_boundary(inst.pair.boundary, fan, alpha)
                res = base_lct_infimum(build_pair(fan, avg), f, box=4)
                assert res.exact and res.delta == alpha / k, (k, alpha, res)

    _check("ladder closed forms: mld, multiplicity, discriminant, delta",
           5, worker, capfd=capfd)


def test_threshold_face_algorithm_matches_box_enumeration(capfd):
    def worker():
        for inst in contraction_suite():
            f = inst.contraction
            for w in f.target.rays:
                exact = lct_over_direction(inst.pair, f, w)
                oracle = lct_box_oracle(inst.pair, f, w, box=12)
                assert oracle == exact.t, (inst.name, w)
            if f.target.rays:
                assert base_lct_infimum(inst.pair, f, box=12).exact, inst.name
        fx = fixture("x2xp1_to_p1xp1")
        r = lct_over_direction(fx.pair, fx.contraction, (1, 1))
        assert r.t == Fraction(3, 2), r
        d = base_lct_infimum(fx.pair, fx.contraction, box=12)
        assert d.exact and d.delta == Fraction(1, 2), d

    _check("threshold search agrees with box-12 enumeration everywhere",
           60, worker, capfd=capfd)


def test_projective_space_cover_and_branched_pullback(capfd):
    def worker():
        fx = fixture("p112xp1")
        _, report = pr_cover(fx.contraction, fx.pair)
        assert report.relation == (1, 2, 1), report.relation
        assert report.degree == 2, report.degree
        assert report.fiber_is_projective_space
        p1 = fan_p1()
        pulled = crepant_pullback_pair(
            build_pair(p1, BoundaryData.zero(p1)),
            quotient_by_sublattice(p1, Sublattice(1, [(2,)])))
        assert tuple(sorted(pulled.boundary.ray_coeffs)) == (-1, -1)

    _check("fiber cover has relation (1,2,1), degree 2; double cover of the "
           "line ramifies to coefficient -1", 1, worker, capfd=capfd)


def test_star_subdivision_discrepancy_and_averaging(capfd):
    def worker():
        refined = star_subdivide(fan_p2(), (1, 1))
        base = build_pair(fan_p2(), BoundaryData.zero(fan_p2()))
        moved = crepant_transfer(base, refined)
        idx = refined.rays.index((1, 1))
        assert moved.boundary.ray_coeffs[idx] == -1
        averaged = average_boundary(moved.boundary, refined, Fraction(1, 2))
        assert averaged.ray_coeffs[idx] == 0

    _check("exceptional coefficient is 1-2 and averages to exactly zero",
           1, worker, capfd=capfd)


def test_two_step_tower_adjunction_is_consistent(capfd):
    def worker():
        g = fixture("x2xp1_to_x2").contraction
        h = fixture("x2").contraction
        fan = fixture("x2xp1_to_x2").pair.fan
        boundaries = (BoundaryData.zero(fan),
                      BoundaryData(tuple(Fraction(2, 3) for _ in fan.rays)))
        for boundary in boundaries:
            report = tower_consistency_check(build_pair(fan, boundary), g, h)
            assert report.consistent, report

    _check("thresholds through a two-step tower match the composite",
           5, worker, capfd=capfd)


def test_terminal_threefold_fiber_multiplicities_are_bounded(capfd):
    def worker():
        picked = []
        for inst in contraction_suite():
            if inst.pair.fan.rank != 3 or inst.contraction.target.rank != 1:
                continue
            if not has_terminal_singularities(inst.pair.fan):
                continue
            if not is_mori_fiber_space(inst.pair, inst.contraction):
                continue
            mults = [m for w in inst.contraction.target.rays
                     for _, m in fiber_multiplicities_over(inst.contraction, w)]
            picked.append((inst.name, max(mults)))
        assert picked, "no terminal threefold fibrations over a curve found"
        worst = max(m for _, m in picked)
        assert worst <= 6, picked

    _check("terminal threefold fibrations over curves stay within "
           "multiplicity 6", 60, worker, capfd=capfd)


def test_randomized_monotonicity_and_moduli_scaling(capfd):
    def worker():
        report = run_monotonicity_experiment(ExperimentConfig(seed=0), count=200)
        assert len(report.rows) == 200
        assert report.all_hold

    _check("200 random scalings keep thresholds monotone and moduli "
           "proportional", 120, worker, capfd=capfd)
