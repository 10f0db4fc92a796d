import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from supereinstein import einstein
from supereinstein.einstein import (
    build_system,
    cubic_factor,
    cubic_reference_coefficients,
    default_folding,
    elimination_polynomial,
    known_solutions,
    lift_real_form,
    real_roots,
    solve,
    solve_family,
    square_free_part,
    system_residual,
    verify_solution,
)
from supereinstein.families import family_data, family_spec, realize

F = Fraction


def sys_for(fam, m=None, n=None, alpha=None):
    return build_system(family_data(family_spec(fam, m, n, alpha)))


def match_sets(solutions, expected, tol):
    """Each expected (x..., c) tuple matches exactly one solution."""
    assert len(solutions) == len(expected)
    remaining = list(solutions)
    for exp in expected:
        hit = None
        for s in remaining:
            vals = tuple(s.x) + (s.c,)
            if max(abs(a - b) for a, b in zip(vals, exp)) < tol:
                hit = s
                break
        assert hit is not None, f"no solution matches {exp}"
        remaining.remove(hit)


class TestBuildSystem:
    def test_g3_coefficients(self):
        sys = sys_for("G3")
        assert sys.l == (F(1, 2), F(7, 4))
        assert sys.b == (F(1, 2), F(-3, 4))
        assert sys.gamma == (F(1), F(-1, 2))
        assert sys.trace_rhs == 1 and not sys.has_k0

    def test_d21a_coefficients(self):
        sys = sys_for("D21a", alpha=2.5)
        assert sys.b == (F(1), F(1), F(-1, 2))
        assert sys.gamma == (F(3, 8), F(3, 8), F(-3, 4))
        assert sys.trace_rhs == 0

    def test_cn_has_abelian_equation(self):
        sys = sys_for("C", n=3)
        assert sys.has_k0 and sys.gamma0 == F(-1, 8)
        assert sys.trace_rhs == 1

    def test_form_kind_consistency(self):
        with pytest.raises(ValueError):
            build_system(family_data(family_spec("A", 1, 1)), "killing")
        with pytest.raises(ValueError):
            build_system(family_data(family_spec("B", 1, 1)), "case2")

    def test_unit_solution_exact_for_canonical_form(self):
        for fam, m, n in [("A", 2, 1), ("B", 1, 1), ("C", None, 3),
                          ("D", 3, 1), ("F4", None, None), ("G3", None, None)]:
            sys = sys_for(fam, m, n)
            ones = tuple([1.0] * sys.n_params)
            assert system_residual(sys, ones, -0.25) < 1e-15


class TestSolveRegression:
    def test_a21_unique(self):
        match_sets(solve(sys_for("A", 2, 1)), [(1, 1, 1, -0.25)], 1e-10)

    def test_ann_two_signed_solutions(self):
        for n in (1, 2):
            match_sets(solve(sys_for("A", n, n)),
                       [(1, 1, 0), (-1, -1, 0)], 1e-10)

    def test_c3_pair(self):
        match_sets(solve(sys_for("C", n=3)),
                   [(1, 1, -0.25), (11 / 21, 9 / 7, -11 / 84)], 1e-10)

    def test_d32_four(self):
        den = math.sqrt(13.0)
        x1, x2 = 2 * math.sqrt(2) / den, 3 * math.sqrt(2) / den
        c = -5 * math.sqrt(2) / (16 * den)
        match_sets(solve(sys_for("D", 3, 2)),
                   [(1, 1, 0), (-1, -1, 0), (x1, x2, c), (-x1, -x2, -c)], 1e-9)

    def test_d21a_four(self):
        r = math.sqrt(0.4)
        c = -3 / 8 * r
        match_sets(solve(sys_for("D21a", alpha=2.5)),
                   [(1, 1, 1, 0), (-1, -1, -1, 0),
                    (r, r, 2 * r, c), (-r, -r, -2 * r, -c)], 1e-10)

    def test_f4_unique(self):
        match_sets(solve(sys_for("F4")), [(1, 1, -0.25)], 1e-10)

    def test_g3_two_with_printed_digits(self):
        sols = solve(sys_for("G3"))
        assert len(sols) == 2
        match_sets([sols[1]], [(1, 1, -0.25)], 1e-10)
        second = sols[0]
        # four printed digits; the catalogued constant carries them with
        # the sign forced by the trace equation
        assert abs(second.x[0] - 1.1760) < 2e-4
        assert abs(second.x[1] - 0.8767) < 2e-4
        assert abs(abs(second.c) - 0.1312) < 2e-4
        assert second.residual < 1e-10

    def test_deterministic(self):
        a = solve(sys_for("B", 2, 1))
        b = solve(sys_for("B", 2, 1))
        assert [(s.x, s.c) for s in a] == [(s.x, s.c) for s in b]

    def test_sign_symmetry_of_degenerate_killing_families(self):
        for fam, m, n, alpha in [("A", 1, 1, None), ("D", 3, 2, None),
                                 ("D21a", None, None, 2.5)]:
            sols = solve(sys_for(fam, m, n, alpha))
            keys = {tuple(round(v, 8) for v in s.x) + (round(s.c, 8),)
                    for s in sols}
            mirrored = {tuple(-v for v in k) for k in keys}
            assert keys == mirrored

    def test_ricci_flat_and_non_flat_coexist(self):
        for fam, m, n, alpha in [("D", 3, 2, None), ("D21a", None, None, 1.0)]:
            sols = solve(sys_for(fam, m, n, alpha))
            assert any(abs(s.c) < 1e-12 for s in sols)
            assert any(abs(s.c) > 1e-6 for s in sols)

    def test_contains_known_solutions(self):
        for fam, m, n, alpha in [("A", 2, 1, None), ("A", 1, 1, None),
                                 ("B", 2, 1, None), ("C", None, 3, None),
                                 ("D", 3, 2, None), ("D21a", None, None, 2.5),
                                 ("F4", None, None, None), ("G3", None, None, None)]:
            spec = family_spec(fam, m, n, alpha)
            sols = solve_family(spec, verify=False)
            for ks in known_solutions(spec):
                tol = 1e-8 if ks.residual < 1e-8 else 2e-4
                assert any(
                    max(abs(a - b) for a, b in zip(s.x + (s.c,), ks.x + (ks.c,))) < tol
                    for s in sols), (spec.name, ks)


class TestElimination:
    def test_d31_reference_coefficients(self):
        cubic = cubic_factor(elimination_polynomial(sys_for("D", 3, 1)))
        assert tuple(cubic) == (F(36), F(-48), F(48), F(-24))

    def test_unit_root_always_present(self):
        for fam, m, n in [("B", 1, 1), ("B", 3, 2), ("D", 2, 2), ("D", 4, 1)]:
            cubic_factor(elimination_polynomial(sys_for(fam, m, n)))  # raises if 1 is not a root

    def test_wrong_shape_rejected(self):
        with pytest.raises(ValueError):
            elimination_polynomial(sys_for("C", n=3))  # abelian block present
        with pytest.raises(ValueError):
            elimination_polynomial(sys_for("A", 1, 1))  # not the canonical form
        with pytest.raises(ValueError):
            elimination_polynomial(sys_for("B", 0, 2))  # single ideal

    @pytest.mark.parametrize("fam,m,n", [("B", 1, 1), ("B", 2, 1), ("B", 3, 2),
                                         ("D", 2, 2), ("D", 3, 1), ("D", 4, 2)])
    def test_matches_independent_resultant(self, fam, m, n):
        sys = sys_for(fam, m, n)
        quartic = elimination_polynomial(sys)
        x = sp.symbols("x")
        l1, l2 = (sp.Rational(v) for v in sys.l)
        b1, b2 = (sp.Rational(v) for v in sys.b)
        g1, g2 = (sp.Rational(v) for v in sys.gamma)
        c = (l1 * x**2 - 1) / (4 * b1 * x)
        x2 = (2 * c + sp.Rational(sys.trace_rhs) - g1 * x) / g2
        expr = sp.Rational(1, 4) * (l2 * x2**2 - 1) - c * b2 * x2
        coeffs = sp.Poly(sp.expand(sp.numer(sp.together(expr))), x).all_coeffs()
        coeffs = [sp.Rational(0)] * (5 - len(coeffs)) + coeffs
        ratios = {sp.Rational(str(a)) / b for a, b in zip(quartic, coeffs) if b != 0}
        assert len(ratios) == 1
        assert all((a == 0) == (b == 0) for a, b in zip(quartic, coeffs))

    @pytest.mark.parametrize("fam,m,n", [("B", 1, 1), ("B", 2, 2), ("D", 3, 1),
                                         ("D", 2, 2)])
    def test_reference_formulas_match_resultant(self, fam, m, n):
        sys = sys_for(fam, m, n)
        cubic = tuple(cubic_factor(elimination_polynomial(sys)))
        assert cubic == cubic_reference_coefficients(sys.data)

    @pytest.mark.parametrize("fam,m,n", [("B", 1, 1), ("B", 2, 1), ("D", 2, 2),
                                         ("D", 3, 1)])
    def test_root_solution_bijection(self, fam, m, n):
        sys = sys_for(fam, m, n)
        roots = [r for r in real_roots(elimination_polynomial(sys))
                 if abs(r) > 1e-9]
        xs = sorted({s.x[0] for s in solve(sys)})
        assert len(roots) == len(xs)
        assert all(abs(a - b) < 1e-8 for a, b in zip(sorted(roots), xs))

    def test_pivot_two_tracks_second_variable(self):
        sys = sys_for("B", 2, 1)
        roots = [r for r in real_roots(elimination_polynomial(sys, pivot=2))
                 if abs(r) > 1e-9]
        xs = sorted({s.x[1] for s in solve(sys)})
        assert all(any(abs(r - v) < 1e-8 for r in roots) for v in xs)

    def test_square_free_collapses_double_roots(self):
        # (x - 1)^2 (2x - 1)^2, up to scale
        quartic = elimination_polynomial(sys_for("D", 2, 2))
        sf = square_free_part(quartic)
        assert len(sf) == 3
        assert sorted(real_roots(quartic)) == pytest.approx([0.5, 1.0])


class TestKnownSolutions:
    def test_c3_closed_form(self):
        sols = known_solutions(family_spec("C", n=3))
        vals = {tuple(round(v, 12) for v in s.x + (s.c,)) for s in sols}
        assert tuple(round(v, 12) for v in (11 / 21, 9 / 7, -11 / 84)) in vals

    def test_d32_closed_form_count(self):
        sols = known_solutions(family_spec("D", 3, 2))
        assert len(sols) == 4
        assert all(s.provenance == "printed_catalog" for s in sols)

    def test_g3_four_digit_row(self):
        sols = known_solutions(family_spec("G3"))
        approx = [s for s in sols if s.residual > 1e-8]
        assert len(approx) == 1
        assert approx[0].x == (1.1760, 0.8767)


class TestFolding:
    def test_ann_solutions_fold(self):
        spec = family_spec("A", 1, 1)
        pairs = default_folding(spec)
        assert pairs == [(0, 1)]
        for s in solve_family(spec, verify=False):
            res = lift_real_form(s, pairs)
            assert res.liftable
            assert len(res.solution.x) == 1
            assert res.solution.provenance == "lifted"

    def test_d21a_root_two_fifths_folds(self):
        spec = family_spec("D21a", alpha=1.0)
        sols = solve_family(spec, verify=False)
        target = [s for s in sols if abs(abs(s.x[0]) - math.sqrt(0.4)) < 1e-9]
        assert len(target) == 2
        for s in target:
            res = lift_real_form(s, [(0, 1)])
            assert res.liftable and res.solution.x[1] == pytest.approx(2 * s.x[0])

    def test_unequal_pair_rejected(self):
        sol = einstein.EinsteinSolution((1.0, 2.0), 0.0, 0.0)
        res = lift_real_form(sol, [(0, 1)])
        assert not res.liftable and res.solution is None
        assert res.max_pair_gap == pytest.approx(1.0)

    def test_malformed_folding(self):
        sol = einstein.EinsteinSolution((1.0, 1.0, 1.0), 0.0, 0.0)
        with pytest.raises(ValueError):
            lift_real_form(sol, [(0, 0)])
        with pytest.raises(ValueError):
            lift_real_form(sol, [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            lift_real_form(sol, [(0, 5)])

    def test_dn1n_folds_trivially(self):
        spec = family_spec("D", 3, 2)
        assert default_folding(spec) == []
        for s in solve_family(spec, verify=False):
            assert lift_real_form(s, []).liftable


class TestVerifySolution:
    def test_all_solutions_verify_on_b11(self, osp32):
        for s in solve_family(family_spec("B", 1, 1), verify=True):
            assert s.ricci_verified == "verified"

    def test_unit_solution_verifies_everywhere_canonical(self):
        for fam, m, n in [("A", 1, 0), ("B", 1, 1), ("C", None, 3), ("D", 3, 1)]:
            real = realize(family_spec(fam, m, n))
            ones = tuple([1.0] * real.data.n_params)
            sol = einstein.EinsteinSolution(ones, -0.25, 0.0)
            assert verify_solution(real, sol).ricci_verified == "verified"

    def test_perturbed_solution_fails(self, osp32):
        good = solve_family(family_spec("B", 1, 1), verify=False)[0]
        bad = dataclasses.replace(good, x=(good.x[0] + 1e-3, good.x[1]))
        stamped = verify_solution(osp32, bad)
        assert stamped.ricci_verified == "failed"
        assert stamped.detail is not None


class TestSolverInternals:
    def test_branch_quadratic_never_vanishes(self):
        sys = sys_for("B", 2, 1)
        for s in solve(sys):
            assert min(abs(v) for v in s.x) > 1e-6

    def test_window_contains_catalog(self):
        # every solution across the small catalog fits well inside the
        # default window
        from supereinstein.families import catalog
        for spec in catalog(3, 2):
            for s in solve_family(spec, verify=False):
                assert abs(s.c) < 1.0

    def test_solutions_sorted(self):
        sols = solve(sys_for("D", 3, 2))
        keys = [(s.c,) + s.x for s in sols]
        assert keys == sorted(keys)
