import numpy as np
import pytest

from supereinstein import families, supercore
from supereinstein.supercore import (
    BilinearFormMatrix,
    DecompositionRange,
    DegeneracyError,
    LieSuperAlgebra,
    LinearOperator,
    SuperBasis,
    algebra_from_json,
    algebra_to_json,
    bracket,
    check_form,
    check_super_jacobi,
    check_super_jacobi_exact,
    dual_basis,
    killing_form,
    supertrace,
)

from conftest import expand_in_basis


def unit(n, i):
    v = np.zeros(n)
    v[i] = 1.0
    return v


def abelian_algebra(dim_even=2, dim_odd=0):
    parity = tuple([0] * dim_even + [1] * dim_odd)
    n = dim_even + dim_odd
    return LieSuperAlgebra(SuperBasis(parity), np.zeros((n, n, n)),
                          (DecompositionRange(0, dim_even, "abelian"),))


class TestSuperBasis:
    def test_counts(self):
        b = SuperBasis((0, 0, 1))
        assert (b.total_dim, b.dim_even, b.dim_odd) == (3, 2, 1)

    def test_even_before_odd_enforced(self):
        with pytest.raises(ValueError):
            SuperBasis((1, 0))


class TestBracket:
    def test_even_self_bracket_vanishes(self, sl21):
        alg = sl21.algebra
        for i in range(alg.dim_even):
            assert np.allclose(bracket(alg, unit(alg.dim, i), unit(alg.dim, i)), 0.0)

    def test_sl21_cartan_raising(self, sl21):
        # [h, e] = 2e for h = diag(1,-1,0), e = E_12, against the direct
        # matrix commutator expanded in the defining matrices
        alg = sl21.algebra
        lbl = alg.basis.labels
        i_h, i_e = lbl.index("k1:H0"), lbl.index("k1:E(0,1)")
        got = bracket(alg, unit(alg.dim, i_h), unit(alg.dim, i_e))
        h, e = sl21.matrices[i_h], sl21.matrices[i_e]
        coeffs = expand_in_basis(sl21.matrices, h @ e - e @ h)
        assert np.max(np.abs(got - coeffs)) < 1e-12
        assert got[i_e] == pytest.approx(2.0)

    def test_odd_self_bracket_nonzero(self, sl21):
        alg = sl21.algebra
        lbl = alg.basis.labels
        q = unit(alg.dim, lbl.index("odd:Y(0,0)")) + unit(alg.dim, lbl.index("odd:Z(0,0)"))
        assert np.max(np.abs(bracket(alg, q, q))) > 0.5

    def test_dimension_mismatch(self, sl21):
        with pytest.raises(ValueError):
            bracket(sl21.algebra, np.zeros(3), np.zeros(3))


class TestSupertrace:
    def test_identity_counts_parity(self):
        basis = SuperBasis((0, 0, 0, 1, 1))
        assert supertrace(LinearOperator(np.eye(5)), basis) == pytest.approx(3 - 2)

    def test_identity_on_defining_space(self):
        basis = SuperBasis((0, 0, 1))
        assert supertrace(LinearOperator(np.eye(3)), basis) == pytest.approx(1.0)

    def test_ad_h_squared_matches_killing(self, sl21):
        alg = sl21.algebra
        i_h = alg.basis.labels.index("k1:H0")
        ad_h = supercore.ad_matrix(alg, unit(alg.dim, i_h))
        val = supertrace(LinearOperator(ad_h @ ad_h), alg.basis)
        assert val == pytest.approx(4.0)
        # cross-check against 2(m-n) str(XY) on the defining matrices
        h = sl21.matrices[i_h]
        sgn = np.array([1.0, 1.0, -1.0])
        assert val == pytest.approx(2 * (1 - 0) * float(np.sum(sgn * np.diag(h @ h))))


class TestKillingForm:
    def test_psl22_killing_vanishes(self, psl22):
        k = killing_form(psl22.algebra)
        assert np.max(np.abs(k.gram)) < 1e-12
        assert k.nondegenerate is False

    def test_sl21_value(self, sl21):
        k = killing_form(sl21.algebra)
        i_h = sl21.algebra.basis.labels.index("k1:H0")
        assert k.gram[i_h, i_h] == pytest.approx(4.0)
        assert k.even and k.supersymmetric and k.bi_invariant and k.nondegenerate

    def test_restriction_ratio_b11(self, osp32):
        # K restricted to each ideal is (1 - l_i) times the ideal's Killing form
        from supereinstein.invariants import b_ratio
        k = killing_form(osp32.algebra)
        for ideal, l in zip(osp32.algebra.simple_ideals(), osp32.data.l):
            assert b_ratio(osp32.algebra, k, ideal) == pytest.approx(1 - float(l))


class TestJacobi:
    def test_constructors_satisfy_jacobi(self, sl21, psl22, osp32):
        for real in (sl21, psl22, osp32):
            assert check_super_jacobi(real.algebra).residual < 1e-12

    def test_exact_channel_identically_zero(self, sl21, psl22, osp32):
        for real in (sl21, psl22, osp32):
            assert check_super_jacobi_exact(real.algebra) == 0

    def test_abelian_residual_zero(self):
        assert check_super_jacobi(abelian_algebra()).residual == 0.0

    def test_perturbation_detected(self, sl21):
        alg = sl21.algebra
        c = np.array(alg.c)
        # perturb an even-even pair, keeping antisymmetry so the constructor
        # accepts the tensor
        i, j = 1, 2  # k1:H0, k1:E(0,1)
        k = 2
        c[i, j, k] += 1e-3
        c[j, i, k] -= 1e-3
        perturbed = LieSuperAlgebra(alg.basis, c, alg.decomposition)
        report = check_super_jacobi(perturbed)
        assert report.residual >= 1e-4
        assert {i, j} & set(report.worst_triple)


class TestCheckForm:
    def test_killing_flags_across_families(self):
        degenerate = {"A(1,1)", "D(3,2)", "D(2,1;1)"}
        for args in [(1, 0), (2, 1)]:
            real = families.build_sl_super(*args)
            rep = check_form(real.algebra, killing_form(real.algebra))
            assert rep.is_even and rep.is_supersymmetric and rep.is_bi_invariant
            assert rep.is_nondegenerate
        for l, k in [(3, 2), (2, 4), (6, 4), (4, 2)]:
            real = families.build_osp(l, k)
            rep = check_form(real.algebra, killing_form(real.algebra))
            assert rep.is_even and rep.is_supersymmetric and rep.is_bi_invariant
            assert rep.is_nondegenerate != (real.name in degenerate)

    def test_case2_form_on_psl22(self, psl22):
        rep = check_form(psl22.algebra, psl22.canonical_form)
        assert rep.is_bi_invariant and rep.is_nondegenerate

    def test_random_symmetric_form_not_invariant(self, sl21):
        rng = np.random.default_rng(7)
        n = sl21.algebra.dim
        m = rng.normal(size=(n, n))
        form = BilinearFormMatrix(m + m.T)
        assert not check_form(sl21.algebra, form).is_bi_invariant


class TestDualBasis:
    def test_orthonormal_is_self_dual(self):
        form = BilinearFormMatrix(np.eye(4))
        d = dual_basis(form, (0, 4))
        assert np.allclose(d, np.eye(4))

    def test_diagonal_scaling(self):
        form = BilinearFormMatrix(np.diag([2.0, 1.0]))
        d = dual_basis(form, (0, 1))
        assert d[0, 0] == pytest.approx(0.5)

    def test_osp32_ideal_round_trip(self, osp32):
        k = killing_form(osp32.algebra)
        ideal = osp32.algebra.simple_ideals()[0]
        d = dual_basis(k, ideal)
        prod = k.gram[ideal.start:ideal.stop, :] @ d
        assert np.max(np.abs(prod - np.eye(ideal.dim))) < 1e-12

    def test_degenerate_names_subspace(self, psl22):
        k = killing_form(psl22.algebra)
        with pytest.raises(DegeneracyError, match=r"\[0:3\)"):
            dual_basis(k, (0, 3))


class TestSerialization:
    def test_round_trip(self, osp32):
        doc = algebra_to_json(osp32.algebra)
        assert set(doc) == {"dim_even", "dim_odd", "parity", "c", "decomposition"}
        assert all(len(t) == 5 for t in doc["c"])
        back = algebra_from_json(doc)
        assert np.max(np.abs(back.c - osp32.algebra.c)) < 1e-14
        assert back.decomposition == osp32.algebra.decomposition

    def test_small_entries_omitted(self):
        alg = abelian_algebra(2, 2)
        assert algebra_to_json(alg)["c"] == []
