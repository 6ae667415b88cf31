from fractions import Fraction

import pytest

from conftest import make_rng, random_glzp, random_iwahori, random_upper_zp
from padicref.padiclin import PadicMatrix, vp
from padicref.perms import all_perms, identity_perm, longest_perm
from padicref.princhecke import PSVector
from padicref.refine import (Refinement, SatakeParameter, hecke_eigenvalue,
                             is_spin, normalize_satake, tau_element)
from padicref.shalikazeta import (ComparisonMismatch, TruncationError,
                                  TwistCharacter, ZetaError, ag_intertwine_value,
                                  borel_part_character, chi_det_minus_wn,
                                  comparison_constant, ep_factor, gauss_sum,
                                  psi_orthogonality, qprime_factor,
                                  shalika_argument, shalika_support_bruhat,
                                  shalika_support_predicate, w_value_closed,
                                  z_matrix, zeta_iwahori_closed,
                                  zeta_iwahori_oracle, zeta_parahoric_closed,
                                  zeta_parahoric_oracle, zeta_parahoric_reciprocal)
from padicref.symring import CycNum, SymElem
from padicref.rootspin import GLWeight


class TestCharacters:
    def test_enumeration_counts(self):
        assert len(TwistCharacter.enumerate_conductor(3, 1)) == 1
        assert len(TwistCharacter.enumerate_conductor(3, 2)) == 4
        assert TwistCharacter.enumerate_conductor(2, 1) == []
        assert len(TwistCharacter.enumerate_conductor(2, 2)) == 1
        assert len(TwistCharacter.enumerate_conductor(5, 1)) == 3

    def test_multiplicativity(self):
        for chi in TwistCharacter.enumerate_conductor(3, 2):
            m = 9
            for a in range(1, m):
                if a % 3 == 0:
                    continue
                for b in range(1, m):
                    if b % 3 == 0:
                        continue
                    assert chi.of_unit(a) * chi.of_unit(b) == chi.of_unit(a * b % m)

    def test_chi_of_p_is_one(self):
        chi = TwistCharacter.enumerate_conductor(3, 1)[0]
        assert chi.of(Fraction(3)) == chi.of_unit(1)
        assert chi.of(Fraction(2, 3)) == chi.of_unit(2)


class TestGaussSums:
    def test_quadratic_mod_three(self):
        chi = TwistCharacter.enumerate_conductor(3, 1)[0]
        z = CycNum.root_of_unity(3)
        assert gauss_sum(chi) == z - z ** 2

    def test_mod_four(self):
        chi = TwistCharacter.enumerate_conductor(2, 2)[0]
        z = CycNum.root_of_unity(4)
        assert chi.of_unit(3) == -1
        assert gauss_sum(chi) == z - z ** 3

    def test_magnitude(self):
        # tau(chi) tau(chibar) = chi(-1) p^beta
        for p, beta in ((3, 1), (3, 2), (2, 2), (5, 1)):
            for chi in TwistCharacter.enumerate_conductor(p, beta):
                assert gauss_sum(chi) * gauss_sum(chi.conjugate()) \
                    == chi.of_unit(-1 % p ** beta) * CycNum.from_rational(p ** beta)

    def test_trivial_character_has_no_gauss_sum(self):
        with pytest.raises(ZetaError):
            gauss_sum(TwistCharacter.trivial(3))

    def test_psi_orthogonality(self):
        for p, beta in ((3, 1), (3, 2), (2, 2)):
            for m in range(1, p ** beta + 1):
                assert psi_orthogonality(p, beta, m)


class TestCellSupport:
    def test_positive_example(self):
        # k the longest element, k^{-1} X in w_n z^{2 beta} M_n(Z_p)
        p, n, beta = 3, 2, 1
        wn = PadicMatrix.longest_weyl(p, n)
        k = wn
        x = k * wn * z_matrix(p, n, 2 * beta) * PadicMatrix(p, [[1, 2], [0, 4]])
        assert shalika_support_predicate(longest_perm(n), k, x, beta)
        assert shalika_support_bruhat(longest_perm(n), k, x, beta)

    def test_wrong_weyl_element_fails(self):
        p, n, beta = 3, 2, 1
        rng = make_rng("support-delta")
        for _ in range(40):
            k = random_glzp(rng, p, n)
            x = PadicMatrix(p, [[rng.padic_rational(p, -2, 2) for _ in range(n)]
                                for _ in range(n)])
            assert not shalika_support_predicate(identity_perm(n), k, x, beta)
            assert not shalika_support_bruhat(identity_perm(n), k, x, beta)

    def test_off_cell_k_fails(self):
        p, n, beta = 3, 2, 1
        k = PadicMatrix.identity(p, n)  # identity cell, not the big one
        x = PadicMatrix.longest_weyl(p, n) * z_matrix(p, n, 2 * beta)
        assert not shalika_support_predicate(longest_perm(n), k, x, beta)
        assert not shalika_support_bruhat(longest_perm(n), k, x, beta)

    def test_predicate_matches_cell_membership(self):
        rng = make_rng("support-samples")
        for p in (2, 3):
            for n in (1, 2):
                for beta in (1, 2):
                    for _ in range(60):
                        delta = rng.choice(all_perms(n))
                        k = random_glzp(rng, p, n)
                        x = PadicMatrix(p, [[rng.padic_rational(p, -2, 2)
                                             if rng.randrange(3) else 0
                                             for _ in range(n)] for _ in range(n)])
                        assert shalika_support_predicate(delta, k, x, beta) \
                            == shalika_support_bruhat(delta, k, x, beta)

    def test_borel_character_value(self):
        rng = make_rng("support-borel")
        p, n = 3, 2
        thetas = [SymElem.gen(p, f"X{i + 1}") for i in range(2 * n)]
        wn = PadicMatrix.longest_weyl(p, n)
        for beta in (1, 2):
            expected = SymElem.rational(p, 1)
            zv = z_matrix(p, n, 2 * beta).diagonal_valuations()
            for i in range(n):
                expected = expected * thetas[n + i] ** int(zv[i])
            for _ in range(40):
                k = random_upper_zp(rng, p, n) * wn * random_iwahori(rng, p, n)
                x = k * wn * z_matrix(p, n, 2 * beta) \
                    * PadicMatrix(p, [[rng.randrange(27) for _ in range(n)]
                                      for _ in range(n)])
                assert borel_part_character(thetas, k, x, beta) == expected

    def test_trivial_character_gives_one(self):
        p, n, beta = 3, 2, 1
        ones = [SymElem.rational(p, 1)] * (2 * n)
        wn = PadicMatrix.longest_weyl(p, n)
        x = wn * z_matrix(p, n, 2 * beta)
        assert borel_part_character(ones, wn, wn * x, beta).is_one()

    def test_borel_character_rejects_off_cell(self):
        p, n, beta = 3, 2, 1
        thetas = [SymElem.gen(p, f"X{i + 1}") for i in range(2 * n)]
        with pytest.raises(ZetaError):
            borel_part_character(thetas, PadicMatrix.identity(p, n),
                                 PadicMatrix.identity(p, n), beta)


class TestIntertwiningOracle:
    def test_normalisation_at_identity(self):
        for p in (2, 3):
            sat = SatakeParameter.generic(p, 1)
            f = PSVector.big_cell_vector(sat, tau_element(1))
            assert ag_intertwine_value(f, PadicMatrix.identity(p, 2), 4).is_one()

    def test_support_lemma(self):
        sat = SatakeParameter.generic(3, 1)
        f = PSVector.big_cell_vector(sat, tau_element(1))
        g = PadicMatrix.diagonal(3, [Fraction(1, 3), 1])
        assert ag_intertwine_value(f, g, 4).is_zero()

    def test_shalika_equivariance(self):
        rng = make_rng("ag-equivariance")
        p = 3
        sat = SatakeParameter.generic(p, 1)
        f = PSVector.big_cell_vector(sat, tau_element(1))
        g = PadicMatrix(p, [[2, 1], [3, 1]])
        base = ag_intertwine_value(f, g, 5)
        eta = SymElem.gen(p, "E")
        for _ in range(6):
            a = Fraction(rng.unit(p)) * Fraction(p) ** rng.randint(-1, 1)
            x = Fraction(rng.randrange(p ** 3)) - 1
            lhs = ag_intertwine_value(
                f, PadicMatrix.diagonal(p, [a, a])
                * PadicMatrix(p, [[1, x], [0, 1]]) * g, 5)
            den = x.denominator
            psi = SymElem.from_cyc(p, CycNum.root_of_unity(den, x.numerator % den)) \
                if den > 1 else SymElem.rational(p, 1)
            assert lhs == eta ** int(vp(a, p)) * psi * base

    def test_uncertified_truncation_raises(self):
        # the twisted argument at x of valuation -2 and depth 2 has its
        # X-support concentrated in the shell at -2: too few shells must
        # refuse rather than silently drop it
        sat = SatakeParameter.generic(3, 1)
        f = PSVector.big_cell_vector(sat, tau_element(1))
        g = PadicMatrix.diagonal(3, [Fraction(2, 9), 1]) \
            * PadicMatrix(3, [[1, -1], [0, 1]]) * PadicMatrix.diagonal(3, [9, 1])
        with pytest.raises(TruncationError):
            ag_intertwine_value(f, g, 2)
        value = ag_intertwine_value(f, g, 4)
        assert not value.is_zero()
        with pytest.raises(TruncationError):
            ag_intertwine_value(f, g, 1)


class TestWValue:
    def test_rank_one_collapses_to_one(self):
        for p in (2, 3):
            sat = SatakeParameter.generic(p, 1)
            for beta in (1, 2, 3):
                assert w_value_closed(sat, beta, 1).is_one()

    def test_n2_nonzero_unit_monomial(self):
        sat = SatakeParameter.generic(3, 2)
        val = w_value_closed(sat, 1, 2)
        mono = val.as_monomial()
        assert mono is not None and not mono[0].is_zero()

    def test_beta_scaling_log_linear(self):
        sat = SatakeParameter.generic(3, 2)
        v1, v2, v3 = (w_value_closed(sat, b, 2) for b in (1, 2, 3))
        assert v2 * v2 == v1 * v3

    def test_rejects_unnormalized(self):
        # swapping only the first two Satake values breaks the pairing
        sat = SatakeParameter.generic(3, 2)
        bad = sat.conjugate_by((1, 0, 2, 3))
        assert not bad.ag
        with pytest.raises(ZetaError):
            w_value_closed(bad, 1, 2)

    def test_matches_intertwining_oracle_at_rank_one(self):
        sat = SatakeParameter.generic(3, 1)
        f = PSVector.big_cell_vector(sat, tau_element(1))
        point = PadicMatrix.identity(3, 2)  # w_1 z^{2 beta} = 1 at n = 1
        assert ag_intertwine_value(f, point, 4) == w_value_closed(sat, 1, 1)


class TestZetaClosedForms:
    def test_iwahori_hand_formula(self):
        # n=1, p=3, beta=1, quadratic chi, w_base = 1
        p = 3
        chi = TwistCharacter.enumerate_conductor(p, 1)[0]
        sat = SatakeParameter.generic(p, 1)
        res = zeta_iwahori_closed(SymElem.rational(p, 1), chi, 1, 1, sat.eta)
        expected = SymElem.rational(p, Fraction(1, 1 - Fraction(1, 3))) \
            * Fraction(1, 3) * SymElem.gen(p, "S") * SymElem.gen(p, "Y") ** -1 \
            * SymElem.from_cyc(p, gauss_sum(chi) * chi.of_unit(2))
        assert res.value == expected

    def test_iwahori_scales_linearly(self):
        p = 3
        chi = TwistCharacter.enumerate_conductor(p, 1)[0]
        sat = SatakeParameter.generic(p, 1)
        w = SymElem.gen(p, "X1")
        assert zeta_iwahori_closed(w * 5, chi, 1, 1, sat.eta).value \
            == zeta_iwahori_closed(w, chi, 1, 1, sat.eta).value * 5

    def test_iwahori_needs_ramified(self):
        sat = SatakeParameter.generic(3, 1)
        with pytest.raises(ZetaError):
            zeta_iwahori_closed(SymElem.rational(3, 1),
                                TwistCharacter.trivial(3), 1, 1, sat.eta)

    def test_parahoric_rows(self):
        p = 3
        sat = SatakeParameter.generic(p, 1)
        s = SymElem.gen(p, "S")
        theta2 = sat.theta[1]
        # unramified row
        res = zeta_parahoric_closed(sat, TwistCharacter.trivial(p), 0)
        from padicref.symring import geometric_tail
        q = SymElem.rational(p, Fraction(1, 1 - p))
        q = geometric_tail(q * (1 - theta2 * s ** -1 * p), theta2 * s ** -1)
        expected = s * SymElem.gen(p, "Y") ** -1 * q
        assert res.value == expected
        # ramified row
        chi = TwistCharacter.enumerate_conductor(p, 1)[0]
        res = zeta_parahoric_closed(sat, chi, 1)
        q = SymElem.rational(p, Fraction(1, p) * Fraction(p, p - 1)) \
            * SymElem.from_cyc(p, gauss_sum(chi))
        expected = s * SymElem.gen(p, "Y") ** -1 \
            * SymElem.from_cyc(p, chi.of_unit(-1 % p)) * q
        assert res.value == expected

    def test_parahoric_reciprocal(self):
        sat = SatakeParameter.generic(3, 1)
        for chi in [TwistCharacter.trivial(3)] \
                + TwistCharacter.enumerate_conductor(3, 1):
            recip = zeta_parahoric_reciprocal(sat, chi, chi.beta)
            assert recip * zeta_parahoric_closed(sat, chi, chi.beta).value \
                == SymElem.rational(3, 1)


class TestZetaOracles:
    def test_iwahori_oracle_matches_closed(self):
        # the central cross-check, smallest configuration
        p = 3
        sat = SatakeParameter.generic(p, 1)
        f = PSVector.big_cell_vector(sat, tau_element(1))
        chi = TwistCharacter.enumerate_conductor(p, 1)[0]
        oracle = zeta_iwahori_oracle(f, chi, 1, 4)
        closed = zeta_iwahori_closed(w_value_closed(sat, 1, 1), chi, 1, 1, sat.eta)
        assert oracle.value == closed.value
        assert oracle.provenance == "oracle"

    def test_iwahori_oracle_conjugate_symmetry(self):
        p = 3
        sat = SatakeParameter.generic(p, 1)
        f = PSVector.big_cell_vector(sat, tau_element(1))
        chi = TwistCharacter.enumerate_conductor(p, 2)[0]
        v1 = zeta_iwahori_oracle(f, chi, 2, 4).value
        v2 = zeta_iwahori_oracle(f, chi.conjugate(), 2, 4).value
        # conjugating the twist conjugates the cyclotomic part: both are
        # monomial multiples of Gauss sums over the same support
        g1 = zeta_iwahori_closed(w_value_closed(sat, 2, 1), chi, 2, 1, sat.eta)
        g2 = zeta_iwahori_closed(w_value_closed(sat, 2, 1), chi.conjugate(),
                                 2, 1, sat.eta)
        assert v1 == g1.value and v2 == g2.value

    def test_zero_vector(self):
        p = 3
        sat = SatakeParameter.generic(p, 1)
        zero = PSVector(sat, tau_element(1), {})
        chi = TwistCharacter.enumerate_conductor(p, 1)[0]
        assert zeta_iwahori_oracle(zero, chi, 1, 4).value.is_zero()

    def test_parahoric_oracle_both_rows(self):
        for p in (2, 3):
            sat = SatakeParameter.generic(p, 1)
            chars = [TwistCharacter.trivial(p)]
            for beta in (1, 2):
                chars += TwistCharacter.enumerate_conductor(p, beta)
            for chi in chars:
                oracle = zeta_parahoric_oracle(sat, chi, 3)
                closed = zeta_parahoric_closed(sat, chi, chi.beta)
                assert oracle.value == closed.value


class TestInterpolationFactors:
    def test_ramified_over_qprime(self):
        for n in (1, 2):
            sat = SatakeParameter.generic(3, n)
            ref = Refinement(sat, tau_element(n))
            for beta in (1, 2):
                for chi in TwistCharacter.enumerate_conductor(3, beta):
                    for j in (-1, 0, 2):
                        ratio = ep_factor(sat, chi, j) / qprime_factor(chi, j, beta, n)
                        assert ratio == hecke_eigenvalue(ref, n) ** (-beta)

    def test_qprime_needs_ramified(self):
        with pytest.raises(ZetaError):
            qprime_factor(TwistCharacter.trivial(3), 0, 1, 1)

    def test_unramified_unit_relation(self):
        # e_p(1, j) equals the parahoric Q at s = j + 1/2 up to the unit
        # monomial prod(-p^(j-1/2)/theta_i) times (1-q)^n
        for n in (1, 2):
            p = 3
            sat = SatakeParameter.generic(p, n)
            triv = TwistCharacter.trivial(p)
            for j in (-1, 0, 1):
                sval = SymElem.p_power(p, Fraction(2 * j + 1, 2))
                ep = ep_factor(sat, triv, j)
                closed = zeta_parahoric_closed(sat, triv, 0).value.substitute({"S": sval})
                prefactor = sval ** n * SymElem.p_power(p, Fraction(-n * n, 2))
                unit = SymElem.rational(p, Fraction(1 - p) ** n)
                for i in range(n, 2 * n):
                    unit = unit * (SymElem.p_power(p, Fraction(2 * j - 1, 2))
                                   * sat.theta[i].inverse() * (-1))
                assert ep * prefactor == closed * unit


class TestComparison:
    def test_single_pair_trivially_constant(self):
        sat = SatakeParameter.generic(3, 1)
        chi = TwistCharacter.enumerate_conductor(3, 1)[0]
        ratio = comparison_constant(sat, GLWeight([1, 0]), [(chi, 0)])
        assert not ratio.is_zero()

    def test_rank_one_ratio_is_formal_unit(self):
        # the local volume factors collapse: the ratio is exactly the
        # formal Iwahori-route unit
        sat = SatakeParameter.generic(3, 1)
        chi = TwistCharacter.enumerate_conductor(3, 1)[0]
        ratio = comparison_constant(sat, GLWeight([1, 0]),
                                    [(chi, 0), (chi, -1)])
        assert ratio == SymElem.gen(3, "UB")

    def test_constancy_across_conductors(self):
        sat = SatakeParameter.generic(3, 1)
        chis = TwistCharacter.enumerate_conductor(3, 1) \
            + TwistCharacter.enumerate_conductor(3, 2)
        pairs = [(chi, j) for chi in chis for j in (0, -1)]
        ratio = comparison_constant(sat, GLWeight([1, 0]), pairs)
        assert ratio == SymElem.gen(3, "UB")

    def test_n2_symbolic(self):
        sat = SatakeParameter.generic(3, 2)
        chi = TwistCharacter.enumerate_conductor(3, 1)[0]
        lam = GLWeight([2, 1, -1, -2])
        ratio = comparison_constant(sat, lam, [(chi, j) for j in (-1, 0, 1)])
        assert ratio == SymElem.gen(3, "UB") * Fraction(9, 16)

    def test_trivial_route_constancy(self):
        for n in (1, 2):
            sat = SatakeParameter.generic(3, n)
            lam = GLWeight([1, 0]) if n == 1 else GLWeight([2, 1, -1, -2])
            triv = TwistCharacter.trivial(3)
            comparison_constant(sat, lam, [(triv, j) for j in (-1, 0, 1)])

    def test_mismatch_is_reported(self):
        # a deliberately inconsistent suite: compare a ramified pair against
        # a hand-corrupted one by mixing routes through different weights
        sat = SatakeParameter.generic(3, 1)
        chi = TwistCharacter.enumerate_conductor(3, 1)[0]
        triv = TwistCharacter.trivial(3)
        with pytest.raises(ComparisonMismatch):
            comparison_constant(sat, GLWeight([1, 0]), [(chi, 0), (triv, 0)])
