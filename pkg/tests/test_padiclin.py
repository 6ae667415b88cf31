from fractions import Fraction

import pytest

from conftest import (make_rng, random_glzp, random_iw_beta, random_iwahori,
                      random_lower_triangular_q, random_n_beta,
                      random_upper_triangular_q, random_upper_zp)
from padicref.padiclin import (INF, LinAlgError, PadicMatrix, bruhat_cell,
                               bruhat_cell_valuations, iwahori_bruhat_decompose,
                               iwahori_factorize_unit, open_cell_factorize,
                               opposite_parahoric_cell, ul_factorize,
                               vol_big_cell, vol_iwahori, vp)
from padicref.perms import all_perms, block_perm, compose, longest_perm


class TestValuation:
    def test_basic(self):
        assert vp(18, 3) == 2
        assert vp(Fraction(2, 27), 3) == -3
        assert vp(0, 3) is INF

    def test_unit_part(self):
        from padicref.padiclin import unit_part
        assert unit_part(Fraction(18, 5), 3) == Fraction(2, 5)


class TestBruhat:
    def test_longest_weyl_is_its_own_cell(self):
        g = PadicMatrix.longest_weyl(3, 4)
        dec = iwahori_bruhat_decompose(g)
        assert dec.w == longest_perm(4)
        assert dec.b == PadicMatrix.identity(3, 4)
        assert dec.i == PadicMatrix.identity(3, 4)

    def test_two_by_two_hand_check(self):
        # antidiag(1,1) * diag(p,1): cell is the transposition, torus (1, p)
        g = PadicMatrix(3, [[0, 1], [3, 0]])
        dec = iwahori_bruhat_decompose(g)
        assert dec.w == (1, 0)
        assert [vp(x, 3) for x in dec.b.diagonal_entries()] == [0, 1]

    def test_singular_input(self):
        with pytest.raises(LinAlgError):
            iwahori_bruhat_decompose(PadicMatrix(3, [[1, 1], [1, 1]]))

    def test_round_trip_sampling(self):
        # constructive sampling oracle: b * w * i recovers w
        rng = make_rng("bruhat-roundtrip")
        counts = {2: 8000, 4: 2000}
        for size, total in counts.items():
            perms = all_perms(size)
            for _ in range(total):
                p = 3 if rng.randrange(2) else 2
                w = rng.choice(perms)
                g = random_upper_triangular_q(rng, p, size) \
                    * PadicMatrix.permutation(p, w) * random_iwahori(rng, p, size)
                assert iwahori_bruhat_decompose(g).w == w

    def test_cell_constant_on_orbits(self):
        rng = make_rng("bruhat-orbits")
        for _ in range(60):
            p = 3
            w = rng.choice(all_perms(4))
            g = random_upper_triangular_q(rng, p, 4) \
                * PadicMatrix.permutation(p, w) * random_iwahori(rng, p, 4)
            left = random_upper_triangular_q(rng, p, 4)
            right = random_iwahori(rng, p, 4)
            assert bruhat_cell(left * g) == w
            assert bruhat_cell(g * right) == w

    def test_light_path_matches_full(self):
        rng = make_rng("bruhat-light")
        for _ in range(300):
            p = 2 if rng.randrange(2) else 3
            size = 2 if rng.randrange(3) else 4
            rows = [[rng.padic_rational(p, -2, 2) if rng.randrange(4) else 0
                     for _ in range(size)] for _ in range(size)]
            m = PadicMatrix(p, rows)
            if m.det() == 0:
                continue
            dec = iwahori_bruhat_decompose(m)
            cell, vals = bruhat_cell_valuations(p, m.rows)
            assert cell == dec.w
            assert list(vals) == [int(v) for v in dec.b.diagonal_valuations()]


class TestOppositeParahoric:
    def test_identity(self):
        assert opposite_parahoric_cell(PadicMatrix.identity(3, 3), 1) == (0,)

    def test_constructed_coset(self):
        rng = make_rng("opposite")
        p, n, r = 3, 3, 1
        delta_wn = compose((1, 0, 2), longest_perm(n))  # not in W_{1,2}
        for _ in range(50):
            b = random_upper_triangular_q(rng, p, n)
            jbar = random_iwahori(rng, p, n).transpose()  # opposite parahoric ⊇ opposite Iwahori
            g = b * PadicMatrix.permutation(p, delta_wn) * jbar
            assert opposite_parahoric_cell(g, r) == tuple(sorted(delta_wn[:r]))

    def test_disjointness(self):
        # cells of B Jbar_r and B (delta w_n) Jbar_r differ when
        # delta w_n is not in the block Weyl subgroup
        rng = make_rng("opposite-disjoint")
        p, n, r = 3, 2, 1
        delta_wn = compose((1, 0), longest_perm(n))  # = identity; pick delta = w_n
        assert delta_wn == (0, 1)
        delta_wn = longest_perm(n)  # delta = identity: delta*w_n = w_n not in W_{1,1}
        for _ in range(40):
            b1 = random_upper_triangular_q(rng, p, n)
            j1 = random_iwahori(rng, p, n).transpose()
            lhs = opposite_parahoric_cell(b1 * j1, r)
            rhs = opposite_parahoric_cell(
                b1 * PadicMatrix.permutation(p, delta_wn) * j1, r)
            assert lhs != rhs


class TestUnitFactorization:
    def test_zero_matrix(self):
        r, s = iwahori_factorize_unit(PadicMatrix(3, [[0, 0], [0, 0]]), 1)
        assert r == PadicMatrix.identity(3, 2)
        assert s == PadicMatrix.identity(3, 2)

    def test_rank_one(self):
        x = PadicMatrix(3, [[2]])
        r, s = iwahori_factorize_unit(x, 1)
        assert r == PadicMatrix.identity(3, 1)
        assert s == PadicMatrix(3, [[7]])

    def test_random_congruence(self):
        rng = make_rng("unit-factor")
        for _ in range(100):
            p = 3 if rng.randrange(2) else 2
            beta = rng.randint(1, 2)
            x = PadicMatrix(p, [[rng.randrange(p ** 3) for _ in range(2)]
                                for _ in range(2)])
            r, s = iwahori_factorize_unit(x, beta)
            product = r * s
            expected = PadicMatrix(p, [[
                (1 if i == j else 0) + Fraction(p) ** beta
                * (PadicMatrix.longest_weyl(p, 2) * x).rows[i][j]
                for j in range(2)] for i in range(2)])
            assert product == expected
            assert r.congruent_identity(beta) and s.congruent_identity(beta)


class TestOpenCell:
    def test_open_orbit_representative(self):
        u = PadicMatrix.open_orbit_rep(3, 2)
        fac = open_cell_factorize(u)
        assert fac.bbar == PadicMatrix.identity(3, 4)
        assert fac.h1 == PadicMatrix.identity(3, 2)
        assert fac.h2 == PadicMatrix.identity(3, 2)

    def test_big_cell_congruence(self):
        # (1, w_n + p^beta X; 0, 1) factors with bbar, h = 1 mod p^beta
        rng = make_rng("open-bigcell")
        for _ in range(60):
            p = 3 if rng.randrange(2) else 2
            beta = rng.randint(1, 2)
            n = 2
            wn = PadicMatrix.longest_weyl(p, n)
            x = PadicMatrix(p, [[rng.randrange(p ** 3) for _ in range(n)]
                                for _ in range(n)])
            top = PadicMatrix(p, [[wn.rows[i][j] + Fraction(p) ** beta * x.rows[i][j]
                                   for j in range(n)] for i in range(n)])
            zero = PadicMatrix(p, [[0] * n for _ in range(n)])
            g = PadicMatrix.from_blocks(PadicMatrix.identity(p, n), top,
                                        zero, PadicMatrix.identity(p, n))
            fac = open_cell_factorize(g)
            assert fac is not None
            assert fac.bbar.congruent_identity(beta)
            assert fac.h1.congruent_identity(beta)
            assert fac.h2.congruent_identity(beta)

    def test_character_value_well_defined(self):
        # recovered character value matches the constructed one for pure
        # weights with small entries
        rng = make_rng("open-character")
        p, n = 3, 2
        lam = (3, 1, -1, -3)
        sw = 0
        j = -1
        for _ in range(200):
            bbar = PadicMatrix.from_blocks(
                random_lower_triangular_q(rng, p, n),
                PadicMatrix(p, [[0] * n for _ in range(n)]),
                PadicMatrix(p, [[rng.randrange(p ** 3) for _ in range(n)]
                                for _ in range(n)]),
                random_lower_triangular_q(rng, p, n))
            h1 = random_glzp(rng, p, n)
            h2 = random_glzp(rng, p, n)
            g = bbar * PadicMatrix.open_orbit_rep(p, n) \
                * PadicMatrix.block_diag(h1, h2)
            fac = open_cell_factorize(g)
            assert fac is not None

            def value(bb, a1, a2):
                out = Fraction(1)
                for k, d in enumerate(bb.diagonal_entries()):
                    out *= Fraction(d) ** lam[k]
                return out * Fraction(a1.det()) ** (-j) * Fraction(a2.det()) ** (sw + j)

            assert value(fac.bbar, fac.h1, fac.h2) == value(bbar, h1, h2)

    def test_off_cell_is_distinguished_outcome(self):
        # block antidiagonal matrices have singular A-block: not in the cell
        p, n = 3, 1
        g = PadicMatrix(p, [[0, 1], [1, 0]])
        assert open_cell_factorize(g) is None

    def test_succeeds_on_congruence_products(self):
        # N^beta(Z_p) * Iw^beta stays inside the open cell, and the pure
        # character value is a 1-unit of depth beta at N^beta points
        rng = make_rng("open-nbeta")
        p, n = 3, 2
        lam = (2, 1, -1, -2)
        for _ in range(80):
            beta = rng.randint(1, 2)
            g = random_n_beta(rng, p, n, beta)
            extra = random_iw_beta(rng, p, 2 * n, beta)
            assert open_cell_factorize(g * extra) is not None
            fac = open_cell_factorize(g)
            assert fac is not None
            value = Fraction(1)
            for k, d in enumerate(fac.bbar.diagonal_entries()):
                value *= Fraction(d) ** lam[k]
            value *= Fraction(fac.h1.det()) ** 1 * Fraction(fac.h2.det()) ** (0 - 1)
            assert vp(value - 1, p) >= beta


class TestMeasures:
    def test_iwahori_volume(self):
        assert vol_iwahori(3, 1) == 1
        assert vol_iwahori(3, 2) == Fraction(12, 48)

    def test_big_cell_volume(self):
        assert vol_big_cell(3, 1) == 1
        assert vol_big_cell(3, 2) == Fraction(3, 4)
        assert vol_big_cell(2, 2) == Fraction(2, 3)
