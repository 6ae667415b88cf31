"""Branching vectors for GL(n) x GL(n) inside GL(2n) and their
interpolation over the pure weight space.

The classical vector v_{lam,j} generating the H-isotypic line of weight
(det_1^{-j} det_2^{sw+j}) in V_lam is realized through the open-cell
factorization: on g = bbar * u * diag(h1, h2) its value is

    lam(bbar) * det(h1)^{-j} * det(h2)^{sw+j},

normalised so that v_{lam,j}(u) = 1; off the open cell the realization is
extended by zero (all statements under test evaluate inside Iw^1, where
the two agree).  The auxiliary vectors v_(0), v_(1..n-1), v_(n),1,
v_(n),2 are the same construction at the basis weights; the product
formula and the membership predicates for N^beta, Iw^beta, Iw_H^beta take
their shapes from the factorization.

Family interpolation replaces integer powers by characters with values in
a truncated Iwasawa algebra: w_chi on Iw^1, v_Omega(f) on locally
polynomial f, and the pushforward kappa_Omega on finite linear
combinations of Dirac evaluations.
"""

from __future__ import annotations

from fractions import Fraction

from .famring import (FamilyRing, FamSeries, FamringError, teichmuller,
                      wild_base, wild_exponent)
from .padiclin import (LinAlgError, PadicMatrix, lu_unit_lower,
                       open_cell_factorize, vp)
from .rootspin import GLWeight


class BranchError(Exception):
    pass


# ---------------------------------------------------------------------------
# weights and the critical range


class PureWeight:
    """A pure dominant weight with its purity weight and critical range."""

    __slots__ = ("weight", "sw")

    def __init__(self, entries):
        self.weight = entries if isinstance(entries, GLWeight) else GLWeight(entries)
        if not self.weight.is_dominant():
            raise BranchError("weight must be dominant")
        self.sw = self.weight.purity_weight()

    @property
    def n(self):
        return self.weight.n

    def entry(self, i: int) -> int:
        x = self.weight.entries[i]
        if x.denominator != 1:
            raise BranchError("branching needs an integral weight")
        return int(x)


def crit_range(lam: PureWeight):
    """Integers j with -lam_n <= j <= -lam_{n+1}."""
    n = lam.n
    lo, hi = -lam.entry(n - 1), -lam.entry(n)
    return range(lo, hi + 1)


def alpha_weight(n: int, i: int) -> GLWeight:
    """The basis weights: alpha_0 = (1,...,1), alpha_i = (1^i, 0..0, (-1)^i)
    for 1 <= i <= n-1, alpha_n = (1^n, 0^n)."""
    if i == 0:
        return GLWeight([1] * (2 * n))
    if i == n:
        return GLWeight([1] * n + [0] * n)
    return GLWeight([1] * i + [0] * (2 * n - 2 * i) + [-1] * i)


# ---------------------------------------------------------------------------
# classical branching vectors via the open cell


def v_lambda_j(g: PadicMatrix, lam: PureWeight, j: int) -> Fraction:
    """The normalized branching vector, evaluated via the open cell.

    Returns 0 off the cell (the algebraic vector is only tested on Iw^1,
    where the extension by zero is never reached).
    """
    if j not in crit_range(lam):
        raise BranchError(f"{j} is not in the critical range")
    fac = open_cell_factorize(g)
    if fac is None:
        return Fraction(0)
    value = Fraction(1)
    for i, d in enumerate(fac.bbar.diagonal_entries()):
        e = lam.entry(i)
        if e:
            value *= Fraction(d) ** e
    sw = int(lam.sw)
    det1, det2 = fac.h1.det(), fac.h2.det()
    return value * Fraction(det1) ** (-j) * Fraction(det2) ** (sw + j)


def v_basis_values(g: PadicMatrix):
    """(v_(0), [v_(1), ..., v_(n-1)], v_(n)1, v_(n)2) at g.

    v_(0) is det; the others are v_{alpha_i, 0} and v_{alpha_n, -1},
    v_{alpha_n, 0}.  Returns None off the open cell.
    """
    n = g.size // 2
    fac = open_cell_factorize(g)
    if fac is None:
        return None
    det1, det2 = Fraction(fac.h1.det()), Fraction(fac.h2.det())
    diag = [Fraction(d) for d in fac.bbar.diagonal_entries()]
    mids = []
    for i in range(1, n):
        lam = alpha_weight(n, i)
        value = Fraction(1)
        for k, d in enumerate(diag):
            e = int(lam.entries[k])
            if e:
                value *= d ** e
        mids.append(value)
    base_n = Fraction(1)
    for k in range(n):
        base_n *= diag[k]
    v_n1 = base_n * det1          # j = -1: det(h1)^1
    v_n2 = base_n * det2          # j = 0:  det(h2)^1
    v_0 = Fraction(1)
    for d in diag:
        v_0 *= d
    v_0 *= det1 * det2
    return v_0, mids, v_n1, v_n2


# ---------------------------------------------------------------------------
# congruence subsets of the Iwahori


def open_orbit_u(p: int, n: int) -> PadicMatrix:
    return PadicMatrix.open_orbit_rep(p, n)


def in_n_beta(g: PadicMatrix, beta: int) -> bool:
    """g in N(p^beta Z_p) * u: unipotent upper congruent to u mod p^beta."""
    n2 = g.size
    u = PadicMatrix.open_orbit_rep(g.p, n2 // 2)
    m = g * u.inverse()
    return m.in_upper_unipotent(depth=0) and m.congruent_identity(beta)


def iwahori_coordinates(g: PadicMatrix):
    """(nbar, t, n) with g = nbar * t * n, nbar lower unipotent with
    p-divisible entries, t diagonal units, n upper unipotent."""
    if not g.in_iwahori():
        raise BranchError("element is not in the Iwahori subgroup")
    lo, up = lu_unit_lower(g)
    if not lo.in_lower_unipotent(depth=1):
        raise BranchError("Iwahori factorization failed on the lower part")
    t = up.diagonal_entries()
    tinv = PadicMatrix.diagonal(g.p, [1 / x for x in t])
    n = tinv * up
    return lo, PadicMatrix.diagonal(g.p, t), n


def in_iw_beta(g: PadicMatrix, beta: int) -> bool:
    """g in Iw^beta = Nbar(p Z_p) T(Z_p) N^beta(Z_p)."""
    if not g.in_iwahori():
        return False
    try:
        _, _, n = iwahori_coordinates(g)
    except (BranchError, LinAlgError):
        return False
    return in_n_beta(n, beta)


def in_iwh_beta(h: PadicMatrix, beta: int) -> bool:
    """h in Iw_H^beta = H(Z_p) intersect u^{-1} Iw^beta."""
    if not h.in_h_zp():
        return False
    u = PadicMatrix.open_orbit_rep(h.p, h.size // 2)
    return in_iw_beta(u * h, beta)


# ---------------------------------------------------------------------------
# weight characters (algebraic and family)


class FamilyWeight:
    """An (n+1)-parameter pure family weight at ambient precision (p^M, D).

    Coordinates: tame exponents for chi_1, ..., chi_n and for sw, together
    with one truncated-power-series variable each (T_1..T_n and T_0); the
    remaining torus coordinates are derived from purity:
    chi_{2n+1-i} = sw * chi_i^{-1}.
    """

    def __init__(self, p: int, n: int, prec_exp: int, degree: int,
                 tame: list, tame_sw: int):
        self.p = p
        self.n = n
        self.ring = FamilyRing(p, prec_exp, degree, n + 1)
        self.tame = list(tame)
        self.tame_sw = tame_sw
        if len(self.tame) != n:
            raise BranchError("need n tame exponents")
        self._cprec = self.ring.exponent_precision()

    def _unit_rep(self, x) -> int:
        x = Fraction(x)
        mod = self.p ** self._cprec
        if x.numerator % self.p == 0 or x.denominator % self.p == 0:
            raise BranchError("family characters evaluate at units only")
        return x.numerator * pow(x.denominator, -1, mod) % mod

    def _tame_value(self, x_int: int, exponent: int) -> int:
        if self.p == 2:
            if exponent % 2 == 0:
                return 1
            return 1 if x_int % 4 == 1 else -1
        t = teichmuller(x_int, self.p, self.ring.work_exp)
        return pow(t, exponent % (self.p - 1), self.ring.modulus)

    def _coord(self, var: int, tame_exp: int, x) -> FamSeries:
        x_int = self._unit_rep(x)
        c = wild_exponent(x_int, self.p, self._cprec)
        series = self.ring.one_plus_t_power(var, c)
        return series * self.ring.const(self._tame_value(x_int, tame_exp))

    def sw_value(self, x) -> FamSeries:
        return self._coord(0, self.tame_sw, x)

    def coordinate_value(self, i: int, x) -> FamSeries:
        """chi_{Omega,i}(x) for 1 <= i <= 2n."""
        n = self.n
        if 1 <= i <= n:
            return self._coord(i, self.tame[i - 1], x)
        if n < i <= 2 * n:
            partner = 2 * n + 1 - i
            return self.sw_value(x) * self.coordinate_value(partner, x).inverse()
        raise BranchError("coordinate index out of range")

    def torus_value(self, entries) -> FamSeries:
        out = self.ring.one()
        for i, x in enumerate(entries, start=1):
            out = out * self.coordinate_value(i, x)
        return out

    # -- specialization at an algebraic member

    def contains(self, lam: PureWeight) -> bool:
        if lam.n != self.n:
            return False
        unit_order = 2 if self.p == 2 else self.p - 1
        if (int(lam.sw) - self.tame_sw) % unit_order:
            return False
        return all((lam.entry(i) - self.tame[i]) % unit_order == 0
                   for i in range(self.n))

    def specialization_values(self, lam: PureWeight):
        """T_i |-> b^(lam-exponent) - 1 for the wild generator b."""
        if not self.contains(lam):
            raise BranchError("weight is not a member of the family")
        b = wild_base(self.p)
        mod = self.ring.modulus
        exps = [int(lam.sw)] + [lam.entry(i) for i in range(self.n)]
        vals = []
        for e in exps:
            power = pow(b, e, mod) if e >= 0 else pow(pow(b, -1, mod), -e, mod)
            vals.append((power - 1) % mod)
        return vals

    def specialize(self, x: FamSeries, lam: PureWeight) -> int:
        """Evaluate a family coefficient at lam, mod p^M."""
        return x.specialize(self.specialization_values(lam)) \
            % self.ring.target_modulus

    def reduce(self, x) -> int:
        """Reduce an exact rational to the target precision."""
        x = Fraction(x)
        m = self.ring.target_modulus
        if x.denominator % self.p == 0:
            raise BranchError("value is not p-integral")
        return x.numerator * pow(x.denominator, -1, m) % m


def w_lambda(g: PadicMatrix, lam: PureWeight) -> Fraction:
    """The algebraic product character w_lam on Iw^1 (exact rational)."""
    nbar, t, nmat = iwahori_coordinates(g)
    if not in_n_beta(nmat, 1):
        raise BranchError("element is not in Iw^1")
    n = lam.n
    base = v_basis_values(nmat)
    if base is None:
        raise BranchError("open-cell factorization failed inside Iw^1")
    v0, mids, vn1, vn2 = base
    value = Fraction(1)
    for i, d in enumerate(t.diagonal_entries()):
        e = lam.entry(i)
        if e:
            value *= Fraction(d) ** e
    value *= v0 ** lam.entry(n)  # exponent lam_{n+1}
    for i in range(1, n):
        value *= mids[i - 1] ** (lam.entry(i - 1) - lam.entry(i))
    value *= vn1 ** (-lam.entry(n))
    value *= vn2 ** lam.entry(n - 1)
    return value


def w_family(g: PadicMatrix, omega: FamilyWeight) -> FamSeries:
    """The interpolated character w_chi on Iw^1, valued in the family ring."""
    nbar, t, nmat = iwahori_coordinates(g)
    if not in_n_beta(nmat, 1):
        raise BranchError("element is not in Iw^1")
    n = omega.n
    base = v_basis_values(nmat)
    if base is None:
        raise BranchError("open-cell factorization failed inside Iw^1")
    v0, mids, vn1, vn2 = base
    out = omega.torus_value(t.diagonal_entries())
    chi = omega.coordinate_value
    out = out * chi(n + 1, v0)
    for i in range(1, n):
        out = out * chi(i, mids[i - 1]) * chi(i + 1, mids[i - 1]).inverse()
    out = out * chi(n + 1, vn1).inverse()
    out = out * chi(n, vn2)
    return out


# ---------------------------------------------------------------------------
# locally polynomial test functions on Z_p^x


class LocPoly:
    """A locally polynomial test function on Z_p^x with rational values.

    On the unit class (residue mod p^level) each piece is either
    c * z^j ("pow") or an honest polynomial sum c_k z^k ("poly"); level 0
    means a single piece everywhere.  Classes without a piece give 0.
    """

    __slots__ = ("p", "level", "pieces")

    def __init__(self, p: int, level: int, pieces: dict):
        self.p = p
        self.level = level
        self.pieces = pieces

    @classmethod
    def monomial(cls, p: int, j: int) -> "LocPoly":
        return cls(p, 0, {0: ("pow", (j, Fraction(1)))})

    @classmethod
    def indicator_times_power(cls, p: int, level: int, residue: int, j: int,
                              scale=1) -> "LocPoly":
        return cls(p, level, {residue % p ** level: ("pow", (j, Fraction(scale)))})

    @classmethod
    def piecewise(cls, p: int, level: int, coeff_map: dict) -> "LocPoly":
        return cls(p, level, {r % p ** level: ("poly", [Fraction(c) for c in cs])
                              for r, cs in coeff_map.items()})

    def _residue(self, z: Fraction) -> int:
        mod = self.p ** self.level
        num, den = z.numerator % mod, z.denominator % mod
        return num * pow(den, -1, mod) % mod

    def __call__(self, z) -> Fraction:
        z = Fraction(z)
        piece = self.pieces.get(self._residue(z) if self.level else 0)
        if piece is None:
            return Fraction(0)
        kind, data = piece
        if kind == "pow":
            j, c = data
            return c * z ** j
        return sum((Fraction(c) * z ** k for k, c in enumerate(data)),
                   Fraction(0))

    def translated(self, factor) -> "LocPoly":
        """z -> f(factor * z), for factor a p-adic unit."""
        factor = Fraction(factor)
        if self.level == 0:
            out = {}
            for r, (kind, data) in self.pieces.items():
                if kind == "pow":
                    j, c = data
                    out[r] = ("pow", (j, c * factor ** j))
                else:
                    out[r] = ("poly", [Fraction(c) * factor ** k
                                       for k, c in enumerate(data)])
            return LocPoly(self.p, 0, out)
        mod = self.p ** self.level
        fnum = factor.numerator % mod
        fden = factor.denominator % mod
        f_res = fnum * pow(fden, -1, mod) % mod
        f_inv = pow(f_res, -1, mod)
        out = {}
        for r, (kind, data) in self.pieces.items():
            # the new function is supported where factor * z falls in class r
            new_r = r * f_inv % mod
            if kind == "pow":
                j, c = data
                out[new_r] = ("pow", (j, c * factor ** j))
            else:
                out[new_r] = ("poly", [Fraction(c) * factor ** k
                                       for k, c in enumerate(data)])
        return LocPoly(self.p, self.level, out)

    def scaled(self, c) -> "LocPoly":
        c = Fraction(c)
        out = {}
        for r, (kind, data) in self.pieces.items():
            if kind == "pow":
                out[r] = ("pow", (data[0], data[1] * c))
            else:
                out[r] = ("poly", [c * x for x in data])
        return LocPoly(self.p, self.level, out)


# ---------------------------------------------------------------------------
# distributions and the interpolation maps


class FiniteDistribution:
    """A finite linear combination of Dirac evaluations at Iwahori points."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = [(int(c), g) for c, g in terms]
        for _, g in self.terms:
            if not g.in_iwahori():
                raise BranchError("Dirac base point must lie in the Iwahori")

    def supported_on(self, beta: int) -> bool:
        return all(in_iw_beta(g, beta) for _, g in self.terms)


def _ratio_at(g: PadicMatrix) -> Fraction:
    """v_(n),2 / v_(n),1 at the N-part of g (an element of 1 + p Z_p)."""
    _, _, nmat = iwahori_coordinates(g)
    base = v_basis_values(nmat)
    if base is None:
        raise BranchError("open-cell factorization failed inside Iw^1")
    _, _, vn1, vn2 = base
    return vn2 / vn1


def v_family(f: LocPoly, g: PadicMatrix, omega: FamilyWeight) -> FamSeries:
    """v_Omega(f) at g: w_chi(g) * f(v_(n),2 / v_(n),1) on Iw^1, else 0."""
    if not in_iw_beta(g, 1):
        return omega.ring.zero()
    w = w_family(g, omega)
    val = f(_ratio_at(g))
    if val == 0:
        return omega.ring.zero()
    return w * omega.ring.from_rational(val)


def v_lambda_fun(f: LocPoly, g: PadicMatrix, lam: PureWeight) -> Fraction:
    """The same construction at the single weight lam (exact rational)."""
    if not in_iw_beta(g, 1):
        return Fraction(0)
    return w_lambda(g, lam) * f(_ratio_at(g))


def kappa_family(mu: FiniteDistribution, f: LocPoly,
                 omega: FamilyWeight) -> FamSeries:
    out = omega.ring.zero()
    for c, g in mu.terms:
        out = out + v_family(f, g, omega) * c
    return out


def kappa_lambda(mu: FiniteDistribution, f: LocPoly, lam: PureWeight) -> Fraction:
    return sum((Fraction(c) * v_lambda_fun(f, g, lam) for c, g in mu.terms),
               Fraction(0))


def kappa_lambda_j(mu: FiniteDistribution, lam: PureWeight, j: int) -> Fraction:
    return sum((Fraction(c) * v_lambda_j(g, lam, j) for c, g in mu.terms),
               Fraction(0))


def r_lambda_pair(mu: FiniteDistribution, vector) -> Fraction:
    """Pair a distribution against an explicit branching vector (callable)."""
    return sum((Fraction(c) * vector(g) for c, g in mu.terms), Fraction(0))


def moment(mu: FiniteDistribution, omega: FamilyWeight, f: LocPoly) -> FamSeries:
    """The pushforward kappa_Omega(mu) integrated against f."""
    return kappa_family(mu, f, omega)
