"""Shalika-model values and twisted local zeta integrals.

Closed forms (any n):

* ``w_value_closed``: the value of the intertwined eigenvector of a
  tau-normalized spin refinement at diag(w_n z^(2 beta), 1) -- a nonzero
  unit monomial, which witnesses that spin refinements are Shalika.
* ``zeta_iwahori_closed``: the Iwahori-level Friedberg-Jacquet integral
  against a ramified character of conductor p^beta.
* ``zeta_parahoric_closed``: the parahoric-level integral for the
  new-vector normalisation, with both a ramified and an unramified row.
* ``ep_factor`` / ``qprime_factor``: the interpolation factors these
  values assemble into.

Brute-force oracles (n = 1): the Shalika intertwining
``ag_intertwine_value`` evaluated by exact shell decomposition of the
X-integral, and shell-sum versions of both zeta integrals.  Truncations
certify themselves: outermost shells must vanish exactly and geometric
tails must repeat an exact ratio over several shells, else the
computation refuses to return.

All zeta values are functions of p^s through the formal generator S.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .padiclin import (INF, PadicMatrix, iwahori_bruhat_decompose, vol_big_cell,
                       vol_iwahori, vp)
from .perms import block_perm, compose, longest_perm, perm_sign
from .princhecke import PSVector, ps_evaluate
from .refine import (Refinement, SatakeParameter, hecke_eigenvalue, is_spin,
                     tau_element, u_p_eigenvalue)
from .rootspin import delta_b
from .symring import (CycNum, DivergentSeries, NonUnitDivision, SymElem,
                      geometric_tail)


class ZetaError(Exception):
    pass


class TruncationError(ZetaError):
    """An oracle could not certify its truncation; increase shells."""


@dataclass
class ZetaResult:
    value: SymElem
    provenance: str  # "closed-form" | "oracle"


# ---------------------------------------------------------------------------
# twisting characters


def _primitive_root(p: int, beta: int) -> int:
    """A generator of (Z/p^beta)^x for odd p."""
    m = p ** beta
    order = m // p * (p - 1)
    for g in range(2, m):
        if g % p == 0:
            continue
        k, x = 1, g
        while x != 1:
            x = x * g % m
            k += 1
        if k == order:
            return g
    raise ZetaError("no primitive root found")


class TwistCharacter:
    """A finite-order character of Q_p^x with chi(p) = 1.

    ``beta`` is the conductor exponent (0 for the trivial character);
    ``values`` maps units modulo p^beta to roots of unity.
    """

    __slots__ = ("p", "beta", "values", "label")

    def __init__(self, p: int, beta: int, values: dict, label: str = ""):
        self.p = p
        self.beta = beta
        self.values = values
        self.label = label

    @classmethod
    def trivial(cls, p: int) -> "TwistCharacter":
        return cls(p, 0, {}, label="1")

    @classmethod
    def enumerate_conductor(cls, p: int, beta: int):
        """All characters of conductor exactly p^beta."""
        if beta == 0:
            return [cls.trivial(p)]
        m = p ** beta
        units = [a for a in range(1, m) if a % p != 0]
        out = []
        if p == 2:
            if beta == 1:
                return []
            if beta == 2:
                vals = {1: CycNum.from_rational(1), 3: CycNum.from_rational(-1)}
                return [cls(2, 2, vals, label="chi4")]
            # (Z/2^beta)^x = <-1> x <5>
            half = 2 ** (beta - 2)
            for eps in (0, 1):
                for k in range(half):
                    if k % 2 == 0:
                        continue  # must be nontrivial on 1 + 2^(beta-1)
                    vals = {}
                    for a in units:
                        e1, e2 = _two_adic_log(a, beta)
                        vals[a] = (CycNum.from_rational(-1) ** (eps * e1)
                                   * CycNum.root_of_unity(half, (k * e2) % half))
                    out.append(cls(2, beta, vals, label=f"chi2^{beta}[{eps},{k}]"))
            return out
        order = m // p * (p - 1)
        g = _primitive_root(p, beta)
        logs = {}
        x = 1
        for j in range(order):
            logs[x] = j
            x = x * g % m
        for k in range(1, order):
            if beta >= 2 and k % p == 0:
                continue  # factors through level beta - 1
            d = order // _gcd(k, order)
            vals = {a: CycNum.root_of_unity(d, (k // _gcd(k, order)) * logs[a] % d)
                    for a in units}
            out.append(cls(p, beta, vals, label=f"chi{p}^{beta}[{k}]"))
        return out

    @property
    def is_ramified(self) -> bool:
        return self.beta >= 1

    def of_unit(self, a) -> CycNum:
        if self.beta == 0:
            return CycNum.from_rational(1)
        m = self.p ** self.beta
        a = Fraction(a)
        num = a.numerator % m
        den = a.denominator % m
        if num % self.p == 0 or den % self.p == 0:
            raise ZetaError("argument is not a unit")
        return self.values[num * pow(den, -1, m) % m]

    def of(self, x) -> CycNum:
        """chi(x) for nonzero rational x; chi(p) = 1 throughout."""
        x = Fraction(x)
        v = vp(x, self.p)
        return self.of_unit(x / Fraction(self.p) ** int(v))

    def conjugate(self) -> "TwistCharacter":
        if self.beta == 0:
            return self
        return TwistCharacter(self.p, self.beta,
                              {a: c.conjugate() for a, c in self.values.items()},
                              label=self.label + "~")

    def __repr__(self):
        return f"TwistCharacter({self.label or (self.p, self.beta)})"


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


def _two_adic_log(a: int, beta: int):
    """(e1, e2) with a = (-1)^e1 * 5^e2 mod 2^beta (beta >= 3)."""
    m = 2 ** beta
    half = 2 ** (beta - 2)
    x = 1
    for e2 in range(half):
        if x == a % m:
            return 0, e2
        if (-x) % m == a % m:
            return 1, e2
        x = x * 5 % m
    raise ZetaError("two-adic discrete log failed")


def gauss_sum(chi: TwistCharacter) -> CycNum:
    """tau(chi) = sum over units c mod p^beta of chi(c) zeta_{p^beta}^c."""
    if chi.beta < 1:
        raise ZetaError("the trivial character has no Gauss sum here")
    m = chi.p ** chi.beta
    total = CycNum.from_rational(0)
    for a, val in chi.values.items():
        total = total + val * CycNum.root_of_unity(m, a)
    return total


def psi_orthogonality(p: int, beta: int, mult: int) -> bool:
    """sum over u mod p^beta of zeta_{p^beta}^{mult*u} vanishes exactly
    when p^beta does not divide mult (the Fourier-vanishing step used by
    the support reductions)."""
    total = CycNum.from_rational(0)
    for u in range(p ** beta):
        total = total + CycNum.root_of_unity(p ** beta, mult * u % p ** beta)
    expected_zero = mult % p ** beta != 0
    return total.is_zero() == expected_zero


# ---------------------------------------------------------------------------
# cell support of the Shalika integrand


def z_matrix(p: int, n: int, power: int = 1) -> PadicMatrix:
    """z = diag(p^(n-1), ..., p, 1), raised to the given power."""
    return PadicMatrix.diagonal(p, [Fraction(p) ** ((n - 1 - i) * power)
                                    for i in range(n)])


def shalika_argument(k: PadicMatrix, x: PadicMatrix, beta: int) -> PadicMatrix:
    """(0 1; 1 0)(1 X; 0 1) diag(k, k) diag(w_n z^(2 beta), 1)."""
    p, n = k.p, k.size
    wz = PadicMatrix.longest_weyl(p, n) * z_matrix(p, n, 2 * beta)
    kwz = k * wz
    xk = x * k
    zero = PadicMatrix(p, [[0] * n for _ in range(n)])
    return PadicMatrix.from_blocks(zero, k, kwz, xk)


def shalika_support_predicate(delta: tuple, k: PadicMatrix, x: PadicMatrix,
                              beta: int) -> bool:
    """Direct support conditions: delta is the longest element, k lies in
    the big Iwahori cell of GL_n(Z_p), and k^{-1} X lands in
    w_n z^(2 beta) M_n(Z_p)."""
    if beta < 1:
        raise ZetaError("depth must be >= 1")
    if not k.in_glzp():
        raise ZetaError("k must lie in GL_n(Z_p)")
    n = k.size
    wlong = longest_perm(n)
    if tuple(delta) != wlong:
        return False
    if iwahori_bruhat_decompose(k).w != wlong:
        return False
    target = z_matrix(k.p, n, -2 * beta) * PadicMatrix.longest_weyl(k.p, n) \
        * k.inverse() * x
    return target.is_integral()


def shalika_support_bruhat(delta: tuple, k: PadicMatrix, x: PadicMatrix,
                           beta: int) -> bool:
    """Independent membership test on the assembled 2n x 2n matrix: its
    Bruhat cell must be (0 w_n; delta w_n 0) = nu_delta w_{2n}."""
    n = k.size
    cell = iwahori_bruhat_decompose(shalika_argument(k, x, beta)).w
    return cell == compose(block_perm(tuple(delta), n), longest_perm(2 * n))


def borel_part_character(theta_values, k: PadicMatrix, x: PadicMatrix,
                         beta: int) -> SymElem:
    """Theta of the Borel part of the assembled matrix, for an unramified
    character Theta given by its 2n values at p.

    Requires the support conditions for delta = w_n; the result always
    equals Theta(diag(1, z^(2 beta))), which is asserted.
    """
    p, n = k.p, k.size
    g = shalika_argument(k, x, beta)
    dec = iwahori_bruhat_decompose(g)
    if dec.w != compose(block_perm(longest_perm(n), n), longest_perm(2 * n)):
        raise ZetaError("argument lies outside the expected cell")
    value = SymElem.rational(p, 1)
    for val, t in zip(theta_values, dec.b.diagonal_valuations()):
        if t:
            value = value * val ** int(t)
    expected = SymElem.rational(p, 1)
    zv = z_matrix(p, n, 2 * beta).diagonal_valuations()
    for i in range(n):
        if zv[i]:
            expected = expected * theta_values[n + i] ** int(zv[i])
    if value != expected:
        raise ZetaError("Borel part disagrees with Theta(diag(1, z^(2 beta)))")
    return value


# ---------------------------------------------------------------------------
# the Ash-Ginzburg intertwining, n = 1, by exact shell integration


def _conjugation_level(g: PadicMatrix, elem: PadicMatrix) -> int:
    """Least c >= 0 with 1 + t g^{-1} elem g in Iw for all t in p^c Z_p."""
    p = g.p
    e = g.inverse() * elem * g
    c = 0
    bounds = []
    v00, v01 = vp(e.rows[0][0], p), vp(e.rows[0][1], p)
    v10, v11 = vp(e.rows[1][0], p), vp(e.rows[1][1], p)
    if v00 is not INF:
        bounds.append(1 - int(v00))
    if v01 is not INF:
        bounds.append(-int(v01))
    if v10 is not INF:
        bounds.append(1 - int(v10))
    if v11 is not INF:
        bounds.append(1 - int(v11))
    return max([c] + bounds)


def ag_intertwine_value(f: PSVector, g: PadicMatrix, shells: int) -> SymElem:
    """The Shalika intertwining of f at g (n = 1 only):

        integral over k in Z_p^x, X in Q_p of
            f[(0 1; 1 0)(1 X; 0 1)(k 0; 0 k) g] psi^{-1}(X) eta^{-1}(k)

    with vol(Z_p^x) = 1 and vol(Z_p) = 1.  For n = 1 the k-factor is the
    central scalar k*1_2, and eta is unramified, so the k-integrand is
    constant and the k-integral contributes 1 (evaluated at k = 1).  The
    X-integral is cut into valuation shells; each shell is a finite exact
    sum because the integrand is invariant under X -> X + p^c Z_p for the
    computed conjugation level c, and the shell at -shells must vanish
    identically (otherwise the truncation is uncertified and we raise).
    """
    if f.size != 2:
        raise ZetaError("the intertwining oracle is implemented for n = 1")
    if shells < 2:
        raise TruncationError("shells must be >= 2 to certify the truncation")
    p = f.p
    e12 = PadicMatrix(p, [[0, 1], [0, 0]])
    c_g = _conjugation_level(g, e12)
    grows = g.rows

    def integrand_rows(xval: Fraction):
        # (0 1; 1 0)(1 X; 0 1) g: bottom row of g, then top + X * bottom
        return (grows[1],
                (grows[0][0] + xval * grows[1][0], grows[0][1] + xval * grows[1][1]))

    from .princhecke import ps_evaluate_rows
    tail_start = max(c_g, 0)
    total = SymElem.rational(p, 0)
    for v in range(-shells, tail_start):
        level = max(c_g - v, -v, 1)
        shell = SymElem.rational(p, 0)
        mod = p ** level
        volume = Fraction(1, p ** (v + level))
        for u in range(1, mod):
            if u % p == 0:
                continue
            xval = Fraction(u) * Fraction(p) ** v
            val = ps_evaluate_rows(f, integrand_rows(xval))
            if val.is_zero():
                continue
            if v < 0:
                val = val * CycNum.root_of_unity(p ** (-v), (-u) % p ** (-v))
            shell = shell + val
        shell = shell * volume
        if v <= -shells + 1 and not shell.is_zero():
            raise TruncationError(
                "outermost X-shells do not vanish; increase shells")
        total = total + shell
    deep = ps_evaluate_rows(f, integrand_rows(Fraction(0)))
    total = total + deep * Fraction(1, p ** tail_start)
    return total


# ---------------------------------------------------------------------------
# closed forms


def w_value_closed(satake: SatakeParameter, beta: int, n: int) -> SymElem:
    """Value of the normalized spin eigenvector at diag(w_n z^(2 beta), 1):

        vol(B_n(Z_p) w_n Iw_n) * p^(beta n^2) * delta_B(t_p)^beta
            * eta(det z^beta)^{-1} * (alpha_p / alpha_{p,n})^beta,

    a nonzero unit monomial.  The Satake parameter must be tau-normalized
    (pattern tau = diag(1, w_n)); use refine.normalize_satake first.
    """
    if satake.n != n:
        raise ZetaError("size mismatch")
    p = satake.p
    ref = Refinement(satake, tau_element(n))
    if not (satake.ag and is_spin(ref)):
        raise ZetaError("w_value_closed needs a tau-normalized spin parameter")
    upsilon2 = vol_big_cell(p, n)
    tp_vals = list(range(2 * n - 1, -1, -1))
    value = SymElem.rational(p, upsilon2 * Fraction(p) ** (beta * n * n))
    value = value * delta_b(p, tp_vals) ** beta
    value = value * satake.eta ** (-beta * (n * (n - 1) // 2))
    value = value * (u_p_eigenvalue(ref) / hecke_eigenvalue(ref, n)) ** beta
    return value


def chi_det_minus_wn(chi: TwistCharacter, n: int) -> CycNum:
    sign = (-1) ** n * perm_sign(longest_perm(n))
    return chi.of(sign)


def zeta_iwahori_closed(w_base: SymElem, chi: TwistCharacter, beta: int,
                        n: int, eta: SymElem) -> ZetaResult:
    """Iwahori-level zeta value for ramified chi of conductor p^beta:

        Upsilon' * eta(det z^beta) * p^(-beta(n^2+n)/2) * p^(beta n (s-1/2))
            * tau(chi)^n * chi(det(-w_n)) * w_base

    with Upsilon' = vol(Iw_n) (1 - 1/p)^{-n} p^((n^2-n)/2).  The unramified
    case has no Iwahori-level closed form; use the parahoric one.
    """
    if not chi.is_ramified or chi.beta != beta:
        raise ZetaError("the Iwahori closed form needs conductor exactly p^beta >= p")
    p = chi.p
    upsilon1 = vol_iwahori(p, n) * Fraction(p - 1, p) ** (-n) \
        * Fraction(p) ** ((n * n - n) // 2)
    value = SymElem.rational(p, upsilon1)
    value = value * eta ** (beta * (n * (n - 1) // 2))
    value = value * SymElem.p_power(p, Fraction(-beta * (n * n + n), 2))
    value = value * SymElem.gen(p, "S", beta * n) \
        * SymElem.monomial(p, 1, {"Y": -beta * n})
    value = value * SymElem.from_cyc(p, gauss_sum(chi) ** n)
    value = value * SymElem.from_cyc(p, chi_det_minus_wn(chi, n))
    value = value * w_base
    return ZetaResult(value, "closed-form")


def zeta_parahoric_closed(satake: SatakeParameter, chi: TwistCharacter,
                          beta_prime: int, delta_f: int = 0) -> ZetaResult:
    """Parahoric-level zeta value for the new-vector normalisation:

        q^(beta n (s - n/2) + delta n (s - n/2 - 1)) * chi(det(-w_n)) * Q

    where beta = max(1, beta_prime) and Q has a ramified and an
    unramified row.  Base field Q_p means delta_f = 0; the delta_f
    exponents are kept for reference but only 0 is exercised.
    """
    p, n = satake.p, satake.n
    if chi.beta != beta_prime:
        raise ZetaError("conductor exponent mismatch")
    beta = max(1, beta_prime)
    s_pow = SymElem.gen(p, "S", beta * n + delta_f * n)
    s_pow = s_pow * SymElem.p_power(p, Fraction(-beta * n * n - delta_f * n * n, 2))
    s_pow = s_pow * SymElem.p_power(p, Fraction(-delta_f * n))
    value = s_pow * SymElem.from_cyc(p, chi_det_minus_wn(chi, n))
    if chi.is_ramified:
        q_factor = SymElem.rational(
            p, Fraction(p) ** (-beta * n) * Fraction(p, p - 1) ** n)
        q_factor = q_factor * SymElem.from_cyc(p, gauss_sum(chi) ** n)
        return ZetaResult(value * q_factor, "closed-form")
    q_factor = SymElem.rational(p, Fraction(1, 1 - p) ** n)
    for i in range(n, 2 * n):
        theta = satake.theta[i]
        numer = SymElem.rational(p, 1) - theta * SymElem.gen(p, "S", -1) * p
        q_factor = q_factor * numer
        q_factor = geometric_tail(q_factor, theta * SymElem.gen(p, "S", -1))
    return ZetaResult(value * q_factor, "closed-form")


def zeta_parahoric_reciprocal(satake: SatakeParameter, chi: TwistCharacter,
                              beta_prime: int) -> SymElem:
    """1 / zeta_parahoric_closed, assembled in factored form (delta_f = 0).

    Needed because the unramified row has a non-monomial numerator, which
    SymElem cannot invert directly; the reciprocal swaps the two Euler
    products instead.  Checked against the closed form by multiplication.
    """
    p, n = satake.p, satake.n
    beta = max(1, beta_prime)
    s_pow = SymElem.gen(p, "S", -beta * n)
    s_pow = s_pow * SymElem.p_power(p, Fraction(beta * n * n, 2))
    value = s_pow * SymElem.from_cyc(p, chi_det_minus_wn(chi, n).inverse())
    if chi.is_ramified:
        q_factor = SymElem.rational(
            p, Fraction(p) ** (beta * n) * Fraction(p - 1, p) ** n)
        q_factor = q_factor * SymElem.from_cyc(p, (gauss_sum(chi) ** n).inverse())
        recip = value * q_factor
    else:
        q_factor = SymElem.rational(p, Fraction(1 - p, 1) ** n)
        for i in range(n, 2 * n):
            theta = satake.theta[i]
            numer = SymElem.rational(p, 1) - theta * SymElem.gen(p, "S", -1)
            q_factor = q_factor * numer
            q_factor = geometric_tail(
                q_factor, theta * SymElem.gen(p, "S", -1) * p)
        recip = value * q_factor
    check = recip * zeta_parahoric_closed(satake, chi, beta_prime).value
    if check != SymElem.rational(p, 1):
        raise ZetaError("reciprocal failed its self-check")
    return recip


# ---------------------------------------------------------------------------
# oracles (n = 1)


def zeta_iwahori_oracle(f: PSVector, chi: TwistCharacter, beta: int,
                        shells: int) -> ZetaResult:
    """Shell-sum evaluation of the twisted zeta integral at n = 1:

        integral over x in Q_p^x of
            W(diag(x, 1) u^{-1} t_p^beta) chi(x) |x|^(s-1/2) d^x x

    with W the Shalika intertwining of f and vol(Z_p^x) = 1.  The twisted
    vector is invariant under the depth-p^beta subgroup only, so the
    support extends down to v(x) = -beta; the two shells below that are
    computed and must vanish exactly.  The tail over large v(x) must
    repeat an exact ratio on four consecutive shells (or vanish on
    three), else an uncertified truncation is reported.
    """
    if f.size != 2:
        raise ZetaError("the zeta oracle is implemented for n = 1")
    if chi.is_ramified and chi.beta != beta:
        raise ZetaError("conductor exponent mismatch")
    # the twisted support reaches x-valuation -beta, and the inner X-shells
    # reach down to the ball around each x; anything shallower cannot be
    # certified
    shells = max(shells, beta + 2, 2)
    p = f.p
    g0 = PadicMatrix(p, [[1, -1], [0, 1]]) * PadicMatrix.diagonal(
        p, [Fraction(p) ** beta, 1])
    e11 = PadicMatrix(p, [[1, 0], [0, 0]])
    c_out = _conjugation_level(g0, e11)
    level = max(c_out, chi.beta, 1)
    mod = p ** level
    units = [u for u in range(1, mod) if u % p != 0]
    count = len(units)

    def shell_value(v: int) -> SymElem:
        total = SymElem.rational(p, 0)
        for u in units:
            x = Fraction(u) * Fraction(p) ** v
            w = ag_intertwine_value(f, PadicMatrix.diagonal(p, [x, 1]) * g0,
                                    shells)
            if w.is_zero():
                continue
            total = total + w * chi.of_unit(u)
        return total * Fraction(1, count)

    v_min = -beta - 2
    for v in (v_min, v_min + 1):
        if not shell_value(v).is_zero():
            raise TruncationError(
                "zeta shell below the twisted support does not vanish")

    s_inv = SymElem.gen(p, "S", -1) * SymElem.gen(p, "Y")
    total = SymElem.rational(p, 0)
    values = {}
    v = -beta
    while True:
        values[v] = shell_value(v)
        if v >= 3:
            tail = _certify_tail(values, v, s_inv, shells)
            if tail is not None:
                start, tail_value = tail
                for vv in range(-beta, start):
                    total = total + values[vv] * s_inv ** vv
                return ZetaResult(total + tail_value, "oracle")
        if v > 3 + shells:
            raise TruncationError("no certified geometric tail; increase shells")
        v += 1


def _certify_tail(values: dict, v: int, s_inv: SymElem, shells: int):
    """Detect an exact geometric tail ending at shell v.

    Returns (start, tail_value) when the last four shells repeat an exact
    ratio (or the last three vanish), else None.
    """
    a, b, c, d = (values[v - 3], values[v - 2], values[v - 1], values[v])
    if b.is_zero() and c.is_zero() and d.is_zero():
        if a.is_zero():
            return v - 3, a.zero_like()
        return None
    if a.is_zero() or b.is_zero() or c.is_zero():
        return None
    try:
        ratio = b / a
    except NonUnitDivision:
        return None
    if c != ratio * b or d != ratio * c:
        return None
    first = a * s_inv ** (v - 3)
    try:
        return v - 3, geometric_tail(first, ratio * s_inv)
    except DivergentSeries:
        return None


def zeta_parahoric_oracle(satake: SatakeParameter, chi: TwistCharacter,
                          shells: int) -> ZetaResult:
    """Shell-sum evaluation of the parahoric integral at n = 1, delta_f = 0.

    After the support reduction shared with the closed-form derivation
    (whose Fourier-vanishing steps are re-verified by psi_orthogonality),
    the integral is p^(beta(s-1/2)) chi(det w_1) times

        integral over t in O - 0 of
            theta_2 |.|^(s-1) (t) chi(t p^{-beta}) psi(-t p^{-beta}) dt

    with the additive measure normalised so each sphere {v(t) = k} has
    volume p^{-k}.  Shells below v = beta are finite exact sums; from
    v = beta on, psi is trivial on the shell, so the integrand is constant
    on units and the tail is an exact geometric series of ratio
    theta_2 / p^s.
    """
    if satake.n != 1:
        raise ZetaError("the parahoric oracle is implemented for n = 1")
    p = satake.p
    beta = max(1, chi.beta)
    for mult in range(1, p ** beta):
        if not psi_orthogonality(p, beta, mult):
            raise ZetaError("psi-orthogonality re-verification failed")
    theta2 = satake.theta[1]
    s_inv = SymElem.gen(p, "S", -1)
    total = SymElem.rational(p, 0)
    for v in range(beta):
        level = max(chi.beta, beta - v, 1)
        mod = p ** level
        shell = SymElem.rational(p, 0)
        psi_mod = p ** (beta - v)
        count = 0
        for u in range(1, mod):
            if u % p == 0:
                continue
            count += 1
            val = chi.of_unit(u) * CycNum.root_of_unity(psi_mod, (-u) % psi_mod)
            shell = shell + SymElem.from_cyc(p, val)
        shell = shell * Fraction(1, count)
        shell = shell * theta2 ** v * (s_inv * p) ** v * Fraction(1, p ** v)
        total = total + shell
    # tail from v = beta: psi = 1 on the shell, chi-average is exact
    avg = CycNum.from_rational(0)
    mod = p ** max(chi.beta, 1)
    count = 0
    for u in range(1, mod):
        if u % p == 0:
            continue
        count += 1
        avg = avg + chi.of_unit(u)
    avg = avg * Fraction(1, count)
    if not avg.is_zero():
        first = SymElem.from_cyc(p, avg) * (theta2 * s_inv) ** beta
        total = total + geometric_tail(first, theta2 * s_inv)
    if shells < 1:
        raise TruncationError("shells must be >= 1")
    prefactor = SymElem.gen(p, "S", beta) * SymElem.monomial(p, 1, {"Y": -beta})
    prefactor = prefactor * SymElem.from_cyc(p, chi.of(perm_sign(longest_perm(1))))
    return ZetaResult(prefactor * total, "oracle")


# ---------------------------------------------------------------------------
# interpolation factors


def ep_factor(satake: SatakeParameter, chi: TwistCharacter, j: int) -> SymElem:
    """The interpolation factor at p for a tau-normalized spin parameter.

    Ramified chi of conductor p^beta:
        (p^(n j + (n^2-n)/2) / alpha_{p,n})^beta * tau(chi)^n.
    Trivial chi:
        prod over i = n+1..2n of (1 - p^{-1} a_i^{-1}) / (1 - a_i),
    with a_i = theta_i(p) / p^(j + 1/2).
    """
    p, n = satake.p, satake.n
    ref = Refinement(satake, tau_element(n))
    if chi.is_ramified:
        beta = chi.beta
        top = SymElem.p_power(p, n * j + (n * n - n) // 2)
        return (top / hecke_eigenvalue(ref, n)) ** beta \
            * SymElem.from_cyc(p, gauss_sum(chi) ** n)
    out = SymElem.rational(p, 1)
    for i in range(n, 2 * n):
        a = satake.theta[i] * SymElem.p_power(p, Fraction(-2 * j - 1, 2))
        numer = SymElem.rational(p, 1) - a.inverse() * Fraction(1, p)
        out = out * numer
        denom_ratio = a
        if denom_ratio == SymElem.rational(p, 1):
            raise ZetaError("pole in the unramified interpolation factor")
        out = geometric_tail(out, denom_ratio)
    return out


def qprime_factor(chi: TwistCharacter, j: int, beta: int, n: int) -> SymElem:
    """Q'(pi, chi, j) = p^(beta(n j + (n^2-n)/2)) tau(chi)^n."""
    if not chi.is_ramified:
        raise ZetaError("Q' is the ramified-twist factor")
    p = chi.p
    return SymElem.p_power(p, beta * (n * j + (n * n - n) // 2)) \
        * SymElem.from_cyc(p, gauss_sum(chi) ** n)


# ---------------------------------------------------------------------------
# route comparison


class ComparisonMismatch(ZetaError):
    def __init__(self, pair_a, pair_b):
        self.pair_a = pair_a
        self.pair_b = pair_b
        super().__init__(
            f"interpolation routes disagree between {pair_a} and {pair_b}")


def _lambda_of_tB(p: int, lam, power: int) -> SymElem:
    m = len(lam.entries)
    e = sum(lam.entries[i] * (m - 1 - i) for i in range(m))
    return SymElem.p_power(p, e * power)


def _lambda_of_tQ(p: int, lam, power: int) -> SymElem:
    n = len(lam.entries) // 2
    e = sum(lam.entries[:n])
    return SymElem.p_power(p, e * power)


def comparison_constant(satake: SatakeParameter, lam, pairs, beta_for_trivial: int = 1):
    """The ratio of the Iwahori-route and parahoric-route local
    interpolation values, which must be one and the same element for
    every (chi, j) in the suite.

    The suite must be all-ramified or the singleton/trivial-character
    family (mixed suites compare different normalisations).  The global
    volume constant of the Iwahori route is carried as the formal unit
    generator UB; the parahoric route's is normalised to 1, so only the
    ratio of the two is meaningful, and its constancy is the content.
    """
    p, n = satake.p, satake.n
    ref = Refinement(satake, tau_element(n))
    upsilon_b = SymElem.gen(p, "UB")
    tb_vals = list(range(2 * n - 1, -1, -1))
    tq_vals = [1] * n + [0] * n
    ratios = []
    for chi, j in pairs:
        s_value = SymElem.p_power(p, Fraction(2 * j + 1, 2))
        if chi.is_ramified:
            beta = chi.beta
            zeta_i = zeta_iwahori_closed(w_value_closed(satake, beta, n),
                                         chi, beta, n, satake.eta).value
            zeta_i = zeta_i.substitute({"S": s_value})
            alpha_circ = _lambda_of_tB(p, lam, 1) * u_p_eigenvalue(ref)
            route_i = upsilon_b * delta_b(p, tb_vals) ** (-beta) \
                * _lambda_of_tB(p, lam, beta) * alpha_circ ** (-beta) * zeta_i
            recip_p = zeta_parahoric_reciprocal(satake, chi, chi.beta)
            recip_p = recip_p.substitute({"S": s_value})
            alpha_q_circ = _lambda_of_tQ(p, lam, 1) * hecke_eigenvalue(ref, n)
            route_p_inv = delta_b(p, tq_vals) ** beta \
                * _lambda_of_tQ(p, lam, -beta) * alpha_q_circ ** beta * recip_p
        else:
            beta = beta_for_trivial
            route_i = upsilon_b * ep_factor(satake, chi, j)
            recip_p = zeta_parahoric_reciprocal(satake, chi, 0)
            recip_p = recip_p.substitute({"S": s_value})
            alpha_q_circ = _lambda_of_tQ(p, lam, 1) * hecke_eigenvalue(ref, n)
            route_p_inv = delta_b(p, tq_vals) ** 1 \
                * _lambda_of_tQ(p, lam, -1) * alpha_q_circ ** 1 * recip_p
        ratios.append((route_i * route_p_inv, (chi, j)))
    for k in range(1, len(ratios)):
        if ratios[k][0] != ratios[0][0]:
            raise ComparisonMismatch(ratios[0][1], ratios[k][1])
    return ratios[0][0]
