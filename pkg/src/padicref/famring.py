"""Truncated Iwasawa-algebra coefficients for weight families.

A family weight coordinate is a character x -> tame(omega(x)) *
(1 + T)^(log<x> / log b), where omega is the Teichmueller character, <x>
the 1-unit part, and b the standard topological generator (1 + p for odd
p, 5 for p = 2).  We model the coefficient ring as

    Z/p^MM [[T_0, ..., T_{nvars-1}]] / (total degree >= degree)

with MM = target precision + guard digits, so that binomial coefficients
of p-adic exponents are well defined modulo the target precision.  All
reductions are exact integer arithmetic; logs are evaluated as exact
rational partial sums and reduced at the end.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


class FamringError(Exception):
    pass


def padic_log(x: int, p: int, prec: int) -> int:
    """log(x) mod p^prec for x = 1 mod p (mod 4 when p = 2)."""
    mod = p ** prec
    x %= mod
    y = x - 1
    if y % (p if p != 2 else 4) != 0:
        raise FamringError("logarithm needs a 1-unit")
    if y == 0:
        return 0
    total = Fraction(0)
    term_num = 1
    k = 1
    vy = 0
    yy = y
    while yy % p == 0:
        yy //= p
        vy += 1
    while True:
        # v_p(y^k / k) >= k*vy - log_p(k); stop when that clears prec
        bound = k * vy
        kk = k
        while kk % p == 0:
            kk //= p
            bound -= 1
        if bound >= prec and k > 1:
            break
        term_num *= y
        total += Fraction((-1) ** (k + 1) * term_num, k)
        k += 1
        if k > 8 * prec + 16:
            raise FamringError("log series failed to converge")
        term_num %= p ** (prec + 2 * k)
    den = total.denominator
    if den % p == 0:
        raise FamringError("unexpected p in log denominator")
    return total.numerator * pow(den, -1, mod) % mod


def teichmuller(x: int, p: int, prec: int) -> int:
    """The root-of-unity part of a unit, mod p^prec."""
    mod = p ** prec
    x %= mod
    if x % p == 0:
        raise FamringError("Teichmueller lift of a non-unit")
    if p == 2:
        return 1 if x % 4 == 1 else mod - 1
    out = x
    for _ in range(prec - 1):
        out = pow(out, p, mod)
    return out


def one_unit_part(x: int, p: int, prec: int) -> int:
    mod = p ** prec
    return x * pow(teichmuller(x, p, prec), -1, mod) % mod


def wild_base(p: int) -> int:
    return 5 if p == 2 else 1 + p


def wild_exponent(x: int, p: int, prec: int) -> int:
    """c(x) = log<x> / log(b) mod p^prec, an exact p-adic integer."""
    shift = 2 if p == 2 else 1
    big = prec + shift
    lx = padic_log(one_unit_part(x, p, big), p, big)
    lb = padic_log(wild_base(p), p, big)
    ps = p ** shift
    if lb % ps != 0 or lx % ps != 0:
        raise FamringError("wild logs have unexpected valuation")
    mod = p ** prec
    return (lx // ps) * pow(lb // ps, -1, mod) % mod


class FamilyRing:
    """Truncated power series ring over Z/p^MM in nvars variables."""

    def __init__(self, p: int, prec_exp: int, degree: int, nvars: int,
                 guard: int = 6):
        self.p = p
        self.target_exp = prec_exp
        self.guard = guard
        self.work_exp = prec_exp + guard
        self.modulus = p ** self.work_exp
        self.target_modulus = p ** prec_exp
        self.degree = degree
        self.nvars = nvars

    def zero(self) -> "FamSeries":
        return FamSeries(self, {})

    def one(self) -> "FamSeries":
        return self.const(1)

    def const(self, c: int) -> "FamSeries":
        c = int(c) % self.modulus
        return FamSeries(self, {(0,) * self.nvars: c} if c else {})

    def from_rational(self, x) -> "FamSeries":
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise FamringError("rational has p in the denominator")
        return self.const(x.numerator * pow(x.denominator, -1, self.modulus))

    def gen(self, i: int) -> "FamSeries":
        e = [0] * self.nvars
        e[i] = 1
        return FamSeries(self, {tuple(e): 1})

    def one_plus_t_power(self, i: int, exponent: int) -> "FamSeries":
        """(1 + T_i)^exponent for a p-adic integer exponent.

        The exponent must be supplied modulo p^(work_exp + v_p((D-1)!));
        passing it modulo a larger power is always safe.
        """
        coeffs = {}
        e0 = [0] * self.nvars
        for k in range(self.degree):
            c = comb_int(exponent, k) % self.modulus
            if c:
                e = list(e0)
                e[i] = k
                coeffs[tuple(e)] = c
        return FamSeries(self, coeffs)

    def exponent_precision(self) -> int:
        """Precision to which (1+T)^c exponents should be computed: the
        working precision plus v_p((degree-1)!), so every truncated
        binomial coefficient is well defined."""
        fact_v = 0
        for k in range(2, self.degree):
            while k % self.p == 0:
                k //= self.p
                fact_v += 1
        return self.work_exp + fact_v + 1


def comb_int(c: int, k: int) -> int:
    """c (c-1) ... (c-k+1) / k! for a nonnegative integer representative."""
    if k == 0:
        return 1
    num = 1
    for j in range(k):
        num *= c - j
    from math import factorial
    q, r = divmod(num, factorial(k))
    if r:
        raise FamringError("binomial was not integral")
    return q


class FamSeries:
    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: FamilyRing, coeffs: dict):
        self.ring = ring
        self.coeffs = {e: c % ring.modulus for e, c in coeffs.items()
                       if c % ring.modulus}

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = (out.get(e, 0) + c) % self.ring.modulus
        return FamSeries(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return FamSeries(self.ring, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def _coerce(self, other) -> "FamSeries":
        if isinstance(other, FamSeries):
            if other.ring is not self.ring:
                raise FamringError("mixed family rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.from_rational(other)
        raise TypeError(f"cannot coerce {type(other)}")

    def __mul__(self, other):
        other = self._coerce(other)
        ring = self.ring
        out = {}
        deg = ring.degree
        for e1, c1 in self.coeffs.items():
            d1 = sum(e1)
            for e2, c2 in other.coeffs.items():
                if d1 + sum(e2) >= deg:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % ring.modulus
        return FamSeries(ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def constant_term(self) -> int:
        return self.coeffs.get((0,) * self.ring.nvars, 0)

    def inverse(self) -> "FamSeries":
        c0 = self.constant_term()
        if c0 % self.ring.p == 0:
            raise FamringError("inverse of a non-unit series")
        c0_inv = pow(c0, -1, self.ring.modulus)
        rest = self * c0_inv - self.ring.one()
        # rest has constant term divisible by p^MM only through truncation,
        # so the geometric series (1 + rest)^{-1} = sum (-rest)^k terminates
        # at the truncation degree
        out = self.ring.one()
        power = self.ring.one()
        for _ in range(1, self.ring.degree):
            power = power * (-rest)
            if not power.coeffs:
                break
            out = out + power
        return out * c0_inv

    def specialize(self, values) -> int:
        """Evaluate at T_i = values[i], mod p^work_exp."""
        mod = self.ring.modulus
        total = 0
        for e, c in self.coeffs.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    term = term * pow(values[i], k, mod) % mod
            total = (total + term) % mod
        return total

    def reduce_target(self) -> "FamSeries":
        m = self.ring.target_modulus
        return FamSeries(self.ring, {e: c % m for e, c in self.coeffs.items()})

    def eq_target(self, other) -> bool:
        """Equality modulo the target precision p^M."""
        other = self._coerce(other)
        m = self.ring.target_modulus
        keys = set(self.coeffs) | set(other.coeffs)
        return all((self.coeffs.get(e, 0) - other.coeffs.get(e, 0)) % m == 0
                   for e in keys)

    def __eq__(self, other):
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in sorted(self.coeffs):
            mono = "*".join(f"T{i}^{k}" for i, k in enumerate(e) if k)
            parts.append(f"{self.coeffs[e]}{'*' + mono if mono else ''}")
        return " + ".join(parts)
