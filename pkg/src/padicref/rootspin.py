"""Root data and Weyl combinatorics for GL(2n) and GSpin(2n+1).

Weights of the GL(2n) torus are integer (or half-integer) vectors of
length 2n acted on by S_{2n} via (lam^sigma)_i = lam_{sigma(i)}.  A weight
is pure when lam_i + lam_{2n+1-i} is a single constant sw.  On the GSpin
side the character lattice has basis f_0, ..., f_n, with Weyl group
{+-1}^n x| S_n acting through the explicit formulas below.

The transfer map jmap embeds the GSpin lattice into the pure GL weights
(f_i -> e_i - e_{2n-i+1}, f_0 -> e_{n+1} + ... + e_{2n}) and induces an
isomorphism of the GSpin Weyl group onto the purity-preserving subgroup
W_G^0 of S_{2n}; jvee is its inverse, and also the induced map on
cocharacters.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .perms import all_perms, compose, identity_perm, inverse_perm, transposition
from .symring import SymElem


class RootDataError(Exception):
    pass


# ---------------------------------------------------------------------------
# weights


class GLWeight:
    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = tuple(Fraction(x) for x in entries)
        if len(self.entries) % 2:
            raise RootDataError("GL weight must have even length")

    @property
    def n(self):
        return len(self.entries) // 2

    def is_dominant(self) -> bool:
        return all(a >= b for a, b in zip(self.entries, self.entries[1:]))

    def is_pure(self) -> bool:
        m = len(self.entries)
        sums = {self.entries[i] + self.entries[m - 1 - i] for i in range(m // 2)}
        return len(sums) == 1

    def purity_weight(self) -> Fraction:
        if not self.is_pure():
            raise RootDataError(f"weight {self.entries} is not pure")
        return self.entries[0] + self.entries[-1]

    def act(self, sigma: tuple) -> "GLWeight":
        """Left action: sigma sends e_i to e_{sigma(i)}, so the coordinate
        at position sigma(i) of the image is the old coordinate at i."""
        out = [None] * len(sigma)
        for i in range(len(sigma)):
            out[sigma[i]] = self.entries[i]
        return GLWeight(out)

    def pair(self, cochar: tuple) -> Fraction:
        return sum(a * Fraction(b) for a, b in zip(self.entries, cochar))

    def __eq__(self, other):
        return isinstance(other, GLWeight) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return f"GLWeight{self.entries}"


class GSpinWeight:
    """Coordinates (c0, c1, ..., cn) with respect to f_0, f_1, ..., f_n."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        self.coords = tuple(Fraction(x) for x in coords)

    @property
    def n(self):
        return len(self.coords) - 1

    def __eq__(self, other):
        return isinstance(other, GSpinWeight) and self.coords == other.coords

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        return f"GSpinWeight{self.coords}"

    def pair(self, cochar: tuple) -> Fraction:
        return sum(a * Fraction(b) for a, b in zip(self.coords, cochar))


def rho_gl(n: int) -> GLWeight:
    m = 2 * n
    return GLWeight([Fraction(m + 1 - 2 * k, 2) for k in range(1, m + 1)])


def rho_gspin(n: int) -> GSpinWeight:
    return GSpinWeight([0] + [Fraction(2 * n + 1 - 2 * i, 2) for i in range(1, n + 1)])


def regular_pure_weight(n: int) -> GLWeight:
    """(2n-1, 2n-3, ..., 1-2n): distinct entries force faithfulness."""
    return GLWeight([2 * n - 1 - 2 * k for k in range(2 * n)])


# ---------------------------------------------------------------------------
# the GSpin Weyl group


class WeylGSpin:
    """(perm, signs): apply the sign changes first, then the permutation.

    The action on the weight lattice Z f_0 + ... + Z f_n is
        f_0 -> f_0 + sum_{signs[i] = -1} f_{perm(i)+1},
        f_i -> signs[i-1] * f_{perm(i-1)+1}         (1 <= i <= n),
    and on the cocharacter lattice
        f_0^* -> f_0^*,
        f_i^* -> f_{perm(i-1)+1}^*                   if signs[i-1] = +1,
        f_i^* -> f_0^* - f_{perm(i-1)+1}^*           if signs[i-1] = -1.
    """

    __slots__ = ("perm", "signs")

    def __init__(self, perm: tuple, signs: tuple):
        self.perm = tuple(perm)
        self.signs = tuple(signs)
        if len(self.perm) != len(self.signs):
            raise RootDataError("permutation/sign length mismatch")
        if any(s not in (1, -1) for s in self.signs):
            raise RootDataError("signs must be +-1")

    @property
    def n(self):
        return len(self.perm)

    @classmethod
    def identity(cls, n: int) -> "WeylGSpin":
        return cls(identity_perm(n), (1,) * n)

    @classmethod
    def sign_change(cls, n: int, i: int) -> "WeylGSpin":
        """sgn_{i+1} (0-indexed i)."""
        signs = [1] * n
        signs[i] = -1
        return cls(identity_perm(n), tuple(signs))

    @classmethod
    def from_perm(cls, perm: tuple) -> "WeylGSpin":
        return cls(perm, (1,) * len(perm))

    def weight_matrix(self):
        """Columns are the images of f_0, ..., f_n."""
        n = self.n
        mat = [[0] * (n + 1) for _ in range(n + 1)]
        mat[0][0] = 1
        for i in range(n):
            mat[self.perm[i] + 1][i + 1] = self.signs[i]
            if self.signs[i] == -1:
                mat[self.perm[i] + 1][0] += 1
        return mat

    def cochar_matrix(self):
        """Columns are the images of f_0^*, ..., f_n^*."""
        n = self.n
        mat = [[0] * (n + 1) for _ in range(n + 1)]
        mat[0][0] = 1
        for i in range(n):
            mat[self.perm[i] + 1][i + 1] = self.signs[i]
            if self.signs[i] == -1:
                mat[0][i + 1] = 1
        return mat

    def act_weight(self, mu: GSpinWeight) -> GSpinWeight:
        mat = self.weight_matrix()
        n = self.n
        out = [sum(Fraction(mat[r][c]) * mu.coords[c] for c in range(n + 1))
               for r in range(n + 1)]
        return GSpinWeight(out)

    def act_cochar(self, nu: tuple) -> tuple:
        mat = self.cochar_matrix()
        n = self.n
        return tuple(sum(mat[r][c] * nu[c] for c in range(n + 1)) for r in range(n + 1))

    def __mul__(self, other: "WeylGSpin") -> "WeylGSpin":
        """Composite self after other, recovered from the weight action."""
        n = self.n
        a, b = self.weight_matrix(), other.weight_matrix()
        comp = [[sum(a[r][k] * b[k][c] for k in range(n + 1)) for c in range(n + 1)]
                for r in range(n + 1)]
        perm = [None] * n
        signs = [None] * n
        for i in range(n):
            col = [comp[r][i + 1] for r in range(1, n + 1)]
            nz = [r for r, x in enumerate(col) if x]
            if len(nz) != 1 or col[nz[0]] not in (1, -1):
                raise RootDataError("composite is not a signed permutation")
            perm[i] = nz[0]
            signs[i] = col[nz[0]]
        out = WeylGSpin(tuple(perm), tuple(signs))
        if out.weight_matrix() != comp:
            raise RootDataError("composition law violated the f_0 column")
        return out

    def __eq__(self, other):
        return (isinstance(other, WeylGSpin) and self.perm == other.perm
                and self.signs == other.signs)

    def __hash__(self):
        return hash((self.perm, self.signs))

    def __repr__(self):
        return f"WeylGSpin(perm={self.perm}, signs={self.signs})"


def all_weyl_gspin(n: int):
    out = []
    for perm in all_perms(n):
        for signs in product((1, -1), repeat=n):
            out.append(WeylGSpin(perm, signs))
    return out


# ---------------------------------------------------------------------------
# transfer maps


def jmap_weight(mu: GSpinWeight) -> GLWeight:
    """f_i -> e_i - e_{2n-i+1}, f_0 -> e_{n+1} + ... + e_{2n}."""
    n = mu.n
    lam = [Fraction(0)] * (2 * n)
    for i in range(1, n + 1):
        lam[i - 1] += mu.coords[i]
        lam[2 * n - i] -= mu.coords[i]
    for k in range(n, 2 * n):
        lam[k] += mu.coords[0]
    return GLWeight(lam)


def jmap_weight_inverse(lam: GLWeight) -> GSpinWeight:
    """The unique preimage of a pure weight (purity weight goes to f_0)."""
    sw = lam.purity_weight()
    n = lam.n
    return GSpinWeight([sw] + [lam.entries[i] for i in range(n)])


def jmap_weyl(omega: WeylGSpin) -> tuple:
    """The permutation of S_{2n} acting on pure weights like omega.

    Determined by matching the action on a regular pure weight, which has
    distinct entries; equivariance of jmap on all of the lattice is a
    tested invariant, and jmap is then a group homomorphism because both
    sides act faithfully on the left.
    """
    n = omega.n
    mu_reg = GSpinWeight([0] + [2 * (n - i) + 1 for i in range(n)])
    lam_reg = jmap_weight(mu_reg)
    lam_img = jmap_weight(omega.act_weight(mu_reg))
    index = {v: k for k, v in enumerate(lam_img.entries)}
    return tuple(index[v] for v in lam_reg.entries)


def wg0_members(n: int) -> set:
    """All sigma in S_{2n} preserving purity of a generic pure weight."""
    if n > 4:
        raise RootDataError("exhaustive enumeration limited to n <= 4")
    lam = regular_pure_weight(n)
    return {sigma for sigma in all_perms(2 * n) if lam.act(sigma).is_pure()}


def _jvee_table(n: int) -> dict:
    return {jmap_weyl(w): w for w in all_weyl_gspin(n)}


_JVEE_CACHE: dict = {}


def jvee_weyl(sigma: tuple) -> WeylGSpin:
    """Inverse of jmap_weyl; raises for sigma outside W_G^0."""
    n = len(sigma) // 2
    table = _JVEE_CACHE.get(n)
    if table is None:
        table = _jvee_table(n)
        _JVEE_CACHE[n] = table
    try:
        return table[tuple(sigma)]
    except KeyError:
        raise RootDataError(f"{sigma} is not in W_G^0") from None


def jvee_cochar(nu: tuple) -> tuple:
    """Sum over i of <jmap(f_i), nu> f_i^*, for nu a GL cocharacter."""
    m = len(nu)
    if m % 2:
        raise RootDataError("cocharacter must have even length")
    n = m // 2
    out = []
    for i in range(n + 1):
        basis = [Fraction(0)] * (n + 1)
        basis[i] = Fraction(1)
        out.append(jmap_weight(GSpinWeight(basis)).pair(nu))
    return tuple(out)


def act_cochar_gl(nu: tuple, sigma: tuple) -> tuple:
    """Left action of S_{2n} on cocharacters, matching GLWeight.act."""
    out = [None] * len(sigma)
    for k in range(len(sigma)):
        out[sigma[k]] = nu[k]
    return tuple(out)


# ---------------------------------------------------------------------------
# modulus character


def delta_b(p: int, valuations, half: bool = False) -> SymElem:
    """delta_B(t) = prod |t_k|^(m+1-2k) for t = diag with given valuations.

    With half=True returns delta_B^(1/2); half-integer powers of p go
    through the Y generator.
    """
    vals = list(valuations)
    m = len(vals)
    exponent = -sum(Fraction(v) * (m + 1 - 2 * (k + 1)) for k, v in enumerate(vals))
    if half:
        exponent = exponent / 2
    return SymElem.p_power(p, exponent)


def delta_b_matrix(t, half: bool = False) -> SymElem:
    return delta_b(t.p, t.diagonal_valuations(), half=half)
