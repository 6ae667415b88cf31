"""Satake data and the classification of Iwahori p-refinements.

A refinement of an unramified principal series with regular Satake
parameter theta = (theta_1, ..., theta_2n) is labelled by a permutation
sigma; its Hecke eigenvalues are

    alpha_{p,r} = prod_{j=1}^{r} p^{(2n-2j+1)/2} * theta_{sigma(2n+1-j)}(p).

Spin refinements are those with alpha_{p,n+s} = eta(p)^s * alpha_{p,n-s}
for 0 <= s <= n-1; they are exactly the ones factoring through the
GSpin(2n+1) Hecke algebra via the cocharacter transfer of rootspin, and
there are 2^n n! of them among the (2n)!.

Everything is symbolic: theta values default to free unit monomials with
only the Shalika relation theta_i * theta_{n+i} = eta imposed, so
regularity is automatic and all identities are exact.
"""

from __future__ import annotations

from fractions import Fraction

from .perms import all_perms, block_perm, compose, identity_perm, longest_perm
from .rootspin import GLWeight, jvee_cochar, jvee_weyl, wg0_members
from .symring import SymElem


class RefineError(Exception):
    pass


class SatakeParameter:
    """theta: 2n unit values; eta: the Shalika central value.

    With the Ash-Ginzburg flag set, theta_i * theta_{n+i} = eta holds
    exactly for 1 <= i <= n (checked at construction).
    """

    __slots__ = ("p", "theta", "eta", "ag")

    def __init__(self, p: int, theta, eta: SymElem, ag: bool = True):
        self.p = p
        self.theta = tuple(theta)
        self.eta = eta
        self.ag = ag
        if len(self.theta) % 2:
            raise RefineError("need an even number of Satake values")
        if ag:
            n = len(self.theta) // 2
            for i in range(n):
                if self.theta[i] * self.theta[n + i] != eta:
                    raise RefineError(
                        f"Ash-Ginzburg relation fails at index {i + 1}")

    @property
    def n(self):
        return len(self.theta) // 2

    @classmethod
    def generic(cls, p: int, n: int, ag: bool = True) -> "SatakeParameter":
        """Free symbols X1..Xn (and eta = E); the other half is E/X_i when
        the Ash-Ginzburg relation is imposed, X_{n+i} when not."""
        eta = SymElem.gen(p, "E")
        theta = [SymElem.gen(p, f"X{i + 1}") for i in range(n)]
        if ag:
            theta += [eta / theta[i] for i in range(n)]
        else:
            theta += [SymElem.gen(p, f"X{n + i + 1}") for i in range(n)]
        return cls(p, theta, eta, ag=ag)

    def is_regular(self) -> bool:
        m = len(self.theta)
        return all(self.theta[i] != self.theta[j]
                   for i in range(m) for j in range(i + 1, m))

    def conjugate_by(self, c: tuple) -> "SatakeParameter":
        """Reindexed tuple theta'_j = theta_{c(j)} (no relation assumed)."""
        theta = tuple(self.theta[c[j]] for j in range(len(c)))
        n = self.n
        ag = all(theta[i] * theta[n + i] == self.eta for i in range(n))
        return SatakeParameter(self.p, theta, self.eta, ag=ag)

    def __repr__(self):
        return f"SatakeParameter(n={self.n}, ag={self.ag})"


class Refinement:
    """A Satake parameter together with the labelling Weyl element."""

    __slots__ = ("satake", "sigma")

    def __init__(self, satake: SatakeParameter, sigma: tuple):
        self.satake = satake
        self.sigma = tuple(sigma)
        if len(self.sigma) != 2 * satake.n:
            raise RefineError("Weyl element has wrong size")

    @property
    def p(self):
        return self.satake.p

    @property
    def n(self):
        return self.satake.n

    def __repr__(self):
        return f"Refinement(sigma={self.sigma})"


def all_refinements(satake: SatakeParameter):
    return [Refinement(satake, sigma) for sigma in all_perms(2 * satake.n)]


# ---------------------------------------------------------------------------
# eigenvalues


def hecke_eigenvalue(ref: Refinement, r: int) -> SymElem:
    """alpha_{p,r} as an exact monomial (Y carries the half p-powers)."""
    n2 = 2 * ref.n
    if not 1 <= r <= n2 - 1:
        raise RefineError("Hecke index out of range")
    out = SymElem.rational(ref.p, 1)
    for j in range(1, r + 1):
        out = out * SymElem.monomial(ref.p, 1, {"Y": n2 - 2 * j + 1})
        out = out * ref.satake.theta[ref.sigma[n2 - j]]
    return out


def u_p_eigenvalue(ref: Refinement) -> SymElem:
    """alpha_p = alpha_{p,1} ... alpha_{p,2n-1}."""
    out = SymElem.rational(ref.p, 1)
    for r in range(1, 2 * ref.n):
        out = out * hecke_eigenvalue(ref, r)
    return out


def central_eigenvalue(ref: Refinement) -> SymElem:
    """Action of diag(p, ..., p): the product of all Satake values."""
    out = SymElem.rational(ref.p, 1)
    for t in ref.satake.theta:
        out = out * t
    return out


def integral_eigenvalue(ref: Refinement, r: int, lam: GLWeight) -> SymElem:
    """alpha^circ_{p,r} = p^(lam_1 + ... + lam_r) * alpha_{p,r}."""
    if not lam.is_dominant():
        raise RefineError("integral normalisation needs a dominant weight")
    e = sum(lam.entries[:r])
    return SymElem.p_power(ref.p, e) * hecke_eigenvalue(ref, r)


def monomial_valuation(e: SymElem, vals: dict, p: int) -> Fraction:
    """Valuation of a unit monomial under an assignment of generator
    valuations; Y defaults to 1/2."""
    mono = e.as_monomial()
    if mono is None:
        raise RefineError("valuation needs a monomial")
    coeff, exps = mono
    from .padiclin import vp
    total = Fraction(vp(coeff.as_rational(), p))
    table = dict(vals)
    table.setdefault("Y", Fraction(1, 2))
    for name, k in exps.items():
        if name not in table:
            raise RefineError(f"no valuation assigned to generator {name}")
        total += Fraction(table[name]) * k
    return total


# ---------------------------------------------------------------------------
# spin classification


def is_spin(ref: Refinement) -> bool:
    """alpha_{p,n+s} = eta^s alpha_{p,n-s} for all 0 <= s <= n-1."""
    if not ref.satake.is_regular():
        raise RefineError("spin classification needs a regular Satake parameter")
    n = ref.n
    eta = ref.satake.eta
    for s in range(1, n):
        if hecke_eigenvalue(ref, n + s) != eta ** s * hecke_eigenvalue(ref, n - s):
            return False
    return True


def tau_element(n: int) -> tuple:
    """tau = diag(1_n, w_n) in S_{2n}."""
    return block_perm(longest_perm(n), n)


def delta_weyl(ref: Refinement, base_theta) -> tuple:
    """The pattern of ref's eigenvalues relative to a base Satake tuple:
    the unique permutation c with base_theta[c(i)] = theta[sigma(i)]."""
    theta = ref.satake.theta
    m = len(theta)
    out = []
    for i in range(m):
        val = theta[ref.sigma[i]]
        matches = [k for k in range(m) if base_theta[k] == val]
        if len(matches) != 1:
            raise RefineError("base tuple is not regular")
        out.append(matches[0])
    return tuple(out)


def delta_theta_tau(ref: Refinement) -> tuple:
    """Pattern relative to the Asgari-Shahidi reordering theta^tau."""
    tau = tau_element(ref.n)
    base = tuple(ref.satake.theta[tau[i]] for i in range(2 * ref.n))
    return delta_weyl(ref, base)


class GSpinEigensystem:
    """Image of a spin refinement in the GSpin Hecke algebra.

    u_values[r] is the eigenvalue of the depth-r operator (1 <= r <= n);
    v_value is the eigenvalue of the central operator, equal to eta(p).
    """

    __slots__ = ("p", "n", "u_values", "v_value", "_ref")

    def __init__(self, p, n, u_values, v_value, ref):
        self.p = p
        self.n = n
        self.u_values = u_values
        self.v_value = v_value
        self._ref = ref

    def eigenvalue_via_transfer(self, r: int) -> SymElem:
        """The GL eigenvalue alpha_{p,r} recomputed through the GSpin side.

        The cocharacter of U_{p,r} is pushed through jvee, acted on by the
        transferred Weyl element, and paired against the GSpin Satake
        values (y_0 = eta, y_i = theta_i); the p-power prefactor is
        Y^(r(2n-r)) from the half-sum of positive roots.
        """
        ref = self._ref
        n, n2 = self.n, 2 * self.n
        sig = delta_theta_tau(ref)
        w2n = longest_perm(n2)
        omega = jvee_weyl(compose(sig, w2n))
        nu = tuple(1 if k < r else 0 for k in range(n2))
        c = omega.act_cochar(jvee_cochar(nu))
        out = SymElem.monomial(self.p, 1, {"Y": r * (n2 - r)})
        ys = [self.v_value] + [ref.satake.theta[i] for i in range(n)]
        for i, e in enumerate(c):
            if e:
                out = out * ys[i] ** int(e)
        return out


def gspin_factorization(ref: Refinement):
    """The GSpin eigensystem when ref is spin, else None.

    Checks the defining relations alpha(U_{p,n+s}) = eta^s alpha(U_{p,n-s})
    and the central relation (the diag(p,...,p) operator acts by eta^n).
    """
    if not is_spin(ref):
        return None
    n = ref.n
    eta = ref.satake.eta
    u_values = {r: hecke_eigenvalue(ref, r) for r in range(1, n + 1)}
    for s in range(1, n):
        if hecke_eigenvalue(ref, n + s) != eta ** s * u_values[n - s]:
            raise RefineError("spin relations violated after classification")
    if central_eigenvalue(ref) != eta ** n:
        raise RefineError("central character is not eta^n")
    return GSpinEigensystem(ref.p, n, u_values, eta, ref)


def shalika_admissible(theta, eta: SymElem):
    """A pairing nu with theta_i * theta_{nu(i)} = eta, or None.

    Searches for a perfect matching on {0, ..., 2n-1} along edges where
    the product of the two values is eta; the two sides of the matching
    are the blocks X_1, X_2 of the induced decomposition.
    """
    theta = list(theta)
    m = len(theta)
    pairs = [[theta[i] * theta[j] == eta for j in range(m)] for i in range(m)]

    def match(rem):
        if not rem:
            return {}
        i = rem[0]
        rest = rem[1:]
        for j in rest:
            if pairs[i][j]:
                sub = match(tuple(x for x in rest if x != j))
                if sub is not None:
                    sub[i] = j
                    return sub
        return None

    return match(tuple(range(m)))


def normalize_satake(ref: Refinement):
    """Reorder theta so that the refinement's pattern becomes tau.

    Returns (satake', conjugator); satake' is a Weyl conjugate of the
    input satisfying the Ash-Ginzburg relation, and the refinement
    (satake', tau) has the same eigenvalues as ref.
    """
    if not is_spin(ref):
        raise RefineError("only spin refinements can be tau-normalized")
    tau = tau_element(ref.n)
    c = compose(ref.sigma, tau)
    sat = ref.satake.conjugate_by(c)
    if not sat.ag:
        raise RefineError("normalization failed to restore the Shalika relation")
    new_ref = Refinement(sat, tau)
    for r in range(1, 2 * ref.n):
        if hecke_eigenvalue(new_ref, r) != hecke_eigenvalue(ref, r):
            raise RefineError("normalization changed the eigenvalues")
    return sat, c


def noncritical_slope(ref: Refinement, lam: GLWeight, valuations: dict) -> bool:
    """v_p(alpha^circ_{p,r}) < lam_r - lam_{r+1} + 1 for 1 <= r <= 2n-1."""
    n2 = 2 * ref.n
    for r in range(1, n2):
        v = monomial_valuation(integral_eigenvalue(ref, r, lam), valuations, ref.p)
        if not v < lam.entries[r - 1] - lam.entries[r] + 1:
            return False
    return True


def spin_refinements(satake: SatakeParameter):
    return [ref for ref in all_refinements(satake) if is_spin(ref)]


def spin_census(p: int, n: int):
    """(number of refinements, number of spin refinements) for generic theta."""
    sat = SatakeParameter.generic(p, n)
    refs = all_refinements(sat)
    return len(refs), sum(1 for ref in refs if is_spin(ref))
