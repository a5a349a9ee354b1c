"""Connections, Hochschild cochain calculus, and multiplicative liftings.

A connection is given on the differentials of the alphabet (generators,
plus the formal inverse for laurent presentations) and extended by
nabla(d(uv)) = nabla(du) v + du dv + u nabla(dv).  From it the recursion
builds 1-cochains phi_0, phi_2, phi_4, ... whose partial sums are linear
sections of the projection from even forms back to the algebra with
curvature vanishing below form degree 2(n+1).

Idempotent lifting over Z/p^N uses the series sum binom(2n-1, n) x^n with
x = e - e^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraElement, AlgebraPresentation, Monomial
from .errors import InvalidConnection, NotApproxIdempotent, WrongDegree
from .ncforms import (Form, MixedForm, fedosov_mixed, form_multiply,
                      mixed_differential, mixed_multiply)
from .scalars import PrimeConfig


def _mono_form(A, m: Monomial) -> Form:
    return Form(A, 0, {(m,): Fraction(1)})


def _left_mul(m: Monomial, x: MixedForm) -> MixedForm:
    return mixed_multiply(MixedForm.of(_mono_form(x.presentation, m)), x)


def _right_mul(x: MixedForm, m: Monomial) -> MixedForm:
    return mixed_multiply(x, MixedForm.of(_mono_form(x.presentation, m)))


class Cochain:
    """A cochain of arity 1 or 2 with values in mixed differential forms.

    Values are stored on tuples of basis monomials up to ``domain_bound``
    (sum of filtration degrees); evaluation extends multilinearly.  Arity
    3 only arises as the target of the coboundary of a 2-cochain.
    """

    def __init__(self, presentation, arity, values, domain_bound):
        if arity not in (1, 2, 3):
            raise ValueError("arity must be 1, 2, or 3")
        self.presentation = presentation
        self.arity = arity
        self.values = dict(values)
        self.domain_bound = domain_bound

    @classmethod
    def from_function(cls, A, arity, func, domain_bound):
        monos = A.monomials_up_to(domain_bound)
        values = {}
        if arity == 1:
            for m in monos:
                values[(m,)] = func(m)
        else:
            for x in monos:
                dx = A.degree(x)
                for y in monos:
                    if dx + A.degree(y) <= domain_bound:
                        values[(x, y)] = func(x, y)
        return cls(A, arity, values, domain_bound)

    def __call__(self, *args) -> MixedForm:
        return self.values[args]

    def eval_element(self, x: AlgebraElement) -> MixedForm:
        """Linear extension along the first (only) argument; arity 1."""
        out = MixedForm(self.presentation)
        for m, c in x.terms.items():
            out = out + self.values[(m,)].scale(c)
        return out


def identity_cochain(A: AlgebraPresentation, domain_bound: int) -> Cochain:
    return Cochain.from_function(
        A, 1, lambda m: MixedForm.of(_mono_form(A, m)), domain_bound)


def d_cochain(phi: Cochain) -> Cochain:
    """Post-compose a cochain with the differential."""
    return Cochain(phi.presentation, phi.arity,
                   {k: mixed_differential(v) for k, v in phi.values.items()},
                   phi.domain_bound)


def cup(psi: Cochain, xi: Cochain) -> Cochain:
    """(psi u xi)(x, y) = psi(x) xi(y) with form multiplication."""
    if psi.arity != 1 or xi.arity != 1:
        raise WrongDegree("cup is implemented for pairs of 1-cochains")
    A = psi.presentation
    bound = min(psi.domain_bound, xi.domain_bound)
    values = {}
    for (x,) in psi.values:
        dx = A.degree(x)
        for (y,) in xi.values:
            if dx + A.degree(y) <= bound:
                values[(x, y)] = mixed_multiply(psi(x), xi(y))
    return Cochain(A, 2, values, bound)


def hochschild_delta(psi: Cochain) -> Cochain:
    """Hochschild coboundary.

    Arity 1: (d phi)(x, y) = x phi(y) - phi(xy) + phi(x) y.
    Arity 2: (d psi)(x, y, z) =
        x psi(y, z) - psi(xy, z) + psi(x, yz) - psi(x, y) z.
    The arity-2 coboundary is returned as a map on triples with the same
    evaluation interface.
    """
    if psi.arity == 3:
        raise WrongDegree("the coboundary is implemented up to 2-cochains")
    A = psi.presentation
    bound = psi.domain_bound
    monos = A.monomials_up_to(bound)

    if psi.arity == 1:
        values = {}
        for x in monos:
            dx = A.degree(x)
            for y in monos:
                if dx + A.degree(y) > bound:
                    continue
                prod = AlgebraElement(A, {x: 1}) * AlgebraElement(A, {y: 1})
                mid = MixedForm(A)
                for m, c in prod.terms.items():
                    mid = mid + psi(m).scale(c)
                values[(x, y)] = (_left_mul(x, psi(y)) - mid
                                  + _right_mul(psi(x), y))
        return Cochain(A, 2, values, bound)

    values = {}
    for x in monos:
        dx = A.degree(x)
        for y in monos:
            dy = A.degree(y)
            if dx + dy > bound:
                continue
            for z in monos:
                if dx + dy + A.degree(z) > bound:
                    continue
                xy = AlgebraElement(A, {x: 1}) * AlgebraElement(A, {y: 1})
                yz = AlgebraElement(A, {y: 1}) * AlgebraElement(A, {z: 1})
                t1 = _left_mul(x, psi(y, z))
                t2 = MixedForm(A)
                for m, c in xy.terms.items():
                    t2 = t2 + psi(m, z).scale(c)
                t3 = MixedForm(A)
                for m, c in yz.terms.items():
                    t3 = t3 + psi(x, m).scale(c)
                t4 = _right_mul(psi(x, y), z)
                values[(x, y, z)] = t1 - t2 + t3 - t4
    return Cochain(A, 3, values, bound)


def curvature(f: Cochain, x: Monomial, y: Monomial) -> MixedForm:
    """f(xy) - f(x) (.) f(y), the obstruction to multiplicativity.

    The target carries the Fedosov product, under which degree-0 forms
    multiply as in the algebra.
    """
    A = f.presentation
    prod = AlgebraElement(A, {x: 1}) * AlgebraElement(A, {y: 1})
    return f.eval_element(prod) - fedosov_mixed(f(x), f(y))


# ---------------------------------------------------------------------------
# Connections
# ---------------------------------------------------------------------------


class Connection:
    """Connection data: a degree-2 form nabla(d a) per alphabet letter.

    For laurent presentations the value on the formal inverse is derived
    from d(1) = 0:  nabla(d t^-1) = -t^-1 (nabla(dt) t^-1 + dt dt^-1).
    """

    def __init__(self, A: AlgebraPresentation, values=None):
        self.presentation = A
        vals = {}
        for name in A.generators:
            g = A.generator_monomial(name)
            v = (values or {}).get(name)
            vals[g] = v if v is not None else Form(A, 2)
        if A.kind == "laurent":
            t = A.generator_monomial(A.generators[0])
            tinv = Monomial((-1,))
            dt = Form.d_of_monomial(A, t)
            dtinv = Form.d_of_monomial(A, tinv)
            inner = (form_multiply(vals[t], _mono_form(A, tinv))
                     + form_multiply(dt, dtinv))
            vals[tinv] = form_multiply(_mono_form(A, tinv), inner).scale(-1)
        self.values = vals
        self._cache = {}

    def nabla_d(self, m: Monomial) -> Form:
        """nabla(dm) via the canonical word of m."""
        try:
            return self._cache[m]
        except KeyError:
            pass
        A = self.presentation
        word = A.word_of(m)
        if not word:
            result = Form(A, 2)  # d(unit) = 0
        else:
            result = self.values[word[0]]
            acc = word[0]
            for letter in word[1:]:
                # nabla(d(u v)) = nabla(du) v + du dv + u nabla(dv)
                du = Form.d_of_monomial(A, acc)
                dv = Form.d_of_monomial(A, letter)
                result = (form_multiply(result, _mono_form(A, letter))
                          + form_multiply(du, dv)
                          + form_multiply(_mono_form(A, acc),
                                          self.values[letter]))
                (acc,) = list((AlgebraElement(A, {acc: 1})
                               * AlgebraElement(A, {letter: 1})).terms)
        self._cache[m] = result
        return result


def connection_extend(nabla: Connection, omega: Form) -> Form:
    """Extend nabla to a 1-form by nabla(x0 dx1) = x0 nabla(d x1)."""
    if omega.degree != 1:
        raise WrongDegree("connections act on 1-forms")
    A = omega.presentation
    out = Form(A, 2)
    for (head, slot), c in omega.terms.items():
        out = out + form_multiply(_mono_form(A, head),
                                  nabla.nabla_d(slot)).scale(c)
    return out


# ---------------------------------------------------------------------------
# The phi/psi recursion
# ---------------------------------------------------------------------------


class LiftingTower:
    """Lazily evaluated cochains phi_0, phi_2, ... from a connection.

    phi_2 is the signed connection propagation fixed by
    delta(phi_2) = d u d; for n >= 1,

        psi_{2(n+1)} = sum_j d phi_{2j} u d phi_{2(n-j)}
                       - sum_{j>=1} phi_{2j} u phi_{2(n+1-j)},
        phi_{2(n+1)}(x) = sum x0 psi_{2(n+1)}(x1, x2)
                          over the tuples of phi_2(x).
    """

    def __init__(self, nabla: Connection, sign: int):
        self.presentation = nabla.presentation
        self.nabla = nabla
        self.sign = sign
        self._phi = {}
        self._psi = {}

    def phi(self, k: int, m: Monomial) -> MixedForm:
        A = self.presentation
        key = (k, m)
        try:
            return self._phi[key]
        except KeyError:
            pass
        if k == 0:
            out = MixedForm.of(_mono_form(A, m))
        elif k == 1:
            out = MixedForm.of(self.nabla.nabla_d(m).scale(self.sign))
        else:
            out = MixedForm(A)
            for (x0, x1, x2), c in self.phi(1, m).component(2).terms.items():
                val = self.psi(k, x1, x2).scale(c)
                out = out + _left_mul(x0, val)
        self._phi[key] = out
        return out

    def psi(self, k: int, x: Monomial, y: Monomial) -> MixedForm:
        """psi_{2k} for k >= 2 (k = n+1 in the recursion)."""
        key = (k, x, y)
        try:
            return self._psi[key]
        except KeyError:
            pass
        n = k - 1
        out = MixedForm(self.presentation)
        for j in range(0, n + 1):
            out = out + mixed_multiply(
                mixed_differential(self.phi(j, x)),
                mixed_differential(self.phi(n - j, y)))
        for j in range(1, n + 1):
            out = out - mixed_multiply(self.phi(j, x),
                                       self.phi(n + 1 - j, y))
        self._psi[key] = out
        return out

    def phi_cochain(self, k: int, domain_bound: int) -> Cochain:
        return Cochain.from_function(self.presentation, 1,
                                     lambda m: self.phi(k, m), domain_bound)

    def cochains(self, n_max: int, domain_bound: int) -> list:
        """The 1-cochains phi_0, phi_2, ..., phi_{2 n_max}."""
        return [self.phi_cochain(k, domain_bound)
                for k in range(n_max + 1)]

    def psi_cochain(self, k: int, domain_bound: int) -> Cochain:
        return Cochain.from_function(self.presentation, 2,
                                     lambda x, y: self.psi(k, x, y),
                                     domain_bound)

    def section(self, n: int, m: Monomial) -> MixedForm:
        """sigma = phi_0 + phi_2 + ... + phi_{2n} at a monomial."""
        out = MixedForm(self.presentation)
        for k in range(n + 1):
            out = out + self.phi(k, m)
        return out

    def section_element(self, n: int, x: AlgebraElement) -> MixedForm:
        out = MixedForm(self.presentation)
        for m, c in x.terms.items():
            out = out + self.section(n, m).scale(c)
        return out


def _dcupd(A: AlgebraPresentation, x: Monomial, y: Monomial) -> MixedForm:
    return MixedForm.of(form_multiply(Form.d_of_monomial(A, x),
                                      Form.d_of_monomial(A, y)))


def _check_phi2(tower: LiftingTower, pairs) -> bool:
    A = tower.presentation
    for x, y in pairs:
        prod = AlgebraElement(A, {x: 1}) * AlgebraElement(A, {y: 1})
        mid = MixedForm(A)
        for m, c in prod.terms.items():
            mid = mid + tower.phi(1, m).scale(c)
        lhs = (_left_mul(x, tower.phi(1, y)) - mid
               + _right_mul(tower.phi(1, x), y))
        if lhs != _dcupd(A, x, y):
            return False
    return True


def phi_psi_recursion(nabla: Connection, n_max: int,
                      cap: int) -> LiftingTower:
    """Build the tower of cochains, fixing the sign of phi_2 first.

    The sign is chosen on generator pairs so that delta(phi_2) = d u d,
    then validated on every monomial pair of total degree <= cap;
    failure raises :class:`InvalidConnection`.
    """
    A = nabla.presentation
    alphabet = list(nabla.values)
    gen_pairs = [(a, b) for a in alphabet for b in alphabet]
    tower = None
    for sign in (-1, 1):
        cand = LiftingTower(nabla, sign)
        if _check_phi2(cand, gen_pairs):
            tower = cand
            break
    if tower is None:
        raise InvalidConnection("delta(phi_2) != d u d on generator pairs "
                                "for either sign")
    monos = A.monomials_up_to(cap)
    pairs = [(x, y) for x in monos for y in monos
             if A.degree(x) + A.degree(y) <= cap]
    if not _check_phi2(tower, pairs):
        raise InvalidConnection("delta(phi_2) != d u d within the cap")
    for k in range(2, n_max + 1):
        for m in monos:
            tower.phi(k, m)
    return tower


# ---------------------------------------------------------------------------
# Curvature of the truncated sections
# ---------------------------------------------------------------------------


def _form_weight(A, mixed: MixedForm):
    worst = 0
    for f in mixed.parts.values():
        for key in f.terms:
            worst = max(worst, sum(A.degree(m) for m in key))
    return worst


@dataclass(frozen=True)
class CurvatureReport:
    order: int
    ok: bool
    max_bad_degree: int | None
    degree_constant: int
    pairs_checked: int


def section_curvature_check(tower: LiftingTower, n: int,
                            cap: int) -> CurvatureReport:
    """Check phi_{<=2n} is a section whose curvature starts in degree
    2(n+1).

    Also measures the filtration constant a with
    phi_{2k}(F_i) <= F_{i+(2k-1)a} of the even forms.
    """
    A = tower.presentation
    monos = A.monomials_up_to(cap)
    bad = None
    checked = 0
    for x in monos:
        dx = A.degree(x)
        for y in monos:
            if dx + A.degree(y) > cap:
                continue
            checked += 1
            prod = AlgebraElement(A, {x: 1}) * AlgebraElement(A, {y: 1})
            curv = (tower.section_element(n, prod)
                    - fedosov_mixed(tower.section(n, x),
                                    tower.section(n, y)))
            for deg in curv.degrees():
                if deg < 2 * (n + 1):
                    bad = deg if bad is None else max(bad, deg)
    a = 0
    for k in range(1, n + 1):
        for m in monos:
            i = A.degree(m)
            if i == 0:
                continue
            w = _form_weight(A, tower.phi(k, m))
            if w > i:
                a = max(a, -((i - w) // (2 * k - 1)))
    return CurvatureReport(n, bad is None, bad, a, checked)


# ---------------------------------------------------------------------------
# Idempotent lifting over Z/p^N
# ---------------------------------------------------------------------------


def _mat_mul(a, b, q):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % q
             for j in range(n)] for i in range(n)]


def _mat_combine(ca, a, cb, b, q):
    n = len(a)
    return [[(ca * a[i][j] + cb * b[i][j]) % q for j in range(n)]
            for i in range(n)]


def lift_idempotent(e, cfg: PrimeConfig, N: int | None = None):
    """Lift an idempotent mod p to an exact idempotent mod p^N.

    e must satisfy e^2 = e mod p; the lift is
    e + (2e - 1) sum_{n=1}^{N} binom(2n-1, n) x^n with x = e - e^2,
    which is idempotent mod p^N because val(x) >= 1.
    """
    if N is None:
        N = cfg.default_precision
    p, q = cfg.p, cfg.p ** N
    e = [[int(v) % q for v in row] for row in e]
    n = len(e)
    if any(len(row) != n for row in e):
        raise ValueError("matrix must be square")
    e2 = _mat_mul(e, e, q)
    if any((e2[i][j] - e[i][j]) % p for i in range(n) for j in range(n)):
        raise NotApproxIdempotent("e^2 != e mod p")
    x = _mat_combine(1, e, -1, e2, q)
    phi = [[0] * n for _ in range(n)]
    power = [row[:] for row in x]
    for term in range(1, N + 1):
        c = math.comb(2 * term - 1, term) % q
        phi = _mat_combine(1, phi, c, power, q)
        power = _mat_mul(power, x, q)
    two_e_minus_1 = [[(2 * e[i][j] - (1 if i == j else 0)) % q
                      for j in range(n)] for i in range(n)]
    return _mat_combine(1, e, 1, _mat_mul(two_e_minus_1, phi, q), q)
