"""Noncommutative differential forms over a presented algebra.

A degree-n form is a sparse combination of tuples (m0; m1, ..., mn)
encoding m0 dm1 ... dmn, where m0 runs over the basis together with the
unit and m1, ..., mn run over the non-unit basis monomials (the
differential kills the unit, so tuples carrying it in a d-slot are zero).

The module provides the differential, the graded multiplication, the
Fedosov product, the Hochschild map b on 1-forms, canonical
representatives modulo commutators, and truncated homology of the
two-term complex  S <-> Omega^1(S)/[,]  for commutative presentations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import ADJOINED_UNIT, AlgebraElement, AlgebraPresentation, Monomial
from .errors import DegreeOverflow, NotCommutative, Unstable, WrongDegree
from .linalg import IntEchelon, SparseEchelon, kernel_basis


class Form:
    """A homogeneous differential form of fixed degree."""

    __slots__ = ("presentation", "degree", "terms")

    def __init__(self, presentation, degree, terms=()):
        self.presentation = presentation
        self.degree = degree
        clean = {}
        for key, c in dict(terms).items():
            c = Fraction(c)
            if not c:
                continue
            if len(key) != degree + 1:
                raise WrongDegree(f"tuple {key} is not a {degree}-form")
            clean[key] = c
        self.terms = clean

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_element(cls, x: AlgebraElement) -> "Form":
        return cls(x.presentation, 0,
                   {(m,): c for m, c in x.terms.items()})

    @classmethod
    def d_of_monomial(cls, A, m: Monomial) -> "Form":
        """The 1-form dm (zero for the unit monomial)."""
        if A.is_unit_monomial(m):
            return cls(A, 1)
        return cls(A, 1, {(A.one(), m): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        A = self.presentation
        return sorted(self.terms.items(),
                      key=lambda kv: tuple(A.sort_key(m) for m in kv[0]))

    def __eq__(self, other):
        return (isinstance(other, Form) and self.degree == other.degree
                and self.terms == other.terms)

    def __add__(self, other):
        if self.degree != other.degree:
            raise WrongDegree("cannot add forms of different degree")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Form(self.presentation, self.degree, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "Form":
        c = Fraction(c)
        return Form(self.presentation, self.degree,
                    {k: c * v for k, v in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        A = self.presentation
        parts = []
        for key, c in self.items():
            head = A.monomial_str(key[0])
            bits = [head] if (head != "1" or not self.degree) else []
            bits += [f"d({A.monomial_str(m)})" for m in key[1:]]
            body = " ".join(bits) if bits else "1"
            if c == 1:
                parts.append(body)
            elif c == -1:
                parts.append(f"-{body}")
            else:
                parts.append(f"{c} {body}")
        return " + ".join(parts).replace("+ -", "- ")


def differential(omega: Form, cap: int | None = None) -> Form:
    """d(m0 dm1 ... dmn) = 1 dm0 dm1 ... dmn; zero when m0 is the unit."""
    A = omega.presentation
    if cap is not None and omega.degree + 1 > cap:
        raise DegreeOverflow(f"form degree {omega.degree + 1} exceeds {cap}")
    out = {}
    one = A.one()
    for key, c in omega.terms.items():
        if A.is_unit_monomial(key[0]):
            continue
        out[(one,) + key] = out.get((one,) + key, 0) + c
    return Form(A, omega.degree + 1, out)


def form_multiply(omega: Form, eta: Form, cap: int | None = None) -> Form:
    """Graded product dictated by the Leibniz rule.

    (x0 dx1...dxn)(y0 dy1...dym) expands as the alternating sum over j of
    x0 dx1 ... d(xj x_{j+1}) ... with x_{n+1} = y0; d-slots that receive
    the unit monomial vanish.
    """
    A = omega.presentation
    n, m = omega.degree, eta.degree
    if cap is not None and n + m > cap:
        raise DegreeOverflow(f"form degree {n + m} exceeds {cap}")
    out = {}
    for xs, c1 in omega.terms.items():
        for ys, c2 in eta.terms.items():
            seq = xs + (ys[0],)
            tail = ys[1:]
            for j in range(n + 1):
                sign = -1 if (n - j) % 2 else 1
                for mm, mc in A.mul_monomials(seq[j], seq[j + 1]).items():
                    if j == 0:
                        head, slots = mm, seq[2:] + tail
                    else:
                        if A.is_unit_monomial(mm):
                            continue
                        head = seq[0]
                        slots = seq[1:j] + (mm,) + seq[j + 2:] + tail
                    if any(A.is_unit_monomial(s) for s in slots):
                        continue
                    key = (head,) + slots
                    out[key] = out.get(key, 0) + sign * c1 * c2 * mc
    return Form(A, n + m, out)


class MixedForm:
    """A finite sum of forms of several degrees."""

    __slots__ = ("presentation", "parts")

    def __init__(self, presentation, parts=()):
        self.presentation = presentation
        self.parts = {}
        for n, f in dict(parts).items():
            if not f.is_zero():
                self.parts[n] = f

    @classmethod
    def of(cls, *forms):
        out = cls(forms[0].presentation)
        for f in forms:
            out = out + cls(f.presentation, {f.degree: f})
        return out

    @classmethod
    def from_element(cls, x: AlgebraElement) -> "MixedForm":
        return cls.of(Form.from_element(x))

    def component(self, n: int) -> Form:
        return self.parts.get(n) or Form(self.presentation, n)

    def degrees(self):
        return sorted(self.parts)

    def is_zero(self) -> bool:
        return not self.parts

    def __add__(self, other):
        out = dict(self.parts)
        for n, f in other.parts.items():
            out[n] = out[n] + f if n in out else f
        return MixedForm(self.presentation, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "MixedForm":
        return MixedForm(self.presentation,
                         {n: f.scale(c) for n, f in self.parts.items()})

    def __eq__(self, other):
        return isinstance(other, MixedForm) and self.parts == other.parts

    def __str__(self):
        if not self.parts:
            return "0"
        joined = " + ".join(str(self.parts[n]) for n in self.degrees())
        return joined.replace("+ -", "- ")


def fedosov(omega: Form, eta: Form, cap: int | None = None) -> MixedForm:
    """Fedosov product of homogeneous forms.

    xi (.) eta = xi eta - (-1)^{ij} d(xi) d(eta); the two components live
    in degrees i+j and i+j+2.
    """
    i, j = omega.degree, eta.degree
    sign = -1 if (i * j) % 2 else 1
    low = form_multiply(omega, eta, cap=cap)
    high = form_multiply(differential(omega, cap=cap),
                         differential(eta, cap=cap), cap=cap)
    return MixedForm(omega.presentation,
                     {i + j: low, i + j + 2: high.scale(-sign)})


def fedosov_mixed(a: MixedForm, b: MixedForm,
                  cap: int | None = None) -> MixedForm:
    out = MixedForm(a.presentation)
    for fa in a.parts.values():
        for fb in b.parts.values():
            out = out + fedosov(fa, fb, cap=cap)
    return out


def mixed_multiply(a: MixedForm, b: MixedForm,
                   cap: int | None = None) -> MixedForm:
    """Ordinary (graded) product extended to mixed forms."""
    out = MixedForm(a.presentation)
    for fa in a.parts.values():
        for fb in b.parts.values():
            out = out + MixedForm.of(form_multiply(fa, fb, cap=cap))
    return out


def mixed_differential(a: MixedForm, cap: int | None = None) -> MixedForm:
    out = MixedForm(a.presentation)
    for f in a.parts.values():
        out = out + MixedForm.of(differential(f, cap=cap))
    return out


def hochschild_b1(omega: Form) -> AlgebraElement:
    """b(x dy) = xy - yx, extended linearly over degree-1 forms."""
    if omega.degree != 1:
        raise WrongDegree("b is defined on 1-forms here")
    A = omega.presentation
    out = {}
    for (x, y), c in omega.terms.items():
        for m, mc in A.mul_monomials(x, y).items():
            out[m] = out.get(m, 0) + c * mc
        for m, mc in A.mul_monomials(y, x).items():
            out[m] = out.get(m, 0) - c * mc
    return AlgebraElement(A, out)


# ---------------------------------------------------------------------------
# Commutator quotient and X-complex homology at finite truncation
# ---------------------------------------------------------------------------


def _heads(A: AlgebraPresentation, bound: int):
    heads = A.monomials_up_to(bound)
    if not A.unital:
        heads = [ADJOINED_UNIT] + heads
    return heads


def one_form_tuples(A: AlgebraPresentation, bound: int):
    """All 1-form tuples (head, slot) of total filtration degree <= bound."""
    out = []
    slots = [m for m in A.monomials_up_to(bound)
             if not A.is_unit_monomial(m)]
    for h in _heads(A, bound):
        dh = A.degree(h)
        for s in slots:
            if dh + A.degree(s) <= bound:
                out.append((h, s))
    return out


def commutator_vectors(A: AlgebraPresentation, bound: int):
    """Expansions of [x, y dz] with deg x + deg y + deg z <= bound.

    [x, y dz] = (xy) dz - y d(zx) + (yz) dx; merged d-slot products drop
    their unit component.  For commutative presentations [x, y dz] and
    [z, y dx] expand identically, so only x <= z is emitted.
    """
    monos = A.monomials_up_to(bound)
    nonunit = [m for m in monos if not A.is_unit_monomial(m)]
    ys = _heads(A, bound)
    for xi, x in enumerate(nonunit):
        dx = A.degree(x)
        for y in ys:
            dy = A.degree(y)
            if dx + dy > bound:
                continue
            zs = nonunit[xi:] if A.is_commutative else nonunit
            for z in zs:
                if dx + dy + A.degree(z) > bound:
                    continue
                vec = {}

                def put(key, c):
                    vec[key] = vec.get(key, 0) + c

                for m, c in A.mul_monomials(x, y).items():
                    put((m, z), c)
                for m, c in A.mul_monomials(z, x).items():
                    if not A.is_unit_monomial(m):
                        put((y, m), -c)
                for m, c in A.mul_monomials(y, z).items():
                    put((m, x), c)
                vec = {k: c for k, c in vec.items() if c}
                if vec:
                    yield vec


def _tuple_sort_key(A, key_tuple):
    """Order for canonical-representative pivoting: large d-slots first."""
    head, *slots = key_tuple
    total = A.degree(head) + sum(A.degree(s) for s in slots)
    slotdeg = sum(A.degree(s) for s in slots)
    return (-slotdeg, -total,
            tuple(A.sort_key(s) for s in slots), A.sort_key(head))


def _window_sort_key(A, key_tuple):
    """Order for windowed rank counting: total degree strictly descending.

    With this order the columns of degree <= R form a suffix for every R,
    so a single elimination serves all read bounds at once.
    """
    head, *slots = key_tuple
    total = A.degree(head) + sum(A.degree(s) for s in slots)
    slotdeg = sum(A.degree(s) for s in slots)
    return (-total, -slotdeg,
            tuple(A.sort_key(s) for s in slots), A.sort_key(head))


class CommutatorQuotient:
    """Canonical representatives in Omega^1 modulo the commutator span.

    Relations are generated from all monomial triples within ``bound``;
    pivots eliminate tuples with large d-slot degree first, so canonical
    representatives concentrate on generator d-slots.
    """

    def __init__(self, A: AlgebraPresentation, bound: int):
        self.presentation = A
        self.bound = bound
        tuples = one_form_tuples(A, bound)
        tuples.sort(key=lambda t: _tuple_sort_key(A, t))
        self.col_of = {t: i for i, t in enumerate(tuples)}
        self.tuples = tuples
        self.ech = SparseEchelon(rref=True)
        for vec in commutator_vectors(A, bound):
            self.ech.add({self.col_of[k]: c for k, c in vec.items()})

    def _to_vec(self, omega: Form) -> dict:
        vec = {}
        for key, c in omega.terms.items():
            col = self.col_of.get(key)
            if col is None:
                raise DegreeOverflow(
                    f"tuple of degree beyond window {self.bound}")
            vec[col] = c
        return vec

    def rep(self, omega: Form) -> Form:
        """Canonical coset representative of a 1-form."""
        if omega.degree != 1:
            raise WrongDegree("commutator quotient lives on 1-forms")
        res = self.ech.reduce(self._to_vec(omega))
        return Form(self.presentation, 1,
                    {self.tuples[c]: v for c, v in res.items()})

    def contains(self, omega: Form) -> bool:
        return self.rep(omega).is_zero()


def commutator_quotient_rep(omega: Form, truncation: int) -> Form:
    """One-shot canonical representative modulo commutators."""
    return CommutatorQuotient(omega.presentation, truncation).rep(omega)


@dataclass(frozen=True)
class XComplexReport:
    h0: int
    h1: int
    reps0: tuple
    reps1: tuple
    truncation: int
    stable: bool


def _xcomplex_windows(A: AlgebraPresentation, reads: list, pad: int):
    """Homology dims of S <-> Omega^1/[,] read on several degree slices.

    One elimination happens inside the window max(reads) + pad with
    columns in descending total degree, so the degree-<=R columns form a
    suffix for each requested read bound R; missing edge witnesses shrink
    with the pad and are caught by comparing the read bounds.
    """
    big = max(reads) + pad
    tuples = one_form_tuples(A, big)
    tuples.sort(key=lambda t: _window_sort_key(A, t))
    col_of = {t: i for i, t in enumerate(tuples)}
    totdeg = [-_window_sort_key(A, t)[0] for t in tuples]

    ech_c = IntEchelon()
    for vec in commutator_vectors(A, big):
        ech_c.add({col_of[k]: int(c) for k, c in vec.items()})

    one = A.one()
    domain_big = [m for m in A.monomials_up_to(big)
                  if not A.is_unit_monomial(m)]
    ech_u = ech_c.clone()
    for s in domain_big:
        ech_u.add({col_of[(one, s)]: 1})

    results = {}
    for R in reads:
        read_cols = [i for i, d in enumerate(totdeg) if d <= R]
        pivots_read = sum(1 for p in ech_u.pivots() if totdeg[p] <= R)
        h1 = len(read_cols) - pivots_read
        reps1 = tuple(tuples[c] for c in read_cols
                      if c not in ech_u.pivots())

        domain = A.monomials_up_to(R)  # includes the unit: d(1) = 0
        imgs = []
        for s in domain:
            if A.is_unit_monomial(s):
                imgs.append({})
            else:
                imgs.append(ech_c.reduce({col_of[(one, s)]: 1}))
        kernel = kernel_basis(imgs)
        reps0 = tuple(
            AlgebraElement(A, {domain[i]: c for i, c in combo.items()})
            for combo in kernel)
        results[R] = (len(kernel), h1, reps0, reps1)
    return results


def xcomplex_homology(A: AlgebraPresentation, cfg, D: int, *, pad: int = 2,
                      stab_step: int = 5,
                      check_stability: bool = True) -> XComplexReport:
    """Truncated homology of the two-term complex S <-> Omega^1(S)/[,].

    Only commutative presentations are supported: there the map from
    1-form classes back to S vanishes, so h0 = ker(d) and h1 = coker(d)
    on the truncated slices.  Dimensions are recomputed at D + stab_step
    and must agree, else :class:`Unstable` is raised.
    """
    if not A.is_commutative:
        raise NotCommutative("homology is computed for commutative "
                             "presentations only")
    stable = False
    if check_stability:
        res = _xcomplex_windows(A, [D, D + stab_step], pad)
        h0, h1, reps0, reps1 = res[D]
        h0b, h1b, _, _ = res[D + stab_step]
        if (h0, h1) != (h0b, h1b):
            raise Unstable(f"dims {(h0, h1)} at D={D} vs {(h0b, h1b)} "
                           f"at D={D + stab_step}")
        stable = True
    else:
        h0, h1, reps0, reps1 = _xcomplex_windows(A, [D], pad)[D]
    A_ = A
    reps1_str = tuple(str(Form(A_, 1, {t: Fraction(1)})) for t in reps1)
    reps0_str = tuple(str(x) for x in reps0)
    return XComplexReport(h0, h1, reps0_str, reps1_str, D, stable)


def xcomplex_boundary_checks(A: AlgebraPresentation, monomials,
                             one_forms, window: int):
    """Verify the two composites of the truncated two-term complex vanish.

    b(d(x)) = 0 holds on the nose; d(b(omega)) must land in the
    commutator span, which is checked inside the given window.
    """
    quo = CommutatorQuotient(A, window)
    for m in monomials:
        f = Form.d_of_monomial(A, m)
        if not hochschild_b1(f).is_zero():
            return False, f"b(d({A.monomial_str(m)})) != 0"
    for omega in one_forms:
        x = hochschild_b1(omega)
        dx = Form(A, 1, {(A.one(), m): c for m, c in x.terms.items()
                         if not A.is_unit_monomial(m)})
        if not quo.contains(dx):
            return False, f"d(b(omega)) not a commutator for {omega}"
    return True, ""
