"""Presented V-algebras with a monomial normal-form basis.

Four presentation kinds are supported:

* ``free``        noncommutative; basis = words in the generators,
* ``polynomial``  commutative; basis = monomials with exponents >= 0,
* ``laurent``     one generator t with a formal inverse; basis = t^n, n in Z,
* ``plane_curve`` V[x,y]/(y^2 - f(x)); basis = x^i y^j with j <= 1.

Every basis monomial carries a filtration degree: the least n such that the
monomial lies in F_n, the span of all products of at most n generators
(laurent counts t and t^-1 both as generators, so deg t^-n = n; on a plane
curve the relation lets y^2 stand in for the top of f, which lowers the
weight of large powers of x).

Growth profiles model degree-homogeneous bounded submodules M as maps
(monomial degree -> minimum required coefficient valuation); the product and
diamond operations mirror M*N and the linear-growth hull sum_i p^i M^{i+1}.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegreeOverflow, ZeroElement

INF = math.inf

KINDS = ("free", "polynomial", "laurent", "plane_curve")


@dataclass(frozen=True)
class Monomial:
    """A normal-form basis monomial.

    ``data`` is a word (tuple of generator indices) for free presentations,
    an exponent vector for the commutative kinds, and ``None`` for the unit
    adjoined to a non-unital presentation.
    """

    data: tuple | None

    @property
    def is_adjoined_unit(self) -> bool:
        return self.data is None


ADJOINED_UNIT = Monomial(None)


class AlgebraPresentation:
    """A presented algebra with monomial basis and length filtration.

    ``degree_cap`` is an optional hard cap: any product whose result would
    contain a monomial of larger filtration degree raises
    :class:`DegreeOverflow` instead of silently truncating.
    """

    def __init__(self, kind, generators, f_coeffs=None, unital=None,
                 degree_cap=None):
        if kind not in KINDS:
            raise ValueError(f"unknown presentation kind {kind!r}")
        generators = tuple(generators)
        if len(set(generators)) != len(generators) or not generators:
            raise ValueError("generators must be nonempty and distinct")
        if kind == "laurent" and len(generators) != 1:
            raise ValueError("laurent takes exactly one generator")
        if kind == "plane_curve":
            if generators != ("x", "y"):
                raise ValueError("plane_curve requires generators (x, y)")
            f_coeffs = tuple(int(c) for c in (f_coeffs or ()))
            while f_coeffs and f_coeffs[-1] == 0:
                f_coeffs = f_coeffs[:-1]
            if len(f_coeffs) < 2:
                raise ValueError("plane_curve needs deg f >= 1")
            if f_coeffs[-1] not in (1, -1):
                raise ValueError("f must have leading coefficient +-1")
        elif f_coeffs is not None:
            raise ValueError("f_coeffs only applies to plane_curve")
        if unital is None:
            unital = kind != "free"
        if kind != "free" and not unital:
            raise ValueError(f"{kind} presentations are unital")
        self.kind = kind
        self.generators = generators
        self.f_coeffs = f_coeffs
        self.unital = unital
        self.degree_cap = degree_cap
        self._wt_cache = {}

    # -- constructors ---------------------------------------------------

    @classmethod
    def free(cls, generators, unital=False, degree_cap=None):
        return cls("free", generators, unital=unital, degree_cap=degree_cap)

    @classmethod
    def polynomial(cls, generators=("t",), degree_cap=None):
        return cls("polynomial", generators, degree_cap=degree_cap)

    @classmethod
    def laurent(cls, generator="t", degree_cap=None):
        return cls("laurent", (generator,), degree_cap=degree_cap)

    @classmethod
    def plane_curve(cls, f_coeffs, degree_cap=None):
        return cls("plane_curve", ("x", "y"), f_coeffs=f_coeffs,
                   degree_cap=degree_cap)

    @classmethod
    def from_json(cls, data: dict):
        kind = data["kind"]
        if kind == "plane_curve":
            return cls.plane_curve(data["f_coeffs"])
        if kind == "laurent":
            return cls.laurent(data.get("generators", ["t"])[0])
        if kind == "polynomial":
            return cls.polynomial(data["generators"])
        return cls.free(data["generators"], unital=data.get("unital", False))

    def __repr__(self):
        if self.kind == "plane_curve":
            return f"AlgebraPresentation(plane_curve, f={list(self.f_coeffs)})"
        return f"AlgebraPresentation({self.kind}, {list(self.generators)})"

    # -- monomials ------------------------------------------------------

    @property
    def is_commutative(self) -> bool:
        return self.kind != "free"

    @property
    def curve_fdeg(self) -> int:
        return len(self.f_coeffs) - 1

    def one(self) -> Monomial:
        """The unit monomial (internal for unital kinds, adjoined else)."""
        if not self.unital:
            return ADJOINED_UNIT
        if self.kind == "free":
            return Monomial(())
        return Monomial((0,) * len(self.generators))

    def is_unit_monomial(self, m: Monomial) -> bool:
        return m == self.one() or m.is_adjoined_unit

    def monomial(self, data) -> Monomial:
        data = tuple(data)
        if self.kind == "free":
            if not all(0 <= g < len(self.generators) for g in data):
                raise ValueError("free word entries are generator indices")
        elif self.kind == "laurent":
            if len(data) != 1:
                raise ValueError("laurent monomials have one exponent")
        elif self.kind == "polynomial":
            if len(data) != len(self.generators) or min(data, default=0) < 0:
                raise ValueError("bad polynomial exponent vector")
        else:
            if len(data) != 2 or data[0] < 0 or data[1] not in (0, 1):
                raise ValueError("plane_curve monomials are x^i y^j, j <= 1")
        return Monomial(data)

    def generator_monomial(self, name: str) -> Monomial:
        i = self.generators.index(name)
        if self.kind == "free":
            return Monomial((i,))
        e = [0] * len(self.generators)
        e[i] = 1
        return Monomial(tuple(e))

    def _wt_x(self, i: int) -> int:
        """Filtration weight of x^i on the curve y^2 = f(x)."""
        try:
            return self._wt_cache[i]
        except KeyError:
            pass
        d = self.curve_fdeg
        best = i
        for m in range(1, i // max(d, 1) + 2):
            best = min(best, 2 * m + max(0, i - d * m))
        self._wt_cache[i] = best
        return best

    def degree(self, m: Monomial) -> int:
        """Filtration degree: least n with m in F_n."""
        if m.is_adjoined_unit:
            return 0
        if self.kind == "free":
            return len(m.data)
        if self.kind == "laurent":
            return abs(m.data[0])
        if self.kind == "polynomial":
            return sum(m.data)
        i, j = m.data
        return j + self._wt_x(i)

    def sort_key(self, m: Monomial):
        if m.is_adjoined_unit:
            return (-1,)
        return (self.degree(m), m.data)

    def monomial_str(self, m: Monomial) -> str:
        if self.is_unit_monomial(m):
            return "1"
        if self.kind == "free":
            return "*".join(self.generators[i] for i in m.data)
        parts = []
        for name, e in zip(self.generators, m.data):
            if e == 0:
                continue
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def mul_monomials(self, a: Monomial, b: Monomial) -> dict:
        """Normal form of a*b as a sparse monomial combination."""
        if a.is_adjoined_unit:
            return {b: Fraction(1)}
        if b.is_adjoined_unit:
            return {a: Fraction(1)}
        if self.kind == "free":
            return {Monomial(a.data + b.data): Fraction(1)}
        if self.kind in ("polynomial", "laurent"):
            return {Monomial(tuple(x + y for x, y in zip(a.data, b.data))):
                    Fraction(1)}
        i = a.data[0] + b.data[0]
        j = a.data[1] + b.data[1]
        if j <= 1:
            return {Monomial((i, j)): Fraction(1)}
        # y^2 -> f(x)
        return {Monomial((i + k, 0)): Fraction(c)
                for k, c in enumerate(self.f_coeffs) if c}

    def monomials_up_to(self, bound: int) -> list:
        """All basis monomials of filtration degree <= bound, sorted."""
        out = []
        if self.kind == "free":
            n = len(self.generators)
            lo = 1 if not self.unital else 0
            for length in range(lo, bound + 1):
                for word in itertools.product(range(n), repeat=length):
                    out.append(Monomial(word))
        elif self.kind == "laurent":
            out = [Monomial((k,)) for k in range(-bound, bound + 1)]
        elif self.kind == "polynomial":
            n = len(self.generators)

            def rec(prefix, left):
                if len(prefix) == n - 1:
                    for e in range(left + 1):
                        out.append(Monomial(prefix + (e,)))
                    return
                for e in range(left + 1):
                    rec(prefix + (e,), left - e)

            rec((), bound)
        else:
            i = 0
            while self._wt_x(i) <= bound:
                out.append(Monomial((i, 0)))
                i += 1
            i = 0
            while 1 + self._wt_x(i) <= bound:
                out.append(Monomial((i, 1)))
                i += 1
        out.sort(key=self.sort_key)
        return out

    def word_of(self, m: Monomial) -> list:
        """A canonical factorization of m into alphabet monomials.

        The alphabet is the generators plus, for laurent, the formal
        inverse.  The unit monomial factors as the empty word.
        """
        if self.is_unit_monomial(m):
            return []
        if self.kind == "free":
            return [Monomial((i,)) for i in m.data]
        if self.kind == "laurent":
            k = m.data[0]
            step = Monomial((1,)) if k > 0 else Monomial((-1,))
            return [step] * abs(k)
        letters = []
        for pos, e in enumerate(m.data):
            g = [0] * len(self.generators)
            g[pos] = 1
            letters.extend([Monomial(tuple(g))] * e)
        return letters

    def element(self, terms) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def unit_element(self) -> "AlgebraElement":
        return AlgebraElement(self, {self.one(): Fraction(1)})


class AlgebraElement:
    """A sparse linear combination of normal-form monomials."""

    __slots__ = ("presentation", "terms")

    def __init__(self, presentation, terms):
        self.presentation = presentation
        self.terms = {m: Fraction(c) for m, c in dict(terms).items()
                      if c != 0}

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        key = self.presentation.sort_key
        return sorted(self.terms.items(), key=lambda kv: key(kv[0]))

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and self.presentation is other.presentation
                and self.terms == other.terms)

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return AlgebraElement(self.presentation, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return AlgebraElement(self.presentation, out)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        return AlgebraElement(self.presentation,
                              {m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        A = self.presentation
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for m, c in A.mul_monomials(m1, m2).items():
                    out[m] = out.get(m, 0) + c1 * c2 * c
        result = AlgebraElement(A, out)
        cap = A.degree_cap
        if cap is not None:
            for m in result.terms:
                if A.degree(m) > cap:
                    raise DegreeOverflow(
                        f"degree {A.degree(m)} exceeds cap {cap}")
        return result

    __rmul__ = scale

    def __str__(self):
        if not self.terms:
            return "0"
        A = self.presentation
        parts = []
        for m, c in self.items():
            ms = A.monomial_str(m)
            if ms == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(ms)
            elif c == -1:
                parts.append(f"-{ms}")
            else:
                parts.append(f"{c}*{ms}")
        return " + ".join(parts).replace("+ -", "- ")


def normalize(word, A: AlgebraPresentation) -> AlgebraElement:
    """Normal form of a raw word over the presentation's symbols.

    Symbols are generator names; for laurent presentations the formal
    inverse is written ``t^-1``.  The empty word normalizes to the unit.
    """
    result = A.unit_element() if A.unital else None
    for sym in word:
        if A.kind == "laurent" and sym == f"{A.generators[0]}^-1":
            m = Monomial((-1,))
        else:
            m = A.generator_monomial(sym)
        e = AlgebraElement(A, {m: Fraction(1)})
        result = e if result is None else result * e
    if result is None:
        raise ValueError("empty word over a non-unital presentation")
    return result


def filtration_degree(x: AlgebraElement) -> int:
    """Least n with every monomial of x of filtration degree <= n."""
    if x.is_zero():
        raise ZeroElement("the zero element has no filtration degree")
    A = x.presentation
    return max(A.degree(m) for m in x.terms)


# ---------------------------------------------------------------------------
# Growth profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthProfile:
    """Minimum required coefficient valuation per monomial degree.

    ``w[d]`` is the valuation a degree-d coefficient must have for the
    element to lie in the modeled submodule; ``INF`` means the submodule
    has no degree-d part.
    """

    cap: int
    w: tuple = field(default=())

    def __post_init__(self):
        if len(self.w) != self.cap + 1:
            raise ValueError("profile must list degrees 0..cap")

    @classmethod
    def filtration(cls, k: int, cap: int) -> "GrowthProfile":
        """Profile of F_k: free coefficients up to degree k, nothing above."""
        return cls(cap, tuple(0 if d <= k else INF for d in range(cap + 1)))

    @classmethod
    def empty(cls, cap: int) -> "GrowthProfile":
        return cls(cap, (INF,) * (cap + 1))

    @classmethod
    def from_values(cls, values, cap: int) -> "GrowthProfile":
        return cls(cap, tuple(values))

    def __getitem__(self, d: int):
        return self.w[d]

    def includes(self, other: "GrowthProfile") -> bool:
        """Pointwise: self's module contains other's (self needs less)."""
        return all(self.w[d] <= other.w[d] for d in range(self.cap + 1))


def profile_sum(u: GrowthProfile, v: GrowthProfile) -> GrowthProfile:
    """Profile of the module sum M + N (pointwise minimum)."""
    _same_cap(u, v)
    return GrowthProfile(u.cap, tuple(min(a, b) for a, b in zip(u.w, v.w)))


def profile_product(u: GrowthProfile, v: GrowthProfile) -> GrowthProfile:
    """Profile of the product module M*N (min-plus convolution)."""
    _same_cap(u, v)
    out = []
    for d in range(u.cap + 1):
        out.append(min((u.w[i] + v.w[d - i] for i in range(d + 1)),
                       default=INF))
    return GrowthProfile(u.cap, tuple(out))


def profile_power_sum(u: GrowthProfile, n: int) -> GrowthProfile:
    """Profile of M^{(n)} = M + M^2 + ... + M^n."""
    acc = u
    power = u
    for _ in range(n - 1):
        power = profile_product(power, u)
        acc = profile_sum(acc, power)
    return acc


def profile_diamond(u: GrowthProfile) -> GrowthProfile:
    """Profile of the linear-growth hull sum_i p^i M^{i+1}.

    The minimum over i of i + (profile of M^{i+1}) is attained with
    i <= d: a degree-0 factor can always be dropped at cost <= 0.
    """
    powers = [u]
    out = []
    for d in range(u.cap + 1):
        best = INF
        for i in range(d + 2):
            while len(powers) <= i:
                powers.append(profile_product(powers[-1], u))
            term = i + powers[i].w[d]
            if term < best:
                best = term
        out.append(best)
    return GrowthProfile(u.cap, tuple(out))


@dataclass(frozen=True)
class DiamondLawReport:
    ok: bool
    failed_law: int | None = None
    failed_degree: int | None = None


def profile_check_diam_laws(u: GrowthProfile, v: GrowthProfile
                            ) -> DiamondLawReport:
    """Check the five diamond-hull inclusions as profile inequalities.

    An inclusion of modules M <= N reads pointwise w_M(d) >= w_N(d).
    Laws: (1) M^* + N^* <= (M+N)^*; (2) M N^* <= ((MN+N)^(2))^* both
    sides; (3) p M^* M^* <= M^*; (4) M^* N^* <= ((M+N)^(2))^*;
    (5) (M^*)^* = M^*.
    """
    _same_cap(u, v)
    cap = u.cap
    ud, vd = profile_diamond(u), profile_diamond(v)

    def leq(big, small, law):
        # module inclusion small <= big: small's requirement >= big's
        for d in range(cap + 1):
            if small.w[d] < big.w[d]:
                return DiamondLawReport(False, law, d)
        return None

    checks = []
    # 1
    checks.append((profile_diamond(profile_sum(u, v)),
                   profile_sum(ud, vd), 1))
    # 2, both orders; profiles are commutative so one inequality each way
    mn = profile_product(u, v)
    checks.append((profile_diamond(profile_power_sum(profile_sum(mn, v), 2)),
                   profile_product(u, vd), 2))
    nm = profile_product(v, u)
    checks.append((profile_diamond(profile_power_sum(profile_sum(nm, v), 2)),
                   profile_product(vd, u), 2))
    # 3
    shifted = GrowthProfile(cap, tuple(
        1 + x for x in profile_product(ud, ud).w))
    checks.append((ud, shifted, 3))
    # 4
    checks.append((profile_diamond(profile_power_sum(profile_sum(u, v), 2)),
                   profile_product(ud, vd), 4))
    for big, small, law in checks:
        bad = leq(big, small, law)
        if bad:
            return bad
    # 5: idempotency, exact equality
    udd = profile_diamond(ud)
    for d in range(cap + 1):
        if udd.w[d] != ud.w[d]:
            return DiamondLawReport(False, 5, d)
    return DiamondLawReport(True)


def _same_cap(u, v):
    if u.cap != v.cap:
        raise ValueError("profiles must share a cap")
