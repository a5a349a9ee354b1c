"""Level-m tube membership for even differential forms.

Under the identification of the tensor algebra with even forms via the
Fedosov product, the level-m tube is spanned by p^{-floor(n/m)} (2n)-forms,
and the relative linear-growth generators D_m(M, alpha, f) sharpen the
exponent to floor(min(n/m, alpha n + f)) with the (2n)-form part supported
in Omega^{2n} M.  Support is tested slotwise through growth profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import GrowthProfile
from .ncforms import Form, MixedForm, fedosov_mixed
from .scalars import INF, PrimeConfig, val


class EvenForm(MixedForm):
    """A mixed form supported in even degrees; component n sits in
    degree 2n."""

    def __init__(self, presentation, parts=()):
        super().__init__(presentation, parts)
        for n in self.parts:
            if n % 2:
                raise ValueError("even forms only")

    @classmethod
    def from_mixed(cls, m: MixedForm) -> "EvenForm":
        return cls(m.presentation, m.parts)

    def level_component(self, n: int) -> Form:
        """The form of degree 2n."""
        return self.component(2 * n)

    def levels(self):
        return [d // 2 for d in self.degrees()]


@dataclass(frozen=True)
class TubeParams:
    """Level m, slope alpha in (0, 1/m), offset f, and the support module."""

    m: int
    alpha: Fraction
    f: int
    M_profile: GrowthProfile

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("level must be >= 1")
        a = Fraction(self.alpha)
        if not (0 < a < Fraction(1, self.m)):
            raise ValueError("alpha must lie in (0, 1/m)")
        if self.f < 0:
            raise ValueError("f must be a natural number")


def jdegree(x: EvenForm):
    """Least n with a nonzero component in degree 2n; INF for zero."""
    levels = x.levels()
    return levels[0] if levels else INF


def _min_component_val(form: Form, cfg: PrimeConfig):
    return min((val(c, cfg) for c in form.terms.values()), default=INF)


def tube_member(x: EvenForm, m: int, cfg: PrimeConfig) -> bool:
    """Membership in the level-m tube: val(coeffs of the 2n-part)
    >= -floor(n/m)."""
    for n in x.levels():
        if _min_component_val(x.level_component(n), cfg) < -(n // m):
            return False
    return True


def _slot_requirement(A, profile: GrowthProfile, key) -> float:
    """Summed profile requirement over head and d-slots of a tuple."""
    need = 0
    head = key[0]
    if not A.is_unit_monomial(head):
        d = A.degree(head)
        need += profile[d] if d <= profile.cap else INF
    for s in key[1:]:
        d = A.degree(s)
        need += profile[d] if d <= profile.cap else INF
    return need


def form_in_module(form: Form, profile: GrowthProfile, cfg: PrimeConfig,
                   shift: int = 0) -> bool:
    """Is the form in p^{-shift} Omega^deg(M)?  M given as a profile.

    A tuple with coefficient c lies in Omega(M) iff val(c) covers the
    summed per-slot requirement; the head contributes through M^+ (the
    unit is free).
    """
    A = form.presentation
    for key, c in form.terms.items():
        need = _slot_requirement(A, profile, key)
        if need is INF or val(c, cfg) + shift < need:
            return False
    return True


def dm_member(x: EvenForm, P: TubeParams, cfg: PrimeConfig) -> bool:
    """Membership in D_m(M, alpha, f).

    Component 2n must lie in p^{-floor(min(n/m, alpha n + f))}
    Omega^{2n} M.
    """
    for n in x.levels():
        bound = math.floor(min(Fraction(n, P.m),
                               Fraction(P.alpha) * n + P.f))
        if not form_in_module(x.level_component(n), P.M_profile, cfg,
                              shift=bound):
            return False
    return True


def fedosov_even(x: EvenForm, y: EvenForm,
                 cap: int | None = None) -> EvenForm:
    """Fedosov product of even forms; j-degrees add (or better)."""
    return EvenForm.from_mixed(fedosov_mixed(x, y, cap=cap))


@dataclass(frozen=True)
class FloorReport:
    ok: bool
    bound: int
    counterexample: tuple | None = None


def floor_estimates(N: int) -> FloorReport:
    """Exhaustive check of the degree-shift floor inequalities.

    For all 1 <= m <= N and 0 <= j < n <= N:
        floor(n/2m) <= floor(j/m) + floor((n-j-1)/m),
    and superadditivity floor(a/m) + floor(b/m) <= floor((a+b)/m).
    """
    for m in range(1, N + 1):
        F = np.arange(N + 1) // m
        for n in range(1, N + 1):
            lhs = n // (2 * m)
            rhs = F[:n] + F[n - 1::-1][:n]
            if int(rhs.min()) < lhs:
                j = int(rhs.argmin())
                return FloorReport(False, N, (m, n, j))
        for a in range(N + 1):
            rhs = F[a] + F[: N + 1 - a]
            total = np.arange(a, N + 1) // m
            if np.any(rhs > total):
                b = int(np.argmax(rhs > total))
                return FloorReport(False, N, (m, a, b))
    return FloorReport(True, N)


@dataclass(frozen=True)
class GrowthReport:
    ok: bool
    samples: int
    failure: str = ""


def fedosov_growth_check(A, M_profile: GrowthProfile, degrees, cfg,
                         rng, samples: int = 100) -> GrowthReport:
    """Sampled support estimate for iterated Fedosov products.

    Random monomial forms in Omega^{i_k}(M) are multiplied; every
    component of degree i + 2j must be supported in Omega^{i+2j}(M^(3)).
    The profile's cap is the degree budget for the pattern.
    """
    from .algebra import profile_power_sum
    from .checks import random_monomial_form

    if sum(degrees) > M_profile.cap:
        raise ValueError("degree pattern exceeds the profile cap")
    m3 = profile_power_sum(M_profile, 3)
    i_total = sum(degrees)
    for s in range(samples):
        factors = [random_monomial_form(A, M_profile, deg, rng)
                   for deg in degrees]
        prod = MixedForm.of(factors[0])
        for f in factors[1:]:
            prod = fedosov_mixed(prod, MixedForm.of(f))
        for deg in prod.degrees():
            j2 = deg - i_total
            if j2 < 0 or j2 % 2 or j2 // 2 > len(degrees) - 1:
                return GrowthReport(False, s + 1,
                                    f"component degree {deg} outside range")
            if not form_in_module(prod.component(deg), m3, cfg):
                return GrowthReport(False, s + 1,
                                    f"support outside M^(3) in degree {deg}")
    return GrowthReport(True, samples)
