"""Seeded property-check suites driven by the CLI and the test suite.

Each suite returns a :class:`CheckResult`; randomness always flows from an
explicit seed so failures replay exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (AlgebraPresentation, GrowthProfile, Monomial,
                      profile_check_diam_laws)
from .ncforms import (Form, MixedForm, differential, fedosov,
                      fedosov_mixed, form_multiply,
                      xcomplex_boundary_checks)
from .scalars import INF, PrimeConfig, val
from .tube import (EvenForm, TubeParams, dm_member, fedosov_even,
                   fedosov_growth_check, floor_estimates, jdegree,
                   tube_member)


@dataclass
class CheckResult:
    name: str
    passed: bool
    checks: int
    detail: str = ""

    def as_dict(self):
        return {"name": self.name, "passed": self.passed,
                "checks": self.checks, "detail": self.detail}


def presentations() -> dict:
    return {
        "polynomial": AlgebraPresentation.polynomial(),
        "laurent": AlgebraPresentation.laurent(),
        "plane_curve": AlgebraPresentation.plane_curve([0, -1, 0, 1]),
        "free": AlgebraPresentation.free(["a", "b"]),
    }


def _offset(name: str) -> int:
    # stable across processes, unlike hash()
    return sum(i * b for i, b in enumerate(name.encode(), 1)) % 1000


# -- random generators -------------------------------------------------------


def random_monomial(A: AlgebraPresentation, max_deg: int,
                    rng: random.Random) -> Monomial:
    monos = A.monomials_up_to(max_deg)
    return monos[rng.randrange(len(monos))]


def random_nonunit_monomial(A, max_deg, rng) -> Monomial:
    while True:
        m = random_monomial(A, max_deg, rng)
        if not A.is_unit_monomial(m):
            return m


def random_form(A, degree: int, max_deg: int, rng,
                terms: int = 2) -> Form:
    out = {}
    for _ in range(terms):
        head = random_monomial(A, max_deg, rng)
        slots = tuple(random_nonunit_monomial(A, max_deg, rng)
                      for _ in range(degree))
        c = rng.choice([-2, -1, 1, 2, Fraction(1, 2), 3])
        key = (head,) + slots
        out[key] = out.get(key, 0) + c
    return Form(A, degree, out)


def random_monomial_form(A, profile: GrowthProfile, degree: int,
                         rng) -> Form:
    """A single-tuple form supported in Omega^degree(M) for M = profile."""
    reach = max((d for d in range(profile.cap + 1) if profile[d] == 0),
                default=0)
    pool = [m for m in A.monomials_up_to(reach)
            if profile[A.degree(m)] == 0]
    nonunit = [m for m in pool if not A.is_unit_monomial(m)]
    head = pool[rng.randrange(len(pool))]
    slots = tuple(nonunit[rng.randrange(len(nonunit))]
                  for _ in range(degree))
    return Form(A, degree, {(head,) + slots: Fraction(1)})


def random_even_form(A, max_level: int, max_deg: int, rng,
                     cfg: PrimeConfig, min_val: int = -2) -> EvenForm:
    parts = {}
    for n in rng.sample(range(max_level + 1), k=min(2, max_level + 1)):
        scale = Fraction(1, cfg.p ** rng.randint(0, -min_val))
        f = random_form(A, 2 * n, max_deg, rng).scale(scale)
        if not f.is_zero():
            parts[2 * n] = f
    return EvenForm(A, parts)


# -- suites -------------------------------------------------------------------


def suite_scalars(cfg: PrimeConfig, samples: int, seed: int) -> CheckResult:
    rng = random.Random(seed)
    n = 0
    for _ in range(samples):
        a = Fraction(rng.randint(-999, 999) or 1,
                     rng.randint(1, 999))
        b = Fraction(rng.randint(-999, 999) or 1,
                     rng.randint(1, 999))
        n += 1
        if val(a * b, cfg) != val(a, cfg) + val(b, cfg):
            return CheckResult("scalars", False, n, f"mult: {a}, {b}")
        lhs = val(a + b, cfg)
        lo = min(val(a, cfg), val(b, cfg))
        if lhs < lo:
            return CheckResult("scalars", False, n, f"ultrametric: {a}, {b}")
        if val(a, cfg) != val(b, cfg) and lhs != lo:
            return CheckResult("scalars", False, n, f"equality: {a}, {b}")
    return CheckResult("scalars", True, n)


def suite_floors(N: int = 200) -> CheckResult:
    rep = floor_estimates(N)
    return CheckResult("floors", rep.ok, N,
                       "" if rep.ok else str(rep.counterexample))


def suite_diam(cap: int = 20) -> CheckResult:
    checks = 0
    for k1 in (1, 2, 3):
        for k2 in (1, 2, 3):
            u = GrowthProfile.filtration(k1, cap)
            v = GrowthProfile.filtration(k2, cap)
            rep = profile_check_diam_laws(u, v)
            checks += 1
            if not rep.ok:
                return CheckResult(
                    "diam", False, checks,
                    f"law {rep.failed_law} at degree {rep.failed_degree} "
                    f"for F_{k1}, F_{k2}")
    # a non-filtration profile: staircase valuations
    w = GrowthProfile.from_values(
        [d // 2 for d in range(cap + 1)], cap)
    rep = profile_check_diam_laws(w, GrowthProfile.filtration(2, cap))
    checks += 1
    if not rep.ok:
        return CheckResult("diam", False, checks, "staircase profile")
    return CheckResult("diam", True, checks)


def suite_forms(samples_per_kind: int, seed: int) -> CheckResult:
    """d^2 = 0, Leibniz, associativity (ordinary and Fedosov), and the
    curvature identity of the inclusion into even forms."""
    total = 0
    for name, A in presentations().items():
        rng = random.Random(seed + _offset(name))
        rngmax = 3 if name == "free" else 4
        for _ in range(samples_per_kind):
            total += 1
            xi = random_form(A, rng.randint(0, 2), rngmax, rng)
            eta = random_form(A, rng.randint(0, 2), rngmax, rng)
            zeta = random_form(A, rng.randint(0, 1), rngmax, rng)
            if not differential(differential(xi)).is_zero():
                return CheckResult("forms", False, total, f"d^2: {name}")
            lhs = differential(form_multiply(xi, eta))
            sign = -1 if xi.degree % 2 else 1
            rhs = (form_multiply(differential(xi), eta)
                   + form_multiply(xi, differential(eta)).scale(sign))
            if lhs != rhs:
                return CheckResult("forms", False, total, f"Leibniz: {name}")
            a1 = form_multiply(form_multiply(xi, eta), zeta)
            a2 = form_multiply(xi, form_multiply(eta, zeta))
            if a1 != a2:
                return CheckResult("forms", False, total, f"assoc: {name}")
            # Fedosov associativity on even degrees
            e1 = random_form(A, 2 * rng.randint(0, 1), rngmax, rng)
            e2 = random_form(A, 2 * rng.randint(0, 1), rngmax, rng)
            e3 = random_form(A, 2 * rng.randint(0, 1), rngmax, rng)
            f1 = fedosov_mixed(fedosov(e1, e2), MixedForm.of(e3))
            f2 = fedosov_mixed(MixedForm.of(e1), fedosov(e2, e3))
            if f1 != f2:
                return CheckResult("forms", False, total,
                                   f"fedosov assoc: {name}")
            x = random_monomial(A, rngmax, rng)
            y = random_monomial(A, rngmax, rng)
            fx, fy = Form(A, 0, {(x,): 1}), Form(A, 0, {(y,): 1})
            curv = (MixedForm.of(form_multiply(fx, fy))
                    - fedosov(fx, fy))
            expected = MixedForm.of(
                form_multiply(Form.d_of_monomial(A, x),
                              Form.d_of_monomial(A, y)))
            if curv != expected:
                return CheckResult("forms", False, total,
                                   f"curvature: {name}")
    return CheckResult("forms", True, total)


def suite_xcomplex_boundary(samples_per_kind: int, seed: int) -> CheckResult:
    total = 0
    for name, A in presentations().items():
        rng = random.Random(seed + _offset(name))
        window = 5 if name == "free" else 8
        monos = [random_monomial(A, 2, rng) for _ in range(samples_per_kind)]
        forms = [random_form(A, 1, 2, rng) for _ in range(samples_per_kind)]
        ok, msg = xcomplex_boundary_checks(A, monos, forms, window)
        total += 2 * samples_per_kind
        if not ok:
            return CheckResult("xcomplex-boundary", False, total,
                               f"{name}: {msg}")
    return CheckResult("xcomplex-boundary", True, total)


def suite_tube_closure(cfg: PrimeConfig, samples: int, seed: int,
                       max_level: int = 5, only=None) -> CheckResult:
    """Fedosov closure of tube membership, level monotonicity, D_m
    inclusion, and the level-(m+1) structure map simulation."""
    total = 0
    kinds = presentations()
    if only is not None:
        kinds = {only.kind: only}
    for name, A in kinds.items():
        rng = random.Random(seed + _offset(name))
        max_deg = 2 if name == "free" else 3
        for _ in range(samples):
            m = rng.randint(1, max_level)
            x = random_even_form(A, 3, max_deg, rng, cfg)
            y = random_even_form(A, 3, max_deg, rng, cfg)
            total += 1
            if tube_member(x, m, cfg) and tube_member(y, m, cfg):
                z = fedosov_even(x, y)
                if not tube_member(z, m, cfg):
                    return CheckResult("tube-closure", False, total,
                                       f"closure fails: {name}, m={m}")
                jx, jy, jz = jdegree(x), jdegree(y), jdegree(z)
                if jz is not INF and jz < jx + jy:
                    return CheckResult("tube-closure", False, total,
                                       f"jdegree: {name}")
            if tube_member(x, m + 1, cfg) and not tube_member(x, m, cfg):
                return CheckResult("tube-closure", False, total,
                                   f"monotonicity: {name}, m={m}")
            # D_m membership implies tube membership
            cap = 24
            prof = GrowthProfile.filtration(max_deg, cap)
            alpha = Fraction(1, 2 * m)
            P = TubeParams(m, alpha, rng.randint(0, 2), prof)
            if dm_member(x, P, cfg) and not tube_member(x, m, cfg):
                return CheckResult("tube-closure", False, total,
                                   f"dm inclusion: {name}")
            # level m+1 tube sits in D_m(., 1/(m+1), 0)
            if tube_member(x, m + 1, cfg):
                big = GrowthProfile.filtration(cap, cap)
                Pm_full = TubeParams(m, Fraction(1, m + 1), 0, big)
                if not dm_member(x, Pm_full, cfg):
                    return CheckResult("tube-closure", False, total,
                                       f"structure map: {name}")
    return CheckResult("tube-closure", True, total)


def suite_fedosov_growth(cfg: PrimeConfig, samples: int,
                         seed: int) -> CheckResult:
    plans = [
        ("polynomial", (2, 2)),
        ("polynomial", (4, 2)),
        ("free", (2, 2, 2)),
        ("laurent", (4, 2)),
        ("laurent", (2, 2)),
        ("plane_curve", (2, 2)),
    ]
    kinds = presentations()
    total = 0
    for name, degrees in plans:
        A = kinds[name]
        rng = random.Random(seed + len(degrees))
        prof = GrowthProfile.filtration(1, 30)
        rep = fedosov_growth_check(A, prof, degrees, cfg, rng,
                                   samples=samples)
        total += rep.samples
        if not rep.ok:
            return CheckResult("fedosov-growth", False, total,
                               f"{name} {degrees}: {rep.failure}")
    return CheckResult("fedosov-growth", True, total)


def suite_groebner(samples_per_ideal: int, seed: int) -> CheckResult:
    from .groebner import (IntPoly, membership_oracle, strong_divide,
                           strong_gb)

    corpus = groebner_corpus()
    rng = random.Random(seed)
    total = 0
    for gens in corpus:
        gb = strong_gb(gens)
        # random members and perturbations against the integer oracle
        for _ in range(samples_per_ideal):
            g = IntPoly(2)
            for base in gens:
                budget = 4 - base.total_degree()
                if budget < 0:
                    continue
                e = [0, 0]
                for _ in range(rng.randint(0, budget)):
                    e[rng.randrange(2)] += 1
                g = g + base.term_mul(rng.randint(-2, 2), tuple(e))
            if rng.random() < 0.5:
                g = g + IntPoly.constant(2, rng.randint(-2, 2))
            if g.is_zero() or g.total_degree() > 4:
                continue
            total += 1
            member_gb = strong_divide(g, gb).remainder.is_zero()
            member_or = membership_oracle(g, list(gens))
            if member_gb != member_or:
                return CheckResult("groebner", False, total,
                                   f"oracle disagrees on {g}")
            cert = strong_divide(g, gb)
            recon = cert.reconstruct(gb)
            if recon != g:
                return CheckResult("groebner", False, total,
                                   f"certificate broken for {g}")
            if cert.remainder.is_zero() and cert.multipliers:
                if cert.max_product_degree(gb) > g.total_degree():
                    return CheckResult("groebner", False, total,
                                       f"degree bound broken for {g}")
    return CheckResult("groebner", True, total)


def groebner_corpus():
    from .groebner import IntPoly

    def P(terms):
        return IntPoly(2, terms)

    return [
        (P({(1, 0): 2}), P({(0, 1): 3})),
        (P({(1, 0): 1}),),
        (P({(2, 0): 1, (0, 1): -1}), P({(0, 2): 1, (0, 0): -1})),
        (P({(0, 0): 6}), P({(0, 0): 10})),
        (P({(1, 1): 2, (1, 0): 1}), P({(0, 2): 3})),
        (P({(2, 0): 1, (0, 0): 5}), P({(1, 1): 1})),
        (P({(1, 0): 4, (0, 1): 6}),),
        (P({(1, 0): 1, (0, 1): 1}), P({(1, 1): 1, (0, 0): -2})),
        (P({(2, 1): 1}), P({(1, 2): 1})),
        (P({(3, 0): 2, (0, 1): 1}), P({(0, 3): 3, (1, 0): -1})),
    ]


def check_all(cfg: PrimeConfig, seed: int, samples: int) -> list:
    """Every suite at a reduced sample count; used by `ha check`."""
    light = max(10, samples // 10)
    return [
        suite_scalars(cfg, samples, seed),
        suite_floors(200),
        suite_diam(20),
        suite_forms(light, seed),
        suite_xcomplex_boundary(max(4, light // 8), seed),
        suite_tube_closure(cfg, light, seed),
        suite_fedosov_growth(cfg, max(10, light // 2), seed),
        suite_groebner(max(10, light // 2), seed),
    ]
