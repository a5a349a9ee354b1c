import random

import pytest

from hacalc.algebra import AlgebraPresentation
from hacalc.errors import InvalidConnection, NotApproxIdempotent
from hacalc.lift import (Connection, Cochain, cup, curvature, d_cochain,
                         connection_extend, hochschild_delta,
                         identity_cochain, lift_idempotent,
                         phi_psi_recursion, section_curvature_check)
from hacalc.ncforms import Form, MixedForm, form_multiply
from hacalc.scalars import PrimeConfig

POLY = AlgebraPresentation.polynomial()
LAURENT = AlgebraPresentation.laurent()
T = POLY.generator_monomial("t")
ONE = POLY.one()
DTDT = Form(POLY, 2, {(ONE, T, T): 1})


def test_curvature_examples():
    idc = identity_cochain(POLY, 4)
    assert curvature(idc, T, T) == MixedForm.of(DTDT)
    # a multiplicative evaluation-style cochain has zero curvature
    ev = Cochain.from_function(
        POLY, 1,
        lambda m: MixedForm.of(Form(POLY, 0, {(ONE,): 2 ** m.data[0]})), 4)
    assert curvature(ev, T, T).is_zero()
    # the degree-0 truncation sigma = id has curvature dt dt at (t, t)
    assert curvature(idc, T, T).component(2) == DTDT


def test_hochschild_delta_basics():
    zero = Cochain.from_function(POLY, 1, lambda m: MixedForm(POLY), 4)
    dz = hochschild_delta(zero)
    assert all(v.is_zero() for v in dz.values.values())
    rng = random.Random(0)
    phi = Cochain.from_function(
        POLY, 1,
        lambda m: MixedForm.of(Form(POLY, 2, {(ONE, T, T):
                                              rng.randint(-3, 3)})), 4)
    ddphi = hochschild_delta(hochschild_delta(phi))
    assert all(v.is_zero() for v in ddphi.values.values())


def test_cup_examples():
    idc = identity_cochain(POLY, 4)
    dd = cup(d_cochain(idc), d_cochain(idc))
    assert dd(T, T) == MixedForm.of(DTDT)
    idid = cup(idc, idc)
    assert idid(T, T) == MixedForm.of(Form(POLY, 0, {(POLY.monomial((2,)),): 1}))


def test_connection_extend_examples():
    nabla = Connection(POLY)  # nabla(dt) = 0
    t2 = POLY.monomial((2,))
    assert nabla.nabla_d(t2) == DTDT  # one recursion step
    tdt = Form(POLY, 1, {(T, T): 1})
    assert connection_extend(nabla, tdt).is_zero()
    dt_times_t = form_multiply(Form.d_of_monomial(POLY, T),
                               Form(POLY, 0, {(T,): 1}))
    assert connection_extend(nabla, dt_times_t) == DTDT


def test_phi_psi_recursion_polynomial():
    tower = phi_psi_recursion(Connection(POLY), 3, 6)
    assert tower.phi(1, T).is_zero()
    assert tower.phi(1, POLY.monomial((2,))) == MixedForm.of(DTDT.scale(-1))
    assert tower.phi(0, T) == MixedForm.of(Form(POLY, 0, {(T,): 1}))
    # delta(psi_{2n}) = 0 for n = 2, 3 on all pairs within the cap
    for k in (2, 3):
        psik = tower.psi_cochain(k, 4)
        delta = hochschild_delta(psik)
        assert all(v.is_zero() for v in delta.values.values()), k


def test_phi_psi_recursion_laurent():
    tower = phi_psi_recursion(Connection(LAURENT), 3, 6)
    tinv = LAURENT.monomial((-1,))
    # derived value: nabla(d t^-1) = -t^-1 dt dt^-1, so phi_2 = +t^-1 dt dt^-1
    t_ = LAURENT.generator_monomial("t")
    expected = Form(LAURENT, 2, {(tinv, t_, tinv): 1})
    assert tower.phi(1, tinv) == MixedForm.of(expected)
    for k in (2, 3):
        psik = tower.psi_cochain(k, 4)
        delta = hochschild_delta(psik)
        assert all(v.is_zero() for v in delta.values.values()), k


def test_section_is_section():
    # composing with the projection to degree 0 gives back the monomial
    tower = phi_psi_recursion(Connection(POLY), 3, 6)
    for m in POLY.monomials_up_to(6):
        sec = tower.section(3, m)
        assert sec.component(0) == Form(POLY, 0, {(m,): 1})


@pytest.mark.parametrize("A", [POLY, LAURENT], ids=["polynomial", "laurent"])
def test_section_curvature_orders(A):
    tower = phi_psi_recursion(Connection(A), 3, 6)
    for n in range(0, 4):
        rep = section_curvature_check(tower, n, 6)
        assert rep.ok, (n, rep.max_bad_degree)
    # degree constant is stable when measured at a smaller cap
    a_small = section_curvature_check(tower, 3, 4).degree_constant
    a_big = section_curvature_check(tower, 3, 6).degree_constant
    assert a_small <= a_big


def test_invalid_connection_plane_curve():
    C = AlgebraPresentation.plane_curve([0, -1, 0, 1])
    with pytest.raises(InvalidConnection):
        phi_psi_recursion(Connection(C), 1, 4)


def _newton_fixed_point(e, p, N):
    q = p ** N
    n = len(e)

    def mul(a, b):
        return [[sum(a[i][k] * b[k][j] for k in range(n)) % q
                 for j in range(n)] for i in range(n)]

    cur = [[v % q for v in row] for row in e]
    for _ in range(64):
        sq = mul(cur, cur)
        cube = mul(sq, cur)
        nxt = [[(3 * sq[i][j] - 2 * cube[i][j]) % q for j in range(n)]
               for i in range(n)]
        if nxt == cur:
            return cur
        cur = nxt
    raise AssertionError("newton iteration did not stabilize")


def test_lift_idempotent_examples():
    cfg = PrimeConfig(5)
    # already exactly idempotent: unchanged
    assert lift_idempotent([[1, 0], [0, 0]], cfg, 4) == [[1, 0], [0, 0]]
    assert lift_idempotent([[0, 0], [0, 0]], cfg, 4) == [[0, 0], [0, 0]]
    e = [[1, 1], [0, 5]]
    hat = lift_idempotent(e, cfg, 4)
    q = 5 ** 4
    sq = [[sum(hat[i][k] * hat[k][j] for k in range(2)) % q
           for j in range(2)] for i in range(2)]
    assert sq == hat
    assert all((hat[i][j] - e[i][j]) % 5 == 0 for i in range(2)
               for j in range(2))
    assert hat == _newton_fixed_point(e, 5, 4)
    with pytest.raises(NotApproxIdempotent):
        lift_idempotent([[2, 0], [0, 0]], cfg, 4)


def test_lift_idempotent_random_vs_newton():
    rng = random.Random(9)
    for p in (5, 7):
        cfg = PrimeConfig(p)
        for _ in range(25):
            n = rng.choice([2, 3])
            diag = [[1 if (i == j and rng.random() < 0.5) else 0
                     for j in range(n)] for i in range(n)]
            g, ginv = _random_gl(n, p, rng)
            e = _mat_mod(_mul(_mul(g, diag, p), ginv, p), p)
            hat = lift_idempotent(e, cfg, 6)
            assert hat == _newton_fixed_point(e, p, 6)


def _mul(a, b, p):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % p
             for j in range(n)] for i in range(n)]


def _mat_mod(a, p):
    return [[v % p for v in row] for row in a]


def _random_gl(n, p, rng):
    while True:
        g = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
        inv = _inv_mod_p(g, p)
        if inv is not None:
            return g, inv


def _inv_mod_p(g, p):
    n = len(g)
    a = [row[:] + [1 if i == j else 0 for j in range(n)]
         for i, row in enumerate(g)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if a[i][c] % p), None)
        if piv is None:
            return None
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [v * inv % p for v in a[r]]
        for i in range(n):
            if i != r and a[i][c]:
                coef = a[i][c]
                a[i] = [(v - coef * w) % p for v, w in zip(a[i], a[r])]
        r += 1
    return [row[n:] for row in a]


def test_degree_constant_uniform_across_orders():
    # the measured filtration constant of phi_{2k} does not depend on k
    from hacalc.lift import _form_weight
    for A, expected in [(POLY, 0), (LAURENT, 2)]:
        tower = phi_psi_recursion(Connection(A), 3, 6)
        per_k = []
        for k in (1, 2, 3):
            a = 0
            for m in A.monomials_up_to(6):
                i = A.degree(m)
                if i == 0:
                    continue
                w = _form_weight(A, tower.phi(k, m))
                if w > i:
                    a = max(a, -((i - w) // (2 * k - 1)))
            per_k.append(a)
        assert per_k == [expected] * 3
