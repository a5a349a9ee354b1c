import random

from hacalc.checks import groebner_corpus
from hacalc.groebner import (IntPoly, deglex_compare,
                             filtered_noetherian_witness, membership_oracle,
                             strong_divide, strong_gb)


def P(terms):
    return IntPoly(2, terms)


def test_deglex_examples():
    assert deglex_compare((2, 0), (1, 1)) == 1   # x^2 > xy
    assert deglex_compare((1, 0), (0, 2)) == -1  # x < y^2 by total degree
    assert deglex_compare((1, 2), (1, 2)) == 0


def test_intpoly_arithmetic():
    f = P({(1, 0): 2, (0, 1): -1})
    g = P({(1, 0): 1})
    assert (f * g).terms == {(2, 0): 2, (1, 1): -1}
    assert (f + g).terms == {(1, 0): 3, (0, 1): -1}
    assert f.leading() == ((1, 0), 2)
    assert f.total_degree() == 1


def test_strong_gb_examples():
    gb = strong_gb([P({(1, 0): 2}), P({(0, 1): 3})])
    lts = {p.leading() for p in gb.polys}
    assert ((1, 0), 2) in lts      # 2x
    assert ((0, 1), 3) in lts      # 3y
    assert ((1, 1), 1) in lts      # xy = 3y*x - 2x*y is in the ideal
    assert strong_gb([P({(1, 0): 1})]).polys == (P({(1, 0): 1}),)
    gcd_basis = strong_gb([IntPoly.constant(1, 6), IntPoly.constant(1, 10)])
    assert [str(p) for p in gcd_basis.polys] == ["2"]


def test_strong_divide_examples():
    gb = strong_gb([P({(1, 0): 2}), P({(0, 1): 3})])
    cert = strong_divide(P({(1, 1): 3}), gb)
    assert cert.remainder.is_zero()
    assert cert.max_product_degree(gb) <= 2
    # x itself is not in the ideal (set y = 0: x = 2x f is impossible)
    cert = strong_divide(P({(1, 0): 1}), gb)
    assert not cert.remainder.is_zero()
    cert = strong_divide(IntPoly(2), gb)
    assert cert.remainder.is_zero() and not cert.multipliers


def test_certificate_reconstruction_random():
    rng = random.Random(1)
    for gens in groebner_corpus():
        gb = strong_gb(list(gens))
        for _ in range(40):
            g = IntPoly(2)
            for base in gens:
                e = (rng.randint(0, 2), rng.randint(0, 2))
                g = g + base.term_mul(rng.randint(-2, 2), e)
            cert = strong_divide(g, gb)
            assert cert.reconstruct(gb) == g
            if cert.remainder.is_zero() and not g.is_zero():
                assert cert.max_product_degree(gb) <= g.total_degree()


def test_strong_divisibility_of_members():
    rng = random.Random(2)
    for gens in groebner_corpus():
        gb = strong_gb(list(gens))
        for _ in range(25):
            g = IntPoly(2)
            for base in gens:
                e = (rng.randint(0, 2), rng.randint(0, 2))
                g = g + base.term_mul(rng.randint(-2, 2), e)
            if g.is_zero():
                continue
            ge, gc = g.leading()
            assert any(
                all(a <= b for a, b in zip(p.leading()[0], ge))
                and gc % p.leading()[1] == 0
                for p in gb.polys)


def test_membership_agrees_with_integer_oracle():
    rng = random.Random(3)
    checked = 0
    for gens in groebner_corpus():
        gb = strong_gb(list(gens))
        for _ in range(20):
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
                g = g + P({(0, 0): rng.randint(-2, 2)})
            if g.is_zero() or g.total_degree() > 4:
                continue
            checked += 1
            assert strong_divide(g, gb).remainder.is_zero() == \
                membership_oracle(g, list(gens))
    assert checked > 100


def test_witness_examples():
    rng = random.Random(4)
    rep = filtered_noetherian_witness(
        [P({(1, 0): 2}), P({(0, 1): 3})], 500, 6, rng)
    assert rep.max_shift == 0 and rep.failures == 0
    rep = filtered_noetherian_witness(
        [P({(2, 0): 1, (0, 1): -1}), P({(0, 2): 1, (0, 0): -1})],
        500, 6, rng)
    assert rep.max_shift == 0 and rep.failures == 0
    rep = filtered_noetherian_witness(
        [P({(1, 0): 1, (0, 1): 1})], 200, 6, rng)
    assert rep.max_shift == 0 and rep.failures == 0
