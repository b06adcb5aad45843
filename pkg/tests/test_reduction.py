"""Single-divisor reduction tests.

Two independent routes: classical univariate long division for one-variable
cases, and sympy's reduced() for multivariate ones.
"""

import random
from fractions import Fraction

import pytest
import sympy

from tracezero.errors import NonInvertibleLeadingCoefficient
from tracezero.fields import Field
from tracezero.polynomials import Poly, RingCtx, poly_from_text, poly_to_text, reduce_by_divisor

Q = Field.rationals()
F5 = Field.prime(5)


def univariate_divmod(num, den):
    """Reference long division on dense rational coefficient lists.

    Lists are little-endian (index = exponent). Returns (quotient, remainder).
    """
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    den = list(den)
    while den and den[-1] == 0:
        den.pop()
    assert den, "division by zero polynomial"
    quo = [Fraction(0)] * max(0, len(num) - len(den) + 1)
    while len(num) >= len(den):
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        quo[shift] = factor
        for i, c in enumerate(den):
            num[i + shift] -= factor * c
        while num and num[-1] == 0:
            num.pop()
    return quo, num


def poly_from_dense(ctx, coeffs):
    return ctx.make({(i,): c for i, c in enumerate(coeffs)})


def dense_from_poly(p, size):
    out = [Fraction(0)] * size
    for (e,), c in p.terms.items():
        out[e] = c
    return out


def test_univariate_against_long_division():
    rng = random.Random(17)
    ctx = RingCtx(Q, 1, None)
    for _ in range(150):
        num = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(0, 8))]
        den = [Fraction(rng.randint(-5, 5)) for _ in range(rng.randint(1, 4))]
        if not any(den):
            den[-1] = Fraction(1)
        p = poly_from_dense(ctx, num)
        g = poly_from_dense(ctx, den)
        r = reduce_by_divisor(p, g)
        _, want = univariate_divmod(num, den)
        assert dense_from_poly(r, 10) == want + [Fraction(0)] * (10 - len(want))


def test_x4_mod_x2_minus_1():
    ctx = RingCtx(Q, 1, None)
    (x,) = ctx.gens()
    r = reduce_by_divisor(x ** 4, x * x - ctx.one())
    assert r == ctx.one()


def test_multivariate_against_sympy():
    rng = random.Random(23)
    ctx = RingCtx(Q, 3, None)
    xs = sympy.symbols("v1 v2 v3")
    gens = ctx.gens()

    def to_sympy(p):
        expr = sympy.Integer(0)
        for exps, coeff in p.terms.items():
            t = sympy.Rational(coeff)
            for s, e in zip(xs, exps):
                t *= s ** e
            expr += t
        return expr

    def rand_poly(max_deg, terms):
        out = ctx.zero()
        for _ in range(terms):
            mono = ctx.one()
            for _ in range(rng.randrange(max_deg + 1)):
                mono = mono * gens[rng.randrange(3)]
            out = out + mono.scale(Fraction(rng.randint(-4, 4)))
        return out

    for _ in range(60):
        p = rand_poly(4, 4)
        g = rand_poly(2, 3)
        if g.is_zero():
            continue
        r = reduce_by_divisor(p, g)
        # sympy grevlex != our grlex, so fix the order explicitly
        _, want = sympy.reduced(to_sympy(p), [to_sympy(g)], xs, order="grlex")
        assert sympy.expand(to_sympy(r) - want) == 0


def test_quadric_relation_example():
    # x1^2*x2 reduced by x1^2 + x2^2 + x3^2 - 1 leaves x2 - x2^3 - x2*x3^2
    ctx = RingCtx(Q, 3, None)
    x, y, z = ctx.gens()
    g = x * x + y * y + z * z - ctx.one()
    r = reduce_by_divisor(x * x * y, g)
    assert r == y - y ** 3 - y * z * z
    assert poly_to_text(r) == "-1*x2^3 + -1*x2*x3^2 + 1*x2"


def test_reduction_is_idempotent_and_linear():
    rng = random.Random(29)
    for field in (Q, F5):
        ctx = RingCtx(field, 2, None)
        x, y = ctx.gens()
        g = x * x + y - ctx.one()
        for _ in range(100):
            def rand():
                out = ctx.zero()
                for _ in range(4):
                    e1, e2 = rng.randrange(4), rng.randrange(4)
                    out = out + ctx.monomial((e1, e2)).scale(field.random(rng))
                return out

            p, q = rand(), rand()
            rp = reduce_by_divisor(p, g)
            rq = reduce_by_divisor(q, g)
            assert reduce_by_divisor(rp, g) == rp
            assert reduce_by_divisor(p + q, g) == reduce_by_divisor(rp + rq, g)
            # the reduction changes p by a multiple of g only
            diff = p - rp
            assert reduce_by_divisor(diff, g).is_zero()


def test_remainder_has_no_divisible_leading_terms():
    rng = random.Random(31)
    ctx = RingCtx(F5, 2, None)
    x, y = ctx.gens()
    g = x * y + x
    lead = g.leading_term()[0]
    for _ in range(100):
        p = ctx.make({
            (rng.randrange(5), rng.randrange(5)): F5.random(rng)
            for _ in range(4)
        })
        r = reduce_by_divisor(p, g)
        for exps in r.terms:
            assert not all(e >= le for e, le in zip(exps, lead))


def test_zero_divisor_rejected():
    ctx = RingCtx(Q, 2, None)
    with pytest.raises(NonInvertibleLeadingCoefficient):
        reduce_by_divisor(ctx.one(), ctx.zero())


def test_reduce_by_unit_gives_zero():
    ctx = RingCtx(F5, 2, None)
    p = poly_from_text(ctx, "2*x1^3 + 4*x2 + 1")
    assert reduce_by_divisor(p, ctx.one().scale(3)).is_zero()
