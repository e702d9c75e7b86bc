"""Randomized exact property suites, shared by the unit and acceptance tests.

Each suite takes a seeded ``random.Random`` and a count, runs that many
checks and returns the count.  Failures raise AssertionError with the inputs.
"""

import random

from ladderwork import (
    AlphaPolicy,
    TruncatedSeries,
    monomial_chart,
    run_ladder,
    series_invert_unit,
    translation_chart,
    value_of,
    weierstrass_prepare,
)
from ladderwork.pseries import Substitution

PRIMES = (3, 5, 7)


def rand_series(rng, p, n, density=0.5, unit=None, min_order=0):
    coeffs = {}
    for i in range(n):
        for j in range(n - i):
            if i + j >= min_order and rng.random() < density:
                coeffs[(i, j)] = rng.randrange(p)
    if unit is True:
        coeffs[(0, 0)] = rng.randrange(1, p)
    elif unit is False:
        coeffs.pop((0, 0), None)
    return TruncatedSeries(coeffs, p, n)


def naive_product(f, g):
    """Coefficient dict of f*g below the common precision, by schoolbook convolution."""
    n, p = min(f.precision, g.precision), f.p
    out = {}
    for i, j, a in f.terms():
        for k, l, b in g.terms():
            if i + j + k + l < n:
                out[(i + k, j + l)] = (out.get((i + k, j + l), 0) + a * b) % p
    return {k: v for k, v in out.items() if v}


def ring_laws(rng, count):
    for _ in range(count):
        p = rng.choice(PRIMES)
        n = rng.randint(1, 9)
        f, g, h = (rand_series(rng, p, rng.randint(n, n + 3)) for _ in range(3))
        ctx = (p, f.to_json(), g.to_json(), h.to_json())
        assert (f + g) + h == f + (g + h), ctx
        assert f * g == g * f, ctx
        assert (f * g) * h == f * (g * h), ctx
        assert f * (g + h) == f * g + f * h, ctx
        assert (f - f).is_zero(), ctx
        assert f * TruncatedSeries.constant(1, p, n) == f, ctx
        fg = f * g
        assert {(i, j): c for i, j, c in fg.terms()} == naive_product(f, g), ctx
    return count


def _random_substitution(rng, p, n):
    kind = rng.randrange(3)
    if kind == 0:
        return monomial_chart(rng.randint(1, 3))
    if kind == 1:
        return translation_chart(rng.randint(1, 3), rng.randrange(1, p))
    X = rand_series(rng, p, n, unit=False, min_order=1)
    Y = rand_series(rng, p, n, unit=False, min_order=1)
    return Substitution(X, Y)


def substitution_homomorphism(rng, count):
    for _ in range(count):
        p = rng.choice(PRIMES)
        n = rng.randint(2, 9)
        f, g = rand_series(rng, p, n), rand_series(rng, p, n)
        s = _random_substitution(rng, p, n)
        ctx = (p, s if not isinstance(s, Substitution) else "generic", f.to_json(), g.to_json())
        assert s.pullback(f * g) == s.pullback(f) * s.pullback(g), ctx
        assert s.pullback(f + g) == s.pullback(f) + s.pullback(g), ctx
        c = TruncatedSeries.constant(rng.randrange(p), p, n)
        assert s.pullback(c) == c, ctx
    return count


def frobenius_additivity(rng, count):
    for _ in range(count):
        p = rng.choice(PRIMES)
        n = rng.randint(1, 5)
        f, g = rand_series(rng, p, n), rand_series(rng, p, n)
        ctx = (p, f.to_json(), g.to_json())
        assert (f + g).frobenius() == f.frobenius() + g.frobenius(), ctx
        assert f.frobenius() == f ** p, ctx
        a, b = rng.randrange(p), rng.randrange(p)
        assert pow(a + b, p, p) == (pow(a, p, p) + pow(b, p, p)) % p, ctx
    return count


def unit_inverse(rng, count):
    for _ in range(count):
        p = rng.choice(PRIMES)
        n = rng.randint(1, 10)
        f = rand_series(rng, p, n, unit=True)
        g = series_invert_unit(f)
        one = TruncatedSeries.constant(1, p, n)
        assert f * g == one and g * f == one, (p, f.to_json())
        assert g.precision == n, (p, f.to_json())
    return count


def weierstrass_reconstruction(rng, count):
    for _ in range(count):
        p = rng.choice(PRIMES)
        n = rng.randint(6, 12)
        d = rng.randint(0, 3)
        f = rand_series(rng, p, n)
        coeffs = {(i, j): c for i, j, c in f.terms()}
        for j in range(d):
            coeffs.pop((0, j), None)
        coeffs[(0, d)] = rng.randrange(1, p)
        f = TruncatedSeries(coeffs, p, n)
        ctx = (p, d, f.to_json())
        unit, poly = weierstrass_prepare(f, "y")
        assert poly.degree == d, ctx
        assert unit.is_unit(), ctx
        W = poly.series(n) if d == 0 else poly.series()
        # output precision shrinks with the weighting, never below n / max(d, 1)
        assert W.precision * max(d, 1) >= n - max(d, 1), ctx
        for j in range(min(d + 1, W.precision)):
            assert W[0, j] == (j == d), ctx
        assert unit * W == f, ctx
    return count


def _resolvable(rng, p, n, x, y, v):
    """unit * x^a * y^b * v^c with pa + b + pc small enough to certify at depth 1."""
    while True:
        a, b, c = rng.randint(0, 2), rng.randint(0, 3), rng.randint(0, 1)
        if p * a + b + p * c <= 4:
            break
    unit = rand_series(rng, p, n, density=0.3, unit=True)
    return unit * x ** a * y ** b * v ** c, (a, b, c)


_TRANSCRIPTS = {}


def _transcript():
    if "t" not in _TRANSCRIPTS:
        _TRANSCRIPTS["t"] = run_ladder(3, 2, AlphaPolicy("smallest"), 12)
    return _TRANSCRIPTS["t"]


def value_laws(rng, count):
    tr = _transcript()
    p, n = 3, 30
    x = TruncatedSeries.monomial(1, 0, p, n)
    y = TruncatedSeries.monomial(0, 1, p, n)
    v = y ** p + x
    done = 0
    while done < count:
        f, ef = _resolvable(rng, p, n, x, y, v)
        g, eg = _resolvable(rng, p, n, x, y, v)
        vf, vg = value_of(f, tr), value_of(g, tr)
        ctx = (ef, eg, f.to_json(), g.to_json())
        # oracle from exponents: nu(x) = 1, nu(y) = 1/p, nu(v) = 1
        assert vf.as_fraction() * p == p * ef[0] + ef[1] + p * ef[2], ctx
        assert value_of(f * g, tr) == vf + vg, ctx
        if vf != vg:
            assert value_of(f + g, tr) == min(vf, vg), ctx
        done += 1
    return done


SUITES = {
    "series ring laws": ring_laws,
    "substitution homomorphism": substitution_homomorphism,
    "Frobenius additivity": frobenius_additivity,
    "unit-inverse correctness": unit_inverse,
    "weierstrass_prepare reconstruction": weierstrass_reconstruction,
    "value additivity/ultrametric": value_laws,
}


def run_suite(name, count, seed=20261015):
    return SUITES[name](random.Random(f"{seed}/{name}"), count)
