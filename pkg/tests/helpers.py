"""Shared generators and property checks used by unit and acceptance tests."""

from __future__ import annotations

import random
from fractions import Fraction

from asymvals import Poly, parse


def rand_rational(rng: random.Random, span: int = 9, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_poly(
    rng: random.Random,
    names=("x", "y", "z"),
    max_terms: int = 5,
    max_exp: int = 4,
    laurent: bool = False,
) -> Poly:
    acc = Poly.zero()
    for _ in range(rng.randint(0, max_terms)):
        coeff = rand_rational(rng)
        exps = {}
        for name in names:
            lo = -max_exp if laurent else 0
            e = rng.randint(lo, max_exp)
            if e:
                exps[name] = Fraction(e)
        acc = acc + Poly.monomial(coeff, exps) if coeff else acc
    return acc


def check_ring_axioms(seed: int, cases: int) -> int:
    """Commutativity, associativity, distributivity on random triples."""
    rng = random.Random(seed)
    for i in range(cases):
        a = rand_poly(rng)
        b = rand_poly(rng)
        c = rand_poly(rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert (a - a).is_zero()
    return cases


def check_substitution_homomorphism(seed: int, cases: int) -> int:
    rng = random.Random(seed)
    for i in range(cases):
        a = rand_poly(rng, max_terms=4, max_exp=3)
        b = rand_poly(rng, max_terms=4, max_exp=3)
        repl = rand_poly(rng, names=("u", "v"), max_terms=3, max_exp=2)
        var = rng.choice(("x", "y", "z"))
        assert (a * b).substitute(var, repl) == a.substitute(var, repl) * b.substitute(var, repl)
        assert (a + b).substitute(var, repl) == a.substitute(var, repl) + b.substitute(var, repl)
    return cases


def check_product_rule(seed: int, cases: int) -> int:
    rng = random.Random(seed)
    for i in range(cases):
        a = rand_poly(rng, max_terms=4, max_exp=3, laurent=True)
        b = rand_poly(rng, max_terms=4, max_exp=3, laurent=True)
        var = rng.choice(("x", "y", "z"))
        lhs = (a * b).derivative(var)
        rhs = a * b.derivative(var) + b * a.derivative(var)
        assert lhs == rhs
    return cases


def check_decompose_roundtrip(seed: int, cases: int) -> int:
    rng = random.Random(seed)
    for i in range(cases):
        p = rand_poly(rng, max_terms=6, max_exp=4, laurent=True)
        var = rng.choice(("x", "y", "z"))
        rebuilt = Poly.zero()
        for e, coeff in p.decompose(var):
            rebuilt = rebuilt + coeff * Poly.var(var, e)
        assert rebuilt == p
    return cases


def check_parse_print_roundtrip(seed: int, cases: int) -> int:
    rng = random.Random(seed)
    for i in range(cases):
        p = rand_poly(rng, max_terms=6, max_exp=4, laurent=True)
        assert parse(str(p)) == p
    return cases


def check_float_agreement(seed: int, cases: int) -> int:
    """evaluate_float within 1e-12 relative on well-conditioned samples."""
    rng = random.Random(seed)
    checked = 0
    for i in range(cases):
        p = rand_poly(rng, max_terms=4, max_exp=3)
        if p.is_zero():
            continue
        bindings = {v: rand_rational(rng, span=10, den=2) for v in ("x", "y", "z")}
        exact = p.evaluate(bindings)
        if abs(exact) < Fraction(1, 10**6):
            continue
        # Guard against catastrophic cancellation: the float comparison is
        # only meaningful when the term magnitudes do not dwarf the value.
        magnitude = sum(
            abs(Poly({key: coeff}).evaluate(bindings)) for key, coeff in p.terms()
        )
        if magnitude > abs(exact) * 100:
            continue
        approx = p.evaluate_float({k: float(v) for k, v in bindings.items()})
        assert abs(approx - float(exact)) <= 1e-12 * abs(float(exact))
        checked += 1
    assert checked > cases // 4
    return checked
