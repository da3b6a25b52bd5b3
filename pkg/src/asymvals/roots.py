"""Real-root machinery for univariate polynomials with integer exponents.

Rational roots are found exactly through content extraction and divisor
enumeration; the remaining real roots are isolated into disjoint rational
intervals by bisection on Sturm-sequence sign variations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import NotUnivariate
from .poly import Poly

ISOLATION_WIDTH = Fraction(1, 10**6)


@dataclass(frozen=True)
class RootReport:
    """Exact rational roots plus isolating intervals for irrational ones."""

    rational_roots: list[tuple[Fraction, int]]
    irrational_root_intervals: list[tuple[Fraction, Fraction, int]]
    squarefree_part: Poly
    var: str = "r"

    def all_rational(self) -> bool:
        return not self.irrational_root_intervals

    def root_values(self) -> list[Fraction]:
        return [r for r, _ in self.rational_roots]


def _dense_coeffs(p: Poly, var: str) -> list[Fraction]:
    """Coefficient list c[0..n] with c[i] the coefficient of var**i."""
    if p.is_zero():
        return []
    extra = p.variables() - {var}
    if extra:
        raise NotUnivariate(f"polynomial has extra variables {sorted(extra)}")
    degree = p.degree_in(var)
    if degree is None or degree.denominator != 1:
        raise NotUnivariate("fractional exponents are not allowed here")
    coeffs = [Fraction(0)] * (int(degree) + 1)
    for key, coeff in p.terms():
        exps = dict(key)
        e = exps.get(var, Fraction(0))
        if e.denominator != 1 or e < 0:
            raise NotUnivariate("exponents must be nonnegative integers")
        coeffs[int(e)] = coeff
    return coeffs


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return out


def _eval(coeffs: list[Fraction], point: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * point + c
    return acc


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction] | None:
    """Divide by (var - root); None when root is not an exact root."""
    out: list[Fraction] = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[i] + acc * root
        out[i - 1] = acc
    if coeffs[0] + acc * root != 0:
        return None
    return out


def _derivative(coeffs: list[Fraction]) -> list[Fraction]:
    return [coeffs[i] * i for i in range(1, len(coeffs))]


def _poly_divmod(num: list[Fraction], den: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    num = list(num)
    den = _trim(den)
    q = [Fraction(0)] * max(len(num) - len(den) + 1, 0)
    while len(_trim(num)) >= len(den) and den:
        num = _trim(num)
        shift = len(num) - len(den)
        factor = num[-1] / den[-1]
        q[shift] = factor
        for i, c in enumerate(den):
            num[shift + i] -= factor * c
    return q, _trim(num)


def _gcd_poly(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def _sturm_chain(coeffs: list[Fraction]) -> list[list[Fraction]]:
    chain = [_trim(coeffs), _trim(_derivative(coeffs))]
    while chain[-1]:
        _, rem = _poly_divmod(chain[-2], chain[-1])
        if not rem:
            break
        chain.append([-c for c in rem])
    return [c for c in chain if c]


def _variations(chain: list[list[Fraction]], point: Fraction) -> int:
    signs = []
    for coeffs in chain:
        v = _eval(coeffs, point)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _root_bound(coeffs: list[Fraction]) -> Fraction:
    lead = abs(coeffs[-1])
    return 1 + max((abs(c) / lead for c in coeffs[:-1]), default=Fraction(0))


def real_roots(p: Poly, var: str) -> RootReport:
    """All real roots of p in var: rational ones exact, others isolated."""
    coeffs = _trim(_dense_coeffs(p, var))
    if not coeffs:
        raise NotUnivariate("the zero polynomial has no root report")
    if len(coeffs) == 1:
        return RootReport([], [], p, var)

    rational: dict[Fraction, int] = {}

    # Root at zero first: strips the trailing gap.
    zero_mult = 0
    while coeffs[0] == 0:
        zero_mult += 1
        coeffs = coeffs[1:]
    if zero_mult:
        rational[Fraction(0)] = zero_mult

    # Integer version for divisor enumeration.
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    content = 0
    for c in ints:
        content = gcd(content, c)
    if content > 1:
        ints = [c // content for c in ints]

    def divisors(n: int) -> list[int]:
        n = abs(n)
        out = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.add(d)
                out.add(n // d)
            d += 1
        return sorted(out)

    work = [Fraction(c) for c in ints]
    if len(work) > 1 and work[0] != 0:
        candidates = sorted(
            {
                Fraction(sign * pnum, pden)
                for pnum in divisors(ints[0])
                for pden in divisors(ints[-1])
                for sign in (1, -1)
            }
        )
        for cand in candidates:
            while len(work) > 1:
                deflated = _deflate(work, cand)
                if deflated is None:
                    break
                work = deflated
                rational[cand] = rational.get(cand, 0) + 1

    intervals: list[tuple[Fraction, Fraction, int]] = []
    work = _trim(work)
    if len(work) > 1:
        sf = _squarefree_coeffs(work)
        chain = _sturm_chain(sf)
        bound = _root_bound(sf)
        stack = [(-bound - 1, bound + 1)]
        while stack:
            lo, hi = stack.pop()
            count = _variations(chain, lo) - _variations(chain, hi)
            if count <= 0:
                continue
            if count == 1 and hi - lo <= ISOLATION_WIDTH:
                intervals.append((lo, hi, 1))
                continue
            mid = (lo + hi) / 2
            # Deflated remainder has no rational roots, so mid is never one.
            stack.append((lo, mid))
            stack.append((mid, hi))
        intervals.sort()

    sf_full = squarefree_part(p, var)
    roots_sorted = sorted(rational.items())
    return RootReport(roots_sorted, intervals, sf_full, var)


def _squarefree_coeffs(coeffs: list[Fraction]) -> list[Fraction]:
    g = _gcd_poly(coeffs, _derivative(coeffs))
    if len(g) <= 1:
        return _trim(coeffs)
    q, _ = _poly_divmod(coeffs, g)
    return _trim(q)


def squarefree_part(p: Poly, var: str) -> Poly:
    """p divided by gcd(p, p'), normalized monic."""
    coeffs = _trim(_dense_coeffs(p, var))
    if len(coeffs) <= 1:
        return p
    sf = _squarefree_coeffs(coeffs)
    lead = sf[-1]
    acc = Poly.zero()
    for i, c in enumerate(sf):
        acc = acc + Poly.monomial(c / lead, {var: i})
    return acc
