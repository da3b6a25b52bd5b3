"""Asymptotic-value engine for normalized bivariate polynomials.

Implements the Peretz staircase: truncation assertions, bottom-up search for
the active level, Newton-polygon dominant balance, branch refinement with
error variables and o-bounds, residual classification, asymptotic identities
in standard form, and exact value-set extraction.  Directions at infinity are
handled by substituting g = sigma*t with t -> +inf, so fractional powers of t
always have positive base and every object stays an exact Laurent polynomial.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import (
    AllTrivial,
    ExponentDenominatorMismatch,
    NoBalance,
    NotBivariate,
    NotLinearInC,
    Unclassifiable,
    VariableClash,
)
from .poly import Poly
from .roots import RootReport, real_roots

LIMIT_SYMBOL = "C"
TARGET_LIMIT = "C"
TARGET_ZERO = "0"
MAX_REFINEMENTS = 8


# ---------------------------------------------------------------------------
# assertions


@dataclass(frozen=True)
class Assertion:
    level: int
    body: Poly
    target: str  # TARGET_LIMIT for level 0, TARGET_ZERO otherwise


@dataclass(frozen=True)
class AssertionList:
    decomposition_var: str
    coefficient_var: str
    assertions: tuple[Assertion, ...]

    def __iter__(self):
        return iter(self.assertions)

    def __len__(self):
        return len(self.assertions)

    def __getitem__(self, level: int) -> Assertion:
        return self.assertions[level]


def normalization_check(p: Poly) -> bool:
    """True iff total degree equals the sum of the per-variable degrees."""
    names = sorted(p.variables())
    if len(names) > 2:
        raise NotBivariate(f"expected at most two variables, got {names}")
    if LIMIT_SYMBOL in names:
        raise VariableClash(f"input must not use the reserved symbol {LIMIT_SYMBOL!r}")
    if not p.has_integer_exponents() or not all(
        e >= 0 for key, _ in p.terms() for _, e in key
    ):
        raise NotBivariate("expected a plain polynomial with nonnegative exponents")
    if p.is_zero():
        return True
    total = p.total_degree()
    per_var = sum((p.degree_in(v) or Fraction(0) for v in names), Fraction(0))
    return total == per_var


def build_assertions(p: Poly, decomposition_var: str) -> AssertionList:
    """Truncation assertions of p along decomposition_var, levels 0..n."""
    names = sorted(p.variables())
    if LIMIT_SYMBOL in names:
        raise VariableClash(f"input must not use the reserved symbol {LIMIT_SYMBOL!r}")
    others = [v for v in names if v != decomposition_var]
    if len(others) > 1:
        raise NotBivariate(f"too many variables for a decomposition: {names}")
    coefficient_var = others[0] if others else "_"
    parts = {int(e): c for e, c in p.decompose(decomposition_var)}
    n = max(parts) if parts else 0
    zero_at = {coefficient_var: Poly.zero()}
    assertions = []
    for k in range(n + 1):
        body = Poly.zero()
        for i in range(k + 1, n + 1):
            coeff = parts.get(i)
            if coeff is not None:
                body = body + coeff * Poly.var(decomposition_var, i - k)
        ck = parts.get(k)
        if ck is not None:
            body = body + ck.substitute_many(zero_at)
        assertions.append(
            Assertion(k, body, TARGET_LIMIT if k == 0 else TARGET_ZERO)
        )
    return AssertionList(decomposition_var, coefficient_var, tuple(assertions))


def first_active_level(alist: AssertionList) -> int:
    """Largest level whose assertion carries a nonzero constant term."""
    for assertion in reversed(alist.assertions):
        constant = assertion.body.coeff_of({})
        if constant != 0:
            return assertion.level
    raise AllTrivial("every truncation constant vanishes; no active level")


def apply_substitution(alist: AssertionList, var: str, replacement: Poly) -> AssertionList:
    """Compose every assertion body with var -> replacement, targets kept."""
    if LIMIT_SYMBOL in replacement.variables():
        raise VariableClash(
            f"replacement must not use the reserved symbol {LIMIT_SYMBOL!r}"
        )
    return AssertionList(
        alist.decomposition_var,
        alist.coefficient_var,
        tuple(
            Assertion(a.level, a.body.substitute(var, replacement), a.target)
            for a in alist.assertions
        ),
    )


# ---------------------------------------------------------------------------
# o-bounds and simplification


@dataclass(frozen=True)
class OBound:
    """bounded_var = o(growth_var**(-alpha)) as growth_var -> +inf."""

    bounded_var: str
    growth_var: str
    alpha: Fraction

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("o-bound exponent must be positive")


@dataclass(frozen=True)
class OSimplified:
    poly: Poly
    dropped: tuple[Poly, ...]
    unbounded: tuple[Poly, ...]


def _term_exponents(key, growth: str, bounded: str) -> tuple[Fraction, Fraction]:
    exps = dict(key)
    return exps.get(growth, Fraction(0)), exps.get(bounded, Fraction(0))


def o_simplify(
    body: Poly, bound: OBound, known_vanishing: Sequence[Poly] = ()
) -> OSimplified:
    """Drop the terms that provably tend to zero under the o-bound.

    A term g**e * z**m (times bounded symbols) is dropped when m >= 1 and
    e <= m*alpha, or when m = 0 and e < 0.  Terms divisible by a known
    vanishing monomial with a bounded cofactor are dropped as well.  Pure
    growth terms (m = 0, e > 0) are kept and flagged unbounded.
    """
    g, z, alpha = bound.growth_var, bound.bounded_var, bound.alpha
    vanish_keys = []
    for v in known_vanishing:
        if v.num_terms() != 1:
            raise ValueError("known-vanishing facts must be monomials")
        (vkey, _), = v.terms()
        vanish_keys.append(_term_exponents(vkey, g, z))

    def bounded(e: Fraction, m: Fraction) -> bool:
        return e <= m * alpha

    def vanishes(e: Fraction, m: Fraction) -> bool:
        if m >= 1 and e <= m * alpha:
            return True
        if m == 0 and e < 0:
            return True
        for ve, vm in vanish_keys:
            j = 1
            while vm * j <= m and j <= 8:
                if bounded(e - ve * j, m - vm * j):
                    return True
                j += 1
        return False

    kept: Poly = Poly.zero()
    dropped: list[Poly] = []
    unbounded: list[Poly] = []
    for key, coeff in body.terms():
        e, m = _term_exponents(key, g, z)
        term = Poly({key: coeff})
        if vanishes(e, m):
            dropped.append(term)
            continue
        if m == 0 and e > 0:
            unbounded.append(term)
        kept = kept + term
    return OSimplified(kept, tuple(dropped), tuple(unbounded))


# ---------------------------------------------------------------------------
# balances


@dataclass(frozen=True)
class BalanceResult:
    """Outcome of a dominant-balance or residual classification."""

    kind: str  # trivial | balance | contradiction | unbounded | bound | value
    power_product: tuple[Fraction, int] | None = None  # u = g**a * v**b
    limit_poly: Poly | None = None  # univariate in r, may contain C
    witness: Poly | None = None
    new_alpha: Fraction | None = None
    value_poly: Poly | None = None
    symbolic: bool = False  # True when r-coefficients carry free symbols


def _slope_analysis(body: Poly, growth: str, small: str):
    """Newton-edge data: slope, on-line polynomial in r, constant bucket."""
    online: dict[int, Poly] = {}
    constant = Poly.zero()
    slope = None
    ms: list[int] = []
    for key, coeff in body.terms():
        e, m = _term_exponents(key, growth, small)
        if m >= 1:
            q = Fraction(e, m) if m else None
            if slope is None or q > slope:
                slope = q
    for key, coeff in body.terms():
        e, m = _term_exponents(key, growth, small)
        rest = dict(key)
        rest.pop(growth, None)
        rest.pop(small, None)
        rest_poly = Poly({tuple(sorted(rest.items())): coeff})
        if m == 0 and e == 0:
            constant = constant + rest_poly
        elif m >= 1 and slope is not None and e == slope * m:
            if m.denominator != 1:
                raise Unclassifiable("fractional error-variable exponent in balance")
            online[int(m)] = online.get(int(m), Poly.zero()) + rest_poly
    if slope is None:
        return None, None, None, constant
    g = 0
    for m in online:
        g = gcd(g, m)
    if g == 0:
        return slope, None, None, constant
    a_exp = slope * g
    r_poly = Poly.zero()
    symbolic = False
    for m, c in online.items():
        if not c.is_constant():
            symbolic = True
        r_poly = r_poly + c * Poly.var("r", m // g)
    return slope, (a_exp, g), (r_poly, symbolic), constant


def classify_residual(
    simplified: Poly, target: str, growth_var: str, error_var: str
) -> BalanceResult:
    """Classify an o-simplified assertion residual.

    Patterns, in order: zero (trivial); pure unbounded growth; a constant
    (contradiction at target 0, a closed value at target C); a single
    monomial at target 0 (tightened o-bound alpha = e/m); a polynomial in a
    power product u = g**a * z**b (balance; the limit polynomial carries the
    limit symbol when the target is C).
    """
    body = simplified
    if body.is_zero():
        return BalanceResult("trivial")
    # terms that vanish outright carry no information here
    kept = Poly.zero()
    for key, coeff in body.terms():
        e, m = _term_exponents(key, growth_var, error_var)
        if m == 0 and e < 0:
            continue
        kept = kept + Poly({key: coeff})
    body = kept
    if body.is_zero():
        return BalanceResult("trivial")

    unbounded = [
        Poly({key: coeff})
        for key, coeff in body.terms()
        if _term_exponents(key, growth_var, error_var)[1] == 0
        and _term_exponents(key, growth_var, error_var)[0] > 0
    ]
    if unbounded:
        return BalanceResult("unbounded", witness=unbounded[0])

    if not any(
        _term_exponents(key, growth_var, error_var)[1] >= 1 for key, _ in body.terms()
    ):
        # constant with respect to growth and error variables
        if target == TARGET_ZERO:
            return BalanceResult("contradiction", witness=body)
        return BalanceResult("value", value_poly=body)

    if (
        target == TARGET_ZERO
        and body.num_terms() == 1
        and body.coeff_of({}) == 0
    ):
        (key, coeff), = body.terms()
        e, m = _term_exponents(key, growth_var, error_var)
        if m >= 1:
            return BalanceResult(
                "bound",
                new_alpha=Fraction(e, m),
                power_product=(Fraction(e, m) * 1, 1),
            )

    slope, power, online, constant = _slope_analysis(body, growth_var, error_var)
    if power is None or online is None:
        raise Unclassifiable(f"no usable power product in residual {body}")
    r_poly, symbolic = online
    limit = r_poly + constant
    if target == TARGET_LIMIT:
        limit = limit - Poly.var(LIMIT_SYMBOL)
    return BalanceResult(
        "balance", power_product=power, limit_poly=limit, symbolic=symbolic
    )


def dominant_balance(assertion: Assertion, vanishing_var: str) -> BalanceResult:
    """Newton-polygon balance of an active assertion as vanishing_var -> 0."""
    body = assertion.body
    if body.is_zero():
        return BalanceResult("trivial")
    if body.is_constant():
        return BalanceResult("contradiction", witness=body)
    names = body.variables() - {vanishing_var}
    growth = sorted(names)[0] if names else None
    if growth is None:
        raise NoBalance("assertion body has no growth variable")
    for key, _ in body.terms():
        e, m = _term_exponents(key, growth, vanishing_var)
        if m == 0 and e > 0:
            raise NoBalance(f"pure growth term blocks every edge in {body}")
    slope, power, online, constant = _slope_analysis(body, growth, vanishing_var)
    if power is None or online is None or slope is None or slope <= 0:
        raise NoBalance(f"no balancing edge for {body}")
    if constant.is_zero():
        raise NoBalance("active assertion lost its constant term")
    r_poly, symbolic = online
    limit = r_poly + constant
    if assertion.target == TARGET_LIMIT:
        limit = limit - Poly.var(LIMIT_SYMBOL)
    return BalanceResult(
        "balance", power_product=power, limit_poly=limit, symbolic=symbolic
    )


def second_stage_value_map(
    limit_poly: Poly,
    direction: int = 1,
    power_product: tuple[Fraction, int] = (Fraction(3), 2),
    param: str = "s",
) -> Poly:
    """Solve a C-linear limit polynomial for C and reparametrize the root.

    The power product u = g**a * z**b forces sign(u) = direction**a when b is
    even, giving r = sign*param**2; odd b leaves the root sign free and the
    parametrization is r = param.
    """
    c_parts = limit_poly.decompose(LIMIT_SYMBOL)
    by_exp = {int(e): c for e, c in c_parts}
    if sorted(by_exp) not in ([0, 1], [1]):
        raise NotLinearInC(f"{limit_poly} is not linear in {LIMIT_SYMBOL}")
    c1 = by_exp[1]
    c0 = by_exp.get(0, Poly.zero())
    if not c1.is_constant():
        raise NotLinearInC("the limit symbol must have a constant coefficient")
    solved = c0 * Fraction(-1, 1) * (1 / c1.constant_value())
    a_exp, b = power_product
    if b % 2 == 0:
        sign = 1 if direction > 0 else (1 if a_exp % 2 == 0 else -1)
        image = Poly.var(param, 2) * sign
    else:
        image = Poly.var(param)
    return solved.substitute("r", image)


# ---------------------------------------------------------------------------
# branches and identities


@dataclass(frozen=True)
class BranchState:
    mode: str
    direction: int
    expansion: tuple[tuple[Fraction | str, Fraction], ...]
    error_var: str
    bound: OBound | None
    stage: str  # initial | refined | valued | contradicted | stalled
    dep_var: str
    growth_var: str
    root: Fraction | None = None
    value_poly: Poly | None = None
    limit_poly: Poly | None = None
    note: str = ""

    def dep_image(self, t_var: str, error: str | None = None) -> Poly:
        acc = Poly.zero()
        for coeff, exponent in self.expansion:
            if isinstance(coeff, str):
                acc = acc + Poly.var(coeff) * Poly.var(t_var, exponent)
            else:
                acc = acc + Poly.var(t_var, exponent) * coeff
        if error is not None:
            acc = acc + Poly.var(error)
        return acc

    def free_parameter(self) -> str | None:
        for coeff, _ in reversed(self.expansion):
            if isinstance(coeff, str):
                return coeff
        return None


@dataclass(frozen=True)
class AsymptoticIdentity:
    """Exact identity p(sign/x**k, y*x**N + sum a_i x**i) = rhs(x, y).

    The formal variables x, y are the identity's own; dep_var names which of
    the input polynomial's variables receives the parametrized image and
    growth_var which one receives sign/x**k.
    """

    sign: int
    k: int
    n_power: int
    lower_coeffs: tuple[Poly, ...]  # coefficients of x**(N-1) .. x**0
    growth_var: str
    dep_var: str
    rhs: Poly | None = None
    param: str = "y"
    formal_var: str = "x"

    def growth_image(self) -> Poly:
        return Poly.var(self.formal_var, -self.k) * self.sign

    def dep_image(self) -> Poly:
        acc = Poly.var(self.param) * Poly.var(self.formal_var, self.n_power)
        for i, coeff in enumerate(self.lower_coeffs):
            power = self.n_power - 1 - i
            acc = acc + coeff * Poly.var(self.formal_var, power)
        return acc

    def substitution_text(self) -> dict[str, str]:
        return {
            self.growth_var: str(self.growth_image()),
            self.dep_var: str(self.dep_image()),
        }


def build_identity(branch: BranchState) -> AsymptoticIdentity:
    """Standard-form identity from a valued branch expansion."""
    if not branch.expansion:
        raise ExponentDenominatorMismatch("branch has no expansion terms")
    last_coeff, last_exp = branch.expansion[-1]
    if not isinstance(last_coeff, str):
        raise ExponentDenominatorMismatch(
            "the final expansion coefficient must be the free parameter"
        )
    k = 1
    for _, exponent in branch.expansion:
        k = lcm(k, (-exponent).denominator)
    n_power_frac = -last_exp * k
    if n_power_frac.denominator != 1:
        raise ExponentDenominatorMismatch("exponents do not share the denominator")
    n_power = int(n_power_frac)
    lower = [Poly.zero()] * n_power
    for coeff, exponent in branch.expansion[:-1]:
        power = int(-exponent * k)
        entry = Poly.var(coeff) if isinstance(coeff, str) else Poly.const(coeff)
        lower[n_power - 1 - power] = lower[n_power - 1 - power] + entry
    return AsymptoticIdentity(
        sign=branch.direction,
        k=k,
        n_power=n_power,
        lower_coeffs=tuple(lower),
        growth_var=branch.growth_var,
        dep_var=branch.dep_var,
    )


def verify_identity(p: Poly, ident: AsymptoticIdentity) -> tuple[bool, Poly]:
    """Compose p with the identity substitution and check polynomiality."""
    mapping = {
        ident.growth_var: ident.growth_image(),
        ident.dep_var: ident.dep_image(),
    }
    rhs = p.substitute_many(mapping)
    ok = rhs.has_integer_exponents() and all(
        e >= 0 for key, _ in rhs.terms() for _, e in key
    )
    if ok and ident.rhs is not None:
        ok = rhs == ident.rhs
    return ok, rhs


def asymptotic_values(ident: AsymptoticIdentity) -> Poly:
    """Right-hand side at x = 0: the value polynomial of the curve family."""
    rhs = ident.rhs
    if rhs is None:
        raise ValueError("identity carries no verified right-hand side")
    values = rhs.substitute(ident.formal_var, Poly.zero())
    if len(values.variables()) > 1:
        raise Unclassifiable(f"value polynomial {values} is not univariate")
    return values


# ---------------------------------------------------------------------------
# value sets


@dataclass(frozen=True)
class Interval:
    lower: Fraction | None  # None = -inf
    upper: Fraction | None  # None = +inf
    lower_closed: bool
    upper_closed: bool

    def contains(self, q: Fraction) -> bool:
        if self.lower is not None and (q < self.lower or (q == self.lower and not self.lower_closed)):
            return False
        if self.upper is not None and (q > self.upper or (q == self.upper and not self.upper_closed)):
            return False
        return True


@dataclass(frozen=True)
class ValueSet:
    intervals: tuple[Interval, ...]
    points: tuple[Fraction, ...]

    def contains(self, q: Fraction) -> bool:
        return q in self.points or any(iv.contains(q) for iv in self.intervals)


def _poly_range_on_interval(p: Poly, var: str, lo: Fraction, hi: Fraction):
    """Exact interval-arithmetic bounds for p over [lo, hi]."""
    vmin = vmax = Fraction(0)
    for key, coeff in p.terms():
        exps = dict(key)
        e = exps.get(var, Fraction(0))
        if e == 0:
            tmin = tmax = coeff
        else:
            k = int(e)
            candidates = [lo**k, hi**k]
            if lo < 0 < hi:
                candidates.append(Fraction(0))
            tmin, tmax = min(candidates) * 1, max(candidates) * 1
            tmin, tmax = sorted((coeff * tmin, coeff * tmax))
        vmin += tmin
        vmax += tmax
    return vmin, vmax


def value_set(value_polys: Iterable[Poly]) -> ValueSet:
    """Exact image of the real line under each polynomial, as a union."""
    intervals: list[Interval] = []
    points: list[Fraction] = []
    for p in value_polys:
        if p.is_constant():
            points.append(p.constant_value())
            continue
        names = sorted(p.variables())
        if len(names) != 1:
            raise Unclassifiable(f"value polynomial {p} is not univariate")
        var = names[0]
        degree = p.degree_in(var)
        if degree is None or degree.denominator != 1:
            raise Unclassifiable("value polynomial must have integer exponents")
        lead = p.coeff_of({var: degree})
        if int(degree) % 2 == 1:
            intervals.append(Interval(None, None, False, False))
            continue
        report = real_roots(p.derivative(var), var)
        candidates: list[Fraction] = [p.evaluate({var: r}) for r, _ in report.rational_roots]
        widened: list[Fraction] = []
        for lo, hi, _ in report.irrational_root_intervals:
            vlo, vhi = _poly_range_on_interval(p, var, lo, hi)
            widened.append(vlo if lead > 0 else vhi)
        if lead > 0:
            bound = min(candidates + widened)
            intervals.append(Interval(bound, None, True, False))
        else:
            bound = max(candidates + widened)
            intervals.append(Interval(None, bound, False, True))
    return _normalize_value_set(intervals, points)


def _normalize_value_set(intervals: list[Interval], points: list[Fraction]) -> ValueSet:
    def low_key(iv: Interval):
        return (iv.lower is not None, iv.lower if iv.lower is not None else Fraction(0))

    merged: list[Interval] = []
    for iv in sorted(intervals, key=low_key):
        if merged:
            last = merged[-1]
            if _overlaps(last, iv):
                merged[-1] = _merge(last, iv)
                continue
        merged.append(iv)
    out_points = sorted(
        {q for q in points if not any(iv.contains(q) for iv in merged)}
    )
    return ValueSet(tuple(merged), tuple(out_points))


def _overlaps(a: Interval, b: Interval) -> bool:
    if a.upper is None or b.lower is None:
        return True
    if b.lower < a.upper:
        return True
    if b.lower == a.upper and (a.upper_closed or b.lower_closed):
        return True
    return False


def _merge(a: Interval, b: Interval) -> Interval:
    if a.lower is None or b.lower is None:
        lower, lower_closed = None, False
    elif a.lower < b.lower:
        lower, lower_closed = a.lower, a.lower_closed
    elif b.lower < a.lower:
        lower, lower_closed = b.lower, b.lower_closed
    else:
        lower, lower_closed = a.lower, a.lower_closed or b.lower_closed
    if a.upper is None or b.upper is None:
        upper, upper_closed = None, False
    elif a.upper > b.upper:
        upper, upper_closed = a.upper, a.upper_closed
    elif b.upper > a.upper:
        upper, upper_closed = b.upper, b.upper_closed
    else:
        upper, upper_closed = a.upper, a.upper_closed or b.upper_closed
    return Interval(lower, upper, lower_closed, upper_closed)


# ---------------------------------------------------------------------------
# the pipeline


@dataclass(frozen=True)
class Rejection:
    level: int
    witness: str
    direction: int
    kind: str  # contradiction | sign | unbounded


@dataclass
class PipelineReport:
    input: str
    mode: str
    normalization: bool
    assertions: tuple[Assertion, ...] = ()
    branches: tuple[BranchState, ...] = ()
    identities: tuple[AsymptoticIdentity, ...] = ()
    values: ValueSet | None = None
    rejections: tuple[Rejection, ...] = ()
    error: str = ""

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "mode": self.mode,
            "normalization": self.normalization,
            "assertions": [
                {"level": a.level, "body": str(a.body), "target": a.target}
                for a in self.assertions
            ],
            "branches": [
                {
                    "direction": b.direction,
                    "expansion": [
                        {
                            "coeff": c if isinstance(c, str) else _frac_str(c),
                            "exponent": _frac_str(e),
                        }
                        for c, e in b.expansion
                    ],
                    "bound": (
                        {
                            "var": b.bound.bounded_var,
                            "growth_var": b.bound.growth_var,
                            "alpha": _frac_str(b.bound.alpha),
                        }
                        if b.bound
                        else None
                    ),
                    "stage": b.stage,
                    "value": str(b.value_poly) if b.value_poly is not None else None,
                    "note": b.note,
                }
                for b in self.branches
            ],
            "identities": [
                {
                    "sign": i.sign,
                    "k": i.k,
                    "substitution": i.substitution_text(),
                    "rhs": str(i.rhs) if i.rhs is not None else None,
                    "verified": i.rhs is not None,
                }
                for i in self.identities
            ],
            "values": value_set_to_dict(self.values) if self.values else None,
            "rejections": [
                {
                    "level": r.level,
                    "witness": r.witness,
                    "direction": r.direction,
                    "kind": r.kind,
                }
                for r in self.rejections
            ],
            "error": self.error,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _frac_str(q: Fraction) -> str:
    return str(q)


def value_set_to_dict(vs: ValueSet) -> dict:
    return {
        "intervals": [
            {
                "lower": _frac_str(iv.lower) if iv.lower is not None else "-inf",
                "upper": _frac_str(iv.upper) if iv.upper is not None else "+inf",
                "lower_closed": iv.lower_closed,
                "upper_closed": iv.upper_closed,
            }
            for iv in vs.intervals
        ],
        "points": [_frac_str(q) for q in vs.points],
    }


def _fresh(base: str, taken: set[str]) -> str:
    if base not in taken:
        taken.add(base)
        return base
    i = 1
    while f"{base}{i}" in taken:
        i += 1
    name = f"{base}{i}"
    taken.add(name)
    return name


def _rational_root_of(value: Fraction, degree: int) -> Fraction | None:
    """Exact rational degree-th root of value, honoring sign, or None."""
    if degree == 1:
        return value
    if value == 0:
        return Fraction(0)
    sign = 1
    if value < 0:
        if degree % 2 == 0:
            return None
        sign = -1
        value = -value

    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / degree))
        for cand in (r - 1, r, r + 1):
            if cand > 0 and cand**degree == n:
                return cand
        return None

    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def run_pipeline(p: Poly, mode: str) -> PipelineReport:
    """Full asymptotic-curve search in one mode; see the package README."""
    mode = mode.replace("-", "_")
    if mode not in ("y_finite", "x_finite"):
        raise ValueError(f"unknown mode {mode!r}")
    names = sorted(p.variables())
    if len(names) != 2:
        raise NotBivariate(f"expected exactly two variables, got {names}")
    if not normalization_check(p):
        return PipelineReport(
            input=str(p),
            mode=mode,
            normalization=False,
            error="NormalizationFailed: total degree differs from the degree sum",
        )
    growth, dep = (names[0], names[1]) if mode == "y_finite" else (names[1], names[0])

    alist = build_assertions(p, growth)
    active = first_active_level(alist)

    taken = set(names) | {LIMIT_SYMBOL, "r"}
    t_var = _fresh("t", taken)

    branches: list[BranchState] = []
    identities: list[AsymptoticIdentity] = []
    rejections: list[Rejection] = []
    value_polys: list[Poly] = []

    for direction in (1, -1):
        bodies = [
            Assertion(
                a.level,
                a.body.substitute(growth, Poly.var(t_var) * direction),
                a.target,
            )
            for a in alist.assertions
        ]
        result = dominant_balance(bodies[active], dep)
        if result.kind == "contradiction":
            rejections.append(
                Rejection(active, str(result.witness), direction, "contradiction")
            )
            continue
        if result.kind != "balance":
            rejections.append(Rejection(active, str(result), direction, result.kind))
            continue
        if result.symbolic:
            raise Unclassifiable("symbolic coefficients in the first balance")
        seeds = _branch_seeds(
            result, bodies, active, mode, direction, dep, growth, t_var, taken, rejections
        )
        for seed in sorted(seeds, key=_seed_key):
            final = _refine_branch(seed, bodies, t_var, taken, rejections)
            branches.append(final)
            if final.stage == "valued" and final.free_parameter() is not None:
                ident = build_identity(final)
                ok, rhs = verify_identity(p, ident)
                if ok:
                    ident = replace(ident, rhs=rhs)
                    if not any(_same_identity(ident, other) for other in identities):
                        identities.append(ident)
                    value_polys.append(asymptotic_values(ident))
                else:
                    branches[-1] = replace(
                        final, stage="stalled", note="identity verification failed"
                    )

    values = value_set(value_polys) if value_polys else ValueSet((), ())
    return PipelineReport(
        input=str(p),
        mode=mode,
        normalization=True,
        assertions=alist.assertions,
        branches=tuple(branches),
        identities=tuple(identities),
        values=values,
        rejections=tuple(rejections),
    )


def _same_identity(a: AsymptoticIdentity, b: AsymptoticIdentity) -> bool:
    return (
        a.substitution_text() == b.substitution_text()
        and a.rhs == b.rhs
        and a.sign == b.sign
    )


def _seed_key(branch: BranchState):
    root = branch.root if branch.root is not None else Fraction(0)
    first = branch.expansion[0][0] if branch.expansion else Fraction(0)
    coeff = first if isinstance(first, Fraction) else Fraction(0)
    return (root, coeff)


def _branch_seeds(
    result: BalanceResult,
    bodies: list[Assertion],
    active: int,
    mode: str,
    direction: int,
    dep: str,
    growth: str,
    t_var: str,
    taken: set[str],
    rejections: list[Rejection],
) -> list[BranchState]:
    """Initial branch states from the first balance's real roots."""
    a_exp, b = result.power_product
    q = a_exp / b
    seeds: list[BranchState] = []

    def make(coeff: Fraction | str, root: Fraction | None, stage="refined", note=""):
        error = _fresh("z", set(taken))
        return BranchState(
            mode=mode,
            direction=direction,
            expansion=((coeff, -q),),
            error_var=error,
            bound=OBound(error, t_var, q),
            stage=stage,
            dep_var=dep,
            growth_var=growth,
            root=root,
            note=note,
        )

    if bodies[active].target == TARGET_LIMIT:
        # The active level already targets C: the leading coefficient is free.
        param = _fresh("s", taken)
        seeds.append(make(param, None))
        return seeds

    limit = result.limit_poly
    report = real_roots(limit, "r")
    for root, _mult in report.rational_roots:
        if root == 0:
            continue
        if b % 2 == 0 and root < 0:
            rejections.append(Rejection(active, str(root), direction, "sign"))
            continue
        coeff = _rational_root_of(root, b)
        if coeff is None:
            seeds.append(
                make(Fraction(0), root, stage="stalled",
                     note=f"irrational {b}-th root of {root}")
            )
            continue
        if b % 2 == 0:
            seeds.append(make(coeff, root))
            seeds.append(make(-coeff, root))
        else:
            seeds.append(make(coeff, root))
    for lo, hi, _count in report.irrational_root_intervals:
        seeds.append(
            make(Fraction(0), None, stage="stalled",
                 note=f"irrational balance root in [{lo}, {hi}]")
        )
    return seeds


def _refine_branch(
    branch: BranchState,
    bodies: list[Assertion],
    t_var: str,
    taken: set[str],
    rejections: list[Rejection],
) -> BranchState:
    """Iterate substitution, o-simplification and classification to a verdict."""
    if branch.stage == "stalled":
        return branch
    local_taken = set(taken) | {
        c for c, _ in branch.expansion if isinstance(c, str)
    } | {branch.error_var}
    for _round in range(MAX_REFINEMENTS):
        image = branch.dep_image(t_var, branch.error_var)
        substituted = [a.body.substitute(branch.dep_var, image) for a in bodies]
        simplified = [
            o_simplify(body, branch.bound) for body in substituted
        ]
        for level, simp in enumerate(simplified):
            if simp.unbounded:
                rejections.append(
                    Rejection(level, str(simp.unbounded[0]), branch.direction, "unbounded")
                )
                return replace(branch, stage="contradicted",
                               note=f"unbounded term at level {level}")

        progressed = False
        verdict: BranchState | None = None
        for level in range(len(simplified) - 1, 0, -1):
            residual = simplified[level].poly
            if residual.is_zero():
                continue
            outcome = classify_residual(residual, TARGET_ZERO, t_var, branch.error_var)
            if outcome.kind == "trivial":
                continue
            if outcome.kind == "contradiction":
                rejections.append(
                    Rejection(level, str(outcome.witness), branch.direction, "contradiction")
                )
                return replace(branch, stage="contradicted",
                               note=f"nonzero constant at level {level}")
            if outcome.kind == "bound":
                if outcome.new_alpha > branch.bound.alpha:
                    branch = replace(
                        branch,
                        bound=OBound(branch.error_var, t_var, outcome.new_alpha),
                    )
                    progressed = True
                    break
                continue
            if outcome.kind == "balance" and not outcome.symbolic:
                branch = _continue_with_root(branch, outcome, t_var, local_taken)
                if branch.stage == "stalled" or branch.stage == "contradicted":
                    return branch
                progressed = True
                break
            return replace(branch, stage="stalled",
                           note=f"unclassifiable residual at level {level}: {residual}")
        if progressed:
            continue

        # Every zero-target level is satisfied; close out against C.
        residual = simplified[0].poly
        outcome = classify_residual(residual, TARGET_LIMIT, t_var, branch.error_var)
        if outcome.kind == "value":
            return replace(branch, stage="valued", value_poly=outcome.value_poly)
        if outcome.kind == "trivial":
            return replace(branch, stage="valued", value_poly=Poly.zero())
        if outcome.kind == "balance":
            if outcome.symbolic:
                return replace(branch, stage="stalled",
                               note=f"symbolic limit coefficients: {outcome.limit_poly}")
            a_exp, b = outcome.power_product
            q = a_exp / b
            param = _fresh("s", local_taken)
            error = _fresh("z", local_taken)
            branch = replace(
                branch,
                expansion=branch.expansion + ((param, -q),),
                error_var=error,
                bound=OBound(error, t_var, q),
                limit_poly=outcome.limit_poly,
            )
            continue
        return replace(branch, stage="stalled",
                       note=f"unclassifiable limit residual: {residual}")
    return replace(branch, stage="stalled", note="refinement cap reached")


def _continue_with_root(
    branch: BranchState,
    outcome: BalanceResult,
    t_var: str,
    taken: set[str],
) -> BranchState:
    """Extend the expansion by the (single attainable) balance root."""
    a_exp, b = outcome.power_product
    q = a_exp / b
    report = real_roots(outcome.limit_poly, "r")
    candidates: list[Fraction] = []
    for root, _mult in report.rational_roots:
        if root == 0:
            continue
        if b % 2 == 0 and root < 0:
            continue
        coeff = _rational_root_of(root, b)
        if coeff is None:
            return replace(branch, stage="stalled",
                           note=f"irrational {b}-th root of {root}")
        candidates.append(coeff)
    if report.irrational_root_intervals:
        lo, hi, _ = report.irrational_root_intervals[0]
        return replace(branch, stage="stalled",
                       note=f"irrational balance root in [{lo}, {hi}]")
    if not candidates:
        return replace(branch, stage="contradicted",
                       note=f"no attainable root of {outcome.limit_poly}")
    if len(candidates) > 1 or b % 2 == 0:
        # A mid-flight split would need bookkeeping Pinchuk-class inputs
        # never exercise; report it rather than guessing.
        return replace(branch, stage="stalled",
                       note=f"ambiguous continuation roots {candidates}")
    error = _fresh("z", taken)
    return replace(
        branch,
        expansion=branch.expansion + ((candidates[0], -q),),
        error_var=error,
        bound=OBound(error, t_var, q),
    )
