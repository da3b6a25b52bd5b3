"""Exact sparse Laurent polynomials with rational coefficients and exponents.

A polynomial is a map from monomial keys to nonzero Fraction coefficients.
A monomial key is a sorted tuple of (variable, exponent) pairs with every
exponent a nonzero Fraction; exponents may be negative or fractional, so the
ring is really the Laurent/Puiseux-style ring needed for dominant-balance
work.  Values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    FractionalPowerOfSum,
    NonRealPower,
    ParseError,
    UnboundVariable,
)

MonomialKey = tuple[tuple[str, Fraction], ...]


def _nth_root_fraction(base: Fraction, d: int) -> Fraction:
    """Exact d-th root of a positive rational, or raise NonRealPower."""
    if base <= 0:
        raise NonRealPower(f"cannot take even/fractional root of {base}")

    def iroot(n: int) -> int:
        r = round(n ** (1.0 / d))
        for cand in (r - 1, r, r + 1):
            if cand > 0 and cand**d == n:
                return cand
        raise NonRealPower(f"{n} is not a perfect {d}-th power")

    return Fraction(iroot(base.numerator), iroot(base.denominator))


def _frac_power(base: Fraction, exp: Fraction) -> Fraction:
    """base**exp as an exact Fraction; exp may be negative or fractional."""
    if exp.denominator == 1:
        e = int(exp)
        if base == 0:
            if e <= 0:
                raise NonRealPower("0 cannot be raised to a nonpositive power")
            return Fraction(0)
        return base**e
    if base == 0:
        if exp > 0:
            return Fraction(0)
        raise NonRealPower("0 cannot be raised to a negative power")
    root = _nth_root_fraction(base, exp.denominator)
    return root ** exp.numerator


class Poly:
    """Immutable sparse polynomial over Q with Fraction exponents."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[MonomialKey, Fraction] | None = None):
        clean: dict[MonomialKey, Fraction] = {}
        if terms:
            for key, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff == 0:
                    continue
                clean[key] = coeff
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return _ZERO

    @staticmethod
    def const(value: Fraction | int | str) -> "Poly":
        value = Fraction(value)
        if value == 0:
            return _ZERO
        return Poly({(): value})

    @staticmethod
    def var(name: str, exponent: Fraction | int = 1) -> "Poly":
        exponent = Fraction(exponent)
        if exponent == 0:
            return Poly.const(1)
        return Poly({((name, exponent),): Fraction(1)})

    @staticmethod
    def monomial(coeff: Fraction | int, exps: Mapping[str, Fraction | int]) -> "Poly":
        coeff = Fraction(coeff)
        if coeff == 0:
            return _ZERO
        key = tuple(sorted((v, Fraction(e)) for v, e in exps.items() if Fraction(e) != 0))
        return Poly({key: coeff})

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and () in self._terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms[()]

    def constant_term(self) -> Fraction:
        """Coefficient of the exponent-free monomial (0 if absent)."""
        return self._terms.get((), Fraction(0))

    def variables(self) -> frozenset[str]:
        return frozenset(v for key in self._terms for v, _ in key)

    def num_terms(self) -> int:
        return len(self._terms)

    def terms(self) -> Iterator[tuple[MonomialKey, Fraction]]:
        """Terms in canonical (graded-lex descending) order."""
        names = sorted(self.variables())
        return iter(sorted(self._terms.items(), key=lambda kv: _order_key(kv[0], names)))

    def coeff_of(self, exps: Mapping[str, Fraction | int]) -> Fraction:
        key = tuple(sorted((v, Fraction(e)) for v, e in exps.items() if Fraction(e) != 0))
        return self._terms.get(key, Fraction(0))

    def total_degree(self) -> Fraction | None:
        """Largest exponent sum, or None for the zero polynomial."""
        if not self._terms:
            return None
        return max(sum((e for _, e in key), Fraction(0)) for key in self._terms)

    def degree_in(self, var: str) -> Fraction | None:
        if not self._terms:
            return None
        return max((dict(key).get(var, Fraction(0)) for key in self._terms), default=None)

    def has_integer_exponents(self) -> bool:
        return all(e.denominator == 1 for key in self._terms for _, e in key)

    def has_polynomial_exponents(self) -> bool:
        return all(e.denominator == 1 and e > 0 for key in self._terms for _, e in key)

    # -- ring operations ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(frozenset(self._terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def __add__(self, other: "Poly | Fraction | int") -> "Poly":
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            acc = out.get(key, Fraction(0)) + coeff
            if acc == 0:
                out.pop(key, None)
            else:
                out[key] = acc
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: "Poly | Fraction | int") -> "Poly":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Poly":
        return _coerce(other) - self

    def __mul__(self, other: "Poly | Fraction | int") -> "Poly":
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return _ZERO
        out: dict[MonomialKey, Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                key = _mul_keys(ka, kb)
                acc = out.get(key, Fraction(0)) + ca * cb
                if acc == 0:
                    out.pop(key, None)
                else:
                    out[key] = acc
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int):
            raise TypeError("polynomial powers take integer exponents")
        if exponent < 0:
            if len(self._terms) != 1:
                raise FractionalPowerOfSum("cannot invert a polynomial with several terms")
            return self._monomial_power(Fraction(exponent))
        result = Poly.const(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _monomial_power(self, exponent: Fraction) -> "Poly":
        """Raise a single-term polynomial to an arbitrary rational power."""
        if len(self._terms) != 1:
            raise FractionalPowerOfSum(
                "fractional or negative powers are only defined for monomials"
            )
        (key, coeff), = self._terms.items()
        if exponent.denominator == 1:
            new_coeff = _frac_power(coeff, exponent)
        else:
            if coeff < 0:
                raise NonRealPower(
                    f"fractional power of a negative coefficient {coeff}"
                )
            new_coeff = _frac_power(coeff, exponent)
        new_key = tuple((v, e * exponent) for v, e in key if e * exponent != 0)
        return Poly({tuple(sorted(new_key)): new_coeff})

    # -- calculus and structure --------------------------------------------

    def derivative(self, var: str) -> "Poly":
        out: dict[MonomialKey, Fraction] = {}
        for key, coeff in self._terms.items():
            exps = dict(key)
            e = exps.get(var)
            if e is None:
                continue
            new_coeff = coeff * e
            new_e = e - 1
            if new_e == 0:
                del exps[var]
            else:
                exps[var] = new_e
            new_key = tuple(sorted(exps.items()))
            acc = out.get(new_key, Fraction(0)) + new_coeff
            if acc == 0:
                out.pop(new_key, None)
            else:
                out[new_key] = acc
        return Poly(out)

    def decompose(self, var: str) -> list[tuple[Fraction, "Poly"]]:
        """Collect coefficients of powers of var, highest exponent first."""
        buckets: dict[Fraction, dict[MonomialKey, Fraction]] = {}
        for key, coeff in self._terms.items():
            exps = dict(key)
            e = exps.pop(var, Fraction(0))
            rest = tuple(sorted(exps.items()))
            buckets.setdefault(e, {})[rest] = coeff
        out = [(e, Poly(terms)) for e, terms in buckets.items()]
        out.sort(key=lambda pair: pair[0], reverse=True)
        return out

    def substitute(self, var: str, replacement: "Poly") -> "Poly":
        return self.substitute_many({var: replacement})

    def substitute_many(self, mapping: Mapping[str, "Poly"]) -> "Poly":
        """Simultaneous exact substitution; Laurent semantics propagate."""
        result = _ZERO
        for key, coeff in self._terms.items():
            term = Poly.const(coeff)
            for v, e in key:
                repl = mapping.get(v)
                if repl is None:
                    term = term * Poly.var(v, e)
                elif e.denominator == 1 and e >= 0:
                    term = term * repl ** int(e)
                else:
                    term = term * repl._monomial_power(e)
            result = result + term
        return result

    def evaluate(self, bindings: Mapping[str, Fraction | int]) -> Fraction:
        total = Fraction(0)
        for key, coeff in self._terms.items():
            acc = coeff
            for v, e in key:
                if v not in bindings:
                    raise UnboundVariable(f"no binding for variable {v!r}")
                acc *= _frac_power(Fraction(bindings[v]), e)
            total += acc
        return total

    def evaluate_float(self, bindings: Mapping[str, float]) -> float:
        total = 0.0
        for key, coeff in self._terms.items():
            acc = float(coeff)
            for v, e in key:
                if v not in bindings:
                    raise UnboundVariable(f"no binding for variable {v!r}")
                base = float(bindings[v])
                if e.denominator == 1:
                    acc *= base ** int(e)
                else:
                    if base <= 0:
                        raise NonRealPower(
                            f"fractional power of nonpositive base {base}"
                        )
                    acc *= math.pow(base, float(e))
            total += acc
        return total

    # -- canonical text -----------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for idx, (key, coeff) in enumerate(self.terms()):
            sign = "-" if coeff < 0 else "+"
            mag = -coeff if coeff < 0 else coeff
            factors = [_format_factor(v, e) for v, e in key]
            if not factors or mag != 1:
                factors.insert(0, _format_rational(mag))
            body = "*".join(factors)
            if idx == 0:
                pieces.append(body if sign == "+" else "-" + body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Poly({self})"


def _coerce(value: "Poly | Fraction | int") -> Poly:
    if isinstance(value, Poly):
        return value
    return Poly.const(value)


def _mul_keys(ka: MonomialKey, kb: MonomialKey) -> MonomialKey:
    exps = dict(ka)
    for v, e in kb:
        acc = exps.get(v, Fraction(0)) + e
        if acc == 0:
            exps.pop(v, None)
        else:
            exps[v] = acc
    return tuple(sorted(exps.items()))


def _order_key(key: MonomialKey, names: Sequence[str]):
    exps = dict(key)
    grade = sum(exps.values(), Fraction(0))
    vector = tuple(-exps.get(name, Fraction(0)) for name in names)
    return (-grade, vector)


def _format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_factor(var: str, exp: Fraction) -> str:
    if exp == 1:
        return var
    if exp.denominator == 1:
        return f"{var}^{exp.numerator}"
    return f"{var}^({exp.numerator}/{exp.denominator})"


_ZERO = Poly({})


# -- parsing ---------------------------------------------------------------


class _Parser:
    """Recursive-descent parser for the canonical polynomial grammar."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> None:
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Poly:
        self.skip_ws()
        if not self.text[self.pos:].strip():
            raise self.error("empty input")
        result = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected character {self.text[self.pos]!r}")
        return result

    def parse_expr(self) -> Poly:
        sign = 1
        if self.peek() in ("+", "-"):
            if self.peek() == "-":
                sign = -1
            self.pos += 1
        result = self.parse_term() * sign
        while self.peek() in ("+", "-"):
            op = self.peek()
            self.pos += 1
            term = self.parse_term()
            result = result + term if op == "+" else result - term
        return result

    def parse_term(self) -> Poly:
        result = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Poly:
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            inner = self.parse_expr()
            self.eat(")")
            return inner
        if ch.isdigit():
            return Poly.const(self.parse_rational())
        if ch.isalpha() or ch == "_":
            name = self.parse_name()
            if self.peek() == "^":
                self.pos += 1
                return Poly.var(name, self.parse_exponent())
            return Poly.var(name)
        if ch == "":
            raise self.error("unexpected end of input")
        raise self.error(f"unknown character {ch!r}")

    def parse_name(self) -> str:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (
            self.text[self.pos].isalnum() or self.text[self.pos] == "_"
        ):
            self.pos += 1
        return self.text[start:self.pos]

    def parse_int(self) -> int:
        self.skip_ws()
        sign = 1
        if self.peek() == "-":
            sign = -1
            self.pos += 1
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return sign * int(self.text[start:self.pos])

    def parse_rational(self) -> Fraction:
        num = self.parse_int()
        if self.peek() == "/":
            self.pos += 1
            den = self.parse_int()
            if den == 0:
                raise self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    def parse_exponent(self) -> Fraction:
        if self.peek() == "(":
            self.eat("(")
            num = self.parse_int()
            self.eat("/")
            den = self.parse_int()
            if den == 0:
                raise self.error("zero exponent denominator")
            self.eat(")")
            return Fraction(num, den)
        return Fraction(self.parse_int())


def parse(text: str) -> Poly:
    """Parse polynomial text in the canonical grammar."""
    return _Parser(text).parse()


def poly_from_pairs(pairs: Iterable[tuple[Fraction | int, Mapping[str, Fraction | int]]]) -> Poly:
    """Sum of coeff * monomial(exps) pairs; convenience for fixtures."""
    acc = _ZERO
    for coeff, exps in pairs:
        acc = acc + Poly.monomial(coeff, exps)
    return acc
