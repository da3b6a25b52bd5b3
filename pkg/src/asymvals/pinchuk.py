"""Built-in exact constants around the Pinchuk polynomial P.

P is assembled from its x-expansion coefficients; every other fixture is the
exact result of the named construction (truncation assertions, error-variable
substitutions, base expansions, asymptotic identities), stored as canonical
text so the constants stay independent of the engine code they golden-test.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UnknownFixture
from .peretz import Assertion, AssertionList, AsymptoticIdentity, TARGET_LIMIT, TARGET_ZERO
from .poly import Poly, parse


@dataclass(frozen=True)
class Fixture:
    name: str
    payload: object  # Poly | AssertionList | AsymptoticIdentity
    provenance: str


PINCHUK_P_TEXT = (
    "x^6*y^4 - 4*x^5*y^3 + 3*x^4*y^3 + 6*x^4*y^2 - 7*x^3*y^2 - 4*x^3*y"
    " + 3*x^2*y^2 + 5*x^2*y + x^2 - 3*x*y - x + y"
)

# Coefficients of powers of x, highest first.
PINCHUK_X_COEFFS = (
    "y^4",
    "-4*y^3",
    "3*y^3 + 6*y^2",
    "-7*y^2 - 4*y",
    "3*y^2 + 5*y + 1",
    "-3*y - 1",
    "y",
)

_ASSERTIONS_X = (
    "x^6*y^4 - 4*x^5*y^3 + 3*x^4*y^3 + 6*x^4*y^2 - 7*x^3*y^2 - 4*x^3*y"
    " + 3*x^2*y^2 + 5*x^2*y + x^2 - 3*x*y - x",
    "x^5*y^4 - 4*x^4*y^3 + 3*x^3*y^3 + 6*x^3*y^2 - 7*x^2*y^2 - 4*x^2*y"
    " + 3*x*y^2 + 5*x*y + x - 1",
    "x^4*y^4 - 4*x^3*y^3 + 3*x^2*y^3 + 6*x^2*y^2 - 7*x*y^2 - 4*x*y + 1",
    "x^3*y^4 - 4*x^2*y^3 + 3*x*y^3 + 6*x*y^2",
    "x^2*y^4 - 4*x*y^3",
    "x*y^4",
    "0",
)

_ASSERTIONS_Y = (
    "x^6*y^4 - 4*x^5*y^3 + 3*x^4*y^3 + 6*x^4*y^2 - 7*x^3*y^2 - 4*x^3*y"
    " + 3*x^2*y^2 + 5*x^2*y - 3*x*y + y",
    "x^6*y^3 - 4*x^5*y^2 + 3*x^4*y^2 + 6*x^4*y - 7*x^3*y + 3*x^2*y + 1",
    "x^6*y^2 - 4*x^5*y + 3*x^4*y",
    "x^6*y",
    "0",
)

# Assertions in x after the first y-finite refinement y -> 1/x + z.
_SUBST_Y_FINITE = (
    "x^6*z^4 + 3*x^4*z^3 + 2*x^3*z^2 + 3*x^2*z^2 + 3*x*z",
    "x^5*z^4 + 3*x^3*z^3 + 2*x^2*z^2 + 3*x*z^2 + 6*z + 3*x^-1",
    "x^4*z^4 + 3*x^2*z^3 + 2*x*z^2 - 5*z - 4*x^-1",
    "x^3*z^4 + 3*x*z^3 + 9*z^2 + 4*z + 9*z*x^-1 + 3*x^-1 + 3*x^-2",
    "x^2*z^4 - 6*z^2 - 8*z*x^-1 - 3*x^-2",
    "x*z^4 + 4*z^3 + 6*z^2*x^-1 + 4*z*x^-2 + x^-3",
    "0",
)

# Assertions in y after the literal x-finite substitution x -> -y^(-1/2) + z
# with y treated as growing positively.
_SUBST_X_FINITE = (
    "y^4*z^6 - 6*y^(7/2)*z^5 - 4*y^3*z^5 + 20*y^(5/2)*z^4 + 18*y^3*z^4"
    " + 6*y^2*z^4 - 32*y^(5/2)*z^3 - 24*y^(3/2)*z^3 - 47*y^2*z^3 - 4*y*z^3"
    " + 61*y^(3/2)*z^2 + 12*y^(1/2)*z^2 + 36*y^2*z^2 + 41*y*z^2"
    " - 24*y^(3/2)*z - 34*y^(1/2)*z - 44*y*z - 12*z"
    " + 8*y + 14*y^(1/2) + 11 + 4*y^(-1/2)",
    "y^3*z^6 - 6*y^(5/2)*z^5 - 4*y^2*z^5 + 20*y^(3/2)*z^4 + 18*y^2*z^4"
    " + 6*y*z^4 - 32*y^(3/2)*z^3 - 24*y^(1/2)*z^3 - 47*y*z^3"
    " + 61*y^(1/2)*z^2 + 36*y*z^2 + 36*z^2 - 24*y^(1/2)*z - 41*z"
    " - 24*z*y^(-1/2) + 8 + 6*y^-1 + 11*y^(-1/2)",
    "y^2*z^6 - 6*y^(3/2)*z^5 - 4*y*z^5 + 20*y^(1/2)*z^4 + 18*y*z^4"
    " - 32*y^(1/2)*z^3 - 40*z^3 + 33*z^2 + 40*z^2*y^(-1/2)"
    " - 18*z*y^(-1/2) - 20*z*y^-1 + 4*y^-1 + 4*y^(-3/2)",
    "y*z^6 - 6*y^(1/2)*z^5 + 15*z^4 - 20*z^3*y^(-1/2) + 15*z^2*y^-1"
    " - 6*z*y^(-3/2) + y^-2",
    "0",
)

_IDENTITY_PLUS_RHS = (
    "y^4 + 2*y^2 + 3*x*y^3 + 3*x*y + 3*x^2*y^2 + x^2 + x^3*y"
)
_IDENTITY_MINUS_RHS = (
    "y^4 - 2*y^2 + 3*x*y^3 - 3*x*y + 3*x^2*y^2 - x^2 + x^3*y"
)
_IDENTITY_EXTENDED_RHS = (
    "x^4*y^4 + 4*a*x^3*y^3 + 3*x^4*y^3 + 6*a^2*x^2*y^2 + 9*a*x^3*y^2"
    " + 3*x^4*y^2 + 2*x^2*y^2 + 4*a^3*x*y + 9*a^2*x^2*y + 6*a*x^3*y"
    " + 4*a*x*y + x^4*y + 3*x^2*y"
    " + a^4 + 3*a^3*x + 3*a^2*x^2 + 2*a^2 + a*x^3 + 3*a*x + x^2"
)

_RESIDUAL_Y_FINITE = (
    "z^4*x^6 + 4*s*z^3*x^(9/2) + 3*z^3*x^4 + 6*s^2*z^2*x^3 + 2*z^2*x^3"
    " + 9*s*z^2*x^(5/2) + 3*z^2*x^2 + 4*s^3*z*x^(3/2) + 4*s*z*x^(3/2)"
    " + 9*s^2*z*x + 3*z*x + 6*s*z*x^(1/2) + z"
)

_BASE_EXPANSION_PLUS = (
    "s^4 + 2*s^2 + 3*s^3*x^(-1/2) + 3*s*x^(-1/2) + 3*s^2*x^-1 + x^-1"
    " + s*x^(-3/2)"
)
_BASE_EXPANSION_MINUS = (
    "s^4 - 2*s^2 + 3*s^3*t^(-1/2) - 3*s*t^(-1/2) + 3*s^2*t^-1 - t^-1"
    " + s*t^(-3/2)"
)


def _assertion_list(bodies, dec_var, coeff_var) -> AssertionList:
    return AssertionList(
        dec_var,
        coeff_var,
        tuple(
            Assertion(k, parse(text) if text != "0" else Poly.zero(),
                      TARGET_LIMIT if k == 0 else TARGET_ZERO)
            for k, text in enumerate(bodies)
        ),
    )


def _identity(sign, n_power, lower, rhs_text) -> AsymptoticIdentity:
    return AsymptoticIdentity(
        sign=sign,
        k=2,
        n_power=n_power,
        lower_coeffs=tuple(lower),
        growth_var="x",
        dep_var="y",
        rhs=parse(rhs_text),
    )


def _builtins() -> dict[str, Fixture]:
    one = Poly.const(1)
    zero = Poly.zero()
    sym_a = Poly.var("a")
    return {
        "pinchuk-p": Fixture(
            "pinchuk-p",
            parse(PINCHUK_P_TEXT),
            "Pinchuk polynomial assembled from its x-expansion coefficients",
        ),
        "assertions-x": Fixture(
            "assertions-x",
            _assertion_list(_ASSERTIONS_X, "x", "y"),
            "truncation assertions of P along x, levels 0..6",
        ),
        "assertions-y": Fixture(
            "assertions-y",
            _assertion_list(_ASSERTIONS_Y, "y", "x"),
            "truncation assertions of P along y, levels 0..4",
        ),
        "subst-y-finite": Fixture(
            "subst-y-finite",
            _assertion_list(_SUBST_Y_FINITE, "x", "z"),
            "x-assertions composed with y -> 1/x + z",
        ),
        "subst-x-finite": Fixture(
            "subst-x-finite",
            _assertion_list(_SUBST_X_FINITE, "y", "z"),
            "y-assertions composed with x -> -y^(-1/2) + z, y growing positive",
        ),
        "identity-plus": Fixture(
            "identity-plus",
            _identity(1, 3, (one, zero, zero), _IDENTITY_PLUS_RHS),
            "asymptotic identity of the y-finite branch with x -> +infinity",
        ),
        "identity-minus": Fixture(
            "identity-minus",
            _identity(-1, 3, (-one, zero, zero), _IDENTITY_MINUS_RHS),
            "asymptotic identity of the y-finite branch with x -> -infinity",
        ),
        "identity-extended": Fixture(
            "identity-extended",
            _identity(1, 4, (sym_a, one, zero, zero), _IDENTITY_EXTENDED_RHS),
            "higher-order identity from y = 1/x + a*x^(-3/2) + b*x^-2",
        ),
        "residual-y-finite": Fixture(
            "residual-y-finite",
            parse(_RESIDUAL_Y_FINITE),
            "P(x, 1/x + s*x^(-3/2) + z) minus its z = 0 value",
        ),
        "base-expansion-plus": Fixture(
            "base-expansion-plus",
            parse(_BASE_EXPANSION_PLUS),
            "P along y = 1/x + s*x^(-3/2) with x -> +infinity",
        ),
        "base-expansion-minus": Fixture(
            "base-expansion-minus",
            parse(_BASE_EXPANSION_MINUS),
            "P along y = -1/t + s*t^(-3/2) with x = -t, t -> +infinity",
        ),
    }


_CACHE: dict[str, Fixture] | None = None


def _cache() -> dict[str, Fixture]:
    global _CACHE
    if _CACHE is None:
        _CACHE = _builtins()
    return _CACHE


def list_builtins() -> list[str]:
    return sorted(_cache())


def load_builtin(name: str) -> Fixture:
    table = _cache()
    if name not in table:
        raise UnknownFixture(
            f"unknown fixture {name!r}; available: {', '.join(sorted(table))}"
        )
    return table[name]


def pinchuk_p() -> Poly:
    return load_builtin("pinchuk-p").payload
