"""Exact arithmetic in cyclotomic fields.

A value of ``Q(zeta_n)`` is stored against a fixed conductor ``n`` as a
sparse collection of power-basis coordinates: exponent ``e`` maps to a
rational coefficient of ``zeta_n**e``, with every exponent strictly below
``phi(n)``.  Inputs with larger (or negative) exponents are first folded
modulo ``n`` and then rewritten modulo the n-th cyclotomic polynomial, so
each field element has exactly one stored form per conductor.  Conductors
are never shrunk behind the caller's back: a value keeps the conductor it
was built with, and mixed-conductor arithmetic lands in the lcm field.

Arithmetic is exposed through the usual operators (``+``, ``-``, ``*``,
unary ``-``) plus ``conjugate()``; there is no division.  All coefficients
are ``fractions.Fraction`` (plain ``int`` is kept where the value is
integral, which is the common case for character values).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

Rational = Fraction

# Coefficients are int | Fraction; ints are kept un-promoted because the
# hot paths (character values, orthogonality sums) are integral and int
# arithmetic is markedly cheaper than Fraction arithmetic.
Coeff = int | Fraction


class InvalidConductorError(ValueError):
    """Raised when a conductor is not a positive integer."""


class NotAlgebraicIntegerError(ValueError):
    """Raised when an operation requires integer power-basis coordinates."""


class ValueClass(Enum):
    """Trichotomy for a cyclotomic integer: zero, root of unity, or neither."""

    ZERO = "zero"
    ROOT_OF_UNITY = "root_of_unity"
    OTHER = "other"


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division; fine at the sizes used here."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    if n < 1:
        raise InvalidConductorError(f"conductor must be a positive integer, got {n}")
    result = 1
    for p, a in _factorize(n).items():
        result *= (p - 1) * p ** (a - 1)
    return result


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _polydiv_exact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # Dense division of integer polynomials, remainder required to vanish.
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % den[dd] == 0
        q = c // den[dd]
        quot[i - dd] = q
        for j, dc in enumerate(den):
            num[i - dd + j] -= q * dc
    assert all(c == 0 for c in num), "non-exact polynomial division"
    return quot


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first.

    Computed with the classical reductions (radical inflation, the odd/even
    sign twist) so that actual polynomial division only happens for odd
    squarefree composites, which stay tiny for every conductor this package
    touches.
    """
    if n < 1:
        raise InvalidConductorError(f"conductor must be a positive integer, got {n}")
    if n == 1:
        return (-1, 1)
    if n == 2:
        return (1, 1)
    fac = _factorize(n)
    rad = 1
    for p in fac:
        rad *= p
    if rad != n:
        # Phi_n(x) = Phi_rad(x^(n/rad))
        base = cyclotomic_coeffs(rad)
        k = n // rad
        out = [0] * ((len(base) - 1) * k + 1)
        for i, c in enumerate(base):
            out[i * k] = c
        return tuple(out)
    if n % 2 == 0:
        # n = 2m with m odd and squarefree, m > 1: Phi_2m(x) = Phi_m(-x).
        base = cyclotomic_coeffs(n // 2)
        return tuple(c if i % 2 == 0 else -c for i, c in enumerate(base))
    if len(fac) == 1:
        return (1,) * n
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d != n:
            poly = _polydiv_exact(poly, cyclotomic_coeffs(d))
    return tuple(poly)


# Per conductor: list of rewrite rows, row j being the power-basis expansion
# of zeta^(phi(n)+j).  Rows are built incrementally and cached for reuse.
_REDUCTION_ROWS: dict[int, list[dict[int, int]]] = {}


def _reduction_row(n: int, e: int) -> dict[int, int]:
    phi = totient(n)
    rows = _REDUCTION_ROWS.setdefault(n, [])
    while len(rows) <= e - phi:
        if not rows:
            poly = cyclotomic_coeffs(n)
            rows.append({i: -c for i, c in enumerate(poly[:-1]) if c})
        else:
            nxt: dict[int, int] = {}
            for exp, c in rows[-1].items():
                if exp + 1 == phi:
                    for e2, m in rows[0].items():
                        nxt[e2] = nxt.get(e2, 0) + c * m
                else:
                    nxt[exp + 1] = nxt.get(exp + 1, 0) + c
            rows.append({k: v for k, v in nxt.items() if v})
    return rows[e - phi]


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _build(n: int, raw) -> "Cyclotomic":
    """Fold exponents mod n, rewrite mod Phi_n, drop zeros, sort."""
    phi = totient(n)
    acc: dict[int, Coeff] = {}
    items = raw.items() if isinstance(raw, dict) else raw
    for e, c in items:
        if not c:
            continue
        e %= n
        if e < phi:
            acc[e] = acc.get(e, 0) + c
        else:
            for e2, m in _reduction_row(n, e).items():
                acc[e2] = acc.get(e2, 0) + c * m
    coeffs = tuple(sorted((e, _norm_coeff(c)) for e, c in acc.items() if c))
    return Cyclotomic(n, coeffs)


def canonicalize(conductor: int, coeffs) -> "Cyclotomic":
    """Build a value of Q(zeta_conductor) from any exponent -> rational map.

    Exponents may be arbitrary integers (they are taken modulo the
    conductor); the result is in reduced power-basis form.
    """
    if not isinstance(conductor, int) or conductor < 1:
        raise InvalidConductorError(
            f"conductor must be a positive integer, got {conductor!r}"
        )
    checked = {}
    for e, c in dict(coeffs).items():
        if isinstance(c, int) or isinstance(c, Fraction):
            checked[int(e)] = c
        else:
            raise TypeError(f"coefficient for exponent {e} must be rational, got {c!r}")
    return _build(conductor, checked)


@dataclass(frozen=True, eq=False)
class Cyclotomic:
    """An element of Q(zeta_conductor) in reduced power-basis form.

    Instances are immutable.  Equality is semantic: values with different
    conductors compare equal exactly when they agree after embedding into
    the lcm field.  Instances are deliberately unhashable (a semantic hash
    would have to be conductor-independent); use ``key()`` where a dict key
    is needed.
    """

    conductor: int
    coeffs: tuple[tuple[int, Coeff], ...]

    # -- basic constructors -------------------------------------------------

    @staticmethod
    def zero(conductor: int = 1) -> "Cyclotomic":
        return canonicalize(conductor, {})

    @staticmethod
    def one(conductor: int = 1) -> "Cyclotomic":
        return canonicalize(conductor, {0: 1})

    @staticmethod
    def zeta(conductor: int, exponent: int = 1) -> "Cyclotomic":
        """The root of unity zeta_conductor**exponent."""
        return canonicalize(conductor, {exponent: 1})

    @staticmethod
    def from_rational(value, conductor: int = 1) -> "Cyclotomic":
        return canonicalize(conductor, {0: Fraction(value)})

    # -- structure ----------------------------------------------------------

    def key(self) -> tuple:
        """Structural identity (conductor plus reduced coefficients)."""
        return (self.conductor, self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_rational(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and self.coeffs[0][0] == 0)

    def as_rational(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if self.is_rational:
            return Fraction(self.coeffs[0][1])
        raise ValueError(f"{self} is not rational")

    def coeff(self, exponent: int):
        for e, c in self.coeffs:
            if e == exponent:
                return Fraction(c)
        return Fraction(0)

    def is_algebraic_integer(self) -> bool:
        """True when every power-basis coordinate is an integer.

        The power basis is an integral basis for the ring of integers of a
        cyclotomic field, so this is the exact membership test.
        """
        return all(isinstance(c, int) or c.denominator == 1 for _, c in self.coeffs)

    # -- conductor handling ---------------------------------------------------

    def embed(self, conductor: int) -> "Cyclotomic":
        """Rewrite the value in Q(zeta_conductor); the current conductor must divide it."""
        if conductor % self.conductor != 0:
            raise InvalidConductorError(
                f"cannot embed conductor {self.conductor} into {conductor}"
            )
        if conductor == self.conductor:
            return self
        step = conductor // self.conductor
        return _build(conductor, [(e * step, c) for e, c in self.coeffs])

    @staticmethod
    def _aligned(a: "Cyclotomic", b: "Cyclotomic"):
        if a.conductor == b.conductor:
            return a, b
        n = lcm(a.conductor, b.conductor)
        return a.embed(n), b.embed(n)

    @staticmethod
    def _coerce(value) -> "Cyclotomic | None":
        if isinstance(value, Cyclotomic):
            return value
        if isinstance(value, (int, Fraction)):
            return Cyclotomic.from_rational(value)
        return None

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._aligned(self, o)
        raw = dict(a.coeffs)
        for e, c in b.coeffs:
            raw[e] = raw.get(e, 0) + c
        return _build(a.conductor, raw)

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.conductor, tuple((e, -c) for e, c in self.coeffs))

    def __sub__(self, other) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.__add__(-o)

    def __rsub__(self, other) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__add__(-self)

    def __mul__(self, other) -> "Cyclotomic":
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._aligned(self, o)
        n = a.conductor
        raw: dict[int, Coeff] = {}
        for e1, c1 in a.coeffs:
            for e2, c2 in b.coeffs:
                e = e1 + e2
                if e >= n:
                    e -= n
                raw[e] = raw.get(e, 0) + c1 * c2
        return _build(n, raw)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        """Complex conjugation, i.e. zeta_n -> zeta_n**(n-1)."""
        n = self.conductor
        return _build(n, [(-e % n, c) for e, c in self.coeffs])

    def galois(self, j: int) -> "Cyclotomic":
        """Apply the automorphism zeta_n -> zeta_n**j; j must be coprime to n."""
        n = self.conductor
        if gcd(j, n) != 1:
            raise ValueError(f"{j} is not coprime to the conductor {n}")
        return _build(n, [(e * j, c) for e, c in self.coeffs])

    def abs_squared(self) -> "Cyclotomic":
        """The product of the value with its complex conjugate."""
        return self * self.conjugate()

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational and self.as_rational() == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if self.conductor == other.conductor:
            return self.coeffs == other.coeffs
        if self.is_rational or other.is_rational:
            return (
                self.is_rational
                and other.is_rational
                and self.as_rational() == other.as_rational()
            )
        a, b = self._aligned(self, other)
        return a.coeffs == b.coeffs

    __hash__ = None  # semantic equality crosses conductors; use key()

    # -- conversions ----------------------------------------------------------

    def to_complex(self) -> complex:
        """Floating-point evaluation; for cross-checks only, never statistics."""
        n = self.conductor
        return sum(
            (float(c) * cmath.exp(2j * cmath.pi * e / n) for e, c in self.coeffs),
            complex(0),
        )

    def to_json(self) -> dict:
        return {
            "conductor": self.conductor,
            "coeffs": [[e, str(Fraction(c))] for e, c in self.coeffs],
        }

    @staticmethod
    def from_json(doc: dict) -> "Cyclotomic":
        return canonicalize(
            int(doc["conductor"]), {int(e): Fraction(c) for e, c in doc["coeffs"]}
        )

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.coeffs:
            mono = "1" if e == 0 else f"z{self.conductor}" + (f"^{e}" if e > 1 else "")
            if e == 0:
                term = str(c)
            elif c == 1:
                term = mono
            elif c == -1:
                term = f"-{mono}"
            else:
                term = f"{c}*{mono}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self) -> str:
        return f"Cyclotomic({self.conductor}, {self})"


def _require_integral(a: Cyclotomic) -> None:
    if not a.is_algebraic_integer():
        raise NotAlgebraicIntegerError(
            f"{a} has non-integer power-basis coordinates"
        )


def m_invariant(a: Cyclotomic) -> Fraction:
    """Mean squared modulus of a cyclotomic integer over its Galois orbit.

    Every automorphism zeta_n -> zeta_n**j (j coprime to n) is applied to
    the value, the squared modulus of each image is taken exactly, and the
    results are averaged.  The outcome is always rational.  For a nonzero
    cyclotomic integer the invariant is at least 1, with equality exactly
    on roots of unity.
    """
    _require_integral(a)
    n = a.conductor
    total: dict[int, Coeff] = {}
    count = 0
    for j in range(1, n + 1):
        if gcd(j, n) != 1:
            continue
        count += 1
        sq = a.galois(j).abs_squared()
        for e, c in sq.coeffs:
            total[e] = total.get(e, 0) + c
    summed = _build(n, total)
    if not summed.is_rational:
        raise ArithmeticError(
            f"Galois-orbit sum of |{a}|^2 failed to collapse to a rational"
        )
    return summed.as_rational() / count


def classify_value(a: Cyclotomic) -> ValueClass:
    """Classify a cyclotomic integer as zero, a root of unity, or other.

    A nonzero cyclotomic integer is a root of unity exactly when its squared
    modulus equals 1 (equivalently, when ``m_invariant`` equals 1; the test
    suite checks the two routes agree).  The squared-modulus form is used
    here because it costs a single multiplication.
    """
    _require_integral(a)
    if a.is_zero:
        return ValueClass.ZERO
    sq = a.abs_squared()
    if sq.is_rational and sq.as_rational() == 1:
        return ValueClass.ROOT_OF_UNITY
    return ValueClass.OTHER
