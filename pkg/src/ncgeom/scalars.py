"""Exact and floating coefficient arithmetic.

Exact coefficients are Gaussian rationals built on ``fractions.Fraction``.
The deformation phase phi = exp(2 pi i theta) is never evaluated inside the
ring: a ``PhasedScalar`` carries its exponent, and ``PhasePoly`` holds sums of
different phi powers (Laurent polynomials in phi).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction


class ExactnessUnavailable(ValueError):
    pass


def parse_rational(value) -> Fraction:
    """Parse "p/q", an int, or a Fraction.  Floats are rejected."""
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not a rational string: {value!r}")
        return Fraction(s)
    raise ValueError(f"not a rational: {value!r}")


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


class GaussianRational:
    """re + i*im with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, bool):
            raise TypeError(f"cannot coerce {x!r}")
        if isinstance(x, (int, Fraction)):
            return cls(x, 0)
        if isinstance(x, _RationalABC):
            return cls(Fraction(x.numerator, x.denominator), 0)
        if isinstance(x, complex):
            re, im = Fraction(x.real), Fraction(x.imag)
            if re.denominator > 2**20 or im.denominator > 2**20:
                raise TypeError(f"complex {x!r} has no short exact value")
            return cls(re, im)
        raise TypeError(f"cannot coerce {type(x).__name__} to GaussianRational")

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def l1(self) -> Fraction:
        return abs(self.re) + abs(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return _imag_str(self.im)
        sign = "+" if self.im > 0 else "-"
        return f"({self.re} {sign} {_imag_str(abs(self.im))})"

    def to_json(self, phase_exp: int = 0) -> dict:
        return {"re": format_rational(self.re), "im": format_rational(self.im),
                "phase_exp": phase_exp}


def _imag_str(q: Fraction) -> str:
    if q == 1:
        return "i"
    if q == -1:
        return "-i"
    return f"{q}i"


I = GaussianRational(0, 1)
_I_POWERS = (GaussianRational(1), I, GaussianRational(-1), GaussianRational(0, -1))


def _phase_quarter_turns(theta, s: int):
    """Return t with phi^s = i^t when 4*theta*s is an integer, else None."""
    if isinstance(theta, float):
        if not math.isfinite(theta):
            return None
        theta = Fraction(theta)
    q = 4 * Fraction(theta) * s
    if q.denominator != 1:
        return None
    return q.numerator % 4


def phase_value(theta, s: int, exact=None):
    """phi^s as a GaussianRational when possible, else a complex."""
    if s == 0:
        return GaussianRational(1) if exact is not False else 1 + 0j
    if exact is not False:
        t = _phase_quarter_turns(theta, s)
        if t is not None:
            return _I_POWERS[t]
        if exact:
            raise ExactnessUnavailable(
                f"phi^{s} at theta={theta} is not a fourth root of unity")
    return cmath.exp(2j * math.pi * float(theta) * s)


class PhasedScalar:
    """coeff * phi**phase_exp."""

    __slots__ = ("coeff", "phase_exp")

    def __init__(self, coeff=1, phase_exp: int = 0):
        c = GaussianRational.coerce(coeff)
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "phase_exp", 0 if c.is_zero() else int(phase_exp))

    def __setattr__(self, name, value):
        raise AttributeError("PhasedScalar is immutable")

    def __mul__(self, other):
        if isinstance(other, PhasedScalar):
            return phased_mul(self, other)
        try:
            return PhasedScalar(self.coeff * GaussianRational.coerce(other), self.phase_exp)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return PhasedScalar(-self.coeff, self.phase_exp)

    def conj(self) -> "PhasedScalar":
        return PhasedScalar(self.coeff.conj(), -self.phase_exp)

    def inverse(self) -> "PhasedScalar":
        return PhasedScalar(self.coeff.inverse(), -self.phase_exp)

    def is_zero(self) -> bool:
        return self.coeff.is_zero()

    def __eq__(self, other):
        if isinstance(other, PhasedScalar):
            return self.coeff == other.coeff and self.phase_exp == other.phase_exp
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return (self.phase_exp == 0 or self.coeff.is_zero()) and self.coeff == o

    def __hash__(self):
        return hash((self.coeff, self.phase_exp))

    def __repr__(self):
        return f"PhasedScalar({self.coeff}, s={self.phase_exp})"

    def to_json(self) -> dict:
        return self.coeff.to_json(self.phase_exp)

    @classmethod
    def from_json(cls, obj) -> "PhasedScalar":
        return cls(GaussianRational(parse_rational(obj["re"]), parse_rational(obj.get("im", "0"))),
                   int(obj.get("phase_exp", 0)))


def phased_mul(a: PhasedScalar, b: PhasedScalar) -> PhasedScalar:
    return PhasedScalar(a.coeff * b.coeff, a.phase_exp + b.phase_exp)


def evaluate_phase(x: PhasedScalar, theta, exact=None):
    """coeff * exp(2 pi i theta s).

    exact=None gives a GaussianRational when phi^s is a fourth root of unity
    and a complex otherwise; exact=True raises ExactnessUnavailable instead of
    falling back; exact=False always returns a complex.
    """
    p = phase_value(theta, x.phase_exp, exact)
    if isinstance(p, GaussianRational):
        return x.coeff * p
    return complex(x.coeff) * p


def l1_magnitude(x: PhasedScalar) -> Fraction:
    """|re| + |im| of the coefficient; an upper bound on the modulus."""
    return x.coeff.l1()


class PhasePoly:
    """Finite sum of c_s * phi**s with Gaussian rational c_s."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for s, c in (terms or {}).items():
            c = GaussianRational.coerce(c)
            if not c.is_zero():
                clean[int(s)] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("PhasePoly is immutable")

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, theta, exact=None):
        total = GaussianRational(0)
        for s, c in self.terms.items():
            total = total + evaluate_phase(PhasedScalar(c, s), theta, exact)
        return total

    def __eq__(self, other):
        if isinstance(other, PhasePoly):
            return self.terms == other.terms
        if isinstance(other, PhasedScalar):
            return self == PhasePoly({other.phase_exp: other.coeff})
        try:
            return self == PhasePoly({0: GaussianRational.coerce(other)})
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "PhasePoly({" + ", ".join(f"{s}: {c}" for s, c in sorted(self.terms.items())) + "})"
