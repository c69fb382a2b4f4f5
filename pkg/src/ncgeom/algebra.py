"""Twisted Laurent polynomials in two unitaries U, V.

Normal form is c U^m V^n.  The commutation convention, used everywhere:

    (U^m V^n)(U^m' V^n') = phi^(-n m') U^(m+m') V^(n+n'),

so V U = phi^-1 U V, equivalently U V = phi V U, with phi = exp(2 pi i theta).

Exact elements keep phi formal: a term is keyed by (m, n, s) and stands for
c phi^s U^m V^n.  Numeric elements key by (m, n) and hold complex floats; the
phase is evaluated at the algebra's theta when multiplying.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number

from .scalars import (GaussianRational, PhasedScalar, PhasePoly, parse_rational,
                      format_rational, phase_value)

EXACT = "exact"
NUMERIC = "numeric"


class ModeMismatch(ValueError):
    pass


class NotAMonomial(ValueError):
    pass


class NotDiagonallyDominant(ValueError):
    pass


class ToleranceNotMet(ValueError):
    pass


class NCTorus:
    """Coefficient ring A(T^2_theta) in exact or numeric mode."""

    def __init__(self, mode: str = EXACT, theta=Fraction(0)):
        if mode not in (EXACT, NUMERIC):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        if isinstance(theta, float):
            if not math.isfinite(theta):
                raise ValueError("theta must be finite")
            self.theta = theta
        else:
            self.theta = parse_rational(theta)
        self._phase_cache = {}

    @property
    def exact(self) -> bool:
        return self.mode == EXACT

    def __eq__(self, other):
        return (isinstance(other, NCTorus) and self.mode == other.mode
                and self.theta == other.theta)

    def __hash__(self):
        return hash((self.mode, self.theta))

    def __repr__(self):
        return f"NCTorus(mode={self.mode!r}, theta={self.theta!r})"

    def phi_power(self, e: int) -> complex:
        p = self._phase_cache.get(e)
        if p is None:
            p = phase_value(self.theta, e, exact=False)
            self._phase_cache[e] = p
        return p

    def coerce_coeff(self, c):
        if self.exact:
            return GaussianRational.coerce(c)
        if isinstance(c, GaussianRational):
            return complex(c)
        return complex(c)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return self.scalar(1)

    def scalar(self, c) -> "AlgebraElement":
        return self.monomial(0, 0, c)

    def monomial(self, m: int, n: int, c=1, s: int = 0) -> "AlgebraElement":
        """c phi^s U^m V^n."""
        if self.exact:
            if isinstance(c, PhasedScalar):
                c, s = c.coeff, c.phase_exp + s
            return AlgebraElement(self, {(m, n, s): self.coerce_coeff(c)})
        if isinstance(c, PhasedScalar):
            c, s = c.coeff, c.phase_exp + s
        val = self.coerce_coeff(c)
        if s:
            val *= self.phi_power(s)
        return AlgebraElement(self, {(m, n): val})

    @property
    def U(self):
        return self.monomial(1, 0)

    @property
    def V(self):
        return self.monomial(0, 1)

    def from_json(self, obj) -> "AlgebraElement":
        mode = obj.get("mode", self.mode)
        if mode != self.mode:
            raise ModeMismatch(f"element mode {mode!r} in a {self.mode} algebra")
        out = self.zero()
        for t in obj.get("terms", []):
            m, n = int(t["m"]), int(t["n"])
            coeff = t["coeff"]
            s = int(coeff.get("phase_exp", 0))
            if self.exact:
                c = GaussianRational(parse_rational(coeff.get("re", "0")),
                                     parse_rational(coeff.get("im", "0")))
            else:
                c = complex(_num(coeff.get("re", 0)), _num(coeff.get("im", 0)))
            out = out + self.monomial(m, n, c, s)
        return out


def _num(v) -> float:
    if isinstance(v, str):
        try:
            return float(parse_rational(v))
        except ValueError:
            return float(v)
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValueError(f"not a number: {v!r}")
    return float(v)


class AlgebraElement:
    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: NCTorus, terms: dict):
        object.__setattr__(self, "algebra", algebra)
        if algebra.exact:
            clean = {k: v for k, v in terms.items() if not v.is_zero()}
        else:
            clean = {k: v for k, v in terms.items() if v != 0}
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    @property
    def mode(self) -> str:
        return self.algebra.mode

    def _check(self, other: "AlgebraElement"):
        if self.algebra != other.algebra:
            raise ModeMismatch(f"{self.algebra!r} vs {other.algebra!r}")

    def _lift(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return other
        if isinstance(other, (Number, GaussianRational, PhasedScalar)):
            return self.algebra.scalar(other)
        return None

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            out[k] = out[k] + v if k in out else v
        return AlgebraElement(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "AlgebraElement":
        """Multiply by a central scalar (number, GaussianRational, PhasedScalar)."""
        if isinstance(c, PhasedScalar):
            return self * self.algebra.scalar(c)
        c = self.algebra.coerce_coeff(c)
        return AlgebraElement(self.algebra, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        if isinstance(other, (Number, GaussianRational, PhasedScalar)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Number, GaussianRational, PhasedScalar)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, AlgebraElement) else other
        if o is None:
            return NotImplemented
        return self.algebra == o.algebra and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"AlgebraElement({format_element(self)})"

    def support(self) -> set:
        return {(k[0], k[1]) for k in self.terms}

    def coefficient(self, m: int, n: int):
        """Coefficient of U^m V^n: a PhasePoly (exact) or complex (numeric)."""
        if self.algebra.exact:
            return PhasePoly({k[2]: v for k, v in self.terms.items() if k[:2] == (m, n)})
        return self.terms.get((m, n), 0j)

    def is_scalar(self) -> bool:
        return all(k[0] == 0 and k[1] == 0 for k in self.terms)

    def star(self) -> "AlgebraElement":
        return star(self)

    def l1_norm(self):
        return l1_norm(self)

    def to_json(self) -> dict:
        terms = []
        for k in sorted(self.terms):
            v = self.terms[k]
            if self.algebra.exact:
                coeff = v.to_json(k[2])
            else:
                coeff = {"re": v.real, "im": v.imag, "phase_exp": 0}
            terms.append({"m": k[0], "n": k[1], "coeff": coeff})
        return {"mode": self.mode, "terms": terms}


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    a._check(b)
    alg = a.algebra
    out = {}
    if alg.exact:
        for (m, n, s), c in a.terms.items():
            for (m2, n2, s2), c2 in b.terms.items():
                key = (m + m2, n + n2, s + s2 - n * m2)
                p = c * c2
                out[key] = out[key] + p if key in out else p
    else:
        for (m, n), c in a.terms.items():
            for (m2, n2), c2 in b.terms.items():
                key = (m + m2, n + n2)
                e = -n * m2
                p = c * c2 * alg.phi_power(e) if e else c * c2
                out[key] = out[key] + p if key in out else p
    return AlgebraElement(alg, out)


def star(a: AlgebraElement) -> AlgebraElement:
    # (c phi^s U^m V^n)* = conj(c) phi^-s V^-n U^-m = conj(c) phi^(-s-nm) U^-m V^-n
    alg = a.algebra
    out = {}
    if alg.exact:
        for (m, n, s), c in a.terms.items():
            out[(-m, -n, -s - n * m)] = c.conj()
    else:
        for (m, n), c in a.terms.items():
            out[(-m, -n)] = c.conjugate() * alg.phi_power(-n * m)
    return AlgebraElement(alg, out)


def derive(j: int, a: AlgebraElement) -> AlgebraElement:
    """d_1(U^m V^n) = i m U^m V^n, d_2(U^m V^n) = i n U^m V^n."""
    if j not in (1, 2):
        raise ValueError(f"axis must be 1 or 2, got {j}")
    alg = a.algebra
    idx = j - 1
    if alg.exact:
        out = {k: v * GaussianRational(0, k[idx]) for k, v in a.terms.items()}
    else:
        out = {k: v * complex(0, k[idx]) for k, v in a.terms.items()}
    return AlgebraElement(alg, out)


def trace(a: AlgebraElement):
    return a.coefficient(0, 0)


def l1_norm(a: AlgebraElement):
    """Sum of coefficient magnitudes; |re| + |im| per term in exact mode."""
    if a.algebra.exact:
        return sum((c.l1() for c in a.terms.values()), Fraction(0))
    return math.fsum(abs(c) for c in a.terms.values())


@dataclass(frozen=True)
class InvertiblePair:
    k: AlgebraElement
    k_inv: AlgebraElement
    residual_bound: object = 0
    tail_bound: object = 0


def inverse_residual(k: AlgebraElement, k_inv: AlgebraElement):
    one = k.algebra.one()
    return max(l1_norm(k * k_inv - one), l1_norm(k_inv * k - one))


def monomial_inverse(a: AlgebraElement) -> InvertiblePair:
    if len(a.terms) != 1:
        raise NotAMonomial(f"support size {len(a.terms)}")
    alg = a.algebra
    ((key, c),) = a.terms.items()
    if alg.exact:
        m, n, s = key
        # c phi^s U^m V^n . c^-1 phi^e U^-m V^-n = phi^(s+e+nm), so e = -s-nm
        inv = AlgebraElement(alg, {(-m, -n, -s - n * m): c.inverse()})
        if inverse_residual(a, inv) != 0:
            raise AssertionError("monomial inverse failed")
        return InvertiblePair(a, inv, Fraction(0), Fraction(0))
    m, n = key
    inv = AlgebraElement(alg, {(-m, -n): (1 / c) * alg.phi_power(-n * m)})
    return InvertiblePair(a, inv, inverse_residual(a, inv), 0.0)


def neumann_inverse(k: AlgebraElement, order: int, tolerance: float) -> InvertiblePair:
    """Invert k = lam (1 + a) by the truncated series lam^-1 sum_t (-a)^t."""
    alg = k.algebra
    if alg.exact:
        raise ModeMismatch("Neumann inversion runs in numeric mode")
    if order < 1:
        raise ValueError("order must be positive")
    lam = k.terms.get((0, 0), 0j)
    if lam == 0:
        raise NotDiagonallyDominant("k has no unit component")
    a = k * (1 / lam) - alg.one()
    q = l1_norm(a)
    if q >= 1:
        raise NotDiagonallyDominant(f"||a||_1 = {q} >= 1")
    one = alg.one()
    s = one
    for _ in range(order):
        s = one - a * s
    k_inv = s * (1 / lam)
    residual = inverse_residual(k, k_inv)
    tail = q ** (order + 1) / (1 - q)
    if residual > tolerance:
        raise ToleranceNotMet(f"residual {residual:.3e} > tolerance {tolerance:.3e}")
    return InvertiblePair(k, k_inv, residual, tail)


def format_coeff(c, s: int = 0, theta=None) -> str:
    """Render an exact coefficient c phi^s; phi is evaluated when theta makes it a fourth root of unity."""
    if theta is not None and s:
        p = phase_value(theta, s)
        if isinstance(p, GaussianRational):
            return str(c * p)
    if s == 0:
        return str(c)
    return f"{c}*phi^{s}"


def format_element(a: AlgebraElement, theta=None) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for key in sorted(a.terms):
        c = a.terms[key]
        m, n = key[0], key[1]
        if a.algebra.exact:
            cs = format_coeff(c, key[2], theta)
        else:
            cs = f"({c.real + 0.0:.12g}{c.imag + 0.0:+.12g}i)"  # + 0.0 drops signed zeros
        mono = ""
        if m:
            mono += "U" if m == 1 else f"U^{m}"
        if n:
            mono += "V" if n == 1 else f"V^{n}"
        parts.append(cs if not mono else (mono if cs == "1" else f"{cs}*{mono}"))
    return " + ".join(parts)
