"""Curvature coefficients, Ricci and scalar curvature.

r[i, j, k, l] holds the coefficients of R(nabla)(e_i) = sum e_j (x) e_k (x) e_l r^i_jkl.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import InvertiblePair
from .calculus import (OneForm, TensorCube, TensorSquare, basis_square, basis_tensor_left,
                       exterior_d_one_form, one_minus_p_sym23, q_inverse, sigma23, tensor)
from .connection import Connection, HypothesisViolated
from .metric import MetricSpec, eval_metric


class CurvatureCoefficients:
    __slots__ = ("desc", "r")

    def __init__(self, desc, r: dict):
        self.desc = desc
        self.r = {k: v for k, v in r.items() if not v.is_zero()}

    def __getitem__(self, idx):
        return self.r.get(idx) or self.desc.algebra.zero()

    def image(self, i: int) -> TensorCube:
        return TensorCube(self.desc, {k[1:]: v for k, v in self.r.items() if k[0] == i})

    def __eq__(self, other):
        if not isinstance(other, CurvatureCoefficients):
            return NotImplemented
        return self.r == other.r

    __hash__ = None

    def difference_norm(self, other):
        total = Fraction(0) if self.desc.algebra.exact else 0.0
        for key in set(self.r) | set(other.r):
            total += (self[key] - other[key]).l1_norm()
        return total


def _h_map(conn: Connection, X: TensorSquare) -> TensorCube:
    """H(sum_j e_j (x) eta_j) = sum_j (1 - P_sym)_23(nabla(e_j) (x) eta_j) + e_j (x) Q^-1(d eta_j)."""
    desc = conn.desc
    total = TensorCube.zero(desc)
    for j in range(desc.n):
        eta = OneForm(desc, {(k,): X[j, k] for k in range(desc.n)})
        if eta.is_zero():
            continue
        total = total + one_minus_p_sym23(tensor(conn.nabla_basis(j), eta))
        total = total + basis_tensor_left(j, q_inverse(exterior_d_one_form(eta)))
    return total


def curvature_operator(conn: Connection) -> CurvatureCoefficients:
    """R(nabla)(e_i) = H(nabla(e_i)), expanded in the cube basis."""
    r = {}
    for i in range(conn.desc.n):
        for key, v in _h_map(conn, conn.nabla_basis(i)).coeffs.items():
            r[(i,) + key] = v
    return CurvatureCoefficients(conn.desc, r)


def closed_form_curvature(conn: Connection) -> CurvatureCoefficients:
    """r^i_jkl = 1/2 [sum_p (G^p_jk G^i_pl - G^p_jl G^i_pk) - d_l G^i_jk + d_k G^i_jl]."""
    desc = conn.desc
    if not desc.basis_closed():
        raise HypothesisViolated("closed-form curvature needs d(e_i) = 0")
    n = desc.n
    alg = desc.algebra
    half = desc.half()
    G = conn.__getitem__
    r = {}
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    acc = alg.zero()
                    for p in range(n):
                        acc = acc + G((p, j, k)) * G((i, p, l)) - G((p, j, l)) * G((i, p, k))
                    acc = acc - desc.derivative(l, G((i, j, k))) + desc.derivative(k, G((i, j, l)))
                    r[(i, j, k, l)] = acc.scale(half)
    return CurvatureCoefficients(desc, r)


def ricci(rc: CurvatureCoefficients):
    """Ric(e_j, e_l) = sum_i r^i_jil."""
    n = rc.desc.n
    zero = rc.desc.algebra.zero()
    out = [[zero] * n for _ in range(n)]
    for (i, j, k, l), v in rc.r.items():
        if k == i:
            out[j][l] = out[j][l] + v
    return out


def ricci_via_trace(rc: CurvatureCoefficients) -> TensorSquare:
    """Ricci as the explicit composite: flip the last two legs of R(e_i) with sigma_23,
    pair the last leg against the dual functional e_i^*, and sum over i."""
    desc = rc.desc
    total = TensorSquare.zero(desc)
    for i in range(desc.n):
        cube = sigma23(rc.image(i))
        functional = [desc.algebra.one() if q == i else desc.algebra.zero() for q in range(desc.n)]
        total = total + evaluate_last_leg(cube, functional)
    return total


def evaluate_last_leg(T: TensorCube, functional) -> TensorSquare:
    """(id (x) id (x) phi)(T) for a right-linear functional phi given on the basis."""
    out = {}
    for (a, b, c), v in T.coeffs.items():
        val = functional[c] * v
        key = (a, b)
        out[key] = out[key] + val if key in out else val
    return TensorSquare(T.desc, out)


def scalar_curvature(g: MetricSpec, ric, desc):
    """Scal = sum_jl g(e_j (x) e_l) Ric(e_j, e_l)."""
    total = desc.algebra.zero()
    for j in range(desc.n):
        for l in range(desc.n):
            if ric[j][l].is_zero():
                continue
            total = total + eval_metric(g, basis_square(desc, j, l)) * ric[j][l]
    return total


def torus_conformal_reference(pair: InvertiblePair, desc, normalization=Fraction(1, 4)):
    """Ricci and scalar curvature of the conformal Levi-Civita connection on the torus.

    Ric11 = Ric22 = -c (k^-1 (d1^2 + d2^2) k + d1(k^-1) d1 k + d2(k^-1) d2 k)
    Ric12 = -Ric21 = c (d1(k^-1) d2 k - d2(k^-1) d1 k)
    Scal = -2c ((d1^2 + d2^2) k + k d1(k^-1) d1 k + k d2(k^-1) d2 k)

    c = 1/4 is what the Christoffel symbols of the conformal connection produce.
    """
    k, kinv = pair.k, pair.k_inv
    d = desc.derivative
    c = normalization if desc.algebra.exact else float(normalization)
    lap = d(0, d(0, k)) + d(1, d(1, k))
    a1 = d(0, kinv) * d(0, k)
    a2 = d(1, kinv) * d(1, k)
    diag = -(kinv * lap + a1 + a2).scale(c)
    off = (d(0, kinv) * d(1, k) - d(1, kinv) * d(0, k)).scale(c)
    ric = [[diag, off], [-off, diag]]
    scal = -(lap + k * a1 + k * a2).scale(2 * c)
    return ric, scal


def torus_printed_scalar(pair: InvertiblePair, desc):
    """The scalar curvature display -(d1^2 + d2^2) k - k (d2(k^-1) d2 k - k d1(k^-1) d1 k), taken literally."""
    k, kinv = pair.k, pair.k_inv
    d = desc.derivative
    lap = d(0, d(0, k)) + d(1, d(1, k))
    return -lap - k * (d(1, kinv) * d(1, k) - k * d(0, kinv) * d(0, k))


def matrix_difference_norm(a, b):
    total = None
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            v = (x - y).l1_norm()
            total = v if total is None else total + v
    return total
