"""Diagonal metric g0(e_i (x) e_j) = delta_ij and conformal deformations k.g0."""

from __future__ import annotations

from .algebra import AlgebraElement, InvertiblePair
from .calculus import (CalculusDescriptor, OneForm, TensorCube, TensorSquare,
                       basis_square, tensor)

DIAGONAL = "diagonal"
CONFORMAL = "conformal"


class MetricSpec:
    def __init__(self, kind: str = DIAGONAL, factor: InvertiblePair | None = None):
        if kind not in (DIAGONAL, CONFORMAL):
            raise ValueError(f"unknown metric kind {kind!r}")
        if kind == CONFORMAL and factor is None:
            raise ValueError("a conformal metric needs an invertible factor")
        self.kind = kind
        self.factor = factor if kind == CONFORMAL else None

    @classmethod
    def diagonal(cls):
        return cls(DIAGONAL)

    @classmethod
    def conformal(cls, pair: InvertiblePair):
        return cls(CONFORMAL, pair)

    @property
    def k(self):
        return self.factor.k if self.factor else None

    def left_factor(self, a: AlgebraElement) -> AlgebraElement:
        return self.factor.k * a if self.factor else a

    def __repr__(self):
        return f"MetricSpec({self.kind})"


def eval_metric(g: MetricSpec, X: TensorSquare) -> AlgebraElement:
    """g0(X) = sum_i X_ii; k.g0(X) = k (sum_i X_ii)."""
    total = X.desc.algebra.zero()
    for i in range(X.desc.n):
        total = total + X[i, i]
    return g.left_factor(total)


def metric_matrix(g: MetricSpec, desc: CalculusDescriptor):
    return [[eval_metric(g, basis_square(desc, i, j)) for j in range(desc.n)]
            for i in range(desc.n)]


def omega_g0(desc: CalculusDescriptor) -> TensorSquare:
    """sum_i e_i (x) e_i."""
    one = desc.algebra.one()
    return TensorSquare(desc, {(i, i): one for i in range(desc.n)})


def contract_g_left(g: MetricSpec, T: TensorCube) -> OneForm:
    """(g (x) id)(sum e_p (x) e_r (x) e_q T_prq) = sum_q e_q sum_p g(e_p (x) e_p) T_ppq."""
    desc = T.desc
    out = {}
    for q in range(desc.n):
        acc = desc.algebra.zero()
        for p in range(desc.n):
            acc = acc + T[p, p, q]
        out[(q,)] = g.left_factor(acc)
    return OneForm(desc, out)


def v_g_apply(g: MetricSpec, omega: OneForm, eta: OneForm) -> AlgebraElement:
    return eval_metric(g, tensor(omega, eta))


def nondegeneracy_residual(g: MetricSpec, desc: CalculusDescriptor):
    """l1 distance of [g(e_i (x) e_j)] [k^-1 delta_ij] from the identity."""
    alg = desc.algebra
    kinv = g.factor.k_inv if g.factor else alg.one()
    mat = metric_matrix(g, desc)
    total = 0
    for i in range(desc.n):
        for j in range(desc.n):
            prod = mat[i][j] * kinv
            target = alg.one() if i == j else alg.zero()
            total = total + (prod - target).l1_norm()
    return total
