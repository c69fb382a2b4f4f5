"""Connections given by Christoffel symbols, with their verification residuals.

A connection is the array gamma[i, j, k] with nabla(e_i) = sum_jk e_j (x) e_k gamma^i_jk,
extended to all one-forms by nabla(e a) = nabla(e) a + e (x) da.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import AlgebraElement, InvertiblePair
from .calculus import (CalculusDescriptor, OneForm, TensorCube, TensorSquare, TwoForm,
                       basis, basis_square, basis_tensor_left, exterior_d, p_sym,
                       sigma, sigma23, tensor, wedge)
from .metric import MetricSpec, contract_g_left, eval_metric, omega_g0


class HypothesisViolated(ValueError):
    pass


class NotSymmetric(ValueError):
    pass


class NonScalarCoefficient(ValueError):
    pass


class Connection:
    __slots__ = ("desc", "gamma")

    def __init__(self, desc: CalculusDescriptor, gamma: dict):
        self.desc = desc
        self.gamma = {k: v for k, v in gamma.items() if not v.is_zero()}

    def __getitem__(self, idx):
        return self.gamma.get(idx) or self.desc.algebra.zero()

    def nabla_basis(self, i: int) -> TensorSquare:
        return TensorSquare(self.desc, {(j, k): v for (p, j, k), v in self.gamma.items() if p == i})

    def __add__(self, other):
        out = dict(self.gamma)
        for k, v in other.gamma.items():
            out[k] = out[k] + v if k in out else v
        return Connection(self.desc, out)

    def __sub__(self, other):
        return self + Connection(other.desc, {k: -v for k, v in other.gamma.items()})

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return self.desc is other.desc and self.gamma == other.gamma

    __hash__ = None

    def perturbed(self, i, j, k, c) -> "Connection":
        out = dict(self.gamma)
        out[(i, j, k)] = self[i, j, k] + c
        return Connection(self.desc, out)

    def difference_norm(self, other):
        return TensorCube(self.desc, (self - other).gamma).norm()

    def to_nested(self):
        return TensorCube(self.desc, self.gamma).to_nested()

    @classmethod
    def from_nested(cls, desc, nested):
        n = desc.n
        if len(nested) != n or any(len(r) != n or any(len(c) != n for c in r) for r in nested):
            raise ValueError(f"christoffel table must be {n}x{n}x{n}")
        out = {}
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    out[(i, j, k)] = desc.algebra.from_json(nested[i][j][k])
        return cls(desc, out)

    def __repr__(self):
        return f"Connection({self.desc!r}, {len(self.gamma)} nonzero symbols)"


def flat_connection(desc: CalculusDescriptor) -> Connection:
    return Connection(desc, {})


def qhm_nabla0(desc: CalculusDescriptor) -> Connection:
    """nabla_0(e_3) = -e_1 (x) e_2, nabla_0(e_1) = nabla_0(e_2) = 0."""
    return Connection(desc, {(2, 0, 1): -desc.algebra.one()})


def apply_connection(conn: Connection, omega: OneForm) -> TensorSquare:
    desc = conn.desc
    total = TensorSquare.zero(desc)
    for (i,), a in omega.coeffs.items():
        total = total + conn.nabla_basis(i) * a
        total = total + tensor(basis(desc, i), exterior_d(desc, a))
    return total


def torsion(conn: Connection) -> list:
    """T(e_i) = wedge(nabla e_i) + d(e_i)."""
    return [wedge(conn.nabla_basis(i)) + conn.desc.d_of_basis[i] for i in range(conn.desc.n)]


def pi_g(conn: Connection, g: MetricSpec, i: int, j: int, a: AlgebraElement) -> OneForm:
    """(g (x) id) s23 (nabla e_i (x) e_j + nabla e_j (x) e_i) a + g(e_i (x) e_j) da."""
    desc = conn.desc
    cube = tensor(conn.nabla_basis(i), basis(desc, j)) + tensor(conn.nabla_basis(j), basis(desc, i))
    first = contract_g_left(g, sigma23(cube)) * a
    return first + exterior_d(desc, a).lmul(eval_metric(g, basis_square(desc, i, j)))


def pi_g_tensor(conn: Connection, g: MetricSpec, X: TensorSquare) -> OneForm:
    total = OneForm.zero(conn.desc)
    for (i, j), a in X.coeffs.items():
        total = total + pi_g(conn, g, i, j, a)
    return total


def default_probes(desc: CalculusDescriptor) -> list:
    return [(i, j, a) for i in range(desc.n) for j in range(desc.n) for a in desc.generators]


def compat_residual(conn: Connection, g: MetricSpec, probes=None) -> list:
    """[(probe, Pi_g(nabla)(e_i (x) e_j a) - d g(e_i (x) e_j a))]."""
    desc = conn.desc
    if probes is None:
        probes = default_probes(desc)
    out = []
    for (i, j, a) in probes:
        rhs = exterior_d(desc, eval_metric(g, basis_square(desc, i, j, a)))
        out.append(((i, j, a), pi_g(conn, g, i, j, a) - rhs))
    return out


def _is_small(x, tol):
    return x == 0 if tol is None else x <= tol


def check_levi_civita_g0(conn: Connection, tol=None):
    """Raise HypothesisViolated unless conn is torsionless and g0-compatible."""
    g0 = MetricSpec.diagonal()
    bad = [i for i, t in enumerate(torsion(conn)) if not _is_small(t.norm(), tol)]
    if bad:
        raise HypothesisViolated(f"base connection has torsion at e_{bad[0] + 1}")
    for (i, j, a), r in compat_residual(conn, g0):
        if not _is_small(r.norm(), tol):
            raise HypothesisViolated(f"base connection not g0-compatible at ({i + 1},{j + 1})")


def conformal_lc_connection(base: Connection, pair: InvertiblePair, check=True, tol=None) -> Connection:
    """Levi-Civita connection of k.g0 from that of g0, built from tensor operations:

        nabla(e_i) = nabla_g0(e_i) + k^-1 P_sym(dk (x) e_i) - 1/2 k^-1 Omega g0(dk (x) e_i)
    """
    desc = base.desc
    if check:
        check_levi_civita_g0(base, tol)
    g0 = MetricSpec.diagonal()
    k, kinv = pair.k, pair.k_inv
    dk = exterior_d(desc, k)
    omega = omega_g0(desc)
    half = desc.half()
    gamma = {}
    for i in range(desc.n):
        X = tensor(dk, basis(desc, i))
        shift = p_sym(X).lmul(kinv) - (omega * eval_metric(g0, X)).lmul(kinv) * half
        nab = base.nabla_basis(i) + shift
        for (j, l), v in nab.coeffs.items():
            gamma[(i, j, l)] = v
    return Connection(desc, gamma)


def christoffel_closed_form(base: Connection, pair: InvertiblePair) -> Connection:
    """gamma^i_jl = gamma0^i_jl + 1/2 (d_il w_j + d_ij w_l - d_jl w_i), w_j = k^-1 d_j k."""
    desc = base.desc
    if not desc.basis_closed():
        raise HypothesisViolated("closed-form Christoffel symbols need d(e_i) = 0")
    n = desc.n
    w = [(pair.k_inv * desc.derivative(j, pair.k)).scale(desc.half()) for j in range(n)]
    gamma = {}
    for i in range(n):
        for j in range(n):
            for l in range(n):
                v = base[i, j, l]
                if i == l:
                    v = v + w[j]
                if i == j:
                    v = v + w[l]
                if j == l:
                    v = v - w[i]
                gamma[(i, j, l)] = v
    return Connection(desc, gamma)


class TTensor:
    """Scalar structure constants T^m_ij, keyed (m, i, j)."""

    def __init__(self, n: int, values: dict):
        self.n = n
        self.values = {k: v for k, v in values.items() if v != 0}

    def __getitem__(self, idx):
        return self.values.get(idx, 0)

    def __eq__(self, other):
        if isinstance(other, TTensor):
            return self.n == other.n and self.values == other.values
        return NotImplemented

    __hash__ = None

    def is_symmetric(self) -> bool:
        return all(self[m, j, i] == v for (m, i, j), v in self.values.items())

    def __repr__(self):
        return f"TTensor({self.values})"


def tt_from_nabla0(conn: Connection, g: MetricSpec) -> TTensor:
    """Read T^m_ij off -Pi_g(nabla_0)(e_i (x) e_j) = sum_m e_m T^m_ij."""
    desc = conn.desc
    one = desc.algebra.one()
    values = {}
    for i in range(desc.n):
        for j in range(desc.n):
            form = -pi_g(conn, g, i, j, one)
            for (m,), c in form.coeffs.items():
                if not c.is_scalar():
                    raise NonScalarCoefficient(f"T^{m + 1}_{i + 1}{j + 1} = {c!r}")
                val = c.coefficient(0, 0)
                if desc.algebra.exact:
                    if set(val.terms) - {0}:
                        raise NonScalarCoefficient(f"T^{m + 1}_{i + 1}{j + 1} carries a phase")
                    val = val.terms.get(0, 0)
                values[(m, i, j)] = val
    return TTensor(desc.n, values)


def qhm_lc_connection(nabla0: Connection, T: TTensor) -> Connection:
    """nabla_0 + L with L^j_im = 1/2 (T^m_ij + T^i_jm - T^j_mi)."""
    desc = nabla0.desc
    n = desc.n
    half = desc.half()
    alg = desc.algebra
    gamma = dict(nabla0.gamma)
    for j in range(n):
        for i in range(n):
            for m in range(n):
                val = (T[m, i, j] + T[i, j, m] - T[j, m, i])
                if val != 0:
                    key = (j, i, m)
                    add = alg.scalar(val).scale(half)
                    gamma[key] = gamma[key] + add if key in gamma else add
    return Connection(desc, gamma)


def phi_g_apply(g: MetricSpec, L: Connection, X: TensorSquare, check=True) -> OneForm:
    """(g (x) id) s23 (L (x) id)(1 + sigma) X for X in the symmetric range."""
    desc = L.desc
    if check and p_sym(X) != X:
        raise NotSymmetric("X is not fixed by P_sym")
    Y = X + sigma(X)
    cube = TensorCube.zero(desc)
    for p in range(desc.n):
        row = OneForm(desc, {(q,): Y[p, q] for q in range(desc.n)})
        cube = cube + tensor(L.nabla_basis(p), row)
    return contract_g_left(g, sigma23(cube))


def lifted_connection_on_tensor_square(conn: Connection, X: TensorSquare) -> TensorCube:
    """nabla(e_i (x) e_j a) = s23(nabla e_i (x) e_j) a + e_i (x) nabla(e_j) a + e_i (x) e_j (x) da."""
    desc = conn.desc
    total = TensorCube.zero(desc)
    for (i, j), a in X.coeffs.items():
        total = total + sigma23(tensor(conn.nabla_basis(i), basis(desc, j))) * a
        total = total + basis_tensor_left(i, conn.nabla_basis(j)) * a
        total = total + basis_tensor_left(i, basis_tensor_left(j, exterior_d(desc, a)))
    return total


def dual_connection_family(conn: Connection, g: MetricSpec) -> dict:
    """(nabla g)(e_i (x) e_j) = d(g(e_i (x) e_j)) - (g (x) id) nabla(e_i (x) e_j)."""
    desc = conn.desc
    out = {}
    for i in range(desc.n):
        for j in range(desc.n):
            X = basis_square(desc, i, j)
            out[(i, j)] = (exterior_d(desc, eval_metric(g, X))
                           - contract_g_left(g, lifted_connection_on_tensor_square(conn, X)))
    return out


def dual_connection_residual(conn: Connection, g: MetricSpec):
    fam = dual_connection_family(conn, g)
    return sum((v.norm() for v in fam.values()), _zero_norm(conn.desc))


def _zero_norm(desc):
    from fractions import Fraction
    return Fraction(0) if desc.algebra.exact else 0.0


def phi_identity_residual(conn: Connection, base: Connection, g: MetricSpec):
    """sum over i <= j of |Phi_g(conn - base)(X) - (dg(X) - Pi_g(base)(X))|, X = P_sym(e_i (x) e_j)."""
    desc = conn.desc
    L = conn - base
    total = _zero_norm(desc)
    for i in range(desc.n):
        for j in range(i, desc.n):
            X = p_sym(basis_square(desc, i, j))
            lhs = phi_g_apply(g, L, X)
            rhs = exterior_d(desc, eval_metric(g, X)) - pi_g_tensor(base, g, X)
            total += (lhs - rhs).norm()
    return total


@dataclass
class ResidualReport:
    torsion: list = field(default_factory=list)
    compat: list = field(default_factory=list)
    dual: object = 0
    phi_identity: object = None


def residual_report(conn: Connection, g: MetricSpec, base: Connection | None = None,
                    probes=None) -> ResidualReport:
    rep = ResidualReport()
    rep.torsion = [t.norm() for t in torsion(conn)]
    rep.compat = [(p, r.norm()) for p, r in compat_residual(conn, g, probes)]
    rep.dual = dual_connection_residual(conn, g)
    if base is not None:
        rep.phi_identity = phi_identity_residual(conn, base, g)
    return rep
