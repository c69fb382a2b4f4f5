"""Free one-form module with a central basis e_1..e_n.

Every tensor stores right coefficients: a OneForm is sum_i e_i a_i, a
TensorSquare sum e_i (x) e_j a_ij, a TensorCube sum e_i (x) e_j (x) e_k a_ijk and
a TwoForm sum_{i<j} e_i ^ e_j a_ij.  Because the basis is central, a left
factor b passes the basis legs and lands in front of each coefficient
(b . e_i a = e_i (b a)); it never moves past another coefficient.

Indices are 0-based in code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .algebra import AlgebraElement, NCTorus, derive


class DescriptorMismatch(ValueError):
    pass


class CalculusDescriptor:
    """Rank n, coefficient algebra, derivations d_j and the two-forms d(e_i)."""

    def __init__(self, n: int, algebra: NCTorus, derivations, d_of_basis=None, label="",
                 generators=None):
        self.n = n
        self.algebra = algebra
        self.derivations = tuple(derivations)
        if len(self.derivations) != n:
            raise ValueError("need one derivation per basis element")
        if d_of_basis is None:
            d_of_basis = [TwoForm.zero(self) for _ in range(n)]
        self.d_of_basis = tuple(d_of_basis)
        self.label = label
        # algebra elements used as compatibility probes
        self.generators = tuple(generators) if generators else (algebra.one(),)

    def __repr__(self):
        return f"CalculusDescriptor({self.label or self.n})"

    def basis_closed(self) -> bool:
        return all(w.is_zero() for w in self.d_of_basis)

    def half(self):
        return Fraction(1, 2) if self.algebra.exact else 0.5

    def derivative(self, j: int, a: AlgebraElement) -> AlgebraElement:
        return self.derivations[j](a)


def torus_calculus(algebra: NCTorus, label="nc-torus") -> CalculusDescriptor:
    gens = [algebra.one(), algebra.U, algebra.V, algebra.monomial(-1, 0), algebra.monomial(0, -1)]
    return CalculusDescriptor(2, algebra, [_d1, _d2], label=label, generators=gens)


def _d1(a):
    return derive(1, a)


def _d2(a):
    return derive(2, a)


def _zero_derivation(a: AlgebraElement) -> AlgebraElement:
    return a.algebra.zero()


def qhm_calculus(algebra: NCTorus, d_e3_sign: int = 1, label="qhm") -> CalculusDescriptor:
    """Rank-3 calculus with scalar coefficients; d(e_3) = sign * e_1 ^ e_2."""
    desc = CalculusDescriptor(3, algebra, [_zero_derivation] * 3, label=label)
    one = algebra.one()
    desc.d_of_basis = (TwoForm.zero(desc), TwoForm.zero(desc),
                       TwoForm(desc, {(0, 1): one * d_e3_sign}))
    return desc


class _Tensor:
    """Shared coefficient plumbing; coeffs is a flat dict index-tuple -> element."""

    rank = 0
    __slots__ = ("desc", "coeffs")

    def __init__(self, desc: CalculusDescriptor, coeffs):
        self.desc = desc
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}

    @classmethod
    def zero(cls, desc):
        return cls(desc, {})

    def indices(self):
        return itertools.product(range(self.desc.n), repeat=self.rank)

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        return self.coeffs.get(idx) or self.desc.algebra.zero()

    def _check(self, other):
        if type(self) is not type(other):
            raise TypeError(f"{type(self).__name__} vs {type(other).__name__}")
        if self.desc is not other.desc:
            raise DescriptorMismatch(f"{self.desc!r} vs {other.desc!r}")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return type(self)(self.desc, out)

    def __neg__(self):
        return type(self)(self.desc, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, a):
        """Right multiplication: (X a)_idx = X_idx a."""
        if isinstance(a, AlgebraElement):
            return type(self)(self.desc, {k: v * a for k, v in self.coeffs.items()})
        return type(self)(self.desc, {k: v.scale(a) for k, v in self.coeffs.items()})

    def lmul(self, b):
        """Left multiplication b . X, coefficientwise from the left."""
        if isinstance(b, AlgebraElement):
            return type(self)(self.desc, {k: b * v for k, v in self.coeffs.items()})
        return type(self)(self.desc, {k: v.scale(b) for k, v in self.coeffs.items()})

    def __rmul__(self, b):
        return self.lmul(b)

    def __eq__(self, other):
        if type(self) is not type(other):
            return NotImplemented
        return self.desc is other.desc and self.coeffs == other.coeffs

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.coeffs

    def norm(self):
        """Sum of l1 norms of all coefficients."""
        total = Fraction(0) if self.desc.algebra.exact else 0.0
        for v in self.coeffs.values():
            total += v.l1_norm()
        return total

    def to_nested(self):
        def build(prefix):
            if len(prefix) == self.rank:
                return self[tuple(prefix)].to_json()
            return [build(prefix + [i]) for i in range(self.desc.n)]
        return build([])

    def __repr__(self):
        body = ", ".join(f"{k}: {v!r}" for k, v in sorted(self.coeffs.items()))
        return f"{type(self).__name__}({{{body}}})"


class OneForm(_Tensor):
    rank = 1
    __slots__ = ()

    @classmethod
    def from_list(cls, desc, values):
        return cls(desc, {(i,): v for i, v in enumerate(values)})

    def as_list(self):
        return [self[i] for i in range(self.desc.n)]


class TensorSquare(_Tensor):
    rank = 2
    __slots__ = ()


class TensorCube(_Tensor):
    rank = 3
    __slots__ = ()


class TwoForm(_Tensor):
    """Keys are (i, j) with i < j."""

    rank = 2
    __slots__ = ()

    def __init__(self, desc, coeffs):
        for (i, j) in coeffs:
            if not i < j:
                raise ValueError(f"two-form index {(i, j)} must satisfy i < j")
        super().__init__(desc, coeffs)

    def indices(self):
        return itertools.combinations(range(self.desc.n), 2)


def basis(desc: CalculusDescriptor, i: int) -> OneForm:
    return OneForm(desc, {(i,): desc.algebra.one()})


def basis_square(desc, i, j, a=None) -> TensorSquare:
    return TensorSquare(desc, {(i, j): desc.algebra.one() if a is None else a})


def exterior_d(desc: CalculusDescriptor, a: AlgebraElement) -> OneForm:
    """d a = sum_j e_j d_j(a)."""
    return OneForm(desc, {(j,): desc.derivative(j, a) for j in range(desc.n)})


def tensor(x, eta: OneForm):
    """x (x) eta for a OneForm or TensorSquare x; coefficients multiply in order."""
    if x.desc is not eta.desc:
        raise DescriptorMismatch("tensor factors from different calculi")
    out = {}
    for k, v in x.coeffs.items():
        for (q,), w in eta.coeffs.items():
            out[k + (q,)] = v * w
    if isinstance(x, OneForm):
        return TensorSquare(x.desc, out)
    if isinstance(x, TensorSquare):
        return TensorCube(x.desc, out)
    raise TypeError(f"cannot tensor {type(x).__name__}")


def basis_tensor_left(i: int, x):
    """e_i (x) x for a OneForm or TensorSquare x."""
    out = {(i,) + k: v for k, v in x.coeffs.items()}
    if isinstance(x, OneForm):
        return TensorSquare(x.desc, out)
    if isinstance(x, TensorSquare):
        return TensorCube(x.desc, out)
    raise TypeError(f"cannot tensor {type(x).__name__}")


def sigma(X: TensorSquare) -> TensorSquare:
    return TensorSquare(X.desc, {(j, i): v for (i, j), v in X.coeffs.items()})


def p_sym(X: TensorSquare) -> TensorSquare:
    return (X + sigma(X)) * X.desc.half()


def one_minus_p_sym(X: TensorSquare) -> TensorSquare:
    return (X - sigma(X)) * X.desc.half()


def wedge(X: TensorSquare) -> TwoForm:
    out = {}
    for i, j in itertools.combinations(range(X.desc.n), 2):
        out[(i, j)] = X[i, j] - X[j, i]
    return TwoForm(X.desc, out)


def q_inverse(w: TwoForm) -> TensorSquare:
    h = w.desc.half()
    out = {}
    for (i, j), v in w.coeffs.items():
        hv = v.scale(h)
        out[(i, j)] = hv
        out[(j, i)] = -hv
    return TensorSquare(w.desc, out)


def sigma23(T: TensorCube) -> TensorCube:
    return TensorCube(T.desc, {(i, k, j): v for (i, j, k), v in T.coeffs.items()})


def one_minus_p_sym23(T: TensorCube) -> TensorCube:
    return (T - sigma23(T)) * T.desc.half()


def exterior_d_one_form(omega: OneForm) -> TwoForm:
    """d(sum_k e_k c_k) = sum_k d(e_k) c_k - e_k ^ d(c_k)."""
    desc = omega.desc
    total = TwoForm.zero(desc)
    for (k,), c in omega.coeffs.items():
        total = total + desc.d_of_basis[k] * c
        total = total - wedge(tensor(basis(desc, k), exterior_d(desc, c)))
    return total
