from fractions import Fraction as F

from hypothesis import given, strategies as st

from ncgeom.algebra import NCTorus, monomial_inverse, neumann_inverse
from ncgeom.calculus import (OneForm, TensorCube, TensorSquare, basis, basis_square, p_sym,
                             qhm_calculus, sigma, sigma23, tensor, torus_calculus)
from ncgeom.metric import (MetricSpec, contract_g_left, eval_metric, metric_matrix,
                           nondegeneracy_residual, omega_g0, v_g_apply)

from oracles import EXACT_Q, exact_elements
from test_calculus import squares

A = EXACT_Q
D = torus_calculus(A)
U, V, one = A.U, A.V, A.one()
g0 = MetricSpec.diagonal()
gU = MetricSpec.conformal(monomial_inverse(U))
elems = exact_elements(A, max_terms=3)


def test_eval_metric_examples():
    for i in range(2):
        for j in range(2):
            assert eval_metric(g0, basis_square(D, i, j)) == (one if i == j else A.zero())
    assert eval_metric(gU, basis_square(D, 0, 0)) == U
    assert eval_metric(gU, basis_square(D, 1, 1, V)) == U * V


def test_omega_examples():
    om = omega_g0(D)
    assert om == basis_square(D, 0, 0) + basis_square(D, 1, 1)
    assert p_sym(om) == om
    Q = qhm_calculus(A)
    assert omega_g0(Q) == sum((basis_square(Q, i, i) for i in range(1, 3)), basis_square(Q, 0, 0))


def test_contract_g_left_examples():
    Q = qhm_calculus(A)
    assert contract_g_left(g0, TensorCube(Q, {(0, 0, 1): one})) == basis(Q, 1)
    assert contract_g_left(g0, TensorCube(Q, {(0, 1, 1): one})).is_zero()
    w = OneForm.from_list(Q, [U, V, one])
    assert contract_g_left(g0, tensor(omega_g0(Q), w)) == w * 3


def test_v_g_examples():
    assert v_g_apply(g0, basis(D, 0), basis(D, 0)) == one
    assert v_g_apply(g0, basis(D, 0), basis(D, 1) * V).is_zero()
    assert v_g_apply(gU, basis(D, 0), basis(D, 0) * V) == U * V


def test_nondegeneracy_witness():
    assert metric_matrix(gU, D) == [[U, A.zero()], [A.zero(), U]]
    assert nondegeneracy_residual(gU, D) == 0
    N = NCTorus("numeric", 1 / 3)
    DN = torus_calculus(N)
    pair = neumann_inverse(N.one() + N.U.scale(0.1), 12, 1e-10)
    assert nondegeneracy_residual(MetricSpec.conformal(pair), DN) <= 2 * pair.residual_bound + 1e-15


@given(squares())
def test_metric_symmetry(X):
    assert eval_metric(g0, sigma(X)) == eval_metric(g0, X)
    assert eval_metric(gU, sigma(X)) == eval_metric(gU, X)


@given(st.lists(st.sampled_from([F(1), F(-2), F(1, 3), F(0)]), min_size=2, max_size=2))
def test_omega_contraction_central_coefficients(cs):
    # (g0 (x) id) sigma23 (Omega (x) eta) = eta for eta with central coefficients
    eta = OneForm.from_list(D, [A.scalar(c) for c in cs])
    assert contract_g_left(g0, sigma23(tensor(omega_g0(D), eta))) == eta


def test_omega_contraction_on_basis():
    for desc in (D, qhm_calculus(A)):
        for i in range(desc.n):
            eta = basis(desc, i)
            assert contract_g_left(g0, sigma23(tensor(omega_g0(desc), eta))) == eta
