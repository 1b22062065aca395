from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from tpforest.exactalg import R, Rational, format_poly
from tpforest.harness import certified_phi
from tpforest.triangle import (
    PolyMatrix,
    binomial_Bx,
    forest_production,
    identity,
    inverse_bidiag,
    named_triangle,
    output_matrix,
    production_matrix,
    ramanujan_coeff,
    yphi_production,
    yz_production,
)
from tpforest.tpcheck import (
    BudgetExceeded,
    check_hankel_tp,
    check_toeplitz_tp,
    check_tp,
    det,
    det_permutation,
    hankel_matrix,
    minor,
    tp_seq_builder,
)

x, y, z, a, b, q = R.gens("x", "y", "z", "a", "b", "q")


def test_det_ramanujan_lower_left():
    Rm = ramanujan_coeff(9)
    assert minor(Rm, range(2, 9), range(7)) == -3709251874944000


def test_det_identity():
    assert det(identity(5)) == 1
    assert det([]) == 1


def test_det_psi_production():
    P0 = production_matrix(named_triangle("functional_digraph_psi", None, 10))
    assert minor(P0, range(5, 9), range(1, 5)) == -36570734


def test_det_non_square():
    with pytest.raises(ValueError):
        det([[1, 2]])


def test_check_tp_ramanujan_yz():
    rep = check_tp(named_triangle("ramanujan_yz", None, 7), 3)
    assert rep.passed and rep.window == 7 and rep.r == 3 and rep.witness is None
    assert rep.scope() == "evidence at (7, 3)"


def test_check_tp_q_forest_production_fails_at_order_one():
    P0 = production_matrix(named_triangle("q_forest", None, 6))
    rep = check_tp(P0, 1)
    assert not rep.passed
    w = rep.witness
    assert (w.rows, w.cols) == ((3,), (1,))
    assert w.monomial == "q^2" and w.coeff == -1
    assert format_poly(w.det).startswith("-q^2 - q^3 + 3*q^5")
    assert rep.scope() == "counterexample within (5, 1)"


def test_check_tp_nonneg_diagonal():
    D = PolyMatrix.build(5, lambda i, j: (x + i) ** i if i == j else 0)
    assert check_tp(D, 5).passed


def test_check_tp_rejects_bad_order():
    with pytest.raises(ValueError):
        check_tp(identity(3), 0)


def test_minor_order_is_size_then_lex():
    M = PolyMatrix([[1, 1, 0], [1, 0, 1], [0, 1, 1]])
    rep = check_tp(M, 3)
    assert not rep.passed
    # first negative 2x2 minor in lexicographic order of (rows, cols)
    assert (rep.witness.rows, rep.witness.cols) == ((0, 1), (0, 1))
    assert rep.minors_evaluated == 9 + 1


def test_hankel_examples():
    F = [x * (x + n) ** (n - 1) if n else R.one() for n in range(7)]
    assert check_hankel_tp(F, 4, 3).passed
    A = [sum((x ** k for k in range(n + 1)), R.zero()) for n in range(3)]
    rep = check_hankel_tp(A, 2, 2)
    assert not rep.passed and rep.witness.det == -x
    with pytest.raises(ValueError):
        hankel_matrix([1, 2], 2)


def test_hankel_q_star():
    from tpforest.triangle import q_forest_star_rowpoly

    seq = [q_forest_star_rowpoly(n) for n in range(3)]
    rep = check_hankel_tp(seq, 2, 2)
    assert not rep.passed
    assert rep.witness.det == (q + 1) * x + (q - 1) * x ** 2


def test_toeplitz_examples():
    assert check_toeplitz_tp([Rational(1, factorial(n)) for n in range(6)], 6, 4).passed
    psi = [sum((Rational(1, factorial(l)) for l in range(m + 1)), Rational(0)) for m in range(6)]
    assert check_toeplitz_tp(psi, 6, 3).passed
    assert check_toeplitz_tp([1, x, 0, 0, 0], 5, 5).passed
    assert not check_toeplitz_tp([1, -x, 0, 0, 0], 5, 5).passed


def test_tp_seq_builder():
    assert tp_seq_builder(1, (), [1], None, 5) == [1] * 5
    exp_z = tp_seq_builder(1, (), (), z, 5)
    assert exp_z == [z ** n * Rational(1, factorial(n)) for n in range(5)]
    a1, b1 = R.yvar(1), R.yvar(2)
    s = tp_seq_builder(1, [a1], [b1], None, 5)
    assert s == [R.one()] + [b1 ** (n - 1) * (a1 + b1) for n in range(1, 5)]


def test_witness_is_reproducible():
    Rm = ramanujan_coeff(9)
    rep = check_tp(Rm, 7)
    assert not rep.passed
    w = rep.witness
    assert w.det == -3709251874944000
    assert minor(Rm, w.rows, w.cols) == w.det


def test_report_independent_of_jobs():
    Rm = ramanujan_coeff(8)
    one = check_tp(Rm, 3, jobs=1)
    many = check_tp(Rm, 3, jobs=3)
    assert one.to_json() == many.to_json()
    tri = named_triangle("ramanujan_yz", None, 6)
    assert check_tp(tri, 3, jobs=1).to_json() == check_tp(tri, 3, jobs=3).to_json()


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        check_tp(named_triangle("sgs_ab", None, 8), 4, budget_ms=1)


def test_json_shape():
    rep = check_tp(identity(3), 2)
    d = rep.to_json()
    assert set(d) == {"verdict", "r", "window", "minors_evaluated", "witness", "wall_time_ms"}
    assert d["wall_time_ms"] is None
    assert rep.to_json(timing=True)["wall_time_ms"] is not None


# ---------------------------------------------------------------------------
# Properties

entry = st.sampled_from([0, 1, -1, 2]).flatmap(lambda c: st.sampled_from([c, c * x, c * y + 1, c - q]))


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(entry, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_permutation_expansion(rows):
    assert det(rows) == det_permutation(rows)


CERTIFIED = {
    "Bx": lambda N: binomial_Bx(x, N),
    "Ty": lambda N: inverse_bidiag([y] * (N - 1), N),
    "inv_bidiag": lambda N: inverse_bidiag([R.yvar(i) for i in range(1, N)], N),
}


@pytest.mark.parametrize("left", sorted(CERTIFIED))
@pytest.mark.parametrize("right", sorted(CERTIFIED))
def test_cauchy_binet_products(left, right):
    N = 5
    M = CERTIFIED[left](N) @ CERTIFIED[right](N)
    assert check_tp(M, 3).passed


def _production_corpus(N):
    phi = certified_phi(N + 1)
    return {
        "forest": forest_production(N),
        "yz": yz_production(N, y, z),
        "yphi": yphi_production(N, phi, y),
    }


@pytest.mark.parametrize("name", ["forest", "yz", "yphi"])
def test_production_tp_implies_output_tp(name):
    N = 6
    P0 = _production_corpus(N)[name]
    assert check_tp(P0, 3).passed
    A = output_matrix(P0, N)
    assert check_tp(A, 3).passed
    # zeroth column is Hankel-TP
    col0 = [A[n, 0] for n in range(N)]
    assert check_hankel_tp(col0, 3, 3).passed

