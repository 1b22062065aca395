import pytest
from hypothesis import given, settings, strategies as st

from tpforest.combinat import oracle_S_A_series, oracle_row
from tpforest.exactalg import R, parse_poly as P
from tpforest.series import (
    PowerSeries,
    SeriesError,
    comp_inverse,
    compose,
    conv_y_power,
    exp_of,
    exp_series,
    generic_phi,
    geometric,
    lagrange_solve,
    log1p_series,
    named_series,
    solve_autonomous_ode,
    tree_T,
)

x, y, z, w = R.gens("x", "y", "z", "w")


def S(*cs):
    return PowerSeries(list(cs))


def t_(N):
    return PowerSeries.variable(N)


def test_derivative():
    assert S(0, 1, 1).derivative() == S(1, 2)


def test_geometric_times_one_minus_t():
    N = 6
    assert geometric(t_(N)) * (1 - t_(N)) == PowerSeries.constant(1, N)


def test_tree_derivative_equation():
    N = 8
    T = tree_T(N)
    rhs = compose(exp_of(1, N), T) * geometric(T)
    assert T.derivative() == rhs.truncate(N - 1)


def test_exact_div_matches_geometric():
    N = 5
    one = PowerSeries.constant(1, N)
    assert one.exact_div(1 - t_(N)) == geometric(t_(N))
    with pytest.raises(Exception):
        one.exact_div(t_(N))


def test_compose_exp_tree():
    N = 4
    E = compose(exp_of(1, N), tree_T(N))
    assert [E.egf(n) for n in range(N + 1)] == [1, 1, 3, 16, 125]


def test_compose_with_identity():
    f = S(1, 2, P("x"), P("y*z"))
    assert compose(f, t_(3)) == f


def test_compose_geometric_tree():
    N = 4
    G = compose(geometric(t_(N)), tree_T(N))
    assert [G.egf(n) for n in range(N + 1)] == [1, 1, 4, 27, 256]


def test_compose_requires_zero_constant():
    with pytest.raises(SeriesError):
        compose(S(1, 1), S(1, 1))


def test_comp_inverse_mobius():
    N = 7
    g = t_(N) * geometric(t_(N))
    assert comp_inverse(g) == t_(N) * geometric(-t_(N))


def test_comp_inverse_tree():
    N = 8
    inv = comp_inverse(tree_T(N))
    assert inv == t_(N) * exp_of(-1, N)
    assert compose(tree_T(N), inv) == t_(N)


def test_comp_inverse_involution_and_error():
    g = S(0, 2, P("x"), 3, P("y"))
    assert comp_inverse(comp_inverse(g)) == g
    with pytest.raises(SeriesError):
        comp_inverse(S(0, P("x"), 1))


def test_lagrange_tree():
    f = lagrange_solve(exp_of(1, 6), 6)
    assert [f.egf(n) for n in range(1, 7)] == [1, 2, 9, 64, 625, 7776]


def test_lagrange_constant():
    assert lagrange_solve(PowerSeries.constant(1, 4), 5) == t_(5)


def test_lagrange_vs_ode_for_ramanujan():
    # f = t Phi(f) with Phi = e^{zu}/(1 - yu) is not the Ramanujan generating function;
    # the ODE G' = Phi(G) is.
    N = 4
    Phi = exp_of(z, N) * geometric(t_(N) * y)
    lag = lagrange_solve(Phi, N)
    ode = solve_autonomous_ode(Phi, N)
    assert lag.egf(3) == P("9*z^2 + 18*y*z + 12*y^2")
    assert ode.egf(3) == P("2*z^2 + 4*z*y + 3*y^2")
    assert ode.egf(4) == P("6*z^3 + 18*z^2*y + 25*z*y^2 + 15*y^3")


def test_ode_tree():
    N = 10
    A = exp_of(1, N) * geometric(t_(N))
    assert solve_autonomous_ode(A, N) == lagrange_solve(exp_of(1, N), N)


def test_ode_constant():
    assert solve_autonomous_ode(PowerSeries.constant(1, 5), 6) == t_(6)


def test_ode_generic_phi_matches_enumeration():
    N = 5
    Psi = named_series("Psi_y_phi", {}, N)
    G = solve_autonomous_ode(Psi, N)
    for n in range(1, N + 1):
        assert G.egf(n) == oracle_row(n, "yphi")[1]


def test_named_sharp_series():
    G = named_series("exp_wT_minus_one_over_w", {}, 4)
    assert [G.egf(n) for n in range(1, 5)] == [1, w + 2, (w + 3) ** 2, (w + 4) ** 3]
    assert named_series("tree_T", {}, 0) == PowerSeries([0])


def test_named_log_series_column():
    from tpforest.triangle import riordan

    G = named_series("log_one_minus_T", {}, 5)
    A = riordan(1, G, 6)
    assert [A[n, 1] for n in range(1, 6)] == [1, 3, 17, 142, 1569]


def test_unknown_series():
    with pytest.raises(SeriesError):
        named_series("nope", {}, 3)


def test_string_form():
    assert str(S(1, P("x+y"))) == "(1) + (y + x)*t + O(t^2)"


# ---------------------------------------------------------------------------
# Properties


def test_tree_functional_equation():
    N = 12
    T = tree_T(N)
    assert (T - t_(N) * exp_series(T)).is_zero()


def test_tree_coefficients_by_lagrange():
    N = 12
    f = lagrange_solve(exp_of(1, N), N)
    assert [f.egf(n) for n in range(1, N + 1)] == [n ** (n - 1) for n in range(1, N + 1)]


def _ramanujan_R(N):
    return solve_autonomous_ode(exp_of(z, N) * geometric(t_(N) * y), N)


def test_dumont_system():
    N = 10
    Rs = _ramanujan_R(N)
    Ss = exp_series(Rs * z)
    As = geometric(Rs * y)
    assert Rs.derivative() == (As * Ss).truncate(N - 1)


def test_dumont_series_match_tree_enumeration():
    N = 5
    Rs = _ramanujan_R(N)
    Ss = exp_series(Rs * z)
    As = geometric(Rs * y)
    assert [Ss.egf(n) for n in range(N + 1)] == oracle_S_A_series(N, "S")
    assert [As.egf(n) for n in range(N + 1)] == oracle_S_A_series(N, "A")


def test_dumont_functional_equation():
    N = 10
    Rs = _ramanujan_R(N)
    lhs = PowerSeries.constant(y - z, N) + Rs * (y * z)
    rhs = (PowerSeries.constant(y - z, N) + t_(N) * z ** 2) * exp_series(Rs * z)
    assert (lhs - rhs).is_zero()


def test_generic_phi_differential_equation():
    N = 8
    phi = generic_phi(N)
    Rs = solve_autonomous_ode(PowerSeries(conv_y_power(phi, y)), N)
    Phi_R = compose(PowerSeries(phi), Rs)
    assert (Rs.derivative() * (1 - Rs * y).truncate(N - 1) - Phi_R.truncate(N - 1)).is_zero()


def test_series_depends_on_convolution_only():
    N = 7
    phi = generic_phi(N)
    left = solve_autonomous_ode(named_series("Psi_y_phi", {}, N), N)
    conv = conv_y_power(phi, y)
    right = solve_autonomous_ode(named_series("Psi_y_phi", {"y": 0, "phi": conv}, N), N)
    assert left == right


small = st.integers(-3, 3)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(small, min_size=5, max_size=5), st.integers(1, 3))
def test_inverse_round_trip(cs, lead):
    g = PowerSeries([0, lead] + cs[:3])
    inv = comp_inverse(g)
    assert compose(g, inv) == t_(4)
    assert compose(inv, g) == t_(4)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.lists(small, min_size=4, max_size=4))
def test_exp_log_inverse(a_):
    h = PowerSeries([0] + a_)
    assert log1p_series(exp_series(h) - 1) == h
