"""Acceptance suite: one marked group of tests per criterion.

The terminal summary prints one PASS/FAIL line per criterion (see conftest.py).
Displayed values are transcribed verbatim; derived values come from
independent routes.
"""

import pytest

from tpforest import harness
from tpforest.combinat import (
    digraph_counts,
    oracle_bivariate_psi,
    oracle_S_A_series,
    oracle_triangle,
)
from tpforest.exactalg import R, coeff_of, parse_poly as P, substitute
from tpforest.series import (
    PowerSeries,
    exp_of,
    exp_series,
    geometric,
    lagrange_solve,
    solve_autonomous_ode,
)
from tpforest.triangle import (
    PolyMatrix,
    forest_production,
    named_triangle,
    production_matrix,
    triangle_routes,
)

x, y, z, q = R.gens("x", "y", "z", "q")


def crit(num, title, limit):
    return pytest.mark.criterion(num, title, limit)


def table(rows):
    """Ragged rows of strings or ints as polynomials."""
    return [[P(c) if isinstance(c, str) else c for c in row] for row in rows]


def assert_rows(M: PolyMatrix, rows):
    for n, row in enumerate(table(rows)):
        for k, c in enumerate(row):
            assert M[n, k] == c, (n, k)


# ---------------------------------------------------------------------------
# 1. Tables

C1 = crit(1, "tables", 5)

FOREST = [
    [1], [0, 1], [0, 2, 1], [0, 9, 6, 1], [0, 64, 48, 12, 1], [0, 625, 500, 150, 20, 1],
    [0, 7776, 6480, 2160, 360, 30, 1],
    [0, 117649, 100842, 36015, 6860, 735, 42, 1],
    [0, 2097152, 1835008, 688128, 143360, 17920, 1344, 56, 1],
]
RAMANUJAN = [
    [1], [0, 1], [0, "z + y", 1], [0, "2*z^2 + 4*z*y + 3*y^2", "3*z + 3*y", 1],
    [0, "6*z^3 + 18*z^2*y + 25*z*y^2 + 15*y^3", "11*z^2 + 22*z*y + 15*y^2", "6*z + 6*y", 1],
]
LAH = [
    [1], [0, 1], [0, "phi1", 1], [0, "phi1^2 + 2*phi2", "3*phi1", 1],
    [0, "phi1^3 + 8*phi1*phi2 + 6*phi3", "7*phi1^2 + 8*phi2", "6*phi1", 1],
    [0, "phi1^4 + 22*phi1^2*phi2 + 16*phi2^2 + 42*phi1*phi3 + 24*phi4",
     "15*phi1^3 + 60*phi1*phi2 + 30*phi3", "25*phi1^2 + 20*phi2", "10*phi1", 1],
]
SGS = [
    [1], [0, 1], [0, "a + b", 1], [0, "2*a^2 + 5*a*b + 2*b^2", "3*a + 3*b", 1],
    [0, "6*a^3 + 26*a^2*b + 26*a*b^2 + 6*b^3", "11*a^2 + 26*a*b + 11*b^2", "6*a + 6*b", 1],
    [0, "24*a^4 + 154*a^3*b + 269*a^2*b^2 + 154*a*b^3 + 24*b^4", "50*a^3 + 200*a^2*b + 200*a*b^2 + 50*b^3",
     "35*a^2 + 80*a*b + 35*b^2", "10*a + 10*b", 1],
]
Q_FOREST = [
    [1], [0, 1], [0, "1 + q", 1],
    [0, "1 + 2*q + 3*q^2 + 2*q^3 + q^4", "1 + 2*q + 2*q^2 + q^3", 1],
    [0, "1 + 3*q + 6*q^2 + 10*q^3 + 12*q^4 + 12*q^5 + 10*q^6 + 6*q^7 + 3*q^8 + q^9",
     "1 + 3*q + 6*q^2 + 9*q^3 + 10*q^4 + 9*q^5 + 6*q^6 + 3*q^7 + q^8",
     "1 + 2*q + 3*q^2 + 3*q^3 + 2*q^4 + q^5", 1],
]
ORDERED = [
    [1], [0, 1], [0, 2, 2], [0, 9, 12, 6], [0, 64, 96, 72, 24], [0, 625, 1000, 900, 480, 120],
    [0, 7776, 12960, 12960, 8640, 3600, 720],
    [0, 117649, 201684, 216090, 164640, 88200, 30240, 5040],
    [0, 2097152, 3670016, 4128768, 3440640, 2150400, 967680, 282240, 40320],
]
PSI = [
    [1], [0, 1], [0, 3, 1], [0, 17, 9, 1], [0, 142, 95, 18, 1], [0, 1569, 1220, 305, 30, 1],
    [0, 21576, 18694, 5595, 745, 45, 1],
    [0, 355081, 334369, 113974, 18515, 1540, 63, 1],
    [0, 6805296, 6852460, 2581964, 484729, 49840, 2842, 84, 1],
]
SHARP = [
    [1], [0, 1], [0, "2 + w", 1], [0, "9 + 6*w + w^2", "6 + 3*w", 1],
    [0, "64 + 48*w + 12*w^2 + w^3", "48 + 36*w + 7*w^2", "12 + 6*w", 1],
    [0, "625 + 500*w + 150*w^2 + 20*w^3 + w^4", "500 + 450*w + 140*w^2 + 15*w^3", "150 + 120*w + 25*w^2", "20 + 10*w", 1],
]

TABLES = {
    "forest": (FOREST, None),
    "ramanujan_yz": (RAMANUJAN, None),
    "lah_phi": (LAH, {"phi0": 1}),
    "sgs_ab": (SGS, None),
    "q_forest": (Q_FOREST, None),
    "ordered_forest": (ORDERED, None),
    "functional_digraph_psi": (PSI, None),
    "root_descent_sharp": (SHARP, None),
}


@C1
@pytest.mark.parametrize("name", list(TABLES))
def test_c1_table(name):
    rows, bind = TABLES[name]
    M = named_triangle(name, None, len(rows))
    if bind:
        M = M.subs(bind)
    assert_rows(M, rows)
    # rows sums of the integer tables
    if name == "forest":
        assert [sum(r) for r in rows] == [1, 1, 3, 16, 125, 1296, 16807, 262144, 4782969]
    if name in ("ordered_forest", "functional_digraph_psi"):
        assert [sum(r) for r in rows] == [max(1, n ** n) for n in range(9)]


# ---------------------------------------------------------------------------
# 2. Production matrices

C2 = crit(2, "production matrices", 30)

FOREST_PROD = [
    [0, 1], [0, 2, 1], [0, 5, 4, 1], [0, 16, 15, 6, 1], [0, 65, 64, 30, 8, 1],
    [0, 326, 325, 160, 50, 10, 1], [0, 1957, 1956, 975, 320, 75, 12, 1],
    [0, 13700, 13699, 6846, 2275, 560, 105, 14],
]
SGS_PROD = [
    [0, 1], [0, "a + b", 1], [0, "a^2 + 3*a*b + b^2", "2*a + 2*b", 1],
    [0, "a^3 + 7*a^2*b + 7*a*b^2 + b^3", "3*a^2 + 9*a*b + 3*b^2", "3*a + 3*b", 1],
    [0, "a^4 + 15*a^3*b + 33*a^2*b^2 + 15*a*b^3 + b^4", "4*a^3 + 28*a^2*b + 28*a*b^2 + 4*b^3",
     "6*a^2 + 18*a*b + 6*b^2", "4*a + 4*b", 1],
    [0, "a^5 + 31*a^4*b + 131*a^3*b^2 + 131*a^2*b^3 + 31*a*b^4 + b^5",
     "5*a^4 + 75*a^3*b + 165*a^2*b^2 + 75*a*b^3 + 5*b^4",
     "10*a^3 + 70*a^2*b + 70*a*b^2 + 10*b^3", "10*a^2 + 30*a*b + 10*b^2", "5*a + 5*b"],
]
Q_FOREST_PROD = [
    [0, 1], [0, "1 + q", 1], [0, "2*q^2 + 2*q^3 + q^4", "q + 2*q^2 + q^3", 1],
    [0, "-q^2 - q^3 + 3*q^5 + 6*q^6 + 5*q^7 + 3*q^8 + q^9", "-q^2 + 2*q^4 + 5*q^5 + 5*q^6 + 3*q^7 + q^8",
     "q^2 + 2*q^3 + 2*q^4 + q^5"],
]
PSI_PROD = [
    [0, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 3, 1, 0, 0, 0, 0, 0, 0],
    [0, 8, 6, 1, 0, 0, 0, 0, 0],
    [0, 19, 24, 9, 1, 0, 0, 0, 0],
    [0, 41, 76, 48, 12, 1, 0, 0, 0],
    [0, 84, 205, 190, 80, 15, 1, 0, 0],
    [0, 171, 504, 615, 380, 120, 18, 1, 0],
    [0, 347, 1197, 1764, 1435, 665, 168, 21, 1],
    [0, 690, 2776, 4788, 4704, 2870, 1064, 224, 24],
]


@C2
def test_c2_forest_production_display():
    assert_rows(production_matrix(named_triangle("forest", None, 9)), FOREST_PROD)


@C2
def test_c2_forest_production_formula_on_window_10():
    assert production_matrix(named_triangle("forest", None, 11)) == forest_production(10)


@C2
def test_c2_sgs_production():
    assert_rows(production_matrix(named_triangle("sgs_ab", None, 7)), SGS_PROD)


@C2
def test_c2_q_forest_production():
    assert_rows(production_matrix(named_triangle("q_forest", None, 5)), Q_FOREST_PROD)


@C2
def test_c2_psi_production():
    M = production_matrix(named_triangle("functional_digraph_psi", None, 10))
    assert M.rows == PSI_PROD


# ---------------------------------------------------------------------------
# 3. Counterexamples

C3 = crit(3, "counterexamples", 120)


@C3
def test_c3_ramanujan_minor():
    assert harness.ramanujan_minor() == -3709251874944000


@C3
def test_c3_psi_production_minor():
    assert harness.psi_production_minor() == -36570734


@C3
def test_c3_sgs_combination():
    assert harness.sgs_production_combination() == P(
        "a^8 - 2*a^7*b + 35*a^6*b^2 + 36*a^5*b^3 + 121*a^4*b^4 + 36*a^3*b^5 + 35*a^2*b^6 - 2*a*b^7 + b^8"
    )


@C3
def test_c3_q_forest_hankel():
    assert coeff_of(harness.q_forest_hankel3(), "x", 4) == P("-1 - q + 2*q^2 + 2*q^3 - q^4 - q^5")


@C3
def test_c3_q_star_hankel():
    d1, d2 = harness.q_star_hankel2()
    assert d1 == P("(q+1)*x + (q-1)*x^2")
    assert d2 == P("q^2*(q^2 + 2*q + 2)*x^2 + q*(q^3 + 2*q^2 - 1)*x^3 + q^2*(q-1)*x^4")


@C3
def test_c3_q_sgs_delta3():
    # the displayed value appears once b is read as b/q in the defining product
    assert coeff_of(harness.q_sgs_delta3("b_over_q"), "y", 4) == P("-q^2*(q-1)^2*b^2")
    # with the product as written, the first-column sequence gives q^4 instead
    assert coeff_of(harness.q_sgs_delta3("col1"), "y", 4) == P("-q^4*(q-1)^2*b^2")


@C3
@pytest.mark.xfail(strict=True, reason="row polynomials at x = 0 vanish, so the literal determinant is 0")
def test_c3_q_sgs_delta3_literal():
    assert coeff_of(harness.q_sgs_delta3("literal"), "y", 4) == P("-q^2*(q-1)^2*b^2")


@C3
def test_c3_refined_hankel():
    assert coeff_of(harness.refined_hankel3(), "x", 4) == P("-q^2*(q-1)^2 + 3*q*(q-1)^2*z")


@C3
def test_c3_sharp_shifted_minor():
    assert harness.sharp_shifted_minor() == P("-1 + 2*wp + 2*wp^2")


# ---------------------------------------------------------------------------
# 4. Oracle equivalence

C4 = crit(4, "oracle equivalence", 600)

FOREST_ORACLES = {
    "forest": "count",
    "ramanujan_yz": "yz",
    "rooted_forest_yphi": "yphi",
    "lah_phi": "lah",
    "sgs_ab": "sgs_propv",
    "sgs_ab/ascdes": "sgs_ascdes",
}


@C4
@pytest.mark.parametrize("key", list(FOREST_ORACLES))
def test_c4_forest_triple_route(key):
    name = key.split("/")[0]
    N = 7
    oracle = oracle_triangle(N, FOREST_ORACLES[key])
    routes = triangle_routes(name, None, N)
    assert len(routes) >= 2
    for route, M in routes.items():
        assert M.rows == oracle, route


@C4
@pytest.mark.parametrize("name,by", [("functional_digraph_psi", "components"), ("ordered_forest", "cyclic")])
def test_c4_digraph_counts(name, by):
    N = 8
    for route, M in triangle_routes(name, None, N).items():
        for n in range(N):
            assert [M[n, k] for k in range(n + 1)] == digraph_counts(n, by)[: n + 1], (route, n)


@C4
def test_c4_bivariate_psi():
    N = 8
    rows = harness.sequence("psi_bivariate", N)
    X = triangle_routes("psi_X", None, N)
    Y = triangle_routes("psi_Y", None, N)
    for n in range(1, N):
        enum = oracle_bivariate_psi(n)
        assert rows[n] == enum
        for M in X.values():
            assert [M[n, k] for k in range(N)] == [coeff_of(enum, "x", k) for k in range(N)]
        for M in Y.values():
            assert [M[n, k] for k in range(N)] == [coeff_of(enum, "y", k) for k in range(N)]


# ---------------------------------------------------------------------------
# 5. Identities

C5 = crit(5, "identities", 300)


@C5
@pytest.mark.parametrize("name", list(harness.IDENTITIES))
def test_c5_identity(name):
    ok, detail = harness.IDENTITIES[name]()
    assert ok, detail


# ---------------------------------------------------------------------------
# 6. Theorems at finite windows

C6 = crit(6, "theorem checks", 1800)


@C6
@pytest.mark.parametrize("tid", list(harness.THEOREMS))
def test_c6_theorem(tid):
    claim = harness.THEOREMS[tid]
    rep = harness.run_claim(claim, jobs=4)
    assert rep.passed, rep.to_json()
    assert rep.window >= 4


def test_c6_windows_meet_requirements():
    th = harness.THEOREMS
    assert (th["1.1a"].window, th["1.1a"].r) == (9, 4)
    assert (th["1.1b"].window, th["1.1b"].r) == (5, 4)
    for tid in ("1.2a", "1.2b", "1.3a", "1.3b", "1.3c", "1.4a", "1.4b", "1.4c"):
        assert th[tid].window >= 6 and th[tid].r >= 3
    assert (th["6.3"].window, th["6.3"].r) == (7, 3)
    assert (th["6.12"].window, th["6.12"].r) == (4, 3)
    assert th["6.13a"].window == 6 and th["6.13c"].window == 4


# ---------------------------------------------------------------------------
# 7. Conjecture evidence

C7 = crit(7, "conjecture evidence", 7200)

REQUIRED = {
    "6.1a": (9, 3), "6.1b": (4, 3), "6.2a": (4, None), "6.2b": (4, None), "6.4": (4, None),
    "6.5a": (8, 3), "6.5b": (4, None), "6.6": (5, None), "6.7": (5, None), "6.8a": (10, 4),
    "6.8b": (5, None), "6.9a": (8, 3), "6.9b": (4, None), "6.10a": (8, 3), "6.10b": (4, None),
    "6.11b": (4, None), "6.11c": (4, None),
}


@C7
@pytest.mark.parametrize("cid", list(harness.CONJECTURES))
def test_c7_conjecture(cid):
    claim = harness.CONJECTURES[cid]
    rep = harness.run_claim(claim, jobs=4)
    assert rep.passed, rep.to_json()
    assert rep.scope().startswith("evidence at")
    if cid in REQUIRED:
        window, r = REQUIRED[cid]
        assert rep.window == window
        if r is not None:
            assert rep.r == r


# ---------------------------------------------------------------------------
# 8. Series

C8 = crit(8, "series", 60)


@C8
def test_c8_tree_coefficients():
    N = 12
    T = lagrange_solve(exp_of(1, N), N)
    assert [T.egf(n) for n in range(1, N + 1)] == [n ** (n - 1) for n in range(1, N + 1)]


@C8
def test_c8_ode_equals_lagrange():
    N = 12
    t = PowerSeries.variable(N)
    assert solve_autonomous_ode(exp_of(1, N) * geometric(t), N) == lagrange_solve(exp_of(1, N), N)


def _dumont(N):
    t = PowerSeries.variable(N)
    Rs = solve_autonomous_ode(exp_of(z, N) * geometric(t * y), N)
    return Rs, exp_series(Rs * z), geometric(Rs * y)


@C8
def test_c8_dumont_residuals():
    N = 10
    Rs, Ss, As = _dumont(N)
    assert (Rs.derivative() - (As * Ss).truncate(N - 1)).is_zero()
    t = PowerSeries.variable(N)
    lhs = PowerSeries.constant(y - z, N) + Rs * (y * z)
    rhs = (PowerSeries.constant(y - z, N) + t * z ** 2) * Ss
    assert (lhs - rhs).is_zero()
    # column 1 of the Ramanujan triangle is the EGF shifted by one
    col = [named_triangle("ramanujan_yz", None, N + 1)[n, 1] for n in range(1, N + 1)]
    assert col == [Rs.egf(n) for n in range(1, N + 1)]


@C8
def test_c8_S_A_oracles():
    N = 5
    _, Ss, As = _dumont(N)
    assert [Ss.egf(n) for n in range(N + 1)] == oracle_S_A_series(N, "S")
    assert [As.egf(n) for n in range(N + 1)] == oracle_S_A_series(N, "A")
    # trees on [n+1] rooted at 1
    assert substitute(oracle_S_A_series(N, "S")[N], {"y": 1, "z": 1}) == (N + 1) ** (N - 1)
