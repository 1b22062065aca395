"""Named sequences and matrices, plus registries of checkable claims.

A claim is a (kind, target, bindings, window, r) record; running it builds the
target window and hands it to the TP checker.  Conjecture runs are evidence at
the window and order used, nothing more.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exactalg import MultiPoly, R, Rational, Ring, coeff_of, lift, parse_poly, substitute
from .series import (
    PowerSeries,
    compose,
    conv_y_power,
    generic_phi,
    geometric,
    named_series,
    tree_T,
)
from .tpcheck import TPReport, check_tp, det, hankel_matrix, tp_seq_builder
from .triangle import (
    PolyMatrix,
    binomial_Bx,
    binomial_inverse_Bx,
    delta,
    diag_factorial,
    forest_production,
    identity,
    output_matrix,
    power_toeplitz,
    production_matrix,
    q_forest_star_rowpoly,
    q_sgs_rowpoly,
    ramanujan_coeff,
    riordan,
    row_generating,
    row_polys,
    sgs_rowpoly,
    shift_delete_first,
    named_triangle,
    NAMED_TRIANGLES,
    yz_production,
)


class UnknownTarget(KeyError):
    pass


Bindings = Dict[str, MultiPoly]


def parse_bindings(items: Sequence[str], ring: Ring = R) -> Bindings:
    """["q=1+r", ...] -> {"q": 1+r}; names must belong to the ring."""
    out: Bindings = {}
    for item in items:
        if "=" not in item:
            raise ValueError(f"expected VAR=POLY, got {item!r}")
        name, rhs = item.split("=", 1)
        name = name.strip()
        if name not in ring.names:
            raise ValueError(f"unknown variable {name!r}")
        out[name] = parse_poly(rhs, ring)
    return out


def _apply(values, bindings: Optional[Bindings]):
    if not bindings:
        return values
    return [substitute(v, bindings) for v in values]


# ---------------------------------------------------------------------------
# Triangles with caching


@lru_cache(maxsize=64)
def _cached_triangle(name: str, N: int) -> PolyMatrix:
    return named_triangle(name, None, N)


def triangle(name: str, N: int) -> PolyMatrix:
    return _cached_triangle(name, N)


def certified_phi(N: int, ring: Ring = R) -> List[MultiPoly]:
    """phi_m = [t^m] (1 + a t)/(1 - b t): Toeplitz-TP coefficientwise in a, b."""
    return tp_seq_builder(1, [ring.gen("a")], [ring.gen("b")], None, N, ring)


@lru_cache(maxsize=16)
def yphi_certified(N: int) -> PolyMatrix:
    tri = named_triangle("rooted_forest_yphi", {"phi": certified_phi(N + 1)}, N)
    return PolyMatrix(tri.rows, "lower_triangular", yphi_certified, R)


@lru_cache(maxsize=16)
def refined_q(N: int) -> PolyMatrix:
    """Refined Ramanujan triangle at y_i = q^i."""
    q = R.gen("q")
    tri = named_triangle("refined_ramanujan_yvec", {"ys": [q ** i for i in range(1, N + 1)]}, N)
    return PolyMatrix(tri.rows, "lower_triangular", refined_q, R)


# ---------------------------------------------------------------------------
# Sequences: name -> (description, builder(n_terms) -> list)


def _rowgen(tri: Callable[[int], PolyMatrix], var: str = "x"):
    return lambda n: row_polys(tri(n), var) if n else []


def _col1(tri: Callable[[int], PolyMatrix], scale: Optional[Callable[[int], int]] = None):
    def build(n):
        if not n:
            return []
        A = tri(n + 1)
        out = []
        for i in range(n):
            v = A[i + 1, 1]
            out.append(v * Rational(1, scale(i)) if scale else v)
        return out

    return build


def _named(name):
    return lambda N: triangle(name, N)


def _q_star_rowgen(n):
    return [q_forest_star_rowpoly(i) for i in range(n)]


def _q_sgs_rowgen(n):
    x, y, a, b, q = R.gens("x", "y", "a", "b", "q")
    return [q_sgs_rowpoly(i, x, y, a, b, q) for i in range(n)]


def _q_sgs_col1(n):
    return _col1(_named("q_sgs"))(n)


def _ordered_over_nfact(n):
    polys = _rowgen(_named("ordered_forest"))(n)
    return [p * Rational(1, factorial(i)) for i, p in enumerate(polys)]


def _psi_bivariate(n):
    from .triangle import _bivariate_psi_rows

    return _bivariate_psi_rows(n, R.gen("x"), R.gen("y"), R) if n else []


def _shifted_power(n):
    wp = R.gen("wp")
    return [(wp + i) ** i for i in range(n)]


def _example_2_15(n):
    x = R.gen("x")
    out, acc = [], R.zero()
    for i in range(n):
        acc = acc + x ** i
        out.append(acc)
    return out


def _inverse_factorial(n):
    return [lift(Rational(1, factorial(i))) for i in range(n)]


def _partial_exp(n):
    out, acc = [], Rational(0)
    for i in range(n):
        acc += Rational(1, factorial(i))
        out.append(lift(acc))
    return out


SEQUENCES: Dict[str, Tuple[str, Callable[[int], List[MultiPoly]]]] = {
    "forest_rowgen": ("F_n(x) = x (x+n)^(n-1)", _rowgen(_named("forest"))),
    "forest_col1": ("f_{n+1,1} = (n+1)^n", _col1(_named("forest"))),
    "ramanujan_rowgen": ("F_n(x,y,z)", _rowgen(_named("ramanujan_yz"))),
    "ramanujan_col1": ("f_{n+1,1}(y,z)", _col1(_named("ramanujan_yz"))),
    "yphi_rowgen": ("F_n(x,y,phi), phi_m = [t^m](1+at)/(1-bt)", _rowgen(yphi_certified)),
    "yphi_col1": ("f_{n+1,1}(y,phi), phi_m = [t^m](1+at)/(1-bt)", _col1(yphi_certified)),
    "sgs_rowgen": ("P_n(x;a,b)", _rowgen(_named("sgs_ab"))),
    "sgs_col1": ("P_{n+1,1}(a,b)", _col1(_named("sgs_ab"))),
    "sgs_col1_over_nfact": ("P_{n+1,1}(a,b)/n!", _col1(_named("sgs_ab"), lambda i: factorial(i))),
    "sgs_col1_over_n1fact": ("P_{n+1,1}(a,b)/(n+1)!", _col1(_named("sgs_ab"), lambda i: factorial(i + 1))),
    "q_forest_rowgen": ("F_n(x,q)", _rowgen(_named("q_forest"))),
    "q_forest_star_rowgen": ("F*_n(x,q)", _q_star_rowgen),
    "q_sgs_rowgen": ("P_n(x;y,a,b,q)", _q_sgs_rowgen),
    "q_sgs_col1": ("P_{n+1,1}(y,a,b,q)", _q_sgs_col1),
    "ordered_forest_rowgen": ("F^ord_n(x)", _rowgen(_named("ordered_forest"))),
    "ordered_forest_rowgen_over_nfact": ("F^ord_n(x)/n!", _ordered_over_nfact),
    "psi_rowgen": ("Psi_n(y)", _rowgen(_named("functional_digraph_psi"), "y")),
    "psi_col1": ("psi_{n+1,1}", _col1(_named("functional_digraph_psi"))),
    "psi_col1_over_n1fact": ("psi_{n+1,1}/(n+1)!", _col1(_named("functional_digraph_psi"), lambda i: factorial(i + 1))),
    "psi_bivariate": ("Psi_n(x,y)", _psi_bivariate),
    "psiY_col1": ("psi^Y_{n+1,1}(x)", _col1(_named("psi_Y"))),
    "sharp_rowgen": ("F#_n(x,w)", _rowgen(_named("root_descent_sharp"))),
    "sharp_col1": ("f#_{n+1,1}(w)", _col1(_named("root_descent_sharp"))),
    "shifted_power": ("(wp+n)^n", _shifted_power),
    "refined_rowgen": ("row polynomials of the refined triangle in y1, y2, ..., z", _rowgen(_named("refined_ramanujan_yvec"))),
    "refined_col1": ("f_{n+1,1}(y1, y2, ..., z)", _col1(_named("refined_ramanujan_yvec"))),
    "refined_q_rowgen": ("refined row polynomials at y_i = q^i", _rowgen(refined_q)),
    "example_2_15": ("A_n(x) = 1 + x + ... + x^n", _example_2_15),
    "inverse_factorial": ("1/n!", _inverse_factorial),
    "partial_exp": ("sum_{l<=n} 1/l!", _partial_exp),
}


def sequence(name: str, n_terms: int, bindings: Optional[Bindings] = None) -> List[MultiPoly]:
    if name not in SEQUENCES:
        raise UnknownTarget(name)
    return _apply(SEQUENCES[name][1](n_terms), bindings)


# ---------------------------------------------------------------------------
# Matrices: triangle names, ramanujan_coeff, yphi_certified, refined_q, and the
# prefixes prod:<matrix> (production matrix) and rowgen:<matrix> (A B_x).


_BASE_MATRICES: Dict[str, Callable[[int], PolyMatrix]] = {
    "ramanujan_coeff": lambda N: ramanujan_coeff(N),
    "yphi_certified": yphi_certified,
    "refined_q": refined_q,
    "forest_production": lambda N: forest_production(N),
}


def matrix_names() -> List[str]:
    return sorted(set(NAMED_TRIANGLES) | set(_BASE_MATRICES))


def matrix(name: str, N: int, bindings: Optional[Bindings] = None) -> PolyMatrix:
    if name.startswith("prod:"):
        A = matrix(name[5:], N + 1)
        M = production_matrix(A)
    elif name.startswith("rowgen:"):
        M = row_generating(matrix(name[7:], N))[1]
    elif name in _BASE_MATRICES:
        M = _BASE_MATRICES[name](N)
    elif name in NAMED_TRIANGLES:
        M = triangle(name, N)
    else:
        raise UnknownTarget(name)
    return M.subs(bindings) if bindings else M


# ---------------------------------------------------------------------------
# Claims


@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    kind: str  # "tp" or "hankel"
    target: str
    window: int
    r: int
    bindings: Tuple[Tuple[str, str], ...] = ()

    def binding_map(self, ring: Ring = R) -> Bindings:
        return {k: parse_poly(v, ring) for k, v in self.bindings}


def run_claim(
    claim: Claim,
    window: Optional[int] = None,
    r: Optional[int] = None,
    jobs: int = 1,
    budget_ms: Optional[float] = None,
    extra: Optional[Bindings] = None,
) -> TPReport:
    N = claim.window if window is None else window
    order = claim.r if r is None else r
    b = claim.binding_map()
    if extra:
        b.update(extra)
    return run_check(claim.kind, claim.target, N, order, jobs, budget_ms, b)


def run_check(
    kind: str,
    target: str,
    N: int,
    r: int,
    jobs: int = 1,
    budget_ms: Optional[float] = None,
    bindings: Optional[Bindings] = None,
) -> TPReport:
    if kind == "tp":
        M = matrix(target, N, bindings)
    elif kind == "hankel":
        M = hankel_matrix(sequence(target, 2 * N - 1, bindings), N)
    elif kind == "toeplitz":
        from .tpcheck import toeplitz_matrix

        M = toeplitz_matrix(sequence(target, N, bindings), N)
    else:
        raise ValueError(f"unknown check kind {kind!r}")
    return check_tp(M, r, N, jobs, budget_ms, kind=kind)


def _claims(rows) -> Dict[str, Claim]:
    return {c.id: c for c in (Claim(*row) for row in rows)}


CONJECTURES: Dict[str, Claim] = _claims([
    ("6.1a", "P(a,b) is coefficientwise TP", "tp", "sgs_ab", 9, 3),
    ("6.1b", "(P_n(x;a,b)) is coefficientwise Hankel-TP", "hankel", "sgs_rowgen", 4, 3),
    ("6.1c", "(P_{n+1,1}(a,b)) is coefficientwise Hankel-TP", "hankel", "sgs_col1", 5, 3),
    ("6.2a", "(P_{n+1,1}(a,b)/n!) is coefficientwise Hankel-TP", "hankel", "sgs_col1_over_nfact", 4, 3),
    ("6.2b", "(P_{n+1,1}(a,b)/(n+1)!) is coefficientwise Hankel-TP", "hankel", "sgs_col1_over_n1fact", 4, 3),
    ("6.4", "(F*_n(x,1+r)) is coefficientwise Hankel-TP", "hankel", "q_forest_star_rowgen", 4, 3, (("q", "1+r"),)),
    ("6.5a", "P(y,a,b,q) is coefficientwise TP", "tp", "q_sgs", 8, 3),
    ("6.5b", "(P_n(x;0,a,b,1+r)) is coefficientwise Hankel-TP", "hankel", "q_sgs_rowgen", 4, 3, (("y", "0"), ("q", "1+r"))),
    ("6.6", "(F^ord_n(x)) is coefficientwise Hankel-TP", "hankel", "ordered_forest_rowgen", 5, 3),
    ("6.7", "(F^ord_n(x)/n!) is coefficientwise Hankel-TP", "hankel", "ordered_forest_rowgen_over_nfact", 5, 3),
    ("6.8a", "Psi is TP", "tp", "functional_digraph_psi", 10, 4),
    ("6.8b", "(Psi_n(y)) is coefficientwise Hankel-TP", "hankel", "psi_rowgen", 5, 3),
    ("6.8c", "(psi_{n+1,1}) is Hankel-TP", "hankel", "psi_col1", 8, 8),
    ("6.8d", "(psi_{n+1,1}/(n+1)!) is Hankel-TP", "hankel", "psi_col1_over_n1fact", 8, 8),
    ("6.9a", "Psi^Y is coefficientwise TP in x", "tp", "psi_Y", 8, 3),
    ("6.9b", "(Psi_n(x,y)) is coefficientwise Hankel-TP", "hankel", "psi_bivariate", 4, 3),
    ("6.9c", "(psi^Y_{n+1,1}(x)) is coefficientwise Hankel-TP", "hankel", "psiY_col1", 5, 3),
    ("6.10a", "F# is coefficientwise TP in w", "tp", "root_descent_sharp", 8, 3),
    ("6.10b", "(F#_n(x,w)) is coefficientwise Hankel-TP", "hankel", "sharp_rowgen", 4, 3),
    ("6.10c", "(f#_{n+1,1}(w)) is coefficientwise Hankel-TP", "hankel", "sharp_col1", 5, 3),
    ("6.11b", "(F#_n(x,-1+wp)) is coefficientwise Hankel-TP", "hankel", "sharp_rowgen", 4, 3, (("w", "-1+wp"),)),
    ("6.11c", "(f#_{n+1,1}(-1+wp)) is coefficientwise Hankel-TP", "hankel", "sharp_col1", 4, 3, (("w", "-1+wp"),)),
])

THEOREMS: Dict[str, Claim] = _claims([
    ("1.1a", "F is TP", "tp", "forest", 9, 4),
    ("1.1b", "((n+1)^n) is Hankel-TP", "hankel", "forest_col1", 5, 4),
    ("1.2a", "F(x) = F B_x is coefficientwise TP", "tp", "forest_Fx", 6, 3),
    ("1.2b", "(F_n(x)) is coefficientwise Hankel-TP", "hankel", "forest_rowgen", 6, 3),
    ("1.3a", "F(x,y,z) is coefficientwise TP", "tp", "rowgen:ramanujan_yz", 6, 3),
    ("1.3b", "(F_n(x,y,z)) is coefficientwise Hankel-TP", "hankel", "ramanujan_rowgen", 6, 3),
    ("1.3c", "(f_{n+1,1}(y,z)) is coefficientwise Hankel-TP", "hankel", "ramanujan_col1", 6, 3),
    ("1.4a", "F(x,y,phi) is coefficientwise TP for Toeplitz-TP phi", "tp", "rowgen:yphi_certified", 6, 3),
    ("1.4b", "(F_n(x,y,phi)) is coefficientwise Hankel-TP for Toeplitz-TP phi", "hankel", "yphi_rowgen", 6, 3),
    ("1.4c", "(f_{n+1,1}(y,phi)) is coefficientwise Hankel-TP for Toeplitz-TP phi", "hankel", "yphi_col1", 6, 3),
    ("6.3", "F(q) is coefficientwise TP", "tp", "q_forest", 7, 3),
    ("6.12", "((wp+n)^n) is coefficientwise Hankel-TP", "hankel", "shifted_power", 4, 3),
    ("6.13a", "F(y1,y2,...,z) is coefficientwise TP", "tp", "refined_ramanujan_yvec", 6, 6),
    ("6.13c", "(f_{n+1,1}(y1,y2,...,z)) is coefficientwise Hankel-TP", "hankel", "refined_col1", 4, 4),
])


# ---------------------------------------------------------------------------
# Identities: name -> fn(N) -> (ok, detail)


def _first_diff(A: PolyMatrix, B: PolyMatrix) -> Tuple[bool, str]:
    if A == B:
        return True, "equal"
    return False, f"first difference at {A.first_difference(B)}"


def bx_conjugation(N: int = 8):
    """B_x^{-1} P B_x = P (I + x Delta^T) for the generic Lah-type production matrix."""
    M = N + 1
    x = R.gen("x")
    P = PolyMatrix.build(M, lambda i, j: 0 if j == 0 or j > i + 1 else Rational(factorial(i), factorial(j - 1)) * R.phi(i - j + 1))
    lhs = binomial_inverse_Bx(x, M) @ P @ binomial_Bx(x, M)
    rhs = P @ (identity(M) + delta(M).transpose().scale(x))
    return _first_diff(lhs.window(N), rhs.window(N))


def hankel_factorization(N: int = 6):
    """H(O_0(P)) = O(P) O(P^T)^T, for the forest production matrix P and for P + x I."""
    x = R.gen("x")
    M = 2 * N - 1
    results = []
    for P in (forest_production(M), forest_production(M) + identity(M).scale(x)):
        A = output_matrix(P, M)
        H = hankel_matrix(A.column(0), N)
        # O(P^T)^T_{k n'} = (P^{n'})_{k 0}
        cols = []
        power = identity(M)
        for _ in range(N):
            cols.append([power[k, 0] for k in range(N)])
            power = power @ P
        right = PolyMatrix([[cols[j][k] for j in range(N)] for k in range(N)])
        results.append(_first_diff(H, A.window(N) @ right))
    ok = all(r[0] for r in results)
    return ok, "; ".join(r[1] for r in results)


def output_conjugation(N: int = 7):
    """O(B^{-1} P B) = b00^{-1} O(P) B for B = 2 B_x and the forest production matrix P."""
    x = R.gen("x")
    M = N + 1
    P = forest_production(M)
    B = binomial_Bx(x, M).scale(2)
    Binv = binomial_inverse_Bx(x, M).scale(Rational(1, 2))
    conj = (Binv @ P @ B).window(N)
    lhs = output_matrix(conj, N)
    rhs = (output_matrix(P, M) @ B).window(N).scale(Rational(1, 2))
    return _first_diff(lhs, rhs)


def shifted_forest_production(N: int = 8):
    """Production matrix of F' = Delta F Delta^T is Delta P Delta^T."""
    F = triangle("forest", N + 2)
    lhs = production_matrix(shift_delete_first(F))
    rhs = shift_delete_first(forest_production(N + 1))
    return _first_diff(lhs, rhs)


def forest_production_factorization(N: int = 9):
    """P = B_1 D T_1 D^{-1} Delta, against the production matrix of F."""
    one = R.one()
    fact = binomial_Bx(one, N) @ diag_factorial(N) @ power_toeplitz(one, N) @ diag_factorial(N, inverse=True) @ delta(N)
    derived = production_matrix(triangle("forest", N + 1))
    ok1, d1 = _first_diff(fact, derived)
    ok2, d2 = _first_diff(fact, forest_production(N))
    return ok1 and ok2, f"{d1}; {d2}"


def yz_production_factorization(N: int = 9):
    """P(y,z) = B_z D T_y D^{-1} Delta, against the production matrix of F(y,z)."""
    y, z = R.gens("y", "z")
    fact = binomial_Bx(z, N) @ diag_factorial(N) @ power_toeplitz(y, N) @ diag_factorial(N, inverse=True) @ delta(N)
    derived = production_matrix(triangle("ramanujan_yz", N + 1))
    ok1, d1 = _first_diff(fact, derived)
    ok2, d2 = _first_diff(fact, yz_production(N, y, z))
    return ok1 and ok2, f"{d1}; {d2}"


def riordan_egf_action(N: int = 8, seed: int = 0):
    """R[F,G] b has EGF F(t) B(G(t)); F = 1/(1-t), G = T and G = sgs_G, random small b."""
    rng = random.Random(seed)
    order = N - 1
    t = PowerSeries.variable(order)
    F = geometric(t)
    ok, notes = True, []
    for label, G in (("T", tree_T(order)), ("sgs_G", named_series("sgs_G", {}, order))):
        b = [rng.randint(-5, 5) for _ in range(N)]
        A = riordan(F, G, N)
        lhs = [sum((A[n, k] * b[k] for k in range(n + 1)), R.zero()) for n in range(N)]
        Bser = PowerSeries.from_egf(b)
        rhs_series = F * compose(Bser, G)
        rhs = [rhs_series.egf(n) for n in range(N)]
        good = lhs == rhs
        ok = ok and good
        notes.append(f"{label}: {'equal' if good else 'differ'}")
    return ok, "; ".join(notes)


def yphi_convolution_enumerated(N: int = 6):
    """f_{n,k}(y,phi) = f_{n,k}(0, phi * y^N), by enumeration on the left."""
    from .combinat import oracle_triangle

    y = R.gen("y")
    left = PolyMatrix(oracle_triangle(N, "yphi"), "lower_triangular")
    conv = conv_y_power(generic_phi(N + 1), y)
    right = named_triangle("rooted_forest_yphi", {"y": 0, "phi": conv}, N)
    return _first_diff(left, right)


def lah_is_yphi_at_y0(N: int = 6):
    """Generic Lah polynomials are the rooted-forest polynomials at y = 0."""
    lah = triangle("lah_phi", N)
    rf = triangle("rooted_forest_yphi", N).subs({"y": R.zero()})
    return _first_diff(lah, rf)


def yphi_is_lah_of_convolution(N: int = 6):
    """f_{n,k}(y,phi) = L_{n,k}(phi * y^N)."""
    y = R.gen("y")
    conv = conv_y_power(generic_phi(N + 1), y)
    lah = named_triangle("lah_phi", {"phi": conv}, N)
    return _first_diff(triangle("rooted_forest_yphi", N), lah)


def sgs_binomial_type(N: int = 7):
    """P_n(x+y;a,b) = sum_k C(n,k) P_k(x;a,b) P_{n-k}(y;a,b)."""
    x, y, a, b = R.gens("x", "y", "a", "b")
    for n in range(N):
        lhs = sgs_rowpoly(n, x + y, a, b)
        rhs = sum((sgs_rowpoly(k, x, a, b) * sgs_rowpoly(n - k, y, a, b) * comb(n, k) for k in range(n + 1)), R.zero())
        if lhs != rhs:
            return False, f"fails at n={n}"
    return True, f"holds for n < {N}"


def q_sgs_specializes_to_star(N: int = 8):
    """P_{n,k}(0,1,1,q) = f*_{n,k}(q)."""
    q_sgs = triangle("q_sgs", N).subs({"y": R.zero(), "a": R.one(), "b": R.one()})
    return _first_diff(q_sgs, triangle("q_forest_star", N))


def psi_relations(N: int = 7):
    """Psi_n(x,1) = F^ord_n(x) and Psi_n(1,y) = Psi_n(y)."""
    biv = _psi_bivariate(N)
    one = R.one()
    ordered = row_polys(triangle("ordered_forest", N))
    psi = row_polys(triangle("functional_digraph_psi", N), "y")
    a = [substitute(p, {"y": one}) for p in biv] == ordered
    b = [substitute(p, {"x": one}) for p in biv] == psi
    return a and b, f"x-side {'ok' if a else 'differs'}; y-side {'ok' if b else 'differs'}"


def production_roundtrip(N: int = 8):
    """production_matrix(output_matrix(P)) = P for the production matrices in scope."""
    y, z = R.gens("y", "z")
    from .triangle import yphi_production

    cases = {
        "forest": forest_production(N + 1),
        "yz": yz_production(N + 1, y, z),
        "yphi": yphi_production(N + 1, generic_phi(N + 2), y),
    }
    notes, ok = [], True
    for label, P in cases.items():
        back = production_matrix(output_matrix(P, N + 1))
        good = back == P.window(N)
        ok = ok and good
        notes.append(f"{label}: {'ok' if good else 'differs'}")
    return ok, "; ".join(notes)


IDENTITIES: Dict[str, Callable[..., Tuple[bool, str]]] = {
    "bx_conjugation": bx_conjugation,
    "hankel_factorization": hankel_factorization,
    "output_conjugation": output_conjugation,
    "shifted_forest_production": shifted_forest_production,
    "forest_production_factorization": forest_production_factorization,
    "yz_production_factorization": yz_production_factorization,
    "riordan_egf_action": riordan_egf_action,
    "yphi_convolution_enumerated": yphi_convolution_enumerated,
    "lah_is_yphi_at_y0": lah_is_yphi_at_y0,
    "yphi_is_lah_of_convolution": yphi_is_lah_of_convolution,
    "sgs_binomial_type": sgs_binomial_type,
    "q_sgs_specializes_to_star": q_sgs_specializes_to_star,
    "psi_relations": psi_relations,
    "production_roundtrip": production_roundtrip,
}


# ---------------------------------------------------------------------------
# Counterexamples: name -> fn() -> MultiPoly


def ramanujan_minor() -> MultiPoly:
    """Rows 2..8, columns 0..6 of the 9x9 Ramanujan coefficient matrix."""
    Rm = ramanujan_coeff(9)
    return det(Rm.submatrix(range(2, 9), range(0, 7)))


def psi_production_minor() -> MultiPoly:
    """Rows 5..8, columns 1..4 of the functional-digraph production matrix."""
    P = production_matrix(triangle("functional_digraph_psi", 10))
    return det(P.submatrix(range(5, 9), range(1, 5)))


def sgs_production_combination() -> MultiPoly:
    """pi_41 pi_52 - pi_51 pi_42 of the SGS production matrix."""
    P = production_matrix(triangle("sgs_ab", 7))
    return P[4, 1] * P[5, 2] - P[5, 1] * P[4, 2]


def q_forest_hankel3() -> MultiPoly:
    """det of the 3x3 Hankel matrix of F_0(x,q), ..., F_4(x,q)."""
    return det(hankel_matrix(sequence("q_forest_rowgen", 5), 3))


def q_star_hankel2() -> Tuple[MultiPoly, MultiPoly]:
    F = sequence("q_forest_star_rowgen", 4)
    return F[0] * F[2] - F[1] ** 2, F[1] * F[3] - F[2] ** 2


def q_sgs_delta3(variant: str = "col1") -> MultiPoly:
    """3x3 Hankel determinant behind the q-SGS y=0 remark.

    variant "literal": P_n(0; y,0,b,q) (identically zero, every row
    polynomial carries a factor x); "col1": P_{n+1,1}(y,0,b,q);
    "b_over_q": the same with b replaced by b/q in the defining product.
    """
    x, y, b, q = R.gens("x", "y", "b", "q")
    zero = R.zero()
    if variant == "literal":
        seq = [q_sgs_rowpoly(n, zero, y, zero, b, q) for n in range(5)]
    elif variant in ("col1", "b_over_q"):
        seq = []
        for n in range(5):
            if variant == "col1":
                P = q_sgs_rowpoly(n + 1, x, y, zero, b, q)
            else:
                P = _q_sgs_rowpoly_b_over_q(n + 1, x, y, b, q)
            seq.append(coeff_of(P, "x", 1))
    else:
        raise ValueError(variant)
    return det(hankel_matrix(seq, 3))


def _q_sgs_rowpoly_b_over_q(n, x, y, b, q):
    from .triangle import qint

    acc = x
    for i in range(1, n):
        acc = acc * (q ** i * x + y + q ** (i - 1) * qint(n - i, q) * b)
    return acc


def refined_hankel3() -> MultiPoly:
    """3x3 Hankel determinant of the refined row polynomials at y_i = q^i."""
    return det(hankel_matrix(sequence("refined_q_rowgen", 5), 3))


def sharp_shifted_minor() -> MultiPoly:
    """f#_{2,1} f#_{3,2} - f#_{2,2} f#_{3,1} at w = -1 + wp."""
    A = triangle("root_descent_sharp", 4).subs({"w": R.gen("wp") - 1})
    return A[2, 1] * A[3, 2] - A[2, 2] * A[3, 1]


COUNTEREXAMPLES: Dict[str, Callable[[], object]] = {
    "ramanujan_minor": ramanujan_minor,
    "psi_production_minor": psi_production_minor,
    "sgs_production_combination": sgs_production_combination,
    "q_forest_hankel3": q_forest_hankel3,
    "q_star_hankel2": q_star_hankel2,
    "q_sgs_delta3": q_sgs_delta3,
    "refined_hankel3": refined_hankel3,
    "sharp_shifted_minor": sharp_shifted_minor,
}
