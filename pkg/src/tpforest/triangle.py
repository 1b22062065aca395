"""Matrix windows, production matrices, exponential Riordan arrays and the
named triangles.

An infinite matrix is represented by a finite N x N window plus, optionally,
a generator that rebuilds larger windows.  Every named triangle that has both
a closed form and a generating-function or production-matrix description is
built both ways, and the constructor refuses to return if they disagree.
"""

from __future__ import annotations

import csv
import io
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .exactalg import MultiPoly, R, Rational, Ring, coeff_of, lift, substitute
from .series import (
    PowerSeries,
    compose,
    comp_inverse,
    conv_y_power,
    exp_of,
    generic_phi,
    geometric,
    named_series,
    solve_autonomous_ode,
    tree_T,
)

SHAPES = ("lower_triangular", "lower_hessenberg", "general")


class MatrixError(ValueError):
    pass


class RouteMismatch(AssertionError):
    """Two constructions of the same triangle disagree."""


def _detect_shape(rows) -> str:
    band = upper_band(rows)
    if band <= 0:
        return "lower_triangular"
    if band == 1:
        return "lower_hessenberg"
    return "general"


def upper_band(rows) -> int:
    """Largest j - i over nonzero entries (-inf as -N for the zero matrix)."""
    N = len(rows)
    best = -N
    for i, row in enumerate(rows):
        for j in range(N - 1, i + best, -1):
            if j - i <= best:
                break
            if not row[j].is_zero():
                best = j - i
                break
    return best


class PolyMatrix:
    """An N x N window of an infinite matrix with polynomial entries."""

    __slots__ = ("rows", "shape", "generator", "ring")

    def __init__(self, rows, shape: Optional[str] = None, generator=None, ring: Ring = R):
        N = len(rows)
        self.ring = ring
        self.rows = [[lift(c, ring) for c in row] for row in rows]
        for row in self.rows:
            if len(row) != N:
                raise MatrixError("window must be square")
        actual = _detect_shape(self.rows)
        if shape is None:
            shape = actual
        elif shape not in SHAPES:
            raise MatrixError(f"unknown shape tag {shape!r}")
        elif SHAPES.index(actual) > SHAPES.index(shape):
            raise MatrixError(f"entries violate the {shape} tag")
        self.shape = shape
        self.generator = generator

    @classmethod
    def build(cls, N: int, fn: Callable[[int, int], object], shape=None, generator=None, ring: Ring = R):
        return cls([[fn(i, j) for j in range(N)] for i in range(N)], shape, generator, ring)

    @classmethod
    def zeros(cls, N: int, ring: Ring = R):
        z = ring.zero()
        return cls([[z] * N for _ in range(N)], "lower_triangular", None, ring)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: Tuple[int, int]) -> MultiPoly:
        i, j = ij
        return self.rows[i][j]

    def window(self, N: int) -> "PolyMatrix":
        if N <= self.size:
            return PolyMatrix([row[:N] for row in self.rows[:N]], self.shape, self.generator, self.ring)
        if self.generator is None:
            raise MatrixError(f"window {self.size} cannot be enlarged to {N} without a generator")
        return self.generator(N)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> List[List[MultiPoly]]:
        return [[self.rows[i][j] for j in cols] for i in rows]

    def transpose(self) -> "PolyMatrix":
        N = self.size
        return PolyMatrix([[self.rows[j][i] for j in range(N)] for i in range(N)], ring=self.ring)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(c) for c in row] for row in self.rows], ring=self.ring)

    def subs(self, bindings) -> "PolyMatrix":
        return self.map(lambda c: substitute(c, bindings))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        N = self.size
        if other.size != N:
            raise MatrixError("window sizes differ")
        ctx0 = self.ring.ctx.constant(0)
        A = [[c.p for c in row] for row in self.rows]
        B = [[c.p for c in row] for row in other.rows]
        out = []
        for i in range(N):
            Ai = A[i]
            nz = [m for m in range(N) if Ai[m]]
            row = []
            for j in range(N):
                acc = ctx0
                for m in nz:
                    b = B[m][j]
                    if b:
                        acc = acc + Ai[m] * b
                row.append(MultiPoly(self.ring, acc))
            out.append(row)
        return PolyMatrix(out, ring=self.ring)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        N = self.size
        return PolyMatrix([[self.rows[i][j] + other.rows[i][j] for j in range(N)] for i in range(N)], ring=self.ring)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        N = self.size
        return PolyMatrix([[self.rows[i][j] - other.rows[i][j] for j in range(N)] for i in range(N)], ring=self.ring)

    def scale(self, c) -> "PolyMatrix":
        c = lift(c, self.ring)
        return self.map(lambda e: e * c)

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.size == other.size and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def first_difference(self, other: "PolyMatrix") -> Optional[Tuple[int, int]]:
        for i in range(min(self.size, other.size)):
            for j in range(min(self.size, other.size)):
                if self.rows[i][j] != other.rows[i][j]:
                    return (i, j)
        return None

    def column(self, k: int) -> List[MultiPoly]:
        return [row[k] for row in self.rows]

    def triangle_rows(self) -> List[List[MultiPoly]]:
        """Rows truncated at the diagonal (for lower-triangular display)."""
        if self.shape == "lower_triangular":
            return [row[: i + 1] for i, row in enumerate(self.rows)]
        if self.shape == "lower_hessenberg":
            return [row[: i + 2] for i, row in enumerate(self.rows)]
        return [list(row) for row in self.rows]

    def is_integer(self) -> bool:
        for row in self.rows:
            for c in row:
                if not c.is_constant() or c.constant_term().q != 1:
                    return False
        return True

    def to_json_rows(self):
        rows = self.triangle_rows()
        if self.is_integer():
            return [[c.to_int() for c in row] for row in rows]
        return [[str(c) for c in row] for row in rows]

    def to_csv(self) -> str:
        if not self.is_integer():
            raise MatrixError("CSV emission needs an integer matrix")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for i, row in enumerate(self.triangle_rows()):
            w.writerow([i] + [c.to_int() for c in row])
        return buf.getvalue()

    def to_text(self) -> str:
        lines = []
        for i, row in enumerate(self.triangle_rows()):
            lines.append(f"{i}: " + " | ".join(str(c) for c in row))
        return "\n".join(lines)

    def __repr__(self):
        return f"PolyMatrix({self.size}x{self.size}, {self.shape})"


MatrixSource = Union[PolyMatrix, Callable[[int], PolyMatrix]]


def _materialize(P: MatrixSource, N: int) -> PolyMatrix:
    if isinstance(P, PolyMatrix):
        return P if P.size >= N or P.generator is None else P.window(N)
    return P(N)


# ---------------------------------------------------------------------------
# Production / output machinery


def output_matrix(P: MatrixSource, N: int) -> PolyMatrix:
    """Rows 0..N-1 of O(P): a_{0k} = delta_{0k}, a_{nk} = sum_i a_{n-1,i} p_{ik}.

    A lower-Hessenberg P needs an N-window.  A column-finite (upper-Hessenberg)
    P needs a (2N-1)-window because row n reaches n columns beyond its support.
    """
    if N <= 0:
        return PolyMatrix([], ring=R)
    need = N
    if isinstance(P, PolyMatrix) and P.shape == "general":
        need = 2 * N - 1
    Pm = _materialize(P, need)
    M = Pm.size
    ring = Pm.ring
    shape = _detect_shape(Pm.rows)
    if shape == "general":
        lower = max(i - j for i in range(M) for j in range(M) if not Pm.rows[i][j].is_zero())
        if lower > 1:
            raise MatrixError("P is neither lower- nor upper-Hessenberg on the window")
        need = 2 * N - 1
        if M < need:
            if Pm.generator is None:
                raise MatrixError(f"window {M} too small for {N} output rows of a column-finite P")
            Pm = Pm.generator(need)
            M = need
    elif M < N:
        raise MatrixError(f"window {M} too small for {N} output rows")
    ctx0 = ring.ctx.constant(0)
    p = [[c.p for c in row] for row in Pm.rows]
    cur = [ring.ctx.constant(1)] + [ctx0] * (M - 1)
    out = [[MultiPoly(ring, c) for c in cur[:N]]]
    for n in range(1, N):
        nxt = []
        nz = [i for i in range(M) if cur[i]]
        for k in range(M):
            acc = ctx0
            for i in nz:
                e = p[i][k]
                if e:
                    acc = acc + cur[i] * e
            nxt.append(acc)
        cur = nxt
        out.append([MultiPoly(ring, c) for c in cur[:N]])
    return PolyMatrix(out, ring=ring)


def production_matrix(A: PolyMatrix) -> PolyMatrix:
    """N x N window of A^{-1} Delta A from an (N+1)-window of lower-triangular A."""
    if A.shape != "lower_triangular":
        raise MatrixError("production_matrix needs a lower-triangular window")
    N = A.size - 1
    if N < 1:
        raise MatrixError("need at least a 2x2 window")
    if A.rows[0][0] != 1:
        raise MatrixError("A_00 must be 1")
    ring = A.ring
    a = [[c.p for c in row] for row in A.rows]
    out: List[list] = []
    for i in range(N):
        d = a[i][i]
        if d.is_zero():
            raise MatrixError(f"diagonal entry {i} is zero")
        row = []
        for j in range(N):
            acc = a[i + 1][j]
            for m in range(i):
                if a[i][m] and out[m][j]:
                    acc = acc - a[i][m] * out[m][j]
            if acc and not d.is_one():
                try:
                    acc = acc / d
                except Exception:
                    raise MatrixError(f"diagonal entry {i} is not invertible") from None
            row.append(acc)
        out.append(row)
    return PolyMatrix([[MultiPoly(ring, c) for c in row] for row in out], ring=ring)


# ---------------------------------------------------------------------------
# Special matrices


def delta(N: int, ring: Ring = R) -> PolyMatrix:
    return PolyMatrix.build(N, lambda i, j: 1 if j == i + 1 else 0, ring=ring)


def identity(N: int, ring: Ring = R) -> PolyMatrix:
    return PolyMatrix.build(N, lambda i, j: 1 if i == j else 0, ring=ring)


def binomial_Bxy(x, y, N: int, ring: Ring = R) -> PolyMatrix:
    x, y = lift(x, ring), lift(y, ring)
    return PolyMatrix.build(N, lambda i, j: comb(i, j) * x ** (i - j) * y ** j if j <= i else 0, ring=ring)


def binomial_Bx(x, N: int, ring: Ring = R) -> PolyMatrix:
    return binomial_Bxy(x, 1, N, ring)


def binomial_inverse_Bx(x, N: int, ring: Ring = R) -> PolyMatrix:
    return binomial_Bx(-lift(x, ring), N, ring)


def toeplitz(seq: Sequence, N: int, ring: Ring = R) -> PolyMatrix:
    if len(seq) < N:
        raise MatrixError("sequence shorter than the window")
    return PolyMatrix.build(N, lambda i, j: seq[i - j] if j <= i else 0, ring=ring)


def power_toeplitz(x, N: int, ring: Ring = R) -> PolyMatrix:
    x = lift(x, ring)
    return toeplitz([x ** n for n in range(N)], N, ring)


def inverse_bidiag(ys: Sequence, N: int, ring: Ring = R) -> PolyMatrix:
    """(i, j) -> y_{j+1} ... y_i; ys[0] is y_1."""
    if len(ys) < N - 1:
        raise MatrixError("sequence shorter than the window")
    ys = [lift(v, ring) for v in ys]

    def entry(i, j):
        if j > i:
            return 0
        acc = ring.one()
        for m in range(j + 1, i + 1):
            acc = acc * ys[m - 1]
        return acc

    return PolyMatrix.build(N, entry, ring=ring)


def diag_factorial(N: int, inverse: bool = False, ring: Ring = R) -> PolyMatrix:
    def entry(i, j):
        if i != j:
            return 0
        return Rational(1, factorial(i)) if inverse else factorial(i)

    return PolyMatrix.build(N, entry, ring=ring)


def sharp_scale(A: PolyMatrix, d: Optional[Sequence] = None) -> PolyMatrix:
    """a#_{ij} = d_{j+1} ... d_i a_{ij}; default d_i = i gives (i!/j!) a_{ij}."""
    N = A.size
    if d is None:
        d = list(range(N))
    d = [lift(v, A.ring) for v in d]

    def entry(i, j):
        acc = A.rows[i][j]
        if acc.is_zero() or j > i:
            return acc
        for m in range(j + 1, i + 1):
            acc = acc * d[m]
        return acc

    return PolyMatrix.build(N, entry, ring=A.ring)


def special(kind: str, params: Optional[Dict] = None, N: int = 8, ring: Ring = R) -> PolyMatrix:
    params = params or {}
    if kind == "delta":
        return delta(N, ring)
    if kind == "identity":
        return identity(N, ring)
    if kind == "binomial_Bx":
        return binomial_Bx(params.get("x", ring.gen("x")), N, ring)
    if kind == "binomial_Bxy":
        return binomial_Bxy(params.get("x", ring.gen("x")), params.get("y", ring.gen("y")), N, ring)
    if kind == "toeplitz":
        return toeplitz(params["seq"], N, ring)
    if kind == "power_toeplitz":
        return power_toeplitz(params.get("x", ring.gen("x")), N, ring)
    if kind == "inverse_bidiag":
        ys = params.get("ys") or [ring.yvar(i) for i in range(1, N)]
        return inverse_bidiag(ys, N, ring)
    if kind == "diag_factorial":
        return diag_factorial(N, params.get("inverse", False), ring)
    if kind == "sharp_scale":
        return sharp_scale(params["A"].window(N), params.get("d"))
    raise MatrixError(f"unknown special matrix {kind!r}")


def shift_delete_first(A: PolyMatrix) -> PolyMatrix:
    """Delta A Delta^T: delete the zeroth row and column."""
    return PolyMatrix([row[1:] for row in A.rows[1:]], ring=A.ring)


# ---------------------------------------------------------------------------
# Exponential Riordan arrays


def riordan(F: Union[PowerSeries, int], G: PowerSeries, N: int) -> PolyMatrix:
    """R[F,G]_{nk} = (n!/k!) [t^n] F G^k on rows/cols 0..N-1."""
    if not G.coeffs[0].is_zero():
        raise MatrixError("G(0) must vanish")
    ring = G.ring
    order = N - 1
    if G.order < order:
        raise MatrixError("G known to too low an order")
    G = G.truncate(order) if order >= 0 else G
    if not isinstance(F, PowerSeries):
        F = PowerSeries.constant(F, order, ring)
    col = F.truncate(order)
    rows = [[ring.zero()] * N for _ in range(N)]
    for k in range(N):
        for n in range(k, N):
            c = col.coeffs[n]
            if not c.is_zero():
                rows[n][k] = c * Rational(factorial(n), factorial(k))
        col = col * G
    return PolyMatrix(rows, "lower_triangular", ring=ring)


def riordan_production_from_AZ(a: Sequence, z: Sequence, N: int, ring: Ring = R) -> PolyMatrix:
    """p_{nk} = (n!/k!)(z_{n-k} + k a_{n-k+1})."""
    if len(a) < N or len(z) < N:
        raise MatrixError("A- or Z-sequence shorter than the window")
    a = [lift(v, ring) for v in a]
    z = [lift(v, ring) for v in z]

    def entry(n, k):
        if k > n + 1:
            return 0
        acc = ring.zero()
        if n - k >= 0:
            acc = acc + z[n - k]
        if k >= 1:
            acc = acc + a[n - k + 1] * k
        return acc * Rational(factorial(n), factorial(k))

    return PolyMatrix.build(N, entry, ring=ring)


def AZ_from_FG(F: Union[PowerSeries, int], G: PowerSeries) -> Tuple[List[MultiPoly], List[MultiPoly]]:
    """A(s) = G'(Gbar(s)), Z(s) = F'(Gbar(s)) / F(Gbar(s))."""
    ring = G.ring
    Gbar = comp_inverse(G)
    A = compose(G.derivative(), Gbar)
    if not isinstance(F, PowerSeries):
        F = PowerSeries.constant(F, G.order, ring)
    Fb = compose(F, Gbar)
    Z = compose(F.derivative(), Gbar).exact_div(Fb)
    return list(A.coeffs), list(Z.coeffs)


# ---------------------------------------------------------------------------
# q-arithmetic


def qint(n: int, q: MultiPoly) -> MultiPoly:
    acc = q.ring.zero()
    for i in range(n):
        acc = acc + q ** i
    return acc


def qfact(n: int, q: MultiPoly) -> MultiPoly:
    acc = q.ring.one()
    for i in range(1, n + 1):
        acc = acc * qint(i, q)
    return acc


def qbinom(n: int, k: int, q: MultiPoly) -> MultiPoly:
    if k < 0 or k > n:
        return q.ring.zero()
    return qfact(n, q) / (qfact(k, q) * qfact(n - k, q))


def rising(y: MultiPoly, k: int) -> MultiPoly:
    acc = y.ring.one()
    for i in range(k):
        acc = acc * (y + i)
    return acc


@lru_cache(maxsize=None)
def stirling_cycle(n: int, k: int) -> int:
    if n == 0 and k == 0:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling_cycle(n - 1, k - 1) + (n - 1) * stirling_cycle(n - 1, k)


@lru_cache(maxsize=None)
def stirling_subset(n: int, k: int) -> int:
    if n == 0 and k == 0:
        return 1
    if n == 0 or k == 0:
        return 0
    return stirling_subset(n - 1, k - 1) + k * stirling_subset(n - 1, k)


# ---------------------------------------------------------------------------
# Closed forms and production matrices of the named triangles


def forest_number(n: int, k: int) -> int:
    if n == 0:
        return 1 if k == 0 else 0
    if k < 1 or k > n:
        return 0
    return comb(n - 1, k - 1) * n ** (n - k)


def forest_production(N: int, ring: Ring = R) -> PolyMatrix:
    """p_{jk} = j!/(k-1)! sum_{l<=j+1-k} 1/l!, zero in column 0."""

    def entry(j, k):
        if k == 0 or k > j + 1:
            return 0
        s = sum(Rational(1, factorial(l)) for l in range(j + 2 - k))
        return s * Rational(factorial(j), factorial(k - 1))

    return PolyMatrix.build(N, entry, generator=lambda M: forest_production(M, ring), ring=ring)


def yphi_production(N: int, phi: Sequence, y, ring: Ring = R) -> PolyMatrix:
    """p_{nk} = n!/(k-1)! (phi * y^N)_{n-k+1}; y = 0 gives the Lah production matrix."""
    if len(phi) < N + 1:
        raise MatrixError("phi prefix too short for the window")
    c = conv_y_power(phi[: N + 1], y)

    def entry(n, k):
        if k == 0 or k > n + 1:
            return 0
        return c[n - k + 1] * Rational(factorial(n), factorial(k - 1))

    return PolyMatrix.build(N, entry, ring=ring)


def yz_production(N: int, y, z, ring: Ring = R) -> PolyMatrix:
    """p_{nk} = n!/(k-1)! sum_l y^{n+1-k-l} z^l / l!."""
    y, z = lift(y, ring), lift(z, ring)

    def entry(n, k):
        if k == 0 or k > n + 1:
            return 0
        m = n - k + 1
        s = sum((y ** (m - l) * z ** l * Rational(1, factorial(l)) for l in range(m + 1)), ring.zero())
        return s * Rational(factorial(n), factorial(k - 1))

    return PolyMatrix.build(N, entry, ring=ring)


def refined_production(N: int, ys: Sequence, z, ring: Ring = R) -> PolyMatrix:
    """B_z D T(ys) D^{-1} Delta."""
    z = lift(z, ring)
    Bz = binomial_Bx(z, N, ring)
    D = diag_factorial(N, ring=ring)
    Di = diag_factorial(N, inverse=True, ring=ring)
    T = inverse_bidiag(ys, N, ring)
    return Bz @ D @ T @ Di @ delta(N, ring)


def sgs_rowpoly(n: int, x, a, b) -> MultiPoly:
    if n == 0:
        return lift(1)
    acc = lift(x)
    for i in range(1, n):
        acc = acc * (x + a * i + b * (n - i))
    return acc


def q_sgs_rowpoly(n: int, x, y, a, b, q) -> MultiPoly:
    if n == 0:
        return lift(1)
    acc = lift(x)
    for i in range(1, n):
        acc = acc * (q ** i * x + y + qint(i, q) * a + q ** i * qint(n - i, q) * b)
    return acc


def q_forest_star_rowpoly(n: int, ring: Ring = R, x=None, q=None) -> MultiPoly:
    x = ring.gen("x") if x is None else lift(x, ring)
    q = ring.gen("q") if q is None else lift(q, ring)
    if n == 0:
        return ring.one()
    acc = x
    nq = qint(n, q)
    for i in range(1, n):
        acc = acc * (q ** i * x + nq)
    return acc


def _coeff_table(N: int, rowpoly: Callable[[int], MultiPoly], var: str = "x") -> List[List[MultiPoly]]:
    rows = []
    for n in range(N):
        P = rowpoly(n)
        rows.append([coeff_of(P, var, k) for k in range(N)])
    return rows


def _agree(name: str, routes: Dict[str, PolyMatrix]) -> PolyMatrix:
    items = list(routes.items())
    base_name, base = items[0]
    for other_name, other in items[1:]:
        if base != other:
            ij = base.first_difference(other)
            raise RouteMismatch(f"{name}: {base_name} and {other_name} routes differ at {ij}")
    return base


def _param(params: Dict, key: str, ring: Ring) -> MultiPoly:
    v = params.get(key)
    return ring.gen(key) if v is None else lift(v, ring)


# individual builders return {route_name: PolyMatrix}


def _forest(N, params, ring):
    closed = PolyMatrix.build(N, forest_number, "lower_triangular", ring=ring)
    return {
        "closed": closed,
        "riordan": riordan(1, tree_T(max(N - 1, 0), ring), N),
        "production": output_matrix(forest_production(N, ring), N),
    }


def _forest_Fx(N, params, ring):
    x = _param(params, "x", ring)

    def entry(n, k):
        if k > n:
            return 0
        if k == n:
            return 1
        return comb(n, k) * (x + k) * (x + n) ** (n - k - 1)

    closed = PolyMatrix.build(N, entry, "lower_triangular", ring=ring)
    F = PolyMatrix.build(N, forest_number, ring=ring)
    P = forest_production(N + 1, ring)
    conj = P @ (identity(N + 1, ring) + delta(N + 1, ring).transpose().scale(x))
    return {
        "closed": closed,
        "binomial": F @ binomial_Bx(x, N, ring),
        "production": output_matrix(conj.window(N), N),
    }


def _ramanujan_yz(N, params, ring):
    y, z = _param(params, "y", ring), _param(params, "z", ring)
    order = max(N - 1, 0)
    A = exp_of(z, order, ring) * geometric(PowerSeries.variable(order, ring) * y)
    G = solve_autonomous_ode(A, order)
    return {
        "riordan": riordan(1, G, N),
        "production": output_matrix(yz_production(N, y, z, ring), N),
    }


def _rooted_forest_yphi(N, params, ring):
    y = _param(params, "y", ring)
    phi = params.get("phi") or generic_phi(N, ring)
    phi = [lift(c, ring) for c in phi]
    order = max(N - 1, 0)
    A = PowerSeries(conv_y_power(phi[: order + 1], y), ring)
    G = solve_autonomous_ode(A, order)
    return {
        "riordan": riordan(1, G, N),
        "production": output_matrix(yphi_production(N, phi, y, ring), N),
    }


def _lah_phi(N, params, ring):
    phi = params.get("phi") or generic_phi(N, ring)
    phi = [lift(c, ring) for c in phi]
    order = max(N - 1, 0)
    G = solve_autonomous_ode(PowerSeries(phi[: order + 1], ring), order)
    return {
        "riordan": riordan(1, G, N),
        "production": output_matrix(yphi_production(N, phi, 0, ring), N),
    }


def _sgs_ab(N, params, ring):
    a, b = _param(params, "a", ring), _param(params, "b", ring)
    x = ring.gen("x")
    closed = PolyMatrix(_coeff_table(N, lambda n: sgs_rowpoly(n, x, a, b)), "lower_triangular", ring=ring)
    G = named_series("sgs_G", {"a": a, "b": b}, max(N - 1, 0), ring)
    return {"closed": closed, "riordan": riordan(1, G, N)}


def _q_forest(N, params, ring):
    q = _param(params, "q", ring)

    def first(n, k):
        if n == 0:
            return 1 if k == 0 else 0
        if k < 1 or k > n:
            return 0
        return qbinom(n - 1, k - 1, q) * qint(n, q) ** (n - k)

    def second(n, k):
        if n == 0:
            return 1 if k == 0 else 0
        if k < 1 or k > n:
            return 0
        if k == n:
            return 1
        return qbinom(n, k, q) * qint(k, q) * qint(n, q) ** (n - k - 1)

    return {
        "closed": PolyMatrix.build(N, first, "lower_triangular", ring=ring),
        "closed_alt": PolyMatrix.build(N, second, "lower_triangular", ring=ring),
    }


def _q_forest_star(N, params, ring):
    q = _param(params, "q", ring)
    base = _q_forest(N, params, ring)["closed"]
    closed = PolyMatrix.build(N, lambda n, k: q ** (k * (k - 1) // 2) * base[n, k], "lower_triangular", ring=ring)
    x = ring.gen("x")
    prod = PolyMatrix(_coeff_table(N, lambda n: q_forest_star_rowpoly(n, ring, x, q)), "lower_triangular", ring=ring)
    return {"closed": closed, "product": prod}


def _q_sgs(N, params, ring):
    y, a, b, q = (_param(params, k, ring) for k in ("y", "a", "b", "q"))
    x = ring.gen("x")
    closed = PolyMatrix(_coeff_table(N, lambda n: q_sgs_rowpoly(n, x, y, a, b, q)), "lower_triangular", ring=ring)
    return {"closed": closed}


def _ordered_forest(N, params, ring):
    closed = PolyMatrix.build(N, lambda n, k: factorial(k) * forest_number(n, k), "lower_triangular", ring=ring)
    T = tree_T(max(N - 1, 0), ring)
    rows = [[ring.zero()] * N for _ in range(N)]
    power = PowerSeries.constant(1, max(N - 1, 0), ring)
    for k in range(N):
        for n in range(k, N):
            rows[n][k] = power.egf(n)
        power = power * T
    return {"closed": closed, "egf": PolyMatrix(rows, "lower_triangular", ring=ring)}


def _functional_digraph_psi(N, params, ring):
    G = named_series("log_one_minus_T", {}, max(N - 1, 0), ring)

    def entry(n, k):
        return sum(forest_number(n, j) * stirling_cycle(j, k) for j in range(k, n + 1))

    return {
        "riordan": riordan(1, G, N),
        "closed": PolyMatrix.build(N, entry, "lower_triangular", ring=ring),
    }


def _psi_X(N, params, ring):
    y = _param(params, "y", ring)
    x = ring.gen("x")
    closed = PolyMatrix.build(N, lambda n, k: forest_number(n, k) * rising(y, k), "lower_triangular", ring=ring)
    egf = _bivariate_psi_rows(N, x, y, ring)
    rows = [[coeff_of(egf[n], "x", k) for k in range(N)] for n in range(N)]
    return {"closed": closed, "egf": PolyMatrix(rows, "lower_triangular", ring=ring)}


def _bivariate_psi_rows(N: int, x, y, ring: Ring) -> List[MultiPoly]:
    """Psi_n(x, y) from [1 - x T]^{-y} = exp(-y log(1 - x T))."""
    from .series import exp_series

    L = named_series("log_one_minus_xT", {"x": x}, max(N - 1, 0), ring)
    S = exp_series(L * lift(y, ring))
    return [S.egf(n) for n in range(N)]


def _psi_Y(N, params, ring):
    x = _param(params, "x", ring)
    G = named_series("log_one_minus_xT", {"x": x}, max(N - 1, 0), ring)

    def entry(n, k):
        acc = ring.zero()
        for j in range(k, n + 1):
            acc = acc + x ** j * (forest_number(n, j) * stirling_cycle(j, k))
        return acc

    return {
        "riordan": riordan(1, G, N),
        "closed": PolyMatrix.build(N, entry, "lower_triangular", ring=ring),
    }


def _root_descent_sharp(N, params, ring):
    w = _param(params, "w", ring)
    G = named_series("exp_wT_minus_one_over_w", {"w": w}, max(N - 1, 0), ring)

    def entry(n, k):
        acc = ring.zero()
        for j in range(k, n + 1):
            acc = acc + w ** (j - k) * (forest_number(n, j) * stirling_subset(j, k))
        return acc

    return {
        "riordan": riordan(1, G, N),
        "closed": PolyMatrix.build(N, entry, "lower_triangular", ring=ring),
    }


def _refined_ramanujan(N, params, ring):
    z = _param(params, "z", ring)
    ys = params.get("ys") or [ring.yvar(i) for i in range(1, N + 1)]
    P = refined_production(N, ys, z, ring)
    return {"production": output_matrix(P, N)}


_BUILDERS = {
    "forest": _forest,
    "forest_Fx": _forest_Fx,
    "ramanujan_yz": _ramanujan_yz,
    "rooted_forest_yphi": _rooted_forest_yphi,
    "lah_phi": _lah_phi,
    "sgs_ab": _sgs_ab,
    "q_forest": _q_forest,
    "q_forest_star": _q_forest_star,
    "q_sgs": _q_sgs,
    "ordered_forest": _ordered_forest,
    "functional_digraph_psi": _functional_digraph_psi,
    "psi_X": _psi_X,
    "psi_Y": _psi_Y,
    "root_descent_sharp": _root_descent_sharp,
    "refined_ramanujan_yvec": _refined_ramanujan,
}

NAMED_TRIANGLES = tuple(_BUILDERS)


def triangle_routes(name: str, params: Optional[Dict] = None, N: int = 8, ring: Ring = R) -> Dict[str, PolyMatrix]:
    """Every construction of the named triangle, keyed by route name."""
    if name not in _BUILDERS:
        raise MatrixError(f"unknown triangle {name!r}")
    return _BUILDERS[name](N, dict(params or {}), ring)


def named_triangle(name: str, params: Optional[Dict] = None, N: int = 8, ring: Ring = R, check: bool = True) -> PolyMatrix:
    """The named triangle's N-window; with check=True all routes must agree."""
    params = dict(params or {})
    routes = triangle_routes(name, params, N, ring)
    first = _agree(name, routes) if check else next(iter(routes.values()))
    gen = lambda M: named_triangle(name, params, M, ring, check)
    return PolyMatrix(first.rows, "lower_triangular", gen, ring)


def ramanujan_coeff(N: int, ring: Ring = R) -> PolyMatrix:
    """r(n, m) = [y^m z^{n-m}] f_{n+1,1}(y, z), from the recurrence, checked against the triangle."""
    r = [[0] * N for _ in range(N)]
    r[0][0] = 1
    for n in range(1, N):
        for m in range(n + 1):
            v = n * r[n - 1][m] if m <= n - 1 else 0
            if m >= 1:
                v += (n + m - 1) * r[n - 1][m - 1]
            r[n][m] = v
    F = named_triangle("ramanujan_yz", None, N + 1, ring)
    for n in range(N):
        f = F[n + 1, 1]
        for m in range(n + 1):
            c = coeff_of(coeff_of(f, "y", m), "z", n - m)
            if c != r[n][m]:
                raise RouteMismatch(f"ramanujan coefficient ({n},{m}) disagrees with the triangle")
    return PolyMatrix(r, "lower_triangular", ring=ring)


def row_generating(A: PolyMatrix, x: str = "x") -> Tuple[List[MultiPoly], PolyMatrix]:
    """Row-generating polynomials (zeroth column of A B_x) and A B_x itself."""
    if A.shape != "lower_triangular":
        raise MatrixError("row_generating needs a lower-triangular window")
    AB = A @ binomial_Bx(A.ring.gen(x), A.size, A.ring)
    return AB.column(0), AB


def row_polys(A: PolyMatrix, x: str = "x") -> List[MultiPoly]:
    """sum_k a_{nk} x^k for each row (same as row_generating's first output)."""
    xv = A.ring.gen(x)
    out = []
    for n, row in enumerate(A.rows):
        acc = A.ring.zero()
        for k in range(n, -1, -1):
            acc = acc * xv + row[k]
        out.append(acc)
    return out
