"""Exact determinants and exhaustive total-positivity checks.

Minors are visited by increasing size, then lexicographically by row set and
column set.  The first minor that is not coefficientwise nonnegative is the
witness; with a worker pool the same witness is selected, so reports do not
depend on the number of jobs.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeout
from dataclasses import dataclass
from itertools import combinations, islice
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from flint.utils.flint_exceptions import DomainError

from .exactalg import MultiPoly, R, Rational, Ring, format_poly, is_coeffwise_nonneg, lift
from .series import PowerSeries, exp_of
from .triangle import PolyMatrix, upper_band


class BudgetExceeded(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Determinants on raw FLINT polynomials


def _det_const(rows: List[list]) -> Rational:
    """Gaussian elimination over Q."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    d = Rational(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if m[i][k] != 0), None)
        if piv is None:
            return Rational(0)
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        d *= m[k][k]
        inv = 1 / m[k][k]
        for i in range(k + 1, n):
            f = m[i][k] * inv
            if f != 0:
                for j in range(k + 1, n):
                    m[i][j] -= f * m[k][j]
    return d * sign


def _det_cofactor(m: List[list], zero):
    n = len(m)
    if n == 0:
        return zero + 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    a, b, c = m[0]
    d, e, f = m[1]
    g, h, i = m[2]
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def _det_bareiss(m: List[list], zero):
    n = len(m)
    m = [list(r) for r in m]
    sign = 1
    prev = None
    for k in range(n - 1):
        cands = [i for i in range(k, n) if m[i][k]]
        if not cands:
            return zero
        piv = min(cands, key=lambda i: len(m[i][k]))
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                v = row_i[j] * pk - mik * row_k[j] if mik else row_i[j] * pk
                if prev is not None and v:
                    try:
                        v = v / prev
                    except DomainError:
                        raise ArithmeticError("Bareiss pivot division failed") from None
                row_i[j] = v
            row_i[k] = zero
        prev = pk
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def det_raw(m: List[list], ctx) -> object:
    """Determinant of a square list of fmpq_mpoly entries."""
    n = len(m)
    if n == 0:
        return ctx.constant(1)
    if all(e.is_constant() for row in m for e in row):
        return ctx.constant(_det_const([[_const(e) for e in row] for row in m]))
    zero = ctx.constant(0)
    for row in m:
        if not any(row):
            return zero
    if n < 4:
        return _det_cofactor(m, zero)
    return _det_bareiss(m, zero)


def _const(e) -> Rational:
    if e.is_zero():
        return Rational(0)
    return e.coeffs()[0]


def det(M: Union[PolyMatrix, Sequence[Sequence]], ring: Ring = R) -> MultiPoly:
    if isinstance(M, PolyMatrix):
        rows, ring = M.rows, M.ring
    else:
        rows = [[lift(c, ring) for c in row] for row in M]
    for row in rows:
        if len(row) != len(rows):
            raise ValueError("determinant of a non-square matrix")
    raw = [[c.p for c in row] for row in rows]
    return MultiPoly(ring, det_raw(raw, ring.ctx))


def det_permutation(M: Sequence[Sequence], ring: Ring = R) -> MultiPoly:
    """Leibniz expansion; an independent oracle for small sizes."""
    from itertools import permutations

    rows = [[lift(c, ring) for c in row] for row in M]
    n = len(rows)
    acc = ring.zero()
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.one()
        for i in range(n):
            term = term * rows[i][perm[i]]
        acc = acc + term if inv % 2 == 0 else acc - term
    return acc


def minor(M: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> MultiPoly:
    return det(M.submatrix(rows, cols), M.ring)


# ---------------------------------------------------------------------------
# Reports


@dataclass
class Witness:
    rows: Tuple[int, ...]
    cols: Tuple[int, ...]
    det: MultiPoly
    monomial: str
    coeff: Rational

    def to_json(self) -> Dict:
        return {
            "rows": list(self.rows),
            "cols": list(self.cols),
            "det": format_poly(self.det),
            "monomial": self.monomial,
            "coeff": str(self.coeff),
        }


@dataclass
class TPReport:
    verdict: str
    r: int
    window: int
    minors_evaluated: int
    witness: Optional[Witness] = None
    wall_time_ms: Optional[float] = None
    kind: str = "tp"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, timing: bool = False) -> Dict:
        return {
            "verdict": self.verdict,
            "r": self.r,
            "window": self.window,
            "minors_evaluated": self.minors_evaluated,
            "witness": self.witness.to_json() if self.witness else None,
            "wall_time_ms": round(self.wall_time_ms, 3) if (timing and self.wall_time_ms is not None) else None,
        }

    def scope(self) -> str:
        # a pass says nothing beyond the window and order that were scanned
        if self.passed:
            return f"evidence at ({self.window}, {self.r})"
        return f"counterexample within ({self.window}, {self.r})"


# ---------------------------------------------------------------------------
# Minor scan


def _minor_is_trivially_zero(I, J, band: int) -> bool:
    # Entries vanish for j > i + band, so the minor is zero as soon as j_l > i_l + band.
    for i, j in zip(I, J):
        if j > i + band:
            return True
    return False


def _scan(raw, ctx, k: int, row_sets, band: int, deadline: Optional[float]):
    """Scan k x k minors whose row set is in row_sets; return (count, failure or None)."""
    N = len(raw)
    count = 0
    cols_all = list(combinations(range(N), k))
    for I in row_sets:
        sub_rows = [raw[i] for i in I]
        for J in cols_all:
            count += 1
            if _minor_is_trivially_zero(I, J, band):
                continue
            m = [[row[j] for j in J] for row in sub_rows]
            d = det_raw(m, ctx) if k > 1 else m[0][0]
            if d and not _nonneg_raw(d):
                return count, (I, J, d)
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded("time budget exhausted")
    return count, None


def _nonneg_raw(d) -> bool:
    for c in d.coeffs():
        if c < 0:
            return False
    return True


_WORKER: Dict = {}


def _worker_init(rows_payload, ring_names):
    from .exactalg import Ring as _Ring

    ring = _Ring(ring_names)
    _WORKER["ring"] = ring
    _WORKER["raw"] = [[c.p for c in row] for row in rows_payload]


def _worker_scan(k, row_sets, band):
    ring = _WORKER["ring"]
    count, fail = _scan(_WORKER["raw"], ring.ctx, k, row_sets, band, None)
    if fail is None:
        return count, None
    I, J, d = fail
    return count, (I, J, MultiPoly(ring, d))


def _chunks(seq, size):
    it = iter(seq)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def check_tp(
    M: PolyMatrix,
    r: int,
    window: Optional[int] = None,
    jobs: int = 1,
    budget_ms: Optional[float] = None,
    kind: str = "tp",
) -> TPReport:
    """Coefficientwise TP_r test of the leading window of M."""
    if r < 1:
        raise ValueError("r must be at least 1")
    t0 = time.monotonic()
    deadline = t0 + budget_ms / 1000.0 if budget_ms else None
    N = M.size if window is None else window
    W = M.window(N)
    ring = W.ring
    raw = [[c.p for c in row] for row in W.rows]
    band = upper_band(W.rows) if N else 0
    evaluated = 0
    failure = None
    rmax = min(r, N)
    pool = None
    try:
        if jobs > 1:
            pool = ProcessPoolExecutor(
                max_workers=jobs, initializer=_worker_init, initargs=(W.rows, ring.names)
            )
        for k in range(1, rmax + 1):
            row_sets = list(combinations(range(N), k))
            if pool is None or len(row_sets) < 2 * jobs:
                cnt, fail = _scan(raw, ring.ctx, k, row_sets, band, deadline)
                evaluated += cnt
                if fail is not None:
                    I, J, d = fail
                    failure = (I, J, MultiPoly(ring, d))
                    break
                continue
            per_chunk = max(1, len(row_sets) // (jobs * 4))
            futures = [pool.submit(_worker_scan, k, blk, band) for blk in _chunks(row_sets, per_chunk)]
            ncols = comb(N, k)
            done_before = 0
            for idx, fut in enumerate(futures):
                remaining = None if deadline is None else max(0.0, deadline - time.monotonic())
                try:
                    cnt, fail = fut.result(timeout=remaining)
                except FutureTimeout:
                    raise BudgetExceeded("time budget exhausted") from None
                if fail is not None:
                    for later in futures[idx + 1:]:
                        later.cancel()
                    evaluated += done_before + cnt
                    failure = fail
                    break
                done_before += cnt
            if failure is not None:
                break
            evaluated += len(row_sets) * ncols
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)
    elapsed = (time.monotonic() - t0) * 1000.0
    if failure is None:
        return TPReport("pass", r, N, evaluated, None, elapsed, kind)
    I, J, d = failure
    v = is_coeffwise_nonneg(d)
    wit = Witness(tuple(I), tuple(J), d, format_poly(v.monomial), v.coeff)
    return TPReport("fail", r, N, evaluated, wit, elapsed, kind)


SeqSource = Union[Sequence, Callable[[int], object]]


def _seq_terms(seq: SeqSource, n: int, ring: Ring) -> List[MultiPoly]:
    if callable(seq):
        return [lift(seq(i), ring) for i in range(n)]
    if len(seq) < n:
        raise ValueError(f"sequence supplies {len(seq)} terms, {n} needed")
    return [lift(c, ring) for c in seq[:n]]


def hankel_matrix(seq: SeqSource, N: int, ring: Ring = R) -> PolyMatrix:
    a = _seq_terms(seq, max(2 * N - 1, 0), ring)
    return PolyMatrix([[a[i + j] for j in range(N)] for i in range(N)], ring=ring)


def toeplitz_matrix(seq: SeqSource, N: int, ring: Ring = R) -> PolyMatrix:
    a = _seq_terms(seq, N, ring)
    return PolyMatrix([[a[i - j] if j <= i else ring.zero() for j in range(N)] for i in range(N)], ring=ring)


def check_hankel_tp(seq: SeqSource, N: int, r: int, jobs: int = 1, budget_ms=None, ring: Ring = R) -> TPReport:
    return check_tp(hankel_matrix(seq, N, ring), r, N, jobs, budget_ms, kind="hankel")


def check_toeplitz_tp(seq: SeqSource, N: int, r: int, jobs: int = 1, budget_ms=None, ring: Ring = R) -> TPReport:
    return check_tp(toeplitz_matrix(seq, N, ring), r, N, jobs, budget_ms, kind="toeplitz")


def tp_seq_builder(C, alphas: Sequence = (), betas: Sequence = (), gamma=None, N: int = 8, ring: Ring = R) -> List[MultiPoly]:
    """Coefficients of C e^{gamma t} prod (1 + alpha_i t) / (1 - beta_i t), N terms."""
    order = max(N - 1, 0)
    s = PowerSeries.constant(C, order, ring)
    for a in alphas:
        s = s * PowerSeries([1, a] + [0] * (order - 1) if order >= 1 else [1], ring)
    for b in betas:
        b = lift(b, ring)
        s = s * PowerSeries([b ** n for n in range(order + 1)], ring)
    if gamma is not None:
        s = s * exp_of(gamma, order, ring)
    return s.coeffs[:N]


def default_jobs() -> int:
    return max(1, min(8, os.cpu_count() or 1))
