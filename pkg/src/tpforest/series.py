"""Truncated formal power series with polynomial coefficients.

Coefficients are stored plainly (OGF convention); callers apply n! scalings
explicitly when they want exponential generating function entries.
"""

from __future__ import annotations

from math import factorial
from typing import Dict, List, Optional, Sequence

from .exactalg import MultiPoly, R, Rational, Ring, lift


class SeriesError(ValueError):
    pass


class PowerSeries:
    """c0 + c1 t + ... + cN t^N + O(t^(N+1))."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, coeffs: Sequence, ring: Ring = R):
        if len(coeffs) == 0:
            raise SeriesError("a series needs at least its constant term")
        self.ring = ring
        self.coeffs = [lift(c, ring) for c in coeffs]

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> MultiPoly:
        return self.coeffs[n]

    def egf(self, n: int) -> MultiPoly:
        """n! [t^n]."""
        return self.coeffs[n] * factorial(n)

    @classmethod
    def from_egf(cls, values: Sequence, ring: Ring = R) -> "PowerSeries":
        return cls([lift(v, ring) * Rational(1, factorial(n)) for n, v in enumerate(values)], ring)

    @classmethod
    def variable(cls, N: int, ring: Ring = R) -> "PowerSeries":
        return cls([0, 1] + [0] * (N - 1), ring) if N >= 1 else cls([0], ring)

    @classmethod
    def constant(cls, c, N: int, ring: Ring = R) -> "PowerSeries":
        return cls([c] + [0] * N, ring)

    def truncate(self, N: int) -> "PowerSeries":
        if N > self.order:
            raise SeriesError(f"cannot extend a series known to order {self.order} to {N}")
        return PowerSeries(self.coeffs[: N + 1], self.ring)

    def _coerce(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(other, self.order, self.ring)

    def __add__(self, other):
        o = self._coerce(other)
        N = min(self.order, o.order)
        return PowerSeries([self.coeffs[i] + o.coeffs[i] for i in range(N + 1)], self.ring)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs], self.ring)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            c = lift(other, self.ring)
            return PowerSeries([a * c for a in self.coeffs], self.ring)
        N = min(self.order, other.order)
        a = [c.p for c in self.coeffs]
        b = [c.p for c in other.coeffs]
        zero = self.ring.ctx.constant(0)
        out = []
        for n in range(N + 1):
            acc = zero
            for i in range(n + 1):
                if a[i] and b[n - i]:
                    acc = acc + a[i] * b[n - i]
            out.append(MultiPoly(self.ring, acc))
        return PowerSeries(out, self.ring)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PowerSeries.constant(1, self.order, self.ring)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        N = min(self.order, other.order)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(N + 1))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries([0], self.ring)
        return PowerSeries([self.coeffs[n] * n for n in range(1, self.order + 1)], self.ring)

    def integral(self) -> "PowerSeries":
        return PowerSeries([0] + [c * Rational(1, n + 1) for n, c in enumerate(self.coeffs)], self.ring)

    def exact_div(self, other) -> "PowerSeries":
        o = self._coerce(other)
        N = min(self.order, o.order)
        g0 = o.coeffs[0]
        if g0.is_zero():
            raise SeriesError("division by a series with zero constant term")
        inv = None
        if g0.is_constant():
            inv = Rational(1) / g0.to_rational()
        q: List[MultiPoly] = []
        for n in range(N + 1):
            acc = self.coeffs[n]
            for i in range(n):
                acc = acc - q[i] * o.coeffs[n - i]
            if inv is not None:
                q.append(acc * inv)
            else:
                try:
                    q.append(acc / g0)
                except ArithmeticError:
                    raise SeriesError("constant term of the divisor is not invertible here") from None
        return PowerSeries(q, self.ring)

    __truediv__ = exact_div

    def __str__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            parts.append(f"({c})" + ("*" + mono if mono else ""))
        parts.append(f"O(t^{self.order + 1})")
        return " + ".join(parts)

    def __repr__(self):
        return f"PowerSeries[{self}]"


# ---------------------------------------------------------------------------
# Composition and inversion


def compose(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """f(g(t)), needs g(0) = 0."""
    if not g.coeffs[0].is_zero():
        raise SeriesError("inner series must have zero constant term")
    N = min(f.order, g.order)
    g = g.truncate(N)
    acc = PowerSeries.constant(f.coeffs[N], N, f.ring)
    for n in range(N - 1, -1, -1):
        acc = acc * g
        acc.coeffs[0] = acc.coeffs[0] + f.coeffs[n]
    return acc


def comp_inverse(g: PowerSeries) -> PowerSeries:
    """The series h with g(h(s)) = s; needs g(0)=0 and [t^1]g a nonzero constant."""
    if not g.coeffs[0].is_zero():
        raise SeriesError("series must have zero constant term")
    N = g.order
    if N == 0:
        return PowerSeries([0], g.ring)
    g1 = g.coeffs[1]
    if g1.is_zero() or not g1.is_constant():
        raise SeriesError("linear coefficient is not invertible")
    inv = Rational(1) / g1.to_rational()
    h = [g.ring.zero(), g.ring.const(inv)] + [g.ring.zero()] * (N - 1)
    for n in range(2, N + 1):
        c = compose(g, PowerSeries(h[: n + 1], g.ring)).coeffs[n]
        h[n] = -c * inv
    return PowerSeries(h, g.ring)


def exp_series(h: PowerSeries) -> PowerSeries:
    if not h.coeffs[0].is_zero():
        raise SeriesError("exp is only defined for zero constant term")
    N = h.order
    out = PowerSeries.constant(1, N, h.ring)
    term = PowerSeries.constant(1, N, h.ring)
    for k in range(1, N + 1):
        term = term * h * Rational(1, k)
        out = out + term
    return out


def log1p_series(h: PowerSeries) -> PowerSeries:
    """log(1 + h) for h(0) = 0."""
    if not h.coeffs[0].is_zero():
        raise SeriesError("log(1+h) needs h(0) = 0")
    N = h.order
    out = PowerSeries.constant(0, N, h.ring)
    term = PowerSeries.constant(1, N, h.ring)
    for k in range(1, N + 1):
        term = term * h
        out = out + term * Rational((-1) ** (k + 1), k)
    return out


def pow1p_series(h: PowerSeries, c) -> PowerSeries:
    """(1 + h)^c with c any polynomial, via exp(c log(1+h))."""
    return exp_series(log1p_series(h) * lift(c, h.ring))


def geometric(h: PowerSeries) -> PowerSeries:
    """1/(1 - h) for h(0) = 0."""
    return compose(PowerSeries([1] * (h.order + 1), h.ring), h)


# ---------------------------------------------------------------------------
# Solvers


def lagrange_solve(Phi: PowerSeries, N: int) -> PowerSeries:
    """f = t Phi(f), coefficients [t^n] f = (1/n) [u^(n-1)] Phi^n."""
    if Phi.coeffs[0].is_zero():
        raise SeriesError("Phi(0) must be invertible")
    if Phi.order < N - 1:
        raise SeriesError("Phi known to too low an order")
    ring = Phi.ring
    if N <= 0:
        return PowerSeries([0], ring)
    Phi = Phi.truncate(N - 1)
    out = [ring.zero()]
    power = PowerSeries.constant(1, N - 1, ring)
    for n in range(1, N + 1):
        power = power * Phi
        out.append(power.coeffs[n - 1] * Rational(1, n))
    return PowerSeries(out, ring)


def solve_autonomous_ode(A: PowerSeries, N: int) -> PowerSeries:
    """G(0)=0, G' = A(G), via (n+1) g_{n+1} = [t^n] A(G_{<=n})."""
    ring = A.ring
    if A.order < N - 1:
        raise SeriesError("A known to too low an order")
    g = [ring.zero()] * (N + 1)
    for n in range(N):
        c = compose(A.truncate(n), PowerSeries(g[: n + 1], ring)).coeffs[n]
        g[n + 1] = c * Rational(1, n + 1)
    return PowerSeries(g, ring)


# ---------------------------------------------------------------------------
# Named series


def tree_T(N: int, ring: Ring = R) -> PowerSeries:
    return PowerSeries([0] + [Rational(n ** (n - 1), factorial(n)) for n in range(1, N + 1)], ring)


def exp_of(c, N: int, ring: Ring = R) -> PowerSeries:
    """e^{c u} as a series in u."""
    c = lift(c, ring)
    return PowerSeries([c ** n * Rational(1, factorial(n)) for n in range(N + 1)], ring)


def generic_phi(N: int, ring: Ring = R) -> List[MultiPoly]:
    return [ring.phi(m) for m in range(N + 1)]


def conv_y_power(phi: Sequence, y) -> List[MultiPoly]:
    """(phi * y^N)_m = sum_{r<=m} phi_r y^(m-r)."""
    y = lift(y)
    out = []
    acc = None
    for c in phi:
        acc = lift(c) if acc is None else acc * y + c
        out.append(acc)
    return out


def _phi_params(params: Dict, N: int, ring: Ring) -> List[MultiPoly]:
    phi = params.get("phi")
    if phi is None:
        return generic_phi(N, ring)
    if len(phi) < N + 1:
        raise SeriesError(f"phi sequence shorter than order {N}")
    return [lift(c, ring) for c in phi[: N + 1]]


def sgs_H(N: int, ring: Ring = R, a=None, b=None) -> PowerSeries:
    """(e^{-as} - e^{-bs})/(b-a), whose inverse is log F(t;1,a,b)."""
    a = ring.gen("a") if a is None else lift(a, ring)
    b = ring.gen("b") if b is None else lift(b, ring)
    out = [ring.zero()]
    for n in range(1, N + 1):
        h = sum((a ** i * b ** (n - 1 - i) for i in range(n)), ring.zero())
        out.append(h * Rational((-1) ** (n - 1), factorial(n)))
    return PowerSeries(out, ring)


def named_series(name: str, params: Optional[Dict] = None, N: int = 8, ring: Ring = R) -> PowerSeries:
    params = params or {}
    if name == "tree_T":
        return tree_T(N, ring)
    if name == "Phi":
        return PowerSeries(_phi_params(params, N, ring), ring)
    if name == "Psi_y_phi":
        y = params.get("y", ring.gen("y"))
        return PowerSeries(conv_y_power(_phi_params(params, N, ring), y), ring)
    if name == "log_one_minus_T":
        return -log1p_series(-tree_T(N, ring))
    if name == "log_one_minus_xT":
        x = params.get("x", ring.gen("x"))
        return -log1p_series(tree_T(N, ring) * (-lift(x, ring)))
    if name == "exp_wT_minus_one_over_w":
        w = lift(params.get("w", ring.gen("w")), ring)
        T = tree_T(N, ring)
        out = PowerSeries.constant(0, N, ring)
        term = PowerSeries.constant(1, N, ring)
        for k in range(1, N + 1):
            term = term * T
            out = out + term * (w ** (k - 1) * Rational(1, factorial(k)))
        return out
    if name == "sgs_G":
        return comp_inverse(sgs_H(N, ring, params.get("a"), params.get("b")))
    if name == "q_variants":
        # row-generating EGF of the starred q-forest numbers
        from .triangle import q_forest_star_rowpoly

        return PowerSeries.from_egf([q_forest_star_rowpoly(n, ring) for n in range(N + 1)], ring)
    raise SeriesError(f"unknown series {name!r}")


NAMED_SERIES = (
    "tree_T",
    "Phi",
    "Psi_y_phi",
    "log_one_minus_T",
    "log_one_minus_xT",
    "exp_wT_minus_one_over_w",
    "sgs_G",
    "q_variants",
)
