"""Brute-force oracles over rooted forests and functional digraphs on [n].

Forests are parent arrays: parent[v-1] is the parent of vertex v, 0 marks a
root.  Statistics are computed straight from the definitions, and oracles fold
them into polynomials without keeping the objects around.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import factorial
from typing import Dict, Iterator, List, Optional, Tuple

from .exactalg import MultiPoly, R, Ring

MAX_FOREST_N = 8
MAX_DIGRAPH_N = 7

WEIGHTINGS = ("count", "yz", "yphi", "sgs_propv", "sgs_ascdes", "lah", "root_descent")


class BudgetError(ValueError):
    pass


ParentMap = Tuple[int, ...]
FuncDigraph = Tuple[int, ...]


def _forests_from(n: int, parent: List[int], v: int) -> Iterator[ParentMap]:
    if v > n:
        yield tuple(parent[1:])
        return
    for p in range(n + 1):
        if p == v:
            continue
        # following assigned parents from p must not come back to v
        u = p
        while 0 < u < v:
            u = parent[u]
        if u == v:
            continue
        parent[v] = p
        yield from _forests_from(n, parent, v + 1)
    parent[v] = 0


def enum_forests(n: int, first_parent: Optional[int] = None) -> Iterator[ParentMap]:
    """Every rooted forest on [n] once, in lexicographic order of parent arrays."""
    if n < 0 or n > MAX_FOREST_N:
        raise BudgetError(f"forest enumeration limited to 0 <= n <= {MAX_FOREST_N}")
    if n == 0:
        yield ()
        return
    parent = [0] * (n + 1)
    starts = range(n + 1) if first_parent is None else [first_parent]
    for p in starts:
        if p == 1:
            continue
        parent[1] = p
        yield from _forests_from(n, parent, 2)


@dataclass(frozen=True)
class ForestStats:
    components: int
    improper_edges: int
    proper_children_profile: Tuple[int, ...]  # per vertex 1..n
    improper_children_profile: Tuple[int, ...]
    children_profile: Tuple[int, ...]
    proper_vertices: int
    ascents: int
    descents: int
    root_descents: int


def stats(parent: ParentMap) -> ForestStats:
    n = len(parent)
    children: List[List[int]] = [[] for _ in range(n + 1)]
    for v in range(1, n + 1):
        children[parent[v - 1]].append(v)
    roots = children[0]
    # postorder so each subtree minimum is known before its parent's
    submin = list(range(n + 1))
    order: List[int] = []
    stack = list(roots)
    while stack:
        v = stack.pop()
        order.append(v)
        stack.extend(children[v])
    for v in reversed(order):
        for c in children[v]:
            if submin[c] < submin[v]:
                submin[v] = submin[c]
    improper = 0
    prop_prof = []
    improp_prof = []
    proper_vertices = 0
    asc = des = 0
    for i in range(1, n + 1):
        m = l = 0
        for j in children[i]:
            if submin[j] < i:
                l += 1
            else:
                m += 1
            if i < j:
                asc += 1
            else:
                des += 1
        improper += l
        prop_prof.append(m)
        improp_prof.append(l)
        if l == 0:
            proper_vertices += 1
    rd = 0
    for r in roots:
        rd += sum(1 for c in children[r] if c < r)
    return ForestStats(
        components=len(roots),
        improper_edges=improper,
        proper_children_profile=tuple(prop_prof),
        improper_children_profile=tuple(improp_prof),
        children_profile=tuple(len(children[i]) for i in range(1, n + 1)),
        proper_vertices=proper_vertices,
        ascents=asc,
        descents=des,
        root_descents=rd,
    )


def _key(s: ForestStats, weighting: str):
    if weighting == "count":
        return ()
    if weighting == "yz":
        return (s.improper_edges,)
    if weighting == "yphi":
        return (s.improper_edges, tuple(sorted(s.proper_children_profile)))
    if weighting == "sgs_propv":
        return (s.proper_vertices,)
    if weighting == "sgs_ascdes":
        return (s.ascents, s.descents)
    if weighting == "lah":
        if s.improper_edges:
            return None
        return (tuple(sorted(s.children_profile)),)
    if weighting == "root_descent":
        return (s.root_descents,)
    raise ValueError(f"unknown weighting {weighting!r}")


def _fold_shard(n: int, weighting: str, first_parent: Optional[int]) -> Dict[int, Counter]:
    out: Dict[int, Counter] = {}
    for f in enum_forests(n, first_parent):
        s = stats(f)
        key = _key(s, weighting)
        if key is None:
            continue
        out.setdefault(s.components, Counter())[key] += 1
    return out


@lru_cache(maxsize=None)
def _fold(n: int, weighting: str, jobs: int = 1) -> Dict[int, Counter]:
    if jobs <= 1 or n < 3:
        return _fold_shard(n, weighting, None)
    shards = [p for p in range(n + 1) if p != 1]
    total: Dict[int, Counter] = {}
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_fold_shard, [n] * len(shards), [weighting] * len(shards), shards):
            for k, c in part.items():
                total.setdefault(k, Counter()).update(c)
    return total


def _weight(n: int, k: int, key, weighting: str, ring: Ring) -> MultiPoly:
    if weighting == "count":
        return ring.one()
    if weighting == "yz":
        (imp,) = key
        y, z = ring.gens("y", "z")
        return y ** imp * z ** (n - k - imp)
    if weighting in ("yphi", "lah"):
        if weighting == "yphi":
            imp, prof = key
            acc = ring.gen("y") ** imp
        else:
            (prof,) = key
            acc = ring.one()
        for m in prof:
            acc = acc * (ring.phi(m) * factorial(m))
        return acc
    if weighting == "sgs_propv":
        (pv,) = key
        a, b = ring.gens("a", "b")
        return a ** (n - pv) * b ** (pv - k)
    if weighting == "sgs_ascdes":
        asc, des = key
        a, b = ring.gens("a", "b")
        return a ** des * b ** asc
    if weighting == "root_descent":
        (rd,) = key
        return (1 + ring.gen("w")) ** rd
    raise ValueError(f"unknown weighting {weighting!r}")


def oracle_row(n: int, weighting: str, ring: Ring = R, jobs: int = 1) -> List[MultiPoly]:
    """[oracle_polynomial(n, k, weighting) for k = 0..n]."""
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}")
    folded = _fold(n, weighting, jobs)
    row = []
    for k in range(n + 1):
        acc = ring.zero()
        for key, cnt in sorted(folded.get(k, {}).items()):
            acc = acc + _weight(n, k, key, weighting, ring) * cnt
        row.append(acc)
    return row


def oracle_polynomial(n: int, k: int, weighting: str, ring: Ring = R) -> MultiPoly:
    if k < 0 or k > n:
        return ring.zero()
    return oracle_row(n, weighting, ring)[k]


def oracle_triangle(N: int, weighting: str, ring: Ring = R, jobs: int = 1) -> List[List[MultiPoly]]:
    """Rows 0..N-1 padded to N columns."""
    rows = []
    for n in range(N):
        row = oracle_row(n, weighting, ring, jobs)
        rows.append(row + [ring.zero()] * (N - len(row)))
    return rows


# ---------------------------------------------------------------------------
# Functional digraphs


def enum_functional_digraphs(n: int) -> Iterator[FuncDigraph]:
    """All functions [n] -> [n] as 1-based image tuples."""
    if n < 0 or n > MAX_DIGRAPH_N:
        raise BudgetError(f"digraph enumeration limited to 0 <= n <= {MAX_DIGRAPH_N}")
    for img in product(range(1, n + 1), repeat=n):
        yield img


def digraph_stats(img: FuncDigraph) -> Tuple[int, int]:
    """(cyclic vertices, weakly connected components)."""
    n = len(img)
    f = [v - 1 for v in img]
    cyc = set(range(n))
    for _ in range(n):
        cyc = {f[v] for v in cyc}
    root = list(range(n))

    def find(u):
        while root[u] != u:
            root[u] = root[root[u]]
            u = root[u]
        return u

    comps = n
    for v in range(n):
        a, b = find(v), find(f[v])
        if a != b:
            root[a] = b
            comps -= 1
    return len(cyc), comps


@lru_cache(maxsize=None)
def _digraph_fold(n: int) -> Counter:
    return Counter(digraph_stats(img) for img in enum_functional_digraphs(n))


def oracle_bivariate_psi(n: int, ring: Ring = R) -> MultiPoly:
    """Psi_n(x, y): x per cyclic vertex, y per component."""
    x, y = ring.gens("x", "y")
    acc = ring.zero()
    for (c, k), cnt in sorted(_digraph_fold(n).items()):
        acc = acc + x ** c * y ** k * cnt
    return acc


def digraph_counts(n: int, by: str) -> List[int]:
    """Counts by 'cyclic' vertices or 'components', indexed 0..n."""
    out = [0] * (n + 1)
    for (c, k), cnt in _digraph_fold(n).items():
        out[c if by == "cyclic" else k] += cnt
    if n == 0:
        out[0] = 1
    return out


# ---------------------------------------------------------------------------
# Trees behind the series S and A


def oracle_S_A_series(n_max: int, which: str, ring: Ring = R) -> List[MultiPoly]:
    """S_n: trees on [n+1] rooted at 1; A_n: trees on [n+1] with 1 a leaf; y^imp z^(n-imp)."""
    if n_max > 5:
        raise BudgetError("S/A oracles limited to n <= 5")
    if which not in ("S", "A"):
        raise ValueError("which must be 'S' or 'A'")
    y, z = ring.gens("y", "z")
    out = []
    for n in range(n_max + 1):
        acc = ring.zero()
        for f in enum_forests(n + 1):
            if sum(1 for p in f if p == 0) != 1:
                continue
            if which == "S" and f[0] != 0:
                continue
            if which == "A" and any(p == 1 for p in f):
                continue
            imp = stats(f).improper_edges
            acc = acc + y ** imp * z ** (n - imp)
        out.append(acc)
    return out


def oracle_xi_phi(n: int, k: int, ring: Ring = R) -> MultiPoly:
    """Local weight m! phi_m xi_l per vertex (m proper, l improper children).

    Kept only to reproduce the small example where this local count differs
    from the differential-equation polynomials.
    """
    acc = ring.zero()
    for f in enum_forests(n):
        s = stats(f)
        if s.components != k:
            continue
        w = ring.one()
        for m, l in zip(s.proper_children_profile, s.improper_children_profile):
            w = w * (ring.phi(m) * factorial(m)) * ring.gen(f"xi{l}")
        acc = acc + w
    return acc
