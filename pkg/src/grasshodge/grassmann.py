"""Grassmannian combinatorics: Plücker variables and relations, the sl_n action,
Hodge numbers of Gr(k, n), and Snow's vanishing conditions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Sequence

from .algebra import QQ, PolyRing, Polynomial


@dataclass(frozen=True)
class GrassmannianSpec:
    """Gr(k, n) in its Plücker embedding."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.n <= self.k:
            raise ValueError("n must exceed k")

    @property
    def N(self) -> int:
        return self.k * (self.n - self.k)

    @cached_property
    def multi_indices(self) -> tuple[tuple[int, ...], ...]:
        return tuple(itertools.combinations(range(1, self.n + 1), self.k))

    @property
    def num_plucker(self) -> int:
        return comb(self.n, self.k)


def plucker_name(index: Sequence[int]) -> str:
    return "x[" + ",".join(str(i) for i in index) + "]"


def plucker_ring(spec: GrassmannianSpec, degrees: Sequence[int] = (), field=QQ) -> PolyRing:
    """Plücker variables in lex order of their index sets, then ``y[1..c]``.

    ``y[i]`` has bidegree ``(1, -d_i)`` for ``d_i = degrees[i-1]``.
    """
    names = [plucker_name(I) for I in spec.multi_indices]
    bideg = [(0, 1)] * len(names)
    for i, d in enumerate(degrees, start=1):
        names.append(f"y[{i}]")
        bideg.append((1, -int(d)))
    return PolyRing(names, bideg, field)


def sort_with_sign(seq: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    s = list(seq)
    if len(set(s)) != len(s):
        return 0, tuple(sorted(s))
    sign = 1
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign, tuple(sorted(s))


def _plucker_var_index(ring: PolyRing, index: tuple[int, ...]) -> int:
    return ring.index[plucker_name(index)]


def exchange_relation(ring: PolyRing, I: Sequence[int], J: Sequence[int]) -> Polynomial:
    """sum_t (-1)^t x_{I + j_t} x_{J - j_t} for a (k-1)-set I and a (k+1)-set J."""
    field = ring.field
    terms: dict = {}
    for t, j in enumerate(J):
        s1, left = sort_with_sign(list(I) + [j])
        if s1 == 0:
            continue
        right = tuple(J[:t]) + tuple(J[t + 1:])
        sign = s1 * (-1) ** t
        m = [0] * ring.nvars
        m[_plucker_var_index(ring, left)] += 1
        m[_plucker_var_index(ring, right)] += 1
        m = tuple(m)
        terms[m] = field.normalize(terms.get(m, field.zero) + field(sign))
    return ring.from_dict({m: c for m, c in terms.items() if c != 0})


def plucker_relations(spec: GrassmannianSpec, ring: PolyRing | None = None) -> list[Polynomial]:
    """Quadrics generating the Plücker ideal, from the exchange relations.

    Zero relations and duplicates up to scaling are dropped.  For k = 2 the
    remaining set is the C(n, 4) three-term relations, which are linearly
    independent; for k > 2 redundant relations are kept.
    """
    if ring is None:
        ring = plucker_ring(spec)
    n, k = spec.n, spec.k
    seen = set()
    out = []
    for I in itertools.combinations(range(1, n + 1), k - 1):
        for J in itertools.combinations(range(1, n + 1), k + 1):
            rel = exchange_relation(ring, I, J)
            if rel.is_zero():
                continue
            rel = rel.monic()
            key = frozenset(rel.terms.items())
            if key in seen:
                continue
            seen.add(key)
            out.append(rel)
    if k == 2:
        out = _independent_subset(out)
    return [r.primitive() for r in out]


def _independent_subset(polys: list[Polynomial]) -> list[Polynomial]:
    """Greedy maximal linearly independent subfamily, order preserved."""
    from .linalg import SparseEchelon

    if not polys:
        return []
    ring = polys[0].ring
    cols: dict = {}
    ech = SparseEchelon(ring.field)
    keep = []
    for p in polys:
        row = {cols.setdefault(m, len(cols)): c for m, c in p.terms.items()}
        if ech.add(row):
            keep.append(p)
    return keep


# -- the sl_n action ---------------------------------------------------------------

@dataclass(frozen=True)
class Derivation:
    """Either D^i_j (i != j) or the Cartan element D^i_i - D^j_j."""

    i: int
    j: int
    diagonal: bool = False

    def __post_init__(self):
        if self.diagonal and self.i >= self.j:
            raise ValueError("diagonal difference needs i < j")
        if not self.diagonal and self.i == self.j:
            raise ValueError("off-diagonal derivation needs i != j")

    def __str__(self):
        if self.diagonal:
            return f"D^{self.i}_{self.i}-D^{self.j}_{self.j}"
        return f"D^{self.i}_{self.j}"


def sl_generators(n: int) -> list[Derivation]:
    """The n^2 - 1 generators: all D^i_j with i != j, then D^i_i - D^{i+1}_{i+1}."""
    gens = [Derivation(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    gens += [Derivation(i, i + 1, diagonal=True) for i in range(1, n)]
    return gens


def _elementary_on_index(index: tuple[int, ...], i: int, j: int):
    """D^i_j on the wedge x_index: (sign, new index) or None when it vanishes."""
    if j not in index:
        return None
    if i == j:
        return 1, index
    if i in index:
        return None
    replaced = [i if a == j else a for a in index]
    sign, new = sort_with_sign(replaced)
    return sign, new


def _variable_images(ring: PolyRing, spec: GrassmannianSpec, D: Derivation) -> dict[int, list]:
    """Image of every Plücker variable as a list of (variable index, integer coefficient)."""
    out: dict[int, list] = {}
    for I in spec.multi_indices:
        v = _plucker_var_index(ring, I)
        img: dict[int, int] = {}
        pieces = [(D.i, D.i, 1), (D.j, D.j, -1)] if D.diagonal else [(D.i, D.j, 1)]
        for a, b, s in pieces:
            r = _elementary_on_index(I, a, b)
            if r is not None:
                sign, J = r
                w = _plucker_var_index(ring, J)
                img[w] = img.get(w, 0) + s * sign
        img = {w: c for w, c in img.items() if c}
        if img:
            out[v] = list(img.items())
    return out


def derivation_apply(D: Derivation, f: Polynomial, spec: GrassmannianSpec) -> Polynomial:
    """Apply the induced derivation to f; fiber variables behave as constants."""
    ring = f.ring
    field = ring.field
    images = _variable_images(ring, spec, D)
    acc: dict = {}
    for m, c in f.terms.items():
        for v, e in enumerate(m):
            if not e or v not in images:
                continue
            base = list(m)
            base[v] -= 1
            for w, s in images[v]:
                mm = list(base)
                mm[w] += 1
                mm = tuple(mm)
                acc[mm] = field.normalize(acc.get(mm, field.zero) + c * field(e * s))
    return ring.from_dict({m: c for m, c in acc.items() if c != 0})


# -- cohomology of the Grassmannian -------------------------------------------------

@dataclass(frozen=True)
class CohomologyTable:
    k: int
    n: int
    hjj: tuple[int, ...]

    def h(self, j: int) -> int:
        return self.hjj[j] if 0 <= j < len(self.hjj) else 0

    def I_dim(self, j: int) -> int:
        """dim of the cokernel of H^{j-1,j-1}(G) -> H^{j,j}(G)."""
        return self.h(j) - self.h(j - 1)

    def to_json(self) -> dict:
        N = len(self.hjj) - 1
        return {
            "k": self.k,
            "n": self.n,
            "N": N,
            "hjj": list(self.hjj),
            "I_dim": [self.I_dim(j) for j in range(N + 1)],
        }


def hjj_table(spec: GrassmannianSpec) -> CohomologyTable:
    """h^{j,j}(G) = number of partitions of j in a k x (n-k) box."""
    k, m = spec.k, spec.n - spec.k
    # counts[parts][j]: partitions of j into at most `parts` parts each <= current bound
    # computed through the Gaussian binomial recursion
    table = {}

    def box(rows: int, width: int) -> list[int]:
        key = (rows, width)
        if key in table:
            return table[key]
        if rows == 0 or width == 0:
            res = [1]
        else:
            # largest part equals width or is at most width - 1
            a = box(rows, width - 1)
            b = box(rows - 1, width)
            res = [0] * (rows * width + 1)
            for j, v in enumerate(a):
                res[j] += v
            for j, v in enumerate(b):
                res[j + width] += v
        table[key] = res
        return res

    counts = box(k, m)
    return CohomologyTable(spec.k, spec.n, tuple(counts))


def snow_vanishing(spec: GrassmannianSpec, p: int, q: int, t: int) -> bool:
    """True when one of Snow's numeric conditions forces H^p(G, Omega^q(t)) = 0."""
    if t < 1:
        raise ValueError("twist t must be at least 1")
    k, n, N = spec.k, spec.n, spec.N
    return (
        t >= n
        or (k * p >= (k - 1) * q and (k - 1) * q > 0)
        or p > N - q
        or q > N - k
        or q <= t
    )
