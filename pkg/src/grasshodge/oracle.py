"""Slice dimensions by exact linear algebra, independent of Gröbner bases.

Two methods compute dim (S/I)_delta:

* ``direct``: the matrix of all products m*g landing in the slice, as in a
  Macaulay matrix; dimension is #monomials - rank.
* ``recursive``: the slice is presented as a cokernel
  ``sum_v v (x) A_{delta - v} -> A_delta`` over a covering set of variables V.
  The relations are the Koszul pairs ``v (x) [w t] - w (x) [v t]`` and the
  products m*g with m free of V.  Only quotient slices of lower degree ever
  appear, so matrices stay the size of the answer instead of the ambient ring.

The hook-content formula for the Plücker coordinate ring lives here too.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
import numpy as np

from .algebra import QQ, FieldError, PrimeField, PolyRing, enumerate_monomials
from .grassmann import GrassmannianSpec
from .groebner import IdealPresentation
from .lifting import CertificationError, _prime_below, _reconstruct, exact_kernel
from .linalg import DenseModEchelon, SparseEchelon


def plucker_slice_dim(spec: GrassmannianSpec, a: int) -> int:
    """Semistandard tableaux of rectangular shape (a^k) with entries <= n."""
    if a < 0:
        raise ValueError("degree must be nonnegative")
    k, n = spec.k, spec.n
    num = Fraction(1)
    for i in range(k):
        for j in range(a):
            hook = (a - j - 1) + (k - i - 1) + 1
            num *= Fraction(n + j - i, hook)
    assert num.denominator == 1
    return int(num)


# -- helpers on bigraded rings -----------------------------------------------------

def _grade(target) -> tuple[int, int]:
    if isinstance(target, int):
        return (0, target)
    return (int(target[0]), int(target[1]))


def _sub(d, w):
    return (d[0] - w[0], d[1] - w[1])


class _Grading:
    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.w = ring.bidegrees
        self.xs = [i for i, w in enumerate(self.w) if w[0] == 0]
        self.ys = [i for i, w in enumerate(self.w) if w[0] != 0]
        if any(self.w[i] != (0, 1) for i in self.xs) or any(self.w[i][0] != 1 or self.w[i][1] > 0 for i in self.ys):
            raise ValueError("oracle expects x of bidegree (0,1) and y of bidegree (1,-d)")
        ds = [-self.w[i][1] for i in self.ys]
        self.dmax = max(ds, default=0)
        self.dmin = min(ds, default=0)

    def feasible(self, d) -> bool:
        a, b = d
        if a < 0 or (not self.ys and a > 0):
            return False
        return b + a * self.dmax >= 0

    def min_xdeg(self, d) -> int:
        a, b = d
        return b + a * self.dmin

    def monomials_in(self, varset: Sequence[int], d) -> list[tuple]:
        """Monomials in the given variables only, of bidegree d."""
        n = self.ring.nvars
        xs = [v for v in varset if v in self.xs]
        ys = [v for v in varset if v in self.ys]
        a, b = d
        out = []
        for ycombo in itertools.combinations_with_replacement(ys, a) if a >= 0 else ():
            e = b - sum(self.w[v][1] for v in ycombo)
            if e < 0 or (e > 0 and not xs):
                continue
            for xcombo in itertools.combinations_with_replacement(xs, e):
                m = [0] * n
                for v in ycombo + xcombo:
                    m[v] += 1
                out.append(tuple(m))
        return out


# -- linear algebra backends -------------------------------------------------------------

class _ModP:
    def __init__(self, p: int):
        self.p = p

    def zero(self, n):
        return np.zeros(n, dtype=np.int64)

    def unit(self, n, i):
        v = np.zeros(n, dtype=np.int64)
        v[i] = 1
        return v

    def coerce(self, c):
        return int(c) % self.p

    def axpy(self, y, c, x, off=0):
        """y[off:off+len(x)] += c * x."""
        if len(x):
            y[off:off + len(x)] = (y[off:off + len(x)] + c * x) % self.p
        return y

    def rank_dim(self, ncols, rows, chunk: int = 512):
        ech = DenseModEchelon(ncols, self.p)
        buf = []
        for r in rows:
            buf.append(r)
            if len(buf) == chunk:
                ech.add_rows(np.array(buf, dtype=np.int64))
                buf = []
                if ech.full:
                    return ech
        if buf:
            ech.add_rows(np.array(buf, dtype=np.int64))
        return ech

    def projection(self, ncols, ech):
        """Matrix sending each presentation column to its quotient coordinates."""
        nonpiv = ech.nonpivot_columns()
        P = np.zeros((ncols, len(nonpiv)), dtype=np.int64)
        pos = {c: j for j, c in enumerate(nonpiv)}
        for c in nonpiv:
            P[c, pos[c]] = 1
        if ech.piv:
            E = ech.E.astype(np.int64)
            for r, c in enumerate(ech.piv):
                P[c] = (-E[r, nonpiv]) % self.p
        return P, nonpiv

    def apply(self, vec, P):
        if len(vec) == 0:
            return np.zeros(P.shape[1], dtype=np.int64)
        return (vec.astype(np.float64) @ P.astype(np.float64) % self.p).astype(np.int64) \
            if P.shape[0] * self.p * self.p < 2 ** 52 else (vec.astype(object) @ P.astype(object)) % self.p


class _Rational:
    """Dict-backed sparse vectors over QQ."""

    field = QQ

    def zero(self, n):
        return {}

    def unit(self, n, i):
        return {i: QQ.one}

    def coerce(self, c):
        return QQ(c)

    def axpy(self, y, c, x, off=0):
        for i, v in x.items():
            j = i + off
            nv = y.get(j, 0) + c * v
            if nv:
                y[j] = nv
            else:
                y.pop(j, None)
        return y

    def rank_dim(self, ncols, rows):
        ech = SparseEchelon(QQ)
        for r in rows:
            ech.add(r)
            if ech.rank == ncols:
                break
        ech.interreduce()
        ech.ncols = ncols
        return ech

    def projection(self, ncols, ech):
        pivset = set(ech.pivots)
        nonpiv = [c for c in range(ncols) if c not in pivset]
        pos = {c: j for j, c in enumerate(nonpiv)}
        P = [None] * ncols
        for c in nonpiv:
            P[c] = {pos[c]: QQ.one}
        for c, (cols, vals) in ech.pivots.items():
            P[c] = {pos[cc]: -v for cc, v in zip(cols[1:], vals[1:])}
        return P, nonpiv

    def apply(self, vec, P):
        out: dict = {}
        for i, c in vec.items():
            self.axpy(out, c, P[i])
        return out


class _Lifted(_Rational):
    """Exact rationals, each slice eliminated through certified modular lifting."""

    def rank_dim(self, ncols, rows):
        return exact_kernel(list(rows), ncols)

    def projection(self, ncols, ker):
        return ker.coords, ker.free


# -- the recursive quotient tower ---------------------------------------------------------

@dataclass
class _Slice:
    grade: tuple
    dim: int
    reps: list  # representative monomial per basis element
    cover: list  # variables v of the presentation
    offset: dict  # v -> first presentation column
    P: object  # projection
    memo: dict


class QuotientTower:
    """Lazily built quotient slices A_delta = (S/I)_delta with monomial classes."""

    def __init__(self, ideal: IdealPresentation, field=None, lifted: bool = False):
        """``lifted`` (rationals only) certifies each slice through modular images
        and prefers the fiber variables as cover, which keeps entries small."""
        field = field or ideal.ring.field
        if field != ideal.ring.field:
            ideal = ideal.with_field(field)
        self.ideal = ideal
        self.ring = ideal.ring
        self.g = _Grading(self.ring)
        self.fiber_first = lifted and not field.characteristic
        if field.characteristic:
            self.backend = _ModP(field.characteristic)
        else:
            self.backend = _Lifted() if lifted else _Rational()
        self.slices: dict[tuple, _Slice] = {}
        gens = [f for f in ideal.generators if not f.is_zero()]
        for f in gens:
            if not f.is_homogeneous:
                raise ValueError("oracle needs bihomogeneous generators")
        self.gens = [(f.bidegree, f) for f in gens]
        self.unit_ideal = any(bd == (0, 0) for bd, _ in self.gens)

    def dim(self, d) -> int:
        return self.slice(_grade(d)).dim

    def slice(self, d) -> _Slice:
        s = self.slices.get(d)
        if s is None:
            s = self._build(d)
            self.slices[d] = s
        return s

    def _empty(self, d):
        return _Slice(d, 0, [], [], {}, None, {})

    def class_of(self, d, mono: tuple):
        """Coordinates of the class of a monomial in the basis of A_d."""
        s = self.slice(d)
        bk = self.backend
        if s.dim == 0:
            return bk.zero(0)
        c = s.memo.get(mono)
        if c is not None:
            return c
        if not s.cover:  # degree zero
            c = bk.unit(1, 0)
        else:
            v = next(u for u in s.cover if mono[u])
            low = list(mono)
            low[v] -= 1
            sub = self.class_of(_sub(d, self.ring.bidegrees[v]), tuple(low))
            rows = s.P[s.offset[v]: s.offset[v] + self.slice(_sub(d, self.ring.bidegrees[v])).dim]
            c = bk.apply(sub, rows)
        s.memo[mono] = c
        return c

    def _choose_cover(self, d):
        """x-variables when every monomial has one, else the fiber variables.

        Staying inside a row (same a) keeps the recursion on small slices;
        dropping to the fiber variables is needed only at the bottom of a row.
        """
        g = self.g
        if self.fiber_first and g.ys and d[0] >= 1:
            return list(g.ys)
        if g.xs and g.min_xdeg(d) >= 1:
            return list(g.xs)
        if g.ys and d[0] >= 1:
            return list(g.ys)
        return list(range(self.ring.nvars))

    def _relations(self, d, V, offset, ncols):
        """Koszul relations, then products m*g with m free of the cover."""
        bk = self.backend
        W = self.ring.bidegrees
        for i, v in enumerate(V):
            dv = _sub(d, W[v])
            if self.slice(dv).dim == 0:
                continue
            for w in V[i + 1:]:
                dw = _sub(d, W[w])
                svw = self.slice(_sub(dv, W[w]))
                for tau in svw.reps:
                    row = bk.zero(ncols)
                    wt = list(tau)
                    wt[w] += 1
                    bk.axpy(row, 1, self.class_of(dv, tuple(wt)), offset[v])
                    if self.slice(dw).dim:
                        vt = list(tau)
                        vt[v] += 1
                        bk.axpy(row, -1, self.class_of(dw, tuple(vt)), offset[w])
                    yield row
        others = [u for u in range(self.ring.nvars) if u not in V]
        for bd, f in self.gens:
            rest = _sub(d, bd)
            if not self.g.feasible(rest):
                continue
            for m in self.g.monomials_in(others, rest):
                row = bk.zero(ncols)
                for mono, c in f.terms.items():
                    mu = tuple(x + y for x, y in zip(mono, m))
                    v = next(u for u in V if mu[u])
                    low = list(mu)
                    low[v] -= 1
                    dv = _sub(d, W[v])
                    if self.slice(dv).dim:
                        bk.axpy(row, bk.coerce(c), self.class_of(dv, tuple(low)), offset[v])
                yield row

    def _build(self, d) -> _Slice:
        g = self.g
        bk = self.backend
        if self.unit_ideal or not g.feasible(d):
            return self._empty(d)
        if d == (0, 0):
            return _Slice(d, 1, [self.ring.one_monomial()], [], {}, None, {})
        V = self._choose_cover(d)
        W = self.ring.bidegrees
        offset = {}
        ncols = 0
        for v in V:
            offset[v] = ncols
            ncols += self.slice(_sub(d, W[v])).dim
        if ncols == 0:
            return self._empty(d)
        ech = bk.rank_dim(ncols, self._relations(d, V, offset, ncols))
        P, nonpiv = bk.projection(ncols, ech)
        reps = []
        col_var = []
        for v in V:
            col_var += [(v, j) for j in range(self.slice(_sub(d, W[v])).dim)]
        for c in nonpiv:
            v, j = col_var[c]
            r = list(self.slice(_sub(d, W[v])).reps[j])
            r[v] += 1
            reps.append(tuple(r))
        return _Slice(d, len(nonpiv), reps, V, offset, P, {})


# -- direct Macaulay-style matrix ----------------------------------------------------------

@dataclass
class SliceMatrix:
    """Rows m*g expressed over the monomial basis of one slice."""

    columns: list
    rows: list  # dicts column -> coefficient

    @property
    def shape(self):
        return (len(self.rows), len(self.columns))


def _slice_rows(ideal: IdealPresentation, d, index: dict):
    """Rows m*g landing in slice ``d`` as dicts column -> coefficient."""
    ring = ideal.ring
    for f in ideal.generators:
        if f.is_zero():
            continue
        rest = _sub(d, f.bidegree)
        if rest[0] < 0:
            continue
        for m in enumerate_monomials(ring, rest):
            row = {}
            for mono, c in f.terms.items():
                mu = tuple(x + y for x, y in zip(mono, m))
                row[index[mu]] = c
            yield row


def slice_matrix(ideal: IdealPresentation, d) -> SliceMatrix:
    d = _grade(d)
    cols = enumerate_monomials(ideal.ring, d)
    index = {m: i for i, m in enumerate(cols)}
    return SliceMatrix(cols, list(_slice_rows(ideal, d, index)))


def matrix_rank(mat: SliceMatrix, field) -> int:
    n = len(mat.columns)
    if not mat.rows or n == 0:
        return 0
    if field.characteristic:
        ech = DenseModEchelon(n, field.characteristic)
        dense = np.zeros((len(mat.rows), n), dtype=np.int64)
        for i, r in enumerate(mat.rows):
            for c, v in r.items():
                dense[i, c] = int(v) % field.characteristic
        ech.add_rows(dense)
        return ech.rank
    ech = SparseEchelon(QQ)
    for r in mat.rows:
        ech.add({c: QQ(v) for c, v in r.items()})
        if ech.rank == n:
            break
    return ech.rank


def slice_dim_oracle(ideal: IdealPresentation, deg, field=None, method: str = "auto",
                     tower: QuotientTower | None = None) -> int:
    """dim (S/I)_deg by exact rank computations.

    ``field`` defaults to the ideal's field.  ``method`` is ``direct``,
    ``recursive``, ``lifted`` (recursive over QQ with certified modular
    elimination) or ``auto`` (direct for slices up to 1500 monomials).
    """
    field = field or ideal.ring.field
    d = _grade(deg)
    g = _Grading(ideal.ring)
    if not g.feasible(d):
        return 0
    if method == "auto":
        from .algebra import count_monomials

        method = "direct" if count_monomials(ideal.ring, d) <= 1500 else "recursive"
    if method == "direct":
        if field != ideal.ring.field:
            ideal = ideal.with_field(field)
        mat = slice_matrix(ideal, d)
        return len(mat.columns) - matrix_rank(mat, field)
    if method == "recursive":
        tower = tower or QuotientTower(ideal, field)
        return tower.dim(d)
    if method == "lifted":
        if field.characteristic:
            raise ValueError("the lifted method works over QQ")
        tower = tower or QuotientTower(ideal, field, lifted=True)
        return tower.dim(d)
    raise ValueError(f"unknown method {method!r}")


def checked_slice_dim(ideal: IdealPresentation, deg, expected: int | None = None,
                      prime: int | None = None, tower: QuotientTower | None = None) -> tuple[int, str]:
    """Prime-field oracle value, recomputed over QQ when it disagrees with ``expected``.

    Returns ``(dimension, field name)`` where the field is the one whose value
    is returned.
    """
    pf = PrimeField(prime) if prime else PrimeField()
    val = slice_dim_oracle(ideal, deg, pf, method="recursive", tower=tower)
    if expected is None or val == expected:
        return val, pf.name
    return slice_dim_oracle(ideal, deg, QQ, method="recursive"), QQ.name


# -- certified rational dimensions ---------------------------------------------------------

@dataclass
class LinearReduction:
    """The ideal rewritten after solving its linear generators for some variables."""

    ideal: IdealPresentation
    eliminated: list  # names of the substituted variables
    kept: list  # original indices of surviving variables


def eliminate_linear(ideal: IdealPresentation) -> LinearReduction:
    """Substitute away the variables fixed by homogeneous linear generators.

    The quotient ring is unchanged up to a bigraded isomorphism, so every slice
    dimension survives; the slices just have far fewer monomials.
    """
    ring = ideal.ring
    lin = [g for g in ideal.generators
           if g and g.is_homogeneous and all(sum(m) == 1 for m in g.terms)]
    if not lin:
        return LinearReduction(ideal, [], list(range(ring.nvars)))
    ech = SparseEchelon(ring.field)
    for g in lin:
        ech.add({m.index(1): c for m, c in g.terms.items()})
    ech.interreduce()
    piv = set(ech.pivots)
    kept = [i for i in range(ring.nvars) if i not in piv]
    small = PolyRing([ring.names[i] for i in kept], [ring.bidegrees[i] for i in kept], ring.field)
    pos = {v: j for j, v in enumerate(kept)}
    image = {}
    for v in kept:
        image[v] = small.var(pos[v])
    for c, (cols, vals) in ech.pivots.items():
        acc = small.zero()
        for cc, vv in zip(cols[1:], vals[1:]):
            acc = acc + small.var(pos[cc]).scale(-vv)
        image[c] = acc
    gens = []
    for g in ideal.generators:
        if g in lin:
            continue
        acc = small.zero()
        for m, c in g.terms.items():
            t = small.constant(c)
            for i, e in enumerate(m):
                if e:
                    t = t * image[i] ** e
            acc = acc + t
        if not acc.is_zero():
            gens.append(acc.primitive() if not ring.field.characteristic else acc)
    return LinearReduction(IdealPresentation(small, gens, ideal.grading, ideal.name),
                           [ring.names[i] for i in sorted(piv)], kept)


def _quotient_map(tower: QuotientTower, d, mons) -> tuple[list, np.ndarray]:
    """Classes of the slice monomials mod p, one row per monomial."""
    s = tower.slice(d)
    M = np.zeros((len(mons), s.dim), dtype=np.int64)
    for i, m in enumerate(mons):
        M[i] = tower.class_of(d, m)
    return list(s.reps), M


def multimodular_slice_dim(ideal: IdealPresentation, deg, upper: int, max_bits: int = 1 << 14,
                           stats: dict | None = None, time_limit: float | None = None) -> int | None:
    """Prove dim over QQ >= ``upper`` from quotient maps over many primes.

    Normalized by its representative monomials, the map S_d -> (S/I)_d is the
    reduction of one rational matrix at every prime whose slice has the same
    dimension and representatives.  Its Chinese-remainder lift is rationally
    reconstructed and checked exactly: every product m*g must map to zero, and
    the representatives to a unit basis.  Such a matrix is a surjection from
    (S/I)_d over QQ, so with the modular upper bound the dimension is exact.
    Returns ``upper`` when proved, None when ``max_bits`` of modulus or
    ``time_limit`` seconds ran out.
    """
    stats = {} if stats is None else stats
    d = _grade(deg)
    ring = ideal.ring
    mons = enumerate_monomials(ring, d)
    index = {m: i for i, m in enumerate(mons)}
    acc = None
    mod = gmpy2.mpz(1)
    reps0 = None
    target = 256
    q = 2 ** 20
    used = skipped = 0
    stop = None if time_limit is None else time.monotonic() + time_limit
    while mod.bit_length() <= max_bits:
        if stop is not None and time.monotonic() > stop:
            stats["timed_out"] = True
            break
        q = _prime_below(q)
        try:
            tower = QuotientTower(ideal.with_field(PrimeField(q)))
        except FieldError:  # q divides a denominator
            skipped += 1
            continue
        if tower.dim(d) != upper:
            skipped += 1
            continue
        reps, M = _quotient_map(tower, d, mons)
        if reps0 is None:
            reps0 = reps
        elif reps != reps0:
            skipped += 1
            continue
        used += 1
        if acc is None:
            acc = M.astype(object)
            mod = gmpy2.mpz(q)
        else:
            inv = gmpy2.invert(mod, q)
            acc = acc + mod * ((((M - acc) % q) * inv) % q)
            mod *= q
        if mod.bit_length() < target:
            continue
        target *= 2
        rec = _reconstruct(acc, mod)
        if rec is None:
            continue
        nums, dens = rec
        stats.update(primes=used, skipped=skipped, bits=int(mod.bit_length()))
        if _maps_to_quotient(ideal, d, index, reps0, nums, dens):
            return upper
    stats.update(primes=used, skipped=skipped, bits=int(mod.bit_length()))
    return None


def _maps_to_quotient(ideal, d, index, reps, nums, dens) -> bool:
    k = len(dens)
    for j, r in enumerate(reps):
        row = nums[index[r]]
        if any(row[i] != (dens[i] if i == j else 0) for i in range(k)):
            return False
    zero = np.zeros(k, dtype=object)
    for row in _slice_rows(ideal, d, index):
        acc = zero.copy()
        for c, v in row.items():
            acc = acc + nums[c] * v
        if any(acc):
            return False
    return True


@dataclass
class CertifiedDim:
    """Exact dimension over QQ, or the bounds that could be proved.

    ``upper`` always holds: a prime can only lose rank, never gain it.
    ``value`` is set when the lower bound met it.
    """

    degree: tuple
    upper: int
    value: int | None
    method: str
    detail: str = ""

    @property
    def certified(self) -> bool:
        return self.value is not None


def certified_slice_dim(ideal: IdealPresentation, deg, prime: int | None = None,
                        direct_limit: int = 4000, reduction: LinearReduction | None = None,
                        upper: int | None = None, max_bits: int = 1 << 14,
                        time_limit: float | None = None) -> CertifiedDim:
    """dim over QQ of one slice, proved through modular images.

    The modular value bounds the rational one from above.  A zero bound is
    already exact.  Otherwise the linearly reduced ideal is handled by one of
    two lower-bound proofs: slices with at most ``direct_limit`` monomials get
    their Macaulay matrix solved over QQ by lifting, larger ones go through
    :func:`multimodular_slice_dim` with up to ``max_bits`` of modulus and
    ``time_limit`` seconds.  When
    neither closes the gap the result carries ``value=None``.
    """
    from .algebra import count_monomials

    if ideal.ring.field.characteristic:
        raise ValueError("certification needs an ideal over QQ")
    d = _grade(deg)
    red = reduction or eliminate_linear(ideal)
    small = red.ideal
    if not _Grading(small.ring).feasible(d):
        return CertifiedDim(d, 0, 0, "empty")
    if upper is None:
        upper = slice_dim_oracle(small, d, PrimeField(prime) if prime else PrimeField(), method="recursive")
    if upper == 0:
        return CertifiedDim(d, 0, 0, "semicontinuity")
    ncols = count_monomials(small.ring, d)
    if ncols > direct_limit:
        stats = {}
        value = multimodular_slice_dim(small, d, upper, max_bits, stats, time_limit) if max_bits else None
        if value is None:
            return CertifiedDim(d, upper, None, "uncertified",
                                f"{ncols} columns; quotient map not reconstructed within "
                                f"{stats.get('bits', 0)} bits"
                                + (" (time limit)" if stats.get("timed_out") else ""))
        return CertifiedDim(d, upper, value, "multimodular",
                            f"{stats['bits']} bits over {stats['primes']} primes")
    mat = slice_matrix(small, d)
    try:
        ker = exact_kernel(mat.rows, len(mat.columns), prime=prime)
    except CertificationError as exc:
        return CertifiedDim(d, upper, None, "uncertified", str(exc))
    value = len(ker.free)
    if value > upper:  # pragma: no cover - contradicts semicontinuity
        raise AssertionError("rational dimension above the modular bound")
    return CertifiedDim(d, upper, value, ker.method, f"{ker.lifted_bits} lifted bits")
