"""Gröbner bases for homogeneous ideals, normal forms and slice counting.

The engine works degree by degree (normal selection strategy): all critical
pairs whose lcm has the current total degree are reduced together in one
sparse matrix, F4 style.  Pairs are pruned with the product and chain
criteria in the Gebauer-Möller formulation.  Because every input is
homogeneous, full row reduction of each degree block keeps the basis reduced
at all times, and stopping after degree D leaves a basis that is exact for all
questions in degree at most D.

Monomials are packed into Python ints, eight bits per variable, so that
multiplication is addition and divisibility is a couple of bit operations.
"""

from __future__ import annotations

import hashlib
import heapq
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from .algebra import PolyRing, Polynomial
from .linalg import SparseEchelon, f4_block_modp, reduce_sparse

_W = 8
_MAXEXP = 127


class IncompleteBasisError(RuntimeError):
    """A question needs basis elements beyond the computed degree."""

    def __init__(self, message: str, needed_degree: int | None = None):
        super().__init__(message)
        self.needed_degree = needed_degree


class _Packer:
    """Exponent vectors <-> packed ints.

    ``E`` holds exponent ``e_i`` in bits ``[8i, 8i+8)``.  The order key is
    ``K = wdeg << S - E`` with ``wdeg`` the weighted degree; comparing keys
    compares monomials in weighted degrevlex (last variable smallest), and
    keys add under multiplication.
    """

    def __init__(self, nvars: int, weights: Sequence[int] | None = None):
        self.n = nvars
        self.S = _W * max(nvars, 1)
        self.unit = [1 << (_W * i) for i in range(nvars)]
        self.H = sum(1 << (_W * i + _W - 1) for i in range(nvars))
        self.weights = tuple(weights) if weights is not None else (1,) * nvars
        self.unit_weights = all(w == 1 for w in self.weights)

    def pack(self, m: Sequence[int]) -> int:
        E = 0
        for i, e in enumerate(m):
            if e:
                if e > _MAXEXP:
                    raise OverflowError("exponent too large for packed monomials")
                E |= e << (_W * i)
        return E

    def unpack(self, E: int) -> tuple:
        return tuple((E >> (_W * i)) & 0xFF for i in range(self.n))

    def degree(self, E: int) -> int:
        if self.unit_weights:
            return E % 255
        w = self.weights
        d = 0
        i = 0
        while E:
            e = E & 0xFF
            if e:
                d += e * w[i]
            E >>= _W
            i += 1
        return d

    def key(self, E: int) -> int:
        return (self.degree(E) << self.S) - E

    def from_key(self, K: int) -> int:
        d = -((-K) >> self.S)
        return (d << self.S) - K

    def divides(self, a: int, b: int) -> bool:
        H = self.H
        return ((b | H) - a) & H == H

    def lcm(self, a: int, b: int) -> int:
        H = self.H
        d = (a | H) - b
        ge = (d & H) >> (_W - 1)
        mask = (ge << _W) - ge
        return (a & mask) | (b & ~mask)

    def support(self, E: int) -> list[int]:
        out = []
        i = 0
        while E:
            if E & 0xFF:
                out.append(i)
            E >>= _W
            i += 1
        return out


def order_weights(ring: PolyRing) -> tuple[int, ...]:
    """Variable weights of the term order.

    Plücker variables weigh 1.  Fiber variables weigh ``D + 1 - d_i`` with
    ``D`` the largest section degree, so that a monomial of bidegree (a, b)
    has weighted degree ``(D + 1) a + b`` and every bihomogeneous polynomial
    is homogeneous.  With equal section degrees all weights are 1.
    """
    ds = [-b for a, b in ring.bidegrees if a != 0]
    if not ds or len(set(ds)) == 1:
        return (1,) * ring.nvars
    D = max(ds)
    return tuple(1 if a == 0 else D + 1 + b for a, b in ring.bidegrees)


def weighted_degree(f: Polynomial, weights: Sequence[int]) -> int:
    return max(sum(e * w for e, w in zip(m, weights)) for m in f.terms)


def _weighted_homogeneous(f: Polynomial, weights: Sequence[int]) -> bool:
    return len({sum(e * w for e, w in zip(m, weights)) for m in f.terms}) <= 1


def order_key(m, weights: Sequence[int]):
    """Sort key for the weighted degrevlex order (larger key, larger monomial)."""
    return (sum(e * w for e, w in zip(m, weights)), tuple(-e for e in reversed(m)))


@dataclass
class IdealPresentation:
    """Generators of an ideal together with their ring and grading mode."""

    ring: PolyRing
    generators: list[Polynomial]
    grading: str = "single"
    name: str = ""

    def __post_init__(self):
        if self.grading not in ("single", "bigraded"):
            raise ValueError("grading must be 'single' or 'bigraded'")
        for g in self.generators:
            if g.ring != self.ring:
                raise ValueError("generator lives in a different ring")

    @property
    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous for g in self.generators)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.ring.names).encode())
        h.update(self.ring.field.name.encode())
        for g in self.generators:
            h.update(str(g).encode())
            h.update(b";")
        return h.hexdigest()[:16]

    def with_field(self, field) -> "IdealPresentation":
        ring = self.ring.with_field(field)
        return IdealPresentation(ring, [g.change_ring(ring) for g in self.generators], self.grading, self.name)


class _F4:
    """Resumable degree-by-degree engine over GF(p) (ints) or QQ (mpq)."""

    def __init__(self, ring: PolyRing, polys: Iterable[Polynomial], weights: Sequence[int]):
        self.ring = ring
        self.field = ring.field
        self.p = ring.field.characteristic
        if self.p >= 2 ** 31:
            raise ValueError("modular Gröbner bases need p < 2^31")
        self.weights = tuple(weights)
        self.pk = _Packer(ring.nvars, weights)
        self.basis: list[tuple[list[int], list]] = []  # (keys desc, coeffs), monic
        self.lead_E: list[int] = []
        self.lead_index: dict[int, int] = {}
        self.pairs: list[tuple[int, int, int, int]] = []  # (deg, lcm E, i, j)
        self.pending: dict[int, list] = {}
        self.memo: dict[int, int | None] = {}
        self.reached = -1  # all degrees <= reached are finished
        self.complete = False
        self.unit_ideal = False
        self.pure_powers: set[int] = set()
        for f in polys:
            if f.is_zero():
                continue
            d = weighted_degree(f, self.weights)
            items = sorted(((self.pk.key(self.pk.pack(m)), c) for m, c in f.terms.items()), reverse=True)
            self.pending.setdefault(d, []).append(([k for k, _ in items], [c for _, c in items]))
        if 0 in self.pending:
            self._become_unit()

    # -- helpers -------------------------------------------------------------
    def _become_unit(self):
        one = self.field.one
        self.basis = [([self.pk.key(0)], [one])]
        self.lead_E = [0]
        self.lead_index = {0: 0}
        self.pairs = []
        self.pending = {}
        self.unit_ideal = True
        self.complete = True
        self.reached = float("inf")

    def _divisor(self, E: int):
        memo = self.memo
        if E in memo:
            return memo[E]
        idx = self.lead_index.get(E)
        if idx is None and E:
            unit = self.pk.unit
            for v in self.pk.support(E):
                idx = self._divisor(E - unit[v])
                if idx is not None:
                    break
        memo[E] = idx
        return idx

    def _multiple(self, u: int, g: int) -> tuple[list[int], list]:
        keys, coeffs = self.basis[g]
        Ku = self.pk.key(u) - self.pk.key(0)
        return [k + Ku for k in keys], coeffs

    def next_degree(self):
        cands = [pr[0] for pr in self.pairs]
        cands += list(self.pending)
        return min(cands) if cands else None

    # -- main loop -------------------------------------------------------------
    def run(self, cap: int | None):
        while not self.complete:
            d = self.next_degree()
            if d is None:
                self.complete = True
                self.reached = float("inf")
                break
            if cap is not None and d > cap:
                self.reached = max(self.reached, cap)
                break
            self._step(d)
            self.reached = d
            if self.unit_ideal:
                break
            self._check_finite_completion(d)
        if cap is not None and not self.complete:
            self.reached = max(self.reached, cap)

    def _check_finite_completion(self, d: int):
        if len(self.pure_powers) < self.pk.n or not (self.pairs or self.pending):
            return
        top = _max_standard_degree(self)
        if d > top:
            self.pairs = []
            self.pending = {}
            self.complete = True
            self.reached = float("inf")

    def _step(self, d: int):
        pk = self.pk
        p = self.p
        todo_pairs = [pr for pr in self.pairs if pr[0] == d]
        self.pairs = [pr for pr in self.pairs if pr[0] != d]
        mults: list[tuple[int, int]] = []
        seen = set()
        for _, L, i, j in todo_pairs:
            for g in (i, j):
                key = (L - self.lead_E[g], g)
                if key not in seen:
                    seen.add(key)
                    mults.append(key)
        rows = [self._multiple(u, g) for u, g in mults]
        sources = list(mults)
        for keys, coeffs in self.pending.pop(d, []):
            rows.append((keys, coeffs))
            sources.append(None)

        # symbolic preprocessing: one reducer per reducible monomial
        pivots: dict[int, tuple[list[int], list]] = {}
        pivot_source: dict[int, tuple[int, int]] = {}
        visited = set()
        stack = [k for keys, _ in rows for k in keys]
        while stack:
            K = stack.pop()
            if K in visited:
                continue
            visited.add(K)
            E = pk.from_key(K)
            g = self._divisor(E)
            if g is None:
                continue
            u = E - self.lead_E[g]
            keys, coeffs = self._multiple(u, g)
            pivots[-K] = ([-k for k in keys], coeffs)
            pivot_source[-K] = (u, g)
            for k2 in keys[1:]:
                if k2 not in visited:
                    stack.append(k2)

        todo = [
            (keys, coeffs)
            for (keys, coeffs), src in zip(rows, sources)
            if src is None or pivot_source.get(-keys[0]) != src
        ]
        if p:
            new = self._linalg_modp(visited, pivots, todo)
        else:
            new = self._linalg_generic(pivots, todo)
        for h in new:
            self._insert(h)
            if self.unit_ideal:
                return

    def _linalg_generic(self, pivots, todo):
        p = self.p
        ech = SparseEchelon(self.field)
        for keys, coeffs in todo:
            rem = reduce_sparse(dict(zip((-k for k in keys), coeffs)), pivots, p)
            if rem:
                ech.add(rem)
        if not ech.pivots:
            return []
        ech.interreduce()
        new = []
        for c in sorted(ech.pivots, reverse=True):  # increasing lead monomial
            cols, vals = ech.pivots[c]
            new.append(([-x for x in cols], list(vals)))
        return new

    def _linalg_modp(self, visited, pivots, todo):
        """Same as the generic path, with the matrix handed to a compiled kernel."""
        if not todo:
            return []
        keys_sorted = sorted(visited, reverse=True)
        col = {k: i for i, k in enumerate(keys_sorted)}
        nc = len(keys_sorted)
        piv_of_col = np.full(nc, -1, dtype=np.int64)
        ptr = [0]
        pcols: list[int] = []
        pvals: list[int] = []
        for r, (negK, (cols, vals)) in enumerate(pivots.items()):
            piv_of_col[col[-negK]] = r
            pcols.extend(col[-c] for c in cols)
            pvals.extend(vals)
            ptr.append(len(pcols))
        rptr = [0]
        rcols: list[int] = []
        rvals: list[int] = []
        for keys, coeffs in todo:
            rcols.extend(col[k] for k in keys)
            rvals.extend(coeffs)
            rptr.append(len(rcols))
        o_ptr, o_cols, o_vals = f4_block_modp(
            nc,
            np.array(ptr, dtype=np.int64),
            np.array(pcols, dtype=np.int64),
            np.array(pvals, dtype=np.int64),
            piv_of_col,
            np.array(rptr, dtype=np.int64),
            np.array(rcols, dtype=np.int64),
            np.array(rvals, dtype=np.int64),
            self.p,
        )
        new = []
        o_ptr = o_ptr.tolist()
        o_cols = o_cols.tolist()
        o_vals = o_vals.tolist()
        for i in range(len(o_ptr) - 1):
            a, b = o_ptr[i], o_ptr[i + 1]
            new.append(([keys_sorted[c] for c in o_cols[a:b]], o_vals[a:b]))
        new.sort(key=lambda h: h[0][0])  # increasing lead monomial
        return new

    def _insert(self, h):
        pk = self.pk
        keys, _ = h
        E = pk.from_key(keys[0])
        if E == 0:
            self._become_unit()
            return
        idx = len(self.basis)
        self._update_pairs(idx, E)
        self.basis.append(h)
        self.lead_E.append(E)
        self.lead_index[E] = idx
        self.memo[E] = idx
        sup = pk.support(E)
        if len(sup) == 1:
            self.pure_powers.add(sup[0])

    def _update_pairs(self, h: int, Eh: int):
        """Gebauer-Möller update for the new lead ``Eh`` (index ``h``)."""
        pk = self.pk
        C = [(pk.lcm(Eh, Eg), g) for g, Eg in enumerate(self.lead_E)]
        D: list[tuple[int, int]] = []
        while C:
            L1, g1 = C.pop(0)
            Eg1 = self.lead_E[g1]
            if L1 == Eh + Eg1:
                D.append((L1, g1))
                continue
            if any(pk.divides(L2, L1) for L2, _ in C) or any(pk.divides(L2, L1) for L2, _ in D):
                continue
            D.append((L1, g1))
        E_new = [(L, g) for L, g in D if L != Eh + self.lead_E[g]]
        kept = []
        for pr in self.pairs:
            _, L, i, j = pr
            if (
                pk.divides(Eh, L)
                and pk.lcm(self.lead_E[i], Eh) != L
                and pk.lcm(Eh, self.lead_E[j]) != L
            ):
                continue
            kept.append(pr)
        for L, g in E_new:
            kept.append((pk.degree(L), L, g, h))
        self.pairs = kept

    # -- export ----------------------------------------------------------------
    def polynomials(self) -> list[Polynomial]:
        ring = self.ring
        out = []
        for keys, coeffs in self.basis:
            terms = {self.pk.unpack(self.pk.from_key(k)): c for k, c in zip(keys, coeffs)}
            out.append(Polynomial(ring, terms))
        w = self.weights
        out.sort(key=lambda f: order_key(lead_monomial(f, w), w))
        return out


def _max_standard_degree(engine: _F4) -> int:
    """Top degree of a standard monomial, assuming pure powers of all variables lead."""
    pk = engine.pk
    leads = engine.lead_index
    unit = pk.unit
    layer = {0} if 0 not in leads else set()
    top = -1 if not layer else 0
    deg = 0
    while layer:
        nxt = set()
        for s in layer:
            start = max(pk.support(s), default=0)
            for v in range(start, pk.n):
                t = s + unit[v]
                if t in leads:
                    continue
                if all((t - unit[u]) in layer for u in pk.support(t)):
                    nxt.add(t)
        deg += 1
        if nxt:
            top = deg
        layer = nxt
    return top


@dataclass
class GroebnerBasis:
    """Reduced Gröbner basis (or its truncation at ``degree_cap``) under degrevlex."""

    ideal: IdealPresentation
    polys: list[Polynomial]
    complete: bool
    degree_cap: int | None
    order: str = "degrevlex"
    source: str = ""
    weights: tuple = ()
    _engine: _F4 | None = dc_field(default=None, repr=False)
    _cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def ring(self) -> PolyRing:
        return self.ideal.ring

    @property
    def reached(self) -> float:
        """Largest total degree for which the basis is known to be exact."""
        return float("inf") if self.complete else self.degree_cap

    @property
    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].degree == 0

    def extend(self, degree_cap: int | None) -> "GroebnerBasis":
        """Resume the computation up to a larger cap (``None``: to completion)."""
        if self.complete:
            return self
        if self._engine is None:
            raise IncompleteBasisError("basis cannot be resumed")
        if degree_cap is not None and self.degree_cap is not None and degree_cap <= self.degree_cap:
            return self
        self._engine.run(degree_cap)
        self._refresh()
        return self

    def _refresh(self):
        eng = self._engine
        self.polys = eng.polynomials()
        self.complete = eng.complete
        self.degree_cap = None if eng.complete else int(eng.reached)
        self._cache.clear()

    # packed view used by the counting and reduction routines
    def _packed(self):
        c = self._cache.get("packed")
        if c is None:
            pk = _Packer(self.ring.nvars, self.weights)
            leads = {}
            for i, f in enumerate(self.polys):
                leads[pk.pack(self.lead(f))] = i
            c = (pk, leads, {})
            self._cache["packed"] = c
        return c

    def lead(self, f: Polynomial) -> tuple:
        return lead_monomial(f, self.weights)

    def leading_monomials(self) -> list[tuple]:
        return [self.lead(f) for f in self.polys]

    def printable(self) -> list[Polynomial]:
        return [f.primitive() if self.ring.field.characteristic == 0 else f for f in self.polys]


def groebner_basis(ideal: IdealPresentation, degree_cap: int | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of ``ideal``; truncated after ``degree_cap`` if given.

    ``degree_cap`` counts weighted degree (see :func:`order_weights`), which is
    the total degree whenever all fiber variables have the same bidegree.
    """
    weights = order_weights(ideal.ring)
    gens = [g for g in ideal.generators if not g.is_zero()]
    if any(not _weighted_homogeneous(g, weights) for g in gens):
        polys = _buchberger_inhomogeneous(ideal.ring, gens, weights)
        return GroebnerBasis(ideal, polys, True, None, source=ideal.fingerprint(), weights=weights)
    eng = _F4(ideal.ring, gens, weights)
    eng.run(degree_cap)
    gb = GroebnerBasis(ideal, [], True, None, source=ideal.fingerprint(), weights=weights, _engine=eng)
    gb._refresh()
    return gb


def lead_monomial(f: Polynomial, weights: Sequence[int]) -> tuple:
    return max(f.terms, key=lambda m: order_key(m, weights))


# -- reduction ----------------------------------------------------------------------

def _find_divisor(gb: GroebnerBasis, E: int):
    pk, leads, memo = gb._packed()
    if E in memo:
        return memo[E]
    idx = leads.get(E)
    if idx is None and E:
        for v in pk.support(E):
            idx = _find_divisor(gb, E - pk.unit[v])
            if idx is not None:
                break
    memo[E] = idx
    return idx


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of f with no term divisible by a leading monomial of the basis."""
    ring = gb.ring
    if f.ring != ring:
        raise ValueError("polynomial and basis live in different rings")
    if f.is_zero():
        return f
    deg = weighted_degree(f, gb.weights)
    if not gb.complete and deg > gb.degree_cap:
        raise IncompleteBasisError(
            f"normal form in degree {deg} needs a basis beyond degree {gb.degree_cap}", deg
        )
    pk, _, _ = gb._packed()
    p = ring.field.characteristic
    packed_basis = gb._cache.get("packed_polys")
    if packed_basis is None:
        packed_basis = []
        for g in gb.polys:
            items = sorted(((pk.key(pk.pack(m)), c) for m, c in g.terms.items()), reverse=True)
            packed_basis.append(items)
        gb._cache["packed_polys"] = packed_basis
    acc = {pk.key(pk.pack(m)): c for m, c in f.terms.items()}
    heap = [-k for k in acc]
    heapq.heapify(heap)
    rem = {}
    while heap:
        K = -heapq.heappop(heap)
        c = acc.pop(K, None)
        if c is None:
            continue
        E = pk.from_key(K)
        g = _find_divisor(gb, E)
        if g is None:
            rem[pk.unpack(E)] = c
            continue
        items = packed_basis[g]
        s = c * ring.field.inv(items[0][1])
        if p:
            s %= p
        shift = K - items[0][0]
        for k, v in items[1:]:
            kk = k + shift
            old = acc.get(kk)
            nv = (-s * v) if old is None else (old - s * v)
            if p:
                nv %= p
            if old is None:
                heapq.heappush(heap, -kk)
            if nv:
                acc[kk] = nv
            else:
                acc.pop(kk, None)
    return Polynomial(ring, rem)


def s_polynomial(f: Polynomial, g: Polynomial, weights: Sequence[int] | None = None) -> Polynomial:
    ring = f.ring
    w = weights if weights is not None else order_weights(ring)
    mf, mg = lead_monomial(f, w), lead_monomial(g, w)
    L = tuple(max(a, b) for a, b in zip(mf, mg))
    uf = tuple(a - b for a, b in zip(L, mf))
    ug = tuple(a - b for a, b in zip(L, mg))
    inv = ring.field.inv
    return f.mul_monomial(uf, inv(f.terms[mf])) - g.mul_monomial(ug, inv(g.terms[mg]))


def verify_basis(gb: GroebnerBasis) -> bool:
    """Buchberger certificate: every S-polynomial of basis pairs reduces to zero
    (within the computed degree range for truncated bases)."""
    polys = gb.polys
    w = gb.weights
    leads = gb.leading_monomials()
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            L = tuple(max(a, b) for a, b in zip(leads[i], leads[j]))
            if not gb.complete and sum(e * x for e, x in zip(L, w)) > gb.degree_cap:
                continue
            if not normal_form(s_polynomial(polys[i], polys[j], w), gb).is_zero():
                return False
    return True


def is_reduced(gb: GroebnerBasis) -> bool:
    """Monic, and no basis term is divisible by another element's leading monomial."""
    leads = gb.leading_monomials()
    for i, f in enumerate(gb.polys):
        if f.terms[leads[i]] != gb.ring.field.one:
            return False
        for m in f.terms:
            for j, L in enumerate(leads):
                if (i != j or m != L) and all(a >= b for a, b in zip(m, L)):
                    return False
    return True


def _buchberger_inhomogeneous(ring: PolyRing, gens: list[Polynomial], w) -> list[Polynomial]:
    """Plain Buchberger with interreduction, only used for inhomogeneous input."""
    def monic(f):
        return f.scale(ring.field.inv(f.terms[lead_monomial(f, w)]))

    G = [monic(g) for g in gens]
    pairs = [(i, j) for i in range(len(G)) for j in range(i)]
    while pairs:
        i, j = pairs.pop(0)
        r = _reduce_by_list(s_polynomial(G[i], G[j], w), G, w)
        if not r.is_zero():
            if r.degree == 0:
                return [ring.one()]
            G.append(monic(r))
            pairs.extend((len(G) - 1, k) for k in range(len(G) - 1))
    leads = [lead_monomial(g, w) for g in G]
    keep = [g for i, g in enumerate(G)
            if not any(k != i and _mono_divides(leads[k], leads[i]) and (leads[k] != leads[i] or k < i)
                       for k in range(len(G)))]
    out = [monic(_reduce_by_list(g, keep[:i] + keep[i + 1:], w)) for i, g in enumerate(keep)]
    out.sort(key=lambda f: order_key(lead_monomial(f, w), w))
    return out


def _mono_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _reduce_by_list(f: Polynomial, G: list[Polynomial], w) -> Polynomial:
    ring = f.ring
    rem = {}
    while not f.is_zero():
        m = lead_monomial(f, w)
        c = f.terms[m]
        for g in G:
            L = lead_monomial(g, w)
            if _mono_divides(L, m):
                u = tuple(a - b for a, b in zip(m, L))
                f = f - g.mul_monomial(u, c * ring.field.inv(g.terms[L]))
                break
        else:
            rem[m] = c
            f = f - Polynomial(ring, {m: c})
    return Polynomial(ring, rem)


# -- standard monomials ----------------------------------------------------------

class _StandardMonomials:
    """Standard monomials per grade, built upward from lower grades.

    A monomial t is standard iff it is not a leading monomial and every t/x_u
    is standard.  Slices whose monomials all have a factor in an already empty
    slice come out empty without consulting the basis, which is how degrees
    beyond a truncated basis can still be certified zero.
    """

    def __init__(self, gb: GroebnerBasis, weights: list[tuple[int, ...]], feasible):
        self.gb = gb
        self.pk, self.leads, _ = gb._packed()
        self.weights = weights
        self.feasible = feasible
        self.cache: dict[tuple, frozenset] = {}
        self.unit_ideal = gb.is_unit

    def _pred(self, grade, v):
        return tuple(g - w for g, w in zip(grade, self.weights[v]))

    def get(self, grade: tuple) -> frozenset:
        if grade in self.cache:
            return self.cache[grade]
        if not self.feasible(grade):
            res = frozenset()
        elif all(g == 0 for g in grade):
            res = frozenset() if self.unit_ideal else frozenset({0})
        else:
            res = self._build(grade)
        self.cache[grade] = res
        return res

    def _build(self, grade):
        pk = self.pk
        unit = pk.unit
        gb = self.gb
        preds = {}
        out = set()
        for v in range(pk.n):
            pv = self._pred(grade, v)
            base = self.get(pv)
            preds[v] = base
            for s in base:
                sup = pk.support(s)
                if sup and sup[-1] > v:
                    continue
                t = s + unit[v]
                ok = True
                for u in pk.support(t):
                    if u == v:
                        continue
                    pu = preds.get(u)
                    if pu is None:
                        pu = self.get(self._pred(grade, u))
                        preds[u] = pu
                    if (t - unit[u]) not in pu:
                        ok = False
                        break
                if not ok:
                    continue
                deg = pk.degree(t)
                if not gb.complete and deg > gb.degree_cap:
                    raise IncompleteBasisError(
                        f"slice needs the basis in degree {deg}, computed up to {gb.degree_cap}", deg
                    )
                if t in self.leads:
                    continue
                out.add(t)
        return frozenset(out)


def _bigraded_feasible(ring: PolyRing):
    xs = [w for w in ring.bidegrees if w[0] == 0]
    ys = [w for w in ring.bidegrees if w[0] != 0]
    if any(w != (0, 1) for w in xs) or any(w[0] != 1 or w[1] > 0 for w in ys):
        raise ValueError("bigraded counting expects x of bidegree (0,1) and y of bidegree (1,-d)")
    dmax = max((-w[1] for w in ys), default=0)

    def feasible(grade):
        a, b = grade
        if a < 0:
            return False
        if not ys and a > 0:
            return False
        return b + a * dmax >= 0

    return feasible


def _standard(gb: GroebnerBasis, mode: str) -> _StandardMonomials:
    key = ("std", mode)
    s = gb._cache.get(key)
    if s is None:
        ring = gb.ring
        if mode == "total":
            s = _StandardMonomials(gb, [(1,)] * ring.nvars, lambda g: g[0] >= 0)
        else:
            s = _StandardMonomials(gb, list(ring.bidegrees), _bigraded_feasible(ring))
        gb._cache[key] = s
    return s


def standard_monomials(gb: GroebnerBasis, deg) -> list[tuple]:
    """Standard monomials of a slice (int: total degree, pair: bidegree), sorted."""
    if isinstance(deg, int):
        mode, grade = "total", (deg,)
    else:
        mode, grade = "bi", (int(deg[0]), int(deg[1]))
    s = _standard(gb, mode)
    pk = s.pk
    mons = [pk.unpack(E) for E in s.get(grade)]
    mons.sort(key=lambda m: order_key(m, gb.weights), reverse=True)
    return mons


def hilbert_slice(gb: GroebnerBasis, deg) -> int:
    """Number of standard monomials in a slice.

    ``deg`` is a total degree (int) or a bidegree ``(a, b)``.  For rings
    without fiber variables the two agree: degree e is bidegree (0, e).
    """
    if isinstance(deg, int):
        return len(_standard(gb, "total").get((deg,)))
    return len(_standard(gb, "bi").get((int(deg[0]), int(deg[1]))))


def is_finite_dimensional(gb: GroebnerBasis) -> bool:
    """True iff every variable has a pure power among the leading monomials."""
    n = gb.ring.nvars
    if gb.is_unit:
        return True
    have = set()
    for m in gb.leading_monomials():
        sup = [i for i, e in enumerate(m) if e]
        if len(sup) == 1:
            have.add(sup[0])
    if len(have) == n:
        return True
    if not gb.complete:
        raise IncompleteBasisError("finiteness needs an untruncated basis")
    return False


@dataclass
class HilbertTable:
    """Slice dimensions keyed by degree (int) or bidegree (pair)."""

    values: dict
    window: tuple | None = None
    field: str = "QQ"
    degree_cap: int | None = None

    def __getitem__(self, key):
        return self.values[key]

    def get(self, key, default=None):
        return self.values.get(key, default)

    def series(self) -> list[int]:
        """Coefficients for a single grading, degree 0 upward."""
        keys = sorted(k for k in self.values if isinstance(k, int))
        return [self.values[k] for k in keys]

    def to_json(self) -> dict:
        def fmt(k):
            return str(k) if isinstance(k, int) else f"{k[0]},{k[1]}"

        return {
            "field": self.field,
            "degree_cap": self.degree_cap,
            "window": [list(w) if isinstance(w, tuple) else w for w in self.window] if self.window else None,
            "dims": {fmt(k): v for k, v in sorted(self.values.items(), key=lambda kv: _sort_key(kv[0]))},
        }

    @classmethod
    def from_json(cls, data: dict) -> "HilbertTable":
        def key(s):
            if "," in s:
                a, b = s.split(",")
                return (int(a), int(b))
            return int(s)

        window = data.get("window")
        if window is not None:
            window = tuple(tuple(w) if isinstance(w, list) else w for w in window)
        return cls({key(k): int(v) for k, v in data["dims"].items()}, window, data.get("field", "QQ"),
                   data.get("degree_cap"))


def _sort_key(k):
    return (0, k, 0) if isinstance(k, int) else (1, k[0], k[1])


def slice_table(gb: GroebnerBasis, degrees: Iterable, auto_extend: bool = True) -> HilbertTable:
    """Slice dimensions over the given degrees, extending the basis on demand."""
    values = {}
    for deg in degrees:
        while True:
            try:
                values[deg] = hilbert_slice(gb, deg)
                break
            except IncompleteBasisError as exc:
                if not auto_extend or exc.needed_degree is None:
                    raise
                gb.extend(exc.needed_degree)
    return HilbertTable(values, field=gb.ring.field.name, degree_cap=gb.degree_cap)
