"""Exact row reduction: sparse (any field) and dense numpy (prime fields)."""

from __future__ import annotations

import heapq

import numpy as np


def reduce_sparse(row: dict, pivots: dict, p: int) -> dict:
    """Reduce ``row`` by semi-echelon ``pivots`` (col -> (cols, vals), monic at cols[0]).

    Entries are processed by increasing column, so pivot rows may contain
    other pivot columns in their tails.  ``p == 0`` means rational entries.
    """
    acc = dict(row)
    heap = [c for c in acc if c in pivots]
    heapq.heapify(heap)
    while heap:
        c = heapq.heappop(heap)
        v = acc.pop(c, None)
        if v is None:
            continue
        pc, pv = pivots[c]
        if p:
            for cc, vv in zip(pc[1:], pv[1:]):
                old = acc.get(cc)
                if old is None:
                    acc[cc] = (-v * vv) % p
                    if cc in pivots:
                        heapq.heappush(heap, cc)
                else:
                    nv = (old - v * vv) % p
                    if nv:
                        acc[cc] = nv
                    else:
                        del acc[cc]
        else:
            for cc, vv in zip(pc[1:], pv[1:]):
                old = acc.get(cc)
                if old is None:
                    acc[cc] = -v * vv
                    if cc in pivots:
                        heapq.heappush(heap, cc)
                else:
                    nv = old - v * vv
                    if nv:
                        acc[cc] = nv
                    else:
                        del acc[cc]
    return acc


def _as_pivot(row: dict, p: int, inv):
    cols = sorted(row)
    lead = row[cols[0]]
    if p:
        s = pow(int(lead), -1, p)
        vals = [row[c] * s % p for c in cols]
    else:
        s = inv(lead)
        vals = [row[c] * s for c in cols]
    return cols, vals


class SparseEchelon:
    """Incremental semi-echelon form of sparse rows over a field."""

    def __init__(self, field):
        self.field = field
        self.p = field.characteristic
        self.pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        p = self.p
        if p:
            row = {c: v % p for c, v in row.items() if v % p}
        else:
            row = {c: v for c, v in row.items() if v}
        return reduce_sparse(row, self.pivots, p)

    def add(self, row: dict) -> bool:
        """Insert a row; True when it was independent of the previous ones."""
        r = self.reduce(row)
        if not r:
            return False
        cols, vals = _as_pivot(r, self.p, self.field.inv)
        self.pivots[cols[0]] = (cols, vals)
        return True

    def interreduce(self):
        """Turn the pivots into reduced row echelon form."""
        p = self.p
        for c in sorted(self.pivots, reverse=True):
            cols, vals = self.pivots[c]
            others = {k: v for k, v in self.pivots.items() if k != c}
            tail = reduce_sparse(dict(zip(cols[1:], vals[1:])), others, p)
            tail[c] = vals[0]
            self.pivots[c] = _as_pivot(tail, p, self.field.inv)


def _rref_dense(C, p):
    """RREF of a dense int64 block mod p in place; returns (rank, pivot columns)."""
    nrows, ncols = C.shape
    piv = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        k = -1
        for i in range(r, nrows):
            if C[i, col] % p != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(col, ncols):
                t = C[r, j]
                C[r, j] = C[k, j]
                C[k, j] = t
        base = C[r, col] % p
        inv = 1
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(col, ncols):
            C[r, j] = C[r, j] * inv % p
        for i in range(nrows):
            if i == r:
                continue
            f = C[i, col] % p
            if f == 0:
                continue
            for j in range(col, ncols):
                C[i, j] = (C[i, j] - f * C[r, j]) % p
        piv[r] = col
        r += 1
    return r, piv[:r]


def _rref_block(C: np.ndarray, p: int):
    """RREF of a small dense block mod p, returns (rows, pivot cols)."""
    C = np.ascontiguousarray(C, dtype=np.int64) % p
    r, piv = _rref_dense_jit(C, p)
    return C[:r], [int(c) for c in piv]


class DenseModEchelon:
    """Reduced row echelon basis over GF(p), fed by blocks of dense rows.

    Entries are stored as float64 holding exact integers; products are
    exact while rank * p^2 < 2^53, otherwise int64 arithmetic is used.
    """

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.E = np.zeros((0, ncols), dtype=np.float64)
        self.piv: list[int] = []
        self._dtype = np.float64 if ncols * p * p < 2 ** 52 else np.int64
        if self._dtype is np.int64 and ncols * p * p >= 2 ** 62:
            raise OverflowError("prime too large for dense modular elimination")
        self.E = self.E.astype(self._dtype)

    @property
    def rank(self) -> int:
        return len(self.piv)

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def reduce(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=self._dtype) % self.p
        if self.piv:
            X = np.mod(X - X[:, self.piv] @ self.E, self.p)
        return X

    def add_rows(self, X: np.ndarray, chunk: int = 256):
        X = np.asarray(X)
        for s in range(0, X.shape[0], chunk):
            if self.full:
                return
            block = self.reduce(X[s:s + chunk])
            block = block[np.any(block != 0, axis=1)]
            if block.shape[0] == 0:
                continue
            R, newpiv = _rref_block(block, self.p)
            R = R.astype(self._dtype)
            if not newpiv:
                continue
            if self.piv:
                self.E = np.mod(self.E - self.E[:, newpiv] @ R, self.p)
            self.E = np.vstack([self.E, R])
            self.piv.extend(newpiv)

    def nonpivot_columns(self) -> list[int]:
        ps = set(self.piv)
        return [c for c in range(self.ncols) if c not in ps]


# -- block reduction mod p for the Gröbner engine ---------------------------------

try:
    import numba as _nb
except ImportError:  # pragma: no cover - numba is a declared dependency
    _nb = None


def _grow(buf, need):
    if need <= buf.shape[0]:
        return buf
    size = max(need, 2 * buf.shape[0])
    out = np.empty(size, dtype=buf.dtype)
    out[: buf.shape[0]] = buf
    return out


def _f4_block(nc, piv_ptr, piv_cols, piv_vals, piv_of_col, row_ptr, row_cols, row_vals, p):
    """Reduce rows by monic pivot rows mod p, then echelonize the remainders.

    Columns are sorted so that every pivot row has its lead first and its tail
    at larger column indices.  Returns the remainders in reduced row echelon
    form as CSR arrays, each row monic at its first column.
    """
    acc = np.zeros(nc, dtype=np.int64)
    # entries are reduced lazily; fold back before int64 can overflow (p < 2^31)
    lim = -(2 ** 62)
    new_of_col = np.full(nc, -1, dtype=np.int64)
    n_ptr = np.zeros(1, dtype=np.int64)
    n_cols = np.empty(1024, dtype=np.int64)
    n_vals = np.empty(1024, dtype=np.int64)
    nrows = 0
    for r in range(row_ptr.shape[0] - 1):
        first = nc
        for k in range(row_ptr[r], row_ptr[r + 1]):
            c = row_cols[k]
            acc[c] = row_vals[k]
            if c < first:
                first = c
        lead = -1
        for c in range(first, nc):
            v = acc[c] % p
            if v == 0:
                acc[c] = 0
                continue
            pr = piv_of_col[c]
            if pr >= 0:
                for k in range(piv_ptr[pr] + 1, piv_ptr[pr + 1]):
                    acc[piv_cols[k]] -= v * piv_vals[k]
                    if acc[piv_cols[k]] < lim:
                        acc[piv_cols[k]] %= p
                acc[c] = 0
                continue
            nr = new_of_col[c]
            if nr >= 0:
                for k in range(n_ptr[nr] + 1, n_ptr[nr + 1]):
                    acc[n_cols[k]] -= v * n_vals[k]
                    if acc[n_cols[k]] < lim:
                        acc[n_cols[k]] %= p
                acc[c] = 0
                continue
            acc[c] = v
            if lead < 0:
                lead = c
        if lead < 0:
            continue
        inv = 1
        base = acc[lead]
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        cnt = 0
        for c in range(lead, nc):
            if acc[c] != 0:
                cnt += 1
        start = n_ptr[nrows]
        n_cols = _grow(n_cols, start + cnt)
        n_vals = _grow(n_vals, start + cnt)
        pos = start
        for c in range(lead, nc):
            if acc[c] != 0:
                n_cols[pos] = c
                n_vals[pos] = acc[c] * inv % p
                acc[c] = 0
                pos += 1
        n_ptr = _grow(n_ptr, nrows + 2)
        n_ptr[nrows + 1] = pos
        new_of_col[lead] = nrows
        nrows += 1
    # back substitution among the new rows, largest lead first
    leads = np.empty(nrows, dtype=np.int64)
    for i in range(nrows):
        leads[i] = n_cols[n_ptr[i]]
    order = np.argsort(-leads)
    done = np.zeros(nc, dtype=np.bool_)
    o_ptr = np.zeros(nrows + 1, dtype=np.int64)
    o_cols = np.empty(max(n_ptr[nrows], 1), dtype=np.int64)
    o_vals = np.empty(max(n_ptr[nrows], 1), dtype=np.int64)
    fin_start = np.zeros(nrows, dtype=np.int64)
    fin_end = np.zeros(nrows, dtype=np.int64)
    out_pos = 0
    for t in range(nrows):
        i = order[t]
        for k in range(n_ptr[i], n_ptr[i + 1]):
            acc[n_cols[k]] = n_vals[k]
        lead = leads[i]
        for c in range(lead + 1, nc):
            v = acc[c] % p
            if v == 0:
                acc[c] = 0
                continue
            if done[c]:
                j = new_of_col[c]
                for k in range(fin_start[j] + 1, fin_end[j]):
                    acc[o_cols[k]] -= v * o_vals[k]
                    if acc[o_cols[k]] < lim:
                        acc[o_cols[k]] %= p
                acc[c] = 0
                continue
            acc[c] = v
        cnt = 1
        for c in range(lead + 1, nc):
            if acc[c] != 0:
                cnt += 1
        o_cols = _grow(o_cols, out_pos + cnt)
        o_vals = _grow(o_vals, out_pos + cnt)
        fin_start[i] = out_pos
        o_cols[out_pos] = lead
        o_vals[out_pos] = 1
        acc[lead] = 0
        out_pos += 1
        for c in range(lead + 1, nc):
            if acc[c] != 0:
                o_cols[out_pos] = c
                o_vals[out_pos] = acc[c]
                acc[c] = 0
                out_pos += 1
        fin_end[i] = out_pos
        done[lead] = True
    # emit in original creation order
    for i in range(nrows):
        o_ptr[i + 1] = o_ptr[i] + (fin_end[i] - fin_start[i])
    r_cols = np.empty(max(o_ptr[nrows], 1), dtype=np.int64)
    r_vals = np.empty(max(o_ptr[nrows], 1), dtype=np.int64)
    for i in range(nrows):
        m = fin_end[i] - fin_start[i]
        r_cols[o_ptr[i]: o_ptr[i] + m] = o_cols[fin_start[i]: fin_end[i]]
        r_vals[o_ptr[i]: o_ptr[i] + m] = o_vals[fin_start[i]: fin_end[i]]
    return o_ptr, r_cols, r_vals


if _nb is not None:
    _grow = _nb.njit(cache=True)(_grow)
    _rref_dense_jit = _nb.njit(cache=True)(_rref_dense)
    f4_block_modp = _nb.njit(cache=True)(_f4_block)
else:  # pragma: no cover
    f4_block_modp = _f4_block
    _rref_dense_jit = _rref_dense
