"""Certified rational row reduction through modular images.

The rank over GF(p) is never smaller than over QQ for an integer matrix, so a
prime gives an upper bound for the quotient dimension for free.  To turn it
into an exact result we pick an invertible pivot block ``A`` mod p, solve
``A X = -B`` over QQ (p-adic lifting when entries are small, Chinese
remaindering otherwise), recover ``X`` by rational reconstruction and then
check every original row against the kernel vectors.  A passing check proves
that rank over QQ equals the modular rank; nothing is assumed about the prime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .linalg import DenseModEchelon, _rref_block


class CertificationError(RuntimeError):
    """Raised when the modular pivots do not survive over QQ."""


@dataclass
class ExactKernel:
    """Exact reduced echelon data of a rational matrix.

    ``coords[c]`` gives column ``c`` in the basis of the free columns of the
    cokernel, as a dict ``j -> mpq``.
    """

    ncols: int
    pivots: list
    free: list
    coords: list
    method: str = "trivial"
    lifted_bits: int = 0
    stats: dict = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.pivots)


def integer_rows(rows) -> list[dict]:
    """Scale each rational row to a primitive integer row; zero rows are dropped."""
    out = []
    for r in rows:
        if not r:
            continue
        den = gmpy2.mpz(1)
        for v in r.values():
            den = gmpy2.lcm(den, gmpy2.mpq(v).denominator)
        ints = {c: gmpy2.mpz(gmpy2.mpq(v) * den) for c, v in r.items() if v}
        g = gmpy2.mpz(0)
        for v in ints.values():
            g = gmpy2.gcd(g, v)
            if g == 1:
                break
        if g > 1:
            ints = {c: v // g for c, v in ints.items()}
        if ints:
            out.append(ints)
    return out


def _prime_below(bound: int) -> int:
    """Largest prime strictly below ``bound``."""
    q = max(int(bound) - 1, 3)
    while not gmpy2.is_prime(q):
        q -= 1
    return q


def _dense_mod(rows, ncols, p, idx=None):
    idx = range(len(rows)) if idx is None else idx
    out = np.zeros((len(idx), ncols), dtype=np.int64)
    for i, k in enumerate(idx):
        for c, v in rows[k].items():
            out[i, c] = int(v % p)
    return out


def _select_rows(Mp: np.ndarray, p: int, ncols: int, chunk: int = 256) -> list[int]:
    """Greedy maximal set of independent rows mod p, in input order."""
    ech = DenseModEchelon(ncols, p)
    chosen = []
    for s in range(0, Mp.shape[0], chunk):
        if ech.full:
            break
        block = ech.reduce(Mp[s:s + chunk]).astype(np.int64)
        nz = np.flatnonzero(np.any(block != 0, axis=1))
        if not len(nz):
            continue
        _, piv = _rref_block(block[nz].T.copy(), p)
        picked = [int(nz[j]) for j in piv]
        chosen += [s + j for j in picked]
        ech.add_rows(block[picked])
    return chosen


def _ratrec(a: int, m: int, bound: int):
    """n/d with |n|, d <= bound and n = a d mod m, or None."""
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return r1, s1


def _reconstruct(Xmod, mod):
    """Columns of integer numerators with one denominator each, or None."""
    r, k = Xmod.shape
    bound = gmpy2.isqrt(mod // 2)
    half = mod // 2
    nums = np.empty((r, k), dtype=object)
    dens = []
    for j in range(k):
        D = gmpy2.mpz(1)
        col = []
        for i in range(r):
            y = (D * Xmod[i, j]) % mod
            if y > half:
                y -= mod
            if abs(y) > bound:
                rr = _ratrec(int(y % mod), int(mod), int(bound))
                if rr is None:
                    return None
                D *= rr[1]
                if D > bound:
                    return None
                col = [c * rr[1] for c in col]
                y = gmpy2.mpz(rr[0])
            col.append(y)
        g = D
        for v in col:
            g = gmpy2.gcd(g, v)
        nums[:, j] = [v // g for v in col]
        dens.append(D // g)
    return nums, dens


def _lifted_dixon(A, B, p, max_bits, stats):
    """p-adic digits of A^{-1}(-B) for small integer A, B; yields (Xmod, mod)."""
    r = A.shape[0]
    Ap = np.mod(A, p)
    aug = np.zeros((r, 2 * r), dtype=np.int64)
    aug[:, :r] = Ap
    aug[np.arange(r), r + np.arange(r)] = 1
    ech = DenseModEchelon(2 * r, p)
    ech.add_rows(aug)
    if ech.piv != list(range(r)):
        raise CertificationError("pivot block is singular mod p")
    C = ech.E[:, r:].astype(np.int64)
    C = np.where(C > p // 2, C - p, C).astype(np.float64)
    Af = A.astype(np.float64)
    R = -B.astype(np.float64)
    acc = np.zeros(B.shape, dtype=object)
    acc[:] = gmpy2.mpz(0)
    pw = gmpy2.mpz(1)
    bits = 0.0
    target = 256.0
    group = []
    lb = math.log2(p)
    while True:
        X = np.mod(C @ R, p)
        X = np.where(X > p // 2, X - p, X)
        R = (R - Af @ X) / p
        group.append(X.astype(np.int64))
        bits += lb
        if len(group) == 3:
            comb = group[2] * p * p + group[1] * p + group[0]
            acc += comb.astype(object) * pw
            pw *= gmpy2.mpz(p) ** 3
            group = []
        if bits >= target and not group:
            stats["lift_steps"] = stats.get("lift_steps", 0) + int(round(bits / lb))
            yield acc % pw, pw
            target *= 2
            if bits > max_bits:
                return


def _lifted_crt(A, B, max_bits, stats):
    """Chinese remaindering of A^{-1}(-B) over 31-bit primes; yields (Xmod, mod)."""
    r, k = B.shape
    AB = np.concatenate([A, B], axis=1).astype(object)
    acc = np.zeros((r, k), dtype=object)
    acc[:] = gmpy2.mpz(0)
    mod = gmpy2.mpz(1)
    q = 2 ** 31
    target = 256.0
    used = 0
    while True:
        q = _prime_below(q - 1)
        blk = np.array(np.mod(AB, q), dtype=np.int64)
        R, piv = _rref_block(blk, q)
        if piv != list(range(r)):
            continue
        Xq = np.mod(-R[:, r:], q).astype(object)
        inv = gmpy2.invert(mod % q, q)
        acc = acc + mod * (((Xq - acc) % q) * inv % q)
        mod *= q
        used += 1
        if mod.bit_length() >= target:
            stats["crt_primes"] = used
            yield acc, mod
            target *= 2
            if mod.bit_length() > max_bits:
                return


def _hadamard_bits(A, B) -> float:
    """log2 of a bound for every numerator and denominator of A^{-1} B."""
    M = np.concatenate([A, B], axis=1)
    try:
        norms = np.sqrt((M.astype(np.float64) ** 2).sum(axis=1))
        return float(np.sum(np.log2(np.maximum(norms, 1.0)))) + 2
    except OverflowError:  # pragma: no cover - object rows with huge entries
        return float(sum(math.log2(max(1, math.isqrt(int(sum(int(x) ** 2 for x in row))) + 1))
                         for row in M)) + 2


def _verify(rows, Vcols, ncols) -> bool:
    """Exact check that every row annihilates every candidate kernel vector."""
    if not Vcols:
        return True
    V = np.zeros((ncols, len(Vcols)), dtype=object)
    V[:] = gmpy2.mpz(0)
    for j, vec in enumerate(Vcols):
        for c, v in vec.items():
            V[c, j] = v
    zero = np.zeros(len(Vcols), dtype=object)
    for row in rows:
        acc = zero.copy()
        for c, v in row.items():
            acc = acc + V[c] * v
        if any(acc):
            return False
    return True


def exact_kernel(rows, ncols: int, prime: int | None = None, max_bits: float | None = None) -> ExactKernel:
    """Reduced echelon structure over QQ of the span of sparse rational rows.

    The modular pivots come from ``prime`` (default: the largest prime that
    keeps dense products exact).  Raises ``CertificationError`` when the
    reconstructed kernel fails the final check, which can only happen for a
    prime dividing some pivot minor.
    """
    irows = integer_rows(rows)
    stats = {"rows": len(irows), "cols": ncols}
    if not irows or ncols == 0:
        return ExactKernel(ncols, [], list(range(ncols)),
                           [{c: gmpy2.mpq(1)} for c in range(ncols)], "trivial", 0, stats)
    m = len(irows)
    maxbits = max(int(abs(v)).bit_length() for r in irows for v in r.values())
    p = prime or _prime_below(min(2 ** 20, int(math.isqrt(2 ** 52 // (ncols + m + 1)))))
    Mp = _dense_mod(irows, ncols, p)
    sel = _select_rows(Mp, p, ncols)
    piv_ech = DenseModEchelon(ncols, p)
    piv_ech.add_rows(Mp[sel])
    pivots = list(piv_ech.piv)
    r = len(pivots)
    pset = set(pivots)
    free = [c for c in range(ncols) if c not in pset]
    stats["rank_mod_p"] = r
    coords = [None] * ncols
    for j, c in enumerate(free):
        coords[c] = {j: gmpy2.mpq(1)}
    if not free:
        for c in pivots:
            coords[c] = {}
        return ExactKernel(ncols, pivots, free, coords, "full-rank", 0, stats)
    dtype = np.int64 if maxbits <= 40 else object
    A = np.zeros((r, r), dtype=dtype)
    B = np.zeros((r, len(free)), dtype=dtype)
    pcol = {c: i for i, c in enumerate(pivots)}
    fcol = {c: j for j, c in enumerate(free)}
    for i, k in enumerate(sel):
        for c, v in irows[k].items():
            if c in pcol:
                A[i, pcol[c]] = v
            else:
                B[i, fcol[c]] = v
    cap = _hadamard_bits(A, B) * 2 + 64 if max_bits is None else max_bits
    small = maxbits <= 20 and r * p * (np.abs(A).sum(axis=1).max() + np.abs(B).max()) < 2 ** 52
    lifts = _lifted_dixon(A, B, p, cap, stats) if small else _lifted_crt(A, B, cap, stats)
    method = "p-adic" if small else "crt"
    for Xmod, mod in lifts:
        rec = _reconstruct(Xmod, mod)
        if rec is None:
            continue
        nums, dens = rec
        Vcols = []
        for j, D in enumerate(dens):
            vec = {free[j]: D}
            for i, c in enumerate(pivots):
                if nums[i, j]:
                    vec[c] = nums[i, j]
            Vcols.append(vec)
        if _verify(irows, Vcols, ncols):
            for i, c in enumerate(pivots):
                coords[c] = {j: gmpy2.mpq(nums[i, j], dens[j]) for j in range(len(free)) if nums[i, j]}
            bits = int(mod.bit_length())
            stats["lifted_bits"] = bits
            return ExactKernel(ncols, pivots, free, coords, method, bits, stats)
    raise CertificationError(f"modular rank {r} does not hold over QQ (prime {p})")
