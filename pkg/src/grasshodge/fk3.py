"""Numerical search for complete intersections in Grassmannians that may be of K3 type."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import count_monomials
from .grassmann import GrassmannianSpec, plucker_ring


@dataclass(frozen=True, order=True)
class FK3Candidate:
    """Degrees d_1 >= ... >= d_c in Gr(k, k + l)."""

    k: int
    l: int
    degrees: tuple[int, ...]
    tag: str = "ordered"

    @property
    def n(self) -> int:
        return self.k + self.l

    @property
    def c(self) -> int:
        return len(self.degrees)

    @property
    def alpha(self) -> int:
        return sum(self.degrees)

    @property
    def dim(self) -> int:
        return self.k * self.l - self.c

    @property
    def m(self) -> int:
        return self.alpha - self.n

    def satisfies_equation(self) -> bool:
        return 2 * (self.k + self.l - self.alpha) == self.degrees[0] * (self.k * self.l - self.c - 2)

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "degrees": list(self.degrees), "dim": self.dim,
                "m": self.m, "tag": self.tag}

    def __str__(self):
        return f"({','.join(map(str, self.degrees))}) in Gr({self.k},{self.n})"


def _admissible(k: int, l: int, degs: tuple[int, ...], relax: bool) -> str | None:
    cand = FK3Candidate(k, l, degs)
    if cand.dim < 4 or cand.dim % 2:
        return None
    if cand.m >= 0:
        return None
    if not cand.satisfies_equation():
        return None
    if len(degs) > 1 and degs[0] == degs[1]:
        return "residual-dependent" if relax else None
    return "ordered"


def fk3_search(k_max: int, n_max: int, c_max: int, d_max: int, relax_ordering: bool = False) -> list[FK3Candidate]:
    """All (k, n, d) within the bounds, k >= 2 and k <= n - k, meeting the K3-type numerology.

    Gr(k, n) and Gr(n - k, n) are the same variety, so only k <= n - k is listed.
    """
    out = []
    for k in range(2, k_max + 1):
        for n in range(2 * k, n_max + 1):
            l = n - k
            for c in range(1, c_max + 1):
                for degs in itertools.combinations_with_replacement(range(d_max, 0, -1), c):
                    tag = _admissible(k, l, degs, relax_ordering)
                    if tag:
                        out.append(FK3Candidate(k, l, degs, tag))
    out.sort()
    return out


def canonical_degrees(degrees) -> tuple[int, ...]:
    return tuple(sorted((int(d) for d in degrees), reverse=True))


@dataclass
class FK3Numerology:
    candidate: FK3Candidate
    s: int
    m: int
    slices: dict  # p -> dim T_{p,m}

    @property
    def k3_condition(self) -> bool:
        s = self.s
        return self.slices.get(s - 1) == 1 and all(v == 0 for p, v in self.slices.items() if p != s - 1)

    def to_json(self) -> dict:
        return {"candidate": self.candidate.to_json(), "s": self.s, "m": self.m,
                "T": {str(p): v for p, v in sorted(self.slices.items())}, "k3_condition": self.k3_condition}


def fk3_numerology(candidate: FK3Candidate) -> FK3Numerology:
    """Free-ring slices T_{s-t,m} for t = 1 .. s-1, counted monomial by monomial."""
    s = candidate.dim // 2
    ring = plucker_ring(GrassmannianSpec(candidate.k, candidate.n), candidate.degrees)
    slices = {s - t: count_monomials(ring, (s - t, candidate.m)) for t in range(1, s)}
    return FK3Numerology(candidate, s, candidate.m, slices)
