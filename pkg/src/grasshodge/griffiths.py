"""Hypersurfaces in Gr(k, n): the Griffiths ring R^G_f and its Hodge reading."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial, PolyRing
from .grassmann import (
    Derivation,
    GrassmannianSpec,
    derivation_apply,
    hjj_table,
    plucker_relations,
    sl_generators,
)
from .groebner import (
    GroebnerBasis,
    HilbertTable,
    IdealPresentation,
    groebner_basis,
    is_finite_dimensional,
    slice_table,
)


class InapplicableRegimeError(ValueError):
    """A corrected Hodge number came out negative: the reading does not apply."""


class NonGenericSectionWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HypersurfaceSpec:
    grassmannian: GrassmannianSpec
    d: int
    f: Polynomial

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("degree must be positive")
        if self.f.is_zero():
            raise ValueError("section is zero")
        f = self.f
        if not f.is_homogeneous or f.bidegree != (0, self.d):
            degs = sorted({sum(m) for m in f.terms})
            raise ValueError(f"section is not homogeneous of degree {self.d} (degrees present: {degs})")
        if f.ring.nvars != self.grassmannian.num_plucker:
            raise ValueError("section must live in the Plücker ring")

    @property
    def N(self) -> int:
        return self.grassmannian.N

    @property
    def dim(self) -> int:
        return self.N - 1


@dataclass
class GriffithsPresentation:
    """Plücker relations, f and the images of f under the sl_n generators."""

    spec: HypersurfaceSpec
    plucker: list[Polynomial]
    derivations: list[tuple[Derivation, Polynomial]]
    dropped: list[Derivation] = field(default_factory=list)

    @property
    def ring(self) -> PolyRing:
        return self.spec.f.ring

    @property
    def generators(self) -> list[Polynomial]:
        return self.plucker + [self.spec.f] + [img for _, img in self.derivations]

    @property
    def raw_generator_count(self) -> int:
        """Count before zero images were discarded."""
        return len(self.plucker) + 1 + len(self.derivations) + len(self.dropped)

    @property
    def ideal(self) -> IdealPresentation:
        g = self.spec.grassmannian
        return IdealPresentation(self.ring, self.generators, "single", f"griffiths Gr({g.k},{g.n}) d={self.spec.d}")

    def summary(self) -> dict:
        return {
            "plucker_relations": len(self.plucker),
            "section_terms": len(self.spec.f),
            "derivation_images": len(self.derivations),
            "zero_images": [str(D) for D in self.dropped],
            "generators": len(self.generators),
        }


def griffiths_ideal(spec: HypersurfaceSpec) -> GriffithsPresentation:
    """Build J_f.  Vanishing derivation images are dropped with a warning."""
    g = spec.grassmannian
    ring = spec.f.ring
    plucker = plucker_relations(g, ring)
    images, dropped = [], []
    for D in sl_generators(g.n):
        img = derivation_apply(D, spec.f, g)
        if img.is_zero():
            dropped.append(D)
        else:
            images.append((D, img))
    if dropped:
        warnings.warn(
            f"{len(dropped)} derivation images vanish ({', '.join(map(str, dropped[:4]))}"
            f"{', ...' if len(dropped) > 4 else ''}); the section is not generic",
            NonGenericSectionWarning,
            stacklevel=2,
        )
    return GriffithsPresentation(spec, plucker, images, dropped)


def hilbert_poincare(pres: GriffithsPresentation, window: range | None = None,
                     gb: GroebnerBasis | None = None) -> HilbertTable:
    """Slice dimensions of R^G_f.

    Without a window the ring must be finite dimensional; the series is then
    read until its first zero, after which every slice vanishes because the
    ring is generated in degree one.
    """
    if gb is None:
        gb = groebner_basis(pres.ideal)
    if window is not None:
        tab = slice_table(gb, list(window))
        tab.window = (window.start, window.stop - 1)
        return tab
    if not is_finite_dimensional(gb):
        raise ValueError("R^G_f is infinite dimensional; pass an explicit window")
    degrees = []
    e = 0
    while True:
        tab = slice_table(gb, degrees + [e])
        degrees.append(e)
        if tab[e] == 0:
            break
        e += 1
    tab.window = (0, e)
    return tab


# -- Hodge reading -----------------------------------------------------------------

GUARANTEED = "guaranteed"
EXCEPTION_DEGREE = "exception-degree"
LINES_COROLLARY = "lines-corollary"
OUTSIDE = "outside-theorem"


def exception_degrees(k: int, n: int, d: int) -> list[int]:
    """The p flagged for lines: (2n-1-d)/3 and (4n-9-d)/3 when integral."""
    if k != 2:
        return []
    out = []
    for num in (2 * n - 1 - d, 4 * n - 9 - d):
        q = Fraction(num, 3)
        if q.denominator == 1:
            out.append(int(q))
    return sorted(set(out))


@dataclass(frozen=True)
class HodgeEntry:
    p: int
    degree: int
    slice_dim: int
    correction: int
    h: int
    hodge: tuple[int, int]
    status: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "degree": self.degree,
            "slice": self.slice_dim,
            "correction": self.correction,
            "hodge": f"h^{{{self.hodge[0]},{self.hodge[1]}}}_van",
            "value": self.h,
            "status": self.status,
        }


@dataclass
class HodgeReport:
    entries: list[HodgeEntry]
    dim: int

    def h(self, a: int, b: int) -> int:
        for e in self.entries:
            if e.hodge == (a, b):
                return e.h
        raise KeyError((a, b))

    def symmetric(self) -> bool:
        vals = {e.hodge: e.h for e in self.entries}
        return all(vals.get((b, a), v) == v for (a, b), v in vals.items())

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [e.to_json() for e in self.entries], "symmetric": self.symmetric()}


def _status(k: int, n: int, d: int, p: int) -> str:
    if d >= n - 1:
        return GUARANTEED
    if p in exception_degrees(k, n, d):
        return EXCEPTION_DEGREE
    if k == 2:
        return LINES_COROLLARY
    return OUTSIDE


def hodge_from_griffiths(spec: HypersurfaceSpec, table: HilbertTable) -> HodgeReport:
    """Read h^{N-1-p,p}_van from the slice of degree (p+1)d - n."""
    g = spec.grassmannian
    N, n, d = g.N, g.n, spec.d
    coh = hjj_table(g)
    middle = N // 2 if (N - 1) % 2 == 1 else None
    entries = []
    for p in range(N):
        deg = (p + 1) * d - n
        if deg < 0:
            sl = 0
        elif deg in table.values:
            sl = table[deg]
        else:
            raise KeyError(f"table lacks degree {deg}")
        corr = coh.I_dim(p) if p == middle else 0
        h = sl - corr
        if h < 0:
            raise InapplicableRegimeError(
                f"slice {sl} in degree {deg} is smaller than the ambient correction {corr}"
            )
        entries.append(HodgeEntry(p, deg, sl, corr, h, (N - 1 - p, p), _status(g.k, n, d, p)))
    return HodgeReport(entries, N - 1)
