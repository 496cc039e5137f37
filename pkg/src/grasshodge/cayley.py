"""Complete intersections through the Cayley trick: the bigraded ring 𝒰 and its Hodge reading."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Polynomial, PolyRing
from .grassmann import Derivation, GrassmannianSpec, derivation_apply, hjj_table, plucker_relations, plucker_ring, sl_generators
from .griffiths import InapplicableRegimeError, NonGenericSectionWarning
from .groebner import GroebnerBasis, HilbertTable, IdealPresentation, groebner_basis, slice_table


@dataclass(frozen=True)
class CompleteIntersectionSpec:
    grassmannian: GrassmannianSpec
    degrees: tuple[int, ...]
    sections: tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        object.__setattr__(self, "sections", tuple(self.sections))
        if not self.degrees:
            raise ValueError("at least one section is needed")
        if len(self.degrees) != len(self.sections):
            raise ValueError("one degree per section")
        g = self.grassmannian
        for i, (d, f) in enumerate(zip(self.degrees, self.sections), start=1):
            if d < 1:
                raise ValueError("degrees must be positive")
            if f.is_zero():
                raise ValueError(f"section {i} is zero")
            if f.ring.names[: g.num_plucker] != plucker_ring(g).names:
                raise ValueError(f"section {i} is not in the Plücker ring")
            if any(e for m in f.terms for e in m[g.num_plucker:]):
                raise ValueError(f"section {i} involves fiber variables")
            if not f.is_homogeneous or f.bidegree != (0, d):
                degs = sorted({sum(m) for m in f.terms})
                raise ValueError(f"section {i} is not homogeneous of degree {d} (degrees present: {degs})")

    @property
    def c(self) -> int:
        return len(self.degrees)

    @property
    def m(self) -> int:
        """Adjunction degree: omega_Z = O_Z(m)."""
        return sum(self.degrees) - self.grassmannian.n

    @property
    def dim(self) -> int:
        return self.grassmannian.N - self.c

    @property
    def field(self):
        return self.sections[0].ring.field


def _lift(f: Polynomial, ring: PolyRing) -> Polynomial:
    pad = (0,) * (ring.nvars - f.ring.nvars)
    return ring.from_dict({m + pad: c for m, c in f.terms.items()})


@dataclass
class CayleyPresentation:
    spec: CompleteIntersectionSpec
    ring: PolyRing
    F: Polynomial
    sections: list[Polynomial]
    plucker: list[Polynomial]
    derivations: list[tuple[Derivation, Polynomial]]
    dropped: list[Derivation] = field(default_factory=list)

    @property
    def generators(self) -> list[Polynomial]:
        return self.plucker + [self.F] + self.sections + [img for _, img in self.derivations]

    @property
    def ideal(self) -> IdealPresentation:
        g = self.spec.grassmannian
        degs = ",".join(map(str, self.spec.degrees))
        return IdealPresentation(self.ring, self.generators, "bigraded", f"cayley Gr({g.k},{g.n}) d=({degs})")

    def summary(self) -> dict:
        return {
            "plucker_relations": len(self.plucker),
            "sections": len(self.sections),
            "derivation_images": len(self.derivations),
            "zero_images": [str(D) for D in self.dropped],
            "generators": len(self.generators),
            "m": self.spec.m,
        }


def cayley_presentation(spec: CompleteIntersectionSpec) -> CayleyPresentation:
    """S[y_1..y_c] / (P, F, f_1..f_c, D(F)) with F = sum y_i f_i.

    The partials dF/dy_i are the f_i themselves, so they enter directly.
    """
    g = spec.grassmannian
    ring = plucker_ring(g, spec.degrees, spec.field)
    sections = [_lift(f, ring) for f in spec.sections]
    F = ring.zero()
    for i, f in enumerate(sections, start=1):
        F = F + ring.var(f"y[{i}]") * f
    plucker = plucker_relations(g, ring)
    images, dropped = [], []
    for D in sl_generators(g.n):
        img = derivation_apply(D, F, g)
        if img.is_zero():
            dropped.append(D)
        else:
            images.append((D, img))
    if dropped:
        warnings.warn(f"{len(dropped)} derivation images of F vanish; sections are not generic",
                      NonGenericSectionWarning, stacklevel=2)
    return CayleyPresentation(spec, ring, F, sections, plucker, images, dropped)


def default_window(spec: CompleteIntersectionSpec) -> tuple[range, range]:
    return range(-1, spec.dim + 2), range(spec.m - 2, 4)


def bigraded_table(pres: CayleyPresentation, window: tuple[range, range] | None = None,
                   gb: GroebnerBasis | None = None) -> HilbertTable:
    """dim 𝒰_{a,b} over the window (rows a, columns b) by standard-monomial counts."""
    rows, cols = window or default_window(pres.spec)
    if gb is None:
        gb = groebner_basis(pres.ideal, degree_cap=2)
    cells = [(a, b) for a in rows for b in cols]
    tab = slice_table(gb, cells)
    tab.window = ((rows.start, rows.stop - 1), (cols.start, cols.stop - 1))
    return tab


def render_table(table: HilbertTable) -> str:
    """a/b grid: one row per a, one column per b."""
    if table.window is None:
        keys = list(table.values)
        rows = sorted({a for a, _ in keys})
        cols = sorted({b for _, b in keys})
    else:
        (a0, a1), (b0, b1) = table.window
        rows, cols = range(a0, a1 + 1), range(b0, b1 + 1)
    width = max([4] + [len(str(v)) + 1 for v in table.values.values()])
    head = "a/b".rjust(4) + "".join(str(b).rjust(width) for b in cols)
    lines = [head]
    for a in rows:
        lines.append(str(a).rjust(4) + "".join(str(table.values.get((a, b), "")).rjust(width) for b in cols))
    return "\n".join(lines)


# -- Hodge reading -----------------------------------------------------------------

GUARANTEED = "guaranteed"
PAPER_ENDORSED = "paper-endorsed"
BUILTIN_RESIDUAL = "builtin-residual"
RESIDUAL_NEEDED = "residual-corrections-needed"

# Residual terms derived by hand for specific families: (k, n, sorted degrees) -> {p: dim}
BUILTIN_RESIDUALS = {
    (2, 5, (2, 1)): {2: 5},  # V_5 inside 𝒰_{2,-2}
}


@dataclass(frozen=True)
class CayleyHodgeEntry:
    p: int
    slice_dim: int
    correction: int
    residual: int
    h: int
    hodge: tuple[int, int]
    status: str

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "slice": self.slice_dim,
            "correction": self.correction,
            "residual": self.residual,
            "hodge": f"h^{{{self.hodge[0]},{self.hodge[1]}}}_van",
            "value": self.h,
            "status": self.status,
        }


@dataclass
class CayleyHodgeReport:
    entries: list[CayleyHodgeEntry]
    dim: int
    m: int

    def h(self, a: int, b: int) -> int:
        for e in self.entries:
            if e.hodge == (a, b):
                return e.h
        raise KeyError((a, b))

    def symmetric(self) -> bool:
        vals = {e.hodge: e.h for e in self.entries}
        return all(vals.get((b, a), v) == v for (a, b), v in vals.items())

    def to_json(self) -> dict:
        return {"dim": self.dim, "m": self.m, "entries": [e.to_json() for e in self.entries],
                "symmetric": self.symmetric()}


def hodge_from_cayley(spec: CompleteIntersectionSpec, table: HilbertTable) -> CayleyHodgeReport:
    """h^{N-c-p,p}_van from 𝒰_{p,m}, with the ambient correction in odd dimension."""
    g = spec.grassmannian
    dim, m = spec.dim, spec.m
    if dim <= 0:
        raise ValueError("complete intersection has no positive dimension")
    coh = hjj_table(g)
    middle = (dim + 1) // 2 if dim % 2 else None
    key = (g.k, g.n, tuple(sorted(spec.degrees, reverse=True)))
    builtin = BUILTIN_RESIDUALS.get(key)
    if m >= g.n - 1:
        status = GUARANTEED
    elif m == 0:
        status = PAPER_ENDORSED
    elif builtin is not None:
        status = BUILTIN_RESIDUAL
    else:
        status = RESIDUAL_NEEDED
    entries = []
    for p in range(dim + 1):
        if (p, m) not in table.values:
            raise KeyError(f"table lacks bidegree {(p, m)}")
        sl = table[(p, m)]
        corr = coh.I_dim(p) if p == middle else 0
        res = builtin.get(p, 0) if status == BUILTIN_RESIDUAL else 0
        h = sl - corr - res
        if h < 0:
            raise InapplicableRegimeError(f"slice {(p, m)} = {sl} is below its corrections {corr + res}")
        entries.append(CayleyHodgeEntry(p, sl, corr, res, h, (dim - p, p), status))
    return CayleyHodgeReport(entries, dim, m)


def cayley_from_sections(spec: GrassmannianSpec, sections: Sequence[Polynomial]) -> CompleteIntersectionSpec:
    """Spec with degrees read off the sections."""
    return CompleteIntersectionSpec(spec, tuple(f.bidegree[1] for f in sections), tuple(sections))
