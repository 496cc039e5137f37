"""Named inputs and the small text formats for sections and ideals.

Section files hold one polynomial (blank lines and ``#`` comments ignored).
Job files, used by the presets and by ``hilbert``/``oracle``, are line based::

    grassmannian 2 5
    fiber 1 2            # optional: y[i] of bidegree (1, -d_i)
    plucker              # optional: include the Plücker relations
    section <poly>       # repeated
    generator <poly>     # repeated, extra ideal generators
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .algebra import QQ, Polynomial, PolyRing, PolynomialSyntaxError
from .grassmann import GrassmannianSpec, plucker_relations, plucker_ring
from .groebner import IdealPresentation

PRESETS = ("gm5", "cy-gr27", "gm4-z21")

# Fermat coefficients of the gm5 quadric, in lex order of the Plücker variables
_GM5_COEFFS = (1, 2, 4, 5, 6, 11, 75, 13, 43, 8)


class JobFileError(ValueError):
    pass


@dataclass
class JobFile:
    spec: GrassmannianSpec
    fiber: tuple[int, ...] = ()
    plucker: bool = False
    sections: list[str] = field(default_factory=list)
    generators: list[str] = field(default_factory=list)

    def ring(self, field=QQ) -> PolyRing:
        return plucker_ring(self.spec, self.fiber, field)

    def section_polys(self, field=QQ) -> list[Polynomial]:
        ring = plucker_ring(self.spec, (), field)
        return [_parse(s, ring, f"section {i}") for i, s in enumerate(self.sections, start=1)]

    def ideal(self, field=QQ) -> IdealPresentation:
        ring = self.ring(field)
        gens = plucker_relations(self.spec, ring) if self.plucker else []
        pad = (0,) * len(self.fiber)
        for s in self.sections:
            f = _parse(s, plucker_ring(self.spec, (), field), "section")
            gens.append(ring.from_dict({m + pad: c for m, c in f.terms.items()}))
        gens += [_parse(g, ring, "generator") for g in self.generators]
        return IdealPresentation(ring, gens, "bigraded" if self.fiber else "single")


def _parse(text: str, ring: PolyRing, what: str) -> Polynomial:
    try:
        return ring.parse(text)
    except PolynomialSyntaxError as exc:
        raise JobFileError(f"{what}: {exc}") from exc
    except (KeyError, ValueError) as exc:
        raise JobFileError(f"{what}: {exc}") from exc


def parse_job(text: str) -> JobFile:
    job = None
    pending: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word, _, rest = line.partition(" ")
        rest = rest.strip()
        if word == "grassmannian":
            try:
                k, n = (int(t) for t in rest.split())
                job = JobFile(GrassmannianSpec(k, n))
            except ValueError as exc:
                raise JobFileError(f"line {lineno}: bad grassmannian line: {exc}") from exc
        elif word in ("fiber", "plucker", "section", "generator"):
            pending.append((lineno, word, rest))
        else:
            raise JobFileError(f"line {lineno}: unknown directive {word!r}")
    if job is None:
        raise JobFileError("missing 'grassmannian K N' line")
    for lineno, word, rest in pending:
        if word == "fiber":
            try:
                job.fiber = tuple(int(t) for t in rest.split())
            except ValueError as exc:
                raise JobFileError(f"line {lineno}: bad fiber degrees") from exc
        elif word == "plucker":
            job.plucker = True
        elif word == "section":
            job.sections.append(rest)
        else:
            job.generators.append(rest)
    return job


def load_job(path) -> JobFile:
    return parse_job(Path(path).read_text())


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise JobFileError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files(__package__).joinpath("presets", f"{name}.txt").read_text()


def load_preset(name: str) -> JobFile:
    return parse_job(preset_text(name))


def parse_section(path, spec: GrassmannianSpec, field=QQ) -> Polynomial:
    """Read one homogeneous section from a text file."""
    lines = [ln.split("#", 1)[0] for ln in Path(path).read_text().splitlines()]
    text = " ".join(ln.strip() for ln in lines if ln.strip())
    if not text:
        raise JobFileError(f"{path}: empty section file")
    f = _parse(text, plucker_ring(spec, (), field), str(path))
    if f.is_zero():
        raise JobFileError(f"{path}: section is zero")
    if not f.is_homogeneous:
        degs = sorted({sum(m) for m in f.terms})
        raise JobFileError(f"{path}: section is not homogeneous, degrees {degs[0]} and {degs[-1]} both occur")
    return f


def generate_generic_section(spec: GrassmannianSpec, d: int, seed, field=QQ) -> Polynomial:
    """Fermat-type sum a_I x_I^d with pairwise distinct positive a_I.

    ``seed="paper"`` gives the gm5 coefficients (Gr(2,5), d = 2 only); an
    integer seed draws without replacement from 1 .. 10 * #variables.
    """
    if d < 1:
        raise ValueError("degree must be positive")
    ring = plucker_ring(spec, (), field)
    nv = ring.nvars
    if seed == "paper":
        if (spec.k, spec.n, d) != (2, 5, 2):
            raise ValueError("the 'paper' seed only exists for Gr(2,5) and d = 2")
        coeffs = list(_GM5_COEFFS)
    else:
        coeffs = random.Random(int(seed)).sample(range(1, 10 * nv + 1), nv)
    return ring.from_dict({ring.var_monomial(i, d): a for i, a in enumerate(coeffs)})
