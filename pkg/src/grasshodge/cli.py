"""Command line front end.

Exit codes: 0 success, 2 parse or validation error, 3 inapplicable regime,
4 incomplete Gröbner basis.
"""

from __future__ import annotations

import functools
import json
import os
import sys
import time

import click

from .algebra import FieldError, PolynomialSyntaxError, field_from_spec
from .cayley import (
    bigraded_table,
    cayley_from_sections,
    cayley_presentation,
    default_window,
    hodge_from_cayley,
    render_table,
)
from .fk3 import fk3_numerology, fk3_search
from .grassmann import GrassmannianSpec, hjj_table, plucker_relations
from .griffiths import HypersurfaceSpec, InapplicableRegimeError, griffiths_ideal, hilbert_poincare, hodge_from_griffiths
from .groebner import IncompleteBasisError, groebner_basis, is_finite_dimensional, slice_table
from .oracle import certified_slice_dim, slice_dim_oracle
from .presets import JobFileError, generate_generic_section, load_job, load_preset, parse_section

SCHEMA_VERSION = 1
FIELD_ENV = "GRASSHODGE_FIELD"

EXIT_PARSE = 2
EXIT_INAPPLICABLE = 3
EXIT_INCOMPLETE = 4


def _fail(code: int, msg: str):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InapplicableRegimeError as exc:
            _fail(EXIT_INAPPLICABLE, str(exc))
        except IncompleteBasisError as exc:
            _fail(EXIT_INCOMPLETE, str(exc))
        except (JobFileError, PolynomialSyntaxError, FieldError, ValueError, KeyError, OSError) as exc:
            _fail(EXIT_PARSE, str(exc))

    return wrapper


def _field(name):
    return field_from_spec(name or os.environ.get(FIELD_ENV))


def _emit(payload: dict):
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    click.echo(json.dumps(payload, indent=2, sort_keys=False))


def _range(text: str) -> range:
    lo, _, hi = text.partition(":")
    return range(int(lo), int(hi) + 1)


def _parse_window(text: str) -> tuple[range, range]:
    """``a0:a1,b0:b1`` (inclusive bounds)."""
    try:
        ra, rb = text.split(",")
        return _range(ra), _range(rb)
    except ValueError as exc:
        raise ValueError(f"bad window {text!r}; expected a0:a1,b0:b1") from exc


def _grassmannian(k, n, job=None) -> GrassmannianSpec:
    if job is not None:
        if (k is not None and k != job.spec.k) or (n is not None and n != job.spec.n):
            raise ValueError(f"preset is for Gr({job.spec.k},{job.spec.n})")
        return job.spec
    if k is None or n is None:
        raise ValueError("--k and --n are required")
    return GrassmannianSpec(k, n)


field_option = click.option("--field", "field_name", default=None,
                            help=f"q (rationals) or fp[:P]; default from ${FIELD_ENV}, else q.")
json_option = click.option("--json", "as_json", is_flag=True, help="Emit JSON.")


@click.group()
def main():
    """Griffiths rings of hypersurfaces and complete intersections in Grassmannians."""


@main.command()
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, required=True)
@json_option
@guarded
def plucker(k, n, as_json):
    """Quadrics generating the Plücker ideal of Gr(k, n)."""
    spec = GrassmannianSpec(k, n)
    t = time.perf_counter()
    rels = plucker_relations(spec)
    elapsed = time.perf_counter() - t
    if as_json:
        _emit({"k": k, "n": n, "count": len(rels), "relations": [str(r) for r in rels], "seconds": elapsed})
        return
    click.echo(f"# {len(rels)} Plücker relations for Gr({k},{n})")
    for r in rels:
        click.echo(str(r))


@main.command()
@click.option("--k", type=int, required=True)
@click.option("--n", type=int, required=True)
@json_option
@guarded
def hjj(k, n, as_json):
    """Hodge numbers h^{j,j} of Gr(k, n) and the jumps I_dim(j)."""
    tab = hjj_table(GrassmannianSpec(k, n))
    if as_json:
        _emit(tab.to_json())
        return
    data = tab.to_json()
    click.echo("j     " + " ".join(f"{j:>4}" for j in range(data["N"] + 1)))
    click.echo("h^jj  " + " ".join(f"{v:>4}" for v in data["hjj"]))
    click.echo("I_dim " + " ".join(f"{v:>4}" for v in data["I_dim"]))


def _render_hodge(report) -> str:
    lines = []
    for e in report.entries:
        a, b = e.hodge
        lines.append(f"p={e.p:<2} slice={e.slice_dim:<6} correction={e.correction:<3} "
                     f"h^{{{a},{b}}}_van={e.h:<6} [{e.status}]")
    return "\n".join(lines)


@main.command()
@click.option("--k", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--d", type=int, default=None, help="Degree of the section.")
@click.option("--f", "section", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--preset", default=None, help="Named input, e.g. gm5.")
@click.option("--seed", default=None, help="Generate a Fermat-type section from this seed ('paper' or an integer).")
@click.option("--hodge", is_flag=True, help="Also map slices to Hodge numbers.")
@click.option("--window", default=None, help="Degree window e0:e1 for infinite-dimensional rings.")
@field_option
@json_option
@guarded
def griffiths(k, n, d, section, preset, seed, hodge, window, field_name, as_json):
    """Griffiths ring of a hypersurface section of Gr(k, n)."""
    fld = _field(field_name)
    sources = [s for s in (section, preset, seed) if s is not None]
    if len(sources) != 1:
        raise ValueError("give exactly one of --f, --preset, --seed")
    if preset is not None:
        job = load_preset(preset)
        if len(job.sections) != 1:
            raise ValueError(f"preset {preset} is not a hypersurface")
        spec = _grassmannian(k, n, job)
        f = job.section_polys(fld)[0]
    else:
        spec = _grassmannian(k, n)
        if seed is not None:
            if d is None:
                raise ValueError("--seed needs --d")
            f = generate_generic_section(spec, d, seed if seed == "paper" else int(seed), fld)
        else:
            f = parse_section(section, spec, fld)
    deg = f.bidegree[1]
    if d is not None and d != deg:
        raise ValueError(f"section has degree {deg}, not {d}")
    hs = HypersurfaceSpec(spec, deg, f)
    pres = griffiths_ideal(hs)
    t = time.perf_counter()
    gb = groebner_basis(pres.ideal)
    smooth = is_finite_dimensional(gb)
    win = _range(window) if window else None
    if win is None and not smooth:
        win = range(0, max(2 * spec.N, 1 + (spec.N + 1) * deg - spec.n))
    table = hilbert_poincare(pres, win, gb=gb)
    report = None
    if hodge:
        need = [(p + 1) * deg - spec.n for p in range(spec.N)]
        missing = [e for e in need if e >= 0 and e not in table.values]
        if missing:
            if smooth:
                for e in missing:
                    table.values[e] = 0
            else:
                extra = slice_table(gb, missing)
                table.values.update(extra.values)
        report = hodge_from_griffiths(hs, table)
    elapsed = time.perf_counter() - t
    if as_json:
        payload = {
            "k": spec.k, "n": spec.n, "d": deg, "field": fld.name, "seed": seed, "preset": preset,
            "presentation": pres.summary(), "basis_size": len(gb.polys), "degree_cap": gb.degree_cap,
            "finite_dimensional": smooth, "table": table.to_json(), "seconds": elapsed,
        }
        if report is not None:
            payload["hodge"] = report.to_json()
        _emit(payload)
        return
    s = pres.summary()
    click.echo(f"Gr({spec.k},{spec.n}), d={deg}, field {fld.name}: {s['plucker_relations']} Plücker + 1 + "
               f"{s['derivation_images']} derivation images ({len(s['zero_images'])} zero)")
    series = " + ".join(f"{v}t^{e}" for e, v in sorted(table.values.items()) if v)
    click.echo(f"Hilbert-Poincaré: {series}")
    click.echo(f"finite dimensional (smooth): {'yes' if smooth else 'no'}")
    if report is not None:
        click.echo(_render_hodge(report))


def _render_cayley_hodge(report) -> str:
    lines = []
    for e in report.entries:
        a, b = e.hodge
        lines.append(f"p={e.p:<2} U_{{{e.p},{report.m}}}={e.slice_dim:<6} correction={e.correction:<3} "
                     f"residual={e.residual:<3} h^{{{a},{b}}}_van={e.h:<6} [{e.status}]")
    return "\n".join(lines)


@main.command()
@click.option("--k", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--f", "sections", type=click.Path(exists=True, dir_okay=False), multiple=True)
@click.option("--preset", default=None, help="Named input, e.g. cy-gr27 or gm4-z21.")
@click.option("--window", default=None, help="a0:a1,b0:b1 (inclusive).")
@click.option("--hodge", is_flag=True)
@field_option
@json_option
@guarded
def cayley(k, n, sections, preset, window, hodge, field_name, as_json):
    """Bigraded Griffiths ring of a complete intersection in Gr(k, n)."""
    fld = _field(field_name)
    if bool(sections) == bool(preset):
        raise ValueError("give --f (one or more) or --preset")
    if preset is not None:
        job = load_preset(preset)
        spec = _grassmannian(k, n, job)
        polys = job.section_polys(fld)
    else:
        spec = _grassmannian(k, n)
        polys = [parse_section(p, spec, fld) for p in sections]
    ci = cayley_from_sections(spec, polys)
    pres = cayley_presentation(ci)
    win = _parse_window(window) if window else default_window(ci)
    t = time.perf_counter()
    gb = groebner_basis(pres.ideal, degree_cap=2)
    table = bigraded_table(pres, win, gb=gb)
    report = None
    if hodge:
        cells = [(p, ci.m) for p in range(ci.dim + 1) if (p, ci.m) not in table.values]
        if cells:
            table.values.update(slice_table(gb, cells).values)
        report = hodge_from_cayley(ci, table)
    elapsed = time.perf_counter() - t
    if as_json:
        payload = {
            "k": spec.k, "n": spec.n, "degrees": list(ci.degrees), "m": ci.m, "field": fld.name,
            "preset": preset, "presentation": pres.summary(), "basis_size": len(gb.polys),
            "degree_cap": gb.degree_cap, "table": table.to_json(), "seconds": elapsed,
        }
        if report is not None:
            payload["hodge"] = report.to_json()
        _emit(payload)
        return
    click.echo(f"Gr({spec.k},{spec.n}), degrees {ci.degrees}, m={ci.m}, field {fld.name}")
    click.echo(render_table(table))
    if report is not None:
        click.echo(_render_cayley_hodge(report))


def _parse_degree(text: str):
    if "," in text:
        a, b = text.split(",")
        return (int(a), int(b))
    return int(text)


@main.command()
@click.option("--ideal", "ideal_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--window", "--degrees", "degrees", default="0:6",
              help="e0:e1, or a0:a1,b0:b1 for fibered rings (inclusive).")
@field_option
@json_option
@guarded
def hilbert(ideal_file, degrees, field_name, as_json):
    """Slice dimensions of S / I from a Gröbner basis."""
    fld = _field(field_name)
    job = load_job(ideal_file)
    ideal = job.ideal(fld)
    if "," in degrees:
        ra, rb = _parse_window(degrees)
        cells = [(a, b) for a in ra for b in rb]
    else:
        cells = list(_range(degrees))
    gb = groebner_basis(ideal, degree_cap=2)
    table = slice_table(gb, cells)
    if as_json:
        _emit({"field": fld.name, "basis_size": len(gb.polys), "table": table.to_json()})
        return
    if cells and isinstance(cells[0], tuple):
        table.window = ((ra.start, ra.stop - 1), (rb.start, rb.stop - 1))
        click.echo(render_table(table))
    else:
        for e in cells:
            click.echo(f"{e}: {table[e]}")


@main.command()
@click.option("--ideal", "ideal_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--bidegree", "degree", required=True, help="a,b (or a single degree).")
@click.option("--method", type=click.Choice(["auto", "direct", "recursive", "lifted", "certified"]),
              default="auto", help="certified: rational value proved from a modular image.")
@click.option("--compare", is_flag=True, help="Also compute the slice from a Gröbner basis.")
@field_option
@json_option
@guarded
def oracle(ideal_file, degree, method, compare, field_name, as_json):
    """Slice dimension by exact linear algebra, without Gröbner bases."""
    fld = _field(field_name)
    ideal = load_job(ideal_file).ideal(fld)
    deg = _parse_degree(degree)
    if isinstance(deg, int) and ideal.ring.is_bigraded:
        raise ValueError("fibered ring: pass a bidegree a,b")
    if method == "certified":
        if fld.characteristic:
            raise ValueError("--method certified works over QQ")
        cert = certified_slice_dim(ideal, deg)
        if cert.value is None:
            msg = f"uncertified: at most {cert.upper} ({cert.detail})"
            if as_json:
                _emit({"degree": list(cert.degree), "field": fld.name, "oracle": None,
                       "upper": cert.upper, "method": cert.method, "detail": cert.detail})
            else:
                click.echo(msg)
            return
        val = cert.value
    else:
        val = slice_dim_oracle(ideal, deg, method=method)
    out = {"degree": list(deg) if isinstance(deg, tuple) else deg, "field": fld.name, "oracle": val}
    if compare:
        gb = groebner_basis(ideal, degree_cap=2)
        out["groebner"] = slice_table(gb, [deg])[deg]
        out["agree"] = out["groebner"] == val
    if as_json:
        _emit(out)
        return
    click.echo(f"oracle: {val}")
    if compare:
        click.echo(f"groebner: {out['groebner']} ({'agree' if out['agree'] else 'DISAGREE'})")
    if compare and not out["agree"]:
        sys.exit(1)


@main.command()
@click.option("--k-max", type=int, required=True)
@click.option("--n-max", type=int, required=True)
@click.option("--c-max", type=int, required=True)
@click.option("--d-max", type=int, required=True)
@click.option("--relax-ordering", is_flag=True, help="Allow d_1 = d_2; such hits are tagged residual-dependent.")
@json_option
@guarded
def fk3(k_max, n_max, c_max, d_max, relax_ordering, as_json):
    """Search for complete intersections with K3-type numerology."""
    cands = fk3_search(k_max, n_max, c_max, d_max, relax_ordering)
    if as_json:
        _emit({"bounds": [k_max, n_max, c_max, d_max], "relax_ordering": relax_ordering,
               "candidates": [fk3_numerology(c).to_json() for c in cands]})
        return
    for c in cands:
        num = fk3_numerology(c)
        flag = "" if c.tag == "ordered" else f" [{c.tag}]"
        click.echo(f"{c}: dim {c.dim}, m {c.m}, T_{{s-1,m}}={num.slices.get(num.s - 1)}{flag}")


if __name__ == "__main__":  # pragma: no cover
    main()
