import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasshodge.algebra import QQ, PrimeField
from grasshodge.grassmann import GrassmannianSpec
from grasshodge.presets import (
    PRESETS,
    JobFileError,
    generate_generic_section,
    load_preset,
    parse_job,
    parse_section,
    preset_text,
)

GM5 = ("x[1,2]^2 + 2*x[1,3]^2 + 4*x[1,4]^2 + 5*x[1,5]^2 + 6*x[2,3]^2 + 11*x[2,4]^2"
       " + 75*x[2,5]^2 + 13*x[3,4]^2 + 43*x[3,5]^2 + 8*x[4,5]^2")


@pytest.mark.parametrize("name, k, n, count", [("gm5", 2, 5, 1), ("cy-gr27", 2, 7, 7), ("gm4-z21", 2, 5, 2)])
def test_presets_load(name, k, n, count):
    job = load_preset(name)
    assert (job.spec.k, job.spec.n) == (k, n)
    assert len(job.section_polys()) == count


def test_unknown_preset():
    with pytest.raises(JobFileError, match="choose from"):
        preset_text("nope")
    assert set(PRESETS) == {"gm5", "cy-gr27", "gm4-z21"}


def test_gm5_preset_is_the_fermat_quadric(gr25):
    f = load_preset("gm5").section_polys()[0]
    assert len(f) == 10 and f.bidegree == (0, 2)
    assert f == generate_generic_section(gr25, 2, "paper")
    assert f == load_preset("gm5").ring().parse(GM5)


def test_z21_sections():
    f1, f2 = load_preset("gm4-z21").section_polys()
    assert str(f1) == "x[1,2] + x[3,4]"
    assert f2 == load_preset("gm5").section_polys()[0]


def test_section_files(tmp_path, gr25):
    p = tmp_path / "f.txt"
    p.write_text("# the GM quadric\n" + GM5.replace(" + 13", "\n + 13") + "\n")
    assert len(parse_section(p, gr25)) == 10
    p.write_text("x[1,2] + x[3,4]\n")
    assert parse_section(p, gr25, PrimeField()).bidegree == (0, 1)
    p.write_text("x[2,1]\n")
    with pytest.raises(JobFileError, match="increasing"):
        parse_section(p, gr25)
    p.write_text("x[1,2]^2 + x[3,4]\n")
    with pytest.raises(JobFileError, match="degrees 1 and 2"):
        parse_section(p, gr25)
    p.write_text("x[1,6]\n")
    with pytest.raises(JobFileError):
        parse_section(p, gr25)
    p.write_text("# nothing\n")
    with pytest.raises(JobFileError, match="empty"):
        parse_section(p, gr25)


def test_job_file_parsing():
    job = parse_job("grassmannian 2 4\nfiber 1\nplucker\nsection x[1,2]\ngenerator y[1]*x[3,4]\n")
    ideal = job.ideal(QQ)
    assert ideal.grading == "bigraded" and len(ideal.generators) == 3
    assert ideal.ring.names[-1] == "y[1]"
    with pytest.raises(JobFileError, match="unknown directive"):
        parse_job("grassmannian 2 4\nbogus 1\n")
    with pytest.raises(JobFileError, match="missing"):
        parse_job("section x[1,2]\n")
    with pytest.raises(JobFileError, match="line 1"):
        parse_job("grassmannian 2\n")
    with pytest.raises(JobFileError, match="generator"):
        parse_job("grassmannian 2 4\ngenerator x[[\n").ideal()


def test_generic_section_rules(gr25):
    with pytest.raises(ValueError):
        generate_generic_section(gr25, 0, 1)
    with pytest.raises(ValueError):
        generate_generic_section(GrassmannianSpec(2, 6), 2, "paper")


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([GrassmannianSpec(2, 4), GrassmannianSpec(2, 5), GrassmannianSpec(3, 6)]),
       st.integers(1, 4), st.integers(0, 10 ** 6))
def test_generic_sections_are_reproducible(spec, d, seed):
    f = generate_generic_section(spec, d, seed)
    assert f == generate_generic_section(spec, d, seed)
    coeffs = list(f.terms.values())
    assert len(coeffs) == spec.num_plucker == len(set(coeffs))
    assert all(c > 0 for c in coeffs) and f.bidegree == (0, d)
