import pytest

from grasshodge.algebra import QQ, PrimeField
from grasshodge.cayley import cayley_from_sections, cayley_presentation
from grasshodge.grassmann import GrassmannianSpec
from grasshodge.griffiths import HypersurfaceSpec, griffiths_ideal
from grasshodge.groebner import groebner_basis
from grasshodge.presets import load_preset


def _hypersurface(field):
    job = load_preset("gm5")
    f = job.section_polys(field)[0]
    return HypersurfaceSpec(job.spec, 2, f)


@pytest.fixture(scope="session")
def gm5_spec():
    return _hypersurface(QQ)


@pytest.fixture(scope="session")
def gm5_pres(gm5_spec):
    return griffiths_ideal(gm5_spec)


@pytest.fixture(scope="session")
def gm5_gb(gm5_pres):
    return groebner_basis(gm5_pres.ideal)


@pytest.fixture(scope="session")
def z21_spec():
    job = load_preset("gm4-z21")
    return cayley_from_sections(job.spec, job.section_polys(QQ))


@pytest.fixture(scope="session")
def z21_pres(z21_spec):
    return cayley_presentation(z21_spec)


@pytest.fixture(scope="session")
def z21_gb(z21_pres):
    return groebner_basis(z21_pres.ideal, degree_cap=2)


@pytest.fixture(scope="session")
def cy_spec_modp():
    job = load_preset("cy-gr27")
    return cayley_from_sections(job.spec, job.section_polys(PrimeField()))


@pytest.fixture(scope="session")
def cy_pres_modp(cy_spec_modp):
    return cayley_presentation(cy_spec_modp)


@pytest.fixture(scope="session")
def gr25():
    return GrassmannianSpec(2, 5)


# -- acceptance report ------------------------------------------------------------

_verdicts: dict[int, list[bool]] = {}
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    num, title = mark.args
    _titles[num] = title
    _verdicts.setdefault(num, []).append(rep.passed)


def pytest_terminal_summary(terminalreporter):
    if not _verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_verdicts):
        ok = all(_verdicts[num])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {num:>2}: {_titles[num]}")
