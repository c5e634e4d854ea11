import csv
from pathlib import Path

import pytest

from fssrank.ingest import HEADERS, load_config, load_dataset, write_config
from fssrank.model import (
    Authorship,
    Dataset,
    Field,
    Publication,
    Researcher,
    Territory,
    University,
    WeightingScheme,
)
from fssrank.synthetic import generate

WINDOW = (2008, 2012)

# one researcher, one publication, one province/region chain
MINIMAL = {
    "taxonomy": [("CHIM/01", "Analytical chemistry", "3", "Chemistry", "alphabetical")],
    "territories": [("ITF33", "Napoli", "ITF3", "Campania", "South & islands")],
    "universities": [("UNINA", "ITF33")],
    "professors": [("R1", "CHIM/01", "UNINA", "")],
    "publications": [("P1", "2010", "4", "Chemistry, Analytical")],
    "authorships": [("P1", "1", "R1", "UNINA"), ("P1", "2", "", "EXT1")],
}


def write_tables(directory, tables=None, **overrides):
    """Write the six CSV files plus dataset.toml; returns the config path."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    tables = {**(tables or MINIMAL), **overrides}
    for name, header in HEADERS.items():
        with open(d / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(tables[name])
    write_config(d / "dataset.toml", ".", WINDOW)
    return d / "dataset.toml"


def build_dataset(fields, researchers, pubs, territories=None, universities=None, window=WINDOW):
    """In-memory Dataset.

    fields: {sds: (uda, scheme)}; researchers: [(rid, sds, uni, years)];
    pubs: [(pid, year, cites, cats, [(rid_or_None, affiliation), ...])];
    universities: {uni: province}; territories: {province: region}.
    """
    universities = universities or {r[2]: "P1" for r in researchers}
    territories = territories or {p: "R1" for p in set(universities.values())}
    return Dataset(
        taxonomy={s: Field(s, s, u, u, WeightingScheme(sc)) for s, (u, sc) in fields.items()},
        territories={p: Territory(p, p, r, r) for p, r in territories.items()},
        universities={u: University(u, p) for u, p in universities.items()},
        researchers={r[0]: Researcher(*r) for r in researchers},
        publications={
            pid: Publication(pid, year, cites, tuple(sorted(cats)),
                             tuple(Authorship(i + 1, rid, aff) for i, (rid, aff) in enumerate(byline)))
            for pid, year, cites, cats, byline in pubs
        },
        window=window,
    )


@pytest.fixture
def minimal_config(tmp_path):
    return write_tables(tmp_path / "minimal")


@pytest.fixture(scope="session")
def tiny_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("tiny")
    manifest = generate(d, seed=42)
    return d, manifest


@pytest.fixture(scope="session")
def tiny_dataset(tiny_dir):
    d, _ = tiny_dir
    return load_dataset(load_config(d / "dataset.toml"))


# acceptance criteria report, printed in the terminal summary
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
