"""Load, validate and write the CSV input corpus.

The corpus is six UTF-8 CSV files with fixed headers living in one
directory; a small TOML config names that directory together with the
observation window and the citation census date.
"""

from __future__ import annotations

import csv
import datetime as dt
import logging
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .errors import (
    ConfigError,
    DanglingReference,
    DataError,
    DuplicateKey,
    MissingFile,
    SchemaError,
)
from .model import (
    Authorship,
    Dataset,
    Field,
    Publication,
    Researcher,
    Territory,
    University,
    WeightingScheme,
)

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

log = logging.getLogger(__name__)

HEADERS: dict[str, tuple[str, ...]] = {
    "taxonomy": ("sds_code", "sds_name", "uda_code", "uda_name", "weighting_scheme"),
    "territories": ("province_code", "province_name", "region_code", "region_name", "macro_area"),
    "universities": ("university_id", "province_code"),
    "professors": ("researcher_id", "sds_code", "university_id", "years_active"),
    "publications": ("pub_id", "year", "citations", "categories"),
    "authorships": ("pub_id", "position", "researcher_id", "affiliation_id"),
}
CATEGORY_SEP = "|"


@dataclass(frozen=True)
class DatasetPaths:
    taxonomy: Path
    territories: Path
    universities: Path
    professors: Path
    publications: Path
    authorships: Path

    @classmethod
    def from_dir(cls, directory: str | Path) -> DatasetPaths:
        d = Path(directory)
        return cls(**{name: d / f"{name}.csv" for name in HEADERS})

    def items(self) -> list[tuple[str, Path]]:
        return [(name, getattr(self, name)) for name in HEADERS]


@dataclass(frozen=True)
class Config:
    data_dir: Path
    window: tuple[int, int]
    census_date: dt.date | None = None
    weights_path: Path | None = None
    round_ties: bool = False
    source: Path | None = None

    @property
    def paths(self) -> DatasetPaths:
        return DatasetPaths.from_dir(self.data_dir)


_CONFIG_KEYS = {"data_dir", "window", "census_date", "weights", "round_ties"}


def load_config(path: str | Path) -> Config:
    """Parse a ``dataset.toml`` file. Relative paths resolve against its directory."""
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from None

    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    if "data_dir" not in raw or "window" not in raw:
        raise ConfigError(f"{path}: 'data_dir' and 'window' are required")

    base = path.parent
    window = raw["window"]
    if (
        not isinstance(window, list)
        or len(window) != 2
        or not all(isinstance(y, int) for y in window)
        or window[0] > window[1]
    ):
        raise ConfigError(f"{path}: window must be [start_year, end_year]")

    census = raw.get("census_date")
    if isinstance(census, str):
        try:
            census = dt.date.fromisoformat(census)
        except ValueError:
            raise ConfigError(f"{path}: bad census_date {census!r}") from None
    elif census is not None and not isinstance(census, dt.date):
        raise ConfigError(f"{path}: bad census_date {census!r}")

    weights = raw.get("weights")
    return Config(
        data_dir=(base / raw["data_dir"]).resolve(),
        window=(window[0], window[1]),
        census_date=census,
        weights_path=(base / weights).resolve() if weights else None,
        round_ties=bool(raw.get("round_ties", False)),
        source=path.resolve(),
    )


def write_config(path: str | Path, data_dir: str, window: tuple[int, int],
                 census_date: dt.date | None = None) -> None:
    lines = [
        f'data_dir = "{data_dir}"',
        f"window = [{window[0]}, {window[1]}]",
    ]
    if census_date is not None:
        lines.append(f"census_date = {census_date.isoformat()}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class LoadReport:
    """Outcome of :func:`inspect_dataset`: row counts, problems, and the
    dataset itself when no problem was found."""

    counts: dict[str, int] = field(default_factory=dict)
    problems: list[DataError] = field(default_factory=list)
    dataset: Dataset | None = None

    @property
    def ok(self) -> bool:
        return not self.problems


class _Loader:
    def __init__(self, paths: DatasetPaths, window: tuple[int, int], census_date):
        self.paths = paths
        self.window = window
        self.census_date = census_date
        self.report = LoadReport()
        self.broken: set[str] = set()
        # keys of rows rejected for bad values; references to them are not re-reported
        self.rejected: dict[str, set[str]] = defaultdict(set)

    def problem(self, err: DataError) -> None:
        self.report.problems.append(err)

    def rows(self, name: str) -> Iterator[tuple[int, dict[str, str]]]:
        path = getattr(self.paths, name)
        fname = path.name
        header = HEADERS[name]
        count = 0
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            first = next(reader, None)
            if first is None or tuple(c.strip() for c in first) != header:
                self.broken.add(name)
                self.problem(SchemaError(
                    f"header must be {','.join(header)}, got {','.join(first or [])}",
                    fname, 1,
                ))
                self.report.counts[name] = 0
                return
            # row numbers are 1-based with the header on row 1
            for rowno, rec in enumerate(reader, start=2):
                if not rec:
                    continue
                count += 1
                if len(rec) != len(header):
                    self.problem(SchemaError(
                        f"expected {len(header)} columns, got {len(rec)}", fname, rowno))
                    continue
                yield rowno, {k: v.strip() for k, v in zip(header, rec)}
        self.report.counts[name] = count

    def run(self) -> LoadReport:
        missing = [(n, p) for n, p in self.paths.items() if not p.is_file()]
        for name, p in missing:
            self.problem(MissingFile(f"missing input file {p}", p.name))
        if missing:
            return self.report

        taxonomy = self._taxonomy()
        territories = self._territories()
        universities = self._universities(territories)
        researchers = self._researchers(taxonomy, universities)
        pubs = self._publications()
        bylines = self._authorships(pubs, researchers)

        publications: dict[str, Publication] = {}
        for pub_id, (rowno, year, cites, cats) in pubs.items():
            entries = sorted(bylines.get(pub_id, ()), key=lambda a: a.position)
            positions = [a.position for a in entries]
            if pub_id in self.rejected["bylines"]:
                continue
            if not entries or positions != list(range(1, len(entries) + 1)):
                msg = "empty byline" if not entries else f"byline positions {positions} not 1..n"
                self.problem(SchemaError(f"publication {pub_id!r}: {msg}", "publications.csv", rowno))
                continue
            publications[pub_id] = Publication(pub_id, year, cites, cats, tuple(entries))

        if self.report.problems:
            return self.report
        self.report.dataset = Dataset(
            taxonomy=taxonomy,
            territories=territories,
            universities=universities,
            researchers=researchers,
            publications=publications,
            window=self.window,
            census_date=self.census_date,
        )
        return self.report

    def _taxonomy(self) -> dict[str, Field]:
        out: dict[str, Field] = {}
        uda_names: dict[str, str] = {}
        for rowno, r in self.rows("taxonomy"):
            code = r["sds_code"]
            if not code or not r["uda_code"]:
                self.problem(SchemaError("empty sds_code or uda_code", "taxonomy.csv", rowno))
                continue
            if code in out:
                self.problem(DuplicateKey("sds", code, "taxonomy.csv", rowno))
                continue
            try:
                scheme = WeightingScheme(r["weighting_scheme"].lower())
            except ValueError:
                self.problem(SchemaError(
                    f"weighting_scheme must be alphabetical|byline, got {r['weighting_scheme']!r}",
                    "taxonomy.csv", rowno))
                continue
            prev = uda_names.setdefault(r["uda_code"], r["uda_name"])
            if prev != r["uda_name"]:
                self.problem(SchemaError(
                    f"uda {r['uda_code']!r} named both {prev!r} and {r['uda_name']!r}",
                    "taxonomy.csv", rowno))
            out[code] = Field(code, r["sds_name"], r["uda_code"], r["uda_name"], scheme)
        return out

    def _territories(self) -> dict[str, Territory]:
        out: dict[str, Territory] = {}
        region_names: dict[str, str] = {}
        for rowno, r in self.rows("territories"):
            code = r["province_code"]
            if not code or not r["region_code"]:
                self.problem(SchemaError("empty province_code or region_code", "territories.csv", rowno))
                continue
            if code in out:
                self.problem(DuplicateKey("province", code, "territories.csv", rowno))
                continue
            prev = region_names.setdefault(r["region_code"], r["region_name"])
            if prev != r["region_name"]:
                self.problem(SchemaError(
                    f"region {r['region_code']!r} named both {prev!r} and {r['region_name']!r}",
                    "territories.csv", rowno))
            out[code] = Territory(code, r["province_name"], r["region_code"],
                                  r["region_name"], r["macro_area"])
        return out

    def _universities(self, territories) -> dict[str, University]:
        out: dict[str, University] = {}
        for rowno, r in self.rows("universities"):
            uid = r["university_id"]
            if not uid:
                self.problem(SchemaError("empty university_id", "universities.csv", rowno))
                continue
            if uid in out:
                self.problem(DuplicateKey("university", uid, "universities.csv", rowno))
                continue
            prov = r["province_code"]
            if prov not in territories and "territories" not in self.broken:
                self.problem(DanglingReference("province", prov, "universities.csv", rowno))
                continue
            out[uid] = University(uid, prov)
        return out

    def _researchers(self, taxonomy, universities) -> dict[str, Researcher]:
        out: dict[str, Researcher] = {}
        span = self.window[1] - self.window[0] + 1
        for rowno, r in self.rows("professors"):
            rid = r["researcher_id"]
            if not rid:
                self.problem(SchemaError("empty researcher_id", "professors.csv", rowno))
                continue
            if rid in out:
                self.problem(DuplicateKey("researcher", rid, "professors.csv", rowno))
                continue
            ok = True
            if r["sds_code"] not in taxonomy and "taxonomy" not in self.broken:
                self.problem(DanglingReference("sds", r["sds_code"], "professors.csv", rowno))
                ok = False
            if r["university_id"] not in universities and "universities" not in self.broken:
                self.problem(DanglingReference("university", r["university_id"],
                                               "professors.csv", rowno))
                ok = False
            years = span
            if r["years_active"]:
                try:
                    years = int(r["years_active"])
                except ValueError:
                    years = 0
                if not 1 <= years <= span:
                    self.problem(SchemaError(
                        f"years_active must be an integer in 1..{span}, got {r['years_active']!r}",
                        "professors.csv", rowno))
                    ok = False
            if ok:
                out[rid] = Researcher(rid, r["sds_code"], r["university_id"], years)
            else:
                self.rejected["professors"].add(rid)
        return out

    def _publications(self) -> dict[str, tuple[int, int, int, tuple[str, ...]]]:
        out: dict[str, tuple[int, int, int, tuple[str, ...]]] = {}
        lo, hi = self.window
        for rowno, r in self.rows("publications"):
            pid = r["pub_id"]
            if not pid:
                self.problem(SchemaError("empty pub_id", "publications.csv", rowno))
                continue
            if pid in out:
                self.problem(DuplicateKey("publication", pid, "publications.csv", rowno))
                continue
            self.rejected["publications"].add(pid)
            try:
                year = int(r["year"])
                cites = int(r["citations"])
            except ValueError:
                self.problem(SchemaError("year and citations must be integers",
                                         "publications.csv", rowno))
                continue
            if not lo <= year <= hi:
                self.problem(SchemaError(f"year {year} outside window {lo}-{hi}",
                                         "publications.csv", rowno))
                continue
            if cites < 0:
                self.problem(SchemaError(f"negative citations {cites}", "publications.csv", rowno))
                continue
            cats = tuple(sorted({c.strip() for c in r["categories"].split(CATEGORY_SEP) if c.strip()}))
            if not cats:
                self.problem(SchemaError("no subject category", "publications.csv", rowno))
                continue
            self.rejected["publications"].discard(pid)
            out[pid] = (rowno, year, cites, cats)
        return out

    def _authorships(self, pubs, researchers) -> dict[str, list[Authorship]]:
        out: dict[str, list[Authorship]] = defaultdict(list)
        seen_pos: set[tuple[str, int]] = set()
        seen_author: set[tuple[str, str]] = set()
        for rowno, r in self.rows("authorships"):
            pid = r["pub_id"]
            if pid not in pubs:
                if "publications" not in self.broken and pid not in self.rejected["publications"]:
                    self.problem(DanglingReference("publication", pid, "authorships.csv", rowno))
                continue
            entry = self._authorship(pid, rowno, r, researchers, seen_pos, seen_author)
            if entry is None:
                # the byline is now incomplete; that follows from this row's problem
                self.rejected["bylines"].add(pid)
            else:
                out[pid].append(entry)
        return out

    def _authorship(self, pid, rowno, r, researchers, seen_pos, seen_author) -> Authorship | None:
        try:
            pos = int(r["position"])
        except ValueError:
            pos = 0
        if pos < 1:
            self.problem(SchemaError(f"position must be a positive integer, got {r['position']!r}",
                                     "authorships.csv", rowno))
            return None
        if not r["affiliation_id"]:
            self.problem(SchemaError("empty affiliation_id", "authorships.csv", rowno))
            return None
        rid = r["researcher_id"] or None
        if rid is not None and rid not in researchers:
            if "professors" not in self.broken and rid not in self.rejected["professors"]:
                self.problem(DanglingReference("researcher", rid, "authorships.csv", rowno))
            return None
        if (pid, pos) in seen_pos:
            self.problem(DuplicateKey("byline position", f"{pid}#{pos}", "authorships.csv", rowno))
            return None
        if rid is not None:
            if (pid, rid) in seen_author:
                self.problem(DuplicateKey("authorship", f"{pid}/{rid}", "authorships.csv", rowno))
                return None
            seen_author.add((pid, rid))
        seen_pos.add((pid, pos))
        return Authorship(pos, rid, r["affiliation_id"])


def inspect_dataset(paths: DatasetPaths, window: tuple[int, int],
                    census_date: dt.date | None = None) -> LoadReport:
    """Load every file and collect all problems instead of stopping at the first."""
    return _Loader(paths, window, census_date).run()


def load_dataset(paths: DatasetPaths | Config, window: tuple[int, int] | None = None,
                 census_date: dt.date | None = None) -> Dataset:
    """Load and validate a corpus; raises the first problem found.

    The raised error carries every problem found in ``err.problems``.
    """
    if isinstance(paths, Config):
        window = paths.window if window is None else window
        census_date = paths.census_date if census_date is None else census_date
        paths = paths.paths
    if window is None:
        raise ConfigError("an observation window is required")
    report = inspect_dataset(paths, window, census_date)
    if report.problems:
        err = report.problems[0]
        err.problems = report.problems
        raise err
    log.info("loaded %s", ", ".join(f"{k}={v}" for k, v in report.counts.items()))
    assert report.dataset is not None
    return report.dataset


def _writer(path: Path, name: str):
    fh = open(path / f"{name}.csv", "w", newline="", encoding="utf-8")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(HEADERS[name])
    return fh, w


def write_dataset(ds: Dataset, directory: str | Path) -> DatasetPaths:
    """Write ``ds`` as the six CSV files; reloading them yields an equal Dataset."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)

    fh, w = _writer(d, "taxonomy")
    with fh:
        for f in ds.taxonomy.values():
            w.writerow((f.sds_code, f.sds_name, f.uda_code, f.uda_name, f.weighting_scheme.value))
    fh, w = _writer(d, "territories")
    with fh:
        for t in ds.territories.values():
            w.writerow((t.province_code, t.province_name, t.region_code, t.region_name, t.macro_area))
    fh, w = _writer(d, "universities")
    with fh:
        for u in ds.universities.values():
            w.writerow((u.university_id, u.province_code))
    fh, w = _writer(d, "professors")
    with fh:
        for r in ds.researchers.values():
            w.writerow((r.researcher_id, r.sds_code, r.university_id, r.years_active))
    fh, w = _writer(d, "publications")
    with fh:
        for p in ds.publications.values():
            w.writerow((p.pub_id, p.year, p.citations, CATEGORY_SEP.join(p.categories)))
    fh, w = _writer(d, "authorships")
    with fh:
        for p in ds.publications.values():
            for a in p.byline:
                w.writerow((p.pub_id, a.position, a.researcher_id or "", a.affiliation_id))
    return DatasetPaths.from_dir(d)
