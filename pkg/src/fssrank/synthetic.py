"""Seeded generator of synthetic corpora shaped like a national census.

Output is the six input CSV files, a ``dataset.toml`` pointing at them and a
``manifest.json`` recording the parameters and the true counts. The same
seed and parameters always produce byte-identical files.

Citation counts are negative-binomial (Poisson with gamma-distributed rate)
so that they are skewed and contain zeros. A researcher's expected citations
scale with a lognormal talent factor and, optionally, a planted multiplier
for one (region, SDS) pair.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .ingest import HEADERS, write_config

UDA_PREFIXES = ("MAT", "FIS", "CHIM", "GEO", "BIO", "MED", "AGR", "ICAR", "ING")
UDA_NAMES = (
    "Mathematics and computer science",
    "Physics",
    "Chemistry",
    "Earth sciences",
    "Biology",
    "Medicine",
    "Agricultural and veterinary sciences",
    "Civil engineering",
    "Industrial and information engineering",
)
BYLINE_PREFIXES = frozenset({"BIO", "MED", "AGR"})
MACRO_AREAS = ("Northwest", "Northeast", "Center", "South & islands")


@dataclass(frozen=True)
class Planted:
    region_code: str
    sds_code: str
    factor: float = 2.0

    @classmethod
    def parse(cls, text: str) -> Planted:
        """``REGION:SDS[:FACTOR]``"""
        parts = text.split(":")
        if len(parts) not in (2, 3) or not all(parts[:2]):
            raise ValueError(f"planted effect must be REGION:SDS[:FACTOR], got {text!r}")
        return cls(parts[0], parts[1], float(parts[2]) if len(parts) == 3 else 2.0)


@dataclass(frozen=True)
class SyntheticParams:
    researchers: int = 100
    publications: int = 500
    regions: int = 3
    provinces_per_region: int = 2
    universities: int = 5
    # SDS count per UDA, one entry per UDA (at most nine)
    sds_per_uda: tuple[int, ...] = (2, 2)
    # which of the nine disciplines the entries above stand for; 0..n-1 when empty
    udas: tuple[int, ...] = ()
    # relative staff per UDA; equal when empty
    staff_per_uda: tuple[float, ...] = ()
    window: tuple[int, int] = (2008, 2012)
    census_date: str = "2014-05-31"
    unproductive_share: float = 0.12
    partial_years_share: float = 0.1
    blank_years_share: float = 0.05
    coauthors_mean: float = 0.8
    external_mean_alphabetical: float = 1.5
    external_mean_byline: float = 3.0
    external_same_university: float = 0.3
    multi_category_share: float = 0.2
    citation_rate: float = 6.0
    citation_dispersion: float = 1.5  # gamma shape of the per-paper rate
    talent_sigma: float = 0.5
    university_size_sigma: float = 0.4
    planted: tuple[Planted, ...] = ()

    def __post_init__(self) -> None:
        positive = ("researchers", "publications", "regions", "provinces_per_region", "universities")
        for name in positive:
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not 1 <= len(self.sds_per_uda) <= len(UDA_PREFIXES) or min(self.sds_per_uda) < 1:
            raise ValueError(f"sds_per_uda needs 1..{len(UDA_PREFIXES)} positive entries")
        if self.udas and (len(self.udas) != len(self.sds_per_uda)
                          or len(set(self.udas)) != len(self.udas)
                          or not all(0 <= u < len(UDA_PREFIXES) for u in self.udas)):
            raise ValueError("udas must be distinct discipline indices aligned with sds_per_uda")
        if self.staff_per_uda and len(self.staff_per_uda) != len(self.sds_per_uda):
            raise ValueError("staff_per_uda must align with sds_per_uda")
        if self.window[0] > self.window[1]:
            raise ValueError("window must be [start, end]")
        if self.researchers * (1 - self.unproductive_share) < 1:
            raise ValueError("need at least one productive researcher")
        for share in ("unproductive_share", "partial_years_share", "blank_years_share",
                      "external_same_university", "multi_category_share"):
            if not 0 <= getattr(self, share) <= 1:
                raise ValueError(f"{share} must be in [0, 1]")


PRESETS: dict[str, SyntheticParams] = {
    "tiny": SyntheticParams(udas=(0, 5)),
    "small": SyntheticParams(
        researchers=2000, publications=10000, regions=6, provinces_per_region=3,
        universities=14, sds_per_uda=(4, 3, 4, 3, 5, 8, 5, 3, 6),
    ),
    # totals of the Italian 2008-2012 hard-science population
    "paper": SyntheticParams(
        researchers=36450, publications=206433, regions=20, provinces_per_region=5,
        universities=86, sds_per_uda=(10, 8, 12, 12, 19, 50, 30, 9, 42),
        staff_per_uda=(3387, 2497, 3174, 1199, 5198, 10966, 3207, 1583, 5239),
    ),
}


class _Uniforms:
    """Sequential reader over a pre-drawn block of uniforms."""

    def __init__(self, rng: np.random.Generator, block: int = 1 << 16):
        self.rng = rng
        self.block = block
        self.buf: list[float] = []
        self.i = 0

    def __call__(self) -> float:
        if self.i >= len(self.buf):
            self.buf = self.rng.random(self.block).tolist()
            self.i = 0
        self.i += 1
        return self.buf[self.i - 1]


def _write(path: Path, name: str, rows) -> int:
    n = 0
    with open(path / f"{name}.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(HEADERS[name])
        for row in rows:
            w.writerow(row)
            n += 1
    return n


def generate(out_dir: str | Path, seed: int, params: SyntheticParams | None = None) -> dict:
    """Write a synthetic corpus into ``out_dir`` and return its manifest."""
    p = params or PRESETS["tiny"]
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    uni = _Uniforms(np.random.default_rng([seed, 1]))

    # taxonomy; categories are shared by neighbouring SDSs of one UDA
    taxonomy = []
    sds_uda: list[int] = []
    sds_home_cat: list[str] = []
    uda_cats: list[list[str]] = []
    disciplines = p.udas or tuple(range(len(p.sds_per_uda)))
    for u, n_sds in enumerate(p.sds_per_uda):
        d = disciplines[u]
        prefix = UDA_PREFIXES[d]
        scheme = "byline" if prefix in BYLINE_PREFIXES else "alphabetical"
        cats = [f"{prefix}-C{c + 1}" for c in range(max(1, (n_sds + 1) // 2))]
        uda_cats.append(cats)
        for j in range(n_sds):
            code = f"{prefix}/{j + 1:02d}"
            taxonomy.append((code, f"{UDA_NAMES[d]} field {j + 1}", str(d + 1), UDA_NAMES[d], scheme))
            sds_uda.append(u)
            sds_home_cat.append(cats[j % len(cats)])
    sds_codes = [t[0] for t in taxonomy]
    all_cats = [c for cats in uda_cats for c in cats]

    territories = []
    for r in range(p.regions):
        rcode = f"IT{r + 1:02d}"
        for q in range(p.provinces_per_region):
            territories.append((f"{rcode}{q + 1}", f"Province {r + 1}.{q + 1}", rcode,
                                f"Region {r + 1}", MACRO_AREAS[r % len(MACRO_AREAS)]))
    region_of_prov = {t[0]: t[2] for t in territories}

    # every region hosts at least one university when there are enough of them
    universities = []
    for i in range(p.universities):
        region = i % p.regions
        q = 0 if rng.random() < 0.6 else int(rng.integers(p.provinces_per_region))
        universities.append((f"U{i + 1:03d}", territories[region * p.provinces_per_region + q][0]))
    uni_size = rng.lognormal(0.0, p.university_size_sigma, p.universities)
    uni_size /= uni_size.sum()

    staff = np.asarray(p.staff_per_uda or [1.0] * len(p.sds_per_uda), dtype=float)
    sds_w = np.array([staff[sds_uda[s]] / p.sds_per_uda[sds_uda[s]] for s in range(len(sds_codes))])
    sds_w *= rng.uniform(0.5, 1.5, len(sds_codes))
    sds_w /= sds_w.sum()

    n_res = p.researchers
    L = p.window[1] - p.window[0] + 1
    res_sds = rng.choice(len(sds_codes), size=n_res, p=sds_w)
    res_uni = rng.choice(p.universities, size=n_res, p=uni_size)
    talent = rng.lognormal(0.0, p.talent_sigma, n_res)
    productive = rng.random(n_res) >= p.unproductive_share
    if not productive.any():
        productive[0] = True
    years = np.full(n_res, L)
    partial = rng.random(n_res) < p.partial_years_share
    years[partial] = rng.integers(1, L + 1, partial.sum())
    blank = (rng.random(n_res) < p.blank_years_share) & ~partial
    res_ids = [f"R{i + 1:06d}" for i in range(n_res)]
    res_region = [region_of_prov[universities[u][1]] for u in res_uni]

    planted_factor = np.ones(n_res)
    for pl in p.planted:
        hit = [i for i in range(n_res)
               if res_region[i] == pl.region_code and sds_codes[res_sds[i]] == pl.sds_code]
        planted_factor[hit] *= pl.factor

    prod_idx = np.flatnonzero(productive)
    by_uni_sds: dict[tuple[int, int], list[int]] = {}
    by_sds: dict[int, list[int]] = {}
    for i in prod_idx.tolist():
        by_uni_sds.setdefault((int(res_uni[i]), int(res_sds[i])), []).append(i)
        by_sds.setdefault(int(res_sds[i]), []).append(i)
    prod_list = prod_idx.tolist()

    # activity weight: more talented researchers lead more papers
    activity = talent[prod_idx] * rng.lognormal(0.0, 0.4, len(prod_idx))
    n_pub = p.publications
    leads = prod_idx[rng.choice(len(prod_idx), size=n_pub, p=activity / activity.sum())]
    # every productive researcher leads at least one paper when possible
    if n_pub >= len(prod_idx):
        leads[: len(prod_idx)] = prod_idx
    pub_year = rng.integers(p.window[0], p.window[1] + 1, n_pub)
    n_coauth = rng.poisson(p.coauthors_mean, n_pub)
    ext_alpha = rng.poisson(p.external_mean_alphabetical, n_pub)
    ext_byline = rng.poisson(p.external_mean_byline, n_pub)

    census_year = int(p.census_date[:4])
    talent_l, planted_l = talent.tolist(), planted_factor.tolist()
    pub_rows = []
    auth_rows = []
    lam = np.empty(n_pub)
    for k in range(n_pub):
        lead = int(leads[k])
        s, u = int(res_sds[lead]), int(res_uni[lead])
        team = [lead]
        for _ in range(int(n_coauth[k])):
            mode = uni()
            pool = by_uni_sds[(u, s)] if mode < 0.7 else by_sds[s] if mode < 0.9 else prod_list
            cand = pool[int(uni() * len(pool))]
            if cand not in team:
                team.append(cand)
        prefix = sds_codes[s].split("/")[0]
        n_ext = int(ext_byline[k] if prefix in BYLINE_PREFIXES else ext_alpha[k])
        entries = [(res_ids[i], universities[res_uni[i]][0]) for i in team]
        for _ in range(n_ext):
            if uni() < p.external_same_university:
                aff = universities[u][0]
            else:
                aff = f"X{int(uni() * 500):03d}"
            entries.append(("", aff))
        order = sorted(range(len(entries)), key=lambda _: uni())
        pid = f"P{k + 1:07d}"
        for pos, e in enumerate(order, start=1):
            auth_rows.append((pid, pos, entries[e][0], entries[e][1]))

        cats = {sds_home_cat[s]}
        if uni() < p.multi_category_share:
            # prefer a sibling category; otherwise borrow one from another UDA
            pool = [c for c in uda_cats[sds_uda[s]] if c not in cats] or all_cats
            cats.add(pool[int(uni() * len(pool))])
        age = (census_year - int(pub_year[k]) + 0.5) / 3.0
        lam[k] = (p.citation_rate * age * sum(talent_l[i] for i in team) / len(team)
                  * planted_l[lead])
        pub_rows.append([pid, int(pub_year[k]), 0, "|".join(sorted(cats))])

    shape = p.citation_dispersion
    cites = rng.poisson(lam * rng.gamma(shape, 1.0 / shape, n_pub))
    for row, c in zip(pub_rows, cites.tolist()):
        row[2] = c

    prof_rows = [
        (res_ids[i], sds_codes[res_sds[i]], universities[res_uni[i]][0],
         "" if blank[i] else int(years[i]))
        for i in range(n_res)
    ]
    counts = {
        "taxonomy": _write(out, "taxonomy", taxonomy),
        "territories": _write(out, "territories", territories),
        "universities": _write(out, "universities", universities),
        "professors": _write(out, "professors", prof_rows),
        "publications": _write(out, "publications", pub_rows),
        "authorships": _write(out, "authorships", auth_rows),
    }
    write_config(out / "dataset.toml", ".", p.window, dt.date.fromisoformat(p.census_date))

    authored = {e[2] for e in auth_rows if e[2]}
    manifest = {
        "seed": seed,
        "params": _jsonable(asdict(p)),
        "counts": counts,
        "totals": {
            "researchers": n_res,
            "productive_researchers": len(authored),
            "publications": n_pub,
            "authorships": len(auth_rows),
            "external_authorships": sum(1 for e in auth_rows if not e[2]),
            "sds": len(sds_codes),
            "udas": len(p.sds_per_uda),
            "regions": p.regions,
            "provinces": len(territories),
            "universities": p.universities,
            "cited_publications": int((cites > 0).sum()),
        },
        "staff_per_uda": {
            str(disciplines[u] + 1): int(sum(1 for i in range(n_res) if sds_uda[res_sds[i]] == u))
            for u in range(len(p.sds_per_uda))
        },
        "planted": [asdict(pl) for pl in p.planted],
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")
    return manifest


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj
