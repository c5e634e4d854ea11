"""Descriptive counts of a dataset per discipline (UDA) and per region."""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass

from .model import Dataset
from .productivity import is_eligible

MIN_UNIT_STAFF = 10


@dataclass(frozen=True)
class UdaSummary:
    uda_code: str
    uda_name: str
    sds: int
    universities: int
    staff: int
    publications: int


@dataclass(frozen=True)
class RegionSummary:
    region_code: str
    region_name: str
    macro_area: str
    universities: int
    staff: int
    udas: int


@dataclass(frozen=True)
class DatasetSummary:
    udas: tuple[UdaSummary, ...]
    regions: tuple[RegionSummary, ...]
    total: UdaSummary


def in_scope_fields(ds: Dataset, eligible_only: bool = False) -> set[str]:
    if not eligible_only:
        return set(ds.taxonomy)
    total: Counter[str] = Counter()
    productive: Counter[str] = Counter()
    for rid, r in ds.researchers.items():
        total[r.sds_code] += 1
        productive[r.sds_code] += bool(ds.authored[rid])
    return {s for s in ds.taxonomy if is_eligible(productive[s], total[s])}


def dataset_summary(ds: Dataset, eligible_only: bool = False,
                    min_staff: int = MIN_UNIT_STAFF) -> DatasetSummary:
    """Per-UDA and per-region counts.

    ``universities`` counts universities with at least ``min_staff`` in-scope
    professors in the row's UDA (or overall, for regions and the total);
    ``udas`` counts UDAs with at least ``min_staff`` professors in the region.
    A publication counts once for every UDA with an in-scope author, and once
    in the total.
    """
    scope = in_scope_fields(ds, eligible_only)
    researchers = [r for r in ds.researchers.values() if r.sds_code in scope]

    staff_uda: Counter[str] = Counter()
    staff_uni_uda: Counter[tuple[str, str]] = Counter()
    staff_uni: Counter[str] = Counter()
    staff_region_uda: Counter[tuple[str, str]] = Counter()
    staff_region: Counter[str] = Counter()
    uda_of_researcher = {}
    for r in researchers:
        uda = ds.uda_of(r.sds_code)
        region = ds.region_of(r.university_id)
        uda_of_researcher[r.researcher_id] = uda
        staff_uda[uda] += 1
        staff_uni_uda[(r.university_id, uda)] += 1
        staff_uni[r.university_id] += 1
        staff_region_uda[(region, uda)] += 1
        staff_region[region] += 1

    pubs_uda: Counter[str] = Counter()
    pubs_total = 0
    for pub in ds.publications.values():
        udas = {uda_of_researcher[a.researcher_id] for a in pub.byline
                if a.researcher_id in uda_of_researcher}
        pubs_uda.update(udas)
        pubs_total += bool(udas)

    sds_per_uda: Counter[str] = Counter(ds.uda_of(s) for s in scope)
    uda_rows = tuple(
        UdaSummary(
            uda_code=code,
            uda_name=name,
            sds=sds_per_uda[code],
            universities=sum(1 for (u, d), n in staff_uni_uda.items() if d == code and n >= min_staff),
            staff=staff_uda[code],
            publications=pubs_uda[code],
        )
        for code, name in ds.udas().items()
    )

    uni_region = {u: ds.territories[x.province_code].region_code for u, x in ds.universities.items()}
    macro: dict[str, str] = {}
    for t in ds.territories.values():
        macro.setdefault(t.region_code, t.macro_area)
    big_unis: defaultdict[str, int] = defaultdict(int)
    for u, n in staff_uni.items():
        if n >= min_staff:
            big_unis[uni_region[u]] += 1
    region_rows = tuple(
        RegionSummary(
            region_code=code,
            region_name=name,
            macro_area=macro[code],
            universities=big_unis[code],
            staff=staff_region[code],
            udas=sum(1 for (reg, _), n in staff_region_uda.items() if reg == code and n >= min_staff),
        )
        for code, name in ds.regions().items()
    )

    total = UdaSummary(
        uda_code="",
        uda_name="Total",
        sds=len(scope),
        universities=sum(1 for n in staff_uni.values() if n >= min_staff),
        staff=len(researchers),
        publications=pubs_total,
    )
    return DatasetSummary(uda_rows, region_rows, total)
