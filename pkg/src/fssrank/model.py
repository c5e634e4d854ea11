"""Domain types shared by every stage of the pipeline.

All entities are frozen; a :class:`Dataset` is assembled once by the loader
and then only read.
"""

from __future__ import annotations

import datetime as dt
import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping


class WeightingScheme(str, enum.Enum):
    ALPHABETICAL = "alphabetical"
    BYLINE = "byline"


@dataclass(frozen=True, slots=True)
class Field:
    sds_code: str
    sds_name: str
    uda_code: str
    uda_name: str
    weighting_scheme: WeightingScheme


@dataclass(frozen=True, slots=True)
class Territory:
    province_code: str
    province_name: str
    region_code: str
    region_name: str
    macro_area: str = ""


@dataclass(frozen=True, slots=True)
class University:
    university_id: str
    province_code: str


@dataclass(frozen=True, slots=True)
class Researcher:
    researcher_id: str
    sds_code: str
    university_id: str
    years_active: int


@dataclass(frozen=True, slots=True)
class Authorship:
    position: int
    researcher_id: str | None
    affiliation_id: str


@dataclass(frozen=True, slots=True)
class Publication:
    pub_id: str
    year: int
    citations: int
    categories: tuple[str, ...]
    byline: tuple[Authorship, ...]

    @property
    def n_authors(self) -> int:
        return len(self.byline)

    @property
    def intramural(self) -> bool:
        """First and last author share an affiliation."""
        return self.byline[0].affiliation_id == self.byline[-1].affiliation_id


@dataclass(frozen=True)
class Dataset:
    """Validated, immutable input corpus.

    Mappings are keyed by entity id and iterate in sorted key order, so any
    fold over them is independent of the row order of the source files.
    """

    taxonomy: Mapping[str, Field]
    territories: Mapping[str, Territory]
    universities: Mapping[str, University]
    researchers: Mapping[str, Researcher]
    publications: Mapping[str, Publication]
    window: tuple[int, int]
    census_date: dt.date | None = None
    # researcher_id -> ((pub_id, position), ...) sorted by pub_id
    authored: Mapping[str, tuple[tuple[str, int], ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        for name in ("taxonomy", "territories", "universities", "researchers", "publications"):
            src = getattr(self, name)
            object.__setattr__(self, name, MappingProxyType(dict(sorted(src.items()))))
        authored: dict[str, list[tuple[str, int]]] = {rid: [] for rid in self.researchers}
        for pub in self.publications.values():
            for a in pub.byline:
                if a.researcher_id is not None and a.researcher_id in authored:
                    authored[a.researcher_id].append((pub.pub_id, a.position))
        object.__setattr__(
            self, "authored", MappingProxyType({k: tuple(v) for k, v in authored.items()})
        )

    @property
    def window_length(self) -> int:
        return self.window[1] - self.window[0] + 1

    def region_of(self, university_id: str) -> str:
        return self.territories[self.universities[university_id].province_code].region_code

    def province_of(self, university_id: str) -> str:
        return self.universities[university_id].province_code

    def uda_of(self, sds_code: str) -> str:
        return self.taxonomy[sds_code].uda_code

    def regions(self) -> dict[str, str]:
        """Region code -> region name, sorted by code."""
        out = {t.region_code: t.region_name for t in self.territories.values()}
        return dict(sorted(out.items()))

    def udas(self) -> dict[str, str]:
        out = {f.uda_code: f.uda_name for f in self.taxonomy.values()}
        return dict(sorted(out.items()))
