"""Territory x field aggregation and the two ranking perspectives.

A cell is the mean FSS^N of *all* professors of a field (SDS, or every
eligible SDS of a UDA) employed by universities in a territory, productive
or not. Cells with fewer than 6 professors (SDS) or 10 (UDA) are dropped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Iterable, Mapping

from .errors import IneligibleField, UnknownField, UnknownTerritory
from .productivity import ScoreSet
from .ranking import competition_ranks, national_percentile, spearman_rho, tie_key


class Level(str, enum.Enum):
    REGION = "region"
    PROVINCE = "province"


class Granularity(str, enum.Enum):
    SDS = "sds"
    UDA = "uda"


class Context(str, enum.Enum):
    TERRITORIES_WITHIN_FIELD = "territories_within_field"
    FIELDS_WITHIN_TERRITORY = "fields_within_territory"


MIN_STAFF = {Granularity.SDS: 6, Granularity.UDA: 10}


@dataclass(frozen=True, slots=True)
class TerritoryCell:
    territory: str
    field: str
    staff: int
    avg_fss_n: float
    rank: int | None = None
    percentile: float | None = None
    cohort_size: int | None = None


@dataclass(frozen=True)
class RankingTable:
    context: Context
    level: Level
    granularity: Granularity
    key: str  # the fixed field (territories within field) or territory
    rows: tuple[TerritoryCell, ...]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class UdaMatrix:
    level: Level
    territories: tuple[str, ...]
    udas: tuple[str, ...]
    values: Mapping[tuple[str, str], float]  # excluded cells absent

    def get(self, territory: str, uda: str) -> float | None:
        return self.values.get((territory, uda))

    def row(self, territory: str) -> list[float | None]:
        return [self.get(territory, u) for u in self.udas]

    def column(self, uda: str) -> list[float | None]:
        return [self.get(t, uda) for t in self.territories]


def rank_cells(cells: Iterable[TerritoryCell], *, by_field: bool,
               round_ties: bool = False) -> list[TerritoryCell]:
    """Sort cells by value (descending, then code) and attach competition ranks.

    When ``by_field`` is true the cells form a national cohort and each also
    gets its percentile and cohort size.
    """
    cells = list(cells)
    ranks = competition_ranks([c.avg_fss_n for c in cells], round_ties)
    n = len(cells)
    ranked = []
    for c, r in zip(cells, ranks):
        if by_field:
            c = replace(c, rank=r, percentile=national_percentile(r, n), cohort_size=n)
        else:
            c = replace(c, rank=r)
        ranked.append(c)
    tiebreak = (lambda c: c.territory) if by_field else (lambda c: c.field)
    ranked.sort(key=lambda c: (-tie_key(c.avg_fss_n, round_ties), -c.avg_fss_n, tiebreak(c)))
    return ranked


class TerritorialAnalytics:
    """Cells, rankings and matrices over one :class:`ScoreSet`.

    Cell tables are built once per (level, granularity) and cached.
    """

    def __init__(self, scoreset: ScoreSet, round_ties: bool = False):
        self.scoreset = scoreset
        self.round_ties = round_ties
        self._cells: dict[tuple[Level, Granularity], dict[tuple[str, str], TerritoryCell]] = {}
        self._national: dict[tuple[Level, Granularity], dict[str, dict[str, TerritoryCell]]] = {}

    @property
    def dataset(self):
        return self.scoreset.dataset

    @cached_property
    def rankable_sds(self) -> frozenset[str]:
        return frozenset(self.scoreset.eligible_fields())

    @cached_property
    def rankable_uda(self) -> frozenset[str]:
        return frozenset(self.dataset.uda_of(s) for s in self.rankable_sds)

    def territories(self, level: Level) -> dict[str, str]:
        """Territory code -> name at ``level``."""
        level = Level(level)
        ts = self.dataset.territories.values()
        if level is Level.REGION:
            return dict(sorted({t.region_code: t.region_name for t in ts}.items()))
        return {t.province_code: t.province_name for t in ts}

    def _check_territory(self, territory: str, level: Level) -> None:
        if territory not in self.territories(level):
            raise UnknownTerritory(f"unknown {Level(level).value} {territory!r}")

    def _check_field(self, field: str, granularity: Granularity) -> None:
        if granularity is Granularity.SDS:
            if field not in self.dataset.taxonomy:
                raise UnknownField(f"unknown SDS {field!r}")
            if field not in self.rankable_sds:
                raise IneligibleField(f"SDS {field!r} is not eligible for ranking")
        else:
            if field not in self.dataset.udas():
                raise UnknownField(f"unknown UDA {field!r}")
            if field not in self.rankable_uda:
                raise IneligibleField(f"UDA {field!r} has no eligible SDS")

    def _groups(self, level: Level, granularity: Granularity) -> dict[tuple[str, str], list[float]]:
        ds = self.dataset
        groups: dict[tuple[str, str], list[float]] = {}
        for s in self.scoreset.scores.values():
            if s.sds_code not in self.rankable_sds:
                continue
            terr = ds.region_of(s.university_id) if level is Level.REGION else ds.province_of(s.university_id)
            fld = s.sds_code if granularity is Granularity.SDS else ds.uda_of(s.sds_code)
            groups.setdefault((terr, fld), []).append(s.fss_n)
        return groups

    def cells(self, level: Level, granularity: Granularity) -> dict[tuple[str, str], TerritoryCell]:
        """Every non-excluded cell at this level and granularity, unranked."""
        level, granularity = Level(level), Granularity(granularity)
        key = (level, granularity)
        if key not in self._cells:
            floor = MIN_STAFF[granularity]
            self._cells[key] = {
                (t, f): TerritoryCell(t, f, len(vals), math.fsum(vals) / len(vals))
                for (t, f), vals in sorted(self._groups(level, granularity).items())
                if len(vals) >= floor
            }
        return self._cells[key]

    def cell_average(self, territory: str, field: str, level: Level = Level.REGION,
                     granularity: Granularity = Granularity.SDS) -> TerritoryCell | None:
        """The (territory, field) cell, or None when below the staff threshold."""
        level, granularity = Level(level), Granularity(granularity)
        self._check_territory(territory, level)
        self._check_field(field, granularity)
        return self.cells(level, granularity).get((territory, field))

    def _national_tables(self, level: Level, granularity: Granularity) -> dict[str, dict[str, TerritoryCell]]:
        key = (level, granularity)
        if key not in self._national:
            by_field: dict[str, list[TerritoryCell]] = {}
            for (_, f), cell in self.cells(level, granularity).items():
                by_field.setdefault(f, []).append(cell)
            self._national[key] = {
                f: {c.territory: c for c in rank_cells(cs, by_field=True, round_ties=self.round_ties)}
                for f, cs in by_field.items()
            }
        return self._national[key]

    def rank_territories_for_field(self, field: str, level: Level = Level.REGION,
                                   granularity: Granularity = Granularity.SDS) -> RankingTable:
        level, granularity = Level(level), Granularity(granularity)
        self._check_field(field, granularity)
        rows = self._national_tables(level, granularity).get(field, {})
        return RankingTable(Context.TERRITORIES_WITHIN_FIELD, level, granularity, field,
                            tuple(rows.values()))

    def rank_fields_for_territory(self, territory: str, level: Level = Level.REGION,
                                  granularity: Granularity = Granularity.SDS,
                                  order: str = "value") -> RankingTable:
        """Fields of one territory ranked against each other.

        ``rank`` is the position within the territory; ``percentile`` and
        ``cohort_size`` come from the field's national ranking of territories.
        ``order="percentile"`` lists rows by national percentile instead of
        by value (ranks are unchanged).
        """
        level, granularity = Level(level), Granularity(granularity)
        self._check_territory(territory, level)
        national = self._national_tables(level, granularity)
        local = [table[territory] for f, table in sorted(national.items()) if territory in table]
        ranked = rank_cells(
            [replace(c, rank=None) for c in local], by_field=False, round_ties=self.round_ties)
        rows = [
            replace(c, percentile=national[c.field][territory].percentile,
                    cohort_size=national[c.field][territory].cohort_size)
            for c in ranked
        ]
        if order == "percentile":
            rows.sort(key=lambda c: (-c.percentile, c.field))
        elif order != "value":
            raise ValueError(f"order must be 'value' or 'percentile', got {order!r}")
        return RankingTable(Context.FIELDS_WITHIN_TERRITORY, level, granularity, territory,
                            tuple(rows))

    def compare_views(self, territory: str, level: Level = Level.REGION,
                      granularity: Granularity = Granularity.SDS) -> tuple[float, int]:
        """Spearman rho between a territory's field values and their national
        percentiles, with the number of fields compared."""
        table = self.rank_fields_for_territory(territory, level, granularity)
        x = [c.avg_fss_n for c in table.rows]
        y = [c.percentile for c in table.rows]
        return spearman_rho(x, y), len(x)

    def uda_matrix(self, level: Level = Level.REGION) -> UdaMatrix:
        level = Level(level)
        cells = self.cells(level, Granularity.UDA)
        return UdaMatrix(
            level=level,
            territories=tuple(self.territories(level)),
            udas=tuple(self.dataset.udas()),
            values={k: c.avg_fss_n for k, c in cells.items()},
        )

    def all_territory_rankings(self, level: Level, granularity: Granularity) -> list[RankingTable]:
        level, granularity = Level(level), Granularity(granularity)
        fields = self.rankable_sds if granularity is Granularity.SDS else self.rankable_uda
        return [self.rank_territories_for_field(f, level, granularity) for f in sorted(fields)]

    def all_field_rankings(self, level: Level, granularity: Granularity) -> list[RankingTable]:
        return [self.rank_fields_for_territory(t, level, granularity)
                for t in self.territories(level)]
