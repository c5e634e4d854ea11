"""Per-researcher Fractional Scientific Strength and its field normalization.

FSS is the yearly sum of field-normalized citations weighted by the
researcher's fractional contribution. FSS^N divides it by the mean FSS of
the *productive* researchers (at least one publication) of the same SDS.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Mapping

from .citations import Baselines, compute_baselines, scaled_citation, scaled_citations
from .errors import UndefinedBaseline
from .model import Dataset, Researcher
from .weights import DEFAULT_WEIGHTS, WeightTable, weight_vector

log = logging.getLogger(__name__)

MIN_PRODUCTIVE_SHARE = 0.5


@dataclass(frozen=True, slots=True)
class ProductivityScore:
    researcher_id: str
    sds_code: str
    university_id: str
    fss: float
    fss_n: float | None
    productive: bool


@dataclass(frozen=True, slots=True)
class FieldBaseline:
    sds_code: str
    mean_fss_productive: float | None
    productive_count: int
    total_count: int
    eligible: bool

    @property
    def rankable(self) -> bool:
        """Eligible and with a positive mean, so FSS^N is defined."""
        return self.eligible and bool(self.mean_fss_productive)


def is_eligible(productive: int, total: int) -> bool:
    return total > 0 and productive >= MIN_PRODUCTIVE_SHARE * total


def researcher_fss(r: Researcher, ds: Dataset, baselines: Baselines,
                   table: WeightTable = DEFAULT_WEIGHTS,
                   scaled: Mapping[str, float] | None = None) -> float:
    """FSS of one researcher, using the weighting scheme of their own SDS.

    ``scaled`` (pub_id -> scaled citation) can be passed to avoid recomputing
    the normalization per researcher.
    """
    scheme = ds.taxonomy[r.sds_code].weighting_scheme
    terms = []
    for pub_id, position in ds.authored[r.researcher_id]:
        pub = ds.publications[pub_id]
        c = scaled[pub_id] if scaled is not None else scaled_citation(pub, baselines)
        if c == 0.0:
            continue
        w = weight_vector(pub.n_authors, scheme, pub.intramural, table)
        terms.append(c * w[position - 1])
    return math.fsum(terms) / r.years_active


def field_baselines(ds: Dataset, scores: Mapping[str, ProductivityScore]) -> dict[str, FieldBaseline]:
    """National mean FSS over productive researchers, per SDS, plus eligibility."""
    groups: dict[str, list[ProductivityScore]] = {code: [] for code in ds.taxonomy}
    for s in scores.values():
        groups[s.sds_code].append(s)
    out = {}
    for code, members in groups.items():
        productive = [s.fss for s in members if s.productive]
        mean = math.fsum(productive) / len(productive) if productive else None
        out[code] = FieldBaseline(
            sds_code=code,
            mean_fss_productive=mean,
            productive_count=len(productive),
            total_count=len(members),
            eligible=bool(productive) and is_eligible(len(productive), len(members)),
        )
    return out


def researcher_fss_n(r: Researcher | str, scores: Mapping[str, ProductivityScore],
                     fields: Mapping[str, FieldBaseline]) -> float:
    rid = r if isinstance(r, str) else r.researcher_id
    s = scores[rid]
    fb = fields[s.sds_code]
    if not fb.mean_fss_productive:
        raise UndefinedBaseline(
            f"SDS {s.sds_code!r} has no productive researcher with positive FSS")
    if not s.productive:
        return 0.0
    return s.fss / fb.mean_fss_productive


@dataclass(frozen=True)
class ScoreSet:
    """Everything downstream analytics need, computed once from a Dataset."""

    dataset: Dataset
    baselines: Baselines
    weights: WeightTable
    scores: Mapping[str, ProductivityScore]
    fields: Mapping[str, FieldBaseline]

    def eligible_fields(self) -> list[str]:
        return [code for code, fb in self.fields.items() if fb.rankable]


def score_dataset(ds: Dataset, table: WeightTable = DEFAULT_WEIGHTS) -> ScoreSet:
    baselines = compute_baselines(ds)
    scaled = scaled_citations(ds, baselines)
    raw = {}
    for rid, r in ds.researchers.items():
        raw[rid] = ProductivityScore(
            researcher_id=rid,
            sds_code=r.sds_code,
            university_id=r.university_id,
            fss=researcher_fss(r, ds, baselines, table, scaled),
            fss_n=None,
            productive=bool(ds.authored[rid]),
        )
    fields = field_baselines(ds, raw)
    scores = {}
    for rid, s in raw.items():
        if fields[s.sds_code].mean_fss_productive:
            s = replace(s, fss_n=researcher_fss_n(rid, raw, fields))
        scores[rid] = s
    n_elig = sum(fb.eligible for fb in fields.values())
    log.info("scored %d researchers; %d of %d SDSs eligible", len(scores), n_elig, len(fields))
    return ScoreSet(ds, baselines, table, scores, fields)
