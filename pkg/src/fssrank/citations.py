"""Field normalization of citation counts.

Each publication's citations are divided by the mean citation count of the
*cited* publications (citations >= 1) sharing its year and subject
category. A publication listed under several categories is compared with
the arithmetic mean of those categories' baselines.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import MissingBaseline
from .model import Dataset, Publication

Stratum = tuple[int, str]


@dataclass(frozen=True, slots=True)
class CitationBaseline:
    year: int
    category: str
    cited_total: int
    cited_count: int

    @property
    def mean_cited(self) -> float:
        return self.cited_total / self.cited_count


Baselines = Mapping[Stratum, CitationBaseline]


def compute_baselines(ds: Dataset) -> dict[Stratum, CitationBaseline]:
    """Mean citations over cited publications for every (year, category).

    Strata with no cited publication are absent from the result.
    """
    totals: dict[Stratum, list[int]] = {}
    for pub in ds.publications.values():
        if pub.citations < 1:
            continue
        for cat in pub.categories:
            acc = totals.setdefault((pub.year, cat), [0, 0])
            acc[0] += pub.citations
            acc[1] += 1
    return {
        key: CitationBaseline(key[0], key[1], total, count)
        for key, (total, count) in sorted(totals.items())
    }


def reference_value(pub: Publication, baselines: Baselines) -> float:
    """The expected citation count a publication is compared against."""
    means = [
        baselines[(pub.year, cat)].mean_cited
        for cat in pub.categories
        if (pub.year, cat) in baselines
    ]
    if not means:
        raise MissingBaseline(
            f"publication {pub.pub_id!r} ({pub.year}, {'|'.join(pub.categories)}) "
            "has no citation baseline; were baselines computed from another dataset?"
        )
    return sum(means) / len(means)


def scaled_citation(pub: Publication, baselines: Baselines) -> float:
    if pub.citations == 0:
        return 0.0
    return pub.citations / reference_value(pub, baselines)


def scaled_citations(ds: Dataset, baselines: Baselines | None = None) -> dict[str, float]:
    """pub_id -> scaled citation for the whole corpus."""
    if baselines is None:
        baselines = compute_baselines(ds)
    return {pid: scaled_citation(p, baselines) for pid, p in ds.publications.items()}
