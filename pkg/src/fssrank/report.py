"""Machine (CSV/JSON) and human (fixed-width) renderings of results.

Machine outputs carry floats at full precision (shortest round-trip repr);
human tables round for display only.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from . import __version__
from .citations import Baselines
from .ingest import Config
from .productivity import ScoreSet
from .territorial import RankingTable, TerritorialAnalytics, TerritoryCell, UdaMatrix

SCORES_HEADER = ("researcher_id", "sds_code", "university_id", "fss", "fss_n", "productive")
BASELINES_HEADER = ("year", "category", "mean_cited", "cited_count")
RANKING_HEADER = ("territory_code", "territory_name", "field_code", "staff", "avg_fss_n",
                  "rank", "percentile", "cohort_size")


def fmt(x: float | int | None) -> str:
    if x is None:
        return ""
    return repr(float(x)) if isinstance(x, float) else str(x)


def _csv(out: TextIO):
    return csv.writer(out, lineterminator="\n")


def write_scores(ss: ScoreSet, out: TextIO) -> None:
    w = _csv(out)
    w.writerow(SCORES_HEADER)
    for s in ss.scores.values():
        w.writerow((s.researcher_id, s.sds_code, s.university_id, fmt(s.fss), fmt(s.fss_n),
                    int(s.productive)))


def write_baselines(baselines: Baselines, out: TextIO) -> None:
    w = _csv(out)
    w.writerow(BASELINES_HEADER)
    for (year, cat), b in sorted(baselines.items()):
        w.writerow((year, cat, fmt(b.mean_cited), b.cited_count))


def _names(ta: TerritorialAnalytics, table: RankingTable) -> dict[str, str]:
    return ta.territories(table.level)


def ranking_rows(ta: TerritorialAnalytics, table: RankingTable,
                 rows: Sequence[TerritoryCell] | None = None) -> list[dict]:
    names = _names(ta, table)
    return [
        {
            "territory_code": c.territory,
            "territory_name": names[c.territory],
            "field_code": c.field,
            "staff": c.staff,
            "avg_fss_n": c.avg_fss_n,
            "rank": c.rank,
            "percentile": c.percentile,
            "cohort_size": c.cohort_size,
        }
        for c in (table.rows if rows is None else rows)
    ]


def write_rankings_csv(ta: TerritorialAnalytics, tables: Iterable[tuple[RankingTable, Sequence[TerritoryCell]]],
                       out: TextIO) -> None:
    w = _csv(out)
    w.writerow(RANKING_HEADER)
    for table, rows in tables:
        for r in ranking_rows(ta, table, rows):
            w.writerow([fmt(r[k]) for k in RANKING_HEADER])


def rankings_json(ta: TerritorialAnalytics, tables: Iterable[tuple[RankingTable, Sequence[TerritoryCell]]],
                  spearman: dict[str, tuple[float | None, int]] | None = None) -> dict:
    tables = list(tables)
    first = tables[0][0] if tables else None
    doc = {
        "context": first.context.value if first else None,
        "level": first.level.value if first else None,
        "granularity": first.granularity.value if first else None,
        "tables": [],
    }
    for table, rows in tables:
        entry = {"key": table.key, "size": len(table.rows), "rows": ranking_rows(ta, table, rows)}
        if spearman is not None and table.key in spearman:
            rho, n = spearman[table.key]
            entry["spearman"] = {"rho": rho, "n": n}
        doc["tables"].append(entry)
    return doc


def format_rankings_table(ta: TerritorialAnalytics, table: RankingTable,
                          rows: Sequence[TerritoryCell], decimals: int = 3) -> str:
    names = _names(ta, table)
    lines = [f"# {table.context.value} [{table.level.value}/{table.granularity.value}] {table.key}"]
    head = f"{'territory':<28} {'field':<14} {'staff':>6} {'FSS^N':>8} {'rank':>5} {'pctile':>7} {'N':>4}"
    lines.append(head)
    for c in rows:
        label = f"{c.territory} {names[c.territory]}"[:28]
        lines.append(
            f"{label:<28} {c.field:<14} {c.staff:>6} {c.avg_fss_n:>8.{decimals}f} {c.rank:>5} "
            f"{c.percentile:>7.1f} {c.cohort_size:>4}"
        )
    return "\n".join(lines)


def write_matrix_csv(ta: TerritorialAnalytics, m: UdaMatrix, out: TextIO) -> None:
    names = ta.territories(m.level)
    w = _csv(out)
    w.writerow(("territory_code", "territory_name", *m.udas))
    for t in m.territories:
        w.writerow((t, names[t], *(fmt(v) for v in m.row(t))))


def matrix_json(ta: TerritorialAnalytics, m: UdaMatrix) -> dict:
    names = ta.territories(m.level)
    return {
        "level": m.level.value,
        "udas": {u: ta.dataset.udas()[u] for u in m.udas},
        "rows": [{"territory_code": t, "territory_name": names[t],
                  "values": dict(zip(m.udas, m.row(t)))} for t in m.territories],
    }


def format_matrix_table(ta: TerritorialAnalytics, m: UdaMatrix, decimals: int = 3) -> str:
    names = ta.territories(m.level)
    width = max(6, decimals + 3)
    lines = [f"{'territory':<28}" + "".join(f"{u:>{width + 1}}" for u in m.udas)]
    for t in m.territories:
        cells = "".join(
            f"{'-':>{width + 1}}" if v is None else f"{v:>{width + 1}.{decimals}f}" for v in m.row(t))
        lines.append(f"{(t + ' ' + names[t])[:28]:<28}{cells}")
    return "\n".join(lines)


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def run_manifest(cfg: Config, ss: ScoreSet, round_ties: bool, outputs: dict[str, Path]) -> dict:
    """Everything that determines the outputs, plus the digests of the outputs."""
    return {
        "tool": "fssrank",
        "version": __version__,
        "config_digest": sha256_file(cfg.source) if cfg.source else None,
        "dataset_files": {name: sha256_file(p) for name, p in cfg.paths.items()},
        "window": list(ss.dataset.window),
        "census_date": ss.dataset.census_date.isoformat() if ss.dataset.census_date else None,
        "flags": {"round_ties": round_ties, "weights": ss.weights.as_dict()},
        "outputs": {name: sha256_file(p) for name, p in sorted(outputs.items())},
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=False) + "\n"


def to_string(writer, *args) -> str:
    buf = io.StringIO()
    writer(*args, buf)
    return buf.getvalue()
