"""Command-line front end.

Exit codes: 0 success, 1 invalid data, 2 usage error (bad arguments, bad
config, unknown or ineligible territory/field).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__, geojson
from .errors import (
    ConfigError,
    DataError,
    FssError,
    IneligibleField,
    UnknownField,
    UnknownTerritory,
)
from .ingest import Config, inspect_dataset, load_config, load_dataset
from .productivity import ScoreSet, score_dataset
from .ranking import spearman_rho, trim
from .report import (
    dumps,
    format_matrix_table,
    format_rankings_table,
    matrix_json,
    rankings_json,
    run_manifest,
    write_baselines,
    write_matrix_csv,
    write_rankings_csv,
    write_scores,
)
from .summary import dataset_summary
from .synthetic import PRESETS, Planted, generate
from .territorial import Granularity, Level, TerritorialAnalytics
from .weights import DEFAULT_WEIGHTS, WeightTable

log = logging.getLogger("fssrank")

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2
LOG_ENV = "FSSRANK_LOG"


class UsageError(FssError):
    pass


def _weights(cfg: Config) -> WeightTable:
    return WeightTable.from_toml(cfg.weights_path) if cfg.weights_path else DEFAULT_WEIGHTS


def _score(args) -> tuple[Config, ScoreSet]:
    cfg = load_config(args.config)
    ds = load_dataset(cfg)
    return cfg, score_dataset(ds, _weights(cfg))


def _analytics(args) -> tuple[Config, TerritorialAnalytics]:
    cfg, ss = _score(args)
    return cfg, TerritorialAnalytics(ss, round_ties=args.round_ties or cfg.round_ties)


def _open_out(path: str | None):
    if path in (None, "-"):
        return _Stdout()
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", newline="", encoding="utf-8")


class _Stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        sys.stdout.flush()
        return False


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    report = inspect_dataset(cfg.paths, cfg.window, cfg.census_date)
    for name, n in report.counts.items():
        print(f"{name + '.csv':<20} {n:>10} rows")
    for err in report.problems:
        print(f"ERROR {err}")
    if report.problems:
        print(f"{len(report.problems)} problem(s) found")
        return EXIT_INVALID
    ds = report.dataset
    print(f"ok: {len(ds.researchers)} researchers, {len(ds.publications)} publications, "
          f"window {ds.window[0]}-{ds.window[1]}")
    return EXIT_OK


def cmd_compute(args) -> int:
    cfg, ss = _score(args)
    round_ties = args.round_ties or cfg.round_ties
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs = {"scores.csv": out / "scores.csv", "baselines.csv": out / "baselines.csv"}
    with open(outputs["scores.csv"], "w", newline="", encoding="utf-8") as fh:
        write_scores(ss, fh)
    with open(outputs["baselines.csv"], "w", newline="", encoding="utf-8") as fh:
        write_baselines(ss.baselines, fh)
    if args.rankings:
        ta = TerritorialAnalytics(ss, round_ties=round_ties)
        rdir = out / "rankings"
        rdir.mkdir(exist_ok=True)
        for level in Level:
            for gran in Granularity:
                for kind, tables in (
                    ("territories", ta.all_territory_rankings(level, gran)),
                    ("fields", ta.all_field_rankings(level, gran)),
                ):
                    name = f"{kind}_{level.value}_{gran.value}.csv"
                    outputs[f"rankings/{name}"] = rdir / name
                    with open(rdir / name, "w", newline="", encoding="utf-8") as fh:
                        write_rankings_csv(ta, [(t, t.rows) for t in tables], fh)
            name = f"matrix_{level.value}.csv"
            outputs[f"rankings/{name}"] = rdir / name
            with open(rdir / name, "w", newline="", encoding="utf-8") as fh:
                write_matrix_csv(ta, ta.uda_matrix(level), fh)
    manifest = run_manifest(cfg, ss, round_ties, outputs)
    (out / "manifest.json").write_text(dumps(manifest), encoding="utf-8")
    log.info("wrote %d output files to %s", len(outputs) + 1, out)
    return EXIT_OK


def cmd_rank(args) -> int:
    _, ta = _analytics(args)
    level, gran = Level(args.level), Granularity(args.granularity)
    spearman = None
    if args.by == "field":
        if args.territory:
            raise UsageError("--territory is not used with --by field")
        fields = [args.field] if args.field else None
        tables = ([ta.rank_territories_for_field(f, level, gran) for f in fields]
                  if fields else ta.all_territory_rankings(level, gran))
    else:
        if args.field:
            raise UsageError("--field is not used with --by territory")
        terrs = [args.territory] if args.territory else list(ta.territories(level))
        tables = [ta.rank_fields_for_territory(t, level, gran, order=args.order) for t in terrs]
        spearman = {}
        for t in tables:
            try:
                rho = spearman_rho([c.avg_fss_n for c in t.rows], [c.percentile for c in t.rows])
            except ValueError:
                rho = None
            spearman[t.key] = (rho, len(t.rows))
    trimmed = [(t, trim(t.rows, args.top, args.bottom)) for t in tables]

    with _open_out(args.out) as fh:
        if args.format == "csv":
            write_rankings_csv(ta, trimmed, fh)
        elif args.format == "json":
            fh.write(dumps(rankings_json(ta, trimmed, spearman)))
        else:
            for t, rows in trimmed:
                fh.write(format_rankings_table(ta, t, rows, args.round) + "\n")
                if spearman and spearman[t.key][0] is not None:
                    rho, n = spearman[t.key]
                    fh.write(f"Spearman rho (value vs national percentile): {rho:.{args.round}f} "
                             f"over {n} fields\n")
                fh.write("\n")
    return EXIT_OK


def cmd_matrix(args) -> int:
    _, ta = _analytics(args)
    m = ta.uda_matrix(Level(args.level))
    with _open_out(args.out) as fh:
        if args.format == "csv":
            write_matrix_csv(ta, m, fh)
        elif args.format == "json":
            fh.write(dumps(matrix_json(ta, m)))
        else:
            fh.write(format_matrix_table(ta, m, args.round) + "\n")
    return EXIT_OK


def cmd_summary(args) -> int:
    cfg = load_config(args.config)
    s = dataset_summary(load_dataset(cfg), eligible_only=args.eligible_only)
    if args.format == "json":
        sys.stdout.write(dumps(dataclasses.asdict(s)))
        return EXIT_OK
    print(f"{'UDA':<44} {'SDS':>5} {'Univ.':>6} {'Staff':>8} {'Pubs':>9}")
    for r in (*s.udas, s.total):
        label = f"{r.uda_code} {r.uda_name}".strip()[:44]
        print(f"{label:<44} {r.sds:>5} {r.universities:>6} {r.staff:>8} {r.publications:>9}")
    print()
    print(f"{'Region':<30} {'Macro-area':<18} {'Univ.':>6} {'Staff':>8} {'UDAs':>5}")
    for r in s.regions:
        label = f"{r.region_code} {r.region_name}"[:30]
        print(f"{label:<30} {r.macro_area[:18]:<18} {r.universities:>6} {r.staff:>8} {r.udas:>5}")
    return EXIT_OK


def cmd_export_baselines(args) -> int:
    _, ss = _score(args)
    with _open_out(args.out) as fh:
        write_baselines(ss.baselines, fh)
    return EXIT_OK


def cmd_export_scores(args) -> int:
    _, ss = _score(args)
    with _open_out(args.out) as fh:
        write_scores(ss, fh)
    return EXIT_OK


def cmd_geojson_join(args) -> int:
    values = geojson.read_rankings(args.rankings, args.field)
    annotated, unmatched = geojson.join(geojson.load(args.boundaries), values, args.key)
    for code in unmatched:
        print(f"warning: ranking row {code!r} matches no boundary feature", file=sys.stderr)
    with _open_out(args.out) as fh:
        json.dump(annotated, fh, ensure_ascii=False)
        fh.write("\n")
    return EXIT_OK


def cmd_gen_synthetic(args) -> int:
    params = PRESETS[args.preset]
    overrides = {}
    if args.researchers is not None:
        overrides["researchers"] = args.researchers
    if args.publications is not None:
        overrides["publications"] = args.publications
    if args.planted:
        try:
            overrides["planted"] = tuple(Planted.parse(p) for p in args.planted)
        except ValueError as e:
            raise UsageError(str(e)) from None
    try:
        params = dataclasses.replace(params, **overrides)
    except ValueError as e:
        raise UsageError(str(e)) from None
    manifest = generate(args.out, args.seed, params)
    t = manifest["totals"]
    print(f"wrote {t['researchers']} researchers, {t['publications']} publications, "
          f"{t['authorships']} authorships to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fssrank", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def with_config(sp):
        sp.add_argument("-c", "--config", required=True, help="dataset.toml")
        return sp

    def with_ties(sp):
        sp.add_argument("--round-ties", action="store_true",
                        help="treat values equal to 3 decimals as ties")
        return sp

    sp = with_config(sub.add_parser("validate", help="check input files"))
    sp.set_defaults(func=cmd_validate)

    sp = with_ties(with_config(sub.add_parser("compute", help="score researchers, write outputs")))
    sp.add_argument("-o", "--out", required=True, help="output directory")
    sp.add_argument("--rankings", action="store_true", help="also write every ranking table")
    sp.set_defaults(func=cmd_compute)

    sp = with_ties(with_config(sub.add_parser("rank", help="emit ranking tables")))
    sp.add_argument("--by", choices=("field", "territory"), required=True,
                    help="field: territories ranked within a field; territory: fields within a territory")
    sp.add_argument("--level", choices=[v.value for v in Level], default="region")
    sp.add_argument("--granularity", choices=[v.value for v in Granularity], default="sds")
    sp.add_argument("--field", help="SDS or UDA code (all eligible fields when omitted)")
    sp.add_argument("--territory", help="region or province code (all when omitted)")
    sp.add_argument("--top", type=int, default=0)
    sp.add_argument("--bottom", type=int, default=0)
    sp.add_argument("--order", choices=("value", "percentile"), default="value")
    sp.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    sp.add_argument("--round", type=int, default=3, help="decimals in table format")
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_rank)

    sp = with_ties(with_config(sub.add_parser("matrix", help="territory x UDA matrix")))
    sp.add_argument("--level", choices=[v.value for v in Level], default="region")
    sp.add_argument("--format", choices=("csv", "json", "table"), default="csv")
    sp.add_argument("--round", type=int, default=3)
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_matrix)

    sp = with_config(sub.add_parser("summary", help="dataset counts per UDA and region"))
    sp.add_argument("--eligible-only", action="store_true")
    sp.add_argument("--format", choices=("table", "json"), default="table")
    sp.set_defaults(func=cmd_summary)

    sp = with_config(sub.add_parser("export-baselines", help="write baselines.csv"))
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_export_baselines)

    sp = with_config(sub.add_parser("export-scores", help="write scores.csv"))
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_export_scores)

    sp = sub.add_parser("geojson-join", help="inject ranking values into GeoJSON features")
    sp.add_argument("rankings", help="ranking CSV from `rank --format csv`")
    sp.add_argument("boundaries", help="GeoJSON FeatureCollection")
    sp.add_argument("--key", required=True, help="feature property holding the NUTS code")
    sp.add_argument("--field", help="select one field when the CSV holds several")
    sp.add_argument("-o", "--out")
    sp.set_defaults(func=cmd_geojson_join)

    sp = sub.add_parser("gen-synthetic", help="write a seeded synthetic dataset")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--preset", choices=sorted(PRESETS), default="tiny")
    sp.add_argument("--researchers", type=int)
    sp.add_argument("--publications", type=int)
    sp.add_argument("--planted", action="append", metavar="REGION:SDS[:FACTOR]")
    sp.set_defaults(func=cmd_gen_synthetic)
    return p


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get(LOG_ENV, "WARNING").upper()
    if not isinstance(logging.getLevelName(level), int):
        print(f"fssrank: ignoring unknown {LOG_ENV}={level!r}", file=sys.stderr)
        level = "WARNING"
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError, UnknownTerritory, UnknownField, IneligibleField) as e:
        print(f"fssrank: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FssError) as e:
        print(f"fssrank: error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
