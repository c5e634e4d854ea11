"""Deliberately naive re-implementation used only as a test oracle.

Reads the raw CSV rows and re-derives every quantity by linear scans, with
no import from the package under test.
"""

import csv
from pathlib import Path


def _rows(directory, name):
    with open(Path(directory) / f"{name}.csv", newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def oracle_weights(n, scheme, same_affiliation):
    if scheme == "alphabetical":
        return [1 / n] * n
    if n == 1:
        return [1.0]
    if n == 2:
        return [0.5, 0.5]
    if same_affiliation:
        return [0.4] + [0.2 / (n - 2)] * (n - 2) + [0.4]
    if n == 3:
        return [0.375, 0.25, 0.375]
    if n == 4:
        return [1 / 3, 1 / 6, 1 / 6, 1 / 3]
    return [0.3, 0.15] + [0.1 / (n - 4)] * (n - 4) + [0.15, 0.3]


def oracle(directory, window):
    tax = _rows(directory, "taxonomy")
    terr = _rows(directory, "territories")
    unis = _rows(directory, "universities")
    profs = _rows(directory, "professors")
    pubs = _rows(directory, "publications")
    auths = _rows(directory, "authorships")
    span = window[1] - window[0] + 1

    def cats(p):
        return [c for c in p["categories"].split("|") if c]

    # baselines
    baselines = {}
    for p in pubs:
        for c in cats(p):
            key = (int(p["year"]), c)
            if key in baselines:
                continue
            cited = [int(q["citations"]) for q in pubs
                     if int(q["year"]) == key[0] and c in cats(q) and int(q["citations"]) >= 1]
            if cited:
                baselines[key] = (sum(cited) / len(cited), len(cited))

    def scaled(p):
        c = int(p["citations"])
        if c == 0:
            return 0.0
        refs = [baselines[(int(p["year"]), k)][0] for k in cats(p) if (int(p["year"]), k) in baselines]
        return c / (sum(refs) / len(refs))

    pub_by_id = {p["pub_id"]: p for p in pubs}
    scheme_of = {t["sds_code"]: t["weighting_scheme"] for t in tax}
    uda_of = {t["sds_code"]: t["uda_code"] for t in tax}

    fss, productive = {}, {}
    for r in profs:
        rid = r["researcher_id"]
        t = int(r["years_active"]) if r["years_active"] else span
        total = 0.0
        mine = [a for a in auths if a["researcher_id"] == rid]
        for a in mine:
            p = pub_by_id[a["pub_id"]]
            byline = sorted((b for b in auths if b["pub_id"] == a["pub_id"]), key=lambda b: int(b["position"]))
            same = byline[0]["affiliation_id"] == byline[-1]["affiliation_id"]
            w = oracle_weights(len(byline), scheme_of[r["sds_code"]], same)
            total += scaled(p) * w[int(a["position"]) - 1]
        fss[rid] = total / t
        productive[rid] = bool(mine)

    field_mean, eligible = {}, {}
    for t in tax:
        members = [r["researcher_id"] for r in profs if r["sds_code"] == t["sds_code"]]
        prod = [fss[m] for m in members if productive[m]]
        field_mean[t["sds_code"]] = sum(prod) / len(prod) if prod else None
        eligible[t["sds_code"]] = bool(members) and len(prod) / len(members) >= 0.5 and bool(field_mean[t["sds_code"]])

    fss_n = {}
    for r in profs:
        m = field_mean[r["sds_code"]]
        if m:
            fss_n[r["researcher_id"]] = fss[r["researcher_id"]] / m if productive[r["researcher_id"]] else 0.0

    province_of_uni = {u["university_id"]: u["province_code"] for u in unis}
    region_of_prov = {t["province_code"]: t["region_code"] for t in terr}

    def territory(r, level):
        prov = province_of_uni[r["university_id"]]
        return region_of_prov[prov] if level == "region" else prov

    cells = {}
    for level in ("region", "province"):
        for gran, floor in (("sds", 6), ("uda", 10)):
            groups = {}
            for r in profs:
                if not eligible[r["sds_code"]]:
                    continue
                f = r["sds_code"] if gran == "sds" else uda_of[r["sds_code"]]
                groups.setdefault((territory(r, level), f), []).append(fss_n[r["researcher_id"]])
            kept = {k: (len(v), sum(v) / len(v)) for k, v in groups.items() if len(v) >= floor}
            ranked = {}
            for (t, f), (staff, avg) in kept.items():
                cohort = [a for (t2, f2), (_, a) in kept.items() if f2 == f]
                rank = 1 + sum(1 for a in cohort if a > avg)
                n = len(cohort)
                pct = 100.0 if n == 1 else 100.0 * (n - rank) / (n - 1)
                local = [a for (t2, f2), (_, a) in kept.items() if t2 == t]
                local_rank = 1 + sum(1 for a in local if a > avg)
                ranked[(t, f)] = {"staff": staff, "avg": avg, "rank": rank, "percentile": pct,
                                  "cohort": n, "local_rank": local_rank}
            cells[(level, gran)] = ranked

    return {
        "baselines": baselines,
        "fss": fss,
        "fss_n": fss_n,
        "productive": productive,
        "field_mean": field_mean,
        "eligible": eligible,
        "cells": cells,
    }
