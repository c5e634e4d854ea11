"""Attach ranking values to GeoJSON boundary features for choropleth maps."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any

from .errors import FssError

INJECTED = ("avg_fss_n", "rank", "percentile")
NO_DATA = "no_data"


class GeoJSONError(FssError):
    pass


def read_rankings(path: str | Path, field: str | None = None) -> dict[str, dict[str, Any]]:
    """territory_code -> {avg_fss_n, rank, percentile} from a ranking CSV."""
    out: dict[str, dict[str, Any]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"territory_code", "field_code", *INJECTED} - set(reader.fieldnames or ())
        if missing:
            raise GeoJSONError(f"{path}: ranking CSV lacks columns {sorted(missing)}")
        for row in reader:
            if field is not None and row["field_code"] != field:
                continue
            code = row["territory_code"]
            if code in out:
                raise GeoJSONError(
                    f"{path}: territory {code!r} appears more than once; select one field")
            out[code] = {
                "avg_fss_n": float(row["avg_fss_n"]),
                "rank": int(row["rank"]),
                "percentile": float(row["percentile"]),
            }
    return out


def join(geo: dict, values: dict[str, dict[str, Any]], key: str) -> tuple[dict, list[str]]:
    """Return an annotated copy of ``geo`` and the codes that matched no feature.

    Matched features get ``avg_fss_n``, ``rank`` and ``percentile``; the rest
    get ``no_data: true``.
    """
    if not isinstance(geo, dict) or geo.get("type") != "FeatureCollection" \
            or not isinstance(geo.get("features"), list):
        raise GeoJSONError("boundaries must be a GeoJSON FeatureCollection")
    seen = set()
    features = []
    for i, feat in enumerate(geo["features"]):
        if not isinstance(feat, dict) or feat.get("type") != "Feature":
            raise GeoJSONError(f"feature {i} is not a GeoJSON Feature")
        props = dict(feat.get("properties") or {})
        if key not in props:
            raise GeoJSONError(f"feature {i} has no property {key!r}")
        code = str(props[key])
        if code in values:
            props.update(values[code])
            seen.add(code)
        else:
            props[NO_DATA] = True
        features.append({**feat, "properties": props})
    unmatched = sorted(set(values) - seen)
    return {**geo, "features": features}, unmatched


def strip(geo: dict) -> dict:
    """Remove the properties added by :func:`join`."""
    features = []
    for feat in geo["features"]:
        props = {k: v for k, v in feat["properties"].items() if k not in (*INJECTED, NO_DATA)}
        features.append({**feat, "properties": props})
    return {**geo, "features": features}


def load(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise GeoJSONError(f"{path}: malformed JSON: {e}") from None
