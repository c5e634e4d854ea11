"""Fractional contribution of each author in a byline.

Two schemes are supported per field. ``alphabetical`` splits credit
equally. ``byline`` credits position: when first and last author share an
affiliation (intramural) they get 40% each and the middle authors split
20%; otherwise (extramural) first and last get 30%, second and
penultimate 15%, the rest split 10%.

Short bylines where those roles overlap fall back to fixed shapes that keep
the symmetry of the full rule and are renormalized to sum to one:

=====  ==========================  ===============================
n      intramural                  extramural
=====  ==========================  ===============================
1      [1]                         [1]
2      [1/2, 1/2]                  [1/2, 1/2]
3      [fl, rest, fl]              [fl, sp + rest/2, fl] / total
4      [fl, rest/2, rest/2, fl]    [fl, sp, sp, fl] / total
=====  ==========================  ===============================
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

from .errors import ConfigError, EmptyByline
from .model import Authorship, WeightingScheme

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


@dataclass(frozen=True)
class WeightTable:
    intramural_first_last: float = 0.40
    intramural_rest: float = 0.20
    extramural_first_last: float = 0.30
    extramural_second_penultimate: float = 0.15
    extramural_rest: float = 0.10

    def __post_init__(self) -> None:
        for k, v in asdict(self).items():
            if not (isinstance(v, (int, float)) and v >= 0 and math.isfinite(v)):
                raise ConfigError(f"weight {k} must be a non-negative number, got {v!r}")
        intra = 2 * self.intramural_first_last + self.intramural_rest
        extra = (2 * self.extramural_first_last + 2 * self.extramural_second_penultimate
                 + self.extramural_rest)
        if abs(intra - 1) > 1e-9 or abs(extra - 1) > 1e-9:
            raise ConfigError(
                f"byline weights must sum to 1 (intramural {intra:g}, extramural {extra:g})")
        if self.intramural_first_last == 0 or self.extramural_first_last == 0:
            raise ConfigError("first/last author weights must be positive")

    @classmethod
    def from_toml(cls, path: str | Path) -> WeightTable:
        try:
            raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, tomllib.TOMLDecodeError) as e:
            raise ConfigError(f"cannot read weight table {path}: {e}") from None
        unknown = set(raw) - set(cls.__dataclass_fields__)
        if unknown:
            raise ConfigError(f"{path}: unknown weight keys {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in raw.items()})

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


DEFAULT_WEIGHTS = WeightTable()


def _normalized(raw: list[float]) -> tuple[float, ...]:
    total = math.fsum(raw)
    return tuple(w / total for w in raw)


@lru_cache(maxsize=4096)
def weight_vector(n: int, scheme: WeightingScheme, intramural: bool,
                  table: WeightTable = DEFAULT_WEIGHTS) -> tuple[float, ...]:
    """Weights for positions 1..n of an n-author byline."""
    if n < 1:
        raise EmptyByline("a byline needs at least one author")
    if scheme is WeightingScheme.ALPHABETICAL or n <= 2:
        return (1.0 / n,) * n

    if intramural:
        fl, rest = table.intramural_first_last, table.intramural_rest
        middle = [rest / (n - 2)] * (n - 2)
        return _normalized([fl, *middle, fl])

    fl, sp, rest = (table.extramural_first_last, table.extramural_second_penultimate,
                    table.extramural_rest)
    if n == 3:
        return _normalized([fl, sp + rest / 2, fl])
    if n == 4:
        return _normalized([fl, sp, sp, fl])
    inner = [rest / (n - 4)] * (n - 4)
    return _normalized([fl, sp, *inner, sp, fl])


def fractional_weights(byline: Sequence[Authorship], scheme: WeightingScheme,
                       table: WeightTable = DEFAULT_WEIGHTS) -> tuple[float, ...]:
    if not byline:
        raise EmptyByline("a byline needs at least one author")
    intramural = byline[0].affiliation_id == byline[-1].affiliation_id
    return weight_vector(len(byline), WeightingScheme(scheme), intramural, table)
