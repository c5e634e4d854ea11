"""Rank, percentile and rank-correlation primitives."""

from __future__ import annotations

import math
from bisect import bisect_right
from typing import Sequence, TypeVar

from .errors import DegenerateInput, LengthMismatch, RankOutOfRange

T = TypeVar("T")

TIE_DECIMALS = 3


def tie_key(value: float, round_ties: bool = False) -> float:
    return round(value, TIE_DECIMALS) if round_ties else value


def competition_ranks(values: Sequence[float], round_ties: bool = False) -> list[int]:
    """Standard competition ranking, highest value first ("1224").

    rank(v) = 1 + number of values strictly greater than v. With
    ``round_ties`` values are compared after rounding to three decimals.
    """
    keys = [tie_key(v, round_ties) for v in values]
    ascending = sorted(keys)
    n = len(keys)
    return [1 + n - bisect_right(ascending, k) for k in keys]


def national_percentile(rank: int, cohort_size: int) -> float:
    """Position of a rank within a cohort on a 0-100 scale, 100 = top.

    100 * (N - rank) / (N - 1); a cohort of one is trivially 100.
    """
    if cohort_size < 1 or not 1 <= rank <= cohort_size:
        raise RankOutOfRange(f"rank {rank} outside 1..{cohort_size}")
    if cohort_size == 1:
        return 100.0
    return 100.0 * (cohort_size - rank) / (cohort_size - 1)


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ascending ranks; tied values share the mean of their positions."""
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = shared
        i = j + 1
    return ranks


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman correlation: Pearson correlation of the average ranks."""
    if len(x) != len(y):
        raise LengthMismatch(f"lengths differ: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise DegenerateInput("need at least two observations")
    rx, ry = average_ranks(x), average_ranks(y)
    n = len(rx)
    mx, my = math.fsum(rx) / n, math.fsum(ry) / n
    dx = [a - mx for a in rx]
    dy = [b - my for b in ry]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    if sxx == 0 or syy == 0:
        raise DegenerateInput("all values tied in at least one input")
    rho = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def trim(rows: Sequence[T], top: int = 0, bottom: int = 0) -> list[T]:
    """Keep the first ``top`` and last ``bottom`` rows; 0/0 keeps everything."""
    if top < 0 or bottom < 0:
        raise ValueError("top and bottom must be non-negative")
    if (top == 0 and bottom == 0) or top + bottom >= len(rows):
        return list(rows)
    return list(rows[:top]) + (list(rows[-bottom:]) if bottom else [])
