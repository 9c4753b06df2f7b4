"""Daily posting-strategy mixes on the 3-simplex and their symbol dynamics.

A user's activity on one day is summarized by the fraction of tweets in each
category: ``p = (original, spreading, amplifying)``, a point on the standard
2-simplex. The simplex is partitioned into seven regions:

* ``A``/``B``/``C`` - corner regions where one component dominates
  (original / spreading / amplifying respectively, component >= 2/3);
* ``D``/``E``/``F`` - edge regions where one component is nearly absent
  (minimum component <= 1/6): ``D`` is the edge opposite *original*
  (little original posting), ``E`` opposite *amplifying*, ``F`` opposite
  *spreading*;
* ``G`` - the interior (balanced mix).

Corner tests run first, so a point qualifying for both goes to its corner.
Ties take the first component in (original, spreading, amplifying) order.

Symbol distributions pooled over user-days feed a chi-square statistic
comparing an observed era against a reference era:
``chi2 = sum_s (O_s - E_s)^2 / E_s`` with ``E_s = total(O) * ref_share(s)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ingest import TweetCategory, TweetRecord, categorize
from .timeseries import DayWindow

logger = logging.getLogger(__name__)

ALPHABET = ("A", "B", "C", "D", "E", "F", "G")

# corner symbol per dominant component, edge symbol per near-absent component
_CORNER = {0: "A", 1: "B", 2: "C"}
_EDGE = {0: "D", 1: "F", 2: "E"}

_CATEGORY_INDEX = {
    TweetCategory.ORIGINAL: 0,
    TweetCategory.SPREADING: 1,
    TweetCategory.AMPLIFYING: 2,
}


@dataclass(frozen=True)
class SimplexPartition:
    """Thresholds of the seven-region partition."""

    corner_threshold: float = 2.0 / 3.0
    edge_threshold: float = 1.0 / 6.0

    def __post_init__(self) -> None:
        if not 0.5 < self.corner_threshold <= 1.0:
            raise ValueError("corner_threshold must be in (0.5, 1]")
        if not 0.0 <= self.edge_threshold < 1.0 / 3.0:
            raise ValueError("edge_threshold must be in [0, 1/3)")


DEFAULT_PARTITION = SimplexPartition()


@dataclass(frozen=True)
class StrategyPoint:
    """Category mix for one user-day; components sum to 1."""

    t: int
    p: tuple[float, float, float]

    def __post_init__(self) -> None:
        if len(self.p) != 3 or any(c < 0 for c in self.p):
            raise ValueError(f"bad simplex point {self.p}")
        if abs(sum(self.p) - 1.0) > 1e-9:
            raise ValueError(f"simplex point {self.p} does not sum to 1")


def strategy_vector(category_counts: Sequence[float], t: int = 0) -> StrategyPoint:
    """Normalize one day's (original, spreading, amplifying) counts."""
    counts = np.asarray(category_counts, dtype=np.float64)
    if counts.shape != (3,):
        raise ValueError(f"need 3 category counts, got shape {counts.shape}")
    total = counts.sum()
    if total <= 0:
        raise ValueError("no tweets on this day; strategy undefined")
    p = counts / total
    return StrategyPoint(t=t, p=(float(p[0]), float(p[1]), float(p[2])))


def symbolize(
    point: StrategyPoint | Sequence[float],
    partition: SimplexPartition = DEFAULT_PARTITION,
) -> str:
    """Symbol A-G of a simplex point under the partition."""
    p = point.p if isinstance(point, StrategyPoint) else tuple(point)
    arr = np.asarray(p, dtype=np.float64)
    hi = int(np.argmax(arr))
    if arr[hi] >= partition.corner_threshold:
        return _CORNER[hi]
    lo = int(np.argmin(arr))
    if arr[lo] <= partition.edge_threshold:
        return _EDGE[lo]
    return "G"


@dataclass(frozen=True)
class SymbolDistribution:
    """Counts of user-days per symbol; immutable once built."""

    counts: Mapping[str, int]

    def __post_init__(self) -> None:
        unknown = set(self.counts) - set(ALPHABET)
        if unknown:
            raise ValueError(f"unknown symbols {sorted(unknown)}")
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("negative symbol count")
        full = {s: int(self.counts.get(s, 0)) for s in ALPHABET}
        if sum(full.values()) == 0:
            raise ValueError("empty symbol distribution")
        object.__setattr__(self, "counts", full)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def normalized(self) -> dict[str, float]:
        n = self.total
        return {s: c / n for s, c in self.counts.items()}


def daily_category_counts(
    records: Iterable[TweetRecord],
    campaign_users: set[str],
    user_id: str,
    window: DayWindow,
) -> np.ndarray:
    """(n_days, 3) array of per-day category counts for one user."""
    out = np.zeros((window.n_days, 3), dtype=np.int64)
    for rec in records:
        if rec.user_id != user_id:
            continue
        t = window.offset_of(rec.timestamp)
        if t is None:
            continue
        out[t, _CATEGORY_INDEX[categorize(rec, campaign_users)]] += 1
    return out


def symbol_sequence(
    records: Iterable[TweetRecord],
    campaign_users: set[str],
    user_id: str,
    window: DayWindow,
    partition: SimplexPartition = DEFAULT_PARTITION,
) -> list[tuple[int, str]]:
    """(day offset, symbol) for each day the user tweeted, in day order.

    Days with no tweets are skipped; the strategy is undefined there.
    """
    table = daily_category_counts(records, campaign_users, user_id, window)
    seq: list[tuple[int, str]] = []
    for t in range(window.n_days):
        if table[t].sum() == 0:
            continue
        seq.append((t, symbolize(strategy_vector(table[t], t=t), partition)))
    return seq


def symbol_string(sequence: Sequence[tuple[int, str]]) -> str:
    """Active-day symbols concatenated in day order."""
    return "".join(sym for _, sym in sequence)


def symbol_distribution(
    records: Sequence[TweetRecord],
    campaign_users: set[str],
    users: Iterable[str],
    window: DayWindow,
    partition: SimplexPartition = DEFAULT_PARTITION,
) -> SymbolDistribution:
    """Pool active user-days of a cohort over a window into symbol counts."""
    counts = {s: 0 for s in ALPHABET}
    any_days = False
    for user_id in sorted(set(users)):
        for _, sym in symbol_sequence(
            records, campaign_users, user_id, window, partition
        ):
            counts[sym] += 1
            any_days = True
    if not any_days:
        raise ValueError("no active user-days in window; distribution undefined")
    return SymbolDistribution(counts=counts)


def chi_square_shift(
    observed: SymbolDistribution, reference: SymbolDistribution
) -> float:
    """Chi-square distance of observed symbol counts from reference shares.

    Expected counts are ``total(observed) * share_reference(symbol)``. A
    symbol observed but absent from the reference would divide by zero; its
    expected count is floored at 0.5 and a warning logged. Symbols absent
    from both contribute nothing.
    """
    shares = reference.normalized
    total = observed.total
    chi2 = 0.0
    for sym in ALPHABET:
        o = observed.counts[sym]
        e = total * shares[sym]
        if e == 0.0:
            if o == 0:
                continue
            logger.warning(
                "chi_square_shift: symbol %s absent from reference, "
                "flooring expected count at 0.5",
                sym,
            )
            e = 0.5
        chi2 += (o - e) ** 2 / e
    return chi2


def shift_critical_value(alpha: float = 0.999, df: int = 6) -> float:
    """Chi-square critical value for the seven-symbol shift test."""
    from scipy.stats import chi2 as chi2_dist

    return float(chi2_dist.ppf(alpha, df))
