"""Daily tweet-count series: windows, accumulation, detrending, segment fits.

Time is discretized to UTC calendar days. A :class:`DayWindow` is half-open,
``[start, end)``, so ``DayWindow(2016-03-09, 2016-11-08)`` covers exactly 244
days and a tweet posted on the end date falls outside. Day offset ``t`` counts
from the window start (``t = 0`` is the first day).

The detrend step subtracts a trailing moving average: with window ``w`` the
output is ``xi[t] = nu[t] - mean(nu[t-w .. t-1])`` for ``t >= w``, so the
oscillator series is ``w`` samples shorter than the input and carries no
padding. A constant input maps to all zeros; a pure linear ramp maps to the
constant ``slope * (w + 1) / 2``.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, typing only
    from .ingest import TweetRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DayWindow:
    """Half-open range of UTC calendar days, ``[start, end)``."""

    start: date
    end: date

    def __post_init__(self) -> None:
        if self.start >= self.end:
            raise ValueError(f"empty window: {self.start} .. {self.end}")

    @property
    def n_days(self) -> int:
        return (self.end - self.start).days

    @classmethod
    def of_length(cls, start: date, n_days: int) -> "DayWindow":
        from datetime import timedelta

        return cls(start, start + timedelta(days=n_days))

    def date_of(self, t: int) -> date:
        """Calendar date of day offset ``t`` (0-based from start)."""
        from datetime import timedelta

        if not 0 <= t < self.n_days:
            raise IndexError(f"day offset {t} outside window of {self.n_days} days")
        return self.start + timedelta(days=t)

    def offset_of(self, when: datetime | date) -> int | None:
        """Day offset of a timestamp or date, or None if outside the window.

        Naive datetimes are taken as UTC; aware ones are converted.
        """
        if isinstance(when, datetime):
            if when.tzinfo is not None:
                when = when.astimezone(timezone.utc)
            day = when.date()
        else:
            day = when
        t = (day - self.start).days
        if 0 <= t < self.n_days:
            return t
        return None

    def contains(self, when: datetime | date) -> bool:
        return self.offset_of(when) is not None


def _readonly(values: np.ndarray) -> np.ndarray:
    out = np.array(values, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class CountSeries:
    """Per-day tweet counts for one user (or the aggregate, user_id=None)."""

    window: DayWindow
    values: np.ndarray
    user_id: str | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if values.ndim != 1 or len(values) != self.window.n_days:
            raise ValueError(
                f"need {self.window.n_days} daily values, got shape {values.shape}"
            )
        if np.any(values < 0):
            raise ValueError("negative daily count")
        object.__setattr__(self, "values", _readonly(values.astype(np.int64)))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class OscillatorSeries:
    """Detrended daily series; sample ``i`` is day offset ``i + ma_window``."""

    window: DayWindow
    values: np.ndarray
    ma_window: int
    user_id: str | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64)
        expect = self.window.n_days - self.ma_window
        if values.ndim != 1 or len(values) != expect:
            raise ValueError(f"need {expect} detrended values, got {values.shape}")
        object.__setattr__(self, "values", _readonly(values))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def day_offsets(self) -> np.ndarray:
        """Day offsets (within the window) that each sample corresponds to."""
        return np.arange(self.ma_window, self.window.n_days)


@dataclass(frozen=True)
class LinearFit:
    """OLS line ``S_hat(t) = intercept + slope * (t - t0)`` on a day range."""

    intercept: float
    slope: float
    t0: int
    se_intercept: float
    se_slope: float
    r2_adj: float
    n_points: int
    t_range: tuple[int, int]

    def predict(self, t: np.ndarray | float) -> np.ndarray | float:
        return self.intercept + self.slope * (np.asarray(t, dtype=float) - self.t0)

    def slope_interval(self, sigma: float = 5.0) -> tuple[float, float]:
        """Slope estimate +- sigma standard errors."""
        return (self.slope - sigma * self.se_slope, self.slope + sigma * self.se_slope)

    def intercept_interval(self, sigma: float = 5.0) -> tuple[float, float]:
        return (
            self.intercept - sigma * self.se_intercept,
            self.intercept + sigma * self.se_intercept,
        )


@dataclass(frozen=True)
class ChangePointReport:
    """Disjoint-slope-interval verdict for two adjacent segment fits."""

    fit_before: LinearFit
    fit_after: LinearFit
    sigma: float
    interval_before: tuple[float, float]
    interval_after: tuple[float, float]
    significant: bool


def daily_counts(
    records: Iterable["TweetRecord"],
    window: DayWindow,
    user_id: str | None = None,
) -> CountSeries:
    """Count tweets per day inside the window.

    With ``user_id`` set only that user's tweets are counted; otherwise all
    records contribute (aggregate series). Records outside the window are
    ignored.
    """
    values = np.zeros(window.n_days, dtype=np.int64)
    for rec in records:
        if user_id is not None and rec.user_id != user_id:
            continue
        t = window.offset_of(rec.timestamp)
        if t is not None:
            values[t] += 1
    return CountSeries(window=window, values=values, user_id=user_id)


def counts_by_user(
    records: Iterable["TweetRecord"],
    window: DayWindow,
    users: Iterable[str],
) -> dict[str, CountSeries]:
    """Daily count series for each requested user, in one pass."""
    users = set(users)
    table = {u: np.zeros(window.n_days, dtype=np.int64) for u in users}
    for rec in records:
        if rec.user_id not in table:
            continue
        t = window.offset_of(rec.timestamp)
        if t is not None:
            table[rec.user_id][t] += 1
    return {
        u: CountSeries(window=window, values=v, user_id=u)
        for u, v in sorted(table.items())
    }


def accumulate(series: CountSeries) -> np.ndarray:
    """Cumulative tweet count S(t); non-decreasing, S(t) = sum_{s<=t} nu(s)."""
    return np.cumsum(series.values)


def detrend(series: CountSeries, ma_window: int = 7) -> OscillatorSeries:
    """Subtract the trailing ``ma_window``-day moving average.

    The first ``ma_window`` days have no full trailing window and are dropped,
    never padded: the output has ``len(series) - ma_window`` samples.
    """
    if ma_window < 1:
        raise ValueError("ma_window must be >= 1")
    if len(series) <= ma_window:
        raise ValueError(
            f"series of {len(series)} days too short for ma_window={ma_window}"
        )
    nu = series.values.astype(np.float64)
    csum = np.concatenate([[0.0], np.cumsum(nu)])
    # trailing[t] = mean(nu[t-w .. t-1]) for t in [w, N)
    trailing = (csum[ma_window:-1] - csum[:-ma_window - 1]) / ma_window
    xi = nu[ma_window:] - trailing
    return OscillatorSeries(
        window=series.window, values=xi, ma_window=ma_window, user_id=series.user_id
    )


def fit_segment(
    accumulated: np.ndarray | Sequence[float],
    t_range: tuple[int, int],
    t0: int | None = None,
) -> LinearFit:
    """OLS fit of the accumulation curve on days ``t_range`` (inclusive).

    Classical closed-form standard errors:
    ``se(slope) = sqrt(sigma2 / Sxx)``,
    ``se(intercept) = sqrt(sigma2 * (1/n + xbar^2 / Sxx))`` with
    ``sigma2 = SSE / (n - 2)``; adjusted R^2 uses ``(n - 1) / (n - 2)``.
    """
    s = np.asarray(accumulated, dtype=np.float64)
    lo, hi = t_range
    if not (0 <= lo < hi < len(s)):
        raise ValueError(f"t_range {t_range} outside series of length {len(s)}")
    if t0 is None:
        t0 = lo
    t = np.arange(lo, hi + 1, dtype=np.float64)
    y = s[lo : hi + 1]
    n = len(t)
    if n < 3:
        raise ValueError("need at least 3 points for standard errors")
    x = t - t0
    xbar = x.mean()
    ybar = y.mean()
    sxx = np.sum((x - xbar) ** 2)
    if sxx == 0:
        raise ValueError("degenerate fit range")
    slope = np.sum((x - xbar) * (y - ybar)) / sxx
    intercept = ybar - slope * xbar
    resid = y - (intercept + slope * x)
    sse = np.sum(resid**2)
    tss = np.sum((y - ybar) ** 2)
    sigma2 = sse / (n - 2)
    se_slope = float(np.sqrt(sigma2 / sxx))
    se_intercept = float(np.sqrt(sigma2 * (1.0 / n + xbar**2 / sxx)))
    r2 = 1.0 if tss == 0 else 1.0 - sse / tss
    r2_adj = 1.0 - (1.0 - r2) * (n - 1) / (n - 2)
    return LinearFit(
        intercept=float(intercept),
        slope=float(slope),
        t0=int(t0),
        se_intercept=se_intercept,
        se_slope=se_slope,
        r2_adj=float(r2_adj),
        n_points=n,
        t_range=(lo, hi),
    )


def changepoint_significant(
    fit_before: LinearFit, fit_after: LinearFit, sigma: float = 5.0
) -> ChangePointReport:
    """Disjoint slope-interval test at ``sigma`` standard errors.

    The change point is called significant when the two slope intervals
    ``slope +- sigma * se`` do not overlap. Symmetric in its arguments.
    """
    a = fit_before.slope_interval(sigma)
    b = fit_after.slope_interval(sigma)
    disjoint = a[1] < b[0] or b[1] < a[0]
    return ChangePointReport(
        fit_before=fit_before,
        fit_after=fit_after,
        sigma=sigma,
        interval_before=a,
        interval_after=b,
        significant=bool(disjoint),
    )


def save_series_csv(series: CountSeries, path: str | Path) -> None:
    """Write one series as (day_offset, date, count) rows."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["day_offset", "date", "count"])
        for t, v in enumerate(series.values):
            writer.writerow([t, series.window.date_of(t).isoformat(), int(v)])


def load_series_csv(path: str | Path, user_id: str | None = None) -> CountSeries:
    """Read a series written by :func:`save_series_csv`."""
    path = Path(path)
    offsets: list[int] = []
    dates: list[date] = []
    counts: list[int] = []
    with path.open(newline="") as fh:
        for row in csv.DictReader(fh):
            offsets.append(int(row["day_offset"]))
            dates.append(date.fromisoformat(row["date"]))
            counts.append(int(row["count"]))
    if not offsets:
        raise ValueError(f"no rows in {path}")
    if offsets != list(range(len(offsets))):
        raise ValueError(f"day offsets in {path} are not contiguous from 0")
    window = DayWindow.of_length(dates[0], len(dates))
    return CountSeries(window=window, values=np.array(counts), user_id=user_id)
