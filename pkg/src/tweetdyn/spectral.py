"""Frequency-domain modeling and clustering of detrended tweet-rate series.

Pipeline, in the order the operations compose:

1. :func:`dft` - unnormalized forward DFT of the detrended series, keeping
   the non-negative-frequency half spectrum (bins ``0 .. floor(N/2)``).
   Bin ``k`` is a period of ``N / k`` days.
2. :func:`denoise` - zero every bin whose squared magnitude falls strictly
   below the empirical q-quantile of the squared magnitudes.
3. :func:`pca_embed` - project user magnitude spectra onto the leading
   principal axes of the column-mean-centered covariance.
4. :func:`kmedoids` - PAM clustering with seeded restarts; points are
   pre-sorted canonically so the outcome is invariant to input order.
5. :func:`fit_fourier` / :func:`band_summary` / :func:`dominant_period` -
   per-cluster summaries.

Quantile convention: ``Q(q)`` is the smallest squared magnitude such that at
least a ``q`` fraction of bins are at or below it (``sorted[ceil(q*n)-1]``);
``q = 0`` keeps everything. Bins exactly at the threshold survive.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .timeseries import OscillatorSeries

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Spectrum:
    """Half spectrum of one detrended series (unnormalized forward DFT)."""

    bins: np.ndarray
    n_samples: int
    user_id: str | None = None

    def __post_init__(self) -> None:
        bins = np.asarray(self.bins, dtype=np.complex128)
        expect = self.n_samples // 2 + 1
        if bins.ndim != 1 or len(bins) != expect:
            raise ValueError(
                f"need {expect} bins for n_samples={self.n_samples}, got {bins.shape}"
            )
        bins = bins.copy()
        bins.flags.writeable = False
        object.__setattr__(self, "bins", bins)

    def __len__(self) -> int:
        return len(self.bins)

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.bins)

    def period_of_bin(self, k: int) -> float:
        """Period in days represented by bin k (k >= 1)."""
        if not 1 <= k < len(self.bins):
            raise ValueError(f"bin {k} out of range 1..{len(self.bins) - 1}")
        return self.n_samples / k


@dataclass(frozen=True)
class FourierTerm:
    amplitude: float
    omega: float
    phase: float
    bin: int


@dataclass(frozen=True)
class FourierModel:
    """Truncated cosine-sum model of a detrended series."""

    terms: tuple[FourierTerm, ...]
    n_samples: int
    residual_sigma: float
    user_id: str | None = None

    def evaluate(self, t: np.ndarray | None = None) -> np.ndarray:
        if t is None:
            t = np.arange(self.n_samples)
        t = np.asarray(t, dtype=np.float64)
        out = np.zeros_like(t)
        for term in self.terms:
            out += term.amplitude * np.cos(term.omega * t + term.phase)
        return out


@dataclass(frozen=True)
class Embedding:
    """Low-dimensional projection of user spectra."""

    ids: tuple[str, ...]
    points: np.ndarray
    eigenvalues: np.ndarray
    components: np.ndarray

    def __post_init__(self) -> None:
        points = np.asarray(self.points, dtype=np.float64)
        if points.shape[0] != len(self.ids):
            raise ValueError("one embedded point per id required")
        object.__setattr__(self, "points", points)


@dataclass(frozen=True)
class ClusterAssignment:
    """1-based cluster labels plus the medoid id of each cluster."""

    labels: dict[str, int]
    medoids: tuple[str, ...]
    cost: float

    @property
    def k(self) -> int:
        return len(self.medoids)

    def members(self, cluster: int) -> list[str]:
        return sorted(u for u, c in self.labels.items() if c == cluster)


@dataclass(frozen=True)
class BandSummary:
    """Per-bin five-number summary over a set of spectra."""

    mins: np.ndarray
    q1: np.ndarray
    medians: np.ndarray
    q3: np.ndarray
    maxs: np.ndarray
    n_samples: int
    n_spectra: int


def dft(series: OscillatorSeries | np.ndarray, user_id: str | None = None) -> Spectrum:
    """Unnormalized forward DFT, half spectrum.

    ``X_k = sum_t xi[t] * exp(-2i pi k t / N)`` for ``k = 0 .. floor(N/2)``.
    """
    if isinstance(series, OscillatorSeries):
        values = series.values
        user_id = user_id or series.user_id
    else:
        values = np.asarray(series, dtype=np.float64)
    if values.ndim != 1 or len(values) < 2:
        raise ValueError("need a 1-d series of at least 2 samples")
    return Spectrum(bins=np.fft.rfft(values), n_samples=len(values), user_id=user_id)


def squared_magnitude_quantile(spectrum: Spectrum, q: float) -> float:
    """Empirical inverse-CDF quantile of the squared bin magnitudes."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    power = np.sort(spectrum.magnitudes**2)
    if q == 0.0:
        return 0.0
    idx = math.ceil(q * len(power)) - 1
    return float(power[idx])


def denoise(spectrum: Spectrum, q: float = 0.33) -> Spectrum:
    """Zero bins whose squared magnitude is strictly below the q-quantile."""
    threshold = squared_magnitude_quantile(spectrum, q)
    power = spectrum.magnitudes**2
    bins = np.where(power < threshold, 0.0 + 0.0j, spectrum.bins)
    return Spectrum(bins=bins, n_samples=spectrum.n_samples, user_id=spectrum.user_id)


def reconstruct(spectrum: Spectrum) -> np.ndarray:
    """Inverse DFT from the half spectrum back to the time domain."""
    return np.fft.irfft(spectrum.bins, n=spectrum.n_samples)


def fit_fourier(
    spectrum: Spectrum,
    series: OscillatorSeries | np.ndarray | None = None,
    j_terms: int = 6,
) -> FourierModel:
    """Cosine-sum model from the ``j_terms`` largest-magnitude bins.

    Amplitudes follow the half-spectrum convention that makes the all-bins
    model reproduce the series exactly: ``A_k = 2|X_k|/N`` for interior bins,
    ``|X_k|/N`` for bin 0 and (even N) the Nyquist bin. Terms are ordered by
    descending amplitude, ties by bin index. ``residual_sigma`` is the RMS
    misfit against ``series`` when given, else NaN.
    """
    n = spectrum.n_samples
    n_bins = len(spectrum.bins)
    if not 1 <= j_terms <= n_bins:
        raise ValueError(f"j_terms must be in 1..{n_bins}")
    mags = spectrum.magnitudes
    order = np.lexsort((np.arange(n_bins), -mags))
    chosen = sorted(order[:j_terms])
    terms = []
    for k in chosen:
        x = spectrum.bins[k]
        half_weight = k == 0 or (n % 2 == 0 and k == n // 2)
        amp = (1.0 if half_weight else 2.0) * np.abs(x) / n
        terms.append(
            FourierTerm(
                amplitude=float(amp),
                omega=2.0 * math.pi * k / n,
                phase=float(np.angle(x)),
                bin=int(k),
            )
        )
    terms.sort(key=lambda t: (-t.amplitude, t.bin))
    residual_sigma = float("nan")
    if series is not None:
        values = series.values if isinstance(series, OscillatorSeries) else series
        values = np.asarray(values, dtype=np.float64)
        if len(values) != n:
            raise ValueError("series length does not match spectrum n_samples")
        model = FourierModel(
            terms=tuple(terms), n_samples=n, residual_sigma=float("nan"),
            user_id=spectrum.user_id,
        ).evaluate()
        residual_sigma = float(np.std(values - model))
    return FourierModel(
        terms=tuple(terms),
        n_samples=n,
        residual_sigma=residual_sigma,
        user_id=spectrum.user_id,
    )


def spectra_matrix(spectra: Sequence[Spectrum]) -> tuple[list[str], np.ndarray]:
    """Stack magnitude spectra into an (n_users, n_bins) matrix, sorted by id."""
    if not spectra:
        raise ValueError("no spectra")
    n_bins = {len(s) for s in spectra}
    if len(n_bins) != 1:
        raise ValueError(f"mixed bin counts {sorted(n_bins)}")
    ids = [s.user_id or "" for s in spectra]
    if len(set(ids)) != len(ids) or "" in ids:
        raise ValueError("spectra must carry distinct user ids")
    order = np.argsort(ids)
    matrix = np.vstack([spectra[i].magnitudes for i in order])
    return [ids[i] for i in order], matrix


def pca_embed(
    matrix: np.ndarray,
    ids: Sequence[str],
    dims: int = 3,
    normalize_rows: bool = False,
) -> Embedding:
    """Project rows onto the leading principal axes.

    The covariance is over column-mean-centered data (rows optionally unit-
    normalized first). Eigenvalues are reported for the full column space,
    descending; ranks below ``dims`` are projected with a warning. Component
    signs are fixed so each axis's largest-magnitude loading is positive.
    """
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError("matrix must be 2-d")
    n, m = x.shape
    if len(ids) != n:
        raise ValueError("one id per row required")
    if dims < 1:
        raise ValueError("dims must be >= 1")
    if n < dims + 1:
        raise ValueError(f"need at least {dims + 1} rows for a {dims}-d embedding")
    if normalize_rows:
        norms = np.linalg.norm(x, axis=1, keepdims=True)
        zero = norms[:, 0] == 0
        if zero.any():
            logger.warning("pca_embed: %d all-zero rows left unnormalized", zero.sum())
        norms[zero] = 1.0
        x = x / norms
    centered = x - x.mean(axis=0, keepdims=True)
    # SVD of the centered matrix == eigendecomposition of its covariance.
    _, singular, vt = np.linalg.svd(centered, full_matrices=False)
    eigenvalues = np.zeros(m)
    eigenvalues[: len(singular)] = singular**2 / (n - 1)
    rank = int(np.sum(singular > singular[0] * 1e-12)) if len(singular) else 0
    if rank < dims:
        logger.warning(
            "pca_embed: data rank %d below requested dims %d; "
            "trailing axes carry no variance",
            rank,
            dims,
        )
    components = vt[:dims].copy()
    for i in range(components.shape[0]):
        j = int(np.argmax(np.abs(components[i])))
        if components[i, j] < 0:
            components[i] = -components[i]
    points = centered @ components.T
    return Embedding(
        ids=tuple(ids),
        points=points,
        eigenvalues=eigenvalues,
        components=components,
    )


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.sum(diff**2, axis=-1))


def _assign(dist: np.ndarray, medoids: list[int]) -> np.ndarray:
    # nearest medoid; ties go to the earliest medoid in list order
    sub = dist[:, medoids]
    return np.argmin(sub, axis=1)


def _total_cost(dist: np.ndarray, medoids: list[int]) -> float:
    return float(dist[:, medoids].min(axis=1).sum())


def kmedoids(
    points: np.ndarray,
    ids: Sequence[str],
    k: int = 4,
    seed: int = 0,
    restarts: int = 10,
) -> ClusterAssignment:
    """PAM clustering under Euclidean distance, best of ``restarts`` runs.

    Points are first sorted canonically by (coordinates, id) so the result
    does not depend on input order. Each restart seeds distinct initial
    medoids, alternates assignment and per-cluster medoid updates to
    convergence, then applies swap descent until no single medoid swap lowers
    the summed distance. The best restart wins; ties prefer the smaller
    medoid id tuple. Labels are 1-based, numbered by medoid canonical order.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or len(pts) == 0:
        raise ValueError("points must be a nonempty 2-d array")
    n = len(pts)
    if len(ids) != n or len(set(ids)) != n:
        raise ValueError("need one distinct id per point")
    distinct = {tuple(row) for row in pts}
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    if k > len(distinct):
        raise ValueError(f"k={k} exceeds {len(distinct)} distinct points")

    order = sorted(range(n), key=lambda i: (tuple(pts[i]), ids[i]))
    pts = pts[order]
    sorted_ids = [ids[i] for i in order]
    dist = _pairwise_distances(pts)

    # representatives of distinct coordinates, for duplicate-free seeding
    seen: dict[tuple, int] = {}
    for i, row in enumerate(pts):
        seen.setdefault(tuple(row), i)
    candidates = np.array(sorted(seen.values()))

    rng = np.random.default_rng(seed)
    best: tuple[float, tuple[int, ...], list[int]] | None = None
    for _ in range(restarts):
        medoids = sorted(rng.choice(candidates, size=k, replace=False).tolist())
        # alternate assignment / medoid update (guarded against tie cycles)
        for _ in range(200):
            labels = _assign(dist, medoids)
            new_medoids: list[int] = []
            for c in range(k):
                members = np.flatnonzero(labels == c)
                if len(members) == 0:
                    new_medoids.append(medoids[c])
                    continue
                within = dist[np.ix_(members, members)].sum(axis=1)
                new_medoids.append(int(members[np.argmin(within)]))
            new_medoids = sorted(set(new_medoids))
            while len(new_medoids) < k:  # collapsed clusters get re-seeded
                spare = [c for c in candidates if c not in new_medoids]
                far = max(spare, key=lambda i: dist[i, new_medoids].min())
                new_medoids.append(int(far))
                new_medoids.sort()
            if new_medoids == medoids:
                break
            medoids = new_medoids
        # swap descent
        improved = True
        while improved:
            improved = False
            cost = _total_cost(dist, medoids)
            best_swap: tuple[float, int, int] | None = None
            for mi, m in enumerate(medoids):
                for c in range(n):
                    if c in medoids:
                        continue
                    trial = medoids[:mi] + [c] + medoids[mi + 1 :]
                    trial_cost = _total_cost(dist, trial)
                    if trial_cost < cost - 1e-12 and (
                        best_swap is None or trial_cost < best_swap[0]
                    ):
                        best_swap = (trial_cost, mi, c)
            if best_swap is not None:
                _, mi, c = best_swap
                medoids[mi] = c
                medoids.sort()
                improved = True
        cost = _total_cost(dist, medoids)
        key = (cost, tuple(sorted_ids[m] for m in sorted(medoids)))
        if best is None or key < (best[0], best[1]):
            best = (key[0], key[1], sorted(medoids))

    assert best is not None
    cost, _, medoids = best
    labels = _assign(dist, medoids)
    label_map = {sorted_ids[i]: int(labels[i]) + 1 for i in range(n)}
    return ClusterAssignment(
        labels=label_map,
        medoids=tuple(sorted_ids[m] for m in medoids),
        cost=cost,
    )


def band_summary(spectra: Sequence[Spectrum]) -> BandSummary:
    """Five-number summary of magnitudes per bin across spectra."""
    if not spectra:
        raise ValueError("no spectra to summarize")
    n_samples = {s.n_samples for s in spectra}
    if len(n_samples) != 1:
        raise ValueError("spectra have mixed sample counts")
    mags = np.vstack([s.magnitudes for s in spectra])
    q1, med, q3 = np.percentile(mags, [25, 50, 75], axis=0)
    return BandSummary(
        mins=mags.min(axis=0),
        q1=q1,
        medians=med,
        q3=q3,
        maxs=mags.max(axis=0),
        n_samples=n_samples.pop(),
        n_spectra=len(spectra),
    )


def median_spectrum(spectra: Sequence[Spectrum]) -> Spectrum:
    """Spectrum whose bins are the per-bin median magnitudes (real-valued)."""
    summary = band_summary(spectra)
    return Spectrum(
        bins=summary.medians.astype(np.complex128),
        n_samples=summary.n_samples,
    )


def dominant_period(spectrum: Spectrum) -> float:
    """Period (days) of the largest-magnitude bin, excluding bin 0."""
    mags = spectrum.magnitudes
    if len(mags) < 2:
        raise ValueError("spectrum has no oscillatory bins")
    if np.all(mags[1:] == 0):
        raise ValueError("all oscillatory bins are zero; no dominant period")
    k = 1 + int(np.argmax(mags[1:]))
    return spectrum.n_samples / k
