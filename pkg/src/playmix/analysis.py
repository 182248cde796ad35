"""Addiction-ratio analyses over a trained state.

Each play gets a leave-one-out posterior pair (probability the play was
taste-driven vs addiction-driven) read off the final sampler state. Reports
sum those pairs over a grouping (user, artist, topic, hour of day, day of
week), normalize each group's pair to 1, and keep the group's log count as
support.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from datetime import tzinfo
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .evaluation import PointEstimates
from .ingest import SessionizedDataset
from .model import ModelState

logger = logging.getLogger("playmix.analysis")

WEEKDAY_KEYS = ("Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun")

PERIOD_HOUR = "hour-of-day"
PERIOD_WEEKDAY = "day-of-week"


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


@dataclass(frozen=True, eq=False)
class LogPosterior:
    """Per-log posterior pair in canonical log order; p0 + p1 = 1."""

    p0: np.ndarray
    p1: np.ndarray


@dataclass(frozen=True, slots=True)
class ReportEntry:
    key: str
    taste_ratio: float
    addiction_ratio: float
    support: int
    flagged: bool = False


@dataclass(frozen=True, slots=True)
class AddictionReport:
    """Entries of one grouping; empty_keys lists buckets with no logs."""

    key: str
    entries: tuple[ReportEntry, ...]
    empty_keys: tuple[str, ...] = ()


@dataclass(frozen=True, slots=True)
class Histogram:
    """Left-closed bins over [0, 1]; the last bin includes 1.0."""

    edges: tuple[float, ...]
    counts: tuple[int, ...]


def compute_log_posteriors(state: ModelState) -> LogPosterior:
    """Leave-one-out switch posterior for every training log.

    Uses exactly the sampling weights, but returns the normalized pair
    instead of drawing; the state is left untouched.
    """
    if state.hp.variant != "swa":
        raise RuntimeError("switch posteriors exist only for the swa variant")
    n = state.data.num_logs
    p0 = np.empty(n)
    p1 = np.empty(n)
    for i in range(n):
        u, a, k, flag = state._remove_log_counts(i)
        lw0, lw1 = state._switch_log_weights(u, a, k)
        state._add_log_counts(i, u, a, k, flag)
        m = lw0 if lw0 >= lw1 else lw1
        w0 = math.exp(lw0 - m)
        w1 = math.exp(lw1 - m)
        total = w0 + w1
        p0[i] = w0 / total
        p1[i] = w1 / total
    return LogPosterior(p0=p0, p1=p1)


def _histogram(values: np.ndarray, bins: int) -> Histogram:
    if bins < 2:
        raise ValueError("bins must be >= 2")
    edges = np.linspace(0.0, 1.0, bins + 1)
    counts, _ = np.histogram(values, bins=edges)
    return Histogram(edges=tuple(float(e) for e in edges), counts=tuple(int(c) for c in counts))


def user_addiction_report(
    est: PointEstimates, bins: int = 10
) -> tuple[AddictionReport, Histogram]:
    """Per-user taste/addiction split plus the histogram of addiction weights."""
    entries = tuple(
        ReportEntry(
            key=user,
            taste_ratio=float(est.lambda0[i]),
            addiction_ratio=float(est.lambda1[i]),
            support=int(est.plays[i]),
        )
        for i, user in enumerate(est.users)
    )
    return AddictionReport(key="user", entries=entries), _histogram(est.lambda1, bins)


def _check_dataset(state: ModelState, dataset: SessionizedDataset) -> None:
    if dataset.fingerprint() != state.data.fingerprint:
        raise ValueError("dataset does not match the state's training data")


def temporal_addiction_report(
    state: ModelState,
    dataset: SessionizedDataset,
    posteriors: LogPosterior,
    period: str,
    tz: tzinfo | None = None,
    days: Sequence[int] | None = None,
) -> AddictionReport:
    """Posterior mass split per hour of day or per day of week.

    `dataset` must be the training data the state was built from (it holds
    the timestamps the encoded state dropped). `tz` converts timestamps for
    bucketing; None keeps them as stored. `days` restricts the hourly
    report to the given weekday indices (0 = Monday).
    """
    if period not in (PERIOD_HOUR, PERIOD_WEEKDAY):
        raise ValueError(f"period must be {PERIOD_HOUR!r} or {PERIOD_WEEKDAY!r}")
    _check_dataset(state, dataset)
    if days is not None and period != PERIOD_HOUR:
        raise ValueError("a day filter only applies to the hourly report")
    day_filter = set(days) if days is not None else None
    buckets = 24 if period == PERIOD_HOUR else 7
    sum0 = np.zeros(buckets)
    sum1 = np.zeros(buckets)
    support = np.zeros(buckets, dtype=np.int64)
    for i, (_user, _r, _j, log) in enumerate(dataset.iter_logs()):
        stamp = log.timestamp if tz is None else log.timestamp.astimezone(tz)
        if period == PERIOD_HOUR:
            if day_filter is not None and stamp.weekday() not in day_filter:
                continue
            bucket = stamp.hour
        else:
            bucket = stamp.weekday()
        sum0[bucket] += posteriors.p0[i]
        sum1[bucket] += posteriors.p1[i]
        support[bucket] += 1
    keys = (
        [f"{h:02d}" for h in range(24)] if period == PERIOD_HOUR else list(WEEKDAY_KEYS)
    )
    entries = []
    empty = []
    for b, key in enumerate(keys):
        if support[b] == 0:
            empty.append(key)
            continue
        total = sum0[b] + sum1[b]
        entries.append(
            ReportEntry(
                key=key,
                taste_ratio=float(sum0[b] / total),
                addiction_ratio=float(sum1[b] / total),
                support=int(support[b]),
            )
        )
    if empty:
        logger.info("%s report: %d empty buckets (%s)", period, len(empty), ", ".join(empty))
    return AddictionReport(key=period, entries=tuple(entries), empty_keys=tuple(empty))


def _artist_sums(state: ModelState, posteriors: LogPosterior) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    num_artists = state.data.num_artists
    sum0 = np.bincount(state.data.log_artist, weights=posteriors.p0, minlength=num_artists)
    sum1 = np.bincount(state.data.log_artist, weights=posteriors.p1, minlength=num_artists)
    support = np.bincount(state.data.log_artist, minlength=num_artists)
    return sum0, sum1, support


def artist_addiction_report(
    state: ModelState, posteriors: LogPosterior, bins: int = 10
) -> tuple[AddictionReport, Histogram]:
    """Posterior mass split per artist plus the histogram of artist ratios."""
    sum0, sum1, support = _artist_sums(state, posteriors)
    entries = []
    ratios = []
    for a, artist in enumerate(state.data.artists):
        if support[a] == 0:
            continue
        total = sum0[a] + sum1[a]
        addiction = float(sum1[a] / total)
        ratios.append(addiction)
        entries.append(
            ReportEntry(
                key=artist,
                taste_ratio=float(sum0[a] / total),
                addiction_ratio=addiction,
                support=int(support[a]),
            )
        )
    return (
        AddictionReport(key="artist", entries=tuple(entries)),
        _histogram(np.array(ratios), bins),
    )


def top_artists_for_topic(est: PointEstimates, topic: int, n: int) -> list[str]:
    """The n artists with the largest share of one topic, ties by artist id.

    Asking for more artists than exist returns them all.
    """
    if not 0 <= topic < est.topics:
        raise IndexError(f"topic {topic} out of range for {est.topics} topics")
    if n < 1:
        raise ValueError("n must be >= 1")
    row = est.phi[topic]
    order = np.lexsort((np.arange(row.size), -row))
    return [est.artists[a] for a in order[:n]]


def topic_addiction_report(
    state: ModelState,
    est: PointEstimates,
    posteriors: LogPosterior,
    top_n: int = 20,
) -> AddictionReport:
    """Average the per-artist ratio pairs over each topic's top artists.

    Only artists actually attributed to the topic (nonzero topical count)
    are ranked; topics backed by fewer than top_n such artists average what
    exists and are flagged. Entries come back sorted by addiction_ratio
    ascending.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    sum0, sum1, _support = _artist_sums(state, posteriors)
    entries = []
    empty = []
    for k in range(est.topics):
        eligible = np.nonzero(state.counts.n_ka[k] > 0)[0]
        if eligible.size == 0:
            empty.append(str(k))
            continue
        row = est.phi[k, eligible]
        order = np.lexsort((eligible, -row))
        chosen = eligible[order[:top_n]]
        ratios1 = sum1[chosen] / (sum0[chosen] + sum1[chosen])
        addiction = float(ratios1.mean())
        taste = float((sum0[chosen] / (sum0[chosen] + sum1[chosen])).mean())
        total = taste + addiction
        entries.append(
            ReportEntry(
                key=str(k),
                taste_ratio=taste / total,
                addiction_ratio=addiction / total,
                support=int(chosen.size),
                flagged=chosen.size < top_n,
            )
        )
    if empty:
        logger.info("topic report: %d topics have no attributed plays (%s)", len(empty), ", ".join(empty))
    entries.sort(key=lambda e: (e.addiction_ratio, e.key))
    return AddictionReport(key="topic", entries=tuple(entries), empty_keys=tuple(empty))


# -- text exports ---------------------------------------------------------


def _provenance_lines(provenance: Mapping[str, object] | None) -> list[str]:
    return [f"# {key}: {value}" for key, value in (provenance or {}).items()]


def write_report(
    report: AddictionReport,
    path: str | Path,
    provenance: Mapping[str, object] | None = None,
) -> None:
    lines = _provenance_lines(provenance)
    if report.empty_keys:
        lines.append(f"# empty_{report.key.replace('-', '_')}_buckets: {','.join(report.empty_keys)}")
    lines.append("key\ttaste_ratio\taddiction_ratio\tsupport\tflag")
    for entry in report.entries:
        lines.append(
            f"{entry.key}\t{_fmt(entry.taste_ratio)}\t{_fmt(entry.addiction_ratio)}"
            f"\t{entry.support}\t{int(entry.flagged)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_histogram(
    hist: Histogram,
    path: str | Path,
    provenance: Mapping[str, object] | None = None,
) -> None:
    lines = _provenance_lines(provenance)
    lines.append("bin_low\tbin_high\tcount")
    for b, count in enumerate(hist.counts):
        lines.append(f"{_fmt(hist.edges[b])}\t{_fmt(hist.edges[b + 1])}\t{count}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_topic_artists(
    est: PointEstimates,
    path: str | Path,
    top_n: int = 20,
    provenance: Mapping[str, object] | None = None,
) -> None:
    """Per topic, its top artists by share, for labeling topics by eye."""
    lines = _provenance_lines(provenance)
    lines.append("topic\trank\tartist_id\tphi")
    for k in range(est.topics):
        for rank, artist in enumerate(top_artists_for_topic(est, k, top_n), start=1):
            a = est.artist_index[artist]
            lines.append(f"{k}\t{rank}\t{artist}\t{_fmt(est.phi[k, a])}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
