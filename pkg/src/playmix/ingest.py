"""Play-log parsing, cleaning, and session segmentation.

Raw input is delimiter-separated text with one play event per line. The
pipeline is: parse to PlayLog records, optionally drop rare artists, split
train/test on a timestamp boundary, then group each user's logs into
listening sessions separated by idle gaps.
"""

from __future__ import annotations

import hashlib
import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone, tzinfo
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Mapping
from zoneinfo import ZoneInfo

logger = logging.getLogger("playmix.ingest")

DEFAULT_SESSION_GAP = timedelta(minutes=30)
DEFAULT_MIN_USERS = 3


class FormatMismatchError(ValueError):
    """Input text does not match the configured log format."""


@dataclass(frozen=True, slots=True)
class PlayLog:
    """One play event: a user played a song by an artist at an instant."""

    user_id: str
    artist_id: str
    timestamp: datetime

    def __post_init__(self) -> None:
        if not self.user_id:
            raise ValueError("user_id must be non-empty")
        if not self.artist_id:
            raise ValueError("artist_id must be non-empty")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")


@dataclass(frozen=True, slots=True)
class Session:
    """A maximal run of one user's logs with no idle gap inside it."""

    user_id: str
    logs: tuple[PlayLog, ...]

    def __post_init__(self) -> None:
        if not self.logs:
            raise ValueError("session must contain at least one log")
        for log in self.logs:
            if log.user_id != self.user_id:
                raise ValueError(
                    f"session of user {self.user_id!r} contains a log of user {log.user_id!r}"
                )
        for prev, cur in zip(self.logs, self.logs[1:]):
            if cur.timestamp < prev.timestamp:
                raise ValueError("session logs must be in non-decreasing timestamp order")

    def __len__(self) -> int:
        return len(self.logs)


@dataclass(frozen=True)
class SessionizedDataset:
    """All sessions of all users, as produced by segment_sessions.

    `sessions` maps user id to that user's sessions in chronological order.
    Canonical iteration order (users sorted lexicographically, then session
    ordinal, then position) is what every downstream consumer relies on.
    """

    sessions: Mapping[str, tuple[Session, ...]]
    gap: timedelta = DEFAULT_SESSION_GAP

    @cached_property
    def users(self) -> tuple[str, ...]:
        return tuple(sorted(self.sessions))

    @cached_property
    def artists(self) -> tuple[str, ...]:
        seen: set[str] = set()
        for user_sessions in self.sessions.values():
            for session in user_sessions:
                for log in session.logs:
                    seen.add(log.artist_id)
        return tuple(sorted(seen))

    @cached_property
    def num_sessions(self) -> int:
        return sum(len(s) for s in self.sessions.values())

    @cached_property
    def num_logs(self) -> int:
        return sum(len(session) for s in self.sessions.values() for session in s)

    def iter_sessions(self) -> Iterator[tuple[str, int, Session]]:
        """Yield (user_id, session ordinal, session) in canonical order."""
        for user in self.users:
            for r, session in enumerate(self.sessions[user]):
                yield user, r, session

    def iter_logs(self) -> Iterator[tuple[str, int, int, PlayLog]]:
        """Yield (user_id, session ordinal, position, log) in canonical order."""
        for user, r, session in self.iter_sessions():
            for j, log in enumerate(session.logs):
                yield user, r, j, log

    def fingerprint(self) -> str:
        """Content hash used to tie checkpoints back to their dataset."""
        digest = hashlib.sha256()
        for user, r, j, log in self.iter_logs():
            epoch = int(log.timestamp.timestamp())
            digest.update(f"{user}\t{r}\t{j}\t{log.artist_id}\t{epoch}\n".encode())
        return digest.hexdigest()

    def validate(self) -> None:
        """Recheck the gap invariants; raises ValueError on the first violation."""
        for user, user_sessions in self.sessions.items():
            if not user_sessions:
                raise ValueError(f"user {user!r} has no sessions")
            for r, session in enumerate(user_sessions):
                if session.user_id != user:
                    raise ValueError(
                        f"session {r} filed under {user!r} belongs to {session.user_id!r}"
                    )
                for prev, cur in zip(session.logs, session.logs[1:]):
                    if cur.timestamp - prev.timestamp >= self.gap:
                        raise ValueError(
                            f"user {user!r} session {r} has an internal gap >= {self.gap}"
                        )
            for r, (prev, cur) in enumerate(zip(user_sessions, user_sessions[1:])):
                between = cur.logs[0].timestamp - prev.logs[-1].timestamp
                if between < self.gap:
                    raise ValueError(
                        f"user {user!r} sessions {r} and {r + 1} are only {between} apart"
                    )


@dataclass(frozen=True, slots=True)
class FormatConfig:
    """Column layout of a delimiter-separated play-log file.

    `artist_fallback_col`, when set, supplies the artist id for lines whose
    primary artist column is empty (identifier missing, display name present).
    `timestamp_format` is either "iso" or a strptime pattern.
    """

    name: str
    delimiter: str = "\t"
    user_col: int = 0
    timestamp_col: int = 1
    artist_col: int = 2
    artist_fallback_col: int | None = None
    timestamp_format: str = "iso"


LASTFM_1K = FormatConfig(
    name="lastfm1k",
    user_col=0,
    timestamp_col=1,
    artist_col=2,
    artist_fallback_col=3,
)

GENERIC = FormatConfig(
    name="generic",
    user_col=0,
    timestamp_col=1,
    artist_col=2,
)

FORMAT_PRESETS: dict[str, FormatConfig] = {
    "lastfm1k": LASTFM_1K,
    "generic": GENERIC,
}


@dataclass(slots=True)
class ParseResult:
    """Parsed logs plus the malformed-line tally."""

    logs: list[PlayLog] = field(default_factory=list)
    malformed: int = 0
    total: int = 0


def _parse_iso(text: str) -> datetime:
    # fromisoformat on this Python does not accept a trailing Z.
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    return datetime.fromisoformat(text)


def parse_timestamp(text: str, fmt: str = "iso") -> datetime:
    """Parse one timestamp field; may return a naive datetime."""
    if fmt == "iso":
        return _parse_iso(text.strip())
    return datetime.strptime(text.strip(), fmt)


def parse_play_logs(
    stream: Iterable[str],
    fmt: FormatConfig = LASTFM_1K,
    tz: tzinfo = timezone.utc,
) -> ParseResult:
    """Parse delimiter-separated lines into PlayLog records.

    Malformed lines are counted and skipped. Blank lines and lines starting
    with '#' are ignored without counting. Timestamps are normalized to `tz`;
    naive timestamps are assumed to already be in `tz`. If more than half of
    the data lines fail, the format is presumed wrong and a
    FormatMismatchError naming the first offending line is raised.
    """
    result = ParseResult()
    first_bad: tuple[int, str] | None = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        result.total += 1
        parts = line.split(fmt.delimiter)
        try:
            user = parts[fmt.user_col].strip()
            artist = parts[fmt.artist_col].strip()
            if not artist and fmt.artist_fallback_col is not None:
                artist = parts[fmt.artist_fallback_col].strip()
            stamp = parse_timestamp(parts[fmt.timestamp_col], fmt.timestamp_format)
            if stamp.tzinfo is None:
                stamp = stamp.replace(tzinfo=tz)
            else:
                stamp = stamp.astimezone(tz)
            # Second resolution is all the model uses; keeping sub-second
            # digits would only break round-trips through the text formats.
            log = PlayLog(user, artist, stamp.replace(microsecond=0))
        except (IndexError, ValueError):
            result.malformed += 1
            if first_bad is None:
                first_bad = (lineno, line)
            continue
        result.logs.append(log)
    if result.total and result.malformed * 2 > result.total:
        assert first_bad is not None
        lineno, content = first_bad
        if len(content) > 200:
            content = content[:200] + "..."
        raise FormatMismatchError(
            f"{result.malformed} of {result.total} lines do not match format "
            f"{fmt.name!r}; first offending line {lineno}: {content!r}"
        )
    if result.malformed:
        logger.warning(
            "skipped %d of %d malformed lines (format %s)",
            result.malformed,
            result.total,
            fmt.name,
        )
    return result


def filter_rare_artists(logs: list[PlayLog], min_users: int = DEFAULT_MIN_USERS) -> list[PlayLog]:
    """Drop every log of artists played by at most `min_users` distinct users."""
    if min_users < 0:
        raise ValueError("min_users must be >= 0")
    users_by_artist: dict[str, set[str]] = defaultdict(set)
    for log in logs:
        users_by_artist[log.artist_id].add(log.user_id)
    keep = {a for a, users in users_by_artist.items() if len(users) > min_users}
    return [log for log in logs if log.artist_id in keep]


def split_train_test(
    logs: list[PlayLog], boundary: datetime
) -> tuple[list[PlayLog], list[PlayLog]]:
    """Partition logs at a timestamp: strictly-before goes to train."""
    if boundary.tzinfo is None:
        raise ValueError("boundary must be timezone-aware")
    train = [log for log in logs if log.timestamp < boundary]
    test = [log for log in logs if log.timestamp >= boundary]
    if logs and not train:
        logger.warning("split boundary %s precedes every log; train side is empty", boundary)
    if logs and not test:
        logger.warning("split boundary %s follows every log; test side is empty", boundary)
    return train, test


def segment_sessions(
    logs: list[PlayLog], gap: timedelta = DEFAULT_SESSION_GAP
) -> SessionizedDataset:
    """Group each user's logs into sessions separated by idle gaps.

    Logs may arrive unsorted; each user's logs are sorted by timestamp with
    input order breaking ties. Two adjacent logs share a session exactly when
    they are strictly less than `gap` apart, so a gap of exactly `gap` starts
    a new session.
    """
    if gap <= timedelta(0):
        raise ValueError("gap must be positive")
    by_user: dict[str, list[PlayLog]] = defaultdict(list)
    for log in logs:
        by_user[log.user_id].append(log)
    sessions: dict[str, tuple[Session, ...]] = {}
    for user in sorted(by_user):
        ordered = sorted(by_user[user], key=lambda log: log.timestamp)
        user_sessions: list[Session] = []
        block = [ordered[0]]
        for log in ordered[1:]:
            if log.timestamp - block[-1].timestamp < gap:
                block.append(log)
            else:
                user_sessions.append(Session(user, tuple(block)))
                block = [log]
        user_sessions.append(Session(user, tuple(block)))
        sessions[user] = tuple(user_sessions)
    return SessionizedDataset(sessions=sessions, gap=gap)


def resolve_timezone(name: str) -> tzinfo:
    """Resolve 'UTC', a fixed offset like '+09:00', or an IANA zone name."""
    text = name.strip()
    if text.upper() in {"UTC", "Z"}:
        return timezone.utc
    match = re.fullmatch(r"([+-])(\d{2}):?(\d{2})", text)
    if match:
        sign = 1 if match.group(1) == "+" else -1
        offset = timedelta(hours=int(match.group(2)), minutes=int(match.group(3)))
        return timezone(sign * offset)
    try:
        return ZoneInfo(text)
    except Exception as exc:
        raise ValueError(f"unknown timezone {name!r}") from exc


SESSION_FILE_COLUMNS = ("user_id", "session", "position", "artist_id", "timestamp")


def write_sessions(
    dataset: SessionizedDataset,
    path: str | Path,
    provenance: Mapping[str, object] | None = None,
) -> None:
    """Write a sessionized dataset as TSV, one line per log.

    Leading '#' comments record the gap and any provenance the caller passes;
    the content lines are in canonical order so equal datasets produce
    byte-identical files.
    """
    lines = [f"# gap_seconds: {int(dataset.gap.total_seconds())}"]
    for key, value in (provenance or {}).items():
        lines.append(f"# {key}: {value}")
    lines.append("\t".join(SESSION_FILE_COLUMNS))
    for user, r, j, log in dataset.iter_logs():
        stamp = log.timestamp.isoformat()
        lines.append(f"{user}\t{r}\t{j}\t{log.artist_id}\t{stamp}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_sessions(path: str | Path) -> SessionizedDataset:
    """Read a file written by write_sessions, preserving session boundaries."""
    gap = DEFAULT_SESSION_GAP
    header_seen = False
    per_user: dict[str, dict[int, dict[int, PlayLog]]] = defaultdict(dict)
    with Path(path).open(encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                match = re.fullmatch(r"#\s*gap_seconds:\s*(\d+)\s*", line)
                if match:
                    gap = timedelta(seconds=int(match.group(1)))
                continue
            if not header_seen:
                if tuple(line.split("\t")) != SESSION_FILE_COLUMNS:
                    raise FormatMismatchError(
                        f"{path}: line {lineno} is not the expected header "
                        f"{' '.join(SESSION_FILE_COLUMNS)!r}"
                    )
                header_seen = True
                continue
            parts = line.split("\t")
            if len(parts) != len(SESSION_FILE_COLUMNS):
                raise FormatMismatchError(
                    f"{path}: line {lineno} has {len(parts)} columns, expected "
                    f"{len(SESSION_FILE_COLUMNS)}"
                )
            user, r_text, j_text, artist, stamp_text = parts
            try:
                r = int(r_text)
                j = int(j_text)
                stamp = _parse_iso(stamp_text)
            except ValueError as exc:
                raise FormatMismatchError(f"{path}: line {lineno}: {exc}") from exc
            if stamp.tzinfo is None:
                stamp = stamp.replace(tzinfo=timezone.utc)
            per_user[user].setdefault(r, {})[j] = PlayLog(user, artist, stamp)
    sessions: dict[str, tuple[Session, ...]] = {}
    for user, by_ordinal in per_user.items():
        user_sessions: list[Session] = []
        for want_r, r in enumerate(sorted(by_ordinal)):
            if r != want_r:
                raise FormatMismatchError(
                    f"{path}: user {user!r} session ordinals are not contiguous"
                )
            by_position = by_ordinal[r]
            logs: list[PlayLog] = []
            for want_j, j in enumerate(sorted(by_position)):
                if j != want_j:
                    raise FormatMismatchError(
                        f"{path}: user {user!r} session {r} positions are not contiguous"
                    )
                logs.append(by_position[j])
            user_sessions.append(Session(user, tuple(logs)))
        sessions[user] = tuple(user_sessions)
    return SessionizedDataset(sessions=sessions, gap=gap)
