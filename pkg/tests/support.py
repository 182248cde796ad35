"""Shared builders for the test suite."""

from __future__ import annotations

from datetime import datetime, timedelta, timezone

import numpy as np

from playmix import CountTables, PlayLog, Session, SessionizedDataset

BASE_TIME = datetime(2013, 3, 4, 9, 0, tzinfo=timezone.utc)


def zero_counts(num_users: int, num_artists: int, topics: int) -> CountTables:
    """All-zero tables, the state of a model that has seen nothing."""
    return CountTables(
        n_u0=np.zeros(num_users, dtype=np.int64),
        n_u1=np.zeros(num_users, dtype=np.int64),
        n_u1a=np.zeros((num_users, num_artists), dtype=np.int32),
        n_ka=np.zeros((topics, num_artists), dtype=np.int32),
        n_k=np.zeros(topics, dtype=np.int64),
        r_uk=np.zeros((num_users, topics), dtype=np.int32),
        r_u=np.zeros(num_users, dtype=np.int64),
        n_u=np.zeros(num_users, dtype=np.int64),
    )


def make_dataset(
    spec: dict[str, list[list[str]]],
    gap_minutes: int = 30,
    start: datetime = BASE_TIME,
    session_stride: timedelta = timedelta(hours=2),
    log_spacing: timedelta = timedelta(minutes=1),
) -> SessionizedDataset:
    """Build a dataset from {user: [[artist, ...], ...]}, one inner list per session."""
    sessions: dict[str, tuple[Session, ...]] = {}
    for user, session_specs in spec.items():
        rows = []
        for r, artists in enumerate(session_specs):
            t0 = start + r * session_stride
            logs = tuple(
                PlayLog(user, artist, t0 + j * log_spacing)
                for j, artist in enumerate(artists)
            )
            rows.append(Session(user, logs))
        sessions[user] = tuple(rows)
    return SessionizedDataset(sessions=sessions, gap=timedelta(minutes=gap_minutes))


def dataset_from_instance(inst) -> SessionizedDataset:
    """Bridge an enumeration-oracle instance to the package's dataset type.

    Ids u0..u3 and a0..a2 sort to exactly the instance's index order, so
    canonical positions line up one-to-one with the oracle's flat offsets.
    """
    spec = {
        f"u{u}": [[f"a{a}" for a in session] for session in inst.sessions[u]]
        for u in range(inst.num_users)
    }
    return make_dataset(spec)
