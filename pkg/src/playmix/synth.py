"""Synthetic play-log generation from known parameters.

Runs the generative story forward: each session draws a topic from its
user's topic mix, each play flips the user's addiction coin and then draws
an artist from either the session topic or the user's personal
distribution. Timestamps are laid out so the stated session gap rule
reproduces exactly the generated session boundaries, and an optional
24-entry schedule can override the addiction weight by hour of day for
testing the temporal reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Mapping

import numpy as np

from .ingest import DEFAULT_SESSION_GAP, PlayLog, Session, SessionizedDataset

DEFAULT_START_TIME = datetime(2013, 1, 7, 0, 0, tzinfo=timezone.utc)
# 25 hours is coprime with the day length, so consecutive sessions of a user
# walk their start hour through all 24 hours.
DEFAULT_SESSION_STRIDE = timedelta(hours=25)
DEFAULT_LOG_SPACING = timedelta(minutes=2)


@dataclass(frozen=True, eq=False)
class GroundTruth:
    """Complete recipe for one synthetic dataset.

    users and artists must be sorted so generated latent arrays line up
    with the canonical order every consumer of the dataset uses. Session
    sizes are geometric, clamped at session_size_max. When hour_lambda1 is
    set it replaces lambda1 wholesale: the addiction weight of every play
    is looked up by the play's hour of day.
    """

    users: tuple[str, ...]
    artists: tuple[str, ...]
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    lambda1: np.ndarray
    sessions_per_user: np.ndarray
    session_size_p: float = 0.35
    session_size_max: int = 12
    hour_lambda1: np.ndarray | None = None
    start_time: datetime = DEFAULT_START_TIME
    session_stride: timedelta = DEFAULT_SESSION_STRIDE
    log_spacing: timedelta = DEFAULT_LOG_SPACING
    gap: timedelta = DEFAULT_SESSION_GAP

    def validate(self) -> None:
        num_users = len(self.users)
        num_artists = len(self.artists)
        if num_users == 0 or num_artists == 0:
            raise ValueError("users and artists must be non-empty")
        if tuple(sorted(set(self.users))) != self.users:
            raise ValueError("users must be sorted and unique")
        if tuple(sorted(set(self.artists))) != self.artists:
            raise ValueError("artists must be sorted and unique")
        topics = self.theta.shape[1] if self.theta.ndim == 2 else 0
        for name, matrix, shape in (
            ("theta", self.theta, (num_users, topics)),
            ("phi", self.phi, (topics, num_artists)),
            ("psi", self.psi, (num_users, num_artists)),
        ):
            if matrix.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {matrix.shape}")
            if np.any(matrix < 0):
                raise ValueError(f"{name} has negative entries")
            if np.max(np.abs(matrix.sum(axis=1) - 1.0)) > 1e-12:
                raise ValueError(f"{name} rows must sum to 1")
        if self.lambda1.shape != (num_users,):
            raise ValueError("lambda1 must have one entry per user")
        if np.any(self.lambda1 < 0) or np.any(self.lambda1 > 1):
            raise ValueError("lambda1 entries must lie in [0, 1]")
        if self.sessions_per_user.shape != (num_users,):
            raise ValueError("sessions_per_user must have one entry per user")
        if np.any(self.sessions_per_user < 1):
            raise ValueError("every user needs at least one session")
        if not 0.0 < self.session_size_p <= 1.0:
            raise ValueError("session_size_p must lie in (0, 1]")
        if self.session_size_max < 1:
            raise ValueError("session_size_max must be >= 1")
        if self.hour_lambda1 is not None:
            if self.hour_lambda1.shape != (24,):
                raise ValueError("hour_lambda1 must have 24 entries")
            if np.any(self.hour_lambda1 < 0) or np.any(self.hour_lambda1 > 1):
                raise ValueError("hour_lambda1 entries must lie in [0, 1]")
        if self.start_time.tzinfo is None:
            raise ValueError("start_time must be timezone-aware")
        if self.log_spacing <= timedelta(0):
            raise ValueError("log_spacing must be positive")
        if self.log_spacing >= self.gap:
            raise ValueError("log_spacing must stay under the session gap")
        span = (self.session_size_max - 1) * self.log_spacing + self.gap
        if self.session_stride < span:
            raise ValueError(
                "session_stride too short: the longest session plus the gap "
                f"needs {span}, stride is {self.session_stride}"
            )

    @property
    def topics(self) -> int:
        return int(self.theta.shape[1])


def _make_ids(prefix: str, count: int) -> tuple[str, ...]:
    width = max(4, len(str(count - 1)))
    return tuple(f"{prefix}{i:0{width}d}" for i in range(count))


def random_ground_truth(
    num_users: int,
    num_artists: int,
    topics: int,
    seed: int,
    *,
    lambda1: float | np.ndarray | None = None,
    lambda_beta: tuple[float, float] = (0.5, 0.5),
    sessions_per_user: int | np.ndarray = 40,
    theta_conc: float = 0.3,
    phi_conc: float = 0.08,
    psi_conc: float = 0.05,
    session_size_p: float = 0.35,
    session_size_max: int = 12,
    hour_lambda1: np.ndarray | None = None,
    session_stride: timedelta = DEFAULT_SESSION_STRIDE,
) -> GroundTruth:
    """Draw a ground truth with Dirichlet parameter matrices.

    The draw order is fixed (theta, phi, psi, then lambda when not given),
    so one seed pins the whole truth. Passing lambda1 as a scalar or array
    skips the Beta draw; lambda_beta shapes the draw when it happens.
    """
    rng = np.random.default_rng(seed)
    theta = rng.dirichlet(np.full(topics, theta_conc), size=num_users)
    phi = rng.dirichlet(np.full(num_artists, phi_conc), size=topics)
    psi = rng.dirichlet(np.full(num_artists, psi_conc), size=num_users)
    if lambda1 is None:
        lam = rng.beta(lambda_beta[0], lambda_beta[1], size=num_users)
    else:
        lam = np.broadcast_to(np.asarray(lambda1, dtype=np.float64), (num_users,)).copy()
    sessions = np.broadcast_to(
        np.asarray(sessions_per_user, dtype=np.int64), (num_users,)
    ).copy()
    truth = GroundTruth(
        users=_make_ids("u", num_users),
        artists=_make_ids("a", num_artists),
        theta=theta,
        phi=phi,
        psi=psi,
        lambda1=lam,
        sessions_per_user=sessions,
        session_size_p=session_size_p,
        session_size_max=session_size_max,
        hour_lambda1=hour_lambda1,
        session_stride=session_stride,
    )
    truth.validate()
    return truth


def _draw(cum_row: np.ndarray, rng: np.random.Generator) -> int:
    pick = rng.random() * cum_row[-1]
    idx = int(np.searchsorted(cum_row, pick, side="right"))
    return min(idx, cum_row.size - 1)


def generate_dataset(
    truth: GroundTruth, seed: int
) -> tuple[SessionizedDataset, np.ndarray, np.ndarray]:
    """Generate one dataset plus its true per-session topics and per-log switches.

    Each user gets an independent child stream of the seed, drawn in a
    fixed per-session order (topic, size, then per play: switch, artist),
    so the output is reproducible and users can be generated independently.
    The returned latent arrays follow canonical dataset order.
    """
    truth.validate()
    streams = np.random.SeedSequence(seed).spawn(len(truth.users))
    theta_cum = np.cumsum(truth.theta, axis=1)
    phi_cum = np.cumsum(truth.phi, axis=1)
    psi_cum = np.cumsum(truth.psi, axis=1)
    sessions: dict[str, tuple[Session, ...]] = {}
    true_z: list[int] = []
    true_x: list[int] = []
    for u, user in enumerate(truth.users):
        rng = np.random.default_rng(streams[u])
        user_sessions: list[Session] = []
        for r in range(int(truth.sessions_per_user[u])):
            start = truth.start_time + r * truth.session_stride
            k = _draw(theta_cum[u], rng)
            size = min(int(rng.geometric(truth.session_size_p)), truth.session_size_max)
            logs: list[PlayLog] = []
            for j in range(size):
                stamp = start + j * truth.log_spacing
                if truth.hour_lambda1 is None:
                    lam1 = float(truth.lambda1[u])
                else:
                    lam1 = float(truth.hour_lambda1[stamp.hour])
                flag = 1 if rng.random() < lam1 else 0
                source = psi_cum[u] if flag else phi_cum[k]
                artist = truth.artists[_draw(source, rng)]
                logs.append(PlayLog(user, artist, stamp))
                true_x.append(flag)
            true_z.append(k)
            user_sessions.append(Session(user, tuple(logs)))
        sessions[user] = tuple(user_sessions)
    dataset = SessionizedDataset(sessions=sessions, gap=truth.gap)
    return dataset, np.array(true_z, dtype=np.int32), np.array(true_x, dtype=np.int8)


def write_logs(
    dataset: SessionizedDataset,
    path: str | Path,
    provenance: Mapping[str, object] | None = None,
) -> None:
    """Write raw play-log lines in the generic user/timestamp/artist layout."""
    lines = [f"# {key}: {value}" for key, value in (provenance or {}).items()]
    lines.append("# columns: user_id, timestamp, artist_id")
    for _user, _r, _j, log in dataset.iter_logs():
        lines.append(f"{log.user_id}\t{log.timestamp.isoformat()}\t{log.artist_id}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_truth(
    truth: GroundTruth,
    true_z: np.ndarray,
    true_x: np.ndarray,
    path: str | Path,
) -> None:
    """Sidecar JSON with the full recipe and the drawn latent values."""
    payload = {
        "format": "playmix-truth",
        "users": list(truth.users),
        "artists": list(truth.artists),
        "theta": truth.theta.tolist(),
        "phi": truth.phi.tolist(),
        "psi": truth.psi.tolist(),
        "lambda1": truth.lambda1.tolist(),
        "sessions_per_user": truth.sessions_per_user.tolist(),
        "session_size_p": truth.session_size_p,
        "session_size_max": truth.session_size_max,
        "hour_lambda1": None if truth.hour_lambda1 is None else truth.hour_lambda1.tolist(),
        "start_time": truth.start_time.isoformat(),
        "session_stride_seconds": truth.session_stride.total_seconds(),
        "log_spacing_seconds": truth.log_spacing.total_seconds(),
        "gap_seconds": truth.gap.total_seconds(),
        "z": np.asarray(true_z).tolist(),
        "x": np.asarray(true_x).tolist(),
    }
    Path(path).write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
    )
