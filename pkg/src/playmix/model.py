"""Collapsed Gibbs sampler for the session and session-with-addiction models.

The session model explains every play through a per-session topic: a session
draws one topic from the user's topic mix, and each play in it draws an
artist from that topic. The session-with-addiction (swa) variant adds a
per-play binary switch: with user-specific probability a play bypasses the
session topic and draws from that user's personal addiction distribution
instead. All mixing weights and distributions are integrated out, so the
sampler only tracks the discrete assignments (one topic per session, one
switch per play) and integer count tables.
"""

from __future__ import annotations

import json
import math
import time
import zipfile
from dataclasses import dataclass, field
from functools import cached_property
from io import BytesIO
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from scipy.special import gammaln

from .ingest import SessionizedDataset
from .numerics import (
    EXACT_RISING_LIMIT,
    draw_from_log_weights,
    draw_from_two_log_weights,
    log_rising,
    log_rising_lgamma,
    normalize_log_weights,
)

VARIANTS = ("session", "swa")

CHECKPOINT_FORMAT = "playmix-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True, slots=True)
class Hyperparameters:
    """Model size and the four concentration parameters.

    alpha smooths each user's topic mix, beta each topic's artist
    distribution, gamma each user's addiction distribution, and rho the
    per-user taste/addiction split. variant selects whether the addiction
    switch is sampled ("swa") or clamped off ("session").
    """

    topics: int
    alpha: float
    beta: float
    gamma: float
    rho: float = 0.5
    variant: str = "swa"

    def __post_init__(self) -> None:
        if self.topics < 1:
            raise ValueError("topics must be >= 1")
        for name in ("alpha", "beta", "gamma", "rho"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")

    @classmethod
    def with_defaults(
        cls,
        topics: int,
        num_artists: int,
        variant: str = "swa",
        *,
        alpha: float | None = None,
        beta: float | None = None,
        gamma: float | None = None,
        rho: float | None = None,
    ) -> Hyperparameters:
        """Fill unset concentrations with alpha=1/K, beta=gamma=50/|A|, rho=0.5."""
        if num_artists < 1:
            raise ValueError("num_artists must be >= 1")
        return cls(
            topics=topics,
            alpha=1.0 / topics if alpha is None else alpha,
            beta=50.0 / num_artists if beta is None else beta,
            gamma=50.0 / num_artists if gamma is None else gamma,
            rho=0.5 if rho is None else rho,
            variant=variant,
        )

    def to_dict(self) -> dict[str, object]:
        return {
            "topics": self.topics,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "rho": self.rho,
            "variant": self.variant,
        }


@dataclass(frozen=True, eq=False)
class EncodedDataset:
    """Sessionized logs flattened to index arrays for the sampler.

    Sessions are numbered in canonical order (users sorted, then
    chronological), so each user's sessions form one contiguous block.
    """

    users: tuple[str, ...]
    artists: tuple[str, ...]
    session_user: np.ndarray
    session_start: np.ndarray
    log_artist: np.ndarray
    log_user: np.ndarray
    log_session: np.ndarray
    user_sessions: np.ndarray
    fingerprint: str

    @property
    def num_users(self) -> int:
        return len(self.users)

    @property
    def num_artists(self) -> int:
        return len(self.artists)

    @property
    def num_sessions(self) -> int:
        return int(self.session_user.size)

    @property
    def num_logs(self) -> int:
        return int(self.log_artist.size)

    @cached_property
    def user_index(self) -> dict[str, int]:
        return {user: i for i, user in enumerate(self.users)}

    @cached_property
    def artist_index(self) -> dict[str, int]:
        return {artist: i for i, artist in enumerate(self.artists)}

    def session_index(self, user: int, session: int) -> int:
        """Map (user index, session ordinal) to the global session index."""
        lo = int(self.user_sessions[user])
        hi = int(self.user_sessions[user + 1])
        if not 0 <= session < hi - lo:
            raise IndexError(f"user {user} has {hi - lo} sessions, not {session + 1}")
        return lo + session

    def log_index(self, user: int, session: int, position: int) -> int:
        """Map (user index, session ordinal, position) to the global log index."""
        s = self.session_index(user, session)
        lo = int(self.session_start[s])
        hi = int(self.session_start[s + 1])
        if not 0 <= position < hi - lo:
            raise IndexError(f"session {s} has {hi - lo} logs, not {position + 1}")
        return lo + position

    @classmethod
    def from_arrays(
        cls,
        users: tuple[str, ...],
        artists: tuple[str, ...],
        session_user: np.ndarray,
        session_start: np.ndarray,
        log_artist: np.ndarray,
        fingerprint: str,
    ) -> EncodedDataset:
        session_user = np.ascontiguousarray(session_user, dtype=np.int32)
        session_start = np.ascontiguousarray(session_start, dtype=np.int64)
        log_artist = np.ascontiguousarray(log_artist, dtype=np.int32)
        if session_user.size and np.any(np.diff(session_user) < 0):
            raise ValueError("session_user must be non-decreasing (canonical order)")
        if session_start[0] != 0 or np.any(np.diff(session_start) < 1):
            raise ValueError("session_start must start at 0 and strictly increase")
        if session_start[-1] != log_artist.size:
            raise ValueError("session_start does not cover the log array")
        lengths = np.diff(session_start)
        log_session = np.repeat(np.arange(session_user.size, dtype=np.int32), lengths)
        log_user = session_user[log_session]
        user_sessions = np.searchsorted(
            session_user, np.arange(len(users) + 1), side="left"
        ).astype(np.int64)
        return cls(
            users=tuple(users),
            artists=tuple(artists),
            session_user=session_user,
            session_start=session_start,
            log_artist=log_artist,
            log_user=log_user,
            log_session=log_session,
            user_sessions=user_sessions,
            fingerprint=fingerprint,
        )

    @classmethod
    def from_dataset(cls, dataset: SessionizedDataset) -> EncodedDataset:
        if dataset.num_logs == 0:
            raise ValueError("dataset has no logs")
        users = dataset.users
        artists = dataset.artists
        user_index = {user: i for i, user in enumerate(users)}
        artist_index = {artist: i for i, artist in enumerate(artists)}
        session_user: list[int] = []
        session_start: list[int] = [0]
        log_artist: list[int] = []
        for user, _r, session in dataset.iter_sessions():
            session_user.append(user_index[user])
            for log in session.logs:
                log_artist.append(artist_index[log.artist_id])
            session_start.append(len(log_artist))
        return cls.from_arrays(
            users=users,
            artists=artists,
            session_user=np.array(session_user, dtype=np.int32),
            session_start=np.array(session_start, dtype=np.int64),
            log_artist=np.array(log_artist, dtype=np.int32),
            fingerprint=dataset.fingerprint(),
        )


@dataclass(eq=False)
class CountTables:
    """Sufficient statistics maintained incrementally by the sampler.

    n_u0/n_u1 count each user's plays by switch value, n_u1a the addicted
    plays per user and artist, n_ka/n_k the topic-attributed plays per
    artist and in total, r_uk/r_u the sessions per user and topic, and n_u
    each user's total plays.
    """

    n_u0: np.ndarray
    n_u1: np.ndarray
    n_u1a: np.ndarray
    n_ka: np.ndarray
    n_k: np.ndarray
    r_uk: np.ndarray
    r_u: np.ndarray
    n_u: np.ndarray

    _FIELDS = ("n_u0", "n_u1", "n_u1a", "n_ka", "n_k", "r_uk", "r_u", "n_u")

    @classmethod
    def recount(
        cls, data: EncodedDataset, z: np.ndarray, x: np.ndarray, topics: int
    ) -> CountTables:
        """Rebuild every table from scratch out of the assignments."""
        num_users = data.num_users
        num_artists = data.num_artists
        r_uk = np.zeros((num_users, topics), dtype=np.int32)
        np.add.at(r_uk, (data.session_user, z), 1)
        r_u = np.bincount(data.session_user, minlength=num_users).astype(np.int64)
        n_u = np.bincount(data.log_user, minlength=num_users).astype(np.int64)
        addicted = np.asarray(x).astype(bool)
        topical = ~addicted
        n_u0 = np.bincount(data.log_user[topical], minlength=num_users).astype(np.int64)
        n_u1 = np.bincount(data.log_user[addicted], minlength=num_users).astype(np.int64)
        n_u1a = np.zeros((num_users, num_artists), dtype=np.int32)
        np.add.at(n_u1a, (data.log_user[addicted], data.log_artist[addicted]), 1)
        log_topic = np.asarray(z)[data.log_session]
        n_ka = np.zeros((topics, num_artists), dtype=np.int32)
        np.add.at(n_ka, (log_topic[topical], data.log_artist[topical]), 1)
        n_k = np.bincount(log_topic[topical], minlength=topics).astype(np.int64)
        return cls(
            n_u0=n_u0, n_u1=n_u1, n_u1a=n_u1a, n_ka=n_ka, n_k=n_k, r_uk=r_uk, r_u=r_u, n_u=n_u
        )

    def equals(self, other: CountTables) -> bool:
        """Exact integer equality of every table."""
        return all(
            np.array_equal(getattr(self, name), getattr(other, name)) for name in self._FIELDS
        )

    def copy(self) -> CountTables:
        return CountTables(**{name: getattr(self, name).copy() for name in self._FIELDS})

    def validate(self) -> None:
        """Check the cross-table sum identities; raises ValueError on mismatch."""
        if np.any(self.n_u0 + self.n_u1 != self.n_u):
            raise ValueError("n_u0 + n_u1 != n_u")
        if np.any(self.n_u1a.sum(axis=1) != self.n_u1):
            raise ValueError("row sums of n_u1a do not match n_u1")
        if np.any(self.n_ka.sum(axis=1) != self.n_k):
            raise ValueError("row sums of n_ka do not match n_k")
        if np.any(self.r_uk.sum(axis=1) != self.r_u):
            raise ValueError("row sums of r_uk do not match r_u")
        for name in self._FIELDS:
            if np.any(getattr(self, name) < 0):
                raise ValueError(f"negative entry in {name}")


@dataclass(frozen=True)
class Assignments:
    """Read-only view of the latent state: one topic per session, one switch per log."""

    z: np.ndarray
    x: np.ndarray


@dataclass(eq=False)
class ModelState:
    """Everything the Gibbs chain needs: data, assignments, counts, and the rng."""

    data: EncodedDataset
    hp: Hyperparameters
    z: np.ndarray
    x: np.ndarray
    counts: CountTables
    rng: np.random.Generator
    seed: int
    sweeps_done: int = 0

    @property
    def assignments(self) -> Assignments:
        return Assignments(z=self.z, x=self.x)

    def rebuild_counts(self) -> None:
        """Replace the incremental tables with a from-scratch recount."""
        self.counts = CountTables.recount(self.data, self.z, self.x, self.hp.topics)

    def counts_match_assignments(self) -> bool:
        return self.counts.equals(
            CountTables.recount(self.data, self.z, self.x, self.hp.topics)
        )

    # -- incremental count maintenance ------------------------------------

    def _remove_session_counts(self, s: int) -> tuple[int, int, np.ndarray, np.ndarray, int]:
        """Take session s out of the topic-side tables.

        Returns (user, old topic, unique artists of the session's topical
        logs, their multiplicities, topical log count) for the weight
        computation and the matching re-add.
        """
        u = int(self.data.session_user[s])
        k = int(self.z[s])
        lo = int(self.data.session_start[s])
        hi = int(self.data.session_start[s + 1])
        artists = self.data.log_artist[lo:hi]
        topical = artists[self.x[lo:hi] == 0]
        uniq, cnt = np.unique(topical, return_counts=True)
        c = self.counts
        c.r_uk[u, k] -= 1
        c.r_u[u] -= 1
        if topical.size:
            c.n_ka[k, uniq] -= cnt
            c.n_k[k] -= topical.size
        return u, k, uniq, cnt, int(topical.size)

    def _add_session_counts(
        self, s: int, u: int, k: int, uniq: np.ndarray, cnt: np.ndarray, topical: int
    ) -> None:
        self.z[s] = k
        c = self.counts
        c.r_uk[u, k] += 1
        c.r_u[u] += 1
        if topical:
            c.n_ka[k, uniq] += cnt
            c.n_k[k] += topical

    def _remove_log_counts(self, i: int) -> tuple[int, int, int, int]:
        u = int(self.data.log_user[i])
        a = int(self.data.log_artist[i])
        k = int(self.z[self.data.log_session[i]])
        flag = int(self.x[i])
        c = self.counts
        if flag == 0:
            c.n_u0[u] -= 1
            c.n_ka[k, a] -= 1
            c.n_k[k] -= 1
        else:
            c.n_u1[u] -= 1
            c.n_u1a[u, a] -= 1
        return u, a, k, flag

    def _add_log_counts(self, i: int, u: int, a: int, k: int, flag: int) -> None:
        self.x[i] = flag
        c = self.counts
        if flag == 0:
            c.n_u0[u] += 1
            c.n_ka[k, a] += 1
            c.n_k[k] += 1
        else:
            c.n_u1[u] += 1
            c.n_u1a[u, a] += 1

    # -- conditional weights ----------------------------------------------

    def _topic_log_weights(
        self, u: int, uniq: np.ndarray, cnt: np.ndarray, topical: int
    ) -> np.ndarray:
        """Unnormalized log weights over topics for one removed session.

        The session-count denominator is the same for every topic and is
        dropped; only the session's topical (switch 0) logs contribute the
        artist terms.
        """
        hp = self.hp
        c = self.counts
        lw = np.log(c.r_uk[u] + hp.alpha)
        if topical:
            lw -= log_rising(c.n_k + hp.beta * self.data.num_artists, topical)
            base = c.n_ka[:, uniq] + hp.beta
            top = int(cnt.max())
            if top > EXACT_RISING_LIMIT:
                lw += log_rising_lgamma(base, cnt).sum(axis=1)
            else:
                ascending = np.log(base)
                for step in range(1, top):
                    grow = cnt > step
                    ascending[:, grow] += np.log(base[:, grow] + step)
                lw += ascending.sum(axis=1)
        return lw

    def _switch_log_weights(self, u: int, a: int, k: int) -> tuple[float, float]:
        """Unnormalized log weights for (switch=0, switch=1) of one removed log.

        The shared Beta denominator is constant across the two outcomes and
        is dropped.
        """
        hp = self.hp
        c = self.counts
        num_artists = self.data.num_artists
        lw0 = (
            math.log(hp.rho + c.n_u0[u])
            + math.log(c.n_ka[k, a] + hp.beta)
            - math.log(c.n_k[k] + hp.beta * num_artists)
        )
        lw1 = (
            math.log(hp.rho + c.n_u1[u])
            + math.log(c.n_u1a[u, a] + hp.gamma)
            - math.log(c.n_u1[u] + hp.gamma * num_artists)
        )
        return lw0, lw1

    # -- resampling -------------------------------------------------------

    def _resample_session_topic(self, s: int) -> int:
        u, _old, uniq, cnt, topical = self._remove_session_counts(s)
        lw = self._topic_log_weights(u, uniq, cnt, topical)
        k = draw_from_log_weights(lw, self.rng)
        self._add_session_counts(s, u, k, uniq, cnt, topical)
        return k

    def _resample_log_switch(self, i: int) -> int:
        u, a, k, _old = self._remove_log_counts(i)
        lw0, lw1 = self._switch_log_weights(u, a, k)
        flag = draw_from_two_log_weights(lw0, lw1, self.rng)
        self._add_log_counts(i, u, a, k, flag)
        return flag


def init_assignments(
    dataset: SessionizedDataset | EncodedDataset, hp: Hyperparameters, seed: int
) -> ModelState:
    """Draw a uniform random initial state and build its count tables.

    Topics are drawn first for all sessions, then the switches (swa only),
    so the session and swa variants start from identical topic assignments
    at the same seed.
    """
    data = dataset if isinstance(dataset, EncodedDataset) else EncodedDataset.from_dataset(dataset)
    if data.num_logs == 0:
        raise ValueError("dataset has no logs")
    rng = np.random.default_rng(seed)
    z = rng.integers(0, hp.topics, size=data.num_sessions, dtype=np.int32)
    if hp.variant == "swa":
        x = rng.integers(0, 2, size=data.num_logs, dtype=np.int8)
    else:
        x = np.zeros(data.num_logs, dtype=np.int8)
    counts = CountTables.recount(data, z, x, hp.topics)
    return ModelState(data=data, hp=hp, z=z, x=x, counts=counts, rng=rng, seed=seed)


def joint_log_prob(state: ModelState) -> float:
    """Log of the fully marginalized joint over data and assignments.

    Four factors: the Beta-Bernoulli over switches, the addiction artist
    counts per user, the topic artist counts per topic, and the session
    topic counts per user. Each is a ratio of Gamma functions evaluated in
    log space; the all-zero cells of the big count grids share one
    log-Gamma value apiece.
    """
    hp = state.hp
    c = state.counts
    num_users = state.data.num_users
    num_artists = state.data.num_artists
    topics = hp.topics

    def grid_sum(matrix: np.ndarray, prior: float) -> float:
        nonzero = matrix[matrix > 0]
        zero_cells = matrix.size - nonzero.size
        return float(gammaln(nonzero + prior).sum() + zero_cells * gammaln(prior))

    total = num_users * (gammaln(2.0 * hp.rho) - 2.0 * gammaln(hp.rho))
    total += float(
        (gammaln(hp.rho + c.n_u0) + gammaln(hp.rho + c.n_u1) - gammaln(2.0 * hp.rho + c.n_u)).sum()
    )
    total += num_users * (gammaln(hp.gamma * num_artists) - num_artists * gammaln(hp.gamma))
    total += grid_sum(c.n_u1a, hp.gamma)
    total -= float(gammaln(c.n_u1 + hp.gamma * num_artists).sum())
    total += topics * (gammaln(hp.beta * num_artists) - num_artists * gammaln(hp.beta))
    total += grid_sum(c.n_ka, hp.beta)
    total -= float(gammaln(c.n_k + hp.beta * num_artists).sum())
    total += num_users * (gammaln(hp.alpha * topics) - topics * gammaln(hp.alpha))
    total += grid_sum(c.r_uk, hp.alpha)
    total -= float(gammaln(c.r_u + hp.alpha * topics).sum())
    return float(total)


def conditional_topic_probs(state: ModelState, user: int, session: int) -> np.ndarray:
    """Exact conditional over topics for one session; state is left unchanged."""
    s = state.data.session_index(user, session)
    u, k, uniq, cnt, topical = state._remove_session_counts(s)
    lw = state._topic_log_weights(u, uniq, cnt, topical)
    state._add_session_counts(s, u, k, uniq, cnt, topical)
    return normalize_log_weights(lw)


def conditional_switch_probs(
    state: ModelState, user: int, session: int, position: int
) -> tuple[float, float]:
    """Exact conditional over the switch for one log; state is left unchanged."""
    if state.hp.variant != "swa":
        raise RuntimeError("the switch is clamped to 0 under the session variant")
    i = state.data.log_index(user, session, position)
    u, a, k, flag = state._remove_log_counts(i)
    lw0, lw1 = state._switch_log_weights(u, a, k)
    state._add_log_counts(i, u, a, k, flag)
    m = max(lw0, lw1)
    w0 = math.exp(lw0 - m)
    w1 = math.exp(lw1 - m)
    return w0 / (w0 + w1), w1 / (w0 + w1)


def sample_topic(state: ModelState, user: int, session: int) -> int:
    """Resample one session's topic in place and return the new topic."""
    s = state.data.session_index(user, session)
    return state._resample_session_topic(s)


def sample_x(state: ModelState, user: int, session: int, position: int) -> int:
    """Resample one log's addiction switch in place and return the new value."""
    if state.hp.variant != "swa":
        raise RuntimeError("the switch is clamped to 0 under the session variant")
    i = state.data.log_index(user, session, position)
    return state._resample_log_switch(i)


class SweepStats(NamedTuple):
    sweep: int
    phase: str
    joint_log_prob: float
    seconds: float


def gibbs_sweep(state: ModelState) -> SweepStats:
    """One full pass: every session's topic, then (swa) every log's switch.

    Sessions go in canonical order; within a session the topic is resampled
    before the switches, and switches go in position order.
    """
    started = time.perf_counter()
    data = state.data
    swa = state.hp.variant == "swa"
    starts = data.session_start
    for s in range(data.num_sessions):
        state._resample_session_topic(s)
        if swa:
            for i in range(int(starts[s]), int(starts[s + 1])):
                state._resample_log_switch(i)
    state.sweeps_done += 1
    return SweepStats(
        sweep=state.sweeps_done,
        phase="sampling",
        joint_log_prob=joint_log_prob(state),
        seconds=time.perf_counter() - started,
    )


def run_sweeps(
    state: ModelState,
    sweeps: int,
    burn_in_until: int = 0,
    progress: Callable[[SweepStats], None] | None = None,
) -> list[SweepStats]:
    """Run `sweeps` sweeps; sweeps numbered <= burn_in_until are marked burn-in."""
    trace: list[SweepStats] = []
    for _ in range(sweeps):
        stats = gibbs_sweep(state)
        if stats.sweep <= burn_in_until:
            stats = stats._replace(phase="burn-in")
        trace.append(stats)
        if progress is not None:
            progress(stats)
    return trace


@dataclass
class TrainResult:
    state: ModelState
    estimates: "PointEstimates"  # noqa: F821 - defined in evaluation
    trace: list[SweepStats]


def train(
    dataset: SessionizedDataset | EncodedDataset,
    hp: Hyperparameters,
    sweeps: int = 1000,
    burn_in: int = 800,
    seed: int = 0,
    progress: Callable[[SweepStats], None] | None = None,
) -> TrainResult:
    """Initialize, sweep, and read point estimates off the final state."""
    if burn_in < 0:
        raise ValueError("burn_in must be >= 0")
    if sweeps <= burn_in:
        raise ValueError("sweeps must exceed burn_in")
    from .evaluation import estimate_parameters

    state = init_assignments(dataset, hp, seed)
    trace = run_sweeps(state, sweeps, burn_in_until=burn_in, progress=progress)
    return TrainResult(state=state, estimates=estimate_parameters(state), trace=trace)


# -- checkpointing --------------------------------------------------------


def save_checkpoint(state: ModelState, path: str | Path) -> None:
    """Write the chain state as a zip of arrays plus a JSON meta entry.

    The file is deterministic: fixed entry order, fixed zip timestamps, no
    compression. Equal states produce byte-identical files.
    """
    meta = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "hp": state.hp.to_dict(),
        "seed": state.seed,
        "sweeps_done": state.sweeps_done,
        "rng_state": state.rng.bit_generator.state,
        "users": list(state.data.users),
        "artists": list(state.data.artists),
        "fingerprint": state.data.fingerprint,
    }
    meta_bytes = json.dumps(meta, sort_keys=True).encode()
    entries: list[tuple[str, np.ndarray]] = [
        ("meta", np.frombuffer(meta_bytes, dtype=np.uint8)),
        ("z", state.z),
        ("x", state.x),
        ("session_user", state.data.session_user),
        ("session_start", state.data.session_start),
        ("log_artist", state.data.log_artist),
    ]
    with zipfile.ZipFile(path, "w", zipfile.ZIP_STORED) as archive:
        for name, array in entries:
            payload = BytesIO()
            np.lib.format.write_array(
                payload, np.ascontiguousarray(array), version=(1, 0)
            )
            info = zipfile.ZipInfo(name + ".npy", date_time=(1980, 1, 1, 0, 0, 0))
            archive.writestr(info, payload.getvalue())


def load_checkpoint(path: str | Path) -> ModelState:
    """Rebuild a ModelState from save_checkpoint output.

    Count tables are recounted from the stored assignments; the rng resumes
    from its stored state, so continuing the chain reproduces exactly what
    an uninterrupted run would have done.
    """
    with np.load(path) as archive:
        meta = json.loads(bytes(archive["meta"]).decode())
        if meta.get("format") != CHECKPOINT_FORMAT:
            raise ValueError(f"{path} is not a {CHECKPOINT_FORMAT} file")
        if meta.get("version") != CHECKPOINT_VERSION:
            raise ValueError(f"unsupported checkpoint version {meta.get('version')!r}")
        z = archive["z"].astype(np.int32)
        x = archive["x"].astype(np.int8)
        session_user = archive["session_user"]
        session_start = archive["session_start"]
        log_artist = archive["log_artist"]
    hp = Hyperparameters(**meta["hp"])
    data = EncodedDataset.from_arrays(
        users=tuple(meta["users"]),
        artists=tuple(meta["artists"]),
        session_user=session_user,
        session_start=session_start,
        log_artist=log_artist,
        fingerprint=meta["fingerprint"],
    )
    if z.size != data.num_sessions or x.size != data.num_logs:
        raise ValueError(f"{path}: assignment arrays do not match the stored dataset")
    rng = np.random.default_rng()
    rng.bit_generator.state = meta["rng_state"]
    counts = CountTables.recount(data, z, x, hp.topics)
    return ModelState(
        data=data,
        hp=hp,
        z=z,
        x=x,
        counts=counts,
        rng=rng,
        seed=int(meta["seed"]),
        sweeps_done=int(meta["sweeps_done"]),
    )
