"""Point estimates and held-out perplexity.

Estimates are read off a single sampler state: each smoothed count ratio
gives a posterior-mean-style parameter. Held-out data is scored by the
per-play mixture probability (taste share times the topic mixture plus
addiction share times the personal distribution), and perplexity is the
exponentiated negative mean log of that probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .ingest import SessionizedDataset
from .model import CountTables, Hyperparameters, ModelState


def _fmt(value: float) -> str:
    return format(float(value), ".12g")


@dataclass(frozen=True, eq=False)
class PointEstimates:
    """Smoothed parameter readouts from one sampler state.

    theta is (users x topics), phi (topics x artists), psi (users x
    artists); lambda0/lambda1 split each user's plays between taste and
    addiction mode and sum to 1. plays carries each user's training log
    count for report support columns.
    """

    users: tuple[str, ...]
    artists: tuple[str, ...]
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    lambda0: np.ndarray
    lambda1: np.ndarray
    plays: np.ndarray
    variant: str

    @property
    def topics(self) -> int:
        return int(self.theta.shape[1])

    @cached_property
    def user_index(self) -> dict[str, int]:
        return {user: i for i, user in enumerate(self.users)}

    @cached_property
    def artist_index(self) -> dict[str, int]:
        return {artist: i for i, artist in enumerate(self.artists)}


def point_estimates_from_counts(
    counts: CountTables,
    hp: Hyperparameters,
    users: Sequence[str],
    artists: Sequence[str],
) -> PointEstimates:
    """Turn count tables into smoothed probability estimates.

    Under the session variant there is no addiction side: psi is uniform
    and every user's weight sits entirely on taste mode, which makes the
    two variants directly comparable under the same scoring rule.
    """
    num_artists = len(artists)
    theta = (counts.r_uk + hp.alpha) / (
        counts.r_u + hp.alpha * hp.topics
    )[:, None]
    phi = (counts.n_ka + hp.beta) / (counts.n_k + hp.beta * num_artists)[:, None]
    if hp.variant == "swa":
        psi = (counts.n_u1a + hp.gamma) / (
            counts.n_u1 + hp.gamma * num_artists
        )[:, None]
        lambda0 = (counts.n_u0 + hp.rho) / (counts.n_u + 2.0 * hp.rho)
        lambda1 = (counts.n_u1 + hp.rho) / (counts.n_u + 2.0 * hp.rho)
    else:
        psi = np.full((len(users), num_artists), 1.0 / num_artists)
        lambda0 = np.ones(len(users))
        lambda1 = np.zeros(len(users))
    return PointEstimates(
        users=tuple(users),
        artists=tuple(artists),
        theta=theta,
        phi=phi,
        psi=psi,
        lambda0=lambda0,
        lambda1=lambda1,
        plays=counts.n_u.copy(),
        variant=hp.variant,
    )


def estimate_parameters(state: ModelState) -> PointEstimates:
    """Point estimates off the current state's count tables."""
    return point_estimates_from_counts(
        state.counts, state.hp, state.data.users, state.data.artists
    )


def predictive_row(est: PointEstimates, user: int) -> np.ndarray:
    """One user's predictive distribution over all artists."""
    return est.lambda0[user] * (est.theta[user] @ est.phi) + est.lambda1[user] * est.psi[user]


def song_prob(user: str, artist: str, est: PointEstimates) -> float:
    """Mixture probability of one (user, artist) play under the estimates."""
    try:
        u = est.user_index[user]
    except KeyError:
        raise KeyError(f"unknown user {user!r}") from None
    try:
        a = est.artist_index[artist]
    except KeyError:
        raise KeyError(f"unknown artist {artist!r}") from None
    taste = float(est.theta[u] @ est.phi[:, a])
    return float(est.lambda0[u] * taste + est.lambda1[u] * est.psi[u, a])


class PerplexityResult(NamedTuple):
    value: float
    evaluated: int
    skipped: int


def perplexity(test: SessionizedDataset, est: PointEstimates) -> PerplexityResult:
    """Held-out perplexity of the estimates on a sessionized test set.

    Logs of users or artists the model never saw cannot be scored; they are
    skipped and counted. Summation runs in canonical log order so the value
    is bit-stable across runs.
    """
    total = 0.0
    evaluated = 0
    skipped = 0
    for user in test.users:
        user_sessions = test.sessions[user]
        u = est.user_index.get(user)
        if u is None:
            skipped += sum(len(session) for session in user_sessions)
            continue
        row = predictive_row(est, u)
        for session in user_sessions:
            for log in session.logs:
                a = est.artist_index.get(log.artist_id)
                if a is None:
                    skipped += 1
                    continue
                total += math.log(row[a])
                evaluated += 1
    if evaluated == 0:
        raise ValueError("no test log has both a known user and a known artist")
    return PerplexityResult(
        value=math.exp(-total / evaluated), evaluated=evaluated, skipped=skipped
    )


# -- text exports ---------------------------------------------------------


def _provenance_lines(provenance: Mapping[str, object] | None) -> list[str]:
    return [f"# {key}: {value}" for key, value in (provenance or {}).items()]


def write_estimates(
    est: PointEstimates,
    counts: CountTables,
    out_dir: str | Path,
    provenance: Mapping[str, object] | None = None,
) -> dict[str, Path]:
    """Write theta/phi/psi/lambda as TSV files and return their paths.

    theta is dense. phi and psi are triplet files listing only cells backed
    by a nonzero count; each row block starts with a '*' line carrying the
    shared smoothing-floor probability of its zero-count cells, so the
    dense matrix is reconstructible.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    header = _provenance_lines(provenance)
    paths: dict[str, Path] = {}

    lines = list(header)
    lines.append("user_id\t" + "\t".join(f"theta_{k}" for k in range(est.topics)))
    for i, user in enumerate(est.users):
        lines.append(user + "\t" + "\t".join(_fmt(v) for v in est.theta[i]))
    paths["theta"] = out / "theta.tsv"
    paths["theta"].write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = list(header)
    lines.append("topic\tartist_id\tcount\tprob")
    for k in range(est.topics):
        floor = est.phi[k].min()
        lines.append(f"{k}\t*\t0\t{_fmt(floor)}")
        for a in np.nonzero(counts.n_ka[k])[0]:
            lines.append(
                f"{k}\t{est.artists[a]}\t{int(counts.n_ka[k, a])}\t{_fmt(est.phi[k, a])}"
            )
    paths["phi"] = out / "phi.tsv"
    paths["phi"].write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = list(header)
    lines.append("user_id\tartist_id\tcount\tprob")
    for i, user in enumerate(est.users):
        floor = est.psi[i].min()
        lines.append(f"{user}\t*\t0\t{_fmt(floor)}")
        for a in np.nonzero(counts.n_u1a[i])[0]:
            lines.append(
                f"{user}\t{est.artists[a]}\t{int(counts.n_u1a[i, a])}\t{_fmt(est.psi[i, a])}"
            )
    paths["psi"] = out / "psi.tsv"
    paths["psi"].write_text("\n".join(lines) + "\n", encoding="utf-8")

    lines = list(header)
    lines.append("user_id\tplays\tlambda0\tlambda1")
    for i, user in enumerate(est.users):
        lines.append(
            f"{user}\t{int(est.plays[i])}\t{_fmt(est.lambda0[i])}\t{_fmt(est.lambda1[i])}"
        )
    paths["lambda"] = out / "lambda.tsv"
    paths["lambda"].write_text("\n".join(lines) + "\n", encoding="utf-8")
    return paths


class PerplexityRow(NamedTuple):
    dataset: str
    topics: int
    variant: str
    seed: int
    perplexity: float
    evaluated: int
    skipped: int
    train_fingerprint: str
    test_fingerprint: str


def write_perplexity_report(
    rows: Sequence[PerplexityRow],
    path: str | Path,
    provenance: Mapping[str, object] | None = None,
) -> None:
    """One row per (dataset, topic count, variant) scoring run."""
    lines = _provenance_lines(provenance)
    lines.append(
        "dataset\ttopics\tvariant\tseed\tperplexity\tevaluated\tskipped"
        "\ttrain_fingerprint\ttest_fingerprint"
    )
    for row in rows:
        lines.append(
            f"{row.dataset}\t{row.topics}\t{row.variant}\t{row.seed}\t"
            f"{_fmt(row.perplexity)}\t{row.evaluated}\t{row.skipped}\t"
            f"{row.train_fingerprint}\t{row.test_fingerprint}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
