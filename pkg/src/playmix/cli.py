"""Command-line pipeline: simulate, ingest, train, eval, analyze.

Every value flag can also come from the environment as PLAYMIX_<FLAG>
(dashes become underscores); an explicit flag wins over the environment.
Progress and errors go to standard error as JSON lines; data goes only to
the output files. Exit codes: 0 success, 2 missing input, 3 invalid
configuration (the offending flag is named), 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field, replace
from datetime import timedelta, timezone, tzinfo
from pathlib import Path
from typing import Callable, Sequence, TypeVar

import numpy as np

from . import __version__
from .analysis import (
    PERIOD_HOUR,
    PERIOD_WEEKDAY,
    artist_addiction_report,
    compute_log_posteriors,
    temporal_addiction_report,
    topic_addiction_report,
    user_addiction_report,
    write_histogram,
    write_report,
    write_topic_artists,
)
from .evaluation import (
    PerplexityRow,
    estimate_parameters,
    perplexity,
    write_estimates,
    write_perplexity_report,
)
from .ingest import (
    FORMAT_PRESETS,
    DEFAULT_MIN_USERS,
    FormatMismatchError,
    SessionizedDataset,
    filter_rare_artists,
    parse_play_logs,
    parse_timestamp,
    read_sessions,
    resolve_timezone,
    segment_sessions,
    split_train_test,
    write_sessions,
)
from .model import (
    Hyperparameters,
    SweepStats,
    load_checkpoint,
    save_checkpoint,
    train,
)
from .synth import generate_dataset, random_ground_truth, write_logs, write_truth

ENV_PREFIX = "PLAYMIX_"
EXIT_MISSING_INPUT = 2
EXIT_BAD_CONFIG = 3

DEFAULT_TOPIC_SWEEP = (5, 10, 20, 30, 40, 50, 100, 200, 300)

T = TypeVar("T")


class CommandError(Exception):
    """Fatal CLI error carrying the exit code and the offending flag."""

    def __init__(self, message: str, field: str | None = None, exit_code: int = 1):
        super().__init__(message)
        self.field = field
        self.exit_code = exit_code


def _emit(event: str, **fields: object) -> None:
    print(json.dumps({"event": event, **fields}, sort_keys=True), file=sys.stderr, flush=True)


def _env_name(flag: str) -> str:
    return ENV_PREFIX + flag.lstrip("-").replace("-", "_").upper()


def _resolve(
    flag_value: str | None,
    flag: str,
    default: T,
    parse: Callable[[str], object] = str,
) -> T | object:
    """Pick flag value, else environment override, else default."""
    source = flag
    raw = flag_value
    if raw is None:
        raw = os.environ.get(_env_name(flag))
        source = _env_name(flag)
    if raw is None:
        return default
    try:
        return parse(raw)
    except (ValueError, KeyError) as exc:
        raise CommandError(
            f"invalid value {raw!r} for {source}: {exc}", field=flag, exit_code=EXIT_BAD_CONFIG
        ) from None


def _int_at_least(minimum: int) -> Callable[[str], int]:
    def parse(raw: str) -> int:
        value = int(raw)
        if value < minimum:
            raise ValueError(f"must be >= {minimum}")
        return value

    return parse


def _positive_float(raw: str) -> float:
    value = float(raw)
    if not value > 0:
        raise ValueError("must be > 0")
    return value


def _positive_minutes(raw: str) -> timedelta:
    value = float(raw)
    if not value > 0:
        raise ValueError("must be > 0")
    return timedelta(minutes=value)


def _topic_list(raw: str) -> tuple[int, ...]:
    values = tuple(int(part) for part in raw.split(",") if part.strip())
    if not values:
        raise ValueError("empty topic list")
    if any(v < 1 for v in values):
        raise ValueError("topic counts must be >= 1")
    return values


def _day_list(raw: str) -> tuple[int, ...]:
    values = tuple(int(part) for part in raw.split(",") if part.strip())
    if any(not 0 <= v <= 6 for v in values):
        raise ValueError("weekday indices run 0 (Monday) through 6 (Sunday)")
    return values


def _variant(raw: str) -> str:
    if raw not in ("session", "swa"):
        raise ValueError("must be 'session' or 'swa'")
    return raw


def _variant_list(raw: str) -> tuple[str, ...]:
    if raw == "both":
        return ("session", "swa")
    return (_variant(raw),)


def _format_preset(raw: str):
    if raw not in FORMAT_PRESETS:
        raise ValueError(f"must be one of {sorted(FORMAT_PRESETS)}")
    return FORMAT_PRESETS[raw]


def _timezone(raw: str) -> tzinfo:
    return resolve_timezone(raw)


def _columns_spec(raw: str) -> dict[str, int]:
    """Parse 'user=0,timestamp=1,artist=2[,artist_fallback=3]'."""
    allowed = {"user", "timestamp", "artist", "artist_fallback"}
    spec: dict[str, int] = {}
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        name, _, index = part.partition("=")
        if name not in allowed or not index:
            raise ValueError(f"bad column assignment {part!r}")
        spec[name] = int(index)
    if not spec:
        raise ValueError("empty column spec")
    return spec


def _instant(raw: str):
    stamp = parse_timestamp(raw, "iso")
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp


def _existing_file(path_text: str, flag: str) -> Path:
    path = Path(path_text)
    if not path.is_file():
        raise CommandError(f"input file not found: {path}", field=flag, exit_code=EXIT_MISSING_INPUT)
    return path


@dataclass
class RunConfig:
    """Resolved settings of one invocation, embedded into every artifact."""

    command: str
    values: dict[str, object] = field(default_factory=dict)

    def provenance(self) -> dict[str, object]:
        header: dict[str, object] = {"tool": f"playmix {__version__}", "command": self.command}
        for key in sorted(self.values):
            value = self.values[key]
            if isinstance(value, timedelta):
                value = f"{value.total_seconds():g}s"
            elif isinstance(value, (tuple, list)):
                value = ",".join(str(v) for v in value)
            header[key] = value
        return header


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="playmix",
        description="Infer taste vs. artist-addiction motivation from music play logs.",
    )
    parser.add_argument("--version", action="version", version=f"playmix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    ingest = sub.add_parser("ingest", help="parse raw logs into sessionized datasets")
    ingest.add_argument("--input", required=True, help="raw play-log file")
    ingest.add_argument("--format", help="input layout preset: lastfm1k or generic")
    ingest.add_argument("--columns", help="column override, e.g. user=0,timestamp=1,artist=2")
    ingest.add_argument("--gap-minutes", help="session gap threshold in minutes (default 30)")
    ingest.add_argument(
        "--min-users-per-artist",
        help="drop artists played by at most this many users (default 3)",
    )
    ingest.add_argument("--timezone", help="timezone for timestamps (default UTC)")
    ingest.add_argument("--split-at", help="train/test boundary instant (ISO-8601)")
    ingest.add_argument("--out-dir", help="output directory (default playmix-out)")

    train_cmd = sub.add_parser("train", help="run the sampler on a sessionized dataset")
    train_cmd.add_argument("--input", required=True, help="sessionized dataset file")
    train_cmd.add_argument("--topics", help="number of topics (default 30)")
    train_cmd.add_argument("--variant", help="session or swa (default swa)")
    train_cmd.add_argument("--sweeps", help="total sweeps (default 1000)")
    train_cmd.add_argument("--burn-in", help="burn-in sweeps (default 800)")
    train_cmd.add_argument("--seed", help="rng seed (default 0)")
    train_cmd.add_argument("--alpha", help="topic-mix concentration (default 1/topics)")
    train_cmd.add_argument("--beta", help="topic-artist concentration (default 50/artists)")
    train_cmd.add_argument("--gamma", help="addiction-artist concentration (default 50/artists)")
    train_cmd.add_argument("--rho", help="taste/addiction Beta concentration (default 0.5)")
    train_cmd.add_argument("--out-dir", help="output directory (default playmix-out)")

    eval_cmd = sub.add_parser("eval", help="train chains over a topic-count list and score them")
    eval_cmd.add_argument("--train", required=True, help="training sessionized dataset")
    eval_cmd.add_argument("--test", required=True, help="held-out sessionized dataset")
    eval_cmd.add_argument(
        "--topics", help="comma-separated topic counts (default 5,10,20,30,40,50,100,200,300)"
    )
    eval_cmd.add_argument("--variant", help="session, swa, or both (default both)")
    eval_cmd.add_argument("--sweeps", help="total sweeps per chain (default 1000)")
    eval_cmd.add_argument("--burn-in", help="burn-in sweeps (default 800)")
    eval_cmd.add_argument("--seed", help="root seed; each chain gets a derived seed (default 0)")
    eval_cmd.add_argument("--out-dir", help="output directory (default playmix-out)")

    analyze = sub.add_parser("analyze", help="addiction reports from a trained checkpoint")
    analyze.add_argument("--input", required=True, help="the training sessionized dataset")
    analyze.add_argument("--checkpoint", required=True, help="checkpoint written by train")
    analyze.add_argument("--timezone", help="timezone for hour/weekday buckets (default as stored)")
    analyze.add_argument("--bins", help="histogram bin count (default 10)")
    analyze.add_argument("--top-n", help="artists per topic in the topic report (default 20)")
    analyze.add_argument("--days", help="restrict the hourly report to weekdays, e.g. 0,1,2,3,4")
    analyze.add_argument("--out-dir", help="output directory (default playmix-out)")

    sim = sub.add_parser("simulate", help="generate synthetic logs with known parameters")
    sim.add_argument("--users", help="number of users (default 200)")
    sim.add_argument("--artists", help="number of artists (default 300)")
    sim.add_argument("--topics", help="true number of topics (default 10)")
    sim.add_argument("--sessions-per-user", help="sessions per user (default 40)")
    sim.add_argument("--lambda-a", help="Beta shape a for addiction weights (default 0.5)")
    sim.add_argument("--lambda-b", help="Beta shape b for addiction weights (default 0.5)")
    sim.add_argument("--seed", help="rng seed (default 0)")
    sim.add_argument("--out-dir", help="output directory (default playmix-out)")
    return parser


def _out_dir(args: argparse.Namespace, config: RunConfig) -> Path:
    out = Path(_resolve(args.out_dir, "--out-dir", "playmix-out"))
    config.values["out_dir"] = str(out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _hyperparameters(
    args: argparse.Namespace, config: RunConfig, topics: int, num_artists: int, variant: str
) -> Hyperparameters:
    alpha = _resolve(args.alpha, "--alpha", None, _positive_float)
    beta = _resolve(args.beta, "--beta", None, _positive_float)
    gamma = _resolve(args.gamma, "--gamma", None, _positive_float)
    rho = _resolve(args.rho, "--rho", None, _positive_float)
    hp = Hyperparameters.with_defaults(
        topics, num_artists, variant, alpha=alpha, beta=beta, gamma=gamma, rho=rho
    )
    config.values.update(
        {"topics": topics, "variant": variant, "alpha": hp.alpha, "beta": hp.beta,
         "gamma": hp.gamma, "rho": hp.rho}
    )
    return hp


def _schedule(args: argparse.Namespace, config: RunConfig) -> tuple[int, int, int]:
    sweeps = _resolve(args.sweeps, "--sweeps", 1000, _int_at_least(1))
    burn_in = _resolve(args.burn_in, "--burn-in", None, _int_at_least(0))
    if burn_in is None:
        burn_in = min(800, sweeps - 1)
    if sweeps <= burn_in:
        raise CommandError(
            f"--sweeps ({sweeps}) must exceed --burn-in ({burn_in})",
            field="--sweeps",
            exit_code=EXIT_BAD_CONFIG,
        )
    seed = _resolve(args.seed, "--seed", 0, int)
    config.values.update({"sweeps": sweeps, "burn_in": burn_in, "seed": seed})
    return sweeps, burn_in, seed


def _write_trace(trace: Sequence[SweepStats], path: Path, provenance: dict[str, object]) -> None:
    lines = [f"# {key}: {value}" for key, value in provenance.items()]
    lines.append("sweep\tphase\tjoint_log_prob")
    for stats in trace:
        lines.append(f"{stats.sweep}\t{stats.phase}\t{format(stats.joint_log_prob, '.12g')}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_ingest(args: argparse.Namespace) -> int:
    config = RunConfig("ingest")
    path = _existing_file(args.input, "--input")
    config.values["input"] = str(path)
    fmt = _resolve(args.format, "--format", FORMAT_PRESETS["lastfm1k"], _format_preset)
    config.values["format"] = fmt.name
    columns = _resolve(args.columns, "--columns", None, _columns_spec)
    if columns is not None:
        fmt = replace(
            fmt,
            user_col=columns.get("user", fmt.user_col),
            timestamp_col=columns.get("timestamp", fmt.timestamp_col),
            artist_col=columns.get("artist", fmt.artist_col),
            artist_fallback_col=columns.get("artist_fallback", fmt.artist_fallback_col),
        )
        config.values["columns"] = args.columns or os.environ.get(_env_name("--columns"))
    tz = _resolve(args.timezone, "--timezone", timezone.utc, _timezone)
    config.values["timezone"] = str(tz)
    gap = _resolve(args.gap_minutes, "--gap-minutes", timedelta(minutes=30), _positive_minutes)
    config.values["gap"] = gap
    min_users = _resolve(
        args.min_users_per_artist, "--min-users-per-artist", DEFAULT_MIN_USERS, _int_at_least(0)
    )
    config.values["min_users_per_artist"] = min_users
    split_at = _resolve(args.split_at, "--split-at", None, _instant)
    if split_at is not None:
        config.values["split_at"] = split_at.isoformat()
    out = _out_dir(args, config)

    try:
        with path.open(encoding="utf-8") as stream:
            parsed = parse_play_logs(stream, fmt, tz)
    except FormatMismatchError as exc:
        raise CommandError(str(exc), field="--format", exit_code=EXIT_BAD_CONFIG) from None
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc}", exit_code=EXIT_MISSING_INPUT) from None
    _emit("parsed", lines=parsed.total, malformed=parsed.malformed, logs=len(parsed.logs))

    if split_at is None:
        splits = [("sessions", parsed.logs)]
    else:
        train_logs, test_logs = split_train_test(parsed.logs, split_at)
        splits = [("train.sessions", train_logs), ("test.sessions", test_logs)]
    provenance = config.provenance()
    for name, logs in splits:
        kept = filter_rare_artists(logs, min_users)
        dataset = segment_sessions(kept, gap) if kept else None
        target = out / f"{name}.tsv"
        if dataset is None:
            target.write_text(
                "\n".join(f"# {k}: {v}" for k, v in provenance.items())
                + "\nuser_id\tsession\tposition\tartist_id\ttimestamp\n",
                encoding="utf-8",
            )
            _emit("ingested", split=name, logs=0, users=0, artists=0, sessions=0,
                  path=str(target))
            continue
        write_sessions(dataset, target, provenance)
        _emit(
            "ingested",
            split=name,
            logs=dataset.num_logs,
            users=len(dataset.users),
            artists=len(dataset.artists),
            sessions=dataset.num_sessions,
            path=str(target),
        )
    return 0


def _read_sessions_checked(path: Path) -> SessionizedDataset:
    try:
        return read_sessions(path)
    except FormatMismatchError as exc:
        raise CommandError(str(exc), exit_code=1) from None


def cmd_train(args: argparse.Namespace) -> int:
    config = RunConfig("train")
    path = _existing_file(args.input, "--input")
    config.values["input"] = str(path)
    dataset = _read_sessions_checked(path)
    if dataset.num_logs == 0:
        raise CommandError(f"dataset {path} has no logs", exit_code=1)
    topics = _resolve(args.topics, "--topics", 30, _int_at_least(1))
    variant = _resolve(args.variant, "--variant", "swa", _variant)
    hp = _hyperparameters(args, config, topics, len(dataset.artists), variant)
    sweeps, burn_in, seed = _schedule(args, config)
    out = _out_dir(args, config)
    config.values["train_fingerprint"] = dataset.fingerprint()

    report_every = max(1, sweeps // 10)

    def progress(stats: SweepStats) -> None:
        if stats.sweep % report_every == 0 or stats.sweep == sweeps:
            _emit("sweep", sweep=stats.sweep, phase=stats.phase,
                  joint_log_prob=stats.joint_log_prob)

    result = train(dataset, hp, sweeps=sweeps, burn_in=burn_in, seed=seed, progress=progress)
    provenance = config.provenance()
    checkpoint_path = out / "checkpoint.npz"
    save_checkpoint(result.state, checkpoint_path)
    _write_trace(result.trace, out / "trace.tsv", provenance)
    paths = write_estimates(result.estimates, result.state.counts, out, provenance)
    _emit(
        "trained",
        checkpoint=str(checkpoint_path),
        final_joint_log_prob=result.trace[-1].joint_log_prob,
        estimates={name: str(p) for name, p in sorted(paths.items())},
    )
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    config = RunConfig("eval")
    train_path = _existing_file(args.train, "--train")
    test_path = _existing_file(args.test, "--test")
    config.values["train"] = str(train_path)
    config.values["test"] = str(test_path)
    train_set = _read_sessions_checked(train_path)
    test_set = _read_sessions_checked(test_path)
    if train_set.num_logs == 0:
        raise CommandError(f"dataset {train_path} has no logs", exit_code=1)
    topic_counts = _resolve(args.topics, "--topics", DEFAULT_TOPIC_SWEEP, _topic_list)
    variants = _resolve(args.variant, "--variant", ("session", "swa"), _variant_list)
    sweeps, burn_in, seed = _schedule(args, config)
    config.values["topics"] = topic_counts
    config.values["variants"] = variants
    out = _out_dir(args, config)
    train_fp = train_set.fingerprint()
    test_fp = test_set.fingerprint()

    chain_seeds = np.random.SeedSequence(seed).generate_state(
        len(topic_counts) * len(variants), dtype=np.uint64
    )
    rows: list[PerplexityRow] = []
    chain = 0
    for topics in topic_counts:
        for variant in variants:
            chain_seed = int(chain_seeds[chain])
            chain += 1
            hp = Hyperparameters.with_defaults(topics, len(train_set.artists), variant)
            result = train(train_set, hp, sweeps=sweeps, burn_in=burn_in, seed=chain_seed)
            score = perplexity(test_set, result.estimates)
            rows.append(
                PerplexityRow(
                    dataset=test_path.stem,
                    topics=topics,
                    variant=variant,
                    seed=chain_seed,
                    perplexity=score.value,
                    evaluated=score.evaluated,
                    skipped=score.skipped,
                    train_fingerprint=train_fp,
                    test_fingerprint=test_fp,
                )
            )
            _emit("evaluated", topics=topics, variant=variant,
                  perplexity=score.value, evaluated=score.evaluated, skipped=score.skipped)
    report_path = out / "perplexity.tsv"
    write_perplexity_report(rows, report_path, config.provenance())
    _emit("report", path=str(report_path), rows=len(rows))
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    config = RunConfig("analyze")
    data_path = _existing_file(args.input, "--input")
    checkpoint_path = _existing_file(args.checkpoint, "--checkpoint")
    config.values["input"] = str(data_path)
    config.values["checkpoint"] = str(checkpoint_path)
    dataset = _read_sessions_checked(data_path)
    try:
        state = load_checkpoint(checkpoint_path)
    except (ValueError, OSError, KeyError) as exc:
        raise CommandError(f"cannot load checkpoint {checkpoint_path}: {exc}", exit_code=1) from None
    if state.hp.variant != "swa":
        raise CommandError(
            "checkpoint was trained with --variant session; addiction analyses "
            "need an swa checkpoint",
            field="--checkpoint",
            exit_code=EXIT_BAD_CONFIG,
        )
    if dataset.fingerprint() != state.data.fingerprint:
        raise CommandError(
            f"{data_path} is not the dataset this checkpoint was trained on",
            field="--input",
            exit_code=EXIT_BAD_CONFIG,
        )
    tz = _resolve(args.timezone, "--timezone", None, _timezone)
    if tz is not None:
        config.values["timezone"] = str(tz)
    bins = _resolve(args.bins, "--bins", 10, _int_at_least(2))
    top_n = _resolve(args.top_n, "--top-n", 20, _int_at_least(1))
    days = _resolve(args.days, "--days", None, _day_list)
    config.values.update({"bins": bins, "top_n": top_n})
    if days is not None:
        config.values["days"] = days
    out = _out_dir(args, config)
    provenance = config.provenance()

    estimates = estimate_parameters(state)
    posteriors = compute_log_posteriors(state)
    user_report, user_hist = user_addiction_report(estimates, bins)
    artist_report, artist_hist = artist_addiction_report(state, posteriors, bins)
    hour_report = temporal_addiction_report(
        state, dataset, posteriors, PERIOD_HOUR, tz=tz, days=days
    )
    weekday_report = temporal_addiction_report(
        state, dataset, posteriors, PERIOD_WEEKDAY, tz=tz
    )
    topic_report = topic_addiction_report(state, estimates, posteriors, top_n)

    write_report(user_report, out / "user_report.tsv", provenance)
    write_histogram(user_hist, out / "user_histogram.tsv", provenance)
    write_report(artist_report, out / "artist_report.tsv", provenance)
    write_histogram(artist_hist, out / "artist_histogram.tsv", provenance)
    write_report(hour_report, out / "hour_report.tsv", provenance)
    write_report(weekday_report, out / "weekday_report.tsv", provenance)
    write_report(topic_report, out / "topic_report.tsv", provenance)
    write_topic_artists(estimates, out / "topic_artists.tsv", top_n, provenance)
    _emit(
        "analyzed",
        out_dir=str(out),
        users=len(user_report.entries),
        artists=len(artist_report.entries),
        hour_buckets=len(hour_report.entries),
        weekday_buckets=len(weekday_report.entries),
        topics=len(topic_report.entries),
    )
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    config = RunConfig("simulate")
    num_users = _resolve(args.users, "--users", 200, _int_at_least(1))
    num_artists = _resolve(args.artists, "--artists", 300, _int_at_least(1))
    topics = _resolve(args.topics, "--topics", 10, _int_at_least(1))
    sessions_per_user = _resolve(
        args.sessions_per_user, "--sessions-per-user", 40, _int_at_least(1)
    )
    lambda_a = _resolve(args.lambda_a, "--lambda-a", 0.5, _positive_float)
    lambda_b = _resolve(args.lambda_b, "--lambda-b", 0.5, _positive_float)
    seed = _resolve(args.seed, "--seed", 0, int)
    config.values.update(
        {
            "users": num_users,
            "artists": num_artists,
            "topics": topics,
            "sessions_per_user": sessions_per_user,
            "lambda_a": lambda_a,
            "lambda_b": lambda_b,
            "seed": seed,
        }
    )
    out = _out_dir(args, config)
    truth = random_ground_truth(
        num_users,
        num_artists,
        topics,
        seed,
        lambda_beta=(lambda_a, lambda_b),
        sessions_per_user=sessions_per_user,
    )
    dataset, true_z, true_x = generate_dataset(truth, seed)
    logs_path = out / "logs.tsv"
    truth_path = out / "truth.json"
    write_logs(dataset, logs_path, config.provenance())
    write_truth(truth, true_z, true_x, truth_path)
    _emit(
        "simulated",
        logs=dataset.num_logs,
        sessions=dataset.num_sessions,
        users=len(dataset.users),
        artists=len(dataset.artists),
        logs_path=str(logs_path),
        truth_path=str(truth_path),
    )
    return 0


HANDLERS = {
    "ingest": cmd_ingest,
    "train": cmd_train,
    "eval": cmd_eval,
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return HANDLERS[args.command](args)
    except CommandError as err:
        _emit("error", message=str(err), field=err.field, exit_code=err.exit_code)
        return err.exit_code
    except Exception as err:  # keep the promise of a machine-readable error line
        _emit("error", message=f"{type(err).__name__}: {err}", field=None, exit_code=1)
        return 1


def entry_point() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry_point()
