"""Infer song-selection motivation (usual taste vs. artist addiction) from play logs.

The pipeline: ingest raw play logs into per-user listening sessions, train
the session or session-with-addiction model by collapsed Gibbs sampling,
score held-out data by perplexity, and break posterior addiction mass down
by user, artist, topic, hour, and weekday. A synthetic generator runs the
generative story forward for parameter-recovery testing.
"""

__version__ = "0.1.0"

from .analysis import (
    AddictionReport,
    Histogram,
    LogPosterior,
    ReportEntry,
    artist_addiction_report,
    compute_log_posteriors,
    temporal_addiction_report,
    top_artists_for_topic,
    topic_addiction_report,
    user_addiction_report,
)
from .evaluation import (
    PerplexityResult,
    PointEstimates,
    estimate_parameters,
    perplexity,
    point_estimates_from_counts,
    song_prob,
)
from .ingest import (
    DEFAULT_MIN_USERS,
    DEFAULT_SESSION_GAP,
    FORMAT_PRESETS,
    FormatConfig,
    FormatMismatchError,
    PlayLog,
    Session,
    SessionizedDataset,
    filter_rare_artists,
    parse_play_logs,
    read_sessions,
    resolve_timezone,
    segment_sessions,
    split_train_test,
    write_sessions,
)
from .model import (
    Assignments,
    CountTables,
    EncodedDataset,
    Hyperparameters,
    ModelState,
    SweepStats,
    TrainResult,
    conditional_switch_probs,
    conditional_topic_probs,
    gibbs_sweep,
    init_assignments,
    joint_log_prob,
    load_checkpoint,
    run_sweeps,
    sample_topic,
    sample_x,
    save_checkpoint,
    train,
)
from .synth import GroundTruth, generate_dataset, random_ground_truth
