import json
import math
import random

import numpy as np
import pytest

from playmix import (
    CountTables,
    EncodedDataset,
    Hyperparameters,
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
from playmix.synth import generate_dataset, random_ground_truth
from support import make_dataset

HAND_SPEC = {"u0": [["a0", "a1"], ["a1"]], "u1": [["a2", "a0"]]}


def _hand_state(variant="swa", topics=2, seed=0):
    dataset = make_dataset(HAND_SPEC)
    hp = Hyperparameters(topics=topics, alpha=0.5, beta=0.4, gamma=0.3, rho=0.5, variant=variant)
    return init_assignments(dataset, hp, seed=seed)


def _medium_state(variant="swa", topics=4, seed=3):
    truth = random_ground_truth(12, 15, 3, seed=71, sessions_per_user=8)
    dataset, _, _ = generate_dataset(truth, seed=72)
    hp = Hyperparameters.with_defaults(topics, len(dataset.artists), variant)
    return init_assignments(dataset, hp, seed=seed)


# -- hyperparameters ------------------------------------------------------


def test_hyperparameter_defaults():
    hp = Hyperparameters.with_defaults(10, 300)
    assert hp.alpha == pytest.approx(0.1)
    assert hp.beta == pytest.approx(50.0 / 300.0)
    assert hp.gamma == pytest.approx(50.0 / 300.0)
    assert hp.rho == 0.5
    assert hp.variant == "swa"


def test_hyperparameter_overrides():
    hp = Hyperparameters.with_defaults(10, 300, "session", alpha=2.0, rho=1.5)
    assert hp.alpha == 2.0 and hp.rho == 1.5
    assert hp.beta == pytest.approx(50.0 / 300.0)
    assert hp.variant == "session"


@pytest.mark.parametrize(
    "kwargs",
    [
        {"topics": 0},
        {"alpha": 0.0},
        {"beta": -1.0},
        {"gamma": 0.0},
        {"rho": -0.5},
        {"variant": "bogus"},
    ],
)
def test_hyperparameter_validation(kwargs):
    base = {"topics": 2, "alpha": 0.5, "beta": 0.5, "gamma": 0.5, "rho": 0.5, "variant": "swa"}
    with pytest.raises(ValueError):
        Hyperparameters(**{**base, **kwargs})


def test_hyperparameter_to_dict_round_trip():
    hp = Hyperparameters.with_defaults(7, 123, "session")
    assert Hyperparameters(**hp.to_dict()) == hp


# -- encoding -------------------------------------------------------------


def test_encoding_flattens_in_canonical_order():
    data = EncodedDataset.from_dataset(make_dataset(HAND_SPEC))
    assert data.users == ("u0", "u1")
    assert data.artists == ("a0", "a1", "a2")
    assert data.session_user.tolist() == [0, 0, 1]
    assert data.session_start.tolist() == [0, 2, 3, 5]
    assert data.log_artist.tolist() == [0, 1, 1, 2, 0]
    assert data.log_user.tolist() == [0, 0, 0, 1, 1]
    assert data.log_session.tolist() == [0, 0, 1, 2, 2]
    assert data.user_sessions.tolist() == [0, 2, 3]


def test_session_and_log_index_bounds():
    data = EncodedDataset.from_dataset(make_dataset(HAND_SPEC))
    assert data.session_index(0, 1) == 1
    assert data.log_index(1, 0, 1) == 4
    with pytest.raises(IndexError):
        data.session_index(0, 2)
    with pytest.raises(IndexError):
        data.log_index(0, 1, 1)


def test_from_arrays_validates_layout():
    users, artists = ("u0",), ("a0",)
    good = dict(
        users=users,
        artists=artists,
        session_user=np.array([0]),
        session_start=np.array([0, 1]),
        log_artist=np.array([0]),
        fingerprint="f",
    )
    EncodedDataset.from_arrays(**good)
    with pytest.raises(ValueError):
        EncodedDataset.from_arrays(**{**good, "session_start": np.array([1, 1])})
    with pytest.raises(ValueError):
        EncodedDataset.from_arrays(**{**good, "session_start": np.array([0, 2])})
    bad_order = dict(
        users=("u0", "u1"),
        artists=artists,
        session_user=np.array([1, 0]),
        session_start=np.array([0, 1, 2]),
        log_artist=np.array([0, 0]),
        fingerprint="f",
    )
    with pytest.raises(ValueError):
        EncodedDataset.from_arrays(**bad_order)


# -- count tables ---------------------------------------------------------


def test_recount_matches_hand_computation():
    data = EncodedDataset.from_dataset(make_dataset(HAND_SPEC))
    z = np.array([1, 0, 1], dtype=np.int32)
    x = np.array([0, 1, 0, 0, 1], dtype=np.int8)
    counts = CountTables.recount(data, z, x, topics=2)
    assert counts.r_uk.tolist() == [[1, 1], [0, 1]]
    assert counts.r_u.tolist() == [2, 1]
    assert counts.n_u.tolist() == [3, 2]
    assert counts.n_u0.tolist() == [2, 1]
    assert counts.n_u1.tolist() == [1, 1]
    assert counts.n_u1a.tolist() == [[0, 1, 0], [1, 0, 0]]
    assert counts.n_ka.tolist() == [[0, 1, 0], [1, 0, 1]]
    assert counts.n_k.tolist() == [1, 2]
    counts.validate()


def test_counts_equals_and_copy():
    state = _hand_state()
    other = state.counts.copy()
    assert state.counts.equals(other)
    other.n_ka[0, 0] += 1
    assert not state.counts.equals(other)


def test_counts_validate_catches_corruption():
    state = _hand_state()
    counts = state.counts.copy()
    counts.n_k[0] += 1
    with pytest.raises(ValueError):
        counts.validate()


# -- initialization -------------------------------------------------------


def test_init_is_deterministic():
    a = _hand_state(seed=9)
    b = _hand_state(seed=9)
    assert np.array_equal(a.z, b.z) and np.array_equal(a.x, b.x)
    c = _hand_state(seed=10)
    assert not (np.array_equal(a.z, c.z) and np.array_equal(a.x, c.x))


def test_init_session_variant_clamps_switches():
    state = _medium_state(variant="session")
    assert not state.x.any()


def test_init_counts_consistent():
    state = _medium_state()
    assert state.counts_match_assignments()
    assert np.all(state.z >= 0) and np.all(state.z < state.hp.topics)


def test_init_variants_share_topic_draws():
    dataset = make_dataset(HAND_SPEC)
    swa = init_assignments(dataset, Hyperparameters.with_defaults(3, 3, "swa"), seed=4)
    ses = init_assignments(dataset, Hyperparameters.with_defaults(3, 3, "session"), seed=4)
    assert np.array_equal(swa.z, ses.z)


def test_init_rejects_empty_dataset():
    with pytest.raises(ValueError):
        init_assignments(
            EncodedDataset.from_arrays(
                users=(),
                artists=(),
                session_user=np.array([], dtype=np.int32),
                session_start=np.array([0]),
                log_artist=np.array([], dtype=np.int32),
                fingerprint="f",
            ),
            Hyperparameters.with_defaults(2, 1),
            seed=0,
        )


# -- incremental counts ---------------------------------------------------


def test_session_remove_add_restores_counts_exactly():
    state = _medium_state()
    before = state.counts.copy()
    for s in range(0, state.data.num_sessions, 7):
        u, k, uniq, cnt, topical = state._remove_session_counts(s)
        assert not state.counts.equals(before)
        state._add_session_counts(s, u, k, uniq, cnt, topical)
        assert state.counts.equals(before)


def test_log_remove_add_restores_counts_exactly():
    state = _medium_state()
    before = state.counts.copy()
    for i in range(0, state.data.num_logs, 11):
        u, a, k, flag = state._remove_log_counts(i)
        state._add_log_counts(i, u, a, k, flag)
    assert state.counts.equals(before)


# -- conditionals and sampling -------------------------------------------


def test_conditionals_are_distributions():
    state = _medium_state()
    probs = conditional_topic_probs(state, 2, 1)
    assert probs.shape == (state.hp.topics,)
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(probs >= 0)
    p0, p1 = conditional_switch_probs(state, 2, 1, 0)
    assert p0 + p1 == pytest.approx(1.0, abs=1e-12)


def test_conditional_queries_leave_state_unchanged():
    state = _medium_state()
    before = state.counts.copy()
    z_before = state.z.copy()
    conditional_topic_probs(state, 0, 0)
    conditional_switch_probs(state, 0, 0, 0)
    assert state.counts.equals(before)
    assert np.array_equal(state.z, z_before)


def test_switch_probs_refused_for_session_variant():
    state = _medium_state(variant="session")
    with pytest.raises(RuntimeError):
        conditional_switch_probs(state, 0, 0, 0)
    with pytest.raises(RuntimeError):
        sample_x(state, 0, 0, 0)


def test_sample_topic_frequencies_match_conditional():
    state = _hand_state(topics=3, seed=2)
    z0 = state.z.copy()
    x0 = state.x.copy()
    expected = conditional_topic_probs(state, 0, 0)
    n = 3000
    draws = np.zeros(3, dtype=int)
    for _ in range(n):
        draws[sample_topic(state, 0, 0)] += 1
        state.z[:] = z0
        state.x[:] = x0
        state.rebuild_counts()
    for k in range(3):
        se = math.sqrt(expected[k] * (1 - expected[k]) / n)
        assert abs(draws[k] / n - expected[k]) < 4 * se + 1e-9


def test_sample_x_frequencies_match_conditional():
    state = _hand_state(seed=5)
    z0 = state.z.copy()
    x0 = state.x.copy()
    _, p1 = conditional_switch_probs(state, 0, 0, 1)
    n = 2000
    ones = 0
    for _ in range(n):
        ones += sample_x(state, 0, 0, 1)
        state.z[:] = z0
        state.x[:] = x0
        state.rebuild_counts()
    se = math.sqrt(p1 * (1 - p1) / n)
    assert abs(ones / n - p1) < 4 * se + 1e-9


def test_clamped_swa_topic_conditionals_equal_session_variant():
    # With every switch at 0 the topic conditional must not feel the variant.
    dataset = make_dataset(HAND_SPEC)
    swa = init_assignments(dataset, Hyperparameters(2, 0.5, 0.4, 0.3, 0.5, "swa"), seed=1)
    ses = init_assignments(dataset, Hyperparameters(2, 0.5, 0.4, 0.3, 0.5, "session"), seed=1)
    swa.x[:] = 0
    swa.rebuild_counts()
    ses.z[:] = swa.z
    ses.rebuild_counts()
    for user, r in ((0, 0), (0, 1), (1, 0)):
        got = conditional_topic_probs(swa, user, r)
        want = conditional_topic_probs(ses, user, r)
        assert got == pytest.approx(want, abs=1e-12)


# -- sweeps ---------------------------------------------------------------


def test_sweep_keeps_counts_consistent():
    state = _medium_state()
    for _ in range(3):
        stats = gibbs_sweep(state)
        assert math.isfinite(stats.joint_log_prob)
    assert state.counts_match_assignments()
    state.counts.validate()


def test_sweep_session_variant_never_touches_switches():
    state = _medium_state(variant="session")
    for _ in range(3):
        gibbs_sweep(state)
    assert not state.x.any()
    assert state.counts_match_assignments()


def test_sweeps_are_reproducible():
    a = _medium_state(seed=13)
    b = _medium_state(seed=13)
    run_sweeps(a, 4)
    run_sweeps(b, 4)
    assert np.array_equal(a.z, b.z) and np.array_equal(a.x, b.x)


def test_joint_improves_from_random_init():
    truth = random_ground_truth(40, 30, 4, seed=5, sessions_per_user=10)
    dataset, _, _ = generate_dataset(truth, seed=6)
    hp = Hyperparameters.with_defaults(4, len(dataset.artists))
    state = init_assignments(dataset, hp, seed=0)
    start = joint_log_prob(state)
    trace = run_sweeps(state, 10)
    assert trace[-1].joint_log_prob > start + 10


def test_run_sweeps_burn_in_labels():
    state = _hand_state()
    trace = run_sweeps(state, 5, burn_in_until=3)
    assert [s.phase for s in trace] == ["burn-in"] * 3 + ["sampling"] * 2
    assert [s.sweep for s in trace] == [1, 2, 3, 4, 5]


def test_train_validates_schedule():
    dataset = make_dataset(HAND_SPEC)
    hp = Hyperparameters.with_defaults(2, 3)
    with pytest.raises(ValueError):
        train(dataset, hp, sweeps=5, burn_in=5)
    with pytest.raises(ValueError):
        train(dataset, hp, sweeps=5, burn_in=-1)


def test_train_returns_normalized_estimates():
    dataset = make_dataset(HAND_SPEC)
    hp = Hyperparameters.with_defaults(2, 3)
    result = train(dataset, hp, sweeps=6, burn_in=2, seed=1)
    assert len(result.trace) == 6
    est = result.estimates
    assert est.theta.sum(axis=1) == pytest.approx(np.ones(2), abs=1e-12)
    assert est.phi.sum(axis=1) == pytest.approx(np.ones(2), abs=1e-12)
    assert (est.lambda0 + est.lambda1) == pytest.approx(np.ones(2), abs=1e-12)


# -- joint log probability ------------------------------------------------


def test_joint_decomposes_over_single_site_moves():
    # The conditional computed from sampling weights must match the ratio of
    # joints, which ties the incremental path to the global formula.
    state = _medium_state(topics=3)
    probs = conditional_topic_probs(state, 4, 2)
    s = state.data.session_index(4, 2)
    joints = np.empty(3)
    keep = state.z[s]
    for k in range(3):
        state.z[s] = k
        state.rebuild_counts()
        joints[k] = joint_log_prob(state)
    state.z[s] = keep
    state.rebuild_counts()
    from_joint = np.exp(joints - joints.max())
    from_joint /= from_joint.sum()
    assert probs == pytest.approx(from_joint, abs=1e-10)


def test_joint_switch_moves_match_switch_conditional():
    state = _medium_state()
    i = 17
    u, a, k, flag = state._remove_log_counts(i)
    state._add_log_counts(i, u, a, k, flag)
    user = int(state.data.log_user[i])
    s = int(state.data.log_session[i])
    session = s - int(state.data.user_sessions[user])
    position = i - int(state.data.session_start[s])
    p0, p1 = conditional_switch_probs(state, user, session, position)
    joints = np.empty(2)
    for value in (0, 1):
        state.x[i] = value
        state.rebuild_counts()
        joints[value] = joint_log_prob(state)
    state.x[i] = flag
    state.rebuild_counts()
    w = np.exp(joints - joints.max())
    w /= w.sum()
    assert (p0, p1) == pytest.approx((w[0], w[1]), abs=1e-10)


# -- checkpointing --------------------------------------------------------


def test_checkpoint_round_trip(tmp_path):
    state = _medium_state()
    run_sweeps(state, 3)
    path = tmp_path / "chain.npz"
    save_checkpoint(state, path)
    loaded = load_checkpoint(path)
    assert loaded.hp == state.hp
    assert loaded.seed == state.seed
    assert loaded.sweeps_done == 3
    assert np.array_equal(loaded.z, state.z)
    assert np.array_equal(loaded.x, state.x)
    assert loaded.counts.equals(state.counts)
    assert loaded.data.users == state.data.users
    assert loaded.data.fingerprint == state.data.fingerprint
    assert loaded.rng.bit_generator.state == state.rng.bit_generator.state


def test_checkpoint_resume_equals_uninterrupted_run(tmp_path):
    straight = _medium_state(seed=21)
    run_sweeps(straight, 6)
    resumed = _medium_state(seed=21)
    run_sweeps(resumed, 3)
    path = tmp_path / "half.npz"
    save_checkpoint(resumed, path)
    restored = load_checkpoint(path)
    run_sweeps(restored, 3)
    assert restored.sweeps_done == 6
    assert np.array_equal(restored.z, straight.z)
    assert np.array_equal(restored.x, straight.x)
    assert joint_log_prob(restored) == pytest.approx(joint_log_prob(straight), abs=1e-9)


def test_checkpoint_bytes_are_deterministic(tmp_path):
    state = _medium_state(seed=2)
    run_sweeps(state, 2)
    save_checkpoint(state, tmp_path / "one.npz")
    save_checkpoint(state, tmp_path / "two.npz")
    assert (tmp_path / "one.npz").read_bytes() == (tmp_path / "two.npz").read_bytes()


def test_checkpoint_rejects_foreign_files(tmp_path):
    path = tmp_path / "alien.npz"
    meta = json.dumps({"format": "something-else", "version": 1}).encode()
    np.savez(path, meta=np.frombuffer(meta, dtype=np.uint8))
    with pytest.raises(ValueError):
        load_checkpoint(path)


def test_checkpoint_rejects_future_version(tmp_path):
    state = _hand_state()
    path = tmp_path / "chain.npz"
    save_checkpoint(state, path)
    with np.load(path) as archive:
        meta = json.loads(bytes(archive["meta"]).decode())
    meta["version"] = 999
    bad = tmp_path / "future.npz"
    np.savez(bad, meta=np.frombuffer(json.dumps(meta).encode(), dtype=np.uint8))
    with pytest.raises(ValueError):
        load_checkpoint(bad)


# -- randomized cross-checks ---------------------------------------------


def test_fuzzed_single_site_ops_keep_counts_synchronized():
    state = _medium_state(seed=8)
    rng = random.Random(8)
    spans = state.data.user_sessions
    for op in range(400):
        user = rng.randrange(state.data.num_users)
        n_sessions = int(spans[user + 1] - spans[user])
        session = rng.randrange(n_sessions)
        if rng.random() < 0.5:
            sample_topic(state, user, session)
        else:
            s = state.data.session_index(user, session)
            size = int(state.data.session_start[s + 1] - state.data.session_start[s])
            sample_x(state, user, session, rng.randrange(size))
        if op % 100 == 99:
            assert state.counts_match_assignments()
    assert state.counts_match_assignments()
