"""Replay buffer semantics and learner update properties."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smartchoices.config import LearnerConfig
from smartchoices.learners import DdqnLearner, ReplayBuffer, Td3Learner


def _push_scalar(buf, j, terminal=False):
    buf.push(np.array([float(j)]), np.zeros(0, dtype=np.int64),
             np.array([0.0]), float(j), np.array([float(j + 1)]),
             np.zeros(0, dtype=np.int64), terminal)


def test_replay_fifo_eviction():
    buf = ReplayBuffer(4, 1, 0, 1, categorical=False)
    for j in range(6):
        _push_scalar(buf, j)
    assert len(buf) == 4
    # elements 0 and 1 were overwritten; oldest survivor is 2
    assert buf.oldest() == 2.0


def test_replay_not_ready_returns_none():
    buf = ReplayBuffer(10, 1, 0, 1, categorical=False)
    rng = np.random.default_rng(0)
    assert buf.sample(3, rng) is None
    for j in range(3):
        _push_scalar(buf, j)
    assert buf.sample(3, rng) is not None
    assert buf.sample(4, rng) is None


def test_replay_sampling_is_roughly_uniform():
    buf = ReplayBuffer(8, 1, 0, 1, categorical=False)
    for j in range(8):
        _push_scalar(buf, j)
    rng = np.random.default_rng(1)
    counts = np.zeros(8)
    draws = 8000
    for _ in range(draws // 8):
        batch = buf.sample(8, rng)
        for r in batch["r"]:
            counts[int(r)] += 1
    expected = draws / 8
    chi2 = float(np.sum((counts - expected) ** 2 / expected))
    assert chi2 < 24.3  # chi-square 99.9% quantile, 7 dof


@given(st.lists(st.integers(0, 30), min_size=1, max_size=60))
@settings(max_examples=30, deadline=None)
def test_replay_push_many_matches_repeated_push(rewards):
    a = ReplayBuffer(7, 1, 1, 1, categorical=True)
    b = ReplayBuffer(7, 1, 1, 1, categorical=True)
    n = len(rewards)
    sf = np.array(rewards, dtype=np.float64)[:, None]
    sk = np.arange(n, dtype=np.int64)[:, None]
    act = np.array(rewards, dtype=np.int64)
    r = np.asarray(rewards, dtype=np.float64)
    nf = sf + 1
    nk = sk + 1
    term = np.zeros(n, dtype=bool)
    term[-1] = True
    for j in range(n):
        a.push(sf[j], sk[j], act[j], r[j], nf[j], nk[j], term[j])
    b.push_many(sf, sk, act, r, nf, nk, term)
    assert len(a) == len(b)
    for name in ("_sf", "_sk", "_a", "_r", "_nf", "_nk", "_term"):
        got_a, got_b = getattr(a, name), getattr(b, name)
        # push skips next-state on terminals; mask those slots out
        if name in ("_nf", "_nk"):
            mask = ~a._term
            np.testing.assert_array_equal(got_a[mask], got_b[mask])
        else:
            np.testing.assert_array_equal(got_a, got_b)


def _fill_bandit(learner, rng, n, reward_fn):
    for _ in range(n):
        if isinstance(learner, DdqnLearner):
            a = int(rng.integers(learner.n_actions))
        else:
            a = rng.uniform(-1, 1, size=learner.action_dim)
        learner.push_transition(np.array([0.5]), np.zeros(0, dtype=np.int64),
                                a, reward_fn(a), np.array([0.5]),
                                np.zeros(0, dtype=np.int64), True)


def test_ddqn_contextual_bandit_learns_q_values():
    cfg = LearnerConfig(algorithm="DDQN", discount=0.0, batch_size=64,
                        lr_critic=1e-2, q_hidden=(16,), tau=0.01)
    rng = np.random.default_rng(0)
    learner = DdqnLearner(1, 0, 0, 2, cfg, rng)
    _fill_bandit(learner, rng, 500, lambda a: 1.0 if a == 1 else 0.0)
    for _ in range(400):
        assert learner.train_step()
    learner.publish()
    q = learner.q_values(np.array([[0.5]]))[0]
    assert np.argmax(q) == 1
    assert q[1] == pytest.approx(1.0, abs=0.2)
    assert q[0] == pytest.approx(0.0, abs=0.2)


def test_ddqn_zero_discount_targets_are_rewards():
    cfg = LearnerConfig(algorithm="DDQN", discount=0.0, batch_size=4,
                        q_hidden=(4,))
    learner = DdqnLearner(1, 0, 0, 2, cfg, np.random.default_rng(1))
    batch = {
        "sf": np.zeros((4, 1)), "sk": np.zeros((4, 0), dtype=np.int64),
        "a": np.array([0, 1, 0, 1]), "r": np.array([1.0, -1.0, 0.5, 2.0]),
        "nf": np.full((4, 1), 9.0), "nk": np.zeros((4, 0), dtype=np.int64),
        "term": np.zeros(4, dtype=bool),
    }
    # next states are garbage; discount 0 must not look at them
    loss, _ = learner._update(batch)
    assert np.isfinite(loss)


def test_ddqn_terminal_masks_bootstrap():
    cfg = LearnerConfig(algorithm="DDQN", discount=0.9, batch_size=2,
                        q_hidden=(4,))
    learner = DdqnLearner(1, 0, 0, 2, cfg, np.random.default_rng(2))
    nf = np.array([[0.3], [0.3]])
    qn_online = learner.q.forward(nf)
    qn_target = learner.q_target.forward(nf)
    best = np.argmax(qn_online, axis=1)
    boot = qn_target[np.arange(2), best]
    r = np.array([1.0, 1.0])
    term = np.array([True, False])
    y = r + 0.9 * np.where(term, 0.0, boot)
    assert y[0] == pytest.approx(1.0)
    assert y[1] == pytest.approx(1.0 + 0.9 * boot[1])


def test_td3_actions_stay_in_range():
    cfg = LearnerConfig(algorithm="TD3", action_noise=0.5)
    learner = Td3Learner(2, 0, 0, 1, cfg, np.random.default_rng(3))
    floats = np.random.default_rng(4).normal(size=(50, 2))
    a = learner.act_batch(floats)
    assert np.all(a >= -1.0) and np.all(a <= 1.0)


def test_td3_learns_quadratic_bandit_peak():
    cfg = LearnerConfig(algorithm="TD3", discount=0.0, batch_size=64,
                        lr_actor=1e-2, lr_critic=1e-2, action_noise=0.1,
                        critic_hidden=(16,), actor_hidden=(16,), tau=0.01)
    rng = np.random.default_rng(5)
    learner = Td3Learner(1, 0, 0, 1, cfg, rng)
    _fill_bandit(learner, rng, 1000, lambda a: -(float(a[0]) - 0.5) ** 2)
    for _ in range(1500):
        assert learner.train_step()
    learner.publish()
    a = learner.act(np.array([[0.5]]), explore=False)
    assert abs(float(a[0]) - 0.5) < 0.15


def test_td3_min_twin_target_bounds_single_critics():
    cfg = LearnerConfig(algorithm="TD3", discount=0.9, target_noise=0.0)
    learner = Td3Learner(1, 0, 0, 1, cfg, np.random.default_rng(6))
    nf = np.random.default_rng(7).normal(size=(8, 1))
    an = learner.actor_target.forward(nf)
    xin = np.concatenate([nf, an], axis=1)
    q1 = learner.critic1_target.forward(xin)[:, 0]
    q2 = learner.critic2_target.forward(xin)[:, 0]
    boot = np.minimum(q1, q2)
    assert np.all(boot <= q1) and np.all(boot <= q2)


def test_snapshot_is_immutable_and_stable_until_publish():
    cfg = LearnerConfig(algorithm="DDQN", discount=0.0, batch_size=8,
                        q_hidden=(4,))
    rng = np.random.default_rng(8)
    learner = DdqnLearner(1, 0, 0, 2, cfg, rng)
    snap = learner.current_snapshot()
    with pytest.raises(ValueError):
        snap["q/l0/w"][0, 0] = 99.0
    x = np.array([[0.1]])
    before = learner.q_values(x).copy()
    _fill_bandit(learner, rng, 50, lambda a: float(a))
    for _ in range(20):
        learner.train_step()
    # acting still reads the old snapshot
    np.testing.assert_array_equal(learner.q_values(x), before)
    learner.publish()
    assert not np.array_equal(learner.q_values(x), before)


def test_async_training_thread_runs_and_stops():
    cfg = LearnerConfig(algorithm="DDQN", discount=0.0, batch_size=8,
                        q_hidden=(4,), synchronous=False)
    rng = np.random.default_rng(9)
    learner = DdqnLearner(1, 0, 0, 2, cfg, rng)
    _fill_bandit(learner, rng, 64, lambda a: float(a))
    learner.start_async(publish_every=5)
    with pytest.raises(RuntimeError):
        learner.start_async()
    import time
    deadline = time.time() + 5.0
    while learner.updates < 10 and time.time() < deadline:
        time.sleep(0.01)
    learner.stop_async()
    assert learner.updates >= 10
    assert learner.current_snapshot() is not None
