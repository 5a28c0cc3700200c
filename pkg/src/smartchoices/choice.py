"""The SmartChoice object: a typed decision point with a 3-call API.

Observe feeds named context values, Predict returns an action (from the
initial function or the learned policy, chosen per episode by the policy
selector), Feedback accumulates reward onto the prediction that earned it.
end_episode() closes the transition log, hands it to the learner's replay
buffer, and reports the episode return to the selector.
"""

from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from .config import LearnerConfig
from .errors import DefinitionError, ObservationError
from .learners import DdqnLearner, Td3Learner
from .selection import INITIAL, LEARNED, PolicySelector

State = namedtuple("State", ["floats", "keys"])


@dataclass(frozen=True)
class OutputDef:
    kind: str  # "continuous" | "categorical"
    shape: int = 1
    range: tuple = None  # (lo, hi) for continuous
    cardinality: int = None  # for categorical

    def __post_init__(self):
        if self.kind not in ("continuous", "categorical"):
            raise DefinitionError(f"unknown output kind {self.kind!r}")
        if self.shape < 1:
            raise DefinitionError("shape must be a positive count")
        if self.kind == "continuous":
            if self.range is None or len(self.range) != 2:
                raise DefinitionError("continuous output needs range=(lo, hi)")
            lo, hi = self.range
            if not lo < hi:
                raise DefinitionError(f"invalid range: lo={lo} >= hi={hi}")
        else:
            if self.cardinality is None or self.cardinality < 2:
                raise DefinitionError("categorical output needs cardinality >= 2")


@dataclass(frozen=True)
class ObservationDef:
    name: str
    kind: str  # "float" | "vector" | "key"
    shape: int = 1
    range: tuple = None  # (lo, hi) for float/vector
    key_space: int = None  # number of distinct key ids for "key"

    def __post_init__(self):
        if self.kind not in ("float", "vector", "key"):
            raise DefinitionError(f"unknown observation kind {self.kind!r}")
        if self.shape < 1:
            raise DefinitionError("shape must be a positive count")
        if self.kind in ("float", "vector"):
            if self.range is None or len(self.range) != 2:
                raise DefinitionError(f"observation {self.name!r} needs range")
            lo, hi = self.range
            if not lo < hi:
                raise DefinitionError(f"invalid range for {self.name!r}")
        else:
            if self.key_space is None or self.key_space < 1:
                raise DefinitionError(f"key observation {self.name!r} needs key_space")


class _Transition:
    __slots__ = ("sf", "sk", "action", "reward", "nf", "nk", "terminal", "tag")

    def __init__(self, sf, sk, action, tag):
        self.sf = sf
        self.sk = sk
        self.action = action
        self.reward = 0.0
        self.nf = None
        self.nk = None
        self.terminal = False
        self.tag = tag


@dataclass
class ChoiceStats:
    predicts: int = 0
    episodes: int = 0
    clamped: int = 0
    missing: int = 0
    dropped_feedback: int = 0
    feedback_total: float = 0.0


def _build_learner(output_def, n_floats, n_keys, key_space, config, rng):
    algo = config.algorithm
    if algo == "auto":
        algo = "TD3" if output_def.kind == "continuous" else "DDQN"
    if algo == "TD3":
        if output_def.kind != "continuous":
            raise DefinitionError("TD3 requires a continuous output")
        return Td3Learner(n_floats, n_keys, key_space, output_def.shape,
                          config, rng)
    if algo == "DDQN":
        if output_def.kind != "categorical":
            raise DefinitionError("DDQN requires a categorical output")
        return DdqnLearner(n_floats, n_keys, key_space, output_def.cardinality,
                           config, rng)
    raise DefinitionError(f"unknown algorithm {algo!r}")


class SmartChoice:
    def __init__(self, output_def, observation_defs, initial_function=None,
                 config=None, seed=0, learner=None, selector=None):
        self.output_def = output_def
        defs = (list(observation_defs.values())
                if isinstance(observation_defs, dict)
                else list(observation_defs))
        names = [d.name for d in defs]
        if len(set(names)) != len(names):
            raise DefinitionError("observation names must be unique")
        self.observation_defs = defs
        self._by_name = {d.name: d for d in defs}
        self._float_defs = [d for d in defs if d.kind in ("float", "vector")]
        self._key_defs = [d for d in defs if d.kind == "key"]
        self.n_floats = sum(d.shape for d in self._float_defs)
        self.n_keys = len(self._key_defs)
        self.key_space = max((d.key_space for d in self._key_defs), default=0)
        self.initial_function = initial_function
        self.config = (config or LearnerConfig()).validate()
        self.rng = np.random.default_rng(seed)
        self.learner = learner or _build_learner(
            output_def, self.n_floats, self.n_keys, self.key_space,
            self.config, np.random.default_rng(self.rng.integers(2**63)))
        self.selector = selector or PolicySelector(
            has_initial=initial_function is not None,
            ema_decay=self.config.ema_decay,
            p_step_up=self.config.p_step_up,
            p_floor=self.config.p_floor,
            margin_frac=self.config.margin_frac,
            decay_enabled=self.config.initial_function_decay,
            decay_episodes=self.config.decay_episodes)
        self.explore = True
        self.stats = ChoiceStats()
        self._pending = {}
        self._open = None
        self._episode = []
        self._episode_tag = None
        self._train_debt = 0
        if self.output_def.kind == "continuous":
            lo, hi = self.output_def.range
            self._out_lo = float(lo)
            self._out_span = float(hi - lo)

    # -- the 3-call API ------------------------------------------------------

    def observe(self, name, value=None):
        """Record one named observation; a dict observes many at once."""
        if isinstance(name, dict):
            self.observe_many(name)
            return
        if name not in self._by_name:
            raise ObservationError(f"undeclared observation {name!r}")
        self._pending[name] = value

    def observe_many(self, mapping):
        for name, value in mapping.items():
            if name not in self._by_name:
                raise ObservationError(f"undeclared observation {name!r}")
            self._pending[name] = value

    def predict(self):
        floats, keys = self.assemble_state()
        self._pending.clear()
        if self._open is not None:
            self._close_open(floats, keys, terminal=False)
        if self._episode_tag is None:
            self._episode_tag = self.selector.select_policy(self.rng)
        if self._episode_tag == INITIAL:
            out = self.initial_function(State(floats, keys))
            action = self._to_internal(out)
        else:
            action = self.learner.act(
                floats[None], keys[None] if self.n_keys else None,
                explore=self.explore)
            out = self._to_output(action)
        self._open = _Transition(floats, keys, action, self._episode_tag)
        self.stats.predicts += 1
        return out

    def feedback(self, reward):
        if self._open is None:
            self.stats.dropped_feedback += 1
            return
        self._open.reward += float(reward)
        self.stats.feedback_total += float(reward)

    def end_episode(self):
        if self._open is not None:
            self._close_open(None, None, terminal=True)
        if not self._episode:
            self._episode_tag = None
            return
        zf = np.zeros(self.n_floats)
        zk = np.zeros(self.n_keys, dtype=np.int64)
        ret = 0.0
        for t in self._episode:
            ret += t.reward
            self.learner.push_transition(
                t.sf, t.sk, t.action, t.reward,
                t.nf if t.nf is not None else zf,
                t.nk if t.nk is not None else zk, t.terminal)
        self.selector.report_return(self._episode_tag, ret)
        self._maybe_train(len(self._episode))
        self._episode = []
        self._episode_tag = None
        self.stats.episodes += 1

    # -- episode fast path ---------------------------------------------------

    def begin_episode(self):
        """Pick (and pin) this episode's policy; used by batched episode
        runners that compute actions outside predict()."""
        if self._episode_tag is None:
            self._episode_tag = self.selector.select_policy(self.rng)
        return self._episode_tag

    def record_episode(self, floats, keys, actions, rewards):
        """Bulk-record a whole episode of transitions.

        Semantically equivalent to the per-step API when every step is
        observe/predict/feedback in order: next_state is the following
        row and the last transition is terminal.
        """
        if self._open is not None or self._episode:
            raise RuntimeError("record_episode with per-step transitions open")
        tag = self.begin_episode()
        n = len(rewards)
        if n == 0:
            self._episode_tag = None
            return
        nf = np.zeros_like(floats)
        nf[:-1] = floats[1:]
        if keys is None:
            keys = np.zeros((n, 0), dtype=np.int64)
        nk = np.zeros_like(keys)
        nk[:-1] = keys[1:]
        terminal = np.zeros(n, dtype=bool)
        terminal[-1] = True
        self.learner.push_episode(floats, keys, actions, rewards, nf, nk,
                                  terminal)
        self.selector.report_return(tag, float(np.sum(rewards)))
        self.stats.predicts += n
        self.stats.feedback_total += float(np.sum(rewards))
        self._maybe_train(n)
        self._episode_tag = None
        self.stats.episodes += 1

    # -- internals -------------------------------------------------------------

    def assemble_state(self):
        """Normalized float vector + key-id vector from pending observations.

        Scalars map through (v - lo) / (hi - lo), clamped to [0, 1];
        missing observations become the midpoint 0.5 (or key id 0).
        """
        floats = np.empty(self.n_floats)
        pos = 0
        pending = self._pending
        for d in self._float_defs:
            v = pending.get(d.name)
            if v is None:
                floats[pos:pos + d.shape] = 0.5
                self.stats.missing += 1
            else:
                lo, hi = d.range
                if d.shape == 1:
                    x = (float(v) - lo) / (hi - lo)
                    if x < 0.0 or x > 1.0:
                        self.stats.clamped += 1
                        x = min(max(x, 0.0), 1.0)
                    floats[pos] = x
                else:
                    x = (np.asarray(v, dtype=np.float64) - lo) / (hi - lo)
                    n_out = int(np.sum((x < 0.0) | (x > 1.0)))
                    if n_out:
                        self.stats.clamped += n_out
                        np.clip(x, 0.0, 1.0, out=x)
                    floats[pos:pos + d.shape] = x
            pos += d.shape
        keys = np.empty(self.n_keys, dtype=np.int64)
        for j, d in enumerate(self._key_defs):
            v = pending.get(d.name)
            if v is None:
                keys[j] = 0
                self.stats.missing += 1
            else:
                keys[j] = int(v)
        return floats, keys

    def _close_open(self, nf, nk, terminal):
        t = self._open
        t.nf = nf
        t.nk = nk
        t.terminal = terminal
        self._episode.append(t)
        self._open = None

    def _maybe_train(self, n_transitions):
        if not self.config.synchronous:
            return
        self._train_debt += n_transitions
        steps = self._train_debt // self.config.train_every
        self._train_debt -= steps * self.config.train_every
        trained = False
        for _ in range(steps * self.config.train_repeat):
            trained = self.learner.train_step() or trained
        if trained:
            self.learner.publish()

    def _to_internal(self, out):
        if self.output_def.kind == "categorical":
            return int(out)
        a = 2.0 * (np.atleast_1d(np.asarray(out, dtype=np.float64))
                   - self._out_lo) / self._out_span - 1.0
        return np.clip(a, -1.0, 1.0)

    def _to_output(self, action):
        if self.output_def.kind == "categorical":
            return int(action)
        out = self._out_lo + (np.asarray(action) + 1.0) * 0.5 * self._out_span
        return float(out[0]) if self.output_def.shape == 1 else out

    @property
    def episode_transitions(self):
        return len(self._episode) + (1 if self._open is not None else 0)
