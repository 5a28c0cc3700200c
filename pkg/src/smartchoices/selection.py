"""Balances the developer-provided initial function against the learned
policy, per episode.

The learned-policy probability starts at 0 when an initial function exists.
Episode returns feed per-policy exponential moving averages; whenever the
learned EMA is within a margin of the initial EMA the probability rises
additively, otherwise it is cut in half (never below a floor once it has
risen at all). An optional decay schedule forces the learned policy in on
a fixed timetable regardless of the comparison.
"""

from collections import deque

INITIAL = "initial"
LEARNED = "learned"


class PolicySelector:
    def __init__(self, has_initial, ema_decay=0.95, p_step_up=0.05,
                 p_floor=0.05, margin_frac=0.05, decay_enabled=False,
                 decay_episodes=1000, history_size=100000):
        self.has_initial = has_initial
        self.p_learned = 0.0 if has_initial else 1.0
        self.ema_decay = ema_decay
        self.p_step_up = p_step_up
        self.p_floor = p_floor
        self.margin_frac = margin_frac
        self.decay_enabled = decay_enabled
        self.decay_episodes = decay_episodes
        self.ema_initial = None
        self.ema_learned = None
        self.episodes_reported = 0
        self.history = deque(maxlen=history_size)
        self._ever_raised = not has_initial

    def select_policy(self, rng):
        """Pick the policy for a whole episode."""
        if not self.has_initial:
            tag = LEARNED
        elif self.p_learned >= 1.0:
            tag = LEARNED
        elif self.p_learned <= 0.0:
            tag = INITIAL
        else:
            tag = LEARNED if rng.random() < self.p_learned else INITIAL
        self.history.append(tag)
        return tag

    def report_return(self, policy_tag, episode_return):
        if policy_tag == INITIAL:
            self.ema_initial = self._ema(self.ema_initial, episode_return)
        else:
            self.ema_learned = self._ema(self.ema_learned, episode_return)
        self.episodes_reported += 1
        if not self.has_initial:
            return
        if self._learned_acceptable():
            self.p_learned = min(1.0, self.p_learned + self.p_step_up)
            if self.p_learned > 0.0:
                self._ever_raised = True
        else:
            floor = self.p_floor if self._ever_raised else 0.0
            self.p_learned = max(floor, self.p_learned * 0.5)
        if self.decay_enabled:
            forced = 1.0 - self._initial_usage_schedule(self.episodes_reported)
            if forced > self.p_learned:
                self.p_learned = forced
                self._ever_raised = True

    def usage_rate(self, window):
        """Fraction of the last `window` episodes that used the initial
        function; 0 on an empty history."""
        if window < 1:
            raise ValueError("window must be >= 1")
        if not self.history:
            return 0.0
        recent = list(self.history)[-window:]
        return sum(1 for t in recent if t == INITIAL) / len(recent)

    def margin(self):
        base = abs(self.ema_initial) if self.ema_initial is not None else 0.0
        return self.margin_frac * base + 1e-6

    def _learned_acceptable(self):
        # missing EMAs count as success: optimistic until evidence exists
        if self.ema_learned is None or self.ema_initial is None:
            return True
        return self.ema_learned >= self.ema_initial - self.margin()

    def _ema(self, prev, value):
        if prev is None:
            return float(value)
        return self.ema_decay * prev + (1.0 - self.ema_decay) * float(value)

    def _initial_usage_schedule(self, episode):
        if self.decay_episodes <= 0:
            return 0.0
        return max(0.0, 1.0 - episode / self.decay_episodes)
