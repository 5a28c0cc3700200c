"""Policy selector: additive rise, multiplicative cut, floor, decay."""

import numpy as np
import pytest

from smartchoices.selection import INITIAL, LEARNED, PolicySelector


def test_starts_at_zero_with_initial_and_one_without():
    assert PolicySelector(has_initial=True).p_learned == 0.0
    assert PolicySelector(has_initial=False).p_learned == 1.0


def test_no_initial_always_learned():
    sel = PolicySelector(has_initial=False)
    rng = np.random.default_rng(0)
    assert all(sel.select_policy(rng) == LEARNED for _ in range(10))
    sel.report_return(LEARNED, -100.0)
    assert sel.p_learned == 1.0


def test_select_is_deterministic_at_probability_extremes():
    sel = PolicySelector(has_initial=True)
    rng = np.random.default_rng(0)
    assert all(sel.select_policy(rng) == INITIAL for _ in range(20))
    sel.p_learned = 1.0
    assert all(sel.select_policy(rng) == LEARNED for _ in range(20))


def test_missing_learned_ema_is_optimistic():
    sel = PolicySelector(has_initial=True)
    # only initial returns reported so far: probability still rises
    sel.report_return(INITIAL, 1.0)
    assert sel.p_learned == pytest.approx(0.05)


def test_additive_rise_and_cap_at_one():
    sel = PolicySelector(has_initial=True)
    sel.report_return(INITIAL, 1.0)
    for _ in range(30):
        sel.report_return(LEARNED, 1.0)  # matches initial: acceptable
    assert sel.p_learned == 1.0


def test_multiplicative_cut_and_floor_once_raised():
    sel = PolicySelector(has_initial=True)
    sel.report_return(INITIAL, 1.0)  # ema_initial = 1, p -> 0.05
    sel.p_learned = 0.8
    sel.report_return(LEARNED, -5.0)  # far below initial: cut
    assert sel.p_learned == pytest.approx(0.4)
    for _ in range(10):
        sel.report_return(LEARNED, -5.0)
    assert sel.p_learned == pytest.approx(0.05)  # floor holds


def test_margin_tracks_initial_ema_magnitude():
    sel = PolicySelector(has_initial=True, margin_frac=0.1)
    assert sel.margin() == pytest.approx(1e-6)
    sel.report_return(INITIAL, -20.0)
    assert sel.margin() == pytest.approx(2.0 + 1e-6)
    # learned within the margin of a worse score still counts as success
    sel.p_learned = 0.5
    sel.report_return(LEARNED, -21.0)
    assert sel.p_learned == pytest.approx(0.55)


def test_ema_update_rule():
    sel = PolicySelector(has_initial=True, ema_decay=0.9)
    sel.report_return(LEARNED, 10.0)
    assert sel.ema_learned == 10.0
    sel.report_return(LEARNED, 0.0)
    assert sel.ema_learned == pytest.approx(9.0)


def test_decay_schedule_forces_learned_policy_in():
    sel = PolicySelector(has_initial=True, decay_enabled=True,
                         decay_episodes=10)
    for ep in range(1, 11):
        sel.report_return(INITIAL, 1.0)
        # schedule lower bound: 1 - max(0, 1 - ep/10)
        assert sel.p_learned >= ep / 10 - 1e-12
    assert sel.p_learned == 1.0


def test_decay_lower_bound_never_reduces_probability():
    sel = PolicySelector(has_initial=True, decay_enabled=True,
                         decay_episodes=1000)
    sel.p_learned = 0.9
    sel.report_return(INITIAL, 1.0)
    assert sel.p_learned >= 0.9  # schedule floor is below current value


def test_usage_rate_window():
    sel = PolicySelector(has_initial=True)
    assert sel.usage_rate(10) == 0.0
    rng = np.random.default_rng(1)
    for _ in range(6):
        sel.select_policy(rng)  # p=0: all initial
    assert sel.usage_rate(10) == 1.0
    sel.p_learned = 1.0
    for _ in range(6):
        sel.select_policy(rng)
    assert sel.usage_rate(6) == 0.0
    assert sel.usage_rate(12) == 0.5
    with pytest.raises(ValueError):
        sel.usage_rate(0)


def test_safety_net_bounds_learned_usage_under_adversarial_policy():
    # worst-case learned policy: regret per learned episode is bounded by
    # floor probability once the selector has seen the evidence
    sel = PolicySelector(has_initial=True)
    rng = np.random.default_rng(2)
    learned_episodes = 0
    for ep in range(2000):
        tag = sel.select_policy(rng)
        ret = 1.0 if tag == INITIAL else -10.0
        sel.report_return(tag, ret)
        if ep >= 100 and tag == LEARNED:
            learned_episodes += 1
    # after burn-in, learned usage stays near the 5% floor
    assert learned_episodes < 0.12 * 1900
