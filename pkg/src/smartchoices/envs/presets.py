"""Per-problem learner presets.

Mirrors the experiment hyperparameter table: TD3 for the continuous
outputs (binary search, continuous caches), DDQN for the categorical ones
(QuickSort, discrete caches). Common settings: Adam, critic LR 1e-4,
uniform FIFO replay of 20000, update period 1.
"""

from ..config import LearnerConfig, replace_fields


def bsearch_config(variant="mix"):
    cfg = LearnerConfig(
        algorithm="TD3",
        discount=0.8 if variant == "simple" else 0.0,
        lr_actor=1e-3,
        lr_critic=1e-4,
        batch_size=256,
        tau=0.05,
        action_noise=0.03,
        target_noise=0.2,
        actor_hidden=(16,),
        actor_activation="tanh",
        critic_hidden=(16,),
        critic_activation="tanh",
        initial_function_decay=True,
        decay_episodes=1000,
        # the range-reduction reward is heavy-tailed (ratios up to N);
        # clipping the TD error keeps the critics from chasing outliers
        td_error_clip=5.0,
    )
    return cfg


def qsort_config():
    return LearnerConfig(
        algorithm="DDQN",
        discount=0.0,
        lr_critic=1e-4,
        batch_size=256,
        tau=0.001,
        temperature=0.1,
        q_hidden=(16, 16),
        q_activation="relu",
        initial_function_decay=False,
    )


def cache_discrete_config():
    return LearnerConfig(
        algorithm="DDQN",
        discount=0.8,
        lr_critic=1e-4,
        batch_size=1024,
        tau=0.001,
        temperature=0.1,
        q_hidden=(10, 10),
        q_activation="relu",
        embedding_size=8,
        initial_function_decay=False,
    )


def cache_continuous_config():
    return LearnerConfig(
        algorithm="TD3",
        discount=0.8,
        lr_actor=1e-4,
        lr_critic=1e-4,
        batch_size=1024,
        tau=0.001,
        action_noise=0.01,
        target_noise=0.01,
        actor_hidden=(10,),
        actor_activation="tanh",
        critic_hidden=(10,),
        critic_activation="tanh",
        embedding_size=8,
        initial_function_decay=False,
    )


def preset(problem, variant):
    if problem == "bsearch":
        return bsearch_config(variant)
    if problem == "quicksort":
        return qsort_config()
    if problem == "cache":
        if variant == "discrete":
            return cache_discrete_config()
        return cache_continuous_config()
    raise ValueError(f"unknown problem {problem!r}")


def with_overrides(cfg, overrides):
    return replace_fields(cfg, **overrides) if overrides else cfg
