"""Learner and policy-selector hyperparameters.

Defaults follow the binary-search setup; per-problem presets live in
smartchoices.envs.presets.
"""

from dataclasses import dataclass, field, fields


@dataclass
class LearnerConfig:
    # "auto" picks TD3 for continuous outputs, DDQN for categorical ones
    algorithm: str = "auto"
    discount: float = 0.8
    lr_actor: float = 1e-3
    lr_critic: float = 1e-4
    batch_size: int = 256
    buffer_size: int = 20000
    tau: float = 0.05
    action_noise: float = 0.03
    target_noise: float = 0.2
    temperature: float = 0.1
    update_period: int = 1
    grad_clip: float = 10.0
    # clip the TD error at +-this value before squaring (Huber-style);
    # 0 disables. Tames heavy-tailed rewards like range-reduction ratios.
    td_error_clip: float = 0.0
    # one gradient step per train_every environment transitions
    train_every: int = 1
    # gradient steps taken per scheduled step (replay-ratio multiplier)
    train_repeat: int = 1
    synchronous: bool = True
    actor_hidden: tuple = (16,)
    actor_activation: str = "tanh"
    critic_hidden: tuple = (16,)
    critic_activation: str = "tanh"
    q_hidden: tuple = (16, 16)
    q_activation: str = "relu"
    embedding_size: int = 8
    # policy selector
    initial_function_decay: bool = False
    decay_episodes: int = 1000
    ema_decay: float = 0.95
    p_step_up: float = 0.05
    p_floor: float = 0.05
    margin_frac: float = 0.05
    progress_every: int = 100

    def validate(self):
        if not 0.0 <= self.discount <= 1.0:
            raise ValueError("discount must be in [0, 1]")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.action_noise < 0 or self.target_noise < 0:
            raise ValueError("noise sigmas must be >= 0")
        return self


def replace_fields(cfg: LearnerConfig, **overrides) -> LearnerConfig:
    names = {f.name for f in fields(LearnerConfig)}
    unknown = set(overrides) - names
    if unknown:
        raise ValueError(f"unknown LearnerConfig fields: {sorted(unknown)}")
    vals = {f.name: getattr(cfg, f.name) for f in fields(LearnerConfig)}
    vals.update(overrides)
    return LearnerConfig(**vals)
