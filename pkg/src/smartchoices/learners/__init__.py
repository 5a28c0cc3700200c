from .base import LearnerBase, Snapshot
from .ddqn import DdqnLearner, softmax_probs
from .replay import ReplayBuffer
from .td3 import Td3Learner

__all__ = ["DdqnLearner", "LearnerBase", "ReplayBuffer", "Snapshot",
           "Td3Learner", "softmax_probs"]
