"""Learned algorithmic choices with a safe initial-heuristic fallback.

A SmartChoice is a typed decision point inside an algorithm. Code drives
it with three calls per decision, Observe / Predict / Feedback, plus
end_episode at task boundaries. Predictions come from a small neural
policy (TD3 for continuous outputs, double DQN for categorical ones)
trained online from the feedback signal; a policy selector hedges between
the learned policy and the caller-supplied initial heuristic so early
training cannot regress the host algorithm badly.
"""

from .choice import ObservationDef, OutputDef, SmartChoice
from .config import LearnerConfig, replace_fields
from .errors import (ConfigError, DefinitionError, ObservationError,
                     SmartChoicesError)
from .selection import INITIAL, LEARNED, PolicySelector
from .tinynet.backend import BACKEND

__all__ = [
    "SmartChoice", "OutputDef", "ObservationDef",
    "LearnerConfig", "replace_fields",
    "PolicySelector", "INITIAL", "LEARNED",
    "SmartChoicesError", "DefinitionError", "ObservationError", "ConfigError",
    "BACKEND",
]

__version__ = "0.1.0"
