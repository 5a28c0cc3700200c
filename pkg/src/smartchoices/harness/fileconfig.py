"""Flat key=value config files for experiment runs.

One `key = value` pair per line; `#` starts a comment. Keys may belong to
either the run settings (episodes, array_size, ...) or the learner settings
(discount, batch_size, ...). Unknown keys are an error rather than being
silently ignored.
"""

import dataclasses

from ..config import LearnerConfig, replace_fields
from ..errors import ConfigError
from .runner import RunConfig

# keys fixed by the CLI itself, not settable from a file
_RESERVED = {"problem", "variant", "episodes", "seed"}


def _coerce(key, text, typ):
    text = text.strip()
    try:
        if typ is bool:
            low = text.lower()
            if low in ("true", "1", "yes"):
                return True
            if low in ("false", "0", "no"):
                return False
            raise ValueError(text)
        if typ is int:
            return int(text)
        if typ is float:
            return float(text)
        if typ is tuple:
            if not text:
                return ()
            parts = [p.strip() for p in text.split(",")]
            try:
                return tuple(int(p) for p in parts)
            except ValueError:
                return tuple(parts)  # e.g. baseline names
        return text
    except ValueError:
        raise ConfigError(f"bad value for {key!r}: {text!r}") from None


def _field_types(cls):
    return {f.name: f.type for f in dataclasses.fields(cls)}


_RUN_TYPES = _field_types(RunConfig)
_LEARNER_TYPES = {
    f.name: type(getattr(LearnerConfig(), f.name))
    for f in dataclasses.fields(LearnerConfig)
}


def parse_config_text(text):
    """Returns (run_overrides, learner_overrides) dicts of coerced values."""
    run_over = {}
    learn_over = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key in _RESERVED:
            raise ConfigError(f"line {lineno}: {key!r} is set by CLI flags")
        if key in _RUN_TYPES:
            typ = {"int": int, "float": float, "bool": bool, "str": str,
                   "tuple": tuple}.get(_RUN_TYPES[key], str) \
                if isinstance(_RUN_TYPES[key], str) else _RUN_TYPES[key]
            run_over[key] = _coerce(key, value, typ)
        elif key in _LEARNER_TYPES:
            learn_over[key] = _coerce(key, value, _LEARNER_TYPES[key])
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    return run_over, learn_over


def load_config(path):
    with open(path) as f:
        return parse_config_text(f.read())


def apply_config(run_cfg, learner_cfg, run_over, learn_over):
    run_cfg = dataclasses.replace(run_cfg, **run_over)
    learner_cfg = replace_fields(learner_cfg, **learn_over)
    return run_cfg, learner_cfg
