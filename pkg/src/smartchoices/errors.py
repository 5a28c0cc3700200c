"""Exception types shared across the package."""


class SmartChoicesError(Exception):
    pass


class DefinitionError(SmartChoicesError):
    """Invalid output or observation definition (bad range, cardinality, shape)."""


class ObservationError(SmartChoicesError):
    """Observe called with a name that was never declared."""


class ConfigError(SmartChoicesError):
    """Unknown or malformed configuration key/value."""
