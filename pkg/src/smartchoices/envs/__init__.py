from . import bsearch, cache, presets, qsort

__all__ = ["bsearch", "cache", "presets", "qsort"]
