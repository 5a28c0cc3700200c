from .backend import BACKEND, kernels
from .net import (ACTIVATIONS, Adam, Dense, Embedding, Network, SparseAdam,
                  clip_grads, soft_update_params)
from .snapshot import freeze, load_params, read_params, save_params, write_params

__all__ = [
    "ACTIVATIONS", "Adam", "BACKEND", "Dense", "Embedding", "Network",
    "SparseAdam", "clip_grads", "freeze", "kernels", "load_params",
    "read_params", "save_params", "soft_update_params", "write_params",
]
