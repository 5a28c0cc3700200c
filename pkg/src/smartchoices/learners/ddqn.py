"""Double DQN for categorical outputs: online/target Q nets, Boltzmann
exploration, double-Q targets with terminal masking."""

import numpy as np

from ..tinynet import (Adam, Embedding, Network, SparseAdam, clip_grads,
                       soft_update_params)
from .base import LearnerBase


def softmax_probs(q, temperature):
    z = (q - np.max(q, axis=-1, keepdims=True)) / temperature
    p = np.exp(z)
    p /= np.sum(p, axis=-1, keepdims=True)
    return p


class DdqnLearner(LearnerBase):
    def __init__(self, n_floats, n_keys, key_space, n_actions, config, rng):
        super().__init__(n_floats, n_keys, key_space, 1, True, config, rng)
        self.n_actions = n_actions
        cfg = self.cfg
        self.emb = (Embedding(key_space, cfg.embedding_size, rng)
                    if n_keys else None)
        self.emb_target = None
        if self.emb is not None:
            self.emb_target = Embedding(key_space, cfg.embedding_size, rng)
            self.emb_target.table[:] = self.emb.table
        self.q = Network(n_floats, cfg.q_hidden, n_actions, cfg.q_activation,
                         "identity", rng, embedding=self.emb, n_keys=n_keys)
        self.q_target = Network(n_floats, cfg.q_hidden, n_actions,
                                cfg.q_activation, "identity", rng,
                                embedding=self.emb, n_keys=n_keys)
        self.q_target.set_params(self.q.param_list())
        self.opt = Adam(self.q.param_list(), cfg.lr_critic)
        self.emb_opt = (SparseAdam(self.emb.table, cfg.lr_critic)
                        if self.emb is not None else None)
        self.publish()

    # -- acting ------------------------------------------------------------

    def q_values(self, floats, keys=None):
        snap = self._snapshot
        return self.q.forward(floats, keys, params=snap.lists["q"],
                              emb_table=snap.lists["emb"])

    def act(self, floats, keys=None, explore=True):
        q = self.q_values(floats, keys)[0]
        return int(self._pick(q, explore))

    def act_batch(self, floats, keys=None, explore=True):
        q = self.q_values(floats, keys)
        if not explore or self.cfg.temperature <= 1e-12:
            return np.argmax(q, axis=1)
        p = softmax_probs(q, self.cfg.temperature)
        u = self.rng.random(q.shape[0])
        picks = [min(int(np.searchsorted(np.cumsum(row), x)), self.n_actions - 1)
                 for row, x in zip(p, u)]
        return np.array(picks, dtype=np.int64)

    def _pick(self, q, explore):
        if not explore or self.cfg.temperature <= 1e-12:
            return np.argmax(q)
        p = softmax_probs(q, self.cfg.temperature)
        return min(np.searchsorted(np.cumsum(p), self.rng.random()),
                   self.n_actions - 1)

    # -- training ----------------------------------------------------------

    def _update(self, batch):
        cfg = self.cfg
        n = batch["r"].shape[0]
        keys = batch["sk"] if self.n_keys else None
        a = batch["a"]
        if cfg.discount > 0.0:
            nkeys = batch["nk"] if self.n_keys else None
            qn_online = self.q.forward(batch["nf"], nkeys)
            qn_target = self.q_target.forward(
                batch["nf"], nkeys,
                emb_table=self.emb_target.table if self.emb_target else None)
            best = np.argmax(qn_online, axis=1)
            boot = qn_target[np.arange(n), best]
            y = batch["r"] + cfg.discount * np.where(batch["term"], 0.0, boot)
        else:
            y = batch["r"]
        qs, cache = self.q.forward_cached(batch["sf"], keys)
        idx = np.arange(n)
        diff = qs[idx, a] - y
        if cfg.td_error_clip > 0:
            np.clip(diff, -cfg.td_error_clip, cfg.td_error_clip, out=diff)
        loss = float(np.mean(diff * diff))
        gy = np.zeros_like(qs)
        gy[idx, a] = 2.0 * diff / n
        grads, _, emb_grad = self.q.backward(cache, gy)
        clip_list = list(grads) + ([emb_grad[1]] if emb_grad else [])
        clip_grads(clip_list, cfg.grad_clip)
        self.opt.step(grads)
        if emb_grad is not None:
            self.emb_opt.step(*emb_grad)
        return loss, float(np.mean(qs))

    def _soft_updates(self):
        soft_update_params(self.q_target.param_list(), self.q.param_list(),
                           self.cfg.tau)
        if self.emb is not None:
            soft_update_params([self.emb_target.table], [self.emb.table],
                               self.cfg.tau)

    # -- snapshots -----------------------------------------------------------

    def _named_params(self):
        named = {}
        for j, layer in enumerate(self.q.layers):
            named[f"q/l{j}/w"] = layer.w
            named[f"q/l{j}/b"] = layer.b
        for j, layer in enumerate(self.q_target.layers):
            named[f"q_target/l{j}/w"] = layer.w
            named[f"q_target/l{j}/b"] = layer.b
        if self.emb is not None:
            named["emb"] = self.emb.table
            named["emb_target"] = self.emb_target.table
        return named

    def _param_lists(self, named):
        nl = len(self.q.layers)
        return {
            "q": [named[f"q/l{j}/{p}"] for j in range(nl) for p in ("w", "b")],
            "emb": named.get("emb"),
        }
