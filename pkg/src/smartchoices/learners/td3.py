"""TD3 for continuous outputs: twin critics with min-target, target policy
smoothing, deterministic tanh actor with Gaussian exploration noise.

Actions live in (-1, 1); the SmartChoice maps them to the declared output
range. The optional key embedding is shared between actor and critics and
is trained from the critic losses only.
"""

import numpy as np

from ..tinynet import (Adam, Embedding, Network, SparseAdam, clip_grads,
                       soft_update_params)
from .base import LearnerBase, merge_sparse_grads


class Td3Learner(LearnerBase):
    def __init__(self, n_floats, n_keys, key_space, action_dim, config, rng):
        super().__init__(n_floats, n_keys, key_space, action_dim, False,
                         config, rng)
        self.action_dim = action_dim
        cfg = self.cfg
        self.emb = (Embedding(key_space, cfg.embedding_size, rng)
                    if n_keys else None)
        self.emb_target = None
        if self.emb is not None:
            self.emb_target = Embedding(key_space, cfg.embedding_size, rng)
            self.emb_target.table[:] = self.emb.table

        def actor_net():
            return Network(n_floats, cfg.actor_hidden, action_dim,
                           cfg.actor_activation, "tanh", rng,
                           embedding=self.emb, n_keys=n_keys)

        def critic_net():
            return Network(n_floats + action_dim, cfg.critic_hidden, 1,
                           cfg.critic_activation, "identity", rng,
                           embedding=self.emb, n_keys=n_keys)

        self.actor = actor_net()
        self.actor_target = actor_net()
        self.actor_target.set_params(self.actor.param_list())
        self.critic1 = critic_net()
        self.critic2 = critic_net()
        self.critic1_target = critic_net()
        self.critic2_target = critic_net()
        self.critic1_target.set_params(self.critic1.param_list())
        self.critic2_target.set_params(self.critic2.param_list())
        self.actor_opt = Adam(self.actor.param_list(), cfg.lr_actor)
        self.critic1_opt = Adam(self.critic1.param_list(), cfg.lr_critic)
        self.critic2_opt = Adam(self.critic2.param_list(), cfg.lr_critic)
        self.emb_opt = (SparseAdam(self.emb.table, cfg.lr_critic)
                        if self.emb is not None else None)
        self.publish()

    # -- acting ------------------------------------------------------------

    def policy(self, floats, keys=None):
        snap = self._snapshot
        return self.actor.forward(floats, keys, params=snap.lists["actor"],
                                  emb_table=snap.lists["emb"])

    def act(self, floats, keys=None, explore=True):
        a = self.policy(floats, keys)[0].copy()
        if explore and self.cfg.action_noise > 0:
            a += self.rng.normal(0.0, self.cfg.action_noise, size=a.shape)
        return np.clip(a, -1.0, 1.0)

    def act_batch(self, floats, keys=None, explore=True):
        a = self.policy(floats, keys)
        if explore and self.cfg.action_noise > 0:
            a = a + self.rng.normal(0.0, self.cfg.action_noise, size=a.shape)
        return np.clip(a, -1.0, 1.0)

    # -- training ----------------------------------------------------------

    def _critic_input(self, floats, actions):
        return np.concatenate([floats, actions], axis=1)

    def _update(self, batch):
        cfg = self.cfg
        n = batch["r"].shape[0]
        keys = batch["sk"] if self.n_keys else None
        if cfg.discount > 0.0:
            nkeys = batch["nk"] if self.n_keys else None
            emb_t = self.emb_target.table if self.emb_target else None
            an = self.actor_target.forward(batch["nf"], nkeys, emb_table=emb_t)
            if cfg.target_noise > 0:
                noise = self.rng.normal(0.0, cfg.target_noise, size=an.shape)
                np.clip(noise, -2.0 * cfg.target_noise,
                        2.0 * cfg.target_noise, out=noise)
                an = an + noise
            np.clip(an, -1.0, 1.0, out=an)
            xin = self._critic_input(batch["nf"], an)
            q1t = self.critic1_target.forward(xin, nkeys, emb_table=emb_t)
            q2t = self.critic2_target.forward(xin, nkeys, emb_table=emb_t)
            boot = np.minimum(q1t, q2t)[:, 0]
            y = batch["r"] + cfg.discount * np.where(batch["term"], 0.0, boot)
        else:
            y = batch["r"]

        xin = self._critic_input(batch["sf"], batch["a"])
        emb_parts = []
        losses = 0.0
        qmean = 0.0
        for critic, opt in ((self.critic1, self.critic1_opt),
                            (self.critic2, self.critic2_opt)):
            q, cache = critic.forward_cached(xin, keys)
            diff = q[:, 0] - y
            if cfg.td_error_clip > 0:
                np.clip(diff, -cfg.td_error_clip, cfg.td_error_clip, out=diff)
            losses += float(np.mean(diff * diff))
            qmean += float(np.mean(q))
            gy = (2.0 * diff / n)[:, None]
            grads, _, emb_grad = critic.backward(cache, gy)
            clip_grads(list(grads) + ([emb_grad[1]] if emb_grad else []),
                       cfg.grad_clip)
            opt.step(grads)
            emb_parts.append(emb_grad)
        merged = merge_sparse_grads(emb_parts)
        if merged is not None:
            self.emb_opt.step(*merged)

        # actor ascends Q1(s, actor(s))
        a_pi, a_cache = self.actor.forward_cached(batch["sf"], keys)
        q1, c_cache = self.critic1.forward_cached(
            self._critic_input(batch["sf"], a_pi), keys)
        gy = np.full((n, 1), -1.0 / n)
        _, gfloats, _ = self.critic1.backward(c_cache, gy, want_input_grad=True)
        ga = gfloats[:, self.n_floats:]
        actor_grads, _, _ = self.actor.backward(a_cache, ga)
        clip_grads(actor_grads, cfg.grad_clip)
        self.actor_opt.step(actor_grads)
        return losses / 2.0, qmean / 2.0

    def _soft_updates(self):
        tau = self.cfg.tau
        soft_update_params(self.actor_target.param_list(),
                           self.actor.param_list(), tau)
        soft_update_params(self.critic1_target.param_list(),
                           self.critic1.param_list(), tau)
        soft_update_params(self.critic2_target.param_list(),
                           self.critic2.param_list(), tau)
        if self.emb is not None:
            soft_update_params([self.emb_target.table], [self.emb.table], tau)

    # -- snapshots -----------------------------------------------------------

    def _named_params(self):
        nets = {
            "actor": self.actor, "actor_target": self.actor_target,
            "critic1": self.critic1, "critic2": self.critic2,
            "critic1_target": self.critic1_target,
            "critic2_target": self.critic2_target,
        }
        named = {}
        for net_name, net in nets.items():
            for j, layer in enumerate(net.layers):
                named[f"{net_name}/l{j}/w"] = layer.w
                named[f"{net_name}/l{j}/b"] = layer.b
        if self.emb is not None:
            named["emb"] = self.emb.table
            named["emb_target"] = self.emb_target.table
        return named

    def _param_lists(self, named):
        nl = len(self.actor.layers)
        return {
            "actor": [named[f"actor/l{j}/{p}"]
                      for j in range(nl) for p in ("w", "b")],
            "emb": named.get("emb"),
        }
