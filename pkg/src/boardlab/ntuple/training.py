"""TD(lambda) self-play training for n-tuple networks.

Covers the afterstate regime for nondeterministic 1-player games (2048)
and the alternating-perspective regime for 2-player win/loss games, with
temporal-coherence step sizes, eligibility traces cut at a decay horizon,
an epsilon-greedy behavior policy, and a SARSA variant.
"""
from __future__ import annotations

import math
import random
import time
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from ..core import ContractViolation, Game, GameState, ScoreTuple
from ..agents.base import Agent
from .network import NTupleNetwork, tc_multiplier


class TrainingDiverged(RuntimeError):
    """Raised when a TD error or weight stops being finite."""


@dataclass
class TrainConfig:
    training_games: int
    alpha: float = 1.0          # global learning rate
    lam: float = 0.0            # eligibility-trace decay
    gamma: float = 1.0
    eps_init: float = 0.1
    eps_final: float = 0.0      # linear schedule over episodes
    tc_enabled: bool = True
    beta: float = 2.7           # exponential transfer for temporal coherence
    horizon_cut: float = 0.01
    seed: int = 0
    algorithm: str = "td"       # "td" bootstraps the greedy successor, "sarsa" the behavior one
    eval_points: int = 50
    eval_episodes: int = 20
    use_fast_kernel: bool = True

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise ValueError("lambda must be in [0, 1)")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")
        for eps in (self.eps_init, self.eps_final):
            if not 0.0 <= eps <= 1.0:
                raise ValueError("epsilon must be in [0, 1]")
        if self.algorithm not in ("td", "sarsa"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")

    def epsilon_at(self, episode: int) -> float:
        if self.training_games <= 1:
            return self.eps_init
        frac = episode / (self.training_games - 1)
        return self.eps_init + (self.eps_final - self.eps_init) * min(frac, 1.0)


def trace_horizon(lam: float, horizon_cut: float = 0.01) -> int:
    """Ring length H = max{h : lam^h >= cut} + 1 (so H = 1 when lam = 0)."""
    if lam <= 0.0:
        return 1
    h = 0
    while lam ** (h + 1) >= horizon_cut:
        h += 1
    return h + 1


class EligibilityTrace:
    """Ring of the most recently visited feature-index sets.

    Entry k (0 = most recent) decays with lam^k; entries past the horizon
    cut are dropped.  For 2-player alternating-perspective training the
    decay sign flips each ply.
    """

    def __init__(self, lam: float, horizon_cut: float = 0.01, alternate_sign: bool = False):
        self.lam = lam
        self.horizon = trace_horizon(lam, horizon_cut)
        self.alternate_sign = alternate_sign
        self._ring: deque = deque(maxlen=self.horizon)

    def reset(self) -> None:
        self._ring.clear()

    def push(self, feats: np.ndarray) -> None:
        self._ring.appendleft(feats)

    def __len__(self) -> int:
        return len(self._ring)

    def entries(self):
        """Yields (decay, feature array), most recent first."""
        for k, feats in enumerate(self._ring):
            decay = self.lam ** k if k else 1.0
            if self.alternate_sign and k % 2 == 1:
                decay = -decay
            yield decay, feats


def td_update(
    net: NTupleNetwork,
    trace: EligibilityTrace,
    feats_prev: np.ndarray,
    target: float,
    cfg: TrainConfig,
) -> float:
    """One TD step: push the predicted state's features onto the trace and
    move every traced feature set toward the target.  Returns the TD error.

    Per-weight step: alpha * tc_multiplier * decay_k * delta * dsquash,
    normalized by (num_tuples * num_symmetries).  TC accumulators collect
    the pre-rate error signal delta * decay_k.
    """
    raw = net.raw_of_features(feats_prev)
    p = net.squash_fn(raw)
    delta = target - p
    if not math.isfinite(delta):
        raise TrainingDiverged(f"non-finite TD error: target={target}, value={p}")
    trace.push(feats_prev)
    dsquash = (1.0 - p * p) if net.squash == "tanh" else 1.0
    base = cfg.alpha * delta * dsquash / (len(net.tuples) * net.nsym)
    if cfg.tc_enabled:
        net.enable_tc()
    for decay, feats in trace.entries():
        if cfg.tc_enabled:
            mult = np.exp(cfg.beta * (_tc_ratio(net, feats) - 1.0))
            np.add.at(net.w, feats, (base * decay * mult).astype(np.float32))
            signal = np.float32(delta * decay)
            np.add.at(net.tc, (feats, 0), signal)
            np.add.at(net.tc, (feats, 1), abs(signal))
        else:
            np.add.at(net.w, feats, np.float32(base * decay))
    return delta


def _tc_ratio(net: NTupleNetwork, feats: np.ndarray) -> np.ndarray:
    n = net.tc[feats, 0]
    a = net.tc[feats, 1]
    return np.where(a > 0, np.abs(n) / np.where(a > 0, a, 1.0), 1.0)


def afterstate_target(
    net: NTupleNetwork,
    reward: float,
    afterstate_next: Optional[GameState],
    gamma: float = 1.0,
) -> float:
    """Bootstrap target for the previous afterstate's value: the reward
    collected since, plus the discounted value of the next afterstate
    (absent at episode end)."""
    if afterstate_next is None:
        return reward
    return reward + gamma * net.value_of_cells(afterstate_next.cells)


def two_player_target(net: NTupleNetwork, state_prev: GameState, state_next: GameState) -> float:
    """Target for v(state_prev) from the mover's perspective: the final
    reward when state_next is terminal, else the negated value of
    state_next (the mover alternates)."""
    if net.game.players != 2:
        raise ContractViolation("two_player_target is only for 2-player games")
    st = state_next.game.status(state_next)
    if st.terminal:
        return st.scores[state_prev.to_move]
    return -net.value_of_cells(state_next.cells)


# ---------------------------------------------------------------------------
# Greedy policies over the network.
# ---------------------------------------------------------------------------

def greedy_afterstate(net: NTupleNetwork, state: GameState):
    """Best (action, afterstate, move reward) by reward + V(afterstate)."""
    game = state.game
    best = None
    for a in game.legal_actions(state):
        after = game.apply_action(state, a)
        r = after.cumulative_reward[0] - state.cumulative_reward[0]
        v = r + net.value_of_cells(after.cells)
        if best is None or v > best[0]:
            best = (v, a, after, r)
    return best[1], best[2], best[3]


def greedy_two_player(net: NTupleNetwork, state: GameState):
    """Best (action, next state, mover's value) by terminal reward or the
    negated successor value."""
    game = state.game
    mover = state.to_move
    best = None
    for a in game.legal_actions(state):
        nxt = game.apply_action(state, a)
        st = game.status(nxt)
        v = st.scores[mover] if st.terminal else -net.value_of_cells(nxt.cells)
        if best is None or v > best[0]:
            best = (v, a, nxt)
    return best[1], best[2], best[0]


class NTupleAgent(Agent):
    """Greedy policy over an n-tuple value function."""

    name = "td-ntuple"
    is_trainable = True

    def __init__(self, net: NTupleNetwork, name: Optional[str] = None):
        self.net = net
        if name:
            self.name = name

    def choose_action(self, state: GameState, rng: random.Random):
        game = state.game
        mover = state.to_move
        estimates = {}
        if game.players == 1:
            for a in game.legal_actions(state):
                after = game.apply_action(state, a)
                estimates[a] = (
                    after.cumulative_reward[0] + self.net.value_of_cells(after.cells),
                )
        else:
            for a in game.legal_actions(state):
                nxt = game.apply_action(state, a)
                st = game.status(nxt)
                v = st.scores[mover] if st.terminal else -self.net.value_of_cells(nxt.cells)
                est = [0.0] * game.players
                est[mover] = v
                est[1 - mover] = -v
                estimates[a] = tuple(est)
        best = min(estimates, key=lambda a: (-estimates[a][mover], a))
        return best, estimates

    def predict_value(self, state: GameState) -> ScoreTuple:
        if state.game.players == 1:
            return (state.cumulative_reward[0] + self.net.value_of_cells(state.cells),)
        v = self.net.value_of_cells(state.cells)
        out = [0.0] * state.game.players
        out[state.to_move] = v
        out[1 - state.to_move] = -v
        return tuple(out)


# ---------------------------------------------------------------------------
# Self-play training.
# ---------------------------------------------------------------------------

@dataclass
class CurvePoint:
    episode: int
    eval_metric: float
    epsilon: float
    wall_seconds: float


@dataclass
class TrainingCurve:
    points: list = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["episode,eval_metric,epsilon,wall_seconds"]
        for p in self.points:
            lines.append(f"{p.episode},{p.eval_metric},{p.epsilon},{p.wall_seconds:.3f}")
        return "\n".join(lines) + "\n"


def default_tuples(game: Game) -> list:
    """Generic fallback feature set: one 1-tuple per board cell."""
    return [(i,) for i in range(game.num_cells)]


def train_selfplay(
    game: Game,
    cfg: TrainConfig,
    tuples=None,
    net: Optional[NTupleNetwork] = None,
    eval_fn=None,
    progress=None,
):
    """Runs epsilon-greedy self-play TD training and returns
    (trained NTupleAgent, TrainingCurve).

    ``eval_fn(net) -> float`` overrides the built-in periodic evaluation
    (mean greedy score for 1-player games, win rate vs. a uniform-random
    opponent for 2-player games).
    """
    if net is None:
        net = NTupleNetwork(game, tuples if tuples is not None else default_tuples(game))
    if cfg.tc_enabled:
        net.enable_tc()
    rng = random.Random(cfg.seed)
    eval_rng = random.Random((cfg.seed, "eval").__hash__())

    curve = TrainingCurve()
    start = time.perf_counter()
    every = max(1, cfg.training_games // cfg.eval_points) if cfg.training_games else 0

    if cfg.training_games and cfg.use_fast_kernel:
        from .. import fastpath

        if fastpath.supports(game):
            # a None eval_fn lets the kernel use its compiled evaluator
            fastpath.train_kernel(game, net, cfg, curve, eval_fn, start, progress)
            return NTupleAgent(net), curve

    if eval_fn is None:
        eval_fn = lambda n: _default_eval(game, n, cfg, eval_rng)  # noqa: E731

    episode_fn = _episode_1p if game.players == 1 else _episode_2p
    trace = EligibilityTrace(
        cfg.lam, cfg.horizon_cut, alternate_sign=(game.players == 2)
    )
    for ep in range(cfg.training_games):
        eps = cfg.epsilon_at(ep)
        trace.reset()
        episode_fn(game, net, trace, cfg, eps, rng)
        if every and (ep + 1) % every == 0:
            curve.points.append(
                CurvePoint(ep + 1, eval_fn(net), eps, time.perf_counter() - start)
            )
            if progress:
                progress(curve.points[-1])
    return NTupleAgent(net), curve


def _episode_1p(game, net, trace, cfg, eps, rng):
    if not game.stochastic:
        raise ContractViolation("1-player trainer expects a nondeterministic game")
    s = game.initial_state(rng)
    prev_feats = None
    while True:
        st = game.status(s)
        if st.terminal:
            if prev_feats is not None:
                td_update(net, trace, prev_feats, afterstate_target(net, 0.0, None), cfg)
            return
        greedy_a, greedy_after, greedy_r = greedy_afterstate(net, s)
        a, after, r = greedy_a, greedy_after, greedy_r
        if eps > 0 and rng.random() < eps:
            acts = game.legal_actions(s)
            a = acts[rng.randrange(len(acts))]
            if a != greedy_a:
                after = game.apply_action(s, a)
                r = after.cumulative_reward[0] - s.cumulative_reward[0]
        if prev_feats is not None:
            if cfg.algorithm == "sarsa":
                target = afterstate_target(net, r, after, cfg.gamma)
            else:
                target = afterstate_target(net, greedy_r, greedy_after, cfg.gamma)
            td_update(net, trace, prev_feats, target, cfg)
        prev_feats = net.active_features(after.cells)
        s = game.sample_chance(after, rng)


def _episode_2p(game, net, trace, cfg, eps, rng):
    s = game.initial_state(rng)
    while True:
        feats = net.active_features(s.cells)
        greedy_a, greedy_next, _ = greedy_two_player(net, s)
        a, nxt = greedy_a, greedy_next
        if eps > 0 and rng.random() < eps:
            acts = game.legal_actions(s)
            a = acts[rng.randrange(len(acts))]
            if a != greedy_a:
                nxt = game.apply_action(s, a)
        boot = greedy_next if cfg.algorithm == "td" else nxt
        td_update(net, trace, feats, two_player_target(net, s, boot), cfg)
        if game.status(nxt).terminal:
            return
        s = nxt


def _default_eval(game, net, cfg, eval_rng) -> float:
    agent = NTupleAgent(net)
    if game.players == 1:
        total = 0.0
        for _ in range(cfg.eval_episodes):
            s = game.initial_state(eval_rng)
            while True:
                st = game.status(s)
                if st.terminal:
                    total += st.scores[0]
                    break
                a, _ = agent.choose_action(s, eval_rng)
                s = game.sample_chance(game.apply_action(s, a), eval_rng)
        return total / cfg.eval_episodes
    # 2-player: win rate vs uniform random, alternating seats
    from ..agents.base import RandomAgent

    opponent = RandomAgent()
    credit = 0.0
    for i in range(cfg.eval_episodes):
        seats = [agent, opponent] if i % 2 == 0 else [opponent, agent]
        seat = 0 if i % 2 == 0 else 1
        s = game.initial_state(eval_rng)
        while True:
            st = game.status(s)
            if st.terminal:
                credit += 1.0 if st.scores[seat] > 0 else (0.5 if st.scores[seat] == 0 else 0.0)
                break
            a, _ = seats[s.to_move].choose_action(s, eval_rng)
            s = game.apply_action(s, a)
    return credit / cfg.eval_episodes
