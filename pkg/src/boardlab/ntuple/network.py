"""N-tuple lookup-table value functions with symmetry sharing.

An n-tuple is a set of n board cells; its observed cell values form a
base-L index into a lookup table (LUT) of trainable weights.  The network
value of a state is the LUT sum over all tuples, averaged over the game's
symmetry group, optionally squashed by tanh (2-player games).
"""
from __future__ import annotations

import math
import random
from typing import Optional, Sequence

import numpy as np

from ..core import Game, GameMismatch, GameState


def ntuple_index(cells_of_tuple: Sequence[int], L: int) -> int:
    """Base-L positional index of the tuple's observed cell values:
    sum of values[k] * L^k.  Bijective onto [0, L^n)."""
    idx = 0
    power = 1
    for v in cells_of_tuple:
        if not 0 <= v < L:
            raise ValueError(f"cell value {v} out of range [0, {L})")
        idx += v * power
        power *= L
    return idx


def generate_random_walk_ntuples(
    adjacency: Sequence[Sequence[int]], m: int, n: int, rng: random.Random
) -> list:
    """m n-tuples, each a connected cell set collected by a random walk on
    the board adjacency graph (restarted when a walk gets stuck)."""
    num_cells = len(adjacency)
    if n > num_cells:
        raise ValueError(f"tuple size {n} exceeds cell count {num_cells}")
    tuples = []
    for _ in range(m):
        while True:
            cur = rng.randrange(num_cells)
            cells = [cur]
            steps = 0
            while len(cells) < n and steps < 50 * n:
                if not adjacency[cur]:
                    break  # dead end; restart the walk
                cur = adjacency[cur][rng.randrange(len(adjacency[cur]))]
                if cur not in cells:
                    cells.append(cur)
                steps += 1
            if len(cells) == n:
                tuples.append(tuple(cells))
                break
    return tuples


def tc_multiplier(nacc: float, aacc: float, beta: float) -> float:
    """Temporal-coherence step-size multiplier with exponential transfer:
    g(r) = exp(beta * (r - 1)) where r = |N|/A, and 1 for untouched weights."""
    r = abs(nacc) / aacc if aacc > 0 else 1.0
    return math.exp(beta * (r - 1.0))


class NTupleNetwork:
    """LUT value function over m n-tuples with symmetry sharing.

    Weights live in one flat float32 array ``w``; tuple t's LUT occupies
    ``w[lut_offsets[t] : lut_offsets[t] + L**n_t]``.  ``active_features``
    returns the flat weight indices touched by a board, over all
    symmetries and tuples, so one gather evaluates the network and one
    scatter-add trains it.
    """

    def __init__(self, game: Game, tuples: Sequence[Sequence[int]], squash: Optional[str] = None):
        if not tuples:
            raise ValueError("network needs at least one n-tuple")
        for t in tuples:
            if len(set(t)) != len(t):
                raise ValueError(f"tuple {t} has repeated cells")
            if any(not 0 <= c < game.num_cells for c in t):
                raise ValueError(f"tuple {t} has out-of-board cells")
        self.game = game
        self.tuples = [tuple(t) for t in tuples]
        self.L = game.L
        if squash is None:
            squash = "tanh" if game.players >= 2 else "identity"
        if squash not in ("tanh", "identity"):
            raise ValueError(f"unknown squash {squash!r}")
        self.squash = squash

        sizes = [self.L ** len(t) for t in self.tuples]
        self.lut_offsets = np.concatenate(([0], np.cumsum(sizes)[:-1])).astype(np.int64)
        self.num_weights = int(sum(sizes))
        self.w = np.zeros(self.num_weights, dtype=np.float32)
        # temporal-coherence accumulators (columns N, A), allocated on demand;
        # interleaved so one weight's pair shares a cache line
        self.tc: Optional[np.ndarray] = None

        syms = game.symmetries()
        self.nsym = len(syms)
        nmax = max(len(t) for t in self.tuples)
        pairs = self.nsym * len(self.tuples)
        src = np.zeros((pairs, nmax), dtype=np.int64)
        pows = np.zeros((pairs, nmax), dtype=np.int64)
        offs = np.zeros(pairs, dtype=np.int64)
        p = 0
        for t_i, t in enumerate(self.tuples):
            for sym in syms:
                for k, cell in enumerate(t):
                    # sym(state).cells[cell] == cells[cell_map[cell]]
                    src[p, k] = sym.cell_map[cell]
                    pows[p, k] = self.L ** k
                offs[p] = self.lut_offsets[t_i]
                p += 1
        self._src = src
        self._pows = pows
        self._offs = offs

    # -- evaluation ---------------------------------------------------------

    def active_features(self, cells) -> np.ndarray:
        """Flat weight indices of the board, over all symmetries and tuples."""
        c = np.asarray(cells, dtype=np.int64)
        return self._offs + (c[self._src] * self._pows).sum(axis=1)

    def raw_of_features(self, feats: np.ndarray) -> float:
        return float(self.w[feats].sum()) / self.nsym

    def value_of_cells(self, cells) -> float:
        raw = self.raw_of_features(self.active_features(cells))
        return math.tanh(raw) if self.squash == "tanh" else raw

    def squash_fn(self, raw: float) -> float:
        return math.tanh(raw) if self.squash == "tanh" else raw

    def enable_tc(self) -> None:
        if self.tc is None:
            self.tc = np.zeros((self.num_weights, 2), dtype=np.float32)

    @property
    def tc_n(self) -> Optional[np.ndarray]:
        return None if self.tc is None else self.tc[:, 0]

    @property
    def tc_a(self) -> Optional[np.ndarray]:
        return None if self.tc is None else self.tc[:, 1]


def net_value(net: NTupleNetwork, state: GameState) -> float:
    """Squashed symmetry-averaged LUT value of a state or afterstate."""
    if state.game.spec != net.game.spec:
        raise GameMismatch(f"net for {net.game.spec} got state of {state.game.spec}")
    return net.value_of_cells(state.cells)
