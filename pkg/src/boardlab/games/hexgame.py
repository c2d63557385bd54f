"""Hex on a k x k diamond board, 2 <= k <= 11.

Cells are row-major over axial coordinates.  Black (player 0) owns the top
and bottom rims and connects them; White (player 1) owns the left and right
rims.  Hex cannot end in a draw: a full board always has exactly one
side-to-side chain.
"""
from __future__ import annotations

import random
from collections import deque
from typing import Optional

from ..core import (
    Game,
    GameState,
    Status,
    SymmetryTransform,
    zeros,
)

# axial-grid neighbor offsets: E, W, NE, NW, SE, SW
NEIGHBOR_OFFSETS = ((0, 1), (0, -1), (-1, 1), (-1, 0), (1, 0), (1, -1))


def hex_neighbors(index: int, k: int) -> list:
    r, c = divmod(index, k)
    out = []
    for dr, dc in NEIGHBOR_OFFSETS:
        rr, cc = r + dr, c + dc
        if 0 <= rr < k and 0 <= cc < k:
            out.append(rr * k + cc)
    return out


def hex_winner(cells, k: int) -> Optional[int]:
    """Side-to-side connectivity check by flood fill; at most one player
    can have a winning chain."""
    for player, mark in ((0, 1), (1, 2)):
        if player == 0:
            seeds = [c for c in range(k) if cells[c] == mark]
            goal = lambda i: i >= k * (k - 1)  # noqa: E731
        else:
            seeds = [r * k for r in range(k) if cells[r * k] == mark]
            goal = lambda i: i % k == k - 1  # noqa: E731
        seen = set(seeds)
        queue = deque(seeds)
        while queue:
            cur = queue.popleft()
            if goal(cur):
                return player
            for nb in hex_neighbors(cur, k):
                if nb not in seen and cells[nb] == mark:
                    seen.add(nb)
                    queue.append(nb)
    return None


class Hex(Game):
    players = 2
    stochastic = False

    def __init__(self, k: int):
        if not 2 <= k <= 11:
            raise ValueError(f"Hex board side must be in [2, 11], got {k}")
        self.k = k
        self.spec = f"hex-{k}"
        self.num_cells = k * k
        self.num_actions = k * k
        self.L = 3

    def initial_state(self, rng: Optional[random.Random] = None) -> GameState:
        return GameState(self, (0,) * self.num_cells, 0, 0, zeros(2))

    def legal_actions(self, state: GameState) -> list:
        self._check_own(state)
        if hex_winner(state.cells, self.k) is not None:
            return []
        return [i for i in range(self.num_cells) if state.cells[i] == 0]

    def apply_action(self, state: GameState, action: int) -> GameState:
        self._check_action(state, action)
        cells = list(state.cells)
        cells[action] = state.to_move + 1
        cells = tuple(cells)
        delta = zeros(2)
        winner = hex_winner(cells, self.k)
        if winner is not None:
            delta = (1.0, -1.0) if winner == 0 else (-1.0, 1.0)
        cum = tuple(a + b for a, b in zip(state.cumulative_reward, delta))
        return GameState(self, cells, 1 - state.to_move, state.move_count + 1, cum)

    def status(self, state: GameState) -> Status:
        winner = hex_winner(state.cells, self.k)
        if winner is None:
            return Status(False)
        return Status(True, (1.0, -1.0) if winner == 0 else (-1.0, 1.0))

    def symmetries(self) -> list:
        n = self.num_cells
        ident = tuple(range(n))
        rot180 = tuple(n - 1 - i for i in range(n))
        return [
            SymmetryTransform(0, ident, ident),
            SymmetryTransform(1, rot180, rot180),  # self-inverse permutation
        ]

    def adjacency(self) -> list:
        return [hex_neighbors(i, self.k) for i in range(self.num_cells)]

    def rollout(self, state, rng):
        from .. import fastpath

        return fastpath.rollout_hex_from(state, rng)

    def action_name(self, action: int) -> str:
        r, c = divmod(action, self.k)
        return f"{chr(ord('a') + c)}{r + 1}"

    def render(self, state: GameState) -> str:
        marks = ".BW"
        rows = []
        for r in range(self.k):
            row = " ".join(marks[state.cells[r * self.k + c]] for c in range(self.k))
            rows.append(" " * r + row)
        return "\n".join(rows)
