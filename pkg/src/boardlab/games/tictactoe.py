"""Tic-tac-toe on a 3x3 board.  Mainly a correctness workhorse for tests."""
from __future__ import annotations

import random
from typing import Optional

from ..core import (
    Game,
    GameState,
    IllegalAction,
    Status,
    SymmetryTransform,
    inverse_permutation,
    square_d4_cell_maps,
    zeros,
)

LINES = (
    (0, 1, 2), (3, 4, 5), (6, 7, 8),   # rows
    (0, 3, 6), (1, 4, 7), (2, 5, 8),   # columns
    (0, 4, 8), (2, 4, 6),              # diagonals
)


class TicTacToe(Game):
    spec = "tictactoe"
    players = 2
    num_cells = 9
    num_actions = 9
    L = 3  # 0 empty, 1 player 0 (X), 2 player 1 (O)

    def initial_state(self, rng: Optional[random.Random] = None) -> GameState:
        return GameState(self, (0,) * 9, 0, 0, zeros(2))

    def legal_actions(self, state: GameState) -> list:
        self._check_own(state)
        if self._winner(state.cells) is not None:
            return []
        return [i for i in range(9) if state.cells[i] == 0]

    def apply_action(self, state: GameState, action: int) -> GameState:
        self._check_action(state, action)
        cells = list(state.cells)
        cells[action] = state.to_move + 1
        cells = tuple(cells)
        winner = self._winner(cells)
        delta = zeros(2)
        if winner is not None:
            delta = (1.0, -1.0) if winner == 0 else (-1.0, 1.0)
        cum = tuple(a + b for a, b in zip(state.cumulative_reward, delta))
        return GameState(self, cells, 1 - state.to_move, state.move_count + 1, cum)

    def status(self, state: GameState) -> Status:
        winner = self._winner(state.cells)
        if winner is not None:
            return Status(True, (1.0, -1.0) if winner == 0 else (-1.0, 1.0))
        if all(v != 0 for v in state.cells):
            return Status(True, (0.0, 0.0))
        return Status(False)

    @staticmethod
    def _winner(cells) -> Optional[int]:
        for a, b, c in LINES:
            if cells[a] != 0 and cells[a] == cells[b] == cells[c]:
                return cells[a] - 1
        return None

    def symmetries(self) -> list:
        out = []
        for i, cell_map in enumerate(square_d4_cell_maps(3)):
            # placement game: the action follows its cell
            out.append(SymmetryTransform(i, cell_map, inverse_permutation(cell_map)))
        return out

    def adjacency(self) -> list:
        nbrs = []
        for r in range(3):
            for c in range(3):
                cur = []
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        if dr == dc == 0:
                            continue
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < 3 and 0 <= cc < 3:
                            cur.append(rr * 3 + cc)
                nbrs.append(cur)
        return nbrs

    def action_name(self, action: int) -> str:
        return f"{'abc'[action % 3]}{action // 3 + 1}"

    def render(self, state: GameState) -> str:
        marks = ".XO"
        rows = []
        for r in range(3):
            rows.append(" ".join(marks[state.cells[r * 3 + c]] for c in range(3)))
        return "\n".join(rows)
