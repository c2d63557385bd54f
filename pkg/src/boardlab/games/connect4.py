"""Connect-4 on the standard 7 x 6 board.  Actions are column drops.

The default cell encoding distinguishes reachable from unreachable empty
cells (L = 4: empty-unreachable, empty-reachable, player 0, player 1); the
reachable marker is the lowest empty cell of each column and carries the
information n-tuple value functions need about where play can continue.
A plain L = 3 encoding is available as a fallback.

Cells are row-major with row 0 at the bottom: index = row * 7 + col.
"""
from __future__ import annotations

import random
from typing import Optional

from ..core import (
    Game,
    GameState,
    IllegalAction,
    Status,
    SymmetryTransform,
    zeros,
)

COLS = 7
ROWS = 6
NUM_CELLS = COLS * ROWS


def _line_quads():
    quads = []
    for r in range(ROWS):
        for c in range(COLS):
            for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
                rr, cc = r + 3 * dr, c + 3 * dc
                if 0 <= rr < ROWS and 0 <= cc < COLS:
                    quads.append(tuple((r + i * dr) * COLS + (c + i * dc) for i in range(4)))
    return tuple(quads)


QUADS = _line_quads()


def connect4_winner(cells, piece_base: int = 2) -> Optional[int]:
    """Returns the player with 4-in-a-row, or None.  ``piece_base`` is the
    cell value of player 0's pieces (2 in the reachability encoding)."""
    for a, b, c, d in QUADS:
        v = cells[a]
        if v >= piece_base and v == cells[b] == cells[c] == cells[d]:
            return v - piece_base
    return None


class Connect4(Game):
    players = 2
    stochastic = False
    num_cells = NUM_CELLS
    num_actions = COLS

    def __init__(self, reachable_encoding: bool = True):
        self.reachable_encoding = reachable_encoding
        if reachable_encoding:
            self.spec = "connect4"
            self.L = 4
            self.piece_base = 2
        else:
            self.spec = "connect4-l3"
            self.L = 3
            self.piece_base = 1

    def initial_state(self, rng: Optional[random.Random] = None) -> GameState:
        cells = [0] * NUM_CELLS
        if self.reachable_encoding:
            for c in range(COLS):
                cells[c] = 1  # bottom row is reachable
        return GameState(self, tuple(cells), 0, 0, zeros(2))

    def _drop_row(self, cells, col: int) -> Optional[int]:
        empty_mark = 1 if self.reachable_encoding else 0
        for r in range(ROWS):
            if cells[r * COLS + col] < self.piece_base:
                # lowest non-piece cell; with reachability encoding it is
                # exactly the cell marked reachable
                assert cells[r * COLS + col] == empty_mark
                return r
        return None

    def legal_actions(self, state: GameState) -> list:
        self._check_own(state)
        if connect4_winner(state.cells, self.piece_base) is not None:
            return []
        return [c for c in range(COLS) if self._drop_row(state.cells, c) is not None]

    def apply_action(self, state: GameState, action: int) -> GameState:
        if not 0 <= action < COLS:
            raise IllegalAction(action, "column out of range")
        if connect4_winner(state.cells, self.piece_base) is not None:
            raise IllegalAction(action, "game already decided")
        row = self._drop_row(state.cells, action)
        if row is None:
            raise IllegalAction(action, f"column {action} is full")
        cells = list(state.cells)
        cells[row * COLS + action] = self.piece_base + state.to_move
        if self.reachable_encoding and row + 1 < ROWS:
            cells[(row + 1) * COLS + action] = 1
        cells = tuple(cells)
        delta = zeros(2)
        winner = connect4_winner(cells, self.piece_base)
        if winner is not None:
            delta = (1.0, -1.0) if winner == 0 else (-1.0, 1.0)
        cum = tuple(a + b for a, b in zip(state.cumulative_reward, delta))
        return GameState(self, cells, 1 - state.to_move, state.move_count + 1, cum)

    def status(self, state: GameState) -> Status:
        winner = connect4_winner(state.cells, self.piece_base)
        if winner is not None:
            return Status(True, (1.0, -1.0) if winner == 0 else (-1.0, 1.0))
        if all(v >= self.piece_base for v in state.cells):
            return Status(True, (0.0, 0.0))
        return Status(False)

    def symmetries(self) -> list:
        ident = tuple(range(NUM_CELLS))
        mirror = tuple(r * COLS + (COLS - 1 - c) for r in range(ROWS) for c in range(COLS))
        return [
            SymmetryTransform(0, ident, tuple(range(COLS))),
            SymmetryTransform(1, mirror, tuple(COLS - 1 - c for c in range(COLS))),
        ]

    def adjacency(self) -> list:
        nbrs = []
        for r in range(ROWS):
            for c in range(COLS):
                cur = []
                for dr in (-1, 0, 1):
                    for dc in (-1, 0, 1):
                        if dr == dc == 0:
                            continue
                        rr, cc = r + dr, c + dc
                        if 0 <= rr < ROWS and 0 <= cc < COLS:
                            cur.append(rr * COLS + cc)
                nbrs.append(cur)
        return nbrs

    def rollout(self, state, rng):
        if not self.reachable_encoding:
            return super().rollout(state, rng)
        from .. import fastpath

        return fastpath.rollout_c4_from(state, rng)

    def action_name(self, action: int) -> str:
        return f"drop {action}"

    def render(self, state: GameState) -> str:
        marks = {0: ".", 1: "." if self.reachable_encoding else "X", 2: "X", 3: "O"}
        if not self.reachable_encoding:
            marks = {0: ".", 1: "X", 2: "O"}
        rows = []
        for r in range(ROWS - 1, -1, -1):
            rows.append(" ".join(marks[state.cells[r * COLS + c]] for c in range(COLS)))
        rows.append(" ".join(str(c) for c in range(COLS)))
        return "\n".join(rows)
