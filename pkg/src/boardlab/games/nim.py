"""Nim with a configurable number of heaps, normal-play convention
(whoever takes the last object wins).

The board-cell encoding used for n-tuple features is one cell per heap,
cell value = current heap size, so L = max initial heap size + 1.
Action ids encode (heap, count) as heap * max_heap + (count - 1).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import reduce
from operator import xor
from typing import Optional, Union

from ..core import (
    Game,
    GameMismatch,
    GameState,
    Status,
    SymmetryTransform,
    zeros,
)


class Nim(Game):
    players = 2
    stochastic = False

    def __init__(self, heaps):
        heaps = tuple(int(h) for h in heaps)
        if not heaps or any(h < 1 for h in heaps):
            raise ValueError(f"Nim needs at least one non-empty heap, got {heaps}")
        self.heaps = heaps
        self.max_heap = max(heaps)
        self.spec = "nim-" + ",".join(str(h) for h in heaps)
        self.num_cells = len(heaps)
        self.num_actions = len(heaps) * self.max_heap
        self.L = self.max_heap + 1

    def initial_state(self, rng: Optional[random.Random] = None) -> GameState:
        return GameState(self, self.heaps, 0, 0, zeros(2))

    def decode_action(self, action: int):
        heap, rem = divmod(action, self.max_heap)
        return heap, rem + 1

    def encode_action(self, heap: int, count: int) -> int:
        return heap * self.max_heap + (count - 1)

    def legal_actions(self, state: GameState) -> list:
        self._check_own(state)
        out = []
        for heap, size in enumerate(state.cells):
            for count in range(1, size + 1):
                out.append(self.encode_action(heap, count))
        out.sort()
        return out

    def apply_action(self, state: GameState, action: int) -> GameState:
        heap, count = self.decode_action(action)
        if not (0 <= heap < self.num_cells) or count > state.cells[heap]:
            from ..core import IllegalAction

            raise IllegalAction(action, f"heap {heap} holds {state.cells[heap]}")
        cells = list(state.cells)
        cells[heap] -= count
        cells = tuple(cells)
        delta = zeros(2)
        if all(v == 0 for v in cells):  # mover took the last object and wins
            delta = (1.0, -1.0) if state.to_move == 0 else (-1.0, 1.0)
        cum = tuple(a + b for a, b in zip(state.cumulative_reward, delta))
        return GameState(self, cells, 1 - state.to_move, state.move_count + 1, cum)

    def status(self, state: GameState) -> Status:
        if any(v != 0 for v in state.cells):
            return Status(False)
        # the player who is NOT to move made the final take
        winner = 1 - state.to_move
        return Status(True, (1.0, -1.0) if winner == 0 else (-1.0, 1.0))

    def symmetries(self) -> list:
        # identity only; heap-permutation symmetry deliberately omitted
        ident = tuple(range(self.num_cells))
        return [SymmetryTransform(0, ident, tuple(range(self.num_actions)))]

    def adjacency(self) -> list:
        # heaps form a path so random walks can reach every cell
        n = self.num_cells
        return [[j for j in (i - 1, i + 1) if 0 <= j < n] for i in range(n)]

    def action_name(self, action: int) -> str:
        heap, count = self.decode_action(action)
        return f"take {count} from heap {heap}"

    def render(self, state: GameState) -> str:
        return "\n".join(
            f"heap {i}: {'|' * v} ({v})" for i, v in enumerate(state.cells)
        )


@dataclass(frozen=True)
class Winning:
    action: int


class Losing:
    def __repr__(self):
        return "Losing"


LOSING = Losing()


class BoutonAgent:
    """Perfect Nim play from Bouton's theory; random among legal moves in
    lost positions (every move there is equally hopeless)."""

    name = "bouton"
    is_trainable = False

    def choose_action(self, state: GameState, rng: random.Random):
        actions = state.game.legal_actions(state)
        mover = state.to_move
        estimates = {}
        for a in actions:
            nxt = state.game.apply_action(state, a)
            win = nim_optimal_action(nxt) is LOSING or all(
                v == 0 for v in nxt.cells
            )
            v = 1.0 if win else -1.0
            estimates[a] = (v, -v) if mover == 0 else (-v, v)
        result = nim_optimal_action(state)
        if isinstance(result, Winning):
            return result.action, estimates
        return actions[rng.randrange(len(actions))], estimates

    def predict_value(self, state: GameState):
        if all(v == 0 for v in state.cells):
            return state.game.status(state).scores
        mover_wins = nim_optimal_action(state) is not LOSING
        v = 1.0 if mover_wins else -1.0
        return (v, -v) if state.to_move == 0 else (-v, v)


def nim_optimal_action(state: GameState) -> Union[Winning, Losing]:
    """Bouton's theory: the mover wins iff the XOR of heap sizes is nonzero,
    and any winning move restores XOR = 0."""
    game = state.game
    if not isinstance(game, Nim):
        raise GameMismatch(f"nim_optimal_action on {game.spec}")
    x = reduce(xor, state.cells, 0)
    if x == 0:
        return LOSING
    for heap, size in enumerate(state.cells):
        target = size ^ x
        if target < size:
            return Winning(game.encode_action(heap, size - target))
    raise AssertionError("nonzero XOR must admit a reducing move")
