"""The 1-player sliding-tile game 2048 on a 4x4 board.

Cells store tile exponents (0 = empty, t = log2(tile value)), so L = 16.
Applying an action yields an *afterstate*: the board after sliding and
merging but before the environment spawns the random tile.  Chance
outcomes enumerate every empty cell with a 2-tile (p = 0.9/k) or a 4-tile
(p = 0.1/k).
"""
from __future__ import annotations

import random
from typing import Optional

from ..core import (
    ChanceOutcome,
    ContractViolation,
    Game,
    GameState,
    IllegalAction,
    Status,
    SymmetryTransform,
    square_d4_cell_maps,
)

SIDE = 4
NUM_CELLS = 16
LEFT, UP, RIGHT, DOWN = range(4)
DIRECTION_NAMES = ("left", "up", "right", "down")


def _merge_line(line):
    """Slide one 4-cell line toward index 0 and merge equal adjacent pairs
    once each, in slide order.  Returns (new line, reward)."""
    tiles = [v for v in line if v != 0]
    out = []
    reward = 0
    i = 0
    while i < len(tiles):
        if i + 1 < len(tiles) and tiles[i] == tiles[i + 1]:
            out.append(tiles[i] + 1)
            reward += 2 ** (tiles[i] + 1)
            i += 2
        else:
            out.append(tiles[i])
            i += 1
    out.extend([0] * (SIDE - len(out)))
    return out, reward


# cell index sequences for each direction: each line is traversed starting
# from the edge the tiles slide toward
_LINES = {
    LEFT: [[r * SIDE + c for c in range(SIDE)] for r in range(SIDE)],
    RIGHT: [[r * SIDE + c for c in range(SIDE - 1, -1, -1)] for r in range(SIDE)],
    UP: [[r * SIDE + c for r in range(SIDE)] for c in range(SIDE)],
    DOWN: [[r * SIDE + c for r in range(SIDE - 1, -1, -1)] for c in range(SIDE)],
}


def shift_merge_2048(cells, direction: int):
    """Standard 2048 move semantics.  Returns (cells', reward); the move is
    legal iff cells' differs from cells (checked by the caller)."""
    if direction not in (LEFT, UP, RIGHT, DOWN):
        raise IllegalAction(direction, "direction must be 0..3")
    out = list(cells)
    reward = 0
    for line in _LINES[direction]:
        merged, r = _merge_line([cells[i] for i in line])
        reward += r
        for idx, v in zip(line, merged):
            out[idx] = v
    return tuple(out), reward


class Game2048(Game):
    spec = "2048"
    players = 1
    num_cells = NUM_CELLS
    num_actions = 4
    L = 16
    stochastic = True

    def initial_state(self, rng: Optional[random.Random] = None) -> GameState:
        rng = rng if rng is not None else random.Random()
        after = GameState(self, (0,) * NUM_CELLS, 0, 0, (0.0,), is_afterstate=True)
        s = self.sample_chance(after, rng)
        after = GameState(self, s.cells, 0, 0, (0.0,), is_afterstate=True)
        return self.sample_chance(after, rng)

    def legal_actions(self, state: GameState) -> list:
        self._check_own(state)
        out = []
        for d in range(4):
            cells, _ = shift_merge_2048(state.cells, d)
            if cells != state.cells:
                out.append(d)
        return out

    def apply_action(self, state: GameState, action: int) -> GameState:
        cells, reward = shift_merge_2048(state.cells, action)
        if cells == state.cells:
            raise IllegalAction(action, f"'{DIRECTION_NAMES[action]}' does not move")
        return GameState(
            self,
            cells,
            0,
            state.move_count + 1,
            (state.cumulative_reward[0] + reward,),
            is_afterstate=True,
        )

    def chance_outcomes(self, afterstate: GameState) -> list:
        if not afterstate.is_afterstate:
            raise ContractViolation("chance_outcomes needs an afterstate")
        empties = [i for i, v in enumerate(afterstate.cells) if v == 0]
        if not empties:
            raise ContractViolation("2048 afterstate must have an empty cell")
        k = len(empties)
        out = []
        for i in empties:
            for exponent, p in ((1, 0.9 / k), (2, 0.1 / k)):
                cells = list(afterstate.cells)
                cells[i] = exponent
                out.append(
                    ChanceOutcome(
                        GameState(
                            self,
                            tuple(cells),
                            0,
                            afterstate.move_count,
                            afterstate.cumulative_reward,
                        ),
                        p,
                    )
                )
        return out

    def sample_chance(self, afterstate: GameState, rng: random.Random) -> GameState:
        empties = [i for i, v in enumerate(afterstate.cells) if v == 0]
        cell = empties[rng.randrange(len(empties))]
        exponent = 1 if rng.random() < 0.9 else 2
        cells = list(afterstate.cells)
        cells[cell] = exponent
        return GameState(
            self,
            tuple(cells),
            0,
            afterstate.move_count,
            afterstate.cumulative_reward,
        )

    def status(self, state: GameState) -> Status:
        for d in range(4):
            cells, _ = shift_merge_2048(state.cells, d)
            if cells != state.cells:
                return Status(False)
        return Status(True, state.cumulative_reward)

    _syms: Optional[list] = None

    def symmetries(self) -> list:
        if Game2048._syms is None:
            Game2048._syms = [
                SymmetryTransform(i, cell_map, _derive_action_map(cell_map))
                for i, cell_map in enumerate(square_d4_cell_maps(SIDE))
            ]
        return list(Game2048._syms)

    def adjacency(self) -> list:
        nbrs = []
        for r in range(SIDE):
            for c in range(SIDE):
                cur = []
                for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)):
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < SIDE and 0 <= cc < SIDE:
                        cur.append(rr * SIDE + cc)
                nbrs.append(cur)
        return nbrs

    def action_name(self, action: int) -> str:
        return DIRECTION_NAMES[action]

    def rollout(self, state, rng):
        # delegate to the compiled kernel; falls back to the generic playout
        from .. import fastpath

        if not hasattr(fastpath, "rollout_2048_from"):
            return super().rollout(state, rng)
        return (fastpath.rollout_2048_from(state, rng),)

    def render(self, state: GameState) -> str:
        rows = []
        for r in range(SIDE):
            rows.append(
                "".join(
                    f"{(2 ** v if v else 0):>6d}"
                    for v in state.cells[r * SIDE : (r + 1) * SIDE]
                )
            )
        rows.append(f"score: {state.cumulative_reward[0]:.0f}")
        return "\n".join(rows)


def _derive_action_map(cell_map) -> tuple:
    """Find, for each slide direction, the equivalent direction on the
    transformed board, by checking the commutation property on probe boards."""
    probes = [
        tuple(random.Random(seed).randrange(0, 4) for _ in range(NUM_CELLS))
        for seed in (11, 23, 47)
    ]
    mapping = []
    for d in range(4):
        candidates = []
        for d2 in range(4):
            ok = True
            for cells in probes:
                moved, _ = shift_merge_2048(cells, d)
                transformed = tuple(cells[j] for j in cell_map)
                moved2, _ = shift_merge_2048(transformed, d2)
                if tuple(moved[j] for j in cell_map) != moved2:
                    ok = False
                    break
            if ok:
                candidates.append(d2)
        assert len(candidates) == 1, f"ambiguous direction map {candidates}"
        mapping.append(candidates[0])
    return tuple(mapping)
