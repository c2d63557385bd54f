"""Game abstraction shared by every game and every agent.

A game exposes immutable states, dense integer actions, per-player score
tuples, explicit chance outcomes (for nondeterministic games), and a set of
board symmetries.  Everything downstream -- tree search, n-tuple learning,
the arena, the service -- talks to games only through this module's types.
"""
from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

ScoreTuple = tuple  # tuple[float, ...], one entry per player

DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class ContractViolation(Exception):
    """An operation was called outside its stated precondition."""


class IllegalAction(Exception):
    """An action outside legal_actions(state) was applied."""

    def __init__(self, action: int, detail: str = ""):
        self.action = action
        super().__init__(f"illegal action {action}" + (f": {detail}" if detail else ""))


class GameMismatch(Exception):
    """A state, transform, or file belongs to a different game."""


@dataclass(frozen=True)
class SymmetryTransform:
    """A board symmetry as a pair of permutations.

    ``cell_map`` is a gather: ``transformed.cells[i] == cells[cell_map[i]]``.
    ``action_map[a]`` is the action on the transformed board equivalent to
    action ``a`` on the original board.
    """

    id: int
    cell_map: tuple
    action_map: tuple


@dataclass(frozen=True)
class GameState:
    """Immutable snapshot of a position.

    ``is_afterstate`` is True only for nondeterministic games, between the
    agent's action and the environment's chance event.
    """

    game: "Game"
    cells: tuple
    to_move: int
    move_count: int
    cumulative_reward: ScoreTuple
    is_afterstate: bool = False

    def key(self):
        """Hashable identity of the position (ignores accumulated reward)."""
        return (self.game.spec, self.cells, self.to_move, self.is_afterstate)


@dataclass(frozen=True)
class Status:
    terminal: bool
    scores: Optional[ScoreTuple] = None  # final per-player values when terminal


@dataclass(frozen=True)
class ChanceOutcome:
    state: GameState
    probability: float


class Game(ABC):
    """Rules of one concrete game.  Instances are stateless and immutable."""

    spec: str          # canonical id including parameters, e.g. "nim-3,4,5"
    players: int
    num_cells: int
    num_actions: int
    L: int             # states per cell; every reachable cell value is < L
    stochastic: bool = False

    # -- rules ------------------------------------------------------------

    @abstractmethod
    def initial_state(self, rng: Optional[random.Random] = None) -> GameState:
        ...

    @abstractmethod
    def legal_actions(self, state: GameState) -> list:
        """Sorted action ids; empty iff terminal.  Not defined on afterstates."""

    @abstractmethod
    def apply_action(self, state: GameState, action: int) -> GameState:
        ...

    @abstractmethod
    def status(self, state: GameState) -> Status:
        ...

    def chance_outcomes(self, afterstate: GameState) -> list:
        raise ContractViolation(f"{self.spec} is deterministic; no chance outcomes")

    # -- structure --------------------------------------------------------

    @abstractmethod
    def symmetries(self) -> list:
        """The game's symmetry group (always contains the identity)."""

    @abstractmethod
    def adjacency(self) -> list:
        """Neighbor lists over cell indices, used for random-walk n-tuples."""

    @abstractmethod
    def action_name(self, action: int) -> str:
        ...

    @abstractmethod
    def render(self, state: GameState) -> str:
        ...

    # -- shared helpers ---------------------------------------------------

    def _check_own(self, state: GameState) -> None:
        if state.game is not self and state.game.spec != self.spec:
            raise GameMismatch(f"state of {state.game.spec} passed to {self.spec}")

    def _check_action(self, state: GameState, action: int) -> None:
        if action not in self.legal_actions(state):
            raise IllegalAction(action, f"not legal in {to_line(state)}")

    def sample_chance(self, afterstate: GameState, rng: random.Random) -> GameState:
        """Draw one chance outcome; default enumerates and samples."""
        outcomes = self.chance_outcomes(afterstate)
        r = rng.random()
        acc = 0.0
        for out in outcomes:
            acc += out.probability
            if r < acc:
                return out.state
        return outcomes[-1].state

    def rollout(self, state: GameState, rng: random.Random) -> ScoreTuple:
        """Uniform-random playout to a terminal state; returns final scores.

        Games may override this with a faster equivalent implementation.
        """
        s = state
        while True:
            if s.is_afterstate:
                s = self.sample_chance(s, rng)
                continue
            st = self.status(s)
            if st.terminal:
                return st.scores
            actions = self.legal_actions(s)
            s = self.apply_action(s, actions[rng.randrange(len(actions))])

    def __eq__(self, other):
        return isinstance(other, Game) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    def __repr__(self):
        return f"<Game {self.spec}>"


# ---------------------------------------------------------------------------
# Module-level operations (thin dispatch onto the state's game).
# ---------------------------------------------------------------------------

def legal_actions(state: GameState) -> list:
    if state.is_afterstate:
        raise ContractViolation("legal_actions called on an afterstate")
    return state.game.legal_actions(state)


def apply_action(state: GameState, action: int) -> GameState:
    if state.is_afterstate:
        raise ContractViolation("apply_action called on an afterstate")
    return state.game.apply_action(state, action)


def chance_outcomes(afterstate: GameState) -> list:
    if not afterstate.is_afterstate:
        raise ContractViolation("chance_outcomes called on a non-afterstate")
    return afterstate.game.chance_outcomes(afterstate)


def status(state: GameState) -> Status:
    if state.is_afterstate:
        raise ContractViolation("status called on an afterstate")
    return state.game.status(state)


def symmetries(game: Game) -> list:
    return game.symmetries()


def apply_symmetry(state: GameState, t: SymmetryTransform) -> GameState:
    if len(t.cell_map) != len(state.cells):
        raise GameMismatch(
            f"transform over {len(t.cell_map)} cells applied to "
            f"{len(state.cells)}-cell state"
        )
    cells = tuple(state.cells[j] for j in t.cell_map)
    return GameState(
        game=state.game,
        cells=cells,
        to_move=state.to_move,
        move_count=state.move_count,
        cumulative_reward=state.cumulative_reward,
        is_afterstate=state.is_afterstate,
    )


def zeros(n: int) -> ScoreTuple:
    return (0.0,) * n


# ---------------------------------------------------------------------------
# Canonical one-line textual serialization (logs, fixtures, wire protocol).
# Format: "<game-spec> <cells> <to_move> <move_count>[ a]"
# Cells are base-L digits when L <= 36, comma-separated integers otherwise.
# The trailing "a" marks an afterstate.
# ---------------------------------------------------------------------------

def cells_to_text(cells: Sequence[int], L: int) -> str:
    if L <= len(DIGITS):
        return "".join(DIGITS[v] for v in cells)
    return ",".join(str(v) for v in cells)


def cells_from_text(text: str, L: int, n: int) -> tuple:
    if L <= len(DIGITS):
        if len(text) != n:
            raise ValueError(f"expected {n} cell digits, got {len(text)}")
        return tuple(DIGITS.index(c) for c in text)
    values = tuple(int(v) for v in text.split(","))
    if len(values) != n:
        raise ValueError(f"expected {n} cells, got {len(values)}")
    return values


def to_line(state: GameState) -> str:
    line = (
        f"{state.game.spec} {cells_to_text(state.cells, state.game.L)} "
        f"{state.to_move} {state.move_count}"
    )
    return line + " a" if state.is_afterstate else line


def from_line(line: str) -> GameState:
    """Parse a canonical line.  Cumulative reward is not part of the line
    and is restored as zeros."""
    from .games import get_game  # local import: games depend on core

    parts = line.split()
    if len(parts) not in (4, 5):
        raise ValueError(f"malformed state line: {line!r}")
    game = get_game(parts[0])
    cells = cells_from_text(parts[1], game.L, game.num_cells)
    return GameState(
        game=game,
        cells=cells,
        to_move=int(parts[2]),
        move_count=int(parts[3]),
        cumulative_reward=zeros(game.players),
        is_afterstate=len(parts) == 5 and parts[4] == "a",
    )


# ---------------------------------------------------------------------------
# Square-board symmetry helpers (shared by Tic-tac-toe and 2048).
# ---------------------------------------------------------------------------

def square_d4_cell_maps(side: int) -> list:
    """Gather arrays for the 8 transforms of the dihedral group on a
    side x side board, in a fixed order: 4 rotations, then the 4 mirrored
    rotations.  Element 0 is the identity."""
    def gather(fn):
        out = [0] * (side * side)
        for r in range(side):
            for c in range(side):
                sr, sc = fn(r, c)
                out[r * side + c] = sr * side + sc
        return tuple(out)

    n = side - 1
    # (r, c) of the transformed board -> source (r, c) on the original
    sources = [
        lambda r, c: (r, c),                # identity
        lambda r, c: (c, n - r),            # rot 90 ccw
        lambda r, c: (n - r, n - c),        # rot 180
        lambda r, c: (n - c, r),            # rot 270 ccw
        lambda r, c: (r, n - c),            # mirror columns
        lambda r, c: (c, r),                # transpose
        lambda r, c: (n - r, c),            # mirror rows
        lambda r, c: (n - c, n - r),        # anti-transpose
    ]
    return [gather(fn) for fn in sources]


def inverse_permutation(perm: Iterable[int]) -> tuple:
    perm = tuple(perm)
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return tuple(inv)
