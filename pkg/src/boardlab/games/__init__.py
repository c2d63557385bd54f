"""Concrete games and the registry that resolves game spec strings.

Spec strings: ``tictactoe``, ``nim-3,4,5``, ``hex-5``, ``connect4``,
``connect4-l3``, ``2048``.
"""
from __future__ import annotations

import random
from typing import Optional

from ..core import Game, GameState
from .connect4 import Connect4, connect4_winner
from .game2048 import Game2048, shift_merge_2048
from .hexgame import Hex, hex_winner
from .nim import LOSING, Losing, Nim, Winning, nim_optimal_action
from .tictactoe import TicTacToe

__all__ = [
    "Connect4",
    "Game2048",
    "Hex",
    "LOSING",
    "Losing",
    "Nim",
    "TicTacToe",
    "Winning",
    "available_games",
    "connect4_winner",
    "get_game",
    "hex_winner",
    "new_game",
    "nim_optimal_action",
    "shift_merge_2048",
]

_CACHE: dict = {}


def available_games() -> list:
    return ["tictactoe", "nim-<h1,h2,...>", "hex-<k>", "connect4", "connect4-l3", "2048"]


def get_game(spec: str) -> Game:
    """Resolve a game spec string to a (cached) game instance."""
    if spec in _CACHE:
        return _CACHE[spec]
    if spec in ("tictactoe", "ttt"):
        game: Game = TicTacToe()
    elif spec == "2048":
        game = Game2048()
    elif spec == "connect4":
        game = Connect4()
    elif spec == "connect4-l3":
        game = Connect4(reachable_encoding=False)
    elif spec.startswith("hex-"):
        game = Hex(int(spec[4:]))
    elif spec.startswith("nim-"):
        game = Nim([int(h) for h in spec[4:].split(",")])
    else:
        raise ValueError(
            f"unknown game {spec!r}; available: {', '.join(available_games())}"
        )
    _CACHE[game.spec] = game
    return game


def new_game(spec: str, rng: Optional[random.Random] = None) -> GameState:
    """Fresh initial state for the given game spec."""
    return get_game(spec).initial_state(rng)
