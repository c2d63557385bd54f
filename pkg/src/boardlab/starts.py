"""Winnable start-position sets for evaluation.

A winnable start is a 1-ply position (one opening move played from the
initial board) together with the seat that can force a win from it.  For
small exactly solvable games (Nim, Tic-tac-toe) the sets are computed on
demand by exhaustive search; for 5x5 Hex they come from a versioned data
file produced offline by tools/solve_hex5.py.
"""
from __future__ import annotations

import json
from functools import reduce
from importlib import resources
from operator import xor
from typing import List, Tuple

from .core import Game, GameState
from .agents.maxn import _maxn_value, _zero_leaf
from .games.nim import Nim


def winnable_starts(game: Game) -> List[Tuple[GameState, int]]:
    """(start state, winning seat) for every decided 1-ply opening.

    Openings that are draws under perfect play are omitted (Tic-tac-toe
    therefore yields an empty set).
    """
    if game.spec.startswith("hex-"):
        return _hex_starts(game)
    if isinstance(game, Nim):
        return _nim_starts(game)
    return _solved_starts(game)


def _nim_starts(game: Nim) -> List[Tuple[GameState, int]]:
    s0 = game.initial_state()
    out = []
    for a in game.legal_actions(s0):
        s = game.apply_action(s0, a)
        if game.status(s).terminal:
            continue
        x = reduce(xor, s.cells, 0)
        # Bouton: the mover wins iff the heap XOR is nonzero
        winner = s.to_move if x != 0 else 1 - s.to_move
        out.append((s, winner))
    return out


def nim_losing_starts(game: Nim) -> List[GameState]:
    """1-ply positions where the player to move is lost (XOR = 0)."""
    return [s for s, seat in _nim_starts(game) if seat != s.to_move]


def _solved_starts(game: Game) -> List[Tuple[GameState, int]]:
    if game.players != 2 or game.stochastic:
        raise ValueError(f"no winnable-start generator for {game.spec}")
    s0 = game.initial_state()
    out = []
    for a in game.legal_actions(s0):
        s = game.apply_action(s0, a)
        if game.status(s).terminal:
            continue
        value = _maxn_value(s, None, _zero_leaf, {})
        winners = [p for p in range(2) if value[p] > 0]
        if winners:
            out.append((s, winners[0]))
    return out


def _hex_starts(game: Game) -> List[Tuple[GameState, int]]:
    if game.spec != "hex-5":
        raise ValueError(f"no winnable-starts data for {game.spec}; only hex-5 ships solved openings")
    data = json.loads(
        resources.files("boardlab.data").joinpath("hex5_openings.json").read_text()
    )
    s0 = game.initial_state()
    out = []
    for a_str, winner in data["openings"].items():
        s = game.apply_action(s0, int(a_str))
        out.append((s, 0 if winner == "black" else 1))
    return out
