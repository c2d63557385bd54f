"""Exhaustively solves all opening moves of k x k Hex (default k = 5).

Writes src/boardlab/data/hex5_openings.json mapping each opening cell
(Black's first stone, row-major index) to the side that wins with perfect
play from there ("black" means the opener's win stands).

Positions are bitboards (one k*k-bit mask per color).  The search is a
plain win/loss negamax with a transposition table keyed on the rot180
canonical form of the position (the board's only symmetry).  To bound
memory the table only stores positions with few stones; deep positions
are cheap to re-search.  Openings are solved center-first and share one
table, so later openings reuse most of the earlier work.

Usage: python3 tools/solve_hex5.py [k] [--check]
  --check   also verify the result against the exact game-tree search
            of the boardlab Hex game (feasible for k <= 3)
"""
from __future__ import annotations

import json
import os
import sys
import time

import numpy as np
from numba import njit
from numba.types import uint8

NEIGHBOR_OFFSETS = ((0, 1), (0, -1), (-1, 1), (-1, 0), (1, 0), (1, -1))

# Fixed-size lossy transposition table (bounded memory, unlike a dict):
# 2^27 slots x (key u64 + value u8 + stones u8) ~ 1.3 GB.  Each position
# hashes to an even/odd slot pair: the even slot keeps the shallowest
# entry seen (most expensive to recompute), the odd slot always replaces.
TT_BITS = 27
TT_MULT = np.uint64(0x9E3779B97F4A7C15)
TT_MISS = uint8(255)


def _masks(k: int):
    n = k * k
    nb = np.zeros(n, dtype=np.uint64)
    for i in range(n):
        r, c = divmod(i, k)
        m = 0
        for dr, dc in NEIGHBOR_OFFSETS:
            rr, cc = r + dr, c + dc
            if 0 <= rr < k and 0 <= cc < k:
                m |= 1 << (rr * k + cc)
        nb[i] = m
    top = np.uint64((1 << k) - 1)
    bottom = np.uint64(((1 << k) - 1) << (k * (k - 1)))
    left = np.uint64(sum(1 << (r * k) for r in range(k)))
    right = np.uint64(sum(1 << (r * k + k - 1) for r in range(k)))
    order = np.array(
        sorted(range(n), key=lambda i: abs(i // k - k // 2) + abs(i % k - k // 2)),
        dtype=np.int64,
    )
    return nb, top, bottom, left, right, order


@njit(cache=True)
def _reach(n, stones, edge, nb):
    """Stones connected to `edge` through same-colored stones, as a mask."""
    reach = stones & edge
    grown = True
    while grown:
        grown = False
        for i in range(n):
            if (reach >> np.uint64(i)) & np.uint64(1):
                add = nb[i] & stones & ~reach
                if add:
                    reach |= add
                    grown = True
    return reach


@njit(cache=True)
def _rot180(n, mask):
    out = np.uint64(0)
    for i in range(n):
        if (mask >> np.uint64(i)) & np.uint64(1):
            out |= np.uint64(1) << np.uint64(n - 1 - i)
    return out


@njit(cache=True)
def _key(n, black, white, player):
    a = black | (white << np.uint64(n))
    b = _rot180(n, black) | (_rot180(n, white) << np.uint64(n))
    small = a if a < b else b
    return small | (np.uint64(player) << np.uint64(2 * n))


@njit(cache=True)
def _tt_get(keys, vals, key):
    i = np.int64((key * TT_MULT) >> np.uint64(64 - TT_BITS)) & ~np.int64(1)
    if keys[i] == key:
        return vals[i]
    if keys[i + 1] == key:
        return vals[i + 1]
    return TT_MISS


@njit(cache=True)
def _tt_put(keys, vals, depths, key, val, stones):
    i = np.int64((key * TT_MULT) >> np.uint64(64 - TT_BITS)) & ~np.int64(1)
    if keys[i] == key or keys[i] == 0 or depths[i] >= stones:
        keys[i] = key
        vals[i] = val
        depths[i] = stones
    else:
        keys[i + 1] = key
        vals[i + 1] = val
        depths[i + 1] = stones


@njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - np.uint64(1)
        c += 1
    return c


@njit  # no cache: numba cannot reliably cache self-recursive functions
def _mover_wins(n, black, white, player, nb, top, bottom, left, right, hist, keys, vals, depths):
    stones = _popcount(black | white)
    key = _key(n, black, white, player)
    cached = _tt_get(keys, vals, key)
    if cached != TT_MISS:
        return cached == 1
    occupied = black | white
    seeds = top if player == 0 else left
    goal = bottom if player == 0 else right
    opp_seeds = left if player == 0 else top
    opp_goal = right if player == 0 else bottom
    own_mask = black if player == 0 else white
    opp_mask = white if player == 0 else black
    win = False
    win_cell = -1
    # pass 1: immediate winning placements; also collect the opponent's
    # immediate wins.  A single placement at x wins iff x touches (or is)
    # both an edge-connected group and the far edge, so two floods per
    # color answer every cell.  A threat at x runs through opponent stones
    # plus x only, so the sole defense is occupying x itself: two or more
    # threats lose outright, exactly one forces the reply.
    own_a = _reach(n, own_mask, seeds, nb)
    own_b = _reach(n, own_mask, goal, nb)
    one = np.uint64(1)
    for c in range(n):
        if (occupied >> np.uint64(c)) & one:
            continue
        bit = one << np.uint64(c)
        if ((seeds & bit) or (nb[c] & own_a)) and ((goal & bit) or (nb[c] & own_b)):
            win = True
            win_cell = c
            break
    threat = -1
    threats = 0
    if not win:
        opp_a = _reach(n, opp_mask, opp_seeds, nb)
        opp_b = _reach(n, opp_mask, opp_goal, nb)
        for c in range(n):
            if (occupied >> np.uint64(c)) & one:
                continue
            bit = one << np.uint64(c)
            if ((opp_seeds & bit) or (nb[c] & opp_a)) and (
                (opp_goal & bit) or (nb[c] & opp_b)
            ):
                threats += 1
                threat = c
                if threats >= 2:
                    break
    if not win and threats < 2:
        # pass 2: recurse, forced reply or best history first
        tried = np.zeros(n, np.uint8)
        while True:
            if threats == 1:
                best = -1 if tried[threat] else threat
            else:
                best = -1
                best_h = -1.0
                for c in range(n):
                    if tried[c] or ((occupied >> np.uint64(c)) & np.uint64(1)):
                        continue
                    if hist[player, c] > best_h:
                        best_h = hist[player, c]
                        best = c
            if best == -1:
                break
            tried[best] = 1
            bit = np.uint64(1) << np.uint64(best)
            if player == 0:
                lost = _mover_wins(n, black | bit, white, 1, nb, top, bottom, left, right, hist, keys, vals, depths)
            else:
                lost = _mover_wins(n, black, white | bit, 0, nb, top, bottom, left, right, hist, keys, vals, depths)
            if not lost:
                win = True
                win_cell = best
                break
    if win:
        depth = n - stones
        hist[player, win_cell] += depth * depth
    _tt_put(keys, vals, depths, key, uint8(1) if win else uint8(0), uint8(stones))
    return win


def solve(k: int, log=print) -> dict:
    nb, top, bottom, left, right, order = _masks(k)
    n = k * k
    tt_keys = np.zeros(1 << TT_BITS, np.uint64)
    tt_vals = np.zeros(1 << TT_BITS, np.uint8)
    tt_depths = np.zeros(1 << TT_BITS, np.uint8)
    # seed history with center-out preference so early ordering is sane
    hist = np.zeros((2, n), np.float64)
    for rank, cell in enumerate(order):
        hist[0, cell] = hist[1, cell] = float(n - rank) * 1e-6
    openings = {}
    t0 = time.time()
    for cell in order:  # center first: shares the most table entries
        cell = int(cell)
        bit = np.uint64(1) << np.uint64(cell)
        # after Black opens at `cell`, White moves; Black wins iff White loses
        white_wins = _mover_wins(
            n, bit, np.uint64(0), 1, nb, top, bottom, left, right, hist,
            tt_keys, tt_vals, tt_depths,
        )
        openings[str(cell)] = "white" if white_wins else "black"
        log(
            f"opening {cell:2d} ({chr(ord('a') + cell % k)}{cell // k + 1}): "
            f"{openings[str(cell)]}  [t={time.time() - t0:.1f}s]"
        )
    return openings


def check_small(k: int, openings: dict) -> None:
    sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))
    from boardlab.agents.maxn import _maxn_value, _zero_leaf
    from boardlab.games import get_game

    game = get_game(f"hex-{k}")
    s0 = game.initial_state()
    for cell in range(k * k):
        s = game.apply_action(s0, cell)
        if game.status(s).terminal:
            continue
        value = _maxn_value(s, None, _zero_leaf, {})
        expected = "black" if value[0] > 0 else "white"
        assert openings[str(cell)] == expected, (cell, openings[str(cell)], expected)
    print(f"check ok: exact search agrees on all {k * k} openings")


def main() -> None:
    args = [a for a in sys.argv[1:] if a != "--check"]
    k = int(args[0]) if args else 5
    openings = solve(k, log=lambda s: print(s, flush=True))
    if "--check" in sys.argv:
        check_small(k, openings)
    if k == 5:
        out_path = os.path.abspath(
            os.path.join(
                os.path.dirname(__file__), "..", "src", "boardlab", "data",
                "hex5_openings.json",
            )
        )
        with open(out_path, "w") as f:
            json.dump(
                {"game": "hex-5", "openings": {str(c): openings[str(c)] for c in range(25)}},
                f,
                indent=2,
            )
        print(f"wrote {out_path}")


if __name__ == "__main__":
    sys.setrecursionlimit(100000)
    main()
