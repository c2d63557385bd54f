"""Compiled (numba) fast paths for rollouts and self-play training.

The generic Python implementations in :mod:`boardlab.ntuple.training` and
:meth:`boardlab.core.Game.rollout` remain the reference; these kernels are
drop-in accelerations for the games where throughput matters (2048,
Connect-4, Hex, Tic-tac-toe) and are cross-checked against the generic
path in the test suite.

N-tuple evaluation uses a flattened (tuple x symmetry) source-cell layout
and Horner's rule for the base-L index, which avoids the per-position
power table entirely.  The temporal-coherence accumulators are interleaved
(columns N, A) so one weight's pair shares a cache line during updates.
"""
from __future__ import annotations

import random
import time

import numpy as np
from numba import njit

from .core import Game

GAME_TTT = 0
GAME_C4 = 1
GAME_HEX = 2

# line tables captured as compile-time constants by the kernels
_TTT_LINES = np.array(
    [[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [2, 4, 6]],
    dtype=np.int64,
)


def _c4_quads():
    quads = []
    for r in range(6):
        for c in range(7):
            for dr, dc in ((0, 1), (1, 0), (1, 1), (1, -1)):
                rr, cc = r + 3 * dr, c + 3 * dc
                if 0 <= rr < 6 and 0 <= cc < 7:
                    quads.append([(r + i * dr) * 7 + (c + i * dc) for i in range(4)])
    return np.array(quads, dtype=np.int64)


_C4_QUADS = _c4_quads()


# ---------------------------------------------------------------------------
# Cheap explicit-state PRNG for rollouts (seeding numpy's generator per call
# would dominate short playouts).  xorshift64*; state is a 1-element array.
# ---------------------------------------------------------------------------

@njit(cache=True)
def _rand01(rs):
    x = rs[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    rs[0] = x
    return np.float64(x * np.uint64(2685821657736338717) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _randint(rs, n):
    return np.int64(_rand01(rs) * n) % n


@njit(cache=True)
def _seed_state(seed):
    # splitmix64 scramble so nearby seeds give unrelated streams
    rs = np.empty(1, np.uint64)
    z = np.uint64(seed) + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    rs[0] = (z ^ (z >> np.uint64(31))) | np.uint64(1)
    return rs


# ---------------------------------------------------------------------------
# 2048 primitives
# ---------------------------------------------------------------------------

@njit(cache=True)
def _move_line_2048(cells, buf, start, step):
    reward = 0
    pos = 0
    last = -1
    for i in range(4):
        v = cells[start + i * step]
        if v == 0:
            continue
        if v == last:
            buf[start + (pos - 1) * step] = v + 1
            reward += 1 << (v + 1)
            last = -1
        else:
            buf[start + pos * step] = v
            last = v
            pos += 1
    for i in range(pos, 4):
        buf[start + i * step] = 0
    return reward


@njit(cache=True)
def _move_2048(cells, buf, d):
    """Slide/merge into ``buf``; returns (reward, changed)."""
    reward = 0
    if d == 0:       # left
        for r in range(4):
            reward += _move_line_2048(cells, buf, 4 * r, 1)
    elif d == 1:     # up
        for c in range(4):
            reward += _move_line_2048(cells, buf, c, 4)
    elif d == 2:     # right
        for r in range(4):
            reward += _move_line_2048(cells, buf, 4 * r + 3, -1)
    else:            # down
        for c in range(4):
            reward += _move_line_2048(cells, buf, 12 + c, -4)
    changed = False
    for i in range(16):
        if buf[i] != cells[i]:
            changed = True
            break
    return reward, changed


@njit(cache=True)
def _spawn_2048(cells, rs):
    k = 0
    for i in range(16):
        if cells[i] == 0:
            k += 1
    pick = _randint(rs, k)
    seen = 0
    for i in range(16):
        if cells[i] == 0:
            if seen == pick:
                cells[i] = 1 if _rand01(rs) < 0.9 else 2
                return
            seen += 1


@njit(cache=True)
def _rollout_2048(cells, score, rs):
    c = cells.copy()
    buf = np.empty(16, np.int64)
    legal = np.empty(4, np.int64)
    while True:
        n_legal = 0
        for d in range(4):
            _, changed = _move_2048(c, buf, d)
            if changed:
                legal[n_legal] = d
                n_legal += 1
        if n_legal == 0:
            return score
        d = legal[_randint(rs, n_legal)]
        r, _ = _move_2048(c, buf, d)
        for i in range(16):
            c[i] = buf[i]
        score += r
        _spawn_2048(c, rs)


@njit(cache=True)
def _rollout_2048_seeded(cells, score, seed):
    rs = _seed_state(seed)
    return _rollout_2048(cells, score, rs)


@njit(cache=True)
def _rollout_2048_after_seeded(cells, score, seed):
    rs = _seed_state(seed)
    c = cells.copy()
    _spawn_2048(c, rs)
    return _rollout_2048(c, score, rs)


def rollout_2048_from(state, rng: random.Random) -> float:
    cells = np.asarray(state.cells, dtype=np.int64)
    score = float(state.cumulative_reward[0])
    if state.is_afterstate:
        # resolve the pending spawn inside the kernel's own stream
        return float(_rollout_2048_after_seeded(cells, score, rng.getrandbits(31)))
    return float(_rollout_2048_seeded(cells, score, rng.getrandbits(31)))


# ---------------------------------------------------------------------------
# Two-player board primitives (Tic-tac-toe, Connect-4, Hex)
# ---------------------------------------------------------------------------

@njit(cache=True)
def _tp_init(game, k, cells):
    for i in range(cells.size):
        cells[i] = 0
    if game == GAME_C4:
        for c in range(7):
            cells[c] = 1  # bottom row reachable


@njit(cache=True)
def _tp_legal(game, k, cells, out):
    n = 0
    if game == GAME_C4:
        for c in range(7):
            for r in range(6):
                if cells[r * 7 + c] < 2:
                    out[n] = c
                    n += 1
                    break
    else:
        for i in range(cells.size):
            if cells[i] == 0:
                out[n] = i
                n += 1
    return n


@njit(cache=True)
def _tp_apply(game, k, cells, a, player):
    """Mutates cells; returns the cell index of the placed piece."""
    if game == GAME_C4:
        for r in range(6):
            i = r * 7 + a
            if cells[i] < 2:
                cells[i] = 2 + player
                if r < 5:
                    cells[i + 7] = 1
                return i
        return -1
    cells[a] = player + 1
    return a


@njit(cache=True)
def _hex_connected(cells, k, player):
    mark = player + 1
    stack = np.empty(k * k, np.int64)
    seen = np.zeros(k * k, np.uint8)
    top = 0
    if player == 0:
        for c in range(k):
            if cells[c] == mark:
                stack[top] = c
                top += 1
                seen[c] = 1
    else:
        for r in range(k):
            if cells[r * k] == mark:
                stack[top] = r * k
                top += 1
                seen[r * k] = 1
    while top > 0:
        top -= 1
        cur = stack[top]
        r = cur // k
        c = cur % k
        if player == 0 and r == k - 1:
            return True
        if player == 1 and c == k - 1:
            return True
        for j in range(6):
            if j == 0:
                rr, cc = r, c + 1
            elif j == 1:
                rr, cc = r, c - 1
            elif j == 2:
                rr, cc = r - 1, c + 1
            elif j == 3:
                rr, cc = r - 1, c
            elif j == 4:
                rr, cc = r + 1, c
            else:
                rr, cc = r + 1, c - 1
            if 0 <= rr < k and 0 <= cc < k:
                nb = rr * k + cc
                if seen[nb] == 0 and cells[nb] == mark:
                    seen[nb] = 1
                    stack[top] = nb
                    top += 1
    return False


@njit(cache=True)
def _tp_result(game, k, cells, placed, player):
    """After ``player`` placed at cell index ``placed``:
    1 = player won, 0 = draw, -1 = ongoing."""
    if game == GAME_TTT:
        mark = player + 1
        for li in range(8):
            if (
                cells[_TTT_LINES[li, 0]] == mark
                and cells[_TTT_LINES[li, 1]] == mark
                and cells[_TTT_LINES[li, 2]] == mark
            ):
                return 1
        for i in range(9):
            if cells[i] == 0:
                return -1
        return 0
    if game == GAME_C4:
        mark = 2 + player
        for qi in range(_C4_QUADS.shape[0]):
            if (
                cells[_C4_QUADS[qi, 0]] == mark
                and cells[_C4_QUADS[qi, 1]] == mark
                and cells[_C4_QUADS[qi, 2]] == mark
                and cells[_C4_QUADS[qi, 3]] == mark
            ):
                return 1
        for i in range(42):
            if cells[i] < 2:
                return -1
        return 0
    # Hex: only the mover can have completed a chain; no draws exist
    if _hex_connected(cells, k, player):
        return 1
    return -1


@njit(cache=True)
def _tp_winner(game, k, cells):
    """Full-board scan: 0/1 winner, -1 none."""
    if game == GAME_HEX:
        if _hex_connected(cells, k, 0):
            return 0
        if _hex_connected(cells, k, 1):
            return 1
        return -1
    if game == GAME_TTT:
        for li in range(8):
            v = cells[_TTT_LINES[li, 0]]
            if v != 0 and v == cells[_TTT_LINES[li, 1]] and v == cells[_TTT_LINES[li, 2]]:
                return v - 1
        return -1
    for qi in range(_C4_QUADS.shape[0]):
        v = cells[_C4_QUADS[qi, 0]]
        if (
            v >= 2
            and v == cells[_C4_QUADS[qi, 1]]
            and v == cells[_C4_QUADS[qi, 2]]
            and v == cells[_C4_QUADS[qi, 3]]
        ):
            return v - 2
    return -1


@njit(cache=True)
def _tp_rollout(game, k, cells, to_move, seed):
    """Uniform-random playout; returns player 0's final value (+1/-1/0)."""
    rs = _seed_state(seed)
    c = cells.copy()
    w = _tp_winner(game, k, c)
    if w == 0:
        return 1.0
    if w == 1:
        return -1.0
    legal = np.empty(c.size, np.int64)
    player = to_move
    while True:
        n = _tp_legal(game, k, c, legal)
        if n == 0:
            return 0.0
        a = legal[_randint(rs, n)]
        placed = _tp_apply(game, k, c, a, player)
        res = _tp_result(game, k, c, placed, player)
        if res == 1:
            return 1.0 if player == 0 else -1.0
        if res == 0:
            return 0.0
        player = 1 - player


# ---------------------------------------------------------------------------
# N-tuple evaluation: flat reversed source-cell lists + Horner indices
# ---------------------------------------------------------------------------

@njit(cache=True)
def _nt_raw(cells, srcf, starts, offs, L, w):
    total = 0.0
    for p in range(offs.size):
        idx = np.int64(0)
        for j in range(starts[p], starts[p + 1]):
            idx = idx * L + cells[srcf[j]]
        total += w[offs[p] + idx]
    return total


@njit(cache=True)
def _nt_features(cells, srcf, starts, offs, L, out):
    for p in range(offs.size):
        idx = np.int64(0)
        for j in range(starts[p], starts[p + 1]):
            idx = idx * L + cells[srcf[j]]
        out[p] = offs[p] + idx


@njit(cache=True)
def _nt_raw_of_feats(feats, w):
    total = 0.0
    for p in range(feats.size):
        total += w[feats[p]]
    return total


@njit(cache=True)
def _apply_td(w, tc, tc_on, ring, head, count, lam, alt, base, signal, beta):
    """Scatter one TD step over the trace ring.

    ``base`` = alpha * delta * dsquash / (m * nsym); ``signal`` = delta.
    Ring row ``head`` is the most recent feature set (decay 1).
    """
    H, P = ring.shape
    for kk in range(count):
        row = (head - kk) % H
        decay = lam ** kk if kk > 0 else 1.0
        if alt and kk % 2 == 1:
            decay = -decay
        for p in range(P):
            i = ring[row, p]
            if tc_on:
                aa = tc[i, 1]
                rr = abs(tc[i, 0]) / aa if aa > 0 else 1.0
                w[i] += base * decay * np.exp(beta * (rr - 1.0))
                sig = signal * decay
                tc[i, 0] += sig
                tc[i, 1] += abs(sig)
            else:
                w[i] += base * decay


# ---------------------------------------------------------------------------
# Training and greedy-play kernels
# ---------------------------------------------------------------------------

@njit(cache=True)
def train_2048_kernel(
    w, tc, tc_on, srcf, starts, offs, L, nsym, m,
    alpha, beta, lam, H, eps_start, eps_step, sarsa, episodes, seed,
):
    rs = _seed_state(seed)
    P = offs.size
    ring = np.zeros((H, P), np.int64)
    buf = np.empty(16, np.int64)
    bufg = np.empty(16, np.int64)
    bufb = np.empty(16, np.int64)
    cells = np.zeros(16, np.int64)
    legal = np.empty(4, np.int64)
    total_moves = 0
    total_score = 0.0
    for ep in range(episodes):
        eps = eps_start + eps_step * ep
        for i in range(16):
            cells[i] = 0
        _spawn_2048(cells, rs)
        _spawn_2048(cells, rs)
        score = 0.0
        head = -1
        count = 0
        have_prev = False
        while True:
            n_legal = 0
            best_v = -1e300
            best_d = -1
            for d in range(4):
                r, changed = _move_2048(cells, buf, d)
                if changed:
                    legal[n_legal] = d
                    n_legal += 1
                    v = r + _nt_raw(buf, srcf, starts, offs, L, w) / nsym
                    if v > best_v:
                        best_v = v
                        best_d = d
            if n_legal == 0:
                if have_prev:
                    vprev = _nt_raw_of_feats(ring[head], w) / nsym
                    delta = 0.0 - vprev
                    base = alpha * delta / (m * nsym)
                    _apply_td(w, tc, tc_on, ring, head, count, lam, False, base, delta, beta)
                break
            rg, _ = _move_2048(cells, bufg, best_d)
            d_b = best_d
            if eps > 0.0 and _rand01(rs) < eps:
                d_b = legal[_randint(rs, n_legal)]
            rb, _ = _move_2048(cells, bufb, d_b)
            if have_prev:
                if sarsa:
                    target = rb + _nt_raw(bufb, srcf, starts, offs, L, w) / nsym
                else:
                    target = rg + _nt_raw(bufg, srcf, starts, offs, L, w) / nsym
                vprev = _nt_raw_of_feats(ring[head], w) / nsym
                delta = target - vprev
                base = alpha * delta / (m * nsym)
                _apply_td(w, tc, tc_on, ring, head, count, lam, False, base, delta, beta)
            head = (head + 1) % H
            if count < H:
                count += 1
            _nt_features(bufb, srcf, starts, offs, L, ring[head])
            have_prev = True
            for i in range(16):
                cells[i] = bufb[i]
            score += rb
            _spawn_2048(cells, rs)
            total_moves += 1
        total_score += score
    return total_moves, total_score


@njit(cache=True)
def play_2048_kernel(w, srcf, starts, offs, L, nsym, episodes, seed):
    """Greedy play without learning; returns (moves, total score)."""
    rs = _seed_state(seed)
    buf = np.empty(16, np.int64)
    best = np.empty(16, np.int64)
    cells = np.zeros(16, np.int64)
    total_moves = 0
    total_score = 0.0
    for ep in range(episodes):
        for i in range(16):
            cells[i] = 0
        _spawn_2048(cells, rs)
        _spawn_2048(cells, rs)
        score = 0.0
        while True:
            best_v = -1e300
            best_d = -1
            best_r = 0
            for d in range(4):
                r, changed = _move_2048(cells, buf, d)
                if changed:
                    v = r + _nt_raw(buf, srcf, starts, offs, L, w) / nsym
                    if v > best_v:
                        best_v = v
                        best_d = d
                        best_r = r
                        for i in range(16):
                            best[i] = buf[i]
            if best_d == -1:
                break
            for i in range(16):
                cells[i] = best[i]
            score += best_r
            _spawn_2048(cells, rs)
            total_moves += 1
        total_score += score
    return total_moves, total_score


@njit(cache=True)
def train_2p_kernel(
    game, k, num_cells, num_actions, w, tc, tc_on, srcf, starts, offs, L, nsym, m,
    alpha, beta, lam, H, eps_start, eps_step, sarsa, episodes, seed,
):
    rs = _seed_state(seed)
    P = offs.size
    ring = np.zeros((H, P), np.int64)
    cells = np.zeros(num_cells, np.int64)
    cbuf = np.empty(num_cells, np.int64)
    bbuf = np.empty(num_cells, np.int64)
    legal = np.empty(num_actions, np.int64)
    total_moves = 0
    for ep in range(episodes):
        eps = eps_start + eps_step * ep
        _tp_init(game, k, cells)
        head = -1
        count = 0
        player = 0
        while True:
            head = (head + 1) % H
            if count < H:
                count += 1
            _nt_features(cells, srcf, starts, offs, L, ring[head])
            n = _tp_legal(game, k, cells, legal)
            best_v = -2e300
            best_a = -1
            for li in range(n):
                a = legal[li]
                for i in range(num_cells):
                    cbuf[i] = cells[i]
                placed = _tp_apply(game, k, cbuf, a, player)
                res = _tp_result(game, k, cbuf, placed, player)
                if res == 1:
                    v = 1.0
                elif res == 0:
                    v = 0.0
                else:
                    v = -np.tanh(_nt_raw(cbuf, srcf, starts, offs, L, w) / nsym)
                if v > best_v:
                    best_v = v
                    best_a = a
            a_b = best_a
            if eps > 0.0 and _rand01(rs) < eps:
                a_b = legal[_randint(rs, n)]
            # behavior successor
            for i in range(num_cells):
                bbuf[i] = cells[i]
            placed = _tp_apply(game, k, bbuf, a_b, player)
            res_b = _tp_result(game, k, bbuf, placed, player)
            if sarsa:
                if res_b == 1:
                    target = 1.0
                elif res_b == 0:
                    target = 0.0
                else:
                    target = -np.tanh(_nt_raw(bbuf, srcf, starts, offs, L, w) / nsym)
            else:
                target = best_v
            pval = np.tanh(_nt_raw_of_feats(ring[head], w) / nsym)
            delta = target - pval
            base = alpha * delta * (1.0 - pval * pval) / (m * nsym)
            _apply_td(w, tc, tc_on, ring, head, count, lam, True, base, delta, beta)
            total_moves += 1
            if res_b >= 0:
                break
            for i in range(num_cells):
                cells[i] = bbuf[i]
            player = 1 - player
    return total_moves


@njit(cache=True)
def play_2p_kernel(game, k, num_cells, num_actions, w, srcf, starts, offs, L, nsym, episodes, seed):
    """Greedy self-play without learning; returns total moves."""
    cells = np.zeros(num_cells, np.int64)
    cbuf = np.empty(num_cells, np.int64)
    legal = np.empty(num_actions, np.int64)
    total_moves = 0
    for ep in range(episodes):
        _tp_init(game, k, cells)
        player = 0
        while True:
            n = _tp_legal(game, k, cells, legal)
            if n == 0:
                break
            best_v = -2e300
            best_a = -1
            res_best = -1
            for li in range(n):
                a = legal[li]
                for i in range(num_cells):
                    cbuf[i] = cells[i]
                placed = _tp_apply(game, k, cbuf, a, player)
                res = _tp_result(game, k, cbuf, placed, player)
                if res == 1:
                    v = 1.0
                elif res == 0:
                    v = 0.0
                else:
                    v = -np.tanh(_nt_raw(cbuf, srcf, starts, offs, L, w) / nsym)
                if v > best_v:
                    best_v = v
                    best_a = a
                    res_best = res
            _tp_apply(game, k, cells, best_a, player)
            total_moves += 1
            if res_best >= 0:
                break
            player = 1 - player
    return total_moves


# ---------------------------------------------------------------------------
# Python glue
# ---------------------------------------------------------------------------

def _game_code(game: Game):
    if game.spec == "tictactoe":
        return GAME_TTT, 0
    if game.spec == "connect4":
        return GAME_C4, 0
    if game.spec.startswith("hex-"):
        return GAME_HEX, int(game.spec[4:])
    return None, 0


def supports(game: Game) -> bool:
    """Games with a compiled training kernel."""
    return game.spec == "2048" or _game_code(game)[0] is not None


def rollout_c4_from(state, rng: random.Random):
    cells = np.asarray(state.cells, dtype=np.int64)
    v = _tp_rollout(GAME_C4, 0, cells, state.to_move, rng.getrandbits(31))
    return (v, -v)


def rollout_hex_from(state, rng: random.Random):
    k = state.game.k
    cells = np.asarray(state.cells, dtype=np.int64)
    v = _tp_rollout(GAME_HEX, k, cells, state.to_move, rng.getrandbits(31))
    return (v, -v)


def _chunk_seed(seed: int, chunk: int) -> int:
    return (hash((seed, chunk, "boardlab")) & 0x7FFFFFFF) or 1


def _net_arrays(net):
    """Flat reversed source-cell list, per-pair extents, LUT offsets.

    Horner evaluation needs positions most-significant first, so each
    (tuple, symmetry) pair's cells are stored reversed; the resulting
    index is identical to the generic ``active_features`` one.
    """
    cached = getattr(net, "_fp_arrays", None)
    if cached is not None:
        return cached
    srcf = []
    starts = [0]
    for p in range(net._src.shape[0]):
        row = net._src[p]
        n = int(np.count_nonzero(net._pows[p]))
        srcf.extend(int(c) for c in row[:n][::-1])
        starts.append(len(srcf))
    arrays = (
        np.asarray(srcf, dtype=np.int32),
        np.asarray(starts, dtype=np.int64),
        np.ascontiguousarray(net._offs),
        np.int64(net.L),
    )
    net._fp_arrays = arrays
    return arrays


def train_kernel(game, net, cfg, curve, eval_fn, start, progress=None) -> None:
    """Run cfg.training_games episodes through the compiled kernel,
    pausing for periodic evaluation points exactly like the generic path."""
    from .ntuple.training import CurvePoint, TrainingDiverged, trace_horizon

    if cfg.tc_enabled:
        net.enable_tc()
    srcf, starts, offs, L = _net_arrays(net)
    tc_on = bool(cfg.tc_enabled)
    tc = net.tc if tc_on else np.zeros((1, 2), dtype=np.float32)
    H = trace_horizon(cfg.lam, cfg.horizon_cut)
    every = max(1, cfg.training_games // cfg.eval_points)
    total = cfg.training_games
    eps_step_global = (
        (cfg.eps_final - cfg.eps_init) / (total - 1) if total > 1 else 0.0
    )
    sarsa = cfg.algorithm == "sarsa"
    code, k = _game_code(game)
    done = 0
    chunk_i = 0
    while done < total:
        n = min(every, total - done)
        eps_start = cfg.eps_init + eps_step_global * done
        seed = _chunk_seed(cfg.seed, chunk_i)
        if game.spec == "2048":
            train_2048_kernel(
                net.w, tc, tc_on, srcf, starts, offs, L, net.nsym, len(net.tuples),
                cfg.alpha, cfg.beta, cfg.lam, H, eps_start, eps_step_global, sarsa, n, seed,
            )
        else:
            train_2p_kernel(
                code, k, game.num_cells, game.num_actions,
                net.w, tc, tc_on, srcf, starts, offs, L, net.nsym, len(net.tuples),
                cfg.alpha, cfg.beta, cfg.lam, H, eps_start, eps_step_global, sarsa, n, seed,
            )
        if not np.all(np.isfinite(net.w)):
            raise TrainingDiverged("non-finite weights during kernel training")
        done += n
        chunk_i += 1
        metric = (
            eval_fn(net)
            if eval_fn is not None
            else default_fast_eval(game, net, cfg, _chunk_seed(cfg.seed, -chunk_i))
        )
        eps_now = cfg.eps_init + eps_step_global * (done - 1)
        point = CurvePoint(done, metric, eps_now, time.perf_counter() - start)
        curve.points.append(point)
        if progress:
            progress(point)


def default_fast_eval(game, net, cfg, seed: int) -> float:
    if game.spec == "2048":
        srcf, starts, offs, L = _net_arrays(net)
        _, total = play_2048_kernel(
            net.w, srcf, starts, offs, L, net.nsym, cfg.eval_episodes, seed
        )
        return total / cfg.eval_episodes
    from .ntuple.training import _default_eval

    return _default_eval(game, net, cfg, random.Random(seed))


def bench_train(game, net, cfg, games: int, seed: int = 1) -> int:
    """Runs ``games`` training episodes through the kernel; returns moves played."""
    from .ntuple.training import trace_horizon

    srcf, starts, offs, L = _net_arrays(net)
    tc_on = bool(cfg.tc_enabled)
    tc = net.tc if tc_on else np.zeros((1, 2), dtype=np.float32)
    H = trace_horizon(cfg.lam, cfg.horizon_cut)
    sarsa = cfg.algorithm == "sarsa"
    if game.spec == "2048":
        moves, _ = train_2048_kernel(
            net.w, tc, tc_on, srcf, starts, offs, L, net.nsym, len(net.tuples),
            cfg.alpha, cfg.beta, cfg.lam, H, cfg.eps_init, 0.0, sarsa, games, seed,
        )
        return moves
    code, k = _game_code(game)
    return train_2p_kernel(
        code, k, game.num_cells, game.num_actions,
        net.w, tc, tc_on, srcf, starts, offs, L, net.nsym, len(net.tuples),
        cfg.alpha, cfg.beta, cfg.lam, H, cfg.eps_init, 0.0, sarsa, games, seed,
    )


def bench_play(game, net, games: int, seed: int = 1) -> int:
    """Runs ``games`` greedy-play episodes through the kernel; returns moves played."""
    srcf, starts, offs, L = _net_arrays(net)
    if game.spec == "2048":
        moves, _ = play_2048_kernel(
            net.w, srcf, starts, offs, L, net.nsym, games, seed
        )
        return moves
    code, k = _game_code(game)
    return play_2p_kernel(
        code, k, game.num_cells, game.num_actions,
        net.w, srcf, starts, offs, L, net.nsym, games, seed,
    )


def mean_greedy_score_2048(net, episodes: int, seed: int):
    """Mean greedy episode score; also returns moves played (benchmarks)."""
    srcf, starts, offs, L = _net_arrays(net)
    moves, total = play_2048_kernel(net.w, srcf, starts, offs, L, net.nsym, episodes, seed)
    return total / episodes, moves
