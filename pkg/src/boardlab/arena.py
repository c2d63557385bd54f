"""Episode execution, win-rate evaluation, and round-robin competitions.

Episodes are fully reproducible: agent decisions and chance resolution
draw from separate streams derived from the record's seed, so replaying
the recorded move list regenerates the final score tuple bit-exactly.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from .core import Game, GameState, ScoreTuple, to_line, from_line
from .agents.base import Agent


def _agent_stream(seed: int) -> random.Random:
    return random.Random((seed, "agents").__hash__())


def _chance_stream(seed: int) -> random.Random:
    return random.Random((seed, "chance").__hash__())


@dataclass
class EpisodeRecord:
    """One finished (or aborted) episode.

    ``start`` is the canonical serialization of the start state; replaying
    ``moves`` from it with the chance stream of ``seed`` reproduces
    ``final_scores`` exactly.
    """

    game_spec: str
    start: str
    start_rewards: ScoreTuple         # cumulative reward carried by the start state
    seats: tuple            # agent name per player id
    moves: list
    final_scores: ScoreTuple
    wall_seconds: float
    seed: int
    illegal: Optional[tuple] = None   # (offending seat, attempted action)

    @property
    def aborted(self) -> bool:
        return self.illegal is not None


def _loss_for(game: Game, offender: int) -> ScoreTuple:
    if game.players == 1:
        return (0.0,) * 1
    scores = [1.0 / (game.players - 1)] * game.players
    scores[offender] = -1.0
    return tuple(scores)


def play_episode(
    game: Game,
    seats: Sequence[Agent],
    start: Optional[GameState] = None,
    seed: int = 0,
) -> EpisodeRecord:
    """Plays one episode with ``seats[p]`` moving for player p.

    An agent returning an illegal action aborts the episode; the record is
    flagged and scored as a loss for the offender.
    """
    if len(seats) != game.players:
        raise ValueError(f"need {game.players} seats, got {len(seats)}")
    if start is None:
        start = game.initial_state(_chance_stream(seed))
    if game.status(start).terminal:
        raise ValueError("start state is terminal")
    agent_rng = _agent_stream(seed)
    chance_rng = _chance_stream(seed + 1)
    s = start
    moves = []
    illegal = None
    t0 = time.perf_counter()
    while True:
        status = game.status(s)
        if status.terminal:
            final = status.scores
            break
        action, _ = seats[s.to_move].choose_action(s, agent_rng)
        if action not in game.legal_actions(s):
            illegal = (s.to_move, action)
            final = _loss_for(game, s.to_move)
            break
        moves.append(action)
        s = game.apply_action(s, action)
        if s.is_afterstate and not game.status(s).terminal:
            s = game.sample_chance(s, chance_rng)
    return EpisodeRecord(
        game_spec=game.spec,
        start=to_line(start),
        start_rewards=start.cumulative_reward,
        seats=tuple(getattr(a, "name", type(a).__name__) for a in seats),
        moves=moves,
        final_scores=final,
        wall_seconds=time.perf_counter() - t0,
        seed=seed,
        illegal=illegal,
    )


def replay_episode(game: Game, record: EpisodeRecord) -> ScoreTuple:
    """Re-executes the record's moves; returns the reproduced final scores."""
    if record.game_spec != game.spec:
        raise ValueError(f"record is for {record.game_spec}, not {game.spec}")
    if record.illegal is not None:
        return record.final_scores
    chance_rng = _chance_stream(record.seed + 1)
    s = from_line(record.start)
    if s.cumulative_reward != record.start_rewards:
        # the canonical line carries no rewards; restore the recorded ones
        s = GameState(
            s.game, s.cells, s.to_move, s.move_count,
            record.start_rewards, s.is_afterstate,
        )
    for action in record.moves:
        s = game.apply_action(s, action)
        if s.is_afterstate and not game.status(s).terminal:
            s = game.sample_chance(s, chance_rng)
    return game.status(s).scores


def _credit(scores: ScoreTuple, seat: int) -> float:
    best = max(scores)
    if scores[seat] < best:
        return 0.0
    return 0.5 if scores.count(best) > 1 else 1.0


def evaluate_win_rate(
    agent: Agent,
    opponent: Agent,
    game: Game,
    starts: Optional[Sequence] = None,
    episodes_per_start: int = 1,
    seed: int = 0,
    agent_seats: Optional[Sequence[int]] = None,
) -> float:
    """Fraction of episodes won by ``agent`` (draws count 0.5).

    Without ``agent_seats``, each start is played an equal number of times
    with the agent in each seat.  ``agent_seats`` pins the agent's seat per
    start (used with winnable-start sets where one side can force a win).
    """
    if game.players != 2:
        raise ValueError("win rate is defined for 2-player games")
    if starts is None:
        starts = [game.initial_state(_chance_stream(seed))]
    if not starts:
        raise ValueError("starts must be non-empty")
    if agent_seats is not None and len(agent_seats) != len(starts):
        raise ValueError("agent_seats must align with starts")
    credit = 0.0
    episodes = 0
    ep_seed = seed
    for si, start in enumerate(starts):
        for e in range(episodes_per_start):
            seats_to_play = (
                (agent_seats[si],) if agent_seats is not None else (0, 1)
            )
            for seat in seats_to_play:
                pair = (agent, opponent) if seat == 0 else (opponent, agent)
                rec = play_episode(game, pair, start=start, seed=ep_seed)
                credit += _credit(rec.final_scores, seat)
                episodes += 1
                ep_seed += 1
    return credit / episodes


@dataclass
class CompetitionResult:
    """Round-robin outcome: per-ordered-pair counts and aggregates.

    ``wins[i][j]`` counts wins of agent i over agent j, so the matrix is
    antisymmetric with ``losses``: wins[i][j] == losses[j][i].
    """

    names: list
    wins: list
    draws: list
    losses: list
    mean_scores: list       # mean score of i in episodes vs j
    episodes_per_pair: int
    start_set: str = "default"
    records: list = field(default_factory=list)

    def aggregate(self) -> list:
        """Per-agent (name, wins, draws, losses, points) sorted by points."""
        out = []
        n = len(self.names)
        for i in range(n):
            w = sum(self.wins[i][j] for j in range(n) if j != i)
            d = sum(self.draws[i][j] for j in range(n) if j != i)
            l = sum(self.losses[i][j] for j in range(n) if j != i)
            out.append((self.names[i], w, d, l, w + 0.5 * d))
        return sorted(out, key=lambda r: -r[4])

    def to_csv(self) -> str:
        lines = ["agent_a,agent_b,wins_a,draws,wins_b,mean_score_a,mean_score_b"]
        n = len(self.names)
        for i in range(n):
            for j in range(i + 1, n):
                lines.append(
                    f"{self.names[i]},{self.names[j]},{self.wins[i][j]},"
                    f"{self.draws[i][j]},{self.wins[j][i]},"
                    f"{self.mean_scores[i][j]:.4f},{self.mean_scores[j][i]:.4f}"
                )
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "names": self.names,
                "wins": self.wins,
                "draws": self.draws,
                "losses": self.losses,
                "mean_scores": self.mean_scores,
                "episodes_per_pair": self.episodes_per_pair,
                "start_set": self.start_set,
                "standings": [
                    {"name": n, "wins": w, "draws": d, "losses": l, "points": p}
                    for n, w, d, l, p in self.aggregate()
                ],
            },
            indent=2,
        )


def round_robin(
    agents: Sequence[Agent],
    game: Game,
    episodes_per_pair: int = 10,
    seed: int = 0,
    keep_records: bool = False,
) -> CompetitionResult:
    """Every unordered pair plays ``episodes_per_pair`` episodes with seat
    alternation.  Identical seeds give identical results."""
    if len(agents) < 2:
        raise ValueError("round robin needs at least 2 agents")
    if game.players != 2:
        raise ValueError("round robin is defined for 2-player games")
    n = len(agents)
    names = [getattr(a, "name", type(a).__name__) for a in agents]
    wins = [[0] * n for _ in range(n)]
    draws = [[0] * n for _ in range(n)]
    losses = [[0] * n for _ in range(n)]
    totals = [[0.0] * n for _ in range(n)]
    records = []
    ep_seed = seed
    for i, j in combinations(range(n), 2):
        for e in range(episodes_per_pair):
            # seat alternation: i is first mover on even episodes
            first, second = (i, j) if e % 2 == 0 else (j, i)
            rec = play_episode(
                game, (agents[first], agents[second]), seed=ep_seed
            )
            ep_seed += 1
            if keep_records:
                records.append(rec)
            s_first, s_second = rec.final_scores
            totals[first][second] += s_first
            totals[second][first] += s_second
            if s_first > s_second:
                wins[first][second] += 1
                losses[second][first] += 1
            elif s_second > s_first:
                wins[second][first] += 1
                losses[first][second] += 1
            else:
                draws[first][second] += 1
                draws[second][first] += 1
    mean_scores = [
        [
            totals[i][j] / episodes_per_pair if i != j else 0.0
            for j in range(n)
        ]
        for i in range(n)
    ]
    return CompetitionResult(
        names=names,
        wins=wins,
        draws=draws,
        losses=losses,
        mean_scores=mean_scores,
        episodes_per_pair=episodes_per_pair,
        records=records,
    )


def mean_episode_score(
    agent: Agent, game: Game, episodes: int = 50, seed: int = 0
) -> float:
    """Mean final score over episodes of a 1-player game."""
    if game.players != 1:
        raise ValueError("mean episode score is for 1-player games")
    total = 0.0
    for e in range(episodes):
        rec = play_episode(game, (agent,), seed=seed + e)
        total += rec.final_scores[0]
    return total / episodes
