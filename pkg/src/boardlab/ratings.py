"""Elo and Glicko-1 rating maintenance for competition results."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence, Tuple

Q = math.log(10.0) / 400.0
RD_MIN, RD_MAX = 30.0, 350.0


@dataclass(frozen=True)
class RatingState:
    elo: float = 1500.0
    glicko_rating: float = 1500.0
    glicko_rd: float = 350.0

    def __post_init__(self):
        if not (math.isfinite(self.elo) and math.isfinite(self.glicko_rating)):
            raise ValueError("ratings must be finite")
        object.__setattr__(
            self, "glicko_rd", min(RD_MAX, max(RD_MIN, self.glicko_rd))
        )


def elo_expected(r_a: float, r_b: float) -> float:
    return 1.0 / (1.0 + 10.0 ** ((r_b - r_a) / 400.0))


def elo_update(
    r_a: float, r_b: float, outcome_a: float, k: float = 32.0
) -> Tuple[float, float]:
    """Standard Elo update; total rating is conserved (zero-sum)."""
    if k <= 0:
        raise ValueError("K must be > 0")
    if outcome_a not in (0.0, 0.5, 1.0):
        raise ValueError("outcome must be 0, 0.5, or 1")
    e_a = elo_expected(r_a, r_b)
    delta = k * (outcome_a - e_a)
    return r_a + delta, r_b - delta


def ratings_from_competition(comp, k: float = 32.0, c: float = 63.2) -> dict:
    """Elo and Glicko-1 ratings for a CompetitionResult.

    Elo replays the pair outcomes in a fixed deterministic order; Glicko
    treats the whole competition as one rating period with all opponents
    at their initial states.
    """
    n = len(comp.names)
    elos = [1500.0] * n
    glicko_results: list = [[] for _ in range(n)]
    initial = RatingState()
    for i in range(n):
        for j in range(i + 1, n):
            outcomes = (
                [(1.0, 0.0)] * comp.wins[i][j]
                + [(0.5, 0.5)] * comp.draws[i][j]
                + [(0.0, 1.0)] * comp.wins[j][i]
            )
            for oa, ob in outcomes:
                elos[i], elos[j] = elo_update(elos[i], elos[j], oa, k)
                glicko_results[i].append((initial, oa))
                glicko_results[j].append((initial, ob))
    out = {}
    for i, name in enumerate(comp.names):
        g = glicko_update(RatingState(), glicko_results[i], c=c)
        out[name] = RatingState(
            elo=elos[i], glicko_rating=g.glicko_rating, glicko_rd=g.glicko_rd
        )
    return out


def _g(rd: float) -> float:
    return 1.0 / math.sqrt(1.0 + 3.0 * Q * Q * rd * rd / (math.pi * math.pi))


def glicko_update(
    rating: RatingState,
    results: Sequence[Tuple[RatingState, float]],
    c: float = 63.2,
) -> RatingState:
    """One Glicko-1 rating period.

    With no results the deviation inflates by ``c`` (idle period), clamped
    to [30, 350]; otherwise the standard Glicko-1 rating/RD update runs on
    the period's results.
    """
    for _, outcome in results:
        if outcome not in (0.0, 0.5, 1.0):
            raise ValueError("outcome must be 0, 0.5, or 1")
    rd = min(RD_MAX, math.sqrt(rating.glicko_rd ** 2 + c ** 2))
    if not results:
        return replace(rating, glicko_rd=max(RD_MIN, rd))
    d2_inv = 0.0
    delta_sum = 0.0
    for opp, outcome in results:
        g = _g(opp.glicko_rd)
        e = 1.0 / (
            1.0 + 10.0 ** (-g * (rating.glicko_rating - opp.glicko_rating) / 400.0)
        )
        d2_inv += Q * Q * g * g * e * (1.0 - e)
        delta_sum += g * (outcome - e)
    denom = 1.0 / (rd * rd) + d2_inv
    new_rating = rating.glicko_rating + (Q / denom) * delta_sum
    new_rd = math.sqrt(1.0 / denom)
    return replace(
        rating,
        glicko_rating=new_rating,
        glicko_rd=min(RD_MAX, max(RD_MIN, new_rd)),
    )
