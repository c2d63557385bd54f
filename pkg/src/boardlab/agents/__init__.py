"""Generic decision-time agents."""
from .base import Agent, HumanAgent, RandomAgent, SearchConfig
from .maxn import ExpectimaxNAgent, MaxNAgent, expectimaxn, maxn, wrap
from .mc import MCAgent
from .mcts import MctsAgent, MctseAgent, uct_score

__all__ = [
    "Agent",
    "ExpectimaxNAgent",
    "HumanAgent",
    "MCAgent",
    "MaxNAgent",
    "MctsAgent",
    "MctseAgent",
    "RandomAgent",
    "SearchConfig",
    "expectimaxn",
    "maxn",
    "uct_score",
    "wrap",
]
