"""boardlab: general board-game playing and learning.

One game abstraction, a portfolio of generic agents (tree search and
self-play TD-n-tuple learners), five games, a training/evaluation/
tournament arena with ratings, and a local service + browser UI.
"""

__version__ = "0.1.0"
