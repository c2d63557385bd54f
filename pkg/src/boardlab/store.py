"""Versioned binary persistence for agents.

File layout (all integers little-endian):

    magic   4 bytes  b"GBGA"
    version u32      currently 1
    mlen    u32      metadata length in bytes
    meta    mlen     JSON (agent kind, game spec, configs, tuple defs, flags)
    blob    4 * W    float32 weights, concatenated LUTs in tuple order
    tc      8 * W    float32 (N, A) temporal-coherence pairs, iff flagged
    check   8 bytes  first 8 bytes of SHA-256 over blob (+ tc)

Search agents persist with an empty weight blob; their parameters live in
the metadata.  Loading either fully succeeds or raises without leaving a
partially constructed agent behind.
"""
from __future__ import annotations

import hashlib
import json
import os
import struct
from dataclasses import asdict
from typing import Optional

import numpy as np

from .core import Game, GameMismatch
from .agents import (
    Agent,
    ExpectimaxNAgent,
    MCAgent,
    MaxNAgent,
    MctsAgent,
    MctseAgent,
    RandomAgent,
    SearchConfig,
    wrap,
)
from .games import get_game
from .games.nim import BoutonAgent
from .ntuple import NTupleAgent, NTupleNetwork

MAGIC = b"GBGA"
VERSION = 1


class StoreError(RuntimeError):
    """Base class for agent-file failures."""


class BadMagic(StoreError):
    pass


class BadVersion(StoreError):
    pass


class BadChecksum(StoreError):
    pass


class Truncated(StoreError):
    pass


def _search_kwargs(meta: dict) -> dict:
    cfg = meta.get("search") or {}
    return {k: cfg[k] for k in cfg}


def agent_metadata(agent: Agent, game: Game) -> dict:
    """Structured description sufficient to rebuild the agent (weights aside)."""
    meta: dict = {"game": game.spec, "name": getattr(agent, "name", "agent")}
    inner = agent
    wrap_depth = 0
    if hasattr(agent, "inner") and hasattr(agent, "d"):
        wrap_depth = agent.d
        inner = agent.inner
    meta["wrap_depth"] = wrap_depth
    if isinstance(inner, NTupleAgent):
        net = inner.net
        meta["kind"] = "td-ntuple"
        meta["tuples"] = [list(t) for t in net.tuples]
        meta["squash"] = net.squash
        meta["has_tc"] = net.tc is not None
        meta["num_weights"] = net.num_weights
    elif isinstance(inner, RandomAgent):
        meta["kind"] = "random"
    elif isinstance(inner, BoutonAgent):
        meta["kind"] = "bouton"
    elif isinstance(inner, MctseAgent):
        meta["kind"] = "mctse"
        meta["search"] = asdict(inner.cfg)
    elif isinstance(inner, MctsAgent):
        meta["kind"] = "mcts"
        meta["search"] = asdict(inner.cfg)
    elif isinstance(inner, MCAgent):
        meta["kind"] = "mc"
        meta["search"] = asdict(inner.cfg)
    elif isinstance(inner, ExpectimaxNAgent):
        meta["kind"] = "expectimaxn"
        meta["depth"] = inner.depth
    elif isinstance(inner, MaxNAgent):
        meta["kind"] = "maxn"
        meta["depth"] = inner.depth
    else:
        raise StoreError(f"cannot serialize agent of type {type(inner).__name__}")
    return meta


def build_agent(meta: dict, game: Optional[Game] = None) -> Agent:
    """Reconstructs an agent from its metadata (weights not yet attached)."""
    if game is None:
        game = get_game(meta["game"])
    kind = meta["kind"]
    if kind == "td-ntuple":
        net = NTupleNetwork(game, [tuple(t) for t in meta["tuples"]], squash=meta.get("squash"))
        agent: Agent = NTupleAgent(net, name=meta.get("name"))
    elif kind == "random":
        agent = RandomAgent()
    elif kind == "bouton":
        agent = BoutonAgent()
    elif kind == "mcts":
        agent = MctsAgent(SearchConfig(**_search_kwargs(meta)))
    elif kind == "mctse":
        agent = MctseAgent(SearchConfig(**_search_kwargs(meta)))
    elif kind == "mc":
        agent = MCAgent(SearchConfig(**_search_kwargs(meta)))
    elif kind == "maxn":
        agent = MaxNAgent(depth=meta.get("depth", 2))
    elif kind == "expectimaxn":
        agent = ExpectimaxNAgent(depth=meta.get("depth", 2))
    else:
        raise StoreError(f"unknown agent kind {kind!r}")
    depth = meta.get("wrap_depth", 0)
    if depth:
        agent = wrap(agent, depth)
    return agent


def _net_of(agent: Agent) -> Optional[NTupleNetwork]:
    inner = agent.inner if hasattr(agent, "inner") else agent
    return inner.net if isinstance(inner, NTupleAgent) else None


def save_agent(agent: Agent, game: Game, path: str, extra_meta: Optional[dict] = None) -> None:
    """Writes the agent file and fsyncs before returning."""
    meta = agent_metadata(agent, game)
    if extra_meta:
        meta.update(extra_meta)
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    net = _net_of(agent)
    blob = b""
    if net is not None:
        blob = np.ascontiguousarray(net.w, dtype="<f4").tobytes()
        if meta["has_tc"]:
            blob += np.ascontiguousarray(net.tc, dtype="<f4").tobytes()
    checksum = hashlib.sha256(blob).digest()[:8]
    try:
        with open(path, "wb") as f:
            f.write(MAGIC)
            f.write(struct.pack("<II", VERSION, len(meta_bytes)))
            f.write(meta_bytes)
            f.write(blob)
            f.write(checksum)
            f.flush()
            os.fsync(f.fileno())
    except OSError as e:
        raise StoreError(f"writing {path}: {e}") from e


def load_agent(path: str, game: Optional[Game] = None):
    """Reads an agent file; returns (agent, metadata).

    ``game``, if given, must match the stored game spec (GameMismatch
    otherwise).  Corruption is reported before anything is constructed.
    """
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as e:
        raise StoreError(f"reading {path}: {e}") from e
    if len(data) < 12:
        raise Truncated(f"{path}: {len(data)} bytes is no header")
    if data[:4] != MAGIC:
        raise BadMagic(f"{path}: bad magic {data[:4]!r}")
    version, mlen = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise BadVersion(f"{path}: format version {version}, reader supports {VERSION}")
    if len(data) < 12 + mlen + 8:
        raise Truncated(f"{path}: metadata extends past end of file")
    meta = json.loads(data[12 : 12 + mlen].decode("utf-8"))
    body = data[12 + mlen : -8]
    checksum = data[-8:]
    expected_len = 0
    if meta["kind"] == "td-ntuple":
        expected_len = 4 * meta["num_weights"] * (3 if meta["has_tc"] else 1)
    if len(body) != expected_len:
        raise Truncated(
            f"{path}: weight blob is {len(body)} bytes, expected {expected_len}"
        )
    if hashlib.sha256(body).digest()[:8] != checksum:
        raise BadChecksum(f"{path}: checksum mismatch")
    if game is not None and game.spec != meta["game"]:
        raise GameMismatch(
            f"{path} holds an agent for {meta['game']!r}, not {game.spec!r}"
        )
    agent = build_agent(meta, game)
    net = _net_of(agent)
    if net is not None:
        w_bytes = 4 * meta["num_weights"]
        net.w[:] = np.frombuffer(body[:w_bytes], dtype="<f4")
        if meta["has_tc"]:
            net.enable_tc()
            net.tc[:] = np.frombuffer(body[w_bytes:], dtype="<f4").reshape(-1, 2)
    return agent, meta
