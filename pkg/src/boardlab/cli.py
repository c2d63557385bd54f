"""Command-line entry point: train, eval, compete, play, serve, bench.

Exit codes: 0 success, 2 usage error (argparse or unknown game/agent),
1 runtime error.  Every run logs its fully-resolved configuration,
including the seed (randomly drawn when not given), so outputs are
reproducible from the log line alone.

A config file (INI sections named after subcommands, plus an optional
[global] section) can pre-set any long flag; explicit flags win.
"""
from __future__ import annotations

import argparse
import configparser
import json
import random
import sys
import time
from typing import Optional, Sequence

from .agents import (
    Agent,
    ExpectimaxNAgent,
    HumanAgent,
    MCAgent,
    MaxNAgent,
    MctsAgent,
    MctseAgent,
    RandomAgent,
    SearchConfig,
    wrap,
)
from .arena import evaluate_win_rate, mean_episode_score, play_episode, round_robin
from .games import available_games, get_game
from .games.nim import BoutonAgent
from .core import Game
from .ntuple import (
    NTupleAgent,
    NTupleNetwork,
    TrainConfig,
    default_tuples,
    generate_random_walk_ntuples,
    train_selfplay,
)
from .ratings import ratings_from_competition
from .starts import winnable_starts
from .store import StoreError, load_agent, save_agent

AGENT_KINDS = (
    "random",
    "bouton",
    "maxn[:depth=D]",
    "expectimaxn[:depth=D]",
    "mc[:rollouts=R]",
    "mcts[:iters=I,k=K,depth=D]",
    "mctse[:iters=I,k=K,depth=D]",
    "td-ntuple",
    "file:PATH",
)


class UsageError(Exception):
    """Bad operator input; maps to exit code 2."""


def _parse_params(text: str) -> dict:
    params = {}
    if not text:
        return params
    for part in text.split(","):
        if "=" not in part:
            raise UsageError(f"malformed agent parameter {part!r} (want key=value)")
        key, value = part.split("=", 1)
        try:
            params[key.strip()] = float(value) if "." in value else int(value)
        except ValueError:
            raise UsageError(f"agent parameter {key!r} needs a number, got {value!r}")
    return params


def _search_config(params: dict) -> SearchConfig:
    mapping = {
        "iters": "iterations",
        "iterations": "iterations",
        "k": "k_uct",
        "depth": "max_tree_depth",
        "rollouts": "rollouts_per_action",
    }
    kwargs = {}
    for key, value in params.items():
        if key not in mapping:
            raise UsageError(
                f"unknown search parameter {key!r}; known: {', '.join(mapping)}"
            )
        kwargs[mapping[key]] = value
    try:
        return SearchConfig(**kwargs)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e))


def parse_tuples(spec: str, game: Game, seed: int) -> list:
    """Tuple-set spec: 'MxN' random walks, 'cells' 1-tuples, 'all' one
    all-cells tuple, or explicit '0,1,2;3,4,5'."""
    spec = spec.strip()
    if spec == "cells":
        return default_tuples(game)
    if spec == "all":
        return [tuple(range(game.num_cells))]
    if "x" in spec and ";" not in spec and "," not in spec:
        m_str, n_str = spec.split("x", 1)
        try:
            m, n = int(m_str), int(n_str)
        except ValueError:
            raise UsageError(f"malformed tuple spec {spec!r} (want e.g. 4x6)")
        rng = random.Random((seed, "tuples").__hash__())
        return generate_random_walk_ntuples(game.adjacency(), m, n, rng)
    try:
        return [
            tuple(int(c) for c in group.split(","))
            for group in spec.split(";")
            if group
        ]
    except ValueError:
        raise UsageError(f"malformed tuple spec {spec!r}")


def build_agent_spec(
    spec: str, game: Game, tuples: Optional[str] = None, seed: int = 0
) -> Agent:
    """Resolves an agent spec string to an agent instance."""
    kind, _, params_text = spec.partition(":")
    kind = kind.strip()
    if kind == "file":
        if not params_text:
            raise UsageError("file agent spec needs a path: file:PATH")
        try:
            agent, _ = load_agent(params_text, game)
        except StoreError as e:
            raise RuntimeError(str(e))
        return agent
    params = _parse_params(params_text)
    if kind == "random":
        return RandomAgent()
    if kind == "bouton":
        return BoutonAgent()
    if kind == "maxn":
        return MaxNAgent(depth=int(params.get("depth", 2)))
    if kind == "expectimaxn":
        return ExpectimaxNAgent(depth=int(params.get("depth", 2)))
    if kind == "mc":
        return MCAgent(_search_config(params))
    if kind == "mcts":
        return MctsAgent(_search_config(params))
    if kind == "mctse":
        return MctseAgent(_search_config(params))
    if kind == "td-ntuple":
        tup = parse_tuples(tuples or "cells", game, seed)
        return NTupleAgent(NTupleNetwork(game, tup))
    raise UsageError(
        f"unknown agent spec {spec!r}; available kinds: {', '.join(AGENT_KINDS)}"
    )


def _resolve_game(args) -> Game:
    spec = args.game
    if spec == "hex" and getattr(args, "size", None):
        spec = f"hex-{args.size}"
    if spec == "nim" and getattr(args, "heaps", None):
        spec = f"nim-{args.heaps}"
    try:
        return get_game(spec)
    except ValueError as e:
        raise UsageError(str(e))


def _log_config(args) -> None:
    resolved = {k: v for k, v in vars(args).items() if k != "func" and v is not None}
    print(f"config: {json.dumps(resolved, sort_keys=True, default=str)}")


def _ensure_seed(args) -> None:
    if args.seed is None:
        args.seed = random.SystemRandom().randrange(2 ** 31)


# ---------------------------------------------------------------- train


def cmd_train(args) -> int:
    game = _resolve_game(args)
    _log_config(args)
    if args.agent != "td-ntuple":
        raise UsageError("train supports only --agent td-ntuple")
    tuples = parse_tuples(args.tuples, game, args.seed)
    cfg = TrainConfig(
        training_games=args.games,
        alpha=args.alpha,
        lam=getattr(args, "lambda"),
        gamma=args.gamma,
        eps_init=args.eps_init if args.eps_init is not None else args.eps,
        eps_final=args.eps_final if args.eps_final is not None else args.eps,
        tc_enabled=args.tc,
        beta=args.beta,
        seed=args.seed,
        algorithm=args.algorithm,
        eval_points=args.eval_points,
        eval_episodes=args.eval_episodes,
    )
    t0 = time.perf_counter()
    agent, curve = train_selfplay(game, cfg, tuples=tuples)
    elapsed = time.perf_counter() - t0
    agent_path = args.out or f"{game.spec.replace(',', '_')}-td.gbga"
    train_meta = {
        "games": args.games,
        "alpha": args.alpha,
        "lambda": getattr(args, "lambda"),
        "tc": args.tc,
        "seed": args.seed,
    }
    save_agent(agent, game, agent_path, extra_meta={"train": train_meta})
    curve_path = agent_path + ".curve.csv"
    with open(curve_path, "w") as f:
        f.write(curve.to_csv())
    final = curve.points[-1].eval_metric if curve.points else float("nan")
    print(f"trained {args.games} games in {elapsed:.1f}s; final eval {final:.4g}")
    print(f"agent file: {agent_path}")
    print(f"curve: {curve_path}")
    return 0


# ----------------------------------------------------------------- eval


def cmd_eval(args) -> int:
    game = _resolve_game(args)
    _log_config(args)
    agent = build_agent_spec(args.agent, game, seed=args.seed)
    if args.wrap:
        agent = wrap(agent, args.wrap)
    if game.players == 1:
        score = mean_episode_score(agent, game, episodes=args.episodes, seed=args.seed)
        print(f"mean score over {args.episodes} episodes: {score:.1f}")
        return 0
    opponent = build_agent_spec(args.opponent, game, seed=args.seed + 1)
    starts = None
    agent_seats = None
    if args.starts == "winnable":
        pairs = winnable_starts(game)
        if not pairs:
            raise RuntimeError(f"{game.spec} has no decided 1-ply openings")
        starts = [s for s, _ in pairs]
        agent_seats = [seat for _, seat in pairs]
    rate = evaluate_win_rate(
        agent,
        opponent,
        game,
        starts=starts,
        episodes_per_start=args.episodes,
        seed=args.seed,
        agent_seats=agent_seats,
    )
    n_starts = len(starts) if starts else 1
    print(
        f"win rate: {rate:.4f} over {n_starts} start(s) x {args.episodes} episode(s)"
    )
    return 0


# -------------------------------------------------------------- compete


def cmd_compete(args) -> int:
    game = _resolve_game(args)
    _log_config(args)
    specs = [s.strip() for s in args.agents.split(",") if s.strip()]
    if len(specs) < 2:
        raise UsageError("compete needs at least two --agents")
    agents = [build_agent_spec(s, game, seed=args.seed + i) for i, s in enumerate(specs)]
    for spec, agent in zip(specs, agents):
        agent.name = spec
    result = round_robin(agents, game, episodes_per_pair=args.episodes, seed=args.seed)
    print(result.to_csv(), end="")
    ratings = ratings_from_competition(result)
    table = sorted(ratings.items(), key=lambda kv: -kv[1].elo)
    for name, r in table:
        print(
            f"{name}: elo {r.elo:.1f}  glicko {r.glicko_rating:.1f} "
            f"(rd {r.glicko_rd:.1f})"
        )
    if args.out:
        with open(args.out, "w") as f:
            f.write(result.to_csv())
        with open(args.out + ".json", "w") as f:
            payload = json.loads(result.to_json())
            payload["ratings"] = {
                n: {"elo": r.elo, "glicko": r.glicko_rating, "rd": r.glicko_rd}
                for n, r in ratings.items()
            }
            json.dump(payload, f, indent=2)
        print(f"results: {args.out} and {args.out}.json")
    return 0


# ----------------------------------------------------------------- play


def _terminal_ask(state, actions):
    game = state.game
    print(game.render(state))
    names = {a: game.action_name(a) for a in actions}
    print("legal:", "  ".join(f"[{a}] {names[a]}" for a in actions))
    while True:
        raw = input(f"player {state.to_move} move> ").strip()
        try:
            a = int(raw)
        except ValueError:
            matches = [x for x in actions if names[x] == raw]
            if len(matches) == 1:
                return matches[0]
            print("enter an action id or exact move name")
            continue
        if a in actions:
            return a
        print("illegal action")


def cmd_play(args) -> int:
    game = _resolve_game(args)
    _log_config(args)
    agent = build_agent_spec(args.agent, game, seed=args.seed)
    if args.wrap:
        agent = wrap(agent, args.wrap)
    human = HumanAgent(ask=_terminal_ask)
    if game.players == 1:
        seats: list = [human]
    else:
        seats = [agent] * game.players
        seats[args.human_seat] = human
    record = play_episode(game, seats, seed=args.seed)
    print("final scores:", tuple(round(s, 3) for s in record.final_scores))
    return 0


# ---------------------------------------------------------------- serve


def cmd_serve(args) -> int:
    _log_config(args)
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------- bench


def _bench_net(game: Game, seed: int) -> NTupleNetwork:
    rng = random.Random(seed)
    if game.spec == "2048":
        tuples = generate_random_walk_ntuples(game.adjacency(), 4, 6, rng)
    else:
        tuples = generate_random_walk_ntuples(game.adjacency(), 70, 8, rng)
    net = NTupleNetwork(game, tuples)
    net.enable_tc()
    return net


def run_bench(game_spec: str, seconds: float = 2.0, seed: int = 0) -> dict:
    """Measures single-core TD-n-tuple training and greedy-play throughput
    (moves/s) with the compiled kernels; returns {'train': ..., 'play': ...}.

    A warm-up pass compiles the kernels and faults in the weight pages so
    the timed window sees steady-state speed.
    """
    from . import fastpath

    game = get_game(game_spec)
    if not fastpath.supports(game):
        raise UsageError(f"bench supports 2048 and connect4, not {game_spec}")
    net = _bench_net(game, seed)
    cfg = TrainConfig(
        training_games=10 ** 9,
        alpha=1.0 if game.spec == "2048" else 5.0,
        lam=0.0 if game.spec == "2048" else 0.5,
        eps_init=0.1,
        eps_final=0.1,
        tc_enabled=True,
        seed=seed,
    )
    net.enable_tc()
    # warm-up: JIT compile + pre-fault LUT pages
    net.w += 0.0
    net.tc += 0.0
    fastpath.bench_train(game, net, cfg, games=64)
    fastpath.bench_play(game, net, games=64)

    out = {}
    for mode in ("train", "play"):
        moves = 0
        t0 = time.perf_counter()
        elapsed = 0.0
        while elapsed < seconds:
            if mode == "train":
                moves += fastpath.bench_train(game, net, cfg, games=256)
            else:
                moves += fastpath.bench_play(game, net, games=256)
            elapsed = time.perf_counter() - t0
        out[mode] = moves / elapsed
    return out


def cmd_bench(args) -> int:
    _ensure_seed(args)
    _log_config(args)
    games = [args.game] if args.game else ["2048", "connect4"]
    results = {}
    for spec in games:
        r = run_bench(spec, seconds=args.seconds, seed=args.seed)
        results[spec] = r
        print(f"{spec} train: {r['train']:,.0f} moves/s")
        print(f"{spec} play:  {r['play']:,.0f} moves/s")
    print(json.dumps(results))
    return 0


# --------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, game_required: bool = True) -> None:
    p.add_argument("--game", required=game_required, help="game spec (e.g. 2048, tictactoe, connect4, hex-5, nim-3,4,5)")
    p.add_argument("--size", type=int, help="board side for hex (with --game hex)")
    p.add_argument("--heaps", help="comma-separated heap sizes (with --game nim)")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (random if omitted, always logged)")
    p.add_argument("--config", help="INI config file; explicit flags win")


def build_parser():
    """Returns (parser, {subcommand: subparser})."""
    parser = argparse.ArgumentParser(
        prog="boardlab", description="Train, evaluate, and play board-game agents."
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    registry = {}

    p = sub.add_parser("train", help="TD-n-tuple self-play training")
    _add_common(p)
    p.add_argument("--agent", default="td-ntuple")
    p.add_argument("--tuples", default="cells", help="MxN random walks, 'cells', 'all', or '0,1,2;3,4'")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--lambda", type=float, default=0.0, dest="lambda")
    p.add_argument("--gamma", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=0.1, help="constant exploration rate")
    p.add_argument("--eps-init", type=float, default=None)
    p.add_argument("--eps-final", type=float, default=None)
    tc = p.add_mutually_exclusive_group()
    tc.add_argument("--tc", dest="tc", action="store_true", default=True)
    tc.add_argument("--no-tc", dest="tc", action="store_false")
    p.add_argument("--beta", type=float, default=2.7)
    p.add_argument("--games", type=int, default=10000)
    p.add_argument("--algorithm", choices=("td", "sarsa"), default="td")
    p.add_argument("--eval-points", type=int, default=50)
    p.add_argument("--eval-episodes", type=int, default=20)
    p.add_argument("--out", help="agent file path (curve CSV written next to it)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="win rate / mean score of one agent")
    _add_common(p)
    p.add_argument("--agent", required=True)
    p.add_argument("--opponent", default="random")
    p.add_argument("--wrap", type=int, default=0, help="d-ply look-ahead wrapper depth")
    p.add_argument("--starts", choices=("initial", "winnable"), default="initial")
    p.add_argument("--episodes", type=int, default=10, help="episodes (per start)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compete", help="round-robin with ratings")
    _add_common(p)
    p.add_argument("--agents", required=True, help="comma-separated agent specs")
    p.add_argument("--episodes", type=int, default=10, help="episodes per pair")
    p.add_argument("--out", help="CSV path (a .json summary is written beside it)")
    p.set_defaults(func=cmd_compete)

    p = sub.add_parser("play", help="terminal human-vs-agent play")
    _add_common(p)
    p.add_argument("--agent", default="random")
    p.add_argument("--wrap", type=int, default=0)
    p.add_argument("--human-seat", type=int, default=0)
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("serve", help="local HTTP/SSE service for the browser UI")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8714)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", help="INI config file; explicit flags win")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("bench", help="TD-n-tuple kernel throughput (moves/s)")
    p.add_argument("--game", choices=("2048", "connect4"), default=None, help="default: both")
    p.add_argument("--seconds", type=float, default=2.0, help="timed window per measurement")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--config", help="INI config file; explicit flags win")
    p.set_defaults(func=cmd_bench)

    for name, sp in sub.choices.items():
        registry[name] = sp
    return parser, registry


def _apply_config_file(registry: dict, argv: Sequence[str]) -> None:
    """Loads --config (INI) and installs its values as subcommand defaults,
    so flags given on the command line always win."""
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return
    ini = configparser.ConfigParser()
    if not ini.read(path):
        raise UsageError(f"config file {path!r} not found or unreadable")
    subcommand = next((a for a in argv if not a.startswith("-")), None)
    if subcommand not in registry:
        return
    defaults = {}
    for section in ("global", subcommand):
        if ini.has_section(section):
            for key, value in ini.items(section):
                defaults[key.replace("-", "_")] = value
    # install as defaults with argparse-coerced types so explicit flags win
    for action in registry[subcommand]._actions:
        if action.dest in defaults:
            value = defaults[action.dest]
            if action.type is not None:
                value = action.type(value)
            elif isinstance(action.default, bool):
                value = value.strip().lower() in ("1", "true", "yes", "on")
            action.default = value
            action.required = False


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    try:
        _apply_config_file(registry, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            _ensure_seed(args)
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        print(f"available games: {', '.join(available_games())}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 1
    except Exception as e:  # noqa: BLE001 — runtime failures map to exit 1
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
