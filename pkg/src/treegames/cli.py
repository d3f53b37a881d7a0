"""Command line front end.

Data goes to stdout (or ``--out`` with an atomic replace), diagnostics to
stderr.  Exit codes: 0 success, 1 failed verification, 2 usage or malformed
input, 3 game validation failure, 4 engine precondition (non-tree input,
irrational payoffs for the exact engine, empty grid, size guards).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import __version__
from .approx import approximate_tree_nash, downstream_pass, enumerate_grid_equilibria
from .errors import (
    GameFileError,
    GameValidationError,
    NoEquilibriumError,
    NotATreeError,
    RationalPayoffsRequiredError,
    SizeGuardExceeded,
)
from .exact import exact_downstream, exact_tree_nash
from .game import GraphicalGame, regret
from .gamefile import (
    equilibrium_to_dict,
    load_equilibrium,
    load_game,
    save_game,
    write_atomic,
)
from .generators import (
    generate_random_connected_game,
    generate_random_cycle_game,
    generate_random_tree_game,
    rationalize_game,
)
from .grid import TauGrid
from .orientation import orient, pick_root
from .render import render_table
from .select import select_equilibrium
from .transform import (
    MultiActionGame,
    approximate_tree_nash_multi,
    make_multi_game,
    multi_regret,
    solve_sparse,
)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _emit_json(doc: dict, out: Optional[str]) -> None:
    _emit(json.dumps(doc, indent=2) + "\n", out)


def _grid_arg(args) -> Optional[TauGrid]:
    return TauGrid(args.grid_m) if args.grid_m is not None else None


def cmd_gen(args) -> int:
    if args.actions > 2:
        if args.graph != "tree":
            raise ValueError("multi-action generation supports --graph tree only")
        import random as _random

        base = generate_random_tree_game(args.n, args.max_degree, args.seed)
        rng = _random.Random(args.seed + 1)
        game = make_multi_game(
            base.n, base.edges, [args.actions] * base.n,
            lambda i, acts: rng.uniform(-1.0, 1.0),
        )
    elif args.graph == "tree":
        game = generate_random_tree_game(args.n, args.max_degree, args.seed)
    elif args.graph == "cycle":
        game = generate_random_cycle_game(args.n, args.seed)
    else:
        game = generate_random_connected_game(
            args.n, args.max_degree, args.seed, extra_edges=args.extra_edges
        )
    if args.rationalize is not None:
        if not isinstance(game, GraphicalGame):
            raise ValueError("--rationalize applies to binary games only")
        game = rationalize_game(game, args.rationalize)
    if args.out:
        save_game(args.out, game)
    else:
        from .gamefile import game_to_dict

        _emit_json(game_to_dict(game), None)
    return 0


def cmd_solve(args) -> int:
    game = load_game(args.game)
    if isinstance(game, MultiActionGame):
        if args.engine != "approx":
            raise ValueError("multi-action games support --engine approx only")
        profile, cert = approximate_tree_nash_multi(
            game, args.eps, root=args.root, policy=args.policy,
            seed=args.seed, grid_m=args.grid_m,
        )
    elif args.engine == "approx":
        profile, cert = approximate_tree_nash(
            game, args.eps, root=args.root, policy=args.policy,
            seed=args.seed, grid=_grid_arg(args), backend=args.backend,
        )
    elif args.engine == "exact":
        if args.rationalize is not None:
            game = rationalize_game(game, args.rationalize)
        profile = exact_tree_nash(game, root=args.root, policy=args.policy,
                                  seed=args.seed)
        cert = {"engine": "exact", "policy": args.policy}
    else:
        profile, cert = solve_sparse(game, args.eps, policy=args.policy,
                                     seed=args.seed)
    _emit_json(equilibrium_to_dict(game, profile, cert), args.out)
    return 0


def cmd_enumerate(args) -> int:
    game = load_game(args.game)
    if isinstance(game, MultiActionGame):
        raise ValueError("enumeration supports binary games only")
    root = pick_root(game) if args.root is None else args.root
    orientation = orient(game, root)
    grid = _grid_arg(args)
    if grid is None:
        from .grid import compute_tau

        grid = compute_tau(game.max_neighborhood_size, min(args.eps, 4.0))
    tables = downstream_pass(game, orientation, grid, args.eps,
                             retain_witnesses=True)
    profiles = enumerate_grid_equilibria(game, orientation, tables,
                                         limit=args.limit)
    _emit_json({
        "version": 1,
        "grid_m": grid.m,
        "eps": args.eps,
        "count": len(profiles),
        "profiles": [list(p) for p in profiles],
    }, args.out)
    return 0


def cmd_select(args) -> int:
    game = load_game(args.game)
    if isinstance(game, MultiActionGame):
        raise ValueError("selection supports binary games only")
    result = select_equilibrium(game, args.eps, args.objective,
                                root=args.root, grid=_grid_arg(args))
    doc = equilibrium_to_dict(game, result.profile, result.certificate)
    doc["objective"] = args.objective
    doc["value"] = result.value
    _emit_json(doc, args.out)
    return 0


def cmd_render(args) -> int:
    game = load_game(args.game)
    if isinstance(game, MultiActionGame):
        raise ValueError("rendering supports binary games only")
    root = pick_root(game) if args.root is None else args.root
    orientation = orient(game, root)
    grid = _grid_arg(args) or TauGrid(32)
    tables = downstream_pass(game, orientation, grid, args.eps)
    exact = None
    if args.exact:
        if args.rationalize is not None:
            game = rationalize_game(game, args.rationalize)
        exact = exact_downstream(game, orientation)
    if not (0 <= args.vertex < game.n):
        raise ValueError(f"--vertex must be in 0..{game.n - 1}")
    _emit(render_table(tables, exact, args.vertex, args.format), args.out)
    return 0


def cmd_verify(args) -> int:
    game = load_game(args.game)
    profile, _cert = load_equilibrium(args.equilibrium)
    if len(profile) != game.n:
        raise GameFileError(
            f"profile has {len(profile)} entries for a {game.n}-player game"
        )
    if isinstance(game, MultiActionGame):
        regrets = [multi_regret(game, i, profile) for i in range(game.n)]
    else:
        regrets = [float(regret(game, i, profile)) for i in range(game.n)]
    worst = max(regrets)
    ok = worst <= args.eps
    for i, r in enumerate(regrets):
        print(f"player {i}: regret {r:.3g}", file=sys.stderr)
    _emit_json({
        "version": 1,
        "eps": args.eps,
        "max_regret": worst,
        "ok": ok,
    }, args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="treegames",
        description="equilibrium computation for graphical games on trees",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, eps_default=None):
        sp.add_argument("game", help="game JSON file")
        sp.add_argument("--eps", type=float, default=eps_default, required=eps_default is None,
                        help="target accuracy")
        sp.add_argument("--root", type=int, default=None)
        sp.add_argument("--grid-m", type=int, default=None,
                        help="override the grid resolution")
        sp.add_argument("--out", default=None, help="write output to a file")

    sp = sub.add_parser("gen", help="generate a random game document")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--max-degree", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--graph", choices=("tree", "cycle", "connected"), default="tree")
    sp.add_argument("--extra-edges", type=int, default=2)
    sp.add_argument("--actions", type=int, default=2)
    sp.add_argument("--rationalize", type=int, default=None, metavar="DENOM",
                    help="snap payoffs to multiples of 1/DENOM")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("solve", help="compute one equilibrium")
    common(sp, eps_default=0.1)
    sp.add_argument("--engine", choices=("approx", "exact", "sparse"), default="approx")
    sp.add_argument("--policy", choices=("first", "random"), default="first")
    sp.add_argument("--seed", type=int, default=None)
    sp.add_argument("--backend", choices=("python", "cython"), default=None)
    sp.add_argument("--rationalize", type=int, default=None, metavar="DENOM")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("enumerate", help="list all grid equilibria")
    common(sp, eps_default=0.1)
    sp.add_argument("--limit", type=int, default=None)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("select", help="pick an equilibrium optimising an objective")
    common(sp, eps_default=0.1)
    sp.add_argument("--objective", default="social",
                    help="social, welfare, or player:<id>")
    sp.set_defaults(func=cmd_select)

    sp = sub.add_parser("render", help="draw a vertex's admissibility table")
    common(sp, eps_default=0.1)
    sp.add_argument("--vertex", type=int, required=True)
    sp.add_argument("--format", choices=("txt", "pgm"), default="txt")
    sp.add_argument("--exact", action="store_true",
                    help="overlay the exact feasible set (rational payoffs)")
    sp.add_argument("--rationalize", type=int, default=None, metavar="DENOM")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("verify", help="check a saved profile against a game")
    sp.add_argument("game")
    sp.add_argument("equilibrium")
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GameFileError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except GameValidationError as err:
        print("invalid game:", file=sys.stderr)
        for v in err.violations:
            print(f"  - {v}", file=sys.stderr)
        return 3
    except (NotATreeError, NoEquilibriumError, RationalPayoffsRequiredError,
            SizeGuardExceeded) as err:
        print(f"error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
