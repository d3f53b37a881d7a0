"""JSON documents for games and equilibria.

A game document is ``{"version": 1, "players": [...]}`` where each player
record carries its id, action count, neighbor list (ascending) and flat
payoff table with the owner's action most significant.  Payoff entries may
be JSON numbers or exact fractions written as ``"a/b"`` strings; fractions
and integers survive a round trip exactly, so a game saved with rational
payoffs can be fed back to the exact engine.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from typing import Union

from .errors import GameFileError
from .game import GraphicalGame, LocalMatrix, regret, validate
from .transform import MultiActionGame, MultiMatrix, multi_regret, validate_multi

FORMAT_VERSION = 1

AnyGame = Union[GraphicalGame, MultiActionGame]


def _encode_payoff(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, float)):
        return x
    raise GameFileError(f"cannot encode payoff of type {type(x).__name__}")


def _decode_payoff(x):
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as err:
            raise GameFileError(f"bad fraction string {x!r}") from err
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise GameFileError(f"payoff entries must be numbers or 'a/b' strings, got {x!r}")
    return x


def game_to_dict(game: AnyGame) -> dict:
    players = []
    for i in range(game.n):
        mat = game.matrices[i]
        actions = mat.radices[0] if isinstance(game, MultiActionGame) else 2
        players.append({
            "id": i,
            "actions": actions,
            "neighbors": list(game.neighbors(i)),
            "payoffs": [_encode_payoff(x) for x in mat.payoffs],
        })
    return {"version": FORMAT_VERSION, "players": players}


def game_from_dict(doc: dict) -> AnyGame:
    if not isinstance(doc, dict):
        raise GameFileError("top-level document must be an object")
    if doc.get("version") != FORMAT_VERSION:
        raise GameFileError(f"unsupported document version {doc.get('version')!r}")
    players = doc.get("players")
    if not isinstance(players, list) or not players:
        raise GameFileError("document needs a non-empty 'players' list")
    n = len(players)
    actions = [0] * n
    neighbor_lists: list[list[int]] = [[] for _ in range(n)]
    payoff_lists: list[list] = [[] for _ in range(n)]
    seen_ids = set()
    for rec in players:
        if not isinstance(rec, dict):
            raise GameFileError("player records must be objects")
        try:
            pid = rec["id"]
            acts = rec.get("actions", 2)
            nbrs = rec["neighbors"]
            pays = rec["payoffs"]
        except KeyError as err:
            raise GameFileError(f"player record missing key {err}") from err
        if not isinstance(pid, int) or not (0 <= pid < n) or pid in seen_ids:
            raise GameFileError(f"player ids must cover 0..{n - 1} exactly once")
        seen_ids.add(pid)
        if not isinstance(acts, int) or acts < 2:
            raise GameFileError(f"player {pid}: action count must be an int >= 2")
        if not isinstance(nbrs, list) or any(not isinstance(j, int) for j in nbrs):
            raise GameFileError(f"player {pid}: neighbors must be a list of ints")
        if nbrs != sorted(nbrs) or len(set(nbrs)) != len(nbrs):
            raise GameFileError(f"player {pid}: neighbors must be ascending and unique")
        if any(not (0 <= j < n) or j == pid for j in nbrs):
            raise GameFileError(f"player {pid}: neighbor ids out of range")
        if not isinstance(pays, list):
            raise GameFileError(f"player {pid}: payoffs must be a list")
        actions[pid] = acts
        neighbor_lists[pid] = nbrs
        payoff_lists[pid] = [_decode_payoff(x) for x in pays]
    for i in range(n):
        for j in neighbor_lists[i]:
            if i not in neighbor_lists[j]:
                raise GameFileError(f"edge ({i}, {j}) is not symmetric")
    edges = frozenset(
        (min(i, j), max(i, j)) for i in range(n) for j in neighbor_lists[i]
    )
    for i in range(n):
        hood = (i,) + tuple(neighbor_lists[i])
        expect = 1
        for j in hood:
            expect *= actions[j]
        if len(payoff_lists[i]) != expect:
            raise GameFileError(
                f"player {i}: payoff table has {len(payoff_lists[i])} entries, "
                f"expected {expect}"
            )
    if all(a == 2 for a in actions):
        mats = tuple(
            LocalMatrix(owner=i,
                        neighborhood=(i,) + tuple(neighbor_lists[i]),
                        payoffs=tuple(payoff_lists[i]))
            for i in range(n)
        )
        return GraphicalGame(n=n, edges=edges, matrices=mats)
    mmats = tuple(
        MultiMatrix(owner=i,
                    neighborhood=(i,) + tuple(neighbor_lists[i]),
                    radices=tuple(actions[j] for j in (i,) + tuple(neighbor_lists[i])),
                    payoffs=tuple(payoff_lists[i]))
        for i in range(n)
    )
    return MultiActionGame(n=n, edges=edges, actions=tuple(actions), matrices=mmats)


def write_atomic(path: str, text: str) -> None:
    """Write via a temp file in the same directory plus an atomic rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def save_game(path: str, game: AnyGame) -> None:
    write_atomic(path, json.dumps(game_to_dict(game), indent=2) + "\n")


def load_game(path: str) -> AnyGame:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise GameFileError(f"{path}: not valid JSON ({err})") from err
    game = game_from_dict(doc)
    violations = (validate_multi(game) if isinstance(game, MultiActionGame)
                  else validate(game))
    if violations:
        from .errors import GameValidationError

        raise GameValidationError(violations)
    return game


def _encode_value(x):
    """Profile entries: fractions as strings, tuples recursively."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (tuple, list)):
        return [_encode_value(v) for v in x]
    return x


def _decode_value(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, list):
        return tuple(_decode_value(v) for v in x)
    return x


def equilibrium_to_dict(game: AnyGame, profile, certificate=None) -> dict:
    if isinstance(game, MultiActionGame):
        regrets = [multi_regret(game, i, profile) for i in range(game.n)]
    else:
        regrets = [regret(game, i, profile) for i in range(game.n)]
    doc = {
        "version": FORMAT_VERSION,
        "profile": [_encode_value(x) for x in profile],
        "regrets": [_encode_value(r) for r in regrets],
    }
    if certificate is not None:
        cert = asdict(certificate) if is_dataclass(certificate) else dict(certificate)
        doc["certificate"] = json.loads(json.dumps(cert, default=_encode_payoff))
    return doc


def equilibrium_from_dict(doc: dict) -> tuple[tuple, dict]:
    """Profile and certificate (possibly empty) from a saved document."""
    if not isinstance(doc, dict) or doc.get("version") != FORMAT_VERSION:
        raise GameFileError("unsupported equilibrium document")
    prof = doc.get("profile")
    if not isinstance(prof, list) or not prof:
        raise GameFileError("equilibrium document needs a non-empty 'profile'")
    try:
        profile = tuple(_decode_value(x) for x in prof)
    except (ValueError, ZeroDivisionError) as err:
        raise GameFileError(f"bad profile entry ({err})") from err
    return profile, doc.get("certificate") or {}


def save_equilibrium(path: str, game: AnyGame, profile, certificate=None) -> None:
    doc = equilibrium_to_dict(game, profile, certificate)
    write_atomic(path, json.dumps(doc, indent=2) + "\n")


def load_equilibrium(path: str) -> tuple[tuple, dict]:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as err:
        raise GameFileError(f"{path}: not valid JSON ({err})") from err
    return equilibrium_from_dict(doc)
