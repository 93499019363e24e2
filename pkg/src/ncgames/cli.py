"""Command-line interface.

Reports are line-oriented and deterministic: identical inputs produce
byte-identical output.  Exit codes: 0 on success, 1 when validation or
a precondition fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .documents import (
    load_game,
    parse_morphism,
    parse_witness,
    serialize_game,
    serialize_morphism,
    serialize_witness,
)
from .errors import NcgError
from .form import player_strategies
from .game import compose, find_isomorphism, is_isomorphism, nash_equilibria, subgame_at
from .labels import Atom, label_key, render_label, render_token, token_key
from .preform import grand_strategies, play_of
from .transforms import canonicalize, to_choice_sequence, to_choice_set
from .tree import play_sort_key

__all__ = ["main", "cli_dispatch"]


def _info_set_order(preform):
    return sorted(
        preform.info_sets, key=lambda h: sorted(label_key(t) for t in h)
    )


def _strategy_tuple(preform, ordered_info_sets, s):
    """The strategy's choices listed information set by information set."""
    out = []
    for h in ordered_info_sets:
        chosen = s & preform.info_choices[h]
        out.extend(sorted(chosen, key=token_key))
    return tuple(out)


def _render_strategy(preform, ordered_info_sets, s) -> str:
    return (
        "{"
        + ",".join(render_token(c) for c in _strategy_tuple(preform, ordered_info_sets, s))
        + "}"
    )


def _render_play(play) -> str:
    return "{" + ",".join(render_label(t) for t in play.path) + "}"


def _render_info_set(h) -> str:
    return "{" + ",".join(
        render_label(t) for t in sorted(h, key=label_key)
    ) + "}"


def _parse_node_argument(text: str):
    try:
        spec = json.loads(text)
    except json.JSONDecodeError:
        return Atom(text)
    if isinstance(spec, dict):
        from .documents import _node_from_spec

        return _node_from_spec(spec)
    return Atom(text)


def _cmd_validate(args) -> int:
    game = load_game(args.file)
    strategies = grand_strategies(game.preform, cap=args.strategy_cap)
    print(
        f"ok: {len(game.players)} players, {len(game.tree.nodes)} nodes, "
        f"{len(game.preform.choices)} choices, {len(game.plays)} plays, "
        f"{len(strategies)} grand strategies"
    )
    return 0


def _cmd_derive(args) -> int:
    game = load_game(args.file)
    print("players: " + ",".join(sorted(render_token(i) for i in game.players)))
    print(
        "nodes: "
        + ",".join(render_label(t) for t in sorted(game.tree.nodes, key=label_key))
    )
    print("root: " + render_label(game.tree.root))
    print(
        "decision-nodes: "
        + ",".join(
            render_label(t) for t in sorted(game.tree.decision_nodes, key=label_key)
        )
    )
    print("plays:")
    for play in sorted(game.plays, key=play_sort_key):
        print(_render_play(play))
    ordered = _info_set_order(game.preform)
    print("information-sets:")
    for h in ordered:
        owner = game.form.owner[next(iter(game.preform.info_choices[h]))]
        choices = ",".join(
            sorted((render_token(c) for c in game.preform.info_choices[h]))
        )
        print(f"{_render_info_set(h)}: {render_token(owner)} {{{choices}}}")
    print("strategies:")
    for i in sorted(game.players, key=token_key):
        options = sorted(
            player_strategies(game.form, i, cap=args.strategy_cap),
            key=lambda s: _strategy_tuple(game.preform, ordered, s),
        )
        print(
            f"{render_token(i)}: "
            + " ".join(_render_strategy(game.preform, ordered, s) for s in options)
        )
    print("zeta:")
    for s in sorted(
        grand_strategies(game.preform, cap=args.strategy_cap),
        key=lambda s: _strategy_tuple(game.preform, ordered, s),
    ):
        print(
            f"{_render_strategy(game.preform, ordered, s)} -> "
            f"{_render_play(play_of(game.preform, s))}"
        )
    return 0


def _cmd_nash(args) -> int:
    game = load_game(args.file)
    ordered = _info_set_order(game.preform)
    for s in sorted(
        nash_equilibria(game, cap=args.strategy_cap),
        key=lambda s: _strategy_tuple(game.preform, ordered, s),
    ):
        print(_render_strategy(game.preform, ordered, s))
    return 0


def _cmd_convert(args) -> int:
    game = load_game(args.file)
    stem = Path(args.file).with_suffix("")
    if args.to == "csq":
        converted, witness = to_choice_sequence(game)
        style = "choice-sequence"
    elif args.to == "cset":
        converted, witness = to_choice_set(game)
        style = "choice-set"
    else:
        result = canonicalize(game)
        converted, witness, style = result.game, result.witness, result.style
    out = Path(args.output) if args.output else Path(f"{stem}.{args.to}.game")
    wout = (
        Path(args.witness_output)
        if args.witness_output
        else Path(f"{stem}.{args.to}.witness")
    )
    out.write_text(serialize_game(converted))
    wout.write_text(serialize_witness(witness))
    print(f"style: {style}")
    print(f"wrote: {out}")
    print(f"wrote: {wout}")
    return 0


def _cmd_iso(args) -> int:
    g1 = load_game(args.file1)
    g2 = load_game(args.file2)
    witness = find_isomorphism(g1, g2, budget=args.search_budget)
    if witness is None:
        print("not isomorphic")
        return 1
    wout = (
        Path(args.witness_output)
        if args.witness_output
        else Path(f"{Path(args.file1).with_suffix('')}__{Path(args.file2).stem}.witness")
    )
    wout.write_text(serialize_witness(witness))
    print("isomorphic")
    print(f"wrote: {wout}")
    return 0


def _cmd_iso_check(args) -> int:
    text = Path(args.file).read_text()
    base_dir = Path(args.file).parent
    try:
        doc = json.loads(text)
    except json.JSONDecodeError:
        doc = None
    if isinstance(doc, dict) and "morphism" in doc:
        parse_witness(text, base_dir=base_dir)
        print("valid isomorphism witness")
        return 0
    morphism = parse_morphism(text, base_dir=base_dir)
    if is_isomorphism(morphism) is None:
        print("not an isomorphism")
        return 1
    print("valid isomorphism")
    return 0


def _cmd_subgame(args) -> int:
    game = load_game(args.file)
    node = _parse_node_argument(args.at)
    sub = subgame_at(game, node)
    out = (
        Path(args.output)
        if args.output
        else Path(f"{Path(args.file).with_suffix('')}.subgame.game")
    )
    out.write_text(serialize_game(sub))
    print(f"wrote: {out}")
    return 0


def _cmd_compose(args) -> int:
    first = parse_morphism(
        Path(args.first).read_text(), base_dir=Path(args.first).parent
    )
    second = parse_morphism(
        Path(args.second).read_text(), base_dir=Path(args.second).parent
    )
    composite = compose(second, first)
    out = (
        Path(args.output)
        if args.output
        else Path(f"{Path(args.first).with_suffix('')}__{Path(args.second).stem}.morphism")
    )
    out.write_text(serialize_morphism(composite))
    print(f"wrote: {out}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncg",
        description="Validate, analyze, and convert node-and-choice game documents.",
    )
    parser.add_argument(
        "--strategy-cap",
        type=int,
        default=1 << 20,
        help="refuse exhaustive enumeration beyond this many strategies",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a game document")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser(
        "derive", help="print plays, information sets, strategies, and the play table"
    )
    p.add_argument("file")
    p.set_defaults(handler=_cmd_derive)

    p = sub.add_parser("nash", help="enumerate pure-strategy equilibria")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_nash)

    p = sub.add_parser("convert", help="convert a game to a canonical node style")
    p.add_argument("--to", choices=["csq", "cset", "canonical"], required=True)
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.add_argument("-w", "--witness-output")
    p.set_defaults(handler=_cmd_convert)

    p = sub.add_parser("iso", help="search for an isomorphism between two games")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("-w", "--witness-output")
    p.add_argument("--search-budget", type=int, default=200_000)
    p.set_defaults(handler=_cmd_iso)

    p = sub.add_parser("iso-check", help="re-validate a morphism or witness document")
    p.add_argument("file")
    p.set_defaults(handler=_cmd_iso_check)

    p = sub.add_parser("subgame", help="extract the subgame rooted at a node")
    p.add_argument("file")
    p.add_argument("--at", required=True, help="node token or JSON node spec")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_subgame)

    p = sub.add_parser("compose", help="compose two morphism documents (first, then second)")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_compose)

    return parser


def cli_dispatch(argv) -> int:
    """Run one command; returns the exit code instead of exiting."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except NcgError as exc:
        print(f"error: {exc}")
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}")
        return 1


def main(argv=None) -> int:
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
