"""Textual documents for games, morphisms, and isomorphism witnesses.

The wire format is JSON tagged ``"ncg/1"``.  Utilities travel as
strings ("3", "-1/2") so no floating point ever enters the format, and
serialization is canonical: fields in a fixed order, collections
sorted, rationals in lowest terms with a positive denominator.  Parsing
a document and serializing the result reproduces the canonical text,
and any structural violation is reported through the name of the first
broken rule.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict

from .errors import (
    AxiomViolation,
    DocumentError,
    DocumentSyntaxError,
    NcgError,
)
from .game import (
    Game,
    GameMorphism,
    IsoWitness,
    build_game,
    is_isomorphism,
    validate_game_morphism,
)
from .form import build_form
from .labels import Atom, NodeLabel, Seq, SetLabel, label_key
from .preform import build_preform
from .tree import play_sort_key

__all__ = [
    "FORMAT_VERSION",
    "parse_game",
    "serialize_game",
    "game_to_document",
    "parse_morphism",
    "serialize_morphism",
    "morphism_to_document",
    "parse_witness",
    "serialize_witness",
    "witness_to_document",
    "load_game",
]

FORMAT_VERSION = "ncg/1"

_RATIONAL = re.compile(r"^[+-]?\d+(?:/0*[1-9]\d*)?$")


def _parse_rational(value) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentSyntaxError(f"utility {value!r} is not rational text")
    if isinstance(value, int):
        return Fraction(value)
    if not _RATIONAL.match(value):
        raise DocumentSyntaxError(f"utility {value!r} is not rational text")
    return Fraction(value)


def _format_rational(value: Fraction) -> str:
    return str(value)


def _node_to_spec(label: NodeLabel) -> dict:
    if isinstance(label, Atom):
        return {"atom": str(label.token)}
    if isinstance(label, Seq):
        return {"seq": [str(c) for c in label.choices]}
    if isinstance(label, SetLabel):
        return {"set": sorted(str(c) for c in label.choices)}
    raise DocumentError("UnknownLabel", f"cannot serialize node label {label!r}")


def _node_from_spec(spec) -> NodeLabel:
    if not isinstance(spec, dict) or len(spec) != 1:
        raise DocumentSyntaxError(f"node spec {spec!r} must have exactly one key")
    (kind, value), = spec.items()
    if kind == "atom":
        if not isinstance(value, str):
            raise DocumentSyntaxError(f"atom token {value!r} must be text")
        return Atom(value)
    if kind in ("seq", "set"):
        if not isinstance(value, list) or not all(isinstance(c, str) for c in value):
            raise DocumentSyntaxError(f"{kind} node {value!r} must list choice tokens")
        return Seq(tuple(value)) if kind == "seq" else SetLabel(frozenset(value))
    raise DocumentSyntaxError(f"unknown node kind {kind!r}")


def _require(mapping, key, kind, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise DocumentSyntaxError(f"{where} is missing the {key!r} field")
    value = mapping[key]
    if not isinstance(value, kind):
        raise DocumentSyntaxError(f"{where} field {key!r} has the wrong shape")
    return value


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc


def _check_version(doc, where):
    version = _require(doc, "format_version", str, where)
    if version != FORMAT_VERSION:
        raise DocumentSyntaxError(
            f"{where} has format_version {version!r}, expected {FORMAT_VERSION!r}"
        )


def _game_from_document(doc) -> Game:
    _check_version(doc, "game document")
    players = _require(doc, "players", list, "game document")
    if not all(isinstance(i, str) for i in players):
        raise DocumentSyntaxError("players must be text tokens")
    if len(set(players)) != len(players):
        raise DocumentSyntaxError("duplicate player entry")

    nodes = []
    for spec in _require(doc, "nodes", list, "game document"):
        nodes.append(_node_from_spec(spec))
    if len(set(nodes)) != len(nodes):
        raise DocumentSyntaxError("duplicate node entry")

    triples = []
    for entry in _require(doc, "edges", list, "game document"):
        if not isinstance(entry, list) or len(entry) != 3 or not isinstance(entry[1], str):
            raise DocumentSyntaxError(f"edge {entry!r} must be [node, choice, node]")
        triples.append((_node_from_spec(entry[0]), entry[1], _node_from_spec(entry[2])))

    ownership = _require(doc, "ownership", dict, "game document")
    assignment: Dict[str, frozenset] = {}
    for player, choices in ownership.items():
        if not isinstance(choices, list) or not all(isinstance(c, str) for c in choices):
            raise DocumentSyntaxError(f"ownership of {player!r} must list choice tokens")
        assignment[player] = frozenset(choices)

    utilities: Dict[str, Dict[frozenset, Fraction]] = {i: {} for i in players}
    for entry in _require(doc, "utilities", list, "game document"):
        play_nodes = _require(entry, "play", list, "utility entry")
        members = frozenset(_node_from_spec(spec) for spec in play_nodes)
        values = _require(entry, "values", dict, "utility entry")
        for player, value in values.items():
            row = utilities.setdefault(player, {})
            if members in row:
                raise DocumentSyntaxError("duplicate utility entry for one play")
            row[members] = _parse_rational(value)

    choices = frozenset(c for _t, c, _n in triples) | frozenset(
        c for cs in assignment.values() for c in cs
    )
    try:
        preform = build_preform(nodes, choices, triples)
        form = build_form(preform, players, assignment)
        return build_game(form, utilities)
    except NcgError as exc:
        raise AxiomViolation(exc) from exc


def parse_game(text: str) -> Game:
    """Read a game document, reporting the first violated rule by name."""
    return _game_from_document(_loads(text))


def load_game(path) -> Game:
    return parse_game(Path(path).read_text())


def game_to_document(g: Game) -> dict:
    """The canonical document for a game."""
    specs = {t: _node_to_spec(t) for t in g.tree.nodes}
    if len({json.dumps(spec, sort_keys=True) for spec in specs.values()}) != len(specs):
        raise DocumentError(
            "AtomCollision",
            "two distinct node labels serialize to the same text",
        )
    node_order = sorted(g.tree.nodes, key=label_key)
    edges = sorted(
        ((t, c, t_next) for (t, c), t_next in g.preform.op.items()),
        key=lambda e: (label_key(e[0]), str(e[1]), label_key(e[2])),
    )
    players = sorted(g.players, key=str)
    utilities = []
    for play in sorted(g.plays, key=play_sort_key):
        utilities.append(
            {
                "play": [specs[t] for t in play.path],
                "values": {
                    str(i): _format_rational(g.utilities[i][play]) for i in players
                },
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "players": [str(i) for i in players],
        "nodes": [specs[t] for t in node_order],
        "edges": [[specs[t], str(c), specs[t_next]] for t, c, t_next in edges],
        "ownership": {
            str(i): sorted(str(c) for c in g.form.assignment[i]) for i in players
        },
        "utilities": utilities,
    }


def serialize_game(g: Game) -> str:
    return json.dumps(game_to_document(g), indent=2, ensure_ascii=False) + "\n"


def _pairs_to_map(entries, parse_left, parse_right, what) -> dict:
    if not isinstance(entries, list):
        raise DocumentSyntaxError(f"{what} must be a list of pairs")
    mapping = {}
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 2:
            raise DocumentSyntaxError(f"{what} entry {entry!r} must be a pair")
        left = parse_left(entry[0])
        if left in mapping:
            raise DocumentSyntaxError(f"{what} maps {entry[0]!r} twice")
        mapping[left] = parse_right(entry[1])
    return mapping


def _token(value):
    if not isinstance(value, str):
        raise DocumentSyntaxError(f"token {value!r} must be text")
    return value


def _game_from_ref(ref, base_dir) -> Game:
    if isinstance(ref, str):
        return parse_game((Path(base_dir) / ref).read_text())
    if isinstance(ref, dict):
        return _game_from_document(ref)
    raise DocumentSyntaxError("game reference must be a path or an inline document")


def _morphism_from_document(doc, base_dir) -> GameMorphism:
    _check_version(doc, "morphism document")
    source = _game_from_ref(_require(doc, "source", (str, dict), "morphism document"), base_dir)
    target = _game_from_ref(_require(doc, "target", (str, dict), "morphism document"), base_dir)
    iota = _pairs_to_map(doc.get("iota", []), _token, _token, "iota")
    tau = _pairs_to_map(
        doc.get("tau", []), _node_from_spec, _node_from_spec, "tau"
    )
    delta = _pairs_to_map(doc.get("delta", []), _token, _token, "delta")
    beta_doc = _require(doc, "beta", dict, "morphism document")
    beta = {
        player: _pairs_to_map(entries, _parse_rational, _parse_rational, "beta")
        for player, entries in beta_doc.items()
    }
    try:
        return validate_game_morphism(source, target, iota, tau, delta, beta)
    except NcgError as exc:
        raise AxiomViolation(exc) from exc


def parse_morphism(text: str, base_dir=".") -> GameMorphism:
    """Read and validate a morphism document.

    Game references given as paths are resolved against ``base_dir``.
    """
    return _morphism_from_document(_loads(text), base_dir)


def morphism_to_document(m: GameMorphism) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "source": game_to_document(m.source),
        "target": game_to_document(m.target),
        "iota": [
            [str(i), str(m.iota[i])] for i in sorted(m.iota, key=str)
        ],
        "tau": [
            [_node_to_spec(t), _node_to_spec(m.tau[t])]
            for t in sorted(m.tau, key=label_key)
        ],
        "delta": [
            [str(c), str(m.delta[c])] for c in sorted(m.delta, key=str)
        ],
        "beta": {
            str(i): [
                [_format_rational(u), _format_rational(v)]
                for u, v in sorted(m.beta[i].items())
            ]
            for i in sorted(m.beta, key=str)
        },
    }


def serialize_morphism(m: GameMorphism) -> str:
    return json.dumps(morphism_to_document(m), indent=2, ensure_ascii=False) + "\n"


def witness_to_document(w: IsoWitness) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "morphism": morphism_to_document(w.morphism),
        "inverse": morphism_to_document(w.inverse),
    }


def serialize_witness(w: IsoWitness) -> str:
    return json.dumps(witness_to_document(w), indent=2, ensure_ascii=False) + "\n"


def parse_witness(text: str, base_dir=".") -> IsoWitness:
    """Read a witness document and re-validate both directions.

    The embedded morphism must be an isomorphism and the embedded
    inverse must equal its component-wise inverse.
    """
    doc = _loads(text)
    _check_version(doc, "witness document")
    morphism = _morphism_from_document(
        _require(doc, "morphism", dict, "witness document"), base_dir
    )
    claimed_inverse = _morphism_from_document(
        _require(doc, "inverse", dict, "witness document"), base_dir
    )
    witness = is_isomorphism(morphism)
    if witness is None:
        raise DocumentError("NotAnIsomorphism", "embedded morphism does not biject")
    if witness.inverse != claimed_inverse:
        raise DocumentError(
            "InverseMismatch", "embedded inverse is not the inverse of the morphism"
        )
    return witness
