"""Style predicates and constructive conversions between node styles.

Any game can be relabeled so that each node literally is the sequence
of choices leading to it; the relabeling is an isomorphism and is
returned alongside the converted game as a machine-checked witness.
Collapsing those sequences to sets is also possible, but only for
games without absentmindedness: with an information set containing two
comparable nodes, distinct histories would collapse to one set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from .errors import InternalInvariantError, TransformError
from .form import build_form
from .game import Game, IsoWitness, build_game, compose, is_isomorphism, validate_game_morphism
from .labels import NodeLabel, Seq, SetLabel, Token, render_token, token_key
from .preform import build_preform

__all__ = [
    "StyleReport",
    "CanonicalForm",
    "style_report",
    "to_choice_sequence",
    "to_choice_set",
    "canonicalize",
    "apply_utility_transform",
    "relabel_game",
]


@dataclass(frozen=True)
class StyleReport:
    """Structural style flags of a game."""

    no_absentmindedness: bool
    perfect_information: bool
    uses_choice_sequences: bool
    uses_choice_sets: bool


@dataclass(frozen=True)
class CanonicalForm:
    """Result of :func:`canonicalize`: the game, its witness, and the style reached."""

    game: Game
    witness: IsoWitness
    style: str


def style_report(g: Game) -> StyleReport:
    """Evaluate the four style predicates structurally."""
    tree = g.tree
    no_absent = True
    for h in g.preform.info_sets:
        members = sorted(h, key=lambda t: tree.stage[t])
        for idx, t_a in enumerate(members):
            if any(tree.strictly_precedes(t_a, t_b) for t_b in members[idx + 1 :]):
                no_absent = False
                break
        if not no_absent:
            break
    perfect = all(len(h) == 1 for h in g.preform.info_sets)

    uses_seq = all(isinstance(t, Seq) for t in tree.nodes) and Seq(()) in tree.nodes
    if uses_seq:
        uses_seq = all(
            t_next.choices == t.choices + (c,)
            for (t, c), t_next in g.preform.op.items()
        )
    uses_set = (
        all(isinstance(t, SetLabel) for t in tree.nodes)
        and SetLabel(frozenset()) in tree.nodes
    )
    if uses_set:
        uses_set = all(
            t_next.choices == t.choices | {c}
            for (t, c), t_next in g.preform.op.items()
        )

    if perfect and not no_absent:  # pragma: no cover - singletons have no pairs
        raise InternalInvariantError("perfect information without no-absentmindedness")
    if uses_set and not no_absent:  # pragma: no cover - set labels forbid pooling along a path
        raise InternalInvariantError("choice-set style without no-absentmindedness")

    return StyleReport(
        no_absentmindedness=no_absent,
        perfect_information=perfect,
        uses_choice_sequences=uses_seq,
        uses_choice_sets=uses_set,
    )


def _transport(g: Game, tau: Mapping[NodeLabel, NodeLabel]) -> Game:
    """The game on relabeled nodes, with utilities carried along the images."""
    triples = [
        (tau[t], c, tau[t_next]) for (t, c), t_next in g.preform.op.items()
    ]
    preform = build_preform(
        {tau[t] for t in g.tree.nodes}, g.preform.choices, triples
    )
    form = build_form(preform, g.players, g.form.assignment)
    utilities = {}
    for i in g.players:
        row = {}
        for z in g.plays:
            image = frozenset(tau[t] for t in z.members)
            row[image] = g.utilities[i][z]
        utilities[i] = row
    return build_game(form, utilities)


def _identity_witness(g: Game, converted: Game, tau: Mapping) -> IsoWitness:
    morphism = validate_game_morphism(
        g,
        converted,
        {i: i for i in g.players},
        dict(tau),
        {c: c for c in g.preform.choices},
        {i: {u: u for u in g.ranges[i]} for i in g.players},
    )
    witness = is_isomorphism(morphism)
    if witness is None:  # pragma: no cover - relabelings always biject
        raise InternalInvariantError("style conversion did not produce an isomorphism")
    return witness


def to_choice_sequence(g: Game) -> Tuple[Game, IsoWitness]:
    """Relabel every node as the sequence of choices leading to it.

    Total on valid games, absentminded ones included; the root becomes
    the empty sequence.
    """
    tree = g.tree
    tau = {
        t: Seq(tuple(g.preform.prev_choice[u] for u in tree.path_from_root(t)[1:]))
        for t in tree.nodes
    }
    if len(set(tau.values())) != len(tau):  # pragma: no cover - histories are unique
        raise InternalInvariantError("two nodes share their choice history")
    converted = _transport(g, tau)
    return converted, _identity_witness(g, converted, tau)


def to_choice_set(g: Game) -> Tuple[Game, IsoWitness]:
    """Collapse sequence labels to their sets of members.

    Defined on choice-sequence games without absentmindedness; on those
    the collapse is injective, which is re-verified at runtime rather
    than trusted.
    """
    report = style_report(g)
    if not report.uses_choice_sequences:
        raise TransformError(
            "NotChoiceSequenceGame",
            "nodes must be choice sequences before collapsing them to sets",
        )
    if not report.no_absentmindedness:
        raise TransformError(
            "Absentminded",
            "an information set contains two comparable nodes, so distinct "
            "histories would collapse to one set",
        )
    tau = {t: SetLabel(frozenset(t.choices)) for t in g.tree.nodes}
    if len(set(tau.values())) != len(tau):
        raise InternalInvariantError(
            "collapsing histories to sets identified two distinct nodes"
        )
    converted = _transport(g, tau)
    return converted, _identity_witness(g, converted, tau)


def canonicalize(g: Game) -> CanonicalForm:
    """Convert to the choice-set style when possible, else to choice sequences.

    The returned witness composes the stage witnesses, and the ``style``
    field reports which style was reached instead of failing on
    absentminded inputs.
    """
    seq_game, seq_witness = to_choice_sequence(g)
    if not style_report(seq_game).no_absentmindedness:
        return CanonicalForm(seq_game, seq_witness, "choice-sequence")
    set_game, set_witness = to_choice_set(seq_game)
    combined = compose(set_witness.morphism, seq_witness.morphism)
    witness = is_isomorphism(combined)
    if witness is None:  # pragma: no cover - composites of isomorphisms are isomorphisms
        raise InternalInvariantError("composite conversion witness is not an isomorphism")
    return CanonicalForm(set_game, witness, "choice-set")


def apply_utility_transform(g: Game, maps: Mapping) -> Tuple[Game, IsoWitness]:
    """Rescale each player's utilities by a strictly increasing finite map.

    Players omitted from ``maps`` keep their utilities.  Each supplied
    map must be strictly increasing on the player's full utility range,
    which in particular requires it to be defined there.
    """
    for i in maps:
        if i not in g.players:
            raise TransformError(
                "UnknownPlayer",
                f"utility transform given for undeclared player {render_token(i)}",
            )
    beta: Dict[Token, Dict[Fraction, Fraction]] = {}
    for i in sorted(g.players, key=token_key):
        supplied = {
            Fraction(u) if not isinstance(u, Fraction) else u:
            Fraction(v) if not isinstance(v, Fraction) else v
            for u, v in maps.get(i, {}).items()
        }
        bmap = {}
        for u in g.ranges[i]:
            if i in maps and u not in supplied:
                raise TransformError(
                    "NotStrictlyIncreasing",
                    f"transform for {render_token(i)} is undefined at {u}, so it is "
                    "not strictly increasing on the full utility range",
                    player=i,
                )
            bmap[u] = supplied.get(u, u)
        ordered = sorted(bmap)
        for u1, u2 in zip(ordered, ordered[1:]):
            if bmap[u1] >= bmap[u2]:
                raise TransformError(
                    "NotStrictlyIncreasing",
                    f"transform for {render_token(i)} sends {u1} and {u2} out of order",
                    player=i,
                )
        beta[i] = bmap
    utilities = {
        i: {z: beta[i][g.utilities[i][z]] for z in g.plays} for i in g.players
    }
    converted = build_game(g.form, utilities)
    morphism = validate_game_morphism(
        g,
        converted,
        {i: i for i in g.players},
        {t: t for t in g.tree.nodes},
        {c: c for c in g.preform.choices},
        beta,
    )
    witness = is_isomorphism(morphism)
    if witness is None:  # pragma: no cover - strict maps always biject onto the new range
        raise InternalInvariantError("utility transform did not produce an isomorphism")
    return converted, witness


def relabel_game(
    g: Game,
    node_map: Optional[Mapping] = None,
    choice_map: Optional[Mapping] = None,
    player_map: Optional[Mapping] = None,
) -> Tuple[Game, IsoWitness]:
    """Rename nodes, choices, and players; the renaming is an isomorphism.

    Maps default to the identity and must be injective on their
    domains.
    """
    tau = {t: (node_map or {}).get(t, t) for t in g.tree.nodes}
    delta = {c: (choice_map or {}).get(c, c) for c in g.preform.choices}
    iota = {i: (player_map or {}).get(i, i) for i in g.players}
    for name, mapping in (("node", tau), ("choice", delta), ("player", iota)):
        if len(set(mapping.values())) != len(mapping):
            raise TransformError(
                "NotInjective", f"{name} relabeling identifies two distinct {name}s"
            )
    triples = [
        (tau[t], delta[c], tau[t_next]) for (t, c), t_next in g.preform.op.items()
    ]
    preform = build_preform(set(tau.values()), set(delta.values()), triples)
    assignment = {
        iota[i]: frozenset(delta[c] for c in g.form.assignment[i]) for i in g.players
    }
    form = build_form(preform, set(iota.values()), assignment)
    utilities = {
        iota[i]: {
            frozenset(tau[t] for t in z.members): g.utilities[i][z] for z in g.plays
        }
        for i in g.players
    }
    converted = build_game(form, utilities)
    morphism = validate_game_morphism(
        g,
        converted,
        iota,
        tau,
        delta,
        {i: {u: u for u in g.ranges[i]} for i in g.players},
    )
    witness = is_isomorphism(morphism)
    if witness is None:  # pragma: no cover - injective renamings always biject
        raise InternalInvariantError("relabeling did not produce an isomorphism")
    return converted, witness
