"""Forms: a preform whose choices are owned by players.

Ownership must cover every choice exactly once, and all choices
feasible at a node must belong to one player.  Vacuous players (owning
no choices) are accepted, but only when declared explicitly with an
empty choice set; silently omitting a player from the assignment would
hide typos.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Mapping

from .errors import FormError, MorphismError, StrategySpaceTooLarge
from .labels import NodeLabel, Token, label_key, render_label, render_token, token_key
from .preform import (
    DEFAULT_STRATEGY_CAP,
    Preform,
    PreformMorphism,
    is_grand_strategy,
    is_subpreform,
    render_strategy,
    validate_preform_morphism,
)

__all__ = [
    "Form",
    "FormMorphism",
    "build_form",
    "player_strategies",
    "grand_to_profile",
    "profile_to_grand",
    "validate_form_morphism",
    "identity_form_morphism",
    "compose_form_morphisms",
    "is_subform",
]


@dataclass(frozen=True, eq=False)
class Form:
    """A validated form with per-player derived structure."""

    preform: Preform
    players: frozenset
    assignment: Mapping[Token, frozenset]
    owner: Mapping[Token, Token]
    player_nodes: Mapping[Token, frozenset]
    player_info_sets: Mapping[Token, frozenset]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.preform == other.preform
            and self.players == other.players
            and self.assignment == other.assignment
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.preform,
                self.players,
                frozenset((i, cs) for i, cs in self.assignment.items()),
            )
        )

    def __repr__(self) -> str:
        return f"Form({len(self.players)} players over {self.preform!r})"


def build_form(
    preform: Preform, players: Iterable[Token], choice_assignment: Mapping
) -> Form:
    """Validate player ownership over an already validated preform."""
    player_set = frozenset(players)
    assignment = {i: frozenset(cs) for i, cs in choice_assignment.items()}

    for i in assignment:
        if i not in player_set:
            raise FormError(
                "UnknownPlayer",
                f"assignment mentions undeclared player {render_token(i)}",
            )
    for i in player_set:
        if i not in assignment:
            raise FormError(
                "MissingPlayer",
                f"player {render_token(i)} has no choice assignment; "
                "declare vacuous players with an empty set",
            )

    owner: dict = {}
    for i in sorted(player_set, key=token_key):
        for c in assignment[i]:
            if c not in preform.choices:
                raise FormError(
                    "UnknownChoice",
                    f"player {render_token(i)} owns undeclared choice {render_token(c)}",
                )
            if c in owner:
                raise FormError(
                    "ChoiceOwnedTwice",
                    f"choice {render_token(c)} is owned by both "
                    f"{render_token(owner[c])} and {render_token(i)}",
                    axiom="[F2]",
                )
            owner[c] = i
    unassigned = preform.choices - owner.keys()
    if unassigned:
        listing = ",".join(sorted((render_token(c) for c in unassigned)))
        raise FormError(
            "UnassignedChoice",
            f"choices owned by no player: {listing}",
            axiom="[F1]",
        )

    for t in sorted(preform.tree.decision_nodes, key=label_key):
        owners = {owner[c] for c in preform.feas[t]}
        if len(owners) > 1:
            raise FormError(
                "NodeSplitAcrossPlayers",
                f"choices feasible at {render_label(t)} belong to several players",
                axiom="[F3]",
            )

    player_nodes = {}
    player_info_sets = {}
    for i in player_set:
        hs = frozenset(preform.info_set_of[c] for c in assignment[i])
        player_info_sets[i] = hs
        player_nodes[i] = frozenset(t for h in hs for t in h)

    return Form(
        preform=preform,
        players=player_set,
        assignment=assignment,
        owner=owner,
        player_nodes=player_nodes,
        player_info_sets=player_info_sets,
    )


def player_strategies(
    form: Form, i: Token, cap: int = DEFAULT_STRATEGY_CAP
) -> frozenset:
    """All choice sets selecting one feasible choice per information set of ``i``.

    A vacuous player's only strategy is the empty set.
    """
    if i not in form.players:
        raise FormError("UnknownPlayer", f"{render_token(i)} is not a player of this form")
    hs = sorted(
        form.player_info_sets[i], key=lambda h: sorted(label_key(t) for t in h)
    )
    count = prod(len(form.preform.info_choices[h]) for h in hs)
    if count > cap:
        raise StrategySpaceTooLarge(count, cap)
    pools = [sorted(form.preform.info_choices[h], key=token_key) for h in hs]
    return frozenset(frozenset(combo) for combo in itertools.product(*pools))


def grand_to_profile(form: Form, s: Iterable[Token]) -> dict:
    """Split a grand strategy into per-player components."""
    s = frozenset(s)
    if not is_grand_strategy(form.preform, s):
        raise FormError(
            "NotAStrategy",
            f"{render_strategy(s)} is not a grand strategy of this form",
        )
    return {i: s & form.assignment[i] for i in form.players}


def profile_to_grand(form: Form, profile: Mapping) -> frozenset:
    """Merge one strategy per player back into a grand strategy."""
    for i in profile:
        if i not in form.players:
            raise FormError(
                "UnknownPlayer",
                f"profile mentions undeclared player {render_token(i)}",
            )
    union: set = set()
    for i in sorted(form.players, key=token_key):
        if i not in profile:
            raise FormError(
                "MissingPlayer",
                f"profile assigns no strategy to player {render_token(i)}",
            )
        component = frozenset(profile[i])
        if not component <= form.assignment[i] or any(
            len(component & form.preform.info_choices[h]) != 1
            for h in form.player_info_sets[i]
        ):
            raise FormError(
                "InvalidComponent",
                f"{render_strategy(component)} is not a strategy of player {render_token(i)}",
                player=i,
            )
        union |= component
    return frozenset(union)


@dataclass(frozen=True, eq=False)
class FormMorphism:
    """Player, node, and choice maps preserving structure and ownership."""

    source: Form
    target: Form
    iota: Mapping[Token, Token]
    tau: Mapping[NodeLabel, NodeLabel]
    delta: Mapping[Token, Token]
    preform_morphism: PreformMorphism = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.iota == other.iota
            and self.tau == other.tau
            and self.delta == other.delta
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.source,
                self.target,
                frozenset(self.iota.items()),
                frozenset(self.tau.items()),
                frozenset(self.delta.items()),
            )
        )


def validate_form_morphism(
    source: Form, target: Form, iota: Mapping, tau: Mapping, delta: Mapping
) -> FormMorphism:
    for i in iota:
        if i not in source.players:
            raise MorphismError(
                "UnknownPlayer",
                f"map defined on {render_token(i)}, which is not a source player",
            )
    for i in source.players:
        if i not in iota:
            raise MorphismError(
                "NotTotal",
                f"map undefined on source player {render_token(i)}",
                axiom="[f1]",
            )
        if iota[i] not in target.players:
            raise MorphismError(
                "NotTotal",
                f"map sends {render_token(i)} to {render_token(iota[i])}, "
                "which is not a target player",
                axiom="[f1]",
            )
    preform_morphism = validate_preform_morphism(
        source.preform, target.preform, tau, delta
    )
    for i in sorted(source.players, key=token_key):
        image = {delta[c] for c in source.assignment[i]}
        if not image <= target.assignment[iota[i]]:
            raise MorphismError(
                "PlayerOwnershipViolated",
                f"choices of player {render_token(i)} do not all map to choices of "
                f"{render_token(iota[i])}",
                axiom="[f3]",
                player=i,
            )
    return FormMorphism(
        source, target, dict(iota), dict(tau), dict(delta), preform_morphism
    )


def identity_form_morphism(form: Form) -> FormMorphism:
    return validate_form_morphism(
        form,
        form,
        {i: i for i in form.players},
        {t: t for t in form.preform.tree.nodes},
        {c: c for c in form.preform.choices},
    )


def compose_form_morphisms(second: FormMorphism, first: FormMorphism) -> FormMorphism:
    if first.target != second.source:
        raise MorphismError(
            "TargetSourceMismatch",
            "first morphism's target differs from second morphism's source",
        )
    iota = {i: second.iota[first.iota[i]] for i in first.source.players}
    tau = {t: second.tau[first.tau[t]] for t in first.source.preform.tree.nodes}
    delta = {c: second.delta[first.delta[c]] for c in first.source.preform.choices}
    return validate_form_morphism(first.source, second.target, iota, tau, delta)


def is_subform(inner: Form, outer: Form) -> bool:
    """Whether ``inner`` is ``outer`` restricted to the up-set of ``inner``'s root."""
    if not inner.players <= outer.players:
        return False
    if any(
        not inner.assignment[i] <= outer.assignment[i] for i in inner.players
    ):
        return False
    return is_subpreform(inner.preform, outer.preform)
