"""Preforms: a tree presented through choices and a node-and-choice operator.

The primitive datum is the operator graph, a set of triples
``(node, choice, successor)``.  The tree, the feasibility map, the
information sets, and the previous-choice map are all derived from it;
supplying them independently would only invite inconsistency.

An information set is the set of nodes at which a given choice is
feasible.  Validation requires these sets to partition the decision
nodes, which forces all choices feasible at a common node to share one
information set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import FrozenSet, Iterable, Mapping, Tuple

from .errors import (
    InternalInvariantError,
    MorphismError,
    PreformError,
    StrategySpaceTooLarge,
    TreeError,
)
from .labels import NodeLabel, Token, label_key, render_label, render_token, token_key
from .tree import (
    Play,
    Tree,
    TreeMorphism,
    build_tree,
    validate_tree_morphism,
)

__all__ = [
    "DEFAULT_STRATEGY_CAP",
    "Preform",
    "PreformMorphism",
    "build_preform",
    "count_grand_strategies",
    "grand_strategies",
    "is_grand_strategy",
    "play_of",
    "validate_preform_morphism",
    "identity_preform_morphism",
    "compose_preform_morphisms",
    "is_subpreform",
]

#: Exhaustive strategy enumeration refuses beyond this many strategies
#: unless the caller raises the cap explicitly.
DEFAULT_STRATEGY_CAP = 1 << 20


def render_strategy(s: FrozenSet[Token]) -> str:
    return "{" + ",".join(sorted((render_token(c) for c in s))) + "}"


@dataclass(frozen=True, eq=False)
class Preform:
    """A validated preform with its derived structure.

    ``op`` maps ``(node, choice)`` to the successor node, ``feas`` gives
    the feasible choices at each decision node, ``info_sets`` collects
    the information sets, ``info_choices`` the choices shared by each
    information set, and ``prev_choice`` the choice that produced each
    non-root node.
    """

    tree: Tree
    choices: frozenset
    op: Mapping[Tuple[NodeLabel, Token], NodeLabel]
    feas: Mapping[NodeLabel, frozenset]
    info_sets: frozenset
    info_choices: Mapping[frozenset, frozenset]
    info_set_of: Mapping[Token, frozenset]
    prev_choice: Mapping[NodeLabel, Token]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Preform):
            return NotImplemented
        return (
            self.tree == other.tree
            and self.choices == other.choices
            and self.op == other.op
        )

    def __hash__(self) -> int:
        return hash((self.tree, self.choices, frozenset(self.op.items())))

    def __repr__(self) -> str:
        return (
            f"Preform({len(self.tree.nodes)} nodes, {len(self.choices)} choices, "
            f"{len(self.info_sets)} information sets)"
        )

    @property
    def triples(self) -> frozenset:
        return frozenset((t, c, t_next) for (t, c), t_next in self.op.items())

    def feasible(self, t: NodeLabel) -> frozenset:
        return self.feas.get(t, frozenset())


def build_preform(
    nodes: Iterable[NodeLabel],
    choices: Iterable[Token],
    op_triples: Iterable[tuple],
) -> Preform:
    """Validate operator triples and derive the tree and information sets."""
    node_set = frozenset(nodes)
    choice_set = frozenset(choices)

    op: dict = {}
    hit_by: dict = {}
    for triple in op_triples:
        t, c, t_next = triple
        for node in (t, t_next):
            if node not in node_set:
                raise PreformError(
                    "UnknownNode",
                    f"operator triple mentions undeclared node {render_label(node)}",
                )
        if c not in choice_set:
            raise PreformError(
                "UnknownChoice",
                f"operator triple mentions undeclared choice {render_token(c)}",
            )
        key = (t, c)
        if key in op:
            if op[key] == t_next:
                continue
            raise PreformError(
                "OperatorNotInjective",
                f"({render_label(t)}, {render_token(c)}) maps to both "
                f"{render_label(op[key])} and {render_label(t_next)}",
                axiom="[P1]",
            )
        if t_next in hit_by:
            t0, c0 = hit_by[t_next]
            raise PreformError(
                "OperatorNotInjective",
                f"node {render_label(t_next)} is reached by both "
                f"({render_label(t0)}, {render_token(c0)}) and "
                f"({render_label(t)}, {render_token(c)})",
                axiom="[P1]",
            )
        op[key] = t_next
        hit_by[t_next] = key

    if node_set and node_set <= set(hit_by):
        raise PreformError(
            "OperatorHitsRoot",
            "every declared node is reached by a choice, so the operator hits the root",
            axiom="[P1]",
        )

    pairs = [(t_next, t) for (t, _c), t_next in op.items()]
    try:
        tree = build_tree(node_set, pairs)
    except TreeError as exc:
        if exc.code == "TooSmall":
            raise
        raise PreformError(
            "NodeUnreachable",
            f"derived predecessor structure is not a tree ({exc})",
            axiom="[P2]",
        ) from exc

    feas: dict = {}
    for (t, c), _t_next in op.items():
        feas.setdefault(t, set()).add(c)
    feas = {t: frozenset(cs) for t, cs in feas.items()}
    if set(feas) != set(tree.decision_nodes):  # pragma: no cover - true by derivation
        raise InternalInvariantError("decision nodes differ from nodes with feasible choices")

    ftop = {
        c: frozenset(t for (t, cc) in op if cc == c)
        for c in choice_set
    }
    for c in sorted(choice_set, key=token_key):
        if not ftop[c]:
            raise PreformError(
                "OrphanChoice",
                f"choice {render_token(c)} is feasible at no node",
                axiom="[P3]",
            )

    info_set_of = dict(ftop)
    info_sets = frozenset(ftop.values())
    claimed: dict = {}
    for h in info_sets:
        for t in h:
            if t in claimed and claimed[t] != h:
                raise PreformError(
                    "InfoSetOverlap",
                    f"node {render_label(t)} lies in two distinct information sets",
                    axiom="[P3]",
                )
            claimed[t] = h

    info_choices = {}
    for h in info_sets:
        shared = frozenset(c for c in choice_set if ftop[c] == h)
        for t in h:
            if feas[t] != shared:  # pragma: no cover - implied by the partition
                raise InternalInvariantError(
                    "feasible choices at a node differ from its information set's choices"
                )
        info_choices[h] = shared

    prev_choice = {t_next: c for (t, c), t_next in op.items()}

    return Preform(
        tree=tree,
        choices=choice_set,
        op=dict(op),
        feas=feas,
        info_sets=info_sets,
        info_choices=info_choices,
        info_set_of=info_set_of,
        prev_choice=prev_choice,
    )


def count_grand_strategies(pf: Preform) -> int:
    return prod(len(pf.info_choices[h]) for h in pf.info_sets)


def grand_strategies(pf: Preform, cap: int = DEFAULT_STRATEGY_CAP) -> frozenset:
    """All choice sets selecting exactly one feasible choice per information set."""
    count = count_grand_strategies(pf)
    if count > cap:
        raise StrategySpaceTooLarge(count, cap)
    pools = [
        sorted(pf.info_choices[h], key=token_key)
        for h in sorted(pf.info_sets, key=lambda h: sorted(label_key(t) for t in h))
    ]
    return frozenset(frozenset(combo) for combo in itertools.product(*pools))


def is_grand_strategy(pf: Preform, s: Iterable[Token]) -> bool:
    s = frozenset(s)
    if not s <= pf.choices:
        return False
    return all(len(s & pf.info_choices[h]) == 1 for h in pf.info_sets)


def play_of(pf: Preform, s: Iterable[Token]) -> Play:
    """The unique play whose every non-root node was produced by ``s``.

    Computed by walking from the root, at each decision node following
    the one choice the strategy selects there, until a terminal node.
    """
    s = frozenset(s)
    if not is_grand_strategy(pf, s):
        raise PreformError(
            "NotAStrategy",
            f"{render_strategy(s)} does not select exactly one feasible choice "
            "per information set",
        )
    t = pf.tree.root
    path = [t]
    while t in pf.tree.decision_nodes:
        (c,) = s & pf.feas[t]
        t = pf.op[(t, c)]
        path.append(t)
    return Play(frozenset(path), t, tuple(path))


@dataclass(frozen=True, eq=False)
class PreformMorphism:
    """A node map and a choice map preserving the operator graph."""

    source: Preform
    target: Preform
    tau: Mapping[NodeLabel, NodeLabel]
    delta: Mapping[Token, Token]
    tree_morphism: TreeMorphism = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PreformMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.tau == other.tau
            and self.delta == other.delta
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.source,
                self.target,
                frozenset(self.tau.items()),
                frozenset(self.delta.items()),
            )
        )


def validate_preform_morphism(
    source: Preform, target: Preform, tau: Mapping, delta: Mapping
) -> PreformMorphism:
    for c in delta:
        if c not in source.choices:
            raise MorphismError(
                "UnknownChoice",
                f"map defined on {render_token(c)}, which is not a source choice",
            )
    for c in source.choices:
        if c not in delta:
            raise MorphismError(
                "NotTotal",
                f"map undefined on source choice {render_token(c)}",
                axiom="[p1]",
            )
        if delta[c] not in target.choices:
            raise MorphismError(
                "NotTotal",
                f"map sends {render_token(c)} to {render_token(delta[c])}, "
                "which is not a target choice",
                axiom="[p1]",
            )
    for t in tau:
        if t not in source.tree.nodes:
            raise MorphismError(
                "UnknownNode",
                f"map defined on {render_label(t)}, which is not a source node",
            )
    for t in source.tree.nodes:
        if t not in tau:
            raise MorphismError(
                "NotTotal",
                f"map undefined on source node {render_label(t)}",
                axiom="[p1]",
            )
        if tau[t] not in target.tree.nodes:
            raise MorphismError(
                "NotTotal",
                f"map sends {render_label(t)} to {render_label(tau[t])}, "
                "which is not a target node",
                axiom="[p1]",
            )
    for (t, c), t_next in source.op.items():
        if target.op.get((tau[t], delta[c])) != tau[t_next]:
            raise MorphismError(
                "TripleNotPreserved",
                f"triple ({render_label(t)}, {render_token(c)}, {render_label(t_next)}) "
                "does not map into the target operator graph",
                axiom="[p2]",
                node=t,
                choice=c,
                successor=t_next,
            )
    tree_morphism = validate_tree_morphism(source.tree, target.tree, tau)
    return PreformMorphism(source, target, dict(tau), dict(delta), tree_morphism)


def identity_preform_morphism(pf: Preform) -> PreformMorphism:
    return validate_preform_morphism(
        pf, pf, {t: t for t in pf.tree.nodes}, {c: c for c in pf.choices}
    )


def compose_preform_morphisms(
    second: PreformMorphism, first: PreformMorphism
) -> PreformMorphism:
    if first.target != second.source:
        raise MorphismError(
            "TargetSourceMismatch",
            "first morphism's target differs from second morphism's source",
        )
    tau = {t: second.tau[first.tau[t]] for t in first.source.tree.nodes}
    delta = {c: second.delta[first.delta[c]] for c in first.source.choices}
    return validate_preform_morphism(first.source, second.target, tau, delta)


def is_subpreform(inner: Preform, outer: Preform) -> bool:
    """Whether ``inner`` is ``outer`` restricted to the up-set of ``inner``'s root.

    Holds exactly when the inner node set is the full up-set, the inner
    choices and operator triples are contained in the outer ones, and
    every inner information set is an outer information set.
    """
    root = inner.tree.root
    if root not in outer.tree.nodes:
        return False
    if inner.tree.nodes != outer.tree.descendants(root):
        return False
    if not inner.choices <= outer.choices:
        return False
    if any(outer.op.get(key) != t_next for key, t_next in inner.op.items()):
        return False
    return inner.info_sets <= outer.info_sets
