"""Functioned trees: a finite node set plus an immediate-predecessor map.

A tree fixes everything later stages build on: the root, the decision
nodes (nodes that precede something), each node's stage (distance from
the root), the precedence order, and the plays (maximal chains, one per
terminal node).  All of that is derived and cached at construction
time; values are immutable afterwards and safe to share.

Only finite trees are accepted, so every play is finite and the
collection of infinite plays is always empty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Tuple

from .errors import InternalInvariantError, MorphismError, TreeError
from .labels import NodeLabel, label_key, render_label

__all__ = [
    "Play",
    "Tree",
    "TreeMorphism",
    "build_tree",
    "strict_predecessors",
    "plays",
    "subtree_at",
    "validate_tree_morphism",
    "identity_tree_morphism",
    "compose_tree_morphisms",
    "is_tree_isomorphism",
    "end_preserved_plays",
    "image_play",
    "play_sort_key",
]


@dataclass(frozen=True)
class Play:
    """A maximal chain of nodes.

    ``members`` is the chain as a set, ``end`` its maximum.  ``path``
    lists the same nodes from root to end and exists so that callers
    never re-derive the order; it does not participate in equality.
    """

    members: frozenset
    end: NodeLabel
    path: Tuple[NodeLabel, ...] = field(compare=False, repr=False)


def play_sort_key(play: Play) -> tuple:
    return tuple(label_key(t) for t in play.path)


@dataclass(frozen=True, eq=False)
class Tree:
    """A validated functioned tree together with its derived structure."""

    nodes: frozenset
    pred: Mapping[NodeLabel, NodeLabel]
    root: NodeLabel
    decision_nodes: frozenset
    stage: Mapping[NodeLabel, int]
    plays: frozenset
    children_map: Mapping[NodeLabel, Tuple[NodeLabel, ...]]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self.nodes == other.nodes and self.pred == other.pred

    def __hash__(self) -> int:
        return hash((self.nodes, frozenset(self.pred.items())))

    def __repr__(self) -> str:
        return f"Tree({len(self.nodes)} nodes, root {render_label(self.root)})"

    def parent(self, t: NodeLabel) -> Optional[NodeLabel]:
        return self.pred.get(t)

    def children(self, t: NodeLabel) -> Tuple[NodeLabel, ...]:
        return self.children_map.get(t, ())

    def path_from_root(self, t: NodeLabel) -> Tuple[NodeLabel, ...]:
        """Nodes on the chain from the root to ``t``, inclusive."""
        chain = [t]
        while chain[-1] != self.root:
            chain.append(self.pred[chain[-1]])
        chain.reverse()
        return tuple(chain)

    def weakly_precedes(self, a: NodeLabel, b: NodeLabel) -> bool:
        t = b
        while True:
            if t == a:
                return True
            if t == self.root:
                return False
            t = self.pred[t]

    def strictly_precedes(self, a: NodeLabel, b: NodeLabel) -> bool:
        return a != b and self.weakly_precedes(a, b)

    def descendants(self, t: NodeLabel) -> frozenset:
        """All nodes weakly below ``t``, i.e. the up-set of ``t``."""
        out = {t}
        frontier = [t]
        while frontier:
            u = frontier.pop()
            for child in self.children_map.get(u, ()):
                out.add(child)
                frontier.append(child)
        return frozenset(out)


def build_tree(nodes: Iterable[NodeLabel], pred_pairs: Iterable[tuple]) -> Tree:
    """Validate ``(child, parent)`` pairs and derive the tree structure.

    Rejects inputs where the pairs fail to single out a unique root
    reachable from every node in finitely many predecessor steps, where
    a child has two parents, or where fewer than two nodes are given.
    """
    node_set = frozenset(nodes)
    if len(node_set) < 2:
        raise TreeError(
            "TooSmall",
            f"a tree needs at least two nodes, got {len(node_set)}",
            axiom="[T1]",
        )

    pred: dict = {}
    for pair in pred_pairs:
        child, parent = pair
        for t in (child, parent):
            if t not in node_set:
                raise TreeError(
                    "UnknownNode",
                    f"predecessor pair mentions undeclared node {render_label(t)}",
                )
        if child in pred and pred[child] != parent:
            raise TreeError(
                "DuplicatePredecessor",
                f"node {render_label(child)} has two parents, "
                f"{render_label(pred[child])} and {render_label(parent)}",
                axiom="[T1]",
            )
        pred[child] = parent

    if not pred:
        raise TreeError(
            "NoRoot",
            "no predecessor pairs were given, so no root can be derived",
            axiom="[T1]",
        )

    roots = node_set - pred.keys()
    if not roots:
        raise TreeError(
            "Cycle",
            "every node has a predecessor, so no root exists",
            axiom="[T2]",
        )
    if len(roots) > 1:
        listing = ", ".join(render_label(t) for t in sorted(roots, key=label_key))
        raise TreeError(
            "MultipleRoots",
            f"nodes without predecessors: {listing}",
            axiom="[T2]",
        )
    (root,) = roots

    stage: dict = {root: 0}
    for start in node_set:
        walk = []
        seen = set()
        t = start
        while t not in stage:
            if t in seen:
                raise TreeError(
                    "Cycle",
                    f"predecessor chain from {render_label(start)} never reaches the root",
                    axiom="[T2]",
                )
            seen.add(t)
            walk.append(t)
            t = pred[t]
        base = stage[t]
        for offset, u in enumerate(reversed(walk), start=1):
            stage[u] = base + offset

    decision_nodes = frozenset(pred.values())
    children: dict = {}
    for child, parent in pred.items():
        children.setdefault(parent, []).append(child)
    children_map = {
        parent: tuple(sorted(kids, key=label_key)) for parent, kids in children.items()
    }

    play_set = set()
    for t in node_set - decision_nodes:
        chain = [t]
        while chain[-1] != root:
            chain.append(pred[chain[-1]])
        chain.reverse()
        play_set.add(Play(frozenset(chain), t, tuple(chain)))

    return Tree(
        nodes=node_set,
        pred=dict(pred),
        root=root,
        decision_nodes=decision_nodes,
        stage=stage,
        plays=frozenset(play_set),
        children_map=children_map,
    )


def strict_predecessors(tree: Tree, t: NodeLabel) -> frozenset:
    """All nodes strictly before ``t``; empty exactly at the root."""
    if t not in tree.nodes:
        raise TreeError("UnknownNode", f"{render_label(t)} is not a node of this tree")
    return frozenset(tree.path_from_root(t)[:-1])


def plays(tree: Tree) -> frozenset:
    """The maximal chains, one per terminal node."""
    return tree.plays


def subtree_at(tree: Tree, t_star: NodeLabel) -> Tree:
    """The tree on the up-set of ``t_star``, which becomes the new root."""
    if t_star not in tree.nodes:
        raise TreeError("UnknownNode", f"{render_label(t_star)} is not a node of this tree")
    if t_star not in tree.decision_nodes:
        raise TreeError(
            "NotDecisionNode",
            f"{render_label(t_star)} has no successors, so its up-set is a single node",
        )
    sub_nodes = tree.descendants(t_star)
    sub_pairs = [
        (child, parent)
        for child, parent in tree.pred.items()
        if child in sub_nodes and child != t_star
    ]
    return build_tree(sub_nodes, sub_pairs)


@dataclass(frozen=True, eq=False)
class TreeMorphism:
    """A node map that sends predecessor pairs to predecessor pairs."""

    source: Tree
    target: Tree
    tau: Mapping[NodeLabel, NodeLabel]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TreeMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.tau == other.tau
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, frozenset(self.tau.items())))


def validate_tree_morphism(source: Tree, target: Tree, tau: Mapping) -> TreeMorphism:
    """Check totality and edge preservation of a candidate node map."""
    for t in tau:
        if t not in source.nodes:
            raise MorphismError(
                "UnknownNode",
                f"map defined on {render_label(t)}, which is not a source node",
            )
    for t in source.nodes:
        if t not in tau:
            raise MorphismError(
                "NotTotal",
                f"map undefined on source node {render_label(t)}",
                axiom="[t1]",
            )
        if tau[t] not in target.nodes:
            raise MorphismError(
                "NotTotal",
                f"map sends {render_label(t)} to {render_label(tau[t])}, "
                "which is not a target node",
                axiom="[t1]",
            )
    for child, parent in source.pred.items():
        if target.pred.get(tau[child]) != tau[parent]:
            raise MorphismError(
                "EdgeNotPreserved",
                f"edge ({render_label(child)}, {render_label(parent)}) maps to "
                f"({render_label(tau[child])}, {render_label(tau[parent])}), "
                "which is not a target edge",
                axiom="[t2]",
                child=child,
                parent=parent,
            )
    return TreeMorphism(source, target, dict(tau))


def identity_tree_morphism(tree: Tree) -> TreeMorphism:
    return TreeMorphism(tree, tree, {t: t for t in tree.nodes})


def compose_tree_morphisms(second: TreeMorphism, first: TreeMorphism) -> TreeMorphism:
    """The morphism applying ``first`` and then ``second``."""
    if first.target != second.source:
        raise MorphismError(
            "TargetSourceMismatch",
            "first morphism's target differs from second morphism's source",
        )
    tau = {t: second.tau[first.tau[t]] for t in first.source.nodes}
    return validate_tree_morphism(first.source, second.target, tau)


def is_tree_isomorphism(m: TreeMorphism) -> Optional[TreeMorphism]:
    """The inverse morphism when the node map bijects, else ``None``."""
    values = set(m.tau.values())
    if len(values) != len(m.source.nodes) or values != set(m.target.nodes):
        return None
    inverse = {v: k for k, v in m.tau.items()}
    try:
        return validate_tree_morphism(m.target, m.source, inverse)
    except MorphismError as exc:  # pragma: no cover - bijective maps always invert
        raise InternalInvariantError(
            f"inverse of a bijective tree morphism failed validation: {exc}"
        ) from exc


def end_preserved_plays(m: TreeMorphism) -> frozenset:
    """Source plays whose end maps to a node with no strict successor.

    Exactly these plays are carried to target plays by
    :func:`image_play`; on the rest the image falls short of a maximal
    chain.
    """
    return frozenset(
        z for z in m.source.plays if m.tau[z.end] not in m.target.decision_nodes
    )


def image_play(m: TreeMorphism, z: Play) -> frozenset:
    """The image chain of ``z`` extended down to the target root."""
    if z not in m.source.plays:
        raise MorphismError("UnknownPlay", "argument is not a play of the source tree")
    prefix = strict_predecessors(m.target, m.tau[m.source.root])
    return prefix | frozenset(m.tau[t] for t in z.members)
