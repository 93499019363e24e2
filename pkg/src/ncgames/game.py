"""Games: a form plus one exact-rational utility function per player.

Utilities are :class:`fractions.Fraction` values keyed by plays.  Exact
arithmetic is not a nicety here: morphism validation demands exact
order and equality of utilities, and floats would produce spurious
failures.  Each utility function's codomain is defined to be its range,
so surjectivity holds by construction.

A game morphism carries player, node, and choice maps plus one finite
weakly increasing utility map per player, defined exactly on the
utilities of the end-preserved plays.  Isomorphisms are the morphisms
whose every component bijects; they come with an explicit inverse,
packaged as an :class:`IsoWitness` so third parties can re-validate
without searching.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional

from .errors import (
    GameError,
    InternalInvariantError,
    MorphismError,
    SearchBudgetExceeded,
)
from .form import (
    Form,
    FormMorphism,
    build_form,
    is_subform,
    player_strategies,
    validate_form_morphism,
)
from .labels import NodeLabel, Token, label_key, render_label, render_token, token_key
from .preform import (
    DEFAULT_STRATEGY_CAP,
    Preform,
    build_preform,
    grand_strategies,
    is_grand_strategy,
    play_of,
    render_strategy,
)
from .tree import (
    Play,
    Tree,
    TreeMorphism,
    compose_tree_morphisms,
    end_preserved_plays,
    image_play,
    strict_predecessors,
    subtree_at,
)

__all__ = [
    "Game",
    "GameMorphism",
    "IsoWitness",
    "build_game",
    "validate_game_morphism",
    "identity_morphism",
    "compose",
    "is_isomorphism",
    "find_isomorphism",
    "is_subgame",
    "subgame_at",
    "nash_equilibria",
    "is_nash",
    "forget_to_form",
    "forget_to_preform",
    "forget_to_tree",
    "forget_morphism_to_form",
    "forget_morphism_to_preform",
    "forget_morphism_to_tree",
]


@dataclass(frozen=True, eq=False)
class Game:
    """A validated game: form plus per-player utility tables over plays."""

    form: Form
    utilities: Mapping[Token, Mapping[Play, Fraction]]
    ranges: Mapping[Token, frozenset]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return self.form == other.form and self.utilities == other.utilities

    def __hash__(self) -> int:
        return hash(
            (
                self.form,
                frozenset(
                    (i, frozenset(row.items())) for i, row in self.utilities.items()
                ),
            )
        )

    def __repr__(self) -> str:
        return f"Game({self.form!r})"

    @property
    def preform(self) -> Preform:
        return self.form.preform

    @property
    def tree(self) -> Tree:
        return self.form.preform.tree

    @property
    def players(self) -> frozenset:
        return self.form.players

    @property
    def plays(self) -> frozenset:
        return self.tree.plays

    def utility(self, i: Token, play: Play) -> Fraction:
        return self.utilities[i][play]

    def play_with_members(self, members: Iterable[NodeLabel]) -> Optional[Play]:
        members = frozenset(members)
        for play in self.plays:
            if play.members == members:
                return play
        return None


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise GameError(
        "NotRational",
        f"utility {value!r} is not an exact rational; floats are rejected",
    )


def build_game(form: Form, utilities: Mapping) -> Game:
    """Validate a utility table: every play priced for every player."""
    plays_by_members = {p.members: p for p in form.preform.tree.plays}
    for i in utilities:
        if i not in form.players:
            raise GameError(
                "UnknownPlayer",
                f"utility table mentions undeclared player {render_token(i)}",
            )
    table: Dict[Token, Dict[Play, Fraction]] = {}
    ranges: Dict[Token, frozenset] = {}
    for i in sorted(form.players, key=token_key):
        if i not in utilities:
            raise GameError(
                "MissingUtility",
                f"no utility row for player {render_token(i)}",
                axiom="[G2]",
                player=i,
            )
        row: Dict[Play, Fraction] = {}
        for key, value in utilities[i].items():
            members = key.members if isinstance(key, Play) else frozenset(key)
            play = plays_by_members.get(members)
            if play is None:
                listing = ",".join(
                    sorted((render_label(t) for t in members))
                )
                raise GameError(
                    "UnknownPlayInTable",
                    f"utility row of {render_token(i)} prices {{{listing}}}, "
                    "which is not a play",
                    axiom="[G2]",
                )
            row[play] = _as_fraction(value)
        for play in plays_by_members.values():
            if play not in row:
                raise GameError(
                    "MissingUtility",
                    f"player {render_token(i)} has no utility for the play ending at "
                    f"{render_label(play.end)}",
                    axiom="[G2]",
                    player=i,
                    play=play,
                )
        table[i] = row
        ranges[i] = frozenset(row.values())
    return Game(form=form, utilities=table, ranges=ranges)


@dataclass(frozen=True, eq=False)
class GameMorphism:
    """A validated game morphism.

    ``theta`` and ``end_preserved`` are derived from the node map and
    cached because every utility condition is phrased on the
    end-preserved plays.
    """

    source: Game
    target: Game
    iota: Mapping[Token, Token]
    tau: Mapping[NodeLabel, NodeLabel]
    delta: Mapping[Token, Token]
    beta: Mapping[Token, Mapping[Fraction, Fraction]]
    form_morphism: FormMorphism = field(repr=False)
    theta: TreeMorphism = field(repr=False)
    end_preserved: frozenset = field(repr=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GameMorphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.iota == other.iota
            and self.tau == other.tau
            and self.delta == other.delta
            and self.beta == other.beta
        )

    def __hash__(self) -> int:
        return hash(
            (
                self.source,
                self.target,
                frozenset(self.iota.items()),
                frozenset(self.tau.items()),
                frozenset(self.delta.items()),
                frozenset((i, frozenset(b.items())) for i, b in self.beta.items()),
            )
        )


@dataclass(frozen=True)
class IsoWitness:
    """An isomorphism with its explicit inverse, both validated."""

    morphism: GameMorphism
    inverse: GameMorphism


def validate_game_morphism(
    source: Game,
    target: Game,
    iota: Mapping,
    tau: Mapping,
    delta: Mapping,
    beta: Mapping,
) -> GameMorphism:
    """Check the component maps and the utility conditions.

    The utility maps must be defined exactly on the utilities of the
    end-preserved plays, land in the target player's utility range, be
    weakly increasing, and reproduce the target utility of every
    end-preserved play's image.
    """
    form_morphism = validate_form_morphism(source.form, target.form, iota, tau, delta)
    theta = form_morphism.preform_morphism.tree_morphism
    end_preserved = end_preserved_plays(theta)

    norm_beta: Dict[Token, Dict[Fraction, Fraction]] = {}
    for i in beta:
        if i not in source.players:
            raise MorphismError(
                "UnknownPlayer",
                f"utility map given for {render_token(i)}, which is not a source player",
            )
    for i in sorted(source.players, key=token_key):
        if i not in beta:
            raise MorphismError(
                "BetaDomainMismatch",
                f"no utility map for player {render_token(i)}",
                axiom="[g2]",
                player=i,
            )
        bmap = {_as_fraction(u): _as_fraction(v) for u, v in beta[i].items()}
        expected_domain = frozenset(
            source.utilities[i][z] for z in end_preserved
        )
        if frozenset(bmap) != expected_domain:
            raise MorphismError(
                "BetaDomainMismatch",
                f"utility map of {render_token(i)} is defined on "
                f"{sorted(bmap)} but the end-preserved plays realize "
                f"{sorted(expected_domain)}",
                axiom="[g2]",
                player=i,
            )
        if not frozenset(bmap.values()) <= target.ranges[form_morphism.iota[i]]:
            raise MorphismError(
                "BetaDomainMismatch",
                f"utility map of {render_token(i)} leaves the utility range of "
                f"{render_token(form_morphism.iota[i])}",
                axiom="[g2]",
                player=i,
            )
        ordered = sorted(bmap)
        for u1, u2 in zip(ordered, ordered[1:]):
            if bmap[u1] > bmap[u2]:
                raise MorphismError(
                    "BetaNotMonotone",
                    f"utility map of {render_token(i)} sends {u2} below {u1} "
                    f"although {u2} > {u1}",
                    axiom="[g3]",
                    player=i,
                    lower=u1,
                    upper=u2,
                )
        norm_beta[i] = bmap

    target_by_members = {p.members: p for p in target.plays}
    for i in sorted(source.players, key=token_key):
        for z in sorted(end_preserved, key=lambda p: label_key(p.end)):
            members = image_play(theta, z)
            image = target_by_members.get(members)
            if image is None:  # pragma: no cover - end-preserved images are plays
                raise InternalInvariantError(
                    "image of an end-preserved play is not a target play"
                )
            expected = target.utilities[form_morphism.iota[i]][image]
            if norm_beta[i][source.utilities[i][z]] != expected:
                raise MorphismError(
                    "UtilityEquationFails",
                    f"player {render_token(i)}: utility map gives "
                    f"{norm_beta[i][source.utilities[i][z]]} on the play ending at "
                    f"{render_label(z.end)} but its image is priced {expected}",
                    axiom="[g4]",
                    player=i,
                    play=z,
                )

    return GameMorphism(
        source=source,
        target=target,
        iota=form_morphism.iota,
        tau=form_morphism.tau,
        delta=form_morphism.delta,
        beta=norm_beta,
        form_morphism=form_morphism,
        theta=theta,
        end_preserved=end_preserved,
    )


def identity_morphism(g: Game) -> GameMorphism:
    return validate_game_morphism(
        g,
        g,
        {i: i for i in g.players},
        {t: t for t in g.tree.nodes},
        {c: c for c in g.preform.choices},
        {i: {u: u for u in g.ranges[i]} for i in g.players},
    )


def compose(second: GameMorphism, first: GameMorphism) -> GameMorphism:
    """The morphism applying ``first`` and then ``second``.

    The composite utility map chains the two maps where they compose
    and is then cut down to the utilities realized by the plays that
    are end-preserved by the composite node map.
    """
    if first.target != second.source:
        raise MorphismError(
            "TargetSourceMismatch",
            "first morphism's target differs from second morphism's source",
        )
    iota = {i: second.iota[first.iota[i]] for i in first.source.players}
    tau = {t: second.tau[first.tau[t]] for t in first.source.tree.nodes}
    delta = {c: second.delta[first.delta[c]] for c in first.source.preform.choices}
    theta = compose_tree_morphisms(second.theta, first.theta)
    end_preserved = end_preserved_plays(theta)
    beta: Dict[Token, Dict[Fraction, Fraction]] = {}
    for i in first.source.players:
        b1 = first.beta[i]
        b2 = second.beta[first.iota[i]]
        chainable = {u for u in b1 if b1[u] in b2}
        realized = {first.source.utilities[i][z] for z in end_preserved}
        beta[i] = {u: b2[b1[u]] for u in chainable if u in realized}
    return validate_game_morphism(
        first.source, second.target, iota, tau, delta, beta
    )


def _is_bijection(mapping: Mapping, domain: frozenset, codomain: frozenset) -> bool:
    values = set(mapping.values())
    return len(values) == len(domain) and values == set(codomain)


def is_isomorphism(m: GameMorphism) -> Optional[IsoWitness]:
    """An explicit inverse when every component bijects, else ``None``.

    Two equivalent characterizations are evaluated, all-components
    bijective and strict monotonicity of the utility maps over
    bijective structure maps, and must agree; the inverse is then built
    component-wise and re-validated, and both composites are checked to
    be identities.
    """
    structure_bijective = (
        _is_bijection(m.iota, m.source.players, m.target.players)
        and _is_bijection(m.tau, m.source.tree.nodes, m.target.tree.nodes)
        and _is_bijection(m.delta, m.source.preform.choices, m.target.preform.choices)
    )
    all_bijective = structure_bijective and all(
        _is_bijection(m.beta[i], frozenset(m.beta[i]), m.target.ranges[m.iota[i]])
        for i in m.source.players
    )

    def strictly_increasing(bmap: Mapping[Fraction, Fraction]) -> bool:
        ordered = sorted(bmap)
        return all(bmap[u1] < bmap[u2] for u1, u2 in zip(ordered, ordered[1:]))

    strict_characterization = structure_bijective and all(
        strictly_increasing(m.beta[i]) for i in m.source.players
    )
    if all_bijective != strict_characterization:
        raise InternalInvariantError(
            "the two isomorphism characterizations disagree on this morphism"
        )
    if not all_bijective:
        return None

    iota_inv = {v: k for k, v in m.iota.items()}
    tau_inv = {v: k for k, v in m.tau.items()}
    delta_inv = {v: k for k, v in m.delta.items()}
    beta_inv = {
        i_target: {v: u for u, v in m.beta[iota_inv[i_target]].items()}
        for i_target in m.target.players
    }
    inverse = validate_game_morphism(
        m.target, m.source, iota_inv, tau_inv, delta_inv, beta_inv
    )
    if (
        compose(inverse, m) != identity_morphism(m.source)
        or compose(m, inverse) != identity_morphism(m.target)
    ):  # pragma: no cover - bijective components always invert
        raise InternalInvariantError("inverse composites are not identities")
    return IsoWitness(m, inverse)


def is_subgame(inner: Game, outer: Game) -> bool:
    """Whether ``inner`` is a subgame of ``outer``.

    Beyond the form conditions, every inner play must be priced exactly
    like its extension by the outer strict predecessors of the inner
    root.
    """
    if not is_subform(inner.form, outer.form):
        return False
    prefix = strict_predecessors(outer.tree, inner.tree.root)
    for i in inner.players:
        for z in inner.plays:
            extended = outer.play_with_members(prefix | z.members)
            if extended is None:
                return False
            if inner.utilities[i][z] != outer.utilities[i][extended]:
                return False
    return True


def subgame_at(g: Game, t_star: NodeLabel) -> Game:
    """The subgame rooted at ``t_star``.

    Rejects roots whose up-set cuts an information set; the remaining
    structure is the restriction, with every player retained (possibly
    vacuous) and each play priced as its extension in ``g``.
    """
    subtree = subtree_at(g.tree, t_star)
    sub_nodes = subtree.nodes
    for h in sorted(g.preform.info_sets, key=lambda h: sorted(label_key(t) for t in h)):
        overlap = h & sub_nodes
        if overlap and overlap != h:
            listing = ",".join(sorted((render_label(t) for t in h)))
            raise GameError(
                "InformationSetCut",
                f"information set {{{listing}}} straddles the up-set of "
                f"{render_label(t_star)}",
                information_set=h,
            )
    triples = [
        (t, c, t_next) for (t, c), t_next in g.preform.op.items() if t in sub_nodes
    ]
    kept_choices = frozenset(c for _t, c, _n in triples)
    preform = build_preform(sub_nodes, kept_choices, triples)
    assignment = {i: g.form.assignment[i] & kept_choices for i in g.players}
    form = build_form(preform, g.players, assignment)
    prefix = strict_predecessors(g.tree, t_star)
    utilities = {}
    for i in g.players:
        row = {}
        for z in preform.tree.plays:
            extended = g.play_with_members(prefix | z.members)
            if extended is None:  # pragma: no cover - extensions are always plays
                raise InternalInvariantError("extended subgame play is not a play")
            row[z] = g.utilities[i][extended]
        utilities[i] = row
    sub = build_game(form, utilities)
    if not is_subgame(sub, g):  # pragma: no cover - construction satisfies the test
        raise InternalInvariantError("constructed subgame fails the subgame test")
    return sub


def _zeta(g: Game, s: frozenset) -> Play:
    return play_of(g.preform, s)


def is_nash(g: Game, s: Iterable[Token], cap: int = DEFAULT_STRATEGY_CAP) -> bool:
    """Whether no player gains by replacing their component of ``s``."""
    s = frozenset(s)
    if not is_grand_strategy(g.preform, s):
        raise GameError(
            "NotAStrategy",
            f"{render_strategy(s)} is not a grand strategy of this game",
        )
    for i in g.players:
        on_path = g.utilities[i][_zeta(g, s)]
        rest = s - g.form.assignment[i]
        for deviation in player_strategies(g.form, i, cap=cap):
            if g.utilities[i][_zeta(g, rest | deviation)] > on_path:
                return False
    return True


def nash_equilibria(g: Game, cap: int = DEFAULT_STRATEGY_CAP) -> frozenset:
    """All pure-strategy equilibria, by exhaustive deviation checking.

    Each strategy is screened against proper deviations only; the
    variant that also re-checks the strategy's own components must
    agree, and a disagreement would indicate a bug.
    """
    per_player = {i: player_strategies(g.form, i, cap=cap) for i in g.players}
    equilibria = []
    for s in grand_strategies(g.preform, cap=cap):
        stable = True
        for i in g.players:
            own = s & g.form.assignment[i]
            on_path = g.utilities[i][_zeta(g, s)]
            rest = s - g.form.assignment[i]
            for deviation in per_player[i]:
                if deviation == own:
                    continue
                if g.utilities[i][_zeta(g, rest | deviation)] > on_path:
                    stable = False
                    break
            if not stable:
                break
        if stable != is_nash(g, s, cap=cap):  # pragma: no cover - the two agree
            raise InternalInvariantError(
                "deviation screening disagrees with the direct equilibrium test"
            )
        if stable:
            equilibria.append(s)
    return frozenset(equilibria)


def forget_to_form(g: Game) -> Form:
    return g.form


def forget_to_preform(g: Game) -> Preform:
    return g.form.preform


def forget_to_tree(g: Game) -> Tree:
    return g.form.preform.tree


def forget_morphism_to_form(m: GameMorphism) -> FormMorphism:
    return m.form_morphism


def forget_morphism_to_preform(m: GameMorphism):
    return m.form_morphism.preform_morphism


def forget_morphism_to_tree(m: GameMorphism) -> TreeMorphism:
    return m.theta


def _signatures(tree: Tree) -> Dict[NodeLabel, tuple]:
    sizes: Dict[NodeLabel, int] = {}

    def size(t: NodeLabel) -> int:
        if t not in sizes:
            sizes[t] = 1 + sum(size(child) for child in tree.children(t))
        return sizes[t]

    return {
        t: (tree.stage[t], len(tree.children(t)), size(t)) for t in tree.nodes
    }


def find_isomorphism(
    g1: Game, g2: Game, budget: int = 200_000
) -> Optional[IsoWitness]:
    """Search for an isomorphism between two games.

    Candidate node maps are enumerated by backtracking over the trees,
    pruned by the (stage, branching, subtree size) signature, which any
    isomorphism preserves.  The choice map is then forced edge by edge
    through the previous-choice structure, the player map through
    ownership, and each utility map pointwise through the play images,
    so the only search happens over the trees.  Candidates are visited
    in a fixed lexicographic order, making the returned witness
    deterministic.  Raises :class:`SearchBudgetExceeded` after
    ``budget`` node expansions.
    """
    if (
        len(g1.players) != len(g2.players)
        or len(g1.tree.nodes) != len(g2.tree.nodes)
        or len(g1.preform.choices) != len(g2.preform.choices)
        or len(g1.plays) != len(g2.plays)
        or len(g1.preform.info_sets) != len(g2.preform.info_sets)
    ):
        return None
    sig1 = _signatures(g1.tree)
    sig2 = _signatures(g2.tree)
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None
    if sorted(
        sorted(len(h) for h in g1.preform.info_sets)
    ) != sorted(sorted(len(h) for h in g2.preform.info_sets)):
        return None

    order = sorted(g1.tree.nodes, key=lambda t: (g1.tree.stage[t], label_key(t)))
    expansions = 0

    def candidates(t: NodeLabel, mapping: Dict) -> list:
        if t == g1.tree.root:
            pool = [g2.tree.root]
        else:
            pool = list(g2.tree.children(mapping[g1.tree.pred[t]]))
        used = set(mapping.values())
        return [
            u
            for u in sorted(pool, key=label_key)
            if u not in used and sig2[u] == sig1[t]
        ]

    def complete(mapping: Dict) -> Optional[IsoWitness]:
        delta: Dict[Token, Token] = {}
        for (t, c), t_next in sorted(
            g1.preform.op.items(), key=lambda kv: (label_key(kv[0][0]), token_key(kv[0][1]))
        ):
            c_target = g2.preform.prev_choice.get(mapping[t_next])
            if c_target is None:
                return None
            if delta.setdefault(c, c_target) != c_target:
                return None
        if len(set(delta.values())) != len(delta):
            return None

        iota: Dict[Token, Token] = {}
        vacuous1 = sorted(
            (i for i in g1.players if not g1.form.assignment[i]), key=token_key
        )
        vacuous2 = sorted(
            (i for i in g2.players if not g2.form.assignment[i]), key=token_key
        )
        if len(vacuous1) != len(vacuous2):
            return None
        for i in sorted(g1.players, key=token_key):
            owners = {g2.form.owner[delta[c]] for c in g1.form.assignment[i]}
            if len(owners) > 1:
                return None
            if owners:
                iota[i] = owners.pop()
        if len(set(iota.values())) != len(iota):
            return None

        for vacuous_map in itertools.permutations(vacuous2):
            full_iota = dict(iota)
            full_iota.update(zip(vacuous1, vacuous_map))
            beta: Dict[Token, Dict[Fraction, Fraction]] = {}
            consistent = True
            for i in g1.players:
                bmap: Dict[Fraction, Fraction] = {}
                for z in g1.plays:
                    image = g2.play_with_members(mapping[t] for t in z.members)
                    if image is None:
                        consistent = False
                        break
                    u = g1.utilities[i][z]
                    v = g2.utilities[full_iota[i]][image]
                    if bmap.setdefault(u, v) != v:
                        consistent = False
                        break
                if not consistent:
                    break
                ordered = sorted(bmap)
                if any(
                    bmap[u1] >= bmap[u2] for u1, u2 in zip(ordered, ordered[1:])
                ):
                    consistent = False
                    break
                beta[i] = bmap
            if not consistent:
                continue
            try:
                morphism = validate_game_morphism(
                    g1, g2, full_iota, mapping, delta, beta
                )
            except MorphismError:
                continue
            witness = is_isomorphism(morphism)
            if witness is not None:
                return witness
        return None

    def backtrack(index: int, mapping: Dict) -> Optional[IsoWitness]:
        nonlocal expansions
        if index == len(order):
            return complete(mapping)
        t = order[index]
        for u in candidates(t, mapping):
            expansions += 1
            if expansions > budget:
                raise SearchBudgetExceeded(budget)
            mapping[t] = u
            witness = backtrack(index + 1, mapping)
            if witness is not None:
                return witness
            del mapping[t]
        return None

    return backtrack(0, {})
