"""Node labels.

A node is identified by one of three label kinds: an opaque atom, a
finite sequence of choice tokens, or a finite set of choice tokens.
The structured kinds let a game's nodes literally be the choice
histories that lead to them; sequence labels keep the order, set labels
keep only membership.  Equality is structural, and set labels ignore
the order and multiplicity of the tokens they were built from.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Hashable, Union

__all__ = [
    "Atom",
    "Seq",
    "SetLabel",
    "NodeLabel",
    "atom",
    "seq",
    "choice_set",
    "token_key",
    "label_key",
    "render_token",
    "render_label",
]

#: Choice and player identifiers are opaque hashable tokens, strings in
#: documents.
Token = Hashable


@dataclass(frozen=True)
class Atom:
    """An unconstrained node label."""

    token: Any


@dataclass(frozen=True)
class Seq:
    """A node label that is a sequence of choice tokens."""

    choices: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "choices", tuple(self.choices))


@dataclass(frozen=True)
class SetLabel:
    """A node label that is a finite set of choice tokens."""

    choices: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "choices", frozenset(self.choices))


NodeLabel = Union[Atom, Seq, SetLabel]


def atom(token: Any) -> Atom:
    return Atom(token)


def seq(*choices: Token) -> Seq:
    return Seq(tuple(choices))


def choice_set(*choices: Token) -> SetLabel:
    return SetLabel(frozenset(choices))


def token_key(token: Token) -> tuple:
    """Deterministic sort key for opaque tokens of mixed types."""
    return (type(token).__qualname__, str(token))


def label_key(label: NodeLabel) -> tuple:
    """Deterministic sort key for node labels of mixed kinds."""
    if isinstance(label, Atom):
        return (0, token_key(label.token))
    if isinstance(label, Seq):
        return (1, tuple(token_key(c) for c in label.choices))
    if isinstance(label, SetLabel):
        return (2, tuple(sorted(token_key(c) for c in label.choices)))
    raise TypeError(f"not a node label: {label!r}")


def render_token(token: Token) -> str:
    return str(token)


def render_label(label: NodeLabel) -> str:
    """Compact single-line rendering used by reports and error messages."""
    if isinstance(label, Atom):
        return render_token(label.token)
    if isinstance(label, Seq):
        return "(" + ",".join(render_token(c) for c in label.choices) + ")"
    if isinstance(label, SetLabel):
        return "{" + ",".join(sorted((render_token(c) for c in label.choices))) + "}"
    raise TypeError(f"not a node label: {label!r}")
