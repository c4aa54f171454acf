"""Object-language syntax: simple types and lambda/let terms.

Terms are locally nameless: bound variables are de Bruijn indices and
free variables are nominal constants (`Name`s).  Descending under a
binder opens the body with a fresh name; the surface syntax uses named
binders and is converted on parsing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union as TyUnion

from .errors import MalformedTermError, SyntaxError_, UnboundIdentifierError
from .lex import TokenStream


@dataclass(frozen=True)
class Name:
    """A nominal constant: an atomic fresh name standing for a free variable."""

    text: str
    index: int = 0

    def __str__(self) -> str:
        return self.text if self.index == 0 else f"{self.text}{self.index}"


def fresh(avoid: Iterable[Name], stem: str = "n") -> Name:
    """First name of the canonical chain (stem, stem1, stem2, ...) not in avoid.

    Deterministic in its arguments; the result is never a member of avoid.
    """
    avoid = set(avoid)
    k = 0
    while True:
        candidate = Name(stem, k)
        if candidate not in avoid:
            return candidate
        k += 1


@dataclass(frozen=True)
class Base:
    label: str


@dataclass(frozen=True)
class Arrow:
    dom: "Ty"
    cod: "Ty"


Ty = TyUnion[Base, Arrow]


@dataclass(frozen=True)
class Free:
    name: Name


@dataclass(frozen=True)
class Bound:
    index: int


@dataclass(frozen=True)
class App:
    fn: "Tm"
    arg: "Tm"


@dataclass(frozen=True)
class Abs:
    ann: Ty
    body: "Tm"


@dataclass(frozen=True)
class Let:
    ann: Ty
    val: "Tm"
    body: "Tm"


Tm = TyUnion[Free, Bound, App, Abs, Let]


def locally_closed(t: Tm, depth: int = 0) -> bool:
    """Whether every bound index is under at least that many binders."""
    if isinstance(t, Bound):
        return t.index < depth
    if isinstance(t, App):
        return locally_closed(t.fn, depth) and locally_closed(t.arg, depth)
    if isinstance(t, Abs):
        return locally_closed(t.body, depth + 1)
    if isinstance(t, Let):
        return locally_closed(t.val, depth) and locally_closed(t.body, depth + 1)
    return True


def open_term(body: Tm, n: Name) -> Tm:
    """Replace the binder's variable (index 0 at the outside) with a free name.

    The body must be locally closed at depth 1.
    """

    def go(t: Tm, depth: int) -> Tm:
        if isinstance(t, Bound):
            if t.index == depth:
                return Free(n)
            if t.index > depth:
                raise MalformedTermError(f"unbound index {t.index} at depth {depth}")
            return t
        if isinstance(t, App):
            return App(go(t.fn, depth), go(t.arg, depth))
        if isinstance(t, Abs):
            return Abs(t.ann, go(t.body, depth + 1))
        if isinstance(t, Let):
            return Let(t.ann, go(t.val, depth), go(t.body, depth + 1))
        return t

    return go(body, 0)


def close_term(t: Tm, n: Name) -> Tm:
    """Abstract a free name back into a binder body (inverse of open_term)."""

    def go(t: Tm, depth: int) -> Tm:
        if isinstance(t, Free):
            return Bound(depth) if t.name == n else t
        if isinstance(t, Bound):
            return t
        if isinstance(t, App):
            return App(go(t.fn, depth), go(t.arg, depth))
        if isinstance(t, Abs):
            return Abs(t.ann, go(t.body, depth + 1))
        if isinstance(t, Let):
            return Let(t.ann, go(t.val, depth), go(t.body, depth + 1))
        return t

    return go(t, 0)


def free_names(t: Tm) -> frozenset:
    """The set of names occurring free in a term."""
    if isinstance(t, Free):
        return frozenset((t.name,))
    if isinstance(t, App):
        return free_names(t.fn) | free_names(t.arg)
    if isinstance(t, Abs):
        return free_names(t.body)
    if isinstance(t, Let):
        return free_names(t.val) | free_names(t.body)
    return frozenset()


def term_size(t: Tm) -> int:
    """Number of term constructors."""
    if isinstance(t, App):
        return 1 + term_size(t.fn) + term_size(t.arg)
    if isinstance(t, Abs):
        return 1 + term_size(t.body)
    if isinstance(t, Let):
        return 1 + term_size(t.val) + term_size(t.body)
    return 1


def type_universe(base_labels: Iterable[str] = ("i", "o"), depth: int = 2) -> list:
    """All types over the given base labels with arrow nesting below depth.

    Depth 1 is the bases alone; each further level adds arrows between
    everything built so far.  Deterministic order.
    """
    levels = [Base(label) for label in base_labels]
    current = list(levels)
    for _ in range(depth - 1):
        current = current + [Arrow(d, c) for d in current for c in current]
        seen = dict.fromkeys(current)
        current = list(seen)
    return current


def name_pool(count: int, stem: str = "c") -> list:
    """Distinct names for generators, deterministic in their arguments."""
    return [Name(stem, k) for k in range(1, count + 1)]


# ---------------------------------------------------------------------------
# Surface syntax.
#
#   ty  ::= IDENT | ty "->" ty | "(" ty ")"          (-> right-associative)
#   tm  ::= "app" atm atm
#         | "abs" aty "(" IDENT "\" tm ")"
#         | "let" aty atm "(" IDENT "\" tm ")"
#         | atm
#   atm ::= IDENT | "(" tm ")"
#   aty ::= IDENT | "(" ty ")"
#
# Identifiers in term position refer to the innermost enclosing binder of
# that name, or else must be declared nominal constants.
# ---------------------------------------------------------------------------


def parse_type(text: str) -> Ty:
    ts = TokenStream.of(text)
    ty = parse_type_tokens(ts)
    ts.expect_eof()
    return ty


def parse_type_tokens(ts: TokenStream) -> Ty:
    left = _parse_type_atom(ts)
    if ts.at_sym("->"):
        ts.next()
        return Arrow(left, parse_type_tokens(ts))
    return left


def _parse_type_atom(ts: TokenStream) -> Ty:
    if ts.at_sym("("):
        ts.next()
        inner = parse_type_tokens(ts)
        ts.eat_sym(")")
        return inner
    return Base(ts.eat_ident().text)


def print_type(ty: Ty) -> str:
    if isinstance(ty, Base):
        return ty.label
    dom = print_type(ty.dom)
    if isinstance(ty.dom, Arrow):
        dom = f"({dom})"
    return f"{dom} -> {print_type(ty.cod)}"


def _print_type_atom(ty: Ty) -> str:
    return ty.label if isinstance(ty, Base) else f"({print_type(ty)})"


def parse_term(text: str, nominals: Iterable = ()) -> Tm:
    """Parse the named surface syntax into a locally nameless term.

    `nominals` declares the identifiers that may occur free; anything
    else unbound raises UnboundIdentifierError.
    """
    declared = {}
    for n in nominals:
        name = n if isinstance(n, Name) else Name(n)
        declared[str(name)] = name
    ts = TokenStream.of(text)
    t = parse_term_tokens(ts, declared)
    ts.expect_eof()
    return t


def parse_term_tokens(ts: TokenStream, declared: dict) -> Tm:
    return _parse_tm(ts, declared, [])


def _parse_tm(ts: TokenStream, declared: dict, binders: list) -> Tm:
    if ts.at_ident("app"):
        ts.next()
        fn = _parse_atm(ts, declared, binders)
        arg = _parse_atm(ts, declared, binders)
        return App(fn, arg)
    if ts.at_ident("abs"):
        ts.next()
        ann = _parse_aty(ts)
        body = _parse_binder(ts, declared, binders)
        return Abs(ann, body)
    if ts.at_ident("let"):
        ts.next()
        ann = _parse_aty(ts)
        val = _parse_atm(ts, declared, binders)
        body = _parse_binder(ts, declared, binders)
        return Let(ann, val, body)
    return _parse_atm(ts, declared, binders)


def _parse_aty(ts: TokenStream) -> Ty:
    if ts.at_sym("("):
        ts.next()
        ty = parse_type_tokens(ts)
        ts.eat_sym(")")
        return ty
    return Base(ts.eat_ident().text)


def _parse_binder(ts: TokenStream, declared: dict, binders: list) -> Tm:
    ts.eat_sym("(")
    var = ts.eat_ident().text
    ts.eat_sym("\\")
    body = _parse_tm(ts, declared, [var] + binders)
    ts.eat_sym(")")
    return body


def _parse_atm(ts: TokenStream, declared: dict, binders: list) -> Tm:
    if ts.at_sym("("):
        ts.next()
        inner = _parse_tm(ts, declared, binders)
        ts.eat_sym(")")
        return inner
    tok = ts.eat_ident()
    if tok.text in ("app", "abs", "let"):
        raise SyntaxError_(f"keyword {tok.text!r} is not an atomic term", tok.pos)
    if tok.text in binders:
        return Bound(binders.index(tok.text))
    if tok.text in declared:
        return Free(declared[tok.text])
    raise UnboundIdentifierError(f"identifier {tok.text!r} is not bound or declared", tok.pos)


_BINDER_STEMS = ("x", "y", "z", "u", "v", "w")


def print_term(t: Tm) -> str:
    taken = {str(n) for n in free_names(t)}

    def pick_binder(env: list) -> str:
        depth = len(env)
        stem = _BINDER_STEMS[depth % len(_BINDER_STEMS)]
        suffix = depth // len(_BINDER_STEMS)
        candidate = stem if suffix == 0 else f"{stem}{suffix}"
        while candidate in taken or candidate in env:
            suffix += 1
            candidate = f"{stem}{suffix}"
        return candidate

    def go(t: Tm, env: list) -> str:
        if isinstance(t, Free):
            return str(t.name)
        if isinstance(t, Bound):
            return env[t.index]
        if isinstance(t, App):
            return f"app {atom(t.fn, env)} {atom(t.arg, env)}"
        if isinstance(t, Abs):
            var = pick_binder(env)
            return f"abs {_print_type_atom(t.ann)} ({var}\\ {go(t.body, [var] + env)})"
        if isinstance(t, Let):
            var = pick_binder(env)
            return (
                f"let {_print_type_atom(t.ann)} {atom(t.val, env)}"
                f" ({var}\\ {go(t.body, [var] + env)})"
            )
        raise MalformedTermError(f"cannot print {t!r}")

    def atom(t: Tm, env: list) -> str:
        s = go(t, env)
        return s if isinstance(t, (Free, Bound)) else f"({s})"

    return go(t, [])
