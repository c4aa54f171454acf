"""Let-elimination translation and the coordinated three-context relation.

The translation rewrites `let T V E` into `app (abs T E') V'` while
renaming every free variable through a context of source-to-target name
associations, consumed linearly.  The accompanying context relation ties
a source typing context, the translation context, and a target typing
context together entry by entry; it comes in a list form (coordinated
recursion over the three lists) and a multiset form (the list form up to
independent permutations of each context), decided by name-keyed
alignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Optional

from .ctx import (
    Cons,
    Ctx,
    elems,
    from_list,
    is_list,
    no_elems,
    select,
    splits,
)
from .errors import (
    LinearityError,
    MalformedTermError,
    PreconditionError,
    UnmappedVariableError,
)
from .lex import TokenStream
from .terms import (
    Abs,
    App,
    Free,
    Let,
    Name,
    Tm,
    close_term,
    fresh,
    free_names,
    locally_closed,
    open_term,
)
from .typecheck import TyAssoc


@dataclass(frozen=True)
class VarAssoc:
    """Association of a source variable with its translated counterpart."""

    src: Name
    dst: Name

    def __str__(self) -> str:
        return f"trans_to {self.src} {self.dst}"


def _assoc_names(g: Ctx) -> set:
    out = set()
    for a in elems(g):
        if isinstance(a, VarAssoc):
            out.add(a.src)
            out.add(a.dst)
        elif isinstance(a, TyAssoc):
            out.add(a.name)
    return out


def _fresh_pair(avoid: set) -> tuple:
    x = fresh(avoid)
    y = fresh(avoid | {x})
    return x, y


def ltrans_rel(g: Ctx, e: Tm, e2: Tm) -> bool:
    """Whether e2 is a translation of e under translation context g.

    Clause by clause: a variable selects its association with an
    element-free residual; applications split the context over both
    sides; a let translates to an application of an abstraction, binding
    a fresh source/target name pair; abstractions translate bodies under
    an extended context.
    """
    if isinstance(e, Free) and isinstance(e2, Free):
        for a in dict.fromkeys(elems(g)):
            if isinstance(a, VarAssoc) and a.src == e.name and a.dst == e2.name:
                if any(no_elems(r) for _, r in select(a, g)):
                    return True
        return False
    if isinstance(e, App) and isinstance(e2, App):
        return any(
            ltrans_rel(g1, e.fn, e2.fn) and ltrans_rel(g2, e.arg, e2.arg)
            for g1, g2 in splits(g)
        )
    if isinstance(e, Let) and isinstance(e2, App):
        if not isinstance(e2.fn, Abs) or e2.fn.ann != e.ann:
            return False
        avoid = _assoc_names(g) | free_names(e) | free_names(e2)
        for g1, g2 in splits(g):
            if ltrans_rel(g1, e.val, e2.arg):
                x, y = _fresh_pair(avoid)
                if ltrans_rel(
                    Cons(VarAssoc(x, y), g2),
                    open_term(e.body, x),
                    open_term(e2.fn.body, y),
                ):
                    return True
        return False
    if isinstance(e, Abs) and isinstance(e2, Abs) and e.ann == e2.ann:
        avoid = _assoc_names(g) | free_names(e) | free_names(e2)
        x, y = _fresh_pair(avoid)
        return ltrans_rel(
            Cons(VarAssoc(x, y), g), open_term(e.body, x), open_term(e2.body, y)
        )
    return False


def _count_occurrences(t: Tm, n: Name) -> int:
    if isinstance(t, Free):
        return 1 if t.name == n else 0
    if isinstance(t, App):
        return _count_occurrences(t.fn, n) + _count_occurrences(t.arg, n)
    if isinstance(t, Abs):
        return _count_occurrences(t.body, n)
    if isinstance(t, Let):
        return _count_occurrences(t.val, n) + _count_occurrences(t.body, n)
    return 0


def translate(g: Ctx, e: Tm) -> Tm:
    """Functional reading of the translation.

    Requires g in list form with distinct source names that cover the
    free names of e exactly once each.  Variables are renamed through g,
    `let T V E` becomes `app (abs T E') V'`, and the other constructors
    translate homomorphically.
    """
    if not is_list(g):
        raise PreconditionError("translate requires a list-form context")
    assocs = elems(g)
    if not all(isinstance(a, VarAssoc) for a in assocs):
        raise PreconditionError("translate requires variable associations")
    srcs = [a.src for a in assocs]
    if len(set(srcs)) != len(srcs):
        raise PreconditionError("translate requires distinct source names")
    if not locally_closed(e):
        raise MalformedTermError("term is not locally closed")
    for n in free_names(e):
        if n not in srcs:
            raise UnmappedVariableError(f"free variable {n} has no association")
    for n in srcs:
        count = _count_occurrences(e, n)
        if count != 1:
            raise LinearityError(f"source name {n} is used {count} times, expected 1")

    avoid = _assoc_names(g) | free_names(e)

    def go(t: Tm, mapping: dict) -> Tm:
        if isinstance(t, Free):
            return Free(mapping[t.name])
        if isinstance(t, App):
            return App(go(t.fn, mapping), go(t.arg, mapping))
        if isinstance(t, Abs):
            x, y = _fresh_pair(avoid | set(mapping) | set(mapping.values()))
            body = open_term(t.body, x)
            if _count_occurrences(body, x) != 1:
                raise LinearityError(f"bound variable of {t!r} is not used exactly once")
            return Abs(t.ann, close_term(go(body, {**mapping, x: y}), y))
        if isinstance(t, Let):
            val = go(t.val, mapping)
            x, y = _fresh_pair(avoid | set(mapping) | set(mapping.values()))
            body = open_term(t.body, x)
            if _count_occurrences(body, x) != 1:
                raise LinearityError(f"bound variable of {t!r} is not used exactly once")
            return App(Abs(t.ann, close_term(go(body, {**mapping, x: y}), y)), val)
        raise MalformedTermError(f"cannot translate {t!r}")

    return go(e, {a.src: a.dst for a in assocs})


# ---------------------------------------------------------------------------
# The coordinated context relation.
# ---------------------------------------------------------------------------


def _entry_names(a: object) -> frozenset:
    if isinstance(a, TyAssoc):
        return frozenset((a.name,))
    if isinstance(a, VarAssoc):
        return frozenset((a.src, a.dst))
    if isinstance(a, Name):
        return frozenset((a,))
    return frozenset()


def trans_rel_list(l1: Ctx, l2: Ctx, l3: Ctx) -> bool:
    """Coordinated list form of the relation.

    The three lists have equal length and, position by position, consist
    of `ty_of x T`, `trans_to x y`, and `ty_of y T` with the same T, where
    x and y are distinct names neither of which occurs in any tail.
    """
    if not (is_list(l1) and is_list(l2) and is_list(l3)):
        return False
    e1, e2, e3 = elems(l1), elems(l2), elems(l3)
    if not (len(e1) == len(e2) == len(e3)):
        return False
    k = len(e1)
    for i in range(k):
        a1, b, a3 = e1[i], e2[i], e3[i]
        if not (isinstance(a1, TyAssoc) and isinstance(b, VarAssoc) and isinstance(a3, TyAssoc)):
            return False
        x, y = b.src, b.dst
        if x == y or a1.name != x or a3.name != y or a1.ty != a3.ty:
            return False
        tail_names = set()
        for j in range(i + 1, k):
            tail_names |= _entry_names(e1[j]) | _entry_names(e2[j]) | _entry_names(e3[j])
        if x in tail_names or y in tail_names:
            return False
    return True


def trans_rel_align(g1: Ctx, g2: Ctx, g3: Ctx) -> Optional[tuple]:
    """Name-keyed alignment witness for the multiset form of the relation.

    Pivots on the first element of the translation context, finds its
    partners in the typing contexts by name (backtracking over partner
    and residual choices), and recurses on the residuals.  Returns the
    coordinated entry lists, or None if no alignment exists.
    """
    if no_elems(g2):
        if no_elems(g1) and no_elems(g3):
            return ((), (), ())
        return None
    items1, items2, items3 = elems(g1), elems(g2), elems(g3)
    if not (len(items1) == len(items2) == len(items3)):
        return None
    b = items2[0]
    if not isinstance(b, VarAssoc):
        return None
    x, y = b.src, b.dst
    if x == y:
        return None
    for _, r2 in dict.fromkeys(select(b, g2)):
        for a1 in dict.fromkeys(items1):
            if not (isinstance(a1, TyAssoc) and a1.name == x):
                continue
            for _, r1 in dict.fromkeys(select(a1, g1)):
                for a3 in dict.fromkeys(items3):
                    if not (isinstance(a3, TyAssoc) and a3.name == y and a3.ty == a1.ty):
                        continue
                    for _, r3 in dict.fromkeys(select(a3, g3)):
                        residual_names = set()
                        for r in (r1, r2, r3):
                            for entry in elems(r):
                                residual_names |= _entry_names(entry)
                        if x in residual_names or y in residual_names:
                            continue
                        sub = trans_rel_align(r1, r2, r3)
                        if sub is not None:
                            return ((a1,) + sub[0], (b,) + sub[1], (a3,) + sub[2])
    return None


def trans_rel_mset(g1: Ctx, g2: Ctx, g3: Ctx) -> bool:
    """Multiset form: some triple of list permutations is in the list form."""
    return trans_rel_align(g1, g2, g3) is not None


def trans_rel_mset_exhaustive(g1: Ctx, g2: Ctx, g3: Ctx) -> bool:
    """Literal reading of the multiset form, used as a test oracle.

    Tries every triple of list arrangements of the three contexts and
    checks the list form; exponential, only for small instances.
    """
    def arrangements(g: Ctx):
        seen = set()
        for order in permutations(elems(g)):
            if order not in seen:
                seen.add(order)
                yield from_list(order)

    return any(
        trans_rel_list(l1, l2, l3)
        for l1 in arrangements(g1)
        for l2 in arrangements(g2)
        for l3 in arrangements(g3)
    )


# ---------------------------------------------------------------------------
# Translation fixtures: `CTX |- SRC ~> DST ; accept` (or `; reject`).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TransJudgment:
    ctx: Ctx
    src: Tm
    dst: Tm
    expect: bool


def parse_var_assoc(ts: TokenStream) -> VarAssoc:
    ts.eat_ident("trans_to")
    src = Name(ts.eat_ident().text)
    dst = Name(ts.eat_ident().text)
    return VarAssoc(src, dst)


def parse_trans_judgment(line: str) -> TransJudgment:
    from .ctx import parse_ctx_tokens
    from .terms import parse_term_tokens

    ts = TokenStream.of(line)
    g = parse_ctx_tokens(ts, parse_var_assoc)
    ts.eat_sym("|-")
    src_decl = {}
    dst_decl = {}
    for a in elems(g):
        src_decl[str(a.src)] = a.src
        dst_decl[str(a.dst)] = a.dst
    src = parse_term_tokens(ts, src_decl)
    ts.eat_sym("~>")
    dst = parse_term_tokens(ts, dst_decl)
    ts.eat_sym(";")
    verdict = ts.eat_ident().text
    ts.expect_eof()
    if verdict not in ("accept", "reject"):
        raise PreconditionError(f"expected verdict 'accept' or 'reject', got {verdict!r}")
    return TransJudgment(g, src, dst, verdict == "accept")
