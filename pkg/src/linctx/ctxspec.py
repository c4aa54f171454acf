"""Schematic context specifications.

A `Context` command describes one or several coordinated binding
contexts by clauses: each clause gives one element pattern per context,
a set of nabla-bound variables that must be instantiated by distinct
fresh names, and a decidable side formula.  From a parsed command the
engine elaborates two predicates (a list form following the clauses
positionally, and a multiset form that holds when some tuple of list
permutations satisfies the list form), generates and checks the
per-index distributivity lemmas, and lifts member-based lemmas from the
list form to the multiset form by transporting memberships through the
permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Any, Iterable, Optional, Sequence

from .ctx import (
    Ctx,
    EMPTY,
    Union,
    elems,
    from_list,
    is_list,
    member,
    mem_transport,
    no_elems,
    perm,
    perm_to_part_mask,
    print_ctx,
    select,
    splits,
)
from .errors import PreconditionError, ShapeError, SyntaxError_, VerificationError
from .lex import TokenStream
from .report import CheckReport, GenBounds, run_check
from .terms import Arrow, Base, Name, name_pool, print_type, type_universe
from .typecheck import TyAssoc
from .translate import VarAssoc


# ---------------------------------------------------------------------------
# Element terms: first-order constructor applications over names and types.
# ---------------------------------------------------------------------------

_CTOR_SIGS = {
    "ty_of": ("name", "ty"),
    "trans_to": ("name", "name"),
    "arrow": ("ty", "ty"),
}

_CTOR_RESULT = {
    "ty_of": "ty_assoc",
    "trans_to": "var_assoc",
    "arrow": "ty",
}


def decompose(value: Any) -> Optional[tuple]:
    """View a value as a constructor applied to arguments, if it is one."""
    if isinstance(value, TyAssoc):
        return ("ty_of", (value.name, value.ty))
    if isinstance(value, VarAssoc):
        return ("trans_to", (value.src, value.dst))
    if isinstance(value, Arrow):
        return ("arrow", (value.dom, value.cod))
    if isinstance(value, Base):
        return (value.label, ())
    return None


def construct(ctor: str, args: tuple) -> Any:
    if ctor == "ty_of":
        return TyAssoc(*args)
    if ctor == "trans_to":
        return VarAssoc(*args)
    if ctor == "arrow":
        return Arrow(*args)
    if not args:
        return Base(ctor)
    raise ShapeError(f"unknown constructor {ctor!r}")


def value_names(value: Any) -> frozenset:
    """All names occurring anywhere inside a value."""
    if isinstance(value, Name):
        return frozenset((value,))
    dec = decompose(value)
    if dec is None:
        return frozenset()
    out = frozenset()
    for arg in dec[1]:
        out |= value_names(arg)
    return out


def render_value(value: Any) -> str:
    """Surface rendering, replayable by the corresponding parsers."""
    if isinstance(value, (TyAssoc, VarAssoc, Name)):
        return str(value)
    if isinstance(value, (Base, Arrow)):
        return print_type(value)
    return str(value)


# ---------------------------------------------------------------------------
# Patterns and side formulas.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NablaVar:
    name: str


@dataclass(frozen=True)
class MetaVar:
    name: str


@dataclass(frozen=True)
class PatApp:
    ctor: str
    args: tuple


PatTerm = Any  # NablaVar | MetaVar | PatApp


def match_pattern(pat: PatTerm, value: Any, binding: dict) -> Optional[dict]:
    """Extend a binding so that the instantiated pattern equals the value."""
    if isinstance(pat, (NablaVar, MetaVar)):
        if pat in binding:
            return binding if binding[pat] == value else None
        if isinstance(pat, NablaVar) and not isinstance(value, Name):
            return None
        extended = dict(binding)
        extended[pat] = value
        return extended
    dec = decompose(value)
    if dec is None or dec[0] != pat.ctor or len(dec[1]) != len(pat.args):
        return None
    for sub_pat, sub_val in zip(pat.args, dec[1]):
        binding = match_pattern(sub_pat, sub_val, binding)
        if binding is None:
            return None
    return binding


def instantiate(pat: PatTerm, binding: dict) -> Any:
    if isinstance(pat, (NablaVar, MetaVar)):
        if pat not in binding:
            raise ShapeError(f"unbound variable {pat.name!r}")
        return binding[pat]
    return construct(pat.ctor, tuple(instantiate(a, binding) for a in pat.args))


def pattern_vars(pat: PatTerm) -> frozenset:
    if isinstance(pat, (NablaVar, MetaVar)):
        return frozenset((pat.name,))
    out = frozenset()
    for a in pat.args:
        out |= pattern_vars(a)
    return out


def render_pattern(pat: PatTerm) -> str:
    if isinstance(pat, (NablaVar, MetaVar)):
        return pat.name
    if not pat.args:
        return pat.ctor
    rendered = []
    for a in pat.args:
        s = render_pattern(a)
        rendered.append(f"({s})" if isinstance(a, PatApp) and a.args else s)
    return f"{pat.ctor} " + " ".join(rendered)


@dataclass(frozen=True)
class FTrue:
    pass


@dataclass(frozen=True)
class FIsName:
    term: PatTerm


@dataclass(frozen=True)
class FEq:
    lhs: PatTerm
    rhs: PatTerm


@dataclass(frozen=True)
class FAnd:
    left: "SideFormula"
    right: "SideFormula"


@dataclass(frozen=True)
class FOr:
    left: "SideFormula"
    right: "SideFormula"


SideFormula = Any


def eval_formula(f: SideFormula, binding: dict) -> bool:
    if isinstance(f, FTrue):
        return True
    if isinstance(f, FIsName):
        return isinstance(instantiate(f.term, binding), Name)
    if isinstance(f, FEq):
        return instantiate(f.lhs, binding) == instantiate(f.rhs, binding)
    if isinstance(f, FAnd):
        return eval_formula(f.left, binding) and eval_formula(f.right, binding)
    if isinstance(f, FOr):
        return eval_formula(f.left, binding) or eval_formula(f.right, binding)
    raise ShapeError(f"unknown formula {f!r}")


def formula_vars(f: SideFormula) -> frozenset:
    if isinstance(f, FTrue):
        return frozenset()
    if isinstance(f, FIsName):
        return pattern_vars(f.term)
    if isinstance(f, FEq):
        return pattern_vars(f.lhs) | pattern_vars(f.rhs)
    if isinstance(f, (FAnd, FOr)):
        return formula_vars(f.left) | formula_vars(f.right)
    raise ShapeError(f"unknown formula {f!r}")


def render_formula(f: SideFormula) -> str:
    if isinstance(f, FTrue):
        return "true"
    if isinstance(f, FIsName):
        return f"name {render_pattern(f.term)}"
    if isinstance(f, FEq):
        return f"{render_pattern(f.lhs)} = {render_pattern(f.rhs)}"
    if isinstance(f, FAnd):
        return f"{render_formula(f.left)} /\\ {render_formula(f.right)}"
    if isinstance(f, FOr):
        return f"({render_formula(f.left)} \\/ {render_formula(f.right)})"
    raise ShapeError(f"unknown formula {f!r}")


# ---------------------------------------------------------------------------
# Context specifications.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Clause:
    nabla_vars: tuple
    patterns: tuple
    formula: SideFormula


@dataclass(frozen=True)
class ContextSpec:
    name: str
    arity: int
    clauses: tuple
    warnings: tuple = ()

    @property
    def list_name(self) -> str:
        return f"{self.name}_list"


def _patterns_may_overlap(p: PatTerm, q: PatTerm) -> bool:
    if isinstance(p, (NablaVar, MetaVar)) or isinstance(q, (NablaVar, MetaVar)):
        return True
    if p.ctor != q.ctor or len(p.args) != len(q.args):
        return False
    return all(_patterns_may_overlap(a, b) for a, b in zip(p.args, q.args))


def _validate_spec(name: str, clauses: Sequence[Clause]) -> ContextSpec:
    if not clauses:
        raise ShapeError("a context specification needs at least one clause")
    arity = len(clauses[0].patterns)
    if arity < 1:
        raise ShapeError("a clause needs at least one element pattern")
    for clause in clauses:
        if len(clause.patterns) != arity:
            raise ShapeError(
                f"arity mismatch: clause has {len(clause.patterns)} patterns, expected {arity}"
            )
        if len(set(clause.nabla_vars)) != len(clause.nabla_vars):
            raise ShapeError("nabla variables must be distinct within a clause")
        in_patterns = frozenset()
        for p in clause.patterns:
            in_patterns |= pattern_vars(p)
        for v in clause.nabla_vars:
            if v not in in_patterns:
                raise ShapeError(f"nabla variable {v!r} occurs in no pattern")
        clause_vars = in_patterns | set(clause.nabla_vars)
        loose = formula_vars(clause.formula) - clause_vars
        if loose:
            raise ShapeError(f"unbound variable(s) in formula: {sorted(loose)}")
    warnings = []
    for i, c1 in enumerate(clauses):
        for c2 in clauses[i + 1 :]:
            if all(_patterns_may_overlap(p, q) for p, q in zip(c1.patterns, c2.patterns)):
                warnings.append(
                    f"clauses of {name!r} may overlap; uniqueness-style lemmas can fail"
                )
    return ContextSpec(name, arity, tuple(clauses), tuple(dict.fromkeys(warnings)))


# ---------------------------------------------------------------------------
# Parsing the command syntax:
#
#   Context NAME with elems as
#       nabla v1 ... vk (TERM _|_ ... _|_ TERM -| FORMULA) \/ ... .
#
# The nabla prefix is omitted for zero variables, the formula when true.
# ---------------------------------------------------------------------------


def _classify_ident(text: str, nabla_vars: Sequence[str]) -> PatTerm:
    if text in nabla_vars:
        return NablaVar(text)
    if text[0].isupper():
        return MetaVar(text)
    return PatApp(text, ())


def _parse_pattern_atom(ts: TokenStream, nabla_vars: Sequence[str]) -> PatTerm:
    if ts.at_sym("("):
        ts.next()
        inner = _parse_pattern(ts, nabla_vars)
        ts.eat_sym(")")
        return inner
    tok = ts.eat_ident()
    return _classify_ident(tok.text, nabla_vars)


def _parse_pattern(ts: TokenStream, nabla_vars: Sequence[str]) -> PatTerm:
    head = ts.eat_ident()
    if head.text in _CTOR_SIGS:
        arity = len(_CTOR_SIGS[head.text])
        args = tuple(_parse_pattern_atom(ts, nabla_vars) for _ in range(arity))
        return PatApp(head.text, args)
    if ts.at_ident() or ts.at_sym("("):
        raise SyntaxError_(f"unknown constructor {head.text!r}", head.pos)
    return _classify_ident(head.text, nabla_vars)


def _parse_formula(ts: TokenStream, nabla_vars: Sequence[str]) -> SideFormula:
    left = _parse_formula_conj(ts, nabla_vars)
    while ts.at_sym("\\/"):
        ts.next()
        left = FOr(left, _parse_formula_conj(ts, nabla_vars))
    return left


def _parse_formula_conj(ts: TokenStream, nabla_vars: Sequence[str]) -> SideFormula:
    left = _parse_formula_atom(ts, nabla_vars)
    while ts.at_sym("/\\"):
        ts.next()
        left = FAnd(left, _parse_formula_atom(ts, nabla_vars))
    return left


def _parse_formula_atom(ts: TokenStream, nabla_vars: Sequence[str]) -> SideFormula:
    if ts.at_sym("("):
        ts.next()
        inner = _parse_formula(ts, nabla_vars)
        ts.eat_sym(")")
        return inner
    if ts.at_ident("true"):
        ts.next()
        return FTrue()
    if ts.at_ident("name"):
        ts.next()
        return FIsName(_parse_pattern_atom(ts, nabla_vars))
    lhs = _parse_pattern(ts, nabla_vars)
    ts.eat_sym("=")
    rhs = _parse_pattern(ts, nabla_vars)
    return FEq(lhs, rhs)


def _parse_clause(ts: TokenStream) -> Clause:
    nabla_vars: list = []
    if ts.at_ident("nabla"):
        ts.next()
        while ts.at_ident():
            nabla_vars.append(ts.eat_ident().text)
        if not nabla_vars:
            raise SyntaxError_("nabla requires at least one variable", ts.peek().pos)
    ts.eat_sym("(")
    patterns = [_parse_pattern(ts, nabla_vars)]
    while ts.at_sym("_|_"):
        ts.next()
        patterns.append(_parse_pattern(ts, nabla_vars))
    formula: SideFormula = FTrue()
    if ts.at_sym("-|"):
        ts.next()
        formula = _parse_formula(ts, nabla_vars)
    ts.eat_sym(")")
    return Clause(tuple(nabla_vars), tuple(patterns), formula)


def parse_spec_tokens(ts: TokenStream) -> ContextSpec:
    ts.eat_ident("Context")
    name = ts.eat_ident().text
    ts.eat_ident("with")
    ts.eat_ident("elems")
    ts.eat_ident("as")
    clauses = [_parse_clause(ts)]
    while ts.at_sym("\\/"):
        ts.next()
        clauses.append(_parse_clause(ts))
    ts.eat_sym(".")
    return _validate_spec(name, clauses)


def parse_spec(text: str) -> ContextSpec:
    ts = TokenStream.of(text)
    spec = parse_spec_tokens(ts)
    ts.expect_eof()
    return spec


def parse_spec_file(text: str) -> list:
    ts = TokenStream.of(text)
    specs = []
    while ts.at_ident("Context"):
        specs.append(parse_spec_tokens(ts))
    ts.expect_eof()
    return specs


# ---------------------------------------------------------------------------
# The elaborated predicates.
# ---------------------------------------------------------------------------


def _clause_instance_ok(
    clause: Clause, binding: dict, later_names: frozenset, enforce_freshness: bool
) -> bool:
    """Nabla side conditions plus the clause formula under a head match.

    The nabla values must be pairwise-distinct names that occur neither
    in the metavariable substitution nor among the given tail names.
    """
    nabla_vals = [binding[NablaVar(v)] for v in clause.nabla_vars]
    if enforce_freshness:
        if len(set(nabla_vals)) != len(nabla_vals):
            return False
        for key, val in binding.items():
            if isinstance(key, MetaVar):
                names_in_val = value_names(val)
                if any(nv in names_in_val for nv in nabla_vals):
                    return False
        if any(nv in later_names for nv in nabla_vals):
            return False
    return eval_formula(clause.formula, binding)


def check_list_pred(spec: ContextSpec, contexts: Sequence[Ctx], enforce_freshness: bool = True) -> bool:
    """The list-form predicate, read directly off the generated clauses.

    All contexts empty, or some clause matches all heads under one
    substitution whose nabla variables are distinct fresh names, the side
    formula holds, and the tails satisfy the predicate recursively.
    """
    if len(contexts) != spec.arity:
        raise PreconditionError(f"expected {spec.arity} contexts, got {len(contexts)}")
    for l in contexts:
        if not is_list(l):
            raise PreconditionError("list-form predicate requires list contexts")
    seqs = [elems(l) for l in contexts]
    if len({len(s) for s in seqs}) != 1:
        return False
    return _list_rec(spec, seqs, 0, enforce_freshness)


def _list_rec(spec: ContextSpec, seqs: list, pos: int, enforce: bool) -> bool:
    if pos == len(seqs[0]):
        return True
    for clause in spec.clauses:
        binding: Optional[dict] = {}
        for pat, seq in zip(clause.patterns, seqs):
            binding = match_pattern(pat, seq[pos], binding)
            if binding is None:
                break
        if binding is None:
            continue
        tail_names = frozenset()
        for seq in seqs:
            for entry in seq[pos + 1 :]:
                tail_names |= value_names(entry)
        if not _clause_instance_ok(clause, binding, tail_names, enforce):
            continue
        if _list_rec(spec, seqs, pos + 1, enforce):
            return True
    return False


def align_mset(
    spec: ContextSpec, contexts: Sequence[Ctx], enforce_freshness: bool = True
) -> Optional[tuple]:
    """Witness for the multiset-form predicate.

    Finds coordinated entry sequences, one element from each context per
    clause application, by backtracking over clauses, element choices
    (pivoting on the context with the fewest distinct elements), and
    selection residuals.  Returns one entry tuple per context; each is a
    permutation of its context's elements and together they satisfy the
    list-form predicate.
    """
    if len(contexts) != spec.arity:
        raise PreconditionError(f"expected {spec.arity} contexts, got {len(contexts)}")
    return _align_rec(spec, tuple(contexts), enforce_freshness)


def _align_rec(spec: ContextSpec, gs: tuple, enforce: bool) -> Optional[tuple]:
    if all(no_elems(g) for g in gs):
        return tuple(() for _ in gs)
    item_seqs = [elems(g) for g in gs]
    if len({len(s) for s in item_seqs}) != 1 or not item_seqs[0]:
        return None
    n = len(gs)
    distinct = [tuple(dict.fromkeys(s)) for s in item_seqs]
    pivot = min(range(n), key=lambda i: len(distinct[i]))
    order = [pivot] + [i for i in range(n) if i != pivot]

    for clause in spec.clauses:

        def choose_elems(idx: int, binding: dict, chosen: dict):
            if idx == n:
                yield binding, chosen
                return
            i = order[idx]
            for cand in distinct[i]:
                extended = match_pattern(clause.patterns[i], cand, binding)
                if extended is not None:
                    new_chosen = dict(chosen)
                    new_chosen[i] = cand
                    yield from choose_elems(idx + 1, extended, new_chosen)

        for binding, chosen in choose_elems(0, {}, {}):
            def residual_choices(i: int, acc: tuple):
                if i == n:
                    yield acc
                    return
                for _, r in dict.fromkeys(select(chosen[i], gs[i])):
                    yield from residual_choices(i + 1, acc + (r,))

            for residuals in residual_choices(0, ()):
                tail_names = frozenset()
                for r in residuals:
                    for entry in elems(r):
                        tail_names |= value_names(entry)
                if not _clause_instance_ok(clause, binding, tail_names, enforce):
                    continue
                sub = _align_rec(spec, residuals, enforce)
                if sub is not None:
                    return tuple((chosen[i],) + sub[i] for i in range(n))
    return None


def check_mset_pred(
    spec: ContextSpec, contexts: Sequence[Ctx], enforce_freshness: bool = True
) -> bool:
    """The multiset-form predicate: some list permutations satisfy the list form."""
    return align_mset(spec, contexts, enforce_freshness) is not None


# ---------------------------------------------------------------------------
# Member-based lemma statements.
#
#   Lemma NAME : forall VAR*, PRED L1 ... Ln -> [member TERM Li ->]*
#       [exists VAR*,] ATOM [/\ ATOM]* .
#
# where ATOM is `member TERM Lj`, `name TERM`, `TERM = TERM`, or `true`.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LemmaStmt:
    name: str
    pred_name: str
    ctx_vars: tuple
    forall_vars: tuple
    hyp_members: tuple    # ((pattern, context index), ...)
    exist_vars: tuple
    concl_members: tuple  # ((pattern, context index), ...)
    concl_formulas: tuple
    concl_eqs: tuple      # ((pattern, pattern), ...)

    def mentions_ctx_vars(self) -> bool:
        used = frozenset()
        for pat, _ in self.hyp_members + self.concl_members:
            used |= pattern_vars(pat)
        for f in self.concl_formulas:
            used |= formula_vars(f)
        for lhs, rhs in self.concl_eqs:
            used |= pattern_vars(lhs) | pattern_vars(rhs)
        return bool(used & set(self.ctx_vars))


def _classify_lemma_ident(text: str, declared: Sequence[str]) -> PatTerm:
    if text in declared:
        return MetaVar(text)
    return PatApp(text, ())


def _parse_lemma_pattern_atom(ts: TokenStream, declared: Sequence[str]) -> PatTerm:
    if ts.at_sym("("):
        ts.next()
        inner = _parse_lemma_pattern(ts, declared)
        ts.eat_sym(")")
        return inner
    tok = ts.eat_ident()
    return _classify_lemma_ident(tok.text, declared)


def _parse_lemma_pattern(ts: TokenStream, declared: Sequence[str]) -> PatTerm:
    head = ts.eat_ident()
    if head.text in _CTOR_SIGS:
        arity = len(_CTOR_SIGS[head.text])
        args = tuple(_parse_lemma_pattern_atom(ts, declared) for _ in range(arity))
        return PatApp(head.text, args)
    return _classify_lemma_ident(head.text, declared)


def parse_lemma_tokens(ts: TokenStream) -> LemmaStmt:
    ts.eat_ident("Lemma")
    name = ts.eat_ident().text
    ts.eat_sym(":")
    ts.eat_ident("forall")
    forall_vars = []
    while not ts.at_sym(","):
        forall_vars.append(ts.eat_ident().text)
    ts.eat_sym(",")
    pred_name = ts.eat_ident().text
    ctx_vars = []
    while ts.at_ident():
        ctx_vars.append(ts.eat_ident().text)
    if not ctx_vars:
        raise SyntaxError_("predicate application needs context variables", ts.peek().pos)
    declared = list(forall_vars) + [v for v in ctx_vars if v not in forall_vars]

    def ctx_index(tok) -> int:
        if tok.text not in ctx_vars:
            raise SyntaxError_(f"{tok.text!r} is not a context variable", tok.pos)
        return ctx_vars.index(tok.text)

    hyp_members = []
    ts.eat_sym("->")
    while True:
        if ts.at_ident("member"):
            ts.next()
            pat = _parse_lemma_pattern_atom(ts, declared)
            idx = ctx_index(ts.eat_ident())
            hyp_members.append((pat, idx))
            ts.eat_sym("->")
            continue
        break

    exist_vars = []
    if ts.at_ident("exists"):
        ts.next()
        while not ts.at_sym(","):
            exist_vars.append(ts.eat_ident().text)
        ts.eat_sym(",")
        declared += exist_vars

    concl_members = []
    concl_formulas = []
    concl_eqs = []
    while True:
        if ts.at_ident("member"):
            ts.next()
            pat = _parse_lemma_pattern_atom(ts, declared)
            idx = ctx_index(ts.eat_ident())
            concl_members.append((pat, idx))
        elif ts.at_ident("name"):
            ts.next()
            concl_formulas.append(FIsName(_parse_lemma_pattern_atom(ts, declared)))
        elif ts.at_ident("true"):
            ts.next()
        else:
            lhs = _parse_lemma_pattern(ts, declared)
            ts.eat_sym("=")
            rhs = _parse_lemma_pattern(ts, declared)
            concl_eqs.append((lhs, rhs))
        if ts.at_sym("/\\"):
            ts.next()
            continue
        break
    ts.eat_sym(".")
    return LemmaStmt(
        name=name,
        pred_name=pred_name,
        ctx_vars=tuple(ctx_vars),
        forall_vars=tuple(v for v in forall_vars if v not in ctx_vars),
        hyp_members=tuple(hyp_members),
        exist_vars=tuple(exist_vars),
        concl_members=tuple(concl_members),
        concl_formulas=tuple(concl_formulas),
        concl_eqs=tuple(concl_eqs),
    )


def parse_lemma(text: str) -> LemmaStmt:
    ts = TokenStream.of(text)
    stmt = parse_lemma_tokens(ts)
    ts.expect_eof()
    return stmt


def parse_lemma_file(text: str) -> list:
    ts = TokenStream.of(text)
    out = []
    while ts.at_ident("Lemma"):
        out.append(parse_lemma_tokens(ts))
    ts.expect_eof()
    return out


def render_lemma(stmt: LemmaStmt) -> str:
    quantified = list(stmt.ctx_vars) + list(stmt.forall_vars)
    parts = [f"Lemma {stmt.name} : forall {' '.join(quantified)},"]
    hyps = [f"{stmt.pred_name} {' '.join(stmt.ctx_vars)}"]
    for pat, idx in stmt.hyp_members:
        rendered = render_pattern(pat)
        if isinstance(pat, PatApp) and pat.args:
            rendered = f"({rendered})"
        hyps.append(f"member {rendered} {stmt.ctx_vars[idx]}")
    body = " -> ".join(hyps) + " ->"
    concl = []
    for pat, idx in stmt.concl_members:
        rendered = render_pattern(pat)
        if isinstance(pat, PatApp) and pat.args:
            rendered = f"({rendered})"
        concl.append(f"member {rendered} {stmt.ctx_vars[idx]}")
    concl += [render_formula(f) for f in stmt.concl_formulas]
    concl += [f"{render_pattern(l)} = {render_pattern(r)}" for l, r in stmt.concl_eqs]
    if not concl:
        concl = ["true"]
    conclusion = " /\\ ".join(concl)
    if stmt.exist_vars:
        conclusion = f"exists {' '.join(stmt.exist_vars)}, " + conclusion
    return f"{parts[0]} {body} {conclusion}."


# ---------------------------------------------------------------------------
# Sorts and candidate universes for lemma variables.
# ---------------------------------------------------------------------------


def _index_elem_sort(spec: ContextSpec, idx: int) -> Optional[str]:
    sorts = set()
    for clause in spec.clauses:
        p = clause.patterns[idx]
        if isinstance(p, PatApp):
            result = _CTOR_RESULT.get(p.ctor)
            if result is not None:
                sorts.add(result)
    if len(sorts) == 1:
        return sorts.pop()
    return None


def _lemma_var_sorts(spec: ContextSpec, stmt: LemmaStmt) -> dict:
    sorts: dict = {}

    def walk(pat: PatTerm, sort: Optional[str]) -> None:
        if isinstance(pat, (MetaVar, NablaVar)):
            if sort is not None:
                sorts.setdefault(pat.name, sort)
            return
        sig = _CTOR_SIGS.get(pat.ctor)
        if sig is not None:
            for a, s in zip(pat.args, sig):
                walk(a, s)

    for _ in range(2):  # second pass lets equalities propagate sorts
        for pat, idx in stmt.hyp_members + stmt.concl_members:
            walk(pat, _index_elem_sort(spec, idx))
        for f in stmt.concl_formulas:
            if isinstance(f, FIsName):
                walk(f.term, "name")
        for lhs, rhs in stmt.concl_eqs:
            lhs_sort = _pattern_sort(lhs, sorts)
            rhs_sort = _pattern_sort(rhs, sorts)
            walk(lhs, rhs_sort)
            walk(rhs, lhs_sort)
    return sorts


def _pattern_sort(pat: PatTerm, sorts: dict) -> Optional[str]:
    if isinstance(pat, (MetaVar, NablaVar)):
        return sorts.get(pat.name)
    result = _CTOR_RESULT.get(pat.ctor)
    if result is not None:
        return result
    if not pat.args:
        return "ty"  # bare lowercase constants denote base types
    return None


def _value_sort(value: Any) -> str:
    if isinstance(value, Name):
        return "name"
    if isinstance(value, (Base, Arrow)):
        return "ty"
    dec = decompose(value)
    if dec is not None:
        return _CTOR_RESULT.get(dec[0], "elem")
    return "elem"


def _collect_by_sort(contexts: Sequence[Ctx]) -> dict:
    """Candidate witness values occurring in the given contexts, by sort."""
    found: dict = {}

    def add(value: Any) -> None:
        bucket = found.setdefault(_value_sort(value), {})
        bucket.setdefault(value, None)
        dec = decompose(value)
        if dec is not None:
            for arg in dec[1]:
                add(arg)

    for g in contexts:
        for entry in elems(g):
            add(entry)
    return {sort: list(bucket) for sort, bucket in found.items()}


def _sort_candidates(sort: Optional[str], pools: dict, bounds: GenBounds) -> list:
    candidates = list(pools.get(sort, ())) if sort is not None else []
    if sort == "ty":
        for ty in type_universe(bounds.base_types, bounds.type_depth):
            if ty not in candidates:
                candidates.append(ty)
    if sort == "name" and not candidates:
        candidates = name_pool(1)
    if sort is None:
        for values in pools.values():
            candidates.extend(values)
    return candidates


# ---------------------------------------------------------------------------
# Evaluating a lemma statement on one context tuple.
# ---------------------------------------------------------------------------


def _render_contexts(ctx_vars: Sequence[str], contexts: Sequence[Ctx]) -> str:
    return "; ".join(
        f"{v} = {print_ctx(g, render_value)}" for v, g in zip(ctx_vars, contexts)
    )


def _render_binding(binding: dict) -> str:
    items = sorted(
        (key.name, render_value(val)) for key, val in binding.items()
    )
    return ", ".join(f"{k} = {v}" for k, v in items)


def _lemma_instance_failure(
    spec: ContextSpec, stmt: LemmaStmt, contexts: Sequence[Ctx], bounds: GenBounds
) -> Optional[str]:
    """None if the statement holds on this tuple, else a counterexample."""
    sorts = _lemma_var_sorts(spec, stmt)
    pools = _collect_by_sort(contexts)

    bindings = [dict()]
    for pat, idx in stmt.hyp_members:
        extended = []
        for b in bindings:
            for value in dict.fromkeys(elems(contexts[idx])):
                b2 = match_pattern(pat, b_value := value, b)
                if b2 is not None:
                    extended.append(b2)
        bindings = extended
        if not bindings:
            return None  # hypotheses unsatisfiable on this tuple

    unbound = [
        v
        for v in stmt.forall_vars
        if MetaVar(v) not in bindings[0] and v not in stmt.exist_vars
    ]
    if unbound:
        expanded = []
        for b in bindings:
            options = [
                _sort_candidates(sorts.get(v), pools, bounds) for v in unbound
            ]
            for combo in itertools.product(*options):
                b2 = dict(b)
                for v, val in zip(unbound, combo):
                    b2[MetaVar(v)] = val
                expanded.append(b2)
        bindings = expanded

    exist_options = [
        _sort_candidates(sorts.get(v), pools, bounds) for v in stmt.exist_vars
    ]

    for binding in bindings:
        found = False
        for combo in itertools.product(*exist_options):
            candidate = dict(binding)
            for v, val in zip(stmt.exist_vars, combo):
                candidate[MetaVar(v)] = val
            ok = True
            for pat, idx in stmt.concl_members:
                if not member(instantiate(pat, candidate), contexts[idx]):
                    ok = False
                    break
            if ok:
                for f in stmt.concl_formulas:
                    if not eval_formula(f, candidate):
                        ok = False
                        break
            if ok:
                for lhs, rhs in stmt.concl_eqs:
                    if instantiate(lhs, candidate) != instantiate(rhs, candidate):
                        ok = False
                        break
            if ok:
                found = True
                break
        if not found:
            return (
                f"{_render_contexts(stmt.ctx_vars, contexts)}"
                + (f" with {_render_binding(binding)}" if binding else "")
            )
    return None


# ---------------------------------------------------------------------------
# Constructive generation of satisfying instances.
# ---------------------------------------------------------------------------


def _clause_metavars(clause: Clause) -> list:
    out = []
    for p in clause.patterns:
        for v in sorted(pattern_vars(p)):
            if v not in clause.nabla_vars and v not in out:
                out.append(v)
    return out


def _clause_metavar_sorts(clause: Clause) -> dict:
    sorts: dict = {}

    def walk(pat: PatTerm, sort: Optional[str]) -> None:
        if isinstance(pat, MetaVar):
            if sort is not None:
                sorts.setdefault(pat.name, sort)
            return
        if isinstance(pat, NablaVar):
            return
        sig = _CTOR_SIGS.get(pat.ctor)
        if sig is not None:
            for a, s in zip(pat.args, sig):
                walk(a, s)

    for p in clause.patterns:
        walk(p, None)
    return sorts


def generate_list_instances(
    spec: ContextSpec, bounds: GenBounds, enforce_freshness: bool = True
) -> list:
    """All list tuples derivable from the clauses within the bounds.

    Instances are built by prepending clause instances to shorter ones.
    Metavariables draw from the type universe (or a small name pool, by
    sort); nabla variables take the next canonical fresh name, plus
    deliberate collision candidates that the freshness condition rejects
    while it is enforced.
    """
    type_univ = type_universe(bounds.base_types, bounds.type_depth)
    meta_names = name_pool(max(1, bounds.name_pool - 1), "m")

    def meta_options(sort: Optional[str]) -> list:
        if sort == "ty":
            return list(type_univ)
        if sort == "name":
            return list(meta_names)
        return list(type_univ)

    results = [tuple(() for _ in range(spec.arity))]
    frontier = list(results)
    for _ in range(bounds.ctx_elems):
        new_frontier = []
        for rows in frontier:
            used_names = set()
            for row in rows:
                for entry in row:
                    used_names |= value_names(entry)
            for clause in spec.clauses:
                mvars = _clause_metavars(clause)
                msorts = _clause_metavar_sorts(clause)
                option_lists = [meta_options(msorts.get(v)) for v in mvars]
                fresh_base = 0
                nabla_pool = []
                taken = set(used_names) | set(meta_names)
                for _v in clause.nabla_vars:
                    while Name("n", fresh_base) in taken:
                        fresh_base += 1
                    nabla_pool.append(Name("n", fresh_base))
                    taken.add(Name("n", fresh_base))
                collision_candidates = sorted(used_names, key=str)[:1]
                for meta_combo in itertools.product(*option_lists):
                    binding = {
                        MetaVar(v): val for v, val in zip(mvars, meta_combo)
                    }
                    nabla_choices = [tuple(nabla_pool)]
                    for coll in collision_candidates:
                        for i in range(len(clause.nabla_vars)):
                            alt = list(nabla_pool)
                            alt[i] = coll
                            nabla_choices.append(tuple(alt))
                    if len(clause.nabla_vars) >= 2:
                        alt = list(nabla_pool)
                        alt[1] = alt[0]
                        nabla_choices.append(tuple(alt))
                    for nabla_combo in dict.fromkeys(nabla_choices):
                        full = dict(binding)
                        for v, val in zip(clause.nabla_vars, nabla_combo):
                            full[NablaVar(v)] = val
                        try:
                            entries = tuple(
                                instantiate(p, full) for p in clause.patterns
                            )
                        except ShapeError:
                            continue
                        candidate = tuple(
                            (entries[i],) + rows[i] for i in range(spec.arity)
                        )
                        lists = tuple(from_list(row) for row in candidate)
                        if check_list_pred(spec, lists, enforce_freshness):
                            new_frontier.append(candidate)
        frontier = new_frontier
        results.extend(frontier)
    return [tuple(from_list(row) for row in rows) for rows in results]


def _row_variants(row: tuple, bounds: GenBounds) -> list:
    """A bounded set of multiset restructurings of one entry sequence."""
    variants = [from_list(row)]
    if bounds.union_depth >= 2 and row:
        variants.append(Union(from_list(row[:1]), from_list(row[1:])))
    if len(row) >= 2:
        variants.append(from_list(tuple(reversed(row))))
        if bounds.union_depth >= 2:
            variants.append(Union(from_list(row[1:]), from_list(row[:1])))
        if bounds.union_depth >= 3:
            variants.append(
                Union(Union(from_list(row[:1]), EMPTY), from_list(tuple(reversed(row[1:]))))
            )
    return list(dict.fromkeys(variants))


def generate_mset_instances(
    spec: ContextSpec, bounds: GenBounds, enforce_freshness: bool = True
) -> list:
    """Multiset context tuples satisfying the predicate within the bounds.

    Takes every list instance and restructures the contexts: the same
    variant applied across all of them, plus each context varied alone.
    """
    out = []
    seen = set()
    for lists in generate_list_instances(spec, bounds, enforce_freshness):
        rows = tuple(elems(l) for l in lists)
        per_index = [_row_variants(row, bounds) for row in rows]
        combos = []
        max_variants = max(len(v) for v in per_index)
        for k in range(max_variants):
            combos.append(tuple(v[min(k, len(v) - 1)] for v in per_index))
        for i in range(spec.arity):
            for variant in per_index[i][1:]:
                combo = tuple(
                    variant if j == i else per_index[j][0] for j in range(spec.arity)
                )
                combos.append(combo)
        for combo in combos:
            if combo not in seen:
                seen.add(combo)
                out.append(combo)
    return out


def verify_lemma_cases(
    spec: ContextSpec,
    stmt: LemmaStmt,
    bounds: GenBounds = GenBounds(),
    enforce_freshness: bool = True,
) -> tuple:
    """Case-level body of verify_lemma: (cases run, counterexample or None)."""
    if stmt.pred_name == spec.list_name:
        instances = generate_list_instances(spec, bounds, enforce_freshness)
    elif stmt.pred_name == spec.name:
        instances = generate_mset_instances(spec, bounds, enforce_freshness)
    else:
        raise ShapeError(
            f"lemma is about {stmt.pred_name!r}, expected {spec.name!r} or {spec.list_name!r}"
        )
    cases = 0
    for contexts in instances:
        cases += 1
        failure = _lemma_instance_failure(spec, stmt, contexts, bounds)
        if failure is not None:
            return cases, failure
    return cases, None


def verify_lemma(
    spec: ContextSpec,
    stmt: LemmaStmt,
    bounds: GenBounds = GenBounds(),
    enforce_freshness: bool = True,
) -> CheckReport:
    """Bounded-exhaustive verification of a member-based lemma statement.

    Context tuples satisfying the predicate are generated constructively
    from the clauses; member hypotheses are instantiated over all
    elements; existential conclusions are searched over a finite witness
    universe drawn from the contexts and the type universe.
    """
    return run_check(
        stmt.name, lambda: verify_lemma_cases(spec, stmt, bounds, enforce_freshness)
    )


# ---------------------------------------------------------------------------
# Distributivity lemmas.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DistrLemma:
    spec_name: str
    arity: int
    index: int  # 1-based

    @property
    def name(self) -> str:
        return f"{self.spec_name}_distr{self.index}"

    def render(self) -> str:
        i = self.index
        n = self.arity
        gvars = [f"G{j}" for j in range(1, n + 1)]
        forall = []
        for j in range(1, n + 1):
            forall.append(f"G{j}")
            if j == i:
                forall += [f"G{i}'", f"G{i}''"]
        exist = []
        for j in range(1, n + 1):
            if j != i:
                exist += [f"G{j}'", f"G{j}''"]
        primes = " ".join(f"G{j}'" for j in range(1, n + 1))
        doubles = " ".join(f"G{j}''" for j in range(1, n + 1))
        perms = " /\\ ".join(
            f"G{j} ~ G{j}' ++ G{j}''" for j in range(1, n + 1) if j != i
        )
        concl = f"{self.spec_name} {primes} /\\ {self.spec_name} {doubles}"
        if perms:
            concl += f" /\\ {perms}"
        return (
            f"Theorem {self.name} : forall {' '.join(forall)}, "
            f"{self.spec_name} {' '.join(gvars)} -> G{i} ~ G{i}' ++ G{i}'' -> "
            f"exists {' '.join(exist)}, {concl}."
        )


def gen_distr_lemma(spec: ContextSpec, index: int) -> DistrLemma:
    """The distributivity statement for one context position (1-based)."""
    if not 1 <= index <= spec.arity:
        raise PreconditionError(
            f"index {index} out of range for arity {spec.arity}"
        )
    return DistrLemma(spec.name, spec.arity, index)


def _distr_witnesses(
    spec: ContextSpec,
    contexts: Sequence[Ctx],
    index0: int,
    first: Ctx,
    second: Ctx,
    enforce_freshness: bool = True,
) -> Optional[tuple]:
    """Coordinated split witnesses for one predicate instance.

    Aligns the contexts into coordinated lists, flattens the given split
    of the chosen context into an ordered partition of its list, applies
    the same position mask to every other list, and returns the halves.
    Returns None when any step or the final predicate checks fail.
    """
    aligned = align_mset(spec, contexts, enforce_freshness)
    if aligned is None:
        return None
    lists = [from_list(row) for row in aligned]
    mask = perm_to_part_mask(lists[index0], first, second)
    firsts = []
    seconds = []
    for row in aligned:
        firsts.append(from_list([e for e, m in zip(row, mask) if m]))
        seconds.append(from_list([e for e, m in zip(row, mask) if not m]))
    if not check_list_pred(spec, firsts, enforce_freshness):
        return None
    if not check_list_pred(spec, seconds, enforce_freshness):
        return None
    primes = tuple(first if j == index0 else firsts[j] for j in range(spec.arity))
    doubles = tuple(second if j == index0 else seconds[j] for j in range(spec.arity))
    if not check_mset_pred(spec, primes, enforce_freshness):
        return None
    if not check_mset_pred(spec, doubles, enforce_freshness):
        return None
    for j in range(spec.arity):
        if j != index0 and not perm(contexts[j], Union(firsts[j], seconds[j])):
            return None
    return primes, doubles, tuple(firsts), tuple(seconds)


def check_distr_cases(
    spec: ContextSpec,
    index: int,
    bounds: GenBounds = GenBounds(),
    enforce_freshness: bool = True,
) -> tuple:
    """Case-level body of check_distr: (cases run, counterexample or None)."""
    instances = generate_mset_instances(spec, bounds, enforce_freshness)
    index0 = index - 1
    cases = 0
    for contexts in instances:
        for first, second in splits(contexts[index0]):
            cases += 1
            if _distr_witnesses(
                spec, contexts, index0, first, second, enforce_freshness
            ) is None:
                gvars = [f"G{j}" for j in range(1, spec.arity + 1)]
                split_desc = (
                    f"G{index} ~ {print_ctx(first, render_value)}"
                    f" ++ {print_ctx(second, render_value)}"
                )
                return cases, f"{_render_contexts(gvars, contexts)}; {split_desc}"
    return cases, None


def check_distr(
    spec: ContextSpec,
    index: int,
    bounds: GenBounds = GenBounds(),
    enforce_freshness: bool = True,
) -> CheckReport:
    """Verify the distributivity lemma for one index over generated instances."""
    lemma = gen_distr_lemma(spec, index)
    return run_check(
        lemma.name, lambda: check_distr_cases(spec, index, bounds, enforce_freshness)
    )


# ---------------------------------------------------------------------------
# Lifting member-based lemmas from the list form to the multiset form.
# ---------------------------------------------------------------------------


def lift_lemma(spec: ContextSpec, stmt: LemmaStmt) -> tuple:
    """The multiset-form statement for a list-form lemma, plus its checker.

    Precondition: the statement is about the list-form predicate and no
    term or formula in it mentions a context variable.  The checker runs
    the three transport steps on one multiset context tuple: unfold the
    multiset predicate to obtain coordinated lists, transport the member
    hypotheses into the lists, evaluate the list-level statement there,
    and transport member conclusions back through the same permutations.
    """
    if stmt.pred_name != spec.list_name:
        raise ShapeError(
            f"lift expects a lemma about {spec.list_name!r}, got {stmt.pred_name!r}"
        )
    if stmt.mentions_ctx_vars():
        raise ShapeError("lemma terms must not mention the context variables")
    lifted = replace(
        stmt,
        name=f"{stmt.name}_mset",
        pred_name=spec.name,
        ctx_vars=tuple(f"G{j}" for j in range(1, spec.arity + 1)),
    )

    def checker(contexts: Sequence[Ctx], bounds: GenBounds = GenBounds()) -> tuple:
        """(cases, counterexample) for one multiset context tuple."""
        aligned = align_mset(spec, contexts)
        if aligned is None:
            return 0, None  # hypothesis fails; nothing to check
        lists = tuple(from_list(row) for row in aligned)
        cases = 0
        bindings = [dict()]
        for pat, idx in stmt.hyp_members:
            extended = []
            for b in bindings:
                for value in dict.fromkeys(elems(contexts[idx])):
                    b2 = match_pattern(pat, value, b)
                    if b2 is not None:
                        extended.append(b2)
            bindings = extended
        for binding in bindings:
            cases += 1
            for pat, idx in stmt.hyp_members:
                value = instantiate(pat, binding)
                if not mem_transport(value, contexts[idx], lists[idx]):
                    return cases, (
                        f"hypothesis transport failed for {render_value(value)}"
                        f" in {_render_contexts(lifted.ctx_vars, contexts)}"
                    )
            list_failure = _lemma_instance_failure_for_binding(
                spec, stmt, lists, binding, bounds
            )
            if list_failure is not None:
                return cases, list_failure
            witness = _find_witness(spec, stmt, lists, binding, bounds)
            for pat, idx in stmt.concl_members:
                value = instantiate(pat, witness)
                if not mem_transport(value, lists[idx], contexts[idx]):
                    return cases, (
                        f"conclusion transport failed for {render_value(value)}"
                        f" in {_render_contexts(lifted.ctx_vars, contexts)}"
                    )
        return cases, None

    return lifted, checker


def _find_witness(
    spec: ContextSpec,
    stmt: LemmaStmt,
    contexts: Sequence[Ctx],
    binding: dict,
    bounds: GenBounds,
) -> dict:
    sorts = _lemma_var_sorts(spec, stmt)
    pools = _collect_by_sort(contexts)
    exist_options = [
        _sort_candidates(sorts.get(v), pools, bounds) for v in stmt.exist_vars
    ]
    for combo in itertools.product(*exist_options):
        candidate = dict(binding)
        for v, val in zip(stmt.exist_vars, combo):
            candidate[MetaVar(v)] = val
        ok = all(
            member(instantiate(pat, candidate), contexts[idx])
            for pat, idx in stmt.concl_members
        )
        ok = ok and all(eval_formula(f, candidate) for f in stmt.concl_formulas)
        ok = ok and all(
            instantiate(l, candidate) == instantiate(r, candidate)
            for l, r in stmt.concl_eqs
        )
        if ok:
            return candidate
    raise VerificationError(
        f"list-level conclusion has no witness under {_render_binding(binding)}"
    )


def _lemma_instance_failure_for_binding(
    spec: ContextSpec,
    stmt: LemmaStmt,
    contexts: Sequence[Ctx],
    binding: dict,
    bounds: GenBounds,
) -> Optional[str]:
    try:
        _find_witness(spec, stmt, contexts, binding, bounds)
        return None
    except VerificationError as e:
        return str(e)


# ---------------------------------------------------------------------------
# Derivation store and tactic-like steps over checked facts.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PermFact:
    left: Ctx
    right: Ctx


@dataclass(frozen=True)
class MemberFact:
    elem: Any
    ctx: Ctx


@dataclass(frozen=True)
class PredFact:
    spec_name: str
    contexts: tuple


@dataclass(frozen=True)
class LemmaFact:
    stmt: LemmaStmt
    report: CheckReport


def derive_subst(perm_fact: PermFact, member_fact: MemberFact) -> MemberFact:
    """Transport a membership fact through a permutation fact."""
    if member_fact.ctx != perm_fact.left:
        raise ShapeError("member fact is not about the permutation's left context")
    if not mem_transport(member_fact.elem, perm_fact.left, perm_fact.right):
        raise VerificationError("membership was not preserved by the permutation")
    return MemberFact(member_fact.elem, perm_fact.right)


def derive_distr(
    spec: ContextSpec, pred_fact: PredFact, perm_fact: PermFact
) -> list:
    """Apply distributivity: a predicate fact plus a split of one context.

    The permutation fact must have the form Gi ~ A ++ B where Gi is one
    of the predicate fact's contexts.  Returns the two predicate facts on
    the constructed witnesses plus the split facts for the other indices.
    """
    if pred_fact.spec_name != spec.name:
        raise ShapeError("predicate fact is not about this specification")
    if not isinstance(perm_fact.right, Union):
        raise ShapeError("permutation fact is not a two-way split")
    index0 = None
    for j, g in enumerate(pred_fact.contexts):
        if g == perm_fact.left:
            index0 = j
            break
    if index0 is None:
        raise ShapeError("split context does not occur in the predicate fact")
    first, second = perm_fact.right.left, perm_fact.right.right
    result = _distr_witnesses(spec, pred_fact.contexts, index0, first, second)
    if result is None:
        raise VerificationError("no coordinated split witnesses exist")
    primes, doubles, firsts, seconds = result
    facts: list = [
        PredFact(spec.name, primes),
        PredFact(spec.name, doubles),
    ]
    for j in range(spec.arity):
        if j != index0:
            facts.append(
                PermFact(pred_fact.contexts[j], Union(firsts[j], seconds[j]))
            )
    facts.append(PermFact(first, firsts[index0]))
    facts.append(PermFact(second, seconds[index0]))
    return facts


def derive_lift(
    spec: ContextSpec, stmt: LemmaStmt, bounds: GenBounds = GenBounds()
) -> LemmaFact:
    """Lift a verified list-form lemma and verify the lifted statement."""
    list_report = verify_lemma(spec, stmt, bounds)
    if not list_report.passed:
        raise VerificationError(
            f"list-level lemma {stmt.name!r} fails", list_report.counterexample
        )
    lifted, _checker = lift_lemma(spec, stmt)
    report = verify_lemma(spec, lifted, bounds)
    if not report.passed:
        raise VerificationError(
            f"lifted lemma {lifted.name!r} fails", report.counterexample
        )
    return LemmaFact(lifted, report)


class DerivationStore:
    """Append-only store of checked facts, with the tactic steps as methods.

    Base facts are validated by running the corresponding decision
    procedure when added; derived facts carry their construction with
    them.  Single writer; reads are safe from any thread.
    """

    def __init__(self, specs: Iterable[ContextSpec] = (), bounds: GenBounds = GenBounds()):
        self.specs = {s.name: s for s in specs}
        self.bounds = bounds
        self.facts: list = []

    def _add(self, fact: Any) -> Any:
        self.facts.append(fact)
        return fact

    def assert_perm(self, g1: Ctx, g2: Ctx) -> PermFact:
        if not perm(g1, g2):
            raise VerificationError("contexts are not permutations of each other")
        return self._add(PermFact(g1, g2))

    def assert_member(self, x: Any, g: Ctx) -> MemberFact:
        if not member(x, g):
            raise VerificationError("element is not a member of the context")
        return self._add(MemberFact(x, g))

    def assert_pred(self, spec_name: str, contexts: Sequence[Ctx]) -> PredFact:
        spec = self._spec(spec_name)
        if not check_mset_pred(spec, contexts):
            raise VerificationError("contexts do not satisfy the predicate")
        return self._add(PredFact(spec_name, tuple(contexts)))

    def _spec(self, name: str) -> ContextSpec:
        if name not in self.specs:
            raise ShapeError(f"unknown context specification {name!r}")
        return self.specs[name]

    def subst(self, perm_fact: PermFact, member_fact: MemberFact) -> MemberFact:
        self._require(perm_fact)
        self._require(member_fact)
        return self._add(derive_subst(perm_fact, member_fact))

    def distr(self, pred_fact: PredFact, perm_fact: PermFact) -> list:
        self._require(pred_fact)
        self._require(perm_fact)
        spec = self._spec(pred_fact.spec_name)
        new_facts = derive_distr(spec, pred_fact, perm_fact)
        for f in new_facts:
            self._add(f)
        return new_facts

    def lift(self, spec_name: str, stmt: LemmaStmt) -> LemmaFact:
        spec = self._spec(spec_name)
        return self._add(derive_lift(spec, stmt, self.bounds))

    def _require(self, fact: Any) -> None:
        if fact not in self.facts:
            raise ShapeError("fact is not in the derivation store")
