"""The schematic context-specification engine."""

import itertools

import pytest

from linctx.ctx import EMPTY, Union, elems, from_list, gen_ctxs, perm
from linctx.ctxspec import (
    DerivationStore,
    MemberFact,
    PermFact,
    align_mset,
    check_distr,
    check_list_pred,
    check_mset_pred,
    derive_subst,
    gen_distr_lemma,
    generate_list_instances,
    generate_mset_instances,
    lift_lemma,
    parse_lemma,
    parse_lemma_file,
    parse_spec,
    parse_spec_file,
    render_lemma,
    verify_lemma,
)
from linctx.errors import PreconditionError, ShapeError, VerificationError
from linctx.report import GenBounds
from linctx.terms import Arrow, Base, Name
from linctx.translate import VarAssoc, trans_rel_list, trans_rel_mset
from linctx.typecheck import TyAssoc, ty_ctx_list, ty_ctx_mset

I = Base("i")
O = Base("o")
N1, N2 = Name("n", 1), Name("n", 2)
M1, M2 = Name("m", 1), Name("m", 2)

TY_CTX_CMD = "Context ty_ctx' with elems as nabla x (ty_of x T)."
TRANS_REL_CMD = (
    "Context trans_rel with elems as "
    "nabla x y (ty_of x T _|_ trans_to x y _|_ ty_of y T)."
)

MEM_LEMMA = (
    "Lemma ty_ctx_mem : forall L X, ty_ctx'_list L -> member X L -> "
    "exists n T, name n /\\ X = ty_of n T."
)
UNIQ_LEMMA = (
    "Lemma ty_ctx_uniq : forall L X T1 T2, ty_ctx'_list L -> "
    "member (ty_of X T1) L -> member (ty_of X T2) L -> T1 = T2."
)
TRANS_MEM_LEMMA = (
    "Lemma trans_rel_mem : forall L1 L2 L3 E, trans_rel_list L1 L2 L3 -> "
    "member E L2 -> exists X Y T, E = trans_to X Y /\\ name X /\\ name Y /\\ "
    "member (ty_of X T) L1 /\\ member (ty_of Y T) L3."
)

BOUNDS = GenBounds(ctx_elems=2)


@pytest.fixture(scope="module")
def ty_spec():
    return parse_spec(TY_CTX_CMD)


@pytest.fixture(scope="module")
def tr_spec():
    return parse_spec(TRANS_REL_CMD)


class TestParsing:
    def test_unary_command(self, ty_spec):
        assert ty_spec.name == "ty_ctx'"
        assert ty_spec.arity == 1
        assert len(ty_spec.clauses) == 1
        assert ty_spec.clauses[0].nabla_vars == ("x",)

    def test_ternary_command(self, tr_spec):
        assert tr_spec.arity == 3
        assert tr_spec.clauses[0].nabla_vars == ("x", "y")

    def test_distinct_metavariable_variant(self):
        spec = parse_spec(
            "Context trans_rel2 with elems as "
            "nabla x y (ty_of x T _|_ trans_to x y _|_ ty_of y T')."
        )
        crossed = (
            from_list([TyAssoc(N1, I)]),
            from_list([VarAssoc(N1, M1)]),
            from_list([TyAssoc(M1, O)]),
        )
        assert check_mset_pred(spec, crossed)
        assert not trans_rel_mset(*crossed)

    def test_arity_mismatch(self):
        with pytest.raises(ShapeError):
            parse_spec(
                "Context bad with elems as (ty_of X T _|_ trans_to X Y) \\/ (ty_of X T)."
            )

    def test_unbound_formula_variable(self):
        with pytest.raises(ShapeError):
            parse_spec("Context bad with elems as nabla x (ty_of x T -| U = T).")

    def test_nabla_var_must_occur(self):
        with pytest.raises(ShapeError):
            parse_spec("Context bad with elems as nabla x y (ty_of x T).")

    def test_overlap_warning(self):
        spec = parse_spec(
            "Context over with elems as (ty_of X T) \\/ nabla x (ty_of x T)."
        )
        assert spec.warnings

    def test_spec_file_with_both_commands(self):
        specs = parse_spec_file(TY_CTX_CMD + "\n" + TRANS_REL_CMD)
        assert [s.name for s in specs] == ["ty_ctx'", "trans_rel"]

    def test_formula_disjunction(self):
        spec = parse_spec(
            "Context small with elems as nabla x (ty_of x T -| T = i \\/ T = o)."
        )
        assert check_list_pred(spec, [from_list([TyAssoc(N1, I)])])
        assert not check_list_pred(spec, [from_list([TyAssoc(N1, Arrow(I, I))])])


class TestElaborationFidelity:
    def test_unary_list_form(self, ty_spec):
        pool = [TyAssoc(n, t) for n in (N1, N2) for t in (I, O)] + ["junk"]
        for l in gen_ctxs(pool, 3, 1):
            assert check_list_pred(ty_spec, [l]) == ty_ctx_list(l)

    def test_unary_mset_form(self, ty_spec):
        pool = [TyAssoc(n, t) for n in (N1, N2) for t in (I, O)] + ["junk"]
        for g in gen_ctxs(pool, 3, 2):
            assert check_mset_pred(ty_spec, [g]) == ty_ctx_mset(g)

    def test_ternary_against_hand_coded(self, tr_spec):
        from linctx.suites import gen_trans_triples_mset

        for triple in gen_trans_triples_mset(GenBounds(ctx_elems=2)):
            assert check_mset_pred(tr_spec, triple) == trans_rel_mset(*triple)

    def test_ternary_list_against_hand_coded(self, tr_spec):
        from linctx.suites import gen_trans_triples

        for triple in gen_trans_triples(GenBounds(ctx_elems=2)):
            assert check_list_pred(tr_spec, triple) == trans_rel_list(*triple)
            # crossed-type mutation
            l1, l2, l3 = triple
            if elems(l3):
                a = elems(l3)[0]
                mutated = from_list((TyAssoc(a.name, Arrow(O, O)),) + elems(l3)[1:])
                assert check_list_pred(tr_spec, (l1, l2, mutated)) == trans_rel_list(
                    l1, l2, mutated
                )

    def test_base_clause_all_empty(self, tr_spec):
        assert check_list_pred(tr_spec, [EMPTY, EMPTY, EMPTY])
        assert check_mset_pred(tr_spec, [Union(EMPTY, EMPTY), EMPTY, EMPTY])

    def test_unequal_counts_rejected(self, tr_spec):
        assert not check_mset_pred(
            tr_spec, [from_list([TyAssoc(N1, I)]), EMPTY, EMPTY]
        )


class TestMsetSemantics:
    def test_exists_list_definition(self, ty_spec):
        # brute-force reading: some arrangement satisfies the list form
        pool = [TyAssoc(n, t) for n in (N1, N2) for t in (I, O)]
        for g in gen_ctxs(pool, 2, 2):
            brute = any(
                check_list_pred(ty_spec, [from_list(order)])
                for order in set(itertools.permutations(elems(g)))
            )
            assert check_mset_pred(ty_spec, [g]) == brute

    def test_permutation_and_reassociation_invariance(self, tr_spec):
        l1 = from_list([TyAssoc(N1, I), TyAssoc(N2, O)])
        l2 = from_list([VarAssoc(N1, M1), VarAssoc(N2, M2)])
        l3 = from_list([TyAssoc(M1, I), TyAssoc(M2, O)])
        assert check_mset_pred(tr_spec, (l1, l2, l3))
        e1 = elems(l1)
        variants1 = [
            from_list(reversed(e1)),
            Union(from_list(e1[:1]), from_list(e1[1:])),
            Union(Union(from_list(e1[:1]), EMPTY), from_list(e1[1:])),
            Union(EMPTY, Union(from_list(e1[1:]), from_list(e1[:1]))),
        ]
        for v in variants1:
            assert check_mset_pred(tr_spec, (v, l2, l3))

    def test_align_returns_coordinated_lists(self, tr_spec):
        g1 = Union(from_list([TyAssoc(N2, O)]), from_list([TyAssoc(N1, I)]))
        l2 = from_list([VarAssoc(N1, M1), VarAssoc(N2, M2)])
        l3 = from_list([TyAssoc(M1, I), TyAssoc(M2, O)])
        aligned = align_mset(tr_spec, (g1, l2, l3))
        assert aligned is not None
        lists = [from_list(row) for row in aligned]
        assert check_list_pred(tr_spec, lists)
        for g, l in zip((g1, l2, l3), lists):
            assert perm(g, l)


class TestGeneration:
    def test_generated_lists_satisfy_pred(self, tr_spec):
        for contexts in generate_list_instances(tr_spec, BOUNDS):
            assert check_list_pred(tr_spec, contexts)

    def test_generated_msets_satisfy_pred(self, ty_spec):
        for contexts in generate_mset_instances(ty_spec, BOUNDS):
            assert check_mset_pred(ty_spec, contexts)

    def test_generation_is_deterministic(self, ty_spec):
        first = generate_mset_instances(ty_spec, BOUNDS)
        second = generate_mset_instances(ty_spec, BOUNDS)
        assert first == second


class TestDistributivity:
    def test_statement_golden(self, tr_spec):
        stmt = gen_distr_lemma(tr_spec, 2)
        assert stmt.render() == (
            "Theorem trans_rel_distr2 : forall G1 G2 G2' G2'' G3, "
            "trans_rel G1 G2 G3 -> G2 ~ G2' ++ G2'' -> "
            "exists G1' G1'' G3' G3'', "
            "trans_rel G1' G2' G3' /\\ trans_rel G1'' G2'' G3'' /\\ "
            "G1 ~ G1' ++ G1'' /\\ G3 ~ G3' ++ G3''."
        )

    def test_unary_statement(self, ty_spec):
        stmt = gen_distr_lemma(ty_spec, 1)
        assert "ty_ctx' G1' /\\ ty_ctx' G1''" in stmt.render()

    def test_index_out_of_range(self, ty_spec):
        with pytest.raises(PreconditionError):
            gen_distr_lemma(ty_spec, 0)
        with pytest.raises(PreconditionError):
            gen_distr_lemma(ty_spec, 2)

    def test_checks_pass_every_index(self, ty_spec, tr_spec):
        assert check_distr(ty_spec, 1, BOUNDS).passed
        for i in (1, 2, 3):
            assert check_distr(tr_spec, i, BOUNDS).passed


class TestVerifyLemma:
    def test_membership_and_uniqueness(self, ty_spec):
        for text in (MEM_LEMMA, UNIQ_LEMMA):
            report = verify_lemma(ty_spec, parse_lemma(text), BOUNDS)
            assert report.passed and report.cases > 0

    def test_false_statement_fails_with_counterexample(self, ty_spec):
        false_stmt = parse_lemma(
            "Lemma bogus : forall L X Y T1 T2, ty_ctx'_list L -> "
            "member (ty_of X T1) L -> member (ty_of Y T2) L -> T1 = T2."
        )
        report = verify_lemma(ty_spec, false_stmt, BOUNDS)
        assert not report.passed
        assert report.counterexample

    def test_mutation_sensitivity(self, ty_spec):
        uniq = parse_lemma(UNIQ_LEMMA)
        mutated = verify_lemma(ty_spec, uniq, BOUNDS, enforce_freshness=False)
        assert not mutated.passed
        assert mutated.counterexample
        restored = verify_lemma(ty_spec, uniq, BOUNDS, enforce_freshness=True)
        assert restored.passed

    def test_wrong_predicate_name(self, ty_spec):
        stmt = parse_lemma(
            "Lemma other : forall L X, other_list L -> member X L -> true."
        )
        with pytest.raises(ShapeError):
            verify_lemma(ty_spec, stmt, BOUNDS)


class TestLifting:
    def test_lift_reproduces_mset_membership_statement(self, ty_spec):
        lifted, _ = lift_lemma(ty_spec, parse_lemma(MEM_LEMMA))
        expected = parse_lemma(
            "Lemma ty_ctx_mem_mset : forall G1 X, ty_ctx' G1 -> member X G1 -> "
            "exists n T, name n /\\ X = ty_of n T."
        )
        assert lifted == expected

    def test_lift_reproduces_mset_uniqueness_statement(self, ty_spec):
        lifted, _ = lift_lemma(ty_spec, parse_lemma(UNIQ_LEMMA))
        expected = parse_lemma(
            "Lemma ty_ctx_uniq_mset : forall G1 X T1 T2, ty_ctx' G1 -> "
            "member (ty_of X T1) G1 -> member (ty_of X T2) G1 -> T1 = T2."
        )
        assert lifted == expected

    def test_lift_reproduces_coordination_statement(self, tr_spec):
        lifted, _ = lift_lemma(tr_spec, parse_lemma(TRANS_MEM_LEMMA))
        expected = parse_lemma(
            "Lemma trans_rel_mem_mset : forall G1 G2 G3 E, trans_rel G1 G2 G3 -> "
            "member E G2 -> exists X Y T, E = trans_to X Y /\\ name X /\\ name Y /\\ "
            "member (ty_of X T) G1 /\\ member (ty_of Y T) G3."
        )
        assert lifted == expected

    def test_lifted_statements_verify(self, ty_spec, tr_spec):
        for spec, text in (
            (ty_spec, MEM_LEMMA),
            (ty_spec, UNIQ_LEMMA),
            (tr_spec, TRANS_MEM_LEMMA),
        ):
            lifted, _ = lift_lemma(spec, parse_lemma(text))
            assert verify_lemma(spec, lifted, BOUNDS).passed

    def test_checker_never_fails_after_list_level_passes(self, ty_spec, tr_spec):
        for spec, text in ((ty_spec, MEM_LEMMA), (tr_spec, TRANS_MEM_LEMMA)):
            stmt = parse_lemma(text)
            assert verify_lemma(spec, stmt, BOUNDS).passed
            _, checker = lift_lemma(spec, stmt)
            for contexts in generate_mset_instances(spec, BOUNDS):
                _cases, counterexample = checker(contexts, BOUNDS)
                assert counterexample is None

    def test_shape_violations(self, ty_spec):
        mset_stmt = parse_lemma(
            "Lemma m : forall G X, ty_ctx' G -> member X G -> true."
        )
        with pytest.raises(ShapeError):
            lift_lemma(ty_spec, mset_stmt)
        ctx_var_in_term = parse_lemma(
            "Lemma m2 : forall L X, ty_ctx'_list L -> member X L -> X = L."
        )
        with pytest.raises(ShapeError):
            lift_lemma(ty_spec, ctx_var_in_term)

    def test_render_round_trip(self, ty_spec):
        stmt = parse_lemma(MEM_LEMMA)
        assert parse_lemma(render_lemma(stmt)) == stmt

    def test_lemma_file(self):
        stmts = parse_lemma_file(MEM_LEMMA + "\n" + UNIQ_LEMMA)
        assert [s.name for s in stmts] == ["ty_ctx_mem", "ty_ctx_uniq"]


class TestDerivation:
    def test_subst(self):
        pf = PermFact(from_list(["a", "b"]), Union(from_list(["b"]), from_list(["a"])))
        mf = MemberFact("a", from_list(["a", "b"]))
        out = derive_subst(pf, mf)
        assert out.ctx == pf.right

    def test_subst_shape_mismatch(self):
        pf = PermFact(from_list(["a"]), from_list(["a"]))
        mf = MemberFact("a", from_list(["a", "b"]))
        with pytest.raises(ShapeError):
            derive_subst(pf, mf)

    def test_distr_produces_six_facts(self, tr_spec):
        g1 = from_list([TyAssoc(N1, I), TyAssoc(N2, O)])
        g2 = from_list([VarAssoc(N1, M1), VarAssoc(N2, M2)])
        g3 = from_list([TyAssoc(M1, I), TyAssoc(M2, O)])
        store = DerivationStore([tr_spec], BOUNDS)
        pred_fact = store.assert_pred("trans_rel", (g1, g2, g3))
        split = Union(from_list([TyAssoc(N2, O)]), from_list([TyAssoc(N1, I)]))
        perm_fact = store.assert_perm(g1, split)
        new_facts = store.distr(pred_fact, perm_fact)
        kinds = [type(f).__name__ for f in new_facts]
        assert kinds == [
            "PredFact", "PredFact", "PermFact", "PermFact", "PermFact", "PermFact",
        ]

    def test_store_validates_base_facts(self, ty_spec):
        store = DerivationStore([ty_spec], BOUNDS)
        with pytest.raises(VerificationError):
            store.assert_perm(from_list(["a"]), from_list(["b"]))
        with pytest.raises(VerificationError):
            store.assert_member("a", EMPTY)
        with pytest.raises(VerificationError):
            store.assert_pred("ty_ctx'", [from_list(["junk"])])

    def test_store_requires_known_facts(self, ty_spec):
        store = DerivationStore([ty_spec], BOUNDS)
        foreign_perm = PermFact(EMPTY, EMPTY)
        foreign_member = MemberFact("a", from_list(["a"]))
        with pytest.raises(ShapeError):
            store.subst(foreign_perm, foreign_member)

    def test_store_lift(self, ty_spec):
        store = DerivationStore([ty_spec], BOUNDS)
        fact = store.lift("ty_ctx'", parse_lemma(MEM_LEMMA))
        assert fact.stmt.name == "ty_ctx_mem_mset"
        assert fact.report.passed

    def test_lift_of_false_lemma_raises(self, ty_spec):
        store = DerivationStore([ty_spec], BOUNDS)
        false_stmt = parse_lemma(
            "Lemma bogus : forall L X Y T1 T2, ty_ctx'_list L -> "
            "member (ty_of X T1) L -> member (ty_of Y T2) L -> T1 = T2."
        )
        with pytest.raises(VerificationError) as err:
            store.lift("ty_ctx'", false_stmt)
        assert err.value.counterexample
