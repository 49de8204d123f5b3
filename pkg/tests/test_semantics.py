from fractions import Fraction as F
from itertools import product

import pytest
from hypothesis import given, strategies as st

from mvmodal.algebra import godel_chain, lukasiewicz
from mvmodal.datasets import load_json, names
from mvmodal.errors import BlowUp, KindMismatch, ModelError, OutOfDomain, RankError, UndeclaredAtom
from mvmodal.semantics import (BUILTIN, DISTRIBUTION, FLOOR, FUZZY, KINDS, NEIGHBORHOOD, POWERSET,
                               SELECTION, FunctionTable, Lifting, OneStepModel, ProbPolicy, TModel,
                               all_vectors, coloring, count_TS, enumerate_TS, eval0, eval1,
                               evaluate, functor_map, lifting_apply, materialize, model_from_json,
                               model_to_json, naturality_check, value_map)
from mvmodal.semantics.lazy import LazyTable, leaves
from mvmodal.syntax import Atom, Fuse, Modal, iff, parse, parse_any, substitute, top

from support import KIND_LIFTINGS, luk_impl, random_formula, random_model

L2, L3 = lukasiewicz(2), lukasiewicz(3)
FLOORED = ProbPolicy(FLOOR)


def P(text, alg=L3):
    return parse_any(text, alg)


class TestEvaluate:
    def test_box_takes_the_meet(self):
        m = model_from_json(load_json("model_box_l3.json"))
        assert value_map(m, P("<box>(p)"))["w"] == "1/2"

    @pytest.mark.parametrize("alg", [L2, L3, godel_chain(4)])
    def test_empty_successor_set(self, alg):
        m = TModel(alg, POWERSET, ["w"], [frozenset()], {"p": (alg.zero,)})
        assert evaluate(m, P("<box>(p)", alg)) == (alg.one,)
        assert evaluate(m, P("<dia>(p)", alg)) == (alg.zero,)

    def test_fuzzy_box(self):
        half = L3.parse_value("1/2")
        m = TModel(L3, FUZZY, ["w", "u"], [(0, half), (0, 0)], {"p": (0, 0)})
        got = evaluate(m, P("<fbox>(p)"))[0]
        assert L3.rationals[got] == luk_impl(F(1, 2), F(0)) == F(1, 2)

    def test_kind_mismatch(self):
        m = model_from_json(load_json("model_box_l3.json"))
        with pytest.raises(KindMismatch):
            evaluate(m, P("<fbox>(p)"))

    def test_undeclared_atom(self):
        m = model_from_json(load_json("model_box_l3.json"))
        with pytest.raises(UndeclaredAtom):
            evaluate(m, P("<box>(zz)"))

    def test_prob_strict_and_floor(self):
        m = model_from_json(load_json("model_distribution_l3.json"))
        f = P("<prob>(p * c(1/2) | c(1/2))")
        assert value_map(m, f) == {"w": "1/2", "u": "1/2", "v": "1/2"}
        m2 = TModel(L3, DISTRIBUTION, ["a", "b"], [(F(1, 2), F(1, 2))] * 2, {"p": (1, 0)})
        with pytest.raises(OutOfDomain) as info:
            evaluate(m2, P("<prob>(p)"))
        assert info.value.value == F(1, 4)
        pol = ProbPolicy(FLOOR, floored=[])
        assert evaluate(m2, P("<prob>(p)"), pol) == (0, 0)
        assert pol.floored == [F(1, 4), F(1, 4)]


class TestLiftings:
    def test_cond_selecting_the_second_argument(self):
        g = (2, 1)
        sel = FunctionTable(2, 3, {key: g for key in all_vectors(2, 3)})
        assert lifting_apply("cond", [(0, 2), g], sel, L3) == L3.one

    def test_m_r_example(self):
        mu = (F(1, 2), F(1, 2))
        assert lifting_apply("M", [(1, 2)], mu, L3, param=F(1, 4)) == 2
        assert lifting_apply("M", [(1, 2)], mu, L3, param=F(1, 2)) == 1
        assert lifting_apply("M", [(1, 2)], mu, L3, param=F(1)) == 0

    def test_prob_of_constant_one(self):
        for mu in enumerate_TS(DISTRIBUTION, 3, L2, granularity=4):
            assert lifting_apply("prob", [(1, 1, 1)], mu, L2) == 1

    def test_nbox_reads_the_table(self):
        N = FunctionTable(1, 3, {(0,): 2, (1,): 0, (2,): 1})
        assert lifting_apply("nbox", [(0,)], N, L3) == 2

    def test_arity_and_kind_checks(self):
        with pytest.raises(Exception):
            lifting_apply("cond", [(0,)], None, L3)
        with pytest.raises(KindMismatch):
            lifting_apply("box", [(0,)], frozenset(), L3, kind=FUZZY)


class TestFunctorMap:
    q = (0, 0)

    def test_powerset_direct_image(self):
        assert functor_map(POWERSET, self.q, 1, frozenset({0}), L3) == frozenset({0})

    def test_distribution_pushforward(self):
        assert functor_map(DISTRIBUTION, self.q, 1, (F(1, 2), F(1, 2)), L3) == (F(1),)

    def test_fuzzy_join_over_preimage(self):
        assert functor_map(FUZZY, self.q, 1, (1, 2), L3) == (2,)

    def test_neighborhood_precomposes(self):
        N = FunctionTable(2, 2, {g: g[0] * g[1] for g in all_vectors(2, 2)})
        pushed = materialize(NEIGHBORHOOD, functor_map(NEIGHBORHOOD, self.q, 1, N, L2), 1, L2)
        assert dict(pushed) == {(0,): 0, (1,): 1}

    def test_selection_pushforward(self):
        s = FunctionTable(2, 2, {g: (g[1], 0) for g in all_vectors(2, 2)})
        pushed = materialize(SELECTION, functor_map(SELECTION, (1, 0), 2, s, L2), 2, L2)
        # (Tq s)(g)(y) = join over q(x)=y of s(g.q)(x); q swaps the two states
        assert pushed[(1, 0)] == (0, 1)
        assert pushed[(0, 1)] == (0, 0)

    @given(st.randoms(use_true_random=False), st.sampled_from(KINDS))
    def test_functoriality(self, rng, kind):
        alg = L3
        el = random_model(rng, kind, 2, alg).sigma[0]
        f = tuple(rng.randrange(2) for _ in range(2))
        g = tuple(rng.randrange(2) for _ in range(2))
        gf = tuple(g[x] for x in f)
        once = materialize(kind, functor_map(kind, gf, 2, el, alg), 2, alg)
        twice = functor_map(kind, g, 2, materialize(kind, functor_map(kind, f, 2, el, alg), 2, alg), alg)
        assert once == materialize(kind, twice, 2, alg)
        ident = materialize(kind, functor_map(kind, (0, 1), 2, el, alg), 2, alg)
        assert ident == el


class TestEnumerate:
    def test_counts(self):
        assert len(list(enumerate_TS(POWERSET, 2, L3))) == 4
        assert len(list(enumerate_TS(FUZZY, 2, L3))) == 9
        assert list(enumerate_TS(DISTRIBUTION, 2, L3, granularity=2)) == [
            (F(1), F(0)), (F(1, 2), F(1, 2)), (F(0), F(1))]
        assert len(list(enumerate_TS(NEIGHBORHOOD, 1, L3))) == 27
        assert len(list(enumerate_TS(SELECTION, 1, L2))) == 4

    @pytest.mark.parametrize("kind", KINDS)
    def test_duplicate_free_and_counted(self, kind):
        els = list(enumerate_TS(kind, 1 if kind in (NEIGHBORHOOD, SELECTION) else 3, L2, granularity=3))
        assert len(els) == len(set(els))
        n = 1 if kind in (NEIGHBORHOOD, SELECTION) else 3
        assert len(els) == count_TS(kind, n, 2, 3)

    def test_blow_up_names_the_count(self):
        with pytest.raises(BlowUp) as info:
            enumerate_TS(SELECTION, 2, L3)
        assert info.value.projected == 9 ** 9

    def test_table_cap(self):
        with pytest.raises(BlowUp):
            FunctionTable.build(9, 3, lambda g: 0)


class TestModels:
    @pytest.mark.parametrize("name", [n for n in names() if n.startswith("model_")])
    def test_bundled_models_round_trip(self, name):
        m = model_from_json(load_json(name))
        assert model_from_json(model_to_json(m)) == m

    def test_sigma_must_be_total(self):
        obj = load_json("model_box_l3.json")
        del obj["sigma"]["u"]
        with pytest.raises(ModelError, match="not total"):
            model_from_json(obj)

    def test_distribution_must_sum_to_one(self):
        obj = load_json("model_distribution_l3.json")
        obj["sigma"]["w"]["u"] = "1/3"
        with pytest.raises(ModelError, match="sums to"):
            model_from_json(obj)

    def test_distribution_needs_lukasiewicz(self):
        with pytest.raises(ModelError):
            TModel(godel_chain(3), DISTRIBUTION, ["a"], [(F(1),)])

    def test_tables_must_be_total(self):
        obj = load_json("model_neighborhood_l2.json")
        obj["sigma"]["a"].pop()
        with pytest.raises(ModelError, match="not total"):
            model_from_json(obj)


class TestOneStep:
    def test_eval0(self):
        m = [{"p": 1}]
        assert eval0(m, P("p"), L3) == (1,)
        assert eval0(m, P("c(1/2)"), L3) == (1,)
        assert eval0(m, P("p -> p"), L3) == (2,)
        with pytest.raises(RankError):
            eval0(m, P("<box>(p)"), L3)

    def test_eval1(self):
        m = [{"p": 1}]
        at = eval1(m, P("<box>(p)"), L3, POWERSET)
        assert at(frozenset({0})) == 1
        tauto = eval1(m, P("<box>(p) -> <box>(p)"), L3, POWERSET)
        assert all(tauto(d) == 2 for d in enumerate_TS(POWERSET, 1, L3))
        assert eval1(m, P("<dia>(p)"), L3, POWERSET)(frozenset()) == 0
        with pytest.raises(RankError):
            eval1(m, P("<box>(p) & p"), L3, POWERSET)
        with pytest.raises(KindMismatch):
            eval1(m, P("<fbox>(p)"), L3, POWERSET)

    def test_coloring_is_the_transpose(self):
        assert coloring([{"p": 0, "q": 1}, {"p": 2, "q": 2}]) == {"p": (0, 2), "q": (1, 2)}

    def test_one_step_model(self):
        m = OneStepModel(L3, FUZZY, ["u", "v"], (2, 1), [{"p": 2}, {"p": 0}])
        assert m.eval1(P("<fdia>(p)")) == 2
        assert m.eval1(P("<fbox>(p)")) == 1


def _generic_case(rng, kinds=KINDS):
    kind = rng.choice(kinds)
    alg = rng.choice([L2, L3])
    n = rng.randint(1, 2 if kind in (NEIGHBORHOOD, SELECTION) else 3)
    model = random_model(rng, kind, n, alg)
    return kind, alg, model


@given(st.randoms(use_true_random=False))
def test_eval_agrees_with_eval0_on_rank0(rng):
    kind, alg, model = _generic_case(rng)
    f = random_formula(rng, alg, 4, flavor="delta", rank0=True)
    marking = [{p: v[s] for p, v in model.valuation.items()} for s in range(model.n)]
    assert evaluate(model, f) == eval0(marking, f, alg)


@given(st.randoms(use_true_random=False))
def test_substitution_lemma(rng):
    kind, alg, model = _generic_case(rng)
    lifts = KIND_LIFTINGS[kind]
    f = random_formula(rng, alg, 3, liftings=lifts)
    rho = {"p": random_formula(rng, alg, 2, liftings=lifts), "q": random_formula(rng, alg, 2, liftings=lifts)}
    shifted = TModel(alg, kind, model.states, model.sigma,
                     {x: evaluate(model, t, FLOORED) for x, t in rho.items()})
    assert evaluate(model, substitute(f, rho), FLOORED) == evaluate(shifted, f, FLOORED)


@given(st.randoms(use_true_random=False))
def test_self_equivalence_and_unit(rng):
    kind, alg, model = _generic_case(rng)
    f = random_formula(rng, alg, 3, liftings=KIND_LIFTINGS[kind])
    assert evaluate(model, iff(f, f), FLOORED) == (alg.one,) * model.n
    assert evaluate(model, Fuse(f, top(alg)), FLOORED) == evaluate(model, f, FLOORED)


@pytest.mark.parametrize("name", ["box", "dia", "fbox", "fdia", "prob"])
@pytest.mark.parametrize("alg", [L2, L3])
def test_monotone_liftings(name, alg):
    lift = BUILTIN[name]
    n = 2
    vecs = list(all_vectors(n, alg.k))
    for f, g in product(vecs, repeat=2):
        if not all(alg.leq(a, b) for a, b in zip(f, g)):
            continue
        for d in enumerate_TS(lift.kind, n, alg, granularity=4):
            assert alg.leq(lift(alg, [f], d, None, FLOORED), lift(alg, [g], d, None, FLOORED))


class TestNaturality:
    def test_box_passes_exhaustively(self):
        report = naturality_check(BUILTIN["box"], L3, size_bound=3)
        assert report.ok and report.exhaustive
        assert report.checks == 7764

    def test_identity_maps_commute_for_any_lifting(self):
        def odd(alg, args, X, param, policy):
            return alg.big_join(args[0][x] for x in X if x % 2 == 0)
        report = naturality_check(Lifting("odd", 1, POWERSET, odd), L3, size_bound=1)
        assert report.ok

    def test_fold_with_strong_conjunction_is_not_natural(self):
        def fold(alg, args, X, param, policy):
            v = alg.one
            for x in X:
                v = alg.prod[v][args[0][x]]
            return v
        report = naturality_check(Lifting("fold", 1, POWERSET, fold), L3, size_bound=3)
        w = report.witness
        assert not report.ok
        # u, v -> w with g(w) = 1/2: 1/2 * 1/2 = 0 upstairs but 1/2 downstairs
        assert (w.x_size, w.y_size, w.f, w.args, w.delta) == (2, 1, (0, 0), ((1,),), frozenset({0, 1}))
        assert (w.lhs, w.rhs) == (0, 1)

    def test_broken_neighborhood_lifting_is_caught_lazily(self):
        def shifted(alg, args, N, param, policy):
            return N[tuple(reversed(args[0]))]
        report = naturality_check(Lifting("rev", 1, NEIGHBORHOOD, shifted), L2, size_bound=2)
        assert not report.ok
        w = report.witness
        assert isinstance(w.delta, FunctionTable) and len(w.delta) == 2 ** w.x_size

    def test_sampling_beyond_the_cap(self):
        report = naturality_check(BUILTIN["cond"], L2, size_bound=2, arg_cap=10, samples=5)
        assert report.ok and not report.exhaustive and report.sampled


def test_lazy_leaves_cover_every_table():
    # a computation reading a data-dependent set of entries of one table
    keys = list(all_vectors(2, 2))

    def run(assign):
        t = LazyTable(0, assign)
        first = t[(0, 0)]
        return first + (t[(1, 1)] if first else t[(0, 1)]) * 2

    covered = 0
    for assign, result in leaves(run, lambda slot, key: range(3)):
        free = len(keys) - len(assign)
        covered += 3 ** free
        table = {k: v for (_, k), v in assign.items()}
        full = {k: table.get(k, 0) for k in keys}
        assert result == run({(0, k): v for k, v in full.items()})
    assert covered == 3 ** len(keys)
