import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from altlab.bisim import ALT, NONREPEATING, greatest_family, verify_family
from altlab.formula import modal_depth, parse
from altlab.fragments import in_lx
from altlab.generate import formulas_up_to_height, random_alt_formula, random_lx_formula, random_model
from altlab.kripke import FrameClass, KripkeModel, ModelChecker, PointedModel, frame_properties, model_check
from altlab.transform import (TransformError, alt_unravel, last_agent, nr_partition, partition_family,
                              predecessor, projection_family)
from altlab.zoo import zoo
from strategies import pointed_models


def single(rel_a, rel_b):
    return PointedModel(KripkeModel(["u"], "ab", {"a": rel_a, "b": rel_b}, {"p": ["u"]}), "u")


class TestUnravel:
    def test_hand_enumeration(self):
        unr = alt_unravel(single([("u", "u")], []), 2, "none")
        assert sorted(len(t) for t in unr.traces.values()) == [1, 2]
        assert sorted(unr.traces.values()) == [(("alt", "u"),), (("alt", "u"), ("a", "u"))]
        assert unr.traces[unr.point] == (("alt", "u"),)

    def test_trace_names_readable(self):
        unr = alt_unravel(single([("u", "u")], [("u", "u")]), 2)
        assert "alt:u/a:u/b:u" in unr.model.worlds

    def test_traces_alternate_and_follow_edges(self):
        pm = zoo("appB-S4-M")
        unr = alt_unravel(pm, 3)
        for trace in unr.traces.values():
            assert trace[0] == ("alt", pm.point) and len(trace) <= 4
            for (t1, w1), (t2, w2) in zip(trace, trace[1:]):
                assert t1 != t2 and w2 in pm.model.succ[t2][w1]

    @pytest.mark.parametrize("depth, completion", [(0, "none"), (1, "weird")])
    def test_errors(self, depth, completion):
        with pytest.raises(TransformError):
            alt_unravel(zoo("prop6-M"), depth, completion)

    @given(pointed_models(max_worlds=3), st.integers(1, 3))
    def test_k45_completion_frames(self, pm, depth):
        props = frame_properties(alt_unravel(pm, depth, "k45").model)
        assert all(p["transitive"] and p["euclidean"] for p in props.values())

    @given(pointed_models(max_worlds=3), st.integers(1, 3))
    def test_b_completion_frames(self, pm, depth):
        props = frame_properties(alt_unravel(pm, depth, "b").model)
        assert all(p["symmetric"] for p in props.values())

    @given(pointed_models(max_worlds=3), st.integers(1, 3), st.sampled_from(["none", "k45", "b"]),
           st.integers(0, 2**32))
    def test_preserves_shallow_alternating_truth(self, pm, depth, completion, seed):
        rng = random.Random(seed)
        unr = alt_unravel(pm, depth, completion)
        mc = ModelChecker(unr.model)
        for _ in range(15):
            f = random_alt_formula(rng, "ab", ("p", "q"), depth, size=10)
            assert modal_depth(f) <= depth
            assert mc.holds(unr.point, f) == model_check(pm, f)

    @given(st.integers(0, 2**32), st.integers(1, 3))
    def test_serial_input_is_interior_serial(self, seed, depth):
        pm = random_model(random.Random(seed), 3, properties=("serial",))
        for completion in ("k45", "b"):
            unr = alt_unravel(pm, depth, completion)
            for w in unr.interior():
                assert all(unr.model.succ[a][w] for a in "ab")

    @given(pointed_models(max_worlds=3), st.integers(1, 3))
    def test_projection_family_verifies(self, pm, depth):
        unr = alt_unravel(pm, depth)
        fam = projection_family(pm, unr)
        assert verify_family(pm.model, unr.model, fam)
        assert fam.related(pm.point, unr.point, ALT)

    def test_satisfiability_transfer(self):
        # the S4 witness is alternating; its refutation on a K45 frame comes from the completion
        f = parse("<a>[b][a]p -> p")
        pm = zoo("prop6-M")
        unr = alt_unravel(pm, modal_depth(f), "k45")
        assert FrameClass.named("K45").contains(unr.model)
        assert not model_check(unr, f)


class TestPartition:
    def test_singleton_has_five_worlds(self):
        part = nr_partition(single([("u", "u")], [("u", "u")]))
        shapes = sorted(tuple(tuple(sorted(xs)) for xs, _ in t) for t in part.traces.values())
        assert shapes == [(("a", "b"),), (("a", "b"), ("a",)), (("a", "b"), ("a",), ()),
                          (("a", "b"), ("b",)), (("a", "b"), ("b",), ())]

    def test_non_reflexive_rejected(self):
        with pytest.raises(TransformError):
            nr_partition(single([("u", "u")], []))

    def test_helpers(self):
        ab, a, none = frozenset("ab"), frozenset("a"), frozenset()
        s = ((ab, "u"), (a, "v"), (none, "w"))
        assert last_agent(s[:1]) != "a"
        assert last_agent(s[:2]) == "b" and last_agent(s) == "a"
        assert predecessor(s, "a") == s[:2]
        assert predecessor(s, "b") == s

    def test_prop6_m(self):
        pm = zoo("prop6-M")
        part = nr_partition(pm)
        pool = [f for f in formulas_up_to_height(2, "ab", ("p",)) if in_lx(f, "ab")]
        pool.append(parse("(<a>(p | ~p) & [a]p) -> p"))
        for f in pool:
            assert model_check(part, f) == model_check(pm, f)

    @given(pointed_models(max_worlds=3, reflexive=True))
    def test_partition_model(self, pm):
        part = nr_partition(pm)
        assert FrameClass.named("S5").contains(part.model)
        assert all(len(t) <= 3 for t in part.traces.values())

    @given(pointed_models(max_worlds=3, reflexive=True), st.integers(0, 2**32))
    def test_preserves_nonrepeating_truth(self, pm, seed):
        rng = random.Random(seed)
        part = nr_partition(pm)
        mc = ModelChecker(part.model)
        for _ in range(20):
            f = random_lx_formula(rng, "ab", ("p", "q"), size=10)
            assert mc.holds(part.point, f) == model_check(pm, f)

    @given(pointed_models(max_worlds=3, reflexive=True))
    def test_partition_family(self, pm):
        part = nr_partition(pm)
        fam = partition_family(pm, part)
        assert verify_family(pm.model, part.model, fam)
        assert greatest_family(pm.model, part.model, NONREPEATING).related(pm.point, part.point)
