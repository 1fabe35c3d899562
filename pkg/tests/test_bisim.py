import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from altlab.bisim import (ALT, ALTERNATING, KINDS, NONREPEATING, PLAIN, BisimError, BisimFamily, TypeTable,
                          atom_pairs, bounded_family, greatest_family, indices, verify_family,
                          violations)
from altlab.generate import random_alt_formula, random_lx_formula, random_minus_formula
from altlab.kripke import KripkeModel, ModelChecker
from altlab.zoo import PAIRS, WITNESS_PAIRS, zoo
from strategies import models

small_models = models(max_worlds=3, atoms=("p",))


def pair(name):
    left, right = name
    return zoo(left), zoo(right)


class TestGreatest:
    @given(small_models, small_models, st.sampled_from(KINDS), st.integers(0, 1000))
    def test_matches_single_deletion_in_any_order(self, m, n, kind, seed):
        fam = greatest_family(m, n, kind)
        expected = oracles.greatest_by_single_deletion(m, n, kind, order_seed=seed)
        for i in indices(kind, m.agents):
            assert fam.pairs(i) == expected[i]

    @given(small_models, st.sampled_from(KINDS))
    def test_identity_everywhere(self, m, kind):
        fam = greatest_family(m, m, kind)
        for i in indices(kind, m.agents):
            assert all((w, w) in fam.pairs(i) for w in m.worlds)

    @given(small_models, small_models, st.sampled_from(KINDS))
    def test_verifies(self, m, n, kind):
        assert verify_family(m, n, greatest_family(m, n, kind))

    def test_appb_s4(self):
        m, n = (x.model for x in pair(PAIRS["S4"]))
        fam = greatest_family(m, n, ALTERNATING)
        assert fam.related("l1", "l1'", ALT)
        for i in "123":
            assert fam.related(f"l{i}", f"l{i}'", "b")
            assert fam.related(f"r{i}", f"r{i}'", "b")

    def test_appb_kd5(self):
        m, n = pair(PAIRS["KD5"])
        assert greatest_family(m.model, n.model, ALTERNATING).related("m1", "r1", ALT)

    def test_equals_deep_bounded(self):
        rng = random.Random(3)
        for _ in range(30):
            m = KripkeModel(["u", "v", "w"], "ab",
                            {a: [(x, y) for x in "uvw" for y in "uvw" if rng.random() < 0.4] for a in "ab"},
                            {"p": [x for x in "uvw" if rng.random() < 0.5]})
            n = KripkeModel(["x", "y"], "ab",
                            {a: [(s, t) for s in "xy" for t in "xy" if rng.random() < 0.5] for a in "ab"},
                            {"p": [s for s in "xy" if rng.random() < 0.5]})
            for kind in KINDS:
                assert greatest_family(m, n, kind).relations == bounded_family(m, n, kind, 12).relations

    def test_errors(self):
        m = zoo("prop6-M").model
        other = KripkeModel(["u"], "ac", {}, {})
        with pytest.raises(BisimError):
            greatest_family(m, other, PLAIN)
        five = KripkeModel(["u"], "abcde", {}, {})
        with pytest.raises(BisimError):
            greatest_family(five, five, NONREPEATING)
        with pytest.raises(BisimError):
            greatest_family(m, m, "weird")


class TestBounded:
    @given(small_models, small_models, st.sampled_from(KINDS))
    def test_depth_zero_is_atom_agreement(self, m, n, kind):
        fam = bounded_family(m, n, kind, 0)
        for i in indices(kind, m.agents):
            assert fam.pairs(i) == atom_pairs(m, n)

    @given(small_models, small_models, st.sampled_from(KINDS))
    def test_monotone(self, m, n, kind):
        greatest = greatest_family(m, n, kind)
        prev = bounded_family(m, n, kind, 0)
        for d in range(1, 5):
            cur = bounded_family(m, n, kind, d)
            for i in indices(kind, m.agents):
                assert cur.pairs(i) <= prev.pairs(i)
                assert greatest.pairs(i) <= cur.pairs(i)
            prev = cur

    @given(models(max_worlds=4, atoms=("p",)), st.sampled_from(KINDS), st.integers(0, 3))
    def test_equivalence_on_self(self, m, kind, depth):
        fam = bounded_family(m, m, kind, depth)
        for i in indices(kind, m.agents):
            rel = fam.pairs(i)
            assert all((w, w) in rel for w in m.worlds)
            assert all((v, u) in rel for u, v in rel)
            assert all((u, z) in rel for u, v in rel for y, z in rel if v == y)

    @given(small_models, small_models, st.integers(0, 3))
    def test_types_agree(self, m, n, depth):
        table = TypeTable()
        pm, pn = table.plain(m, depth), table.plain(n, depth)
        am, an = table.alternating(m, depth), table.alternating(n, depth)
        plain = bounded_family(m, n, PLAIN, depth).pairs()
        alt = bounded_family(m, n, ALTERNATING, depth).pairs(ALT)
        for u in m.worlds:
            for v in n.worlds:
                assert ((u, v) in plain) == (pm[u] == pn[v])
                assert ((u, v) in alt) == (am[u] == an[v])

    def test_appb_s4_depths(self):
        m, n = pair(PAIRS["S4"])
        for d in range(11):
            assert bounded_family(m.model, n.model, ALTERNATING, d).related(m.point, n.point, ALT)
        assert not bounded_family(m.model, n.model, PLAIN, 2).related(m.point, n.point)

    def test_negative_depth(self):
        m = zoo("prop6-M").model
        with pytest.raises(BisimError):
            bounded_family(m, m, PLAIN, -1)


class TestVerify:
    def test_pair_already_in_b(self):
        # moving (l1, l1') from alt into b leaves a valid family: b already holds it
        m, n = pair(PAIRS["S4"])
        fam = greatest_family(m.model, n.model, ALTERNATING)
        moved = dict(fam.relations)
        moved[ALT] = moved[ALT] - {("l1", "l1'")}
        moved["b"] = moved["b"] | {("l1", "l1'")}
        assert moved["b"] == fam.relations["b"]
        assert verify_family(m.model, n.model, BisimFamily(ALTERNATING, fam.agents, moved, None))

    def test_missing_a_witness_breaks_zig_at_b(self):
        m, n = pair(PAIRS["S4"])
        fam = greatest_family(m.model, n.model, ALTERNATING)
        mutated = dict(fam.relations)
        # l1 reaches l2 along a; with no a-partner for l2 the b-pair (l1, l1') has no Zig witness
        mutated["a"] = frozenset(x for x in mutated["a"] if x[0] != "l2")
        verdict = verify_family(m.model, n.model, BisimFamily(ALTERNATING, fam.agents, mutated, None))
        assert not verdict
        assert verdict.index == "b" and verdict.clause == "zig:a"
        found = violations(m.model, n.model, ALTERNATING, mutated)
        assert ("b", ("l1", "l1'"), "zig:a") in found

    def test_unknown_index(self):
        m = zoo("prop6-M").model
        fam = BisimFamily(ALTERNATING, ("a", "b"), {"z": frozenset()}, None)
        assert verify_family(m, m, fam).clause == "index"

    def test_atom_violation(self):
        m = zoo("prop6-M").model
        fam = BisimFamily(PLAIN, ("a", "b"), {PLAIN: frozenset({("w1", "w2")})}, None)
        verdict = verify_family(m, m, fam)
        assert not verdict and verdict.clause == "atom"


def _agree(m, n, pairs, formulas):
    cm, cn = ModelChecker(m), ModelChecker(n)
    return all((u in cm.extension(f)) == (v in cn.extension(f)) for f in formulas for u, v in pairs)


class TestInvariance:
    @pytest.mark.parametrize("name", ["S4", "KD5", "B"])
    def test_alternating_pairs_agree_on_their_fragment(self, name):
        rng = random.Random(name)
        pools = [PAIRS[name]] + ([WITNESS_PAIRS[name]] if name in WITNESS_PAIRS else [])
        for names in pools:
            m, n = pair(names)
            fam = greatest_family(m.model, n.model, ALTERNATING)
            for i, pairs in fam.relations.items():
                if i == ALT:
                    fs = [random_alt_formula(rng, "ab", ("p",), 4, size=12) for _ in range(500)]
                else:
                    fs = [random_minus_formula(rng, "ab", ("p",), 4, i, size=12) for _ in range(500)]
                assert _agree(m.model, n.model, pairs, fs)

    @given(small_models, small_models, st.integers(0, 2**32))
    def test_nonrepeating_pairs_agree(self, m, n, seed):
        rng = random.Random(seed)
        fam = greatest_family(m, n, NONREPEATING)
        for xs, pairs in fam.relations.items():
            fs = [random_lx_formula(rng, xs, ("p",), size=10) for _ in range(30)]
            assert _agree(m, n, pairs, fs)

    @given(small_models, small_models, st.integers(1, 3), st.integers(0, 2**32))
    def test_bounded_alt_agrees_up_to_depth(self, m, n, depth, seed):
        rng = random.Random(seed)
        fam = bounded_family(m, n, ALTERNATING, depth)
        fs = [random_alt_formula(rng, "ab", ("p",), depth, size=10) for _ in range(30)]
        assert _agree(m, n, fam.pairs(ALT), fs)
