import pytest
from hypothesis import given
from hypothesis import strategies as st

from altlab.claims import CHI_D4
from altlab.formula import And, Atom, Box, C, E, Not, modal_depth, normalize, parse, walk
from altlab.fragments import (C_ALT, C_P, LALT_CP, NONE, alternating_ind, alternating_occ, classify,
                              classify_c, in_lx, minus_agents, nonrepeating_occ, required_agents)
from altlab.generate import formulas_up_to_height
from strategies import formulas

THREE = ("a", "b", "c")


def box_paths(f, above=()):
    """Agent sequences of the boxes along every root-to-leaf path (C/E transparent)."""
    f = normalize(f)
    here = above + (f.agent,) if isinstance(f, Box) else above
    kids = f.children()
    if not kids:
        yield here
    for g in kids:
        yield from box_paths(g, here)


def path_alternating(f):
    return all(x != y for path in box_paths(f) for x, y in zip(path, path[1:]))


def path_nonrepeating(f):
    return all(len(set(path)) == len(path) for path in box_paths(f))


def path_minus(f, a):
    return path_alternating(f) and all(not path or path[0] != a for path in box_paths(f))


class TestExamples:
    @pytest.mark.parametrize("text, alternating", [
        ("[a](p & [b]q)", True),
        ("[a]([b][a]p & [a]q)", False),
        ("[a][b][a] p", True),
        ("[a][a] p", False),
    ])
    def test_alternating(self, text, alternating):
        r = classify(parse(text))
        assert r.alternating_occ == r.alternating_ind == alternating

    def test_nonrepeating(self):
        assert not classify(parse("[a][b][a] p")).nonrepeating
        assert classify(parse("(<a>(p | ~p) & [a]p) -> p")).nonrepeating
        assert required_agents(parse("[a][b] p & [b] q")) == frozenset("ab")
        assert required_agents(parse("p")) == frozenset()

    def test_in_minus(self):
        r = classify(parse("[a][b] p"), ["a", "b"])
        assert r.in_minus("b") and not r.in_minus("a")

    def test_in_lx(self):
        f = parse("[a][b] p")
        assert in_lx(f, "ab") and not in_lx(f, "a")
        assert classify(f).in_Lx("abc")

    @pytest.mark.parametrize("text, expected", [
        ("[a] C p", C_ALT),
        ("C C p", C_P),
        ("C p & [a][b] q", LALT_CP),
        (CHI_D4, C_ALT),
        ("C [a][a] p", NONE),
        ("[a][b] p", LALT_CP),
    ])
    def test_c_fragment(self, text, expected):
        assert classify_c(parse(text)) == expected

    def test_extended_flag(self):
        assert classify(parse("C [a] p")).extended
        assert not classify(parse("[a] p")).extended

    def test_exhaustive_height_two(self):
        pool = formulas_up_to_height(2, ("a", "b"), ("p",))
        assert len(pool) == 41
        assert len(set(pool)) == 41
        for f in pool:
            assert alternating_occ(f) == alternating_ind(f, "ab") == path_alternating(f)

    def test_exhaustive_height_three(self):
        pool = formulas_up_to_height(3, ("a", "b"), ("p",))
        for f in pool:
            assert alternating_occ(f) == alternating_ind(f, "ab") == path_alternating(f)
            assert nonrepeating_occ(f) == (required_agents(f) is not None) == path_nonrepeating(f)


class TestProperties:
    @given(formulas(agents=THREE, sugar=True, common=True, max_leaves=25))
    def test_definitions_agree(self, f):
        assert alternating_occ(f) == alternating_ind(f, THREE) == path_alternating(f)
        assert nonrepeating_occ(f) == (required_agents(f) is not None) == path_nonrepeating(f)

    @given(formulas(agents=THREE, sugar=True, max_leaves=25))
    def test_minus_sets(self, f):
        assert minus_agents(f, THREE) == {a for a in THREE if path_minus(f, a)}

    @given(formulas(agents=THREE, sugar=True, max_leaves=25))
    def test_inclusions(self, f):
        r = classify(f, THREE)
        if r.nonrepeating:
            assert r.alternating
        if r.minus:
            assert r.alternating
        if r.in_Lx(THREE):
            assert modal_depth(f) <= len(THREE)

    @given(formulas(agents=THREE), formulas(agents=THREE))
    def test_boolean_closure(self, f, g):
        if alternating_occ(f) and alternating_occ(g):
            assert alternating_occ(And(f, Not(g)))

    @given(formulas(agents=THREE), st.sampled_from(THREE))
    def test_box_closure(self, f, b):
        if b in minus_agents(f, THREE):
            boxed = minus_agents(Box(b, f), THREE)
            assert all(a in boxed for a in THREE if a != b)

    @given(formulas(agents=THREE, max_leaves=20), st.sets(st.sampled_from(THREE)),
           st.sets(st.sampled_from(THREE)))
    def test_lx_monotone(self, f, xs, ys):
        if in_lx(f, xs):
            assert in_lx(f, xs | ys)

    @given(formulas(common=True, max_leaves=15))
    def test_c_fragments_nested(self, f):
        order = [C_P, LALT_CP, C_ALT, NONE]
        frag = classify_c(f, "ab")
        if not any(isinstance(g, (C, E)) for g in walk(normalize(f))):
            # a C-free formula is in L_alt C^p exactly when it is alternating
            assert (order.index(frag) <= 1) == alternating_occ(f)
        if frag == C_P:
            assert not any(isinstance(g, Box) for g in walk(normalize(f)))
