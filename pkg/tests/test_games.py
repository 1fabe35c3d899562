import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from altlab.claims import mixture_game, prisoners_dilemma, two_stage_game
from altlab.formula import parse
from altlab.fragments import alternating_occ
from altlab.games import (EpistemicGameModel, GameError, InvalidModelError, StrategicGame, gamma, iesds,
                          linprog, load_game, strictly_dominated, validate_model, verify_theorem_A)
from altlab.games.epistemic import alternating_reach, saturation_depth
from altlab.games.io import game_to_dict, model_to_dict
from altlab.games.oracle import vertex_iesds, vertex_margin
from altlab.games.sampling import random_epistemic_model, random_game

DATA = Path(__file__).resolve().parent.parent / "data"
F = Fraction


def matching_pennies():
    return StrategicGame.from_table(
        ["1", "2"], {"1": ["H", "T"], "2": ["H", "T"]},
        {("H", "H"): (1, -1), ("H", "T"): (-1, 1), ("T", "H"): (-1, 1), ("T", "T"): (1, -1)})


def pd_model():
    game, egm = load_game((DATA / "prisoners-dilemma.json").read_text())
    return egm


class TestLinprog:
    def test_textbook_maximum(self):
        res = linprog([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], maximize=True)
        assert res.status == "optimal" and res.value == 36 and res.x == (2, 6)

    def test_fractional_optimum(self):
        res = linprog([1, 1], [[-3, -1], [-1, -3]], [-1, -1])
        assert res.value == F(1, 2) and res.x == (F(1, 4), F(1, 4))

    def test_infeasible_and_unbounded(self):
        assert linprog([1], [[1]], [-1]).status == "infeasible"
        assert linprog([1], [[-1]], [0], maximize=True).status == "unbounded"

    def test_redundant_equality(self):
        res = linprog([1, 2], A_eq=[[1, 1], [2, 2]], b_eq=[1, 2])
        assert res.status == "optimal" and res.value == 1

    def test_shape_errors(self):
        with pytest.raises(ValueError):
            linprog([1, 2], [[1]], [1])
        with pytest.raises(ValueError):
            linprog([1], [[1]], [])


class TestDominance:
    def test_prisoners_dilemma(self):
        res = iesds(prisoners_dilemma())
        assert res.survivors == {"1": ("Defect",), "2": ("Defect",)}
        assert len(res.rounds) == 1

    def test_matching_pennies(self):
        res = iesds(matching_pennies())
        assert res.survivors == {"1": ("H", "T"), "2": ("H", "T")} and res.rounds == []

    def test_mixture_needs_a_mix(self):
        g = mixture_game()
        dom = strictly_dominated(g, "1", "Middle")
        assert dom and dom.weights == {"Top": F(1, 2), "Bottom": F(1, 2)} and dom.margin == F(1, 2)
        assert not strictly_dominated(g, "1", "Middle", ["Top"])
        assert not strictly_dominated(g, "1", "Middle", ["Bottom"])
        assert iesds(g).rounds == [{"1": ["Middle"], "2": []}]

    def test_two_stage_game(self):
        res = iesds(two_stage_game())
        assert res.survivors == {"1": ("b", "c"), "2": ("dg", "ef", "eg")}
        assert res.rounds == [{"1": [], "2": ["df"]}]
        # the backward-induction plan and first move both survive
        assert "c" in res.survivors["1"] and "eg" in res.survivors["2"]

    def test_errors(self):
        g = prisoners_dilemma()
        with pytest.raises(GameError):
            strictly_dominated(g, "1", "Nope")
        with pytest.raises(GameError):
            strictly_dominated(g, "1", "Defect", [])
        with pytest.raises(GameError):
            strictly_dominated(g, "1", "Defect", max_strategies=1)
        with pytest.raises(GameError):
            strictly_dominated(g, "1", "Defect", restriction={"2": []})

    @given(st.integers(0, 2**32))
    def test_certificate_is_exact(self, seed):
        rng = random.Random(seed)
        g = random_game(rng, (rng.randint(2, 3), rng.randint(2, 3)))
        for a in g.players:
            for s in g.strategies[a]:
                dom = strictly_dominated(g, a, s)
                assert sum(dom.weights.values()) == 1 and all(w > 0 for w in dom.weights.values())
                for q in g.opponent_profiles(a):
                    mixed = sum(w * g.payoff_against(a, t, q) for t, w in dom.weights.items())
                    assert mixed >= g.payoff_against(a, s, q) + dom.margin
                assert dom.margin == vertex_margin(g, a, s, g.strategies[a], None)
                alive = dict(g.strategies)
                if oracles.pure_dominated(g, a, s, alive) or oracles.mixture_dominated(g, a, s, alive, 6):
                    assert dom

    @given(st.integers(0, 2**32), st.integers(0, 2**32))
    def test_order_independence(self, seed, order_seed):
        """One-at-a-time elimination in random order reaches the simultaneous survivors."""
        rng = random.Random(seed)
        g = random_game(rng, (rng.randint(2, 3), rng.randint(2, 3)))
        expected = iesds(g).survivors
        order = random.Random(order_seed)
        alive = {a: list(g.strategies[a]) for a in g.players}
        while True:
            candidates = [(a, s) for a in g.players for s in alive[a]
                          if strictly_dominated(g, a, s, alive[a], {b: alive[b] for b in g.players if b != a})]
            if not candidates:
                break
            a, s = order.choice(candidates)
            alive[a].remove(s)
        assert {a: tuple(v) for a, v in alive.items()} == expected
        assert vertex_iesds(g) == expected


class TestModels:
    def test_prisoners_dilemma_model_valid(self):
        egm = pd_model()
        assert validate_model(egm)
        assert egm.expected_utility("1", "w", "Defect") == 1
        assert egm.expected_utility("1", "w", "Cooperate") == 0
        assert egm.best_response("1", "w") and not egm.best_response("1", "v")

    def test_flipped_rationality_flag(self):
        egm = pd_model()
        val = dict(egm.val)
        val["r_1"] = val["r_1"] | {"v"}
        bad = EpistemicGameModel(egm.game, egm.worlds, egm.rel, egm.beliefs, egm.sigma, val)
        verdict = validate_model(bad)
        assert not verdict and verdict.clause == "best-response"

    def test_support_violation_file(self):
        _, egm = load_game((DATA / "invalid-model.json").read_text())
        verdict = validate_model(egm)
        assert not verdict and verdict.clause == "support"
        with pytest.raises(InvalidModelError):
            verify_theorem_A(egm, "w", 4)

    @pytest.mark.parametrize("change, clause", [
        (lambda d: d["epistemic"]["rel"].update({"1": [["w", "w"]]}), "serial"),
        (lambda d: d["epistemic"]["beliefs"]["1"]["w"].update({"w": "1/2"}), "distribution"),
        (lambda d: d["epistemic"]["sigma"]["2"].update({"v": "Shrug"}), "strategy"),
        (lambda d: d["epistemic"]["rel"]["1"].append(["w", "nowhere"]), "relation"),
    ])
    def test_clauses(self, change, clause):
        d = json.loads((DATA / "prisoners-dilemma.json").read_text())
        del d["epistemic"]["val"]
        change(d)
        _, egm = load_game(json.dumps(d))
        assert validate_model(egm).clause == clause

    @given(st.integers(0, 2**32))
    def test_sampled_models_valid(self, seed):
        rng = random.Random(seed)
        g = random_game(rng, (3, 2))
        assert validate_model(random_epistemic_model(rng, g, rng.randint(1, 4)))


class TestGamma:
    def test_depth_one(self):
        assert gamma(["a", "b"], 1) == [parse("r_a"), parse("r_b")]

    def test_depth_three(self):
        fs = gamma(["a", "b"], 3)
        assert len(fs) == 6 and parse("[a][b] r_a") in fs
        assert all(alternating_occ(f) for f in fs)
        assert parse("[a][a] r_a") not in gamma(["a", "b"], 3)

    def test_primed_and_errors(self):
        assert gamma(["a", "b"], 2, primed=True)[-1] == parse("[b] rp_a")
        with pytest.raises(ValueError):
            gamma(["a", "b"], 0)

    @given(st.integers(1, 4), st.integers(2, 3))
    def test_count(self, depth, n):
        players = [str(i) for i in range(n)]
        assert len(gamma(players, depth)) == sum(n * (n - 1) ** (k - 1) for k in range(1, depth + 1))


class TestTheoremA:
    def test_prisoners_dilemma_model(self):
        v = verify_theorem_A(pd_model(), "w", 4)
        assert v.status == "pass" and v.gamma_holds and v.rationalizable == "pass"
        assert v.sigma == {"1": "Defect", "2": "Defect"}
        assert v.effective_depth == saturation_depth(pd_model()) == 5

    def test_vacuous(self):
        v = verify_theorem_A(pd_model(), "v", 4)
        assert v.status == "vacuous" and not v.gamma_holds

    def test_unknown_world(self):
        with pytest.raises(InvalidModelError):
            verify_theorem_A(pd_model(), "elsewhere", 2)

    def test_three_players_not_checked(self):
        g = StrategicGame.from_table(["1", "2", "3"], {"1": ["x"], "2": ["x"], "3": ["x"]},
                                     {("x", "x", "x"): (0, 0, 0)})
        egm = EpistemicGameModel(g, ("w",), {a: frozenset({("w", "w")}) for a in "123"},
                                 {a: {"w": {"w": F(1)}} for a in "123"},
                                 {a: {"w": "x"} for a in "123"}).with_valuation()
        v = verify_theorem_A(egm, "w", 3)
        assert v.status == "pass" and v.rationalizable == "not checked"

    @given(st.integers(0, 2**32))
    def test_random_models(self, seed):
        rng = random.Random(seed)
        g = random_game(rng, (rng.randint(2, 3), rng.randint(2, 3)))
        egm = random_epistemic_model(rng, g, rng.randint(1, 4))
        survivors = iesds(g).survivors
        for w in egm.worlds:
            v = verify_theorem_A(egm, w, 2)
            if v.gamma_holds:
                assert v.status == "pass"
                # the whole alternating-reachable support survives, which is what the proof shows
                assert all(set(v.support_sets[a]) <= set(survivors[a]) for a in g.players)

    def test_reach_includes_start(self):
        reach = alternating_reach(pd_model(), "v")
        assert "v" in reach["1"] and "w" in reach["1"]


class TestIO:
    @pytest.mark.parametrize("name", ["mixture.json", "two-stage.json", "prisoners-dilemma.json"])
    def test_round_trip(self, name):
        text = (DATA / name).read_text()
        game, egm = load_game(text)
        again = game_to_dict(game) if egm is None else model_to_dict(egm)
        assert again == json.loads(text)

    def test_files_match_builders(self):
        assert load_game((DATA / "mixture.json").read_text())[0] == mixture_game()
        assert load_game((DATA / "two-stage.json").read_text())[0] == two_stage_game()

    @pytest.mark.parametrize("text", [
        '{"players": ["1"], "strategies": {"1": ["x"]}, "utilities": [{"profile": ["x"], "payoffs": [0.5]}]}',
        '{"players": ["1"], "strategies": {"1": ["x"]}, "utilities": []}',
        '{"players": ["1"], "strategies": {"1": ["x"]}}',
        '[1, 2]',
        '{nope',
    ])
    def test_rejected(self, text):
        with pytest.raises(GameError):
            load_game(text)

    def test_missing_epistemic_block(self):
        from altlab.games.io import model_from_dict
        with pytest.raises(GameError):
            model_from_dict(game_to_dict(prisoners_dilemma()))
