"""The reproducible claim suite behind ``altlab verify-paper``.

Each claim is a function ``(rng) -> (ok, details)``. Details hold only
deterministic data; timing is added by :func:`run_claims`.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from .bisim import (ALT, ALTERNATING, NONREPEATING, PLAIN, TypeTable, bounded_family, greatest_family,
                    verify_family)
from .formula import Atom, Box, Formula, Implies, Not, parse, render
from .fragments import (alternating_ind, alternating_occ, classify, classify_c, in_lx, nonrepeating_occ,
                        required_agents)
from .generate import (DEFAULT_SEED, formulas_up_to_height, random_alt_formula, random_formula,
                       random_lx_formula, random_minus_formula, random_model)
from .kripke import FrameClass, KripkeModel, ModelChecker, PointedModel, frame_properties, model_check
from .games import StrategicGame, iesds, strictly_dominated, validate_model, verify_theorem_A
from .games.oracle import grid_iesds, vertex_iesds
from .games.sampling import random_epistemic_model, random_game
from .proof import check_derivation, load_derivation, search_countermodel
from .proof.search import class_frames
from .transform import alt_unravel, nr_partition, projection_family
from .zoo import PAIRS, WITNESS_PAIRS, zoo

AGENTS = ("a", "b")
DIAMOND_DIAMOND_P = parse("<a><a>p")

WITNESSES = {
    "S4-vs-B": "<a>[b][a]p -> p",
    "B-vs-S4": "<a>[b]<a>p -> <a>p",
    "KB5-vs-S4": "<a>(<b>(p | ~p) & [b][a]p) -> p",
    "KB5-vs-B": "<a>(<b>(p | ~p) & [b]<a>p) -> <a>p",
}
CHI_5 = "(<a>p & <a>~p) -> <C>(p & <C>~p)"
CHI_4 = "(([b](p & ~p) & [a][b](p & ~p)) & [a]p) -> C p"
CHI_D4 = "([b]p & C [b]p & [b][a]p & C [b][a]p & [a]p) -> C p"


# --- derivations -------------------------------------------------------------------------

def _replay(name: str, logic: str, final: str, lines: int | None = None) -> tuple[bool, dict]:
    d = load_derivation(name)
    res = check_derivation(d)
    want = parse(final)
    ok = res.ok and d.logic == logic and res.final == want and (lines is None or len(d.lines) == lines)
    details = {"script": name, "logic": d.logic, "accepted": res.ok, "final": render(res.final),
               "expected_final": render(want), "lines": len(d.lines)}
    if not res.ok:
        details["reason"] = f"line {res.failed_line}: {res.reason}"
    return ok, details


def claim_deriv_muddy(rng):
    return _replay("muddy-children", "K", "[1] m1")


def claim_deriv_backward(rng):
    return _replay("backward-induction", "T", "ac & cg")


def claim_deriv_prop6b(rng):
    return _replay("prop6-B", "B", "<a>[b][a]p -> p", lines=4)


# --- fragments -------------------------------------------------------------------------

def claim_frag_equiv(rng):
    agents, atoms = ("a", "b", "c"), ("p", "q")
    disagree = []
    nr_disagree = []
    alternating = 0
    for _ in range(10_000):
        f = random_formula(rng, agents, atoms, 6, sugar=True)
        occ = alternating_occ(f)
        alternating += occ
        if occ != alternating_ind(f, agents):
            disagree.append(render(f))
        if nonrepeating_occ(f) != (required_agents(f) is not None):
            nr_disagree.append(render(f))
    pool = formulas_up_to_height(2, ("a", "b"), ("p",))
    pool_bad = [render(f) for f in pool if alternating_occ(f) != alternating_ind(f, ("a", "b"))]
    ok = not disagree and not nr_disagree and not pool_bad and len(pool) == 41
    return ok, {"random_formulas": 10_000, "random_alternating": alternating,
                "random_disagreements": disagree[:5], "nonrepeating_disagreements": nr_disagree[:5],
                "exhaustive_formulas": len(pool), "exhaustive_disagreements": pool_bad[:5]}


# --- collapse constructions --------------------------------------------------------------

def _interior_serial(unr) -> bool:
    m = unr.model
    return all(m.succ[a][w] for w in unr.interior() for a in m.agents)


def claim_collapse_alt(rng):
    depth = 4
    stats = {"models": 200, "formulas_per_model": 20, "serial_models": 0,
             "truth_mismatches": 0, "frame_failures": 0, "interior_seriality_failures": 0}
    first_problem = None
    for i in range(200):
        serial = i % 2 == 1
        pm = random_model(rng, rng.randint(1, 4), AGENTS, ("p", "q"), 0.35,
                          ("serial",) if serial else ())
        stats["serial_models"] += serial
        formulas = [random_alt_formula(rng, AGENTS, ("p", "q"), 3, size=8) for _ in range(20)]
        truth = [model_check(pm, f) for f in formulas]
        for completion, needed in (("k45", ("transitive", "euclidean")), ("b", ("symmetric",))):
            unr = alt_unravel(pm, depth, completion)
            props = frame_properties(unr.model)
            if not all(props[a][p] for a in AGENTS for p in needed):
                stats["frame_failures"] += 1
                first_problem = first_problem or f"model {i}: {completion} frame lacks {needed}"
            mc = ModelChecker(unr.model)
            for f, t in zip(formulas, truth):
                if mc.holds(unr.point, f) != t:
                    stats["truth_mismatches"] += 1
                    first_problem = first_problem or f"model {i}: {completion} changes {render(f)}"
            if serial and not _interior_serial(unr):
                stats["interior_seriality_failures"] += 1
                first_problem = first_problem or f"model {i}: {completion} not interior-serial"
    ok = not (stats["truth_mismatches"] or stats["frame_failures"] or stats["interior_seriality_failures"])
    stats["first_problem"] = first_problem
    return ok, stats


def _equivalence(m: KripkeModel) -> bool:
    props = frame_properties(m)
    return all(p["reflexive"] and p["symmetric"] and p["transitive"] for p in props.values())


def claim_collapse_nr(rng):
    stats = {"models": 200, "formulas_per_model": 20, "truth_mismatches": 0, "non_partition": 0}
    first_problem = None
    for i in range(200):
        pm = random_model(rng, rng.randint(1, 3), AGENTS, ("p", "q"), 0.35, ("reflexive",))
        part = nr_partition(pm)
        if not _equivalence(part.model):
            stats["non_partition"] += 1
            first_problem = first_problem or f"model {i}: output is not a partition model"
        mc_src, mc_out = ModelChecker(pm.model), ModelChecker(part.model)
        for _ in range(20):
            f = random_lx_formula(rng, AGENTS, ("p", "q"), size=8)
            if mc_src.holds(pm.point, f) != mc_out.holds(part.point, f):
                stats["truth_mismatches"] += 1
                first_problem = first_problem or f"model {i}: {render(f)}"
    single = PointedModel(KripkeModel(["u"], AGENTS, {a: [("u", "u")] for a in AGENTS}, {"p": ["u"]}), "u")
    stats["singleton_worlds"] = len(nr_partition(single).model.worlds)
    pm = zoo("prop6-M")
    part = nr_partition(pm)
    pool = [f for f in formulas_up_to_height(2, AGENTS, ("p",)) if in_lx(f, AGENTS)]
    witness = parse("(<a>(p | ~p) & [a]p) -> p")
    pool_bad = [render(f) for f in pool + [witness] if model_check(pm, f) != model_check(part, f)]
    stats.update(prop6_pool=len(pool), prop6_disagreements=pool_bad[:5], first_problem=first_problem)
    ok = (not stats["truth_mismatches"] and not stats["non_partition"]
          and stats["singleton_worlds"] == 5 and not pool_bad)
    return ok, stats


# --- separations ----------------------------------------------------------------------

def claim_noncollapse(rng):
    details = {}
    ok = True
    cases = [
        ("S4-vs-B", "prop6-M", "S4", "prop6-B", "B"),
        ("B-vs-S4", "prop6-M'", "B", "prop6-S4", "S4"),
        ("KB5-vs-S4", "prop6-M", "S4", "prop6-KB5-a", "KB5"),
        ("KB5-vs-B", "prop6-M'", "B", "prop6-KB5-b", "KB5"),
    ]
    for key, model, cls, script, logic in cases:
        f = parse(WITNESSES[key])
        pm = zoo(model)
        in_class = FrameClass.named(cls).contains(pm.model)
        refuted = not model_check(pm, f)
        d = load_derivation(script)
        res = check_derivation(d)
        derived = res.ok and d.logic == logic and res.final == f and res.final_theorem
        alt = classify(f).alternating
        details[key] = {"formula": render(f), "countermodel": model, "class": cls,
                        "in_class": in_class, "refuted": refuted, "derived_in": logic,
                        "derived": derived, "alternating": alt}
        ok &= in_class and refuted and derived and alt
    layers = {name: classify(parse(src)).alternating
              for name, src in (("D", "[a]p -> <a>p"), ("T", "[a]p -> p"))}
    details["axioms_alternating"] = layers
    ok &= all(layers.values())
    nr_witness = parse("(<a>(p | ~p) & [a]p) -> p")
    found = search_countermodel(nr_witness, "KD", 2, "exhaustive")
    serial_ok = found is not None and FrameClass.named("serial").contains(found.model)
    details["KB5-vs-KD"] = {"formula": render(nr_witness), "nonrepeating": classify(nr_witness).nonrepeating,
                            "countermodel": None if found is None else found.to_dict(),
                            "serial": serial_ok}
    ok &= serial_ok and classify(nr_witness).nonrepeating
    return ok, details


def claim_cb_separation(rng):
    details = {}
    chi5, chi4, chid4 = parse(CHI_5), parse(CHI_4), parse(CHI_D4)
    pm = zoo("chi5-M")
    serial = FrameClass.named("serial").contains(pm.model)
    details["chi5"] = {"serial": serial, "refuted": not model_check(pm, chi5),
                       "euclidean": FrameClass.named("euclidean").contains(pm.model)}
    ok = serial and details["chi5"]["refuted"]
    pm = zoo("chiD4-M")
    antecedent = parse("[b]p & C [b]p & [b][a]p & C [b][a]p & [a]p")
    details["chiD4"] = {"serial": FrameClass.named("serial").contains(pm.model),
                        "antecedent": model_check(pm, antecedent), "Cp": model_check(pm, parse("C p")),
                        "fragment": classify_c(chid4)}
    ok &= (details["chiD4"]["serial"] and details["chiD4"]["antecedent"] and not details["chiD4"]["Cp"]
           and details["chiD4"]["fragment"] == "C_alt")
    absence = {}
    for label, f, cls in (("chiD4", chid4, "transitive+serial"), ("chi4", chi4, "transitive"),
                          ("chi5", chi5, "euclidean")):
        found = search_countermodel(f, cls, 3, "exhaustive")
        absence[label] = {"class": cls, "countermodel": None if found is None else found.to_dict()}
        ok &= found is None
    details["exhaustive_absence"] = absence
    scripts = {}
    for name, logic, f in (("chi-D4", "CK4", chid4), ("chi-4", "CK4", chi4), ("chi-5", "CK5", chi5)):
        d = load_derivation(name)
        res = check_derivation(d)
        scripts[name] = {"logic": d.logic, "accepted": res.ok,
                         "proves": res.ok and res.final == f and res.final_theorem}
        ok &= scripts[name]["proves"] and d.logic == logic
    details["derivations"] = scripts
    return ok, details


# --- finite-depth model pairs ------------------------------------------------------------

def _pair_report(cls: str, left: str, right: str) -> dict:
    m, n = zoo(left), zoo(right)
    fc = FrameClass.named(cls)
    fam = greatest_family(m.model, n.model, ALTERNATING)
    plain2 = bounded_family(m.model, n.model, PLAIN, 2)
    deepest = max((k for k in range(11)
                   if bounded_family(m.model, n.model, ALTERNATING, k).related(m.point, n.point, ALT)),
                  default=None)
    report = {
        "models": [left, right],
        "class": cls,
        "in_class": [fc.contains(m.model), fc.contains(n.model)],
        "alt_bisimilar": fam.related(m.point, n.point, ALT),
        "alt_related_up_to_depth": deepest,
        "plain_2_bisimilar": plain2.related(m.point, n.point),
        "diamond_diamond_p": [model_check(m, DIAMOND_DIAMOND_P), model_check(n, DIAMOND_DIAMOND_P)],
    }
    report["holds"] = (all(report["in_class"]) and report["alt_bisimilar"]
                       and not report["plain_2_bisimilar"] and len(set(report["diamond_diamond_p"])) == 2)
    return report


def claim_appb_pairs(rng):
    details = {cls: _pair_report(cls, *pair) for cls, pair in PAIRS.items()}
    return all(r["holds"] for r in details.values()), details


def claim_appb_witness(rng):
    details = {cls: _pair_report(cls, *pair) for cls, pair in WITNESS_PAIRS.items()}
    return all(r["holds"] for r in details.values()), details


def k45_models(max_worlds: int = 3):
    """Every model with at most ``max_worlds`` worlds, agents a and b, atom p,
    whose relations are transitive and Euclidean."""
    fc = FrameClass.named("K45")
    for n in range(1, max_worlds + 1):
        ws = [f"w{i}" for i in range(n)]
        frames = [[(ws[i], ws[j]) for i in range(n) for j in range(n) if mat[i, j]]
                  for mat in class_frames(n, fc.properties)]
        for ra, rb, bits in product(frames, frames, range(1 << n)):
            yield KripkeModel(ws, AGENTS, {"a": ra, "b": rb},
                              {"p": [ws[i] for i in range(n) if bits >> i & 1]})


def claim_appb_k45(rng):
    models = list(k45_models(3))
    details = {"models": len(models), "pointed_models": sum(len(m.worlds) for m in models)}
    ok = True
    for depth in range(4):
        table = TypeTable()
        plain_of, alt_of = {}, {}
        clash = None
        for m in models:
            pt, at = table.plain(m, depth), table.alternating(m, depth)
            for w in m.worlds:
                if plain_of.setdefault(pt[w], at[w]) != at[w] or alt_of.setdefault(at[w], pt[w]) != pt[w]:
                    clash = clash or (m.to_dict(w))
        details[f"depth_{depth}"] = {"classes": len(plain_of), "counterexample": clash}
        ok &= clash is None
    # cross-check the type route against the inductive relations on sampled pairs
    small = [m for m in models if len(m.worlds) <= 2]
    sample = [(m, n) for m in small for n in small]
    sample += [(rng.choice(models), rng.choice(models)) for _ in range(3000)]
    mismatches = 0
    for m, n in sample:
        for depth in range(4):
            plain = bounded_family(m, n, PLAIN, depth).pairs()
            alt = bounded_family(m, n, ALTERNATING, depth).pairs(ALT)
            table = TypeTable()
            pm_, an_ = table.plain(m, depth), table.alternating(m, depth)
            pn_, ann_ = table.plain(n, depth), table.alternating(n, depth)
            for u, v in product(m.worlds, n.worlds):
                if ((u, v) in plain) != (pm_[u] == pn_[v]) or ((u, v) in alt) != (an_[u] == ann_[v]):
                    mismatches += 1
            if plain != alt:
                mismatches += 1
    details["cross_checked_pairs"] = len(sample)
    details["cross_check_mismatches"] = mismatches
    return ok and mismatches == 0, details


# --- games --------------------------------------------------------------------------

def prisoners_dilemma() -> StrategicGame:
    return StrategicGame.from_table(
        ["1", "2"], {"1": ["Cooperate", "Defect"], "2": ["Cooperate", "Defect"]},
        {("Cooperate", "Cooperate"): (3, 3), ("Cooperate", "Defect"): (0, 5),
         ("Defect", "Cooperate"): (5, 0), ("Defect", "Defect"): (1, 1)})


def mixture_game() -> StrategicGame:
    """Middle row is beaten by the 50/50 mix of top and bottom, by no pure row."""
    return StrategicGame.from_table(
        ["1", "2"], {"1": ["Top", "Middle", "Bottom"], "2": ["Left", "Right"]},
        {("Top", "Left"): (3, 0), ("Top", "Right"): (0, 0),
         ("Middle", "Left"): (1, 0), ("Middle", "Right"): (1, 0),
         ("Bottom", "Left"): (0, 0), ("Bottom", "Right"): (3, 0)})


def two_stage_game() -> StrategicGame:
    """The two-stage game in strategic form; 2's strategies name her move at b, then at c."""
    outcome = {"d": (4, 2), "e": (2, 4), "f": (1, 1), "g": (3, 3)}
    plans = [x + y for x in "de" for y in "fg"]
    payoffs = {}
    for first, plan in product(["b", "c"], plans):
        payoffs[(first, plan)] = outcome[plan[0] if first == "b" else plan[1]]
    return StrategicGame.from_table(["1", "2"], {"1": ["b", "c"], "2": plans}, payoffs)


def claim_appa(rng):
    details = {}
    pd = iesds(prisoners_dilemma())
    details["prisoners_dilemma"] = pd.as_dict()
    ok = pd.survivors == {"1": ("Defect",), "2": ("Defect",)}
    mix = mixture_game()
    res = iesds(mix)
    dom = strictly_dominated(mix, "1", "Middle")
    details["mixture"] = {**res.as_dict(), "weights": {k: str(v) for k, v in dom.weights.items()},
                          "margin": str(dom.margin),
                          "pure_dominators": [s for s in ("Top", "Bottom")
                                              if strictly_dominated(mix, "1", "Middle", [s])]}
    ok &= res.rounds == [{"1": ["Middle"], "2": []}] and not details["mixture"]["pure_dominators"]
    two = iesds(two_stage_game())
    details["two_stage"] = two.as_dict()
    ok &= "c" in two.survivors["1"] and "eg" in two.survivors["2"]

    found, tried, failures, oracle_grid, oracle_vertex = 0, 0, [], 0, 0
    while found < 50:
        tried += 1
        game = random_game(rng, (rng.randint(2, 3), rng.randint(2, 3)))
        egm = random_epistemic_model(rng, game, rng.randint(1, 4))
        if not validate_model(egm):
            failures.append("generated model is invalid")
            break
        point = next((w for w in egm.worlds if verify_theorem_A(egm, w, 4).status != "vacuous"), None)
        if point is None:
            continue
        found += 1
        verdict = verify_theorem_A(egm, point, 4)
        if verdict.status != "pass":
            failures.append(verdict.as_dict())
        survivors = iesds(game).survivors
        oracle_grid += survivors != grid_iesds(game)
        oracle_vertex += survivors != vertex_iesds(game)
    details["theorem"] = {"models_with_gamma": found, "models_tried": tried, "failures": failures[:3],
                          "grid_oracle_mismatches": oracle_grid, "vertex_oracle_mismatches": oracle_vertex}
    ok &= found == 50 and not failures and oracle_grid == 0 and oracle_vertex == 0
    return ok, details


# --- invariance -------------------------------------------------------------------------

def _agreement(m: PointedModel, n: PointedModel, pairs, formulas) -> int:
    cm, cn = ModelChecker(m.model), ModelChecker(n.model)
    bad = 0
    for f in formulas:
        em, en = cm.extension(f), cn.extension(f)
        bad += sum((u in em) != (v in en) for u, v in pairs)
    return bad


def claim_bisim_invariance(rng):
    stats = {"model_pairs": 100, "formulas_per_index": 50, "related_pairs_checked": 0,
             "nontrivial_related": 0, "disagreements": 0}
    atoms = ("p",)
    for _ in range(100):
        m = random_model(rng, rng.randint(1, 4), AGENTS, atoms, 0.4)
        n = random_model(rng, rng.randint(1, 4), AGENTS, atoms, 0.4)
        alt = greatest_family(m.model, n.model, ALTERNATING)
        nr = greatest_family(m.model, n.model, NONREPEATING)
        plain = greatest_family(m.model, n.model, PLAIN).pairs()
        for index, pairs in alt.relations.items():
            if not pairs:
                continue
            if index == ALT:
                fs = [random_alt_formula(rng, AGENTS, atoms, 4, size=10) for _ in range(50)]
            else:
                fs = [random_minus_formula(rng, AGENTS, atoms, 4, index, size=10) for _ in range(50)]
            stats["disagreements"] += _agreement(m, n, pairs, fs)
            stats["related_pairs_checked"] += len(pairs)
            stats["nontrivial_related"] += len(pairs - plain)
        for xs, pairs in nr.relations.items():
            fs = [random_lx_formula(rng, xs, atoms, size=10) for _ in range(50)]
            stats["disagreements"] += _agreement(m, n, pairs, fs)
            stats["related_pairs_checked"] += len(pairs)
        if not verify_family(m.model, n.model, alt) or not verify_family(m.model, n.model, nr):
            stats["disagreements"] += 1
    return stats["disagreements"] == 0, stats


# --- registry -------------------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    id: str
    summary: str
    run: Callable


CLAIMS: dict[str, Claim] = {c.id: c for c in [
    Claim("appA", "alternating common belief of rationality implies IESDS survival", claim_appa),
    Claim("appB-K45", "plain and alternating n-bisimilarity coincide on K45 models", claim_appb_k45),
    Claim("appB-pairs", "drawn S4/KD5/B pairs: alternating-bisimilar yet plain-2 distinguishable",
          claim_appb_pairs),
    Claim("appB-witness", "replacement KD5/B pairs with the intended separation", claim_appb_witness),
    Claim("bisim-invariance", "related worlds agree on the matching fragment", claim_bisim_invariance),
    Claim("cb-separation", "chi_5, chi_4, chi_D4 countermodels, absences and derivations",
          claim_cb_separation),
    Claim("collapse-alt", "k45 and b completions of unravelings preserve alternating truth",
          claim_collapse_alt),
    Claim("collapse-nr", "partition models preserve nonrepeating truth", claim_collapse_nr),
    Claim("deriv-backward", "backward-induction derivation replays in KT", claim_deriv_backward),
    Claim("deriv-muddy", "muddy-children derivation replays in K", claim_deriv_muddy),
    Claim("deriv-prop6B", "four-line B derivation of the S4 witness", claim_deriv_prop6b),
    Claim("frag-equiv", "occurrence-based and inductive alternation agree", claim_frag_equiv),
    Claim("noncollapse", "separating witnesses refuted and derived", claim_noncollapse),
]}


def claim_rng(seed: int, claim_id: str) -> random.Random:
    return random.Random(f"{seed}:{claim_id}")


def run_claim(claim_id: str, seed: int = DEFAULT_SEED, timing: bool = True) -> dict:
    claim = CLAIMS[claim_id]
    t0 = time.perf_counter()
    try:
        ok, details = claim.run(claim_rng(seed, claim_id))
        status = "pass" if ok else "fail"
    except Exception as exc:  # a crashing claim is a failed claim, not a crashed report
        status, details = "fail", {"error": f"{type(exc).__name__}: {exc}"}
    elapsed = round((time.perf_counter() - t0) * 1000) if timing else None
    return {"claim": claim_id, "status": status, "details": details, "seed": seed, "elapsed_ms": elapsed}


def run_claims(only: list[str] | None = None, seed: int = DEFAULT_SEED, timing: bool = True) -> list[dict]:
    ids = sorted(CLAIMS) if not only else sorted(set(only))
    unknown = [i for i in ids if i not in CLAIMS]
    if unknown:
        raise KeyError(f"unknown claim id {unknown[0]!r}; known: {', '.join(sorted(CLAIMS))}")
    return [run_claim(i, seed, timing) for i in ids]
