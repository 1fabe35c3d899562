"""Built-in pointed models: the countermodels and model pairs used by the claims.

Each entry documents how every edge was read off its drawing. Conventions:

* In the two-column drawings, dashed arrows are agent ``a`` and solid arrows
  are agent ``b`` (the only other agent).
* "loops omitted" drawings get a reflexive loop for both agents at every world.
* Undirected lines are read as edges in both directions.
"""
from __future__ import annotations

from dataclasses import dataclass

from .kripke import KripkeModel, PointedModel


class UnknownModelError(KeyError):
    pass


def _loops(worlds):
    return [(w, w) for w in worlds]


def _both(*pairs):
    return [e for u, v in pairs for e in ((u, v), (v, u))]


@dataclass(frozen=True)
class ZooEntry:
    name: str
    build: object
    doc: str
    frame: str  # frame class the drawing is meant to belong to, for reports

    def pointed(self) -> PointedModel:
        model, point = self.build()
        return PointedModel(model, point, self.name, self.doc)


def _prop6_m():
    worlds = ["w1", "w2"]
    rel = {"a": [("w1", "w2")] + _loops(worlds), "b": _loops(worlds)}
    return KripkeModel(worlds, "ab", rel, {"p": ["w2"]}), "w1"


def _prop6_m_prime():
    worlds = ["w1", "w2", "w3"]
    rel = {"a": _both(("w1", "w2"), ("w2", "w3")) + _loops(worlds), "b": _loops(worlds)}
    return KripkeModel(worlds, "ab", rel, {"p": ["w3"]}), "w1"


def _chi5_m():
    worlds = ["w1", "w2", "w3"]
    # w2 gets a loop the drawing lacks: without it the frame is not serial
    edges = [("w1", "w1"), ("w1", "w2"), ("w1", "w3"), ("w3", "w3"), ("w2", "w2")]
    return KripkeModel(worlds, "ab", {"a": edges, "b": edges}, {"p": ["w3"]}), "w1"


def _chid4_m():
    worlds = ["w1", "w2", "w3", "v1"]
    rel = {
        "a": [("w1", "w2"), ("w2", "w3"), ("w3", "w2"), ("w2", "w2"), ("w3", "w3"), ("v1", "v1")],
        "b": [("w1", "v1"), ("w2", "v1"), ("w3", "v1"), ("v1", "v1")],
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["w1", "w2", "v1"]}), "w1"


def _s4_m():
    worlds = ["l1", "r1", "l2", "r2", "l3", "r3"]
    rel = {
        "a": [("l1", "l2"), ("l2", "l3"), ("l1", "l3")] + _loops(worlds),
        "b": _both(("l1", "r1"), ("l2", "r2"), ("l3", "r3")) + _loops(worlds),
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["l3", "r3"]}), "l1"


def _s4_n():
    worlds = ["l1'", "r1'", "l2'", "r2'", "l3'", "r3'"]
    rel = {
        "a": [("l1'", "r1'"), ("l2'", "r2'"), ("l3'", "r3'"),
              ("l1'", "r2'"), ("l2'", "r3'"), ("l1'", "r3'")] + _loops(worlds),
        "b": _both(("l1'", "r1'"), ("l2'", "r2'"), ("l3'", "r3'")) + _loops(worlds),
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["l3'", "r3'"]}), "l1'"


def _kd5_m():
    worlds = ["m1", "m2", "m3"]
    rel = {
        "a": [("m1", "m2"), ("m2", "m3"), ("m3", "m3")],
        "b": _loops(worlds),
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["m3"]}), "m1"


def _kd5_n():
    worlds = ["l1", "r1", "l2", "r2", "l3", "r3"]
    rel = {
        "a": [("l1", "r2"), ("r1", "r2"), ("l2", "r3"), ("r2", "r3"), ("l3", "r3"), ("r3", "r3")],
        "b": [("r1", "l1"), ("l1", "l1"), ("r2", "l2"), ("l2", "l2"), ("r3", "l3"), ("l3", "l3")],
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["l3", "r3"]}), "r1"


def _b_m():
    worlds = ["l1", "r1", "l2", "r2", "l3", "r3"]
    rel = {
        "a": _both(("l1", "l2"), ("l2", "l3")) + _loops(worlds),
        "b": _both(("l1", "r1"), ("l2", "r2"), ("l3", "r3")) + _loops(worlds),
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["l3", "r3"]}), "l1"


def _b_n():
    worlds = ["l1'", "r1'", "l2'", "r2'", "l3'", "r3'"]
    rel = {
        "a": _both(("l1'", "r2'"), ("l2'", "r3'")) + _loops(worlds),
        "b": _both(("l1'", "r1'"), ("l2'", "r2'"), ("l3'", "r3'")) + _loops(worlds),
    }
    return KripkeModel(worlds, "ab", rel, {"p": ["l3'", "r3'"]}), "l1'"


def _edges(spec: str):
    """``"w0w1 w1w0"`` -> [("w0", "w1"), ("w1", "w0")]."""
    return [(e[:2], e[2:]) for e in spec.split()]


_W3 = ["w0", "w1", "w2"]


def _kd5_witness_m():
    rel = {"a": _edges("w0w0 w1w0 w2w0"), "b": _edges("w0w0 w1w0 w2w0")}
    return KripkeModel(_W3, "ab", rel, {"p": []}), "w0"


def _kd5_witness_n():
    rel = {"a": _edges("w0w0 w0w1 w1w0 w1w1 w2w0"), "b": _edges("w0w2 w1w1 w2w2")}
    return KripkeModel(_W3, "ab", rel, {"p": ["w1"]}), "w2"


def _b_witness_m():
    rel = {"a": _edges("w0w0 w0w1 w1w0 w1w1 w2w2"), "b": _edges("w0w0 w0w2 w1w1 w2w0 w2w2")}
    return KripkeModel(_W3, "ab", rel, {"p": ["w1"]}), "w2"


def _b_witness_n():
    rel = {"a": _edges("w0w0 w0w1 w0w2 w1w0 w1w1 w2w0 w2w2"),
           "b": _edges("w0w0 w0w1 w1w0 w1w1 w2w2")}
    return KripkeModel(_W3, "ab", rel, {"p": ["w2"]}), "w1"


ZOO: dict[str, ZooEntry] = {e.name: e for e in [
    ZooEntry("prop6-M", _prop6_m, """\
Two worlds, p at w2, point w1. a: w1->w2 plus loops at w1 and w2 (3 edges).
b: loops at w1 and w2 (2 edges). Reflexive and transitive for both agents;
b is an equivalence.""", "S4"),
    ZooEntry("prop6-M'", _prop6_m_prime, """\
Three-world chain, p at w3, point w1. a: w1<->w2, w2<->w3 and loops at all
three worlds (7 edges). b: loops at all three worlds (3 edges). Reflexive and
symmetric for both agents.""", "B"),
    ZooEntry("chi5-M", _chi5_m, """\
Same relation for a and b. Worlds are identified by their labels, not by
drawing position. Drawn edges: w1->w2, w1->w3, loops at w1 and w3. Added:
loop at w2, which the drawing omits although the model must be serial
(5 edges per agent). p at w3, point w1. Serial, not Euclidean.""", "KD"),
    ZooEntry("chiD4-M", _chid4_m, """\
Worlds w1, w2, w3, v1; p at w1, w2, v1; point w1. a: w1->w2, w2<->w3, loops
at w2, w3, v1 (6 edges). b: w1->v1, w2->v1, w3->v1, loop at v1 (4 edges).
Serial for both agents.""", "KD"),
    ZooEntry("appB-S4-M", _s4_m, """\
Left column l1, l2, l3 and right column r1, r2, r3; p at l3, r3; point l1.
Solid b: l_i<->r_i. Dashed a: l1->l2, l2->l3, l1->l3. Omitted loops restored
for both agents (a: 9 edges, b: 12 edges).""", "S4"),
    ZooEntry("appB-S4-N", _s4_n, """\
Worlds l1', r1', l2', r2', l3', r3' (the drawing repeats the label l1' on the
left column; read as l1', l2', l3' top to bottom); p at l3', r3'; point l1'.
Solid b: l_i'<->r_i'. Dashed a: l_i'->r_i', l1'->r2', l2'->r3', l1'->r3'.
Omitted loops restored for both agents (a: 12 edges, b: 12 edges).""", "S4"),
    ZooEntry("appB-KD5-M", _kd5_m, """\
m1 above m2 above m3; p at m3; point m1. Dashed a: m1->m2, m2->m3, loop at
m3 (3 edges). Solid b: loops at m1, m2, m3 (3 edges). No loops are omitted in
this drawing; the a relation as drawn is serial but not Euclidean.""", "KD5"),
    ZooEntry("appB-KD5-N", _kd5_n, """\
Columns l1, l2, l3 and r1, r2, r3; p at l3, r3; point r1. Solid b: r_i->l_i
and loops at l1, l2, l3 (6 edges). Dashed a: l1->r2, r1->r2, l2->r3, r2->r3,
l3->r3, loop at r3 (6 edges). As drawn, a is serial but not Euclidean.""", "KD5"),
    ZooEntry("appB-B-M", _b_m, """\
Columns l1, l2, l3 and r1, r2, r3; p at l3, r3; point l1. Undirected solid b:
l_i-r_i. Undirected dashed a: l1-l2, l2-l3. Omitted loops restored for both
agents (a: 10 edges, b: 12 edges).""", "B"),
    ZooEntry("appB-B-N", _b_n, """\
Columns l1', l2', l3' and r1', r2', r3'; p at l3', r3'; point l1'. Undirected
solid b: l_i'-r_i'. Undirected dashed a: l1'-r2', l2'-r3'. Omitted loops
restored for both agents (a: 10 edges, b: 12 edges).""", "B"),
    ZooEntry("kd5-witness-M", _kd5_witness_m, """\
Replacement KD5 pair, left model. Three worlds, no p anywhere, point w0.
a = b: every world points to w0 (3 edges each). Serial and Euclidean.""", "KD5"),
    ZooEntry("kd5-witness-N", _kd5_witness_n, """\
Replacement KD5 pair, right model. p at w1, point w2. a: w0<->w1, loops at w0
and w1, w2->w0 (5 edges). b: w0->w2, loops at w1 and w2 (3 edges). Serial and
Euclidean; <a><a>p holds at w2 but not at w0 of the left model.""", "KD5"),
    ZooEntry("b-witness-M", _b_witness_m, """\
Replacement B pair, left model. p at w1, point w2. a: w0<->w1 plus loops at
all worlds (5 edges). b: w0<->w2 plus loops at all worlds (5 edges).""", "B"),
    ZooEntry("b-witness-N", _b_witness_n, """\
Replacement B pair, right model. p at w2, point w1. a: w0<->w1, w0<->w2 plus
loops (7 edges). b: w0<->w1 plus loops (5 edges). <a><a>p holds at w1 but not
at w2 of the left model.""", "B"),
]}

PAIRS = {
    "S4": ("appB-S4-M", "appB-S4-N"),
    "KD5": ("appB-KD5-M", "appB-KD5-N"),
    "B": ("appB-B-M", "appB-B-N"),
}
# pairs with the properties the drawn KD5 and B pairs are meant to have
WITNESS_PAIRS = {
    "KD5": ("kd5-witness-M", "kd5-witness-N"),
    "B": ("b-witness-M", "b-witness-N"),
}


def names() -> list[str]:
    return list(ZOO)


def zoo(name: str) -> PointedModel:
    try:
        return ZOO[name].pointed()
    except KeyError:
        raise UnknownModelError(f"unknown zoo model {name!r}; known: {', '.join(ZOO)}") from None
