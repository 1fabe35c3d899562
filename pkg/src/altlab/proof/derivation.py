"""Line-oriented Hilbert-style derivations and their checker.

File layout::

    logic: K
    agents: 1 2
    define BOT := p & ~p          # optional macros, expanded as atoms
    a. m1 | m2 ; assume
    1. [1](m1 -> m2) -> ([1]m1 -> [1]m2) ; axiom K
    2. ... ; mp a 1

Rules: ``assume``, ``axiom NAME``, ``taut [I ...]``, ``mp I J``, ``nec AG I``,
``rm AG I``. ``taut`` with line references accepts a line that follows
propositionally from those lines. ``AG`` is an agent, or ``E``/``C`` in the
common-belief logics. ``rm`` accepts both the box form ``[AG]A -> [AG]B``
and the diamond form ``<AG>A -> <AG>B`` from a theorem ``A -> B``.
A line is a theorem when no ``assume`` line is among its ancestors; ``nec``
and ``rm`` only apply to theorems.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..formula import (AGENT_RE, ATOM_RE, Box, C, E, Formula, FormulaSyntaxError, Implies, Not,
                       UnknownAgentError, as_implication, check_agents, has_common,
                       normalize, parse, render, substitute)
from .schemas import Logic, logic as lookup_logic, match_schema
from .taut import MAX_VARIABLES, TautologyGuardError, implied

RULES = ("assume", "axiom", "taut", "mp", "nec", "rm")
_LINE_RE = re.compile(r"^(?P<id>[\w.]+?)\.\s+(?P<body>.*)$")
_DEFINE_RE = re.compile(r"^define\s+(?P<name>\w+)\s*:=\s*(?P<body>.+)$")


class DerivationFormatError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Line:
    id: str
    formula: Formula
    rule: str
    args: tuple[str, ...]
    lineno: int = 0

    def justification(self) -> str:
        return " ".join((self.rule,) + self.args)


@dataclass(frozen=True)
class Derivation:
    logic: str
    agents: tuple[str, ...]
    lines: tuple[Line, ...]
    name: str = ""

    def with_line(self, index: int, line: Line) -> "Derivation":
        lines = list(self.lines)
        lines[index] = line
        return Derivation(self.logic, self.agents, tuple(lines), self.name)


@dataclass
class CheckResult:
    ok: bool
    logic: str
    theorems: dict[str, bool] = field(default_factory=dict)
    failed_line: str | None = None
    lineno: int | None = None
    reason: str | None = None
    final: Formula | None = None
    final_theorem: bool = False

    def as_dict(self) -> dict:
        d = {"accepted": self.ok, "logic": self.logic, "lines": len(self.theorems)}
        if self.final is not None:
            d["final"] = render(self.final)
            d["final_is_theorem"] = self.final_theorem
        if not self.ok:
            d.update(failed_line=self.failed_line, lineno=self.lineno, reason=self.reason)
        return d


# --- parsing -----------------------------------------------------------------------------

def parse_derivation(text: str, name: str = "") -> Derivation:
    logic_name = None
    agents: tuple[str, ...] | None = None
    macros: dict[str, Formula] = {}
    lines: list[Line] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if stripped.startswith("logic:"):
            logic_name = stripped.split(":", 1)[1].strip()
            try:
                lookup_logic(logic_name)
            except KeyError as exc:
                raise DerivationFormatError(lineno, str(exc.args[0])) from None
            continue
        if stripped.startswith("agents:"):
            agents = tuple(stripped.split(":", 1)[1].split())
            bad = [a for a in agents if not AGENT_RE.match(a)]
            if bad or len(set(agents)) != len(agents) or not agents:
                raise DerivationFormatError(lineno, f"bad agent list {stripped!r}")
            continue
        m = _DEFINE_RE.match(stripped)
        if m:
            if not ATOM_RE.match(m["name"]):
                raise DerivationFormatError(lineno, f"bad macro name {m['name']!r}")
            macros[m["name"]] = substitute(_parse_formula(m["body"], lineno), macros)
            continue
        m = _LINE_RE.match(stripped)
        if not m or ";" not in m["body"]:
            raise DerivationFormatError(lineno, "expected 'id. formula ; rule'")
        source, _, rule_text = m["body"].rpartition(";")
        formula = substitute(_parse_formula(source.strip(), lineno), macros)
        parts = rule_text.split()
        if not parts or parts[0] not in RULES:
            raise DerivationFormatError(lineno, f"unknown rule {rule_text.strip()!r}")
        if m["id"] in seen:
            raise DerivationFormatError(lineno, f"duplicate line id {m['id']!r}")
        seen.add(m["id"])
        lines.append(Line(m["id"], formula, parts[0], tuple(parts[1:]), lineno))
    if logic_name is None:
        raise DerivationFormatError(0, "missing 'logic:' header")
    if agents is None:
        raise DerivationFormatError(0, "missing 'agents:' header")
    if not lines:
        raise DerivationFormatError(0, "derivation has no lines")
    return Derivation(logic_name, agents, tuple(lines), name)


def _parse_formula(text: str, lineno: int) -> Formula:
    try:
        return parse(text)
    except FormulaSyntaxError as exc:
        raise DerivationFormatError(lineno, str(exc)) from None


# --- checking ------------------------------------------------------------------------------

class _Reject(Exception):
    pass


def _modal(op: str, f: Formula) -> Formula:
    if op == "E":
        return E(f)
    if op == "C":
        return C(f)
    return Box(op, f)


def _dual(op: str, f: Formula) -> Formula:
    return Not(_modal(op, Not(f)))


def check_derivation(d: Derivation, max_variables: int = MAX_VARIABLES) -> CheckResult:
    """Accept iff every line is justified; otherwise report the first bad line."""
    lg: Logic = lookup_logic(d.logic)
    res = CheckResult(True, d.logic)
    done: dict[str, tuple[Formula, bool]] = {}

    def ref(i: str) -> tuple[Formula, bool]:
        if i not in done:
            raise _Reject(f"reference to unknown or later line {i!r}")
        return done[i]

    def operator(op: str) -> str:
        if op in ("E", "C"):
            if not lg.common:
                raise _Reject(f"{op} is not available in {d.logic}")
            return op
        if op not in d.agents:
            raise _Reject(f"unknown agent {op!r}")
        return op

    def arity(line: Line, n: int | None):
        if n is not None and len(line.args) != n:
            raise _Reject(f"{line.rule} takes {n} argument(s), got {len(line.args)}")

    for line in d.lines:
        f = line.formula
        try:
            try:
                check_agents(f, d.agents)
            except UnknownAgentError as exc:
                raise _Reject(str(exc)) from None
            if not lg.common and has_common(f):
                raise _Reject(f"C/E operators are not part of {d.logic}")
            g = normalize(f)
            if line.rule == "assume":
                arity(line, 0)
                theorem = False
            elif line.rule == "axiom":
                arity(line, 1)
                name = line.args[0]
                if name not in lg.schemas:
                    raise _Reject(f"schema {name!r} is not an axiom of {d.logic}")
                if match_schema(name, f, d.agents) is None:
                    raise _Reject(f"formula is not an instance of schema {name}")
                theorem = True
            elif line.rule == "taut":
                premises = [ref(i) for i in line.args]
                try:
                    ok = implied([p for p, _ in premises], f, max_variables)
                except TautologyGuardError as exc:
                    raise _Reject(str(exc)) from None
                if not ok:
                    what = "a tautology" if not premises else "propositionally implied by " + ", ".join(line.args)
                    raise _Reject(f"formula is not {what}")
                theorem = all(t for _, t in premises)
            elif line.rule == "mp":
                arity(line, 2)
                (f1, t1), (f2, t2) = ref(line.args[0]), ref(line.args[1])
                n1, n2 = normalize(f1), normalize(f2)
                if as_implication(n2) != (n1, g) and as_implication(n1) != (n2, g):
                    raise _Reject("modus ponens does not apply: need A and A -> B concluding B")
                theorem = t1 and t2
            elif line.rule == "nec":
                arity(line, 2)
                op = operator(line.args[0])
                src, t = ref(line.args[1])
                if not t:
                    raise _Reject("nec applied to a line that depends on assumptions")
                if g != normalize(_modal(op, src)):
                    raise _Reject(f"expected the necessitation of line {line.args[1]}")
                theorem = True
            elif line.rule == "rm":
                arity(line, 2)
                op = operator(line.args[0])
                src, t = ref(line.args[1])
                if not t:
                    raise _Reject("rm applied to a line that depends on assumptions")
                parts = as_implication(normalize(src))
                if parts is None:
                    raise _Reject(f"line {line.args[1]} is not an implication")
                a, b = parts
                forms = (normalize(Implies(_modal(op, a), _modal(op, b))),
                         normalize(Implies(_dual(op, a), _dual(op, b))))
                if g not in forms:
                    raise _Reject(f"expected [{op}]A -> [{op}]B or <{op}>A -> <{op}>B from line {line.args[1]}")
                theorem = True
            else:  # pragma: no cover - rejected at parse time
                raise _Reject(f"unknown rule {line.rule!r}")
        except _Reject as exc:
            res.ok = False
            res.failed_line, res.lineno, res.reason = line.id, line.lineno, str(exc)
            return res
        done[line.id] = (f, theorem)
        res.theorems[line.id] = theorem
    last = d.lines[-1]
    res.final = last.formula
    res.final_theorem = res.theorems[last.id]
    return res


# --- packaged scripts ---------------------------------------------------------------------

def _script_dir():
    return resources.files(__package__).joinpath("scripts")


def script_names() -> list[str]:
    return sorted(p.name[:-4] for p in _script_dir().iterdir() if p.name.endswith(".drv"))


def script_text(name: str) -> str:
    path = _script_dir().joinpath(f"{name}.drv")
    if not path.is_file():
        raise FileNotFoundError(f"no packaged derivation named {name!r}; known: {', '.join(script_names())}")
    return path.read_text()


def load_derivation(spec: str) -> Derivation:
    """Load a derivation from a path, or a packaged script by name or basename."""
    p = Path(spec)
    if p.is_file():
        return parse_derivation(p.read_text(), p.stem)
    stem = p.name[:-4] if p.name.endswith(".drv") else p.name
    return parse_derivation(script_text(stem), stem)
