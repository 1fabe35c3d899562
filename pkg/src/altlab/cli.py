"""``altlab`` command line: one JSON document per invocation.

Exit status: 0 on success or a passing check, 1 when the answer is a
refutation or a failure, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bisim import KINDS, bounded_family, greatest_family
from .claims import CLAIMS, run_claims
from .formula import parse, render
from .fragments import classify
from .games import iesds, load_game, verify_theorem_A
from .generate import DEFAULT_SEED
from .kripke import FRAME_ALIASES, FrameClass, KripkeModel, PointedModel, frame_properties, load_model, \
    model_check
from .proof import check_derivation, load_derivation, script_names, search_countermodel
from .transform import alt_unravel, nr_partition
from .zoo import ZOO, UnknownModelError, zoo


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("ALTLAB_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"ALTLAB_SEED must be an integer, got {raw!r}") from None


def read_model(ref: str) -> tuple[KripkeModel, str | None]:
    """A model from ``zoo:NAME`` or a JSON file."""
    if ref.startswith("zoo:"):
        pm = zoo(ref[4:])
        return pm.model, pm.point
    try:
        text = Path(ref).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read model {ref!r}: {exc.strerror}") from None
    return load_model(text)


def pointed(ref: str, point: str | None) -> PointedModel:
    m, default = read_model(ref)
    point = point or default
    if point is None:
        raise UsageError(f"{ref}: no point given and the model names none")
    if point not in m.worlds:
        raise UsageError(f"{ref}: {point!r} is not a world")
    return PointedModel(m, point)


def read_text(path: str, what: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {what} {path!r}: {exc.strerror}") from None


# --- subcommands -------------------------------------------------------------------------

def cmd_classify(args):
    universe = args.agents.split(",") if args.agents else None
    return 0, classify(parse(args.formula, universe), universe).as_dict()


def cmd_check(args):
    pm = pointed(args.model, args.point)
    f = parse(args.formula, pm.model.agents)
    holds = model_check(pm, f)
    return (0 if holds else 1), {"formula": render(f), "point": pm.point, "holds": holds}


def cmd_frame(args):
    m, _ = read_model(args.model)
    classes = sorted(n for n in FRAME_ALIASES if not n.startswith("C") and FrameClass.named(n).contains(m))
    return 0, {"properties": frame_properties(m), "classes": classes}


def cmd_bisim(args):
    (m, p), (n, q) = read_model(args.model1), read_model(args.model2)
    if args.depth is None:
        fam = greatest_family(m, n, args.kind)
    else:
        if args.depth < 0:
            raise UsageError("--depth must be non-negative")
        fam = bounded_family(m, n, args.kind, args.depth)
    doc = fam.as_dict()
    if p is None or q is None:
        return 0, doc
    related = fam.related(p, q)
    doc["points"] = [p, q]
    doc["related"] = related
    return (0 if related else 1), doc


def cmd_unravel(args):
    unr = alt_unravel(pointed(args.model, args.point), args.depth, args.complete)
    doc = unr.to_dict()
    doc["interior"] = sorted(unr.interior())
    doc["traces"] = {w: [[tag, v] for tag, v in t] for w, t in sorted(unr.traces.items())}
    return 0, doc


def cmd_nrpartition(args):
    part = nr_partition(pointed(args.model, args.point))
    doc = part.to_dict()
    doc["traces"] = {w: [[sorted(xs), v] for xs, v in t] for w, t in sorted(part.traces.items())}
    return 0, doc


def cmd_prove(args):
    if args.list:
        return 0, {"scripts": script_names()}
    if not args.derivation:
        raise UsageError("prove needs a derivation file or script name (or --list)")
    d = load_derivation(args.derivation)
    res = check_derivation(d)
    return (0 if res.ok else 1), res.as_dict()


def cmd_countermodel(args):
    f = parse(args.formula)
    fc = FrameClass.named(args.frame_class)
    if args.max < 1:
        raise UsageError("--max must be at least 1")
    mode = "exhaustive" if args.exhaustive else "random"
    found = search_countermodel(f, fc, args.max, mode, seed=args.seed, trials=args.trials)
    doc = {"formula": render(f), "class": str(fc), "max_worlds": args.max, "mode": mode,
           "found": found is not None, "countermodel": None if found is None else found.to_dict()}
    if mode == "random":
        doc["seed"] = args.seed
    return (1 if found else 0), doc


def cmd_game_iesds(args):
    game, _ = load_game(read_text(args.game, "game"))
    return 0, iesds(game).as_dict()


def cmd_game_verify(args):
    game, egm = load_game(read_text(args.model, "game model"))
    if egm is None:
        raise UsageError(f"{args.model} has no epistemic model block")
    if args.depth < 1:
        raise UsageError("--depth must be at least 1")
    verdict = verify_theorem_A(egm, args.world, args.depth)
    return (1 if verdict.status == "fail" else 0), verdict.as_dict()


def cmd_verify_paper(args):
    if args.list:
        return 0, {"claims": {cid: c.summary for cid, c in sorted(CLAIMS.items())}}
    unknown = [c for c in args.only or [] if c not in CLAIMS]
    if unknown:
        raise UsageError(f"unknown claim id {unknown[0]!r}; known: {', '.join(sorted(CLAIMS))}")
    report = run_claims(args.only, args.seed, timing=not args.no_timing)
    ok = all(r["status"] == "pass" for r in report)
    return (0 if ok else 1), {"seed": args.seed, "passed": ok, "claims": report}


def cmd_zoo(args):
    if args.name is None:
        return 0, {"models": {name: {"frame": e.frame, "doc": e.doc} for name, e in ZOO.items()}}
    pm = zoo(args.name)
    return 0, {**pm.to_dict(), "name": pm.name, "doc": pm.doc, "frame": ZOO[args.name].frame}


# --- parser -------------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser(seed: int) -> argparse.ArgumentParser:
    p = _Parser(prog="altlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", help="fragment membership of a formula")
    s.add_argument("formula")
    s.add_argument("--agents", help="comma-separated agent universe (default: agents of the formula)")
    s.set_defaults(run=cmd_classify)

    s = sub.add_parser("check", help="evaluate a formula at a world")
    s.add_argument("model", help="JSON file or zoo:NAME")
    s.add_argument("point")
    s.add_argument("formula")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("frame", help="frame properties per agent")
    s.add_argument("model")
    s.set_defaults(run=cmd_frame)

    s = sub.add_parser("bisim", help="greatest or depth-bounded bisimulation family")
    s.add_argument("kind", choices=KINDS)
    s.add_argument("model1")
    s.add_argument("model2")
    s.add_argument("--depth", type=int)
    s.set_defaults(run=cmd_bisim)

    s = sub.add_parser("unravel", help="alternating unraveling")
    s.add_argument("model")
    s.add_argument("point")
    s.add_argument("--depth", type=int, required=True)
    s.add_argument("--complete", choices=("none", "k45", "b"), default="none")
    s.set_defaults(run=cmd_unravel)

    s = sub.add_parser("nrpartition", help="partition model of a reflexive model")
    s.add_argument("model")
    s.add_argument("point")
    s.set_defaults(run=cmd_nrpartition)

    s = sub.add_parser("prove", help="check a derivation (file path or packaged script name)")
    s.add_argument("derivation", nargs="?")
    s.add_argument("--list", action="store_true", help="list packaged scripts")
    s.set_defaults(run=cmd_prove)

    s = sub.add_parser("countermodel", help="search a frame class for a refuting model")
    s.add_argument("formula")
    s.add_argument("--class", dest="frame_class", required=True)
    s.add_argument("--max", type=int, required=True, help="largest number of worlds")
    s.add_argument("--exhaustive", action="store_true", help="enumerate instead of sampling")
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=seed)
    s.set_defaults(run=cmd_countermodel)

    g = sub.add_parser("game", help="strategic-form games").add_subparsers(
        dest="game_command", required=True, parser_class=_Parser)
    s = g.add_parser("iesds", help="iterated elimination of strictly dominated strategies")
    s.add_argument("game")
    s.set_defaults(run=cmd_game_iesds)
    s = g.add_parser("verify", help="rationality at a world implies IESDS survival")
    s.add_argument("model")
    s.add_argument("world")
    s.add_argument("--depth", type=int, required=True)
    s.set_defaults(run=cmd_game_verify)

    s = sub.add_parser("verify-paper", help="run the reproducible claim suite")
    s.add_argument("--only", action="append", metavar="CLAIM-ID")
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--no-timing", action="store_true", help="omit wall times for byte-stable output")
    s.add_argument("--list", action="store_true")
    s.set_defaults(run=cmd_verify_paper)

    s = sub.add_parser("zoo", help="list built-in models or dump one")
    s.add_argument("name", nargs="?")
    s.set_defaults(run=cmd_zoo)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser(default_seed()).parse_args(argv)
        code, doc = args.run(args)
    except UnknownModelError as exc:
        code, doc = 2, {"error": exc.args[0]}
    except (UsageError, FileNotFoundError) as exc:
        code, doc = 2, {"error": str(exc.args[0]) if isinstance(exc, FileNotFoundError) else str(exc)}
    except ValueError as exc:  # every library input error derives from ValueError
        code, doc = 2, {"error": str(exc)}
    print(json.dumps(doc, indent=2, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
