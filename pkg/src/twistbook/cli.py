"""Batch front end: build families, verify derivations, compute invariants.

Exit codes: 0 verified, 1 refuted, 2 error.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import curves as cv
from . import invariants as inv
from . import mcg
from .factorization import Factorization, hurwitz_search
from .paperlib import (FAMILIES, PROOF_NAMES, RelationCheck, ScriptCheck, UnknownFamily,
                       UnsupportedParameter, ValidationFailed, build, proof_script)
from .paperlib.models import PolygonModel
from .surface import Triangulation

EXIT = {"verified": 0, "refuted": 1, "error": 2}

THEOREMS = ("thm-ope", "thm-g+2", "thm-ope2", "vhm")
CONTROLS = ("random-transposition",)


class Report:
    def __init__(self, command: list[str]):
        self.command = command
        self.details: list[dict] = []
        self.error = ""

    def add(self, check: str, ok: bool, **info):
        self.details.append({"check": check, "status": "verified" if ok else "refuted", **info})

    @property
    def status(self) -> str:
        if self.error:
            return "error"
        return "verified" if all(d["status"] == "verified" for d in self.details) else "refuted"

    def to_json(self) -> dict:
        out = {"command": self.command, "status": self.status, "details": self.details}
        if self.error:
            out["error"] = self.error
        return out


def _timed(fn, *a, **kw):
    t0 = time.perf_counter()
    val = fn(*a, **kw)
    return val, round(time.perf_counter() - t0, 3)


def _integer(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return n


# ----------------------------------------------------------------------------
# build
# ----------------------------------------------------------------------------

def cmd_build(args, rep: Report, out):
    fam, secs = _timed(build, args.family, args.parameter)
    sc = fam.page.classify()
    data = fam.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(data, indent=1, sort_keys=True))
    rep.add("build", True, family=fam.name, parameter=fam.parameter,
            page=[sc.genus, sc.n_boundary], page_hash=fam.page.hash, seconds=secs,
            factorizations={k: len(v) for k, v in fam.factorizations.items()},
            out=args.out)
    if not args.json:
        print(f"{fam.name} {fam.parameter}: page ({sc.genus},{sc.n_boundary})"
              f" chi={sc.euler}", file=out)
        for k, v in fam.factorizations.items():
            print(f"  {k}: {len(v)} cycles", file=out)
        if args.out:
            print(f"  written to {args.out}", file=out)


# ----------------------------------------------------------------------------
# verify
# ----------------------------------------------------------------------------

def _run_relation(rel: RelationCheck, rep: Report):
    holds, secs = _timed(rel.verify)
    # a negative control is verified as a claim only when its relation fails,
    # but the report states the raw answer so that refutation exits 1
    rep.add(rel.name, holds, family=rel.family.name, page_hash=rel.family.page.hash,
            expected=rel.expected, seconds=secs)


def _run_script(chk: ScriptCheck, rep: Report, budget: int):
    r = chk.verify()
    info = {"family": chk.family.name, "parameter": chk.family.parameter, "steps": len(chk.script),
            "final": r.final_hashes, "target": r.target_hashes, "seconds": round(r.seconds, 3)}
    if not r.ok:
        info.update(failed_step=r.failed_step, reason=r.reason)
        if budget > 0:
            found = hurwitz_search(chk.start, chk.target, budget)
            info["search"] = None if found is None else len(found)
    rep.add(chk.name, r.ok, **info)


def _transposition_control(g: int, seed: int, rep: Report):
    fam = build("thm-ope", g)
    f = fam.factorization(fam.default_factorization)
    rng = random.Random(seed)
    # swapping disjoint cycles is a product of commutations, so only
    # intersecting pairs make a meaningful control
    pairs = [(i, j) for i in range(len(f)) for j in range(i + 2, len(f))
             if cv.geometric_intersection(f[i], f[j])]
    i, j = rng.choice(pairs)
    cyc = list(f.cycles)
    cyc[i], cyc[j] = cyc[j], cyc[i]
    swapped = Factorization(f.page, cyc)
    same, secs = _timed(mcg.equal, f.total_monodromy(), swapped.total_monodromy())
    rep.add("random-transposition", same, family=fam.name, parameter=g, seed=seed,
            swapped=[i + 1, j + 1], seconds=secs)


def _theorem(name: str, p: int, rep: Report, budget: int):
    if name == "thm-ope":
        fam = build("thm-ope", p)
        rep.add("build thm-ope", True, page_hash=fam.page.hash)
        li = inv.lefschetz_invariants(fam.page, fam.factorization("phi"))
        ok = (li.chi, li.h1, li.h2_rank) == (2 - 2 * p, inv.AbelianGroup(2 * p), 1)
        rep.add("lefschetz total space", ok, **li.to_json())
        _theorem_h1(p, rep)
    elif name == "thm-g+2":
        _run_script(proof_script("gplus2-chain", p), rep, budget)
        _theorem_h1(p, rep)
    elif name == "thm-ope2":
        fam = build("thm-ope2", p)
        rep.add("build thm-ope2", True, page_hash=fam.page.hash)
        li = inv.lefschetz_invariants(fam.page, fam.factorization("phi"))
        ok = (li.chi, li.h1, li.h2_rank) == (2 - p, inv.AbelianGroup(p - 1, (2,)), 0)
        rep.add("lefschetz total space", ok, **li.to_json())
        if p == 1:
            _run_relation(proof_script("lantern"), rep)
    elif name == "vhm":
        for n in ("vhm-star", "vhm-chain-relation", "vhm-four-twists", "vhm-three-twists"):
            _run_relation(proof_script(n), rep)
        _run_script(proof_script("vhm-hurwitz"), rep, budget)
    else:
        raise KeyError(name)


def _theorem_h1(g: int, rep: Report):
    a = build("thm-ope", g)
    b = build("thm-g+2", g)
    ha = inv.h1_open_book(a.page, a.factorization("phi"))
    hb = inv.h1_open_book(b.page, b.factorization("psi"))
    rep.add("h1 of both open books agree", ha == hb, thm_ope=str(ha), thm_gplus2=str(hb))


def cmd_verify(args, rep: Report, out):
    if args.parameter < 1:
        raise UnsupportedParameter("parameter must be at least 1")
    if args.target == "relation":
        if args.name in CONTROLS:
            _transposition_control(args.parameter, args.seed, rep)
        else:
            chk = proof_script(args.name, args.parameter)
            if not isinstance(chk, RelationCheck):
                raise KeyError(f"{args.name} is a script, not a relation")
            _run_relation(chk, rep)
    elif args.target == "script":
        chk = proof_script(args.name, args.parameter)
        if not isinstance(chk, ScriptCheck):
            raise KeyError(f"{args.name} is a relation, not a script")
        _run_script(chk, rep, args.search_budget)
    else:
        _theorem(args.name, args.parameter, rep, args.search_budget)
    if not args.json:
        for d in rep.details:
            extra = f" ({d['seconds']} s)" if "seconds" in d else ""
            print(f"{d['status']:9s} {d['check']}{extra}", file=out)


# ----------------------------------------------------------------------------
# invariants
# ----------------------------------------------------------------------------

def annulus_open_book(power: int) -> Factorization:
    """The annulus with `power` positive twists about its core."""
    m = PolygonModel([("A", ["bottom", "R", "top", "L"])], [(("A", "R"), ("A", "L"))])
    core = m.curve([("A", "R")])
    return Factorization(m.page, [core] * power)


def _load_bundle(path: str, key: str | None) -> Factorization:
    data = json.loads(Path(path).read_text())
    page = Triangulation.from_json(data["page"])
    if "cycles" in data:
        return Factorization(page, [cv.curve_from_json(page, c) for c in data["cycles"]])
    curves = {n: cv.curve_from_json(page, c) for n, c in data["curves"].items()}
    facts = data["factorizations"]
    names = facts[key] if key else next(iter(facts.values()))
    return Factorization(page, [curves[n] for n in names])


def _source(args) -> Factorization:
    if args.source == "annulus":
        return annulus_open_book(args.parameter)
    if args.source in FAMILIES:
        fam = build(args.source, args.parameter)
        return fam.factorization(args.factorization or fam.default_factorization)
    if Path(args.source).exists():
        return _load_bundle(args.source, args.factorization)
    raise UnknownFamily(args.source)


def cmd_invariants(args, rep: Report, out):
    f = _source(args)
    if args.kind == "openbook":
        h1, secs = _timed(inv.h1_open_book, f.page, f)
        rep.add("openbook", True, h1=h1.to_json(), h1_text=str(h1), seconds=secs)
        if not args.json:
            print(str(h1), file=out)
    else:
        li, secs = _timed(inv.lefschetz_invariants, f.page, f)
        rep.add("lefschetz", True, **li.to_json(), h1_text=str(li.h1), seconds=secs)
        if not args.json:
            print(f"chi={li.chi} h1={li.h1} h2_rank={li.h2_rank}", file=out)


def cmd_list(args, rep: Report, out):
    rep.add("list", True, families=list(FAMILIES), derivations=list(PROOF_NAMES),
            controls=list(CONTROLS), theorems=list(THEOREMS))
    if not args.json:
        print("families:    " + " ".join(FAMILIES), file=out)
        print("derivations: " + " ".join(PROOF_NAMES + CONTROLS), file=out)
        print("theorems:    " + " ".join(THEOREMS), file=out)


# ----------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twistbook", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the report as JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--search-budget", type=int, default=0,
                        help="Hurwitz search depth tried when a script is refuted")
    common.add_argument("--out", help="output path for build bundles")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build a family and write its JSON bundle")
    b.add_argument("family")
    b.add_argument("parameter", type=_integer)
    b.set_defaults(run=cmd_build)

    v = sub.add_parser("verify", parents=[common], help="check a relation, script or theorem")
    v.add_argument("target", choices=("relation", "script", "theorem"))
    v.add_argument("name")
    v.add_argument("parameter", type=_integer, nargs="?", default=1)
    v.set_defaults(run=cmd_verify)

    i = sub.add_parser("invariants", parents=[common], help="homology of an open book or Lefschetz fibration")
    i.add_argument("kind", choices=("openbook", "lefschetz"))
    i.add_argument("source", help="a family name, 'annulus', or a JSON bundle path")
    i.add_argument("parameter", type=_integer, nargs="?", default=1)
    i.add_argument("--factorization", help="which factorization of the family or bundle")
    i.set_defaults(run=cmd_invariants)

    ls = sub.add_parser("list", parents=[common], help="list families and derivations")
    ls.set_defaults(run=cmd_list)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT["error"]
    rep = Report(argv)
    try:
        if getattr(args, "parameter", 1) < 1:
            raise UnsupportedParameter("parameter must be at least 1")
        args.run(args, rep, out)
    except (UnsupportedParameter, UnknownFamily, ValidationFailed, KeyError, ValueError,
            OSError, json.JSONDecodeError) as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
        if not args.json:
            print(f"error: {rep.error}", file=sys.stderr)
    if args.json:
        print(json.dumps(rep.to_json(), indent=1), file=out)
    elif rep.status != "error" and args.command == "verify":
        print(rep.status, file=out)
    return EXIT[rep.status]


if __name__ == "__main__":
    sys.exit(main())
