"""Command-line interface: ``nlcdim gen | pipeline | oracle | verify``.

Every verdict printed by ``pipeline`` and ``verify`` comes from an
independent validator.  Reports are deterministic, and the exit status is 0
iff every verification passed (1 on a failed check, 2 on an error).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from . import formats
from .brealizer import boolean_realizer_nlc, boolean_realizer_treedec, first_failure, verify_realizer
from .config import DEFAULT_GUARDS, Guards
from .dimbound import bounded_dimension_coloring
from .errors import NlcDimError, ParseError, SearchExhausted, TooLarge, WitnessNotFound
from .extract import extract_kelly
from .generators import random_poset
from .nlc import nlc_from_treedec, validate as validate_nlc
from .poset import (Poset, brute_force_dimension, certify_coloring, check_kelly_conditions,
                    check_standard_subposet, kelly_example, standard_example,
                    standard_example_number)
from .semigroup import cross_labeling
from .split import colcombet_split, is_forward_ramseyan, trivial_split
from .treedec import check_binary_leaf, exact_tree_decomposition, regularize
from .treedec import validate as validate_td

log = logging.getLogger("nlcdim")


@dataclass
class RunReport:
    command: str
    inputs: List[str] = field(default_factory=list)
    counts: List[Tuple[str, str]] = field(default_factory=list)
    verdicts: List[Tuple[str, bool]] = field(default_factory=list)
    files: List[Tuple[str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def count(self, key: str, value) -> None:
        self.counts.append((key, str(value)))

    def verdict(self, key: str, ok: bool) -> bool:
        self.verdicts.append((key, bool(ok)))
        return ok

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.verdicts)

    def render(self) -> str:
        out = [f"command: {self.command}"]
        out += [f"input: {x}" for x in self.inputs]
        out += [f"{k}: {v}" for k, v in self.counts]
        out += [f"verify {k}: {'pass' if ok else 'FAIL'}" for k, ok in self.verdicts]
        out += [f"wrote {k}: {v}" for k, v in self.files]
        out += [f"note: {n}" for n in self.notes]
        out.append(f"status: {'ok' if self.ok else 'failed'}")
        return "\n".join(out) + "\n"


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file ({exc.strerror})", source=path) from None


def _load_poset(path: str) -> Tuple[str, Poset]:
    return formats.read_poset(_read(path), source=path)


def _guards(args) -> Guards:
    if getattr(args, "guard", None) is None:
        return DEFAULT_GUARDS
    g = args.guard
    return Guards(oracle_elements=g, treedec_elements=g)


def _emit(report: RunReport, out: Optional[str], name: str, text: str) -> None:
    if out is None:
        return
    path = Path(out) / name
    path.write_text(text)
    report.files.append((name.rsplit(".", 1)[0], str(path)))


# ---------------------------------------------------------------------------
# gen

def cmd_gen(args) -> int:
    if args.kind in ("standard", "kelly"):
        if args.k is None:
            raise SystemExit(f"gen {args.kind} needs k")
        p = standard_example(args.k) if args.kind == "standard" else kelly_example(args.k)
        name = f"{args.kind}{args.k}"
    else:
        n = args.k if args.k is not None else 10
        p = random_poset(n, args.width, args.seed)
        name = f"random{n}w{args.width}s{args.seed}"
    text = formats.write_poset(p, name)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------
# pipeline

def cmd_pipeline(args) -> int:
    guards = _guards(args)
    name, p = _load_poset(args.poset)
    rep = RunReport("pipeline", [f"{args.poset} ({name}, {len(p)} elements)"])
    rep.count("route", args.route)
    out = args.out
    if out:
        Path(out).mkdir(parents=True, exist_ok=True)
    if len(p) < 2:
        rep.count("dimension bound", 1)
        rep.notes.append("fewer than two elements, nothing to decompose")
        sys.stdout.write(rep.render())
        return 0

    td = exact_tree_decomposition(p, args.width, guard=guards.treedec_elements)
    rep.count("treewidth", td.width)
    rep.verdict("tree decomposition", validate_td(td, p))
    b = regularize(td, p)
    rep.count("bag slots t", b.t)
    rep.verdict("binary leaf decomposition", check_binary_leaf(b, p))
    _emit(rep, out, "treedec.txt", formats.write_treedec(b))
    n = nlc_from_treedec(p, b)
    rep.count("nlc labels q", n.q)
    rep.verdict("nlc decoding", validate_nlc(n, p))
    _emit(rep, out, "nlc.txt", formats.write_nlc(n))

    lt = cross_labeling(n, comparable=p.comparable)
    try:
        s = colcombet_split(lt, guards=guards)
    except (SearchExhausted, TooLarge) as exc:
        log.warning("split search failed (%s); using the height split", exc)
        rep.notes.append("split search failed, fell back to the height split")
        s = trivial_split(n.tree)
    rep.count("split order", s.order)
    rep.verdict("forward Ramseyan split", is_forward_ramseyan(lt, s)[0])
    _emit(rep, out, "split.txt", formats.write_split(s, n.tree))

    outcome = bounded_dimension_coloring(n, s, args.ell, lt=lt, poset=p)
    rep.count("color bound", outcome.bound)
    if outcome.certified:
        used = outcome.colors_used
        rep.count("colors used", used)
        rep.count("dimension bound", max(1, used))
        rep.verdict("dimension certificate", certify_coloring(p, outcome.coloring))
        rep.verdict("colors within bound", used <= outcome.bound)
    else:
        h, chain, cross = outcome.witness
        rep.count("witness level", h)
        rep.count("witness chain", " ".join(chain.nodes))
        if chain.length >= 3:
            try:
                w = extract_kelly(n, lt, s, chain, cross, p)
                rep.verdict("Kelly witness", check_kelly_conditions(p, w.a, w.b, w.c, w.d))
                _emit(rep, out, "witness.txt", formats.write_witness(formats.kelly_record(w, h)))
            except WitnessNotFound as exc:
                rep.notes.append(f"extraction: {exc}")
                rep.verdict("Kelly witness", False)
        else:
            rep.notes.append("chain shorter than 3, extraction needs --ell >= 3")

    if args.route == "treedec":
        r = boolean_realizer_treedec(p, b, guards)
    else:
        r = boolean_realizer_nlc(n, guards)
    rep.count("realizer size b", r.b)
    ok = verify_realizer(p, r)
    if not ok:
        rep.notes.append(f"realizer disagrees on {first_failure(p, r)}")
    rep.verdict("Boolean realizer", ok)
    if out:
        text = formats.write_realizer(r)
        again = formats.read_realizer(text)
        rep.verdict("realizer round trip", formats.write_realizer(again) == text
                    and verify_realizer(p, again))
        _emit(rep, out, "realizer.txt", text)
    text = rep.render()
    sys.stdout.write(text)
    if out:
        (Path(out) / "report.txt").write_text(text)
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# oracle

def cmd_oracle(args) -> int:
    guards = _guards(args)
    name, p = _load_poset(args.poset)
    rep = RunReport("oracle", [f"{args.poset} ({name}, {len(p)} elements)"])
    rep.count("dimension", brute_force_dimension(p, guard=guards.oracle_elements))
    rep.count("standard example number", standard_example_number(p, guard=guards.oracle_elements))
    if len(p) >= 2:
        try:
            td = exact_tree_decomposition(p, args.width, guard=guards.treedec_elements)
            b = regularize(td, p)
            r = boolean_realizer_treedec(p, b, guards)
            rep.count("boolean realizer size", r.b)
            rep.verdict("Boolean realizer", verify_realizer(p, r))
        except NlcDimError as exc:
            rep.notes.append(f"no realizer built: {exc}")
    sys.stdout.write(rep.render())
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    rep = RunReport(f"verify {args.kind}", [args.file])
    text = _read(args.file)
    p = None
    if args.poset:
        _, p = _load_poset(args.poset)
        rep.inputs.append(args.poset)

    def need_poset():
        if p is None:
            raise SystemExit(f"verify {args.kind} needs --poset")
        return p

    if args.kind == "poset":
        _, q = formats.read_poset(text, source=args.file)
        rep.count("elements", len(q))
        rep.verdict("partial order", q.is_valid())
    elif args.kind == "treedec":
        td = formats.read_treedec(text, source=args.file)
        rep.verdict("tree decomposition", validate_td(td.as_tree_decomposition()
                                                      if hasattr(td, "enum") else td, need_poset()))
        if hasattr(td, "enum"):
            rep.verdict("binary leaf decomposition", check_binary_leaf(td, need_poset()))
    elif args.kind == "nlc":
        n = formats.read_nlc(text, source=args.file)
        rep.verdict("nlc decoding", validate_nlc(n, need_poset()))
    elif args.kind == "split":
        if not args.nlc:
            raise SystemExit("verify split needs --nlc")
        n = formats.read_nlc(_read(args.nlc), source=args.nlc)
        s = formats.read_split(text, source=args.file)
        rep.verdict("split covers inner nodes", s.is_valid_for(n.tree))
        lt = cross_labeling(n, comparable=p.comparable if p is not None else None)
        rep.verdict("forward Ramseyan split", is_forward_ramseyan(lt, s)[0])
    elif args.kind == "witness":
        w = formats.read_witness(text, source=args.file)
        q = need_poset()
        if w.kind == "standard":
            rep.verdict("standard example", check_standard_subposet(q, w.get("x"), w.get("y")))
        else:
            rep.verdict("Kelly conditions", check_kelly_conditions(q, w.get("a"), w.get("b"),
                                                                   w.get("c"), w.get("d")))
    elif args.kind == "realizer":
        r = formats.read_realizer(text, source=args.file)
        rep.count("orders", r.b)
        rep.verdict("round trip", formats.write_realizer(r) == text)
        rep.verdict("Boolean realizer", verify_realizer(need_poset(), r))
    sys.stdout.write(rep.render())
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="nlcdim", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a poset file")
    g.add_argument("kind", choices=["standard", "kelly", "random-cover"])
    g.add_argument("k", type=int, nargs="?", help="size parameter (elements for random-cover)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--width", type=int, default=1, help="treewidth parameter for random-cover")
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("pipeline", help="decompose, bound the dimension, build a realizer")
    pl.add_argument("poset")
    pl.add_argument("--width", type=int, default=3, help="largest treewidth to search")
    pl.add_argument("--ell", type=int, default=3, help="chain length of the dimension lemma")
    pl.add_argument("--route", choices=["treedec", "nlc"], default="treedec")
    pl.add_argument("--guard", type=int, help="element guard for exhaustive searches")
    pl.add_argument("--seed", type=int, default=0, help="unused; all steps are deterministic")
    pl.add_argument("--out", help="directory for artifacts and report.txt")
    pl.set_defaults(func=cmd_pipeline)

    o = sub.add_parser("oracle", help="exact dimension, standard example number, realizer check")
    o.add_argument("poset")
    o.add_argument("--width", type=int, default=3)
    o.add_argument("--guard", type=int)
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="re-validate a serialized artifact")
    v.add_argument("kind", choices=["poset", "treedec", "nlc", "split", "witness", "realizer"])
    v.add_argument("file")
    v.add_argument("--poset")
    v.add_argument("--nlc", help="decomposition the split refers to")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except NlcDimError as exc:
        module = type(exc).__module__.rsplit(".", 1)[-1]
        origin = getattr(exc, "__traceback__", None)
        while origin is not None and origin.tb_next is not None:
            origin = origin.tb_next
        if origin is not None:
            module = Path(origin.tb_frame.f_code.co_filename).stem
        sys.stderr.write(f"error [{module}] {type(exc).__name__}: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
