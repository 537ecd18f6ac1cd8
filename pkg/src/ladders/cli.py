"""Command-line front end.

Checks print their verdicts and exit 0 once they have run; ``--strict``
turns a failing verdict into exit status 1.  Parse errors exit 2,
precondition violations 3 and internal invariant breaches 4.
"""
from __future__ import annotations

import argparse
import sys

from . import core_poset as cp
from . import io
from .core_poset import Report
from .errors import InvariantError, ParseError, PreconditionError
from .generators import substream


def _ints(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def _names(text: str) -> list:
    return [v.strip() for v in text.split(",") if v.strip()]


class Run:
    '''Collects output text and the reports whose verdicts decide --strict.'''

    def __init__(self, args):
        self.args = args
        self.chunks = []
        self.reports = []

    def text(self, s: str):
        self.chunks.append(s if s.endswith("\n") else s + "\n")

    def report(self, r: Report):
        self.reports.append(r)
        if getattr(self.args, "report_format", "text") == "json":
            self.text(io.dumps(r.to_dict()))
        else:
            self.text("\n".join(r.lines()))

    def doc(self, d):
        self.text(io.dumps(d))

    def finish(self) -> int:
        out = "".join(self.chunks)
        if self.args.out:
            with open(self.args.out, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        if self.args.strict and not all(self.reports):
            return 1
        return 0


# poset commands

def cmd_check(run, a):
    p = io.read_poset(a.poset)
    parts = []
    if a.lattice:
        r = cp.is_lattice(p)
        run.reports.append(r)
        parts.append(f"lattice: {r.verdict}")
    if a.ladder is not None:
        r = cp.is_n_ladder(p, a.ladder)
        run.reports.append(r)
        parts.append(f"{a.ladder}-ladder: {r.verdict}")
        for w in r.witnesses:
            parts.append(f"witness {w.claim}: {' '.join(cp.label(e) for e in w.elements)}")
    if a.breadth:
        parts.append(f"breadth: {cp.breadth(p)}")
    if not parts:
        r = cp.validate_poset(p)
        run.reports.append(r)
        parts.append(f"partial order: {r.verdict}")
    run.text(", ".join(parts))


def cmd_extend(run, a):
    from .extension import extend_by_cofinal_copy

    p = io.read_poset(a.poset)
    ext = extend_by_cofinal_copy(p, _names(a.cofinal), a.n)
    _emit_poset(run, ext.poset, a.format)


def cmd_export(run, a):
    _emit_poset(run, io.read_poset(a.poset), a.format)


def _emit_poset(run, p, fmt):
    run.text(io.poset_to_dot(p) if fmt == "dot" else io.dumps(io.poset_to_doc(p)))


# rho

def _box(t, height):
    from .rho_lattice import Box, default_box

    return default_box(t) if height is None else Box(t.levels, t.window, height)


def cmd_rho_check(run, a):
    from .rho_lattice import check_box_semilattice, check_rho_axioms, table_from_doc

    t = table_from_doc(io.read_json(a.table))
    ax = check_rho_axioms(t)
    box = check_box_semilattice(t, _box(t, a.height))
    if bool(ax) != bool(box):
        raise InvariantError("axiom verdict and box verdict disagree")
    run.report(ax)
    run.report(box)


def cmd_rho_build(run, a):
    from .rho_lattice import BuildChoices, build_rho, random_f_family, table_to_doc

    fam = random_f_family(substream(a.seed, "rho/family"), a.levels, a.window)
    t = build_rho(a.levels, fam, BuildChoices(dominate=not a.no_dominate))
    run.doc(table_to_doc(t))


def cmd_rho_witness(run, a):
    from .rho_lattice import nonmax_witness, projected_row_counts, table_from_doc

    t = table_from_doc(io.read_json(a.table))
    if a.f:
        f = _ints(a.f)
    else:
        # pointwise above every row from level 0
        f = [max(t.rho(0, b, k) for b in range(t.levels)) for k in range(t.window)]
    height = a.height if a.height is not None else max(f) + 2
    from .rho_lattice import Box

    box = Box(t.levels, t.window, height)
    C, r = nonmax_witness(t, f, box)
    run.report(r)
    run.text("subset: " + " ".join(cp.label(x) for x in C))
    counts = projected_row_counts(t, C, t.levels - 1, box)
    run.text(f"rows projecting into the subset from level {t.levels - 1}: "
             + ", ".join(f"{n}:{c}" for n, c in counts.items()))


def cmd_rho_export_box(run, a):
    from .rho_lattice import box_poset, table_from_doc

    t = table_from_doc(io.read_json(a.table))
    _emit_poset(run, box_poset(t, _box(t, a.height)), a.format)


# club and diamond

def cmd_club_build(run, a):
    from . import club_ladder as club

    avoid = None if a.target_parity is None else club.parity_avoid(a.target_parity)
    state = club.build_club(_ints(a.width_schedule), seed=a.seed, base_width=a.base_width, avoid=avoid)
    if a.format == "json":
        run.doc(club.state_to_doc(state))
    elif a.format == "dot":
        _emit_poset(run, state.poset, "dot")
    else:
        run.report(club.check_club_properties(state))


def cmd_club_check(run, a):
    from . import club_ladder as club

    run.report(club.check_club_properties(club.state_from_doc(io.read_json(a.state))))


def cmd_diamond_build(run, a):
    from . import diamond_ladder as dl

    state = dl.build_diamond(a.stages, a.width, seed=a.seed)
    if a.format == "json":
        run.doc(dl.state_to_doc(state))
    elif a.format == "dot":
        _emit_poset(run, state.poset, "dot")
    else:
        run.report(dl.check_properties(state))


def cmd_diamond_check(run, a):
    from . import diamond_ladder as dl

    state = dl.state_from_doc(io.read_json(a.state))
    run.report(dl.check_properties(state))
    run.report(dl.lower_cover_profile(state))
    if a.gamma:
        run.report(Report.combine("node subsets",
                                  [dl.gamma_ladder_check(state, lv, k) for lv, k in state.all_nodes()]))


def cmd_diamond_branch(run, a):
    from . import diamond_ladder as dl

    state = dl.state_from_doc(io.read_json(a.state))
    level, node = _ints(a.leaf)
    if (level, node) not in state.gamma:
        raise PreconditionError(f"no node ({level},{node})")
    C = dl.branch_union(state, level, node)
    p = state.poset
    pts = sorted(C, key=p.idx)
    run.report(cp.is_meet_subsemilattice(p, pts))
    run.text(f"lower covers: at most {cp.max_lower_covers(p.restrict(pts))}")
    bad = dl.noncofinal_levels(state, C)
    run.text("noncofinal levels: " + (" ".join(str(v) for v in bad) or "none"))


# cohen

def _family(path):
    from .cohen_skeleton import family_from_doc

    return family_from_doc(io.read_json(path))


def _condition(path):
    from .cohen_skeleton import condition_from_doc

    return condition_from_doc(io.read_json(path))


def cmd_cohen_generate(run, a):
    from .cohen_skeleton import family_to_doc, random_family

    run.doc(family_to_doc(random_family(substream(a.seed, "cohen/family"), a.n, a.max_size)))


def cmd_cohen_validate(run, a):
    from .cohen_skeleton import validate_family

    run.report(validate_family(_family(a.family)))


def cmd_cohen_cp(run, a):
    from .cohen_skeleton import c_of

    fam = _family(a.family)
    C = c_of(fam, _condition(a.condition))
    run.text(" ".join(sorted(cp.label(x) for x in C)))


def cmd_cohen_density(run, a):
    from .cohen_skeleton import condition_to_doc, density_extend

    fam = _family(a.family)
    q, y = density_extend(fam, _condition(a.condition), a.x)
    run.doc({"assignments": condition_to_doc(q), "y": cp.label(y)})


def cmd_cohen_filter(run, a):
    from .cohen_skeleton import filter_union_checks

    fam = _family(a.family)
    run.report(filter_union_checks(fam, [_condition(c) for c in a.conditions]))


# selftest

def cmd_selftest(run, a):
    from . import club_ladder as club
    from . import diamond_ladder as dl
    from .cohen_skeleton import random_family, validate_family
    from .extension import extend_by_cofinal_copy
    from .generators import m3
    from .kernels import BACKEND
    from .rho_lattice import (BuildChoices, breadth3_marker, build_rho, check_box_semilattice,
                              check_rho_axioms, random_f_family)

    run.text(f"kernels: {BACKEND}")
    L = m3()
    run.report(cp.is_n_ladder(L, 3))
    ext = extend_by_cofinal_copy(L, ["1"], 3)
    run.report(Report.combine("extension", [cp.is_n_ladder(ext.poset, 3),
                                            cp.is_proper_ideal(ext.poset, L.elements)]))
    t = build_rho(3, random_f_family(substream(a.seed, "selftest/rho"), 3, 3), BuildChoices())
    run.report(Report.combine("rho", [check_rho_axioms(t), check_box_semilattice(t), breadth3_marker(t)]))
    run.report(club.check_club_properties(club.build_club([1, 1], seed=a.seed)))
    run.report(dl.check_properties(dl.build_diamond(1, 3, seed=a.seed)))
    run.report(validate_family(random_family(substream(a.seed, "selftest/cohen"), 2)))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--strict", action="store_true", help="exit 1 when a verdict fails")
    common.add_argument("--report-format", choices=["text", "json"], default="text")

    ap = argparse.ArgumentParser(prog="ladders", description="Finite n-ladder toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(parent, name, fn, help_text):
        s = parent.add_parser(name, parents=[common], help=help_text)
        s.set_defaults(fn=fn)
        return s

    s = add(sub, "check", cmd_check, "check order, lattice, ladder and breadth properties")
    s.add_argument("poset")
    s.add_argument("--ladder", type=int)
    s.add_argument("--breadth", action="store_true")
    s.add_argument("--lattice", action="store_true")

    s = add(sub, "extend", cmd_extend, "add a copy of a cofinal meet-subsemilattice on top")
    s.add_argument("poset")
    s.add_argument("--cofinal", required=True, help="comma-separated element ids")
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--format", choices=["json", "dot"], default="json")

    s = add(sub, "export", cmd_export, "re-export a poset canonically")
    s.add_argument("poset")
    s.add_argument("--format", choices=["json", "dot"], default="dot")

    rho = sub.add_parser("rho", help="tables on the K-order").add_subparsers(dest="rho_cmd", required=True)
    s = add(rho, "check", cmd_rho_check, "axioms and the box semilattice")
    s.add_argument("table")
    s.add_argument("--height", type=int)
    s = add(rho, "build", cmd_rho_build, "build a table from seeded bounding functions")
    s.add_argument("--levels", type=int, required=True)
    s.add_argument("--window", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-dominate", action="store_true")
    s = add(rho, "witness", cmd_rho_witness, "cofinal 2-ladder below a function")
    s.add_argument("table")
    s.add_argument("--f", help="comma-separated values; default is the pointwise maximum of the rows")
    s.add_argument("--height", type=int)
    s = add(rho, "export-box", cmd_rho_export_box, "export the finite box")
    s.add_argument("table")
    s.add_argument("--height", type=int)
    s.add_argument("--format", choices=["json", "dot"], default="dot")

    club = sub.add_parser("club", help="breadth-two construction").add_subparsers(dest="club_cmd", required=True)
    s = add(club, "build", cmd_club_build, "build and check")
    s.add_argument("--width-schedule", required=True, help="comma-separated widths of the attached levels")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--base-width", type=int)
    s.add_argument("--target-parity", type=int, choices=[0, 1])
    s.add_argument("--format", choices=["text", "json", "dot"], default="text")
    s = add(club, "check", cmd_club_check, "replay and check a saved state")
    s.add_argument("state")

    dia = sub.add_parser("diamond", help="tree-driven construction").add_subparsers(dest="diamond_cmd", required=True)
    s = add(dia, "build", cmd_diamond_build, "build and check")
    s.add_argument("--stages", type=int, required=True)
    s.add_argument("--width", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--format", choices=["text", "json", "dot"], default="text")
    s = add(dia, "check", cmd_diamond_check, "check a saved state")
    s.add_argument("state")
    s.add_argument("--gamma", action="store_true", help="also check every node subset")
    s = add(dia, "branch", cmd_diamond_branch, "union along a branch")
    s.add_argument("state")
    s.add_argument("--leaf", required=True, help="LEVEL,ID")

    coh = sub.add_parser("cohen", help="ideal families and conditions").add_subparsers(dest="cohen_cmd", required=True)
    s = add(coh, "generate", cmd_cohen_generate, "seeded toy family")
    s.add_argument("-n", type=int, default=2)
    s.add_argument("--max-size", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s = add(coh, "validate", cmd_cohen_validate, "check the family conditions")
    s.add_argument("family")
    s = add(coh, "cp", cmd_cohen_cp, "subset determined by a condition")
    s.add_argument("family")
    s.add_argument("condition")
    s = add(coh, "density", cmd_cohen_density, "extend a condition above an element")
    s.add_argument("family")
    s.add_argument("condition")
    s.add_argument("x")
    s = add(coh, "filter", cmd_cohen_filter, "checks on the union over compatible conditions")
    s.add_argument("family")
    s.add_argument("conditions", nargs="+")

    s = add(sub, "selftest", cmd_selftest, "quick run of every module")
    s.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    run = Run(args)
    try:
        args.fn(run, args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 4
    return run.finish()


if __name__ == "__main__":
    sys.exit(main())
