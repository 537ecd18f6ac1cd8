"""Level-by-level construction over the D-order, with a tree of subsets.

D is the set of pairs ``(n, b)`` with ``b`` in {BOT, 0, 1}.  For distinct
pairs with ``n <= m``, ``(n, a)`` precedes ``(m, b)`` iff ``a = BOT`` or
``n < m``.  Each level is the window of D below ``(W, BOT)``.

Level 0 is a copy of the window; level ``a >= 1`` sits over level ``a - 1``
so that an earlier point lies below ``(a, n, b)`` iff it lies below
``(a - 1, n, BOT)``.

Alongside the levels grows a tree whose nodes carry finite subsets Gamma of
the box.  Nodes of level ``a >= 1`` are pairs ``<n, m>`` (Cantor code) with
``n < W`` a node of level ``a - 1`` and ``m < 2W``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import core_poset as cp
from .core_poset import FinitePoset, Report
from .errors import ParseError, PreconditionError, WindowError

BOT = -1


class DPoint(NamedTuple):
    level: int
    n: int
    b: int

    def __str__(self):
        return f"({self.level},{self.n},{'⊥' if self.b == BOT else self.b})"


def parse_point(s: str) -> DPoint:
    try:
        a, n, b = s.strip("()").split(",")
        return DPoint(int(a), int(n), BOT if b == "⊥" else int(b))
    except ValueError:
        raise ParseError(f"not a point label: {s!r}") from None


def d_leq(x, y) -> bool:
    '''Order of D on ``(n, b)`` pairs.'''
    if x == y:
        return True
    return x[0] <= y[0] and (x[1] == BOT or x[0] < y[0])


def d_window(width: int) -> list:
    return [(n, b) for n in range(width) for b in (BOT, 0, 1)] + [(width, BOT)]


def level_points(level, width) -> list:
    return [DPoint(level, n, b) for n, b in d_window(width)]


def pair(n: int, m: int) -> int:
    return (n + m) * (n + m + 1) // 2 + m


def unpair(k: int):
    s = 0
    while (s + 1) * (s + 2) // 2 <= k:
        s += 1
    m = k - s * (s + 1) // 2
    return s - m, m


@dataclass
class DiamondState:
    width: int
    levels: int
    poset: FinitePoset
    nodes: dict = field(default_factory=dict)  # level -> sorted node ids
    parent: dict = field(default_factory=dict)  # (level, id) -> parent id
    gamma: dict = field(default_factory=dict)  # (level, id) -> frozenset
    seeding: str = "level 0: Gamma(n) = bottoms from n up plus (0, n, n mod 2)"

    def ideal(self, a) -> list:
        return [x for x in self.poset.elements if x.level < a]

    def top(self, a):
        return DPoint(a - 1, self.width, BOT)

    def pi(self, a, x):
        if x.level < a:
            return x
        if a == 0:
            return None
        p = self.poset
        below = [y for y in p.pick(p.leq[:, p.idx(x)]) if y.level < a]
        return p.greatest(below)

    def children(self, level, node) -> list:
        return [k for k in self.nodes.get(level + 1, []) if self.parent[(level + 1, k)] == node]

    def all_nodes(self):
        return [(a, k) for a in sorted(self.nodes) for k in self.nodes[a]]


def box_poset(width: int, levels: int) -> FinitePoset:
    if width < 1 or levels < 1:
        raise PreconditionError("width and levels must be positive")
    pts = [x for a in range(levels) for x in level_points(a, width)]
    k = len(pts)
    leq = np.zeros((k, k), dtype=bool)
    pos = {x: i for i, x in enumerate(pts)}
    for j, y in enumerate(pts):
        for i, x in enumerate(pts):
            if x.level == y.level:
                leq[i, j] = d_leq(x[1:], y[1:])
        if y.level > 0:
            anchor = pos[DPoint(y.level - 1, y.n, BOT)]
            lower = np.array([x.level < y.level for x in pts])
            leq[lower, j] = leq[lower, anchor]
    return FinitePoset(pts, leq)


def seed_level0(width: int) -> dict:
    return {(0, n): frozenset([DPoint(0, m, BOT) for m in range(n, width + 1)] + [DPoint(0, n, n % 2)])
            for n in range(width)}


def threshold(gamma, level, width):
    '''Least h with every (level, h', BOT), h <= h' <= width, in gamma; width + 1 if none.'''
    h = width + 1
    while h > 0 and DPoint(level, h - 1, BOT) in gamma:
        h -= 1
    return h


def build_diamond(stages: int, width: int, seed: int = 0) -> DiamondState:
    '''Level 0 plus ``stages`` successor levels, with the tree and its subsets.'''
    from .generators import substream

    if stages < 0:
        raise PreconditionError("stages must be non-negative")
    levels = stages + 1
    state = DiamondState(width, levels, box_poset(width, levels))
    state.nodes[0] = list(range(width))
    state.gamma.update(seed_level0(width))
    for a in range(1, levels):
        rng = substream(seed, f"diamond/stage{a}")
        ids = []
        for n in range(width):
            if n not in state.nodes[a - 1]:
                continue
            g = state.gamma[(a - 1, n)]
            h = threshold(g, a - 1, width)
            targets = [(k, i) for k in range(h, width) for i in (0, 1)]
            if not targets:
                raise WindowError(f"width {width} leaves no targets above row {h} at level {a}")
            rng.shuffle(targets)
            base = g | {DPoint(a, k, BOT) for k in range(h, width + 1)}
            for m in range(2 * width):
                k = pair(n, m)
                t = targets[m % len(targets)]
                state.parent[(a, k)] = n
                state.gamma[(a, k)] = frozenset(base | {DPoint(a, *t)})
                ids.append(k)
        state.nodes[a] = sorted(ids)
    return state


# checks

def _check_lattice(state):
    return cp.is_lattice(state.poset)


def _check_ideals(state):
    for a in range(1, state.levels + 1):
        r = cp.is_ideal(state.poset, state.ideal(a))
        if not r:
            return Report("(2) ideals", False, r.witnesses)
    return Report.ok("(2) ideals")


def _check_levels(state):
    p = state.poset
    for a in range(state.levels):
        pts = level_points(a, state.width)
        for x in pts:
            for y in pts:
                if p.le(x, y) != d_leq(x[1:], y[1:]):
                    return Report.fail("(3) levels ordered like D", "order", (x, y))
    return Report.ok("(3) levels ordered like D")


def _check_below_bottoms(state):
    p = state.poset
    for y in p.elements:
        for x in state.ideal(y.level):
            if p.le(x, y) and not p.le(x, DPoint(y.level, y.n, BOT)):
                return Report.fail("(4) below the row bottom", "order", (x, y))
    return Report.ok("(4) below the row bottom")


def _check_tree(state):
    title = "(6) tree levels"
    if state.nodes.get(0) != list(range(state.width)):
        return Report.fail(title, "level 0", (0,))
    for a in range(1, state.levels):
        want = sorted(pair(n, m) for n in range(state.width) if n in state.nodes[a - 1]
                      for m in range(2 * state.width))
        if state.nodes.get(a) != want:
            return Report.fail(title, "level", (a,))
        for k in state.nodes[a]:
            if state.parent.get((a, k)) != unpair(k)[0]:
                return Report.fail(title, "parent", (a, k))
    return Report.ok(title)


def _gamma_parts(state, a, k):
    '''Checks (8)-(11) for one node; returns a failing Report or None.'''
    g = state.gamma[(a, k)]
    for z in g:
        if z.level > a:
            return Report.fail("(8) inside the next ideal", "point", ((a, k), z))
    for z in g:
        if z.level > 0 and state.pi(z.level, z) not in g:
            return Report.fail("(9) closed under projections", "point", ((a, k), z))
    for lv in range(a + 1):
        if threshold(g, lv, state.width) >= state.width:
            return Report.fail("(10) bottoms from some row on", "level", ((a, k), lv))
    for z in g:
        if z.b == 0 and DPoint(z.level, z.n, 1) in g:
            return Report.fail("(11) one of each pair", "row", ((a, k), z))
    return None


def _check_gamma(state):
    for a, k in state.all_nodes():
        bad = _gamma_parts(state, a, k)
        if bad is not None:
            return Report("(8)-(11) node subsets", False, bad.witnesses, {"property": bad.title})
    return Report.ok("(8)-(11) node subsets")


def _check_monotone(state):
    for a, k in state.all_nodes():
        if a == 0:
            continue
        if not state.gamma[(a - 1, state.parent[(a, k)])] <= state.gamma[(a, k)]:
            return Report.fail("(12) monotone along edges", "edge", ((a - 1, state.parent[(a, k)]), (a, k)))
    return Report.ok("(12) monotone along edges")


def descendants(state, level, node, target):
    frontier = [node]
    for lv in range(level, target):
        frontier = [c for x in frontier for c in state.children(lv, x)]
    return frontier


def _check_surjective(state):
    '''Every node below a successor level reaches each late enough row point there.'''
    W = state.width
    for a in range(1, state.levels):
        for lv in range(a):
            for k in state.nodes[lv]:
                desc = descendants(state, lv, k, a)
                if not desc:
                    continue
                covered = set().union(*(state.gamma[(a, d)] for d in desc))
                n0 = W
                while n0 > 0 and all(DPoint(a, n0 - 1, i) in covered for i in (0, 1)):
                    n0 -= 1
                if n0 >= W:
                    return Report.fail("(13) rows reached", "node", ((lv, k), a))
    return Report.ok("(13) rows reached")


def check_properties(state) -> Report:
    parts = [_check_lattice(state), _check_ideals(state), _check_levels(state),
             _check_below_bottoms(state), _check_tree(state), _check_gamma(state),
             _check_monotone(state), _check_surjective(state)]
    return Report.combine("diamond construction", parts,
                          not_evaluated=["(5)", "(7)"], seeding=state.seeding,
                          size=len(state.poset), nodes=len(state.gamma))


def lower_cover_profile(state) -> Report:
    p = state.poset
    for x in p.elements:
        covers = set(cp.lower_covers(p, x))
        if x.b != BOT:
            if covers != {DPoint(x.level, x.n, BOT)}:
                return Report.fail("cover profile", "single cover", (x, *covers))
        else:
            allowed = {DPoint(x.level, x.n - 1, 0), DPoint(x.level, x.n - 1, 1)}
            if x.level > 0:
                allowed.add(state.pi(x.level, x))
            if not covers <= allowed:
                return Report.fail("cover profile", "covers", (x, *covers))
    r = cp.is_n_ladder(p, 3)
    return Report("cover profile", r.passed, r.witnesses, r.details)


def gamma_ladder_check(state, level, node) -> Report:
    '''Gamma of a node is a cofinal meet-closed 2-ladder in the next ideal.'''
    p = state.poset
    g = state.gamma[(level, node)]
    C = [x for x in p.elements if x in g]
    sub = p.restrict(C)
    covers = Report.ok("cover analysis")
    for z in C:
        same = [y for y in C if y.level == z.level and y != z and p.le(y, z)]
        expect = {sub.greatest(same)} if same else set()
        if z.level > 0:
            expect.add(state.pi(z.level, z))
        if not set(cp.lower_covers(sub, z)) <= expect:
            covers = Report.fail("cover analysis", "unexpected cover", (z,))
            break
    return Report.combine(f"node ({level},{node})", [
        cp.is_meet_subsemilattice(p, C),
        cp.is_n_ladder(sub, 2),
        cp.is_cofinal(p, C, within=state.ideal(level + 1)),
        covers,
    ])


def leaves(state) -> list:
    return [(a, k) for a, k in state.all_nodes() if not state.children(a, k)]


def branch_union(state, level, node) -> frozenset:
    '''Union of the subsets along the path from the root to this node.'''
    out = set(state.gamma[(level, node)])
    while level > 0:
        node = state.parent[(level, node)]
        level -= 1
        out |= state.gamma[(level, node)]
    return frozenset(out)


def noncofinal_levels(state, C) -> list:
    '''Levels a >= 1 where the part of K_a outside C misses some point below (a-1, W-1, BOT).'''
    p = state.poset
    C = set(C)
    out = []
    for a in range(1, state.levels + 1):
        ka = state.ideal(a)
        rest = [q for q in ka if q not in C]
        core = p.down(DPoint(a - 1, state.width - 1, BOT))
        if any(not any(p.le(x, q) for q in rest) for x in core):
            out.append(a)
    return out


def state_to_doc(state) -> dict:
    from .io import poset_to_doc

    return {
        "width": state.width,
        "levels": state.levels,
        "seeding": state.seeding,
        "nodes": [{"level": a, "id": k,
                   "parent": state.parent.get((a, k)),
                   "gamma": sorted(str(x) for x in state.gamma[(a, k)])}
                  for a, k in state.all_nodes()],
        "poset": poset_to_doc(state.poset),
    }


def state_from_doc(doc) -> DiamondState:
    try:
        width, levels = int(doc["width"]), int(doc["levels"])
        state = DiamondState(width, levels, box_poset(width, levels))
        for rec in doc["nodes"]:
            a, k = int(rec["level"]), int(rec["id"])
            state.nodes.setdefault(a, []).append(k)
            if rec.get("parent") is not None:
                state.parent[(a, k)] = int(rec["parent"])
            state.gamma[(a, k)] = frozenset(parse_point(s) for s in rec["gamma"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed diamond state: {exc}") from None
    for a in state.nodes:
        state.nodes[a].sort()
    for g in state.gamma.values():
        for x in g:
            if x not in state.poset:
                raise ParseError(f"point {x} outside the box")
    return state
