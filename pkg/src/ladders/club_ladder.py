"""Level-by-level construction of a breadth-two 3-ladder over the E-order.

E is the set of pairs ``(n, i)`` with ``i`` in {0, 1}, where ``(n, i)``
precedes ``(m, j)`` iff ``n < m`` and ``j = 1``.  Each level is the finite
window of E below ``(W, 1)``, so it has a greatest element and every built
box is a finite lattice.

Level 0 sits directly above ``ZERO``.  Level ``a >= 1`` is attached through a
strictly increasing chain ``x_0 < ... < x_{2W+1}`` in the box built so far,
ending at its top: an earlier point lies below ``(a, n, i)`` iff it lies below
``x_{2n+i}``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from . import core_poset as cp
from .core_poset import FinitePoset, Report
from .errors import InfeasibleError, ParseError, PreconditionError

ZERO = "0"


class ClubPoint(NamedTuple):
    level: int
    n: int
    i: int

    def __str__(self):
        return f"({self.level},{self.n},{self.i})"


def e_leq(a, b) -> bool:
    return a == b or (a[0] < b[0] and b[1] == 1)


def e_window(width: int) -> list:
    '''The pairs below (width, 1) in E.'''
    return [(n, i) for n in range(width) for i in (0, 1)] + [(width, 1)]


def level_points(level: int, width: int) -> list:
    return [ClubPoint(level, n, i) for n, i in e_window(width)]


def parse_point(s: str):
    if s == ZERO:
        return ZERO
    try:
        a, n, i = (int(v) for v in s.strip("()").split(","))
    except ValueError:
        raise ParseError(f"not a point label: {s!r}") from None
    return ClubPoint(a, n, i)


@dataclass(frozen=True)
class ClubState:
    widths: tuple
    sequences: tuple  # sequences[a - 1] attaches level a
    poset: FinitePoset

    @property
    def levels(self) -> int:
        return len(self.widths)

    def level(self, a) -> list:
        return level_points(a, self.widths[a])

    def ideal(self, a) -> list:
        '''ZERO and all points on levels below a.'''
        return [x for x in self.poset.elements if x == ZERO or x.level < a]

    def top(self, a=None):
        '''Greatest point of the levels below a (default: all levels).'''
        a = self.levels if a is None else a
        return ZERO if a == 0 else ClubPoint(a - 1, self.widths[a - 1], 1)

    def pi(self, a, x):
        '''Greatest point of the levels below a that lies under x.'''
        if x == ZERO or x.level < a:
            return x
        if a == 0:
            return ZERO
        p = self.poset
        m = p.leq[:, p.idx(x)].copy()
        for j, y in enumerate(p.elements):
            if y != ZERO and y.level >= a:
                m[j] = False
        return p.greatest(p.pick(m))


def base_state(width: int) -> ClubState:
    if width < 0:
        raise PreconditionError("width must be non-negative")
    pts = [ZERO] + level_points(0, width)
    k = len(pts)
    leq = np.zeros((k, k), dtype=bool)
    leq[0, :] = True
    for a in range(1, k):
        for b in range(1, k):
            leq[a, b] = e_leq(pts[a][1:], pts[b][1:])
    return ClubState((width,), (), FinitePoset(pts, leq))


def _admissible_steps(state: ClubState, avoid):
    '''Candidate elements and the valid predecessor relation between them.'''
    p = state.poset
    cand = [x for x in p.elements if x != ZERO and not (avoid and avoid(x))]
    proj = {}
    ok = {}
    for y in cand:
        for x in cand:
            if x != y and p.le(x, y):
                key = (x.level + 1, y)
                if key not in proj:
                    proj[key] = state.pi(x.level + 1, y)
                ok[(x, y)] = proj[key] != x
    return cand, ok


def check_sequence(state: ClubState, seq) -> Report:
    '''Strictly increasing, avoids ZERO, satisfies the projection condition, ends at the top.'''
    title = "stage sequence"
    p = state.poset
    for x in seq:
        if x not in p or x == ZERO:
            return Report.fail(title, "element of the box other than ZERO", (x,))
    for x, y in zip(seq, seq[1:]):
        if not p.lt(x, y):
            return Report.fail(title, "strictly increasing", (x, y))
        if state.pi(x.level + 1, y) == x:
            return Report.fail(title, "projection", (x, y))
    if seq and seq[-1] != state.top():
        return Report.fail(title, "cofinal", (seq[-1],))
    return Report.ok(title)


def max_sequence_length(state: ClubState, avoid=None) -> int:
    return _longest(state, avoid)[0]


def _longest(state, avoid):
    cand, ok = _admissible_steps(state, avoid)
    p = state.poset
    order = cp.linear_extension(p.restrict(cand)) if cand else []
    best = {}
    for y in order:
        best[y] = 1 + max((best[x] for x in best if ok.get((x, y))), default=0)
    top = state.top()
    return best.get(top, 0), best, ok


def choose_stage_sequence(state: ClubState, length: int, avoid: Callable | None = None,
                          rng: random.Random | None = None) -> list:
    '''A chain of the given length for attaching the next level.

    Elements where ``avoid`` holds are never used.  Ties are broken by ``rng``
    (default: first in box order).
    '''
    if length == 0:
        return []
    if length < 0:
        raise PreconditionError("length must be non-negative")
    longest, best, ok = _longest(state, avoid)
    if longest < length:
        raise InfeasibleError(
            f"no admissible chain of length {length}; the longest has {longest}", longest)
    cur = state.top()
    seq = [cur]
    need = length - 1
    while need:
        opts = [x for x in best if ok.get((x, cur)) and best[x] >= need]
        cur = rng.choice(opts) if rng else opts[0]
        seq.append(cur)
        need -= 1
    return seq[::-1]


def extend_stage(state: ClubState, seq, width: int) -> ClubState:
    '''Attach a new level of the given width through ``seq``.'''
    if len(seq) != 2 * width + 2:
        raise PreconditionError(f"width {width} needs a sequence of length {2 * width + 2}, got {len(seq)}")
    r = check_sequence(state, seq)
    if not r:
        raise PreconditionError(f"sequence rejected: {r.witnesses[0]}")
    a = state.levels
    old = state.poset
    new = level_points(a, width)
    k, m = len(old), len(new)
    leq = np.zeros((k + m, k + m), dtype=bool)
    leq[:k, :k] = old.leq
    for j, z in enumerate(new):
        leq[:k, k + j] = old.leq[:, old.idx(seq[2 * z.n + z.i])]
        for jj, w in enumerate(new):
            leq[k + j, k + jj] = e_leq(z[1:], w[1:])
    poset = FinitePoset(list(old.elements) + new, leq)
    return ClubState(state.widths + (width,), state.sequences + (tuple(seq),), poset)


def build_club(widths, seed: int = 0, base_width: int | None = None, avoid=None) -> ClubState:
    '''Base level plus one attached level per entry of ``widths``.

    The base width defaults to ``2 * max(widths) + 1``, the least value for
    which a chain of every required length runs through level 0.
    '''
    from .generators import substream

    widths = [int(w) for w in widths]
    if base_width is None:
        base_width = 2 * max(widths, default=0) + 1
    state = base_state(base_width)
    for a, w in enumerate(widths, start=1):
        rng = substream(seed, f"club/stage{a}")
        seq = choose_stage_sequence(state, 2 * w + 2, avoid=avoid, rng=rng)
        state = extend_stage(state, seq, w)
    return state


# checks

def check_lattice(state) -> Report:
    return cp.is_lattice(state.poset)


def check_ideals(state) -> Report:
    for a in range(1, state.levels + 1):
        r = cp.is_ideal(state.poset, state.ideal(a))
        if not r:
            return Report("levels below form ideals", False, r.witnesses)
    return Report.ok("levels below form ideals")


def check_levels_like_e(state) -> Report:
    p = state.poset
    for a in range(state.levels):
        pts = state.level(a)
        for x in pts:
            for y in pts:
                if p.le(x, y) != e_leq(x[1:], y[1:]):
                    return Report.fail("levels ordered like E", "order", (x, y))
    return Report.ok("levels ordered like E")


def check_projection_injective(state) -> Report:
    for b in range(1, state.levels):
        for a in range(b, state.levels):
            seen = {}
            for x in state.level(a):
                y = state.pi(b, x)
                if y in seen:
                    return Report.fail("projections injective", "collision", (b, seen[y], x))
                seen[y] = x
    return Report.ok("projections injective")


def check_even_rows_eventually_above(state) -> Report:
    '''Box-relative form of domination by the rows (a, n, 0).

    For every level a >= 1 and every x below it, the rows n < W with
    x <= (a, n, 0) form a final segment of the window.  Points below no
    such row are counted as the fringe.
    '''
    p = state.poset
    fringe = {}
    for a in range(1, state.levels):
        w = state.widths[a]
        rows = [ClubPoint(a, n, 0) for n in range(w)]
        fringe[a] = 0
        for x in state.ideal(a):
            hits = [p.le(x, r) for r in rows]
            if not any(hits):
                fringe[a] += 1
                continue
            first = hits.index(True)
            if not all(hits[first:]):
                return Report.fail("even rows eventually above", "final segment", (x, rows[first]))
    return Report.ok("even rows eventually above", fringe=fringe)


def check_breadth2(state) -> Report:
    p = state.poset
    bad = cp.breadth_witness(p, 2)
    if bad is not None:
        return Report.fail("breadth 2", "three-element subset", bad)
    return Report.ok("breadth 2")


def check_cover_profile(state) -> Report:
    '''(a, n, 0) has exactly the cover pi_a; (a, n, 1) has covers among (a, n-1, *) and pi_a.'''
    p = state.poset
    for x in p.elements:
        if x == ZERO:
            continue
        covers = set(cp.lower_covers(p, x))
        pi = state.pi(x.level, x)
        if x.i == 0:
            if covers != {pi}:
                return Report.fail("cover profile", "single cover", (x, *covers))
        else:
            allowed = {pi, ClubPoint(x.level, x.n - 1, 0), ClubPoint(x.level, x.n - 1, 1)}
            if not covers <= allowed or len(covers) > 3:
                return Report.fail("cover profile", "covers", (x, *covers))
    return Report.ok("cover profile")


def check_club_properties(state) -> Report:
    lattice = check_lattice(state)
    if not lattice:
        # the remaining checks need joins
        return Report.combine("club construction", [lattice, check_levels_like_e(state)],
                              size=len(state.poset))
    parts = [lattice, check_ideals(state), check_levels_like_e(state),
             check_projection_injective(state), check_even_rows_eventually_above(state),
             cp.is_n_ladder(state.poset, 3), check_breadth2(state), check_cover_profile(state)]
    for a, seq in enumerate(state.sequences, start=1):
        sub = ClubState(state.widths[:a], state.sequences[:a - 1], state.poset.restrict(state.ideal(a)))
        r = check_sequence(sub, list(seq))
        parts.append(Report(f"sequence {a}", r.passed, r.witnesses))
    return Report.combine("club construction", parts, size=len(state.poset))


def level_membership(state, C) -> dict:
    '''For each level, how many rows of C use i = 0 and how many use i = 1.'''
    C = set(C)
    out = {}
    for a in range(state.levels):
        pts = [x for x in state.level(a) if x in C]
        out[a] = (sum(1 for x in pts if x.i == 0), sum(1 for x in pts if x.i == 1))
    return out


def parity_avoid(parity: int):
    '''Avoid points whose second coordinate differs from ``parity``.'''
    return lambda x: x.i != parity


def state_to_doc(state: ClubState) -> dict:
    from .io import poset_to_doc

    return {"widths": list(state.widths),
            "sequences": [[str(x) for x in s] for s in state.sequences],
            "poset": poset_to_doc(state.poset)}


def state_from_doc(doc) -> ClubState:
    try:
        widths = [int(w) for w in doc["widths"]]
        seqs = [[parse_point(s) for s in seq] for seq in doc["sequences"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed club state: {exc}") from None
    if len(seqs) != len(widths) - 1:
        raise ParseError("need one sequence per attached level")
    state = base_state(widths[0])
    for w, seq in zip(widths[1:], seqs):
        state = extend_stage(state, seq, w)
    return state
