"""Lattices of triples ordered through a rho-function table.

A :class:`RhoTable` holds non-negative integer rows ``rho(a, b)(n)`` for
levels ``a < b < levels`` and ``n < window``; ``rho(a, a)`` is identically 0.
The points are ``ZERO`` and triples ``(level, n, m)`` with

    (a, n, m) <= (b, n', m')  iff  a <= b, n <= n', m <= m', rho(a, b)(n) <= m'.

Boxes bound the three coordinates and are materialised as
:class:`~ladders.core_poset.FinitePoset` objects for brute-force checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import core_poset as cp
from .core_poset import FinitePoset, Report
from .errors import ParseError, PreconditionError, WindowError

ZERO = "0"


class KPoint(NamedTuple):
    level: int
    n: int
    m: int

    def __str__(self):
        return f"({self.level},{self.n},{self.m})"


class RhoTable:
    '''Rows of a rho-function on ``levels`` levels, truncated to ``window`` arguments.'''

    def __init__(self, levels: int, window: int, values):
        if levels < 1 or window < 1:
            raise PreconditionError("levels and window must be positive")
        v = np.array(values, dtype=np.int64, copy=True)
        if v.shape != (levels, levels, window):
            raise PreconditionError(f"values have shape {v.shape}")
        if (v < 0).any():
            raise PreconditionError("rho values must be non-negative")
        for a in range(levels):
            for b in range(a + 1):
                v[a, b] = 0
        v.setflags(write=False)
        self.levels, self.window, self.values = levels, window, v

    @classmethod
    def from_rows(cls, levels, window, rows: dict):
        v = np.zeros((levels, levels, window), dtype=np.int64)
        for a in range(levels):
            for b in range(a + 1, levels):
                if (a, b) not in rows:
                    raise PreconditionError(f"missing row ({a},{b})")
                row = list(rows[(a, b)])
                if len(row) != window:
                    raise PreconditionError(f"row ({a},{b}) has length {len(row)}, expected {window}")
                v[a, b] = row
        return cls(levels, window, v)

    def rho(self, a, b, n) -> int:
        if n >= self.window or n < 0:
            raise WindowError(f"argument {n} outside window {self.window}")
        if a >= self.levels or b >= self.levels:
            raise WindowError(f"level outside 0..{self.levels - 1}")
        return 0 if a >= b else int(self.values[a, b, n])

    def row(self, a, b) -> tuple:
        return tuple(int(v) for v in self.values[a, b]) if a < b else (0,) * self.window

    def rows(self) -> dict:
        return {(a, b): self.row(a, b) for a in range(self.levels) for b in range(a + 1, self.levels)}

    @property
    def max_value(self) -> int:
        return int(self.values.max()) if self.values.size else 0

    def with_entry(self, a, b, n, value) -> "RhoTable":
        v = self.values.copy()
        v[a, b, n] = value
        return RhoTable(self.levels, self.window, v)

    def truncate(self, levels) -> "RhoTable":
        return RhoTable(levels, self.window, self.values[:levels, :levels])

    def __eq__(self, other):
        return (isinstance(other, RhoTable) and self.levels == other.levels
                and self.window == other.window and (self.values == other.values).all())

    def __hash__(self):
        return hash((self.levels, self.window, self.values.tobytes()))

    def __repr__(self):
        return f"RhoTable(levels={self.levels}, window={self.window})"


def table_to_doc(t: RhoTable) -> dict:
    return {"levels": t.levels, "window": t.window,
            "rows": {f"{a},{b}": list(r) for (a, b), r in t.rows().items()}}


def table_from_doc(doc) -> RhoTable:
    try:
        levels, window = int(doc["levels"]), int(doc["window"])
        rows = {}
        for key, row in doc["rows"].items():
            a, b = (int(s) for s in key.split(","))
            rows[(a, b)] = [int(v) for v in row]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"malformed rho table: {exc}") from None
    return RhoTable.from_rows(levels, window, rows)


def _check_point(t: RhoTable, x):
    if x == ZERO:
        return
    if not isinstance(x, tuple) or len(x) != 3:
        raise PreconditionError(f"not a point: {x!r}")
    a, n, m = x
    if not 0 <= a < t.levels:
        raise WindowError(f"level {a} outside 0..{t.levels - 1}")
    if not 0 <= n < t.window:
        raise WindowError(f"argument {n} outside window {t.window}")
    if m < 0:
        raise PreconditionError("negative coordinate")


def leq_rho(t: RhoTable, x, y) -> bool:
    _check_point(t, x)
    _check_point(t, y)
    if x == ZERO:
        return True
    if y == ZERO:
        return False
    (a, n, m), (b, n2, m2) = x, y
    return a <= b and n <= n2 and m <= m2 and t.rho(a, b, n) <= m2


def join_rho(t: RhoTable, x, y):
    '''Closed-form join; valid when the table satisfies the axioms.'''
    _check_point(t, x)
    _check_point(t, y)
    if x == ZERO:
        return KPoint(*y) if y != ZERO else ZERO
    if y == ZERO:
        return KPoint(*x)
    if x[0] > y[0]:
        x, y = y, x
    (a, n, m), (b, n2, m2) = x, y
    return KPoint(b, max(n, n2), max(m, m2, t.rho(a, b, n)))


def pi_rho(t: RhoTable, alpha: int, x):
    '''Greatest element of the ideal of levels below ``alpha`` under x.'''
    _check_point(t, x)
    if x == ZERO:
        return ZERO
    b, n, m = x
    if b < alpha:
        return KPoint(*x)
    below = [mu for mu in range(alpha) if t.rho(mu, b, 0) <= m]
    if not below:
        return ZERO
    nu = max(below)
    n2 = max(k for k in range(n + 1) if t.rho(nu, b, k) <= m)
    return KPoint(nu, n2, m)


def check_rho_axioms(t: RhoTable) -> Report:
    '''Monotone rows and the three triangle inequalities, within the window.

    Witness tuples are ``(axiom, a, b, c, n)`` with ``c`` omitted for rows.
    '''
    R = t.values
    N, A = t.window, t.levels
    for a in range(A):
        for b in range(a + 1, A):
            for n in range(N - 1):
                if R[a, b, n] > R[a, b, n + 1]:
                    return Report.fail("rho axioms", "rho1", (a, b, n))
    for a in range(A):
        for b in range(a + 1, A):
            for c in range(b + 1, A):
                for n in range(N):
                    ab, ac, bc = R[a, b, n], R[a, c, n], R[b, c, n]
                    if ac > max(ab, bc):
                        return Report.fail("rho axioms", "rho2", (a, b, c, n))
                    if ab > max(ac, bc):
                        return Report.fail("rho axioms", "rho3", (a, b, c, n))
                    if bc > max(ac, R[b, c, 0]):
                        return Report.fail("rho axioms", "rho4", (a, b, c, n))
    return Report.ok("rho axioms")


def check_lower_finiteness(t: RhoTable, bound: int) -> Report:
    '''Count profile of the levels below each level reachable with value at most n.'''
    profile = {}
    for a in range(t.levels):
        profile[a] = [sum(1 for nu in range(a) if t.rho(nu, a, 0) <= n) for n in range(bound + 1)]
        if any(c > a for c in profile[a]):
            return Report.fail("lower finiteness", "count", (a,), profile=profile)
    return Report.ok("lower finiteness", profile=profile)


# boxes

@dataclass(frozen=True)
class Box:
    levels: int
    window: int
    height: int

    def points(self):
        yield ZERO
        for a in range(self.levels):
            for n in range(self.window):
                for m in range(self.height):
                    yield KPoint(a, n, m)


def default_box(t: RhoTable, extra=2) -> Box:
    return Box(t.levels, t.window, t.max_value + t.window + extra)


def _box_check(t: RhoTable, box: Box):
    if box.levels > t.levels or box.window > t.window or box.levels < 1 or box.height < 1:
        raise WindowError(f"box {box} does not fit the table")


def _coords(box: Box):
    g = np.stack(np.meshgrid(np.arange(box.levels), np.arange(box.window),
                             np.arange(box.height), indexing="ij"), axis=-1).reshape(-1, 3)
    return g[:, 0], g[:, 1], g[:, 2]


def box_poset(t: RhoTable, box: Box) -> FinitePoset:
    '''The box as a finite poset, ZERO first, then triples in lexicographic order.'''
    _box_check(t, box)
    return _box_poset(t, box)


@lru_cache(maxsize=64)
def _box_poset(t: RhoTable, box: Box) -> FinitePoset:
    lv, nn, mm = _coords(box)
    R = t.values
    le = ((lv[:, None] <= lv[None, :]) & (nn[:, None] <= nn[None, :])
          & (mm[:, None] <= mm[None, :]) & (R[lv[:, None], lv[None, :], nn[:, None]] <= mm[None, :]))
    k = le.shape[0]
    full = np.zeros((k + 1, k + 1), dtype=bool)
    full[0, :] = True
    full[1:, 1:] = le
    return FinitePoset(list(box.points()), full)


def box_interior(t: RhoTable, box: Box) -> list:
    '''Points whose closed-form join with every box point stays inside the box.'''
    _box_check(t, box)
    lv, nn, mm = _coords(box)
    R = t.values
    lo = np.minimum(lv[:, None], lv[None, :])
    hi = np.maximum(lv[:, None], lv[None, :])
    n_lo = np.where(lv[:, None] <= lv[None, :], nn[:, None], nn[None, :])
    jm = np.maximum(np.maximum(mm[:, None], mm[None, :]), R[lo, hi, n_lo])
    ok = (jm < box.height).all(axis=1)
    pts = list(box.points())
    return [ZERO] + [pts[i + 1] for i in np.flatnonzero(ok)]


def check_box_semilattice(t: RhoTable, box: Box | None = None) -> Report:
    '''Brute force: the box order is a partial order and interior pairs have joins in the box.'''
    box = box or default_box(t)
    p = box_poset(t, box)
    v = cp.validate_poset(p)
    if not v:
        return Report("box join-semilattice", False, v.witnesses)
    r = cp.is_join_semilattice(p, within=box_interior(t, box))
    return Report("box join-semilattice", r.passed, r.witnesses)


def check_3ladder_box(t: RhoTable, box: Box | None = None) -> Report:
    box = box or default_box(t)
    p = box_poset(t, box)
    r = cp.is_n_ladder(p, 3, within=box_interior(t, box))
    return Report("box 3-ladder", r.passed, r.witnesses, r.details)


# construction

@dataclass(frozen=True)
class BuildChoices:
    '''Free choices of the level-by-level construction.

    ``deltas`` maps a stage to a finite non-decreasing list of earlier levels
    ending in stage - 1 (continued constantly afterwards).  With
    ``dominate=True`` the bounding function at each stage also dominates the
    rows between chosen levels pointwise; otherwise only the lag indices
    absorb them.
    '''

    deltas: dict = field(default_factory=dict)
    dominate: bool = True


def _delta_seq(delta, choices):
    seq = choices.deltas.get(delta)
    if seq is None:
        return list(range(delta))
    seq = [int(s) for s in seq]
    if not seq or seq[-1] != delta - 1 or any(s < 0 or s >= delta for s in seq) \
            or any(a > b for a, b in zip(seq, seq[1:])):
        raise PreconditionError(f"sequence for stage {delta} must be non-decreasing below it and end at {delta - 1}")
    return seq


def build_rho(levels: int, f_family: Sequence[Sequence[int]], choices: BuildChoices | None = None) -> RhoTable:
    '''Build a table level by level from bounding functions ``f_family[d]``.

    Each new row ``rho(a, d)`` dominates ``f_family[d]``; ``f_family[0]`` is
    ignored.  The window is the common length of the functions.
    '''
    choices = choices or BuildChoices()
    if levels < 1:
        raise PreconditionError("need at least one level")
    if len(f_family) < levels:
        raise PreconditionError(f"need {levels} functions, got {len(f_family)}")
    window = len(f_family[0]) if levels == 1 else len(f_family[1])
    f = []
    for d, fd in enumerate(f_family[:levels]):
        fd = [int(v) for v in fd]
        if d and len(fd) != window:
            raise PreconditionError("functions must share one window")
        if any(v < 0 for v in fd):
            raise PreconditionError("functions must be non-negative")
        f.append(fd)
    if window < 1:
        raise PreconditionError("window must be positive")
    R = np.zeros((levels, levels, window), dtype=np.int64)
    for d in range(1, levels):
        seq = _delta_seq(d, choices)
        L = len(seq)
        pairs = [(seq[m], seq[n]) for n in range(L) for m in range(n)]
        fstar = np.array(f[d], dtype=np.int64)
        if choices.dominate:
            for a, b in pairs:
                fstar = np.maximum(fstar, R[a, b])
        fstar = np.maximum.accumulate(fstar)
        lag = []
        for n in range(L):
            bad = [k for k in range(window) if any(R[seq[m], seq[n], k] > fstar[k] for m in range(n))]
            k_n = bad[-1] + 1 if bad else 0
            k_n = min(k_n, window - 1)
            lag.append(max(k_n, lag[-1]) if lag else k_n)
        for a in range(d):
            na = next(n for n in range(L) if a <= seq[n])
            base = np.maximum(np.maximum(fstar, na), R[a, seq[na]])
            extra = max((R[seq[m], seq[na], lag[na]] for m in range(na)), default=0)
            R[a, d] = np.maximum(base, extra)
    return RhoTable(levels, window, R)


# witnesses

def nonmax_witness(t: RhoTable, f: Sequence[int], box: Box):
    '''The subset ZERO plus (a, n, f(n)) for rho(0, a)(n) <= f(n), with its checks.

    Returns ``(C, report)``.  Cofinality is checked for the box points that
    have room: some n' >= n in the window with max(m, rho(0, a)(n')) <= f(n').
    '''
    if not check_rho_axioms(t):
        raise PreconditionError("table fails the axioms")
    _box_check(t, box)
    f = [int(v) for v in f]
    if any(a > b for a, b in zip(f, f[1:])):
        raise PreconditionError("f must be non-decreasing")
    if len(f) < box.window:
        raise WindowError("f is shorter than the box window")
    A, N, M = box.levels, box.window, box.height
    C = [ZERO] + [KPoint(a, n, f[n]) for a in range(A) for n in range(N)
                  if t.rho(0, a, n) <= f[n] and f[n] < M]
    p = box_poset(t, box)
    targets = [x for x in p.elements if x == ZERO or any(
        max(x.m, t.rho(0, x.level, k)) <= f[k] < M for k in range(x.n, N))]
    sub = p.restrict(C)
    covers = Report.ok("cover analysis")
    for c in C[1:]:
        a, n, _ = c
        prev = [k for k in range(n) if KPoint(a, k, f[k]) in sub]
        expect = set()
        if prev:
            expect.add(KPoint(a, prev[-1], f[prev[-1]]))
        expect.add(pi_rho(t, a, c))
        if not set(cp.lower_covers(sub, c)) <= expect:
            covers = Report.fail("cover analysis", "unexpected cover", (c,))
            break
    report = Report.combine("nonmaximality witness", [
        cp.is_meet_subsemilattice(p, C),
        cp.is_n_ladder(sub, 2),
        cp.is_cofinal(p, C, within=targets),
        covers,
    ], size=len(C), targets=len(targets))
    return C, report


def projected_row_counts(t: RhoTable, C, gamma: int, box: Box) -> dict:
    """For each n in the window, how many m < box height have pi_gamma(gamma, n, m) in C.

    Projections to ZERO are not counted; only finitely many m reach it.
    Diagnostic only.  In the unbounded order at most one row can project into a
    cofinal 2-ladder infinitely often; a box only shows which rows keep growing
    with the height, so no verdict is attached.
    """
    _box_check(t, box)
    if not 0 <= gamma < t.levels:
        raise WindowError(f"level {gamma} outside the table")
    C = set(C) - {ZERO}
    return {n: sum(1 for m in range(box.height) if pi_rho(t, gamma, KPoint(gamma, n, m)) in C)
            for n in range(box.window)}


def breadth3_marker(t: RhoTable) -> Report:
    '''Three points none of which lies below the join of the other two.'''
    if t.levels < 2 or t.window < 2:
        raise WindowError("need at least two levels and a window of two")
    if not check_rho_axioms(t):
        raise PreconditionError("table fails the axioms")
    pts = marker_points(t)
    for i, x in enumerate(pts):
        y, z = (pts[j] for j in range(3) if j != i)
        if leq_rho(t, x, join_rho(t, y, z)):
            return Report.fail("breadth-3 marker", "below join", (x, y, z))
    return Report.ok("breadth-3 marker", points=pts)


def marker_points(t: RhoTable):
    return (KPoint(0, 0, t.rho(0, 1, 1) + 1), KPoint(0, 1, 0), KPoint(1, 0, 0))


def random_table(rng, max_levels=4, max_window=4, max_value=5, sorted_rows=0.8) -> RhoTable:
    A = rng.randint(1, max_levels)
    N = rng.randint(1, max_window)
    rows = {}
    for a in range(A):
        for b in range(a + 1, A):
            row = [rng.randint(0, max_value) for _ in range(N)]
            rows[(a, b)] = sorted(row) if rng.random() < sorted_rows else row
    return RhoTable.from_rows(A, N, rows)


def random_f_family(rng, levels, window, max_value=4):
    fam = []
    for _ in range(levels):
        v, row = 0, []
        for _ in range(window):
            v += rng.randint(0, max_value // 2 + 1)
            row.append(v)
        fam.append(row)
    return fam
