"""Finite posets, lattice operations and the ladder/breadth predicates.

A :class:`FinitePoset` stores its elements in a fixed order together with
the full order relation as an immutable boolean matrix.  Elements are
arbitrary hashable ids; the JSON form uses their string labels.

Every predicate returns a :class:`Report` whose failures carry witnesses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import combinations
from typing import Any, Callable, Hashable, Iterable, Sequence

import numpy as np

from . import kernels
from .errors import NotALatticeError, PreconditionError, UnknownElementError


def label(x) -> str:
    return x if isinstance(x, str) else str(x)


@dataclass(frozen=True)
class Witness:
    claim: str
    elements: tuple

    def __str__(self):
        return f"{self.claim}: {', '.join(label(e) for e in self.elements)}"


@dataclass
class Report:
    """Verdict of a check; a failing report always has at least one witness."""

    title: str
    passed: bool
    witnesses: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.passed and not self.witnesses:
            raise ValueError("a failing report needs a witness")

    def __bool__(self):
        return self.passed

    @classmethod
    def ok(cls, title, **details):
        return cls(title, True, [], details)

    @classmethod
    def fail(cls, title, claim, elements, **details):
        return cls(title, False, [Witness(claim, tuple(elements))], details)

    @classmethod
    def combine(cls, title, parts, **details):
        '''Passes iff every part passes; witnesses are concatenated.'''
        parts = list(parts)
        wit = [w for p in parts for w in p.witnesses]
        details.setdefault("parts", {p.title: p.passed for p in parts})
        return cls(title, all(p.passed for p in parts), wit, details)

    @property
    def verdict(self):
        return "pass" if self.passed else "fail"

    def lines(self):
        out = [f"{self.title}: {self.verdict}"]
        out.extend(f"  witness {w}" for w in self.witnesses)
        return out

    def to_dict(self):
        return {
            "title": self.title,
            "verdict": self.verdict,
            "witnesses": [{"claim": w.claim, "elements": [label(e) for e in w.elements]}
                          for w in self.witnesses],
        }


class FinitePoset:
    '''Finite partially ordered set given by its full order matrix.

    ``leq[i, j]`` is True iff ``elements[i] <= elements[j]``.  The matrix is
    not assumed to be a partial order; use :func:`validate_poset`.
    '''

    def __init__(self, elements: Sequence[Hashable], leq):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise PreconditionError("duplicate element ids")
        m = np.array(leq, dtype=bool, copy=True)
        n = len(self.elements)
        if m.shape != (n, n):
            raise PreconditionError(f"order matrix has shape {m.shape}, expected {(n, n)}")
        m.setflags(write=False)
        self.leq = m

    @classmethod
    def from_pairs(cls, elements, pairs, kind="leq"):
        '''Build from ``(x, y)`` pairs meaning x <= y, or covers when kind="covers".

        Both kinds are closed reflexively and transitively.
        '''
        if kind not in ("leq", "covers"):
            raise PreconditionError(f"unknown relation kind {kind!r}")
        elements = tuple(elements)
        idx = {x: i for i, x in enumerate(elements)}
        m = np.zeros((len(elements), len(elements)), dtype=bool)
        for x, y in pairs:
            for e in (x, y):
                if e not in idx:
                    raise UnknownElementError(e)
            m[idx[x], idx[y]] = True
        return cls(elements, kernels.transitive_closure(m))

    @classmethod
    def from_function(cls, elements, le: Callable[[Any, Any], bool]):
        elements = tuple(elements)
        m = np.array([[bool(le(x, y)) for y in elements] for x in elements], dtype=bool)
        return cls(elements, m.reshape(len(elements), len(elements)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __repr__(self):
        return f"FinitePoset({len(self)} elements)"

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownElementError(x) from None

    def le(self, x, y) -> bool:
        return bool(self.leq[self.idx(x), self.idx(y)])

    def lt(self, x, y) -> bool:
        return x != y and self.le(x, y)

    def mask(self, xs) -> np.ndarray:
        m = np.zeros(len(self), dtype=bool)
        for x in xs:
            m[self.idx(x)] = True
        return m

    def pick(self, mask) -> list:
        return [self.elements[i] for i in np.flatnonzero(mask)]

    def down(self, x) -> frozenset:
        return frozenset(self.pick(self.leq[:, self.idx(x)]))

    def up(self, x) -> frozenset:
        return frozenset(self.pick(self.leq[self.idx(x)]))

    def restrict(self, subset) -> "FinitePoset":
        '''Induced subposet on ``subset``, keeping this poset's element order.'''
        keep = np.flatnonzero(self.mask(subset))
        return FinitePoset([self.elements[i] for i in keep], self.leq[np.ix_(keep, keep)])

    @cached_property
    def order_error(self):
        return kernels.order_violation(self.leq)

    @cached_property
    def cover_matrix(self):
        return kernels.cover_matrix(self.leq)

    @cached_property
    def join_table(self):
        self.require_order()
        return kernels.join_table(self.leq)

    @cached_property
    def meet_table(self):
        self.require_order()
        return kernels.meet_table(self.leq)

    def require_order(self):
        if self.order_error is not None:
            claim, ix = self.order_error
            raise PreconditionError(
                f"not a partial order ({claim} fails at "
                f"{', '.join(label(self.elements[i]) for i in ix)})")

    def greatest(self, xs):
        '''Greatest element of ``xs`` or None.'''
        m = self.mask(xs)
        if not m.any():
            return None
        sub = self.leq[np.ix_(m, m)]
        tops = np.flatnonzero(sub.all(axis=0))
        return self.pick(m)[tops[0]] if tops.size else None

    def least(self, xs):
        m = self.mask(xs)
        if not m.any():
            return None
        sub = self.leq[np.ix_(m, m)]
        bots = np.flatnonzero(sub.all(axis=1))
        return self.pick(m)[bots[0]] if bots.size else None

    def maximal(self, xs) -> list:
        xs = list(xs)
        return [x for x in xs if not any(self.lt(x, y) for y in xs)]

    @cached_property
    def top(self):
        return self.greatest(self.elements)

    @cached_property
    def bottom(self):
        return self.least(self.elements)


def validate_poset(p: FinitePoset) -> Report:
    err = p.order_error
    if err is None:
        return Report.ok("partial order")
    claim, ix = err
    return Report.fail("partial order", claim, [p.elements[i] for i in ix])


def join(p: FinitePoset, x, y):
    '''Least upper bound of x and y, or None.'''
    k = int(p.join_table[p.idx(x), p.idx(y)])
    return None if k < 0 else p.elements[k]


def meet(p: FinitePoset, x, y):
    k = int(p.meet_table[p.idx(x), p.idx(y)])
    return None if k < 0 else p.elements[k]


def join_all(p: FinitePoset, xs):
    xs = list(xs)
    if not xs:
        raise PreconditionError("join of an empty set")

    def step(a, b):
        c = join(p, a, b)
        if c is None:
            raise NotALatticeError(f"{label(a)} and {label(b)} have no join")
        return c

    return reduce(step, xs)


def meet_all(p: FinitePoset, xs):
    xs = list(xs)
    if not xs:
        raise PreconditionError("meet of an empty set")

    def step(a, b):
        c = meet(p, a, b)
        if c is None:
            raise NotALatticeError(f"{label(a)} and {label(b)} have no meet")
        return c

    return reduce(step, xs)


def _pairs_without(table, idx):
    sub = table[np.ix_(idx, idx)]
    bad = np.argwhere(np.triu(sub < 0))
    return None if bad.size == 0 else (int(idx[bad[0][0]]), int(idx[bad[0][1]]))


def _within(p, within):
    if within is None:
        return np.arange(len(p))
    return np.flatnonzero(p.mask(within))


def is_join_semilattice(p: FinitePoset, within=None) -> Report:
    '''Every pair (from ``within`` if given) has a join in ``p``.'''
    v = validate_poset(p)
    if not v:
        return v
    bad = _pairs_without(p.join_table, _within(p, within))
    if bad is None:
        return Report.ok("join-semilattice")
    return Report.fail("join-semilattice", "join", [p.elements[i] for i in bad])


def is_lattice(p: FinitePoset, within=None) -> Report:
    '''Every pair (from ``within`` if given) has a join and a meet in ``p``.'''
    v = validate_poset(p)
    if not v:
        return v
    if len(p) == 0:
        return Report.fail("lattice", "nonempty", ())
    idx = _within(p, within)
    for claim, table in (("join", p.join_table), ("meet", p.meet_table)):
        bad = _pairs_without(table, idx)
        if bad is not None:
            return Report.fail("lattice", claim, [p.elements[i] for i in bad])
    return Report.ok("lattice")


def lower_covers(p: FinitePoset, x) -> list:
    return p.pick(p.cover_matrix[:, p.idx(x)])


def upper_covers(p: FinitePoset, x) -> list:
    return p.pick(p.cover_matrix[p.idx(x)])


def cover_pairs(p: FinitePoset) -> list:
    return [(p.elements[i], p.elements[j]) for i, j in np.argwhere(p.cover_matrix)]


def is_n_ladder(p: FinitePoset, n: int, within=None) -> Report:
    '''Lattice whose elements each have at most ``n`` lower covers.

    Finite posets are trivially lower finite.  With ``within`` the lattice
    and cover conditions are only required for those elements (covers are
    still taken in ``p``).
    '''
    if n < 1:
        raise PreconditionError("ladder width must be a positive integer")
    title = f"{n}-ladder"
    lat = is_lattice(p, within)
    if not lat:
        return Report(title, False, lat.witnesses, {"lattice": False})
    counts = p.cover_matrix.sum(axis=0)
    idx = _within(p, within)
    over = [i for i in idx if counts[i] > n]
    if over:
        i = over[0]
        x = p.elements[i]
        return Report.fail(title, "lower covers", [x, *lower_covers(p, x)],
                           max_covers=int(counts[idx].max()))
    return Report.ok(title, max_covers=int(counts[idx].max()) if idx.size else 0)


def max_lower_covers(p: FinitePoset) -> int:
    return int(p.cover_matrix.sum(axis=0).max()) if len(p) else 0


def breadth(p: FinitePoset, within=None) -> int:
    '''Least n such that every (n+1)-subset has an n-subset with the same join.

    Subsets range over ``within`` (default all of ``p``); their joins are taken
    in ``p`` and must exist.  A single element has breadth 1.
    '''
    idx = [int(i) for i in _within(p, within)]
    if not idx:
        raise PreconditionError("breadth of an empty poset")
    table = p.join_table
    for n in range(1, len(idx) + 1):
        try:
            bad = kernels.breadth_violation(table, idx, n)
        except ValueError:
            raise NotALatticeError("not a join-semilattice over the given elements") from None
        if bad is None:
            return n
    return len(idx)


def breadth_witness(p: FinitePoset, n: int, within=None):
    '''An (n+1)-subset none of whose n-subsets has the same join, or None.'''
    idx = [int(i) for i in _within(p, within)]
    bad = kernels.breadth_violation(p.join_table, idx, n)
    return None if bad is None else tuple(p.elements[i] for i in bad)


def breadth_by_definition(p: FinitePoset, limit: int = 16) -> int:
    '''Breadth straight from the definition, for small join-semilattices.

    For every nonempty X find the smallest Y inside X with the same join; the
    breadth is the largest such size.  Exponential, so capped at ``limit``.
    '''
    n = len(p)
    if n == 0:
        raise PreconditionError("breadth of an empty poset")
    if n > limit:
        raise PreconditionError(f"{n} elements exceeds the limit of {limit}")
    jt = p.join_table
    size = 1 << n
    joins = [-1] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        if rest == 0:
            joins[mask] = low
        else:
            j = int(jt[joins[rest], low])
            if j < 0:
                raise NotALatticeError("not a join-semilattice")
            joins[mask] = j
    best = 1
    for mask in range(1, size):
        target = joins[mask]
        smallest = bin(mask).count("1")
        sub = mask
        while sub:
            if joins[sub] == target:
                c = bin(sub).count("1")
                if c < smallest:
                    smallest = c
            sub = (sub - 1) & mask
        best = max(best, smallest)
    return best


def is_downset(p: FinitePoset, s) -> bool:
    m = p.mask(s)
    below = p.leq[:, m].any(axis=1)
    return not (below & ~m).any()


def is_ideal(p: FinitePoset, s) -> Report:
    '''Nonempty, downward closed and directed.'''
    s = list(dict.fromkeys(s))
    if not s:
        return Report.fail("ideal", "nonempty", ())
    m = p.mask(s)
    for x in s:
        i = p.idx(x)
        stray = np.flatnonzero(p.leq[:, i] & ~m)
        if stray.size:
            return Report.fail("ideal", "downward closed", [p.elements[stray[0]], x])
    sub = p.leq[np.ix_(m, m)].astype(np.int32)
    common = sub @ sub.T
    bad = np.argwhere(common == 0)
    if bad.size:
        mem = p.pick(m)
        return Report.fail("ideal", "directed", [mem[bad[0][0]], mem[bad[0][1]]])
    return Report.ok("ideal")


def is_proper_ideal(p: FinitePoset, s) -> Report:
    r = is_ideal(p, s)
    if not r:
        return Report("proper ideal", False, r.witnesses)
    if len(set(s)) == len(p):
        return Report.fail("proper ideal", "proper", ())
    return Report.ok("proper ideal")


def ideal_generated(p: FinitePoset, xs) -> frozenset:
    '''Smallest ideal containing ``xs`` in a join-semilattice.'''
    xs = list(xs)
    if not xs:
        raise PreconditionError("cannot generate an ideal from the empty set")
    m = p.mask(xs)
    top = join_all(p, p.pick(m))
    return p.down(top)


def pi(p: FinitePoset, ideal, x):
    '''Greatest element of ``ideal`` below ``x``.

    Requires the set to have a greatest element, which holds for ideals of
    lattices with a least element.
    '''
    ideal = set(ideal)
    below = [y for y in p.pick(p.leq[:, p.idx(x)]) if y in ideal]
    if not below:
        raise PreconditionError(f"no element of the ideal lies below {label(x)}")
    g = p.greatest(below)
    if g is None:
        raise PreconditionError(f"the ideal has no greatest element below {label(x)}")
    return g


def is_meet_subsemilattice(p: FinitePoset, c) -> Report:
    '''Nonempty and closed under meets taken in ``p``.'''
    c = list(dict.fromkeys(c))
    if not c:
        return Report.fail("meet-subsemilattice", "nonempty", ())
    inside = set(c)
    for x, y in combinations(c, 2):
        z = meet(p, x, y)
        if z is None or z not in inside:
            return Report.fail("meet-subsemilattice", "meet", [x, y])
    return Report.ok("meet-subsemilattice")


def is_cofinal(p: FinitePoset, c, within=None) -> Report:
    '''Every element (of ``within`` if given) lies below some member of ``c``.'''
    m = p.mask(c)
    if within is None:
        targets = np.ones(len(p), dtype=bool)
    else:
        targets = p.mask(within)
    covered = p.leq[:, m].any(axis=1)
    bad = np.flatnonzero(targets & ~covered)
    if bad.size:
        return Report.fail("cofinal", "dominated", [p.elements[bad[0]]])
    return Report.ok("cofinal")


def is_chain(p: FinitePoset, xs) -> bool:
    return all(p.le(x, y) or p.le(y, x) for x, y in combinations(list(xs), 2))


def linear_extension(p: FinitePoset) -> list:
    '''Elements sorted so that x < y implies x comes first.'''
    depth = p.leq.sum(axis=0)
    return [p.elements[i] for i in np.argsort(depth, kind="stable")]
