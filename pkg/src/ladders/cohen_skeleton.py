"""Finite skeleton of the forcing construction: ideal families and conditions.

An :class:`IdealFamily` assigns an ideal ``I[s]`` of a finite lattice L to
every node ``s`` of an index tree of sequences of length at most n.  Nodes
are tuples of ints ordered lexicographically (a prefix comes first).  For a
node ``s`` of length n its block is

    J[s] = I[s] minus the union of I[t] over t <*lex s,

where ``t <*lex s`` means t is lexicographically smaller and not a prefix.

A condition is a finite map ``(node, slot) -> element`` with values in the
block of the node.  :func:`c_of` computes the subset C_p it determines.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Mapping

from . import core_poset as cp
from .core_poset import FinitePoset, Report
from .errors import IncompatibleError, ParseError, PreconditionError


def lex_star_less(a: tuple, b: tuple) -> bool:
    return a < b and b[:len(a)] != a


@dataclass(frozen=True)
class IndexTree:
    '''Sequences of length at most ``n``; ``branching[s]`` children below each shorter node.'''

    n: int
    branching: Mapping

    @cached_property
    def nodes(self) -> tuple:
        out, stack = [], [()]
        while stack:
            s = stack.pop()
            out.append(s)
            if len(s) < self.n:
                b = self.branching.get(s, 0)
                if b < 1:
                    raise PreconditionError(f"node {s} needs at least one child")
                stack.extend(s + (k,) for k in range(b))
        return tuple(sorted(out))

    @cached_property
    def maximal(self) -> tuple:
        return tuple(s for s in self.nodes if len(s) == self.n)

    def children(self, s) -> list:
        return [s + (k,) for k in range(self.branching.get(s, 0))] if len(s) < self.n else []


@dataclass
class IdealFamily:
    base: FinitePoset
    tree: IndexTree
    ideals: dict  # node -> frozenset

    @property
    def n(self):
        return self.tree.n

    def star_union(self, s) -> frozenset:
        out = set()
        for t in self.tree.nodes:
            if lex_star_less(t, s):
                out |= self.ideals[t]
        return frozenset(out)

    @cached_property
    def blocks(self) -> dict:
        return {s: self.ideals[s] - self.star_union(s) for s in self.tree.maximal}

    @cached_property
    def block_of(self) -> dict:
        '''Element -> the maximal node whose block contains it.'''
        out = {}
        for s in self.tree.maximal:
            for x in self.blocks[s]:
                out.setdefault(x, s)
        return out

    def pi(self, s, x):
        return cp.pi(self.base, self.ideals[s], x)


def validate_family(fam: IdealFamily) -> Report:
    '''Checks (1)-(3), (5), (6), the finite form of (7), and that blocks partition L.

    (4) concerns limit positions, which do not occur among finite sequences.
    '''
    L, T, I = fam.base, fam.tree, fam.ideals
    parts = []

    def part(title, bad):
        parts.append(Report.ok(title) if bad is None else Report.fail(title, bad[0], bad[1]))

    missing = [s for s in T.nodes if s not in I]
    if missing:
        return Report.fail("ideal family", "node without ideal", (missing[0],))
    bad = None
    for s in T.nodes:
        if not cp.is_ideal(L, I[s]):
            bad = ("ideal", (s,))
            break
    part("ideals", bad)
    part("(1) root", None if I[()] == frozenset(L.elements) else ("root", ((),)))
    bad = None
    for s in T.nodes:
        ch = T.children(s)
        if ch and frozenset().union(*(I[c] for c in ch)) != I[s]:
            bad = ("union", (s,))
            break
    part("(2) union of children", bad)
    bad = None
    for s in T.nodes:
        ch = T.children(s)
        for a, b in zip(ch, ch[1:]):
            if not I[a] <= I[b]:
                bad = ("increasing", (a, b))
                break
        if bad:
            break
    part("(3) increasing children", bad)
    bad = None
    for s in T.nodes:
        if I[s] <= fam.star_union(s):
            bad = ("new element", (s,))
            break
    part("(5) new elements", bad)
    bad = None
    for s in T.nodes:
        for g in T.maximal:
            if g < s and (I[s] & fam.blocks[g]) and not I[g] <= I[s]:
                bad = ("containment", (s, g))
                break
        if bad:
            break
    part("(6) block containment", bad)
    bad = None
    for s in T.nodes:
        ch = T.children(s)
        for c in ch[:-1]:
            if not len(I[c]) < len(I[s]):
                bad = ("smaller", (s, c))
                break
        if bad:
            break
    part("(7) finite sizes", bad)
    seen = {}
    bad = None
    for s in T.maximal:
        for x in fam.blocks[s]:
            if x in seen:
                bad = ("disjoint", (x, seen[x], s))
                break
            seen[x] = s
    if bad is None and set(seen) != set(L.elements):
        bad = ("cover", tuple(x for x in L.elements if x not in seen)[:1])
    part("blocks partition", bad)
    return Report.combine("ideal family", parts, not_evaluated=["(4)"])


# conditions

def check_condition(fam: IdealFamily, p: Mapping) -> None:
    for (s, m), x in p.items():
        if s not in fam.blocks:
            raise PreconditionError(f"{s} is not a node of length {fam.n}")
        if m < 0:
            raise PreconditionError("slots are non-negative")
        if x not in fam.blocks[s]:
            raise PreconditionError(f"{cp.label(x)} is not in the block of {s}")


def c_of(fam: IdealFamily, p: Mapping) -> frozenset:
    '''The subset determined by a condition, by recursion along the blocks in lex order.'''
    check_condition(fam, p)
    L = fam.base
    C = set()
    others = [t for t in fam.tree.nodes]
    for s in fam.tree.maximal:
        earlier = [t for t in others if lex_star_less(t, s)]
        slots = {m: x for (t, m), x in p.items() if t == s}
        for x in fam.blocks[s]:
            ok = False
            for m, v in slots.items():
                if v != x:
                    continue
                if all(k in slots and L.le(slots[k], x) for k in range(m)):
                    ok = True
                    break
            if ok and all(fam.pi(t, x) in C for t in earlier):
                C.add(x)
    return frozenset(C)


def compatible(p: Mapping, q: Mapping) -> bool:
    return all(q[k] == v for k, v in p.items() if k in q)


def extends(p: Mapping, q: Mapping) -> bool:
    '''p extends q: every assignment of q is in p.'''
    return all(k in p and p[k] == v for k, v in q.items())


def fill_gaps(fam: IdealFamily, p: Mapping) -> dict:
    '''Fill every unused slot below a used one with the least element of the block.'''
    out = dict(p)
    order = {x: i for i, x in enumerate(cp.linear_extension(fam.base))}
    for s in {t for t, _ in p}:
        top = max(m for t, m in p if t == s)
        fill = min(fam.blocks[s], key=order.__getitem__)
        for k in range(top):
            out.setdefault((s, k), fill)
    return out


def density_extend(fam: IdealFamily, p: Mapping, x):
    '''Extend p to q with an element y >= x in C_q; returns ``(q, y)``.'''
    check_condition(fam, p)
    L = fam.base
    if x not in L:
        raise PreconditionError(f"unknown element {x!r}")
    p1 = fill_gaps(fam, p)
    y = cp.join_all(L, [x, *p1.values()])
    R = sorted({fam.block_of[z] for z in L.down(y)})
    q = dict(p1)
    for s in R:
        m = 0
        while (s, m) in p1:
            m += 1
        q[(s, m)] = fam.pi(s, y)
    return q, y


def filter_union_checks(fam: IdealFamily, conditions) -> Report:
    '''Meet closure, the (n+1) cover bound and monotonicity for the union of the C_p.'''
    conditions = [dict(c) for c in conditions]
    for i, p in enumerate(conditions):
        for q in conditions[i + 1:]:
            if not compatible(p, q):
                raise IncompatibleError("conditions are not pairwise compatible")
    L = fam.base
    cs = [c_of(fam, p) for p in conditions]
    CG = frozenset().union(*cs) if cs else frozenset()
    parts = []
    mono = Report.ok("monotone")
    for i, p in enumerate(conditions):
        for j, q in enumerate(conditions):
            if i != j and extends(p, q) and not cs[j] <= cs[i]:
                mono = Report.fail("monotone", "C_q inside C_p", (i, j))
    parts.append(mono)
    if CG:
        parts.append(cp.is_meet_subsemilattice(L, CG))
        sub = L.restrict(CG)
        title = f"at most {fam.n + 1} lower covers"
        worst = max(sub.elements, key=lambda x: len(cp.lower_covers(sub, x)))
        covers = cp.lower_covers(sub, worst)
        if len(covers) > fam.n + 1:
            parts.append(Report.fail(title, "lower covers", (worst, *covers)))
        else:
            parts.append(Report.ok(title, max_covers=len(covers)))
        parts.append(_cover_sets(fam, CG, sub))
    return Report.combine("filter union", parts, size=len(CG))


def _cover_sets(fam, CG, sub):
    '''Everything in C_G below x lies under one of at most n+1 named elements.'''
    L = fam.base
    for x in CG:
        s = fam.block_of[x]
        same = [c for c in CG if fam.block_of[c] == s and L.lt(c, x)]
        S = set()
        if same:
            S.add(L.greatest(same))
        for i in range(fam.n):
            if s[i] > 0:
                S.add(fam.pi(s[:i] + (s[i] - 1,), x))
        if len(S) > fam.n + 1 or not S <= CG:
            return Report.fail("cover sets", "set", (x,))
        for y in CG:
            if L.lt(y, x) and not any(L.le(y, z) for z in S):
                return Report.fail("cover sets", "uncovered", (x, y))
    return Report.ok("cover sets")


# generation

def generate_family(rng: random.Random, n: int, base: FinitePoset, max_branch: int = 3,
                    close: bool = True):
    '''Grow ideals node by node in lex order; None when an attempt gets stuck.

    Each non-last child is generated from the previous sibling plus an element
    new for it, then closed under the containment requirement against earlier
    blocks (skipped with ``close=False``).  A child equal to its parent ends
    the sibling list.
    '''
    L = base
    ideals = {(): frozenset(L.elements)}
    branching = {}
    order = list(L.elements)

    def star_union(s):
        out = set()
        for t, I in ideals.items():
            if lex_star_less(t, s):
                out |= I
        return out

    def blocks_before(s):
        out = {}
        for t in ideals:
            if len(t) == n and t < s:
                out[t] = ideals[t] - star_union(t)
        return out

    def grow(s):
        if len(s) == n:
            return True
        parent = ideals[s]
        want = rng.randint(1, max_branch)
        prev = frozenset()
        k = 0
        while True:
            c = s + (k,)
            U = star_union(c)
            fresh = [z for z in order if z in parent and z not in U and z not in prev]
            if not fresh:
                return False
            if k == want - 1:
                I = parent
            else:
                z = rng.choice(fresh)
                I = cp.ideal_generated(L, list(prev) + [z])
                while close:
                    extra = set()
                    for t, J in blocks_before(c).items():
                        if I & J and not ideals[t] <= I:
                            extra |= ideals[t]
                    if not extra:
                        break
                    I = cp.ideal_generated(L, list(I | extra))
                if not I <= parent:
                    return False
            ideals[c] = frozenset(I)
            if not grow(c):
                return False
            prev = ideals[c]
            k += 1
            if I == parent:
                branching[s] = k
                return True

    if not grow(()):
        return None
    return IdealFamily(L, IndexTree(n, dict(branching)), ideals)


def random_family(rng: random.Random, n: int, max_size: int = 10, min_size: int = 5,
                  min_blocks: int = 2, tries: int = 500):
    '''A validated family on a random lattice, retrying until one passes.

    Lattices smaller than ``min_size`` and families with fewer than
    ``min_blocks`` maximal nodes are skipped as uninformative.
    '''
    from .generators import random_lattice

    for _ in range(tries):
        L = random_lattice(rng, max_size)
        if len(L) < min_size:
            continue
        fam = generate_family(rng, n, L)
        if fam is not None and len(fam.tree.maximal) >= min_blocks and validate_family(fam):
            return fam
    raise PreconditionError("no valid family found")


# serialisation

def family_to_doc(fam: IdealFamily) -> dict:
    from .io import poset_to_doc

    return {"n": fam.n, "base": poset_to_doc(fam.base),
            "nodes": [{"node": list(s), "ideal": sorted(cp.label(x) for x in fam.ideals[s])}
                      for s in fam.tree.nodes]}


def family_from_doc(doc) -> IdealFamily:
    from .io import poset_from_doc

    try:
        n = int(doc["n"])
        base = poset_from_doc(doc["base"])
        ideals = {tuple(int(v) for v in rec["node"]): frozenset(rec["ideal"]) for rec in doc["nodes"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed family: {exc}") from None
    for I in ideals.values():
        for x in I:
            if x not in base:
                raise ParseError(f"unknown element {x!r}")
    branching = {}
    for s in ideals:
        if s:
            branching[s[:-1]] = max(branching.get(s[:-1], 0), s[-1] + 1)
    tree = IndexTree(n, branching)
    if set(tree.nodes) != set(ideals):
        raise ParseError("node list is not a tree of the given depth")
    return IdealFamily(base, tree, ideals)


def condition_to_doc(p: Mapping) -> list:
    return [{"node": list(s), "slot": m, "value": cp.label(x)} for (s, m), x in sorted(p.items())]


def condition_from_doc(doc) -> dict:
    try:
        items = doc["assignments"] if isinstance(doc, dict) else doc
        return {(tuple(int(v) for v in a["node"]), int(a["slot"])): a["value"] for a in items}
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed condition: {exc}") from None
