"""Extending a ladder by a cofinal copy, and the reverse construction.

Given an n-ladder L and a cofinal meet-subsemilattice C that is an
(n-1)-ladder, :func:`extend_by_cofinal_copy` places a copy C' of C on top of
L.  Conversely :func:`induced_cofinal_subsemilattice` recovers such a C from
any n-ladder having L as a proper ideal.
"""
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import core_poset as cp
from .core_poset import FinitePoset, Report
from .errors import PreconditionError

SUFFIX = "'"


@dataclass(frozen=True)
class Extension:
    poset: FinitePoset
    copy_of: dict  # new id -> id in C

    @property
    def new_elements(self):
        return tuple(self.copy_of)

    def phi(self, y):
        return self.copy_of[y]


def check_extension_inputs(L: FinitePoset, C, n: int) -> Report:
    '''The hypotheses of the forward direction, with witnesses.'''
    if n < 2:
        return Report.fail("extension inputs", "n >= 2", (n,))
    C = list(dict.fromkeys(C))
    parts = [
        cp.is_n_ladder(L, n),
        cp.is_cofinal(L, C),
        cp.is_meet_subsemilattice(L, C),
    ]
    if C:
        parts.append(cp.is_n_ladder(L.restrict(C), n - 1))
    else:
        parts.append(Report.fail(f"{n - 1}-ladder", "nonempty", ()))
    return Report.combine("extension inputs", parts)


def _fresh(name, taken):
    new = f"{cp.label(name)}{SUFFIX}"
    while new in taken:
        new += SUFFIX
    return new


def extend_by_cofinal_copy(L: FinitePoset, C, n: int) -> Extension:
    '''L together with a copy C' of C, each copy above the part of L below its original.

    For x in L and y in C', x <= y iff x <= phi(y); inside C' the order is
    that of C; nothing in C' is below an element of L.
    '''
    C = [c for c in L.elements if c in set(C)]
    pre = check_extension_inputs(L, C, n)
    if not pre:
        raise PreconditionError(f"extension hypotheses fail: {pre.witnesses[0]}")
    taken = {cp.label(x) for x in L.elements}
    copy_of = {}
    for c in C:
        y = _fresh(c, taken)
        taken.add(y)
        copy_of[y] = c
    k, m = len(L), len(C)
    ci = [L.idx(c) for c in C]
    leq = np.zeros((k + m, k + m), dtype=bool)
    leq[:k, :k] = L.leq
    leq[:k, k:] = L.leq[:, ci]
    leq[k:, k:] = L.leq[np.ix_(ci, ci)]
    return Extension(FinitePoset(list(L.elements) + list(copy_of), leq), copy_of)


def expected_lower_covers(ext: Extension, L: FinitePoset, C, y):
    '''Lower covers of a new element y: the copies of the covers of phi(y) in C, and phi(y).'''
    C = list(C)
    sub = L.restrict(C)
    inv = {c: z for z, c in ext.copy_of.items()}
    return {inv[c] for c in cp.lower_covers(sub, ext.phi(y))} | {ext.phi(y)}


def induced_cofinal_subsemilattice(K: FinitePoset, L, b, n: int) -> frozenset:
    '''The set of projections onto the ideal L of everything above b.'''
    L = set(L)
    if not cp.is_n_ladder(K, n):
        raise PreconditionError(f"K is not a {n}-ladder")
    r = cp.is_proper_ideal(K, L)
    if not r:
        raise PreconditionError(f"L is not a proper ideal of K: {r.witnesses[0]}")
    if b not in K or b in L:
        raise PreconditionError("b must be an element of K outside L")
    return frozenset(cp.pi(K, L, x) for x in K.up(b))


def finite_nonmaximality_check(L: FinitePoset, n: int) -> Report:
    '''Search for a cofinal meet-subsemilattice of L that is an (n-1)-ladder.

    Candidates are tried by increasing size, then in lexicographic order of
    their sorted labels; the first hit is the witness.  Ladders of width 0 are
    not considered, so n = 1 always fails.
    '''
    title = "finite non-maximality"
    if not cp.is_n_ladder(L, n):
        raise PreconditionError(f"L is not a {n}-ladder")
    if n < 2:
        return Report.fail(title, "no ladders of width 0", (n,))
    ordered = sorted(L.elements, key=cp.label)
    for size in range(1, len(ordered) + 1):
        for cand in combinations(ordered, size):
            if not cp.is_cofinal(L, cand):
                continue
            if not cp.is_meet_subsemilattice(L, cand):
                continue
            if cp.is_n_ladder(L.restrict(cand), n - 1):
                ext = extend_by_cofinal_copy(L, cand, n)
                return Report(title, True, [], {"witness": cand, "extension": ext})
    return Report.fail(title, "no candidate", ())
