"""Pure numpy implementations of the order kernels.

Every function takes a square boolean matrix ``leq`` with ``leq[i, j]``
meaning element ``i`` is below element ``j``.  The compiled module
``_kernels`` exposes the same functions with the same results.
"""
from functools import reduce
from itertools import combinations

import numpy as np

BACKEND = "python"


def transitive_closure(leq):
    r = np.array(leq, dtype=bool, copy=True)
    np.fill_diagonal(r, True)
    for k in range(r.shape[0]):
        r |= r[:, k:k + 1] & r[k:k + 1, :]
    return r


def order_violation(leq):
    '''First failure of reflexivity, antisymmetry or transitivity, or None.'''
    leq = np.asarray(leq, dtype=bool)
    diag = np.flatnonzero(~np.diag(leq))
    if diag.size:
        return ("reflexivity", (int(diag[0]),))
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = np.argwhere(both)[0]
        return ("antisymmetry", (int(i), int(j)))
    li = leq.astype(np.int32)
    two = (li @ li) > 0
    bad = two & ~leq
    if bad.any():
        i, k = (int(v) for v in np.argwhere(bad)[0])
        j = int(np.flatnonzero(leq[i] & leq[:, k])[0])
        return ("transitivity", (i, j, k))
    return None


def join_table(leq):
    '''Least upper bounds of all pairs, -1 where none exists.

    Relies on ``leq`` being a partial order: for ``k`` in the common upper
    set ``U`` of ``i`` and ``j`` the up-set of ``k`` is contained in ``U``,
    so ``k`` is the least element of ``U`` exactly when both have the same
    size.
    '''
    up = np.asarray(leq, dtype=bool)
    n = up.shape[0]
    out = np.full((n, n), -1, dtype=np.int32)
    if n == 0:
        return out
    ui = up.astype(np.int32)
    common = ui @ ui.T
    cnt = ui.sum(axis=1)
    for i in range(n):
        u = up[i][None, :] & up
        cand = u & (cnt[None, :] == common[i][:, None])
        has = cand.any(axis=1)
        out[i, has] = np.argmax(cand[has], axis=1)
    return out


def meet_table(leq):
    return join_table(np.asarray(leq, dtype=bool).T)


def cover_matrix(leq):
    leq = np.asarray(leq, dtype=bool)
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    li = lt.astype(np.int32)
    return lt & ~((li @ li) > 0)


def breadth_violation(join, members, k):
    '''First (k+1)-subset of ``members`` none of whose k-subsets has the same join.

    Subsets are visited in ``itertools.combinations`` order over ``members``.
    Raises ValueError when a needed join is missing from ``join``.
    '''
    join = np.asarray(join)
    members = [int(m) for m in members]

    def fold(xs):
        def step(a, b):
            c = int(join[a, b])
            if c < 0:
                raise ValueError(f"missing join for indices {a}, {b}")
            return c
        return reduce(step, xs)

    if k < 1:
        raise ValueError("k must be positive")
    for combo in combinations(members, k + 1):
        top = fold(combo)
        if not any(fold(combo[:d] + combo[d + 1:]) == top for d in range(k + 1)):
            return combo
    return None
