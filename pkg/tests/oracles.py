"""Definition-level reference implementations used only by the tests.

Nothing here touches the kernels or the cached tables of FinitePoset; every
function works from a plain ``le(x, y)`` predicate over a list of elements.
"""
from itertools import combinations


def rel(p):
    '''Plain predicate and element list for a FinitePoset.'''
    els = list(p.elements)
    pos = {x: i for i, x in enumerate(els)}
    m = p.leq.tolist()
    return els, (lambda x, y: m[pos[x]][pos[y]])


def is_partial_order(els, le):
    if not all(le(x, x) for x in els):
        return False
    for x in els:
        for y in els:
            if x != y and le(x, y) and le(y, x):
                return False
            for z in els:
                if le(x, y) and le(y, z) and not le(x, z):
                    return False
    return True


def lub(els, le, xs):
    ups = [u for u in els if all(le(x, u) for x in xs)]
    least = [u for u in ups if all(le(u, v) for v in ups)]
    return least[0] if least else None


def glb(els, le, xs):
    lows = [u for u in els if all(le(u, x) for x in xs)]
    most = [u for u in lows if all(le(v, u) for v in lows)]
    return most[0] if most else None


def covers_below(els, le, x):
    lt = lambda a, b: a != b and le(a, b)
    return [y for y in els if lt(y, x) and not any(lt(y, z) and lt(z, x) for z in els)]


def is_lattice(els, le):
    return all(lub(els, le, [x, y]) is not None and glb(els, le, [x, y]) is not None
               for x in els for y in els)


def breadth(els, le):
    '''Largest over nonempty X of the least |Y|, Y inside X, with the join of Y equal to that of X.'''
    best = 1
    for r in range(1, len(els) + 1):
        for xs in combinations(els, r):
            target = lub(els, le, xs)
            for k in range(1, r + 1):
                if any(lub(els, le, ys) == target for ys in combinations(xs, k)):
                    best = max(best, k)
                    break
    return best


def ideals(els, le):
    '''All ideals by exhaustive subset search.'''
    out = []
    for r in range(1, len(els) + 1):
        for s in combinations(els, r):
            s = set(s)
            down = all(y in s for x in s for y in els if le(y, x))
            directed = all(any(le(x, z) and le(y, z) for z in s) for x in s for y in s)
            if down and directed:
                out.append(frozenset(s))
    return out


def greatest_below(els, le, ideal, x):
    below = [y for y in ideal if le(y, x)]
    top = [y for y in below if all(le(z, y) for z in below)]
    return top[0] if top else None
