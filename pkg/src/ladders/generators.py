"""Seeded random streams and small named posets.

Every random choice goes through :func:`substream`, which derives an
independent ``random.Random`` from a base seed and a label, so adding a new
consumer never shifts the values another consumer sees.
"""
import hashlib
import random
from itertools import product

from .core_poset import FinitePoset


def substream(seed: int, label: str) -> random.Random:
    digest = hashlib.sha256(f"{int(seed)}/{label}".encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def chain(n: int, prefix="c") -> FinitePoset:
    ids = [f"{prefix}{i}" for i in range(n)]
    return FinitePoset.from_function(ids, lambda x, y: ids.index(x) <= ids.index(y))


def grid(a: int, b: int) -> FinitePoset:
    '''Product of chains of lengths a and b; elements are ``(i, j)`` tuples.'''
    pts = list(product(range(a), range(b)))
    return FinitePoset.from_function(pts, lambda x, y: x[0] <= y[0] and x[1] <= y[1])


def m3() -> FinitePoset:
    return FinitePoset.from_pairs(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        kind="covers")


def n5() -> FinitePoset:
    return FinitePoset.from_pairs(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        kind="covers")


def boolean(k: int) -> FinitePoset:
    return set_family(range(1 << k))


def set_family(masks) -> FinitePoset:
    '''Bitmask sets ordered by inclusion, ids ``s<mask>``.'''
    masks = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    ids = [f"s{m}" for m in masks]
    by = dict(zip(ids, masks))
    return FinitePoset.from_function(ids, lambda x, y: by[x] & ~by[y] == 0)


def _union_closure(masks):
    out = set(masks)
    frontier = list(out)
    while frontier:
        new = []
        for a in frontier:
            for b in list(out):
                c = a | b
                if c not in out:
                    out.add(c)
                    new.append(c)
        frontier = new
    return out


def random_join_semilattice(rng: random.Random, max_size: int, with_bottom=False) -> FinitePoset:
    '''A union-closed family of subsets of a small ground set.

    Every finite join-semilattice arises this way up to isomorphism; adding
    the empty set makes it a lattice.  A target size is drawn uniformly from
    1..max_size and random sets are added until the closure reaches it, so
    larger sizes are not crowded out by tiny families.
    '''
    if max_size < 1:
        raise ValueError("max_size must be positive")
    target = rng.randint(1, max_size)
    while True:
        g = rng.randint(1, 5)
        fam = {0} if with_bottom else set()
        while len(fam) < target:
            grown = _union_closure(fam | {rng.randrange(1, 1 << g)})
            if len(grown) > max_size:
                break
            if len(grown) == len(fam) and len(fam) >= (1 << g) - (0 if with_bottom else 1):
                break
            fam = grown
        if fam and len(fam) <= max_size and (len(fam) >= target or rng.random() < 0.2):
            return set_family(fam)


def random_lattice(rng: random.Random, max_size: int) -> FinitePoset:
    return random_join_semilattice(rng, max_size, with_bottom=True)


def random_extension_input(rng: random.Random, max_size: int = 8):
    '''A lattice L, a cofinal meet-closed C inside it and the least valid n.

    C is the meet closure of the top together with a few random elements, so
    it is cofinal and a lattice in the induced order.
    '''
    from . import core_poset as cp

    L = random_lattice(rng, max_size)
    seeds = {L.top} | {rng.choice(L.elements) for _ in range(rng.randint(0, 3))}
    C = set(seeds)
    grown = True
    while grown:
        grown = False
        for x in list(C):
            for y in list(C):
                z = cp.meet(L, x, y)
                if z not in C:
                    C.add(z)
                    grown = True
    C = [x for x in L.elements if x in C]
    n = max(2, cp.max_lower_covers(L), cp.max_lower_covers(L.restrict(C)) + 1)
    return L, C, n
