import pytest
from hypothesis import given, settings, strategies as st

from ladders import cohen_skeleton as cs
from ladders import core_poset as cp
from ladders.errors import IncompatibleError, ParseError, PreconditionError
from ladders.generators import chain, random_lattice, substream


def chain_family():
    '''n = 1 on a 6-chain split into the intervals {c0,c1}, {c2,c3}, {c4,c5}.'''
    L = chain(6)
    c = L.elements
    tree = cs.IndexTree(1, {(): 3})
    ideals = {(): frozenset(c), (0,): frozenset(c[:2]), (1,): frozenset(c[:4]), (2,): frozenset(c)}
    return cs.IdealFamily(L, tree, ideals)


def test_lex_star():
    assert cs.lex_star_less((0, 1), (1,)) and cs.lex_star_less((0,), (1, 0))
    assert not cs.lex_star_less((1,), (1, 0)) and not cs.lex_star_less((), (0,))
    assert not cs.lex_star_less((1,), (0, 5))


def test_tree_nodes_in_lex_order():
    t = cs.IndexTree(2, {(): 2, (0,): 1, (1,): 2})
    assert t.nodes == ((), (0,), (0, 0), (1,), (1, 0), (1, 1))
    assert t.maximal == ((0, 0), (1, 0), (1, 1))
    with pytest.raises(PreconditionError):
        cs.IndexTree(2, {(): 1}).nodes


def test_chain_intervals_pass():
    fam = chain_family()
    r = cs.validate_family(fam)
    assert r, r.lines()
    assert fam.blocks == {(0,): {"c0", "c1"}, (1,): {"c2", "c3"}, (2,): {"c4", "c5"}}
    assert fam.block_of["c3"] == (1,)


def test_chain_c_of_by_hand():
    fam = chain_family()
    assert cs.c_of(fam, {((1,), 0): "c3"}) == frozenset()
    p = {((0,), 0): "c1", ((1,), 0): "c3"}
    assert cs.c_of(fam, p) == {"c1", "c3"}
    # slot 1 needs everything in earlier slots below it
    assert cs.c_of(fam, {**p, ((0,), 1): "c0"}) == {"c1", "c3"}
    assert cs.c_of(fam, {((0,), 0): "c0", ((0,), 1): "c1"}) == {"c0", "c1"}
    # a gap blocks later slots
    assert cs.c_of(fam, {((0,), 1): "c1"}) == frozenset()


def test_condition_values_must_lie_in_blocks():
    fam = chain_family()
    with pytest.raises(PreconditionError):
        cs.c_of(fam, {((0,), 0): "c3"})
    with pytest.raises(PreconditionError):
        cs.c_of(fam, {((), 0): "c0"})


def test_each_failure_is_reported():
    fam = chain_family()
    c = fam.base.elements
    bad = cs.IdealFamily(fam.base, fam.tree, {**fam.ideals, (1,): frozenset(c[:2])})
    parts = cs.validate_family(bad).details["parts"]
    assert not parts["(5) new elements"] and parts["(3) increasing children"]
    bad = cs.IdealFamily(fam.base, fam.tree, {**fam.ideals, (1,): frozenset(["c1"])})
    assert not cs.validate_family(bad).details["parts"]["ideals"]
    bad = cs.IdealFamily(fam.base, fam.tree, {**fam.ideals, (2,): frozenset(c[:5])})
    parts = cs.validate_family(bad).details["parts"]
    assert not parts["(2) union of children"] and parts["(1) root"]


def test_finite_size_condition():
    L = chain(3)
    c = L.elements
    tree = cs.IndexTree(1, {(): 2})
    fam = cs.IdealFamily(L, tree, {(): frozenset(c), (0,): frozenset(c), (1,): frozenset(c)})
    parts = cs.validate_family(fam).details["parts"]
    assert not parts["(7) finite sizes"] and not parts["(5) new elements"]


def test_block_containment_violations_found():
    '''Without the closure step the generator produces families failing only (6).'''
    found = 0
    for seed in range(300):
        rng = substream(seed, "unclosed")
        fam = cs.generate_family(rng, 2, random_lattice(rng, 8), close=False)
        if fam is None:
            continue
        r = cs.validate_family(fam)
        parts = r.details["parts"]
        if parts["(6) block containment"]:
            continue
        if all(v for k, v in parts.items() if k not in ("(6) block containment", "blocks partition")):
            w = next(w for w in r.witnesses if w.claim == "containment")
            a, g = w.elements
            assert g < a and len(g) == fam.n
            assert fam.ideals[a] & fam.blocks[g] and not fam.ideals[g] <= fam.ideals[a]
            found += 1
    assert found >= 3


@given(st.integers(0, 10**6), st.sampled_from([1, 2]))
@settings(max_examples=40, deadline=None)
def test_generated_families_and_density(seed, n):
    rng = substream(seed, "cohen")
    fam = cs.random_family(rng, n)
    assert cs.validate_family(fam)
    blocks = {x: s for s in fam.tree.maximal for x in fam.blocks[s]}
    assert blocks == fam.block_of and set(blocks) == set(fam.base.elements)
    p = {}
    chain_of = [{}]
    for _ in range(3):
        x = rng.choice(fam.base.elements)
        q, y = cs.density_extend(fam, p, x)
        assert cs.extends(q, p) and fam.base.le(x, y)
        assert y in cs.c_of(fam, q)
        p = q
        chain_of.append(dict(q))
    r = cs.filter_union_checks(fam, chain_of)
    assert r, r.lines()
    cs_sets = [cs.c_of(fam, c) for c in chain_of]
    assert all(a <= b for a, b in zip(cs_sets, cs_sets[1:]))


def test_cover_bound_on_random_conditions():
    for seed in range(60):
        rng = substream(seed, "conds")
        fam = cs.random_family(rng, 1 + seed % 2)
        p = {}
        for s in fam.tree.maximal:
            for m in range(rng.randint(0, 3)):
                if rng.random() < 0.7:
                    p[(s, m)] = rng.choice(sorted(fam.blocks[s], key=cp.label))
        C = cs.c_of(fam, p)
        if C:
            sub = fam.base.restrict(C)
            assert cp.max_lower_covers(sub) <= fam.n + 1
            assert cp.is_meet_subsemilattice(fam.base, C)


def test_incompatible_conditions():
    fam = chain_family()
    with pytest.raises(IncompatibleError):
        cs.filter_union_checks(fam, [{((0,), 0): "c0"}, {((0,), 0): "c1"}])


def test_density_on_the_chain():
    fam = chain_family()
    q, y = cs.density_extend(fam, {((1,), 1): "c3"}, "c4")
    assert q[((1,), 0)] == "c2"
    assert y == "c4" and y in cs.c_of(fam, q)


def test_doc_roundtrip():
    fam = cs.random_family(substream(4, "doc"), 2)
    back = cs.family_from_doc(cs.family_to_doc(fam))
    assert back.ideals == fam.ideals and back.tree.nodes == fam.tree.nodes
    p = {(fam.tree.maximal[0], 0): sorted(fam.blocks[fam.tree.maximal[0]])[0]}
    assert cs.condition_from_doc(cs.condition_to_doc(p)) == p
    assert cs.condition_from_doc({"assignments": cs.condition_to_doc(p)}) == p
    with pytest.raises(ParseError):
        cs.family_from_doc({"n": 1})
    with pytest.raises(ParseError):
        cs.condition_from_doc([{"node": [0]}])
