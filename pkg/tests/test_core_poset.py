import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from ladders import core_poset as cp
from ladders.core_poset import FinitePoset
from ladders.errors import NotALatticeError, PreconditionError, UnknownElementError
from ladders.generators import (boolean, chain, grid, m3, n5, random_join_semilattice,
                                random_lattice, substream)
from ladders.io import dumps, poset_from_doc, poset_to_doc, poset_to_dot


@st.composite
def small_posets(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    m = np.triu(np.array(bits, dtype=bool).reshape(n, n))
    return FinitePoset.from_pairs([f"x{i}" for i in range(n)],
                                  [(f"x{i}", f"x{j}") for i, j in np.argwhere(m)])


@st.composite
def lattices(draw, max_n=8):
    seed = draw(st.integers(0, 10**6))
    return random_lattice(substream(seed, "lat"), max_n)


class TestValidation:
    def test_each_axiom_reports_its_witness(self):
        r = cp.validate_poset(FinitePoset(["a", "b"], [[False, True], [False, True]]))
        assert not r and r.witnesses[0].claim == "reflexivity"
        r = cp.validate_poset(FinitePoset(["a", "b"], np.ones((2, 2))))
        assert r.witnesses[0].claim == "antisymmetry"
        m = np.eye(3, dtype=bool)
        m[0, 1] = m[1, 2] = True
        r = cp.validate_poset(FinitePoset(["a", "b", "c"], m))
        assert r.witnesses[0] == cp.Witness("transitivity", ("a", "b", "c"))

    def test_from_pairs_closes(self):
        p = FinitePoset.from_pairs("abc", [("a", "b"), ("b", "c")], kind="covers")
        assert p.le("a", "c") and cp.validate_poset(p)

    def test_unknown_element(self):
        with pytest.raises(UnknownElementError):
            m3().le("0", "z")
        with pytest.raises(UnknownElementError):
            FinitePoset.from_pairs("ab", [("a", "q")])

    def test_failing_report_needs_witness(self):
        with pytest.raises(ValueError):
            cp.Report("x", False)

    @given(small_posets())
    @settings(max_examples=60, deadline=None)
    def test_validation_matches_definition(self, p):
        els, le = oracles.rel(p)
        assert bool(cp.validate_poset(p)) == oracles.is_partial_order(els, le)


class TestLatticeOps:
    def test_m3(self):
        p = m3()
        assert cp.is_lattice(p)
        assert cp.join(p, "a", "b") == "1" and cp.meet(p, "a", "c") == "0"
        assert sorted(cp.lower_covers(p, "1")) == ["a", "b", "c"]
        assert cp.breadth(p) == 2
        assert cp.is_n_ladder(p, 3)
        r = cp.is_n_ladder(p, 2)
        assert not r and r.witnesses[0].claim == "lower covers"
        assert r.witnesses[0].elements[0] == "1"

    def test_antichain_has_no_join(self):
        p = FinitePoset(["a", "b"], np.eye(2, dtype=bool))
        assert cp.join(p, "a", "b") is None
        r = cp.is_lattice(p)
        assert not r and set(r.witnesses[0].elements) == {"a", "b"}

    def test_single_element(self):
        p = chain(1)
        assert cp.is_lattice(p) and cp.breadth(p) == 1 and cp.is_n_ladder(p, 1)

    def test_chain_and_grid(self):
        assert cp.breadth(chain(5)) == 1 and cp.is_n_ladder(chain(5), 1)
        g = grid(3, 4)
        assert cp.breadth(g) == 2 and cp.is_n_ladder(g, 2) and not cp.is_n_ladder(g, 1)
        assert cp.breadth(boolean(3)) == 3

    def test_ladder_width_must_be_positive(self):
        with pytest.raises(PreconditionError):
            cp.is_n_ladder(chain(2), 0)

    def test_non_order_refuses_joins(self):
        p = FinitePoset(["a", "b"], np.ones((2, 2)))
        with pytest.raises(PreconditionError):
            cp.join(p, "a", "b")
        assert not cp.is_lattice(p)

    def test_breadth_needs_joins(self):
        p = FinitePoset(["a", "b"], np.eye(2, dtype=bool))
        with pytest.raises(NotALatticeError):
            cp.breadth(p)

    @given(small_posets())
    @settings(max_examples=80, deadline=None)
    def test_joins_meets_covers_match_definition(self, p):
        if not cp.validate_poset(p):
            return
        els, le = oracles.rel(p)
        for x in els:
            assert sorted(cp.lower_covers(p, x)) == sorted(oracles.covers_below(els, le, x))
            for y in els:
                assert cp.join(p, x, y) == oracles.lub(els, le, [x, y])
                assert cp.meet(p, x, y) == oracles.glb(els, le, [x, y])
        assert bool(cp.is_lattice(p)) == oracles.is_lattice(els, le)

    @given(st.integers(0, 10**6))
    @settings(max_examples=60, deadline=None)
    def test_breadth_routes_agree(self, seed):
        p = random_join_semilattice(substream(seed, "bj"), 8)
        els, le = oracles.rel(p)
        b = oracles.breadth(els, le)
        assert cp.breadth(p) == b
        assert cp.breadth_by_definition(p) == b

    def test_breadth_witness(self):
        w = cp.breadth_witness(m3(), 1)
        assert w is not None and len(w) == 2
        assert cp.breadth_witness(m3(), 2) is None


class TestIdeals:
    def test_chain_projection(self):
        p = chain(4)
        ideal = {"c0", "c1"}
        assert cp.is_ideal(p, ideal) and cp.is_proper_ideal(p, ideal)
        assert cp.pi(p, ideal, "c3") == "c1"
        assert cp.pi(p, ideal, "c0") == "c0"

    def test_ideal_failures(self):
        p = m3()
        assert cp.is_ideal(p, []).witnesses[0].claim == "nonempty"
        assert cp.is_ideal(p, ["a"]).witnesses[0].claim == "downward closed"
        assert cp.is_ideal(p, ["0", "a", "b"]).witnesses[0].claim == "directed"
        assert cp.is_proper_ideal(p, list(p.elements)).witnesses[0].claim == "proper"

    def test_ideal_generated(self):
        p = m3()
        assert cp.ideal_generated(p, ["a", "b"]) == frozenset(p.elements)
        assert cp.ideal_generated(p, ["a"]) == {"0", "a"}
        with pytest.raises(PreconditionError):
            cp.ideal_generated(p, [])

    def test_pi_needs_something_below(self):
        p = FinitePoset(["a", "b"], np.eye(2, dtype=bool))
        with pytest.raises(PreconditionError):
            cp.pi(p, {"a"}, "b")

    @given(lattices(max_n=7))
    @settings(max_examples=40, deadline=None)
    def test_ideals_and_projection_match_definition(self, p):
        els, le = oracles.rel(p)
        all_ideals = oracles.ideals(els, le)
        assert set(all_ideals) == {p.down(x) for x in els}
        for ideal in all_ideals:
            assert cp.is_ideal(p, ideal)
            for x in els:
                assert cp.pi(p, ideal, x) == oracles.greatest_below(els, le, ideal, x)

    def test_meet_subsemilattice_and_cofinal(self):
        p = m3()
        assert cp.is_meet_subsemilattice(p, ["0", "a", "1"])
        r = cp.is_meet_subsemilattice(p, ["a", "b", "1"])
        assert not r and set(r.witnesses[0].elements) == {"a", "b"}
        assert cp.is_cofinal(p, ["1"])
        assert not cp.is_cofinal(p, ["a", "b"])
        assert cp.is_cofinal(p, ["a"], within=["0", "a"])


class TestIO:
    def test_roundtrip_is_byte_stable(self):
        for p in (m3(), n5(), grid(2, 3), chain(3)):
            doc = poset_to_doc(p)
            again = poset_to_doc(poset_from_doc(json.loads(dumps(doc))))
            assert dumps(again) == dumps(doc)

    def test_leq_kind_accepted(self):
        doc = {"elements": ["a", "b", "c"], "relation_kind": "leq",
               "pairs": [["a", "b"], ["b", "c"], ["a", "c"]]}
        p = poset_from_doc(doc)
        assert poset_to_doc(p)["pairs"] == [["a", "b"], ["b", "c"]]

    def test_dot_uses_cover_edges(self):
        dot = poset_to_dot(m3())
        assert dot.count("->") == 6 and '"0" -> "a";' in dot
