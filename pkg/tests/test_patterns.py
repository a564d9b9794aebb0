import random

import pytest

from xsat.patterns import (
    Axis,
    NotADocument,
    Pattern,
    PatternError,
    as_document,
    canonical_form,
    is_isomorphic,
    strict_ancestors,
    strict_descendants,
    validate,
)
from xsat.textio import parse_pattern

from conftest import random_pattern, shuffle_siblings


class TestValidate:
    def test_single_node_ok(self):
        assert validate(["a"], [None], [None]) == []

    def test_mutual_parents_is_not_a_tree(self):
        issues = validate(["a", "b"], [1, 0], [Axis.CHILD, Axis.CHILD])
        assert any("not a tree" in msg or "root" in msg for msg in issues)

    def test_fig1_pattern_ok(self, fig1_pattern):
        assert validate(fig1_pattern.labels, fig1_pattern.parents, fig1_pattern.axes) == []

    def test_empty_rejected(self):
        assert validate([], [], [])

    def test_bad_label(self):
        issues = validate(["a/b"], [None], [None])
        assert any("invalid label" in msg for msg in issues)

    def test_non_preorder_rejected(self):
        # 0 -> children 1, 2 but node 3 hangs under 1: stored order 0,1,2,3
        # is not a preorder (1's subtree is not contiguous).
        issues = validate(
            ["a", "b", "c", "d"],
            [None, 0, 0, 1],
            [None, Axis.CHILD, Axis.CHILD, Axis.CHILD],
        )
        assert issues == ["node ids are not a preorder of the tree"]

    def test_constructor_raises(self):
        with pytest.raises(PatternError):
            Pattern(["a", "b"], [1, 0], [Axis.CHILD, Axis.CHILD])


class TestAsDocument:
    def test_fig1_document(self, fig1_document):
        assert fig1_document.size == 7

    def test_descendant_edge_rejected(self):
        with pytest.raises(NotADocument) as err:
            as_document(parse_pattern("/a[.//e]"))
        assert err.value.descendant_nodes == [1]

    def test_wildcard_rejected(self):
        with pytest.raises(NotADocument) as err:
            as_document(parse_pattern("/a[*]"))
        assert err.value.wildcard_nodes == [1]

    def test_round_trip(self):
        p = parse_pattern("/a[b][c[d]]")
        assert as_document(p).pattern == p


class TestCanonicalForm:
    def test_sibling_order_irrelevant(self):
        assert canonical_form(parse_pattern("/a[b][c]")) == canonical_form(
            parse_pattern("/a[c][b]")
        )

    def test_axis_matters(self):
        assert canonical_form(parse_pattern("/a[b]")) != canonical_form(
            parse_pattern("/a[.//b]")
        )

    def test_shape_matters(self):
        assert canonical_form(parse_pattern("/a[b[c]]")) != canonical_form(
            parse_pattern("/a[b][c]")
        )

    def test_random_sibling_shuffles(self):
        rng = random.Random(1729)
        for _ in range(200):
            p = random_pattern(rng, 12, ["a", "b", "c"])
            q = shuffle_siblings(rng, p)
            assert canonical_form(p) == canonical_form(q)


class TestIsomorphism:
    def test_examples(self, fig1_pattern, fig1_document):
        assert is_isomorphic(parse_pattern("/a[b][c]"), parse_pattern("/a[c][b]"))
        assert not is_isomorphic(parse_pattern("/a"), parse_pattern("/b"))
        assert not is_isomorphic(fig1_pattern, fig1_document.pattern)

    def test_equivalence_relation(self):
        rng = random.Random(99)
        pool = [random_pattern(rng, 6, ["a", "b"]) for _ in range(30)]
        for p in pool:
            assert is_isomorphic(p, p)
        for p in pool:
            for q in pool:
                assert is_isomorphic(p, q) == is_isomorphic(q, p)
        for p in pool:
            for q in pool:
                for r in pool:
                    if is_isomorphic(p, q) and is_isomorphic(q, r):
                        assert is_isomorphic(p, r)


class TestAncestors:
    def test_root_has_none(self, fig1_pattern):
        assert strict_ancestors(fig1_pattern, 0) == frozenset()

    def test_fig1_deep_e(self, fig1_document):
        # t preorder: 0=a 1=b 2=g 3=e(top) 4=f 5=e(deep) 6=d
        assert strict_ancestors(fig1_document.pattern, 5) == {4, 3, 0}

    def test_fig1_g(self, fig1_document):
        assert strict_ancestors(fig1_document.pattern, 2) == {1, 0}

    def test_parent_is_ancestor(self):
        rng = random.Random(7)
        for _ in range(50):
            p = random_pattern(rng, 10, ["a", "b"])
            for n in range(1, p.size):
                assert p.parents[n] in strict_ancestors(p, n)

    def test_descendants_inverse(self):
        rng = random.Random(8)
        for _ in range(50):
            p = random_pattern(rng, 10, ["a", "b"])
            for n in range(p.size):
                for d in strict_descendants(p, n):
                    assert n in strict_ancestors(p, d)
