import random

import pytest

from xsat.algebra import MergeResult, descendant_edges, join, shared_join, unfold_edge
from xsat.morphisms import (
    NodeMap,
    enumerate_monomorphisms,
    enumerate_prefix_functions,
    exists_monomorphism,
    identity_map,
    is_monomorphism,
)
from xsat.oracle import OracleBound, enumerate_documents
from xsat.patterns import canonical_form
from xsat.textio import parse_pattern, print_pattern

from conftest import random_pattern


def texts(results):
    return [print_pattern(m.pattern) for m in results]


def assert_merge_valid(m: MergeResult):
    assert is_monomorphism(m.inc1)
    assert is_monomorphism(m.inc2)
    covered = set(m.inc1.mapping) | set(m.inc2.mapping)
    assert covered == set(range(m.pattern.size))  # jointly surjective


def join_covers(p1, p2, results, bound):
    """The semantic identity Mod(p1) ∩ Mod(p2) = union of Mod(s)."""
    for d in enumerate_documents(bound):
        lhs = exists_monomorphism(p1, d.pattern) and exists_monomorphism(p2, d.pattern)
        rhs = any(exists_monomorphism(m.pattern, d.pattern) for m in results)
        if lhs != rhs:
            return print_pattern(d.pattern)
    return None


class TestJoinExamples:
    def test_incompatible_roots(self):
        assert join(parse_pattern("/a"), parse_pattern("/b")) == []

    def test_forced_siblings(self):
        results = join(parse_pattern("/a[b]"), parse_pattern("/a[c]"))
        assert texts(results) == ["/a[b][c]"]
        for m in results:
            assert_merge_valid(m)

    def test_same_descendant_pattern(self):
        # The merged case subsumes both the sibling case (which needs two
        # distinct b nodes) and the chain arrangements, so the minimal
        # representative set is the pattern itself.
        results = join(parse_pattern("/a[.//b]"), parse_pattern("/a[.//b]"))
        assert texts(results) == ["/a[.//b]"]
        oops = join_covers(
            parse_pattern("/a[.//b]"),
            parse_pattern("/a[.//b]"),
            results,
            OracleBound(("a", "b", "c"), 6),
        )
        assert oops is None

    def test_incomparable_ancestor_chains(self):
        # r//x//m joined with r//y//m while m merges: the two chain orders
        # are incomparable and both must be kept.
        p1 = parse_pattern("/r[.//x[.//m]]")
        p2 = parse_pattern("/r[.//y[.//m]]")
        results = join(p1, p2)
        got = set(texts(results))
        assert "/r[.//x[.//m[.//y]]]" not in got  # m has no child here
        assert {"/r[.//x[.//y[.//m]]]", "/r[.//y[.//x[.//m]]]"} <= got

    def test_results_are_canonical_and_minimal(self):
        rng = random.Random(21)
        for _ in range(40):
            p1 = random_pattern(rng, 4, ["a", "b"])
            p2 = random_pattern(rng, 4, ["a", "b"])
            results = join(p1, p2)
            keys = [canonical_form(m.pattern) for m in results]
            assert len(set(keys)) == len(keys)
            for m in results:
                assert_merge_valid(m)
            for i, mi in enumerate(results):
                for j, mj in enumerate(results):
                    if i != j:
                        assert not exists_monomorphism(mi.pattern, mj.pattern)

    def test_deterministic(self):
        rng = random.Random(22)
        for _ in range(20):
            p1 = random_pattern(rng, 4, ["a", "b"])
            p2 = random_pattern(rng, 4, ["a", "b"])
            assert texts(join(p1, p2)) == texts(join(p1, p2))

    def test_bounded_equivalence_sample(self):
        rng = random.Random(23)
        bound = OracleBound(("a", "b", "c"), 5)
        for _ in range(25):
            p1 = random_pattern(rng, 4, ["a", "b"], wildcard_p=0.2)
            p2 = random_pattern(rng, 4, ["a", "b"], wildcard_p=0.2)
            oops = join_covers(p1, p2, join(p1, p2), bound)
            assert oops is None, f"{print_pattern(p1)} x {print_pattern(p2)} differs at {oops}"


class TestSharedJoin:
    def test_seeded_root_merge(self):
        p2 = parse_pattern("/a")
        q = parse_pattern("/a[b]")
        p1 = parse_pattern("/a[c]")
        (c,) = enumerate_prefix_functions(p2, q)
        (m,) = enumerate_monomorphisms(p2, p1)
        results = shared_join(p1, q, c, m)
        assert texts(results) == ["/a[b][c]"]

    def test_fully_shared_p1(self):
        p1 = p2 = parse_pattern("/a")
        q = parse_pattern("/a[b]")
        (c,) = enumerate_prefix_functions(p2, q)
        results = shared_join(p1, q, c, identity_map(p1))
        assert texts(results) == ["/a[b]"]

    def test_s21_shared_join(self):
        p2 = parse_pattern("/a[.//e]")
        q = parse_pattern("/a[.//e[f]]")
        p1 = parse_pattern("/a[.//e]")
        (c,) = enumerate_prefix_functions(p2, q)
        (m,) = enumerate_monomorphisms(p2, p1)
        results = shared_join(p1, q, c, m)
        assert texts(results) == ["/a[.//e[f]]"]

    def test_commuting_condition(self):
        rng = random.Random(24)
        done = 0
        while done < 25:
            p2 = random_pattern(rng, 3, ["a", "b"])
            q = random_pattern(rng, 4, ["a", "b"])
            p1 = random_pattern(rng, 4, ["a", "b"])
            cs = enumerate_prefix_functions(p2, q)
            ms = enumerate_monomorphisms(p2, p1)
            if not cs or not ms:
                continue
            for res in shared_join(p1, q, cs[0], ms[0]):
                assert_merge_valid(res)
                for x in range(p2.size):
                    assert res.inc1.mapping[ms[0].mapping[x]] == res.inc2.mapping[cs[0].mapping[x]]
            done += 1

    def test_soundness_bounded(self):
        # every result implies both operands on every bounded document
        rng = random.Random(25)
        bound = OracleBound(("a", "b"), 5)
        docs = list(enumerate_documents(bound))
        done = 0
        while done < 15:
            p2 = random_pattern(rng, 3, ["a", "b"])
            q = random_pattern(rng, 4, ["a", "b"])
            p1 = random_pattern(rng, 4, ["a", "b"])
            cs = enumerate_prefix_functions(p2, q)
            ms = enumerate_monomorphisms(p2, p1)
            if not cs or not ms:
                continue
            for res in shared_join(p1, q, cs[0], ms[0]):
                for d in docs:
                    if exists_monomorphism(res.pattern, d.pattern):
                        assert exists_monomorphism(p1, d.pattern)
                        assert exists_monomorphism(q, d.pattern)
            done += 1

    def test_precondition_errors(self):
        p2 = parse_pattern("/a")
        q = parse_pattern("/a[b]")
        p1 = parse_pattern("/a[c]")
        not_prefix = NodeMap(p2, q, (1,))  # not root-preserving
        (m,) = enumerate_monomorphisms(p2, p1)
        with pytest.raises(ValueError):
            shared_join(p1, q, not_prefix, m)
        (c,) = enumerate_prefix_functions(p2, q)
        not_mono = NodeMap(p2, p1, (1,))
        with pytest.raises(ValueError):
            shared_join(p1, q, c, not_mono)


class TestUnfold:
    def test_basic_pair(self):
        results = unfold_edge(parse_pattern("/a[.//b]"), 1)
        assert [print_pattern(p) for p in results] == ["/a[b]", "/a[*[.//b]]"]

    def test_re_unfold_skip(self):
        skip = unfold_edge(parse_pattern("/a[.//b]"), 1)[1]
        again = unfold_edge(skip, descendant_edges(skip)[0])
        assert [print_pattern(p) for p in again][:2] == ["/a[*[b]]", "/a[*[*[.//b]]]"]

    def test_precondition(self):
        with pytest.raises(ValueError):
            unfold_edge(parse_pattern("/a[b]"), 1)
        with pytest.raises(ValueError):
            unfold_edge(parse_pattern("/a[.//b]"), 0)

    def test_collision_variant_present(self):
        # an injective embedding can route the descendant path through the
        # image of a sibling node; the expansion must cover that case
        results = unfold_edge(parse_pattern("/a[.//b][c]"), 1)
        got = [print_pattern(p) for p in results]
        assert got[:2] == ["/a[b][c]", "/a[*[.//b]][c]"]
        assert "/a[c[.//b]]" in got

    def test_equivalence_bounded(self):
        rng = random.Random(26)
        bound = OracleBound(("a", "b", "c"), 5)
        docs = list(enumerate_documents(bound))
        done = 0
        while done < 30:
            p = random_pattern(rng, 4, ["a", "b"], wildcard_p=0.2, desc_p=0.5)
            edges = descendant_edges(p)
            if not edges:
                continue
            for v in edges:
                parts = unfold_edge(p, v)
                for d in docs:
                    lhs = exists_monomorphism(p, d.pattern)
                    rhs = any(exists_monomorphism(s, d.pattern) for s in parts)
                    assert lhs == rhs, (
                        f"{print_pattern(p)} edge {v} differs at {print_pattern(d.pattern)}"
                    )
            done += 1


class TestDescendantEdges:
    def test_none(self):
        assert descendant_edges(parse_pattern("/a[b]")) == []

    def test_fig1(self, fig1_pattern):
        assert descendant_edges(fig1_pattern) == [2]

    def test_two_in_preorder(self):
        assert descendant_edges(parse_pattern("/a[.//b][.//c]")) == [1, 2]
