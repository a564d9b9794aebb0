import itertools
import random

import pytest

from xsat.logic import Specification
from xsat.morphisms import exists_monomorphism
from xsat.oracle import (
    OracleBound,
    Witness,
    bounded_models,
    bounded_sat,
    default_bound,
    enumerate_documents,
    fresh_label,
)
from xsat.patterns import Axis, Pattern, canonical_form
from xsat.textio import parse_pattern, parse_spec, print_pattern


def _ordered_trees(labels, size):
    """Reference generator: every ordered labelled tree, as (labels, parents)."""
    if size == 1:
        for l in labels:
            yield ([l], [None])
        return
    for l in labels:
        for parts in _compositions(size - 1):
            for combo in itertools.product(
                *(list(_ordered_trees(labels, part)) for part in parts)
            ):
                lab = [l]
                par = [None]
                for sub_lab, sub_par in combo:
                    off = len(lab)
                    lab.extend(sub_lab)
                    par.append(0)
                    par.extend(p + off for p in sub_par[1:])
                yield (lab, par)


def _compositions(total):
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest


class TestEnumerate:
    def test_single_label_counts(self):
        docs = list(enumerate_documents(OracleBound(("a",), 3)))
        assert len(docs) == 4
        assert [d.size for d in docs] == [1, 2, 3, 3]

    def test_two_labels_bound_two(self):
        docs = list(enumerate_documents(OracleBound(("a", "b"), 2)))
        assert len(docs) == 6

    def test_single_doc(self):
        docs = list(enumerate_documents(OracleBound(("a",), 1)))
        assert [print_pattern(d.pattern) for d in docs] == ["/a"]

    def test_no_duplicates_and_order(self):
        docs = list(enumerate_documents(OracleBound(("a", "b"), 4)))
        keys = [canonical_form(d.pattern) for d in docs]
        assert len(set(keys)) == len(keys)
        sizes = [d.size for d in docs]
        assert sizes == sorted(sizes)
        for size in set(sizes):
            chunk = [k for d, k in zip(docs, keys) if d.size == size]
            assert chunk == sorted(chunk)

    @pytest.mark.parametrize("labels,size", [(("a",), 4), (("a", "b"), 3)])
    def test_matches_ordered_tree_dedup(self, labels, size):
        """Compare with generate-all-ordered-trees-then-dedup."""
        reference = set()
        for n in range(1, size + 1):
            for lab, par in _ordered_trees(labels, n):
                axes = [None] + [Axis.CHILD] * (len(lab) - 1)
                reference.add(canonical_form(Pattern(lab, par, axes)))
        mine = {canonical_form(d.pattern) for d in enumerate_documents(OracleBound(labels, size))}
        assert mine == reference

    def test_deterministic(self):
        b = OracleBound(("a", "b"), 4)
        first = [print_pattern(d.pattern) for d in enumerate_documents(b)]
        second = [print_pattern(d.pattern) for d in enumerate_documents(b)]
        assert first == second

    def test_bound_validation(self):
        with pytest.raises(ValueError):
            OracleBound((), 3)
        with pytest.raises(ValueError):
            OracleBound(("*",), 3)
        with pytest.raises(ValueError):
            OracleBound(("a",), 0)


class TestBoundedSat:
    def test_simple_witness(self):
        spec = parse_spec("clause c1 : exists /a\n")
        w = bounded_sat(spec, OracleBound(("a",), 2))
        assert isinstance(w, Witness)
        assert print_pattern(w.document.pattern) == "/a"
        assert w.per_clause == (("c1", True),)

    def test_two_roots_unsat(self):
        spec = parse_spec("clause c1 : exists /a\nclause c2 : exists /b\n")
        assert bounded_sat(spec, OracleBound(("a", "b"), 4)) is None

    def test_conditional_spec(self):
        spec = parse_spec(
            "clause c1 : exists /a[.//e[f]]\n"
            "clause c2 : forall /a[.//e] => /a[.//e[f]]\n"
        )
        w = bounded_sat(spec, OracleBound(("a", "e", "f"), 4))
        assert w is not None
        assert print_pattern(w.document.pattern) == "/a[e[f]]"

    def test_agrees_with_filter(self):
        from xsat.logic import check_document

        spec = parse_spec("clause c1 : exists /a[b]\nclause c2 : not exists /a[b[b]]\n")
        b = OracleBound(("a", "b"), 4)
        w = bounded_sat(spec, b)
        filtered = [d for d in enumerate_documents(b) if check_document(d, spec).overall]
        assert w is not None and filtered
        assert w.document == filtered[0]

    def test_monotone_in_bound(self):
        rng = random.Random(61)
        from conftest import random_pattern

        for _ in range(20):
            p = random_pattern(rng, 3, ["a", "b"], wildcard_p=0.1)
            spec = Specification((
                parse_spec(f"clause c1 : exists {print_pattern(p)}\n").clauses[0],
            ))
            small = bounded_sat(spec, OracleBound(("a", "b"), 3))
            big = bounded_sat(spec, OracleBound(("a", "b"), 4))
            bigger_labels = bounded_sat(spec, OracleBound(("a", "b", "c"), 3))
            if small is not None:
                assert big is not None
                assert bigger_labels is not None


class TestBoundedModels:
    def test_simple(self):
        models = bounded_models(parse_pattern("/a"), OracleBound(("a",), 2))
        assert [print_pattern(d.pattern) for d in models] == ["/a", "/a[a]"]

    def test_descendant_hand_count(self):
        # root a with a b strictly below, over {a,b} up to 3 nodes
        models = bounded_models(parse_pattern("/a[.//b]"), OracleBound(("a", "b"), 3))
        got = {print_pattern(d.pattern) for d in models}
        expected = {
            "/a[b]",
            "/a[b][b]", "/a[a][b]", "/a[b[a]]", "/a[b[b]]", "/a[a[b]]",
        }
        assert got == expected

    def test_empty(self):
        assert bounded_models(parse_pattern("/b"), OracleBound(("a",), 4)) == []

    def test_consistency_with_mono(self):
        b = OracleBound(("a", "b"), 4)
        p = parse_pattern("/a[*]")
        models = {canonical_form(d.pattern) for d in bounded_models(p, b)}
        for d in enumerate_documents(b):
            assert (canonical_form(d.pattern) in models) == exists_monomorphism(p, d.pattern)


class TestDefaults:
    def test_fresh_label(self):
        assert fresh_label({"a", "b"}) == "x"
        assert fresh_label({"x"}) == "x0"
        assert fresh_label({"x", "x0"}) == "x1"

    def test_default_bound_collects_labels(self):
        spec = parse_spec(
            "clause c1 : exists /a[b]\nclause c2 : forall /a => /a[c] prefix [0->0]\n"
        )
        b = default_bound(spec, 4)
        assert b.labels == ("a", "b", "c", "x")
        assert b.max_nodes == 4
