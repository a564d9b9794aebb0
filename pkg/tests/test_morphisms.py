import random

import pytest

from xsat.morphisms import (
    NodeMap,
    compose,
    enumerate_monomorphisms,
    enumerate_prefix_functions,
    exists_monomorphism,
    extend_map,
    identity_map,
    is_monomorphism,
    is_prefix_function,
)
from xsat.textio import parse_document_native, parse_pattern

from conftest import FIG1_DOCUMENT, random_document_pattern, random_pattern


class TestIsMonomorphism:
    def test_fig1_mapping(self, fig1_pattern, fig1_document):
        # p: 0=a 1=b 2=* 3=e 4=d ; t: 0=a 1=b 2=g 3=e 4=f 5=e 6=d
        h = NodeMap(fig1_pattern, fig1_document.pattern, (0, 1, 4, 5, 6))
        assert is_monomorphism(h)

    def test_identity(self, fig1_pattern):
        assert is_monomorphism(identity_map(fig1_pattern))

    def test_wildcard_to_top_e_fails(self, fig1_pattern, fig1_document):
        # e(top) has no d child, so this cannot be edge-preserving.
        h = NodeMap(fig1_pattern, fig1_document.pattern, (0, 1, 3, 5, 6))
        assert not is_monomorphism(h)


class TestEnumerateMonomorphisms:
    def test_fig1_exactly_one(self, fig1_pattern, fig1_document):
        found = enumerate_monomorphisms(fig1_pattern, fig1_document.pattern)
        assert [m.mapping for m in found] == [(0, 1, 4, 5, 6)]

    def test_descendant_two_solutions(self, fig1_document):
        found = enumerate_monomorphisms(parse_pattern("/a[.//e]"), fig1_document.pattern)
        assert [m.mapping for m in found] == [(0, 3), (0, 5)]

    def test_root_mismatch(self, fig1_document):
        assert enumerate_monomorphisms(parse_pattern("/b"), fig1_document.pattern) == []

    def test_all_results_valid_and_ordered(self):
        rng = random.Random(11)
        for _ in range(150):
            p = random_pattern(rng, 4, ["a", "b"])
            q = random_pattern(rng, 6, ["a", "b"])
            found = enumerate_monomorphisms(p, q)
            assert all(is_monomorphism(m) for m in found)
            mappings = [m.mapping for m in found]
            assert mappings == sorted(mappings)
            assert len(set(mappings)) == len(mappings)

    def test_identity_always_found(self):
        rng = random.Random(12)
        for _ in range(60):
            p = random_pattern(rng, 6, ["a", "b"])
            found = enumerate_monomorphisms(p, p)
            assert tuple(range(p.size)) in {m.mapping for m in found}

    def test_deterministic(self):
        rng = random.Random(13)
        for _ in range(30):
            p = random_pattern(rng, 4, ["a", "b"])
            q = random_pattern(rng, 6, ["a", "b"])
            first = [m.mapping for m in enumerate_monomorphisms(p, q)]
            second = [m.mapping for m in enumerate_monomorphisms(p, q)]
            assert first == second

    def test_composition_closure(self):
        rng = random.Random(14)
        checked = 0
        while checked < 40:
            p = random_pattern(rng, 3, ["a", "b"])
            q = random_pattern(rng, 4, ["a", "b"])
            r = random_document_pattern(rng, 6, ["a", "b"])
            hs = enumerate_monomorphisms(p, q)
            gs = enumerate_monomorphisms(q, r)
            for h in hs[:3]:
                for g in gs[:3]:
                    assert is_monomorphism(compose(g, h))
                    checked += 1


class TestExistsMonomorphism:
    def test_descendant_maps_to_single_edge(self):
        assert exists_monomorphism(parse_pattern("/a[.//b]"), parse_pattern("/a[b]"))

    def test_child_cannot_map_to_descendant(self):
        assert not exists_monomorphism(parse_pattern("/a[b]"), parse_pattern("/a[.//b]"))

    def test_identity(self, fig1_pattern):
        assert exists_monomorphism(fig1_pattern, fig1_pattern)

    def test_agrees_with_enumeration(self):
        rng = random.Random(15)
        for _ in range(200):
            p = random_pattern(rng, 4, ["a", "b"])
            q = random_pattern(rng, 5, ["a", "b"])
            assert exists_monomorphism(p, q) == bool(enumerate_monomorphisms(p, q))


class TestPrefixFunctions:
    def test_s21_unique(self):
        found = enumerate_prefix_functions(
            parse_pattern("/a[.//e]"), parse_pattern("/a[.//e[f]]")
        )
        assert [m.mapping for m in found] == [(0, 1)]

    def test_two_branches(self):
        found = enumerate_prefix_functions(parse_pattern("/a[b]"), parse_pattern("/a[b][b]"))
        assert [m.mapping for m in found] == [(0, 1), (0, 2)]

    def test_axis_identity_required(self):
        assert enumerate_prefix_functions(parse_pattern("/a[.//b]"), parse_pattern("/a[b]")) == []

    def test_prefix_functions_are_monomorphisms(self):
        rng = random.Random(16)
        for _ in range(150):
            p = random_pattern(rng, 4, ["a", "b"])
            q = random_pattern(rng, 6, ["a", "b"])
            for c in enumerate_prefix_functions(p, q):
                assert is_prefix_function(c)
                assert is_monomorphism(c)

    def test_wildcard_matches_only_wildcard(self):
        assert enumerate_prefix_functions(parse_pattern("/a[*]"), parse_pattern("/a[b]")) == []
        assert enumerate_prefix_functions(parse_pattern("/a[*]"), parse_pattern("/a[*]")) != []


class TestExtendMap:
    def _setup(self):
        p2 = parse_pattern("/a[.//e]")
        q = parse_pattern("/a[.//e[f]]")
        t = parse_document_native(FIG1_DOCUMENT).pattern
        (c,) = enumerate_prefix_functions(p2, q)
        return p2, q, t, c

    def test_top_e_extends(self):
        p2, q, t, c = self._setup()
        h = NodeMap(p2, t, (0, 3))  # e -> e(top), which has an f child
        exts = extend_map(c, h)
        assert [f.mapping for f in exts] == [(0, 3, 4)]

    def test_deep_e_does_not_extend(self):
        p2, q, t, c = self._setup()
        h = NodeMap(p2, t, (0, 5))  # e -> e(deep), no f child
        assert extend_map(c, h) == []

    def test_bijective_shared_part_forces_h(self, fig1_pattern, fig1_document):
        p = fig1_pattern
        (h,) = enumerate_monomorphisms(p, fig1_document.pattern)
        exts = extend_map(identity_map(p), h)
        assert [f.mapping for f in exts] == [h.mapping]

    def test_rejects_non_prefix(self):
        p2, q, t, c = self._setup()
        h = NodeMap(p2, t, (0, 3))
        not_prefix = NodeMap(p2, q, (0, 2))
        with pytest.raises(ValueError):
            extend_map(not_prefix, h)

    def test_rejects_different_sources(self):
        p2, q, t, c = self._setup()
        other = parse_pattern("/a[.//g]")
        h = NodeMap(other, t, (0, 2))
        with pytest.raises(ValueError):
            extend_map(c, h)

    def test_results_commute(self):
        rng = random.Random(17)
        for _ in range(100):
            p2 = random_pattern(rng, 3, ["a", "b"])
            q = random_pattern(rng, 4, ["a", "b"])
            t = random_document_pattern(rng, 5, ["a", "b"])
            for c in enumerate_prefix_functions(p2, q)[:2]:
                for h in enumerate_monomorphisms(p2, t)[:2]:
                    for f in extend_map(c, h):
                        assert is_monomorphism(f)
                        assert all(
                            f.mapping[c.mapping[x]] == h.mapping[x] for x in range(p2.size)
                        )
