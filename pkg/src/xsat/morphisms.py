"""Monomorphisms, prefix functions, and constrained extensions between patterns.

A monomorphism maps nodes injectively, preserves the root and labels (a
wildcard source matches any target label), sends child edges to child
edges, and sends descendant edges to ancestor/descendant pairs (paths of
length >= 1).  A prefix function is the rigid variant: exact labels and
edge kinds, witnessing that one pattern extends another.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .patterns import WILDCARD, Axis, Pattern, strict_ancestors, strict_descendants


@dataclass(frozen=True)
class NodeMap:
    """A total node function between two patterns (source id -> target id)."""

    source: Pattern
    target: Pattern
    mapping: tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.size:
            raise ValueError("mapping must cover every source node")
        if any(not 0 <= j < self.target.size for j in self.mapping):
            raise ValueError("mapping image out of range")

    def __getitem__(self, node: int) -> int:
        return self.mapping[node]

    def pairs(self) -> list[tuple[int, int]]:
        return list(enumerate(self.mapping))


def is_monomorphism(h: NodeMap) -> bool:
    """Independent check of all monomorphism conditions (used as a test oracle)."""
    p, q, m = h.source, h.target, h.mapping
    if len(set(m)) != len(m):
        return False
    if m[0] != 0:
        return False
    for n in range(p.size):
        if p.labels[n] != WILDCARD and p.labels[n] != q.labels[m[n]]:
            return False
    for n in range(1, p.size):
        x = p.parents[n]
        if p.axes[n] is Axis.CHILD:
            if q.parents[m[n]] != m[x] or q.axes[m[n]] is not Axis.CHILD:
                return False
        else:
            if m[x] not in strict_ancestors(q, m[n]):
                return False
    return True


def is_prefix_function(c: NodeMap) -> bool:
    """Exact-label, exact-axis, injective, root-identity embedding check."""
    p, q, m = c.source, c.target, c.mapping
    if len(set(m)) != len(m) or m[0] != 0:
        return False
    for n in range(p.size):
        if p.labels[n] != q.labels[m[n]]:
            return False
    for n in range(1, p.size):
        if q.parents[m[n]] != m[p.parents[n]]:
            return False
        if q.axes[m[n]] is not p.axes[n]:
            return False
    return True


def _target_tables(q: Pattern):
    """Per-target-pattern candidate tables, cached on the pattern: children
    with child axis, children with descendant axis, and strict descendants,
    each in ascending id order, plus concrete-label counts."""
    cached = q._search_cache
    if cached is not None:
        return cached
    child_kids: list[tuple[int, ...]] = []
    desc_kids: list[tuple[int, ...]] = []
    descendants: list[tuple[int, ...]] = []
    for i in range(q.size):
        kids = q.children(i)
        child_kids.append(tuple(c for c in kids if q.axes[c] is Axis.CHILD))
        desc_kids.append(tuple(c for c in kids if q.axes[c] is Axis.DESCENDANT))
        descendants.append(tuple(sorted(strict_descendants(q, i))))
    counts: dict[str, int] = {}
    for label in q.labels:
        counts[label] = counts.get(label, 0) + 1
    tables = (child_kids, desc_kids, descendants, counts)
    object.__setattr__(q, "_search_cache", tables)
    return tables


def _search(
    p: Pattern,
    q: Pattern,
    exact: bool,
    pinned: Optional[dict[int, int]],
    first_only: bool,
) -> list[NodeMap]:
    """Backtracking over source nodes in preorder; candidates tried in
    ascending target id, so results come out in lexicographic order of the
    image tuple."""
    n = p.size
    if n > q.size:
        return []
    child_kids, desc_kids, descendants, q_counts = _target_tables(q)
    p_counts: dict[str, int] = {}
    for label in p.labels:
        if label != WILDCARD:
            p_counts[label] = p_counts.get(label, 0) + 1
    for label, count in p_counts.items():
        if q_counts.get(label, 0) < count:
            return []

    image: list[int] = [-1] * n
    used = [False] * q.size
    out: list[NodeMap] = []
    p_labels, q_labels = p.labels, q.labels

    def extend(src: int) -> bool:
        if src == n:
            out.append(NodeMap(p, q, tuple(image)))
            return first_only
        if src == 0:
            candidates: tuple[int, ...] = (0,)
        else:
            parent_img = image[p.parents[src]]
            axis = p.axes[src]
            if exact:
                candidates = child_kids[parent_img] if axis is Axis.CHILD else desc_kids[parent_img]
            elif axis is Axis.CHILD:
                candidates = child_kids[parent_img]
            else:
                candidates = descendants[parent_img]
        label = p_labels[src]
        wild = not exact and label == WILDCARD
        pin = pinned.get(src) if pinned else None
        for tgt in candidates:
            if used[tgt] or (not wild and label != q_labels[tgt]):
                continue
            if pin is not None and tgt != pin:
                continue
            image[src] = tgt
            used[tgt] = True
            if extend(src + 1):
                return True
            used[tgt] = False
            image[src] = -1
        return False

    extend(0)
    return out


def enumerate_monomorphisms(p: Pattern, q: Pattern) -> list[NodeMap]:
    """All monomorphisms p -> q, no duplicates, lexicographic image order."""
    return _search(p, q, exact=False, pinned=None, first_only=False)


def exists_monomorphism(p: Pattern, q: Pattern) -> bool:
    """Short-circuits at the first witness."""
    return bool(_search(p, q, exact=False, pinned=None, first_only=True))


def enumerate_prefix_functions(p: Pattern, q: Pattern) -> list[NodeMap]:
    """All prefix functions p -> q (same ordering rule as monomorphisms)."""
    return _search(p, q, exact=True, pinned=None, first_only=False)


def extend_map(c: NodeMap, h: NodeMap) -> list[NodeMap]:
    """All monomorphisms f: q -> t with f(c(x)) = h(x) for every shared node x.

    ``c`` must be a prefix function p2 -> q and ``h`` a monomorphism p2 -> t
    over the same p2; implemented as monomorphism search with the image of
    ``c`` pre-pinned.
    """
    if c.source != h.source:
        raise ValueError("extend_map: c and h must share the same source pattern")
    if not is_prefix_function(c):
        raise ValueError("extend_map: c is not a prefix function")
    if not is_monomorphism(h):
        raise ValueError("extend_map: h is not a monomorphism")
    pinned = {c.mapping[x]: h.mapping[x] for x in range(c.source.size)}
    return _search(c.target, h.target, exact=False, pinned=pinned, first_only=False)


def has_extension(c: NodeMap, h: NodeMap) -> bool:
    """extend_map non-emptiness with early exit (the R3 side condition)."""
    pinned = {c.mapping[x]: h.mapping[x] for x in range(c.source.size)}
    return bool(_search(c.target, h.target, exact=False, pinned=pinned, first_only=True))


def compose(g: NodeMap, f: NodeMap) -> NodeMap:
    """The composite g ∘ f: nodes travel through f, then g."""
    if f.target != g.source:
        raise ValueError("compose: maps do not chain")
    return NodeMap(f.source, g.target, tuple(g.mapping[j] for j in f.mapping))


def identity_map(p: Pattern) -> NodeMap:
    return NodeMap(p, p, tuple(range(p.size)))
