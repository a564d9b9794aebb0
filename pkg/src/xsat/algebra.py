"""Pattern combination operators and descendant-edge unfolding.

``join(p1, p2)`` computes a finite set of canonical representatives for the
pattern-combination operator: every result admits jointly surjective
monomorphisms from both operands, and the disjunction of the results covers
exactly the conjunction of the operands (checked against the bounded oracle
in the test suite).  ``shared_join`` is the variant that keeps a common
sub-pattern identified in every result.

Both pipelines share the same core: enumerate node correspondences (partial
bijections), quotient the disjoint node union, then enumerate every rooted
tree arrangement that realises all child edges literally and all descendant
edges as strict ancestry.  Results are deduplicated by canonical form and
pruned to monomorphism-minimal representatives (if some retained s' maps
into s, then Mod(s) is contained in Mod(s') and s is redundant in the
disjunction).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .morphisms import NodeMap, exists_monomorphism, is_monomorphism, is_prefix_function
from .patterns import WILDCARD, Axis, Pattern, build_preorder, canonical_form


@dataclass(frozen=True)
class MergeResult:
    """A combined pattern with the two witnessing embeddings."""

    pattern: Pattern
    inc1: NodeMap
    inc2: NodeMap


def _labels_compatible(a: str, b: str) -> bool:
    return a == b or a == WILDCARD or b == WILDCARD


def _correspondences(
    p1: Pattern, p2: Pattern, seed: dict[int, int]
) -> Iterator[dict[int, int]]:
    """Partial bijections p1-nodes -> p2-nodes extending ``seed``.

    Every yielded map contains the root pair, is label-compatible, and is
    closed under forced merges: when both members of a pair hang on child
    edges, their parents must be paired too.
    """
    for x, y in seed.items():
        if not _labels_compatible(p1.labels[x], p2.labels[y]):
            return
    if seed.get(0) != 0:
        return

    free = [x for x in range(1, p1.size) if x not in seed]
    used = set(seed.values())
    current = dict(seed)

    def closed(r: dict[int, int]) -> bool:
        for x, y in r.items():
            if x == 0:
                continue
            if p1.axes[x] is Axis.CHILD and p2.axes[y] is Axis.CHILD:
                if r.get(p1.parents[x]) != p2.parents[y]:
                    return False
        return True

    def assign(idx: int) -> Iterator[dict[int, int]]:
        if idx == len(free):
            if closed(current):
                yield dict(current)
            return
        x = free[idx]
        yield from assign(idx + 1)  # x stays unmerged
        for y in range(1, p2.size):
            if y in used or not _labels_compatible(p1.labels[x], p2.labels[y]):
                continue
            current[x] = y
            used.add(y)
            yield from assign(idx + 1)
            del current[x]
            used.discard(y)

    yield from assign(0)


class _MergeUniverse:
    """The quotient of two node sets by a correspondence, with the edge
    constraints the sources impose on any arrangement."""

    def __init__(self, p1: Pattern, p2: Pattern, r: dict[int, int]):
        self.ok = True
        self.class_of_1 = list(range(p1.size))
        self.class_of_2: list[int] = [-1] * p2.size
        for x, y in r.items():
            self.class_of_2[y] = x
        n_classes = p1.size
        for y in range(p2.size):
            if self.class_of_2[y] < 0:
                self.class_of_2[y] = n_classes
                n_classes += 1
        self.labels: list[str] = [""] * n_classes
        for x in range(p1.size):
            self.labels[x] = p1.labels[x]
        for y in range(p2.size):
            cls = self.class_of_2[y]
            if p2.labels[y] != WILDCARD:
                self.labels[cls] = p2.labels[y]
            elif cls >= p1.size:
                self.labels[cls] = WILDCARD

        self.child_parent: dict[int, int] = {}
        self.requirements: list[tuple[int, int]] = []
        for pat, cls_of in ((p1, self.class_of_1), (p2, self.class_of_2)):
            for n in range(1, pat.size):
                u, v = cls_of[pat.parents[n]], cls_of[n]
                if pat.axes[n] is Axis.CHILD:
                    if v == 0 or self.child_parent.setdefault(v, u) != u:
                        self.ok = False
                        return
                else:
                    if v == 0:
                        self.ok = False
                        return
                    self.requirements.append((u, v))
        # Merges may force a parent cycle (u child of v and v child of u
        # through different sources); no tree realises that.
        for start in self.child_parent:
            cur, hops = start, 0
            while cur in self.child_parent:
                cur = self.child_parent[cur]
                hops += 1
                if hops > n_classes:
                    self.ok = False
                    return
        self.n_classes = n_classes


def _arrangements(
    labels: Sequence[str],
    child_parent: dict[int, int],
    requirements: Sequence[tuple[int, int]],
) -> Iterator[tuple[Pattern, list[int]]]:
    """Rooted trees over the given classes (root is class 0) where
    child-forced nodes sit at their forced parent with a child edge, free
    nodes attach with a descendant edge, and each requirement pair ends up
    in strict ancestry.

    Free-node parents are drawn from the requirement sources plus the root.
    That restriction loses no coverage: any valid tree T is entered by an
    identity monomorphism from the tree that re-parents every free node to
    the deepest requirement source relevant to its subtree (walking that
    construction to a fixpoint stays valid and only uses such parents), so
    the disjunction of enumerated trees still covers every valid tree."""
    k = len(labels)
    # Forced child edges may chain into a cycle; no tree realises that.
    for start in child_parent:
        cur, hops = start, 0
        while cur in child_parent:
            cur = child_parent[cur]
            hops += 1
            if hops > k:
                return
    parent: list[Optional[int]] = [None] * k
    for v, u in child_parent.items():
        parent[v] = u
    free = [c for c in range(1, k) if c not in child_parent]
    sources = sorted({a for a, _ in requirements} | {0})

    def creates_cycle(node: int, cand: int) -> bool:
        cur: Optional[int] = cand
        while cur is not None:
            if cur == node:
                return True
            cur = parent[cur]
        return False

    def finish() -> Optional[tuple[Pattern, list[int]]]:
        ancestors: list[set[int]] = [set() for _ in range(k)]
        for c in range(1, k):
            cur = parent[c]
            while cur is not None:
                ancestors[c].add(cur)
                cur = parent[cur]
        if any(a not in ancestors[d] for a, d in requirements):
            return None
        axes: list[Optional[Axis]] = [
            None if c == 0 else (Axis.CHILD if c in child_parent else Axis.DESCENDANT)
            for c in range(k)
        ]
        pat, trans = build_preorder(list(labels), parent, axes)
        return pat, trans

    def assign(idx: int) -> Iterator[tuple[Pattern, list[int]]]:
        if idx == len(free):
            done = finish()
            if done is not None:
                yield done
            return
        node = free[idx]
        for cand in sources:
            if cand == node or creates_cycle(node, cand):
                continue
            parent[node] = cand
            yield from assign(idx + 1)
            parent[node] = None

    yield from assign(0)


def _minimal_representatives(patterns: list[Pattern]) -> list[Pattern]:
    """Monomorphism-minimal, pairwise non-isomorphic representatives.

    Candidates must already be pairwise non-isomorphic.  Mutual-monomorphism
    clusters keep their canonically first member; a representative survives
    only if no other representative maps into it.
    """
    cands = sorted(patterns, key=lambda p: (p.size, canonical_form(p)))
    n = len(cands)
    mono = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i != j:
                mono[i][j] = exists_monomorphism(cands[i], cands[j])
    # Mutual-monomorphism is an equivalence (composition closure); keep the
    # first member of each cluster.  Distinct representatives are then never
    # mutually comparable, so plain domination decides survival.
    is_rep = [True] * n
    for i in range(n):
        for j in range(i):
            if is_rep[j] and mono[i][j] and mono[j][i]:
                is_rep[i] = False
                break
    kept = []
    for i in range(n):
        if is_rep[i] and not any(
            is_rep[j] and j != i and mono[j][i] for j in range(n)
        ):
            kept.append(cands[i])
    return kept


def _combine(p1: Pattern, p2: Pattern, seed: dict[int, int]) -> list[MergeResult]:
    by_key: dict[bytes, MergeResult] = {}
    for r in _correspondences(p1, p2, seed):
        uni = _MergeUniverse(p1, p2, r)
        if not uni.ok:
            continue
        for pat, trans in _arrangements(uni.labels, uni.child_parent, uni.requirements):
            key = canonical_form(pat)
            if key in by_key:
                continue
            inc1 = NodeMap(p1, pat, tuple(trans[uni.class_of_1[x]] for x in range(p1.size)))
            inc2 = NodeMap(p2, pat, tuple(trans[uni.class_of_2[y]] for y in range(p2.size)))
            by_key[key] = MergeResult(pat, inc1, inc2)
    keep = _minimal_representatives([m.pattern for m in by_key.values()])
    kept_keys = {canonical_form(p) for p in keep}
    out = [m for m in by_key.values() if canonical_form(m.pattern) in kept_keys]
    out.sort(key=lambda m: (m.pattern.size, canonical_form(m.pattern)))
    return out


def join(p1: Pattern, p2: Pattern) -> list[MergeResult]:
    """All canonical ways of combining two patterns (the R2 operator)."""
    if not _labels_compatible(p1.labels[0], p2.labels[0]):
        return []
    return _combine(p1, p2, {0: 0})


def shared_join(p1: Pattern, q: Pattern, c: NodeMap, m: NodeMap) -> list[MergeResult]:
    """Combinations of p1 and q with the shared sub-pattern identified:
    the seed merges m(x) with c(x) for every node x of the common source, so
    inc1 ∘ m = inc2 ∘ c holds for every result by construction."""
    if not is_prefix_function(c):
        raise ValueError("shared_join: c must be a prefix function")
    if not is_monomorphism(m):
        raise ValueError("shared_join: m must be a monomorphism")
    if c.source != m.source:
        raise ValueError("shared_join: c and m must share their source pattern")
    if c.target != q or m.target != p1:
        raise ValueError("shared_join: map endpoints do not match p1/q")
    seed = {m.mapping[x]: c.mapping[x] for x in range(c.source.size)}
    return _combine(p1, q, seed)


def descendant_edges(p: Pattern) -> list[int]:
    """Preorder-ordered nodes whose parent edge is a descendant edge."""
    return [n for n in range(1, p.size) if p.axes[n] is Axis.DESCENDANT]


def unfold_edge(p: Pattern, v: int) -> list[Pattern]:
    """Expand the descendant edge above ``v`` into an equivalent disjunction.

    The first two results are the direct step (axis flipped to child) and
    the skip (a fresh wildcard child w of the old parent, with ``v`` hanging
    below w on a descendant edge).  Because embeddings are injective, the
    intermediate node on a long path may coincide with the image of another
    pattern node, so further disjuncts identify w with each compatible node
    and re-arrange; the union of the models of all results equals the models
    of ``p``.
    """
    if v == 0 or p.axes[v] is not Axis.DESCENDANT:
        raise ValueError(f"node {v} does not hang on a descendant edge")
    u = p.parents[v]
    assert u is not None

    step_axes = list(p.axes)
    step_axes[v] = Axis.CHILD
    p_step = Pattern(p.labels, p.parents, step_axes)

    n = p.size
    w = n  # input id of the fresh wildcard node
    labels = list(p.labels) + [WILDCARD]
    parents: list[Optional[int]] = list(p.parents) + [u]
    axes: list[Optional[Axis]] = list(p.axes) + [Axis.CHILD]
    parents[v] = w
    axes[v] = Axis.DESCENDANT
    p_skip, _ = build_preorder(labels, parents, axes)

    # Merge variants: w identified with an existing node x (label-compatible
    # by construction since w is a wildcard).  Constraints: p's child edges,
    # plus (u, [w]) as a child edge; p's descendant edges minus the unfolded
    # one, plus ([w], v).
    variants: dict[bytes, Pattern] = {}
    for x in range(n):
        if x == u or x == v:
            continue
        cls_labels = list(p.labels)
        child_parent: dict[int, int] = {}
        requirements: list[tuple[int, int]] = []
        for node in range(1, n):
            par = p.parents[node]
            if node == v:
                requirements.append((x, v))
            elif p.axes[node] is Axis.CHILD:
                child_parent[node] = par  # each node appears once
            else:
                requirements.append((par, node))
        # w ~ x: x becomes a child of u; a conflicting forced parent (or the
        # root) makes the merge unrealisable.
        if x == 0 or child_parent.setdefault(x, u) != u:
            continue
        for pat, _trans in _arrangements(cls_labels, child_parent, requirements):
            variants.setdefault(canonical_form(pat), pat)

    head = [p_step, p_skip]
    head_keys = {canonical_form(p_step), canonical_form(p_skip)}
    extras = [pat for key, pat in variants.items() if key not in head_keys]
    extras = _minimal_representatives(extras)
    extras = [
        pat
        for pat in extras
        if not exists_monomorphism(p_step, pat) and not exists_monomorphism(p_skip, pat)
    ]
    extras.sort(key=lambda pat: (pat.size, canonical_form(pat)))
    return head + extras
