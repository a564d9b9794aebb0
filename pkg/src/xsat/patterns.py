"""Tree patterns and documents.

A pattern is a rooted unordered tree whose nodes carry labels (a concrete
name, or the wildcard ``*``) and whose edges are either child (``/``) or
descendant (``//``) edges.  A document is the restricted case with no
wildcards and only child edges; it abstracts an XML document.

Nodes are addressed by their preorder position (``NodeId``): the root is 0
and children are visited in stored order.  Patterns are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

import enum
from typing import Iterable, Optional, Sequence

WILDCARD = "*"

#: Characters that may not occur in a concrete label (keeps the text grammar
#: unambiguous).  Whitespace is rejected separately.
RESERVED_LABEL_CHARS = "/[]*|"


class Axis(enum.Enum):
    """Edge sort: child (``/``) or descendant (``//``)."""

    CHILD = "child"
    DESCENDANT = "descendant"


class PatternError(ValueError):
    """Raised when pattern data violates the tree invariants."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


def is_valid_label(label: str) -> bool:
    """True for the wildcard or a well-formed concrete name."""
    if label == WILDCARD:
        return True
    if not label:
        return False
    return not any(c.isspace() or c in RESERVED_LABEL_CHARS for c in label)


def validate(
    labels: Sequence[str],
    parents: Sequence[Optional[int]],
    axes: Sequence[Optional[Axis]],
) -> list[str]:
    """Check the pattern invariants on raw node data.

    Returns an empty list when the data describes a valid pattern; otherwise
    a description of every violated invariant.  Node ``i`` has label
    ``labels[i]``; non-root nodes name their parent and the axis of the edge
    from it.  The node order must be a preorder of the tree (root first,
    each subtree contiguous).
    """
    issues: list[str] = []
    n = len(labels)
    if n == 0:
        return ["empty pattern: node count must be >= 1"]
    if len(parents) != n or len(axes) != n:
        return [f"inconsistent arrays: {n} labels, {len(parents)} parents, {len(axes)} axes"]

    for i, label in enumerate(labels):
        if not is_valid_label(label):
            issues.append(f"node {i}: invalid label {label!r}")

    roots = [i for i, p in enumerate(parents) if p is None]
    if roots != [0]:
        issues.append(f"expected exactly node 0 to be the root, found roots {roots}")
    for i in range(n):
        p = parents[i]
        if p is None:
            if axes[i] is not None:
                issues.append(f"root node {i} must not have a parent axis")
            continue
        if axes[i] is None:
            issues.append(f"node {i}: missing axis for its parent edge")
        if not isinstance(p, int) or not 0 <= p < n:
            issues.append(f"node {i}: parent {p!r} out of range")
        elif p >= i:
            # A preorder numbering always lists a parent before its children;
            # this also rules out cycles such as two nodes claiming each other.
            issues.append(f"not a tree: node {i} appears before its parent {p}")
    if issues:
        return issues

    # Preorder check: each node's subtree must occupy a contiguous id range.
    children: list[list[int]] = [[] for _ in range(n)]
    for i in range(1, n):
        children[parents[i]].append(i)  # type: ignore[index]
    order: list[int] = []
    stack = [0]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(reversed(children[node]))
    if order != list(range(n)):
        issues.append("node ids are not a preorder of the tree")
    return issues


class Pattern:
    """Immutable labelled tree with typed edges, nodes addressed in preorder."""

    __slots__ = ("labels", "parents", "axes", "_children", "_key", "_hash", "_search_cache")

    labels: tuple[str, ...]
    parents: tuple[Optional[int], ...]
    axes: tuple[Optional[Axis], ...]

    def __init__(
        self,
        labels: Sequence[str],
        parents: Sequence[Optional[int]],
        axes: Sequence[Optional[Axis]],
    ):
        issues = validate(labels, parents, axes)
        if issues:
            raise PatternError(issues)
        object.__setattr__(self, "labels", tuple(labels))
        object.__setattr__(self, "parents", tuple(parents))
        object.__setattr__(self, "axes", tuple(axes))
        kids: list[tuple[int, ...]] = [() for _ in labels]
        acc: list[list[int]] = [[] for _ in labels]
        for i in range(1, len(labels)):
            acc[parents[i]].append(i)  # type: ignore[index]
        kids = [tuple(c) for c in acc]
        object.__setattr__(self, "_children", tuple(kids))
        object.__setattr__(self, "_key", None)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_search_cache", None)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Pattern is immutable")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def root(self) -> int:
        return 0

    def label(self, n: int) -> str:
        return self.labels[n]

    def children(self, n: int) -> tuple[int, ...]:
        return self._children[n]

    def axis(self, n: int) -> Axis:
        """Axis of the edge from ``parent(n)`` to non-root node ``n``."""
        ax = self.axes[n]
        if ax is None:
            raise ValueError("the root has no parent edge")
        return ax

    def is_document_shaped(self) -> bool:
        return not any(l == WILDCARD for l in self.labels) and all(
            a is Axis.CHILD for a in self.axes[1:]
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Pattern):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.parents == other.parents
            and self.axes == other.axes
        )

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.labels, self.parents, self.axes)))
        return self._hash

    def __repr__(self) -> str:
        from .textio import print_pattern

        return f"Pattern({print_pattern(self)!r})"


class Document:
    """A pattern that passed the document check: no wildcards, child edges only."""

    __slots__ = ("pattern",)

    def __init__(self, pattern: Pattern, _token: object = None):
        if _token is not _DOC_TOKEN:
            raise TypeError("use as_document() to build a Document")
        object.__setattr__(self, "pattern", pattern)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Document is immutable")

    @property
    def size(self) -> int:
        return self.pattern.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        return self.pattern == other.pattern

    def __hash__(self) -> int:
        return hash(("doc", self.pattern))

    def __repr__(self) -> str:
        from .textio import print_pattern

        return f"Document({print_pattern(self.pattern)!r})"


_DOC_TOKEN = object()


class NotADocument(ValueError):
    """Raised when a pattern has wildcard labels or descendant edges."""

    def __init__(self, wildcard_nodes: list[int], descendant_nodes: list[int]):
        parts = []
        if wildcard_nodes:
            parts.append(f"wildcard labels at nodes {wildcard_nodes}")
        if descendant_nodes:
            parts.append(f"descendant edges at nodes {descendant_nodes}")
        super().__init__("not a document: " + "; ".join(parts))
        self.wildcard_nodes = wildcard_nodes
        self.descendant_nodes = descendant_nodes


def as_document(p: Pattern) -> Document:
    """Wrap ``p`` as a Document, or raise NotADocument naming the offenders."""
    wild = [i for i, l in enumerate(p.labels) if l == WILDCARD]
    desc = [i for i in range(1, p.size) if p.axes[i] is Axis.DESCENDANT]
    if wild or desc:
        raise NotADocument(wild, desc)
    return Document(p, _DOC_TOKEN)


def canonical_form(p: Pattern) -> bytes:
    """Canonical key: equal for two patterns iff they are isomorphic.

    Computed bottom-up; a node's key is its label followed by the sorted
    sequence of (axis, child key) entries, so sibling order never matters.
    """
    if p._key is not None:
        return p._key
    keys: list[str] = [""] * p.size
    # Preorder ids guarantee children have larger ids, so a reverse sweep
    # sees every child key before its parent.
    for n in range(p.size - 1, -1, -1):
        kids = p._children[n]
        if not kids:
            keys[n] = p.labels[n]
        else:
            entries = sorted(
                ("/" if p.axes[c] is Axis.CHILD else "\\") + keys[c] for c in kids
            )
            keys[n] = p.labels[n] + "(" + ",".join(entries) + ")"
    key = keys[0].encode("utf-8")
    object.__setattr__(p, "_key", key)
    return key


def is_isomorphic(p: Pattern, q: Pattern) -> bool:
    return canonical_form(p) == canonical_form(q)


def strict_ancestors(p: Pattern, n: int) -> frozenset[int]:
    """Proper ancestors of ``n``: every node on the path to the root."""
    out = []
    cur = p.parents[n]
    while cur is not None:
        out.append(cur)
        cur = p.parents[cur]
    return frozenset(out)


def strict_descendants(p: Pattern, n: int) -> frozenset[int]:
    """All nodes strictly below ``n``; with preorder ids this is a contiguous range."""
    end = n + 1
    while end < p.size and n in strict_ancestors(p, end):
        end += 1
    return frozenset(range(n + 1, end))


def build_preorder(
    labels: Sequence[str],
    parents: Sequence[Optional[int]],
    axes: Sequence[Optional[Axis]],
) -> tuple[Pattern, list[int]]:
    """Build a Pattern from tree data in arbitrary node order.

    Node 0 need not be the root and ids need not be preorder; the tree is
    renumbered (children kept in ascending input-id order).  Returns the
    pattern and the input-id -> preorder-id translation.
    """
    n = len(labels)
    roots = [i for i, p in enumerate(parents) if p is None]
    if len(roots) != 1:
        raise PatternError([f"expected exactly one root, found {roots}"])
    children: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        p = parents[i]
        if p is not None:
            if not 0 <= p < n:
                raise PatternError([f"node {i}: parent {p} out of range"])
            children[p].append(i)
    order: list[int] = []
    stack = [roots[0]]
    while stack:
        node = stack.pop()
        order.append(node)
        stack.extend(reversed(children[node]))
    if len(order) != n:
        raise PatternError(["not a tree: unreachable nodes or a cycle"])
    new_id = {old: new for new, old in enumerate(order)}
    new_labels = [labels[old] for old in order]
    new_parents = [None if parents[old] is None else new_id[parents[old]] for old in order]
    new_axes = [axes[old] for old in order]
    return Pattern(new_labels, new_parents, new_axes), [new_id[i] for i in range(n)]


def pattern_labels(patterns: Iterable[Pattern]) -> set[str]:
    """All concrete labels occurring in the given patterns."""
    out: set[str] = set()
    for p in patterns:
        out.update(l for l in p.labels if l != WILDCARD)
    return out
