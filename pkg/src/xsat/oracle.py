"""Bounded model search: exhaustive enumeration of documents up to a size bound.

Documents are generated one per isomorphism class by canonical construction
(children attached in non-decreasing canonical-key order), so no post-hoc
deduplication is needed.  This is the independent ground truth behind the
semantic property tests and the user-facing satisfiability probe; it never
claims unsatisfiability, only "no model within the bound".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .logic import CheckReport, Specification, check_document
from .morphisms import exists_monomorphism
from .patterns import WILDCARD, Axis, Document, Pattern, as_document, canonical_form


@dataclass(frozen=True)
class OracleBound:
    labels: tuple[str, ...]
    max_nodes: int

    def __post_init__(self):
        if not self.labels:
            raise ValueError("bound needs at least one label")
        if any(l == WILDCARD or not l for l in self.labels):
            raise ValueError("bound labels must be concrete")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("bound labels must be distinct")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be >= 1")


@dataclass(frozen=True)
class Witness:
    document: Document
    per_clause: tuple[tuple[str, bool], ...]


# (sorted labels, size) -> patterns of exactly that size, sorted by canonical key
_SIZE_CACHE: dict[tuple[tuple[str, ...], int], tuple[Pattern, ...]] = {}


def _attach(label: str, kids: tuple[Pattern, ...]) -> Pattern:
    labels: list[str] = [label]
    parents: list[Optional[int]] = [None]
    axes: list[Optional[Axis]] = [None]
    for kid in kids:
        offset = len(labels)
        labels.extend(kid.labels)
        parents.append(0)
        axes.append(Axis.CHILD)
        for i in range(1, kid.size):
            parents.append(kid.parents[i] + offset)  # type: ignore[operator]
            axes.append(kid.axes[i])
    return Pattern(labels, parents, axes)


def _docs_of_size(labels: tuple[str, ...], size: int) -> tuple[Pattern, ...]:
    key = (labels, size)
    cached = _SIZE_CACHE.get(key)
    if cached is not None:
        return cached
    if size == 1:
        result = tuple(Pattern([l], [None], [None]) for l in labels)
    else:
        # Universe of strictly smaller trees, totally ordered by canonical key;
        # children are chosen as a non-decreasing sequence in that order.
        universe: list[Pattern] = []
        for s in range(1, size):
            universe.extend(_docs_of_size(labels, s))
        universe.sort(key=canonical_form)

        combos: list[Pattern] = []

        def pick(budget: int, start: int, acc: list[Pattern]) -> None:
            if budget == 0:
                combos.append(_attach(current_label, tuple(acc)))
                return
            for idx in range(start, len(universe)):
                kid = universe[idx]
                if kid.size <= budget:
                    acc.append(kid)
                    pick(budget - kid.size, idx, acc)
                    acc.pop()

        out: list[Pattern] = []
        for current_label in labels:
            pick(size - 1, 0, [])
            out.extend(combos)
            combos.clear()
        result = tuple(sorted(out, key=canonical_form))
    _SIZE_CACHE[key] = result
    return result


def enumerate_documents(b: OracleBound) -> Iterator[Document]:
    """Exactly one representative per isomorphism class, ordered by node
    count then canonical key."""
    labels = tuple(sorted(b.labels))
    for size in range(1, b.max_nodes + 1):
        for pat in _docs_of_size(labels, size):
            yield as_document(pat)


def bounded_models(p: Pattern, b: OracleBound) -> list[Document]:
    """All enumerated documents satisfying the positive constraint on ``p``."""
    return [d for d in enumerate_documents(b) if exists_monomorphism(p, d.pattern)]


def bounded_sat(s: Specification, b: OracleBound) -> Optional[Witness]:
    """First enumerated document satisfying the whole spec, else None."""
    for d in enumerate_documents(b):
        report: CheckReport = check_document(d, s)
        if report.overall:
            return Witness(d, report.per_clause)
    return None


def fresh_label(labels: set[str]) -> str:
    """A label outside the given set (deterministic)."""
    if "x" not in labels:
        return "x"
    k = 0
    while f"x{k}" in labels:
        k += 1
    return f"x{k}"


def default_bound(s: Specification, max_nodes: int) -> OracleBound:
    """Spec labels plus one fresh label; wildcards and negative constraints can
    only be told apart with a symbol outside the spec's vocabulary."""
    labels = s.labels()
    return OracleBound(tuple(sorted(labels) + [fresh_label(labels)]), max_nodes)
