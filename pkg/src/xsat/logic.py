"""Constraints, clauses, specifications, and document-level satisfaction.

Three constraint sorts over patterns: a positive constraint asserts some
embedding exists, a negative one that none does, and a conditional one that
every embedding of its premise extends (along a fixed prefix function) to an
embedding of its conclusion.  A clause is a disjunction of constraints (the
empty clause is FALSE); a specification is a conjunction of clauses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .morphisms import (
    NodeMap,
    enumerate_monomorphisms,
    enumerate_prefix_functions,
    exists_monomorphism,
    has_extension,
    is_prefix_function,
)
from .patterns import Document, Pattern, canonical_form, is_isomorphic


@dataclass(frozen=True)
class Positive:
    pattern: Pattern


@dataclass(frozen=True)
class Negative:
    pattern: Pattern


@dataclass(frozen=True)
class Conditional:
    premise: Pattern
    conclusion: Pattern
    prefix_map: tuple[int, ...]

    def __post_init__(self):
        if not is_prefix_function(self.as_node_map()):
            raise ValueError("conditional constraint requires a prefix function")

    def as_node_map(self) -> NodeMap:
        return NodeMap(self.premise, self.conclusion, self.prefix_map)


Constraint = Union[Positive, Negative, Conditional]


@dataclass(frozen=True)
class Clause:
    """A disjunction of constraints; an empty literal list is FALSE."""

    id: str
    literals: tuple[Constraint, ...]

    @property
    def is_false(self) -> bool:
        return not self.literals

    def patterns(self) -> list[Pattern]:
        out: list[Pattern] = []
        for lit in self.literals:
            if isinstance(lit, Conditional):
                out.extend((lit.premise, lit.conclusion))
            else:
                out.append(lit.pattern)
        return out


@dataclass(frozen=True)
class Specification:
    clauses: tuple[Clause, ...]

    def __init__(self, clauses):
        clauses = tuple(clauses)
        ids = [c.id for c in clauses]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate clause ids: {dupes}")
        object.__setattr__(self, "clauses", clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self):
        return len(self.clauses)

    def clause(self, cid: str) -> Clause:
        for c in self.clauses:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def labels(self) -> set[str]:
        from .patterns import pattern_labels

        return pattern_labels(p for c in self.clauses for p in c.patterns())


def constraint_equal(x: Constraint, y: Constraint) -> bool:
    """Equality up to isomorphism (for conditionals: a commuting pair of
    isomorphisms between premises and conclusions)."""
    if type(x) is not type(y):
        return False
    if isinstance(x, (Positive, Negative)):
        return is_isomorphic(x.pattern, y.pattern)
    assert isinstance(x, Conditional) and isinstance(y, Conditional)
    if x.premise.size != y.premise.size or x.conclusion.size != y.conclusion.size:
        return False
    if canonical_form(x.premise) != canonical_form(y.premise):
        return False
    if canonical_form(x.conclusion) != canonical_form(y.conclusion):
        return False
    # Isomorphisms are exactly the bijective prefix functions; sizes match,
    # so injectivity already makes every prefix function a bijection.
    premise_isos = enumerate_prefix_functions(x.premise, y.premise)
    conclusion_isos = enumerate_prefix_functions(x.conclusion, y.conclusion)
    for i in premise_isos:
        for j in conclusion_isos:
            if all(
                j.mapping[x.prefix_map[n]] == y.prefix_map[i.mapping[n]]
                for n in range(x.premise.size)
            ):
                return True
    return False


def doc_satisfies_constraint(t: Document, k: Constraint) -> bool:
    doc = t.pattern
    if isinstance(k, Positive):
        return exists_monomorphism(k.pattern, doc)
    if isinstance(k, Negative):
        return not exists_monomorphism(k.pattern, doc)
    assert isinstance(k, Conditional)
    c = k.as_node_map()
    for h in enumerate_monomorphisms(k.premise, doc):
        if not has_extension(c, h):
            return False
    return True


def doc_satisfies_clause(t: Document, cl: Clause) -> bool:
    return any(doc_satisfies_constraint(t, k) for k in cl.literals)


@dataclass(frozen=True)
class CheckReport:
    overall: bool
    per_clause: tuple[tuple[str, bool], ...]


def check_document(t: Document, s: Specification) -> CheckReport:
    """Per-clause verdicts plus their conjunction."""
    per = tuple((cl.id, doc_satisfies_clause(t, cl)) for cl in s.clauses)
    return CheckReport(all(ok for _, ok in per), per)


def simplify(cl: Clause) -> Clause:
    """Drop duplicate literals (first occurrence wins); idempotent."""
    kept: list[Constraint] = []
    for lit in cl.literals:
        if not any(constraint_equal(lit, seen) for seen in kept):
            kept.append(lit)
    if len(kept) == len(cl.literals):
        return cl
    return Clause(cl.id, tuple(kept))


def subsumes(c1: Clause, c2: Clause) -> bool:
    """Literal-set inclusion up to constraint equality (both clauses simplified).

    Simplified clauses have pairwise-inequal literals, so matching each c1
    literal to any equal c2 literal is automatically injective.
    """
    return all(
        any(constraint_equal(lit, other) for other in c2.literals) for lit in c1.literals
    )
