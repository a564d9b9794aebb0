import random

import pytest

from xsat.patterns import WILDCARD, Axis, Pattern, build_preorder
from xsat.textio import parse_document_native, parse_pattern

FIG1_PATTERN = "/a[b][.//*[e][d]]"
FIG1_DOCUMENT = "/a[b[g]][e[f[e][d]]]"


@pytest.fixture
def fig1_pattern():
    return parse_pattern(FIG1_PATTERN)


@pytest.fixture
def fig1_document():
    return parse_document_native(FIG1_DOCUMENT)


def random_pattern(rng: random.Random, max_nodes: int, labels, wildcard_p=0.25, desc_p=0.4) -> Pattern:
    n = rng.randint(1, max_nodes)
    node_labels = [
        WILDCARD if rng.random() < wildcard_p else rng.choice(labels) for _ in range(n)
    ]
    parents = [None] + [rng.randrange(0, i) for i in range(1, n)]
    axes = [None] + [
        Axis.DESCENDANT if rng.random() < desc_p else Axis.CHILD for _ in range(1, n)
    ]
    pattern, _ = build_preorder(node_labels, parents, axes)
    return pattern


def random_document_pattern(rng: random.Random, max_nodes: int, labels) -> Pattern:
    return random_pattern(rng, max_nodes, labels, wildcard_p=0.0, desc_p=0.0)


def shuffle_siblings(rng: random.Random, p: Pattern) -> Pattern:
    """Rebuild the same tree with every sibling list randomly permuted."""
    order: list[int] = []

    def walk(n: int) -> None:
        order.append(n)
        kids = list(p.children(n))
        rng.shuffle(kids)
        for c in kids:
            walk(c)

    walk(0)
    new_id = {old: new for new, old in enumerate(order)}
    labels = [p.labels[old] for old in order]
    parents = [None if p.parents[old] is None else new_id[p.parents[old]] for old in order]
    axes = [p.axes[old] for old in order]
    pattern, _ = build_preorder(labels, parents, axes)
    return pattern
