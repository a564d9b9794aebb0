"""Parsing and printing: patterns, `.spec` files, native documents, XML, history.

Pattern grammar (whitespace insignificant between tokens):

    Pattern   := "/" Subtree
    Subtree   := Label Branch*
    Branch    := "[" Step "]"
    Step      := Subtree            -- child axis
               | ".//" Subtree      -- descendant axis
    Label     := name | "*"

Branch order in the text fixes preorder node ids.

`.spec` files are line oriented: ``#`` comments, blank lines ignored, and

    clause <ident> : <literal> ( "|" <literal> )*
    clause <ident> : false

with literals ``exists <Pattern>``, ``not exists <Pattern>``, or
``forall <Pattern> => <Pattern> [prefix [i->j,...]]``.
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from typing import Optional

from .patterns import (
    WILDCARD,
    Axis,
    Document,
    Pattern,
    as_document,
    is_valid_label,
)


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int = 1


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: Optional[list[str]] = None):
        super().__init__(f"{span.line}:{span.column}: {message}")
        self.message = message
        self.span = span
        self.expected = expected or []


class SpecParseError(Exception):
    """Aggregate of per-line errors from parse_spec."""

    def __init__(self, errors: list[ParseError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


_NAME_DELIMS = set("/[]*| \t\r\n")


class _Scanner:
    """Single-line-aware cursor over source text with 1-based positions."""

    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.text = text
        self.pos = 0
        self.line = line
        self.column = column

    def _advance(self, k: int) -> None:
        for _ in range(k):
            if self.pos < len(self.text) and self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self._advance(1)

    def eof(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def span(self, length: int = 1) -> SourceSpan:
        return SourceSpan(self.line, self.column, max(1, length))

    def peek(self, s: str) -> bool:
        self.skip_ws()
        return self.text.startswith(s, self.pos)

    def take(self, s: str) -> bool:
        if self.peek(s):
            self._advance(len(s))
            return True
        return False

    def expect(self, s: str) -> None:
        if not self.take(s):
            got = self.text[self.pos : self.pos + 8] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected {s!r}, found {got!r}", self.span(), [s])

    def take_name(self) -> Optional[str]:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in _NAME_DELIMS:
            self._advance(1)
        if self.pos == start:
            return None
        return self.text[start : self.pos]

    def take_ident(self) -> Optional[str]:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self._advance(1)
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self._advance(1)
        if self.pos == start:
            return None
        return self.text[start : self.pos]

    def take_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self._advance(1)
        if self.pos == start:
            raise ParseError("expected a number", self.span(), ["integer"])
        return int(self.text[start : self.pos])


def _parse_subtree(sc: _Scanner, labels, parents, axes, parent, axis, allow_pattern_syntax):
    sc.skip_ws()
    if sc.peek(WILDCARD):
        if not allow_pattern_syntax:
            raise ParseError("wildcard label not allowed in documents", sc.span())
        sc.take(WILDCARD)
        label = WILDCARD
    else:
        span = sc.span()
        name = sc.take_name()
        if name is None:
            raise ParseError("expected a label", span, ["name", "*"])
        label = name
    node = len(labels)
    labels.append(label)
    parents.append(parent)
    axes.append(axis)
    while sc.peek("["):
        sc.take("[")
        if sc.peek(".//"):
            if not allow_pattern_syntax:
                raise ParseError("descendant edge not allowed in documents", sc.span(3))
            sc.take(".//")
            _parse_subtree(sc, labels, parents, axes, node, Axis.DESCENDANT, allow_pattern_syntax)
        else:
            _parse_subtree(sc, labels, parents, axes, node, Axis.CHILD, allow_pattern_syntax)
        sc.expect("]")
    return node


def _parse_pattern_at(sc: _Scanner, allow_pattern_syntax: bool = True) -> Pattern:
    sc.skip_ws()
    sc.expect("/")
    labels: list[str] = []
    parents: list[Optional[int]] = []
    axes: list[Optional[Axis]] = []
    _parse_subtree(sc, labels, parents, axes, None, None, allow_pattern_syntax)
    return Pattern(labels, parents, axes)


def parse_pattern(text: str) -> Pattern:
    """Parse the pattern grammar; raises ParseError with a source span."""
    sc = _Scanner(text)
    p = _parse_pattern_at(sc)
    if not sc.eof():
        raise ParseError(f"unexpected trailing input {sc.text[sc.pos:sc.pos+8]!r}", sc.span())
    return p


def parse_document_native(text: str) -> Document:
    """Parse the document syntax: the pattern grammar minus ``*`` and ``.//``."""
    sc = _Scanner(text)
    p = _parse_pattern_at(sc, allow_pattern_syntax=False)
    if not sc.eof():
        raise ParseError(f"unexpected trailing input {sc.text[sc.pos:sc.pos+8]!r}", sc.span())
    return as_document(p)


def _branch_sort_key(p: Pattern, child: int) -> bytes:
    axis = "/" if p.axes[child] is Axis.CHILD else "\\"
    return (axis + _subtree_key(p, child)).encode("utf-8")


def _subtree_key(p: Pattern, n: int) -> str:
    kids = p.children(n)
    if not kids:
        return p.labels[n]
    entries = sorted(
        ("/" if p.axes[c] is Axis.CHILD else "\\") + _subtree_key(p, c) for c in kids
    )
    return p.labels[n] + "(" + ",".join(entries) + ")"


def _print_subtree(p: Pattern, n: int, out: io.StringIO) -> None:
    out.write(p.labels[n])
    for child in sorted(p.children(n), key=lambda c: _branch_sort_key(p, c)):
        out.write("[")
        if p.axes[child] is Axis.DESCENDANT:
            out.write(".//")
        _print_subtree(p, child, out)
        out.write("]")


def print_pattern(p: Pattern) -> str:
    """Deterministic text form; branches ordered by canonical subtree key."""
    out = io.StringIO()
    out.write("/")
    _print_subtree(p, 0, out)
    return out.getvalue()


def print_document(d: Document) -> str:
    return print_pattern(d.pattern)


# -- .spec files --------------------------------------------------------------

def format_mapping(pairs: list[tuple[int, int]]) -> str:
    return "[" + ",".join(f"{i}->{j}" for i, j in pairs) + "]"


def _parse_mapping(sc: _Scanner) -> list[tuple[int, int]]:
    sc.expect("[")
    pairs: list[tuple[int, int]] = []
    while True:
        i = sc.take_int()
        sc.expect("->")
        j = sc.take_int()
        pairs.append((i, j))
        if not sc.take(","):
            break
    sc.expect("]")
    return pairs


def _parse_literal(sc: _Scanner):
    from .logic import Conditional, Negative, Positive
    from .morphisms import NodeMap, enumerate_prefix_functions, is_prefix_function

    if sc.take("not"):
        sc.expect("exists")
        return Negative(_parse_pattern_at(sc))
    if sc.take("exists"):
        return Positive(_parse_pattern_at(sc))
    if sc.take("forall"):
        where = sc.span()
        premise = _parse_pattern_at(sc)
        sc.expect("=>")
        conclusion = _parse_pattern_at(sc)
        if sc.take("prefix"):
            pairs = _parse_mapping(sc)
            mapping: list[Optional[int]] = [None] * premise.size
            for i, j in pairs:
                if not 0 <= i < premise.size or not 0 <= j < conclusion.size:
                    raise ParseError(f"prefix pair {i}->{j} out of range", where)
                mapping[i] = j
            if any(m is None for m in mapping):
                raise ParseError("prefix mapping must cover every premise node", where)
            cand = NodeMap(premise, conclusion, tuple(mapping))  # type: ignore[arg-type]
            if not is_prefix_function(cand):
                raise ParseError("mapping is not a prefix function", where)
            return Conditional(premise, conclusion, cand.mapping)
        found = enumerate_prefix_functions(premise, conclusion)
        if len(found) == 1:
            return Conditional(premise, conclusion, found[0].mapping)
        if not found:
            raise ParseError("no prefix function from premise to conclusion", where)
        raise ParseError(f"ambiguous prefix: {len(found)} candidates", where)
    raise ParseError(
        "expected a literal", sc.span(), ["exists", "not exists", "forall", "false"]
    )


def parse_spec(text: str):
    """Parse a `.spec` file; raises SpecParseError collecting per-line errors."""
    from .logic import Clause, Specification

    clauses: list[Clause] = []
    seen_ids: set[str] = set()
    errors: list[ParseError] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        sc = _Scanner(line, line=lineno)
        try:
            sc.expect("clause")
            ident = sc.take_ident()
            if ident is None:
                raise ParseError("expected a clause identifier", sc.span(), ["ident"])
            sc.expect(":")
            if ident in seen_ids:
                raise ParseError(f"duplicate clause identifier {ident!r}", SourceSpan(lineno, 1))
            if sc.take("false"):
                if not sc.eof():
                    raise ParseError("unexpected input after 'false'", sc.span())
                clauses.append(Clause(ident, ()))
                seen_ids.add(ident)
                continue
            literals = [_parse_literal(sc)]
            while sc.take("|"):
                literals.append(_parse_literal(sc))
            if not sc.eof():
                raise ParseError(f"unexpected trailing input {sc.text[sc.pos:sc.pos+8]!r}", sc.span())
            clauses.append(Clause(ident, tuple(literals)))
            seen_ids.add(ident)
        except ParseError as e:
            errors.append(e)
    if errors:
        raise SpecParseError(errors)
    return Specification(clauses)


def print_constraint(k) -> str:
    from .logic import Conditional, Negative, Positive

    if isinstance(k, Positive):
        return f"exists {print_pattern(k.pattern)}"
    if isinstance(k, Negative):
        return f"not exists {print_pattern(k.pattern)}"
    if isinstance(k, Conditional):
        pairs = list(enumerate(k.prefix_map))
        return (
            f"forall {print_pattern(k.premise)} => {print_pattern(k.conclusion)}"
            f" prefix {format_mapping(pairs)}"
        )
    raise TypeError(f"not a constraint: {k!r}")


def print_clause_body(cl) -> str:
    """The literal list as it appears after ``clause <id> :`` and in history lines."""
    if not cl.literals:
        return "false"
    return " | ".join(print_constraint(k) for k in cl.literals)


def print_spec(s) -> str:
    """Round-trippable `.spec` text, one clause per line, in input order."""
    return "".join(f"clause {cl.id} : {print_clause_body(cl)}\n" for cl in s.clauses)


# -- XML ingestion -------------------------------------------------------------

def _xml_label(value: str, what: str, span: SourceSpan) -> str:
    if not is_valid_label(value) or value == WILDCARD:
        raise ParseError(f"{what} {value!r} is not a usable label", span)
    return value


def ingest_xml(data: bytes | str, attrs: bool = False, text: bool = False) -> Document:
    """Build a document from XML: elements become nodes labelled by tag name.

    With ``attrs``, each attribute becomes a child ``@name`` with one child
    holding the value; with ``text``, each maximal non-whitespace character
    run becomes a child labelled by the trimmed run.  Namespaces are not
    supported; comments and processing instructions are skipped.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        root = ET.fromstring(data)
    except ET.ParseError as e:
        line, col = getattr(e, "position", (1, 0)) or (1, 0)
        raise ParseError(f"malformed XML: {e}", SourceSpan(line, col + 1)) from e

    labels: list[str] = []
    parents: list[Optional[int]] = []
    axes: list[Optional[Axis]] = []
    span = SourceSpan(1, 1)

    def add(label: str, parent: Optional[int]) -> int:
        labels.append(label)
        parents.append(parent)
        axes.append(None if parent is None else Axis.CHILD)
        return len(labels) - 1

    def walk(elem: ET.Element, parent: Optional[int]) -> None:
        tag = elem.tag
        if not isinstance(tag, str):  # comments/PIs when parsed with custom parsers
            return
        if tag.startswith("{") or any(a.startswith("{") for a in elem.attrib):
            raise ParseError("XML namespaces are not supported", span)
        node = add(_xml_label(tag, "element name", span), parent)
        if attrs:
            for name in sorted(elem.attrib):
                attr_node = add(_xml_label("@" + name, "attribute name", span), node)
                add(_xml_label(elem.attrib[name], "attribute value", span), attr_node)
        if text and elem.text and elem.text.strip():
            add(_xml_label(elem.text.strip(), "text value", span), node)
        for child in elem:
            walk(child, node)
            if text and child.tail and child.tail.strip():
                add(_xml_label(child.tail.strip(), "text value", span), node)

    walk(root, None)
    pattern = Pattern(labels, parents, axes)
    return as_document(pattern)


def document_to_xml(d: Document) -> str:
    """Render a native document as nested XML elements (inverse of plain ingest)."""

    def emit(n: int) -> str:
        kids = "".join(emit(c) for c in d.pattern.children(n))
        tag = d.pattern.labels[n]
        return f"<{tag}>{kids}</{tag}>" if kids else f"<{tag}/>"

    return emit(0)


# -- history export ------------------------------------------------------------

def format_history(events) -> str:
    """Bit-exact history text: one event per line, LF endings."""
    from .refutation import Delete, Infer, Simplify, Unfold, Verdict

    lines: list[str] = []
    for ev in events:
        if isinstance(ev, Infer):
            base = (
                f"STEP {ev.step} {ev.rule} premises="
                f"{ev.premises[0][0]}.{ev.premises[0][1]},{ev.premises[1][0]}.{ev.premises[1][1]}"
                f" result={ev.result.id}"
            )
            if ev.rule == "R3" and ev.mono is not None:
                base += " mono=" + format_mapping(list(enumerate(ev.mono.mapping)))
            lines.append(base + " : " + print_clause_body(ev.result))
        elif isinstance(ev, Delete):
            lines.append(f"STEP {ev.step} DELETE clause={ev.clause_id} reason=subsumed-by:{ev.subsumed_by}")
        elif isinstance(ev, Simplify):
            lines.append(
                f"STEP {ev.step} SIMPLIFY clause={ev.before_id} result={ev.result.id}"
                f" : {print_clause_body(ev.result)}"
            )
        elif isinstance(ev, Unfold):
            lines.append(
                f"STEP {ev.step} UNFOLD clause={ev.clause_id} literal={ev.literal}"
                f" edge={ev.edge} result={ev.result.id} : {print_clause_body(ev.result)}"
            )
        elif isinstance(ev, Verdict):
            word = {"UNSAT": "UNSAT", "SATURATED": "SATURATED", "LIMIT": "LIMIT"}[ev.verdict]
            lines.append(f"VERDICT {word} steps={ev.steps} elapsed-ms={ev.elapsed_ms}")
        else:  # pragma: no cover - defensive
            raise TypeError(f"unknown history event {ev!r}")
    return "\n".join(lines) + "\n" if lines else ""
