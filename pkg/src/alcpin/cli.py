"""Text format for labelled TBoxes and the ``alcpin`` command.

One axiom per line::

    a1: A [= some r. A
    A and B [= bot          # unnamed: gets ax1, ax2, ... in file order

``not`` binds tighter than ``and``, which binds tighter than ``or``; ``some``
and ``only`` take everything to their right.
"""

from __future__ import annotations

import argparse
import re
import sys
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from . import mono
from .core import (
    BOT,
    And,
    Bot,
    Concept,
    Exists,
    Forall,
    LabelledAxiom,
    Name,
    Not,
    Ontology,
    Or,
    Top,
)
from .pinpoint import GoalNotEntailedError
from .reasoner import Reasoner, UnknownConceptError

KEYWORDS = frozenset({"not", "and", "or", "some", "only", "top", "bot"})
AUTO_PREFIX = "ax"

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#.*)|(?P<sub>\[=)|(?P<punct>[:.()])|(?P<word>[A-Za-z][A-Za-z0-9_]*)"
)


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "word", "sub", "punct" or "end"
    text: str
    line: int
    column: int


def tokenize_line(text: str, line: int) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, len(text.rstrip("\r")) + 1))
    return tokens


class _LineParser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, expected: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        return ParseError(f"expected {expected}, found {found}", t.line, t.column)

    def take(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.take(text):
            raise self.error(repr(text))

    def identifier(self, what: str) -> Token:
        t = self.tok
        if t.kind != "word" or t.text in KEYWORDS:
            raise self.error(what)
        self.i += 1
        return t

    def axiom(self) -> tuple[Optional[Token], Concept, Concept]:
        label = None
        if (
            self.tok.kind == "word"
            and self.tok.text not in KEYWORDS
            and self.tokens[self.i + 1].text == ":"
        ):
            label = self.tok
            self.i += 2
        lhs = self.concept()
        self.expect("[=")
        rhs = self.concept()
        if self.tok.kind != "end":
            raise self.error("end of line")
        return label, lhs, rhs

    def concept(self) -> Concept:
        c = self.conjunct()
        while self.take("or"):
            c = Or(c, self.conjunct())
        return c

    def conjunct(self) -> Concept:
        c = self.unary()
        while self.take("and"):
            c = And(c, self.unary())
        return c

    def unary(self) -> Concept:
        if self.take("not"):
            return Not(self.unary())
        for kw, make in (("some", Exists), ("only", Forall)):
            if self.take(kw):
                role = self.identifier("role name").text
                self.expect(".")
                return make(role, self.concept())
        if self.take("top"):
            return Top()
        if self.take("bot"):
            return Bot()
        if self.take("("):
            c = self.concept()
            self.expect(")")
            return c
        return Name(self.identifier("concept").text)


@dataclass
class Document:
    """Named axioms in file order."""

    axioms: dict  # name -> LabelledAxiom

    @property
    def ontology(self) -> Ontology:
        return Ontology(self.axioms.values())

    def __len__(self):
        return len(self.axioms)


def parse(text: str) -> Document:
    parsed = []
    for n, line in enumerate(text.split("\n"), 1):
        tokens = tokenize_line(line, n)
        if tokens[0].kind == "end":
            continue
        parsed.append(_LineParser(tokens).axiom())

    explicit: dict = {}
    for label, _, _ in parsed:
        if label is None:
            continue
        if label.text in explicit:
            raise ParseError(f"duplicate axiom name {label.text!r}", label.line, label.column)
        explicit[label.text] = label

    axioms: dict = {}
    counter = 0
    for label, lhs, rhs in parsed:
        if label is not None:
            name = label.text
        else:
            counter += 1
            while f"{AUTO_PREFIX}{counter}" in explicit:
                counter += 1
            name = f"{AUTO_PREFIX}{counter}"
        axioms[name] = LabelledAxiom(lhs, rhs, name)
    return Document(axioms)


def format_document(doc: Document | Iterable[LabelledAxiom]) -> str:
    axioms = doc.axioms.values() if isinstance(doc, Document) else doc
    return "".join(f"{ax}\n" for ax in axioms)


# ---------------------------------------------------------------------------
# Command line
# ---------------------------------------------------------------------------

EXIT_TRUE, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


def format_set(labels: Iterable[str]) -> str:
    return "{" + ",".join(sorted(labels, key=mono.natural_key)) + "}"


def _sorted_sets(family) -> list:
    return sorted(family, key=lambda s: [mono.natural_key(x) for x in sorted(s, key=mono.natural_key)])


def _goal(lhs: str, rhs: str) -> tuple[str, str]:
    if lhs in KEYWORDS:
        raise UnknownConceptError(lhs)
    if rhs == "bot":
        return lhs, BOT
    if rhs in KEYWORDS:
        raise UnknownConceptError(rhs)
    return lhs, rhs


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trace", action="store_true", help="write the pinpointing trace to stderr")
    common.add_argument("--order", choices=("fifo", "random"), default="fifo")
    common.add_argument("--seed", type=int, default=0, help="seed for --order random")

    parser = argparse.ArgumentParser(prog="alcpin", description="ALC reasoning with axiom pinpointing")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="list entailed A [= B and A [= bot")
    p.add_argument("file")
    for name, text in (
        ("subsumes", "decide C [= D (exit 0 yes, 1 no)"),
        ("explain", "print the pinpointing formula of C [= D"),
        ("justify", "print the justifications of C [= D, one per line"),
        ("repair", "print diagnoses and repairs for C [= D"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("file")
        p.add_argument("C")
        p.add_argument("D", help="a concept name or bot")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = _build_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"alcpin: cannot read {args.file}: {exc.strerror or exc}", file=err)
        return EXIT_ERROR
    try:
        doc = parse(text)
    except ParseError as exc:
        print(f"alcpin: {args.file}: {exc}", file=err)
        return EXIT_ERROR

    reasoner = Reasoner(doc.ontology, order=args.order, seed=args.seed)
    try:
        code = _dispatch(args, reasoner, out)
    except UnknownConceptError as exc:
        print(f"alcpin: {exc}", file=err)
        return EXIT_ERROR
    except GoalNotEntailedError as exc:
        print(f"alcpin: {exc}; nothing to repair", file=err)
        return EXIT_ERROR
    if args.trace:
        for line in reasoner.trace.lines():
            print(line, file=err)
    return code


def _dispatch(args, reasoner: Reasoner, out) -> int:
    if args.command == "classify":
        for a, b in reasoner.classify():
            print(f"{a} [= {'bot' if b == BOT else b}", file=out)
        return EXIT_TRUE
    lhs, rhs = _goal(args.C, args.D)
    if args.command == "subsumes":
        yes = reasoner.subsumes(lhs, rhs)
        print("yes" if yes else "no", file=out)
        return EXIT_TRUE if yes else EXIT_FALSE
    if args.command == "explain":
        phi = reasoner.explain(lhs, rhs)
        print(mono.format_formula(phi), file=out)
        return EXIT_FALSE if phi == mono.FALSE else EXIT_TRUE
    if args.command == "justify":
        justs = reasoner.justifications(lhs, rhs)
        for j in _sorted_sets(justs):
            print(format_set(j), file=out)
        return EXIT_TRUE if justs else EXIT_FALSE
    result = reasoner.repairs(lhs, rhs)
    print("diagnoses:", file=out)
    for d in _sorted_sets(result.diagnoses):
        print(format_set(d), file=out)
    print("repairs:", file=out)
    for r in _sorted_sets(result.repairs):
        print(format_set(r), file=out)
    return EXIT_TRUE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
