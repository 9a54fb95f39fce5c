"""Group expressions and explicit root-datum documents.

Grammar (keywords case-insensitive)::

    expr := term ("x" term)*
    term := SL(n) | GL(n) | PGL(n) | SC(type) | AD(type) | T(n) | INT(type; gens)
    gens := int ("," int)*                       when pi_1(G^ad) is cyclic
          | "(" int ("," int)* ")" ("," ...)*    in general

``x`` and ``×`` both separate factors of a product.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from . import lattice as lt
from .rootdata import (
    RootDataError,
    RootDatum,
    SimpleType,
    adjoint,
    build_root_system,
    direct_sum,
    general_linear,
    intermediate,
    simply_connected,
    torus,
)


class GroupParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.text, self.pos = text, pos
        super().__init__(f"{message} at position {pos}: {text!r}")


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>-?\d+)|(?P<type>[A-Ga-g]\d+)|(?P<kw>(?i:PGL|INT|SL|GL|SC|AD|T|X))"
    r"|(?P<punct>[();,×\[\]]))")


def tokenize(text: str) -> list[Token]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise GroupParseError(f"unexpected character {text[pos:].lstrip()[:1]!r}", text,
                                  pos + len(text[pos:]) - len(text[pos:].lstrip()))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(Token(kind, m.group(kind), start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def error(self, msg: str, tok: Token | None = None) -> GroupParseError:
        tok = tok or self.peek()
        if tok is None:
            return GroupParseError(f"{msg} (unexpected end of input)", self.text, len(self.text))
        return GroupParseError(f"{msg}; offending token {tok.value!r}", self.text, tok.pos)

    def take(self, kind: str, value: str | None = None) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind or (value is not None and tok.value != value):
            raise self.error(f"expected {value or kind}")
        self.i += 1
        return tok

    def expr(self) -> RootDatum:
        terms = [self.term()]
        while (tok := self.peek()) is not None:
            if tok.value.lower() == "x" or tok.value == "×":
                self.i += 1
                terms.append(self.term())
            else:
                raise self.error("expected 'x' between factors")
        if len(terms) == 1:
            return terms[0]
        return direct_sum(terms)

    def integer(self, minimum: int) -> int:
        tok = self.take("num")
        n = int(tok.value)
        if n < minimum:
            raise self.error(f"expected an integer >= {minimum}", tok)
        return n

    def simple_type(self) -> SimpleType:
        tok = self.take("type")
        try:
            return SimpleType.parse(tok.value)
        except RootDataError as exc:
            raise self.error(str(exc), tok) from None

    def term(self) -> RootDatum:
        tok = self.take("kw")
        kw = tok.value.upper()
        self.take("punct", "(")
        try:
            if kw in ("SL", "PGL"):
                n = self.integer(2)
                t = SimpleType("A", n - 1)
                d = simply_connected(t) if kw == "SL" else adjoint(t)
                d = _rename(d, f"{kw}({n})")
            elif kw == "GL":
                d = general_linear(self.integer(1))
            elif kw == "T":
                d = torus(self.integer(1))
            elif kw in ("SC", "AD"):
                t = self.simple_type()
                d = simply_connected(t) if kw == "SC" else adjoint(t)
            elif kw == "INT":
                t = self.simple_type()
                self.take("punct", ";")
                gens = self.generators()
                d = intermediate(t, gens)
            else:
                raise self.error("unknown group keyword", tok)
        except RootDataError as exc:
            raise self.error(str(exc), tok) from None
        self.take("punct", ")")
        return d

    def generators(self) -> list[tuple[int, ...]]:
        gens = []
        while True:
            tok = self.peek()
            if tok is not None and tok.value in ("(", "["):
                close = ")" if tok.value == "(" else "]"
                self.i += 1
                vec = [int(self.take("num").value)]
                while (t := self.peek()) is not None and t.value == ",":
                    self.i += 1
                    vec.append(int(self.take("num").value))
                self.take("punct", close)
                gens.append(tuple(vec))
            else:
                gens.append((int(self.take("num").value),))
            if (t := self.peek()) is not None and t.value == ",":
                self.i += 1
                continue
            return gens


def _rename(d: RootDatum, name: str) -> RootDatum:
    return RootDatum(d.lattice_rank, d.root_system, d.simple_coroots, d.simple_roots, name)


def parse_group(text: str) -> RootDatum:
    """Root datum of a group expression such as ``"GL(3) x SC(E7)"``."""
    if not text.strip():
        raise GroupParseError("empty group expression", text, 0)
    return _Parser(text).expr()


def datum_from_dict(doc: dict) -> RootDatum:
    """Root datum from the explicit JSON schema.

    ``simple_coroots`` is a list of column vectors, ``simple_roots`` a list of
    row vectors, both in cocharacter-lattice coordinates.
    """
    try:
        n = int(doc["lattice_rank"])
        factors = [SimpleType.parse(f) for f in doc["factors"]]
        cor_cols = [tuple(int(x) for x in c) for c in doc["simple_coroots"]]
        roots = [tuple(int(x) for x in r) for r in doc["simple_roots"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise RootDataError(f"malformed root datum document: {exc}") from None
    rs = build_root_system(factors)
    if any(len(c) != n for c in cor_cols) or len(cor_cols) != rs.rank:
        raise RootDataError(f"expected {rs.rank} coroot columns of length {n}")
    d = RootDatum(n, rs, lt.from_columns(cor_cols, n), lt.as_matrix(roots),
                  str(doc.get("name") or "datum"))
    cor_rank = lt.smith_normal_form(d.simple_coroots, rs.rank).rank if n and rs.rank else 0
    if cor_rank != rs.rank:
        raise RootDataError("simple coroots are not linearly independent")
    return d


def datum_to_dict(d: RootDatum) -> dict:
    return {
        "name": d.name,
        "lattice_rank": d.lattice_rank,
        "factors": [str(t) for t in d.factors],
        "simple_coroots": [list(c) for c in lt.columns(d.simple_coroots, d.root_system.rank)],
        "simple_roots": [list(r) for r in d.simple_roots],
    }


def load_datum(path: str | Path) -> RootDatum:
    with open(path, encoding="utf-8") as fh:
        return datum_from_dict(json.load(fh))
