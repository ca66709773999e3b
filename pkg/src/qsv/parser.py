"""Input language: expressions, relations, structure maps, spec files.

Grammar (whitespace-insensitive inside a line):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := atom ('^' int)?
    atom   := integer | ident | '(' expr ')'

Identifiers resolve to generators first, then to the scalar symbols
s, h, hb, c, I (and q as sugar for s^2).  Division requires a scalar
divisor.  In structure-map lines the token (x) at parenthesis depth zero
separates tensor legs.

Spec files are line based:

    generators:
      x : even invertible
      theta : odd
    relations:
      x * theta = q * theta * x
    maps:
      coproduct x = x (x) x
      counit x = 1
      antipode x = x^-1
      star theta = I * theta
    transform:
      1, 0, 0
      0, 1, 0
      h/(q-1), 0, 1
    pairing:
      convention theta-left

'#' starts a comment.  Relations may be written with '=' or '->'; both
orient by the declared generator order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import scalar as sc
from .algebra import (
    EMPTY_WORD,
    Element,
    Generator,
    Presentation,
    TensorElement,
    elem_add,
    elem_from_word,
    elem_neg,
    elem_sub,
    elem_unit,
    free_mul,
    word_from_runs,
)
from .scalar import ONE, Scalar

SCALAR_SYMBOLS = {
    "s": sc.S,
    "h": sc.H,
    "hb": sc.HBAR,
    "c": sc.C_FORMAL,
    "I": sc.I_UNIT,
    "q": sc.Q,
}


class SyntaxErrorWithPos(ValueError):
    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", col {col}" if col is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.col = col


class SemanticError(ValueError):
    pass


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\^|\+|\-|\*|/|\(|\)|=|,|>))")


def tokenize(text: str, line_no: Optional[int] = None, tensor_mode: bool = False):
    tokens: List[Tuple[str, str, int]] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SyntaxErrorWithPos(
                f"unexpected character {text[pos:].strip()[0]!r}", line_no, pos + 1)
        pos = m.end()
        if m.group(1):
            tokens.append(("num", m.group(1), m.start()))
        elif m.group(2):
            tokens.append(("ident", m.group(2), m.start()))
        else:
            tokens.append(("op", m.group(3), m.start()))
    # '->' arrives as '-' '>'
    out: List[Tuple[str, str, int]] = []
    i = 0
    while i < len(tokens):
        t = tokens[i]
        if (t[0] == "op" and t[1] == "-" and i + 1 < len(tokens)
                and tokens[i + 1][:2] == ("op", ">")):
            out.append(("op", "->", t[2]))
            i += 2
            continue
        if (tensor_mode and t[:2] == ("op", "(") and i + 2 < len(tokens)
                and tokens[i + 1][:2] == ("ident", "x")
                and tokens[i + 2][:2] == ("op", ")")):
            out.append(("op", "(x)", t[2]))
            i += 3
            continue
        out.append(t)
        i += 1
    return out


class _ExprParser:
    def __init__(self, tokens, gen_index: Dict[str, int], gens, line_no=None):
        self.tokens = tokens
        self.i = 0
        self.gen_index = gen_index
        self.gens = gens
        self.line_no = line_no

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, kind=None, value=None):
        t = self.peek()
        if t is None or (kind and t[0] != kind) or (value and t[1] != value):
            want = value or kind or "token"
            got = t[1] if t else "end of input"
            raise SyntaxErrorWithPos(f"expected {want}, got {got!r}", self.line_no,
                                     t[2] + 1 if t else None)
        self.i += 1
        return t

    def at_end(self):
        return self.i >= len(self.tokens)

    # -- grammar --------------------------------------------------------------

    def expr(self) -> Element:
        negate = False
        t = self.peek()
        if t and t[:2] == ("op", "-"):
            self.take()
            negate = True
        e = self.term()
        if negate:
            e = elem_neg(e)
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                e = elem_add(e, rhs) if t[1] == "+" else elem_sub(e, rhs)
            else:
                return e

    def term(self) -> Element:
        e = self.factor()
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] in ("*", "/"):
                self.take()
                rhs = self.factor()
                if t[1] == "*":
                    e = free_mul(e, rhs)
                else:
                    e = free_mul(e, _invert_scalar_element(rhs, self.line_no))
            else:
                return e

    def factor(self) -> Element:
        e = self.atom()
        t = self.peek()
        if t and t[:2] == ("op", "^"):
            self.take()
            sign = 1
            t = self.peek()
            if t and t[:2] == ("op", "-"):
                self.take()
                sign = -1
            num = self.take("num")
            k = sign * int(num[1])
            e = _element_power(e, k, self.gens, self.line_no)
        return e

    def atom(self) -> Element:
        t = self.peek()
        if t is None:
            raise SyntaxErrorWithPos("unexpected end of expression", self.line_no)
        if t[0] == "num":
            self.take()
            return elem_unit(Scalar.from_fraction(int(t[1])))
        if t[0] == "ident":
            self.take()
            name = t[1]
            g = self.gen_index.get(name)
            if g is not None:
                return elem_from_word(((g, 1),))
            symbol = SCALAR_SYMBOLS.get(name)
            if symbol is not None:
                return elem_unit(symbol)
            raise SemanticError(f"unknown identifier {name!r}"
                                + (f" (line {self.line_no})" if self.line_no else ""))
        if t[:2] == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        raise SyntaxErrorWithPos(f"unexpected token {t[1]!r}", self.line_no, t[2] + 1)


def _scalar_part(e: Element) -> Optional[Scalar]:
    if not e:
        return sc.ZERO
    if len(e) == 1 and EMPTY_WORD in e:
        return e[EMPTY_WORD]
    return None


def _invert_scalar_element(e: Element, line_no) -> Element:
    x = _scalar_part(e)
    if x is None:
        raise SemanticError("division by a non-scalar expression"
                            + (f" (line {line_no})" if line_no else ""))
    return elem_unit(x.inverse())


def _element_power(e: Element, k: int, gens, line_no) -> Element:
    x = _scalar_part(e)
    if x is not None:
        return elem_unit(x ** k)
    if k < 0:
        if len(e) == 1:
            (w, c), = e.items()
            if len(set(g for g, _ in w)) == 1 and gens[w[0][0]].invertible:
                g = w[0][0]
                total = sum(s for _, s in w)
                return elem_from_word(word_from_runs([(g, total * k)]), c ** k)
        raise SemanticError("negative powers need an invertible generator"
                            + (f" (line {line_no})" if line_no else ""))
    out = elem_unit()
    for _ in range(k):
        out = free_mul(out, e)
    return out


def parse_element(text: str, p_or_table, line_no: Optional[int] = None) -> Element:
    if isinstance(p_or_table, Presentation):
        gen_index, gens = p_or_table.gen_index, p_or_table.gens
    else:
        gen_index, gens = p_or_table
    tokens = tokenize(text, line_no)
    parser = _ExprParser(tokens, gen_index, gens, line_no)
    e = parser.expr()
    if not parser.at_end():
        t = parser.peek()
        raise SyntaxErrorWithPos(f"trailing input {t[1]!r}", line_no, t[2] + 1)
    return e


def parse_scalar(text: str) -> Scalar:
    e = parse_element(text, ({}, ()))
    x = _scalar_part(e)
    if x is None:
        raise SemanticError("expected a scalar expression")
    return x


def scalar_to_text(x: Scalar) -> str:
    return sc.scalar_to_text(x)


# ---------------------------------------------------------------------------
# spec files
# ---------------------------------------------------------------------------

MAP_KEYWORDS = ("coproduct", "counit", "antipode", "star")
SECTIONS = ("generators", "relations", "consequences", "maps", "transform",
            "pairing")


@dataclass
class SpecFile:
    name: str
    generators: List[Generator] = field(default_factory=list)
    relation_lines: List[Tuple[str, int]] = field(default_factory=list)
    consequence_lines: List[Tuple[str, int]] = field(default_factory=list)
    map_lines: List[Tuple[str, str, str, int]] = field(default_factory=list)
    transform_rows: List[List[str]] = field(default_factory=list)
    pairing: Dict[str, str] = field(default_factory=dict)


def parse_spec(text: str, name: str = "user") -> SpecFile:
    spec = SpecFile(name)
    section = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.rstrip(":").strip().lower()
        if line.endswith(":") and head in SECTIONS:
            section = head
            continue
        if section is None:
            raise SyntaxErrorWithPos(f"content before any section: {line!r}", line_no)
        if section == "generators":
            spec.generators.append(_parse_generator_line(line, line_no))
        elif section == "relations":
            spec.relation_lines.append((line, line_no))
        elif section == "consequences":
            spec.consequence_lines.append((line, line_no))
        elif section == "maps":
            m = re.match(r"(coproduct|counit|antipode|star)\s+([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.+)$", line)
            if not m:
                raise SyntaxErrorWithPos(f"bad map line: {line!r}", line_no)
            spec.map_lines.append((m.group(1), m.group(2), m.group(3), line_no))
        elif section == "transform":
            spec.transform_rows.append([cell.strip() for cell in line.split(",")])
        elif section == "pairing":
            m = re.match(r"convention\s+(theta-left|theta-middle)$", line)
            if not m:
                raise SyntaxErrorWithPos(f"bad pairing line: {line!r}", line_no)
            spec.pairing["convention"] = m.group(1)
    return spec


def _parse_generator_line(line: str, line_no: int) -> Generator:
    m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*:\s*(even|odd)(\s+invertible)?$", line)
    if not m:
        raise SyntaxErrorWithPos(f"bad generator line: {line!r}", line_no)
    parity = 0 if m.group(2) == "even" else 1
    return Generator(m.group(1), parity, bool(m.group(3)))


def relations_from_spec(spec: SpecFile, p_table) -> List[Element]:
    out = []
    for line, line_no in spec.relation_lines:
        out.append(parse_relation(line, p_table, line_no))
    return out


def parse_relation(line: str, p_or_table, line_no=None) -> Element:
    """An equality or arrow line becomes the free element LHS - RHS."""
    if isinstance(p_or_table, Presentation):
        table = (p_or_table.gen_index, p_or_table.gens)
    else:
        table = p_or_table
    tokens = tokenize(line, line_no)
    split = [i for i, t in enumerate(tokens) if t[0] == "op" and t[1] in ("=", "->")]
    if len(split) != 1:
        raise SyntaxErrorWithPos("a relation needs exactly one '=' or '->'", line_no)
    k = split[0]
    lhs_p = _ExprParser(tokens[:k], table[0], table[1], line_no)
    rhs_p = _ExprParser(tokens[k + 1:], table[0], table[1], line_no)
    lhs = lhs_p.expr()
    if not lhs_p.at_end():
        raise SyntaxErrorWithPos("trailing input on relation left side", line_no)
    rhs = rhs_p.expr()
    if not rhs_p.at_end():
        raise SyntaxErrorWithPos("trailing input on relation right side", line_no)
    return elem_sub(lhs, rhs)


def parse_tensor(text: str, p: Presentation, legs: int, line_no=None) -> TensorElement:
    """Map right-hand side: sum of leg expressions separated by (x)."""
    tokens = tokenize(text, line_no, tensor_mode=True)
    # split on top-level binary + and - into summands; a sign right after an
    # operator (e.g. the exponent in x^-1) stays with its expression
    out: TensorElement = {}
    depth = 0
    chunks: List[Tuple[int, List]] = []
    cur: List = []
    cur_sign = 1
    prev = None
    for t in tokens:
        if t[0] == "op" and t[1] == "(":
            depth += 1
        elif t[0] == "op" and t[1] == ")":
            depth -= 1
        if depth == 0 and t[0] == "op" and t[1] in "+-":
            binary = prev is not None and not (
                prev[0] == "op"
                and prev[1] in ("^", "+", "-", "*", "/", "(x)"))
            if binary:
                chunks.append((cur_sign, cur))
                cur = []
                cur_sign = 1 if t[1] == "+" else -1
                prev = t
                continue
            if not cur:
                if t[1] == "-":
                    cur_sign = -cur_sign
                prev = t
                continue
        cur.append(t)
        prev = t
    if cur:
        chunks.append((cur_sign, cur))
    from .algebra import tensor_add_scaled

    for sgn, chunk in chunks:
        legs_tokens: List[List] = [[]]
        depth = 0
        for t in chunk:
            if t[0] == "op" and t[1] == "(":
                depth += 1
            elif t[0] == "op" and t[1] == ")":
                depth -= 1
            if depth == 0 and t[:2][0] == "op" and t[1] == "(x)":
                legs_tokens.append([])
                continue
            legs_tokens[-1].append(t)
        if len(legs_tokens) != legs:
            raise SyntaxErrorWithPos(
                f"expected {legs} tensor legs, found {len(legs_tokens)}", line_no)
        leg_elems = []
        for lt in legs_tokens:
            ep = _ExprParser(lt, p.gen_index, p.gens, line_no)
            leg_elems.append(ep.expr())
            if not ep.at_end():
                raise SyntaxErrorWithPos("trailing input in tensor leg", line_no)
        # expand the product of leg elements into tensor keys
        keys = [()]
        coeffs = [Scalar.from_fraction(sgn)]
        for leg in leg_elems:
            nk, nc = [], []
            for k, ccur in zip(keys, coeffs):
                for w, cw in leg.items():
                    nk.append(k + (w,))
                    nc.append(ccur * cw)
            keys, coeffs = nk, nc
        term = {}
        for k, ccur in zip(keys, coeffs):
            if not ccur.is_zero():
                term[k] = term.get(k, sc.ZERO) + ccur
        tensor_add_scaled(out, term, ONE)
    return out
