"""Surface syntax: TeX-style tokens, three selectable notations, a top-down
operator-precedence parser, a minimal-parenthesis printer, and a JSON tree
form for tooling.

Notations:

* ``relevance`` -- ``\\to \\circ \\sim \\Rightarrow \\coimp \\fures`` plus
  ``\\land \\lor \\mathbf t \\top \\bot``.
* ``bi`` -- multiplicative ``*`` and ``-*`` with ``\\to`` denoting the
  Heyting arrow; relevant negation is not part of this notation.
* ``ra`` -- relevance tokens plus classical negation ``\\neg x``
  (elaborated to ``x \\Rightarrow \\bot``) and postfix converse
  ``x^\\smallsmile`` (elaborated to ``\\sim(x \\Rightarrow \\bot)``).

Precedence, loosest to tightest: implication-family (right-associative;
mixing different implication operators in one chain is a parse error),
``\\lor``, ``\\land``, fusion, unary negations, postfix converse.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from . import formula as fm
from .formula import Formula

__all__ = [
    "SyntaxMode",
    "ParseError",
    "parse",
    "to_text",
    "formula_to_json",
    "formula_from_json",
]


class SyntaxMode(enum.Enum):
    RELEVANCE = "relevance"
    BI = "bi"
    RELATION_ALGEBRA = "ra"


class ParseError(Exception):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message
        super().__init__(f"{message} (at offset {position})")


# Surface token for each connective, per mode.  An absent entry means the
# connective cannot be written (or printed) in that notation.
_RELEVANCE_OPS = {
    fm.IMP: "\\to",
    fm.HIMP: "\\Rightarrow",
    fm.COIMP: "\\coimp",
    fm.RRES: "\\fures",
    fm.OR: "\\lor",
    fm.AND: "\\land",
    fm.FUS: "\\circ",
    fm.NEG: "\\sim",
    fm.NEG_FLAT: "\\sim^\\flat",
    fm.NEG_SHARP: "\\sim^\\sharp",
}
_BI_OPS = {
    fm.IMP: "-*",
    fm.HIMP: "\\to",
    fm.COIMP: "\\coimp",
    fm.RRES: "\\fures",
    fm.OR: "\\lor",
    fm.AND: "\\land",
    fm.FUS: "*",
}

_CONST_TOKENS = {fm.T: "\\mathbf t", fm.TOP: "\\top", fm.BOT: "\\bot"}


def _op_tokens(mode: SyntaxMode) -> dict[str, str]:
    return _BI_OPS if mode is SyntaxMode.BI else _RELEVANCE_OPS


IMPL_OPS = (fm.IMP, fm.HIMP, fm.COIMP, fm.RRES)

_PREC = {fm.IMP: 10, fm.HIMP: 10, fm.COIMP: 10, fm.RRES: 10,
         fm.OR: 20, fm.AND: 30, fm.FUS: 40,
         fm.NEG: 50, fm.NEG_FLAT: 50, fm.NEG_SHARP: 50}


@dataclass
class _Token:
    kind: str   # "op", "const", "ident", "nom", "cnom", "lparen", "rparen",
                # "neg_classical", "converse", "end"
    value: str
    pos: int
    index: int = 0  # for nom/cnom tokens


def _read_subscript(text: str, i: int) -> tuple[int, int]:
    """Parse ``_k`` or ``_{k}`` starting at text[i] == '_'; return (value, next)."""
    j = i + 1
    braced = j < len(text) and text[j] == "{"
    if braced:
        j += 1
    start = j
    while j < len(text) and text[j].isdigit():
        j += 1
    if j == start:
        raise ParseError(i, "expected digits in subscript")
    value = int(text[start:j])
    if braced:
        if j >= len(text) or text[j] != "}":
            raise ParseError(j, "unterminated subscript brace")
        j += 1
    return value, j


def _tokenize(text: str, mode: SyntaxMode) -> list[_Token]:
    ops = _op_tokens(mode)
    op_by_token = {tok: op for op, tok in ops.items()}
    const_by_token = {tok: c for c, tok in _CONST_TOKENS.items()}
    tokens: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "(":
            tokens.append(_Token("lparen", "(", i))
            i += 1
            continue
        if c == ")":
            tokens.append(_Token("rparen", ")", i))
            i += 1
            continue
        if mode is SyntaxMode.BI and c == "-" and text[i:i + 2] == "-*":
            tokens.append(_Token("op", "-*", i))
            i += 2
            continue
        if mode is SyntaxMode.BI and c == "*":
            tokens.append(_Token("op", "*", i))
            i += 1
            continue
        if c == "^":
            # postfix converse decoration, relation-algebra mode only
            for form in ("^\\smallsmile", "^{\\smallsmile}"):
                if text.startswith(form, i):
                    if mode is not SyntaxMode.RELATION_ALGEBRA:
                        raise ParseError(i, "converse is only available in ra mode")
                    tokens.append(_Token("converse", form, i))
                    i += len(form)
                    break
            else:
                raise ParseError(i, "unknown token '^'")
            continue
        if c == "\\":
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word == "\\sim":
                # may continue as \sim^\flat / \sim^\sharp (braces optional)
                for suffix, op in (("^\\flat", fm.NEG_FLAT), ("^{\\flat}", fm.NEG_FLAT),
                                   ("^\\sharp", fm.NEG_SHARP), ("^{\\sharp}", fm.NEG_SHARP)):
                    if text.startswith(suffix, j):
                        if mode is SyntaxMode.BI:
                            raise ParseError(i, "negation is not part of the bi notation")
                        tokens.append(_Token("op", ops[op], i))
                        j += len(suffix)
                        break
                else:
                    if mode is SyntaxMode.BI:
                        raise ParseError(i, "negation is not part of the bi notation")
                    tokens.append(_Token("op", "\\sim", i))
                i = j
                continue
            if word == "\\neg":
                if mode is not SyntaxMode.RELATION_ALGEBRA:
                    raise ParseError(i, "classical negation is only available in ra mode")
                tokens.append(_Token("neg_classical", word, i))
                i = j
                continue
            if word == "\\mathbf":
                k = j
                while k < n and text[k].isspace():
                    k += 1
                braced = k < n and text[k] == "{"
                if braced:
                    k += 1
                if k >= n or not text[k].isalpha():
                    raise ParseError(k, "expected letter after \\mathbf")
                letter = text[k]
                k += 1
                index = None
                if k < n and text[k] == "_":
                    index, k = _read_subscript(text, k)
                if braced:
                    if k < n and text[k] == "_" and index is None:
                        index, k = _read_subscript(text, k)
                    if k >= n or text[k] != "}":
                        raise ParseError(k, "unterminated \\mathbf brace")
                    k += 1
                if k < n and text[k] == "_" and index is None:
                    index, k = _read_subscript(text, k)
                tokens.append(_mathbf_token(letter, index, i))
                i = k
                continue
            if word in op_by_token:
                tokens.append(_Token("op", word, i))
                i = j
                continue
            if word in const_by_token:
                tokens.append(_Token("const", word, i))
                i = j
                continue
            raise ParseError(i, f"unknown token '{word}'")
        if c.isalpha():
            j = i + 1
            name = c
            if j < n and text[j] == "_":
                sub, j = _read_subscript(text, j)
                name = f"{c}_{sub}"
            tokens.append(_Token("ident", name, i))
            i = j
            continue
        raise ParseError(i, f"unknown token {c!r}")
    tokens.append(_Token("end", "", n))
    return tokens


def _mathbf_token(letter: str, index: int | None, pos: int) -> _Token:
    if letter == "t":
        if index is not None:
            raise ParseError(pos, "\\mathbf t takes no subscript")
        return _Token("const", "\\mathbf t", pos)
    if letter == "i":
        return _Token("nom", "\\mathbf i", pos, index=index or 0)
    if letter == "j":
        return _Token("nom", "\\mathbf j", pos, index=1 if index is None else index)
    if letter == "m":
        return _Token("cnom", "\\mathbf m", pos, index=index or 0)
    if letter == "n":
        return _Token("cnom", "\\mathbf n", pos, index=1 if index is None else index)
    raise ParseError(pos, f"unknown bold atom '\\mathbf {letter}'")


class _Parser:
    def __init__(self, tokens: list[_Token], mode: SyntaxMode):
        self.tokens = tokens
        self.mode = mode
        self.pos = 0
        self.ops = _op_tokens(mode)
        self.op_by_token = {tok: op for op, tok in self.ops.items()}
        self.const_by_token = {tok: c for c, tok in _CONST_TOKENS.items()}
        self.prop_index: dict[str, int] = {}

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        phi = self.parse_impl()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(tok.pos, f"unexpected token {tok.value!r}")
        return phi

    def _peek_op(self) -> str | None:
        tok = self.peek()
        if tok.kind == "op":
            return self.op_by_token[tok.value]
        return None

    def parse_impl(self) -> Formula:
        left = self.parse_or()
        op = self._peek_op()
        if op not in IMPL_OPS:
            return left
        chain_op = op
        parts = [left]
        while True:
            op = self._peek_op()
            if op not in IMPL_OPS:
                break
            if op != chain_op:
                raise ParseError(
                    self.peek().pos,
                    "mixed implication operators require explicit parentheses",
                )
            self.advance()
            parts.append(self.parse_or())
        out = parts[-1]
        for part in reversed(parts[:-1]):
            out = Formula(chain_op, (part, out))
        return out

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self._peek_op() == fm.OR:
            self.advance()
            left = fm.disj(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_fus()
        while self._peek_op() == fm.AND:
            self.advance()
            left = fm.conj(left, self.parse_fus())
        return left

    def parse_fus(self) -> Formula:
        left = self.parse_unary()
        while self._peek_op() == fm.FUS:
            self.advance()
            left = fm.fus(left, self.parse_unary())
        return left

    def parse_unary(self) -> Formula:
        tok = self.peek()
        op = self._peek_op()
        if op in fm.UNARY_OPS:
            self.advance()
            return Formula(op, (self.parse_unary(),))
        if tok.kind == "neg_classical":
            self.advance()
            return fm.himp(self.parse_unary(), fm.bot())
        return self.parse_postfix()

    def parse_postfix(self) -> Formula:
        out = self.parse_primary()
        while self.peek().kind == "converse":
            self.advance()
            out = fm.neg(fm.himp(out, fm.bot()))
        return out

    def parse_primary(self) -> Formula:
        tok = self.advance()
        if tok.kind == "lparen":
            inner = self.parse_impl()
            closing = self.advance()
            if closing.kind != "rparen":
                raise ParseError(closing.pos, "expected ')'")
            return inner
        if tok.kind == "const":
            return Formula(self.const_by_token[tok.value])
        if tok.kind == "ident":
            if tok.value not in self.prop_index:
                self.prop_index[tok.value] = len(self.prop_index)
            return fm.var(self.prop_index[tok.value], tok.value)
        if tok.kind == "nom":
            return fm.nom(tok.index)
        if tok.kind == "cnom":
            return fm.cnom(tok.index)
        raise ParseError(tok.pos, f"expected a formula, got {tok.value!r}"
                         if tok.kind != "end" else "unexpected end of input")


def parse(source: str, mode: SyntaxMode = SyntaxMode.RELEVANCE) -> Formula:
    """Parse surface text into a Formula.  Raises ParseError on bad input.

    Propositional variable indices are assigned in order of first occurrence
    of each identifier; the surface name is kept for display.
    """
    return _Parser(_tokenize(source, mode), mode).parse()


def to_text(phi: Formula, mode: SyntaxMode = SyntaxMode.RELEVANCE) -> str:
    """Render a formula in the mode's notation with minimal parentheses.

    Raises ValueError when the formula uses a connective the notation lacks
    (relevant negation in bi mode, for instance).
    """
    ops = _op_tokens(mode)

    def render(node: Formula) -> str:
        if node.op == fm.ATOM:
            return node.atom.display()
        if node.op in _CONST_TOKENS:
            return _CONST_TOKENS[node.op]
        if node.op not in ops:
            raise ValueError(f"connective {node.op!r} has no {mode.value} notation")
        tok = ops[node.op]
        if node.op in fm.UNARY_OPS:
            arg = node.args[0]
            body = render(arg)
            if arg.op in fm.BINARY_OPS:
                body = f"({body})"
            return f"{tok} {body}"
        left, right = node.args
        prec = _PREC[node.op]
        lhs = render(left)
        # right-associative implication level: parenthesize any
        # implication-family left child, and a differing-op right child
        if node.op in IMPL_OPS:
            if left.op in IMPL_OPS:
                lhs = f"({lhs})"
            rhs = render(right)
            if right.op in IMPL_OPS and right.op != node.op:
                rhs = f"({rhs})"
            return f"{lhs} {tok} {rhs}"
        if left.op in fm.BINARY_OPS and _PREC[left.op] < prec:
            lhs = f"({lhs})"
        rhs = render(right)
        if right.op in fm.BINARY_OPS and _PREC[right.op] <= prec:
            rhs = f"({rhs})"
        return f"{lhs} {tok} {rhs}"

    return render(phi)


# JSON tree form: {"id": <relevance-mode token>, "a": [children]}

def _json_id(node: Formula) -> str:
    if node.op == fm.ATOM:
        return node.atom.display()
    if node.op in _CONST_TOKENS:
        return _CONST_TOKENS[node.op]
    return _RELEVANCE_OPS[node.op]


def formula_to_json(phi: Formula) -> dict:
    return {"id": _json_id(phi), "a": [formula_to_json(arg) for arg in phi.args]}


def formula_from_json(obj: dict) -> Formula:
    op_by_token = {tok: op for op, tok in _RELEVANCE_OPS.items()}
    const_by_token = {tok: c for c, tok in _CONST_TOKENS.items()}
    prop_index: dict[str, int] = {}

    def build(node: dict) -> Formula:
        ident = node["id"]
        args = tuple(build(a) for a in node.get("a", []))
        if ident in op_by_token:
            return Formula(op_by_token[ident], args)
        if ident in const_by_token:
            return Formula(const_by_token[ident])
        if args:
            raise ValueError(f"unknown connective id {ident!r}")
        if ident.startswith("\\mathbf"):
            leaf = parse(ident, SyntaxMode.RELEVANCE)
            if leaf.op != fm.ATOM:
                raise ValueError(f"unknown leaf id {ident!r}")
            return leaf
        # propositional variable: indices by first occurrence, as in parse()
        if ident not in prop_index:
            prop_index[ident] = len(prop_index)
        return fm.var(prop_index[ident], ident)

    return build(obj)
