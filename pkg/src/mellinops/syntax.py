"""Text syntax for operators: tokenizer, parser, canonical printer.

Grammar (whitespace ignored; '*' is noncommutative and order-preserving):

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)?
    atom   := generator | rational | '(' expr ')'

Generators are ``t``, ``tinv``, ``th`` (the Euler operator t*d/dt), ``s``,
``tau``, ``tauinv``, with an underscore index suffix for several variables
(``t_2``, ``tau_3``); the suffix may be omitted when p = 1.  ``Dt`` is a
convenience token for the plain derivative d/dt and expands to tinv*th.
Rational literals look like ``5`` or ``3/2``.  Parse errors carry the byte
offset of the offending token.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import IndexOutOfRange, MixedAlgebra, ParseError
from .ore import Algebra, GenKind, OreOperator, S_SIDE, T_SIDE

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<gen>(?:tauinv|tinv|tau|th|t|s|Dt)(?:_(?P<idx>\d+))?)
  | (?P<rat>\d+(?:/\d+)?)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)

_GEN_BY_NAME = {
    "t": GenKind.T,
    "tinv": GenKind.TINV,
    "th": GenKind.THETA,
    "s": GenKind.S,
    "tau": GenKind.TAU,
    "tauinv": GenKind.TAUINV,
}


class _Token:
    __slots__ = ("kind", "text", "index", "offset")

    def __init__(self, kind, text, index, offset):
        self.kind = kind
        self.text = text
        self.index = index
        self.offset = offset

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}@{self.offset})"


def _byte_offset(text, pos):
    return len(text[:pos].encode("utf-8"))


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", _byte_offset(text, pos))
        if m.lastgroup != "ws" and not m.group("ws"):
            offset = _byte_offset(text, pos)
            if m.group("gen"):
                name = m.group("gen")
                idx = m.group("idx")
                base = name.split("_")[0]
                # reject things like "tx" or "t2": the generator must not be
                # glued to more identifier characters
                end = m.end()
                if end < len(text) and (text[end].isalnum() or text[end] == "_"):
                    raise ParseError(f"malformed symbol near {name!r}", offset)
                tokens.append(_Token("gen", base, int(idx) if idx else None, offset))
            elif m.group("rat"):
                tokens.append(_Token("rat", m.group("rat"), None, offset))
            else:
                tokens.append(_Token(m.group("op"), m.group("op"), None, offset))
        pos = m.end()
    tokens.append(_Token("end", "", None, _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, tokens, algebra, arity):
        self.tokens = tokens
        self.pos = 0
        self.algebra = algebra
        self.arity = arity

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text or 'end of input'!r}", tok.offset)
        self.pos += 1
        return tok

    def parse_expr(self):
        sign = 1
        if self.peek().kind in ("+", "-"):
            if self.take().kind == "-":
                sign = -1
        total = self.parse_term() * sign
        while self.peek().kind in ("+", "-"):
            if self.take().kind == "+":
                total = total + self.parse_term()
            else:
                total = total - self.parse_term()
        return total

    def parse_term(self):
        out = self.parse_factor()
        while self.peek().kind == "*":
            self.take()
            out = out * self.parse_factor()
        return out

    def parse_factor(self):
        atom = self.parse_atom()
        if self.peek().kind == "^":
            self.take()
            tok = self.take("rat")
            if "/" in tok.text:
                raise ParseError("exponent must be a natural number", tok.offset)
            return atom ** int(tok.text)
        return atom

    def parse_atom(self):
        tok = self.peek()
        if tok.kind == "gen":
            self.take()
            index = tok.index if tok.index is not None else 1
            if not 1 <= index <= self.arity:
                raise IndexOutOfRange(f"index {index} not in 1..{self.arity}")
            if tok.text == "Dt":
                return OreOperator.generator(
                    GenKind.TINV, index, self.algebra, self.arity
                ) * OreOperator.generator(GenKind.THETA, index, self.algebra, self.arity)
            kind = _GEN_BY_NAME[tok.text]
            if self.algebra is Algebra.D and kind in S_SIDE:
                raise MixedAlgebra(f"{tok.text} is not a D generator")
            if self.algebra is Algebra.S and kind in T_SIDE:
                raise MixedAlgebra(f"{tok.text} is not an S generator")
            return OreOperator.generator(kind, index, self.algebra, self.arity)
        if tok.kind == "rat":
            self.take()
            return OreOperator.scalar(Fraction(tok.text), self.algebra, self.arity)
        if tok.kind == "(":
            self.take()
            inner = self.parse_expr()
            self.take(")")
            return inner
        raise ParseError(f"expected an atom, found {tok.text or 'end of input'!r}", tok.offset)


def parse(text, algebra=None, arity=None):
    """Parse operator text into normal form.

    The algebra is inferred from the generators present when no hint is
    given; mixing the two sides without the combined-algebra hint raises
    MixedAlgebra.  The arity defaults to the largest index seen.
    """
    tokens = tokenize(text)
    kinds = set()
    max_index = 1
    for tok in tokens:
        if tok.kind == "gen":
            if tok.text == "Dt":
                kinds.add(GenKind.TINV)
            else:
                kinds.add(_GEN_BY_NAME[tok.text])
            if tok.index is not None:
                max_index = max(max_index, tok.index)
    has_t = bool(kinds & T_SIDE)
    has_s = bool(kinds & S_SIDE)
    if algebra is None:
        if has_t and has_s:
            raise MixedAlgebra(
                "text mixes torus-side and shift-side generators; "
                "pass the combined-algebra hint to allow this"
            )
        algebra = Algebra.S if has_s else Algebra.D
    else:
        algebra = Algebra(algebra)
        if has_t and has_s and algebra is not Algebra.DTILDE:
            raise MixedAlgebra("text mixes torus-side and shift-side generators")
    if arity is None:
        arity = max_index
    elif max_index > arity:
        raise IndexOutOfRange(f"index {max_index} not in 1..{arity}")

    parser = _Parser(tokens, algebra, arity)
    out = parser.parse_expr()
    end = parser.take()
    if end.kind != "end":
        raise ParseError(f"trailing input {end.text!r}", end.offset)
    return out


# -- canonical printing ------------------------------------------------------

_SLOT_NAMES = (("t", "tinv"), ("th", None), ("tau", "tauinv"), ("s", None))


def _format_monomial(key, arity):
    parts = []
    for slot, (pos_name, neg_name) in enumerate(_SLOT_NAMES):
        for j, e in enumerate(key[slot], start=1):
            if e == 0:
                continue
            if e > 0:
                name = pos_name
                power = e
            else:
                name = neg_name
                power = -e
            suffix = f"_{j}" if arity > 1 else ""
            piece = f"{name}{suffix}"
            if power > 1:
                piece += f"^{power}"
            parts.append(piece)
    return "*".join(parts)


def format_operator(P):
    """Deterministic canonical text; ``parse(format_operator(P)) == P``."""
    if P.is_zero():
        return "0"
    pieces = []
    for key in sorted(P.terms, reverse=True):
        coeff = P.terms[key]
        mono = _format_monomial(key, P.arity)
        if not mono:
            body = str(abs(coeff))
        elif abs(coeff) == 1:
            body = mono
        else:
            body = f"{abs(coeff)}*{mono}"
        pieces.append(("-" if coeff < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
