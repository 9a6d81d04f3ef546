"""A small expression language for Weyl-algebra operators.

Grammar (whitespace is ignored)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { "*" unary } ;
    unary   = ("-" | "+") unary | power ;
    power   = primary [ "^" INT ] ;
    primary = INT [ "/" INT ]
            | VEC "_" INT                      (* coordinate or derivative *)
            | "c" "(" VEC "," VEC ")"          (* sum_k u_k v_k *)
            | ("lap" | "norm2" | "E") "(" BASE ")"
            | "comm" "(" expr "," expr ")"
            | ("Q" | "P") "(" SINT "," SINT ")"
            | "Ds" | "Xs" | "L" | "R" | "E"
            | "(" expr ")" ;
    VEC     = "x" | "y" | "z" | "dx" | "dy" | "dz" ;
    BASE    = "x" | "y" | "z" ;

Products are operator composition, so ``dx_1 * x_1`` elaborates to
``x_1*dx_1 + 1``. A bare ``E`` is ``E(x) + E(y)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Tuple, Union

from .poly import Polynomial
from .weyl import WeylOperator, commutator, compose

VECTORS = ("x", "y", "z", "dx", "dy", "dz")
BASES = ("x", "y", "z")
CONSTANTS = ("Ds", "Xs", "L", "R", "E")
FUNCTIONS = ("c", "lap", "norm2", "E", "comm", "Q", "P")
MAX_POWER = 256


class DSLError(ValueError):
    """Positioned diagnostic raised for any malformed operator expression."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.message = message
        self.pos = pos


class ParseError(DSLError):
    pass


class UnknownNameError(DSLError):
    pass


class ArityError(DSLError):
    pass


class IndexRangeError(DSLError):
    pass


class NotAnOperatorError(DSLError):
    """Raised when a projected generator P(.,.) must become a WeylOperator."""


# AST


@dataclass(frozen=True)
class Num:
    value: Fraction
    pos: int


@dataclass(frozen=True)
class Coord:
    vec: str
    index: int
    pos: int


@dataclass(frozen=True)
class Contract:
    left: str
    right: str
    pos: int


@dataclass(frozen=True)
class VecFunc:
    name: str  # lap | norm2 | E
    base: str
    pos: int


@dataclass(frozen=True)
class Const:
    name: str
    pos: int


@dataclass(frozen=True)
class Generator:
    kind: str  # Q | P
    label: Tuple[int, int]
    pos: int


@dataclass(frozen=True)
class Neg:
    arg: "OpExpr"
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str  # + - *
    left: "OpExpr"
    right: "OpExpr"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "OpExpr"
    exp: int
    pos: int


@dataclass(frozen=True)
class Comm:
    left: "OpExpr"
    right: "OpExpr"
    pos: int


OpExpr = Union[Num, Coord, Contract, VecFunc, Const, Generator, Neg, BinOp, Pow, Comm]


# lexer

_PUNCT = set("+-*^/(),_")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isascii() and ch.isalpha():
            j = i
            while j < n and text[j].isascii() and text[j].isalnum():
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in _PUNCT:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, offset: int = 0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok[0] != "end":
            self.i += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.next()
        if tok[0] != kind:
            found = tok[1] if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {what}, found {found!r}", tok[2])
        return tok

    def parse(self) -> OpExpr:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self) -> OpExpr:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()
            node = BinOp(op[0], node, self.term(), op[2])
        return node

    def term(self) -> OpExpr:
        node = self.unary()
        while self.peek()[0] == "*":
            op = self.next()
            node = BinOp("*", node, self.unary(), op[2])
        return node

    def unary(self) -> OpExpr:
        tok = self.peek()
        if tok[0] == "-":
            self.next()
            return Neg(self.unary(), tok[2])
        if tok[0] == "+":
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> OpExpr:
        node = self.primary()
        if self.peek()[0] == "^":
            op = self.next()
            tok = self.expect("int", "integer exponent")
            exp = int(tok[1])
            if exp > MAX_POWER:
                raise ParseError(f"exponent {exp} exceeds limit {MAX_POWER}", tok[2])
            node = Pow(node, exp, op[2])
        return node

    def signed_int(self) -> int:
        sign = 1
        while self.peek()[0] in ("-", "+"):
            if self.next()[0] == "-":
                sign = -sign
        return sign * int(self.expect("int", "integer")[1])

    def vector_arg(self, allowed, func: str) -> str:
        tok = self.peek()
        if tok[0] != "name":
            raise ArityError(f"{func}() expects a vector symbol argument", tok[2])
        self.next()
        if tok[1] not in allowed:
            raise UnknownNameError(
                f"{tok[1]!r} is not one of {', '.join(allowed)}", tok[2]
            )
        return tok[1]

    def close_call(self, func: str, nargs: int, start: int) -> None:
        tok = self.peek()
        if tok[0] == ",":
            raise ArityError(f"{func}() takes {nargs} argument(s)", tok[2])
        if tok[0] != ")":
            found = tok[1] if tok[0] != "end" else "end of input"
            raise ParseError(f"expected ')' to close {func}(, found {found!r}", tok[2])
        self.next()

    def comma(self, func: str, nargs: int):
        tok = self.peek()
        if tok[0] == ")":
            raise ArityError(f"{func}() takes {nargs} arguments", tok[2])
        self.expect(",", "','")

    def primary(self) -> OpExpr:
        tok = self.next()
        kind, value, pos = tok
        if kind == "int":
            num = Fraction(int(value))
            if self.peek()[0] == "/":
                self.next()
                den = self.expect("int", "denominator")
                if int(den[1]) == 0:
                    raise ParseError("zero denominator", den[2])
                num = num / int(den[1])
            return Num(num, pos)
        if kind == "(":
            node = self.expr()
            self.expect(")", "')'")
            return node
        if kind != "name":
            found = value if kind != "end" else "end of input"
            raise ParseError(f"expected an operand, found {found!r}", pos)
        if self.peek()[0] == "(":
            if value not in FUNCTIONS:
                raise UnknownNameError(f"unknown function {value!r}", pos)
            self.next()
            return self.call(value, pos)
        if value in VECTORS:
            if self.peek()[0] != "_":
                raise ParseError(
                    f"vector symbol {value!r} needs an index (e.g. {value}_1) outside c(), lap(), norm2(), E()",
                    pos,
                )
            self.next()
            idx = self.expect("int", "index")
            return Coord(value, int(idx[1]), pos)
        if value in CONSTANTS:
            return Const(value, pos)
        if value in FUNCTIONS:
            raise ArityError(f"{value} must be called with arguments", pos)
        raise UnknownNameError(f"unknown name {value!r}", pos)

    def call(self, func: str, pos: int) -> OpExpr:
        if func == "c":
            u = self.vector_arg(VECTORS, "c")
            self.comma("c", 2)
            v = self.vector_arg(VECTORS, "c")
            self.close_call("c", 2, pos)
            return Contract(u, v, pos)
        if func in ("lap", "norm2", "E"):
            b = self.vector_arg(BASES, func)
            self.close_call(func, 1, pos)
            return VecFunc(func, b, pos)
        if func == "comm":
            a = self.expr()
            self.comma("comm", 2)
            b = self.expr()
            self.close_call("comm", 2, pos)
            return Comm(a, b, pos)
        # Q / P
        lam = self.signed_int()
        self.comma(func, 2)
        mu = self.signed_int()
        self.close_call(func, 2, pos)
        return Generator(func, (lam, mu), pos)


def parse_op(text: str) -> OpExpr:
    """Parse operator text into an AST; raises :class:`DSLError` on bad input."""
    if not isinstance(text, str):
        raise ParseError("expression must be a string", 0)
    return _Parser(text).parse()


# elaboration

_NAME_OF = {"x": ("x", False), "y": ("y", False), "z": ("z", False),
            "dx": ("x", True), "dy": ("y", True), "dz": ("z", True)}


def _symbol(m: int, vec: str, i: int) -> WeylOperator:
    base, is_der = _NAME_OF[vec]
    if is_der:
        return WeylOperator.derivative(m, base, i)
    return WeylOperator.variable(m, base, i)


def contraction(m: int, u: str, v: str) -> WeylOperator:
    out = WeylOperator.zero(m)
    for k in range(1, m + 1):
        out = out + compose(_symbol(m, u, k), _symbol(m, v, k))
    return out


def laplacian(m: int, base: str) -> WeylOperator:
    return contraction(m, "d" + base, "d" + base)


def norm2(m: int, base: str) -> WeylOperator:
    return contraction(m, base, base)


def euler(m: int, base: str) -> WeylOperator:
    return contraction(m, base, "d" + base)


def _named_constant(name: str, m: int) -> WeylOperator:
    from .realizations import named_operator

    return named_operator(name, m)


def _generator_op(label, m: int, pos: int) -> WeylOperator:
    from .realizations import q_operator

    try:
        return q_operator(m, label)
    except KeyError:
        raise UnknownNameError(f"no generator with label {label}", pos) from None


def elaborate(e: OpExpr, m: int) -> WeylOperator:
    """Turn an AST into a canonical operator in dimension ``m``."""
    if m < 1:
        raise ValueError("m must be positive")
    if isinstance(e, Num):
        return WeylOperator.scalar(m, e.value)
    if isinstance(e, Coord):
        if not 1 <= e.index <= m:
            raise IndexRangeError(f"index {e.index} out of range 1..{m}", e.pos)
        return _symbol(m, e.vec, e.index)
    if isinstance(e, Contract):
        return contraction(m, e.left, e.right)
    if isinstance(e, VecFunc):
        return {"lap": laplacian, "norm2": norm2, "E": euler}[e.name](m, e.base)
    if isinstance(e, Const):
        return _named_constant(e.name, m)
    if isinstance(e, Generator):
        if e.kind == "P":
            raise NotAnOperatorError(
                "P(.,.) is a projected map, not a Weyl operator; use compile_map", e.pos
            )
        return _generator_op(e.label, m, e.pos)
    if isinstance(e, Neg):
        return -elaborate(e.arg, m)
    if isinstance(e, BinOp):
        a, b = elaborate(e.left, m), elaborate(e.right, m)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        return compose(a, b)
    if isinstance(e, Pow):
        return elaborate(e.base, m) ** e.exp
    if isinstance(e, Comm):
        return commutator(elaborate(e.left, m), elaborate(e.right, m))
    raise TypeError(f"not an OpExpr: {e!r}")


def _contains_projection(e: OpExpr) -> bool:
    if isinstance(e, Generator):
        return e.kind == "P"
    if isinstance(e, (Neg,)):
        return _contains_projection(e.arg)
    if isinstance(e, Pow):
        return _contains_projection(e.base)
    if isinstance(e, (BinOp, Comm)):
        return _contains_projection(e.left) or _contains_projection(e.right)
    return False


PolyMap = Callable[[Polynomial], Polynomial]


def compile_map(e: OpExpr, m: int, context=None) -> PolyMap:
    """Polynomial-to-polynomial map for any expression, including P(.,.) generators."""
    if not _contains_projection(e):
        return elaborate(e, m).apply
    if isinstance(e, Generator):
        from .transvector import ProjectorContext, generator

        ctx = context or ProjectorContext(m)
        try:
            g = generator(ctx, e.label)
        except KeyError:
            raise UnknownNameError(f"no generator with label {e.label}", e.pos) from None
        return g.apply
    if isinstance(e, Neg):
        f = compile_map(e.arg, m, context)
        return lambda p: -f(p)
    if isinstance(e, Pow):
        f = compile_map(e.base, m, context)

        def power(p, f=f, n=e.exp):
            for _ in range(n):
                p = f(p)
            return p

        return power
    f = compile_map(e.left, m, context)
    g = compile_map(e.right, m, context)
    if isinstance(e, Comm):
        return lambda p: f(g(p)) - g(f(p))
    if e.op == "+":
        return lambda p: f(p) + g(p)
    if e.op == "-":
        return lambda p: f(p) - g(p)
    return lambda p: f(g(p))


def op(text: str, m: int) -> WeylOperator:
    """Shorthand for ``elaborate(parse_op(text), m)``."""
    return elaborate(parse_op(text), m)


def poly(text: str, m: int) -> Polynomial:
    """A polynomial written as an operator expression, applied to the constant 1."""
    return op(text, m).apply(Polynomial.one(m))


def unparse(e: OpExpr) -> str:
    if isinstance(e, Num):
        v = e.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(e, Coord):
        return f"{e.vec}_{e.index}"
    if isinstance(e, Contract):
        return f"c({e.left},{e.right})"
    if isinstance(e, VecFunc):
        return f"{e.name}({e.base})"
    if isinstance(e, Const):
        return e.name
    if isinstance(e, Generator):
        return f"{e.kind}({e.label[0]},{e.label[1]})"
    if isinstance(e, Neg):
        return f"-({unparse(e.arg)})"
    if isinstance(e, Pow):
        return f"({unparse(e.base)})^{e.exp}"
    if isinstance(e, Comm):
        return f"comm({unparse(e.left)}, {unparse(e.right)})"
    return f"({unparse(e.left)} {e.op} {unparse(e.right)})"
