"""Parser, evaluator and printer for ``.skn`` documents.

The grammar is described in ``GRAMMAR.md`` at the repository root.  Parsing
never raises anything but :class:`DSLError` (positioned diagnostics) or,
when a syntactically valid algebra fails its axioms, the engine's
:class:`~skeincalc.errors.AxiomError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import builtins as _builtins
from .algebra import AlgElem, TensorElem
from .errors import AxiomError, SkeinError
from .frobenius import FrobeniusSystem, extension_algebra, table_algebra
from .patterns import Pattern, Vertex
from .ring import RingDescriptor, RingElem, _is_prime
from .skein import ColoredCobordism, Component, SurfaceCombination
from .tqft import ARITY, CobordismWord, Gen

ITEM_KEYWORDS = ("algebra", "word", "surface", "combination", "pattern")
RESERVED = ("universal", "barnatan", "gadnaot", "group")
MAX_EXPONENT = 256


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class DSLError(Exception):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class _Fail(Exception):
    def __init__(self, message, pos):
        self.message, self.pos = message, pos


# -- lexer ----------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | op | eof
    value: str
    line: int
    col: int

    @property
    def pos(self):
        return (self.line, self.col)


def tokenize(text: str) -> list:
    toks = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start = col
        if ch.isascii() and (ch.isalpha() or ch == "_"):
            j = i
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(Token("ident", text[i:j], line, start))
            col += j - i
            i = j
            continue
        if ch.isascii() and ch.isdigit():
            j = i
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            toks.append(Token("int", text[i:j], line, start))
            col += j - i
            i = j
            continue
        if text.startswith("->", i):
            toks.append(Token("op", "->", line, start))
            i, col = i + 2, col + 2
            continue
        if ch in "{}()[];,:=+-*/^|":
            toks.append(Token("op", ch, line, start))
            i, col = i + 1, col + 1
            continue
        raise _Fail(f"unexpected character {ch!r}", (line, col))
    toks.append(Token("eof", "", line, col))
    return toks


# -- expression AST -------------------------------------------------------

@dataclass(frozen=True)
class Expr:
    op: str                  # num | name | neg | + | - | * | / | ^ | tensor
    args: tuple
    pos: tuple = field(compare=False, default=(0, 0))


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def render_expr(e: Expr, need: int = 0) -> str:
    if e.op == "num":
        return str(e.args[0])
    if e.op == "name":
        return e.args[0]
    if e.op == "tensor":
        return "[" + ", ".join(render_expr(a) for a in e.args) + "]"
    p = _PREC[e.op]
    if e.op == "neg":
        s = "-" + render_expr(e.args[0], p)
    elif e.op == "^":
        s = render_expr(e.args[0], p + 1) + "^" + str(e.args[1])
    else:
        left = render_expr(e.args[0], p)
        right = render_expr(e.args[1], p + 1)
        s = f"{left} {e.op} {right}" if e.op in "+-" else f"{left}{e.op}{right}"
    return f"({s})" if p < need else s


# -- parser ---------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, value, kind=None) -> bool:
        t = self.tok
        return t.value == value and (kind is None or t.kind == kind) and t.kind != "eof"

    def accept(self, value) -> bool:
        if self.at(value):
            self.next()
            return True
        return False

    def expect(self, value) -> Token:
        if not self.at(value):
            got = self.tok.value or "end of input"
            raise _Fail(f"expected {value!r}, found {got!r}", self.tok.pos)
        return self.next()

    def ident(self, what="name") -> Token:
        if self.tok.kind != "ident":
            got = self.tok.value or "end of input"
            raise _Fail(f"expected {what}, found {got!r}", self.tok.pos)
        return self.next()

    def integer(self) -> int:
        if self.tok.kind != "int":
            got = self.tok.value or "end of input"
            raise _Fail(f"expected an integer, found {got!r}", self.tok.pos)
        return int(self.next().value)

    # expressions
    def expr(self) -> Expr:
        left = self.term()
        while self.tok.kind == "op" and self.tok.value in "+-" and self.tok.value != "->":
            t = self.next()
            left = Expr(t.value, (left, self.term()), t.pos)
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.tok.kind == "op" and self.tok.value in ("*", "/"):
            t = self.next()
            left = Expr(t.value, (left, self.unary()), t.pos)
        return left

    def unary(self) -> Expr:
        if self.at("-", "op"):
            t = self.next()
            return Expr("neg", (self.unary(),), t.pos)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("^", "op"):
            t = self.next()
            n = self.integer()
            if n > MAX_EXPONENT:
                raise _Fail(f"exponent {n} exceeds {MAX_EXPONENT}", t.pos)
            base = Expr("^", (base, n), t.pos)
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "int":
            self.next()
            return Expr("num", (int(t.value),), t.pos)
        if t.kind == "ident":
            self.next()
            return Expr("name", (t.value,), t.pos)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.accept("["):
            items = []
            if not self.at("]"):
                items.append(self.expr())
                while self.accept(","):
                    items.append(self.expr())
            self.expect("]")
            return Expr("tensor", tuple(items), t.pos)
        raise _Fail(f"expected an expression, found {t.value or 'end of input'!r}", t.pos)

    # rings and groups
    def ring(self):
        t = self.ident("a ground ring")
        if t.value != "Z":
            raise _Fail(f"ground ring must start with Z, found {t.value!r}", t.pos)
        primes, names = None, None
        while self.at("["):
            b = self.next()
            if self.tok.kind == "int":
                if primes is not None:
                    raise _Fail("denominators declared twice", b.pos)
                primes = []
                while True:
                    one = self.tok
                    if self.integer() != 1:
                        raise _Fail("expected 1/p", one.pos)
                    self.expect("/")
                    pt = self.tok
                    p = self.integer()
                    if not _is_prime(p):
                        raise _Fail(f"{p} is not prime", pt.pos)
                    primes.append(p)
                    if not self.accept(","):
                        break
            else:
                if names is not None:
                    raise _Fail("indeterminates declared twice", b.pos)
                names = [self.ident("an indeterminate").value]
                while self.accept(","):
                    names.append(self.ident("an indeterminate").value)
                if len(set(names)) != len(names):
                    raise _Fail("duplicate indeterminate", b.pos)
            self.expect("]")
        return (tuple(primes or ()), tuple(names or ()))

    def group(self):
        orders = []
        while True:
            t = self.ident("Z")
            if t.value != "Z":
                raise _Fail("expected Z/n", t.pos)
            self.expect("/")
            nt = self.tok
            n = self.integer()
            if n < 1:
                raise _Fail("group order must be positive", nt.pos)
            orders.append(n)
            if not self.at("x", "ident"):
                break
            self.next()
        return tuple(orders)

    def ref(self):
        t = self.tok
        if self.at("group", "ident"):
            self.next()
            return ("group", self.group(), t.pos)
        return ("name", self.ident("an algebra name").value, t.pos)


def _render_ring(spec) -> str:
    primes, names = spec
    s = "Z"
    if primes:
        s += "[" + ",".join(f"1/{p}" for p in primes) + "]"
    if names:
        s += "[" + ",".join(names) + "]"
    return s


def _render_group(orders) -> str:
    return " x ".join(f"Z/{o}" for o in orders)


def _render_ref(ref) -> str:
    return f"group {_render_group(ref[1])}" if ref[0] == "group" else ref[1]


# -- document items -------------------------------------------------------

@dataclass
class Item:
    kind: str
    name: str
    value: Any
    line: int
    column: int
    source: Any = field(repr=False, default=None)
    algebra: str | None = None

    def __eq__(self, other):
        if not isinstance(other, Item):
            return NotImplemented
        return (self.kind, self.name, self.algebra) == (other.kind, other.name, other.algebra) \
            and self.value == other.value


class Document:
    """Ordered named definitions; built-in algebras resolve implicitly."""

    def __init__(self):
        self.items: dict = {}

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return list(self.items) == list(other.items) and all(
            self.items[k] == other.items[k] for k in self.items)

    def __getitem__(self, name):
        return self.items[name]

    def __contains__(self, name):
        return name in self.items

    def get(self, name, kind=None):
        item = self.items.get(name)
        if item is None:
            raise KeyError(f"no definition named {name!r}")
        if kind and item.kind not in ((kind,) if isinstance(kind, str) else kind):
            raise KeyError(f"{name!r} is a {item.kind}, not a {kind if isinstance(kind, str) else ' or '.join(kind)}")
        return item

    def algebra(self, name) -> FrobeniusSystem:
        if name in self.items and self.items[name].kind == "algebra":
            return self.items[name].value
        return resolve_builtin(name)

    def render(self) -> str:
        return "".join(_render_item(it) for it in self.items.values())


_builtin_cache: dict = {}


def resolve_builtin(name: str) -> FrobeniusSystem:
    """``universal``, ``barnatan``, ``gadnaot`` or ``group Z/2 x Z/3``."""
    if name not in _builtin_cache:
        if name in _builtins.BUILTIN_NAMES:
            _builtin_cache[name] = _builtins.builtin(name)
        elif name.startswith("group "):
            p = _Parser(name[len("group "):])
            orders = p.group()
            if p.tok.kind != "eof":
                raise KeyError(name)
            _builtin_cache[name] = _builtins.group_algebra(orders)
        else:
            raise KeyError(f"unknown algebra {name!r}")
    return _builtin_cache[name]


# -- evaluation -----------------------------------------------------------

class _Ctx:
    """Name environment for evaluating expressions."""

    def __init__(self, ring: RingDescriptor, algebra=None, extra=None):
        self.ring = ring
        self.algebra = algebra
        self.names = {}
        for n in ring.indeterminates:
            self.names[n] = ring.var(n)
        if algebra is not None:
            for g, coords in algebra.generators.items():
                self.names[g] = AlgElem(algebra, coords)
        if extra:
            self.names.update(extra)


def _to_ring(v, ring, pos):
    if isinstance(v, (int, Fraction)):
        if not ring.allows(v):
            raise _Fail(f"coefficient {v} not allowed in {ring}", pos)
        return RingElem.constant(ring, v)
    return v


def evaluate(e: Expr, ctx: _Ctx):
    try:
        return _eval(e, ctx)
    except _Fail:
        raise
    except (SkeinError, TypeError, ValueError, AttributeError, ZeroDivisionError, KeyError) as exc:
        raise _Fail(f"cannot evaluate {render_expr(e)}: {exc}", e.pos) from None


def _eval(e: Expr, ctx: _Ctx):
    if e.op == "num":
        return e.args[0]
    if e.op == "name":
        name = e.args[0]
        if name not in ctx.names:
            raise _Fail(f"unknown name {name!r}", e.pos)
        return ctx.names[name]
    if e.op == "neg":
        return -_eval(e.args[0], ctx)
    if e.op == "^":
        return _eval(e.args[0], ctx) ** e.args[1]
    if e.op == "tensor":
        if ctx.algebra is None:
            raise _Fail("tensor literal needs an algebra", e.pos)
        factors = []
        for a in e.args:
            v = _eval(a, ctx)
            if isinstance(v, (int, Fraction, RingElem)):
                v = ctx.algebra.scalar(_to_ring(v, ctx.ring, a.pos))
            if not isinstance(v, AlgElem):
                raise _Fail("tensor factors must be algebra elements", a.pos)
            factors.append(v)
        return ctx.algebra.pure_tensor(factors)
    left = _eval(e.args[0], ctx)
    right = _eval(e.args[1], ctx)
    if e.op == "/":
        if isinstance(right, (int, Fraction)):
            if right == 0:
                raise _Fail("division by zero", e.pos)
            inv = Fraction(1) / right
        elif isinstance(right, RingElem):
            inv = right.inverse()
        else:
            raise _Fail("can only divide by units of the ground ring", e.pos)
        if isinstance(left, (int, Fraction)) and isinstance(inv, Fraction):
            return left * inv
        return _to_ring(inv, ctx.ring, e.pos) * left if isinstance(inv, Fraction) else inv * left
    if isinstance(left, (int, Fraction)) and not isinstance(right, (int, Fraction)):
        left = _to_ring(left, ctx.ring, e.args[0].pos)
    if isinstance(right, (int, Fraction)) and not isinstance(left, (int, Fraction)):
        right = _to_ring(right, ctx.ring, e.args[1].pos)
    if e.op == "+":
        out = left + right
    elif e.op == "-":
        out = left - right
    else:
        out = left * right
    if out is NotImplemented:
        raise TypeError("unsupported operand types")
    return out


def _as_ring(v, ring, pos) -> RingElem:
    v = _to_ring(v, ring, pos)
    if not isinstance(v, RingElem):
        raise _Fail("expected a ground ring element", pos)
    return v


def _as_elem(v, algebra, pos) -> AlgElem:
    if isinstance(v, (int, Fraction, RingElem)):
        return algebra.scalar(_to_ring(v, algebra.ring, pos))
    if not isinstance(v, AlgElem):
        raise _Fail("expected an algebra element", pos)
    return v


# -- item parsing ---------------------------------------------------------

def parse(text: str) -> Document:
    """Parse and build a document.  Raises DSLError with every diagnostic
    found (recovering at item boundaries)."""
    if not isinstance(text, str):
        raise DSLError([Diagnostic("error", "source must be text", 1, 1)])
    try:
        return _parse(text)
    except RecursionError:
        raise DSLError([Diagnostic("error", "expression nested too deeply", 1, 1)]) from None


def _parse(text: str) -> Document:
    try:
        p = _Parser(text)
    except _Fail as f:
        raise DSLError([Diagnostic("error", f.message, *f.pos)]) from None
    doc = Document()
    diags = []
    poisoned = set()
    while p.tok.kind != "eof":
        start = p.tok
        try:
            if start.kind != "ident" or start.value not in ITEM_KEYWORDS:
                raise _Fail(f"expected a definition ({', '.join(ITEM_KEYWORDS)}), found {start.value!r}", start.pos)
            p.next()
            name_tok = p.ident("a definition name")
            name = name_tok.value
            if name in RESERVED:
                raise _Fail(f"{name!r} is a reserved name", name_tok.pos)
            if name in doc.items or name in poisoned:
                raise _Fail(f"duplicate definition {name!r}", name_tok.pos)
            try:
                item = _ITEM_PARSERS[start.value](p, doc, name, start)
            except _Fail:
                poisoned.add(name)
                raise
            doc.items[name] = item
        except _Fail as f:
            if "unknown algebra" in f.message or "unknown name" in f.message:
                bad = f.message.split("'")[1] if "'" in f.message else ""
                if bad in poisoned:
                    f.message += " (its definition has errors)"
            diags.append(Diagnostic("error", f.message, *f.pos))
            _skip_to_item(p, start)
    if diags:
        raise DSLError(diags)
    return doc


def _skip_to_item(p: _Parser, start: Token):
    if p.tok is start:
        p.next()
    while p.tok.kind != "eof":
        t = p.tok
        prev = p.toks[p.i - 1] if p.i else None
        if t.kind == "ident" and t.value in ITEM_KEYWORDS and (prev is None or prev.line < t.line):
            return
        p.next()


def _lookup_algebra(doc: Document, ref) -> FrobeniusSystem:
    kind, val, pos = ref
    if kind == "group":
        return resolve_builtin("group " + _render_group(val))
    if val in doc.items:
        item = doc.items[val]
        if item.kind != "algebra":
            raise _Fail(f"{val!r} is a {item.kind}, not an algebra", pos)
        return item.value
    if val in _builtins.BUILTIN_NAMES:
        return resolve_builtin(val)
    raise _Fail(f"unknown algebra {val!r}", pos)


def _parse_algebra(p: _Parser, doc: Document, name: str, start: Token) -> Item:
    if p.accept("="):
        return _parse_derived_algebra(p, doc, name, start)
    p.expect("{")
    stmts = []
    while not p.at("}"):
        if p.tok.kind == "eof":
            raise _Fail("unterminated algebra body", p.tok.pos)
        stmts.append(_parse_algebra_stmt(p))
    p.expect("}")
    system = _build_algebra(name, stmts, start)
    return Item("algebra", name, system, *start.pos, source=("body", stmts))


def _parse_algebra_stmt(p: _Parser):
    t = p.ident("an algebra statement")
    kw = t.value
    if kw == "ground":
        stmt = ("ground", p.ring(), t.pos)
    elif kw == "extension":
        g = p.ident("a generator name")
        p.expect("^")
        n = p.integer()
        if n < 1:
            raise _Fail("extension degree must be at least 1", g.pos)
        p.expect("=")
        stmt = ("extension", (g.value, n, p.expr()), t.pos)
    elif kw == "group":
        stmt = ("group", p.group(), t.pos)
    elif kw == "basis":
        names = [p.ident("a basis name").value]
        while p.accept(","):
            names.append(p.ident("a basis name").value)
        stmt = ("basis", tuple(names), t.pos)
    elif kw == "unit":
        stmt = ("unit", p.ident("a basis name").value, t.pos)
    elif kw == "product":
        a = p.ident("a basis name")
        p.expect("*")
        b = p.ident("a basis name")
        p.expect("=")
        stmt = ("product", (a.value, b.value, p.expr()), t.pos)
    elif kw == "counit":
        entries = []
        while True:
            k = p.expr()
            p.expect("->")
            entries.append((k, p.expr()))
            if not p.accept(","):
                break
        stmt = ("counit", tuple(entries), t.pos)
    elif kw == "delta1":
        pairs = []
        while True:
            p.expect("(")
            u = p.expr()
            p.expect(",")
            v = p.expr()
            p.expect(")")
            pairs.append((u, v))
            if not p.accept("+"):
                break
        stmt = ("delta1", tuple(pairs), t.pos)
    elif kw == "grading":
        entries = []
        while True:
            k = p.ident("a name")
            p.expect("=")
            neg = p.accept("-")
            d = p.integer()
            entries.append((k.value, -d if neg else d))
            if not p.accept(","):
                break
        stmt = ("grading", tuple(entries), t.pos)
    else:
        raise _Fail(f"unknown algebra statement {kw!r}", t.pos)
    p.expect(";")
    return stmt


def _build_algebra(name, stmts, start) -> FrobeniusSystem:
    by = {}
    for kw, arg, pos in stmts:
        if kw in by and kw != "product":
            raise _Fail(f"{kw} given twice", pos)
        by.setdefault(kw, []).append((arg, pos))
    if "ground" not in by:
        raise _Fail(f"algebra {name!r} needs a ground ring", start.pos)
    primes, names = by["ground"][0][0]
    ring = RingDescriptor(names, frozenset(primes))
    kinds = [k for k in ("extension", "group", "basis") if k in by]
    if len(kinds) != 1:
        raise _Fail(f"algebra {name!r} needs exactly one of extension, group or basis", start.pos)
    kind = kinds[0]
    if kind != "basis":
        for k in ("unit", "product"):
            if k in by:
                raise _Fail(f"{k} only applies to an explicit basis", by[k][0][1])

    if kind == "extension":
        (gen, n, rhs), pos = by["extension"][0]
        if gen in ring.indeterminates:
            raise _Fail(f"{gen!r} is already an indeterminate of the ground ring", pos)
        big = RingDescriptor(ring.indeterminates + (gen,), ring.denominator_primes)
        val = _as_ring(evaluate(rhs, _Ctx(big)), big, rhs.pos)
        coeffs = [{} for _ in range(n)]
        for exp, c in val.items():
            if exp[-1] >= n:
                raise _Fail(f"right-hand side must have degree below {n} in {gen}", rhs.pos)
            coeffs[exp[-1]][exp[:-1]] = c
        alg = extension_algebra(ring, gen, [RingElem.from_terms(ring, c) for c in coeffs])
    elif kind == "group":
        orders, pos = by["group"][0]
        if ring.indeterminates:
            raise _Fail("group algebras need a ground ring without indeterminates", pos)
        alg = _builtins.group_algebra(orders, ring.denominator_primes).algebra
    else:
        bnames, pos = by["basis"][0]
        if len(set(bnames)) != len(bnames):
            raise _Fail("duplicate basis name", pos)
        clash = [b for b in bnames if b in ring.indeterminates]
        if clash:
            raise _Fail(f"{clash[0]!r} is already an indeterminate of the ground ring", pos)
        unit = by["unit"][0][0] if "unit" in by else bnames[0]
        if unit not in bnames:
            raise _Fail(f"unit {unit!r} is not a basis element", by["unit"][0][1])
        big = RingDescriptor(ring.indeterminates + tuple(bnames), ring.denominator_primes)
        k = ring.nvars
        products = {}
        for (a, b, rhs), ppos in by.get("product", []):
            for x in (a, b):
                if x not in bnames:
                    raise _Fail(f"{x!r} is not a basis element", ppos)
            val = _as_ring(evaluate(rhs, _Ctx(big)), big, rhs.pos)
            vec = {}
            for exp, c in val.items():
                if sum(exp[k:]) != 1:
                    raise _Fail("product must be a linear combination of basis elements", rhs.pos)
                j = exp[k:].index(1)
                vec.setdefault(bnames[j], {})[exp[:k]] = c
            key = (a, b)
            if key in products or (b, a) in products:
                raise _Fail(f"product {a}*{b} given twice", ppos)
            products[key] = {bn: RingElem.from_terms(ring, t) for bn, t in vec.items()}
        try:
            alg = table_algebra(ring, bnames, products, unit)
        except ValueError as exc:
            raise _Fail(str(exc), pos) from None

    ctx = _Ctx(ring, alg)
    if kind == "group" and "counit" not in by and "delta1" not in by:
        base = _builtins.group_algebra(by["group"][0][0], ring.denominator_primes)
        counit = list(base.counit_coords)
        pairs = list(base.pairs)
    else:
        for k in ("counit", "delta1"):
            if k not in by:
                raise _Fail(f"algebra {name!r} needs a {k} statement", start.pos)
        counit = [None] * alg.rank
        basis = alg.basis_elems()
        for key, val in by["counit"][0][0]:
            b = _as_elem(evaluate(key, ctx), alg, key.pos)
            if b not in basis:
                raise _Fail(f"{render_expr(key)} is not a basis element", key.pos)
            i = basis.index(b)
            if counit[i] is not None:
                raise _Fail(f"counit of {render_expr(key)} given twice", key.pos)
            counit[i] = _as_ring(evaluate(val, ctx), ring, val.pos)
        missing = [alg.basis[i] for i, c in enumerate(counit) if c is None]
        if missing:
            raise _Fail(f"counit value missing for {', '.join(missing)}", by["counit"][0][1])
        pairs = [(_as_elem(evaluate(u, ctx), alg, u.pos), _as_elem(evaluate(v, ctx), alg, v.pos))
                 for u, v in by["delta1"][0][0]]
    degrees = dict(by["grading"][0][0]) if "grading" in by else None
    try:
        return FrobeniusSystem(alg, counit, pairs, degrees, name)
    except AxiomError as exc:
        exc.args = (f"algebra {name!r} (line {start.line}): {exc}",)
        raise


def _parse_derived_algebra(p, doc, name, start) -> Item:
    t = p.tok
    if p.at("twist", "ident"):
        p.next()
        ref = p.ref()
        p.expect("by")
        e = p.expr()
        src = ("twist", ref, e)
    elif p.at("specialize", "ident"):
        p.next()
        ref = p.ref()
        p.expect("with")
        assigns = []
        while True:
            k = p.ident("an indeterminate")
            p.expect("->")
            assigns.append((k.value, k.pos, p.expr()))
            if not p.accept(","):
                break
        src = ("specialize", ref, tuple(assigns))
    elif p.at("extend", "ident"):
        p.next()
        ref = p.ref()
        p.expect("to")
        rt = p.tok
        ring = p.ring()
        src = ("extend", ref, (ring, rt.pos))
    else:
        src = ("alias", p.ref())
    p.expect(";")
    base = _lookup_algebra(doc, src[1])
    try:
        if src[0] == "alias":
            system = base
        elif src[0] == "twist":
            y = _as_elem(evaluate(src[2], _Ctx(base.ring, base.algebra)), base.algebra, src[2].pos)
            try:
                system = base.twist(y, name)
            except SkeinError as exc:
                raise _Fail(str(exc), src[2].pos) from None
        elif src[0] == "specialize":
            seen = set()
            assignment = {}
            for k, kpos, e in src[2]:
                if k not in base.ring.indeterminates:
                    raise _Fail(f"{k!r} is not an indeterminate of {base.ring}", kpos)
                if k in seen:
                    raise _Fail(f"{k!r} assigned twice", kpos)
                seen.add(k)
                assignment[k] = (e, kpos)
            values = {}
            for k, (e, kpos) in assignment.items():
                v = evaluate(e, _Ctx(base.ring))
                if isinstance(v, (int, Fraction)):
                    v = _to_ring(v, base.ring, e.pos)
                values[k] = _as_ring(v, base.ring, e.pos)
            system, _ = base.specialize(values, name=name)
        else:
            (primes, names), rpos = src[2]
            if names != base.ring.indeterminates or not set(base.ring.denominator_primes) <= set(primes):
                raise _Fail(f"can only extend {base.ring} by more invertible primes", rpos)
            system = base.extend_scalars(primes, name)
    except _Fail:
        raise
    except AxiomError:
        raise
    except SkeinError as exc:
        raise _Fail(str(exc), t.pos) from None
    return Item("algebra", name, system, *start.pos, source=("derived", src))


def _parse_word(p, doc, name, start) -> Item:
    p.expect("over")
    ref = p.ref()
    system = _lookup_algebra(doc, ref)
    width = None
    if p.at("width", "ident"):
        p.next()
        width = p.integer()
    p.expect("{")
    levels, raw = [], []
    ctx = _Ctx(system.ring, system.algebra)
    if not p.at("}"):
        while True:
            lt = p.tok
            level, rlevel = [], []
            while True:
                g = p.ident("a generator")
                if g.value not in ARITY or g.value == "color" and not p.at("("):
                    raise _Fail(f"unknown generator {g.value!r}", g.pos)
                if g.value == "color":
                    p.expect("(")
                    e = p.expr()
                    p.expect(")")
                    level.append(Gen("color", _as_elem(evaluate(e, ctx), system.algebra, e.pos)))
                    rlevel.append(("color", e))
                else:
                    level.append(Gen(g.value))
                    rlevel.append((g.value, None))
                if not p.accept("|"):
                    break
            levels.append((level, lt))
            raw.append(rlevel)
            if not p.accept(";") or p.at("}"):
                break
    p.expect("}")
    if width is None:
        width = sum(g.arity[0] for g in levels[0][0]) if levels else 0
    w = width
    for k, (level, lt) in enumerate(levels, start=1):
        need = sum(g.arity[0] for g in level)
        if need != w:
            raise _Fail(f"level {k}: needs {need} strands, found {w}", lt.pos)
        w = sum(g.arity[1] for g in level)
    word = CobordismWord(width, [lv for lv, _ in levels])
    explicit = width if not levels else None
    return Item("word", name, word, *start.pos, source=(ref, explicit, raw), algebra=_render_ref(ref))


def _int_list(p):
    p.expect("[")
    out = []
    if not p.at("]"):
        out.append(p.integer())
        while p.accept(","):
            out.append(p.integer())
    p.expect("]")
    return out


def _parse_surface(p, doc, name, start) -> Item:
    p.expect("over")
    ref = p.ref()
    system = _lookup_algebra(doc, ref)
    p.expect("(")
    r = p.integer()
    p.expect(",")
    s = p.integer()
    p.expect(")")
    p.expect("{")
    ctx = _Ctx(system.ring, system.algebra)
    comps, raw = [], []
    while not p.at("}"):
        ct = p.tok
        if not p.at("comp", "ident"):
            raise _Fail(f"expected 'comp', found {ct.value or 'end of input'!r}", ct.pos)
        p.next()
        fields = {"genus": 0, "in": [], "out": [], "color": None}
        seen = set()
        while p.tok.kind == "ident" and p.tok.value in fields:
            f = p.next()
            if f.value in seen:
                raise _Fail(f"{f.value} given twice", f.pos)
            seen.add(f.value)
            p.expect("=")
            if f.value == "genus":
                fields["genus"] = p.integer()
            elif f.value in ("in", "out"):
                lt = p.tok
                vals = _int_list(p)
                limit = r if f.value == "in" else s
                for v in vals:
                    if not 1 <= v <= limit:
                        raise _Fail(f"{f.value} circle {v} out of range 1..{limit}", lt.pos)
                if len(set(vals)) != len(vals):
                    raise _Fail(f"repeated circle in {f.value}", lt.pos)
                fields[f.value] = vals
            else:
                fields["color"] = p.expr()
        colour = system.one if fields["color"] is None else \
            _as_elem(evaluate(fields["color"], ctx), system.algebra, fields["color"].pos)
        comps.append((Component(fields["genus"], fields["in"], fields["out"], colour), ct))
        raw.append(fields)
        if not p.accept(";"):
            break
    p.expect("}")
    used_in = [i for c, _ in comps for i in c.inputs]
    used_out = [j for c, _ in comps for j in c.outputs]
    for label, used, n in (("input", used_in, r), ("output", used_out, s)):
        if sorted(used) != list(range(1, n + 1)):
            dup = sorted({x for x in used if used.count(x) > 1})
            missing = sorted(set(range(1, n + 1)) - set(used))
            what = f"{label} circle {dup[0]} used twice" if dup else f"{label} circle {missing[0]} not attached"
            raise _Fail(what, start.pos)
    cob = ColoredCobordism(r, s, [c for c, _ in comps])
    return Item("surface", name, cob, *start.pos, source=(ref, (r, s), raw), algebra=_render_ref(ref))


def _parse_combination(p, doc, name, start) -> Item:
    p.expect("over")
    ref = p.ref()
    system = _lookup_algebra(doc, ref)
    p.expect("=")
    e = p.expr()
    p.expect(";")
    extra = {}
    for n, it in doc.items.items():
        if it.kind in ("surface", "combination") and doc.algebra(it.algebra) == system:
            extra[n] = it.value if it.kind == "combination" else SurfaceCombination.of(it.value, system.ring.one)
    val = evaluate(e, _Ctx(system.ring, None, extra))
    if not isinstance(val, SurfaceCombination):
        raise _Fail("a combination must be a linear combination of surfaces", e.pos)
    return Item("combination", name, val, *start.pos, source=(ref, e), algebra=_render_ref(ref))


def _parse_pattern(p, doc, name, start) -> Item:
    p.expect("over")
    ref = p.ref()
    system = _lookup_algebra(doc, ref)
    p.expect("{")
    ctx = _Ctx(system.ring, system.algebra)
    vertices, edges, colors, raw = [], [], {}, []
    names = set()
    while not p.at("}"):
        t = p.ident("a pattern statement")
        if t.value in ("black", "white"):
            v = p.ident("a vertex name")
            if v.value in names:
                raise _Fail(f"duplicate vertex {v.value!r}", v.pos)
            names.add(v.value)
            label = ""
            if t.value == "black" and p.accept(":"):
                label = p.ident("a surface symbol").value
            vertices.append(Vertex(v.value, t.value == "black", label))
            raw.append((t.value, v.value, label))
        elif t.value == "edge":
            a = p.ident("a vertex name")
            p.expect("->")
            b = p.ident("a vertex name")
            for x in (a, b):
                if x.value not in names:
                    raise _Fail(f"unknown vertex {x.value!r}", x.pos)
            edges.append((a.value, b.value))
            raw.append(("edge", a.value, b.value))
        elif t.value == "color":
            p.expect("comp")
            p.expect("(")
            a = p.ident("a vertex name")
            if a.value not in names:
                raise _Fail(f"unknown vertex {a.value!r}", a.pos)
            p.expect(")")
            p.expect("=")
            e = p.expr()
            colors[a.value] = (_as_elem(evaluate(e, ctx), system.algebra, e.pos), a.pos)
            raw.append(("color", a.value, e))
        else:
            raise _Fail(f"unknown pattern statement {t.value!r}", t.pos)
        if not p.accept(";"):
            break
    p.expect("}")
    try:
        pattern = Pattern(vertices, edges, {k: v for k, (v, _) in colors.items()})
    except ValueError as exc:
        pos = next(iter(colors.values()))[1] if colors else start.pos
        raise _Fail(str(exc), pos) from None
    return Item("pattern", name, pattern, *start.pos, source=(ref, raw), algebra=_render_ref(ref))


_ITEM_PARSERS = {
    "algebra": _parse_algebra,
    "word": _parse_word,
    "surface": _parse_surface,
    "combination": _parse_combination,
    "pattern": _parse_pattern,
}


# -- printing -------------------------------------------------------------

def _render_stmt(stmt) -> str:
    kw, arg, _ = stmt
    if kw == "ground":
        return f"ground {_render_ring(arg)};"
    if kw == "extension":
        g, n, e = arg
        return f"extension {g}^{n} = {render_expr(e)};"
    if kw == "group":
        return f"group {_render_group(arg)};"
    if kw == "basis":
        return "basis " + ", ".join(arg) + ";"
    if kw == "unit":
        return f"unit {arg};"
    if kw == "product":
        a, b, e = arg
        return f"product {a}*{b} = {render_expr(e)};"
    if kw == "counit":
        return "counit " + ", ".join(f"{render_expr(k)} -> {render_expr(v)}" for k, v in arg) + ";"
    if kw == "delta1":
        return "delta1 " + " + ".join(f"({render_expr(u)}, {render_expr(v)})" for u, v in arg) + ";"
    return "grading " + ", ".join(f"{k} = {d}" for k, d in arg) + ";"


def _render_item(it: Item) -> str:
    if it.kind == "algebra":
        kind, src = it.source
        if kind == "body":
            body = "".join(f"  {_render_stmt(s)}\n" for s in src)
            return f"algebra {it.name} {{\n{body}}}\n"
        if src[0] == "alias":
            return f"algebra {it.name} = {_render_ref(src[1])};\n"
        if src[0] == "twist":
            return f"algebra {it.name} = twist {_render_ref(src[1])} by {render_expr(src[2])};\n"
        if src[0] == "specialize":
            assigns = ", ".join(f"{k} -> {render_expr(e)}" for k, _, e in src[2])
            return f"algebra {it.name} = specialize {_render_ref(src[1])} with {assigns};\n"
        return f"algebra {it.name} = extend {_render_ref(src[1])} to {_render_ring(src[2][0])};\n"
    if it.kind == "word":
        ref, explicit, raw = it.source
        width = f" width {explicit}" if explicit is not None else ""
        levels = " ; ".join(" | ".join(f"color({render_expr(e)})" if k == "color" else k for k, e in lv)
                            for lv in raw)
        body = f" {levels} " if levels else " "
        return f"word {it.name} over {_render_ref(ref)}{width} {{{body}}}\n"
    if it.kind == "surface":
        ref, (r, s), raw = it.source
        comps = []
        for f in raw:
            parts = [f"genus={f['genus']}", "in=[" + ", ".join(map(str, f["in"])) + "]",
                     "out=[" + ", ".join(map(str, f["out"])) + "]"]
            if f["color"] is not None:
                parts.append(f"color={render_expr(f['color'])}")
            comps.append("comp " + " ".join(parts))
        body = f" {' ; '.join(comps)} " if comps else " "
        return f"surface {it.name} over {_render_ref(ref)} ({r},{s}) {{{body}}}\n"
    if it.kind == "combination":
        ref, e = it.source
        return f"combination {it.name} over {_render_ref(ref)} = {render_expr(e)};\n"
    ref, raw = it.source
    stmts = []
    for st in raw:
        if st[0] in ("black", "white"):
            stmts.append(f"{st[0]} {st[1]}" + (f" : {st[2]}" if st[2] else ""))
        elif st[0] == "edge":
            stmts.append(f"edge {st[1]} -> {st[2]}")
        else:
            stmts.append(f"color comp({st[1]}) = {render_expr(st[2])}")
    body = f" {' ; '.join(stmts)} " if stmts else " "
    return f"pattern {it.name} over {_render_ref(ref)} {{{body}}}\n"


def render_system(name: str, s: FrobeniusSystem) -> str:
    """Print a system as an explicit ``algebra`` definition."""
    alg = s.algebra
    lines = [f"ground {s.ring};"]
    pres = alg.presentation
    if pres[0] == "extension":
        rhs = AlgElem(alg, tuple(pres[2]) + (s.ring.zero,) * (alg.rank - len(pres[2])))
        lines.append(f"extension {pres[1]}^{len(pres[2])} = {rhs};")
    elif pres[0] == "group":
        lines.append(f"group {_render_group(pres[1])};")
    else:
        lines.append("basis " + ", ".join(alg.basis) + ";")
        unit = alg.one
        ui = [i for i in range(alg.rank) if alg.basis_elem(i) == unit]
        if ui and ui[0] != 0:
            lines.append(f"unit {alg.basis[ui[0]]};")
        for i in range(alg.rank):
            for j in range(i, alg.rank):
                if i in ui or j in ui:
                    continue
                lines.append(f"product {alg.basis[i]}*{alg.basis[j]} = {AlgElem(alg, alg.table[i][j])};")
    lines.append("counit " + ", ".join(f"{b} -> {c}" for b, c in zip(alg.basis, s.counit_coords)) + ";")
    lines.append("delta1 " + " + ".join(f"({u}, {v})" for u, v in s.pairs) + ";")
    if s.degrees:
        lines.append("grading " + ", ".join(f"{k} = {d}" for k, d in s.degrees.items()) + ";")
    body = "".join(f"  {ln}\n" for ln in lines)
    return f"algebra {name} {{\n{body}}}\n"


# -- standalone value parsers (CLI arguments, JSON re-ingestion) ----------

def _parse_value(text: str, ctx: _Ctx):
    try:
        p = _Parser(text)
        e = p.expr()
        if p.tok.kind != "eof":
            raise _Fail(f"unexpected {p.tok.value!r}", p.tok.pos)
        return evaluate(e, ctx), e
    except _Fail as f:
        raise DSLError([Diagnostic("error", f.message, *f.pos)]) from None


def parse_ring_elem(text: str, ring: RingDescriptor) -> RingElem:
    v, e = _parse_value(text, _Ctx(ring))
    try:
        return _as_ring(v, ring, e.pos)
    except _Fail as f:
        raise DSLError([Diagnostic("error", f.message, *f.pos)]) from None


def parse_element(text: str, s: FrobeniusSystem) -> AlgElem:
    v, e = _parse_value(text, _Ctx(s.ring, s.algebra))
    try:
        return _as_elem(v, s.algebra, e.pos)
    except _Fail as f:
        raise DSLError([Diagnostic("error", f.message, *f.pos)]) from None


def parse_tensor(text: str, s: FrobeniusSystem, arity: int | None = None) -> TensorElem:
    """A tensor literal; bare elements are read in arity 1 and bare
    scalars in arity 0 unless ``arity`` says otherwise."""
    v, e = _parse_value(text, _Ctx(s.ring, s.algebra))
    try:
        if isinstance(v, (int, Fraction)):
            v = _to_ring(v, s.ring, e.pos)
    except _Fail as f:
        raise DSLError([Diagnostic("error", f.message, *f.pos)]) from None
    if isinstance(v, RingElem) and arity and not v:
        return s.algebra.tensor(arity)
    if isinstance(v, RingElem) and arity == 1:
        v = s.algebra.scalar(v)
    if isinstance(v, AlgElem):
        return TensorElem.from_elem(v)
    if isinstance(v, RingElem):
        return s.algebra.scalar_tensor(v)
    if not isinstance(v, TensorElem):
        raise DSLError([Diagnostic("error", "expected a tensor such as [X, 1] + h*[1, 1]", *e.pos)])
    return v


def parse_assignment(text: str, ring: RingDescriptor) -> dict:
    """``h -> 0, t -> t`` (``=`` is accepted in place of ``->``)."""
    out = {}
    try:
        p = _Parser(text.replace("=", "->"))
        while True:
            k = p.ident("an indeterminate")
            if k.value not in ring.indeterminates:
                raise _Fail(f"{k.value!r} is not an indeterminate of {ring}", k.pos)
            p.expect("->")
            e = p.expr()
            out[k.value] = _as_ring(evaluate(e, _Ctx(ring)), ring, e.pos)
            if not p.accept(","):
                break
        if p.tok.kind != "eof":
            raise _Fail(f"unexpected {p.tok.value!r}", p.tok.pos)
    except _Fail as f:
        raise DSLError([Diagnostic("error", f.message, *f.pos)]) from None
    return out
