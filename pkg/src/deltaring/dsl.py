"""Text syntax for rings and ring families.

Ring specs::

    Z4[x]/(x^2-1)              Z_4 C_2
    Z4[x]/(x^2-1)%(2, x-1)     ... modulo the extra ideal (2, x-1)
    F2[x,y]/(x^2, y^2)         truncated polynomial ring
    GF(4)                      field with 4 elements
    product(F3, F2[t]/(t^2))   direct product; ``spec^k`` is a k-fold power

Family descriptors::

    truncated_f2(3)  group_algebra(12,[2])  z_family(4,2)  gf(3)
    product(f3^2, truncated_f2(1))

Every parse error carries a stable ``code`` and the byte offset where it was
detected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

Poly = tuple[tuple[tuple[int, ...], int], ...]

RESERVED_FIELD_GENERATOR = "g"


class SpecError(ValueError):
    def __init__(self, code: str, message: str, offset: int):
        super().__init__(f"{code} at byte {offset}: {message}")
        self.code = code
        self.offset = offset
        self.message = message


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


@dataclass(frozen=True)
class Token:
    kind: str  # int, ident, sym, end
    text: str
    offset: int


def tokenize(text: str) -> list[Token]:
    raw = text.encode()
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            kind, tok, start = "int", m.group(1), m.start(1)
        elif m.group(2) is not None:
            kind, tok, start = "ident", m.group(2), m.start(2)
        elif m.group(3) is not None:
            kind, tok, start = "sym", m.group(3), m.start(3)
        else:
            break
        out.append(Token(kind, tok, len(text[:start].encode())))
        pos = m.end()
    out.append(Token("end", "", len(raw)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, code: str, message: str, tok: Optional[Token] = None):
        raise SpecError(code, message, (tok or self.tok).offset)

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind not in ("sym", "ident"):
            self.error("E_SYNTAX", f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def accept(self, text: str) -> bool:
        if self.tok.kind == "sym" and self.tok.text == text:
            self.advance()
            return True
        return False

    def integer(self) -> int:
        if self.tok.kind != "int":
            self.error("E_SYNTAX", f"expected an integer, found {self.tok.text or 'end of input'!r}")
        return int(self.advance().text)

    def end(self):
        if self.tok.kind != "end":
            self.error("E_SYNTAX", f"unexpected {self.tok.text!r}")

    # polynomials ----------------------------------------------------------
    def poly(self, variables: Sequence[str]) -> dict:
        neg = False
        if self.tok.kind == "sym" and self.tok.text in "+-":
            neg = self.advance().text == "-"
        acc = self.term(variables)
        if neg:
            acc = _pscale(acc, -1)
        while self.tok.kind == "sym" and self.tok.text in "+-":
            sign = -1 if self.advance().text == "-" else 1
            acc = _padd(acc, _pscale(self.term(variables), sign))
        return acc

    def term(self, variables) -> dict:
        acc = self.factor(variables)
        while True:
            if self.accept("*"):
                acc = _pmul(acc, self.factor(variables))
            elif self.tok.kind in ("int", "ident") or (self.tok.kind == "sym" and self.tok.text == "("):
                acc = _pmul(acc, self.factor(variables))
            else:
                return acc

    def factor(self, variables) -> dict:
        base = self.atom(variables)
        if self.accept("^"):
            e = self.integer()
            out = {(0,) * len(variables): 1}
            for _ in range(e):
                out = _pmul(out, base)
            return out
        return base

    def atom(self, variables) -> dict:
        t = self.tok
        k = len(variables)
        if t.kind == "int":
            self.advance()
            return {(0,) * k: int(t.text)} if int(t.text) else {}
        if t.kind == "ident":
            if t.text not in variables:
                self.error("E_UNKNOWN_IDENT", f"unknown identifier {t.text!r}")
            self.advance()
            return {tuple(1 if v == t.text else 0 for v in variables): 1}
        if self.accept("("):
            p = self.poly(variables)
            self.expect(")")
            return p
        self.error("E_SYNTAX", f"expected a polynomial term, found {t.text or 'end of input'!r}")

    def poly_list(self, variables) -> tuple[list[dict], tuple[int, ...]]:
        """Comma-separated polynomials in parentheses, with the offset where each starts."""
        self.expect("(")
        offsets = [self.tok.offset]
        out = [self.poly(variables)]
        while self.accept(","):
            offsets.append(self.tok.offset)
            out.append(self.poly(variables))
        self.expect(")")
        return out, tuple(offsets)


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + c
        if out[e] == 0:
            del out[e]
    return out


def _pscale(a: dict, s: int) -> dict:
    return {e: c * s for e, c in a.items() if c * s}


def _pmul(a: dict, b: dict) -> dict:
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


def _freeze(p: dict) -> Poly:
    return tuple(sorted(p.items(), key=lambda t: (-sum(t[0]), tuple(-x for x in t[0]))))


def parse_polynomial(text: str, variables: Sequence[str]) -> dict:
    """Parse an integer polynomial in ``variables`` to ``{exponents: coeff}``."""
    p = _Parser(text)
    out = p.poly(list(variables))
    p.end()
    return out


def format_polynomial(poly, variables: Sequence[str]) -> str:
    items = poly if isinstance(poly, tuple) else _freeze(poly)
    if not items:
        return "0"
    parts = []
    for idx, (exps, c) in enumerate(items):
        mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in zip(variables, exps) if e)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
        if idx == 0:
            parts.append(("-" if sign == "-" else "") + body)
        else:
            parts.append(f" {sign} {body}")
    return "".join(parts)


# ring spec AST ------------------------------------------------------------

@dataclass(frozen=True)
class RingSpec:
    coeff: tuple[str, int]  # ("Z", n) | ("F", p) | ("GF", q)
    variables: tuple[str, ...] = ()
    relations: tuple[Poly, ...] = ()
    extra: tuple[Poly, ...] = ()
    # source positions for lowering errors; not part of the value
    offset: int = field(default=0, compare=False, repr=False)
    relation_offsets: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __str__(self):
        kind, n = self.coeff
        s = f"GF({n})" if kind == "GF" else f"{kind}{n}"
        if self.variables:
            rels = ", ".join(format_polynomial(r, self.variables) for r in self.relations)
            s += f"[{','.join(self.variables)}]/({rels})"
        if self.extra:
            s += "%(" + ", ".join(format_polynomial(r, self.variables) for r in self.extra) + ")"
        return s


@dataclass(frozen=True)
class ProductSpec:
    factors: tuple["SpecAST", ...]

    def __str__(self):
        return "product(" + ", ".join(str(f) for f in self.factors) + ")"


@dataclass(frozen=True)
class PowerSpec:
    base: "SpecAST"
    exponent: int

    def __str__(self):
        return f"{self.base}^{self.exponent}"


SpecAST = Union[RingSpec, ProductSpec, PowerSpec]

_COEFF = re.compile(r"^(Z|F)(\d*)$")


def _spec(p: _Parser) -> SpecAST:
    node = _spec_atom(p)
    while p.accept("^"):
        at = p.tok
        k = p.integer()
        if k < 1:
            p.error("E_SYNTAX", "power exponent must be >= 1", at)
        node = PowerSpec(node, k)
    return node


def _spec_atom(p: _Parser) -> SpecAST:
    t = p.tok
    start = t.offset
    if t.kind == "ident" and t.text == "product":
        p.advance()
        p.expect("(")
        factors = [_spec(p)]
        while p.accept(","):
            factors.append(_spec(p))
        p.expect(")")
        return ProductSpec(tuple(factors))
    if t.kind == "ident" and t.text == "GF":
        p.advance()
        p.expect("(")
        q = p.integer()
        p.expect(")")
        coeff = ("GF", q)
    elif t.kind == "ident" and _COEFF.match(t.text):
        kind, digits = _COEFF.match(t.text).groups()
        if not digits:
            if p.peek().kind == "int":
                p.advance()
                digits = p.tok.text
            else:
                p.error("E_MISSING_MODULUS", f"coefficient ring {kind} needs a modulus, e.g. {kind}4")
        p.advance()
        coeff = (kind, int(digits))
    elif t.kind == "end":
        p.error("E_SYNTAX", "empty ring spec")
    else:
        p.error("E_SYNTAX", f"expected Z<n>, F<p>, GF(<q>) or product(...), found {t.text!r}")
    variables: list[str] = []
    relations: list[dict] = []
    rel_offsets: tuple[int, ...] = ()
    if p.accept("["):
        while True:
            if p.tok.kind != "ident":
                p.error("E_SYNTAX", "expected a variable name")
            name = p.advance()
            if name.text in variables:
                p.error("E_SYNTAX", f"variable {name.text!r} declared twice", name)
            variables.append(name.text)
            if not p.accept(","):
                break
        p.expect("]")
        p.expect("/")
        relations, rel_offsets = p.poly_list(variables)
    extra: list[dict] = []
    if p.accept("%"):
        extra, _ = p.poly_list(variables)
    return RingSpec(coeff, tuple(variables), tuple(_freeze(r) for r in relations), tuple(_freeze(e) for e in extra),
                    start, rel_offsets)


def parse_ring_spec(text: str) -> SpecAST:
    p = _Parser(text)
    node = _spec(p)
    p.end()
    return node


# lowering -----------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def prime_power(q: int) -> Optional[tuple[int, int]]:
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            return (p, m) if r == 1 else None
    return None


def lower(ast: SpecAST, cap: Optional[int] = None):
    """Build the ring described by a parsed spec."""
    from . import ring as R

    if isinstance(ast, ProductSpec):
        return R.ProductRing([lower(f, cap) for f in ast.factors], name=str(ast))
    if isinstance(ast, PowerSpec):
        base = lower(ast.base, cap)
        return R.ProductRing([base] * ast.exponent, name=str(ast))
    kind, n = ast.coeff
    prefix: list[tuple] = []
    if kind == "Z":
        if n < 2:
            raise SpecError("E_MISSING_MODULUS", f"modulus must be >= 2, got {n}", ast.offset)
        modulus = n
    elif kind == "F":
        if not _is_prime(n):
            raise SpecError("E_BAD_FIELD", f"F{n}: {n} is not prime (use GF({n}) for prime powers)", ast.offset)
        modulus = n
    else:
        pm = prime_power(n)
        if pm is None:
            raise SpecError("E_BAD_FIELD", f"GF({n}): {n} is not a prime power", ast.offset)
        modulus, m = pm
        if m > 1:
            if RESERVED_FIELD_GENERATOR in ast.variables:
                raise SpecError("E_RESERVED", f"{RESERVED_FIELD_GENERATOR!r} names the generator of GF({n})", ast.offset)
            from .families import conway_like_reduction

            prefix.append((RESERVED_FIELD_GENERATOR, m, conway_like_reduction(modulus, m)))
    rules = _rules_from_relations(ast, modulus)
    ring = R.make_ring(modulus, prefix + rules, name=str(ast))
    if ast.extra:
        gens = []
        for poly in ast.extra:
            pad = {(0,) * len(prefix) + e: c for e, c in poly}
            gens.append(ring.polynomial(pad))
        ideal = R.ideal_closure(ring, gens)
        return R.QuotientRing(ring, ideal, name=str(ast))
    return ring


def _rules_from_relations(ast: RingSpec, n: int) -> list[tuple]:
    variables = ast.variables
    rules: dict[str, tuple] = {}
    offsets = ast.relation_offsets or (ast.offset,) * len(ast.relations)
    for rel, at in zip(ast.relations, offsets):
        used = {variables[i] for exps, c in rel for i, e in enumerate(exps) if e and c % n}
        if len(used) != 1:
            if not used:
                raise SpecError("E_NON_MONIC", f"relation {format_polynomial(rel, variables)!r} has no variable", at)
            raise SpecError("E_NOT_UNIVARIATE",
                            f"relation {format_polynomial(rel, variables)!r} mixes variables {sorted(used)}", at)
        (v,) = used
        vi = variables.index(v)
        deg = max(exps[vi] for exps, c in rel if c % n)
        lead = sum(c for exps, c in rel if exps[vi] == deg) % n
        if lead != 1:
            raise SpecError("E_NON_MONIC", f"leading coefficient of {v}^{deg} is {lead}, not 1", at)
        if v in rules:
            raise SpecError("E_DUPLICATE_RELATION", f"variable {v!r} has two relations", at)
        red = [0] * deg
        for exps, c in rel:
            if exps[vi] < deg:
                red[exps[vi]] = (red[exps[vi]] - c) % n
        rules[v] = (v, deg, tuple(red))
    missing = [v for v in variables if v not in rules]
    if missing:
        raise SpecError("E_MISSING_RELATION", f"no relation for {missing}; the ring would be infinite", ast.offset)
    return [rules[v] for v in variables]


def build_ring(text: str, cap: Optional[int] = None):
    """Parse and lower a ring spec in one step."""
    return lower(parse_ring_spec(text), cap)


# family descriptors -------------------------------------------------------

_FAMILY_NAMES = {"truncated_f2", "f2", "f3", "gf", "group_algebra", "z_family", "product"}


def looks_like_family(text: str) -> bool:
    m = re.match(r"\s*([a-z_0-9]+)", text)
    return bool(m) and m.group(1) in _FAMILY_NAMES


def parse_family(text: str):
    """Parse a family descriptor into a :class:`~deltaring.families.FamilyDescriptor`."""
    p = _Parser(text)
    d = _family(p)
    p.end()
    return d


def _family(p: _Parser):
    from .families import FamilyDescriptor

    node = _family_atom(p)
    while p.accept("^"):
        at = p.tok
        k = p.integer()
        if k < 1:
            p.error("E_SYNTAX", "power exponent must be >= 1", at)
        node = FamilyDescriptor("power", (k,), (node,))
    return node


def _int_list(p: _Parser) -> tuple[int, ...]:
    p.expect("[")
    out = [p.integer()]
    while p.accept(","):
        out.append(p.integer())
    p.expect("]")
    return tuple(out)


def _family_atom(p: _Parser):
    from .families import FamilyDescriptor

    t = p.tok
    if t.kind != "ident" or t.text not in _FAMILY_NAMES:
        p.error("E_UNKNOWN_IDENT", f"unknown family {t.text!r}")
    p.advance()
    if t.text in ("f2", "f3"):
        if p.accept("("):
            p.expect(")")
        return FamilyDescriptor(t.text, ())
    p.expect("(")
    if t.text == "product":
        factors = [_family(p)]
        while p.accept(","):
            factors.append(_family(p))
        p.expect(")")
        return FamilyDescriptor("product", (), tuple(factors))
    if t.text == "group_algebra":
        n = p.integer()
        p.expect(",")
        orders = _int_list(p)
        p.expect(")")
        return FamilyDescriptor("group_algebra", (n, orders))
    if t.text == "z_family":
        c = p.integer()
        p.expect(",")
        l = p.integer()
        p.expect(")")
        return FamilyDescriptor("z_family", (c, l))
    arg = p.integer()
    p.expect(")")
    return FamilyDescriptor(t.text, (arg,))
