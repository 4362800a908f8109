"""Declarative input format: rings, Hopf algebras, series, chains.

Hand-rolled lexer and recursive-descent parser with line/column
diagnostics, plus the canonical printer.  parse(print(doc)) is
structurally equal to doc.

Grammar (ASCII, # comments to end of line):

    document := decl* ;
    decl     := ring | hopf | series | hopffgl | chain ;
    ring     := "ring" NAME "{" genitem* "}" ;
    genitem  := "gen" NAME ":" "deg" "=" INT ("," "weight" "=" INT)? ";" ;
    hopf     := "hopf" NAME "over" NAME "{" hgen* "}" ;
    hgen     := "gen" NAME ":" "deg" "=" INT "{" "delta" "=" expr ";"
                "counit" "=" expr ";" "antipode" "=" expr ";" "}" ;
    series   := "series" NAME "over" NAME "vars" NAME "," NAME
                "trunc" INT "{" coeff* "}" ;
    hopffgl  := "hopffgl" NAME "over" NAME "vars" NAME "," NAME
                "trunc" INT "{" coeff* "}" ;
    coeff    := "[" INT "," INT "]" "=" expr ";" ;
    chain    := "chain" NAME "{" "pairs" "=" "(" INT "," INT ")"
                ("," "(" INT "," INT ")")* ";" ("dim" "=" INT ";")? "}" ;

Expressions: unary minus binds tighter than ^, which binds tighter
than *, which binds tighter than binary +/-; ^ takes a nonnegative
integer literal.  Factor tags are written g<1>, g<2>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import GeneratorDecl, GradedPoly, Universe, UniverseError
from .fab import PairChain
from .hopf import HopfAlgebraSpec
from .hopffgl import ConstructionError, HopfFGL
from .series import TruncatedSeries

KEYWORDS = {
    "ring", "hopf", "over", "series", "hopffgl", "vars", "trunc",
    "chain", "gen", "deg", "weight", "delta", "counit", "antipode",
    "pairs", "dim",
}

PUNCT = set("{}()[]<>=;,:+-*^")


class ParseError(ValueError):
    def __init__(self, message, line, col, expected=()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        suffix = ""
        if self.expected:
            suffix = f" (expected {', '.join(self.expected)})"
        super().__init__(f"{line}:{col}: {message}{suffix}")


@dataclass(frozen=True)
class Token:
    kind: str  # "name" | "keyword" | "int" | punctuation | "eof"
    value: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch in " \t\r":
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "keyword" if word in KEYWORDS else "name"
            tokens.append(Token(kind, word, line, start_col))
            col += j - i
            i = j
            continue
        if ch in PUNCT:
            tokens.append(Token(ch, ch, line, start_col))
            col += 1
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- document model ----------------------------------------------------------


@dataclass
class Decl:
    kind: str  # "ring" | "hopf" | "series" | "hopffgl" | "chain"
    name: str
    obj: object
    over: str | None = None


@dataclass
class Document:
    decls: list = field(default_factory=list)
    symbols: dict = field(default_factory=dict)

    def add(self, decl):
        self.decls.append(decl)
        self.symbols[decl.name] = decl

    def lookup(self, name, kinds, token=None):
        decl = self.symbols.get(name)
        if decl is None:
            if token:
                raise ParseError(f"undeclared reference {name!r}", token.line, token.col)
            raise KeyError(f"undeclared reference {name!r}")
        if decl.kind not in kinds:
            msg = f"{name!r} is a {decl.kind}, expected {' or '.join(kinds)}"
            if token:
                raise ParseError(msg, token.line, token.col)
            raise KeyError(msg)
        return decl

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        return self.decls == other.decls


class Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0
        self.doc = Document()

    # -- token plumbing ----------------------------------------------------

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, message, expected=(), token=None):
        tok = token or self.peek()
        raise ParseError(message, tok.line, tok.col, expected)

    def expect(self, kind, value=None):
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind.upper() if kind in ("name", "int") else kind
            shown = tok.value or "end of input"
            self.fail(f"unexpected {shown!r}", expected=(want,))
        return self.advance()

    def expect_keyword(self, word):
        return self.expect("keyword", word)

    def expect_name(self):
        tok = self.peek()
        if tok.kind == "keyword":
            self.fail(f"{tok.value!r} is a reserved word", expected=("NAME",))
        return self.expect("name")

    def parse_uint(self):
        return int(self.expect("int").value)

    def parse_int(self):
        if self.peek().kind == "-":
            self.advance()
            return -self.parse_uint()
        return self.parse_uint()

    # -- declarations -------------------------------------------------------

    def parse_document(self):
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind != "keyword":
                self.fail(
                    f"unexpected {tok.value!r}",
                    expected=("ring", "hopf", "series", "hopffgl", "chain"),
                )
            handler = {
                "ring": self.parse_ring,
                "hopf": self.parse_hopf,
                "series": self.parse_series,
                "hopffgl": self.parse_series,
                "chain": self.parse_chain,
            }.get(tok.value)
            if handler is None:
                self.fail(
                    f"unexpected {tok.value!r}",
                    expected=("ring", "hopf", "series", "hopffgl", "chain"),
                )
            handler()
        return self.doc

    def declare_name(self):
        tok = self.peek()
        name = self.expect_name().value
        if name in self.doc.symbols:
            self.fail(f"duplicate name {name!r}", token=tok)
        return name, tok

    def parse_ring(self):
        self.expect_keyword("ring")
        name, tok = self.declare_name()
        self.expect("{")
        gens = []
        while self.peek().kind == "keyword" and self.peek().value == "gen":
            gens.append(self.parse_genitem())
        self.expect("}")
        try:
            universe = Universe(name, central=gens)
        except UniverseError as err:
            self.fail(str(err), token=tok)
        self.doc.add(Decl("ring", name, universe))

    def parse_genitem(self):
        self.expect_keyword("gen")
        gtok = self.peek()
        gname = self.expect_name().value
        self.expect(":")
        self.expect_keyword("deg")
        self.expect("=")
        degree = self.parse_int()
        weight = 1
        if self.peek().kind == ",":
            self.advance()
            self.expect_keyword("weight")
            self.expect("=")
            wtok = self.peek()
            weight = self.parse_int()
            if weight < 1:
                self.fail("weight must be >= 1", token=wtok)
        self.expect(";")
        return GeneratorDecl(gname, degree=degree, weight=weight)

    def parse_hopf(self):
        self.expect_keyword("hopf")
        name, tok = self.declare_name()
        self.expect_keyword("over")
        over_tok = self.peek()
        over = self.expect_name().value
        ring = self.doc.lookup(over, ("ring",), over_tok).obj
        self.expect("{")
        gens, delta, counit, antipode = [], {}, {}, {}
        while self.peek().kind == "keyword" and self.peek().value == "gen":
            self.expect_keyword("gen")
            gtok = self.peek()
            gname = self.expect_name().value
            self.expect(":")
            self.expect_keyword("deg")
            self.expect("=")
            degree = self.parse_int()
            # expressions may use generators declared so far, plus this one
            try:
                partial = Universe(
                    name, central=ring.central.values(),
                    tagged=gens + [GeneratorDecl(gname, degree=degree)],
                )
            except UniverseError as err:
                self.fail(str(err), token=gtok)
            self.expect("{")
            images = {}
            for label, arity in (("delta", 2), ("counit", 1), ("antipode", 1)):
                self.expect_keyword(label)
                self.expect("=")
                etok = self.peek()
                images[label] = self.parse_expr(partial, arity)
                if label == "counit" and images[label].tagged_occurrences():
                    self.fail(
                        f"counit of {gname!r} must land in the base ring",
                        token=etok,
                    )
                self.expect(";")
            self.expect("}")
            gens.append(GeneratorDecl(gname, degree=degree))
            delta[gname] = images["delta"]
            counit[gname] = images["counit"]
            antipode[gname] = images["antipode"]
        self.expect("}")
        try:
            spec = HopfAlgebraSpec(name, ring, gens, delta, counit, antipode)
        except UniverseError as err:
            self.fail(str(err), token=tok)
        self.doc.add(Decl("hopf", name, spec, over=over))

    def parse_series(self):
        head = self.advance()  # "series" or "hopffgl"
        is_fgl = head.value == "hopffgl"
        name, tok = self.declare_name()
        self.expect_keyword("over")
        over_tok = self.peek()
        over = self.expect_name().value
        kinds = ("hopf",) if is_fgl else ("ring", "hopf")
        over_decl = self.doc.lookup(over, kinds, over_tok)
        if over_decl.kind == "hopf":
            universe = over_decl.obj.universe
        else:
            universe = over_decl.obj
        self.expect_keyword("vars")
        v1tok = self.peek()
        v1 = self.expect_name().value
        self.expect(",")
        v2tok = self.peek()
        v2 = self.expect_name().value
        for v, vtok in ((v1, v1tok), (v2, v2tok)):
            if v in universe.central or v in universe.tagged:
                self.fail(f"variable {v!r} collides with a generator", token=vtok)
        if v1 == v2:
            self.fail("variables must be distinct", token=v2tok)
        self.expect_keyword("trunc")
        wtok = self.peek()
        cutoff = self.parse_uint()
        if cutoff < 1:
            self.fail("trunc must be >= 1", token=wtok)
        self.expect("{")
        arity = 2 if is_fgl else 1
        coeffs = {}
        while self.peek().kind == "[":
            ktok = self.advance()
            i = self.parse_uint()
            self.expect(",")
            j = self.parse_uint()
            self.expect("]")
            if (i, j) in coeffs:
                self.fail(f"duplicate coefficient key [{i},{j}]", token=ktok)
            self.expect("=")
            coeffs[(i, j)] = self.parse_expr(universe, arity)
            self.expect(";")
        self.expect("}")
        series = TruncatedSeries.from_coefficients(
            universe, arity, (v1, v2), cutoff, coeffs
        )
        if is_fgl:
            try:
                obj = HopfFGL(name, over_decl.obj, series)
            except ConstructionError as err:
                self.fail(str(err), token=tok)
            self.doc.add(Decl("hopffgl", name, obj, over=over))
        else:
            self.doc.add(Decl("series", name, series, over=over))

    def parse_chain(self):
        self.expect_keyword("chain")
        name, tok = self.declare_name()
        self.expect("{")
        self.expect_keyword("pairs")
        self.expect("=")
        pairs = [self.parse_pair()]
        while self.peek().kind == ",":
            self.advance()
            pairs.append(self.parse_pair())
        self.expect(";")
        dim = None
        if self.peek().kind == "keyword" and self.peek().value == "dim":
            self.advance()
            self.expect("=")
            dim = self.parse_uint()
            self.expect(";")
        self.expect("}")
        try:
            chain = PairChain(name, tuple(pairs), dim)
        except ValueError as err:
            self.fail(str(err), token=tok)
        self.doc.add(Decl("chain", name, chain))

    def parse_pair(self):
        self.expect("(")
        k = self.parse_uint()
        self.expect(",")
        l = self.parse_uint()
        self.expect(")")
        return (k, l)

    # -- expressions ---------------------------------------------------------

    def parse_expr(self, universe, arity):
        poly = self.parse_term(universe, arity)
        while self.peek().kind in ("+", "-"):
            op = self.advance().kind
            rhs = self.parse_term(universe, arity)
            poly = poly + rhs if op == "+" else poly - rhs
        return poly

    def parse_term(self, universe, arity):
        poly = self.parse_power(universe, arity)
        while self.peek().kind == "*":
            self.advance()
            poly = poly * self.parse_power(universe, arity)
        return poly

    def parse_power(self, universe, arity):
        base = self.parse_unary(universe, arity)
        if self.peek().kind == "^":
            self.advance()
            exp = self.parse_uint()
            base = base ** exp
        return base

    def parse_unary(self, universe, arity):
        if self.peek().kind == "-":
            self.advance()
            return -self.parse_unary(universe, arity)
        return self.parse_primary(universe, arity)

    def parse_primary(self, universe, arity):
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return GradedPoly.const(universe, int(tok.value), arity)
        if tok.kind == "(":
            self.advance()
            poly = self.parse_expr(universe, arity)
            self.expect(")")
            return poly
        if tok.kind == "name":
            self.advance()
            name = tok.value
            if name not in universe.central and name not in universe.tagged:
                self.fail(f"undeclared generator {name!r}", token=tok)
            tag = None
            if self.peek().kind == "<":
                self.advance()
                ttok = self.peek()
                tag = self.parse_uint()
                self.expect(">")
                if not universe.is_tagged(name):
                    self.fail(
                        f"central generator {name!r} cannot carry a factor tag",
                        token=ttok,
                    )
                if not 1 <= tag <= arity:
                    self.fail(
                        f"factor tag <{tag}> in a {arity}-factor context",
                        token=ttok,
                    )
            elif universe.is_tagged(name) and arity > 1:
                self.fail(
                    f"generator {name!r} needs a factor tag in a {arity}-factor context",
                    token=tok,
                )
            return GradedPoly.gen(universe, name, tag=tag, arity=arity)
        self.fail(
            f"unexpected {tok.value or 'end of input'!r}",
            expected=("INT", "NAME", "("),
        )


def parse_document(text):
    """Parse UTF-8 text into a validated Document or raise ParseError."""
    return Parser(text).parse_document()


# -- canonical printing -------------------------------------------------------


def _expr_str(poly):
    for coeff in poly.terms.values():
        if not isinstance(coeff, int):
            raise ValueError("document coefficients must be integers")
    return poly.canonical_str()


def _print_ring(universe):
    lines = [f"ring {universe.name} {{"]
    for g in universe.central.values():
        w = f", weight={g.weight}" if g.weight != 1 else ""
        lines.append(f"  gen {g.name} : deg={g.degree}{w};")
    lines.append("}")
    return lines


def _print_hopf(spec, over):
    lines = [f"hopf {spec.name} over {over} {{"]
    for g in spec.generators:
        lines.append(f"  gen {g.name} : deg={g.degree} {{")
        lines.append(f"    delta = {_expr_str(spec.delta[g.name])};")
        lines.append(f"    counit = {_expr_str(spec.counit[g.name])};")
        lines.append(f"    antipode = {_expr_str(spec.antipode[g.name])};")
        lines.append("  }")
    lines.append("}")
    return lines


def _print_series(kind, name, over, series):
    v1, v2 = series.vars
    lines = [f"{kind} {name} over {over} vars {v1},{v2} trunc {series.cutoff} {{"]
    for md in series.support():
        lines.append(f"  [{md[0]},{md[1]}] = {_expr_str(series.terms[md])};")
    lines.append("}")
    return lines


def _print_chain(chain):
    lines = [f"chain {chain.name} {{"]
    pairs = ", ".join(f"({k},{l})" for k, l in chain.pairs)
    lines.append(f"  pairs = {pairs};")
    if chain.dim is not None:
        lines.append(f"  dim = {chain.dim};")
    lines.append("}")
    return lines


def print_document(doc):
    """Canonical UTF-8 form; parse(print(doc)) equals doc structurally."""
    blocks = []
    for decl in doc.decls:
        if decl.kind == "ring":
            blocks.append(_print_ring(decl.obj))
        elif decl.kind == "hopf":
            blocks.append(_print_hopf(decl.obj, decl.over))
        elif decl.kind == "series":
            blocks.append(_print_series("series", decl.name, decl.over, decl.obj))
        elif decl.kind == "hopffgl":
            blocks.append(
                _print_series("hopffgl", decl.name, decl.over, decl.obj.series)
            )
        elif decl.kind == "chain":
            blocks.append(_print_chain(decl.obj))
        else:
            raise ValueError(f"unknown declaration kind {decl.kind!r}")
    if not blocks:
        return ""
    return "\n\n".join("\n".join(b) for b in blocks) + "\n"
