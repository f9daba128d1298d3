"""Instance description format (.cps): parser, elaborator, canonical renderer.

Line-oriented block grammar, declaration before use, rational literals only
(the single exception is ``tol``, which is a float).  ``#`` starts a comment.

    algebra <name> {
      dim <n>;
      basis w1 ... wn;
      d w<k> = <2-form expression | 0>;
    }
    pair { alpha1 = <1-form>; alpha2 = <1-form>; }
    metric { <sum of q wi*wj terms> }
    phi { X<i> -> <frame vector | 0>; ... }
    config { kappa = <rational>; tol = <float>; }

Expressions admit rational scalars, ``+``, ``-``, ``^`` (wedge), ``*``
(symmetric product, metric block only), and scalar-times-parenthesized-sum
grouping.  A cross term ``q wi*wj`` (i != j) contributes q/2 to both matrix
entries, so the expression reads as a quadratic form.  Every parse error
carries a line, a column, and the expected-token set.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .forms import Form
from .linalg import Matrix

ZERO = Fraction(0)
ONE = Fraction(1)


class DslError(ValueError):
    """Located parse/elaboration error."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()) -> None:
        self.line = line
        self.col = col
        self.expected = expected
        suffix = f" (expected {', '.join(expected)})" if expected else ""
        super().__init__(f"line {line}, column {col}: {message}{suffix}")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | float | punct | eof
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<float>\d+(?:\.\d+)?(?:[eE][-+]?\d+)|\d+\.\d+)
  | (?P<number>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<punct>[{};=^*+\-()/])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "newline":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        else:
            if kind == "arrow":
                kind = "punct"
            tokens.append(Token(kind, value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


@dataclass(frozen=True)
class Term:
    """One additive term: coefficient times a chain of names joined by one op."""

    coeff: Fraction
    names: tuple[str, ...]
    op: str | None  # '^', '*', or None for single names / pure scalars
    token: Token


@dataclass(frozen=True)
class InstanceSpec:
    """Elaborated instance: exact data only, ready for certification."""

    name: str
    n: int
    coframe: tuple[str, ...]
    equations: dict[int, Form]  # nonzero d(w_k) only
    alpha1: Form | None = None
    alpha2: Form | None = None
    metric: Matrix | None = None
    phi: Matrix | None = None
    kappa: Fraction | None = None
    tol: float | None = None

    def frame_names(self) -> tuple[str, ...]:
        return tuple(f"X{i + 1}" for i in range(self.n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, InstanceSpec):
            return NotImplemented
        return (
            self.name == other.name
            and self.n == other.n
            and self.coframe == other.coframe
            and self.equations == other.equations
            and self.alpha1 == other.alpha1
            and self.alpha2 == other.alpha2
            and self.metric == other.metric
            and self.phi == other.phi
            and self.kappa == other.kappa
            and self.tol == other.tol
        )


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def error(self, message: str, expected: tuple[str, ...] = (), token: Token | None = None) -> DslError:
        t = token or self.peek()
        return DslError(message, t.line, t.col, expected)

    def expect_punct(self, text: str) -> Token:
        t = self.peek()
        if t.kind != "punct" or t.text != text:
            raise self.error(f"got {t.text!r}" if t.kind != "eof" else "unexpected end of input",
                             expected=(repr(text),))
        return self.advance()

    def expect_ident(self, *texts: str) -> Token:
        t = self.peek()
        if t.kind != "ident" or (texts and t.text not in texts):
            exp = tuple(repr(x) for x in texts) if texts else ("identifier",)
            raise self.error(f"got {t.text!r}" if t.kind != "eof" else "unexpected end of input",
                             expected=exp)
        return self.advance()

    def at_punct(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "punct" and t.text == text

    def at_ident(self, *texts: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and (not texts or t.text in texts)

    # --- scalars and expressions -------------------------------------------

    def parse_rational(self) -> Fraction:
        t = self.peek()
        if t.kind != "number":
            raise self.error(f"got {t.text!r}", expected=("rational literal",))
        self.advance()
        value = Fraction(int(t.text))
        if self.at_punct("/"):
            self.advance()
            den = self.peek()
            if den.kind != "number":
                raise self.error(f"got {den.text!r}", expected=("denominator integer",))
            self.advance()
            if int(den.text) == 0:
                raise DslError("zero denominator", den.line, den.col)
            value = Fraction(int(t.text), int(den.text))
        return value

    def parse_sum(self) -> list[Term]:
        terms: list[Term] = []
        sign = ONE
        t = self.peek()
        if self.at_punct("-"):
            self.advance()
            sign = -ONE
        elif self.at_punct("+"):
            self.advance()
        terms.extend(self.parse_term(sign))
        while self.at_punct("+") or self.at_punct("-"):
            sign = -ONE if self.advance().text == "-" else ONE
            terms.extend(self.parse_term(sign))
        if not terms:
            raise self.error("empty expression", expected=("term",), token=t)
        return terms

    def parse_term(self, sign: Fraction) -> list[Term]:
        start = self.peek()
        coeff = ONE
        have_scalar = False
        if start.kind == "number":
            coeff = self.parse_rational()
            have_scalar = True
        elif start.kind == "float":
            raise self.error("float literals are only allowed for tol", token=start)
        if self.at_punct("("):
            self.advance()
            inner = self.parse_sum()
            self.expect_punct(")")
            return [Term(sign * coeff * t.coeff, t.names, t.op, t.token) for t in inner]
        if self.at_ident():
            first = self.advance()
            names = [first.text]
            op: str | None = None
            while self.at_punct("^") or self.at_punct("*"):
                o = self.advance().text
                if op is not None and o != op:
                    raise self.error(f"cannot mix {op!r} and {o!r} in one term")
                op = o
                names.append(self.expect_ident().text)
            return [Term(sign * coeff, tuple(names), op, first)]
        if have_scalar:
            return [Term(sign * coeff, (), None, start)]
        raise self.error(f"got {start.text!r}" if start.kind != "eof" else "unexpected end of input",
                         expected=("scalar", "name", "'('"))

    # --- blocks --------------------------------------------------------------

    def parse_file(self) -> "_RawBlocks":
        raw = _RawBlocks()
        while not self.peek().kind == "eof":
            head = self.expect_ident("algebra", "pair", "metric", "phi", "config")
            if head.text == "algebra":
                if raw.algebra is not None:
                    raise self.error("duplicate algebra block", token=head)
                raw.algebra = self.parse_algebra(head)
            elif head.text == "pair":
                if raw.pair is not None:
                    raise self.error("duplicate pair block", token=head)
                raw.pair = self.parse_pair(head)
            elif head.text == "metric":
                if raw.metric is not None:
                    raise self.error("duplicate metric block", token=head)
                raw.metric = self.parse_metric(head)
            elif head.text == "phi":
                if raw.phi is not None:
                    raise self.error("duplicate phi block", token=head)
                raw.phi = self.parse_phi(head)
            else:
                if raw.config is not None:
                    raise self.error("duplicate config block", token=head)
                raw.config = self.parse_config(head)
        if raw.algebra is None:
            t = self.peek()
            raise DslError("no algebra block in input", t.line, t.col)
        return raw

    def parse_algebra(self, head: Token) -> "_RawAlgebra":
        name = self.expect_ident()
        self.expect_punct("{")
        out = _RawAlgebra(name=name.text, head=head)
        while not self.at_punct("}"):
            stmt = self.expect_ident("dim", "basis", "d")
            if stmt.text == "dim":
                if out.dim is not None:
                    raise self.error("duplicate dim statement", token=stmt)
                t = self.peek()
                if t.kind != "number":
                    raise self.error(f"got {t.text!r}", expected=("positive integer",))
                self.advance()
                out.dim = int(t.text)
                if out.dim <= 0:
                    raise DslError("dimension must be positive", t.line, t.col)
                out.dim_token = t
            elif stmt.text == "basis":
                if out.basis:
                    raise self.error("duplicate basis statement", token=stmt)
                while self.at_ident():
                    out.basis.append(self.advance())
                if not out.basis:
                    raise self.error("empty basis list", expected=("name",), token=stmt)
            else:
                target = self.expect_ident()
                self.expect_punct("=")
                if self.peek().kind == "number" and self.peek().text == "0" and not self._rational_ahead():
                    self.advance()
                    out.equations.append((target, []))
                else:
                    out.equations.append((target, self.parse_sum()))
            self.expect_punct(";")
        self.expect_punct("}")
        return out

    def _rational_ahead(self) -> bool:
        """True when the current number starts a scalar-times-name term."""
        nxt = self.tokens[self.pos + 1]
        return nxt.kind == "ident" or (nxt.kind == "punct" and nxt.text in ("/", "("))

    def parse_vector_or_zero(self) -> list[Term]:
        if self.peek().kind == "number" and self.peek().text == "0" and not self._rational_ahead():
            self.advance()
            return []
        return self.parse_sum()

    def parse_pair(self, head: Token) -> "_RawPair":
        self.expect_punct("{")
        out = _RawPair(head=head)
        while not self.at_punct("}"):
            which = self.expect_ident("alpha1", "alpha2")
            self.expect_punct("=")
            terms = self.parse_sum()
            self.expect_punct(";")
            if which.text == "alpha1":
                if out.alpha1 is not None:
                    raise self.error("duplicate alpha1", token=which)
                out.alpha1 = terms
            else:
                if out.alpha2 is not None:
                    raise self.error("duplicate alpha2", token=which)
                out.alpha2 = terms
        close = self.expect_punct("}")
        if out.alpha1 is None or out.alpha2 is None:
            missing = "alpha1" if out.alpha1 is None else "alpha2"
            raise DslError(f"pair block is missing {missing}", close.line, close.col)
        return out

    def parse_metric(self, head: Token) -> list[Term]:
        self.expect_punct("{")
        terms = self.parse_sum()
        if self.at_punct(";"):
            self.advance()
        self.expect_punct("}")
        return terms

    def parse_phi(self, head: Token) -> list[tuple[Token, list[Term]]]:
        self.expect_punct("{")
        entries: list[tuple[Token, list[Term]]] = []
        while not self.at_punct("}"):
            target = self.expect_ident()
            self.expect_punct("->")
            entries.append((target, self.parse_vector_or_zero()))
            self.expect_punct(";")
        self.expect_punct("}")
        return entries

    def parse_config(self, head: Token) -> "_RawConfig":
        self.expect_punct("{")
        out = _RawConfig(head=head)
        while not self.at_punct("}"):
            key = self.expect_ident("kappa", "tol")
            self.expect_punct("=")
            if key.text == "kappa":
                if out.kappa is not None:
                    raise self.error("duplicate kappa", token=key)
                sign = ONE
                if self.at_punct("-"):
                    self.advance()
                    sign = -ONE
                out.kappa = sign * self.parse_rational()
            else:
                if out.tol is not None:
                    raise self.error("duplicate tol", token=key)
                t = self.peek()
                if t.kind not in ("float", "number"):
                    raise self.error(f"got {t.text!r}", expected=("float literal",))
                self.advance()
                out.tol = float(t.text)
            self.expect_punct(";")
        self.expect_punct("}")
        return out


@dataclass
class _RawAlgebra:
    name: str
    head: Token
    dim: int | None = None
    dim_token: Token | None = None
    basis: list[Token] = field(default_factory=list)
    equations: list[tuple[Token, list[Term]]] = field(default_factory=list)


@dataclass
class _RawPair:
    head: Token
    alpha1: list[Term] | None = None
    alpha2: list[Term] | None = None


@dataclass
class _RawConfig:
    head: Token
    kappa: Fraction | None = None
    tol: float | None = None


@dataclass
class _RawBlocks:
    algebra: _RawAlgebra | None = None
    pair: _RawPair | None = None
    metric: list[Term] | None = None
    phi: list[tuple[Token, list[Term]]] | None = None
    config: _RawConfig | None = None


def _elaborate_one_form(terms: list[Term], index: dict[str, int], n: int, what: str) -> Form:
    coeffs: dict[tuple, Fraction] = {}
    for t in terms:
        if not t.names:
            if t.coeff != 0:
                raise DslError(f"constant term not allowed in {what}", t.token.line, t.token.col)
            continue
        if len(t.names) != 1 or t.op is not None:
            raise DslError(f"{what} must be a sum of single coframe names", t.token.line, t.token.col)
        name = t.names[0]
        if name not in index:
            raise DslError(f"undeclared coframe name {name!r}", t.token.line, t.token.col)
        i = (index[name],)
        coeffs[i] = coeffs.get(i, ZERO) + t.coeff
    return Form(n, 1, coeffs)


def _elaborate_two_form(terms: list[Term], index: dict[str, int], n: int, what: str) -> Form:
    coeffs: dict[tuple, Fraction] = {}
    for t in terms:
        if not t.names:
            if t.coeff != 0:
                raise DslError(f"constant term not allowed in {what}", t.token.line, t.token.col)
            continue
        if len(t.names) != 2 or t.op != "^":
            raise DslError(f"{what} must be a sum of wedge products wi^wj", t.token.line, t.token.col)
        for name in t.names:
            if name not in index:
                raise DslError(f"undeclared coframe name {name!r}", t.token.line, t.token.col)
        i, j = index[t.names[0]], index[t.names[1]]
        if i == j:
            continue
        key, sgn = ((i, j), ONE) if i < j else ((j, i), -ONE)
        coeffs[key] = coeffs.get(key, ZERO) + sgn * t.coeff
    return Form(n, 2, coeffs)


def _elaborate_metric(terms: list[Term], index: dict[str, int], n: int) -> Matrix:
    g = [[ZERO] * n for _ in range(n)]
    for t in terms:
        if not t.names:
            if t.coeff != 0:
                raise DslError("constant term not allowed in metric", t.token.line, t.token.col)
            continue
        if len(t.names) != 2 or t.op != "*":
            raise DslError("metric must be a sum of products wi*wj", t.token.line, t.token.col)
        for name in t.names:
            if name not in index:
                raise DslError(f"undeclared coframe name {name!r}", t.token.line, t.token.col)
        i, j = index[t.names[0]], index[t.names[1]]
        if i == j:
            g[i][i] += t.coeff
        else:
            g[i][j] += t.coeff / 2
            g[j][i] += t.coeff / 2
    return Matrix(g)


def _elaborate_vector(terms: list[Term], frame_index: dict[str, int], n: int, what: str) -> list[Fraction]:
    v = [ZERO] * n
    for t in terms:
        if not t.names:
            if t.coeff != 0:
                raise DslError(f"constant term not allowed in {what}", t.token.line, t.token.col)
            continue
        if len(t.names) != 1 or t.op is not None:
            raise DslError(f"{what} must be a sum of frame names", t.token.line, t.token.col)
        name = t.names[0]
        if name not in frame_index:
            raise DslError(f"undeclared frame name {name!r}", t.token.line, t.token.col)
        v[frame_index[name]] += t.coeff
    return v


def parse(text: str) -> InstanceSpec:
    raw = _Parser(text).parse_file()
    alg = raw.algebra
    if alg.dim is None:
        raise DslError("algebra block is missing dim", alg.head.line, alg.head.col)
    n = alg.dim
    if len(alg.basis) != n:
        t = alg.basis[0] if alg.basis else alg.head
        raise DslError(f"basis lists {len(alg.basis)} names for dim {n}", t.line, t.col)
    names: list[str] = []
    index: dict[str, int] = {}
    for t in alg.basis:
        if t.text in index:
            raise DslError(f"duplicate coframe name {t.text!r}", t.line, t.col)
        index[t.text] = len(names)
        names.append(t.text)
    equations: dict[int, Form] = {}
    for target, terms in alg.equations:
        if target.text not in index:
            raise DslError(f"undeclared coframe name {target.text!r}", target.line, target.col)
        k = index[target.text]
        if k in equations:
            raise DslError(f"duplicate structure equation for {target.text!r}", target.line, target.col)
        form = _elaborate_two_form(terms, index, n, f"d {target.text}") if terms else Form.zero(n, 2)
        equations[k] = form
    equations = {k: f for k, f in equations.items() if not f.is_zero()}

    alpha1 = alpha2 = None
    if raw.pair is not None:
        alpha1 = _elaborate_one_form(raw.pair.alpha1, index, n, "alpha1")
        alpha2 = _elaborate_one_form(raw.pair.alpha2, index, n, "alpha2")
    metric = _elaborate_metric(raw.metric, index, n) if raw.metric is not None else None

    phi = None
    if raw.phi is not None:
        frame_index = {f"X{i + 1}": i for i in range(n)}
        columns = [[ZERO] * n for _ in range(n)]
        seen: set[int] = set()
        for target, terms in raw.phi:
            if target.text not in frame_index:
                raise DslError(f"undeclared frame name {target.text!r}", target.line, target.col)
            j = frame_index[target.text]
            if j in seen:
                raise DslError(f"duplicate phi entry for {target.text!r}", target.line, target.col)
            seen.add(j)
            columns[j] = _elaborate_vector(terms, frame_index, n, f"phi image of {target.text}")
        phi = Matrix.from_columns(columns)

    kappa = raw.config.kappa if raw.config else None
    tol = raw.config.tol if raw.config else None
    return InstanceSpec(
        name=alg.name,
        n=n,
        coframe=tuple(names),
        equations=equations,
        alpha1=alpha1,
        alpha2=alpha2,
        metric=metric,
        phi=phi,
        kappa=kappa,
        tol=tol,
    )


# --- canonical renderer ------------------------------------------------------


def _render_coeff_name(coeff: Fraction, body: str) -> tuple[str, str]:
    sign = "-" if coeff < 0 else "+"
    mag = abs(coeff)
    return sign, body if mag == 1 else f"{mag} {body}"


def _join_terms(parts: list[tuple[str, str]]) -> str:
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def render_metric_expression(G: Matrix, names: Sequence[str]) -> str:
    parts = []
    n = G.rows
    for i in range(n):
        for j in range(i, n):
            q = G[i, j] if i == j else 2 * G[i, j]
            if q == 0:
                continue
            parts.append(_render_coeff_name(q, f"{names[i]}*{names[j]}"))
    return _join_terms(parts)


def render_vector_expression(coeffs: Sequence[Fraction], names: Sequence[str]) -> str:
    parts = [
        _render_coeff_name(c, names[i]) for i, c in enumerate(coeffs) if c != 0
    ]
    return _join_terms(parts)


def render(spec: InstanceSpec) -> str:
    lines = [f"algebra {spec.name} {{"]
    lines.append(f"  dim {spec.n};")
    lines.append("  basis " + " ".join(spec.coframe) + ";")
    for k in sorted(spec.equations):
        lines.append(f"  d {spec.coframe[k]} = {spec.equations[k].render(spec.coframe)};")
    lines.append("}")
    if spec.alpha1 is not None and spec.alpha2 is not None:
        lines.append("")
        lines.append("pair {")
        lines.append(f"  alpha1 = {spec.alpha1.render(spec.coframe)};")
        lines.append(f"  alpha2 = {spec.alpha2.render(spec.coframe)};")
        lines.append("}")
    if spec.metric is not None:
        lines.append("")
        lines.append("metric {")
        lines.append(f"  {render_metric_expression(spec.metric, spec.coframe)}")
        lines.append("}")
    if spec.phi is not None:
        frame = spec.frame_names()
        lines.append("")
        lines.append("phi {")
        for j in range(spec.n):
            col = spec.phi.column(j)
            lines.append(f"  {frame[j]} -> {render_vector_expression(col, frame)};")
        lines.append("}")
    if spec.kappa is not None or spec.tol is not None:
        lines.append("")
        lines.append("config {")
        if spec.kappa is not None:
            lines.append(f"  kappa = {spec.kappa};")
        if spec.tol is not None:
            lines.append(f"  tol = {spec.tol};")
        lines.append("}")
    return "\n".join(lines) + "\n"
