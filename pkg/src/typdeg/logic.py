"""First-order formulas over the three signature families.

Concrete syntax (whitespace-insensitive):

    formula := iff
    iff     := imp ("<->" imp)*          left-associative
    imp     := or ("->" or)*             right-associative
    or      := and ("|" and)*            left-associative
    and     := unary ("&" unary)*        left-associative
    unary   := "!" unary | quant | atom | "(" formula ")"
    quant   := ("forall" | "exists" | "exists!") var "." unary
    atom    := pred "(" term ")" | "E" "(" term "," term ")"
             | term ("=" | "!=") term
    term    := var | "F" "(" term ")"
    pred    := "U" digits
    var     := letter digits?           (letters E, F, U are reserved)

"t1 != t2" is sugar for "!(t1 = t2)" and round-trips through rendering.
"exists!" is a primitive unique-existence quantifier, not an abbreviation.
A quantifier body is a unary-level formula, so it binds tighter than any
binary connective: "forall y. U1(y) & U2(y)" conjoins the quantified formula
with U2(y).

Properties are formulas whose only free variable is x; sentences have none.
Evaluation is direct recursive interpretation over all assignments.  This is
the semantic reference; the array-based engine in batcheval must agree with
it structure by structure, and the tests check that.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from .structures import FUNCTION, GRAPH, UNARY, Signature, Structure

__all__ = [
    "Var", "Func", "Pred", "Edge", "Eq", "Not", "And", "Or", "Implies", "Iff",
    "Forall", "Exists", "ExistsUnique",
    "Term", "Formula",
    "ParseError", "FreeVariableError", "SignatureError", "EvaluationError",
    "BasicPropertyDescriptor",
    "parse_property", "render", "free_variables", "quantifier_depth",
    "evaluate", "extension_size", "classify", "satisfies_at_least",
    "substitute_free", "at_least_sentence",
]


# ---------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Func:
    """Application of the unary function symbol F."""
    arg: "Term"


Term = Union[Var, Func]


@dataclass(frozen=True)
class Pred:
    """U_i(t) for the unary-predicates family."""
    index: int
    arg: Term


@dataclass(frozen=True)
class Edge:
    left: Term
    right: Term


@dataclass(frozen=True)
class Eq:
    left: Term
    right: Term


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsUnique:
    var: str
    body: "Formula"


Formula = Union[
    Pred, Edge, Eq, Not, And, Or, Implies, Iff, Forall, Exists, ExistsUnique
]

_QUANTIFIERS = {Forall: "forall", Exists: "exists", ExistsUnique: "exists!"}


class ParseError(ValueError):
    """Syntax, symbol, or arity error, annotated with a character position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class FreeVariableError(ValueError):
    pass


class SignatureError(ValueError):
    """Formula uses a symbol the structure's signature does not provide."""


class EvaluationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow2><->)|(?P<arrow>->)|(?P<neq>!=)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9]*)"
    r"|(?P<punct>[().,&|!=]))"
)

_RESERVED_LETTERS = {"E", "F", "U"}
_VAR_RE = re.compile(r"[A-Za-z][0-9]*\Z")
_PRED_RE = re.compile(r"U([0-9]+)\Z")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ParseError(f"unexpected character {stripped[0]!r}", at)
        kind = match.lastgroup
        value = match.group(kind)
        tokens.append((kind, value, match.start(kind)))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.tokens = _tokenize(text)
        self.sig = sig
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, value: str):
        kind, got, at = self.peek()
        if got != value:
            shown = got if kind != "end" else "end of input"
            raise ParseError(f"expected {value!r}, found {shown!r}", at)
        return self.advance()

    def fail(self, message: str):
        _, _, at = self.peek()
        raise ParseError(message, at)

    # grammar productions, top down

    def formula(self) -> Formula:
        node = self.imp()
        while self.peek()[1] == "<->":
            self.advance()
            node = Iff(node, self.imp())
        return node

    def imp(self) -> Formula:
        parts = [self.disj()]
        while self.peek()[1] == "->":
            self.advance()
            parts.append(self.disj())
        node = parts[-1]
        for left in reversed(parts[:-1]):
            node = Implies(left, node)
        return node

    def disj(self) -> Formula:
        node = self.conj()
        while self.peek()[1] == "|":
            self.advance()
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unary()
        while self.peek()[1] == "&":
            self.advance()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        kind, value, at = self.peek()
        if value == "!":
            self.advance()
            return Not(self.unary())
        if value == "(":
            self.advance()
            node = self.formula()
            self.expect(")")
            return node
        if value in ("forall", "exists"):
            return self.quantified()
        return self.atom()

    def quantified(self) -> Formula:
        _, keyword, _ = self.advance()
        cls = Forall
        if keyword == "exists":
            cls = Exists
            if self.peek()[1] == "!":
                self.advance()
                cls = ExistsUnique
        var = self.variable()
        self.expect(".")
        return cls(var, self.unary())

    def variable(self) -> str:
        kind, value, at = self.peek()
        if kind != "ident" or not _VAR_RE.match(value):
            raise ParseError("expected a variable", at)
        if value[0] in _RESERVED_LETTERS:
            raise ParseError(f"{value!r} is reserved and cannot be a variable", at)
        if value in ("forall", "exists"):
            raise ParseError(f"{value!r} is a keyword, not a variable", at)
        self.advance()
        return value

    def atom(self) -> Formula:
        kind, value, at = self.peek()
        if kind == "ident":
            pred = _PRED_RE.match(value)
            if pred:
                if self.sig.family != UNARY:
                    raise ParseError(
                        f"predicate {value} needs the unary signature", at)
                index = int(pred.group(1))
                if not 1 <= index <= self.sig.k:
                    raise ParseError(
                        f"predicate index {index} outside 1..{self.sig.k}", at)
                self.advance()
                self.expect("(")
                arg = self.term()
                self.expect(")")
                return Pred(index, arg)
            if value == "E":
                if self.sig.family != GRAPH:
                    raise ParseError("edge symbol needs the graph signature", at)
                self.advance()
                self.expect("(")
                left = self.term()
                self.expect(",")
                right = self.term()
                self.expect(")")
                return Edge(left, right)
            if value == "U":
                raise ParseError("predicate symbol needs a numeric index", at)
        left = self.term()
        _, op, opat = self.peek()
        if op == "=":
            self.advance()
            return Eq(left, self.term())
        if op == "!=":
            self.advance()
            return Not(Eq(left, self.term()))
        raise ParseError("expected '=' or '!=' after a term", opat)

    def term(self) -> Term:
        kind, value, at = self.peek()
        if kind != "ident":
            raise ParseError("expected a term", at)
        if value == "F":
            if self.sig.family != FUNCTION:
                raise ParseError("function symbol needs the function signature", at)
            self.advance()
            self.expect("(")
            arg = self.term()
            self.expect(")")
            return Func(arg)
        return Var(self.variable())


def parse_property(text: str, sig: Signature) -> Formula:
    """Parse text against sig; free variables must be within {x}.

    Returns a property (free variable x) or a sentence (no free variable).
    """
    parser = _Parser(text, sig)
    node = parser.formula()
    kind, value, at = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected trailing input {value!r}", at)
    extra = free_variables(node) - {"x"}
    if extra:
        raise FreeVariableError(
            f"free variables besides x are not allowed: {sorted(extra)}"
        )
    return node


# ---------------------------------------------------------------------------
# Rendering.  Levels: iff 1, imp 2, or 3, and 4, unary 5, atom 6.
# parse(render(f)) == f structurally for every well-formed AST.

def _render_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    return f"F({_render_term(t.arg)})"


def _level(f: Formula) -> int:
    if isinstance(f, Iff):
        return 1
    if isinstance(f, Implies):
        return 2
    if isinstance(f, Or):
        return 3
    if isinstance(f, And):
        return 4
    if isinstance(f, (Forall, Exists, ExistsUnique)):
        return 5
    if isinstance(f, Not):
        return 6 if isinstance(f.body, Eq) else 5
    return 6


def _render(f: Formula, floor: int) -> str:
    if isinstance(f, Pred):
        text = f"U{f.index}({_render_term(f.arg)})"
    elif isinstance(f, Edge):
        text = f"E({_render_term(f.left)}, {_render_term(f.right)})"
    elif isinstance(f, Eq):
        text = f"{_render_term(f.left)} = {_render_term(f.right)}"
    elif isinstance(f, Not):
        if isinstance(f.body, Eq):
            eq = f.body
            text = f"{_render_term(eq.left)} != {_render_term(eq.right)}"
        else:
            text = f"!{_render(f.body, 5)}"
    elif isinstance(f, (Forall, Exists, ExistsUnique)):
        keyword = _QUANTIFIERS[type(f)]
        text = f"{keyword} {f.var}. {_render(f.body, 5)}"
    elif isinstance(f, And):
        text = f"{_render(f.left, 4)} & {_render(f.right, 5)}"
    elif isinstance(f, Or):
        text = f"{_render(f.left, 3)} | {_render(f.right, 4)}"
    elif isinstance(f, Implies):
        text = f"{_render(f.left, 3)} -> {_render(f.right, 2)}"
    elif isinstance(f, Iff):
        text = f"{_render(f.left, 1)} <-> {_render(f.right, 2)}"
    else:
        raise TypeError(f"not a formula node: {f!r}")
    if _level(f) < floor:
        return f"({text})"
    return text


def render(f: Formula) -> str:
    """Canonical concrete syntax; inverse of parse_property on its image."""
    return _render(f, 1)


# ---------------------------------------------------------------------------
# Structural queries

def _subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Func):
        yield from _subterms(t.arg)


def _term_vars(t: Term) -> Iterator[str]:
    for sub in _subterms(t):
        if isinstance(sub, Var):
            yield sub.name


def free_variables(f: Formula) -> frozenset:
    if isinstance(f, Pred):
        return frozenset(_term_vars(f.arg))
    if isinstance(f, (Edge, Eq)):
        return frozenset(_term_vars(f.left)) | frozenset(_term_vars(f.right))
    if isinstance(f, Not):
        return free_variables(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return free_variables(f.left) | free_variables(f.right)
    if isinstance(f, (Forall, Exists, ExistsUnique)):
        return free_variables(f.body) - {f.var}
    raise TypeError(f"not a formula node: {f!r}")


def quantifier_depth(f: Formula) -> int:
    """Maximum quantifier nesting along any path."""
    if isinstance(f, (Pred, Edge, Eq)):
        return 0
    if isinstance(f, Not):
        return quantifier_depth(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return max(quantifier_depth(f.left), quantifier_depth(f.right))
    return 1 + quantifier_depth(f.body)


def _bound_variables(f: Formula) -> set:
    if isinstance(f, (Pred, Edge, Eq)):
        return set()
    if isinstance(f, Not):
        return _bound_variables(f.body)
    if isinstance(f, (And, Or, Implies, Iff)):
        return _bound_variables(f.left) | _bound_variables(f.right)
    return {f.var} | _bound_variables(f.body)


def substitute_free(f: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of variable old to new.

    new must not be bound anywhere in f; that rules out capture without
    needing alpha-renaming.
    """
    if new in _bound_variables(f):
        raise ValueError(f"substituting {new!r} would capture a bound variable")

    def sub_term(t: Term) -> Term:
        if isinstance(t, Var):
            return Var(new) if t.name == old else t
        return Func(sub_term(t.arg))

    def sub(g: Formula) -> Formula:
        if isinstance(g, Pred):
            return Pred(g.index, sub_term(g.arg))
        if isinstance(g, Edge):
            return Edge(sub_term(g.left), sub_term(g.right))
        if isinstance(g, Eq):
            return Eq(sub_term(g.left), sub_term(g.right))
        if isinstance(g, Not):
            return Not(sub(g.body))
        if isinstance(g, (And, Or, Implies, Iff)):
            return type(g)(sub(g.left), sub(g.right))
        if isinstance(g, (Forall, Exists, ExistsUnique)):
            if g.var == old:
                return g
            return type(g)(g.var, sub(g.body))
        raise TypeError(f"not a formula node: {g!r}")

    return sub(f)


def at_least_sentence(f: Formula, mcount: int, prefix: str = "w") -> Formula:
    """Sentence asserting f has at least mcount witnesses, built syntactically:
    exists w1 .. w_m, pairwise distinct, each satisfying f.

    The free variable of f is replaced by the fresh w_i; mcount = 0 yields a
    tautology.  Used in tests as the syntactic mirror of satisfies_at_least.
    """
    if mcount < 0:
        raise ValueError("witness count must be nonnegative")
    free = free_variables(f)
    if len(free) != 1:
        raise FreeVariableError("at_least_sentence needs exactly one free variable")
    (var,) = free
    if mcount == 0:
        dummy = f"{prefix}0"
        return Forall(dummy, Eq(Var(dummy), Var(dummy)))
    names = [f"{prefix}{i}" for i in range(1, mcount + 1)]
    parts = []
    for i in range(mcount):
        for j in range(i + 1, mcount):
            parts.append(Not(Eq(Var(names[i]), Var(names[j]))))
    for name in names:
        parts.append(substitute_free(f, var, name))
    body = parts[0]
    for part in parts[1:]:
        body = And(body, part)
    sentence: Formula = body
    for name in reversed(names):
        sentence = Exists(name, sentence)
    return sentence


# ---------------------------------------------------------------------------
# Evaluation

def _eval_term(t: Term, m: Structure, env: dict) -> int:
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvaluationError(f"unassigned free variable {t.name!r}") from None
    if m.sig.family != FUNCTION:
        raise SignatureError("function symbol applied outside the function family")
    return m.func_value(_eval_term(t.arg, m, env))


def _eval(f: Formula, m: Structure, env: dict) -> bool:
    if isinstance(f, Pred):
        if m.sig.family != UNARY:
            raise SignatureError("predicate symbol outside the unary family")
        return m.pred_member(f.index, _eval_term(f.arg, m, env))
    if isinstance(f, Edge):
        if m.sig.family != GRAPH:
            raise SignatureError("edge symbol outside the graph family")
        return m.has_edge(_eval_term(f.left, m, env), _eval_term(f.right, m, env))
    if isinstance(f, Eq):
        return _eval_term(f.left, m, env) == _eval_term(f.right, m, env)
    if isinstance(f, Not):
        return not _eval(f.body, m, env)
    if isinstance(f, And):
        return _eval(f.left, m, env) and _eval(f.right, m, env)
    if isinstance(f, Or):
        return _eval(f.left, m, env) or _eval(f.right, m, env)
    if isinstance(f, Implies):
        return not _eval(f.left, m, env) or _eval(f.right, m, env)
    if isinstance(f, Iff):
        return _eval(f.left, m, env) == _eval(f.right, m, env)
    if isinstance(f, Forall):
        return all(
            _eval(f.body, m, {**env, f.var: a}) for a in range(1, m.n + 1)
        )
    if isinstance(f, Exists):
        return any(
            _eval(f.body, m, {**env, f.var: a}) for a in range(1, m.n + 1)
        )
    if isinstance(f, ExistsUnique):
        found = 0
        for a in range(1, m.n + 1):
            if _eval(f.body, m, {**env, f.var: a}):
                found += 1
                if found > 1:
                    return False
        return found == 1
    raise TypeError(f"not a formula node: {f!r}")


def evaluate(f: Formula, m: Structure, assignment: Optional[dict] = None) -> bool:
    """Truth of f in m under the assignment (1-based elements)."""
    env = dict(assignment) if assignment else {}
    for name, value in env.items():
        if not 1 <= value <= m.n:
            raise EvaluationError(f"assignment {name}={value} outside 1..{m.n}")
    return _eval(f, m, env)


def _property_variable(f: Formula) -> str:
    free = free_variables(f)
    if len(free) != 1:
        raise FreeVariableError(
            f"a property needs exactly one free variable, found {sorted(free)}"
        )
    return next(iter(free))


def extension_size(f: Formula, m: Structure) -> int:
    """|f(M)|: the number of elements satisfying the property."""
    var = _property_variable(f)
    return sum(
        1 for a in range(1, m.n + 1) if _eval(f, m, {var: a})
    )


def classify(f: Formula, m: Structure) -> str:
    """typical (|f(M)| > n/2), neutral (= n/2, even n only), or atypical.

    Comparisons are exact; n = 1 classifies typical exactly when the single
    element satisfies f, and neutrality cannot occur at odd n.
    """
    ext = extension_size(f, m)
    if 2 * ext > m.n:
        return "typical"
    if 2 * ext == m.n:
        return "neutral"
    return "atypical"


def satisfies_at_least(f: Formula, m: Structure, mcount: int) -> bool:
    """Semantic check |f(M)| >= mcount; mcount = 0 holds vacuously."""
    if mcount < 0:
        raise ValueError("witness count must be nonnegative")
    return extension_size(f, m) >= mcount


# ---------------------------------------------------------------------------
# Basic properties of the unary family

@dataclass(frozen=True)
class BasicPropertyDescriptor:
    """Conjunction of signed predicates: indices strictly increasing, each
    sign 1 (positive) or 0 (negated)."""

    indices: tuple
    signs: tuple

    def __post_init__(self) -> None:
        if len(self.indices) != len(self.signs) or not self.indices:
            raise ValueError("indices and signs must be same nonzero length")
        if any(not isinstance(i, int) or i < 1 for i in self.indices):
            raise ValueError("predicate indices must be positive integers")
        if list(self.indices) != sorted(set(self.indices)):
            raise ValueError("indices must be strictly increasing")
        if any(e not in (0, 1) for e in self.signs):
            raise ValueError("signs must be 0 or 1")

    @property
    def arity(self) -> int:
        return len(self.indices)

    def to_formula(self) -> Formula:
        parts = []
        for i, e in zip(self.indices, self.signs):
            atom: Formula = Pred(i, Var("x"))
            parts.append(atom if e else Not(atom))
        node = parts[0]
        for part in parts[1:]:
            node = And(node, part)
        return node
