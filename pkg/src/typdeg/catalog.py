"""Built-in property catalog.

Short names for the properties the package studies, so CLI invocations can
say `--prop fneq` instead of spelling the formula:

    u(i)            the i-th predicate, unary-predicates signature
    basic(s;e)      signed conjunction of distinct predicates, e.g.
                    basic(1,2;1,0) = U1(x) & !U2(x)
    fneq / ffix     F(x) != x  /  F(x) = x, function signature
    iso             isolated node: forall y. !E(x, y)
    adjall          adjacent to every other node
    adjk(k)         adjacent to exactly k nodes (adjk(0) = iso,
                    adjk(1) via the unique-existence quantifier)

`resolve` maps a name to its AST, `identify` maps an AST back to its
canonical name (used to pick closed forms and limit targets), and
`entries` lists the concrete catalog for a signature.
"""

from __future__ import annotations

import re
from typing import Optional

from . import logic
from .logic import (
    And,
    Edge,
    Eq,
    Exists,
    ExistsUnique,
    Forall,
    Formula,
    Func,
    Iff,
    Implies,
    Not,
    Or,
    Pred,
    Var,
)
from .structures import FUNCTION, GRAPH, UNARY, Signature

__all__ = [
    "resolve", "identify", "entries", "basic_name", "match_basic",
]

_X = Var("x")


def _conj(parts: list) -> Formula:
    out = parts[0]
    for part in parts[1:]:
        out = And(out, part)
    return out


def _disj(parts: list) -> Formula:
    out = parts[0]
    for part in parts[1:]:
        out = Or(out, part)
    return out


def build_u(i: int) -> Formula:
    return Pred(i, _X)


def build_basic(indices: tuple, signs: tuple) -> Formula:
    """phi with the listed predicates required positive (1) or negated (0)."""
    if len(indices) != len(signs) or not indices:
        raise ValueError("indices and signs must be equal-length and nonempty")
    if list(indices) != sorted(set(indices)):
        raise ValueError("indices must be strictly increasing")
    if any(s not in (0, 1) for s in signs):
        raise ValueError("signs must be 0 or 1")
    parts = [
        Pred(i, _X) if s else Not(Pred(i, _X))
        for i, s in zip(indices, signs)
    ]
    return _conj(parts)


def build_fneq() -> Formula:
    return Not(Eq(Func(_X), _X))


def build_ffix() -> Formula:
    return Eq(Func(_X), _X)


def build_iso() -> Formula:
    return Forall("y", Not(Edge(_X, Var("y"))))


def build_adjall() -> Formula:
    # Guarded by y = x: adjacency is irreflexive, so the unguarded form
    # would be unsatisfiable rather than "adjacent to every other node".
    return Forall("y", Or(Eq(Var("y"), _X), Edge(_X, Var("y"))))


def build_adjk(k: int) -> Formula:
    if k < 0:
        raise ValueError("adjacency count must be nonnegative")
    if k == 0:
        return build_iso()
    if k == 1:
        return ExistsUnique("y", Edge(_X, Var("y")))
    names = [f"y{i}" for i in range(1, k + 1)]
    parts = []
    for i in range(k):
        for j in range(i + 1, k):
            parts.append(Not(Eq(Var(names[i]), Var(names[j]))))
    for name in names:
        parts.append(Edge(_X, Var(name)))
    closure = Forall(
        "z",
        Implies(
            Edge(_X, Var("z")),
            _disj([Eq(Var("z"), Var(name)) for name in names]),
        ),
    )
    body: Formula = And(_conj(parts), closure)
    for name in reversed(names):
        body = Exists(name, body)
    return body


def basic_name(indices: tuple, signs: tuple) -> str:
    return "basic({};{})".format(
        ",".join(str(i) for i in indices), ",".join(str(s) for s in signs)
    )


_NAME_RE = re.compile(
    r"^\s*(u|basic|fneq|ffix|iso|adjall|adjk)\s*(?:\((.*)\))?\s*$"
)


def _want(sig: Signature, family: str, name: str) -> None:
    if sig.family != family:
        raise logic.SignatureError(
            f"catalog name {name!r} needs the {family} signature, got {sig.family}"
        )


def resolve(name: str, sig: Signature) -> Optional[Formula]:
    """AST for a catalog name, or None when the text is not a catalog name.

    A recognized head with bad arguments is an error, not a None: `u(0)`
    should not fall through to the formula parser.
    """
    m = _NAME_RE.match(name)
    if not m:
        return None
    head, args = m.group(1), m.group(2)
    if head == "u":
        _want(sig, UNARY, name)
        if args is None:
            raise ValueError("u needs a predicate index, e.g. u(1)")
        i = int(args)
        if not 1 <= i <= sig.k:
            raise ValueError(f"predicate index {i} outside 1..{sig.k}")
        return build_u(i)
    if head == "basic":
        _want(sig, UNARY, name)
        if args is None or ";" not in args:
            raise ValueError("basic needs indices;signs, e.g. basic(1,2;1,0)")
        left, right = args.split(";", 1)
        indices = tuple(int(s) for s in left.split(","))
        signs = tuple(int(s) for s in right.split(","))
        if any(not 1 <= i <= sig.k for i in indices):
            raise ValueError(f"predicate indices {indices} outside 1..{sig.k}")
        return build_basic(indices, signs)
    if args is not None:
        if head != "adjk":
            raise ValueError(f"{head} takes no arguments")
        _want(sig, GRAPH, name)
        return build_adjk(int(args))
    if head == "adjk":
        raise ValueError("adjk needs a count, e.g. adjk(2)")
    if head in ("fneq", "ffix"):
        _want(sig, FUNCTION, name)
        return build_fneq() if head == "fneq" else build_ffix()
    _want(sig, GRAPH, name)
    return build_iso() if head == "iso" else build_adjall()


def entries(sig: Signature) -> list:
    """Concrete (name, formula) pairs for the signature's catalog."""
    if sig.family == UNARY:
        out = [(f"u({i})", build_u(i)) for i in range(1, sig.k + 1)]
        if sig.k >= 2:
            out.append((basic_name((1, 2), (1, 0)), build_basic((1, 2), (1, 0))))
        return out
    if sig.family == FUNCTION:
        return [("fneq", build_fneq()), ("ffix", build_ffix())]
    return [
        ("iso", build_iso()),
        ("adjall", build_adjall()),
        ("adjk(1)", build_adjk(1)),
        ("adjk(2)", build_adjk(2)),
        ("adjk(3)", build_adjk(3)),
    ]


# ---------------------------------------------------------------------------
# Recognition

def _alpha(f: Formula, env: dict, counter: list) -> Formula:
    """Rename bound variables to b1, b2, ... in pre-order; frees untouched."""

    def term(t):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        return Func(term(t.arg))

    if isinstance(f, Pred):
        return Pred(f.index, term(f.arg))
    if isinstance(f, Edge):
        return Edge(term(f.left), term(f.right))
    if isinstance(f, Eq):
        return Eq(term(f.left), term(f.right))
    if isinstance(f, Not):
        return Not(_alpha(f.body, env, counter))
    if isinstance(f, (And, Or, Implies, Iff)):
        return type(f)(
            _alpha(f.left, env, counter), _alpha(f.right, env, counter)
        )
    if isinstance(f, (Forall, Exists, ExistsUnique)):
        counter[0] += 1
        fresh = f"b{counter[0]}"
        inner = dict(env)
        inner[f.var] = fresh
        return type(f)(fresh, _alpha(f.body, env=inner, counter=counter))
    raise TypeError(f"not a formula node: {f!r}")


def alpha_normal(f: Formula) -> Formula:
    return _alpha(f, {}, [0])


def match_basic(f: Formula) -> Optional[tuple]:
    """(indices, signs) when f is a signed conjunction of distinct predicates
    of the one free variable, in strictly increasing index order; else None.
    """
    atoms = []
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, And):
            stack.append(g.right)
            stack.append(g.left)
        elif isinstance(g, Pred) and isinstance(g.arg, Var):
            atoms.append((g.index, 1, g.arg.name))
        elif (
            isinstance(g, Not)
            and isinstance(g.body, Pred)
            and isinstance(g.body.arg, Var)
        ):
            atoms.append((g.body.index, 0, g.body.arg.name))
        else:
            return None
    indices = [a[0] for a in atoms]
    if indices != sorted(set(indices)):
        return None
    if len({a[2] for a in atoms}) != 1:
        return None
    return tuple(indices), tuple(a[1] for a in atoms)


def identify(f: Formula, sig: Signature) -> Optional[str]:
    """Canonical catalog name for f, modulo bound-variable names."""
    probe = alpha_normal(f)
    if sig.family == FUNCTION:
        for name, g in (("fneq", build_fneq()), ("ffix", build_ffix())):
            if probe == alpha_normal(g):
                return name
        return None
    if sig.family == UNARY:
        hit = match_basic(f)
        if hit is None:
            return None
        indices, signs = hit
        if len(indices) == 1 and signs[0] == 1:
            return f"u({indices[0]})"
        return basic_name(indices, signs)
    candidates = [("iso", build_iso()), ("adjall", build_adjall())]
    candidates += [(f"adjk({k})", build_adjk(k)) for k in range(1, 9)]
    for name, g in candidates:
        if probe == alpha_normal(g):
            return name
    return None
