"""Finite structures over three signature families, with index bijections.

Families:
  unary     k unary predicates U1..Uk; a structure is a k-tuple of subsets
            of {1..n}, stored as bitmasks (bit a-1 = membership of element a).
  function  one unary function F; a structure is its table, stored as a
            length-n tuple of values in {1..n}.
  graph     one irreflexive symmetric edge relation E; a structure is a
            bitset over the C(n,2) unordered pairs in lexicographic order
            ((1,2), (1,3), ..., (1,n), (2,3), ...), bit 0 = pair (1,2).

Two counting conventions exist for the unary family only:
  free            all 2^(kn) tuples of subsets.
  paper-distinct  the predicate sets are pairwise distinct and none is empty
                  or the whole universe; (2^n - 2)_k structures.

Index bijections: the free unary index packs the masks predicate-major
(W1 in the lowest n bits), the function index is mixed-radix base n with
element 1 least significant, and the graph index is the bitset itself.
The paper-distinct index unranks tuples of distinct admissible masks in
lexicographic order with W1 most significant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .combinatorics import falling_factorial

__all__ = [
    "UNARY",
    "FUNCTION",
    "GRAPH",
    "FREE",
    "DISTINCT",
    "CONVENTIONS",
    "Signature",
    "Structure",
    "InfeasibleConventionError",
    "RejectionCapError",
    "structure_count",
    "decode_structure",
    "structure_index",
    "enumerate_structures",
    "sample_structure",
    "predicate_atoms",
    "structure_to_json",
    "structure_from_json",
]

UNARY = "unary"
FUNCTION = "function"
GRAPH = "graph"
FAMILIES = (UNARY, FUNCTION, GRAPH)

FREE = "free"
DISTINCT = "paper-distinct"
CONVENTIONS = (FREE, DISTINCT)

SAMPLE_REJECTION_CAP = 10**6


class InfeasibleConventionError(ValueError):
    """Raised when (2^n - 2)_k admits no structure (fewer admissible sets than k)."""


class RejectionCapError(RuntimeError):
    """Raised when rejection sampling exceeds the iteration cap."""


@dataclass(frozen=True)
class Signature:
    family: str
    k: Optional[int] = None

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown signature family {self.family!r}")
        if self.family == UNARY:
            if not isinstance(self.k, int) or self.k < 1:
                raise ValueError("unary signature requires k >= 1")
        elif self.k is not None:
            raise ValueError(f"{self.family} signature takes no k")

    def describe(self) -> str:
        """CLI-style name: unary:k, function, or graph."""
        if self.family == UNARY:
            return f"{UNARY}:{self.k}"
        return self.family

    @classmethod
    def unary(cls, k: int) -> "Signature":
        return cls(UNARY, k)

    @classmethod
    def function(cls) -> "Signature":
        return cls(FUNCTION)

    @classmethod
    def graph(cls) -> "Signature":
        return cls(GRAPH)


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise ValueError("universe size n must be a positive integer")


def _check_convention(conv: str) -> None:
    if conv not in CONVENTIONS:
        raise ValueError(f"unknown convention {conv!r}")


def _pair_index(n: int, a: int, b: int) -> int:
    """Bit position of the unordered pair {a, b}, a < b, in lexicographic order."""
    return math.comb(n, 2) - math.comb(n - a + 1, 2) + (b - a - 1)


@dataclass(frozen=True)
class Structure:
    """One finite structure; payload layout depends on the family."""

    sig: Signature
    n: int
    payload: object

    def __post_init__(self) -> None:
        _check_n(self.n)
        fam, n = self.sig.family, self.n
        if fam == UNARY:
            masks = self.payload
            if not isinstance(masks, tuple) or len(masks) != self.sig.k:
                raise ValueError("unary payload must be a k-tuple of masks")
            for w in masks:
                if not isinstance(w, int) or not 0 <= w < 1 << n:
                    raise ValueError("predicate mask out of range")
        elif fam == FUNCTION:
            table = self.payload
            if not isinstance(table, tuple) or len(table) != n:
                raise ValueError("function payload must be a length-n tuple")
            for v in table:
                if not isinstance(v, int) or not 1 <= v <= n:
                    raise ValueError("function value out of range")
        else:
            bits = self.payload
            if not isinstance(bits, int) or not 0 <= bits < 1 << math.comb(n, 2):
                raise ValueError("graph payload out of range")

    def pred_member(self, i: int, a: int) -> bool:
        """Element a in the interpretation of U_i."""
        if self.sig.family != UNARY:
            raise ValueError("predicate lookup on a non-unary structure")
        if not 1 <= i <= self.sig.k:
            raise ValueError(f"predicate index {i} outside 1..{self.sig.k}")
        return bool(self.payload[i - 1] >> (a - 1) & 1)

    def func_value(self, a: int) -> int:
        if self.sig.family != FUNCTION:
            raise ValueError("function application on a non-function structure")
        return self.payload[a - 1]

    def has_edge(self, a: int, b: int) -> bool:
        """E(a, b); false on the diagonal for every structure."""
        if self.sig.family != GRAPH:
            raise ValueError("edge lookup on a non-graph structure")
        if a == b:
            return False
        if a > b:
            a, b = b, a
        return bool(self.payload >> _pair_index(self.n, a, b) & 1)


def structure_count(sig: Signature, n: int, conv: str = FREE) -> int:
    """|S_n(L)| under the convention; conv only matters for the unary family."""
    _check_n(n)
    _check_convention(conv)
    if sig.family == UNARY:
        if conv == FREE:
            return 1 << (sig.k * n)
        admissible = (1 << n) - 2
        if admissible < sig.k:
            raise InfeasibleConventionError(
                f"{admissible} admissible sets cannot host {sig.k} distinct predicates"
            )
        return falling_factorial(admissible, sig.k)
    if sig.family == FUNCTION:
        return n**n
    return 1 << math.comb(n, 2)


def _masks_admissible(masks: tuple, n: int) -> bool:
    full = (1 << n) - 1
    if any(w == 0 or w == full for w in masks):
        return False
    return len(set(masks)) == len(masks)


def _unrank_distinct(n: int, k: int, index: int) -> tuple:
    """Lexicographic unranking of distinct admissible masks, W1 most significant.

    Admissible mask values are 1 .. 2^n - 2 in increasing order; position j
    picks the d-th smallest value not already used, where d is the j-th digit
    of index in the falling-factorial mixed radix.
    """
    m = (1 << n) - 2
    used: list = []
    masks = []
    for j in range(k):
        base = falling_factorial(m - 1 - j, k - 1 - j)
        d, index = divmod(index, base)
        candidate = d
        for r in sorted(used):
            if r <= candidate:
                candidate += 1
        used.append(candidate)
        masks.append(candidate + 1)
    return tuple(masks)


def decode_structure(sig: Signature, n: int, index: int, conv: str = FREE) -> Structure:
    """Bijective index-to-structure decoding on [0, structure_count)."""
    total = structure_count(sig, n, conv)
    if not 0 <= index < total:
        raise IndexError(f"structure index {index} outside [0, {total})")
    if sig.family == UNARY:
        if conv == FREE:
            mask_all = (1 << n) - 1
            masks = tuple((index >> (n * i)) & mask_all for i in range(sig.k))
        else:
            masks = _unrank_distinct(n, sig.k, index)
        return Structure(sig, n, masks)
    if sig.family == FUNCTION:
        table = []
        for _ in range(n):
            index, digit = divmod(index, n)
            table.append(digit + 1)
        return Structure(sig, n, tuple(table))
    return Structure(sig, n, index)


def structure_index(m: Structure, conv: str = FREE) -> int:
    """Inverse of decode_structure."""
    sig, n = m.sig, m.n
    if sig.family == UNARY:
        if conv == FREE:
            return sum(w << (n * i) for i, w in enumerate(m.payload))
        if not _masks_admissible(m.payload, n):
            raise ValueError("structure violates the paper-distinct convention")
        size = (1 << n) - 2
        used: list = []
        index = 0
        for j, w in enumerate(m.payload):
            rank = w - 1
            d = rank - sum(1 for r in used if r < rank)
            index += d * falling_factorial(size - 1 - j, sig.k - 1 - j)
            used.append(rank)
        return index
    if sig.family == FUNCTION:
        index = 0
        for v in reversed(m.payload):
            index = index * n + (v - 1)
        return index
    return m.payload


def enumerate_structures(
    sig: Signature,
    n: int,
    conv: str = FREE,
    start: int = 0,
    stop: Optional[int] = None,
) -> Iterator[Structure]:
    """Stream decode_structure over [start, stop); the full range covers
    S_n(L) exactly once and disjoint ranges partition it."""
    total = structure_count(sig, n, conv)
    if stop is None:
        stop = total
    if not 0 <= start <= stop <= total:
        raise IndexError(f"range [{start}, {stop}) outside [0, {total}]")
    for index in range(start, stop):
        yield decode_structure(sig, n, index, conv)


def _draw_mask(rng, n: int) -> int:
    bits = rng.integers(0, 2, size=n, dtype="int8")
    mask = 0
    for a in range(n):
        if bits[a]:
            mask |= 1 << a
    return mask


def sample_structure(sig: Signature, n: int, rng, conv: str = FREE) -> Structure:
    """Uniform sample from S_n(L); paper-distinct uses rejection with a cap.

    rng is a numpy Generator; see montecarlo.make_rng for the pinned family.
    """
    _check_n(n)
    _check_convention(conv)
    if sig.family == UNARY:
        if conv == FREE:
            masks = tuple(_draw_mask(rng, n) for _ in range(sig.k))
            return Structure(sig, n, masks)
        if n <= 62 and (1 << n) - 2 < sig.k:
            raise InfeasibleConventionError(
                f"no paper-distinct structure exists for k={sig.k}, n={n}"
            )
        for _ in range(SAMPLE_REJECTION_CAP):
            masks = tuple(_draw_mask(rng, n) for _ in range(sig.k))
            if _masks_admissible(masks, n):
                return Structure(sig, n, masks)
        raise RejectionCapError(
            f"rejection sampling exceeded {SAMPLE_REJECTION_CAP} iterations"
        )
    if sig.family == FUNCTION:
        table = tuple(int(v) for v in rng.integers(1, n + 1, size=n))
        return Structure(sig, n, table)
    npairs = math.comb(n, 2)
    bits = rng.integers(0, 2, size=npairs, dtype="int8") if npairs else []
    payload = 0
    for p in range(npairs):
        if bits[p]:
            payload |= 1 << p
    return Structure(sig, n, payload)


def predicate_atoms(m: Structure) -> list:
    """The 2^k atom extensions X_e = intersection of U_i (sign 1) and their
    complements (sign 0), in sign order (1,..,1) down to (0,..,0).

    The returned sets partition {1..n}.
    """
    if m.sig.family != UNARY:
        raise ValueError("predicate atoms require a unary structure")
    n, k = m.n, m.sig.k
    universe = range(1, n + 1)
    atoms = []
    for signs in itertools.product((1, 0), repeat=k):
        members = frozenset(
            a for a in universe
            if all(m.pred_member(i + 1, a) == bool(e) for i, e in enumerate(signs))
        )
        atoms.append((signs, members))
    return atoms


def structure_to_json(m: Structure) -> dict:
    """JSON-ready dict; bit payloads as hex strings, function tables as arrays."""
    fam, n = m.sig.family, m.n
    doc: dict = {"family": fam, "n": n}
    if fam == UNARY:
        doc["k"] = m.sig.k
        packed = sum(w << (n * i) for i, w in enumerate(m.payload))
        doc["payload"] = format(packed, "x")
    elif fam == FUNCTION:
        doc["payload"] = list(m.payload)
    else:
        doc["payload"] = format(m.payload, "x")
    return doc


def structure_from_json(doc: dict) -> Structure:
    fam = doc["family"]
    n = doc["n"]
    if fam == UNARY:
        sig = Signature.unary(doc["k"])
        packed = int(doc["payload"], 16)
        mask_all = (1 << n) - 1
        masks = tuple((packed >> (n * i)) & mask_all for i in range(sig.k))
        return Structure(sig, n, masks)
    if fam == FUNCTION:
        return Structure(Signature.function(), n, tuple(doc["payload"]))
    if fam == GRAPH:
        return Structure(Signature.graph(), n, int(doc["payload"], 16))
    raise ValueError(f"unknown structure family {fam!r}")
