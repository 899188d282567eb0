"""Permutations of {0, ..., n-1} in one-line notation.

Internally a permutation is a tuple of images (0-based).  All text I/O uses
1-based cycle notation with fixed points written out, e.g. ``"(1)(2)(34)"``.

Matrix convention: the permutation matrix P of p has ``P[i][j] = 1`` iff
``j = p(i)``, so that for a row vector c the product cP satisfies
``(cP)[j] = c[p^{-1}(j)]``.
"""

from __future__ import annotations

import itertools
import re
from typing import Sequence

import numpy as np

MAX_ORDER = 6

_CYCLE_RE = re.compile(r"\(([0-9]+)\)")
_TUPLE_ITEM_RE = re.compile(r"(?:\(\d+\))+")


class Permutation(tuple):
    """An element of S_n stored as its tuple of images."""

    __slots__ = ()

    def __new__(cls, images: Sequence[int]):
        images = tuple(int(v) for v in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        return super().__new__(cls, images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, text: str, n: int | None = None) -> "Permutation":
        return parse_cycles(text, n)

    @property
    def n(self) -> int:
        return len(self)

    def __call__(self, i: int) -> int:
        return self[i]

    def inverse(self) -> "Permutation":
        return inverse(self)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles (0-based), each starting at its smallest element."""
        seen = [False] * len(self)
        out = []
        for start in range(len(self)):
            if seen[start]:
                continue
            cyc = []
            k = start
            while not seen[k]:
                seen[k] = True
                cyc.append(k)
                k = self[k]
            out.append(tuple(cyc))
        return out

    def to_cycles(self) -> str:
        return format_cycles(self)

    def __repr__(self) -> str:
        return f"Permutation({format_cycles(self)!r})"


class CycleType(tuple):
    """Partition of n by cycle lengths, sorted in descending order."""

    __slots__ = ()

    def __new__(cls, parts: Sequence[int]):
        parts = sorted((int(p) for p in parts), reverse=True)
        if any(p <= 0 for p in parts):
            raise ValueError("cycle lengths must be positive")
        return super().__new__(cls, parts)

    def __str__(self) -> str:
        return "+".join(f"({p})" for p in self)


def _check_order(n: int) -> None:
    if not 1 <= n <= MAX_ORDER:
        raise ValueError(f"order must be between 1 and {MAX_ORDER}, got {n}")


def all_permutations(n: int) -> list[Permutation]:
    """All n! permutations of S_n in lexicographic order of one-line notation."""
    _check_order(n)
    return [Permutation(p) for p in itertools.permutations(range(n))]


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """Return p∘q, i.e. the map i -> p(q(i))."""
    if len(p) != len(q):
        raise ValueError(f"size mismatch: {len(p)} vs {len(q)}")
    return Permutation(p[q[i]] for i in range(len(q)))


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return Permutation(out)


def cycle_type(p: Permutation) -> CycleType:
    return CycleType(len(c) for c in Permutation(p).cycles())


def act_on_row(c: Sequence, p: Sequence[int]) -> tuple:
    """The row vector cP: entry j of the result is c[p^{-1}(j)]."""
    if len(c) != len(p):
        raise ValueError(f"size mismatch: vector of length {len(c)}, permutation of order {len(p)}")
    out = [None] * len(p)
    for i, v in enumerate(p):
        out[v] = c[i]
    return tuple(out)


def matrix_of(p: Sequence[int]) -> np.ndarray:
    """0/1 permutation matrix with a one at (i, p(i))."""
    n = len(p)
    m = np.zeros((n, n), dtype=int)
    for i, v in enumerate(p):
        m[i, v] = 1
    return m


def conjugate(p: Sequence[int], x: Sequence[int]) -> Permutation:
    """x∘p∘x⁻¹."""
    return compose(compose(x, p), inverse(x))


# ---------------------------------------------------------------------------
# cycle notation


def parse_cycles(text: str, n: int | None = None) -> Permutation:
    """Parse 1-based cycle notation such as ``"(1)(24)(3)"`` or ``"(1432)"``.

    Single-digit labels are assumed (n ≤ 9).  When ``n`` is omitted it is the
    largest label mentioned.  ``"I"`` / ``"I4"`` denote the identity.
    """
    text = text.strip()
    if text.upper().startswith("I") and (n is not None or len(text) > 1):
        size = n if n is not None else int(text[1:].lstrip("_"))
        return Permutation.identity(size)
    stripped = _CYCLE_RE.sub("", text)
    if stripped.strip():
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = [[int(ch) - 1 for ch in grp] for grp in _CYCLE_RE.findall(text)]
    labels = [v for cyc in cycles for v in cyc]
    if not labels:
        raise ValueError(f"empty cycle notation: {text!r}")
    if len(set(labels)) != len(labels) or min(labels) < 0:
        raise ValueError(f"repeated or invalid label in {text!r}")
    size = n if n is not None else max(labels) + 1
    if max(labels) >= size:
        raise ValueError(f"label exceeds order {size} in {text!r}")
    images = list(range(size))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            images[a] = b
    return Permutation(images)


def format_cycles(p: Sequence[int]) -> str:
    """1-based cycle notation with every fixed point listed."""
    return "".join("(" + "".join(str(v + 1) for v in cyc) + ")" for cyc in Permutation(p).cycles())


def parse_tuple(text: str, n: int | None = None) -> tuple[Permutation, ...]:
    """Parse a tuple of permutations such as ``"((12)(34),(1324),(1423))"``.

    Each item's order defaults to the largest label in the whole string, so
    ``"((34),(24),(142))"`` is read in S_4.
    """
    body = text.strip()
    if (body.startswith("((") or body.upper().startswith("(I")) and body.endswith(")"):
        body = body[1:-1]
    items = [s.strip() for s in body.split(",")]
    if n is None:
        labels = [int(ch) for grp in _CYCLE_RE.findall(body) for ch in grp]
        n = max(labels) if labels else None
    out = []
    for item in items:
        if not (_TUPLE_ITEM_RE.fullmatch(item) or item.upper().startswith("I")):
            raise ValueError(f"malformed tuple item {item!r} in {text!r}")
        out.append(parse_cycles(item, n))
    return tuple(out)


def format_tuple(perms: Sequence[Sequence[int]]) -> str:
    return "(" + ",".join(format_cycles(p) for p in perms) + ")"
