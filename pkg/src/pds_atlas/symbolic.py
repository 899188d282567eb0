"""Symbolic permutative patterns and their doubly stochastic solution sets.

A pattern is the n×n grid of symbol indices of the generic matrix whose first
row is c = (c_1, ..., c_n) and whose row j+1 is c·P_j.  Imposing unit row and
column sums gives a small linear system in the c_k; its exact solution is an
affine family of matrices, stored here as an n×n grid of :class:`AffineForm`.

Everything in this module is exact (``fractions.Fraction``).  Symbols are
0-based internally and named ``c1 .. cn`` in output.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .permcore import Permutation, act_on_row, inverse

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# rationals


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions and "p/q" strings exactly; floats via their exact binary value."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Serialize as "p/q", or "p" for integers."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def symbol_name(k: int) -> str:
    return f"c{k + 1}"


def symbol_index(name: str) -> int:
    if not name.startswith("c") or not name[1:].isdigit():
        raise ValueError(f"not a symbol name: {name!r}")
    return int(name[1:]) - 1


# ---------------------------------------------------------------------------
# exact linear algebra


def rref(rows: Sequence[Sequence[Fraction]], ncols: int, col_order: Iterable[int] | None = None):
    """Reduced row echelon form over the rationals.

    ``col_order`` is the order in which columns are tried as pivots (default
    left to right); only the first ``ncols`` columns are eligible, so an
    augmented right-hand side is carried along but never pivoted on.
    Returns ``(nonzero_rows, pivot_columns)``.
    """
    work = [list(r) for r in rows]
    pivots = []
    r = 0
    order = range(ncols) if col_order is None else col_order
    for col in order:
        if r == len(work):
            break
        pr = next((i for i in range(r, len(work)) if work[i][col] != 0), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        pv = work[r][col]
        if pv != 1:
            work[r] = [v / pv for v in work[r]]
        prow = work[r]
        for i in range(len(work)):
            if i != r and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        pivots.append(col)
        r += 1
    return work[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]))[0])


# ---------------------------------------------------------------------------
# affine forms


@dataclass(frozen=True)
class AffineForm:
    """constant + Σ coeff_k · c_k with exact rational data and no zero coefficients."""

    constant: Fraction = ZERO
    coeffs: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def make(cls, constant, coeffs: Mapping[int, Fraction] | Iterable[tuple[int, Fraction]] = ()) -> "AffineForm":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for k, v in items:
            acc[k] = acc.get(k, ZERO) + as_fraction(v)
        return cls(as_fraction(constant), tuple(sorted((k, v) for k, v in acc.items() if v != 0)))

    @classmethod
    def symbol(cls, k: int) -> "AffineForm":
        return cls(ZERO, ((k, ONE),))

    @property
    def is_constant(self) -> bool:
        return not self.coeffs

    def coeff(self, k: int) -> Fraction:
        for idx, v in self.coeffs:
            if idx == k:
                return v
        return ZERO

    def evaluate(self, values: Mapping[int, Fraction]) -> Fraction:
        return self.constant + sum((v * values[k] for k, v in self.coeffs), ZERO)

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm.make(self.constant + other.constant, list(self.coeffs) + list(other.coeffs))

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + other.scale(-1)

    def scale(self, s) -> "AffineForm":
        s = as_fraction(s)
        return AffineForm.make(self.constant * s, [(k, v * s) for k, v in self.coeffs])

    def __str__(self) -> str:
        parts = []
        if self.constant != 0 or not self.coeffs:
            parts.append(format_rational(self.constant))
        for k, v in self.coeffs:
            mag = abs(v)
            term = symbol_name(k) if mag == 1 else f"{format_rational(mag)}*{symbol_name(k)}"
            if not parts:
                parts.append(term if v > 0 else f"-{term}")
            else:
                parts.append(("+ " if v > 0 else "- ") + term)
        return " ".join(parts)


def parse_affine(text: str) -> AffineForm:
    """Parse simple forms such as ``"1/2 - c3"``, ``"3*c1 - 1/2"``, ``"1-3c4"``."""
    s = text.replace(" ", "").replace("−", "-")
    if not s:
        raise ValueError("empty affine form")
    if s[0] not in "+-":
        s = "+" + s
    terms = []
    start = 0
    for i in range(1, len(s) + 1):
        if i == len(s) or s[i] in "+-":
            terms.append(s[start:i])
            start = i
    constant = ZERO
    coeffs: list[tuple[int, Fraction]] = []
    for t in terms:
        sign = -1 if t[0] == "-" else 1
        body = t[1:]
        if "c" in body:
            num, _, sym = body.partition("c")
            num = num.rstrip("*")
            coef = as_fraction(num) if num else ONE
            coeffs.append((symbol_index("c" + sym), sign * coef))
        else:
            constant += sign * as_fraction(body)
    return AffineForm.make(constant, coeffs)


# ---------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class PatternMatrix:
    """n×n grid of 0-based symbol indices; row 0 is the identity row."""

    cells: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.cells)
        if any(len(r) != n for r in self.cells):
            raise ValueError("pattern must be square")
        if self.cells[0] != tuple(range(n)):
            raise ValueError("first pattern row must be (1, ..., n)")
        for r in self.cells:
            if sorted(r) != list(range(n)):
                raise ValueError(f"pattern row {r} is not a rearrangement of the symbols")

    @property
    def n(self) -> int:
        return len(self.cells)

    def column_multiplicities(self, j: int) -> list[int]:
        counts = [0] * self.n
        for row in self.cells:
            counts[row[j]] += 1
        return counts

    def max_column_repetition(self) -> int:
        return max(max(self.column_multiplicities(j)) for j in range(self.n))

    def one_based(self) -> list[list[int]]:
        return [[v + 1 for v in row] for row in self.cells]

    def __str__(self) -> str:
        return " / ".join("".join(str(v + 1) for v in row) for row in self.cells)


def build_pattern(perms: Sequence[Sequence[int]]) -> PatternMatrix:
    """Pattern of the generic matrix with rows c, cP_1, ..., cP_{n-1}."""
    if not perms:
        raise ValueError("need at least one permutation")
    n = len(perms[0])
    if any(len(p) != n for p in perms):
        raise ValueError("all permutations must have the same order")
    if len(perms) != n - 1:
        raise ValueError(f"expected {n - 1} permutations for order {n}, got {len(perms)}")
    base = tuple(range(n))
    return PatternMatrix((base,) + tuple(act_on_row(base, p) for p in perms))


# ---------------------------------------------------------------------------
# affine families


Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class AffineFamily:
    """A matrix whose entries are affine forms in the free symbols ``params``.

    ``symbol_forms`` and ``pattern`` are present for families produced by
    :func:`ds_solve`; conjugated families carry the symbol forms but no pattern.
    """

    n: int
    entries: tuple[tuple[AffineForm, ...], ...]
    params: tuple[int, ...]
    symbol_forms: tuple[AffineForm, ...] | None = None
    pattern: PatternMatrix | None = None

    # -- shape -------------------------------------------------------------
    @property
    def dimension(self) -> int:
        return len(self.params)

    @property
    def free_params(self) -> list[str]:
        return [symbol_name(k) for k in self.params]

    @property
    def is_trivial(self) -> bool:
        """True when the DS constraints pin the family to the single matrix J/n."""
        return self.dimension == 0

    # -- linear data ---------------------------------------------------------
    @cached_property
    def flat_basepoint(self) -> tuple[Fraction, ...]:
        return tuple(e.constant for row in self.entries for e in row)

    @cached_property
    def flat_span(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(e.coeff(k) for row in self.entries for e in row) for k in self.params)

    @property
    def basepoint(self) -> Matrix:
        return _unflatten(self.flat_basepoint, self.n)

    @property
    def span(self) -> list[Matrix]:
        return [_unflatten(d, self.n) for d in self.flat_span]

    # -- evaluation ----------------------------------------------------------
    def _values(self, params) -> dict[int, Fraction]:
        if isinstance(params, Mapping):
            vals = {}
            for key, v in params.items():
                vals[symbol_index(key) if isinstance(key, str) else int(key)] = as_fraction(v)
            missing = set(self.params) - set(vals)
            if missing:
                raise ValueError(f"missing parameters: {sorted(symbol_name(k) for k in missing)}")
            return vals
        params = list(params)
        if len(params) != self.dimension:
            raise ValueError(f"expected {self.dimension} parameters, got {len(params)}")
        return {k: as_fraction(v) for k, v in zip(self.params, params)}

    def evaluate(self, params) -> Matrix:
        vals = self._values(params)
        return tuple(tuple(e.evaluate(vals) for e in row) for row in self.entries)

    def first_row(self, params=None) -> tuple:
        """The generic vector c, as forms (no params) or evaluated."""
        if self.symbol_forms is None:
            raise ValueError("family has no symbol forms")
        if params is None:
            return self.symbol_forms
        vals = self._values(params)
        return tuple(f.evaluate(vals) for f in self.symbol_forms)

    # -- feasibility -----------------------------------------------------------
    @cached_property
    def constraints(self) -> tuple[AffineForm, ...]:
        """Distinct non-constant entries; the family member is nonnegative iff all are ≥ 0."""
        seen = []
        for row in self.entries:
            for e in row:
                if not e.is_constant and e not in seen:
                    seen.append(e)
        return tuple(seen)

    @cached_property
    def has_negative_constant(self) -> bool:
        return any(e.is_constant and e.constant < 0 for row in self.entries for e in row)

    def is_feasible(self, params) -> bool:
        vals = self._values(params)
        return not self.has_negative_constant and all(c.evaluate(vals) >= 0 for c in self.constraints)

    @cached_property
    def param_box(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """Per-parameter bounds implied by nonnegativity (interval propagation)."""
        return _propagate_bounds(self.constraints, self.params)

    @cached_property
    def is_box(self) -> bool:
        """Whether the feasible set equals its bounding box (all box corners feasible)."""
        box = self.param_box
        for corner in itertools.product(*box):
            if not self.is_feasible(corner):
                return False
        return True

    def contains_point(self, params) -> bool:
        return self.is_feasible(params)


def _unflatten(flat: Sequence[Fraction], n: int) -> Matrix:
    return tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))


def _propagate_bounds(constraints: Sequence[AffineForm], params: Sequence[int], rounds: int = 64):
    lo: dict[int, Fraction | None] = {k: None for k in params}
    hi: dict[int, Fraction | None] = {k: None for k in params}
    for _ in range(rounds):
        changed = False
        for con in constraints:
            for j, bj in con.coeffs:
                rest = con.constant
                ok = True
                for k, bk in con.coeffs:
                    if k == j:
                        continue
                    bound = hi[k] if bk > 0 else lo[k]
                    if bound is None:
                        ok = False
                        break
                    rest += bk * bound
                if not ok:
                    continue
                # bj * p_j >= -rest
                limit = -rest / bj
                if bj > 0:
                    if lo[j] is None or limit > lo[j]:
                        lo[j] = limit
                        changed = True
                else:
                    if hi[j] is None or limit < hi[j]:
                        hi[j] = limit
                        changed = True
        if not changed:
            break
    if any(lo[k] is None or hi[k] is None for k in params):
        raise ValueError("feasible set is unbounded")
    return tuple((lo[k], hi[k]) for k in params)


def ds_solve(pattern: PatternMatrix, free: Sequence[str | int] | None = None) -> AffineFamily:
    """Exact solution of Σc = 1 and unit column sums for the given pattern.

    By default the highest-index symbols are eliminated first, so the free
    parameters are the lowest-index symbols the constraints leave unbound
    (e.g. c3 in ``(1/4, 1/4, c3, 1/2 - c3)``).  ``free`` names a different
    choice of free symbols; it must be a valid one for the system.
    """
    n = pattern.n
    eqs = [[ONE] * n + [ONE]]
    for j in range(n):
        counts = pattern.column_multiplicities(j)
        eqs.append([Fraction(v) for v in counts] + [ONE])

    if free is None:
        order = list(reversed(range(n)))
        wanted = None
    else:
        wanted = sorted(symbol_index(f) if isinstance(f, str) else int(f) for f in free)
        order = [k for k in reversed(range(n)) if k not in wanted] + wanted
    rows, pivots = rref(eqs, n, order)
    params = tuple(k for k in range(n) if k not in pivots)
    if wanted is not None and list(params) != wanted:
        raise ValueError(
            f"{[symbol_name(k) for k in wanted]} cannot serve as free parameters "
            f"(solution has {len(params)} free)")

    forms: list[AffineForm | None] = [None] * n
    for row, p in zip(rows, pivots):
        forms[p] = AffineForm.make(row[n], [(f, -row[f]) for f in params])
    for f in params:
        forms[f] = AffineForm.symbol(f)
    sym = tuple(forms)  # type: ignore[arg-type]
    entries = tuple(tuple(sym[s] for s in row) for row in pattern.cells)
    return AffineFamily(n, entries, params, sym, pattern)


def forced_symbol_identifications(family: AffineFamily) -> set[tuple[int, int]]:
    """1-based symbol pairs (i, j), i < j, whose solved forms coincide and are non-constant."""
    if family.is_trivial:
        raise ValueError("family is trivial (the single matrix J/n)")
    if family.symbol_forms is None:
        raise ValueError("family has no symbol forms")
    forms = family.symbol_forms
    return {
        (i + 1, j + 1)
        for i in range(len(forms))
        for j in range(i + 1, len(forms))
        if forms[i] == forms[j] and not forms[i].is_constant
    }


# ---------------------------------------------------------------------------
# normal form, conjugation, containment


@dataclass(frozen=True)
class NormalForm:
    """Canonical description of an affine subset of n×n matrix space.

    ``span`` is the reduced row echelon basis of the direction space (flattened
    row-major matrices) and ``basepoint`` is zero in every pivot coordinate.
    """

    n: int
    basepoint: tuple[Fraction, ...]
    span: tuple[tuple[Fraction, ...], ...]

    def serialize(self) -> str:
        return json.dumps(
            {"basepoint": [format_rational(v) for v in self.basepoint],
             "span": [[format_rational(v) for v in row] for row in self.span]},
            separators=(",", ":"))

    @property
    def dimension(self) -> int:
        return len(self.span)


def normal_form_of(base: Sequence[Fraction], dirs: Sequence[Sequence[Fraction]], n: int) -> NormalForm:
    rows, pivots = rref(dirs, n * n) if dirs else ([], [])
    b = list(base)
    for row, p in zip(rows, pivots):
        if b[p] != 0:
            f = b[p]
            b = [x - f * y for x, y in zip(b, row)]
    return NormalForm(n, tuple(b), tuple(tuple(r) for r in rows))


def subspace_normal_form(family: AffineFamily) -> NormalForm:
    return normal_form_of(family.flat_basepoint, family.flat_span, family.n)


def conjugate_flat(vec: Sequence, x: Sequence[int], n: int) -> tuple:
    """Entries of XᵀMX for flattened M: (XᵀMX)[i][j] = M[x⁻¹(i)][x⁻¹(j)]."""
    xi = inverse(x)
    return tuple(vec[xi[i] * n + xi[j]] for i in range(n) for j in range(n))


def conjugate_family(family: AffineFamily, x: Sequence[int]) -> AffineFamily:
    """The family {XᵀMX : M in family} with X the permutation matrix of x."""
    n = family.n
    if len(x) != n:
        raise ValueError(f"size mismatch: family of order {n}, permutation of order {len(x)}")
    xi = inverse(x)
    entries = tuple(tuple(family.entries[xi[i]][xi[j]] for j in range(n)) for i in range(n))
    return AffineFamily(n, entries, family.params, family.symbol_forms, None)


def _contains_flat(outer_base, outer_span, inner_base, inner_span) -> bool:
    r = rank(outer_span) if outer_span else 0
    diff = [a - b for a, b in zip(inner_base, outer_base)]
    if any(diff):
        if not outer_span or rank(list(outer_span) + [diff]) != r:
            return False
    if inner_span:
        if len(inner_span) > r:
            return False
        if rank(list(outer_span) + list(inner_span)) != r:
            return False
    return True


def family_contains(outer: AffineFamily, inner: AffineFamily) -> bool:
    """Whether inner ⊆ outer as affine subsets of matrix space."""
    if outer.n != inner.n:
        return False
    return _contains_flat(outer.flat_basepoint, outer.flat_span, inner.flat_basepoint, inner.flat_span)


def evaluate(family: AffineFamily, params) -> Matrix:
    return family.evaluate(params)


def matrix_row_col_sums(m: Sequence[Sequence[Fraction]]) -> tuple[list, list]:
    rows = [sum(r, ZERO) for r in m]
    cols = [sum((r[j] for r in m), ZERO) for j in range(len(m))]
    return rows, cols


__all__ = [
    "AffineFamily", "AffineForm", "NormalForm", "PatternMatrix", "as_fraction", "build_pattern",
    "conjugate_family", "ds_solve", "evaluate", "family_contains", "forced_symbol_identifications",
    "format_rational", "parse_affine", "rank", "rref", "subspace_normal_form", "symbol_name",
    "Permutation",
]
