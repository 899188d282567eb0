"""Enumerate permutation tuples, solve them and group the survivors into cogredient classes.

A tuple (P_1, ..., P_{n-1}) is
  * *trivial* when the doubly stochastic constraints force the matrix J/n;
  * *subsumed* when two symbols are forced to be the same non-constant form,
    in which case the family must lie inside (a conjugate of) a kept class;
  * *kept* otherwise, and grouped by canonical key: the lexicographic minimum
    of the serialized normal form over all n! conjugations.

Classes are labelled from the reference tuples (``C1``..``C37`` for n = 4);
classes that match no reference tuple get ``U<k>`` labels.
"""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import reference
from .permcore import Permutation, all_permutations, format_cycles, format_tuple, parse_cycles, parse_tuple
from .symbolic import (AffineFamily, NormalForm, _contains_flat, build_pattern, conjugate_family, conjugate_flat, ds_solve,
                       forced_symbol_identifications, format_rational, normal_form_of, subspace_normal_form)

THREADS_ENV = "PDS_ATLAS_THREADS"


class ClassificationError(RuntimeError):
    """A consistency check of the classification pipeline failed."""


class FixtureError(ClassificationError):
    """A reference tuple or conjugator does not match the computed catalog."""


# ---------------------------------------------------------------------------
# keys


def conjugated_normal_forms(family: AffineFamily) -> list[NormalForm]:
    """Normal forms of XᵀMX over all permutations x, in lexicographic order of x."""
    n = family.n
    base, span = family.flat_basepoint, family.flat_span
    out = []
    for x in all_permutations(n):
        out.append(normal_form_of(conjugate_flat(base, x, n), [conjugate_flat(d, x, n) for d in span], n))
    return out


def canonical_key(family: AffineFamily) -> str:
    return min(nf.serialize() for nf in conjugated_normal_forms(family))


def tuple_family(perms: Sequence[Sequence[int]]) -> AffineFamily:
    return ds_solve(build_pattern(perms))


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class CogredientClass:
    id: str
    representative_tuple: tuple[Permutation, ...]
    family: AffineFamily
    canonical_key: str
    member_tuple_count: int

    @property
    def dimension(self) -> int:
        return self.family.dimension

    @property
    def pattern(self):
        return self.family.pattern

    @property
    def tuple_str(self) -> str:
        return format_tuple(self.representative_tuple)

    def to_json(self) -> dict:
        fam = self.family
        return {
            "id": self.id,
            "tuple": [format_cycles(p) for p in self.representative_tuple],
            "dimension": self.dimension,
            "pattern": fam.pattern.one_based(),
            "first_row": [str(f) for f in fam.symbol_forms],
            "basepoint": [[format_rational(v) for v in row] for row in fam.basepoint],
            "span": [[[format_rational(v) for v in row] for row in d] for d in fam.span],
            "param_names": fam.free_params,
            "param_box": [[format_rational(lo), format_rational(hi)] for lo, hi in fam.param_box],
            "box_is_exact": fam.is_box,
            "constraints": [str(c) + " >= 0" for c in fam.constraints],
            "member_tuple_count": self.member_tuple_count,
        }


@dataclass(frozen=True)
class Catalog:
    n: int
    classes: tuple[CogredientClass, ...]
    discarded: dict
    # serialized normal form of each distinct subsumed family -> id of the first containing class
    subsumed_into: dict = field(repr=False, default_factory=dict)
    subsumed_counts: dict = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def ids(self) -> list[str]:
        return [c.id for c in self.classes]

    def get(self, class_id: str) -> CogredientClass:
        for c in self.classes:
            if c.id == class_id:
                return c
        raise KeyError(f"unknown class {class_id!r} for n={self.n}")

    def by_key(self, key: str) -> CogredientClass | None:
        for c in self.classes:
            if c.canonical_key == key:
                return c
        return None

    @property
    def tuple_total(self) -> int:
        return sum(c.member_tuple_count for c in self.classes) + self.discarded["trivial"] + self.discarded["subsumed"]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "classes": [c.to_json() for c in self.classes],
            "discarded": dict(self.discarded),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# pipeline


def _process_chunk(args) -> tuple[int, dict, dict]:
    """Classify all tuples whose first permutation is ``first``.

    Returns (trivial count, kept: key -> [count, first tuple], subsumed: nf -> [count, first tuple]).
    """
    n, first = args
    perms = all_permutations(n)
    trivial = 0
    kept: dict[str, list] = {}
    subsumed: dict[str, list] = {}
    for rest in itertools.product(perms, repeat=n - 2):
        tup = (perms[first],) + rest
        fam = tuple_family(tup)
        if fam.is_trivial:
            trivial += 1
            continue
        if forced_symbol_identifications(fam):
            nf = subspace_normal_form(fam).serialize()
            slot = subsumed.setdefault(nf, [0, tup])
        else:
            slot = kept.setdefault(canonical_key(fam), [0, tup])
        slot[0] += 1
    return trivial, kept, subsumed


def default_workers() -> int:
    cap = os.environ.get(THREADS_ENV)
    count = os.cpu_count() or 1
    if cap:
        try:
            count = min(count, max(1, int(cap)))
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be a positive integer, got {cap!r}") from None
    return count


def _fixture_tuples(n: int) -> list[tuple[str | None, str]]:
    if n == 2:
        return [(None, t) for t in reference.ORDER2_TUPLES]
    if n == 3:
        return [(None, t) for t in reference.ORDER3_TUPLES]
    if n == 4:
        return list(reference.ORDER4_TUPLES.items())
    return []


_CACHE: dict[int, Catalog] = {}


def classify(n: int, workers: int | None = None, use_cache: bool = True) -> Catalog:
    """Build (and cache) the catalog of cogredient classes of order n ∈ {2, 3, 4}."""
    if n not in (2, 3, 4):
        raise ValueError(f"classification is implemented for n in {{2, 3, 4}}, got {n}")
    if use_cache and n in _CACHE:
        return _CACHE[n]
    workers = default_workers() if workers is None else max(1, int(workers))
    jobs = [(n, i) for i in range(len(all_permutations(n)))]
    if workers > 1 and n == 4:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_process_chunk, jobs))
    else:
        results = [_process_chunk(j) for j in jobs]

    # order-stable merge: chunks are in lexicographic order of the first permutation
    trivial = 0
    kept: dict[str, list] = {}
    subsumed: dict[str, list] = {}
    for t, k, s in results:
        trivial += t
        for dst, src in ((kept, k), (subsumed, s)):
            for key, (count, tup) in src.items():
                slot = dst.setdefault(key, [0, tup])
                slot[0] += count

    classes = _label_classes(n, kept)
    subsumed_into = _verify_subsumed(classes, subsumed)
    catalog = Catalog(
        n=n,
        classes=tuple(classes),
        discarded={"trivial": trivial, "subsumed": sum(v[0] for v in subsumed.values())},
        subsumed_into=subsumed_into,
        subsumed_counts={k: v[0] for k, v in subsumed.items()},
    )
    if catalog.tuple_total != len(all_permutations(n)) ** (n - 1):
        raise ClassificationError("tuple outcomes do not partition the tuple set")
    _CACHE[n] = catalog
    return catalog


def _label_classes(n: int, kept: dict[str, list]) -> list[CogredientClass]:
    labelled: dict[str, tuple[str, tuple]] = {}
    order: list[str] = []
    for label, tstr in _fixture_tuples(n):
        tup = parse_tuple(tstr, n)
        key = canonical_key(tuple_family(tup))
        if key in kept and key not in labelled:
            labelled[key] = (label, tup)
            order.append(key)
    order += [k for k in kept if k not in labelled]
    out = []
    u = 0
    for key in order:
        count, first = kept[key]
        if key in labelled and labelled[key][0] is not None:
            label, tup = labelled[key]
        else:
            u += 1
            label = f"U{u}"
            tup = labelled[key][1] if key in labelled else first
        tup = tuple(Permutation(p) for p in tup)
        out.append(CogredientClass(label, tup, tuple_family(tup), key, count))
    return out


def _conjugate_table(classes: Sequence[CogredientClass]):
    table = []
    for cls in classes:
        fam = cls.family
        n = fam.n
        table.append([(conjugate_flat(fam.flat_basepoint, x, n), [conjugate_flat(d, x, n) for d in fam.flat_span])
                      for x in all_permutations(n)])
    return table


def _first_container(table, classes, fam: AffineFamily) -> str | None:
    for cls, conj in zip(classes, table):
        if cls.dimension < fam.dimension:
            continue
        for base, span in conj:
            if _contains_flat(base, span, fam.flat_basepoint, fam.flat_span):
                return cls.id
    return None


def _verify_subsumed(classes: Sequence[CogredientClass], subsumed: dict[str, list]) -> dict[str, str]:
    table = _conjugate_table(classes)
    out = {}
    for nf, (_, tup) in subsumed.items():
        target = _first_container(table, classes, tuple_family(tup))
        if target is None:
            raise ClassificationError(
                f"discarded family of {format_tuple(tup)} lies in no kept class; the degeneracy rule is wrong here")
        out[nf] = target
    return out


# ---------------------------------------------------------------------------
# queries


def class_of(perms: Sequence[Sequence[int]], catalog: Catalog | None = None) -> str:
    """Class id, ``"trivial"``, or ``"subsumed-into:<id>"`` for a tuple of permutations."""
    if isinstance(perms, str):
        perms = parse_tuple(perms)
    n = len(perms[0])
    catalog = catalog if catalog is not None else classify(n)
    if catalog.n != n:
        raise ValueError(f"catalog is for n={catalog.n}, tuple has order {n}")
    fam = tuple_family(perms)
    if fam.is_trivial:
        return "trivial"
    if forced_symbol_identifications(fam):
        nf = subspace_normal_form(fam).serialize()
        target = catalog.subsumed_into.get(nf)
        if target is None:
            target = _first_container(_conjugate_table(catalog.classes), catalog.classes, fam)
        return f"subsumed-into:{target}"
    cls = catalog.by_key(canonical_key(fam))
    if cls is None:
        raise ClassificationError(f"tuple {format_tuple(perms)} has no class")
    return cls.id


def containment_pairs(catalog: Catalog) -> list[tuple[str, str]]:
    """All (inner, outer) class pairs with inner ⊆ some conjugate of outer."""
    table = _conjugate_table(catalog.classes)
    out = []
    for i, inner in enumerate(catalog.classes):
        fam = inner.family
        for j, outer in enumerate(catalog.classes):
            if i == j or outer.dimension < inner.dimension:
                continue
            if any(_contains_flat(b, s, fam.flat_basepoint, fam.flat_span) for b, s in table[j]):
                out.append((inner.id, outer.id))
    return out


def orbit_closure_holds(cls: CogredientClass) -> bool:
    """Every conjugate of the class family has the class key."""
    for x in all_permutations(cls.family.n):
        if canonical_key(conjugate_family(cls.family, x)) != cls.canonical_key:
            return False
    return True


# ---------------------------------------------------------------------------
# fixture matching


@dataclass
class FixtureReport:
    matches: dict[str, str]
    conjugator_checks: list[tuple[str, str, str, str, bool]]
    orbit_sizes: dict[str, int]
    errors: list[str]

    @property
    def ok(self) -> bool:
        return not self.errors


def match_reference_fixtures(catalog: Catalog) -> FixtureReport:
    """Map every reference tuple to a class and verify the listed conjugators exactly."""
    if catalog.n != 4:
        raise ValueError("reference fixtures exist for n = 4 only")
    errors = []
    matches: dict[str, str] = {}
    for label, tstr in reference.ORDER4_TUPLES.items():
        cls = catalog.by_key(canonical_key(tuple_family(parse_tuple(tstr, 4))))
        if cls is None:
            errors.append(f"{label}: tuple {tstr} is not a kept class")
            continue
        matches[label] = cls.id
    hit = list(matches.values())
    dupes = sorted({c for c in hit if hit.count(c) > 1})
    if dupes:
        errors.append(f"duplicate matches onto {dupes}")

    checks = []
    for label, rows in reference.LATIN_ROWS.items():
        for a, b, x in rows:
            fa = tuple_family(parse_tuple(a, 4))
            fb = tuple_family(parse_tuple(b, 4))
            ok = subspace_normal_form(conjugate_family(fa, parse_cycles(x, 4))) == subspace_normal_form(fb)
            checks.append((label, a, b, x, ok))
            if not ok:
                errors.append(f"{label}: Xᵀ A X != B for A={a}, B={b}, X={x}")

    orbit_sizes: dict[str, int] = {}
    for t in latin_tuples(4):
        cid = class_of(t, catalog)
        orbit_sizes[cid] = orbit_sizes.get(cid, 0) + 1
    return FixtureReport(matches, checks, orbit_sizes, errors)


def latin_tuples(n: int) -> Iterable[tuple[Permutation, ...]]:
    for t in itertools.product(all_permutations(n), repeat=n - 1):
        if build_pattern(t).max_column_repetition() == 1:
            yield t
