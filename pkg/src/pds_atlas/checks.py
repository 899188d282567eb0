"""The numbered verification criteria plus supporting invariants.

Each ``criterion_*`` function returns a :class:`CheckResult`.  The CLI
``verify-all`` command and the acceptance tests both run these functions, so
the two can never drift apart.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import reference, region, spectra
from .classify import class_of, classify, match_reference_fixtures
from .permcore import parse_tuple
from .spectra import make_rng
from .symbolic import build_pattern, ds_solve, parse_affine

# Margins for the excluded-segment probes.  Measured once by
# measure_segment_margins() with the grid densities in ORACLE_DENSITY (grid
# minima 0.0076375 and 0.0071832, both attained by C3), then polished by a local
# continuous minimisation started from the best grid points; the polished
# minima are frozen here and the margins are half of them.
ORACLE_DENSITY = {3: 200, 2: 2000, 1: 2000}
MEASURED_GAP_VERTICAL = 0.007633035157257884
MEASURED_GAP_L = 0.007101310345466965
DELTA_VERTICAL = MEASURED_GAP_VERTICAL / 2
DELTA_L = MEASURED_GAP_L / 2

# Grid used for the ≥ 10⁶-eigenvalue cloud (points per parameter axis by family dimension).
SEGMENT_CLOUD_DENSITY = {3: 60, 2: 250, 1: 4000}


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{self.key:>12}  {'PASS' if self.passed else 'FAIL'}  {self.title}: {self.summary}"

    def to_json(self) -> dict:
        return {"check": self.key, "title": self.title, "passed": self.passed,
                "summary": self.summary, "details": self.details, "seconds": round(self.seconds, 3)}


def _timed(fn: Callable[..., CheckResult]) -> Callable[..., CheckResult]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# ---------------------------------------------------------------------------
# criteria


@_timed
def criterion_1(time_limit: float = 120.0) -> CheckResult:
    """Class counts for n = 2, 3, 4 and the Latin orbit sizes."""
    counts = {n: len(classify(n)) for n in (2, 3)}
    t0 = time.perf_counter()
    cat4 = classify(4, use_cache=False)
    elapsed = time.perf_counter() - t0
    counts[4] = len(cat4)
    orbit = match_reference_fixtures(cat4).orbit_sizes
    latin = {k: orbit.get(k, 0) for k in reference.LATIN_ORBIT_SIZES}
    ok = (counts == {2: 1, 3: 2, 4: 37} and latin == reference.LATIN_ORBIT_SIZES
          and sum(latin.values()) == 24 and elapsed < time_limit)
    return CheckResult("criterion-1", "class counts", ok,
                       f"counts {counts}, Latin orbits {latin}, n=4 run {elapsed:.1f}s",
                       {"counts": counts, "latin_orbits": latin, "seconds_n4": elapsed,
                        "discarded": cat4.discarded})


@_timed
def criterion_2() -> CheckResult:
    """Representative tuples hit distinct classes; conjugators verify exactly."""
    rep = match_reference_fixtures(classify(4))
    distinct = len(set(rep.matches.values()))
    conj_ok = sum(1 for c in rep.conjugator_checks if c[-1])
    ok = rep.ok and distinct == 37 and conj_ok == len(rep.conjugator_checks)
    return CheckResult("criterion-2", "fixture matching", ok,
                       f"{distinct} distinct classes, {conj_ok}/{len(rep.conjugator_checks)} conjugators verified",
                       {"errors": rep.errors, "conjugators": len(rep.conjugator_checks)})


@_timed
def criterion_3() -> CheckResult:
    """ds_solve reproduces the tabulated first rows exactly."""
    failures = []
    rows = list(reference.CONSTRAINT_COLUMNS.items()) + list(reference.SPECTRUM_FIRST_ROWS.items())
    for cid, (tup, free, expected) in rows:
        fam = ds_solve(build_pattern(parse_tuple(tup, 4)), free=free)
        got = fam.first_row()
        want = [parse_affine(e) for e in expected]
        if list(got) != want:
            failures.append({"class": cid, "got": [str(g) for g in got], "expected": expected})
    return CheckResult("criterion-3", "constraint fixtures", not failures,
                       f"{len(rows) - len(failures)}/{len(rows)} rows exact", {"failures": failures})


@_timed
def criterion_4(samples: int = 1000, tol: float = 1e-9, seed: int = 0) -> CheckResult:
    """Closed forms agree with the eigensolver at every sample of every class that has one."""
    reports = []
    for cid, form in spectra.CLOSED_FORMS.items():
        if form.formula is spectra.NOT_AVAILABLE:
            continue
        reports.append(spectra.verify_class(cid, samples, tol, seed=seed))
    bad = [r.to_json() for r in reports if not r.passed]
    worst = max(r.max_deviation for r in reports)
    return CheckResult("criterion-4", "spectrum formulas", not bad,
                       f"{len(reports)} classes × {samples} samples, worst deviation {worst:.2e} (tol {tol:g})",
                       {"failures": bad, "worst": worst})


@_timed
def criterion_5(points: int = 20, seed: int = 0) -> CheckResult:
    """Printed characteristic polynomials equal the exact char_poly."""
    failures = []
    for cid, (tup, free, row, fn) in reference.PRINTED_CHAR_POLYS.items():
        fam = ds_solve(build_pattern(parse_tuple(tup, 4)), free=free)
        if row is not None and list(fam.first_row()) != [parse_affine(e) for e in row]:
            failures.append({"class": cid, "reason": "first row differs"})
            continue
        for pt in spectra.random_feasible_points(fam, points, seed=seed):
            c = fam.first_row(pt)
            printed = fn(*c) if len(pt) == 3 else fn(pt[0])
            if list(spectra.char_poly(fam.evaluate(pt)).coeffs) != list(printed):
                failures.append({"class": cid, "params": [str(v) for v in pt]})
                break
    n = len(reference.PRINTED_CHAR_POLYS)
    return CheckResult("criterion-5", "printed characteristic polynomials", not failures,
                       f"{n - len(failures)}/{n} polynomials exact at {points} points each", {"failures": failures})


@_timed
def criterion_6(density: int = 100, tol: float = 1e-12) -> CheckResult:
    rep = region.aux_extrema_report(density)
    bad = {}
    for name, (mx, mn) in reference.AUX_EXTREMA.items():
        e = rep[name]
        if abs(e.maximum - mx) > tol or abs(e.minimum - mn) > tol:
            bad[name] = {"max": str(e.maximum), "min": str(e.minimum), "expected": [str(mx), str(mn)]}
    text = ", ".join(f"{k}: [{rep[k].minimum}, {rep[k].maximum}]" for k in rep)
    return CheckResult("criterion-6", "auxiliary extrema", not bad, text, {"mismatches": bad})


@_timed
def criterion_7(density: int = 1000, tol: float = 1e-3) -> CheckResult:
    """Sampled max |Re|, max |Im| of non-real eigenvalues versus the tabulated values."""
    cat = classify(4)
    rows, bad = {}, []
    for cid, (re_ref, im_ref) in reference.COMPLEX_EXTENTS.items():
        cloud = region.region_clouds(cid, "grid", density, catalog=cat)[0]
        ext = region.complex_extent(cloud)
        re_got, im_got = ext if ext else (float("nan"), float("nan"))
        ok = ext is not None and abs(re_got - re_ref) <= tol and abs(im_got - im_ref) <= tol
        rows[cid] = {"re": re_got, "im": im_got, "re_ref": re_ref, "im_ref": im_ref, "ok": ok}
        if not ok:
            bad.append(f"{cid} (|Re| {re_got:.4f} vs {re_ref:.4f}, |Im| {im_got:.4f} vs {im_ref:.4f})")
    n = len(rows)
    summary = f"{n - len(bad)}/{n} classes within {tol:g}" + (f"; mismatches: {'; '.join(bad)}" if bad else "")
    return CheckResult("criterion-7", "complex extents", not bad, summary, {"classes": rows})


@_timed
def criterion_8(density=None, seed: int = 0) -> CheckResult:
    """Segment probes stay a frozen margin away from the cloud; DS witnesses hit the segments."""
    density = SEGMENT_CLOUD_DENSITY if density is None else density
    clouds = region.region_clouds("all", "grid", density, seed=seed, catalog=classify(4))
    size = sum(len(c) for c in clouds)
    g1 = region.segment_gap(clouds, region.SEGMENT_VERTICAL, region.VERTICAL_PROBES)
    g2 = region.segment_gap(clouds, region.SEGMENT_L, region.L_PROBES)
    endpoint = region.point_gap(clouds, region.OMEGA)
    w1 = region.ds_witness(-0.5, 0.6)
    r = -0.4
    w2 = region.ds_witness(r, (1 - r) / math.sqrt(3))
    hit1 = spectra.eigenvalues(w1).distance([1, 1, complex(-0.5, 0.6), complex(-0.5, -0.6)])
    target = complex(r, (1 - r) / math.sqrt(3))
    hit2 = spectra.eigenvalues(w2).distance([1, 1, target, target.conjugate()])
    ds_ok = spectra.is_doubly_stochastic(w1) and spectra.is_doubly_stochastic(w2)
    ok = (size >= 10**6 and DELTA_VERTICAL > 0 and DELTA_L > 0
          and all(g.gap >= DELTA_VERTICAL for g in g1) and all(g.gap >= DELTA_L for g in g2)
          and endpoint < 1e-8 and hit1 <= 1e-10 and hit2 <= 1e-10 and ds_ok)
    summary = (f"cloud {size} eigenvalues; vertical gaps {min(g.gap for g in g1):.4f} ≥ δ₁={DELTA_VERTICAL:.4f}, "
               f"L gaps {min(g.gap for g in g2):.4f} ≥ δ₂={DELTA_L:.4f}; endpoint gap {endpoint:.1e}; "
               f"witness errors {hit1:.1e}, {hit2:.1e}")
    return CheckResult("criterion-8", "excluded segments", ok, summary,
                       {"cloud": size, "vertical": [g.gap for g in g1], "L": [g.gap for g in g2],
                        "endpoint": endpoint, "witness": [hit1, hit2]})


@_timed
def criterion_9(trials: int = 1000, seed: int = 0) -> CheckResult:
    """Real-line, circulant-mesh and star-shapedness constructions."""
    missing = []
    grid = [-1 + k / 100 for k in range(201)]
    for n in (2, 3, 4, 5, 6):
        for lam in grid:
            m = region.realize_real(n, lam)
            if not (region.is_permutative(m) and spectra.is_doubly_stochastic(m)
                    and spectra.eigenvalues(m).contains(lam, 1e-9)):
                missing.append((n, lam))
    mesh_fail = []
    for w, z in region.pi3_mesh(13):
        m = region.circulant_embed_witness(3, 3, list(w))
        if not spectra.eigenvalues(m).contains(z, 1e-9):
            mesh_fail.append((3, z))
    for w, z in region.pi4_mesh(7):
        m = region.circulant_embed_witness(4, 4, list(w))
        if not spectra.eigenvalues(m).contains(z, 1e-9):
            mesh_fail.append((4, z))
    n3, n4 = len(region.pi3_mesh(13)), len(region.pi4_mesh(7))
    star_fail = star_trials(trials, seed)
    ok = not missing and not mesh_fail and not star_fail and n3 >= 100 and n4 >= 100
    summary = (f"real line {5 * 201 - len(missing)}/{5 * 201}, Π₃ mesh {n3}, Π₄ mesh {n4} "
               f"({len(mesh_fail)} misses), star {trials - len(star_fail)}/{trials}")
    return CheckResult("criterion-9", "inclusion constructions", ok, summary,
                       {"real_missing": missing, "mesh_fail": [str(m) for m in mesh_fail],
                        "star_fail": star_fail})


def star_trials(trials: int, seed: int, tol: float = 1e-8) -> list:
    """Random (D, t): D a rational PDS member of a random class, t = k/64."""
    cat = classify(4)
    rng = make_rng(seed)
    fails = []
    for k in range(trials):
        cls = cat.classes[int(rng.integers(len(cat.classes)))]
        pt = spectra.random_feasible_points(cls.family, 1, seed=seed * 100_003 + k, denominator=64)[0]
        t = Fraction(int(rng.integers(0, 65)), 64)
        d = cls.family.evaluate(pt)
        if not region.star_check(d, t, tol):
            fails.append({"class": cls.id, "params": [str(v) for v in pt], "t": str(t)})
    return fails


@_timed
def criterion_10(density: int = 200, random_count: int = 20000, seed: int = 0) -> CheckResult:
    """Every sampled order-3 eigenvalue lies in Π₂ ∪ Π₃."""
    cat3 = classify(3)
    clouds = (region.region_clouds("all", "grid", density, catalog=cat3)
              + region.region_clouds("all", "random", random_count, seed=seed, catalog=cat3))
    z = np.concatenate([c.eigenvalues.ravel() for c in clouds])
    outside = [complex(v) for v in z if not region.in_hull_union(v, 3, tol=1e-9)]
    ok = not outside and z.size > 0
    return CheckResult("criterion-10", "order-3 region", ok,
                       f"{z.size} eigenvalues from {len(cat3)} classes, {len(outside)} outside Π₂ ∪ Π₃",
                       {"outside": [str(v) for v in outside[:20]]})


@_timed
def criterion_11(steps: int = 200) -> CheckResult:
    curves = region.boundary_curves(steps, steps)
    lam1 = curves["A"][-1].eigenvalue
    mu1 = curves["B"][-1].eigenvalue
    err = abs(lam1 - region.OMEGA) if lam1 is not None else math.inf
    csv1 = region.boundary_csv(curves)
    csv2 = region.boundary_csv(region.boundary_curves(steps, steps))
    gaps = {k: sum(p.eigenvalue is None for p in v) for k, v in curves.items()}
    ok = (err <= 1e-9 and csv1 == csv2 and len(curves["A"]) == steps and len(curves["B"]) == steps
          and mu1 is not None and abs(abs(mu1) - 1) <= 1e-9)
    return CheckResult("criterion-11", "boundary curves", ok,
                       f"λ(1) error {err:.1e}, |μ(1)| = {abs(mu1) if mu1 else float('nan'):.12f}, "
                       f"gaps {gaps}, CSV stable {csv1 == csv2}",
                       {"lambda1": str(lam1), "mu1": str(mu1), "gaps": gaps})


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11]


# ---------------------------------------------------------------------------
# additional invariants checked by verify-all


@_timed
def invariant_region(density=None) -> CheckResult:
    """Unit disk, square bound (C5..C37), no-double-one, and C5 ∪ C6 real coverage."""
    density = {3: 40, 2: 101, 1: 1001} if density is None else density
    clouds = region.region_clouds("all", "grid", density, catalog=classify(4))
    radius = max(float(np.abs(c.eigenvalues).max()) for c in clouds)
    square_bad = []
    double_one = 0
    for c in clouds:
        ev = c.eigenvalues
        if c.class_id not in ("C1", "C2", "C3", "C4"):
            nr = ev[np.abs(ev.imag) > 1e-7]
            if nr.size and (np.abs(nr.real).max() > 0.5 + 1e-6 or np.abs(nr.imag).max() > 0.5 + 1e-6):
                square_bad.append(c.class_id)
        near_one = (np.abs(ev - 1) < 1e-6).sum(axis=1) >= 2
        small_pair = ((np.abs(ev.imag) > 1e-6) & (np.abs(ev) < 1 - 1e-6)).any(axis=1)
        double_one += int((near_one & small_pair).sum())
    # c1 - c2 attains each grid point of [-1, 1] in the Klein family (C5)
    fam = classify(4).get("C5").family
    hits = 0
    for k in range(21):
        lam = Fraction(k - 10, 10)
        pt = _klein_params(fam, ((1 + lam) / 2, (1 - lam) / 2, Fraction(0), Fraction(0)))
        if pt is not None and spectra.eigenvalues(fam.evaluate(pt)).contains(float(lam), 1e-10):
            hits += 1
    ok = radius <= 1 + 1e-9 and not square_bad and double_one == 0 and hits == 21
    return CheckResult("invariants", "region invariants", ok,
                       f"max |λ| = {radius:.12f}, square violations {square_bad}, "
                       f"double-one spectra {double_one}, C5 real coverage {hits}/21",
                       {"radius": radius, "square": square_bad, "double_one": double_one, "c5_hits": hits})


def _klein_params(fam, row):
    """Parameters of ``fam`` whose first row equals ``row`` (None if no match)."""
    names = fam.free_params
    idx = [int(nm[1:]) - 1 for nm in names]
    pt = [row[i] for i in idx]
    if fam.is_feasible(pt) and list(fam.first_row(pt)) == list(row):
        return pt
    return None


@_timed
def invariant_order3_sweeps(steps: int = 101) -> CheckResult:
    """The A_x sweep covers [1/2, 1] and circulants cover the Π₃ mesh."""
    xs = [Fraction(k, steps - 1) for k in range(steps)]
    reals = sorted(abs(z.real) for x in xs for z in spectra.eigenvalues(region.real_line_witness(3, x))
                   if abs(z.imag) < 1e-12 and abs(z - 1) > 1e-12)
    reals = [r for r in reals if r >= 0.5 - 1e-12]
    spacing = max(b - a for a, b in zip(reals, reals[1:])) if len(reals) > 1 else 1.0
    cover = reals and reals[0] <= 0.5 + 1e-12 and reals[-1] >= 1 - 1e-12
    ok = bool(cover) and spacing <= 2 / (steps - 1) * 1.5
    return CheckResult("invariants-3", "order-3 sweeps", ok,
                       f"A_x moduli cover [{reals[0]:.3f}, {reals[-1]:.3f}] with max gap {spacing:.4f}",
                       {"max_gap": spacing})


INVARIANTS = [invariant_region, invariant_order3_sweeps]


def run_all(tol: float = 1e-9, seed: int = 0, progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    results = []
    for fn in CRITERIA + INVARIANTS:
        if fn is criterion_4:
            res = fn(tol=tol, seed=seed)
        elif fn in (criterion_8, criterion_9, criterion_10):
            res = fn(seed=seed)
        else:
            res = fn()
        results.append(res)
        if progress:
            progress(res)
    return results


# ---------------------------------------------------------------------------
# oracle for the segment margins


def measure_segment_margins(density=None) -> dict:
    """Dense grid sweep of every class; returns the minimum probe gaps per segment."""
    density = ORACLE_DENSITY if density is None else density
    cat = classify(4)
    out = {"vertical": math.inf, "L": math.inf, "per_class": {}}
    for cid in cat.ids:
        cloud = region.region_clouds(cid, "grid", density, catalog=cat, workers=1)[0]
        v = min(g.gap for g in region.segment_gap(cloud, region.SEGMENT_VERTICAL, region.VERTICAL_PROBES))
        l_ = min(g.gap for g in region.segment_gap(cloud, region.SEGMENT_L, region.L_PROBES))
        out["per_class"][cid] = (v, l_)
        out["vertical"] = min(out["vertical"], v)
        out["L"] = min(out["L"], l_)
    return out
