"""Eigenvalue regions: sampling, hull tests, segment gaps, witnesses and boundary curves."""

from __future__ import annotations

import cmath
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import reference
from .classify import Catalog, classify, default_workers
from .spectra import AUX_FUNCTIONS, FamilyCharPoly, Spectrum, eigenvalues, is_doubly_stochastic, make_rng
from .symbolic import AffineFamily, as_fraction

SQRT3 = math.sqrt(3.0)
OMEGA = complex(-0.5, SQRT3 / 2)


# ---------------------------------------------------------------------------
# hulls of roots of unity


def roots_of_unity(j: int) -> list[complex]:
    return [cmath.exp(2j * math.pi * k / j) for k in range(j)]


@dataclass(frozen=True)
class HullSpec:
    """Π_j (``full``) or Π_j^0 (``punctured``: {1} plus the hull of the other roots)."""

    j: int
    variant: str = "full"

    def __post_init__(self):
        if self.j < 2:
            raise ValueError("hull index must be at least 2")
        if self.variant not in ("full", "punctured"):
            raise ValueError(f"unknown hull variant {self.variant!r}")

    @property
    def vertices(self) -> list[complex]:
        return roots_of_unity(self.j)

    def contains(self, z: complex, tol: float = 1e-12) -> bool:
        z = complex(z)
        if self.variant == "full":
            return _in_polygon(z, self.vertices, tol)
        if abs(z - 1) <= tol:
            return True
        return _in_polygon(z, self.vertices[1:], tol)


def _in_polygon(z: complex, verts: Sequence[complex], tol: float) -> bool:
    """Closed convex hull of counter-clockwise vertices (also points and segments)."""
    if len(verts) == 1:
        return abs(z - verts[0]) <= tol
    if len(verts) == 2:
        a, b = verts
        d = b - a
        t = ((z - a) * d.conjugate()).real / abs(d) ** 2
        if t < -tol or t > 1 + tol:
            return False
        return abs(((z - a) * d.conjugate()).imag) / abs(d) <= tol
    for a, b in zip(verts, list(verts[1:]) + [verts[0]]):
        d = b - a
        # left-of-edge test, normalized
        if ((z - a) * d.conjugate()).imag / abs(d) < -tol:
            return False
    return True


def in_hull_union(z: complex, n: int, tol: float = 1e-12) -> bool:
    """Membership in Π_2 ∪ ... ∪ Π_n, boundary inclusive."""
    if n < 2:
        raise ValueError("order must be at least 2")
    return any(HullSpec(j).contains(z, tol) for j in range(2, n + 1))


# ---------------------------------------------------------------------------
# segments


@dataclass(frozen=True)
class SegmentSpec:
    start: complex
    end: complex
    open_start: bool = True
    open_end: bool = True

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("segment endpoints must be distinct")

    def point(self, t: float) -> complex:
        return self.start + (self.end - self.start) * t

    def contains_interior(self, z: complex, tol: float = 1e-12) -> bool:
        d = self.end - self.start
        t = ((z - self.start) * d.conjugate()).real / abs(d) ** 2
        off = abs(((z - self.start) * d.conjugate()).imag) / abs(d)
        return off <= tol and tol < t < 1 - tol

    def probes(self, count: int) -> list[complex]:
        if count < 3:
            raise ValueError("at least 3 probes are required")
        return [self.point(k / (count + 1)) for k in range(1, count + 1)]


# the vertical segment -1/2 + yi, 1/2 < y < sqrt(3)/2, excluded for order 4
SEGMENT_VERTICAL = SegmentSpec(complex(-0.5, 0.5), complex(-0.5, SQRT3 / 2))
# the part of the line x + sqrt(3) y = 1 with -1/2 < x < (1 - sqrt3)/(1 + sqrt3)
_L_END = (1 - SQRT3) / (1 + SQRT3)
SEGMENT_L = SegmentSpec(complex(-0.5, 1.5 / SQRT3), complex(_L_END, (1 - _L_END) / SQRT3))

VERTICAL_PROBES = [complex(-0.5, y) for y in (0.6, 0.7, 0.8)]
L_PROBES = [complex(r, (1 - r) / SQRT3) for r in (-0.45, -0.35, -0.30)]


@dataclass(frozen=True)
class GapResult:
    probe: complex
    gap: float
    nearest: complex


def segment_gap(cloud, seg: SegmentSpec, probes: int | Sequence[complex] = 3) -> list[GapResult]:
    """Minimum distance from each probe point to the eigenvalue cloud.

    ``cloud`` is an array of eigenvalues, a :class:`RegionCloud`, or an
    iterable of :class:`RegionPoint`.  Probes must be interior to the segment.
    """
    z = _cloud_values(cloud)
    if z.size == 0:
        raise ValueError("empty eigenvalue cloud")
    pts = seg.probes(probes) if isinstance(probes, int) else [complex(p) for p in probes]
    if len(pts) < 3:
        raise ValueError("at least 3 probes are required")
    out = []
    for p in pts:
        if not seg.contains_interior(p, tol=1e-9):
            raise ValueError(f"probe {p} is not interior to the segment")
        d = np.abs(z - p)
        k = int(np.argmin(d))
        out.append(GapResult(p, float(d[k]), complex(z[k])))
    return out


def point_gap(cloud, z: complex) -> float:
    vals = _cloud_values(cloud)
    return float(np.min(np.abs(vals - complex(z))))


def _cloud_values(cloud) -> np.ndarray:
    if isinstance(cloud, RegionCloud):
        return cloud.eigenvalues.ravel()
    if isinstance(cloud, np.ndarray):
        return cloud.ravel().astype(complex)
    if isinstance(cloud, (list, tuple)) and cloud and isinstance(cloud[0], RegionCloud):
        return np.concatenate([c.eigenvalues.ravel() for c in cloud])
    vals = [p.eigenvalue if isinstance(p, RegionPoint) else complex(p) for p in cloud]
    return np.asarray(vals, dtype=complex)


# ---------------------------------------------------------------------------
# sampling


@dataclass(frozen=True)
class RegionPoint:
    class_id: str
    params: tuple[Fraction, ...]
    eigenvalue: complex


@dataclass
class RegionCloud:
    """Samples of one class: integer ticks define the exact rational parameters.

    params[k, i] = box[i].lo + (box[i].hi - box[i].lo) * ticks[k, i] / denominator
    """

    class_id: str
    box: tuple[tuple[Fraction, Fraction], ...]
    denominator: int
    ticks: np.ndarray
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def params(self) -> np.ndarray:
        lo = np.array([float(b[0]) for b in self.box])
        hi = np.array([float(b[1]) for b in self.box])
        return lo + (hi - lo) * self.ticks / self.denominator

    def exact_params(self, k: int) -> tuple[Fraction, ...]:
        return tuple(lo + (hi - lo) * Fraction(int(t), self.denominator)
                     for (lo, hi), t in zip(self.box, self.ticks[k]))

    def points(self) -> Iterator[RegionPoint]:
        for k in range(self.ticks.shape[0]):
            p = self.exact_params(k)
            for z in self.eigenvalues[k]:
                yield RegionPoint(self.class_id, p, complex(z))

    def __len__(self) -> int:
        return self.eigenvalues.size


RANDOM_DENOMINATOR = 1 << 20


def _grid_ticks(family: AffineFamily, density: int) -> np.ndarray:
    d = family.dimension
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    axes = [np.arange(density, dtype=np.int64)] * d
    ticks = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    return _feasible_filter(family, ticks, density - 1)


def _feasible_filter(family: AffineFamily, ticks: np.ndarray, den: int) -> np.ndarray:
    """Keep tick rows whose exact rational point satisfies every constraint.

    Constraints are affine with rational coefficients, so scaling by a common
    integer gives an exact integer test.
    """
    if family.is_box:
        return ticks
    box = family.param_box
    keep = np.ones(ticks.shape[0], dtype=bool)
    for form in family.constraints:
        # form(p) with p_i = lo_i + w_i t_i / den, w_i = hi_i - lo_i
        const = form.constant
        lin = [Fraction(0)] * family.dimension
        for k, v in form.coeffs:
            i = family.params.index(k)
            const += v * box[i][0]
            lin[i] = v * (box[i][1] - box[i][0]) / den
        scale = math.lcm(const.denominator, *(c.denominator for c in lin))
        acc = np.full(ticks.shape[0], int(const * scale), dtype=object)
        for i, c in enumerate(lin):
            if c:
                acc = acc + ticks[:, i].astype(object) * int(c * scale)
        keep &= np.array([v >= 0 for v in acc], dtype=bool)
    return ticks[keep]


def _random_ticks(family: AffineFamily, count: int, seed: int) -> np.ndarray:
    d = family.dimension
    rng = make_rng(seed)
    if d == 0:
        return np.zeros((count, 0), dtype=np.int64)
    out = []
    have = 0
    while have < count:
        cand = rng.integers(0, RANDOM_DENOMINATOR + 1, size=(max(2 * (count - have), 64), d), dtype=np.int64)
        cand = _feasible_filter(family, cand, RANDOM_DENOMINATOR)
        out.append(cand)
        have += cand.shape[0]
    return np.concatenate(out)[:count]


def _family_for(class_id: str, catalog: Catalog) -> AffineFamily:
    try:
        return catalog.get(class_id).family
    except KeyError:
        raise KeyError(f"unknown class {class_id!r}") from None


def _density_for(density: int | Mapping[int, int], dim: int) -> int:
    if isinstance(density, Mapping):
        return int(density.get(dim, max(density.values())))
    return int(density)


def _cloud_job(args) -> RegionCloud:
    class_id, family, strategy, density, seed = args
    if strategy == "grid":
        if density < 2:
            raise ValueError("grid density must be at least 2 per axis")
        ticks = _grid_ticks(family, density)
        den = density - 1
    elif strategy == "random":
        if density < 1:
            raise ValueError("random sample count must be positive")
        ticks = _random_ticks(family, density, seed)
        den = RANDOM_DENOMINATOR
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    box = family.param_box
    cloud = RegionCloud(class_id, box, den, ticks, np.empty((0, family.n), dtype=complex))
    fcp = FamilyCharPoly(family)
    chunks = [fcp.spectra(cloud.params[s:s + 200_000]) for s in range(0, max(ticks.shape[0], 1), 200_000)]
    cloud.eigenvalues = np.concatenate(chunks)[:ticks.shape[0]] if ticks.shape[0] else np.empty((0, family.n), dtype=complex)
    if family.dimension == 0:
        cloud.eigenvalues = fcp.spectra(np.zeros((1, 0)))
    return cloud


def region_clouds(class_id: str | Sequence[str] = "all", strategy: str = "grid",
                  density: int | Mapping[int, int] = 11, seed: int = 0,
                  catalog: Catalog | None = None, workers: int | None = None) -> list[RegionCloud]:
    """Sample one, several or all classes; results are in catalog order.

    ``density`` is grid points per parameter axis (grid) or the sample count
    (random); a mapping from family dimension to density is also accepted.
    Each class uses the seed ``seed + index`` so streams are independent.
    """
    if catalog is None:
        catalog = classify(4)
    if class_id == "all":
        ids = catalog.ids
    elif isinstance(class_id, str):
        ids = [class_id]
    else:
        ids = list(class_id)
    jobs = []
    for cid in ids:
        fam = _family_for(cid, catalog)
        jobs.append((cid, fam, strategy, _density_for(density, fam.dimension), seed + catalog.ids.index(cid)))
    workers = default_workers() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_cloud_job, jobs))
    return [_cloud_job(j) for j in jobs]


def sample_region(class_id: str = "all", strategy: str = "grid", density: int | Mapping[int, int] = 11,
                  seed: int = 0, catalog: Catalog | None = None) -> Iterator[RegionPoint]:
    """Stream of RegionPoint records (all n eigenvalues per parameter sample)."""
    for cloud in region_clouds(class_id, strategy, density, seed, catalog):
        yield from cloud.points()


# ---------------------------------------------------------------------------
# witnesses


def _matrix(rows, exact: bool):
    if exact:
        return [[Fraction(v) for v in r] for r in rows]
    return np.array(rows, dtype=float)


def is_permutative(m, tol: float = 1e-12) -> bool:
    rows = m.tolist() if isinstance(m, np.ndarray) else [list(r) for r in m]
    ref = sorted(rows[0])
    for r in rows[1:]:
        s = sorted(r)
        if any(abs(a - b) > tol for a, b in zip(s, ref)):
            return False
    return True


def ds_witness(sigma, tau):
    """4×4 doubly stochastic matrix with spectrum {1, 1, σ ± τi}.

    A 3×3 circulant block plus a fixed point.  Exact (Fractions) when τ = 0
    and σ is rational.
    """
    if not (-0.5 <= float(sigma) <= 1 and float(sigma) + SQRT3 * abs(float(tau)) <= 1 + 1e-15):
        raise ValueError(f"(sigma, tau)=({sigma}, {tau}) outside the cone -1/2 <= sigma, sigma + sqrt3|tau| <= 1")
    if tau == 0 and isinstance(sigma, Rational):
        s = Fraction(sigma)
        a, b, c = (1 + 2 * s) / 3, (1 - s) / 3, (1 - s) / 3
        exact = True
    else:
        s, t = float(sigma), float(tau)
        a = (1 + 2 * s) / 3
        b = (1 - s - SQRT3 * t) / 3
        c = (1 - s + SQRT3 * t) / 3
        # on the cone boundary one entry is zero up to rounding; snap it so
        # the permutation-matrix corner comes out exactly
        a, b, c = (0.0 if abs(v) < 1e-15 else v for v in (a, b, c))
        if b == 0.0 or c == 0.0:
            b, c = (0.0, 1 - a) if b == 0.0 else (1 - a, 0.0)
        exact = False
    z = 0
    rows = [[a, b, c, z], [c, a, b, z], [b, c, a, z], [z, z, z, 1]]
    return _matrix(rows, exact)


def _m_block(a):
    return [[a, 1 - a], [1 - a, a]]


def _a_block(x):
    return [[0, x, 1 - x], [x, 1 - x, 0], [1 - x, 0, x]]


def _block_diag(blocks, zero):
    n = sum(len(b) for b in blocks)
    out = [[zero] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, v in enumerate(row):
                out[off + i][off + j] = v
        off += len(b)
    return out


def real_line_witness(n: int, a):
    """PDS matrix of order n with 2a − 1 (n ≠ 3) or ±√(1 − 3a + 3a²) (n = 3) in its spectrum.

    Even n: n/2 copies of M_a = [[a, 1−a], [1−a, a]].  n = 3: A_a.  Odd n ≥ 5:
    M_a blocks plus one A_a block.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError("order must be an integer >= 2")
    if not 0 <= float(a) <= 1:
        raise ValueError("a must lie in [0, 1]")
    exact = isinstance(a, Rational)
    a = Fraction(a) if exact else float(a)
    zero = Fraction(0) if exact else 0.0
    if n == 3:
        blocks = [_a_block(a)]
    elif n % 2 == 0:
        blocks = [_m_block(a)] * (n // 2)
    else:
        blocks = [_m_block(a)] * ((n - 3) // 2) + [_a_block(a)]
    return _matrix(_block_diag(blocks, zero), exact)


def realize_real(n: int, lam: float):
    """A PDS matrix of order n having the real number lam ∈ [−1, 1] as an eigenvalue."""
    if not -1 <= lam <= 1:
        raise ValueError("lam must lie in [-1, 1]")
    if n != 3:
        return real_line_witness(n, (lam + 1) / 2)
    if abs(lam) >= 0.5:
        return real_line_witness(3, (3 + math.sqrt(max(12 * lam * lam - 3, 0.0))) / 6)
    c1 = (2 * lam + 1) / 3
    c2 = (1 - c1) / 2
    return circulant([c1, c2, c2])


def circulant(coeffs):
    m = len(coeffs)
    exact = all(isinstance(v, Rational) for v in coeffs)
    rows = [[coeffs[(j - i) % m] for j in range(m)] for i in range(m)]
    return _matrix(rows, exact)


def circulant_embed_witness(n: int, m: int, coeffs: Sequence, trace_zero: bool = False):
    """Block-diagonal circulants: circ_m(coeffs) ⊕ circ_{n−m}(coeffs'), or circ_n(coeffs) when m = n.

    coeffs' is coeffs padded with zeros (n − m ≥ m) or with zeros removed
    (n − m < m), so the two blocks share the multiset of row entries and the
    result is permutative.  The spectrum contains Σ_k coeffs_k ξ^k for every
    m-th root of unity ξ.
    """
    coeffs = list(coeffs)
    if len(coeffs) != m:
        raise ValueError(f"expected {m} coefficients, got {len(coeffs)}")
    if any(float(c) < 0 for c in coeffs) or abs(float(sum(coeffs)) - 1) > 1e-12:
        raise ValueError("coefficients must be nonnegative and sum to 1")
    if trace_zero and coeffs[0] != 0:
        raise ValueError("trace-zero construction needs a zero first coefficient")
    exact = all(isinstance(v, Rational) for v in coeffs)
    zero = Fraction(0) if exact else 0.0
    if m == n:
        return circulant(coeffs)
    if not (2 <= m <= n - 2):
        raise ValueError(f"invalid block split m={m} for n={n}")
    k = n - m
    if k >= m:
        second = coeffs + [zero] * (k - m)
    else:
        drop = m - k
        # with trace_zero keep coeffs[0] = 0 in place so both diagonal blocks stay traceless
        zeros_at = [i for i in range(1 if trace_zero else 0, m) if coeffs[i] == 0]
        if len(zeros_at) < drop:
            raise ValueError(f"invalid split: need {drop} zero coefficients to shrink to order {k}")
        removed = set(zeros_at[-drop:])
        second = [c for i, c in enumerate(coeffs) if i not in removed]
    blocks = [circulant(coeffs), circulant(second)]
    blocks = [b.tolist() if isinstance(b, np.ndarray) else b for b in blocks]
    return _matrix(_block_diag(blocks, zero), exact)


def circulant_eigenvalue(coeffs: Sequence, xi: complex) -> complex:
    return sum(complex(float(c)) * xi**k for k, c in enumerate(coeffs))


def pi3_mesh(steps: int = 13) -> list[tuple[tuple[Fraction, Fraction, Fraction], complex]]:
    """Barycentric lattice of Π_3: (weights on 1, ω, ω²) and the point they give."""
    out = []
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            w = (Fraction(steps - i - j, steps), Fraction(i, steps), Fraction(j, steps))
            out.append((w, circulant_eigenvalue(w, OMEGA)))
    return out


def pi4_mesh(half_steps: int = 7) -> list[tuple[tuple[Fraction, ...], complex]]:
    """Square lattice of Π_4 with circulant coefficients realizing each point at ξ = i."""
    out = []
    h = half_steps
    for a in range(-h, h + 1):
        for b in range(-h, h + 1):
            if abs(a) + abs(b) > h:
                continue
            x, y = Fraction(a, h), Fraction(b, h)
            # z = w0*1 + w1*i + w2*(-1) + w3*(-i); upper triangle uses w3=0, lower w1=0
            if y >= 0:
                w1 = y
                w0 = (1 + x - y) / 2
                w2 = (1 - x - y) / 2
                w = (w0, w1, w2, Fraction(0))
            else:
                w3 = -y
                w0 = (1 + x + y) / 2
                w2 = (1 - x + y) / 2
                w = (w0, Fraction(0), w2, w3)
            out.append((w, complex(float(x), float(y))))
    return out


# ---------------------------------------------------------------------------
# star-shapedness


def star_check(d, t, tol: float = 1e-8) -> bool:
    """tD + (1 − t)J/n has spectrum {1} ∪ t·(spec(D) minus one copy of 1)."""
    rows = d.tolist() if isinstance(d, np.ndarray) else [list(r) for r in d]
    if not is_doubly_stochastic(rows, tol):
        raise ValueError("D is not doubly stochastic")
    n = len(rows)
    exact = isinstance(t, Rational) and all(isinstance(v, Rational) for r in rows for v in r)
    if exact:
        t = Fraction(t)
        blend = [[t * Fraction(v) + (1 - t) / n for v in r] for r in rows]
    else:
        t = float(t)
        blend = [[t * float(v) + (1 - t) / n for v in r] for r in rows]
    if not 0 <= t <= 1:
        raise ValueError("t must lie in [0, 1]")
    spec_d = list(eigenvalues(rows).values)
    k = min(range(n), key=lambda i: abs(spec_d[i] - 1))
    expected = [1.0] + [float(t) * z for i, z in enumerate(spec_d) if i != k]
    return eigenvalues(blend).distance(expected) <= tol


# ---------------------------------------------------------------------------
# boundary curves


def boundary_matrix_a(t):
    return [[t, 1 - t, 0, 0], [1 - t, 0, t, 0], [0, 0, 1 - t, t], [0, t, 0, 1 - t]]


def boundary_matrix_b(s):
    return [[s, 0, 1 - s, 0], [0, 0, s, 1 - s], [0, 1 - s, 0, s], [1 - s, s, 0, 0]]


@dataclass(frozen=True)
class BoundaryPoint:
    curve: str
    t: Fraction
    eigenvalue: complex | None  # None where the matrix has no non-real eigenvalue


def _upper_nonreal(spec: Spectrum, tol: float = 1e-12) -> complex | None:
    cands = [z for z in spec if z.imag > tol]
    return max(cands, key=lambda z: z.imag) if cands else None


def _range_ticks(lo, hi, steps: int) -> list[Fraction]:
    if steps < 2:
        raise ValueError("at least 2 steps are required")
    lo, hi = as_fraction(lo), as_fraction(hi)
    return [lo + (hi - lo) * Fraction(k, steps - 1) for k in range(steps)]


def boundary_curves(t_steps: int = 200, s_steps: int = 200,
                    t_range=reference.BOUNDARY_T_RANGE, s_range=reference.BOUNDARY_S_RANGE) -> dict[str, list[BoundaryPoint]]:
    """λ(t) from A(t) and μ(s) from B(s), evaluated exactly at rational t, s."""
    out = {"A": [], "B": []}
    for name, build, (lo, hi), steps in (("A", boundary_matrix_a, t_range, t_steps),
                                         ("B", boundary_matrix_b, s_range, s_steps)):
        for t in _range_ticks(str(lo), str(hi), steps):
            m = [[Fraction(v) for v in r] for r in build(t)]
            out[name].append(BoundaryPoint(name, t, _upper_nonreal(eigenvalues(m))))
    return out


EXTENDED_SCAN = (Fraction(3, 4), Fraction(1))


def boundary_csv(curves: Mapping[str, Sequence[BoundaryPoint]]) -> str:
    lines = ["curve,t,re,im"]
    for name in ("A", "B"):
        for p in curves.get(name, ()):
            if p.eigenvalue is None:
                lines.append(f"{name},{float(p.t)!r},,")
            else:
                lines.append(f"{name},{float(p.t)!r},{p.eigenvalue.real!r},{p.eigenvalue.imag!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# auxiliary quadratics


@dataclass(frozen=True)
class Extremum:
    name: str
    maximum: Fraction
    argmax: tuple[Fraction, Fraction]
    minimum: Fraction
    argmin: tuple[Fraction, Fraction]


def _quadratic_coeffs(f):
    """(A, B, C, D, E, F) with f(a, b) = A a² + B b² + C ab + D a + E b + F."""
    F0 = f(Fraction(0), Fraction(0))
    fa1, fa_1 = f(Fraction(1), Fraction(0)), f(Fraction(-1), Fraction(0))
    fb1, fb_1 = f(Fraction(0), Fraction(1)), f(Fraction(0), Fraction(-1))
    A = (fa1 + fa_1) / 2 - F0
    D = (fa1 - fa_1) / 2
    B = (fb1 + fb_1) / 2 - F0
    E = (fb1 - fb_1) / 2
    C = f(Fraction(1), Fraction(1)) - A - B - D - E - F0
    return A, B, C, D, E, F0


def _candidate_points(f, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
    A, B, C, D, E, _ = _quadratic_coeffs(f)
    pts = [(lo, lo), (lo, hi), (hi, lo), (hi, hi)]
    det = 4 * A * B - C * C
    if det != 0:
        a = (C * E - 2 * B * D) / det
        b = (C * D - 2 * A * E) / det
        pts.append((a, b))
    for fixed in (lo, hi):
        # edges b = fixed: d/da = 2A a + C fixed + D
        if A != 0:
            pts.append((-(C * fixed + D) / (2 * A), fixed))
        if B != 0:
            pts.append((fixed, -(C * fixed + E) / (2 * B)))
    return [(a, b) for a, b in pts if lo <= a <= hi and lo <= b <= hi]


def aux_extrema_report(grid_density: int = 100, lo=Fraction(0), hi=Fraction(1, 2)) -> dict[str, Extremum]:
    """Exact extrema of the five auxiliary quadratics over the square [lo, hi]²."""
    if grid_density < 100:
        raise ValueError("grid density must be at least 100 per axis")
    lo, hi = as_fraction(lo), as_fraction(hi)
    grid = [lo + (hi - lo) * Fraction(k, grid_density - 1) for k in range(grid_density)]
    report = {}
    for name, f in AUX_FUNCTIONS.items():
        pts = list(itertools.product(grid, grid)) + _candidate_points(f, lo, hi)
        vals = [(f(a, b), (a, b)) for a, b in pts]
        mx = max(vals, key=lambda v: v[0])
        mn = min(vals, key=lambda v: v[0])
        report[name] = Extremum(name, mx[0], mx[1], mn[0], mn[1])
    return report


# ---------------------------------------------------------------------------
# complex extents and summary statistics


def complex_extent(cloud: RegionCloud, imag_tol: float = 1e-7) -> tuple[float, float] | None:
    z = cloud.eigenvalues.ravel()
    nr = z[np.abs(z.imag) > imag_tol]
    if nr.size == 0:
        return None
    return float(np.max(np.abs(nr.real))), float(np.max(np.abs(nr.imag)))


# ---------------------------------------------------------------------------
# output


def region_csv_lines(clouds: Iterable[RegionCloud]) -> Iterator[str]:
    yield "class_id,p1,p2,p3,re,im"
    for cloud in clouds:
        params = cloud.params
        d = params.shape[1]
        for k in range(cloud.eigenvalues.shape[0]):
            pcols = [repr(float(v)) for v in params[k]] + [""] * (3 - d)
            prefix = f"{cloud.class_id},{','.join(pcols)}"
            for z in cloud.eigenvalues[k]:
                yield f"{prefix},{float(z.real)!r},{float(z.imag)!r}"


def write_region_csv(path, clouds: Iterable[RegionCloud]) -> int:
    count = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in region_csv_lines(clouds):
            fh.write(line + "\n")
            count += 1
    return count - 1


def region_svg(clouds: Iterable[RegionCloud], size: int = 600) -> str:
    """Static scatter of the cloud with Π_3 and Π_4 outlines, one rect per occupied pixel."""
    pad = 20
    scale = (size - 2 * pad) / 2.2

    def px(z: complex) -> tuple[float, float]:
        return pad + (z.real + 1.1) * scale, pad + (1.1 - z.imag) * scale

    occupied = set()
    for cloud in clouds:
        z = cloud.eigenvalues.ravel()
        xs = np.floor(pad + (z.real + 1.1) * scale).astype(np.int64)
        ys = np.floor(pad + (1.1 - z.imag) * scale).astype(np.int64)
        occupied.update(zip(xs.tolist(), ys.tolist()))
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>',
             '<g fill="#1f4e9c">']
    parts += [f'<rect x="{x}" y="{y}" width="1" height="1"/>' for x, y in sorted(occupied)]
    parts.append("</g>")
    for j, colour in ((3, "#c0392b"), (4, "#27ae60")):
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in (px(v) for v in roots_of_unity(j)))
        parts.append(f'<polygon points="{pts}" fill="none" stroke="{colour}" stroke-width="1"/>')
    x0, y0 = px(complex(-1.1, 0))
    x1, _ = px(complex(1.1, 0))
    parts.append(f'<line x1="{x0:.2f}" y1="{y0:.2f}" x2="{x1:.2f}" y2="{y0:.2f}" stroke="#999" stroke-width="0.5"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
