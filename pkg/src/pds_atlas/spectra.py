"""Characteristic polynomials, a small-degree root finder and closed-form spectra.

Two evaluation paths share one algorithm:

* scalar: :func:`char_poly` (exact Faddeev–LeVerrier for rational input),
  exact deflation of the Perron root 1, exact square-free splitting, then
  Aberth iteration with Newton polish on each square-free factor;
* batch: :class:`FamilyCharPoly` expands the characteristic polynomial of an
  affine family once, symbolically in its parameters, and
  :func:`batch_roots` runs a vectorized Aberth iteration over many
  parameter points at once.
"""

from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Callable, Mapping, Sequence

import numpy as np

from .symbolic import AffineFamily, as_fraction, build_pattern, ds_solve
from .permcore import parse_tuple
from . import reference


class RootFindingError(RuntimeError):
    """Aberth iteration failed to meet the residual tolerance."""


class SpectrumMismatch(AssertionError):
    """A closed-form spectrum disagrees with the numeric eigenvalues."""


# ---------------------------------------------------------------------------
# polynomials with coefficients in ascending order


def _is_exact(values) -> bool:
    return all(isinstance(v, Rational) for v in values)


@dataclass(frozen=True)
class PolyCoeffs:
    """Monic polynomial c_0 + c_1 x + ... + x^n (ascending coefficients)."""

    coeffs: tuple

    def __post_init__(self):
        if not self.coeffs or self.coeffs[-1] != 1:
            raise ValueError("polynomial must be monic")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return _is_exact(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def descending(self) -> list:
        return list(reversed(self.coeffs))


def char_poly(m) -> PolyCoeffs:
    """det(xI - M) by Faddeev–LeVerrier; exact when every entry is rational."""
    rows = [list(r) for r in (m.tolist() if isinstance(m, np.ndarray) else m)]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    exact = _is_exact(v for r in rows for v in r)
    if exact:
        rows = [[Fraction(v) for v in r] for r in rows]
        zero, one = Fraction(0), Fraction(1)
    else:
        rows = [[complex(v) if isinstance(v, complex) else float(v) for v in r] for r in rows]
        zero, one = 0.0, 1.0
    coeffs = [zero] * (n + 1)
    coeffs[n] = one
    # M_k = A M_{k-1} + c_{n-k+1} I ;  c_{n-k} = -tr(A M_k) / k
    mk = [[zero] * n for _ in range(n)]
    for k in range(1, n + 1):
        am = _matmul(rows, mk, zero)
        c_prev = coeffs[n - k + 1]
        mk = [[am[i][j] + (c_prev if i == j else zero) for j in range(n)] for i in range(n)]
        amk = _matmul(rows, mk, zero)
        tr = sum((amk[i][i] for i in range(n)), zero)
        coeffs[n - k] = -tr / k
    return PolyCoeffs(tuple(coeffs))


def _matmul(a, b, zero):
    n = len(a)
    return [[sum((a[i][t] * b[t][j] for t in range(n)), zero) for j in range(n)] for i in range(n)]


def poly_divmod(num: Sequence, den: Sequence) -> tuple[list, list]:
    """Exact (or float) long division of ascending-coefficient polynomials."""
    num = list(num)
    den = _trim(list(den))
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    out = [0] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(_trim(num)) >= len(den):
        num = _trim(num)
        shift = len(num) - len(den)
        q = num[-1] / lead
        out[shift] = q
        for i, d in enumerate(den):
            num[shift + i] -= q * d
        num[-1] = 0 if not isinstance(num[-1], Fraction) else Fraction(0)
    return out, _trim(num)


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _derivative(p: Sequence) -> list:
    return [k * p[k] for k in range(1, len(p))]


def _monic(p: Sequence) -> list:
    lead = p[-1]
    return [v / lead for v in p]


def _gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    return _monic(a) if a else [Fraction(1)]


def deflate_root(p: Sequence, root) -> tuple[list, object]:
    """Synthetic division by (x - root): returns (quotient, remainder)."""
    desc = list(reversed(list(p)))
    q = [desc[0]]
    for c in desc[1:]:
        q.append(c + q[-1] * root)
    rem = q.pop()
    return list(reversed(q)), rem


def square_free_factors(p: Sequence[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun's square-free decomposition over the rationals: [(factor, multiplicity), ...]."""
    p = _monic(_trim([Fraction(v) for v in p]))
    if len(p) <= 1:
        return []
    out = []
    dp = _derivative(p)
    a = _gcd(p, dp)
    b, _ = poly_divmod(p, a)
    c, _ = poly_divmod(dp, a)
    d = [ci - bi for ci, bi in itertools.zip_longest(c, _derivative(b), fillvalue=Fraction(0))]
    k = 1
    while len(_trim(b)) > 1:
        a = _gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b, _ = poly_divmod(b, a)
        c, _ = poly_divmod(d, a)
        d = [ci - bi for ci, bi in itertools.zip_longest(c, _derivative(b), fillvalue=Fraction(0))]
        k += 1
    return out


# ---------------------------------------------------------------------------
# Aberth iteration


_EPS = np.finfo(float).eps


def _horner_with_derivative(p: Sequence[complex], z: complex) -> tuple[complex, complex]:
    val = 0j
    der = 0j
    for c in reversed(p):
        der = der * z + val
        val = val * z + c
    return val, der


def _scale(p: Sequence[complex], z: complex) -> float:
    r = abs(z)
    return sum(abs(c) * r**k for k, c in enumerate(p))


def aberth(p: Sequence[complex], max_iter: int = 500, tol: float = 1e-15) -> list[complex]:
    """All roots of a monic polynomial (ascending coefficients) by Aberth–Ehrlich iteration."""
    p = [complex(c) for c in p]
    n = len(p) - 1
    if n < 1:
        return []
    if n == 1:
        return [-p[0] / p[1]]
    radius = max(abs(p[0]) ** (1.0 / n), 1e-3)
    radius = min(radius, 1.0 + max(abs(c) for c in p[:-1]))
    z = [radius * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    for _ in range(max_iter):
        biggest = 0.0
        for k in range(n):
            val, der = _horner_with_derivative(p, z[k])
            if val == 0:
                continue
            ratio = val / der if der != 0 else val
            s = sum(1.0 / (z[k] - z[j]) for j in range(n) if j != k and z[k] != z[j])
            step = ratio / (1 - ratio * s)
            z[k] -= step
            biggest = max(biggest, abs(step) / (1.0 + abs(z[k])))
        if biggest <= tol:
            break
    return [_polish(p, r) for r in z]


def _polish(p: Sequence[complex], z: complex, steps: int = 3) -> complex:
    best = z
    best_val = abs(_horner_with_derivative(p, z)[0])
    for _ in range(steps):
        val, der = _horner_with_derivative(p, z)
        if der == 0 or val == 0:
            break
        z = z - val / der
        v = abs(_horner_with_derivative(p, z)[0])
        if v < best_val:
            best, best_val = z, v
    return best


def refine_clusters(p: Sequence[complex], roots: Sequence[complex], radius: float = 1e-3,
                    coeff_err: Sequence[float] | None = None,
                    accept: Callable[[Sequence[complex], complex], bool] | None = None) -> list[complex]:
    """Sharpen numerically split multiple roots.

    A cluster of k roots around a genuine k-fold root r is replaced by the
    simple root of p^(k-1) near the cluster mean, accepted only when p itself
    (nearly) vanishes there.  Clusters of distinct nearby roots fail that
    residual test and are left untouched.  ``coeff_err`` bounds the absolute
    error of each coefficient (default: rounding of the coefficients alone).
    ``accept(cluster, z)`` can veto a merge using information beyond p.
    """
    p = [complex(c) for c in p]
    roots = [complex(r) for r in roots]
    if coeff_err is None:
        coeff_err = [_EPS * abs(c) for c in p]
    n = len(roots)
    label = list(range(n))

    def find(i):
        while label[i] != i:
            label[i] = label[label[i]]
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) <= radius * (1 + abs(roots[i])):
                label[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    out = list(roots)
    for members in groups.values():
        remaining = list(members)
        size = len(remaining)
        while size >= 2 and len(remaining) >= 2:
            subsets = sorted(itertools.combinations(remaining, size),
                             key=lambda sub: max(abs(roots[i] - roots[j]) for i in sub for j in sub))
            for sub in subsets:
                cluster = [roots[i] for i in sub]
                z = _multiple_root(p, cluster, coeff_err)
                if z is not None and (accept is None or accept(cluster, z)):
                    for i in sub:
                        out[i] = z
                    remaining = [i for i in remaining if i not in sub]
                    break
            else:
                size -= 1
            size = min(size, len(remaining))
    return out


def _multiple_root(p: Sequence[complex], cluster: Sequence[complex], coeff_err: Sequence[float]) -> complex | None:
    k = len(cluster)
    d = list(p)
    for _ in range(k - 1):
        d = _derivative(d)
    z = sum(cluster) / k
    for _ in range(8):
        val, der = _horner_with_derivative(d, z)
        if der == 0:
            break
        z -= val / der
    val = abs(_horner_with_derivative(p, z)[0])
    r = abs(z)
    noise = sum(e * r**k for k, e in enumerate(coeff_err)) + len(p) * _EPS * _scale(p, z)
    return z if val <= 64 * noise else None


def _symmetrize(roots: list[complex], imag_tol: float = 1e-12) -> list[complex]:
    """Enforce conjugate symmetry for real polynomials."""
    upper = [r for r in roots if r.imag > imag_tol]
    lower = [r for r in roots if r.imag < -imag_tol]
    flat = [complex(r.real, 0.0) for r in roots if abs(r.imag) <= imag_tol]
    out = list(flat)
    lower_left = list(lower)
    for u in sorted(upper, key=lambda r: (r.real, r.imag)):
        if lower_left:
            j = min(range(len(lower_left)), key=lambda i: abs(lower_left[i] - u.conjugate()))
            w = lower_left.pop(j)
            m = complex((u.real + w.real) / 2, (u.imag - w.imag) / 2)
            out += [m, m.conjugate()]
        else:
            out.append(u)
    out += lower_left
    return out


# ---------------------------------------------------------------------------
# spectra


def _sort_key(z: complex):
    return (-round(z.real, 12), -round(z.imag, 12))


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues with conjugate pairs identified."""

    values: tuple[complex, ...]

    @classmethod
    def of(cls, values) -> "Spectrum":
        return cls(tuple(sorted((complex(v) for v in values), key=_sort_key)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def conjugate_pairs(self) -> list[tuple[int, int]]:
        """Index pairs (i, j) with values[j] ≈ conj(values[i]) and Im(values[i]) > 0."""
        used = set()
        pairs = []
        for i, z in enumerate(self.values):
            if z.imag <= 1e-12 or i in used:
                continue
            cands = [j for j in range(len(self.values)) if j not in used and j != i and self.values[j].imag < 0]
            if cands:
                j = min(cands, key=lambda j: abs(self.values[j] - z.conjugate()))
                used |= {i, j}
                pairs.append((i, j))
        return pairs

    def distance(self, other) -> float:
        return multiset_distance(self.values, list(other))

    def contains(self, z: complex, tol: float) -> bool:
        return any(abs(v - z) <= tol for v in self.values)

    def non_real(self, tol: float = 1e-9) -> list[complex]:
        return [v for v in self.values if abs(v.imag) > tol]

    @property
    def spectral_radius(self) -> float:
        return max(abs(v) for v in self.values)


def multiset_distance(a: Sequence[complex], b: Sequence[complex]) -> float:
    """Bottleneck distance of the best one-to-one matching.

    Brute force over permutations for n ≤ 6; larger inputs binary-search the
    sorted pairwise distances with an augmenting-path perfect-matching test.
    """
    a = [complex(v) for v in a]
    b = [complex(v) for v in b]
    if len(a) != len(b):
        raise ValueError(f"multisets of different sizes: {len(a)} vs {len(b)}")
    n = len(a)
    if n <= 6:
        best = math.inf
        for perm in itertools.permutations(range(n)):
            d = max((abs(x - b[j]) for x, j in zip(a, perm)), default=0.0)
            if d < best:
                best = d
        return best
    dist = [[abs(x - y) for y in b] for x in a]
    levels = sorted({d for row in dist for d in row})

    def perfect(limit: float) -> bool:
        match = [-1] * n

        def augment(i, seen):
            for j in range(n):
                if dist[i][j] <= limit and not seen[j]:
                    seen[j] = True
                    if match[j] < 0 or augment(match[j], seen):
                        match[j] = i
                        return True
            return False

        return all(augment(i, [False] * n) for i in range(n))

    lo, hi = 0, len(levels) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if perfect(levels[mid]):
            hi = mid
        else:
            lo = mid + 1
    return levels[lo]


def poly_roots(p: PolyCoeffs | Sequence, tol: float = 1e-12,
               coeff_err: Sequence[float] | None = None,
               accept: Callable[[Sequence[complex], complex], bool] | None = None) -> Spectrum:
    """Roots of a monic polynomial, exact-aware.

    For rational coefficients zero roots and repeated factors are split off
    exactly first, so the iteration only ever sees simple roots.  For float
    coefficients ``coeff_err`` (absolute error per coefficient) lets repeated
    roots be recognised despite upstream rounding; ``accept`` is passed on
    to :func:`refine_clusters`.
    """
    if tol < 1e-14:
        raise ValueError("tolerance below 1e-14 is not supported")
    coeffs = list(p.coeffs if isinstance(p, PolyCoeffs) else p)
    if len(coeffs) < 2:
        raise ValueError("degree must be at least 1")
    if coeffs[-1] != 1:
        coeffs = _monic(coeffs)
    roots: list[complex] = []
    if _is_exact(coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        while coeffs and coeffs[0] == 0:
            roots.append(0j)
            coeffs = coeffs[1:]
        if len(coeffs) > 1:
            for factor, mult in square_free_factors(coeffs):
                sub = _roots_simple(factor)
                roots += sub * mult
        real = True
    else:
        real = all(abs(complex(c).imag) == 0 for c in coeffs)
        roots = refine_clusters(coeffs, aberth([complex(c) for c in coeffs]), coeff_err=coeff_err, accept=accept)
    if real:
        roots = _symmetrize(roots)
    fl = [complex(c) for c in (p.coeffs if isinstance(p, PolyCoeffs) else p)]
    fl = [c / fl[-1] for c in fl]
    for r in roots:
        res = abs(_horner_with_derivative(fl, r)[0])
        if res > max(tol, 1e-14) * max(_scale(fl, r), 1.0) * 1e3:
            raise RootFindingError(f"root {r} has residual {res:.3e}")
    return Spectrum.of(roots)


def _roots_simple(factor: Sequence[Fraction]) -> list[complex]:
    f = _monic(list(factor))
    if len(f) == 2:
        return [complex(-f[0])]
    if len(f) == 3:
        # stable quadratic formula on exact data
        b, c = f[1], f[0]
        disc = b * b - 4 * c
        if disc >= 0:
            s = math.sqrt(disc) if disc.denominator == 1 or True else 0.0
            q = -0.5 * (float(b) + math.copysign(s, float(b)))
            if q == 0:
                return [0j, 0j]
            return [complex(q), complex(float(c) / q)]
        s = math.sqrt(-disc)
        return [complex(-float(b) / 2, s / 2), complex(-float(b) / 2, -s / 2)]
    return aberth([float(v) for v in f])


def is_doubly_stochastic(m, tol: float = 1e-10) -> bool:
    rows = m.tolist() if isinstance(m, np.ndarray) else [list(r) for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        return False
    if _is_exact(v for r in rows for v in r):
        return (all(v >= 0 for r in rows for v in r)
                and all(sum(r) == 1 for r in rows)
                and all(sum(r[j] for r in rows) == 1 for j in range(n)))
    arr = np.asarray(rows, dtype=float)
    return bool((arr >= -tol).all() and np.allclose(arr.sum(0), 1, atol=tol) and np.allclose(arr.sum(1), 1, atol=tol))


def eigenvalues(m, tol: float = 1e-10) -> Spectrum:
    """Spectrum of a doubly stochastic matrix, deflating the known eigenvalue 1 first."""
    rows = m.tolist() if isinstance(m, np.ndarray) else [list(r) for r in m]
    n = len(rows)
    exact = _is_exact(v for r in rows for v in r)
    if exact:
        row_ok = all(sum(Fraction(v) for v in r) == 1 for r in rows)
        col_ok = all(sum(Fraction(r[j]) for r in rows) == 1 for j in range(n))
    else:
        arr = np.asarray(rows, dtype=float)
        row_ok = np.allclose(arr.sum(1), 1, atol=tol)
        col_ok = np.allclose(arr.sum(0), 1, atol=tol)
    if not (row_ok and col_ok):
        raise ValueError("matrix is not doubly stochastic within tolerance")
    p = char_poly(rows)
    one = Fraction(1) if exact else 1.0
    q, rem = deflate_root(p.coeffs, one)
    if exact and rem != 0:
        raise ArithmeticError("exact deflation of the eigenvalue 1 left a remainder")
    if n == 1:
        return Spectrum.of([1.0])
    err = accept = None
    if not exact:
        # |λ| ≤ 1 for doubly stochastic matrices, so |q_k| ≤ C(n-1, k) and the
        # rounding in char_poly and the deflation is a small multiple of n·eps of that.
        err = [4 * n * n * _EPS * math.comb(n - 1, k) for k in range(n)]
        arr = np.asarray(rows, dtype=float)
        eye = np.eye(n)
        slack = 16 * n * _EPS * max(np.linalg.norm(arr), 1.0)

        def smin(z):
            return np.linalg.svd(arr - z * eye, compute_uv=False)[-1]

        def accept(cluster, z):
            # The polynomial cannot tell a k-fold root from k roots closer than
            # ~(coefficient error)^(1/k); the matrix can: keep the merge only if
            # M - zI is at least as close to singular as at the unmerged roots.
            return smin(z) <= max(smin(c) for c in cluster) + slack

    rest = poly_roots(q, tol=max(min(tol, 1e-12), 1e-14), coeff_err=err, accept=accept)
    return Spectrum.of([1.0] + list(rest.values))


# ---------------------------------------------------------------------------
# symbolic characteristic polynomial of an affine family (batch path)


class MPoly:
    """Sparse multivariate polynomial over Q: {exponent tuple: coefficient}."""

    __slots__ = ("terms", "nvars")

    def __init__(self, terms: Mapping[tuple, Fraction], nvars: int):
        self.terms = {k: v for k, v in terms.items() if v != 0}
        self.nvars = nvars

    @classmethod
    def const(cls, c, nvars: int) -> "MPoly":
        return cls({(0,) * nvars: Fraction(c)}, nvars)

    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MPoly(out, self.nvars)

    def __neg__(self) -> "MPoly":
        return MPoly({k: -v for k, v in self.terms.items()}, self.nvars)

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = Fraction(other)
            return MPoly({k: v * c for k, v in self.terms.items()}, self.nvars)
        out: dict[tuple, Fraction] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return MPoly(out, self.nvars)

    def shifted(self, center: Sequence[Fraction]) -> "MPoly":
        """The same polynomial written in the variables y = x - center."""
        out = MPoly({}, self.nvars)
        for k, v in self.terms.items():
            term = MPoly.const(v, self.nvars)
            for i, e in enumerate(k):
                if not e:
                    continue
                factor = {}
                for r in range(e + 1):
                    exps = [0] * self.nvars
                    exps[i] = r
                    factor[tuple(exps)] = math.comb(e, r) * Fraction(center[i]) ** (e - r)
                term = term * MPoly(factor, self.nvars)
            out = out + term
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def evaluate(self, values: Sequence[Fraction]):
        total = 0
        for k, v in self.terms.items():
            term = v
            for x, e in zip(values, k):
                if e:
                    term = term * x**e
            total = total + term
        return total

    def evaluate_batch(self, x: np.ndarray, absolute: bool = False) -> np.ndarray:
        """Evaluate at each row of x (shape (N, nvars)) in floating point.

        With ``absolute`` the sum of |term| is returned instead (a scale for
        the rounding error of the plain evaluation).
        """
        if absolute:
            x = np.abs(x)
        out = np.zeros(x.shape[0])
        for k, v in self.terms.items():
            term = np.full(x.shape[0], abs(float(v)) if absolute else float(v))
            for i, e in enumerate(k):
                if e:
                    term = term * x[:, i] ** e
            out += term
        return out


def _affine_to_mpoly(form, params: Sequence[int]) -> MPoly:
    d = len(params)
    terms = {(0,) * d: form.constant}
    for k, v in form.coeffs:
        e = [0] * d
        e[params.index(k)] = 1
        terms[tuple(e)] = v
    return MPoly(terms, d)


class FamilyCharPoly:
    """Characteristic polynomial of an affine family as polynomials in its parameters.

    After construction ``reduced`` holds the coefficients (ascending) of the
    characteristic polynomial divided by (x - 1) and by the largest power of x
    that divides it identically; ``zero_roots`` is that power.
    """

    def __init__(self, family: AffineFamily):
        self.family = family
        n, d = family.n, family.dimension
        a = [[_affine_to_mpoly(e, family.params) for e in row] for row in family.entries]
        zero = MPoly({}, d)
        coeffs = [zero] * (n + 1)
        coeffs[n] = MPoly.const(1, d)
        mk = [[zero] * n for _ in range(n)]
        for k in range(1, n + 1):
            am = self._matmul(a, mk, zero)
            mk = [[am[i][j] + (coeffs[n - k + 1] if i == j else zero) for j in range(n)] for i in range(n)]
            amk = self._matmul(a, mk, zero)
            tr = zero
            for i in range(n):
                tr = tr + amk[i][i]
            coeffs[n - k] = tr * Fraction(-1, k)
        self.coeffs = coeffs
        # divide by (x - 1): quotient coefficients are suffix sums
        desc = list(reversed(coeffs))
        q = [desc[0]]
        for c in desc[1:]:
            q.append(c + q[-1])
        rem = q.pop()
        if not rem.is_zero():
            raise ArithmeticError("family characteristic polynomial does not vanish at 1")
        quotient = list(reversed(q))
        z = 0
        while z < len(quotient) - 1 and quotient[z].is_zero():
            z += 1
        self.zero_roots = z
        self.reduced = quotient[z:]

    @staticmethod
    def _matmul(a, b, zero):
        n = len(a)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for t in range(n):
                    if a[i][t].terms and b[t][j].terms:
                        acc = acc + a[i][t] * b[t][j]
                row.append(acc)
            out.append(row)
        return out

    @property
    def center(self) -> tuple[Fraction, ...]:
        return tuple((lo + hi) / 2 for lo, hi in self.family.param_box)

    def _centered(self) -> list[MPoly]:
        if not hasattr(self, "_centered_cache"):
            self._centered_cache = [p.shifted(self.center) for p in self.reduced]
        return self._centered_cache

    def exact_coefficients(self, params: Sequence) -> list[Fraction]:
        vals = [as_fraction(v) for v in params]
        return [c.evaluate(vals) for c in self.coeffs]

    def spectra(self, params: np.ndarray) -> np.ndarray:
        """Eigenvalues (N, n) at float parameter rows, via :func:`batch_roots`."""
        params = np.atleast_2d(np.asarray(params, dtype=float))
        if self.family.dimension == 0:
            params = np.zeros((max(params.shape[0], 1), 0))
        nrows = params.shape[0]
        parts = [np.ones((nrows, 1), dtype=complex), np.zeros((nrows, self.zero_roots), dtype=complex)]
        if len(self.reduced) > 1:
            # evaluate about the centre of the parameter box to limit cancellation
            y = params - np.array([float(c) for c in self.center])
            polys = self._centered()
            c = np.stack([p.evaluate_batch(y) for p in polys], axis=1)
            err = np.stack([_EPS * len(p.terms) * p.evaluate_batch(y, absolute=True) for p in polys], axis=1)
            parts.append(batch_roots(c, coeff_err=err))
        return np.concatenate(parts, axis=1)


def batch_roots(coeffs: np.ndarray, max_iter: int = 200, tol: float = 1e-15,
                coeff_err: np.ndarray | None = None) -> np.ndarray:
    """Vectorized Aberth iteration for many monic polynomials of the same degree.

    ``coeffs`` has shape (N, d+1), ascending, last column ones; ``coeff_err``
    (same shape) optionally bounds the absolute error of each coefficient.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeff_err is None:
        coeff_err = _EPS * np.abs(coeffs)
    nrows, deg = coeffs.shape[0], coeffs.shape[1] - 1
    if deg == 1:
        return (-coeffs[:, 0] / coeffs[:, 1])[:, None]
    if deg == 2:
        b, c = coeffs[:, 1], coeffs[:, 0]
        disc = np.sqrt(b * b - 4 * c)
        sgn = np.where((np.conj(b) * disc).real >= 0, 1.0, -1.0)
        q = -0.5 * (b + sgn * disc)
        safe = np.where(q == 0, 1.0, q)
        r2 = np.where(q == 0, 0.0, c / safe)
        return _refine_batch(coeffs, np.stack([q, r2], axis=1), coeff_err)

    def horner(z):
        val = np.zeros_like(z)
        der = np.zeros_like(z)
        for k in range(deg, -1, -1):
            der = der * z + val
            val = val * z + coeffs[:, k:k + 1]
        return val, der

    radius = np.maximum(np.abs(coeffs[:, 0]) ** (1.0 / deg), 1e-3)[:, None]
    angles = 2 * np.pi * np.arange(deg) / deg + 0.4
    z = radius * np.exp(1j * angles)[None, :]
    active = np.ones(nrows, dtype=bool)
    eye = np.eye(deg, dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        zz = z[idx]
        c_save = coeffs
        coeffs = c_save[idx]
        val, der = horner(zz)
        coeffs = c_save
        diff = zz[:, :, None] - zz[:, None, :]
        diff[:, eye] = 1.0
        inv = np.where(eye[None], 0.0, 1.0 / np.where(diff == 0, 1e-300, diff))
        s = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(der != 0, val / der, val)
            step = ratio / (1 - ratio * s)
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.where(val == 0, 0.0, step)
        zz = zz - step
        z[idx] = zz
        done = (np.abs(step) / (1 + np.abs(zz))).max(axis=1) <= tol
        active[idx[done]] = False
    # one Newton polish step, kept only where it reduces the residual
    val, der = horner(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        cand = z - np.where(der != 0, val / der, 0)
    cval, _ = horner(cand)
    better = np.isfinite(cand) & (np.abs(cval) < np.abs(val))
    return _refine_batch(coeffs, np.where(better, cand, z), coeff_err)


def _refine_batch(coeffs: np.ndarray, z: np.ndarray, coeff_err: np.ndarray, radius: float = 1e-3) -> np.ndarray:
    """Apply :func:`refine_clusters` to the rows that contain a root cluster."""
    deg = z.shape[1]
    diff = np.abs(z[:, :, None] - z[:, None, :])
    diff[:, np.arange(deg), np.arange(deg)] = np.inf
    close = (diff <= radius * (1 + np.abs(z))[:, :, None]).any(axis=(1, 2))
    for k in np.nonzero(close)[0]:
        z[k] = refine_clusters(coeffs[k], z[k], radius, coeff_err[k])
    return z


# ---------------------------------------------------------------------------
# closed forms


class FormStatus(enum.Enum):
    NOT_AVAILABLE = "not-available"
    REAL_ONLY = "real"


NOT_AVAILABLE = FormStatus.NOT_AVAILABLE
REAL_ONLY = FormStatus.REAL_ONLY


@dataclass(frozen=True)
class ClosedForm:
    class_id: str
    tuple_str: str
    free: tuple[str, ...] | None
    formula: Callable[[Sequence[Fraction]], list[complex]] | FormStatus

    def family(self) -> AffineFamily:
        return _closed_form_family(self.tuple_str, self.free)


_FAMILY_CACHE: dict = {}


def _closed_form_family(tuple_str: str, free) -> AffineFamily:
    key = (tuple_str, free)
    if key not in _FAMILY_CACHE:
        _FAMILY_CACHE[key] = ds_solve(build_pattern(parse_tuple(tuple_str, 4)), free=free)
    return _FAMILY_CACHE[key]


S2, S3, S5, S6, S7, S15 = (math.sqrt(v) for v in (2, 3, 5, 6, 7, 15))


def _csqrt(v) -> complex:
    return cmath.sqrt(float(v))


def _c1_circulant(c):
    return [sum(float(c[j]) * 1j ** (j * k) for j in range(4)) for k in range(4)]


def _c2(c):
    c1, c2, c3, c4 = (float(v) for v in c)
    r = _csqrt((c[0] - c[1] + c[2] - c[3]) * (c[0] - c[1] - c[2] + c[3]))
    return [1, c1 + c2 - c3 - c4, r, -r]


def _c4(c):
    det = reference.PRINTED_CHAR_POLYS["C4"][3](*c)[0]
    sigma = -float(np.cbrt(float(det))) / 2
    return [1, -2 * sigma, complex(sigma, S3 * sigma), complex(sigma, -S3 * sigma)]


def _pair(centre, radicand, half=True):
    r = _csqrt(radicand)
    r = 0.5 * r if half else r
    return [centre + r, centre - r]


def _f(a, b):
    return 9 * a * a + 9 * b * b - 14 * a * b - a - b + Fraction(1, 4)


def _f1(a, b):
    return 4 * a * a + 4 * b * b - 24 * a * b + 4 * a + 4 * b - 1


def _f2(a, b):
    return -7 * a * a + b * b + 10 * a * b + a - 3 * b + Fraction(1, 4)


def _f3(a, b):
    return 8 * a * a - 4 * b * b - 4 * a + 2 * b + Fraction(1, 4)


def _f4(a, b):
    return -7 * a * a + 9 * b * b + 2 * a * b + 3 * a - 5 * b + Fraction(1, 4)


AUX_FUNCTIONS = {"f": _f, "f1": _f1, "f2": _f2, "f3": _f3, "f4": _f4}


def _t(c3):
    return float(4 * c3 - 1)


_FORMS = [
    ClosedForm("C1", "((1234),(13)(24),(1432))", ("c1", "c2", "c3"), _c1_circulant),
    ClosedForm("C2", "((12)(34),(14)(23),(13)(24))", ("c1", "c2", "c3"), _c2),
    ClosedForm("C3", "((1432),(1234),(13)(24))", ("c1", "c2", "c3"), NOT_AVAILABLE),
    ClosedForm("C4", "((13)(24),(14)(23),(12)(34))", ("c1", "c2", "c3"), _c4),
    ClosedForm("C5", "((12)(34),(13)(24),(14)(23))", ("c1", "c2", "c3"), REAL_ONLY),
    ClosedForm("C6", "((12)(34),(1423),(1324))", ("c1", "c2", "c3"), REAL_ONLY),
    ClosedForm("C7", "(I4,(34),(34))", ("c3",), lambda c: [1, 0, 0, 0]),
    ClosedForm("C8", "((34),(34),I4)", ("c3",), lambda c: [1, float(Fraction(1, 2) - 2 * c[2]), 0, 0]),
    ClosedForm("C9", "((34),(243),(24))", ("c3",),
               lambda c: [1, 0, complex(-_t(c[2]) / 8, S7 / 8 * _t(c[2])), complex(-_t(c[2]) / 8, -S7 / 8 * _t(c[2]))]),
    ClosedForm("C10", "((34),(24),(243))", ("c3",),
               lambda c: [1, 0, float(2 * c[2] - Fraction(1, 2)), float(Fraction(1, 4) - c[2])]),
    ClosedForm("C11", "((24),(34),(243))", ("c3",),
               lambda c: [1, 0, complex(-_t(c[2]) / 4, _t(c[2]) / 4), complex(-_t(c[2]) / 4, -_t(c[2]) / 4)]),
    ClosedForm("C12", "((243),(34),(24))", ("c3",),
               lambda c: [1, 0, _t(c[2]) / (2 * S2), -_t(c[2]) / (2 * S2)]),
    ClosedForm("C13", "((24),(243),(34))", ("c3",),
               lambda c: [1, 0, float(Fraction(1, 2) - 2 * c[2]), float(c[2] - Fraction(1, 4))]),
    ClosedForm("C14", "((243),(24),(34))", ("c3",),
               lambda c: [1, 0, float(c[2] - Fraction(1, 4)), float(2 * c[2] - Fraction(1, 2))]),
    ClosedForm("C15", "((34),(24),(142))", ("c1",), NOT_AVAILABLE),
    ClosedForm("C16", "((34),(243),(1432))", ("c1",), NOT_AVAILABLE),
    ClosedForm("C17", "((234),(24),(14))", ("c1",),
               lambda c: [1, float(4 * c[0] - 1)] + [3 * complex(-0.25, s * S15 / 12) * float(4 * c[0] - 1) for s in (1, -1)]),
    ClosedForm("C18", "((1234),(14),(124))", ("c4",),
               lambda c: [1, float(1 - 4 * c[3])] + [s * 0.5 * S6 * float(1 - 4 * c[3]) for s in (1, -1)]),
    ClosedForm("C19", "((24),(34),(142))", ("c1",),
               lambda c: [1, float(4 * c[0] - 1)] + [0.5 * complex(1, s * S5) * float(4 * c[0] - 1) for s in (1, -1)]),
    ClosedForm("C20", "((34),(142),(24))", ("c1",), NOT_AVAILABLE),
    ClosedForm("C21", "((34),(1432),(243))", ("c1",),
               lambda c: [1, float(Fraction(3, 2) - 6 * c[0])] + [s * 1j * float(4 * c[0] - 1) for s in (1, -1)]),
    ClosedForm("C22", "((14),(1234),(124))", ("c4",),
               lambda c: [1, float(6 * c[3] - Fraction(3, 2)), float(1 - 4 * c[3]), float(4 * c[3] - 1)]),
    ClosedForm("C23", "((243),(34),(1432))", ("c1",), NOT_AVAILABLE),
    ClosedForm("C24", "((24),(234),(14))", ("c1",),
               lambda c: [1, float(Fraction(3, 2) - 6 * c[0]), float(4 * c[0] - 1), float(4 * c[0] - 1)]),
    ClosedForm("C25", "((234),(14),(24))", ("c1",), NOT_AVAILABLE),
    ClosedForm("C26", "((1234),(124),(14))", ("c4",),
               lambda c: [1, float(1 - 4 * c[3])] + [3 * complex(-0.25, s * S15 / 12) * float(4 * c[3] - 1) for s in (1, -1)]),
    ClosedForm("C27", "(I4,(12)(34),(12)(34))", ("c1", "c3"), lambda c: [1, 0, 0, 0]),
    ClosedForm("C28", "((12)(34),(12)(34),I4)", ("c1", "c3"), lambda c: [1, float(2 * c[0] - 2 * c[2]), 0, 0]),
    ClosedForm("C29", "((34),(12),(12)(34))", ("c1", "c3"), lambda c: [1, 0, 0, float(2 * c[2] - Fraction(1, 2))]),
    ClosedForm("C30", "((12)(34),(12),(34))", ("c1", "c3"),
               lambda c: [1, 0] + _pair(float(c[0] + c[2] - Fraction(1, 2)), _f1(c[0], c[2]))),
    ClosedForm("C31", "((234),(12)(34),(132))", ("c1", "c3"),
               lambda c: [1, 0] + _pair(float((c[0] - 3 * c[2]) / 2 + Fraction(1, 4)), _f2(c[0], c[2]))),
    ClosedForm("C32", "((243),(123),(13)(24))", ("c1", "c2"),
               lambda c: [1, 0] + _pair(float(c[1] - Fraction(1, 4)), _f3(c[0], c[1]))),
    ClosedForm("C33", "((132),(12)(34),(234))", ("c1", "c3"),
               lambda c: [1, 0] + _pair(float((c[0] + c[2]) / 2 - Fraction(1, 4)), _f(c[0], c[2]))),
    ClosedForm("C34", "((23),(12)(34),(1342))", ("c1", "c3"),
               lambda c: [1, 0] + _pair(float((c[0] + c[2]) / 2 - Fraction(1, 4)), _f4(c[0], c[2]))),
    ClosedForm("C35", "((23),(1243),(13)(24))", ("c1", "c2"),
               lambda c: [1, 0] + [s * S2 * float(c[0] + c[1] - Fraction(1, 2)) for s in (1, -1)]),
    ClosedForm("C36", "((1342),(12)(34),(23))", ("c1", "c3"),
               lambda c: [1, 0, float(2 * (c[0] - c[2])), float(Fraction(1, 2) - c[0] - c[2])]),
    ClosedForm("C37", "((23),(1342),(12)(34))", ("c1", "c3"),
               lambda c: [1, 0] + [0.5 * complex(1, s) * float(2 * c[0] + 2 * c[2] - 1) for s in (1, -1)]),
]

CLOSED_FORMS: dict[str, ClosedForm] = {f.class_id: f for f in _FORMS}


def closed_form(class_id: str) -> ClosedForm:
    try:
        return CLOSED_FORMS[class_id]
    except KeyError:
        raise KeyError(f"unknown class id {class_id!r}") from None


def closed_form_spectrum(class_id: str, params: Sequence) -> Spectrum | FormStatus:
    """Closed-form eigenvalues at ``params`` (the form's free parameters, in order)."""
    form = closed_form(class_id)
    if isinstance(form.formula, FormStatus):
        return form.formula
    fam = form.family()
    params = [as_fraction(v) for v in params]
    if not fam.is_feasible(params):
        raise ValueError(f"parameters {params} lie outside the feasible set of {class_id}")
    c = fam.first_row(params)
    return Spectrum.of(form.formula(c))


# ---------------------------------------------------------------------------
# sampling rational parameter points


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator so streams are reproducible across platforms."""
    return np.random.Generator(np.random.Philox(seed))


def random_feasible_points(family: AffineFamily, count: int, seed: int = 0, denominator: int = 4096) -> list[list[Fraction]]:
    """Uniform-ish rational points of the feasible set (rejection from the bounding box)."""
    rng = make_rng(seed)
    box = family.param_box
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count + 1000:
            raise RuntimeError("feasible set too thin for rejection sampling")
        ks = rng.integers(0, denominator + 1, size=len(box))
        pt = [lo + (hi - lo) * Fraction(int(k), denominator) for (lo, hi), k in zip(box, ks)]
        if family.is_feasible(pt):
            out.append(pt)
    return out


@dataclass
class VerifyReport:
    class_id: str
    samples: int
    max_deviation: float
    worst_params: list | None
    tol: float
    status: str = "checked"

    @property
    def passed(self) -> bool:
        return self.status == "not-available" or self.max_deviation <= self.tol

    def to_json(self) -> dict:
        return {
            "class": self.class_id,
            "status": self.status,
            "samples": self.samples,
            "max_deviation": self.max_deviation,
            "worst_params": None if self.worst_params is None else [str(v) for v in self.worst_params],
            "tol": self.tol,
            "passed": self.passed,
        }


def verify_class(class_id: str, sample_count: int = 1000, tol: float = 1e-9, seed: int = 0) -> VerifyReport:
    """Compare the closed form with the numeric eigensolver at random feasible rational points."""
    form = closed_form(class_id)
    if form.formula is NOT_AVAILABLE:
        return VerifyReport(class_id, 0, 0.0, None, tol, status="not-available")
    fam = form.family()
    worst, worst_p = 0.0, None
    for pt in random_feasible_points(fam, sample_count, seed=seed):
        m = fam.evaluate(pt)
        ev = eigenvalues(m)
        if form.formula is REAL_ONLY:
            dev = max(abs(z.imag) for z in ev)
            sym = all(m[i][j] == m[j][i] for i in range(4) for j in range(4))
            if not sym:
                dev = math.inf
        else:
            dev = ev.distance(closed_form_spectrum(class_id, pt))
        if dev > worst or worst_p is None:
            worst, worst_p = max(dev, worst), pt if dev >= worst else worst_p
    return VerifyReport(class_id, sample_count, worst, worst_p, tol,
                        status="real-check" if form.formula is REAL_ONLY else "checked")
