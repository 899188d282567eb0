import cmath
import math
from fractions import Fraction as Q

import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from pds_atlas import spectra
from pds_atlas.permcore import matrix_of, parse_cycles, parse_tuple
from pds_atlas.spectra import (
    FamilyCharPoly, PolyCoeffs, Spectrum, char_poly, closed_form_spectrum, eigenvalues,
    multiset_distance, poly_roots, random_feasible_points, square_free_factors, verify_class,
)
from pds_atlas.symbolic import build_pattern, ds_solve

J4 = [[Q(1, 4)] * 4 for _ in range(4)]
S3 = math.sqrt(3)


def c4_family():
    return ds_solve(build_pattern(parse_tuple("((13)(24),(14)(23),(12)(34))", 4)))


def close(spec, values, tol=1e-12):
    return multiset_distance(list(spec), values) <= tol


# ---------------------------------------------------------------------------
# char_poly


def test_char_poly_examples():
    assert char_poly(J4).coeffs == (0, 0, 0, -1, 1)
    eye = [[Q(int(i == j)) for j in range(4)] for i in range(4)]
    assert char_poly(eye).coeffs == (1, -4, 6, -4, 1)
    fam = c4_family()
    for pt in random_feasible_points(fam, 10, seed=3):
        p = char_poly(fam.evaluate(pt))
        assert p.exact and p.degree == 4 and p.coeffs[2] == 0


def test_char_poly_float_input_is_float_and_monic():
    p = char_poly(np.full((3, 3), 1 / 3))
    assert not p.exact and p.coeffs[-1] == 1
    np.testing.assert_allclose([complex(c) for c in p.coeffs], [0, 0, -1, 1], atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.lists(st.integers(-9, 9), min_size=36, max_size=36))
def test_char_poly_matches_sympy(n, entries):
    m = [[Q(entries[i * 6 + j], 7) for j in range(n)] for i in range(n)]
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.Matrix(m).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert list(char_poly(m).coeffs) == [Q(int(c.p), int(c.q)) for c in ref]


# ---------------------------------------------------------------------------
# poly_roots


def test_poly_roots_examples():
    assert close(poly_roots([-1, 0, 0, 0, 1]), [1, 1j, -1, -1j])
    assert close(poly_roots([Q(0), Q(0), Q(0), Q(-1), Q(1)]), [1, 0, 0, 0], 0)
    z4 = [[Q(int(j == (i + 1) % 4)) for j in range(4)] for i in range(4)]
    assert close(poly_roots(char_poly(z4)), [1, 1j, -1, -1j])


def test_poly_roots_rejects_bad_input():
    with pytest.raises(ValueError):
        poly_roots([1, 1], tol=1e-15)
    with pytest.raises(ValueError):
        poly_roots([1])


def test_poly_roots_repeated_root_exact_and_float():
    p = [Q(-1, 27), Q(1, 3), Q(-1), Q(1)]  # (x - 1/3)^3
    assert close(poly_roots(p), [1 / 3] * 3, 1e-15)
    r = poly_roots([float(c) for c in p])
    assert close(r, [1 / 3] * 3, 1e-9)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(-8, 8), st.integers(-8, 8)), min_size=1, max_size=6))
def test_poly_roots_recovers_gaussian_rational_roots(pairs):
    roots = [complex(a, b) / 8 for a, b in pairs]
    # make the polynomial real by adding conjugates where needed
    full = roots + [r.conjugate() for r in roots if r.imag]
    coeffs = np.poly(full)[::-1].real
    spec = poly_roots(list(coeffs))
    cluster = max(1, max(full.count(r) for r in full))
    assert multiset_distance(list(spec), full) <= 1e-6 ** (1 / cluster) * 10 + 1e-9


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=7))
def test_poly_roots_against_numpy(coeffs):
    coeffs = coeffs[:-1] + [1]
    spec = poly_roots([float(c) for c in coeffs])
    ref = np.roots(coeffs[::-1])
    # compare through the polynomial: both sets are root sets of the same polynomial
    assert len(spec) == len(ref)
    for z in spec:
        assert abs(np.polyval(coeffs[::-1], z)) <= 1e-6 * max(1, abs(z)) ** len(coeffs) * sum(map(abs, coeffs))


def test_square_free_factors_against_sympy():
    x = sympy.Symbol("x")
    expr = (x - 1) ** 3 * (x + Q(1, 2)) ** 2 * (x ** 2 + x + 1)
    coeffs = [Q(int(c.p), int(c.q)) for c in sympy.Poly(expr, x).all_coeffs()[::-1]]
    got = {m: f for f, m in square_free_factors(coeffs)}
    _, ref = sympy.sqf_list(expr)
    assert sorted(got) == sorted(m for _, m in ref)
    for f, m in ref:
        want = sympy.Poly(f, x).monic().all_coeffs()[::-1]
        assert got[m] == [Q(int(c.p), int(c.q)) for c in want]


def test_spectrum_behaviour():
    s = Spectrum.of([1, 0.5j, -0.5j, -1])
    assert s.values == (1, 0.5j, -0.5j, -1)
    assert s.conjugate_pairs == [(1, 2)]
    assert s.spectral_radius == pytest.approx(1)
    assert s.contains(-1 + 1e-13, 1e-12) and not s.contains(0.3, 1e-3)
    assert len(s.non_real()) == 2


def test_multiset_distance_is_bottleneck_matching():
    assert multiset_distance([0, 1], [1, 0]) == 0
    assert multiset_distance([0, 0, 1], [0, 1, 1]) == 1
    with pytest.raises(ValueError):
        multiset_distance([0], [0, 1])


# ---------------------------------------------------------------------------
# eigenvalues


def test_eigenvalues_examples():
    assert close(eigenvalues(J4), [1, 0, 0, 0], 0)
    p = matrix_of(parse_cycles("(234)", 4))
    w = complex(-0.5, S3 / 2)
    assert close(eigenvalues(p), [1, 1, w, w.conjugate()])
    fam = c4_family()
    m = fam.evaluate([1, 0, 0])
    assert close(eigenvalues(m), [1, 1, w, w.conjugate()])
    sigma = -0.5
    assert close(eigenvalues(m), [1, -2 * sigma, complex(sigma, S3 * sigma), complex(sigma, -S3 * sigma)])


def test_eigenvalues_rejects_non_doubly_stochastic():
    with pytest.raises(ValueError):
        eigenvalues([[Q(1), Q(0)], [Q(1), Q(0)]])


def test_eigenvalues_against_numpy_on_permutations(cat4):
    from pds_atlas.permcore import all_permutations
    for p in all_permutations(4):
        m = matrix_of(p)
        ref = np.linalg.eigvals(np.array(m, dtype=float))
        assert multiset_distance(list(eigenvalues(m)), list(ref)) <= 1e-7


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 36), st.integers(0, 10**6))
def test_family_member_invariants(cat4, idx, seed):
    cls = cat4.classes[idx]
    pt = random_feasible_points(cls.family, 1, seed=seed, denominator=97)[0]
    m = cls.family.evaluate(pt)
    spec = eigenvalues(m)
    assert spec.contains(1, 1e-10)
    assert spec.spectral_radius <= 1 + 1e-10
    assert abs(sum(spec) - sum(m[i][i] for i in range(4))) <= 1e-10
    # closed under conjugation
    vals = list(spec)
    assert multiset_distance(vals, [z.conjugate() for z in vals]) <= 1e-9
    # numpy oracle (multiple roots limit its accuracy to ~eps^(1/4))
    ref = np.linalg.eigvals(np.array(m, dtype=float))
    assert multiset_distance(vals, list(ref)) <= 1e-3


def test_c5_c6_members_symmetric_real(cat4):
    for cid in ("C5", "C6"):
        fam = cat4.get(cid).family
        for pt in random_feasible_points(fam, 50, seed=1):
            m = fam.evaluate(pt)
            assert all(m[i][j] == m[j][i] for i in range(4) for j in range(4))
            assert all(abs(z.imag) <= 1e-10 for z in eigenvalues(m))


# ---------------------------------------------------------------------------
# closed forms


def test_closed_form_examples():
    assert close(closed_form_spectrum("C8", [0]), [1, 0.5, 0, 0])
    r = 1 / (2 * math.sqrt(2))
    assert close(closed_form_spectrum("C12", [Q(1, 2)]), [1, 0, r, -r])
    assert close(closed_form_spectrum("C9", [Q(1, 2)]),
                 [1, 0, complex(-1 / 8, math.sqrt(7) / 8), complex(-1 / 8, -math.sqrt(7) / 8)])


def test_closed_form_status_and_errors():
    for cid in ("C3", "C15", "C16", "C20", "C23", "C25"):
        assert closed_form_spectrum(cid, [0] * 3) is spectra.NOT_AVAILABLE or \
            closed_form_spectrum(cid, [Q(1, 6)]) is spectra.NOT_AVAILABLE
    assert closed_form_spectrum("C5", [Q(1, 4)] * 3) is spectra.REAL_ONLY
    with pytest.raises(KeyError):
        closed_form_spectrum("C99", [0])
    with pytest.raises(ValueError):
        closed_form_spectrum("C8", [Q(3, 4)])


def test_closed_forms_cover_every_class():
    assert sorted(spectra.CLOSED_FORMS, key=lambda s: int(s[1:])) == [f"C{i}" for i in range(1, 38)]


def test_verify_class_examples():
    r7 = verify_class("C7", 100)
    assert r7.passed and r7.max_deviation < 1e-9
    fam = spectra.closed_form("C7").family()
    for pt in random_feasible_points(fam, 20, seed=0):
        assert close(eigenvalues(fam.evaluate(pt)), [1, 0, 0, 0], 1e-9)
    assert verify_class("C2", 100).passed
    r33 = verify_class("C33", 100)
    assert r33.passed
    fam = spectra.closed_form("C33").family()
    for pt in random_feasible_points(fam, 50, seed=2):
        assert all(abs(z.imag) <= 1e-9 for z in eigenvalues(fam.evaluate(pt)))


def test_verify_report_json():
    doc = verify_class("C12", 10).to_json()
    assert doc["class"] == "C12" and doc["passed"] is True and doc["status"] == "checked"
    assert spectra.verify_class("C3", 5).status == "not-available"


# ---------------------------------------------------------------------------
# batch path


@pytest.mark.parametrize("idx", range(37))
def test_batch_spectra_match_exact_path(cat4, idx):
    cls = cat4.classes[idx]
    fcp = FamilyCharPoly(cls.family)
    pts = random_feasible_points(cls.family, 40, seed=idx)
    batch = fcp.spectra(np.array([[float(v) for v in p] for p in pts]))
    for row, pt in zip(batch, pts):
        assert multiset_distance(list(row), list(eigenvalues(cls.family.evaluate(pt)))) <= 1e-9
        assert list(fcp.exact_coefficients(pt)) == list(char_poly(cls.family.evaluate(pt)).coeffs)


def test_polycoeffs_validation():
    with pytest.raises(ValueError):
        PolyCoeffs((1, 2))
    assert PolyCoeffs((Q(-1), Q(1)))(Q(1)) == 0


def test_float_near_double_root_is_not_merged():
    # circulant block with eigenvalues ±τi, τ ≈ 5.8e-7: close enough that the
    # characteristic polynomial alone cannot tell them from a double root at 0
    from pds_atlas.region import ds_witness
    tau = 1e-6 / math.sqrt(3)
    spec = eigenvalues(ds_witness(0.0, tau))
    assert close(spec, [1, 1, complex(0, tau), complex(0, -tau)], 1e-9)


def test_float_repeated_roots_are_recovered():
    from pds_atlas.region import real_line_witness
    # three 2×2 blocks: eigenvalue 2a−1 with multiplicity 3
    spec = eigenvalues(real_line_witness(6, 0.505))
    assert close(spec, [1, 1, 1, 0.01, 0.01, 0.01], 1e-9)
