import cmath
import math
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pds_atlas import region
from pds_atlas.permcore import matrix_of, parse_cycles
from pds_atlas.region import (
    HullSpec, SegmentSpec, aux_extrema_report, boundary_curves, circulant_embed_witness, ds_witness,
    in_hull_union, is_permutative, real_line_witness, region_clouds, sample_region, segment_gap, star_check,
)
from pds_atlas.spectra import eigenvalues, is_doubly_stochastic, multiset_distance, random_feasible_points

S3 = math.sqrt(3)
OMEGA = complex(-0.5, S3 / 2)


def close(spec, values, tol=1e-10):
    return multiset_distance(list(spec), list(values)) <= tol


# ---------------------------------------------------------------------------
# hulls


def test_in_hull_union_examples():
    assert in_hull_union(0.9, 2)
    assert in_hull_union(complex(-0.5, 0.55), 3)
    assert not in_hull_union(complex(-0.9, 0.3), 4)
    with pytest.raises(ValueError):
        in_hull_union(0, 1)


def test_hull_spec_vertices_and_variants():
    for j in range(2, 8):
        assert all(abs(abs(v) - 1) < 1e-15 for v in HullSpec(j).vertices)
    assert HullSpec(3).contains(0) and not HullSpec(3, "punctured").contains(0.5)
    assert HullSpec(3, "punctured").contains(1) and HullSpec(3, "punctured").contains(-0.5)
    with pytest.raises(ValueError):
        HullSpec(3, "hollow")


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 7), st.floats(-1.2, 1.2), st.floats(-1.2, 1.2))
def test_hull_membership_matches_barycentric_oracle(j, x, y):
    """Brute-force oracle: z ∈ Π_j iff z is in some triangle (1, ξ^a, ξ^b)."""
    z = complex(x, y)
    v = region.roots_of_unity(j)
    inside = False
    if j == 2:
        inside = abs(y) <= 1e-12 and -1 <= x <= 1
    for a in range(1, j):
        for b in range(a + 1, j):
            p, q, r = v[0], v[a], v[b]
            m = np.array([[q.real - p.real, r.real - p.real], [q.imag - p.imag, r.imag - p.imag]])
            s, t = np.linalg.solve(m, [z.real - p.real, z.imag - p.imag])
            if s >= -1e-9 and t >= -1e-9 and s + t <= 1 + 1e-9:
                inside = True
    margin = min(abs(((z - a_) * (b_ - a_).conjugate()).imag) / abs(b_ - a_)
                 for a_, b_ in zip(v, v[1:] + v[:1]))
    if margin > 1e-8:  # skip points numerically on an edge
        assert HullSpec(j).contains(z) == inside


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=3, max_size=3), st.lists(st.floats(0, 1), min_size=3, max_size=3))
def test_hull_convexity(w1, w2):
    """Convex combinations of two members of Π_3 stay in Π_3."""
    v = region.roots_of_unity(3)

    def pt(w):
        s = sum(w) or 1.0
        return sum(wi / s * vi for wi, vi in zip(w, v))

    a, b = pt(w1), pt(w2)
    for t in (0, 0.25, 0.5, 1):
        assert HullSpec(3).contains(a * (1 - t) + b * t, 1e-9)


# ---------------------------------------------------------------------------
# segments


def test_segment_spec_validation():
    with pytest.raises(ValueError):
        SegmentSpec(1j, 1j)
    with pytest.raises(ValueError):
        region.SEGMENT_VERTICAL.probes(2)
    assert len(region.SEGMENT_L.probes(5)) == 5


def test_segment_probes_lie_on_their_segments():
    for p in region.VERTICAL_PROBES:
        assert region.SEGMENT_VERTICAL.contains_interior(p)
    for p in region.L_PROBES:
        assert region.SEGMENT_L.contains_interior(p)
        assert abs(p.real + S3 * p.imag - 1) < 1e-12


def test_segment_gap_errors_and_basic_values():
    with pytest.raises(ValueError):
        segment_gap(np.array([], dtype=complex), region.SEGMENT_VERTICAL)
    with pytest.raises(ValueError):
        segment_gap(np.array([0j]), region.SEGMENT_VERTICAL, [0j, 1j, 2j])
    res = segment_gap(np.array([complex(-0.5, 0.6)]), region.SEGMENT_VERTICAL, region.VERTICAL_PROBES)
    assert [round(r.gap, 12) for r in res] == [0.0, 0.1, 0.2]


def test_endpoint_attained_by_permutation_matrix():
    spec = eigenvalues(matrix_of(parse_cycles("(123)", 4)))
    assert region.point_gap(np.array(list(spec)), OMEGA) < 1e-8


# ---------------------------------------------------------------------------
# sampling


def test_sample_region_c7_grid(cat4):
    pts = list(sample_region("C7", "grid", 11, catalog=cat4))
    assert len(pts) == 11 * 4
    for p in pts:
        assert min(abs(p.eigenvalue - 1), abs(p.eigenvalue)) < 1e-9
        fam = cat4.get("C7").family
        assert fam.is_feasible(list(p.params))


def test_sample_region_c4_random(cat4):
    cloud = region_clouds("C4", "random", 1000, seed=0, catalog=cat4)[0]
    assert cloud.eigenvalues.shape == (1000, 4)
    z = cloud.eigenvalues.ravel()
    nr = z[np.abs(z.imag) > 1e-9]
    assert nr.size > 0
    assert np.all(np.abs(np.abs(nr.imag) - S3 * np.abs(nr.real)) < 1e-8)


def test_sample_region_c1_reaches_i(cat4):
    cloud = region_clouds("C1", "grid", 11, catalog=cat4)[0]
    z = cloud.eigenvalues.ravel()
    assert np.min(np.abs(z - 1j)) < 1e-9 and np.min(np.abs(z + 1j)) < 1e-9


def test_sampling_is_deterministic(cat4):
    a = region_clouds(["C3", "C30"], "random", 300, seed=5, catalog=cat4)
    b = region_clouds(["C3", "C30"], "random", 300, seed=5, catalog=cat4)
    c = region_clouds(["C3", "C30"], "random", 300, seed=6, catalog=cat4)
    for x, y in zip(a, b):
        assert np.array_equal(x.ticks, y.ticks) and np.array_equal(x.eigenvalues, y.eigenvalues)
    assert not np.array_equal(a[0].ticks, c[0].ticks)


def test_parallel_sampling_matches_serial(cat4):
    ids = ["C2", "C9", "C27"]
    serial = region_clouds(ids, "grid", 9, catalog=cat4, workers=1)
    par = region_clouds(ids, "grid", 9, catalog=cat4, workers=2)
    for x, y in zip(serial, par):
        assert x.class_id == y.class_id and np.array_equal(x.eigenvalues, y.eigenvalues)


def test_grid_covers_parameter_box(cat4):
    cloud = region_clouds("C27", "grid", 5, catalog=cat4)[0]
    fam = cat4.get("C27").family
    params = [cloud.exact_params(k) for k in range(cloud.ticks.shape[0])]
    for i, (lo, hi) in enumerate(fam.param_box):
        assert min(p[i] for p in params) == lo and max(p[i] for p in params) == hi
    assert all(fam.is_feasible(list(p)) for p in params)


def test_sample_region_rejects_unknown_class(cat4):
    with pytest.raises(KeyError):
        region_clouds("C38", catalog=cat4)


def test_cloud_eigenvalues_match_exact_path(cat4):
    cloud = region_clouds("C17", "random", 50, seed=2, catalog=cat4)[0]
    fam = cat4.get("C17").family
    for k in range(50):
        exact = eigenvalues(fam.evaluate(list(cloud.exact_params(k))))
        assert close(cloud.eigenvalues[k], exact, 1e-9)


# ---------------------------------------------------------------------------
# witnesses


def test_ds_witness_examples():
    m = ds_witness(-0.5, S3 / 2)
    p = np.array(matrix_of(parse_cycles("(132)", 4)), dtype=float)
    q = np.array(matrix_of(parse_cycles("(123)", 4)), dtype=float)
    assert np.array_equal(m, p) or np.array_equal(m, q)
    m0 = ds_witness(Q(0), Q(0))
    assert isinstance(m0[0][0], Q) and close(eigenvalues(m0), [1, 1, 0, 0], 0)
    m1 = ds_witness(-0.5, 0.6)
    assert is_doubly_stochastic(m1) and close(eigenvalues(m1), [1, 1, complex(-0.5, 0.6), complex(-0.5, -0.6)])
    r = -0.4
    m2 = ds_witness(r, (1 - r) / S3)
    assert close(eigenvalues(m2), [1, 1, complex(r, (1 - r) / S3), complex(r, -(1 - r) / S3)])


def test_ds_witness_rejects_outside_cone():
    for s, t in ((-0.6, 0), (0.5, 0.5), (1.1, 0)):
        with pytest.raises(ValueError):
            ds_witness(s, t)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.5, 1), st.floats(0, 1))
def test_ds_witness_spectrum_property(sigma, frac):
    tau = frac * (1 - sigma) / S3
    m = ds_witness(sigma, tau)
    assert is_doubly_stochastic(m) and np.all(m >= 0)
    want = [1, 1, complex(sigma, tau), complex(sigma, -tau)]
    ref = np.linalg.eigvals(m)
    assert multiset_distance(list(ref), want) <= 1e-7
    assert multiset_distance(list(eigenvalues(m)), want) <= 1e-7


def test_real_line_witness_examples():
    assert close(eigenvalues(real_line_witness(2, 0.3)), [1, -0.4])
    assert close(eigenvalues(real_line_witness(4, Q(0))), [1, 1, -1, -1], 0)
    spec = eigenvalues(real_line_witness(3, Q(1, 2)))
    assert spec.contains(0.5, 1e-12)
    for bad in ((1, 0.5), (4, 1.5), (4, -0.1)):
        with pytest.raises(ValueError):
            real_line_witness(*bad)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6), st.fractions(0, 1, max_denominator=50))
def test_real_line_witness_property(n, a):
    m = real_line_witness(n, a)
    assert is_permutative(m) and is_doubly_stochastic(m)
    spec = eigenvalues(m)
    if n == 3:
        r = math.sqrt(1 - 3 * a + 3 * a * a)
        assert spec.contains(r, 1e-9) and spec.contains(-r, 1e-9)
    else:
        assert spec.contains(float(2 * a - 1), 1e-9)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.integers(-100, 100))
def test_realize_real_covers_the_line(n, k):
    lam = Q(k, 100)
    m = region.realize_real(n, lam)
    assert is_permutative(m) and is_doubly_stochastic(m) and eigenvalues(m).contains(float(lam), 1e-9)


def test_circulant_embed_examples():
    m = circulant_embed_witness(4, 4, [Q(0), Q(1), Q(0), Q(0)])
    assert close(eigenvalues(m), [1, 1j, -1, -1j])
    w = [Q(1, 2), Q(1, 3), Q(1, 6)]
    m5 = circulant_embed_witness(5, 2, [Q(1, 2), Q(1, 2)])
    assert is_permutative(m5) and eigenvalues(m5).contains(0, 1e-12)
    for xi in region.roots_of_unity(2):
        assert eigenvalues(m5).contains(region.circulant_eigenvalue([Q(1, 2), Q(1, 2)], xi), 1e-12)
    # a 3-circulant with a zero coefficient shrinks to a 2-circulant second block
    w = [Q(2, 3), Q(0), Q(1, 3)]
    m5b = circulant_embed_witness(5, 3, w)
    spec = eigenvalues(m5b)
    assert is_permutative(m5b)
    for xi in region.roots_of_unity(3):
        assert spec.contains(region.circulant_eigenvalue(w, xi), 1e-10)
    with pytest.raises(ValueError):
        circulant_embed_witness(5, 3, [Q(1, 2), Q(1, 3), Q(1, 6)])


def test_circulant_embed_permutative_only_with_matching_blocks():
    # n=4, m=2: the second block is the same 2-circulant, so rows are rearrangements
    m = circulant_embed_witness(4, 2, [Q(1, 3), Q(2, 3)])
    assert is_permutative(m)
    # a hand-built 2⊕2 with different blocks is not permutative
    other = [[Q(1, 3), Q(2, 3), 0, 0], [Q(2, 3), Q(1, 3), 0, 0], [0, 0, Q(1, 2), Q(1, 2)], [0, 0, Q(1, 2), Q(1, 2)]]
    assert not is_permutative(other)


def test_circulant_embed_errors():
    with pytest.raises(ValueError):
        circulant_embed_witness(4, 3, [Q(1, 3)] * 3)  # no zero to drop for the order-1 block
    with pytest.raises(ValueError):
        circulant_embed_witness(4, 2, [Q(1, 2)])
    with pytest.raises(ValueError):
        circulant_embed_witness(4, 2, [Q(1, 2), Q(1, 3)])
    with pytest.raises(ValueError):
        circulant_embed_witness(4, 2, [Q(1, 2), Q(1, 2)], trace_zero=True)


def test_trace_zero_embedding():
    m = circulant_embed_witness(5, 2, [Q(0), Q(1)], trace_zero=True)
    assert sum(m[i][i] for i in range(5)) == 0 and is_permutative(m)
    m = circulant_embed_witness(7, 4, [Q(0), Q(1, 2), Q(1, 2), Q(0)], trace_zero=True)
    assert sum(m[i][i] for i in range(7)) == 0 and is_permutative(m)
    with pytest.raises(ValueError):
        circulant_embed_witness(5, 3, [Q(0), Q(1, 2), Q(1, 2)], trace_zero=True)


@pytest.mark.parametrize("mesh", ["pi3", "pi4"])
def test_circulant_meshes(mesh):
    pts = region.pi3_mesh(13) if mesh == "pi3" else region.pi4_mesh(7)
    n = 3 if mesh == "pi3" else 4
    assert len(pts) >= 100
    for w, z in pts:
        assert HullSpec(n).contains(z, 1e-9)
        assert eigenvalues(circulant_embed_witness(n, n, list(w))).contains(z, 1e-9)


# ---------------------------------------------------------------------------
# star-shapedness


def test_star_check_examples():
    d = matrix_of(parse_cycles("(1234)", 4))
    t = Q(1, 2)
    blend = [[t * v + (1 - t) / 4 for v in r] for r in d]
    assert eigenvalues(blend).contains(0.5j, 1e-12)
    assert star_check(d, Q(1, 2)) and star_check(d, 1) and star_check(d, 0)
    with pytest.raises(ValueError):
        star_check([[Q(1), Q(0)], [Q(1), Q(0)]], Q(1, 2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 36), st.integers(0, 10**5), st.integers(0, 16))
def test_star_property(cat4, idx, seed, k):
    cls = cat4.classes[idx]
    pt = random_feasible_points(cls.family, 1, seed=seed, denominator=32)[0]
    assert star_check(cls.family.evaluate(pt), Q(k, 16))


# ---------------------------------------------------------------------------
# boundary curves


def test_boundary_endpoints():
    curves = boundary_curves(11, 11)
    a1, b1 = curves["A"][-1], curves["B"][-1]
    assert a1.t == 1 and b1.t == 1
    assert abs(a1.eigenvalue - OMEGA) < 1e-12
    assert abs(abs(b1.eigenvalue) - 1) < 1e-12
    assert float(curves["A"][0].t) == pytest.approx(0.82032)
    assert float(curves["B"][0].t) == pytest.approx(0.76786)


def test_boundary_matrices_permutative():
    for k in range(11):
        t = Q(k, 10)
        for m in (region.boundary_matrix_a(t), region.boundary_matrix_b(t)):
            assert all(sum(r) == 1 for r in m) and is_permutative(m)


def test_boundary_permutation_endpoints_cycle_types():
    a = np.array(region.boundary_matrix_a(Q(1)), dtype=float)
    b = np.array(region.boundary_matrix_b(Q(1)), dtype=float)
    assert close(eigenvalues(a), [1, 1, OMEGA, OMEGA.conjugate()])
    # B(1) is also a permutation matrix of cycle type (3)+(1)
    assert np.all((b == 0) | (b == 1))
    assert close(eigenvalues(b), [1, 1, OMEGA, OMEGA.conjugate()])


def test_boundary_csv_and_gaps():
    curves = boundary_curves(5, 5, region.EXTENDED_SCAN, region.EXTENDED_SCAN)
    text = region.boundary_csv(curves)
    lines = text.splitlines()
    assert lines[0] == "curve,t,re,im" and len(lines) == 11
    assert text == region.boundary_csv(boundary_curves(5, 5, region.EXTENDED_SCAN, region.EXTENDED_SCAN))
    with pytest.raises(ValueError):
        boundary_curves(1, 5)


# ---------------------------------------------------------------------------
# auxiliary quadratics


def test_aux_extrema_examples():
    f = region.AUX_FUNCTIONS
    assert f["f"](Q(1, 4), Q(1, 4)) == 0
    assert f["f1"](Q(0), Q(0)) == -1
    assert f["f4"](Q(3, 14), Q(0)) == Q(4, 7)
    rep = aux_extrema_report(100)
    assert (rep["f"].maximum, rep["f"].minimum) == (2, 0)
    assert (rep["f1"].maximum, rep["f1"].minimum) == (2, -1)
    assert (rep["f2"].maximum, rep["f2"].minimum) == (Q(2, 7), -1)
    assert (rep["f3"].maximum, rep["f3"].minimum) == (Q(1, 2), Q(-1, 4))
    assert (rep["f4"].maximum, rep["f4"].minimum) == (Q(4, 7), Q(-4, 9))
    assert rep["f4"].argmax == (Q(3, 14), Q(0))
    with pytest.raises(ValueError):
        aux_extrema_report(99)


@pytest.mark.parametrize("name", ["f", "f1", "f2", "f3", "f4"])
def test_aux_extrema_against_dense_float_grid(name):
    fn = region.AUX_FUNCTIONS[name]
    rep = aux_extrema_report(100)[name]
    g = np.linspace(0, 0.5, 401)
    vals = [float(fn(Q(a), Q(b))) for a in g[::8] for b in g[::8]]
    assert max(vals) <= float(rep.maximum) + 1e-12 and min(vals) >= float(rep.minimum) - 1e-12
    assert float(fn(*rep.argmax)) == float(rep.maximum)


# ---------------------------------------------------------------------------
# output


def test_region_csv_format(cat4, tmp_path):
    clouds = region_clouds(["C7", "C27"], "grid", 3, catalog=cat4)
    path = tmp_path / "c.csv"
    rows = region.write_region_csv(path, clouds)
    lines = path.read_text().splitlines()
    assert lines[0] == "class_id,p1,p2,p3,re,im"
    assert rows == len(lines) - 1 == sum(len(c) for c in clouds)
    c7 = [l for l in lines[1:] if l.startswith("C7,")]
    assert all(l.split(",")[2:4] == ["", ""] for l in c7)
    c27 = [l for l in lines[1:] if l.startswith("C27,")]
    assert all(l.split(",")[3] == "" and l.split(",")[2] != "" for l in c27)


def test_region_svg(cat4):
    svg = region.region_svg(region_clouds("C4", "grid", 11, catalog=cat4))
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polygon") == 2


def test_complex_extent(cat4):
    cloud = region_clouds("C9", "grid", 201, catalog=cat4)[0]
    re_, im_ = region.complex_extent(cloud)
    assert re_ == pytest.approx(1 / 8, abs=1e-3) and im_ == pytest.approx(math.sqrt(7) / 8, abs=1e-3)
    assert region.complex_extent(region_clouds("C7", "grid", 5, catalog=cat4)[0]) is None
