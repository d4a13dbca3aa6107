import numpy as np
import pytest

from sdbscan import PreparedPoints, distance, load_dataset, normalize_to_sphere
from sdbscan.data import canonical_measure


def test_distance_cosine_basics():
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    assert distance(e1, e1, "cosine") == 0.0
    assert distance(e1, e2, "cosine") == pytest.approx(1.0)
    assert distance(e1, -e1, "cosine") == pytest.approx(2.0)
    # scale invariance
    assert distance(3.0 * e1, 5.0 * e2, "cosine") == pytest.approx(1.0)


def test_distance_l2_l1():
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([4.0, 0.0, 3.0])
    assert distance(x, y, "l2") == pytest.approx(np.sqrt(9.0 + 4.0))
    assert distance(x, y, "l1") == pytest.approx(5.0)
    assert distance(x, x, "l2") == 0.0
    assert distance(x, x, "l1") == 0.0


def test_distance_chi2_js_frozen_values():
    # independent direct-formula evaluation:
    # chi2 d([1,2,3],[3,2,1]) and js on the same pair
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([3.0, 2.0, 1.0])
    assert distance(x, y, "chi2") == pytest.approx(0.166666666666667, abs=1e-12)
    assert distance(x, y, "js") == pytest.approx(0.125814583693912, abs=1e-12)
    # disjoint-support halves
    x2 = np.array([0.5, 0.5, 0.0])
    y2 = np.array([0.0, 0.5, 0.5])
    assert distance(x2, y2, "chi2") == pytest.approx(0.5, abs=1e-12)
    assert distance(x2, y2, "js") == pytest.approx(0.5, abs=1e-12)


def test_histogram_distances_self_zero_and_scale_free():
    rng = np.random.default_rng(0)
    x = rng.uniform(0.0, 1.0, 8)
    for m in ("chi2", "js"):
        assert distance(x, x, m) == pytest.approx(0.0, abs=1e-12)
        assert distance(x, 7.0 * x, m) == pytest.approx(0.0, abs=1e-12)


def test_distance_symmetry():
    rng = np.random.default_rng(3)
    for m in ("cosine", "l2", "l1", "chi2", "js"):
        x = rng.uniform(0.1, 1.0, 10)
        y = rng.uniform(0.1, 1.0, 10)
        assert distance(x, y, m) == distance(y, x, m)


def test_distance_errors():
    with pytest.raises(ValueError, match="unknown distance measure"):
        distance(np.ones(2), np.ones(2), "euclid")
    with pytest.raises(ValueError, match="dimension mismatch"):
        distance(np.ones(2), np.ones(3), "l2")
    with pytest.raises(ValueError, match="non-negative"):
        distance(np.array([1.0, -1.0]), np.ones(2), "chi2")
    with pytest.raises(ValueError, match="zero vectors"):
        distance(np.zeros(2), np.ones(2), "cosine")


def test_canonical_measure_normalizes_case():
    assert canonical_measure(" Cosine ") == "cosine"


def test_normalize_to_sphere():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((20, 5)) * 10.0
    U = normalize_to_sphere(X)
    assert np.allclose(np.linalg.norm(U, axis=1), 1.0, atol=1e-12)
    with pytest.raises(ValueError, match="point 1"):
        normalize_to_sphere(np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_load_dense_csv(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("1.0,2.0,0\n3.0,4.0,1\n0.5,0.25,-1\n")
    ds = load_dataset(p, label_column=-1)
    assert ds.points.shape == (3, 2)
    assert ds.labels.tolist() == [0, 1, -1]
    ds2 = load_dataset(p)
    assert ds2.points.shape == (3, 3)
    assert ds2.labels is None


def test_load_dense_csv_reports_bad_line(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("1.0,2.0\n3.0,oops\n")
    with pytest.raises(ValueError, match="line 2"):
        load_dataset(p)
    q = tmp_path / "ragged.csv"
    q.write_text("1.0,2.0\n3.0\n")
    with pytest.raises(ValueError, match="line 2"):
        load_dataset(q)


def test_load_sparse_libsvm(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("1 1:0.5 3:2.0\n-1 2:1.0\n")
    ds = load_dataset(p, fmt="sparse-libsvm")
    assert ds.points.shape == (2, 3)
    assert ds.points[0].tolist() == [0.5, 0.0, 2.0]
    assert ds.points[1].tolist() == [0.0, 1.0, 0.0]
    assert ds.labels.tolist() == [1, -1]
    bad = tmp_path / "bad.txt"
    bad.write_text("1 0:2.0\n")
    with pytest.raises(ValueError, match="line 1"):
        load_dataset(bad, fmt="sparse-libsvm")


def test_prepared_points_match_scalar_distance():
    rng = np.random.default_rng(5)
    X = rng.uniform(0.05, 1.0, (12, 6))
    for m in ("cosine", "l2", "l1", "chi2", "js"):
        prep = PreparedPoints(X, m)
        ids = np.arange(12)
        for q in range(12):
            got = prep.distances_from(q, ids)
            want = [distance(X[q], X[j], m) for j in range(12)]
            assert np.allclose(got, want, atol=1e-12)
            assert got[q] == pytest.approx(0.0, abs=1e-9)


def test_prepared_points_reverse_distance_bitwise_equal():
    # the bidirectional neighborhood insert relies on d(q,x) == d(x,q) bitwise
    rng = np.random.default_rng(6)
    X = rng.uniform(0.05, 1.0, (30, 9))
    for m in ("cosine", "l2", "l1", "chi2", "js"):
        prep = PreparedPoints(X, m)
        for q in range(0, 30, 5):
            for x in range(30):
                fwd = prep.distances_from(q, np.array([x]))[0]
                rev = prep.distances_from(x, np.array([q]))[0]
                assert fwd == rev
