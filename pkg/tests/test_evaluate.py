import numpy as np
import pytest

from sdbscan import nmi
from sdbscan.evaluate import summarize_labels


def test_identical_labelings_give_one():
    assert nmi([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0, abs=1e-9)
    assert nmi([2, 2, 5, 5, 7], [2, 2, 5, 5, 7]) == pytest.approx(1.0, abs=1e-9)


def test_constant_side_gives_zero():
    assert nmi([0, 0, 0, 0], [0, 1, 2, 3]) == 0.0
    assert nmi([0, 1, 0, 1], [5, 5, 5, 5]) == 0.0
    assert nmi([1, 1, 1], [2, 2, 2]) == 0.0


def test_four_point_frozen_value():
    # value computed by direct contingency/entropy evaluation in an
    # independent script: H(A)=ln 2, H(B)=0.562335, I=0.215762
    assert nmi([0, 0, 1, 1], [0, 1, 1, 1]) == pytest.approx(0.343711018485451, abs=1e-9)


def test_refinement_frozen_value():
    assert nmi([0, 0, 0, 1, 1, 1], [0, 1, 2, 3, 3, 4]) == pytest.approx(
        0.615076288544517, abs=1e-9
    )


def test_permutation_invariance_and_symmetry():
    rng = np.random.default_rng(0)
    a = rng.integers(-1, 4, 60)
    b = rng.integers(-1, 4, 60)
    base = nmi(a, b)
    assert nmi(b, a) == pytest.approx(base, abs=1e-12)
    # relabel a: -1 -> 9, 0 -> 7, 1 -> 0, 2 -> 5, 3 -> 1
    remap = {-1: 9, 0: 7, 1: 0, 2: 5, 3: 1}
    a2 = np.array([remap[int(v)] for v in a])
    assert nmi(a2, b) == pytest.approx(base, abs=1e-12)


def test_noise_is_its_own_label():
    # treating -1 as a cluster: a perfect match including noise scores 1.0
    assert nmi([0, 0, 1, 1, -1], [1, 1, 0, 0, -1]) == pytest.approx(1.0, abs=1e-9)
    # but disagreeing about noise costs score
    assert nmi([0, 0, 1, 1, -1], [0, 0, 1, 1, 1]) < 1.0


def test_bounds_on_random_inputs():
    rng = np.random.default_rng(4)
    for _ in range(50):
        n = int(rng.integers(2, 40))
        a = rng.integers(-1, 5, n)
        b = rng.integers(-1, 5, n)
        v = nmi(a, b)
        assert 0.0 <= v <= 1.0


def test_length_mismatch_raises():
    with pytest.raises(ValueError, match="differ in length"):
        nmi([0, 1], [0, 1, 2])


def test_summarize_labels():
    c, noise = summarize_labels(np.array([0, 0, 1, -1, 2, -1]))
    assert c == 3
    assert noise == pytest.approx(2 / 6)
