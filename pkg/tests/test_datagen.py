import math

import numpy as np
import pytest

from rdoskit.core import ParameterError
from rdoskit.datagen import (
    COSINE_OUTLIERS,
    TWO_GAUSSIAN_CENTERS,
    TWO_GAUSSIAN_OUTLIERS,
    SynthSpec,
    distance_to_cosine,
    gen_cosine,
    gen_two_gaussians,
    generate,
)


def test_two_gaussians_defaults():
    data = gen_two_gaussians()
    assert data.n == 203 and data.labels.sum() == 3
    np.testing.assert_array_equal(np.flatnonzero(data.labels), [200, 201, 202])
    np.testing.assert_array_equal(data.points[200:], TWO_GAUSSIAN_OUTLIERS)


def test_two_gaussians_without_outliers():
    data = gen_two_gaussians(SynthSpec(outliers=np.empty((0, 2))))
    assert data.n == 200 and not data.labels.any()


@pytest.mark.parametrize("variant", ["two_gaussians", "cosine"])
def test_seed_determinism(variant):
    a = generate(SynthSpec(variant, seed=7))
    b = generate(SynthSpec(variant, seed=7))
    c = generate(SynthSpec(variant, seed=8))
    assert a.points.tobytes() == b.points.tobytes()
    assert a.points.tobytes() != c.points.tobytes()


def test_cosine_defaults():
    data = gen_cosine()
    assert data.labels.sum() == 4 and data.n == 404
    x1 = data.points[:400, 0]
    assert x1.min() >= 0 and x1.max() <= 4 * math.pi


def test_cosine_noiseless():
    data = gen_cosine(SynthSpec("cosine", n=50, noise_sigma2=0.0))
    inl = data.points[~data.labels]
    np.testing.assert_array_equal(inl[:, 1], np.cos(inl[:, 0]))


def test_planted_outliers_are_far():
    for o in TWO_GAUSSIAN_OUTLIERS:
        assert np.linalg.norm(TWO_GAUSSIAN_CENTERS - o, axis=1).min() >= 5 * 0.1
    for o in COSINE_OUTLIERS:
        assert distance_to_cosine(o) >= 5 * math.sqrt(0.1)


def test_cluster_means_converge():
    n = 100
    means = np.array([gen_two_gaussians(SynthSpec(seed=s)).points[:200].reshape(2, n, 2).mean(axis=1) for s in range(40)])
    avg = means.mean(axis=0)
    # average of 40 independent sample means; its std is 0.1 / sqrt(40 n)
    assert np.all(np.abs(avg - TWO_GAUSSIAN_CENTERS) <= 3 * 0.1 / math.sqrt(40 * n))
    # and every single run is within a generous 5 sigma
    assert np.all(np.abs(means - TWO_GAUSSIAN_CENTERS) <= 5 * 0.1 / math.sqrt(n))


def test_label_counts_match_outliers():
    for k in range(0, 5):
        out = np.full((k, 2), 10.0) + np.arange(k)[:, None]
        data = gen_cosine(SynthSpec("cosine", n=30, outliers=out))
        assert data.labels.sum() == k and data.n == 30 + k


def test_unknown_variant():
    with pytest.raises(ParameterError):
        generate(SynthSpec("spiral"))
