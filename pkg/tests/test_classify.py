import numpy as np
import pytest
from hypothesis import given, strategies as st

from eigenexpr import pca
from eigenexpr.classify import ClassifierConfig, batch_classify, centroids, classify
from eigenexpr.errors import ClassifyError, DimensionError
from eigenexpr.ingest import Dataset, Sample
from eigenexpr.pca import TrainConfig

FULL = TrainConfig(variance_threshold=1.0)


def blobs(seed, per_class=5, n=36, classes=("happy", "sad", "anger"), spread=0.08):
    rng = np.random.default_rng(seed)
    centers = rng.random((len(classes), n))
    cols, labels = [], []
    for i in range(per_class):
        for c, label in enumerate(classes):
            cols.append(np.clip(centers[c] + rng.normal(0, spread, n), 0, 1))
            labels.append(label)
    return np.column_stack(cols), labels, centers


def raw_nn(train, labels, probe):
    """Brute-force 1-NN in raw pixel space; ties go to the lowest index."""
    d = [float(np.sum((train[:, j] - probe) ** 2)) for j in range(train.shape[1])]
    return labels[min(range(len(d)), key=lambda j: (d[j], j))]


def test_self_match():
    x, labels, _ = blobs(0)
    model = pca.fit(x, labels, None, 6, 6, FULL)
    for j in range(model.m):
        r = classify(model, x[:, j])
        assert r.label == labels[j] and r.distance <= 1e-9
        assert r.ranked[0][0] == j


def test_symmetric_tie_goes_to_lowest_index():
    x = np.column_stack([np.full(64, 0.75), np.full(64, 0.25)])
    model = pca.fit(x, ["happy", "sad"], None, 8, 8, FULL)
    w = model.train_weights[:, 0]
    assert np.array_equal(model.train_weights[:, 1], -w)
    r = classify(model, model.mean_face)
    assert r.ranked[0][2] == r.ranked[1][2]
    assert r.label == "happy" and r.ranked[0][0] == 0


def test_agrees_with_raw_space_oracle():
    x, labels, centers = blobs(1)
    model = pca.fit(x, labels, None, 6, 6, FULL)
    rng = np.random.default_rng(99)
    for i in range(60):
        probe = np.clip(centers[i % 3] + rng.normal(0, 0.15, x.shape[0]), 0, 1)
        assert classify(model, probe).label == raw_nn(x, labels, probe)


def test_ranked_order_and_total_tiebreak():
    x, labels, _ = blobs(2)
    model = pca.fit(x, labels, None, 6, 6, FULL)
    r = classify(model, np.full(36, 0.5))
    keys = [(d, i) for i, _, d in r.ranked]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    assert r.label == r.ranked[0][1] and len(r.ranked) == model.m


def test_centroids():
    x, labels, _ = blobs(3, per_class=1)
    model = pca.fit(x, labels, None, 6, 6, FULL)
    cents = centroids(model)
    for j, label in enumerate(labels):
        np.testing.assert_array_equal(cents[label], model.train_weights[:, j])

    sym = np.column_stack([np.full(16, 0.75), np.full(16, 0.25), np.full(16, 0.5) + np.eye(16)[0] * 0.1])
    model = pca.fit(sym, ["a", "a", "b"], None, 4, 4, FULL)
    w = model.train_weights
    # hand sum of the two "a" columns
    expected = np.array([(w[i, 0] + w[i, 1]) / 2 for i in range(model.k)])
    np.testing.assert_allclose(centroids(model)["a"], expected, atol=1e-15)

    z = np.column_stack([np.full(16, 0.75), np.full(16, 0.25)])
    np.testing.assert_array_equal(centroids(pca.fit(z, ["x", "x"], None, 4, 4, FULL))["x"], 0.0)


def test_centroid_three_sample_hand_oracle():
    model = pca.EigenModel(
        width=1, height=2, mean_face=np.zeros(2), eigenfaces=np.eye(2), eigenvalues=np.array([2.0, 1.0]),
        train_weights=np.array([[1.0, 2.0, 6.0], [0.0, 3.0, -3.0]]),
        train_labels=["a", "a", "a"], train_subjects=["", "", ""], total_variance=3.0)
    np.testing.assert_allclose(centroids(model)["a"], [3.0, 0.0])


def test_nearest_centroid_equals_nn_with_one_sample_per_label():
    x, labels, _ = blobs(4, per_class=1, classes=("happy", "sad", "fear", "anger"))
    model = pca.fit(x, labels, None, 6, 6, FULL)
    rng = np.random.default_rng(0)
    for metric in ("euclidean", "eigen_weighted"):
        for _ in range(20):
            probe = rng.random(36)
            nn = classify(model, probe, ClassifierConfig("nearest_neighbor", metric))
            nc = classify(model, probe, ClassifierConfig("nearest_centroid", metric))
            assert nn == nc


def test_eigen_weighted_metric_hand_oracle():
    model = pca.EigenModel(
        width=1, height=2, mean_face=np.zeros(2), eigenfaces=np.eye(2), eigenvalues=np.array([4.0, 1.0]),
        train_weights=np.array([[2.0, 0.0], [0.0, 1.5]]),
        train_labels=["a", "b"], train_subjects=["", ""], total_variance=5.0)
    r = classify(model, np.zeros(2), ClassifierConfig(metric="eigen_weighted"))
    # sqrt(2^2/4) = 1 for "a", sqrt(1.5^2/1) = 1.5 for "b"
    assert r.label == "a" and r.distance == pytest.approx(1.0)
    assert classify(model, np.zeros(2)).label == "b"


def test_eigen_weighted_needs_positive_eigenvalues():
    model = pca.EigenModel(
        width=1, height=1, mean_face=np.zeros(1), eigenfaces=np.eye(1), eigenvalues=np.zeros(1),
        train_weights=np.array([[1.0]]), train_labels=["a"], train_subjects=[""], total_variance=0.0)
    with pytest.raises(ClassifyError):
        classify(model, np.zeros(1), ClassifierConfig(metric="eigen_weighted"))


def test_rejection_flag():
    x, labels, _ = blobs(5)
    model = pca.fit(x, labels, None, 6, 6, FULL)
    far = np.ones(36) * 5
    r = classify(model, far, ClassifierConfig(reject_threshold=0.01))
    assert r.rejected and r.label == r.ranked[0][1]
    assert not classify(model, x[:, 0], ClassifierConfig(reject_threshold=0.01)).rejected
    with pytest.raises(ValueError):
        ClassifierConfig(reject_threshold=0.0)


def test_dimension_mismatch():
    x, labels, _ = blobs(6)
    model = pca.fit(x, labels, None, 6, 6, FULL)
    with pytest.raises(DimensionError):
        classify(model, np.zeros(5))


@given(c=st.floats(0.2, 5.0), seed=st.integers(0, 1000))
def test_argmin_invariant_under_pixel_scaling(c, seed):
    x, labels, centers = blobs(7)
    probe = np.clip(centers[seed % 3] + np.random.default_rng(seed).normal(0, 0.2, 36), 0, 1)
    a = classify(pca.fit(x, labels, None, 6, 6, FULL), probe)
    b = classify(pca.fit(c * x, labels, None, 6, 6, FULL), c * probe)
    assert a.label == b.label


def _dataset(x, labels, splits):
    samples = [Sample(x[:, j], labels[j], f"s{j}", splits[j], f"img{j}") for j in range(x.shape[1])]
    return Dataset(samples, 6, 6)


def test_batch_classify():
    x, labels, _ = blobs(8)
    splits = ["train"] * 12 + ["test"] * 3
    ds = _dataset(x, labels, splits)
    model = pca.train(ds, FULL)
    out = batch_classify(model, ds)
    tests = [s for s in ds.samples if s.split == "test"]
    assert [s for s, _ in out] == tests
    assert [r for _, r in out] == [classify(model, s.pixels) for s in tests]

    assert batch_classify(model, _dataset(x[:, :12], labels[:12], ["train"] * 12)) == []
    single = _dataset(x[:, :13], labels[:13], ["train"] * 12 + ["test"])
    (s, r), = batch_classify(model, single)
    assert r == classify(model, s.pixels)

    perm = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 14, 12, 13]
    permuted = _dataset(x[:, perm], [labels[i] for i in perm], splits)
    by_path = {s.source_path: r for s, r in out}
    for (s, r), src in zip(batch_classify(model, permuted), perm[12:]):
        assert r == by_path[f"img{src}"]


def test_batch_classify_respects_thread_cap(monkeypatch):
    x, labels, _ = blobs(9)
    ds = _dataset(x, labels, ["train"] * 9 + ["test"] * 6)
    model = pca.train(ds, FULL)
    monkeypatch.setenv("EIGENEXPR_THREADS", "1")
    serial = batch_classify(model, ds)
    monkeypatch.setenv("EIGENEXPR_THREADS", "4")
    assert batch_classify(model, ds) == serial
