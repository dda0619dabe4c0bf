import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dwtembed.compress import CompressionSpec, compress_table
from dwtembed.embeddings import EmbeddingTable
from dwtembed.evaluation import (
    CategorizationDataset,
    DatasetFormatError,
    DegenerateCorrelationError,
    EvalReport,
    InsufficientDataError,
    WordSimDataset,
    cosine,
    eval_categorization,
    eval_sts,
    eval_word_similarity,
    kmeans,
    knn,
    load_categorization,
    load_sts,
    load_wordsim,
    pearson,
    purity,
    rank_average,
    spearman,
)
from dwtembed.sentence import SentenceEncoderConfig, encode_tokens

from .oracles import best_partition, pearson_naive, purity_naive, ranks_naive, spearman_naive

PLANE = EmbeddingTable(
    ("a", "b", "c", "d", "e"),
    np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [-1.0, 0.0], [1.0, 2.0]]),
)
# cosines: ab=1/sqrt2, ac=0, ad=-1, be=3/sqrt10, ce=2/sqrt5
FIVE_PAIRS = WordSimDataset(
    (("a", "b", 5.0), ("a", "c", 3.0), ("a", "d", 1.0), ("b", "e", 4.0), ("c", "e", 9.0)),
    "toy5",
)


def clustered_instance(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, 9))
    k = int(rng.integers(2, 4))
    centers = rng.standard_normal((k, 3)) * 6
    pts = centers[rng.integers(0, k, n)] + rng.standard_normal((n, 3))
    labels = [f"L{x}" for x in rng.integers(0, k, n)]
    return pts, k, labels


def test_cosine_examples():
    v = np.array([0.3, -2.0, 1.0])
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-15)
    assert cosine(v, -v) == pytest.approx(-1.0, abs=1e-15)
    assert cosine([1, 0], [0, 1]) == 0.0
    with pytest.raises(ValueError):
        cosine([0, 0], [1, 0])
    with pytest.raises(ValueError):
        cosine([1, 0], [1, 0, 0])


def test_spearman_examples():
    assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    assert spearman([1, 2, 2, 3], [1, 2, 3, 4]) == pytest.approx(spearman_naive([1, 2, 2, 3], [1, 2, 3, 4]), abs=1e-12)
    assert rank_average([1, 2, 2, 3]).tolist() == [1.0, 2.5, 2.5, 4.0]


def test_correlation_errors():
    with pytest.raises(ValueError):
        spearman([1, 2, 3], [1, 2])
    with pytest.raises(DegenerateCorrelationError):
        spearman([1, 1, 1], [1, 2, 3])
    with pytest.raises(DegenerateCorrelationError):
        pearson([1, 2, 3], [5, 5, 5])
    with pytest.raises(InsufficientDataError):
        pearson([1], [2])


def test_pearson_examples():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 1, -1]) == pytest.approx(-1.0)
    xs, ys = [0.5, 1.5, -2.0, 4.0], [1.0, 0.0, 2.0, 3.5]
    assert pearson(xs, ys) == pytest.approx(pearson_naive(xs, ys), abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=2, max_size=30), st.integers(0, 2**32 - 1))
def test_ranks_match_counting(xs, seed):
    assert rank_average(xs).tolist() == ranks_naive(xs)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 40), st.integers(0, 2**32 - 1))
def test_spearman_monotone_invariance(n, seed):
    rng = np.random.default_rng(seed)
    x, y = rng.standard_normal((2, n))
    base = spearman(x, y)
    assert spearman(np.exp(x), y) == pytest.approx(base, abs=1e-12)
    assert spearman(x, 3.0 * y**3 + 1.0) == pytest.approx(base, abs=1e-12)


def test_word_similarity_hand_scored():
    report = eval_word_similarity(PLANE, FIVE_PAIRS)
    # model ranks 3,2,1,5,4 vs gold ranks 4,2,1,3,5: 1 - 6*6/(5*24)
    assert report.value == pytest.approx(0.7, abs=1e-12)
    assert (report.n_evaluated, report.n_skipped_oov) == (5, 0)
    assert report.metric == "spearman"


def test_word_similarity_perfect_and_oov():
    ds = WordSimDataset((("a", "b", 2.0), ("a", "c", 1.0), ("a", "d", 0.0), ("a", "zzz", 5.0)))
    report = eval_word_similarity(PLANE, ds)
    assert report.value == pytest.approx(1.0)
    assert report.n_evaluated + report.n_skipped_oov == len(ds.pairs)
    assert report.n_skipped_oov == 1


def test_word_similarity_all_oov():
    with pytest.raises(InsufficientDataError):
        eval_word_similarity(PLANE, WordSimDataset((("x", "y", 1.0), ("p", "q", 2.0))))


@pytest.mark.parametrize("alpha", [0.25, 2.0, 8.0])
def test_word_similarity_scale_invariant(alpha):
    table = EmbeddingTable(("a", "b", "c", "d", "e"), np.random.default_rng(1).standard_normal((5, 9)))
    scaled = table.replace(alpha * table.vectors)
    assert eval_word_similarity(scaled, FIVE_PAIRS) == eval_word_similarity(table, FIVE_PAIRS)


def test_word_similarity_full_level_compression_unchanged():
    table = EmbeddingTable(("a", "b", "c", "d", "e"), np.random.default_rng(2).standard_normal((5, 300)))
    compressed = compress_table(table, CompressionSpec("coif2", ("A", "D")))
    before = eval_word_similarity(table, FIVE_PAIRS)
    after = eval_word_similarity(compressed, FIVE_PAIRS)
    assert after.value == pytest.approx(before.value, abs=1e-12)
    assert (after.n_evaluated, after.n_skipped_oov) == (before.n_evaluated, before.n_skipped_oov)


def test_knn():
    tri = EmbeddingTable(("a", "b", "c"), np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
    assert knn(tri, "a", 1) == [("b", pytest.approx(1 / math.sqrt(2)))]
    # a and c tie for b; vocabulary order decides
    assert [w for w, _ in knn(tri, "b", 2)] == ["a", "c"]
    assert [w for w, _ in knn(tri, "a", 10)] == ["b", "c"]
    with pytest.raises(KeyError):
        knn(tri, "zzz", 1)
    with pytest.raises(ValueError):
        knn(tri, "a", 0)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_knn_properties(n, k, seed):
    words = tuple(f"w{i}" for i in range(n))
    table = EmbeddingTable(words, np.random.default_rng(seed).standard_normal((n, 6)))
    result = knn(table, "w0", k)
    assert "w0" not in [w for w, _ in result]
    assert len(result) == min(k, n - 1)
    sims = [s for _, s in result]
    assert all(a >= b for a, b in zip(sims, sims[1:]))


def test_purity_basics():
    assert purity([0, 0, 1, 1], ["x", "x", "y", "y"]) == 1.0
    assert purity([0, 0, 0, 1], ["x", "y", "y", "x"]) == pytest.approx(0.75)
    assert purity([1, 1, 0, 0], ["y", "y", "x", "x"]) == 1.0


def test_categorization_separated_clouds():
    rng = np.random.default_rng(0)
    pts = np.vstack([rng.normal(0, 0.1, (6, 4)), rng.normal(5, 0.1, (6, 4))])
    words = tuple(f"w{i}" for i in range(12))
    table = EmbeddingTable(words, pts)
    labels = ["animal"] * 6 + ["tool"] * 6
    report = eval_categorization(table, CategorizationDataset(tuple(zip(words, labels))), seed=3)
    assert report.value == 1.0
    swapped = ["tool"] * 6 + ["animal"] * 6
    assert eval_categorization(table, CategorizationDataset(tuple(zip(words, swapped))), seed=3).value == 1.0


def test_categorization_too_few_words():
    ds = CategorizationDataset((("a", "x"), ("zz", "y"), ("qq", "y")))
    with pytest.raises(InsufficientDataError):
        eval_categorization(PLANE, ds)
    with pytest.raises(DatasetFormatError):
        CategorizationDataset((("a", "x"), ("b", "x")))


def test_categorization_six_points_exhaustive():
    pts = np.array([[0.0, 0.0], [0.3, 0.1], [0.1, 0.4], [4.0, 4.0], [4.2, 3.9], [0.2, 3.5]])
    labels = ["p", "p", "q", "q", "q", "p"]
    assign, _ = best_partition(pts, 2)
    clusters, _ = kmeans(pts, 2, seed=0)
    assert purity(clusters, labels) == pytest.approx(purity_naive(assign, labels), abs=1e-12)


@pytest.mark.parametrize("seed", range(25))
def test_kmeans_matches_exhaustive_partition(seed):
    pts, k, labels = clustered_instance(seed)
    assign, inertia = best_partition(pts, k)
    clusters, got = kmeans(pts, k, seed=seed)
    assert got == pytest.approx(inertia, abs=1e-9)
    assert purity(clusters, labels) == pytest.approx(purity_naive(assign, labels), abs=1e-12)


def test_kmeans_deterministic():
    pts = np.random.default_rng(5).standard_normal((30, 4))
    a = kmeans(pts, 3, seed=9)
    b = kmeans(pts, 3, seed=9)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_purity_bounds(seed):
    rng = np.random.default_rng(seed)
    n = 20
    words = tuple(f"w{i}" for i in range(n))
    labels = [f"c{x}" for x in rng.integers(0, 3, n)]
    if len(set(labels)) < 2:
        return
    report = eval_categorization(
        EmbeddingTable(words, rng.standard_normal((n, 5))),
        CategorizationDataset(tuple(zip(words, labels))),
        seed=seed,
    )
    most = max(labels.count(c) for c in set(labels))
    assert most / n - 1e-12 <= report.value <= 1.0


STS_TABLE = EmbeddingTable(("x", "y", "z"), np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]))


def test_sts_avg_hand_computed():
    pairs = [("x", "x y", 1.0), ("x", "y", 0.0), ("z", "x y", 3.0)]
    report = eval_sts(pairs, STS_TABLE, SentenceEncoderConfig(), average=True)
    expected = pearson_naive([1 / math.sqrt(2), 0.0, 1.0], [1.0, 0.0, 3.0])
    assert report.value == pytest.approx(expected, abs=1e-12)
    assert report.metric == "pearson"


def test_sts_identical_sentences():
    table = EmbeddingTable(("a", "b", "c", "d"), np.random.default_rng(0).standard_normal((4, 16)))
    pairs = [("a b", "a b", 5.0), ("c", "c", 5.0), ("a d c", "a d c", 5.0), ("a", "b", 1.0)]
    cfg = SentenceEncoderConfig("db2", 1, 2)
    for s1, s2, _ in pairs[:3]:
        assert cosine(encode_tokens(s1.split(), table, cfg), encode_tokens(s2.split(), table, cfg)) == pytest.approx(1.0)
    report = eval_sts(pairs, table, cfg)
    assert report.n_evaluated == 4


def test_sts_skips_unencodable():
    pairs = [("x", "y", 0.0), ("qq", "x", 1.0), ("z", "x", 2.0), ("x y", "z", 3.0)]
    report = eval_sts(pairs, STS_TABLE, SentenceEncoderConfig("haar", 1, 1))
    assert (report.n_evaluated, report.n_skipped_oov) == (3, 1)
    avg = eval_sts(pairs, STS_TABLE, SentenceEncoderConfig(), average=True)
    assert (avg.n_evaluated, avg.n_skipped_oov) == (3, 1)


def test_sts_all_skipped():
    with pytest.raises(InsufficientDataError):
        eval_sts([("qq", "rr", 1.0), ("ss", "x", 2.0)], STS_TABLE, SentenceEncoderConfig())


def test_sts_level0_equals_avg_on_equal_lengths():
    rng = np.random.default_rng(8)
    words = tuple(f"t{i}" for i in range(10))
    table = EmbeddingTable(words, rng.standard_normal((10, 12)))
    pairs = []
    for j in range(12):
        n = int(rng.integers(1, 5))
        s1 = " ".join(rng.choice(words, n))
        s2 = " ".join(rng.choice(words, n))
        pairs.append((s1, s2, float(rng.uniform(0, 5))))
    dct_only = eval_sts(pairs, table, SentenceEncoderConfig(level=0, k=1))
    avg = eval_sts(pairs, table, SentenceEncoderConfig(), average=True)
    assert dct_only.value == pytest.approx(avg.value, abs=1e-12)
    assert (dct_only.n_evaluated, dct_only.n_skipped_oov) == (avg.n_evaluated, avg.n_skipped_oov)


def test_report_rendering():
    r = EvalReport("spearman", 0.5, 10, 2, "ws353")
    assert "value=0.500000" in r.as_kv().splitlines()
    lines = r.as_table().splitlines()
    assert lines[0].split() == ["dataset", "metric", "value", "evaluated", "skipped_oov"]
    assert lines[1].split() == ["ws353", "spearman", "0.5000", "10", "2"]


def test_dataset_loaders(tmp_path):
    ws = tmp_path / "ws.txt"
    ws.write_text("# word1 word2 score\na b 5\n\na\tc 3.5\n")
    ds = load_wordsim(ws)
    assert ds.pairs == (("a", "b", 5.0), ("a", "c", 3.5))
    assert ds.name == "ws"

    cat = tmp_path / "cat.tsv"
    cat.write_text("dog\tanimal\ncow\tanimal\nhammer\ttool\n")
    cds = load_categorization(cat)
    assert cds.k == 2 and len(cds.items) == 3

    sts = tmp_path / "sts.tsv"
    sts.write_text("a man runs\ta person runs\t4.2\n")
    assert load_sts(sts) == [("a man runs", "a person runs", 4.2)]


@pytest.mark.parametrize(
    "loader,text",
    [
        (load_wordsim, "a b\n"),
        (load_wordsim, "a b high\n"),
        (load_wordsim, "a b nan\n"),
        (load_categorization, "dog animal\n"),
        (load_sts, "only one\t3\n"),
        (load_sts, ""),
    ],
)
def test_dataset_loader_errors(tmp_path, loader, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(DatasetFormatError):
        loader(path)
