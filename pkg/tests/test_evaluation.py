import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from smelltriage import nnet
from smelltriage.evaluation import (
    BalanceConfig, ConfusionMatrix, EvalError, compute_metrics, format_report,
    run_kfold_experiment, stratified_folds,
)


def test_confusion_matrix_from_predictions():
    cm = ConfusionMatrix.from_predictions([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
    assert (cm.tp, cm.fn, cm.tn, cm.fp) == (2, 1, 1, 1)
    assert cm.total == 5


def test_compute_metrics_hand_values():
    row = compute_metrics(ConfusionMatrix(tp=30, fp=10, fn=20, tn=40))
    assert row.accuracy == pytest.approx(70.0)
    assert row.precision == pytest.approx(75.0)
    assert row.recall == pytest.approx(60.0)
    assert row.f1 == pytest.approx(2 * 75 * 60 / (75 + 60))
    assert row.undefined == ()


def test_compute_metrics_zero_denominators_flagged():
    row = compute_metrics(ConfusionMatrix(tp=0, fp=0, fn=0, tn=10))
    assert row.precision == 0.0 and row.recall == 0.0 and row.f1 == 0.0
    assert set(row.undefined) == {"precision", "recall", "f1"}


def test_compute_metrics_rejects_empty():
    with pytest.raises(EvalError):
        compute_metrics(ConfusionMatrix())


def test_stratified_folds_rejects_small_classes():
    with pytest.raises(EvalError, match="fewer than k"):
        stratified_folds([0, 0, 0, 1, 1], k=3, seed=0)
    with pytest.raises(EvalError, match="k must be"):
        stratified_folds([0, 1], k=1, seed=0)


def test_stratified_folds_deterministic():
    y = np.array([0, 1] * 20)
    a = stratified_folds(y, 5, seed=4).assignments
    b = stratified_folds(y, 5, seed=4).assignments
    np.testing.assert_array_equal(a, b)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10_000),
       st.sampled_from([2, 3, 5, 10]),
       st.integers(10, 60), st.integers(10, 60))
def test_fold_properties(seed, k, n0, n1):
    y = np.array([0] * n0 + [1] * n1)
    rng = np.random.default_rng(seed)
    y = y[rng.permutation(len(y))]
    plan = stratified_folds(y, k, seed)
    all_test = []
    for fold in range(k):
        train, test = plan.fold_indices(fold)
        assert set(train) & set(test) == set()
        assert sorted(np.concatenate([train, test])) == list(range(len(y)))
        all_test.extend(test)
        for cls in (0, 1):
            per_fold = [np.sum(y[plan.assignments == f] == cls) for f in range(k)]
            assert max(per_fold) - min(per_fold) <= 1
    # folds partition the samples
    assert sorted(all_test) == list(range(len(y)))


def _tiny_model_cfg(vocab):
    return nnet.ModelConfig(vocab_size=vocab, seq_len=12, embed_dim=4,
                            conv1_filters=2, conv1_width=3, conv2_filters=2,
                            conv2_width=2, pool_size=2, epochs=2, batch_size=8,
                            dtype="float64")


def _tiny_data(seed=0, n=40, vocab=20):
    rng = np.random.default_rng(seed)
    X = rng.integers(0, vocab, size=(n, 12))
    y = (X[:, 0] > vocab // 2).astype(int)
    return X, y


def test_run_kfold_report_shape_and_metadata():
    X, y = _tiny_data()
    report = run_kfold_experiment(X, y, _tiny_model_cfg(20), k=3, seed=5,
                                  project="demo")
    assert len(report.folds) == 3
    assert [r.fold for r in report.folds] == [0, 1, 2]
    assert report.mean.fold is None
    assert report.mean.project == "demo"
    assert report.mean.sampling == "SMOTE/train"
    assert report.folds[0].test_percent == pytest.approx(100.0 / 3)
    assert report.mean.accuracy == pytest.approx(
        np.mean([r.accuracy for r in report.folds]))


def test_run_kfold_deterministic():
    X, y = _tiny_data()
    a = run_kfold_experiment(X, y, _tiny_model_cfg(20), k=3, seed=5)
    b = run_kfold_experiment(X, y, _tiny_model_cfg(20), k=3, seed=5)
    assert [r.to_record() for r in a.folds] == [r.to_record() for r in b.folds]


def test_run_kfold_scope_all_balances_before_folding():
    X, y = _tiny_data()
    cfg = BalanceConfig(scope="all")
    report = run_kfold_experiment(X, y, _tiny_model_cfg(20), cfg, k=3, seed=5)
    assert report.mean.sampling == "SMOTE/all"


def test_run_kfold_balance_disabled():
    X, y = _tiny_data()
    cfg = BalanceConfig(enabled=False)
    report = run_kfold_experiment(X, y, _tiny_model_cfg(20), cfg, k=3, seed=5)
    assert report.mean.sampling == "none"


def test_format_report_layout():
    X, y = _tiny_data()
    report = run_kfold_experiment(X, y, _tiny_model_cfg(20), k=3, seed=5,
                                  project="demo")
    text = format_report(report, class1=int(np.sum(y)), total=len(y))
    lines = text.strip().splitlines()
    assert lines[0].startswith("Alg.\tProject\tClass1")
    assert len(lines) == 1 + 3 + 1  # header + folds + mean
    assert lines[1].startswith("CNN\tdemo/fold0\t")
    assert lines[-1].startswith("CNN\tdemo/mean\t")
