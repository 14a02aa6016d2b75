"""Binary classification evaluation and k-fold cross-validation.

Class 1 ("passed") is the positive class throughout. Metrics with a zero
denominator are reported as undefined (``None``) rather than silently
flattering a degenerate classifier; the display helpers render them as
"n/a". Reported 2-decimal values are truncated, not rounded, matching the
reporting convention used elsewhere in this package's tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .data import LabeledDataset, min_max_normalize, normalize_with
from .mlp import forward_batch, predict_batch
from .training import TrainedModel, TrainingConfig, mse_fitness, train_fdo_mlp


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with class 1 positive: tp, fp, fn, tn."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fp, self.fn, self.tn) < 0:
            raise ValueError("confusion matrix counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class MetricsReport:
    """The five ratio metrics plus an optional ranking AUC.

    Each field is ``None`` when its denominator is zero (or, for AUC, when
    only one class is present).
    """

    sensitivity: float | None
    specificity: float | None
    ppv: float | None
    npv: float | None
    accuracy: float | None
    auc: float | None = None


def confusion_matrix(predicted, actual) -> ConfusionMatrix:
    """Tally predictions against true labels; both must be 0/1 sequences."""
    predicted = np.asarray(predicted, dtype=int)
    actual = np.asarray(actual, dtype=int)
    if predicted.shape != actual.shape or predicted.ndim != 1:
        raise ValueError("predicted and actual must be 1-D sequences of equal length")
    for name, arr in (("predicted", predicted), ("actual", actual)):
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError(f"{name} labels must be binary (0 or 1)")
    return ConfusionMatrix(
        tp=int(np.sum((predicted == 1) & (actual == 1))),
        fp=int(np.sum((predicted == 1) & (actual == 0))),
        fn=int(np.sum((predicted == 0) & (actual == 1))),
        tn=int(np.sum((predicted == 0) & (actual == 0))),
    )


def _ratio(numerator: int, denominator: int) -> float | None:
    return None if denominator == 0 else numerator / denominator


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Sensitivity, specificity, PPV, NPV and accuracy from one matrix."""
    if cm.total == 0:
        raise ValueError("confusion matrix is empty")
    return MetricsReport(
        sensitivity=_ratio(cm.tp, cm.tp + cm.fn),
        specificity=_ratio(cm.tn, cm.tn + cm.fp),
        ppv=_ratio(cm.tp, cm.tp + cm.fp),
        npv=_ratio(cm.tn, cm.tn + cm.fn),
        accuracy=_ratio(cm.tp + cm.tn, cm.total),
    )


def auc(scores, actual) -> float | None:
    """Probability a random positive outscores a random negative, ties as 1/2.

    Computed from average ranks (the rank-sum statistic). Returns ``None``
    when only one class is present.
    """
    scores = np.asarray(scores, dtype=float)
    actual = np.asarray(actual, dtype=int)
    if scores.shape != actual.shape or scores.ndim != 1:
        raise ValueError("scores and actual must be 1-D sequences of equal length")
    n_pos = int(np.sum(actual == 1))
    n_neg = int(np.sum(actual == 0))
    if n_pos == 0 or n_neg == 0:
        return None
    order = np.argsort(scores, kind="stable")
    ranks = np.empty(scores.size)
    i = 0
    while i < scores.size:
        j = i
        while j < scores.size and scores[order[j]] == scores[order[i]]:
            j += 1
        ranks[order[i:j]] = 0.5 * (i + 1 + j)  # average of ranks i+1 .. j
        i = j
    rank_sum = float(ranks[actual == 1].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def truncate_metric(value: float | None, places: int = 2) -> float | None:
    """Truncate toward zero at ``places`` decimals (0.9487 -> 0.94)."""
    if value is None:
        return None
    scale = 10 ** places
    return math.floor(value * scale + 1e-9) / scale


def format_metric(value: float | None, places: int = 2) -> str:
    """Truncated fixed-point rendering, with "n/a" for undefined values."""
    if value is None:
        return "n/a"
    return f"{truncate_metric(value, places):.{places}f}"


@dataclass(frozen=True, eq=False)
class FoldAssignment:
    """Partition of ``n`` samples into ``k`` folds via per-sample indices."""

    k: int
    membership: np.ndarray

    def fold_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.membership == fold)

    def fold_sizes(self) -> list[int]:
        return [int(np.sum(self.membership == fold)) for fold in range(self.k)]


def kfold_splits(sample_count: int, k: int,
                 rng: np.random.Generator | None = None) -> FoldAssignment:
    """Split ``sample_count`` samples into k folds of near-equal size.

    The first ``k - (n mod k)`` folds get floor(n/k) samples and the
    remaining folds one more, so any larger folds come last. Assignment is
    sequential without an rng and shuffled with one.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > sample_count:
        raise ValueError(f"cannot split {sample_count} samples into {k} folds")
    base, remainder = divmod(sample_count, k)
    sizes = [base] * (k - remainder) + [base + 1] * remainder
    order = np.arange(sample_count) if rng is None else rng.permutation(sample_count)
    membership = np.empty(sample_count, dtype=int)
    start = 0
    for fold, size in enumerate(sizes):
        membership[order[start:start + size]] = fold
        start += size
    return FoldAssignment(k=k, membership=membership)


def classification_rate(model_params, data: LabeledDataset, threshold: float = 0.5,
                        sigmoid_output: bool = False) -> float:
    """Fraction of samples whose predicted class matches the label."""
    predictions = predict_batch(model_params, data.features, threshold, sigmoid_output)
    return float(np.mean(predictions == data.labels))


@dataclass(frozen=True)
class FoldReport:
    fold: int
    train_size: int
    test_size: int
    train_mse: float
    train_rate: float
    test_mse: float
    test_rate: float
    confusion: ConfusionMatrix
    metrics: MetricsReport


@dataclass(frozen=True)
class CrossValReport:
    folds: tuple[FoldReport, ...]

    @property
    def avg_train_mse(self) -> float:
        return float(np.mean([f.train_mse for f in self.folds]))

    @property
    def avg_train_rate(self) -> float:
        return float(np.mean([f.train_rate for f in self.folds]))

    @property
    def avg_test_mse(self) -> float:
        return float(np.mean([f.test_mse for f in self.folds]))

    @property
    def avg_test_rate(self) -> float:
        return float(np.mean([f.test_rate for f in self.folds]))

    def average_metrics(self) -> MetricsReport:
        """Fieldwise mean over folds, skipping undefined entries."""
        def mean_of(name: str) -> float | None:
            defined = [getattr(f.metrics, name) for f in self.folds
                       if getattr(f.metrics, name) is not None]
            return float(np.mean(defined)) if defined else None

        return MetricsReport(*(mean_of(name) for name in
                               ("sensitivity", "specificity", "ppv", "npv",
                                "accuracy", "auc")))


Trainer = Callable[[LabeledDataset, TrainingConfig, np.random.Generator], TrainedModel]


def bp_trainer(learning_rate: float, epochs: int) -> Trainer:
    """Adapt the backpropagation baseline to the cross-validation interface."""
    from .training import train_bp_mlp

    def train(train_data: LabeledDataset, config: TrainingConfig,
              rng: np.random.Generator) -> TrainedModel:
        return train_bp_mlp(train_data, config.topology, learning_rate, epochs,
                            rng, sigmoid_output=config.sigmoid_output)

    return train


def cross_validate(data: LabeledDataset, k: int, config: TrainingConfig,
                   rng: np.random.Generator | None = None,
                   train: Trainer | None = None) -> CrossValReport:
    """Rotate through k folds, training on k-1 and testing on the held-out one.

    Fold membership is shuffled with the supplied rng (seeded from the
    optimizer config when omitted), and each fold trains from its own
    derived random stream so folds are independent. Normalization is fitted
    on each fold's training rows and replayed onto its test rows. A training
    split containing a single class aborts with the fold named.
    """
    if train is None:
        train = train_fdo_mlp
    if rng is None:
        rng = np.random.default_rng(config.fdo.seed)
    assignment = kfold_splits(data.n_samples, k, rng)
    fold_rngs = rng.spawn(k)
    reports: list[FoldReport] = []
    for fold in range(k):
        test_idx = assignment.fold_indices(fold)
        train_idx = np.flatnonzero(assignment.membership != fold)
        train_raw = data.subset(train_idx)
        test_raw = data.subset(test_idx)
        if len(set(train_raw.labels.tolist())) < 2:
            raise ValueError(f"fold {fold + 1}: training split contains a single class")
        train_data = min_max_normalize(train_raw)
        test_data = normalize_with(test_raw, train_data.normalization)
        model = train(train_data, config, fold_rngs[fold])
        train_rate = classification_rate(model.params, train_data,
                                         config.threshold, config.sigmoid_output)
        test_mse = mse_fitness(model.params, test_data, config.sigmoid_output)
        test_rate = classification_rate(model.params, test_data,
                                        config.threshold, config.sigmoid_output)
        predictions = predict_batch(model.params, test_data.features,
                                    config.threshold, config.sigmoid_output)
        cm = confusion_matrix(predictions, test_data.labels)
        report = metrics(cm)
        outputs = forward_batch(model.params, test_data.features, config.sigmoid_output)
        scores = outputs[:, 0] if outputs.shape[1] == 1 else outputs[:, 1]
        report = replace(report, auc=auc(scores, test_data.labels))
        reports.append(FoldReport(
            fold=fold + 1, train_size=train_data.n_samples, test_size=test_data.n_samples,
            train_mse=model.train_mse, train_rate=train_rate,
            test_mse=test_mse, test_rate=test_rate,
            confusion=cm, metrics=report,
        ))
    return CrossValReport(folds=tuple(reports))


@dataclass(frozen=True)
class ClassSuccess:
    """Correct-classification tally for one class."""

    total: int
    correct: int

    @property
    def rate(self) -> float | None:
        return None if self.total == 0 else self.correct / self.total


@dataclass(frozen=True)
class ClassSuccessReport:
    """Per-fold and aggregate success rates for positives and negatives."""

    per_fold: tuple[tuple[ClassSuccess, ClassSuccess], ...]
    total_positive: ClassSuccess
    total_negative: ClassSuccess

    def mean_positive_rate(self) -> float | None:
        defined = [p.rate for p, _ in self.per_fold if p.rate is not None]
        return float(np.mean(defined)) if defined else None

    def mean_negative_rate(self) -> float | None:
        defined = [n.rate for _, n in self.per_fold if n.rate is not None]
        return float(np.mean(defined)) if defined else None


def per_class_success(cms: Sequence[ConfusionMatrix]) -> ClassSuccessReport:
    """Per-class success rates per fold plus totals over all folds."""
    per_fold = tuple(
        (ClassSuccess(total=cm.tp + cm.fn, correct=cm.tp),
         ClassSuccess(total=cm.tn + cm.fp, correct=cm.tn))
        for cm in cms)
    return ClassSuccessReport(
        per_fold=per_fold,
        total_positive=ClassSuccess(total=sum(p.total for p, _ in per_fold),
                                    correct=sum(p.correct for p, _ in per_fold)),
        total_negative=ClassSuccess(total=sum(n.total for _, n in per_fold),
                                    correct=sum(n.correct for _, n in per_fold)),
    )
