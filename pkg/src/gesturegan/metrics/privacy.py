"""Membership-inference privacy audit of a synthetic sample.

A one-class SVM is fit on the synthetic windows, then shown the real
training windows (members) and real held-out windows (non-members).
Every point the SVM calls an inlier is treated as a membership claim;
privacy = 1 - precision of those claims. A generator that memorized its
training data yields precise claims and a low score; one that reveals
nothing yields chance-level precision and a score near
1 - |train| / (|train| + |holdout|).

Kernel width is the median pairwise distance over the synthetic sample
(matching the bandwidth heuristic used elsewhere); nu defaults to 0.1.
If no point at all is flagged, the attack produced no claims and the
score is 1.0.
"""

import numpy as np
from scipy.spatial.distance import pdist
from sklearn.svm import OneClassSVM

from ..errors import DataFormatError, MetricUndefinedError
from ..pipeline.datasets import WindowedDataset


def privacy_score(
    synth: WindowedDataset,
    real_train: WindowedDataset,
    real_holdout: WindowedDataset,
    nu: float = 0.1,
) -> float:
    for name, ds in (("synth", synth), ("real_train", real_train), ("real_holdout", real_holdout)):
        if ds.n_instances < 2:
            raise DataFormatError(f"{name} needs at least two windows")
    if not 0.0 < nu <= 1.0:
        raise ValueError(f"nu must be in (0, 1], got {nu}")

    xs = synth.flattened()
    sigma = float(np.median(pdist(xs)))
    if sigma == 0.0:
        raise MetricUndefinedError(
            "synthetic windows are all identical; a one-class fit on them "
            "carries no membership signal"
        )

    svm = OneClassSVM(kernel="rbf", gamma=1.0 / (2.0 * sigma * sigma), nu=nu)
    svm.fit(xs)

    flagged_members = int((svm.predict(real_train.flattened()) == 1).sum())
    flagged_outsiders = int((svm.predict(real_holdout.flattened()) == 1).sum())
    flagged = flagged_members + flagged_outsiders
    if flagged == 0:
        return 1.0
    precision = flagged_members / flagged
    return 1.0 - precision
