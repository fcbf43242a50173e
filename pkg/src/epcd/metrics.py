"""Agreement between two labelings."""

from __future__ import annotations

import numpy as np


def confusion_matrix(a, b) -> np.ndarray:
    """Joint frequency table R (rows: values of ``a``, columns: values of ``b``)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("label vectors must be 1-d and of equal length")
    if a.size == 0:
        raise ValueError("empty label vectors")
    _, ia = np.unique(a, return_inverse=True)
    _, ib = np.unique(b, return_inverse=True)
    R = np.zeros((ia.max() + 1, ib.max() + 1))
    np.add.at(R, (ia, ib), 1.0)
    return R / a.size


def _plogp(p):
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(p > 0, p * np.log(np.where(p > 0, p, 1.0)), 0.0)


def nmi_from_confusion(R) -> float:
    R = np.asarray(R, dtype=float)
    joint_entropy = -_plogp(R).sum()
    outer = np.outer(R.sum(axis=1), R.sum(axis=0))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(R > 0, R / np.where(outer > 0, outer, 1.0), 1.0)
    mutual = float((R * np.log(ratio)).sum())
    return mutual / joint_entropy


def nmi(a, b, full: bool = False):
    """Mutual information divided by joint entropy (natural log).

    When both labelings are constant the joint entropy is zero; the value is
    then 1 (the partitions coincide). With ``full=True`` a
    ``(value, degenerate)`` pair is returned.
    """
    R = confusion_matrix(a, b)
    degenerate = R.size == 1
    nz = R > 0
    if degenerate or (R.shape[0] == R.shape[1] and np.all(nz.sum(axis=0) == 1)
                      and np.all(nz.sum(axis=1) == 1)):
        # same partition up to relabeling: exactly 1, free of rounding
        val = 1.0
    else:
        val = float(min(1.0, max(0.0, nmi_from_confusion(R))))
    return (val, degenerate) if full else val


def misclustered_fraction(a, b) -> float:
    """Share of nodes labeled differently, minimised over a global sign swap."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError("label vectors must have equal length")
    diff = np.count_nonzero(a != b)
    return min(diff, a.size - diff) / a.size
