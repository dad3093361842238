__all__ = ['symmetric_infonce']

from typing import Sequence

import numpy as np
from scipy.special import logsumexp

import placerank


NORM_TOLERANCE = 1e-6


def symmetric_infonce(
        batch_q: Sequence[Sequence[float]] | np.ndarray,
        batch_p: Sequence[Sequence[float]] | np.ndarray,
        tau: float = 0.1,
) -> float:
    """
    Symmetric InfoNCE score of a batch of matched descriptor pairs.

    Row i of `batch_q` is paired with row i of `batch_p`; every other row of
    the opposite batch acts as a negative. The per-sample value is the sum of
    the query-to-reference and reference-to-query cross-entropy terms and the
    batch value is their mean.

    :arg batch_q: (N, D) normalised query descriptors.
    :arg batch_p: (N, D) normalised reference descriptors.
    :param tau: Temperature, strictly positive.
    :return: Non-negative loss value.
    """
    q = np.atleast_2d(np.asarray(batch_q, dtype=np.float64))
    p = np.atleast_2d(np.asarray(batch_p, dtype=np.float64))

    if q.shape[0] == 0 or q.shape[0] != p.shape[0]:
        raise placerank.ValidationError([{
            'name': 'batch',
            'message': f'Batches must be non-empty and equal in size, got {q.shape[0]} and {p.shape[0]}.'
        }])

    if q.shape[1] != p.shape[1]:
        raise placerank.DimensionMismatch(q.shape[1], p.shape[1], where='batch_p')

    if not tau > 0:
        raise placerank.ValidationError([{'name': 'tau', 'message': 'Temperature must be greater than 0.'}])

    for name, batch in (('batch_q', q), ('batch_p', p)):
        if np.any(np.abs(np.linalg.norm(batch, axis=1) - 1.0) > NORM_TOLERANCE):
            raise placerank.ValidationError([{'name': name, 'message': 'Descriptors must be L2-normalised.'}])

    logits = (q @ p.T) / tau
    diagonal = np.diag(logits)

    # Row-wise softmax is query -> reference, column-wise is reference -> query
    forward = logsumexp(logits, axis=1) - diagonal
    backward = logsumexp(logits, axis=0) - diagonal

    return float(np.mean(forward + backward))
