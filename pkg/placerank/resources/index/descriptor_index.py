__all__ = ['SubmapRecord', 'RetrievalHit', 'DescriptorIndex', 'build_index', 'query_top_c', 'normalize_descriptor']

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

import placerank


logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SubmapRecord:
    id: int
    center_u: float
    center_v: float
    descriptor: np.ndarray


@dataclass(frozen=True)
class RetrievalHit:
    submap_id: int
    similarity: float
    position: Tuple[float, float]


def normalize_descriptor(values: Sequence[float] | np.ndarray, name: str = 'descriptor') -> np.ndarray:
    """
    L2-normalises a descriptor.

    :arg values: Raw descriptor values.
    :param name: Name used in the error message.
    :return: Unit-norm float64 vector.
    """
    vector = np.asarray(values, dtype=np.float64).ravel()
    norm = np.linalg.norm(vector)

    if not np.isfinite(norm) or norm == 0.0:
        raise placerank.PlacerankError(
            code='ZeroNormDescriptor',
            message=f'{name} has zero or non-finite norm and cannot be normalised.'
        )

    return vector / norm


class DescriptorIndex:
    def __init__(self, ids: np.ndarray, positions: np.ndarray, vectors: np.ndarray) -> None:
        """
        Immutable submap database supporting exact top-C similarity queries.

        :arg ids: (N,) submap ids.
        :arg positions: (N, 2) submap centers (east, north) in meters.
        :arg vectors: (N, D) unit-norm descriptors.
        """
        self.ids = ids
        self.positions = positions
        self.vectors = vectors

        for array in (self.ids, self.positions, self.vectors):
            array.flags.writeable = False

        self._rows: Dict[int, int] = {int(submap_id): row for row, submap_id in enumerate(ids)}

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    @cached_property
    def tree(self) -> cKDTree:
        """Spatial index over submap centers, built on first use."""
        return cKDTree(self.positions)

    def row(self, submap_id: int) -> int:
        """
        Resolves a submap id to its row.

        :arg submap_id: Submap id.
        :return: Row index.
        """
        try:
            return self._rows[int(submap_id)]
        except KeyError:
            raise placerank.SubmapNotFound(submap_id)

    def position(self, submap_id: int) -> Tuple[float, float]:
        """
        Center of a submap.

        :arg submap_id: Submap id.
        :return: (u, v) in meters.
        """
        u, v = self.positions[self.row(submap_id)]
        return float(u), float(v)

    def check_query(self, q: np.ndarray | Sequence[float]) -> np.ndarray:
        """Validates the dimension of a query descriptor and returns it normalised."""
        q = np.asarray(q, dtype=np.float64).ravel()
        if q.shape[0] != self.dimension:
            raise placerank.DimensionMismatch(self.dimension, q.shape[0], where='query descriptor')
        return normalize_descriptor(q, name='query descriptor')

    def similarities(self, q: np.ndarray, rows: np.ndarray | None = None) -> np.ndarray:
        """
        Dot-product similarities between a normalised query and database rows.

        :arg q: Unit-norm query descriptor.
        :param rows: Optional subset of rows (all rows when omitted).
        :return: Similarities aligned with `rows`.
        """
        vectors = self.vectors if rows is None else self.vectors[rows]
        return vectors @ q

    def query_top_c(self, q: np.ndarray | Sequence[float], c: int) -> List[RetrievalHit]:
        """
        Exact top-C retrieval by similarity, ties broken by submap id ascending.

        :arg q: Query descriptor (normalised here).
        :arg c: Number of hits requested.
        :return: min(c, len(index)) hits, best first.
        """
        if not isinstance(c, (int, np.integer)) or c < 1:
            raise placerank.PlacerankError(code='InvalidArgument', message=f'c must be a positive integer, got {c}.')

        q = self.check_query(q)
        scores = self.similarities(q)
        n = len(self)

        if c < n:
            # Keep every row tied with the c-th best so the id tie-break stays exact
            threshold = np.partition(scores, n - c)[n - c]
            candidates = np.flatnonzero(scores >= threshold)
        else:
            candidates = np.arange(n)

        order = np.lexsort((self.ids[candidates], -scores[candidates]))[:c]
        rows = candidates[order]

        return [
            RetrievalHit(
                submap_id=int(self.ids[row]),
                similarity=float(scores[row]),
                position=(float(self.positions[row, 0]), float(self.positions[row, 1])),
            )
            for row in rows
        ]


def build_index(records: List[SubmapRecord]) -> DescriptorIndex:
    """
    Builds an immutable index from database records, normalising every descriptor.

    :arg records: Submap records.
    :return: DescriptorIndex instance.
    """
    if not records:
        raise placerank.PlacerankError(code='EmptyDatabase', message='empty database')

    dimension = np.asarray(records[0].descriptor).size
    seen = set()

    ids = np.empty(len(records), dtype=np.int64)
    positions = np.empty((len(records), 2), dtype=np.float64)
    vectors = np.empty((len(records), dimension), dtype=np.float64)

    for row, record in enumerate(records):
        if record.id in seen:
            raise placerank.PlacerankError(
                code='DuplicateSubmapId',
                message=f'Submap id {record.id} appears more than once.',
                submap_id=record.id,
            )
        seen.add(record.id)

        descriptor = np.asarray(record.descriptor)
        if descriptor.size != dimension:
            raise placerank.DimensionMismatch(dimension, descriptor.size, where=f'submap {record.id}')

        if not (np.isfinite(record.center_u) and np.isfinite(record.center_v)):
            raise placerank.PlacerankError(
                code='InvalidArgument',
                message=f'Submap {record.id} has a non-finite center.',
            )

        ids[row] = record.id
        positions[row] = (record.center_u, record.center_v)
        vectors[row] = normalize_descriptor(descriptor, name=f'submap {record.id} descriptor')

    logger.info('Built descriptor index with %d submaps of dimension %d', len(records), dimension)
    return DescriptorIndex(ids, positions, vectors)


def query_top_c(index: DescriptorIndex, q: np.ndarray | Sequence[float], c: int) -> List[RetrievalHit]:
    """
    Exact top-C retrieval against an index.

    :arg index: DescriptorIndex instance.
    :arg q: Query descriptor.
    :arg c: Number of hits.
    :return: Ranked hits.
    """
    return index.query_top_c(q, c)
