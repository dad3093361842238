__all__ = ['DescriptorModel', 'window_centers', 'road_windows', 'generate_database']

import logging
import math
from typing import List, Tuple

import numpy as np

from placerank import resources
from placerank.generators import world as world_module


logger = logging.getLogger(__name__)

COARSE_BINS = 3
FEATURE_CHUNK = 4096
PAD_CLASS = 255


def window_centers(extent: float, side: float, interval: float) -> np.ndarray:
    """
    Centers of sliding windows that fit entirely inside one world axis.

    :arg extent: Axis extent.
    :arg side: Window side.
    :arg interval: Stride.
    :return: Center coordinates.
    """
    if extent < side:
        return np.empty(0)
    count = int(math.floor((extent - side) / interval + 1e-9)) + 1
    return side / 2 + interval * np.arange(count)


def _integral(mask: np.ndarray) -> np.ndarray:
    """Summed-area table with a leading zero row and column (works on stacked masks)."""
    shape = mask.shape[:-2] + (mask.shape[-2] + 1, mask.shape[-1] + 1)
    table = np.zeros(shape, dtype=np.float64)
    table[..., 1:, 1:] = mask.cumsum(axis=-2).cumsum(axis=-1)
    return table


def _box_sums(table: np.ndarray, top: np.ndarray, left: np.ndarray, row_edges: np.ndarray, col_edges: np.ndarray):
    """
    Sums over a grid of boxes per window.

    :arg table: Summed-area table (..., H + 1, W + 1).
    :arg top: First cell row of every window.
    :arg left: First cell column of every window.
    :arg row_edges: Box row boundaries relative to the window.
    :arg col_edges: Box column boundaries relative to the window.
    :return: Array (..., n, rows, cols).
    """
    r = top[:, None] + row_edges[None, :]
    c = left[:, None] + col_edges[None, :]
    corners = table[..., r[:, :, None], c[:, None, :]]
    return corners[..., 1:, 1:] - corners[..., :-1, 1:] - corners[..., 1:, :-1] + corners[..., :-1, :-1]


class DescriptorModel:
    def __init__(self, grid: 'world_module.SemanticGrid', spec: 'world_module.WorldSpec') -> None:
        """
        Oracle place descriptor of a world: a seeded random projection of the
        class histograms of a window's sub-patches.

        Sub-patches are taken twice, as single cell rows over a few column
        bands and as single cell columns over a few row bands, so a window
        slid along a road keeps most of its fine detail across the road.
        The histograms are pooled over window origins shifted by up to half
        the submap interval (triangular weights), so a place seen between two
        database windows still describes like its nearest one.

        :arg grid: SemanticGrid instance.
        :arg spec: WorldSpec the grid was generated from.
        """
        self.grid = grid
        self.spec = spec
        self.cells_per_side = max(COARSE_BINS, int(round(spec.submap_side_m / grid.cell_size_m)))
        self.shift_cells = max(0, int(round(spec.submap_interval_m / (2 * grid.cell_size_m))))
        self.pad = self.cells_per_side + self.shift_cells

        padded = np.pad(grid.cells, self.pad, constant_values=PAD_CLASS)
        onehot = np.stack([padded == k for k in range(world_module.NUM_CLASSES)])
        self.tables = _integral(onehot)
        self.fractions = grid.class_fractions

        n = self.cells_per_side
        self.fine_edges = np.arange(n + 1)
        self.coarse_edges = np.round(np.linspace(0, n, COARSE_BINS + 1)).astype(int)

        s = self.shift_cells
        self.shifts = np.arange(-s, s + 1)
        weights = (s + 1 - np.abs(self.shifts)).astype(np.float64)
        self.shift_weights = weights / weights.sum()

        self.feature_dim = 2 * world_module.NUM_CLASSES * n * COARSE_BINS
        rng = world_module.seed_stream(spec.seed, world_module.PROJECTION_STREAM)
        self.projection = rng.standard_normal((self.feature_dim, spec.descriptor_dim)) / math.sqrt(spec.descriptor_dim)

    def window_origin(self, centers: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """First padded (row, column) of the windows centered at (x, y) points."""
        cs = self.grid.cell_size_m
        half = self.spec.submap_side_m / 2
        top = np.round((centers[:, 1] - half) / cs).astype(int) + self.pad
        left = np.round((centers[:, 0] - half) / cs).astype(int) + self.pad
        return top, left

    def _histograms(self, top: np.ndarray, left: np.ndarray) -> np.ndarray:
        fine, coarse = self.fine_edges, self.coarse_edges
        blocks = []

        for rows, cols in ((fine, coarse), (coarse, fine)):
            sums = _box_sums(self.tables, top, left, rows, cols)
            areas = np.diff(rows)[:, None] * np.diff(cols)[None, :]
            histograms = sums / areas - self.fractions[:, None, None, None]
            blocks.append(np.moveaxis(histograms, 1, 0).reshape(top.shape[0], -1))

        return np.concatenate(blocks, axis=1)

    def features(self, centers: np.ndarray) -> np.ndarray:
        """
        Centered sub-patch class histograms, pooled over shifted origins.

        :arg centers: (n, 2) window centers.
        :return: (n, feature_dim) features.
        """
        top, left = self.window_origin(np.asarray(centers, dtype=np.float64).reshape(-1, 2))
        pooled = np.zeros((top.shape[0], self.feature_dim))

        for dr, wr in zip(self.shifts, self.shift_weights):
            for dc, wc in zip(self.shifts, self.shift_weights):
                pooled += (wr * wc) * self._histograms(top + dr, left + dc)

        return pooled

    def describe(self, centers: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """
        Noisy unit descriptors of the windows centered at the given points.

        :arg centers: (n, 2) window centers.
        :arg rng: Noise generator (one Gaussian draw per component).
        :return: (n, descriptor_dim) float32 descriptors.
        """
        centers = np.asarray(centers, dtype=np.float64).reshape(-1, 2)
        dim = self.spec.descriptor_dim
        output = np.empty((centers.shape[0], dim), dtype=np.float32)

        for start in range(0, centers.shape[0], FEATURE_CHUNK):
            chunk = centers[start:start + FEATURE_CHUNK]
            vectors = self.features(chunk) @ self.projection
            vectors /= np.maximum(np.linalg.norm(vectors, axis=1, keepdims=True), 1e-12)

            vectors += rng.normal(0.0, self.spec.descriptor_noise_sigma / math.sqrt(dim), size=vectors.shape)
            vectors /= np.maximum(np.linalg.norm(vectors, axis=1, keepdims=True), 1e-12)
            output[start:start + FEATURE_CHUNK] = vectors

        return output


def road_windows(grid: 'world_module.SemanticGrid', spec: 'world_module.WorldSpec') -> np.ndarray:
    """
    Centers of the sliding windows whose central region holds a road cell.

    :arg grid: SemanticGrid instance.
    :arg spec: WorldSpec instance.
    :return: (n, 2) centers, row-major from the south-west corner.
    """
    width, height = grid.extent_m
    xs = window_centers(width, spec.submap_side_m, spec.submap_interval_m)
    ys = window_centers(height, spec.submap_side_m, spec.submap_interval_m)

    if xs.size == 0 or ys.size == 0:
        return np.empty((0, 2))

    cx, cy = np.meshgrid(xs, ys)
    centers = np.column_stack([cx.ravel(), cy.ravel()])

    # Central region: the middle half of the window
    cs = grid.cell_size_m
    quarter = spec.submap_side_m / 4
    top = np.round((centers[:, 1] - quarter) / cs).astype(int)
    left = np.round((centers[:, 0] - quarter) / cs).astype(int)
    size = np.array([0, max(1, int(round(2 * quarter / cs)))])

    road = _box_sums(_integral(grid.road_mask.astype(np.float64)), top, left, size, size)[:, 0, 0]
    return centers[road > 0]


def generate_database(
        grid: 'world_module.SemanticGrid',
        spec: 'world_module.WorldSpec',
        model: DescriptorModel | None = None,
) -> List['resources.SubmapRecord']:
    """
    Generates the submap database: one record per road-bearing sliding window.

    :arg grid: SemanticGrid instance.
    :arg spec: WorldSpec instance.
    :param model: Descriptor model to reuse.
    :return: Submap records with sequential ids.
    """
    centers = road_windows(grid, spec)
    if centers.shape[0] == 0:
        logger.info('No window of the world contains a road; database is empty')
        return []

    model = model if model is not None else DescriptorModel(grid, spec)
    rng = world_module.seed_stream(spec.seed, world_module.DATABASE_NOISE_STREAM)
    descriptors = model.describe(centers, rng)

    records = [
        resources.SubmapRecord(id=i, center_u=float(u), center_v=float(v), descriptor=descriptors[i])
        for i, (u, v) in enumerate(centers)
    ]

    logger.info('Generated %d submaps of %g m at %g m intervals', len(records), spec.submap_side_m, spec.submap_interval_m)
    return records
