__all__ = [
    'ROAD', 'SIDEWALK', 'VEGETATION', 'BUILDING', 'CLASS_NAMES', 'MAX_MOTIFS', 'WorldSpec', 'SemanticGrid',
    'generate_world', 'seed_stream',
]

import logging
import math
from dataclasses import dataclass, asdict, field
from typing import Any, Dict, Tuple

import numpy as np
from scipy import ndimage

import placerank
from placerank import resources, types


logger = logging.getLogger(__name__)

ROAD, SIDEWALK, VEGETATION, BUILDING = 0, 1, 2, 3
CLASS_NAMES = ('road', 'sidewalk', 'vegetation', 'building')
NUM_CLASSES = len(CLASS_NAMES)
MAX_MOTIFS = 4

# Frontage lots: plaza (paved), park, building
FRONTAGE_CLASSES = np.array([SIDEWALK, VEGETATION, BUILDING], dtype=np.uint8)
FRONTAGE_WEIGHTS = np.array([0.2, 0.35, 0.45])
INTERIOR_LOT_M = 20.0

# Independent random streams derived from the world seed
WORLD_STREAM, MOTIF_STREAM, PROJECTION_STREAM, DATABASE_NOISE_STREAM = 0, 1, 2, 3
WALK_STREAM, QUERY_NOISE_STREAM, MAGNETOMETER_STREAM = 4, 5, 6


def seed_stream(seed: int, stream: int) -> np.random.Generator:
    """
    Random generator for one named stream of a seeded scenario.

    :arg seed: World seed.
    :arg stream: Stream constant.
    :return: Generator.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))


@dataclass(frozen=True)
class WorldSpec:
    extent_m: Tuple[float, float]
    road_grid_pitch_m: float = 100.0
    submap_side_m: float = 60.0
    submap_interval_m: float = 20.0
    ambiguity_level: float = 0.0
    descriptor_dim: int = 256
    descriptor_noise_sigma: float = 0.05
    seed: int = 0
    cell_size_m: float = 5.0
    road_width_m: float = 10.0
    sidewalk_width_m: float = 5.0
    magnetometer_noise_deg: float = 10.0
    query_spacing_m: float = 5.0
    trajectory_length_m: float = 250.0
    semantic_classes: Tuple[str, ...] = field(default=CLASS_NAMES, init=False)

    @classmethod
    def from_config(cls, config: 'types.WorldSpecConfig') -> 'WorldSpec':
        """
        Builds a WorldSpec from its JSON form.

        :arg config: World spec dict.
        :return: WorldSpec instance.
        """
        resources.validate_world_spec_config(config)
        values = dict(config)
        values['extent_m'] = (float(config['extent_m'][0]), float(config['extent_m'][1]))
        return cls(**values)

    def to_config(self) -> 'types.WorldSpecConfig':
        output = asdict(self)
        output.pop('semantic_classes')
        output['extent_m'] = list(self.extent_m)
        return output

    @property
    def corridor_half_width_m(self) -> float:
        """Half width of a road plus its sidewalks."""
        return self.road_width_m / 2 + self.sidewalk_width_m

    @property
    def frontage_depth_m(self) -> float:
        """Depth of the lots lining a road, as seen from a window centered on it."""
        depth = self.submap_side_m / 2 - self.corridor_half_width_m
        return max(self.cell_size_m, math.floor(depth / self.cell_size_m) * self.cell_size_m)


@dataclass(frozen=True, eq=False)
class SemanticGrid:
    cell_size_m: float
    cells: np.ndarray
    road_lines_x: np.ndarray
    road_lines_y: np.ndarray
    horizontal_motifs: np.ndarray
    vertical_motifs: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        return self.cells.shape

    @property
    def extent_m(self) -> Tuple[float, float]:
        return self.cells.shape[1] * self.cell_size_m, self.cells.shape[0] * self.cell_size_m

    @property
    def class_fractions(self) -> np.ndarray:
        counts = np.bincount(self.cells.ravel(), minlength=NUM_CLASSES)[:NUM_CLASSES]
        return counts / self.cells.size

    @property
    def road_mask(self) -> np.ndarray:
        return self.cells == ROAD

    def road_components(self) -> int:
        """Number of 4-connected road components."""
        _, count = ndimage.label(self.road_mask)
        return int(count)

    def cell_of(self, x: float, y: float) -> Tuple[int, int]:
        """(row, column) of the cell containing a world point."""
        return int(math.floor(y / self.cell_size_m)), int(math.floor(x / self.cell_size_m))

    def class_at(self, x: float, y: float) -> int:
        row, col = self.cell_of(x, y)
        if not (0 <= row < self.cells.shape[0] and 0 <= col < self.cells.shape[1]):
            raise placerank.PlacerankError(
                code='IndexOutOfRange',
                message=f'Point ({x}, {y}) lies outside the world.'
            )
        return int(self.cells[row, col])

    def segment_motifs(self) -> np.ndarray:
        """Motif id of every road segment (-1 where the segment has its own layout)."""
        return np.concatenate([self.horizontal_motifs.ravel(), self.vertical_motifs.ravel()])


def _road_lines(extent: float, pitch: float) -> np.ndarray:
    return np.arange(pitch / 2, extent, pitch)


def _frontage_patterns(
        rng: np.random.Generator,
        count: int,
        rows: int,
        lots: int,
) -> np.ndarray:
    """Random frontage layouts, shape (count, 2 sides, rows, lots)."""
    picks = rng.choice(len(FRONTAGE_CLASSES), size=(count, 2, rows, lots), p=FRONTAGE_WEIGHTS)
    return FRONTAGE_CLASSES[picks]


def _segment_layouts(
        spec: WorldSpec,
        rng: np.random.Generator,
        shape: Tuple[int, int],
        rows: int,
        lots: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Frontage layout and motif id of each segment in a (lines, spans) arrangement.

    Every segment draws its own layout; a fraction `ambiguity_level` of them
    is then overwritten with one of the shared motifs.
    """
    count = shape[0] * shape[1]

    layouts = _frontage_patterns(rng, count, rows, lots)
    motifs = _frontage_patterns(rng, MAX_MOTIFS, rows, lots)

    repeated = rng.random(count) < spec.ambiguity_level
    motif_ids = np.where(repeated, rng.integers(0, MAX_MOTIFS, size=count), -1)
    layouts[repeated] = motifs[motif_ids[repeated]]

    return layouts, motif_ids


def generate_world(spec: WorldSpec) -> SemanticGrid:
    """
    Generates a grid-road city: roads with sidewalk margins, lots lining every
    road segment and random block interiors.

    :arg spec: WorldSpec instance.
    :return: SemanticGrid instance.
    """
    width, height = spec.extent_m
    cs = spec.cell_size_m
    pitch = spec.road_grid_pitch_m

    lines_x = _road_lines(width, pitch)
    lines_y = _road_lines(height, pitch)

    if len(lines_x) < 2 or len(lines_y) < 2:
        raise placerank.PlacerankError(
            code='WorldTooSmall',
            message=f'Extent {width}x{height} m does not hold one block at a {pitch} m road pitch.',
            extent_m=spec.extent_m,
        )

    nx, ny = int(round(width / cs)), int(round(height / cs))
    xs = (np.arange(nx) + 0.5) * cs
    ys = (np.arange(ny) + 0.5) * cs

    # Distance of every column/row to its nearest road center line
    near_x = np.argmin(np.abs(xs[:, None] - lines_x[None, :]), axis=1)
    near_y = np.argmin(np.abs(ys[:, None] - lines_y[None, :]), axis=1)
    dist_x = np.abs(xs - lines_x[near_x])
    dist_y = np.abs(ys - lines_y[near_y])

    half_road = spec.road_width_m / 2
    corridor = spec.corridor_half_width_m
    depth = spec.frontage_depth_m
    lot_m = spec.submap_interval_m

    edge_x = (dist_x - corridor)[None, :]
    edge_y = (dist_y - corridor)[:, None]

    road = (dist_y[:, None] < half_road) | (dist_x[None, :] < half_road)
    sidewalk = ~road & ((edge_y < 0) | (edge_x < 0))
    block = ~road & ~sidewalk

    # Block interiors: coarse random lots
    rng = seed_stream(spec.seed, WORLD_STREAM)
    lot_cells = max(1, int(round(INTERIOR_LOT_M / cs)))
    interior = rng.choice(
        [VEGETATION, BUILDING],
        size=(ny // lot_cells + 1, nx // lot_cells + 1),
        p=[0.4, 0.6],
    ).astype(np.uint8)
    cells = interior[np.arange(ny)[:, None] // lot_cells, np.arange(nx)[None, :] // lot_cells]

    cells = np.where(road, ROAD, np.where(sidewalk, SIDEWALK, cells)).astype(np.uint8)

    # Horizontal frontage runs corridor to corridor and owns the block corners;
    # vertical frontage fills what lies between them.
    rows = max(1, int(round(depth / cs)))
    h_len = pitch - 2 * corridor
    v_len = h_len - 2 * depth
    h_lots = max(1, int(math.ceil(h_len / lot_m)))
    v_lots = max(1, int(math.ceil(v_len / lot_m)))

    motif_rng = seed_stream(spec.seed, MOTIF_STREAM)
    h_layouts, h_motifs = _segment_layouts(spec, motif_rng, (len(lines_y), len(lines_x) - 1), rows, h_lots)
    v_layouts, v_motifs = _segment_layouts(spec, motif_rng, (len(lines_x), len(lines_y) - 1), rows, v_lots)

    row_idx = np.broadcast_to(np.minimum((edge_y / cs).astype(int), rows - 1), cells.shape)
    col_idx = np.broadcast_to(np.minimum((edge_x / cs).astype(int), rows - 1), cells.shape)

    # Lots lining horizontal roads
    span_x = np.searchsorted(lines_x, xs) - 1
    along_x = xs - (lines_x[np.clip(span_x, 0, len(lines_x) - 1)] + corridor)
    lot_x = np.clip((along_x // lot_m).astype(int), 0, h_lots - 1)
    side_y = (ys < lines_y[near_y]).astype(int)

    h_mask = block & (edge_y < depth)
    h_mask &= ((span_x >= 0) & (span_x < len(lines_x) - 1))[None, :]
    r, c = np.nonzero(h_mask)
    segment = near_y[r] * (len(lines_x) - 1) + span_x[c]
    cells[r, c] = h_layouts[segment, side_y[r], row_idx[r, c], lot_x[c]]

    if v_len > 0:
        # Lots lining vertical roads
        span_y = np.searchsorted(lines_y, ys) - 1
        along_y = ys - (lines_y[np.clip(span_y, 0, len(lines_y) - 1)] + corridor + depth)
        lot_y = np.clip((along_y // lot_m).astype(int), 0, v_lots - 1)
        side_x = (xs < lines_x[near_x]).astype(int)

        v_mask = block & (edge_x < depth) & (edge_y >= depth)
        v_mask &= ((span_y >= 0) & (span_y < len(lines_y) - 1))[:, None]
        r, c = np.nonzero(v_mask)
        segment = near_x[c] * (len(lines_y) - 1) + span_y[r]
        cells[r, c] = v_layouts[segment, side_x[c], col_idx[r, c], lot_y[r]]

    grid = SemanticGrid(
        cell_size_m=cs,
        cells=cells,
        road_lines_x=lines_x,
        road_lines_y=lines_y,
        horizontal_motifs=h_motifs.reshape(len(lines_y), len(lines_x) - 1),
        vertical_motifs=v_motifs.reshape(len(lines_x), len(lines_y) - 1),
    )

    logger.info(
        'Generated %gx%g m world: %dx%d road grid, %d/%d segments on shared motifs',
        width, height, len(lines_x), len(lines_y),
        int(np.sum(grid.segment_motifs() >= 0)), grid.segment_motifs().size,
    )
    return grid
