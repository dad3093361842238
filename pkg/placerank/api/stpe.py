__all__ = [
    'WindowEntry', 'StpeState', 'push_frame', 'select_window_frames', 'estimate_density', 'score_and_rerank',
    'stride_groups', 'estimate_strided_density', 'StpeRefiner',
]

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Sequence, Tuple

import numpy as np

import placerank
from placerank import resources, types
from placerank.api import Refiner


logger = logging.getLogger(__name__)

SCORING_CHUNK = 4096


@dataclass
class WindowEntry:
    frame: 'resources.QueryFrame'
    hits: List['resources.RetrievalHit']
    pose: 'resources.Pose2'
    path_m: float
    fitted: 'resources.MixtureDensity | None' = None


class StpeState:
    def __init__(self, cfg: 'types.StpeConfig') -> None:
        """
        Sliding window of recent query frames with their cached retrievals and estimated poses.

        :arg cfg: Resolved STPE config.
        """
        self.cfg = cfg
        self.window: Deque[WindowEntry] = deque()
        self.reckoner = resources.DeadReckoner(
            interval_m=cfg.get('heading_interval_m', resources.DEFAULT_HEADING_INTERVAL_M),
            correct=cfg.get('heading_correction', True),
        )
        self.last_index: int | None = None
        self.path_m = 0.0

    def __len__(self) -> int:
        return len(self.window)

    @property
    def newest(self) -> WindowEntry:
        return self.window[-1]

    @property
    def frames(self) -> List['resources.QueryFrame']:
        return [entry.frame for entry in self.window]

    def entry(self, frame_index: int) -> WindowEntry:
        """
        Window entry of a frame.

        :arg frame_index: QueryFrame.index.
        :return: WindowEntry.
        """
        for entry in self.window:
            if entry.frame.index == frame_index:
                return entry

        raise placerank.PlacerankError(
            code='MissingRetrieval',
            message=f'Frame {frame_index} has no cached retrieval in the window.'
        )

    @property
    def path_span_m(self) -> float:
        return self.newest.path_m - self.window[0].path_m if self.window else 0.0


def push_frame(
        state: StpeState,
        frame: 'resources.QueryFrame',
        index: 'resources.DescriptorIndex',
        hits: List['resources.RetrievalHit'] | None = None,
) -> StpeState:
    """
    Adds a frame to the window: retrieves its top-C, estimates its pose and evicts stale frames.

    :arg state: STPE state (mutated in place and returned).
    :arg frame: Next query frame.
    :arg index: Descriptor index.
    :param hits: Precomputed top-C hits (retrieved here when omitted).
    :return: The updated state.
    """
    if state.last_index is not None and frame.index <= state.last_index:
        raise placerank.PlacerankError(
            code='OutOfOrderFrame',
            message=f'Frame index {frame.index} is not greater than {state.last_index}.',
        )

    if hits is None:
        hits = index.query_top_c(frame.descriptor, state.cfg['c_retrieve'])

    pose = state.reckoner.advance(frame.rel, frame.heading)
    if state.last_index is not None:
        state.path_m += frame.path_len_from_prev

    state.window.append(WindowEntry(frame=frame, hits=hits, pose=pose, path_m=state.path_m))
    state.last_index = frame.index

    while len(state.window) > state.cfg['l_window'] or state.path_span_m > state.cfg['window_m']:
        state.window.popleft()

    return state


def select_window_frames(state: StpeState, lambda_rate: float) -> List['resources.QueryFrame']:
    """
    Evenly strided subsample of ceil(lambda * n) window frames, anchored at the newest frame.

    :arg state: STPE state.
    :arg lambda_rate: Sampling rate in (0, 1].
    :return: Selected frames, oldest first.
    """
    frames = state.frames
    n = len(frames)
    if n == 0:
        raise placerank.PlacerankError(code='EmptyWindow', message='The window holds no frames.')

    count = min(n, max(1, math.ceil(lambda_rate * n - 1e-9)))
    positions = sorted({n - 1 - (i * n) // count for i in range(count)})

    return [frames[p] for p in positions]


def _frame_density(entry: WindowEntry, cfg: 'types.StpeConfig') -> 'resources.MixtureDensity':
    """Fits (once) the mixture of a frame's top-K retrieval positions."""
    if entry.fitted is None:
        particles = [
            resources.Point2(x=h.position[0], y=h.position[1], payload_id=h.submap_id)
            for h in entry.hits[:cfg['k_particles']]
        ]
        clusters = resources.dbscan(particles, cfg['radius_m'])
        entry.fitted = resources.fit_components(clusters, cfg['sigma_floor_m'])
    return entry.fitted


def estimate_density(
        state: StpeState,
        selected: Sequence['resources.QueryFrame'],
        cfg: 'types.StpeConfig',
) -> 'resources.MixtureDensity':
    """
    Propagates each selected frame's retrieval mixture to the newest frame and averages them.

    :arg state: STPE state.
    :arg selected: Frames chosen by select_window_frames.
    :arg cfg: STPE config.
    :return: Mixture over the current position.
    """
    if not selected:
        raise placerank.PlacerankError(code='EmptyMixtureList', message='No frames selected for estimation.')

    current = state.newest.pose
    densities = []

    for frame in selected:
        entry = state.entry(frame.index)
        delta = (current.x - entry.pose.x, current.y - entry.pose.y)
        densities.append(resources.translate(_frame_density(entry, cfg), delta))

    return resources.mix(densities)


def stride_groups(state: StpeState, lambda_rate: float) -> List[List['resources.QueryFrame']]:
    """
    Window frames split into consecutive runs, each ending at one of the frames select_window_frames picks.

    :arg state: STPE state.
    :arg lambda_rate: Sampling rate in (0, 1].
    :return: Runs of frames, oldest first; together they cover the window.
    """
    frames = state.frames
    position = {frame.index: p for p, frame in enumerate(frames)}
    groups, start = [], 0

    for frame in select_window_frames(state, lambda_rate):
        end = position[frame.index] + 1
        groups.append(frames[start:end])
        start = end

    return groups


def estimate_strided_density(
        state: StpeState,
        groups: Sequence[Sequence['resources.QueryFrame']],
        cfg: 'types.StpeConfig',
) -> 'resources.MixtureDensity':
    """
    Window mixture in which the frames of each stride share their components.

    Every frame is propagated and weighted as in estimate_density over the
    whole window; components of one stride that fall in the same r-sided cell
    are then merged, so the mixture holds about as many components as the
    selected frames alone would.

    :arg state: STPE state.
    :arg groups: Runs of frames from stride_groups.
    :arg cfg: STPE config.
    :return: Mixture over the current position.
    """
    members = [frame for group in groups for frame in group]
    if not members:
        raise placerank.PlacerankError(code='EmptyMixtureList', message='No frames selected for estimation.')

    pooled = estimate_density(state, members, cfg)
    labels = np.repeat(
        np.arange(len(groups)),
        [sum(len(_frame_density(state.entry(frame.index), cfg)) for frame in group) for group in groups],
    )
    return resources.merge_components(pooled, cfg['radius_m'], cfg['sigma_floor_m'], labels=labels)


def _pruned_pairs(
        density: 'resources.MixtureDensity',
        index: 'resources.DescriptorIndex',
        cfg: 'types.StpeConfig',
) -> Tuple[np.ndarray, np.ndarray]:
    """(row, component) pairs whose submap center lies within prune_sigma_mult * max(sigma) + r of the component mean."""
    radii = cfg['prune_sigma_mult'] * np.maximum(density.sigma_x, density.sigma_y) + cfg['radius_m']
    means = np.column_stack([density.mu_x, density.mu_y])
    neighbours = index.tree.query_ball_point(means, radii)

    counts = np.array([len(rows) for rows in neighbours], dtype=np.int64)
    if not counts.sum():
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)

    rows = np.concatenate([np.asarray(rows, dtype=np.int64) for rows in neighbours])
    return rows, np.repeat(np.arange(len(neighbours)), counts)


def score_and_rerank(
        density: 'resources.MixtureDensity',
        index: 'resources.DescriptorIndex',
        current_hits: List['resources.RetrievalHit'],
        cfg: 'types.StpeConfig',
        query: np.ndarray | None = None,
) -> 'resources.RankedResult':
    """
    Scores submaps by the mixture's mean over their square neighbourhood and re-ranks.

    In `database_wide` mode every submap near a component is scored against
    the components it is near, and the current hits are always present
    (scoring 0 when pruned away); in `candidate_set` mode only the current
    hits are scored, against every component.

    :arg density: Current mixture.
    :arg index: Descriptor index.
    :arg current_hits: Top-C hits of the newest frame.
    :arg cfg: STPE config.
    :param query: Newest frame's descriptor, used for similarities of submaps outside the hits.
    :return: RankedResult ordered by probability, similarity, id.
    """
    if len(density) == 0:
        raise placerank.PlacerankError(code='EmptyMixture', message='Cannot score with an empty mixture.')

    hit_rows = np.array([index.row(h.submap_id) for h in current_hits], dtype=np.int64)
    known = {index.row(h.submap_id): h.similarity for h in current_hits}

    pruning = cfg['scoring_mode'] == 'database_wide' and not math.isinf(cfg['prune_sigma_mult'])

    if pruning:
        pair_rows, pair_components = _pruned_pairs(density, index, cfg)
        rows = np.union1d(pair_rows, hit_rows).astype(np.int64)

        # Hits paired with no component score 0
        probabilities = resources.rect_probability_pairs(
            density, index.positions[rows, 0], index.positions[rows, 1], cfg['radius_m'],
            np.searchsorted(rows, pair_rows), pair_components,
        )
    else:
        rows = np.arange(len(index)) if cfg['scoring_mode'] == 'database_wide' else np.unique(hit_rows)
        probabilities = np.zeros(rows.shape[0], dtype=np.float64)

        for start in range(0, rows.shape[0], SCORING_CHUNK):
            chunk = rows[start:start + SCORING_CHUNK]
            probabilities[start:start + SCORING_CHUNK] = resources.rect_probability(
                density, index.positions[chunk, 0], index.positions[chunk, 1], cfg['radius_m']
            )

    probabilities[probabilities < cfg.get('probability_floor', 0.0)] = 0.0

    if query is not None:
        similarities = index.similarities(index.check_query(query), rows)
    else:
        # Without the query only hit similarities are known; others take the minimum cosine
        similarities = np.array([known.get(int(row), -1.0) for row in rows], dtype=np.float64)

    return resources.rank_entries(
        zip(index.ids[rows].tolist(), similarities.tolist(), probabilities.tolist()),
        mode=cfg['scoring_mode'],
    )


class StpeRefiner(Refiner):
    method = 'stpe'

    def __init__(self, client: 'placerank.Placerank') -> None:
        """
        Spatial-temporal particle estimation over one trajectory.

        :arg client: Placerank instance.
        """
        super().__init__(client)
        self.cfg = client.stpe_config
        self.state = StpeState(self.cfg)
        self.last_density: 'resources.MixtureDensity | None' = None

    def reset(self) -> None:
        self.state = StpeState(self.cfg)
        self.last_density = None

    def push(
            self,
            frame: 'resources.QueryFrame',
            hits: List['resources.RetrievalHit'] | None = None,
    ) -> 'resources.RankedResult':
        """
        Adds a frame and returns its re-ranked retrieval.

        :arg frame: Next query frame.
        :param hits: Precomputed top-C hits.
        :return: RankedResult.
        """
        push_frame(self.state, frame, self.index, hits=hits)

        if self.cfg.get('stride_merge', True) and self.cfg['lambda_rate'] < 1.0:
            selected = stride_groups(self.state, self.cfg['lambda_rate'])
            self.last_density = estimate_strided_density(self.state, selected, self.cfg)
        else:
            selected = select_window_frames(self.state, self.cfg['lambda_rate'])
            self.last_density = estimate_density(self.state, selected, self.cfg)

        logger.debug(
            'Frame %d: window=%d selected=%d components=%d',
            frame.index, len(self.state), len(selected), len(self.last_density)
        )

        return score_and_rerank(self.last_density, self.index, self.state.newest.hits, self.cfg, query=frame.descriptor)
