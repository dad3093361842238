__all__ = ['Particle', 'PfState', 'pf_init', 'pf_step', 'pf_rank', 'PfRefiner']

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

import placerank
from placerank import resources, types
from placerank.api import Refiner


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Particle:
    x: float
    y: float
    alive: bool = True


@dataclass(frozen=True, eq=False)
class PfState:
    particles: np.ndarray
    rng: np.random.Generator
    reseeded: bool = False
    reseeds: int = 0

    def __len__(self) -> int:
        return int(self.particles.shape[0])

    @property
    def particle_list(self) -> List[Particle]:
        return [Particle(float(x), float(y)) for x, y in self.particles]


def _hit_positions(hits: List['resources.RetrievalHit'], limit: int) -> np.ndarray:
    return np.array([h.position for h in hits[:limit]], dtype=np.float64).reshape(-1, 2)


def pf_init(
        hits: List['resources.RetrievalHit'],
        cfg: 'types.PfConfig',
        rng: np.random.Generator | None = None,
        reseeds: int = 0,
) -> PfState:
    """
    Places the initial particles on the top-k_init hit positions.

    When there are fewer hits than particles the hits are cycled and every
    repeated copy is jittered uniformly within +-jitter_m.

    :arg hits: Retrieval hits of the current query.
    :arg cfg: Particle-filter config.
    :param rng: Random generator (seeded from the config when omitted).
    :param reseeds: Reseed counter to carry forward.
    :return: Freshly seeded state.
    """
    if not hits:
        raise placerank.PlacerankError(code='EmptyHits', message='Cannot initialise particles without hits.')

    rng = rng if rng is not None else np.random.default_rng(cfg.get('seed', 0))
    k_init = cfg['k_init']
    positions = _hit_positions(hits, k_init)

    particles = positions[np.arange(k_init) % positions.shape[0]].copy()
    repeated = np.arange(k_init) >= positions.shape[0]

    if np.any(repeated):
        jitter = cfg.get('jitter_m', 5.0)
        particles[repeated] += rng.uniform(-jitter, jitter, size=(int(np.sum(repeated)), 2))

    return PfState(particles=particles, rng=rng, reseeded=True, reseeds=reseeds)


def pf_step(
        state: PfState,
        motion: Tuple[float, float],
        hits: List['resources.RetrievalHit'],
        cfg: 'types.PfConfig',
) -> PfState:
    """
    Moves every particle by the world-frame motion and keeps those near a current top-k hit.

    If no particle survives, the filter is reseeded from the current hits.

    :arg state: Previous state.
    :arg motion: (dx, dy) world-frame displacement since the previous query.
    :arg hits: Retrieval hits of the current query.
    :arg cfg: Particle-filter config.
    :return: New state.
    """
    moved = state.particles + np.asarray(motion, dtype=np.float64)
    gates = _hit_positions(hits, cfg['k_topk'])

    if gates.shape[0]:
        distances = np.linalg.norm(moved[:, None, :] - gates[None, :, :], axis=-1)
        alive = np.any(distances <= cfg['retain_radius_m'], axis=1)
    else:
        alive = np.zeros(moved.shape[0], dtype=bool)

    if not np.any(alive):
        logger.debug('All %d particles depleted, reseeding', moved.shape[0])
        return pf_init(hits, cfg, rng=state.rng, reseeds=state.reseeds + 1)

    return PfState(particles=moved[alive], rng=state.rng, reseeded=False, reseeds=state.reseeds)


def pf_rank(
        state: PfState,
        hits: List['resources.RetrievalHit'],
        cfg: 'types.PfConfig',
) -> 'resources.RankedResult':
    """
    Ranks the current hits by the number of particles within the retain radius.

    A state that was just reseeded carries no history, so its ranking falls
    back to similarity order.

    :arg state: Current state.
    :arg hits: Retrieval hits of the current query.
    :arg cfg: Particle-filter config.
    :return: RankedResult (probability = particle share).
    """
    positions = _hit_positions(hits, len(hits))

    if state.reseeded or len(state) == 0 or positions.shape[0] == 0:
        shares = np.zeros(positions.shape[0])
    else:
        distances = np.linalg.norm(positions[:, None, :] - state.particles[None, :, :], axis=-1)
        shares = np.sum(distances <= cfg['retain_radius_m'], axis=1) / len(state)

    return resources.rank_entries(
        ((h.submap_id, h.similarity, float(share)) for h, share in zip(hits, shares)),
        mode='particle_count',
    )


class PfRefiner(Refiner):
    method = 'pf'

    def __init__(self, client: 'placerank.Placerank') -> None:
        """
        Classical survive-or-reseed particle filter inside the retrieval framework.

        :arg client: Placerank instance.
        """
        super().__init__(client)
        self.cfg = client.pf_config
        self.reset()

    @property
    def retrieve_c(self) -> int:
        return max(self.client.stpe_config['c_retrieve'], self.cfg['k_init'])

    def reset(self) -> None:
        stpe = self.client.stpe_config
        self.reckoner = resources.DeadReckoner(
            interval_m=stpe.get('heading_interval_m', resources.DEFAULT_HEADING_INTERVAL_M),
            correct=stpe.get('heading_correction', True),
        )
        self.state: PfState | None = None
        self.pose: 'resources.Pose2 | None' = None

    def push(
            self,
            frame: 'resources.QueryFrame',
            hits: List['resources.RetrievalHit'] | None = None,
    ) -> 'resources.RankedResult':
        """
        Propagates, gates and ranks for the next frame.

        :arg frame: Next query frame.
        :param hits: Precomputed hits.
        :return: RankedResult.
        """
        hits = hits if hits is not None else self.retrieve(frame)
        pose = self.reckoner.advance(frame.rel, frame.heading)

        if self.state is None:
            self.state = pf_init(hits, self.cfg)
        else:
            motion = (pose.x - self.pose.x, pose.y - self.pose.y)
            self.state = pf_step(self.state, motion, hits, self.cfg)

        self.pose = pose
        return pf_rank(self.state, hits, self.cfg)
