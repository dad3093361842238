__all__ = ['GeneratedScenario', 'generate_scenario', 'write_scenario', 'load_scenario', 'SCENARIO_FILES']

import json
import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Dict, List, Tuple

import numpy as np
from scipy.spatial import cKDTree

import placerank
from placerank import resources
from placerank.generators import world as world_module
from placerank.generators.database import DescriptorModel, generate_database
from placerank.generators.trajectory import generate_trajectory


logger = logging.getLogger(__name__)

MANIFEST_VERSION = 1
COVERAGE_RADIUS_M = 30.0
SCENARIO_FILES = {'database': 'submaps.jsonl', 'queries': 'queries.jsonl', 'manifest': 'manifest.json'}


@dataclass(frozen=True, eq=False)
class GeneratedScenario:
    database: List['resources.SubmapRecord']
    queries: List['resources.QueryFrame']
    world: 'world_module.SemanticGrid | None' = None
    spec: 'world_module.WorldSpec | None' = None

    @property
    def positions(self) -> Dict[int, Tuple[float, float]]:
        return {r.id: (r.center_u, r.center_v) for r in self.database}

    @property
    def ground_truth(self) -> List[Tuple[float, float]]:
        missing = [f.index for f in self.queries if f.gt is None]
        if missing:
            raise placerank.PlacerankError(
                code='MissingGroundTruth',
                message=f'{len(missing)} query frames carry no ground truth (first: {missing[0]}).'
            )
        return [f.gt for f in self.queries]

    def cropped(self, area_km2: float) -> 'GeneratedScenario':
        """
        Restricts the database to a square of the given area centered on the trajectory.

        :arg area_km2: Square area in km^2.
        :return: New scenario sharing the queries.
        """
        gt = np.array(self.ground_truth)
        center = (gt.min(axis=0) + gt.max(axis=0)) / 2
        half = np.sqrt(area_km2) * 1000.0 / 2

        database = [
            r for r in self.database
            if abs(r.center_u - center[0]) <= half and abs(r.center_v - center[1]) <= half
        ]
        return replace(self, database=database)


def _check_coverage(database: List['resources.SubmapRecord'], queries: List['resources.QueryFrame']) -> None:
    """Every query ground truth must have a submap within the coverage radius."""
    if not queries:
        return

    centers = np.array([(r.center_u, r.center_v) for r in database]).reshape(-1, 2)
    gt = np.array([f.gt for f in queries])
    distances = cKDTree(centers).query(gt)[0] if centers.shape[0] else np.full(gt.shape[0], np.inf)

    uncovered = np.flatnonzero(distances >= COVERAGE_RADIUS_M)
    if uncovered.size:
        raise placerank.PlacerankError(
            code='CoverageGap',
            message=f'{uncovered.size} queries have no submap within {COVERAGE_RADIUS_M} m (first: {uncovered[0]}).'
        )


def generate_scenario(spec: 'world_module.WorldSpec', length_m: float | None = None) -> GeneratedScenario:
    """
    Generates a world, its submap database and one query trajectory.

    :arg spec: WorldSpec instance.
    :param length_m: Trajectory length (defaults to WorldSpec.trajectory_length_m).
    :return: GeneratedScenario instance.
    """
    grid = world_module.generate_world(spec)
    model = DescriptorModel(grid, spec)

    database = generate_database(grid, spec, model=model)
    queries = generate_trajectory(grid, spec, length_m=length_m, model=model)
    _check_coverage(database, queries)

    return GeneratedScenario(database=database, queries=queries, world=grid, spec=spec)


def write_scenario(scenario: GeneratedScenario, out_dir: str | Path) -> Dict[str, Path]:
    """
    Writes the submap database, the query sequence and the manifest.

    :arg scenario: GeneratedScenario instance.
    :arg out_dir: Output directory (created when missing).
    :return: Paths written, keyed like SCENARIO_FILES.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {key: out_dir / name for key, name in SCENARIO_FILES.items()}

    resources.save_submapdb(scenario.database, paths['database'])
    resources.save_queryseq(scenario.queries, paths['queries'])

    manifest = {
        'version': MANIFEST_VERSION,
        'seed': scenario.spec.seed if scenario.spec else None,
        'world': scenario.spec.to_config() if scenario.spec else None,
        'files': {'database': SCENARIO_FILES['database'], 'queries': SCENARIO_FILES['queries']},
        'counts': {'submaps': len(scenario.database), 'queries': len(scenario.queries)},
    }
    paths['manifest'].write_text(json.dumps(manifest, indent=2, sort_keys=True) + '\n', encoding='utf-8')

    logger.info('Wrote scenario to %s', out_dir)
    return paths


def load_scenario(path: str | Path) -> GeneratedScenario:
    """
    Loads a scenario directory written by write_scenario (the world itself is not stored).

    :arg path: Scenario directory or its manifest file.
    :return: GeneratedScenario without a world grid.
    """
    path = Path(path)
    manifest_path = path if path.is_file() else path / SCENARIO_FILES['manifest']

    try:
        manifest = json.loads(manifest_path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as exc:
        raise placerank.FormatError(str(manifest_path), f'manifest is not valid JSON: {exc}')

    if manifest.get('version') != MANIFEST_VERSION:
        raise placerank.FormatError(str(manifest_path), f'unsupported version {manifest.get("version")}')

    files = manifest.get('files', {})
    base = manifest_path.parent
    spec = world_module.WorldSpec.from_config(manifest['world']) if manifest.get('world') else None

    return GeneratedScenario(
        database=resources.load_submapdb(base / files.get('database', SCENARIO_FILES['database'])),
        queries=resources.load_queryseq(base / files.get('queries', SCENARIO_FILES['queries'])),
        spec=spec,
    )
