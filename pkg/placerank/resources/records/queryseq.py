__all__ = ['load_queryseq', 'save_queryseq']

import json
import logging
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

import placerank
from placerank import resources


logger = logging.getLogger(__name__)


def encode_frame(frame: 'resources.QueryFrame') -> Dict[str, Any]:
    """
    Encodes a query frame as a queryseq v1 line.

    :arg frame: QueryFrame instance.
    :return: JSON-ready dict.
    """
    output = {
        'index': int(frame.index),
        'descriptor': [float(x) for x in np.asarray(frame.descriptor, dtype=np.float32)],
        'rel': {'dx': frame.rel.dx, 'dy': frame.rel.dy, 'dtheta': frame.rel.dtheta},
        'heading': {'value': frame.heading.heading, 'valid': frame.heading.valid},
    }

    if frame.gt is not None:
        output['gt'] = {'x': float(frame.gt[0]), 'y': float(frame.gt[1])}

    return output


def decode_frame(data: Dict[str, Any]) -> 'resources.QueryFrame':
    """
    Decodes a queryseq v1 line.

    :arg data: Parsed JSON dict.
    :return: QueryFrame instance.
    """
    gt = data.get('gt')
    return resources.QueryFrame(
        index=int(data['index']),
        descriptor=np.asarray(data['descriptor'], dtype=np.float32),
        rel=resources.RelativeMotion(
            dx=float(data['rel']['dx']),
            dy=float(data['rel']['dy']),
            dtheta=float(data['rel']['dtheta']),
        ),
        heading=resources.HeadingSample(
            heading=float(data['heading']['value']),
            valid=bool(data['heading']['valid']),
        ),
        gt=(float(gt['x']), float(gt['y'])) if gt else None,
    )


def load_queryseq(path: str | Path) -> List['resources.QueryFrame']:
    """
    Loads a query sequence file.

    :arg path: queryseq v1 file.
    :return: Query frames in file order.
    """
    path = Path(path)
    frames = []

    with path.open('r', encoding='utf-8') as handle:
        for number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                frames.append(decode_frame(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise placerank.FormatError(str(path), f'line {number}: invalid frame ({exc})')

    logger.info('Loaded %d query frames from %s', len(frames), path)
    return frames


def save_queryseq(frames: List['resources.QueryFrame'], path: str | Path) -> None:
    """
    Writes a query sequence file.

    :arg frames: Query frames.
    :arg path: Output file.
    """
    with Path(path).open('w', encoding='utf-8') as handle:
        for frame in frames:
            handle.write(json.dumps(encode_frame(frame)) + '\n')
