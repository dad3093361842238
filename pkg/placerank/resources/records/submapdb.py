__all__ = ['SUBMAPDB_VERSION', 'load_submapdb', 'save_submapdb', 'save_submapdb_binary']

import json
import logging
import struct
from pathlib import Path
from typing import List

import numpy as np

import placerank
from placerank import resources


logger = logging.getLogger(__name__)

SUBMAPDB_VERSION = 1
MAGIC = b'SMDB'

# magic, version u32, count u64, dim u32, 4 reserved bytes
HEADER = struct.Struct('<4sIQI4x')
RECORD_HEAD = struct.Struct('<Qdd')


def _descriptor(values: list, path: str, line: int) -> np.ndarray:
    try:
        return np.asarray(values, dtype=np.float32)
    except (TypeError, ValueError):
        raise placerank.FormatError(path, f'line {line}: descriptor must be a list of numbers')


def _load_jsonl(path: Path) -> List['resources.SubmapRecord']:
    records = []

    with path.open('r', encoding='utf-8') as handle:
        lines = [line for line in handle if line.strip()]

    if not lines:
        raise placerank.FormatError(str(path), 'missing header record')

    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise placerank.FormatError(str(path), f'header is not valid JSON: {exc}')

    if header.get('version') != SUBMAPDB_VERSION:
        raise placerank.FormatError(str(path), f'unsupported version {header.get("version")}')

    dimension = header.get('dimension')
    count = header.get('count')

    for number, line in enumerate(lines[1:], start=2):
        try:
            data = json.loads(line)
            record = resources.SubmapRecord(
                id=int(data['id']),
                center_u=float(data['u']),
                center_v=float(data['v']),
                descriptor=_descriptor(data['descriptor'], str(path), number),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise placerank.FormatError(str(path), f'line {number}: invalid record ({exc})')

        if record.descriptor.size != dimension:
            raise placerank.DimensionMismatch(dimension, record.descriptor.size, where=f'submap {record.id}')

        records.append(record)

    if count is not None and count != len(records):
        raise placerank.FormatError(str(path), f'header declares {count} records, found {len(records)}')

    return records


def _load_binary(path: Path) -> List['resources.SubmapRecord']:
    data = path.read_bytes()

    if len(data) < HEADER.size:
        raise placerank.FormatError(str(path), 'truncated header')

    magic, version, count, dimension = HEADER.unpack_from(data, 0)
    if magic != MAGIC or version != SUBMAPDB_VERSION:
        raise placerank.FormatError(str(path), f'unsupported binary header (version {version})')

    stride = RECORD_HEAD.size + 4 * dimension
    if len(data) != HEADER.size + count * stride:
        raise placerank.FormatError(str(path), f'expected {count} records of {stride} bytes')

    records = []
    offset = HEADER.size

    for _ in range(count):
        submap_id, u, v = RECORD_HEAD.unpack_from(data, offset)
        descriptor = np.frombuffer(data, dtype='<f4', count=dimension, offset=offset + RECORD_HEAD.size)
        records.append(resources.SubmapRecord(
            id=int(submap_id), center_u=u, center_v=v, descriptor=descriptor.astype(np.float32)
        ))
        offset += stride

    return records


def load_submapdb(path: str | Path) -> List['resources.SubmapRecord']:
    """
    Loads a submap database, accepting either the JSON-Lines or the binary variant.

    :arg path: Database file.
    :return: Submap records with float32 descriptors.
    """
    path = Path(path)

    with path.open('rb') as handle:
        is_binary = handle.read(len(MAGIC)) == MAGIC

    records = _load_binary(path) if is_binary else _load_jsonl(path)
    logger.info('Loaded %d submaps from %s (%s)', len(records), path, 'binary' if is_binary else 'jsonl')
    return records


def _dimension(records: List['resources.SubmapRecord']) -> int:
    dimension = np.asarray(records[0].descriptor).size if records else 0
    for record in records:
        if np.asarray(record.descriptor).size != dimension:
            raise placerank.DimensionMismatch(dimension, np.asarray(record.descriptor).size, where=f'submap {record.id}')
    return dimension


def save_submapdb(records: List['resources.SubmapRecord'], path: str | Path) -> None:
    """
    Writes the JSON-Lines database variant.

    :arg records: Submap records.
    :arg path: Output file.
    """
    dimension = _dimension(records)

    with Path(path).open('w', encoding='utf-8') as handle:
        handle.write(json.dumps({'version': SUBMAPDB_VERSION, 'dimension': dimension, 'count': len(records)}) + '\n')
        for record in records:
            descriptor = np.asarray(record.descriptor, dtype=np.float32)
            handle.write(json.dumps({
                'id': int(record.id),
                'u': float(record.center_u),
                'v': float(record.center_v),
                'descriptor': [float(x) for x in descriptor],
            }) + '\n')


def save_submapdb_binary(records: List['resources.SubmapRecord'], path: str | Path) -> None:
    """
    Writes the packed little-endian database variant.

    :arg records: Submap records.
    :arg path: Output file.
    """
    dimension = _dimension(records)

    with Path(path).open('wb') as handle:
        handle.write(HEADER.pack(MAGIC, SUBMAPDB_VERSION, len(records), dimension))
        for record in records:
            handle.write(RECORD_HEAD.pack(int(record.id), float(record.center_u), float(record.center_v)))
            handle.write(np.asarray(record.descriptor, dtype='<f4').tobytes())
