__all__ = ['Placerank']

import logging
from pathlib import Path
from typing import Any, Dict, List, Type

from placerank import types, api, resources
from . import exceptions


logger = logging.getLogger(__name__)

REFINERS: Dict[str, Type['api.Refiner']] = {
    'single': api.SingleRefiner,
    'stpe': api.StpeRefiner,
    'pf': api.PfRefiner,
}


class Placerank:
    def __init__(
            self,
            index: 'resources.DescriptorIndex',
            stpe_config: Dict[str, Any] | None = None,
            pf_config: Dict[str, Any] | None = None,
    ) -> None:
        """
        Placerank - sequential place recognition over a submap descriptor database.

        :arg index: Built descriptor index.
        :param stpe_config: Partial STPE config (defaults fill the rest).
        :param pf_config: Partial particle-filter config.
        """
        self.__index = index
        self.__stpe_config = resources.resolve_stpe_config(stpe_config)
        self.__pf_config = resources.resolve_pf_config(pf_config)

    @classmethod
    def from_records(cls, records: List['resources.SubmapRecord'], **kwargs) -> 'Placerank':
        """
        Builds the index from in-memory submap records.

        :arg records: Submap records.
        :return: Placerank instance.
        """
        return cls(resources.build_index(records), **kwargs)

    @classmethod
    def from_file(cls, path: str | Path, **kwargs) -> 'Placerank':
        """
        Loads a submap database file (JSON-Lines or binary) and builds the index.

        :arg path: Database file.
        :return: Placerank instance.
        """
        return cls.from_records(resources.load_submapdb(path), **kwargs)

    @property
    def index(self) -> 'resources.DescriptorIndex':
        return self.__index

    @property
    def stpe_config(self) -> 'types.StpeConfig':
        return self.__stpe_config

    @property
    def pf_config(self) -> 'types.PfConfig':
        return self.__pf_config

    def refiner(self, method: 'types.MethodType') -> 'api.Refiner':
        """
        Instantiates a fresh refiner for one trajectory.

        :arg method: One of `single`, `stpe` or `pf`.
        :return: Refiner instance.
        """
        if method not in REFINERS:
            raise exceptions.PlacerankError(
                code='MethodNotDefined',
                message=f'Method \'{method}\' is not defined. Choose one of: {", ".join(REFINERS)}.'
            )

        return REFINERS[method](self)

    def run(
            self,
            frames: List['resources.QueryFrame'],
            method: 'types.MethodType' = 'stpe',
    ) -> List['resources.RankedResult']:
        """
        Refines a whole query sequence.

        :arg frames: Query frames in order.
        :param method: Refinement method.
        :return: One RankedResult per frame.
        """
        refiner = self.refiner(method)
        return [refiner.push(frame) for frame in frames]
