__all__ = ['PlacerankError', 'ValidationError', 'DimensionMismatch', 'SubmapNotFound', 'FormatError']

from typing import List

from placerank import types


class PlacerankError(Exception):
    def __init__(self, code: str, message: str, **details) -> None:
        """
        Base exception for Placerank.

        :arg code: Error code.
        :arg message: Error message.
        :param details: Arbitrary details to add to the exception.
        """
        self.code = code
        self.message = message
        self.details = details

        super().__init__(f'[{self.code}] {self.message}')


class ValidationError(PlacerankError):
    def __init__(self, errors: List['types.ValidationErrorItem']):
        """
        Exception for validation errors in configs, specs and inputs.

        :arg errors: List of ValidationErrorItem dicts.
        """
        self.errors = errors

        formatted_message = 'Validation errors occurred:\n\n'

        for error in self.errors:
            formatted_message += f' \'{error["name"]}\': {error["message"]}\n'

        super().__init__('ValidationError', formatted_message)


class DimensionMismatch(PlacerankError):
    def __init__(self, expected: int, actual: int, where: str = 'descriptor') -> None:
        """
        Thrown when a descriptor does not have the dimension of the database.

        :arg expected: Expected dimension.
        :arg actual: Received dimension.
        :param where: What carried the bad descriptor.
        """
        self.expected = expected
        self.actual = actual

        super().__init__(
            'DimensionMismatch',
            f'{where} has dimension {actual}, expected {expected}',
            expected=expected,
            actual=actual,
        )


class SubmapNotFound(PlacerankError):
    def __init__(self, submap_id: int) -> None:
        """
        Thrown when a submap id is not present in an index.

        :arg submap_id: Requested submap id.
        """
        self.submap_id = submap_id
        super().__init__('SubmapNotFound', f'Submap not found: {submap_id}')


class FormatError(PlacerankError):
    def __init__(self, path: str, message: str) -> None:
        """
        Thrown when a database, query or spec file cannot be decoded.

        :arg path: Offending file.
        :arg message: What went wrong.
        """
        self.path = path
        super().__init__('FormatError', f'{path}: {message}', path=path)
