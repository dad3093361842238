__all__ = ['Validator']

import math
from typing import Any, List

import placerank
from placerank import types


class Validator:
    def __init__(self, parent: 'Validator' = None, path: str | None = None) -> None:
        """
        Validation helper class to collect config and input errors before raising.

        :param parent: Parent Validator instance if applicable.
        :param path: Path (where nested).
        """
        self.parent = parent
        self.path = path
        self.children = []
        self._errors = []

    @property
    def errors(self) -> List['types.ValidationErrorItem']:
        """Recursively provide errors."""
        output = [*self._errors]
        for child in self.children:
            output.extend(child.errors)
        return output

    def spawn_new(self, path: str) -> 'Validator':
        """
        Spawns a new validator instance for nested validation.

        :arg path: Path of new validator.
        :return: Validator instance.
        """
        full_path = self.path + '.' + path if self.path else path
        validator = Validator(parent=self, path=full_path)
        self.children.append(validator)
        return validator

    def add(self, name: str, message: str) -> None:
        """
        Adds a validation error.

        :arg name: Field name.
        :arg message: Error message.
        """
        self._errors.append({'name': self.path + '.' + name if self.path else name, 'message': message})

    def require_number(
            self,
            name: str,
            value: Any,
            minimum: float | None = None,
            maximum: float | None = None,
            exclusive_minimum: bool = False,
            integer: bool = False,
    ) -> None:
        """
        Checks a numeric field against its range.

        :arg name: Field name.
        :arg value: Field value.
        :param minimum: Lower bound.
        :param maximum: Upper bound (inclusive).
        :param exclusive_minimum: Treat the lower bound as exclusive.
        :param integer: Require an integer value.
        """
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(name, 'Value must be a number.')
            return

        if integer and not isinstance(value, int):
            self.add(name, 'Value must be an integer.')
            return

        if math.isnan(value):
            self.add(name, 'Value must not be NaN.')
            return

        if minimum is not None:
            if exclusive_minimum and value <= minimum:
                self.add(name, f'Value must be greater than {minimum}.')
            elif not exclusive_minimum and value < minimum:
                self.add(name, f'Value must be at least {minimum}.')

        if maximum is not None and value > maximum:
            self.add(name, f'Value must be at most {maximum}.')

    def raise_for_validation_errors(self) -> None:
        """Raises a ValidationError exception if there are any errors."""
        if self.errors:
            raise placerank.ValidationError(self.errors)
