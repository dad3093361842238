__all__ = ['parse_values', 'parse_assignment']

from typing import Any, List, Tuple

from pyparsing import (
    Word, alphas, alphanums, Group, Optional, Suppress, delimitedList, oneOf, pyparsing_common, QuotedString,
    ParseException, StringEnd,
)

import placerank


# Numbers and ranges
number = pyparsing_common.number
range_expr = Group(number + Suppress(':') + number + Suppress(':') + number).set_results_name('range')
item = range_expr | number

# Value lists: "0.1:1.0:0.1", "0,5,10,15,30" or "{0,5,10,15,30}"
value_list = (
    (Suppress('{') + delimitedList(item) + Suppress('}')) |
    (Suppress('[') + delimitedList(item) + Suppress(']')) |
    delimitedList(item)
) + StringEnd()

# Assignments: "k_particles=30", "scoring_mode=candidate_set", "heading_correction=false"
key = Word(alphas + '_', alphanums + '_.').set_results_name('key')
boolean = oneOf('true false', caseless=True).set_results_name('boolean')
quoted = (QuotedString('"') | QuotedString("'")).set_results_name('string')
bare = Word(alphanums + '_-').set_results_name('string')
assignment = key + Suppress('=') + Optional(number.set_results_name('number') | boolean | quoted | bare) + StringEnd()


def expand_range(start: float, stop: float, step: float) -> List[float]:
    """
    Expands an inclusive start:stop:step range.

    :arg start: First value.
    :arg stop: Last value (inclusive, with tolerance).
    :arg step: Positive increment.
    :return: List of values.
    """
    if step <= 0:
        raise placerank.PlacerankError(
            code='ExpressionParsingError',
            message=f'Range step must be positive, got {step}.'
        )

    count = int((stop - start) / step + 1e-9) + 1
    values = [start + i * step for i in range(max(count, 0))]

    # Keep decimal steps tidy (0.1 * 3 -> 0.30000000000000004)
    return [round(value, 12) for value in values]


def parse_values(expression: str | List[float] | Tuple[float, ...]) -> List[float]:
    """
    Parses a sweep value expression into a flat list of numbers.

    :arg expression: Expression string, or an already expanded list.
    :return: List of numeric values.
    """
    if isinstance(expression, (list, tuple)):
        return [float(x) if isinstance(x, float) else x for x in expression]

    try:
        parsed = value_list.parse_string(str(expression))
    except ParseException as e:
        raise placerank.PlacerankError(
            code='ExpressionParsingError',
            message=f'Unable to parse value expression \'{expression}\': {e}',
        )

    output = []
    for part in parsed:
        if isinstance(part, (int, float)):
            output.append(part)
        else:
            output.extend(expand_range(*[float(x) for x in part]))

    return output


def parse_assignment(expression: str) -> Tuple[str, Any]:
    """
    Parses a `key=value` override.

    :arg expression: Assignment string.
    :return: Tuple of dotted key and typed value.
    """
    try:
        parsed = assignment.parse_string(expression.strip())
    except ParseException as e:
        raise placerank.PlacerankError(
            code='ExpressionParsingError',
            message=f'Unable to parse override \'{expression}\': {e}',
        )

    if 'number' in parsed:
        return parsed.key, parsed.number
    if 'boolean' in parsed:
        return parsed.key, parsed.boolean.lower() == 'true'
    if 'string' in parsed:
        return parsed.key, parsed.string

    raise placerank.PlacerankError(
        code='ExpressionParsingError',
        message=f'Override \'{expression}\' has no value.',
    )
