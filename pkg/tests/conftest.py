import random

import pytest

from fairships.rules import Coordinate, Orientation, Placement, validate_fleet

# The classic sample board: five ships, one of each size 1..5.
# size-3 down column 1 from A1, size-4 across row D from D3, size-5 down
# column 8 from C8, size-2 across row F from F2, size-1 at G5.
TABLE_PLACEMENTS = [
    Placement(3, Coordinate(0, 0), Orientation.VERTICAL),
    Placement(4, Coordinate(3, 2), Orientation.HORIZONTAL),
    Placement(5, Coordinate(2, 7), Orientation.VERTICAL),
    Placement(2, Coordinate(5, 1), Orientation.HORIZONTAL),
    Placement(1, Coordinate(6, 4), Orientation.HORIZONTAL),
]


@pytest.fixture
def table_placements():
    return list(TABLE_PLACEMENTS)


@pytest.fixture
def table_cells():
    return validate_fleet(TABLE_PLACEMENTS)


@pytest.fixture
def rng():
    return random.Random(0xBEEF)
