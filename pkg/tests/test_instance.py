import json
import math

import numpy as np
import pytest

from antsteer import instance as inst
from antsteer.instance import (EUC_2D, EXPLICIT, GEO, Instance, ParseError,
                               Tour, distance, from_coordinates, from_matrix,
                               list_bundled, load_bundled, parse_tsplib,
                               tour_length)

TRIANGLE_345 = [(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]


def test_euc2d_rounds_to_nearest_integer():
    assert distance(EUC_2D, (0, 0), (3, 4)) == 5
    assert distance(EUC_2D, (0, 0), (1, 1)) == 1      # sqrt(2) -> 1.41 -> 1
    assert distance(EUC_2D, (0, 0), (0, 1.5)) == 2    # x.5 rounds up
    assert distance(EUC_2D, (2, 7), (2, 7)) == 0


def test_geo_matches_worked_values():
    # same point is zero, symmetry holds, and a degenerate-minute
    # coordinate (x.60 is 60 minutes = 1 degree) still parses as DDD.MM
    a, b = (16.47, 96.10), (16.47, 94.44)
    assert distance(GEO, a, b) == distance(GEO, b, a) > 0
    # the +1.0 floor makes the raw self-distance 1; the cost matrix
    # diagonal is zeroed at construction instead
    assert distance(GEO, a, a) == 1
    geo = from_coordinates("g", GEO, [a, b, (21.0, 95.0)])
    assert np.diagonal(geo.costs).sum() == 0


def test_geo_minutes_are_not_decimal_fractions():
    # DDD.MM convention: 0.60 is 60 minutes, exactly one degree
    whole = distance(GEO, (0.0, 0.0), (1.0, 0.0))
    minutes = distance(GEO, (0.0, 0.0), (0.60, 0.0))
    assert whole == minutes > 0


def test_distance_rejects_explicit():
    with pytest.raises(ValueError):
        distance(EXPLICIT, (0, 0), (1, 1))


def test_instance_validation():
    with pytest.raises(ValueError, match="dimension"):
        from_coordinates("tiny", EUC_2D, [(0, 0), (1, 0)])
    with pytest.raises(ValueError, match="diagonal"):
        from_matrix("d", [[1, 2, 3], [2, 0, 4], [3, 4, 0]])
    with pytest.raises(ValueError, match="negative"):
        from_matrix("neg", [[0, -1, 3], [-1, 0, 4], [3, 4, 0]])
    with pytest.raises(ValueError, match="symmetric"):
        Instance(name="a", dimension=3, edge_weight_type=EUC_2D,
                 coordinates=((0, 0), (1, 0), (0, 1)),
                 costs=np.array([[0, 1, 2], [3, 0, 4], [5, 6, 0]]))


def test_costs_are_immutable():
    tri = from_coordinates("t", EUC_2D, TRIANGLE_345)
    with pytest.raises(ValueError):
        tri.costs[0, 1] = 99


def test_asymmetric_explicit_allowed():
    asym = from_matrix("asym", [[0, 1, 5], [2, 0, 1], [1, 9, 0]])
    assert not asym.symmetric
    assert tour_length(asym, [0, 1, 2]) == 1 + 1 + 1
    assert tour_length(asym, [0, 2, 1]) == 5 + 9 + 2


def test_tour_length_and_permutation_guard():
    tri = from_coordinates("t", EUC_2D, TRIANGLE_345)
    assert tour_length(tri, [0, 1, 2]) == 12
    assert tour_length(tri, [2, 0, 1]) == 12
    t = Tour.from_order(tri, (1, 0, 2))
    assert t.length == 12 and t.order == (1, 0, 2)
    for bad in ([0, 1], [0, 1, 1], [0, 1, 3]):
        with pytest.raises(ValueError, match="permutation"):
            tour_length(tri, bad)


def test_json_roundtrip():
    tri = from_coordinates("t", EUC_2D, TRIANGLE_345)
    again = Instance.from_json(tri.to_json())
    assert again.name == tri.name
    assert again.edge_weight_type == tri.edge_weight_type
    assert again.coordinates == tri.coordinates
    assert np.array_equal(again.costs, tri.costs)
    asym = from_matrix("e", [[0, 2, 3], [2, 0, 4], [5, 4, 0]])
    back = Instance.from_json(asym.to_json())
    assert back.coordinates is None
    assert np.array_equal(back.costs, asym.costs)


MINIMAL_EUC = """NAME: small
TYPE: TSP
DIMENSION: 3
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 0 0
2 3 0
3 0 4
EOF
"""


def test_parse_minimal_euc2d():
    got = parse_tsplib(MINIMAL_EUC)
    assert got.name == "small" and got.n == 3
    assert got.costs[0, 1] == 3 and got.costs[0, 2] == 4 and got.costs[1, 2] == 5


def test_parse_full_matrix_and_upper_row():
    full = parse_tsplib(
        "NAME: m\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n"
        "0 3 4\n3 0 5\n4 5 0\nEOF\n")
    upper = parse_tsplib(
        "NAME: u\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
        "EDGE_WEIGHT_FORMAT: UPPER_ROW\nEDGE_WEIGHT_SECTION\n"
        "3 4\n5\nEOF\n")
    assert np.array_equal(full.costs, upper.costs)


@pytest.mark.parametrize("text,fragment,line", [
    ("NAME: x\nDIMENSION: 3\nNODE_COORD_SECTION\n1 0 0\nEOF\n",
     "EDGE_WEIGHT_TYPE", None),
    ("NAME: x\nDIMENSION: q\nEDGE_WEIGHT_TYPE: EUC_2D\nEOF\n",
     "DIMENSION is not an integer", None),
    (MINIMAL_EUC.replace("2 3 0", "2 3"), "needs index, x, y", 7),
    (MINIMAL_EUC.replace("2 3 0", "2 x 0"), "malformed numeric", 7),
    (MINIMAL_EUC.replace("2 3 0", "9 3 0"), "out of range", 7),
    (MINIMAL_EUC.replace("2 3 0", "1 3 0"), "duplicate node index", 7),
    ("NAME: x\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nstray line\nEOF\n",
     "unrecognized line", 4),
    ("NAME: x\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\n"
     "EDGE_WEIGHT_SECTION\n0 3 4\n3 0 5\nEOF\n", "expected 9", 6),
])
def test_parse_errors_carry_line_numbers(text, fragment, line):
    with pytest.raises(ParseError, match=fragment) as err:
        parse_tsplib(text)
    if line is not None:
        assert err.value.line == line


def test_parser_ignores_display_sections():
    text = MINIMAL_EUC.replace(
        "NODE_COORD_SECTION",
        "DISPLAY_DATA_SECTION\n1 9 9\n2 9 9\n3 9 9\nNODE_COORD_SECTION")
    assert parse_tsplib(text).costs[0, 1] == 3


def test_bundled_corpus_loads():
    names = list_bundled()
    assert {"burma14", "ulysses16", "demo5", "burma14x2"} <= set(names)
    b14 = load_bundled("burma14")
    assert b14.n == 14 and b14.edge_weight_type == GEO and b14.symmetric
    assert load_bundled("burma14x2").n == 28
    d5 = load_bundled("demo5")
    assert d5.edge_weight_type == EXPLICIT
    # the demo matrix is tuned so inverse distances from node 2 normalize
    # to the canonical 30/40/10/20 split
    row = np.delete(d5.costs[2], 2).astype(float)
    probs = (1 / row) / (1 / row).sum()
    assert np.allclose(probs, [0.3, 0.4, 0.1, 0.2])


def test_unknown_bundled_name():
    with pytest.raises(FileNotFoundError):
        load_bundled("berlin52")
