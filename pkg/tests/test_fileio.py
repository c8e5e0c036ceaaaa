from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from designbounds.designs import IncidenceStructure
from designbounds.fileio import (
    FormatError,
    format_design,
    format_oa,
    parse_design,
    parse_oa,
    read_design,
    read_oa,
    write_design,
    write_oa,
)
from designbounds.oracle import fano_plane, oa_linear, projective_plane

FIXTURES = Path(__file__).parent / "fixtures"
GOOD_DESIGNS = ["fano.design", "broken.design", "near_pencil5.design", "singletons.design",
                "pg23.design", "ag23.design"]
GOOD_OAS = ["oa_3_5.txt", "oa_2_2.txt", "oa_bad.txt"]


@pytest.mark.parametrize("name", GOOD_DESIGNS)
def test_design_fixture_round_trip(name):
    inc = read_design(FIXTURES / name)
    text = format_design(inc)
    assert parse_design(text) == inc
    assert format_design(parse_design(text)) == text


@pytest.mark.parametrize("name", GOOD_OAS)
def test_oa_fixture_round_trip(name):
    oa = read_oa(FIXTURES / name)
    text = format_oa(oa)
    assert parse_oa(text) == oa
    assert format_oa(parse_oa(text)) == text


def test_fixture_contents():
    assert read_design(FIXTURES / "fano.design") == fano_plane()
    assert read_design(FIXTURES / "pg23.design") == projective_plane(3)
    assert read_oa(FIXTURES / "oa_3_5.txt") == oa_linear(5, 3)


def test_comments_and_blank_lines():
    text = "# header next\n\n3 2\n# a block\n2 0\n\n1 2\n"
    inc = parse_design(text)
    assert inc.blocks == ((0, 2), (1, 2))
    assert format_design(inc) == "3 2\n0 2\n1 2\n"


def test_write_then_read(tmp_path):
    write_design(tmp_path / "f.design", fano_plane())
    assert read_design(tmp_path / "f.design") == fano_plane()
    write_oa(tmp_path / "a.txt", oa_linear(3, 3))
    assert read_oa(tmp_path / "a.txt") == oa_linear(3, 3)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# only comments\n",
        "3\n0 1\n",
        "3 2\n0 1\n",
        "3 1\n0 x\n",
        "3 1\n0 5\n",
        "3 1\n0 0\n",
        "-1 0\n",
    ],
)
def test_design_errors(text):
    with pytest.raises(FormatError):
        parse_design(text)


def test_malformed_fixture():
    with pytest.raises(FormatError):
        read_design(FIXTURES / "malformed.design")
    with pytest.raises(FormatError):
        read_design(FIXTURES / "out_of_range.design")


@pytest.mark.parametrize(
    "text",
    ["", "2 2\n0 0\n", "2 2 1\n0 0\n0 1\n1 0\n", "2 2 1\n0 0\n0 1\n1 0\n1 2\n",
     "2 2 1\n0 0\n0 1\n1 0\n1\n", "2 2 1\n0 0\n0 1\n1 0\n1 y\n", "1 2 1\n0\n1\n0\n1\n"],
)
def test_oa_errors(text):
    with pytest.raises(FormatError):
        parse_oa(text)


def test_format_error_is_value_error():
    assert issubclass(FormatError, ValueError)


blocks_strategy = st.integers(1, 9).flatmap(
    lambda v: st.tuples(
        st.just(v),
        st.lists(st.sets(st.integers(0, v - 1), min_size=1), max_size=12),
    )
)


@given(blocks_strategy)
def test_design_round_trip_property(data):
    v, blocks = data
    inc = IncidenceStructure(v, [sorted(b) for b in blocks])
    text = format_design(inc)
    assert parse_design(text) == inc
    assert format_design(parse_design(text)) == text
