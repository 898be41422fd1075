"""Case-file format tests: round-trips, structured errors, totality."""

import pytest

from shiftmarket.casefile import (
    CaseFormatError,
    CaseValidationError,
    parse_case,
    serialize_case,
)
from shiftmarket.cases import case_1bus_5t, case_3bus, case_ieee30

MINIMAL = """
[case]
name = "mini"

[periods]
count = 2

[[nodes]]
id = "a"

[[nodes]]
id = "b"

[[generators]]
id = "g"
node = "a"
capacity = 10.0
cost = [5.0, 6.0]

[[loads]]
id = "d"
node = "b"
entity = "e"
request = 8.0
value = 20.0

[[lines]]
id = "l"
from = "a"
to = "b"
capacity = 15.0
cost = 1.0
susceptance = 0.5

[[entities]]
id = "e"

[[virtual_links]]
id = "v"
entity = "e"
from = ["a", 1]
to = ["b", 2]
lower = 0.0
upper = 4.0
cost = 2.0
"""


def test_parse_minimal():
    case = parse_case(MINIMAL)
    assert case.name == "mini"
    assert case.num_periods == 2
    assert case.generators[0].bid_cost == (5.0, 6.0)
    assert case.generators[0].capacity == (10.0, 10.0)   # scalar broadcast
    assert case.entities[0].loads == ("d",)              # derived ownership
    assert case.virtual_links[0].kind == "spatiotemporal"


def test_parse_accepts_bytes():
    assert parse_case(MINIMAL.encode()).name == "mini"


@pytest.mark.parametrize("builtin", [
    case_3bus(1), case_3bus(4), case_3bus(7),
    case_1bus_5t(1), case_1bus_5t(5),
    case_ieee30(False), case_ieee30(True),
])
def test_roundtrip_builtin(builtin):
    # serialize -> parse must reproduce the identical CaseSpec
    text = serialize_case(builtin)
    assert parse_case(text) == builtin
    # and the emission itself is deterministic
    assert serialize_case(parse_case(text)) == text


def test_syntax_error_carries_position():
    with pytest.raises(CaseFormatError) as err:
        parse_case("[case\nname=1")
    assert "syntax error" in str(err.value)
    assert "line" in str(err.value)


def test_unknown_key_names_its_section():
    bad = MINIMAL.replace('susceptance = 0.5', "susceptance = 0.5\nbanana = 1")
    with pytest.raises(CaseFormatError) as err:
        parse_case(bad)
    assert "lines[0]" in str(err.value)
    assert "banana" in str(err.value)


def test_missing_required_key():
    bad = MINIMAL.replace('susceptance = 0.5\n', "")
    with pytest.raises(CaseFormatError) as err:
        parse_case(bad)
    assert "susceptance" in str(err.value)


def test_unknown_reference_is_validation_error():
    bad = MINIMAL.replace('node = "a"', 'node = "nowhere"', 1)
    with pytest.raises(CaseValidationError) as err:
        parse_case(bad)
    assert any(d.rule == "unknown reference" for d in err.value.diagnostics)


def test_self_loop_link_rejected():
    bad = MINIMAL.replace('to = ["b", 2]', 'to = ["a", 1]')
    with pytest.raises(CaseValidationError) as err:
        parse_case(bad)
    assert any(d.rule == "no self-link" for d in err.value.diagnostics)


def test_bound_violation_rejected():
    bad = MINIMAL.replace("lower = 0.0", "lower = 9.0")
    with pytest.raises(CaseValidationError) as err:
        parse_case(bad)
    assert any(d.rule == "bounds ordered" for d in err.value.diagnostics)


def test_wrong_series_type():
    bad = MINIMAL.replace("request = 8.0", 'request = "lots"')
    with pytest.raises(CaseFormatError) as err:
        parse_case(bad)
    assert "request" in str(err.value)


def test_period_array_length_mismatch():
    bad = MINIMAL.replace("cost = [5.0, 6.0]", "cost = [5.0, 6.0, 7.0]")
    with pytest.raises(CaseFormatError) as err:
        parse_case(bad)
    assert "per-period" in str(err.value)


def test_parser_never_crashes_on_fuzz():
    # totality: any mangled input must raise a CaseError, nothing else
    import random

    rng = random.Random(424242)
    chars = list(MINIMAL)
    for _ in range(200):
        mangled = chars[:]
        for _ in range(rng.randrange(1, 6)):
            k = rng.randrange(len(mangled))
            mangled[k] = rng.choice('[]="x1\n#,.')
        try:
            parse_case("".join(mangled))
        except (CaseFormatError, CaseValidationError):
            pass


def test_shipped_case_files_match_builders():
    # the annotated files under cases/ must stay in sync with the
    # built-in constructors they document
    from pathlib import Path

    root = Path(__file__).resolve().parent.parent / "cases"
    expected = {
        "3bus-s4.case": case_3bus(4),
        "1bus5t-s6.case": case_1bus_5t(6),
        "ieee30-flex.case": case_ieee30(True),
        "ieee30-noflex.case": case_ieee30(False),
    }
    for fname, case in expected.items():
        parsed = parse_case((root / fname).read_bytes())
        assert parsed == case, fname
    assert len(parsed.nodes) == 30


def test_dc_capacity_roundtrip():
    text = MINIMAL.replace(
        '[[entities]]\nid = "e"',
        '[[entities]]\nid = "e"\n[entities.dc_capacity]\n"b" = [9.0, 7.5]')
    case = parse_case(text)
    assert case.entities[0].dc_capacity == {"b": (9.0, 7.5)}
    assert parse_case(serialize_case(case)) == case
