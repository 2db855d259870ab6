import pytest

from jjlogic.cards import CardError, default_jjfet, default_ntron, dump_card, load_card, parse_card
from jjlogic.devices import JjfetParams, NtronParams

from oracles import FIXTURES


def test_defaults_load():
    jj, nt = default_jjfet(), default_ntron()
    assert isinstance(jj, JjfetParams) and isinstance(nt, NtronParams)
    assert (jj.v_t, jj.v_crit, jj.ic_a0, jj.ic_a1) == (-0.7, 0.24, 2.886e-7, 3.21e-7)
    assert nt.r_channel == 20e3 and not nt.latching


@pytest.mark.parametrize("p", [default_jjfet(), default_ntron()])
def test_roundtrip(p):
    kind = "JJFET" if isinstance(p, JjfetParams) else "NTRON"
    assert parse_card(dump_card(p, header="copy"), kind) == p


def test_fixture_cards():
    syn = load_card(FIXTURES / "synthetic_jjfet.card", "JJFET")
    assert syn.r_sg(0.3) == 1e3 and syn.r_n(0.3) == 50e3
    flat = load_card(FIXTURES / "flat_jjfet.card", "JJFET")
    assert flat.r_n(0.3) / flat.r_sg(0.3) - 1 < 1e-8


@pytest.mark.parametrize("text, line, fragment", [
    ("param v_t = x\ntable r_sg\n0 1\n1 2\nend\ntable r_n\n0 3\n1 4\nend\n", 1, "number"),
    ("param bogus = 1\n", 1, "unknown"),
    ("table r_sg\n0 1\n1 2\n", 1, "missing 'end'"),
    ("table r_sg\n0 1 2\nend\n", 2, "two numbers"),
    ("table r_sg\n0 1\n1 2\nend\n", 0, "missing table 'r_n'"),
    ("frobnicate\n", 1, "unexpected"),
    ("table r_sg\n0 2\n1 2\nend\ntable r_n\n0 1\n1 1\nend\n", 0, "r_n must exceed"),
])
def test_errors(text, line, fragment):
    with pytest.raises(CardError) as exc:
        parse_card(text, "JJFET", source="t.card")
    assert exc.value.line == line
    assert fragment in str(exc.value)


def test_ntron_card_latching():
    p = parse_card("param latching = 1\ntable i_sw\n0 6e-5\n1e-5 3e-5\nend\n", "NTRON")
    assert p.latching is True
