import pytest

from jjlogic.cards import default_jjfet, load_card
from jjlogic.netlist import GROUND, ElaborationError, ElementKind, elaborate, parse, parse_file

from oracles import FIXTURES

NOT_SUB = """
.subckt NOT in out
IB1 0 a DC 60u
RS a g 15k
J1 a n_mid in JJ
R0 n_mid vb 1
N1 out vb g NT
IB2 0 out DC 35u
VBIAS vb 0 DC -0.7
.ends
"""


def test_identity_without_subckts():
    ast = parse("I1 0 a DC 35u\nR1 a 0 20k\n")
    c = elaborate(ast)
    assert [e.name for e in c.elements] == ["I1", "R1"]
    assert c.nodes == (GROUND, "a")
    assert c.element("R1").value == 20e3


def test_namespacing():
    ast = parse(".model JJ JJFET\n.model NT NTRON\n" + NOT_SUB + "X1 i1 o1 NOT\nX2 o1 o2 NOT\nV1 i1 0 DC 0\n")
    c = elaborate(ast)
    assert "X1.n_mid" in c.nodes and "X2.n_mid" in c.nodes
    assert c.element("X2.J1").nodes == ("X2.a", "X2.n_mid", "o1")
    assert c.element("X1.IB1").nodes == (GROUND, "X1.a")
    assert c.count(ElementKind.JJFET) == 2


def test_node_count_formula():
    # external nodes + internal nodes x instantiations
    ast = parse(".model JJ JJFET\n.model NT NTRON\n" + NOT_SUB + "X1 i1 o1 NOT\nX2 o1 o2 NOT\nX3 o2 o3 NOT\n")
    internal = {"a", "g", "n_mid", "vb"}
    external = {GROUND, "i1", "o1", "o2", "o3"}
    assert len(elaborate(ast).nodes) == len(external) + 3 * len(internal)


def test_nested_hierarchy():
    c = elaborate(parse_file(FIXTURES / "hierarchy.net"))
    assert "XA.X1.R1" in [e.name for e in c.elements]
    assert c.element("XA.X2.R1").nodes == ("XA.m", "XA.n")  # mid is a port of DIV
    assert c.element("XA.R3").nodes == ("XA.n", "out")


def test_deterministic():
    ast = parse_file(FIXTURES / "gate_xor2.net")
    assert elaborate(ast) == elaborate(ast)


def test_recursion():
    ast = parse(".subckt A x\nX1 x B\n.ends\n.subckt B y\nX1 y A\n.ends\nX0 n A\n")
    with pytest.raises(ElaborationError, match="recursive"):
        elaborate(ast)


def test_self_instantiation():
    with pytest.raises(ElaborationError, match="recursive"):
        elaborate(parse(".subckt A x\nX1 x A\n.ends\nX0 n A\n"))


def test_port_mismatch():
    with pytest.raises(ElaborationError, match="port"):
        elaborate(parse(".subckt A x y\nR1 x y 1\n.ends\nX0 n A\n"))


def test_card_resolution(tmp_path):
    card = (FIXTURES / "synthetic_jjfet.card").read_text()
    (tmp_path / "cards").mkdir()
    (tmp_path / "cards" / "c.card").write_text(card)
    ast = parse('.model JC JJFET card="c.card"\nJ1 a 0 a JC\nR1 a 0 1\n')
    with pytest.raises(ElaborationError, match="c.card"):
        elaborate(ast, base_dir=tmp_path)
    c = elaborate(ast, base_dir=tmp_path, card_paths=[tmp_path / "cards"])
    assert c.element("J1").model.r_n(0.0) == 50e3
    # netlist directory wins over search paths
    (tmp_path / "c.card").write_text(card.replace("50e3", "60e3"))
    c = elaborate(ast, base_dir=tmp_path, card_paths=[tmp_path / "cards"])
    assert c.element("J1").model.r_n(0.0) == 60e3


def test_inline_params_and_default_card():
    c = elaborate(parse(".model JJ JJFET v_t=-0.6\nJ1 a 0 a JJ\nR1 a 0 1\n"))
    p = c.element("J1").model
    assert p.v_t == -0.6 and p.r_sg == default_jjfet().r_sg


def test_bad_inline_param():
    with pytest.raises(ElaborationError):
        elaborate(parse(".model JJ JJFET bogus=1\nJ1 a 0 a JJ\n"))


def test_model_override():
    syn = load_card(FIXTURES / "synthetic_jjfet.card", "JJFET")
    c = elaborate(parse(".model JJ JJFET\nJ1 a 0 a JJ\n"), models={"JJ": syn})
    assert c.element("J1").model is syn


def test_with_values():
    c = elaborate(parse("I1 0 a DC 35u\nR1 a 0 20k\n"))
    d = c.with_values({"R1": 10e3, "I1": 1e-6})
    assert d.element("R1").value == 10e3 and d.element("I1").waveform.dc == 1e-6
    assert c.element("R1").value == 20e3
    with pytest.raises(KeyError):
        c.with_values({"R9": 1.0})
