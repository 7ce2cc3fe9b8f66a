from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ccnet import Overlay, derive_ibgp_safe_sets, gen_laminar_hierarchical, gen_random_metric
from ccnet import formats
from ccnet.formats import FormatError
from ccnet.generators import random_topology, synthetic_pop_topology


def test_topology_round_trip():
    topo = synthetic_pop_topology(12, 20, seed=1, name_prefix="p")
    back = formats.parse_topology(formats.format_topology(topo))
    assert back == topo


def test_topology_comments_and_rationals():
    text = "# header\nnode 0 a\nnode 1 b  # trailing\nedge 0 1 3/4\n"
    topo = formats.parse_topology(text)
    assert topo.edges == ((0, 1, Fraction(3, 4)),) and topo.names == ("a", "b")


@pytest.mark.parametrize("text,lineno", [
    ("node 0\nedge 0 1 1\n", 2),
    ("node 0\nnode 0\n", 2),
    ("node 1\n", 1),
    ("node 0\nnode 1\nedge 0 1 -2\n", 3),
    ("node 0\nnode 1\nedge 0 1 x\n", 3),
    ("node 0\nnode 1\nedge 0 1 1\nedge 1 0 2\n", 4),
    ("node 0\nvertex 1\n", 2),
])
def test_topology_errors_carry_line(text, lineno):
    with pytest.raises(FormatError) as exc:
        formats.parse_topology(text, "t.topo")
    assert exc.value.lineno == lineno
    assert str(exc.value).startswith(f"t.topo:{lineno}:")


def test_rocketfuel_merges_directions():
    text = "Seattle -> Denver 5\nDenver -> Seattle 3\nDenver -> Chicago 2\n"
    topo = formats.parse_rocketfuel(text)
    assert topo.names == ("Seattle", "Denver", "Chicago")
    assert topo.edges == ((0, 1, 3), (1, 2, 2))


def test_rocketfuel_bad_line():
    with pytest.raises(FormatError):
        formats.parse_rocketfuel("a b 3\n")


def test_metric_round_trip():
    m = gen_random_metric(6, 2)
    assert formats.metric_from_json(formats.metric_to_json(m)) == m


def test_instance_round_trip():
    sys_ = gen_laminar_hierarchical(6, 1, branching=3)
    back = formats.instance_from_json(formats.instance_to_json(sys_))
    assert back.safe == sys_.safe and back.base_edges == sys_.base_edges and back.demands == sys_.demands


def test_instance_default_demands():
    text = '{"n": 2, "base_edges": [[0, 1]], "safe": {"0,1": [0, 1], "1,0": [0, 1]}}'
    assert formats.instance_from_json(text).demands == ((0, 1), (1, 0))


def test_bad_instance():
    with pytest.raises(FormatError):
        formats.instance_from_json('{"n": 2}')


@settings(max_examples=30, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 9), st.integers(0, 9)).filter(lambda e: e[0] != e[1]), max_size=20))
def test_overlay_round_trip(edges):
    ov = Overlay(frozenset(edges), {"solver": "x", "seed": 3})
    back = formats.parse_overlay(formats.format_overlay(ov))
    assert back.edges == ov.edges and back.provenance == ov.provenance


def test_overlay_errors():
    with pytest.raises(FormatError):
        formats.parse_overlay("0 1 2\n")
    with pytest.raises(FormatError):
        formats.parse_overlay("3 3\n")


def test_read_any_instance(tmp_path):
    topo = random_topology(5, 0)
    sys_ = derive_ibgp_safe_sets(gen_random_metric(5, 0))
    (tmp_path / "t.topo").write_text(formats.format_topology(topo))
    (tmp_path / "m.json").write_text(formats.metric_to_json(gen_random_metric(5, 0)))
    (tmp_path / "i.json").write_text(formats.instance_to_json(sys_))
    for name in ("t.topo", "m.json", "i.json"):
        assert formats.read_any_instance(tmp_path / name).safe == sys_.safe
    (tmp_path / "x.json").write_text('{"foo": 1}')
    with pytest.raises(FormatError):
        formats.read_any_instance(tmp_path / "x.json")
