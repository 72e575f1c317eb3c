import json

import pytest

from adamson.groups import OrderCapError
from adamson.specs import SpecError, load_spec, parse_coeffs, parse_group, parse_subgroup


def test_short_group_forms():
    assert parse_group("cyclic:4").group.order == 4
    assert parse_group("z:6").group.order == 6
    assert parse_group("dihedral:4").group.order == 8
    assert parse_group("symmetric:3").group.order == 6
    assert parse_group("q8").group.order == 8
    assert parse_group("klein").group.exponent() == 2
    assert parse_group("product:cyclic:2,cyclic:3").group.order == 6
    gs = parse_group("tc:cyclic:3")
    assert gs.group.order == 9 and gs.diagonal.order == 3 and gs.pi.order == 3


def test_json_group_forms(tmp_path):
    spec = {"type": "perm", "degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}
    assert parse_group(spec).group.order == 6
    assert parse_group(json.dumps({"type": "cayley", "table": [[0, 1], [1, 0]]})).group.order == 2
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"type": "product", "factors": ["cyclic:2", {"type": "cyclic", "n": 2}]}))
    assert parse_group(f"@{f}").group.order == 4


def test_group_errors_carry_paths():
    with pytest.raises(SpecError) as err:
        parse_group({"type": "cyclic", "n": "x"})
    assert err.value.path == "group.n"
    with pytest.raises(SpecError) as err:
        parse_group({"type": "product", "factors": ["cyclic:2", {"type": "wat"}]})
    assert err.value.path == "group.factors[1].type"
    with pytest.raises(SpecError) as err:
        parse_group({"type": "cayley", "table": [[0, 1], [0, 1]]})
    assert err.value.path == "group"
    with pytest.raises(SpecError):
        load_spec("{not json")


def test_order_caps():
    with pytest.raises(OrderCapError):
        parse_group("cyclic:100", cap=64)
    with pytest.raises(OrderCapError):
        parse_group("symmetric:6")
    with pytest.raises(OrderCapError):
        parse_group("tc:cyclic:9", cap=64)


def test_subgroups():
    gs = parse_group("cyclic:4")
    assert parse_subgroup(None, gs).order == 1
    assert parse_subgroup("trivial", gs).order == 1
    assert parse_subgroup("full", gs).order == 4
    assert parse_subgroup("gen:2", gs).elements == (0, 2)
    assert parse_subgroup("elements:0,2", gs).elements == (0, 2)
    assert parse_subgroup({"generated_by": [1]}, gs).order == 4
    tc = parse_group("tc:cyclic:2")
    assert parse_subgroup("diagonal", tc) == tc.diagonal


def test_subgroup_errors():
    gs = parse_group("cyclic:4")
    with pytest.raises(SpecError) as err:
        parse_subgroup({"elements": [0, 1]}, gs)
    assert err.value.path == "subgroup.elements"
    with pytest.raises(SpecError) as err:
        parse_subgroup({"generated_by": [0, 9]}, gs)
    assert err.value.path == "subgroup.generated_by[1]"
    with pytest.raises(SpecError):
        parse_subgroup("diagonal", gs)
    with pytest.raises(SpecError):
        parse_subgroup("bogus:1", gs)


def test_coefficients():
    gs = parse_group("cyclic:4")
    G = gs.group
    H = parse_subgroup("gen:2", gs)
    assert parse_coeffs("trivial", G).rank == 1
    assert parse_coeffs("regular", G).rank == 4
    assert parse_coeffs("sign", G).matrix(1).tolist() == [[-1]]
    assert parse_coeffs("cosets", G, H).rank == 2
    assert parse_coeffs("K", G).rank == 3
    assert parse_coeffs("I", G, H).rank == 1
    assert parse_coeffs("K^2", G).rank == 9
    assert parse_coeffs({"type": "tensor", "factors": ["K", "sign"]}, G).rank == 3
    assert parse_coeffs({"type": "hom", "from": "I", "to": "regular"}, G, H).rank == 4


def test_custom_coefficients():
    G = parse_group("cyclic:4").group
    M = parse_coeffs({"type": "custom", "rank": 2, "action": {"1": [[0, -1], [1, 0]]}}, G)
    assert M.matrix(2).tolist() == [[-1, 0], [0, -1]]
    with pytest.raises(SpecError) as err:
        parse_coeffs({"type": "custom", "rank": 1, "action": {"1": [[2]]}}, G)
    assert err.value.path == "coeffs.action"
    with pytest.raises(SpecError) as err:
        parse_coeffs({"type": "custom", "rank": 2, "action": {"1": [[1]]}}, G)
    assert err.value.path.startswith("coeffs.action")


def test_coefficient_errors():
    G = parse_group("cyclic:3").group
    with pytest.raises(SpecError):
        parse_coeffs("sign", G)
    with pytest.raises(SpecError):
        parse_coeffs("I", G)
    with pytest.raises(SpecError):
        parse_coeffs("regular^2", G)
    with pytest.raises(SpecError) as err:
        parse_coeffs({"type": "tensor", "factors": ["K", {"type": "nope"}]}, G)
    assert err.value.path == "coeffs.factors[1].type"
