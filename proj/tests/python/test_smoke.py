import json
import pathlib

import pytest

import imbed

CONFIGS = pathlib.Path(__file__).resolve().parents[2] / "configs"
P4 = (["v1", "v2", "v3", "v4"], [("v1", "v2"), ("v2", "v3"), ("v3", "v4")])


def config(name):
    return (CONFIGS / name).read_text()


def test_irreducibility():
    ok, witness = imbed.is_irreducible(*P4)
    assert ok and witness is None
    ok, witness = imbed.is_irreducible(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
    assert not ok
    assert sorted(witness[0] + witness[1]) == ["a", "b", "c", "d"]


def test_normal_form():
    p = imbed.GraphProduct(*P4, orders=[2, 2, 2, 2])
    word = [("v1", 1), ("v2", 1), ("v1", 1), ("v3", 1)]
    assert p.reduce(word) == [("v2", "a2"), ("v3", "a3")]
    assert not p.is_reduced(word)
    assert p.length(word) == 2
    assert p.multiply(word, p.invert(word)) == []
    a, l, h = p.alh([("v2", 1), ("v1", 1)], "v1")
    assert a == [("v1", "a1")] and l == [("v2", "a2")] and h == []


def test_free_product_ball():
    p = imbed.GraphProduct(["g", "t"], [], orders=[2, 4])
    assert p.ball_size(2) == 11
    with pytest.raises(imbed.ImbedError, match="resource_cap"):
        p.ball_size(3, cap=5)


def test_index_growth():
    code, report = imbed.run("index-growth", config("free_z2_z4.json"))
    assert code == 0
    assert report["partials"] == ["2", "3", "6", "9"]
    assert report["class"] == "growing"


def test_theorem_b_identity():
    code, report = imbed.run("theorem-b", json.loads(config("theorem_b_identity.json")))
    assert code == 0
    assert report["class"] == "constant-1"
    assert report["extensions"] == 4


def test_errors():
    code, report = imbed.run("verify-base", config("bad_cocycle.json"))
    assert code == 2
    assert "$.systems.broken.cocycle.s" in report["error"]["message"]
    with pytest.raises(imbed.ImbedError):
        imbed.normalize_config("{")
    assert "theorem-b" in imbed.commands()


def test_config_round_trip():
    once = imbed.normalize_config(config("extend_graph_p4.json"))
    assert imbed.normalize_config(once) == once
