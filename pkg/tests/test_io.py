import random

import pytest
from hypothesis import given, settings, strategies as st

from dgacone.cone import build_cone_interval, build_cone_torus
from dgacone.dga import ChainHomotopy, Substitution, TameIso, Relabel
from dgacone.fileio import (
    cone_from_file,
    format_cone,
    format_dga,
    format_homotopy,
    format_morphism,
    format_tame_iso,
    load_dga,
    load_morphism,
    parse_dga_text,
    parse_homotopy_text,
    parse_morphism_text,
)
from dgacone.freealg import ParseError, parse_poly
from dgacone.knots import torus_2p_dga, trefoil_dga, trefoil_monodromy, unknot_dga
from randdga import random_chain_map, random_dga, random_homotopy


def test_dga_round_trip_builtins():
    for d in (unknot_dga(), trefoil_dga(), torus_2p_dga(7)):
        f = parse_dga_text(format_dga(d))
        assert f.dga == d and f.flavor is None


def test_trefoil_file_text():
    text = format_dga(trefoil_dga())
    assert text.splitlines()[:2] == ["gen b1 deg 0", "gen b2 deg 0"]
    assert "d a1 = 1 + b1 + b3 + b1.b2.b3" in text


@pytest.mark.parametrize("build", [build_cone_interval, build_cone_torus])
def test_cone_round_trip(build):
    cone = build(trefoil_monodromy())
    back = cone_from_file(parse_dga_text(format_cone(cone)))
    assert back.dga == cone.dga
    assert back.roles == cone.roles
    assert back.flavor == cone.flavor
    assert back.phi.map == cone.phi.map
    assert format_cone(back) == format_cone(cone)


@settings(max_examples=40)
@given(st.integers(0, 2**32))
def test_random_interval_cone_round_trip(seed):
    rng = random.Random(seed)
    phi = random_chain_map(rng, random_dga(rng), "y")
    cone = build_cone_interval(phi)
    back = cone_from_file(parse_dga_text(format_cone(cone)))
    assert back.dga == cone.dga
    assert back.phi.map == cone.phi.map


def test_comments_and_blank_lines():
    text = "# a comment\n\ngen b deg 0   # trailing\ngen a deg 1\nd a = 1 + b  # note\n"
    d = parse_dga_text(text).dga
    assert d.generators == ("b", "a")
    assert str(d.diff["a"]) == "1 + b"


@pytest.mark.parametrize(
    "text, lineno",
    [
        ("gen b deg 0\ngen b deg 1\n", 2),
        ("gen b deg 0\nwhat is this\n", 2),
        ("gen b deg 0\nd c = b\n", 2),
        ("gen b deg 0\ngen a deg 1\nd a = b +\n", 3),
        ("gen b deg 0\ngen a deg 1\nd a = q\n", 3),
        ("gen b deg 0\ngen a deg 1\nd a = b\nd a = 1\n", 4),
    ],
)
def test_parse_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ParseError, match=f"x.dga:{lineno}:"):
        parse_dga_text(text, "x.dga")


def test_cone_file_requires_roles():
    with pytest.raises(ParseError):
        cone_from_file(parse_dga_text("gen b deg 0\n"))
    with pytest.raises(ParseError):
        cone_from_file(parse_dga_text("# cone: torus\ngen b deg 0\n"))


def test_morphism_round_trip_and_defaults():
    mu = trefoil_monodromy()
    text = format_morphism(mu, "trefoil")
    assert text.startswith("source trefoil\n")
    assert parse_morphism_text(text) == mu
    # omitted generators map to themselves on an endomorphism
    f = parse_morphism_text("source trefoil\nmap b1 = b2\n")
    assert str(f.map["b1"]) == "b2" and str(f.map["a2"]) == "a2"


def test_morphism_errors():
    d = trefoil_dga()
    with pytest.raises(ParseError, match="m:2:"):
        parse_morphism_text("source trefoil\nmap zz = b1\n", "m")
    with pytest.raises(ParseError, match="no source"):
        parse_morphism_text("map b1 = b1\n")
    other = torus_2p_dga(5)
    with pytest.raises(ParseError, match="no image"):
        parse_morphism_text("", source=d, target=other)


def test_headers_resolve_relative_paths(tmp_path):
    (tmp_path / "k.dga").write_text(format_dga(trefoil_dga()))
    (tmp_path / "k.mu").write_text(format_morphism(trefoil_monodromy(), "k.dga"))
    assert load_morphism(tmp_path / "k.mu") == trefoil_monodromy()
    assert load_dga(tmp_path / "k.dga") == trefoil_dga()


def test_builtin_references():
    assert load_dga("torus-2-5") == torus_2p_dga(5)
    assert load_morphism("trefoil") == trefoil_monodromy()
    with pytest.raises(FileNotFoundError):
        load_dga("no-such-file.dga")
    with pytest.raises(ParseError):
        load_morphism("trefoil", source=unknot_dga())


def test_homotopy_file_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        K = random_homotopy(rng, random_dga(rng), "y")
        back = parse_homotopy_text(format_homotopy(K), K.phi, K.psi)
        assert all(back.values[g] == K.values[g] for g in K.phi.source.generators)


def test_homotopy_file_errors():
    ident = trefoil_dga().identity()
    with pytest.raises(ParseError, match="K value"):
        parse_homotopy_text("k zz = 1\n", ident, ident)
    with pytest.raises(ParseError):
        parse_homotopy_text("map b1 = 1\n", ident, ident)


def test_tame_iso_script():
    d = trefoil_dga()
    t = TameIso((Substitution("a2", parse_poly("b1.a1", d.algebra)), Relabel.of({"a1": "e"})))
    assert format_tame_iso(t) == "sub a2 += b1.a1\nrelabel a1 -> e\n"
    assert format_tame_iso(TameIso()) == ""
