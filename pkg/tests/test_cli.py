import random
import re

import pytest

from dgacone.cli import main
from dgacone.cone import build_cone_interval
from dgacone.dga import Dga, Substitution, TameIso, apply_tame_iso
from dgacone.fileio import format_dga, format_homotopy, format_morphism, load_cone
from dgacone.freealg import Algebra, parse_poly
from dgacone.knots import trefoil_monodromy
from randdga import random_dga, random_homotopy

ALL_ONES_7 = ",".join(f"b{i}=1" for i in range(1, 8))


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_ch0_trefoil_torus_golden(work, capsys):
    assert run(capsys, "cone", "--morphism", "trefoil", "--torus", "-o", "tt.dga")[0] == 0
    code, out, _ = run(capsys, "ch0", "tt.dga", "--relations")
    assert code == 0
    assert out == (
        "CH0 = Z2[x]/(1 + x + x^2)  nonzero=true  augmentable=false\n"
        "relations: 1 + x^3, x + x^4, 1 + x + x^2\n"
    )
    assert run(capsys, "aug", "tt.dga")[1] == "total=0\n"


def test_orbits_and_linhom_golden(work, capsys):
    run(capsys, "torus", "--p", 7, "-o", "k7.dga")
    run(capsys, "torus", "--p", 7, "--monodromy", "-o", "k7.mu")
    code, out, _ = run(capsys, "orbits", "k7.dga", "--morphism", "k7.mu")
    assert code == 0
    assert out.splitlines()[-2:] == ["fixed=1  cycles: 9x9, 1x3", "total=85"]
    assert sum(line.startswith("cycle(len=9)") for line in out.splitlines()) == 9

    run(capsys, "cone", "--morphism", "k7.mu", "--torus", "-o", "k7c.dga")
    code, out, _ = run(capsys, "linhom", "k7c.dga", "--aug", ALL_ONES_7, "--ranks")
    assert out == "H0=0 H1=1 H2=1\nrank_d0=0 rank_d1=7 rank_d2=1\n"
    code, out, _ = run(capsys, "ch0", "k7c.dga")
    assert out == "CH0 = Z2[x]/(1 + x^2 + x^3 + x^4)  nonzero=true  augmentable=true\n"


def test_trefoil_orbit_line(capsys):
    code, out, _ = run(capsys, "orbits", "trefoil", "--morphism", "trefoil")
    assert out.splitlines() == [
        "cycle(len=5): {b1} -> {b1,b2} -> {b1,b2,b3} -> {b2,b3} -> {b3}",
        "fixed=0  cycles: 1x5",
        "total=5",
    ]


def test_cone_output_round_trips(work, capsys):
    run(capsys, "cone", "--morphism", "trefoil", "-o", "c.dga")
    assert load_cone(work / "c.dga").dga == build_cone_interval(trefoil_monodromy()).dga
    assert run(capsys, "check", "c.dga")[1] == "interval cone: valid\n"


def test_concat_equals_cone_of_composite(work, capsys):
    mu = trefoil_monodromy()
    (work / "mu2.mu").write_text(format_morphism(mu.compose(mu), "trefoil"))
    run(capsys, "cone", "--morphism", "trefoil", "-o", "c.dga")
    run(capsys, "concat", "c.dga", "c.dga", "-o", "cc.dga")
    run(capsys, "cone", "--morphism", "mu2.mu", "-o", "direct.dga")
    assert (work / "cc.dga").read_bytes() == (work / "direct.dga").read_bytes()


def test_aug_jobs_do_not_change_output(capsys):
    _, one, _ = run(capsys, "aug", "torus-2-7")
    _, four, _ = run(capsys, "aug", "torus-2-7", "--jobs", 4)
    assert one == four
    assert one.endswith("total=85\n")


def test_homotopy_iso_command(work, capsys):
    rng = random.Random(11)
    K = None
    while K is None or not any(K.values[g] for g in K.phi.source.generators):
        K = random_homotopy(rng, random_dga(rng), "y")
    (work / "src.dga").write_text(format_dga(K.phi.source))
    (work / "tgt.dga").write_text(format_dga(K.phi.target))
    (work / "phi.mu").write_text(format_morphism(K.phi, "src.dga", "tgt.dga"))
    (work / "psi.mu").write_text(format_morphism(K.psi, "src.dga", "tgt.dga"))
    (work / "k.txt").write_text(format_homotopy(K))
    code, out, _ = run(capsys, "homotopy-iso", "--phi", "phi.mu", "--psi", "psi.mu", "--K", "k.txt")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "verified=true"
    assert lines[:-1] and all(line.startswith("sub ") for line in lines[:-1])


def test_homotopy_iso_rejects_bad_K(work, capsys):
    (work / "k.txt").write_text("k b1 = a1\n")
    code, _, err = run(capsys, "homotopy-iso", "--phi", "trefoil", "--psi", "trefoil", "--K", "k.txt")
    assert code == 1 and err


def test_torus_command_prints_dga(capsys):
    code, out, _ = run(capsys, "torus", "--p", 3)
    assert code == 0 and "d a1 = 1 + b1 + b3 + b1.b2.b3" in out


# -- exit codes --------------------------------------------------------------------------


def test_exit_validation_failure(work, capsys):
    (work / "bad.dga").write_text("gen b deg 1\ngen a deg 2\nd a = b\nd b = 1\n")
    code, out, err = run(capsys, "check", "bad.dga")
    assert code == 1 and "invalid" in err and out == ""


def test_exit_parse_errors(work, capsys):
    (work / "bad.dga").write_text("gen b deg 0\nnonsense\n")
    code, _, err = run(capsys, "check", "bad.dga")
    assert code == 2 and "bad.dga:2:" in err
    assert run(capsys, "check", "missing.dga")[0] == 2
    assert run(capsys, "torus", "--p", 4)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "aug")[0] == 2


def test_exit_resource_limit(work, capsys):
    d = Dga(Algebra([(f"b{i}", 0) for i in range(31)]))
    (work / "big.dga").write_text(format_dga(d))
    code, out, err = run(capsys, "aug", "big.dga")
    assert code == 3 and out == "" and err


def test_output_is_deterministic(work, capsys):
    first = run(capsys, "cone", "--morphism", "torus-2-5", "--torus")[1]
    second = run(capsys, "cone", "--morphism", "torus-2-5", "--torus")[1]
    assert first == second and first.startswith("# cone: torus\n")


def test_printed_script_replays_to_the_other_cone(work, capsys):
    rng = random.Random(5)
    K = None
    while K is None or not any(K.values[g] for g in K.phi.source.generators):
        K = random_homotopy(rng, random_dga(rng), "y")
    (work / "src.dga").write_text(format_dga(K.phi.source))
    (work / "tgt.dga").write_text(format_dga(K.phi.target))
    (work / "phi.mu").write_text(format_morphism(K.phi, "src.dga", "tgt.dga"))
    (work / "psi.mu").write_text(format_morphism(K.psi, "src.dga", "tgt.dga"))
    (work / "k.txt").write_text(format_homotopy(K))
    _, out, _ = run(capsys, "homotopy-iso", "--phi", "phi.mu", "--psi", "psi.mu", "--K", "k.txt")
    cone_phi = build_cone_interval(K.phi).dga
    steps = []
    for line in out.splitlines()[:-1]:
        gen, addend = re.fullmatch(r"sub (\S+) \+= (.*)", line).groups()
        steps.append(Substitution(gen, parse_poly(addend, cone_phi.algebra)))
    assert apply_tame_iso(TameIso(tuple(steps)), cone_phi) == build_cone_interval(K.psi).dga
