"""Acceptance criteria, one test each.

Every test prints a ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` line;
run with ``-s`` to see them.  All comparisons are exact.
"""

from contextlib import contextmanager

import pytest

from dgacone.cone import build_cone_torus
from dgacone.freealg import parse_poly
from dgacone.invariants import (
    Augmentation,
    UPoly2,
    abelianize,
    find_augmentations,
    homology_ranks,
    linearize,
    monodromy_orbits,
    q_poly,
    reduce_ch0_single_generator,
    upoly_gcd,
)
from dgacone.knots import (
    b_polys,
    torus_2p_dga,
    torus_2p_monodromy,
    trefoil_dga,
    trefoil_monodromy,
    unknot_identity,
)

import cone_checks
from test_knots import TORUS7_DA1, from_subscripts

PROPERTY_SEEDS = range(200)


def X(*exps):
    return UPoly2.from_exponents(exps)


@contextmanager
def criterion(n: int, label: str):
    try:
        yield
    except BaseException:
        print(f"\nFAIL criterion {n}: {label}")
        raise
    print(f"\nPASS criterion {n}: {label}")


@pytest.fixture(scope="module")
def torus7_cone():
    return build_cone_torus(torus_2p_monodromy(7))


def _all_ones(d):
    return Augmentation(frozenset(d.generators_of_degree(0)))


def test_criterion_1_trefoil_torus_unaugmentable_but_nonzero():
    with criterion(1, "trefoil torus CH0 = Z2[x]/(1+x+x^2), no augmentations"):
        cone = build_cone_torus(trefoil_monodromy())
        pres = reduce_ch0_single_generator(cone)
        assert set(pres.relations) == {X(0, 3), X(1, 4), X(0, 1, 2)}
        assert pres.relation == X(0, 1, 2)
        assert find_augmentations(cone.dga) == []
        assert pres.relation != UPoly2(1) and pres.nonzero


def test_criterion_2_trefoil_five_cycle():
    with criterion(2, "trefoil has 5 augmentations in a single 5-cycle"):
        d = trefoil_dga()
        augs = find_augmentations(d)
        assert len(augs) == 5
        dec = monodromy_orbits(d, trefoil_monodromy(), augs)
        assert [len(o) for o in dec.orbits] == [5]


def test_criterion_3_torus_7_orbits():
    with criterion(3, "(7,2): 85 augmentations, nine 9-cycles, one 3-cycle, fixed point eps=1"):
        d = torus_2p_dga(7)
        augs = find_augmentations(d)
        assert len(d.generators_of_degree(0)) == 7
        assert len(augs) == 85
        dec = monodromy_orbits(d, torus_2p_monodromy(7), augs)
        assert sorted(len(o) for o in dec.orbits) == [1] + [3] + [9] * 9
        assert dec.fixed() == [_all_ones(d)]


def test_criterion_4_torus_7_ch0(torus7_cone):
    with criterion(4, "(7,2) torus cone CH0 relations, gcd 1+x^2+x^3+x^4 and cofactors"):
        pres = reduce_ch0_single_generator(torus7_cone)
        rels = {X(0, 7), X(1, 5, 8, 12), X(0, 1, 4, 6)}
        assert set(pres.relations) == rels
        g = X(0, 2, 3, 4)
        acc = UPoly2(0)
        for r in rels:
            acc = upoly_gcd(acc, r)
        assert acc == g == pres.relation
        assert X(0, 1, 2) * g == X(0, 1, 4, 6)
        assert X(0, 2, 3) * g == X(0, 7)


def test_criterion_5_linearized_homology(torus7_cone):
    with criterion(5, "(7,2) linearized H0=0 H1=1 H2=1 with rank d1=7, rank d2=1; standard torus H1=H2=1"):
        c = linearize(torus7_cone.dga, _all_ones(torus7_cone.dga))
        assert homology_ranks(c) == {0: 0, 1: 1, 2: 1}
        assert c.rank(1) == 7 and c.rank(2) == 1
        std = build_cone_torus(unknot_identity())
        assert homology_ranks(linearize(std.dga, Augmentation(frozenset()))) == {1: 1, 2: 1}


def test_criterion_6_transfer_matrix_fidelity():
    with criterion(6, "reference da1 for p=3,7; abelianized B entries for odd p <= 15; Q table"):
        d3 = torus_2p_dga(3)
        assert d3.diff["a1"] == parse_poly("1 + b1 + b3 + b1.b2.b3", d3.algebra)
        assert len(d3.diff["a1"]) == 4
        d7 = torus_2p_dga(7)
        assert d7.diff["a1"] == parse_poly(from_subscripts(TORUS7_DA1), d7.algebra)
        assert len(d7.diff["a1"]) == 22
        for p in range(3, 16, 2):
            B = b_polys(p)
            assert [abelianize(B[k]) for k in ("B11", "B12", "B21", "B22")] == [
                q_poly(p), q_poly(p - 1), q_poly(p - 1), q_poly(p - 2)
            ]
        assert q_poly(3) == X(3)
        assert q_poly(5) == X(1, 5)
        assert q_poly(6) == X(0, 4, 6)
        assert q_poly(7) == X(7)
        for k in range(1, 13):
            assert q_poly(k) * q_poly(k - 2) + q_poly(k - 1) * q_poly(k - 1) == UPoly2(1)


@pytest.mark.parametrize("name", list(cone_checks.CHECKS))
def test_criterion_7_property_suite(name):
    with criterion(7, f"{name} holds on {len(PROPERTY_SEEDS)} random instances"):
        check = cone_checks.CHECKS[name]
        for seed in PROPERTY_SEEDS:
            check(seed)


def test_criterion_8_same_linearized_homology_distinct_ch0(torus7_cone):
    with criterion(8, "(7,2) torus and standard torus: equal linearized homology, distinct CH0"):
        std = build_cone_torus(unknot_identity())
        h7 = homology_ranks(linearize(torus7_cone.dga, _all_ones(torus7_cone.dga)))
        hs = homology_ranks(linearize(std.dga, Augmentation(frozenset())))
        nonzero = lambda h: {k: v for k, v in h.items() if v}
        assert nonzero(h7) == nonzero(hs) == {1: 1, 2: 1}
        p7 = reduce_ch0_single_generator(torus7_cone)
        ps = reduce_ch0_single_generator(std)
        assert p7.relation == X(0, 2, 3, 4)
        assert ps.reducible and ps.variable is None and ps.render() == "Z2"
        assert p7.render() != ps.render()
