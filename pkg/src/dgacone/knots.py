"""Built-in DGAs: unknot, trefoil, (p,2) torus knots with their loop monodromies, and move morphisms."""

from __future__ import annotations

from functools import lru_cache
from typing import List, Tuple

from .dga import Dga, DgaError, DgaMorphism, Substitution, TameIso, apply_tame_iso, destabilize, validate_chain_map, validate_dga
from .freealg import Algebra, Poly

TREFOIL_DA1 = "1 + b1 + b3 + b1.b2.b3"
TREFOIL_DA2 = "b2 + b1.b2 + b2.b3 + b2.b3.b1.b2"
# same relation with the two long factors multiplied the other way round; not a chain-map partner of μ
TREFOIL_SWAPPED_DA2 = "b2 + b1.b2 + b2.b3 + b1.b2.b2.b3"


class KnotError(DgaError):
    pass


def _check(d: Dga) -> Dga:
    report = validate_dga(d)
    if not report.ok:
        raise KnotError(f"built-in DGA fails validation:\n{report}")
    return d


def _check_map(f: DgaMorphism) -> DgaMorphism:
    report = validate_chain_map(f)
    if not report.ok:
        raise KnotError(f"built-in morphism is not a chain map:\n{report}")
    return f


def unknot_dga() -> Dga:
    return _check(Dga(Algebra([("c", 1)])))


def unknot_identity() -> DgaMorphism:
    return unknot_dga().identity()


def _check_p(p: int) -> None:
    if not isinstance(p, int) or p % 2 == 0 or not 3 <= p <= 15:
        raise KnotError(f"p must be odd with 3 <= p <= 15, got {p!r}")


def _torus_algebra(p: int) -> Algebra:
    return Algebra([(f"b{i}", 0) for i in range(1, p + 1)] + [("a1", 1), ("a2", 1)])


def transfer_matrix(alg: Algebra, letters: List[str]) -> Tuple[Tuple[Poly, Poly], Tuple[Poly, Poly]]:
    """Product of ``[[g, 1], [1, 0]]`` over the given letters, left to right."""
    one, zero = alg.one(), alg.zero()
    m = ((one, zero), (zero, one))
    for g in letters:
        x = alg.gen(g)
        (p, q), (r, s) = m
        m = ((p * x + q, p), (r * x + s, r))
    return m


def b_polys(p: int, alg: Algebra = None) -> dict:
    """B11, B12, B21, B22 for the (p,2) torus knot: ``Bij`` is entry (i, j) of ``M_{b1}⋯M_{bp}``.

    For p = 3: B12 = 1 + b1.b2 and B21 = 1 + b2.b3.
    """
    alg = alg or _torus_algebra(p)
    (m11, m12), (m21, m22) = transfer_matrix(alg, [f"b{i}" for i in range(1, p + 1)])
    return {"B11": m11, "B12": m12, "B21": m21, "B22": m22}


@lru_cache(maxsize=None)
def torus_2p_dga(p: int) -> Dga:
    """``∂a1 = 1 + B11``, ``∂a2 = 1 + B22 + B21·B12``; b's are cycles."""
    _check_p(p)
    alg = _torus_algebra(p)
    B = b_polys(p, alg)
    diff = {"a1": alg.one() + B["B11"], "a2": alg.one() + B["B22"] + B["B21"] * B["B12"]}
    return _check(Dga(alg, diff))


@lru_cache(maxsize=None)
def torus_2p_monodromy(p: int) -> DgaMorphism:
    """Loop monodromy: ``b1 ↦ B21 = (M_{b2}⋯M_{bp})_{11}``, ``bi ↦ b(i-1)``,
    ``a1 ↦ a2``, ``a2 ↦ a1 + B12·(B21·a1 + a2·bp)``."""
    d = torus_2p_dga(p)
    alg = d.algebra
    B = b_polys(p, alg)
    images = {"b1": B["B21"]}
    for i in range(2, p + 1):
        images[f"b{i}"] = alg.gen(f"b{i - 1}")
    a1, a2 = alg.gen("a1"), alg.gen("a2")
    images["a1"] = a2
    images["a2"] = a1 + B["B12"] * (B["B21"] * a1 + a2 * alg.gen(f"b{p}"))
    return _check_map(DgaMorphism(d, d, images))


def trefoil_dga() -> Dga:
    return torus_2p_dga(3)


def trefoil_monodromy() -> DgaMorphism:
    return torus_2p_monodromy(3)


def trefoil_swapped_dga() -> Dga:
    """Trefoil with ``∂a2 = 1 + B22 + B12·B21``; a valid DGA, kept as a comparison fixture."""
    return _check(Dga.from_spec([("b1", 0), ("b2", 0), ("b3", 0), ("a1", 1), ("a2", 1)],
                                {"a1": TREFOIL_DA1, "a2": TREFOIL_SWAPPED_DA2}))


def build_L1_morphism(d: Dga, a: str, b: str, c: str) -> DgaMorphism:
    """``a ↦ a + b·c``, identity elsewhere; the target differential is transported through the map."""
    alg = d.algebra
    for g in (a, b, c):
        alg.index(g)
    if a in (b, c):
        raise KnotError("a must differ from b and c")
    if alg.degrees[a] != alg.degrees[b] + alg.degrees[c]:
        raise KnotError(f"degree mismatch: |{a}| != |{b}| + |{c}|")
    step = TameIso((Substitution(a, alg.word((b, c))),))
    target = apply_tame_iso(step, d)
    report = validate_dga(target)
    if not report.ok:
        raise KnotError(f"transported differential is not a valid DGA:\n{report}")
    f = DgaMorphism(d, target, step.as_map(alg))
    return _check_map(f)


def build_L2_morphism(d: Dga, a: str, b: str) -> DgaMorphism:
    """``a ↦ 0``, ``b ↦ ∂a + b``, identity elsewhere, onto the DGA without a and b."""
    alg = d.algebra
    alg.index(a)
    alg.index(b)
    if alg.degrees[a] != alg.degrees[b] + 1:
        raise KnotError(f"degree mismatch: |{a}| != |{b}| + 1")
    _, tau = destabilize(d, a, b)
    return tau


def builtin_dga(name: str) -> Dga:
    if name == "unknot":
        return unknot_dga()
    if name == "trefoil":
        return trefoil_dga()
    if name.startswith("torus-2-"):
        try:
            p = int(name[len("torus-2-"):])
        except ValueError:
            raise KnotError(f"unknown built-in {name!r}") from None
        return torus_2p_dga(p)
    raise KnotError(f"unknown built-in {name!r}")


def builtin_monodromy(name: str) -> DgaMorphism:
    if name == "unknot":
        return unknot_identity()
    if name == "trefoil":
        return trefoil_monodromy()
    if name.startswith("torus-2-"):
        builtin_dga(name)
        return torus_2p_monodromy(int(name[len("torus-2-"):]))
    raise KnotError(f"unknown built-in {name!r}")


BUILTIN_NAMES = ("unknot", "trefoil", "torus-2-P")
