"""Random triangular DGAs, chain maps and homotopies for property tests.

Everything is driven by a ``random.Random`` so hypothesis can supply the seed.
"""

from __future__ import annotations

import random
from typing import Dict, List, Optional, Sequence

from dgacone.dga import Dga, DgaMorphism, Substitution, TameIso, apply_tame_iso, differential_apply, homotopic_partner
from dgacone.freealg import Algebra, GenMap, Poly

MAX_GENS = 8
DEG_RANGE = (-2, 4)
MAX_TERMS = 4
MAX_LEN = 4
# keeps composites and cone differentials small enough for fast property runs
MAX_IMAGE_TERMS = 6


def random_words(rng: random.Random, alg: Algebra, pool: Sequence[str], degree: int, tries: int = 60,
                 max_len: int = MAX_LEN) -> List[tuple]:
    """Distinct words over ``pool`` of total degree ``degree`` (the empty word when degree is 0)."""
    found = set()
    if degree == 0:
        found.add(())
    if not pool:
        return sorted(found, key=alg.sort_key)
    for _ in range(tries):
        n = rng.randint(1, max_len)
        w = tuple(rng.choice(pool) for _ in range(n))
        if alg.word_degree(w) == degree:
            found.add(w)
    return sorted(found, key=alg.sort_key)


def random_poly(rng: random.Random, alg: Algebra, pool: Sequence[str], degree: int, max_terms: int = MAX_TERMS,
                max_len: int = MAX_LEN) -> Poly:
    words = random_words(rng, alg, pool, degree, max_len=max_len)
    if not words:
        return alg.zero()
    k = rng.randint(0, min(max_terms, len(words)))
    return Poly(alg, rng.sample(words, k))


def random_dga(rng: random.Random, prefix: str = "x", n: Optional[int] = None) -> Dga:
    """Triangular DGA by height-ordered rejection sampling of each differential."""
    n = rng.randint(1, MAX_GENS) if n is None else n
    gens = [(f"{prefix}{i}", rng.randint(*DEG_RANGE)) for i in range(1, n + 1)]
    alg = Algebra(gens)
    diff: Dict[str, Poly] = {}
    for i, (g, deg) in enumerate(gens):
        pool = [h for h, _ in gens[:i]]
        partial = Dga(alg, diff)
        for _ in range(25):
            cand = random_poly(rng, alg, pool, deg - 1)
            if not differential_apply(partial, cand):
                diff[g] = cand
                break
    return Dga(alg, diff)


def random_tame(rng: random.Random, d: Dga, steps: int = 2) -> TameIso:
    """Substitutions ``g ↦ g + u`` with ``u`` in strictly lower generators (keeps triangularity)."""
    alg = d.algebra
    out = []
    for _ in range(steps):
        i = rng.randrange(len(alg.names))
        g = alg.names[i]
        u = random_poly(rng, alg, alg.names[:i], alg.degrees[g], max_terms=2, max_len=2)
        if u:
            out.append(Substitution(g, u))
    return TameIso(tuple(out))


def renamed_copy(d: Dga, prefix: str) -> DgaMorphism:
    """Isomorphism onto a copy of ``d`` whose generators use ``prefix``."""
    plain = all(g[0] == d.generators[0][0] and g[1:].isdigit() for g in d.generators)
    names = {g: prefix + (g[1:] if plain else g) for g in d.generators}
    alg = Algebra((names[g], d.degree(g)) for g in d.generators)
    ren = GenMap.rename(d.algebra, alg, names)
    copy = Dga(alg, {names[g]: ren(d.diff[g]) for g in d.generators})
    return DgaMorphism(d, copy, ren)


def random_k_values(rng: random.Random, src: Dga, tgt: Dga) -> Dict[str, Poly]:
    alg = tgt.algebra
    return {g: random_poly(rng, alg, alg.names, src.degree(g) + 1, max_terms=2, max_len=2) for g in src.generators}


def random_chain_map(rng: random.Random, src: Dga, prefix: str) -> DgaMorphism:
    """Tame-conjugated copy of ``src``, then perturbed through a random homotopy."""
    ren = renamed_copy(src, prefix)
    t = random_tame(rng, ren.target)
    tgt = apply_tame_iso(t, ren.target)
    phi0 = DgaMorphism(src, tgt, GenMap(tgt.algebra, tgt.algebra, t.as_map(ren.target.algebra).images).compose(ren.map))
    if rng.random() < 0.5:
        return phi0
    psi = homotopic_partner(phi0, random_k_values(rng, src, tgt)).psi
    return psi if map_size(psi) <= MAX_IMAGE_TERMS else phi0


def map_size(f: DgaMorphism) -> int:
    return max((len(p) for p in f.map.images.values()), default=0)


def random_homotopy(rng: random.Random, src: Dga, prefix: str, rule: str = "psi_left"):
    """Random φ and K with ψ := φ + K∂ + ∂K; K is resampled while ψ is oversized, then zeroed."""
    phi = random_chain_map(rng, src, prefix)
    for _ in range(8):
        K = homotopic_partner(phi, random_k_values(rng, src, phi.target), rule)
        if map_size(K.psi) <= MAX_IMAGE_TERMS:
            return K
    return homotopic_partner(phi, {}, rule)
