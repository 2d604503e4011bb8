"""Augmentations, monodromy orbits, linearized homology and single-generator CH0 presentations."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .dga import Dga, DgaError, DgaMorphism
from .freealg import Poly

MAX_AUG_GENERATORS = 30


class InvariantError(DgaError):
    pass


class ResourceLimitError(InvariantError):
    pass


# -- univariate polynomials over GF(2) ----------------------------------------------


class UPoly2:
    """Polynomial in one variable over GF(2); bit i is the coefficient of x^i."""

    __slots__ = ("bits",)

    def __init__(self, bits: int = 0):
        if bits < 0:
            raise ValueError("coefficient bitset must be non-negative")
        self.bits = bits

    @classmethod
    def from_exponents(cls, exps: Iterable[int]) -> "UPoly2":
        bits = 0
        for e in exps:
            bits ^= 1 << e
        return cls(bits)

    @classmethod
    def x(cls) -> "UPoly2":
        return cls(2)

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return self.bits.bit_length() - 1

    def exponents(self) -> List[int]:
        return [i for i in range(self.bits.bit_length()) if self.bits >> i & 1]

    def __add__(self, other: "UPoly2") -> "UPoly2":
        return UPoly2(self.bits ^ other.bits)

    def __mul__(self, other: "UPoly2") -> "UPoly2":
        a, b, out = self.bits, other.bits, 0
        while b:
            if b & 1:
                out ^= a
            a <<= 1
            b >>= 1
        return UPoly2(out)

    def __divmod__(self, other: "UPoly2"):
        if not other.bits:
            raise ZeroDivisionError("division by the zero polynomial")
        q, r = 0, self.bits
        dd = other.degree
        while r and r.bit_length() - 1 >= dd:
            shift = r.bit_length() - 1 - dd
            q ^= 1 << shift
            r ^= other.bits << shift
        return UPoly2(q), UPoly2(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, n: int) -> "UPoly2":
        out, base = UPoly2(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, UPoly2):
            return self.bits == other.bits
        if isinstance(other, int):
            return self.bits == other
        return NotImplemented

    def __hash__(self):
        return hash(self.bits)

    def __bool__(self):
        return bool(self.bits)

    def __str__(self):
        if not self.bits:
            return "0"
        parts = []
        for e in self.exponents():
            parts.append("1" if e == 0 else "x" if e == 1 else f"x^{e}")
        return " + ".join(parts)

    def __repr__(self):
        return f"UPoly2({self})"


def upoly_gcd(f: UPoly2, g: UPoly2) -> UPoly2:
    a, b = f, g
    while b:
        a, b = b, a % b
    return a


def q_poly(k: int) -> UPoly2:
    """``Q(-1) = 0``, ``Q(0) = 1``, ``Q(k) = x·Q(k-1) + Q(k-2)``."""
    if k < -1:
        raise ValueError("k must be >= -1")
    prev, cur = UPoly2(0), UPoly2(1)
    if k == -1:
        return prev
    x = UPoly2.x()
    for _ in range(k):
        prev, cur = cur, x * cur + prev
    return cur


def abelianize(p: Poly, variables: Optional[Iterable[str]] = None) -> UPoly2:
    """Substitute x for every generator (or for those in ``variables``) and collect by word length."""
    bits = 0
    allowed = None if variables is None else set(variables)
    for w in p.terms:
        if allowed is not None and any(g not in allowed for g in w):
            raise InvariantError(f"word {'.'.join(w)} uses generators outside the substituted set")
        bits ^= 1 << len(w)
    return UPoly2(bits)


# -- augmentations --------------------------------------------------------------------


@dataclass(frozen=True)
class Augmentation:
    """Degree-0 generators sent to 1 (all others, and all nonzero-degree generators, go to 0)."""

    ones: FrozenSet[str]

    def __call__(self, g: str) -> int:
        return int(g in self.ones)

    def render(self, order: Sequence[str]) -> str:
        return "{" + ",".join(g for g in order if g in self.ones) + "}"


def _degree_zero(d: Dga) -> List[str]:
    return d.generators_of_degree(0)


def _compile_masks(d: Dga, gens0: Sequence[str]) -> List[List[int]]:
    """Per generator differential, bitmasks of the words that can survive an augmentation."""
    pos = {g: i for i, g in enumerate(gens0)}
    out = []
    for g in d.generators:
        masks = []
        for w in d.diff[g].terms:
            m = 0
            for h in w:
                i = pos.get(h)
                if i is None:
                    break
                m |= 1 << i
            else:
                masks.append(m)
        if masks:
            out.append(masks)
    return out


def _scan(relations: List[List[int]], lo: int, hi: int) -> np.ndarray:
    x = np.arange(lo, hi, dtype=np.int64)
    alive = np.ones(len(x), dtype=bool)
    for masks in relations:
        acc = np.zeros(len(x), dtype=bool)
        for m in masks:
            acc ^= (x & m) == m
        alive &= ~acc
    return x[alive]


def find_augmentations(d: Dga, jobs: int = 1, chunk: int = 1 << 16) -> List[Augmentation]:
    """All Z2 augmentations, by exhaustive scan over the degree-0 generators.

    Output order is binary counting with the lowest generator as bit 0,
    independent of ``jobs``.
    """
    gens0 = _degree_zero(d)
    n = len(gens0)
    if n > MAX_AUG_GENERATORS:
        raise ResourceLimitError(f"{n} degree-0 generators exceeds the limit of {MAX_AUG_GENERATORS}")
    relations = _compile_masks(d, gens0)
    total = 1 << n
    ranges = [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]
    if jobs > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda r: _scan(relations, *r), ranges))
    else:
        parts = [_scan(relations, lo, hi) for lo, hi in ranges]
    hits = np.sort(np.concatenate(parts)) if parts else np.array([], dtype=np.int64)
    return [Augmentation(frozenset(g for i, g in enumerate(gens0) if v >> i & 1)) for v in hits.tolist()]


def augmentation_residuals(d: Dga, eps: Augmentation) -> Dict[str, int]:
    """ε(∂c) for each generator, by substituting constants and reducing (independent evaluator)."""
    out = {}
    for g in d.generators:
        total = 0
        for w in d.diff[g].terms:
            val = 1
            for h in w:
                if d.algebra.degrees[h] != 0 or h not in eps.ones:
                    val = 0
                    break
            total ^= val
        out[g] = total
    return out


def is_augmentation(d: Dga, eps: Augmentation) -> bool:
    if any(d.algebra.degrees[g] != 0 for g in eps.ones if g in d.algebra):
        return False
    if any(g not in d.algebra for g in eps.ones):
        return False
    return not any(augmentation_residuals(d, eps).values())


def parse_augmentation(d: Dga, text: str) -> Augmentation:
    """``b1=1,b2=0,...``; unlisted degree-0 generators are 0."""
    ones = set()
    text = text.strip()
    if text:
        for item in text.split(","):
            name, sep, val = item.partition("=")
            name, val = name.strip(), val.strip()
            if not sep or val not in ("0", "1"):
                raise InvariantError(f"bad augmentation entry {item!r}")
            if name not in d.algebra:
                raise InvariantError(f"unknown generator {name!r}")
            if d.algebra.degrees[name] != 0:
                raise InvariantError(f"{name} has nonzero degree and must be augmented to 0")
            if val == "1":
                ones.add(name)
            else:
                ones.discard(name)
    return Augmentation(frozenset(ones))


def pullback(eps: Augmentation, mu: DgaMorphism) -> Augmentation:
    """``ε∘μ`` restricted to degree-0 generators."""
    src = mu.source
    ones = set()
    for g in _degree_zero(src):
        total = 0
        for w in mu.map[g].terms:
            if all(h in eps.ones for h in w):
                total ^= 1
        if total:
            ones.add(g)
    return Augmentation(frozenset(ones))


@dataclass
class OrbitDecomposition:
    orbits: List[List[Augmentation]]
    order: Tuple[str, ...]

    @property
    def total(self) -> int:
        return sum(len(o) for o in self.orbits)

    def cycle_counts(self) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for o in self.orbits:
            counts[len(o)] = counts.get(len(o), 0) + 1
        return dict(sorted(counts.items()))

    def fixed(self) -> List[Augmentation]:
        return [o[0] for o in self.orbits if len(o) == 1]


def monodromy_orbits(d: Dga, mu: DgaMorphism, augs: Optional[List[Augmentation]] = None) -> OrbitDecomposition:
    """Cycles of ``ε ↦ ε∘μ`` on the augmentations of ``d``."""
    if mu.source != d or mu.target != d:
        raise InvariantError("monodromy must be an endomorphism of the DGA")
    augs = find_augmentations(d) if augs is None else augs
    index = {a: i for i, a in enumerate(augs)}
    succ = []
    for a in augs:
        b = pullback(a, mu)
        if b not in index:
            raise InvariantError(f"pullback of {a.render(d.generators)} is not an augmentation")
        succ.append(index[b])
    if len(set(succ)) != len(succ):
        raise InvariantError("pullback action is not a permutation")
    seen = [False] * len(augs)
    orbits = []
    for i in range(len(augs)):
        if seen[i]:
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(augs[j])
            j = succ[j]
        orbits.append(cyc)
    return OrbitDecomposition(orbits, d.generators)


# -- linearized homology ----------------------------------------------------------------


def gf2_rank(rows: List[int]) -> int:
    """Rank of a GF(2) matrix whose rows are int bitsets."""
    pivots: Dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


@dataclass
class LinearizedComplex:
    """``bases[k]`` lists degree-k generators; ``columns[k][j]`` is the bitset (over
    ``bases[k-1]``) of the linearized differential of ``bases[k][j]``."""

    bases: Dict[int, List[str]]
    columns: Dict[int, List[int]] = field(default_factory=dict)

    def image(self, g: str) -> List[str]:
        for k, basis in self.bases.items():
            if g in basis:
                col = self.columns[k][basis.index(g)]
                below = self.bases.get(k - 1, [])
                return [below[i] for i in range(len(below)) if col >> i & 1]
        raise KeyError(g)

    def rank(self, k: int) -> int:
        return gf2_rank(self.columns.get(k, []))

    def matrix(self, k: int) -> np.ndarray:
        """Dense 0/1 matrix of ``d_k``: rows indexed by degree k-1, columns by degree k."""
        rows = len(self.bases.get(k - 1, []))
        cols = self.columns.get(k, [])
        out = np.zeros((rows, len(cols)), dtype=np.uint8)
        for j, c in enumerate(cols):
            for i in range(rows):
                out[i, j] = c >> i & 1
        return out

    def check_d_squared(self) -> List[int]:
        """Degrees k where ``d(k-1) ∘ d(k)`` is nonzero."""
        bad = []
        for k in self.bases:
            if k - 1 not in self.bases:
                continue
            lower = self.columns.get(k - 1, [])
            for col in self.columns.get(k, []):
                acc = 0
                i = 0
                while col >> i:
                    if col >> i & 1:
                        acc ^= lower[i]
                    i += 1
                if acc:
                    bad.append(k)
                    break
        return bad


def linearize(d: Dga, eps: Augmentation) -> LinearizedComplex:
    """Word-length-1 part of ∂ after the change of variables ``g ↦ g + ε(g)``."""
    degs = d.algebra.degrees
    if not is_augmentation(d, eps):
        raise InvariantError("not an augmentation of this DGA")
    bases: Dict[int, List[str]] = {}
    for g in d.generators:
        bases.setdefault(degs[g], []).append(g)
    pos = {g: (k, i) for k, basis in bases.items() for i, g in enumerate(basis)}
    ones = eps.ones
    columns: Dict[int, List[int]] = {k: [] for k in bases}
    for g in d.generators:
        col = 0
        const = 0
        for w in d.diff[g].terms:
            missing = [i for i, h in enumerate(w) if h not in ones]
            if not missing:
                const ^= 1
                for h in w:
                    col ^= 1 << pos[h][1]
            elif len(missing) == 1:
                col ^= 1 << pos[w[missing[0]]][1]
        if const:
            raise InvariantError(f"nonzero constant term in the linearized differential of {g}")
        columns[degs[g]].append(col)
    lc = LinearizedComplex(bases, columns)
    bad = lc.check_d_squared()
    if bad:
        raise InvariantError(f"linearized differential does not square to zero in degrees {bad}")
    return lc


def homology_ranks(c: LinearizedComplex) -> Dict[int, int]:
    out = {}
    for k in sorted(c.bases):
        dim = len(c.bases[k])
        out[k] = dim - c.rank(k) - c.rank(k + 1)
    return out


# -- CH0 of a torus cone ----------------------------------------------------------------


@dataclass
class CH0Presentation:
    """Either ``Z2[x]/(relation)`` (``reducible``) or a not-reducible diagnostic.

    With no degree-0 generators the algebra is Z2 itself: ``variable`` is None
    and ``relation`` is the zero polynomial.
    """

    reducible: bool
    variable: Optional[str] = None
    relation: Optional[UPoly2] = None
    relations: List[UPoly2] = field(default_factory=list)
    classes: List[List[str]] = field(default_factory=list)

    @property
    def nonzero(self) -> bool:
        if not self.reducible:
            raise InvariantError("CH0 was not reduced to a single generator")
        return self.relation != UPoly2(1)

    def render(self) -> str:
        if not self.reducible:
            parts = " | ".join("{" + ",".join(c) + "}" for c in self.classes)
            return f"not reducible: degree-0 classes {parts}"
        if self.variable is None:
            return "Z2"
        return f"Z2[x]/({self.relation})"


def reduce_ch0_single_generator(cone) -> CH0Presentation:
    """Identify degree-0 generators through binomial relations ``bi + bj`` and, when
    a single class remains, present CH0 as ``Z2[x]/(gcd of the reduced relations)``.

    Accepts a :class:`~dgacone.cone.ConeDga` or a plain :class:`Dga`.
    """
    d: Dga = getattr(cone, "dga", cone)
    degs = d.algebra.degrees
    gens0 = _degree_zero(d)
    open_gens = [g for g in gens0 if d.diff[g]]
    if open_gens:
        raise InvariantError(f"degree-0 generators with nonzero differential: {open_gens}")
    if not gens0:
        return CH0Presentation(True, None, UPoly2(0), [], [])

    rels = [d.diff[g] for g in d.generators if degs[g] == 1 and d.diff[g]]
    uf = DisjointSet(gens0)
    for r in rels:
        if len(r.terms) == 2 and all(len(w) == 1 for w in r.terms):
            (x,), (y,) = tuple(r.terms)
            uf.merge(x, y)
    classes = [sorted(s, key=gens0.index) for s in uf.subsets()]
    classes.sort(key=lambda c: gens0.index(c[0]))
    if len(classes) != 1:
        return CH0Presentation(False, None, None, [], classes)

    reduced: List[UPoly2] = []
    for r in rels:
        u = abelianize(r, gens0)
        if u and u not in reduced:
            reduced.append(u)
    g = UPoly2(0)
    for u in reduced:
        g = upoly_gcd(g, u)
    return CH0Presentation(True, "x", g, reduced, classes)
