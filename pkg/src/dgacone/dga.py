"""Differential graded algebras over Z2, their morphisms, homotopies and tame isomorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .freealg import (
    Algebra,
    AlgebraError,
    DomainMismatchError,
    GenMap,
    HomotopyEvaluator,
    Poly,
    UnknownGeneratorError,
    Word,
    _toggle,
)


class DgaError(AlgebraError):
    pass


class DestabilizationError(DgaError):
    pass


class VerificationError(DgaError):
    """An internal consistency check failed; carries the offending report."""

    def __init__(self, message: str, report: "ValidationReport" = None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class Issue:
    kind: str
    generator: Optional[str]
    residual: Optional[Poly] = None
    message: str = ""

    def __str__(self):
        where = f" at {self.generator}" if self.generator else ""
        extra = f": {self.residual}" if self.residual is not None else ""
        msg = f" ({self.message})" if self.message else ""
        return f"{self.kind}{where}{extra}{msg}"


@dataclass
class ValidationReport:
    issues: List[Issue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, kind: str, generator: Optional[str], residual: Optional[Poly] = None, message: str = ""):
        self.issues.append(Issue(kind, generator, residual, message))

    def kinds(self) -> set:
        return {i.kind for i in self.issues}

    def __iter__(self):
        return iter(self.issues)

    def __len__(self):
        return len(self.issues)

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(i) for i in self.issues)


class Dga:
    """Free algebra plus a differential given on generators (zero where omitted)."""

    __slots__ = ("algebra", "diff")

    def __init__(self, algebra: Algebra, diff: Optional[Mapping[str, Poly]] = None):
        diff = dict(diff or {})
        for g, p in diff.items():
            if g not in algebra:
                raise UnknownGeneratorError(f"differential given for unknown generator {g!r}")
            if p.alg != algebra:
                raise DomainMismatchError(f"differential of {g!r} lies in another algebra")
        self.algebra = algebra
        self.diff: Dict[str, Poly] = {g: diff.get(g, algebra.zero()) for g in algebra.names}

    @classmethod
    def from_spec(cls, generators: Sequence[Tuple[str, int]], diffs: Mapping[str, str] = None) -> "Dga":
        """Build from ``[(name, degree), ...]`` and ``{name: "poly text"}``."""
        alg = Algebra(generators)
        return cls(alg, {g: alg.parse(t) for g, t in (diffs or {}).items()})

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.algebra.names

    def degree(self, g: str) -> int:
        return self.algebra.degree(g)

    def __eq__(self, other):
        if not isinstance(other, Dga):
            return NotImplemented
        return self.algebra == other.algebra and self.diff == other.diff

    def __repr__(self):
        return f"Dga({len(self.generators)} generators)"

    def d(self, p: Poly) -> Poly:
        return differential_apply(self, p)

    def identity(self) -> "DgaMorphism":
        return DgaMorphism(self, self, GenMap.identity(self.algebra))

    def generators_of_degree(self, k: int) -> List[str]:
        return [g for g in self.generators if self.algebra.degrees[g] == k]


def differential_apply(d: Dga, p: Poly) -> Poly:
    """Leibniz extension of the generator differential (no signs over Z2)."""
    if p.alg != d.algebra:
        raise DomainMismatchError("polynomial is not over this DGA's generators")
    diff = d.diff
    acc: set = set()
    for word in p.terms:
        for j, g in enumerate(word):
            try:
                dg = diff[g].terms
            except KeyError:
                raise UnknownGeneratorError(f"unknown generator {g!r}") from None
            if not dg:
                continue
            head, tail = word[:j], word[j + 1:]
            for m in dg:
                _toggle(acc, head + m + tail)
    return Poly._raw(d.algebra, frozenset(acc))


def validate_dga(d: Dga) -> ValidationReport:
    report = ValidationReport()
    alg = d.algebra
    for g in d.generators:
        dg = d.diff[g]
        if not dg:
            continue
        degs = dg.degrees()
        want = alg.degrees[g] - 1
        if degs != {want}:
            report.add("grading", g, dg, f"expected degree {want}, found {sorted(degs)}")
        h = alg.index(g)
        late = sorted(x for x in dg.generators() if alg.index(x) >= h)
        if late:
            report.add("triangularity", g, dg, f"mentions {', '.join(late)} at or above its height")
    for g in d.generators:
        dd = differential_apply(d, d.diff[g])
        if dd:
            report.add("d^2", g, dd)
    return report


class DgaMorphism:
    """Algebra map between DGAs given on generators."""

    __slots__ = ("source", "target", "map")

    def __init__(self, source: Dga, target: Dga, genmap: Union[GenMap, Mapping[str, Poly]]):
        if not isinstance(genmap, GenMap):
            genmap = GenMap(source.algebra, target.algebra, genmap)
        if genmap.domain != source.algebra or genmap.codomain != target.algebra:
            raise DomainMismatchError("map does not match source/target algebras")
        self.source = source
        self.target = target
        self.map = genmap

    @classmethod
    def from_text(cls, source: Dga, target: Dga, images: Mapping[str, str]) -> "DgaMorphism":
        """Images given as text; generators left out map identically (source must equal target then)."""
        out = {}
        for g in source.generators:
            if g in images:
                out[g] = target.algebra.parse(images[g])
            elif source.algebra == target.algebra:
                out[g] = target.algebra.gen(g)
            else:
                raise DgaError(f"no image given for {g!r} and source differs from target")
        extra = set(images) - set(source.generators)
        if extra:
            raise UnknownGeneratorError(f"images given for unknown generators {sorted(extra)}")
        return cls(source, target, out)

    def __call__(self, p: Poly) -> Poly:
        return self.map(p)

    def __getitem__(self, g: str) -> Poly:
        return self.map[g]

    def __eq__(self, other):
        if not isinstance(other, DgaMorphism):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.map == other.map

    def compose(self, first: "DgaMorphism") -> "DgaMorphism":
        """``self ∘ first``."""
        if first.target != self.source:
            raise DomainMismatchError("morphisms are not composable")
        return DgaMorphism(first.source, self.target, self.map.compose(first.map))


def validate_chain_map(f: DgaMorphism) -> ValidationReport:
    report = ValidationReport()
    src = f.source
    for g in src.generators:
        img = f.map[g]
        if img:
            degs = img.degrees()
            if degs != {src.degree(g)}:
                report.add("grading", g, img, f"image has degrees {sorted(degs)}, expected {src.degree(g)}")
    for g in src.generators:
        res = f(src.diff[g]) + f.target.d(f.map[g])
        if res:
            report.add("chain", g, res)
    return report


class ChainHomotopy:
    """K with ``φ + ψ = K∘∂ + ∂∘K``, stored as generator values plus an extension rule."""

    def __init__(self, phi: DgaMorphism, psi: DgaMorphism, values: Mapping[str, Poly], rule: str = "psi_left"):
        if phi.source != psi.source or phi.target != psi.target:
            raise DomainMismatchError("phi and psi must share source and target")
        full = {g: values.get(g, phi.target.algebra.zero()) for g in phi.source.generators}
        self.phi = phi
        self.psi = psi
        self.evaluator = HomotopyEvaluator(phi.map, psi.map, full, rule)

    @property
    def values(self) -> GenMap:
        return self.evaluator.values

    @property
    def rule(self) -> str:
        return self.evaluator.rule

    def __call__(self, p: Poly) -> Poly:
        return self.evaluator(p)


def validate_homotopy(K: ChainHomotopy) -> ValidationReport:
    report = ValidationReport()
    src, tgt = K.phi.source, K.phi.target
    for g in src.generators:
        kg = K.values[g]
        if kg and kg.degrees() != {src.degree(g) + 1}:
            report.add("grading", g, kg, f"K value should have degree {src.degree(g) + 1}")
    for g in src.generators:
        res = K.phi.map[g] + K.psi.map[g] + K(src.diff[g]) + tgt.d(K.values[g])
        if res:
            report.add("homotopy", g, res)
    return report


def homotopic_partner(phi: DgaMorphism, values: Mapping[str, Poly], rule: str = "psi_left") -> ChainHomotopy:
    """Given φ and generator values of K, define ψ := φ + K∂ + ∂K on generators.

    Generators are processed by height, so K on ∂g only needs ψ on lower
    generators.  The resulting ψ is a chain map whenever φ is.
    """
    src, tgt = phi.source, phi.target
    zero = tgt.algebra.zero()
    kvals = {g: values.get(g, zero) for g in src.generators}
    psi_images: Dict[str, Poly] = {}
    for g in src.generators:
        lower = {h: psi_images.get(h, zero) for h in src.generators}
        psi_partial = GenMap(src.algebra, tgt.algebra, lower)
        k = HomotopyEvaluator(phi.map, psi_partial, kvals, rule)
        psi_images[g] = phi.map[g] + k(src.diff[g]) + tgt.d(kvals[g])
    psi = DgaMorphism(src, tgt, psi_images)
    return ChainHomotopy(phi, psi, kvals, rule)


# -- tame isomorphisms ----------------------------------------------------------


@dataclass(frozen=True)
class Substitution:
    """Elementary automorphism ``g ↦ g + addend`` (its own inverse over Z2)."""

    generator: str
    addend: Poly

    def inverse(self) -> "Substitution":
        return self


@dataclass(frozen=True)
class Relabel:
    """Renaming of generators; ``mapping`` sends old names to new names."""

    mapping: Tuple[Tuple[str, str], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, str]) -> "Relabel":
        return cls(tuple(sorted(mapping.items())))

    def inverse(self) -> "Relabel":
        return Relabel(tuple(sorted((b, a) for a, b in self.mapping)))


Step = Union[Substitution, Relabel]


@dataclass(frozen=True)
class TameIso:
    """Composite ``s_{m-1} ∘ … ∘ s_0`` of elementary steps (``steps[0]`` acts first)."""

    steps: Tuple[Step, ...] = ()

    def inverse(self) -> "TameIso":
        return TameIso(tuple(s.inverse() for s in reversed(self.steps)))

    def __len__(self):
        return len(self.steps)

    def as_map(self, alg: Algebra) -> GenMap:
        """The composite as an algebra map out of ``alg``."""
        current = GenMap.identity(alg)
        for step in self.steps:
            cod = current.codomain
            if isinstance(step, Substitution):
                g, u = step.generator, step.addend
                if g not in cod:
                    raise UnknownGeneratorError(f"substitution for unknown generator {g!r}")
                if u.alg != cod:
                    raise DomainMismatchError(f"addend for {g!r} is over another algebra")
                if g in u.generators():
                    raise DgaError(f"self-referential substitution {g} -> {g} + {u}")
                if u and u.degrees() != {cod.degrees[g]}:
                    raise DgaError(f"substitution for {g!r} does not preserve degree")
                images = {h: cod.gen(h) for h in cod.names}
                images[g] = images[g] + u
                s = GenMap(cod, cod, images)
            else:
                names = dict(step.mapping)
                unknown = [a for a in names if a not in cod]
                if unknown:
                    raise UnknownGeneratorError(f"relabel of unknown generators {unknown}")
                new_names = [names.get(h, h) for h in cod.names]
                if len(set(new_names)) != len(new_names):
                    raise DgaError("relabel is not injective")
                new_alg = Algebra((names.get(h, h), cod.degrees[h]) for h in cod.names)
                s = GenMap.rename(cod, new_alg, {h: names.get(h, h) for h in cod.names})
            current = s.compose(current)
        return current


def apply_tame_iso(t: TameIso, d: Dga) -> Dga:
    """Transport the differential: ``∂' = t ∘ ∂ ∘ t⁻¹`` on generators."""
    fwd = t.as_map(d.algebra)
    out_alg = fwd.codomain
    back = t.inverse().as_map(out_alg)
    if back.codomain != d.algebra:
        raise VerificationError("tame isomorphism does not invert to the original algebra")
    diff = {g: fwd(differential_apply(d, back[g])) for g in out_alg.names}
    return Dga(out_alg, diff)


# -- destabilization ------------------------------------------------------------


def destabilize(d: Dga, a: str, b: str) -> Tuple[Dga, DgaMorphism]:
    """Cancel the pair (a, b) with ``∂a = b + v``.

    Returns the DGA on the other generators with ``∂' = τ∘∂`` and the
    projection ``τ`` (a ↦ 0, b ↦ v, identity elsewhere), which is checked to
    be a chain map.
    """
    alg = d.algebra
    alg.index(a)
    alg.index(b)
    if a == b:
        raise DestabilizationError("a and b must be distinct")
    da = d.diff[a]
    if (b,) not in da.terms:
        raise DestabilizationError(f"d{a} = {da} is not of the form {b} + v")
    v = da + alg.gen(b)
    if b in v.generators() or a in v.generators():
        raise DestabilizationError(f"d{a} = {da}: v must contain neither {a} nor {b}")
    rest = Algebra((g, alg.degrees[g]) for g in alg.names if g not in (a, b))
    v_rest = Poly(rest, v.terms)
    images = {g: rest.gen(g) for g in rest.names}
    images[a] = rest.zero()
    images[b] = v_rest
    tau_map = GenMap(alg, rest, images)
    new_diff = {g: tau_map(d.diff[g]) for g in rest.names}
    out = Dga(rest, new_diff)
    tau = DgaMorphism(d, out, tau_map)
    report = validate_chain_map(tau)
    if not report.ok:
        raise DestabilizationError(f"projection is not a chain map:\n{report}")
    return out, tau


def stabilize(d: Dga, a: str, b: str, deg_b: int, v: Optional[Poly] = None) -> Dga:
    """Append generators b (degree ``deg_b``) and a above it with ``∂a = b + v``, ``∂b = ∂v``."""
    alg = d.algebra
    new_alg = Algebra([(g, alg.degrees[g]) for g in alg.names] + [(b, deg_b), (a, deg_b + 1)])
    v_new = Poly(new_alg, v.terms) if v is not None else new_alg.zero()
    diff = {g: Poly(new_alg, p.terms) for g, p in d.diff.items()}
    diff[b] = Poly(new_alg, differential_apply(d, v).terms) if v is not None else new_alg.zero()
    diff[a] = new_alg.gen(b) + v_new
    return Dga(new_alg, diff)


def embed(p: Poly, alg: Algebra, names: Optional[Mapping[str, str]] = None) -> Poly:
    """Reinterpret ``p`` in ``alg``, optionally renaming letters."""
    if names is None:
        terms: Iterable[Word] = p.terms
    else:
        terms = (tuple(names[g] for g in w) for w in p.terms)
    out = Poly(alg, terms)
    missing = [g for g in out.generators() if g not in alg]
    if missing:
        raise UnknownGeneratorError(f"generators {sorted(missing)} not in target algebra")
    return out
