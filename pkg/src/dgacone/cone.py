"""Mapping cones of DGA morphisms, their concatenation, and homotopy-induced isomorphisms.

Naming in an interval cone of ``φ: A → B``: a source generator ``x`` becomes
``x[-]``, a target generator ``y`` becomes ``y[+]`` and the hat of ``x`` is
``x^``.  In a torus cone of an endomorphism, plain generators keep their name
and hats are ``x^``.

The twisted derivation puts the plain prefix in source copies and the
φ-image suffix in target copies.  The mirrored convention (prefix in
target copies, suffix in source copies) is obtained by reversing every word;
:func:`reverse_words` does that.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

from .dga import (
    Dga,
    DgaError,
    DgaMorphism,
    ChainHomotopy,
    Substitution,
    TameIso,
    VerificationError,
    ValidationReport,
    destabilize,
    differential_apply,
    embed,
    validate_chain_map,
    validate_dga,
    validate_homotopy,
)
from .freealg import Algebra, GenMap, HomotopyEvaluator, Poly, gamma_K, gamma_twisted

SOURCE, TARGET, HAT, PLAIN = "source", "target", "hat", "plain"


def source_name(x: str) -> str:
    return f"{x}[-]"


def target_name(y: str) -> str:
    return f"{y}[+]"


def hat_name(x: str) -> str:
    return f"{x}^"


@dataclass
class ConeDga:
    """A cone DGA with per-generator roles and the morphism it was built from.

    ``roles`` maps each cone generator to ``(role, original generator)``.
    """

    dga: Dga
    flavor: str
    roles: Dict[str, Tuple[str, str]]
    phi: Optional[DgaMorphism] = None

    @property
    def generators(self):
        return self.dga.generators

    def hats(self) -> Dict[str, str]:
        """original generator -> hat generator."""
        return {orig: g for g, (role, orig) in self.roles.items() if role == HAT}

    def copies(self, role: str) -> Dict[str, str]:
        return {orig: g for g, (r, orig) in self.roles.items() if r == role}

    def __eq__(self, other):
        if not isinstance(other, ConeDga):
            return NotImplemented
        return self.dga == other.dga and self.flavor == other.flavor and self.roles == other.roles


class ConeError(DgaError):
    pass


def _require_chain_map(phi: DgaMorphism) -> None:
    report = validate_chain_map(phi)
    if not report.ok:
        raise ConeError(f"not a chain map:\n{report}")


def build_cone_interval(phi: DgaMorphism, check: bool = True) -> ConeDga:
    """Mapping cone ``C_φ``: target copies, then source copies, then hats (by height)."""
    if check:
        _require_chain_map(phi)
    src, tgt = phi.source, phi.target
    gens = [(target_name(y), tgt.degree(y)) for y in tgt.generators]
    gens += [(source_name(x), src.degree(x)) for x in src.generators]
    gens += [(hat_name(x), src.degree(x) + 1) for x in src.generators]
    alg = Algebra(gens)

    left = {x: source_name(x) for x in src.generators}
    right = {y: target_name(y) for y in tgt.generators}
    hat = {x: hat_name(x) for x in src.generators}
    iota_plus = GenMap.rename(tgt.algebra, alg, right)
    phi_plus = iota_plus.compose(phi.map)

    diff = {}
    for y in tgt.generators:
        diff[target_name(y)] = iota_plus(tgt.diff[y])
    for x in src.generators:
        diff[source_name(x)] = embed(src.diff[x], alg, left)
    for x in src.generators:
        diff[hat_name(x)] = (
            alg.gen(source_name(x)) + phi_plus[x] + gamma_twisted(phi_plus, hat, src.diff[x], left=left)
        )
    roles = {target_name(y): (TARGET, y) for y in tgt.generators}
    roles.update({source_name(x): (SOURCE, x) for x in src.generators})
    roles.update({hat_name(x): (HAT, x) for x in src.generators})
    return ConeDga(Dga(alg, diff), "interval", roles, phi)


def build_cone_torus(phi: DgaMorphism, check: bool = True) -> ConeDga:
    """Cone of a chain endomorphism: ``Δc = ∂c``, ``Δĉ = c + φ(c) + Γ_φ(∂c)``; Δ² = 0 is verified."""
    if phi.source != phi.target:
        raise ConeError("torus cone needs an endomorphism (source = target)")
    if check:
        _require_chain_map(phi)
    base = phi.source
    gens = [(x, base.degree(x)) for x in base.generators]
    gens += [(hat_name(x), base.degree(x) + 1) for x in base.generators]
    alg = Algebra(gens)
    inc = GenMap.rename(base.algebra, alg, {x: x for x in base.generators})
    phi_hat = inc.compose(phi.map)
    hat = {x: hat_name(x) for x in base.generators}

    diff = {}
    for x in base.generators:
        diff[x] = inc(base.diff[x])
    for x in base.generators:
        diff[hat_name(x)] = alg.gen(x) + phi_hat[x] + gamma_twisted(phi_hat, hat, base.diff[x])
    cone = Dga(alg, diff)
    if check:
        for g in cone.generators:
            dd = differential_apply(cone, cone.diff[g])
            if dd:
                raise VerificationError(f"torus cone has nonzero Δ² at {g}: {dd}")
    roles = {x: (PLAIN, x) for x in base.generators}
    roles.update({hat_name(x): (HAT, x) for x in base.generators})
    return ConeDga(cone, "torus", roles, phi)


def middle_name(b: str) -> str:
    return f"{b}[0]"


def middle_hat_name(b: str) -> str:
    return f"{b}[0]^"


def _check_interval(c: ConeDga) -> DgaMorphism:
    if c.flavor != "interval" or c.phi is None:
        raise ConeError("expected an interval cone with its morphism")
    return c.phi


def glue_cones(cA: ConeDga, cB: ConeDga) -> Dga:
    """Identify the target copies of ``cA`` with the source copies of ``cB``.

    Names: A1 as ``x[-]``, A2 as ``x[0]``, A3 as ``x[+]``, hats of A1 as
    ``x^``, hats of A2 as ``x[0]^``.  Height order: A3, A2, A1, A2-hats, A1-hats.
    """
    alpha, beta = _check_interval(cA), _check_interval(cB)
    a1, a2, a3 = alpha.source, alpha.target, beta.target
    if a2 != beta.source:
        problems = _describe_mismatch(a2, beta.source)
        raise ConeError("middle algebras differ:\n" + "\n".join(problems))

    gens = [(target_name(z), a3.degree(z)) for z in a3.generators]
    gens += [(middle_name(b), a2.degree(b)) for b in a2.generators]
    gens += [(source_name(x), a1.degree(x)) for x in a1.generators]
    gens += [(middle_hat_name(b), a2.degree(b) + 1) for b in a2.generators]
    gens += [(hat_name(x), a1.degree(x) + 1) for x in a1.generators]
    alg = Algebra(gens)

    # cA names -> glued names
    from_a = {target_name(b): middle_name(b) for b in a2.generators}
    from_a.update({source_name(x): source_name(x) for x in a1.generators})
    from_a.update({hat_name(x): hat_name(x) for x in a1.generators})
    # cB names -> glued names
    from_b = {source_name(b): middle_name(b) for b in a2.generators}
    from_b.update({target_name(z): target_name(z) for z in a3.generators})
    from_b.update({hat_name(b): middle_hat_name(b) for b in a2.generators})

    diff = {}
    for g, p in cA.dga.diff.items():
        diff[from_a[g]] = embed(p, alg, from_a)
    for g, p in cB.dga.diff.items():
        q = embed(p, alg, from_b)
        name = from_b[g]
        if name in diff and diff[name] != q:
            raise ConeError(f"glued differentials disagree at {name}")
        diff[name] = q
    return Dga(alg, diff)


def _describe_mismatch(x: Dga, y: Dga) -> List[str]:
    out = []
    for g in x.generators:
        if g not in y.algebra:
            out.append(f"{g}: missing on the right")
        elif x.degree(g) != y.degree(g):
            out.append(f"{g}: degree {x.degree(g)} vs {y.degree(g)}")
        elif x.diff[g].terms != y.diff[g].terms:
            out.append(f"{g}: d = {x.diff[g]} vs {y.diff[g]}")
    for g in y.generators:
        if g not in x.algebra:
            out.append(f"{g}: missing on the left")
    if not out and x.generators != y.generators:
        out.append("generator order differs")
    return out


@dataclass
class ConcatResult:
    cone: ConeDga
    glued: Dga
    projection: GenMap
    eq_tech: ValidationReport = field(default_factory=ValidationReport)


def concat_cones_full(cA: ConeDga, cB: ConeDga) -> ConcatResult:
    alpha, beta = _check_interval(cA), _check_interval(cB)
    glued = glue_cones(cA, cB)
    a2 = alpha.target
    d = glued
    proj = GenMap.identity(glued.algebra)
    for b in reversed(a2.generators):
        d, tau = destabilize(d, middle_hat_name(b), middle_name(b))
        proj = tau.map.compose(proj)

    composite = beta.compose(alpha)
    a3 = beta.target
    eq_tech = ValidationReport()
    for b in a2.generators:
        want = embed(beta.map[b], d.algebra, {z: target_name(z) for z in a3.generators})
        got = proj[middle_name(b)]
        if got != want:
            eq_tech.add("eq-tech", b, got + want)
    if not eq_tech.ok:
        raise VerificationError(f"composite projection disagrees with the second morphism:\n{eq_tech}", eq_tech)

    roles = {target_name(z): (TARGET, z) for z in a3.generators}
    roles.update({source_name(x): (SOURCE, x) for x in alpha.source.generators})
    roles.update({hat_name(x): (HAT, x) for x in alpha.source.generators})
    cone = ConeDga(d, "interval", roles, composite)
    return ConcatResult(cone, glued, proj, eq_tech)


def concat_cones(cA: ConeDga, cB: ConeDga) -> ConeDga:
    """Glue two cones and cancel each middle pair (b^, b), highest first."""
    return concat_cones_full(cA, cB).cone


def _lift_homotopy(K: ChainHomotopy, cone: ConeDga) -> Tuple[HomotopyEvaluator, Dict[str, str], Dict[str, str]]:
    src, tgt = K.phi.source, K.phi.target
    alg = cone.dga.algebra
    iota_plus = GenMap.rename(tgt.algebra, alg, {y: target_name(y) for y in tgt.generators})
    phi_c = iota_plus.compose(K.phi.map)
    psi_c = iota_plus.compose(K.psi.map)
    vals = {x: iota_plus(K.values[x]) for x in src.generators}
    ev = HomotopyEvaluator(phi_c, psi_c, vals, K.rule)
    left = {x: source_name(x) for x in src.generators}
    hat = {x: hat_name(x) for x in src.generators}
    return ev, left, hat


def homotopy_iso(K: ChainHomotopy, check: bool = True) -> TameIso:
    """``F(x^) = x^ + K(x) + Γ_K(∂x)``, identity on copies; verified ``F∘Δ_φ = Δ_ψ∘F``.

    Steps are ordered by ascending hat height; each is an involution.
    """
    if check:
        report = validate_homotopy(K)
        if not report.ok:
            raise ConeError(f"invalid homotopy:\n{report}")
    cone_phi = build_cone_interval(K.phi, check=check)
    cone_psi = build_cone_interval(K.psi, check=check)
    ev, left, hat = _lift_homotopy(K, cone_phi)
    src = K.phi.source
    steps = []
    for x in src.generators:
        u = ev(Poly(ev.domain, ((x,),))) + gamma_K(ev, hat, src.diff[x], left=left)
        if u:
            steps.append(Substitution(hat_name(x), u))
    F = TameIso(tuple(steps))
    report = verify_iso(F, cone_phi.dga, cone_psi.dga)
    if not report.ok:
        raise VerificationError(f"F is not a chain isomorphism:\n{report}", report)
    return F


def verify_iso(F: TameIso, d_from: Dga, d_to: Dga) -> ValidationReport:
    """Residuals ``F(Δ_from g) + Δ_to(F g)`` for every generator."""
    fmap = F.as_map(d_from.algebra)
    report = ValidationReport()
    if fmap.codomain != d_to.algebra:
        report.add("algebra", None, message="F does not land in the target algebra")
        return report
    for g in d_from.generators:
        res = fmap(d_from.diff[g]) + differential_apply(d_to, fmap[g])
        if res:
            report.add("chain-iso", g, res)
    return report


def reverse_words(p: Poly) -> Poly:
    return Poly(p.alg, (tuple(reversed(w)) for w in p.terms))


def cone_report(cone: ConeDga) -> ValidationReport:
    """DGA axioms plus the cone invariants (hat degrees, embedded differentials)."""
    report = validate_dga(cone.dga)
    alg = cone.dga.algebra
    phi = cone.phi
    for g, (role, orig) in cone.roles.items():
        if role == HAT and phi is not None:
            if alg.degrees[g] != phi.source.degree(orig) + 1:
                report.add("hat-degree", g)
    if phi is not None and cone.flavor == "interval":
        for role, base, namer in ((SOURCE, phi.source, source_name), (TARGET, phi.target, target_name)):
            names = {x: namer(x) for x in base.generators}
            for x in base.generators:
                want = embed(base.diff[x], alg, names)
                if cone.dga.diff[namer(x)] != want:
                    report.add(f"{role}-embedding", namer(x), cone.dga.diff[namer(x)] + want)
    return report
