"""Line-oriented text formats for DGAs, cones, morphisms and homotopies.

DGA file::

    # cone: interval            (optional header, cones only)
    gen b1 deg 0                (declaration order is height order)
    gen a1 deg 1  # role: plain a1
    d a1 = 1 + b1.b2

Morphism file: ``source REF`` and ``target REF`` headers followed by
``map NAME = poly`` lines.  Homotopy file: ``k NAME = poly`` lines, omitted
generators have K = 0.  A REF is a path (relative to the referring file) or a
built-in name: ``unknot``, ``trefoil``, ``torus-2-P``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from .cone import HAT, PLAIN, SOURCE, TARGET, ConeDga, hat_name, source_name, target_name
from .dga import ChainHomotopy, Dga, DgaMorphism, TameIso, Substitution, Relabel
from .freealg import NAME_PATTERN, Algebra, ParseError, Poly, UnknownGeneratorError, parse_poly
from .knots import KnotError, builtin_dga, builtin_monodromy

PathLike = Union[str, os.PathLike]

_GEN_RE = re.compile(rf"^gen\s+({NAME_PATTERN})\s+deg\s+(-?\d+)$")
_EQ_RE = re.compile(rf"^(d|map|k)\s+({NAME_PATTERN})\s*=\s*(.*)$")
_HDR_RE = re.compile(r"^(source|target)\s+(\S+)$")
_ROLE_RE = re.compile(rf"role:\s*(source|target|hat|plain)\s+({NAME_PATTERN})\s*$")
_CONE_RE = re.compile(r"^#\s*cone:\s*(interval|torus)\s*$")

BUILTIN_RE = re.compile(r"^(unknot|trefoil|torus-2-\d+)$")


def _split_comment(line: str) -> Tuple[str, str]:
    body, _, comment = line.partition("#")
    return body.strip(), comment.strip()


def _fail(path: Optional[str], lineno: int, msg: str) -> ParseError:
    where = f"{path}:{lineno}" if path else f"line {lineno}"
    return ParseError(f"{where}: {msg}")


@dataclass
class DgaFile:
    dga: Dga
    flavor: Optional[str] = None
    roles: Dict[str, Tuple[str, str]] = field(default_factory=dict)


def parse_dga_text(text: str, path: Optional[str] = None) -> DgaFile:
    gens: List[Tuple[str, int]] = []
    diffs: Dict[str, Tuple[int, str]] = {}
    roles: Dict[str, Tuple[str, str]] = {}
    flavor = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        m = _CONE_RE.match(raw.strip())
        if m:
            flavor = m.group(1)
            continue
        body, comment = _split_comment(raw)
        if not body:
            continue
        m = _GEN_RE.match(body)
        if m:
            name = m.group(1)
            if any(name == g for g, _ in gens):
                raise _fail(path, lineno, f"duplicate generator {name!r}")
            gens.append((name, int(m.group(2))))
            rm = _ROLE_RE.search(comment)
            if rm:
                roles[name] = (rm.group(1), rm.group(2))
            continue
        m = _EQ_RE.match(body)
        if m and m.group(1) == "d":
            name = m.group(2)
            if name in diffs:
                raise _fail(path, lineno, f"second differential for {name!r}")
            diffs[name] = (lineno, m.group(3))
            continue
        raise _fail(path, lineno, f"cannot parse {body!r}")
    try:
        alg = Algebra(gens)
    except Exception as exc:
        raise ParseError(f"{path or 'input'}: {exc}") from None
    diff = {}
    for name, (lineno, src) in diffs.items():
        if name not in alg:
            raise _fail(path, lineno, f"differential for undeclared generator {name!r}")
        try:
            diff[name] = parse_poly(src, alg)
        except (ParseError, UnknownGeneratorError) as exc:
            raise _fail(path, lineno, str(exc)) from None
    return DgaFile(Dga(alg, diff), flavor, roles)


def format_dga(d: Dga, roles: Optional[Dict[str, Tuple[str, str]]] = None, flavor: Optional[str] = None) -> str:
    lines = []
    if flavor:
        lines.append(f"# cone: {flavor}")
    for g in d.generators:
        line = f"gen {g} deg {d.degree(g)}"
        if roles and g in roles:
            role, orig = roles[g]
            line += f"  # role: {role} {orig}"
        lines.append(line)
    for g in d.generators:
        if d.diff[g]:
            lines.append(f"d {g} = {d.diff[g]}")
    return "\n".join(lines) + "\n"


def format_cone(cone: ConeDga) -> str:
    return format_dga(cone.dga, cone.roles, cone.flavor)


def _resolve(ref: str, base: Optional[Path]) -> Union[Path, str]:
    p = Path(ref)
    if not p.is_absolute() and base is not None:
        p = base / p
    if p.exists():
        return p
    if BUILTIN_RE.match(ref):
        return ref
    raise FileNotFoundError(f"no such file or built-in: {ref}")


def load_dga_file(ref: PathLike, base: Optional[Path] = None) -> DgaFile:
    target = _resolve(os.fspath(ref), base)
    if isinstance(target, str):
        return DgaFile(builtin_dga(target))
    return parse_dga_text(target.read_text(), str(target))


def load_dga(ref: PathLike, base: Optional[Path] = None) -> Dga:
    return load_dga_file(ref, base).dga


# -- cones --------------------------------------------------------------------------


def _sub_dga(d: Dga, members: Dict[str, str]) -> Dga:
    """The DGA on ``members`` (cone name -> original name), renamed back."""
    order = [g for g in d.generators if g in members]
    alg = Algebra((members[g], d.degree(g)) for g in order)
    diff = {}
    for g in order:
        p = d.diff[g]
        bad = [h for h in p.generators() if h not in members]
        if bad:
            raise ParseError(f"differential of {g} leaves its copy: {sorted(bad)}")
        diff[members[g]] = Poly(alg, (tuple(members[h] for h in w) for w in p.terms))
    return Dga(alg, diff)


def cone_from_file(f: DgaFile) -> ConeDga:
    """Rebuild the cone structure, recovering φ from the hat differentials."""
    if f.flavor is None:
        raise ParseError("not a cone file (missing '# cone:' header)")
    d = f.dga
    roles = f.roles
    missing = [g for g in d.generators if g not in roles]
    if missing:
        raise ParseError(f"generators without a role: {missing}")
    hats = {g: orig for g, (role, orig) in roles.items() if role == HAT}
    if f.flavor == "interval":
        src = _sub_dga(d, {g: o for g, (r, o) in roles.items() if r == SOURCE})
        tgt = _sub_dga(d, {g: o for g, (r, o) in roles.items() if r == TARGET})
        back = {target_name(y): y for y in tgt.generators}
        images = {}
        for g, x in hats.items():
            words = [w for w in d.diff[g].terms if all(h in back for h in w)]
            images[x] = Poly(tgt.algebra, (tuple(back[h] for h in w) for w in words))
        phi = DgaMorphism(src, tgt, images)
    else:
        base = _sub_dga(d, {g: o for g, (r, o) in roles.items() if r == PLAIN})
        images = {}
        for g, x in hats.items():
            words = [w for w in d.diff[g].terms if all(h in base.algebra for h in w)]
            images[x] = Poly(base.algebra, words) + base.algebra.gen(x)
        phi = DgaMorphism(base, base, images)
    return ConeDga(d, f.flavor, dict(roles), phi)


def load_cone(ref: PathLike) -> ConeDga:
    return cone_from_file(load_dga_file(ref))


# -- morphisms ------------------------------------------------------------------------


def parse_morphism_text(
    text: str,
    path: Optional[str] = None,
    source: Optional[Dga] = None,
    target: Optional[Dga] = None,
    base: Optional[Path] = None,
) -> DgaMorphism:
    images: Dict[str, Tuple[int, str]] = {}
    headers: Dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _ = _split_comment(raw)
        if not body:
            continue
        m = _HDR_RE.match(body)
        if m:
            headers[m.group(1)] = m.group(2)
            continue
        m = _EQ_RE.match(body)
        if m and m.group(1) == "map":
            if m.group(2) in images:
                raise _fail(path, lineno, f"second image for {m.group(2)!r}")
            images[m.group(2)] = (lineno, m.group(3))
            continue
        raise _fail(path, lineno, f"cannot parse {body!r}")
    if source is None:
        if "source" not in headers:
            raise ParseError(f"{path or 'morphism'}: no source DGA given")
        source = load_dga(headers["source"], base)
    if target is None:
        target = load_dga(headers["target"], base) if "target" in headers else source
    same = source.algebra == target.algebra
    out = {}
    for name, (lineno, src) in images.items():
        if name not in source.algebra:
            raise _fail(path, lineno, f"map for unknown generator {name!r}")
        try:
            out[name] = parse_poly(src, target.algebra)
        except (ParseError, UnknownGeneratorError) as exc:
            raise _fail(path, lineno, str(exc)) from None
    for g in source.generators:
        if g not in out:
            if not same:
                raise ParseError(f"{path or 'morphism'}: no image for {g!r} and source differs from target")
            out[g] = target.algebra.gen(g)
    return DgaMorphism(source, target, out)


def load_morphism(ref: PathLike, source: Optional[Dga] = None, target: Optional[Dga] = None) -> DgaMorphism:
    """A morphism file, or a built-in name meaning that knot's loop monodromy."""
    target_path = _resolve(os.fspath(ref), None)
    if isinstance(target_path, str):
        mu = builtin_monodromy(target_path)
        if source is not None and source != mu.source:
            raise ParseError(f"built-in morphism {target_path!r} does not act on the given DGA")
        return mu
    return parse_morphism_text(target_path.read_text(), str(target_path), source, target, target_path.parent)


def format_morphism(f: DgaMorphism, source_ref: Optional[str] = None, target_ref: Optional[str] = None) -> str:
    lines = []
    if source_ref:
        lines.append(f"source {source_ref}")
    if target_ref:
        lines.append(f"target {target_ref}")
    for g in f.source.generators:
        lines.append(f"map {g} = {f.map[g]}")
    return "\n".join(lines) + "\n"


def parse_homotopy_text(text: str, phi: DgaMorphism, psi: DgaMorphism, path: Optional[str] = None) -> ChainHomotopy:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _ = _split_comment(raw)
        if not body:
            continue
        m = _EQ_RE.match(body)
        if not m or m.group(1) != "k":
            raise _fail(path, lineno, f"cannot parse {body!r}")
        name = m.group(2)
        if name not in phi.source.algebra:
            raise _fail(path, lineno, f"K value for unknown generator {name!r}")
        try:
            values[name] = parse_poly(m.group(3), phi.target.algebra)
        except (ParseError, UnknownGeneratorError) as exc:
            raise _fail(path, lineno, str(exc)) from None
    return ChainHomotopy(phi, psi, values)


def format_homotopy(K: ChainHomotopy) -> str:
    return "".join(f"k {g} = {K.values[g]}\n" for g in K.phi.source.generators if K.values[g])


def format_tame_iso(t: TameIso) -> str:
    """One step per line, in the order the steps act."""
    lines = []
    for s in t.steps:
        if isinstance(s, Substitution):
            lines.append(f"sub {s.generator} += {s.addend}")
        else:
            lines.append("relabel " + ", ".join(f"{a} -> {b}" for a, b in s.mapping))
    return "\n".join(lines) + ("\n" if lines else "")
