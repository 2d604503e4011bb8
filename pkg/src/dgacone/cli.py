"""``dga`` command-line front end.

Exit codes: 0 success, 1 validation or verification failure, 2 parse or usage
error, 3 resource bound exceeded.  Results go to stdout (or ``-o``),
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional

from .cone import ConeError, build_cone_interval, build_cone_torus, concat_cones, cone_report, homotopy_iso
from .dga import DgaError, ValidationReport, VerificationError, validate_chain_map, validate_dga, validate_homotopy
from .fileio import (
    format_cone,
    format_dga,
    format_morphism,
    format_tame_iso,
    load_cone,
    load_dga,
    load_dga_file,
    load_morphism,
    parse_homotopy_text,
    cone_from_file,
)
from .freealg import AlgebraError, ParseError
from .invariants import (
    InvariantError,
    ResourceLimitError,
    find_augmentations,
    homology_ranks,
    linearize,
    monodromy_orbits,
    parse_augmentation,
    reduce_ch0_single_generator,
)
from .knots import KnotError, torus_2p_dga, torus_2p_monodromy

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(report: ValidationReport, label: str) -> int:
    if report.ok:
        print(f"{label}: valid")
        return EXIT_OK
    print(f"{label}: invalid", file=sys.stderr)
    print(str(report), file=sys.stderr)
    return EXIT_INVALID


def cmd_check(args) -> int:
    f = load_dga_file(args.file)
    if f.flavor:
        code = _report(cone_report(cone_from_file(f)), f"{f.flavor} cone")
    else:
        code = _report(validate_dga(f.dga), "dga")
    if args.morphism:
        mu = load_morphism(args.morphism, source=f.dga, target=f.dga)
        code = max(code, _report(validate_chain_map(mu), "morphism"))
    return code


def cmd_cone(args) -> int:
    source = load_dga(args.source) if args.source else None
    phi = load_morphism(args.morphism, source=source)
    report = validate_chain_map(phi)
    if not report.ok:
        return _report(report, "morphism")
    cone = build_cone_torus(phi) if args.torus else build_cone_interval(phi)
    _emit(format_cone(cone), args.output)
    return EXIT_OK


def cmd_concat(args) -> int:
    cone = concat_cones(load_cone(args.cone_a), load_cone(args.cone_b))
    _emit(format_cone(cone), args.output)
    return EXIT_OK


def cmd_aug(args) -> int:
    d = load_dga(args.file)
    augs = find_augmentations(d, jobs=args.jobs)
    lines = [a.render(d.generators) for a in augs]
    lines.append(f"total={len(augs)}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_orbits(args) -> int:
    d = load_dga(args.file)
    mu = load_morphism(args.morphism, source=d, target=d)
    report = validate_chain_map(mu)
    if not report.ok:
        return _report(report, "morphism")
    dec = monodromy_orbits(d, mu, find_augmentations(d, jobs=args.jobs))
    lines = []
    for orbit in dec.orbits:
        lines.append(f"cycle(len={len(orbit)}): " + " -> ".join(a.render(d.generators) for a in orbit))
    counts = dec.cycle_counts()
    cycles = ", ".join(f"{n}x{k}" for k, n in sorted(counts.items(), reverse=True) if k > 1) or "none"
    lines.append(f"fixed={counts.get(1, 0)}  cycles: {cycles}")
    lines.append(f"total={dec.total}")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_linhom(args) -> int:
    d = load_dga(args.file)
    eps = parse_augmentation(d, args.aug or "")
    c = linearize(d, eps)
    ranks = homology_ranks(c)
    lines = [" ".join(f"H{k}={v}" for k, v in ranks.items())]
    if args.ranks:
        lines.append(" ".join(f"rank_d{k}={c.rank(k)}" for k in sorted(c.bases)))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_ch0(args) -> int:
    d = load_dga(args.file)
    pres = reduce_ch0_single_generator(d)
    if not pres.reducible:
        _emit(f"CH0 {pres.render()}\n", args.output)
        return EXIT_OK
    augmentable = bool(find_augmentations(d, jobs=args.jobs))
    lines = [f"CH0 = {pres.render()}  nonzero={str(pres.nonzero).lower()}  augmentable={str(augmentable).lower()}"]
    if args.relations:
        lines.append("relations: " + ", ".join(str(r) for r in pres.relations))
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_torus(args) -> int:
    if args.monodromy:
        text = format_morphism(torus_2p_monodromy(args.p), f"torus-2-{args.p}")
    else:
        text = format_dga(torus_2p_dga(args.p))
    _emit(text, args.output)
    return EXIT_OK


def cmd_homotopy_iso(args) -> int:
    phi = load_morphism(args.phi)
    psi = load_morphism(args.psi, source=phi.source, target=phi.target)
    K = parse_homotopy_text(Path(args.K).read_text(), phi, psi, args.K)
    for label, report in (("phi", validate_chain_map(phi)), ("psi", validate_chain_map(psi)), ("K", validate_homotopy(K))):
        if not report.ok:
            return _report(report, label)
    try:
        F = homotopy_iso(K)
    except VerificationError as exc:
        print(str(exc), file=sys.stderr)
        _emit("verified=false\n", args.output)
        return EXIT_INVALID
    _emit(format_tame_iso(F) + "verified=true\n", args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dga", description="Free DGAs over Z2: mapping cones, augmentations and invariants.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="validate a DGA or cone file")
    s.add_argument("file")
    s.add_argument("--morphism", help="also check this endomorphism is a chain map")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("cone", help="mapping cone of a morphism")
    s.add_argument("--morphism", required=True)
    s.add_argument("--source", help="source DGA when the morphism file has no header")
    kind = s.add_mutually_exclusive_group()
    kind.add_argument("--torus", action="store_true")
    kind.add_argument("--interval", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_cone)

    s = sub.add_parser("concat", help="concatenate two interval cones")
    s.add_argument("cone_a")
    s.add_argument("cone_b")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_concat)

    s = sub.add_parser("aug", help="list all augmentations")
    s.add_argument("file")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_aug)

    s = sub.add_parser("orbits", help="orbits of augmentations under a monodromy")
    s.add_argument("file")
    s.add_argument("--morphism", required=True)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_orbits)

    s = sub.add_parser("linhom", help="linearized homology ranks")
    s.add_argument("file")
    s.add_argument("--aug", help="b1=1,b2=0,... (unlisted degree-0 generators are 0)")
    s.add_argument("--ranks", action="store_true", help="also print the rank of each d_k")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_linhom)

    s = sub.add_parser("ch0", help="single-generator presentation of CH0")
    s.add_argument("file")
    s.add_argument("--relations", action="store_true", help="also print the reduced relations")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_ch0)

    s = sub.add_parser("torus", help="emit the (p,2) torus knot DGA or its monodromy")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--monodromy", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_torus)

    s = sub.add_parser("homotopy-iso", help="tame isomorphism between the cones of homotopic maps")
    s.add_argument("--phi", required=True)
    s.add_argument("--psi", required=True)
    s.add_argument("--K", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_homotopy_iso)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _Usage as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ParseError, FileNotFoundError, KnotError) as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DgaError, AlgebraError, InvariantError, ConeError) as exc:
        print(f"dga: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
