"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 bad parameters,
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bounds, design, packing as pk, pircode as pc
from .errors import NotConstructedAtDeskScale, ParameterError, PirError, SearchTimeout
from .gf import is_prime_power, prime_power

FAMILIES = ("product", "affine", "slab", "projective", "arc", "unital", "conic",
            "cyclic", "configuration", "rbibd", "general")


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pircodes", description="k-server PIR code constructions and bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build a structure, its code and a verification report")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("--s", type=int)
    c.add_argument("--k", type=int)
    c.add_argument("--q", type=int)
    c.add_argument("--N", type=int)
    c.add_argument("--h", type=int)
    c.add_argument("--n", type=int)
    c.add_argument("--n-prime", type=int)
    c.add_argument("--v", type=int)
    c.add_argument("--t", type=int)
    c.add_argument("--b", type=int)
    c.add_argument("--z", type=int)
    c.add_argument("--factors", type=_ints)
    c.add_argument("--base", type=_ints, action="append", help="base block, repeatable")
    c.add_argument("--group-order", type=int)
    c.add_argument("--side", choices=("primal", "dual"), default="primal")
    c.add_argument("--max-nodes", type=int, default=2_000_000)
    c.add_argument("--out", type=Path, default=Path("."), help="output directory")
    c.add_argument("--stem", help="file name stem (default: family)")

    v = sub.add_parser("verify", help="re-verify a matrix file")
    v.add_argument("matrix", type=Path)
    v.add_argument("--k", type=int, help="claimed number of servers")
    v.add_argument("--oracle", action="store_true", help="brute-force confirmation (m <= 48)")

    b = sub.add_parser("bounds", help="seed, propagate and compare the P(s,k) ledger")
    b.add_argument("--s-min", type=int, default=2)
    b.add_argument("--s-max", type=int, default=30)
    b.add_argument("--k-min", type=int, default=2)
    b.add_argument("--k-max", type=int, default=7)
    b.add_argument("--effort", choices=sorted(bounds.EFFORT_NODES), default="standard")
    b.add_argument("--format", choices=("text", "csv"), default="text")
    b.add_argument("--out", type=Path, help="write the table here instead of stdout")
    b.add_argument("--report", type=Path, help="write the comparison report here")
    b.add_argument("--figure", type=Path, help="write an overhead heatmap (png/pdf/svg)")
    return parser


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise ParameterError(f"{args.family} needs {', '.join(missing)}")


def _construct(args):
    """Return (structure text, code, description)."""
    f = args.family
    k = args.k if args.k is not None else 3
    if f == "product":
        if args.factors:
            factors = args.factors
            k = args.k if args.k is not None else len(factors) + 1
            p = pk.direct_product_packing(factors, k - 1)
        else:
            _need(args, "s")
            factors = pk.best_factorization(args.s, k)
            p = pk.direct_product_packing(factors)
        return pk.export_packing(p), pc.code_from_packing(p), p.label
    if f == "affine":
        _need(args, "N", "q")
        p = pk.affine_packing(args.N, args.q, k)
    elif f == "slab":
        _need(args, "N", "q", "h")
        p = pk.affine_slab_packing(args.N, args.q, args.h, k)
    elif f == "projective":
        _need(args, "N", "q")
        p = pk.projective_packing(args.N, args.q, k)
    elif f == "arc":
        _need(args, "n", "n_prime")
        p = pk.arc_pencil_packing(args.n, args.n_prime, k)
    elif f == "unital":
        _need(args, "q")
        p = pk.unital_pencil_packing(args.q, k)
    elif f == "conic":
        _need(args, "q")
        p = pk.conic_pencil_packing(args.q, k)
    elif f == "general":
        _need(args, "s")
        p = pk.general_length_packing(args.s, k)
    elif f == "rbibd":
        _need(args, "v", "z")
        p = _rbibd_packing(args.v, args.z, args.k)
    elif f in ("cyclic", "configuration"):
        if f == "cyclic":
            _need(args, "v", "base")
            inc = design.cyclic_configuration(args.v, args.base)
        else:
            _need(args, "v", "t", "b", "z")
            inc = design.search_configuration(args.v, args.t, args.b, args.z,
                                              max_nodes=args.max_nodes, group_order=args.group_order)
        code = pc.code_from_configuration(inc, args.side)
        return design.export_incidence(inc), code, code.label
    else:  # pragma: no cover - argparse restricts choices
        raise ParameterError(f"unknown family {f}")
    return pk.export_packing(p), pc.code_from_packing(p), p.label


def _rbibd_packing(v: int, z: int, k: int | None) -> pk.PartialPacking:
    verdict = design.rbibd_catalog(v, z)
    if not verdict.exists:
        raise ParameterError(f"no resolvable 2-({v},{z},1) design is catalogued ({verdict.status})")
    classes = (v - 1) // (z - 1)
    k = 1 + classes if k is None else k
    if is_prime_power(z):
        p, e = prime_power(z)
        pv, ev = prime_power(v) if is_prime_power(v) else (None, None)
        if pv == p and ev % e == 0:
            return pk.affine_packing(ev // e, z, k)
    raise NotConstructedAtDeskScale(f"resolvable 2-({v},{z},1) is catalogued but not built here")


def _report(code: pc.PirCode, label: str, oracle: bool = True) -> list[str]:
    verdict = pc.verify_recovery_plan(code)
    lrc = pc.lrc_params(code)
    lines = [
        f"structure: {label}",
        f"code: [{code.m},{code.s}]",
        f"k: {code.k}",
        f"overhead: {bounds.format_overhead(code.m, code.s)}",
        f"locality: {lrc.locality}",
        f"availability: {lrc.availability}",
        f"plan: {verdict}",
    ]
    if oracle:
        lines.append(_oracle_line(code, code.k)[1])
    return lines


def _oracle_line(code: pc.PirCode, k: int) -> tuple[bool, str]:
    if code.m > pc.ORACLE_MAX_COLUMNS:
        return True, f"oracle: skipped (m={code.m} > {pc.ORACLE_MAX_COLUMNS})"
    worst = min(range(code.s), key=lambda i: (pc.max_disjoint_recovery(code, i, limit=k), i))
    got = pc.max_disjoint_recovery(code, worst, limit=k)
    if got < k:
        return False, f"oracle: bit {worst} has at most {got} disjoint recovery sets < {k}"
    return True, f"oracle: every bit has >= {k} disjoint recovery sets"


def cmd_construct(args) -> int:
    structure, code, label = _construct(args)
    stem = args.stem or args.family
    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / f"{stem}.structure.txt").write_text(structure)
    (args.out / f"{stem}.matrix.txt").write_text(pc.export_matrix(code))
    lines = _report(code, label)
    (args.out / f"{stem}.report.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return 0 if pc.verify_recovery_plan(code) else 1


def cmd_verify(args) -> int:
    try:
        text = args.matrix.read_text()
    except OSError as exc:
        raise ParameterError(f"cannot read {args.matrix}: {exc}") from exc
    code = pc.import_matrix(text)
    k = args.k if args.k is not None else code.k
    claimed = pc.PirCode(code.s, code.parity, k, code.plan, code.label)
    verdict = pc.verify_recovery_plan(claimed)
    print(f"code: [{code.m},{code.s}]")
    print(f"claimed k: {k}")
    print(f"plan: {verdict}")
    ok = bool(verdict)
    if args.oracle:
        good, line = _oracle_line(code, k)
        print(line)
        ok = ok and good
    print("certified" if ok else "NOT certified")
    return 0 if ok else 1


def cmd_bounds(args) -> int:
    table = bounds.seed_bounds(range(args.s_min, args.s_max + 1), range(args.k_min, args.k_max + 1), args.effort)
    bounds.propagate(table)
    report = bounds.compare_paper(table)
    report_text = "\n".join(report.lines()) + "\n"
    if args.format == "csv":
        doc = bounds.render(table, "csv")
        if args.report is None:
            sys.stderr.write(report_text)
    else:
        doc = bounds.render(table, "text", report)
    if args.report is not None:
        args.report.write_text(report_text)
    if args.out is not None:
        args.out.write_text(doc)
    else:
        sys.stdout.write(doc)
    if args.figure is not None:
        from .plotting import overhead_heatmap

        overhead_heatmap(table, args.figure, report)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {"construct": cmd_construct, "verify": cmd_verify, "bounds": cmd_bounds}[args.command]
    try:
        return handler(args)
    except SearchTimeout as exc:
        print(f"error: SearchTimeout: {exc} (depth {exc.depth}, nodes {exc.nodes})", file=sys.stderr)
        return exc.exit_code
    except PirError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
