"""Command line interface: one subcommand per pipeline stage.

Exit codes: 0 when every requested golden check passes, 1 on a mismatch,
2 on usage errors (argparse's default).  Flags take precedence over the
config file, which holds flat key=value pairs; MLDE3_WORKERS sets the
default worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional

from . import golden, lie, pipeline, primes, report, sieve, smatrix, surface
from .characters import CharacterSpec, character_vector_frobenius


def _frac(text: str) -> Fraction:
    return Fraction(text)


def load_config(path: Optional[str]) -> Dict[str, str]:
    if not path:
        return {}
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


def _setting(args, cfg: Dict[str, str], name: str, default, cast=int):
    flag = getattr(args, name, None)
    if flag is not None:
        return flag
    if name in cfg:
        return cast(cfg[name])
    return default


def _emit_table(rows, header, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=1)
    if fmt == "md":
        return sieve.table_to_markdown(rows, header)
    return sieve.table_to_csv(rows, header)


def cmd_classify(args, cfg) -> int:
    order = _setting(args, cfg, "order", sieve.DEFAULT_SCAN_ORDER)
    workers = _setting(args, cfg, "workers",
                       int(os.environ.get("MLDE3_WORKERS", "1")))
    precision = _setting(args, cfg, "precision", smatrix.DEFAULT_PRECISION)
    classes = args.classes.split(",") if args.classes else ["den5", "den7", "imprimitive"]
    rep = pipeline.run_pipeline(classes, order, workers,
                                with_smatrix=not args.skip_smatrix,
                                precision=precision)
    fmt = "json" if args.json else ("md" if args.md else "csv")
    for cls, res in rep.class_results.items():
        print(f"# {cls}: {len(res.survivors)} surviving rows, "
              f"{len(res.eliminated)} eliminated, {len(res.family)} family-tagged")
        print(_emit_table(sieve.survivors_table(res),
                          ("m", "h1", "h2", "c", "c_tilde"), fmt))
    for mism in rep.mismatches:
        print(f"GOLDEN MISMATCH {mism}", file=sys.stderr)
    if not args.skip_smatrix:
        ok, why = pipeline.expected_partition_ok(rep)
        print("# final partition")
        print(json.dumps({k: v if k != "eliminated" else f"{len(v)} rows"
                          for k, v in rep.partition.items()}, indent=1, default=str))
        if not ok:
            print(f"PARTITION MISMATCH: {why}", file=sys.stderr)
    if args.outdir:
        files = report.write_report(args.outdir, rep.class_results,
                                    figures=not args.no_figures)
        with open(os.path.join(args.outdir, "pipeline.json"), "w") as fh:
            fh.write(rep.to_json())
        print(f"# wrote {len(files) + 1} files under {args.outdir}")
    if not rep.golden_ok:
        return 1
    if not args.skip_smatrix and not pipeline.expected_partition_ok(rep)[0]:
        return 1
    return 0


def cmd_expand(args, cfg) -> int:
    spec = CharacterSpec(args.h1, args.h2, args.a1, args.a2)
    cv = character_vector_frobenius(spec, args.order)
    if args.json:
        print(cv.to_json())
    else:
        for name, f in zip(("f0", "f1", "f2"), cv.coordinates()):
            coeffs = ", ".join(str(c) for c in f.coeffs)
            print(f"{name}: q^({f.leading_exponent}) * [{coeffs}]")
    return 0


def cmd_fiber(args, cfg) -> int:
    pts = surface.fiber_enumerate(Fraction(args.m), args.den)
    cert = surface.am_count(Fraction(args.m), args.den)
    print(surface.points_to_csv(pts), end="")
    print(f"# a_m({args.den}) = {cert.count}, certified bound {cert.bound}: "
          f"{'ok' if cert.within_bound else 'VIOLATED'}", file=sys.stderr)
    return 0 if cert.within_bound else 1


def cmd_sieve(args, cfg) -> int:
    order = _setting(args, cfg, "order", sieve.DEFAULT_SCAN_ORDER)
    verdict = sieve.scan_candidate(CharacterSpec(args.h1, args.h2), order)
    print(json.dumps({
        "h1": str(args.h1), "h2": str(args.h2), "m": str(verdict.m),
        "status": verdict.status, "coordinate": verdict.coordinate,
        "index": verdict.index, "witness": verdict.witness,
    }, indent=1))
    return 0


def cmd_smatrix(args, cfg) -> int:
    precision = _setting(args, cfg, "precision", smatrix.DEFAULT_PRECISION)
    terms = _setting(args, cfg, "terms", smatrix.DEFAULT_TERMS)
    spec = CharacterSpec(args.h1, args.h2, args.a1, args.a2)
    S = smatrix.extract_S(spec, precision, terms)
    print(S.to_json())
    if args.a1 == 1 and args.a2 == 1:
        rec = smatrix.symmetrize(S)
        print(json.dumps({"accepted": rec.accepted, "A1": rec.A1, "A2": rec.A2,
                          "raw": rec.raw, "reason": rec.reason}, indent=1))
    fusion = smatrix.verlinde_check(S)
    print(json.dumps({"verlinde_ok": fusion.verdict,
                      "max_defect": fusion.max_defect,
                      "tensor_rounded": [[[round(x) for x in row]
                                          for row in plane]
                                         for plane in fusion.tensor]}, indent=1))
    return 0


def cmd_glue(args, cfg) -> int:
    p = args.p if args.p is not None else 15 - args.k
    rep = smatrix.glueing_character(p)
    print(json.dumps({
        "p": rep.p, "k": rep.k,
        "identity_holds": rep.identity_holds,
        "dimension_identity_holds": rep.dimension_identity_holds,
        "constant_term": str(rep.constant_term),
        "weight1_dimension": rep.weight1_dimension,
        "partner_scalars": rep.V_scalars,
    }, indent=1))
    return 0 if rep.identity_holds and rep.dimension_identity_holds else 1


def cmd_lie(args, cfg) -> int:
    if args.action == "table":
        print(lie.dimension_table_markdown())
        return 0
    if args.action == "dims":
        t = lie.SimpleType(args.family, args.rank)
        d, r = lie.dim_rank(t)
        print(json.dumps({"type": str(t), "dim": d, "rank": r}))
        return 0
    if args.action == "theta":
        t = lie.SimpleType(args.family, args.rank)
        print(json.dumps({"type": str(t), "N": lie.theta_count(t)}))
        return 0
    if args.action == "weight2":
        t = lie.SimpleType(args.family, args.rank)
        print(json.dumps({"type": str(t), "level": args.level,
                          "dim2": lie.dim_weight2(t, args.level)}))
        return 0
    if args.action == "levi":
        decs = lie.levi_search(args.target, total_rank=args.total_rank,
                               max_rank=args.max_rank)
        for d in decs:
            print(f"{d}  (dim {d.total_dim}, rank {d.total_rank})")
        return 0
    raise AssertionError(args.action)


def cmd_primes(args, cfg) -> int:
    x_max = args.xmax
    if args.full:
        x_max = primes.WindowConfig().x_pi
    cfg_obj = primes.WindowConfig(modulus=args.modulus, ratio=Fraction(args.ratio),
                                  X_min=args.xmin, X_max=x_max)
    verdict = primes.verify_windows(cfg_obj)
    print(verdict.to_json())
    return 0 if verdict.passed else 1


def cmd_region(args, cfg) -> int:
    files = report.write_report(args.outdir, figures=not args.no_figures)
    print("\n".join(files))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mlde3",
        description="Classification pipeline for rank-3 monic MLDE character vectors")
    ap.add_argument("--config", help="flat key=value settings file")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="run the full pipeline and compare tables")
    c.add_argument("--order", type=int, default=None)
    c.add_argument("--classes", help="comma list: den5,den7,imprimitive")
    c.add_argument("--workers", type=int, default=None)
    c.add_argument("--precision", type=int, default=None)
    c.add_argument("--skip-smatrix", action="store_true")
    c.add_argument("--outdir")
    c.add_argument("--no-figures", action="store_true")
    c.add_argument("--json", action="store_true")
    c.add_argument("--md", action="store_true")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("expand", help="exact character-vector coefficients")
    e.add_argument("--h1", type=_frac, required=True)
    e.add_argument("--h2", type=_frac, required=True)
    e.add_argument("--a1", type=int, default=1)
    e.add_argument("--a2", type=int, default=1)
    e.add_argument("--order", type=int, default=8)
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_expand)

    f = sub.add_parser("fiber", help="enumerate rational points on one fiber")
    f.add_argument("--m", required=True)
    f.add_argument("--den", type=int, default=16)
    f.set_defaults(func=cmd_fiber)

    s = sub.add_parser("sieve", help="scan one candidate")
    s.add_argument("--h1", type=_frac, required=True)
    s.add_argument("--h2", type=_frac, required=True)
    s.add_argument("--order", type=int, default=None)
    s.set_defaults(func=cmd_sieve)

    m = sub.add_parser("smatrix", help="extract rho(S), recover scalars, Verlinde")
    m.add_argument("--h1", type=_frac, required=True)
    m.add_argument("--h2", type=_frac, required=True)
    m.add_argument("--a1", type=int, default=1)
    m.add_argument("--a2", type=int, default=1)
    m.add_argument("--precision", type=int, default=None)
    m.add_argument("--terms", type=int, default=None)
    m.set_defaults(func=cmd_smatrix)

    g = sub.add_parser("glue", help="exact glueing identity for one pairing")
    gx = g.add_mutually_exclusive_group(required=True)
    gx.add_argument("--p", type=int)
    gx.add_argument("--k", type=int)
    g.set_defaults(func=cmd_glue)

    l = sub.add_parser("lie", help="Lie algebra data and searches")
    l.add_argument("action", choices=["dims", "theta", "weight2", "levi", "table"])
    l.add_argument("--family", default="B")
    l.add_argument("--rank", type=int, default=2)
    l.add_argument("--level", type=int, default=1)
    l.add_argument("--target", type=int, default=248)
    l.add_argument("--total-rank", type=int, default=None)
    l.add_argument("--max-rank", type=int, default=None)
    l.set_defaults(func=cmd_lie)

    p = sub.add_parser("primes", help="verify prime windows in progressions")
    p.add_argument("action", choices=["verify"])
    p.add_argument("--modulus", type=int, default=30)
    p.add_argument("--ratio", default="28/27")
    p.add_argument("--xmin", type=int, default=6496)
    p.add_argument("--xmax", type=int, default=10 ** 6)
    p.add_argument("--full", action="store_true")
    p.set_defaults(func=cmd_primes)

    r = sub.add_parser("region", help="emit region sign-grid CSV and figures")
    r.add_argument("--outdir", required=True)
    r.add_argument("--no-figures", action="store_true")
    r.set_defaults(func=cmd_region)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    cfg = load_config(args.config)
    return args.func(args, cfg)


if __name__ == "__main__":
    sys.exit(main())
