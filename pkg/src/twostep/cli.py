"""Command-line surface: evaluation, search, sampling, certification, repro."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import landscape, search
from .combinat import dim_forms
from .fixtures import FIXTURE_NAMES, load_fixture
from .ideals import (
    GradedIdeal,
    Nesting,
    SamplerExhausted,
    hilbert_function,
    sample_nested,
    sample_profile,
)
from .profiles import NestedProfile, TwoStepProfile, classify
from .tangent import nested_tangent_report, tangent_report

SCHEMA = 1

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_EXHAUSTED = 3


def _default_threads() -> int:
    env = os.environ.get("TWOSTEP_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _rat(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}" if f.denominator != 1 else str(f.numerator)


def _emit(args, payload: dict, table_lines: list[str]) -> None:
    if args.format == "json":
        body = {k: v for k, v in payload.items() if not k.startswith("_")}
        text = json.dumps({"schema": SCHEMA, **body}, sort_keys=True, separators=(",", ":"))
    elif args.format == "csv":
        text = payload.get("_csv", "")
    else:
        text = "\n".join(table_lines)
    out = text + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue().rstrip("\r\n")


def parse_profile_spec(text: str) -> TwoStepProfile:
    """Parse 'n=6,k=2,(1,6,20,7)' (quotient Hilbert function)."""
    body = text.strip()
    n = k = None
    vals = None
    for part in body.split(",("):
        if "(" not in part and ")" not in part:
            for item in part.split(","):
                key, _, val = item.partition("=")
                if key.strip() == "n":
                    n = int(val)
                elif key.strip() == "k":
                    k = int(val)
        else:
            vals = tuple(int(x) for x in part.strip("()").split(","))
    if n is None or vals is None:
        raise ValueError(f"cannot parse profile {text!r}")
    p = TwoStepProfile.from_quotient_values(n, vals)
    if k is not None and p.k != k:
        raise ValueError(f"profile order is {p.k}, not {k}")
    return p


def cmd_delta(args) -> int:
    value = landscape.delta(args.n, args.r, args.k, args.coords)
    _emit(args, {"delta": _rat(value)}, [_rat(value)])
    return EXIT_OK


def cmd_theta(args) -> int:
    value = landscape.theta(args.n, args.k, args.b, args.coords[0], args.coords[1])
    _emit(args, {"theta": _rat(value)}, [_rat(value)])
    return EXIT_OK


def cmd_area(args) -> int:
    pairs = landscape.potential_tnt_area(args.n, args.k, threads=args.threads)
    rows = [[h, h1, dim_forms(args.n, args.k + 1) - h1] for h, h1 in pairs]
    lines = [f"potential TNT area for n={args.n}, k={args.k}: {len(pairs)} pairs"]
    lines += ["h_k  h_k1  q_k1", "-" * 18]
    lines += [f"{h:>3}  {h1:>4}  {q:>4}" for h, h1, q in rows]
    payload = {
        "n": args.n,
        "k": args.k,
        "pairs": [[h, h1] for h, h1 in pairs],
        "_csv": _csv_text(["h_k", "h_k1"], [[h, h1] for h, h1 in pairs]),
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_search(args) -> int:
    try:
        result = search.find_certificates(
            args.n, args.r, args.k, args.strategy, shell_cap=args.radius, threads=args.threads
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    certs = result.certificates
    if args.minimal:
        certs = tuple(search.minimal_sequences(certs))
    lines = [
        f"search n={args.n} r={args.r} k={args.k} strategy={result.strategy} "
        f"region={result.region}"
        + (" (shell cap reached with certificates still appearing)" if result.cap_bound else "")
    ]
    lines += [f"{len(certs)} certificates (delta >= 0)"]
    for c in certs:
        lines.append(
            f"  d={','.join(map(str, c.colengths))}  point={c.point}  "
            f"delta={_rat(c.delta_value)}  dim>={c.dim_bound}"
        )
    payload = {
        "n": args.n,
        "r": args.r,
        "k": args.k,
        "strategy": result.strategy,
        "region": result.region,
        "cap_bound": result.cap_bound,
        "certificates": [c.to_json_dict() for c in certs],
        "_csv": _csv_text(search.CSV_COLUMNS, [c.csv_row() for c in certs]),
    }
    _emit(args, payload, lines)
    return EXIT_OK


def _report_lines(name: str, obj, rep) -> list[str]:
    if isinstance(obj, Nesting):
        hv = obj.hilbert_vector()
        head = f"{name}: nesting, Hilbert vector {hv}, colengths {obj.colengths()}"
    else:
        hf = hilbert_function(obj)
        head = f"{name}: quotient HF {tuple(hf.values)}, colength {hf.colength()}"
    dims = {t: v for t, v in sorted(rep.dims.items()) if v}
    return [
        head,
        f"  tangent dims by degree: {dims}",
        f"  T^<0 = {rep.t_neg_total}, T^0 = {rep.t0}, T^1 = {rep.t1}",
        f"  translation rank = {rep.derivation_rank}",
        f"  TNT = {rep.tnt}",
    ]


def cmd_certify(args) -> int:
    if args.fixture:
        obj = load_fixture(args.fixture)
        name = args.fixture
    else:
        p = parse_profile_spec(args.profile)
        obj = sample_profile(p, args.seed)
        name = args.profile
    if isinstance(obj, Nesting):
        rep = nested_tangent_report(obj)
    else:
        rep = tangent_report(obj)
    payload = {"name": name, "report": rep.to_json_dict()}
    if not isinstance(obj, Nesting):
        p = obj.profile()
        cert = search.certificate_at(p.n, 1, p.k, (p.h_k, p.h_k1))
        payload["certificate"] = None if cert is None else cert.to_json_dict()
        payload["regime"] = str(classify(p))
    _emit(args, payload, _report_lines(name, obj, rep))
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.nested:
        np_ = NestedProfile.from_json_dict(json.loads(args.nested))
        nest = sample_nested(np_, args.seed)
        lines = [f"sampled nesting, colengths {nest.colengths()}"]
        for I in nest.ideals:
            lines.append(f"  order {I.k}: quotient HF {tuple(hilbert_function(I).values)}")
        payload = {
            "profile": np_.to_json_dict(),
            "colengths": list(nest.colengths()),
            "hilbert_vector": [list(v) for v in nest.hilbert_vector()],
        }
        _emit(args, payload, lines)
        return EXIT_OK
    p = parse_profile_spec(args.profile)
    I = sample_profile(p, args.seed)
    hf = hilbert_function(I)
    lines = [
        f"sampled ideal for n={p.n}, k={p.k}, (h_k, h_k1)=({p.h_k}, {p.h_k1})",
        f"  regime {classify(p)}, quotient HF {tuple(hf.values)}, colength {hf.colength()}",
    ]
    payload = {
        "profile": {"n": p.n, "k": p.k, "pairs": [[p.h_k, p.h_k1]]},
        "hf": list(hf.values),
        "colength": hf.colength(),
        "regime": str(classify(p)),
    }
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_tangent(args) -> int:
    return cmd_certify(args)


def _check(expected, got, label: str, failures: list[str]):
    if expected != got:
        failures.append(f"{label}: expected {expected}, got {got}")


def cmd_repro(args) -> int:
    target = args.target
    failures: list[str] = []
    lines: list[str] = []
    payload: dict = {"target": target}
    if target == "example43":
        p = TwoStepProfile(3, 6, 11, 31)
        from .profiles import NestedProfile as NP, expected_tangent_dims, smoothable_dim, stratum_dim_bound

        et = expected_tangent_dims(p)
        bound = stratum_dim_bound(NP((p,)))
        sm = smoothable_dim(3, p.colength)
        d = landscape.delta(3, 1, 6, (11, 31))
        lines += [
            f"dim homogeneous locus >= {et.t0_lower}; stratum {bound}; "
            f"smoothable {sm}; Delta = {_rat(d)}"
        ]
        _check(177, et.t0_lower, "homogeneous locus bound", failures)
        _check(232, bound, "stratum bound", failures)
        _check(234, sm, "smoothable dim", failures)
        _check(Fraction(1), d, "Delta", failures)
        payload.update({"t0_lower": et.t0_lower, "bound": bound, "smoothable": sm, "delta": _rat(d)})
    elif target == "fig9":
        expected = {
            (1, 4, 3): (4, 21, None, Fraction(-7), "1-step", True),
            (1, 4, 8, 5): (4, 51, 10, Fraction(-7), "no syz", True),
            (1, 4, 9, 6): (4, 69, 6, Fraction(-1), "no syz", True),
        }
        lines.append("|h|  h            T^-1  T^0  T^1  Delta  Type     TNT")
        rows = []
        for q, (tm1, t0, t1, dval, typ, tnt) in expected.items():
            p = TwoStepProfile.from_quotient_values(4, q)
            I = sample_profile(p, args.seed)
            rep = tangent_report(I)
            d = landscape.delta(4, 1, 2, (p.h_k, p.h_k1))
            got_t1 = rep.t1 if p.q_k1 else None
            _check((tm1, t0, t1, dval, typ, tnt),
                   (rep.dims[-1], rep.t0, got_t1, d, str(classify(p)), rep.tnt),
                   f"fig9 row {q}", failures)
            t1s = "-" if got_t1 is None else str(got_t1)
            lines.append(
                f"{p.colength:>3}  {str(q):<12} {rep.dims[-1]:>4}  {rep.t0:>3}  {t1s:>3}  "
                f"{_rat(d):>5}  {str(classify(p)):<8} {rep.tnt}"
            )
            rows.append({"hf": list(q), "tneg1": rep.dims[-1], "t0": rep.t0,
                         "t1": got_t1, "delta": _rat(d), "type": str(classify(p)), "tnt": rep.tnt})
        payload["rows"] = rows
    elif target == "fig4":
        pairs = [(14, 28), (11, 26), (9, 25), (8, 22)]
        np_ = NestedProfile(tuple(TwoStepProfile(2, 29 + i, a, b) for i, (a, b) in enumerate(pairs)))
        _check((454, 491, 527, 565), np_.colengths, "fig4a colengths", failures)
        nest = sample_nested(np_, args.seed)
        lines.append("level  k+i  (h, h')     |h|   T^1")
        rows = []
        total_t1 = 0
        for i, I in enumerate(nest.ideals):
            rep_t1 = I.h(I.k) * I.q(I.k + 1)
            from .tangent import fiber_dim_initial

            got = fiber_dim_initial(I)
            _check(rep_t1, got, f"fig4a level {i} T^1", failures)
            total_t1 += got
            lines.append(
                f"{i:>5}  {I.k:>3}  ({I.h(I.k):>2}, {I.h(I.k + 1):>2})   "
                f"{hilbert_function(I).colength():>4}  {got:>4}"
            )
            rows.append({"level": i, "k": I.k, "pair": [I.h(I.k), I.h(I.k + 1)], "t1": got})
        from .tangent import nested_hom_graded

        joint = nested_hom_graded(nest, 1)
        _check(276, joint, "fig4a nested T^1 total", failures)
        _check(total_t1, joint, "fig4a additivity", failures)
        lines.append(f"nested T^1 total = {joint} (additive: {total_t1})")
        payload["rows"] = rows
        payload["nested_t1"] = joint
    elif target == "fig7":
        configs = [
            ([(0, 6), (1, 10)], (14, 24), [0, 5], 5),
            ([(1, 6), (0, 9)], (13, 26), [4, 0], 4),
        ]
        rows = []
        for pairs, colen, t1s, total in configs:
            np_ = NestedProfile(tuple(TwoStepProfile(3, 2 + i, a, b) for i, (a, b) in enumerate(pairs)))
            _check(colen, np_.colengths, f"fig7 colengths {pairs}", failures)
            nest = sample_nested(np_, args.seed)
            from .tangent import fiber_dim_initial, nested_hom_graded

            got_t1 = [fiber_dim_initial(I) for I in nest.ideals]
            _check(t1s, got_t1, f"fig7 per-level T^1 {pairs}", failures)
            joint = nested_hom_graded(nest, 1)
            _check(total, joint, f"fig7 nested T^1 {pairs}", failures)
            lines.append(f"pairs {pairs}: colengths {np_.colengths}, per-level T^1 {got_t1}, nested {joint}")
            rows.append({"pairs": pairs, "colengths": list(np_.colengths), "t1": got_t1, "nested_t1": joint})
        payload["rows"] = rows
    elif target == "thm61":
        strata = [
            (4, (1, 4, 10, 12, 7)), (4, (1, 4, 10, 13, 6)), (4, (1, 4, 10, 14, 5)),
            (5, (1, 5, 13, 15)), (5, (1, 5, 14, 14)),
            (6, (1, 6, 14, 13)), (6, (1, 6, 15, 12)), (6, (1, 6, 16, 11)),
            (6, (1, 6, 17, 10)), (6, (1, 6, 18, 9)), (6, (1, 6, 19, 8)), (6, (1, 6, 20, 7)),
        ]
        lines.append("ambient n = 6 (paper table); computational n = embedding dimension")
        rows = []
        for n, q in strata:
            p = TwoStepProfile.from_quotient_values(n, q)
            I = sample_profile(p, args.seed)
            rep = tangent_report(I)
            colen = hilbert_function(I).colength()
            _check(34, colen, f"thm61 colength {q}", failures)
            _check(True, rep.tnt, f"thm61 TNT {q}", failures)
            lines.append(f"  emb dim {n}: {q}  colength {colen}  TNT {rep.tnt}")
            rows.append({"emb_dim": n, "ambient_n": 6, "hf": list(q), "tnt": rep.tnt})
        payload["rows"] = rows
    else:
        print(f"error: unknown repro target {target!r}", file=sys.stderr)
        return EXIT_USAGE
    ok = not failures
    lines.append("all expectations match" if ok else "MISMATCHES:")
    lines += [f"  {f}" for f in failures]
    payload["ok"] = ok
    payload["failures"] = failures
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="twostep",
        description="2-step ideals: dimension formulas, lattice certificates, "
        "graded tangent spaces and TNT certification",
    )
    ap.add_argument("--format", choices=("json", "csv", "table"), default="table")
    ap.add_argument("--output", help="write the report to a file instead of stdout")
    ap.add_argument("--threads", type=int, default=None)
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("delta", help="evaluate the excess-dimension form")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("coords", type=int, nargs="+")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("theta", help="evaluate the negative-tangent bound form")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-b", type=int, default=0)
    p.add_argument("coords", type=int, nargs=2)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("area", help="potential TNT area")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.set_defaults(func=cmd_area)

    p = sub.add_parser("search", help="certificate search over the nested domain")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--strategy", choices=("exhaustive", "hypercube"), default="exhaustive")
    p.add_argument("--radius", type=int, default=search.DEFAULT_SHELL_CAP)
    p.add_argument("--minimal", action="store_true", help="keep only minimal colength sequences")
    p.set_defaults(func=cmd_search)

    for name, fn in (("certify", cmd_certify), ("tangent", cmd_tangent)):
        p = sub.add_parser(name, help="tangent report and TNT verdict")
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--fixture", choices=FIXTURE_NAMES)
        g.add_argument("--profile", help='e.g. "n=6,k=2,(1,6,20,7)"')
        p.set_defaults(func=fn)

    p = sub.add_parser("sample", help="sample a generic ideal or nesting")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--profile", help='e.g. "n=4,k=2,(1,4,8,5)"')
    g.add_argument("--nested", help='JSON {"n":., "k":., "pairs": [[h,h\'],..]}')
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("repro", help="reproduce a table from the source material")
    p.add_argument("target", choices=("fig4", "fig7", "fig9", "thm61", "example43"))
    p.set_defaults(func=cmd_repro)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.threads is None:
        args.threads = _default_threads()
    try:
        return args.func(args)
    except SamplerExhausted as exc:
        print(f"sampler exhausted: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
