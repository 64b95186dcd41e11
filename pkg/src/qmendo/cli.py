"""Command-line interface: frob, infer, maximal, quat, satotate, verify-lk."""

from __future__ import annotations

import argparse
import csv
import sys
from importlib.resources import files
from pathlib import Path

from .curve import CurveFileError, CurveModel, integral_model, load_curve
from .frobenius import InconsistentFrobeniusError, parse_half_traces
from .inference import NotSquareTypeError, TraceDataset, infer_endo_structure, verify_L_equals_K
from .modell import ResidualElement, ResidualReductionError, dickson_eliminate, reduce_halftrace_mod
from .pipeline import build_dataset, frob_csv, frobenius_rows, select_primes
from .quadfield import DegreeOnePrime, splits_in_ext
from .quaternion import (
    INF,
    check_structure,
    check_triple,
    discriminant,
    embeds,
    hilbert_symbol,
    is_hereditary,
    ramified_set,
)
from .report import endo_csv, render_endo_report, render_lk, render_maximality
from .satotate import (
    FAST_PATH_NOTE,
    FastPathError,
    fast_path_traces,
    histogram_csv,
    load_reference_density,
    summarize,
    traces_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2
BUILTIN_CURVES = ("c1", "c2")


class InputError(Exception):
    pass


def _curve(name: str) -> CurveModel:
    path = Path(name)
    if not path.exists() and name in BUILTIN_CURVES:
        path = files("qmendo") / "data" / f"{name}.curve"
    try:
        return integral_model(load_curve(path))
    except FileNotFoundError:
        raise InputError(f"curve file not found: {name}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _write(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


def cmd_frob(args) -> int:
    curve = _curve(args.curve)
    primes = select_primes(curve, args.pmin, args.pmax, args.embedding)
    rows, notes = frobenius_rows(curve, primes, args.deg1_only, args.workers)
    for note in notes:
        print(note, file=sys.stderr)
    _write(frob_csv(rows), args.out)
    return EXIT_OK


def cmd_infer(args) -> int:
    curve = _curve(args.curve)
    ds, notes = build_dataset(curve, args.pmax, args.pmin, args.embedding, args.bad, args.workers)
    for note in notes:
        print(note, file=sys.stderr)
    if not ds.entries:
        raise InputError("no good primes in range")
    rep = infer_endo_structure(ds, args.disc, args.min_split, args.min_inert)
    _write(render_endo_report(rep), args.out)
    if args.csv:
        Path(args.csv).write_text(endo_csv(rep), encoding="utf-8", newline="")
    return EXIT_OK


def _pick_candidate(cands, m):
    exact = [c for c in cands if c.field == m]
    if exact:
        return exact[0]
    rational = sorted((c for c in cands if c.is_rational), key=lambda c: -c.eps)
    return rational[0] if rational else None


def load_trace_rows(path: str):
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        for lineno, rec in enumerate(reader, start=2):
            try:
                q = DegreeOnePrime(int(rec["p"]), int(rec["r"]))
                cands = [parse_half_traces(t) for t in rec["candidates"].split(";") if t]
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"{path}, line {lineno}: {exc}") from None
            rows.append((q, cands))
    return rows


def cmd_maximal(args) -> int:
    rows = load_trace_rows(args.traces)
    elems, notes = [], []
    for q, cands in rows:
        if args.primes and q.p not in args.primes:
            continue
        if args.delta is not None and splits_in_ext(q, args.delta) != "split":
            continue
        ht = _pick_candidate(cands, args.field)
        if ht is None:
            notes.append(f"skipped {q}: no candidate in Q(sqrt {args.field}) or Q")
            continue
        try:
            elems.append(reduce_halftrace_mod(ht, q.p, args.ell, args.root,
                                              label=f"p={q.p} r={q.r}"))
        except ResidualReductionError as exc:
            raise InputError(str(exc)) from None
    for note in notes:
        print(note, file=sys.stderr)
    if not elems:
        raise InputError("no usable Frobenius elements")
    verdict = dickson_eliminate(elems, args.ell)
    _write(f"field Q(sqrt {args.field}), root {args.root}\n"
           + render_maximality(verdict, elems), args.out)
    return EXIT_OK


def _place(text: str):
    return INF if text.lower() in ("inf", "oo", "infinity") else int(text)


def cmd_quat(args) -> int:
    a = args.values
    op = args.op
    need = {"hilbert": 3, "disc": 2, "embed": 2, "triple": 4, "hereditary": 1, "structure": 3}
    if len(a) != need[op]:
        raise InputError(f"quat {op} takes {need[op]} arguments")
    try:
        if op == "hilbert":
            out = f"{hilbert_symbol(int(a[0]), int(a[1]), _place(a[2])):+d}"
        elif op == "disc":
            x, y = int(a[0]), int(a[1])
            places = sorted(ramified_set(x, y), key=lambda v: (v == INF, v))
            shown = ", ".join("inf" if v == INF else str(v) for v in places)
            out = f"ramified: {{{shown}}}\ndiscriminant: {discriminant(x, y)}"
        elif op == "embed":
            out = str(embeds(int(a[0]), int(a[1]))).lower()
        elif op == "triple":
            out = str(check_triple(*(int(x) for x in a))).lower()
        elif op == "hereditary":
            out = str(is_hereditary(int(a[0]))).lower()
        else:
            out = str(check_structure(int(a[0]), int(a[1]), int(a[2]))).lower()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    print(out)
    return EXIT_OK


def cmd_satotate(args) -> int:
    curve = _curve(args.curve)
    try:
        points, notes = fast_path_traces(curve, args.pmax, args.pmin, args.embedding,
                                         args.allow_mixed, args.workers)
    except FastPathError as exc:
        raise InputError(f"{exc}; rerun with --allow-mixed to skip such primes") from None
    for note in notes:
        print(note, file=sys.stderr)
    reference = load_reference_density(args.reference) if args.reference else None
    try:
        summary = summarize([pt.x for pt in points], args.bins, reference)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    Path(args.out).write_text(histogram_csv(summary), encoding="utf-8", newline="")
    if args.traces_out:
        Path(args.traces_out).write_text(traces_csv(points), encoding="utf-8", newline="")
    print(f"note: {FAST_PATH_NOTE}")
    print(f"sample size: {summary.size}")
    for k, mu in enumerate(summary.moments, start=1):
        print(f"mu_{k}: {mu:.6f}")
    return EXIT_OK


def cmd_verify_lk(args) -> int:
    curve = _curve(args.curve)
    ds, notes = build_dataset(curve, args.pmax, args.pmin, args.embedding, args.bad, args.workers)
    for note in notes:
        print(note, file=sys.stderr)
    if not ds.entries:
        raise InputError("no good primes in range")
    try:
        verdict = verify_L_equals_K(ds)
    except NotSquareTypeError as exc:
        raise InputError(f"method inapplicable: {exc}") from None
    _write(render_lk(verdict), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmendo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, pmax_required=True):
        p.add_argument("--curve", required=True, help="curve file, or c1 / c2 for the bundled ones")
        p.add_argument("--pmin", type=int, default=3)
        p.add_argument("--pmax", type=int, required=pmax_required)
        p.add_argument("--embedding", choices=["+", "-", "both"], default="both")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", help="write the main output here instead of stdout")

    p = sub.add_parser("frob", help="Frobenius data and half-trace candidates as CSV")
    common(p)
    p.add_argument("--deg1-only", action="store_true")
    p.set_defaults(func=cmd_frob)

    p = sub.add_parser("infer", help="field of definition and intermediate algebras")
    common(p)
    p.add_argument("--disc", type=int, required=True, help="assumed quaternion discriminant")
    p.add_argument("--bad", type=_int_list, help="override the ramification set S")
    p.add_argument("--csv", help="also write the per-extension CSV here")
    p.add_argument("--min-split", type=int, default=3)
    p.add_argument("--min-inert", type=int, default=3)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("maximal", help="mod-ell image maximality from a trace CSV")
    p.add_argument("--traces", required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--field", type=int, required=True, help="m of the trace field Q(sqrt m)")
    p.add_argument("--root", choices=["+", "-"], default="+")
    p.add_argument("--delta", type=int, help="keep primes split in K(sqrt delta)")
    p.add_argument("--primes", type=_int_list, help="keep only these rational primes")
    p.add_argument("--out")
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("quat", help="quaternion algebra checks")
    p.add_argument("op", choices=["hilbert", "disc", "embed", "triple", "hereditary", "structure"])
    p.add_argument("values", nargs="+")
    p.set_defaults(func=cmd_quat)

    p = sub.add_parser("satotate", help="normalized trace histogram via the N1 fast path")
    common(p)
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--allow-mixed", action="store_true")
    p.add_argument("--reference", help="density file (x, density) to overlay")
    p.add_argument("--traces-out", help="also write per-prime traces here")
    p.set_defaults(func=cmd_satotate)

    p = sub.add_parser("verify-lk", help="check that all endomorphisms are defined over K")
    common(p)
    p.add_argument("--bad", type=_int_list, help="override the ramification set S")
    p.set_defaults(func=cmd_verify_lk)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "satotate":
        if not args.out:
            parser.error("satotate requires --out")
        if args.bins < 1:
            parser.error("--bins must be >= 1")
    if getattr(args, "pmin", 3) < 3:
        parser.error("--pmin must be >= 3")
    try:
        return args.func(args)
    except (InputError, CurveFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InconsistentFrobeniusError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
