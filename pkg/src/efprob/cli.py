"""Command-line interface: ``efprob partitions|pmn|verify|sample``.

Exit codes: 0 success, 1 law violation, 2 usage or parse error,
3 certification budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from collections import Counter
from fractions import Fraction

from . import __version__
from ._rational import fmt_decimal, fmt_fraction
from .elementfree import ElementFree
from .laws import LAW_IDS, SweepBounds, run_sweep
from .montecarlo import DegenerateGofError, RngConfig, UrnSampler, chi_square
from .partition import IntPartition, enumerate_partitions, part_coeff
from .sampling import CertificationError, WeightStream, pmn, pmn_certified

EXIT_OK, EXIT_LAW, EXIT_USAGE, EXIT_CERT = 0, 1, 2, 3


class PhiSpecError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_RAT = re.compile(r"\s*(\d+(?:/\d+)?)\s*")
_INT = re.compile(r"\s*(\d+)\s*")


def parse_phi(text: str) -> ElementFree | WeightStream:
    """Parse ``[w ';'] r:m (',' r:m)*`` or ``geometric:q``.

    Weights are ``p/q`` or integers.  An explicit w must equal
    ``1 - sum r*m``; without it w is computed and must be >= 0.
    """
    m = re.fullmatch(r"\s*geometric\s*:(.*)", text)
    if m:
        tok = _RAT.fullmatch(m.group(1))
        if not tok:
            raise PhiSpecError("expected a ratio p/q", m.start(1))
        q = Fraction(tok.group(1))
        if not 0 < q < 1:
            raise PhiSpecError("geometric ratio must lie in (0, 1)", m.start(1))
        return WeightStream.geometric(q)

    pos = 0
    w = None
    if ";" in text:
        head, _, _ = text.partition(";")
        tok = _RAT.fullmatch(head)
        if not tok:
            raise PhiSpecError("expected continuous weight before ';'", 0)
        w = Fraction(tok.group(1))
        pos = len(head) + 1
    counts: dict[Fraction, int] = {}
    body = text[pos:]
    if body.strip():
        for piece in body.split(","):
            r_txt, colon, m_txt = piece.partition(":")
            if not colon:
                raise PhiSpecError("expected 'weight:mult'", pos)
            r_tok = _RAT.fullmatch(r_txt)
            if not r_tok:
                raise PhiSpecError("expected a weight p/q", pos)
            m_tok = _INT.fullmatch(m_txt)
            if not m_tok:
                raise PhiSpecError("expected a positive multiplicity", pos + len(r_txt) + 1)
            r, mult = Fraction(r_tok.group(1)), int(m_tok.group(1))
            if not 0 < r <= 1:
                raise PhiSpecError(f"weight {r_tok.group(1)} outside (0, 1]", pos)
            if mult < 1:
                raise PhiSpecError("multiplicity must be >= 1", pos + len(r_txt) + 1)
            counts[r] = counts.get(r, 0) + mult
            pos += len(piece) + 1
    elif w is None:
        raise PhiSpecError("empty element-free distribution", 0)
    total = sum((r * c for r, c in counts.items()), Fraction(0))
    if total > 1:
        raise PhiSpecError(f"atom weights sum to {fmt_fraction(total)} > 1", 0)
    if w is not None and w != 1 - total:
        raise PhiSpecError(f"w={fmt_fraction(w)} but the weights leave {fmt_fraction(1 - total)}", 0)
    return ElementFree(counts)


# ----------------------------------------------------------------- output

def _emit(args, command: str, meta: dict, header: list[str], rows: list[dict],
          extra: dict | None = None) -> None:
    if args.format == "json":
        doc = {"meta": {"tool": "efprob", "version": __version__, "command": command, **meta},
               "rows": rows}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_csv_cell(row[h]) for h in header])
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v):
    if isinstance(v, list):
        return "[" + ",".join(map(str, v)) + "]"
    if isinstance(v, (dict, tuple)):
        return json.dumps(v, sort_keys=True)
    return v


# --------------------------------------------------------------- commands

def cmd_partitions(args) -> int:
    rows = [{"partition": s.blocks(), "coeff": part_coeff(s), "tt": s.total}
            for s in enumerate_partitions(args.K)]
    _emit(args, "partitions", {"K": args.K}, ["partition", "coeff", "tt"], rows)
    return EXIT_OK


def cmd_pmn(args) -> int:
    phi = parse_phi(args.phi)
    if isinstance(phi, WeightStream) or args.mode == "certified":
        ws = phi if isinstance(phi, WeightStream) else WeightStream.from_elementfree(phi)
        cert = pmn_certified(ws, args.K, args.epsilon, max_prefix=args.max_prefix)
        rows = []
        for s in enumerate_partitions(args.K):
            lo, hi = cert.interval(s)
            rows.append({"partition": s.blocks(), "lower": fmt_fraction(lo),
                         "upper": fmt_fraction(hi), "lower_decimal": fmt_decimal(lo),
                         "upper_decimal": fmt_decimal(hi)})
        meta = {"phi": args.phi, "K": args.K, "mode": "certified", "epsilon": args.epsilon,
                "tail": fmt_fraction(cert.tail), "tail_decimal": fmt_decimal(cert.tail),
                "prefix_len": cert.prefix_len}
        _emit(args, "pmn", meta, ["partition", "lower", "upper", "lower_decimal", "upper_decimal"], rows)
        return EXIT_OK
    law = pmn(phi, args.K)
    rows = [{"partition": s.blocks(), "mass": fmt_fraction(q), "decimal": fmt_decimal(q)}
            for s, q in law.items()]
    meta = {"phi": args.phi, "K": args.K, "mode": "exact", "w": fmt_fraction(phi.w)}
    _emit(args, "pmn", meta, ["partition", "mass", "decimal"], rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    bounds = SweepBounds.from_env(max_k=args.max_k, max_carrier=args.max_carrier,
                                  max_den=args.max_den, max_partition_k=args.max_partition_k)
    reports = run_sweep(args.laws or ["all"], bounds)
    rows = []
    for r in reports:
        rows.append({"law": r.law, "verdict": r.verdict, "cases": r.cases, "carrier": r.carrier,
                     "params": r.params, "note": r.note or "",
                     "counterexample": r.counterexample})
        print(f"{'PASS' if r.ok else 'FAIL'} {r.law}: {r.verdict} ({r.cases} cases)",
              file=sys.stderr)
    meta = {"laws": args.laws or ["all"], "bounds": vars(bounds)}
    if args.format == "csv":
        for row in rows:
            row["counterexample"] = json.dumps(row["counterexample"]) if row["counterexample"] else ""
    _emit(args, "verify", meta,
          ["law", "verdict", "cases", "carrier", "params", "note", "counterexample"], rows)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_LAW


def cmd_sample(args) -> int:
    phi = parse_phi(args.phi)
    if isinstance(phi, WeightStream):
        raise PhiSpecError("sampling needs a finite element-free distribution", 0)
    rng = RngConfig(args.seed)
    samples = UrnSampler(phi).sample(args.K, args.n, rng)
    gof = None
    warning = None
    if args.K > args.max_exact_k:
        warning = f"K={args.K} beyond exact range {args.max_exact_k}; goodness of fit skipped"
    else:
        law = pmn(phi, args.K)
        try:
            if len(law) < 2:
                raise DegenerateGofError("single-outcome law")
            if args.n < 1000:
                warning = f"n={args.n} < 1000; goodness of fit skipped"
            else:
                gof = chi_square(Counter(samples), law, args.n, args.threshold)
        except DegenerateGofError as exc:
            warning = f"goodness of fit skipped: {exc}"
    if warning:
        print(f"warning: {warning}", file=sys.stderr)
    rows = [{"partition": s.blocks()} for s in samples]
    meta = {"phi": args.phi, "K": args.K, "n": args.n, "seed": args.seed,
            "rng": rng.algorithm}
    extra = {"gof": gof.to_json() if gof else None}
    _emit(args, "sample", meta, ["partition"], rows, extra)
    if gof and args.format == "csv":
        print(json.dumps(gof.to_json()), file=sys.stderr)
    return EXIT_OK


# ----------------------------------------------------------------- parser

def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _law_id(text: str) -> str:
    if text != "all" and text not in LAW_IDS:
        raise argparse.ArgumentTypeError(
            f"unknown law {text!r}; choose from all, {', '.join(LAW_IDS)}")
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = argparse.ArgumentParser(prog="efprob", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"efprob {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("partitions", parents=[common], help="list P(K) with coefficients")
    sp.add_argument("K", type=_nonneg)
    sp.set_defaults(func=cmd_partitions)

    sp = sub.add_parser("pmn", parents=[common], help="partition multinomial table")
    sp.add_argument("phi", help="'[w;] r:m, r:m, ...' with r = p/q, or 'geometric:q'")
    sp.add_argument("--K", type=_nonneg, required=True)
    sp.add_argument("--mode", choices=("exact", "certified"), default="exact")
    sp.add_argument("--epsilon", default="1/1000000",
                    help="error budget for certified mode (p/q or decimal)")
    sp.add_argument("--max-prefix", type=_positive, default=10_000)
    sp.set_defaults(func=cmd_pmn)

    sp = sub.add_parser("verify", parents=[common], help="run exact law sweeps")
    sp.add_argument("laws", nargs="*", type=_law_id, metavar="LAW",
                    help=f"all or any of: {', '.join(LAW_IDS)}")
    sp.add_argument("--max-k", type=_nonneg)
    sp.add_argument("--max-carrier", type=_positive)
    sp.add_argument("--max-den", type=_positive)
    sp.add_argument("--max-partition-k", type=_nonneg)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sample", parents=[common], help="urn samples plus goodness of fit")
    sp.add_argument("phi")
    sp.add_argument("--K", type=_nonneg, required=True)
    sp.add_argument("--n", type=_positive, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threshold", type=float, default=0.01)
    sp.add_argument("--max-exact-k", type=_nonneg, default=20)
    sp.set_defaults(func=cmd_sample)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "pmn":
            from ._rational import as_fraction
            try:
                args.epsilon = fmt_fraction(as_fraction(args.epsilon))
            except (ValueError, TypeError) as exc:
                raise PhiSpecError(f"bad epsilon: {exc}", 0) from None
        return args.func(args)
    except PhiSpecError as exc:
        print(f"efprob: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CertificationError as exc:
        print(f"efprob: certification failed: {exc}", file=sys.stderr)
        return EXIT_CERT
    except ValueError as exc:
        print(f"efprob: {exc}", file=sys.stderr)
        return EXIT_USAGE


# JSON Schemas for the documents emitted with --format json.
_META = {"type": "object", "required": ["tool", "version", "command"]}
_PARTITION = {"type": "array", "items": {"type": "integer", "minimum": 1}}
_FRAC = {"type": "string", "pattern": r"^\d+(/\d+)?$"}


def _doc(row: dict, required: list[str], **extra) -> dict:
    return {"type": "object", "required": ["meta", "rows", *extra],
            "properties": {"meta": _META,
                           "rows": {"type": "array",
                                    "items": {"type": "object", "required": required,
                                              "properties": row}},
                           **extra}}


SCHEMAS = {
    "partitions": _doc({"partition": _PARTITION, "coeff": {"type": "integer", "minimum": 1},
                        "tt": {"type": "integer", "minimum": 0}}, ["partition", "coeff", "tt"]),
    "pmn": _doc({"partition": _PARTITION, "mass": _FRAC, "lower": _FRAC,
                 "decimal": {"type": "string"}}, ["partition"]),
    "verify": _doc({"law": {"enum": [*LAW_IDS, "retract-dist-atomic"]},
                    "verdict": {"enum": ["holds", "counterexample", "expected-failure-confirmed",
                                         "expected-failure-missing"]},
                    "cases": {"type": "integer", "minimum": 1}}, ["law", "verdict", "cases"]),
    "sample": _doc({"partition": _PARTITION}, ["partition"],
                   gof={"type": ["object", "null"]}),
}


if __name__ == "__main__":
    sys.exit(main())
