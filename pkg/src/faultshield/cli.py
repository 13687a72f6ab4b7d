"""faultshield command line: params | reduce | ntt | campaign | report."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .arith import PARAM_SETS, ParamError, make_params, named_params
from .campaign import DEFAULT_SEED, ENGINES, CampaignConfig, run_campaign
from .faults import BOTH_SPLITS
from .mbrfd import MODES, mbrfd
from .ntt import Poly, gen_twiddles, ntt_forward, ntt_reference
from .overhead import load_tables, overhead_rows, sec_rows
from .recomp import RENO_MODES, RESO_MODES, Scheme
from .tables import overhead_to_csv, overhead_to_markdown, stats_to_csv, stats_to_markdown

SEED_ENV = "FAULTSHIELD_SEED"


class CliError(Exception):
    pass


def _add_param_flags(p, n_flag=True):
    p.add_argument("--set", dest="pset", choices=sorted(PARAM_SETS), help="named parameter set")
    p.add_argument("--l", type=int, help="operand bit length")
    p.add_argument("--w", type=int, help="word size in bits")
    p.add_argument("--q", type=int, help="modulus")
    if n_flag:
        p.add_argument("--n", type=int, help="polynomial degree (power of two)")


def _params(args, default_set=None):
    explicit = {k: getattr(args, k, None) for k in ("l", "w", "q", "n")}
    given = {k: v for k, v in explicit.items() if v is not None}
    if args.pset and given:
        raise CliError("--set and explicit --l/--w/--q/--n are mutually exclusive")
    if args.pset or not given:
        name = args.pset or default_set
        if name is None:
            raise CliError("give --set NAME or explicit --l --w --q")
        return named_params(name)
    missing = [k for k in ("l", "w", "q") if k not in given]
    if missing:
        raise CliError(f"missing explicit parameter(s): {', '.join('--' + m for m in missing)}")
    return make_params(given["l"], given["w"], given["q"], given.get("n", 0))


def _add_mode_flags(p):
    p.add_argument("--scheme", default="RESWO", type=str.upper, choices=[s.value for s in Scheme])
    p.add_argument("--mode", default="corrected", choices=MODES)
    p.add_argument("--reno-mode", default="consistent", choices=RENO_MODES)
    p.add_argument("--reso-mode", default="consistent", choices=RESO_MODES)


def cmd_params(args, out):
    p = _params(args)
    out.write(f"l={p.l} w={p.w} q={p.q} n={p.n} mu={p.mu} k={p.k} words={p.words}\n")


def cmd_reduce(args, out):
    p = _params(args, default_set="kyber")
    for name, val in (("alpha", args.alpha), ("beta", args.beta)):
        if not 0 <= val < (1 << p.l):
            raise CliError(f"operand {name}={val} outside [0, 2^{p.l})")
    rho, trace = mbrfd(args.alpha, args.beta, p, args.scheme, args.mode,
                       reno_mode=args.reno_mode, reso_mode=args.reso_mode)
    out.write(f"{rho}\n")
    if args.trace:
        out.write("i\tj\tc\tr\tr_f\tflag\n")
        for rec in trace.records:
            out.write(f"{rec.i}\t{rec.j}\t{rec.c}\t{rec.r}\t{rec.r_f}\t{int(rec.flag)}\n")
        out.write(f"rho={trace.rho} rho_f={trace.rho_f} fault={int(trace.aggregate_flag)}\n")


def read_poly(path: str) -> list[int]:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    stripped = text.strip()
    if stripped.startswith("["):
        values = json.loads(stripped)
    else:
        values = [line.strip() for line in stripped.splitlines() if line.strip()]
    try:
        return [int(v) for v in values]
    except (TypeError, ValueError) as exc:
        raise CliError(f"bad polynomial file {path}: {exc}") from None


def write_poly(coeffs: list[int], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(coeffs) + "\n"
    return "".join(f"{c}\n" for c in coeffs)


def cmd_ntt(args, out):
    p = _params(args)
    n = p.n
    if not n:
        raise CliError("ntt needs a degree: --n or a named set")
    try:
        table = gen_twiddles(n, p.q)
    except ValueError as exc:
        raise CliError(f"{exc} (e.g. --l {p.l} --w {p.w} --q {p.q} --n <supported n>)") from None
    poly = Poly(read_poly(args.input))
    if args.reference:
        result, faults = ntt_reference(poly, table, p.q), 0
    else:
        res = ntt_forward(poly, table, p, args.scheme, mode=args.mode,
                          reno_mode=args.reno_mode, reso_mode=args.reso_mode)
        result, faults = res.poly, res.fault_count
    text = write_poly(result.coeffs, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    sys.stderr.write(f"fault_count={faults}\n")


def _campaign_config(args) -> CampaignConfig:
    data = {}
    if args.config:
        data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        data.pop("workers", None)
    flags = {"scheme": args.scheme, "l": args.l, "w": args.w, "q": args.q,
             "etas": args.eta, "sites": args.site, "kinds": args.kind,
             "samples": args.samples, "seed": args.seed, "mode": args.mode,
             "reno_mode": args.reno_mode, "reso_mode": args.reso_mode,
             "both_split": args.both_split}
    data.update({k: v for k, v in flags.items() if v is not None})
    if args.strict:
        data["strict"] = True
    if args.symmetric:
        data["symmetric"] = True
    if "seed" not in data:
        env = os.environ.get(SEED_ENV)
        data["seed"] = int(env) if env else DEFAULT_SEED
    return CampaignConfig.from_dict(data)


def cmd_campaign(args, out):
    config = _campaign_config(args)
    if args.dump_config:
        out.write(config.to_json())
        return
    stats = run_campaign(config, workers=args.workers, engine=args.engine)
    csv_text = stats_to_csv(stats)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        out.write(csv_text)
    if args.markdown:
        md = stats_to_markdown(stats)
        if args.markdown == "-":
            out.write(md)
        else:
            Path(args.markdown).write_text(md, encoding="utf-8")
    bad = sum(st.oracle_mismatches for st in stats)
    if bad and not config.strict and not config.symmetric and config.mode == "corrected":
        sys.stderr.write(f"warning: {bad} trials disagree with the congruence miss oracle\n")


def cmd_report(args, out):
    tables = load_tables(args.tables)
    rows = overhead_rows(tables)
    if args.format == "csv":
        out.write(overhead_to_csv(rows))
    else:
        out.write(overhead_to_markdown(rows, sec_rows(tables)))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="faultshield",
                                     description="Barrett-reduction fault detection emulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print derived Barrett constants")
    _add_param_flags(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("reduce", help="multiply two operands through MBRFD")
    p.add_argument("alpha", type=int)
    p.add_argument("beta", type=int)
    _add_param_flags(p, n_flag=False)
    _add_mode_flags(p)
    p.add_argument("--trace", action="store_true", help="print the per-iteration trace")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("ntt", help="forward NTT of a polynomial file")
    p.add_argument("input", help="coefficients: one per line or a JSON array ('-' = stdin)")
    _add_param_flags(p)
    _add_mode_flags(p)
    p.add_argument("--reference", action="store_true", help="use exact products, no MBRFD")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_ntt)

    p = sub.add_parser("campaign", help="Monte-Carlo fault-injection campaign")
    p.add_argument("--config", help="campaign grid as a JSON document")
    p.add_argument("--scheme", nargs="+", type=str.upper, choices=[s.value for s in Scheme])
    p.add_argument("--l", type=int)
    p.add_argument("--w", type=int, nargs="+")
    p.add_argument("--q", type=int)
    p.add_argument("--eta", type=int, nargs="+")
    p.add_argument("--site", nargs="+", choices=("alpha", "beta", "both"))
    p.add_argument("--kind", nargs="+", choices=("random", "burst"))
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, help=f"master seed (default ${SEED_ENV} or {DEFAULT_SEED})")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--reno-mode", choices=RENO_MODES)
    p.add_argument("--reso-mode", choices=RESO_MODES)
    p.add_argument("--both-split", choices=BOTH_SPLITS)
    p.add_argument("--strict", action="store_true", help="count per-iteration flags")
    p.add_argument("--symmetric", action="store_true", help="fault both paths alike")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--engine", default="auto", choices=ENGINES)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--markdown", help="markdown table path ('-' = stdout)")
    p.add_argument("--dump-config", action="store_true", help="print the effective config")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("report", help="overhead and slice-effective-cost tables")
    p.add_argument("--tables", help="resource table JSON (default: bundled data)")
    p.add_argument("--format", default="markdown", choices=("markdown", "csv"))
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        args.func(args, out)
    except (CliError, ParamError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
