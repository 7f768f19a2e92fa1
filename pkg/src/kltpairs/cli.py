"""Command-line front end.

Simple roots are named ``a1..an``, numbered consecutively across the
components of a product type (``B2xA1`` has a1, a2 in B2 and a3 in A1).
Rational inputs are integers or ``p/q`` strings; floats are rejected.

Exit status: 0 on success, 1 on a failed verification or a non-Q-Cartier
boundary, 2 on malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .errors import KltError, NotQCartier
from .flagklt import (
    FlagBoundary,
    anticanonical_bs,
    beta_sequence,
    is_klt_flag,
)
from .horoklt import (
    anticanonical_horospherical,
    is_klt_horospherical,
    pair_from_json,
    toroidal_resolution,
)
from .oracle import SWEEP_TYPES, run_sweep
from .rational import format_q, parse_q
from .rootcore import (
    FUNDAMENTAL,
    build_root_system,
    format_word,
    parabolic,
    parse_index_set,
    parse_word,
)
from .toricres import fan_from_json, resolution_to_json, resolve_fan, toric_discrepancies


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _vec(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _root_name(root) -> str:
    terms = []
    for i, c in enumerate(root):
        if c:
            terms.append(f"{'' if c == 1 else c}a{i + 1}")
    return "+".join(terms)


def _setup(args):
    datum = build_root_system(args.root_system)
    parab = parabolic(datum, parse_index_set(args.I or "", datum))
    return datum, parab


def _parse_d(datum, parab, items: Sequence[str]) -> FlagBoundary:
    coeffs = {a: Fraction(0) for a in parab.complement}
    for item in items or []:
        for part in item.split(","):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"expected name=value, got {part!r}")
            name, value = part.split("=", 1)
            a = datum.parse_simple(name)
            if a in parab.I:
                raise UsageError(f"{name} lies in I; D has no component there")
            coeffs[a] = parse_q(value)
    return FlagBoundary(coeffs)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_roots(args, out) -> int:
    datum = build_root_system(args.root_system)
    if args.json:
        out.write(_dump({
            "root_system": datum.label,
            "cartan": [list(r) for r in datum.cartan],
            "positive_roots": [
                {"index": k, "root": list(r), "coroot": list(c), "height": sum(r)}
                for k, (r, c) in enumerate(zip(datum.positive_roots, datum.positive_coroots))
            ],
            "fundamental_weights": [[format_q(x) for x in w] for w in datum.fundamental_weights],
        }) + "\n")
        return 0
    out.write(f"root system {datum.label}: rank {datum.n}, {len(datum.positive_roots)} positive roots\n")
    out.write(f"{'#':>3}  {'root':<20} {'coroot':<20} height\n")
    for k, (r, c) in enumerate(zip(datum.positive_roots, datum.positive_coroots)):
        out.write(f"{k:>3}  {_vec(r):<20} {_vec(c):<20} {sum(r)}\n")
    for i, w in enumerate(datum.fundamental_weights):
        out.write(f"varpi_{i + 1} = {_vec(format_q(x) for x in w)}\n")
    return 0


def cmd_parabolic(args, out) -> int:
    datum, parab = _setup(args)
    two_rho = datum.to_basis(parab.two_rho_superP, FUNDAMENTAL)
    data = {
        "root_system": datum.label,
        "I": [datum.simple_name(i) for i in sorted(parab.I)],
        "levi_positive_roots": [list(datum.positive_roots[k]) for k in parab.levi_positive_roots],
        "two_rho_P_fundamental": [format_q(x) for x in two_rho.coords],
        "w0P_word": format_word(parab.w0P_word),
        "w0_levi_word": format_word(parab.w0_levi_word),
        "dimension": parab.dimension,
    }
    if args.json:
        out.write(_dump(data) + "\n")
        return 0
    out.write(f"{datum.label}, I = {{{', '.join(data['I'])}}}\n")
    out.write("R+_I: " + (", ".join(_root_name(datum.positive_roots[k]) for k in parab.levi_positive_roots) or "none") + "\n")
    out.write(f"2 rho^P (fundamental basis): {_vec(data['two_rho_P_fundamental'])}\n")
    out.write(f"coset word: {data['w0P_word']}  (length {parab.dimension})\n")
    out.write(f"Levi longest word: {data['w0_levi_word']}\n")
    return 0


def cmd_bs(args, out) -> int:
    datum, parab = _setup(args)
    word = parse_word(args.word, datum) if args.word else None
    betas = beta_sequence(parab, word)
    anti = anticanonical_bs(parab, word)
    used = word if word is not None else parab.w0P_word
    if args.json:
        out.write(_dump({
            "word": format_word(used),
            "betas": [list(datum.positive_roots[b]) for b in betas],
            "anticanonical": [format_q(x) for x in anti],
        }) + "\n")
        return 0
    out.write(f"word {format_word(used)}\n")
    out.write(f"{'i':>3}  {'beta_i':<20} anticanonical\n")
    for i, (b, a) in enumerate(zip(betas, anti)):
        out.write(f"{i + 1:>3}  {_root_name(datum.positive_roots[b]):<20} {format_q(a)}\n")
    return 0


def cmd_klt_flag(args, out) -> int:
    datum, parab = _setup(args)
    d = _parse_d(datum, parab, args.d)
    word = parse_word(args.word, datum) if args.word else None
    v = is_klt_flag(parab, d, word)
    ledger = v.ledger.to_ledger(parab)
    witness = None if v.witness is None else list(datum.positive_roots[v.witness])
    if args.json:
        out.write(_dump({
            "verdict": "klt" if v.klt else "not-klt",
            "min_pairing": None if v.min_pairing is None else format_q(v.min_pairing),
            "witness": witness,
            "witness_pairing": None if v.witness_pairing is None else format_q(v.witness_pairing),
            "ledger": ledger.to_json(),
        }) + "\n")
        return 0
    out.write(f"word {format_word(v.ledger.word)}\n")
    out.write(f"{'divisor':<8} {'beta':<16} {'discrepancy':>11}  exceptional*\n")
    for e in ledger:
        out.write(f"{e.divisor:<8} {_root_name(e.beta):<16} {format_q(e.discrepancy):>11}  {'yes' if e.exceptional else 'no'}\n")
    out.write("* contraction flag is derived bookkeeping, not part of the klt criterion\n")
    out.write(f"verdict: {'klt' if v.klt else 'not-klt'}\n")
    if witness is not None:
        out.write(f"witness: beta = {_root_name(witness)} with pairing {format_q(v.witness_pairing)}\n")
    return 0


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def cmd_resolve_fan(args, out) -> int:
    fan, d = fan_from_json(_load_json(args.fan))
    resolved, prov = resolve_fan(fan)
    data = {"resolved": resolution_to_json(resolved, prov), "validated_faces": fan.validated}
    if d is not None:
        tor = toric_discrepancies(fan, resolved, prov, d)
        data["ledger"] = tor.ledger.to_json()
        data["strictly_effective"] = tor.strictly_effective
    if args.json:
        out.write(_dump(data) + "\n")
        return 0
    out.write(f"rank {resolved.rank}: {len(resolved.rays)} rays, {len(resolved.cones)} cones\n")
    for k, v in enumerate(resolved.rays):
        tag = f"new, from input cone {prov[k]}" if k in prov else "input"
        out.write(f"  ray {k}: {_vec(v)}  [{tag}]\n")
    for c in resolved.cones:
        out.write(f"  cone {list(c)}\n")
    if "ledger" in data:
        for e in data["ledger"]:
            out.write(f"  {e['divisor']}: discrepancy {e['discrepancy']}\n")
        out.write(f"  -K-D strictly effective: {data['strictly_effective']}\n")
    if not fan.validated:
        out.write("  note: face intersections not validated above rank 3\n")
    return 0


def cmd_klt_horo(args, out) -> int:
    pair = pair_from_json(_load_json(args.pair))
    datum = pair.parab.datum
    if args.resolve_only:
        res = toroidal_resolution(pair.colored_fan).to_json(pair.colored_fan, datum.simple_name)
        out.write(_dump(res) + "\n" if args.json else _resolution_text(res))
        return 0
    v = is_klt_horospherical(pair)
    ones, a_flag = anticanonical_horospherical(pair)
    data = v.to_json(datum.simple_name)
    data["anticanonical"] = {
        "toric": list(ones),
        "flag": {datum.simple_name(a): format_q(x) for a, x in sorted(a_flag.items())},
    }
    data["resolution"] = v.result.resolution.to_json(pair.colored_fan, datum.simple_name)
    if args.json:
        out.write(_dump(data) + "\n")
    else:
        out.write(f"{'divisor':<12} {'kind':<18} discrepancy\n")
        for e in v.result.ledger:
            out.write(f"{e.divisor:<12} {e.kind:<18} {format_q(e.discrepancy)}\n")
        out.write(f"floor(D) = 0: {v.floor_is_zero}\n")
        out.write(f"ledger min: {data['ledger_min']}\n")
        out.write(f"-K_X - D pulls back strictly effective: {v.strictly_effective}\n")
        out.write(f"verdict: {data['verdict']}\n")
        out.write(f"consistency: {'FAILURE' if v.consistency_failure else 'ok'}\n")
    return 1 if v.consistency_failure else 0


def _resolution_text(res: dict) -> str:
    lines = []
    for key, value in sorted(res.items()):
        lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
    return "\n".join(lines) + "\n"


def cmd_verify(args, out) -> int:
    types = args.types.split(",") if args.types else list(SWEEP_TYPES)
    report = run_sweep(
        types,
        max_rank=args.max_rank,
        word_budget=args.word_budget,
        words=not args.skip_words,
        klt=not args.skip_klt,
        workers=args.workers,
    )
    out.write((_dump(report.to_json()) if args.json else report.table()) + "\n")
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")

    p = argparse.ArgumentParser(
        prog="kltpairs",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def with_type(name, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("root_system", help='e.g. "A2", "B2xA1" or a JSON Cartan matrix')
        return sp

    with_type("roots", "print the positive roots and coroots").set_defaults(func=cmd_roots)

    for name, func, help_ in (
        ("parabolic", cmd_parabolic, "parabolic data for a subset I"),
        ("bs", cmd_bs, "beta-sequence and anticanonical coefficients"),
        ("klt-flag", cmd_klt_flag, "discrepancy ledger and klt verdict on G/P"),
    ):
        sp = with_type(name, help_)
        sp.add_argument("--I", default="", help="simple roots of P, e.g. a1,a3")
        if name in ("bs", "klt-flag"):
            sp.add_argument("--word", help="reduced word such as s2,s1 (default: canonical)")
        if name == "klt-flag":
            sp.add_argument("--d", action="append", help="coefficients such as a2=1/2 (default 0)")
        sp.set_defaults(func=func)

    sp = sub.add_parser("resolve-fan", parents=[common], help="smooth subdivision of a fan JSON")
    sp.add_argument("fan")
    sp.set_defaults(func=cmd_resolve_fan)

    sp = sub.add_parser("klt-horo", parents=[common], help="ledger and verdict for a horospherical pair JSON")
    sp.add_argument("pair")
    sp.add_argument("--resolve-only", action="store_true",
                    help="print the toroidal resolution without computing discrepancies")
    sp.set_defaults(func=cmd_klt_horo)

    sp = sub.add_parser("verify", parents=[common], help="run the exhaustive root-system sweep")
    sp.add_argument("--max-rank", type=int, default=4)
    sp.add_argument("--types", help="comma-separated types (default: the standard sweep list)")
    sp.add_argument("--word-budget", type=int, default=100, help="reduced words sampled above rank 3")
    sp.add_argument("--skip-words", action="store_true")
    sp.add_argument("--skip-klt", action="store_true")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except NotQCartier as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (KltError, UsageError, ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
