"""Command-line front end.

Exit codes: 0 when the question was decided (either way), 2 when a search
budget ran out, 1 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path

from . import boundary
from .decision import BoundExceeded, Decision, Found, Refuted, decision_to_json
from .freeorbit import DEFAULT, OracleConfig
from .hnn import AscendingHNN, HnnElement, format_hnn
from .maps import MIRROR_PATTERNS, InvalidEndomorphism, ProductElement, ProductEndo, format_element, parse_element, parse_endo
from .productorbit import decide_conj, decide_eq
from .twosided import tcp, two_brcp
from .words import Word, WordSyntaxError, format_word

__all__ = ["run", "main", "REPORT_SCHEMA", "InputError"]

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "verdict", "elapsed"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object"},
        "config": {"type": "object"},
        "verdict": {
            "type": "object",
            "required": ["verdict"],
            "properties": {"verdict": {"enum": ["found", "refuted", "bound_exceeded"]}},
        },
        "trace": {},
        "details": {"type": "object"},
        "elapsed": {"type": "number", "minimum": 0},
    },
}


class InputError(Exception):
    def __init__(self, message: str, text: str | None = None, position: int | None = None):
        super().__init__(message)
        self.text = text
        self.position = position

    def render(self) -> str:
        lines = [f"error: {self}"]
        if self.text is not None and self.position is not None:
            lines.append(f"  {self.text}")
            lines.append("  " + " " * self.position + "^")
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, Word):
        return format_word(x)
    if isinstance(x, ProductElement):
        return format_element(x)
    if isinstance(x, HnnElement):
        return format_hnn(x)
    if isinstance(x, Fraction):
        return float(x)
    if isinstance(x, boundary.BoundaryPoint):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(y) for y in x]
    if is_dataclass(x):
        return _jsonable(asdict(x))
    return x


# input helpers ------------------------------------------------------------------


def _load_endo(path: str | None) -> ProductEndo:
    if path is None:
        raise InputError("--endo FILE is required")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_endo(text)
    except (InvalidEndomorphism, WordSyntaxError, ValueError, KeyError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _element(phi: ProductEndo, text: str | None, flag: str) -> ProductElement:
    if text is None:
        raise InputError(f"{flag} is required")
    try:
        return parse_element(text, phi.n, phi.m)
    except WordSyntaxError as exc:
        raise InputError(f"{flag}: {str(exc).rsplit(' (at', 1)[0]}", text, exc.position) from None


def _config(args) -> OracleConfig:
    try:
        return OracleConfig(
            max_steps=args.max_steps or DEFAULT.max_steps,
            max_word_length=args.max_len or DEFAULT.max_word_length,
            conjugator_length_bound=args.conj_bound or DEFAULT.conjugator_length_bound,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _precondition(fn, *a):
    try:
        return fn(*a)
    except ValueError as exc:
        raise InputError(str(exc)) from None


# subcommands --------------------------------------------------------------------
# each returns (decision, inputs, details, trace)


def _cmd_classify(args):
    phi = _load_endo(args.endo)
    mirrored = phi.pattern() in MIRROR_PATTERNS
    data = (phi.mirrored() if mirrored else phi).type_data
    details = {"type": data.tag, "factors_swapped": mirrored}
    for key in ("u", "v", "P", "Q", "R", "S"):
        val = getattr(data, key)
        if val is not None:
            details[key] = _jsonable(val)
    for key in ("phi", "psi"):
        f = getattr(data, key)
        if f is not None:
            details[key] = [format_word(w) for w in f.images]
    return Found(data.tag), {"endo": phi.to_json()}, details, None


def _orbit(args, conj: bool):
    phi = _load_endo(args.endo)
    g, h = _element(phi, args.source, "--from"), _element(phi, args.target, "--to")
    cfg = _config(args)
    out = (decide_conj if conj else decide_eq)(phi, g, h, cfg)
    return out.decision, {"from": args.source, "to": args.target}, {"type": phi.tag if phi.pattern() not in MIRROR_PATTERNS else phi.mirrored().tag}, out.trace.to_json()


def _cmd_2brcp(args):
    phi = _load_endo(args.endo)
    g, h = _element(phi, args.source, "--from"), _element(phi, args.target, "--to")
    d = _precondition(two_brcp, phi, g, h, _config(args))
    return d, {"from": args.source, "to": args.target}, {}, None


def _cmd_tcp(args):
    phi = _load_endo(args.endo)
    g, h = _element(phi, args.source, "--from"), _element(phi, args.target, "--to")
    d = _precondition(tcp, phi, g, h, _config(args))
    return d, {"from": args.source, "to": args.target}, {}, None


def _hnn_word(hnn: AscendingHNN, text: str):
    try:
        return hnn.normalize(text)
    except WordSyntaxError as exc:
        raise InputError(str(exc).rsplit(" (at", 1)[0], text, exc.position) from None


def _cmd_hnn_normalize(args):
    phi = _load_endo(args.endo)
    hnn = _precondition(AscendingHNN, phi)
    e = _hnn_word(hnn, args.word)
    return Found(e), {"word": args.word}, {"i": e.i, "g": format_element(e.g), "j": e.j}, None


def _cmd_hnn_eq(args):
    phi = _load_endo(args.endo)
    hnn = _precondition(AscendingHNN, phi)
    e1, e2 = _hnn_word(hnn, args.word), _hnn_word(hnn, args.other)
    inputs = {"word": args.word, "other": args.other}
    details = {"normal_forms": [format_hnn(e1), format_hnn(e2)]}
    if e1 == e2:
        return Found(True, "equal normal forms"), inputs, details, None
    return Refuted("normal forms differ"), inputs, details, None


def _cmd_uc_check(args):
    phi = _load_endo(args.endo)
    ok, why = boundary.is_uniformly_continuous(phi)
    return Found(ok, why), {}, {"uniformly_continuous": ok, "justification": why}, None


def _cmd_cm_defect(args):
    phi = _load_endo(args.endo)
    seed = 0 if args.seed is None else args.seed
    length = args.max_len or 8
    rep = boundary.cm_defect(phi, length, args.samples, seed)
    details = {
        "samples": rep.samples,
        "max_len": length,
        "seed": seed,
        "max_defect": rep.max_defect,
        "witness": [format_element(g) for g in rep.witness] if rep.witness else None,
    }
    return Found(rep.max_defect), {}, details, None


def _cmd_boundary_orbit(args):
    phi = _load_endo(args.endo)
    if args.point is None:
        raise InputError("--point is required")
    try:
        p = boundary.parse_product_point(args.point, phi.n, phi.m)
    except WordSyntaxError as exc:
        raise InputError(f"--point: {str(exc).rsplit(' (at', 1)[0]}", args.point, exc.position) from None
    d = _precondition(boundary.classify_point, phi, p, args.budget)
    details = {"point": boundary.format_product_point(p)}
    if isinstance(d, Found):
        details["periodic"] = True
    else:
        details["periodic"] = None
        details["note"] = "no cycle within budget; the point is wandering unless it is periodic with a longer period"
    return d, {"point": args.point, "budget": args.budget}, details, None


_COMMANDS = {
    "classify": _cmd_classify,
    "brp": lambda a: _orbit(a, False),
    "brcp": lambda a: _orbit(a, True),
    "2brcp": _cmd_2brcp,
    "tcp": _cmd_tcp,
    "hnn-normalize": _cmd_hnn_normalize,
    "hnn-eq": _cmd_hnn_eq,
    "uc-check": _cmd_uc_check,
    "cm-defect": _cmd_cm_defect,
    "boundary-orbit": _cmd_boundary_orbit,
}

_RANDOMIZED = {"cm-defect"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="brinkmann", description="Orbit and conjugacy deciders for endomorphisms of F_n x F_m.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--endo", metavar="FILE", help="endomorphism description (line format or JSON)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-steps", type=int)
    common.add_argument("--max-len", type=int)
    common.add_argument("--conj-bound", type=int)
    common.add_argument("--seed", type=int)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("brp", "brcp", "2brcp", "tcp"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--from", dest="source", metavar="ELEMENT")
        p.add_argument("--to", dest="target", metavar="ELEMENT")
    for name in ("classify", "uc-check"):
        sub.add_parser(name, parents=[common])
    p = sub.add_parser("hnn-normalize", parents=[common])
    p.add_argument("word")
    p = sub.add_parser("hnn-eq", parents=[common])
    p.add_argument("word")
    p.add_argument("other")
    p = sub.add_parser("cm-defect", parents=[common])
    p.add_argument("--samples", type=int, default=500)
    p = sub.add_parser("boundary-orbit", parents=[common])
    p.add_argument("--point", metavar="'u:(v)|u:(v)'")
    p.add_argument("--budget", type=int, default=50)
    return parser


def exit_code(d: Decision) -> int:
    return 2 if isinstance(d, BoundExceeded) else 0


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        if args.format == "json" and args.command in _RANDOMIZED and args.seed is None:
            raise InputError(f"{args.command} needs --seed with --format json")
        start = time.perf_counter()
        decision, inputs, details, trace = _COMMANDS[args.command](args)
        elapsed = time.perf_counter() - start
    except InputError as exc:
        print(exc.render(), file=sys.stderr)
        return 1
    report = {
        "command": args.command,
        "inputs": _jsonable(inputs),
        "config": {"max_steps": args.max_steps, "max_len": args.max_len, "conj_bound": args.conj_bound, "seed": args.seed},
        "verdict": _jsonable(decision_to_json(decision)),
        "trace": _jsonable(trace),
        "details": _jsonable(details),
        "elapsed": elapsed,
    }
    if args.format == "json":
        print(json.dumps(report, indent=2), file=out)
    else:
        print(f"verdict: {_text_verdict(decision)}", file=out)
        for k, v in report["details"].items():
            print(f"{k}: {v}", file=out)
    return exit_code(decision)


def _text_verdict(d: Decision) -> str:
    if isinstance(d, Found):
        return f"Found({_jsonable(d.witness)})" + (f"  [{d.note}]" if d.note else "")
    if isinstance(d, Refuted):
        return f"Refuted  [{d.reason}]" if d.reason else "Refuted"
    return f"Undecided (bound {d.bound})" + (f"  [{d.detail}]" if d.detail else "")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
