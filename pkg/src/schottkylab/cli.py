"""Command-line front end: encode, decode, classify, concentrate, separate, render.

Exit codes: 0 success, 1 domain error (the module's message verbatim on
stderr), 2 usage error.  JSON reports are versioned with "schema": 1 and are
byte-identical across identical invocations: keys are sorted, floats use
repr, and the timings block carries deterministic counters only (wall_ms is
always null in reports).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .classify import (
    Evidence,
    SequenceVerdicts,
    certify_family_nonrecurrence,
    check_controlled,
    conical_probe,
    hierarchy_check,
    per_run_maxima,
)
from .coding import decode, encode
from .errors import DSLSyntaxError, SchottkyError
from .group import SchottkyGroup, build_group
from .hyperbolic import Arc, BoundaryPoint, Geodesic
from .render import render_scene, scene_for_sequence, translate_scene
from .search import (
    ConcentrationTask,
    search_concentration,
    search_controlled_chain,
    search_separation,
)
from .sequences import parse_family

SCHEMA_VERSION = 1


def _load_group(args) -> SchottkyGroup:
    if args.config:
        try:
            with open(args.config) as fh:
                config = json.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config: {exc}")
        except json.JSONDecodeError as exc:
            raise UsageError(f"malformed JSON config: {exc}")
        return SchottkyGroup.from_config(config)
    return build_group()


class UsageError(Exception):
    pass


def _report(args, command: str, inputs: dict, verdicts: dict, witnesses=None,
            exhaustion=None, words_examined=0, group: SchottkyGroup | None = None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "command": command,
        "config": {"radius": group.radius if group else None},
        "inputs": inputs,
        "verdicts": verdicts,
        "witnesses": witnesses or [],
        "exhaustion": exhaustion or {},
        "timings": {"wall_ms": None, "words_examined": words_examined},
    }


def _emit(args, report: dict, human_lines: list[str]) -> None:
    if args.json:
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = "".join(line + "\n" for line in human_lines)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _first_letter_positions(seq, limit: int) -> list[int]:
    """1-based crossing indices whose symbol equals the first symbol."""
    first = seq.symbol_at(0)
    n = limit if not seq.is_finite else min(limit, seq.length)
    return [i + 1 for i in range(n) if seq.symbol_at(i) == first]


def _resolve_arc(spec: str, group, seq) -> Arc:
    if spec.startswith("arc:"):
        letter = spec[4:]
        if letter not in group.arcs:
            raise UsageError(f"unknown letter in arc spec: {spec!r}")
        return group.arcs[letter]
    if spec.startswith("crossing:"):
        n = _positive_int(spec[9:], spec)
        return group.nested_arc(seq.prefix(n))
    if spec.startswith("un:"):
        n = _positive_int(spec[3:], spec)
        return _un_arc(group, seq, n)
    if spec.startswith("angles:"):
        try:
            s, e = (float(t) for t in spec[7:].split(","))
        except ValueError:
            raise UsageError(f"bad angles spec: {spec!r}")
        return Arc(s, e)
    raise UsageError(f"unknown arc spec: {spec!r}")


def _positive_int(text: str, spec: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"bad index in spec: {spec!r}")
    if n < 1:
        raise UsageError(f"index must be >= 1 in spec: {spec!r}")
    return n


def _un_arc(group, seq, n: int) -> Arc:
    pos = _first_letter_positions(seq, 400)
    if len(pos) < n + 1:
        raise UsageError(f"sequence has fewer than {n + 1} first-letter crossings")
    shallow = group.nested_arc(seq.prefix(pos[n - 1]))
    deep = group.nested_arc(seq.prefix(pos[n]))
    return Arc(deep.start, shallow.end)


def _un_lambda(group, seq, n: int) -> Geodesic:
    """lambda_N: left endpoint of the N-th first-letter translate to the right
    endpoint of the (N+1)-th, oriented to cross the ray left to right."""
    pos = _first_letter_positions(seq, 400)
    if len(pos) < n + 1:
        raise UsageError(f"sequence has fewer than {n + 1} first-letter crossings")
    shallow = group.nested_arc(seq.prefix(pos[n - 1]))
    deep = group.nested_arc(seq.prefix(pos[n]))
    return Geodesic(BoundaryPoint(shallow.end), BoundaryPoint(deep.start))


def _resolve_lambda(spec: str, group, seq) -> Geodesic:
    if spec.startswith("un:"):
        return _un_lambda(group, seq, _positive_int(spec[3:], spec))
    if spec.startswith("crossing:"):
        n = _positive_int(spec[9:], spec)
        arc = group.nested_arc(seq.prefix(n))
        return Geodesic(BoundaryPoint(arc.end), BoundaryPoint(arc.start))
    if spec.startswith("angles:"):
        try:
            e1, e2 = (float(t) for t in spec[7:].split(","))
        except ValueError:
            raise UsageError(f"bad angles spec: {spec!r}")
        return Geodesic(BoundaryPoint(e1), BoundaryPoint(e2))
    raise UsageError(f"unknown geodesic spec: {spec!r}")


def cmd_decode(args) -> int:
    group = _load_group(args)
    seq = parse_family(args.seq).sequence()
    result = decode(group, seq, epsilon=args.epsilon, max_depth=args.depth)
    report = _report(
        args, "decode",
        {"seq": args.seq, "epsilon": args.epsilon},
        {"angle": result.point.angle, "depth": result.depth, "diameter": result.diameter},
        group=group,
    )
    _emit(args, report, [
        f"angle {result.point.angle!r}",
        f"depth {result.depth}",
        f"diameter {result.diameter!r}",
    ])
    return 0


def cmd_encode(args) -> int:
    group = _load_group(args)
    word = encode(group, BoundaryPoint(args.angle), args.max_len)
    report = _report(
        args, "encode",
        {"angle": args.angle, "max_len": args.max_len},
        {"symbols": word},
        group=group,
    )
    _emit(args, report, [word])
    return 0


def cmd_classify(args) -> int:
    group = _load_group(args)
    spec = parse_family(args.seq)
    seq = spec.sequence()
    words_examined = 0
    verdicts: dict = {}
    witnesses = []
    exhaustion = {}

    cert = certify_family_nonrecurrence(spec)
    scan_depth = args.depth if not seq.is_finite else min(args.depth, seq.length)
    max_window = min(6, max(1, scan_depth - 2))
    recurrence = check_controlled(seq, 1, max_window, scan_depth)
    # constructive chain witness: window 4 within the first 200 crossings
    try:
        chain = search_controlled_chain(group, seq, 4, 2, min(scan_depth, 200))
    except SchottkyError:
        chain = None
    if cert is not None:
        controlled = Evidence.NEGATIVE_CERTIFIED
    elif chain is not None and chain.found:
        controlled = Evidence.POSITIVE
    elif all(v.recurs for v in recurrence):
        controlled = Evidence.POSITIVE
    else:
        controlled = Evidence.NEGATIVE_EVIDENCE
    verdicts["controlled"] = {
        "evidence": controlled.value,
        "certificate": cert.to_json_dict() if cert else None,
        "recurrence": [v.to_json_dict() for v in recurrence],
        "chain": chain.to_json_dict() if chain else None,
    }
    if chain is not None and chain.found:
        witnesses.append(chain.to_json_dict())

    if not seq.is_finite:
        probe = conical_probe(group, seq, args.depth)
        conical = Evidence.POSITIVE if probe.bounded_evidence else Evidence.NEGATIVE_EVIDENCE
        probe_dict = probe.to_json_dict()
        if spec.kind in ("thm42", "thm43"):
            probe_dict["per_run_maxima"] = per_run_maxima(spec, probe.distances, 10)
        verdicts["conical"] = probe_dict
    else:
        conical = Evidence.UNKNOWN
        verdicts["conical"] = {"summary": "unknown", "reason": "finite prefix only"}

    p = decode(group, seq, epsilon=1e-12 if not seq.is_finite else 2.0).point
    positions = _first_letter_positions(seq, min(400, scan_depth))
    concentration = Evidence.UNKNOWN
    separation = Evidence.UNKNOWN
    if len(positions) >= 3:
        u = _un_arc(group, seq, 1)
        v = _un_arc(group, seq, 2)
        task = ConcentrationTask(p, u, v, control=False, max_len=args.max_len,
                                 sequence_text=spec.render())
        conc = search_concentration(group, task, parallel=args.parallel)
        words_examined += conc.words_examined
        concentration = Evidence.POSITIVE if conc.found else Evidence.NEGATIVE_EVIDENCE
        verdicts["concentration"] = conc.to_json_dict()
        if conc.found:
            witnesses.append(conc.to_json_dict())
        else:
            exhaustion["concentration"] = {
                "max_len": conc.max_len, "words_examined": conc.words_examined,
            }
        lam = _un_lambda(group, seq, 1)
        sep = search_separation(group, p, lam, v, max_len=args.max_len, parallel=args.parallel)
        words_examined += sep.words_examined
        separation = Evidence.POSITIVE if sep.found else Evidence.NEGATIVE_EVIDENCE
        verdicts["separation"] = sep.to_json_dict()
        if sep.found:
            witnesses.append(sep.to_json_dict())
        else:
            exhaustion["separation"] = {
                "max_len": sep.max_len, "words_examined": sep.words_examined,
            }
    else:
        verdicts["concentration"] = {"outcome": "skipped", "reason": "too few crossings"}
        verdicts["separation"] = {"outcome": "skipped", "reason": "too few crossings"}

    entry = SequenceVerdicts(spec.render(), controlled, concentration, separation, conical)
    hierarchy = hierarchy_check([entry])
    verdicts["hierarchy"] = hierarchy.to_json_dict()
    verdicts["point_angle"] = p.angle

    report = _report(
        args, "classify",
        {"seq": args.seq, "depth": args.depth, "max_len": args.max_len},
        verdicts, witnesses, exhaustion, words_examined, group,
    )
    lines = [
        f"sequence {spec.render()}",
        f"limit point angle {p.angle!r}",
        f"controlled: {controlled.value}",
        f"concentration: {concentration.value}",
        f"separation: {separation.value}",
        f"conical: {conical.value}",
        f"hierarchy violations: {len(hierarchy.violations)}",
    ]
    _emit(args, report, lines)
    return 0


def cmd_concentrate(args) -> int:
    group = _load_group(args)
    spec = parse_family(args.seq)
    seq = spec.sequence()
    p = decode(group, seq, epsilon=1e-12 if not seq.is_finite else 2.0).point
    u = _resolve_arc(args.u, group, seq)
    v = _resolve_arc(args.v, group, seq)
    task = ConcentrationTask(p, u, v, control=args.control, max_len=args.max_len,
                             sequence_text=spec.render())
    result = search_concentration(group, task, parallel=args.parallel, prune=not args.no_prune)
    report = _report(
        args, "concentrate",
        {"seq": args.seq, "u": args.u, "v": args.v, "control": args.control,
         "max_len": args.max_len},
        {"search": result.to_json_dict()},
        [result.to_json_dict()] if result.found else [],
        {} if result.found else {"concentration": {"max_len": result.max_len,
                                                   "words_examined": result.words_examined}},
        result.words_examined, group,
    )
    lines = [
        f"outcome {result.outcome}",
        f"word {result.word!r}" if result.found else f"exhausted({result.max_len})",
        f"words examined {result.words_examined}",
    ]
    _emit(args, report, lines)
    return 0


def cmd_separate(args) -> int:
    group = _load_group(args)
    spec = parse_family(args.seq)
    seq = spec.sequence()
    p = decode(group, seq, epsilon=1e-12 if not seq.is_finite else 2.0).point
    lam = _resolve_lambda(args.lam, group, seq)
    v = _resolve_arc(args.v, group, seq)
    result = search_separation(group, p, lam, v, max_len=args.max_len, parallel=args.parallel)
    report = _report(
        args, "separate",
        {"seq": args.seq, "lambda": args.lam, "v": args.v, "max_len": args.max_len},
        {"search": result.to_json_dict()},
        [result.to_json_dict()] if result.found else [],
        {} if result.found else {"separation": {"max_len": result.max_len,
                                                "words_examined": result.words_examined}},
        result.words_examined, group,
    )
    lines = [
        f"outcome {result.outcome}",
        f"word {result.word!r} direction {result.direction}" if result.found
        else f"exhausted({result.max_len})",
    ]
    _emit(args, report, lines)
    return 0


def cmd_render(args) -> int:
    group = _load_group(args)
    if args.seq:
        spec = parse_family(args.seq)
        seq = spec.sequence()
        p = decode(group, seq, epsilon=1e-12 if not seq.is_finite else 2.0).point
        arcs = [_un_arc(group, seq, args.un)] if args.un else []
        lam = _un_lambda(group, seq, args.un) if args.un else None
        scene = scene_for_sequence(group, arcs, p.angle, lam, depth=args.depth)
    else:
        scene = translate_scene(group, args.depth, label_depth=args.label_depth)
    svg = render_scene(scene)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(svg)
    else:
        sys.stdout.write(svg)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help='JSON config file, e.g. {"radius": 0.8}')
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = argparse.ArgumentParser(
        prog="schottkylab",
        description="crossing sequences, limit-point classification and witness "
                    "searches for a two-generator Schottky group",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", parents=[common], help="sequence -> boundary point")
    p.add_argument("--seq", required=True, help="sequence DSL text")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--depth", type=int, default=200, help="maximum nesting depth")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("encode", parents=[common], help="boundary angle -> symbols")
    p.add_argument("--angle", type=float, required=True, help="angle in radians")
    p.add_argument("--max-len", type=int, default=30)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("classify", parents=[common], help="full verdict suite for a sequence")
    p.add_argument("--seq", required=True)
    p.add_argument("--depth", type=int, default=500, help="probe and recurrence depth")
    p.add_argument("--max-len", type=int, default=10, help="witness search budget")
    p.add_argument("--parallel", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("concentrate", parents=[common], help="concentration witness search")
    p.add_argument("--seq", required=True)
    p.add_argument("--u", default="un:1", help="arc spec: un:N | crossing:N | arc:x | angles:s,e")
    p.add_argument("--v", default="un:2", help="target arc spec")
    p.add_argument("--control", action="store_true")
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--no-prune", action="store_true", help="disable branch pruning")
    p.set_defaults(func=cmd_concentrate)

    p = sub.add_parser("separate", parents=[common], help="geodesic separation witness search")
    p.add_argument("--seq", required=True)
    p.add_argument("--lam", default="un:1", help="geodesic spec: un:N | crossing:N | angles:a,b")
    p.add_argument("--v", default="un:2", help="target arc spec")
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--parallel", action="store_true")
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("render", parents=[common], help="SVG picture of the translate circles")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--label-depth", type=int, default=1)
    p.add_argument("--seq", help="overlay the ray and arcs of this sequence")
    p.add_argument("--un", type=int, default=0, help="overlay the U_n arc and its geodesic")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except DSLSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SchottkyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
