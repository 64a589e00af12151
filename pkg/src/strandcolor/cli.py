"""Command line: gen, run, verify, bench.

Exit codes: 0 success, 1 colorer error or violations found, 2 bad arguments
or unreadable input.  ``STRANDCOLOR_SEED`` overrides ``--seed``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import stream as S
from .colorers import ALGORITHMS, prepare_stream
from .errors import StrandColorError
from .harness import run
from .transcript import format_transcript, parse_transcript
from .verify import check_proper, report_lines

SCHEMA = 1
GENERATORS = ("regular-bipartite", "multigraph", "bipartite-edge", "star", "path", "adversarial")
BENCH_COLUMNS = ("schema", "algo", "stream", "n", "delta", "seeds", "colors_max", "palette_bound",
                 "state_bits_max", "abort_rate")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _seed(args) -> int:
    env = os.environ.get("STRANDCOLOR_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"STRANDCOLOR_SEED must be an integer, got {env!r}") from None
    return args.seed


def _value(text: str):
    if text.lower() == "none":
        return None
    for cast in (int, Fraction, float):
        try:
            return cast(text)
        except (ValueError, ZeroDivisionError):
            pass
    return text


def _overrides(pairs) -> dict:
    out = {}
    for p in pairs or ():
        key, sep, val = p.partition("=")
        if not sep or not key:
            raise UsageError(f"--set expects key=value, got {p!r}")
        out[key] = _value(val)
    return out


def _read_stream(path: str) -> S.GraphStream:
    return S.parse_stream(Path(path).read_text(encoding="utf-8"))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_gen(args) -> int:
    seed = _seed(args)

    def need(*names):
        missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
        if missing:
            raise UsageError(f"gen --kind {args.kind} requires {', '.join(missing)}")

    kind = args.kind
    if kind == "regular-bipartite":
        need("na", "nb", "delta")
        st = S.gen_regular_bipartite_stream(args.na, args.nb, args.delta, seed, simple=args.simple)
    elif kind == "bipartite-edge":
        need("na", "nb", "delta")
        st = S.gen_bipartite_edge_stream(args.na, args.nb, args.delta, seed, simple=not args.multi)
    elif kind == "multigraph":
        need("n", "delta")
        st = S.gen_random_multigraph_stream(args.n, args.delta, args.repeat_bias, seed)
    elif kind == "star":
        need("n")
        st = S.gen_star_stream(args.n, args.mode or S.EDGE_ARRIVAL)
    elif kind == "path":
        need("n")
        st = S.gen_path_stream(args.n)
    else:
        need("delta")
        st = S.gen_greedy_adversarial_stream(args.delta)
    if args.mode and kind != "star" and args.mode != st.mode:
        if args.mode == S.EDGE_ARRIVAL:
            st = S.flatten_to_edge_arrival(st)
        else:
            st = S.to_vertex_arrival(st, one_sided=args.mode == S.ONE_SIDED)
    _write(args.output, S.serialize_stream(st))
    return 0


def cmd_run(args) -> int:
    seed = _seed(args)
    stream = _read_stream(args.stream)
    res = run(args.algo, stream, profile=args.profile, seed=seed, failure=args.failure,
              overrides=_overrides(args.set))
    _write(args.output, format_transcript(res.transcript))
    summary = {
        "schema": SCHEMA, "algo": args.algo, "profile": args.profile, "seed": seed,
        "n": stream.n, "delta": stream.delta, "edges": stream.m,
        "palette": res.transcript.palette, "state_bits_peak": res.state_bits_peak,
        "aborts": 0 if res.ok else 1, "error": None if res.ok else type(res.error).__name__,
        "regime": res.colorer.regime, "wall_ms": round(res.wall_ms, 3),
    }
    if args.json:
        _write(args.json, json.dumps(summary, sort_keys=True) + "\n")
    if not res.ok:
        print(f"{type(res.error).__name__}: {res.error}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    stream = _read_stream(args.stream)
    transcript = parse_transcript(Path(args.transcript).read_text(encoding="utf-8"))
    if transcript.header.mode != stream.mode:
        stream = prepare_stream(transcript.algo, stream)
    violations = check_proper(stream, transcript)
    lines = report_lines(violations)
    if lines:
        sys.stdout.write("\n".join(lines) + "\n")
    if args.json:
        kinds: dict = {}
        for v in violations:
            kinds[v.kind] = kinds.get(v.kind, 0) + 1
        _write(args.json, json.dumps({"schema": SCHEMA, "violations": len(violations),
                                      "by_kind": dict(sorted(kinds.items()))}, sort_keys=True) + "\n")
    return 1 if violations else 0


def _seed_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--seeds must be comma-separated integers, got {text!r}") from None


def bench_rows(algos, streams: dict, seeds, profile="desk", failure=0.1, overrides=None) -> list[dict]:
    """One row per (algo, stream) over the seed list, sorted by (algo, stream)."""
    rows = []
    if not seeds:
        return rows
    for algo in sorted(set(algos)):
        for name in sorted(streams):
            st = streams[name]
            colors, bits, aborts, bound = 0, 0, 0, 0
            for seed in seeds:
                res = run(algo, st, profile=profile, seed=seed, failure=failure, overrides=overrides)
                colors = max(colors, res.transcript.palette)
                bits = max(bits, res.state_bits_peak)
                bound = max(bound, res.colorer.palette_bound())
                aborts += not res.ok
            rows.append({"schema": SCHEMA, "algo": algo, "stream": name, "n": st.n, "delta": st.delta,
                         "seeds": len(seeds), "colors_max": colors, "palette_bound": bound,
                         "state_bits_max": bits, "abort_rate": f"{aborts / len(seeds):.6f}"})
    return rows


def format_bench_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(args) -> int:
    streams = {Path(p).name: _read_stream(p) for p in args.stream}
    rows = bench_rows(args.algo, streams, _seed_list(args.seeds), args.profile, args.failure,
                      _overrides(args.set))
    _write(args.output, format_bench_csv(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = Parser(prog="strandcolor", description="Streaming edge coloring experiments.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    g = sub.add_parser("gen", help="generate a stream file")
    g.add_argument("--kind", required=True, choices=GENERATORS)
    g.add_argument("--n", type=int)
    g.add_argument("--na", type=int)
    g.add_argument("--nb", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--repeat-bias", type=float, default=0.0)
    g.add_argument("--simple", action="store_true", help="regular-bipartite: no parallel edges")
    g.add_argument("--multi", action="store_true", help="bipartite-edge: allow parallel edges")
    g.add_argument("--mode", choices=S.MODES, help="convert the generated stream to this mode")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    common = Parser(add_help=False)
    common.add_argument("--profile", choices=("desk", "paper"), default="desk")
    common.add_argument("--failure", type=float, default=0.1)
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a colorer constant")

    r = sub.add_parser("run", parents=[common], help="color a stream")
    r.add_argument("--algo", required=True, choices=ALGORITHMS)
    r.add_argument("--stream", required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-o", "--output")
    r.add_argument("--json")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="check a transcript against its stream")
    v.add_argument("--stream", required=True)
    v.add_argument("--transcript", required=True)
    v.add_argument("--json")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="palette/space/abort table over seeds")
    b.add_argument("--algo", action="append", required=True, choices=ALGORITHMS)
    b.add_argument("--stream", action="append", required=True)
    b.add_argument("--seeds", default="0", help="comma-separated seeds; empty for none")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as err:
        print(err, file=sys.stderr)
        return 2
    except (OSError, StrandColorError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
