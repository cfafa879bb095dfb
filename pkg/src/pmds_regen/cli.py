"""Command-line front end.

Exit status: 0 on success or a certificate, 1 on a counterexample or an
unrecoverable pattern, 2 on usage errors.

Messages are raw little-endian unsigned integers, one field element each,
row-major ``ell x k``.  The width is the smallest of 1, 2, 4 or 8 bytes that
holds every element of the code's field.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from .arrays import ArrayCodeword
from .errors import CodingError, RepairError, UnrecoverableError, WordNotInCodeError
from .registry import CONSTRUCTIONS, build_code, load_code
from .sizes import CONSTRUCTIONS as SIZE_CONSTRUCTIONS
from .sizes import check_comparison_theorem, emit_csv, sweep_points
from .verify import (certify_msr_bandwidth, certify_pmds, certify_sd, repair_local,
                     simulate_cluster)


class UsageError(Exception):
    pass


def element_width(field) -> int:
    for w in (1, 2, 4, 8):
        if field.order - 1 < 1 << (8 * w):
            return w
    raise UsageError("field too large for the raw message format")


def read_message(path: str, code) -> np.ndarray:
    w = element_width(code.field)
    raw = np.fromfile(path, dtype=f"<u{w}").astype(np.int64)
    k = code.row_dimension
    if raw.size != code.ell * k:
        raise UsageError(f"message file holds {raw.size} elements, expected ell*k = {code.ell * k}")
    return code.field.array(raw.reshape(code.ell, k))


def write_message(path: str, code, msg: np.ndarray) -> None:
    w = element_width(code.field)
    np.asarray(msg, dtype=f"<u{w}").tofile(path)


def parse_ints(text: Optional[str]) -> List[int]:
    """``"1,3,5-7"`` -> ``[1, 3, 5, 6, 7]``."""
    if text is None or text == "":
        return []
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def parse_pattern(text: str, code) -> tuple:
    """``"0;3"`` -> per-group tuples of erased global columns."""
    groups = [parse_ints(g) for g in text.split(";")]
    if len(groups) != code.mu:
        raise UsageError(f"pattern needs {code.mu} groups separated by ';'")
    return tuple(tuple(g) for g in groups)


def _load_word(path: str) -> ArrayCodeword:
    with open(path) as fh:
        return ArrayCodeword.from_json(fh.read())


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_build(args) -> int:
    code = build_code(args.construction, mu=args.mu, n=args.n, r=args.r, s=args.s, d=args.d,
                      mode=args.mode, q=args.q, M=args.M, seed=args.seed)
    _emit(json.dumps(code.descriptor()), args.out)
    return 0


def cmd_encode(args) -> int:
    code = load_code(args.code)
    if args.message:
        msg = read_message(args.message, code)
    else:
        msg = code.random_message(np.random.default_rng(args.seed))
        if args.save_message:
            write_message(args.save_message, code, msg)
    _emit(code.encode(msg).to_json(), args.out)
    return 0


def cmd_decode(args) -> int:
    code = load_code(args.code)
    word = _load_word(args.word)
    erased = parse_ints(args.erased)
    full = code.decode_erasures(word.erase(erased), erased)
    if not code.is_codeword(full):
        raise WordNotInCodeError("the surviving columns are not consistent with any codeword")
    msg = code.extract_message(full)
    if args.out:
        write_message(args.out, code, msg)
    else:
        sys.stdout.buffer.write(np.asarray(msg, dtype=f"<u{element_width(code.field)}").tobytes())
    return 0


def cmd_repair(args) -> int:
    code = load_code(args.code)
    word = _load_word(args.word)
    failed = args.failed
    if args.pattern:
        pat = parse_pattern(args.pattern, code)
        col, tr = code.global_repair(word.erase([failed] + [c for g in pat for c in g]), pat, failed)
    else:
        helpers = parse_ints(args.helpers) or None
        if helpers is None:
            d = getattr(code, "d", code.n - 1)
            helpers = [c for c in code.group(code.group_of(failed)) if c != failed][:d]
        col, tr = repair_local(code, word.erase([failed]), failed, helpers, d=len(helpers))
    report = json.loads(tr.to_json())
    report["column"] = col.tolist()
    report["matches_input"] = bool(np.array_equal(col, word.data[:, failed]))
    _emit(json.dumps(report), args.out)
    return 0


def cmd_verify(args) -> int:
    code = load_code(args.code)
    budget = None if args.budget is not None and args.budget <= 0 else args.budget
    wanted = [name for name in ("pmds", "sd", "msr_local", "msr_global") if getattr(args, name)]
    if not wanted:
        wanted = ["pmds"]
    results = []
    for name in wanted:
        if name == "pmds":
            res = certify_pmds(code, budget=budget, seed=args.seed)
        elif name == "sd":
            res = certify_sd(code, budget=budget, seed=args.seed)
        elif name == "msr_local":
            res = certify_msr_bandwidth(code, "local", seed=args.seed)
        else:
            if not hasattr(code, "global_repair"):
                raise UsageError("--msr-global needs a globally regenerating code")
            res = certify_msr_bandwidth(code, "global", seed=args.seed, trials=1)
        results.append(res)
    _emit(json.dumps([json.loads(r.to_json()) for r in results], indent=1), args.out)
    return 0 if all(results) else 1


def cmd_sizes(args) -> int:
    if args.check_comparison:
        report = check_comparison_theorem(parse_ints(args.n) or range(3, 13),
                                          parse_ints(args.mu) or range(2, 9))
        _emit(report.to_json(), args.out)
        return 0 if report.ok else 1
    if not args.n or not args.mu:
        raise UsageError("sizes needs --n and --mu (or --check-comparison)")
    cons = [c.strip() for c in args.constructions.split(",")] if args.constructions else list(SIZE_CONSTRUCTIONS)
    bad = [c for c in cons if c not in SIZE_CONSTRUCTIONS]
    if bad:
        raise UsageError(f"unknown constructions {bad}; choose from {SIZE_CONSTRUCTIONS}")
    pts = sweep_points(parse_ints(args.n), parse_ints(args.mu),
                       parse_ints(args.r) or None, parse_ints(args.s) or None, parse_ints(args.d) or None)
    _emit(emit_csv(pts, cons), args.out)
    return 0


def cmd_simulate(args) -> int:
    code = load_code(args.code)
    with open(args.scenario) as fh:
        scenario = json.load(fh)
    if isinstance(scenario, dict):
        scenario = scenario.get("events", [])
    report = simulate_cluster(code, scenario, seed=args.seed)
    _emit(json.dumps(report), args.out)
    return 1 if report["data_loss"] else 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pmds-regen",
                                     description="Partial-MDS array codes with regenerating repair.")
    sub = parser.add_subparsers(dest="command")

    def common(p, code=True):
        if code:
            p.add_argument("--code", required=True, help="code descriptor JSON")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="output file (default: stdout)")

    p = sub.add_parser("build", help="write a code descriptor")
    p.add_argument("--construction", choices=CONSTRUCTIONS, default="pmds2")
    p.add_argument("--mu", type=int, default=2)
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--s", type=int, default=2)
    p.add_argument("--d", type=int, default=None, help="local helpers (default n-1)")
    p.add_argument("--mode", choices=["PMDS", "SD", "s1"], default="PMDS")
    p.add_argument("--q", type=int, default=None, help="base field size")
    p.add_argument("--M", type=int, default=None, help="extension degree")
    common(p, code=False)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("encode", help="encode a raw message file")
    p.add_argument("--message", help="raw message (default: random from --seed)")
    p.add_argument("--save-message", help="where to store the random message")
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="recover the message after erasures")
    p.add_argument("--word", required=True)
    p.add_argument("--erased", default="", help="erased columns, e.g. 0,5-6")
    common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("repair", help="repair one node and print its transcript")
    p.add_argument("--word", required=True)
    p.add_argument("--failed", type=int, required=True)
    p.add_argument("--helpers", help="helper columns (local repair)")
    p.add_argument("--pattern", help="punctured columns per group for global repair, e.g. '0;3'")
    common(p)
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("verify", help="certify code properties")
    p.add_argument("--pmds", action="store_true")
    p.add_argument("--sd", action="store_true")
    p.add_argument("--msr-local", action="store_true")
    p.add_argument("--msr-global", action="store_true")
    p.add_argument("--budget", type=int, default=10**6, help="(check,row) pairs; 0 = exhaustive")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sizes", help="field sizes and subpacketization as CSV")
    p.add_argument("--n")
    p.add_argument("--mu")
    p.add_argument("--r")
    p.add_argument("--s")
    p.add_argument("--d")
    p.add_argument("--constructions", help="comma list of A,B,C,D,E,Global")
    p.add_argument("--check-comparison", action="store_true", help="sweep the comparison relations instead")
    common(p, code=False)
    p.set_defaults(func=cmd_sizes)

    p = sub.add_parser("simulate", help="replay a failure scenario")
    p.add_argument("--scenario", required=True)
    common(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UnrecoverableError, WordNotInCodeError, RepairError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (UsageError, CodingError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
