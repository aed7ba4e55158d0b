"""Command-line front end.

Exit codes: 0 success, 1 usage, 2 malformed input, 3 verification failure,
4 internal error.
"""

import argparse
import random
import sys
import time
from typing import List, Optional

from . import lcp as lcpmod
from .balancer import DEFAULT_ALPHA, balance, check_alpha
from .errors import (CapacityError, FormatError, MoveStructError, ParameterError,
                     SinkError, ValidationError)
from .movequery import MAGIC as MVST_MAGIC, MoveStructure, validate_move_structure
from .rlbwt import MAGIC as RLBW_MAGIC, build_context, permutation_map, read_rlbwt

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_VERIFY, EXIT_INTERNAL = 0, 1, 2, 3, 4
PERMS = ("lf", "fl", "phi", "phi-inv")
FULL_VERIFY_SAMPLES = 100_000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _alpha(text: str) -> int:
    try:
        return check_alpha(int(text))
    except (ValueError, ParameterError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="movestruct", description="Balanced move structures and LCP from an RLBWT.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def rlbwt_in(sp):
        sp.add_argument("--in", dest="input", required=True, help="RLBWT file (text or binary)")
        sp.add_argument("--input-format", choices=("auto", "text", "binary"), default="auto")

    b = sub.add_parser("build", help="balance a permutation and write MVST0001")
    rlbwt_in(b)
    b.add_argument("--perm", choices=PERMS, default="lf")
    b.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)
    b.add_argument("--out", required=True)
    b.add_argument("--stats", action="store_true", help="print key=value statistics")

    l = sub.add_parser("lcp", help="write the LCP array")
    rlbwt_in(l)
    l.add_argument("--out", default="-")
    l.add_argument("--format", choices=("text", "binary"), default="text")
    l.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)

    pl = sub.add_parser("plcp", help="write irreducible positions and PLCP values")
    rlbwt_in(pl)
    pl.add_argument("--out", default="-")
    pl.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)

    v = sub.add_parser("verify", help="check a serialized move structure")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--rlbwt", help="source RLBWT, needed for --full")
    v.add_argument("--perm", choices=PERMS, default="lf")
    v.add_argument("--full", action="store_true")

    s = sub.add_parser("stats", help="describe an MVST0001 or RLBWT file")
    s.add_argument("--in", dest="input", required=True)
    return p


def _print_stats(pairs, out) -> None:
    for k, v in pairs:
        out.write(f"{k}={v}\n")


def cmd_build(args, out) -> int:
    rl = read_rlbwt(args.input, args.input_format)
    t0 = time.perf_counter()
    imap = permutation_map(rl, args.perm)
    bp = balance(imap, args.alpha)
    ms = bp.extract_forward()
    elapsed = time.perf_counter() - t0
    with open(args.out, "wb") as fh:
        fh.write(ms.to_bytes())
    if args.stats:
        st = bp.stats
        pct = 100.0 * (ms.r_prime - imap.r) / imap.r
        _print_stats([
            ("perm", args.perm), ("n", ms.n), ("r", imap.r), ("r_prime", ms.r_prime),
            ("alpha", args.alpha), ("insertions", st.insertions),
            ("interval_increase_pct", f"{pct:.3f}"), ("balance_steps", st.total_steps),
            ("max_scan", ms.max_scan()), ("seconds", f"{elapsed:.6f}"),
        ], out)
    return EXIT_OK


def _open_out(path, binary):
    if path == "-":
        return sys.stdout.buffer if binary else sys.stdout, False
    return open(path, "wb" if binary else "w", encoding=None if binary else "utf-8"), True


def cmd_lcp(args, out) -> int:
    rl = read_rlbwt(args.input, args.input_format)
    ctx = build_context(rl, args.alpha)
    pp = lcpmod.plcp_from_context(ctx)
    fh, close = _open_out(args.out, args.format == "binary")
    try:
        if args.format == "binary":
            w = lcpmod.LcpBinaryWriter(fh, rl.n)
            for v in lcpmod.iter_lcp(ctx, pp):
                w(v)
            w.flush()
        else:
            buf = []
            for v in lcpmod.iter_lcp(ctx, pp):
                buf.append(f"{v}\n")
                if len(buf) >= 65536:
                    fh.write("".join(buf))
                    buf.clear()
            fh.write("".join(buf))
        fh.flush()
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_plcp(args, out) -> int:
    rl = read_rlbwt(args.input, args.input_format)
    pp = lcpmod.irreducible_plcp(rl, args.alpha)
    fh, close = _open_out(args.out, False)
    try:
        fh.write(lcpmod.format_plcp_text(pp))
    finally:
        if close:
            fh.close()
    return EXIT_OK


def cmd_verify(args, out) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    ms = MoveStructure.from_bytes(data, validate=False)
    problem = validate_move_structure(ms)
    if problem is not None:
        sys.stderr.write(f"verification failed: {problem}\n")
        return EXIT_VERIFY
    if not args.full:
        out.write(f"ok n={ms.n} r_prime={ms.r_prime} max_scan={ms.max_scan()}\n")
        return EXIT_OK
    if args.rlbwt is None:
        raise UsageError("--full needs --rlbwt")
    rl = read_rlbwt(args.rlbwt)
    ref = balance(permutation_map(rl, args.perm), ms.alpha).extract_forward()
    if ref.n != ms.n:
        sys.stderr.write(f"verification failed: n={ms.n} but source has n={ref.n}\n")
        return EXIT_VERIFY
    if ms.n <= FULL_VERIFY_SAMPLES:
        positions = range(ms.n)
    else:
        positions = random.Random(0).sample(range(ms.n), FULL_VERIFY_SAMPLES)
    mismatches = 0
    checked = 0
    for i in positions:
        checked += 1
        if ms.move(i, ms.locate(i))[0] != ref.move(i, ref.locate(i))[0]:
            mismatches += 1
    out.write(f"checked={checked} mismatches={mismatches}\n")
    if mismatches:
        sys.stderr.write(f"verification failed: {mismatches} query mismatches\n")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_stats(args, out) -> int:
    with open(args.input, "rb") as fh:
        data = fh.read()
    if data.startswith(MVST_MAGIC):
        ms = MoveStructure.from_bytes(data)
        w = ms.output_weights()
        _print_stats([("kind", "move_structure"), ("n", ms.n), ("r_prime", ms.r_prime),
                      ("alpha", ms.alpha), ("max_scan", int(w.max())),
                      ("mean_weight", f"{float(w.mean()):.3f}")], out)
    else:
        rl = read_rlbwt(data)
        _print_stats([("kind", "rlbwt"), ("format", "binary" if data.startswith(RLBW_MAGIC) else "text"),
                      ("n", rl.n), ("r", rl.r), ("sigma", rl.sigma),
                      ("n_over_r", f"{rl.n / rl.r:.3f}")], out)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "lcp": cmd_lcp, "plcp": cmd_plcp,
            "verify": cmd_verify, "stats": cmd_stats}


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (FormatError, ValidationError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_FORMAT
    except OSError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_FORMAT
    except ParameterError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except (CapacityError, SinkError, MoveStructError) as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
