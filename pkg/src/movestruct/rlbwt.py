"""Run-length encoded BWTs and the permutations derived from them.

Two on-disk formats are read:

* text: one run per line, ``<symbol> <length>``. The symbol is a single
  printable character, ``\\xHH`` for an arbitrary byte, or ``$`` for the
  terminator (byte 0).
* binary: ``b"RLBW0001" | u64 r | r x (u8 symbol, u64 length)``, little-endian,
  packed.

Everything from the LF map onward works in O(r) space, except the single
text-order walk over MOVE(FL), which takes O(n) time.
"""

import io
import os
from dataclasses import dataclass
from typing import BinaryIO, List, Optional, Sequence, Tuple, Union

import numpy as np

from .balancer import DEFAULT_ALPHA, BalancedPair, balance
from .errors import FormatError, ValidationError
from .intervals import IntervalMap, invert_interval_map
from .movequery import MoveStructure

MAGIC = b"RLBW0001"
TERMINATOR = 0
_RUN = np.dtype([("c", "u1"), ("len", "<u8")])


@dataclass(frozen=True)
class Rlbwt:
    runs: Tuple[Tuple[int, int], ...]

    @property
    def n(self) -> int:
        return sum(l for _, l in self.runs)

    @property
    def r(self) -> int:
        return len(self.runs)

    @property
    def sigma(self) -> int:
        return len({c for c, _ in self.runs})

    @property
    def symbols(self) -> List[int]:
        return [c for c, _ in self.runs]

    @property
    def lengths(self) -> List[int]:
        return [l for _, l in self.runs]

    def bwt(self) -> bytes:
        return b"".join(bytes([c]) * l for c, l in self.runs)

    @classmethod
    def from_bwt(cls, bwt: bytes) -> "Rlbwt":
        runs = []
        for c in bytes(bwt):
            if runs and runs[-1][0] == c:
                runs[-1][1] += 1
            else:
                runs.append([c, 1])
        return make_rlbwt([(c, l) for c, l in runs])


def validate_runs(runs: Sequence[Tuple[int, int]]) -> Optional[Tuple[int, str]]:
    """First problem as ``(run index, message)``, or None."""
    if not runs:
        return 0, "no runs"
    term = 0
    for k, (c, l) in enumerate(runs):
        if not 0 <= c <= 255:
            return k, f"symbol {c} is not a byte"
        if l < 1:
            return k, "zero-length run"
        if k and runs[k - 1][0] == c:
            return k, "adjacent runs share symbol"
        if c == TERMINATOR:
            term += l
            if term > 1:
                return k, "duplicate terminator"
    if term == 0:
        return len(runs) - 1, "missing terminator"
    return None


def make_rlbwt(runs) -> Rlbwt:
    runs = tuple((int(c), int(l)) for c, l in runs)
    problem = validate_runs(runs)
    if problem is not None:
        raise ValidationError(f"run {problem[0]}: {problem[1]}")
    return Rlbwt(runs)


# -- reading and writing ----------------------------------------------------

def _parse_token(tok: str) -> int:
    if tok == "$":
        return TERMINATOR
    if len(tok) == 4 and tok.startswith("\\x"):
        return int(tok[2:], 16)
    if len(tok) == 1 and tok.isprintable() and ord(tok) < 256:
        return ord(tok)
    raise ValueError(f"bad symbol token {tok!r}")


def parse_text(text: str) -> Rlbwt:
    runs = []
    lines = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("expected '<symbol> <length>'", lineno)
        try:
            c = _parse_token(parts[0])
            l = int(parts[1])
        except ValueError as exc:
            raise FormatError(str(exc), lineno) from None
        runs.append((c, l))
        lines.append(lineno)
    problem = validate_runs(runs)
    if problem is not None:
        k, msg = problem
        raise FormatError(msg, lines[k] if k < len(lines) else 1)
    return Rlbwt(tuple(runs))


def parse_binary(data: bytes) -> Rlbwt:
    if data[:len(MAGIC)] != MAGIC:
        raise FormatError("bad magic", 0)
    head = len(MAGIC) + 8
    if len(data) < head:
        raise FormatError("truncated header", len(data))
    r = int(np.frombuffer(data, dtype="<u8", count=1, offset=len(MAGIC))[0])
    expected = head + r * _RUN.itemsize
    if r > len(data) or len(data) < expected:
        raise FormatError(f"truncated body, expected {expected} bytes", len(data))
    if len(data) > expected:
        raise FormatError("trailing bytes after body", expected)
    arr = np.frombuffer(data, dtype=_RUN, count=r, offset=head)
    runs = tuple(zip(arr["c"].tolist(), arr["len"].tolist()))
    problem = validate_runs(runs)
    if problem is not None:
        k, msg = problem
        raise FormatError(msg, head + k * _RUN.itemsize)
    return Rlbwt(runs)


def read_rlbwt(source: Union[str, os.PathLike, bytes, BinaryIO], fmt: str = "auto") -> Rlbwt:
    """Read an RLBWT from a path, raw bytes or a binary stream.

    ``fmt`` is ``"text"``, ``"binary"`` or ``"auto"`` (sniff the magic).
    """
    if isinstance(source, (bytes, bytearray, memoryview)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if fmt == "auto":
        fmt = "binary" if data.startswith(MAGIC) else "text"
    if fmt == "binary":
        return parse_binary(data)
    if fmt != "text":
        raise ValueError(f"unknown RLBWT format {fmt!r}")
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise FormatError("input is not UTF-8 text", exc.start) from None
    return parse_text(text)


def _token(c: int) -> str:
    if c == TERMINATOR:
        return "$"
    ch = chr(c)
    if c < 128 and ch.isprintable() and not ch.isspace() and ch not in "$\\":
        return ch
    return f"\\x{c:02x}"


def format_text(rl: Rlbwt) -> str:
    return "".join(f"{_token(c)} {l}\n" for c, l in rl.runs)


def format_binary(rl: Rlbwt) -> bytes:
    arr = np.zeros(rl.r, dtype=_RUN)
    arr["c"] = rl.symbols
    arr["len"] = rl.lengths
    return MAGIC + np.uint64(rl.r).astype("<u8").tobytes() + arr.tobytes()


def write_rlbwt(rl: Rlbwt, path, fmt: str = "text") -> None:
    if fmt == "binary":
        with open(path, "wb") as fh:
            fh.write(format_binary(rl))
    else:
        with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(format_text(rl))


# -- LF and FL --------------------------------------------------------------

def symbol_starts(rl: Rlbwt) -> List[int]:
    """C table over all 257 boundaries: C[c] = number of symbols below c."""
    counts = [0] * 256
    for c, l in rl.runs:
        counts[c] += l
    C = [0] * 257
    for c in range(256):
        C[c + 1] = C[c] + counts[c]
    return C


def lf_intervals(rl: Rlbwt) -> IntervalMap:
    """One input interval per run; runs of equal symbols land in BWT order."""
    C = symbol_starts(rl)
    by_symbol: List[List[int]] = [[] for _ in range(256)]
    P = [0]
    P_pi = []
    seen = C[:256]
    for j, (c, l) in enumerate(rl.runs):
        P.append(P[-1] + l)
        P_pi.append(seen[c])
        seen[c] += l
        by_symbol[c].append(j)
    tau = [0] * rl.r
    k = 0
    for runs in by_symbol:
        for j in runs:
            tau[j] = k
            k += 1
    return IntervalMap(n=P[-1], r=rl.r, P=P, P_pi=P_pi, tau=tau)


def fl_intervals(rl: Rlbwt) -> IntervalMap:
    return invert_interval_map(lf_intervals(rl))


def run_symbols_fl(rl: Rlbwt, fl: MoveStructure) -> bytes:
    """First-column symbol at each balanced FL input start.

    Walks the starts against the C table; this is the BWT symbol at the FL
    image of every start.
    """
    C = symbol_starts(rl)
    out = bytearray(fl.r_prime)
    c = 0
    for j in range(fl.r_prime):
        x = fl.P[j]
        while C[c + 1] <= x:
            c += 1
        out[j] = c
    return bytes(out)


# -- the text-order walk ----------------------------------------------------

@dataclass
class FlIndex:
    """Balanced MOVE(FL) plus per-interval annotations used by the walk."""
    rlbwt: Rlbwt
    alpha: int
    pair: BalancedPair
    ms: MoveStructure
    RF: bytes
    head: List[int]  # run whose head row is this interval's image start, or -1
    tail: List[int]  # run whose last row is this interval's image end, or -1

    @property
    def n(self) -> int:
        return self.ms.n

    @property
    def r(self) -> int:
        return self.rlbwt.r


def build_fl(rl: Rlbwt, alpha: int = DEFAULT_ALPHA) -> FlIndex:
    imap = fl_intervals(rl)
    bp = balance(imap, alpha)
    ms = bp.extract_forward()
    # output starts of FL are the run heads; original output slots are in run order
    head, tail = bp.output_origins()
    return FlIndex(rl, alpha, bp, ms, run_symbols_fl(rl, ms), head, tail)


@dataclass
class WalkResult:
    I: List[int]  # SA values at run heads, ascending
    phi_plus: List[int]  # phi(I[k])
    tau: List[int]  # rank of phi_plus[k] among phi_plus
    step: int  # sample spacing, ceil(n/r)
    isa_fl: List[Tuple[int, int]]  # (row, rank) at text positions k*step
    fl_steps: int


def sample_step(n: int, r: int) -> int:
    return -(-n // r)


def text_walk(fli: FlIndex) -> WalkResult:
    """Enumerate SA in text order with n FL steps from row 0.

    After m steps the walk sits on row ISA[m-1] (text position m-1), so the
    SA value is the step count minus one and never needs storing. Run heads
    and run tails met along the way give the phi intervals; every
    ``step``-th position is sampled.
    """
    ms = fli.ms
    n, r = ms.n, fli.r
    step = sample_step(n, r)
    P, P_pi, P_rank = ms.P, ms.P_pi, ms.P_rank
    head, tail = fli.head, fli.tail
    head_run = []  # runs in order their heads are met, i.e. sorted by SA value
    head_sa = []
    tail_rank = [-1] * r  # order in which each run's tail is met
    tail_sa = [0] * r
    tails_seen = 0
    isa_fl = []
    i, j = 0, 0
    for m in range(1, n + 1):
        off = i - P[j]
        y = P_pi[j] + off
        k = P_rank[j]
        while P[k + 1] <= y:
            k += 1
        if off == 0 and head[j] >= 0:
            head_run.append(head[j])
            head_sa.append(m - 1)
        if tail[j] >= 0 and off == P[j + 1] - P[j] - 1:
            tail_rank[tail[j]] = tails_seen
            tail_sa[tail[j]] = m - 1
            tails_seen += 1
        if (m - 1) % step == 0:
            isa_fl.append((y, k))
        i, j = y, k
        if i == 0 and m != n:
            raise ValidationError(f"not a BWT: FL cycle closes after {m} of {n} steps")
    if i != 0:
        raise ValidationError("not a BWT: FL walk did not return to row 0")
    if len(head_sa) != r or tails_seen != r:
        raise ValidationError("not a BWT: run heads or tails missed by the walk")
    phi_plus = []
    tau = []
    for h in head_run:
        prev = (h - 1) % r
        phi_plus.append(tail_sa[prev])
        tau.append(tail_rank[prev])
    return WalkResult(head_sa, phi_plus, tau, step, isa_fl, n)


def phi_intervals(walk: WalkResult, n: int) -> IntervalMap:
    """phi(i) = SA[ISA[i]-1 mod n], with one interval per BWT run head."""
    return IntervalMap(n=n, r=len(walk.I), P=list(walk.I) + [n],
                       P_pi=list(walk.phi_plus), tau=list(walk.tau))


def phi_inv_intervals(walk: WalkResult, n: int) -> IntervalMap:
    return invert_interval_map(phi_intervals(walk, n))


def isa_samples(fli: FlIndex) -> List[Tuple[int, int]]:
    return text_walk(fli).isa_fl


@dataclass
class LcpContext:
    fl: FlIndex
    I: List[int]
    phi_plus: List[int]
    phi_tau: List[int]
    step: int
    isa_fl: List[Tuple[int, int]]

    @property
    def n(self) -> int:
        return self.fl.n

    @property
    def r(self) -> int:
        return len(self.I)

    @property
    def RF(self) -> bytes:
        return self.fl.RF

    def phi_map(self) -> IntervalMap:
        return IntervalMap(n=self.n, r=self.r, P=list(self.I) + [self.n],
                           P_pi=list(self.phi_plus), tau=list(self.phi_tau))


def build_context(rl: Rlbwt, alpha: int = DEFAULT_ALPHA) -> LcpContext:
    fli = build_fl(rl, alpha)
    w = text_walk(fli)
    return LcpContext(fli, w.I, w.phi_plus, w.tau, w.step, w.isa_fl)


def permutation_map(rl: Rlbwt, perm: str) -> IntervalMap:
    """Interval map of ``lf``, ``fl``, ``phi`` or ``phi-inv`` for this RLBWT."""
    if perm == "lf":
        return lf_intervals(rl)
    if perm == "fl":
        return fl_intervals(rl)
    if perm in ("phi", "phi-inv"):
        ctx = build_context(rl)
        m = ctx.phi_map()
        return m if perm == "phi" else invert_interval_map(m)
    raise ValueError(f"unknown permutation {perm!r}")
