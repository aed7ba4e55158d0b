"""Irreducible PLCP and the full LCP array straight from an RLBWT.

Text symbols are never stored. A :class:`TextCursor` sits on a row of
MOVE(FL) and reads ``T[pos]`` as the first-column symbol of its interval;
one FL step moves it to ``pos + 1``. Random access jumps to the nearest ISA
sample at or before the target and steps forward from there.

LCP output formats: text is one decimal per line; binary is
``b"LCPA0001" | u64 n | n x u64``, little-endian.
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterator, List, Optional

import numpy as np

from .balancer import DEFAULT_ALPHA, balance
from .errors import FormatError, SinkError
from .rlbwt import LcpContext, Rlbwt, build_context

LCP_MAGIC = b"LCPA0001"


@dataclass
class LcpStats:
    comparisons: int = 0
    sequential_steps: int = 0
    seek_steps: int = 0
    walk_steps: int = 0  # FL steps spent building samples and phi

    @property
    def fl_steps(self) -> int:
        return self.sequential_steps + self.seek_steps

    def as_dict(self) -> dict:
        return {"comparisons": self.comparisons, "sequential_steps": self.sequential_steps,
                "seek_steps": self.seek_steps, "fl_steps": self.fl_steps,
                "walk_steps": self.walk_steps}


@dataclass
class PlcpPlus:
    n: int
    I: List[int]
    values: List[int]
    stats: LcpStats = field(default_factory=LcpStats, compare=False, repr=False)

    @property
    def r(self) -> int:
        return len(self.I)

    def at(self, i: int) -> int:
        """PLCP[i]: the irreducible value before ``i`` minus the distance to it."""
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside [0,{self.n})")
        k = bisect_right(self.I, i) - 1
        return self.values[k] - (i - self.I[k])

    def expand(self) -> np.ndarray:
        """Full PLCP array. O(n) memory, meant for checking."""
        I = np.asarray(self.I + [self.n], dtype=np.int64)
        lens = np.diff(I)
        base = np.repeat(np.asarray(self.values, dtype=np.int64) + I[:-1], lens)
        return base - np.arange(self.n, dtype=np.int64)


def plcp_at(i: int, pp: PlcpPlus) -> int:
    return pp.at(i)


class TextCursor:
    """Reads ``T[pos]`` and advances one position per FL step."""

    __slots__ = ("pos", "row", "rank", "_ms", "_rf")

    def __init__(self, ctx: LcpContext, pos: int, row: int, rank: int):
        self._ms = ctx.fl.ms
        self._rf = ctx.RF
        self.pos = pos
        self.row = row
        self.rank = rank

    @property
    def pair(self):
        return self.row, self.rank

    def symbol(self) -> int:
        return self._rf[self.rank]

    def advance(self, steps: int = 1) -> None:
        move = self._ms.move
        i, j = self.row, self.rank
        for _ in range(steps):
            i, j = move(i, j)
        self.row, self.rank = i, j
        self.pos += steps


def seek(pos: int, ctx: LcpContext, stats: Optional[LcpStats] = None) -> TextCursor:
    if not 0 <= pos < ctx.n:
        raise IndexError(f"position {pos} outside [0,{ctx.n})")
    k, delta = divmod(pos, ctx.step)
    row, rank = ctx.isa_fl[k]
    cur = TextCursor(ctx, k * ctx.step, row, rank)
    cur.advance(delta)
    if stats is not None:
        stats.seek_steps += delta
    return cur


def plcp_from_context(ctx: LcpContext) -> PlcpPlus:
    """Modified phi algorithm over the irreducible positions in text order."""
    n, r = ctx.n, ctx.r
    I, phi = ctx.I, ctx.phi_plus
    st = LcpStats(walk_steps=n)
    rf = ctx.RF
    move = ctx.fl.ms.move
    seq = seek(0, ctx, st)  # i + l never decreases, so one cursor serves all k
    values = [0] * r
    l = 0
    for k in range(r):
        i, j = I[k], phi[k]
        if k:
            l = max(0, l - (i - I[k - 1]))
        if i == j:
            # only suffix; nothing to compare with
            values[k] = 0
            continue
        gap = i + l - seq.pos
        if gap:
            seq.advance(gap)
            st.sequential_steps += gap
        other = seek(j + l, ctx, st)
        a_row, a_rank = seq.row, seq.rank
        b_row, b_rank = other.row, other.rank
        while True:
            st.comparisons += 1
            if rf[a_rank] != rf[b_rank]:
                break
            l += 1
            a_row, a_rank = move(a_row, a_rank)
            b_row, b_rank = move(b_row, b_rank)
            st.sequential_steps += 1
            st.seek_steps += 1
        seq.row, seq.rank = a_row, a_rank
        seq.pos = i + l
        values[k] = l
    return PlcpPlus(n, list(I), values, st)


def irreducible_plcp(rl: Rlbwt, alpha: int = DEFAULT_ALPHA) -> PlcpPlus:
    return plcp_from_context(build_context(rl, alpha))


# -- full LCP ---------------------------------------------------------------

def iter_lcp(ctx: LcpContext, pp: PlcpPlus) -> Iterator[int]:
    """Yield LCP[0], LCP[1], ... by walking the phi^-1 orbit from SA[0] = n-1.

    Balanced MOVE(phi^-1) input intervals are refinements of the phi output
    intervals; the phi interval each one maps into tells which irreducible
    value governs the landing position.
    """
    n = ctx.n
    bp = balance(ctx.phi_map(), ctx.fl.alpha)
    inv = bp.extract_inverse()
    orig = bp.original_input_ranks()
    irr = [orig[m] for m in bp.mate_ordinals(inverse=True)]
    I, vals = pp.I, pp.values
    P, P_pi, P_rank = inv.P, inv.P_pi, inv.P_rank
    y = n - 1
    j = inv.locate(y)
    k = bisect_right(I, y) - 1
    yield vals[k] - (y - I[k])
    for _ in range(n - 1):
        off = y - P[j]
        k = irr[j]
        y = P_pi[j] + off
        j2 = P_rank[j]
        while P[j2 + 1] <= y:
            j2 += 1
        j = j2
        yield vals[k] - (y - I[k])


def lcp_stream(rl: Rlbwt, sink: Callable[[int], object], alpha: int = DEFAULT_ALPHA) -> int:
    """Feed LCP[0..n-1], in order, to ``sink`` one value at a time.

    Returns the number of values delivered. A failing sink is reported as
    :class:`SinkError` carrying how many values it had accepted.
    """
    ctx = build_context(rl, alpha)
    pp = plcp_from_context(ctx)
    count = 0
    for v in iter_lcp(ctx, pp):
        try:
            sink(v)
        except Exception as exc:
            raise SinkError(count, exc) from exc
        count += 1
    return count


def lcp_array(rl: Rlbwt, alpha: int = DEFAULT_ALPHA) -> np.ndarray:
    out = np.empty(rl.n, dtype=np.int64)
    pos = 0

    def put(v):
        nonlocal pos
        out[pos] = v
        pos += 1

    lcp_stream(rl, put, alpha)
    return out


# -- output formats ---------------------------------------------------------

class LcpBinaryWriter:
    """Streams values into the binary LCP format; n is known up front."""

    def __init__(self, fh, n: int, chunk: int = 1 << 16):
        self.fh = fh
        self.n = n
        self.buf: List[int] = []
        self.chunk = chunk
        self.written = 0
        fh.write(LCP_MAGIC + np.uint64(n).astype("<u8").tobytes())

    def __call__(self, v: int) -> None:
        self.buf.append(v)
        if len(self.buf) >= self.chunk:
            self.flush()

    def flush(self) -> None:
        if self.buf:
            self.fh.write(np.asarray(self.buf, dtype="<u8").tobytes())
            self.written += len(self.buf)
            self.buf.clear()


def encode_lcp_binary(values) -> bytes:
    arr = np.asarray(values, dtype="<u8")
    return LCP_MAGIC + np.uint64(arr.size).astype("<u8").tobytes() + arr.tobytes()


def decode_lcp_binary(data: bytes) -> np.ndarray:
    if data[:len(LCP_MAGIC)] != LCP_MAGIC:
        raise FormatError("bad magic", 0)
    if len(data) < 16:
        raise FormatError("truncated header", len(data))
    n = int(np.frombuffer(data, dtype="<u8", count=1, offset=8)[0])
    if len(data) != 16 + 8 * n:
        raise FormatError(f"body holds {(len(data) - 16) // 8} values, header says {n}", 16)
    return np.frombuffer(data, dtype="<u8", offset=16).astype(np.int64)


def format_plcp_text(pp: PlcpPlus) -> str:
    return "".join(f"{i} {v}\n" for i, v in zip(pp.I, pp.values))
