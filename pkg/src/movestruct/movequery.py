"""Balanced move structures: constant-time move queries and a binary format.

Binary layout (little-endian, no padding)::

    b"MVST0001" | u64 n | u64 r' | u32 alpha | u32 0 | (r'+1) x u64 P'
                | r' x u64 P'_pi | r' x u64 P_rank
"""

from bisect import bisect_right
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import FormatError, ValidationError

MAGIC = b"MVST0001"
_HEADER = np.dtype([("n", "<u8"), ("r", "<u8"), ("alpha", "<u4"), ("reserved", "<u4")])
HEADER_SIZE = len(MAGIC) + _HEADER.itemsize


class MoveStructure:
    """Query-ready move structure ``(P', P'_pi, P_rank)`` over ``[0, n)``.

    Treated as immutable once built. ``move`` is the O(1) query when the
    structure is balanced; ``move_checked`` additionally enforces the
    ``P'[j] <= i < P'[j+1]`` contract.
    """

    __slots__ = ("n", "alpha", "P", "P_pi", "P_rank", "r_prime")

    def __init__(self, n: int, alpha: int, P: Sequence[int], P_pi: Sequence[int],
                 P_rank: Sequence[int], validate: bool = True):
        self.n = int(n)
        self.alpha = int(alpha)
        self.P = list(P)
        self.P_pi = list(P_pi)
        self.P_rank = list(P_rank)
        self.r_prime = len(self.P_pi)
        if validate:
            problem = validate_move_structure(self)
            if problem is not None:
                raise ValidationError(problem)

    def __eq__(self, other):
        if not isinstance(other, MoveStructure):
            return NotImplemented
        return (self.n == other.n and self.alpha == other.alpha and self.P == other.P
                and self.P_pi == other.P_pi and self.P_rank == other.P_rank)

    def __repr__(self):
        return f"MoveStructure(n={self.n}, r_prime={self.r_prime}, alpha={self.alpha})"

    def move(self, i: int, j: int) -> Tuple[int, int]:
        """Return ``(pi(i), rank of its interval)`` given ``i`` lies in interval ``j``."""
        P = self.P
        y = self.P_pi[j] + (i - P[j])
        k = self.P_rank[j]
        while P[k + 1] <= y:
            k += 1
        return y, k

    def move_checked(self, i: int, j: int) -> Tuple[int, int]:
        if not 0 <= j < self.r_prime or not self.P[j] <= i < self.P[j + 1]:
            raise ValidationError(f"position {i} is not in interval {j}")
        return self.move(i, j)

    def move_with_scan(self, i: int, j: int) -> Tuple[int, int, int]:
        """Like :meth:`move` but also reports how many intervals were skipped."""
        P = self.P
        y = self.P_pi[j] + (i - P[j])
        k = start = self.P_rank[j]
        while P[k + 1] <= y:
            k += 1
        return y, k, k - start

    def locate(self, i: int) -> int:
        """Rank of the interval containing ``i`` (binary search)."""
        if not 0 <= i < self.n:
            raise IndexError(f"position {i} outside [0,{self.n})")
        return bisect_right(self.P, i) - 1

    def iterate(self, i0: int, j0: int, steps: int) -> Iterator[Tuple[int, int]]:
        """Yield ``steps`` pairs of the orbit starting at ``(i0, j0)``.

        The first pair is the start itself.
        """
        if steps > 0 and not self.P[j0] <= i0 < self.P[j0 + 1]:
            raise ValidationError(f"position {i0} is not in interval {j0}")
        i, j = i0, j0
        move = self.move
        for _ in range(steps):
            yield i, j
            i, j = move(i, j)

    def to_permutation(self) -> np.ndarray:
        """Expand to an explicit permutation array (vectorized)."""
        P = np.asarray(self.P, dtype=np.int64)
        lens = np.diff(P)
        base = np.repeat(np.asarray(self.P_pi, dtype=np.int64) - P[:-1], lens)
        return base + np.arange(self.n, dtype=np.int64)

    def output_weights(self) -> np.ndarray:
        """Number of input starts strictly inside each output interval."""
        P = np.asarray(self.P, dtype=np.int64)
        Q = np.sort(np.asarray(self.P_pi, dtype=np.int64))
        Q = np.append(Q, self.n)
        hi = np.searchsorted(P, Q[1:], side="left")
        lo = np.searchsorted(P, Q[:-1], side="right")
        return hi - lo

    def max_scan(self) -> int:
        w = self.output_weights()
        return int(w.max()) if w.size else 0

    # -- serialization -------------------------------------------------------

    def to_bytes(self) -> bytes:
        head = np.zeros(1, dtype=_HEADER)
        head["n"] = self.n
        head["r"] = self.r_prime
        head["alpha"] = self.alpha
        return b"".join((
            MAGIC,
            head.tobytes(),
            np.asarray(self.P, dtype="<u8").tobytes(),
            np.asarray(self.P_pi, dtype="<u8").tobytes(),
            np.asarray(self.P_rank, dtype="<u8").tobytes(),
        ))

    @classmethod
    def from_bytes(cls, data: bytes, validate: bool = True) -> "MoveStructure":
        if len(data) < len(MAGIC):
            raise FormatError("missing magic", 0)
        if data[:len(MAGIC)] != MAGIC:
            raise FormatError("bad magic", 0)
        if len(data) < HEADER_SIZE:
            raise FormatError("truncated header", len(data))
        head = np.frombuffer(data, dtype=_HEADER, count=1, offset=len(MAGIC))[0]
        n, r, alpha = int(head["n"]), int(head["r"]), int(head["alpha"])
        if int(head["reserved"]) != 0:
            raise FormatError("reserved header field is not zero", len(MAGIC) + 20)
        # guard before allocating: every field is 8 bytes
        expected = HEADER_SIZE + 8 * (3 * r + 1)
        if r > (len(data) // 8) or len(data) < expected:
            raise FormatError(f"truncated body, expected {expected} bytes", len(data))
        if len(data) > expected:
            raise FormatError("trailing bytes after body", expected)
        body = np.frombuffer(data, dtype="<u8", offset=HEADER_SIZE)
        P = body[: r + 1].tolist()
        P_pi = body[r + 1: 2 * r + 1].tolist()
        P_rank = body[2 * r + 1:].tolist()
        ms = cls(n, alpha, P, P_pi, P_rank, validate=False)
        if validate:
            problem = validate_move_structure(ms)
            if problem is not None:
                raise FormatError(f"invalid structure: {problem}", _field_offset(problem, r))
        return ms


def _field_offset(problem: str, r: int) -> Optional[int]:
    # best-effort byte offset of the array the problem refers to
    if problem.startswith("P_prime"):
        return HEADER_SIZE
    if problem.startswith("P_pi_prime"):
        return HEADER_SIZE + 8 * (r + 1)
    if problem.startswith("P_rank"):
        return HEADER_SIZE + 8 * (2 * r + 1)
    return None


def validate_move_structure(ms: MoveStructure, check_balance: bool = True) -> Optional[str]:
    """Return the first violated invariant as text, or None."""
    n, r, P, P_pi, P_rank = ms.n, ms.r_prime, ms.P, ms.P_pi, ms.P_rank
    if n < 1:
        return "n must be at least 1"
    if r < 1:
        return "r_prime must be at least 1"
    if ms.alpha < 2:
        return f"alpha={ms.alpha} below 2"
    if len(P) != r + 1 or len(P_rank) != r:
        return "array lengths inconsistent with r_prime"
    if P[0] != 0:
        return "P_prime[0] must be 0"
    for j in range(1, r + 1):
        if P[j] <= P[j - 1]:
            return f"P_prime not strictly increasing at index {j}"
    if P[r] != n:
        return f"P_prime sentinel {P[r]} differs from n={n}"
    for j in range(r):
        if not 0 <= P_pi[j] < n:
            return f"P_pi_prime[{j}]={P_pi[j]} out of range"
    Q = sorted(range(r), key=P_pi.__getitem__)
    prev_end = 0
    for j in Q:
        if P_pi[j] != prev_end:
            return f"P_pi_prime does not tile [0,n) near interval {j}"
        prev_end = P_pi[j] + P[j + 1] - P[j]
    if prev_end != n:
        return "P_pi_prime does not tile [0,n)"
    for j in range(r):
        k = P_rank[j]
        if not 0 <= k < r or not P[k] <= P_pi[j] < P[k + 1]:
            return f"P_rank[{j}]={k} is not the interval containing P_pi_prime[{j}]"
    if check_balance:
        w = ms.output_weights()
        bad = np.flatnonzero(w >= 2 * ms.alpha)
        if bad.size:
            return f"output interval {int(bad[0])} has weight {int(w[bad[0]])} >= 2*alpha"
    return None


def move_query(ms: MoveStructure, i: int, j: int) -> Tuple[int, int]:
    return ms.move_checked(i, j)


def locate(ms: MoveStructure, i: int) -> int:
    return ms.locate(i)


def iterate(ms: MoveStructure, i0: int, j0: int, steps: int) -> Iterator[Tuple[int, int]]:
    return ms.iterate(i0, j0, steps)


def serialize(ms: MoveStructure) -> bytes:
    return ms.to_bytes()


def deserialize(data: bytes, validate: bool = True) -> MoveStructure:
    return MoveStructure.from_bytes(data, validate)


def input_weights(starts: Sequence[int], images: Sequence[int], n: int) -> List[int]:
    """Number of output starts strictly inside each input interval."""
    P = np.asarray(starts, dtype=np.int64)
    Q = np.sort(np.asarray(images, dtype=np.int64))
    lo = np.searchsorted(Q, P[:-1], side="right")
    hi = np.searchsorted(Q, P[1:], side="left")
    return (hi - lo).tolist()
