"""Brute-force references for testing.

Nothing here is fast or part of the production path: suffix structures are
built by prefix doubling over explicit text, permutations are expanded to
explicit arrays, and balancing repeatedly rescans every interval.
"""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .errors import ValidationError
from .intervals import IntervalMap
from .movequery import MoveStructure

MAX_TEXT = 100_000


@dataclass(frozen=True)
class SuffixStructures:
    text: bytes  # terminator encoded as 0x00
    SA: np.ndarray
    ISA: np.ndarray
    BWT: bytes
    runs: List[Tuple[int, int]]
    LCP: np.ndarray
    PLCP: np.ndarray

    @property
    def n(self) -> int:
        return len(self.text)


def encode_text(text) -> bytes:
    """Normalize a test text: a trailing ``$`` (str) becomes the 0x00 terminator."""
    if isinstance(text, str):
        if not text.endswith("$"):
            raise ValidationError("text must end with the terminator '$'")
        data = text[:-1].encode("latin-1") + b"\x00"
    else:
        data = bytes(text)
    if not data or data[-1] != 0 or data.count(0) != 1:
        raise ValidationError("text needs exactly one terminator, at the end")
    return data


def naive_suffix_array(data: bytes) -> np.ndarray:
    n = len(data)
    if n > MAX_TEXT:
        raise ValidationError(f"oracle text too long ({n} > {MAX_TEXT})")
    rank = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    sa = np.arange(n)
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        if k < n:
            second[: n - k] = rank[k:]
        sa = np.lexsort((second, rank))
        key = np.stack((rank[sa], second[sa]), axis=1)
        change = np.any(key[1:] != key[:-1], axis=1)
        new = np.empty(n, dtype=np.int64)
        new[sa] = np.concatenate(([0], np.cumsum(change)))
        rank = new
        if rank.max() == n - 1 or k >= n:
            break
        k *= 2
    return sa


def lcp_pair(data: bytes, a: int, b: int) -> int:
    m = 0
    n = len(data)
    while a + m < n and b + m < n and data[a + m] == data[b + m]:
        m += 1
    return m


def naive_suffix_structures(text) -> SuffixStructures:
    data = encode_text(text)
    n = len(data)
    sa = naive_suffix_array(data)
    isa = np.empty(n, dtype=np.int64)
    isa[sa] = np.arange(n)
    bwt = bytes(data[(int(p) - 1) % n] for p in sa)
    lcp = np.zeros(n, dtype=np.int64)
    for i in range(1, n):
        lcp[i] = lcp_pair(data, int(sa[i - 1]), int(sa[i]))
    plcp = lcp[isa]
    return SuffixStructures(data, sa, isa, bwt, run_length(bwt), lcp, plcp)


def run_length(seq: bytes) -> List[Tuple[int, int]]:
    runs: List[Tuple[int, int]] = []
    for c in seq:
        if runs and runs[-1][0] == c:
            runs[-1] = (c, runs[-1][1] + 1)
        else:
            runs.append((c, 1))
    return runs


# -- permutations -----------------------------------------------------------

def expand_interval_map(imap: IntervalMap) -> np.ndarray:
    pi = np.empty(imap.n, dtype=np.int64)
    for j in range(imap.r):
        s, e = imap.P[j], imap.P[j + 1]
        pi[s:e] = np.arange(imap.P_pi[j], imap.P_pi[j] + e - s)
    return pi


def naive_move(imap: IntervalMap, i: int) -> int:
    if not 0 <= i < imap.n:
        raise IndexError(f"position {i} outside [0,{imap.n})")
    j = 0
    while imap.P[j + 1] <= i:
        j += 1
    return imap.P_pi[j] + (i - imap.P[j])


def naive_pred_rank(starts: Sequence[int], x: int) -> int:
    j = 0
    while j + 1 < len(starts) and starts[j + 1] <= x:
        j += 1
    return j


def naive_move_structure(imap: IntervalMap, alpha: int) -> MoveStructure:
    ranks = [bisect_right(imap.P, y) - 1 for y in imap.P_pi]
    return MoveStructure(imap.n, alpha, imap.P, imap.P_pi, ranks, validate=False)


def _map_from_pairs(n: int, pairs) -> IntervalMap:
    pairs = sorted(pairs)
    P = [p for p, _ in pairs] + [n]
    P_pi = [q for _, q in pairs]
    order = sorted(range(len(P_pi)), key=P_pi.__getitem__)
    tau = [0] * len(P_pi)
    for k, j in enumerate(order):
        tau[j] = k
    return IntervalMap(n=n, r=len(P_pi), P=P, P_pi=P_pi, tau=tau)


def naive_balance(imap: IntervalMap, alpha: int) -> IntervalMap:
    """Split heavy intervals in either direction until none remain.

    Output intervals are examined before input intervals on each pass, and a
    heavy interval is split at the (alpha+1)-th largest opposite start it
    contains, mirrored into its partner.
    """
    if alpha < 2:
        raise ValidationError("alpha must be at least 2")
    n = imap.n
    pairs = list(zip(imap.P[:-1], imap.P_pi))
    while True:
        pairs.sort()
        P = [p for p, _ in pairs]
        by_image = sorted(range(len(pairs)), key=lambda j: pairs[j][1])
        Q = [pairs[j][1] for j in by_image]
        split = None
        for k, j in enumerate(by_image):
            q_s = Q[k]
            q_e = Q[k + 1] if k + 1 < len(Q) else n
            inside = P[bisect_right(P, q_s): bisect_left(P, q_e)]
            if len(inside) >= 2 * alpha:
                split = (j, inside[-alpha - 1] - q_s)
                break
        if split is None:
            for j in range(len(P)):
                p_s = P[j]
                p_e = P[j + 1] if j + 1 < len(P) else n
                inside = Q[bisect_right(Q, p_s): bisect_left(Q, p_e)]
                if len(inside) >= 2 * alpha:
                    split = (j, inside[-alpha - 1] - p_s)
                    break
        if split is None:
            return _map_from_pairs(n, pairs)
        j, d = split
        p, q = pairs[j]
        pairs.append((p + d, q + d))


def weights(starts: Sequence[int], images: Sequence[int], n: int):
    """(output weights, input weights) of an interval set, by brute force."""
    P = list(starts[:len(images)])
    Q = sorted(images)
    Qx = Q + [n]
    Px = P + [n]
    out_w = [sum(1 for p in P if Qx[k] < p < Qx[k + 1]) for k in range(len(Q))]
    in_w = [sum(1 for q in Q if Px[j] < q < Px[j + 1]) for j in range(len(P))]
    return out_w, in_w


# -- random inputs ----------------------------------------------------------

def random_interval_map(rng: np.random.Generator, n: int, r: int) -> IntervalMap:
    """Cut ``[0,n)`` into ``r`` pieces and lay their images out in shuffled order."""
    r = max(1, min(r, n))
    cuts = np.sort(rng.choice(np.arange(1, n), size=r - 1, replace=False)) if r > 1 else np.array([], dtype=np.int64)
    P = np.concatenate(([0], cuts, [n])).astype(np.int64)
    lens = np.diff(P)
    order = rng.permutation(r)
    images = np.empty(r, dtype=np.int64)
    images[order] = np.concatenate(([0], np.cumsum(lens[order])[:-1]))
    tau = np.empty(r, dtype=np.int64)
    tau[order] = np.arange(r)
    return IntervalMap(n=n, r=r, P=P.tolist(), P_pi=images.tolist(), tau=tau.tolist())


def random_text(rng: np.random.Generator, n: int, sigma: int) -> bytes:
    """Random text of total length ``n`` (terminator included) over ``sigma`` letters."""
    letters = np.frombuffer(b"ACGTacgtEFHIJKLM", dtype=np.uint8)[:sigma]
    body = rng.choice(letters, size=n - 1)
    return body.tobytes() + b"\x00"


def repetitive_text(rng: np.random.Generator, n: int, sigma: int, mutation: float = 0.02) -> bytes:
    """Text made of mutated copies of a short seed: few BWT runs."""
    letters = np.frombuffer(b"ACGTacgtEFHIJKLM", dtype=np.uint8)[:sigma]
    seed_len = max(1, min(n - 1, int(rng.integers(8, 64))))
    seed = rng.choice(letters, size=seed_len)
    reps = -(-(n - 1) // seed_len)
    body = np.tile(seed, reps)[: n - 1].copy()
    mask = rng.random(n - 1) < mutation
    body[mask] = rng.choice(letters, size=int(mask.sum()))
    return body.tobytes() + b"\x00"
