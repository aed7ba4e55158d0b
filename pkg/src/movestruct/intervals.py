"""Interval representation of runny permutations.

A permutation ``pi`` over ``[0, n)`` is stored as ``r`` input intervals
``[P[j], P[j+1])`` that each map contiguously onto ``[P_pi[j], P_pi[j] + len)``.
``tau`` records where each input interval lands among the sorted output
interval starts.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class IntervalMap:
    n: int
    r: int
    P: List[int]  # r + 1 entries, P[r] == n
    P_pi: List[int]
    tau: List[int]

    def lengths(self) -> List[int]:
        P = self.P
        return [P[j + 1] - P[j] for j in range(self.r)]


@dataclass(frozen=True)
class OutputStarts:
    Q: List[int]  # r + 1 entries, Q[r] == n
    tau_inv: List[int]


def intervals_from_permutation(pi) -> IntervalMap:
    """Build the minimal interval map of an explicit permutation.

    A new interval starts at 0 and at every ``i`` with ``pi[i-1] + 1 != pi[i]``.
    """
    arr = np.asarray(pi, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("permutation must be a non-empty 1-d sequence")
    n = int(arr.size)
    bad = np.flatnonzero((arr < 0) | (arr >= n))
    if bad.size:
        i = int(bad[0])
        raise ValidationError(f"value {int(arr[i])} out of range [0,{n}) at index {i}")
    # any index holding a value already seen earlier is an offender
    order = np.argsort(arr, kind="stable")
    dup = np.flatnonzero(arr[order][1:] == arr[order][:-1])
    if dup.size:
        offenders = order[dup + 1]
        i = int(offenders.min())
        raise ValidationError(f"duplicate value {int(arr[i])} at index {i}")

    starts = np.concatenate(([0], np.flatnonzero(arr[1:] != arr[:-1] + 1) + 1))
    P = starts.tolist() + [n]
    P_pi = arr[starts].tolist()
    tau = np.argsort(np.argsort(arr[starts], kind="stable"), kind="stable").tolist()
    return IntervalMap(n=n, r=len(P_pi), P=P, P_pi=P_pi, tau=tau)


def invert_tau(tau: Sequence[int]) -> List[int]:
    r = len(tau)
    inv = [-1] * r
    for j, k in enumerate(tau):
        if not 0 <= k < r:
            raise ValidationError(f"tau value {k} out of range at index {j}")
        if inv[k] != -1:
            raise ValidationError(f"duplicate rank {k} in tau at index {j}")
        inv[k] = j
    return inv


def output_starts(imap: IntervalMap) -> OutputStarts:
    tau_inv = invert_tau(imap.tau)
    P_pi = imap.P_pi
    Q = [P_pi[j] for j in tau_inv]
    Q.append(imap.n)
    for k in range(1, len(Q)):
        if Q[k] <= Q[k - 1]:
            raise ValidationError(f"Q not strictly increasing at index {k}: P_pi and tau disagree")
    return OutputStarts(Q=Q, tau_inv=tau_inv)


def validate_interval_map(imap: IntervalMap) -> Optional[str]:
    """Return a description of the first violated invariant, or None."""
    n, r, P, P_pi, tau = imap.n, imap.r, imap.P, imap.P_pi, imap.tau
    if n < 1:
        return "n must be at least 1"
    if r < 1:
        return "r must be at least 1"
    if len(P) != r + 1:
        return f"P has {len(P)} entries, expected r+1={r + 1}"
    if len(P_pi) != r:
        return f"P_pi has {len(P_pi)} entries, expected r={r}"
    if len(tau) != r:
        return f"tau has {len(tau)} entries, expected r={r}"
    if P[0] != 0:
        return "P[0] must be 0"
    for j in range(1, r + 1):
        if P[j] <= P[j - 1]:
            return f"P not strictly increasing at index {j}"
    if P[r] != n:
        return f"P[r] must equal n={n}"
    for j, v in enumerate(P_pi):
        if not 0 <= v < n:
            return f"P_pi[{j}]={v} out of range"
    if len(set(P_pi)) != r:
        return "P_pi not distinct"
    if sorted(tau) != list(range(r)):
        return "tau is not a permutation of [0,r)"
    try:
        Q = output_starts(imap).Q
    except ValidationError as exc:
        return str(exc)
    if Q[0] != 0:
        return "no interval maps onto 0"
    tau_inv = invert_tau(tau)
    for k in range(r):
        j = tau_inv[k]
        if Q[k + 1] - Q[k] != P[j + 1] - P[j]:
            return f"input interval {j} and output interval {k} differ in length"
    return None


def check_interval_map(imap: IntervalMap) -> IntervalMap:
    """Raise ValidationError unless ``imap`` is valid; returns it otherwise."""
    problem = validate_interval_map(imap)
    if problem is not None:
        raise ValidationError(problem)
    return imap


def invert_interval_map(imap: IntervalMap) -> IntervalMap:
    """Interval map of the inverse permutation.

    Output intervals of ``pi`` become input intervals of ``pi^-1``.
    """
    out = output_starts(imap)
    P = imap.P
    return IntervalMap(
        n=imap.n,
        r=imap.r,
        P=list(out.Q),
        P_pi=[P[j] for j in out.tau_inv],
        tau=list(out.tau_inv),
    )
