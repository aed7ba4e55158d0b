"""Linear-time simultaneous balancing of input and output intervals.

Two sorted singly linked lists are kept, one over input starts (``P``) and one
over output starts (``Q``). Each node carries its start, a ``next`` link, a
``mate`` link to the node it maps to (or from) in the other list, and a
``pred`` link to the predecessor of its start in the other list. Links are
slot numbers into preallocated arenas.

A sweep position ``t`` moves left to right. Everything strictly left of ``t``
is balanced in both directions and every ``pred`` link at or left of ``t`` is
correct. Each iteration examines the interval containing ``t`` with the
smallest start, splits it if heavy, mirrors the split into its mate, repairs
whatever the mirrored split disturbed behind ``t``, and advances ``t``.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional

from .errors import CapacityError, ParameterError, StateError
from .intervals import IntervalMap, invert_tau
from .movequery import MoveStructure

log = logging.getLogger(__name__)

DEFAULT_ALPHA = 4
MAX_ALPHA = 2**63 - 1


def arena_capacity(r: int, alpha: int) -> int:
    """Nodes per arena: the interval-count bound plus one sentinel."""
    return ((alpha + 1) * r + alpha - 2) // (alpha - 1) + 1


def check_alpha(alpha) -> int:
    if isinstance(alpha, bool) or not isinstance(alpha, int):
        raise ParameterError(f"alpha must be an integer, got {alpha!r}")
    if not 2 <= alpha <= MAX_ALPHA:
        raise ParameterError(f"alpha must be in [2, 2^63), got {alpha}")
    return alpha


class _Arena:
    """Node store for one list. Slots ``0..r-1`` hold the initial intervals in
    sorted order, slot ``r`` is the sentinel at position ``n``, later slots are
    appended by splits."""

    __slots__ = ("idx", "nxt", "mate", "pred", "size", "cap", "name")

    def __init__(self, name: str, cap: int):
        self.name = name
        self.cap = cap
        self.idx = [0] * cap
        self.nxt = [-1] * cap
        self.mate = [-1] * cap
        self.pred = [-1] * cap
        self.size = 0

    def new(self, idx: int, nxt: int) -> int:
        slot = self.size
        if slot == self.cap:
            raise CapacityError(
                f"arena {self.name} full at {self.cap} nodes; interval-count bound violated"
            )
        self.size = slot + 1
        self.idx[slot] = idx
        self.nxt[slot] = nxt
        return slot

    def slots_in_order(self, head: int = 0) -> List[int]:
        out = []
        s = head
        nxt = self.nxt
        while nxt[s] != -1:
            out.append(s)
            s = nxt[s]
        return out  # sentinel excluded


@dataclass
class BalanceStats:
    r: int = 0
    r_prime: int = 0
    alpha: int = 0
    insertions: int = 0
    cascade_splits: int = 0
    iterations: int = 0
    walk_steps: int = 0  # merged two-finger steps of the sweep, ties counted once
    scan_steps: int = 0  # nodes touched by weight scans and pred repairs
    init_steps: int = 0
    max_split_work: int = 0

    @property
    def total_steps(self) -> int:
        return self.iterations + self.walk_steps + self.scan_steps + self.init_steps

    def as_dict(self) -> dict:
        d = {k: getattr(self, k) for k in self.__dataclass_fields__}
        d["total_steps"] = self.total_steps
        return d


class DualLists:
    """Mutable balancing state. Not thread-safe; use once via :meth:`run`."""

    def __init__(self, imap: IntervalMap, alpha: int = DEFAULT_ALPHA):
        self.alpha = check_alpha(alpha)
        self.n = n = imap.n
        self.r = r = imap.r
        cap = arena_capacity(r, alpha)
        self.P = P = _Arena("P", cap)
        self.Q = Q = _Arena("Q", cap)
        self.stats = BalanceStats(r=r, alpha=alpha)

        tau = imap.tau
        tau_inv = invert_tau(tau)
        P_pi = imap.P_pi
        for j in range(r):
            P.new(imap.P[j], j + 1)
            P.mate[j] = tau[j]
        for k in range(r):
            Q.new(P_pi[tau_inv[k]], k + 1)
            Q.mate[k] = tau_inv[k]
        P.new(n, -1)
        Q.new(n, -1)
        P.mate[r] = r
        Q.mate[r] = r
        P.pred[r] = r
        Q.pred[r] = r

        # both lists start at position 0
        P.pred[0] = 0
        Q.pred[0] = 0
        self.t = 0
        self.p_t = 0
        self.q_t = 0
        before = self.stats.walk_steps
        self._advance(0, n - 1)
        self.stats.init_steps = self.stats.walk_steps - before
        self.stats.walk_steps = before
        self.p_t = 0
        self.q_t = 0
        self.finished = False
        self._trace = None

    @property
    def insertion_count(self) -> int:
        return self.stats.insertions

    # -- sweep bookkeeping -------------------------------------------------

    def _advance(self, t_old: int, t_new: int) -> None:
        """Move p_t/q_t to the nodes containing ``t_new``, setting pred links
        of every node with start in ``(t_old, t_new]`` by a merged walk."""
        P, Q = self.P, self.Q
        pidx, qidx, pnxt, qnxt = P.idx, Q.idx, P.nxt, Q.nxt
        ppred, qpred = P.pred, Q.pred
        pc, qc = self.p_t, self.q_t
        pn, qn = pnxt[pc], qnxt[qc]
        steps = 0
        while True:
            a = pidx[pn]
            b = qidx[qn]
            if a > t_new and b > t_new:
                break
            steps += 1
            if a == b:
                if a > t_old:
                    ppred[pn] = qn
                    qpred[qn] = pn
                pc, pn = pn, pnxt[pn]
                qc, qn = qn, qnxt[qn]
            elif a < b:
                if a > t_old:
                    ppred[pn] = qc
                pc, pn = pn, pnxt[pn]
            else:
                if b > t_old:
                    qpred[qn] = pc
                qc, qn = qn, qnxt[qn]
        self.p_t, self.q_t = pc, qc
        self.stats.walk_steps += steps

    def _scan(self, A: _Arena, B: _Arena, a: int, limit: int) -> List[int]:
        """B-nodes strictly inside A-interval ``a``, at most ``limit``."""
        a_e = A.idx[A.nxt[a]]
        bidx, bnxt = B.idx, B.nxt
        b = bnxt[A.pred[a]]
        window = []
        while bidx[b] < a_e and len(window) < limit:
            window.append(b)
            b = bnxt[b]
        self.stats.scan_steps += len(window) + 1
        return window

    def _split(self, A: _Arena, B: _Arena, a: int, window: List[int], k: int, valid: int) -> int:
        """Split A-interval ``a`` at the start of B-node ``window[k]`` and
        mirror the split into its mate. Pred links are repaired for nodes at
        or left of ``valid``. Returns the new B-node."""
        xb = window[k]
        x = B.idx[xb]
        a_s = A.idx[a]
        ax = A.new(x, A.nxt[a])
        A.nxt[a] = ax
        A.pred[ax] = xb
        bpred = B.pred
        for b in window[k:]:
            bpred[b] = ax
        work = len(window) - k

        bm = A.mate[a]
        xp = B.idx[bm] + (x - a_s)
        bx = B.new(xp, B.nxt[bm])
        B.nxt[bm] = bx
        A.mate[ax] = bx
        B.mate[bx] = ax

        if xp <= valid:
            aidx, anxt, apred = A.idx, A.nxt, A.pred
            c = bpred[bm]
            while aidx[anxt[c]] <= xp:
                c = anxt[c]
                work += 1
            bpred[bx] = c
            b_e = B.idx[B.nxt[bx]]
            if aidx[c] != xp:
                c = anxt[c]
            while aidx[c] < b_e and aidx[c] <= valid:
                apred[c] = bx
                c = anxt[c]
                work += 1
        self.stats.insertions += 1
        self.stats.scan_steps += work
        return bx

    def _heavy_split(self, A: _Arena, B: _Arena, a: int, valid: int):
        """Weight-check A-interval ``a``; split it if heavy.

        Returns ``(window, new_b)`` where ``new_b`` is None when light.
        """
        alpha = self.alpha
        before = self.stats.scan_steps
        window = self._scan(A, B, a, 2 * alpha + 1)
        if len(window) < 2 * alpha:
            return window, None
        # (alpha+1)-th largest start among those scanned
        k = len(window) - alpha - 1
        if self._trace is not None:
            self._trace("before_split", self, A.name)
        bx = self._split(A, B, a, window, k, valid)
        work = self.stats.scan_steps - before
        if work > self.stats.max_split_work:
            self.stats.max_split_work = work
        if self._trace is not None:
            self._trace("after_split", self, A.name)
        return window, bx

    def _cascade(self, A: _Arena, B: _Arena, b: int) -> None:
        """Re-balance behind the sweep after B-node ``b`` landed left of t."""
        t = self.t
        while B.idx[b] < t:
            a = B.pred[b]
            if A.idx[a] == B.idx[b]:
                return
            _, nb = self._heavy_split(A, B, a, t)
            if nb is None:
                return
            self.stats.cascade_splits += 1
            b = nb

    # -- driver ------------------------------------------------------------

    def run(self, trace: Optional[Callable] = None) -> "BalancedPair":
        if self.finished:
            raise StateError("lists already balanced")
        self._trace = trace
        P, Q = self.P, self.Q
        n = self.n
        st = self.stats
        while self.t < n:
            st.iterations += 1
            t_old = self.t
            pc, qc = self.p_t, self.q_t
            ps, qs = P.idx[pc], Q.idx[qc]
            pe, qe = P.idx[P.nxt[pc]], Q.idx[Q.nxt[qc]]
            pending = None
            if ps < qs or (ps == qs and pe > qe):
                A, B, a = P, Q, pc
            elif qs < ps or qe > pe:
                A, B, a = Q, P, qc
            else:
                A = None
            if A is None:
                t_new = pe
            else:
                window, pending = self._heavy_split(A, B, a, t_old)
                if pending is None:
                    t_new = A.idx[A.nxt[a]]
                else:
                    t_new = B.idx[window[len(window) - self.alpha - 1]]
            self._advance(t_old, min(t_new, n - 1))
            self.t = t_new
            if pending is not None and B.idx[pending] < t_new:
                self._cascade(A, B, pending)
            if trace is not None:
                trace("iteration", self, None)
        self.finished = True
        self._trace = None
        st.r_prime = P.size - 1
        if P.size != Q.size:
            raise CapacityError("arena occupancy diverged")
        log.debug("balanced r=%d -> r'=%d (alpha=%d)", self.r, st.r_prime, self.alpha)
        return BalancedPair(self)

    # -- debugging ---------------------------------------------------------

    def check_invariants(self) -> Optional[str]:
        """Check the balanced-up-to and pred-validity invariants at the
        current ``t`` by brute force. Returns a description or None."""
        t, two = self.t, 2 * self.alpha
        if self.P.size != self.Q.size:
            return "arena occupancy differs"
        for A, B in ((self.P, self.Q), (self.Q, self.P)):
            a_slots = A.slots_in_order()
            b_starts = [B.idx[s] for s in B.slots_in_order()]
            b_slots = B.slots_in_order()
            for s in a_slots:
                s_idx = A.idx[s]
                if s_idx <= t:
                    want = max(i for i, v in enumerate(b_starts) if v <= s_idx)
                    if A.pred[s] != b_slots[want]:
                        return f"{A.name} node at {s_idx} has stale pred"
                if s_idx < t:
                    end = min(t, A.idx[A.nxt[s]])
                    w = sum(1 for v in b_starts if s_idx < v < end)
                    if w >= two:
                        return f"{A.name} interval at {s_idx} heavy below t={t}"
        return None


class BalancedPair:
    """Finished balancing state from which both directions are extracted."""

    def __init__(self, lists: DualLists):
        if not lists.finished:
            raise StateError("balancing not finished")
        self.lists = lists
        self.n = lists.n
        self.alpha = lists.alpha
        self.r = lists.r
        self.r_prime = lists.stats.r_prime
        self.stats = lists.stats

    def _extract(self, A: _Arena, B: _Arena) -> MoveStructure:
        a_order = A.slots_in_order()
        a_ord = {s: i for i, s in enumerate(a_order)}
        starts = [A.idx[s] for s in a_order]
        starts.append(self.n)
        images = [B.idx[A.mate[s]] for s in a_order]
        ranks = [a_ord[B.pred[A.mate[s]]] for s in a_order]
        return MoveStructure(self.n, self.alpha, starts, images, ranks, validate=False)

    def extract_forward(self) -> MoveStructure:
        """MOVE(pi): input starts from the P list."""
        return self._extract(self.lists.P, self.lists.Q)

    def extract_inverse(self) -> MoveStructure:
        """MOVE(pi^-1): input starts from the Q list."""
        return self._extract(self.lists.Q, self.lists.P)

    def output_origins(self, inverse: bool = False):
        """For each balanced input interval (in order) of the chosen direction,
        report which original output intervals its image touches.

        Returns ``(head, tail)``: ``head[j]`` is ``k`` when the image of
        interval ``j`` starts exactly at original output interval ``k``, else
        -1; ``tail[j]`` is ``k`` when the image ends exactly where original
        output interval ``k`` ends, else -1. Inserted starts always fall
        strictly inside an original interval, so slot numbers below ``r``
        identify original starts.
        """
        A, B = (self.lists.Q, self.lists.P) if inverse else (self.lists.P, self.lists.Q)
        r = self.r
        head, tail = [], []
        for s in A.slots_in_order():
            m = A.mate[s]
            head.append(m if m < r else -1)
            nm = B.nxt[m]
            tail.append(nm - 1 if nm <= r else -1)
        return head, tail

    def original_input_ranks(self, inverse: bool = False) -> List[int]:
        """For each balanced input interval, the rank of the original input
        interval containing it."""
        A = self.lists.Q if inverse else self.lists.P
        r = self.r
        out = []
        cur = -1
        for s in A.slots_in_order():
            if s < r:
                cur = s
            out.append(cur)
        return out

    def mate_ordinals(self, inverse: bool = False) -> List[int]:
        """For each balanced input interval, the ordinal of its mate among the
        balanced output intervals."""
        A, B = (self.lists.Q, self.lists.P) if inverse else (self.lists.P, self.lists.Q)
        b_ord = {s: i for i, s in enumerate(B.slots_in_order())}
        return [b_ord[A.mate[s]] for s in A.slots_in_order()]


def init_lists(imap: IntervalMap, alpha: int = DEFAULT_ALPHA) -> DualLists:
    return DualLists(imap, alpha)


def balance(imap: IntervalMap, alpha: int = DEFAULT_ALPHA, trace=None) -> BalancedPair:
    """Balance ``imap`` in both directions in O(r) time."""
    return DualLists(imap, alpha).run(trace)


def extract_forward(bp: BalancedPair) -> MoveStructure:
    return bp.extract_forward()


def extract_inverse(bp: BalancedPair) -> MoveStructure:
    return bp.extract_inverse()
