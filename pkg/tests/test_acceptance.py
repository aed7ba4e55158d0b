"""Acceptance criteria. Each test prints one PASS/FAIL line; the lines are
repeated in the terminal summary of the run."""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from movestruct import balance, deserialize, serialize
from movestruct.errors import FormatError
from movestruct.lcp import irreducible_plcp, lcp_array
from movestruct.movequery import MoveStructure, validate_move_structure
from movestruct.oracle import (expand_interval_map, naive_balance, naive_suffix_structures,
                               random_interval_map, random_text, repetitive_text)
from movestruct.rlbwt import Rlbwt, read_rlbwt

from conftest import ACCEPTANCE, DATA

ALPHAS = (2, 4, 8, 16)
N_MAPS = 1000
N_TEXTS = 500
SPLIT_WORK_C = 10


@contextmanager
def criterion(num, title):
    detail = {}
    try:
        yield detail
    except BaseException:
        line = f"FAIL criterion {num}: {title} {detail.get('msg', '')}".rstrip()
        ACCEPTANCE.append(line)
        print(line)
        raise
    line = f"PASS criterion {num}: {title} {detail.get('msg', '')}".rstrip()
    ACCEPTANCE.append(line)
    print(line)


def inverse_of(pi):
    inv = np.empty_like(pi)
    inv[pi] = np.arange(len(pi))
    return inv


def all_queries(ms, expect):
    """Answer move queries for every position in order; returns (mismatches, max scan)."""
    bad = 0
    worst = 0
    P = ms.P
    j = 0
    for i in range(ms.n):
        while P[j + 1] <= i:
            j += 1
        y, _, scanned = ms.move_with_scan(i, j)
        if y != expect[i]:
            bad += 1
        if scanned > worst:
            worst = scanned
    return bad, worst


def composed(fwd, inv):
    """Forward then inverse query from every position; count non-returns."""
    bad = 0
    j = 0
    for i in range(fwd.n):
        while fwd.P[j + 1] <= i:
            j += 1
        y, _ = fwd.move(i, j)
        z, _ = inv.move(y, inv.locate(y))
        if z != i:
            bad += 1
    return bad


def gaps_ok(fwd, inv, alpha):
    # output gaps of pi^-1 are the input gaps of pi
    return int(fwd.output_weights().max()) < 2 * alpha and int(inv.output_weights().max()) < 2 * alpha


def random_maps(seed, count, n_max):
    rng = np.random.default_rng(seed)
    maps = []
    for _ in range(count):
        n = int(np.exp(rng.uniform(0, np.log(n_max))))
        # half the maps get few intervals, half anything up to n
        r = int(rng.integers(1, n + 1)) if rng.random() < 0.5 else int(rng.integers(1, max(2, n // 16) + 1))
        maps.append(random_interval_map(rng, n, r))
    return maps


@pytest.fixture(scope="module")
def map_corpus():
    t0 = time.perf_counter()
    res = dict(weight_viol=0, size_viol=0, ins_viol=0, query_bad=0, compose_bad=0,
               max_scan_ratio=0.0, scan_viol=0, walk_viol=0, split_viol=0, worst_split=0.0,
               runs=0, positions=0, structures=[])
    for m in random_maps(20240601, N_MAPS, 4096):
        pi = expand_interval_map(m)
        pinv = inverse_of(pi)
        for alpha in ALPHAS:
            bp = balance(m, alpha)
            fwd, inv = bp.extract_forward(), bp.extract_inverse()
            st = bp.stats
            res["runs"] += 1
            res["positions"] += m.n
            if not gaps_ok(fwd, inv, alpha):
                res["weight_viol"] += 1
            if fwd.r_prime * (alpha - 1) > (alpha + 1) * m.r:
                res["size_viol"] += 1
            if st.insertions * (alpha - 1) > 2 * m.r:
                res["ins_viol"] += 1
            bad_f, scan_f = all_queries(fwd, pi)
            bad_i, scan_i = all_queries(inv, pinv)
            res["query_bad"] += bad_f + bad_i
            res["compose_bad"] += composed(fwd, inv)
            worst = max(scan_f, scan_i)
            if worst >= 2 * alpha:
                res["scan_viol"] += 1
            res["max_scan_ratio"] = max(res["max_scan_ratio"], worst / (2 * alpha))
            if st.walk_steps > st.r_prime + st.r:
                res["walk_viol"] += 1
            if st.max_split_work > SPLIT_WORK_C * alpha:
                res["split_viol"] += 1
            res["worst_split"] = max(res["worst_split"], st.max_split_work / alpha)
            if len(res["structures"]) < 100 and m.n > 1 and (res["runs"] % 7 == 0):
                res["structures"].append(fwd)
    res["seconds"] = time.perf_counter() - t0
    return res


def test_1_balance_soundness(map_corpus):
    with criterion(1, "balance soundness") as d:
        d["msg"] = (f"({map_corpus['runs']} balancings over {N_MAPS} maps, "
                    f"{map_corpus['weight_viol']} heavy gaps, corpus {map_corpus['seconds']:.1f}s)")
        assert map_corpus["runs"] == N_MAPS * len(ALPHAS)
        assert map_corpus["weight_viol"] == 0
        assert map_corpus["seconds"] < 60


def test_2_size_bounds(map_corpus):
    with criterion(2, "size bounds") as d:
        d["msg"] = f"(r' violations {map_corpus['size_viol']}, insertion violations {map_corpus['ins_viol']})"
        assert map_corpus["size_viol"] == 0
        assert map_corpus["ins_viol"] == 0


def test_3_query_correctness(map_corpus):
    with criterion(3, "query correctness") as d:
        d["msg"] = (f"({map_corpus['positions']} positions x 2 directions, "
                    f"{map_corpus['query_bad']} mismatches, {map_corpus['compose_bad']} round-trip failures)")
        assert map_corpus["query_bad"] == 0
        assert map_corpus["compose_bad"] == 0


def test_4_constant_query_bound(map_corpus):
    with criterion(4, "constant query scan") as d:
        d["msg"] = f"(max scan / 2alpha = {map_corpus['max_scan_ratio']:.2f})"
        assert map_corpus["scan_viol"] == 0


def _steps(r, seed):
    rng = np.random.default_rng(seed)
    return balance(random_interval_map(rng, 8 * r, r), 4).stats.total_steps


def test_5_linear_work(map_corpus):
    with criterion(5, "linear work") as d:
        small = np.mean([_steps(2000, s) for s in range(5)])
        large = np.mean([_steps(4000, s + 100) for s in range(5)])
        ratio = large / small
        d["msg"] = (f"(walk violations {map_corpus['walk_viol']}, worst split work "
                    f"{map_corpus['worst_split']:.1f}*alpha <= {SPLIT_WORK_C}*alpha, "
                    f"doubling ratio {ratio:.3f})")
        assert map_corpus["walk_viol"] == 0
        assert map_corpus["split_viol"] == 0
        assert 1.6 <= ratio <= 2.4


def random_texts(seed, count, n_max):
    rng = np.random.default_rng(seed)
    for k in range(count):
        n = int(rng.integers(1, n_max + 1))
        sigma = (2, 4, 16)[k % 3]
        gen = repetitive_text if k % 2 else random_text
        yield gen(rng, n, sigma), ALPHAS[k % 4]


@pytest.fixture(scope="module")
def text_corpus():
    res = dict(lcp_bad=0, reduc_bad=0, size_bad=0, cmp_bad=0, step_bad=0, texts=0,
               worst_cmp=0.0, worst_steps=0.0)
    for t, alpha in random_texts(77, N_TEXTS, 2000):
        n = len(t)
        ss = naive_suffix_structures(t)
        rl = Rlbwt.from_bwt(ss.BWT)
        res["texts"] += 1
        if not np.array_equal(lcp_array(rl, alpha), ss.LCP):
            res["lcp_bad"] += 1
        pp = irreducible_plcp(rl, alpha)
        if len(pp.I) != rl.r:
            res["size_bad"] += 1
        plcp = [pp.at(i) for i in range(n)]
        irr = set(pp.I)
        if any(plcp[i] != plcp[i - 1] - 1 for i in range(1, n) if i not in irr):
            res["reduc_bad"] += 1
        if plcp != ss.PLCP.tolist():
            res["reduc_bad"] += 1
        cmp_, steps = pp.stats.comparisons, pp.stats.fl_steps
        res["cmp_bad"] += cmp_ > 2 * n
        res["step_bad"] += steps > 3 * n + rl.r
        res["worst_cmp"] = max(res["worst_cmp"], cmp_ / (2 * n))
        res["worst_steps"] = max(res["worst_steps"], steps / (3 * n + rl.r))
    return res


def test_6_lcp_end_to_end(text_corpus):
    with criterion(6, "LCP end to end") as d:
        banana = lcp_array(read_rlbwt(DATA / "banana.rlbwt")).tolist()
        d["msg"] = f"(banana {banana}, {text_corpus['lcp_bad']}/{text_corpus['texts']} random texts wrong)"
        assert banana == [0, 0, 1, 3, 0, 0, 2]
        assert text_corpus["texts"] >= 500
        assert text_corpus["lcp_bad"] == 0


def test_7_plcp_and_reducibility(text_corpus):
    with criterion(7, "PLCP+ and reducibility") as d:
        pp = irreducible_plcp(read_rlbwt(DATA / "banana.rlbwt"))
        d["msg"] = (f"(banana I={pp.I} PLCP+={pp.values}, law violations {text_corpus['reduc_bad']}, "
                    f"|I|!=r {text_corpus['size_bad']})")
        assert (pp.I, pp.values) == ([0, 1, 4, 5, 6], [0, 3, 0, 0, 0])
        assert text_corpus["reduc_bad"] == 0
        assert text_corpus["size_bad"] == 0


def test_8_lcp_work_bounds(text_corpus):
    with criterion(8, "LCP work bounds") as d:
        d["msg"] = (f"(max comparisons/2n {text_corpus['worst_cmp']:.2f}, "
                    f"max FL steps/(3n+r) {text_corpus['worst_steps']:.2f})")
        assert text_corpus["cmp_bad"] == 0
        assert text_corpus["step_bad"] == 0


ALPHA_FIELD = range(len(b"MVST0001") + 16, len(b"MVST0001") + 20)


def corruptions(data, rng):
    """Yield (description, corrupted bytes, alpha_only)."""
    for _ in range(40):
        pos = int(rng.integers(0, len(data)))
        blob = bytearray(data)
        blob[pos] ^= int(rng.integers(1, 256))
        yield f"flip@{pos}", bytes(blob), pos in ALPHA_FIELD
    for cut in rng.integers(0, len(data), size=10):
        yield f"cut@{cut}", data[:int(cut)], False
    yield "extend", data + bytes(int(rng.integers(1, 24))), False
    yield "empty", b"", False


def test_9_serialization(map_corpus):
    with criterion(9, "serialization") as d:
        rng = np.random.default_rng(9)
        structs = map_corpus["structures"]
        mismatched = sum(deserialize(serialize(ms)) != ms for ms in structs)
        accepted = crashed = alpha_changed = tried = 0
        for ms in structs:
            data = serialize(ms)
            for _, blob, alpha_only in corruptions(data, rng):
                tried += 1
                try:
                    got = deserialize(blob)
                except FormatError:
                    continue
                except Exception:
                    crashed += 1
                    continue
                # only the alpha field can change without breaking an invariant
                same = (got.P, got.P_pi, got.P_rank, got.n) == (ms.P, ms.P_pi, ms.P_rank, ms.n)
                if alpha_only and same and validate_move_structure(got) is None:
                    alpha_changed += 1
                else:
                    accepted += 1
        d["msg"] = (f"({len(structs)} round trips, {mismatched} unequal; {tried} corruptions, "
                    f"{crashed} crashes, {accepted} wrongly accepted, "
                    f"{alpha_changed} alpha-field edits decoded as a valid structure)")
        assert len(structs) == 100
        assert mismatched == 0
        assert crashed == 0
        assert accepted == 0


def test_10_oracle_cross_check():
    with criterion(10, "oracle cross-check") as d:
        failures = 0
        differ = 0
        maps = random_maps(31337, 100, 1024)
        for k, m in enumerate(maps):
            alpha = ALPHAS[k % 4]
            pi = expand_interval_map(m)
            pinv = inverse_of(pi)
            nb = naive_balance(m, alpha)
            naive_fwd = as_structure(nb.n, alpha, nb.P, nb.P_pi)
            order = sorted(range(nb.r), key=nb.P_pi.__getitem__)
            naive_inv = as_structure(nb.n, alpha, [nb.P_pi[j] for j in order] + [nb.n],
                                     [nb.P[j] for j in order])
            bp = balance(m, alpha)
            fast_fwd, fast_inv = bp.extract_forward(), bp.extract_inverse()
            for fwd, inv in ((naive_fwd, naive_inv), (fast_fwd, fast_inv)):
                ok = (gaps_ok(fwd, inv, alpha)
                      and fwd.r_prime * (alpha - 1) <= (alpha + 1) * m.r
                      and all_queries(fwd, pi)[0] == 0
                      and all_queries(inv, pinv)[0] == 0
                      and composed(fwd, inv) == 0)
                failures += not ok
            differ += naive_fwd.P != fast_fwd.P
        d["msg"] = f"(100 instances, {failures} failures, split sets differ on {differ})"
        assert failures == 0


def as_structure(n, alpha, P, P_pi):
    ranks = (np.searchsorted(P, P_pi, side="right") - 1).tolist()
    return MoveStructure(n, alpha, P, P_pi, ranks, validate=False)
