import numpy as np
import pytest

from movestruct.errors import ValidationError
from movestruct.intervals import intervals_from_permutation, validate_interval_map
from movestruct.oracle import (MAX_TEXT, encode_text, expand_interval_map, naive_balance,
                               naive_move, naive_pred_rank, naive_suffix_structures,
                               random_interval_map, random_text, weights)

from conftest import PI_A, PI_B


def test_banana(banana):
    assert banana.SA.tolist() == [6, 5, 3, 1, 0, 4, 2]
    assert banana.ISA.tolist() == [4, 3, 6, 2, 5, 1, 0]
    assert banana.LCP.tolist() == [0, 0, 1, 3, 0, 0, 2]
    assert banana.PLCP.tolist() == [0, 3, 2, 1, 0, 0, 0]
    assert banana.BWT == b"annb\x00aa"


def test_terminator_only():
    ss = naive_suffix_structures("$")
    assert ss.SA.tolist() == [0] and ss.LCP.tolist() == [0]


def test_unary():
    ss = naive_suffix_structures("aaaa$")
    assert ss.SA.tolist() == [4, 3, 2, 1, 0]
    assert ss.BWT == b"aaaa\x00"
    assert ss.LCP.tolist() == [0, 0, 1, 2, 3]


@pytest.mark.parametrize("bad", ["banana", "ba\x00nana$", b"ab", b"a\x00b\x00"])
def test_terminator_required(bad):
    with pytest.raises(ValidationError):
        encode_text(bad)


def test_size_guard():
    with pytest.raises(ValidationError):
        naive_suffix_structures(b"a" * MAX_TEXT + b"\x00")


def test_definitional_identities():
    rng = np.random.default_rng(9)
    for n in (1, 2, 10, 300):
        t = random_text(rng, n, 2)
        ss = naive_suffix_structures(t)
        suffixes = [t[p:] for p in ss.SA]
        assert suffixes == sorted(suffixes)
        assert np.array_equal(ss.SA[ss.ISA], np.arange(n))
        assert np.array_equal(ss.PLCP, ss.LCP[ss.ISA])


def test_naive_move():
    assert naive_move(intervals_from_permutation(list(range(8))), 5) == 5
    assert naive_move(intervals_from_permutation(PI_A), 6) == 2
    assert naive_move(intervals_from_permutation(PI_B), 11) == 0
    with pytest.raises(IndexError):
        naive_move(intervals_from_permutation(PI_A), 8)


def test_naive_pred_rank():
    assert naive_pred_rank([0, 3, 6], 5) == 1
    assert naive_pred_rank([0, 3, 6], 6) == 2


def test_naive_balance_identity():
    m = intervals_from_permutation(list(range(8)))
    assert naive_balance(m, 2) == m


def test_naive_balance_reversal():
    m = intervals_from_permutation(PI_B)
    b = naive_balance(m, 2)
    assert b.r <= 3 * m.r
    out_w, in_w = weights(b.P, b.P_pi, b.n)
    assert max(out_w) < 4 and max(in_w) < 4


def test_naive_balance_random():
    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(1, 1025))
        m = random_interval_map(rng, n, int(rng.integers(1, n + 1)))
        alpha = int(rng.choice([2, 4, 8]))
        b = naive_balance(m, alpha)
        assert validate_interval_map(b) is None
        out_w, in_w = weights(b.P, b.P_pi, b.n)
        assert max(out_w) < 2 * alpha and max(in_w) < 2 * alpha
        assert np.array_equal(expand_interval_map(b), expand_interval_map(m))
