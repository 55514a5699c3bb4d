import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tpsolver.bounds import (
    Z_PRIME_MAX,
    compare_signatures,
    format_table,
    longest_strict_chain,
    signature_key,
    signatures,
    z_inf,
    z_prime_sup,
    z_sup,
)


def test_comparator_examples():
    assert compare_signatures((2,), (2, 1)) == -1
    assert compare_signatures((1, 1, 1), (1, 1)) == -1
    assert compare_signatures((3, 2), (3, 2)) == 0
    assert compare_signatures((3,), (2,)) == -1  # first level decreases
    assert compare_signatures((), (1,)) == 1  # an empty tree comes last


sig = st.lists(st.integers(0, 4), max_size=5).map(tuple)


@given(sig, sig)
def test_key_agrees_with_comparator(s1, s2):
    k1, k2 = signature_key(s1, 6), signature_key(s2, 6)
    assert compare_signatures(s1, s2) == (k1 > k2) - (k1 < k2)
    assert compare_signatures(s1, s2) == -compare_signatures(s2, s1)


def _words(ones, zeros):
    """Signatures read off binary words starting with 1 (run lengths)."""
    out = set()
    for pos in itertools.combinations(range(1, ones + zeros), zeros):
        word = ["1"] * (ones + zeros)
        for p in pos:
            word[p] = "0"
        runs, prev = [], None
        for ch in word:
            if ch == prev:
                runs[-1] += 1
            else:
                runs.append(1)
            prev = ch
        out.add(tuple(runs))
    return out


@pytest.mark.parametrize("ones", range(1, 6))
@pytest.mark.parametrize("zeros", range(0, 6))
def test_signature_enumeration(ones, zeros):
    sigs = signatures(ones, zeros)
    assert len(sigs) == len(set(sigs)) == math.comb(ones + zeros - 1, zeros)
    assert set(sigs) == _words(ones, zeros)


def test_z_sup_values():
    assert z_sup(1, 1) == 1
    assert z_sup(3, 4) == 34
    assert z_sup(10, 10) == 184755


def test_z_inf_values():
    assert z_inf(1) == 1
    assert z_inf(5) == 46
    assert z_inf(30) == 1610612734


def test_longest_chain_small():
    # (0,0) < (1,1) < (2,2); (1,0) and (0,1) cannot both join
    assert longest_strict_chain([0, 1, 2, 1, 0], [0, 1, 2, 0, 1]) == 3
    assert longest_strict_chain([1, 1, 1], [1, 2, 3]) == 1
    assert longest_strict_chain([], []) == 0


def test_z_prime_hand_values():
    assert z_prime_sup(1, 1) == 1
    assert z_prime_sup(2, 2) == 4
    assert z_prime_sup(7, 5) == 83


@pytest.mark.parametrize("n", range(1, 8))
def test_z_prime_first_row_and_symmetry(n):
    assert z_prime_sup(1, n) == n
    assert z_prime_sup(3, n) == z_prime_sup(n, 3)


@pytest.mark.parametrize("n", range(2, 9))
def test_z_prime_diagonal_equals_lower_bound(n):
    assert z_prime_sup(n, n) == z_inf(n)


def test_z_prime_cap():
    with pytest.raises(ValueError):
        z_prime_sup(Z_PRIME_MAX + 1, 2)


def test_z_prime_never_exceeds_z_sup():
    for m in range(1, 7):
        for n in range(1, 7):
            assert z_prime_sup(m, n) <= z_sup(m, n)


def test_format_table():
    text = format_table(range(1, 3), range(1, 4))
    lines = text.splitlines()
    assert lines[1].split() == ["1", "1", "2", "3"]
    assert lines[2].split() == ["2", "2", "4", "6"]
