import pytest
from hypothesis import given, strategies as st

from squaredpairs.primes import (
    PrimePair,
    consecutive_pairs,
    is_deterministic,
    is_prime,
    iter_consecutive_pairs,
    iter_primes,
    next_prime,
    prev_prime,
)

from oracles import primes_upto, trial_division_prime


@pytest.mark.parametrize("n, want", [(0, False), (1, False), (2, True), (561, False), (2**61 - 1, True),
                                     (3215031751, False), (2**64 - 59, True), (2**89 - 1, True)])
def test_is_prime_examples(n, want):
    assert is_prime(n) is want


def test_is_prime_matches_trial_division():
    for n in range(20000):
        assert is_prime(n) == trial_division_prime(n), n


@given(st.integers(min_value=2**20, max_value=2**40))
def test_is_prime_random_against_trial_division(n):
    assert is_prime(n) == trial_division_prime(n)


def test_strong_pseudoprimes_to_small_bases_are_rejected():
    # Known strong pseudoprimes to base 2 (and some to several bases).
    for n in (2047, 3277, 4033, 4681, 8321, 1373653, 25326001, 3825123056546413051):
        assert not is_prime(n)


def test_determinism_flag():
    assert is_deterministic(2**64 - 1)
    assert not is_deterministic(2**64)


def test_next_prev_examples():
    assert next_prime(2) == 3
    assert next_prime(7) == 11
    assert prev_prime(17) == 13
    assert prev_prime(3) == 2
    with pytest.raises(ValueError):
        prev_prime(2)


def test_next_prev_are_inverse_on_primes():
    ps = primes_upto(5000)
    for a, b in zip(ps, ps[1:]):
        assert next_prime(a) == b
        assert prev_prime(b) == a


@pytest.mark.parametrize("limit, want", [
    (12, [(3, 2), (5, 3), (7, 5), (11, 7)]),
    (3, [(3, 2)]),
])
def test_consecutive_pairs_examples(limit, want):
    assert [(pp.p, pp.q) for pp in consecutive_pairs(limit)] == want


def test_consecutive_pairs_last_pair():
    assert consecutive_pairs(18)[-1] == PrimePair(17, 13)


def test_consecutive_pairs_match_naive_sieve():
    ps = primes_upto(10**5)
    assert [(pp.p, pp.q) for pp in consecutive_pairs(10**5)] == list(zip(ps[1:], ps))


def test_segments_do_not_change_the_stream():
    assert list(iter_primes(50000, segment=97)) == primes_upto(50000)
    assert list(iter_primes(1000, start=500, segment=13)) == [p for p in primes_upto(1000) if p >= 500]


def test_resume_after_a_prime():
    full = consecutive_pairs(2000)
    for after in (2, 3, 4, 97, 100, 1999):
        assert list(iter_consecutive_pairs(2000, after=after)) == [pp for pp in full if pp.p > after]


def test_no_prime_strictly_between():
    for pp in consecutive_pairs(3000):
        assert not any(is_prime(k) for k in range(pp.q + 1, pp.p))


@pytest.mark.parametrize("p, q, msg", [(4, 2, "p is not prime"), (5, 4, "q is not prime"),
                                       (3, 5, "greater"), (7, 3, "consecutive")])
def test_prime_pair_validation(p, q, msg):
    with pytest.raises(ValueError, match=msg):
        PrimePair(p, q)
