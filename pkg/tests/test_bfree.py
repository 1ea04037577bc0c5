import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import is_squarefree, trial_division_free
from spinorlab.bfree import (
    build_BF,
    gap_iF,
    max_gap,
    prime_squares,
    progression_survivors,
    sieve_interval,
    sieve_progression,
    validate_bset,
    zero_primes,
)
from spinorlab.errors import BadResidue, BoundTooSmall, MissingPrime, NotCoprime, NotSorted
from spinorlab.hecke import global_table
from spinorlab.primes import prime_sieve
from spinorlab.satake import EigenForm


def test_validate_examples():
    sq = prime_squares(10**6)
    assert sq.generator == "prime-squares"
    again = validate_bset(sq.members, 10**6)
    assert np.array_equal(again.members, sq.members)
    assert again.reciprocal_partial < 0.46
    with pytest.raises(NotCoprime) as err:
        validate_bset([6, 10], 100)
    assert err.value.pair == (6, 10)
    empty = validate_bset([], 50)
    assert len(empty) == 0 and empty.reciprocal_partial == 0.0
    assert sieve_interval(empty, 10, 7)[0] == 7


@pytest.mark.parametrize("members", [[9, 4], [4, 4], [1, 5], [0, 3]])
def test_validate_rejects_unsorted(members):
    with pytest.raises(NotSorted):
        validate_bset(members, 100)


def test_validate_finds_late_pair():
    members = list(prime_squares(10**4).members) + [2 * 9973]
    with pytest.raises(NotCoprime) as err:
        validate_bset(members, 10**5)
    assert set(err.value.pair) <= {4, 2 * 9973}


def test_sieve_hand_examples():
    B = validate_bset([4, 9], 20)
    count, surv = sieve_interval(B, 0, 10)
    assert count == 7 and list(surv) == [1, 2, 3, 5, 6, 7, 10]
    assert list(progression_survivors(B, 0, 12, 1, 2)) == [1, 3, 5, 7, 11]
    assert sieve_progression(B, 0, 12, 1, 2) == 5


def test_squarefree_window_vs_brute_force():
    x, y = 10**6, 10**4
    B = prime_squares(x + y)
    count, surv = sieve_interval(B, x, y)
    brute = [n for n in range(x + 1, x + y + 1) if is_squarefree(n)]
    assert list(surv) == brute
    assert 0.55 <= count / y <= 0.66
    assert sieve_progression(B, x, y, 1, 1) == count


def test_errors():
    B = prime_squares(100)
    with pytest.raises(BoundTooSmall):
        sieve_interval(B, 95, 10)
    with pytest.raises(BadResidue):
        sieve_progression(B, 0, 50, 2, 4)
    with pytest.raises(ValueError):
        sieve_progression(B, 0, 50, 5, 4)
    with pytest.raises(ValueError):
        sieve_interval(B, 0, 0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**5), st.integers(1, 3000), st.integers(1, 30), st.data())
def test_random_windows_match_trial_division(x, y, q, data):
    members = [int(b) for b in prime_squares(x + y).members]
    # mix in a few primes (the form-derived shape) while keeping coprimality
    extra = data.draw(st.lists(st.sampled_from([11, 13, 31, 101]), unique=True, max_size=2))
    extra = [p for p in extra if p <= x + y]
    members = sorted(set(members) - {p * p for p in extra} | set(extra))
    B = validate_bset(members, x + y)
    count, surv = sieve_interval(B, x, y)
    assert list(surv) == trial_division_free(members, x, x + y)
    a = data.draw(st.integers(1, q))
    g = math.gcd(a, q)
    if any(math.gcd(g, b) > 1 for b in members if b <= x + y):
        with pytest.raises(BadResidue):
            sieve_progression(B, x, y, a, q)
    else:
        assert list(progression_survivors(B, x, y, a, q)) == trial_division_free(members, x, x + y, a, q)


def _fixed_form(bound, zero_primes_=()):
    ps = prime_sieve(bound)
    t_a = np.full(len(ps), 1.9)
    t_b = np.where(np.isin(ps, zero_primes_), -1.9, 1.5)
    return EigenForm("fixed", bound, ps, t_a, t_b)


def test_build_BF_examples():
    B = build_BF(_fixed_form(1000), 1000)
    assert np.array_equal(B.members, prime_squares(1000).members)
    B = build_BF(_fixed_form(1000, [2]), 1000)
    assert 2 in B and 4 not in B and 9 in B
    assert B.generator == "form-derived"
    validate_bset(B.members, 1000)
    with pytest.raises(MissingPrime):
        build_BF(_fixed_form(100), 1000)


def test_build_BF_seed1_soundness(seed1_large):
    B = build_BF(seed1_large, 10**6)
    validate_bset(B.members[B.members <= 10**4], 10**4)
    count, surv = sieve_interval(B, 0, 10**4)
    lam = global_table(seed1_large, 10**4).values
    a = global_table(seed1_large, 10**4, "a").values
    assert count > 0
    for n in surv.tolist():
        assert is_squarefree(n)
        assert abs(lam[n]) > 1e-9
        assert lam[n] == pytest.approx(a[n], abs=1e-12)
    zs = zero_primes(seed1_large, 10**6)
    assert np.all(seed1_large.lambda_p[np.searchsorted(seed1_large.primes, zs)] == 0.0)


def test_gap_examples():
    f = _fixed_form(100)
    assert gap_iF(f, 10, 5).i_F == 0
    g = _fixed_form(100, [11, 13])
    # lambda(11) = lambda(13) = 0; lambda(12) = lambda(4) lambda(3) != 0
    assert gap_iF(g, 10, 5).i_F == 1
    h = _fixed_form(100, [2, 3])
    # lambda(2) = lambda(3) = 0 but lambda(4) = h_2 - 1/2 != 0
    stat = gap_iF(h, 1, 10)
    assert (stat.n, stat.i_F, stat.incomplete) == (1, 2, False)
    # odd powers vanish too when t_b = -t_a: lambda(8) = 0, lambda(9) != 0
    assert gap_iF(h, 7, 10).i_F == 1
    stat = gap_iF(h, 1, 1)
    assert stat.i_F == 1 and stat.incomplete


def test_max_gap_against_scan(seed1_small):
    N = 3000
    tab = global_table(seed1_small, N + 200)
    best = max((gap_iF(seed1_small, n, 200, tab).i_F, -n) for n in range(N + 1))
    stat = max_gap(seed1_small, N, 200, tab)
    assert (stat.i_F, -stat.n) == best


def test_max_gap_seed1_small_relative_to_power(seed1_large):
    stat = max_gap(seed1_large, 10**5, 1000)
    assert 0 < stat.i_F < (10**5) ** (7 / 17)
    assert not stat.incomplete
