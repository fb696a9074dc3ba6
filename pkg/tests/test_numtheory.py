import random

import pytest
from hypothesis import given, strategies as st

from jacobi_factoring.numtheory import (
    Factorization,
    FactoringBudgetExceeded,
    best_rational_approx,
    count_in_class,
    factorize,
    integer_root,
    integer_sqrt,
    is_probable_prime,
    is_squarefree,
    euler_phi,
    jacobi_reference,
    mod_inverse_pow2,
    perfect_power,
    prime_power,
    small_prime_divisor,
)
from oracles import (
    best_fractions_exhaustive,
    count_by_enumeration,
    jacobi_by_definition,
    phi,
    trial_factor,
    trial_is_prime,
)

odd_modulus = st.integers(min_value=1, max_value=10**6).map(lambda v: 2 * v + 1)


@pytest.mark.parametrize(
    "a, b, want",
    [(1, 1, 1), (2, 3, -1), (2, 7, 1), (5, 9, 1), (3, 9, 0), (1001, 9907, -1), (19, 45, 1), (8, 21, -1)],
)
def test_jacobi_examples(a, b, want):
    assert jacobi_reference(a, b) == want


def test_jacobi_matches_definition_exhaustively():
    for b in range(1, 400, 2):
        for a in range(-5, 2 * b):
            assert jacobi_reference(a, b) == jacobi_by_definition(a, b), (a, b)


@pytest.mark.parametrize("b", [0, -3, 2, 10])
def test_jacobi_rejects_bad_modulus(b):
    with pytest.raises(ValueError):
        jacobi_reference(3, b)


@given(st.integers(-10**30, 10**30), st.integers(-10**30, 10**30), odd_modulus)
def test_jacobi_multiplicative_in_numerator(a1, a2, b):
    assert jacobi_reference(a1 * a2, b) == jacobi_reference(a1, b) * jacobi_reference(a2, b)


@given(st.integers(-10**30, 10**30), odd_modulus, odd_modulus)
def test_jacobi_multiplicative_in_denominator(a, b1, b2):
    assert jacobi_reference(a, b1 * b2) == jacobi_reference(a, b1) * jacobi_reference(a, b2)


@given(odd_modulus, odd_modulus)
def test_quadratic_reciprocity(a, b):
    if a == 1 or b == 1 or jacobi_reference(a, b) == 0:
        return
    sign = -1 if ((a - 1) // 2) * ((b - 1) // 2) % 2 else 1
    assert jacobi_reference(a, b) * jacobi_reference(b, a) == sign


@given(st.integers(-10**30, 10**30), odd_modulus)
def test_jacobi_zero_iff_not_coprime(a, b):
    from math import gcd

    v = jacobi_reference(a, b)
    assert (v == 0) == (gcd(a, b) > 1)
    assert v in (-1, 0, 1)


def test_mod_inverse_pow2_random():
    rng = random.Random(0)
    for _ in range(10_000):
        m = rng.randint(1, 256)
        x = rng.randrange(1, 1 << m, 2) if m > 1 else 1
        inv = mod_inverse_pow2(x, m)
        assert 0 <= inv < 1 << m
        assert x * inv % (1 << m) == 1


def test_mod_inverse_pow2_rejects_even():
    with pytest.raises(ValueError):
        mod_inverse_pow2(4, 8)


def test_primality_against_trial_division():
    for n in range(-3, 20_000):
        assert is_probable_prime(n) == trial_is_prime(n), n


@pytest.mark.parametrize(
    "n, prime",
    [(2**61 - 1, True), (2**64 + 13, True), (2**64 + 15, False), (3215031751, False), (2**127 - 1, True), ((2**89 - 1) * (2**61 - 1), False)],
)
def test_primality_large(n, prime):
    assert is_probable_prime(n) is prime


@pytest.mark.parametrize("n, root, exact", [(0, 0, True), (1, 1, True), (15, 3, False), (16, 4, True), (10**40, 10**20, True)])
def test_integer_sqrt(n, root, exact):
    assert integer_sqrt(n) == (root, exact)


def test_integer_root():
    assert integer_root(3**40, 40) == 3
    assert integer_root(3**40 - 1, 40) == 2
    assert integer_root(10**30 + 5, 3) == 10**10


@pytest.mark.parametrize(
    "n, want",
    [(2, None), (8, (2, 3)), (64, (2, 6)), (36, (6, 2)), (3**5 * 5**5, (15, 5)), (12, None), (7**13, (7, 13))],
)
def test_perfect_power(n, want):
    assert perfect_power(n) == want


def test_perfect_power_rejects_small():
    with pytest.raises(ValueError):
        perfect_power(1)


@pytest.mark.parametrize("n, want", [(7, (7, 1)), (49, (7, 2)), (2**10, (2, 10)), (36, None), (15, None)])
def test_prime_power(n, want):
    assert prime_power(n) == want


def test_best_rational_approx_exhaustive():
    for M in range(1, 513):
        for y in range(M):
            want = best_fractions_exhaustive(y, M, 20)
            for d_max in range(1, 21):
                got = best_rational_approx(y, M, d_max)
                assert (got.numerator, got.denominator) == want[d_max - 1], (y, M, d_max)


@pytest.mark.parametrize("y, M, d_max, want", [(21, 64, 7, (1, 3)), (0, 64, 10, (0, 1)), (32, 64, 5, (1, 2)), (37, 64, 7, (4, 7))])
def test_best_rational_approx_examples(y, M, d_max, want):
    assert tuple(best_rational_approx(y, M, d_max)) == want


def test_count_in_class_exhaustive():
    for M in range(1, 201):
        for B in range(2, 21):
            for j in range(B):
                assert count_in_class(M, B, j) == count_by_enumeration(M, B, j), (M, B, j)


@pytest.mark.parametrize("n", [1, 2, 97, 360, 2**10 * 3**7, 1000003 * 999983, 2**64 + 1, 600851475143])
def test_factorize(n):
    f = factorize(n)
    assert f.value() == n
    assert all(trial_is_prime(p) or is_probable_prime(p) for p in f.primes)
    if n < 10**8:
        assert f.as_dict() == trial_factor(n)


def test_factorize_budget():
    with pytest.raises(FactoringBudgetExceeded):
        factorize((2**61 - 1) * (2**89 - 1), budget=10)


def test_factorization_str_and_roundtrip():
    f = Factorization.from_dict({3: 1, 2: 3})
    assert str(f) == "2^3 * 3"
    assert f.value() == 24
    assert Factorization.from_dict(f.as_dict()) == f


def test_phi_and_squarefree():
    for n in range(1, 2000):
        assert euler_phi(n) == phi(n)
        assert is_squarefree(n) == all(e == 1 for e in trial_factor(n).values())


def test_small_prime_divisor():
    assert small_prime_divisor(45, 3) == 3
    assert small_prime_divisor(45, 2) is None
    assert small_prime_divisor(175, 0) is None
    assert small_prime_divisor(175, 5) == 5


@pytest.mark.parametrize("a, b, want", [(0, 7, 7), (4, 6, 2), (3528, 84, 84)])
def test_gcd_examples(a, b, want):
    from jacobi_factoring.numtheory import gcd

    assert gcd(a, b) == want


@pytest.mark.parametrize("a, b, want", [(1, 9, 1), (3, 9, 0), (2, 7, 1), (2, 15, 1)])
def test_jacobi_reference_examples(a, b, want):
    assert jacobi_reference(a, b) == want


@pytest.mark.parametrize("x, m, want", [(1, 4, 1), (5, 4, 13)])
def test_mod_inverse_pow2_examples(x, m, want):
    assert mod_inverse_pow2(x, m) == want


@pytest.mark.parametrize("n, want", [(1, False), (181, True), (175, False)])
def test_primality_examples(n, want):
    assert is_probable_prime(n) is want


@pytest.mark.parametrize("n, want", [(324, (18, True)), (175, (13, False))])
def test_integer_sqrt_examples(n, want):
    assert integer_sqrt(n) == want


def test_perfect_power_24():
    assert perfect_power(24) is None


@pytest.mark.parametrize("M, B, j, want", [(10, 3, 1, 4), (9, 3, 0, 3)])
def test_count_in_class_examples(M, B, j, want):
    assert count_in_class(M, B, j) == want
