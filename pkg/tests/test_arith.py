"""Number-theoretic primitives: primality, factorization, characters, CRT."""

import random

import pytest
import sympy

from shabound.arith import (
    Factorization,
    Incomplete,
    character_eval,
    count_distinct_prime_factors,
    crt_solve,
    cyclotomic_splitting,
    factor,
    is_local_pth_power,
    is_prime,
    jacobi,
    require_complete,
    residue_character,
    smallest_primitive_root,
    unit_part_mod,
    valuation,
)
from shabound.errors import IncompleteFactorization, InputError


def test_is_prime_small_table():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}
    for n in range(0, 50):
        assert is_prime(n) == (n in primes)


def test_is_prime_vs_sympy_random():
    rng = random.Random(20260823)
    for _ in range(400):
        n = rng.randrange(2, 10**12)
        assert is_prime(n) == sympy.isprime(n), n


def test_is_prime_large_band_uses_bpsw():
    # beyond the proven Miller-Rabin limit but under the working cap
    p = sympy.nextprime(10**30)
    assert is_prime(p)
    assert not is_prime(p + 1)


def test_is_prime_rejects_out_of_range():
    with pytest.raises(InputError):
        is_prime(1 << 128)


def test_jacobi_vs_sympy():
    rng = random.Random(7)
    for _ in range(300):
        n = rng.randrange(3, 10**6) | 1
        a = rng.randrange(0, 10**6)
        assert jacobi(a, n) == sympy.jacobi_symbol(a, n)


def test_factor_fixture():
    f = factor(-19008)
    assert f.sign == -1
    assert f.factors == ((2, 6), (3, 3), (11, 1))
    assert f.complete


def test_factor_random_reconstructs():
    rng = random.Random(99)
    for _ in range(60):
        n = rng.randrange(2, 10**14)
        f = require_complete(factor(n))
        prod = f.sign
        for q, e in f.factors:
            assert is_prime(q)
            prod *= q**e
        assert prod == n


def test_factor_incomplete_on_tiny_budget():
    # product of two 20-digit primes; rho with budget 1 cannot split it
    p = int(sympy.nextprime(10**19))
    q = int(sympy.nextprime(p + 10**9))
    f = factor(p * q, budget=1)
    assert isinstance(f, Incomplete)
    with pytest.raises(IncompleteFactorization):
        require_complete(f)


def test_factor_oversize_cofactor_is_incomplete():
    # the surviving cofactor exceeds the declared primality range: Incomplete, not an error
    p = int(sympy.nextprime(1 << 130))
    f = factor(3 * p, budget=10)
    assert not f.complete
    assert f.factors == ((3, 1),)
    assert f.cofactor == p


def test_factorization_validates():
    with pytest.raises(AssertionError):
        Factorization(12, 1, ((2, 1), (3, 1)))  # product mismatch


def test_omega():
    assert count_distinct_prime_factors(2**5 * 3) == 2
    assert count_distinct_prime_factors(-30) == 3
    assert count_distinct_prime_factors(1) == 0


def test_valuation():
    assert valuation(48, 2) == 4
    assert valuation(-11**5, 11) == 5
    assert valuation(7, 5) == 0


def test_smallest_primitive_root():
    for ell in (3, 5, 7, 11, 13, 31, 41, 61):
        assert smallest_primitive_root(ell) == sympy.primitive_root(ell)


def test_character_fixtures():
    chi = residue_character(11, 5)
    assert character_eval(chi, 3) == 3
    chi31 = residue_character(31, 5)
    assert character_eval(chi31, 2) == 4


def test_character_additivity_and_power_oracle():
    # chi(q) = dlog(q) mod p; q is a p-th power mod ell iff chi(q) = 0
    rng = random.Random(5)
    for p in (5, 7):
        ells = [ell for ell in range(2, 3000) if is_prime(ell) and ell % p == 1]
        for _ in range(200):
            ell = rng.choice(ells)
            chi = residue_character(ell, p)
            pth_powers = {pow(x, p, ell) for x in range(1, ell)}
            a = rng.randrange(1, ell)
            b = rng.randrange(1, ell)
            assert (character_eval(chi, a) == 0) == (a in pth_powers)
            assert (
                character_eval(chi, a * b)
                == (character_eval(chi, a) + character_eval(chi, b)) % p
            )


def test_crt_fixtures():
    assert crt_solve([(0, 41), (1, 11)]) == 287
    assert crt_solve([(2, 3), (3, 5)]) == 8
    with pytest.raises(InputError):
        crt_solve([(1, 4), (0, 6)])  # moduli not coprime


def test_unit_part():
    assert unit_part_mod(50, 5, 25) == 2 % 25


def test_local_pth_power_fixtures():
    # v_q != 0 mod p fails; unit satisfying the p-adic condition passes
    assert not is_local_pth_power(11, 11, 5)
    assert is_local_pth_power(11**5, 11, 5)
    assert is_local_pth_power(32, 2, 5)  # 2 is not 1 mod 5: trivial local group


def test_cyclotomic_splitting():
    s = cyclotomic_splitting(11, 5)
    assert s.residue_degree == 1 and s.num_primes == 4
    s2 = cyclotomic_splitting(2, 5)
    assert s2.residue_degree == 4 and s2.num_primes == 1
