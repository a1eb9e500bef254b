"""Exact integer and modular arithmetic.

Primality, factorization with an effort budget, p-th power residue
characters, local p-th power tests, CRT and cyclotomic splitting data.
Everything here is deterministic: the rho cycle-finder uses a fixed
polynomial schedule, never a random seed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .errors import IncompleteFactorization, InputError

# Fixed witness set: Miller-Rabin with these bases is a proven primality
# test for all n < 3317044064679887385961981 (~2^81).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_PROVEN_LIMIT = 3317044064679887385961981
_WORKING_LIMIT = 1 << 128

_TRIAL_LIMIT = 10**6

_DEFAULT_RHO_BUDGET = int(os.environ.get("SHABOUND_FACTOR_BUDGET", "2000000"))


def _miller_rabin_witness(a: int, n: int) -> bool:
    """True if a proves n composite."""
    a %= n
    if a == 0:
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(r - 1):
        x = x * x % n
        if x == n - 1:
            return False
    return True


def _lucas_strong_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge's parameter choice (n odd, > 2)."""
    # find D = 5, -7, 9, -11, ... with jacobi(D, n) == -1
    d = 5
    while True:
        j = jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        if d == -11 and isqrt(n) ** 2 == n:
            return False  # perfect square, no D will work
        d = -d - 2 if d > 0 else -d + 2
    p, q = 1, (1 - d) // 4
    # factor n + 1 = s * 2^r
    s = n + 1
    r = 0
    while s % 2 == 0:
        s //= 2
        r += 1
    # Lucas sequences U_s, V_s by binary ladder
    u, v, qk = 1, p, q % n
    for bit in bin(s)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (p * u + v) % n, (d * u + p * v) % n
            if u % 2:
                u += n
            if v % 2:
                v += n
            u, v = u // 2 % n, v // 2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(r - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality for 0 <= n < 2^128.

    Below ~2^81 this is the proven fixed-base Miller-Rabin test; up to the
    2^128 working limit a Baillie-PSW check (strong base-2 MR plus strong
    Lucas) is added.  Inputs at or beyond the working limit are rejected
    rather than answered probabilistically.
    """
    if n < 0:
        raise InputError("is_prime expects a nonnegative integer")
    if n >= _WORKING_LIMIT:
        raise InputError(f"n >= 2^128 is outside the declared working range: {n}")
    if n < 2:
        return False
    for p in _MR_BASES:
        if n == p:
            return True
        if n % p == 0:
            return False
    if n < _MR_PROVEN_LIMIT:
        return not any(_miller_rabin_witness(a, n) for a in _MR_BASES)
    if _miller_rabin_witness(2, n):
        return False
    return _lucas_strong_probable_prime(n)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    if n <= 0 or n % 2 == 0:
        raise InputError("jacobi needs odd n > 0")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class Factorization:
    """Complete signed factorization: value = sign * prod(p^e)."""

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]  # (prime, exponent), primes ascending

    def __post_init__(self):
        prod = self.sign
        prev = 1
        for p, e in self.factors:
            assert p > prev and e > 0, "factors must be ascending with positive exponents"
            prev = p
            prod *= p**e
        assert prod == self.value, "factorization does not multiply back"

    @property
    def complete(self) -> bool:
        return True

    def valuation(self, q: int) -> int:
        for p, e in self.factors:
            if p == q:
                return e
        return 0

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


@dataclass(frozen=True)
class Incomplete:
    """Partial factorization: value = sign * prod(p^e) * cofactor."""

    value: int
    sign: int
    factors: tuple[tuple[int, int], ...]
    cofactor: int  # composite, resisted the budget

    @property
    def complete(self) -> bool:
        return False


def _rho_brent(n: int, budget: int) -> int | None:
    """Brent's cycle variant of Pollard rho; deterministic constant schedule.

    Returns a nontrivial factor of composite n, or None if the iteration
    budget runs out.
    """
    if n % 2 == 0:
        return 2
    spent = 0
    for c in range(1, 100):
        y, m = 2, 128
        g = r = q = 1
        x = ys = y
        while g == 1 and spent < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                spent += min(m, r - k)
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # backtrack
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
        if spent >= budget:
            return None
    return None


def factor(n: int, budget: int | None = None) -> Factorization | Incomplete:
    """Factor a nonzero integer.

    Trial division to 10^6 followed by Brent-rho with an iteration budget.
    Returns Incomplete (with the stubborn composite cofactor) instead of
    looping forever; callers that need completeness must check.
    """
    if n == 0:
        raise InputError("cannot factor 0")
    if budget is None:
        budget = _DEFAULT_RHO_BUDGET
    sign = 1 if n > 0 else -1
    m = abs(n)
    found: dict[int, int] = {}
    for p in (2, 3, 5):
        while m % p == 0:
            found[p] = found.get(p, 0) + 1
            m //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while d <= _TRIAL_LIMIT and d * d <= m:
        while m % d == 0:
            found[d] = found.get(d, 0) + 1
            m //= d
        d += wheel[i]
        i = (i + 1) % 8
    # now m has no prime factor <= 10^6 (or m is below the square of the bound)
    stack = [m] if m > 1 else []
    stubborn = 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m >= _WORKING_LIMIT:
            # beyond the declared primality range: report as an unresolved cofactor
            stubborn *= m
            continue
        if m < _TRIAL_LIMIT * _TRIAL_LIMIT or is_prime(m):
            found[m] = found.get(m, 0) + 1
            continue
        # perfect powers fall to rho quickly, but check squares cheaply
        r = isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        g = _rho_brent(m, budget)
        if g is None:
            stubborn *= m
            continue
        stack.extend((g, m // g))
    factors = tuple(sorted(found.items()))
    if stubborn > 1:
        return Incomplete(n, sign, factors, stubborn)
    return Factorization(n, sign, factors)


def require_complete(f: Factorization | Incomplete) -> Factorization:
    if isinstance(f, Incomplete):
        raise IncompleteFactorization(f)
    return f


def count_distinct_prime_factors(n: int, budget: int | None = None) -> int:
    """omega(n): number of distinct primes dividing n (multiplicity ignored)."""
    f = require_complete(factor(n, budget))
    return len(f.factors)


def smallest_primitive_root(ell: int) -> int:
    """Smallest primitive root modulo a prime ell."""
    if ell == 2:
        return 1
    fac = require_complete(factor(ell - 1))
    for r in range(2, ell):
        if all(pow(r, (ell - 1) // q, ell) != 1 for q in fac.primes):
            return r
    raise AssertionError("no primitive root found; ell not prime?")


@dataclass(frozen=True)
class ResidueCharacter:
    """One coordinate of the local-units-mod-p-th-powers map at a prime ell = 1 mod p.

    The fixed generator is g = r^((ell-1)/p) with r the smallest primitive
    root mod ell; any other choice rescales values by a unit of Z/p and
    leaves all ranks unchanged, fixing it makes outputs byte-deterministic.
    """

    ell: int
    p: int
    generator: int

    def __post_init__(self):
        assert self.ell % self.p == 1 and self.ell != self.p
        assert pow(self.generator, self.p, self.ell) == 1 and self.generator != 1


def residue_character(ell: int, p: int) -> ResidueCharacter:
    if not is_prime(ell) or not is_prime(p) or p == 2:
        raise InputError(f"residue_character needs primes, p odd: ell={ell}, p={p}")
    if ell % p != 1:
        raise InputError(f"ell = {ell} is not 1 mod p = {p}")
    r = smallest_primitive_root(ell)
    g = pow(r, (ell - 1) // p, ell)
    return ResidueCharacter(ell, p, g)


def character_eval(chi: ResidueCharacter, a: int | Fraction) -> int:
    """x in {0..p-1} with a^((ell-1)/p) = g^x mod ell; 0 iff a is a p-th power mod ell."""
    ell, p = chi.ell, chi.p
    if isinstance(a, Fraction):
        if a.numerator % ell == 0 or a.denominator % ell == 0:
            raise InputError(f"{a} is not a unit mod {ell}")
        a = a.numerator * pow(a.denominator, -1, ell) % ell
    if a % ell == 0:
        raise InputError(f"{a} is divisible by ell = {ell}")
    target = pow(a, (ell - 1) // p, ell)
    val = 1
    for x in range(p):
        if val == target:
            return x
        val = val * chi.generator % ell
    raise AssertionError("character value not a power of the generator")


def valuation(x: Fraction | int, q: int) -> int:
    """q-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise InputError("valuation of 0")
    v = 0
    n = x.numerator
    while n % q == 0:
        n //= q
        v += 1
    d = x.denominator
    while d % q == 0:
        d //= q
        v -= 1
    return v


def unit_part_mod(x: Fraction | int, q: int, modulus: int) -> int:
    """The q-unit part of x reduced mod `modulus` (a power of q)."""
    x = Fraction(x)
    v = valuation(x, q)
    n, d = x.numerator, x.denominator
    if v > 0:
        n //= q**v
    elif v < 0:
        d //= q ** (-v)
    return n * pow(d, -1, modulus) % modulus


def is_local_pth_power(x: Fraction | int, q: int, p: int) -> bool:
    """True iff x is a p-th power in the field of q-adic numbers (p odd prime)."""
    x = Fraction(x)
    if x == 0:
        raise InputError("x must be nonzero")
    if valuation(x, q) % p != 0:
        return False
    if q == p:
        u = unit_part_mod(x, q, p * p)
        return pow(u, p - 1, p * p) == 1
    if q % p == 1:
        chi = residue_character(q, p)
        return character_eval(chi, unit_part_mod(x, q, q)) == 0
    return True


def crt_solve(congruences: list[tuple[int, int]]) -> int:
    """Least nonnegative solution of simultaneous congruences with coprime moduli."""
    x, m = 0, 1
    for r, n in congruences:
        if n <= 0:
            raise InputError(f"modulus must be positive: {n}")
        g = gcd(m, n)
        if g != 1:
            raise InputError(f"moduli not pairwise coprime: gcd({m},{n}) = {g}")
        # x' = x mod m, x' = r mod n
        t = (r - x) * pow(m, -1, n) % n
        x += m * t
        m *= n
    return x % m


@dataclass(frozen=True)
class SplittingData:
    """How a rational prime splits in the p-th cyclotomic field."""

    ell: int
    p: int
    residue_degree: int  # order of ell mod p
    num_primes: int  # (p-1) / residue_degree

    def __post_init__(self):
        assert self.residue_degree * self.num_primes == self.p - 1


def cyclotomic_splitting(ell: int, p: int) -> SplittingData:
    """Residue degree and number of primes over ell in the field of p-th roots of unity."""
    if ell == p:
        raise InputError("ell = p is ramified")
    if not is_prime(ell) or not is_prime(p) or p == 2:
        raise InputError(f"need distinct primes with p odd: ell={ell}, p={p}")
    f = 1
    val = ell % p
    while val != 1:
        val = val * ell % p
        f += 1
    return SplittingData(ell, p, f, (p - 1) // f)
