"""Primality testing and bounded factoring helpers."""

from __future__ import annotations

import math
from functools import lru_cache

import gmpy2

# Miller-Rabin with these bases is deterministic below 3.3e24, which covers 2**64.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
DETERMINISTIC_LIMIT = 2**64


def _miller_rabin(n: int, base: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def primality(n: int) -> tuple[bool, bool]:
    """Return (is_prime, certified).

    Below 2**64 the answer is deterministic and certified.  Above, a strong
    Baillie-PSW test is used and a positive verdict is flagged as probable.
    """
    n = abs(n)
    if n < 2:
        return False, True
    for p in _MR_BASES:
        if n == p:
            return True, True
        if n % p == 0:
            return False, True
    if n < DETERMINISTIC_LIMIT:
        return all(_miller_rabin(n, b) for b in _MR_BASES), True
    if not gmpy2.is_strong_bpsw_prp(n):
        return False, True
    return True, False


def is_prime(n: int) -> bool:
    return primality(n)[0]


@lru_cache(maxsize=4)
def small_primes(bound: int) -> tuple[int, ...]:
    """Primes up to `bound` by a plain sieve."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i, f in enumerate(sieve) if f)


@lru_cache(maxsize=4)
def _primorial(bound: int) -> int:
    return int(gmpy2.primorial(bound))


def smooth_part_primes(n: int, bound: int) -> list[int]:
    """Primes <= bound dividing n, found via one gcd with the primorial."""
    g = math.gcd(n, _primorial(bound))
    if g == 1:
        return []
    found = []
    for p in small_primes(bound):
        if g % p == 0:
            found.append(p)
            g //= p
            if g == 1:
                break
        if p * p > g:
            if g > 1:
                found.append(g)
            break
    return sorted(found)


def pollard_brent(n: int, budget: int, seed: int = 1) -> tuple[int | None, int]:
    """(nontrivial factor of composite n or None, iterations spent), stopping after `budget`."""
    if n % 2 == 0:
        return 2, 0
    spent = 0
    c = seed
    while spent < budget:
        y, m, g, r, q = 2, 128, 1, 1, 1
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
                g = math.gcd(q, n)
                k += m
            spent += r
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g, spent
        c += 1
    return None, spent
