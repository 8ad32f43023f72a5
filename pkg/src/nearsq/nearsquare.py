"""Signed squarefree kernel decomposition n = kernel * root**2 and the cS classes."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

import gmpy2

from .primes import pollard_brent, primality, smooth_part_primes

DEFAULT_TRIAL_BOUND = 10**6
DEFAULT_RHO_BUDGET = 2_000_000
SMALL_C_KERNELS = frozenset({-1, 2, 3, 6, -2, -3, -6})


@dataclass(frozen=True)
class SquareDecomposition:
    """n = kernel * root**2 with kernel squarefree and root >= 0.

    Zero is the distinguished value with kernel = root = 0 (`is_zero`).  When
    factoring ran out of budget, `unresolved` lists the cofactors whose square
    structure is unknown; they are folded into `kernel`, so the product identity
    still holds but the kernel may not be squarefree.
    """

    kernel: int
    root: int
    unresolved: tuple[int, ...] = ()
    probable: bool = False

    @property
    def is_zero(self) -> bool:
        return self.kernel == 0

    @property
    def resolved(self) -> bool:
        return not self.unresolved

    @property
    def value(self) -> int:
        return self.kernel * self.root * self.root


ZERO = SquareDecomposition(0, 0)


@dataclass(frozen=True)
class NearSquareClass:
    """One of zero, square, c_square (c in {+-2, +-3, +-6, -1}), prime_square, other, unresolved.

    For `other` found by the coprime-piece argument the kernel may be None: it is
    then certified to have at least two distinct prime factors above the trial bound.
    """

    kind: str
    kernel: int | None
    certified: bool = True

    @property
    def label(self) -> str:
        if self.kind == "zero":
            return "0"
        if self.kind == "square":
            return "S"
        if self.kind in ("c_square", "prime_square"):
            return f"{self.kernel}S"
        if self.kind == "unresolved":
            return "unresolved"
        return "other"

    @property
    def is_near_square(self) -> bool:
        """Positive p*x^2 with p prime, or a perfect square (2S and 3S included)."""
        if self.kind == "square":
            return True
        if self.kind in ("c_square", "prime_square") and self.kernel is not None:
            return self.kernel > 0 and (self.kind == "prime_square" or self.kernel in (2, 3))
        return False

    @property
    def in_conjecture_class(self) -> bool:
        """kernel c with |c| = 1 or |c| prime, either sign."""
        if self.kind in ("square", "prime_square"):
            return True
        return self.kind == "c_square" and self.kernel in (-1, 2, 3, -2, -3)


def _split_prime_powers(n: int, budget: int, primes: Counter, unresolved: list[int], flags: dict) -> int:
    """Factor n (no prime factors below the trial bound) into `primes`; return leftover budget."""
    stack = [n]
    while stack:
        r = stack.pop()
        if r == 1:
            continue
        is_p, certified = primality(r)
        if is_p:
            primes[r] += 1
            flags["probable"] |= not certified
            continue
        root, exact = gmpy2.iroot(gmpy2.mpz(r), 2)
        if exact:
            stack.extend([int(root), int(root)])
            continue
        power_split = False
        for k in range(3, r.bit_length() // 20 + 2):
            root, exact = gmpy2.iroot(gmpy2.mpz(r), k)
            if exact:
                stack.extend([int(root)] * k)
                power_split = True
                break
        if power_split:
            continue
        if budget <= 0:
            unresolved.append(r)
            continue
        d, spent = pollard_brent(r, budget)
        budget -= spent
        if d is None:
            unresolved.append(r)
        else:
            stack.extend([d, r // d])
    return budget


def square_decompose(
    n: int, trial_bound: int = DEFAULT_TRIAL_BOUND, budget: int = DEFAULT_RHO_BUDGET
) -> SquareDecomposition:
    """Write n = kernel * root**2; return a flagged partial result if factoring exceeds `budget`."""
    if n == 0:
        return ZERO
    sign = -1 if n < 0 else 1
    m = abs(n)
    if gmpy2.is_square(m):
        return SquareDecomposition(sign, int(gmpy2.isqrt(m)))
    primes: Counter = Counter()
    for p in smooth_part_primes(m, trial_bound):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        primes[p] += e
    unresolved: list[int] = []
    flags = {"probable": False}
    square_part = 1
    if gmpy2.is_square(m):
        square_part = int(gmpy2.isqrt(m))
    else:
        _split_prime_powers(m, budget, primes, unresolved, flags)
    unresolved = _merge_unresolved(unresolved, primes)
    kernel, root = sign, square_part
    for p, e in primes.items():
        if e % 2:
            kernel *= p
        root *= p ** (e // 2)
    for u in unresolved:
        kernel *= u
    return SquareDecomposition(kernel, root, tuple(sorted(unresolved)), flags["probable"])


def _merge_unresolved(unresolved: list[int], primes: Counter) -> list[int]:
    """Pull already-known primes out of unresolved cofactors and drop square cofactors."""
    out = []
    for u in unresolved:
        for p in list(primes):
            while u % p == 0:
                u //= p
                primes[p] += 1
        if u > 1:
            out.append(u)
    return out


def classify_kernel(kernel: int) -> NearSquareClass:
    if kernel == 0:
        return NearSquareClass("zero", 0)
    if kernel == 1:
        return NearSquareClass("square", 1)
    if kernel in SMALL_C_KERNELS:
        return NearSquareClass("c_square", kernel)
    is_p, certified = primality(abs(kernel))
    if is_p:
        return NearSquareClass("prime_square", kernel, certified)
    return NearSquareClass("other", kernel)


def classify(n: int, trial_bound: int = DEFAULT_TRIAL_BOUND, budget: int = DEFAULT_RHO_BUDGET) -> NearSquareClass:
    d = square_decompose(n, trial_bound, budget)
    if d.is_zero:
        return NearSquareClass("zero", 0)
    if not d.resolved:
        return NearSquareClass("unresolved", d.kernel, False)
    cls = classify_kernel(d.kernel)
    if d.probable and cls.kind == "prime_square":
        return NearSquareClass(cls.kind, cls.kernel, False)
    return cls


def is_near_square(n: int) -> bool:
    return classify(n).is_near_square


# Classification from a set of known divisors


def coprime_base(numbers: Iterable[int]) -> list[int]:
    """Pairwise coprime integers > 1 whose products give every input (up to sign)."""
    base: list[int] = []
    stack = [abs(x) for x in numbers if abs(x) > 1]
    while stack:
        y = stack.pop()
        if y == 1:
            continue
        for i, b in enumerate(base):
            g = math.gcd(b, y)
            if g == 1:
                continue
            if g == b == y:
                break
            del base[i]
            stack.extend((g, b // g, y // g))
            break
        else:
            base.append(y)
    return sorted(base)


def exponents_over(n: int, base: list[int]) -> list[tuple[int, int]]:
    """Express |n| over a coprime base; raises if n is not in its span."""
    m = abs(n)
    out = []
    for b in base:
        e = 0
        while m % b == 0:
            m //= b
            e += 1
        if e:
            out.append((b, e))
    if m != 1:
        raise ValueError("number is not in the span of the supplied base")
    return out


@dataclass(frozen=True)
class HintedClassification:
    cls: NearSquareClass
    decomposition: SquareDecomposition | None
    large_nonsquare_pieces: int = field(default=0)


def classify_with_divisors(
    n: int,
    divisors: Iterable[int],
    small_bound: int = 10**4,
    trial_bound: int = DEFAULT_TRIAL_BOUND,
    budget: int = DEFAULT_RHO_BUDGET,
) -> HintedClassification:
    """Classify n using known divisors to avoid full factorization.

    n is split over a coprime base built from n and `divisors`.  Primes up to
    `small_bound` are stripped from each piece.  Every remaining piece that is not
    a perfect square and occurs to an odd power carries its own prime factor above
    `small_bound`, so two such pieces certify a kernel with two large primes.
    Only a single such piece ever needs factoring.
    """
    if n == 0:
        return HintedClassification(NearSquareClass("zero", 0), ZERO)
    sign = -1 if n < 0 else 1
    base = coprime_base([n, *divisors])
    small_kernel = sign
    residual_odd: list[int] = []
    for piece, e in exponents_over(n, base):
        rest = piece
        for p in smooth_part_primes(piece, small_bound):
            v = 0
            while rest % p == 0:
                rest //= p
                v += 1
            if (v * e) % 2:
                small_kernel *= p
        if e % 2 and rest > 1 and not gmpy2.is_square(rest):
            residual_odd.append(rest)
    if len(residual_odd) >= 2:
        return HintedClassification(NearSquareClass("other", None), None, len(residual_odd))
    if not residual_odd:
        kernel = small_kernel
        probable = False
    else:
        sub = square_decompose(residual_odd[0], trial_bound, budget)
        if not sub.resolved:
            return HintedClassification(NearSquareClass("unresolved", None, False), None, 1)
        kernel = small_kernel * sub.kernel
        probable = sub.probable
    root2, rem = divmod(abs(n), abs(kernel))
    root = int(gmpy2.isqrt(root2))
    if rem or root * root != root2:
        raise AssertionError("kernel reconstruction failed")
    dec = SquareDecomposition(kernel, root, (), probable)
    cls = classify_kernel(kernel)
    if probable and cls.kind == "prime_square":
        cls = NearSquareClass(cls.kind, cls.kernel, False)
    return HintedClassification(cls, dec, len(residual_odd))
