import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nearsq.nearsquare import (
    ZERO,
    NearSquareClass,
    classify,
    classify_with_divisors,
    coprime_base,
    exponents_over,
    is_near_square,
    square_decompose,
)
from nearsq.primes import pollard_brent, primality, smooth_part_primes
from nearsq.scanner import algebraic_divisors
from nearsq.sequences import RecurrenceParams, SequenceKind, term


def _squarefree(k: int) -> bool:
    return all(e == 1 for p, e in sympy.factorint(abs(k)).items() if p > 0)


def _kernel_oracle(n: int) -> tuple[int, int]:
    """Kernel and root from sympy's factorisation, an independent route."""
    sign = -1 if n < 0 else 1
    kernel, root = sign, 1
    for p, e in sympy.factorint(abs(n)).items():
        kernel *= p ** (e % 2)
        root *= p ** (e // 2)
    return kernel, root


@pytest.mark.parametrize(
    "n, kernel, root",
    [(8, 2, 2), (1967351, 3719, 23), (-9, -1, 3), (46368, 322, 12), (38613796, 1, 6214), (1, 1, 1), (-1, -1, 1)],
)
def test_frozen_decompositions(n, kernel, root):
    d = square_decompose(n)
    assert (d.kernel, d.root) == (kernel, root)
    assert d.value == n


def test_zero_is_distinguished():
    assert square_decompose(0) is ZERO and ZERO.is_zero
    assert classify(0).kind == "zero"


@pytest.mark.parametrize(
    "n, label, near",
    [(38613796, "S", True), (8, "2S", True), (181, "181S", True), (46368, "other", False), (-181, "-181S", False),
     (12, "3S", True), (24, "6S", False), (-4, "-1S", False)],
)
def test_classify_examples(n, label, near):
    cls = classify(n)
    assert cls.label == label
    assert cls.is_near_square is near


def test_conjecture_class_sign():
    assert classify(-181).in_conjecture_class and classify(-4).in_conjecture_class
    assert not classify(-6).in_conjecture_class and not classify(46368).in_conjecture_class


@given(st.integers(1, 10**12))
def test_decomposition_against_sympy(n):
    d = square_decompose(n)
    assert d.resolved
    assert d.kernel * d.root**2 == n
    assert _squarefree(d.kernel)
    assert (d.kernel, d.root) == _kernel_oracle(n)


@given(st.integers(2, 10**6), st.integers(1, 1000))
def test_kernel_invariant_under_squares(m, k):
    base = square_decompose(m).kernel
    assert classify(k * k * base) == classify(base)


@given(st.integers(1, 10**12))
def test_negation_flips_kernel(n):
    assert square_decompose(-n).kernel == -square_decompose(n).kernel


def test_primality_certification():
    assert primality(2**61 - 1) == (True, True)
    assert primality(3215031751) == (False, True)  # strong pseudoprime to bases 2, 3, 5, 7
    assert primality(2**89 - 1) == (True, False)  # above 2^64: probable only
    assert primality(2**89 + 1)[0] is False


def test_pollard_brent_finds_factor():
    n = 1000003 * 1000033
    d, spent = pollard_brent(n, 10**6)
    assert d in (1000003, 1000033) and spent > 0


def test_budget_exhaustion_is_flagged():
    p, q = sympy.nextprime(10**30), sympy.nextprime(10**31)
    d = square_decompose(p * q, budget=1000)
    assert not d.resolved and d.unresolved == (p * q,)
    assert classify(p * q, budget=1000).kind == "unresolved"


def test_smooth_part():
    assert smooth_part_primes(2**5 * 3 * 7 * 10007, 100) == [2, 3, 7]


def test_coprime_base_spans_inputs():
    rng = random.Random(3)
    for _ in range(200):
        nums = [rng.randint(2, 10**6) for _ in range(4)]
        base = coprime_base(nums)
        for i, x in enumerate(base):
            for y in base[i + 1:]:
                assert sympy.gcd(x, y) == 1
        for x in nums:
            exponents_over(x, base)


@pytest.mark.parametrize("a, b1, n", [(3, 1, 12), (4, 5, 11), (3, 2, 13), (7, 1, 30), (11, 3, 27), (5, 2, 24)])
def test_divisor_classification_matches_full(a, b1, n):
    params = RecurrenceParams.with_b1(a, b1)
    value = term(params, SequenceKind.U, n)
    hinted = classify_with_divisors(value, algebraic_divisors(params, n))
    full = classify(value)
    assert hinted.cls.label == full.label
    if hinted.decomposition is not None:
        assert hinted.decomposition.value == value


def test_divisor_classification_two_pieces_certify_other():
    p1, p2, p3 = (sympy.nextprime(10**k) for k in (20, 21, 22))
    hinted = classify_with_divisors(p1 * p2 * p3, [p1 * p2])
    # p1*p2 and p3 are coprime non-square pieces: two large primes with odd exponent
    assert hinted.cls == NearSquareClass("other", None) and hinted.decomposition is None


def test_is_near_square_helper():
    assert is_near_square(2 * 49) and is_near_square(3 * 4) and not is_near_square(6)
