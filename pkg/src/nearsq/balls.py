"""Thin helpers over flint's arb balls: scoped precision, exact endpoints, certified comparisons."""

from __future__ import annotations

import enum
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterator

from flint import arb, ctx

DEFAULT_PRECISION = 192
PRECISION_CAP = 8192


class Verdict(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNDECIDED = "undecided"


@contextmanager
def working_precision(bits: int) -> Iterator[None]:
    old = ctx.prec
    ctx.prec = bits
    try:
        yield
    finally:
        ctx.prec = old


def exact_rational(x: arb) -> Fraction:
    """The exactly representable binary float `x` (an arb of radius zero)."""
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * 2**exp) if exp >= 0 else Fraction(man, 2**-exp)


def endpoints(x: arb) -> tuple[Fraction, Fraction]:
    """Exact rational enclosure [lo, hi] of a ball."""
    mid = exact_rational(x.mid())
    rad = exact_rational(x.rad())
    return mid - rad, mid + rad


def radius(x: arb) -> Fraction:
    return exact_rational(x.rad())


def compare_less(lhs: arb, rhs: arb) -> Verdict:
    if lhs < rhs:
        return Verdict.TRUE
    if lhs >= rhs:
        return Verdict.FALSE
    return Verdict.UNDECIDED


def decide(
    evaluate: Callable[[int], tuple[arb, arb]],
    start_bits: int = DEFAULT_PRECISION,
    cap_bits: int = PRECISION_CAP,
) -> tuple[Verdict, int]:
    """Certify lhs < rhs, doubling precision until the balls separate or the cap is hit.

    `evaluate(bits)` must recompute both sides from scratch at `bits`.
    """
    bits = start_bits
    while True:
        with working_precision(bits):
            lhs, rhs = evaluate(bits)
            verdict = compare_less(lhs, rhs)
        if verdict is not Verdict.UNDECIDED or bits >= cap_bits:
            return verdict, bits
        bits = min(2 * bits, cap_bits)


def q(num: int, den: int = 1) -> arb:
    """Rational constant as a ball (exact when den is a power of two)."""
    return arb(num) / den
