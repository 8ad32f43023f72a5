"""Exact big-integer terms of the Lucas pair (u, v) and the companion pair (t, w).

All four sequences obey x[n+2] = a*x[n+1] + b*x[n]:

    u: 0, 1, ...        v: 2, a, ...
    t: 1, a - b1, ...   w: 1, a + b1, ...   (only when b = -b1**2)

Terms are computed by fast doubling on (u, v); t and w are recovered from
(u, v) at a neighbouring index, so every kind costs O(log n) multiplications.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd, isqrt

DEFAULT_INDEX_CAP = 10**6


class ParameterError(ValueError):
    """Raised when parameters do not satisfy an operation's preconditions."""


class SequenceKind(enum.Enum):
    U = "u"
    V = "v"
    T = "t"
    W = "w"


@dataclass(frozen=True)
class RecurrenceParams:
    a: int
    b: int
    b1: int | None = None
    index_cap: int = field(default=DEFAULT_INDEX_CAP, compare=False)

    def __post_init__(self) -> None:
        if self.a < 1:
            raise ParameterError(f"a must be >= 1, got {self.a}")
        if self.b == 0:
            raise ParameterError("b must be nonzero")
        if self.b1 is not None:
            if self.b1 < 0 or self.b != -self.b1 * self.b1:
                raise ParameterError(f"b1={self.b1} requires b = -b1^2, got b={self.b}")
            if gcd(self.a, self.b1) != 1:
                raise ParameterError(f"gcd(a, b1) must be 1 for a={self.a}, b1={self.b1}")

    @classmethod
    def classical(cls, a: int) -> "RecurrenceParams":
        """The b = -1 family with b1 = 1."""
        return cls(a, -1, 1)

    @classmethod
    def with_b1(cls, a: int, b1: int) -> "RecurrenceParams":
        return cls(a, -b1 * b1, b1)

    @property
    def delta(self) -> int:
        return self.a * self.a + 4 * self.b

    @property
    def is_classical(self) -> bool:
        return self.a >= 3 and self.b == -1

    def require_classical(self) -> None:
        if not self.is_classical:
            raise ParameterError(f"operation needs a >= 3 and b = -1, got a={self.a}, b={self.b}")


def _check_index(params: RecurrenceParams, n: int) -> None:
    if n < 0:
        raise ParameterError(f"index must be non-negative, got {n}")
    if n > params.index_cap:
        raise ParameterError(f"index {n} exceeds cap {params.index_cap}")


def uv_pair(params: RecurrenceParams, n: int) -> tuple[int, int]:
    """Return (u_n, v_n) by fast doubling."""
    _check_index(params, n)
    a, neg_b = params.a, -params.b
    # invariant: (u_k, v_k, u_{k+1}, v_{k+1}) and q = (-b)^k
    u0, v0, u1, v1, q = 0, 2, 1, a, 1
    for bit in bin(n)[2:]:
        if bit == "0":
            u0, v0, u1, v1 = u0 * v0, v0 * v0 - 2 * q, u1 * v0 - q, v1 * v0 - a * q
            q = q * q
        else:
            u0, v0, u1, v1 = u1 * v0 - q, v1 * v0 - a * q, u1 * v1, v1 * v1 - 2 * q * neg_b
            q = q * q * neg_b
    return u0, v0


def term(params: RecurrenceParams, kind: SequenceKind, n: int) -> int:
    """Exact n-th term of the requested sequence."""
    _check_index(params, n)
    if kind is SequenceKind.U:
        return uv_pair(params, n)[0]
    if kind is SequenceKind.V:
        return uv_pair(params, n)[1]
    if params.b1 is None:
        raise ParameterError(f"{kind.value}_n needs b = -b1^2 with b1 set")
    # t_n = u_{n+1} - b1*u_n and w_n = u_{n+1} + b1*u_n
    u_n, v_n = uv_pair(params, n)
    u_next = (params.a * u_n + v_n) // 2
    sign = -1 if kind is SequenceKind.T else 1
    return u_next + sign * params.b1 * u_n


def naive_terms(params: RecurrenceParams, kind: SequenceKind, count: int) -> list[int]:
    """First `count` terms by direct iteration of the recurrence (test oracle)."""
    a, b = params.a, params.b
    if kind is SequenceKind.U:
        x0, x1 = 0, 1
    elif kind is SequenceKind.V:
        x0, x1 = 2, a
    else:
        if params.b1 is None:
            raise ParameterError(f"{kind.value}_n needs b = -b1^2 with b1 set")
        x0 = 1
        x1 = a - params.b1 if kind is SequenceKind.T else a + params.b1
    out = []
    for _ in range(count):
        out.append(x0)
        x0, x1 = x1, a * x1 + b * x0
    return out


def naive_term(params: RecurrenceParams, kind: SequenceKind, n: int) -> int:
    _check_index(params, n)
    return naive_terms(params, kind, n + 1)[n]


def factor_pair(params: RecurrenceParams, N: int) -> tuple[int, int, int]:
    """Split u_N as (u_n, v_n) for N = 2n or (t_n, w_n) for N = 2n+1; also return their gcd."""
    if N < 2:
        raise ParameterError(f"factor_pair needs N >= 2, got {N}")
    n, odd = divmod(N, 2)
    if odd:
        left, right = term(params, SequenceKind.T, n), term(params, SequenceKind.W, n)
    else:
        left, right = uv_pair(params, n)
    return left, right, gcd(left, right)


# gcd tables for the classical family b = -1


def gcd_uv_class(params: RecurrenceParams, n: int) -> int:
    """Table prediction of gcd(u_n, v_n) for n >= 1."""
    params.require_classical()
    a = params.a
    if a % 2 == 0:
        return 1 if n % 2 else 2
    return 2 if n % 3 == 0 else 1


def gcd_tw_class(params: RecurrenceParams, n: int) -> int:
    """Table prediction of gcd(t_n, w_n)."""
    params.require_classical()
    return 2 if params.a % 2 == 1 and n % 3 == 1 else 1


def gcd_triple_class(params: RecurrenceParams, m: int) -> tuple[int, int, int]:
    """Table prediction of (gcd(u_m, v_m + 1), gcd(u_m, v_m - 1), gcd(v_m + 1, v_m - 1)).

    The table is stated for odd a and odd m; `triple_table_domain` reports where it holds; elsewhere it can fail.
    """
    params.require_classical()
    if m % 3:
        return (1, 1, 2)
    return {0: (1, 1, 1), 1: (1, 3, 1), 2: (3, 1, 1)}[params.a % 3]


def gcd_uv_actual(params: RecurrenceParams, n: int) -> int:
    u, v = uv_pair(params, n)
    return gcd(u, v)


def gcd_tw_actual(params: RecurrenceParams, n: int) -> int:
    return gcd(term(params, SequenceKind.T, n), term(params, SequenceKind.W, n))


def gcd_triple_actual(params: RecurrenceParams, m: int) -> tuple[int, int, int]:
    u, v = uv_pair(params, m)
    return (gcd(u, v + 1), gcd(u, v - 1), gcd(v + 1, v - 1))


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def triple_table_domain(params: RecurrenceParams, m: int) -> bool:
    """Whether the triple-gcd table applies: it is exact for odd a and odd m (checked for a <= 50, m <= 200)."""
    return params.a % 2 == 1 and m % 2 == 1
