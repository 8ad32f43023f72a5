import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nearsq.sequences import (
    ParameterError,
    RecurrenceParams,
    SequenceKind,
    factor_pair,
    gcd_triple_actual,
    gcd_triple_class,
    gcd_tw_actual,
    gcd_tw_class,
    gcd_uv_actual,
    gcd_uv_class,
    naive_term,
    naive_terms,
    term,
    triple_table_domain,
    uv_pair,
)

U, V, T, W = SequenceKind.U, SequenceKind.V, SequenceKind.T, SequenceKind.W


def test_frozen_examples():
    three = RecurrenceParams.classical(3)
    assert term(three, U, 12) == 46368 == 2**5 * 3**2 * 161
    assert term(three, V, 5) == 123
    assert term(RecurrenceParams(3, -4), U, 13) == 181
    assert term(RecurrenceParams(4, -25), U, 11) == 1967351 == 3719 * 23**2


def test_initial_conditions():
    p = RecurrenceParams.with_b1(7, 3)
    assert term(p, U, 0) == 0 and term(p, V, 0) == 2
    assert term(p, T, 0) == 1 and term(p, W, 0) == 1
    assert term(p, T, 1) == 7 - 3 and term(p, W, 1) == 7 + 3


def test_factor_pair_examples():
    three = RecurrenceParams.classical(3)
    assert factor_pair(three, 6)[:2] == (8, 18) and 8 * 18 == 144 == term(three, U, 6)
    assert factor_pair(three, 3)[:2] == (2, 4) and term(three, U, 3) == 8
    left, right, _ = factor_pair(RecurrenceParams.classical(4), 5)
    assert left * right == term(RecurrenceParams.classical(4), U, 5)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        term(RecurrenceParams(3, -2), T, 4)
    with pytest.raises(ParameterError):
        RecurrenceParams(4, -4, 2)  # gcd(a, b1) = 2
    with pytest.raises(ParameterError):
        RecurrenceParams(3, 0)
    with pytest.raises(ParameterError):
        factor_pair(RecurrenceParams.classical(3), 1)
    with pytest.raises(ParameterError):
        term(RecurrenceParams(3, -1, index_cap=100), U, 101)
    with pytest.raises(ParameterError):
        gcd_uv_class(RecurrenceParams(3, -4, 2), 5)


params_strategy = st.builds(
    lambda a, b: RecurrenceParams(a, b),
    st.integers(1, 10**6),
    st.integers(-(10**4), 10**4).filter(lambda b: b != 0),
)


@given(params_strategy, st.integers(0, 64))
def test_fast_doubling_matches_naive(params, n):
    for kind in (U, V):
        assert term(params, kind, n) == naive_term(params, kind, n)


@given(st.integers(1, 10**4), st.integers(1, 300), st.integers(0, 80))
def test_companion_terms_match_naive(a, b1, n):
    try:
        params = RecurrenceParams.with_b1(a, b1)
    except ParameterError:
        return
    assert term(params, T, n) == naive_term(params, T, n)
    assert term(params, W, n) == naive_term(params, W, n)
    u_odd = term(params, U, 2 * n + 1)
    assert u_odd == term(params, T, n) * term(params, W, n)
    assert term(params, U, 2 * n) == term(params, U, n) * term(params, V, n)


@given(params_strategy, st.integers(0, 60))
def test_doubling_identities(params, n):
    q = (-params.b) ** n
    u, v = uv_pair(params, n)
    u1, v1 = uv_pair(params, n + 1)
    assert uv_pair(params, 2 * n) == (u * v, v * v - 2 * q)
    assert uv_pair(params, 2 * n + 1) == (u1 * v - q, v1 * v - params.a * q)


@given(st.integers(3, 10**5), st.integers(0, 120))
def test_norm_identity_classical(a, n):
    params = RecurrenceParams.classical(a)
    u, v = uv_pair(params, n)
    assert v * v - params.delta * u * u == 4


@given(params_strategy, st.integers(0, 40))
def test_norm_identity_general(params, n):
    u, v = uv_pair(params, n)
    assert v * v - params.delta * u * u == 4 * (-params.b) ** n


def test_negative_terms_allowed_when_delta_negative():
    p = RecurrenceParams(1, -4, 2)
    assert p.delta < 0
    assert any(x < 0 for x in naive_terms(p, U, 30))


def test_gcd_examples():
    assert gcd_uv_class(RecurrenceParams.classical(3), 3) == 2 == gcd_uv_actual(RecurrenceParams.classical(3), 3)
    assert gcd_uv_class(RecurrenceParams.classical(4), 3) == 1 == gcd_uv_actual(RecurrenceParams.classical(4), 3)
    assert gcd_triple_class(RecurrenceParams.classical(5), 3) == (3, 1, 1) == gcd_triple_actual(
        RecurrenceParams.classical(5), 3)


def test_gcd_tables_exhaustive():
    for a in range(3, 51):
        params = RecurrenceParams.classical(a)
        for n in range(1, 201):
            assert gcd_uv_class(params, n) == gcd_uv_actual(params, n), (a, n)
            assert gcd_tw_class(params, n) == gcd_tw_actual(params, n), (a, n)
            if triple_table_domain(params, n):
                assert gcd_triple_class(params, n) == gcd_triple_actual(params, n), (a, n)


def test_triple_table_fails_outside_domain():
    # The table is derived for odd a and odd m; outside that it is not a valid predictor.
    misses = sum(
        gcd_triple_class(RecurrenceParams.classical(a), m) != gcd_triple_actual(RecurrenceParams.classical(a), m)
        for a in range(4, 51, 2) for m in range(2, 201, 2)
    )
    assert misses > 0


def test_random_fast_doubling_bulk():
    rng = random.Random(7)
    for _ in range(2000):
        b = rng.choice([x for x in range(-50, 51) if x])
        params = RecurrenceParams(rng.randint(1, 10**6), b)
        n = rng.randint(0, 64)
        assert uv_pair(params, n) == (naive_term(params, U, n), naive_term(params, V, n))
