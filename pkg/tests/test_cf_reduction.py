from fractions import Fraction

import mpmath
import pytest
from flint import arb

from nearsq.balls import working_precision
from nearsq.cf_reduction import (
    CaseKind,
    base_precision,
    bounds,
    case_numbers,
    classical_bound_holds,
    convergents,
    convergents_of_interval,
    make_case,
    run_reduction,
    secondary_check,
    verify_case,
    verify_range,
)


def test_rational_convergents():
    conv, _ = convergents(Fraction(1, 2), 10)
    assert conv.convergents == ((0, 1), (1, 2)) and conv.next_q is None


def test_pi_convergents():
    conv, _ = convergents(lambda b: arb.pi(), 10**4)
    assert (22, 7) in conv.convergents and (355, 113) in conv.convergents


def test_convergents_match_mpmath_identify():
    x = mpmath.mpf(2) ** 0.5
    conv, _ = convergents(lambda b: arb(2).sqrt(), 10**6)
    # sqrt(2) = [1; 2, 2, 2, ...]
    h1, h2, k1, k2 = 1, 0, 0, 1
    expected = []
    for a in [1] + [2] * 20:
        h1, h2, k1, k2 = a * h1 + h2, h1, a * k1 + k2, k1
        if k1 >= 10**6:
            break
        expected.append((h1, k1))
    assert list(conv.convergents) == expected
    assert all(abs(x - mpmath.mpf(p) / q) < 1 / (q * q) for p, q in expected)


def test_wide_interval_is_undecided():
    assert convergents_of_interval(Fraction(1, 3), Fraction(2, 3), 100) is None


def test_iiic_c2_target_and_alternation():
    case = make_case(CaseKind.IIIC, 2)
    nums = case_numbers(case, 256)
    with mpmath.workdps(60):
        phi = mpmath.sqrt(1 - 2 / (5 + mpmath.sqrt(21)))
        gamma = 2 * mpmath.atan(phi / 2) / mpmath.pi
    assert abs(float(nums.target.mid()) - float(gamma)) < 1e-15
    # Independent evaluation of the stated formula gives 0.266424, not the quoted 0.28149 (see the ledger).
    assert abs(float(gamma) - 0.266424) < 1e-6
    conv, _ = convergents(lambda b: case_numbers(case, b).target, 10)
    signs = [(p / q > gamma) for p, q in conv.convergents]
    assert all(s != t for s, t in zip(signs, signs[1:]))


def test_iiib_argument_matches_arctan():
    case = make_case(CaseKind.IIIB, 7)
    nums = case_numbers(case, 256)
    with mpmath.workdps(60):
        xi = mpmath.sqrt((7 + mpmath.sqrt(45)) / 2 - 1)
        gamma = 2 * mpmath.atan(xi) / mpmath.pi
    assert abs(float(nums.target.mid()) - float(gamma)) < 1e-15


def test_bounds_floors():
    b = bounds(2)
    assert b["B1>1.5c^3"] and b["B2>c"]
    assert b["B1"] > 12 and b["B2"] > 2
    d = bounds(3)["delta1"]
    with working_precision(192):
        assert (d - 1 / (27 * arb(6).log())).contains(0)


@pytest.mark.parametrize("kind, parameter", [("iiia1", 2), ("iiia2", 5), ("iiib", 100), ("iiic", 9)])
def test_rhs_strictly_decreasing(kind, parameter):
    nums = case_numbers(make_case(kind, parameter), 192)
    values = [nums.log_rhs(q) for q in range(1, 200)]
    assert all(later < earlier for earlier, later in zip(values, values[1:]))


def test_caps_and_precision():
    assert make_case("iiib", 749).q_max == 280_000 and make_case("iiib", 750).q_max == 25_000
    assert make_case("iiic", 5).q_max == 200_000 and make_case("iiic", 6).q_max == 25_000
    assert make_case("iiia1", 2).q_max == 2_332_000 and make_case("iiia2", 2).q_max == 28_500_000
    assert base_precision(28_500_000) >= 2 * 24.76 + 96
    with pytest.raises(ValueError):
        make_case("iiia1", 78)


def test_iiib_a7_fires_and_rejects():
    rep = verify_case(make_case("iiib", 7))
    admissible = [f for f in rep.fired if f.admissible]
    assert [(f.p, f.q) for f in admissible] == [(3, 4)]
    f = admissible[0]
    assert 0.006 < f.linear_form < 0.007
    assert f.outcome == "reject" and f.m_values == [1]
    assert not rep.violations and rep.ok


def test_secondary_check_m_range_and_w2():
    out = secondary_check(make_case("iiib", 7), 3, 4)
    assert out.m_values == [1] and not out.accepted
    assert "w_n" in out.reason


def test_secondary_empty_m_range():
    out = secondary_check(make_case("iiib", 7), 1, 1)
    assert out.m_values == [] and "empty" in out.reason


def test_secondary_accepts_planted_square():
    out = secondary_check(make_case("iiib", 7), 3, 4, term_fn=lambda n: 49)
    assert out.accepted and out.witness["root"] == "7"


def test_secondary_iiia1_planted_square():
    # A pair with a tiny linear form opens a long m-range; a planted square must be caught.
    case = make_case("iiia1", 2)
    nums = case_numbers(case, 256)
    conv, _ = convergents(lambda b: case_numbers(case, b).target, 10**9)
    p, q = conv.convergents[-1]
    out = secondary_check(case, p, q, 256, term_fn=lambda n: 10**6 if n == 3 else 2)
    assert out.accepted and out.witness["n"] == 3


@pytest.mark.parametrize("kind, first, last", [("iiia1", 2, 20), ("iiia2", 2, 60), ("iiib", 4, 300), ("iiic", 2, 80)])
def test_small_ranges_clean(kind, first, last):
    s = verify_range(kind, first, last)
    assert s.ok and not s.violations and not s.classical_bound_failures


def test_iiia2_direct_pairs_are_checked():
    rep = verify_case(make_case("iiia2", 2))
    direct = [f for f in rep.fired if f.source == "direct"]
    assert direct, "the u in {1, 2} enumeration should produce at least one firing pair at c = 2"
    assert all(f.outcome == "reject" for f in direct)


def test_classical_bound_check():
    conv, _ = convergents(lambda b: arb.pi(), 10**5)
    lo = Fraction(314159265358979, 10**14)
    assert classical_bound_holds(lo, lo + Fraction(1, 10**14), conv)


def test_chunked_run_matches_direct(tmp_path):
    direct = verify_range("iiic", 2, 40)
    chunked = run_reduction("iiic", 2, 40, chunk=7, checkpoint=tmp_path / "cp.json")
    assert chunked.to_record() == direct.to_record() | {"first": 2, "last": 40}
