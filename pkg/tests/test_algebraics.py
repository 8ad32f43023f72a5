import mpmath
import pytest
from flint import arb

from nearsq.algebraics import (
    A_ESTIMATES,
    C_ESTIMATES,
    DomainError,
    analytic_bounds_selfcheck,
    build_context,
    ell_first_case,
    random_large_samples,
    verify_estimates,
)
from nearsq.balls import Verdict, decide, endpoints, working_precision


def _mp_values(a: int, c: int | None, dps: int = 60) -> dict:
    """Independent evaluation with mpmath at a different working precision."""
    with mpmath.workdps(dps):
        d = mpmath.sqrt(a * a - 4)
        alpha, beta = (a + d) / 2, (a - d) / 2
        out = {"alpha": alpha, "beta": beta, "theta": mpmath.sqrt(alpha + 1), "thetaP": mpmath.sqrt(beta + 1),
               "phi": mpmath.sqrt(1 - beta), "xi": mpmath.sqrt(alpha - 1)}
        if c is not None:
            out["mu"] = out["theta"] ** 2 + c * out["theta"] - 1
            out["muP"] = out["thetaP"] ** 2 + c * out["thetaP"] - 1
        return out


@pytest.mark.parametrize("a", [4, 5, 10, 17, 101, 10**6 + 1, 123456789])
def test_context_agrees_with_mpmath(a):
    x = build_context(a, 192)
    ref = _mp_values(a, x.c)
    for name, value in ref.items():
        ball = getattr(x, name)
        lo, hi = endpoints(ball)
        v = mpmath.mpf(value)
        assert float(lo) - 1e-40 <= v <= float(hi) + 1e-40
        assert abs(mpmath.mpf(ball.mid().str(50, radius=False)) - v) < mpmath.mpf(10) ** -45


def test_frozen_values():
    x = build_context(5, 128)
    assert 9.40625 < float(x.mu.mid()) < 10 and abs(float(x.mu.mid()) - 9.6043) < 1e-4
    y = build_context(4, 128)
    assert y.beta > 0 and y.beta < arb("0.268")
    assert y.thetaP > 1 and y.thetaP < arb("1.127")
    assert (y.alpha * y.beta - 1).contains(0)


def test_residuals_contain_zero_and_shrink():
    for a in (5, 26, 1000):
        lo, hi = build_context(a, 128), build_context(a, 256)
        for name, r in lo.residuals().items():
            r2 = hi.residuals()[name]
            assert r.contains(0) and r2.contains(0)
            assert r2.rad() < r.rad() or r.rad() == 0
            assert r.rad() < arb(2) ** -64


def test_conjugate_product_identity():
    x = build_context(26, 256)
    with working_precision(256):
        d = (1 + 5 * x.theta - x.theta**2) * (1 - 5 * x.theta - x.theta**2) + x.beta
    assert d.contains(0)


def test_domain_errors():
    with pytest.raises(DomainError):
        build_context(3)
    with pytest.raises(DomainError):
        build_context(10, 32)


def test_c_left_unset_for_non_square_shift():
    assert build_context(7).c is None and build_context(10).c == 3


def test_ell_ratio_example_c2():
    x = build_context(5, 256)
    with working_precision(256):
        l1, l2 = ell_first_case(x)
        assert l2 / l1 - arb("0.14") > 8 * arb(4).log()


def test_suites_are_populated():
    assert len(A_ESTIMATES) >= 20 and len(C_ESTIMATES) >= 20
    assert {i.family for i in A_ESTIMATES} == {"a"} and {i.family for i in C_ESTIMATES} == {"c"}


def test_estimates_small_ranges():
    rep = verify_estimates(range(4, 200), range(2, 100))
    assert rep.ok, rep.failures[:3] + rep.undecided[:3]
    assert rep.checks == 196 * len(A_ESTIMATES) + 98 * len(C_ESTIMATES)
    assert rep.ell1_behaviour and all("scaled_gap_c9" in e for e in rep.ell1_behaviour)


def test_estimates_random_large():
    a_vals, c_vals = random_large_samples(100)
    assert verify_estimates(a_vals, c_vals).ok


def test_false_inequality_is_reported():
    verdict, _ = decide(lambda b: (arb(2).sqrt(), arb("1.41")), 64, 256)
    assert verdict is Verdict.FALSE


def test_undecidable_comparison_escalates_to_cap():
    verdict, bits = decide(lambda b: (arb(1, 1e-3), arb(1)), 64, 512)
    assert verdict is Verdict.UNDECIDED and bits == 512


def test_analytic_selfcheck():
    rep = analytic_bounds_selfcheck()
    assert rep.ok and rep.checks > 1000


def test_analytic_examples():
    assert 1.375 < 2**0.5 < 1.4375
    x = -0.25
    assert 1 + x / 2 - x * x / 8 + x**3 / 13 < 0.75**0.5 < 1 + x / 2 - x * x / 8
    assert abs(mpmath.log(0.5)) < 0.75
