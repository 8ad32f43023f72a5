"""Certified values of alpha, beta, theta, theta', phi, xi, mu, mu' and the estimate suites.

Every quantity is an arb ball, so an inequality is reported as holding only
when the two balls separate.  Undecided comparisons are retried at doubled
precision up to a cap and reported as undecided beyond it.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Iterable

from flint import acb, arb

from .balls import DEFAULT_PRECISION, PRECISION_CAP, Verdict, decide, q, radius, working_precision


class DomainError(ValueError):
    pass


def c_of(a: int) -> int | None:
    """c >= 2 with a = c^2 + 1, if it exists."""
    c = math.isqrt(a - 1)
    return c if c >= 2 and c * c + 1 == a else None


@dataclass(frozen=True)
class AlgebraicContext:
    a: int
    c: int | None
    precision: int
    alpha: arb
    beta: arb
    theta: arb
    thetaP: arb
    phi: arb
    xi: arb
    mu: arb | None
    muP: arb | None

    def radii(self) -> dict[str, float]:
        names = ["alpha", "beta", "theta", "thetaP", "phi", "xi", "mu", "muP"]
        return {n: float(radius(getattr(self, n))) for n in names if getattr(self, n) is not None}

    def residuals(self) -> dict[str, arb]:
        """Defining-polynomial values; each ball must contain zero."""
        a = self.a
        with working_precision(self.precision):
            t2, f2, x2 = self.theta**2, self.phi**2, self.xi**2
            return {
                "alpha*beta-1": self.alpha * self.beta - 1,
                "theta": t2 * t2 - (a + 2) * t2 + (a + 2),
                "phi": f2 * f2 + (a - 2) * f2 - (a - 2),
                "xi": x2 * x2 - (a - 2) * x2 - (a - 2),
                "theta*theta'-sqrt(a+2)": self.theta * self.thetaP - arb(a + 2).sqrt(),
            }


def build_context(a: int, precision: int = DEFAULT_PRECISION, c: int | None = None) -> AlgebraicContext:
    """Evaluate all quantities for b = -1 at `precision` bits; c is inferred from a = c^2 + 1."""
    if a < 4:
        raise DomainError(f"a must be >= 4, got {a}")
    if precision < 64:
        raise DomainError("precision must be at least 64 bits")
    if c is None:
        c = c_of(a)
    elif c * c + 1 != a:
        raise DomainError(f"a={a} is not c^2+1 for c={c}")
    with working_precision(precision):
        sqrt_delta = arb(a * a - 4).sqrt()
        alpha = (a + sqrt_delta) / 2
        # beta = (a - sqrt(D))/2 cancels badly; use 2/(a + sqrt(D)) instead
        beta = 2 / (a + sqrt_delta)
        theta = (alpha + 1).sqrt()
        thetaP = (beta + 1).sqrt()
        phi = (1 - beta).sqrt()
        xi = (alpha - 1).sqrt()
        mu = muP = None
        if c is not None:
            mu = alpha + c * theta
            muP = thetaP * thetaP + c * thetaP - 1
    return AlgebraicContext(a, c, precision, alpha, beta, theta, thetaP, phi, xi, mu, muP)


# Inequalities. Each is a strict "lhs < rhs" evaluated on a context.

Pair = tuple[arb, arb]


@dataclass(frozen=True)
class Inequality:
    name: str
    family: str  # "a" (all a >= 4) or "c" (a = c^2 + 1)
    evaluate: Callable[[AlgebraicContext], Pair]


def _a_family() -> list[Inequality]:
    def A(name, f):
        return Inequality(name, "a", f)

    def ra(x):  # a as a ball
        return arb(x.a)

    def poly_alpha(x):
        a = ra(x)
        return a - 1 / a - 1 / a**3

    def theta_center(x):
        a = ra(x)
        s = a.sqrt()
        return s + 1 / (2 * s)

    def ratio_t(x):
        return (x.theta + 1) / (x.theta - 1)

    def ratio_tp(x):
        return (x.thetaP + 1) / (x.thetaP - 1)

    def series_ratio(x):
        a = ra(x)
        s = a.sqrt()
        return 1 + 2 / s + 2 / a

    return [
        A("alpha > a - 1/a - 1/a^3 - 32/(13a^5)", lambda x: (poly_alpha(x) - q(32, 13) / ra(x) ** 5, x.alpha)),
        A("alpha < a - 1/a - 1/a^3", lambda x: (x.alpha, poly_alpha(x))),
        A("alpha > 0.933a", lambda x: (q(933, 1000) * x.a, x.alpha)),
        A("alpha < a", lambda x: (x.alpha, ra(x))),
        A("theta > sqrt(a) + 1/(2sqrt(a)) - 1/a^(3/2)", lambda x: (theta_center(x) - 1 / ra(x) ** q(3, 2), x.theta)),
        A("theta < sqrt(a) + 1/(2sqrt(a)) - 1/(2a^(3/2))", lambda x: (x.theta, theta_center(x) - 1 / (2 * ra(x) ** q(3, 2)))),
        A("theta > sqrt(0.933a + 1)", lambda x: ((q(933, 1000) * x.a + 1).sqrt(), x.theta)),
        A("theta < sqrt(a + 1)", lambda x: (x.theta, (ra(x) + 1).sqrt())),
        A("beta > 1/a + 1/a^3", lambda x: (1 / ra(x) + 1 / ra(x) ** 3, x.beta)),
        A("beta < 1/a + 1/a^3 + 32/(13a^5)", lambda x: (x.beta, 1 / ra(x) + 1 / ra(x) ** 3 + q(32, 13) / ra(x) ** 5)),
        A("beta > 0", lambda x: (arb(0), x.beta)),
        A("beta < 0.268", lambda x: (x.beta, q(268, 1000))),
        A("theta' > 1", lambda x: (arb(1), x.thetaP)),
        A("theta' < 1.127", lambda x: (x.thetaP, q(1127, 1000))),
        A("(theta+1)/(theta-1) > 1 + 2a^(-1/2) + 2a^(-1)", lambda x: (series_ratio(x), ratio_t(x))),
        A(
            "(theta+1)/(theta-1) < 1 + 2a^(-1/2) + 2a^(-1) + 2a^(-3/2)",
            lambda x: (ratio_t(x), series_ratio(x) + 2 / ra(x) ** q(3, 2)),
        ),
        A("(theta+1)/(theta-1) > 1", lambda x: (arb(1), ratio_t(x))),
        A("(theta+1)/(theta-1) < 2.71", lambda x: (ratio_t(x), q(271, 100))),
        A("(theta-1)/(theta+1) > 0.37", lambda x: (q(37, 100), 1 / ratio_t(x))),
        A("(theta-1)/(theta+1) < 1", lambda x: (1 / ratio_t(x), arb(1))),
        A("(theta'+1)/(theta'-1) > 4a", lambda x: (4 * ra(x), ratio_tp(x))),
        A("(theta'+1)/(theta'-1) < 17a/4", lambda x: (ratio_tp(x), 17 * ra(x) / 4)),
        A("(theta'-1)/(theta'+1) > 0", lambda x: (arb(0), 1 / ratio_tp(x))),
        A("(theta'-1)/(theta'+1) < 0.0593", lambda x: (1 / ratio_tp(x), q(593, 10000))),
        A("xi > 0", lambda x: (arb(0), x.xi)),
        A("xi < sqrt(a - 1)", lambda x: (x.xi, (ra(x) - 1).sqrt())),
        A("phi > 0", lambda x: (arb(0), x.phi)),
        A("phi < 1", lambda x: (x.phi, arb(1))),
        A("(1+phi)/(1-phi) > 0", lambda x: (arb(0), (1 + x.phi) / (1 - x.phi))),
        A("(1+phi)/(1-phi) < 4a", lambda x: ((1 + x.phi) / (1 - x.phi), 4 * ra(x))),
        A("log((theta+1)/(theta-1)) < 2a^(-1/2) + 2a^(-1) + 2a^(-3/2)",
          lambda x: (ratio_t(x).log(), series_ratio(x) - 1 + 2 / ra(x) ** q(3, 2))),
    ]


def ell_first_case(x: AlgebraicContext) -> Pair:
    """(log(beta*mu'^2), log((theta'+1)/(theta'-1)))."""
    return (x.beta * x.muP**2).log(), ((x.thetaP + 1) / (x.thetaP - 1)).log()


def ell_second_case(x: AlgebraicContext) -> Pair:
    """(log((theta+1)/(theta-1)), log(alpha*mu^2))."""
    return ((x.theta + 1) / (x.theta - 1)).log(), (x.alpha * x.mu**2).log()


def _c_family() -> list[Inequality]:
    def C(name, f):
        return Inequality(name, "c", f)

    def rc(x):
        return arb(x.c)

    def mup_center(x):
        c = rc(x)
        return c + 1 / (2 * c) + 1 / c**2 - q(5, 8) / c**3 - 1 / c**4

    def conj_mu(x):  # 1 + c*theta - theta^2
        return 1 + x.c * x.theta - x.theta**2

    def conj_mup(x):
        return 1 + x.c * x.thetaP - x.thetaP**2

    def ell1_poly(x):
        c = rc(x)
        return 2 / c**3 - 3 / c**5

    def cubic(x, k):
        return 2 * rc(x) ** 3 + 3 * rc(x) + k

    return [
        C("beta < 1/c^2", lambda x: (x.beta, 1 / rc(x) ** 2)),
        C("mu > 2c^2 + 2 - 19/(8c^2)", lambda x: (2 * rc(x) ** 2 + 2 - q(19, 8) / rc(x) ** 2, x.mu)),
        C("mu < 2c^2 + 2", lambda x: (x.mu, 2 * rc(x) ** 2 + 2)),
        C("mu' > c + 1/(2c) + 1/c^2 - 5/(8c^3) - 1/c^4 + 5/(4c^5)", lambda x: (mup_center(x) + q(5, 4) / rc(x) ** 5, x.muP)),
        C("mu' < c + 1/(2c) + 1/c^2 - 5/(8c^3) - 1/c^4 + 17/c^5", lambda x: (x.muP, mup_center(x) + 17 / rc(x) ** 5)),
        C("2c^3 < 2c^3 + 3c + 1", lambda x: (2 * rc(x) ** 3, cubic(x, 1))),
        C("mu*mu' > 2c^3 + 3c + 1", lambda x: (cubic(x, 1), x.mu * x.muP)),
        C("mu*mu' < 2c^3 + 3c + 2", lambda x: (x.mu * x.muP, cubic(x, 2))),
        C("2c^3 + 3c + 2 <= 3c^3", lambda x: (cubic(x, 2), 3 * rc(x) ** 3 + q(1, 2))),
        C("(theta+1)*mu > 0", lambda x: (arb(0), (x.theta + 1) * x.mu)),
        C("(theta+1)*mu < 4.09c^3", lambda x: ((x.theta + 1) * x.mu, q(409, 100) * rc(x) ** 3)),
        C("(theta-1)*mu > 0", lambda x: (arb(0), (x.theta - 1) * x.mu)),
        C("(theta-1)*mu < 2c^3", lambda x: ((x.theta - 1) * x.mu, 2 * rc(x) ** 3)),
        C("(theta+1)(1+c*theta-theta^2) > 0", lambda x: (arb(0), (x.theta + 1) * conj_mu(x))),
        C("(theta+1)(1+c*theta-theta^2) < 1", lambda x: ((x.theta + 1) * conj_mu(x), arb(1))),
        C("(theta-1)(1+c*theta-theta^2) > 0", lambda x: (arb(0), (x.theta - 1) * conj_mu(x))),
        C("(theta-1)(1+c*theta-theta^2) < 1", lambda x: ((x.theta - 1) * conj_mu(x), arb(1))),
        C("(theta'+1)*mu' > 0", lambda x: (arb(0), (x.thetaP + 1) * x.muP)),
        C("(theta'+1)*mu' < 2.53c", lambda x: ((x.thetaP + 1) * x.muP, q(253, 100) * rc(x))),
        C("(theta'-1)*mu' > 0", lambda x: (arb(0), (x.thetaP - 1) * x.muP)),
        C("(theta'-1)*mu' < 1", lambda x: ((x.thetaP - 1) * x.muP, arb(1))),
        C("(theta'+1)(1+c*theta'-theta'^2) > 0", lambda x: (arb(0), (x.thetaP + 1) * conj_mup(x))),
        C("(theta'+1)(1+c*theta'-theta'^2) < 2.09c", lambda x: ((x.thetaP + 1) * conj_mup(x), q(209, 100) * rc(x))),
        C("(theta'-1)(1+c*theta'-theta'^2) > 0", lambda x: (arb(0), (x.thetaP - 1) * conj_mup(x))),
        C("(theta'-1)(1+c*theta'-theta'^2) < 0.1c", lambda x: ((x.thetaP - 1) * conj_mup(x), rc(x) / 10)),
        C("beta*mu'^2 > 1 + 2/c^3 - 3/c^5", lambda x: (1 + ell1_poly(x), x.beta * x.muP**2)),
        C("beta*mu'^2 < 1 + 2/c^3 - 3/c^5 + 34/c^6", lambda x: (x.beta * x.muP**2, 1 + ell1_poly(x) + 34 / rc(x) ** 6)),
        C("ell1 > 2/c^3 - 3/c^5 - 2/c^6", lambda x: (ell1_poly(x) - 2 / rc(x) ** 6, ell_first_case(x)[0])),
        C("ell1 < 2/c^3 - 3/c^5 + 34/c^6", lambda x: (ell_first_case(x)[0], ell1_poly(x) + 34 / rc(x) ** 6)),
        C("1/ell1 > c^3/2 + 3c/4 - 17/2", lambda x: (rc(x) ** 3 / 2 + 3 * rc(x) / 4 - q(17, 2), 1 / ell_first_case(x)[0])),
        C("ell2/ell1 - 0.14 > c^3 log(2c)  [first case]", _ratio_first),
        C("alpha*mu^2 > 4c^6", lambda x: (4 * rc(x) ** 6, x.alpha * x.mu**2)),
        C("ell2/ell1 - 4.32/c^4 > 2c log c  [second case]", _ratio_second),
    ]


def _ratio_first(x: AlgebraicContext) -> Pair:
    l1, l2 = ell_first_case(x)
    c = arb(x.c)
    return c**3 * (2 * c).log(), l2 / l1 - q(14, 100)


def _ratio_second(x: AlgebraicContext) -> Pair:
    l1, l2 = ell_second_case(x)
    c = arb(x.c)
    return 2 * c * c.log(), l2 / l1 - q(432, 100) / c**4


A_ESTIMATES = _a_family()
C_ESTIMATES = _c_family()


@dataclass
class EstimateEntry:
    inequality: str
    parameter: str
    verdict: str
    bits: int


@dataclass
class EstimateReport:
    a_values: int = 0
    c_values: int = 0
    checks: int = 0
    passed: int = 0
    failures: list[EstimateEntry] = field(default_factory=list)
    undecided: list[EstimateEntry] = field(default_factory=list)
    max_bits: int = 0
    ell1_behaviour: list[dict] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.undecided

    def to_record(self) -> dict:
        return {
            "a_values": self.a_values,
            "c_values": self.c_values,
            "checks": self.checks,
            "passed": self.passed,
            "failures": [e.__dict__ for e in self.failures],
            "undecided": [e.__dict__ for e in self.undecided],
            "max_bits": self.max_bits,
            "ell1_behaviour": self.ell1_behaviour,
        }


def _check_parameter(report: EstimateReport, a: int, c: int | None, suite: list[Inequality],
                     bits: int, cap: int) -> None:
    contexts: dict[int, AlgebraicContext] = {}

    def context_at(b: int) -> AlgebraicContext:
        if b not in contexts:
            contexts[b] = build_context(a, b, c)
        return contexts[b]

    label = f"a={a}" if c is None else f"c={c}"
    for ineq in suite:
        verdict, used = decide(lambda b: ineq.evaluate(context_at(b)), bits, cap)
        report.checks += 1
        report.max_bits = max(report.max_bits, used)
        if verdict is Verdict.TRUE:
            report.passed += 1
        elif verdict is Verdict.FALSE:
            report.failures.append(EstimateEntry(ineq.name, label, "fail", used))
        else:
            report.undecided.append(EstimateEntry(ineq.name, label, "undecided", used))


def verify_estimates(
    a_values: Iterable[int],
    c_values: Iterable[int],
    bits: int = DEFAULT_PRECISION,
    cap: int = PRECISION_CAP,
    ell1_samples: Iterable[int] = (2, 3, 5, 10, 50, 100, 1000),
) -> EstimateReport:
    """Check every a-family inequality at each a and every c-family inequality at each c."""
    start = time.perf_counter()
    report = EstimateReport()
    for a in a_values:
        report.a_values += 1
        _check_parameter(report, a, None, A_ESTIMATES, bits, cap)
    for c in c_values:
        report.c_values += 1
        _check_parameter(report, c * c + 1, c, C_ESTIMATES, bits, cap)
    report.ell1_behaviour = ell1_footnote_measurements(ell1_samples, bits)
    report.seconds = time.perf_counter() - start
    return report


def random_large_samples(count: int, seed: int = 20240501, a_max: int = 10**9, c_max: int = 10**6) -> tuple[list[int], list[int]]:
    rng = random.Random(seed)
    a_vals = sorted(rng.randint(10**4 + 1, a_max) for _ in range(count))
    c_vals = sorted(rng.randint(10**3 + 1, c_max) for _ in range(count))
    return a_vals, c_vals


def ell1_footnote_measurements(c_values: Iterable[int], bits: int = DEFAULT_PRECISION) -> list[dict]:
    """Compare ell1 with the empirical expansion 2/c^3 - 3/c^5 + 27/(8c^7) (reported, not asserted)."""
    out = []
    for c in c_values:
        x = build_context(c * c + 1, bits, c)
        with working_precision(bits):
            l1 = ell_first_case(x)[0]
            cc = arb(c)
            guess = 2 / cc**3 - 3 / cc**5 + q(27, 8) / cc**7
            scaled_gap = (l1 - guess) * cc**9
        out.append({"c": c, "ell1": float(l1.mid()), "scaled_gap_c9": float(scaled_gap.mid())})
    return out


# Analytic bounds on sqrt(1+x), log(1+x) and Log(1-z)


@dataclass
class SelfCheckReport:
    checks: int = 0
    failures: list[str] = field(default_factory=list)
    undecided: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.undecided


def _real_grid_positive() -> list[Fraction]:
    pts = [Fraction(k, 1000) for k in range(1, 1001, 7)] + [Fraction(k, 4) for k in range(1, 400)]
    pts += [Fraction(1, 2**k) for k in range(1, 40)] + [Fraction(10**k) for k in range(1, 8)]
    return pts


def _real_grid_negative() -> list[Fraction]:
    pts = [Fraction(-k, 1000) for k in range(1, 290)]
    return pts + [Fraction(-1, 2**k) for k in range(2, 40)] + [Fraction(-2899, 10000), Fraction(-28999, 100000)]


def _complex_grid(step: int = 3) -> list[tuple[Fraction, Fraction]]:
    """Points (j + k i)/100 strictly inside |z| < 3/5, excluding 0."""
    out = []
    for j in range(-59, 60, step):
        for k in range(-59, 60, step):
            if 0 < j * j + k * k < 3600:
                out.append((Fraction(j, 100), Fraction(k, 100)))
    return out


def _ball(x: Fraction) -> arb:
    return arb(x.numerator) / x.denominator


def analytic_bounds_selfcheck(bits: int = 256, cap: int = PRECISION_CAP) -> SelfCheckReport:
    """Certify the sqrt, log and complex Log bounds on grids of exact rational sample points."""
    rep = SelfCheckReport()

    def record(name: str, evaluate: Callable[[], Pair]) -> None:
        verdict, _ = decide(lambda b: evaluate(), bits, cap)
        rep.checks += 1
        if verdict is Verdict.FALSE:
            rep.failures.append(name)
        elif verdict is Verdict.UNDECIDED:
            rep.undecided.append(name)

    def sq(t: Fraction):
        x = _ball(t)
        return x, 1 + x / 2 - x**2 / 8, (1 + x).sqrt()

    for t in _real_grid_positive():
        record(f"sqrt lower x={t}", lambda: sq(t)[1:])
        record(f"sqrt upper x={t}", lambda: (sq(t)[2], sq(t)[1] + _ball(t) ** 3 / 16))
        record(f"log lower x={t}", lambda: (_ball(t) - _ball(t) ** 2 / 2, (1 + _ball(t)).log()))
        record(f"log upper x={t}", lambda: ((1 + _ball(t)).log(), _ball(t)))
    for t in _real_grid_negative():
        record(f"sqrt lower x={t}", lambda: (sq(t)[1] + _ball(t) ** 3 / 13, sq(t)[2]))
        record(f"sqrt upper x={t}", lambda: (sq(t)[2], sq(t)[1]))
    for re, im in _complex_grid():
        def complex_pair():
            z = acb(_ball(re), _ball(im))
            return abs((1 - z).log()), abs(z) + abs(z) ** 2

        record(f"Log(1-z) z={re}+{im}i", complex_pair)
    return rep
