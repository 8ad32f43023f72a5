"""Certified continued fractions and the four convergent-checking reductions.

Each reduction has a target real x, a denominator cap, and a right-hand side
RHS(q).  Every convergent p/q of x with q below the cap is tested for
|x - p/q| < RHS(q).  A convergent that satisfies it "fires" and is passed to an
exact secondary check: the size of the linear form bounds an integer m, and the
sequence term that would have to be a square is tested for every admissible m.
A violation is recorded only if such a term is an actual square.

Inequalities are compared in log form because B^q overflows any float range.
"""

from __future__ import annotations

import enum
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import gmpy2
from flint import acb, arb

from .algebraics import build_context, ell_first_case, ell_second_case
from .balls import PRECISION_CAP, Verdict, endpoints, working_precision
from .sequences import RecurrenceParams, SequenceKind, term


class CaseKind(enum.Enum):
    IIIA1 = "iiia1"
    IIIA2 = "iiia2"
    IIIB = "iiib"
    IIIC = "iiic"


# Caps and constants, carried exactly as used at each point of the argument.
Q_MAX_IIIA1 = 2_332_000
Q_MAX_IIIA2 = 28_500_000
V_LARGE_IIIB, V_SMALL_IIIB, IIIB_SPLIT = 25_000, 280_000, 750
V_LARGE_IIIC, V_SMALL_IIIC, IIIC_SPLIT = 25_000, 200_000, 6

PARAMETER_RANGES = {
    CaseKind.IIIA1: (2, 77),
    CaseKind.IIIA2: (2, 1_030_000),
    CaseKind.IIIB: (4, 915_000_000),
    CaseKind.IIIC: (2, 16_000),
}
DESK_MAX = {CaseKind.IIIA1: 77, CaseKind.IIIA2: 10_000, CaseKind.IIIB: 10_000, CaseKind.IIIC: 16_000}


@dataclass(frozen=True)
class CaseConstants:
    rhs_constant: tuple[int, int]  # numerator, denominator
    lambda_constant: tuple[int, int]
    beta_offset: tuple[int, int]  # |Lambda| < C * beta^(2m + offset)
    sequence: SequenceKind
    index_offset: int  # n = 2m + offset
    parameter_name: str


CONSTANTS = {
    CaseKind.IIIA1: CaseConstants((64, 10), (21, 10), (3, 2), SequenceKind.T, 1, "c"),
    CaseKind.IIIA2: CaseConstants((663, 100), (2152, 1000), (1, 2), SequenceKind.T, 0, "c"),
    CaseKind.IIIB: CaseConstants((481, 100), (2149, 1000), (1, 2), SequenceKind.W, 0, "a"),
    CaseKind.IIIC: CaseConstants((4781, 1000), (2138, 1000), (3, 2), SequenceKind.W, 1, "c"),
}

CONSTANT_NOTE = (
    "IIIb uses 4.81 in the convergent inequality; IIIc uses 4.781 there while its "
    "exponent-range bound uses 4.8478; each case carries its own constant."
)


@dataclass(frozen=True)
class ReductionCase:
    kind: CaseKind
    parameter: int
    q_max: int

    @property
    def a(self) -> int:
        return self.parameter if self.kind is CaseKind.IIIB else self.parameter**2 + 1

    @property
    def c(self) -> int | None:
        return None if self.kind is CaseKind.IIIB else self.parameter

    @property
    def constants(self) -> CaseConstants:
        return CONSTANTS[self.kind]

    def admissible(self, p: int, q: int) -> bool:
        """Sign constraints on the exponent pair proven before the reduction step."""
        if self.kind is CaseKind.IIIB:
            return 1 <= p < q
        return p >= 1


def make_case(kind: CaseKind | str, parameter: int) -> ReductionCase:
    kind = CaseKind(kind) if isinstance(kind, str) else kind
    lo, hi = PARAMETER_RANGES[kind]
    if not lo <= parameter <= hi:
        raise ValueError(f"{kind.value} parameter must lie in {lo}..{hi}, got {parameter}")
    if kind is CaseKind.IIIA1:
        cap = Q_MAX_IIIA1
    elif kind is CaseKind.IIIA2:
        cap = Q_MAX_IIIA2
    elif kind is CaseKind.IIIB:
        cap = V_LARGE_IIIB if parameter >= IIIB_SPLIT else V_SMALL_IIIB
    else:
        cap = V_LARGE_IIIC if parameter >= IIIC_SPLIT else V_SMALL_IIIC
    return ReductionCase(kind, parameter, cap)


def base_precision(q_max: int) -> int:
    return 2 * math.ceil(math.log2(q_max)) + 96


def _r(frac: tuple[int, int]) -> arb:
    return arb(frac[0]) / frac[1]


# Case-specific numbers at a given precision


@dataclass
class CaseNumbers:
    target: arb
    beta: arb
    log_rhs: Callable[[int], arb]
    linear_form: Callable[[int, int], arb]  # |Lambda| for the convergent p/q
    extras: dict


def bounds(c: int, bits: int = 256) -> dict:
    """B1(c), B2(c) and their exponents delta; also certifies the floors B1 > 1.5c^3 and B2 > c."""
    x = build_context(c * c + 1, bits, c)
    with working_precision(bits):
        cc = arb(c)
        d1 = 1 / (cc**3 * (2 * cc).log())
        d2 = 1 / (2 * cc * (2 * cc).log())
        tt = (x.theta + 1) * (x.thetaP + 1)
        mm = x.mu * x.muP
        b1 = mm / tt**d1
        b2 = tt / mm**d2
        floor1 = bool(b1 > 3 * cc**3 / 2)
        floor2 = bool(b2 > cc)
    return {"B1": b1, "B2": b2, "delta1": d1, "delta2": d2, "B1>1.5c^3": floor1, "B2>c": floor2}


def case_numbers(case: ReductionCase, bits: int) -> CaseNumbers:
    k = case.constants
    with working_precision(bits):
        if case.kind in (CaseKind.IIIA1, CaseKind.IIIA2):
            x = build_context(case.a, bits, case.c)
            with working_precision(bits):
                b = bounds(case.c, bits)
                if case.kind is CaseKind.IIIA1:
                    l1, l2 = ell_first_case(x)
                    log_b = b["B1"].log()
                else:
                    l1, l2 = ell_second_case(x)
                    log_b = b["B2"].log()
                log_const = _r(k.rhs_constant).log() - l2.log()

                def log_rhs(q: int) -> arb:
                    return log_const - arb(q).log() - q * log_b

                def linear_form(p: int, q: int) -> arb:
                    return abs(q * l1 - p * l2)

                return CaseNumbers(l1 / l2, x.beta, log_rhs, linear_form,
                                   {"ell1": l1, "ell2": l2, "log_B": log_b})
        x = build_context(case.a, bits, case.c)
        with working_precision(bits):
            if case.kind is CaseKind.IIIB:
                z = acb(1, x.xi) / acb(1, -x.xi)
                log_base = (arb(7) / 4 * arb(case.a).sqrt()).log()
            else:
                z = acb(case.c, x.phi) / acb(case.c, -x.phi)
                log_base = (2 * arb(case.c) ** 2).log()
            if not z.imag > 0:
                raise ArithmeticError("argument too close to the branch cut")
            arg = z.arg()
            pi = arb.pi()
            log_const = _r(k.rhs_constant).log() - pi.log()

            def log_rhs(q: int) -> arb:
                return log_const - arb(q).log() - q * log_base

            def linear_form(p: int, q: int) -> arb:
                return abs(q * arg - p * pi)

            return CaseNumbers(arg / pi, x.beta, log_rhs, linear_form, {"arg": arg})


# Continued fractions


@dataclass(frozen=True)
class ConvergentList:
    convergents: tuple[tuple[int, int], ...]
    next_q: int | None  # denominator of the first convergent at or beyond the cap; None if x is rational

    def __iter__(self):
        return iter(self.convergents)


def convergents_of_interval(lo: Fraction, hi: Fraction, q_limit: int) -> ConvergentList | None:
    """Convergents with q < q_limit shared by every real in [lo, hi]; None if the interval is too wide."""
    h1, h2, k1, k2 = 1, 0, 0, 1
    out = []
    while True:
        a_lo, a_hi = math.floor(lo), math.floor(hi)
        if a_lo != a_hi:
            return None
        a = a_lo
        h, k = a * h1 + h2, a * k1 + k2
        if k >= q_limit:
            return ConvergentList(tuple(out), k)
        out.append((h, k))
        h1, h2, k1, k2 = h, h1, k, k1
        f_lo, f_hi = lo - a, hi - a
        if f_lo == 0:
            if f_hi == 0:
                return ConvergentList(tuple(out), None)
            return None
        lo, hi = 1 / f_hi, 1 / f_lo


def convergents(x: Callable[[int], arb] | Fraction, q_limit: int, bits: int = 128,
                cap: int = PRECISION_CAP) -> tuple[ConvergentList | None, int]:
    """Convergents below q_limit, computed at bits P and 2P and required to agree.

    `x` is either an exact rational or a function returning the ball at a given precision.
    Returns (None, bits) when the cap is reached without agreement.
    """
    if isinstance(x, Fraction):
        return convergents_of_interval(x, x, q_limit), bits
    p = bits
    while 2 * p <= cap:
        with working_precision(p):
            first = convergents_of_interval(*endpoints(x(p)), q_limit)
        with working_precision(2 * p):
            second = convergents_of_interval(*endpoints(x(2 * p)), q_limit)
        if first is not None and second is not None:
            if first != second:
                raise ArithmeticError("certified convergent lists disagree between precisions")
            return first, p
        p *= 2
    return None, p


def classical_bound_holds(lo: Fraction, hi: Fraction, conv: ConvergentList) -> bool:
    """|x - p_i/q_i| < 1/(q_i q_(i+1)) for every x in [lo, hi] and every listed convergent."""
    qs = [q for _, q in conv.convergents] + ([conv.next_q] if conv.next_q else [])
    for i, (p, q) in enumerate(conv.convergents):
        if i + 1 >= len(qs):
            break
        r = Fraction(p, q)
        worst = max(abs(lo - r), abs(hi - r))
        if not worst < Fraction(1, q * qs[i + 1]):
            return False
    return True


# Secondary check


@dataclass
class SecondaryOutcome:
    accepted: bool
    m_values: list[int]
    reason: str
    witness: dict | None = None


def secondary_check(case: ReductionCase, p: int, q: int, bits: int = 256,
                    term_fn: Callable[[int], int] | None = None, m_cap: int = 10_000) -> SecondaryOutcome:
    """Bound m from |Lambda| < C*beta^(2m+offset) and test the corresponding sequence terms for squares."""
    k = case.constants
    if term_fn is None:
        params = RecurrenceParams.classical(case.a)
        term_fn = lambda n: term(params, k.sequence, n)  # noqa: E731
    nums = case_numbers(case, bits)
    m_values: list[int] = []
    with working_precision(bits):
        lam = nums.linear_form(p, q)
        const = _r(k.lambda_constant)
        offset = _r(k.beta_offset)
        m = 1
        while m <= m_cap:
            bound = const * nums.beta ** (2 * m + offset)
            if lam >= bound:  # certified outside; larger m only shrink the bound
                break
            m_values.append(m)
            m += 1
    if not m_values:
        return SecondaryOutcome(False, [], "m-range empty: |Lambda| exceeds the bound at m = 1")
    for m in m_values:
        n = 2 * m + k.index_offset
        value = term_fn(n)
        if value >= 0 and gmpy2.is_square(value):
            return SecondaryOutcome(True, m_values, "square found",
                                    {"m": m, "n": n, "term": str(value), "root": str(gmpy2.isqrt(value))})
    return SecondaryOutcome(False, m_values, f"no square among {k.sequence.value}_n for m in 1..{m_values[-1]}")


# Verification of one parameter


@dataclass
class FiredPair:
    p: int
    q: int
    admissible: bool
    log_lhs: float
    log_rhs: float
    linear_form: float
    source: str  # "convergent" or "direct"
    outcome: str
    reason: str
    m_values: list[int] = field(default_factory=list)
    witness: dict | None = None


@dataclass
class ReductionReport:
    case: str
    parameter: int
    q_max: int
    bits: int
    convergents_examined: int
    direct_pairs_examined: int = 0
    fired: list[FiredPair] = field(default_factory=list)
    violations: list[FiredPair] = field(default_factory=list)
    undecided: list[str] = field(default_factory=list)
    classical_bound_ok: bool = True
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.undecided and self.classical_bound_ok

    def to_record(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        return d


def _fires(nums: CaseNumbers, p: int, q: int) -> tuple[Verdict, arb, arb]:
    diff = abs(nums.target - arb(p) / q)
    rhs = nums.log_rhs(q)
    if diff.contains(0):
        return Verdict.UNDECIDED, diff, rhs
    lhs = diff.log()
    if lhs < rhs:
        return Verdict.TRUE, lhs, rhs
    if lhs >= rhs:
        return Verdict.FALSE, lhs, rhs
    return Verdict.UNDECIDED, lhs, rhs


def _direct_pairs_iiia2(case: ReductionCase, nums: CaseNumbers) -> list[tuple[int, int]]:
    """All (v, u) with u in {1, 2} whose linear form could satisfy |u*l1 - v*l2| < 6.63*B2^(-u)."""
    l1, l2 = nums.extras["ell1"], nums.extras["ell2"]
    pairs = []
    for u in (1, 2):
        reach = (u * l1 + _r(CONSTANTS[CaseKind.IIIA2].rhs_constant) * (-u * nums.extras["log_B"]).exp()) / l2
        v_max = int(math.floor(float(reach.upper()))) + 1
        pairs.extend((v, u) for v in range(-v_max, v_max + 1))
    return pairs


def verify_case(case: ReductionCase, bits: int | None = None, cap: int = PRECISION_CAP) -> ReductionReport:
    start = time.perf_counter()
    p_bits = bits or base_precision(case.q_max)
    cache: dict[int, CaseNumbers] = {}

    def numbers(b: int) -> CaseNumbers:
        if b not in cache:
            cache[b] = case_numbers(case, b)
        return cache[b]

    conv, used = convergents(lambda b: numbers(b).target, case.q_max, p_bits, cap)
    report = ReductionReport(case.kind.value, case.parameter, case.q_max, used, 0)
    if conv is None:
        report.undecided.append("convergents not certified at the precision cap")
        report.seconds = time.perf_counter() - start
        return report
    with working_precision(used):
        lo, hi = endpoints(numbers(used).target)
    report.classical_bound_ok = classical_bound_holds(lo, hi, conv)
    report.convergents_examined = len(conv.convergents)

    candidates = [(p, q, "convergent") for p, q in conv]
    if case.kind is CaseKind.IIIA2:
        with working_precision(used):
            direct = _direct_pairs_iiia2(case, numbers(used))
        report.direct_pairs_examined = len(direct)
        candidates += [(v, u, "direct") for v, u in direct]

    for p, q, source in candidates:
        b = used
        while True:
            with working_precision(b):
                nums = numbers(b)
                if source == "direct":
                    lam = nums.linear_form(p, q)
                    log_lam = lam.log() if not lam.contains(0) else None
                    const = _r(CONSTANTS[CaseKind.IIIA2].rhs_constant)
                    rhs = const.log() - q * nums.extras["log_B"]
                    if log_lam is None:
                        verdict, lhs = Verdict.UNDECIDED, lam
                    else:
                        lhs = log_lam
                        verdict = Verdict.TRUE if lhs < rhs else Verdict.FALSE if lhs >= rhs else Verdict.UNDECIDED
                else:
                    verdict, lhs, rhs = _fires(nums, p, q)
            if verdict is not Verdict.UNDECIDED or b >= cap:
                break
            b = min(2 * b, cap)
        if verdict is Verdict.UNDECIDED:
            report.undecided.append(f"{source} {p}/{q}")
            continue
        if verdict is Verdict.FALSE:
            continue
        outcome = secondary_check(case, p, q, max(b, 256))
        with working_precision(b):
            lam_value = float(numbers(b).linear_form(p, q).mid())
        fired = FiredPair(
            p, q, case.admissible(p, q), float(lhs.mid()), float(rhs.mid()), lam_value, source,
            "accept" if outcome.accepted else "reject", outcome.reason, outcome.m_values, outcome.witness,
        )
        report.fired.append(fired)
        if outcome.accepted:
            report.violations.append(fired)
    report.seconds = time.perf_counter() - start
    return report


@dataclass
class RangeSummary:
    case: str
    first: int
    last: int
    parameters: int = 0
    convergents_examined: int = 0
    direct_pairs_examined: int = 0
    fired_admissible: list[dict] = field(default_factory=list)
    fired_inadmissible: int = 0
    violations: list[dict] = field(default_factory=list)
    undecided: list[dict] = field(default_factory=list)
    classical_bound_failures: list[int] = field(default_factory=list)
    max_bits: int = 0
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.violations and not self.undecided and not self.classical_bound_failures

    def absorb(self, rep: ReductionReport) -> None:
        self.parameters += 1
        self.convergents_examined += rep.convergents_examined
        self.direct_pairs_examined += rep.direct_pairs_examined
        self.max_bits = max(self.max_bits, rep.bits)
        for f in rep.fired:
            if f.admissible:
                self.fired_admissible.append({"parameter": rep.parameter, **asdict(f)})
            else:
                self.fired_inadmissible += 1
        for v in rep.violations:
            self.violations.append({"parameter": rep.parameter, **asdict(v)})
        for u in rep.undecided:
            self.undecided.append({"parameter": rep.parameter, "item": u})
        if not rep.classical_bound_ok:
            self.classical_bound_failures.append(rep.parameter)

    def merge(self, other: "RangeSummary") -> None:
        self.parameters += other.parameters
        self.convergents_examined += other.convergents_examined
        self.direct_pairs_examined += other.direct_pairs_examined
        self.fired_admissible += other.fired_admissible
        self.fired_inadmissible += other.fired_inadmissible
        self.violations += other.violations
        self.undecided += other.undecided
        self.classical_bound_failures += other.classical_bound_failures
        self.max_bits = max(self.max_bits, other.max_bits)
        self.last = max(self.last, other.last)
        self.first = min(self.first, other.first)

    def to_record(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        return d


def verify_range(kind: CaseKind | str, first: int, last: int, bits: int | None = None) -> RangeSummary:
    kind = CaseKind(kind) if isinstance(kind, str) else kind
    start = time.perf_counter()
    summary = RangeSummary(kind.value, first, last)
    for parameter in range(first, last + 1):
        summary.absorb(verify_case(make_case(kind, parameter), bits))
    summary.seconds = time.perf_counter() - start
    return summary


def _summary_from_record(d: dict) -> RangeSummary:
    s = RangeSummary(d["case"], d["first"], d["last"])
    for key in ("parameters", "convergents_examined", "direct_pairs_examined", "fired_admissible", "fired_inadmissible", "violations",
                "undecided", "classical_bound_failures", "max_bits"):
        setattr(s, key, d[key])
    return s


def reduction_chunk(start: int, kind: str, last: int, chunk: int, bits: int | None) -> dict:
    return verify_range(kind, start, min(start + chunk - 1, last), bits).to_record()


def run_reduction(kind: CaseKind | str, first: int, last: int, workers: int = 1, checkpoint=None,
                  stop_after: int | None = None, chunk: int = 1000, bits: int | None = None) -> RangeSummary:
    """verify_range sharded into chunks of parameters, with checkpointing and optional worker processes."""
    from .sweep import run_sweep

    kind = CaseKind(kind) if isinstance(kind, str) else kind
    start = time.perf_counter()
    box = {"case": kind.value, "first": first, "last": last, "chunk": chunk, "bits": bits}
    rows = list(range(first, last + 1, chunk))
    results = run_sweep(f"reduce-{kind.value}", box, rows, reduction_chunk, (kind.value, last, chunk, bits),
                        workers, checkpoint, stop_after)
    total = RangeSummary(kind.value, first, last)
    for key in rows:
        total.merge(_summary_from_record(results[key]))
    total.seconds = time.perf_counter() - start
    return total
