"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a single PASS/FAIL line; the lines are printed under
"acceptance criteria" in the pytest terminal summary and echoed with -s.
"""

import json
import random
import time

import pytest
from conftest import ACCEPTANCE_LINES

from nearsq.algebraics import random_large_samples, verify_estimates
from nearsq.cf_reduction import make_case, run_reduction, verify_case, verify_range
from nearsq.nearsquare import classify
from nearsq.oracles import QuarticProblem, search_quartic
from nearsq.scanner import scan_conjecture
from nearsq.sequences import (
    RecurrenceParams,
    SequenceKind,
    gcd_triple_actual,
    gcd_triple_class,
    gcd_tw_actual,
    gcd_tw_class,
    gcd_uv_actual,
    gcd_uv_class,
    naive_term,
    term,
    triple_table_domain,
    uv_pair,
)
from nearsq.units import verify_unit_groups

U, V, T, W = SequenceKind.U, SequenceKind.V, SequenceKind.T, SequenceKind.W
TEN_MINUTES = 600.0


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_conjecture_rediscovery():
    start = time.perf_counter()
    rep = scan_conjecture(30, 30, 60)
    elapsed = time.perf_counter() - start
    found = {f.tuple4() for f in rep.findings}
    expected = {(11, 4, -25, 3719), (13, 3, -4, 181)}
    ok = found == expected and not rep.unresolved and rep.revalidated and elapsed < 60
    report(1, "conjecture rediscovery", ok,
           f"findings={sorted(found)} unresolved={len(rep.unresolved)} terms={rep.terms} {elapsed:.1f}s (<60s)")


def test_02_exception_values():
    classical = RecurrenceParams.classical
    u4 = term(classical(338), U, 4)
    u3, u6, u12 = (term(classical(3), U, n) for n in (3, 6, 12))
    checks = {
        "u4(338)=6214^2 in S": u4 == 6214**2 and classify(u4).label == "S",
        "u3(3) in 2S": classify(u3).label == "2S",
        "u6(3) in S": classify(u6).label == "S",
        "u12(3)=2^5*3^2*161": u12 == 2**5 * 3**2 * 161,
        "u12(3) not in S or 2S": classify(u12).label not in ("S", "2S"),
    }
    failed = [k for k, v in checks.items() if not v]
    report(2, "exception values", not failed, "all exact" if not failed else f"failed {failed}")


@pytest.mark.parametrize(
    "quartic, constant, scale, expected",
    [(2, -1, 1, [(1, 1), (13, 239)]), (3, -1, 2, [(1, 1), (3, 11)]), (4, -3, 1, [(1, 1)])],
    ids=["2x4-y2=1", "3x4-1=2y2", "4x4-3=y2"],
)
def test_03_quartic_oracles(quartic, constant, scale, expected):
    start = time.perf_counter()
    res = search_quartic(QuarticProblem(quartic, constant, scale, 1000))
    elapsed = time.perf_counter() - start
    ok = res.solutions == expected and elapsed < 5
    report(3, f"oracle {quartic}x^4{constant:+d}={scale}y^2", ok,
           f"solutions={res.solutions} x<=1000 {elapsed:.3f}s (<5s)")


def _reduction_line(summary, elapsed: float) -> str:
    return (f"parameters={summary.parameters} convergents={summary.convergents_examined} "
            f"violations={len(summary.violations)} undecided={len(summary.undecided)} "
            f"classical_bound_failures={len(summary.classical_bound_failures)} max_bits={summary.max_bits} "
            f"{elapsed:.1f}s (<600s)")


def test_04_reduction_iiia1():
    caps = {make_case("iiia1", c).q_max for c in range(2, 78)}
    start = time.perf_counter()
    summary = verify_range("iiia1", 2, 77)
    elapsed = time.perf_counter() - start
    ok = caps == {2_332_000} and summary.ok and summary.parameters == 76 and elapsed < TEN_MINUTES
    report(4, "reduction IIIa-1 c=2..77", ok, _reduction_line(summary, elapsed))


def test_05_reduction_iiic():
    caps_small = {make_case("iiic", c).q_max for c in range(2, 6)}
    caps_large = {make_case("iiic", c).q_max for c in range(6, 16001)}
    start = time.perf_counter()
    summary = verify_range("iiic", 2, 16000)
    elapsed = time.perf_counter() - start
    ok = (caps_small == {200_000} and caps_large == {25_000} and summary.ok
          and summary.parameters == 15999 and elapsed < TEN_MINUTES)
    report(5, "reduction IIIc c=2..16000", ok, _reduction_line(summary, elapsed))


def test_06_reduction_iiib():
    start = time.perf_counter()
    summary = verify_range("iiib", 4, 10_000)
    elapsed = time.perf_counter() - start
    seven = verify_case(make_case("iiib", 7))
    fired = [f for f in seven.fired if f.admissible]
    a7_ok = (len(fired) == 1 and (fired[0].p, fired[0].q) == (3, 4)
             and 0.006 < fired[0].linear_form < 0.007 and fired[0].outcome == "reject")
    ok = summary.ok and summary.parameters == 9997 and a7_ok and elapsed < TEN_MINUTES
    a7 = (f"a=7 fires {fired[0].p}/{fired[0].q} |Lambda|={fired[0].linear_form:.7f} {fired[0].outcome}"
          if fired else "a=7 did not fire")
    report(6, "reduction IIIb a=4..10000", ok, f"{_reduction_line(summary, elapsed)}; {a7}")


def test_07_reduction_iiia2():
    caps = {make_case("iiia2", c).q_max for c in range(2, 10_001)}
    start = time.perf_counter()
    summary = verify_range("iiia2", 2, 10_000)
    elapsed = time.perf_counter() - start
    ok = (caps == {28_500_000} and summary.ok and summary.parameters == 9999
          and summary.direct_pairs_examined > 0 and elapsed < TEN_MINUTES)
    report(7, "reduction IIIa-2 c=2..10000", ok,
           f"{_reduction_line(summary, elapsed)} direct_pairs={summary.direct_pairs_examined}")


def test_08_estimate_suites():
    a_random, c_random = random_large_samples(1000)
    start = time.perf_counter()
    rep = verify_estimates(list(range(4, 10_001)) + a_random, list(range(2, 1001)) + c_random, cap=1024)
    elapsed = time.perf_counter() - start
    ok = rep.ok and rep.max_bits <= 1024 and rep.a_values == 9997 + 1000 and rep.c_values == 999 + 1000
    report(8, "estimate suites", ok,
           f"checks={rep.checks} failures={len(rep.failures)} undecided={len(rep.undecided)} "
           f"max_bits={rep.max_bits} (<=1024) {elapsed:.1f}s")


def test_09_unit_checks():
    rep = verify_unit_groups(range(2, 201), range(4, 201))
    norms_exact = all(abs(n) == 1 for e in rep.entries for n in e.norms.values())
    separated = all(e.separated for e in rep.entries)
    ok = rep.ok and norms_exact and separated and len(rep.entries) == 2 * 199 + 197
    report(9, "unit checks", ok,
           f"orders={len(rep.entries)} norms_exact={norms_exact} rank_separated={separated} "
           f"undecided={len(rep.undecided)}")


def test_10_property_suites(tmp_path):
    rng = random.Random(20240501)
    mismatches = 0
    for _ in range(10_000):
        params = RecurrenceParams(rng.randint(1, 10**6), rng.choice([b for b in range(-100, 101) if b]))
        n = rng.randint(0, 80)
        kind = rng.choice((U, V))
        mismatches += term(params, kind, n) != naive_term(params, kind, n)

    norm_bad = 0
    tw_bad = 0
    for a in range(3, 200):
        params = RecurrenceParams.classical(a)
        for n in range(0, 60):
            u, v = uv_pair(params, n)
            norm_bad += v * v - params.delta * u * u != 4
            tw_bad += term(params, U, 2 * n + 1) != term(params, T, n) * term(params, W, n)

    gcd_bad = 0
    for a in range(3, 51):
        params = RecurrenceParams.classical(a)
        for n in range(1, 201):
            gcd_bad += gcd_uv_class(params, n) != gcd_uv_actual(params, n)
            gcd_bad += gcd_tw_class(params, n) != gcd_tw_actual(params, n)
            if triple_table_domain(params, n):
                gcd_bad += gcd_triple_class(params, n) != gcd_triple_actual(params, n)

    from nearsq.sweep import SweepInterrupted

    box = (14, 10, 30)
    straight = json.dumps(scan_conjecture(*box).to_record(), sort_keys=True)
    cp = tmp_path / "resume.json"
    interruptions = 0
    while True:
        try:
            resumed = scan_conjecture(*box, checkpoint=cp, stop_after=3)
            break
        except SweepInterrupted:
            interruptions += 1
    resume_ok = json.dumps(resumed.to_record(), sort_keys=True) == straight and interruptions >= 3
    red_straight = verify_range("iiib", 4, 60).to_record()
    red_cp = tmp_path / "reduce.json"
    try:
        run_reduction("iiib", 4, 60, chunk=10, checkpoint=red_cp, stop_after=2)
    except SweepInterrupted:
        pass
    red_ok = run_reduction("iiib", 4, 60, chunk=10, checkpoint=red_cp).to_record() == red_straight

    ok = not (mismatches or norm_bad or tw_bad or gcd_bad) and resume_ok and red_ok
    report(10, "property suites", ok,
           f"fast_doubling_mismatch={mismatches}/10000 norm_identity_bad={norm_bad} tw_bad={tw_bad} "
           f"gcd_table_bad={gcd_bad} scan_resume_identical={resume_ok} ({interruptions} interruptions) "
           f"reduction_resume_identical={red_ok}")
