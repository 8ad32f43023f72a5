"""Near-square scans over (a, b1, n) and (c, N) grids.

Terms are classified with the divisor-aided method: u_n is split over a coprime
base built from the algebraic divisors u_d (d | n), v_d (2d | n) and t_k, w_k
((2k+1) | n).  Two coprime pieces that each carry a large prime to an odd power
already rule out a prime-times-square kernel, so full factorisation is only
needed when a single piece remains.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import gmpy2

from .nearsquare import classify_kernel, classify_with_divisors, square_decompose
from .primes import is_prime, pollard_brent
from .sequences import RecurrenceParams, SequenceKind, naive_term, term, uv_pair
from .sweep import run_sweep

CONJECTURE_N_MIN = 9
THEOREM_N_MIN = 5
CONTEXT_N_MIN = 2


@dataclass(frozen=True, order=True)
class Finding:
    a: int
    b: int
    n: int
    kernel: int
    root: int
    label: str
    certified: bool = True
    flag: str = ""

    def tuple4(self) -> tuple[int, int, int, int]:
        """(n, a, b, kernel), the layout used to state the conjecture."""
        return (self.n, self.a, self.b, self.kernel)


def algebraic_divisors(params: RecurrenceParams, n: int) -> list[int]:
    """u_d for d | n, v_d for 2d | n and t_k, w_k for (2k+1) | n, all proper divisors of u_n."""
    out = []
    for d in range(1, n):
        if n % d == 0:
            out.append(term(params, SequenceKind.U, d))
        if n % (2 * d) == 0:
            out.append(term(params, SequenceKind.V, d))
    if params.b1 is not None:
        for k in range(1, (n - 1) // 2 + 1):
            if n % (2 * k + 1) == 0:
                out.append(term(params, SequenceKind.T, k))
                out.append(term(params, SequenceKind.W, k))
    return out


def is_degenerate(a: int, b1: int) -> bool:
    """alpha/beta is a root of unity or Delta = 0; with gcd(a, b1) = 1 this is exactly (1,1) and (2,1)."""
    return b1 == 1 and a in (1, 2)


@dataclass
class RowResult:
    findings: list[Finding] = field(default_factory=list)
    unresolved: list[dict] = field(default_factory=list)
    terms: int = 0
    skipped: list[dict] = field(default_factory=list)
    signed: list[Finding] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"findings": [asdict(f) for f in self.findings], "unresolved": self.unresolved,
                "terms": self.terms, "skipped": self.skipped, "signed": [asdict(f) for f in self.signed]}

    @classmethod
    def from_json(cls, d: dict) -> "RowResult":
        return cls([Finding(**f) for f in d["findings"]], d["unresolved"], d["terms"], d["skipped"],
                   [Finding(**f) for f in d["signed"]])


def _classify_term(params: RecurrenceParams, n: int):
    value = term(params, SequenceKind.U, n)
    return value, classify_with_divisors(value, algebraic_divisors(params, n))


# Conjecture scan


def conjecture_row(a: int, b1_max: int, n_min: int, n_max: int) -> dict:
    row = RowResult()
    for b1 in range(1, b1_max + 1):
        if math.gcd(a, b1) != 1:
            continue
        if is_degenerate(a, b1):
            row.skipped.append({"a": a, "b1": b1, "reason": "degenerate sequence"})
            continue
        params = RecurrenceParams.with_b1(a, b1)
        for n in range(n_min, n_max + 1):
            value, hc = _classify_term(params, n)
            row.terms += 1
            if hc.cls.kind == "unresolved":
                row.unresolved.append({"a": a, "b": params.b, "n": n, "digits": len(str(abs(value)))})
            elif hc.cls.in_conjecture_class:
                dec = hc.decomposition
                hit = Finding(a, params.b, n, dec.kernel, dec.root, hc.cls.label, hc.cls.certified)
                (row.findings if hc.cls.is_near_square else row.signed).append(hit)
    return row.to_json()


@dataclass
class ScanReport:
    kind: str
    box: dict
    findings: list[Finding]
    unresolved: list[dict]
    skipped: list[dict]
    terms: int
    revalidated: bool
    signed: list[Finding] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def critical(self) -> list[Finding]:
        return [f for f in self.findings if f.flag == "CRITICAL"]

    def to_record(self) -> dict:
        return {"kind": self.kind, "box": self.box, "findings": [asdict(f) for f in self.findings],
                "unresolved": self.unresolved, "skipped": self.skipped, "terms": self.terms,
                "revalidated": self.revalidated, "negative_kernel_hits": [asdict(f) for f in self.signed]}


def revalidate(f: Finding) -> bool:
    """Recompute u_n by the naive recurrence and re-derive the kernel and root."""
    b1 = math.isqrt(-f.b)
    params = RecurrenceParams(f.a, f.b, b1 if b1 * b1 == -f.b else None)
    value = naive_term(params, SequenceKind.U, f.n)
    if f.kernel * f.root * f.root != value:
        return False
    dec = square_decompose(value)
    return dec.resolved and dec.kernel == f.kernel and dec.root == f.root


def _merge(kind: str, box: dict, results: dict, start: float) -> ScanReport:
    rows = [RowResult.from_json(results[k]) for k in sorted(results)]
    findings = sorted(f for r in rows for f in r.findings)
    unresolved = sorted((u for r in rows for u in r.unresolved), key=lambda u: (u.get("a"), u.get("b"), u.get("n")))
    skipped = [s for r in rows for s in r.skipped]
    terms = sum(r.terms for r in rows)
    signed = sorted(f for r in rows for f in r.signed)
    ok = all(revalidate(f) for f in findings + signed)
    return ScanReport(kind, box, findings, unresolved, skipped, terms, ok, signed, time.perf_counter() - start)


def scan_conjecture(
    a_max: int, b1_max: int, n_max: int, n_min: int = CONJECTURE_N_MIN, context: bool = False,
    workers: int = 1, checkpoint: Path | None = None, stop_after: int | None = None,
) -> ScanReport:
    """Near-squares u_n(a, -b1^2) = p*x^2 or x^2 (kernel > 0) over 1 <= a <= a_max, 1 <= b1 <= b1_max, gcd(a, b1) = 1.

    Terms with kernel -1 or minus a prime are kept apart in `signed`, since the
    conjecture's |c| wording admits them while the near-square class does not.
    """
    if not context and n_min < CONJECTURE_N_MIN:
        raise ValueError(f"conjecture scans need n >= {CONJECTURE_N_MIN}; use context mode for smaller n")
    start = time.perf_counter()
    box = {"a_max": a_max, "b1_max": b1_max, "n_min": n_min, "n_max": n_max, "context": context}
    rows = list(range(1, a_max + 1))
    results = run_sweep("scan-conjecture", box, rows, conjecture_row, (b1_max, n_min, n_max),
                        workers, checkpoint, stop_after)
    return _merge("conjecture", box, results, start)


# Theorem scan


def _theorem_flag(a: int, n: int, kind: str, kernel: int, context: bool) -> str:
    if context:
        return ""
    if kind == "prime_square" and kernel >= 5:
        return "CRITICAL"
    if kind in ("square", "c_square") and (a, n) != (338, 4):
        return "CRITICAL"
    return ""


def _two_prime_kernel(kernel: int) -> bool:
    """kernel = p1 * p2 with primes 5 <= p1 < p2."""
    if kernel < 35 or kernel % 2 == 0 or kernel % 3 == 0 or is_prime(kernel):
        return False
    d, _ = pollard_brent(kernel, 200_000)
    if d is None:
        return False
    p1, p2 = sorted((d, kernel // d))
    return p1 < p2 and is_prime(p1) and is_prime(p2)


def theorem_row(c: int, n_min: int, n_max: int, context: bool) -> dict:
    row = RowResult()
    a = c * c + 1
    params = RecurrenceParams.classical(a)
    for n in range(n_min, n_max + 1):
        value, hc = _classify_term(params, n)
        row.terms += 1
        kind = hc.cls.kind
        if kind == "unresolved":
            row.unresolved.append({"a": a, "b": -1, "n": n, "digits": len(str(abs(value)))})
            continue
        dec = hc.decomposition
        hit = kind in ("square", "c_square") or (kind == "prime_square" and hc.cls.kernel > 0)
        if context and not hit and dec is not None and _two_prime_kernel(dec.kernel):
            row.findings.append(Finding(a, -1, n, dec.kernel, dec.root, "p1p2S", True))
            continue
        if hit:
            flag = _theorem_flag(a, n, kind, hc.cls.kernel, context)
            row.findings.append(Finding(a, -1, n, dec.kernel, dec.root, hc.cls.label, hc.cls.certified, flag))
    return row.to_json()


def scan_theorem(
    c_max: int, n_max: int, n_min: int = THEOREM_N_MIN, context: bool = False, c_min: int = 2,
    workers: int = 1, checkpoint: Path | None = None, stop_after: int | None = None,
) -> ScanReport:
    """Terms u_N(c^2 + 1) in S, cS (c in 2, 3, 6) or pS; outside context mode every hit is CRITICAL."""
    if c_min < 2:
        raise ValueError("c must be at least 2")
    if not context and n_min < THEOREM_N_MIN:
        raise ValueError(f"theorem scans need N >= {THEOREM_N_MIN}; use context mode for smaller N")
    start = time.perf_counter()
    box = {"c_min": c_min, "c_max": c_max, "n_min": n_min, "n_max": n_max, "context": context}
    rows = list(range(c_min, c_max + 1))
    results = run_sweep("scan-theorem", box, rows, theorem_row, (n_min, n_max, context), workers, checkpoint, stop_after)
    return _merge("theorem", box, results, start)


# Small propositions


def _in_scaled_square(value: int, scale: int) -> bool:
    return value >= 0 and value % scale == 0 and gmpy2.is_square(value // scale)


@dataclass
class PropsReport:
    checks: dict[str, bool] = field(default_factory=dict)
    counterexamples: dict[str, list] = field(default_factory=dict)
    hits: dict[str, list] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_record(self) -> dict:
        return {"checks": self.checks, "counterexamples": self.counterexamples, "hits": self.hits}


def verify_small_props(n_cap: int = 60, a_cap: int = 400, b_cap: int = 41) -> PropsReport:
    """Exhaustive desk-scale checks of the square facts about Lucas sequences used as classification inputs."""
    rep = PropsReport()
    bad: dict[str, list] = {k: [] for k in ("u_in_S", "u_in_2S", "v_in_S", "v_in_2S", "v3_congruence",
                                          "v5_congruence", "u3_in_3S_6S", "u3_S_2S_indices",
                                          "mp_exceptions", "u3_never_square")}
    hits: dict[str, list] = {"v3_in_S": [], "mp": []}
    # Odd coprime (a, b) with positive discriminant.
    for a in range(1, a_cap + 1, 2):
        for b in range(-b_cap, b_cap + 1, 2):
            if math.gcd(a, b) != 1 or a * a + 4 * b <= 0:
                continue
            params = RecurrenceParams(a, b)
            for n in range(1, n_cap + 1):
                u, v = uv_pair(params, n)
                if gmpy2.is_square(u) and n not in (1, 2, 3, 6, 12):
                    bad["u_in_S"].append((a, b, n))
                if _in_scaled_square(u, 2) and n not in (3, 6):
                    bad["u_in_2S"].append((a, b, n))
                if gmpy2.is_square(v):
                    if n not in (1, 3, 5):
                        bad["v_in_S"].append((a, b, n))
                    if n == 3:
                        hits["v3_in_S"].append((a, b))
                        if (-b) % 4 != 3:
                            bad["v3_congruence"].append((a, b))
                    if n == 5 and not (a % 8 == 5 and (-b) % 8 == 5):
                        bad["v5_congruence"].append((a, b))
                if _in_scaled_square(v, 2) and n not in (3, 6):
                    bad["v_in_2S"].append((a, b, n))
    three = RecurrenceParams.classical(3)
    for n in range(3, n_cap + 1):
        u = term(three, SequenceKind.U, n)
        if _in_scaled_square(u, 3) or _in_scaled_square(u, 6):
            bad["u3_in_3S_6S"].append(n)
        if gmpy2.is_square(u) and n != 6 or _in_scaled_square(u, 2) and n != 3:
            bad["u3_S_2S_indices"].append(n)
    for a in range(3, a_cap + 1):
        params = RecurrenceParams.classical(a)
        if gmpy2.is_square(term(params, SequenceKind.U, 3)):
            bad["u3_never_square"].append(a)
        if a < 4:
            continue
        for n in range(4, n_cap + 1):
            u = term(params, SequenceKind.U, n)
            if gmpy2.is_square(u):
                hits["mp"].append((a, n))
                if (a, n) != (338, 4):
                    bad["mp_exceptions"].append((a, n))
            elif any(_in_scaled_square(u, s) for s in (2, 3, 6)):
                bad["mp_exceptions"].append((a, n))
    values = {n: term(three, SequenceKind.U, n) for n in (3, 6, 12)}
    rep.checks["u3(3) = 8 in 2S"] = values[3] == 8 and classify_kernel(square_decompose(8).kernel).label == "2S"
    rep.checks["u6(3) = 144 in S"] = values[6] == 144 and gmpy2.is_square(144)
    rep.checks["u12(3) = 2^5*3^2*161 not in S or 2S"] = (
        values[12] == 2**5 * 3**2 * 161 and not gmpy2.is_square(values[12]) and not _in_scaled_square(values[12], 2)
    )
    for k, v in bad.items():
        rep.checks[k] = not v
        if v:
            rep.counterexamples[k] = v[:20]
    rep.checks["mp exception (338, 4) present"] = (338, 4) in hits["mp"] if a_cap >= 338 else True
    rep.hits = {k: v[:50] for k, v in hits.items()}
    return rep
