"""Bounded brute-force searches and modular obstructions for the small Diophantine equations.

Every search is exhaustive over an explicit box and its results are labelled
"complete within box"; none of these routines proves that a solution list is
complete over all integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import gmpy2

from .sequences import RecurrenceParams, SequenceKind, term

SEARCH_CAP = 10**6
MODULUS_CAP = 10**4
SCOPE = "complete within box"


@dataclass(frozen=True)
class QuarticProblem:
    """quartic * x^4 + quadratic * x^2 + constant = scale * y^2, searched over 0 <= x <= bound."""

    quartic: int
    constant: int
    scale: int
    bound: int = 1000
    quadratic: int = 0
    name: str = ""

    def __post_init__(self) -> None:
        if self.quartic == 0 or self.scale == 0:
            raise ValueError("x^4 and y^2 coefficients must be nonzero")
        if not 0 <= self.bound <= SEARCH_CAP:
            raise ValueError(f"bound must lie in 0..{SEARCH_CAP}")

    def lhs(self, x: int) -> int:
        x2 = x * x
        return (self.quartic * x2 + self.quadratic) * x2 + self.constant

    def as_form(self) -> "SeparableForm":
        x_terms = {4: self.quartic}
        if self.quadratic:
            x_terms[2] = self.quadratic
        return SeparableForm(x_terms, {2: -self.scale}, self.constant, self.name)


@dataclass
class SearchResult:
    problem: str
    box: str
    solutions: list[tuple[int, int]]
    scope: str = SCOPE


def _x_order(bound: int, offset: int) -> Iterable[int]:
    n = bound + 1
    return ((offset + i) % n for i in range(n))


def search_quartic(problem: QuarticProblem, offset: int = 0) -> SearchResult:
    """All (x, y) with x, y >= 0 and x <= bound; `offset` rotates the iteration order."""
    found = []
    for x in _x_order(problem.bound, offset):
        value = problem.lhs(x)
        if value % problem.scale:
            continue
        y2 = value // problem.scale
        if y2 >= 0 and gmpy2.is_square(y2):
            found.append((x, int(gmpy2.isqrt(y2))))
    return SearchResult(problem.name or repr(problem), f"0 <= x <= {problem.bound}", sorted(found))


# Modular obstructions


@dataclass(frozen=True)
class SeparableForm:
    """sum_i x_terms[i] x^i + sum_j y_terms[j] y^j + constant = 0."""

    x_terms: dict[int, int]
    y_terms: dict[int, int]
    constant: int = 0
    name: str = ""

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.x_terms.items())), tuple(sorted(self.y_terms.items())), self.constant))


@dataclass
class Obstruction:
    form: str
    modulus: int
    obstructed: bool

    @property
    def verdict(self) -> str:
        return "Obstructed" if self.obstructed else "Inconclusive"


def _residues(terms: dict[int, int], modulus: int) -> set[int]:
    return {sum(c * pow(r, e, modulus) for e, c in terms.items()) % modulus for r in range(modulus)}


def modular_obstruction(form: SeparableForm | QuarticProblem, modulus: int) -> Obstruction:
    """Obstructed iff f(x, y) = 0 has no solution modulo `modulus` (all residue pairs checked)."""
    if isinstance(form, QuarticProblem):
        form = form.as_form()
    if not 2 <= modulus <= MODULUS_CAP:
        raise ValueError(f"modulus must lie in 2..{MODULUS_CAP}")
    ys = _residues(form.y_terms, modulus)
    xs = _residues(form.x_terms, modulus)
    hit = any((-(x + form.constant)) % modulus in ys for x in xs)
    return Obstruction(form.name or repr(form), modulus, not hit)


def first_obstruction(form: SeparableForm | QuarticProblem, moduli: Iterable[int] = range(2, 101)) -> Obstruction | None:
    for m in moduli:
        ob = modular_obstruction(form, m)
        if ob.obstructed:
            return ob
    return None


# Polynomial families f(a) = scale * y^2


@dataclass(frozen=True)
class PolynomialFamily:
    coefficients: tuple[int, ...]  # lowest degree first
    scale: int = 1
    name: str = ""

    def value(self, a: int) -> int:
        out = 0
        for c in reversed(self.coefficients):
            out = out * a + c
        return out


CUBIC_A3_3A_1 = PolynomialFamily((-1, -3, 0, 1), 1, "a^3 - 3a - 1 = y^2")
QUARTIC_V4_HALF = PolynomialFamily((2, 0, -4, 0, 1), 2, "a^4 - 4a^2 + 2 = 2y^2")


def search_cubic_square(family: PolynomialFamily, a_range: range, offset: int = 0) -> SearchResult:
    """All (a, y), y >= 0, with a in a_range and family(a) = scale * y^2."""
    values = list(a_range)
    n = len(values)
    found = []
    for i in range(n):
        a = values[(offset + i) % n]
        v = family.value(a)
        if v % family.scale:
            continue
        y2 = v // family.scale
        if y2 >= 0 and gmpy2.is_square(y2):
            found.append((a, int(gmpy2.isqrt(y2))))
    box = f"{a_range.start} <= a <= {a_range.stop - 1}"
    return SearchResult(family.name, box, sorted(found))


def search_sequence_value(kind: SequenceKind, target: int, m_range: range, a_range: range) -> SearchResult:
    """All (m, a) with kind_m(a, -1) = target over the box."""
    found = []
    for a in a_range:
        params = RecurrenceParams.classical(a)
        for m in m_range:
            if term(params, kind, m) == target:
                found.append((m, a))
    box = f"{m_range.start} <= m <= {m_range.stop - 1}, {a_range.start} <= a <= {a_range.stop - 1}"
    return SearchResult(f"{kind.value}_m(a) = {target}", box, sorted(found))


# The equations settled by integral-point computations in the source argument


@dataclass
class CatalogEntry:
    problem: QuarticProblem
    expected: list[tuple[int, int]]
    obstruction_modulus: int | None = None


def quartic_catalog(bound: int = 1000) -> list[CatalogEntry]:
    return [
        CatalogEntry(QuarticProblem(2, -1, 1, bound, name="2x^4 - 1 = y^2"), [(1, 1), (13, 239)]),
        CatalogEntry(QuarticProblem(3, -1, 2, bound, name="3x^4 - 1 = 2y^2"), [(1, 1), (3, 11)]),
        CatalogEntry(QuarticProblem(4, -3, 1, bound, name="4x^4 - 3 = y^2"), [(1, 1)]),
        CatalogEntry(QuarticProblem(9, -1, 2, bound, name="9c^4 - 1 = 2x^2"), [(1, 2)]),
        CatalogEntry(QuarticProblem(1, -1, 2, bound, name="y1^4 - 1 = 2x^2"), [(1, 0)]),
        CatalogEntry(QuarticProblem(27, 1, 1, bound, quadratic=-12, name="(9c^2-1)(3c^2-1) = Y^2"),
                     [(0, 1), (1, 4)]),
        CatalogEntry(QuarticProblem(1, -3, 1, bound, name="x^4 - 3 = y^2"), [], 5),
    ]


def congruence_catalog() -> list[tuple[SeparableForm, int]]:
    """Forms shown impossible by a single congruence, with the modulus that kills them."""
    return [
        (SeparableForm({4: 1}, {2: -1}, -3, "x^4 - 3 = y^2"), 5),
        (SeparableForm({2: 1}, {2: -3}, -2, "x1^2 - 3x2^2 = 2"), 3),
        (SeparableForm({2: 1}, {2: -1}, -2, "x1^2 - x2^2 = 2"), 4),
        (SeparableForm({2: 3}, {2: -1}, -1, "3x1^2 - x2^2 = 1"), 3),
    ]


@dataclass
class OracleReport:
    quartics: list[dict] = field(default_factory=list)
    congruences: list[dict] = field(default_factory=list)
    families: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r["matches"] for r in self.quartics + self.congruences + self.families)


def run_oracles(bound: int = 1000, a_max: int = 10**4) -> OracleReport:
    rep = OracleReport()
    for entry in quartic_catalog(bound):
        res = search_quartic(entry.problem)
        rec = {"problem": res.problem, "box": res.box, "scope": res.scope, "solutions": res.solutions,
               "expected": entry.expected, "matches": res.solutions == entry.expected}
        if entry.obstruction_modulus:
            ob = modular_obstruction(entry.problem, entry.obstruction_modulus)
            rec["obstructed_mod"] = entry.obstruction_modulus
            rec["matches"] = rec["matches"] and ob.obstructed
        rep.quartics.append(rec)
    for form, modulus in congruence_catalog():
        ob = modular_obstruction(form, modulus)
        rep.congruences.append({"form": ob.form, "modulus": modulus, "obstruction": ob.verdict, "matches": ob.obstructed})
    for family, rng, expected in (
        (CUBIC_A3_3A_1, range(-10, a_max + 1), [(-1, 1), (2, 1)]),
        (QUARTIC_V4_HALF, range(2, a_max + 1), [(2, 1)]),
    ):
        res = search_cubic_square(family, rng)
        rep.families.append({"problem": res.problem, "box": res.box, "scope": res.scope,
                             "solutions": res.solutions, "expected": expected, "matches": res.solutions == expected})
    res = search_sequence_value(SequenceKind.V, 338, range(3, 21), range(3, 1001))
    rep.families.append({"problem": res.problem, "box": res.box, "scope": res.scope,
                         "solutions": res.solutions, "expected": [], "matches": res.solutions == []})
    return rep
