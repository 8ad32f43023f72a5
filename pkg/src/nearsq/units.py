"""Exact unit checks in Z[theta], Z[phi], Z[xi] via resultants, plus numerical consistency checks.

These are consistency checks on the claimed generators (unit property, multiplicative
independence, conjugation identities), not proofs of fundamentality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from flint import acb, arb

from .algebraics import build_context
from .balls import PRECISION_CAP, radius, working_precision

Poly = list[int]  # coefficients, lowest degree first


class Generator(enum.Enum):
    THETA = "theta"
    PHI = "phi"
    XI = "xi"


def minimal_polynomial(gen: Generator, a: int) -> Poly:
    """Monic quartic: theta^4-(a+2)theta^2+(a+2), phi^4+(a-2)phi^2-(a-2), xi^4-(a-2)xi^2-(a-2)."""
    if gen is Generator.THETA:
        return [a + 2, 0, -(a + 2), 0, 1]
    if gen is Generator.PHI:
        return [-(a - 2), 0, a - 2, 0, 1]
    return [-(a - 2), 0, -(a - 2), 0, 1]


@dataclass(frozen=True)
class OrderElement:
    """x + y*rho + z*rho^2 + w*rho^3 for rho the chosen generator."""

    coefficients: tuple[int, int, int, int]
    generator: Generator
    a: int

    def poly(self) -> Poly:
        return list(self.coefficients)

    def __mul__(self, other: "OrderElement") -> "OrderElement":
        if other.generator is not self.generator or other.a != self.a:
            raise ValueError("elements live in different orders")
        prod = [0] * 7
        for i, u in enumerate(self.coefficients):
            for j, v in enumerate(other.coefficients):
                prod[i + j] += u * v
        f = minimal_polynomial(self.generator, self.a)
        for k in range(6, 3, -1):
            top = prod[k]
            if top:
                for i in range(5):
                    prod[k - 4 + i] -= top * f[i]
        return OrderElement(tuple(prod[:4]), self.generator, self.a)


# Polynomial arithmetic over Z


def _trim(p: Poly) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deg(p: Poly) -> int:
    return len(p) - 1


def _content(p: Poly) -> int:
    from math import gcd

    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def _pseudo_remainder(A: Poly, B: Poly) -> Poly:
    """prem(A, B): lc(B)^(deg A - deg B + 1) * A mod B, over Z."""
    R = list(A)
    d = _deg(B)
    lc = B[-1]
    e = _deg(A) - d + 1
    while R and _deg(R) >= d:
        top = R[-1]
        shift = _deg(R) - d
        R = [lc * c for c in R]
        for i, b in enumerate(B):
            R[shift + i] -= top * b
        R = _trim(R)
        e -= 1
    scale = lc**e
    return [scale * c for c in R]


def resultant(A: Poly, B: Poly) -> int:
    """Res(A, B) by the subresultant PRS; for monic A this is the product of B over the roots of A."""
    A, B = _trim(A), _trim(B)
    if not A or not B:
        return 0
    if _deg(A) == 0 and _deg(B) == 0:
        return 1
    a_cont, b_cont = _content(A), _content(B)
    A = [c // a_cont for c in A]
    B = [c // b_cont for c in B]
    t = a_cont ** _deg(B) * b_cont ** _deg(A)
    s = 1
    if _deg(A) < _deg(B):
        A, B = B, A
        if _deg(A) % 2 and _deg(B) % 2:
            s = -1
    if _deg(B) == 0:
        return s * t * B[0] ** _deg(A)
    g = h = 1
    while True:
        delta = _deg(A) - _deg(B)
        if _deg(A) % 2 and _deg(B) % 2:
            s = -s
        R = _pseudo_remainder(A, B)
        A = B
        divisor = g * h**delta
        B = [c // divisor for c in R]
        g = A[-1]
        h = g**delta // h ** (delta - 1) if delta >= 1 else h
        if not B:
            return 0
        if _deg(B) == 0:
            break
    h_final = B[-1] ** _deg(A) // h ** (_deg(A) - 1)
    return s * t * h_final


def absolute_norm(e: OrderElement) -> int:
    """Product of the four conjugates, as Res(minimal polynomial, element polynomial).

    The minimal polynomial is monic, so this equals the field norm with no extra sign.
    """
    return resultant(minimal_polynomial(e.generator, e.a), _trim(e.poly()) or [0])


def multiplication_matrix_norm(e: OrderElement) -> int:
    """Independent route: determinant of multiplication-by-e on the basis 1, rho, rho^2, rho^3."""
    from fractions import Fraction

    basis = [OrderElement(tuple(int(i == k) for i in range(4)), e.generator, e.a) for k in range(4)]
    rows = [[Fraction(v) for v in (e * b).coefficients] for b in basis]
    det = Fraction(1)
    n = 4
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        det *= rows[col][col]
        for r in range(col + 1, n):
            f = rows[r][col] / rows[col][col]
            for k in range(col, n):
                rows[r][k] -= f * rows[col][k]
    return int(det)


# Claimed generators


def theta_generators(c: int) -> dict[str, OrderElement]:
    a = c * c + 1
    g = Generator.THETA
    return {
        "alpha": OrderElement((-1, 0, 1, 0), g, a),
        "theta+1": OrderElement((1, 1, 0, 0), g, a),
        "mu": OrderElement((-1, c, 1, 0), g, a),
    }


def phi_generators(a: int) -> dict[str, OrderElement]:
    g = Generator.PHI
    return {"beta": OrderElement((1, 0, -1, 0), g, a), "1+phi": OrderElement((1, 1, 0, 0), g, a)}


def xi_generators(c: int) -> dict[str, OrderElement]:
    a = c * c + 1
    g = Generator.XI
    return {"alpha": OrderElement((1, 0, 1, 0), g, a), "c+xi": OrderElement((c, 1, 0, 0), g, a)}


def _embeddings(gen: Generator, a: int, bits: int) -> tuple[list, int]:
    """Conjugates of the generator (reals first, one of each complex pair) and the number of real ones."""
    ctx = build_context(a, bits)
    with working_precision(bits):
        if gen is Generator.THETA:
            return [ctx.theta, -ctx.theta, ctx.thetaP, -ctx.thetaP], 4
        if gen is Generator.PHI:
            return [ctx.phi, -ctx.phi, acb(0, ctx.xi)], 2
        return [ctx.xi, -ctx.xi, acb(0, ctx.phi)], 2


def _evaluate(coeffs: tuple[int, ...], x):
    out = 0 * x
    for k in reversed(coeffs):
        out = out * x + k
    return out


def _det(m: list[list[arb]]) -> arb:
    if len(m) == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def log_embedding_determinant(elements: list[OrderElement], bits: int = 256) -> arb:
    """Determinant of the log-embedding matrix on the first (rank) real places."""
    gen, a = elements[0].generator, elements[0].a
    conj, n_real = _embeddings(gen, a, bits)
    rank = len(elements)
    with working_precision(bits):
        rows = []
        for e in elements:
            rows.append([abs(_evaluate(e.coefficients, conj[j])).log() for j in range(rank)])
        return _det(rows)


@dataclass
class UnitEntry:
    order: str
    parameter: int
    norms: dict[str, int]
    determinant: float
    determinant_radius: float
    separated: bool

    @property
    def ok(self) -> bool:
        return all(abs(n) == 1 for n in self.norms.values()) and self.separated


@dataclass
class UnitReport:
    entries: list[UnitEntry] = field(default_factory=list)
    undecided: list[str] = field(default_factory=list)
    note: str = "consistency check, not proof of fundamentality"

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries) and not self.undecided

    @property
    def failures(self) -> list[UnitEntry]:
        return [e for e in self.entries if not e.ok]


def _unit_entry(order: str, parameter: int, gens: dict[str, OrderElement], bits: int, cap: int) -> UnitEntry | None:
    norms = {name: absolute_norm(e) for name, e in gens.items()}
    b = bits
    while b <= cap:
        det = log_embedding_determinant(list(gens.values()), b)
        mid, rad = abs(float(det.mid())), float(radius(det))
        if mid > 10 * rad:
            return UnitEntry(order, parameter, norms, float(det.mid()), rad, True)
        b *= 2
    return None


def verify_unit_groups(c_values, a_values_phi, bits: int = 256, cap: int = PRECISION_CAP) -> UnitReport:
    """Norms +-1 and log-rank separation for the generators of Z[theta], Z[xi] (per c) and Z[phi] (per a)."""
    rep = UnitReport()
    for c in c_values:
        for order, gens in (("Z[theta]", theta_generators(c)), ("Z[xi]", xi_generators(c))):
            entry = _unit_entry(order, c, gens, bits, cap)
            if entry is None:
                rep.undecided.append(f"{order} c={c}")
            else:
                rep.entries.append(entry)
    for a in a_values_phi:
        entry = _unit_entry("Z[phi]", a, phi_generators(a), bits, cap)
        if entry is None:
            rep.undecided.append(f"Z[phi] a={a}")
        else:
            rep.entries.append(entry)
    return rep


# Conjugation table for a = c^2 + 1


@dataclass
class IdentityCheck:
    name: str
    holds: bool
    radius: float


def verify_conjugation_table(c: int, bits: int = 192) -> list[IdentityCheck]:
    """Each identity's difference must be a ball containing 0 with radius below 2^(-bits/2)."""
    x = build_context(c * c + 1, bits, c)
    tol = arb(2) ** (-bits // 2)
    with working_precision(bits):
        diffs = {
            "theta->-theta fixes alpha: theta^2 - 1 = alpha": x.theta**2 - 1 - x.alpha,
            "theta->-theta: -theta+1 = -alpha/(theta+1)": (1 - x.theta) + x.alpha / (x.theta + 1),
            "theta->-theta: theta^2-c*theta-1 = -beta/mu": (x.theta**2 - c * x.theta - 1) + x.beta / x.mu,
            "theta->theta': theta'^2 - 1 = beta": x.thetaP**2 - 1 - x.beta,
            "theta->theta': mu' = theta'^2+c*theta'-1": x.muP - (x.thetaP**2 + c * x.thetaP - 1),
            "theta->-theta': -theta'+1 = -beta/(theta'+1)": (1 - x.thetaP) + x.beta / (x.thetaP + 1),
            "theta->-theta': theta'^2-c*theta'-1 = -alpha/mu'": (x.thetaP**2 - c * x.thetaP - 1) + x.alpha / x.muP,
            "(1+c*theta-theta^2)(1-c*theta-theta^2) = -beta": (1 + c * x.theta - x.theta**2)
            * (1 - c * x.theta - x.theta**2)
            + x.beta,
        }
        return [IdentityCheck(k, bool(v.contains(0)) and bool(v.rad() < tol), float(radius(v))) for k, v in diffs.items()]


def verify_a3_note(bits: int = 192) -> dict:
    """a = 3: alpha - 1 is the golden ratio, a unit of norm -1 with (alpha - 1)^2 = alpha."""
    norm = resultant([1, -3, 1], [-1, 1])  # X^2 - 3X + 1 against X - 1
    with working_precision(bits):
        alpha = (3 + arb(5).sqrt()) / 2
        diff = (alpha - 1) ** 2 - alpha
    return {"norm(alpha-1)": norm, "square_identity": bool(diff.contains(0)), "radius": float(radius(diff))}
