"""Canonical quantisation through Dirac brackets and the physical-subspace reduction.

Operators are symbolic: at most quadratic expressions over the hatted
coordinates and momenta, with the identity carried as an hbar-graded part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ball import BallParams, ball_system
from .errors import UnsupportedOrderError, UnsupportedQuantisationError
from .mechanics import ConstrainedSystem, dirac_bracket, echelon_rank

SYMBOLS = ("x", "y", "theta", "P_x", "P_y", "P_theta")
POSITIONS = SYMBOLS[:3]
MOMENTA = SYMBOLS[3:]
COEF_TOL = 1e-14


def _key(*symbols: str) -> tuple:
    return tuple(sorted(symbols, key=SYMBOLS.index))


@dataclass(frozen=True)
class OperatorExpr:
    """``sum c * hbar^k * (monomial)``; keys are ``(monomial, k)`` with monomial a sorted symbol tuple."""

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (mono, k), c in self.terms.items():
            for s in mono:
                if s not in SYMBOLS:
                    raise UnsupportedQuantisationError(f"unknown operator symbol {s!r}")
            if len(mono) > 2:
                raise UnsupportedOrderError("operators are at most quadratic")
            if abs(c) > COEF_TOL:
                clean[(_key(*mono), int(k))] = clean.get((_key(*mono), int(k)), 0) + complex(c)
        object.__setattr__(self, "terms", {k: v for k, v in clean.items() if abs(v) > COEF_TOL})

    @classmethod
    def symbol(cls, name: str, coef: complex = 1.0) -> "OperatorExpr":
        return cls({((name,), 0): coef})

    @classmethod
    def identity(cls, coef: complex = 1.0, hbar_degree: int = 0) -> "OperatorExpr":
        return cls({((), hbar_degree): coef})

    @classmethod
    def from_poly(cls, P, names: dict | None = None, drop_unmapped: bool = False) -> "OperatorExpr":
        """Quantise a polynomial of degree <= 2 by symbol substitution.

        ``names`` maps phase-space variables to operator symbols (default:
        identical names). Terms touching unmapped variables raise, or are
        dropped with ``drop_unmapped``.
        """
        names = {s: s for s in SYMBOLS} if names is None else names
        terms = {}
        for exps, c in P.terms.items():
            mono = []
            skip = False
            for var, e in zip(P.space.names, exps):
                if not e:
                    continue
                if var not in names:
                    if drop_unmapped:
                        skip = True
                        break
                    raise UnsupportedQuantisationError(f"variable {var!r} has no operator symbol")
                mono.extend([names[var]] * e)
            if skip:
                continue
            if len(mono) > 2:
                raise UnsupportedOrderError("only polynomials of degree <= 2 are quantised")
            if len(mono) == 2 and _conjugate(*mono):
                raise UnsupportedQuantisationError(
                    "products of conjugate symbols need an ordering prescription")
            key = (_key(*mono), 0)
            terms[key] = terms.get(key, 0) + c
        return cls(terms)

    # -- arithmetic ---------------------------------------------------------------
    def __add__(self, other: "OperatorExpr") -> "OperatorExpr":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return OperatorExpr(out)

    def __neg__(self):
        return OperatorExpr({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, OperatorExpr):
            out = {}
            for (ma, ka), va in self.terms.items():
                for (mb, kb), vb in other.terms.items():
                    if len(ma) + len(mb) == 2 and len(ma) == 1 and _conjugate(ma[0], mb[0]):
                        raise UnsupportedQuantisationError(
                            "products of conjugate symbols need an ordering prescription")
                    key = (_key(*ma, *mb), ka + kb)
                    out[key] = out.get(key, 0) + va * vb
            return OperatorExpr(out)
        return OperatorExpr({k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    # -- views --------------------------------------------------------------------
    def order(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    def part(self, length: int, hbar: float = 1.0) -> dict:
        out = {}
        for (mono, k), v in self.terms.items():
            if len(mono) == length:
                key = mono[0] if length == 1 else mono
                out[key] = out.get(key, 0) + v * hbar**k
        return out

    def linear(self, hbar: float = 1.0) -> dict:
        return self.part(1, hbar)

    def quadratic(self, hbar: float = 1.0) -> dict:
        return self.part(2, hbar)

    def identity_coeff(self, hbar: float = 1.0) -> complex:
        return self.part(0, hbar).get((), 0j)

    def is_zero(self, tol: float = 1e-12) -> bool:
        return all(abs(v) <= tol for v in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "OperatorExpr(0)"
        parts = []
        for (mono, k), v in sorted(self.terms.items()):
            h = f"*hbar^{k}" if k else ""
            parts.append(f"({v:.6g}){h}*" + ("*".join(mono) or "I"))
        return "OperatorExpr(" + " + ".join(parts) + ")"


def _conjugate(s: str, t: str) -> bool:
    if s in POSITIONS and t in MOMENTA:
        return MOMENTA.index(t) == POSITIONS.index(s)
    if t in POSITIONS and s in MOMENTA:
        return MOMENTA.index(s) == POSITIONS.index(t)
    return False


@dataclass(frozen=True)
class CommutatorTable:
    """``[A, B] = entries[(A, B)] * hbar * I`` with ``entries = 1j * {A, B}_D``."""

    hbar: float
    dirac: dict      # (A, B) -> {A, B}_D for A before B in SYMBOLS order
    entries: dict    # (A, B) -> 1j * dirac[(A, B)]

    def coefficient(self, a: str, b: str) -> complex:
        """Coefficient of ``hbar * I`` in ``[a, b]``."""
        if a == b:
            return 0j
        if (a, b) in self.entries:
            return self.entries[(a, b)]
        return -self.entries[(b, a)]

    def value(self, a: str, b: str) -> complex:
        return self.coefficient(a, b) * self.hbar


def build_commutator_table(system: ConstrainedSystem, hbar: float = 1.0,
                           symbols=SYMBOLS) -> CommutatorTable:
    dirac, entries = {}, {}
    space = system.space
    for i, a in enumerate(symbols):
        for b in symbols[i + 1:]:
            br = dirac_bracket(space.var(a), space.var(b), system)
            if not br.is_constant():
                raise UnsupportedQuantisationError(f"{{{a},{b}}}_D is not a constant")
            dirac[(a, b)] = br.constant()
            entries[(a, b)] = 1j * dirac[(a, b)]
    return CommutatorTable(float(hbar), dirac, entries)


def commutator(A: OperatorExpr, B: OperatorExpr, table: CommutatorTable) -> OperatorExpr:
    """Bilinear expansion with ``[a, bc] = [a, b] c + b [a, c]``."""
    if A.terms == B.terms:
        return OperatorExpr()
    if A.order() > 2 or B.order() > 2:
        raise UnsupportedOrderError("operators are at most quadratic")
    if A.order() == 2 and B.order() == 2:
        raise UnsupportedOrderError("commutator of two quadratic operators is not supported")
    out: dict = {}

    def add(mono, k, v):
        key = (_key(*mono), k)
        out[key] = out.get(key, 0) + v

    for (ma, ka), va in A.terms.items():
        for (mb, kb), vb in B.terms.items():
            if not ma or not mb:
                continue
            k = ka + kb + 1
            if len(ma) == 1 and len(mb) == 1:
                add((), k, va * vb * table.coefficient(ma[0], mb[0]))
            elif len(ma) == 1:
                b, c = mb
                add((c,), k, va * vb * table.coefficient(ma[0], b))
                add((b,), k, va * vb * table.coefficient(ma[0], c))
            else:
                b, c = ma
                add((c,), k, -va * vb * table.coefficient(mb[0], b))
                add((b,), k, -va * vb * table.coefficient(mb[0], c))
    return OperatorExpr(out)


def constraint_operators(system: ConstrainedSystem) -> dict:
    """Second-class constraints as operators; first-class ones are gauge-fixed away."""
    out = {}
    for c in system.constraints:
        if c.cls != "second":
            continue
        if not c.expr.is_linear():
            raise UnsupportedQuantisationError(f"constraint {c.label} is not linear")
        out[c.label] = OperatorExpr.from_poly(c.expr)
    return out


def hamiltonian_operator(system: ConstrainedSystem) -> OperatorExpr:
    """Quantised H; multiplier-times-constraint terms vanish on physical states and are dropped."""
    return OperatorExpr.from_poly(system.H, drop_unmapped=True)


def momentum_representation_matrix(params: BallParams | ConstrainedSystem,
                                   tol: float = 1e-10) -> tuple[np.ndarray, int]:
    """``M[j, k] = {q_k, P_j}_D`` so that ``P_j = -i hbar sum_k M[j, k] d/dq_k``."""
    system = params if isinstance(params, ConstrainedSystem) else ball_system(params)
    space = system.space
    M = np.array([[dirac_bracket(space.var(q), space.var(p), system).constant()
                   for q in POSITIONS] for p in MOMENTA])
    return M, echelon_rank(M, tol)


def substitute(expr: OperatorExpr, rules: dict) -> OperatorExpr:
    """Replace symbols by linear operator expressions."""
    out = OperatorExpr()
    for (mono, k), v in expr.terms.items():
        term = OperatorExpr.identity(v, k)
        for s in mono:
            term = term * (rules[s] if s in rules else OperatorExpr.symbol(s))
        out = out + term
    return out


@dataclass(frozen=True)
class Reduction:
    kinetic: float          # coefficient of P_x^2
    potential: float        # coefficient of x
    ratios: dict            # P_y, P_theta, y expressed as multiples of P_x or x
    operator: OperatorExpr


def physical_reduction(params: BallParams, hbar: float = 1.0,
                       ratios: dict | None = None) -> Reduction:
    """Reduce H to x and P_x using identities valid on physical states.

    Momentum ratios come from the rank-one representation matrix, the
    position ratio from the quantised holonomic constraint. ``ratios`` can
    override any of them.
    """
    system = ball_system(params)
    M, _ = momentum_representation_matrix(system)
    phi1 = constraint_operators(system)[1].linear()
    derived = {
        "P_y": float(M[1, 0] / M[0, 0]),
        "P_theta": float(M[2, 0] / M[0, 0]),
        "y": float(-(phi1["x"] / phi1["y"]).real),
    }
    if ratios:
        derived.update(ratios)
    rules = {
        "P_y": OperatorExpr.symbol("P_x", derived["P_y"]),
        "P_theta": OperatorExpr.symbol("P_x", derived["P_theta"]),
        "y": OperatorExpr.symbol("x", derived["y"]),
    }
    red = substitute(hamiltonian_operator(system), rules)
    kinetic = red.quadratic(hbar).get(("P_x", "P_x"), 0j).real
    potential = red.linear(hbar).get("x", 0j).real
    return Reduction(kinetic, potential, derived, red)


def intrinsic_momentum_factor(params: BallParams) -> float:
    """``P = ((a+5)/(a+3)) sec^2(phi) P_x``."""
    return (params.a + 5.0) / (params.a + 3.0) * params.sec**2


def intrinsic_hamiltonian(params: BallParams) -> OperatorExpr:
    """``P^2 (a+3) / (2 m sec^2(phi) (a+5)) - m g tan(phi) x`` written in terms of P_x."""
    kin = (params.a + 3.0) / (2.0 * params.m * params.sec**2 * (params.a + 5.0))
    P = OperatorExpr.symbol("P_x", intrinsic_momentum_factor(params))
    return kin * (P * P) + OperatorExpr.symbol("x", -params.m * params.g * params.tan)


def intrinsic_equivalence_check(params: BallParams, hbar: float = 1.0,
                                rtol: float = 1e-12) -> dict:
    system = ball_system(params)
    table = build_commutator_table(system, hbar)
    red = physical_reduction(params, hbar)
    intr = intrinsic_hamiltonian(params)
    kin_i = intr.quadratic(hbar)[("P_x", "P_x")].real
    pot_i = intr.linear(hbar)["x"].real
    M_eff = params.m * params.sec**2 * (params.a + 5.0) / (params.a + 3.0)
    kin_P = (params.a + 3.0) / (2.0 * params.m * params.sec**2 * (params.a + 5.0))
    P = OperatorExpr.symbol("P_x", intrinsic_momentum_factor(params))
    xP = commutator(OperatorExpr.symbol("x"), P, table).identity_coeff(hbar)
    M, rank = momentum_representation_matrix(system)

    close = lambda a, b: math.isclose(a, b, rel_tol=rtol, abs_tol=0.0)
    checks = {
        "kinetic": close(red.kinetic, kin_i),
        "potential": close(red.potential, pot_i),
        "commutator_x_P": abs(xP - 1j * hbar) <= rtol * hbar,
        "kinetic_is_one_over_2M": close(kin_P, 1.0 / (2.0 * M_eff)),
        "representation_rank_one": rank == 1,
    }
    return {
        "reduced": {"kinetic": red.kinetic, "potential": red.potential},
        "intrinsic": {"kinetic": kin_i, "potential": pot_i},
        "momentum_factor": intrinsic_momentum_factor(params),
        "commutator_x_P": xP,
        "rank": rank,
        "checks": checks,
        "passed": all(checks.values()),
    }
