"""Degenerate Legendre transform, the Dirac-Bergmann consistency loop, the
constraint bracket matrix and Dirac brackets.

Weak equality is decided by projecting a polynomial onto the constant-coefficient
span of the active constraints; the leftover must vanish coefficient-wise.
That is exact for linear constraint sets, which is what the rolling-ball
system produces.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateConstraintError,
    IncompleteSystemError,
    InconsistentDynamicsError,
    IterationLimitError,
    NonPhysicalKineticError,
    PreconditionError,
)
from .phase_algebra import PhaseSpace, Poly, partial, poisson_bracket

log = logging.getLogger(__name__)

WEAK_TOL = 1e-10
PIVOT_TOL = 1e-10
PRIMARY = 0


# -----------------------------------------------------------------------------
# linear-algebra helpers on coefficient vectors
# -----------------------------------------------------------------------------

def _stack(polys: Sequence[Poly]) -> tuple[list, np.ndarray]:
    keys = sorted({k for P in polys for k in P.terms})
    index = {k: i for i, k in enumerate(keys)}
    mat = np.zeros((len(polys), len(keys)))
    for r, P in enumerate(polys):
        for k, v in P.terms.items():
            mat[r, index[k]] = v
    return keys, mat


def echelon_rank(mat: np.ndarray, tol: float = PIVOT_TOL) -> int:
    """Rank by Gaussian elimination with partial pivoting.

    Rows are scaled to unit max-norm first so the pivot threshold is relative.
    """
    A = np.array(mat, dtype=float, copy=True)
    if A.size == 0:
        return 0
    norms = np.abs(A).max(axis=1)
    keep = norms > 0
    A = A[keep] / norms[keep, None]
    rank = 0
    rows, cols = A.shape
    for c in range(cols):
        if rank == rows:
            break
        p = rank + int(np.argmax(np.abs(A[rank:, c])))
        if abs(A[p, c]) <= tol:
            continue
        A[[rank, p]] = A[[p, rank]]
        A[rank + 1:] -= np.outer(A[rank + 1:, c] / A[rank, c], A[rank])
        rank += 1
    return rank


def weak_remainder(F: Poly, constraints: Sequence[Poly]) -> tuple[Poly, np.ndarray]:
    """Split ``F = sum_j alpha_j Phi_j + remainder`` by least squares."""
    if not constraints or not F.terms:
        return F, np.zeros(len(constraints))
    keys, mat = _stack([F, *constraints])
    f, C = mat[0], mat[1:]
    alpha, *_ = np.linalg.lstsq(C.T, f, rcond=None)
    rem = f - C.T @ alpha
    return Poly(F.space, dict(zip(keys, rem)), scale=F.max_abs_coeff()), alpha


def weakly_zero(F: Poly, constraints: Sequence[Poly], tol: float = WEAK_TOL) -> bool:
    rem, _ = weak_remainder(F, constraints)
    return rem.is_zero(tol * max(F.max_abs_coeff(), 1e-300))


def _proportional(g: Poly, h: Poly, tol: float = 1e-10) -> float | None:
    """Return ``lam`` with ``g = lam * h`` when it exists."""
    if h.is_zero():
        return None
    keys, mat = _stack([g, h])
    lam = float(mat[0] @ mat[1] / (mat[1] @ mat[1]))
    if np.abs(mat[0] - lam * mat[1]).max() <= tol * max(np.abs(mat[0]).max(), 1e-300):
        return lam
    return None


# -----------------------------------------------------------------------------
# domain types
# -----------------------------------------------------------------------------

@dataclass(frozen=True)
class LagrangianSpec:
    """``L = 1/2 qdot^T M qdot - potential(q)`` over the positions of ``space``."""

    space: PhaseSpace
    mass_matrix: np.ndarray
    potential: Poly

    def __post_init__(self):
        M = np.asarray(self.mass_matrix, dtype=float)
        if M.shape != (self.space.n, self.space.n):
            raise ValueError(f"mass matrix must be {self.space.n}x{self.space.n}")
        if not np.allclose(M, M.T, atol=1e-14, rtol=0):
            raise ValueError("mass matrix must be symmetric")
        object.__setattr__(self, "mass_matrix", M)
        moms = {self.space.index(p) for p in self.space.momenta}
        for k in self.potential.terms:
            if any(k[i] for i in moms):
                raise ValueError("potential must depend on positions only")


@dataclass(frozen=True)
class Constraint:
    expr: Poly
    stage: int = PRIMARY
    label: int = 0
    cls: str = "unclassified"

    @property
    def is_primary(self) -> bool:
        return self.stage == PRIMARY

    @property
    def stage_name(self) -> str:
        return "primary" if self.stage == PRIMARY else f"secondary({self.stage})"


@dataclass(frozen=True)
class Multiplier:
    """Lagrange multiplier attached to one constraint.

    ``coordinate`` is set when the multiplier is a phase-space coordinate that
    already multiplies the constraint inside the Hamiltonian.
    """

    label: int
    symbol: str
    coordinate: str | None = None
    scale: float = 1.0
    kind: str = "unsolved"          # solved | free | unsolved
    expr: Poly | None = None        # value of the multiplier (Poly form)
    on_surface_zero: bool = False
    gauge_value: float | None = None

    def surface_value(self, pt) -> float:
        if self.kind == "free":
            return float(self.gauge_value or 0.0)
        if self.expr is None:
            raise IncompleteSystemError(f"multiplier {self.symbol} is unsolved")
        return self.expr(pt)

    @property
    def constant_value(self) -> float | None:
        if self.kind == "free":
            return float(self.gauge_value or 0.0)
        if self.expr is not None and self.expr.is_constant():
            return self.expr.constant()
        return None


@dataclass(frozen=True)
class MultiplierEquation:
    """``inhomogeneous + sum_k coefficients[k] * unknown_k ~ 0``."""

    source: int
    inhomogeneous: Poly
    coefficients: dict


@dataclass(frozen=True)
class ThetaBlock:
    labels: tuple
    matrix: np.ndarray
    inverse: np.ndarray | None


@dataclass(frozen=True)
class ThetaMatrix:
    labels: tuple
    polys: tuple                    # row-major tuple of tuples of Poly
    entries: np.ndarray | None      # None when some bracket is not constant
    rank: int | None
    blocks: tuple = ()

    @property
    def constant(self) -> bool:
        return self.entries is not None

    def _idx(self, label: int) -> int:
        return self.labels.index(label)

    def entry(self, j: int, l: int) -> float:
        if self.entries is None:
            raise DegenerateConstraintError("bracket matrix has nonconstant entries")
        return float(self.entries[self._idx(j), self._idx(l)])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> np.ndarray:
        if self.entries is None:
            raise DegenerateConstraintError("bracket matrix has nonconstant entries")
        r = [self._idx(j) for j in rows]
        c = [self._idx(l) for l in cols]
        return self.entries[np.ix_(r, c)]

    def zero_rows(self, tol: float = 1e-12) -> tuple:
        out = []
        for i, lab in enumerate(self.labels):
            if all(P.is_zero(tol) for P in self.polys[i]):
                out.append(lab)
        return tuple(out)


@dataclass(frozen=True)
class ConstrainedSystem:
    space: PhaseSpace
    H: Poly
    constraints: tuple
    theta: ThetaMatrix | None = None
    multipliers: dict = field(default_factory=dict)
    equations: tuple = ()
    multiplier_blocks: tuple = ()
    iterations: int = 0

    def constraint(self, label: int) -> Constraint:
        for c in self.constraints:
            if c.label == label:
                return c
        raise KeyError(f"no constraint labelled {label}")

    @property
    def labels(self) -> tuple:
        return tuple(c.label for c in self.constraints)

    @property
    def exprs(self) -> list:
        return [c.expr for c in self.constraints]

    def labels_of(self, cls: str) -> tuple:
        return tuple(c.label for c in self.constraints if c.cls == cls)

    @property
    def first_class(self) -> tuple:
        return self.labels_of("first")

    @property
    def second_class(self) -> tuple:
        return self.labels_of("second")

    def with_gauge(self, **values: float) -> "ConstrainedSystem":
        """Override the values assigned to free multipliers, by symbol."""
        mult = dict(self.multipliers)
        for lab, m in mult.items():
            if m.symbol in values:
                if m.kind != "free":
                    raise ValueError(f"multiplier {m.symbol} is not free")
                mult[lab] = replace(m, gauge_value=float(values.pop(m.symbol)))
        if values:
            raise KeyError(f"unknown free multipliers {sorted(values)}")
        return replace(self, multipliers=mult)

    def total_hamiltonian(self) -> Poly:
        """``H`` plus every non-coordinate multiplier times its constraint."""
        HT = self.H
        for c in self.constraints:
            m = self.multipliers.get(c.label)
            if m is None or m.coordinate is not None:
                continue
            if m.kind == "free":
                HT = HT + (m.gauge_value or 0.0) * c.expr
            elif m.expr is not None:
                HT = HT + m.expr * c.expr
            else:
                raise IncompleteSystemError(f"multiplier {m.symbol} is unsolved")
        return HT

    def dirac_weights(self) -> tuple[tuple, np.ndarray]:
        """Second-class labels and the inverse of their bracket sub-matrix."""
        cached = self.__dict__.get("_dirac_weights")
        if cached is not None:
            return cached
        if not self.constraints:
            return (), np.zeros((0, 0))
        if self.theta is None or any(c.cls == "unclassified" for c in self.constraints):
            raise IncompleteSystemError("constraints must be classified before Dirac brackets")
        sc = self.second_class
        W = np.zeros((len(sc), len(sc)))
        covered = set()
        for block in self.theta.blocks:
            if not set(block.labels) <= set(sc):
                continue
            if block.inverse is None:
                raise DegenerateConstraintError(f"singular second-class block {block.labels}")
            idx = [sc.index(l) for l in block.labels]
            W[np.ix_(idx, idx)] = block.inverse
            covered.update(block.labels)
        if covered != set(sc):
            raise DegenerateConstraintError(
                f"second-class constraints {sorted(set(sc) - covered)} lack an invertible block")
        object.__setattr__(self, "_dirac_weights", (sc, W))
        return sc, W


# -----------------------------------------------------------------------------
# operations
# -----------------------------------------------------------------------------

def legendre_transform(lag: LagrangianSpec) -> tuple[Poly, list[Constraint]]:
    """Canonical Hamiltonian and primary constraints of a velocity-quadratic Lagrangian."""
    space, M = lag.space, lag.mass_matrix
    scale = max(np.abs(M).max(), 1e-300)
    zero_rows = [i for i in range(space.n) if np.abs(M[i]).max() <= 1e-14 * scale]
    live = [i for i in range(space.n) if i not in zero_rows]

    primaries_vec = []
    for i in zero_rows:
        v = np.zeros(space.n)
        v[i] = 1.0
        primaries_vec.append(v)

    Hkin = space.zero()
    if live:
        block = M[np.ix_(live, live)]
        w, V = np.linalg.eigh(block)
        bscale = max(np.abs(w).max(), 1e-300)
        if np.any(w < -1e-12 * bscale):
            raise NonPhysicalKineticError(f"mass matrix has negative eigenvalues {w[w < 0]}")
        nonzero = w > 1e-12 * bscale
        for k in np.flatnonzero(~nonzero):
            v = np.zeros(space.n)
            v[live] = V[:, k]
            primaries_vec.append(v)
        # pseudo-inverse on the nondegenerate part of the block
        pinv = (V[:, nonzero] / w[nonzero]) @ V[:, nonzero].T
        moms = [space.var(space.momenta[i]) for i in live]
        for a, ia in enumerate(live):
            for b, ib in enumerate(live):
                if pinv[a, b] != 0.0:
                    Hkin = Hkin + 0.5 * pinv[a, b] * moms[a] * moms[b]

    primaries = []
    for k, v in enumerate(primaries_vec):
        expr = Poly.linear(space, {p: c for p, c in zip(space.momenta, v) if c != 0.0})
        primaries.append(Constraint(expr, PRIMARY, k + 1))
    H = Hkin + lag.potential
    return Poly(space, H.terms), primaries


Normalizer = Callable[[Poly, int], "tuple[Poly, int | None]"]


def _multiplier_coordinates(H: Poly, primaries: Sequence[Constraint]) -> list[str]:
    """Coordinates whose momentum is a primary constraint and that enter H linearly."""
    space = H.space
    coords = []
    for c in primaries:
        names = c.expr.variables()
        if len(names) != 1 or space.is_position(names[0]) or not c.expr.is_linear():
            continue
        q = space.conjugate(names[0])
        iq = space.index(q)
        if max((k[iq] for k in H.terms), default=0) <= 1:
            coords.append(q)
    return coords


def _new_slot(label: int, expr: Poly, H: Poly, coords: Sequence[str], taken: set,
              prefix: str) -> Multiplier:
    for q in coords:
        if q in taken:
            continue
        lam = _proportional(partial(H, q), expr)
        if lam is not None:
            taken.add(q)
            return Multiplier(label, q, coordinate=q, scale=lam)
    return Multiplier(label, f"{prefix}{label}")


def _next_label(used: set) -> int:
    k = 1
    while k in used:
        k += 1
    return k


def _consistency(phi: Constraint, H: Poly, constraints, slots, coords, weak_basis):
    """Split the time derivative of ``phi`` into a constraint candidate or an equation."""
    r = poisson_bracket(phi.expr, H)
    u_coeffs = {}
    for c in constraints:
        slot = slots[c.label]
        if slot.coordinate is not None:
            continue
        b = poisson_bracket(phi.expr, c.expr)
        if not weakly_zero(b, weak_basis):
            u_coeffs[slot.symbol] = b
    rem, _ = weak_remainder(r, weak_basis)
    rtol = WEAK_TOL * max(r.max_abs_coeff(), 1e-300)
    coord_dep = [q for q in coords if not partial(rem, q).is_zero(rtol)]
    if not u_coeffs and not coord_dep:
        return ("none", None) if rem.is_zero(rtol) else ("constraint", r)

    coefficients = {}
    r0 = r
    for q in coords:
        d = partial(r, q)
        if d.is_zero(rtol):
            continue
        if not d.is_constant():
            raise InconsistentDynamicsError(
                f"consistency of constraint {phi.label} is nonlinear in multiplier {q}")
        coefficients[q] = d.constant()
        r0 = r0 - d.constant() * H.space.var(q)
    for sym, b in u_coeffs.items():
        if not b.is_constant():
            raise InconsistentDynamicsError(
                f"multiplier {sym} enters the consistency of {phi.label} with a nonconstant coefficient")
        coefficients[sym] = b.constant()
    return "equation", MultiplierEquation(phi.label, r0, coefficients)


def dirac_bergmann(H: Poly, primaries: Sequence, space: PhaseSpace | None = None,
                   max_iter: int = 10, normalize: Normalizer | None = None,
                   multiplier_prefix: str = "u") -> ConstrainedSystem:
    """Run the consistency loop, solve the multipliers and classify constraints.

    ``primaries`` may be polynomials or :class:`Constraint` objects (to fix
    their labels). ``normalize(expr, stage)`` may replace a freshly found
    constraint by an equivalent form and choose its label.
    """
    space = H.space if space is None else space
    if not primaries:
        raise PreconditionError("dirac_bergmann needs at least one primary constraint")
    if max_iter < 1:
        raise PreconditionError("max_iter must be >= 1")

    constraints: list[Constraint] = []
    used: set = set()
    for k, p in enumerate(primaries):
        c = p if isinstance(p, Constraint) else Constraint(p, PRIMARY, 0)
        label = c.label or _next_label(used)
        used.add(label)
        constraints.append(Constraint(c.expr, PRIMARY, label))

    coords = _multiplier_coordinates(H, constraints)
    taken: set = set()
    slots = {c.label: Multiplier(c.label, f"{multiplier_prefix}{c.label}") for c in constraints}

    for it in range(1, max_iter + 1):
        ordered = sorted(constraints, key=lambda c: c.stage)  # stable: FIFO within stage
        basis = [c.expr for c in constraints]
        found: list[Constraint] = []
        equations = []
        for phi in ordered:
            kind, payload = _consistency(phi, H, constraints, slots, coords, basis)
            if kind == "equation":
                equations.append(payload)
            elif kind == "constraint":
                if payload.is_constant():
                    raise InconsistentDynamicsError(
                        f"consistency of constraint {phi.label} demands {payload.constant():g} = 0")
                stacked = basis + [c.expr for c in found]
                _, mat = _stack(stacked + [payload])
                if echelon_rank(mat) <= echelon_rank(_stack(stacked)[1]):
                    continue
                expr, label = payload, None
                if normalize is not None:
                    expr, label = normalize(payload, it)
                if label is None or label in used:
                    label = _next_label(used)
                used.add(label)
                found.append(Constraint(expr, it, label))
                log.debug("iteration %d: new constraint %d = %r", it, label, expr)
        if not found:
            break
        for c in found:
            slots[c.label] = _new_slot(c.label, c.expr, H, coords, taken, multiplier_prefix)
        constraints.extend(found)
    else:
        raise IterationLimitError(f"constraint loop did not close within {max_iter} iterations")

    constraints.sort(key=lambda c: c.label)
    system = ConstrainedSystem(
        space=space,
        H=H,
        constraints=tuple(constraints),
        multipliers=slots,
        equations=tuple(equations),
        iterations=it,
    )
    system = solve_multipliers(system)
    system = replace(system, theta=theta_matrix([c.expr for c in system.constraints], space,
                                                system.labels))
    return classify_constraints(system)


def solve_multipliers(system: ConstrainedSystem) -> ConstrainedSystem:
    """Solve the multiplier equations block by block.

    Unknowns that enter no equation are free (gauge). Solutions are kept as
    polynomials; those lying in the constraint span are flagged zero on the
    constraint surface.
    """
    slots = dict(system.multipliers)
    by_symbol = {m.symbol: lab for lab, m in slots.items()}
    equations = list(system.equations)
    basis = system.exprs

    # connected components of the equation/unknown incidence graph
    parent = {}

    def find(a):
        parent.setdefault(a, a)
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for j, eq in enumerate(equations):
        for sym, coef in eq.coefficients.items():
            if coef != 0.0:
                parent[find(("e", j))] = find(("u", sym))
        find(("e", j))
    groups: dict = {}
    for node in list(parent):
        groups.setdefault(find(node), []).append(node)

    blocks = []
    solved: dict = {}
    for members in groups.values():
        eqs = sorted(j for kind, j in members if kind == "e")
        unknowns = sorted(s for kind, s in members if kind == "u")
        if not unknowns:
            for j in eqs:
                if not weakly_zero(equations[j].inhomogeneous, basis):
                    raise InconsistentDynamicsError(
                        f"consistency of constraint {equations[j].source} cannot be satisfied")
            continue
        A = np.array([[equations[j].coefficients.get(s, 0.0) for s in unknowns] for j in eqs])
        rhs = [-equations[j].inhomogeneous for j in eqs]
        P = np.linalg.pinv(A)
        values = []
        for k in range(len(unknowns)):
            v = system.space.zero()
            for j in range(len(eqs)):
                if P[k, j] != 0.0:
                    v = v + P[k, j] * rhs[j]
            values.append(v)
        for j in range(len(eqs)):
            resid = -rhs[j]
            for k in range(len(unknowns)):
                resid = resid + A[j, k] * values[k]
            if not weakly_zero(resid, basis):
                raise InconsistentDynamicsError(
                    f"multiplier block {unknowns} has no solution (singular with nonzero rhs)")
        full_rank = echelon_rank(A) == len(unknowns)
        blocks.append((tuple(equations[j].source for j in eqs), tuple(unknowns), A))
        for s, v in zip(unknowns, values):
            solved[s] = (v, full_rank)

    for lab, m in slots.items():
        if m.symbol in solved:
            v, determined = solved[m.symbol]
            v = m.scale * v
            slots[lab] = replace(
                m,
                kind="solved" if determined else "free",
                expr=v,
                on_surface_zero=weakly_zero(v, basis) if not v.is_zero() else True,
                gauge_value=None if determined else 0.0,
            )
        else:
            slots[lab] = replace(m, kind="free", expr=None, gauge_value=0.0)
    unknown_syms = {s for eq in equations for s in eq.coefficients}
    stray = unknown_syms - set(by_symbol)
    if stray:
        raise InconsistentDynamicsError(f"equations mention unknown multipliers {sorted(stray)}")
    return replace(system, multipliers=slots, multiplier_blocks=tuple(blocks))


def theta_matrix(constraints: Sequence[Poly], space: PhaseSpace,
                 labels: Sequence[int] | None = None) -> ThetaMatrix:
    """Pairwise bracket matrix of the constraints with its invertible blocks."""
    if not constraints:
        raise PreconditionError("theta_matrix needs at least one constraint")
    labels = tuple(range(1, len(constraints) + 1)) if labels is None else tuple(labels)
    m = len(constraints)
    polys = [[space.zero()] * m for _ in range(m)]
    for j in range(m):
        for l in range(j + 1, m):
            b = poisson_bracket(constraints[j], constraints[l], space)
            polys[j][l] = b
            polys[l][j] = -b
    polys = tuple(tuple(row) for row in polys)
    if not all(P.is_constant() for row in polys for P in row):
        log.warning("bracket matrix has nonconstant entries; block inversion refused")
        return ThetaMatrix(labels, polys, None, None, ())

    E = np.array([[P.constant() for P in row] for row in polys])
    rank = echelon_rank(E)
    scale = max(np.abs(E).max(), 1e-300)
    nz = np.abs(E) > 1e-12 * scale

    # connected components of the nonzero pattern
    seen, blocks = set(), []
    for start in range(m):
        if start in seen or not nz[start].any():
            continue
        comp, stack = [], [start]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            comp.append(i)
            stack.extend(int(k) for k in np.flatnonzero(nz[i]) if k not in seen)
        comp.sort()
        sub = E[np.ix_(comp, comp)]
        inv = np.linalg.inv(sub) if echelon_rank(sub) == len(comp) else None
        blocks.append(ThetaBlock(tuple(labels[i] for i in comp), sub, inv))
    return ThetaMatrix(labels, polys, E, rank, tuple(blocks))


def block_antidiagonal_inverse(A: np.ndarray, C: np.ndarray) -> np.ndarray:
    """Inverse of ``[[0, C], [A, 0]]`` assembled as ``[[0, A^-1], [C^-1, 0]]``."""
    k = A.shape[0]
    out = np.zeros((2 * k, 2 * k))
    out[:k, k:] = np.linalg.inv(A)
    out[k:, :k] = np.linalg.inv(C)
    return out


def classify_constraints(system: ConstrainedSystem) -> ConstrainedSystem:
    """First class iff the bracket row vanishes and the Hamiltonian bracket is weakly zero."""
    if not system.constraints:
        return system
    theta = system.theta
    if theta is None:
        theta = theta_matrix(system.exprs, system.space, system.labels)
    zero_rows = set(theta.zero_rows())
    basis = system.exprs
    out = []
    for c in system.constraints:
        first = c.label in zero_rows and weakly_zero(poisson_bracket(c.expr, system.H), basis)
        out.append(replace(c, cls="first" if first else "second"))
    return replace(system, constraints=tuple(out), theta=theta)


def dirac_bracket(F: Poly, G: Poly, system: ConstrainedSystem) -> Poly:
    """``{F,G} - {F,Phi_j} W^{jl} {Phi_l,G}`` over the second-class constraints."""
    out = poisson_bracket(F, G, system.space)
    sc, W = system.dirac_weights()
    if not sc:
        return out
    left = [poisson_bracket(F, system.constraint(l).expr) for l in sc]
    right = [poisson_bracket(system.constraint(l).expr, G) for l in sc]
    scale = max(F.max_abs_coeff() * G.max_abs_coeff(), 1e-300)
    for j in range(len(sc)):
        if left[j].is_zero():
            continue
        for l in range(len(sc)):
            if W[j, l] != 0.0 and not right[l].is_zero():
                out = out - W[j, l] * left[j] * right[l]
    return Poly(system.space, out.terms, scale=scale)


# -----------------------------------------------------------------------------
# constraint surface
# -----------------------------------------------------------------------------

def surface_parametrization(system: ConstrainedSystem, labels: Sequence[int] | None = None):
    """Particular point and null-space basis of the (linear) constraint surface."""
    labels = system.labels if labels is None else tuple(labels)
    rows, rhs = [], []
    for lab in labels:
        expr = system.constraint(lab).expr
        if not expr.is_linear():
            raise PreconditionError("surface sampling needs linear constraints")
        grad, const = expr.linear_part()
        rows.append(grad)
        rhs.append(-const)
    A = np.array(rows)
    z0, *_ = np.linalg.lstsq(A, np.array(rhs), rcond=None)
    _, s, Vt = np.linalg.svd(A)
    rank = int(np.sum(s > PIVOT_TOL * max(s.max(), 1e-300)))
    return z0, Vt[rank:].T


def sample_surface(system: ConstrainedSystem, count: int, rng: np.random.Generator,
                   labels: Sequence[int] | None = None) -> np.ndarray:
    """Points drawn uniformly in parameter space ``[-1, 1]^k`` on the surface."""
    z0, N = surface_parametrization(system, labels)
    params = rng.uniform(-1.0, 1.0, size=(count, N.shape[1]))
    return z0[None, :] + params @ N.T
