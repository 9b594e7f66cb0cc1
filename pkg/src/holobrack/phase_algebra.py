"""Sparse polynomial observables on a canonical phase space.

A :class:`Poly` maps dense exponent tuples of length ``2n`` (positions first,
then momenta, in pair order) to float coefficients. Everything is immutable;
arithmetic returns new objects with near-zero terms pruned.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Real

import numpy as np

from ._accel import njit
from .errors import DimensionError, UnknownVariableError

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class PhaseSpace:
    """Ordered canonical pairs ``(position, momentum)``."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((str(q), str(p)) for q, p in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        names = [name for pair in pairs for name in pair]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        if not pairs:
            raise ValueError("phase space needs at least one canonical pair")
        lookup = {q: i for i, (q, _) in enumerate(pairs)}
        lookup.update({p: i + len(pairs) for i, (_, p) in enumerate(pairs)})
        object.__setattr__(self, "_lookup", lookup)

    @property
    def n(self) -> int:
        return len(self.pairs)

    @property
    def dim(self) -> int:
        return 2 * len(self.pairs)

    @property
    def positions(self) -> tuple:
        return tuple(q for q, _ in self.pairs)

    @property
    def momenta(self) -> tuple:
        return tuple(p for _, p in self.pairs)

    @property
    def names(self) -> tuple:
        return self.positions + self.momenta

    def index(self, name: str) -> int:
        try:
            return self._lookup[name]
        except KeyError:
            raise UnknownVariableError(f"unknown phase-space variable {name!r}") from None

    def conjugate(self, name: str) -> str:
        i = self.index(name)
        return self.names[(i + self.n) % self.dim]

    def is_position(self, name: str) -> bool:
        return self.index(name) < self.n

    def var(self, name: str) -> "Poly":
        exps = [0] * self.dim
        exps[self.index(name)] = 1
        return Poly(self, {tuple(exps): 1.0})

    def const(self, value: float) -> "Poly":
        return Poly(self, {(0,) * self.dim: float(value)})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def point(self, **values: float) -> np.ndarray:
        """Phase point with the named entries set and the rest zero."""
        pt = np.zeros(self.dim)
        for name, value in values.items():
            pt[self.index(name)] = value
        return pt


def _prune(terms: dict, scale: float) -> dict:
    cut = ZERO_TOL * scale
    return {k: v for k, v in terms.items() if abs(v) > cut}


def _scale(*polys) -> float:
    s = 0.0
    for p in polys:
        for v in p.terms.values():
            if abs(v) > s:
                s = abs(v)
    return s


class Poly:
    """Real polynomial over the variables of a :class:`PhaseSpace`."""

    __slots__ = ("space", "terms")
    __array_priority__ = 1000  # keep numpy scalars from broadcasting over us

    def __init__(self, space: PhaseSpace, terms: dict | None = None, *, scale: float | None = None):
        self.space = space
        terms = {} if terms is None else {tuple(int(e) for e in k): float(v) for k, v in terms.items()}
        for k in terms:
            if len(k) != space.dim:
                raise DimensionError(f"exponent vector {k} does not match dimension {space.dim}")
            if min(k, default=0) < 0:
                raise ValueError(f"negative exponent in {k}")
        if scale is None:
            scale = max((abs(v) for v in terms.values()), default=0.0)
        self.terms = _prune(terms, scale)

    # -- construction helpers -------------------------------------------------
    @classmethod
    def linear(cls, space: PhaseSpace, coeffs: dict, constant: float = 0.0) -> "Poly":
        terms = {}
        if constant:
            terms[(0,) * space.dim] = float(constant)
        for name, c in coeffs.items():
            exps = [0] * space.dim
            exps[space.index(name)] = 1
            terms[tuple(exps)] = terms.get(tuple(exps), 0.0) + float(c)
        return cls(space, terms)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.space != self.space:
                raise DimensionError("polynomials live on different phase spaces")
            return other
        if isinstance(other, (Real, np.floating, np.integer)):
            return self.space.const(float(other))
        return NotImplemented

    # -- arithmetic ------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return Poly(self.space, out, scale=_scale(self, other))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.space, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (Real, np.floating, np.integer)):
            c = float(other)
            return Poly(self.space, {k: c * v for k, v in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ka, va in self.terms.items():
            for kb, vb in other.terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0.0) + va * vb
        return Poly(self.space, out, scale=_scale(self) * _scale(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, (Real, np.floating, np.integer)):
            return NotImplemented
        return self * (1.0 / float(other))

    def __pow__(self, k: int):
        if int(k) != k or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = self.space.const(1.0)
        for _ in range(int(k)):
            out = out * self
        return out

    # -- inspection ------------------------------------------------------------
    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(v) <= tol for v in self.terms.values())

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def constant(self) -> float:
        return self.terms.get((0,) * self.space.dim, 0.0)

    def is_constant(self) -> bool:
        return all(sum(k) == 0 for k in self.terms)

    def is_linear(self) -> bool:
        return self.degree() <= 1

    def variables(self) -> tuple:
        used = set()
        for k in self.terms:
            used.update(i for i, e in enumerate(k) if e)
        return tuple(self.space.names[i] for i in sorted(used))

    def max_abs_coeff(self) -> float:
        return _scale(self)

    def linear_part(self) -> tuple[np.ndarray, float]:
        """Gradient vector and constant term of a polynomial of degree <= 1."""
        if not self.is_linear():
            raise ValueError("polynomial is not linear")
        grad = np.zeros(self.space.dim)
        for k, v in self.terms.items():
            if sum(k):
                grad[k.index(1)] = v
        return grad, self.constant()

    def allclose(self, other, tol: float = 1e-12) -> bool:
        diff = self - other
        ref = max(1.0, _scale(self), _scale(self._coerce(other)))
        return diff.is_zero(tol * ref)

    def partial(self, name: str) -> "Poly":
        return partial(self, name)

    def __call__(self, pt) -> float:
        return evaluate(self, pt)

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        parts = []
        for k, v in sorted(self.terms.items(), reverse=True):
            mono = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.space.names, k) if e
            )
            parts.append(f"{v:+.6g}" + (f"*{mono}" if mono else ""))
        return "Poly(" + " ".join(parts) + ")"

    # -- compiled form ---------------------------------------------------------
    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.terms:
            return np.zeros((0, self.space.dim), dtype=np.int64), np.zeros(0)
        keys = list(self.terms)
        return np.array(keys, dtype=np.int64), np.array([self.terms[k] for k in keys])


def partial(F: Poly, name: str) -> Poly:
    """Formal partial derivative of ``F`` with respect to variable ``name``."""
    i = F.space.index(name)
    out = {}
    for k, v in F.terms.items():
        e = k[i]
        if e:
            kk = list(k)
            kk[i] = e - 1
            out[tuple(kk)] = v * e
    return Poly(F.space, out, scale=_scale(F))


def poisson_bracket(F: Poly, G: Poly, space: PhaseSpace | None = None) -> Poly:
    """``{F, G} = sum_mu dF/dq dG/dp - dG/dq dF/dp``."""
    space = F.space if space is None else space
    if F.space != space or G.space != space:
        raise DimensionError("poisson_bracket arguments live on different phase spaces")
    out = space.zero()
    for q, p in space.pairs:
        out = out + partial(F, q) * partial(G, p) - partial(G, q) * partial(F, p)
    # re-prune against the input magnitudes, not the intermediate sums
    return Poly(space, out.terms, scale=_scale(F) * _scale(G))


def evaluate(F: Poly, pt) -> float:
    pt = np.asarray(pt, dtype=float)
    if pt.shape != (F.space.dim,):
        raise DimensionError(f"phase point has shape {pt.shape}, expected ({F.space.dim},)")
    total = 0.0
    for k, v in F.terms.items():
        term = v
        for x, e in zip(pt, k):
            if e:
                term *= x**e
        total += term
    return total


# -- batched evaluation of several polynomials ---------------------------------

@dataclass(frozen=True)
class CompiledPolys:
    """Flat term arrays for evaluating a list of polynomials at many points."""

    exps: np.ndarray    # (T, dim) int64
    coeffs: np.ndarray  # (T,)
    owner: np.ndarray   # (T,) int64 index of the polynomial each term belongs to
    count: int
    dim: int

    @classmethod
    def from_polys(cls, polys) -> "CompiledPolys":
        polys = list(polys)
        if not polys:
            raise ValueError("nothing to compile")
        dim = polys[0].space.dim
        exps, coeffs, owner = [], [], []
        for j, P in enumerate(polys):
            e, c = P.to_arrays()
            exps.append(e)
            coeffs.append(c)
            owner.append(np.full(len(c), j, dtype=np.int64))
        return cls(
            np.ascontiguousarray(np.concatenate(exps).reshape(-1, dim), dtype=np.int64),
            np.concatenate(coeffs).astype(float),
            np.concatenate(owner),
            len(polys),
            dim,
        )

    def __call__(self, points) -> np.ndarray:
        """Evaluate at ``points`` of shape ``(N, dim)``; returns ``(N, count)``."""
        pts = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=float)))
        if pts.shape[1] != self.dim:
            raise DimensionError(f"points have {pts.shape[1]} columns, expected {self.dim}")
        return eval_terms(self.exps, self.coeffs, self.owner, self.count, pts)


@njit
def _eval_terms_nb(exps, coeffs, owner, count, points):
    n_pts = points.shape[0]
    out = np.zeros((n_pts, count))
    for i in range(n_pts):
        for t in range(coeffs.shape[0]):
            term = coeffs[t]
            for d in range(exps.shape[1]):
                e = exps[t, d]
                if e:
                    term *= points[i, d] ** e
            out[i, owner[t]] += term
    return out


def _eval_terms_np(exps, coeffs, owner, count, points):
    # (N, T) monomial values, then scatter-add into owners via a one-hot matmul
    mono = np.prod(points[:, None, :] ** exps[None, :, :], axis=2) * coeffs
    onehot = np.zeros((coeffs.shape[0], count))
    onehot[np.arange(coeffs.shape[0]), owner] = 1.0
    return mono @ onehot


def eval_terms(exps, coeffs, owner, count, points):
    from ._accel import USE_NUMBA

    if USE_NUMBA:
        return _eval_terms_nb(exps, coeffs, owner, count, points)
    return _eval_terms_np(exps, coeffs, owner, count, points)
