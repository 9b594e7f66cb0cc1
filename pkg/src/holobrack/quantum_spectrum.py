"""Bound states of a particle in a linear potential: hard wall and symmetric wedge.

Wall: V = -f x for x < 0 with an infinite barrier at x >= 0.
Wedge: V = f |x|.
With kappa = (2M / (hbar^2 f^2))^(1/3) every state is a piece of
Ai(kappa (f |x| - E)), and the energies are eps * |root| for the Airy zeros.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .airy import ai, ai_prime_zero, ai_squared_tail, ai_zero, airy_eval
from .ball import BallParams
from .errors import ConsistencyError, PreconditionError, ZeroForceError

ROOT_AI = "ai"
ROOT_AI_PRIME = "ai_prime"


@dataclass(frozen=True)
class IntrinsicParams:
    M: float
    f: float
    hbar: float = 1.0

    def __post_init__(self):
        if not (self.M > 0 and self.hbar > 0):
            raise ValueError("M and hbar must be positive")
        if not self.f > 0:
            raise ZeroForceError("the force must be positive for a discrete spectrum")

    @classmethod
    def unit_scale(cls) -> "IntrinsicParams":
        """Units where the energy and length scales are both 1."""
        return cls(M=0.5, f=1.0, hbar=1.0)

    @property
    def eps(self) -> float:
        """Energy scale (hbar^2 f^2 / 2M)^(1/3)."""
        return (self.hbar**2 * self.f**2 / (2.0 * self.M)) ** (1.0 / 3.0)

    @property
    def kappa(self) -> float:
        return (2.0 * self.M / (self.hbar**2 * self.f**2)) ** (1.0 / 3.0)

    @property
    def kappa_f(self) -> float:
        """(2 M f / hbar^2)^(1/3), the inverse length scale."""
        return (2.0 * self.M * self.f / self.hbar**2) ** (1.0 / 3.0)

    @property
    def ell(self) -> float:
        return 1.0 / self.kappa_f

    def same_as(self, other: "IntrinsicParams", rtol: float = 1e-12) -> bool:
        return all(math.isclose(getattr(self, k), getattr(other, k), rel_tol=rtol)
                   for k in ("M", "f", "hbar"))


def intrinsic_params(ball: BallParams, hbar: float = 1.0) -> IntrinsicParams:
    f = ball.m * ball.g * ball.tan
    if ball.phi == 0.0 or f == 0.0:
        raise ZeroForceError("a flat plane has a continuous, unbounded spectrum")
    M = ball.m * ball.sec**2 * (ball.a + 5.0) / (ball.a + 3.0)
    return IntrinsicParams(M, f, hbar)


@dataclass(frozen=True)
class Eigenpair:
    rank: int
    energy: float
    parity: str                    # wall | odd | even
    root_family: str               # ai | ai_prime
    root_index: int
    root: float
    norm_sq: float                 # |C|^2
    params: IntrinsicParams = field(repr=False)

    @property
    def literature_label(self) -> int:
        """Index the wedge levels would get as E_{2n-1} (odd) and E_{2n} (even)."""
        if self.parity == "wall":
            return self.root_index
        return 2 * self.root_index - (1 if self.parity == "odd" else 0)

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "energy": self.energy,
            "parity": self.parity,
            "root_family": self.root_family,
            "root_index": self.root_index,
            "norm_sq": self.norm_sq,
        }


def _root(family: str, n: int) -> float:
    return ai_zero(n) if family == ROOT_AI else ai_prime_zero(n)


def wall_spectrum(params: IntrinsicParams, n_max: int) -> list[Eigenpair]:
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    out = []
    for n in range(1, n_max + 1):
        a_n = ai_zero(n)
        out.append(Eigenpair(n, params.eps * abs(a_n), "wall", ROOT_AI, n, a_n,
                             params.kappa_f / airy_eval(a_n).ai_prime ** 2, params))
    return out


def wall_norm_unsimplified(params: IntrinsicParams, n: int) -> float:
    """Normalization before dropping the vanishing ``u0 Ai(u0)^2`` term.

    Evaluated literally it comes out negative; its magnitude is ``|C_n|^2``.
    """
    u0 = ai_zero(n)
    E = params.eps * abs(u0)
    v = airy_eval(u0)
    return -(E / (u0 * params.f)) ** -1 * (u0 * v.ai**2 - v.ai_prime**2) ** -1


def wedge_spectrum(params: IntrinsicParams, n_max: int) -> list[Eigenpair]:
    """First ``n_max`` wedge levels, ascending, from the merged Ai and Ai' zero families."""
    if n_max < 1:
        raise PreconditionError("n_max must be >= 1")
    candidates = []
    for n in range(1, n_max + 1):
        candidates.append((abs(ai_prime_zero(n)), "even", ROOT_AI_PRIME, n))
        candidates.append((abs(ai_zero(n)), "odd", ROOT_AI, n))
    candidates.sort()
    out = []
    for rank, (mag, parity, family, n) in enumerate(candidates[:n_max], start=1):
        root = -mag
        # two half-lines, each contributing tail(root) / kappa_f
        norm_sq = params.kappa_f / (2.0 * ai_squared_tail(root))
        out.append(Eigenpair(rank, params.eps * mag, parity, family, n, root, norm_sq, params))
    return out


def _check(pair: Eigenpair, params: IntrinsicParams):
    if not pair.params.same_as(params):
        raise ConsistencyError("eigenpair was computed with different parameters")
    expected = params.eps * abs(_root(pair.root_family, pair.root_index))
    if not math.isclose(pair.energy, expected, rel_tol=1e-12):
        raise ConsistencyError(f"eigenpair energy {pair.energy} != {expected}")


def eigenstate_eval(pair: Eigenpair, params: IntrinsicParams, x):
    """Normalized wavefunction at ``x`` (scalar or array)."""
    _check(pair, params)
    xs = np.asarray(x, dtype=float)
    C = math.sqrt(pair.norm_sq)
    k, f, E = params.kappa, params.f, pair.energy
    if pair.parity == "wall":
        psi = np.where(xs < 0, C * ai(-k * (f * np.minimum(xs, 0.0) + E)), 0.0)
    else:
        psi = C * ai(k * (f * np.abs(xs) - E))
        if pair.parity == "odd":
            psi = np.where(xs >= 0, -psi, psi)
    return float(psi) if np.ndim(psi) == 0 else psi


def probability_density(pair: Eigenpair, params: IntrinsicParams, x):
    psi = eigenstate_eval(pair, params, x)
    return psi * psi


def phase_factor(energy: float, t: float, t0: float = 0.0, hbar: float = 1.0) -> complex:
    """Time factor exp(-i E (t - t0) / hbar) of a stationary state."""
    return cmath.exp(-1j * energy * (t - t0) / hbar)


def sample_wavefunction(pair: Eigenpair, params: IntrinsicParams, count: int = 401,
                        span: float = 10.0) -> tuple[np.ndarray, np.ndarray]:
    """Grid covering the classically allowed region plus ``span`` length scales."""
    reach = pair.energy / params.f + span * params.ell
    lo = -reach
    hi = 0.0 if pair.parity == "wall" else reach
    xs = np.linspace(lo, hi, count)
    return xs, eigenstate_eval(pair, params, xs)
