"""The ball rolling without slipping down an incline.

Phase space ordering is q = (x, y, theta, chi1, chi2), p = (P_x, P_y, P_theta,
Pi1, Pi2); the chi's are the Lagrange multipliers of the holonomic form.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .mechanics import (
    PRIMARY,
    Constraint,
    ConstrainedSystem,
    LagrangianSpec,
    _proportional,
    dirac_bergmann,
    legendre_transform,
)
from .phase_algebra import PhaseSpace, Poly

SHAPES = (0.0, 2.0)  # hollow, solid

BALL_SPACE = PhaseSpace(
    (
        ("x", "P_x"),
        ("y", "P_y"),
        ("theta", "P_theta"),
        ("chi1", "Pi1"),
        ("chi2", "Pi2"),
    )
)


@dataclass(frozen=True)
class BallParams:
    m: float = 1.0
    g: float = 9.8
    R: float = 1.0
    phi: float = math.pi / 4
    a: float = 2.0

    def __post_init__(self):
        for name in ("m", "g", "R", "phi", "a"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.m <= 0 or self.R <= 0:
            raise ValueError("m and R must be positive")
        if self.g < 0:
            raise ValueError("g must be nonnegative")
        if not 0.0 <= self.phi < math.pi / 2:
            raise ValueError("phi must lie in [0, pi/2)")
        if self.a < 0:
            raise ValueError("a must be nonnegative")
        if self.a not in SHAPES:
            warnings.warn(f"a={self.a} is neither a hollow (0) nor a solid (2) ball",
                          stacklevel=2)

    @property
    def tan(self) -> float:
        return math.tan(self.phi)

    @property
    def sec(self) -> float:
        return 1.0 / math.cos(self.phi)

    @property
    def k(self) -> float:
        """Inertia ratio (a+3)/(a+5)."""
        return (self.a + 3.0) / (self.a + 5.0)


def reference_constraints(params: BallParams, space: PhaseSpace = BALL_SPACE) -> dict:
    t, s, R, a = params.tan, params.sec, params.R, params.a
    return {
        1: Poly.linear(space, {"x": t, "y": 1.0}),
        2: Poly.linear(space, {"x": s, "theta": -R}),
        3: space.var("Pi1"),
        4: space.var("Pi2"),
        5: Poly.linear(space, {"P_x": t, "P_y": 1.0}),
        6: Poly.linear(space, {"P_x": s, "P_theta": -(a + 3.0) / (2.0 * R)}),
    }


def lagrangian(params: BallParams) -> LagrangianSpec:
    space = BALL_SPACE
    ref = reference_constraints(params, space)
    M = np.diag([params.m, params.m, 2.0 * params.m * params.R**2 / (params.a + 3.0), 0.0, 0.0])
    V = (params.m * params.g * space.var("y")
         + space.var("chi1") * ref[1]
         + space.var("chi2") * ref[2])
    return LagrangianSpec(space, M, V)


def normalizer(params: BallParams):
    """Map discovered constraints onto the reference forms and labels."""
    ref = reference_constraints(params)

    def normalize(expr: Poly, stage: int):
        for label, R in ref.items():
            if label in (3, 4):
                continue
            if _proportional(expr, R) is not None:
                return R, label
        return expr, None

    return normalize


def ball_system(params: BallParams, max_iter: int = 10) -> ConstrainedSystem:
    """Legendre transform plus the full Dirac-Bergmann run."""
    H, primaries = legendre_transform(lagrangian(params))
    # primaries arrive in mass-matrix order (Pi1, Pi2); they carry labels 3 and 4
    labelled = [Constraint(c.expr, PRIMARY, 3 + k) for k, c in enumerate(primaries)]
    return dirac_bergmann(H, labelled, max_iter=max_iter, normalize=normalizer(params),
                          multiplier_prefix="chi")


# -- closed forms ---------------------------------------------------------------

def theta_A_closed(params: BallParams) -> np.ndarray:
    """Rows (5, 6) by columns (1, 2) of the constraint bracket matrix."""
    t, s, a = params.tan, params.sec, params.a
    return -np.array([[s * s, s * t], [s * t, s * s + (a + 3.0) / 2.0]])


def theta_A_inverse_printed(params: BallParams) -> np.ndarray:
    """The block inverse in the form quoted in the literature."""
    c, sn, a = math.cos(params.phi), math.sin(params.phi), params.a
    return np.array([[(a + 3.0) * c * c + 2.0, -2.0 * sn], [-2.0 * sn, 2.0]]) / (a + 5.0)


def theta_A_inverse_closed(params: BallParams) -> np.ndarray:
    """Exact inverse of :func:`theta_A_closed`."""
    return -theta_A_inverse_printed(params)


def multipliers_closed(params: BallParams) -> tuple[float, float]:
    m, g, a, phi = params.m, params.g, params.a, params.phi
    chi1 = -m * g * ((a + 3.0) * math.cos(phi) ** 2 + 2.0) / (a + 5.0)
    chi2 = 2.0 * m * g * math.sin(phi) / (a + 5.0)
    return chi1, chi2


def dirac_table_closed(params: BallParams) -> dict:
    """Nonzero position-momentum Dirac brackets."""
    k, a, R, phi = params.k, params.a, params.R, params.phi
    c, s = math.cos(phi), math.sin(phi)
    return {
        ("x", "P_x"): k * c * c,
        ("y", "P_y"): k * s * s,
        ("x", "P_y"): -k * math.sin(2 * phi) / 2,
        ("y", "P_x"): -k * math.sin(2 * phi) / 2,
        ("theta", "P_theta"): 2.0 / (a + 5.0),
        ("x", "P_theta"): 2.0 * R * c / (a + 5.0),
        ("y", "P_theta"): -2.0 * R * s / (a + 5.0),
        ("theta", "P_x"): k * c / R,
        ("theta", "P_y"): -k * s / R,
    }


def rest_state(system: ConstrainedSystem, **values: float) -> np.ndarray:
    """Phase point with the given entries, multiplier coordinates at their solved values."""
    space = system.space
    pt = space.point(**values)
    for m in system.multipliers.values():
        if m.coordinate is not None and m.coordinate not in values:
            v = m.constant_value
            if v is not None:
                pt[space.index(m.coordinate)] = v / m.scale
    return pt
