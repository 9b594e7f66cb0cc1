"""Dirac-bracket equations of motion, RK4 integration with drift monitoring."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._accel import USE_NUMBA, njit
from .ball import BallParams
from .errors import IncompleteSystemError, PreconditionError
from .export import csv_text
from .mechanics import ConstrainedSystem, dirac_bracket
from .phase_algebra import CompiledPolys, Poly, eval_terms, partial

SURFACE_TOL = 1e-9


@dataclass(frozen=True)
class VectorField:
    """``zdot_i = {z_i, H}_D`` as polynomials plus a compiled evaluator."""

    names: tuple
    rates: tuple
    compiled: CompiledPolys

    def __call__(self, pt) -> np.ndarray:
        return self.compiled(np.asarray(pt, dtype=float)[None, :])[0]

    def rate(self, name: str) -> Poly:
        return self.rates[self.names.index(name)]

    def second_derivatives(self) -> tuple:
        """``zddot_i = sum_j (d zdot_i / d z_j) zdot_j``, exact for polynomial rates."""
        out = []
        for f in self.rates:
            acc = f.space.zero()
            for name, g in zip(self.names, self.rates):
                d = partial(f, name)
                if not d.is_zero():
                    acc = acc + d * g
            out.append(acc)
        return tuple(out)


def eom_vector_field(system: ConstrainedSystem) -> VectorField:
    for c in system.constraints:
        m = system.multipliers.get(c.label)
        if c.cls == "second" and (m is None or m.kind == "unsolved"):
            raise IncompleteSystemError(f"multiplier of second-class constraint {c.label} unsolved")
    names = system.space.names
    rates = tuple(dirac_bracket(system.space.var(n), system.H, system) for n in names)
    return VectorField(names, rates, CompiledPolys.from_polys(rates))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray            # (N, 2n)
    names: tuple
    labels: tuple                 # constraint labels, residual column order
    residuals: np.ndarray         # (N, m)
    energy: np.ndarray            # (N,)
    energy_scale: float = 0.0     # largest sum of |H term| along the path

    @property
    def drift(self) -> dict:
        return {lab: float(np.abs(self.residuals[:, k]).max()) for k, lab in enumerate(self.labels)}

    @property
    def energy_drift(self) -> float:
        """Largest change of H relative to the magnitude of its terms.

        H vanishes at a rest start on the origin, so ``|H(0)|`` alone is no scale.
        """
        ref = max(abs(self.energy[0]), self.energy_scale, 1e-300)
        return float(np.abs(self.energy - self.energy[0]).max() / ref)

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.names.index(name)]

    def csv_header(self) -> list:
        return ["t", *self.names, *(f"phi{l}" for l in self.labels)]

    def rows(self):
        for k in range(len(self.times)):
            yield [self.times[k], *self.states[k], *self.residuals[k]]

    def to_csv(self) -> str:
        return csv_text(self.csv_header(), self.rows())


@njit
def _rk4_nb(exps, coeffs, owner, z0, h, steps):
    dim = z0.shape[0]
    out = np.empty((steps + 1, dim))
    out[0] = z0
    z = z0.copy()
    buf = np.empty((1, dim))
    for s in range(steps):
        buf[0] = z
        k1 = _rates_nb(exps, coeffs, owner, buf)
        buf[0] = z + 0.5 * h * k1
        k2 = _rates_nb(exps, coeffs, owner, buf)
        buf[0] = z + 0.5 * h * k2
        k3 = _rates_nb(exps, coeffs, owner, buf)
        buf[0] = z + h * k3
        k4 = _rates_nb(exps, coeffs, owner, buf)
        z = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[s + 1] = z
    return out


@njit
def _rates_nb(exps, coeffs, owner, pt):
    dim = pt.shape[1]
    out = np.zeros(dim)
    for t in range(coeffs.shape[0]):
        term = coeffs[t]
        for d in range(dim):
            e = exps[t, d]
            if e:
                term *= pt[0, d] ** e
        out[owner[t]] += term
    return out


def _rk4_np(field: VectorField, z0, h, steps, project=None):
    c = field.compiled
    f = lambda z: eval_terms(c.exps, c.coeffs, c.owner, c.count, z[None, :])[0]
    out = np.empty((steps + 1, z0.shape[0]))
    out[0] = z = z0.copy()
    for s in range(steps):
        k1 = f(z)
        k2 = f(z + 0.5 * h * k1)
        k3 = f(z + 0.5 * h * k2)
        k4 = f(z + h * k3)
        z = z + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if project is not None:
            z = project(z)
        out[s + 1] = z
    return out


def integrate(system: ConstrainedSystem, pt0, t_end: float, dt: float = 1e-3,
              project: Callable | None = None) -> Trajectory:
    """Classical RK4 from ``pt0``; the step is shrunk so it divides ``t_end``."""
    pt0 = np.asarray(pt0, dtype=float)
    if pt0.shape != (system.space.dim,):
        raise PreconditionError(f"initial state must have length {system.space.dim}")
    if t_end < 0 or dt <= 0 or not math.isfinite(t_end):
        raise PreconditionError("need t_end >= 0 and dt > 0")
    cons = CompiledPolys.from_polys(system.exprs)
    res0 = cons(pt0[None, :])[0]
    if np.abs(res0).max() >= SURFACE_TOL:
        raise PreconditionError(f"initial state is off the constraint surface (max |Phi| = "
                                f"{np.abs(res0).max():.3e})")
    field = eom_vector_field(system)
    steps = int(math.ceil(t_end / dt - 1e-9)) if t_end > 0 else 0
    h = t_end / steps if steps else 0.0
    if steps == 0:
        states = pt0[None, :].copy()
    elif USE_NUMBA and project is None:
        c = field.compiled
        states = _rk4_nb(c.exps, c.coeffs, c.owner, pt0, h, steps)
    else:
        states = _rk4_np(field, pt0, h, steps, project)
    times = np.arange(steps + 1) * h
    terms = [Poly(system.space, {k: v}) for k, v in system.H.terms.items()]
    parts = CompiledPolys.from_polys(terms)(states)
    return Trajectory(times, states, system.space.names, system.labels, cons(states),
                      parts.sum(axis=1), float(np.abs(parts).sum(axis=1).max()))


def intrinsic_acceleration(params: BallParams) -> float:
    """``g (a+3)/(a+5) sin(2 phi)/2``, the rolling acceleration along x."""
    return params.g * params.k * math.sin(2.0 * params.phi) / 2.0
