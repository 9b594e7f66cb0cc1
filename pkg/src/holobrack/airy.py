"""Airy functions Ai, Bi with derivatives, zeros of Ai and Ai', and the Ai^2 tail.

Values inside [GRID_LO, GRID_HI] come from a table of anchor values spaced
STEP apart, built once by high-order Taylor stepping of y'' = u y, and are
re-expanded from the nearest anchor. Each function is stepped only in its
numerically stable direction: Ai backward from the decaying asymptotic form
at GRID_HI and forward from the exact values at 0 into the oscillatory
region; Bi forward from 0 on both sides. Outside the grid the standard
asymptotic expansions are accurate to near machine precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._accel import USE_NUMBA, njit
from .errors import DomainError

GRID_LO = -24.0
GRID_HI = 12.0
STEP = 0.125
TABLE_TERMS = 40
EVAL_TERMS = 30

AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
BI0 = 1.0 / (3.0 ** (1.0 / 6.0) * math.gamma(2.0 / 3.0))
BIP0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class AiryValue:
    u: float
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float

    @property
    def wronskian(self) -> float:
        return self.ai * self.bi_prime - self.ai_prime * self.bi


# -- asymptotic expansions -----------------------------------------------------

def _uv_coefficients(count: int = 40):
    u, v = [1.0], [1.0]
    for k in range(1, count):
        uk = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k)
        u.append(uk)
        v.append(-(6 * k + 1) / (6 * k - 1) * uk)
    return u, v


_U, _V = _uv_coefficients()


def _series(coef, zeta, alternate: bool, parity: int | None = None) -> float:
    """Sum ``coef[k] zeta^-k`` (optionally sign-alternating, even/odd k only), stopping at the smallest term."""
    total, prev = 0.0, math.inf
    for k, c in enumerate(coef):
        if parity is not None and k % 2 != parity:
            continue
        j = k // 2 if parity is not None else k
        term = c * zeta ** (-k) * ((-1) ** j if alternate else 1.0)
        if abs(term) > prev:
            break
        total += term
        prev = abs(term)
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def _asymptotic(u: float) -> tuple[float, float, float, float]:
    if u > 0:
        zeta = 2.0 / 3.0 * u**1.5
        q = u**0.25
        su, sv = _series(_U, zeta, True), _series(_V, zeta, True)
        gu, gv = _series(_U, zeta, False), _series(_V, zeta, False)
        dec = math.exp(-zeta) / _SQRT_PI
        grow = math.exp(zeta) / _SQRT_PI if zeta < 700 else math.inf
        return (dec * su / (2 * q), -q * dec * sv / 2, grow * gu / q, q * grow * gv)
    z = -u
    zeta = 2.0 / 3.0 * z**1.5
    q = z**0.25
    ue, uo = _series(_U, zeta, True, 0), _series(_U, zeta, True, 1)
    ve, vo = _series(_V, zeta, True, 0), _series(_V, zeta, True, 1)
    c, s = math.cos(zeta - math.pi / 4), math.sin(zeta - math.pi / 4)
    return (
        (c * ue + s * uo) / (_SQRT_PI * q),
        q * (s * ve - c * vo) / _SQRT_PI,
        (-s * ue + c * uo) / (_SQRT_PI * q),
        q * (c * ve + s * vo) / _SQRT_PI,
    )


# -- Taylor machinery ----------------------------------------------------------

def _taylor_step(x0: float, y0: float, d0: float, h: float, terms: int) -> tuple[float, float]:
    # (k+2)(k+1) c_{k+2} = x0 c_k + c_{k-1}
    c = [y0, d0]
    for k in range(terms - 2):
        prev = c[k - 1] if k >= 1 else 0.0
        c.append((x0 * c[k] + prev) / ((k + 2) * (k + 1)))
    y = d = 0.0
    hp = 1.0
    for k in range(terms):
        y += c[k] * hp
        if k + 1 < terms:
            d += (k + 1) * c[k + 1] * hp
        hp *= h
    return y, d


def _march(x0: float, y0: float, d0: float, x1: float) -> list[tuple[float, float]]:
    n = int(round(abs(x1 - x0) / STEP))
    h = math.copysign(STEP, x1 - x0)
    out = [(y0, d0)]
    x, y, d = x0, y0, d0
    for _ in range(n):
        y, d = _taylor_step(x, y, d, h, TABLE_TERMS)
        x += h
        out.append((y, d))
    return out


def _build_table() -> np.ndarray:
    n_neg = int(round(-GRID_LO / STEP))
    n_pos = int(round(GRID_HI / STEP))
    table = np.zeros((n_neg + n_pos + 1, 4))
    # Ai: backward from the decaying asymptotic form, forward into the oscillations
    ai_hi, aip_hi, _, _ = _asymptotic(GRID_HI)
    pos = _march(GRID_HI, ai_hi, aip_hi, 0.0)[::-1]
    table[n_neg:, 0:2] = pos
    neg = _march(0.0, pos[0][0], pos[0][1], GRID_LO)[::-1]
    table[: n_neg + 1, 0:2] = neg
    # Bi: forward from the exact origin values on both sides
    table[n_neg:, 2:4] = _march(0.0, BI0, BIP0, GRID_HI)
    table[: n_neg + 1, 2:4] = _march(0.0, BI0, BIP0, GRID_LO)[::-1]
    return table


_TABLE = _build_table()


@njit
def _expand_nb(u, lo, step, table, terms):
    out = np.empty((u.shape[0], 4))
    c = np.empty(terms)
    for i in range(u.shape[0]):
        j = int(np.floor((u[i] - lo) / step + 0.5))
        j = min(max(j, 0), table.shape[0] - 1)
        x0 = lo + j * step
        h = u[i] - x0
        for f in range(2):
            c[0] = table[j, 2 * f]
            c[1] = table[j, 2 * f + 1]
            for k in range(terms - 2):
                prev = c[k - 1] if k >= 1 else 0.0
                c[k + 2] = (x0 * c[k] + prev) / ((k + 2) * (k + 1))
            y = 0.0
            d = 0.0
            for k in range(terms - 1, -1, -1):
                y = y * h + c[k]
            for k in range(terms - 1, 0, -1):
                d = d * h + k * c[k]
            out[i, 2 * f] = y
            out[i, 2 * f + 1] = d
    return out


def _expand_np(u, lo, step, table, terms):
    j = np.clip(np.floor((u - lo) / step + 0.5).astype(np.int64), 0, table.shape[0] - 1)
    x0 = lo + j * step
    h = u - x0
    out = np.empty((u.shape[0], 4))
    for f in range(2):
        c = np.zeros((terms, u.shape[0]))
        c[0] = table[j, 2 * f]
        c[1] = table[j, 2 * f + 1]
        for k in range(terms - 2):
            prev = c[k - 1] if k >= 1 else 0.0
            c[k + 2] = (x0 * c[k] + prev) / ((k + 2) * (k + 1))
        y = np.zeros_like(u)
        d = np.zeros_like(u)
        for k in range(terms - 1, -1, -1):
            y = y * h + c[k]
        for k in range(terms - 1, 0, -1):
            d = d * h + k * c[k]
        out[:, 2 * f] = y
        out[:, 2 * f + 1] = d
    return out


def airy(u) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized ``(Ai, Ai', Bi, Bi')`` over an array of real arguments."""
    arr = np.asarray(u, dtype=float)
    flat = np.ascontiguousarray(arr.ravel())
    if not np.all(np.isfinite(flat)):
        raise DomainError("Airy functions need finite arguments")
    out = np.empty((flat.size, 4))
    inside = (flat >= GRID_LO) & (flat <= GRID_HI)
    if inside.any():
        kernel = _expand_nb if USE_NUMBA else _expand_np
        out[inside] = kernel(np.ascontiguousarray(flat[inside]), GRID_LO, STEP, _TABLE, EVAL_TERMS)
    for i in np.flatnonzero(~inside):
        out[i] = _asymptotic(float(flat[i]))
    return tuple(out[:, k].reshape(arr.shape) for k in range(4))


def airy_eval(u: float) -> AiryValue:
    u = float(u)
    if not math.isfinite(u):
        raise DomainError(f"Airy functions need a finite argument, got {u}")
    ai, aip, bi, bip = (float(v[0]) for v in airy(np.array([u])))
    return AiryValue(u, ai, aip, bi, bip)


def ai(u):
    return airy(u)[0]


def ai_prime(u):
    return airy(u)[1]


# -- zeros ---------------------------------------------------------------------

def _refine(f, df, guess: float, spacing: float) -> float:
    delta = 0.25 * spacing
    lo, hi = guess - delta, guess + delta
    flo, fhi = f(lo), f(hi)
    while flo * fhi > 0:
        delta *= 1.5
        lo, hi = guess - delta, guess + delta
        flo, fhi = f(lo), f(hi)
    for _ in range(30):  # bisection to a tight bracket
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    x = 0.5 * (lo + hi)
    for _ in range(20):  # Newton, guarded by the bracket
        fx = f(x)
        if fx == 0.0:
            return x
        if flo * fx < 0:
            hi = x
        else:
            lo, flo = x, fx
        step = fx / df(x)
        nx = x - step
        if not lo < nx < hi:
            nx = 0.5 * (lo + hi)
        if abs(nx - x) <= 1e-15 * max(1.0, abs(x)):
            return nx
        x = nx
    return x


def _check_index(n) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"zero index must be a positive integer, got {n}")
    return int(n)


@lru_cache(maxsize=None)
def ai_zero(n: int) -> float:
    """n-th negative zero of Ai, ordered by increasing magnitude."""
    n = _check_index(n)
    guess = -((3.0 * math.pi * (4 * n - 1) / 8.0) ** (2.0 / 3.0))
    return _refine(lambda x: airy_eval(x).ai, lambda x: airy_eval(x).ai_prime,
                   guess, math.pi / math.sqrt(-guess))


@lru_cache(maxsize=None)
def ai_prime_zero(n: int) -> float:
    """n-th negative zero of Ai'."""
    n = _check_index(n)
    guess = -((3.0 * math.pi * (4 * n - 3) / 8.0) ** (2.0 / 3.0))
    # Ai'' = u Ai
    return _refine(lambda x: airy_eval(x).ai_prime, lambda x: x * airy_eval(x).ai,
                   guess, math.pi / math.sqrt(-guess))


def ai_squared_tail(u0: float) -> float:
    """Closed form of the integral of Ai(u)^2 from u0 to infinity."""
    v = airy_eval(u0)
    return -v.u * v.ai**2 + v.ai_prime**2
