"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both variants are called directly, so the comparison needs numba enabled
(i.e. HOLOBRACK_DISABLE_NUMBA unset). Compilation is done in a warm-up call
and reported separately.
"""
import argparse
import importlib
import time
import timeit

import numpy as np

from holobrack import dynamics, phase_algebra
from holobrack._accel import backend
from holobrack.ball import BallParams, ball_system, rest_state
from holobrack.dynamics import eom_vector_field

# the package re-exports the function airy, which shadows the submodule attribute
airy_mod = importlib.import_module("holobrack.airy")


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def _warm(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def cases():
    system = ball_system(BallParams(phi=0.5))
    field = eom_vector_field(system)
    c = field.compiled
    pts = np.random.default_rng(0).normal(size=(20000, system.space.dim))
    z0 = rest_state(system)
    steps, h = 2000, 1e-3
    u = np.linspace(airy_mod.GRID_LO, airy_mod.GRID_HI, 200001)
    tab, lo, step, terms = airy_mod._TABLE, airy_mod.GRID_LO, airy_mod.STEP, airy_mod.EVAL_TERMS
    return [
        ("poly eval, 20000 points",
         lambda: phase_algebra._eval_terms_nb(c.exps, c.coeffs, c.owner, c.count, pts),
         lambda: phase_algebra._eval_terms_np(c.exps, c.coeffs, c.owner, c.count, pts)),
        ("RK4, 2000 steps",
         lambda: dynamics._rk4_nb(c.exps, c.coeffs, c.owner, z0, h, steps),
         lambda: dynamics._rk4_np(field, z0, h, steps)),
        ("Airy expansion, 200001 points",
         lambda: airy_mod._expand_nb(u, lo, step, tab, terms),
         lambda: airy_mod._expand_np(u, lo, step, tab, terms)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if backend() != "numba":
        print("numba disabled: unset HOLOBRACK_DISABLE_NUMBA to compare the two paths")
        return 1
    print(f"{'kernel':32s} {'warm-up':>9s} {'numba':>10s} {'numpy':>10s} {'speed-up':>9s}")
    for name, nb, npy in cases():
        warm = _warm(nb)
        a, b = nb(), npy()
        a = a if isinstance(a, np.ndarray) else np.asarray(a)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12), name
        t_nb, t_np = _best(nb, args.repeat), _best(npy, args.repeat)
        print(f"{name:32s} {warm:8.3f}s {t_nb * 1e3:8.2f}ms {t_np * 1e3:8.2f}ms {t_np / t_nb:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
