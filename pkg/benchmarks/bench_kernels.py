"""Compare the compiled float volume kernel with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--points N] [--repeat R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from kstab import _kernels_py, build_blowup_plane, build_blowup_quadric

try:
    from kstab import _kernels
except ImportError:  # extension not built
    _kernels = None


def _model_arrays(model):
    gram = np.array([[float(x) for x in row] for row in model.form.gram])
    curves = np.array([[float(x) for x in c.coeffs] for c in model.negative_curves])
    extra = np.array([[float(x) for x in c.coeffs] for c in model.extra_generators + (model.anticanonical,)])
    return gram, curves, extra


def _points(model, n, rng):
    K = np.array([float(x) for x in model.anticanonical.coeffs])
    noise = rng.uniform(-1.0, 1.0, size=(n, len(K)))
    return K[None, :] + 0.6 * noise


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=40_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    rng = np.random.default_rng(12)
    models = {
        "plane, 5 points (16 curves)": build_blowup_plane(5),
        "quadric, 4 points (16 curves)": build_blowup_quadric(4),
        "plane, 6 points (27 curves)": build_blowup_plane(6),
    }
    print(f"{'model':<32} {'numpy s':>10} {'compiled s':>11} {'speedup':>8} {'max |diff|':>11}")
    for name, model in models.items():
        gram, curves, extra = _model_arrays(model)
        pts = _points(model, args.points, rng)
        t_py, v_py = _time(lambda: _kernels_py.grid_volumes(gram, curves, extra, pts), args.repeat)
        if _kernels is None:
            print(f"{name:<32} {t_py:>10.4f} {'n/a':>11}")
            continue
        t_c, v_c = _time(lambda: _kernels.grid_volumes(gram, curves, extra, pts), args.repeat)
        diff = float(np.max(np.abs(v_py - v_c)))
        print(f"{name:<32} {t_py:>10.4f} {t_c:>11.4f} {t_py / t_c:>7.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
