"""Timing of the zero-locator float kernels: numba against the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``. Both backends are checked to
agree before anything is timed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from whmf import _accel


def _best(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--terms", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    coeffs = rng.standard_normal(args.terms)
    z = rng.uniform(-0.5, 0.5, args.points) + 1j * rng.uniform(0.2, 2.0, args.points)
    contours = z[: (args.points // 64) * 64].reshape(-1, 64)

    ref = _accel.eval_series_numpy(coeffs, 0, z)
    got = _accel.eval_series(coeffs, 0, z)
    assert np.allclose(ref, got, rtol=1e-10, atol=1e-12), "backends disagree on eval_series"
    vals = _accel.eval_series(coeffs, 0, contours)
    t_ref, w_ref = _accel.phase_sums_numpy(vals)
    t_got, w_got = _accel.phase_sums(vals)
    assert np.allclose(t_ref, t_got) and np.allclose(w_ref, w_got), "backends disagree on phase_sums"

    rows = [
        ("eval_series", lambda: _accel.eval_series_numpy(coeffs, 0, z), lambda: _accel.eval_series(coeffs, 0, z)),
        ("phase_sums", lambda: _accel.phase_sums_numpy(vals), lambda: _accel.phase_sums(vals)),
    ]
    print(f"backend: {_accel.BACKEND}; {args.points} points, {args.terms} terms, best of {args.repeat}")
    print(f"{'kernel':<12} {'numpy (s)':>10} {_accel.BACKEND + ' (s)':>12} {'speedup':>8}")
    for name, slow, fast in rows:
        a, b = _best(slow, args.repeat), _best(fast, args.repeat)
        print(f"{name:<12} {a:>10.4f} {b:>12.4f} {a / b:>8.1f}")


if __name__ == "__main__":
    main()
