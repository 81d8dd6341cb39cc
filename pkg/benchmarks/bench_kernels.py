#!/usr/bin/env python3
"""Time the compiled kernels against their pure-python twins.

Run from the repository root after an editable install:

    python3 benchmarks/bench_kernels.py [--repeats N]

Each kernel is timed on a workload shaped like real usage: root refinement
for a large constellation, a dense phase-space grid, and the batched band
contractions behind the random-state search.
"""

import argparse
import timeit

import numpy as np

from spinmultipoles._kernels import purepy

try:
    from spinmultipoles._kernels import _ckern
except ImportError:
    _ckern = None


def bench(label, fn_compiled, fn_pure, repeats):
    t_pure = min(timeit.repeat(fn_pure, number=1, repeat=repeats))
    if fn_compiled is None:
        print(f"{label:<28} python {t_pure * 1e3:8.2f} ms   (no compiled build)")
        return
    t_comp = min(timeit.repeat(fn_compiled, number=1, repeat=repeats))
    ratio = t_pure / t_comp if t_comp else float("inf")
    print(
        f"{label:<28} compiled {t_comp * 1e3:8.2f} ms   "
        f"python {t_pure * 1e3:8.2f} ms   speedup {ratio:5.1f}x"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5, help="best-of-N timing (default 5)")
    args = parser.parse_args()

    rng = np.random.default_rng(7)

    # Aberth sweeps: degree-40 polynomial, slightly perturbed starting roots.
    roots = rng.normal(size=40) + 1j * rng.normal(size=40)
    coeffs = np.poly(roots)[::-1].astype(complex)
    start = roots * (1 + 0.02j) + 0.01

    def run_aberth(impl):
        def inner():
            work = np.array(start, dtype=complex)
            impl.aberth_iterate(coeffs, work, 100, 1e-14)
        return inner

    # Phase-space grid: 181 x 360 points for a two_s = 20 state.
    two_s = 20
    hc = (rng.normal(size=two_s + 1) + 1j * rng.normal(size=two_s + 1)).astype(complex)
    rev = hc[::-1].copy()
    theta = np.linspace(0, np.pi, 181)
    phi = np.linspace(0, 2 * np.pi, 360, endpoint=False)
    z = (np.tan(theta / 2)[:, None] * np.exp(-1j * phi)[None, :]).ravel()
    z[~np.isfinite(z)] = 1e150
    logq = np.empty(z.shape[0])

    def run_husimi(impl):
        return lambda: impl.husimi_logq(hc, rev, z, two_s, logq)

    # Band contraction: one search batch, the K = q = two_s/2 band.
    psi = (rng.normal(size=(512, two_s + 1)) + 1j * rng.normal(size=(512, two_s + 1)))
    psi = psi.astype(complex)
    cg = rng.normal(size=two_s // 2 + 1)
    out = np.empty(512, dtype=complex)

    def run_band(impl):
        return lambda: impl.band_contract(psi, cg, 0, two_s // 2, out)

    print(f"repeats: best of {args.repeats}\n")
    bench("aberth_iterate (deg 40)", run_aberth(_ckern) if _ckern else None,
          run_aberth(purepy), args.repeats)
    bench("husimi_logq (181x360)", run_husimi(_ckern) if _ckern else None,
          run_husimi(purepy), args.repeats)
    bench("band_contract (512 rows)", run_band(_ckern) if _ckern else None,
          run_band(purepy), args.repeats)


if __name__ == "__main__":
    main()
