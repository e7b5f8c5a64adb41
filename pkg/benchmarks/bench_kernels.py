"""Compare the compiled and pure-Python kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--n 2000] [--repeat 5]

Times the noncentral chi-square tail, the regularised incomplete gamma and
the scaled Bessel function on the same random inputs for every available
backend, then times a full implied-vol surface in a subprocess per backend.
"""

import argparse
import math
import os
import random
import subprocess
import sys
import timeit

from mmmvol import kernels

SURFACE_SNIPPET = """
import time
from mmmvol import ModelParams, kernels
from mmmvol.surface import generate
p = ModelParams(1362.18, 0.0011154, 43.307, 0.089896)
strikes = [p.S * (0.5 + 0.075 * i) for i in range(21)]
expiries = [0.1 * 1.27 ** i for i in range(20)]
t = time.perf_counter()
generate(p, strikes, expiries)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def make_inputs(n, seed):
    rng = random.Random(seed)
    rows = []
    for _ in range(n):
        x = math.exp(rng.uniform(math.log(1e-2), math.log(2e3)))
        y = x * math.exp(rng.uniform(-2.0, 2.0))
        rows.append((y, rng.choice((0.0, 4.0)), x, rng.random() < 0.5))
    return rows


def bench_module(mod, rows, repeat):
    def tails():
        for y, d, x, upper in rows:
            mod.log_ncx2_tail(y, d, x, upper)

    def gamma():
        for y, d, x, _ in rows:
            mod.log_gamma_q(d + 1.0, 0.5 * y)

    def bessel():
        for _, _, x, _ in rows:
            mod.log_bessel_i_scaled(1, x)

    out = {}
    for name, fn in (("ncx2_tail", tails), ("gamma_q", gamma), ("bessel_i1e", bessel)):
        out[name] = min(timeit.repeat(fn, number=1, repeat=repeat)) / len(rows)
    return out


def surface_time(pure):
    env = dict(os.environ)
    if pure:
        env["MMMVOL_PURE_PYTHON"] = "1"
    res = subprocess.run([sys.executable, "-c", SURFACE_SNIPPET], env=env, check=True,
                         capture_output=True, text=True)
    name, secs = res.stdout.split()
    return name, float(secs)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip-surface", action="store_true")
    args = ap.parse_args(argv)

    rows = make_inputs(args.n, args.seed)
    backends = kernels.available_backends()
    results = {name: bench_module(mod, rows, args.repeat) for name, mod in sorted(backends.items())}

    print(f"{'kernel':<12}" + "".join(f"{name + ' us/call':>20}" for name in results) + "   speedup")
    for kernel in next(iter(results.values())):
        cells = [results[name][kernel] * 1e6 for name in results]
        speed = ""
        if "compiled" in results:
            speed = f"{results['python'][kernel] / results['compiled'][kernel]:9.1f}x"
        print(f"{kernel:<12}" + "".join(f"{c:20.3f}" for c in cells) + "   " + speed)

    if not args.skip_surface:
        print()
        print("21x20 implied-vol surface")
        for pure in (False, True):
            name, secs = surface_time(pure)
            print(f"  {name:<9} {secs:8.3f} s")
        if "compiled" not in backends:
            print("  (extension not built; both runs used the python backend)")


if __name__ == "__main__":
    main()
