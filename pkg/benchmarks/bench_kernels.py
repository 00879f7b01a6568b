"""Compare the compiled GMP kernel with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--digits 50] [--count 20000] [--kmax 3] [--repeat 3]

Both back ends receive identical fixed-point inputs; the script checks that
the outputs agree bit for bit and reports the best of ``--repeat`` timings.
"""

import argparse
import random
import sys
import time

from seifert_wrt.kernels import _fallback

try:
    from seifert_wrt.kernels import _gmp
except ImportError:
    _gmp = None


def make_inputs(digits, count, kmax, seed=1):
    rng = random.Random(seed)
    wp = int(digits * 3.33) + 64
    one = 1 << wp

    def unit(scale):
        # modulus just below 1 so the progression decays
        return rng.randint(-one, one) * scale // 2, rng.randint(-one, one) * scale // 2

    t0 = unit(1)
    r0 = unit(1)
    g = unit(1)
    return (*t0, *r0, *g, rng.randint(-50, 50), rng.randint(1, 120), count, kmax, wp)


def best_of(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--digits", type=int, default=50)
    ap.add_argument("--count", type=int, default=20000)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    inputs = make_inputs(args.digits, args.count, args.kmax)
    t_py, out_py = best_of(_fallback.gauss_moments, inputs, args.repeat)
    print(f"python   {t_py * 1e3:9.2f} ms  ({args.count} terms, kmax={args.kmax}, {args.digits} digits)")
    if _gmp is None:
        print("compiled kernel not built; nothing to compare")
        return 0
    t_c, out_c = best_of(_gmp.gauss_moments, inputs, args.repeat)
    same = out_c == out_py
    print(f"gmp      {t_c * 1e3:9.2f} ms  speedup x{t_py / t_c:.1f}  bit-identical={same}")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
