"""Compiled GMP elimination vs the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times ``rref`` and ``rank_mod_p`` on random rational matrices and on the
antisymmetrizer of a quaternion tensor cube, checks both backends agree,
then times an end-to-end lambda^2 computation in a subprocess per backend.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from hermlambda import _kernels_py, kernels


def random_rows(rng: random.Random, n: int, m: int, rank: int) -> list[list[Fraction]]:
    basis = [[Fraction(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(m)] for _ in range(rank)]
    rows = []
    for _ in range(n):
        coeffs = [rng.randint(-3, 3) for _ in range(rank)]
        rows.append([sum((c * b[j] for c, b in zip(coeffs, basis)), Fraction(0)) for j in range(m)])
    return rows


def antisymmetrizer_rows() -> tuple[list[list[Fraction]], int]:
    from hermlambda.algebra import make_quaternion
    from hermlambda.tensor import FreeModule, TensorPower
    tp = TensorPower(FreeModule(make_quaternion(-1, -3), 1), 3)
    s = tp.antisymmetrizer_matrix()
    return s.row_list(), s.cols


def best(fn, repeat: int) -> float:
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out


END_TO_END = (
    "import time\n"
    "from hermlambda import kernels\n"
    "from hermlambda.algebra import make_quaternion\n"
    "from hermlambda.hermitian import diagonal_form\n"
    "from hermlambda.lambdaring import herm, lam\n"
    "a = make_quaternion(-1, -1)\n"
    "t = time.perf_counter()\n"
    "c = lam(3, herm(diagonal_form(a, [1, -2])))\n"
    "print(kernels.BACKEND, time.perf_counter() - t, c.text())\n"
)


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    if kernels.BACKEND != "compiled":
        print("compiled backend not built; only the pure-Python timings are meaningful")
    rng = random.Random(args.seed)
    cases = [(f"random {n}x{m} rank {r}", random_rows(rng, n, m, r), m)
             for n, m, r in ((40, 40, 30), (80, 60, 50), (120, 120, 60))]
    rows, m = antisymmetrizer_rows()
    cases.append(("antisymmetrizer (-1,-3)^3 64x64", rows, m))
    print(f"{'case':36s} {'op':10s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for name, rows, m in cases:
        assert kernels.rref(rows, m) == _kernels_py.rref(rows, m)
        for op, fc, fp in (("rref", lambda: kernels.rref(rows, m), lambda: _kernels_py.rref(rows, m)),
                           ("rank_mod_p", lambda: kernels.rank_mod_p(rows, m, kernels.PRIME),
                            lambda: _kernels_py.rank_mod_p(rows, m, kernels.PRIME))):
            tc, tpy = best(fc, args.repeat), best(fp, args.repeat)
            print(f"{name:36s} {op:10s} {tc:10.4f} {tpy:10.4f} {tpy / tc:8.1f}x")
    print("end to end: lambda^3 <1,-2> over (-1,-1)")
    outs = []
    for pure in ("0", "1"):
        env = dict(os.environ, HERMLAMBDA_PURE=pure)
        r = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
        backend, secs, text = r.stdout.strip().split(" ", 2)
        outs.append(text)
        print(f"  {backend:9s} {float(secs):8.3f}s  {text}")
    assert outs[0] == outs[1], "backends disagree"


if __name__ == "__main__":
    main()
