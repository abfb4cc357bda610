"""Time the circuit kernels under the numba and pure-numpy backends.

The backend is fixed at import time by ENTDIAG_DISABLE_NUMBA, so each backend
runs in its own interpreter.

    python benchmarks/bench_kernels.py [--n 8 12 16] [--L 20] [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import time

CHILD = r"""
import json, sys, time
import numpy as np
from entdiag import kernels, backend_name
from entdiag.circuit import CircuitSpec
from entdiag.hamiltonians import build_nn_ising

n, L, repeat = map(int, sys.argv[1:4])
spec = CircuitSpec.random(n, L, seed=0)
theta, pairs, mask = np.ascontiguousarray(spec.theta), spec.pairs, spec.cz_mask
H = build_nn_ising(n, 1.0).sparse_real

def fwd():
    psi = np.zeros(1 << n); psi[0] = 1.0
    kernels.forward(psi, theta, pairs, mask)
    return psi

def grad():
    psi = fwd()
    kernels.backward(psi, H @ psi, theta, pairs, mask)

def best_of(fn):
    fn()  # warm-up, includes JIT compilation
    times = []
    for _ in range(repeat):
        t = time.perf_counter(); fn(); times.append(time.perf_counter() - t)
    return min(times)

out = {"backend": backend_name(), "n": n, "L": L}
out["forward"] = best_of(fwd)
out["gradient"] = best_of(grad)
print(json.dumps(out))
"""


def run(backend: str, n: int, L: int, repeat: int) -> dict:
    env = dict(os.environ)
    if backend == "numpy":
        env["ENTDIAG_DISABLE_NUMBA"] = "1"
    else:
        env.pop("ENTDIAG_DISABLE_NUMBA", None)
    res = subprocess.run([sys.executable, "-c", CHILD, str(n), str(L), str(repeat)], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[8, 12, 16])
    ap.add_argument("--L", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    print(f"{'n':>3} {'L':>4} {'kernel':>9} {'numba [ms]':>11} {'numpy [ms]':>11} {'speedup':>8}")
    for n in args.n:
        nb = run("numba", n, args.L, args.repeat)
        npy = run("numpy", n, args.L, args.repeat)
        for k in ("forward", "gradient"):
            a, b = nb[k] * 1e3, npy[k] * 1e3
            print(f"{n:>3} {args.L:>4} {k:>9} {a:>11.3f} {b:>11.3f} {b / a:>8.1f}")


if __name__ == "__main__":
    start = time.perf_counter()
    main()
    print(f"total {time.perf_counter() - start:.1f} s")
