"""Time the compiled and pure-Python ODE kernels on the same workloads.

Run with ``python benchmarks/bench_kernels.py``. The compiled extension must
be built (``pip install -e . --no-build-isolation``); otherwise only the
Python timings are reported.
"""

from __future__ import annotations

import argparse
import importlib
import json
import math
import time

import numpy as np

from annulus_minimizers import _kernel_py

WORKLOADS = {
    # (q, c, gamma, tau_end, n_outputs)
    "balanced": (2.0, 0.5, 1.0, math.log(2.0), 64),
    "concavity": (2.2597, 0.9, 1.0, math.log(2.0), 64),
    "convex": (0.6513, 0.5, 1.0, math.log(2.0), 64),
    "long": (3.0, 0.5, 1.0, math.log(50.0), 1024),
}


def _time(integrate, args, repeats):
    q, c, gamma, tau_end, n_out = args
    out = np.linspace(0.0, tau_end, n_out + 1)[1:]
    best = math.inf
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = integrate(q, c, gamma, tau_end, out)
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeats", type=int, default=20)
    p.add_argument("--json", action="store_true", help="print machine-readable results")
    args = p.parse_args(argv)
    try:
        compiled = importlib.import_module("annulus_minimizers._kernel")
    except ImportError:
        compiled = None
    rows = []
    for name, work in WORKLOADS.items():
        t_py, r_py = _time(_kernel_py.integrate, work, max(1, args.repeats // 4))
        row = {"workload": name, "python_s": t_py, "steps": int(r_py[6])}
        if compiled is not None:
            t_c, r_c = _time(compiled.integrate, work, args.repeats)
            row["compiled_s"] = t_c
            row["speedup"] = t_py / t_c
            row["identical"] = bool(np.array_equal(r_py[0], r_c[0]) and np.array_equal(r_py[1], r_c[1]))
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=1))
        return
    print(f"{'workload':<10} {'steps':>6} {'python':>10} {'compiled':>10} {'speedup':>8} identical")
    for row in rows:
        comp = f"{row['compiled_s'] * 1e3:8.3f}ms" if "compiled_s" in row else "       n/a"
        speed = f"{row['speedup']:7.1f}x" if "speedup" in row else "     n/a"
        same = row.get("identical", "n/a")
        print(f"{row['workload']:<10} {row['steps']:>6} {row['python_s'] * 1e3:8.3f}ms {comp} {speed} {same}")


if __name__ == "__main__":
    main()
