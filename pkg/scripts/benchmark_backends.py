"""Time a fixed set of job files under the gmpy2 and the pure-Python scalar backends.

Each backend runs in its own interpreter (the backend is chosen at import
time). Reports must agree byte-for-byte apart from timing.

    python3 scripts/benchmark_backends.py [--repeat N] [JOB ...]
"""

import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_JOBS = [
    "homogeneity_clifford_m3",
    "closure_swap_signs",
    "quadratic_homogeneity_clifford_m3",
    "check_laplacian_weyl_n2_k2",
    "schur_ratios_d4_n3",
]

WORKER = r"""
import json, sys, time
from lapinv._scalar import BACKEND
from lapinv.cli import dumps, run, strip_timing
jobs, repeat = json.loads(sys.argv[1]), int(sys.argv[2])
out = {"backend": BACKEND, "results": {}}
for name, job in jobs.items():
    best = None
    for _ in range(repeat):
        t = time.perf_counter()
        report, _ = run(job)
        dt = time.perf_counter() - t
        best = dt if best is None else min(best, dt)
    out["results"][name] = {"seconds": best, "report": dumps(strip_timing(report))}
print(json.dumps(out))
"""


def run_backend(jobs: dict, repeat: int, pure: bool) -> dict:
    env = dict(os.environ)
    env["LAPINV_PURE_PYTHON"] = "1" if pure else "0"
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, json.dumps(jobs), str(repeat)], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(proc.stdout)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("jobs", nargs="*", default=DEFAULT_JOBS, help="job names from jobs/ (without .json)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jobs = {name: json.loads((ROOT / "jobs" / f"{name}.json").read_text()) for name in args.jobs}

    fast = run_backend(jobs, args.repeat, pure=False)
    slow = run_backend(jobs, args.repeat, pure=True)
    print(f"{'job':40s} {fast['backend']:>10s} {slow['backend']:>10s} {'speedup':>8s}  same")
    ok = True
    for name in jobs:
        a, b = fast["results"][name], slow["results"][name]
        same = a["report"] == b["report"]
        ok &= same
        print(f"{name:40s} {a['seconds']:10.4f} {b['seconds']:10.4f} {b['seconds'] / a['seconds']:8.2f}  {same}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
