"""Compare the compiled and pure-Python kernel backends.

Micro-benchmarks run each kernel over every topology on up to ``--points``
points in-process with both backends. ``--sweep`` also times a full
classification sweep in subprocesses, once per backend (BTDSLAB_PURE=1
forces the fallback).
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time

from btdslab import kernels
from btdslab.fintop import enumerate_topologies

SWEEP_SNIPPET = (
    "from btdslab.lab.config import SweepConfig\n"
    "from btdslab.lab.sweep import classify_all\n"
    "classify_all(SweepConfig(min_points={n}, max_points={n}))\n"
)


def _workload(points: int):
    tops = [t for n in range(1, points + 1) for t in enumerate_topologies(n)]
    return [(list(t.min_nbhd), list(t.opens), t.full) for t in tops]


def _run(impl, work, repeat: int) -> dict[str, float]:
    timings = {}
    for name, fn in (
        ("enumerate_opens", lambda mn, opens, full: impl.enumerate_opens(mn)),
        ("closure", lambda mn, opens, full: [impl.closure(mn, a) for a in range(full + 1)]),
        ("is_open", lambda mn, opens, full: [impl.is_open(mn, a) for a in range(full + 1)]),
        ("irredundant_covers", lambda mn, opens, full: impl.irredundant_covers([u for u in opens if u], full)),
        ("continuity_witness", lambda mn, opens, full: impl.continuity_witness(mn, opens, list(range(len(mn))))),
    ):
        start = time.perf_counter()
        for _ in range(repeat):
            for mn, opens, full in work:
                fn(mn, opens, full)
        timings[name] = time.perf_counter() - start
    return timings


def micro(points: int = 3, repeat: int = 20) -> dict[str, dict[str, float]]:
    work = _workload(points)
    return {name: _run(impl, work, repeat) for name, impl in kernels.available_backends().items()}


def sweep(n: int = 3) -> dict[str, float]:
    out = {}
    for name, pure in (("python", "1"), ("default", "0")):
        env = dict(os.environ, BTDSLAB_PURE=pure)
        start = time.perf_counter()
        subprocess.run([sys.executable, "-c", SWEEP_SNIPPET.format(n=n)], env=env, check=True)
        out[name] = time.perf_counter() - start
    return out


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--points", type=int, default=3)
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--sweep", action="store_true", help="also time a full classification sweep")
    args = ap.parse_args(argv)
    result: dict = {"default_backend": kernels.BACKEND, "micro": micro(args.points, args.repeat)}
    if args.sweep:
        result["sweep_seconds"] = sweep(args.points)
    print(json.dumps(result, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
