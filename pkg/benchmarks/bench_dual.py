"""Compare the compiled dual-number kernel with the pure-Python fallback.

Two measurements:

* a micro benchmark evaluating a rational polynomial in three seeded variables,
  run in-process on both classes;
* an end-to-end ``mlh verify`` of the light-cone instance, run in two
  subprocesses with and without ``MLH_PURE_PYTHON=1``.

Usage: python3 benchmarks/bench_dual.py [--repeat N] [--samples N]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import tempfile
import timeit

from mlh.harness.instances import light_cone_instance
from mlh.scalar import HAVE_EXTENSION, Dual, FloatDual, seed_variables


def _poly(x, y, z):
    return 3 * x * x * y - x / (2 + y * y) + z ** 3 - 1.5 * x * z + 2.0 / (3 + x * x)


def micro(cls, repeat: int) -> float:
    xs = seed_variables([0.3, -1.2, 0.7], cls, 0.0, 1.0)
    timer = timeit.Timer(lambda: _poly(*xs))
    return min(timer.repeat(repeat=5, number=repeat)) / repeat


def end_to_end(pure: bool, samples: int) -> float:
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(light_cone_instance(samples=samples), fh)
        path = fh.name
    env = dict(os.environ)
    if pure:
        env["MLH_PURE_PYTHON"] = "1"
    else:
        env.pop("MLH_PURE_PYTHON", None)
    try:
        out = subprocess.run([sys.executable, "-m", "mlh.harness.cli", "verify", path, "--format", "json"],
                             capture_output=True, text=True, env=env, check=False)
    finally:
        os.unlink(path)
    data = json.loads(out.stdout)
    if data["exit_code"] != 0:
        raise SystemExit(f"verify failed: {data['status']}")
    return data["timing"]["seconds"]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20000)
    ap.add_argument("--samples", type=int, default=20)
    args = ap.parse_args()

    print(f"compiled extension available: {HAVE_EXTENSION}")
    t_py = micro(Dual, args.repeat)
    print(f"micro  pure Dual : {t_py * 1e6:8.2f} us/eval")
    if HAVE_EXTENSION:
        t_c = micro(FloatDual, args.repeat)
        print(f"micro  CDual     : {t_c * 1e6:8.2f} us/eval  (x{t_py / t_c:.1f})")

    e_py = end_to_end(True, args.samples)
    print(f"verify pure      : {e_py:8.3f} s")
    if HAVE_EXTENSION:
        e_c = end_to_end(False, args.samples)
        print(f"verify compiled  : {e_c:8.3f} s  (x{e_py / e_c:.2f})")


if __name__ == "__main__":
    main()
