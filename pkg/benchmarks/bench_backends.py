"""Time the same exact workload under each rational backend.

Usage: python3 benchmarks/bench_backends.py [--repeat N]

Each backend runs in a fresh interpreter because the backend is fixed at
import time through GENCOK_BACKEND.
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, sys, time
from gencok import BACKEND
from gencok.catalog import catalog_get, catalog_list
from gencok.cli.report import analyze
from gencok.constructions import cokahler_triple, product_J1, product_J2
from gencok.frame import product_context
from gencok.structures import check_gcx

def triples():
    for i, _ in catalog_list():
        e = catalog_get(i)
        if e.kind == "gacm":
            yield e.payload
        elif e.kind == "classical_acm":
            yield cokahler_triple(e.payload)

t0 = time.perf_counter()
for i, _ in catalog_list():
    e = catalog_get(i)
    analyze(e.kind, e.payload, None, i)
ts = list(triples())
for a in ts:
    for b in ts:
        pc = product_context(a.frame, b.frame)
        check_gcx(product_J1(a.base, b.base, pc))
        product_J2(a, b, pc)
print(json.dumps({"backend": BACKEND, "seconds": time.perf_counter() - t0}))
"""


def run(backend: str) -> dict:
    env = dict(os.environ, GENCOK_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", WORKLOAD], env=env, capture_output=True, text=True)
    if out.returncode:
        return {"backend": backend, "error": out.stderr.strip().splitlines()[-1]}
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    for backend in ("gmpy2", "fraction"):
        runs = [run(backend) for _ in range(args.repeat)]
        if "error" in runs[0]:
            print(f"{backend:<9} unavailable: {runs[0]['error']}")
            continue
        best = min(r["seconds"] for r in runs)
        print(f"{backend:<9} best of {args.repeat}: {best:.3f}s")


if __name__ == "__main__":
    main()
