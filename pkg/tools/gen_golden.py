#!/usr/bin/env python3
"""Regenerate the frozen golden files used by the regression tests.

Run from the repository root:

    python3 tools/gen_golden.py

Writes tests/golden/ellipse_sweep.json and
tests/golden/ratio_corpus.json.  The test suite reads the
configuration blocks out of these files and re-runs the exact same
computations, so config and frozen values cannot drift apart.
"""

import json
import os
import sys
import time

import numpy as np

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, os.path.join(ROOT, "tests"))

from bernbound import (boundary_point, ellipse, solve_map_pair, verify_ratio)
from bernbound.extremal import sharpness_sweep

import helpers

GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")

# Calibrated demonstration config for the ellipse sharpness sweep.  The
# eight base poles sit on a 0.75-scaled copy of the ellipse, angularly
# spread so the transplanted partial-fraction coefficients stay small;
# zeta0 sits on the far side of the curve from the anchor point, close
# enough that the principal-part re-expansion stays well conditioned but
# far enough that the outer normal-derivative sum never dominates.
SWEEP_CONFIG = {
    "a": 1.2,
    "b": 0.8,
    "t": 0.4,
    "ring_scale": 0.75,
    "ring_count": 8,
    "ring_phase": 0.3,
    "zeta0": [-3.0, 1.2],
    "n_list": [5, 10, 20, 40],
    "policy": "cycle_list",
    "n20_low": 0.9,
}

CORPUS_CONFIG = {
    "a": 1.2,
    "b": 0.8,
    "t": 0.4,
    "seed": helpers.DEFAULT_SEED,
    "size": helpers.CORPUS_SIZE,
    "max_order": helpers.CORPUS_MAX_ORDER,
    "interior": [[p.real, p.imag] for p in helpers.CORPUS_INTERIOR],
    "exterior": [[p.real, p.imag] for p in helpers.CORPUS_EXTERIOR],
}


def gen_sweep():
    cfg = SWEEP_CONFIG
    curve = ellipse(cfg["a"], cfg["b"])
    u0 = boundary_point(curve, cfg["t"])
    pair = solve_map_pair(curve, u0)
    zeta0 = complex(*cfg["zeta0"])
    t0 = time.perf_counter()
    rows = sharpness_sweep(curve, pair, u0, helpers.sweep_interior_poles(cfg),
                           zeta0, cfg["n_list"], policy=cfg["policy"])
    wall = time.perf_counter() - t0
    table = [{"n": r.n, "N6": r.n_interp, "r_n": r.ratio, "bound": r.bound,
              "sup_norm": r.sup, "deriv_mod": r.deriv_mod, "flags": r.flags}
             for r in rows]
    payload = {"config": cfg, "table": table}
    path = os.path.join(GOLDEN_DIR, "ellipse_sweep.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    print(f"wrote {path}  ({wall:.1f}s)")
    for row in table:
        print(f"  n={row['n']:3d} N6={row['N6']:3d} r_n={row['r_n']:.9f}")


def gen_corpus():
    cfg = CORPUS_CONFIG
    curve = ellipse(cfg["a"], cfg["b"])
    u0 = boundary_point(curve, cfg["t"])
    pair = solve_map_pair(curve, u0)
    rng = np.random.default_rng(cfg["seed"])
    items = []
    t0 = time.perf_counter()
    for _ in range(cfg["size"]):
        f, orders = helpers.random_corpus_function(rng)
        rec = verify_ratio(f, curve, u0, pair)
        items.append({"orders": orders, "ratio": rec.ratio,
                      "rough_ratio": rec.rough_ratio})
    wall = time.perf_counter() - t0
    max_ratio = max(item["ratio"] for item in items)
    max_rough = max(item["rough_ratio"] for item in items)
    payload = {"config": cfg, "max_ratio": max_ratio,
               "max_rough_ratio": max_rough, "items": items}
    path = os.path.join(GOLDEN_DIR, "ratio_corpus.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")
    print(f"wrote {path}  ({wall:.1f}s)")
    print(f"  max ratio       = {max_ratio:.9f}")
    print(f"  max rough ratio = {max_rough:.9f}")


def main():
    os.makedirs(GOLDEN_DIR, exist_ok=True)
    gen_sweep()
    gen_corpus()


if __name__ == "__main__":
    main()
