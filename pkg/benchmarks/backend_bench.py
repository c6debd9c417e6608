"""Compare the numba-jitted kernels against the pure-numpy fallback.

Runs the same trajectory in two subprocesses, one per backend (selected
via STARTEBD_NUMBA), warming the JIT before timing so compile time is
excluded.  Usage:

    python3 benchmarks/backend_bench.py [--n-modes 16] [--fock-dim 4]
                                        [--t-final 0.25] [--beta 0.0]
"""

import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json
import sys
import time

from startebd import kernels
from startebd.linalg import TruncationPolicy
from startebd.model import ModelConfig, SimilarityGenerator
from startebd.trotter import EvolutionConfig, run

params = json.loads(sys.argv[1])
kernels.warmup()
cfg = ModelConfig(n_modes=params["n_modes"], fock_dim=params["fock_dim"])
gen = SimilarityGenerator(beta=params["beta"])
evo = EvolutionConfig(
    t_final=params["t_final"], dt=0.005, policy=TruncationPolicy(1e-5), record_stride=10
)
t0 = time.perf_counter()
rec = run(cfg, gen, evo)
elapsed = time.perf_counter() - t0
print(json.dumps({
    "numba": kernels.NUMBA_ENABLED,
    "seconds": elapsed,
    "max_bond": int(rec.max_bond.max()),
    "final_sz": float(rec.sz_recovered[-1]),
    "final_seff": float(rec.seff[-1]),
}))
"""


def time_backend(enabled: bool, params: dict) -> dict:
    env = dict(os.environ, STARTEBD_NUMBA="1" if enabled else "0")
    out = subprocess.run(
        [sys.executable, "-c", CHILD, json.dumps(params)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-modes", type=int, default=16)
    parser.add_argument("--fock-dim", type=int, default=4)
    parser.add_argument("--t-final", type=float, default=0.25)
    parser.add_argument("--beta", type=float, default=0.0)
    args = parser.parse_args()
    params = {
        "n_modes": args.n_modes,
        "fock_dim": args.fock_dim,
        "t_final": args.t_final,
        "beta": args.beta,
    }
    print(f"workload: {params}")
    results = {}
    for enabled, label in ((False, "numpy"), (True, "numba")):
        r = time_backend(enabled, params)
        if r["numba"] != enabled:
            print(f"warning: requested backend {label} but got numba={r['numba']}")
        results[label] = r
        print(
            f"{label:>6}: {r['seconds']:7.2f} s   max_bond={r['max_bond']}   "
            f"final_sz={r['final_sz']:+.6f}   final_seff={r['final_seff']:.4f}"
        )
    same = (
        results["numpy"]["final_sz"] == results["numba"]["final_sz"]
        and results["numpy"]["final_seff"] == results["numba"]["final_seff"]
    )
    speedup = results["numpy"]["seconds"] / results["numba"]["seconds"]
    print(f"speedup (numpy/numba): {speedup:.2f}x   bit-identical observables: {same}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
